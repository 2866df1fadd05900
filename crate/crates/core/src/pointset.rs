//! Dense subsets of F_p^d and their set algebra.

use std::fmt::Write as _;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldMatrix};

/// A subset of F_p^d stored as one bit per point.
#[derive(Clone, PartialEq, Eq)]
pub struct PointSet {
    ctx: FieldContext,
    bits: BitSet,
    len: usize,
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointSet")
            .field("ctx", &self.ctx)
            .field("len", &self.len)
            .finish()
    }
}

impl PointSet {
    pub fn empty(ctx: &FieldContext) -> Self {
        Self {
            ctx: ctx.clone(),
            bits: BitSet::new(ctx.size()),
            len: 0,
        }
    }

    pub fn full(ctx: &FieldContext) -> Self {
        Self {
            ctx: ctx.clone(),
            bits: BitSet::full(ctx.size()),
            len: ctx.size(),
        }
    }

    pub fn from_bits(ctx: &FieldContext, bits: BitSet) -> Self {
        assert_eq!(bits.len(), ctx.size());
        let len = bits.count_ones();
        Self {
            ctx: ctx.clone(),
            bits,
            len,
        }
    }

    /// Build from point indices; duplicates collapse.
    pub fn from_indices(ctx: &FieldContext, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = BitSet::new(ctx.size());
        for i in indices {
            bits.insert(i);
        }
        Self::from_bits(ctx, bits)
    }

    /// Build from coordinate tuples; duplicates collapse.
    pub fn from_points<P: AsRef<[u64]>>(
        ctx: &FieldContext,
        points: impl IntoIterator<Item = P>,
    ) -> Result<Self> {
        let mut bits = BitSet::new(ctx.size());
        for pt in points {
            bits.insert(ctx.index(pt.as_ref())?);
        }
        Ok(Self::from_bits(ctx, bits))
    }

    /// All points whose coordinates satisfy `pred`.
    pub fn from_predicate(ctx: &FieldContext, mut pred: impl FnMut(&[u64]) -> bool) -> Self {
        let mut bits = BitSet::new(ctx.size());
        for idx in 0..ctx.size() {
            if pred(&ctx.point(idx)) {
                bits.insert(idx);
            }
        }
        Self::from_bits(ctx, bits)
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.ctx.size()
    }

    #[inline]
    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn contains(&self, coords: &[u64]) -> bool {
        self.ctx
            .index(coords)
            .map(|i| self.bits.contains(i))
            .unwrap_or(false)
    }

    /// Member indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        self.indices().map(|i| self.ctx.point(i))
    }

    /// Indicator as a dense real table.
    pub fn indicator(&self) -> Vec<f64> {
        (0..self.ctx.size())
            .map(|i| if self.bits.contains(i) { 1.0 } else { 0.0 })
            .collect()
    }

    fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_indices(&self.ctx, self.indices().map(f))
    }

    /// `{-x : x in S}`.
    pub fn negate(&self) -> Self {
        self.map_indices(|i| self.ctx.neg_idx(i))
    }

    /// `{x + v : x in S}`.
    pub fn translate(&self, v: &[u64]) -> Result<Self> {
        let v = self.ctx.index(v)?;
        Ok(self.translate_index(v))
    }

    pub fn translate_index(&self, v: usize) -> Self {
        self.map_indices(|i| self.ctx.add_idx(i, v))
    }

    /// `{T x : x in S}` for invertible `T`.
    pub fn linear_image(&self, t: &FieldMatrix) -> Result<Self> {
        if t.order() != self.ctx.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ctx.dim(),
                got: t.order(),
            });
        }
        if t.det(&self.ctx) == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(self.map_indices(|i| {
            let image = t.apply(&self.ctx, &self.ctx.point(i));
            self.ctx.index_unchecked(&image)
        }))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Self::from_bits(&self.ctx, bits))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Self::from_bits(&self.ctx, bits))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Ok(Self::from_bits(&self.ctx, bits))
    }

    pub fn complement(&self) -> Self {
        Self::from_bits(&self.ctx, self.bits.complement())
    }

    /// `S = -S`.
    pub fn is_symmetric(&self) -> bool {
        self.indices()
            .all(|i| self.bits.contains(self.ctx.neg_idx(i)))
    }

    /// Parse the text format: a header line `p d`, then one point per line
    /// as `d` whitespace-separated integers. Lines starting with `#` and
    /// blank lines are skipped. Duplicate points are an error.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing \"p d\" header".into(),
        })?;
        let nums = parse_numbers(hline, header)?;
        let [p, d] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                message: format!("header must be \"p d\", got {header:?}"),
            });
        };
        let ctx = FieldContext::new(p, d as usize).map_err(|e| Error::Parse {
            line: hline,
            message: e.to_string(),
        })?;
        let mut bits = BitSet::new(ctx.size());
        for (line, body) in lines {
            let coords = parse_numbers(line, body)?;
            let idx = ctx.index(&coords).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
            if !bits.insert(idx) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate point {body:?}"),
                });
            }
        }
        Ok(Self::from_bits(&ctx, bits))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.ctx.p(), self.ctx.dim());
        for pt in self.points() {
            let row: Vec<String> = pt.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

fn parse_numbers(line: usize, body: &str) -> Result<Vec<u64>> {
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("not a nonnegative integer: {tok:?}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(p: u64, t: u64) -> PointSet {
        let ctx = FieldContext::new(p, 2).unwrap();
        PointSet::from_predicate(&ctx, |x| (x[0] * x[0] + x[1] * x[1]) % p == t % p)
    }

    #[test]
    fn symmetry_checks() {
        assert!(circle(5, 1).is_symmetric());
        let ctx = FieldContext::new(5, 2).unwrap();
        let parabola = PointSet::from_predicate(&ctx, |x| x[1] == x[0] * x[0] % 5);
        assert!(parabola.contains(&[1, 1]));
        assert!(!parabola.contains(&[4, 4]));
        assert!(!parabola.is_symmetric());
    }

    #[test]
    fn translation_and_negation() {
        let s = circle(7, 3);
        let t = s.translate(&[2, 5]).unwrap();
        assert_eq!(t.len(), s.len());
        for x in s.points() {
            assert!(t.contains(&[(x[0] + 2) % 7, (x[1] + 5) % 7]));
        }
        assert_eq!(s.negate().negate(), s);
        assert!(s.translate(&[7, 0]).is_err());
    }

    #[test]
    fn linear_image_requires_invertible() {
        let s = circle(7, 1);
        let ctx = s.context().clone();
        let t = FieldMatrix::from_rows(&ctx, &[vec![1, 2], vec![0, 3]]).unwrap();
        let img = s.linear_image(&t).unwrap();
        assert_eq!(img.len(), s.len());
        for x in s.points() {
            assert!(img.contains(&t.apply(&ctx, &x)));
        }
        let sing = FieldMatrix::from_rows(&ctx, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.linear_image(&sing).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn boolean_algebra() {
        let a = circle(5, 1);
        let b = circle(5, 4);
        let u = a.union(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(u.len() + i.len(), a.len() + b.len());
        assert_eq!(a.difference(&a).unwrap().len(), 0);
        assert_eq!(a.union(&a.complement()).unwrap().len(), 25);
        let other = circle(7, 1);
        assert_eq!(a.union(&other).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn text_round_trip() {
        let s = circle(5, 1);
        let parsed = PointSet::parse_text(&s.to_text()).unwrap();
        assert_eq!(parsed, s);
        let with_comments = "# circle\n5 2\n# points\n0 1\n\n1 0\n";
        assert_eq!(PointSet::parse_text(with_comments).unwrap().len(), 2);
    }

    #[test]
    fn text_errors_name_the_line() {
        let dup = "5 2\n0 1\n1 0\n0 1\n";
        assert_eq!(
            PointSet::parse_text(dup).unwrap_err(),
            Error::Parse {
                line: 4,
                message: "duplicate point \"0 1\"".into()
            }
        );
        assert!(matches!(
            PointSet::parse_text("5 2\n0 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PointSet::parse_text("5 2\n0 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PointSet::parse_text("6 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PointSet::parse_text("5 2\nx 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
