//! Explicit shapes: spheres, paraboloids, plane conics, polynomial graphs
//! and the symmetrized parabola, plus reduction of plane conics to
//! canonical form.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldMatrix};
use crate::pointset::PointSet;
use crate::sums;

/// `f(x, y) = A x^2 + B xy + C y^2 + D x + E y + F` over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpec {
    ctx: FieldContext,
    coeffs: [u64; 6],
    det2: u64,
    det3: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticClass {
    pub smooth: bool,
    pub degenerate_quadratic_part: bool,
}

impl QuadraticSpec {
    /// Coefficients in the order `A, B, C, D, E, F`; negative values are
    /// reduced mod p.
    pub fn new(ctx: &FieldContext, coeffs: [i64; 6]) -> Result<Self> {
        if ctx.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                family: "conic",
                required: 2,
            });
        }
        let c = coeffs.map(|v| ctx.reduce(v));
        let [a, b, cc, d, e, _] = c;
        if a == 0 && b == 0 && cc == 0 {
            return Err(Error::NotQuadratic);
        }
        // f in F[x] or f in F[y]
        if (b == 0 && cc == 0 && e == 0) || (a == 0 && b == 0 && d == 0) {
            return Err(Error::SingleVariable);
        }
        let h = ctx.half();
        let m3 = FieldMatrix::from_rows(
            ctx,
            &[
                vec![a, ctx.mul(b, h), ctx.mul(d, h)],
                vec![ctx.mul(b, h), cc, ctx.mul(e, h)],
                vec![ctx.mul(d, h), ctx.mul(e, h), c[5]],
            ],
        )?;
        let det3 = m3.det(ctx);
        let det2 = ctx.sub(ctx.mul(a, cc), ctx.mul(ctx.mul(b, b), ctx.inv(4).expect("p odd")));
        Ok(Self {
            ctx: ctx.clone(),
            coeffs: c,
            det2,
            det3,
        })
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> [u64; 6] {
        self.coeffs
    }

    /// Determinant of the bordered 3x3 matrix.
    pub fn det3(&self) -> u64 {
        self.det3
    }

    /// Determinant of the quadratic part `[[A, B/2], [B/2, C]]`.
    pub fn det2(&self) -> u64 {
        self.det2
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let ctx = &self.ctx;
        let [a, b, c, d, e, f] = self.coeffs;
        let terms = [
            ctx.mul(a, ctx.mul(x, x)),
            ctx.mul(b, ctx.mul(x, y)),
            ctx.mul(c, ctx.mul(y, y)),
            ctx.mul(d, x),
            ctx.mul(e, y),
            f,
        ];
        terms.into_iter().fold(0, |acc, t| ctx.add(acc, t))
    }

    pub fn classify(&self) -> QuadraticClass {
        QuadraticClass {
            smooth: self.det3 != 0,
            degenerate_quadratic_part: self.det2 == 0,
        }
    }

    /// Matrix of the quadratic part.
    fn quadratic_matrix(&self) -> FieldMatrix {
        let ctx = &self.ctx;
        let [a, b, c, ..] = self.coeffs;
        let hb = ctx.mul(b, ctx.half());
        FieldMatrix::from_rows(ctx, &[vec![a, hb], vec![hb, c]]).expect("2x2")
    }

    /// `w = -1/2 M^{-1} (D, E)`, the center of a conic with invertible
    /// quadratic part.
    pub fn center(&self) -> Option<[u64; 2]> {
        let ctx = &self.ctx;
        let m_inv = self.quadratic_matrix().inverse(ctx).ok()?;
        let [.., d, e, _] = self.coeffs;
        let v = m_inv.apply(ctx, &[d, e]);
        let s = ctx.neg(ctx.half());
        Some([ctx.mul(s, v[0]), ctx.mul(s, v[1])])
    }

    /// Reduce to `Y = X^2` (degenerate quadratic part) or
    /// `a X^2 + b Y^2 + c = 0` (invertible quadratic part) by an invertible
    /// affine change of variables. The quadratic part is diagonalized by
    /// congruence.
    pub fn reduce(&self) -> Result<CanonicalForm> {
        let ctx = &self.ctx;
        let [a0, b0, c0, d0, e0, f0] = self.coeffs;
        let h = ctx.half();

        // Rows of `lin` express the new coordinates (x', y') in terms of (x, y),
        // chosen so that Q(x, y) = a x'^2 + b y'^2.
        let (mut lin, mut a, mut b) = if a0 != 0 {
            let k = ctx.mul(b0, ctx.inv(ctx.mul(2, a0)).expect("A != 0"));
            let b = ctx.mul(self.det2, ctx.inv(a0).expect("A != 0"));
            ([[1, k], [0, 1]], a0, b)
        } else if c0 != 0 {
            let k = ctx.mul(b0, ctx.inv(ctx.mul(2, c0)).expect("C != 0"));
            let a = ctx.mul(self.det2, ctx.inv(c0).expect("C != 0"));
            ([[1, 0], [k, 1]], a, c0)
        } else {
            // B xy = B (x'^2 - y'^2) with x = x' + y', y = x' - y'
            ([[h, h], [h, ctx.neg(h)]], b0, ctx.neg(b0))
        };

        if self.det2 != 0 {
            let w = self.center().expect("invertible quadratic part");
            let c = self.eval(w[0], w[1]);
            if c == 0 {
                return Err(Error::DegenerateConic);
            }
            let linear = FieldMatrix::from_rows(ctx, &[lin[0].to_vec(), lin[1].to_vec()])?;
            let lw = linear.apply(ctx, &w);
            return Ok(CanonicalForm {
                kind: CanonicalKind::Diagonal { a, b, c },
                transform: AffineMap {
                    linear,
                    shift: [ctx.neg(lw[0]), ctx.neg(lw[1])],
                },
                center: Some(w),
            });
        }

        // Exactly one of a, b vanishes; put the surviving square on x'.
        if a == 0 {
            lin.swap(0, 1);
            std::mem::swap(&mut a, &mut b);
        }
        debug_assert!(a != 0 && b == 0);
        let linear = FieldMatrix::from_rows(ctx, &[lin[0].to_vec(), lin[1].to_vec()])?;
        // Linear coefficients in primed coordinates: (D', E') = P^t (D, E), P = lin^{-1}.
        let p_t = linear.inverse(ctx)?.transpose();
        let de = p_t.apply(ctx, &[d0, e0]);
        let (d1, e1) = (de[0], de[1]);
        if e1 == 0 {
            return Err(Error::DegenerateConic);
        }
        let a_inv = ctx.inv(a).expect("a != 0");
        // a x'^2 + D' x' = a X^2 - D'^2 / 4a with X = x' + D' / 2a.
        let shift_x = ctx.mul(d1, ctx.mul(h, a_inv));
        let const_term = ctx.sub(f0, ctx.mul(ctx.mul(d1, d1), ctx.mul(a_inv, ctx.inv(4).expect("p odd"))));
        // Y = -(E' y' + const) / a.
        let k = ctx.neg(ctx.mul(e1, a_inv));
        let shift_y = ctx.neg(ctx.mul(const_term, a_inv));
        let linear = FieldMatrix::from_rows(
            ctx,
            &[
                vec![linear.get(0, 0), linear.get(0, 1)],
                vec![ctx.mul(k, linear.get(1, 0)), ctx.mul(k, linear.get(1, 1))],
            ],
        )?;
        Ok(CanonicalForm {
            kind: CanonicalKind::Parabola,
            transform: AffineMap {
                linear,
                shift: [shift_x, shift_y],
            },
            center: None,
        })
    }

    /// Zero set by direct enumeration of all p^2 points.
    pub fn zero_set(&self) -> PointSet {
        PointSet::from_predicate(&self.ctx, |v| self.eval(v[0], v[1]) == 0)
    }
}

/// `v -> L v + shift` on F_p^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: FieldMatrix,
    pub shift: [u64; 2],
}

impl AffineMap {
    pub fn apply(&self, ctx: &FieldContext, v: &[u64]) -> [u64; 2] {
        let l = self.linear.apply(ctx, v);
        [ctx.add(l[0], self.shift[0]), ctx.add(l[1], self.shift[1])]
    }

    pub fn is_invertible(&self, ctx: &FieldContext) -> bool {
        self.linear.det(ctx) != 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalKind {
    /// `Y = X^2`
    Parabola,
    /// `a X^2 + b Y^2 + c = 0`
    Diagonal { a: u64, b: u64, c: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub kind: CanonicalKind,
    /// Maps original coordinates to canonical coordinates.
    pub transform: AffineMap,
    /// Center `w` when the quadratic part is invertible.
    pub center: Option<[u64; 2]>,
}

impl CanonicalForm {
    pub fn contains(&self, ctx: &FieldContext, x: u64, y: u64) -> bool {
        match self.kind {
            CanonicalKind::Parabola => y == ctx.mul(x, x),
            CanonicalKind::Diagonal { a, b, c } => {
                ctx.add(ctx.add(ctx.mul(a, ctx.mul(x, x)), ctx.mul(b, ctx.mul(y, y))), c) == 0
            }
        }
    }

    pub fn zero_set(&self, ctx: &FieldContext) -> PointSet {
        PointSet::from_predicate(ctx, |v| self.contains(ctx, v[0], v[1]))
    }
}

/// A shape family with its parameters, independent of any field.
///
/// Text form: `circle:t`, `sphere:t`, `paraboloid`, `conic:A,B,C,D,E,F`,
/// `polygraph:c0,c1,...,cn`, `sym-parabola`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CurveDescriptor {
    Sphere { t: i64 },
    Paraboloid,
    Conic { coeffs: [i64; 6] },
    PolyGraph { coeffs: Vec<i64> },
    SymmetrizedParabola,
}

impl FromStr for CurveDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadDescriptor(s.to_string());
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        let ints = |a: &str| -> Result<Vec<i64>> {
            a.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        match (name, args) {
            ("circle" | "sphere", Some(a)) => match ints(a)?[..] {
                [t] => Ok(Self::Sphere { t }),
                _ => Err(bad()),
            },
            ("paraboloid", None) => Ok(Self::Paraboloid),
            ("conic", Some(a)) => {
                let c: [i64; 6] = ints(a)?.try_into().map_err(|_| bad())?;
                Ok(Self::Conic { coeffs: c })
            }
            ("polygraph", Some(a)) => Ok(Self::PolyGraph { coeffs: ints(a)? }),
            ("sym-parabola", None) => Ok(Self::SymmetrizedParabola),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for CurveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        match self {
            Self::Sphere { t } => write!(f, "circle:{t}"),
            Self::Paraboloid => write!(f, "paraboloid"),
            Self::Conic { coeffs } => write!(f, "conic:{}", join(coeffs)),
            Self::PolyGraph { coeffs } => write!(f, "polygraph:{}", join(coeffs)),
            Self::SymmetrizedParabola => write!(f, "sym-parabola"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum CurveFamily {
    Sphere(u64),
    Paraboloid,
    Conic(QuadraticSpec),
    PolyGraph(Vec<u64>),
    SymmetrizedParabola,
}

#[derive(Clone, Debug)]
pub struct CurveHandle {
    pub family: CurveFamily,
    pub points: PointSet,
}

fn require_plane(ctx: &FieldContext, family: &'static str) -> Result<()> {
    if ctx.dim() == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension { family, required: 2 })
    }
}

/// `{x : x_1^2 + ... + x_d^2 = t}`.
pub fn sphere(ctx: &FieldContext, t: u64) -> PointSet {
    let t = t % ctx.p();
    PointSet::from_indices(ctx, (0..ctx.size()).filter(|&i| ctx.norm_idx(i) == t))
}

/// `{(x_1, ..., x_{d-1}, x_1^2 + ... + x_{d-1}^2)}`.
pub fn paraboloid(ctx: &FieldContext) -> Result<PointSet> {
    if ctx.dim() < 2 {
        return Err(Error::UnsupportedDimension {
            family: "paraboloid",
            required: 2,
        });
    }
    let d = ctx.dim();
    Ok(PointSet::from_predicate(ctx, |x| {
        let s = x[..d - 1].iter().fold(0, |acc, &c| ctx.add(acc, ctx.mul(c, c)));
        x[d - 1] == s
    }))
}

/// Graph `{(t, f(t))}` of a polynomial given constant-term-first.
pub fn poly_graph(ctx: &FieldContext, coeffs: &[u64]) -> Result<PointSet> {
    require_plane(ctx, "polygraph")?;
    let degree = sums::degree(ctx, coeffs).unwrap_or(0);
    if degree < 2 || (degree as u64).is_multiple_of(ctx.p()) {
        return Err(Error::BadDegree { degree, p: ctx.p() });
    }
    Ok(PointSet::from_indices(
        ctx,
        (0..ctx.p()).map(|t| ctx.index_unchecked(&[t, ctx.eval_poly(coeffs, t)])),
    ))
}

/// `P+ = {(x, x^2)}`.
pub fn parabola(ctx: &FieldContext) -> Result<PointSet> {
    require_plane(ctx, "parabola")?;
    Ok(PointSet::from_indices(
        ctx,
        (0..ctx.p()).map(|x| ctx.index_unchecked(&[x, ctx.mul(x, x)])),
    ))
}

/// `P = {(x, x^2)} u {(x, -x^2)}`.
pub fn symmetrized_parabola(ctx: &FieldContext) -> Result<PointSet> {
    let plus = parabola(ctx)?;
    Ok(plus.union(&plus.negate()).expect("same context"))
}

pub fn make_curve(ctx: &FieldContext, desc: &CurveDescriptor) -> Result<CurveHandle> {
    let (family, points) = match desc {
        CurveDescriptor::Sphere { t } => {
            let t = ctx.reduce(*t);
            (CurveFamily::Sphere(t), sphere(ctx, t))
        }
        CurveDescriptor::Paraboloid => (CurveFamily::Paraboloid, paraboloid(ctx)?),
        CurveDescriptor::Conic { coeffs } => {
            let spec = QuadraticSpec::new(ctx, *coeffs)?;
            spec.reduce()?;
            let pts = spec.zero_set();
            (CurveFamily::Conic(spec), pts)
        }
        CurveDescriptor::PolyGraph { coeffs } => {
            let c: Vec<u64> = coeffs.iter().map(|&v| ctx.reduce(v)).collect();
            let pts = poly_graph(ctx, &c)?;
            (CurveFamily::PolyGraph(c), pts)
        }
        CurveDescriptor::SymmetrizedParabola => {
            (CurveFamily::SymmetrizedParabola, symmetrized_parabola(ctx)?)
        }
    };
    Ok(CurveHandle { family, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(p: u64) -> FieldContext {
        FieldContext::new(p, 2).unwrap()
    }

    // Zero-set equality under the returned transform, checked point by point.
    fn assert_reduction_exact(spec: &QuadraticSpec) -> CanonicalForm {
        let ctx = spec.context();
        let form = spec.reduce().unwrap();
        assert!(form.transform.is_invertible(ctx));
        let mut image = Vec::new();
        for idx in 0..ctx.size() {
            let v = ctx.point(idx);
            let on_curve = spec.eval(v[0], v[1]) == 0;
            let [x, y] = form.transform.apply(ctx, &v);
            assert_eq!(on_curve, form.contains(ctx, x, y), "{:?} at {v:?}", spec.coeffs());
            if on_curve {
                image.push([x, y]);
            }
        }
        let mapped = PointSet::from_points(ctx, &image).unwrap();
        assert_eq!(mapped, form.zero_set(ctx));
        assert_eq!(
            matches!(form.kind, CanonicalKind::Parabola),
            spec.det2() == 0
        );
        form
    }

    #[test]
    fn classify_examples() {
        let ctx = plane(7);
        let circle = QuadraticSpec::new(&ctx, [1, 0, 1, 0, 0, -1]).unwrap();
        assert_eq!(circle.det3(), ctx.reduce(-1));
        assert_eq!(circle.det2(), 1);
        assert_eq!(
            circle.classify(),
            QuadraticClass {
                smooth: true,
                degenerate_quadratic_part: false
            }
        );
        let parab = QuadraticSpec::new(&ctx, [-1, 0, 0, 0, 1, 0]).unwrap();
        assert_eq!(parab.det2(), 0);
        assert_eq!(parab.det3(), ctx.inv(4).unwrap());
        assert_eq!(
            parab.classify(),
            QuadraticClass {
                smooth: true,
                degenerate_quadratic_part: true
            }
        );
        assert_eq!(
            QuadraticSpec::new(&ctx, [1, 0, 0, 0, 0, -1]).unwrap_err(),
            Error::SingleVariable
        );
        assert_eq!(
            QuadraticSpec::new(&ctx, [0, 0, 3, 0, 1, 0]).unwrap_err(),
            Error::SingleVariable
        );
        assert_eq!(
            QuadraticSpec::new(&ctx, [0, 0, 0, 1, 1, 0]).unwrap_err(),
            Error::NotQuadratic
        );
        assert!(QuadraticSpec::new(&FieldContext::new(7, 3).unwrap(), [1, 0, 1, 0, 0, -1]).is_err());
    }

    #[test]
    fn reduce_examples() {
        let ctx = plane(11);
        let circle = QuadraticSpec::new(&ctx, [1, 0, 1, 0, 0, -1]).unwrap();
        let form = assert_reduction_exact(&circle);
        assert_eq!(form.kind, CanonicalKind::Diagonal { a: 1, b: 1, c: 10 });
        assert_eq!(form.transform.linear, FieldMatrix::identity(2));
        assert_eq!(form.transform.shift, [0, 0]);

        // y - x^2 - 3x: a translate of the standard parabola
        let shifted = QuadraticSpec::new(&ctx, [-1, 0, 0, -3, 1, 0]).unwrap();
        let form = assert_reduction_exact(&shifted);
        assert_eq!(form.kind, CanonicalKind::Parabola);
        assert_eq!(form.transform.linear, FieldMatrix::identity(2));

        let mixed = QuadraticSpec::new(&ctx, [2, 2, 3, 0, 0, -1]).unwrap();
        let form = assert_reduction_exact(&mixed);
        assert!(matches!(form.kind, CanonicalKind::Diagonal { .. }));
        assert_eq!(form.zero_set(&ctx).len(), mixed.zero_set().len());
    }

    #[test]
    fn center_eliminates_linear_terms() {
        let ctx = plane(13);
        let spec = QuadraticSpec::new(&ctx, [3, 5, 2, 7, 1, 4]).unwrap();
        assert_ne!(spec.det2(), 0);
        let w = spec.center().unwrap();
        // f(w + u) - f(w) is a pure quadratic form in u: f(w+u) = f(w-u).
        for u in 0..ctx.size() {
            let u = ctx.point(u);
            let plus = spec.eval(ctx.add(w[0], u[0]), ctx.add(w[1], u[1]));
            let minus = spec.eval(ctx.sub(w[0], u[0]), ctx.sub(w[1], u[1]));
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn reduction_is_exact_for_many_conics() {
        let mut state = 17u64;
        let mut next = |p: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % p) as i64
        };
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = plane(p);
            let mut tested = 0;
            while tested < 60 {
                let c = [next(p), next(p), next(p), next(p), next(p), next(p)];
                let Ok(spec) = QuadraticSpec::new(&ctx, c) else { continue };
                match spec.reduce() {
                    Ok(_) => {
                        assert_reduction_exact(&spec);
                        assert!(spec.classify().smooth);
                    }
                    Err(e) => {
                        assert_eq!(e, Error::DegenerateConic);
                        assert!(!spec.classify().smooth, "{c:?}");
                    }
                }
                tested += 1;
            }
        }
    }

    #[test]
    fn degenerate_conics_rejected() {
        let ctx = plane(5);
        // x^2 + y^2 = 0 with -1 a square mod 5: two lines
        let lines = CurveDescriptor::Conic { coeffs: [1, 0, 1, 0, 0, 0] };
        assert_eq!(make_curve(&ctx, &lines).unwrap_err(), Error::DegenerateConic);
        // (x + y)^2 + 1: quadratic part degenerate, no term in the kernel direction
        let parallel = CurveDescriptor::Conic { coeffs: [1, 2, 1, 0, 0, 1] };
        assert_eq!(make_curve(&ctx, &parallel).unwrap_err(), Error::DegenerateConic);
    }

    #[test]
    fn curve_examples() {
        let c5 = plane(5);
        let circle = make_curve(&c5, &"circle:1".parse().unwrap()).unwrap();
        assert_eq!(circle.points.len(), 4);
        let c7 = plane(7);
        let cubic = make_curve(&c7, &"polygraph:0,0,0,1".parse().unwrap()).unwrap();
        assert_eq!(cubic.points.len(), 7);
        let c11 = plane(11);
        let sym = make_curve(&c11, &"sym-parabola".parse().unwrap()).unwrap();
        assert_eq!(sym.points.len(), 21);
        assert!(sym.points.is_symmetric());
        let plus = parabola(&c11).unwrap();
        let minus = PointSet::from_predicate(&c11, |v| v[1] == c11.neg(c11.mul(v[0], v[0])));
        assert_eq!(sym.points, plus.union(&minus).unwrap());

        assert_eq!(
            make_curve(&c7, &"polygraph:1,2,0,0,0,0,0,1".parse().unwrap()).unwrap_err(),
            Error::BadDegree { degree: 7, p: 7 }
        );
        assert_eq!(
            make_curve(&c7, &"polygraph:1,2".parse().unwrap()).unwrap_err(),
            Error::BadDegree { degree: 1, p: 7 }
        );
        let c5_3 = FieldContext::new(5, 3).unwrap();
        let sph = make_curve(&c5_3, &"sphere:2".parse().unwrap()).unwrap();
        assert!(sph.points.indices().all(|i| c5_3.norm_idx(i) == 2));
        let par = paraboloid(&c5_3).unwrap();
        assert_eq!(par.len(), 25);
    }

    #[test]
    fn descriptors_parse_and_print() {
        for s in ["circle:3", "paraboloid", "conic:1,2,3,-4,5,6", "polygraph:0,1,1", "sym-parabola"] {
            let d: CurveDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert_eq!("sphere:2".parse::<CurveDescriptor>().unwrap(), CurveDescriptor::Sphere { t: 2 });
        for bad in ["circle", "circle:x", "conic:1,2", "hyperbola:1", "paraboloid:3"] {
            assert!(bad.parse::<CurveDescriptor>().is_err(), "{bad}");
        }
    }

    #[test]
    fn conic_point_counts() {
        let mut state = 99u64;
        let mut next = |p: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % p) as i64
        };
        for p in [5u64, 7, 11, 13] {
            let ctx = plane(p);
            let mut done = 0;
            while done < 100 {
                let c = [next(p), next(p), next(p), next(p), next(p), next(p)];
                let Ok(spec) = QuadraticSpec::new(&ctx, c) else { continue };
                let class = spec.classify();
                if !class.smooth || class.degenerate_quadratic_part {
                    continue;
                }
                let n = spec.zero_set().len() as u64;
                assert!((p - 1..=p + 1).contains(&n), "p={p} {c:?} -> {n}");
                done += 1;
            }
        }
    }
}
