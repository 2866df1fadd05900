//! Exact edge, triple and intersection counts in the graph `x ~ y iff
//! x - y in S`, their Fourier cross-checks, pruning, and the rhombus and
//! cube constructions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::fourier::transform_real;
use crate::pointset::PointSet;

fn same_context(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.context() == b.context() {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

/// `K = |S| / q^{d-1}`.
pub fn density_constant(s: &PointSet) -> f64 {
    let ctx = s.context();
    s.len() as f64 / ctx.q().powi(ctx.dim() as i32 - 1)
}

fn log_factor(q: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        1.0
    } else {
        q.ln().powf(gamma)
    }
}

/// `Delta(E) = {||x - y|| : x, y in E}`, sorted.
pub fn distance_set(e: &PointSet) -> Result<Vec<u64>> {
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let ctx = e.context();
    let pts: Vec<usize> = e.indices().collect();
    let mut diffs = BitSet::new(ctx.size());
    for &x in &pts {
        for &y in &pts {
            diffs.insert(ctx.sub_idx(x, y));
        }
    }
    let mut seen = vec![false; ctx.p() as usize];
    for d in diffs.iter_ones() {
        seen[ctx.norm_idx(d) as usize] = true;
    }
    Ok((0..ctx.p()).filter(|&t| seen[t as usize]).collect())
}

/// `E*S(x) = |{y in E : x - y in S}|` at every point `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionTable {
    ctx: FieldContext,
    values: Vec<u64>,
}

impl ConvolutionTable {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, x: usize) -> u64 {
        self.values[x]
    }

    /// `sum_{x in A} E*S(x)`.
    pub fn mass_on(&self, a: &PointSet) -> u64 {
        a.indices().map(|x| self.values[x]).sum()
    }
}

pub fn convolve(e: &PointSet, s: &PointSet) -> Result<ConvolutionTable> {
    same_context(e, s)?;
    let ctx = e.context();
    let shape: Vec<usize> = s.indices().collect();
    let values = (0..ctx.size())
        .into_par_iter()
        .map(|x| {
            shape
                .iter()
                .filter(|&&d| e.contains_index(ctx.sub_idx(x, d)))
                .count() as u64
        })
        .collect();
    Ok(ConvolutionTable {
        ctx: ctx.clone(),
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeCountReport {
    /// Exact number of ordered pairs `(x, y) in E^2` with `x - y in S`.
    pub nu: u64,
    #[serde(rename = "K")]
    pub k: f64,
    pub main_term: f64,
    pub error: f64,
    pub normalized_error: f64,
    /// `q^{2d} sum_m |E^(m)|^2 S^(m)`, the same count computed on the Fourier side.
    pub fourier_nu: f64,
}

/// `q^{2d} sum_m conj(E^(m)) E^(m) S^(m)`.
pub fn fourier_edge_count(e: &PointSet, s: &PointSet) -> Result<f64> {
    same_context(e, s)?;
    let ctx = e.context();
    let eh = transform_real(ctx, &e.indicator());
    let sh = transform_real(ctx, &s.indicator());
    let total: Complex64 = eh.iter().zip(&sh).map(|(a, b)| a.norm_sqr() * b).sum();
    Ok(total.re * (ctx.size() as f64).powi(2))
}

pub fn edge_count(e: &PointSet, s: &PointSet, gamma: f64) -> Result<EdgeCountReport> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let conv = convolve(e, s)?;
    let nu = conv.mass_on(e);
    let ctx = e.context();
    let q = ctx.q();
    let k = density_constant(s);
    let en = e.len() as f64;
    let main_term = k * en * en / q;
    let error = nu as f64 - main_term;
    let scale = q.powf((ctx.dim() as f64 - 1.0) / 2.0) * log_factor(q, gamma) * en;
    let normalized_error = if scale > 0.0 { error.abs() / scale } else { 0.0 };
    Ok(EdgeCountReport {
        nu,
        k,
        main_term,
        error,
        normalized_error,
        fourier_nu: fourier_edge_count(e, s)?,
    })
}

/// `sum_{x in E} (E*S(x))^2`: triples `(x1, x2, y)` in `E^3` with
/// `x1 - y, x2 - y in S`, counted when `S` is symmetric.
pub fn triple_count(e: &PointSet, s: &PointSet) -> Result<u64> {
    let conv = convolve(e, s)?;
    Ok(e.indices().map(|x| conv.get(x).pow(2)).sum())
}

/// A nonnegative real function on F_p^d.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    ctx: FieldContext,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn new(ctx: &FieldContext, values: Vec<f64>) -> Result<Self> {
        if values.len() != ctx.size() {
            return Err(Error::DimensionMismatch {
                expected: ctx.size(),
                got: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidParameter(format!("weight {bad} is negative or not finite")));
        }
        Ok(Self {
            ctx: ctx.clone(),
            values,
        })
    }

    pub fn indicator(set: &PointSet) -> Self {
        Self {
            ctx: set.context().clone(),
            values: set.indicator(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn l2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BilinearReport {
    /// `sum_{x, y} f(x) g(y) S(x - y)`, summed directly.
    pub value: f64,
    /// The same sum as `q^{2d} sum_m conj(f^(m)) g^(m) S^(m)`.
    pub fourier_value: f64,
    pub main_term: f64,
    pub error: f64,
    /// `q^{(d-1)/2} (ln q)^gamma ||f||_2 ||g||_2`.
    pub bound: f64,
}

pub fn bilinear_form(
    f: &WeightTable,
    g: &WeightTable,
    s: &PointSet,
    gamma: f64,
) -> Result<BilinearReport> {
    if f.ctx != g.ctx || &f.ctx != s.context() {
        return Err(Error::ContextMismatch);
    }
    let ctx = s.context();
    let shape: Vec<usize> = s.indices().collect();
    let value: f64 = (0..ctx.size())
        .into_par_iter()
        .filter(|&x| f.values[x] != 0.0)
        .map(|x| {
            let g_conv: f64 = shape.iter().map(|&d| g.values[ctx.sub_idx(x, d)]).sum();
            f.values[x] * g_conv
        })
        .sum();
    let fh = transform_real(ctx, &f.values);
    let gh = transform_real(ctx, &g.values);
    let sh = transform_real(ctx, &s.indicator());
    let fourier: Complex64 = fh
        .iter()
        .zip(&gh)
        .zip(&sh)
        .map(|((a, b), c)| a.conj() * b * c)
        .sum();
    let q = ctx.q();
    let main_term = density_constant(s) / q * f.l1() * g.l1();
    Ok(BilinearReport {
        value,
        fourier_value: fourier.re * (ctx.size() as f64).powi(2),
        main_term,
        error: value - main_term,
        bound: q.powf((ctx.dim() as f64 - 1.0) / 2.0) * log_factor(q, gamma) * f.l2() * g.l2(),
    })
}

/// Distribution of `|S n (S - v)|` over nonzero shifts `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionProfile {
    /// `histogram[k]` = number of shifts `v != 0` with `|S n (S - v)| = k`.
    pub histogram: Vec<u64>,
    #[serde(rename = "max")]
    pub max_size: usize,
    /// Least shift attaining `max_size`.
    pub argmax: Vec<u64>,
    #[serde(skip)]
    pub argmax_index: usize,
    pub at_zero: usize,
}

impl IntersectionProfile {
    /// `log_p(max_size)`; `None` when every intersection is empty.
    pub fn beta(&self, p: u64) -> Option<f64> {
        (self.max_size > 0).then(|| (self.max_size as f64).ln() / (p as f64).ln())
    }
}

/// Exact `|S n (S - v)| = #{x in S : x + v in S}` for every shift `v`.
pub fn shift_intersections(s: &PointSet) -> Vec<u64> {
    let ctx = s.context();
    let pts: Vec<usize> = s.indices().collect();
    let mut counts = vec![0u64; ctx.size()];
    for &a in &pts {
        for &b in &pts {
            counts[ctx.sub_idx(b, a)] += 1;
        }
    }
    counts
}

pub fn intersection_profile(s: &PointSet) -> Result<IntersectionProfile> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let counts = shift_intersections(s);
    let (argmax_index, max_size) = counts
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, 0), |best, (v, &c)| if c as usize > best.1 { (v, c as usize) } else { best });
    let mut histogram = vec![0u64; max_size + 1];
    for &c in &counts[1..] {
        histogram[c as usize] += 1;
    }
    Ok(IntersectionProfile {
        histogram,
        max_size,
        argmax: s.context().point(argmax_index),
        argmax_index,
        at_zero: counts[0] as usize,
    })
}

/// `E_M = {x in E : E*S(x) > M}`.
pub fn prune(e: &PointSet, s: &PointSet, m: u64) -> Result<PointSet> {
    let conv = convolve(e, s)?;
    Ok(prune_with(e, &conv, m))
}

pub fn prune_with(e: &PointSet, conv: &ConvolutionTable, m: u64) -> PointSet {
    PointSet::from_indices(e.context(), e.indices().filter(|&x| conv.get(x) > m))
}

/// `E n (E - u) = {x in E : x + u in E}`.
pub fn shift_overlap(e: &PointSet, u: usize) -> PointSet {
    let ctx = e.context();
    PointSet::from_indices(ctx, e.indices().filter(|&x| e.contains_index(ctx.add_idx(x, u))))
}

fn overlap_size(e: &PointSet, u: usize) -> usize {
    let ctx = e.context();
    e.indices()
        .filter(|&x| e.contains_index(ctx.add_idx(x, u)))
        .count()
}

/// Four points with `x1 - x2 = x3 - x4 = u` and `x1 - x3 = x2 - x4 = w`,
/// both differences in `S`, and no pairwise difference equal to `+-v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhombusWitness {
    pub points: [usize; 4],
    pub u: usize,
    pub w: usize,
    pub v: usize,
}

impl RhombusWitness {
    pub fn verify(&self, e: &PointSet, s: &PointSet) -> bool {
        let ctx = e.context();
        let [x1, x2, x3, x4] = self.points;
        let diff = |a, b| ctx.sub_idx(a, b);
        let neg_v = ctx.neg_idx(self.v);
        self.points.iter().all(|&x| e.contains_index(x))
            && s.contains_index(self.u)
            && s.contains_index(self.w)
            && diff(x1, x2) == self.u
            && diff(x3, x4) == self.u
            && diff(x1, x3) == self.w
            && diff(x2, x4) == self.w
            && (0..4).all(|i| {
                (0..4).all(|j| {
                    i == j || {
                        let d = diff(self.points[i], self.points[j]);
                        d != 0 && d != self.v && d != neg_v
                    }
                })
            })
    }
}

fn require_symmetric(s: &PointSet) -> Result<()> {
    if s.is_symmetric() {
        Ok(())
    } else {
        Err(Error::NotSymmetric)
    }
}

/// Nonzero members of `S` other than those in `exclude`, ordered by
/// `|E n (E - u)|` descending, then by index.
fn pigeonhole_order(e: &PointSet, s: &PointSet, exclude: &[usize]) -> Vec<(usize, usize)> {
    let mut ranked: Vec<(usize, usize)> = s
        .indices()
        .filter(|&u| u != 0 && !exclude.contains(&u))
        .map(|u| (u, overlap_size(e, u)))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked
}

/// All rhombi with first side `u` inside `E_u = E n (E - u)`, scanning the
/// base corner `x4` in index order and then `x2`.
fn rhombi_with_side<'a>(
    e: &'a PointSet,
    s: &'a PointSet,
    u: usize,
    v: usize,
) -> impl Iterator<Item = RhombusWitness> + 'a {
    let ctx = e.context();
    let e_u = shift_overlap(e, u);
    let (nu, nv) = (ctx.neg_idx(u), ctx.neg_idx(v));
    let forbidden = [
        0,
        u,
        nu,
        v,
        nv,
        ctx.add_idx(u, v),
        ctx.add_idx(u, nv),
        ctx.add_idx(nu, v),
        ctx.add_idx(nu, nv),
    ];
    let sides: Vec<usize> = s.indices().filter(|w| !forbidden.contains(w)).collect();
    let bases: Vec<usize> = e_u.indices().collect();
    bases.into_iter().flat_map(move |y| {
        let mut tops: Vec<usize> = sides
            .iter()
            .map(|&w| ctx.add_idx(y, w))
            .filter(|&x| e_u.contains_index(x))
            .collect();
        tops.sort_unstable();
        tops.into_iter().map(move |x| RhombusWitness {
            points: [ctx.add_idx(x, u), x, ctx.add_idx(y, u), y],
            u,
            w: ctx.sub_idx(x, y),
            v,
        })
    })
}

/// Rhombus avoiding `+-v`: take the side `u in S \ {+-v}` with the largest
/// overlap `|E n (E - u)|` (least index on ties), then the first pair in
/// `E_u` whose difference lies in `S \ {0, +-u, +-v, +-u+-v}`.
pub fn find_rhombus(e: &PointSet, s: &PointSet, v: &[u64]) -> Result<RhombusWitness> {
    same_context(e, s)?;
    let ctx = e.context();
    let v = ctx.index(v)?;
    if v == 0 {
        return Err(Error::InvalidParameter("v must be nonzero".into()));
    }
    require_symmetric(s)?;
    let order = pigeonhole_order(e, s, &[v, ctx.neg_idx(v)]);
    let (u, _) = *order.first().ok_or(Error::NotFound)?;
    rhombi_with_side(e, s, u, v).next().ok_or(Error::NotFound)
}

/// Seven vertices of the cube graph `Q_3` minus one vertex: a rhombus
/// `x1..x4` in `E_v` together with `x1 + v, x2 + v, x3 + v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeWitness {
    pub v: usize,
    pub rhombus: RhombusWitness,
    /// `[x1, x2, x3, x4, x1 + v, x2 + v, x3 + v]`
    pub points: [usize; 7],
}

impl CubeWitness {
    fn from_rhombus(ctx: &FieldContext, rhombus: RhombusWitness) -> Self {
        let [x1, x2, x3, x4] = rhombus.points;
        let v = rhombus.v;
        Self {
            v,
            points: [
                x1,
                x2,
                x3,
                x4,
                ctx.add_idx(x1, v),
                ctx.add_idx(x2, v),
                ctx.add_idx(x3, v),
            ],
            rhombus,
        }
    }

    /// The nine edges, as pairs of positions in `points`.
    pub const EDGES: [(usize, usize); 9] = [
        (0, 1),
        (0, 2),
        (1, 3),
        (2, 3),
        (0, 4),
        (1, 5),
        (2, 6),
        (4, 5),
        (4, 6),
    ];

    pub fn verify(&self, e: &PointSet, s: &PointSet) -> bool {
        let ctx = e.context();
        let distinct = (0..7).all(|i| (i + 1..7).all(|j| self.points[i] != self.points[j]));
        distinct
            && self.points.iter().all(|&x| e.contains_index(x))
            && Self::EDGES.iter().all(|&(i, j)| {
                s.contains_index(ctx.sub_idx(self.points[i], self.points[j]))
                    && s.contains_index(ctx.sub_idx(self.points[j], self.points[i]))
            })
    }
}

/// Cube from the pigeonhole shift `v in S` maximizing `|E n (E - v)|`,
/// followed by [`find_rhombus`] inside `E_v`.
pub fn build_cube(e: &PointSet, s: &PointSet) -> Result<CubeWitness> {
    same_context(e, s)?;
    require_symmetric(s)?;
    let ctx = e.context();
    let (v, _) = *pigeonhole_order(e, s, &[]).first().ok_or(Error::NotFound)?;
    let e_v = shift_overlap(e, v);
    let rhombus = find_rhombus(&e_v, s, &ctx.point(v))?;
    Ok(CubeWitness::from_rhombus(ctx, rhombus))
}

/// Every cube reachable by the pigeonhole construction, in preference
/// order: shifts `v` by overlap, then sides `u` by overlap inside `E_v`,
/// then rhombus pairs in scan order. The first item equals [`build_cube`].
pub fn cube_candidates<'a>(
    e: &'a PointSet,
    s: &'a PointSet,
) -> impl Iterator<Item = CubeWitness> + 'a {
    let ctx = e.context().clone();
    pigeonhole_order(e, s, &[])
        .into_iter()
        .flat_map(move |(v, _)| {
            let e_v = shift_overlap(e, v);
            let nv = e.context().neg_idx(v);
            let sides = pigeonhole_order(&e_v, s, &[v, nv]);
            sides
                .into_iter()
                .flat_map(move |(u, _)| {
                    let e_v = e_v.clone();
                    let found: Vec<RhombusWitness> = rhombi_with_side(&e_v, s, u, v).collect();
                    found
                })
                .collect::<Vec<_>>()
        })
        .map(move |r| CubeWitness::from_rhombus(&ctx, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves;

    fn plane(p: u64) -> FieldContext {
        FieldContext::new(p, 2).unwrap()
    }

    fn lcg_set(ctx: &FieldContext, size: usize, seed: u64) -> PointSet {
        let mut state = seed | 1;
        let mut bits = BitSet::new(ctx.size());
        while bits.count_ones() < size {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            bits.insert((state >> 33) as usize % ctx.size());
        }
        PointSet::from_bits(ctx, bits)
    }

    fn brute_pairs(e: &PointSet, s: &PointSet) -> u64 {
        let ctx = e.context();
        let mut n = 0;
        for x in e.points() {
            for y in e.points() {
                let d: Vec<u64> = x.iter().zip(&y).map(|(a, b)| ctx.sub(*a, *b)).collect();
                n += s.contains(&d) as u64;
            }
        }
        n
    }

    #[test]
    fn distance_set_examples() {
        let ctx = plane(5);
        let single = PointSet::from_points(&ctx, [[2, 3]]).unwrap();
        assert_eq!(distance_set(&single).unwrap(), vec![0]);
        let two = PointSet::from_points(&ctx, [[0, 0], [1, 0]]).unwrap();
        assert_eq!(distance_set(&two).unwrap(), vec![0, 1]);
        assert_eq!(distance_set(&PointSet::full(&ctx)).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(distance_set(&PointSet::empty(&ctx)).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn convolution_examples() {
        let ctx = plane(5);
        let circle = curves::sphere(&ctx, 1);
        let full = convolve(&PointSet::full(&ctx), &circle).unwrap();
        assert!(full.values().iter().all(|&v| v == circle.len() as u64));
        let origin = PointSet::from_indices(&ctx, [0]);
        let e = lcg_set(&ctx, 9, 3);
        let ident = convolve(&e, &origin).unwrap();
        for x in 0..ctx.size() {
            assert_eq!(ident.get(x), e.contains_index(x) as u64);
        }
        let cc = convolve(&circle, &circle).unwrap();
        for x in 0..ctx.size() {
            let brute = circle
                .indices()
                .filter(|&y| circle.contains_index(ctx.sub_idx(x, y)))
                .count() as u64;
            assert_eq!(cc.get(x), brute);
        }
    }

    #[test]
    fn edge_count_examples() {
        let ctx = plane(5);
        let circle = curves::sphere(&ctx, 1);
        let full = edge_count(&PointSet::full(&ctx), &circle, 0.0).unwrap();
        assert_eq!(full.nu, 25 * circle.len() as u64);
        let e = lcg_set(&ctx, 10, 7);
        let r = edge_count(&e, &circle, 0.0).unwrap();
        assert_eq!(r.nu, brute_pairs(&e, &circle));
        assert!((r.fourier_nu - r.nu as f64).abs() <= 1e-6 * (r.nu as f64).max(1.0));
        assert_eq!(
            edge_count(&e, &PointSet::empty(&ctx), 0.0).unwrap_err(),
            Error::EmptySet
        );

        let c11 = plane(11);
        let circle = curves::sphere(&c11, 1);
        let e = lcg_set(&c11, 60, 11);
        let r = edge_count(&e, &circle, 0.0).unwrap();
        assert!(r.nu as f64 >= r.k * 60.0 * 60.0 / 22.0);
        assert!((r.fourier_nu - r.nu as f64).abs() <= 1e-6 * r.nu as f64);
    }

    #[test]
    fn triple_count_examples() {
        let ctx = plane(5);
        let circle = curves::sphere(&ctx, 1);
        let full = triple_count(&PointSet::full(&ctx), &circle).unwrap();
        assert_eq!(full, 25 * (circle.len() as u64).pow(2));
        assert_eq!(triple_count(&PointSet::empty(&ctx), &circle).unwrap(), 0);
        let e = lcg_set(&ctx, 12, 5);
        let mut brute = 0;
        for x in e.indices() {
            for a in e.indices() {
                for b in e.indices() {
                    brute += (circle.contains_index(ctx.sub_idx(x, a))
                        && circle.contains_index(ctx.sub_idx(x, b))) as u64;
                }
            }
        }
        assert_eq!(triple_count(&e, &circle).unwrap(), brute);
    }

    #[test]
    fn bilinear_examples() {
        let ctx = plane(7);
        let circle = curves::sphere(&ctx, 2);
        let e = lcg_set(&ctx, 15, 2);
        let ind = WeightTable::indicator(&e);
        let r = bilinear_form(&ind, &ind, &circle, 0.0).unwrap();
        assert_eq!(r.value, edge_count(&e, &circle, 0.0).unwrap().nu as f64);
        let zero = WeightTable::new(&ctx, vec![0.0; 49]).unwrap();
        assert_eq!(bilinear_form(&zero, &ind, &circle, 0.0).unwrap().value, 0.0);

        let mut state = 5u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 40) % 5) as f64
        };
        let f = WeightTable::new(&ctx, (0..49).map(|_| next()).collect()).unwrap();
        let g = WeightTable::new(&ctx, (0..49).map(|_| next()).collect()).unwrap();
        let mut brute = 0.0;
        for x in 0..49 {
            for y in 0..49 {
                if circle.contains_index(ctx.sub_idx(x, y)) {
                    brute += f.values()[x] * g.values()[y];
                }
            }
        }
        let r = bilinear_form(&f, &g, &circle, 0.0).unwrap();
        assert_eq!(r.value, brute);
        assert!((r.fourier_value - brute).abs() <= 1e-6 * brute);
        assert!(WeightTable::new(&ctx, vec![-1.0; 49]).is_err());
        assert!(WeightTable::new(&ctx, vec![1.0; 3]).is_err());
    }

    #[test]
    fn intersection_profile_examples() {
        let ctx = plane(11);
        let circle = curves::sphere(&ctx, 1);
        let prof = intersection_profile(&circle).unwrap();
        assert!(prof.max_size <= 2);
        assert_eq!(prof.histogram.iter().sum::<u64>(), 120);
        assert_eq!(prof.at_zero, circle.len());

        let sym = curves::symmetrized_parabola(&ctx).unwrap();
        assert!(intersection_profile(&sym).unwrap().max_size <= 6);
        let quartic = curves::poly_graph(&ctx, &[3, 0, 1, 5, 2]).unwrap();
        assert!(intersection_profile(&quartic).unwrap().max_size <= 3);

        // against shifted-membership counting
        for s in [&circle, &sym] {
            let prof = intersection_profile(s).unwrap();
            let mut best = (0, 0);
            for v in 1..ctx.size() {
                let shifted = s.translate_index(ctx.neg_idx(v));
                let n = s.bits().intersection_count(shifted.bits());
                if n > best.1 {
                    best = (v, n);
                }
            }
            assert_eq!((prof.argmax_index, prof.max_size), best);
        }
        assert_eq!(intersection_profile(&PointSet::empty(&ctx)).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn prune_examples() {
        let ctx = plane(11);
        let circle = curves::sphere(&ctx, 1);
        let full = PointSet::full(&ctx);
        assert_eq!(prune(&full, &circle, 0).unwrap(), full);
        assert!(prune(&full, &circle, circle.len() as u64).unwrap().is_empty());

        let e = lcg_set(&ctx, 70, 19);
        let m = 7 + 2 * intersection_profile(&circle).unwrap().max_size as u64;
        let pruned = prune(&e, &circle, m).unwrap();
        for x in e.indices() {
            let nbrs = e
                .indices()
                .filter(|&y| circle.contains_index(ctx.sub_idx(x, y)))
                .count() as u64;
            assert_eq!(pruned.contains_index(x), nbrs > m);
        }
    }

    #[test]
    fn rhombus_examples() {
        let ctx = plane(5);
        let circle = curves::sphere(&ctx, 1);
        let full = PointSet::full(&ctx);
        let r = find_rhombus(&full, &circle, &[2, 2]).unwrap();
        let pts: Vec<Vec<u64>> = r.points.iter().map(|&i| ctx.point(i)).collect();
        assert_eq!(pts, vec![vec![1, 1], vec![0, 1], vec![1, 0], vec![0, 0]]);
        assert_eq!(ctx.point(r.u), vec![1, 0]);
        assert_eq!(ctx.point(r.w), vec![0, 1]);
        assert!(r.verify(&full, &circle));

        assert_eq!(
            find_rhombus(&full, &PointSet::empty(&ctx), &[1, 0]).unwrap_err(),
            Error::NotFound
        );
        let parabola = curves::parabola(&ctx).unwrap();
        assert_eq!(
            find_rhombus(&full, &parabola, &[1, 0]).unwrap_err(),
            Error::NotSymmetric
        );

        let c7 = plane(7);
        let circle = curves::sphere(&c7, 1);
        let full = PointSet::full(&c7);
        for v in [1usize, 8, 20, 48] {
            let r = find_rhombus(&full, &circle, &c7.point(v)).unwrap();
            assert!(r.verify(&full, &circle));
        }
    }

    #[test]
    fn cube_examples() {
        let ctx = plane(11);
        let circle = curves::sphere(&ctx, 1);
        let full = PointSet::full(&ctx);
        let cube = build_cube(&full, &circle).unwrap();
        assert!(cube.verify(&full, &circle));
        assert_eq!(cube_candidates(&full, &circle).next(), Some(cube));

        let c5 = plane(5);
        let circle5 = curves::sphere(&c5, 1);
        let full5 = PointSet::full(&c5);
        if let Ok(cube) = build_cube(&full5, &circle5) {
            assert!(cube.verify(&full5, &circle5));
        }
        let lonely = PointSet::from_indices(&c5, [0]);
        assert_eq!(build_cube(&full5, &lonely).unwrap_err(), Error::NotFound);
        assert_eq!(
            build_cube(&full5, &PointSet::empty(&c5)).unwrap_err(),
            Error::NotFound
        );
    }
}
