//! Published shattering configurations and small reproducible suites
//! (conic census, character-sum checks) shared by the CLI and tests.

use rand::Rng;
use serde::Serialize;

use crate::analysis::intersection_profile;
use crate::curves::{self, QuadraticSpec};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::fourier::fourier_spectrum;
use crate::pointset::PointSet;
use crate::random::trial_rng;
use crate::shatter::{ShatterProblem, ShatterWitness};
use crate::sums;

/// Four points of the plane over F_11 shattered by translates of the
/// symmetrized parabola.
pub const F11_POINTS: [[u64; 2]; 4] = [[0, 0], [1, 2], [2, 8], [7, 4]];

/// Published centers `y^I` for every nonempty `I`, keyed by bitmask.
pub const F11_CENTERS: [(usize, [u64; 2]); 15] = [
    (0b0001, [0, 0]),
    (0b0010, [0, 3]),
    (0b0100, [0, 4]),
    (0b1000, [0, 9]),
    (0b0011, [9, 4]),
    (0b0101, [10, 10]),
    (0b1001, [1, 1]),
    (0b0110, [0, 1]),
    (0b1010, [2, 1]),
    (0b1100, [1, 7]),
    (0b0111, [7, 5]),
    (0b1011, [5, 8]),
    (0b1101, [6, 3]),
    (0b1110, [10, 6]),
    (0b1111, [3, 9]),
];

/// Published 4-point tuples for larger fields; only the points are given.
pub const PUBLISHED_TUPLES: [(u64, [[u64; 2]; 4]); 3] = [
    (17, [[0, 0], [0, 1], [1, 8], [12, 13]]),
    (23, [[0, 0], [1, 2], [10, 17], [13, 6]]),
    (29, [[0, 0], [0, 2], [8, 7], [11, 2]]),
];

/// Symmetrized parabola with `E = W =` the full plane and the given `k`.
pub fn symmetrized_problem(p: u64, k: usize) -> Result<ShatterProblem> {
    let ctx = FieldContext::new(p, 2)?;
    let shape = curves::symmetrized_parabola(&ctx)?;
    let full = PointSet::full(&ctx);
    ShatterProblem::new(&shape, &full, &full, k)
}

/// The F_11 table as a witness. The table lists no center for the empty
/// set, so the least-index center missing all four points is used.
pub fn f11_table() -> Result<(ShatterProblem, ShatterWitness)> {
    let problem = symmetrized_problem(11, 4)?;
    let ctx = problem.context().clone();
    let points = F11_POINTS
        .iter()
        .map(|x| ctx.index(x))
        .collect::<Result<Vec<_>>>()?;
    let mut witnesses = vec![0; 16];
    for (mask, y) in F11_CENTERS {
        witnesses[mask] = ctx.index(&y)?;
    }
    witnesses[0] = (0..ctx.size())
        .find(|&y| points.iter().all(|&x| !problem.hits(x, y)))
        .ok_or(Error::NotFound)?;
    Ok((problem, ShatterWitness { points, witnesses }))
}

/// Witness-region search for the published tuple over F_p.
pub fn published_tuple_witness(p: u64) -> Result<(ShatterProblem, Option<ShatterWitness>)> {
    let (_, tuple) = PUBLISHED_TUPLES
        .iter()
        .find(|(q, _)| *q == p)
        .ok_or_else(|| Error::InvalidParameter(format!("no published tuple for p = {p}")))?;
    let problem = symmetrized_problem(p, 4)?;
    let pts = tuple
        .iter()
        .map(|x| problem.context().index(x))
        .collect::<Result<Vec<_>>>()?;
    let w = problem.witnesses_for(&pts)?;
    Ok((problem, w))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConicRow {
    pub coeffs: [u64; 6],
    pub points: usize,
    /// `q^{3/2} max_{m != 0} |Z^(m)|`; at most 2 for these conics.
    pub scaled_max: f64,
    pub max_intersection: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConicCensus {
    pub p: u64,
    pub seed: u64,
    pub rows: Vec<ConicRow>,
    /// Every count lies in `{q - 1, q, q + 1}`.
    pub counts_ok: bool,
    /// Every `scaled_max <= 2`.
    pub salem_ok: bool,
    /// Every shift intersection has at most 2 points.
    pub intersections_ok: bool,
}

/// Random conic with `det3 != 0` and `det2 != 0`, drawn from trial stream
/// `trial` of `seed`.
pub fn random_smooth_conic(ctx: &FieldContext, seed: u64, trial: u64) -> QuadraticSpec {
    let mut rng = trial_rng(seed, trial);
    loop {
        let c: [i64; 6] = std::array::from_fn(|_| rng.random_range(0..ctx.p()) as i64);
        if let Ok(spec) = QuadraticSpec::new(ctx, c) {
            let class = spec.classify();
            if class.smooth && !class.degenerate_quadratic_part {
                return spec;
            }
        }
    }
}

pub fn conic_census(p: u64, count: usize, seed: u64) -> Result<ConicCensus> {
    let ctx = FieldContext::new(p, 2)?;
    let q = ctx.q();
    let rows: Vec<ConicRow> = (0..count as u64)
        .map(|i| -> Result<ConicRow> {
            let spec = random_smooth_conic(&ctx, seed, i);
            let zero = spec.zero_set();
            Ok(ConicRow {
                coeffs: spec.coeffs(),
                points: zero.len(),
                scaled_max: fourier_spectrum(&zero).max_nontrivial() * q.powf(1.5),
                max_intersection: intersection_profile(&zero)?.max_size,
            })
        })
        .collect::<Result<_>>()?;
    let pu = p as usize;
    Ok(ConicCensus {
        p,
        seed,
        counts_ok: rows.iter().all(|r| (pu - 1..=pu + 1).contains(&r.points)),
        salem_ok: rows.iter().all(|r| r.scaled_max <= 2.0 + 1e-9),
        intersections_ok: rows.iter().all(|r| r.max_intersection <= 2),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilRow {
    pub coeffs: Vec<u64>,
    pub degree: usize,
    pub magnitude: f64,
    /// `|sum| / ((n - 1) sqrt p)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilSuite {
    pub p: u64,
    pub seed: u64,
    /// `max_k ||g(k)| - sqrt p|`.
    pub gauss_magnitude_dev: f64,
    /// `max_k |g(k) - eps eta(k) sqrt p|`.
    pub gauss_sign_dev: f64,
    /// `max_{a, b} |K(a, b)| / (2 sqrt p)`.
    pub kloosterman_ratio: f64,
    pub weil: Vec<WeilRow>,
    pub pass: bool,
}

/// Random polynomial of exact degree `n`, constant term first.
pub fn random_poly(ctx: &FieldContext, n: usize, seed: u64, trial: u64) -> Vec<u64> {
    let mut rng = trial_rng(seed, trial);
    let mut c: Vec<u64> = (0..=n).map(|_| rng.random_range(0..ctx.p())).collect();
    c[n] = rng.random_range(1..ctx.p());
    c
}

pub fn weil_suite(p: u64, per_degree: usize, seed: u64) -> Result<WeilSuite> {
    let ctx = FieldContext::new(p, 1)?;
    let root = (p as f64).sqrt();
    let eps = ctx.epsilon();
    let (mut mag_dev, mut sign_dev) = (0.0f64, 0.0f64);
    for k in 1..p {
        let g = sums::gauss_sum(&ctx, k);
        mag_dev = mag_dev.max((g.norm() - root).abs());
        sign_dev = sign_dev.max((g - eps * sums::legendre(&ctx, k) as f64 * root).norm());
    }
    let mut kl = 0.0f64;
    for a in 1..p {
        for b in 1..p {
            kl = kl.max(sums::kloosterman(&ctx, a, b)?.norm() / (2.0 * root));
        }
    }
    let mut weil = Vec::new();
    for n in [2usize, 3, 4] {
        if (n as u64).is_multiple_of(p) {
            continue;
        }
        for i in 0..per_degree as u64 {
            let coeffs = random_poly(&ctx, n, seed, (n as u64) << 32 | i);
            let magnitude = sums::weil_poly_sum(&ctx, &coeffs)?.norm();
            weil.push(WeilRow {
                coeffs,
                degree: n,
                magnitude,
                ratio: magnitude / ((n - 1) as f64 * root),
            });
        }
    }
    let pass = mag_dev < 1e-9
        && sign_dev < 1e-9
        && kl <= 1.0 + 1e-12
        && weil.iter().all(|r| r.magnitude <= (r.degree - 1) as f64 * root + 1e-9);
    Ok(WeilSuite {
        p,
        seed,
        gauss_magnitude_dev: mag_dev,
        gauss_sign_dev: sign_dev,
        kloosterman_ratio: kl,
        weil,
        pass,
    })
}
