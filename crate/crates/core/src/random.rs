//! Random subsets, the Hayes character-sum check, Monte Carlo summaries
//! and symmetrization.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::intersection_profile;
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::fourier::fourier_spectrum;
use crate::pointset::PointSet;
use crate::shatter::{shatter_search, SearchOutcome, ShatterProblem, Strategy};

pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9); trial seed = first word of stream `trial` under the master seed";

/// Seed for trial `trial`: the first output of ChaCha8 keyed by `master`
/// on stream number `trial`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(trial);
    rng.next_u64()
}

pub fn trial_rng(master: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, trial))
}

/// Uniform `size`-subset of F_p^d, by partial Fisher-Yates shuffle of the
/// index range.
pub fn sample_subset(ctx: &FieldContext, size: usize, seed: u64) -> Result<PointSet> {
    if size > ctx.size() {
        return Err(Error::SizeOutOfRange {
            size,
            max: ctx.size(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..ctx.size()).collect();
    let (chosen, _) = idx.partial_shuffle(&mut rng, size);
    Ok(PointSet::from_indices(ctx, chosen.iter().copied()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HayesReport {
    pub n: usize,
    pub k: usize,
    pub m_param: usize,
    /// `max_{m != 0} |sum_{x in S} chi(m.x)|`.
    pub phi: f64,
    pub epsilon: f64,
    /// `2 sqrt(2 (1 + eps) m ln n)`.
    pub bound: f64,
    pub pass: bool,
}

pub fn hayes_check(s: &PointSet, epsilon: f64) -> Result<HayesReport> {
    if s.is_empty() || s.is_full() {
        return Err(Error::DegenerateSize);
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let n = s.context().size();
    let k = s.len();
    let m_param = k.min(n - k);
    let phi = fourier_spectrum(s).max_nontrivial() * n as f64;
    let bound = 2.0 * (2.0 * (1.0 + epsilon) * m_param as f64 * (n as f64).ln()).sqrt();
    Ok(HayesReport {
        n,
        k,
        m_param,
        phi,
        epsilon,
        bound,
        pass: phi < bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Nearest-rank quantiles; `None` for empty input.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let at = |f: f64| v[((f * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1];
        Some(Self {
            min: v[0],
            q25: at(0.25),
            median: at(0.5),
            q75: at(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub evaluated: usize,
    pub degenerate_skipped: usize,
    pub pass_fraction: f64,
    pub epsilon: f64,
    pub beta: f64,
    /// `q^beta`.
    pub omega_threshold: f64,
    /// Fraction of evaluated trials with `Omega > q^beta`.
    pub omega_exceed_fraction: f64,
    pub max_intersection_quantiles: Option<Quantiles>,
    pub seed: u64,
    pub rng: &'static str,
    pub trial_seeds: Vec<u64>,
    /// `Phi(S)` per evaluated trial, in trial order.
    pub phis: Vec<f64>,
    /// `Omega = max_{x != 0} |S n (S - x)|` per evaluated trial.
    pub omegas: Vec<usize>,
}

struct TrialResult {
    seed: u64,
    stats: Option<(bool, f64, usize)>,
}

pub fn monte_carlo(
    ctx: &FieldContext,
    size: usize,
    trials: usize,
    seed: u64,
    epsilon: f64,
    beta: f64,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if size > ctx.size() {
        return Err(Error::SizeOutOfRange {
            size,
            max: ctx.size(),
        });
    }
    let results: Vec<TrialResult> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<TrialResult> {
            let ts = trial_seed(seed, t);
            let s = sample_subset(ctx, size, ts)?;
            if s.is_empty() || s.is_full() {
                return Ok(TrialResult { seed: ts, stats: None });
            }
            let hayes = hayes_check(&s, epsilon)?;
            let omega = intersection_profile(&s)?.max_size;
            Ok(TrialResult {
                seed: ts,
                stats: Some((hayes.pass, hayes.phi, omega)),
            })
        })
        .collect::<Result<_>>()?;

    let threshold = ctx.q().powf(beta);
    let evaluated: Vec<(bool, f64, usize)> = results.iter().filter_map(|r| r.stats).collect();
    let n = evaluated.len();
    let frac = |count: usize| if n == 0 { 0.0 } else { count as f64 / n as f64 };
    let omegas: Vec<usize> = evaluated.iter().map(|e| e.2).collect();
    Ok(TrialSummary {
        trials,
        evaluated: n,
        degenerate_skipped: trials - n,
        pass_fraction: frac(evaluated.iter().filter(|e| e.0).count()),
        epsilon,
        beta,
        omega_threshold: threshold,
        omega_exceed_fraction: frac(omegas.iter().filter(|&&o| o as f64 > threshold).count()),
        max_intersection_quantiles: Quantiles::of(
            &omegas.iter().map(|&o| o as f64).collect::<Vec<_>>(),
        ),
        seed,
        rng: RNG_ALGORITHM,
        trial_seeds: results.iter().map(|r| r.seed).collect(),
        phis: evaluated.iter().map(|e| e.1).collect(),
        omegas,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetrizeReport {
    #[serde(skip)]
    pub t: PointSet,
    pub s_size: usize,
    pub t_size: usize,
    /// `|S n (-S)|`.
    pub overlap: usize,
    /// `|T| = 2|S| - overlap`.
    pub size_identity: bool,
}

pub fn symmetrize(s: &PointSet) -> SymmetrizeReport {
    let neg = s.negate();
    let t = s.union(&neg).expect("same context");
    let overlap = s.bits().intersection_count(neg.bits());
    SymmetrizeReport {
        s_size: s.len(),
        t_size: t.len(),
        overlap,
        size_identity: t.len() == 2 * s.len() - overlap,
        t,
    }
}

/// Checks `T n (T - x)` against the union of the four intersections of
/// `+-S` with `+-S - x`, for every shift `x != 0`, with `T = S u (-S)`.
pub fn decomposition_holds(s: &PointSet) -> bool {
    let ctx = s.context();
    let neg = s.negate();
    let t = s.union(&neg).expect("same context");
    (1..ctx.size()).into_par_iter().all(|x| {
        let back = ctx.neg_idx(x);
        let shift = |a: &PointSet| a.translate_index(back).bits().clone();
        let (s_x, neg_x, t_x) = (shift(s), shift(&neg), shift(&t));
        let mut lhs = t.bits().clone();
        lhs.intersect_with(&t_x);
        let mut rhs = BitSet::new(ctx.size());
        for (a, b) in [(s, &s_x), (s, &neg_x), (&neg, &s_x), (&neg, &neg_x)] {
            let mut part = a.bits().clone();
            part.intersect_with(b);
            rhs.union_with(&part);
        }
        !lhs.exceeds(&rhs)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VcRandomTrial {
    pub seed: u64,
    pub s_size: usize,
    pub t_size: usize,
    pub overlap: usize,
    pub k2_on_s: &'static str,
    pub k3_on_t: &'static str,
    /// Every found witness re-verified.
    pub verified: bool,
    pub decomposition_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VcRandomSummary {
    pub p: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub trials: Vec<VcRandomTrial>,
    pub k2_success_fraction: f64,
    pub k3_success_fraction: f64,
    pub all_verified: bool,
}

fn found_and_verified(problem: &ShatterProblem, outcome: &SearchOutcome) -> (bool, bool) {
    match outcome.witness() {
        Some(w) => (true, problem.verify(w).unwrap_or(false)),
        None => (false, true),
    }
}

/// For each trial: a random `S` of size `p` in the plane, `T = S u (-S)`,
/// exhaustive 2-shattering by `S` and 3-shattering by `T` over the full
/// plane, with every witness re-verified.
pub fn vc_random_experiment(p: u64, trials: usize, seed: u64, budget: u64) -> Result<VcRandomSummary> {
    let ctx = FieldContext::new(p, 2)?;
    let full = PointSet::full(&ctx);
    let rows: Vec<VcRandomTrial> = (0..trials as u64)
        .map(|t| -> Result<VcRandomTrial> {
            let ts = trial_seed(seed, t);
            let s = sample_subset(&ctx, p as usize, ts)?;
            let sym = symmetrize(&s);
            let p2 = ShatterProblem::new(&s, &full, &full, 2)?;
            let o2 = shatter_search(&p2, &Strategy::Exhaustive { budget });
            let p3 = ShatterProblem::new(&sym.t, &full, &full, 3)?;
            let o3 = shatter_search(&p3, &Strategy::Exhaustive { budget });
            let (_, v2) = found_and_verified(&p2, &o2);
            let (_, v3) = found_and_verified(&p3, &o3);
            Ok(VcRandomTrial {
                seed: ts,
                s_size: s.len(),
                t_size: sym.t_size,
                overlap: sym.overlap,
                k2_on_s: o2.result.label(),
                k3_on_t: o3.result.label(),
                verified: v2 && v3,
                decomposition_holds: decomposition_holds(&s),
            })
        })
        .collect::<Result<_>>()?;
    let frac = |f: &dyn Fn(&VcRandomTrial) -> bool| {
        rows.iter().filter(|r| f(r)).count() as f64 / rows.len().max(1) as f64
    };
    Ok(VcRandomSummary {
        p,
        seed,
        rng: RNG_ALGORITHM,
        k2_success_fraction: frac(&|r| r.k2_on_s == "found"),
        k3_success_fraction: frac(&|r| r.k3_on_t == "found"),
        all_verified: rows.iter().all(|r| r.verified),
        trials: rows,
    })
}
