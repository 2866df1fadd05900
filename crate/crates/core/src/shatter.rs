//! Shattering by translates of a fixed shape.
//!
//! The hypothesis `h_y` sends `x` to 1 when `x - y in S`. A tuple
//! `x^1..x^k` is shattered when every subset `I` of `[k]` has a center
//! `y^I` with `x^i - y^I in S` exactly for `i in I`. Subsets are bitmasks
//! with bit `i - 1` standing for `i`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analysis::{cube_candidates, intersection_profile, prune, CubeWitness};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::pointset::PointSet;
use crate::random::trial_rng;

/// Largest `k` accepted; the search keeps `2^k` witness regions.
pub const MAX_K: usize = 16;

/// Default tuple budget for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug)]
pub struct ShatterProblem {
    shape: PointSet,
    domain: PointSet,
    witness_domain: PointSet,
    k: usize,
}

impl ShatterProblem {
    pub fn new(shape: &PointSet, domain: &PointSet, witness_domain: &PointSet, k: usize) -> Result<Self> {
        if shape.context() != domain.context() || shape.context() != witness_domain.context() {
            return Err(Error::ContextMismatch);
        }
        if k > MAX_K {
            return Err(Error::InvalidParameter(format!("k must be at most {MAX_K}, got {k}")));
        }
        Ok(Self {
            shape: shape.clone(),
            domain: domain.clone(),
            witness_domain: witness_domain.clone(),
            k,
        })
    }

    pub fn context(&self) -> &FieldContext {
        self.shape.context()
    }

    pub fn shape(&self) -> &PointSet {
        &self.shape
    }

    pub fn domain(&self) -> &PointSet {
        &self.domain
    }

    pub fn witness_domain(&self) -> &PointSet {
        &self.witness_domain
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(&self.shape, &self.domain, &self.witness_domain, k)
    }

    /// `h_y(x)`.
    #[inline]
    pub fn hits(&self, x: usize, y: usize) -> bool {
        self.shape.contains_index(self.context().sub_idx(x, y))
    }

    /// `N(x) = (x - S) n W`: the centers whose hypothesis contains `x`.
    pub fn neighbors(&self, x: usize) -> BitSet {
        let ctx = self.context();
        let mut out = BitSet::new(ctx.size());
        for s in self.shape.indices() {
            let y = ctx.sub_idx(x, s);
            if self.witness_domain.contains_index(y) {
                out.insert(y);
            }
        }
        out
    }

    /// Checks distinctness, domain membership and the defining biconditional
    /// for every pair `(i, I)`.
    pub fn verify(&self, w: &ShatterWitness) -> Result<bool> {
        if w.points.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: w.points.len(),
            });
        }
        if w.witnesses.len() != 1 << self.k {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.k,
                got: w.witnesses.len(),
            });
        }
        let n = self.context().size();
        if w.points.iter().chain(&w.witnesses).any(|&i| i >= n) {
            return Ok(false);
        }
        let distinct = (0..self.k).all(|i| (i + 1..self.k).all(|j| w.points[i] != w.points[j]));
        Ok(distinct
            && w.points.iter().all(|&x| self.domain.contains_index(x))
            && w.witnesses.iter().all(|&y| self.witness_domain.contains_index(y))
            && w.witnesses.iter().enumerate().all(|(mask, &y)| {
                w.points
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| self.hits(x, y) == (mask >> i & 1 == 1))
            }))
    }

    /// Least center in every witness region of `points`, or `None` if some
    /// region is empty.
    pub fn witnesses_for(&self, points: &[usize]) -> Result<Option<ShatterWitness>> {
        if points.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: points.len(),
            });
        }
        let n = self.context().size();
        if let Some(&bad) = points.iter().find(|&&x| x >= n) {
            return Err(Error::CoordinateOutOfRange(bad as u64));
        }
        let mut regions = vec![self.witness_domain.bits().clone()];
        for &x in points {
            let nb = self.neighbors(x);
            let mut next = Vec::with_capacity(regions.len() * 2);
            for r in &regions {
                let mut out = r.clone();
                out.difference_with(&nb);
                next.push(out);
            }
            for r in &regions {
                let mut inside = r.clone();
                inside.intersect_with(&nb);
                next.push(inside);
            }
            if next.iter().any(BitSet::is_clear) {
                return Ok(None);
            }
            regions = next;
        }
        Ok(Some(ShatterWitness {
            points: points.to_vec(),
            witnesses: regions.iter().map(|r| r.first_one().unwrap()).collect(),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatterWitness {
    pub points: Vec<usize>,
    /// `witnesses[mask]` is the center `y^I`.
    pub witnesses: Vec<usize>,
}

impl ShatterWitness {
    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn witness(&self, mask: usize) -> usize {
        self.witnesses[mask]
    }

    /// The witness for the first `k` points, reusing centers of subsets
    /// of `[k]`.
    pub fn restrict(&self, k: usize) -> Self {
        assert!(k <= self.k());
        Self {
            points: self.points[..k].to_vec(),
            witnesses: self.witnesses[..1 << k].to_vec(),
        }
    }

    pub fn from_points<P: AsRef<[u64]>>(ctx: &FieldContext, points: &[P], witnesses: &[P]) -> Result<Self> {
        let idx = |v: &[P]| v.iter().map(|p| ctx.index(p.as_ref())).collect::<Result<Vec<_>>>();
        Ok(Self {
            points: idx(points)?,
            witnesses: idx(witnesses)?,
        })
    }

    pub fn to_json(&self, ctx: &FieldContext) -> Value {
        let witnesses: Map<String, Value> = self
            .witnesses
            .iter()
            .enumerate()
            .map(|(mask, &y)| (mask.to_string(), json!(ctx.point(y))))
            .collect();
        json!({
            "k": self.k(),
            "points": self.points.iter().map(|&x| ctx.point(x)).collect::<Vec<_>>(),
            "witnesses": witnesses,
        })
    }

    pub fn from_json(ctx: &FieldContext, value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::BadDescriptor(format!("witness JSON: {m}"));
        let coords = |v: &Value| -> Result<usize> {
            let pt: Vec<u64> = serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?;
            ctx.index(&pt)
        };
        let k = value["k"].as_u64().ok_or_else(|| bad("missing \"k\""))? as usize;
        if k > MAX_K {
            return Err(bad("k too large"));
        }
        let points = value["points"]
            .as_array()
            .ok_or_else(|| bad("missing \"points\""))?
            .iter()
            .map(coords)
            .collect::<Result<Vec<_>>>()?;
        let map = value["witnesses"]
            .as_object()
            .ok_or_else(|| bad("missing \"witnesses\""))?;
        let witnesses = (0..1usize << k)
            .map(|mask| {
                map.get(&mask.to_string())
                    .ok_or_else(|| bad(&format!("no witness for mask {mask}")))
                    .and_then(coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { points, witnesses })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(ShatterWitness),
    /// A complete enumeration found no shattered tuple.
    ExhaustedNo,
    BudgetExhausted,
    /// A constructive or sampling search gave up; nothing is certified.
    NotFound,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::ExhaustedNo => "exhausted_no",
            Outcome::BudgetExhausted => "budget_exhausted",
            Outcome::NotFound => "not_found",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub tuples_examined: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub result: Outcome,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&ShatterWitness> {
        match &self.result {
            Outcome::Found(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_json(&self, ctx: &FieldContext) -> Value {
        json!({
            "outcome": self.result.label(),
            "witness": self.witness().map(|w| w.to_json(ctx)),
            "tuples_examined": self.stats.tuples_examined,
            "elapsed_seconds": self.stats.elapsed.as_secs_f64(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// All k-subsets of the domain in index order; `budget` caps the number
    /// of partial and complete tuples examined.
    Exhaustive { budget: u64 },
    /// `budget` uniformly sampled k-subsets.
    Random { seed: u64, budget: u64 },
}

/// Word-level state for the exhaustive depth-first search.
struct Searcher<'a> {
    k: usize,
    words: usize,
    elems: &'a [usize],
    nbrs: &'a [Vec<u64>],
    counter: &'a AtomicU64,
    budget: u64,
}

enum Branch {
    Found(Vec<usize>, Vec<usize>),
    Exhausted,
    Budget,
}

impl Searcher<'_> {
    /// Splits the `2^j` regions in `cur` by `N(elems[pos])` into `next`;
    /// false if any new region is empty.
    fn split(&self, cur: &[u64], next: &mut [u64], j: usize, pos: usize) -> bool {
        let w = self.words;
        let nb = &self.nbrs[pos];
        let half = (1 << j) * w;
        let mut ok = true;
        for r in 0..1usize << j {
            let src = &cur[r * w..(r + 1) * w];
            let (mut any_out, mut any_in) = (0u64, 0u64);
            for t in 0..w {
                let out = src[t] & !nb[t];
                let inside = src[t] & nb[t];
                next[r * w + t] = out;
                next[half + r * w + t] = inside;
                any_out |= out;
                any_in |= inside;
            }
            if any_out == 0 || any_in == 0 {
                ok = false;
                break;
            }
        }
        ok
    }

    fn descend(&self, levels: &mut [Vec<u64>], chosen: &mut Vec<usize>, start: usize) -> Branch {
        let j = chosen.len();
        let n = self.elems.len();
        for pos in start..=n - (self.k - j) {
            if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
                return Branch::Budget;
            }
            let (head, tail) = levels.split_at_mut(j + 1);
            if !self.split(&head[j], &mut tail[0], j, pos) {
                continue;
            }
            chosen.push(pos);
            if j + 1 == self.k {
                let w = self.words;
                let last = &levels[self.k];
                let ys = (0..1usize << self.k)
                    .map(|r| {
                        let region = &last[r * w..(r + 1) * w];
                        let t = region.iter().position(|&x| x != 0).unwrap();
                        t * 64 + region[t].trailing_zeros() as usize
                    })
                    .collect();
                return Branch::Found(chosen.iter().map(|&i| self.elems[i]).collect(), ys);
            }
            match self.descend(levels, chosen, pos + 1) {
                Branch::Exhausted => {}
                other => return other,
            }
            chosen.pop();
        }
        Branch::Exhausted
    }
}

fn exhaustive(problem: &ShatterProblem, budget: u64, counter: &AtomicU64) -> Outcome {
    let k = problem.k;
    let wbits = problem.witness_domain.bits();
    let elems: Vec<usize> = problem.domain.indices().collect();
    if k == 0 {
        return match wbits.first_one() {
            Some(y) => Outcome::Found(ShatterWitness {
                points: vec![],
                witnesses: vec![y],
            }),
            None => Outcome::ExhaustedNo,
        };
    }
    if elems.len() < k {
        return Outcome::ExhaustedNo;
    }
    let nbrs: Vec<Vec<u64>> = elems
        .par_iter()
        .map(|&x| problem.neighbors(x).words().to_vec())
        .collect();
    let searcher = Searcher {
        k,
        words: wbits.words().len(),
        elems: &elems,
        nbrs: &nbrs,
        counter,
        budget,
    };
    let first = (0..=elems.len() - k).into_par_iter().map(|pos| {
        let w = searcher.words;
        let mut levels: Vec<Vec<u64>> = (0..=k).map(|j| vec![0u64; (1 << j) * w]).collect();
        levels[0].copy_from_slice(wbits.words());
        let mut chosen = Vec::with_capacity(k);
        searcher.descend_from(&mut levels, &mut chosen, pos)
    });
    match first.find_first(|b| !matches!(b, Branch::Exhausted)) {
        Some(Branch::Found(points, witnesses)) => Outcome::Found(ShatterWitness { points, witnesses }),
        Some(Branch::Budget) => Outcome::BudgetExhausted,
        _ => Outcome::ExhaustedNo,
    }
}

impl Searcher<'_> {
    /// Subtree of tuples whose least element is `elems[pos]`.
    fn descend_from(&self, levels: &mut [Vec<u64>], chosen: &mut Vec<usize>, pos: usize) -> Branch {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Branch::Budget;
        }
        let (head, tail) = levels.split_at_mut(1);
        if !self.split(&head[0], &mut tail[0], 0, pos) {
            return Branch::Exhausted;
        }
        chosen.push(pos);
        if self.k == 1 {
            let w = self.words;
            let ys = (0..2)
                .map(|r| {
                    let region = &levels[1][r * w..(r + 1) * w];
                    let t = region.iter().position(|&x| x != 0).unwrap();
                    t * 64 + region[t].trailing_zeros() as usize
                })
                .collect();
            return Branch::Found(vec![self.elems[pos]], ys);
        }
        self.descend(levels, chosen, pos + 1)
    }
}

fn randomized(problem: &ShatterProblem, seed: u64, budget: u64, counter: &AtomicU64) -> Outcome {
    let k = problem.k;
    let elems: Vec<usize> = problem.domain.indices().collect();
    if elems.len() < k {
        return Outcome::ExhaustedNo;
    }
    let found = (0..budget).into_par_iter().find_map_first(|t| {
        counter.fetch_add(1, Ordering::Relaxed);
        let mut rng = trial_rng(seed, t);
        let mut pts: Vec<usize> = sample(&mut rng, elems.len(), k).into_iter().map(|i| elems[i]).collect();
        pts.sort_unstable();
        problem.witnesses_for(&pts).ok().flatten()
    });
    match found {
        Some(w) => Outcome::Found(w),
        None => Outcome::BudgetExhausted,
    }
}

/// Runs the search; any `Found` result has already been re-verified.
pub fn shatter_search(problem: &ShatterProblem, strategy: &Strategy) -> SearchOutcome {
    let start = Instant::now();
    let counter = AtomicU64::new(0);
    let result = match *strategy {
        Strategy::Exhaustive { budget } => exhaustive(problem, budget, &counter),
        Strategy::Random { seed, budget } => randomized(problem, seed, budget, &counter),
    };
    if let Outcome::Found(w) = &result {
        assert!(
            problem.verify(w).unwrap_or(false),
            "search produced a witness that fails verification"
        );
    }
    SearchOutcome {
        result,
        stats: SearchStats {
            tuples_examined: counter.load(Ordering::Relaxed).min(match *strategy {
                Strategy::Exhaustive { budget } | Strategy::Random { budget, .. } => budget,
            }),
            elapsed: start.elapsed(),
        },
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Debug, Serialize)]
pub struct VcBounds {
    /// Largest `k` with a shattered tuple found.
    pub lower: usize,
    /// Present when the search at `lower + 1` completed with no tuple.
    pub exact: Option<usize>,
    /// Outcome label per `k = 0, 1, ...` as searched.
    pub outcomes: Vec<&'static str>,
    #[serde(skip)]
    pub witness: Option<ShatterWitness>,
    pub tuples_examined: u64,
}

pub const MAX_VC_K: usize = 5;

/// Exhaustive searches at `k = 0, 1, ...` up to `k_max`, stopping at the
/// first certified failure.
pub fn vc_bounds(
    shape: &PointSet,
    domain: &PointSet,
    witness_domain: &PointSet,
    k_max: usize,
    budget: u64,
) -> Result<VcBounds> {
    if k_max > MAX_VC_K {
        return Err(Error::InvalidParameter(format!(
            "k_max must be at most {MAX_VC_K}, got {k_max}"
        )));
    }
    if witness_domain.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut bounds = VcBounds {
        lower: 0,
        exact: None,
        outcomes: vec![],
        witness: None,
        tuples_examined: 0,
    };
    for k in 0..=k_max {
        let needed = binomial(domain.len() as u64, k as u64);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let problem = ShatterProblem::new(shape, domain, witness_domain, k)?;
        let out = shatter_search(&problem, &Strategy::Exhaustive { budget });
        bounds.outcomes.push(out.result.label());
        bounds.tuples_examined += out.stats.tuples_examined;
        match out.result {
            Outcome::Found(w) => {
                bounds.lower = k;
                bounds.witness = Some(w);
            }
            Outcome::ExhaustedNo => {
                bounds.exact = Some(bounds.lower);
                break;
            }
            _ => break,
        }
    }
    Ok(bounds)
}

/// Assigns the relabeled cube to a 3-shattering and completes it with
/// greedy singleton and empty-set centers from `E`.
fn complete_cube(problem: &ShatterProblem, cube: &CubeWitness) -> Option<ShatterWitness> {
    let [x1, x2, x3, x4, x1v, x2v, x3v] = cube.points;
    let xs = [x2, x1v, x3];
    let mut ys = vec![usize::MAX; 8];
    ys[0b111] = x1;
    ys[0b011] = x2v;
    ys[0b101] = x4;
    ys[0b110] = x3v;
    let mut used: Vec<usize> = xs.iter().chain([x1, x2v, x4, x3v].iter()).copied().collect();
    let pattern = |y: usize| -> usize {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| (problem.hits(x, y) as usize) << i)
            .sum()
    };
    for mask in [0b001, 0b010, 0b100, 0b000] {
        let y = problem
            .domain
            .indices()
            .find(|&y| !used.contains(&y) && pattern(y) == mask)?;
        ys[mask] = y;
        used.push(y);
    }
    Some(ShatterWitness {
        points: xs.to_vec(),
        witnesses: ys,
    })
}

/// 3-shattering built from a cube minus a vertex inside the pruned set
/// `E_M`, `M = 7 + 2 max_{v != 0} |S n (S - v)|`. Cube candidates are tried
/// in pigeonhole order until one completes to a verified witness.
pub fn construct_shatter3(shape: &PointSet, domain: &PointSet) -> Result<SearchOutcome> {
    let start = Instant::now();
    if shape.context() != domain.context() {
        return Err(Error::ContextMismatch);
    }
    if !shape.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if shape.is_empty() {
        return Err(Error::EmptySet);
    }
    let problem = ShatterProblem::new(shape, domain, domain, 3)?;
    let m = 7 + 2 * intersection_profile(shape)?.max_size as u64;
    let pruned = prune(domain, shape, m)?;
    let mut tried = 0u64;
    let mut result = Outcome::NotFound;
    for cube in cube_candidates(&pruned, shape) {
        tried += 1;
        if let Some(w) = complete_cube(&problem, &cube) {
            if problem.verify(&w)? {
                result = Outcome::Found(w);
                break;
            }
        }
    }
    Ok(SearchOutcome {
        result,
        stats: SearchStats {
            tuples_examined: tried,
            elapsed: start.elapsed(),
        },
    })
}
