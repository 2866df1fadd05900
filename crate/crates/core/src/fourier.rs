//! Normalized Fourier transform on F_p^d and Salem certification.
//!
//! Convention: `f^(m) = p^{-d} sum_x chi(-m.x) f(x)`, with inversion
//! `f(x) = sum_m chi(m.x) f^(m)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::pointset::PointSet;

/// Unnormalized multidimensional DFT, applied one axis at a time.
/// `sign = -1` computes `sum_x chi(-m.x) f(x)`, `sign = +1` the inverse kernel.
fn dft(ctx: &FieldContext, mut data: Vec<Complex64>, sign: i64) -> Vec<Complex64> {
    let p = ctx.p() as usize;
    let n = ctx.size();
    for axis in 0..ctx.dim() {
        let stride = ctx.stride(axis);
        // Line starts: indices whose coordinate along `axis` is zero.
        let bases: Vec<usize> = (0..n / p)
            .map(|j| (j / stride) * stride * p + j % stride)
            .collect();
        let lines: Vec<(usize, Vec<Complex64>)> = bases
            .par_iter()
            .filter_map(|&base| {
                let nonzero: Vec<(usize, Complex64)> = (0..p)
                    .map(|j| (j, data[base + j * stride]))
                    .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
                    .collect();
                if nonzero.is_empty() {
                    return None;
                }
                let line = (0..p)
                    .map(|k| {
                        nonzero
                            .iter()
                            .map(|&(j, v)| {
                                let e = (sign * (k * j % p) as i64).rem_euclid(p as i64);
                                v * ctx.root(e as u64)
                            })
                            .sum()
                    })
                    .collect();
                Some((base, line))
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (base, line) in lines {
            for (k, v) in line.into_iter().enumerate() {
                out[base + k * stride] = v;
            }
        }
        data = out;
    }
    data
}

/// Normalized transform of a real table indexed by point index.
pub fn transform_real(ctx: &FieldContext, f: &[f64]) -> Vec<Complex64> {
    assert_eq!(f.len(), ctx.size());
    let scale = 1.0 / ctx.size() as f64;
    dft(ctx, f.iter().map(|&v| Complex64::new(v, 0.0)).collect(), -1)
        .into_iter()
        .map(|v| v * scale)
        .collect()
}

/// Fourier inversion: `f(x) = sum_m chi(m.x) f^(m)`.
pub fn inverse(ctx: &FieldContext, spectrum: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(spectrum.len(), ctx.size());
    dft(ctx, spectrum.to_vec(), 1)
}

/// Fourier coefficients of a point set at every frequency.
#[derive(Clone, Debug)]
pub struct SpectrumTable {
    ctx: FieldContext,
    values: Vec<Complex64>,
    max_nontrivial: f64,
}

impl SpectrumTable {
    pub fn from_values(ctx: &FieldContext, values: Vec<Complex64>) -> Self {
        let max_nontrivial = values[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
        Self {
            ctx: ctx.clone(),
            values,
            max_nontrivial,
        }
    }

    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, m: usize) -> Complex64 {
        self.values[m]
    }

    /// `max_{m != 0} |S^(m)|`.
    pub fn max_nontrivial(&self) -> f64 {
        self.max_nontrivial
    }

    /// Least frequency attaining `max_nontrivial`.
    pub fn argmax_nontrivial(&self) -> Option<usize> {
        (1..self.values.len()).find(|&m| self.values[m].norm() == self.max_nontrivial)
    }

    /// `|S^(m)|` for all `m != 0`, sorted ascending.
    pub fn sorted_nontrivial_magnitudes(&self) -> Vec<f64> {
        let mut mags: Vec<f64> = self.values[1..].iter().map(|v| v.norm()).collect();
        mags.sort_by(f64::total_cmp);
        mags
    }
}

pub fn fourier_spectrum(set: &PointSet) -> SpectrumTable {
    let ctx = set.context();
    SpectrumTable::from_values(ctx, transform_real(ctx, &set.indicator()))
}

/// Parameters of the bound `c q^{-d} (ln q)^gamma |S|^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SalemParams {
    pub gamma: f64,
    pub constant: f64,
}

impl Default for SalemParams {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            constant: 2.0,
        }
    }
}

impl SalemParams {
    pub fn new(gamma: f64, constant: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
        }
        if !(constant > 0.0 && constant.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "constant must be > 0, got {constant}"
            )));
        }
        Ok(Self { gamma, constant })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SalemReport {
    pub size: usize,
    pub gamma: f64,
    pub constant: f64,
    pub max_nontrivial: f64,
    pub bound: f64,
    pub ratio: f64,
    pub pass: bool,
}

pub fn salem_report(set: &PointSet, params: &SalemParams) -> Result<SalemReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let spectrum = fourier_spectrum(set);
    Ok(salem_report_from(&spectrum, set.len(), params))
}

pub fn salem_report_from(spectrum: &SpectrumTable, size: usize, params: &SalemParams) -> SalemReport {
    let ctx = spectrum.context();
    let q = ctx.q();
    let log_factor = if params.gamma == 0.0 {
        1.0
    } else {
        q.ln().powf(params.gamma)
    };
    let bound = params.constant * q.powi(-(ctx.dim() as i32)) * log_factor * (size as f64).sqrt();
    let max_nontrivial = spectrum.max_nontrivial();
    SalemReport {
        size,
        gamma: params.gamma,
        constant: params.constant,
        max_nontrivial,
        bound,
        ratio: max_nontrivial / bound,
        pass: max_nontrivial <= bound,
    }
}
