//! The ambient group F_p^d: prime-field arithmetic, point indexing and the
//! fixed additive character.
//!
//! Points are addressed by a dense index in little-endian order,
//! `index(x) = x_1 + x_2 p + ... + x_d p^(d-1)`. Every "least" or
//! "lexicographic" choice in this crate refers to this index order.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sums;

/// Largest supported group order `p^d`.
pub const MAX_POINTS: usize = 1 << 22;

struct Inner {
    p: u64,
    d: usize,
    size: usize,
    strides: Vec<usize>,
    roots: Vec<Complex64>,
    epsilon: OnceLock<Complex64>,
}

/// The group F_p^d together with the character `chi(x) = exp(2 pi i x / p)`.
///
/// Cheap to clone; clones share the root table and the cached `epsilon_q`.
#[derive(Clone)]
pub struct FieldContext {
    inner: Arc<Inner>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.dim() == other.dim()
    }
}

impl Eq for FieldContext {}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.dim())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

impl FieldContext {
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut strides = Vec::with_capacity(d);
        let mut size: usize = 1;
        for _ in 0..d {
            strides.push(size);
            size = match size.checked_mul(p as usize) {
                Some(s) if s <= MAX_POINTS => s,
                _ => return Err(Error::TooLarge { p, d }),
            };
        }
        let roots = (0..p)
            .map(|k| {
                let (s, c) = (std::f64::consts::TAU * k as f64 / p as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Ok(Self {
            inner: Arc::new(Inner {
                p,
                d,
                size,
                strides,
                roots,
                epsilon: OnceLock::new(),
            }),
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.d
    }

    /// Number of points, `p^d`.
    #[inline]
    pub fn size(&self) -> usize {
        self.inner.size
    }

    /// `p` as a float; the `q` of all bounds.
    #[inline]
    pub fn q(&self) -> f64 {
        self.inner.p as f64
    }

    /// The sign `epsilon_q = g(1) / (eta(1) sqrt p)`, computed on first use.
    pub fn epsilon(&self) -> Complex64 {
        *self.inner.epsilon.get_or_init(|| {
            let g1 = sums::gauss_sum(self, 1);
            g1 / self.q().sqrt()
        })
    }

    pub fn character(&self) -> CharacterEvaluator {
        CharacterEvaluator { ctx: self.clone() }
    }

    // ---- scalar arithmetic, all arguments and results in [0, p) ----

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.inner.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.inner.p {
            s - self.inner.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.inner.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.inner.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.inner.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.inner.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.inner.p;
        (a != 0).then(|| self.pow(a, self.inner.p - 2))
    }

    #[inline]
    pub fn half(&self) -> u64 {
        self.inner.p.div_ceil(2)
    }

    /// Evaluate a polynomial given constant-term-first.
    pub fn eval_poly(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c % self.inner.p))
    }

    // ---- point indexing ----

    pub fn index(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.inner.d {
            return Err(Error::DimensionMismatch {
                expected: self.inner.d,
                got: coords.len(),
            });
        }
        let mut idx = 0;
        for (&c, &stride) in coords.iter().zip(&self.inner.strides) {
            if c >= self.inner.p {
                return Err(Error::CoordinateOutOfRange(c));
            }
            idx += c as usize * stride;
        }
        Ok(idx)
    }

    /// Index of a point given by coordinates already known to be in range.
    #[inline]
    pub fn index_unchecked(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.inner.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn point(&self, mut idx: usize) -> Vec<u64> {
        let p = self.inner.p as usize;
        (0..self.inner.d)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c as u64
            })
            .collect()
    }

    #[inline]
    pub fn coord(&self, idx: usize, axis: usize) -> u64 {
        ((idx / self.inner.strides[axis]) % self.inner.p as usize) as u64
    }

    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.inner.strides[axis]
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y| self.add(x, y))
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y| self.sub(x, y))
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        self.combine(a, 0, |x, _| self.neg(x))
    }

    #[inline]
    fn combine(&self, mut a: usize, mut b: usize, op: impl Fn(u64, u64) -> u64) -> usize {
        let p = self.inner.p as usize;
        let mut out = 0;
        for &stride in &self.inner.strides {
            let c = op((a % p) as u64, (b % p) as u64);
            out += c as usize * stride;
            a /= p;
            b /= p;
        }
        out
    }

    /// `m . x` in F_p for two point indices.
    #[inline]
    pub fn dot_idx(&self, mut m: usize, mut x: usize) -> u64 {
        let p = self.inner.p as usize;
        let mut acc = 0;
        for _ in 0..self.inner.d {
            acc += (m % p) * (x % p);
            m /= p;
            x /= p;
        }
        (acc % p) as u64
    }

    /// Sum of squares of the coordinates of a point index.
    #[inline]
    pub fn norm_idx(&self, x: usize) -> u64 {
        self.dot_idx(x, x)
    }

    #[inline]
    pub(crate) fn root(&self, k: u64) -> Complex64 {
        self.inner.roots[k as usize]
    }
}

/// The fixed additive character `chi(x) = exp(2 pi i x / p)` and its
/// multidimensional extension `chi_m(x) = chi(m . x)`.
#[derive(Clone, Debug)]
pub struct CharacterEvaluator {
    ctx: FieldContext,
}

impl CharacterEvaluator {
    pub fn context(&self) -> &FieldContext {
        &self.ctx
    }

    #[inline]
    pub fn eval(&self, x: u64) -> Complex64 {
        self.ctx.root(x % self.ctx.p())
    }

    /// `chi(m . x)` for point indices.
    #[inline]
    pub fn eval_dot(&self, m: usize, x: usize) -> Complex64 {
        self.ctx.root(self.ctx.dot_idx(m, x))
    }
}

/// A square matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl FieldMatrix {
    pub fn from_rows(ctx: &FieldContext, rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|&v| v % ctx.p()));
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.n + c]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.n).map(<[u64]>::to_vec).collect()
    }

    pub fn apply(&self, ctx: &FieldContext, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|r| {
                (0..self.n).fold(0, |acc, c| ctx.add(acc, ctx.mul(self.get(r, c), v[c])))
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = vec![0; self.n * self.n];
        for r in 0..self.n {
            for c in 0..self.n {
                entries[c * self.n + r] = self.get(r, c);
            }
        }
        Self { n: self.n, entries }
    }

    pub fn mul(&self, ctx: &FieldContext, other: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).fold(0, |acc, k| {
                    ctx.add(acc, ctx.mul(self.get(r, k), other.get(k, c)))
                });
            }
        }
        Self { n, entries }
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, ctx: &FieldContext) -> u64 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = ctx.neg(det);
            }
            let pv = a[col * n + col];
            det = ctx.mul(det, pv);
            let inv = ctx.inv(pv).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = ctx.mul(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = ctx.mul(factor, a[col * n + c]);
                    a[r * n + c] = ctx.sub(a[r * n + c], sub);
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, ctx: &FieldContext) -> Result<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] != 0)
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                    inv.swap(pivot * n + c, col * n + c);
                }
            }
            let scale = ctx.inv(a[col * n + col]).expect("nonzero pivot");
            for c in 0..n {
                a[col * n + c] = ctx.mul(a[col * n + c], scale);
                inv[col * n + c] = ctx.mul(inv[col * n + c], scale);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = ctx.sub(a[r * n + c], ctx.mul(factor, a[col * n + c]));
                    inv[r * n + c] = ctx.sub(inv[r * n + c], ctx.mul(factor, inv[col * n + c]));
                }
            }
        }
        Ok(Self { n, entries: inv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(FieldContext::new(2, 1).unwrap_err(), Error::NotOddPrime(2));
        assert_eq!(FieldContext::new(9, 2).unwrap_err(), Error::NotOddPrime(9));
        assert_eq!(FieldContext::new(1, 2).unwrap_err(), Error::NotOddPrime(1));
        assert_eq!(FieldContext::new(5, 0).unwrap_err(), Error::ZeroDimension);
        assert!(matches!(
            FieldContext::new(3, 14),
            Err(Error::TooLarge { .. })
        ));
        assert!(FieldContext::new(2039, 2).is_ok());
    }

    #[test]
    fn index_round_trip_is_little_endian() {
        let ctx = FieldContext::new(5, 3).unwrap();
        assert_eq!(ctx.index(&[1, 0, 0]).unwrap(), 1);
        assert_eq!(ctx.index(&[0, 1, 0]).unwrap(), 5);
        assert_eq!(ctx.index(&[2, 3, 4]).unwrap(), 2 + 15 + 100);
        for idx in 0..ctx.size() {
            assert_eq!(ctx.index(&ctx.point(idx)).unwrap(), idx);
        }
        assert!(ctx.index(&[5, 0, 0]).is_err());
        assert!(ctx.index(&[0, 0]).is_err());
    }

    #[test]
    fn index_arithmetic_matches_coordinates() {
        let ctx = FieldContext::new(7, 2).unwrap();
        for a in 0..ctx.size() {
            for b in (0..ctx.size()).step_by(5) {
                let (pa, pb) = (ctx.point(a), ctx.point(b));
                let sum: Vec<u64> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % 7).collect();
                let diff: Vec<u64> = pa.iter().zip(&pb).map(|(x, y)| (x + 7 - y) % 7).collect();
                assert_eq!(ctx.add_idx(a, b), ctx.index(&sum).unwrap());
                assert_eq!(ctx.sub_idx(a, b), ctx.index(&diff).unwrap());
                let dot = pa.iter().zip(&pb).map(|(x, y)| x * y).sum::<u64>() % 7;
                assert_eq!(ctx.dot_idx(a, b), dot);
            }
            assert_eq!(ctx.add_idx(a, ctx.neg_idx(a)), 0);
        }
    }

    #[test]
    fn inverses() {
        let ctx = FieldContext::new(13, 1).unwrap();
        assert_eq!(ctx.inv(0), None);
        for a in 1..13 {
            assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), 1);
        }
        assert_eq!(ctx.mul(2, ctx.half()), 1);
    }

    #[test]
    fn character_is_a_homomorphism() {
        let ctx = FieldContext::new(11, 1).unwrap();
        let chi = ctx.character();
        assert!((chi.eval(0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        for a in 0..11 {
            for b in 0..11 {
                let lhs = chi.eval(ctx.add(a, b));
                assert!((lhs - chi.eval(a) * chi.eval(b)).norm() < 1e-12);
            }
        }
        let total: Complex64 = (0..11).map(|x| chi.eval(x)).sum();
        assert!(total.norm() < 1e-9);
    }

    #[test]
    fn matrix_inverse_and_det() {
        let ctx = FieldContext::new(7, 2).unwrap();
        let m = FieldMatrix::from_rows(&ctx, &[vec![2, 3], vec![1, 4]]).unwrap();
        assert_eq!(m.det(&ctx), 5);
        let inv = m.inverse(&ctx).unwrap();
        assert_eq!(m.mul(&ctx, &inv), FieldMatrix::identity(2));
        let singular = FieldMatrix::from_rows(&ctx, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(singular.det(&ctx), 0);
        assert_eq!(singular.inverse(&ctx).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn epsilon_is_a_fourth_root_of_unity() {
        for p in [3, 5, 7, 11, 13, 97] {
            let ctx = FieldContext::new(p, 1).unwrap();
            let eps = ctx.epsilon();
            assert!((eps.norm() - 1.0).abs() < 1e-9);
            let e4 = eps.powi(4);
            assert!((e4 - Complex64::new(1.0, 0.0)).norm() < 1e-9, "p={p} eps={eps}");
        }
    }
}
