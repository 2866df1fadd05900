//! Classical character sums over F_p, evaluated by direct summation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::FieldContext;

/// Quadratic character `eta(k)`: +1 on nonzero squares, -1 on nonsquares, 0 at 0.
pub fn legendre(ctx: &FieldContext, k: u64) -> i8 {
    let k = k % ctx.p();
    if k == 0 {
        return 0;
    }
    if ctx.pow(k, (ctx.p() - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}

/// Gauss sum `g(k) = sum_x chi(k x^2)`.
pub fn gauss_sum(ctx: &FieldContext, k: u64) -> Complex64 {
    let chi = ctx.character();
    (0..ctx.p()).map(|x| chi.eval(ctx.mul(k % ctx.p(), ctx.mul(x, x)))).sum()
}

/// Kloosterman sum `sum_{j != 0} chi(a j + b / j)`.
pub fn kloosterman(ctx: &FieldContext, a: u64, b: u64) -> Result<Complex64> {
    let (a, b) = (a % ctx.p(), b % ctx.p());
    if a == 0 || b == 0 {
        return Err(Error::ZeroParameter);
    }
    let chi = ctx.character();
    Ok((1..ctx.p())
        .map(|j| {
            let jinv = ctx.inv(j).expect("j is nonzero");
            chi.eval(ctx.add(ctx.mul(a, j), ctx.mul(b, jinv)))
        })
        .sum())
}

/// Degree of a constant-term-first coefficient list after reduction mod p,
/// or `None` for the zero polynomial.
pub fn degree(ctx: &FieldContext, coeffs: &[u64]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c % ctx.p() != 0)
}

/// `sum_j chi(f(j))` for a polynomial of degree `n >= 1` with `p` not dividing `n`.
///
/// Such `f` is never of the form `c + h^p - h`, so the Weil bound
/// `(n - 1) sqrt p` applies.
pub fn weil_poly_sum(ctx: &FieldContext, coeffs: &[u64]) -> Result<Complex64> {
    let degree = match degree(ctx, coeffs) {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if (degree as u64).is_multiple_of(ctx.p()) {
        return Err(Error::DegreeDivisibleByP { degree, p: ctx.p() });
    }
    let chi = ctx.character();
    Ok((0..ctx.p()).map(|j| chi.eval(ctx.eval_poly(coeffs, j))).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    // Independent evaluation of exp(2 pi i n / p) without the root table.
    fn e(n: u64, p: u64) -> Complex64 {
        let (s, c) = (TAU * (n % p) as f64 / p as f64).sin_cos();
        Complex64::new(c, s)
    }

    fn ctx(p: u64) -> FieldContext {
        FieldContext::new(p, 1).unwrap()
    }

    #[test]
    fn legendre_small_cases() {
        let c = ctx(5);
        assert_eq!(legendre(&c, 0), 0);
        assert_eq!(legendre(&c, 4), 1);
        assert_eq!(legendre(&c, 2), -1);
    }

    #[test]
    fn legendre_matches_enumerated_squares() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let c = ctx(p);
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for k in 1..p {
                let expected = if squares.contains(&k) { 1 } else { -1 };
                assert_eq!(legendre(&c, k), expected, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let c = ctx(5);
        assert!((gauss_sum(&c, 0) - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        let g1 = gauss_sum(&c, 1);
        assert!((g1.norm() - 5f64.sqrt()).abs() < 1e-9);
        // direct five-term sum for k = 2
        let direct: Complex64 = (0..5).map(|x| e(2 * x * x, 5)).sum();
        assert!((gauss_sum(&c, 2) - direct).norm() < 1e-12);
        assert!((direct + g1).norm() < 1e-9);
    }

    #[test]
    fn kloosterman_examples() {
        let c = ctx(5);
        let k = kloosterman(&c, 1, 1).unwrap();
        let direct: Complex64 = [(1u64, 1u64), (2, 3), (3, 2), (4, 4)]
            .iter()
            .map(|&(j, jinv)| e(j + jinv, 5))
            .sum();
        assert!((k - direct).norm() < 1e-12);
        assert!((k.re - 0.381966011250105).abs() < 1e-9);
        assert!(k.im.abs() < 1e-9);
        assert_eq!(kloosterman(&c, 0, 1).unwrap_err(), Error::ZeroParameter);
        assert_eq!(kloosterman(&c, 3, 5).unwrap_err(), Error::ZeroParameter);

        let c7 = ctx(7);
        assert!(kloosterman(&c7, 1, 1).unwrap().norm() <= 2.0 * 7f64.sqrt());
    }

    #[test]
    fn weil_examples() {
        let c = ctx(5);
        assert!(weil_poly_sum(&c, &[0, 1]).unwrap().norm() < 1e-9);
        let sq = weil_poly_sum(&c, &[0, 0, 1]).unwrap();
        assert!((sq - gauss_sum(&c, 1)).norm() < 1e-12);
        assert!((sq.norm() - 5f64.sqrt()).abs() < 1e-9);
        let c7 = ctx(7);
        let cube = weil_poly_sum(&c7, &[0, 0, 0, 1]).unwrap();
        assert!(cube.norm() <= 2.0 * 7f64.sqrt() + 1e-9);

        assert_eq!(weil_poly_sum(&c, &[3]).unwrap_err(), Error::ConstantPolynomial);
        assert_eq!(weil_poly_sum(&c, &[]).unwrap_err(), Error::ConstantPolynomial);
        assert_eq!(
            weil_poly_sum(&c, &[1, 0, 0, 0, 0, 1]).unwrap_err(),
            Error::DegreeDivisibleByP { degree: 5, p: 5 }
        );
        // trailing multiples of p do not count toward the degree
        assert!(weil_poly_sum(&c, &[0, 1, 5]).unwrap().norm() < 1e-9);
    }

    proptest! {
        #[test]
        fn gauss_sum_is_eps_eta_sqrt_p(pi in 0usize..8, k in 1u64..1000) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23][pi];
            let c = ctx(p);
            prop_assume!(k % p != 0);
            let g = gauss_sum(&c, k);
            prop_assert!((g.norm() - (p as f64).sqrt()).abs() < 1e-9);
            let expected = c.epsilon() * legendre(&c, k) as f64 * (p as f64).sqrt();
            prop_assert!((g - expected).norm() < 1e-9);
            let ratio = g / gauss_sum(&c, 1);
            prop_assert!((ratio - Complex64::new(legendre(&c, k) as f64, 0.0)).norm() < 1e-9);
        }

        #[test]
        fn legendre_is_multiplicative(pi in 0usize..6, a in 1u64..500, b in 1u64..500) {
            let p = [3u64, 5, 7, 11, 13, 29][pi];
            let c = ctx(p);
            prop_assume!(a % p != 0 && b % p != 0);
            prop_assert_eq!(legendre(&c, a * b), legendre(&c, a) * legendre(&c, b));
        }

        #[test]
        fn kloosterman_is_symmetric_and_real(pi in 0usize..6, a in 1u64..200, b in 1u64..200) {
            let p = [3u64, 5, 7, 11, 13, 29][pi];
            let c = ctx(p);
            prop_assume!(a % p != 0 && b % p != 0);
            let ab = kloosterman(&c, a, b).unwrap();
            let ba = kloosterman(&c, b, a).unwrap();
            prop_assert!((ab - ba).norm() < 1e-9);
            prop_assert!(ab.im.abs() < 1e-9);
            prop_assert!(ab.norm() <= 2.0 * (p as f64).sqrt() + 1e-9);
        }

        #[test]
        fn linear_weil_sum_vanishes(pi in 0usize..6, a0 in 0u64..100, a1 in 1u64..100) {
            let p = [3u64, 5, 7, 11, 13, 29][pi];
            prop_assume!(a1 % p != 0);
            let s = weil_poly_sum(&ctx(p), &[a0, a1]).unwrap();
            prop_assert!(s.norm() < 1e-9);
        }
    }
}
