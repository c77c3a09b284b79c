use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::factorial;

use super::AmplitudeSeries;

/// `n!! = n (n-2) (n-4) ...`, with `0!! = 1` and `(-1)!!` read as `n = 0` too.
pub fn double_factorial(n: usize) -> BigUint {
    (1..=n).rev().step_by(2).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Coefficients of `Z(λ)`, `z_n = (-1/2)ⁿ (4n-1)!! / n!`, for `n = 0..=max_order`.
pub fn z_coefficients(max_order: usize) -> AmplitudeSeries {
    let mut z = AmplitudeSeries::default();
    z.add(0, &BigRational::one());
    for n in 1..=max_order {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let numerator = BigInt::from(sign) * BigInt::from(double_factorial(4 * n - 1));
        let denominator = BigInt::from(factorial(n)) * num_traits::pow(BigInt::from(2), n);
        z.add(n, &BigRational::new(numerator, denominator));
    }
    z
}

/// Coefficients of `log Z` through `max_order`, from the recursion
/// `n c_n = n z_n - Σ_{k<n} k c_k z_{n-k}` (valid because `z_0 = 1`).
pub fn logz_oracle(max_order: usize) -> AmplitudeSeries {
    let z = z_coefficients(max_order);
    let mut c: Vec<BigRational> = vec![BigRational::zero(); max_order + 1];
    let mut out = AmplitudeSeries::default();
    for n in 1..=max_order {
        let mut acc = z.coefficient(n) * BigRational::from_integer(BigInt::from(n));
        for (k, ck) in c.iter().enumerate().take(n).skip(1) {
            acc -= ck * z.coefficient(n - k) * BigRational::from_integer(BigInt::from(k));
        }
        c[n] = acc / BigRational::from_integer(BigInt::from(n));
        out.add(n, &c[n]);
    }
    out
}

/// `log( (2π)^{-1/2} ∫ exp(-φ²/2 - λφ⁴/2) dφ )` by composite Simpson on `[-12, 12]`.
/// Intended for `λ ≥ 0`.
pub fn logz_quadrature(lambda: f64) -> f64 {
    let (a, b, n) = (-12.0f64, 12.0f64, 24_000usize);
    let h = (b - a) / n as f64;
    let f = |x: f64| (-0.5 * x * x - 0.5 * lambda * x.powi(4)).exp();
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    (sum * h / 3.0 / (2.0 * std::f64::consts::PI).sqrt()).ln()
}
