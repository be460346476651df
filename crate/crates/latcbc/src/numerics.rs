//! Special functions and number-theoretic utilities.

use crate::error::{Error, Result};
use crate::sums::Accumulator;

/// Bernoulli polynomial of degree 2 on `[0, 1)`: `B2(x) = x^2 - x + 1/6`.
pub fn bernoulli2(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "bernoulli2 requires 0 <= x < 1, got {x}"
        )));
    }
    Ok(b2(x))
}

/// Unchecked `B2` for arguments already reduced to `[0, 1)`.
#[inline(always)]
pub(crate) fn b2(x: f64) -> f64 {
    x * x - x + 1.0 / 6.0
}

/// Truncation point of the Euler-Maclaurin evaluation of zeta.
const EM_N: u64 = 64;

/// Riemann zeta function for real `s > 1`.
///
/// Euler-Maclaurin summation: the first `EM_N - 1` terms directly, then the
/// integral and half-term corrections plus Bernoulli-number tail corrections
/// through order 6. Absolute error is below 1e-15 on `s` in `(1, 2]`.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("zeta requires s > 1, got {s}")));
    }
    let n = EM_N as f64;
    let mut acc = Accumulator::default();
    for k in 1..EM_N {
        acc.add((k as f64).powf(-s));
    }
    acc.add(n.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * n.powf(-s));
    // B2/2! f'(N), B4/4! f'''(N), B6/6! f^(5)(N) for f(x) = x^-s
    acc.add(s * n.powf(-s - 1.0) / 12.0);
    acc.add(-s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0);
    acc.add(s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0);
    Ok(acc.value())
}

/// Derivative of the Riemann zeta function for real `s > 1`.
///
/// Term-by-term differentiation of the same Euler-Maclaurin skeleton as
/// [`zeta`].
pub fn zeta_prime(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("zeta_prime requires s > 1, got {s}")));
    }
    let n = EM_N as f64;
    let ln_n = n.ln();
    let mut acc = Accumulator::default();
    for k in 2..EM_N {
        let kf = k as f64;
        acc.add(-kf.ln() * kf.powf(-s));
    }
    // d/ds [N^(1-s)/(s-1)]
    acc.add(n.powf(1.0 - s) * (-ln_n / (s - 1.0) - 1.0 / ((s - 1.0) * (s - 1.0))));
    // d/ds [N^-s / 2]
    acc.add(-0.5 * ln_n * n.powf(-s));
    // d/ds of the Bernoulli tail corrections
    let p1 = s;
    acc.add(n.powf(-s - 1.0) / 12.0 * (1.0 - p1 * ln_n));
    let p3 = s * (s + 1.0) * (s + 2.0);
    let dp3 = p3 * (1.0 / s + 1.0 / (s + 1.0) + 1.0 / (s + 2.0));
    acc.add(-n.powf(-s - 3.0) / 720.0 * (dp3 - p3 * ln_n));
    let p5 = p3 * (s + 3.0) * (s + 4.0);
    let dp5 = p5 * (1.0 / s + 1.0 / (s + 1.0) + 1.0 / (s + 2.0) + 1.0 / (s + 3.0) + 1.0 / (s + 4.0));
    acc.add(n.powf(-s - 5.0) / 30240.0 * (dp5 - p5 * ln_n));
    Ok(acc.value())
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut base = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

/// Modular inverse of `a` mod `n` (extended Euclid); `None` when not a unit.
pub(crate) fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, a as i128 % n as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(n as i128) as u64)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root of an odd prime `n`, i.e. the smallest generator
/// of the multiplicative group mod `n`.
pub fn primitive_root(n: u64) -> Result<u64> {
    if n < 3 || !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let phi = n - 1;
    let factors = prime_factors(phi);
    for g in 2..n {
        if factors.iter().all(|&p| mod_pow(g, phi / p, n) != 1) {
            return Ok(g);
        }
    }
    unreachable!("every odd prime has a primitive root")
}

/// Euler totient: the number of integers in `[1, n)` coprime to `n`, with
/// the convention `phi(1) = 1`.
pub fn euler_totient(n: u64) -> u64 {
    assert!(n >= 1, "euler_totient requires n >= 1");
    let mut result = n;
    for p in prime_factors(n) {
        result = result / p * (p - 1);
    }
    result
}

/// A prime modulus together with the group data used by the fast kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeModulus {
    n: u64,
    phi: u64,
    generator: u64,
}

impl PrimeModulus {
    /// Validates primality and finds the smallest primitive root.
    pub fn new(n: u64) -> Result<Self> {
        let generator = primitive_root(n)?;
        Ok(Self {
            n,
            phi: n - 1,
            generator,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }
}

/// Least-squares power-law fit `E ~ C * n^(-exponent)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    /// Slope of `-log E` against `log n`.
    pub exponent: f64,
    /// Natural log of the fitted constant `C`.
    pub log_constant: f64,
}

/// Ordinary least squares of `-ln E` on `ln n`.
///
/// Requires at least two distinct `n` values and strictly positive `E`.
pub fn fit_power_law(pairs: &[(u64, f64)]) -> Result<PowerLawFit> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInput(
            "power-law fit needs at least 2 points".into(),
        ));
    }
    if pairs.iter().any(|&(_, e)| !(e > 0.0)) {
        return Err(Error::InvalidInput(
            "power-law fit needs all E > 0".into(),
        ));
    }
    let first = pairs[0].0;
    if pairs.iter().all(|&(n, _)| n == first) {
        return Err(Error::InvalidInput(
            "power-law fit needs at least 2 distinct n values".into(),
        ));
    }
    let m = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, e)| -e.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let exponent = sxy / sxx;
    let log_constant = -(ybar - exponent * xbar);
    Ok(PowerLawFit {
        exponent,
        log_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // High-precision reference values, recorded ahead of the implementation
    // from a million-term Euler-Maclaurin evaluation.
    const ZETA_1_2: f64 = 5.591582441177751;
    const ZETA_1_5: f64 = 2.6123753486854883;
    const ZETA_P_2: f64 = -0.9375482543158438;
    const ZETA_P_1_2: f64 = -24.929160256828878;
    const ZETA_P_1_5: f64 = -3.9322397374311015;

    #[test]
    fn bernoulli2_values() {
        assert_eq!(bernoulli2(0.0).unwrap(), 1.0 / 6.0);
        assert!((bernoulli2(0.5).unwrap() + 1.0 / 12.0).abs() < 1e-16);
        assert!((bernoulli2(1.0 / 3.0).unwrap() + 1.0 / 18.0).abs() < 1e-16);
        assert!(bernoulli2(1.0).is_err());
        assert!(bernoulli2(-0.1).is_err());
    }

    #[test]
    fn bernoulli2_symmetry_and_multiplication_identity() {
        for i in 1..50 {
            let x = i as f64 / 50.0;
            assert!((b2(x) - b2(1.0 - x)).abs() < 1e-15);
        }
        for n in [1u64, 2, 3, 5, 7, 64, 251, 1000] {
            let mut acc = Accumulator::default();
            for k in 0..n {
                acc.add(b2(k as f64 / n as f64));
            }
            assert!(
                (acc.value() - 1.0 / (6.0 * n as f64)).abs() < 1e-14,
                "n = {n}"
            );
        }
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta(1.2).unwrap() - ZETA_1_2).abs() < 1e-13);
        assert!((zeta(1.5).unwrap() - ZETA_1_5).abs() < 1e-13);
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
    }

    #[test]
    fn zeta_prime_values() {
        assert!((zeta_prime(2.0).unwrap() - ZETA_P_2).abs() < 1e-10);
        assert!((zeta_prime(1.2).unwrap() - ZETA_P_1_2).abs() < 1e-9);
        assert!((zeta_prime(1.5).unwrap() - ZETA_P_1_5).abs() < 1e-10);
        assert!(zeta_prime(1.0).is_err());
    }

    #[test]
    fn zeta_prime_matches_finite_difference() {
        let h = 1e-6;
        for &s in &[1.2, 1.5, 1.8, 2.0] {
            let fd = (zeta(s + h).unwrap() - zeta(s - h).unwrap()) / (2.0 * h);
            let d = zeta_prime(s).unwrap();
            assert!((fd - d).abs() / d.abs() < 1e-7, "s = {s}");
        }
    }

    #[test]
    fn zeta_monotone_on_interval() {
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let s = 1.001 + i as f64 * (2.0 - 1.001) / 50.0;
            let v = zeta(s).unwrap();
            assert!(v < prev);
            assert!(zeta_prime(s).unwrap() < 0.0);
            prev = v;
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert!(primitive_root(8).is_err());
        assert!(primitive_root(2).is_err());
    }

    #[test]
    fn primitive_root_enumerates_group() {
        for n in [5u64, 7, 11, 101, 251] {
            let g = primitive_root(n).unwrap();
            let mut seen = vec![false; n as usize];
            let mut x = 1u64;
            for _ in 0..n - 1 {
                assert!(!seen[x as usize], "repetition for n = {n}");
                seen[x as usize] = true;
                x = x * g % n;
            }
            assert_eq!(x, 1, "order of g must be n - 1");
            assert_eq!(seen.iter().filter(|&&s| s).count() as u64, n - 1);
        }
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_totient(7), 6);
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(12), 4);
        // direct gcd count cross-check
        for n in 1..200u64 {
            let direct = (1..=n)
                .filter(|&k| {
                    let (mut a, mut b) = (k, n);
                    while b != 0 {
                        let t = a % b;
                        a = b;
                        b = t;
                    }
                    a == 1
                })
                .count() as u64;
            assert_eq!(euler_totient(n), direct, "n = {n}");
        }
    }

    #[test]
    fn prime_modulus() {
        let m = PrimeModulus::new(251).unwrap();
        assert_eq!(m.phi(), 250);
        assert_eq!(mod_pow(m.generator(), m.phi(), 251), 1);
        assert!(PrimeModulus::new(249).is_err());
    }

    #[test]
    fn power_law_fit() {
        let f = fit_power_law(&[(10, 0.1), (100, 0.01)]).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        let f = fit_power_law(&[(10, 1.0), (100, 1.0)]).unwrap();
        assert!(f.exponent.abs() < 1e-12);
        // exact recovery on synthetic data E = C n^-x
        let (c, x) = (3.7, 1.37);
        let pts: Vec<(u64, f64)> = [251u64, 499, 997, 1999, 4001]
            .iter()
            .map(|&n| (n, c * (n as f64).powf(-x)))
            .collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.exponent - x).abs() < 1e-12);
        assert!((f.log_constant - c.ln()).abs() < 1e-10);
        assert!(fit_power_law(&[(10, 0.1)]).is_err());
        assert!(fit_power_law(&[(10, 0.1), (10, 0.2)]).is_err());
        assert!(fit_power_law(&[(10, 0.1), (20, -0.2)]).is_err());
    }
}
