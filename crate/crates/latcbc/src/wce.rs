//! Shift-averaged worst-case error of rank-1 lattice rules.
//!
//! For a generating vector `z` and weights `gamma_u` the squared
//! shift-averaged worst-case error is
//!
//! ```text
//! e^2 = sum_{nonempty u} gamma_u * (1/n) sum_k prod_{j in u} B2({k z_j / n})
//! ```
//!
//! Three evaluation routes are provided: a literal subset-sum brute force
//! (the oracle, for small s), a per-point product recursion for product
//! weights, and an order-layered dynamic program for POD weights. The
//! squared error is maintained incrementally (`e2_s = e2_{s-1} + gamma_s *
//! G_s`) rather than by the `-1 + mean of products` form, which cancels
//! catastrophically when `e2` is small.

use crate::error::{Error, Result};
use crate::numerics::{b2, euler_totient};
use crate::sums::{self, Accumulator};
use crate::weights::{OrderWeights, WeightScheme, TWO_PI_SQ};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A generating vector `z` with its modulus; every component is a unit mod n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingVector {
    n: u64,
    z: Vec<u64>,
}

impl GeneratingVector {
    pub fn new(n: u64, z: Vec<u64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
        }
        for &zi in &z {
            if zi == 0 || zi >= n || gcd(zi, n) != 1 {
                return Err(Error::NotCoprime { z: zi, n });
            }
        }
        Ok(Self { n, z })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.z.len()
    }

    pub fn components(&self) -> &[u64] {
        &self.z
    }

    pub fn truncated(&self, s: usize) -> Self {
        Self {
            n: self.n,
            z: self.z[..s.min(self.z.len())].to_vec(),
        }
    }
}

/// Fills `row[k] = B2({k z / n})` using an incremental residue.
pub(crate) fn fill_omega_row(n: u64, z: u64, row: &mut [f64]) {
    debug_assert_eq!(row.len(), n as usize);
    let nf = n as f64;
    let mut r = 0u64;
    for slot in row.iter_mut() {
        *slot = b2(r as f64 / nf);
        r += z;
        if r >= n {
            r -= n;
        }
    }
}

/// The exact squared error of the first dimension: appending any unit `z_1`
/// gives `Gamma_1 * gamma_1 / (6 n^2)` because `{k z / n}` runs over the
/// full residue ring.
#[inline]
pub(crate) fn first_dimension_e2(n: u64, gamma1: f64, order_ratio1: f64) -> f64 {
    let nf = n as f64;
    order_ratio1 * gamma1 / (6.0 * nf * nf)
}

/// Running evaluation state: squared error plus the per-point table
/// (product weights) or the order-layered tables `p_{s,l}` (POD).
#[derive(Clone, Debug)]
pub struct WceState {
    n: u64,
    dim: usize,
    e2: f64,
    layers: Layers,
}

#[derive(Clone, Debug)]
enum Layers {
    Product { per_point: Vec<f64> },
    Pod { order: OrderWeights, p: Vec<Vec<f64>> },
}

impl WceState {
    /// Empty product-weight state (`s = 0`, per-point table all ones).
    pub fn product(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
        }
        Ok(Self {
            n,
            dim: 0,
            e2: 0.0,
            layers: Layers::Product {
                per_point: vec![1.0; n as usize],
            },
        })
    }

    /// Empty POD state with the given order weight factors.
    pub fn pod(n: u64, order: OrderWeights) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
        }
        Ok(Self {
            n,
            dim: 0,
            e2: 0.0,
            layers: Layers::Pod {
                order,
                p: vec![vec![1.0; n as usize]],
            },
        })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Current squared shift-averaged worst-case error.
    pub fn e2(&self) -> f64 {
        self.e2
    }

    pub fn error(&self) -> f64 {
        self.e2.sqrt()
    }

    /// Per-point table for product states.
    pub fn per_point(&self) -> Option<&[f64]> {
        match &self.layers {
            Layers::Product { per_point } => Some(per_point),
            Layers::Pod { .. } => None,
        }
    }
}

/// Appends one dimension to a product-weight state: the per-point table is
/// multiplied by `1 + gamma * B2({k z / n})` and the squared error grows by
/// `gamma * G` with `G = (1/n) sum_k B2({k z / n}) * per_point_old(k)`.
pub fn wce_product_append(state: WceState, z_new: u64, gamma_new: f64) -> Result<WceState> {
    let WceState {
        n,
        dim,
        mut e2,
        layers,
    } = state;
    let Layers::Product { mut per_point } = layers else {
        return Err(Error::InvalidInput(
            "wce_product_append needs a product-weight state".into(),
        ));
    };
    if z_new == 0 || z_new >= n || gcd(z_new, n) != 1 {
        return Err(Error::NotCoprime { z: z_new, n });
    }
    if !(gamma_new > 0.0) {
        return Err(Error::InvalidWeights(format!(
            "gamma = {gamma_new} must be positive"
        )));
    }
    let mut row = vec![0.0; n as usize];
    fill_omega_row(n, z_new, &mut row);
    if dim == 0 {
        e2 = first_dimension_e2(n, gamma_new, 1.0);
    } else {
        let g = sums::dot(&row, &per_point) / n as f64;
        e2 += gamma_new * g;
    }
    for (p, &w) in per_point.iter_mut().zip(row.iter()) {
        *p *= 1.0 + gamma_new * w;
    }
    Ok(WceState {
        n,
        dim: dim + 1,
        e2,
        layers: Layers::Product { per_point },
    })
}

/// Appends one dimension to a POD state per the layered recursion.
pub fn wce_pod_append(state: WceState, z_new: u64, gamma_new: f64) -> Result<WceState> {
    let WceState {
        n,
        dim,
        mut e2,
        layers,
    } = state;
    let Layers::Pod { order, mut p } = layers else {
        return Err(Error::InvalidInput(
            "wce_pod_append needs a POD state".into(),
        ));
    };
    if z_new == 0 || z_new >= n || gcd(z_new, n) != 1 {
        return Err(Error::NotCoprime { z: z_new, n });
    }
    if !(gamma_new > 0.0) {
        return Err(Error::InvalidWeights(format!(
            "gamma = {gamma_new} must be positive"
        )));
    }
    let i = dim + 1;
    if order.len() < i {
        return Err(Error::InvalidWeights(format!(
            "{} order weight ratios supplied for dimension {i}",
            order.len()
        )));
    }
    let nf = n as f64;
    let mut row = vec![0.0; n as usize];
    fill_omega_row(n, z_new, &mut row);

    if i == 1 {
        e2 = first_dimension_e2(n, gamma_new, order.ratio(1));
    } else {
        // e2 += gamma_i * (1/n) sum_k B2 * sum_l (Gamma_l/Gamma_{l-1}) p_{i-1,l-1}(k)
        let mut acc = Accumulator::default();
        for l in 1..=i {
            acc.add(order.ratio(l) * sums::dot(&row, &p[l - 1]));
        }
        e2 += gamma_new * acc.value() / nf;
    }

    // p_{i,l} = p_{i-1,l} + (Gamma_l/Gamma_{l-1}) gamma_i B2-row .* p_{i-1,l-1}
    p.push(vec![0.0; n as usize]);
    for l in (1..=i).rev() {
        let ratio = order.ratio(l) * gamma_new;
        let (lower, upper) = p.split_at_mut(l);
        let prev = &lower[l - 1];
        for ((dst, &prv), &w) in upper[0].iter_mut().zip(prev.iter()).zip(row.iter()) {
            *dst += ratio * w * prv;
        }
    }

    Ok(WceState {
        n,
        dim: i,
        e2,
        layers: Layers::Pod { order, p },
    })
}

/// Shift-averaged worst-case error for product weights.
pub fn wce_product(gv: &GeneratingVector, gamma: &[f64]) -> Result<f64> {
    let s = gv.dimension();
    if gamma.len() < s {
        return Err(Error::InvalidWeights(format!(
            "{} weights supplied for dimension {s}",
            gamma.len()
        )));
    }
    let mut state = WceState::product(gv.modulus())?;
    for i in 0..s {
        state = wce_product_append(state, gv.components()[i], gamma[i])?;
    }
    Ok(state.error())
}

/// Shift-averaged worst-case error for a fixed vector under any structured
/// scheme, via the `O(s^2 n)` layered tables (product schemes take the
/// `O(s n)` per-point route).
pub fn wce_pod_fixed_z(gv: &GeneratingVector, scheme: &WeightScheme) -> Result<f64> {
    let s = gv.dimension();
    if scheme.dimension() < s {
        return Err(Error::InvalidWeights(format!(
            "scheme covers {} dimensions, vector has {s}",
            scheme.dimension()
        )));
    }
    match scheme {
        WeightScheme::Product { gamma } => wce_product(gv, gamma),
        WeightScheme::OrderDependent { order } | WeightScheme::Pod { order, .. } => {
            let mut state = WceState::pod(gv.modulus(), order.clone())?;
            for i in 1..=s {
                state = wce_pod_append(state, gv.components()[i - 1], scheme.gamma(i))?;
            }
            Ok(state.error())
        }
    }
}

/// Brute-force limit on the dimension of the subset-sum oracle.
pub const BRUTEFORCE_MAX_DIM: usize = 20;

/// Literal subset-sum evaluation of the squared error, for arbitrary
/// per-subset weights. `gamma_u` receives the 0-based coordinate indices of
/// the subset and must return a nonnegative weight.
pub fn wce_bruteforce(
    gv: &GeneratingVector,
    gamma_u: impl Fn(&[usize]) -> f64,
) -> Result<f64> {
    let s = gv.dimension();
    if s > BRUTEFORCE_MAX_DIM {
        return Err(Error::DimensionLimit(s, BRUTEFORCE_MAX_DIM));
    }
    let n = gv.modulus();
    let nf = n as f64;
    let mut rows = Vec::with_capacity(s);
    for &z in gv.components() {
        let mut row = vec![0.0; n as usize];
        fill_omega_row(n, z, &mut row);
        rows.push(row);
    }
    let mut members = Vec::with_capacity(s);
    let mut total = Accumulator::default();
    for mask in 1u64..(1 << s) {
        members.clear();
        for (j, row) in rows.iter().enumerate() {
            if mask >> j & 1 == 1 {
                members.push((j, row));
            }
        }
        let indices: Vec<usize> = members.iter().map(|&(j, _)| j).collect();
        let w = gamma_u(&indices);
        if w < 0.0 {
            return Err(Error::InvalidWeights(format!(
                "gamma_u = {w} is negative for subset {indices:?}"
            )));
        }
        if w == 0.0 {
            continue;
        }
        let mut ksum = Accumulator::default();
        for k in 0..n as usize {
            let mut prod = 1.0;
            for &(_, row) in &members {
                prod *= row[k];
            }
            ksum.add(prod);
        }
        total.add(w * ksum.value() / nf);
    }
    Ok(total.value().max(0.0).sqrt())
}

/// Theoretical upper bound on the CBC worst-case error:
/// `((1/phi(n)) sum_{nonempty u} gamma_u^lambda rho(lambda)^|u|)^(1/(2 lambda))`
/// with `rho(lambda) = 2 zeta(2 lambda) / (2 pi^2)^lambda`.
///
/// Product schemes use the closed product form; order-dependent and POD
/// schemes an elementary-symmetric recursion in `gamma_j^lambda * rho` with
/// the `Gamma` ratios folded in.
pub fn wce_upper_bound(
    scheme: &WeightScheme,
    n: u64,
    s: usize,
    lambda: f64,
) -> Result<f64> {
    if !(lambda > 0.5 && lambda <= 1.0) {
        return Err(Error::Domain(format!(
            "lambda must lie in (1/2, 1], got {lambda}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
    }
    if scheme.dimension() < s {
        return Err(Error::InvalidWeights(format!(
            "scheme covers {} dimensions, bound for {s} requested",
            scheme.dimension()
        )));
    }
    let rho = 2.0 * crate::numerics::zeta(2.0 * lambda)? / TWO_PI_SQ.powf(lambda);
    let subset_sum = match scheme {
        WeightScheme::Product { gamma } => {
            let mut prod = 1.0;
            for &g in &gamma[..s] {
                prod *= 1.0 + g.powf(lambda) * rho;
            }
            prod - 1.0
        }
        WeightScheme::OrderDependent { .. } | WeightScheme::Pod { .. } => {
            // f_l = Gamma_l^lambda * e_l(rho * gamma^lambda)
            let mut f = vec![0.0; s + 1];
            f[0] = 1.0;
            for j in 1..=s {
                let x = rho * scheme.gamma(j).powf(lambda);
                for l in (1..=j).rev() {
                    f[l] += scheme.order_ratio(l).powf(lambda) * x * f[l - 1];
                }
            }
            sums::sum(&f[1..])
        }
    };
    let phi = euler_totient(n) as f64;
    Ok((subset_sum / phi).powf(1.0 / (2.0 * lambda)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::OrderWeights;

    fn splitmix(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn random_unit(rng: &mut u64, n: u64) -> u64 {
        loop {
            let z = 1 + (splitmix(rng) * (n - 1) as f64) as u64;
            if z < n && gcd(z, n) == 1 {
                return z;
            }
        }
    }

    // Exact rational values for n = 5, z = (1, 2): G2 = 1331/112500,
    // product e2 = 2081/112500, POD (Gamma = (1,1,2)) e2 = 2662/112500.
    const PROD5_E2: f64 = 2081.0 / 112500.0;
    const POD5_E2: f64 = 2662.0 / 112500.0;

    #[test]
    fn generating_vector_validation() {
        assert!(GeneratingVector::new(10, vec![1, 3, 7]).is_ok());
        assert!(GeneratingVector::new(10, vec![1, 5]).is_err());
        assert!(GeneratingVector::new(10, vec![0]).is_err());
        assert!(GeneratingVector::new(10, vec![11]).is_err());
        assert!(GeneratingVector::new(1, vec![]).is_err());
    }

    #[test]
    fn single_dimension_identity() {
        // e2 = gamma / (6 n^2) for every unit z1
        for n in [3u64, 5, 7, 251] {
            for z in 1..n {
                if gcd(z, n) != 1 {
                    continue;
                }
                let st = WceState::product(n).unwrap();
                let st = wce_product_append(st, z, 0.37).unwrap();
                let expect = 0.37 / (6.0 * (n * n) as f64);
                assert!(
                    (st.e2() - expect).abs() / expect < 1e-14,
                    "n = {n}, z = {z}"
                );
            }
        }
    }

    #[test]
    fn bruteforce_examples() {
        // n=3, s=1, gamma = 1: sqrt(1/54)
        let gv = GeneratingVector::new(3, vec![1]).unwrap();
        let e = wce_bruteforce(&gv, |_| 1.0).unwrap();
        assert!((e - (1.0f64 / 54.0).sqrt()).abs() < 1e-15);

        let gv = GeneratingVector::new(5, vec![1, 2]).unwrap();
        let e = wce_bruteforce(&gv, |_| 1.0).unwrap();
        assert!((e * e - PROD5_E2).abs() < 1e-16);

        // all-zero weights
        let e = wce_bruteforce(&gv, |_| 0.0).unwrap();
        assert_eq!(e, 0.0);

        // negative weight rejected
        assert!(wce_bruteforce(&gv, |_| -1.0).is_err());

        // oracle guard
        let big = GeneratingVector::new(3, vec![1; 21]).unwrap();
        assert!(wce_bruteforce(&big, |_| 1.0).is_err());
    }

    #[test]
    fn product_append_example() {
        // n=5: (1, gamma=1) then (2, gamma=0.750661): e2 ~ 1/150 + gamma*G2
        let st = WceState::product(5).unwrap();
        let st = wce_product_append(st, 1, 1.0).unwrap();
        assert!((st.e2() - 1.0 / 150.0).abs() < 1e-18);
        let g2 = 1331.0 / 112500.0;
        let gamma2 = 0.750661;
        let st = wce_product_append(st, 2, gamma2).unwrap();
        let expect = 1.0 / 150.0 + gamma2 * g2;
        assert!((st.e2() - expect).abs() / expect < 1e-13);
        assert!(wce_product_append(st, 0, 1.0).is_err());
    }

    #[test]
    fn product_matches_bruteforce() {
        let mut rng = 0x5eedu64;
        let primes = [3u64, 5, 7, 11, 13, 29, 53, 101];
        for trial in 0..200 {
            let n = primes[trial % primes.len()];
            let s = 1 + (splitmix(&mut rng) * 8.0) as usize;
            let z: Vec<u64> = (0..s).map(|_| random_unit(&mut rng, n)).collect();
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let gv = GeneratingVector::new(n, z).unwrap();
            let dp = wce_product(&gv, &gamma).unwrap();
            let bf = wce_bruteforce(&gv, |u| u.iter().map(|&j| gamma[j]).product()).unwrap();
            assert!(
                (dp * dp - bf * bf).abs() / (bf * bf) < 1e-12,
                "trial {trial}: {dp} vs {bf}"
            );
        }
    }

    #[test]
    fn pod_example_and_degeneracy() {
        // n=5, z=(1,2), Gamma=(1,1,2), gamma=(1,1)
        let gv = GeneratingVector::new(5, vec![1, 2]).unwrap();
        let order = OrderWeights::from_values(&[1.0, 2.0]).unwrap();
        let scheme = WeightScheme::pod(vec![1.0, 1.0], order).unwrap();
        let e = wce_pod_fixed_z(&gv, &scheme).unwrap();
        assert!((e * e - POD5_E2).abs() / POD5_E2 < 1e-13);

        // Gamma_l = 1 degenerates to the product evaluator
        let mut rng = 0x0debu64;
        for _ in 0..20 {
            let n = 29u64;
            let s = 1 + (splitmix(&mut rng) * 6.0) as usize;
            let z: Vec<u64> = (0..s).map(|_| random_unit(&mut rng, n)).collect();
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let gv = GeneratingVector::new(n, z).unwrap();
            let pod = WeightScheme::pod(gamma.clone(), OrderWeights::ones(s)).unwrap();
            let a = wce_pod_fixed_z(&gv, &pod).unwrap();
            let b = wce_product(&gv, &gamma).unwrap();
            assert!((a - b).abs() / b < 1e-13);
        }
    }

    #[test]
    fn pod_matches_bruteforce() {
        let mut rng = 0xc0de_2024u64;
        let primes = [5u64, 7, 11, 13, 29, 53, 101];
        for trial in 0..200 {
            let n = primes[trial % primes.len()];
            let s = 1 + (splitmix(&mut rng) * 8.0) as usize;
            let z: Vec<u64> = (0..s).map(|_| random_unit(&mut rng, n)).collect();
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let ratios: Vec<f64> = (0..s).map(|_| 0.2 + 2.0 * splitmix(&mut rng)).collect();
            let order = OrderWeights::from_ratios(ratios).unwrap();
            let gv = GeneratingVector::new(n, z).unwrap();
            let scheme = WeightScheme::pod(gamma, order).unwrap();
            let dp = wce_pod_fixed_z(&gv, &scheme).unwrap();
            let bf = wce_bruteforce(&gv, |u| scheme.gamma_u(u)).unwrap();
            assert!(
                (dp * dp - bf * bf).abs() / (bf * bf) < 1e-12,
                "trial {trial}: {dp} vs {bf}"
            );
        }
    }

    #[test]
    fn coordinate_reflection_symmetry() {
        // wce(z_i) = wce(n - z_i) in any single coordinate
        let mut rng = 0x7777u64;
        let n = 53u64;
        for _ in 0..20 {
            let s = 2 + (splitmix(&mut rng) * 5.0) as usize;
            let z: Vec<u64> = (0..s).map(|_| random_unit(&mut rng, n)).collect();
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let flip = (splitmix(&mut rng) * s as f64) as usize;
            let mut z2 = z.clone();
            z2[flip] = n - z2[flip];
            let a = wce_product(&GeneratingVector::new(n, z).unwrap(), &gamma).unwrap();
            let b = wce_product(&GeneratingVector::new(n, z2).unwrap(), &gamma).unwrap();
            assert!((a - b).abs() / a < 1e-13);
        }
    }

    #[test]
    fn product_state_matches_mean_identity() {
        // e2 = -1 + mean(per_point), up to the cancellation of the mean form
        let mut rng = 0x99u64;
        for n in [5u64, 11, 31] {
            let mut st = WceState::product(n).unwrap();
            for _ in 0..6 {
                let z = random_unit(&mut rng, n);
                st = wce_product_append(st, z, 0.5 + splitmix(&mut rng)).unwrap();
            }
            let mean = sums::sum(st.per_point().unwrap()) / n as f64;
            assert!(
                (st.e2() - (mean - 1.0)).abs() <= 1e-12 * st.e2(),
                "n = {n}: {} vs {}",
                st.e2(),
                mean - 1.0
            );
        }
    }

    #[test]
    fn appending_increases_error() {
        let mut rng = 0x1234u64;
        let n = 101u64;
        let mut st = WceState::product(n).unwrap();
        let mut prev = 0.0;
        for _ in 0..10 {
            let z = random_unit(&mut rng, n);
            let g = 0.01 + splitmix(&mut rng);
            st = wce_product_append(st, z, g).unwrap();
            assert!(st.e2() > prev);
            prev = st.e2();
        }
    }

    #[test]
    fn upper_bound_closed_form() {
        // product gamma = (1), s = 1, lambda = 1, n prime:
        // bound = (1/(6 (n-1)))^(1/2)
        let scheme = WeightScheme::product(vec![1.0]).unwrap();
        for n in [5u64, 101, 251] {
            let b = wce_upper_bound(&scheme, n, 1, 1.0).unwrap();
            let expect = (1.0 / (6.0 * (n - 1) as f64)).sqrt();
            assert!((b - expect).abs() / expect < 1e-14, "n = {n}");
        }
        assert!(wce_upper_bound(&scheme, 5, 1, 0.5).is_err());
    }

    #[test]
    fn upper_bound_matches_subset_sum() {
        let mut rng = 0xabc123u64;
        for trial in 0..40 {
            let n = 29u64;
            let s = 1 + (splitmix(&mut rng) * 8.0) as usize;
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let ratios: Vec<f64> = (0..s).map(|_| 0.2 + 2.0 * splitmix(&mut rng)).collect();
            let scheme = WeightScheme::pod(gamma, OrderWeights::from_ratios(ratios).unwrap()).unwrap();
            let lambda = 0.55 + 0.45 * splitmix(&mut rng);
            let rho = 2.0 * crate::numerics::zeta(2.0 * lambda).unwrap() / TWO_PI_SQ.powf(lambda);
            let mut sum = 0.0;
            for mask in 1u64..(1 << s) {
                let u: Vec<usize> = (0..s).filter(|j| mask >> j & 1 == 1).collect();
                sum += scheme.gamma_u(&u).powf(lambda) * rho.powi(u.len() as i32);
            }
            let expect = (sum / euler_totient(n) as f64).powf(1.0 / (2.0 * lambda));
            let got = wce_upper_bound(&scheme, n, s, lambda).unwrap();
            assert!(
                (got - expect).abs() / expect < 1e-12,
                "trial {trial}: {got} vs {expect}"
            );
        }
    }
}
