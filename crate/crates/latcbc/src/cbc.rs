//! The per-dimension minimization kernel and the classic CBC construction.
//!
//! Choosing component `i` requires `G_i(z) = (1/n) sum_k B2({k z / n}) v(k)`
//! for every candidate `z` in the unit group mod `n`. For prime `n` the
//! matrix `B2({k z / n})` restricted to `k, z != 0` becomes a circulant
//! under the group-logarithm permutation `z = g^a`, so all `n - 1` values
//! come out of one circular correlation, computed here as a power-of-two
//! padded fast convolution. The `k = 0` column is z-independent and folded
//! in analytically as `B2(0) * v(0)`.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::construct::{Algorithm, ConstructionResult, RunMeta};
use crate::error::{Error, Result};
use crate::numerics::{b2, PrimeModulus};
use crate::sums;
use crate::wce::{first_dimension_e2, gcd, GeneratingVector};
use crate::weights::{
    norm_bound_pod_step, NormBoundSpec, OrderWeights, PodNormState, WeightScheme,
};

/// The factored form of the kernel matrix for a prime modulus: the k = 0
/// column value, the generator-permuted first row, and the discrete-log
/// index that recovers any entry.
#[derive(Clone, Debug)]
pub struct KernelColumn {
    modulus: PrimeModulus,
    omega0: f64,
    perm_values: Vec<f64>,
    g_pow: Vec<u32>,
    dlog: Vec<u32>,
    b2_table: Vec<f64>,
}

impl KernelColumn {
    pub fn new(modulus: PrimeModulus) -> Result<Self> {
        let n = modulus.modulus();
        if n > u32::MAX as u64 {
            return Err(Error::InvalidInput(format!(
                "modulus {n} is too large for the kernel index tables"
            )));
        }
        let nf = n as f64;
        let b2_table: Vec<f64> = (0..n).map(|r| b2(r as f64 / nf)).collect();
        let m = (n - 1) as usize;
        let g = modulus.generator();
        let mut g_pow = vec![0u32; m];
        let mut dlog = vec![0u32; n as usize];
        let mut x = 1u64;
        for (a, slot) in g_pow.iter_mut().enumerate() {
            *slot = x as u32;
            dlog[x as usize] = a as u32;
            x = x * g % n;
        }
        let perm_values = g_pow.iter().map(|&p| b2_table[p as usize]).collect();
        Ok(Self {
            modulus,
            omega0: b2_table[0],
            perm_values,
            g_pow,
            dlog,
            b2_table,
        })
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    /// `B2(0) = 1/6`, the k = 0 column value.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// `B2({g^a / n})` for `a = 0 .. n-2`.
    pub fn perm_values(&self) -> &[f64] {
        &self.perm_values
    }

    /// Discrete logarithm of a unit `z` with respect to the stored generator.
    pub fn dlog(&self, z: u64) -> u32 {
        debug_assert!(z >= 1 && z < self.modulus.modulus());
        self.dlog[z as usize]
    }

    /// `B2({k z / n})` recovered through the permutation:
    /// `perm_values[(dlog z + dlog k) mod (n - 1)]` for `k != 0`.
    pub fn omega(&self, z: u64, k: u64) -> f64 {
        if k == 0 {
            return self.omega0;
        }
        let m = (self.modulus.modulus() - 1) as usize;
        let idx = (self.dlog(z) as usize + self.dlog(k) as usize) % m;
        self.perm_values[idx]
    }

    pub(crate) fn b2_table(&self) -> &[f64] {
        &self.b2_table
    }
}

/// FFT-backed evaluator of the kernel matrix-vector product.
pub struct FastKernel {
    col: KernelColumn,
    len: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    kernel_fft: Vec<Complex<f64>>,
    buf: Vec<Complex<f64>>,
    scratch: Vec<Complex<f64>>,
}

impl FastKernel {
    pub fn new(col: KernelColumn) -> Self {
        let n = col.modulus.modulus() as usize;
        let m = n - 1;
        let len = (2 * m - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        let scratch_len = fft
            .get_inplace_scratch_len()
            .max(ifft.get_inplace_scratch_len());
        let mut scratch = vec![Complex::new(0.0, 0.0); scratch_len];
        let mut kernel_fft = vec![Complex::new(0.0, 0.0); len];
        for (slot, &c) in kernel_fft.iter_mut().zip(col.perm_values.iter()) {
            *slot = Complex::new(c, 0.0);
        }
        fft.process_with_scratch(&mut kernel_fft, &mut scratch);
        let buf = vec![Complex::new(0.0, 0.0); len];
        Self {
            col,
            len,
            fft,
            ifft,
            kernel_fft,
            buf,
            scratch,
        }
    }

    pub fn column(&self) -> &KernelColumn {
        &self.col
    }

    /// `w(z) = sum_k B2({k z / n}) v(k)` for every unit `z`; index 0 of the
    /// returned vector is unused.
    ///
    /// With `z = g^a`, `k = g^b` the sum over `k != 0` is the circular
    /// correlation `sum_b c[(a+b) mod (n-1)] u[b]` of the permuted kernel row
    /// `c` with `u[b] = v[g^b]`, evaluated as a padded linear convolution
    /// against the time-reversed `u`.
    pub fn matvec(&mut self, v: &[f64]) -> Vec<f64> {
        let n = self.col.modulus.modulus() as usize;
        debug_assert_eq!(v.len(), n);
        let m = n - 1;
        self.buf.fill(Complex::new(0.0, 0.0));
        self.buf[0] = Complex::new(v[self.col.g_pow[0] as usize], 0.0);
        for b in 1..m {
            self.buf[b] = Complex::new(v[self.col.g_pow[m - b] as usize], 0.0);
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (x, k) in self.buf.iter_mut().zip(self.kernel_fft.iter()) {
            *x *= *k;
        }
        self.ifft
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        let scale = 1.0 / self.len as f64;
        let base = self.col.omega0 * v[0];
        let mut w = vec![0.0; n];
        for a in 0..m {
            let mut c = self.buf[a].re;
            if a + 1 < m {
                c += self.buf[a + m].re;
            }
            w[self.col.g_pow[a] as usize] = base + c * scale;
        }
        w
    }
}

/// One-shot fast kernel matvec for a prime modulus (plans an FFT per call;
/// constructions hold a [`FastKernel`] instead).
pub fn kernel_matvec(col: &KernelColumn, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != col.modulus.modulus() as usize {
        return Err(Error::InvalidInput(format!(
            "vector length {} does not match modulus {}",
            v.len(),
            col.modulus.modulus()
        )));
    }
    Ok(FastKernel::new(col.clone()).matvec(v))
}

/// Naive `O(n^2)` kernel matvec for any modulus `n >= 2`; entries are
/// produced only for units `z` (zero elsewhere). This is the explicit
/// fallback route for composite moduli.
pub fn naive_matvec(n: u64, v: &[f64]) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
    }
    if v.len() != n as usize {
        return Err(Error::InvalidInput(format!(
            "vector length {} does not match modulus {n}",
            v.len()
        )));
    }
    let nf = n as f64;
    let b2_table: Vec<f64> = (0..n).map(|r| b2(r as f64 / nf)).collect();
    let mut w = vec![0.0; n as usize];
    for z in 1..n {
        if gcd(z, n) != 1 {
            continue;
        }
        let mut acc = sums::Accumulator::default();
        let mut r = 0u64;
        for &vk in v.iter() {
            acc.add(b2_table[r as usize] * vk);
            r += z;
            if r >= n {
                r -= n;
            }
        }
        w[z as usize] = acc.value();
    }
    Ok(w)
}

/// Per-candidate objective values for one CBC step.
///
/// Scores are averaged over candidate classes whose exact objective values
/// coincide: the reflection `z <-> n - z` always (the kernel is symmetric),
/// and additionally the inversion `z <-> z^-1 mod n` at the second
/// dimension, where the accumulator is still affine in the first kernel row
/// so that substituting `k -> z^-1 k` gives `G_2(z) = G_2(z^-1)` exactly.
/// Averaging removes spurious floating-point asymmetry within a class, so
/// the argmin (ties toward the smaller `z`) is stable across the fast and
/// naive evaluation paths. Non-unit entries are NaN.
#[derive(Clone, Debug)]
pub struct CandidateScores {
    n: u64,
    values: Vec<f64>,
}

impl CandidateScores {
    fn from_raw(n: u64, raw: &[f64], units: Option<&[u64]>, inverses: Option<&[u32]>) -> Self {
        let mut values = vec![f64::NAN; n as usize];
        let mut class = [0u64; 4];
        let mut handle = |z: u64| {
            if !values[z as usize].is_nan() {
                return;
            }
            let mut len = 2;
            class[0] = z;
            class[1] = n - z;
            if let Some(inv) = inverses {
                let zi = inv[z as usize] as u64;
                class[2] = zi;
                class[3] = n - zi;
                len = 4;
            }
            let members = &mut class[..len];
            members.sort_unstable();
            let mut uniq = 0;
            for i in 0..len {
                if i == 0 || members[i] != members[i - 1] {
                    members[uniq] = members[i];
                    uniq += 1;
                }
            }
            let members = &class[..uniq];
            let mean =
                members.iter().map(|&m| raw[m as usize]).sum::<f64>() / uniq as f64;
            for &m in members {
                values[m as usize] = mean;
            }
        };
        match units {
            None => {
                for z in 1..n {
                    handle(z);
                }
            }
            Some(units) => {
                for &z in units {
                    handle(z);
                }
            }
        }
        Self { n, values }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn get(&self, z: u64) -> Option<f64> {
        let v = *self.values.get(z as usize)?;
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    /// The minimizing candidate; ties broken toward the smaller `z`.
    pub fn argmin(&self) -> (u64, f64) {
        let mut best_z = 0u64;
        let mut best = f64::INFINITY;
        for (z, &v) in self.values.iter().enumerate().skip(1) {
            if !v.is_nan() && v < best {
                best = v;
                best_z = z as u64;
            }
        }
        debug_assert!(best_z != 0, "no candidates");
        (best_z, best)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .map(|(z, &v)| (z as u64, v))
    }
}

/// Which evaluation route the engine takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelPath {
    /// Fast for odd primes, naive otherwise.
    Auto,
    Fast,
    Naive,
}

/// Shared per-construction machinery: the Bernoulli table, the candidate
/// scorer, and a scratch kernel row.
pub(crate) struct Engine {
    n: u64,
    kind: EngineKind,
    b2_table: Vec<f64>,
    units: Option<Vec<u64>>,
    inverses: Vec<u32>,
    row: Vec<f64>,
}

enum EngineKind {
    Fast(FastKernel),
    Naive,
}

impl Engine {
    pub(crate) fn new(n: u64, path: KernelPath) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
        }
        let use_fast = match path {
            KernelPath::Auto => n >= 3 && crate::numerics::is_prime(n),
            KernelPath::Fast => {
                if n < 3 || !crate::numerics::is_prime(n) {
                    return Err(Error::NotPrime(n));
                }
                true
            }
            KernelPath::Naive => false,
        };
        let nf = n as f64;
        let mut inverses = vec![0u32; n as usize];
        for z in 1..n {
            if let Some(inv) = crate::numerics::mod_inverse(z, n) {
                inverses[z as usize] = inv as u32;
            }
        }
        if use_fast {
            let col = KernelColumn::new(PrimeModulus::new(n)?)?;
            let b2_table = col.b2_table().to_vec();
            Ok(Self {
                n,
                kind: EngineKind::Fast(FastKernel::new(col)),
                b2_table,
                units: None,
                inverses,
                row: vec![0.0; n as usize],
            })
        } else {
            let b2_table: Vec<f64> = (0..n).map(|r| b2(r as f64 / nf)).collect();
            let units: Vec<u64> = (1..n).filter(|&z| gcd(z, n) == 1).collect();
            Ok(Self {
                n,
                kind: EngineKind::Naive,
                b2_table,
                units: Some(units),
                inverses,
                row: vec![0.0; n as usize],
            })
        }
    }

    /// Candidate scores for the next dimension. `second_dim` engages the
    /// additional exact `z <-> z^-1` class at dimension 2.
    pub(crate) fn scores(&mut self, v: &[f64], second_dim: bool) -> CandidateScores {
        let inverses = if second_dim {
            Some(self.inverses.as_slice())
        } else {
            None
        };
        match &mut self.kind {
            EngineKind::Fast(fk) => {
                let raw = fk.matvec(v);
                CandidateScores::from_raw(self.n, &raw, None, inverses)
            }
            EngineKind::Naive => {
                let units = self.units.as_ref().expect("naive engine has units");
                let mut raw = vec![0.0; self.n as usize];
                for &z in units {
                    let mut acc = sums::Accumulator::default();
                    let mut r = 0u64;
                    for &vk in v.iter() {
                        acc.add(self.b2_table[r as usize] * vk);
                        r += z;
                        if r >= self.n {
                            r -= self.n;
                        }
                    }
                    raw[z as usize] = acc.value();
                }
                CandidateScores::from_raw(self.n, &raw, Some(units), inverses)
            }
        }
    }

    /// Loads `row[k] = B2({k z / n})`.
    pub(crate) fn fill_row(&mut self, z: u64) {
        let mut r = 0u64;
        for slot in self.row.iter_mut() {
            *slot = self.b2_table[r as usize];
            r += z;
            if r >= self.n {
                r -= self.n;
            }
        }
    }

    pub(crate) fn row(&self) -> &[f64] {
        &self.row
    }
}

fn check_product_inputs(n: u64, s: usize, gamma: &[f64]) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if gamma.len() < s {
        return Err(Error::InvalidWeights(format!(
            "{} weights supplied for dimension {s}",
            gamma.len()
        )));
    }
    if gamma[..s].iter().any(|&g| !(g > 0.0)) {
        return Err(Error::InvalidWeights(
            "product weight factors must be positive".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("modulus {n} must be >= 2")));
    }
    Ok(())
}

/// Tracks the norm bound alongside a construction when bound data is given.
pub(crate) enum NormTracker<'a> {
    None,
    Product {
        spec: &'a NormBoundSpec,
        m: f64,
    },
    Pod {
        spec: &'a NormBoundSpec,
        order: OrderWeights,
        state: PodNormState,
    },
}

impl<'a> NormTracker<'a> {
    pub(crate) fn for_product(spec: Option<&'a NormBoundSpec>, s: usize) -> Result<Self> {
        match spec {
            None => Ok(NormTracker::None),
            Some(spec) => {
                spec.check_dimension(s)?;
                if spec.is_product() {
                    Ok(NormTracker::Product { spec, m: 1.0 })
                } else {
                    Ok(NormTracker::Pod {
                        spec,
                        order: OrderWeights::ones(s),
                        state: PodNormState::initial(),
                    })
                }
            }
        }
    }

    pub(crate) fn for_pod(
        spec: Option<&'a NormBoundSpec>,
        scheme_order: &OrderWeights,
        s: usize,
    ) -> Result<Self> {
        match spec {
            None => Ok(NormTracker::None),
            Some(spec) => {
                spec.check_dimension(s)?;
                Ok(NormTracker::Pod {
                    spec,
                    order: scheme_order.truncated(s),
                    state: PodNormState::initial(),
                })
            }
        }
    }

    /// Advances to dimension `i` with weight `gamma_i`; returns `M_i`.
    pub(crate) fn step(&mut self, i: usize, gamma_i: f64) -> Result<Option<f64>> {
        match self {
            NormTracker::None => Ok(None),
            NormTracker::Product { spec, m } => {
                let b = spec.b(i);
                *m *= 1.0 + b * b / gamma_i;
                Ok(Some(*m))
            }
            NormTracker::Pod { spec, order, state } => {
                *state = norm_bound_pod_step(state, spec, order, gamma_i, i)?;
                Ok(Some(state.m()))
            }
        }
    }
}

/// Appends M/E history entries from a norm tracker step.
pub(crate) fn push_norm_history(
    m: Option<f64>,
    e2: f64,
    m_history: &mut Vec<f64>,
    e_history: &mut Vec<f64>,
) {
    if let Some(m) = m {
        m_history.push(m);
        e_history.push((e2 * m).sqrt());
    }
}

/// Classic CBC construction for product weights: `z_1 = 1`, then each
/// `z_i` minimizes the squared error with previous components fixed. The
/// norm-bound data is optional and only feeds the M/E histories.
pub fn cbc_product(
    n: u64,
    s: usize,
    gamma: &[f64],
    norm: Option<&NormBoundSpec>,
) -> Result<ConstructionResult> {
    cbc_product_with_path(n, s, gamma, norm, KernelPath::Auto)
}

pub fn cbc_product_with_path(
    n: u64,
    s: usize,
    gamma: &[f64],
    norm: Option<&NormBoundSpec>,
    path: KernelPath,
) -> Result<ConstructionResult> {
    check_product_inputs(n, s, gamma)?;
    let mut engine = Engine::new(n, path)?;
    let mut tracker = NormTracker::for_product(norm, s)?;

    let nf = n as f64;
    let mut per_point = vec![1.0; n as usize];
    let mut z = Vec::with_capacity(s);
    let mut e2_history = Vec::with_capacity(s);
    let mut m_history = Vec::new();
    let mut e_history = Vec::new();

    let mut e2 = first_dimension_e2(n, gamma[0], 1.0);
    z.push(1u64);
    engine.fill_row(1);
    for (p, &w) in per_point.iter_mut().zip(engine.row().iter()) {
        *p *= 1.0 + gamma[0] * w;
    }
    e2_history.push(e2);
    push_norm_history(tracker.step(1, gamma[0])?, e2, &mut m_history, &mut e_history);

    for i in 2..=s {
        let (zi, _) = engine.scores(&per_point, i == 2).argmin();
        engine.fill_row(zi);
        let g = sums::dot(engine.row(), &per_point) / nf;
        let gi = gamma[i - 1];
        e2 += gi * g;
        for (p, &w) in per_point.iter_mut().zip(engine.row().iter()) {
            *p *= 1.0 + gi * w;
        }
        z.push(zi);
        e2_history.push(e2);
        push_norm_history(tracker.step(i, gi)?, e2, &mut m_history, &mut e_history);
    }

    Ok(ConstructionResult {
        gv: GeneratingVector::new(n, z)?,
        scheme: WeightScheme::product(gamma[..s].to_vec())?,
        e2_history,
        m_history,
        e_history,
        meta: RunMeta {
            algorithm: Algorithm::Cbc,
            n,
            s,
            gamma1: None,
            order_source: None,
            lambda_trace: Vec::new(),
        },
    })
}

/// Classic CBC construction for POD (or order-dependent) weights, using the
/// order-layered tables `p_{i,l}` and the kernel matvec of their
/// ratio-weighted sum.
pub fn cbc_pod(
    n: u64,
    s: usize,
    scheme: &WeightScheme,
    norm: Option<&NormBoundSpec>,
) -> Result<ConstructionResult> {
    cbc_pod_with_path(n, s, scheme, norm, KernelPath::Auto)
}

pub fn cbc_pod_with_path(
    n: u64,
    s: usize,
    scheme: &WeightScheme,
    norm: Option<&NormBoundSpec>,
    path: KernelPath,
) -> Result<ConstructionResult> {
    let order = match scheme {
        WeightScheme::Product { gamma } => {
            return cbc_product_with_path(n, s, gamma, norm, path);
        }
        WeightScheme::OrderDependent { order } | WeightScheme::Pod { order, .. } => order,
    };
    if scheme.dimension() < s {
        return Err(Error::InvalidWeights(format!(
            "scheme covers {} dimensions, construction of {s} requested",
            scheme.dimension()
        )));
    }
    if s == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut engine = Engine::new(n, path)?;
    let mut tracker = NormTracker::for_pod(norm, order, s)?;

    let nf = n as f64;
    let mut p: Vec<Vec<f64>> = vec![vec![1.0; n as usize]];
    let mut q = vec![0.0; n as usize];
    let mut z = Vec::with_capacity(s);
    let mut e2_history = Vec::with_capacity(s);
    let mut m_history = Vec::new();
    let mut e_history = Vec::new();

    let gamma1 = scheme.gamma(1);
    let mut e2 = first_dimension_e2(n, gamma1, order.ratio(1));
    z.push(1u64);
    engine.fill_row(1);
    push_layer(&mut p, 1, order.ratio(1), gamma1, engine.row());
    e2_history.push(e2);
    push_norm_history(tracker.step(1, gamma1)?, e2, &mut m_history, &mut e_history);

    for i in 2..=s {
        // q = sum_{l=1..i} (Gamma_l / Gamma_{l-1}) p_{i-1, l-1}
        q.iter_mut().for_each(|x| *x = 0.0);
        for l in 1..=i {
            let r = order.ratio(l);
            for (dst, &src) in q.iter_mut().zip(p[l - 1].iter()) {
                *dst += r * src;
            }
        }
        let (zi, _) = engine.scores(&q, i == 2).argmin();
        engine.fill_row(zi);
        let g = sums::dot(engine.row(), &q) / nf;
        let gi = scheme.gamma(i);
        e2 += gi * g;
        push_layer(&mut p, i, 0.0, gi, engine.row());
        for l in (1..=i).rev() {
            let ratio = order.ratio(l) * gi;
            let (lower, upper) = p.split_at_mut(l);
            let prev = &lower[l - 1];
            for ((dst, &prv), &w) in upper[0].iter_mut().zip(prev.iter()).zip(engine.row()) {
                *dst += ratio * w * prv;
            }
        }
        z.push(zi);
        e2_history.push(e2);
        push_norm_history(tracker.step(i, gi)?, e2, &mut m_history, &mut e_history);
    }

    Ok(ConstructionResult {
        gv: GeneratingVector::new(n, z)?,
        scheme: scheme.truncated(s),
        e2_history,
        m_history,
        e_history,
        meta: RunMeta {
            algorithm: Algorithm::Cbc,
            n,
            s,
            gamma1: None,
            order_source: None,
            lambda_trace: Vec::new(),
        },
    })
}

/// Grows the layer stack. For dimension 1 the new layer is
/// `Gamma_1 gamma_1 B2-row` directly; later dimensions push a zero layer
/// and apply the descending-l update in the caller.
fn push_layer(p: &mut Vec<Vec<f64>>, i: usize, ratio1: f64, gamma: f64, row: &[f64]) {
    if i == 1 {
        let scale = ratio1 * gamma;
        p.push(row.iter().map(|&w| scale * w).collect());
    } else {
        p.push(vec![0.0; row.len()]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wce::{wce_bruteforce, wce_pod_fixed_z};
    use crate::weights::CoordinateFamily;

    fn splitmix(state: &mut u64) -> f64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn kernel(n: u64) -> KernelColumn {
        KernelColumn::new(PrimeModulus::new(n).unwrap()).unwrap()
    }

    #[test]
    fn perm_values_are_a_permutation() {
        let col = kernel(101);
        let mut sorted = col.perm_values().to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut expect: Vec<f64> = (1..101u64).map(|k| b2(k as f64 / 101.0)).collect();
        expect.sort_by(f64::total_cmp);
        assert_eq!(sorted, expect);
    }

    #[test]
    fn omega_recovery() {
        let col = kernel(53);
        for z in 1..53u64 {
            for k in 0..53u64 {
                let direct = b2((k * z % 53) as f64 / 53.0);
                assert_eq!(col.omega(z, k), direct, "z = {z}, k = {k}");
            }
        }
    }

    #[test]
    fn matvec_constant_and_indicator() {
        for n in [5u64, 101, 251] {
            let col = kernel(n);
            let ones = vec![1.0; n as usize];
            let w = kernel_matvec(&col, &ones).unwrap();
            let expect = 1.0 / (6.0 * n as f64);
            for z in 1..n {
                assert!(
                    (w[z as usize] - expect).abs() < 1e-12 * n as f64,
                    "n = {n}, z = {z}"
                );
            }
            let mut e0 = vec![0.0; n as usize];
            e0[0] = 1.0;
            let w = kernel_matvec(&col, &e0).unwrap();
            for z in 1..n {
                assert!((w[z as usize] - 1.0 / 6.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn matvec_matches_naive() {
        let mut rng = 0x600du64;
        for n in [11u64, 101, 257] {
            let col = kernel(n);
            let v: Vec<f64> = (0..n).map(|_| splitmix(&mut rng) * 2.0 - 1.0).collect();
            let scale: f64 = v.iter().map(|x| x.abs()).sum();
            let fast = kernel_matvec(&col, &v).unwrap();
            let naive = naive_matvec(n, &v).unwrap();
            for z in 1..n as usize {
                assert!(
                    (fast[z] - naive[z]).abs() <= 1e-12 * scale.max(1.0),
                    "n = {n}, z = {z}: {} vs {}",
                    fast[z],
                    naive[z]
                );
            }
        }
    }

    #[test]
    fn naive_matvec_composite_units_only() {
        let v = vec![1.0; 12];
        let w = naive_matvec(12, &v).unwrap();
        assert!(w[2] == 0.0 && w[6] == 0.0);
        let expect = 1.0 / (6.0 * 12.0);
        for z in [1u64, 5, 7, 11] {
            assert!((w[z as usize] - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn candidate_scores_symmetric_and_tie_broken() {
        let raw = vec![0.0, 3.0, 1.0, 1.0 + 1e-18, 3.0];
        let sc = CandidateScores::from_raw(5, &raw, None, None);
        let (z, _) = sc.argmin();
        assert_eq!(z, 2);
        assert_eq!(sc.get(2), sc.get(3));
        assert_eq!(sc.get(1), sc.get(4));
        assert!(sc.get(0).is_none());
    }

    #[test]
    fn cbc_product_small_example() {
        let res = cbc_product(5, 2, &[1.0, 1.0], None).unwrap();
        assert_eq!(res.gv.components(), &[1, 2]);
        let expect = 2081.0 / 112500.0;
        assert!((res.e2_history[1] - expect).abs() / expect < 1e-13);
        assert!(res.m_history.is_empty());
    }

    #[test]
    fn cbc_first_dimension_identity() {
        for n in [3u64, 17, 251] {
            let res = cbc_product(n, 1, &[0.7], None).unwrap();
            let expect = 0.7 / (6.0 * (n * n) as f64);
            assert!((res.e2_history[0] - expect).abs() / expect < 1e-14);
        }
    }

    #[test]
    fn cbc_pod_degenerates_to_product() {
        let gamma: Vec<f64> = (1..=20).map(|i| (i as f64).powf(-1.3)).collect();
        let scheme = WeightScheme::pod(gamma.clone(), OrderWeights::ones(20)).unwrap();
        let pod = cbc_pod(101, 20, &scheme, None).unwrap();
        let prod = cbc_product(101, 20, &gamma, None).unwrap();
        assert_eq!(pod.gv.components(), prod.gv.components());
        for (a, b) in pod.e2_history.iter().zip(prod.e2_history.iter()) {
            assert!((a - b).abs() / b < 1e-12);
        }
    }

    #[test]
    fn fast_and_naive_agree_on_sample() {
        let mut rng = 0xfadeu64;
        for &n in &[13u64, 53, 127] {
            let s = 8;
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let fast = cbc_product_with_path(n, s, &gamma, None, KernelPath::Fast).unwrap();
            let naive = cbc_product_with_path(n, s, &gamma, None, KernelPath::Naive).unwrap();
            assert_eq!(fast.gv.components(), naive.gv.components(), "n = {n}");
            assert_eq!(fast.e2_history, naive.e2_history);
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let gamma: Vec<f64> = (1..=10).map(|i| (i as f64).powf(-2.0)).collect();
        let a = cbc_product(53, 10, &gamma, None).unwrap();
        let b = cbc_product(53, 10, &gamma, None).unwrap();
        assert_eq!(a.gv.components(), b.gv.components());
        assert_eq!(a.e2_history, b.e2_history);
    }

    #[test]
    fn greedy_steps_are_optimal_under_bruteforce() {
        // Each selected z_i must (within fp noise) minimize the exact
        // squared error over all candidates, previous components fixed.
        let mut rng = 0xbeefu64;
        for &n in &[11u64, 29, 53] {
            let s = 5;
            let gamma: Vec<f64> = (0..s).map(|_| 0.05 + splitmix(&mut rng)).collect();
            let ratios: Vec<f64> = (0..s).map(|_| 0.3 + splitmix(&mut rng)).collect();
            let order = OrderWeights::from_ratios(ratios).unwrap();
            let scheme = WeightScheme::pod(gamma, order).unwrap();
            let res = cbc_pod(n, s, &scheme, None).unwrap();
            for i in 2..=s {
                let mut prefix = res.gv.components()[..i].to_vec();
                let chosen = wce_bruteforce(
                    &GeneratingVector::new(n, prefix.clone()).unwrap(),
                    |u| scheme.gamma_u(u),
                )
                .unwrap();
                for z in 1..n {
                    if gcd(z, n) != 1 {
                        continue;
                    }
                    prefix[i - 1] = z;
                    let alt = wce_bruteforce(
                        &GeneratingVector::new(n, prefix.clone()).unwrap(),
                        |u| scheme.gamma_u(u),
                    )
                    .unwrap();
                    assert!(
                        chosen * chosen <= alt * alt * (1.0 + 1e-9),
                        "n = {n}, dim {i}, z = {z}"
                    );
                }
                prefix[i - 1] = res.gv.components()[i - 1];
            }
        }
    }

    #[test]
    fn construction_error_matches_fixed_z_evaluator() {
        let gamma: Vec<f64> = (1..=12).map(|i| (i as f64).powf(-2.0)).collect();
        let scheme = WeightScheme::pod(gamma, OrderWeights::factorial(12)).unwrap();
        let res = cbc_pod(53, 12, &scheme, None).unwrap();
        let e = wce_pod_fixed_z(&res.gv, &scheme).unwrap();
        let e2 = res.e2_history.last().unwrap();
        assert!((e * e - e2).abs() / e2 < 1e-12);
    }

    #[test]
    fn norm_histories_certify_bound() {
        let spec = NormBoundSpec::product_form(CoordinateFamily::PolynomialDecay(2.0));
        let gamma: Vec<f64> = (1..=10).map(|i| (i as f64).powf(-2.0)).collect();
        let res = cbc_product(31, 10, &gamma, Some(&spec)).unwrap();
        assert_eq!(res.m_history.len(), 10);
        for i in 0..10 {
            let lhs = res.e_history[i] * res.e_history[i];
            let rhs = res.e2_history[i] * res.m_history[i];
            assert!((lhs - rhs).abs() <= 1e-13 * rhs);
        }
    }

    #[test]
    fn forced_fast_path_rejects_composites() {
        assert!(cbc_product_with_path(12, 2, &[1.0, 1.0], None, KernelPath::Fast).is_err());
        // auto path handles composites naively
        let res = cbc_product(12, 3, &[1.0, 0.5, 0.25], None).unwrap();
        for &z in res.gv.components() {
            assert_eq!(gcd(z, 12), 1);
        }
    }
}
