//! The weight-choosing constructions: double CBC for product and POD
//! weights, and the iterated CBC with its one-dimensional search over the
//! weight-family parameter `lambda`.

use crate::cbc::{self, Engine, KernelPath};
use crate::error::{Error, Result};
use crate::numerics::{zeta, zeta_prime};
use crate::sums;
use crate::wce::{fill_omega_row, first_dimension_e2, GeneratingVector};
use crate::weights::{
    lambda_weights, norm_bound_pod_step, NormBoundSpec, OrderWeights, PodNormState, WeightScheme,
    TWO_PI_SQ,
};

/// Which construction produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Cbc,
    Dcbc,
    Icbc,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Cbc => write!(f, "cbc"),
            Algorithm::Dcbc => write!(f, "dcbc"),
            Algorithm::Icbc => write!(f, "icbc"),
        }
    }
}

/// Inputs echo carried with every construction result.
#[derive(Clone, Debug)]
pub struct RunMeta {
    pub algorithm: Algorithm,
    pub n: u64,
    pub s: usize,
    /// First-dimension weight, for the double CBC runs.
    pub gamma1: Option<f64>,
    /// Where the order factors came from (double CBC with POD weights).
    pub order_source: Option<String>,
    /// The lambda iterates, for iterated CBC runs.
    pub lambda_trace: Vec<f64>,
}

/// A constructed generating vector with its weights and per-dimension
/// squared error, norm bound, and RMS bound histories.
///
/// `m_history`/`e_history` are empty when no norm-bound data was supplied;
/// otherwise `e_history[i]^2 = e2_history[i] * m_history[i]`.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub gv: GeneratingVector,
    pub scheme: WeightScheme,
    pub e2_history: Vec<f64>,
    pub m_history: Vec<f64>,
    pub e_history: Vec<f64>,
    pub meta: RunMeta,
}

impl ConstructionResult {
    /// Final shift-averaged worst-case error.
    pub fn wce(&self) -> f64 {
        self.e2_history.last().copied().unwrap_or(0.0).sqrt()
    }

    /// Final guaranteed RMS error bound `e_sh * sqrt(M)`, when norm data
    /// was supplied.
    pub fn rms_bound(&self) -> Option<f64> {
        self.e_history.last().copied()
    }

    pub fn norm_bound(&self) -> Option<f64> {
        self.m_history.last().copied()
    }
}

/// Inputs of the scalar minimization lemma: `h(x) = (a + b x)(c + d / x)`.
#[derive(Clone, Copy, Debug)]
pub struct MinimizerInputs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// The minimizer `x* = sqrt(a d / (b c))` of `h(x) = (a + b x)(c + d/x)`
/// over positive `x`.
pub fn lemma_minimizer(m: MinimizerInputs) -> Result<f64> {
    if !(m.a > 0.0 && m.b > 0.0 && m.c > 0.0 && m.d > 0.0) {
        return Err(Error::Domain(
            "lemma minimizer requires positive inputs".into(),
        ));
    }
    Ok((m.a * m.d / (m.b * m.c)).sqrt())
}

fn check_gamma1(gamma1: f64) -> Result<()> {
    if !(gamma1 > 0.0) {
        return Err(Error::InvalidWeights(format!(
            "gamma_1 = {gamma1} must be positive"
        )));
    }
    Ok(())
}

/// Double CBC for product weights: each step picks `z_i` minimizing the
/// kernel average `G_i`, then the weight
/// `gamma_i = sqrt(e2_{i-1} b_i^2 / G_i)` minimizing the mean-square bound,
/// and updates `e2` and `M` recursively.
pub fn dcbc_product(
    n: u64,
    s: usize,
    spec: &NormBoundSpec,
    gamma1: f64,
) -> Result<ConstructionResult> {
    dcbc_product_with_path(n, s, spec, gamma1, KernelPath::Auto)
}

pub fn dcbc_product_with_path(
    n: u64,
    s: usize,
    spec: &NormBoundSpec,
    gamma1: f64,
    path: KernelPath,
) -> Result<ConstructionResult> {
    if !spec.is_product() {
        return Err(Error::Domain(
            "double CBC for product weights requires B_l = 1".into(),
        ));
    }
    check_gamma1(gamma1)?;
    if s == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    spec.check_dimension(s)?;
    let mut engine = Engine::new(n, path)?;
    let nf = n as f64;

    let mut per_point = vec![1.0; n as usize];
    let mut z = vec![1u64];
    let mut gamma = Vec::with_capacity(s);
    gamma.push(gamma1);

    let mut e2 = first_dimension_e2(n, gamma1, 1.0);
    let b1 = spec.b(1);
    let mut m = 1.0 + b1 * b1 / gamma1;
    let mut e2_history = vec![e2];
    let mut m_history = vec![m];
    let mut e_history = vec![(e2 * m).sqrt()];

    engine.fill_row(1);
    for (p, &w) in per_point.iter_mut().zip(engine.row().iter()) {
        *p *= 1.0 + gamma1 * w;
    }

    for i in 2..=s {
        let (zi, _) = engine.scores(&per_point, i == 2).argmin();
        engine.fill_row(zi);
        let g = sums::dot(engine.row(), &per_point) / nf;
        if !(g > 0.0) {
            return Err(Error::Domain(format!(
                "kernel average G_{i} = {g} is not positive"
            )));
        }
        let b = spec.b(i);
        let gi = (e2 * b * b / g).sqrt();
        e2 += gi * g;
        m *= 1.0 + b * b / gi;
        for (p, &w) in per_point.iter_mut().zip(engine.row().iter()) {
            *p *= 1.0 + gi * w;
        }
        z.push(zi);
        gamma.push(gi);
        e2_history.push(e2);
        m_history.push(m);
        e_history.push((e2 * m).sqrt());
    }

    Ok(ConstructionResult {
        gv: GeneratingVector::new(n, z)?,
        scheme: WeightScheme::product(gamma)?,
        e2_history,
        m_history,
        e_history,
        meta: RunMeta {
            algorithm: Algorithm::Dcbc,
            n,
            s,
            gamma1: Some(gamma1),
            order_source: None,
            lambda_trace: Vec::new(),
        },
    })
}

/// Double CBC for POD weights with given order factors `Gamma_l`: each step
/// updates the layered tables, picks `z_i`, then
/// `gamma_i = sqrt(e2_{i-1} b_i^2 sum_l H_{i-1,l} / (M_{i-1} G_i))`.
pub fn dcbc_pod(
    n: u64,
    s: usize,
    spec: &NormBoundSpec,
    order: &OrderWeights,
    gamma1: f64,
) -> Result<ConstructionResult> {
    dcbc_pod_with_path(n, s, spec, order, gamma1, KernelPath::Auto)
}

pub fn dcbc_pod_with_path(
    n: u64,
    s: usize,
    spec: &NormBoundSpec,
    order: &OrderWeights,
    gamma1: f64,
    path: KernelPath,
) -> Result<ConstructionResult> {
    check_gamma1(gamma1)?;
    if s == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    spec.check_dimension(s)?;
    if order.len() < s {
        return Err(Error::InvalidWeights(format!(
            "{} order weight ratios supplied for dimension {s}",
            order.len()
        )));
    }
    let mut engine = Engine::new(n, path)?;
    let nf = n as f64;

    let mut p: Vec<Vec<f64>> = vec![vec![1.0; n as usize]];
    let mut q = vec![0.0; n as usize];
    let mut z = vec![1u64];
    let mut gamma = Vec::with_capacity(s);
    gamma.push(gamma1);

    let mut e2 = first_dimension_e2(n, gamma1, order.ratio(1));
    let mut norm_state = PodNormState::initial();
    norm_state = norm_bound_pod_step(&norm_state, spec, order, gamma1, 1)?;
    let mut e2_history = vec![e2];
    let mut m_history = vec![norm_state.m()];
    let mut e_history = vec![(e2 * norm_state.m()).sqrt()];

    engine.fill_row(1);
    {
        let scale = order.ratio(1) * gamma1;
        let layer = engine.row().iter().map(|&w| scale * w).collect();
        p.push(layer);
    }

    for i in 2..=s {
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
        if !(g > 0.0) {
            return Err(Error::Domain(format!(
                "kernel average G_{i} = {g} is not positive"
            )));
        }
        let b = spec.b(i);
        let sum_h = norm_state.h_sum(spec, order);
        let gi = (e2 * b * b * sum_h / (norm_state.m() * g)).sqrt();
        e2 += gi * g;
        norm_state = norm_bound_pod_step(&norm_state, spec, order, gi, i)?;

        p.push(vec![0.0; n as usize]);
        for l in (1..=i).rev() {
            let ratio = order.ratio(l) * gi;
            let (lower, upper) = p.split_at_mut(l);
            let prev = &lower[l - 1];
            for ((dst, &prv), &w) in upper[0].iter_mut().zip(prev.iter()).zip(engine.row()) {
                *dst += ratio * w * prv;
            }
        }
        z.push(zi);
        gamma.push(gi);
        e2_history.push(e2);
        m_history.push(norm_state.m());
        e_history.push((e2 * norm_state.m()).sqrt());
    }

    Ok(ConstructionResult {
        gv: GeneratingVector::new(n, z)?,
        scheme: WeightScheme::pod(gamma, order.truncated(s))?,
        e2_history,
        m_history,
        e_history,
        meta: RunMeta {
            algorithm: Algorithm::Dcbc,
            n,
            s,
            gamma1: Some(gamma1),
            order_source: None,
            lambda_trace: Vec::new(),
        },
    })
}

/// Evaluates the squared bound `E^2(lambda) = e2(lambda) * M(lambda)` and
/// its lambda-derivative for a fixed generating vector under the
/// lambda-indexed weight family.
///
/// The derivative decomposes `gamma_u' = gamma_u (alpha_|u| + sum_{j in u}
/// beta_j)`, so order-layered tables carrying both the plain products and
/// the beta-weighted products evaluate the subset sums in `O(s^2 n)` (or
/// `O(s n)` per-point recursions when `B_l = 1`).
pub(crate) struct FixedZEvaluator<'a> {
    spec: &'a NormBoundSpec,
    n: u64,
    s: usize,
    rows: Vec<f64>,
    product: bool,
    // layered scratch (POD route)
    p_layer: Vec<Vec<f64>>,
    s_layer: Vec<Vec<f64>>,
    // per-point scratch (product route)
    f_points: Vec<f64>,
    w_points: Vec<f64>,
}

impl<'a> FixedZEvaluator<'a> {
    pub(crate) fn new(gv: &GeneratingVector, spec: &'a NormBoundSpec) -> Result<Self> {
        let n = gv.modulus();
        let s = gv.dimension();
        spec.check_dimension(s)?;
        let mut rows = vec![0.0; s * n as usize];
        for (j, row) in rows.chunks_mut(n as usize).enumerate() {
            fill_omega_row(n, gv.components()[j], row);
        }
        let product = spec.is_product();
        let (p_layer, s_layer) = if product {
            (Vec::new(), Vec::new())
        } else {
            (
                vec![vec![0.0; n as usize]; s + 1],
                vec![vec![0.0; n as usize]; s + 1],
            )
        };
        let (f_points, w_points) = if product {
            (vec![0.0; n as usize], vec![0.0; n as usize])
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Self {
            spec,
            n,
            s,
            rows,
            product,
            p_layer,
            s_layer,
            f_points,
            w_points,
        })
    }

    /// Returns `(E^2(lambda), d E^2 / d lambda)`.
    pub(crate) fn evaluate(&mut self, lambda: f64) -> Result<(f64, f64)> {
        if !(lambda > 0.5 && lambda <= 1.0) {
            return Err(Error::Domain(format!(
                "lambda must lie in (1/2, 1], got {lambda}"
            )));
        }
        let s = self.s;
        let nf = self.n as f64;
        let z2 = zeta(2.0 * lambda)?;
        let zp2 = zeta_prime(2.0 * lambda)?;
        let one_plus = 1.0 + lambda;
        let expo = 1.0 / one_plus;
        let c1 = TWO_PI_SQ.ln() - 2.0 * zp2 / z2;
        let ln_scale = lambda * TWO_PI_SQ.ln() - (2.0 * z2).ln();
        let scale = TWO_PI_SQ.powf(lambda) / (2.0 * z2);

        let mut gamma = Vec::with_capacity(s);
        let mut beta = Vec::with_capacity(s);
        let mut t = Vec::with_capacity(s);
        for j in 1..=s {
            let b = self.spec.b(j);
            let g = (scale * b * b).powf(expo);
            gamma.push(g);
            beta.push(-(ln_scale + 2.0 * b.ln()) / (one_plus * one_plus));
            t.push(b * b / g);
        }

        if self.product {
            // beta~ absorbs the per-member share of alpha_l = l c1/(1+lambda)
            let beta_t: Vec<f64> = beta.iter().map(|bj| bj + c1 / one_plus).collect();
            self.f_points.iter_mut().for_each(|x| *x = 1.0);
            self.w_points.iter_mut().for_each(|x| *x = 0.0);
            let mut e2 = 0.0;
            for j in 0..s {
                let row = &self.rows[j * self.n as usize..(j + 1) * self.n as usize];
                let gj = gamma[j];
                let bt = beta_t[j];
                let mut acc = sums::Accumulator::default();
                for ((f, w), &om) in self
                    .f_points
                    .iter_mut()
                    .zip(self.w_points.iter_mut())
                    .zip(row.iter())
                {
                    let f_old = *f;
                    let go = gj * om;
                    acc.add(om * f_old);
                    *w = *w * (1.0 + go) + go * bt * f_old;
                    *f = f_old * (1.0 + go);
                }
                e2 += if j == 0 {
                    first_dimension_e2(self.n, gj, 1.0)
                } else {
                    gj * acc.value() / nf
                };
            }
            let t1 = sums::sum(&self.w_points) / nf;
            let (mut m, mut w) = (1.0, 0.0);
            for j in 0..s {
                let tj = t[j];
                w = w * (1.0 + tj) + tj * beta_t[j] * m;
                m *= 1.0 + tj;
            }
            Ok((e2 * m, t1 * m - e2 * w))
        } else {
            let order = self.spec.order();
            let ratio_g: Vec<f64> = (1..=s).map(|l| order.ratio(l).powf(expo)).collect();
            let mut ln_b = 0.0;
            let mut alpha = Vec::with_capacity(s + 1);
            alpha.push(0.0);
            for l in 1..=s {
                ln_b += order.ratio(l).ln();
                alpha.push(-ln_b / (one_plus * one_plus) + l as f64 * c1 / one_plus);
            }

            for layer in self.p_layer.iter_mut().chain(self.s_layer.iter_mut()) {
                layer.iter_mut().for_each(|x| *x = 0.0);
            }
            self.p_layer[0].iter_mut().for_each(|x| *x = 1.0);
            for j in 0..s {
                let row = &self.rows[j * self.n as usize..(j + 1) * self.n as usize];
                let gj = gamma[j];
                let bj = beta[j];
                for l in (1..=(j + 1).min(s)).rev() {
                    let r = ratio_g[l - 1] * gj;
                    let (p_lower, p_upper) = self.p_layer.split_at_mut(l);
                    let (s_lower, s_upper) = self.s_layer.split_at_mut(l);
                    let p_prev = &p_lower[l - 1];
                    let s_prev = &s_lower[l - 1];
                    let p_dst = &mut p_upper[0];
                    let s_dst = &mut s_upper[0];
                    for k in 0..self.n as usize {
                        let go = r * row[k];
                        s_dst[k] += go * (s_prev[k] + bj * p_prev[k]);
                        p_dst[k] += go * p_prev[k];
                    }
                }
            }
            let mut e2 = sums::Accumulator::default();
            let mut t1 = sums::Accumulator::default();
            for l in 1..=s {
                let pm = sums::sum(&self.p_layer[l]) / nf;
                let sm = sums::sum(&self.s_layer[l]) / nf;
                e2.add(pm);
                t1.add(alpha[l] * pm + sm);
            }
            let e2 = e2.value();
            let t1 = t1.value();

            // norm side: scalar layered recursion in t_j with B/Gamma ratios
            let mut hp = vec![0.0; s + 1];
            let mut hs = vec![0.0; s + 1];
            hp[0] = 1.0;
            for j in 0..s {
                let tj = t[j];
                let bj = beta[j];
                for l in (1..=(j + 1).min(s)).rev() {
                    let r = order.ratio(l) / ratio_g[l - 1];
                    hs[l] += r * tj * (hs[l - 1] + bj * hp[l - 1]);
                    hp[l] += r * tj * hp[l - 1];
                }
            }
            let m = sums::sum(&hp);
            let t2 = sums::sum(&hs)
                + alpha
                    .iter()
                    .zip(hp.iter())
                    .map(|(a, h)| a * h)
                    .sum::<f64>();
            Ok((e2 * m, t1 * m - e2 * t2))
        }
    }
}

/// `d E^2 / d lambda` for a fixed vector under the lambda-indexed weight
/// family (the squared-bound derivative of the stopping rule and the inner
/// search).
pub fn icbc_objective_derivative(
    gv: &GeneratingVector,
    spec: &NormBoundSpec,
    lambda: f64,
) -> Result<f64> {
    let mut ev = FixedZEvaluator::new(gv, spec)?;
    Ok(ev.evaluate(lambda)?.1)
}

/// Options of the iterated CBC run.
#[derive(Clone, Copy, Debug)]
pub struct IcbcOptions {
    /// Starting point, in `(1/2, 1]`.
    pub lambda0: f64,
    /// Gradient threshold; `None` resolves to `1e-3 * E(lambda_0)`.
    pub tau: Option<f64>,
    /// Maximum iteration index (the run constructs at most `k_max + 1`
    /// generating vectors).
    pub k_max: usize,
}

impl Default for IcbcOptions {
    fn default() -> Self {
        Self {
            lambda0: 0.75,
            tau: None,
            k_max: 10,
        }
    }
}

/// Why the iterated CBC run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    GradientBelowTau,
    MaxIterations,
    CycleDetected,
    Boundary,
}

/// One iterate of the iterated CBC run.
#[derive(Clone, Debug)]
pub struct IcbcIterate {
    pub lambda: f64,
    pub gv: GeneratingVector,
    /// RMS bound `E(lambda_k)` of this iterate.
    pub e_bound: f64,
    /// `d E^2 / d lambda` at `lambda_k` with this iterate's vector fixed.
    pub de_squared: f64,
}

/// Trace of an iterated CBC run. The returned construction is the best
/// (lowest-bound) iterate, whose `lambda` is `lambda_star`.
#[derive(Clone, Debug)]
pub struct IcbcTrace {
    pub iterates: Vec<IcbcIterate>,
    pub lambda_star: f64,
    pub stop_reason: StopReason,
}

const LAMBDA_LO: f64 = 0.5 + 1e-3;
const LAMBDA_HI: f64 = 1.0;
const LAMBDA_XTOL: f64 = 1e-6;

/// Minimizes `E^2(lambda)` at fixed `z` by a safeguarded root search on the
/// derivative (Illinois-damped false position with a bisection fallback).
/// Returns the minimizer and whether it pinned to an interval endpoint.
fn minimize_over_lambda(ev: &mut FixedZEvaluator<'_>) -> Result<(f64, bool)> {
    let (e_lo, g_lo) = ev.evaluate(LAMBDA_LO)?;
    let (e_hi, g_hi) = ev.evaluate(LAMBDA_HI)?;
    if g_lo >= 0.0 && g_hi >= 0.0 {
        return Ok((LAMBDA_LO, true));
    }
    if g_lo <= 0.0 && g_hi <= 0.0 {
        return Ok((LAMBDA_HI, true));
    }
    if g_lo > 0.0 && g_hi < 0.0 {
        // interior maximum: take the better endpoint
        return Ok(if e_lo <= e_hi {
            (LAMBDA_LO, true)
        } else {
            (LAMBDA_HI, true)
        });
    }
    let (mut a, mut ga) = (LAMBDA_LO, g_lo);
    let (mut b, mut gb) = (LAMBDA_HI, g_hi);
    let mut side = 0i8;
    for iter in 0..200 {
        if b - a < LAMBDA_XTOL {
            break;
        }
        let mut x = (a * gb - b * ga) / (gb - ga);
        if !x.is_finite() || x <= a || x >= b || iter % 8 == 7 {
            x = 0.5 * (a + b);
        }
        let (_, gx) = ev.evaluate(x)?;
        if gx == 0.0 {
            return Ok((x, false));
        }
        if gx < 0.0 {
            a = x;
            ga = gx;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            gb = gx;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok((0.5 * (a + b), false))
}

/// The iterated CBC algorithm: repeatedly generate lambda-optimal weights,
/// construct a vector by the classic CBC, and move `lambda` to the
/// minimizer of the bound with the vector held fixed. Returns the best
/// iterate and the full trace.
pub fn icbc(
    n: u64,
    s: usize,
    spec: &NormBoundSpec,
    opts: IcbcOptions,
) -> Result<(ConstructionResult, IcbcTrace)> {
    if !(opts.lambda0 > 0.5 && opts.lambda0 <= 1.0) {
        return Err(Error::Domain(format!(
            "lambda_0 must lie in (1/2, 1], got {}",
            opts.lambda0
        )));
    }
    if let Some(tau) = opts.tau {
        if !(tau > 0.0) {
            return Err(Error::Domain(format!("tau = {tau} must be positive")));
        }
    }
    if opts.k_max < 1 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    spec.check_dimension(s)?;

    let mut lambda = opts.lambda0;
    let mut tau = opts.tau;
    let mut iterates: Vec<IcbcIterate> = Vec::new();
    let mut results: Vec<ConstructionResult> = Vec::new();
    let mut stop = StopReason::MaxIterations;

    for k in 0..=opts.k_max {
        let scheme = lambda_weights(spec, lambda, s)?;
        let mut res = if scheme.is_effectively_product() {
            let gamma: Vec<f64> = (1..=s).map(|j| scheme.gamma(j)).collect();
            cbc::cbc_product(n, s, &gamma, Some(spec))?
        } else {
            cbc::cbc_pod(n, s, &scheme, Some(spec))?
        };
        res.meta.algorithm = Algorithm::Icbc;
        let e_bound = *res.e_history.last().expect("norm data was supplied");

        let mut ev = FixedZEvaluator::new(&res.gv, spec)?;
        let (_, de) = ev.evaluate(lambda)?;
        iterates.push(IcbcIterate {
            lambda,
            gv: res.gv.clone(),
            e_bound,
            de_squared: de,
        });
        results.push(res);

        let tau = *tau.get_or_insert(1e-3 * e_bound);
        if de.abs() < 2.0 * e_bound * tau {
            stop = StopReason::GradientBelowTau;
            break;
        }
        if k == opts.k_max {
            stop = StopReason::MaxIterations;
            break;
        }
        let (next, pinned) = minimize_over_lambda(&mut ev)?;
        if pinned {
            stop = StopReason::Boundary;
            break;
        }
        if iterates.iter().any(|it| (it.lambda - next).abs() < 1e-6) {
            stop = StopReason::CycleDetected;
            break;
        }
        lambda = next;
    }

    let best = iterates
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.e_bound.total_cmp(&b.1.e_bound))
        .map(|(i, _)| i)
        .expect("at least one iterate");
    let lambda_star = iterates[best].lambda;
    let mut result = results.into_iter().nth(best).expect("result per iterate");
    result.meta.lambda_trace = iterates.iter().map(|it| it.lambda).collect();

    Ok((
        result,
        IcbcTrace {
            iterates,
            lambda_star,
            stop_reason: stop,
        },
    ))
}

/// Default first-dimension weight for the double CBC runs.
pub fn default_gamma1() -> f64 {
    1.0
}
