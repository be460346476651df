//! Weight schemes and derivative-bound data.
//!
//! The problem input is a pair of sequences `(b_i, B_l)` bounding the mixed
//! first derivatives of the integrand: the `L2` norm of the derivative with
//! respect to the variables in a set `u` is at most `B_|u| * prod_{j in u}
//! b_j^2`. Order-dependent sequences (`B_l`, and the weight factors
//! `Gamma_l`) are stored as a first value plus successive ratios; factorial
//! growth at l = 100 is representable in an f64 but the intermediate
//! products of the norm and error recursions are only stable as ratios.

use crate::error::{Error, Result};
use crate::numerics;
use crate::sums;

/// Per-coordinate factors `b_i` as a lazily evaluated family.
#[derive(Clone, Debug, PartialEq)]
pub enum CoordinateFamily {
    /// `b_i = i^(-c)`
    PolynomialDecay(f64),
    /// `b_i = r^i`
    Geometric(f64),
    /// `b_i = v`
    Constant(f64),
    /// `b_1..b_s` listed explicitly.
    Explicit(Vec<f64>),
}

impl CoordinateFamily {
    /// `b_i`, 1-based.
    pub fn value(&self, i: usize) -> f64 {
        debug_assert!(i >= 1);
        match self {
            CoordinateFamily::PolynomialDecay(c) => (i as f64).powf(-c),
            CoordinateFamily::Geometric(r) => r.powi(i as i32),
            CoordinateFamily::Constant(v) => *v,
            CoordinateFamily::Explicit(v) => v[i - 1],
        }
    }

    fn validate(&self, s: usize) -> Result<()> {
        match self {
            CoordinateFamily::Geometric(r) if !(*r > 0.0) => Err(Error::InvalidInput(
                format!("geometric coordinate family needs r > 0, got {r}"),
            )),
            CoordinateFamily::Constant(v) if !(*v > 0.0) => Err(Error::InvalidInput(
                format!("constant coordinate family needs v > 0, got {v}"),
            )),
            CoordinateFamily::Explicit(v) => {
                if v.len() < s {
                    return Err(Error::InvalidInput(format!(
                        "coordinate list has {} entries, dimension {s} requested",
                        v.len()
                    )));
                }
                if v.iter().any(|&x| !(x > 0.0)) {
                    return Err(Error::InvalidInput(
                        "coordinate list entries must be positive".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Order-dependent factors `B_l`, stored as `B_1` plus successive ratios
/// `B_l / B_(l-1)` with the convention `B_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub enum OrderFamily {
    /// `B_l = 1`
    Ones,
    /// `B_l = l`
    Linear,
    /// `B_l = l!`
    Factorial,
    Explicit { first: f64, ratios: Vec<f64> },
}

impl OrderFamily {
    /// Builds the ratio representation from explicit values `B_1..B_s`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty order-factor list".into()));
        }
        if values.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidInput(
                "order factors must be positive".into(),
            ));
        }
        let ratios = values.windows(2).map(|w| w[1] / w[0]).collect();
        Ok(OrderFamily::Explicit {
            first: values[0],
            ratios,
        })
    }

    /// `B_l / B_(l-1)` for `l >= 1` (`B_0 = 1`).
    pub fn ratio(&self, l: usize) -> f64 {
        debug_assert!(l >= 1);
        match self {
            OrderFamily::Ones => 1.0,
            OrderFamily::Linear => {
                if l == 1 {
                    1.0
                } else {
                    l as f64 / (l - 1) as f64
                }
            }
            OrderFamily::Factorial => l as f64,
            OrderFamily::Explicit { first, ratios } => {
                if l == 1 {
                    *first
                } else {
                    ratios[l - 2]
                }
            }
        }
    }

    /// Materializes `B_l` as the product of ratios. Intended for small `l`
    /// (oracles, reports); the recursions never call this.
    pub fn value(&self, l: usize) -> f64 {
        (1..=l).map(|i| self.ratio(i)).product()
    }

    /// `ln B_l`, accumulated from the log-ratios.
    pub fn ln_value(&self, l: usize) -> f64 {
        (1..=l).map(|i| self.ratio(i).ln()).sum()
    }

    pub fn is_ones(&self) -> bool {
        match self {
            OrderFamily::Ones => true,
            OrderFamily::Explicit { first, ratios } => {
                *first == 1.0 && ratios.iter().all(|&r| r == 1.0)
            }
            _ => false,
        }
    }

    /// Highest index an explicit list can serve; `None` for closed forms.
    pub fn explicit_len(&self) -> Option<usize> {
        match self {
            OrderFamily::Explicit { ratios, .. } => Some(ratios.len() + 1),
            _ => None,
        }
    }
}

/// The `(b_i, B_l)` derivative-bound data.
#[derive(Clone, Debug, PartialEq)]
pub struct NormBoundSpec {
    b: CoordinateFamily,
    order: OrderFamily,
}

impl NormBoundSpec {
    pub fn new(b: CoordinateFamily, order: OrderFamily) -> Self {
        Self { b, order }
    }

    /// Product-form bound data (`B_l = 1`).
    pub fn product_form(b: CoordinateFamily) -> Self {
        Self {
            b,
            order: OrderFamily::Ones,
        }
    }

    /// `b_i`, 1-based.
    pub fn b(&self, i: usize) -> f64 {
        self.b.value(i)
    }

    pub fn coordinate_family(&self) -> &CoordinateFamily {
        &self.b
    }

    pub fn order(&self) -> &OrderFamily {
        &self.order
    }

    pub fn is_product(&self) -> bool {
        self.order.is_ones()
    }

    /// Checks the family data can serve dimensions `1..=s`.
    pub fn check_dimension(&self, s: usize) -> Result<()> {
        if s == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        self.b.validate(s)?;
        if let Some(len) = self.order.explicit_len() {
            if len < s {
                return Err(Error::InvalidInput(format!(
                    "order-factor list has {len} entries, dimension {s} requested"
                )));
            }
        }
        Ok(())
    }
}

/// Order-dependent weight factors `Gamma_l`, stored as successive ratios
/// `Gamma_l / Gamma_(l-1)` with `Gamma_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderWeights {
    ratios: Vec<f64>,
}

impl OrderWeights {
    pub fn from_ratios(ratios: Vec<f64>) -> Result<Self> {
        if ratios.iter().any(|&r| !(r > 0.0)) {
            return Err(Error::InvalidWeights(
                "order weight ratios must be positive".into(),
            ));
        }
        Ok(Self { ratios })
    }

    /// Builds the ratio representation from explicit values `Gamma_1..Gamma_s`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidWeights(
                "order weight factors must be positive".into(),
            ));
        }
        let mut ratios = Vec::with_capacity(values.len());
        let mut prev = 1.0;
        for &v in values {
            ratios.push(v / prev);
            prev = v;
        }
        Ok(Self { ratios })
    }

    /// `Gamma_l = 1`.
    pub fn ones(s: usize) -> Self {
        Self {
            ratios: vec![1.0; s],
        }
    }

    /// `Gamma_l = l!`.
    pub fn factorial(s: usize) -> Self {
        Self {
            ratios: (1..=s).map(|l| l as f64).collect(),
        }
    }

    /// `Gamma_l = l`.
    pub fn linear(s: usize) -> Self {
        Self {
            ratios: (1..=s)
                .map(|l| if l == 1 { 1.0 } else { l as f64 / (l - 1) as f64 })
                .collect(),
        }
    }

    /// `Gamma_l = B_l` for the given order family.
    pub fn matching_order_family(order: &OrderFamily, s: usize) -> Self {
        Self {
            ratios: (1..=s).map(|l| order.ratio(l)).collect(),
        }
    }

    /// `Gamma_l / Gamma_(l-1)`, `l >= 1`.
    pub fn ratio(&self, l: usize) -> f64 {
        self.ratios[l - 1]
    }

    /// Materialized `Gamma_l`; intended for small `l`.
    pub fn value(&self, l: usize) -> f64 {
        self.ratios[..l].iter().product()
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn is_ones(&self) -> bool {
        self.ratios.iter().all(|&r| r == 1.0)
    }

    pub fn truncated(&self, s: usize) -> Self {
        Self {
            ratios: self.ratios[..s.min(self.ratios.len())].to_vec(),
        }
    }
}

/// A weight scheme: product, order dependent, or POD.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightScheme {
    /// `gamma_u = prod_{j in u} gamma_j`
    Product { gamma: Vec<f64> },
    /// `gamma_u = Gamma_|u|`
    OrderDependent { order: OrderWeights },
    /// `gamma_u = Gamma_|u| * prod_{j in u} gamma_j`
    Pod { gamma: Vec<f64>, order: OrderWeights },
}

impl WeightScheme {
    pub fn product(gamma: Vec<f64>) -> Result<Self> {
        validate_gamma(&gamma)?;
        Ok(WeightScheme::Product { gamma })
    }

    pub fn order_dependent(order: OrderWeights) -> Result<Self> {
        Ok(WeightScheme::OrderDependent { order })
    }

    pub fn pod(gamma: Vec<f64>, order: OrderWeights) -> Result<Self> {
        validate_gamma(&gamma)?;
        if order.len() < gamma.len() {
            return Err(Error::InvalidWeights(format!(
                "POD scheme has {} product factors but only {} order ratios",
                gamma.len(),
                order.len()
            )));
        }
        Ok(WeightScheme::Pod { gamma, order })
    }

    pub fn dimension(&self) -> usize {
        match self {
            WeightScheme::Product { gamma } => gamma.len(),
            WeightScheme::OrderDependent { order } => order.len(),
            WeightScheme::Pod { gamma, .. } => gamma.len(),
        }
    }

    /// Product part `gamma_j` (1-based); 1 for order-dependent schemes.
    pub fn gamma(&self, j: usize) -> f64 {
        match self {
            WeightScheme::Product { gamma } | WeightScheme::Pod { gamma, .. } => gamma[j - 1],
            WeightScheme::OrderDependent { .. } => 1.0,
        }
    }

    /// `Gamma_l / Gamma_(l-1)`; 1 for product schemes.
    pub fn order_ratio(&self, l: usize) -> f64 {
        match self {
            WeightScheme::Product { .. } => 1.0,
            WeightScheme::OrderDependent { order } | WeightScheme::Pod { order, .. } => {
                order.ratio(l)
            }
        }
    }

    /// Reconstructs `gamma_u` for a subset given by 0-based coordinate
    /// indices. Materializes `Gamma_|u|`; intended for oracles and small s.
    pub fn gamma_u(&self, u: &[usize]) -> f64 {
        let order_part = match self {
            WeightScheme::Product { .. } => 1.0,
            WeightScheme::OrderDependent { order } | WeightScheme::Pod { order, .. } => {
                order.value(u.len())
            }
        };
        let product_part: f64 = match self {
            WeightScheme::OrderDependent { .. } => 1.0,
            WeightScheme::Product { gamma } | WeightScheme::Pod { gamma, .. } => {
                u.iter().map(|&j| gamma[j]).product()
            }
        };
        order_part * product_part
    }

    /// True when the scheme is product-form in effect (all order ratios 1).
    pub fn is_effectively_product(&self) -> bool {
        match self {
            WeightScheme::Product { .. } => true,
            WeightScheme::OrderDependent { order } | WeightScheme::Pod { order, .. } => {
                order.is_ones()
            }
        }
    }

    pub fn truncated(&self, s: usize) -> Self {
        match self {
            WeightScheme::Product { gamma } => WeightScheme::Product {
                gamma: gamma[..s.min(gamma.len())].to_vec(),
            },
            WeightScheme::OrderDependent { order } => WeightScheme::OrderDependent {
                order: order.truncated(s),
            },
            WeightScheme::Pod { gamma, order } => WeightScheme::Pod {
                gamma: gamma[..s.min(gamma.len())].to_vec(),
                order: order.truncated(s),
            },
        }
    }
}

fn validate_gamma(gamma: &[f64]) -> Result<()> {
    if gamma.iter().any(|&g| !(g > 0.0)) {
        return Err(Error::InvalidWeights(
            "product weight factors must be positive".into(),
        ));
    }
    Ok(())
}

/// Norm bound `M_s = prod_{j<=s} (1 + b_j^2 / gamma_j)` for product-form
/// bound data, computed by the running product.
pub fn norm_bound_product(spec: &NormBoundSpec, gamma: &[f64], s: usize) -> Result<f64> {
    if !spec.is_product() {
        return Err(Error::Domain(
            "product norm recursion requires B_l = 1".into(),
        ));
    }
    spec.check_dimension(s)?;
    if gamma.len() < s {
        return Err(Error::InvalidWeights(format!(
            "{} weights supplied for dimension {s}",
            gamma.len()
        )));
    }
    validate_gamma(&gamma[..s])?;
    let mut m = 1.0;
    for j in 1..=s {
        let b = spec.b(j);
        m *= 1.0 + b * b / gamma[j - 1];
    }
    Ok(m)
}

/// Running state of the POD norm-bound recursion.
///
/// After dimension `i` the state holds `M_i` and `H_{i,0} .. H_{i,i-1}`.
/// The top entry `H_{i,i}` involves `B_{i+1}/Gamma_{i+1}` and is only
/// materialized when dimension `i+1` is processed, so explicit factor lists
/// of length `s` suffice for an `s`-dimensional run.
#[derive(Clone, Debug)]
pub struct PodNormState {
    m: f64,
    h: Vec<f64>,
    dim: usize,
    /// `prod_{j<=i} t_j` with `t_j = b_j^2 / gamma_j`.
    top_product: f64,
    /// `B_i / Gamma_i`.
    bg: f64,
}

impl Default for PodNormState {
    fn default() -> Self {
        Self::initial()
    }
}

impl PodNormState {
    /// State before any dimension: `M_0 = 1` (the empty-set term).
    pub fn initial() -> Self {
        Self {
            m: 1.0,
            h: Vec::new(),
            dim: 0,
            top_product: 1.0,
            bg: 1.0,
        }
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `H_{i,0} .. H_{i,i-1}`.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// `H_{i,i} = (B_{i+1}/Gamma_{i+1}) * prod t_j`, materialized on demand.
    fn top(&self, spec: &NormBoundSpec, order: &OrderWeights) -> f64 {
        self.bg * (spec.order().ratio(self.dim + 1) / order.ratio(self.dim + 1)) * self.top_product
    }

    /// `sum_{l=0}^{i} H_{i,l}`, the factor entering `M_{i+1}` and the POD
    /// weight formula.
    pub fn h_sum(&self, spec: &NormBoundSpec, order: &OrderWeights) -> f64 {
        sums::sum(&self.h) + self.top(spec, order)
    }
}

/// Advances the POD norm recursion by one dimension:
/// `M_s = M_{s-1} + (b_s^2/gamma_s) * sum_l H_{s-1,l}`, then the `H` update
/// in decreasing-l order.
pub fn norm_bound_pod_step(
    state: &PodNormState,
    spec: &NormBoundSpec,
    order: &OrderWeights,
    gamma_s: f64,
    s: usize,
) -> Result<PodNormState> {
    if !(gamma_s > 0.0) {
        return Err(Error::InvalidWeights(format!(
            "gamma_{s} = {gamma_s} must be positive"
        )));
    }
    if s != state.dim + 1 {
        return Err(Error::InvalidInput(format!(
            "state holds dimension {}, cannot step to dimension {s}",
            state.dim
        )));
    }
    spec.check_dimension(s)?;
    if order.len() < s {
        return Err(Error::InvalidWeights(format!(
            "{} order weight ratios supplied for dimension {s}",
            order.len()
        )));
    }

    let b = spec.b(s);
    let t = b * b / gamma_s;
    let top = state.top(spec, order);
    let m = state.m + t * (sums::sum(&state.h) + top);

    // H_{s,l} = H_{s-1,l} + t * (B_{l+1}/B_l) * (Gamma_l/Gamma_{l+1}) * H_{s-1,l-1}
    let mut h = Vec::with_capacity(s);
    h.extend_from_slice(&state.h);
    h.push(top);
    for l in (1..h.len()).rev() {
        h[l] += t * (spec.order().ratio(l + 1) / order.ratio(l + 1)) * h[l - 1];
    }

    Ok(PodNormState {
        m,
        h,
        dim: s,
        top_product: state.top_product * t,
        bg: state.bg * (spec.order().ratio(s) / order.ratio(s)),
    })
}

/// Norm bound `M_s` for POD weights, folding [`norm_bound_pod_step`].
pub fn norm_bound_pod(
    spec: &NormBoundSpec,
    order: &OrderWeights,
    gamma: &[f64],
    s: usize,
) -> Result<f64> {
    if gamma.len() < s {
        return Err(Error::InvalidWeights(format!(
            "{} weights supplied for dimension {s}",
            gamma.len()
        )));
    }
    let mut state = PodNormState::initial();
    for i in 1..=s {
        state = norm_bound_pod_step(&state, spec, order, gamma[i - 1], i)?;
    }
    Ok(state.m())
}

pub(crate) const TWO_PI_SQ: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.5 && lambda <= 1.0) {
        return Err(Error::Domain(format!(
            "lambda must lie in (1/2, 1], got {lambda}"
        )));
    }
    Ok(())
}

/// The weights minimizing the theoretical error bound at a given `lambda`:
/// POD form with `Gamma_l = B_l^(1/(1+lambda))` and
/// `gamma_j = ((2 pi^2)^lambda b_j^2 / (2 zeta(2 lambda)))^(1/(1+lambda))`.
///
/// The factorization is returned exactly as above; no renormalization (such
/// as forcing `gamma_1 <= 1`) is applied, since the error bound is invariant
/// to the factorization but not to rescaling.
pub fn lambda_weights(spec: &NormBoundSpec, lambda: f64, s: usize) -> Result<WeightScheme> {
    check_lambda(lambda)?;
    spec.check_dimension(s)?;
    let two_zeta = 2.0 * numerics::zeta(2.0 * lambda)?;
    let expo = 1.0 / (1.0 + lambda);
    let scale = TWO_PI_SQ.powf(lambda) / two_zeta;
    let gamma: Vec<f64> = (1..=s)
        .map(|j| {
            let b = spec.b(j);
            (scale * b * b).powf(expo)
        })
        .collect();
    let ratios: Vec<f64> = (1..=s).map(|l| spec.order().ratio(l).powf(expo)).collect();
    WeightScheme::pod(gamma, OrderWeights::from_ratios(ratios)?)
}

/// `d gamma_u / d lambda` for a set of cardinality `u_size` whose
/// `prod_{j in u} b_j^2` has the supplied natural logarithm.
pub fn lambda_weights_derivative(
    spec: &NormBoundSpec,
    lambda: f64,
    u_size: usize,
    b_product_log: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    if u_size == 0 {
        return Err(Error::InvalidInput(
            "derivative is defined for nonempty sets".into(),
        ));
    }
    let z = numerics::zeta(2.0 * lambda)?;
    let zp = numerics::zeta_prime(2.0 * lambda)?;
    let one_plus = 1.0 + lambda;
    // ln(B_|u| prod_j (2 pi^2)^lambda b_j^2 / (2 zeta(2 lambda)))
    let ln_arg = spec.order().ln_value(u_size)
        + u_size as f64 * (lambda * TWO_PI_SQ.ln() - (2.0 * z).ln())
        + b_product_log;
    let gamma_u = (ln_arg / one_plus).exp();
    let c1 = TWO_PI_SQ.ln() - 2.0 * zp / z;
    Ok(gamma_u * (-ln_arg / (one_plus * one_plus) + u_size as f64 * c1 / one_plus))
}
