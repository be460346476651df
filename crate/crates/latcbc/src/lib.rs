//! Construction of generating vectors for randomly shifted rank-1 lattice
//! rules, with automatic selection of function-space weights from
//! derivative-bound data.
//!
//! A rank-1 lattice rule approximates an integral over the unit cube by
//! averaging an integrand over the points `{k z / n}`, `k = 0..n-1`. The
//! quality of the rule in a weighted Sobolev space is measured by the
//! shift-averaged worst-case error, which this crate evaluates exactly and
//! minimizes greedily, one component of `z` at a time (the CBC
//! construction). On top of the classic construction the crate implements
//! two algorithms that also *choose the weights*: the double CBC algorithm
//! (one weight per dimension, each minimizing the current error bound) and
//! the iterated CBC algorithm (a line search over a one-parameter family of
//! weights). Both take only per-coordinate and per-order bounds on the mixed
//! first derivatives of the integrand and return a generating vector
//! together with a guaranteed root-mean-square error bound
//! `E = e_sh * sqrt(M)`.
//!
//! The per-dimension minimization is accelerated by the circulant structure
//! of the Bernoulli-kernel matrix over the multiplicative group mod `n`
//! (prime `n`), giving `O(s n log n)` product-weight constructions and
//! `O(s n log n + s^2 n)` for POD weights.

pub mod cbc;
pub mod cli;
pub mod construct;
pub mod numerics;
pub mod tables;
pub mod wce;
pub mod weights;

mod error;
mod sums;

pub use error::{Error, Result};

pub use cbc::{cbc_pod, cbc_product, kernel_matvec, naive_matvec, CandidateScores, KernelColumn};
pub use construct::{
    dcbc_pod, dcbc_product, icbc, icbc_objective_derivative, lemma_minimizer, Algorithm,
    ConstructionResult, IcbcOptions, IcbcTrace, MinimizerInputs, StopReason,
};
pub use numerics::{
    bernoulli2, euler_totient, fit_power_law, is_prime, primitive_root, zeta, zeta_prime,
    PowerLawFit, PrimeModulus,
};
pub use wce::{
    wce_bruteforce, wce_pod_fixed_z, wce_product, wce_product_append, wce_upper_bound,
    GeneratingVector, WceState,
};
pub use weights::{
    lambda_weights, lambda_weights_derivative, norm_bound_pod, norm_bound_pod_step,
    norm_bound_product, CoordinateFamily, NormBoundSpec, OrderFamily, OrderWeights,
    PodNormState, WeightScheme,
};
