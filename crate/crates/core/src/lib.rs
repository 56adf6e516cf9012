//! Sharp Chebyshev- and Gauss-type bounds on `P(Z ≤ −u or Z ≥ v)` for a
//! standardized random variable `Z`, with the distributions attaining them
//! and numerical oracles that check both.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod error;
pub mod extremal;
pub mod mixture;
pub mod oracles;
pub mod solvers;

pub use bounds::{
    bound, bound_all_one_sided, bound_all_two_sided, bound_concave_one_sided,
    bound_gauss_two_sided, bound_mode_mean_one_sided, bound_mode_mean_two_sided,
    bound_sym_unimodal_one_sided, bound_sym_unimodal_two_sided, bound_symmetric_one_sided,
    bound_symmetric_two_sided, bound_unimodal_one_sided, bound_unimodal_two_sided, bound_vp,
    DistributionClass, IntervalSpec, TailBound, VPInput,
};
pub use error::{Error, Result};
pub use extremal::{extremal_for, ExtremalWitness, KhintchineForm};
pub use mixture::{Atom, MixtureDistribution, MixtureSampler, Segment};
pub use solvers::{cubic_positive_root, gamma_for, mode_mean_x, CubicRoot, ModeMeanSolution};
