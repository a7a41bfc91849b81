//! Haar-type framelets on a hierarchical partition.
//!
//! Each parent block `B` with children `B_1, ..., B_m` contributes the
//! `m(m−1)/2` generators `ψ^{(ℓ1,ℓ2)}` built from normalized child indicators.
//! Together with `φ0 = χ_K/sqrt|K|` they form a tight frame for the span of
//! the finest-level indicators.

mod bounds;
mod function;
mod matrix;
mod system;

pub use bounds::{frame_bounds, gram, FrameBounds, DEGENERACY_RATIO};
pub use function::{inner_product, leaf_basis, PwcFunction};
pub use matrix::{build_matrix_a, flat_to_pair, pair_count, pair_to_flat, WEIGHT_SUM_TOL};
pub use system::{
    build_generators, build_system, scaling_function, AtomKey, CoefficientVector, FrameletAtom,
    FrameletSystem,
};
