//! Exact symbolic engine for coupling constant metamorphosis, the Jacobi
//! transform, and the classical and quantum Stackel transforms of Hamiltonian
//! systems, with a floating-point cross-check harness.

pub mod catalog;
pub mod context;
pub mod error;
pub mod gcd;
pub mod numeric;
pub mod operator;
pub mod phase;
pub mod poly;
pub mod quantum;
pub mod scalar;
pub mod transforms;

pub use context::Context;
pub use error::CoreError;
pub use phase::{
    determining_equations, grade_decompose, grade_decompose_as, is_constant_of_motion,
    poisson_bracket, GradedSymmetry, MomentumPoly, SystemDefinition,
};
pub use operator::{
    build_separable_system, schrodinger_operator, self_adjoint_2nd_form, skew_adjoint_1st_form,
    DiffOp,
};
pub use poly::Poly;
pub use quantum::{
    alpha_decompose, quantum_stackel_2nd, quantum_stackel_2nd_divergence_form, quantum_stackel_n,
    telescoping_identity, transformed_hamiltonian, AlphaOpFamily,
};
pub use scalar::Scalar;
pub use transforms::{
    ccm_transform, jacobi_hamiltonian, jacobi_transform, poisson_bracket_rational,
    stackel_hamiltonian, stackel_transform_2nd, stackel_transform_general, AlphaPoly,
    RationalPhase,
};
