//! Built-in catalog of reference superintegrable systems.
//!
//! Entries example1..example9 carry the data the verification suites and the
//! CLI operate on: system definitions, named symmetries, transform inputs and
//! printed structure relations. Classical entries use momentum polynomials,
//! quantum entries differential operators.

use std::sync::Arc;

use crate::context::Context;
use crate::phase::{MomentumPoly, SystemDefinition};
use crate::scalar::Scalar;

pub mod classical;
pub mod quantum;

pub use classical::{example1, example2, example3, ClassicalExample};
pub use quantum::{
    example4, example5, example6, example7, example8, example9, family_for, Coupling,
    QuantumExample, TransformSpec,
};

/// Shorthand builders shared by the catalog modules.
pub(crate) fn x(ctx: &Arc<Context>, i: usize) -> Scalar {
    Scalar::coord(ctx, i).expect("coordinate index")
}

pub(crate) fn sqrt_x(ctx: &Arc<Context>, i: usize) -> Scalar {
    Scalar::sqrt_coord(ctx, i).expect("coordinate index")
}

pub(crate) fn par(ctx: &Arc<Context>, name: &str) -> Scalar {
    Scalar::param(ctx, name).expect("declared parameter")
}

pub(crate) fn int(ctx: &Arc<Context>, n: i64) -> Scalar {
    Scalar::from_int(ctx, n)
}

pub(crate) fn p(ctx: &Arc<Context>, i: usize) -> MomentumPoly {
    MomentumPoly::momentum(ctx, i).expect("momentum index")
}

pub(crate) fn mp(s: Scalar) -> MomentumPoly {
    MomentumPoly::from_scalar(s)
}

/// All catalog entry names in order.
pub fn entry_names() -> Vec<&'static str> {
    vec![
        "example1", "example2", "example3", "example4", "example5", "example6", "example7",
        "example8", "example9",
    ]
}

pub fn describe(name: &str) -> Option<&'static str> {
    match name {
        "example1" => Some("flat 2D system b1*sqrt(x1)+b2*x2 with 2nd and 3rd order symmetries"),
        "example2" => Some("Jacobi transform of example1 by U = b1*sqrt(x1)+b2*x2+b3"),
        "example3" => Some("classical k=2 oscillator family with 2nd and 4th order symmetries and closed Poisson algebra"),
        "example4" => Some("quantum 9-1 anisotropic oscillator, coupling-scaled"),
        "example5" => Some("quantum k=2 oscillator family with 2nd and 4th order operator symmetries"),
        "example6" => Some("9-1 anisotropic oscillator with fixed coupling, full transform data"),
        "example7" => Some("hybrid 9-1 anisotropic oscillator (no classical limit)"),
        "example8" => Some("translated hybrid 9-1 oscillator, transform onto a Darboux type-1 space"),
        "example9" => Some("inverse-square system a/x1^2 - 2/x2^2 with 2nd order symmetries"),
        _ => None,
    }
}

pub use crate::phase::SystemDefinition as System;

/// Convenience: SystemDefinition with the flat 2D metric (lambda = 1).
pub(crate) fn flat_system(
    ctx: &Arc<Context>,
    potential: Scalar,
    family: Vec<String>,
    transform_potential: Scalar,
) -> SystemDefinition {
    SystemDefinition::conformal_2d(ctx, Scalar::one(ctx), potential, family, transform_potential)
        .expect("well-formed flat system")
}
