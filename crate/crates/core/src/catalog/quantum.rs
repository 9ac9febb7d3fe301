//! Quantum catalog entries: 2D Schrodinger operators with their operator
//! symmetries and transform data.

use std::sync::Arc;

use crate::context::Context;
use crate::operator::DiffOp;
use crate::scalar::Scalar;

use super::{int, par, x};

/// How the scalable coupling enters a symmetry before decomposition.
#[derive(Clone)]
pub enum Coupling {
    /// the symmetry already carries this parameter as the coupling
    Native(String),
    /// substitute each listed parameter p -> p + alpha * value
    Shift(Vec<(String, Scalar)>),
}

#[derive(Clone)]
pub struct TransformSpec {
    pub symmetry: &'static str,
    pub coupling: Coupling,
    /// declared family order (the derivative grading of the family)
    pub order: usize,
}

#[derive(Clone)]
pub struct QuantumExample {
    pub name: &'static str,
    pub ctx: Arc<Context>,
    /// conformal weight of the base metric
    pub lambda: Scalar,
    /// Hamiltonian used for the symmetry checks (may carry the native
    /// coupling parameter, as in the coupling-scaled oscillator)
    pub hamiltonian: DiffOp,
    /// coupling parameter to zero out of `hamiltonian` for transform work
    pub native_coupling: Option<&'static str>,
    pub symmetries: Vec<(&'static str, DiffOp)>,
    /// transform potential U
    pub u: Scalar,
    /// additive shift of the transformed Hamiltonian U^{-1}(H + shift)
    pub shift: Scalar,
    pub transforms: Vec<TransformSpec>,
}

impl QuantumExample {
    pub fn symmetry(&self, name: &str) -> Option<&DiffOp> {
        self.symmetries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, k)| k)
    }

    /// The coupling-free base Hamiltonian the transforms act on.
    pub fn base_hamiltonian(&self) -> DiffOp {
        match self.native_coupling {
            None => self.hamiltonian.clone(),
            Some(p) => self
                .hamiltonian
                .substitute(&[(p.to_string(), Scalar::zero(&self.ctx))])
                .expect("zeroing the coupling"),
        }
    }
}

fn angular(ctx: &Arc<Context>) -> DiffOp {
    // x1 d2 - x2 d1
    &DiffOp::term(x(ctx, 1), (0, 1)) - &DiffOp::term(x(ctx, 2), (1, 0))
}

fn xpow(ctx: &Arc<Context>, i: usize, half: i32) -> Scalar {
    Scalar::coord_half_pow(ctx, i, half).expect("coordinate power")
}

/// The coupling-scaled 9-1 anisotropic oscillator:
/// H(alpha) = d11 + d22 + alpha (9 x1^2 + x2^2), with a 2nd and a 3rd order
/// operator symmetry carrying the coupling.
pub fn example4() -> QuantumExample {
    let ctx = Context::new(2, &["alpha", "b", "c"]);
    let alpha = par(&ctx, "alpha");
    let c = par(&ctx, "c");
    let u0 = &(&(&int(&ctx, 9) * &x(&ctx, 1)) * &x(&ctx, 1)) + &(&x(&ctx, 2) * &x(&ctx, 2));

    let h = &(&DiffOp::derivative(&ctx, 2, 0) + &DiffOp::derivative(&ctx, 0, 2))
        + &DiffOp::from_scalar(&alpha * &u0);

    // L = d22 + alpha x2^2
    let l = &DiffOp::derivative(&ctx, 0, 2)
        + &DiffOp::from_scalar(&alpha * &(&x(&ctx, 2) * &x(&ctx, 2)));

    // K = {x1 d2 - x2 d1, d22} + (alpha/3)({x2^3, d1} - 9 {x1 x2^2, d2})
    let k3 = angular(&ctx)
        .anticommutator(&DiffOp::derivative(&ctx, 0, 2))
        .expect("anticommutator");
    let t1 = DiffOp::from_scalar(xpow(&ctx, 2, 6))
        .anticommutator(&DiffOp::derivative(&ctx, 1, 0))
        .expect("anticommutator");
    let t2 = DiffOp::from_scalar(&x(&ctx, 1) * &(&x(&ctx, 2) * &x(&ctx, 2)))
        .anticommutator(&DiffOp::derivative(&ctx, 0, 1))
        .expect("anticommutator");
    let k1 = (&t1 - &t2.scale(&int(&ctx, 9))).scale(&(&int(&ctx, 1) / &int(&ctx, 3)));
    let k = &k3 + &k1.scale(&alpha);

    QuantumExample {
        name: "example4",
        ctx: ctx.clone(),
        lambda: Scalar::one(&ctx),
        hamiltonian: h,
        native_coupling: Some("alpha"),
        symmetries: vec![("L", l), ("K", k)],
        u: &u0 + &c,
        shift: par(&ctx, "b"),
        transforms: vec![
            TransformSpec {
                symmetry: "L",
                coupling: Coupling::Native("alpha".into()),
                order: 2,
            },
            TransformSpec {
                symmetry: "K",
                coupling: Coupling::Native("alpha".into()),
                order: 3,
            },
        ],
    }
}

/// Quantum k=2 oscillator family: the operator version of the classical
/// 2nd + 4th order system, including the first-order and scalar quantum
/// corrections.
pub fn example5() -> QuantumExample {
    let ctx = Context::new(2, &["a", "b", "c", "d", "B", "C", "D"]);
    let a = par(&ctx, "a");
    let b = par(&ctx, "b");
    let c = par(&ctx, "c");
    let d = par(&ctx, "d");
    let x1 = x(&ctx, 1);
    let x2 = x(&ctx, 2);
    let x1s = &x1 * &x1;
    let x2s = &x2 * &x2;
    let r2 = &x1s + &x2s;
    let diff = &x1s - &x2s;
    let diff2 = &diff * &diff;
    let xx = &x1s * &x2s;
    let two = int(&ctx, 2);

    let v = &(&(&a * &r2) + &(&b * &(&r2 / &diff2))) + &(&(&c * &(&r2 / &xx)) + &d);
    let h = &(&DiffOp::derivative(&ctx, 2, 0) + &DiffOp::derivative(&ctx, 0, 2))
        + &DiffOp::from_scalar(v);

    // K2 = (x1 d2 - x2 d1)^2 + 4b x1^2 x2^2/(x1^2-x2^2)^2 + c (x1^4+x2^4)/(x1^2 x2^2)
    let ang = angular(&ctx);
    let x4sum = &(&x1s * &x1s) + &(&x2s * &x2s);
    let k2 = &ang.compose(&ang).expect("compose")
        + &DiffOp::from_scalar(
            &(&(&int(&ctx, 4) * &b) * &(&xx / &diff2)) + &(&c * &(&x4sum / &xx)),
        );

    // K4 = (d11 - d22)^2
    //      + [2a x1^2 + 2b r^2/(x1^2-x2^2)^2 - 2c (x1^2-x2^2)/(x1^2 x2^2)] d11
    //      + [-4a x1 x2 + 8b x1 x2/(x1^2-x2^2)^2] d12
    //      + [2a x2^2 + 2b r^2/(x1^2-x2^2)^2 + 2c (x1^2-x2^2)/(x1^2 x2^2)] d22
    //      + (2a x1 - 4c/x1^3) d1 + (2a x2 - 4c/x2^3) d2
    //      + a^2 (x1^2-x2^2)^2 + b^2/(x1^2-x2^2)^2 + c^2 (x1^2-x2^2)^2/(x1^4 x2^4)
    //      + 8ab x1^2 x2^2/(x1^2-x2^2)^2 + 2bc/(x1^2 x2^2) + 6c (1/x1^4 + 1/x2^4)
    let quart = {
        let diag = &DiffOp::derivative(&ctx, 2, 0) - &DiffOp::derivative(&ctx, 0, 2);
        diag.compose(&diag).expect("compose")
    };
    let cd11 = &(&(&two * &(&a * &x1s)) + &(&two * &(&b * &(&r2 / &diff2))))
        - &(&two * &(&c * &(&diff / &xx)));
    let cd12 = &(&int(&ctx, -4) * &(&a * &(&x1 * &x2)))
        + &(&int(&ctx, 8) * &(&b * &(&(&x1 * &x2) / &diff2)));
    let cd22 = &(&(&two * &(&a * &x2s)) + &(&two * &(&b * &(&r2 / &diff2))))
        + &(&two * &(&c * &(&diff / &xx)));
    let cd1 = &(&two * &(&a * &x1)) - &(&int(&ctx, 4) * &(&c * &xpow(&ctx, 1, -6)));
    let cd2 = &(&two * &(&a * &x2)) - &(&int(&ctx, 4) * &(&c * &xpow(&ctx, 2, -6)));
    let w = &(&(&(&a * &a) * &diff2) + &(&(&b * &b) / &diff2))
        + &(&(&(&c * &c) * &(&diff2 / &(&xx * &xx)))
            + &(&(&(&int(&ctx, 8) * &(&a * &b)) * &(&xx / &diff2))
                + &(&(&(&two * &(&b * &c)) / &xx)
                    + &(&(&int(&ctx, 6) * &c)
                        * &(&xpow(&ctx, 1, -8) + &xpow(&ctx, 2, -8))))));
    let k4 = &(&(&quart + &DiffOp::term(cd11, (2, 0))) + &DiffOp::term(cd12, (1, 1)))
        + &(&(&DiffOp::term(cd22, (0, 2)) + &DiffOp::term(cd1, (1, 0)))
            + &(&DiffOp::term(cd2, (0, 1)) + &DiffOp::from_scalar(w)));

    let bb = par(&ctx, "B");
    let cc = par(&ctx, "C");
    let dd = par(&ctx, "D");
    let u = &(&r2 + &(&bb * &(&r2 / &diff2))) + &(&(&cc * &(&r2 / &xx)) + &dd);

    QuantumExample {
        name: "example5",
        ctx: ctx.clone(),
        lambda: Scalar::one(&ctx),
        hamiltonian: h,
        native_coupling: None,
        symmetries: vec![("K2", k2), ("K4", k4)],
        u,
        shift: Scalar::zero(&ctx),
        transforms: vec![TransformSpec {
            symmetry: "K4",
            coupling: Coupling::Shift(vec![
                ("a".into(), int(&ctx, 1)),
                ("b".into(), par(&ctx, "B")),
                ("c".into(), par(&ctx, "C")),
                ("d".into(), par(&ctx, "D")),
            ]),
            order: 4,
        }],
    }
}

/// The 9-1 anisotropic oscillator with a fixed coupling `a`, set up for the
/// full transform by U = 9 x1^2 + x2^2 + c.
pub fn example6() -> QuantumExample {
    let ctx = Context::new(2, &["a", "b", "c"]);
    let a = par(&ctx, "a");
    let c = par(&ctx, "c");
    let u0 = &(&(&int(&ctx, 9) * &x(&ctx, 1)) * &x(&ctx, 1)) + &(&x(&ctx, 2) * &x(&ctx, 2));

    let h = &(&DiffOp::derivative(&ctx, 2, 0) + &DiffOp::derivative(&ctx, 0, 2))
        + &DiffOp::from_scalar(&a * &u0);

    let l = &DiffOp::derivative(&ctx, 0, 2)
        + &DiffOp::from_scalar(&a * &(&x(&ctx, 2) * &x(&ctx, 2)));

    let k3 = angular(&ctx)
        .anticommutator(&DiffOp::derivative(&ctx, 0, 2))
        .expect("anticommutator");
    let t1 = DiffOp::from_scalar(xpow(&ctx, 2, 6))
        .anticommutator(&DiffOp::derivative(&ctx, 1, 0))
        .expect("anticommutator");
    let t2 = DiffOp::from_scalar(&x(&ctx, 1) * &(&x(&ctx, 2) * &x(&ctx, 2)))
        .anticommutator(&DiffOp::derivative(&ctx, 0, 1))
        .expect("anticommutator");
    let k1 = (&t1 - &t2.scale(&int(&ctx, 9))).scale(&(&int(&ctx, 1) / &int(&ctx, 3)));
    let k = &k3 + &k1.scale(&a);

    QuantumExample {
        name: "example6",
        ctx: ctx.clone(),
        lambda: Scalar::one(&ctx),
        hamiltonian: h,
        native_coupling: None,
        symmetries: vec![("L", l), ("K", k)],
        u: &u0 + &c,
        shift: par(&ctx, "b"),
        transforms: vec![
            TransformSpec {
                symmetry: "L",
                coupling: Coupling::Shift(vec![("a".into(), int(&ctx, 1))]),
                order: 2,
            },
            TransformSpec {
                symmetry: "K",
                coupling: Coupling::Shift(vec![("a".into(), int(&ctx, 1))]),
                order: 3,
            },
        ],
    }
}

/// The hybrid 9-1 anisotropic oscillator (no classical limit):
/// H = d11 + d22 + a (9 x1^2 + x2^2) - 2/x2^2.
pub fn example7() -> QuantumExample {
    let ctx = Context::new(2, &["a", "b", "c"]);
    let a = par(&ctx, "a");
    let c = par(&ctx, "c");
    let u0 = &(&(&int(&ctx, 9) * &x(&ctx, 1)) * &x(&ctx, 1)) + &(&x(&ctx, 2) * &x(&ctx, 2));
    let x2s = &x(&ctx, 2) * &x(&ctx, 2);
    let inv_x2s = xpow(&ctx, 2, -4);

    let h = &(&DiffOp::derivative(&ctx, 2, 0) + &DiffOp::derivative(&ctx, 0, 2))
        + &DiffOp::from_scalar(&(&a * &u0) - &(&int(&ctx, 2) * &inv_x2s));

    // the full x2-sector Hamiltonian: the -2/x2^2 term is required for
    // [H, L] = 0 even though the printed form omits it
    let l = &DiffOp::derivative(&ctx, 0, 2)
        + &DiffOp::from_scalar(&(&a * &x2s) - &(&int(&ctx, 2) * &inv_x2s));

    // K = {x1 d2 - x2 d1, d22} + {(a/3) x2^3 + 1/x2, d1} - {3 x1 (a x2^2 + 1/x2^2), d2}
    let k3 = angular(&ctx)
        .anticommutator(&DiffOp::derivative(&ctx, 0, 2))
        .expect("anticommutator");
    let f1 = &(&(&a / &int(&ctx, 3)) * &xpow(&ctx, 2, 6)) + &xpow(&ctx, 2, -2);
    let t1 = DiffOp::from_scalar(f1)
        .anticommutator(&DiffOp::derivative(&ctx, 1, 0))
        .expect("anticommutator");
    let f2 = &(&int(&ctx, 3) * &x(&ctx, 1)) * &(&(&a * &x2s) + &inv_x2s);
    let t2 = DiffOp::from_scalar(f2)
        .anticommutator(&DiffOp::derivative(&ctx, 0, 1))
        .expect("anticommutator");
    let k = &(&k3 + &t1) - &t2;

    QuantumExample {
        name: "example7",
        ctx: ctx.clone(),
        lambda: Scalar::one(&ctx),
        hamiltonian: h,
        native_coupling: None,
        symmetries: vec![("L", l), ("K", k)],
        u: &u0 + &c,
        shift: par(&ctx, "b"),
        transforms: vec![
            TransformSpec {
                symmetry: "L",
                coupling: Coupling::Shift(vec![("a".into(), int(&ctx, 1))]),
                order: 2,
            },
            TransformSpec {
                symmetry: "K",
                coupling: Coupling::Shift(vec![("a".into(), int(&ctx, 1))]),
                order: 3,
            },
        ],
    }
}

/// Translated hybrid oscillator with U = x1, mapping onto a Darboux type-1
/// space. The translation x1 -> x1 + c/(18a) makes the linear term part of
/// the oscillator; the leftover coupling c scales U = x1. The natural
/// decomposition of the translated symmetry carries a 3rd-order coupling
/// coefficient, so the family is typed at order 5; the transform is still an
/// exact symmetry of the new Hamiltonian.
pub fn example8() -> QuantumExample {
    let ctx = Context::new(2, &["a", "b", "c"]);
    let a = par(&ctx, "a");
    let c = par(&ctx, "c");
    let u0 = &(&(&int(&ctx, 9) * &x(&ctx, 1)) * &x(&ctx, 1)) + &(&x(&ctx, 2) * &x(&ctx, 2));
    let x2s = &x(&ctx, 2) * &x(&ctx, 2);
    let inv_x2s = xpow(&ctx, 2, -4);

    let h = &(&DiffOp::derivative(&ctx, 2, 0) + &DiffOp::derivative(&ctx, 0, 2))
        + &DiffOp::from_scalar(
            &(&(&a * &u0) + &(&c * &x(&ctx, 1))) - &(&int(&ctx, 2) * &inv_x2s),
        );

    let l = &DiffOp::derivative(&ctx, 0, 2)
        + &DiffOp::from_scalar(&(&a * &x2s) - &(&int(&ctx, 2) * &inv_x2s));

    // translate the hybrid symmetry by s = c/(18a)
    let shift_amount = &c / &(&int(&ctx, 18) * &a);
    let x1_shifted = &x(&ctx, 1) + &shift_amount;
    let ang = &DiffOp::term(x1_shifted.clone(), (0, 1)) - &DiffOp::term(x(&ctx, 2), (1, 0));
    let k3 = ang
        .anticommutator(&DiffOp::derivative(&ctx, 0, 2))
        .expect("anticommutator");
    let f1 = &(&(&a / &int(&ctx, 3)) * &xpow(&ctx, 2, 6)) + &xpow(&ctx, 2, -2);
    let t1 = DiffOp::from_scalar(f1)
        .anticommutator(&DiffOp::derivative(&ctx, 1, 0))
        .expect("anticommutator");
    let f2 = &(&int(&ctx, 3) * &x1_shifted) * &(&(&a * &x2s) + &inv_x2s);
    let t2 = DiffOp::from_scalar(f2)
        .anticommutator(&DiffOp::derivative(&ctx, 0, 1))
        .expect("anticommutator");
    let k = &(&k3 + &t1) - &t2;

    QuantumExample {
        name: "example8",
        ctx: ctx.clone(),
        lambda: Scalar::one(&ctx),
        hamiltonian: h,
        native_coupling: None,
        symmetries: vec![("L", l), ("K", k)],
        u: x(&ctx, 1),
        shift: par(&ctx, "b"),
        transforms: vec![
            TransformSpec {
                symmetry: "L",
                coupling: Coupling::Shift(vec![("c".into(), int(&ctx, 1))]),
                order: 2,
            },
            TransformSpec {
                symmetry: "K",
                coupling: Coupling::Shift(vec![("c".into(), int(&ctx, 1))]),
                order: 5,
            },
        ],
    }
}

/// Inverse-square system H = d11 + d22 + a/x1^2 - 2/x2^2 with its 2nd-order
/// symmetries, transformed by U = 1/x1^2 + c.
pub fn example9() -> QuantumExample {
    let ctx = Context::new(2, &["a", "b", "c"]);
    let a = par(&ctx, "a");
    let c = par(&ctx, "c");
    let inv_x1s = xpow(&ctx, 1, -4);
    let inv_x2s = xpow(&ctx, 2, -4);

    let h = &(&DiffOp::derivative(&ctx, 2, 0) + &DiffOp::derivative(&ctx, 0, 2))
        + &DiffOp::from_scalar(&(&a * &inv_x1s) - &(&int(&ctx, 2) * &inv_x2s));

    let l1 = &DiffOp::derivative(&ctx, 0, 2)
        - &DiffOp::from_scalar(&int(&ctx, 2) * &inv_x2s);
    let l2 = &DiffOp::derivative(&ctx, 2, 0) + &DiffOp::from_scalar(&a * &inv_x1s);

    QuantumExample {
        name: "example9",
        ctx: ctx.clone(),
        lambda: Scalar::one(&ctx),
        hamiltonian: h,
        native_coupling: None,
        symmetries: vec![("L1", l1), ("L2", l2)],
        u: &inv_x1s + &c,
        shift: par(&ctx, "b"),
        transforms: vec![
            TransformSpec {
                symmetry: "L1",
                coupling: Coupling::Shift(vec![("a".into(), int(&ctx, 1))]),
                order: 2,
            },
            TransformSpec {
                symmetry: "L2",
                coupling: Coupling::Shift(vec![("a".into(), int(&ctx, 1))]),
                order: 2,
            },
        ],
    }
}

/// Build the coupling family of a transform spec and check its identities
/// against the base Hamiltonian and transform potential.
pub fn family_for(
    ex: &QuantumExample,
    spec: &TransformSpec,
) -> Result<crate::quantum::AlphaOpFamily, crate::error::CoreError> {
    use crate::quantum::alpha_decompose;
    let k = ex.symmetry(spec.symmetry).ok_or_else(|| {
        crate::error::CoreError::UsageError(format!("unknown symmetry `{}`", spec.symmetry))
    })?;
    let base = ex.base_hamiltonian();
    match &spec.coupling {
        Coupling::Native(p) => alpha_decompose(k, p, spec.order, &base, &ex.u),
        Coupling::Shift(list) => {
            let fresh = crate::transforms::fresh_param_name(&ex.ctx, "alphaQ");
            let ext = ex.ctx.extended(&[fresh.as_str()]);
            let alpha = Scalar::param(&ext, &fresh)?;
            let bindings: Vec<(String, Scalar)> = list
                .iter()
                .map(|(name, v)| {
                    let b = Scalar::param(&ext, name)?;
                    Ok((name.clone(), b.add(&alpha.mul(&v.lift(&ext)?))))
                })
                .collect::<Result<_, crate::error::CoreError>>()?;
            let shifted = k.lift(&ext)?.substitute(&bindings)?;
            let fam = alpha_decompose(
                &shifted,
                &fresh,
                spec.order,
                &base.lift(&ext)?,
                &ex.u.lift(&ext)?,
            )?;
            let parts: Vec<DiffOp> = fam
                .parts()
                .iter()
                .map(|p| p.project(&ex.ctx))
                .collect::<Result<_, _>>()?;
            crate::quantum::AlphaOpFamily::new(spec.order, parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_symmetries_commute() {
        for ex in [
            example4(),
            example5(),
            example6(),
            example7(),
            example8(),
            example9(),
        ] {
            for (name, k) in &ex.symmetries {
                let r = ex.hamiltonian.commutator(k).expect("commutator");
                assert!(r.is_zero(), "{}: [H, {name}] nonzero", ex.name);
            }
        }
    }
}
