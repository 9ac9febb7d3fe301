//! Classical catalog entries.

use std::sync::Arc;

use crate::context::Context;
use crate::phase::{MomentumPoly, SystemDefinition};
use crate::scalar::Scalar;

use super::{flat_system, int, mp, p, par, sqrt_x, x};

#[derive(Clone)]
pub struct ClassicalExample {
    pub name: &'static str,
    pub ctx: Arc<Context>,
    pub sys: SystemDefinition,
    pub hamiltonian: MomentumPoly,
    pub symmetries: Vec<(&'static str, MomentumPoly)>,
}

impl ClassicalExample {
    pub fn symmetry(&self, name: &str) -> Option<&MomentumPoly> {
        self.symmetries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, k)| k)
    }
}

/// Flat 2D system with potential b1*sqrt(x1) + b2*x2. Admits a 2nd order and
/// a genuinely 3rd order constant of the motion.
pub fn example1() -> ClassicalExample {
    let ctx = Context::new(2, &["b1", "b2", "b3", "E"]);
    let b1 = par(&ctx, "b1");
    let b2 = par(&ctx, "b2");
    let b3 = par(&ctx, "b3");

    let v = &(&b1 * &sqrt_x(&ctx, 1)) + &(&b2 * &x(&ctx, 2));
    let u = &v + &b3;
    let sys = flat_system(&ctx, v, vec!["b3".into(), "b1".into(), "b2".into()], u);
    let h = sys.hamiltonian();

    // K2 = p2^2 + b2 x2
    let k2 = &p(&ctx, 2).pow(2) + &mp(&b2 * &x(&ctx, 2));

    // K3 = p1^3 + (3/2) b1 sqrt(x1) p1 - (3 b1^2/(4 b2)) p2
    let c1 = &(&int(&ctx, 3) / &int(&ctx, 2)) * &(&b1 * &sqrt_x(&ctx, 1));
    let c2 = &(&int(&ctx, 3) * &(&b1 * &b1)) / &(&int(&ctx, 4) * &b2);
    let k3 = &(&p(&ctx, 1).pow(3) + &p(&ctx, 1).scale(&c1)) - &p(&ctx, 2).scale(&c2);

    ClassicalExample {
        name: "example1",
        ctx: ctx.clone(),
        sys,
        hamiltonian: h,
        symmetries: vec![("K2", k2), ("K3", k3)],
    }
}

/// Transformed versions of example1's symmetries under the Jacobi transform
/// with U = b1*sqrt(x1) + b2*x2 + b3, as independently written out.
pub struct Example2Expected {
    pub hamiltonian: MomentumPoly,
    pub k2_hat: MomentumPoly,
    pub k3_hat: MomentumPoly,
}

pub fn example2() -> (ClassicalExample, Example2Expected) {
    let ex1 = example1();
    let ctx = &ex1.ctx;
    let b1 = par(ctx, "b1");
    let b2 = par(ctx, "b2");
    let e = par(ctx, "E");
    let u = ex1.sys.transform_potential().clone();

    // Hhat = (p1^2 + p2^2 - E)/U
    let free = ex1.sys.free_hamiltonian();
    let shifted = &free - &mp(e);
    let h_hat = shifted.div_scalar(&u).expect("U nonzero");

    // K2hat = p2^2 - b2 x2 (p1^2+p2^2-E)/U
    let k2_hat = &p(ctx, 2).pow(2) - &shifted.scale(&(&(&b2 * &x(ctx, 2)) / &u));

    // K3hat = p1^3 - ((3/2) b1 sqrt(x1) p1 - (3 b1^2/(4 b2)) p2)(p1^2+p2^2-E)/U
    let c1 = &(&(&int(ctx, 3) / &int(ctx, 2)) * &b1) * &sqrt_x(ctx, 1);
    let c2 = &(&int(ctx, 3) * &(&b1 * &b1)) / &(&int(ctx, 4) * &b2);
    let inner = &p(ctx, 1).scale(&c1) - &p(ctx, 2).scale(&c2);
    let k3_hat = &p(ctx, 1).pow(3) - &inner.mul(&shifted).div_scalar(&u).expect("U nonzero");

    (
        ex1,
        Example2Expected {
            hamiltonian: h_hat,
            k2_hat,
            k3_hat,
        },
    )
}

/// Classical k=2 oscillator family
/// V = a r^2 + b r^2/(x1^2-x2^2)^2 + c r^2/(x1^2 x2^2) + d, r^2 = x1^2+x2^2,
/// with one 2nd order and one 4th order constant of the motion generating a
/// closed Poisson algebra.
pub fn example3() -> ClassicalExample {
    let ctx = Context::new(2, &["a", "b", "c", "d", "B", "C", "D", "E"]);
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

    let v = &(&(&a * &r2) + &(&b * &(&r2 / &diff2))) + &(&(&c * &(&r2 / &xx)) + &d);
    let b0_name: Vec<String> = vec!["a".into(), "b".into(), "c".into(), "d".into()];
    // transform potential U = V at (1, B, C, D)
    let bb = par(&ctx, "B");
    let cc = par(&ctx, "C");
    let dd = par(&ctx, "D");
    let u = &(&r2 + &(&bb * &(&r2 / &diff2))) + &(&(&cc * &(&r2 / &xx)) + &dd);
    let sys = flat_system(&ctx, v, b0_name, u);
    let h = sys.hamiltonian();

    // K2 = (x1 p2 - x2 p1)^2 + 4b x1^2 x2^2/(x1^2-x2^2)^2 + c (x1^4+x2^4)/(x1^2 x2^2)
    let ang = &p(&ctx, 2).scale(&x1) - &p(&ctx, 1).scale(&x2);
    let x4sum = &(&x1s * &x1s) + &(&x2s * &x2s);
    let k2 = &(&ang.mul(&ang) + &mp(&(&int(&ctx, 4) * &b) * &(&xx / &diff2)))
        + &mp(&c * &(&x4sum / &xx));

    // K4 = (p1^2-p2^2)^2
    //      + [2a x1^2 + 2b r^2/(x1^2-x2^2)^2 - 2c (x1^2-x2^2)/(x1^2 x2^2)] p1^2
    //      + [-4a x1 x2 + 8b x1 x2/(x1^2-x2^2)^2] p1 p2
    //      + [2a x2^2 + 2b r^2/(x1^2-x2^2)^2 + 2c (x1^2-x2^2)/(x1^2 x2^2)] p2^2
    //      + a^2 (x1^2-x2^2)^2 + b^2/(x1^2-x2^2)^2 + c^2 (x1^2-x2^2)^2/(x1^4 x2^4)
    //      + 8ab x1^2 x2^2/(x1^2-x2^2)^2 + 2bc/(x1^2 x2^2)
    let two = int(&ctx, 2);
    let p1 = p(&ctx, 1);
    let p2 = p(&ctx, 2);
    let quart = (&p1.pow(2) - &p2.pow(2)).pow(2);
    let cp1 = &(&(&two * &(&a * &x1s)) + &(&two * &(&b * &(&r2 / &diff2))))
        - &(&two * &(&c * &(&diff / &xx)));
    let cp12 = &(&int(&ctx, -4) * &(&a * &(&x1 * &x2)))
        + &(&int(&ctx, 8) * &(&b * &(&(&x1 * &x2) / &diff2)));
    let cp2 = &(&(&two * &(&a * &x2s)) + &(&two * &(&b * &(&r2 / &diff2))))
        + &(&two * &(&c * &(&diff / &xx)));
    let scalar_part = &(&(&(&a * &a) * &diff2) + &(&(&b * &b) / &diff2))
        + &(&(&(&c * &c) * &(&diff2 / &(&xx * &xx)))
            + &(&(&(&int(&ctx, 8) * &(&a * &b)) * &(&xx / &diff2))
                + &(&(&two * &(&b * &c)) / &xx)));
    let k4 = &(&(&quart + &p1.pow(2).scale(&cp1)) + &p1.mul(&p2).scale(&cp12))
        + &(&p2.pow(2).scale(&cp2) + &mp(scalar_part));

    ClassicalExample {
        name: "example3",
        ctx: ctx.clone(),
        sys,
        hamiltonian: h,
        symmetries: vec![("K2", k2), ("K4", k4)],
    }
}

/// Family point (1, B, C, D) selecting example3's transform potential.
pub fn example3_b0(ctx: &Arc<Context>) -> Vec<Scalar> {
    vec![int(ctx, 1), par(ctx, "B"), par(ctx, "C"), par(ctx, "D")]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::poisson_bracket;

    #[test]
    fn example1_brackets_vanish() {
        let ex = example1();
        for (name, k) in &ex.symmetries {
            let r = poisson_bracket(&ex.hamiltonian, k).unwrap();
            assert!(r.is_zero(), "{{H, {name}}} = {r}");
        }
    }

    #[test]
    fn example1_nonsymmetry_reports_residual() {
        let ex = example1();
        let r = poisson_bracket(&ex.hamiltonian, &p(&ex.ctx, 1)).unwrap();
        assert!(!r.is_zero());
        // {H, p1} = d H/d x1 = b1/(2 sqrt(x1))
        let b1 = par(&ex.ctx, "b1");
        let expected = mp(&b1 / &(&int(&ex.ctx, 2) * &sqrt_x(&ex.ctx, 1)));
        assert_eq!(r, expected);
    }

    #[test]
    fn example3_brackets_vanish() {
        let ex = example3();
        for (name, k) in &ex.symmetries {
            let r = poisson_bracket(&ex.hamiltonian, k).unwrap();
            assert!(r.is_zero(), "{{H, {name}}} = {r}");
        }
    }
}
