//! Integration tests for the classical transforms on catalog data.

use ccm_core::catalog::classical::{example1, example2, example3, example3_b0};
use ccm_core::phase::{grade_decompose, poisson_bracket};
use ccm_core::transforms::{
    ccm_transform, jacobi_hamiltonian, jacobi_transform, poisson_bracket_rational,
    stackel_hamiltonian, stackel_transform_2nd, stackel_transform_general, AlphaPoly,
    RationalPhase,
};
use ccm_core::{MomentumPoly, Scalar};

fn par(ctx: &std::sync::Arc<ccm_core::Context>, n: &str) -> Scalar {
    Scalar::param(ctx, n).unwrap()
}

#[test]
fn ccm_with_sqrt_potential_is_fifth_order() {
    // alpha := b1, U = sqrt(x1); the transform of K3 gains two momentum orders
    let ex = example1();
    let ctx = &ex.ctx;
    let k3 = ex.symmetry("K3").unwrap();
    let alpha = AlphaPoly::extract(k3, "b1").unwrap();
    let b2 = par(ctx, "b2");
    let base = &(&ex.hamiltonian
        - &MomentumPoly::from_scalar(&par(ctx, "b1") * &Scalar::sqrt_coord(ctx, 1).unwrap()))
        - &MomentumPoly::zero(ctx);
    let _ = b2;
    let u = Scalar::sqrt_coord(ctx, 1).unwrap();
    let e = par(ctx, "E");
    let out = ccm_transform(&alpha, &base, &u, &e, "b1").unwrap();
    assert!(out.transformed.is_polynomial());
    assert_eq!(out.transformed.num().degree(), 5);
    // the output commutes with the new Hamiltonian under the quotient-rule bracket
    let resid = poisson_bracket_rational(&out.transformed, &out.new_hamiltonian).unwrap();
    assert!(resid.is_zero(), "residual {resid}");
}

#[test]
fn ccm_with_x2_potential_is_rational_nonpolynomial() {
    // alpha := b2, U = x2; K3 is Laurent in b2, the transform picks up a
    // momentum-dependent denominator
    let ex = example1();
    let ctx = &ex.ctx;
    let k3 = ex.symmetry("K3").unwrap();
    let alpha = AlphaPoly::extract(k3, "b2").unwrap();
    assert_eq!(alpha.min_power(), -1);
    let base = &ex.hamiltonian
        - &MomentumPoly::from_scalar(&par(ctx, "b2") * &Scalar::coord(ctx, 2).unwrap());
    let u = Scalar::coord(ctx, 2).unwrap();
    let e = par(ctx, "E");
    let out = ccm_transform(&alpha, &base, &u, &e, "b2").unwrap();
    assert!(!out.transformed.is_polynomial());
    let resid = poisson_bracket_rational(&out.transformed, &out.new_hamiltonian).unwrap();
    assert!(resid.is_zero(), "residual {resid}");
}

#[test]
fn ccm_alpha_free_input_is_unchanged() {
    let ex = example1();
    let ctx = &ex.ctx;
    let k2 = ex.symmetry("K2").unwrap();
    let alpha = AlphaPoly::extract(k2, "b1").unwrap();
    let base = &ex.hamiltonian
        - &MomentumPoly::from_scalar(&par(ctx, "b1") * &Scalar::sqrt_coord(ctx, 1).unwrap());
    let u = Scalar::sqrt_coord(ctx, 1).unwrap();
    let e = par(ctx, "E");
    let out = ccm_transform(&alpha, &base, &u, &e, "b1").unwrap();
    assert_eq!(out.transformed.as_polynomial().unwrap(), k2);
}

#[test]
fn ccm_rejects_non_symmetries() {
    let ex = example1();
    let ctx = &ex.ctx;
    let bogus = AlphaPoly::constant(MomentumPoly::momentum(ctx, 1).unwrap());
    let u = Scalar::sqrt_coord(ctx, 1).unwrap();
    let e = par(ctx, "E");
    assert!(ccm_transform(&bogus, &ex.hamiltonian, &u, &e, "b1").is_err());
}

#[test]
fn jacobi_transform_reproduces_printed_forms() {
    let (ex1, expected) = example2();
    let ctx = &ex1.ctx;
    let free = ex1.sys.free_hamiltonian();
    let u = ex1.sys.transform_potential().clone();
    let e = par(ctx, "E");

    let k2_hat = jacobi_transform(
        &grade_decompose(ex1.symmetry("K2").unwrap()).unwrap(),
        &free,
        &u,
        &e,
    )
    .unwrap();
    assert_eq!(k2_hat, expected.k2_hat);

    let k3_hat = jacobi_transform(
        &grade_decompose(ex1.symmetry("K3").unwrap()).unwrap(),
        &free,
        &u,
        &e,
    )
    .unwrap();
    assert_eq!(k3_hat, expected.k3_hat);

    let h_hat = jacobi_hamiltonian(&free, &u, &e).unwrap();
    assert_eq!(h_hat, expected.hamiltonian);

    for k in [&k2_hat, &k3_hat] {
        let r = poisson_bracket(&h_hat, k).unwrap();
        assert!(r.is_zero(), "residual {r}");
    }
}

#[test]
fn jacobi_transform_of_pure_killing_tensor_is_identity() {
    // single-grade input: p2^2 against a potential free of x2 satisfies both
    // determining equations, and the transform leaves it untouched
    let ex = example1();
    let ctx = &ex.ctx;
    let free = ex.sys.free_hamiltonian();
    let u = &par(ctx, "b1") * &Scalar::sqrt_coord(ctx, 1).unwrap();
    let e = par(ctx, "E");
    let k2 = MomentumPoly::momentum(ctx, 2).unwrap().pow(2);
    let k = grade_decompose(&k2).unwrap();
    let hat = jacobi_transform(&k, &free, &u, &e).unwrap();
    assert_eq!(hat, k2);
}

#[test]
fn corollary_homomorphism_on_example2() {
    // products and brackets pass through the transform; order bookkeeping
    // matters because the transform weights grades by powers of the new
    // Hamiltonian, so the bracket of orders (2,3) transforms as an order-4
    // object even though its surviving grade is the constant one
    let (ex1, _) = example2();
    let ctx = &ex1.ctx;
    let free = ex1.sys.free_hamiltonian();
    let u = ex1.sys.transform_potential().clone();
    let e = par(ctx, "E");
    let k2 = ex1.symmetry("K2").unwrap();
    let k3 = ex1.symmetry("K3").unwrap();
    let hat = |k: &MomentumPoly| {
        jacobi_transform(&grade_decompose(k).unwrap(), &free, &u, &e).unwrap()
    };
    let hat_as = |k: &MomentumPoly, order: usize| {
        jacobi_transform(
            &ccm_core::phase::grade_decompose_as(k, order).unwrap(),
            &free,
            &u,
            &e,
        )
        .unwrap()
    };

    // bracket of orders (2,3): an order-4 graded object
    let br = poisson_bracket(k2, k3).unwrap();
    let lhs = hat_as(&br, 2 + 3 - 1);
    let rhs = poisson_bracket(&hat(k2), &hat(k3)).unwrap();
    assert_eq!(lhs, rhs);

    // product of orders (2,3): an order-5 graded object
    let prod = k2.mul(k3);
    let lhs = hat_as(&prod, 2 + 3);
    let rhs = hat(k2).mul(&hat(k3));
    assert_eq!(lhs, rhs);

    // linearity on same-order inputs (K2 and the source Hamiltonian H0 + U)
    let source_h = &free + &ccm_core::MomentumPoly::from_scalar(u.clone());
    let scaled = &k2.scale_rational(&num_rational::BigRational::from_integer(3.into()))
        + &source_h.scale_rational(&num_rational::BigRational::from_integer(2.into()));
    let lhs = hat(&scaled);
    let rhs = &hat(k2).scale_rational(&num_rational::BigRational::from_integer(3.into()))
        + &hat(&source_h).scale_rational(&num_rational::BigRational::from_integer(2.into()));
    assert_eq!(lhs, rhs);
}

#[test]
fn ccm_bracket_corollary_on_example1_pair() {
    // {K1(-H'), K2(-H')} = {K1, K2}(-H') with alpha := b1, U = sqrt(x1)
    let ex = example1();
    let ctx = &ex.ctx;
    let k2 = ex.symmetry("K2").unwrap();
    let k3 = ex.symmetry("K3").unwrap();
    let base = &ex.hamiltonian
        - &MomentumPoly::from_scalar(&par(ctx, "b1") * &Scalar::sqrt_coord(ctx, 1).unwrap());
    let u = Scalar::sqrt_coord(ctx, 1).unwrap();
    let e = par(ctx, "E");

    let a2 = AlphaPoly::extract(k2, "b1").unwrap();
    let a3 = AlphaPoly::extract(k3, "b1").unwrap();
    let t2 = ccm_transform(&a2, &base, &u, &e, "b1").unwrap().transformed;
    let t3 = ccm_transform(&a3, &base, &u, &e, "b1").unwrap().transformed;
    let lhs = poisson_bracket_rational(&t2, &t3).unwrap();

    let bracket = poisson_bracket(k2, k3).unwrap();
    let ab = AlphaPoly::extract(&bracket, "b1").unwrap();
    let rhs = ccm_transform(&ab, &base, &u, &e, "b1").unwrap().transformed;

    let diff = lhs.sub(&rhs).unwrap();
    assert!(diff.is_zero(), "difference {diff}");
}

#[test]
fn stackel_2nd_on_example3_k2() {
    let ex = example3();
    let ctx = &ex.ctx;
    let b0 = example3_b0(ctx);
    let k2 = ex.symmetry("K2").unwrap();
    let kt = stackel_transform_2nd(k2, &ex.sys, &b0).unwrap();
    let ht = stackel_hamiltonian(&ex.sys, &b0).unwrap();
    let r = poisson_bracket(&kt, &ht).unwrap();
    assert!(r.is_zero(), "residual nonzero");
}

#[test]
fn stackel_2nd_with_zero_restriction_is_identity() {
    // K with K0^U = 0: use K2 of example3 with b = c = 0 in its scalar part
    let ex = example3();
    let ctx = &ex.ctx;
    let ang = {
        let x1 = Scalar::coord(ctx, 1).unwrap();
        let x2 = Scalar::coord(ctx, 2).unwrap();
        let p1 = MomentumPoly::momentum(ctx, 1).unwrap();
        let p2 = MomentumPoly::momentum(ctx, 2).unwrap();
        &p2.scale(&x1) - &p1.scale(&x2)
    };
    let k = ang.mul(&ang);
    // angular momentum squared is not a symmetry of the full system, so use
    // the explicit-restriction entry point to check the algebraic identity
    let u = ex.sys.potential_at(&example3_b0(ctx)).unwrap();
    let kt = ccm_core::transforms::stackel_transform_2nd_explicit(
        &k,
        &ex.sys,
        &u,
        &Scalar::zero(ctx),
    )
    .unwrap();
    assert_eq!(kt, k);
}

#[test]
fn stackel_roundtrip_is_identity_when_normalized() {
    // transforming by U and back by 1/U returns K when K0 restricted to the
    // constant potential vanishes
    let ex = example3();
    let ctx = &ex.ctx;
    let b0 = example3_b0(ctx);
    let u = ex.sys.potential_at(&b0).unwrap();
    let k2 = ex.symmetry("K2").unwrap();
    // K2's scalar part vanishes at b = c = 0, so K2 is normalized
    let kt = stackel_transform_2nd(k2, &ex.sys, &b0).unwrap();

    // inverse system: metric scaled by U, potential family V/U plus 1/U
    let inv_sys = ccm_core::SystemDefinition::new(
        ctx,
        vec![
            vec![u.inverse().unwrap(), Scalar::zero(ctx)],
            vec![Scalar::zero(ctx), u.inverse().unwrap()],
        ],
        ex.sys.potential().div(&u).unwrap(),
        ex.sys.family().to_vec(),
        u.inverse().unwrap(),
    )
    .unwrap();
    // restriction of the transformed K0 to the potential 1/U: family point
    // with b0 = (0,0,0,?) such that V/U = 1/U -> original V = 1, i.e. the
    // constant member; K2 has no d-dependence so K0^(1/U) = K2's scalar part
    // at (a,b,c,d) = (0,0,0,1), which is 0... compute via substitution.
    let graded = grade_decompose(&kt).unwrap();
    let k0 = graded.part(1).scalar_part();
    let bindings: Vec<(String, Scalar)> = vec![
        ("a".into(), Scalar::zero(ctx)),
        ("b".into(), Scalar::zero(ctx)),
        ("c".into(), Scalar::zero(ctx)),
        ("d".into(), Scalar::from_int(ctx, 1)),
    ];
    let k0_restricted = k0.substitute(&bindings).unwrap();
    let back = ccm_core::transforms::stackel_transform_2nd_explicit(
        &kt,
        &inv_sys,
        &u.inverse().unwrap(),
        &k0_restricted,
    )
    .unwrap();
    assert_eq!(back, *k2);
}

#[test]
fn stackel_general_on_example3() {
    let ex = example3();
    let ctx = &ex.ctx;
    let b0 = example3_b0(ctx);
    let ht = stackel_hamiltonian(&ex.sys, &b0).unwrap();

    // the transformed Hamiltonian matches (H0 + V)/U built by hand
    let u = ex.sys.potential_at(&b0).unwrap();
    let byhand = ex.sys.hamiltonian().div_scalar(&u).unwrap();
    assert_eq!(ht, byhand);

    let k2t = stackel_transform_general(
        &grade_decompose(ex.symmetry("K2").unwrap()).unwrap(),
        &ex.sys,
        &b0,
    )
    .unwrap();
    assert_eq!(k2t.degree(), 2);
    let r = poisson_bracket(&k2t, &ht).unwrap();
    assert!(r.is_zero(), "2nd order transform fails to commute");

    let k4t = stackel_transform_general(
        &grade_decompose(ex.symmetry("K4").unwrap()).unwrap(),
        &ex.sys,
        &b0,
    )
    .unwrap();
    assert_eq!(k4t.degree(), 4);
    let r = poisson_bracket(&k4t, &ht).unwrap();
    assert!(r.is_zero(), "4th order transform fails to commute");
}

#[test]
fn rational_phase_flags() {
    let ex = example1();
    let ctx = &ex.ctx;
    let h = &ex.hamiltonian;
    let rp = RationalPhase::new(
        h.mul(&MomentumPoly::momentum(ctx, 1).unwrap()),
        h.clone(),
    )
    .unwrap();
    // exact cancellation of the momentum-dependent factor
    let mut rp = rp;
    rp.cancel_factor(h).unwrap();
    assert!(rp.is_polynomial());
}
