//! 2D linear differential operators with exact rational-function
//! coefficients: normal-ordered composition, commutators, formal adjoints,
//! self-adjoint normal forms and principal symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::context::Context;
use crate::error::CoreError;
use crate::phase::MomentumPoly;
use crate::scalar::Scalar;

/// Derivative multi-index (d1, d2).
pub type DIndex = (u16, u16);

/// Normal form: every coefficient stands to the left of a pure derivative
/// monomial. Equality is coefficient-map equality.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    ctx: Arc<Context>,
    terms: BTreeMap<DIndex, Scalar>,
}

impl DiffOp {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        assert_eq!(ctx.coords(), 2, "operators are two-dimensional");
        DiffOp { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn from_scalar(s: Scalar) -> Self {
        let ctx = s.ctx().clone();
        let mut op = Self::zero(&ctx);
        op.insert((0, 0), s);
        op
    }

    pub fn constant(ctx: &Arc<Context>, c: i64) -> Self {
        Self::from_scalar(Scalar::from_int(ctx, c))
    }

    /// d^(d1) d^(d2) with unit coefficient.
    pub fn derivative(ctx: &Arc<Context>, d1: u16, d2: u16) -> Self {
        let mut op = Self::zero(ctx);
        op.insert((d1, d2), Scalar::one(ctx));
        op
    }

    pub fn term(coeff: Scalar, idx: DIndex) -> Self {
        let ctx = coeff.ctx().clone();
        let mut op = Self::zero(&ctx);
        op.insert(idx, coeff);
        op
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: DIndex) -> Scalar {
        self.terms
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.ctx))
    }

    /// Highest total derivative order with a nonzero coefficient.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|(a, b)| (*a + *b) as usize)
            .max()
            .unwrap_or(0)
    }

    fn insert(&mut self, idx: DIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_ctx(&self, other: &Self) {
        assert!(
            Context::same(&self.ctx, &other.ctx),
            "operator context mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.insert(*idx, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiffOp {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, c.neg()))
                .collect(),
        }
    }

    /// Left multiplication by a function.
    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        DiffOp {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, c.mul(s)))
                .collect(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.scale(&Scalar::from_rational(&self.ctx, c.clone()))
    }

    /// Normal-ordered product via the generalized Leibniz rule:
    /// (f d^a)(g d^b) = f sum_{beta <= a} C(a, beta) (d^beta g) d^(a-beta+b).
    pub fn compose(&self, other: &Self) -> Result<Self, CoreError> {
        self.assert_ctx(other);
        let mut buckets: BTreeMap<DIndex, Vec<Scalar>> = BTreeMap::new();
        // max derivative order applied to the right factors
        let amax = self
            .terms
            .keys()
            .fold((0u16, 0u16), |m, k| (m.0.max(k.0), m.1.max(k.1)));
        for ((b1, b2), g) in &other.terms {
            // derivative table of g up to amax
            let mut table: Vec<Vec<Scalar>> =
                vec![vec![Scalar::zero(&self.ctx); amax.1 as usize + 1]; amax.0 as usize + 1];
            table[0][0] = g.clone();
            for i in 0..=amax.0 as usize {
                for j in 0..=amax.1 as usize {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    table[i][j] = if i > 0 {
                        table[i - 1][j].differentiate(1)?
                    } else {
                        table[i][j - 1].differentiate(2)?
                    };
                }
            }
            for ((a1, a2), f) in &self.terms {
                for b_1 in 0..=*a1 {
                    for b_2 in 0..=*a2 {
                        let dg = &table[b_1 as usize][b_2 as usize];
                        if dg.is_zero() {
                            continue;
                        }
                        let c = binom(*a1, b_1) * binom(*a2, b_2);
                        let coeff = f.mul(dg).scale_rational(&c);
                        let idx = (a1 - b_1 + b1, a2 - b_2 + b2);
                        buckets.entry(idx).or_default().push(coeff);
                    }
                }
            }
        }
        let mut out = Self::zero(&self.ctx);
        for (idx, items) in buckets {
            out.insert(idx, crate::scalar::tree_sum(&self.ctx, items));
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, CoreError> {
        Ok(self.compose(other)?.sub(&other.compose(self)?))
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self, CoreError> {
        Ok(self.compose(other)?.add(&other.compose(self)?))
    }

    pub fn pow(&self, exp: u32) -> Result<Self, CoreError> {
        let mut acc = Self::constant(&self.ctx, 1);
        for _ in 0..exp {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Formal adjoint with respect to <f, g> = integral of f g weight:
    /// (c d^a)* = (-1)^|a| weight^{-1} ∘ d^a ∘ (weight c ·), normal ordered.
    pub fn formal_adjoint(&self, weight: &Scalar) -> Result<Self, CoreError> {
        if weight.is_zero() {
            return Err(CoreError::DegenerateInput("zero weight".into()));
        }
        let weight_inv = weight.inverse()?;
        let mut out = Self::zero(&self.ctx);
        for ((a1, a2), c) in &self.terms {
            let m = weight.mul(c);
            // derivative table of m up to (a1, a2)
            let mut table: Vec<Vec<Scalar>> =
                vec![vec![Scalar::zero(&self.ctx); *a2 as usize + 1]; *a1 as usize + 1];
            table[0][0] = m;
            for i in 0..=*a1 as usize {
                for j in 0..=*a2 as usize {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    table[i][j] = if i > 0 {
                        table[i - 1][j].differentiate(1)?
                    } else {
                        table[i][j - 1].differentiate(2)?
                    };
                }
            }
            let sign = if (*a1 + *a2) % 2 == 0 {
                BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::from_integer(BigInt::from(-1))
            };
            for b1 in 0..=*a1 {
                for b2 in 0..=*a2 {
                    let dm = &table[b1 as usize][b2 as usize];
                    if dm.is_zero() {
                        continue;
                    }
                    let c = binom(*a1, b1) * binom(*a2, b2) * &sign;
                    let coeff = weight_inv.mul(dm).scale_rational(&c);
                    out.insert((a1 - b1, a2 - b2), coeff);
                }
            }
        }
        Ok(out)
    }

    /// Apply the operator to a function.
    pub fn apply(&self, f: &Scalar) -> Result<Scalar, CoreError> {
        let mut acc = Scalar::zero(&self.ctx);
        let amax = self
            .terms
            .keys()
            .fold((0u16, 0u16), |m, k| (m.0.max(k.0), m.1.max(k.1)));
        let mut table: Vec<Vec<Scalar>> =
            vec![vec![Scalar::zero(&self.ctx); amax.1 as usize + 1]; amax.0 as usize + 1];
        table[0][0] = f.clone();
        for i in 0..=amax.0 as usize {
            for j in 0..=amax.1 as usize {
                if i == 0 && j == 0 {
                    continue;
                }
                table[i][j] = if i > 0 {
                    table[i - 1][j].differentiate(1)?
                } else {
                    table[i][j - 1].differentiate(2)?
                };
            }
        }
        for ((a1, a2), c) in &self.terms {
            acc = acc.add(&c.mul(&table[*a1 as usize][*a2 as usize]));
        }
        Ok(acc)
    }

    /// Top-order coefficients as a momentum polynomial (the classical limit).
    pub fn principal_symbol(&self) -> MomentumPoly {
        let order = self.order();
        let mut out = MomentumPoly::zero(&self.ctx);
        for ((a1, a2), c) in &self.terms {
            if (*a1 + *a2) as usize == order {
                out = out.add(&MomentumPoly::term(c.clone(), &[*a1, *a2]));
            }
        }
        out
    }

    /// Substitute parameters in every coefficient.
    pub fn substitute(&self, bindings: &[(String, Scalar)]) -> Result<Self, CoreError> {
        let mut out = Self::zero(&self.ctx);
        for (idx, c) in &self.terms {
            out.insert(*idx, c.substitute(bindings)?);
        }
        Ok(out)
    }

    pub fn lift(&self, target: &Arc<Context>) -> Result<Self, CoreError> {
        let mut out = Self::zero(target);
        for (idx, c) in &self.terms {
            out.insert(*idx, c.lift(target)?);
        }
        Ok(out)
    }

    pub fn project(&self, target: &Arc<Context>) -> Result<Self, CoreError> {
        let mut out = Self::zero(target);
        for (idx, c) in &self.terms {
            out.insert(*idx, c.project(target)?);
        }
        Ok(out)
    }
}

fn binom(n: u16, k: u16) -> BigRational {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&DIndex> = self.terms.keys().collect();
        keys.sort_by_key(|(a, b)| std::cmp::Reverse((*a + *b, *a)));
        for (i, idx) in keys.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[idx];
            let (a, b) = **idx;
            if a == 0 && b == 0 {
                write!(f, "{c}")?;
                continue;
            }
            let token = format!(
                "d{}{}",
                "1".repeat(a as usize),
                "2".repeat(b as usize)
            );
            if c.is_one() {
                write!(f, "{token}")?;
            } else {
                write!(f, "({c})*{token}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::ops::Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        DiffOp::add(self, rhs)
    }
}

impl std::ops::Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        DiffOp::sub(self, rhs)
    }
}

impl std::ops::Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp::neg(self)
    }
}

/// Schrodinger operator H = (1/lambda)(d11 + d22) + V.
pub fn schrodinger_operator(lambda: &Scalar, potential: &Scalar) -> Result<DiffOp, CoreError> {
    let ctx = lambda.ctx();
    let inv = lambda.inverse()?;
    let mut h = DiffOp::zero(ctx);
    h = h.add(&DiffOp::term(inv.clone(), (2, 0)));
    h = h.add(&DiffOp::term(inv, (0, 2)));
    h = h.add(&DiffOp::from_scalar(potential.clone()));
    Ok(h)
}

/// Self-adjoint 2nd-order form
/// K = (1/lambda) sum_kj d_k (lambda a^{kj} d_j ·) + W.
pub fn self_adjoint_2nd_form(
    a: &[[Scalar; 2]; 2],
    w: &Scalar,
    lambda: &Scalar,
) -> Result<DiffOp, CoreError> {
    let ctx = lambda.ctx();
    if a[0][1] != a[1][0] {
        return Err(CoreError::DegenerateInput(
            "2nd-order coefficient matrix must be symmetric".into(),
        ));
    }
    let inv = lambda.inverse()?;
    let mut op = DiffOp::from_scalar(w.clone());
    for k in 0..2usize {
        for j in 0..2usize {
            let la = lambda.mul(&a[k][j]);
            if la.is_zero() {
                continue;
            }
            // d_k (la d_j .) = la d_k d_j + (d_k la) d_j
            let idx2 = (
                u16::from(k == 0) + u16::from(j == 0),
                u16::from(k == 1) + u16::from(j == 1),
            );
            op = op.add(&DiffOp::term(inv.mul(&la), idx2));
            let dla = la.differentiate(k + 1)?;
            let idx1 = (u16::from(j == 0), u16::from(j == 1));
            op = op.add(&DiffOp::term(inv.mul(&dla), idx1));
        }
    }
    Ok(op)
}

/// First-order formally skew-adjoint form
/// L = sum_k (a^k d_k + (d_k(lambda a^k))/(2 lambda)).
pub fn skew_adjoint_1st_form(a: &[Scalar; 2], lambda: &Scalar) -> Result<DiffOp, CoreError> {
    let ctx = lambda.ctx();
    let two_lambda = lambda.scale_rational(&BigRational::from_integer(BigInt::from(2)));
    let mut op = DiffOp::zero(ctx);
    for k in 0..2usize {
        if a[k].is_zero() {
            continue;
        }
        let idx = (u16::from(k == 0), u16::from(k == 1));
        op = op.add(&DiffOp::term(a[k].clone(), idx));
        let d = lambda.mul(&a[k]).differentiate(k + 1)?;
        op = op.add(&DiffOp::from_scalar(d.div(&two_lambda)?));
    }
    Ok(op)
}

/// Separable Schrodinger pair:
/// H = (d11 + d22 + V1 + V2)/(X1 + X2),
/// K = (X2 d11 - X1 d22 + X2 V1 - X1 V2)/(X1 + X2); [H, K] = 0.
pub fn build_separable_system(
    x1_profile: &Scalar,
    x2_profile: &Scalar,
    v1: &Scalar,
    v2: &Scalar,
) -> Result<(DiffOp, DiffOp), CoreError> {
    let ctx = x1_profile.ctx();
    let lambda = x1_profile.add(x2_profile);
    if lambda.is_zero() {
        return Err(CoreError::DegenerateInput("X1 + X2 vanishes".into()));
    }
    let inv = lambda.inverse()?;
    let h = {
        let mut op = DiffOp::zero(ctx);
        op = op.add(&DiffOp::term(inv.clone(), (2, 0)));
        op = op.add(&DiffOp::term(inv.clone(), (0, 2)));
        op = op.add(&DiffOp::from_scalar(v1.add(v2).mul(&inv)));
        op
    };
    let k = {
        let mut op = DiffOp::zero(ctx);
        op = op.add(&DiffOp::term(x2_profile.mul(&inv), (2, 0)));
        op = op.add(&DiffOp::term(x1_profile.mul(&inv).neg(), (0, 2)));
        let w = &(&x2_profile.mul(v1) - &x1_profile.mul(v2)) * &inv;
        op = op.add(&DiffOp::from_scalar(w));
        op
    };
    let resid = h.commutator(&k)?;
    if !resid.is_zero() {
        return Err(CoreError::NotASymmetry(format!(
            "[H, K] = {resid} for the separable pair"
        )));
    }
    Ok((h, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<Context> {
        Context::new(2, &["a", "b", "c"])
    }

    #[test]
    fn leibniz_composition() {
        // d1 ∘ x1 = x1 d1 + 1
        let ctx = ctx();
        let d1 = DiffOp::derivative(&ctx, 1, 0);
        let x1 = DiffOp::from_scalar(Scalar::coord(&ctx, 1).unwrap());
        let prod = d1.compose(&x1).unwrap();
        assert_eq!(prod.coefficient((1, 0)), Scalar::coord(&ctx, 1).unwrap());
        assert_eq!(prod.coefficient((0, 0)), Scalar::one(&ctx));
    }

    #[test]
    fn canonical_commutator() {
        // [d1, x1] = 1
        let ctx = ctx();
        let d1 = DiffOp::derivative(&ctx, 1, 0);
        let x1 = DiffOp::from_scalar(Scalar::coord(&ctx, 1).unwrap());
        let c = d1.commutator(&x1).unwrap();
        assert_eq!(c, DiffOp::constant(&ctx, 1));
    }

    #[test]
    fn composition_matches_application() {
        // (A ∘ B) f = A (B f) on a random-ish polynomial function
        let ctx = ctx();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let a = &DiffOp::term(x2.clone(), (1, 1)) + &DiffOp::term(x1.clone(), (0, 2));
        let b = &DiffOp::term(&x1 * &x2, (1, 0)) + &DiffOp::from_scalar(x2.clone());
        let f = &(&x1 * &(&x1 * &x2)) + &(&x2 * &x2);
        let lhs = a.compose(&b).unwrap().apply(&f).unwrap();
        let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_basics() {
        let ctx = ctx();
        let one = Scalar::one(&ctx);
        // (d1)* = -d1 under the flat weight
        let d1 = DiffOp::derivative(&ctx, 1, 0);
        assert_eq!(d1.formal_adjoint(&one).unwrap(), d1.neg());
        // (T*)* = T
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let t = &DiffOp::term(x2.clone(), (2, 1)) + &DiffOp::term(Scalar::coord(&ctx, 1).unwrap(), (0, 1));
        let lambda = &Scalar::coord(&ctx, 1).unwrap() * &Scalar::coord(&ctx, 1).unwrap();
        let tt = t
            .formal_adjoint(&lambda)
            .unwrap()
            .formal_adjoint(&lambda)
            .unwrap();
        assert_eq!(tt, t);
    }

    #[test]
    fn schrodinger_is_self_adjoint() {
        let ctx = ctx();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let lambda = &(&x1 * &x1) + &(&x2 * &x2);
        let v = &Scalar::param(&ctx, "a").unwrap() * &x1;
        let h = schrodinger_operator(&lambda, &v.div(&lambda).unwrap()).unwrap();
        assert_eq!(h.formal_adjoint(&lambda).unwrap(), h);
    }

    #[test]
    fn first_order_form_is_skew() {
        let ctx = ctx();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let lambda = &(&x1 * &x1) + &(&x2 * &x2);
        // rotation field a = (-x2, x1)
        let l = skew_adjoint_1st_form(&[x2.neg(), x1.clone()], &lambda).unwrap();
        assert_eq!(l.formal_adjoint(&lambda).unwrap(), l.neg());
    }

    #[test]
    fn separable_pair_commutes() {
        let ctx = ctx();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        // X1 = x1^2, X2 = x2^2, potential-free
        let (h, k) = build_separable_system(
            &(&x1 * &x1),
            &(&x2 * &x2),
            &Scalar::zero(&ctx),
            &Scalar::zero(&ctx),
        )
        .unwrap();
        assert!(h.commutator(&k).unwrap().is_zero());
        // cubic profiles with potentials
        let a = Scalar::param(&ctx, "a").unwrap();
        let (h, k) = build_separable_system(
            &(&(&x1 * &(&x1 * &x1)) + &Scalar::one(&ctx)),
            &(&x2 * &x2),
            &(&a * &(&x1 * &x1)),
            &(&a * &x2),
        )
        .unwrap();
        assert!(h.commutator(&k).unwrap().is_zero());
    }

    #[test]
    fn principal_symbol_drops_lower_order() {
        let ctx = ctx();
        let v = Scalar::param(&ctx, "a").unwrap();
        let h = schrodinger_operator(&Scalar::one(&ctx), &v).unwrap();
        let sym = h.principal_symbol();
        assert_eq!(sym.degree(), 2);
        assert!(sym.coefficient(&[0, 0]).is_zero());
    }
}
