//! Classical transforms: coupling constant metamorphosis, the Jacobi
//! transform, and the 2nd- and Nth-order Stackel transforms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::context::Context;
use crate::error::CoreError;
use crate::phase::{
    determining_equations, grade_decompose, poisson_bracket, GradedSymmetry, MomentumPoly,
    SystemDefinition,
};
use crate::scalar::Scalar;

/// Laurent polynomial in the coupling parameter with momentum-polynomial
/// coefficients: K(alpha) = sum_j alpha^j K_j.
#[derive(Clone, Debug)]
pub struct AlphaPoly {
    ctx: Arc<Context>,
    coeffs: BTreeMap<i32, MomentumPoly>,
}

impl AlphaPoly {
    pub fn new(ctx: &Arc<Context>, coeffs: BTreeMap<i32, MomentumPoly>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, k)| !k.is_zero()).collect();
        AlphaPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn constant(k: MomentumPoly) -> Self {
        let ctx = k.ctx().clone();
        let mut coeffs = BTreeMap::new();
        if !k.is_zero() {
            coeffs.insert(0, k);
        }
        AlphaPoly { ctx, coeffs }
    }

    /// Read the alpha-dependence off a momentum polynomial whose coefficients
    /// contain the named parameter (Laurent in that parameter).
    pub fn extract(k: &MomentumPoly, alpha: &str) -> Result<Self, CoreError> {
        let ctx = k.ctx().clone();
        let mut coeffs: BTreeMap<i32, MomentumPoly> = BTreeMap::new();
        for (idx, c) in k.terms() {
            for (pow, part) in c.laurent_in_param(alpha)? {
                let entry = coeffs
                    .entry(pow)
                    .or_insert_with(|| MomentumPoly::zero(&ctx));
                *entry = entry.add(&MomentumPoly::term(part, idx));
            }
        }
        Ok(Self::new(&ctx, coeffs))
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, MomentumPoly> {
        &self.coeffs
    }

    pub fn min_power(&self) -> i32 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    pub fn max_power(&self) -> i32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// Flatten back to a momentum polynomial with the parameter in place.
    pub fn flatten(&self, alpha: &str) -> Result<MomentumPoly, CoreError> {
        let a = Scalar::param(&self.ctx, alpha)?;
        let mut acc = MomentumPoly::zero(&self.ctx);
        for (&pow, k) in &self.coeffs {
            acc = acc.add(&k.scale(&a.pow(pow)?));
        }
        Ok(acc)
    }

    /// Substitute alpha -> num/den (a ratio of momentum polynomials), clearing
    /// denominators. Returns the rational phase function.
    pub fn substitute_ratio(
        &self,
        num: &MomentumPoly,
        den: &MomentumPoly,
    ) -> Result<RationalPhase, CoreError> {
        if den.is_zero() {
            return Err(CoreError::DegenerateInput("zero denominator in ratio".into()));
        }
        let lo = self.min_power().min(0);
        let hi = self.max_power().max(0);
        let mut acc_num = MomentumPoly::zero(&self.ctx);
        for (&pow, k) in &self.coeffs {
            // alpha^pow -> num^pow/den^pow, cleared by num^(-lo) den^hi
            let term = k
                .mul(&num.pow((pow - lo) as u32))
                .mul(&den.pow((hi - pow) as u32));
            acc_num = acc_num.add(&term);
        }
        let full_den = num.pow((-lo) as u32).mul(&den.pow(hi as u32));
        RationalPhase::new(acc_num, full_den)
    }
}

/// Formal quotient of momentum polynomials with the bracket extended by the
/// quotient rule. Momentum-free denominator content is folded into the
/// numerator coefficients, so `den` is 1 exactly when the value is polynomial
/// in the momenta.
#[derive(Clone)]
pub struct RationalPhase {
    num: MomentumPoly,
    den: MomentumPoly,
}

impl RationalPhase {
    pub fn new(num: MomentumPoly, den: MomentumPoly) -> Result<Self, CoreError> {
        if den.is_zero() {
            return Err(CoreError::DegenerateInput(
                "zero denominator in rational phase function".into(),
            ));
        }
        let mut rp = RationalPhase { num, den };
        rp.simplify()?;
        Ok(rp)
    }

    pub fn from_poly(num: MomentumPoly) -> Self {
        let den = MomentumPoly::constant(num.ctx(), 1);
        RationalPhase { num, den }
    }

    fn simplify(&mut self) -> Result<(), CoreError> {
        if self.num.is_zero() {
            self.den = MomentumPoly::constant(self.num.ctx(), 1);
            return Ok(());
        }
        // fold momentum-free denominators into the coefficients
        if self.den.is_momentum_free() {
            let s = self.den.scalar_part();
            self.num = self.num.div_scalar(&s)?;
            self.den = MomentumPoly::constant(self.num.ctx(), 1);
        }
        Ok(())
    }

    /// Cancel exact momentum-polynomial factors of the denominator when the
    /// caller knows a candidate (powers are cancelled greedily).
    pub fn cancel_factor(&mut self, factor: &MomentumPoly) -> Result<(), CoreError> {
        loop {
            if self.den.is_momentum_free() {
                break;
            }
            match (self.num.div_exact(factor), self.den.div_exact(factor)) {
                (Some(n), Some(d)) => {
                    self.num = n;
                    self.den = d;
                }
                _ => break,
            }
        }
        self.simplify()
    }

    pub fn num(&self) -> &MomentumPoly {
        &self.num
    }

    pub fn den(&self) -> &MomentumPoly {
        &self.den
    }

    pub fn ctx(&self) -> &Arc<Context> {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value is a polynomial in the momenta (denominator free
    /// of momenta after simplification).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_momentum_free()
    }

    pub fn as_polynomial(&self) -> Option<&MomentumPoly> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn sub(&self, other: &RationalPhase) -> Result<RationalPhase, CoreError> {
        let num = self
            .num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den));
        RationalPhase::new(num, self.den.mul(&other.den))
    }

    pub fn mul(&self, other: &RationalPhase) -> Result<RationalPhase, CoreError> {
        RationalPhase::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// {a/b, c/d} by the quotient rule, as a rational phase function.
pub fn poisson_bracket_rational(
    lhs: &RationalPhase,
    rhs: &RationalPhase,
) -> Result<RationalPhase, CoreError> {
    let (a, b) = (&lhs.num, &lhs.den);
    let (c, d) = (&rhs.num, &rhs.den);
    let ac = poisson_bracket(a, c)?;
    let ad = poisson_bracket(a, d)?;
    let bc = poisson_bracket(b, c)?;
    let bd = poisson_bracket(b, d)?;
    let num = ac
        .mul(&b.mul(d))
        .sub(&ad.mul(&b.mul(c)))
        .sub(&bc.mul(&a.mul(d)))
        .add(&bd.mul(&a.mul(c)));
    let den = b.mul(b).mul(&d.mul(d));
    RationalPhase::new(num, den)
}

/// Outcome of coupling constant metamorphosis.
#[derive(Clone, Debug)]
pub struct CcmOutcome {
    /// K(-H') with H' = (H - E)/U
    pub transformed: RationalPhase,
    /// the transformed Hamiltonian H'
    pub new_hamiltonian: RationalPhase,
}

/// Coupling constant metamorphosis: requires {K(alpha), H + alpha U} = 0
/// identically in the symbolic coupling, then substitutes
/// alpha -> -(H - E)/U.
pub fn ccm_transform(
    k_alpha: &AlphaPoly,
    hamiltonian: &MomentumPoly,
    u: &Scalar,
    energy: &Scalar,
    alpha: &str,
) -> Result<CcmOutcome, CoreError> {
    let ctx = hamiltonian.ctx();
    if u.is_zero() {
        return Err(CoreError::DegenerateInput("transform potential U is zero".into()));
    }
    let flat = k_alpha.flatten(alpha)?;
    let coupled = hamiltonian.add(&MomentumPoly::from_scalar(
        Scalar::param(ctx, alpha)?.mul(u),
    ));
    let residual = poisson_bracket(&flat, &coupled)?;
    if !residual.is_zero() {
        return Err(CoreError::NotASymmetry(format!(
            "{{K(alpha), H + alpha U}} = {residual}"
        )));
    }
    let shifted = hamiltonian.sub(&MomentumPoly::from_scalar(energy.clone()));
    // alpha -> -(H - E)/U
    let num = shifted.neg();
    let den = MomentumPoly::from_scalar(u.clone());
    let mut transformed = k_alpha.substitute_ratio(&num, &den)?;
    transformed.cancel_factor(&shifted)?;
    let new_hamiltonian = RationalPhase::new(shifted, MomentumPoly::from_scalar(u.clone()))?;
    Ok(CcmOutcome { transformed, new_hamiltonian })
}

/// Jacobi transform of a graded symmetry of H_0 + U:
/// K-hat = sum_j (-(H_0 - E)/U)^j K_{N-2j}, a momentum polynomial whose
/// coefficient denominators are powers of U.
pub fn jacobi_transform(
    k: &GradedSymmetry,
    free: &MomentumPoly,
    u: &Scalar,
    energy: &Scalar,
) -> Result<MomentumPoly, CoreError> {
    if u.is_zero() {
        return Err(CoreError::DegenerateInput("transform potential U is zero".into()));
    }
    let residuals = determining_equations(k, free, u)?;
    if !residuals.all_zero() {
        let bad: Vec<String> = residuals
            .entries()
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(name, _)| name)
            .collect();
        return Err(CoreError::NotASymmetry(format!(
            "determining equations fail at {}",
            bad.join(", ")
        )));
    }
    let shifted = free.sub(&MomentumPoly::from_scalar(energy.clone()));
    let u_inv = u.inverse()?;
    let mut acc = MomentumPoly::zero(k.ctx());
    for (j, part) in k.parts().iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        let mut term = part.mul(&shifted.pow(j as u32));
        if j % 2 == 1 {
            term = term.neg();
        }
        term = term.scale(&u_inv.pow(j as i32)?);
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The transformed Hamiltonian (H_0 - E)/U of the Jacobi transform.
pub fn jacobi_hamiltonian(
    free: &MomentumPoly,
    u: &Scalar,
    energy: &Scalar,
) -> Result<MomentumPoly, CoreError> {
    free.sub(&MomentumPoly::from_scalar(energy.clone()))
        .div_scalar(u)
}

/// 2nd-order Stackel transform: K-tilde = K - (K_0^U / U) H.
pub fn stackel_transform_2nd(
    k: &MomentumPoly,
    sys: &SystemDefinition,
    b0: &[Scalar],
) -> Result<MomentumPoly, CoreError> {
    let graded = grade_decompose(k)?;
    if graded.order() != 2 {
        return Err(CoreError::GradingViolation(format!(
            "expected a 2nd-order symmetry, found order {}",
            graded.order()
        )));
    }
    let u = sys.potential_at(b0)?;
    if u.is_zero() {
        return Err(CoreError::DegenerateInput("transform potential U is zero".into()));
    }
    let k0 = graded.part(1).scalar_part();
    let bindings: Vec<(String, Scalar)> = sys
        .family()
        .iter()
        .cloned()
        .zip(b0.iter().cloned())
        .collect();
    let k0_u = k0.substitute(&bindings)?;
    stackel_transform_2nd_explicit(k, sys, &u, &k0_u)
}

/// 2nd-order Stackel transform with an explicitly supplied restriction K_0^U.
pub fn stackel_transform_2nd_explicit(
    k: &MomentumPoly,
    sys: &SystemDefinition,
    u: &Scalar,
    k0_u: &Scalar,
) -> Result<MomentumPoly, CoreError> {
    let h = sys.hamiltonian();
    let factor = k0_u.div(u)?;
    Ok(k.sub(&h.scale(&factor)))
}

/// Nth-order Stackel transform of a parameter-graded symmetry:
/// K-tilde = K(b + alpha b0) with alpha = -(H_0 + V)/U, U = V(x, b0).
pub fn stackel_transform_general(
    k: &GradedSymmetry,
    sys: &SystemDefinition,
    b0: &[Scalar],
) -> Result<MomentumPoly, CoreError> {
    k.check_parameter_grading(sys.family())?;
    let u = sys.potential_at(b0)?;
    if u.is_zero() {
        return Err(CoreError::DegenerateInput("transform potential U is zero".into()));
    }
    let ctx = sys.ctx();
    let alpha_name = fresh_param_name(ctx, "alpha");
    let ext = ctx.extended(&[alpha_name.as_str()]);
    let alpha = Scalar::param(&ext, &alpha_name)?;

    // substitute b -> b + alpha*b0 inside the assembled symmetry
    let bindings: Vec<(String, Scalar)> = sys
        .family()
        .iter()
        .zip(b0.iter())
        .map(|(name, v)| {
            let b = Scalar::param(&ext, name)?;
            Ok((name.clone(), b.add(&alpha.mul(&v.lift(&ext)?))))
        })
        .collect::<Result<_, CoreError>>()?;
    let shifted = k.assemble().lift(&ext)?.substitute(&bindings)?;

    let series = AlphaPoly::extract(&shifted, &alpha_name)?;
    let max = series.max_power();
    if series.min_power() < 0 || max as usize > k.order() / 2 {
        return Err(CoreError::GradingViolation(format!(
            "alpha-dependence of the shifted symmetry has powers {}..{}",
            series.min_power(),
            max
        )));
    }

    // alpha -> -(H_0 + V)/U as scalar-coefficient arithmetic; dividing by
    // the factored inverse keeps U out of the numerators
    let h = sys.hamiltonian();
    let minus_ratio_num = h.neg();
    let u_inv = u.inverse()?;
    let mut acc = MomentumPoly::zero(ctx);
    for (&pow, part) in series.coeffs() {
        let part = part.project(ctx)?;
        let term = part
            .mul(&minus_ratio_num.pow(pow as u32))
            .scale(&u_inv.pow(pow)?);
        acc = acc.add(&term);
    }
    if acc.degree() > k.order() {
        return Err(CoreError::GradingViolation(format!(
            "expansion produced momentum degree {} > {}",
            acc.degree(),
            k.order()
        )));
    }
    Ok(acc)
}

/// The transformed Hamiltonian (H_0 + V)/U with U = V(x, b0).
pub fn stackel_hamiltonian(
    sys: &SystemDefinition,
    b0: &[Scalar],
) -> Result<MomentumPoly, CoreError> {
    let u = sys.potential_at(b0)?;
    sys.hamiltonian().div_scalar(&u)
}

pub(crate) fn fresh_param_name(ctx: &Arc<Context>, base: &str) -> String {
    if ctx.param_var(base).is_none() {
        return base.to_string();
    }
    let mut i = 1;
    loop {
        let name = format!("{base}{i}");
        if ctx.param_var(&name).is_none() {
            return name;
        }
        i += 1;
    }
}
