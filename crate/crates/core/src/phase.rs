//! Phase-space layer: polynomials in the momenta over `Scalar` coefficients,
//! Poisson brackets, momentum grading, determining equations and numeric
//! functional independence.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::context::Context;
use crate::error::CoreError;
use crate::poly::cmp_mono;
use crate::scalar::Scalar;

/// Polynomial in the momenta p_1..p_n with `Scalar` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MomentumPoly {
    ctx: Arc<Context>,
    /// momentum multi-index -> coefficient; zero coefficients never stored
    terms: BTreeMap<Vec<u16>, Scalar>,
}

impl MomentumPoly {
    pub fn zero(ctx: &Arc<Context>) -> Self {
        MomentumPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn from_scalar(s: Scalar) -> Self {
        let ctx = s.ctx().clone();
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(vec![0; ctx.coords()], s);
        }
        MomentumPoly { ctx, terms }
    }

    pub fn constant(ctx: &Arc<Context>, c: i64) -> Self {
        Self::from_scalar(Scalar::from_int(ctx, c))
    }

    /// Momentum p_i (1-based index).
    pub fn momentum(ctx: &Arc<Context>, i: usize) -> Result<Self, CoreError> {
        if i == 0 || i > ctx.coords() {
            return Err(CoreError::IndexOutOfRange { index: i, dimension: ctx.coords() });
        }
        let mut idx = vec![0u16; ctx.coords()];
        idx[i - 1] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(idx, Scalar::one(ctx));
        Ok(MomentumPoly { ctx: ctx.clone(), terms })
    }

    pub fn term(coeff: Scalar, momenta: &[u16]) -> Self {
        let ctx = coeff.ctx().clone();
        assert_eq!(momenta.len(), ctx.coords());
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(momenta.to_vec(), coeff);
        }
        MomentumPoly { ctx, terms }
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn dimension(&self) -> usize {
        self.ctx.coords()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &[u16]) -> Scalar {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.ctx))
    }

    pub fn scalar_part(&self) -> Scalar {
        self.coefficient(&vec![0; self.ctx.coords()])
    }

    /// Max total momentum degree (zero polynomial reports 0).
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn momentum_degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self
            .terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn is_momentum_free(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    fn insert(&mut self, idx: Vec<u16>, c: Scalar) {
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
            "momentum polynomial context mismatch"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MomentumPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_ctx(other);
        let mut buckets: BTreeMap<Vec<u16>, Vec<Scalar>> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let idx: Vec<u16> = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                buckets.entry(idx).or_default().push(ca.mul(cb));
            }
        }
        let mut out = MomentumPoly::zero(&self.ctx);
        for (idx, items) in buckets {
            out.insert(idx, crate::scalar::tree_sum(&self.ctx, items));
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return MomentumPoly::zero(&self.ctx);
        }
        MomentumPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        self.scale(&Scalar::from_rational(&self.ctx, c.clone()))
    }

    pub fn div_scalar(&self, s: &Scalar) -> Result<Self, CoreError> {
        if s.is_zero() {
            return Err(CoreError::DegenerateInput("division by zero scalar".into()));
        }
        let inv = s.inverse()?;
        Ok(self.scale(&inv))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = MomentumPoly::constant(&self.ctx, 1);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to coordinate x_i (1-based).
    pub fn d_coord(&self, i: usize) -> Result<Self, CoreError> {
        let mut out = MomentumPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.differentiate(i)?);
        }
        Ok(out)
    }

    /// Partial derivative with respect to momentum p_i (1-based).
    pub fn d_momentum(&self, i: usize) -> Result<Self, CoreError> {
        if i == 0 || i > self.ctx.coords() {
            return Err(CoreError::IndexOutOfRange { index: i, dimension: self.ctx.coords() });
        }
        let mut out = MomentumPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m[i - 1];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i - 1] = e - 1;
            out.insert(m2, c.scale_rational(&BigRational::from_integer(e.into())));
        }
        Ok(out)
    }

    /// Homogeneous part of the given momentum degree.
    pub fn homogeneous_part(&self, degree: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.iter().map(|&e| e as usize).sum::<usize>() == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MomentumPoly { ctx: self.ctx.clone(), terms }
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms
            .keys()
            .all(|m| m.iter().map(|&e| e as usize).sum::<usize>() == degree)
    }

    /// Substitute parameters in every coefficient.
    pub fn substitute(&self, bindings: &[(String, Scalar)]) -> Result<Self, CoreError> {
        let mut out = MomentumPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.substitute(bindings)?);
        }
        Ok(out)
    }

    pub fn lift(&self, target: &Arc<Context>) -> Result<Self, CoreError> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.lift(target)?);
        }
        Ok(MomentumPoly { ctx: target.clone(), terms })
    }

    pub fn project(&self, target: &Arc<Context>) -> Result<Self, CoreError> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.project(target)?);
        }
        Ok(MomentumPoly { ctx: target.clone(), terms })
    }

    /// Exact division by another momentum polynomial over the scalar field;
    /// `None` when not exactly divisible.
    pub fn div_exact(&self, div: &Self) -> Option<Self> {
        self.assert_ctx(div);
        assert!(!div.is_zero(), "division by zero momentum polynomial");
        if self.is_zero() {
            return Some(MomentumPoly::zero(&self.ctx));
        }
        let (lm, lc) = div
            .terms
            .iter()
            .max_by(|a, b| cmp_mono(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = MomentumPoly::zero(&self.ctx);
        while !rem.is_zero() {
            let (rm, rc) = rem
                .terms
                .iter()
                .max_by(|a, b| cmp_mono(a.0, b.0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            let mut qm = Vec::with_capacity(rm.len());
            for (a, b) in rm.iter().zip(lm.iter()) {
                if a < b {
                    return None;
                }
                qm.push(a - b);
            }
            let qc = rc.div(&lc).ok()?;
            let qterm = MomentumPoly::term(qc, &qm);
            rem = rem.sub(&qterm.mul(div));
            quo = quo.add(&qterm);
        }
        Some(quo)
    }

    /// Evaluate with one value per internal variable plus the momenta.
    pub fn eval_vars(&self, vars: &[f64], momenta: &[f64]) -> Result<f64, CoreError> {
        assert_eq!(momenta.len(), self.ctx.coords());
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.eval_vars(vars)?;
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    v *= momenta[i].powi(e as i32);
                }
            }
            acc += v;
        }
        Ok(acc)
    }
}

impl fmt::Debug for MomentumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MomentumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u16>> = self.terms.keys().collect();
        keys.sort_by(|a, b| cmp_mono(b, a));
        for (i, m) in keys.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let c = &self.terms[*m];
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("p{}", j + 1)
                    } else {
                        format!("p{}^{}", j + 1, e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &MomentumPoly {
    type Output = MomentumPoly;
    fn add(self, rhs: &MomentumPoly) -> MomentumPoly {
        MomentumPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &MomentumPoly {
    type Output = MomentumPoly;
    fn sub(self, rhs: &MomentumPoly) -> MomentumPoly {
        MomentumPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &MomentumPoly {
    type Output = MomentumPoly;
    fn mul(self, rhs: &MomentumPoly) -> MomentumPoly {
        MomentumPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &MomentumPoly {
    type Output = MomentumPoly;
    fn neg(self) -> MomentumPoly {
        MomentumPoly::neg(self)
    }
}

/// {f, g} = sum_j (d_{x_j} f · d_{p_j} g − d_{p_j} f · d_{x_j} g).
pub fn poisson_bracket(f: &MomentumPoly, g: &MomentumPoly) -> Result<MomentumPoly, CoreError> {
    if !Context::same(f.ctx(), g.ctx()) {
        return Err(CoreError::DimensionMismatch(
            "bracket operands live in different contexts".into(),
        ));
    }
    let mut out = MomentumPoly::zero(f.ctx());
    for j in 1..=f.dimension() {
        let a = f.d_coord(j)?.mul(&g.d_momentum(j)?);
        let b = f.d_momentum(j)?.mul(&g.d_coord(j)?);
        out = out.add(&a).sub(&b);
    }
    Ok(out)
}

/// Residual report for a constant-of-motion check.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub residual: MomentumPoly,
}

impl ResidualReport {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn is_constant_of_motion(
    hamiltonian: &MomentumPoly,
    candidate: &MomentumPoly,
) -> Result<ResidualReport, CoreError> {
    Ok(ResidualReport {
        residual: poisson_bracket(hamiltonian, candidate)?,
    })
}

/// Graded decomposition K = sum_j K_{N-2j} with homogeneous parts.
#[derive(Clone, Debug)]
pub struct GradedSymmetry {
    order: usize,
    /// parts[j] is homogeneous of momentum degree N - 2j (possibly zero)
    parts: Vec<MomentumPoly>,
}

impl GradedSymmetry {
    pub fn new(order: usize, parts: Vec<MomentumPoly>) -> Result<Self, CoreError> {
        for (j, p) in parts.iter().enumerate() {
            let expected = order as i64 - 2 * j as i64;
            if expected < 0 {
                return Err(CoreError::GradingViolation(format!(
                    "too many parts for order {order}"
                )));
            }
            if !p.is_homogeneous(expected as usize) {
                return Err(CoreError::GradingViolation(format!(
                    "part {j} is not homogeneous of degree {expected}"
                )));
            }
        }
        Ok(GradedSymmetry { order, parts })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn parts(&self) -> &[MomentumPoly] {
        &self.parts
    }

    pub fn part(&self, j: usize) -> MomentumPoly {
        self.parts
            .get(j)
            .cloned()
            .unwrap_or_else(|| MomentumPoly::zero(self.parts[0].ctx()))
    }

    pub fn ctx(&self) -> &Arc<Context> {
        self.parts[0].ctx()
    }

    pub fn assemble(&self) -> MomentumPoly {
        let mut acc = MomentumPoly::zero(self.ctx());
        for p in &self.parts {
            acc = acc.add(p);
        }
        acc
    }

    /// Bidegree law of the graded transform: part j must be homogeneous of
    /// degree j in the family parameters.
    pub fn check_parameter_grading(&self, family: &[String]) -> Result<(), CoreError> {
        let ctx = self.ctx();
        let vars: Vec<usize> = family
            .iter()
            .map(|name| {
                ctx.param_var(name).ok_or_else(|| {
                    CoreError::UsageError(format!("unknown family parameter `{name}`"))
                })
            })
            .collect::<Result<_, _>>()?;
        for (j, p) in self.parts.iter().enumerate() {
            for (_, c) in p.terms.iter() {
                let (lo, hi) = c.param_degrees(&vars).ok_or_else(|| {
                    CoreError::GradingViolation(format!(
                        "part {j} has family parameters in a denominator"
                    ))
                })?;
                if !(lo == j as u64 && hi == j as u64) {
                    return Err(CoreError::GradingViolation(format!(
                        "part {j} is not homogeneous of degree {j} in the family parameters \
                         (found degrees {lo}..{hi})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Split into homogeneous parts of a single momentum-degree parity, with the
/// order inferred from the top nonzero degree.
pub fn grade_decompose(k: &MomentumPoly) -> Result<GradedSymmetry, CoreError> {
    if k.is_zero() {
        return Err(CoreError::DegenerateInput(
            "cannot grade the zero polynomial".into(),
        ));
    }
    let top = *k.momentum_degrees().last().unwrap();
    grade_decompose_as(k, top)
}

/// Split against a declared order; the top grades may vanish (a bracket of
/// graded symmetries keeps the combined order even when its leading grade
/// cancels).
pub fn grade_decompose_as(k: &MomentumPoly, order: usize) -> Result<GradedSymmetry, CoreError> {
    let degrees = k.momentum_degrees();
    if let Some(&top) = degrees.last() {
        if top > order {
            return Err(CoreError::GradingViolation(format!(
                "momentum degree {top} exceeds declared order {order}"
            )));
        }
        if degrees.iter().any(|d| (order - d) % 2 != 0) {
            return Err(CoreError::MixedParity(degrees));
        }
    }
    let mut parts = Vec::new();
    let mut j = 0usize;
    loop {
        let d = order as i64 - 2 * j as i64;
        if d < 0 {
            break;
        }
        parts.push(k.homogeneous_part(d as usize));
        j += 1;
    }
    GradedSymmetry::new(order, parts)
}

/// Metric data plus potential family.
#[derive(Clone)]
pub struct SystemDefinition {
    ctx: Arc<Context>,
    /// contravariant metric, upper triangle (i <= j), as scalars
    metric: Vec<Vec<Scalar>>,
    /// potential family V(x, b), linear in the family parameters
    potential: Scalar,
    /// family parameter names, b_0 first when a constant term is present
    family: Vec<String>,
    /// distinguished transform potential U
    transform_potential: Scalar,
}

impl SystemDefinition {
    pub fn new(
        ctx: &Arc<Context>,
        metric: Vec<Vec<Scalar>>,
        potential: Scalar,
        family: Vec<String>,
        transform_potential: Scalar,
    ) -> Result<Self, CoreError> {
        let n = ctx.coords();
        if metric.len() != n || metric.iter().any(|row| row.len() != n) {
            return Err(CoreError::DimensionMismatch(format!(
                "metric must be {n}x{n}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if metric[i][j] != metric[j][i] {
                    return Err(CoreError::DegenerateInput(
                        "metric must be symmetric".into(),
                    ));
                }
            }
        }
        for name in &family {
            if ctx.param_var(name).is_none() {
                return Err(CoreError::UsageError(format!(
                    "family parameter `{name}` not declared"
                )));
            }
        }
        Ok(SystemDefinition {
            ctx: ctx.clone(),
            metric,
            potential,
            family,
            transform_potential,
        })
    }

    /// Conformally flat 2D system: g^{ij} = delta^{ij}/lambda.
    pub fn conformal_2d(
        ctx: &Arc<Context>,
        lambda: Scalar,
        potential: Scalar,
        family: Vec<String>,
        transform_potential: Scalar,
    ) -> Result<Self, CoreError> {
        let inv = lambda.inverse()?;
        let zero = Scalar::zero(ctx);
        Self::new(
            ctx,
            vec![vec![inv.clone(), zero.clone()], vec![zero, inv]],
            potential,
            family,
            transform_potential,
        )
    }

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn metric(&self) -> &[Vec<Scalar>] {
        &self.metric
    }

    pub fn potential(&self) -> &Scalar {
        &self.potential
    }

    pub fn family(&self) -> &[String] {
        &self.family
    }

    pub fn transform_potential(&self) -> &Scalar {
        &self.transform_potential
    }

    /// Free part H_0 = sum g^{ij} p_i p_j.
    pub fn free_hamiltonian(&self) -> MomentumPoly {
        let n = self.ctx.coords();
        let mut acc = MomentumPoly::zero(&self.ctx);
        for i in 0..n {
            for j in 0..n {
                if self.metric[i][j].is_zero() {
                    continue;
                }
                let mut idx = vec![0u16; n];
                idx[i] += 1;
                idx[j] += 1;
                acc = acc.add(&MomentumPoly::term(self.metric[i][j].clone(), &idx));
            }
        }
        acc
    }

    /// H = H_0 + V.
    pub fn hamiltonian(&self) -> MomentumPoly {
        self.free_hamiltonian()
            .add(&MomentumPoly::from_scalar(self.potential.clone()))
    }

    /// V evaluated at a family parameter point.
    pub fn potential_at(&self, point: &[Scalar]) -> Result<Scalar, CoreError> {
        if point.len() != self.family.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "family point must list {} values",
                self.family.len()
            )));
        }
        let bindings: Vec<(String, Scalar)> = self
            .family
            .iter()
            .cloned()
            .zip(point.iter().cloned())
            .collect();
        self.potential.substitute(&bindings)
    }

    /// Basis member U^{(i)} multiplying the i-th family parameter.
    pub fn family_basis(&self) -> Result<Vec<Scalar>, CoreError> {
        let mut out = Vec::with_capacity(self.family.len());
        for k in 0..self.family.len() {
            let point: Vec<Scalar> = (0..self.family.len())
                .map(|j| Scalar::from_int(&self.ctx, i64::from(j == k)))
                .collect();
            let at_unit = self.potential_at(&point)?;
            let zero: Vec<Scalar> = (0..self.family.len())
                .map(|_| Scalar::zero(&self.ctx))
                .collect();
            let at_zero = self.potential_at(&zero)?;
            out.push(at_unit.sub(&at_zero));
        }
        Ok(out)
    }

    /// Checks the potential is linear in the family with independent basis
    /// members (pairwise distinct canonical forms, none zero besides b_0's 1).
    pub fn check_family_form(&self) -> Result<(), CoreError> {
        let vars: Vec<usize> = self
            .family
            .iter()
            .map(|n| self.ctx.param_var(n).unwrap())
            .collect();
        let (lo, hi) = self.potential.param_degrees(&vars).ok_or_else(|| {
            CoreError::GradingViolation("potential has family parameters in a denominator".into())
        })?;
        if hi > 1 {
            return Err(CoreError::GradingViolation(format!(
                "potential is not linear in the family parameters (degree {hi})"
            )));
        }
        let _ = lo;
        let basis = self.family_basis()?;
        for (i, a) in basis.iter().enumerate() {
            if a.is_zero() {
                return Err(CoreError::DegenerateInput(format!(
                    "family member {i} contributes nothing to the potential"
                )));
            }
            for b in basis.iter().skip(i + 1) {
                if a == b {
                    return Err(CoreError::DegenerateInput(
                        "family basis members are not pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Residuals of the graded determining equations for K against H_0 + U.
#[derive(Clone, Debug)]
pub struct DeterminingResiduals {
    /// {K_N, H_0}
    pub killing: MomentumPoly,
    /// {K_{N-2k}, U} + {K_{N-2k-2}, H_0} for k = 0..floor(N/2)-1
    pub ladder: Vec<MomentumPoly>,
    /// {K_1, U} for odd N
    pub bottom: Option<MomentumPoly>,
}

impl DeterminingResiduals {
    pub fn all_zero(&self) -> bool {
        self.killing.is_zero()
            && self.ladder.iter().all(|r| r.is_zero())
            && self.bottom.as_ref().map_or(true, |r| r.is_zero())
    }

    /// (label, residual) pairs for reporting, in ladder order.
    pub fn entries(&self) -> Vec<(String, &MomentumPoly)> {
        let mut out = vec![("killing".to_string(), &self.killing)];
        for (k, r) in self.ladder.iter().enumerate() {
            out.push((format!("ladder[{k}]"), r));
        }
        if let Some(b) = &self.bottom {
            out.push(("bottom".to_string(), b));
        }
        out
    }
}

pub fn determining_equations(
    k: &GradedSymmetry,
    free: &MomentumPoly,
    potential: &Scalar,
) -> Result<DeterminingResiduals, CoreError> {
    let u = MomentumPoly::from_scalar(potential.clone());
    let n = k.order();
    let killing = poisson_bracket(&k.part(0), free)?;
    let mut ladder = Vec::new();
    let half = n / 2;
    for j in 0..half {
        let r = poisson_bracket(&k.part(j), &u)?
            .add(&poisson_bracket(&k.part(j + 1), free)?);
        ladder.push(r);
    }
    let bottom = if n % 2 == 1 {
        Some(poisson_bracket(&k.part(half), &u)?)
    } else {
        None
    };
    Ok(DeterminingResiduals { killing, ladder, bottom })
}
