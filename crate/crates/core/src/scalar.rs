//! Exact coefficient field: rational functions of the coordinates (with
//! half-integer powers) and the parameter symbols, over the rationals.
//!
//! A value is a reduced fraction over sparse polynomials in the surd
//! variables `t_i` (with `x_i = t_i^2`) and the parameters. The denominator
//! is held in factored form: a monomial times powers of primitive factors.
//! The factored shape never changes the mathematical value; it keeps the
//! arithmetic that dominates this engine (denominators that are powers of a
//! few fixed polynomials) free of large expansions and gcd calls. The
//! canonical form used for printing and the `normalize` contract expands the
//! denominator and scales it monic, so canonical forms are unique.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::context::Context;
use crate::error::CoreError;
use crate::gcd::{poly_gcd, poly_lcm};
use crate::poly::{Mono, Poly};

#[derive(Clone)]
pub struct Scalar {
    ctx: Arc<Context>,
    num: Poly,
    /// monomial part of the denominator (exponent per variable)
    den_mono: Mono,
    /// non-monomial denominator factors: primitive, positive leading
    /// coefficient, no monomial content, sorted; exponents >= 1
    den: Vec<(Poly, u32)>,
}

impl Scalar {
    // ---- constructors -------------------------------------------------

    pub fn zero(ctx: &Arc<Context>) -> Self {
        Scalar {
            ctx: ctx.clone(),
            num: Poly::zero(ctx.nvars()),
            den_mono: vec![0; ctx.nvars()],
            den: Vec::new(),
        }
    }

    pub fn one(ctx: &Arc<Context>) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &Arc<Context>, n: i64) -> Self {
        Scalar {
            ctx: ctx.clone(),
            num: Poly::from_int(ctx.nvars(), n),
            den_mono: vec![0; ctx.nvars()],
            den: Vec::new(),
        }
    }

    pub fn from_rational(ctx: &Arc<Context>, r: BigRational) -> Self {
        Scalar {
            ctx: ctx.clone(),
            num: Poly::constant(ctx.nvars(), r),
            den_mono: vec![0; ctx.nvars()],
            den: Vec::new(),
        }
    }

    pub fn rational(ctx: &Arc<Context>, num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::from_rational(ctx, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// x_i (1-based coordinate index).
    pub fn coord(ctx: &Arc<Context>, i: usize) -> Result<Self, CoreError> {
        Self::coord_half_pow(ctx, i, 2)
    }

    /// sqrt(x_i).
    pub fn sqrt_coord(ctx: &Arc<Context>, i: usize) -> Result<Self, CoreError> {
        Self::coord_half_pow(ctx, i, 1)
    }

    /// x_i^(half_steps/2); negative exponents allowed.
    pub fn coord_half_pow(
        ctx: &Arc<Context>,
        i: usize,
        half_steps: i32,
    ) -> Result<Self, CoreError> {
        let var = ctx.coord_var(i)?;
        let nvars = ctx.nvars();
        let e = half_steps.unsigned_abs() as u16;
        let mut s = Scalar::one(ctx);
        if half_steps >= 0 {
            s.num = Poly::var_pow(nvars, var, e);
        } else {
            s.den_mono[var] = e;
        }
        Ok(s)
    }

    pub fn param(ctx: &Arc<Context>, name: &str) -> Result<Self, CoreError> {
        let var = ctx
            .param_var(name)
            .ok_or_else(|| CoreError::UsageError(format!("unknown parameter `{name}`")))?;
        let mut s = Scalar::one(ctx);
        s.num = Poly::var_pow(ctx.nvars(), var, 1);
        Ok(s)
    }

    pub fn from_num_den(ctx: &Arc<Context>, num: Poly, den: Poly) -> Result<Self, CoreError> {
        if den.is_zero() {
            return Err(CoreError::DegenerateInput("zero denominator".into()));
        }
        let mut s = Scalar {
            ctx: ctx.clone(),
            num,
            den_mono: vec![0; ctx.nvars()],
            den: Vec::new(),
        };
        s.push_den_factor(den, 1);
        s.reduce();
        Ok(s)
    }

    // ---- denominator bookkeeping --------------------------------------

    /// Install `f^exp` into the denominator, splitting off monomial and
    /// rational content. `f` must be nonzero.
    fn push_den_factor(&mut self, f: Poly, exp: u32) {
        debug_assert!(!f.is_zero());
        if exp == 0 || f.is_one() {
            return;
        }
        if let Some(c) = f.constant_value() {
            let inv = BigRational::one() / c.clone();
            let mut scale = BigRational::one();
            for _ in 0..exp {
                scale = &scale * &inv;
            }
            self.num = self.num.scale(&scale);
            return;
        }
        let mono = f.mono_content();
        let f = if mono.iter().any(|&e| e > 0) {
            for (slot, &e) in self.den_mono.iter_mut().zip(mono.iter()) {
                *slot += e * exp as u16;
            }
            f.div_exact(&Poly::monomial(f.nvars(), mono, BigRational::one()))
                .expect("monomial content divides")
        } else {
            f
        };
        if f.is_constant() {
            let c = f.constant_value().cloned().unwrap_or_else(BigRational::one);
            let inv = BigRational::one() / c;
            let mut scale = BigRational::one();
            for _ in 0..exp {
                scale = &scale * &inv;
            }
            self.num = self.num.scale(&scale);
            return;
        }
        let content = f.rational_content();
        let prim = f.primitive();
        if !content.is_one() {
            let inv = BigRational::one() / content;
            let mut scale = BigRational::one();
            for _ in 0..exp {
                scale = &scale * &inv;
            }
            self.num = self.num.scale(&scale);
        }
        for entry in &mut self.den {
            if entry.0 == prim {
                entry.1 += exp;
                return;
            }
        }
        self.den.push((prim, exp));
        self.den.sort();
    }

    /// Fully reduce the fraction: cancel the monomial part and every
    /// denominator factor against the numerator (including partial
    /// cancellations through gcd when a factor is composite).
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den_mono = vec![0; self.ctx.nvars()];
            self.den.clear();
            return;
        }
        // monomial part
        if self.den_mono.iter().any(|&e| e > 0) {
            let num_mono = self.num.mono_content();
            let mut shift = vec![0u16; self.ctx.nvars()];
            let mut changed = false;
            for ((s, d), n) in shift
                .iter_mut()
                .zip(self.den_mono.iter_mut())
                .zip(num_mono.iter())
            {
                let k = (*d).min(*n);
                if k > 0 {
                    *s = k;
                    *d -= k;
                    changed = true;
                }
            }
            if changed {
                self.num = self
                    .num
                    .div_exact(&Poly::monomial(
                        self.ctx.nvars(),
                        shift,
                        BigRational::one(),
                    ))
                    .expect("monomial content divides");
            }
        }
        // polynomial factors
        let mut queue: Vec<(Poly, u32)> = std::mem::take(&mut self.den);
        let mut settled: Vec<(Poly, u32)> = Vec::new();
        while let Some((f, mut e)) = queue.pop() {
            loop {
                if e == 0 {
                    break;
                }
                if crate::gcd::divisibility_probe(&self.num, &f) {
                    if let Some(q) = self.num.div_exact(&f) {
                        self.num = q;
                        e -= 1;
                        continue;
                    }
                }
                let g = poly_gcd(&self.num, &f);
                if g.is_one() {
                    settled.push((f, e));
                    break;
                }
                // composite factor shares only part of itself
                self.num = self.num.div_exact(&g).expect("gcd divides");
                let rest = f.div_exact(&g).expect("gcd divides");
                if e > 1 {
                    queue.push((g.clone(), e - 1));
                }
                queue.push((rest, e));
                break;
            }
        }
        // merge equal factors that may have reappeared after gcd splits
        self.den.clear();
        for (f, e) in settled {
            if let Some(c) = f.constant_value() {
                let mut scale = BigRational::one();
                let inv = BigRational::one() / c.clone();
                for _ in 0..e {
                    scale = &scale * &inv;
                }
                self.num = self.num.scale(&scale);
                continue;
            }
            let content = f.rational_content();
            let prim = f.primitive();
            if !content.is_one() {
                let mut scale = BigRational::one();
                let inv = BigRational::one() / content;
                for _ in 0..e {
                    scale = &scale * &inv;
                }
                self.num = self.num.scale(&scale);
            }
            match self.den.iter_mut().find(|(g, _)| *g == prim) {
                Some(entry) => entry.1 += e,
                None => self.den.push((prim, e)),
            }
        }
        self.den.sort();
    }

    fn den_is_one(&self) -> bool {
        self.den.is_empty() && self.den_mono.iter().all(|&e| e == 0)
    }

    /// Expanded denominator polynomial.
    pub fn den_expanded(&self) -> Poly {
        let mut acc = Poly::monomial(
            self.ctx.nvars(),
            self.den_mono.clone(),
            BigRational::one(),
        );
        for (f, e) in &self.den {
            acc = acc.mul(&f.pow(*e));
        }
        acc
    }

    /// Canonical pair (numerator, monic expanded denominator).
    pub fn canonical_pair(&self) -> (Poly, Poly) {
        let den = self.den_expanded();
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            (self.num.clone(), den)
        } else {
            let inv = BigRational::one() / lc;
            (self.num.scale(&inv), den.scale(&inv))
        }
    }

    // ---- accessors -----------------------------------------------------

    pub fn ctx(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den_is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den_is_one() && self.num.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den_is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.den_is_one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        self.num.constant_value().cloned()
    }

    fn assert_ctx(&self, other: &Scalar) {
        assert!(
            Context::same(&self.ctx, &other.ctx),
            "scalar context mismatch"
        );
    }

    // ---- arithmetic ----------------------------------------------------

    pub fn neg(&self) -> Scalar {
        Scalar {
            ctx: self.ctx.clone(),
            num: self.num.neg(),
            den_mono: self.den_mono.clone(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_ctx(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den_mono == other.den_mono && self.den == other.den {
            let mut out = Scalar {
                ctx: self.ctx.clone(),
                num: self.num.add(&other.num),
                den_mono: self.den_mono.clone(),
                den: self.den.clone(),
            };
            out.reduce();
            return out;
        }
        // denominator lcm, factor-wise
        let mono_lcm: Mono = self
            .den_mono
            .iter()
            .zip(other.den_mono.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        let mut factors: Vec<(Poly, u32)> = self.den.clone();
        for (f, e) in &other.den {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 = entry.1.max(*e),
                None => factors.push((f.clone(), *e)),
            }
        }
        factors.sort();
        let scale_for = |s: &Scalar| -> Poly {
            let mono: Mono = mono_lcm
                .iter()
                .zip(s.den_mono.iter())
                .map(|(l, e)| l - e)
                .collect();
            let mut acc = Poly::monomial(s.ctx.nvars(), mono, BigRational::one());
            for (f, e) in &factors {
                let have = s
                    .den
                    .iter()
                    .find(|(g, _)| g == f)
                    .map(|(_, k)| *k)
                    .unwrap_or(0);
                if *e > have {
                    acc = acc.mul(&f.pow(e - have));
                }
            }
            acc
        };
        let num = self
            .num
            .mul(&scale_for(self))
            .add(&other.num.mul(&scale_for(other)));
        let mut out = Scalar {
            ctx: self.ctx.clone(),
            num,
            den_mono: mono_lcm,
            den: factors,
        };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_ctx(other);
        if self.is_zero() || other.is_zero() {
            return Scalar::zero(&self.ctx);
        }
        let mut out = Scalar {
            ctx: self.ctx.clone(),
            num: self.num.mul(&other.num),
            den_mono: self
                .den_mono
                .iter()
                .zip(other.den_mono.iter())
                .map(|(a, b)| a + b)
                .collect(),
            den: self.den.clone(),
        };
        for (f, e) in &other.den {
            match out.den.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 += e,
                None => out.den.push((f.clone(), *e)),
            }
        }
        out.den.sort();
        out.reduce();
        out
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, CoreError> {
        if other.is_zero() {
            return Err(CoreError::DegenerateInput("division by zero".into()));
        }
        Ok(self.mul(&other.flipped()))
    }

    fn flipped(&self) -> Scalar {
        // 1/(n / mono*factors) = mono*factors / n
        let mut out = Scalar {
            ctx: self.ctx.clone(),
            num: Poly::monomial(
                self.ctx.nvars(),
                self.den_mono.clone(),
                BigRational::one(),
            ),
            den_mono: vec![0; self.ctx.nvars()],
            den: Vec::new(),
        };
        for (f, e) in &self.den {
            out.num = out.num.mul(&f.pow(*e));
        }
        out.push_den_factor(self.num.clone(), 1);
        out.reduce();
        out
    }

    pub fn inverse(&self) -> Result<Scalar, CoreError> {
        if self.is_zero() {
            return Err(CoreError::DegenerateInput("inverse of zero".into()));
        }
        Ok(self.flipped())
    }

    pub fn pow(&self, exp: i32) -> Result<Scalar, CoreError> {
        if exp == 0 {
            return Ok(Scalar::one(&self.ctx));
        }
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let e = exp.unsigned_abs();
        let mut out = Scalar {
            ctx: self.ctx.clone(),
            num: base.num.pow(e),
            den_mono: base
                .den_mono
                .iter()
                .map(|&m| m * e as u16)
                .collect(),
            den: base.den.iter().map(|(f, k)| (f.clone(), k * e)).collect(),
        };
        out.reduce();
        Ok(out)
    }

    pub fn scale_rational(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(&self.ctx);
        }
        Scalar {
            ctx: self.ctx.clone(),
            num: self.num.scale(c),
            den_mono: self.den_mono.clone(),
            den: self.den.clone(),
        }
    }

    // ---- calculus ------------------------------------------------------

    /// Exact partial derivative with respect to coordinate x_i (1-based),
    /// computed through d/dx_i = (2 t_i)^{-1} d/dt_i on the surd variables.
    pub fn differentiate(&self, i: usize) -> Result<Scalar, CoreError> {
        let var = self.ctx.coord_var(i)?;
        if self.is_zero() {
            return Ok(Scalar::zero(&self.ctx));
        }
        // d(n / m*prod f^e) over the common denominator m*prod f^(e+1):
        //   n' * prod f  -  n * [ m'/m * prod f  +  sum e_i f_i' prod_{j != i} f_j ]
        // with the monomial part handled by exponent shifts.
        let nvars = self.ctx.nvars();
        let prod_all = |skip: Option<usize>| -> Poly {
            let mut acc = Poly::one(nvars);
            for (k, (f, _)) in self.den.iter().enumerate() {
                if Some(k) == skip {
                    continue;
                }
                acc = acc.mul(f);
            }
            acc
        };
        let full = prod_all(None);
        let mut num = self.num.derivative_var(var).mul(&full);
        // monomial part: m = t^d contributes n * d / t
        let dmono = self.den_mono[var];
        if dmono > 0 {
            // subtract n * d * full / t ... multiply whole expression by t later
            // handled by writing terms over t^(d+1): here track separately
            num = num.mul(&Poly::var_pow(nvars, var, 1));
            let corr = self
                .num
                .mul(&full)
                .scale(&BigRational::from_integer(BigInt::from(dmono)));
            num = num.sub(&corr);
        }
        for (k, (f, e)) in self.den.iter().enumerate() {
            let fd = f.derivative_var(var);
            if fd.is_zero() {
                continue;
            }
            let mut corr = self
                .num
                .mul(&fd)
                .mul(&prod_all(Some(k)))
                .scale(&BigRational::from_integer(BigInt::from(*e)));
            if dmono > 0 {
                corr = corr.mul(&Poly::var_pow(nvars, var, 1));
            }
            num = num.sub(&corr);
        }
        if num.is_zero() {
            return Ok(Scalar::zero(&self.ctx));
        }
        let mut out = Scalar {
            ctx: self.ctx.clone(),
            num,
            den_mono: {
                let mut m = self.den_mono.clone();
                // d/dx = (1/2t) d/dt; with a t^d monomial in the denominator
                // the numerator terms were multiplied by t, so two extra
                // powers land downstairs, otherwise one
                m[var] += if dmono > 0 { 2 } else { 1 };
                m
            },
            den: self
                .den
                .iter()
                .map(|(f, e)| (f.clone(), e + 1))
                .collect(),
        };
        out.num = out.num.scale(&BigRational::new(BigInt::from(1), BigInt::from(2)));
        out.reduce();
        Ok(out)
    }

    pub fn depends_on_coord(&self, i: usize) -> bool {
        match self.ctx.coord_var(i) {
            Ok(var) => self.depends_on_var(var),
            Err(_) => false,
        }
    }

    pub fn depends_on_var(&self, var: usize) -> bool {
        self.num.depends_on(var)
            || self.den_mono[var] > 0
            || self.den.iter().any(|(f, _)| f.depends_on(var))
    }

    // ---- substitution and expansion -------------------------------------

    /// Simultaneous substitution of parameter symbols by scalars.
    pub fn substitute(&self, bindings: &[(String, Scalar)]) -> Result<Scalar, CoreError> {
        let nvars = self.ctx.nvars();
        let mut images: Vec<Option<Scalar>> = vec![None; nvars];
        for (name, value) in bindings {
            let var = self.ctx.param_var(name).ok_or_else(|| {
                if name_coord_index(name)
                    .map(|i| i >= 1 && i <= self.ctx.coords())
                    .unwrap_or(false)
                {
                    CoreError::UsageError(format!("cannot substitute coordinate symbol `{name}`"))
                } else {
                    CoreError::UsageError(format!("unknown parameter `{name}`"))
                }
            })?;
            value.assert_ctx(self);
            images[var] = Some(value.clone());
        }
        if images
            .iter()
            .enumerate()
            .all(|(v, img)| img.is_none() || !self.depends_on_var(v))
        {
            return Ok(self.clone());
        }
        let num = substitute_poly(&self.ctx, &self.num, &images)?;
        let mut den = Scalar::one(&self.ctx);
        let mono = Poly::monomial(nvars, self.den_mono.clone(), BigRational::one());
        den = den.mul(&substitute_poly(&self.ctx, &mono, &images)?);
        for (f, e) in &self.den {
            let img = substitute_poly(&self.ctx, f, &images)?;
            if img.is_zero() {
                return Err(CoreError::DegenerateInput(
                    "substitution produced a zero denominator".into(),
                ));
            }
            den = den.mul(&img.pow(*e as i32)?);
        }
        if den.is_zero() {
            return Err(CoreError::DegenerateInput(
                "substitution produced a zero denominator".into(),
            ));
        }
        num.div(&den)
    }

    /// Laurent expansion in one parameter: map from exponent to coefficient.
    /// The denominator may contain the parameter only as a monomial factor.
    pub fn laurent_in_param(&self, name: &str) -> Result<BTreeMap<i32, Scalar>, CoreError> {
        let var = self
            .ctx
            .param_var(name)
            .ok_or_else(|| CoreError::UsageError(format!("unknown parameter `{name}`")))?;
        if self.den.iter().any(|(f, _)| f.depends_on(var)) {
            return Err(CoreError::UsageError(format!(
                "denominator depends on `{name}` beyond a monomial factor"
            )));
        }
        let den_pow = self.den_mono[var];
        let mut out: BTreeMap<i32, Scalar> = BTreeMap::new();
        for e in 0..=self.num.degree_in(var) {
            let c = self.num.coeff_of_var_power(var, e);
            if c.is_zero() {
                continue;
            }
            let mut s = Scalar {
                ctx: self.ctx.clone(),
                num: c,
                den_mono: {
                    let mut m = self.den_mono.clone();
                    m[var] = 0;
                    m
                },
                den: self.den.clone(),
            };
            s.reduce();
            out.insert(e as i32 - den_pow as i32, s);
        }
        Ok(out)
    }

    /// Total degree range in the given parameter variables, numerator side;
    /// `None` when the denominator depends on any of them.
    pub fn param_degrees(&self, vars: &[usize]) -> Option<(u64, u64)> {
        if vars
            .iter()
            .any(|&v| self.den_mono[v] > 0 || self.den.iter().any(|(f, _)| f.depends_on(v)))
        {
            return None;
        }
        if self.num.is_zero() {
            return Some((0, 0));
        }
        let mut lo = u64::MAX;
        let mut hi = 0u64;
        for (m, _) in self.num.terms() {
            let d: u64 = vars.iter().map(|&v| m[v] as u64).sum();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        Some((lo, hi))
    }

    /// Lift into an extended context (same coordinates, superset of params).
    pub fn lift(&self, target: &Arc<Context>) -> Result<Scalar, CoreError> {
        let map = var_map(&self.ctx, target)?;
        Ok(Scalar {
            ctx: target.clone(),
            num: remap_poly(&self.num, target.nvars(), &map),
            den_mono: remap_mono(&self.den_mono, target.nvars(), &map),
            den: self
                .den
                .iter()
                .map(|(f, e)| (remap_poly(f, target.nvars(), &map), *e))
                .collect(),
        })
    }

    /// Project onto a smaller context; fails if the value depends on a
    /// parameter absent from the target.
    pub fn project(&self, target: &Arc<Context>) -> Result<Scalar, CoreError> {
        if target.coords() != self.ctx.coords() {
            return Err(CoreError::DimensionMismatch(
                "cannot project between different coordinate dimensions".into(),
            ));
        }
        let mut map = vec![usize::MAX; self.ctx.nvars()];
        for v in 0..self.ctx.nvars() {
            if self.ctx.is_coord_var(v) {
                map[v] = v;
            } else if let Some(tv) = target.param_var(self.ctx.param_name(v).unwrap()) {
                map[v] = tv;
            } else if self.depends_on_var(v) {
                return Err(CoreError::UsageError(format!(
                    "value depends on `{}` which is absent from the target context",
                    self.ctx.param_name(v).unwrap()
                )));
            } else {
                map[v] = 0; // unused slot
            }
        }
        Ok(Scalar {
            ctx: target.clone(),
            num: remap_poly(&self.num, target.nvars(), &map),
            den_mono: remap_mono(&self.den_mono, target.nvars(), &map),
            den: self
                .den
                .iter()
                .map(|(f, e)| (remap_poly(f, target.nvars(), &map), *e))
                .collect(),
        })
    }

    // ---- evaluation ------------------------------------------------------

    /// Raw evaluation given one value per internal variable (surds first).
    pub fn eval_vars(&self, vars: &[f64]) -> Result<f64, CoreError> {
        let mut d = 1.0;
        for (v, &e) in self.den_mono.iter().enumerate() {
            if e > 0 {
                d *= vars[v].powi(e as i32);
            }
        }
        for (f, e) in &self.den {
            d *= f.eval_f64(vars).powi(*e as i32);
        }
        if d.abs() < 1e-12 {
            return Err(CoreError::SingularPoint(format!(
                "denominator magnitude {d:.3e} below guard"
            )));
        }
        Ok(self.num.eval_f64(vars) / d)
    }

    pub fn common_denominator(values: &[&Scalar]) -> Poly {
        let mut acc = match values.first() {
            Some(s) => Poly::one(s.ctx.nvars()),
            None => return Poly::one(0),
        };
        for s in values {
            acc = poly_lcm(&acc, &s.den_expanded());
        }
        acc
    }

    /// numerator of self when written over the given common denominator
    pub fn with_denominator(&self, den: &Poly) -> Option<Poly> {
        let q = den.div_exact(&self.den_expanded())?;
        Some(self.num.mul(&q))
    }
}

/// Balanced pairwise sum; keeps intermediate fractions small when adding
/// many values that share denominator structure.
pub fn tree_sum(ctx: &Arc<Context>, mut items: Vec<Scalar>) -> Scalar {
    if items.is_empty() {
        return Scalar::zero(ctx);
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len() / 2 + 1);
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b)),
                None => next.push(a),
            }
        }
        items = next;
    }
    items.pop().unwrap()
}

fn substitute_poly(
    ctx: &Arc<Context>,
    p: &Poly,
    images: &[Option<Scalar>],
) -> Result<Scalar, CoreError> {
    let nvars = ctx.nvars();
    let mut cache: BTreeMap<(usize, u16), Scalar> = BTreeMap::new();
    let mut acc = Scalar::zero(ctx);
    for (m, c) in p.terms() {
        let mut plain = vec![0u16; nvars];
        let mut factor = Scalar::from_rational(ctx, c.clone());
        for (var, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match &images[var] {
                None => plain[var] = e,
                Some(img) => {
                    let powed = match cache.get(&(var, e)) {
                        Some(s) => s.clone(),
                        None => {
                            let s = img.pow(e as i32)?;
                            cache.insert((var, e), s.clone());
                            s
                        }
                    };
                    factor = factor.mul(&powed);
                }
            }
        }
        if plain.iter().any(|&e| e > 0) {
            let mono = Scalar {
                ctx: ctx.clone(),
                num: Poly::monomial(nvars, plain, BigRational::one()),
                den_mono: vec![0; nvars],
                den: Vec::new(),
            };
            factor = factor.mul(&mono);
        }
        acc = acc.add(&factor);
    }
    Ok(acc)
}

fn var_map(from: &Arc<Context>, to: &Arc<Context>) -> Result<Vec<usize>, CoreError> {
    if to.coords() != from.coords() {
        return Err(CoreError::DimensionMismatch(
            "cannot lift between different coordinate dimensions".into(),
        ));
    }
    (0..from.nvars())
        .map(|v| {
            if from.is_coord_var(v) {
                Ok(v)
            } else {
                to.param_var(from.param_name(v).unwrap()).ok_or_else(|| {
                    CoreError::UsageError("target context is missing a parameter".into())
                })
            }
        })
        .collect()
}

fn remap_poly(p: &Poly, target_nvars: usize, map: &[usize]) -> Poly {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut m2 = vec![0u16; target_nvars];
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    m2[map[v]] = e;
                }
            }
            (m2, c.clone())
        })
        .collect();
    Poly::from_terms(target_nvars, terms)
}

fn remap_mono(m: &Mono, target_nvars: usize, map: &[usize]) -> Mono {
    let mut m2 = vec![0u16; target_nvars];
    for (v, &e) in m.iter().enumerate() {
        if e > 0 {
            m2[map[v]] = e;
        }
    }
    m2
}

fn name_coord_index(name: &str) -> Option<usize> {
    name.strip_prefix('x')?.parse().ok()
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if !Context::same(&self.ctx, &other.ctx) {
            return false;
        }
        if self.num == other.num && self.den_mono == other.den_mono && self.den == other.den {
            return true;
        }
        if self.num.is_zero() || other.num.is_zero() {
            return self.num.is_zero() && other.num.is_zero();
        }
        // cross-multiplication keeps equality exact irrespective of the
        // factored shape of the two denominators
        self.num.mul(&other.den_expanded()) == other.num.mul(&self.den_expanded())
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den_is_one() {
            write!(f, "{}", PolyDisplay { p: &self.num, ctx: &self.ctx })
        } else {
            let (num, den) = self.canonical_pair();
            write!(
                f,
                "({})/({})",
                PolyDisplay { p: &num, ctx: &self.ctx },
                PolyDisplay { p: &den, ctx: &self.ctx }
            )
        }
    }
}

pub(crate) struct PolyDisplay<'a> {
    pub p: &'a Poly,
    pub ctx: &'a Arc<Context>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.p.terms().iter().enumerate() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || mono.iter().all(|&e| e == 0) {
                if abs.denom().is_one() {
                    factors.push(format!("{}", abs.numer()));
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (var, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if self.ctx.is_coord_var(var) {
                    let name = format!("x{}", var + 1);
                    if e == 1 {
                        factors.push(format!("sqrt({name})"));
                    } else if e == 2 {
                        factors.push(name);
                    } else if e % 2 == 0 {
                        factors.push(format!("{name}^{}", e / 2));
                    } else {
                        factors.push(format!("{name}^({e}/2)"));
                    }
                } else {
                    let name = self.ctx.param_name(var).unwrap();
                    if e == 1 {
                        factors.push(name.to_string());
                    } else {
                        factors.push(format!("{name}^{e}"));
                    }
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl std::ops::Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        Scalar::div(self, rhs).expect("nonzero divisor")
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<Context> {
        Context::new(2, &["b1", "b2"])
    }

    #[test]
    fn factor_cancellation_normalizes() {
        // (x1^2 - x2^2)/(x1 - x2) -> x1 + x2
        let ctx = ctx2();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let num = x1.mul(&x1).sub(&x2.mul(&x2));
        let den = x1.sub(&x2);
        let s = num.div(&den).unwrap();
        assert_eq!(s, x1.add(&x2));
        assert!(s.is_polynomial());
    }

    #[test]
    fn surd_squares_collapse() {
        // b1*sqrt(x1)*sqrt(x1)/x1 -> b1
        let ctx = ctx2();
        let b1 = Scalar::param(&ctx, "b1").unwrap();
        let s1 = Scalar::sqrt_coord(&ctx, 1).unwrap();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let v = b1.mul(&s1).mul(&s1).div(&x1).unwrap();
        assert_eq!(v, b1);
    }

    #[test]
    fn additive_inverse_is_zero() {
        let ctx = ctx2();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let num = x1.pow(2).unwrap().add(&x2.pow(2).unwrap());
        let den = x1.pow(2).unwrap().sub(&x2.pow(2).unwrap()).pow(2).unwrap();
        let s = num.div(&den).unwrap();
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn derivative_power_rule() {
        let ctx = ctx2();
        // d/dx1 (b1 sqrt(x1)) = b1/(2 sqrt(x1))
        let b1 = Scalar::param(&ctx, "b1").unwrap();
        let s = b1.mul(&Scalar::sqrt_coord(&ctx, 1).unwrap());
        let d = s.differentiate(1).unwrap();
        let expected = b1
            .div(
                &Scalar::sqrt_coord(&ctx, 1)
                    .unwrap()
                    .scale_rational(&BigRational::from_integer(BigInt::from(2))),
            )
            .unwrap();
        assert_eq!(d, expected);

        // d/dx2 (x2^-2) = -2 x2^-3
        let v = Scalar::coord_half_pow(&ctx, 2, -4).unwrap();
        let d2 = v.differentiate(2).unwrap();
        let expected2 = Scalar::coord_half_pow(&ctx, 2, -6)
            .unwrap()
            .scale_rational(&BigRational::from_integer(BigInt::from(-2)));
        assert_eq!(d2, expected2);
    }

    #[test]
    fn derivative_of_factored_fraction() {
        // d/dx1 [(x1^2+x2^2)/(x1^2-x2^2)^2] checked against the hand result
        let ctx = ctx2();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let num = &(&x1 * &x1) + &(&x2 * &x2);
        let dpoly = &(&x1 * &x1) - &(&x2 * &x2);
        let s = &num / &(&dpoly * &dpoly);
        let d = s.differentiate(1).unwrap();
        // = [2x1 (x1^2-x2^2) - 4x1 (x1^2+x2^2)]/(x1^2-x2^2)^3
        let two_x1 = x1.scale_rational(&BigRational::from_integer(BigInt::from(2)));
        let four_x1 = x1.scale_rational(&BigRational::from_integer(BigInt::from(4)));
        let expected = &(&(&two_x1 * &dpoly) - &(&four_x1 * &num))
            / &dpoly.pow(3).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn mixed_partials_commute() {
        let ctx = ctx2();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let x2 = Scalar::coord(&ctx, 2).unwrap();
        let s = x1
            .pow(2)
            .unwrap()
            .add(&x2.pow(2).unwrap())
            .div(&x1.pow(2).unwrap().sub(&x2.pow(2).unwrap()).pow(2).unwrap())
            .unwrap();
        let d12 = s.differentiate(1).unwrap().differentiate(2).unwrap();
        let d21 = s.differentiate(2).unwrap().differentiate(1).unwrap();
        assert_eq!(d12, d21);
    }

    #[test]
    fn substitution() {
        let ctx = ctx2();
        let b1 = Scalar::param(&ctx, "b1").unwrap();
        let s1 = Scalar::sqrt_coord(&ctx, 1).unwrap();
        let expr = b1.mul(&s1);
        let two = Scalar::from_int(&ctx, 2);
        let out = expr.substitute(&[("b1".to_string(), two.clone())]).unwrap();
        assert_eq!(
            out,
            s1.scale_rational(&BigRational::from_integer(BigInt::from(2)))
        );
        assert!(expr.substitute(&[("x1".to_string(), two)]).is_err());
    }

    #[test]
    fn laurent_extraction() {
        let ctx = Context::new(1, &["a", "b"]);
        // (a^2 x1 + b)/a -> {-1: b, 1: x1}
        let a = Scalar::param(&ctx, "a").unwrap();
        let b = Scalar::param(&ctx, "b").unwrap();
        let x1 = Scalar::coord(&ctx, 1).unwrap();
        let v = a.pow(2).unwrap().mul(&x1).add(&b).div(&a).unwrap();
        let parts = v.laurent_in_param("a").unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&1], x1);
        assert_eq!(parts[&-1], b);
    }

    #[test]
    fn display_roundtrippable_shape() {
        let ctx = ctx2();
        let b1 = Scalar::param(&ctx, "b1").unwrap();
        let s = b1
            .mul(&Scalar::coord_half_pow(&ctx, 1, 3).unwrap())
            .scale_rational(&BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(format!("{s}"), "3/2*x1^(3/2)*b1");
    }

    #[test]
    fn canonical_pair_is_monic() {
        let ctx = ctx2();
        let b2 = Scalar::param(&ctx, "b2").unwrap();
        // (3 b1^2)/(4 b2): canonical denominator is b2 with the 4 in the numerator
        let b1 = Scalar::param(&ctx, "b1").unwrap();
        let v = &(&Scalar::from_int(&ctx, 3) * &(&b1 * &b1))
            / &(&Scalar::from_int(&ctx, 4) * &b2);
        let (num, den) = v.canonical_pair();
        assert!(den.leading().unwrap().1.is_one());
        assert_eq!(format!("{}", PolyDisplay { p: &num, ctx: &ctx }), "3/4*b1^2");
    }
}
