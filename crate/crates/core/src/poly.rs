//! Sparse multivariate polynomials over exact rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order over the
//! context's variable sequence (surd variables first, then parameters).
//! The zero polynomial has no terms; no zero coefficient is ever stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Mono = Vec<u16>;

/// Graded lexicographic comparison; earlier variables dominate ties.
pub fn cmp_mono(a: &[u16], b: &[u16]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for (x, y) in a.iter().zip(b.iter()) {
                match x.cmp(y) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        }
        other => other,
    }
}

pub fn mono_mul(a: &[u16], b: &[u16]) -> Mono {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

pub fn mono_div(a: &[u16], b: &[u16]) -> Option<Mono> {
    let mut out = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return None;
        }
        out.push(x - y);
    }
    Some(out)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    /// (monomial, coefficient), sorted descending by `cmp_mono`, coefficients nonzero.
    terms: Vec<(Mono, BigRational)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(nvars);
        }
        Poly { nvars, terms: vec![(vec![0; nvars], c)] }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// Single variable raised to a power.
    pub fn var_pow(nvars: usize, var: usize, exp: u16) -> Self {
        assert!(var < nvars);
        if exp == 0 {
            return Self::one(nvars);
        }
        let mut m = vec![0u16; nvars];
        m[var] = exp;
        Poly { nvars, terms: vec![(m, BigRational::one())] }
    }

    pub fn monomial(nvars: usize, mono: Mono, coeff: BigRational) -> Self {
        assert_eq!(mono.len(), nvars);
        if coeff.is_zero() {
            return Self::zero(nvars);
        }
        Poly { nvars, terms: vec![(mono, coeff)] }
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Mono, BigRational)>) -> Self {
        let mut map: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            let entry = map.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        Self::collect(nvars, map)
    }

    fn collect(nvars: usize, map: BTreeMap<Mono, BigRational>) -> Self {
        let mut terms: Vec<(Mono, BigRational)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| cmp_mono(&b.0, &a.0));
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Mono, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].1.is_one()
            && self.terms[0].0.iter().all(|&e| e == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<&BigRational> {
        if self.is_zero() {
            return None;
        }
        if self.is_constant() {
            Some(&self.terms[0].1)
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|(m, _)| m.iter().map(|&e| e as u64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[var] > 0)
    }

    pub fn vars_present(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for v in 0..self.nvars {
            if self.depends_on(v) {
                out.push(v);
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Poly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> Poly {
        self.map_coeffs(|c| -c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out: Vec<(Mono, BigRational)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match cmp_mono(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { nvars: self.nvars, terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if let Some(p) = self.mul_packed(other) {
            return p;
        }
        let mut map: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                let c = ca * cb;
                let entry = map.entry(m).or_insert_with(BigRational::zero);
                *entry += c;
            }
        }
        Self::collect(self.nvars, map)
    }

    /// Multiplication over u128-packed monomials (graded-lex order becomes
    /// integer order); bails out when exponents do not fit the packing.
    fn mul_packed(&self, other: &Poly) -> Option<Poly> {
        let pa = pack_poly(self)?;
        let pb = pack_poly(other)?;
        let mut prods: Vec<(u128, BigRational)> =
            Vec::with_capacity(pa.len() * pb.len());
        for (ka, ca) in &pa {
            for (kb, cb) in &pb {
                prods.push((ka + kb, ca * cb));
            }
        }
        prods.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        let mut terms: Vec<(Mono, BigRational)> = Vec::new();
        let mut it = prods.into_iter();
        let (mut key, mut acc) = it.next().expect("nonzero operands");
        for (k, c) in it {
            if k == key {
                acc += c;
            } else {
                if !acc.is_zero() {
                    terms.push((unpack_mono(key, self.nvars), acc));
                }
                key = k;
                acc = c;
            }
        }
        if !acc.is_zero() {
            terms.push((unpack_mono(key, self.nvars), acc));
        }
        Some(Poly { nvars: self.nvars, terms })
    }

    pub fn mul_term(&self, mono: &[u16], coeff: &BigRational) -> Poly {
        if coeff.is_zero() {
            return Poly::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (mono_mul(m, mono), c * coeff))
            .collect();
        // multiplying every monomial by a fixed monomial preserves the order
        Poly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, coeff: &BigRational) -> Poly {
        if coeff.is_zero() {
            return Poly::zero(self.nvars);
        }
        self.map_coeffs(|c| c * coeff)
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn div_exact(&self, div: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, div.nvars);
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.nvars));
        }
        if div.is_one() {
            return Some(self.clone());
        }
        if let Some(c) = div.constant_value() {
            let inv = BigRational::one() / c;
            return Some(self.scale(&inv));
        }
        if div.terms.len() == 1 {
            let (dm, dc) = &div.terms[0];
            let inv = BigRational::one() / dc;
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let q = mono_div(m, dm)?;
                out.push((q, c * &inv));
            }
            return Some(Poly { nvars: self.nvars, terms: out });
        }
        let (lm, lc) = div.leading().unwrap();
        let lm = lm.clone();
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quo: Vec<(Mono, BigRational)> = Vec::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = mono_div(rm, &lm)?;
            let qc = rc / &lc;
            rem = rem.sub(&div.mul_term(&qm, &qc));
            quo.push((qm, qc));
        }
        quo.sort_by(|a, b| cmp_mono(&b.0, &a.0));
        Some(Poly { nvars: self.nvars, terms: quo })
    }

    /// d/dt over the named internal variable (plain polynomial derivative).
    pub fn derivative_var(&self, var: usize) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] = e - 1;
            terms.push((m2, c * BigRational::from_integer(BigInt::from(e))));
        }
        terms.sort_by(|a, b| cmp_mono(&b.0, &a.0));
        Poly { nvars: self.nvars, terms }
    }

    /// Minimum exponent of each variable over all terms (the monomial content).
    pub fn mono_content(&self) -> Mono {
        let mut m = match self.terms.first() {
            Some((m, _)) => m.clone(),
            None => return vec![0; self.nvars],
        };
        for (t, _) in &self.terms[1..] {
            for (lhs, rhs) in m.iter_mut().zip(t.iter()) {
                if *rhs < *lhs {
                    *lhs = *rhs;
                }
            }
            if m.iter().all(|&e| e == 0) {
                break;
            }
        }
        m
    }

    /// Rational content: gcd of numerators over lcm of denominators, with the
    /// sign of the leading coefficient.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = BigRational::new(num, den);
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        content
    }

    /// Divides out rational content; result has integer coprime coefficients
    /// and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let content = self.rational_content();
        let inv = BigRational::one() / content;
        self.scale(&inv)
    }

    /// Grouped view as a univariate polynomial in `var` with `Poly` coefficients
    /// (the returned coefficient polys have exponent zero in `var`).
    pub fn coeffs_in_var(&self, var: usize) -> BTreeMap<u16, Poly> {
        let mut map: BTreeMap<u16, Vec<(Mono, BigRational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m[var];
            let mut m2 = m.clone();
            m2[var] = 0;
            map.entry(e).or_default().push((m2, c.clone()));
        }
        map.into_iter()
            .map(|(e, mut terms)| {
                terms.sort_by(|a, b| cmp_mono(&b.0, &a.0));
                (e, Poly { nvars: self.nvars, terms })
            })
            .collect()
    }

    pub fn from_coeffs_in_var(nvars: usize, var: usize, coeffs: &BTreeMap<u16, Poly>) -> Poly {
        let mut acc = Poly::zero(nvars);
        for (e, p) in coeffs {
            acc = acc.add(&p.mul(&Poly::var_pow(nvars, var, *e)));
        }
        acc
    }

    /// Extract coefficients of powers of `var`, requiring the rest of each term
    /// to be independent of `var`.
    pub fn coeff_of_var_power(&self, var: usize, power: u16) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            if m[var] == power {
                let mut m2 = m.clone();
                m2[var] = 0;
                terms.push((m2, c.clone()));
            }
        }
        terms.sort_by(|a, b| cmp_mono(&b.0, &a.0));
        Poly { nvars: self.nvars, terms }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars);
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = rational_to_f64(c);
            for (var, &e) in m.iter().enumerate() {
                if e > 0 {
                    v *= point[var].powi(e as i32);
                }
            }
            acc += v;
        }
        acc
    }

    /// Evaluate all variables except `keep` at the given residues mod `p`,
    /// producing dense univariate coefficients (index = exponent of `keep`).
    /// Returns `None` when a coefficient denominator vanishes mod p.
    pub fn eval_mod_p(&self, keep: usize, point: &[u64], p: u64) -> Option<Vec<u64>> {
        let deg = self.degree_in(keep) as usize;
        let mut out = vec![0u64; deg + 1];
        for (m, c) in &self.terms {
            let mut v = rational_mod_p(c, p)?;
            for (var, &e) in m.iter().enumerate() {
                if var != keep && e > 0 {
                    v = mulmod(v, powmod(point[var] % p, e as u64, p), p);
                }
            }
            let idx = m[keep] as usize;
            out[idx] = (out[idx] + v) % p;
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        Some(out)
    }

    /// Substitute variable -> polynomial, all at once.
    pub fn substitute_vars(&self, target_nvars: usize, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let mut acc = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (var, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[var].pow(e as u32));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}


const PACK_FIELDS: usize = 15;

/// [total:8 | e0:8 | ... | e14:8] so that graded-lex order is u128 order.
fn pack_mono(m: &[u16]) -> Option<u128> {
    if m.len() > PACK_FIELDS {
        return None;
    }
    let mut total: u32 = 0;
    let mut key: u128 = 0;
    for (i, &e) in m.iter().enumerate() {
        if e > 255 {
            return None;
        }
        total += e as u32;
        key |= (e as u128) << (8 * (PACK_FIELDS - 1 - i));
    }
    if total > 255 {
        return None;
    }
    Some(key | (total as u128) << (8 * PACK_FIELDS))
}

fn unpack_mono(key: u128, nvars: usize) -> Mono {
    (0..nvars)
        .map(|i| ((key >> (8 * (PACK_FIELDS - 1 - i))) & 0xff) as u16)
        .collect()
}

fn pack_poly(p: &Poly) -> Option<Vec<(u128, BigRational)>> {
    p.terms
        .iter()
        .map(|(m, c)| pack_mono(m).map(|k| (k, c.clone())))
        .collect()
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(powmod(a, p - 2, p))
}

fn rational_mod_p(c: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = c.numer().mod_floor(&pb);
    let d = c.denom().mod_floor(&pb);
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    let dinv = invmod(d, p)?;
    Some(mulmod(n, dinv, p))
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in p.terms.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{c}")?;
        for (var, &e) in m.iter().enumerate() {
            if e > 0 {
                write!(f, "*v{var}^{e}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn arithmetic_and_order() {
        // (t0 + 1)^2 = t0^2 + 2 t0 + 1
        let t0 = Poly::var_pow(2, 0, 1);
        let one = Poly::one(2);
        let p = t0.add(&one);
        let sq = p.mul(&p);
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(sq.leading().unwrap().0, &vec![2, 0]);
        assert_eq!(sq.terms()[1].1, r(2));
        assert!(sq.sub(&sq).is_zero());
    }

    #[test]
    fn exact_division() {
        // (t0^2 - t1^2) / (t0 - t1) = t0 + t1
        let t0 = Poly::var_pow(2, 0, 1);
        let t1 = Poly::var_pow(2, 1, 1);
        let num = t0.mul(&t0).sub(&t1.mul(&t1));
        let den = t0.sub(&t1);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, t0.add(&t1));
        assert!(num.div_exact(&t0.add(&Poly::one(2))).is_none());
    }

    #[test]
    fn contents() {
        let t0 = Poly::var_pow(2, 0, 1);
        let p = t0.scale(&r(6)).add(&Poly::constant(2, BigRational::new(BigInt::from(9), BigInt::from(2))));
        // content = gcd(6, 9/2) -> 3/2
        assert_eq!(p.rational_content(), BigRational::new(BigInt::from(3), BigInt::from(2)));
        let prim = p.primitive();
        assert_eq!(prim.leading().unwrap().1, &r(4));
    }

    #[test]
    fn derivative() {
        let t0 = Poly::var_pow(1, 0, 3);
        let d = t0.derivative_var(0);
        assert_eq!(d.leading().unwrap().1, &r(3));
        assert_eq!(d.leading().unwrap().0, &vec![2]);
    }
}
