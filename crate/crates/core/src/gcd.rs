//! Multivariate polynomial gcd.
//!
//! Strategy: strip monomial and rational content, then try cheap certificates
//! before the general machinery. A modular evaluation probe detects the
//! (dominant) coprime case; trial exact division catches nested powers of a
//! common factor. The general case runs a subresultant PRS in the variable of
//! lowest degree with recursive content extraction.

use num_rational::BigRational;
use num_traits::One;

use crate::poly::{mulmod, powmod, Mono, Poly};

const PROBE_PRIME: u64 = 0x3fff_ffff_ffff_ffc7; // largest prime below 2^62
const PROBE_ROUNDS: usize = 2;

/// gcd normalized to primitive form with positive leading coefficient.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let nvars = a.nvars();
    assert_eq!(nvars, b.nvars());
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(nvars);
    }

    let ca = a.mono_content();
    let cb = b.mono_content();
    let cg: Mono = ca.iter().zip(cb.iter()).map(|(x, y)| *x.min(y)).collect();
    let a = shift_down(a, &ca).primitive();
    let b = shift_down(b, &cb).primitive();
    let mono_gcd = Poly::monomial(nvars, cg, BigRational::one());

    if a == b {
        return a.mul(&mono_gcd);
    }
    if a.is_constant() || b.is_constant() {
        return mono_gcd;
    }

    // trial division: powers of a shared irreducible are common here
    let (small, large) = if a.total_degree() <= b.total_degree() {
        (&a, &b)
    } else {
        (&b, &a)
    };
    if divisibility_probe(large, small) && large.div_exact(small).is_some() {
        return small.mul(&mono_gcd);
    }

    if probe_coprime(&a, &b) {
        return mono_gcd;
    }

    gcd_primitive(&a, &b).mul(&mono_gcd)
}

pub fn poly_lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.nvars());
    }
    let g = poly_gcd(a, b);
    a.div_exact(&g).unwrap().mul(b).primitive()
}


/// One-sided divisibility probe: `false` certifies (up to the vanishing of a
/// random evaluation, probability ~ deg/p) that `f` does not divide `num`;
/// `true` means the real division is worth attempting. Used to skip long
/// almost-successful division attempts.
pub fn divisibility_probe(num: &Poly, f: &Poly) -> bool {
    if f.is_constant() || num.is_zero() {
        return true;
    }
    let nvars = num.nvars();
    let var = match (0..nvars)
        .filter(|&v| f.depends_on(v))
        .min_by_key(|&v| f.degree_in(v))
    {
        Some(v) => v,
        None => return true,
    };
    if num.degree_in(var) < f.degree_in(var) {
        return false;
    }
    let mut state = 0x243f_6a88_85a3_08d3u64;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    for _ in 0..2 {
        let point: Vec<u64> = (0..nvars).map(|_| 2 + next() % (PROBE_PRIME - 4)).collect();
        let (un, uf) = match (
            num.eval_mod_p(var, &point, PROBE_PRIME),
            f.eval_mod_p(var, &point, PROBE_PRIME),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        // degenerate images prove nothing
        if uf.len() - 1 != f.degree_in(var) as usize {
            continue;
        }
        if un.len() < uf.len() {
            return un.iter().all(|&c| c == 0);
        }
        let rem = poly_rem_mod(&un, &uf, PROBE_PRIME);
        return rem.iter().all(|&c| c == 0);
    }
    true
}

fn shift_down(p: &Poly, mono: &[u16]) -> Poly {
    if mono.iter().all(|&e| e == 0) {
        return p.clone();
    }
    let down = Poly::monomial(p.nvars(), mono.to_vec(), BigRational::one());
    p.div_exact(&down).expect("monomial content divides")
}

/// One-sided certificate that gcd(a, b) is monomial-free: for every variable
/// present in both, a random evaluation of the remaining variables mod p
/// leaves coprime univariate images. A nontrivial common factor survives such
/// an evaluation except on the vanishing locus of its leading coefficient, so
/// a coprime image certifies coprimality in that variable.
fn probe_coprime(a: &Poly, b: &Poly) -> bool {
    let nvars = a.nvars();
    let shared: Vec<usize> = (0..nvars)
        .filter(|&v| a.depends_on(v) && b.depends_on(v))
        .collect();
    if shared.is_empty() {
        // no variable in common: any common factor would be constant
        return true;
    }
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    'vars: for &v in &shared {
        for _ in 0..PROBE_ROUNDS {
            let point: Vec<u64> = (0..nvars).map(|_| 2 + next() % (PROBE_PRIME - 4)).collect();
            let (ua, ub) = match (a.eval_mod_p(v, &point, PROBE_PRIME), b.eval_mod_p(v, &point, PROBE_PRIME)) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            // degenerate images prove nothing for this round
            if ua.len() <= 1 || ub.len() <= 1 {
                continue;
            }
            if univariate_gcd_degree(&ua, &ub, PROBE_PRIME) == 0 {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

fn univariate_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut f: Vec<u64> = a.to_vec();
    let mut g: Vec<u64> = b.to_vec();
    loop {
        if g.iter().all(|&c| c == 0) {
            return f.len().saturating_sub(1);
        }
        let r = poly_rem_mod(&f, &g, p);
        f = g;
        g = r;
    }
}

fn poly_rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb_inv = powmod(b[db], p - 2, p);
    while r.len() > db {
        let dr = r.len() - 1;
        let q = mulmod(r[dr], lb_inv, p);
        if q != 0 {
            for i in 0..=db {
                let idx = dr - db + i;
                r[idx] = (r[idx] + p - mulmod(q, b[i], p)) % p;
            }
        }
        r.pop();
        while r.len() > db && *r.last().unwrap() == 0 {
            r.pop();
        }
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    if r.is_empty() {
        vec![0]
    } else {
        r
    }
}

/// Subresultant PRS over the main variable with recursive contents.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    let nvars = a.nvars();
    let shared: Vec<usize> = (0..nvars)
        .filter(|&v| a.depends_on(v) && b.depends_on(v))
        .collect();
    if shared.is_empty() {
        return Poly::one(nvars);
    }
    let var = *shared
        .iter()
        .min_by_key(|&&v| a.degree_in(v).min(b.degree_in(v)))
        .unwrap();

    let (cont_a, prim_a) = content_in_var(a, var);
    let (cont_b, prim_b) = content_in_var(b, var);
    let cont_gcd = poly_gcd(&cont_a, &cont_b);

    let mut f = prim_a;
    let mut g = prim_b;
    if f.degree_in(var) < g.degree_in(var) {
        std::mem::swap(&mut f, &mut g);
    }

    let mut h = Poly::one(nvars);
    let mut gamma = Poly::one(nvars);
    loop {
        let df = f.degree_in(var);
        let dg = g.degree_in(var);
        let delta = (df - dg) as u32;
        let rem = pseudo_rem(&f, &g, var);
        if rem.is_zero() {
            let prim = content_in_var(&g, var).1;
            return prim.mul(&cont_gcd).primitive();
        }
        if rem.degree_in(var) == 0 {
            return cont_gcd.primitive();
        }
        f = g;
        // subresultant divisor: gamma * h^delta
        let divisor = gamma.mul(&h.pow(delta));
        g = rem
            .div_exact(&divisor)
            .expect("subresultant division is exact");
        gamma = lead_coeff_in_var(&f, var);
        h = if delta == 0 {
            h
        } else {
            // h_{new} = gamma^delta / h^(delta-1)
            gamma
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h update is exact")
        };
    }
}

fn content_in_var(p: &Poly, var: usize) -> (Poly, Poly) {
    let coeffs = p.coeffs_in_var(var);
    let mut content = Poly::zero(p.nvars());
    for c in coeffs.values() {
        content = poly_gcd(&content, c);
        if content.is_one() {
            break;
        }
    }
    let prim = p.div_exact(&content).expect("content divides");
    (content, prim)
}

fn lead_coeff_in_var(p: &Poly, var: usize) -> Poly {
    let d = p.degree_in(var);
    p.coeff_of_var_power(var, d)
}

/// lc(g)^(df-dg+1) * f reduced by g in `var`; requires df >= dg.
fn pseudo_rem(f: &Poly, g: &Poly, var: usize) -> Poly {
    let df = f.degree_in(var);
    let dg = g.degree_in(var);
    assert!(df >= dg);
    let lg = lead_coeff_in_var(g, var);
    let mut r = f.clone();
    let mut reductions = df as i64 - dg as i64 + 1;
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let lr = lead_coeff_in_var(&r, var);
        let shift = Poly::var_pow(f.nvars(), var, dr - dg);
        r = r.mul(&lg).sub(&g.mul(&lr).mul(&shift));
        reductions -= 1;
    }
    // pad remaining multiplications so the subresultant bookkeeping is exact
    while reductions > 0 {
        r = r.mul(&lg);
        reductions -= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn t(nvars: usize, var: usize) -> Poly {
        Poly::var_pow(nvars, var, 1)
    }

    #[test]
    fn coprime_cases() {
        let a = t(2, 0).add(&Poly::one(2));
        let b = t(2, 1).add(&Poly::from_int(2, 2));
        assert!(poly_gcd(&a, &b).is_one());
    }

    #[test]
    fn factor_cancellation() {
        // gcd((t0^2-t1^2), (t0-t1)) = t0 - t1
        let num = t(2, 0).pow(2).sub(&t(2, 1).pow(2));
        let den = t(2, 0).sub(&t(2, 1));
        assert_eq!(poly_gcd(&num, &den), den.primitive());
    }

    #[test]
    fn nested_powers() {
        // u = t0 + t1^2 + 3: gcd(u^3, u^2) = u^2
        let u = t(2, 0).add(&t(2, 1).pow(2)).add(&Poly::from_int(2, 3));
        assert_eq!(poly_gcd(&u.pow(3), &u.pow(2)), u.pow(2).primitive());
    }

    #[test]
    fn mixed_content() {
        // gcd(6 t0 t1, 4 t0^2) = 2 t0, up to sign/primitivity conventions -> t0
        let a = t(2, 0).mul(&t(2, 1)).scale(&r(6));
        let b = t(2, 0).pow(2).scale(&r(4));
        assert_eq!(poly_gcd(&a, &b), t(2, 0));
    }

    #[test]
    fn multivariate_common_factor() {
        // (t0 + t1)(t0^2 + 3) vs (t0 + t1)(t1 + 5)
        let common = t(2, 0).add(&t(2, 1));
        let a = common.mul(&t(2, 0).pow(2).add(&Poly::from_int(2, 3)));
        let b = common.mul(&t(2, 1).add(&Poly::from_int(2, 5)));
        assert_eq!(poly_gcd(&a, &b), common.primitive());
    }

    #[test]
    fn lcm_of_powers() {
        let u = t(1, 0).add(&Poly::one(1));
        let l = poly_lcm(&u.pow(2), &u.pow(3));
        assert_eq!(l, u.pow(3).primitive());
    }
}
