//! Floating-point cross-checks: random-point evaluation, finite-difference
//! bracket oracle, and Hamiltonian flow integration with conservation-drift
//! measurement.

use std::sync::Arc;

use crate::context::Context;
use crate::error::CoreError;
use crate::phase::{poisson_bracket, MomentumPoly};
use crate::poly::rational_to_f64;
use crate::scalar::Scalar;

/// Deterministic splitmix64; reproducible across platforms.
#[derive(Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// uniform in [0, 1)
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }
}

/// Sampling region for regular points: coordinates in [0.5, 2], momenta in
/// [-1, 1], parameters in [0.5, 2], with |x1^2 - x2^2| >= 0.1 enforced by
/// resampling so the catalog denominators stay away from zero.
pub const COORD_RANGE: (f64, f64) = (0.5, 2.0);
pub const MOMENTUM_RANGE: (f64, f64) = (-1.0, 1.0);
pub const PARAM_RANGE: (f64, f64) = (0.5, 2.0);

#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub coords: Vec<f64>,
    pub momenta: Vec<f64>,
}

pub fn sample_point(rng: &mut Rng, dim: usize) -> SamplePoint {
    loop {
        let coords: Vec<f64> = (0..dim)
            .map(|_| rng.uniform(COORD_RANGE.0, COORD_RANGE.1))
            .collect();
        if dim >= 2 {
            let d = (coords[0] * coords[0] - coords[1] * coords[1]).abs();
            if d < 0.1 {
                continue;
            }
        }
        let momenta: Vec<f64> = (0..dim)
            .map(|_| rng.uniform(MOMENTUM_RANGE.0, MOMENTUM_RANGE.1))
            .collect();
        return SamplePoint { coords, momenta };
    }
}

pub fn sample_params(rng: &mut Rng, ctx: &Arc<Context>) -> Vec<(String, f64)> {
    ctx.params()
        .iter()
        .map(|name| (name.clone(), rng.uniform(PARAM_RANGE.0, PARAM_RANGE.1)))
        .collect()
}

/// Internal variable vector (surds first) from coordinate and parameter
/// assignments. Coordinates must be positive so the surds stay real.
pub fn var_values(
    ctx: &Arc<Context>,
    coords: &[f64],
    params: &[(String, f64)],
) -> Result<Vec<f64>, CoreError> {
    if coords.len() != ctx.coords() {
        return Err(CoreError::DimensionMismatch(format!(
            "expected {} coordinates",
            ctx.coords()
        )));
    }
    let mut vars = vec![f64::NAN; ctx.nvars()];
    for (i, &x) in coords.iter().enumerate() {
        if x <= 0.0 {
            return Err(CoreError::SingularPoint(format!(
                "coordinate x{} = {x} must be positive (surd domain)",
                i + 1
            )));
        }
        vars[i] = x.sqrt();
    }
    for (name, v) in params {
        let var = ctx
            .param_var(name)
            .ok_or_else(|| CoreError::UsageError(format!("unknown parameter `{name}`")))?;
        vars[var] = *v;
    }
    for (v, val) in vars.iter().enumerate() {
        if val.is_nan() {
            let name = ctx.param_name(v).unwrap_or("?");
            return Err(CoreError::UsageError(format!(
                "parameter `{name}` was not assigned a value"
            )));
        }
    }
    Ok(vars)
}

/// Evaluate a scalar at coordinates/parameters.
pub fn eval_scalar(
    s: &Scalar,
    coords: &[f64],
    params: &[(String, f64)],
) -> Result<f64, CoreError> {
    let vars = var_values(s.ctx(), coords, params)?;
    s.eval_vars(&vars)
}

/// Evaluate a momentum polynomial at a phase-space point.
pub fn eval_momentum_poly(
    mp: &MomentumPoly,
    point: &SamplePoint,
    params: &[(String, f64)],
) -> Result<f64, CoreError> {
    let vars = var_values(mp.ctx(), &point.coords, params)?;
    mp.eval_vars(&vars, &point.momenta)
}

// ---- compiled evaluation for the integrator hot loop ----------------------

type FloatTerm = (f64, Vec<(usize, i32)>);

struct CompiledCoeff {
    num: Vec<FloatTerm>,
    den: Vec<FloatTerm>,
    momenta: Vec<(usize, i32)>,
}

pub struct CompiledPoly {
    dim: usize,
    terms: Vec<CompiledCoeff>,
}

const DEN_GUARD: f64 = 1e-10;

impl CompiledPoly {
    /// Substitute the parameters numerically; coordinates stay symbolic as
    /// surd variables.
    pub fn build(
        mp: &MomentumPoly,
        params: &[(String, f64)],
    ) -> Result<CompiledPoly, CoreError> {
        let ctx = mp.ctx();
        let ncoords = ctx.coords();
        let mut param_vals = vec![f64::NAN; ctx.nvars()];
        for (name, v) in params {
            let var = ctx
                .param_var(name)
                .ok_or_else(|| CoreError::UsageError(format!("unknown parameter `{name}`")))?;
            param_vals[var] = *v;
        }
        let compile_poly = |p: &crate::poly::Poly| -> Result<Vec<FloatTerm>, CoreError> {
            let mut out = Vec::with_capacity(p.terms().len());
            for (m, c) in p.terms() {
                let mut v = rational_to_f64(c);
                let mut mono = Vec::new();
                for (var, &e) in m.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if var < ncoords {
                        mono.push((var, e as i32));
                    } else {
                        let pv = param_vals[var];
                        if pv.is_nan() {
                            return Err(CoreError::UsageError(format!(
                                "parameter `{}` was not assigned a value",
                                ctx.param_name(var).unwrap_or("?")
                            )));
                        }
                        v *= pv.powi(e as i32);
                    }
                }
                out.push((v, mono));
            }
            Ok(out)
        };
        let mut terms = Vec::new();
        for (idx, coeff) in mp.terms() {
            let momenta: Vec<(usize, i32)> = idx
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e as i32))
                .collect();
            let (num, den) = coeff.canonical_pair();
            terms.push(CompiledCoeff {
                num: compile_poly(&num)?,
                den: compile_poly(&den)?,
                momenta,
            });
        }
        Ok(CompiledPoly { dim: ncoords, terms })
    }

    /// Evaluate at a phase-space point. Coordinate exponents are stored in
    /// half-steps (the internal surd power): even powers are plain integer
    /// powers of x and stay valid for negative coordinates, odd powers need
    /// sqrt(x) and leave the real domain at x <= 0.
    pub fn eval(&self, coords: &[f64], momenta: &[f64]) -> Result<f64, CoreError> {
        let eval_side = |side: &[FloatTerm]| -> Result<f64, CoreError> {
            let mut acc = 0.0;
            for (c, mono) in side {
                let mut v = *c;
                for &(var, e) in mono {
                    let x = coords[var];
                    if e % 2 == 0 {
                        v *= x.powi(e / 2);
                    } else {
                        if x <= 0.0 {
                            return Err(CoreError::SingularPoint(format!(
                                "coordinate x{} = {x} left the surd domain",
                                var + 1
                            )));
                        }
                        v *= x.powf(e as f64 / 2.0);
                    }
                }
                acc += v;
            }
            Ok(acc)
        };
        let mut acc = 0.0;
        for t in &self.terms {
            let num = eval_side(&t.num)?;
            let den = eval_side(&t.den)?;
            if den.abs() < DEN_GUARD {
                return Err(CoreError::SingularPoint(format!(
                    "denominator magnitude {den:.3e} below guard"
                )));
            }
            let mut v = num / den;
            for &(i, e) in &t.momenta {
                v *= momenta[i].powi(e);
            }
            acc += v;
        }
        let _ = self.dim;
        Ok(acc)
    }
}

// ---- functional independence ----------------------------------------------

#[derive(Clone, Debug)]
pub struct RankReport {
    pub count: usize,
    pub max_rank: usize,
    pub singular_values: Vec<f64>,
    pub points_used: usize,
}

impl RankReport {
    pub fn independent(&self) -> bool {
        self.max_rank == self.count
    }
}

pub const RANK_TOLERANCE: f64 = 1e-8;

/// Numeric rank of the Jacobian of the symmetry values with respect to
/// (x, p), maximized over sample points.
pub fn functional_independence(
    symmetries: &[&MomentumPoly],
    params: &[(String, f64)],
    seed: u64,
    points: usize,
) -> Result<RankReport, CoreError> {
    if symmetries.is_empty() {
        return Err(CoreError::UsageError("empty symmetry list".into()));
    }
    let ctx = symmetries[0].ctx();
    let dim = ctx.coords();
    let mut rng = Rng::new(seed);
    // symbolic partials evaluated numerically
    let mut grads: Vec<Vec<MomentumPoly>> = Vec::new();
    for k in symmetries {
        let mut row = Vec::new();
        for j in 1..=dim {
            row.push(k.d_coord(j)?);
        }
        for j in 1..=dim {
            row.push(k.d_momentum(j)?);
        }
        grads.push(row);
    }
    let m = symmetries.len();
    let mut best_rank = 0usize;
    let mut best_sv: Vec<f64> = Vec::new();
    let mut used = 0usize;
    let mut attempts = 0usize;
    while used < points {
        attempts += 1;
        if attempts > points * 20 {
            return Err(CoreError::SamplingFailure(
                "all sample points were singular; retry with a new seed".into(),
            ));
        }
        let pt = sample_point(&mut rng, dim);
        let vars = match var_values(ctx, &pt.coords, params) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let mut jac = vec![vec![0.0f64; 2 * dim]; m];
        let mut singular = false;
        'rows: for (i, row) in grads.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                match g.eval_vars(&vars, &pt.momenta) {
                    Ok(v) if v.is_finite() => jac[i][j] = v,
                    _ => {
                        singular = true;
                        break 'rows;
                    }
                }
            }
        }
        if singular {
            continue;
        }
        used += 1;
        let sv = singular_values(&jac);
        let smax = sv.first().copied().unwrap_or(0.0);
        let tol = RANK_TOLERANCE * smax.max(1.0);
        let rank = sv.iter().filter(|&&s| s > tol).count();
        if rank > best_rank {
            best_rank = rank;
            best_sv = sv;
        }
    }
    Ok(RankReport {
        count: m,
        max_rank: best_rank,
        singular_values: best_sv,
        points_used: used,
    })
}

/// Singular values of a small m x n matrix via Jacobi iteration on the
/// m x m Gram matrix.
pub fn singular_values(mat: &[Vec<f64>]) -> Vec<f64> {
    let m = mat.len();
    let n = mat[0].len();
    let mut gram = vec![vec![0.0f64; m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut s = 0.0;
            for k in 0..n {
                s += mat[i][k] * mat[j][k];
            }
            gram[i][j] = s;
        }
    }
    // cyclic Jacobi eigenvalue iteration
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                off += gram[i][j] * gram[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let apq = gram[i][j];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = gram[i][i];
                let aqq = gram[j][j];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let aik = gram[i][k];
                    let ajk = gram[j][k];
                    gram[i][k] = c * aik - s * ajk;
                    gram[j][k] = s * aik + c * ajk;
                }
                for k in 0..m {
                    let aki = gram[k][i];
                    let akj = gram[k][j];
                    gram[k][i] = c * aki - s * akj;
                    gram[k][j] = s * aki + c * akj;
                }
            }
        }
    }
    let mut sv: Vec<f64> = (0..m).map(|i| gram[i][i].max(0.0).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

// ---- Hamiltonian flow -------------------------------------------------------

#[derive(Clone, Debug)]
pub struct DriftReport {
    /// max_t |K_i(t) - K_i(0)| / max(1, |K_i(0)|) per tracked quantity
    pub drifts: Vec<f64>,
    pub completed: bool,
    pub exit_time: f64,
    pub steps: usize,
}

impl DriftReport {
    pub fn max_drift(&self) -> f64 {
        self.drifts.iter().cloned().fold(0.0, f64::max)
    }
}

/// Integrate the flow of H and report conservation drift of each K.
/// Dormand-Prince 5(4) with adaptive steps at local tolerance `tol`;
/// trajectories that reach a singular locus are truncated and reported.
pub fn flow_conserve(
    hamiltonian: &MomentumPoly,
    tracked: &[&MomentumPoly],
    x0: &[f64],
    p0: &[f64],
    params: &[(String, f64)],
    horizon: f64,
    tol: f64,
) -> Result<DriftReport, CoreError> {
    let ctx = hamiltonian.ctx();
    let dim = ctx.coords();
    assert_eq!(x0.len(), dim);
    assert_eq!(p0.len(), dim);

    // compiled vector field: dx/dt = dH/dp, dp/dt = -dH/dx
    let mut rhs: Vec<CompiledPoly> = Vec::with_capacity(2 * dim);
    for j in 1..=dim {
        rhs.push(CompiledPoly::build(&hamiltonian.d_momentum(j)?, params)?);
    }
    for j in 1..=dim {
        rhs.push(CompiledPoly::build(&hamiltonian.d_coord(j)?.neg(), params)?);
    }
    let observables: Vec<CompiledPoly> = tracked
        .iter()
        .map(|k| CompiledPoly::build(k, params))
        .collect::<Result<_, _>>()?;

    let eval_field = |y: &[f64], out: &mut [f64]| -> Result<(), CoreError> {
        let (x, p) = y.split_at(dim);
        for (k, f) in rhs.iter().enumerate() {
            out[k] = f.eval(x, p)?;
        }
        Ok(())
    };

    let mut y: Vec<f64> = x0.iter().chain(p0.iter()).cloned().collect();
    let baseline: Vec<f64> = observables
        .iter()
        .map(|o| o.eval(x0, p0))
        .collect::<Result<_, _>>()?;
    let mut drifts = vec![0.0f64; observables.len()];

    // Dormand-Prince coefficients
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let nv = 2 * dim;
    let mut k = vec![vec![0.0f64; nv]; 7];
    let mut t = 0.0f64;
    let mut h = (horizon / 100.0).min(1e-2).max(1e-6);
    let mut steps = 0usize;
    let mut completed = true;

    if eval_field(&y, &mut k[0]).is_err() {
        return Err(CoreError::SingularPoint(
            "initial point is singular".into(),
        ));
    }

    while t < horizon {
        if steps > 2_000_000 {
            completed = false;
            break;
        }
        if t + h > horizon {
            h = horizon - t;
        }
        // stages (FSAL: k[0] holds f(y))
        let mut singular = false;
        for s in 1..7 {
            let mut ys = y.clone();
            for (i, val) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s - 1][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                *val += h * acc;
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            if eval_field(&ys, &mut tail[0]).is_err() {
                singular = true;
                break;
            }
        }
        if singular {
            h *= 0.5;
            if h < 1e-14 {
                completed = false;
                break;
            }
            continue;
        }
        let mut y5 = y.clone();
        let mut err = 0.0f64;
        for i in 0..nv {
            let mut v5 = 0.0;
            let mut v4 = 0.0;
            for s in 0..7 {
                v5 += B5[s] * k[s][i];
                v4 += B4[s] * k[s][i];
            }
            y5[i] += h * v5;
            let scale = tol + tol * y[i].abs().max(y5[i].abs());
            let d = h * (v5 - v4) / scale;
            err += d * d;
        }
        err = (err / nv as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y = y5;
            steps += 1;
            match eval_field(&y, &mut k[0]) {
                Ok(()) => {}
                Err(_) => {
                    completed = false;
                    break;
                }
            }
            // track drift at accepted steps
            let (x, p) = y.split_at(dim);
            for (i, o) in observables.iter().enumerate() {
                match o.eval(x, p) {
                    Ok(v) => {
                        let d = (v - baseline[i]).abs() / baseline[i].abs().max(1.0);
                        if d > drifts[i] {
                            drifts[i] = d;
                        }
                    }
                    Err(_) => {
                        completed = false;
                        break;
                    }
                }
            }
            if !completed {
                break;
            }
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < 1e-14 {
            completed = false;
            break;
        }
    }

    Ok(DriftReport {
        drifts,
        completed,
        exit_time: t,
        steps,
    })
}

// ---- finite-difference bracket oracle ---------------------------------------

/// Compare the symbolic Poisson bracket against central differences at random
/// regular points; returns the max relative deviation observed.
pub fn fd_bracket_check(
    f: &MomentumPoly,
    g: &MomentumPoly,
    params: &[(String, f64)],
    points: usize,
    seed: u64,
) -> Result<f64, CoreError> {
    let ctx = f.ctx();
    let dim = ctx.coords();
    let symbolic = poisson_bracket(f, g)?;
    let mut rng = Rng::new(seed);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut attempts = 0;
    while used < points {
        attempts += 1;
        if attempts > points * 20 {
            return Err(CoreError::SamplingFailure(
                "all sample points were singular; retry with a new seed".into(),
            ));
        }
        let pt = sample_point(&mut rng, dim);
        let sym = match eval_momentum_poly(&symbolic, &pt, params) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let mut numeric = 0.0;
        let mut ok = true;
        for j in 0..dim {
            let eval_at = |dx: f64, dpx: f64, obj: &MomentumPoly| -> Result<f64, CoreError> {
                let mut coords = pt.coords.clone();
                let mut momenta = pt.momenta.clone();
                coords[j] += dx;
                momenta[j] += dpx;
                eval_momentum_poly(
                    obj,
                    &SamplePoint { coords, momenta },
                    params,
                )
            };
            let quad = (|| -> Result<f64, CoreError> {
                let fx = (eval_at(h, 0.0, f)? - eval_at(-h, 0.0, f)?) / (2.0 * h);
                let gp = (eval_at(0.0, h, g)? - eval_at(0.0, -h, g)?) / (2.0 * h);
                let fp = (eval_at(0.0, h, f)? - eval_at(0.0, -h, f)?) / (2.0 * h);
                let gx = (eval_at(h, 0.0, g)? - eval_at(-h, 0.0, g)?) / (2.0 * h);
                Ok(fx * gp - fp * gx)
            })();
            match quad {
                Ok(v) => numeric += v,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        used += 1;
        let dev = (sym - numeric).abs() / sym.abs().max(1.0);
        worst = worst.max(dev);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::classical::example1;

    #[test]
    fn rng_is_deterministic() {
        let mut a = Rng::new(7);
        let mut b = Rng::new(7);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn example1_hand_value() {
        // H at x=(1,1), p=(1,0), b=(1,1): 1 + 1*1 + 1*1 = 3
        let ex = example1();
        let params = vec![
            ("b1".to_string(), 1.0),
            ("b2".to_string(), 1.0),
            ("b3".to_string(), 0.0),
            ("E".to_string(), 0.0),
        ];
        let v = eval_momentum_poly(
            &ex.hamiltonian,
            &SamplePoint { coords: vec![1.0, 1.0], momenta: vec![1.0, 0.0] },
            &params,
        )
        .unwrap();
        assert!((v - 3.0).abs() < 1e-14);
    }

    #[test]
    fn canonical_pair_bracket_fd() {
        let ex = example1();
        let params = vec![
            ("b1".to_string(), 0.75),
            ("b2".to_string(), 1.25),
            ("b3".to_string(), 0.5),
            ("E".to_string(), 0.5),
        ];
        // {x1, p1} = 1 via finite differences, zero deviation up to rounding
        let ctx = &ex.ctx;
        let x1 = MomentumPoly::from_scalar(Scalar::coord(ctx, 1).unwrap());
        let p1 = MomentumPoly::momentum(ctx, 1).unwrap();
        let dev = fd_bracket_check(&x1, &p1, &params, 3, 11).unwrap();
        assert!(dev < 1e-9, "deviation {dev}");
    }

    #[test]
    fn energy_is_conserved_along_the_flow() {
        let ex = example1();
        let params = vec![
            ("b1".to_string(), 0.5),
            ("b2".to_string(), 0.5),
            ("b3".to_string(), 1.0),
            ("E".to_string(), 0.5),
        ];
        let report = flow_conserve(
            &ex.hamiltonian,
            &[&ex.hamiltonian],
            &[2.0, 1.5],
            &[1.0, -0.5],
            &params,
            10.0,
            1e-10,
        )
        .unwrap();
        assert!(report.completed, "exited at t = {}", report.exit_time);
        assert!(report.max_drift() < 1e-8, "drift {}", report.max_drift());
    }

    #[test]
    fn independence_ranks() {
        let ex = example1();
        let params = vec![
            ("b1".to_string(), 0.75),
            ("b2".to_string(), 1.25),
            ("b3".to_string(), 0.5),
            ("E".to_string(), 0.5),
        ];
        let h = &ex.hamiltonian;
        let k2 = ex.symmetry("K2").unwrap();
        let k3 = ex.symmetry("K3").unwrap();
        let r = functional_independence(&[h, k2, k3], &params, 23, 5).unwrap();
        assert_eq!(r.max_rank, 3);
        assert!(r.independent());

        let twice = h.scale_rational(&num_rational::BigRational::from_integer(2.into()));
        let r = functional_independence(&[h, &twice], &params, 23, 5).unwrap();
        assert_eq!(r.max_rank, 1);
        assert!(!r.independent());
    }
}
