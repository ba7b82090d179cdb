//! Moment integrals over [T, 2T]: the 2m-th moment of a zeta sum, shifted
//! critical-line products, general-sigma products, and windowed inner
//! integrals. One quadrature policy throughout: composite trapezoid on an
//! equispaced grid whose step is sized by the integrand's fastest phase,
//! with the half-step Richardson difference as the error estimate and a
//! hard refusal when refinement moves the value by more than `rel_check`.

use crate::dirichlet::{zsum_batch, zsum_smoothed_batch, Grid};
use crate::error::{LabError, Result};
use crate::kahan::KahanSum;
use crate::quad::refine_pair;
use crate::smoothing::build_cutoff;
use crate::zeta::zeta_batch;
use rayon::prelude::*;

/// Smallest window start accepted; below this "desk scale" loses meaning.
pub const T_MIN: f64 = 100.0;

/// Accuracy requested from the zeta batch kernel inside integrands.
const ZETA_TOL: f64 = 1e-9;

/// Inner s-grid step cap for window moments.
const INNER_STEP: f64 = 0.1;

/// How the inner sum of S_m(T,Y) is weighted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MomentVariant {
    Sharp,
    Smoothed { u: f64, c_exponent: f64 },
}

/// One moment integral S_m(T,Y) = ∫_T^{2T} |Σ_{n≤Y} n^{−it}|^{2m} dt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSpec {
    pub m: f64,
    pub t: f64,
    pub y: f64,
    pub variant: MomentVariant,
}

impl MomentSpec {
    pub fn new(m: f64, t: f64, y: f64, variant: MomentVariant) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(LabError::InvalidParameter(format!("moment order must be positive, got {m}")));
        }
        if !(t.is_finite() && t >= T_MIN) {
            return Err(LabError::InvalidParameter(format!("window start must be >= {T_MIN}, got {t}")));
        }
        if !(y.is_finite() && y >= 1.0) {
            return Err(LabError::InvalidParameter(format!("sum length must be >= 1, got {y}")));
        }
        Ok(Self { m, t, y, variant })
    }
}

/// Exponents a_j and shifts b_j for product moments.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftConfig {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ShiftConfig {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(LabError::InvalidParameter(format!(
                "need matching nonempty exponent/shift tuples, got lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(LabError::InvalidParameter("exponents must be finite and >= 0".into()));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(LabError::InvalidParameter("shifts must be finite".into()));
        }
        Ok(Self { a, b })
    }

    /// Shifts must stay well inside the window: |b_j| <= (1-epsilon) T.
    pub fn check_shifts(&self, t: f64, epsilon: f64) -> Result<()> {
        let cap = (1.0 - epsilon) * t;
        for &bj in &self.b {
            if bj.abs() > cap {
                return Err(LabError::InvalidParameter(format!(
                    "shift {bj} exceeds (1-eps) T = {cap}"
                )));
            }
        }
        Ok(())
    }
}

/// Quadrature policy knobs.
#[derive(Clone, Copy, Debug)]
pub struct QuadParams {
    /// Requested outer step; None takes the phase-based rule. A request
    /// coarser than the rule is rejected.
    pub dt: Option<f64>,
    /// Refinement disagreement beyond this relative size is non-convergence.
    pub rel_check: f64,
    /// The epsilon of the standing Y <= (1-eps) T assumption.
    pub epsilon: f64,
}

impl Default for QuadParams {
    fn default() -> Self {
        Self { dt: None, rel_check: 0.05, epsilon: 0.05 }
    }
}

/// A converged moment value with its refinement-based error estimate.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub err: f64,
    pub panels: usize,
}

/// Step rule for |Σ_{n≤Y} n^{-it}|^{2m}: fastest phase is log Y.
pub fn dt_rule_sum(y: f64) -> f64 {
    let f = y.ln();
    if f > 1.0 { (1.0 / (4.0 * f)).min(0.25) } else { 0.25 }
}

/// Step rule for zeta-product integrands: the local phase density of
/// ζ(σ+it) is ~ log(t/2π).
pub fn dt_rule_zeta(arg_max: f64) -> f64 {
    let f = (arg_max / std::f64::consts::TAU).ln();
    if f > 2.0 { (1.0 / (2.0 * f)).min(0.25) } else { 0.25 }
}

/// Panel count and snapped step covering a span.
fn resolve_step(span: f64, rule: f64, requested: Option<f64>) -> Result<(f64, usize)> {
    let target = match requested {
        Some(dt) if dt.is_finite() && dt > 0.0 && dt <= rule * (1.0 + 1e-12) => dt,
        Some(dt) => {
            return Err(LabError::InvalidParameter(format!(
                "step {dt} violates the aliasing rule dt <= {rule}"
            )))
        }
        None => rule,
    };
    let n = (span / target).ceil().max(4.0) as usize;
    Ok((span / n as f64, n))
}

/// Trapezoid value/error from the nonnegative integrand samples on the
/// fine grid (odd length, spacing `half`).
fn reduce(p: &[f64], half: f64, n: usize, params: &QuadParams, context: &str) -> Result<QuadResult> {
    let (fine, coarse) = refine_pair(p, half);
    let err = (fine - coarse).abs();
    if err > params.rel_check * fine.abs().max(f64::MIN_POSITIVE) {
        return Err(LabError::NonConvergence {
            context: context.to_string(),
            coarse,
            fine,
        });
    }
    Ok(QuadResult { value: fine, err, panels: n })
}

/// S_m(T,Y) over [T, 2T] through the batch sum kernel.
pub fn integrate_moment(spec: &MomentSpec, params: &QuadParams) -> Result<QuadResult> {
    MomentSpec::new(spec.m, spec.t, spec.y, spec.variant)?;
    let (dt_eff, n) = resolve_step(spec.t, dt_rule_sum(spec.y), params.dt)?;
    let half = dt_eff / 2.0;
    let grid = Grid::new(spec.t, half, 2 * n + 1)?;
    let sums = match spec.variant {
        MomentVariant::Sharp => zsum_batch(spec.y, &grid)?,
        MomentVariant::Smoothed { u, c_exponent } => {
            let cutoff = build_cutoff(u, c_exponent)?;
            zsum_smoothed_batch(spec.y, &grid, &cutoff)?
        }
    };
    let p: Vec<f64> = sums.par_iter().map(|z| z.norm_sqr().powf(spec.m)).collect();
    reduce(&p, half, n, params, &format!("S_m(T={}, Y={})", spec.t, spec.y))
}

/// ∫_T^{2T} ∏_j |ζ(σ+i(t+b_j))|^{a_j} dt.
pub fn sigma_moment(cfg: &ShiftConfig, sigma: f64, t: f64, params: &QuadParams) -> Result<QuadResult> {
    if !(sigma.is_finite() && sigma >= 0.5) {
        return Err(LabError::InvalidParameter(format!("sigma must be >= 1/2, got {sigma}")));
    }
    if !(t.is_finite() && t >= T_MIN) {
        return Err(LabError::InvalidParameter(format!("window start must be >= {T_MIN}, got {t}")));
    }
    cfg.check_shifts(t, params.epsilon)?;
    let arg_max = cfg
        .b
        .iter()
        .fold(2.0 * t, |acc, &bj| acc.max((2.0 * t + bj).abs()).max((t + bj).abs()));
    let (dt_eff, n) = resolve_step(t, dt_rule_zeta(arg_max), params.dt)?;
    let half = dt_eff / 2.0;
    let count = 2 * n + 1;
    let mut p = vec![1.0f64; count];
    for (aj, bj) in cfg.a.iter().zip(&cfg.b) {
        let grid = Grid::new(t + bj, half, count)?;
        let vals = zeta_batch(sigma, &grid, ZETA_TOL)?;
        p.par_iter_mut().zip(&vals).for_each(|(slot, v)| {
            *slot *= v.value.norm().powf(*aj);
        });
    }
    reduce(&p, half, n, params, &format!("sigma-moment(sigma={sigma}, T={t})"))
}

/// Prop-style shifted moment on the critical line.
pub fn shifted_moment(cfg: &ShiftConfig, t: f64, params: &QuadParams) -> Result<QuadResult> {
    sigma_moment(cfg, 0.5, t, params)
}

/// Direction of the inner window in `window_moment`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowSign {
    Plus,
    Minus,
}

/// ∫_T^{2T} (∫_0^E |ζ(1/2+i(t±s))| ds)^{2m} dt.
pub fn window_moment(m: f64, t: f64, e: f64, sign: WindowSign, params: &QuadParams) -> Result<QuadResult> {
    window_moment_over(m, t, t, e, sign, params)
}

/// The same nested integral with the outer range [t_lo, t_lo + span]
/// decoupled from the window length; the public entry fixes span = T.
pub(crate) fn window_moment_over(
    m: f64,
    t_lo: f64,
    span: f64,
    e: f64,
    sign: WindowSign,
    params: &QuadParams,
) -> Result<QuadResult> {
    if !(m.is_finite() && m >= 2.0) {
        return Err(LabError::InvalidParameter(format!("window moment needs m >= 2, got {m}")));
    }
    if !(t_lo.is_finite() && t_lo >= T_MIN && span > 0.0) {
        return Err(LabError::InvalidParameter(format!("window start must be >= {T_MIN}, got {t_lo}")));
    }
    if !(e >= 10.0 && e <= (1.0 - params.epsilon) * t_lo) {
        return Err(LabError::InvalidParameter(format!(
            "window length must satisfy 10 <= E <= (1-eps) T, got {e}"
        )));
    }
    let n_inner = (e / INNER_STEP).ceil() as usize;
    let ds = e / n_inner as f64;
    let (dt_eff, n) = resolve_step(span, dt_rule_zeta(t_lo + span + e), params.dt)?;
    let half = dt_eff / 2.0;
    let count = 2 * n + 1;
    let mut inner: Vec<KahanSum> = vec![KahanSum::new(); count];
    for l in 0..=n_inner {
        let w = if l == 0 || l == n_inner { 0.5 * ds } else { ds };
        let offset = match sign {
            WindowSign::Plus => l as f64 * ds,
            WindowSign::Minus => -(l as f64) * ds,
        };
        let grid = Grid::new(t_lo + offset, half, count)?;
        let vals = zeta_batch(0.5, &grid, ZETA_TOL)?;
        for (acc, v) in inner.iter_mut().zip(&vals) {
            acc.add(w * v.value.norm());
        }
    }
    let p: Vec<f64> = inner.par_iter().map(|acc| acc.value().powf(2.0 * m)).collect();
    reduce(&p, half, n, params, &format!("window-moment(T={t_lo}, E={e})"))
}
