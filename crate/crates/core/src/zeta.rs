//! Riemann zeta on the half-plane σ ≥ 1/2 by Euler–Maclaurin summation, the
//! Riemann–Siegel theta function, and the Hardy Z-function used as a running
//! self-check of critical-line accuracy.
//!
//! The evaluation scheme is uniform in σ: a direct sum of N terms with
//! N = max(⌈|s|/2⌉, 32), an integral-plus-half-term tail, and eight
//! Bernoulli corrections, doubling N until the last correction falls under
//! the requested tolerance. `err` is a heuristic (last correction × 4 plus
//! the rounding floor of the main sum), not a proven interval.

use crate::dd::{CDd, Dd};
use crate::dirichlet::{phase_kernel, Grid};
use crate::error::{LabError, Result};
use crate::kahan::{KahanComplex, KahanSum};
use num_complex::Complex64;
use rayon::prelude::*;

/// Evaluation point s = sigma + i t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ZetaPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.5) {
            return Err(LabError::InvalidParameter(format!(
                "sigma must be finite and >= 1/2, got {sigma}"
            )));
        }
        if !t.is_finite() {
            return Err(LabError::InvalidParameter(format!("t must be finite, got {t}")));
        }
        Ok(Self { sigma, t })
    }
}

/// Value with its heuristic absolute error estimate.
#[derive(Clone, Copy, Debug)]
pub struct EvalResult {
    pub value: Complex64,
    pub err: f64,
}

/// Working precision for the evaluation kernels. `Extended` runs the same
/// Euler–Maclaurin scheme in software double-double and exists for oracle
/// runs; throughput paths stay in `Double`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrecisionMode {
    #[default]
    Double,
    Extended,
}

/// Ordinate cap: beyond this the term counts stop being desk scale.
pub const T_CAP: f64 = 1.0e7;

/// Refuse evaluation closer to the pole s=1 than this.
pub const POLE_GUARD: f64 = 1e-8;

// B_{2k}/(2k)! for k = 1..8, the correction coefficients.
const EM_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

const MAX_DOUBLINGS: usize = 7;

fn validate(p: ZetaPoint, tol: f64) -> Result<()> {
    ZetaPoint::new(p.sigma, p.t)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(LabError::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    if p.t.abs() > T_CAP {
        return Err(LabError::Domain(format!(
            "|t| = {} exceeds the desk-scale cap {T_CAP:e}",
            p.t.abs()
        )));
    }
    if (p.sigma - 1.0).abs() + p.t.abs() < POLE_GUARD {
        return Err(LabError::Domain(format!(
            "s = {}+{}i is within {POLE_GUARD:e} of the pole at 1",
            p.sigma, p.t
        )));
    }
    Ok(())
}

/// ζ(σ+it) in double precision.
pub fn eval_zeta(p: ZetaPoint, tol: f64) -> Result<EvalResult> {
    eval_zeta_with(p, tol, PrecisionMode::Double)
}

/// ζ(σ+it) in the chosen precision mode.
pub fn eval_zeta_with(p: ZetaPoint, tol: f64, mode: PrecisionMode) -> Result<EvalResult> {
    validate(p, tol)?;
    let s_mod = (p.sigma * p.sigma + p.t * p.t).sqrt();
    let mut n = ((s_mod / 2.0).ceil() as usize).max(32);
    let mut achieved = f64::INFINITY;
    for _ in 0..=MAX_DOUBLINGS {
        let (value, last_corr, round_floor) = match mode {
            PrecisionMode::Double => em_pass(p.sigma, p.t, n),
            PrecisionMode::Extended => em_pass_dd(p.sigma, p.t, n),
        };
        let tail_est = 4.0 * last_corr;
        achieved = tail_est;
        if tail_est <= tol {
            return Ok(EvalResult {
                value,
                err: tail_est + 4.0 * round_floor,
            });
        }
        n *= 2;
        if n as f64 > 8.0e7 {
            break;
        }
    }
    Err(LabError::Numerical(format!(
        "Euler-Maclaurin tail stayed at {achieved:e} after {MAX_DOUBLINGS} doublings (tol {tol:e}) at s = {}+{}i",
        p.sigma, p.t
    )))
}

/// One Euler–Maclaurin pass with N = n_main: returns (value, magnitude of the
/// last correction term, rounding floor of the direct sum).
fn em_pass(sigma: f64, t: f64, n_main: usize) -> (Complex64, f64, f64) {
    let mut acc = KahanComplex::new();
    let mut abs_acc = KahanSum::new();
    for n in 1..n_main {
        let ln_n = (n as f64).ln();
        let r = (-sigma * ln_n).exp();
        let (sin_p, cos_p) = (-t * ln_n).sin_cos();
        acc.add(Complex64::new(r * cos_p, r * sin_p));
        abs_acc.add(r);
    }
    let s = Complex64::new(sigma, t);
    let nf = n_main as f64;
    let ln_nf = nf.ln();
    let n_pow_ms = Complex64::from_polar((-sigma * ln_nf).exp(), -t * ln_nf); // N^{-s}
    let mut value = acc.value() + n_pow_ms * nf / (s - 1.0) + 0.5 * n_pow_ms;

    let inv_n2 = 1.0 / (nf * nf);
    let mut rising = s; // ∏_{j=0}^{2k-2}(s+j), here for k=1
    let mut n_pow = n_pow_ms / nf; // N^{-s-(2k-1)}, here for k=1
    let mut last = 0.0;
    for (k, coef) in EM_COEF.iter().enumerate() {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            rising = rising * (s + j) * (s + (j + 1.0));
            n_pow *= inv_n2;
        }
        let term = coef * rising * n_pow;
        value += term;
        last = term.norm();
    }
    (value, last, f64::EPSILON * abs_acc.value())
}

/// Extended-precision twin of `em_pass`; same scheme in double-double.
fn em_pass_dd(sigma: f64, t: f64, n_main: usize) -> (Complex64, f64, f64) {
    let mut acc = CDd::from_f64(0.0, 0.0);
    for n in 1..n_main {
        let ln_n = Dd::from_f64(n as f64).ln();
        let r = ln_n.mul_f64(-sigma).exp();
        acc = acc.add(CDd::cis(ln_n.mul_f64(-t)).scale(r));
    }
    let s = CDd::from_f64(sigma, t);
    let nf = n_main as f64;
    let ln_nf = Dd::from_f64(nf).ln();
    let n_pow_ms = CDd::cis(ln_nf.mul_f64(-t)).scale(ln_nf.mul_f64(-sigma).exp());
    let s_minus_1 = CDd::from_f64(sigma - 1.0, t);
    let mut value = acc
        .add(n_pow_ms.scale(Dd::from_f64(nf)).div(s_minus_1))
        .add(n_pow_ms.scale(Dd::from_f64(0.5)));

    let inv_n2 = Dd::ONE.div(Dd::from_f64(nf).mul(Dd::from_f64(nf)));
    let mut rising = s;
    let mut n_pow = n_pow_ms.scale(Dd::ONE.div(Dd::from_f64(nf)));
    let mut last = 0.0;
    for (k, coef) in EM_COEF.iter().enumerate() {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            let s_j = CDd::new(s.re.add_f64(j), s.im);
            let s_j1 = CDd::new(s.re.add_f64(j + 1.0), s.im);
            rising = rising.mul(s_j).mul(s_j1);
            n_pow = n_pow.scale(inv_n2);
        }
        let term = rising.mul(n_pow).scale(Dd::from_f64(*coef));
        value = value.add(term);
        last = term.to_c64().norm();
    }
    // conversion to f64 output re-rounds; floor at one ulp of the modulus
    let v = value.to_c64();
    (v, last, v.norm() * f64::EPSILON * 0.5)
}

/// Riemann–Siegel theta: θ(t) = Im log Γ(1/4 + it/2) − (t/2) log π.
/// Stirling with recurrence shift; absolute accuracy ~1e-12 over |t| ≤ 10⁷.
pub fn rs_theta(t: f64) -> f64 {
    let lg = log_gamma(Complex64::new(0.25, 0.5 * t));
    lg.im - 0.5 * t * std::f64::consts::PI.ln()
}

// B_{2k}/((2k)(2k-1)) for the Stirling series.
const STIRLING_COEF: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Principal-branch log Γ for Re z > 0: argument shifted until |z| ≥ 12,
/// then the Stirling series.
pub fn log_gamma(mut z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0, "log_gamma needs Re z > 0");
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let z_inv = 1.0 / z;
    let z_inv2 = z_inv * z_inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut zp = z_inv;
    for c in STIRLING_COEF {
        series += c * zp;
        zp *= z_inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series + shift
}

/// Hardy Z-function Z(t) = e^{iθ(t)} ζ(1/2 + it). The imaginary part of the
/// returned value is a diagnostic: for exact arithmetic it would vanish.
pub fn hardy_z(t: f64, tol: f64) -> Result<EvalResult> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(LabError::InvalidParameter(format!(
            "hardy_z needs t >= 0, got {t}"
        )));
    }
    let zeta = eval_zeta(ZetaPoint { sigma: 0.5, t }, tol)?;
    let theta = rs_theta(t);
    let value = Complex64::from_polar(1.0, theta) * zeta.value;
    // rotation keeps the zeta error; theta carries ~1e-12 absolute slack
    let err = zeta.err + zeta.value.norm() * 1e-12;
    Ok(EvalResult { value, err })
}

/// ζ(1 + 1/log T + i alpha): the 1-line evaluations that the envelope
/// function g majorizes.
pub fn eval_zeta_one_line(alpha: f64, t_param: f64) -> Result<EvalResult> {
    if !(t_param.is_finite() && t_param >= 16.0) {
        return Err(LabError::InvalidParameter(format!(
            "one-line evaluation needs T >= 16, got {t_param}"
        )));
    }
    let sigma = 1.0 + 1.0 / t_param.ln();
    eval_zeta(ZetaPoint { sigma, t: alpha }, 1e-10)
}

/// ζ(sigma + i t_k) for a whole equispaced grid, sharing the phase-recurrence
/// kernel for the main sums; a fixed N (from the largest |s| on the grid)
/// keeps every point on the same correction formula. Errors are per-point
/// heuristics exactly as in `eval_zeta`.
pub fn zeta_batch(sigma: f64, grid: &Grid, tol: f64) -> Result<Vec<EvalResult>> {
    let t_last = grid.t0 + (grid.count - 1) as f64 * grid.dt;
    let straddles = grid.t0 <= 0.0 && t_last >= 0.0;
    let t_min_abs = if straddles { 0.0 } else { grid.t0.abs().min(t_last.abs()) };
    let t_max_abs = grid.t0.abs().max(t_last.abs());
    validate(ZetaPoint { sigma, t: t_min_abs }, tol)?;
    validate(ZetaPoint { sigma, t: t_max_abs }, tol)?;

    // the last correction grows with |s|, so the grid edge decides N
    let s_mod_max = (sigma * sigma + t_max_abs * t_max_abs).sqrt();
    let mut n = ((s_mod_max / 2.0).ceil() as usize).max(32);
    let mut sized = false;
    for _ in 0..=MAX_DOUBLINGS {
        let (_, worst_last) = em_tail(sigma, t_max_abs, n);
        if 4.0 * worst_last <= tol {
            sized = true;
            break;
        }
        n *= 2;
    }
    if !sized {
        return Err(LabError::Numerical(format!(
            "batch Euler-Maclaurin did not reach tol {tol:e} at sigma = {sigma}"
        )));
    }
    if (n as f64) * (grid.count as f64) > 2.0e11 {
        return Err(LabError::Capacity(format!(
            "zeta batch would need {n} terms x {} points",
            grid.count
        )));
    }
    let coeffs: Vec<f64> = (1..n).map(|k| (k as f64).powf(-sigma)).collect();
    let mains = phase_kernel(&coeffs, grid);
    let abs_sum: f64 = coeffs.iter().sum();
    Ok(mains
        .par_iter()
        .enumerate()
        .map(|(k, &main)| {
            let t = grid.t0 + k as f64 * grid.dt;
            let (tail, last) = em_tail(sigma, t, n);
            EvalResult {
                value: main + tail,
                err: 4.0 * last + 4.0 * f64::EPSILON * abs_sum,
            }
        })
        .collect())
}

/// Tail of the Euler–Maclaurin formula beyond the direct sum of N-1 terms:
/// integral term, half term, and the Bernoulli corrections. Returns
/// (tail value, magnitude of last correction).
fn em_tail(sigma: f64, t: f64, n_main: usize) -> (Complex64, f64) {
    let s = Complex64::new(sigma, t);
    let nf = n_main as f64;
    let ln_nf = nf.ln();
    let n_pow_ms = Complex64::from_polar((-sigma * ln_nf).exp(), -t * ln_nf);
    let mut tail = n_pow_ms * nf / (s - 1.0) + 0.5 * n_pow_ms;
    let inv_n2 = 1.0 / (nf * nf);
    let mut rising = s;
    let mut n_pow = n_pow_ms / nf;
    let mut last = 0.0;
    for (k, coef) in EM_COEF.iter().enumerate() {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            rising = rising * (s + j) * (s + (j + 1.0));
            n_pow *= inv_n2;
        }
        let term = coef * rising * n_pow;
        tail += term;
        last = term.norm();
    }
    (tail, last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    const ZETA_HALF: f64 = -1.4603545088095868;

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let r = eval_zeta(ZetaPoint { sigma: 2.0, t: 0.0 }, 1e-12).unwrap();
        let expect = std::f64::consts::PI.powi(2) / 6.0;
        assert!(
            (r.value.re - expect).abs() < 1e-12 && r.value.im.abs() < 1e-12,
            "got {}, expect {expect}",
            r.value
        );
    }

    #[test]
    fn zeta_at_half_matches_pin() {
        let r = eval_zeta(ZetaPoint { sigma: 0.5, t: 0.0 }, 1e-12).unwrap();
        assert!(
            (r.value.re - ZETA_HALF).abs() < 1e-11,
            "got {}, expect {ZETA_HALF}",
            r.value.re
        );
    }

    #[test]
    fn conjugate_symmetry_at_first_zero_ordinate() {
        let t = 14.1347251417;
        let plus = eval_zeta(ZetaPoint { sigma: 0.5, t }, 1e-12).unwrap();
        let minus = eval_zeta(ZetaPoint { sigma: 0.5, t: -t }, 1e-12).unwrap();
        let diff = (minus.value - plus.value.conj()).norm();
        assert!(
            diff <= 2.0 * (plus.err + minus.err) + 1e-15,
            "conjugate mismatch {diff:e}"
        );
    }

    #[test]
    fn frozen_reference_points() {
        // 30-digit references at exact f64 inputs
        let pins = [
            (0.5, 50.0, -0.08171210832097998, 0.3307921940386613),
            (0.5, 100.0, 2.692619885681324, -0.020386029602598162),
            (0.75, 25.0, 0.2796807333499227, 0.07625508417858876),
            (1.5, 7.7, 1.1162232429301185, 0.21058121335363688),
            (2.0, 33.0, 0.7917221514769707, 0.20321687393514391),
            (1.1, 0.0, 10.58444846495080095098, 0.0),
        ];
        for (sigma, t, re, im) in pins {
            let r = eval_zeta(ZetaPoint { sigma, t }, 1e-12).unwrap();
            let diff = (r.value - Complex64::new(re, im)).norm();
            assert!(diff < 1e-10, "sigma={sigma} t={t}: diff {diff:e}");
        }
    }

    #[test]
    fn agrees_with_eta_oracle() {
        for (sigma, t) in [(0.5, 3.0), (0.5, 77.0), (0.9, 21.0), (1.3, 130.0), (2.5, 55.0)] {
            let em = eval_zeta(ZetaPoint { sigma, t }, 1e-12).unwrap();
            let eta = oracle::zeta_eta(Complex64::new(sigma, t)).unwrap();
            let diff = (em.value - eta).norm();
            assert!(diff < 1e-10, "sigma={sigma} t={t}: diff {diff:e}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            eval_zeta(ZetaPoint { sigma: 0.4, t: 5.0 }, 1e-10),
            Err(LabError::InvalidParameter(_))
        ));
        assert!(matches!(
            eval_zeta(ZetaPoint { sigma: 1.0, t: 0.0 }, 1e-10),
            Err(LabError::Domain(_))
        ));
        assert!(matches!(
            eval_zeta(ZetaPoint { sigma: 1.0, t: 5e-9 }, 1e-10),
            Err(LabError::Domain(_))
        ));
        assert!(matches!(
            eval_zeta(ZetaPoint { sigma: 0.5, t: 2e7 }, 1e-10),
            Err(LabError::Domain(_))
        ));
        assert!(matches!(
            eval_zeta(ZetaPoint { sigma: 0.5, t: 5.0 }, 0.0),
            Err(LabError::InvalidParameter(_))
        ));
    }

    #[test]
    fn theta_matches_frozen_values() {
        assert_eq!(rs_theta(0.0), 0.0);
        let pins = [
            (5.0, -3.459620375363462533185),
            (14.134725141734694, -1.728670246675837491555),
            (100.0, 87.97216523178721962548),
            (1000.0, 2034.546428038031608703),
        ];
        for (t, expect) in pins {
            let got = rs_theta(t);
            assert!(
                (got - expect).abs() < 1e-9,
                "theta({t}): got {got}, expect {expect}"
            );
        }
    }

    #[test]
    fn hardy_z_at_zero_matches_zeta_half() {
        let z = hardy_z(0.0, 1e-12).unwrap();
        assert!(
            (z.value.norm() - ZETA_HALF.abs()).abs() < 1e-10,
            "got |Z(0)| = {}",
            z.value.norm()
        );
    }

    #[test]
    fn hardy_z_vanishes_at_first_zero() {
        let z = hardy_z(14.1347251417, 1e-12).unwrap();
        assert!(z.value.norm() < 1e-6, "got |Z| = {:e}", z.value.norm());
    }

    #[test]
    fn hardy_z_modulus_matches_zeta_modulus() {
        let t = 50.0;
        let z = hardy_z(t, 1e-12).unwrap();
        let zeta = eval_zeta(ZetaPoint { sigma: 0.5, t }, 1e-12).unwrap();
        let diff = (z.value.norm() - zeta.value.norm()).abs();
        assert!(diff <= 2.0 * (z.err + zeta.err), "modulus diff {diff:e}");
    }

    #[test]
    fn hardy_z_is_real_on_a_sample() {
        for k in 0..40 {
            let t = 10.0 + 25.0 * k as f64;
            let z = hardy_z(t, 1e-11).unwrap();
            let bound = (1e-8f64).max(2.0 * z.err);
            assert!(
                z.value.im.abs() <= bound,
                "t={t}: Im Z = {:e} vs bound {bound:e}",
                z.value.im
            );
        }
    }

    #[test]
    fn first_zero_located_by_bisection() {
        let zf = |t: f64| hardy_z(t, 1e-12).unwrap().value.re;
        let (mut lo, mut hi) = (14.0, 14.3);
        assert!(zf(lo) * zf(hi) < 0.0, "no sign change on [14, 14.3]");
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if zf(lo) * zf(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        let expect = 14.134725141734694;
        assert!(
            (root - expect).abs() < 1e-8,
            "got {root}, expect {expect}"
        );
    }

    #[test]
    fn one_line_value_at_alpha_zero() {
        let t_param = (10.0f64).exp();
        let r = eval_zeta_one_line(0.0, t_param).unwrap();
        assert!(
            (r.value.re - 10.58444846495080095098).abs() < 1e-8,
            "got {}",
            r.value.re
        );
        // measured 1-line constant: |zeta(1+1/log T)| / log T stays near 1
        let k = r.value.norm() / t_param.ln();
        assert!(k > 0.5 && k < 2.0, "measured one-line constant {k}");
    }

    #[test]
    fn one_line_large_alpha_stays_small() {
        let t_param = (10.0f64).exp();
        let r = eval_zeta_one_line(1e6, t_param).unwrap();
        let cap = 10.0 * (1e6f64).ln().ln().ln();
        assert!(r.value.norm() <= cap, "got {}, cap {cap}", r.value.norm());
        assert!(matches!(
            eval_zeta_one_line(0.0, 2.0),
            Err(LabError::InvalidParameter(_))
        ));
    }

    #[test]
    fn series_consistency_for_sigma_beyond_three_halves() {
        for (sigma, t) in [(1.5, 12.0), (2.0, 40.0), (3.0, 5.0)] {
            let s = Complex64::new(sigma, t);
            let em = eval_zeta(ZetaPoint { sigma, t }, 1e-12).unwrap();
            let direct = oracle::zeta_series_tail(s, 200_000);
            let slack = (200_000f64).powf(-sigma) + em.err;
            assert!(
                (em.value - direct).norm() < slack,
                "sigma={sigma} t={t}: diff {:e}",
                (em.value - direct).norm()
            );
        }
    }

    #[test]
    fn extended_mode_refines_double() {
        for (sigma, t) in [(0.5, 50.0), (0.5, 100.0), (2.0, 33.0)] {
            let dd = eval_zeta_with(ZetaPoint { sigma, t }, 1e-22, PrecisionMode::Extended).unwrap();
            let eta = oracle::zeta_eta(Complex64::new(sigma, t)).unwrap();
            let diff = (dd.value - eta).norm();
            // both sides are ~1e-13 accurate references here
            assert!(diff < 5e-13, "sigma={sigma} t={t}: diff {diff:e}");
            let double = eval_zeta(ZetaPoint { sigma, t }, 1e-12).unwrap();
            assert!((dd.value - double.value).norm() < 1e-11);
        }
    }

    #[test]
    fn batch_matches_pointwise_eval() {
        let grid = Grid::new(900.0, 0.37, 64).unwrap();
        let batch = zeta_batch(0.5, &grid, 1e-10).unwrap();
        for k in [0usize, 17, 40, 63] {
            let t = grid.t0 + k as f64 * grid.dt;
            let single = eval_zeta(ZetaPoint { sigma: 0.5, t }, 1e-10).unwrap();
            let diff = (batch[k].value - single.value).norm();
            assert!(diff < 1e-9, "k={k}: diff {diff:e}");
        }
    }
}
