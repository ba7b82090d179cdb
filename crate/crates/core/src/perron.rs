//! Truncated Perron machinery: the vertical integral that reproduces a zeta
//! sum, its shift to the half line with two horizontal legs, the explicit
//! error terms R1 and R2, and measured residuals against the direct sum.
//!
//! The contour sits in the w-plane with the integrand ζ(w+it) Y^w / w. Its
//! pole at w = 1−it lies inside the rectangle whenever |t| < Y, so the shift
//! identity carries an explicit residue term Y^{1−it}/(1−it).

use crate::bounds::BoundReport;
use crate::dirichlet::{cis, zsum_direct, Grid, SumRequest};
use crate::error::{LabError, Result};
use crate::kahan::KahanSum;
use crate::quad::refine_pair_complex;
use crate::zeta::{eval_zeta, zeta_batch, EvalResult, ZetaPoint};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Accuracy requested from zeta evaluations inside the legs.
const ZETA_TOL: f64 = 1e-9;

/// The pole may not sit this close to a horizontal leg.
const POLE_CLEARANCE: f64 = 0.25;

/// Sigma panels on each horizontal leg (fine grid; refinement halves it).
const HORIZ_PANELS: usize = 64;

/// Truncation height and sum length Y with the ordinate shift t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerronConfig {
    pub y: f64,
    pub t: f64,
}

impl PerronConfig {
    pub fn new(y: f64, t: f64) -> Result<Self> {
        if !(y.is_finite() && y >= 10.0) {
            return Err(LabError::InvalidParameter(format!("truncation length must be >= 10, got {y}")));
        }
        if !t.is_finite() {
            return Err(LabError::InvalidParameter(format!("ordinate shift must be finite, got {t}")));
        }
        Ok(Self { y, t })
    }

    /// Abscissa of absolute convergence used throughout: 1 + 1/log Y.
    pub fn c(&self) -> f64 {
        1.0 + 1.0 / self.y.ln()
    }
}

/// The contour pieces after shifting to the half line. `legs_total` should
/// reproduce the truncated vertical integral within quadrature error.
#[derive(Clone, Copy, Debug)]
pub struct ContourPieces {
    /// (1/2π) ∫_{−Y}^{Y} ζ(1/2+i(u+t)) Y^{1/2+iu}/(1/2+iu) du.
    pub vertical_half: Complex64,
    /// Oriented leg at Im w = −Y.
    pub horiz_lower: Complex64,
    /// Oriented leg at Im w = +Y.
    pub horiz_upper: Complex64,
    /// Y^{1−it}/(1−it) when the pole is inside the rectangle, else 0.
    pub residue: Complex64,
    pub r1: f64,
    pub r2: f64,
    pub quad_err: f64,
}

impl ContourPieces {
    pub fn legs_total(&self) -> Complex64 {
        self.vertical_half + self.horiz_lower + self.horiz_upper + self.residue
    }
}

/// (1/2π) ∫_{−Y}^{Y} ζ(σ+i(u+t)) Y^{σ+iu}/(σ+iu) du with the shared step
/// policy; the error folds the refinement delta with the zeta estimates.
fn vertical_line(cfg: &PerronConfig, sigma: f64) -> Result<(Complex64, f64)> {
    let ln_y = cfg.y.ln();
    let rule = (1.0 / (4.0 * ln_y)).min(0.05);
    let n = ((2.0 * cfg.y) / rule).ceil().max(8.0) as usize;
    let half = cfg.y / n as f64;
    let count = 2 * n + 1;
    let grid = Grid::new(cfg.t - cfg.y, half, count)?;
    let zs = zeta_batch(sigma, &grid, ZETA_TOL)?;
    let y_sig = cfg.y.powf(sigma);
    let mut vals = Vec::with_capacity(count);
    let mut zeta_err = KahanSum::new();
    for (k, z) in zs.iter().enumerate() {
        let u = k as f64 * half - cfg.y;
        let kernel = y_sig * cis(u * ln_y) / Complex64::new(sigma, u);
        vals.push(z.value * kernel);
        let w = if k == 0 || k + 1 == count { 0.5 } else { 1.0 };
        zeta_err.add(w * half * z.err * kernel.norm());
    }
    let (fine, coarse) = refine_pair_complex(&vals, half);
    let delta = (fine - coarse).norm();
    if delta > 0.05 * fine.norm().max(f64::MIN_POSITIVE) {
        return Err(LabError::NonConvergence {
            context: format!("perron-vertical(sigma={sigma}, Y={}, t={})", cfg.y, cfg.t),
            coarse: coarse.norm(),
            fine: fine.norm(),
        });
    }
    Ok((fine / TAU, (delta + zeta_err.value()) / TAU))
}

/// Oriented horizontal leg at Im w = ±Y, already carrying its traversal
/// direction: the lower leg runs outward (+i factor), the upper leg back.
fn horizontal_leg(cfg: &PerronConfig, upper: bool) -> Result<(Complex64, f64)> {
    let c = cfg.c();
    let sign = if upper { 1.0 } else { -1.0 };
    let ordinate = cfg.t + sign * cfg.y;
    let h = (c - 0.5) / HORIZ_PANELS as f64;
    let phase = cis(sign * cfg.y * cfg.y.ln());
    let mut vals = Vec::with_capacity(HORIZ_PANELS + 1);
    let mut zeta_err = KahanSum::new();
    for j in 0..=HORIZ_PANELS {
        let sigma = 0.5 + j as f64 * h;
        let z = eval_zeta(ZetaPoint::new(sigma, ordinate)?, ZETA_TOL)?;
        let kernel = cfg.y.powf(sigma) * phase / Complex64::new(sigma, sign * cfg.y);
        vals.push(z.value * kernel);
        let w = if j == 0 || j == HORIZ_PANELS { 0.5 } else { 1.0 };
        zeta_err.add(w * h * z.err * kernel.norm());
    }
    let (fine, coarse) = refine_pair_complex(&vals, h);
    let delta = (fine - coarse).norm();
    if delta > 0.05 * fine.norm().max(1e-9) {
        return Err(LabError::NonConvergence {
            context: format!("perron-horizontal(Y={}, t={}, upper={upper})", cfg.y, cfg.t),
            coarse: coarse.norm(),
            fine: fine.norm(),
        });
    }
    let orient = Complex64::new(0.0, -sign);
    Ok((orient * fine / TAU, (delta + zeta_err.value()) / TAU))
}

/// The truncated Perron integral (1/2πi) ∫ ζ(s+it) Y^s/s ds along
/// Re s = 1 + 1/log Y, |Im s| ≤ Y.
pub fn truncated_vertical(cfg: &PerronConfig) -> Result<EvalResult> {
    let (value, err) = vertical_line(cfg, cfg.c())?;
    Ok(EvalResult { value, err })
}

/// Shift to the half line: both horizontal legs, the σ = 1/2 segment, the
/// pole residue, and the explicit error terms.
pub fn contour_decomposition(cfg: &PerronConfig) -> Result<ContourPieces> {
    if (cfg.t.abs() - cfg.y).abs() < POLE_CLEARANCE {
        return Err(LabError::Domain(format!(
            "pole at w = 1 - it sits within {POLE_CLEARANCE} of a horizontal leg; move t away from ±Y"
        )));
    }
    let (horiz_lower, e_lower) = horizontal_leg(cfg, false)?;
    let (vertical_half, e_half) = vertical_line(cfg, 0.5)?;
    let (horiz_upper, e_upper) = horizontal_leg(cfg, true)?;
    let residue = if cfg.t.abs() < cfg.y {
        cfg.y * cis(-cfg.t * cfg.y.ln()) / Complex64::new(1.0, -cfg.t)
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(ContourPieces {
        vertical_half,
        horiz_lower,
        horiz_upper,
        residue,
        r1: r1_bound(cfg),
        r2: r2_bound(cfg)?,
        quad_err: e_lower + e_half + e_upper,
    })
}

/// R1 = Σ_{Y/2 < n < 2Y, n≠Y} min(1, 1/|n−Y|); O(log Y), exactly summable.
pub fn r1_bound(cfg: &PerronConfig) -> f64 {
    let y = cfg.y;
    let lo = (y / 2.0).floor() as u64 + 1;
    let hi = (2.0 * y).ceil() as u64 - 1;
    let mut acc = KahanSum::new();
    for n in lo..=hi {
        let d = (n as f64 - y).abs();
        if d == 0.0 {
            continue;
        }
        acc.add((1.0 / d).min(1.0));
    }
    acc.value()
}

/// R2 = (4^c + Y^c)/Y · ζ(c) at c = 1 + 1/log Y; O(log Y).
pub fn r2_bound(cfg: &PerronConfig) -> Result<f64> {
    let c = cfg.c();
    let z = eval_zeta(ZetaPoint::new(c, 0.0)?, 1e-12)?;
    Ok((4f64.powf(c) + cfg.y.powf(c)) / cfg.y * z.value.re)
}

/// Measured |direct sum − truncated vertical| against the R1 + R2 envelope.
pub fn perron_residual(cfg: &PerronConfig) -> Result<BoundReport> {
    let direct = zsum_direct(SumRequest::new(cfg.y, cfg.t)?);
    let v = truncated_vertical(cfg)?;
    let lhs = (direct - v.value).norm();
    let rhs = r1_bound(cfg) + r2_bound(cfg)?;
    Ok(BoundReport::new(lhs, rhs, format!("perron(Y={}, t={})", cfg.y, cfg.t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(y: f64, t: f64) -> PerronConfig {
        PerronConfig::new(y, t).unwrap()
    }

    #[test]
    fn config_guards() {
        assert!(PerronConfig::new(5.0, 0.0).is_err());
        assert!(PerronConfig::new(f64::NAN, 0.0).is_err());
        assert!(PerronConfig::new(10.5, f64::INFINITY).is_err());
        assert!((cfg(10.5, 0.0).c() - (1.0 + 1.0 / 10.5f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn pole_clearance_is_enforced() {
        assert!(matches!(contour_decomposition(&cfg(10.5, 10.5)), Err(LabError::Domain(_))));
        assert!(matches!(contour_decomposition(&cfg(10.5, -10.4)), Err(LabError::Domain(_))));
        assert!(contour_decomposition(&cfg(10.5, 9.0)).is_ok());
    }

    #[test]
    fn r1_matches_hand_enumeration() {
        // Y = 10.5: n runs over 6..=20, distances 4.5, 3.5, ... capped at 1
        let by_hand = 2.0 * (1.0 / 4.5 + 1.0 / 3.5 + 1.0 / 2.5 + 1.0 / 1.5)
            + 2.0
            + (1.0 / 5.5 + 1.0 / 6.5 + 1.0 / 7.5 + 1.0 / 8.5 + 1.0 / 9.5);
        let got = r1_bound(&cfg(10.5, 0.0));
        assert!((got - by_hand).abs() <= 1e-12, "got {got}, hand {by_hand}");
        // frozen exact rational value
        assert!((got - 5.8411142349222844).abs() <= 1e-12);
    }

    #[test]
    fn r1_regression_and_scaling() {
        let got = r1_bound(&cfg(100.5, 0.0));
        assert!((got - 10.444234075553084).abs() <= 1e-12 * got, "got {got}");
        let per_log = got / 100.5f64.ln();
        assert!((0.5..4.0).contains(&per_log), "per_log {per_log}");
        // integer Y skips the singular term and stays finite
        let int_y = r1_bound(&cfg(20.0, 0.0));
        assert!(int_y.is_finite() && int_y > 0.0);
    }

    #[test]
    fn r2_regression_pins() {
        let pins = [(10.5, 10.074878772058956), (100.5, 14.422777035118639), (1000.5, 20.412620833032157)];
        for (y, expect) in pins {
            let got = r2_bound(&cfg(y, 0.0)).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect, "Y={y}: got {got}");
            let per_log = got / y.ln();
            assert!((0.5..30.0).contains(&per_log), "Y={y}: per_log {per_log}");
        }
        // the log-normalized value plateaus rather than growing
        let lo = r2_bound(&cfg(10.5, 0.0)).unwrap() / 10.5f64.ln();
        let hi = r2_bound(&cfg(1000.5, 0.0)).unwrap() / 1000.5f64.ln();
        let swing = (lo / hi).max(hi / lo);
        assert!(swing < 4.0, "swing {swing}");
    }

    #[test]
    fn vertical_integral_tracks_the_direct_sum() {
        let v = truncated_vertical(&cfg(10.5, 0.0)).unwrap();
        assert!((v.value - Complex64::new(10.0, 0.0)).norm() <= 10.0 * 10.5f64.ln(), "{}", v.value);
        let c = cfg(100.5, 20.0);
        let v = truncated_vertical(&c).unwrap();
        let direct = zsum_direct(SumRequest::new(100.5, 20.0).unwrap());
        assert!((v.value - direct).norm() <= 10.0 * 100.5f64.ln(), "gap {}", (v.value - direct).norm());
    }

    #[test]
    fn conjugate_symmetry_under_ordinate_flip() {
        let plus = truncated_vertical(&cfg(10.5, 5.0)).unwrap();
        let minus = truncated_vertical(&cfg(10.5, -5.0)).unwrap();
        let gap = (minus.value - plus.value.conj()).norm();
        assert!(gap <= plus.err + minus.err + 1e-9 * plus.value.norm(), "gap {gap:e}");

        let p = contour_decomposition(&cfg(10.5, 5.0)).unwrap();
        let m = contour_decomposition(&cfg(10.5, -5.0)).unwrap();
        let tol = p.quad_err + m.quad_err + 1e-9;
        assert!((m.vertical_half - p.vertical_half.conj()).norm() <= tol);
        assert!((m.horiz_lower - p.horiz_upper.conj()).norm() <= tol);
        assert!((m.horiz_upper - p.horiz_lower.conj()).norm() <= tol);
        assert!((m.residue - p.residue.conj()).norm() <= 1e-12 * p.residue.norm());
    }

    #[test]
    fn contour_identity_with_residue() {
        for t in [0.0, 5.0] {
            let c = cfg(10.5, t);
            let v = truncated_vertical(&c).unwrap();
            let pieces = contour_decomposition(&c).unwrap();
            let gap = (v.value - pieces.legs_total()).norm();
            let budget = 3.0 * (v.err + pieces.quad_err);
            assert!(gap <= budget, "t={t}: gap {gap:e} vs budget {budget:e}");
            assert!(pieces.r1 > 0.0 && pieces.r2 > 0.0);
        }
    }

    #[test]
    fn residue_switches_off_outside_the_rectangle() {
        let inside = contour_decomposition(&cfg(10.5, 5.0)).unwrap();
        assert!(inside.residue.norm() > 1.0);
        let outside = contour_decomposition(&cfg(10.5, 30.0)).unwrap();
        assert_eq!(outside.residue, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn legs_have_modest_moduli() {
        let pieces = contour_decomposition(&cfg(10.5, 5.0)).unwrap();
        for (name, leg) in [("lower", pieces.horiz_lower), ("upper", pieces.horiz_upper)] {
            assert!(leg.norm().is_finite() && leg.norm() < 50.0, "{name}: {}", leg.norm());
        }
        assert!(pieces.vertical_half.norm() <= 5.0 * 10.5f64.sqrt());
    }

    #[test]
    fn residual_ratio_is_small() {
        for (y, t) in [(10.5, 0.0), (100.5, 20.0)] {
            let report = perron_residual(&cfg(y, t)).unwrap();
            assert!(report.ratio <= 10.0, "(Y={y}, t={t}): ratio {}", report.ratio);
        }
    }
}
