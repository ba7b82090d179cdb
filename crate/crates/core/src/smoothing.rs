//! The compactly supported cutoff Φ_U, its derivatives, and its Mellin
//! transform. Φ_U is built from the classical exp(−1/y) smooth step: it is
//! exactly 0 outside (0,1), exactly 1 on [1/U, 1−1/U], and C^∞ everywhere,
//! so the transform decays faster than any power along vertical lines.

use crate::bounds::BoundReport;
use crate::error::{LabError, Result};
use crate::kahan::KahanSum;
use crate::quad::TanhSinh;
use num_complex::Complex64;

/// Immutable cutoff parameters. `c_exponent` records the sharpness law
/// U = (log T)^C that produced `u`; evaluation depends on `u` alone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothCutoff {
    pub u: f64,
    pub c_exponent: f64,
}

pub fn build_cutoff(u: f64, c_exponent: f64) -> Result<SmoothCutoff> {
    if !(u.is_finite() && u > 2.0) {
        return Err(LabError::InvalidParameter(format!("sharpness must exceed 2, got {u}")));
    }
    if !(c_exponent.is_finite() && c_exponent >= 1.0) {
        return Err(LabError::InvalidParameter(format!("sharpness exponent must be >= 1, got {c_exponent}")));
    }
    Ok(SmoothCutoff { u, c_exponent })
}

/// exp(−1/y) continued by 0; smooth at the junction.
fn bump(y: f64) -> f64 {
    if y > 0.0 { (-1.0 / y).exp() } else { 0.0 }
}

fn bump_d1(y: f64) -> f64 {
    if y > 0.0 { bump(y) / (y * y) } else { 0.0 }
}

fn bump_d2(y: f64) -> f64 {
    if y > 0.0 {
        let y2 = y * y;
        bump(y) * (1.0 / (y2 * y2) - 2.0 / (y2 * y))
    } else {
        0.0
    }
}

/// Smooth step: 0 for y <= 0, 1 for y >= 1, strictly increasing between.
fn step(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else if y >= 1.0 {
        1.0
    } else {
        let a = bump(y);
        a / (a + bump(1.0 - y))
    }
}

fn step_d1(y: f64) -> f64 {
    if y <= 0.0 || y >= 1.0 {
        return 0.0;
    }
    let (a, b) = (bump(y), bump(1.0 - y));
    let s = a + b;
    (bump_d1(y) * b + a * bump_d1(1.0 - y)) / (s * s)
}

fn step_d2(y: f64) -> f64 {
    if y <= 0.0 || y >= 1.0 {
        return 0.0;
    }
    let (a, b) = (bump(y), bump(1.0 - y));
    let s = a + b;
    let n = bump_d1(y) * b + a * bump_d1(1.0 - y);
    let n_d = bump_d2(y) * b - a * bump_d2(1.0 - y);
    let s_d = bump_d1(y) - bump_d1(1.0 - y);
    n_d / (s * s) - 2.0 * n * s_d / (s * s * s)
}

impl SmoothCutoff {
    /// Φ_U(x) = h(Ux) h(U(1−x)).
    pub fn eval(&self, x: f64) -> f64 {
        step(self.u * x) * step(self.u * (1.0 - x))
    }

    fn d1(&self, x: f64) -> f64 {
        let (p, q) = (step(self.u * x), step(self.u * (1.0 - x)));
        self.u * (step_d1(self.u * x) * q - p * step_d1(self.u * (1.0 - x)))
    }

    fn d2(&self, x: f64) -> f64 {
        let (p, q) = (step(self.u * x), step(self.u * (1.0 - x)));
        let cross = step_d1(self.u * x) * step_d1(self.u * (1.0 - x));
        self.u * self.u * (step_d2(self.u * x) * q - 2.0 * cross + p * step_d2(self.u * (1.0 - x)))
    }
}

/// Central-difference weights for orders 3 to 6; spacing is chosen per
/// order to balance truncation against cancellation in double precision.
fn stencil(cutoff: &SmoothCutoff, x: f64, j: usize) -> f64 {
    let d = 1e-16f64.powf(1.0 / (j as f64 + 2.0)) / cutoff.u;
    let f = |k: i32| cutoff.eval(x + k as f64 * d);
    match j {
        3 => (f(2) - 2.0 * f(1) + 2.0 * f(-1) - f(-2)) / (2.0 * d.powi(3)),
        4 => (f(2) - 4.0 * f(1) + 6.0 * f(0) - 4.0 * f(-1) + f(-2)) / d.powi(4),
        5 => (f(3) - 4.0 * f(2) + 5.0 * f(1) - 5.0 * f(-1) + 4.0 * f(-2) - f(-3)) / (2.0 * d.powi(5)),
        6 => {
            (f(3) - 6.0 * f(2) + 15.0 * f(1) - 20.0 * f(0) + 15.0 * f(-1) - 6.0 * f(-2) + f(-3))
                / d.powi(6)
        }
        _ => unreachable!("caller screens the order"),
    }
}

/// Φ_U^{(j)}(x): closed nested forms for j <= 2, tuned stencils for 3..6.
pub fn eval_cutoff_derivative(cutoff: &SmoothCutoff, x: f64, j: usize) -> Result<f64> {
    if !x.is_finite() {
        return Err(LabError::InvalidParameter(format!("evaluation point must be finite, got {x}")));
    }
    match j {
        0 => Ok(cutoff.eval(x)),
        1 => Ok(cutoff.d1(x)),
        2 => Ok(cutoff.d2(x)),
        3..=6 => Ok(stencil(cutoff, x, j)),
        _ => Err(LabError::UnsupportedOrder(format!("derivative order {j} exceeds 6"))),
    }
}

/// One Mellin sample Φ̂_U(s) with its quadrature error.
#[derive(Clone, Copy, Debug)]
pub struct MellinValue {
    pub s: Complex64,
    pub value: Complex64,
    pub err: f64,
}

/// Φ̂_U(s) = ∫₀¹ Φ_U(x) x^{s−1} dx, split at the plateau edges so each
/// panel is free of interior kinks in the derivative profile.
pub fn mellin_transform(cutoff: &SmoothCutoff, s: Complex64) -> Result<MellinValue> {
    if !(s.re.is_finite() && s.im.is_finite() && s.re >= 0.5) {
        return Err(LabError::InvalidParameter(format!("Mellin argument needs Re(s) >= 1/2, got {s}")));
    }
    let integrand = |x: f64| {
        if x <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let phi = cutoff.eval(x);
        if phi == 0.0 {
            // also absorbs underflowed tails where x^{s-1} would blow up
            return Complex64::new(0.0, 0.0);
        }
        ((s - 1.0) * x.ln()).exp() * phi
    };
    let quad = TanhSinh::default();
    let edge = 1.0 / cutoff.u;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (a, b) in [(0.0, edge), (edge, 1.0 - edge), (1.0 - edge, 1.0)] {
        let panel = quad.integrate(a, b, integrand)?;
        value += panel.value;
        err += panel.err;
    }
    Ok(MellinValue { s, value, err })
}

/// Measured constant for the decay envelope |Φ̂_U(s)| <= K_i U^{i−1} (1+|s|)^{−i}:
/// lhs is the sample sup of |Φ̂_U(s)| (1+|s|)^i, rhs the claimed U^{i−1} scale.
pub fn decay_envelope_check(cutoff: &SmoothCutoff, i: usize, s_samples: &[Complex64]) -> Result<BoundReport> {
    if !(1..=4).contains(&i) {
        return Err(LabError::InvalidParameter(format!("envelope exponent must lie in 1..=4, got {i}")));
    }
    if s_samples.is_empty() {
        return Err(LabError::InvalidParameter("need at least one Mellin sample".into()));
    }
    let mut lhs: f64 = 0.0;
    for &s in s_samples {
        let m = mellin_transform(cutoff, s)?;
        lhs = lhs.max(m.value.norm() * (1.0 + s.norm()).powi(i as i32));
    }
    let rhs = cutoff.u.powi(i as i32 - 1);
    Ok(BoundReport::new(lhs, rhs, format!("mellin-decay(i={i}, U={})", cutoff.u)))
}

/// Mass lost to smoothing: Σ_{n<=Y} (1 − Φ_U(n/Y))². Only the two ramp
/// stretches contribute, so the value is O(Y/U).
pub fn diff_mass(y: f64, cutoff: &SmoothCutoff) -> f64 {
    assert!(y >= 1.0 && y.is_finite(), "sum length must be >= 1");
    let mut acc = KahanSum::new();
    for n in 1..=(y.floor() as u64) {
        let d = 1.0 - cutoff.eval(n as f64 / y);
        acc.add(d * d);
    }
    acc.value()
}
