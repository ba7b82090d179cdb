//! Quadrature kernels shared by the moment and Mellin paths: composite
//! trapezoid with deterministic pairwise reduction, the half-step refinement
//! pair behind every error estimate, and tanh-sinh panels for integrands
//! that decay at their endpoints.

use crate::error::{LabError, Result};
use crate::kahan::{pairwise_sum, pairwise_sum_complex};
use num_complex::Complex64;

/// Composite trapezoid on equispaced samples with spacing h.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    assert!(values.len() >= 2, "trapezoid needs at least two samples");
    let mut w = values.to_vec();
    let last = w.len() - 1;
    w[0] *= 0.5;
    w[last] *= 0.5;
    h * pairwise_sum(&w)
}

/// Complex twin of `trapezoid`.
pub fn trapezoid_complex(values: &[Complex64], h: f64) -> Complex64 {
    assert!(values.len() >= 2, "trapezoid needs at least two samples");
    let mut w = values.to_vec();
    let last = w.len() - 1;
    w[0] *= 0.5;
    w[last] *= 0.5;
    pairwise_sum_complex(&w) * h
}

/// Fine and coarse trapezoid values from one fine sampling; the coarse rule
/// keeps every other sample. `values.len()` must be odd so the coarse grid
/// hits both endpoints.
pub fn refine_pair(values: &[f64], h: f64) -> (f64, f64) {
    assert!(values.len() >= 3 && values.len() % 2 == 1, "refinement pair needs odd sample count");
    let fine = trapezoid(values, h);
    let coarse_vals: Vec<f64> = values.iter().copied().step_by(2).collect();
    let coarse = trapezoid(&coarse_vals, 2.0 * h);
    (fine, coarse)
}

/// Complex twin of `refine_pair`.
pub fn refine_pair_complex(values: &[Complex64], h: f64) -> (Complex64, Complex64) {
    assert!(values.len() >= 3 && values.len() % 2 == 1, "refinement pair needs odd sample count");
    let fine = trapezoid_complex(values, h);
    let coarse_vals: Vec<Complex64> = values.iter().copied().step_by(2).collect();
    let coarse = trapezoid_complex(&coarse_vals, 2.0 * h);
    (fine, coarse)
}

/// Tanh-sinh panel integrator. The variable change x = c + d tanh((pi/2) sinh u)
/// clusters nodes at both endpoints, so integrands vanishing there (to any
/// order) converge at machine accuracy in a handful of levels.
#[derive(Clone, Copy, Debug)]
pub struct TanhSinh {
    pub rel_tol: f64,
    /// Level m samples u on a grid of spacing 2^{-m-1}; each level doubles work.
    pub max_level: usize,
    /// Levels below this never satisfy the convergence test; guards against
    /// an oscillatory integrand aliasing to a spuriously stable value.
    pub min_level: usize,
}

impl Default for TanhSinh {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_level: 14, min_level: 5 }
    }
}

/// One converged panel: value, the last inter-level delta, and the level
/// at which the cascade stopped.
#[derive(Clone, Copy, Debug)]
pub struct PanelValue {
    pub value: Complex64,
    pub err: f64,
    pub level: usize,
}

const U_MAX: f64 = 4.0;

impl TanhSinh {
    /// ∫_a^b f(x) dx. Nodes are placed by their distance to the nearer
    /// endpoint, 1 - |tanh(w)| = 2/(e^{2|w|}+1), so deep levels keep full
    /// precision next to a singular endpoint instead of cancelling into it.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: F) -> Result<PanelValue> {
        assert!(a < b, "tanh-sinh needs a < b");
        let d = 0.5 * (b - a);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let sample = |u: f64| -> Complex64 {
            let w = half_pi * u.sinh();
            let s = 2.0 / ((2.0 * w.abs()).exp() + 1.0);
            let x = if u >= 0.0 { b - d * s } else { a + d * s };
            let ch = w.cosh();
            let weight = d * half_pi * u.cosh() / (ch * ch);
            f(x) * weight
        };

        let mut h = 0.5;
        let k_max = (U_MAX / h) as i64;
        let base: Vec<Complex64> = (-k_max..=k_max).map(|k| sample(k as f64 * h)).collect();
        let mut total = pairwise_sum_complex(&base) * h;
        for level in 1..=self.max_level {
            h *= 0.5;
            let k_max = (U_MAX / h) as i64;
            let odd: Vec<Complex64> = (-k_max..=k_max)
                .filter(|k| k % 2 != 0)
                .map(|k| sample(k as f64 * h))
                .collect();
            let refined = total * 0.5 + pairwise_sum_complex(&odd) * h;
            let delta = (refined - total).norm();
            total = refined;
            if level >= self.min_level && delta <= self.rel_tol * total.norm().max(1e-300) {
                return Ok(PanelValue { value: total, err: delta, level });
            }
        }
        Err(LabError::Numerical(format!(
            "tanh-sinh stalled on [{a}, {b}] after level {}",
            self.max_level
        )))
    }
}
