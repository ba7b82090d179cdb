//! Reference evaluations kept independent of the production paths so the two
//! can check each other. Everything here is deliberately simple and slow;
//! nothing in this module is called from a performance kernel.

use crate::error::{LabError, Result};
use num_complex::Complex64;

/// Largest |Im s| the accelerated alternating series handles before its
/// Chebyshev weights overflow f64.
pub const ETA_T_MAX: f64 = 300.0;

/// ζ(s) through the alternating series η(s) = Σ (−1)^{n−1} n^{−s} with
/// Borwein's Chebyshev acceleration, then ζ(s) = η(s)/(1 − 2^{1−s}).
///
/// The truncation error is below 3(1+2|t|)e^{π|t|/2}/(3+√8)^n for σ ≥ 1/2,
/// so the term count n grows linearly in |t|; it is chosen here so the bound
/// sits under 1e-12. This shares no code with the Euler–Maclaurin evaluator.
pub fn zeta_eta(s: Complex64) -> Result<Complex64> {
    let (sigma, t) = (s.re, s.im);
    if sigma < 0.5 {
        return Err(LabError::InvalidParameter(format!(
            "eta oracle needs sigma >= 1/2, got {sigma}"
        )));
    }
    if t.abs() > ETA_T_MAX {
        return Err(LabError::Domain(format!(
            "eta oracle limited to |t| <= {ETA_T_MAX}, got {t}"
        )));
    }
    // 1 - 2^{1-s} vanishes at s=1 (the pole) and is tiny near the other
    // zeros of the eta denominator on sigma=1; refuse rather than divide.
    let den = Complex64::new(1.0, 0.0) - (Complex64::new(1.0 - sigma, -t) * std::f64::consts::LN_2).exp();
    if den.norm() < 1e-3 {
        return Err(LabError::Domain(format!(
            "eta denominator 1-2^(1-s) too small at s = {sigma}+{t}i"
        )));
    }

    let n = 28 + (0.9 * t.abs() + (1.0 + 2.0 * t.abs()).ln()).ceil() as usize;
    // d_k = n Σ_{i≤k} w_i with w_0 = 1/n and the ratio below; d_n ~ (3+√8)^n/2
    let mut w = vec![0.0f64; n + 1];
    w[0] = 1.0 / n as f64;
    for i in 1..=n {
        let (nf, i_f) = (n as f64, i as f64);
        w[i] = w[i - 1] * 4.0 * (nf + i_f - 1.0) * (nf - i_f + 1.0) / ((2.0 * i_f) * (2.0 * i_f - 1.0));
    }
    let mut d = vec![0.0f64; n + 1];
    let mut acc = 0.0;
    for i in 0..=n {
        acc += w[i];
        d[i] = n as f64 * acc;
    }
    let dn = d[n];

    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let coef = (d[k] - dn) / dn; // in [-1, 0)
        let kp1 = (k + 1) as f64;
        let term = coef * (-s * kp1.ln()).exp();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let eta = -sum;
    Ok(eta / den)
}

/// Truncated Dirichlet series with an integral tail: Σ_{n≤N} n^{−s} +
/// N^{1−s}/(s−1). The first omitted correction is N^{−s}/2, so the result
/// carries an intrinsic error near N^{−σ}/2; callers compare against that.
/// Useful only for σ ≥ 1.5 where the tail is benign.
pub fn zeta_series_tail(s: Complex64, n_terms: usize) -> Complex64 {
    let mut re = crate::kahan::KahanSum::new();
    let mut im = crate::kahan::KahanSum::new();
    for n in 1..=n_terms {
        let term = (-s * (n as f64).ln()).exp();
        re.add(term.re);
        im.add(term.im);
    }
    let nf = n_terms as f64;
    let tail = ((1.0 - s) * nf.ln()).exp() / (s - 1.0);
    Complex64::new(re.value(), im.value()) + tail
}

/// Σ_{n≤⌊Y⌋} n^{−it} with double-double phases. Roughly 10 extra digits over
/// the f64 path; the unit tests hold both against frozen 40-digit references.
pub fn zsum_dd(y: f64, t: f64) -> Complex64 {
    use crate::dd::{CDd, Dd};
    if y < 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let n_max = y.floor() as u64;
    let mut acc = CDd::from_f64(0.0, 0.0);
    for n in 1..=n_max {
        let ln_n = Dd::from_f64(n as f64).ln();
        acc = acc.add(CDd::cis(ln_n.mul_f64(-t)));
    }
    acc.to_c64()
}
