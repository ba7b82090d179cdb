//! Compensated summation and a fixed-shape pairwise reduction.
//!
//! Both primitives exist for the same reason: summed results must depend only
//! on the order of the terms, never on how work was scheduled. Every hot loop
//! in the crate sums through one of these.

use num_complex::Complex64;

/// Kahan accumulator. The compensation term keeps the running error at
/// O(eps) independent of the number of terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Complex Kahan accumulator: independent compensation per component.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanComplex {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

const PAIRWISE_LEAF: usize = 32;

/// Pairwise reduction over a slice. The tree shape is a pure function of the
/// slice length, so parallel producers can fill the slice in any order and
/// the reduction still returns bit-identical results on any worker count.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_LEAF {
        let mut acc = KahanSum::new();
        for &v in values {
            acc.add(v);
        }
        acc.value()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Complex variant of [`pairwise_sum`] with the same fixed tree.
pub fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_LEAF {
        let mut acc = KahanComplex::new();
        for &v in values {
            acc.add(v);
        }
        acc.value()
    } else {
        let mid = values.len() / 2;
        pairwise_sum_complex(&values[..mid]) + pairwise_sum_complex(&values[mid..])
    }
}
