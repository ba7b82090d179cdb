//! Double-double arithmetic: an unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2,
//! about 31 decimal digits. This backs the extended-precision evaluation mode
//! used for oracle runs; only the operations that path needs are implemented.
//!
//! The error-free transforms are the textbook ones (Knuth two_sum, Dekker
//! split/two_prod), written without fused multiply-add so results do not
//! depend on the target's fma availability.

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    // 2^27 + 1; valid for |a| < 2^996, far beyond anything this crate forms
    let c = 134_217_729.0 * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    pub const PI_2: Dd = Dd {
        hi: 1.5707963267948966,
        lo: 6.123233995736766e-17,
    };
    pub const LN2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, e1) = two_sum(self.hi, other.hi);
        let (s2, e2) = two_sum(self.lo, other.lo);
        let (s1, e1) = quick_two_sum(s1, e1 + s2);
        let (hi, lo) = quick_two_sum(s1, e1 + e2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let (s, e) = two_sum(self.hi, other);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let (hi, lo) = quick_two_sum(p, e + self.lo * other);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add_f64(q3)
    }

    #[inline]
    pub fn div_f64(self, other: f64) -> Dd {
        self.div(Dd::from_f64(other))
    }

    /// Multiplies by 2^k exactly.
    #[inline]
    pub fn ldexp(self, k: i32) -> Dd {
        let f = (2.0f64).powi(k);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    /// exp(self). Argument range |hi| ≤ 690 (caller keeps exponents small).
    pub fn exp(self) -> Dd {
        if self.hi > 690.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -690.0 {
            return Dd::ZERO;
        }
        // exp(x) = 2^m exp(r), r = x - m ln2, then r scaled by 2^-9 so the
        // Taylor series converges in a dozen terms.
        let m = (self.hi / Dd::LN2.hi).round();
        let r = self.sub(Dd::LN2.mul_f64(m)).ldexp(-9);
        let mut term = r;
        let mut sum = Dd::ONE.add(r);
        let mut j = 2.0;
        loop {
            term = term.mul(r).div_f64(j);
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 || j > 24.0 {
                break;
            }
            j += 1.0;
        }
        let mut p = sum;
        for _ in 0..9 {
            p = p.mul(p);
        }
        p.ldexp(m as i32)
    }

    /// Natural log for hi > 0: f64 seed plus two Newton steps on exp(y) = x.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            // y += x exp(-y) - 1; each step roughly doubles correct digits
            y = y.add(self.mul(y.neg().exp()).add_f64(-1.0));
        }
        y
    }

    /// (sin, cos) with argument reduction modulo pi/2. Reduction keeps
    /// absolute error near |x|·1e-32, ample for |x| ≤ 1e9.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let q = (self.hi / Dd::PI_2.hi).round();
        let r = self.sub(Dd::PI_2.mul_f64(q));
        let (s, c) = sincos_taylor(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        }
    }
}

fn sincos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| ≤ pi/4 + reduction slack; both series done to ~1e-35 terms
    let r2 = r.mul(r);
    let mut term = r;
    let mut sin = r;
    let mut k = 2.0;
    loop {
        term = term.mul(r2).div_f64(-(k * (k + 1.0)));
        sin = sin.add(term);
        if term.hi.abs() < 1e-35 || k > 40.0 {
            break;
        }
        k += 2.0;
    }
    let mut term = Dd::ONE;
    let mut cos = Dd::ONE;
    let mut k = 1.0;
    loop {
        term = term.mul(r2).div_f64(-(k * (k + 1.0)));
        cos = cos.add(term);
        if term.hi.abs() < 1e-35 || k > 40.0 {
            break;
        }
        k += 2.0;
    }
    (sin, cos)
}

/// Complex double-double: just enough for Euler-Maclaurin in extended mode.
#[derive(Clone, Copy, Debug, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    #[inline]
    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    #[inline]
    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn add(self, other: CDd) -> CDd {
        CDd::new(self.re.add(other.re), self.im.add(other.im))
    }

    #[inline]
    pub fn sub(self, other: CDd) -> CDd {
        CDd::new(self.re.sub(other.re), self.im.sub(other.im))
    }

    #[inline]
    pub fn mul(self, other: CDd) -> CDd {
        CDd::new(
            self.re.mul(other.re).sub(self.im.mul(other.im)),
            self.re.mul(other.im).add(self.im.mul(other.re)),
        )
    }

    #[inline]
    pub fn div(self, other: CDd) -> CDd {
        let den = other.re.mul(other.re).add(other.im.mul(other.im));
        let re = self.re.mul(other.re).add(self.im.mul(other.im));
        let im = self.im.mul(other.re).sub(self.re.mul(other.im));
        CDd::new(re.div(den), im.div(den))
    }

    #[inline]
    pub fn scale(self, f: Dd) -> CDd {
        CDd::new(self.re.mul(f), self.im.mul(f))
    }

    /// e^{i theta}.
    #[inline]
    pub fn cis(theta: Dd) -> CDd {
        let (s, c) = theta.sin_cos();
        CDd::new(c, s)
    }

    pub fn norm(self) -> f64 {
        let n2 = self.re.mul(self.re).add(self.im.mul(self.im));
        n2.to_f64().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_dd_close(got: Dd, hi: f64, lo: f64, tol: f64) {
        let expect = Dd { hi, lo };
        let diff = got.sub(expect).to_f64().abs();
        assert!(
            diff < tol,
            "got ({:e}, {:e}), expect ({hi:e}, {lo:e}), diff {diff:e}",
            got.hi,
            got.lo
        );
    }

    #[test]
    fn addition_keeps_tiny_tail() {
        // 1 + 1e-25 is exactly representable as a dd pair
        let s = Dd::ONE.add(Dd::from_f64(1e-25));
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 1e-25);
    }

    #[test]
    fn product_tail_is_captured() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60 exactly
        let x = Dd::from_f64(1.0 + (2.0f64).powi(-30));
        let p = x.mul(x);
        let expect_lo = (2.0f64).powi(-60);
        let diff = (p.sub(Dd::ONE.add_f64((2.0f64).powi(-29))).to_f64() - expect_lo).abs();
        assert!(diff == 0.0, "tail lost: diff {diff:e}");
    }

    #[test]
    fn division_round_trips() {
        let a = Dd::PI;
        let b = Dd::from_f64(7.25);
        let q = a.div(b);
        assert_dd_close(q.mul(b), Dd::PI.hi, Dd::PI.lo, 1e-30);
    }

    #[test]
    fn exp_pins() {
        // reference values from 45-digit evaluation at exact f64 inputs;
        // the reduction chain leaves a few units in the 30th place
        assert_dd_close(Dd::ONE.exp(), 2.718281828459045, 1.4456468917292502e-16, 1e-28);
        assert_dd_close(
            Dd::from_f64(0.1).exp(),
            1.1051709180756477,
            -8.149523913327619e-17,
            1e-28,
        );
        assert_dd_close(
            Dd::from_f64(-5.0).exp(),
            0.006737946999085467,
            9.579094181215286e-20,
            1e-30,
        );
    }

    #[test]
    fn ln_pins() {
        assert_dd_close(
            Dd::from_f64(2.0).ln(),
            0.6931471805599453,
            2.3190468138462996e-17,
            1e-28,
        );
        assert_dd_close(
            Dd::from_f64(2.5).ln(),
            0.9162907318741551,
            -4.141195369011963e-17,
            1e-28,
        );
        assert_dd_close(
            Dd::from_f64(10.0).ln(),
            2.302585092994046,
            -2.1707562233822494e-16,
            1e-28,
        );
        assert_dd_close(
            Dd::from_f64(1e30).ln(),
            69.07755278982137,
            2.38940015169316e-15,
            5e-28,
        );
    }

    #[test]
    fn sincos_pins() {
        let (s, c) = Dd::ONE.sin_cos();
        assert_dd_close(s, 0.8414709848078965, 1.776845092935536e-18, 1e-30);
        assert_dd_close(c, 0.5403023058681398, -4.760954612604417e-17, 1e-30);
        let (s, c) = Dd::from_f64(0.7).sin_cos();
        assert_dd_close(s, 0.644217687237691, 2.8740567927338755e-18, 1e-30);
        assert_dd_close(c, 0.7648421872844885, -4.013780434022238e-17, 1e-30);
    }

    #[test]
    fn sincos_survives_large_argument() {
        // 1e8 + 0.25 is exactly representable; reduction error stays ~1e-24
        let (s, c) = Dd::from_f64(100000000.25).sin_cos();
        assert_dd_close(s, 0.8127737160763773, -3.811480894939776e-17, 1e-23);
        assert_dd_close(c, -0.5825795108441392, -4.927454579687501e-17, 1e-23);
    }

    #[test]
    fn ln_exp_round_trip() {
        for &x in &[1e-6, 0.37, 1.0, 12.0, 4096.5, 9.9e8] {
            let d = Dd::from_f64(x);
            let back = d.ln().exp();
            let rel = (back.sub(d).to_f64() / x).abs();
            assert!(rel < 1e-28, "round trip at {x}: rel {rel:e}");
        }
    }

    #[test]
    fn complex_mul_matches_modulus() {
        // |cis(a) * cis(b)| = 1 to dd accuracy
        let a = CDd::cis(Dd::from_f64(0.3));
        let b = CDd::cis(Dd::from_f64(1.9));
        let p = a.mul(b);
        assert!((p.norm() - 1.0).abs() < 1e-30, "norm {}", p.norm());
    }
}
