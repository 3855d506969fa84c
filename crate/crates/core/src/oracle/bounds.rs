//! Rigorous enclosures of real values by pairs of [`BigFloat`]s.
//!
//! Every operation rounds its lower end down and its upper end up, so an
//! enclosure computed from enclosures always contains the true result.

use crate::fpkernel::Dir;

use super::bigfloat::BigFloat;

#[derive(Clone, Debug)]
pub struct Bounds {
    pub lo: BigFloat,
    pub hi: BigFloat,
}

impl Bounds {
    pub fn new(lo: BigFloat, hi: BigFloat) -> Self {
        debug_assert!(lo.le(&hi), "inverted bounds");
        Bounds { lo, hi }
    }

    pub fn exact(x: BigFloat) -> Self {
        Bounds { lo: x.clone(), hi: x }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::exact(BigFloat::from_i64(v))
    }

    pub fn neg(&self) -> Self {
        Bounds { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, o: &Bounds, w: u64) -> Self {
        Bounds { lo: self.lo.add(&o.lo, w, Dir::Down), hi: self.hi.add(&o.hi, w, Dir::Up) }
    }

    pub fn sub(&self, o: &Bounds, w: u64) -> Self {
        self.add(&o.neg(), w)
    }

    pub fn mul(&self, o: &Bounds, w: u64) -> Self {
        let products = [
            self.lo.mul_exact(&o.lo),
            self.lo.mul_exact(&o.hi),
            self.hi.mul_exact(&o.lo),
            self.hi.mul_exact(&o.hi),
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            lo = BigFloat::min_value(&lo, p);
            hi = BigFloat::max_value(&hi, p);
        }
        Bounds { lo: lo.round(w, Dir::Down), hi: hi.round(w, Dir::Up) }
    }

    pub fn sqr(&self, w: u64) -> Self {
        if self.contains_zero() {
            let m = self.max_abs();
            return Bounds { lo: BigFloat::ZERO, hi: m.mul(&m, w, Dir::Up) };
        }
        let a = self.min_abs();
        let b = self.max_abs();
        Bounds { lo: a.mul(&a, w, Dir::Down), hi: b.mul(&b, w, Dir::Up) }
    }

    /// Quotient; the divisor must exclude zero.
    pub fn div(&self, o: &Bounds, w: u64) -> Self {
        assert!(!o.contains_zero(), "division by an enclosure of zero");
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo = pairs[0].0.div(pairs[0].1, w, Dir::Down);
        let mut hi = pairs[0].0.div(pairs[0].1, w, Dir::Up);
        for (a, b) in &pairs[1..] {
            lo = BigFloat::min_value(&lo, &a.div(b, w, Dir::Down));
            hi = BigFloat::max_value(&hi, &a.div(b, w, Dir::Up));
        }
        Bounds { lo, hi }
    }

    /// Division by a positive integer.
    pub fn div_int(&self, n: u64, w: u64) -> Self {
        let d = BigFloat::from_i64(n as i64);
        Bounds { lo: self.lo.div(&d, w, Dir::Down), hi: self.hi.div(&d, w, Dir::Up) }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Bounds { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k) }
    }

    /// Square root of a nonnegative enclosure.
    pub fn sqrt(&self, w: u64) -> Self {
        let lo = if self.lo.is_negative() { BigFloat::ZERO } else { self.lo.sqrt(w, Dir::Down) };
        Bounds { lo, hi: self.hi.sqrt(w, Dir::Up) }
    }

    pub fn round(&self, w: u64) -> Self {
        Bounds { lo: self.lo.round(w, Dir::Down), hi: self.hi.round(w, Dir::Up) }
    }

    /// Widens both ends by `r >= 0`.
    pub fn widen(&self, r: &BigFloat, w: u64) -> Self {
        Bounds { lo: self.lo.sub(r, w, Dir::Down), hi: self.hi.add(r, w, Dir::Up) }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Upper bound on `|x|`.
    pub fn max_abs(&self) -> BigFloat {
        BigFloat::max_value(&self.lo.abs(), &self.hi.abs())
    }

    /// Lower bound on `|x|`.
    pub fn min_abs(&self) -> BigFloat {
        if self.contains_zero() {
            BigFloat::ZERO
        } else {
            BigFloat::min_value(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn width(&self) -> BigFloat {
        self.hi.sub_exact(&self.lo)
    }

    /// Whether the width is at most `2^-bits` relative to the magnitude.
    pub fn is_tight(&self, bits: u64) -> bool {
        let width = self.width();
        let Some(we) = width.top_exp() else {
            return width.is_zero();
        };
        match self.min_abs().top_exp() {
            Some(me) => we + bits as i64 <= me,
            None => false,
        }
    }
}

/// Whether `term` is negligible next to a quantity of magnitude around
/// `2^scale_exp` at `w` bits.
pub(crate) fn negligible(term: &Bounds, scale_exp: i64, w: u64) -> bool {
    match term.max_abs().top_exp() {
        None => true,
        Some(e) => e + (w as i64) + 2 < scale_exp,
    }
}
