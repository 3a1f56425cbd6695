//! Closed real intervals with outward-rounded arithmetic.
//!
//! Every operation returns an interval that contains the exact real result
//! for all choices of points in the operands. Endpoints are finite except
//! where an overflow genuinely occurred; NaN endpoints are rejected at
//! construction.

use crate::rounding::*;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("division by an interval containing zero")]
    DivisionByIntervalContainingZero,
    #[error("square root of an interval with negative lower endpoint")]
    NegativeSqrtDomain,
    #[error("logarithm of an interval not strictly positive")]
    NonPositiveLogDomain,
    #[error("malformed interval literal: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Panics if endpoints are NaN or out of order; those are programming
    /// errors, not data.
    #[inline]
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    #[inline]
    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    /// Symmetric interval [-r, r].
    #[inline]
    pub fn symmetric(r: f64) -> Interval {
        assert!(r >= 0.0, "negative radius");
        Interval { lo: -r, hi: r }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Midpoint, clamped into the interval (safe against outward rounding of
    /// the halving).
    #[inline]
    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m.clamp(self.lo, self.hi)
        } else {
            0.0f64.clamp(self.lo, self.hi)
        }
    }

    /// Upper bound for the radius about `mid()`.
    #[inline]
    pub fn rad_up(&self) -> f64 {
        let m = self.mid();
        sub_up(self.hi, m).max(sub_up(m, self.lo))
    }

    /// Upper bound for hi − lo.
    #[inline]
    pub fn width_up(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// Magnitude: sup of |x| over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Mignitude: inf of |x| over the interval.
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.lo <= 0.0 && 0.0 <= self.hi {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// other ⊆ self
    #[inline]
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// other ⊂ int(self): strict inequalities at both endpoints.
    #[inline]
    pub fn interior_encloses(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    #[inline]
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    #[inline]
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    #[inline]
    pub fn abs(&self) -> Interval {
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn checked_div(&self, rhs: &Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && 0.0 <= rhs.hi {
            return Err(IntervalError::DivisionByIntervalContainingZero);
        }
        let cands_lo = [
            div_down(self.lo, rhs.lo),
            div_down(self.lo, rhs.hi),
            div_down(self.hi, rhs.lo),
            div_down(self.hi, rhs.hi),
        ];
        let cands_hi = [
            div_up(self.lo, rhs.lo),
            div_up(self.lo, rhs.hi),
            div_up(self.hi, rhs.lo),
            div_up(self.hi, rhs.hi),
        ];
        Ok(Interval {
            lo: cands_lo.iter().copied().fold(f64::INFINITY, f64::min),
            hi: cands_hi.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }

    pub fn recip(&self) -> Result<Interval, IntervalError> {
        Interval::ONE.checked_div(self)
    }

    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeSqrtDomain);
        }
        Ok(Interval {
            lo: sqrt_down(self.lo),
            hi: sqrt_up(self.hi),
        })
    }

    /// Tight square: [x²] over the interval, respecting sign changes. The
    /// lower bound is clamped at 0: a downward-rounded underflowing product
    /// would otherwise dip below zero, which a square never does.
    pub fn square(&self) -> Interval {
        if self.lo >= 0.0 {
            Interval {
                lo: mul_down(self.lo, self.lo).max(0.0),
                hi: mul_up(self.hi, self.hi),
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: mul_down(self.hi, self.hi).max(0.0),
                hi: mul_up(self.lo, self.lo),
            }
        } else {
            Interval {
                lo: 0.0,
                hi: mul_up(self.lo, self.lo).max(mul_up(self.hi, self.hi)),
            }
        }
    }

    /// x^n by sign analysis on the endpoints (tight, unlike repeated
    /// interval multiplication).
    pub fn powi(&self, n: u32) -> Interval {
        fn pow_dir(x: f64, n: u32, up: bool) -> f64 {
            let mut acc = 1.0;
            for _ in 0..n {
                acc = if up { mul_up(acc, x) } else { mul_down(acc, x) };
            }
            acc
        }
        match n {
            0 => Interval::ONE,
            1 => *self,
            2 => self.square(),
            _ => {
                if n % 2 == 1 || self.lo >= 0.0 {
                    // odd power is monotone; even power of nonneg is monotone
                    if n % 2 == 1 && self.lo < 0.0 {
                        // endpoints keep order for odd powers
                        Interval {
                            lo: pow_dir_signed(self.lo, n, false),
                            hi: pow_dir_signed(self.hi, n, true),
                        }
                    } else {
                        // nonneg base: an underflowing downward product must
                        // not cross zero
                        Interval {
                            lo: pow_dir(self.lo, n, false).max(0.0),
                            hi: pow_dir(self.hi, n, true),
                        }
                    }
                } else if self.hi <= 0.0 {
                    Interval {
                        lo: pow_dir_signed(self.hi, n, false).max(0.0),
                        hi: pow_dir_signed(self.lo, n, true),
                    }
                } else {
                    Interval {
                        lo: 0.0,
                        hi: pow_dir_signed(self.lo, n, true).max(pow_dir_signed(self.hi, n, true)),
                    }
                }
            }
        }
    }

    /// rigorous e^x via argument halving plus a truncated series with an
    /// explicit remainder enclosure
    pub fn exp(&self) -> Interval {
        Interval {
            lo: exp_point(self.lo).lo,
            hi: exp_point(self.hi).hi,
        }
    }

    /// rigorous natural log by inverting `exp` with monotone endpoint nudging
    pub fn ln(&self) -> Result<Interval, IntervalError> {
        if self.lo <= 0.0 {
            return Err(IntervalError::NonPositiveLogDomain);
        }
        Ok(Interval {
            lo: ln_point_down(self.lo),
            hi: ln_point_up(self.hi),
        })
    }

    /// Enclosure of π.
    pub fn pi() -> Interval {
        Interval {
            lo: std::f64::consts::PI.next_down(),
            hi: std::f64::consts::PI.next_up(),
        }
    }
}

/// directed x^n for possibly negative x: round each partial product in the
/// direction that moves the final value the requested way
fn pow_dir_signed(x: f64, n: u32, up: bool) -> f64 {
    // interval-power of the point and take the requested side; simple and safe
    let mut acc = Interval::ONE;
    let xi = Interval::point(x);
    for _ in 0..n {
        acc = acc * xi;
    }
    if up {
        acc.hi
    } else {
        acc.lo
    }
}

/// e^x enclosure for a point argument.
fn exp_point(x: f64) -> Interval {
    if x == 0.0 {
        return Interval::ONE;
    }
    if x > 709.8 {
        return Interval::new(f64::MAX, f64::INFINITY);
    }
    if x < -745.2 {
        return Interval::new(0.0, f64::MIN_POSITIVE);
    }
    // halve until |w| <= 0.5; each halving is exact and is undone below by
    // squaring the enclosure. |x| <= 745.2 needs at most 11 halvings.
    let mut halvings = 0u32;
    let mut w = x;
    while w.abs() > 0.5 {
        w *= 0.5;
        halvings += 1;
    }
    // series sum_{k<=K} w^k/k! with remainder |w|^{K+1}/(K+1)! * 1/(1-|w|/(K+2))
    const K: u32 = 22;
    let wi = Interval::point(w);
    let mut term = Interval::ONE;
    let mut sum = Interval::ONE;
    for k in 1..=K {
        term = (term * wi).checked_div(&Interval::point(k as f64)).unwrap();
        sum = sum + term;
    }
    let mut rem_mag = Interval::point(w.abs());
    let mut fact = Interval::ONE;
    for k in 1..=(K + 1) {
        if k > 1 {
            rem_mag = rem_mag * Interval::point(w.abs());
        }
        fact = fact * Interval::point(k as f64);
    }
    // 1/(1 - |w|/(K+2)) <= 2 for |w| <= 0.5
    let rem_hi = mul_up(div_up(rem_mag.hi, fact.lo), 2.0);
    let mut enc = sum + Interval::new(-rem_hi, rem_hi);
    for _ in 0..halvings {
        enc = enc.square();
    }
    enc
}

fn ln_point_down(y: f64) -> f64 {
    let mut z = y.ln();
    // want exp(z) <= y; walk down until the rigorous enclosure agrees
    for _ in 0..4096 {
        if exp_point(z).hi <= y {
            return z;
        }
        z = z.next_down();
    }
    unreachable!("ln lower bound did not verify near {y}");
}

fn ln_point_up(y: f64) -> f64 {
    let mut z = y.ln();
    for _ in 0..4096 {
        if exp_point(z).lo >= y {
            return z;
        }
        z = z.next_up();
    }
    unreachable!("ln upper bound did not verify near {y}");
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: sub_down(self.lo, rhs.hi),
            hi: sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        // brute-force over endpoint products; clear and containment-sound
        let lo = mul_down(self.lo, rhs.lo)
            .min(mul_down(self.lo, rhs.hi))
            .min(mul_down(self.hi, rhs.lo))
            .min(mul_down(self.hi, rhs.hi));
        let hi = mul_up(self.lo, rhs.lo)
            .max(mul_up(self.lo, rhs.hi))
            .max(mul_up(self.hi, rhs.lo))
            .max(mul_up(self.hi, rhs.hi));
        Interval { lo, hi }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
