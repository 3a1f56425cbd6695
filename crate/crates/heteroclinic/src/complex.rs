//! Rectangular complex intervals: re + i·im with real interval components.
//!
//! Rectangles are not the tightest complex enclosure under multiplication,
//! but every operation here is containment-sound, and that is what the
//! parameterization solver needs.

use crate::interval::{Interval, IntervalError};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval = ComplexInterval {
        re: Interval::ZERO,
        im: Interval::ZERO,
    };
    pub const ONE: ComplexInterval = ComplexInterval {
        re: Interval::ONE,
        im: Interval::ZERO,
    };

    #[inline]
    pub fn new(re: Interval, im: Interval) -> ComplexInterval {
        ComplexInterval { re, im }
    }

    #[inline]
    pub fn from_real(re: Interval) -> ComplexInterval {
        ComplexInterval {
            re,
            im: Interval::ZERO,
        }
    }

    #[inline]
    pub fn point(re: f64, im: f64) -> ComplexInterval {
        ComplexInterval {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    #[inline]
    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval {
            re: self.re,
            im: -self.im,
        }
    }

    #[inline]
    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    /// Upper bound on |z| over the rectangle.
    pub fn modulus_up(&self) -> f64 {
        let m2 = self.re.square() + self.im.square();
        m2.sqrt().expect("modulus of nonnegative square").hi()
    }

    /// Enclosure of |z|² over the rectangle.
    pub fn modulus_sq(&self) -> Interval {
        self.re.square() + self.im.square()
    }

    /// Enclosure of |z| over the rectangle.
    pub fn modulus(&self) -> Interval {
        self.modulus_sq().sqrt().expect("modulus of nonnegative square")
    }

    /// 1/z, rejecting rectangles whose modulus may vanish.
    pub fn recip(&self) -> Result<ComplexInterval, IntervalError> {
        let m2 = self.modulus_sq();
        let re = self.re.checked_div(&m2)?;
        let im = (-self.im).checked_div(&m2)?;
        Ok(ComplexInterval { re, im })
    }

    pub fn checked_div(&self, rhs: &ComplexInterval) -> Result<ComplexInterval, IntervalError> {
        Ok(*self * rhs.recip()?)
    }

    pub fn powi(&self, n: u32) -> ComplexInterval {
        let mut acc = ComplexInterval::ONE;
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    /// Max of the two component widths.
    pub fn width_up(&self) -> f64 {
        self.re.width_up().max(self.im.width_up())
    }
}

impl Add for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn add(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn sub(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn neg(self) -> ComplexInterval {
        ComplexInterval {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn mul(self, rhs: ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Mul<Interval> for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn mul(self, rhs: Interval) -> ComplexInterval {
        ComplexInterval {
            re: self.re * rhs,
            im: self.im * rhs,
        }
    }
}

impl Mul<f64> for ComplexInterval {
    type Output = ComplexInterval;
    #[inline]
    fn mul(self, rhs: f64) -> ComplexInterval {
        ComplexInterval {
            re: self.re * rhs,
            im: self.im * rhs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_contains_point_product() {
        let z = ComplexInterval::point(1.0, 2.0);
        let w = ComplexInterval::point(3.0, -1.0);
        let p = z * w;
        // (1+2i)(3-i) = 5+5i
        assert!(p.contains(5.0, 5.0));
        assert!(p.width_up() < 1e-14);
    }

    #[test]
    fn reciprocal_inverts() {
        let z = ComplexInterval::point(0.3, -0.7);
        let r = z.recip().unwrap();
        let one = z * r;
        assert!(one.contains(1.0, 0.0));
        assert!(ComplexInterval::new(Interval::new(-0.1, 0.1), Interval::new(-0.1, 0.1))
            .recip()
            .is_err());
    }

    #[test]
    fn conjugate_flips_imaginary() {
        let z = ComplexInterval::new(Interval::new(1.0, 2.0), Interval::new(3.0, 4.0));
        let c = z.conj();
        assert_eq!(c.im, Interval::new(-4.0, -3.0));
        assert_eq!(c.re, z.re);
    }

    #[test]
    fn modulus_bounds() {
        let z = ComplexInterval::point(3.0, 4.0);
        let m = z.modulus();
        assert!(m.contains(5.0));
        assert!(z.modulus_up() >= 5.0);
        assert!(z.modulus_up() < 5.0 + 1e-13);
    }

    #[test]
    fn powers_match_modulus() {
        let z = ComplexInterval::point(0.5, 0.5);
        let z4 = z.powi(4);
        // (0.5+0.5i)^4 = (0.5(1+i))^4 = 0.0625 * (1+i)^4 = 0.0625 * (-4) = -0.25
        assert!(z4.contains(-0.25, 0.0));
    }
}
