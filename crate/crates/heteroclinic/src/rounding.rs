//! Directed rounding on top of the default (round-to-nearest) float environment.
//!
//! Rust gives no portable, optimizer-safe way to flip the hardware rounding
//! mode (LLVM is free to const-fold and reorder float ops assuming
//! round-to-nearest), so downward/upward rounded results are recovered the
//! other way around: perform the operation in round-to-nearest, compute the
//! *exact* rounding error with an error-free transformation (TwoSum for
//! addition, an fma residual for multiplication, division and square root),
//! and step one ulp outward only when the native result landed on the wrong
//! side. When the native result is exact the error term is zero and the
//! result is returned untouched, so integer-valued arithmetic stays exact.
//!
//! The error terms are exact for normal results; in the subnormal range the
//! residual itself can underflow and hide an inexact result, so anything with
//! a subnormal result is nudged unconditionally. Overflow is handled by
//! clamping toward the finite side when the exact value is known finite.

/// Smallest positive normal f64. Below this the fma/TwoSum residuals can
/// underflow, so exactness detection is not trusted there.
const MIN_NORMAL: f64 = f64::MIN_POSITIVE;

#[inline]
pub fn next_up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
pub fn next_down(x: f64) -> f64 {
    x.next_down()
}

/// Knuth's TwoSum: returns (fl(a+b), err) with a + b = fl(a+b) + err exactly,
/// provided no intermediate overflows.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let a1 = s - b;
    let b1 = s - a1;
    (s, (a - a1) + (b - b1))
}

#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        // +inf from finite inputs means the exact sum is finite but above the
        // overflow threshold; its round-down is MAX. -inf stays -inf. NaN
        // (opposite infinite endpoints meeting) has no defined value, so the
        // directed bound degrades to the widest one.
        if s.is_nan() {
            return f64::NEG_INFINITY;
        }
        if s == f64::INFINITY && a.is_finite() && b.is_finite() {
            return f64::MAX;
        }
        return s;
    }
    if e.is_finite() {
        if e < 0.0 {
            s.next_down()
        } else {
            s
        }
    } else {
        // intermediate overflow in the error computation: be conservative
        s.next_down()
    }
}

#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if !s.is_finite() {
        if s.is_nan() {
            return f64::INFINITY;
        }
        if s == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            return f64::MIN;
        }
        return s;
    }
    if e.is_finite() {
        if e > 0.0 {
            s.next_up()
        } else {
            s
        }
    } else {
        s.next_up()
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        if p.is_nan() {
            return f64::NEG_INFINITY;
        }
        if p == f64::INFINITY && a.is_finite() && b.is_finite() {
            return f64::MAX;
        }
        return p;
    }
    let e = a.mul_add(b, -p);
    if e.is_nan() {
        p.next_down()
    } else if e < 0.0 {
        p.next_down()
    } else if e > 0.0 {
        p
    } else {
        // e == 0: exact, unless the residual underflowed to zero.
        if p.abs() >= MIN_NORMAL || a == 0.0 || b == 0.0 {
            p
        } else {
            p.next_down()
        }
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        if p.is_nan() {
            return f64::INFINITY;
        }
        if p == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            return f64::MIN;
        }
        return p;
    }
    let e = a.mul_add(b, -p);
    if e.is_nan() {
        p.next_up()
    } else if e > 0.0 {
        p.next_up()
    } else if e < 0.0 {
        p
    } else if p.abs() >= MIN_NORMAL || a == 0.0 || b == 0.0 {
        p
    } else {
        p.next_up()
    }
}

/// fl(a/b) with the exact-quotient side recovered from the fma residual
/// r = fl(q·b − a): the true quotient lies below q iff r and b share a sign.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    let q = a / b;
    if !q.is_finite() {
        if q.is_nan() {
            return f64::NEG_INFINITY;
        }
        if q == f64::INFINITY && a.is_finite() && b.is_finite() {
            return f64::MAX;
        }
        return q;
    }
    let r = q.mul_add(b, -a);
    if r.is_nan() {
        q.next_down()
    } else if r == 0.0 {
        if q == 0.0 && a != 0.0 {
            // quotient underflowed entirely; sign tells the side
            return if (a > 0.0) == (b > 0.0) { 0.0 } else { 0.0f64.next_down() };
        }
        if (q * b).abs() >= MIN_NORMAL || a == 0.0 {
            q
        } else {
            q.next_down()
        }
    } else if (r > 0.0) == (b > 0.0) {
        q.next_down()
    } else {
        q
    }
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    debug_assert!(b != 0.0);
    let q = a / b;
    if !q.is_finite() {
        if q.is_nan() {
            return f64::INFINITY;
        }
        if q == f64::NEG_INFINITY && a.is_finite() && b.is_finite() {
            return f64::MIN;
        }
        return q;
    }
    let r = q.mul_add(b, -a);
    if r.is_nan() {
        q.next_up()
    } else if r == 0.0 {
        if q == 0.0 && a != 0.0 {
            return if (a > 0.0) == (b > 0.0) { 0.0f64.next_up() } else { 0.0 };
        }
        if (q * b).abs() >= MIN_NORMAL || a == 0.0 {
            q
        } else {
            q.next_up()
        }
    } else if (r > 0.0) == (b > 0.0) {
        q
    } else {
        q.next_up()
    }
}

#[inline]
pub fn sqrt_down(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    let s = a.sqrt();
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    let r = s.mul_add(s, -a);
    if r > 0.0 {
        s.next_down()
    } else if r < 0.0 {
        s
    } else if a >= MIN_NORMAL {
        s
    } else {
        s.next_down()
    }
}

#[inline]
pub fn sqrt_up(a: f64) -> f64 {
    debug_assert!(a >= 0.0);
    let s = a.sqrt();
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    let r = s.mul_add(s, -a);
    if r < 0.0 {
        s.next_up()
    } else if r > 0.0 {
        s
    } else if a >= MIN_NORMAL {
        s
    } else {
        s.next_up()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_results_stay_exact() {
        assert_eq!(add_down(1.0, 3.0), 4.0);
        assert_eq!(add_up(1.0, 3.0), 4.0);
        assert_eq!(mul_down(3.0, 7.0), 21.0);
        assert_eq!(mul_up(3.0, 7.0), 21.0);
        assert_eq!(div_down(10.0, 4.0), 2.5);
        assert_eq!(div_up(10.0, 4.0), 2.5);
        assert_eq!(sqrt_down(4.0), 2.0);
        assert_eq!(sqrt_up(4.0), 2.0);
        assert_eq!(mul_down(0.0, 5.0e300), 0.0);
        assert_eq!(mul_up(-0.0, 5.0e300), 0.0);
    }

    #[test]
    fn inexact_results_bracket() {
        // 0.1 + 0.2 is famously inexact
        let lo = add_down(0.1, 0.2);
        let hi = add_up(0.1, 0.2);
        assert!(lo < hi);
        assert!(hi - lo <= 2.0 * f64::EPSILON);
        // 1/3 is inexact, so the directed quotients are one ulp apart and
        // bracket the true value: checked with directed products, since a
        // round-to-nearest multiply by 3 would land back on 1.0 exactly
        let t_lo = div_down(1.0, 3.0);
        let t_hi = div_up(1.0, 3.0);
        assert_eq!(t_hi, t_lo.next_up());
        assert!(mul_down(3.0, t_lo) < 1.0);
        assert!(mul_up(3.0, t_hi) > 1.0);
    }

    #[test]
    fn sqrt_brackets() {
        let lo = sqrt_down(2.0);
        let hi = sqrt_up(2.0);
        assert!(lo < hi);
        assert!(lo * lo < 2.0);
        assert!(hi * hi > 2.0);
    }

    #[test]
    fn overflow_clamps_to_finite_side() {
        assert_eq!(add_down(f64::MAX, f64::MAX), f64::MAX);
        assert_eq!(add_up(f64::MIN, f64::MIN), f64::MIN);
        assert_eq!(mul_down(1.0e200, 1.0e200), f64::MAX);
        assert_eq!(mul_up(-1.0e200, 1.0e200), f64::MIN);
        assert_eq!(add_up(f64::MAX, f64::MAX), f64::INFINITY);
    }

    #[test]
    fn indeterminate_forms_widen_instead_of_nan() {
        let inf = f64::INFINITY;
        assert_eq!(add_down(inf, -inf), -inf);
        assert_eq!(add_up(inf, -inf), inf);
        assert_eq!(mul_down(0.0, inf), -inf);
        assert_eq!(mul_up(0.0, -inf), inf);
        assert_eq!(div_down(inf, inf), -inf);
        assert_eq!(div_up(-inf, inf), inf);
    }

    #[test]
    fn subnormal_region_is_conservative() {
        let tiny = f64::MIN_POSITIVE / 4.0;
        let lo = mul_down(tiny, 0.3);
        let hi = mul_up(tiny, 0.3);
        assert!(lo < hi, "subnormal products must widen");
        assert!(lo <= tiny * 0.3 && tiny * 0.3 <= hi);
    }

    #[test]
    fn directed_pairs_always_ordered() {
        let xs = [
            0.0, 1.0, -1.0, 0.1, -0.3, 1.5e-12, 7.25, 1.0e8, -3.77e-9, 2.2e301, -8.1e-301,
        ];
        for &a in &xs {
            for &b in &xs {
                assert!(add_down(a, b) <= add_up(a, b));
                assert!(mul_down(a, b) <= mul_up(a, b));
                assert!(sub_down(a, b) <= sub_up(a, b));
                if b != 0.0 {
                    assert!(div_down(a, b) <= div_up(a, b));
                }
            }
            if a >= 0.0 {
                assert!(sqrt_down(a) <= sqrt_up(a));
            }
        }
    }
}
