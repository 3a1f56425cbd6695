//! A-posteriori validation of the truncation tail of a Taylor chart.
//!
//! Let P^N be the chart polynomial and g the map direction it conjugates
//! with contraction multiplier μ (|μ| < 1). The true parameterization is
//! P = P^N + h for an analytic tail h on the unit polydisk. The fixed-point
//! argument needs:
//!
//!   ε_tol ≥ sup‖g(P^N(z)) − P^N(Λz)‖       (defect, Λ = diag(μ, μ̄))
//!   R′    ≥ sup‖P^N(z) − p‖                 (chart radius)
//!   K1    ≥ ‖Dg(w)⁻¹‖ on the complex R-ball around p
//!   K2    ≥ second-partial magnitudes, N_f the count of nonzero ones
//!   μ*    ≥ |μ| with μ* < 1
//!
//! and yields a window (c2, c1) of valid tail bounds; any δ inside it
//! certifies a unique tail with sup norm below δ. The values are stored as
//! point intervals carrying the chosen upper bounds, so the window formulas
//! can run in plain interval arithmetic with rounding handled outwardly.

use crate::chart::{quad_bilinear, tri_idx, tri_len, ChartError, TaylorChart};
use crate::complex::ComplexInterval;
use crate::interval::Interval;
use crate::lomeli::{Direction, LomeliParams};
use crate::rounding::add_up;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationValues {
    pub eps_tol: Interval,
    pub r: Interval,
    pub r_prime: Interval,
    pub mu_star: Interval,
    pub k1: Interval,
    pub k2: Interval,
    pub n_f: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailCertificate {
    /// Verified sup bound for the tail over the unit polydisk.
    pub delta: Interval,
    pub order: usize,
    pub c1: Interval,
    pub c2: Interval,
}

/// ℓ¹ bound on the conjugacy defect g(P^N(z)) − P^N(Λz) over the unit
/// polydisk. Orders ≤ N vanish by construction; orders N+1..2N come solely
/// from the quadratic convolution of the chart with itself.
pub fn defect_bound(chart: &TaylorChart, params: &LomeliParams) -> Interval {
    let n = chart.order;
    let side = chart.conjugacy_side();
    let mut acc = vec![ComplexInterval::ZERO; tri_len(2 * n)];
    for d1 in 0..=n {
        for l1 in 0..=d1 {
            let k1 = d1 - l1;
            let u = &chart.coeffs[tri_idx(k1, l1)];
            for d2 in 0..=n {
                if d1 + d2 <= n {
                    continue;
                }
                for l2 in 0..=d2 {
                    let k2 = d2 - l2;
                    let v = &chart.coeffs[tri_idx(k2, l2)];
                    let slot = &mut acc[tri_idx(k1 + k2, l1 + l2)];
                    *slot = *slot + quad_bilinear(params, side.dir, u, v);
                }
            }
        }
    }
    let mut total = 0.0f64;
    for deg in (n + 1)..=(2 * n) {
        for l in 0..=deg {
            let k = deg - l;
            total = add_up(total, acc[tri_idx(k, l)].modulus_up());
        }
    }
    Interval::point(total)
}

/// Complex-interval Jacobian of the map on a box in C³.
fn complex_jacobian(
    w: &[ComplexInterval; 3],
    params: &LomeliParams,
    dir: Direction,
) -> [[ComplexInterval; 3]; 3] {
    let one = ComplexInterval::ONE;
    let zero = ComplexInterval::ZERO;
    let LomeliParams { a, b, c, tau, .. } = *params;
    match dir {
        Direction::Forward => [
            [
                ComplexInterval::from_real(tau) + w[0] * (a * 2.0) + w[1] * b,
                w[0] * b + w[1] * (c * 2.0),
                one,
            ],
            [one, zero, zero],
            [zero, one, zero],
        ],
        Direction::Inverse => [
            [zero, one, zero],
            [zero, zero, one],
            [
                one,
                -(ComplexInterval::from_real(tau) + w[1] * (a * 2.0) + w[2] * b),
                -(w[1] * b + w[2] * (c * 2.0)),
            ],
        ],
    }
}

/// ‖M⁻¹‖_∞ bound via the adjugate: the map has unit Jacobian determinant at
/// every point, real or complex, so each member inverse is exactly the
/// member adjugate.
fn inverse_norm_bound(m: &[[ComplexInterval; 3]; 3]) -> f64 {
    let det2 = |r0: usize, c0: usize, r1: usize, c1: usize| -> ComplexInterval {
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    let mut adj = [[ComplexInterval::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of (j, i)
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = det2(r0, c0, r1, c1);
            adj[i][j] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    let mut worst = 0.0f64;
    for row in &adj {
        let mut s = 0.0f64;
        for entry in row {
            s = add_up(s, entry.modulus_up());
        }
        worst = worst.max(s);
    }
    worst
}

/// Assemble the validation constants for a chart. `margin` widens the
/// evaluation ball: R = R′ + margin, defaulting to max(1, R′).
pub fn validation_values(
    chart: &TaylorChart,
    params: &LomeliParams,
    margin: Option<f64>,
) -> Result<ValidationValues, ChartError> {
    let n = chart.order;
    let side = chart.conjugacy_side();

    let mu_star = side.mu.modulus_up();
    if mu_star >= 1.0 {
        return Err(ChartError::HyperbolicityMarginTooSmall);
    }

    // R' per component, then max
    let mut r_prime = 0.0f64;
    for comp in 0..3 {
        let mut s = 0.0f64;
        for deg in 1..=n {
            for l in 0..=deg {
                let k = deg - l;
                s = add_up(s, chart.coeffs[tri_idx(k, l)][comp].modulus_up());
            }
        }
        r_prime = r_prime.max(s);
    }
    let margin = margin.unwrap_or_else(|| r_prime.max(1.0));
    assert!(margin > 0.0);
    let r = add_up(r_prime, margin);

    // K1 on the complex R-ball around the fixed point (the square enclosing
    // the disk, componentwise)
    let fp = &chart.coeffs[tri_idx(0, 0)];
    let mut ball = [ComplexInterval::ZERO; 3];
    for i in 0..3 {
        ball[i] = ComplexInterval::new(
            fp[i].re + Interval::symmetric(r),
            fp[i].im + Interval::symmetric(r),
        );
    }
    let k1 = inverse_norm_bound(&complex_jacobian(&ball, params, side.dir));

    // second partials of the map: the nonlinear component has constant
    // second derivatives 2a, b, 2c
    let partials = [params.a.mag() * 2.0, params.b.mag(), params.c.mag() * 2.0];
    let k2 = partials.iter().fold(0.0f64, |m, &p| m.max(p));
    let n_f = partials.iter().filter(|&&p| p > 0.0).count();

    let eps_tol = defect_bound(chart, params);

    Ok(ValidationValues {
        eps_tol,
        r: Interval::point(r),
        r_prime: Interval::point(r_prime),
        mu_star: Interval::point(mu_star),
        k1: Interval::point(k1),
        k2: Interval::point(k2),
        n_f,
    })
}

fn interval_min(a: Interval, b: Interval) -> Interval {
    Interval::new(a.lo().min(b.lo()), a.hi().min(b.hi()))
}

/// The window (c2, c1) of admissible tail bounds for a chart of order n.
pub(crate) fn delta_window(
    n: usize,
    vv: &ValidationValues,
) -> Result<(Interval, Interval), ChartError> {
    // contraction must beat the inverse-norm constant: K1·μ*^(N+1) < 1
    let head = Interval::ONE - vv.k1 * vv.mu_star.powi((n + 1) as u32);
    if head.lo() <= 0.0 {
        return Err(ChartError::OrderTooLow);
    }

    // ambient dimension enters the Cauchy estimate as 2·3·π
    let denom = Interval::pi() * vv.k1 * vv.k2 * (6.0 * vv.n_f as f64);
    let c1a = head.checked_div(&denom).expect("positive denominator");
    let c1b = vv.r - vv.r_prime;
    let e_inv = Interval::point(-1.0).exp();
    let c1 = e_inv * interval_min(c1a, c1b);

    let c2 = (vv.k1 * vv.eps_tol * 2.0)
        .checked_div(&head)
        .expect("head verified positive");

    if c2.hi() >= c1.lo() {
        return Err(ChartError::WindowEmpty);
    }
    Ok((c2, c1))
}

/// Certify a tail bound slightly above the bottom of the admissible window
/// and record it on the chart.
pub fn validate_tail(
    chart: &mut TaylorChart,
    vv: &ValidationValues,
) -> Result<TailCertificate, ChartError> {
    let n = chart.order;
    let (c2, c1) = delta_window(n, vv)?;

    let mut delta = c2.hi() * (1.0 + 1e-6) + f64::MIN_POSITIVE;
    if delta >= c1.lo() {
        delta = c2.hi() + (c1.lo() - c2.hi()) / 2.0;
        if delta <= c2.hi() || delta >= c1.lo() {
            return Err(ChartError::WindowEmpty);
        }
    }

    chart.tail_delta = Some(Interval::point(delta));
    Ok(TailCertificate {
        delta: Interval::point(delta),
        order: n,
        c1,
        c2,
    })
}

/// Full validation pipeline: constants, then the tail window.
pub fn validate_chart(
    chart: &mut TaylorChart,
    params: &LomeliParams,
    margin: Option<f64>,
) -> Result<(ValidationValues, TailCertificate), ChartError> {
    let vv = validation_values(chart, params, margin)?;
    let cert = validate_tail(chart, &vv)?;
    Ok((vv, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{solve_homological, ManifoldKind};
    use crate::decimal::parse_interval_exact;
    use crate::lomeli::fixed_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arc_params() -> LomeliParams {
        LomeliParams::new(
            parse_interval_exact("44/100").unwrap(),
            parse_interval_exact("21/100").unwrap(),
            parse_interval_exact("35/100").unwrap(),
            Interval::point(-0.25),
            parse_interval_exact("-3/10").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn tail_validation_succeeds_on_modest_chart() {
        let params = arc_params();
        let (p1, p2) = fixed_points(&params).unwrap();
        for (fp, kind) in [(&p1, ManifoldKind::Unstable), (&p2, ManifoldKind::Stable)] {
            let mut chart = solve_homological(fp, &params, kind, 20, 0.1).unwrap();
            let (vv, cert) = validate_chart(&mut chart, &params, None).unwrap();
            assert!(vv.mu_star.hi() < 1.0);
            assert!(vv.r_prime.hi() < vv.r.lo());
            assert!(cert.c2.hi() < cert.delta.lo());
            assert!(cert.delta.hi() < cert.c1.lo());
            assert!(chart.tail_delta.is_some());
            assert!(cert.delta.hi() < 1e-6, "delta unexpectedly coarse: {:?}", cert.delta);
        }
    }

    #[test]
    fn delta_shrinks_as_order_grows() {
        let params = arc_params();
        let (_, p2) = fixed_points(&params).unwrap();
        let mut prev = f64::INFINITY;
        for n in [12usize, 18, 24] {
            let mut chart = solve_homological(&p2, &params, ManifoldKind::Stable, n, 0.1).unwrap();
            let (_, cert) = validate_chart(&mut chart, &params, None).unwrap();
            assert!(
                cert.delta.hi() < prev,
                "delta did not improve at order {n}: {:?} vs {prev}",
                cert.delta
            );
            prev = cert.delta.hi();
        }
    }

    /// The ℓ¹ defect bound must dominate pointwise defect samples over the
    /// complex polydisk.
    #[test]
    fn defect_bound_dominates_samples() {
        let params = arc_params();
        let (p1, _) = fixed_points(&params).unwrap();
        let chart = solve_homological(&p1, &params, ManifoldKind::Unstable, 8, 0.25).unwrap();
        let side = chart.conjugacy_side();
        let eps = defect_bound(&chart, &params).hi();

        let eval = |z1: ComplexInterval, z2: ComplexInterval| -> [ComplexInterval; 3] {
            let mut out = [ComplexInterval::ZERO; 3];
            for deg in 0..=chart.order {
                for l in 0..=deg {
                    let k = deg - l;
                    let w = z1.powi(k as u32) * z2.powi(l as u32);
                    for i in 0..3 {
                        out[i] = out[i] + chart.coeff(k, l)[i] * w;
                    }
                }
            }
            out
        };
        let apply_c = |w: &[ComplexInterval; 3]| -> [ComplexInterval; 3] {
            let LomeliParams { a, b, c, alpha, tau } = params;
            match side.dir {
                Direction::Forward => [
                    w[2] + ComplexInterval::from_real(alpha)
                        + w[0] * tau
                        + w[0] * w[0] * a
                        + w[0] * w[1] * b
                        + w[1] * w[1] * c,
                    w[0],
                    w[1],
                ],
                Direction::Inverse => [
                    w[1],
                    w[2],
                    w[0] - ComplexInterval::from_real(alpha)
                        - w[1] * tau
                        - w[1] * w[1] * a
                        - w[1] * w[2] * b
                        - w[2] * w[2] * c,
                ],
            }
        };

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst = 0.0f64;
        for _ in 0..200 {
            // uniform on the closed unit polydisk, coordinates independent
            let r1: f64 = rng.gen::<f64>().sqrt();
            let t1: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let r2: f64 = rng.gen::<f64>().sqrt();
            let t2: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let z1 = ComplexInterval::point(r1 * t1.cos(), r1 * t1.sin());
            let z2 = ComplexInterval::point(r2 * t2.cos(), r2 * t2.sin());
            let p = eval(z1, z2);
            let gp = apply_c(&p);
            let pl = eval(z1 * side.mu, z2 * side.mu.conj());
            for i in 0..3 {
                let d = gp[i] - pl[i];
                worst = worst.max(d.modulus_up());
            }
        }
        assert!(worst <= eps, "sampled defect {worst} exceeds bound {eps}");
        assert!(worst > 0.0, "degenerate sampling");
    }

    #[test]
    fn order_too_low_when_contraction_cannot_absorb() {
        let vv = ValidationValues {
            eps_tol: Interval::point(1e-18),
            r: Interval::point(2.0),
            r_prime: Interval::point(0.5),
            mu_star: Interval::point(0.99),
            k1: Interval::point(1e6),
            k2: Interval::point(1.0),
            n_f: 3,
        };
        assert_eq!(delta_window(2, &vv).unwrap_err(), ChartError::OrderTooLow);
        // raising the order far enough flips it
        assert!(delta_window(4000, &vv).is_ok());
    }

    #[test]
    fn window_empty_when_defect_dwarfs_contraction() {
        let vv = ValidationValues {
            eps_tol: Interval::point(1.0),
            r: Interval::point(11.0),
            r_prime: Interval::point(1.0),
            mu_star: Interval::point(0.5),
            k1: Interval::point(1.0),
            k2: Interval::point(1.0),
            n_f: 3,
        };
        assert_eq!(delta_window(3, &vv).unwrap_err(), ChartError::WindowEmpty);
    }

    #[test]
    fn neutral_multiplier_is_rejected() {
        let params = arc_params();
        let (p1, _) = fixed_points(&params).unwrap();
        let mut chart = solve_homological(&p1, &params, ManifoldKind::Unstable, 3, 0.1).unwrap();
        chart.eig = ComplexInterval::point(0.6, -0.8); // modulus 1
        let err = validation_values(&chart, &params, None).unwrap_err();
        assert_eq!(err, ChartError::HyperbolicityMarginTooSmall);
    }
}
