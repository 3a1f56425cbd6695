//! Taylor parameterizations of the 2D stable/unstable manifolds.
//!
//! A chart is a truncated power series P^N(z₁,z₂) = Σ p_{kl} z₁ᵏz₂ˡ solving
//! the conjugacy f(P(z)) = P(λz₁, λ̄z₂) through order N, with p₀₀ the fixed
//! point and p₁₀ a chosen multiple of the eigenvector. Coefficients solve the
//! homological equations (D − λᵏλ̄ˡ I) p_{kl} = s_{kl}, where s_{kl} collects
//! quadratic cross terms of lower order.
//!
//! Stable charts conjugate the forward map with the stable pair. Unstable
//! charts conjugate the inverse map with 1/λ (again a contraction), which is
//! the same formal series the forward conjugacy with λ defines; validation
//! then works identically on both sides. The stored `eig` is always the
//! forward-map multiplier of the chart parameter, so inner dynamics read
//! f(P(z)) = P(λz) with |λ| > 1 on the unstable side.
//!
//! Real evaluation goes through P̂(s,t) = P(s+it, s−it), whose coefficients
//! are real by the conjugate symmetry p_{lk} = p̄_{kl}.

use crate::complex::ComplexInterval;
use crate::interval::Interval;
use crate::linalg::{verified_solve_complex, IntervalMatrix, IntervalVector, LinalgError};
use crate::lomeli::{jacobian, Direction, FixedPointData, LomeliParams, Stability};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("homological matrix could not be verified invertible at order ({0},{1})")]
    SingularHomologicalMatrix(usize, usize),
    #[error("coefficient magnitudes exploded at order ({0},{1}); reduce the eigenvector scaling")]
    CoefficientOverflow(usize, usize),
    #[error("contraction multiplier not verified strictly inside the unit circle")]
    HyperbolicityMarginTooSmall,
    #[error("truncation order too low for the contraction to absorb the tail")]
    OrderTooLow,
    #[error("tail bound window is empty: c2 >= c1")]
    WindowEmpty,
    #[error("evaluation point outside the shrunk disk")]
    OutsideShrunkDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Stable,
    Unstable,
}

/// Index into the triangular coefficient grid, ordered by total degree then
/// by the second exponent: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), …
#[inline]
pub fn tri_idx(k: usize, l: usize) -> usize {
    let d = k + l;
    d * (d + 1) / 2 + l
}

/// Number of coefficients with k+l ≤ n.
#[inline]
pub fn tri_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorChart {
    /// p_{kl} ∈ C³, triangular order (see `tri_idx`), k+l ≤ order.
    pub coeffs: Vec<[ComplexInterval; 3]>,
    pub order: usize,
    /// Forward-map multiplier of the chart parameter (|eig| > 1 on the
    /// unstable side, < 1 on the stable side). Negative imaginary part.
    pub eig: ComplexInterval,
    pub manifold_kind: ManifoldKind,
    /// Length factor applied to the unit-form eigenvector.
    pub scaling: f64,
    /// Coefficients of P̂(s,t) = P(s+it, s−it), triangular in (s-degree,
    /// t-degree) with the same indexing.
    pub real_coeffs: Vec<[Interval; 3]>,
    /// Verified sup bound for the truncation tail over the unit disk, once
    /// `validate_tail` has succeeded.
    pub tail_delta: Option<Interval>,
}

/// Conjugacy data resolved per manifold kind: which map direction the chart
/// is validated against and the contraction multiplier for that direction.
pub(crate) struct ConjugacySide {
    pub dir: Direction,
    pub mu: ComplexInterval,
}

impl TaylorChart {
    /// The map direction whose conjugacy this chart solves with a
    /// contraction, and the corresponding multiplier (the stable-side eig or
    /// the reciprocal of the unstable one).
    pub(crate) fn conjugacy_side(&self) -> ConjugacySide {
        match self.manifold_kind {
            ManifoldKind::Stable => ConjugacySide {
                dir: Direction::Forward,
                mu: self.eig,
            },
            ManifoldKind::Unstable => ConjugacySide {
                dir: Direction::Inverse,
                mu: self.eig.recip().expect("hyperbolic eigenvalue"),
            },
        }
    }

    pub fn coeff(&self, k: usize, l: usize) -> &[ComplexInterval; 3] {
        &self.coeffs[tri_idx(k, l)]
    }
}

/// The quadratic part of the map in the direction being conjugated: the
/// target component index, the two argument components, and the sign.
pub(crate) fn quad_form(dir: Direction) -> (usize, usize, usize, f64) {
    match dir {
        Direction::Forward => (0, 0, 1, 1.0),
        Direction::Inverse => (2, 1, 2, -1.0),
    }
}

/// Bilinear form of the quadratic part applied to two coefficient vectors:
/// sign · (a·u_m v_m + b/2·(u_m v_n + u_n v_m) + c·u_n v_n).
pub(crate) fn quad_bilinear(
    params: &LomeliParams,
    dir: Direction,
    u: &[ComplexInterval; 3],
    v: &[ComplexInterval; 3],
) -> ComplexInterval {
    let (_, m, n, sign) = quad_form(dir);
    let half_b = params.b * 0.5;
    let term = u[m] * v[m] * params.a + (u[m] * v[n] + u[n] * v[m]) * half_b + u[n] * v[n] * params.c;
    term * sign
}

/// Solve the homological equations through order N.
///
/// `fp` must carry verified eigen-data; the manifold kind must match its
/// stability (unstable chart at the unstable-pair point).
pub fn solve_homological(
    fp: &FixedPointData,
    params: &LomeliParams,
    kind: ManifoldKind,
    order: usize,
    scaling: f64,
) -> Result<TaylorChart, ChartError> {
    assert!(order >= 2, "need at least the quadratic order");
    assert!(scaling > 0.0);
    match (kind, fp.stability) {
        (ManifoldKind::Unstable, Stability::UnstablePair) => {}
        (ManifoldKind::Stable, Stability::StablePair) => {}
        _ => panic!("manifold kind does not match fixed-point stability"),
    }

    let (dir, mu) = match kind {
        ManifoldKind::Stable => (Direction::Forward, fp.eigenvalue_pair),
        ManifoldKind::Unstable => (
            Direction::Inverse,
            fp.eigenvalue_pair.recip().expect("hyperbolic eigenvalue"),
        ),
    };

    // first-order data: eigenvector of the direction's Jacobian at eigenvalue
    // mu, in the exact closed form the shift structure provides
    let xi: [ComplexInterval; 3] = match dir {
        Direction::Forward => [mu * mu, mu, ComplexInterval::ONE],
        Direction::Inverse => [ComplexInterval::ONE, mu, mu * mu],
    };

    let mut coeffs: Vec<[ComplexInterval; 3]> = vec![[ComplexInterval::ZERO; 3]; tri_len(order)];
    for i in 0..3 {
        coeffs[tri_idx(0, 0)][i] = ComplexInterval::from_real(fp.point[i]);
        coeffs[tri_idx(1, 0)][i] = xi[i] * scaling;
        coeffs[tri_idx(0, 1)][i] = (xi[i] * scaling).conj();
    }

    // powers of the multiplier for the diagonal shifts
    let mut mu_pow = vec![ComplexInterval::ONE; order + 1];
    let mut mu_bar_pow = vec![ComplexInterval::ONE; order + 1];
    for d in 1..=order {
        mu_pow[d] = mu_pow[d - 1] * mu;
        mu_bar_pow[d] = mu_bar_pow[d - 1] * mu.conj();
    }

    let d_matrix = jacobian(&fp.point, params, dir);
    let (target, ..) = quad_form(dir);

    for deg in 2..=order {
        for l in 0..=deg {
            let k = deg - l;
            if k < l {
                // conjugate mirror of the already-solved (l, k)
                for i in 0..3 {
                    coeffs[tri_idx(k, l)][i] = coeffs[tri_idx(l, k)][i].conj();
                }
                continue;
            }

            // s_{kl}: quadratic convolution over splittings with both factors
            // of order ≥ 1 (equivalently, excluding the (0,0) and (k,l) terms)
            let mut s = ComplexInterval::ZERO;
            for i in 0..=k {
                for j in 0..=l {
                    let o1 = i + j;
                    let o2 = (k - i) + (l - j);
                    if o1 == 0 || o2 == 0 {
                        continue;
                    }
                    let u = coeffs[tri_idx(i, j)];
                    let v = coeffs[tri_idx(k - i, l - j)];
                    s = s + quad_bilinear(params, dir, &u, &v);
                }
            }
            let mut rhs = [ComplexInterval::ZERO; 3];
            rhs[target] = -s;

            // (D − μᵏμ̄ˡ I) p = rhs
            let shift = mu_pow[k] * mu_bar_pow[l];
            let mut m = vec![vec![ComplexInterval::ZERO; 3]; 3];
            for r in 0..3 {
                for c in 0..3 {
                    m[r][c] = ComplexInterval::from_real(d_matrix[(r, c)]);
                }
                m[r][r] = m[r][r] - shift;
            }
            let sol = verified_solve_complex(&m, &rhs).map_err(|e| match e {
                LinalgError::SingularEnclosure => ChartError::SingularHomologicalMatrix(k, l),
                LinalgError::ShapeMismatch => unreachable!("fixed 3×3 shape"),
            })?;
            let mut p: [ComplexInterval; 3] = [sol[0], sol[1], sol[2]];
            // charts with astronomically large coefficients are divergent in
            // practice; bail out before products can overflow downstream
            for entry in &p {
                if !(entry.re.mag() <= 1e100 && entry.im.mag() <= 1e100) {
                    return Err(ChartError::CoefficientOverflow(k, l));
                }
            }
            if k == l {
                // diagonal coefficients are self-conjugate, so the imaginary
                // parts provably contain 0; tighten them symmetrically
                for entry in &mut p {
                    let im = entry
                        .im
                        .intersect(&-entry.im)
                        .expect("self-conjugate coefficient lost zero");
                    *entry = ComplexInterval::new(entry.re, im);
                }
            }
            coeffs[tri_idx(k, l)] = p;
        }
    }

    let real_coeffs = realify(&coeffs, order);
    Ok(TaylorChart {
        coeffs,
        order,
        eig: fp.eigenvalue_pair,
        manifold_kind: kind,
        scaling,
        real_coeffs,
        tail_delta: None,
    })
}

/// Scale the chart parameter: p_{kl} ↦ factor^{k+l} p_{kl}. Equivalent to
/// solving with the eigenvector scaled by `factor`.
pub fn rescale(chart: &TaylorChart, factor: f64) -> TaylorChart {
    assert!(factor > 0.0);
    let mut coeffs = chart.coeffs.clone();
    let f = Interval::point(factor);
    let mut pow = Interval::ONE;
    for deg in 0..=chart.order {
        if deg > 0 {
            pow = pow * f;
        }
        for l in 0..=deg {
            let k = deg - l;
            for entry in &mut coeffs[tri_idx(k, l)] {
                *entry = *entry * pow;
            }
        }
    }
    let real_coeffs = realify(&coeffs, chart.order);
    TaylorChart {
        coeffs,
        order: chart.order,
        eig: chart.eig,
        manifold_kind: chart.manifold_kind,
        scaling: chart.scaling * factor,
        real_coeffs,
        tail_delta: None,
    }
}

/// Pascal triangle through row n, exact in f64 (entries stay far below 2⁵³
/// for the orders used here).
fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut row = vec![1u64; k + 1];
        for m in 1..k {
            row[m] = rows[k - 1][m - 1] + rows[k - 1][m];
        }
        rows.push(row);
    }
    rows.into_iter()
        .map(|row| row.into_iter().map(|v| v as f64).collect())
        .collect()
}

/// Coefficients of P̂(s,t) = P(s+it, s−it):
/// (s+it)ᵏ(s−it)ˡ = Σ_{m,n} C(k,m) C(l,n) (−1)ⁿ i^{m+n} s^{k+l−m−n} t^{m+n}.
/// The results are mathematically real; the imaginary enclosures are checked
/// to contain 0 and dropped.
fn realify(coeffs: &[[ComplexInterval; 3]], order: usize) -> Vec<[Interval; 3]> {
    let binom = binomials(order);
    let mut acc: Vec<[ComplexInterval; 3]> = vec![[ComplexInterval::ZERO; 3]; tri_len(order)];
    for deg in 0..=order {
        for l in 0..=deg {
            let k = deg - l;
            let p = &coeffs[tri_idx(k, l)];
            for m in 0..=k {
                for n in 0..=l {
                    let u = k + l - m - n;
                    let v = m + n;
                    // two exact-integer scalings, kept separate so each stays
                    // below 2⁵³
                    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
                    let c1 = binom[k][m] * sign;
                    let c2 = binom[l][n];
                    let slot = &mut acc[tri_idx(u, v)];
                    for i in 0..3 {
                        let scaled = mul_i_power(p[i] * c1 * c2, v % 4);
                        slot[i] = slot[i] + scaled;
                    }
                }
            }
        }
    }
    acc.iter()
        .map(|entry| {
            let mut out = [Interval::ZERO; 3];
            for i in 0..3 {
                assert!(
                    entry[i].im.contains(0.0),
                    "real-chart coefficient with nonzero imaginary part: {:?}",
                    entry[i]
                );
                out[i] = entry[i].re;
            }
            out
        })
        .collect()
}

fn mul_i_power(z: ComplexInterval, q: usize) -> ComplexInterval {
    match q {
        0 => z,
        1 => ComplexInterval::new(-z.im, z.re),
        2 => -z,
        3 => ComplexInterval::new(z.im, -z.re),
        _ => unreachable!(),
    }
}

/// Polynomial part of the real chart: value ∈ R³.
pub fn poly_eval(chart: &TaylorChart, s: Interval, t: Interval) -> IntervalVector {
    let n = chart.order;
    let (s_pow, t_pow) = power_tables(s, t, n);
    let mut out = [Interval::ZERO; 3];
    for deg in 0..=n {
        for v in 0..=deg {
            let u = deg - v;
            let c = &chart.real_coeffs[tri_idx(u, v)];
            let w = s_pow[u] * t_pow[v];
            for i in 0..3 {
                out[i] = out[i] + c[i] * w;
            }
        }
    }
    IntervalVector {
        entries: out.to_vec(),
    }
}

/// Polynomial part of the real chart: 3×2 Jacobian in (s,t).
pub fn poly_jacobian(chart: &TaylorChart, s: Interval, t: Interval) -> IntervalMatrix {
    let n = chart.order;
    let (s_pow, t_pow) = power_tables(s, t, n);
    let mut out = IntervalMatrix::zeros(3, 2);
    for deg in 1..=n {
        for v in 0..=deg {
            let u = deg - v;
            let c = &chart.real_coeffs[tri_idx(u, v)];
            if u > 0 {
                let w = s_pow[u - 1] * t_pow[v] * (u as f64);
                for i in 0..3 {
                    out[(i, 0)] = out[(i, 0)] + c[i] * w;
                }
            }
            if v > 0 {
                let w = s_pow[u] * t_pow[v - 1] * (v as f64);
                for i in 0..3 {
                    out[(i, 1)] = out[(i, 1)] + c[i] * w;
                }
            }
        }
    }
    out
}

fn power_tables(s: Interval, t: Interval, n: usize) -> (Vec<Interval>, Vec<Interval>) {
    let mut s_pow = vec![Interval::ONE; n + 1];
    let mut t_pow = vec![Interval::ONE; n + 1];
    for d in 1..=n {
        s_pow[d] = s_pow[d - 1] * s;
        t_pow[d] = t_pow[d - 1] * t;
    }
    (s_pow, t_pow)
}

/// Certified chart evaluation inside the shrunk disk s²+t² ≤ e^{−2σ}.
///
/// Value: polynomial enclosure ⊕ [−δ, δ] per component. Derivative:
/// polynomial Jacobian ⊕ [−2πδ/σ, 2πδ/σ] per entry (a Cauchy bound on the
/// tail derivative, valid for σ ≤ 1 because the tail is analytic on the full
/// unit disk with sup bound δ).
pub fn chart_eval(
    chart: &TaylorChart,
    s: Interval,
    t: Interval,
    sigma: f64,
) -> Result<(IntervalVector, IntervalMatrix), ChartError> {
    assert!(sigma > 0.0 && sigma <= 1.0, "shrink factor out of range");
    let delta = chart
        .tail_delta
        .expect("chart_eval requires a validated tail bound");

    let radius_sq = s.square() + t.square();
    let shrunk = (Interval::point(sigma) * -2.0).exp();
    if radius_sq.hi() > shrunk.lo() {
        return Err(ChartError::OutsideShrunkDomain);
    }

    let tail = Interval::new(-delta.hi(), delta.hi());
    let mut value = poly_eval(chart, s, t);
    for i in 0..3 {
        value[i] = value[i] + tail;
    }

    let cauchy = Interval::pi() * delta * 2.0;
    let cauchy = cauchy
        .checked_div(&Interval::point(sigma))
        .expect("sigma positive");
    let tail_d = Interval::new(-cauchy.hi(), cauchy.hi());
    let mut jac = poly_jacobian(chart, s, t);
    for i in 0..3 {
        for j in 0..2 {
            jac[(i, j)] = jac[(i, j)] + tail_d;
        }
    }
    Ok((value, jac))
}

/// Float twin of `poly_eval` on coefficient midpoints.
pub fn poly_eval_f(chart: &TaylorChart, s: f64, t: f64) -> [f64; 3] {
    let n = chart.order;
    let mut out = [0.0; 3];
    let mut s_pow = vec![1.0; n + 1];
    let mut t_pow = vec![1.0; n + 1];
    for d in 1..=n {
        s_pow[d] = s_pow[d - 1] * s;
        t_pow[d] = t_pow[d - 1] * t;
    }
    for deg in 0..=n {
        for v in 0..=deg {
            let u = deg - v;
            let c = &chart.real_coeffs[tri_idx(u, v)];
            let w = s_pow[u] * t_pow[v];
            for i in 0..3 {
                out[i] += c[i].mid() * w;
            }
        }
    }
    out
}

/// Float twin of `poly_jacobian`: rows are components, columns (∂s, ∂t).
pub fn poly_jacobian_f(chart: &TaylorChart, s: f64, t: f64) -> [[f64; 2]; 3] {
    let n = chart.order;
    let mut out = [[0.0; 2]; 3];
    let mut s_pow = vec![1.0; n + 1];
    let mut t_pow = vec![1.0; n + 1];
    for d in 1..=n {
        s_pow[d] = s_pow[d - 1] * s;
        t_pow[d] = t_pow[d - 1] * t;
    }
    for deg in 1..=n {
        for v in 0..=deg {
            let u = deg - v;
            let c = &chart.real_coeffs[tri_idx(u, v)];
            if u > 0 {
                let w = (u as f64) * s_pow[u - 1] * t_pow[v];
                for i in 0..3 {
                    out[i][0] += c[i].mid() * w;
                }
            }
            if v > 0 {
                let w = (v as f64) * s_pow[u] * t_pow[v - 1];
                for i in 0..3 {
                    out[i][1] += c[i].mid() * w;
                }
            }
        }
    }
    out
}

/// Interval second derivatives of the real chart over a parameter box:
/// three symmetric 2×2 matrices, one per component. Evaluated on a box this
/// encloses the Hessian at every interior point, which is what mean-value
/// remainder forms need.
pub fn poly_hessian(chart: &TaylorChart, s: Interval, t: Interval) -> crate::lomeli::HessianSequence {
    let n = chart.order;
    let (s_pow, t_pow) = power_tables(s, t, n);
    let mut out = vec![IntervalMatrix::zeros(2, 2); 3];
    for deg in 2..=n {
        for v in 0..=deg {
            let u = deg - v;
            let c = &chart.real_coeffs[tri_idx(u, v)];
            for i in 0..3 {
                if u >= 2 {
                    let w = s_pow[u - 2] * t_pow[v] * ((u * (u - 1)) as f64);
                    out[i][(0, 0)] = out[i][(0, 0)] + c[i] * w;
                }
                if u >= 1 && v >= 1 {
                    let w = s_pow[u - 1] * t_pow[v - 1] * ((u * v) as f64);
                    out[i][(0, 1)] = out[i][(0, 1)] + c[i] * w;
                }
                if v >= 2 {
                    let w = s_pow[u] * t_pow[v - 2] * ((v * (v - 1)) as f64);
                    out[i][(1, 1)] = out[i][(1, 1)] + c[i] * w;
                }
            }
        }
    }
    for m in &mut out {
        m[(1, 0)] = m[(0, 1)];
    }
    crate::lomeli::HessianSequence { matrices: out }
}

/// Float second derivatives of the real chart: per component, the symmetric
/// 2×2 matrix [[∂ss, ∂st], [∂st, ∂tt]].
pub fn poly_hessian_f(chart: &TaylorChart, s: f64, t: f64) -> [[[f64; 2]; 2]; 3] {
    let n = chart.order;
    let mut out = [[[0.0; 2]; 2]; 3];
    let mut s_pow = vec![1.0; n + 1];
    let mut t_pow = vec![1.0; n + 1];
    for d in 1..=n {
        s_pow[d] = s_pow[d - 1] * s;
        t_pow[d] = t_pow[d - 1] * t;
    }
    for deg in 2..=n {
        for v in 0..=deg {
            let u = deg - v;
            let c = &chart.real_coeffs[tri_idx(u, v)];
            for i in 0..3 {
                let cm = c[i].mid();
                if u >= 2 {
                    out[i][0][0] += cm * (u * (u - 1)) as f64 * s_pow[u - 2] * t_pow[v];
                }
                if u >= 1 && v >= 1 {
                    let x = cm * (u * v) as f64 * s_pow[u - 1] * t_pow[v - 1];
                    out[i][0][1] += x;
                }
                if v >= 2 {
                    out[i][1][1] += cm * (v * (v - 1)) as f64 * s_pow[u] * t_pow[v - 2];
                }
            }
        }
    }
    for entry in &mut out {
        entry[1][0] = entry[0][1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::parse_interval_exact;
    use crate::lomeli::fixed_points;

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

    fn loop_params() -> LomeliParams {
        LomeliParams::new(
            Interval::point(0.5),
            Interval::point(-0.5),
            Interval::point(1.0),
            parse_interval_exact("-0.08999").unwrap(),
            parse_interval_exact("8/10").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn first_order_constraints() {
        let params = arc_params();
        let (p1, p2) = fixed_points(&params).unwrap();
        for (fp, kind) in [(&p1, ManifoldKind::Unstable), (&p2, ManifoldKind::Stable)] {
            let chart = solve_homological(fp, &params, kind, 3, 0.25).unwrap();
            for i in 0..3 {
                assert!(chart.coeff(0, 0)[i].re.encloses(&fp.point[i]));
                assert!(chart.coeff(0, 0)[i].im.is_point());
            }
            // p01 is the conjugate of p10
            for i in 0..3 {
                let p10 = chart.coeff(1, 0)[i];
                let p01 = chart.coeff(0, 1)[i];
                assert_eq!(p01.re, p10.re);
                assert_eq!(p01.im, -p10.im);
            }
        }
    }

    #[test]
    fn conjugate_symmetry_all_orders() {
        let params = loop_params();
        let (p1, _) = fixed_points(&params).unwrap();
        let chart = solve_homological(&p1, &params, ManifoldKind::Unstable, 7, 0.3).unwrap();
        for deg in 0..=7usize {
            for l in 0..=deg {
                let k = deg - l;
                for i in 0..3 {
                    let a = chart.coeff(k, l)[i];
                    let b = chart.coeff(l, k)[i];
                    assert_eq!(a.re, b.re, "(({k},{l}))[{i}] re");
                    assert_eq!(a.im, -b.im, "(({k},{l}))[{i}] im");
                }
            }
        }
    }

    /// Independent composition oracle: build the full series of f(P(z)) and
    /// P(λz₁, λ̄z₂) with plain series arithmetic and check every coefficient
    /// of order ≤ N encloses 0 in the difference.
    fn composition_residual(chart: &TaylorChart, params: &LomeliParams) -> f64 {
        let n = chart.order;
        let side = chart.conjugacy_side();
        let series = |comp: usize| -> Vec<ComplexInterval> {
            let mut v = vec![ComplexInterval::ZERO; tri_len(n)];
            for (idx, c) in chart.coeffs.iter().enumerate() {
                v[idx] = c[comp];
            }
            v
        };
        // truncated product of two triangular series
        let product = |a: &[ComplexInterval], b: &[ComplexInterval]| -> Vec<ComplexInterval> {
            let mut out = vec![ComplexInterval::ZERO; tri_len(n)];
            for d1 in 0..=n {
                for l1 in 0..=d1 {
                    let k1 = d1 - l1;
                    for d2 in 0..=(n - d1) {
                        for l2 in 0..=d2 {
                            let k2 = d2 - l2;
                            let t = a[tri_idx(k1, l1)] * b[tri_idx(k2, l2)];
                            let slot = &mut out[tri_idx(k1 + k2, l1 + l2)];
                            *slot = *slot + t;
                        }
                    }
                }
            }
            out
        };

        let (x, y, z) = (series(0), series(1), series(2));
        let fp_of_p: [Vec<ComplexInterval>; 3] = match side.dir {
            Direction::Forward => {
                // (z + α + τx + ax² + bxy + cy², x, y)
                let xx = product(&x, &x);
                let xy = product(&x, &y);
                let yy = product(&y, &y);
                let mut head = vec![ComplexInterval::ZERO; tri_len(n)];
                for i in 0..tri_len(n) {
                    head[i] = z[i]
                        + x[i] * params.tau
                        + xx[i] * params.a
                        + xy[i] * params.b
                        + yy[i] * params.c;
                }
                head[0] = head[0] + ComplexInterval::from_real(params.alpha);
                [head, x.clone(), y.clone()]
            }
            Direction::Inverse => {
                let yy = product(&y, &y);
                let yz = product(&y, &z);
                let zz = product(&z, &z);
                let mut tail = vec![ComplexInterval::ZERO; tri_len(n)];
                for i in 0..tri_len(n) {
                    tail[i] = x[i]
                        - y[i] * params.tau
                        - yy[i] * params.a
                        - yz[i] * params.b
                        - zz[i] * params.c;
                }
                tail[0] = tail[0] - ComplexInterval::from_real(params.alpha);
                [y.clone(), z.clone(), tail]
            }
        };

        let mut worst: f64 = 0.0;
        for deg in 0..=n {
            for l in 0..=deg {
                let k = deg - l;
                let shift = side.mu.powi(k as u32) * side.mu.conj().powi(l as u32);
                for comp in 0..3 {
                    let lhs = fp_of_p[comp][tri_idx(k, l)];
                    let rhs = chart.coeff(k, l)[comp] * shift;
                    let resid = lhs - rhs;
                    assert!(
                        resid.contains(0.0, 0.0),
                        "residual at ({k},{l}) comp {comp}: {resid:?}"
                    );
                    worst = worst.max(resid.width_up());
                }
            }
        }
        worst
    }

    #[test]
    fn homological_residual_vanishes_formally() {
        let params = arc_params();
        let (p1, p2) = fixed_points(&params).unwrap();
        for (fp, kind) in [(&p1, ManifoldKind::Unstable), (&p2, ManifoldKind::Stable)] {
            let chart = solve_homological(fp, &params, kind, 5, 0.3).unwrap();
            let w = composition_residual(&chart, &params);
            assert!(w < 1e-12, "residual widths blew up: {w}");
        }
    }

    #[test]
    fn rescale_matches_direct_solve() {
        let params = arc_params();
        let (p1, _) = fixed_points(&params).unwrap();
        let chart = solve_homological(&p1, &params, ManifoldKind::Unstable, 6, 0.4).unwrap();

        let identical = rescale(&chart, 1.0);
        for idx in 0..chart.coeffs.len() {
            for i in 0..3 {
                assert!(identical.coeffs[idx][i].re.encloses(&chart.coeffs[idx][i].re));
                assert!(chart.coeffs[idx][i].re.encloses(&identical.coeffs[idx][i].re));
            }
        }

        let halved = rescale(&chart, 0.5);
        let direct = solve_homological(&p1, &params, ManifoldKind::Unstable, 6, 0.2).unwrap();
        // (2,3): factor 0.5⁵
        let want = chart.coeff(2, 3)[0] * (0.5f64).powi(5);
        let got = halved.coeff(2, 3)[0];
        assert!(got.re.intersect(&want.re).is_some());
        assert!(got.im.intersect(&want.im).is_some());
        // both are enclosures of the same true coefficients
        for deg in 0..=6usize {
            for l in 0..=deg {
                let k = deg - l;
                for i in 0..3 {
                    let a = halved.coeff(k, l)[i];
                    let b = direct.coeff(k, l)[i];
                    assert!(
                        a.re.intersect(&b.re).is_some() && a.im.intersect(&b.im).is_some(),
                        "disjoint enclosures at ({k},{l})[{i}]: {a:?} vs {b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn real_chart_tangent_columns() {
        let params = arc_params();
        let (_, p2) = fixed_points(&params).unwrap();
        let scaling = 0.35;
        let chart = solve_homological(&p2, &params, ManifoldKind::Stable, 4, scaling).unwrap();
        let jac = poly_jacobian(&chart, Interval::ZERO, Interval::ZERO);
        for i in 0..3 {
            let p10 = chart.coeff(1, 0)[i];
            let ds = p10.re * 2.0;
            let dt = -(p10.im * 2.0);
            assert!(jac[(i, 0)].intersect(&ds).is_some(), "∂s column {i}");
            assert!(jac[(i, 1)].intersect(&dt).is_some(), "∂t column {i}");
        }
    }

    #[test]
    fn real_chart_value_matches_complex_series() {
        let params = loop_params();
        let (p1, _) = fixed_points(&params).unwrap();
        let chart = solve_homological(&p1, &params, ManifoldKind::Unstable, 8, 0.3).unwrap();
        // P̂(s,t) must agree with the complex series at z = s+it
        let pts = [(0.1, -0.2), (0.35, 0.0), (-0.3, 0.3), (0.0, 0.45)];
        for (s, t) in pts {
            let real_val = poly_eval(&chart, Interval::point(s), Interval::point(t));
            let z = ComplexInterval::point(s, t);
            let zb = z.conj();
            for comp in 0..3 {
                let mut acc = ComplexInterval::ZERO;
                for deg in 0..=8usize {
                    for l in 0..=deg {
                        let k = deg - l;
                        acc = acc + chart.coeff(k, l)[comp] * z.powi(k as u32) * zb.powi(l as u32);
                    }
                }
                assert!(acc.im.contains(0.0));
                assert!(
                    acc.re.intersect(&real_val[comp]).is_some(),
                    "mismatch at ({s},{t}) comp {comp}: {:?} vs {:?}",
                    acc.re,
                    real_val[comp]
                );
            }
        }
    }

    #[test]
    fn chart_eval_demands_validated_tail_and_domain() {
        let params = arc_params();
        let (p1, _) = fixed_points(&params).unwrap();
        let mut chart = solve_homological(&p1, &params, ManifoldKind::Unstable, 4, 0.3).unwrap();
        chart.tail_delta = Some(Interval::point(1e-10));

        // in-domain: fixed point ± δ at the origin
        let (val, _) = chart_eval(&chart, Interval::ZERO, Interval::ZERO, 0.05).unwrap();
        for i in 0..3 {
            assert!(val[i].encloses(&(p1.point[i] + Interval::symmetric(1e-10 / 2.0))));
        }

        // outside the shrunk disk
        let e = chart_eval(&chart, Interval::point(0.999), Interval::ZERO, 0.05);
        assert_eq!(e.unwrap_err(), ChartError::OutsideShrunkDomain);
    }

    #[test]
    fn float_twins_track_interval_midpoints() {
        let params = arc_params();
        let (_, p2) = fixed_points(&params).unwrap();
        let chart = solve_homological(&p2, &params, ManifoldKind::Stable, 6, 0.3).unwrap();
        let (s, t) = (0.21, -0.4);
        let v = poly_eval(&chart, Interval::point(s), Interval::point(t));
        let vf = poly_eval_f(&chart, s, t);
        for i in 0..3 {
            assert!((v[i].mid() - vf[i]).abs() < 1e-16 + 1e-12 * vf[i].abs());
        }
        let j = poly_jacobian(&chart, Interval::point(s), Interval::point(t));
        let jf = poly_jacobian_f(&chart, s, t);
        for i in 0..3 {
            for c in 0..2 {
                assert!((j[(i, c)].mid() - jf[i][c]).abs() < 1e-12);
            }
        }
        // hessian twin vs finite differences of the jacobian twin
        let h = poly_hessian_f(&chart, s, t);
        let eps = 1e-6;
        let jp = poly_jacobian_f(&chart, s + eps, t);
        let jm = poly_jacobian_f(&chart, s - eps, t);
        for i in 0..3 {
            let fd = (jp[i][0] - jm[i][0]) / (2.0 * eps);
            assert!((h[i][0][0] - fd).abs() < 1e-5, "∂ss comp {i}: {} vs {}", h[i][0][0], fd);
        }
    }
}
