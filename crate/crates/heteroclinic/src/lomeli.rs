//! The quadratic volume-preserving family under study.
//!
//! Forward map: f(x,y,z) = (z + α + τx + ax² + bxy + cy², x, y) with
//! a + b + c = 1. Its inverse is again quadratic,
//! g(x,y,z) = (y, z, x − α − τy − ay² − byz − cz²), and both directions have
//! Jacobian determinant identically 1. Fixed points sit on the diagonal
//! t·(1,1,1) with t² + τt + α = 0; at the parameters of interest each carries
//! one real eigenvalue and a complex pair, and the two points have complex
//! pairs of opposite stability.

use crate::complex::ComplexInterval;
use crate::interval::Interval;
use crate::linalg::{IntervalMatrix, IntervalVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("fixed-point discriminant not verified positive")]
    ComplexFixedPoints,
    #[error("eigenvalue enclosure could not be verified")]
    EigenvalueVerificationFailed,
    #[error("parameter normalization a+b+c=1 not satisfied")]
    ParamsNotNormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LomeliParams {
    pub a: Interval,
    pub b: Interval,
    pub c: Interval,
    pub alpha: Interval,
    pub tau: Interval,
}

/// Midpoint shadow of the parameters, for the non-rigorous twins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub tau: f64,
}

impl LomeliParams {
    pub fn new(
        a: Interval,
        b: Interval,
        c: Interval,
        alpha: Interval,
        tau: Interval,
    ) -> Result<LomeliParams, MapError> {
        if !(a + b + c).contains(1.0) {
            return Err(MapError::ParamsNotNormalized);
        }
        Ok(LomeliParams { a, b, c, alpha, tau })
    }

    pub fn mid(&self) -> FloatParams {
        FloatParams {
            a: self.a.mid(),
            b: self.b.mid(),
            c: self.c.mid(),
            alpha: self.alpha.mid(),
            tau: self.tau.mid(),
        }
    }
}

pub fn apply(p: &IntervalVector, params: &LomeliParams, dir: Direction) -> IntervalVector {
    assert_eq!(p.dim(), 3);
    let (x, y, z) = (p[0], p[1], p[2]);
    let LomeliParams { a, b, c, alpha, tau } = *params;
    match dir {
        Direction::Forward => {
            let head = z + alpha + tau * x + a * x.square() + b * (x * y) + c * y.square();
            IntervalVector {
                entries: vec![head, x, y],
            }
        }
        Direction::Inverse => {
            let tail = x - alpha - tau * y - a * y.square() - b * (y * z) - c * z.square();
            IntervalVector {
                entries: vec![y, z, tail],
            }
        }
    }
}

pub fn apply_f(p: &[f64; 3], params: &FloatParams, dir: Direction) -> [f64; 3] {
    let [x, y, z] = *p;
    let FloatParams { a, b, c, alpha, tau } = *params;
    match dir {
        Direction::Forward => [z + alpha + tau * x + a * x * x + b * x * y + c * y * y, x, y],
        Direction::Inverse => [y, z, x - alpha - tau * y - a * y * y - b * y * z - c * z * z],
    }
}

pub fn jacobian(p: &IntervalVector, params: &LomeliParams, dir: Direction) -> IntervalMatrix {
    assert_eq!(p.dim(), 3);
    let (x, y, z) = (p[0], p[1], p[2]);
    let LomeliParams { a, b, c, tau, .. } = *params;
    let zero = Interval::ZERO;
    let one = Interval::ONE;
    match dir {
        Direction::Forward => IntervalMatrix::from_rows(&[
            &[tau + a * 2.0 * x + b * y, b * x + c * 2.0 * y, one],
            &[one, zero, zero],
            &[zero, one, zero],
        ]),
        Direction::Inverse => IntervalMatrix::from_rows(&[
            &[zero, one, zero],
            &[zero, zero, one],
            &[one, -tau - a * 2.0 * y - b * z, -(b * y) - c * 2.0 * z],
        ]),
    }
}

pub fn jacobian_f(p: &[f64; 3], params: &FloatParams, dir: Direction) -> crate::floatmat::FMat {
    use crate::floatmat::FMat;
    let [x, y, z] = *p;
    let FloatParams { a, b, c, tau, .. } = *params;
    match dir {
        Direction::Forward => FMat::from_rows(&[
            &[tau + 2.0 * a * x + b * y, b * x + 2.0 * c * y, 1.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
        ]),
        Direction::Inverse => FMat::from_rows(&[
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[1.0, -tau - 2.0 * a * y - b * z, -b * y - 2.0 * c * z],
        ]),
    }
}

/// One symmetric second-derivative matrix per map component. The map is
/// quadratic, so these are parameter constants and third derivatives vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianSequence {
    pub matrices: Vec<IntervalMatrix>,
}

pub fn hessian_sequence(params: &LomeliParams, dir: Direction) -> HessianSequence {
    let LomeliParams { a, b, c, .. } = *params;
    let zero = Interval::ZERO;
    let z3 = IntervalMatrix::zeros(3, 3);
    match dir {
        Direction::Forward => {
            let h1 = IntervalMatrix::from_rows(&[
                &[a * 2.0, b, zero],
                &[b, c * 2.0, zero],
                &[zero, zero, zero],
            ]);
            HessianSequence {
                matrices: vec![h1, z3.clone(), z3],
            }
        }
        Direction::Inverse => {
            let h3 = IntervalMatrix::from_rows(&[
                &[zero, zero, zero],
                &[zero, -(a * 2.0), -b],
                &[zero, -b, -(c * 2.0)],
            ]);
            HessianSequence {
                matrices: vec![z3.clone(), z3, h3],
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    StablePair,
    UnstablePair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointData {
    pub point: IntervalVector,
    /// The complex eigenvalue with negative imaginary part.
    pub eigenvalue_pair: ComplexInterval,
    pub real_eigenvalue: Interval,
    /// Exactly (λ², λ, 1).
    pub eigvec_pair: Vec<ComplexInterval>,
    pub stability: Stability,
}

/// Both fixed points with verified eigen-data, the one with the unstable
/// complex pair first.
pub fn fixed_points(params: &LomeliParams) -> Result<(FixedPointData, FixedPointData), MapError> {
    let disc = params.tau.square() - params.alpha * 4.0;
    if disc.lo() <= 0.0 {
        return Err(MapError::ComplexFixedPoints);
    }
    let sq = disc.sqrt().expect("positive discriminant");
    let t_plus = (-params.tau + sq) * 0.5;
    let t_minus = (-params.tau - sq) * 0.5;

    let mut unstable = None;
    let mut stable = None;
    for t in [t_plus, t_minus] {
        let point = IntervalVector {
            entries: vec![t, t, t],
        };
        let data = eigen_data(&point, params)?;
        match data.stability {
            Stability::UnstablePair => unstable = Some(data),
            Stability::StablePair => stable = Some(data),
        }
    }
    match (unstable, stable) {
        (Some(u), Some(s)) => Ok((u, s)),
        _ => Err(MapError::EigenvalueVerificationFailed),
    }
}

/// Characteristic polynomial of Df at a diagonal fixed point t·(1,1,1):
/// μ³ − Aμ² − Bμ − 1 with A = τ + (2a+b)t and B = (b+2c)t.
fn char_poly_coeffs(t: Interval, params: &LomeliParams) -> (Interval, Interval) {
    let a_coef = params.tau + (params.a * 2.0 + params.b) * t;
    let b_coef = (params.b + params.c * 2.0) * t;
    (a_coef, b_coef)
}

/// Bisection root of μ³ − Aμ² − Bμ − 1 (unique real root when the other two
/// are a complex pair).
fn real_root_cubic(a: f64, b: f64) -> f64 {
    let p = |m: f64| ((m - a) * m - b) * m - 1.0;
    let bound = 2.0 + a.abs() + b.abs();
    let (mut lo, mut hi) = (-bound, bound);
    debug_assert!(p(lo) < 0.0 && p(hi) > 0.0);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        if p(m) < 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Verified eigen-data at a fixed-point enclosure.
///
/// The real root is verified by a 1D interval Newton step, the complex pair
/// by a Krawczyk step on the coupled system in (re λ, im λ):
///   g₁ = x³ − 3xy² − A(x² − y²) − Bx − 1,
///   g₂ = 3x² − y² − 2Ax − B       (the imaginary part with a factor y removed).
pub fn eigen_data(fp: &IntervalVector, params: &LomeliParams) -> Result<FixedPointData, MapError> {
    assert_eq!(fp.dim(), 3);
    let t = fp[0];
    let (ca, cb) = char_poly_coeffs(t, params);

    let real_eigenvalue = verify_real_root(ca, cb)?;
    let (x, y) = verify_complex_pair(ca, cb)?;
    // take the representative with negative imaginary part
    let lambda = ComplexInterval::new(x, y);

    // cross-check: the three eigenvalues multiply to det Df = 1
    let product = lambda.modulus_sq() * real_eigenvalue;
    if !product.contains(1.0) {
        return Err(MapError::EigenvalueVerificationFailed);
    }

    let m2 = lambda.modulus_sq();
    let stability = if m2.lo() > 1.0 {
        Stability::UnstablePair
    } else if m2.hi() < 1.0 {
        Stability::StablePair
    } else {
        return Err(MapError::EigenvalueVerificationFailed);
    };

    let eigvec_pair = vec![lambda * lambda, lambda, ComplexInterval::ONE];
    Ok(FixedPointData {
        point: fp.clone(),
        eigenvalue_pair: lambda,
        real_eigenvalue,
        eigvec_pair,
        stability,
    })
}

fn verify_real_root(ca: Interval, cb: Interval) -> Result<Interval, MapError> {
    let p = |m: Interval| ((m - ca) * m - cb) * m - Interval::ONE;
    let dp = |m: Interval| (m * 3.0 - ca * 2.0) * m - cb;
    let approx = real_root_cubic(ca.mid(), cb.mid());

    let mut w = 1e-13 * (1.0 + approx.abs());
    for _ in 0..12 {
        let x = Interval::new(approx - w, approx + w);
        let m = Interval::point(x.mid());
        let deriv = dp(x);
        if let Ok(step) = p(m).checked_div(&deriv) {
            let n = m - step;
            if x.interior_encloses(&n) {
                // refine: the Newton image still contains the root
                let mut enc = n;
                for _ in 0..3 {
                    let m = Interval::point(enc.mid());
                    let Ok(step) = p(m).checked_div(&dp(enc)) else { break };
                    match (m - step).intersect(&enc) {
                        Some(next) => enc = next,
                        None => break,
                    }
                }
                return Ok(enc);
            }
        }
        w *= 8.0;
    }
    Err(MapError::EigenvalueVerificationFailed)
}

fn verify_complex_pair(ca: Interval, cb: Interval) -> Result<(Interval, Interval), MapError> {
    use crate::floatmat::lu_inverse;
    use crate::linalg::IntervalMatrix as IM;

    // float seed from deflation: μ³−Aμ²−Bμ−1 = (μ−r)(μ² + (r−A)μ + 1/r)
    let (a, b) = (ca.mid(), cb.mid());
    let r = real_root_cubic(a, b);
    let p = r - a;
    let q = 1.0 / r;
    let disc = p * p - 4.0 * q;
    if disc >= 0.0 {
        return Err(MapError::EigenvalueVerificationFailed);
    }
    let x0 = -p / 2.0;
    let y0 = -(-disc).sqrt() / 2.0; // negative-imaginary representative

    let g = |x: Interval, y: Interval| -> IntervalVector {
        let g1 = x.powi(3) - x * y.square() * 3.0 - ca * (x.square() - y.square()) - cb * x
            - Interval::ONE;
        let g2 = x.square() * 3.0 - y.square() - ca * x * 2.0 - cb;
        IntervalVector { entries: vec![g1, g2] }
    };
    let dg = |x: Interval, y: Interval| -> IM {
        IM::from_rows(&[
            &[
                x.square() * 3.0 - y.square() * 3.0 - ca * x * 2.0 - cb,
                -(x * y * 6.0) + ca * y * 2.0,
            ],
            &[x * 6.0 - ca * 2.0, -(y * 2.0)],
        ])
    };

    let scale = 1.0 + x0.abs().max(y0.abs());
    let mut w = 1e-13 * scale;
    for _ in 0..12 {
        let bx = Interval::new(x0 - w, x0 + w);
        let by = Interval::new(y0 - w, y0 + w);
        let xv = IntervalVector { entries: vec![bx, by] };
        let mid = IntervalVector::from_points(&[bx.mid(), by.mid()]);
        let j = dg(bx, by);
        let Some(c) = lu_inverse(&j.mid()) else {
            w *= 8.0;
            continue;
        };
        let ci = IM::from_fmat(&c);
        let gk = &(&IM::identity(2) - &(&ci * &j)) * &(&xv - &mid);
        let k = &(&mid - &ci.apply(&g(mid[0], mid[1]))) + &gk;
        if xv.contains_vector(&k, true).expect("dim 2") {
            // tighten by intersecting repeated Krawczyk images
            let mut enc = k;
            for _ in 0..3 {
                let mid = IntervalVector::from_points(&enc.mid());
                let j = dg(enc[0], enc[1]);
                let Some(c) = lu_inverse(&j.mid()) else { break };
                let ci = IM::from_fmat(&c);
                let gk = &(&IM::identity(2) - &(&ci * &j)) * &(&enc - &mid);
                let k = &(&mid - &ci.apply(&g(mid[0], mid[1]))) + &gk;
                match k.intersect(&enc) {
                    Some(next) => enc = next,
                    None => break,
                }
            }
            return Ok((enc[0], enc[1]));
        }
        w *= 8.0;
    }
    Err(MapError::EigenvalueVerificationFailed)
}
