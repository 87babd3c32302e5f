//! Closed-form qubit maps in stacked-probability coordinates, in `f64`.
//!
//! Coordinates are `(p(+1|X), p(-1|X) | p(+1|Y), p(-1|Y) | p(+1|Z), p(-1|Z))`.
//! The gauge `(A, B, C)` with `A + B + C = 1` parametrises the freedom in
//! writing an affine map of normalised vectors as a linear one.

use nalgebra::{Matrix3, Matrix4, SMatrix, Vector3, Vector6};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

pub type Matrix6 = SMatrix<f64, 6, 6>;
pub type Matrix4x6 = SMatrix<f64, 4, 6>;
pub type Matrix6x4 = SMatrix<f64, 6, 4>;

/// Tolerance for direct substitution checks.
pub const SUBSTITUTION_TOL: f64 = 1e-12;
/// Tolerance for derived identities.
pub const DERIVED_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x5eed_2019;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gauge {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Gauge {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Gauge> {
        if ((a + b + c) - 1.0).abs() > SUBSTITUTION_TOL {
            return Err(Error::Gauge(format!("A + B + C = {} (expected 1)", a + b + c)));
        }
        Ok(Gauge { a, b, c })
    }

    /// Random gauge: `A`, `B` in `[-2, 2]` and `C = 1 - A - B`.
    pub fn random(rng: &mut impl Rng) -> Gauge {
        let a = rng.random_range(-2.0..2.0);
        let b = rng.random_range(-2.0..2.0);
        Gauge { a, b, c: 1.0 - a - b }
    }
}

impl Default for Gauge {
    fn default() -> Self {
        Gauge { a: 0.0, b: 0.0, c: 1.0 }
    }
}

/// Outcome covectors of the basis `{|e>, |e_perp>}` with
/// `|e> = (cos α, e^{iβ} sin α)`.
pub fn qubit_effects(alpha: f64, beta: f64, g: Gauge) -> (Vector6<f64>, Vector6<f64>) {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let e = Vector6::new(
        0.5 * (g.a + cb * sa),
        0.5 * (g.a - cb * sa),
        0.5 * (g.b + sa * sb),
        0.5 * (g.b - sa * sb),
        0.5 * (g.c + ca),
        0.5 * (g.c - ca),
    );
    let e_perp = Vector6::new(
        0.5 * (g.a - cb * sa),
        0.5 * (g.a + cb * sa),
        0.5 * (g.b - sa * sb),
        0.5 * (g.b + sa * sb),
        0.5 * (g.c - ca),
        0.5 * (g.c + ca),
    );
    (e, e_perp)
}

/// The probability-space action of the unitary sending `|0>` to `|e>`.
pub fn t_prob(alpha: f64, beta: f64, g: Gauge) -> Matrix6 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (a, b, c) = (g.a, g.b, g.c);
    let rows = [
        [a - ca * cb, a + ca * cb, b - ca * sb, b + ca * sb, c + sa, c - sa],
        [a + ca * cb, a - ca * cb, b + ca * sb, b - ca * sb, c - sa, c + sa],
        [a + sb, a - sb, b - cb, b + cb, c, c],
        [a - sb, a + sb, b + cb, b - cb, c, c],
        [a + cb * sa, a - cb * sa, b + sa * sb, b - sa * sb, c + ca, c - ca],
        [a - cb * sa, a + cb * sa, b - sa * sb, b + sa * sb, c - ca, c + ca],
    ];
    Matrix6::from_fn(|r, k| 0.5 * rows[r][k])
}

/// `C` maps probabilities to `(1, <X>, <Y>, <Z>)`; `C⁻¹` maps back.
pub fn conversion_pair(g: Gauge) -> (Matrix4x6, Matrix6x4) {
    #[rustfmt::skip]
    let c = Matrix4x6::new(
        g.a, g.a, g.b, g.b, g.c, g.c,
        1.0, -1.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, -1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 1.0, -1.0,
    );
    #[rustfmt::skip]
    let c_inv = Matrix6x4::new(
        0.5, 0.5, 0.0, 0.0,
        0.5, -0.5, 0.0, 0.0,
        0.5, 0.0, 0.5, 0.0,
        0.5, 0.0, -0.5, 0.0,
        0.5, 0.0, 0.0, 0.5,
        0.5, 0.0, 0.0, -0.5,
    );
    (c, c_inv)
}

/// Exact conversion pair for a rational gauge.
pub fn conversion_pair_exact(a: &Rational, b: &Rational, c: &Rational) -> Result<(Matrix, Matrix)> {
    if !(a + b + c).is_one() {
        return Err(Error::Gauge(format!("A + B + C = {} (expected 1)", a + b + c)));
    }
    let z = Rational::zero;
    let one = Rational::one;
    let m1 = || -Rational::one();
    let conv = Matrix::from_rows(vec![
        vec![a.clone(), a.clone(), b.clone(), b.clone(), c.clone(), c.clone()],
        vec![one(), m1(), z(), z(), z(), z()],
        vec![z(), z(), one(), m1(), z(), z()],
        vec![z(), z(), z(), z(), one(), m1()],
    ]);
    let h = Rational::half;
    let mh = || -Rational::half();
    let inv = Matrix::from_rows(vec![
        vec![h(), h(), z(), z()],
        vec![h(), mh(), z(), z()],
        vec![h(), z(), h(), z()],
        vec![h(), z(), mh(), z()],
        vec![h(), z(), z(), h()],
        vec![h(), z(), z(), mh()],
    ]);
    Ok((conv, inv))
}

/// Phase shift `diag(1, e^{iφ})` on probability vectors; the `λ` are free
/// gauge parameters that drop out on normalised inputs.
pub fn t_phi(phi: f64, lambda: [f64; 4]) -> Matrix6 {
    let (s, c) = phi.sin_cos();
    let [l1, l2, l3, l4] = lambda;
    let block = [
        [l1 + c, l1 - c, (1.0 - l1) - s, (1.0 - l1) + s],
        [l2 - c, l2 + c, (1.0 - l2) + s, (1.0 - l2) - s],
        [l3 + s, l3 - s, (1.0 - l3) + c, (1.0 - l3) - c],
        [l4 - s, l4 + s, (1.0 - l4) - c, (1.0 - l4) + c],
    ];
    let mut m = Matrix6::identity();
    for r in 0..4 {
        for k in 0..4 {
            m[(r, k)] = 0.5 * block[r][k];
        }
    }
    m
}

pub const IDENTITY_LAMBDA: [f64; 4] = [1.0, 1.0, 0.0, 0.0];

/// Hadamard in probability coordinates: exchanges X and Z, flips Y.
pub fn t_h() -> Matrix6 {
    let src = [4, 5, 3, 2, 0, 1];
    Matrix6::from_fn(|r, k| if src[r] == k { 1.0 } else { 0.0 })
}

pub fn zero_state() -> Vector6<f64> {
    Vector6::new(0.5, 0.5, 0.5, 0.5, 1.0, 0.0)
}

/// `T_H T_φ T_H` applied to `|0>`.
pub fn mzi_final_state(phi: f64, lambda: [f64; 4]) -> Vector6<f64> {
    t_h() * t_phi(phi, lambda) * t_h() * zero_state()
}

/// `(P(Z=+1), P(Z=-1))` at the interferometer output.
pub fn mzi_output(phi: f64, lambda: [f64; 4]) -> (f64, f64) {
    let s = mzi_final_state(phi, lambda);
    (s[4], s[5])
}

/// The fringe prediction for the full output vector.
pub fn mzi_expected_state(phi: f64) -> Vector6<f64> {
    let (s, c) = phi.sin_cos();
    Vector6::new(0.5, 0.5, 0.5 * (1.0 - s), 0.5 * (1.0 + s), 0.5 * (1.0 + c), 0.5 * (1.0 - c))
}

/// The action of a probability-space map on expectation coordinates.
pub fn induced_rotation(t: &Matrix6, g: Gauge) -> Matrix3<f64> {
    let (c, c_inv) = conversion_pair(g);
    let full: Matrix4<f64> = c * t * c_inv;
    full.fixed_view::<3, 3>(1, 1).into_owned()
}

pub fn is_rotation(m: &Matrix3<f64>, tol: f64) -> bool {
    let gram = m.transpose() * m - Matrix3::identity();
    gram.abs().max() <= tol && (m.determinant() - 1.0).abs() <= tol
}

pub fn from_expectations(r: Vector3<f64>) -> Vector6<f64> {
    Vector6::new(
        0.5 * (1.0 + r.x),
        0.5 * (1.0 - r.x),
        0.5 * (1.0 + r.y),
        0.5 * (1.0 - r.y),
        0.5 * (1.0 + r.z),
        0.5 * (1.0 - r.z),
    )
}

/// Pure state with Bloch angles `(ζ, φ)`.
pub fn pure_state(zeta: f64, phi: f64) -> Vector6<f64> {
    let (sz, cz) = zeta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    from_expectations(Vector3::new(sz * cp, sz * sp, cz))
}

/// Uniform sample from the Bloch ball.
pub fn random_ball_state(rng: &mut impl Rng) -> Vector6<f64> {
    loop {
        let r = Vector3::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if r.norm_squared() <= 1.0 {
            return from_expectations(r);
        }
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The qubit ball in stacked-probability coordinates, for membership spot
/// checks: `Σ_W (p(+1|W) - 1/2)² <= 1/4` with every block normalised.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitBallSpec {
    pub center: [f64; 6],
    pub radius_squared: f64,
}

impl Default for QubitBallSpec {
    fn default() -> Self {
        QubitBallSpec { center: [0.5; 6], radius_squared: 0.25 }
    }
}

impl QubitBallSpec {
    /// `1/4 - Σ_W (p(+1|W) - 1/2)²`; negative outside the ball.
    pub fn slack(&self, v: &[f64]) -> f64 {
        let dev: f64 = (0..3).map(|w| (v[2 * w] - self.center[2 * w]).powi(2)).sum();
        self.radius_squared - dev
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        v.len() == 6
            && (0..3).all(|w| (v[2 * w] + v[2 * w + 1] - 1.0).abs() <= tol)
            && v.iter().all(|&p| (-tol..=1.0 + tol).contains(&p))
            && self.slack(v) >= -tol
    }
}

/// Largest deviation of the Z block over the given states.
pub fn z_block_drift(t: &Matrix6, states: &[Vector6<f64>]) -> f64 {
    states
        .iter()
        .map(|s| {
            let out = t * s;
            (out[4] - s[4]).abs().max((out[5] - s[5]).abs())
        })
        .fold(0.0, f64::max)
}
