//! Shared generators for randomized integration tests. Everything is driven
//! by an explicit seeded RNG so every run is reproducible.
#![allow(dead_code)]

use blochpair::{
    BipartiteState, CMatrix2, CVector2, Direction, OrthonormalBasis2, SchmidtForm, SphericalPoint,
};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{PI, TAU};

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector2<R: Rng>(rng: &mut R) -> CVector2 {
    CVector2::new([random_complex(rng), random_complex(rng)])
}

pub fn random_unit_vector2<R: Rng>(rng: &mut R) -> CVector2 {
    random_vector2(rng).normalized().expect("gaussian draw is nonzero")
}

/// Haar-like random orthonormal pair: a random unit vector, its orthogonal
/// complement, and an independent phase on the second leg.
pub fn random_basis<R: Rng>(rng: &mut R) -> OrthonormalBasis2 {
    let first = random_unit_vector2(rng);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..TAU));
    let second = first.orthogonal_unit().unwrap().scale(phase);
    OrthonormalBasis2::new(first, second).expect("constructed pair is orthonormal")
}

/// Rotation-invariant random pure state of the pair: four gaussian
/// amplitudes, normalized.
pub fn random_state<R: Rng>(rng: &mut R) -> BipartiteState {
    let mut amps = [Complex64::ZERO; 4];
    for a in &mut amps {
        *a = random_complex(rng);
    }
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    BipartiteState::from_amplitudes(amps).expect("normalized amplitudes")
}

/// State with a prescribed entanglement parameter and random adapted bases.
pub fn state_with_r<R: Rng>(rng: &mut R, r: f64) -> BipartiteState {
    let b1 = random_basis(rng);
    let b2 = random_basis(rng);
    SchmidtForm {
        r,
        x1_hi: *b1.vector(0),
        x1_lo: *b1.vector(1),
        x2_hi: *b2.vector(0),
        x2_lo: *b2.vector(1),
    }
    .state()
    .expect("orthonormal pairs and r in range")
}

/// Uniform direction on the sphere.
pub fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    Direction::new(cos_theta.acos(), rng.random_range(0.0..TAU)).unwrap()
}

/// Uniform point of the closed unit ball.
pub fn random_ball_point<R: Rng>(rng: &mut R) -> SphericalPoint {
    let r = rng.random_range(0.0..1.0_f64).cbrt();
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    SphericalPoint::new(r, cos_theta.acos(), rng.random_range(0.0..TAU)).unwrap()
}

/// Random density matrix drawn through the ball-point parametrization.
pub fn random_density<R: Rng>(rng: &mut R) -> CMatrix2 {
    blochpair::density_from_point(random_ball_point(rng))
}

/// Random Hermitian matrix with O(1) entries.
pub fn random_hermitian2<R: Rng>(rng: &mut R) -> CMatrix2 {
    let a: f64 = rng.sample(StandardNormal);
    let d: f64 = rng.sample(StandardNormal);
    let b = random_complex(rng);
    CMatrix2::new([
        [Complex64::from(a), b],
        [b.conj(), Complex64::from(d)],
    ])
}

pub fn random_angle_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    (rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))
}
