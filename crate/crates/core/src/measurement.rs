//! Measurements on the entangled pair: the non-collapse (Lueders) update
//! with its partial-trace analysis, the collapse (Von Neumann) update with
//! partner-state propagation through the constraint map, the closed-form
//! geometric mapping laws (norm, cone, stretching, orthogonality defect),
//! and deterministic outcome sampling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

use crate::bipartite::BipartiteState;
use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace_over_first, partial_trace_over_second, tensor, CMatrix2, CMatrix4, CVector2,
};
use crate::sphere::{ray_from_angles, Direction, RayState, SphericalPoint};

/// Branch probabilities below this threshold carry no partner state:
/// normalizing the constraint-map image of a null component is meaningless.
pub const ZERO_PROBABILITY_THRESHOLD: f64 = 1e-14;

/// Name of the sampling generator, recorded in histogram metadata.
pub const SAMPLER_GENERATOR: &str = "chacha12";

/// Which spin of the pair the apparatus acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredSpin {
    First,
    Second,
}

/// Outcome branch label: `Plus` collapses onto the measurement direction,
/// `Minus` onto its antipode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Result of a non-collapse measurement on one spin of the pair.
#[derive(Debug, Clone)]
pub struct NonCollapseResult {
    pub rho_after: CMatrix4,
    pub d1_after: CMatrix2,
    pub d2_after: CMatrix2,
}

/// One branch of a collapse measurement: the measured spin's post-state,
/// and the partner state induced through the constraint map. Partner fields
/// are absent when the branch probability is below
/// [`ZERO_PROBABILITY_THRESHOLD`].
#[derive(Debug, Clone)]
pub struct CollapseOutcome {
    pub branch: Branch,
    pub probability: f64,
    pub collapsed: RayState,
    pub partner: Option<RayState>,
    pub partner_point: Option<SphericalPoint>,
}

impl CollapseOutcome {
    pub fn is_suppressed(&self) -> bool {
        self.partner.is_none()
    }

    /// Partner ray, or [`Error::ZeroProbabilityBranch`] for a suppressed
    /// branch.
    pub fn partner_ray(&self) -> Result<&RayState> {
        self.partner.as_ref().ok_or(Error::ZeroProbabilityBranch {
            probability: self.probability,
        })
    }
}

/// Non-collapse (Lueders) measurement of one spin:
/// `rho' = (P (x) 1) rho (P (x) 1) + ((1-P) (x) 1) rho ((1-P) (x) 1)`
/// (mirrored for the second spin), with both partial traces of the result.
pub fn luder_pair(psi: &BipartiteState, n: Direction, target: MeasuredSpin) -> NonCollapseResult {
    let p = n.projector();
    let q = CMatrix2::identity().sub(&p);
    let id = CMatrix2::identity();
    let (p4, q4) = match target {
        MeasuredSpin::First => (tensor(&p, &id), tensor(&q, &id)),
        MeasuredSpin::Second => (tensor(&id, &p), tensor(&id, &q)),
    };
    let rho = psi.joint_density();
    let rho_after = p4
        .matmul(&rho)
        .matmul(&p4)
        .add(&q4.matmul(&rho).matmul(&q4));
    NonCollapseResult {
        d1_after: partial_trace_over_second(&rho_after),
        d2_after: partial_trace_over_first(&rho_after),
        rho_after,
    }
}

/// Collapse (Von Neumann) measurement of one spin along `n`. Returns the
/// plus branch (collapse onto `n`) and the minus branch (collapse onto the
/// antipode). Each branch probability is the squared norm of the
/// constraint-map image, and the partner state is that image normalized.
pub fn collapse_pair(
    psi: &BipartiteState,
    n: Direction,
    target: MeasuredSpin,
) -> (CollapseOutcome, CollapseOutcome) {
    let branch = |label: Branch, ray: RayState| {
        let image = match target {
            MeasuredSpin::First => psi.apply_f12(&ray.amplitudes),
            MeasuredSpin::Second => psi.apply_f21(&ray.amplitudes),
        };
        let probability = image.norm_sq().clamp(0.0, 1.0);
        if probability < ZERO_PROBABILITY_THRESHOLD {
            return CollapseOutcome {
                branch: label,
                probability,
                collapsed: ray,
                partner: None,
                partner_point: None,
            };
        }
        let partner = RayState::new(image.scale(Complex64::from(1.0 / probability.sqrt())))
            .expect("normalized constraint-map image is unit norm");
        let partner_point = partner.bloch_point();
        CollapseOutcome {
            branch: label,
            probability,
            collapsed: ray,
            partner: Some(partner),
            partner_point: Some(partner_point),
        }
    };
    (
        branch(Branch::Plus, ray_from_angles(n)),
        branch(Branch::Minus, ray_from_angles(n.antipode())),
    )
}

fn check_r(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!(
            "entanglement parameter {r} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_theta_closed(theta: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!("polar angle {theta} outside [0, pi]")));
    }
    Ok(())
}

/// Squared norm of the constraint-map image of the ray at polar angle
/// `theta` in the adapted frame: `(1 + r cos(theta)) / 2`.
pub fn constraint_image_norm_sq(r: f64, theta: f64) -> Result<f64> {
    check_r(r)?;
    check_theta_closed(theta)?;
    Ok(0.5 * (1.0 + r * theta.cos()))
}

/// Polar cosine of the partner point induced by collapsing at polar angle
/// `theta_v1` in the adapted frame: `(r + cos) / (1 + r cos)`. The
/// `r = 1, theta = pi` corner is a genuine 0/0: the branch has probability
/// zero and no partner exists.
pub fn partner_polar_cosine(r: f64, theta_v1: f64) -> Result<f64> {
    check_r(r)?;
    check_theta_closed(theta_v1)?;
    let c = theta_v1.cos();
    let denom = 1.0 + r * c;
    if denom < 1e-14 {
        return Err(Error::Domain(
            "partner undefined: zero-probability branch at r = 1, theta = pi".into(),
        ));
    }
    Ok(((r + c) / denom).clamp(-1.0, 1.0))
}

/// Magnitude of the overlap between the constraint-map images of the two
/// rays of an antipodal pair at polar angle `theta` in `(0, pi)`:
/// `(r/2) sin(theta)`. Zero exactly when `r = 0`; the poles are excluded
/// because they always map to the poles.
pub fn orthogonality_defect(r: f64, theta: f64) -> Result<f64> {
    check_r(r)?;
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!(
            "polar angle {theta} outside the open interval (0, pi)"
        )));
    }
    Ok(0.5 * r * theta.sin())
}

/// Partner image of one collapse direction, in the adapted frame of the
/// other spin. `partner` is absent for a suppressed branch.
#[derive(Debug, Clone)]
pub struct GridImage {
    pub direction: Direction,
    pub probability: f64,
    pub partner: Option<SphericalPoint>,
}

/// Maps a grid of collapse directions on the first spin to partner surface
/// points on the second. Directions are interpreted in the adapted
/// (Schmidt) frame of the first spin and partner points are reported in the
/// adapted frame of the second, which is where the cone and stretching laws
/// hold.
pub fn map_sphere_grid(psi: &BipartiteState, grid: &[Direction]) -> Vec<GridImage> {
    let form = psi.schmidt();
    grid.iter()
        .map(|&n| {
            let coords = ray_from_angles(n).amplitudes;
            let ray_vec = form
                .x1_hi
                .scale(coords.entries[0])
                .add(&form.x1_lo.scale(coords.entries[1]));
            let image = psi.apply_f12(&ray_vec);
            let probability = image.norm_sq().clamp(0.0, 1.0);
            if probability < ZERO_PROBABILITY_THRESHOLD {
                return GridImage {
                    direction: n,
                    probability,
                    partner: None,
                };
            }
            let v = image.scale(Complex64::from(1.0 / probability.sqrt()));
            let frame_coords = CVector2::new([form.x2_hi.inner(&v), form.x2_lo.inner(&v)]);
            let partner = RayState::new(frame_coords)
                .expect("coordinates of a unit vector in an orthonormal frame are unit norm")
                .bloch_point();
            GridImage {
                direction: n,
                probability,
                partner: Some(partner),
            }
        })
        .collect()
}

/// Histogram of collapse outcomes for repeated identically prepared
/// measurements. Deterministic for a fixed seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleHistogram {
    pub shots: u64,
    pub counts_plus: u64,
    pub counts_minus: u64,
    pub seed: u64,
    /// Name of the RNG that produced the draws.
    pub generator: &'static str,
}

impl SampleHistogram {
    pub fn frequency_plus(&self) -> f64 {
        self.counts_plus as f64 / self.shots as f64
    }
}

/// Draws `shots` collapse outcomes along `n` with a seeded ChaCha12 stream.
pub fn sample_collapse(
    psi: &BipartiteState,
    n: Direction,
    target: MeasuredSpin,
    shots: u64,
    seed: u64,
) -> SampleHistogram {
    let (plus, _) = collapse_pair(psi, n, target);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts_plus = 0u64;
    for _ in 0..shots {
        if rng.random::<f64>() < plus.probability {
            counts_plus += 1;
        }
    }
    SampleHistogram {
        shots,
        counts_plus,
        counts_minus: shots - counts_plus,
        seed,
        generator: SAMPLER_GENERATOR,
    }
}
