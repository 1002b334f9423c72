//! Sphere model for a single spin: the bijection between density states and
//! points of the closed unit ball, Stern-Gerlach measurement directions, the
//! orthogonal-projection picture of measurement, and the Lueders update.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix2, CVector2};

/// Reduces an angle to `[0, 2pi)`.
fn wrap_phi(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(TAU);
    if p >= TAU {
        p = 0.0;
    }
    p
}

/// Point of the closed unit ball in spherical coordinates:
/// `r in [0,1]`, `theta in [0,pi]`, `phi in [0,2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    /// Validates ranges; `phi` is reduced modulo `2pi`.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !r.is_finite() || !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Domain("spherical coordinates must be finite".into()));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(format!("radius {r} outside [0, 1]")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("polar angle {theta} outside [0, pi]")));
        }
        Ok(Self {
            r,
            theta,
            phi: wrap_phi(phi),
        })
    }

    pub const fn center() -> Self {
        Self {
            r: 0.0,
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// Canonical representative: at `r ~ 0` both angles are zeroed, at the
    /// poles `phi` is zeroed. Degenerate coordinates otherwise compare
    /// unequal even when the points coincide.
    pub fn canonical(&self) -> Self {
        if self.r < 1e-12 {
            return Self::center();
        }
        if self.theta < 1e-12 || self.theta > PI - 1e-12 {
            return Self {
                r: self.r,
                theta: self.theta,
                phi: 0.0,
            };
        }
        *self
    }

    pub fn to_cartesian(&self) -> CartesianPoint {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        CartesianPoint {
            x: self.r * st * cp,
            y: self.r * st * sp,
            z: self.r * ct,
        }
    }
}

/// Point of the closed unit ball in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || !z.is_finite() {
            return Err(Error::Domain("cartesian coordinates must be finite".into()));
        }
        let p = Self { x, y, z };
        if p.norm_sq() > 1.0 + 1e-9 {
            return Err(Error::Domain(format!(
                "point ({x}, {y}, {z}) lies outside the closed unit ball"
            )));
        }
        Ok(p)
    }

    pub const fn origin() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            x: a * self.x,
            y: a * self.y,
            z: a * self.z,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            x: self.x - other.x,
            y: self.y - other.y,
            z: self.z - other.z,
        }
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn to_spherical(&self) -> SphericalPoint {
        let r = self.norm().min(1.0);
        let rho = self.x.hypot(self.y);
        let theta = rho.atan2(self.z);
        let phi = if rho == 0.0 {
            0.0
        } else {
            wrap_phi(self.y.atan2(self.x))
        };
        SphericalPoint { r, theta, phi }
    }

    pub fn max_coord_diff(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

/// Stern-Gerlach measurement direction, `theta in [0,pi]`, `phi in [0,2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Domain("direction angles must be finite".into()));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("polar angle {theta} outside [0, pi]")));
        }
        Ok(Self {
            theta,
            phi: wrap_phi(phi),
        })
    }

    pub fn unit_vector(&self) -> CartesianPoint {
        SphericalPoint {
            r: 1.0,
            theta: self.theta,
            phi: self.phi,
        }
        .to_cartesian()
    }

    pub fn antipode(&self) -> Self {
        Self {
            theta: PI - self.theta,
            phi: wrap_phi(self.phi + PI),
        }
    }

    /// Projector onto the ray state of this direction.
    pub fn projector(&self) -> CMatrix2 {
        density_from_point(SphericalPoint {
            r: 1.0,
            theta: self.theta,
            phi: self.phi,
        })
    }
}

/// Pure spin state identified up to global phase.
#[derive(Debug, Clone, Copy)]
pub struct RayState {
    pub amplitudes: CVector2,
}

impl RayState {
    /// Requires unit norm within 1e-9.
    pub fn new(amplitudes: CVector2) -> Result<Self> {
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > 1e-9 {
            return Err(Error::InvalidState(format!(
                "ray amplitudes deviate from unit norm by {deviation:e}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Ray equality: `|<a, b>| > 1 - 1e-12`, i.e. equality modulo global phase.
    pub fn same_ray(&self, other: &Self) -> bool {
        self.amplitudes.inner(&other.amplitudes).norm() > 1.0 - 1e-12
    }

    /// Surface point of the sphere representing this ray.
    pub fn bloch_point(&self) -> SphericalPoint {
        let [a, b] = self.amplitudes.entries;
        let theta = 2.0 * b.norm().atan2(a.norm());
        let phi = if a.norm() == 0.0 || b.norm() == 0.0 {
            0.0
        } else {
            wrap_phi(b.arg() - a.arg())
        };
        SphericalPoint { r: 1.0, theta, phi }
    }

    pub fn projector(&self) -> CMatrix2 {
        CMatrix2::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Ray state of a direction: `(cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{i phi/2})`.
pub fn ray_from_angles(d: Direction) -> RayState {
    let half = 0.5 * d.theta;
    let phase = Complex64::from_polar(1.0, 0.5 * d.phi);
    RayState {
        amplitudes: CVector2::new([
            Complex64::from(half.cos()) * phase.conj(),
            Complex64::from(half.sin()) * phase,
        ]),
    }
}

/// Density matrix of the ball point `(r, theta, phi)`:
/// `1/2 [[1 + r cos(theta), r sin(theta) e^{-i phi}], [r sin(theta) e^{i phi}, 1 - r cos(theta)]]`.
pub fn density_from_point(p: SphericalPoint) -> CMatrix2 {
    let rc = p.r * p.theta.cos();
    let rs = p.r * p.theta.sin();
    let off = Complex64::from_polar(rs, p.phi);
    CMatrix2::new([
        [Complex64::from(0.5 * (1.0 + rc)), 0.5 * off.conj()],
        [0.5 * off, Complex64::from(0.5 * (1.0 - rc))],
    ])
}

fn validate_density(d: &CMatrix2, tol: f64) -> Result<()> {
    if !d.is_hermitian(tol) {
        return Err(Error::InvalidDensity(format!(
            "Hermitian defect {:e} exceeds {tol:e}",
            d.hermitian_defect()
        )));
    }
    if !d.is_trace_one(tol) {
        return Err(Error::InvalidDensity(format!(
            "trace {} is not 1 within {tol:e}",
            d.trace()
        )));
    }
    if !d.is_psd(tol) {
        return Err(Error::InvalidDensity(
            "matrix is not positive semidefinite within tolerance".into(),
        ));
    }
    Ok(())
}

/// Ball point of a density matrix; inverse of [`density_from_point`].
///
/// `r = sqrt(1 - 4 det d)` clipped to `[0, 1]`; the angles come from the
/// matrix entries, with degenerate coordinates canonicalized to zero.
pub fn point_from_density(d: &CMatrix2, tol: f64) -> Result<SphericalPoint> {
    validate_density(d, tol)?;
    let r = (1.0 - 4.0 * d.det().re).max(0.0).sqrt().min(1.0);
    // symmetrized lower off-diagonal entry: (r sin(theta)/2) e^{i phi}
    let off = 0.5 * (d.entries[1][0] + d.entries[0][1].conj());
    let z = (d.entries[0][0] - d.entries[1][1]).re;
    let theta = (2.0 * off.norm()).atan2(z);
    let phi = if off.norm() == 0.0 {
        0.0
    } else {
        wrap_phi(off.arg())
    };
    if r < 1e-12 {
        return Ok(SphericalPoint::center());
    }
    Ok(SphericalPoint { r, theta, phi })
}

/// Orthogonal projection of `p` onto the measurement axis: `(p . u) u`.
pub fn project_onto_direction(p: CartesianPoint, n: Direction) -> CartesianPoint {
    let u = n.unit_vector();
    u.scale(p.dot(&u))
}

/// Lueders update of a single spin: `P d P + (1-P) d (1-P)` with `P` the
/// projector of the measurement direction.
pub fn luder_single(d: &CMatrix2, n: Direction, tol: f64) -> Result<CMatrix2> {
    validate_density(d, tol)?;
    let p = n.projector();
    let q = CMatrix2::identity().sub(&p);
    Ok(p.matmul(d).matmul(&p).add(&q.matmul(d).matmul(&q)))
}

/// Outcome probabilities of a two-outcome measurement along `n`:
/// `(tr(P d), 1 - tr(P d))`.
pub fn born_probabilities(d: &CMatrix2, n: Direction, tol: f64) -> Result<(f64, f64)> {
    validate_density(d, tol)?;
    let p_plus = n.projector().matmul(d).trace().re.clamp(0.0, 1.0);
    Ok((p_plus, 1.0 - p_plus))
}

/// Post-measurement points of a fixed state under many directions. All
/// outputs lie on the sphere with center `p/2` and radius `|p|/2`.
pub fn little_sphere_locus(p: CartesianPoint, directions: &[Direction]) -> Vec<CartesianPoint> {
    directions
        .iter()
        .map(|n| project_onto_direction(p, *n))
        .collect()
}
