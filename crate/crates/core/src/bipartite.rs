//! Bipartite pure states of two spins, the conjugate-linear constraint maps
//! between the two factors, reduced densities, and the Schmidt diagonal form
//! with entanglement parameter `r`.
//!
//! A state is stored as its 2x2 coefficient matrix `lambda` in a pair of
//! declared orthonormal bases, `psi = sum_ij lambda_ij b1_i (x) b2_j`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian2, CMatrix2, CMatrix4, CVector2, DEFAULT_TOLERANCE};

/// Orthonormal pair of vectors spanning one factor space.
#[derive(Debug, Clone, Copy)]
pub struct OrthonormalBasis2 {
    vectors: [CVector2; 2],
}

impl OrthonormalBasis2 {
    /// Validates orthonormality within 1e-9.
    pub fn new(first: CVector2, second: CVector2) -> Result<Self> {
        let n0 = (first.norm() - 1.0).abs();
        let n1 = (second.norm() - 1.0).abs();
        let cross = first.inner(&second).norm();
        if n0 > 1e-9 || n1 > 1e-9 || cross > 1e-9 {
            return Err(Error::InvalidBasis(format!(
                "norm deviations ({n0:e}, {n1:e}), overlap {cross:e}"
            )));
        }
        Ok(Self {
            vectors: [first, second],
        })
    }

    pub fn canonical() -> Self {
        Self {
            vectors: [CVector2::basis(0), CVector2::basis(1)],
        }
    }

    pub fn vector(&self, k: usize) -> &CVector2 {
        &self.vectors[k]
    }

    /// Vector with the given coordinates in this basis.
    pub fn embed(&self, coords: &CVector2) -> CVector2 {
        self.vectors[0]
            .scale(coords.entries[0])
            .add(&self.vectors[1].scale(coords.entries[1]))
    }

    /// Coordinates of `v` in this basis.
    pub fn coords(&self, v: &CVector2) -> CVector2 {
        CVector2::new([self.vectors[0].inner(v), self.vectors[1].inner(v)])
    }
}

/// Which factor the conjugate-linear constraint map sends to which.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintDirection {
    OneToTwo,
    TwoToOne,
}

/// The coefficient matrix of a state together with an explicit conjugation
/// flag. The map is conjugate-linear, so it is deliberately not materialized
/// as an ordinary operator matrix.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintMap {
    pub lambda: CMatrix2,
    pub direction: ConstraintDirection,
}

impl ConstraintMap {
    /// Conjugate-linear action in basis coordinates:
    /// `lambda^T conj(x)` one-to-two, `lambda conj(x)` two-to-one.
    pub fn apply(&self, x: &CVector2) -> CVector2 {
        let conjugated = x.conj();
        match self.direction {
            ConstraintDirection::OneToTwo => self.lambda.transpose().mul_vec(&conjugated),
            ConstraintDirection::TwoToOne => self.lambda.mul_vec(&conjugated),
        }
    }
}

/// Unit vector of the four-dimensional product space.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    lambda: CMatrix2,
    basis1: OrthonormalBasis2,
    basis2: OrthonormalBasis2,
}

impl BipartiteState {
    /// Requires `sum |lambda_ij|^2 = 1` within 1e-9.
    pub fn new(
        lambda: CMatrix2,
        basis1: OrthonormalBasis2,
        basis2: OrthonormalBasis2,
    ) -> Result<Self> {
        let norm_sq: f64 = lambda.entries.iter().flatten().map(|z| z.norm_sqr()).sum();
        let deviation = (norm_sq.sqrt() - 1.0).abs();
        if deviation > 1e-9 {
            return Err(Error::InvalidState(format!(
                "coefficients deviate from unit norm by {deviation:e}"
            )));
        }
        Ok(Self {
            lambda,
            basis1,
            basis2,
        })
    }

    /// State with the given coefficients in the canonical bases.
    pub fn from_lambda(lambda: CMatrix2) -> Result<Self> {
        Self::new(
            lambda,
            OrthonormalBasis2::canonical(),
            OrthonormalBasis2::canonical(),
        )
    }

    /// State from amplitudes in the fixed product-basis order
    /// `(e1_1 (x) e2_1, e1_1 (x) e2_2, e1_2 (x) e2_1, e1_2 (x) e2_2)`.
    pub fn from_amplitudes(amps: [Complex64; 4]) -> Result<Self> {
        Self::from_lambda(CMatrix2::new([[amps[0], amps[1]], [amps[2], amps[3]]]))
    }

    /// The singlet: `(e1_1 (x) e2_2 - e1_2 (x) e2_1) / sqrt(2)`.
    pub fn singlet() -> Self {
        let w = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        Self::from_lambda(CMatrix2::new([
            [Complex64::ZERO, w],
            [-w, Complex64::ZERO],
        ]))
        .expect("singlet coefficients are unit norm")
    }

    /// Product state `x (x) y` of two unit vectors.
    pub fn product(x: &CVector2, y: &CVector2) -> Result<Self> {
        let mut lambda = CMatrix2::zero();
        for i in 0..2 {
            for j in 0..2 {
                lambda.entries[i][j] = x.entries[i] * y.entries[j];
            }
        }
        Self::from_lambda(lambda)
    }

    pub fn lambda(&self) -> &CMatrix2 {
        &self.lambda
    }

    pub fn basis1(&self) -> &OrthonormalBasis2 {
        &self.basis1
    }

    pub fn basis2(&self) -> &OrthonormalBasis2 {
        &self.basis2
    }

    pub fn constraint_map(&self, direction: ConstraintDirection) -> ConstraintMap {
        ConstraintMap {
            lambda: self.lambda,
            direction,
        }
    }

    /// Image in the second space of a first-space vector:
    /// `x1 -> sum_ij lambda_ij <x1, b1_i> b2_j`. Conjugate-linear in `x1`.
    pub fn apply_f12(&self, x1: &CVector2) -> CVector2 {
        let coords = self.basis1.coords(x1);
        let image = self.constraint_map(ConstraintDirection::OneToTwo).apply(&coords);
        self.basis2.embed(&image)
    }

    /// Mirror image in the first space of a second-space vector:
    /// `x2 -> sum_ij lambda_ij <x2, b2_j> b1_i`. Conjugate-linear in `x2`.
    pub fn apply_f21(&self, x2: &CVector2) -> CVector2 {
        let coords = self.basis2.coords(x2);
        let image = self.constraint_map(ConstraintDirection::TwoToOne).apply(&coords);
        self.basis1.embed(&image)
    }

    /// Reduced density of the first spin, `lambda lambda^dagger`, expressed
    /// in `basis1`.
    pub fn density_first(&self) -> CMatrix2 {
        self.lambda.matmul(&self.lambda.adjoint())
    }

    /// Reduced density of the second spin, expressed in `basis2`. This is
    /// the entrywise conjugate of `lambda^dagger lambda`, which is what both
    /// the partial trace and the composed constraint maps produce.
    pub fn density_second(&self) -> CMatrix2 {
        self.lambda.transpose().matmul(&self.lambda.conj())
    }

    /// Operators assembled from the two compositions of the constraint maps
    /// (each composition of two conjugate-linear maps is linear). The first
    /// equals [`Self::density_first`], the second [`Self::density_second`].
    pub fn compose_constraints(&self) -> (CMatrix2, CMatrix2) {
        let one_to_two = self.constraint_map(ConstraintDirection::OneToTwo);
        let two_to_one = self.constraint_map(ConstraintDirection::TwoToOne);
        let mut first = CMatrix2::zero();
        let mut second = CMatrix2::zero();
        for k in 0..2 {
            let e = CVector2::basis(k);
            let col1 = two_to_one.apply(&one_to_two.apply(&e));
            let col2 = one_to_two.apply(&two_to_one.apply(&e));
            for i in 0..2 {
                first.entries[i][k] = col1.entries[i];
                second.entries[i][k] = col2.entries[i];
            }
        }
        (first, second)
    }

    /// Amplitudes in the canonical product basis, expanding the declared
    /// bases.
    pub fn amplitudes(&self) -> [Complex64; 4] {
        let mut amps = [Complex64::ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                let b1 = self.basis1.vector(i);
                let b2 = self.basis2.vector(j);
                for p in 0..2 {
                    for q in 0..2 {
                        amps[2 * p + q] += self.lambda.entries[i][j] * b1.entries[p] * b2.entries[q];
                    }
                }
            }
        }
        amps
    }

    /// Joint density matrix `|psi><psi|` in the canonical product basis.
    pub fn joint_density(&self) -> CMatrix4 {
        let amps = self.amplitudes();
        let mut rho = CMatrix4::zero();
        for i in 0..4 {
            for j in 0..4 {
                rho.entries[i][j] = amps[i] * amps[j].conj();
            }
        }
        rho
    }

    /// `|<self, other>|`; 1 means equal rays.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let a = self.amplitudes();
        let b = other.amplitudes();
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
            .norm()
    }

    /// Rotates the global phase so the largest-magnitude coefficient is real
    /// and positive.
    pub fn canonical_form(&self) -> Self {
        let mut lead = Complex64::ZERO;
        for row in &self.lambda.entries {
            for z in row {
                if z.norm() > lead.norm() {
                    lead = *z;
                }
            }
        }
        if lead.norm() < 1e-300 {
            return self.clone();
        }
        let phase = lead.conj() / Complex64::from(lead.norm());
        Self {
            lambda: self.lambda.scale(phase),
            basis1: self.basis1,
            basis2: self.basis2,
        }
    }

    /// The same vector re-expressed in other orthonormal bases. The
    /// constraint-map action is unchanged.
    pub fn rebase(&self, basis1: OrthonormalBasis2, basis2: OrthonormalBasis2) -> Self {
        let mut lambda = CMatrix2::zero();
        for k in 0..2 {
            for l in 0..2 {
                let mut acc = Complex64::ZERO;
                for i in 0..2 {
                    for j in 0..2 {
                        acc += self.lambda.entries[i][j]
                            * basis1.vector(k).inner(self.basis1.vector(i))
                            * basis2.vector(l).inner(self.basis2.vector(j));
                    }
                }
                lambda.entries[k][l] = acc;
            }
        }
        Self {
            lambda,
            basis1,
            basis2,
        }
    }

    /// Schmidt diagonal form: `r` is the gap between the reduced-density
    /// eigenvalues `(1 +- r)/2`, the adapted first-space basis diagonalizes
    /// the first reduced density, and the second-space basis is carried over
    /// through the constraint map.
    pub fn schmidt(&self) -> SchmidtForm {
        let pair = eig_hermitian2(&self.density_first(), DEFAULT_TOLERANCE)
            .expect("lambda lambda^dagger is Hermitian by construction");
        let r = (pair.eigenvalue_hi - pair.eigenvalue_lo).clamp(0.0, 1.0);
        let x1_hi = self.basis1.embed(&pair.eigvec_hi);
        let x1_lo = self.basis1.embed(&pair.eigvec_lo);
        // the scaled images are unit vectors up to rounding, but near r = 1
        // the low-weight scaling amplifies the eigenvalue's rounding error by
        // 1/(1-r), so both are renormalized
        let x2_hi = self
            .apply_f12(&x1_hi)
            .scale(Complex64::from((2.0 / (1.0 + r)).sqrt()))
            .normalized()
            .expect("high-weight image has norm sqrt((1+r)/2) >= sqrt(1/2)");
        let x2_lo = if 1.0 - r < 1e-9 {
            // the low-weight image degenerates for a product state; any
            // orthonormal completion reconstructs the state
            x2_hi
                .orthogonal_unit()
                .expect("x2_hi is unit norm")
                .canonical_phase()
        } else {
            self.apply_f12(&x1_lo)
                .scale(Complex64::from((2.0 / (1.0 - r)).sqrt()))
                .normalized()
                .expect("low-weight image is nonzero for r below the degeneracy cutoff")
        };
        SchmidtForm {
            r,
            x1_hi,
            x1_lo,
            x2_hi,
            x2_lo,
        }
    }

    /// The entanglement parameter `r` of the Schmidt form: 0 for
    /// singlet-type states, 1 for product states.
    pub fn entanglement_parameter(&self) -> f64 {
        self.schmidt().r
    }
}

/// Schmidt diagonal form: `psi = sqrt((1+r)/2) x1_hi (x) x2_hi
/// + sqrt((1-r)/2) x1_lo (x) x2_lo`.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub r: f64,
    pub x1_hi: CVector2,
    pub x1_lo: CVector2,
    pub x2_hi: CVector2,
    pub x2_lo: CVector2,
}

impl SchmidtForm {
    /// Weights `(sqrt((1+r)/2), sqrt((1-r)/2))`.
    pub fn weights(&self) -> (f64, f64) {
        (
            (0.5 * (1.0 + self.r)).sqrt(),
            (0.5 * (1.0 - self.r)).sqrt(),
        )
    }

    /// Reconstructs the state in canonical bases. Fails with
    /// [`Error::InvalidSchmidtForm`] when `r` is out of range or either
    /// adapted pair is not orthonormal.
    pub fn state(&self) -> Result<BipartiteState> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(Error::InvalidSchmidtForm(format!(
                "entanglement parameter {} outside [0, 1]",
                self.r
            )));
        }
        OrthonormalBasis2::new(self.x1_hi, self.x1_lo)
            .map_err(|e| Error::InvalidSchmidtForm(format!("first-space pair: {e}")))?;
        OrthonormalBasis2::new(self.x2_hi, self.x2_lo)
            .map_err(|e| Error::InvalidSchmidtForm(format!("second-space pair: {e}")))?;
        let (w_hi, w_lo) = self.weights();
        let mut lambda = CMatrix2::zero();
        for p in 0..2 {
            for q in 0..2 {
                lambda.entries[p][q] = Complex64::from(w_hi)
                    * self.x1_hi.entries[p]
                    * self.x2_hi.entries[q]
                    + Complex64::from(w_lo) * self.x1_lo.entries[p] * self.x2_lo.entries[q];
            }
        }
        BipartiteState::from_lambda(lambda)
            .map_err(|e| Error::InvalidSchmidtForm(format!("reconstruction: {e}")))
    }
}

/// Builds a state from a Schmidt form; see [`SchmidtForm::state`].
pub fn state_from_schmidt(form: &SchmidtForm) -> Result<BipartiteState> {
    form.state()
}
