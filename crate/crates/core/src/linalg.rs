//! Fixed-size complex linear algebra: 2-vectors, 2x2 and 4x4 matrices,
//! tensor products, partial traces, and a closed-form Hermitian 2x2
//! eigendecomposition.
//!
//! Inner products are conjugate-linear in the FIRST argument throughout,
//! so `inner(a*x, y) = conj(a) * inner(x, y)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for validity predicates such as
/// [`CMatrix2::is_hermitian`]. Algebraic identities on well-conditioned
/// inputs are held to [`ALGEBRAIC_TOLERANCE`] instead.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance for algebraic identities on well-conditioned inputs.
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-12;

/// Spectral gap below which a 2x2 Hermitian matrix is treated as degenerate
/// and the canonical basis is returned.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Complex 2-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVector2 {
    pub entries: [Complex64; 2],
}

impl CVector2 {
    pub const fn new(entries: [Complex64; 2]) -> Self {
        Self { entries }
    }

    pub const fn zero() -> Self {
        Self::new([Complex64::ZERO; 2])
    }

    /// Canonical basis vector `e_k`, `k` in `{0, 1}`.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.entries[k] = Complex64::ONE;
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new([
            self.entries[0] + other.entries[0],
            self.entries[1] + other.entries[1],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new([
            self.entries[0] - other.entries[0],
            self.entries[1] - other.entries[1],
        ])
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::new([a * self.entries[0], a * self.entries[1]])
    }

    pub fn conj(&self) -> Self {
        Self::new([self.entries[0].conj(), self.entries[1].conj()])
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.entries[0].conj() * other.entries[0] + self.entries[1].conj() * other.entries[1]
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries[0].norm_sqr() + self.entries[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same ray, or an error for a (near-)zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(Complex64::from(1.0 / n)))
    }

    /// Unit vector orthogonal to `self`: `(a, b) -> (-conj(b), conj(a))`,
    /// normalized.
    pub fn orthogonal_unit(&self) -> Result<Self> {
        CVector2::new([-self.entries[1].conj(), self.entries[0].conj()]).normalized()
    }

    /// Rotates the global phase so the first component of magnitude >= 1e-12
    /// is real and positive.
    pub fn canonical_phase(&self) -> Self {
        let lead = if self.entries[0].norm() >= 1e-12 {
            self.entries[0]
        } else {
            self.entries[1]
        };
        let mag = lead.norm();
        if mag < 1e-300 {
            return *self;
        }
        self.scale(lead.conj() / Complex64::from(mag))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix2 {
    pub entries: [[Complex64; 2]; 2],
}

/// Complex 4x4 matrix, row-major, in the fixed product basis
/// `(e1_1 (x) e2_1, e1_1 (x) e2_2, e1_2 (x) e2_1, e1_2 (x) e2_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMatrix4 {
    pub entries: [[Complex64; 4]; 4],
}

macro_rules! impl_square_matrix {
    ($name:ident, $n:expr) => {
        impl $name {
            pub const fn new(entries: [[Complex64; $n]; $n]) -> Self {
                Self { entries }
            }

            pub const fn zero() -> Self {
                Self::new([[Complex64::ZERO; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    m.entries[i][i] = Complex64::ONE;
                }
                m
            }

            pub fn from_diagonal(diag: [f64; $n]) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    m.entries[i][i] = Complex64::from(diag[i]);
                }
                m
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        m.entries[i][j] = self.entries[i][j] + other.entries[i][j];
                    }
                }
                m
            }

            pub fn sub(&self, other: &Self) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        m.entries[i][j] = self.entries[i][j] - other.entries[i][j];
                    }
                }
                m
            }

            pub fn scale(&self, a: Complex64) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        m.entries[i][j] = a * self.entries[i][j];
                    }
                }
                m
            }

            pub fn matmul(&self, other: &Self) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        let mut acc = Complex64::ZERO;
                        for k in 0..$n {
                            acc += self.entries[i][k] * other.entries[k][j];
                        }
                        m.entries[i][j] = acc;
                    }
                }
                m
            }

            /// Conjugate transpose.
            pub fn adjoint(&self) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        m.entries[i][j] = self.entries[j][i].conj();
                    }
                }
                m
            }

            pub fn transpose(&self) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        m.entries[i][j] = self.entries[j][i];
                    }
                }
                m
            }

            pub fn conj(&self) -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        m.entries[i][j] = self.entries[i][j].conj();
                    }
                }
                m
            }

            pub fn trace(&self) -> Complex64 {
                (0..$n).map(|i| self.entries[i][i]).sum()
            }

            pub fn max_abs(&self) -> f64 {
                self.entries
                    .iter()
                    .flatten()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            }

            /// Max-entry norm of the difference.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.sub(other).max_abs()
            }

            /// Max-entry norm of `self - self^dagger`.
            pub fn hermitian_defect(&self) -> f64 {
                self.max_abs_diff(&self.adjoint())
            }

            pub fn is_hermitian(&self, tol: f64) -> bool {
                self.hermitian_defect() <= tol
            }

            pub fn is_trace_one(&self, tol: f64) -> bool {
                (self.trace() - Complex64::ONE).norm() <= tol
            }
        }
    };
}

impl_square_matrix!(CMatrix2, 2);
impl_square_matrix!(CMatrix4, 4);

impl CMatrix2 {
    pub fn det(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn mul_vec(&self, v: &CVector2) -> CVector2 {
        CVector2::new([
            self.entries[0][0] * v.entries[0] + self.entries[0][1] * v.entries[1],
            self.entries[1][0] * v.entries[0] + self.entries[1][1] * v.entries[1],
        ])
    }

    /// Outer product `|x><y|`: entry `(i, j) = x_i * conj(y_j)`.
    pub fn outer(x: &CVector2, y: &CVector2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.entries[i][j] = x.entries[i] * y.entries[j].conj();
            }
        }
        m
    }

    /// Positive semidefinite within `tol`: Hermitian and both closed-form
    /// eigenvalues >= -tol.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let a = self.entries[0][0].re;
        let c = self.entries[1][1].re;
        let b = 0.5 * (self.entries[0][1] + self.entries[1][0].conj());
        let mean = 0.5 * (a + c);
        let s = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
        mean - s >= -tol
    }
}

impl CMatrix4 {
    /// Positive semidefinite within `tol`, via diagonally pivoted Hermitian
    /// elimination: every pivot must stay >= -tol, and once the remaining
    /// diagonal is numerically zero the whole remaining block must be too.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let mut m = self.entries;
        let mut active = [true; 4];
        for _ in 0..4 {
            let mut k = usize::MAX;
            let mut best = f64::NEG_INFINITY;
            for i in 0..4 {
                if active[i] && m[i][i].re > best {
                    best = m[i][i].re;
                    k = i;
                }
            }
            if best <= tol {
                for i in 0..4 {
                    if !active[i] {
                        continue;
                    }
                    if m[i][i].re < -tol {
                        return false;
                    }
                    for j in 0..4 {
                        if active[j] && m[i][j].norm() > 10.0 * tol {
                            return false;
                        }
                    }
                }
                return true;
            }
            active[k] = false;
            let pivot = Complex64::from(best);
            for i in 0..4 {
                if !active[i] {
                    continue;
                }
                for j in 0..4 {
                    if !active[j] {
                        continue;
                    }
                    let update = m[i][k] * m[k][j] / pivot;
                    m[i][j] -= update;
                }
            }
        }
        true
    }
}

/// Kronecker product: entry `((2i+k), (2j+l)) = a(i,j) * b(k,l)`.
pub fn tensor(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    let mut m = CMatrix4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.entries[2 * i + k][2 * j + l] = a.entries[i][j] * b.entries[k][l];
                }
            }
        }
    }
    m
}

/// Traces out the second factor: `(i, k) = sum_j rho(2i+j, 2k+j)`.
pub fn partial_trace_over_second(rho: &CMatrix4) -> CMatrix2 {
    let mut m = CMatrix2::zero();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                m.entries[i][k] += rho.entries[2 * i + j][2 * k + j];
            }
        }
    }
    m
}

/// Traces out the first factor: `(j, l) = sum_i rho(2i+j, 2i+l)`.
pub fn partial_trace_over_first(rho: &CMatrix4) -> CMatrix2 {
    let mut m = CMatrix2::zero();
    for j in 0..2 {
        for l in 0..2 {
            for i in 0..2 {
                m.entries[j][l] += rho.entries[2 * i + j][2 * i + l];
            }
        }
    }
    m
}

/// Eigendecomposition of a Hermitian 2x2 matrix.
///
/// Eigenvalues are ordered `eigenvalue_hi >= eigenvalue_lo`; eigenvectors are
/// unit norm, exactly orthogonal, and phase-canonicalized (first component of
/// magnitude >= 1e-12 made real positive). A spectrum degenerate within
/// [`DEGENERACY_TOLERANCE`] returns the canonical basis.
#[derive(Debug, Clone, Copy)]
pub struct EigenPair2 {
    pub eigenvalue_hi: f64,
    pub eigenvalue_lo: f64,
    pub eigvec_hi: CVector2,
    pub eigvec_lo: CVector2,
}

/// Closed-form (trace/determinant) eigendecomposition of a Hermitian 2x2
/// matrix. Fails with [`Error::NonHermitianInput`] when the Hermitian defect
/// exceeds `tol`.
pub fn eig_hermitian2(m: &CMatrix2, tol: f64) -> Result<EigenPair2> {
    let defect = m.hermitian_defect();
    if defect > tol {
        return Err(Error::NonHermitianInput {
            defect,
            tolerance: tol,
        });
    }
    let a = m.entries[0][0].re;
    let c = m.entries[1][1].re;
    let b = 0.5 * (m.entries[0][1] + m.entries[1][0].conj());
    let mean = 0.5 * (a + c);
    let s = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
    let hi = mean + s;
    let lo = mean - s;

    if 2.0 * s < DEGENERACY_TOLERANCE {
        return Ok(EigenPair2 {
            eigenvalue_hi: hi,
            eigenvalue_lo: lo,
            eigvec_hi: CVector2::basis(0),
            eigvec_lo: CVector2::basis(1),
        });
    }

    // Two algebraically equivalent kernel vectors of (m - hi*I); pick the
    // better-conditioned one.
    let cand_a = CVector2::new([b, Complex64::from(hi - a)]);
    let cand_b = CVector2::new([Complex64::from(hi - c), b.conj()]);
    let raw = if cand_a.norm_sq() >= cand_b.norm_sq() {
        cand_a
    } else {
        cand_b
    };
    let eigvec_hi = raw
        .normalized()
        .expect("non-degenerate spectrum yields a nonzero kernel vector")
        .canonical_phase();
    let eigvec_lo = eigvec_hi
        .orthogonal_unit()
        .expect("unit vector has a unit orthogonal complement")
        .canonical_phase();

    Ok(EigenPair2 {
        eigenvalue_hi: hi,
        eigenvalue_lo: lo,
        eigvec_hi,
        eigvec_lo,
    })
}
