//! Exact linear algebra on the 4×4 complex matrices of a two-spin-1/2
//! Hilbert space.
//!
//! The only nontrivial routine is the Hermitian eigensolver, a cyclic complex
//! Jacobi iteration. At dimension 4 it converges to machine precision in a
//! handful of sweeps, which makes the eigendecomposition route for the matrix
//! exponential exact for all practical purposes and keeps the crate free of
//! any external linear-algebra backend.

use core::f64::consts::PI;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

// Float supplies f64 transcendentals in no_std builds; test builds link std,
// whose inherent methods shadow the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;

pub type Complex64 = num_complex::Complex<f64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense 4×4 complex matrix, the operator representation used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4 {
    m: [[Complex64; 4]; 4],
}

impl Matrix4 {
    pub const DIM: usize = 4;

    pub fn zeros() -> Self {
        Matrix4 { m: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            out.m[i][i] = ONE;
        }
        out
    }

    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Matrix4 { m: rows }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.m[i][j] = self.m[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2] + self.m[3][3]
    }

    /// Largest entry magnitude (max norm).
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        for row in &self.m {
            for z in row {
                best = best.max(z.norm_sqr());
            }
        }
        best.sqrt()
    }

    /// Max-norm distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                best = best.max((self.m[i][j] - other.m[i][j]).norm_sqr());
            }
        }
        best.sqrt()
    }

    /// Max norm of `M - M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Max norm of `U†U - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// Scale in place by a real factor.
    pub fn scale_into(&mut self, factor: f64) {
        for row in self.m.iter_mut() {
            for z in row.iter_mut() {
                *z *= factor;
            }
        }
    }

    /// Scale by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for z in row.iter_mut() {
                *z *= factor;
            }
        }
        out
    }

    /// `self += factor * other`, the workhorse for Hamiltonian assembly.
    pub fn add_scaled(&mut self, factor: f64, other: &Self) {
        for i in 0..4 {
            for j in 0..4 {
                self.m[i][j] += factor * other.m[i][j];
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix4 {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.m[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.m[i][j]
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: Matrix4) -> Matrix4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: Matrix4) -> Matrix4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.m[i][j] -= rhs.m[i][j];
            }
        }
        out
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        let mut out = Matrix4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.m[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.m[i][j] += a * rhs.m[k][j];
                }
            }
        }
        out
    }
}

/// Eigendecomposition `H = V diag(w) V†` of a Hermitian matrix.
pub struct Eigensystem {
    /// Real eigenvalues, in the order produced by the Jacobi sweeps.
    pub values: [f64; 4],
    /// Unitary matrix of eigenvectors (columns).
    pub vectors: Matrix4,
}

/// Cyclic complex Jacobi diagonalization of a Hermitian 4×4 matrix.
///
/// The caller is responsible for Hermiticity; the routine reads only the
/// upper triangle and the real part of the diagonal. Converges quadratically;
/// the sweep cap is generous and never reached in practice.
pub fn eigh(h: &Matrix4) -> Eigensystem {
    let mut a = *h;
    // Defensive symmetrization so roundoff-level asymmetry cannot drift.
    for i in 0..4 {
        a.m[i][i] = Complex64::new(a.m[i][i].re, 0.0);
        for j in (i + 1)..4 {
            let avg = (a.m[i][j] + a.m[j][i].conj()) * 0.5;
            a.m[i][j] = avg;
            a.m[j][i] = avg.conj();
        }
    }
    let mut v = Matrix4::identity();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let tol = scale * 1e-16;

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += a.m[p][q].norm_sqr();
            }
        }
        if off <= tol * tol {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let g = a.m[p][q];
                let gmag = g.norm();
                if gmag <= scale * 1e-18 {
                    continue;
                }
                // Unitary plane rotation J with columns
                //   (c, s e^{-iφ})ᵀ and (-s e^{iφ}, c)ᵀ,  g = |g| e^{iφ},
                // chosen so (J†AJ)_pq = 0: t solves t² - 2τt - 1 = 0 and the
                // smaller-magnitude root keeps the rotation angle below π/4.
                let tau = (a.m[q][q].re - a.m[p][p].re) / (2.0 * gmag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                let phase = g / gmag; // e^{iφ}
                let s = phase.conj() * sigma;

                // columns p, q of A
                for k in 0..4 {
                    let akp = a.m[k][p];
                    let akq = a.m[k][q];
                    a.m[k][p] = akp * c + akq * s;
                    a.m[k][q] = akq * c - akp * s.conj();
                }
                // rows p, q of A
                for k in 0..4 {
                    let apk = a.m[p][k];
                    let aqk = a.m[q][k];
                    a.m[p][k] = apk * c + aqk * s.conj();
                    a.m[q][k] = aqk * c - apk * s;
                }
                a.m[p][q] = ZERO;
                a.m[q][p] = ZERO;
                a.m[p][p] = Complex64::new(a.m[p][p].re, 0.0);
                a.m[q][q] = Complex64::new(a.m[q][q].re, 0.0);

                // accumulate V·J
                for k in 0..4 {
                    let vkp = v.m[k][p];
                    let vkq = v.m[k][q];
                    v.m[k][p] = vkp * c + vkq * s;
                    v.m[k][q] = vkq * c - vkp * s.conj();
                }
            }
        }
    }

    Eigensystem {
        values: [a.m[0][0].re, a.m[1][1].re, a.m[2][2].re, a.m[3][3].re],
        vectors: v,
    }
}

/// Unitary propagator `U = exp(-i 2π h dt)` for a Hamiltonian `h` in Hz.
///
/// This is the single place where frequencies meet the 2π: everything else in
/// the crate carries plain Hz. Built through the Hermitian eigendecomposition,
/// which is exact at dimension 4 up to roundoff.
///
/// Rejects matrices whose Hermiticity defect exceeds `1e-12` relative to the
/// largest entry (with an absolute floor of 1e-12 for near-zero inputs).
pub fn matrix_exponential(h: &Matrix4, dt_seconds: f64) -> Result<Matrix4, CoreError> {
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * h.max_abs().max(1.0) {
        return Err(CoreError::NotHermitian { defect });
    }
    let eig = eigh(h);
    // U = V diag(e^{-i 2π w dt}) V†
    let mut u = Matrix4::zeros();
    for k in 0..4 {
        let phi = -2.0 * PI * eig.values[k] * dt_seconds;
        let d = Complex64::new(phi.cos(), phi.sin());
        for i in 0..4 {
            let left = eig.vectors.m[i][k] * d;
            for j in 0..4 {
                u.m[i][j] += left * eig.vectors.m[j][k].conj();
            }
        }
    }
    Ok(u)
}

/// Conjugation `ρ → U ρ U†` of a density operator by a propagator.
pub fn evolve(rho: &Matrix4, u: &Matrix4) -> Matrix4 {
    *u * *rho * u.adjoint()
}

/// Expectation value `Re tr(ρ · op)`.
pub fn expectation(rho: &Matrix4, op: &Matrix4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let z = rho.m[i][j] * op.m[j][i];
            acc += z.re;
        }
    }
    acc
}
