//! Dense complex linear algebra on fixed-size (2×2 and 4×4) matrices.
//!
//! Every exponential in this crate has a Hermitian generator, so the matrix
//! exponential goes through the Hermitian eigendecomposition rather than
//! scaling-and-squaring. The eigensolver is a cyclic complex Jacobi method:
//! for matrices this small it is fast, and it resolves eigenvalues close to
//! zero with high absolute accuracy, which the square roots in the
//! concurrence computation depend on.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix2 = SMatrix<Complex64, 2, 2>;
pub type CMatrix4 = SMatrix<Complex64, 4, 4>;

/// Maximum `|m - m†|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues down to this (negative) value are rounding noise and clamp to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Positive eigenvalues below this are rounding noise from forming products
/// of rank-deficient matrices; their square roots would otherwise leak
/// `~1e-8` into results that should vanish.
pub const PSD_ROUNDING_FLOOR: f64 = 1e-14;

const MAX_SWEEPS: usize = 64;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity2() -> CMatrix2 {
    CMatrix2::identity()
}

pub fn sigma_x() -> CMatrix2 {
    CMatrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

pub fn sigma_y() -> CMatrix2 {
    CMatrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

pub fn sigma_z() -> CMatrix2 {
    CMatrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

/// Kronecker product with the row-major block convention
/// `(a⊗b)[2i+k][2j+l] = a[i][j]·b[k][l]`.
pub fn kron(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    CMatrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `ab - ba`
pub fn commutator<const N: usize>(
    a: &SMatrix<Complex64, N, N>,
    b: &SMatrix<Complex64, N, N>,
) -> SMatrix<Complex64, N, N> {
    a * b - b * a
}

/// Largest entry of `|m - m†|`.
pub fn hermitian_deviation<const N: usize>(m: &SMatrix<Complex64, N, N>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in i..N {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`
pub fn hermitian_part<const N: usize>(m: &SMatrix<Complex64, N, N>) -> SMatrix<Complex64, N, N> {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_unitary<const N: usize>(u: &SMatrix<Complex64, N, N>, tol: f64) -> bool {
    (u.adjoint() * u - SMatrix::<Complex64, N, N>::identity()).norm() <= tol
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `values` are sorted in descending order and `vectors` holds the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen<const N: usize> {
    pub values: SVector<f64, N>,
    pub vectors: SMatrix<Complex64, N, N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// `V diag(f(λ)) V†`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> SMatrix<Complex64, N, N> {
        let mut scaled = self.vectors;
        for j in 0..N {
            let w = f(self.values[j]);
            for i in 0..N {
                scaled[(i, j)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> SMatrix<Complex64, N, N> {
        self.map_spectrum(|x| c(x, 0.0))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn herm_eig<const N: usize>(m: &SMatrix<Complex64, N, N>) -> Result<HermitianEigen<N>> {
    let deviation = hermitian_deviation(m);
    if !(deviation <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian { deviation });
    }
    let mut a = hermitian_part(m);
    let mut v = SMatrix::<Complex64, N, N>::identity();
    let scale = a.norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-18 * scale || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = SVector::<f64, N>::from_fn(|k, _| a[(order[k], order[k])].re);
    let vectors = SMatrix::<Complex64, N, N>::from_fn(|i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

// Annihilates a[p][q] with the unitary J = D·R, where D rephases a[p][q] to a
// real number and R is the classical real Jacobi rotation. Updates a ← J†aJ
// and v ← vJ in place.
fn jacobi_rotate<const N: usize>(
    a: &mut SMatrix<Complex64, N, N>,
    v: &mut SMatrix<Complex64, N, N>,
    p: usize,
    q: usize,
) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // J_pp = c, J_pq = s, J_qp = -s e^{-iφ}, J_qq = c e^{-iφ}
    let jpp = c(cs, 0.0);
    let jpq = c(sn, 0.0);
    let jqp = -phase.conj() * sn;
    let jqq = phase.conj() * cs;

    for i in 0..N {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * jpp + aiq * jqp;
        a[(i, q)] = aip * jpq + aiq * jqq;
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * jpp + viq * jqp;
        v[(i, q)] = vip * jpq + viq * jqq;
    }
    for j in 0..N {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
        a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(app - t * r, 0.0);
    a[(q, q)] = c(aqq + t * r, 0.0);
}

/// `exp(-i t h)` for Hermitian `h`, built from its eigendecomposition.
pub fn expm_skew<const N: usize>(
    h: &SMatrix<Complex64, N, N>,
    t: f64,
) -> Result<SMatrix<Complex64, N, N>> {
    let eig = herm_eig(h)?;
    Ok(eig.map_spectrum(|lambda| Complex64::from_polar(1.0, -lambda * t)))
}

/// Hermitian PSD square root.
pub fn sqrtm_psd<const N: usize>(m: &SMatrix<Complex64, N, N>) -> Result<SMatrix<Complex64, N, N>> {
    let eig = herm_eig(m)?;
    let min = eig.values[N - 1];
    if min < -PSD_CLAMP {
        return Err(Error::NegativeSpectrum { min });
    }
    Ok(eig.map_spectrum(|x| {
        if x <= PSD_ROUNDING_FLOOR {
            c(0.0, 0.0)
        } else {
            c(x.sqrt(), 0.0)
        }
    }))
}
