//! Dense `N × N` helpers: symmetric eigen-solves, Sylvester equations of the
//! form `XB + BX = M`, and inverse square roots of overlap matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Small dense real matrix indexed by orbital, `N × N`.
pub type SmallMatrix = DMatrix<f64>;

/// Relative eigenvalue cutoff below which an overlap matrix counts as singular.
pub const SINGULAR_CUTOFF: f64 = 1e-12;

/// Tolerance on `‖M ∓ Mᵀ‖_F / ‖M‖_F` when checking matrix symmetry kinds.
const SYMMETRY_TOL: f64 = 1e-12;

pub fn symmetric_part(m: &SmallMatrix) -> SmallMatrix {
    (m + m.transpose()) * 0.5
}

pub fn skew_part(m: &SmallMatrix) -> SmallMatrix {
    (m - m.transpose()) * 0.5
}

/// `‖M - Mᵀ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn asymmetry(m: &SmallMatrix) -> f64 {
    relative(&(m - m.transpose()), m)
}

/// `‖M + Mᵀ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn skew_defect(m: &SmallMatrix) -> f64 {
    relative(&(m + m.transpose()), m)
}

fn relative(defect: &SmallMatrix, m: &SmallMatrix) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        0.0
    } else {
        defect.norm() / scale
    }
}

/// Eigen-decomposition of a symmetric matrix, `M = U diag(λ) Uᵀ`.
pub fn eigh(m: &SmallMatrix) -> (DVector<f64>, SmallMatrix) {
    let e = SymmetricEigen::new(symmetric_part(m));
    (e.eigenvalues, e.eigenvectors)
}

fn ensure_square(m: &SmallMatrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

/// Solve `XB + BX = M` for SPD `B` in the eigenbasis of `B`:
/// `X = U Y Uᵀ` with `Y_ij = (UᵀMU)_ij / (λ_i + λ_j)`.
///
/// The solution inherits the symmetry class of `M`; callers check that.
pub(crate) fn sylvester_spd(b: &SmallMatrix, m: &SmallMatrix) -> Result<SmallMatrix> {
    let n = b.nrows();
    ensure_square(b, n)?;
    ensure_square(m, n)?;
    let (lambda, u) = eigh(b);
    let min = lambda.min();
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    let s = u.transpose() * m * &u;
    let y = SmallMatrix::from_fn(n, n, |i, j| s[(i, j)] / (lambda[i] + lambda[j]));
    let x = &u * y * u.transpose();
    debug_assert!(
        (&x * b + b * &x - m).norm() <= 1e-12 * m.norm() + f64::MIN_POSITIVE,
        "Sylvester residual {:e} exceeds tolerance",
        (&x * b + b * &x - m).norm() / m.norm()
    );
    Ok(x)
}

pub(crate) fn require_symmetric(m: &SmallMatrix) -> Result<()> {
    let defect = asymmetry(m);
    if defect > SYMMETRY_TOL {
        return Err(Error::WrongSymmetry {
            kind: "symmetric",
            defect,
        });
    }
    Ok(())
}

pub(crate) fn require_skew(m: &SmallMatrix) -> Result<()> {
    let defect = skew_defect(m);
    if defect > SYMMETRY_TOL {
        return Err(Error::WrongSymmetry {
            kind: "skew",
            defect,
        });
    }
    Ok(())
}

/// `S^{-1/2}` for a symmetric positive definite overlap matrix.
///
/// Fails with [`Error::SingularOverlap`] when the smallest eigenvalue falls
/// below [`SINGULAR_CUTOFF`] relative to the largest.
pub fn inverse_sqrt(s: &SmallMatrix) -> Result<SmallMatrix> {
    let (lambda, u) = eigh(s);
    let max = lambda.max();
    let min = lambda.min();
    if !(max > 0.0) || min <= SINGULAR_CUTOFF * max {
        return Err(Error::SingularOverlap {
            min_eigenvalue: min,
        });
    }
    let d = DMatrix::from_diagonal(&lambda.map(|l| 1.0 / l.sqrt()));
    Ok(&u * d * u.transpose())
}

/// Haar-distributed random orthogonal matrix (QR of a Gaussian matrix with
/// sign-corrected diagonal).
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SmallMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}
