//! Covariance factorizations `Sigma = A A^T`.

use nalgebra::{DMatrix, DVector};

use crate::error::{QmcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMethod {
    /// `A = U diag(sqrt(lambda))` with eigenvalues sorted descending.
    Pca,
    /// Lower-triangular Cholesky factor.
    Cholesky,
}

impl FactorMethod {
    pub fn name(self) -> &'static str {
        match self {
            FactorMethod::Pca => "pca",
            FactorMethod::Cholesky => "cholesky",
        }
    }
}

/// Relative tolerance below which negative eigenvalues are treated as zero.
const EIGEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceFactor {
    pub mean: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub factor: DMatrix<f64>,
    pub method: FactorMethod,
}

impl CovarianceFactor {
    pub fn new(mean: Vec<f64>, sigma: DMatrix<f64>, method: FactorMethod) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(QmcError::domain("mean vector is empty"));
        }
        if sigma.nrows() != d || sigma.ncols() != d {
            return Err(QmcError::domain(format!(
                "covariance is {}x{}, mean has length {d}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if mean.iter().chain(sigma.iter()).any(|v| !v.is_finite()) {
            return Err(QmcError::domain("mean and covariance must be finite"));
        }
        let scale = sigma
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        for i in 0..d {
            for j in 0..i {
                if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-12 * scale {
                    return Err(QmcError::Factorization(
                        "covariance is not symmetric".into(),
                    ));
                }
            }
        }
        let factor = match method {
            FactorMethod::Pca => pca_factor(&sigma)?,
            FactorMethod::Cholesky => cholesky_factor(&sigma)?,
        };
        Ok(CovarianceFactor {
            mean: DVector::from_vec(mean),
            sigma,
            factor,
            method,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

fn pca_factor(sigma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let d = sigma.nrows();
    let sym = (sigma + sigma.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let max_eig = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut a = DMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[k];
        if lambda < -EIGEN_TOL * max_eig.max(1e-300) {
            return Err(QmcError::Factorization(format!(
                "covariance is not positive semi-definite (eigenvalue {lambda:e})"
            )));
        }
        let root = lambda.max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        // sign convention: largest-magnitude entry positive
        let pivot = v.iter().fold(
            0.0f64,
            |best, &x| if x.abs() > best.abs() { x } else { best },
        );
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for row in 0..d {
            a[(row, col)] = sign * v[row] * root;
        }
    }
    Ok(a)
}

fn cholesky_factor(sigma: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    sigma.clone().cholesky().map(|c| c.l()).ok_or_else(|| {
        QmcError::Factorization("covariance is not positive definite; Cholesky failed".into())
    })
}
