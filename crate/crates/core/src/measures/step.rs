//! Target measures and the inverse-CDF transform steps that reach them.

use nalgebra::{DMatrix, DVector};

use super::factor::{CovarianceFactor, FactorMethod};
use super::normal::{normal_quantile, LN_SQRT_2PI};
use crate::error::{QmcError, Result};

/// Sample space of a transform step's input or output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    UnitCube(usize),
    Box(usize),
    Real(usize),
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::UnitCube(d) | Space::Box(d) | Space::Real(d) => d,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaussianMeasure {
    pub cov: CovarianceFactor,
    /// `A^{-1}` and `log|det A|`, absent for singular covariances.
    whitening: Option<(DMatrix<f64>, f64)>,
}

impl GaussianMeasure {
    pub fn new(mean: Vec<f64>, sigma: DMatrix<f64>, method: FactorMethod) -> Result<Self> {
        let cov = CovarianceFactor::new(mean, sigma, method)?;
        let whitening = cov.factor.clone().try_inverse().and_then(|inv| {
            let log_det = cov.factor.determinant().abs().ln();
            log_det.is_finite().then_some((inv, log_det))
        });
        Ok(GaussianMeasure { cov, whitening })
    }

    pub fn dim(&self) -> usize {
        self.cov.dim()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.cov.mean
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.cov.sigma
    }

    /// `None` when the covariance is singular.
    pub fn log_density(&self, t: &[f64]) -> Option<f64> {
        let (inv, log_det) = self.whitening.as_ref()?;
        let d = t.len();
        let mut quad = 0.0;
        for i in 0..d {
            let mut z = 0.0;
            for j in 0..d {
                z += inv[(i, j)] * (t[j] - self.cov.mean[j]);
            }
            quad += z * z;
        }
        Some(-0.5 * quad - log_det - d as f64 * LN_SQRT_2PI)
    }
}

/// A density `lambda(t)` over a sample space.
#[derive(Debug, Clone)]
pub enum Measure {
    /// `lambda = 1` on `R^d`; not a probability density.
    Lebesgue(usize),
    /// `lambda = 1` on `[0,1]^d`.
    UnitCube(usize),
    Uniform {
        a: Vec<f64>,
        b: Vec<f64>,
    },
    Gaussian(GaussianMeasure),
    /// Independent Kumaraswamy marginals on `[0,1]^d`.
    Kumaraswamy {
        alpha: Vec<f64>,
        beta: Vec<f64>,
    },
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Lebesgue(d) | Measure::UnitCube(d) => *d,
            Measure::Uniform { a, .. } => a.len(),
            Measure::Gaussian(g) => g.dim(),
            Measure::Kumaraswamy { alpha, .. } => alpha.len(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Lebesgue(_) => "lebesgue",
            Measure::UnitCube(_) => "unit-cube",
            Measure::Uniform { .. } => "uniform",
            Measure::Gaussian(_) => "gaussian",
            Measure::Kumaraswamy { .. } => "kumaraswamy",
        }
    }

    pub fn is_probability(&self) -> bool {
        !matches!(self, Measure::Lebesgue(_))
    }

    /// Whether two measures define the same density.
    pub fn same_density(&self, other: &Measure) -> bool {
        match (self, other) {
            (Measure::Lebesgue(a), Measure::Lebesgue(b)) => a == b,
            (Measure::UnitCube(a), Measure::UnitCube(b)) => a == b,
            (Measure::Uniform { a: a1, b: b1 }, Measure::Uniform { a: a2, b: b2 }) => {
                a1 == a2 && b1 == b2
            }
            (Measure::Gaussian(g1), Measure::Gaussian(g2)) => {
                g1.mean() == g2.mean() && g1.sigma() == g2.sigma()
            }
            (
                Measure::Kumaraswamy {
                    alpha: a1,
                    beta: b1,
                },
                Measure::Kumaraswamy {
                    alpha: a2,
                    beta: b2,
                },
            ) => a1 == a2 && b1 == b2,
            _ => false,
        }
    }

    /// Natural log of the density at `t`; `None` if it cannot be evaluated.
    pub fn log_density(&self, t: &[f64]) -> Option<f64> {
        match self {
            Measure::Lebesgue(_) => Some(0.0),
            Measure::UnitCube(_) => Some(if t.iter().all(|v| (0.0..=1.0).contains(v)) {
                0.0
            } else {
                f64::NEG_INFINITY
            }),
            Measure::Uniform { a, b } => {
                let mut acc = 0.0;
                for ((&v, &lo), &hi) in t.iter().zip(a).zip(b) {
                    if !(lo..=hi).contains(&v) {
                        return Some(f64::NEG_INFINITY);
                    }
                    acc -= (hi - lo).ln();
                }
                Some(acc)
            }
            Measure::Gaussian(g) => g.log_density(t),
            Measure::Kumaraswamy { alpha, beta } => {
                let mut acc = 0.0;
                for ((&v, &al), &be) in t.iter().zip(alpha).zip(beta) {
                    if !(0.0..=1.0).contains(&v) {
                        return Some(f64::NEG_INFINITY);
                    }
                    acc += al.ln()
                        + be.ln()
                        + (al - 1.0) * v.ln()
                        + (be - 1.0) * (-v.powf(al)).ln_1p();
                }
                Some(acc)
            }
        }
    }
}

/// One inverse-CDF step `Psi_l`: maps a point mimicking the uniform
/// distribution on its domain to a point mimicking `measure` (`lambda_l`).
/// Its input density `varrho_l` is identically one.
#[derive(Debug, Clone)]
pub struct TransformStep {
    name: String,
    measure: Measure,
    domain: Space,
    codomain: Space,
}

impl TransformStep {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The density `lambda_l` this step mimics.
    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn domain(&self) -> Space {
        self.domain
    }

    pub fn codomain(&self) -> Space {
        self.codomain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Input density `varrho_l`; inverse-CDF steps mimic the uniform density.
    pub fn log_input_density(&self, _x: &[f64]) -> f64 {
        0.0
    }

    pub fn log_target_density(&self, t: &[f64]) -> Option<f64> {
        self.measure.log_density(t)
    }

    /// Apply the forward map. `scratch` must hold at least `dim` values.
    pub fn forward(&self, x: &[f64], out: &mut [f64], scratch: &mut [f64]) -> Result<()> {
        match &self.measure {
            Measure::Uniform { a, b } => {
                for k in 0..x.len() {
                    out[k] = a[k] + (b[k] - a[k]) * x[k];
                }
            }
            Measure::Gaussian(g) => {
                let d = x.len();
                for (k, &u) in x.iter().enumerate() {
                    if !(u > 0.0 && u < 1.0) {
                        return Err(QmcError::Boundary {
                            index: 0,
                            coordinate: k,
                            value: u,
                        });
                    }
                    scratch[k] = normal_quantile(u);
                }
                let a = &g.cov.factor;
                for i in 0..d {
                    let mut acc = g.cov.mean[i];
                    for j in 0..d {
                        acc += a[(i, j)] * scratch[j];
                    }
                    out[i] = acc;
                }
            }
            Measure::Kumaraswamy { alpha, beta } => {
                for k in 0..x.len() {
                    out[k] = kumaraswamy_quantile(x[k], alpha[k], beta[k]);
                }
            }
            Measure::Lebesgue(_) | Measure::UnitCube(_) => {
                out[..x.len()].copy_from_slice(x);
            }
        }
        Ok(())
    }
}

/// `F^{-1}(u) = (1 - (1-u)^{1/beta})^{1/alpha}`.
pub fn kumaraswamy_quantile(u: f64, alpha: f64, beta: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let inner = -((-u).ln_1p() / beta).exp_m1();
    inner.powf(1.0 / alpha)
}

/// `F(t) = 1 - (1 - t^alpha)^beta`.
pub fn kumaraswamy_cdf(t: f64, alpha: f64, beta: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    -(beta * (-t.powf(alpha)).ln_1p()).exp_m1()
}

fn check_finite(v: &[f64], what: &str) -> Result<()> {
    if v.is_empty() {
        return Err(QmcError::domain(format!("{what} is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(QmcError::domain(format!("{what} must be finite")));
    }
    Ok(())
}

/// `t = a + (b - a) * x`, mimicking `U[a, b]`.
pub fn uniform_transform(a: Vec<f64>, b: Vec<f64>) -> Result<TransformStep> {
    check_finite(&a, "lower bound a")?;
    check_finite(&b, "upper bound b")?;
    if a.len() != b.len() {
        return Err(QmcError::domain("a and b have different lengths"));
    }
    if let Some(k) = (0..a.len()).find(|&k| a[k] >= b[k]) {
        return Err(QmcError::domain(format!(
            "a[{k}] = {} is not below b[{k}] = {}",
            a[k], b[k]
        )));
    }
    let d = a.len();
    Ok(TransformStep {
        name: "uniform".into(),
        measure: Measure::Uniform { a, b },
        domain: Space::UnitCube(d),
        codomain: Space::Box(d),
    })
}

/// `t = a + A Phi^{-1}(x)`, mimicking `N(a, Sigma)` with `Sigma = A A^T`.
pub fn gaussian_transform(
    mean: Vec<f64>,
    sigma: DMatrix<f64>,
    method: FactorMethod,
) -> Result<TransformStep> {
    let g = GaussianMeasure::new(mean, sigma, method)?;
    let d = g.dim();
    Ok(TransformStep {
        name: "gaussian".into(),
        measure: Measure::Gaussian(g),
        domain: Space::UnitCube(d),
        codomain: Space::Real(d),
    })
}

/// Isotropic Gaussian `N(0, variance * I)`.
pub fn isotropic_gaussian_transform(d: usize, variance: f64) -> Result<TransformStep> {
    if d == 0 {
        return Err(QmcError::domain("dimension must be at least 1"));
    }
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(QmcError::domain(format!(
            "variance must be positive, got {variance}"
        )));
    }
    gaussian_transform(
        vec![0.0; d],
        DMatrix::identity(d, d) * variance,
        FactorMethod::Cholesky,
    )
}

/// Discretized Brownian motion at times `tau/d, ..., tau`:
/// `Sigma_jk = (tau/d) min(j, k)`, mean `drift * (tau/d) * (1..d)`.
pub fn brownian_motion(tau: f64, d: usize, drift: f64) -> Result<TransformStep> {
    brownian_motion_with(tau, d, drift, FactorMethod::Pca)
}

pub fn brownian_motion_with(
    tau: f64,
    d: usize,
    drift: f64,
    method: FactorMethod,
) -> Result<TransformStep> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(QmcError::domain(format!(
            "time horizon must be positive, got {tau}"
        )));
    }
    if d == 0 {
        return Err(QmcError::domain("at least one time step is required"));
    }
    if !drift.is_finite() {
        return Err(QmcError::domain("drift must be finite"));
    }
    let dt = tau / d as f64;
    let sigma = DMatrix::from_fn(d, d, |j, k| dt * (j.min(k) + 1) as f64);
    let mean = (1..=d).map(|j| drift * dt * j as f64).collect();
    Ok(gaussian_transform(mean, sigma, method)?.with_name("brownian-motion"))
}

/// Componentwise Kumaraswamy inverse CDF onto `[0,1]^d`.
pub fn kumaraswamy_transform(alpha: Vec<f64>, beta: Vec<f64>) -> Result<TransformStep> {
    check_finite(&alpha, "alpha")?;
    check_finite(&beta, "beta")?;
    if alpha.len() != beta.len() {
        return Err(QmcError::domain("alpha and beta have different lengths"));
    }
    if alpha.iter().chain(&beta).any(|&v| v <= 0.0) {
        return Err(QmcError::domain(
            "Kumaraswamy shape parameters must be positive",
        ));
    }
    let d = alpha.len();
    Ok(TransformStep {
        name: "kumaraswamy".into(),
        measure: Measure::Kumaraswamy { alpha, beta },
        domain: Space::UnitCube(d),
        codomain: Space::UnitCube(d),
    })
}

/// `Phi^{-1}` applied componentwise (the `N(0, I)` map), used to reach
/// Lebesgue measure on `R^d`. Paired with a Lebesgue target, the ladder
/// weight is the full Jacobian `prod 1/phi(Phi^{-1}(x_k))`.
pub fn lebesgue_tail_transform(d: usize) -> Result<TransformStep> {
    Ok(isotropic_gaussian_transform(d, 1.0)?.with_name("lebesgue-tail"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(step: &TransformStep, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; x.len()];
        let mut scratch = vec![0.0; x.len()];
        step.forward(x, &mut out, &mut scratch)?;
        Ok(out)
    }

    #[test]
    fn uniform_examples() {
        let s = uniform_transform(vec![-2.0, 0.0], vec![2.0, 4.0]).unwrap();
        assert_eq!(apply(&s, &[0.0, 0.0]).unwrap(), vec![-2.0, 0.0]);
        assert_eq!(apply(&s, &[0.5, 0.5]).unwrap(), vec![0.0, 2.0]);
        let id = uniform_transform(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(apply(&id, &[0.3]).unwrap(), vec![0.3]);
        assert_eq!(s.log_target_density(&[0.0, 2.0]).unwrap(), -(16f64.ln()));
        assert!(uniform_transform(vec![1.0], vec![1.0]).is_err());
        assert!(uniform_transform(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn gaussian_center_maps_to_mean() {
        let s = gaussian_transform(
            vec![3.0, 2.0],
            DMatrix::from_row_slice(2, 2, &[9.0, 5.0, 5.0, 4.0]),
            FactorMethod::Pca,
        )
        .unwrap();
        assert_eq!(apply(&s, &[0.5, 0.5]).unwrap(), vec![3.0, 2.0]);
    }

    #[test]
    fn gaussian_rejects_boundary() {
        let s = isotropic_gaussian_transform(2, 0.5).unwrap();
        match apply(&s, &[0.3, 0.0]) {
            Err(QmcError::Boundary {
                coordinate, value, ..
            }) => {
                assert_eq!(coordinate, 1);
                assert_eq!(value, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(apply(&s, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn brownian_covariance_and_mean() {
        let s = brownian_motion(1.0, 3, 0.0).unwrap();
        let Measure::Gaussian(g) = s.measure() else {
            panic!()
        };
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 1.0, 2.0, 3.0]) / 3.0;
        assert!((g.sigma() - expected).norm() < 1e-15);
        assert!(g.mean().iter().all(|&m| m == 0.0));
        let drifted = brownian_motion(1.0, 52, 2.0).unwrap();
        let Measure::Gaussian(g) = drifted.measure() else {
            panic!()
        };
        assert!((g.mean()[51] - 2.0).abs() < 1e-14);
        assert!(brownian_motion(0.0, 3, 0.0).is_err());
        assert!(brownian_motion(1.0, 0, 0.0).is_err());
    }

    #[test]
    fn kumaraswamy_examples() {
        let id = kumaraswamy_transform(vec![1.0], vec![1.0]).unwrap();
        for u in [0.0, 0.1, 0.5, 0.9] {
            assert!((apply(&id, &[u]).unwrap()[0] - u).abs() < 1e-15);
        }
        assert_eq!(kumaraswamy_quantile(0.0, 2.0, 3.0), 0.0);
        assert_eq!(kumaraswamy_quantile(1.0, 2.0, 3.0), 1.0);
        let t = kumaraswamy_quantile(0.5, 2.0, 3.0);
        assert!((kumaraswamy_cdf(t, 2.0, 3.0) - 0.5).abs() < 1e-12);
        assert!(kumaraswamy_transform(vec![0.0], vec![1.0]).is_err());
        assert!(kumaraswamy_transform(vec![1.0], vec![-1.0]).is_err());
    }

    #[test]
    fn gaussian_log_density_matches_closed_form() {
        let s = isotropic_gaussian_transform(2, 0.5).unwrap();
        let t = [0.3, -0.4];
        let expected = -(0.09 + 0.16) - std::f64::consts::PI.ln();
        assert!((s.log_target_density(&t).unwrap() - expected).abs() < 1e-14);
    }
}
