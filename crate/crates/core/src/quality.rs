//! Point-set diagnostics: centered L2 discrepancy, stratification, empirical
//! convergence orders and moments.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::cubature::SamplerSpec;
use crate::error::{QmcError, Result};
use crate::integrands::{evaluate_f, Problem};
use crate::ld::{child_seed, Domain, Family, PointBlock};

/// Centered L2 discrepancy of a unit-cube block, by its O(n^2 d) closed form.
pub fn centered_l2_discrepancy(block: &PointBlock) -> Result<f64> {
    if block.is_empty() {
        return Err(QmcError::domain(
            "discrepancy of an empty block is undefined",
        ));
    }
    if block.domain != Domain::UnitCube {
        return Err(QmcError::domain("discrepancy needs a unit-cube block"));
    }
    let n = block.n();
    let d = block.d() as i32;
    let centered: Vec<f64> = block.values().iter().map(|&x| (x - 0.5).abs()).collect();
    let dim = block.d();
    let single: f64 = centered
        .chunks_exact(dim)
        .map(|c| {
            c.iter()
                .map(|&a| 1.0 + 0.5 * a - 0.5 * a * a)
                .product::<f64>()
        })
        .sum();
    let pairs: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = block.row(i);
            let ci = &centered[i * dim..(i + 1) * dim];
            (0..n)
                .map(|j| {
                    let xj = block.row(j);
                    let cj = &centered[j * dim..(j + 1) * dim];
                    (0..dim)
                        .map(|k| 1.0 + 0.5 * ci[k] + 0.5 * cj[k] - 0.5 * (xi[k] - xj[k]).abs())
                        .product::<f64>()
                })
                .sum::<f64>()
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    let nf = n as f64;
    let sq = (13.0f64 / 12.0).powi(d) - 2.0 / nf * single + pairs / (nf * nf);
    Ok(sq.max(0.0).sqrt())
}

/// For each dimension, whether the `2^m` points put exactly one coordinate
/// in every interval `[j 2^{-m}, (j+1) 2^{-m})`.
pub fn stratification_check(block: &PointBlock, m: u32) -> Result<Vec<bool>> {
    if m > 32 {
        return Err(QmcError::usage(format!(
            "m = {m} is too large for a stratification check"
        )));
    }
    let n = 1usize << m;
    if block.n() != n {
        return Err(QmcError::usage(format!(
            "stratification at m = {m} needs exactly {n} points, block has {}",
            block.n()
        )));
    }
    let scale = n as f64;
    Ok((0..block.d())
        .map(|k| {
            let mut seen = vec![false; n];
            block.rows().all(|row| {
                let x = row[k];
                if !(0.0..1.0).contains(&x) {
                    return false;
                }
                let cell = ((x * scale) as usize).min(n - 1);
                !std::mem::replace(&mut seen[cell], true)
            })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub ms: Vec<u32>,
    pub rmse: Vec<f64>,
    /// Least-squares slope of `log2 rmse` against `m = log2 n`.
    pub slope: f64,
    pub intercept: f64,
    pub seeds: usize,
    /// Set when some RMSE is zero (or subnormal) and the fit is meaningless.
    pub degenerate: bool,
}

impl SlopeReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,rmse\n");
        for (m, r) in self.ms.iter().zip(&self.rmse) {
            s.push_str(&format!("{m},{}\n", crate::format::fmt17(*r)));
        }
        s
    }

    pub fn to_json(&self) -> String {
        use crate::format::json_number;
        let ms: Vec<String> = self.ms.iter().map(|m| m.to_string()).collect();
        let rmse: Vec<String> = self.rmse.iter().map(|&r| json_number(r)).collect();
        format!(
            "{{\"m\":[{}],\"rmse\":[{}],\"slope\":{},\"intercept\":{},\"seeds\":{},\"degenerate\":{}}}",
            ms.join(","),
            rmse.join(","),
            json_number(self.slope),
            json_number(self.intercept),
            self.seeds,
            self.degenerate
        )
    }
}

/// Least-squares line through `(x, y)`: returns `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// RMSE of the plain sample mean against the problem's oracle for each
/// `n = 2^m`, over `seeds` independent randomizations, and its log-log slope.
/// Seed `s` uses stream `child_seed(sampler.seed, s)`.
pub fn convergence_slope(
    p: &Problem,
    sampler: &SamplerSpec,
    m_range: (u32, u32),
    seeds: usize,
) -> Result<SlopeReport> {
    let oracle = p.oracle().ok_or_else(|| {
        QmcError::usage(format!(
            "problem '{}' has no known value to compare with",
            p.name()
        ))
    })?;
    let (m_lo, m_hi) = m_range;
    if m_hi < m_lo + 2 {
        return Err(QmcError::usage(
            "the slope fit needs at least three values of m",
        ));
    }
    if seeds < 2 {
        return Err(QmcError::usage("at least two seeds are required"));
    }
    if m_hi > sampler.max_log2_points() {
        return Err(QmcError::capacity(format!(
            "m = {m_hi} exceeds the sampler's 2^{} points",
            sampler.max_log2_points()
        )));
    }
    let ms: Vec<u32> = (m_lo..=m_hi).collect();
    // squared errors per seed per m; each seed extends one stream
    let per_seed: Vec<Vec<f64>> = (0..seeds)
        .into_par_iter()
        .map(|s| -> Result<Vec<f64>> {
            let mut stream = sampler.build(p.dim(), child_seed(sampler.seed, s as u64))?;
            let iid = sampler.family == Family::Iid;
            let (mut sum, mut n) = (0.0, 0u64);
            let mut errs = Vec::with_capacity(ms.len());
            for &m in &ms {
                if iid {
                    // IID streams cannot be extended into a prefix: draw 2^m fresh points
                    (sum, n) = (0.0, 0);
                }
                let block = stream.points(n, 1 << m)?;
                sum += evaluate_f(p, &block)?.iter().sum::<f64>();
                n = 1 << m;
                let e = sum / n as f64 - oracle;
                errs.push(e * e);
            }
            Ok(errs)
        })
        .collect::<Result<_>>()?;
    let rmse: Vec<f64> = (0..ms.len())
        .map(|j| (per_seed.iter().map(|e| e[j]).sum::<f64>() / seeds as f64).sqrt())
        .collect();
    let degenerate = rmse.iter().any(|&r| !(r >= f64::MIN_POSITIVE));
    let (slope, intercept) = if degenerate {
        (f64::NAN, f64::NAN)
    } else {
        let x: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
        let y: Vec<f64> = rmse.iter().map(|r| r.log2()).collect();
        fit_line(&x, &y)
    };
    Ok(SlopeReport {
        ms,
        rmse,
        slope,
        intercept,
        seeds,
        degenerate,
    })
}

/// Sample mean and unbiased sample covariance of the rows of a block.
pub fn empirical_moments(block: &PointBlock) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = block.n();
    if n < 2 {
        return Err(QmcError::domain(format!(
            "moments need at least 2 points, got {n}"
        )));
    }
    let d = block.d();
    let mut mean = DVector::zeros(d);
    for row in block.rows() {
        for k in 0..d {
            mean[k] += row[k];
        }
    }
    mean /= n as f64;
    let mut cov = DMatrix::zeros(d, d);
    for row in block.rows() {
        for i in 0..d {
            let di = row[i] - mean[i];
            for j in 0..=i {
                cov[(i, j)] += di * (row[j] - mean[j]);
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            cov[(j, i)] = cov[(i, j)];
        }
    }
    cov /= (n - 1) as f64;
    Ok((mean, cov))
}
