use std::time::Instant;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{effective_m_max, CubatureResult, SamplerSpec, Termination, ToleranceSpec};
use crate::error::{QmcError, Result};
use crate::integrands::{evaluate_f, Problem};
use crate::ld::child_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationParams {
    pub replications: usize,
    pub m_min: u32,
    pub m_max: u32,
    /// One-sided confidence of the Student t quantile.
    pub confidence: f64,
}

impl Default for ReplicationParams {
    fn default() -> Self {
        ReplicationParams {
            replications: 16,
            m_min: 8,
            m_max: 20,
            confidence: 0.995,
        }
    }
}

/// `R` independently randomized copies of one sequence; the spread of their
/// means gives a Student-t error bound. `m` doubles until the bound meets
/// the tolerance, reusing every earlier point.
pub fn cub_qmc_replications(
    p: &Problem,
    sampler: &SamplerSpec,
    tol: &ToleranceSpec,
    params: &ReplicationParams,
) -> Result<CubatureResult> {
    let start = Instant::now();
    let r = params.replications;
    if r < 4 {
        return Err(QmcError::usage(format!(
            "at least 4 replications are required, got {r}"
        )));
    }
    if !(params.confidence > 0.5 && params.confidence < 1.0) {
        return Err(QmcError::domain("confidence must lie in (0.5, 1)"));
    }
    let m_max = effective_m_max(sampler, params.m_min, params.m_max)?;
    let t_quant = StudentsT::new(0.0, 1.0, (r - 1) as f64)
        .expect("degrees of freedom are positive")
        .inverse_cdf(params.confidence);
    let d = p.dim();
    let mut streams = (0..r)
        .map(|k| sampler.build(d, child_seed(sampler.seed, k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![0.0; r];
    let mut n = 0u64;
    let mut m = params.m_min;
    loop {
        let next = 1u64 << m;
        let partial: Vec<f64> = streams
            .par_iter_mut()
            .map(|s| -> Result<f64> {
                let block = s.points(n, next)?;
                Ok(evaluate_f(p, &block)?.iter().sum())
            })
            .collect::<Result<_>>()?;
        for (s, v) in sums.iter_mut().zip(partial) {
            *s += v;
        }
        n = next;
        let means: Vec<f64> = sums.iter().map(|s| s / n as f64).collect();
        // shifted by the first mean, so identical replicates give exactly zero spread
        let shift = means[0];
        let offset = means.iter().map(|v| v - shift).sum::<f64>() / r as f64;
        let estimate = shift + offset;
        let var = means
            .iter()
            .map(|v| (v - shift - offset).powi(2))
            .sum::<f64>()
            / (r - 1) as f64;
        let error_bound = t_quant * var.sqrt() / (r as f64).sqrt();
        let tolerance = tol.bound(estimate);
        let done = error_bound <= tolerance;
        if done || m >= m_max {
            return Ok(CubatureResult {
                estimate,
                n_total: n * r as u64,
                error_bound,
                tolerance,
                elapsed_seconds: start.elapsed().as_secs_f64(),
                iterations: m - params.m_min + 1,
                termination: if done {
                    Termination::Converged
                } else {
                    Termination::BudgetExhausted
                },
                criterion: "qmc-rep",
                flags: Vec::new(),
            });
        }
        m += 1;
    }
}
