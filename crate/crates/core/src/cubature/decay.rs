use std::time::Instant;

use super::transform::{kappa_map, lattice_coefficients, walsh_coefficients};
use super::{effective_m_max, CubatureResult, ResultFlag, SamplerSpec, Termination, ToleranceSpec};
use crate::error::{QmcError, Result};
use crate::integrands::{evaluate_f, Problem};
use crate::ld::Ordering;

/// Parameters of the coefficient-decay criteria.
///
/// With `c_kappa` the coefficient estimates from `n = 2^m` values, reordered
/// so magnitudes decay level by level, and `S(l)` the sum of `|c_kappa|` over
/// `2^{l-1} <= kappa < 2^l`, the error bound is
/// `inflate * fudge * 2^{-m} * S(m - block_len)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayParams {
    pub m_min: u32,
    pub m_max: u32,
    pub inflate: f64,
    /// Lag `l*` between the finest level and the level used for the bound;
    /// also the span over which decay is checked.
    pub block_len: u32,
    pub fudge: f64,
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams {
            m_min: 10,
            m_max: 24,
            inflate: 2.0,
            block_len: 4,
            fudge: 1.5,
        }
    }
}

#[derive(Clone, Copy)]
enum Basis {
    Walsh,
    Fourier,
}

/// Digital-net criterion using Walsh coefficients from the fast
/// Walsh–Hadamard transform.
pub fn cub_qmc_net_coeff_decay(
    p: &Problem,
    sampler: &SamplerSpec,
    tol: &ToleranceSpec,
    params: &DecayParams,
) -> Result<CubatureResult> {
    run(p, sampler, tol, params, Basis::Walsh)
}

/// Lattice criterion using complex-exponential coefficients from the FFT.
pub fn cub_qmc_lattice_coeff_decay(
    p: &Problem,
    sampler: &SamplerSpec,
    tol: &ToleranceSpec,
    params: &DecayParams,
) -> Result<CubatureResult> {
    run(p, sampler, tol, params, Basis::Fourier)
}

fn block_sum(mags: &[f64], kmap: &[usize], level: u32) -> f64 {
    let lo = 1usize << (level - 1);
    kmap[lo..2 * lo].iter().map(|&k| mags[k]).sum()
}

fn run(
    p: &Problem,
    sampler: &SamplerSpec,
    tol: &ToleranceSpec,
    params: &DecayParams,
    basis: Basis,
) -> Result<CubatureResult> {
    let start = Instant::now();
    let criterion = match basis {
        Basis::Walsh => "qmc-net-decay",
        Basis::Fourier => "qmc-lattice-decay",
    };
    if params.block_len == 0 || params.m_min <= params.block_len {
        return Err(QmcError::usage(format!(
            "m_min ({}) must exceed the block lag ({}) and the lag must be positive",
            params.m_min, params.block_len
        )));
    }
    if !(params.inflate > 0.0 && params.fudge > 0.0) {
        return Err(QmcError::domain("inflate and fudge must be positive"));
    }
    let m_max = effective_m_max(sampler, params.m_min, params.m_max)?;
    let mut stream = sampler.build(p.dim(), sampler.seed)?;
    let gray = sampler.ordering == Ordering::Gray;
    let mut y: Vec<f64> = Vec::new();
    let mut m = params.m_min;
    loop {
        let n = 1usize << m;
        let block = stream.points(y.len() as u64, n as u64)?;
        y.extend(evaluate_f(p, &block)?);
        let (mags, estimate) = match basis {
            Basis::Walsh => {
                let coeffs = if gray {
                    // position i holds the standard-order point with index gray(i)
                    let mut std_order = vec![0.0; n];
                    for (i, &v) in y.iter().enumerate() {
                        std_order[i ^ (i >> 1)] = v;
                    }
                    walsh_coefficients(&std_order)
                } else {
                    walsh_coefficients(&y)
                };
                let mean = coeffs[0];
                (coeffs.into_iter().map(f64::abs).collect::<Vec<_>>(), mean)
            }
            Basis::Fourier => lattice_coefficients(&y),
        };
        let kmap = kappa_map(&mags);
        let level = m - params.block_len;
        let stilde = block_sum(&mags, &kmap, level);
        let error_bound = params.inflate * params.fudge * stilde / n as f64;
        let mut flags = Vec::new();
        if level > params.block_len {
            // average magnitude per coefficient should shrink over l* levels
            let coarse = block_sum(&mags, &kmap, level - params.block_len)
                / (1u64 << (level - params.block_len - 1)) as f64;
            let fine = stilde / (1u64 << (level - 1)) as f64;
            if fine > coarse && fine > f64::EPSILON * estimate.abs() {
                flags.push(ResultFlag::ConeSuspect);
            }
        }
        let tolerance = tol.bound(estimate);
        let done = error_bound <= tolerance;
        if done || m >= m_max {
            return Ok(CubatureResult {
                estimate,
                n_total: n as u64,
                error_bound,
                tolerance,
                elapsed_seconds: start.elapsed().as_secs_f64(),
                iterations: m - params.m_min + 1,
                termination: if done {
                    Termination::Converged
                } else {
                    Termination::BudgetExhausted
                },
                criterion,
                flags,
            });
        }
        m += 1;
    }
}
