//! Adaptive stopping criteria that choose `n` so that `|mu - mu_hat| <= eps`.

mod clt;
mod decay;
mod replications;
mod sampler;
mod transform;

use std::fmt;

use crate::error::{QmcError, Result};
use crate::format::{json_number, json_string};
use crate::integrands::Problem;
use crate::ld::{Family, Ordering, RandomizationKind};

pub use clt::{cub_mc_clt, CltParams};
pub use decay::{cub_qmc_lattice_coeff_decay, cub_qmc_net_coeff_decay, DecayParams};
pub use replications::{cub_qmc_replications, ReplicationParams};
pub use sampler::{Sampler, SamplerSpec};
pub use transform::{fwht, kappa_map, lattice_coefficients, walsh_coefficients};

/// Error tolerance: the bound must fall below `max(abs_tol, rel_tol |mu_hat|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl ToleranceSpec {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(QmcError::domain(format!(
                "absolute tolerance must be positive, got {abs_tol}"
            )));
        }
        if !(rel_tol >= 0.0 && rel_tol.is_finite()) {
            return Err(QmcError::domain(format!(
                "relative tolerance must be non-negative, got {rel_tol}"
            )));
        }
        Ok(ToleranceSpec { abs_tol, rel_tol })
    }

    pub fn absolute(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 0.0)
    }

    pub fn bound(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFlag {
    /// Coefficient magnitudes did not decay; the error bound may be unreliable.
    ConeSuspect,
}

impl ResultFlag {
    pub fn name(self) -> &'static str {
        match self {
            ResultFlag::ConeSuspect => "cone_suspect",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubatureResult {
    pub estimate: f64,
    /// Total number of integrand evaluations.
    pub n_total: u64,
    pub error_bound: f64,
    /// The tolerance the bound was compared with.
    pub tolerance: f64,
    pub elapsed_seconds: f64,
    pub iterations: u32,
    pub termination: Termination,
    pub criterion: &'static str,
    pub flags: Vec<ResultFlag>,
}

impl CubatureResult {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    /// One-line JSON record. With `with_time` false the timing is `null`,
    /// making the record a deterministic function of the inputs.
    pub fn to_json(&self, with_time: bool) -> String {
        let mut flags: Vec<&str> = vec![match self.termination {
            Termination::Converged => "converged",
            Termination::BudgetExhausted => "budget_exhausted",
        }];
        flags.extend(self.flags.iter().map(|f| f.name()));
        let flags: Vec<String> = flags.iter().map(|f| json_string(f)).collect();
        format!(
            "{{\"estimate\":{},\"n\":{},\"error_bound\":{},\"tolerance\":{},\"time_sec\":{},\"iterations\":{},\"criterion\":{},\"flags\":[{}]}}",
            json_number(self.estimate),
            self.n_total,
            json_number(self.error_bound),
            json_number(self.tolerance),
            if with_time { json_number(self.elapsed_seconds) } else { "null".into() },
            self.iterations,
            json_string(self.criterion),
            flags.join(",")
        )
    }
}

impl fmt::Display for CubatureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: estimate {} with error bound {:.3e} from n = {} ({:?}, {:.4} s)",
            self.criterion,
            self.estimate,
            self.error_bound,
            self.n_total,
            self.termination,
            self.elapsed_seconds
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriterionSpec {
    QmcReplications(ReplicationParams),
    NetCoeffDecay(DecayParams),
    LatticeCoeffDecay(DecayParams),
    McClt(CltParams),
}

impl CriterionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CriterionSpec::QmcReplications(_) => "qmc-rep",
            CriterionSpec::NetCoeffDecay(_) => "qmc-net-decay",
            CriterionSpec::LatticeCoeffDecay(_) => "qmc-lattice-decay",
            CriterionSpec::McClt(_) => "mc-clt",
        }
    }

    /// Criterion with default parameters, by CLI name.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "qmc-rep" => CriterionSpec::QmcReplications(ReplicationParams::default()),
            "qmc-net-decay" => CriterionSpec::NetCoeffDecay(DecayParams::default()),
            "qmc-lattice-decay" => CriterionSpec::LatticeCoeffDecay(DecayParams::default()),
            "mc-clt" => CriterionSpec::McClt(CltParams::default()),
            other => {
                return Err(QmcError::usage(format!(
                    "unknown criterion '{other}' (expected qmc-rep, qmc-net-decay, qmc-lattice-decay or mc-clt)"
                )))
            }
        })
    }

    /// The sampler family a criterion uses when none is given.
    pub fn default_family(&self) -> Family {
        match self {
            CriterionSpec::QmcReplications(_) | CriterionSpec::NetCoeffDecay(_) => {
                Family::DigitalNet
            }
            CriterionSpec::LatticeCoeffDecay(_) => Family::Lattice,
            CriterionSpec::McClt(_) => Family::Iid,
        }
    }
}

/// Check that the sampler can drive the criterion.
pub fn check_pairing(sampler: &SamplerSpec, criterion: &CriterionSpec) -> Result<()> {
    let mismatch = |need: &str| {
        Err(QmcError::usage(format!(
            "criterion '{}' requires {need}, got {} points",
            criterion.name(),
            sampler.family
        )))
    };
    match criterion {
        CriterionSpec::QmcReplications(_) => {
            if sampler.family == Family::Iid {
                return mismatch("a lattice, net or Halton sampler");
            }
            if sampler.randomization == RandomizationKind::None {
                return Err(QmcError::usage("replications need a randomized sampler"));
            }
            if !sampler.ordering.is_extensible() {
                return Err(QmcError::usage("replications need an extensible ordering"));
            }
        }
        CriterionSpec::NetCoeffDecay(_) => {
            if sampler.family != Family::DigitalNet {
                return mismatch("a digital net");
            }
            if sampler.randomization == RandomizationKind::None {
                return Err(QmcError::usage(
                    "the net criterion needs a digitally shifted net",
                ));
            }
        }
        CriterionSpec::LatticeCoeffDecay(_) => {
            if sampler.family != Family::Lattice {
                return mismatch("a lattice");
            }
            if sampler.ordering != Ordering::Natural {
                return Err(QmcError::usage(
                    "the lattice criterion needs natural (extensible) ordering",
                ));
            }
            if sampler.randomization == RandomizationKind::None {
                return Err(QmcError::usage(
                    "the lattice criterion needs a shifted lattice",
                ));
            }
        }
        CriterionSpec::McClt(_) => {
            if sampler.family != Family::Iid {
                return mismatch("IID points");
            }
        }
    }
    Ok(())
}

/// Approximate the integral of `p` with the given sampler and criterion.
pub fn integrate(
    p: &Problem,
    sampler: &SamplerSpec,
    criterion: &CriterionSpec,
    tol: &ToleranceSpec,
) -> Result<CubatureResult> {
    check_pairing(sampler, criterion)?;
    match criterion {
        CriterionSpec::QmcReplications(params) => cub_qmc_replications(p, sampler, tol, params),
        CriterionSpec::NetCoeffDecay(params) => cub_qmc_net_coeff_decay(p, sampler, tol, params),
        CriterionSpec::LatticeCoeffDecay(params) => {
            cub_qmc_lattice_coeff_decay(p, sampler, tol, params)
        }
        CriterionSpec::McClt(params) => cub_mc_clt(p, sampler, tol, params),
    }
}

/// Clamp a requested `m_max` to what the sampler can deliver.
fn effective_m_max(sampler: &SamplerSpec, m_min: u32, m_max: u32) -> Result<u32> {
    if m_min > m_max {
        return Err(QmcError::usage(format!(
            "m_min ({m_min}) exceeds m_max ({m_max})"
        )));
    }
    let cap = sampler.max_log2_points();
    if m_min > cap {
        return Err(QmcError::capacity(format!(
            "m_min = {m_min} needs 2^{m_min} points, the sampler provides 2^{cap}"
        )));
    }
    Ok(m_max.min(cap))
}
