//! Sampler specifications: a point family plus ordering and randomization,
//! instantiated per independent stream.

use std::sync::Arc;

use crate::error::{QmcError, Result};
use crate::ld::{
    default_generating_matrices, default_lattice_vector, DigitalNet, Family, GeneratingMatrices,
    Halton, IidGenerator, Lattice, LatticeGenVector, Ordering, PointBlock, Randomization,
    RandomizationKind,
};

#[derive(Debug, Clone)]
pub struct SamplerSpec {
    pub family: Family,
    pub ordering: Ordering,
    pub randomization: RandomizationKind,
    pub seed: u64,
    lattice_vector: Option<Arc<LatticeGenVector>>,
    matrices: Option<Arc<GeneratingMatrices>>,
}

impl SamplerSpec {
    /// Family defaults: natural-order shifted lattice, standard-order net
    /// with LMS and digital shift, digit-shifted Halton, IID.
    pub fn new(family: Family, seed: u64) -> Self {
        let ordering = match family {
            Family::Lattice => Ordering::Natural,
            Family::DigitalNet => Ordering::Standard,
            Family::Halton | Family::Iid => Ordering::Sequential,
        };
        SamplerSpec {
            family,
            ordering,
            randomization: RandomizationKind::default_for(family),
            seed,
            lattice_vector: None,
            matrices: None,
        }
    }

    pub fn lattice(seed: u64) -> Self {
        Self::new(Family::Lattice, seed)
    }

    pub fn net(seed: u64) -> Self {
        Self::new(Family::DigitalNet, seed)
    }

    pub fn halton(seed: u64) -> Self {
        Self::new(Family::Halton, seed)
    }

    pub fn iid(seed: u64) -> Self {
        Self::new(Family::Iid, seed)
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Self {
        self.ordering = ordering;
        self
    }

    pub fn with_randomization(mut self, kind: RandomizationKind) -> Self {
        self.randomization = kind;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_lattice_vector(mut self, v: Arc<LatticeGenVector>) -> Self {
        self.lattice_vector = Some(v);
        self
    }

    pub fn with_matrices(mut self, m: Arc<GeneratingMatrices>) -> Self {
        self.matrices = Some(m);
        self
    }

    /// Largest `m` with `2^m` points available from this sampler.
    pub fn max_log2_points(&self) -> u32 {
        match self.family {
            Family::Lattice => self
                .lattice_vector
                .as_deref()
                .unwrap_or(default_lattice_vector())
                .m_max(),
            Family::DigitalNet => self
                .matrices
                .as_deref()
                .unwrap_or(default_generating_matrices())
                .m_max(),
            Family::Halton | Family::Iid => 63,
        }
    }

    /// Instantiate the stream with the given seed in dimension `d`.
    pub fn build(&self, d: usize, seed: u64) -> Result<Sampler> {
        let rand = Randomization::new(self.randomization, seed);
        Ok(match self.family {
            Family::Lattice => {
                let gen = self
                    .lattice_vector
                    .as_deref()
                    .unwrap_or(default_lattice_vector())
                    .clone();
                Sampler::Lattice(Lattice::new(gen, d, self.ordering, rand)?)
            }
            Family::DigitalNet => {
                let mats = self
                    .matrices
                    .as_deref()
                    .unwrap_or(default_generating_matrices());
                Sampler::Net(DigitalNet::new(mats, d, self.ordering, rand)?)
            }
            Family::Halton => {
                self.check_sequential()?;
                Sampler::Halton(Halton::new(d, rand)?)
            }
            Family::Iid => {
                self.check_sequential()?;
                if self.randomization != RandomizationKind::None {
                    return Err(QmcError::usage("IID points take no randomization option"));
                }
                if d == 0 {
                    return Err(QmcError::domain("dimension must be at least 1"));
                }
                Sampler::Iid(IidGenerator::new(d, seed))
            }
        })
    }

    fn check_sequential(&self) -> Result<()> {
        if self.ordering != Ordering::Sequential {
            return Err(QmcError::usage(format!(
                "{} points have no '{}' ordering",
                self.family,
                self.ordering.name()
            )));
        }
        Ok(())
    }
}

/// One instantiated point stream.
#[derive(Debug, Clone)]
pub enum Sampler {
    Lattice(Lattice),
    Net(DigitalNet),
    Halton(Halton),
    Iid(IidGenerator),
}

impl Sampler {
    /// Points with indices `[n_start, n_end)`. IID streams ignore the indices
    /// and return the next `n_end - n_start` fresh points.
    pub fn points(&mut self, n_start: u64, n_end: u64) -> Result<PointBlock> {
        match self {
            Sampler::Lattice(l) => l.points(n_start, n_end),
            Sampler::Net(n) => n.points(n_start, n_end),
            Sampler::Halton(h) => h.points(n_start, n_end),
            Sampler::Iid(g) => Ok(g.sample(n_end.saturating_sub(n_start) as usize)),
        }
    }
}
