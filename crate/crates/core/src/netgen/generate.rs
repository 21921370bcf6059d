use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::powerlaw::TunedPowerLaw;
use super::rewire::randomize;
use super::BipartiteNetwork;
use crate::error::{param, Error, Result};

/// Degree distribution requested for one side of the network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DegreeSpec {
    /// Every node has exactly `mean` links.
    Regular { mean: f64 },
    /// Homogeneous random links with expected degree `mean`.
    Poisson { mean: f64 },
    /// `P(k) ∝ k^(-gamma)` with expected degree `mean`.
    PowerLaw { gamma: f64, mean: f64 },
}

impl DegreeSpec {
    pub fn mean(&self) -> f64 {
        match *self {
            DegreeSpec::Regular { mean }
            | DegreeSpec::Poisson { mean }
            | DegreeSpec::PowerLaw { mean, .. } => mean,
        }
    }

    pub fn with_mean(self, mean: f64) -> Self {
        match self {
            DegreeSpec::Regular { .. } => DegreeSpec::Regular { mean },
            DegreeSpec::Poisson { .. } => DegreeSpec::Poisson { mean },
            DegreeSpec::PowerLaw { gamma, .. } => DegreeSpec::PowerLaw { gamma, mean },
        }
    }

    pub fn is_power_law(&self) -> bool {
        matches!(self, DegreeSpec::PowerLaw { .. })
    }

    /// Checks the spec for a side facing `opposite` nodes.
    pub fn validate(&self, opposite: usize) -> Result<()> {
        let mean = self.mean();
        if !(mean >= 1.0) || mean > opposite as f64 {
            return Err(param(format!(
                "mean degree {mean} outside [1, {opposite}]"
            )));
        }
        match *self {
            DegreeSpec::Regular { mean } if mean.fract() != 0.0 => {
                Err(param(format!("regular degree must be an integer, got {mean}")))
            }
            DegreeSpec::PowerLaw { gamma, .. } if !(gamma > 1.0) => {
                Err(param(format!("power-law exponent must exceed 1, got {gamma}")))
            }
            _ => Ok(()),
        }
    }
}

/// Relative tolerance on the realised mean bank degree.
pub const MEAN_TOLERANCE: f64 = 0.05;
const MAX_ATTEMPTS: usize = 2000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Banks,
    Assets,
}

/// Draws a bipartite network.
///
/// * power law on one side: that side draws its degrees and links each node to
///   distinct uniformly random partners, leaving the other side Poisson-like;
/// * regular on both sides: a regular bipartite graph shuffled by random swaps;
/// * regular against Poisson: the regular side drives as above;
/// * Poisson on both sides: each bank-asset pair is linked independently with
///   probability `mean / n_assets`.
///
/// Banks left without a link take one over from a random edge whose bank has
/// degree two or more, so asset degrees and the edge count are unchanged; only
/// when no such edge exists is a fresh random link added. Draws whose mean bank
/// degree misses the target by more than 5% are discarded and redrawn.
pub fn generate_network<R: Rng + ?Sized>(
    n_banks: usize,
    n_assets: usize,
    bank_spec: DegreeSpec,
    asset_spec: DegreeSpec,
    rng: &mut R,
) -> Result<BipartiteNetwork> {
    if n_banks == 0 || n_assets == 0 {
        return Err(param("network needs at least one bank and one asset"));
    }
    bank_spec.validate(n_assets)?;
    asset_spec.validate(n_banks)?;

    let plan = match (bank_spec, asset_spec) {
        (DegreeSpec::PowerLaw { .. }, DegreeSpec::PowerLaw { .. }) => {
            return Err(param("only one side may follow a power law"))
        }
        (DegreeSpec::Regular { mean: kb }, DegreeSpec::Regular { mean: ka }) => {
            return regular_both(n_banks, n_assets, kb as u32, ka as u32, rng)
        }
        (DegreeSpec::PowerLaw { .. } | DegreeSpec::Regular { .. }, _) => {
            Plan::Driven(Side::Banks, bank_spec)
        }
        (_, DegreeSpec::PowerLaw { .. } | DegreeSpec::Regular { .. }) => {
            Plan::Driven(Side::Assets, asset_spec)
        }
        (DegreeSpec::Poisson { mean }, DegreeSpec::Poisson { .. }) => Plan::Uniform(mean),
    };

    let target = match plan {
        Plan::Driven(Side::Assets, spec) => spec.mean() * n_assets as f64 / n_banks as f64,
        Plan::Driven(Side::Banks, spec) => spec.mean(),
        Plan::Uniform(mean) => mean,
    };
    let sampler = match plan {
        Plan::Driven(side, DegreeSpec::PowerLaw { gamma, mean }) => {
            let opposite = if side == Side::Banks { n_assets } else { n_banks };
            Some(TunedPowerLaw::new(gamma, mean, opposite as u32)?)
        }
        _ => None,
    };

    for _ in 0..MAX_ATTEMPTS {
        let mut edges = match plan {
            Plan::Driven(side, spec) => {
                let (n_drive, n_other) = match side {
                    Side::Banks => (n_banks, n_assets),
                    Side::Assets => (n_assets, n_banks),
                };
                let degrees: Vec<u32> = match &sampler {
                    Some(law) => (0..n_drive).map(|_| law.sample(rng)).collect(),
                    None => vec![spec.mean() as u32; n_drive],
                };
                attach(&degrees, n_other, side, rng)?
            }
            Plan::Uniform(mean) => erdos_renyi(n_banks, n_assets, mean / n_assets as f64, rng),
        };
        repair_isolated_banks(&mut edges, n_banks, n_assets, rng);
        let realised = edges.len() as f64 / n_banks as f64;
        if (realised - target).abs() <= MEAN_TOLERANCE * target {
            return BipartiteNetwork::from_edges(n_banks, n_assets, edges);
        }
    }
    Err(Error::Generation(format!(
        "no draw within {}% of mean bank degree {target} after {MAX_ATTEMPTS} attempts",
        MEAN_TOLERANCE * 100.0
    )))
}

#[derive(Clone, Copy)]
enum Plan {
    Driven(Side, DegreeSpec),
    Uniform(f64),
}

fn attach<R: Rng + ?Sized>(
    degrees: &[u32],
    n_other: usize,
    side: Side,
    rng: &mut R,
) -> Result<Vec<(u32, u32)>> {
    let mut edges = Vec::with_capacity(degrees.iter().map(|&d| d as usize).sum());
    for (node, &d) in degrees.iter().enumerate() {
        if d as usize > n_other {
            return Err(param(format!(
                "node {node} needs {d} distinct partners but only {n_other} exist"
            )));
        }
        for partner in index::sample(rng, n_other, d as usize) {
            edges.push(match side {
                Side::Banks => (node as u32, partner as u32),
                Side::Assets => (partner as u32, node as u32),
            });
        }
    }
    Ok(edges)
}

fn erdos_renyi<R: Rng + ?Sized>(n_banks: usize, n_assets: usize, p: f64, rng: &mut R) -> Vec<(u32, u32)> {
    let p = p.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for b in 0..n_banks as u32 {
        for a in 0..n_assets as u32 {
            if rng.random_bool(p) {
                edges.push((b, a));
            }
        }
    }
    edges
}

fn repair_isolated_banks<R: Rng + ?Sized>(
    edges: &mut Vec<(u32, u32)>,
    n_banks: usize,
    n_assets: usize,
    rng: &mut R,
) {
    let mut degree = vec![0u32; n_banks];
    for &(b, _) in edges.iter() {
        degree[b as usize] += 1;
    }
    let mut surplus: usize = degree.iter().map(|&d| d.saturating_sub(1) as usize).sum();
    for bank in 0..n_banks {
        if degree[bank] > 0 {
            continue;
        }
        if surplus == 0 {
            edges.push((bank as u32, rng.random_range(0..n_assets) as u32));
        } else {
            let e = loop {
                let e = rng.random_range(0..edges.len());
                if degree[edges[e].0 as usize] >= 2 {
                    break e;
                }
            };
            let donor = edges[e].0 as usize;
            degree[donor] -= 1;
            surplus -= 1;
            edges[e].0 = bank as u32;
        }
        degree[bank] = 1;
    }
}

fn regular_both<R: Rng + ?Sized>(
    n_banks: usize,
    n_assets: usize,
    kb: u32,
    ka: u32,
    rng: &mut R,
) -> Result<BipartiteNetwork> {
    if n_banks * kb as usize != n_assets * ka as usize {
        return Err(Error::Generation(format!(
            "{n_banks}×{kb} bank stubs cannot match {n_assets}×{ka} asset stubs"
        )));
    }
    // Stub s of bank s / kb goes to asset s mod M: consecutive stubs of one bank
    // hit distinct assets because kb <= M, and every asset receives exactly ka.
    let edges = (0..n_banks * kb as usize)
        .map(|s| ((s / kb as usize) as u32, (s % n_assets) as u32))
        .collect();
    let net = BipartiteNetwork::from_edges(n_banks, n_assets, edges)?;
    let swaps = 10 * net.n_edges();
    Ok(randomize(&net, swaps, rng))
}
