//! Monte Carlo harnesses: contagion probabilities over parameter grids, policy
//! ratios, default-before-contagion profiles and the leverage phase diagram.
//!
//! Trial `r` of a config draws every random quantity from streams seeded by
//! `(master_seed, r)`, so estimates are order-independent, extending `runs`
//! keeps earlier trials intact, and configs that differ only in policy, shock
//! or rewiring coupling see the same networks and sizes trial by trial.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balancesheet::{build_state, sample_sizes_powerlaw, BalanceParams};
use crate::engine::{run_cascade, CascadeOptions, Criterion, ShockSpec};
use crate::error::{param, Error, Result};
use crate::netgen::{generate_network, rewire_assortativity, DegreeSpec, RewireOptions};
use crate::policy::{allocate_capped, PolicyKind, PolicySpec};
use crate::seed::{trial_rng, Stream};
use crate::stats::{mcnemar_one_sided, wilson_interval, Z_95};
use crate::{CascadeResult, SystemState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SizeSpec {
    Homogeneous { mean: f64 },
    PowerLaw { gamma: f64, mean: f64 },
}

impl SizeSpec {
    pub fn mean(&self) -> f64 {
        match *self {
            SizeSpec::Homogeneous { mean } | SizeSpec::PowerLaw { mean, .. } => mean,
        }
    }
}

/// Capital policy applied before the shock. `chi_fraction` is the budget as a
/// multiple of the system's total initial equity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    pub chi_fraction: f64,
    #[serde(default = "crate::engine::default_top_fraction")]
    pub top_fraction: f64,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind, chi_fraction: f64) -> Self {
        Self { kind, chi_fraction, top_fraction: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_banks: usize,
    pub n_assets: usize,
    pub bank_spec: DegreeSpec,
    pub asset_spec: DegreeSpec,
    pub size_spec: SizeSpec,
    pub shock: ShockSpec,
    #[serde(default)]
    pub policy: Option<PolicyConfig>,
    /// Sign selects assortative (`> 0`) or disassortative (`< 0`) rewiring.
    #[serde(default)]
    pub rewire_j: Option<f64>,
    /// Rewiring proposal budget per edge; the default runs to a stall.
    #[serde(default)]
    pub rewire_sweeps: Option<f64>,
    pub liquid_fraction: f64,
    pub capital_fraction: f64,
    pub alpha: f64,
    pub phi: f64,
    pub runs: u64,
    pub master_seed: u64,
}

/// Exponent shared by the degree and size power laws.
pub const GAMMA: f64 = 2.5;

impl ExperimentConfig {
    /// Homogeneous baseline at `n` banks and `n` assets.
    pub fn baseline(n: usize, runs: u64) -> Self {
        Self {
            n_banks: n,
            n_assets: n,
            bank_spec: DegreeSpec::Poisson { mean: 4.0 },
            asset_spec: DegreeSpec::Poisson { mean: 4.0 },
            size_spec: SizeSpec::Homogeneous { mean: 1.0 },
            shock: ShockSpec::random_bank(),
            policy: None,
            rewire_j: None,
            rewire_sweeps: None,
            liquid_fraction: 0.20,
            capital_fraction: 0.04,
            alpha: 1.0536,
            phi: 0.05,
            runs,
            master_seed: 42,
        }
    }

    /// 200 banks, 200 assets, 200 runs per estimate.
    pub fn desk() -> Self {
        Self::baseline(200, 200)
    }

    /// 1000 banks, 1000 assets, 1000 runs per estimate.
    pub fn paper() -> Self {
        Self::baseline(1000, 1000)
    }

    pub fn with_bank_power_law(mut self) -> Self {
        self.bank_spec = DegreeSpec::PowerLaw { gamma: GAMMA, mean: self.bank_spec.mean() };
        self
    }

    pub fn with_asset_power_law(mut self) -> Self {
        self.asset_spec = DegreeSpec::PowerLaw { gamma: GAMMA, mean: self.asset_spec.mean() };
        self
    }

    pub fn with_size_power_law(mut self) -> Self {
        self.size_spec = SizeSpec::PowerLaw { gamma: GAMMA, mean: self.size_spec.mean() };
        self
    }

    pub fn with_shock(mut self, shock: ShockSpec) -> Self {
        self.shock = shock;
        self
    }

    pub fn with_policy(mut self, policy: Option<PolicyConfig>) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_rewire(mut self, j: Option<f64>) -> Self {
        self.rewire_j = j;
        self
    }

    /// Sets the mean bank degree to `mu`; the asset side follows from `μ_b N = μ_a M`.
    pub fn with_mean_degree(mut self, mu: f64) -> Self {
        self.bank_spec = self.bank_spec.with_mean(mu);
        self.asset_spec = self.asset_spec.with_mean(mu * self.n_banks as f64 / self.n_assets as f64);
        self
    }

    pub fn with_leverage(mut self, lambda: f64) -> Self {
        self.capital_fraction = 1.0 / lambda;
        self
    }

    pub fn balance_params(&self) -> BalanceParams<f64> {
        BalanceParams {
            liquid_fraction: self.liquid_fraction,
            capital_fraction: self.capital_fraction,
            alpha: self.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(param("runs must be at least 1"));
        }
        if self.n_banks == 0 || self.n_assets == 0 {
            return Err(param("need at least one bank and one asset"));
        }
        self.bank_spec.validate(self.n_assets)?;
        self.asset_spec.validate(self.n_banks)?;
        self.shock.validate()?;
        self.balance_params().validate()?;
        if !(self.phi >= 0.0 && self.phi < 1.0) {
            return Err(param(format!("phi {} not in [0, 1)", self.phi)));
        }
        if !(self.size_spec.mean() > 0.0) {
            return Err(param("mean size must be positive"));
        }
        if let SizeSpec::PowerLaw { gamma, .. } = self.size_spec {
            if !(gamma > 2.0) {
                return Err(param(format!("size exponent {gamma} must exceed 2")));
            }
        }
        if let Some(p) = &self.policy {
            if !(p.chi_fraction > 0.0) || !(p.top_fraction > 0.0 && p.top_fraction <= 1.0) {
                return Err(param("policy needs chi_fraction > 0 and top_fraction in (0, 1]"));
            }
        }
        if let Some(j) = self.rewire_j {
            if !j.is_finite() {
                return Err(param("rewire coupling must be finite"));
            }
        }
        if let Some(s) = self.rewire_sweeps {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(param(format!("rewire_sweeps {s} must be a non-negative number")));
            }
        }
        Ok(())
    }

    /// One-line description of the modelling choices behind an output file.
    pub fn flags(&self) -> String {
        let devaluation = self.shock.devaluation().map_or("n/a".to_string(), |d| d.to_string());
        let chi = self.policy.map_or("none".to_string(), |p| format!("{}*total_equity", p.chi_fraction));
        format!(
            "seed_counting=inclusive devaluation={devaluation} chi={chi} before_contagion=strict_round"
        )
    }
}

/// Balance sheets for trial `index`, after rewiring and capital injection.
pub fn trial_state(config: &ExperimentConfig, index: u64) -> Result<SystemState> {
    let seed = config.master_seed;
    let mut net_rng = trial_rng(seed, index, Stream::Network);
    let mut net = generate_network(config.n_banks, config.n_assets, config.bank_spec, config.asset_spec, &mut net_rng)?;
    if let Some(j) = config.rewire_j {
        let mut rng = trial_rng(seed, index, Stream::Rewire);
        let options = RewireOptions {
            max_proposals: config.rewire_sweeps.map(|s| (s * net.n_edges() as f64).round() as usize),
            stall_window: None,
        };
        net = rewire_assortativity(&net, j, options, &mut rng);
    }
    let sizes = match config.size_spec {
        SizeSpec::Homogeneous { mean } => vec![mean; config.n_banks],
        SizeSpec::PowerLaw { gamma, mean } => {
            sample_sizes_powerlaw(config.n_banks, gamma, mean, &mut trial_rng(seed, index, Stream::Sizes))?
        }
    };
    let mut state = build_state(&net, &sizes, config.balance_params())?;
    if let Some(p) = &config.policy {
        let spec = PolicySpec {
            kind: p.kind,
            chi: p.chi_fraction * state.total_initial_equity(),
            top_fraction: p.top_fraction,
        };
        let allocation = allocate_capped(&state, &spec, &mut trial_rng(seed, index, Stream::Policy))?;
        state.apply_capital_injection(&allocation)?;
    }
    Ok(state)
}

/// Outcome of one trial plus the bank attributes the profiles bucket on.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub result: CascadeResult,
    pub degrees: Vec<u32>,
    pub sizes: Vec<f64>,
}

pub fn run_trial(config: &ExperimentConfig, index: u64) -> Result<TrialRecord> {
    let tag = |e: Error| Error::Trial { index, source: Box::new(e) };
    let mut state = trial_state(config, index).map_err(tag)?;
    let degrees = state.network.bank_degrees().to_vec();
    let sizes = state.banks.iter().map(|b| b.total_assets).collect();
    let options = CascadeOptions { phi: config.phi, max_rounds: None };
    let mut rng = trial_rng(config.master_seed, index, Stream::Shock);
    let result = run_cascade(&mut state, &config.shock, &mut rng, options).map_err(tag)?;
    Ok(TrialRecord { result, degrees, sizes })
}

/// Runs every trial of `config`, mapping each record through `f`. Results are in trial order.
pub fn map_trials<X: Send>(
    config: &ExperimentConfig,
    f: impl Fn(TrialRecord) -> X + Sync,
) -> Result<Vec<X>> {
    config.validate()?;
    (0..config.runs)
        .into_par_iter()
        .map(|r| run_trial(config, r).map(&f))
        .collect()
}

/// Contagion flag of each trial, in trial order.
pub fn contagion_flags(config: &ExperimentConfig) -> Result<Vec<bool>> {
    map_trials(config, |t| t.result.contagion)
}

/// Contagion flags for several shocks on the same trial states, one vector per
/// shock. Equal to calling [`contagion_flags`] once per shock, at the cost of
/// building each network once.
pub fn contagion_flags_multi(config: &ExperimentConfig, shocks: &[ShockSpec]) -> Result<Vec<Vec<bool>>> {
    config.validate()?;
    for s in shocks {
        s.validate()?;
    }
    let options = CascadeOptions { phi: config.phi, max_rounds: None };
    let per_trial: Vec<Vec<bool>> = (0..config.runs)
        .into_par_iter()
        .map(|index| {
            let tag = |e: Error| Error::Trial { index, source: Box::new(e) };
            let state = trial_state(config, index).map_err(tag)?;
            shocks
                .iter()
                .map(|shock| {
                    let mut rng = trial_rng(config.master_seed, index, Stream::Shock);
                    run_cascade(&mut state.clone(), shock, &mut rng, options).map(|r| r.contagion).map_err(tag)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok((0..shocks.len()).map(|s| per_trial.iter().map(|t| t[s]).collect()).collect())
}

/// [`sweep_mu`] for several shocks at once; `result[s]` is the curve for `shocks[s]`.
pub fn sweep_mu_multi(config: &ExperimentConfig, shocks: &[ShockSpec], mu_grid: &[f64]) -> Result<Vec<Vec<CurvePoint>>> {
    let grid = check_mu_grid(mu_grid)?;
    let mut curves = vec![Vec::with_capacity(grid.len()); shocks.len()];
    for &mu in &grid {
        let flags = contagion_flags_multi(&config.clone().with_mean_degree(mu), shocks)?;
        for (curve, f) in curves.iter_mut().zip(&flags) {
            curve.push(CurvePoint::from_flags(mu, f));
        }
    }
    Ok(curves)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub p_contagion: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub runs: u64,
}

impl CurvePoint {
    pub fn from_flags(x: f64, flags: &[bool]) -> Self {
        let hits = flags.iter().filter(|&&c| c).count() as u64;
        let runs = flags.len() as u64;
        let (ci_low, ci_high) = wilson_interval(hits, runs, Z_95);
        Self {
            x,
            p_contagion: if runs == 0 { 0.0 } else { hits as f64 / runs as f64 },
            ci_low,
            ci_high,
            runs,
        }
    }
}

/// Fraction of trials ending in contagion, with a Wilson 95% interval.
/// `x` is the configured mean bank degree.
pub fn contagion_probability(config: &ExperimentConfig) -> Result<CurvePoint> {
    Ok(CurvePoint::from_flags(config.bank_spec.mean(), &contagion_flags(config)?))
}

fn check_mu_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(param("empty mean-degree grid"));
    }
    if let Some(mu) = grid.iter().find(|&&mu| !(mu >= 1.0)) {
        return Err(param(format!("mean degree {mu} below 1")));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// One contagion estimate per mean degree, ascending.
pub fn sweep_mu(config: &ExperimentConfig, mu_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    check_mu_grid(mu_grid)?
        .into_iter()
        .map(|mu| contagion_probability(&config.clone().with_mean_degree(mu)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub x: f64,
    pub r: f64,
    pub p_a: f64,
    pub p_b: f64,
}

/// `R = p_A / p_B` at each grid point where both estimates are positive.
pub fn policy_ratio(
    config_a: &ExperimentConfig,
    config_b: &ExperimentConfig,
    mu_grid: &[f64],
) -> Result<Vec<RatioPoint>> {
    let a = sweep_mu(config_a, mu_grid)?;
    let b = sweep_mu(config_b, mu_grid)?;
    Ok(a.iter()
        .zip(&b)
        .filter(|(a, b)| a.p_contagion > 0.0 && b.p_contagion > 0.0)
        .map(|(a, b)| RatioPoint { x: a.x, r: a.p_contagion / b.p_contagion, p_a: a.p_contagion, p_b: b.p_contagion })
        .collect())
}

/// Paired comparison of two configs trial by trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedComparison {
    pub x: f64,
    pub p_a: f64,
    pub p_b: f64,
    /// Trials with contagion under A only.
    pub only_a: u64,
    /// Trials with contagion under B only.
    pub only_b: u64,
}

impl PairedComparison {
    /// One-sided exact McNemar p-value for "B has more contagion than A".
    pub fn p_value_b_worse(&self) -> f64 {
        mcnemar_one_sided(self.only_b, self.only_a)
    }
}

pub fn paired_comparison(config_a: &ExperimentConfig, config_b: &ExperimentConfig) -> Result<PairedComparison> {
    if config_a.runs != config_b.runs || config_a.master_seed != config_b.master_seed {
        return Err(param("paired comparison needs equal runs and master seed"));
    }
    let a = contagion_flags(config_a)?;
    let b = contagion_flags(config_b)?;
    let count = |f: &[bool]| f.iter().filter(|&&c| c).count() as f64 / f.len() as f64;
    Ok(PairedComparison {
        x: config_a.bank_spec.mean(),
        p_a: count(&a),
        p_b: count(&b),
        only_a: a.iter().zip(&b).filter(|(&x, &y)| x && !y).count() as u64,
        only_b: a.iter().zip(&b).filter(|(&x, &y)| !x && y).count() as u64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BucketBy {
    Degree,
    Size,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileBucket {
    /// Inclusive lower edge (the degree itself for degree buckets).
    pub lower: f64,
    /// Upper edge; inclusive for degree buckets and the last size bucket.
    pub upper: f64,
    /// `(bank, trial)` pairs where the bank defaulted strictly before the threshold round.
    pub events: u64,
    /// `(bank, trial)` pairs in the bucket over contagion trials.
    pub observations: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub bucket_by: BucketBy,
    pub buckets: Vec<ProfileBucket>,
    pub contagion_trials: u64,
    pub trials: u64,
    /// Set when no trial reached contagion; `buckets` is then empty.
    pub no_contagion: bool,
}

impl Profile {
    /// Accumulates "default before contagion" frequencies over contagion trials.
    /// Degree buckets are one per observed integer degree; size buckets split
    /// `[min, max]` of the observed sizes into `n_buckets` equal steps in log size.
    pub fn from_records(records: &[TrialRecord], bucket_by: BucketBy, n_buckets: usize) -> Result<Self> {
        if bucket_by == BucketBy::Size && n_buckets == 0 {
            return Err(param("size profile needs at least one bucket"));
        }
        let contagious: Vec<&TrialRecord> = records.iter().filter(|t| t.result.contagion).collect();
        let mut profile = Profile {
            bucket_by,
            buckets: Vec::new(),
            contagion_trials: contagious.len() as u64,
            trials: records.len() as u64,
            no_contagion: contagious.is_empty(),
        };
        if contagious.is_empty() {
            return Ok(profile);
        }

        let mut buckets: Vec<ProfileBucket> = match bucket_by {
            BucketBy::Degree => {
                let max = contagious.iter().flat_map(|t| t.degrees.iter().copied()).max().unwrap_or(0);
                (0..=max)
                    .map(|d| ProfileBucket { lower: d as f64, upper: d as f64, events: 0, observations: 0, probability: 0.0 })
                    .collect()
            }
            BucketBy::Size => {
                let sizes = contagious.iter().flat_map(|t| t.sizes.iter().copied());
                let (lo, hi) = sizes.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
                let (llo, lhi) = (lo.ln(), hi.ln());
                let step = (lhi - llo) / n_buckets as f64;
                (0..n_buckets)
                    .map(|b| ProfileBucket {
                        lower: if b == 0 { lo } else { (llo + step * b as f64).exp() },
                        upper: if b + 1 == n_buckets { hi } else { (llo + step * (b + 1) as f64).exp() },
                        events: 0,
                        observations: 0,
                        probability: 0.0,
                    })
                    .collect()
            }
        };
        let bucket_of = |t: &TrialRecord, bank: usize| -> usize {
            match bucket_by {
                BucketBy::Degree => t.degrees[bank] as usize,
                BucketBy::Size => {
                    let (lo, hi) = (buckets[0].lower.ln(), buckets[buckets.len() - 1].upper.ln());
                    if hi <= lo {
                        0
                    } else {
                        let f = (t.sizes[bank].ln() - lo) / (hi - lo);
                        ((f * n_buckets as f64) as usize).min(n_buckets - 1)
                    }
                }
            }
        };

        let mut events = vec![0u64; buckets.len()];
        let mut observations = vec![0u64; buckets.len()];
        for t in &contagious {
            let cross = t.result.threshold_cross_round.expect("contagion implies a crossing round");
            for bank in 0..t.degrees.len() {
                observations[bucket_of(t, bank)] += 1;
            }
            for ev in t.result.defaults.iter().filter(|e| e.round < cross) {
                events[bucket_of(t, ev.bank)] += 1;
            }
        }
        for (b, bucket) in buckets.iter_mut().enumerate() {
            bucket.events = events[b];
            bucket.observations = observations[b];
            bucket.probability = if observations[b] == 0 { 0.0 } else { events[b] as f64 / observations[b] as f64 };
        }
        if bucket_by == BucketBy::Degree {
            buckets.retain(|b| b.observations > 0);
        }
        profile.buckets = buckets;
        Ok(profile)
    }
}

/// Grid point whose contagion probability under `config` is nearest one half,
/// the lower one on ties. Profiles are evaluated there by default.
pub fn most_uncertain_mu(config: &ExperimentConfig, mu_grid: &[f64]) -> Result<f64> {
    let curve = sweep_mu(config, mu_grid)?;
    let best = curve
        .iter()
        .min_by(|a, b| (a.p_contagion - 0.5).abs().total_cmp(&(b.p_contagion - 0.5).abs()))
        .expect("grid checked non-empty");
    Ok(best.x)
}

/// Probability that a bank defaults strictly before the round in which
/// cumulative defaults first exceed `phi·N`, conditioned on contagion.
pub fn default_before_contagion_profile(
    config: &ExperimentConfig,
    bucket_by: BucketBy,
    n_buckets: usize,
) -> Result<Profile> {
    let records = map_trials(config, |t| t)?;
    Profile::from_records(&records, bucket_by, n_buckets)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    /// `cells[λ index][μ index]`.
    pub cells: Vec<Vec<CurvePoint>>,
}

impl PhaseDiagram {
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        self.cells.iter().map(|row| row.iter().map(|c| c.p_contagion).collect()).collect()
    }

    /// Smallest leverage with non-zero contagion probability in each μ column.
    pub fn critical_leverage(&self) -> Vec<Option<f64>> {
        (0..self.mus.len())
            .map(|m| {
                self.lambdas
                    .iter()
                    .zip(&self.cells)
                    .find(|(_, row)| row[m].p_contagion > 0.0)
                    .map(|(&l, _)| l)
            })
            .collect()
    }

    /// CSV matrix: leverage rows, mean-degree columns.
    pub fn write_csv<W: Write>(&self, header: &str, mut writer: W) -> Result<()> {
        writeln!(writer, "{header}")?;
        let mut w = csv::Writer::from_writer(writer);
        let mut first = vec!["lambda\\mu".to_string()];
        first.extend(self.mus.iter().map(|m| m.to_string()));
        w.write_record(&first)?;
        for (l, row) in self.lambdas.iter().zip(&self.cells) {
            let mut rec = vec![l.to_string()];
            rec.extend(row.iter().map(|c| c.p_contagion.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Contagion probability over a grid of leverage `λ = A⁰/E⁰` and mean degree.
pub fn leverage_phase_diagram(
    config: &ExperimentConfig,
    lambda_grid: &[f64],
    mu_grid: &[f64],
) -> Result<PhaseDiagram> {
    if lambda_grid.is_empty() {
        return Err(param("empty leverage grid"));
    }
    if let Some(l) = lambda_grid.iter().find(|&&l| !(l >= 1.0) || !l.is_finite()) {
        return Err(param(format!("leverage {l} below 1")));
    }
    let mut lambdas = lambda_grid.to_vec();
    lambdas.sort_by(f64::total_cmp);
    let mus = check_mu_grid(mu_grid)?;
    let cells = lambdas
        .iter()
        .map(|&l| sweep_mu(&config.clone().with_leverage(l), &mus))
        .collect::<Result<_>>()?;
    Ok(PhaseDiagram { lambdas, mus, cells })
}

/// `x,p,ci_low,ci_high,runs` rows after a `#` header line.
pub fn write_curve_csv<W: Write>(points: &[CurvePoint], header: &str, mut writer: W) -> Result<()> {
    writeln!(writer, "{header}")?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "p", "ci_low", "ci_high", "runs"])?;
    for p in points {
        w.write_record([p.x.to_string(), p.p_contagion.to_string(), p.ci_low.to_string(), p.ci_high.to_string(), p.runs.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `x,r,p_a,p_b` rows after a `#` header line.
pub fn write_ratio_csv<W: Write>(points: &[RatioPoint], header: &str, mut writer: W) -> Result<()> {
    writeln!(writer, "{header}")?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "r", "p_a", "p_b"])?;
    for p in points {
        w.write_record([p.x.to_string(), p.r.to_string(), p.p_a.to_string(), p.p_b.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `lower,upper,events,observations,probability` rows after a `#` header line.
pub fn write_profile_csv<W: Write>(profile: &Profile, header: &str, mut writer: W) -> Result<()> {
    writeln!(writer, "{header} bucket_by={:?} contagion_trials={} no_contagion={}", profile.bucket_by, profile.contagion_trials, profile.no_contagion)?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["lower", "upper", "events", "observations", "probability"])?;
    for b in &profile.buckets {
        w.write_record([b.lower.to_string(), b.upper.to_string(), b.events.to_string(), b.observations.to_string(), b.probability.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Targeted shock for `criterion`, totally devaluing the asset for asset criteria.
pub fn targeted(criterion: Criterion) -> ShockSpec {
    if criterion.targets_assets() {
        ShockSpec::targeted_asset(criterion, crate::engine::DEFAULT_DEVALUATION)
    } else {
        ShockSpec::targeted_bank(criterion)
    }
}
