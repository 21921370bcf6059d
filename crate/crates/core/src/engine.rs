//! Exogenous shocks and the fire-sale cascade.
//!
//! Rounds are synchronous: every bank that defaulted in the previous round is
//! liquidated at once, touched assets are repriced by the exponential market
//! impact of the liquidated fraction, and then every solvent bank is checked.
//! The cascade stops at the first round that produces no new default.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::balancesheet::{BankStatus, SystemState};
use crate::error::{param, Error, Result};
use crate::scalar::Scalar;

/// Price multiplier `e^(-alpha·x)` after liquidating a fraction `x` of an asset.
pub fn market_impact<T: Scalar>(x: T, alpha: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Domain {
            value: x.to_f64().unwrap_or(f64::NAN),
            domain: "[0, 1]",
        });
    }
    if !(alpha > T::zero()) {
        return Err(param(format!("market impact alpha {alpha} must be positive")));
    }
    Ok((-alpha * x).exp())
}

/// How shock targets are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Lowest bank degree first.
    MostSpecialised,
    /// Highest bank degree first.
    MostDiversified,
    /// Largest initial total assets first.
    Biggest,
    /// Smallest initial total assets first.
    Smallest,
    /// Most widely held asset first.
    MostConcentrated,
}

impl Criterion {
    pub fn targets_assets(&self) -> bool {
        matches!(self, Criterion::MostConcentrated)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShockKind {
    RandomBank,
    TargetedBank { criterion: Criterion },
    RandomAsset { devaluation: f64 },
    TargetedAsset { criterion: Criterion, devaluation: f64 },
}

/// Which node is perturbed at round 0, and how.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShockRepr", into = "ShockRepr")]
pub struct ShockSpec {
    pub kind: ShockKind,
    pub top_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ShockType {
    RandomBank,
    TargetedBank,
    RandomAsset,
    TargetedAsset,
}

/// Flat wire form, e.g. `{"kind": "targeted_asset", "criterion": "most_concentrated", "devaluation": 1.0}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShockRepr {
    kind: ShockType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    criterion: Option<Criterion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    devaluation: Option<f64>,
    #[serde(default = "default_top_fraction")]
    top_fraction: f64,
}

impl TryFrom<ShockRepr> for ShockSpec {
    type Error = String;

    fn try_from(r: ShockRepr) -> std::result::Result<Self, String> {
        let devaluation = r.devaluation.unwrap_or(DEFAULT_DEVALUATION);
        let kind = match (r.kind, r.criterion) {
            (ShockType::RandomBank, None) if r.devaluation.is_none() => ShockKind::RandomBank,
            (ShockType::TargetedBank, Some(criterion)) if r.devaluation.is_none() => {
                ShockKind::TargetedBank { criterion }
            }
            (ShockType::RandomAsset, None) => ShockKind::RandomAsset { devaluation },
            (ShockType::TargetedAsset, Some(criterion)) => ShockKind::TargetedAsset { criterion, devaluation },
            (kind, _) => return Err(format!("inconsistent fields for shock kind {kind:?}")),
        };
        let spec = ShockSpec { kind, top_fraction: r.top_fraction };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

impl From<ShockSpec> for ShockRepr {
    fn from(s: ShockSpec) -> Self {
        let (kind, criterion, devaluation) = match s.kind {
            ShockKind::RandomBank => (ShockType::RandomBank, None, None),
            ShockKind::TargetedBank { criterion } => (ShockType::TargetedBank, Some(criterion), None),
            ShockKind::RandomAsset { devaluation } => (ShockType::RandomAsset, None, Some(devaluation)),
            ShockKind::TargetedAsset { criterion, devaluation } => {
                (ShockType::TargetedAsset, Some(criterion), Some(devaluation))
            }
        };
        ShockRepr { kind, criterion, devaluation, top_fraction: s.top_fraction }
    }
}

pub(crate) fn default_top_fraction() -> f64 {
    0.05
}

/// Asset shocks wipe out the asset unless told otherwise.
pub const DEFAULT_DEVALUATION: f64 = 1.0;

impl ShockSpec {
    pub fn random_bank() -> Self {
        Self { kind: ShockKind::RandomBank, top_fraction: default_top_fraction() }
    }

    pub fn targeted_bank(criterion: Criterion) -> Self {
        Self { kind: ShockKind::TargetedBank { criterion }, top_fraction: default_top_fraction() }
    }

    pub fn random_asset(devaluation: f64) -> Self {
        Self { kind: ShockKind::RandomAsset { devaluation }, top_fraction: default_top_fraction() }
    }

    pub fn targeted_asset(criterion: Criterion, devaluation: f64) -> Self {
        Self {
            kind: ShockKind::TargetedAsset { criterion, devaluation },
            top_fraction: default_top_fraction(),
        }
    }

    pub fn with_top_fraction(mut self, top_fraction: f64) -> Self {
        self.top_fraction = top_fraction;
        self
    }

    pub fn hits_assets(&self) -> bool {
        matches!(self.kind, ShockKind::RandomAsset { .. } | ShockKind::TargetedAsset { .. })
    }

    pub fn devaluation(&self) -> Option<f64> {
        match self.kind {
            ShockKind::RandomAsset { devaluation } | ShockKind::TargetedAsset { devaluation, .. } => {
                Some(devaluation)
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.top_fraction > 0.0 && self.top_fraction <= 1.0) {
            return Err(param(format!("top fraction {} not in (0, 1]", self.top_fraction)));
        }
        if let Some(d) = self.devaluation() {
            if !(d > 0.0 && d <= 1.0) {
                return Err(param(format!("devaluation {d} not in (0, 1]")));
            }
        }
        match self.kind {
            ShockKind::TargetedBank { criterion } if criterion.targets_assets() => {
                Err(param(format!("{criterion:?} ranks assets, not banks")))
            }
            ShockKind::TargetedAsset { criterion, .. } if !criterion.targets_assets() => {
                Err(param(format!("{criterion:?} ranks banks, not assets")))
            }
            _ => Ok(()),
        }
    }
}

/// Size of a top-fraction set: `⌈fraction·n⌉`, never empty.
pub fn top_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1))
}

/// Indices `0..n` ordered by `key` with ties broken by index.
pub(crate) fn ranked<K: PartialOrd>(n: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockTarget {
    Bank(usize),
    Asset(usize),
}

/// Picks the bank or asset to perturb.
///
/// Random shocks draw uniformly over all banks, or over all assets with at least
/// one holder. Targeted shocks draw uniformly over the top `⌈top_fraction·n⌉`
/// nodes under the criterion.
pub fn select_target<T: Scalar, R: Rng + ?Sized>(
    state: &SystemState<T>,
    spec: &ShockSpec,
    rng: &mut R,
) -> Result<ShockTarget> {
    spec.validate()?;
    let n = state.n_banks();
    let degrees = state.network.bank_degrees();
    let pick = |candidates: &[usize], rng: &mut R| -> Result<usize> {
        candidates
            .choose(rng)
            .copied()
            .ok_or_else(|| Error::Selection(format!("{:?}", spec.kind)))
    };
    match spec.kind {
        ShockKind::RandomBank => {
            if n == 0 {
                return Err(Error::Selection("no banks".into()));
            }
            Ok(ShockTarget::Bank(rng.random_range(0..n)))
        }
        ShockKind::TargetedBank { criterion } => {
            let order = match criterion {
                Criterion::MostSpecialised => ranked(n, |i| degrees[i]),
                Criterion::MostDiversified => ranked(n, |i| std::cmp::Reverse(degrees[i])),
                Criterion::Biggest => ranked(n, |i| -state.banks[i].total_assets),
                Criterion::Smallest => ranked(n, |i| state.banks[i].total_assets),
                Criterion::MostConcentrated => unreachable!("validated"),
            };
            let top = &order[..top_count(spec.top_fraction, n).min(order.len())];
            pick(top, rng).map(ShockTarget::Bank)
        }
        ShockKind::RandomAsset { .. } | ShockKind::TargetedAsset { .. } => {
            let l = state.network.asset_degrees();
            let mut held: Vec<usize> = (0..l.len()).filter(|&j| l[j] > 0).collect();
            if let ShockKind::TargetedAsset { .. } = spec.kind {
                held.sort_by(|&a, &b| l[b].cmp(&l[a]).then(a.cmp(&b)));
                held.truncate(top_count(spec.top_fraction, l.len()));
            }
            pick(&held, rng).map(ShockTarget::Asset)
        }
    }
}

/// Applies the exogenous shock at round 0. A shocked bank defaults outright; a
/// shocked asset loses `devaluation` of its price, floored at a tiny positive value.
/// Devaluation is not a sale, so the liquidated fraction is untouched.
pub fn apply_shock<T: Scalar>(state: &mut SystemState<T>, spec: &ShockSpec, target: ShockTarget) -> Result<()> {
    match (target, spec.devaluation()) {
        (ShockTarget::Bank(i), None) => {
            let bank = state
                .banks
                .get_mut(i)
                .ok_or_else(|| param(format!("bank {i} out of range")))?;
            bank.status = BankStatus::Defaulted { round: 0 };
        }
        (ShockTarget::Asset(j), Some(dev)) => {
            let m = &mut state.market;
            if j >= m.prices.len() {
                return Err(param(format!("asset {j} out of range")));
            }
            let shocked = (m.prices[j] * (T::one() - T::of(dev))).max(T::price_floor());
            m.exogenous_factor[j] = m.exogenous_factor[j] * shocked / m.prices[j];
            m.prices[j] = shocked;
        }
        _ => return Err(param(format!("target {target:?} does not match shock {:?}", spec.kind))),
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefaultEvent {
    pub bank: usize,
    pub round: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeResult<T> {
    /// Defaults in round order, the seed bank (if any) first.
    pub defaults: Vec<DefaultEvent>,
    pub rounds: u32,
    pub contagion: bool,
    /// First round at which cumulative defaults exceed `phi·N`.
    pub threshold_cross_round: Option<u32>,
    pub final_prices: Vec<T>,
}

impl<T: Scalar> CascadeResult<T> {
    pub fn n_defaults(&self) -> usize {
        self.defaults.len()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Largest default count that does not yet constitute contagion: `⌊phi·N⌋`.
pub fn contagion_threshold(phi: f64, n_banks: usize) -> usize {
    (phi * n_banks as f64 + 1e-9).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeOptions {
    pub phi: f64,
    /// Defaults to `N + 1`.
    pub max_rounds: Option<u32>,
}

impl Default for CascadeOptions {
    fn default() -> Self {
        Self { phi: 0.05, max_rounds: None }
    }
}

/// Selects a target, shocks it, and runs the cascade to its fixed point.
pub fn run_cascade<T: Scalar, R: Rng + ?Sized>(
    state: &mut SystemState<T>,
    spec: &ShockSpec,
    rng: &mut R,
    options: CascadeOptions,
) -> Result<CascadeResult<T>> {
    let target = select_target(state, spec, rng)?;
    run_cascade_on(state, spec, target, options)
}

/// Cascade from a fixed shock target.
pub fn run_cascade_on<T: Scalar>(
    state: &mut SystemState<T>,
    spec: &ShockSpec,
    target: ShockTarget,
    options: CascadeOptions,
) -> Result<CascadeResult<T>> {
    if !(options.phi >= 0.0 && options.phi < 1.0) {
        return Err(param(format!("contagion threshold {} not in [0, 1)", options.phi)));
    }
    if state.round != 0 || state.banks.iter().any(|b| !b.status.is_solvent()) {
        return Err(param("cascade needs a freshly built state"));
    }
    spec.validate()?;
    apply_shock(state, spec, target)?;

    let n = state.n_banks();
    let threshold = contagion_threshold(options.phi, n);
    let max_rounds = options.max_rounds.unwrap_or(n as u32 + 1);
    let alpha = state.params.alpha;
    let tol = T::solvency_tolerance();

    let mut defaults = Vec::new();
    let mut newly: Vec<usize> = match target {
        ShockTarget::Bank(i) => vec![i],
        ShockTarget::Asset(_) => vec![],
    };
    defaults.extend(newly.iter().map(|&bank| DefaultEvent { bank, round: 0 }));
    let mut threshold_cross_round = (defaults.len() > threshold).then_some(0);

    let mut delta = vec![T::zero(); state.n_assets()];
    let mut touched: Vec<usize> = Vec::new();
    let mut round = 0u32;
    loop {
        if round >= max_rounds {
            return Err(Error::Diverged { rounds: round });
        }
        round += 1;
        state.round = round;

        // Liquidate last round's defaults.
        for &i in &newly {
            for (a, q) in state.banks[i].holdings.iter_mut() {
                let j = *a as usize;
                if *q > T::zero() {
                    if delta[j] == T::zero() {
                        touched.push(j);
                    }
                    delta[j] += *q / state.market.initial_shares[j];
                    *q = T::zero();
                }
            }
        }
        touched.sort_unstable();
        for &j in &touched {
            let m = &mut state.market;
            m.prices[j] *= (-alpha * delta[j]).exp();
            m.cum_liquidated[j] += delta[j];
            delta[j] = T::zero();
        }
        touched.clear();

        // Complete erosion of initial equity.
        newly.clear();
        for bank in state.banks.iter_mut().filter(|b| b.status.is_solvent()) {
            if bank.loss(&state.market.prices) >= bank.initial_equity - tol {
                bank.status = BankStatus::Defaulted { round };
                newly.push(bank.id);
            }
        }
        if newly.is_empty() {
            break;
        }
        defaults.extend(newly.iter().map(|&bank| DefaultEvent { bank, round }));
        if threshold_cross_round.is_none() && defaults.len() > threshold {
            threshold_cross_round = Some(round);
        }
    }

    Ok(CascadeResult {
        contagion: defaults.len() > threshold,
        defaults,
        rounds: round,
        threshold_cross_round,
        final_prices: state.market.prices.clone(),
    })
}
