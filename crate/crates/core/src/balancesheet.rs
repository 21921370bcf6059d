//! Bank balance sheets laid over a holding network.
//!
//! Each bank keeps a fraction of its initial total assets `A⁰` in cash and
//! spreads the rest evenly, at unit prices, over the assets it holds.
//! Initial equity is a fixed fraction of `A⁰`; liabilities make up the rest.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::netgen::BipartiteNetwork;
use crate::scalar::Scalar;

/// Capital injected per bank, keyed by bank index.
pub type Allocation<T> = BTreeMap<usize, T>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BankStatus {
    Solvent,
    Defaulted { round: u32 },
}

impl BankStatus {
    pub fn is_solvent(&self) -> bool {
        matches!(self, BankStatus::Solvent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bank<T> {
    pub id: usize,
    /// `(asset, shares)` pairs, ascending by asset. Zeroed once liquidated.
    pub holdings: Vec<(u32, T)>,
    pub cash: T,
    pub liabilities: T,
    /// `A⁰`, the total assets at construction (unit prices).
    pub total_assets: T,
    pub initial_equity: T,
    pub status: BankStatus,
}

impl<T: Scalar> Bank<T> {
    /// Initial leverage `A⁰ / E⁰`.
    pub fn leverage(&self) -> T {
        self.total_assets / self.initial_equity
    }

    /// Mark-to-market value of holdings plus cash.
    pub fn asset_value(&self, prices: &[T]) -> T {
        self.holdings
            .iter()
            .map(|&(a, q)| q * prices[a as usize])
            .sum::<T>()
            + self.cash
    }

    /// Loss on initial assets, `A⁰ - Σ Q p - C`.
    pub fn loss(&self, prices: &[T]) -> T {
        self.total_assets - self.asset_value(prices)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssetMarket<T> {
    pub initial_prices: Vec<T>,
    pub prices: Vec<T>,
    /// `S_j`, the shares held across the system at construction.
    pub initial_shares: Vec<T>,
    /// `X_j`, cumulative liquidated fraction of `S_j`.
    pub cum_liquidated: Vec<T>,
    /// Multiplier left by exogenous devaluations (1 when untouched).
    pub exogenous_factor: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceParams<T> {
    pub liquid_fraction: T,
    pub capital_fraction: T,
    pub alpha: T,
}

impl<T: Scalar> Default for BalanceParams<T> {
    fn default() -> Self {
        Self {
            liquid_fraction: T::of(0.20),
            capital_fraction: T::of(0.04),
            alpha: T::of(1.0536),
        }
    }
}

impl<T: Scalar> BalanceParams<T> {
    pub fn validate(&self) -> Result<()> {
        let (zero, one) = (T::zero(), T::one());
        if !(self.liquid_fraction >= zero && self.liquid_fraction < one) {
            return Err(param(format!("liquid fraction {} not in [0, 1)", self.liquid_fraction)));
        }
        if !(self.capital_fraction > zero && self.capital_fraction <= one) {
            return Err(param(format!("capital fraction {} not in (0, 1]", self.capital_fraction)));
        }
        if !(self.alpha > zero) || !self.alpha.is_finite() {
            return Err(param(format!("market impact alpha {} must be positive", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemState<T> {
    pub network: BipartiteNetwork,
    pub banks: Vec<Bank<T>>,
    pub market: AssetMarket<T>,
    pub round: u32,
    pub params: BalanceParams<T>,
}

/// Builds balance sheets for every bank of `net` at unit prices.
pub fn build_state<T: Scalar>(
    net: &BipartiteNetwork,
    sizes: &[T],
    params: BalanceParams<T>,
) -> Result<SystemState<T>> {
    params.validate()?;
    if sizes.len() != net.n_banks() {
        return Err(Error::Construction(format!(
            "{} sizes for {} banks",
            sizes.len(),
            net.n_banks()
        )));
    }
    let illiquid = T::one() - params.liquid_fraction;
    let mut initial_shares = vec![T::zero(); net.n_assets()];
    let mut banks = Vec::with_capacity(net.n_banks());
    for (id, &size) in sizes.iter().enumerate() {
        if !(size > T::zero()) || !size.is_finite() {
            return Err(Error::Construction(format!("bank {id} has size {size}")));
        }
        let assets = net.assets_of(id);
        if assets.is_empty() {
            return Err(Error::Construction(format!("bank {id} holds no assets")));
        }
        let q = illiquid * size / T::of(assets.len() as f64);
        let holdings: Vec<(u32, T)> = assets.iter().map(|&a| (a, q)).collect();
        for &(a, q) in &holdings {
            initial_shares[a as usize] += q;
        }
        let equity = params.capital_fraction * size;
        banks.push(Bank {
            id,
            holdings,
            cash: params.liquid_fraction * size,
            liabilities: size - equity,
            total_assets: size,
            initial_equity: equity,
            status: BankStatus::Solvent,
        });
    }
    let m = net.n_assets();
    Ok(SystemState {
        network: net.clone(),
        banks,
        market: AssetMarket {
            initial_prices: vec![T::one(); m],
            prices: vec![T::one(); m],
            initial_shares,
            cum_liquidated: vec![T::zero(); m],
            exogenous_factor: vec![T::one(); m],
        },
        round: 0,
        params,
    })
}

impl<T: Scalar> SystemState<T> {
    pub fn n_banks(&self) -> usize {
        self.banks.len()
    }

    pub fn n_assets(&self) -> usize {
        self.market.prices.len()
    }

    /// `Σ_j Q_ij p_j + C_i - D_i` at current prices.
    pub fn equity(&self, bank: usize) -> T {
        let b = &self.banks[bank];
        b.asset_value(&self.market.prices) - b.liabilities
    }

    pub fn total_initial_equity(&self) -> T {
        self.banks.iter().map(|b| b.initial_equity).sum()
    }

    /// Raises each recipient's equity by `ε_i` and cuts its liabilities by the
    /// same amount; holdings, cash and total assets are untouched. The whole
    /// allocation is checked before any bank is modified.
    pub fn apply_capital_injection(&mut self, allocation: &Allocation<T>) -> Result<()> {
        for (&bank, &eps) in allocation {
            let b = self
                .banks
                .get(bank)
                .ok_or_else(|| param(format!("allocation names unknown bank {bank}")))?;
            if !(eps >= T::zero()) {
                return Err(param(format!("negative injection {eps} for bank {bank}")));
            }
            if eps > b.liabilities {
                return Err(Error::Allocation {
                    bank,
                    epsilon: eps.to_f64().unwrap_or(f64::NAN),
                    liabilities: b.liabilities.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        for (&bank, &eps) in allocation {
            let b = &mut self.banks[bank];
            b.initial_equity += eps;
            b.liabilities -= eps;
        }
        Ok(())
    }

    /// One CSV row per bank: `id,degree,total_assets,cash,liabilities,equity,status`.
    pub fn write_balance_sheet_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["id", "degree", "total_assets", "cash", "liabilities", "equity", "status"])?;
        for b in &self.banks {
            let status = match b.status {
                BankStatus::Solvent => "solvent".to_string(),
                BankStatus::Defaulted { round } => format!("defaulted:{round}"),
            };
            w.write_record([
                b.id.to_string(),
                self.network.bank_degrees()[b.id].to_string(),
                b.total_assets.to_string(),
                b.cash.to_string(),
                b.liabilities.to_string(),
                self.equity(b.id).to_string(),
                status,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pareto sizes with density `∝ A^(-gamma)` on `[A_min, ∞)`, where
/// `A_min = mean·(gamma-2)/(gamma-1)` makes the distribution mean equal `mean`.
/// The sample is then rescaled so its own mean is exactly `mean`.
pub fn sample_sizes_powerlaw<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    gamma: f64,
    mean: f64,
    rng: &mut R,
) -> Result<Vec<T>> {
    if !(gamma > 2.0) || !gamma.is_finite() {
        return Err(param(format!("size exponent must exceed 2 for a finite mean, got {gamma}")));
    }
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(param(format!("mean size must be positive, got {mean}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let a_min = pareto_scale(gamma, mean);
    let dist = Pareto::new(a_min, gamma - 1.0).map_err(|e| param(e.to_string()))?;
    let raw: Vec<f64> = (0..n).map(|_| dist.sample(rng)).collect();
    let scale = mean * n as f64 / raw.iter().sum::<f64>();
    Ok(raw.into_iter().map(|a| T::of(a * scale)).collect())
}

/// Lower bound of the Pareto law with exponent `gamma` and the given mean.
pub fn pareto_scale(gamma: f64, mean: f64) -> f64 {
    mean * (gamma - 2.0) / (gamma - 1.0)
}
