//! Fire-sale contagion on bipartite bank-asset networks.
//!
//! Banks hold overlapping portfolios of illiquid assets. When a bank defaults
//! its holdings are sold, depressing prices through an exponential market
//! impact, which can push other holders of the same assets into default.
//!
//! Balance-sheet, cascade and policy code is generic over a [`Scalar`]; the
//! aliases below fix it to `f64`, which the Monte Carlo harness uses.

pub mod balancesheet;
pub mod engine;
mod error;
pub mod experiments;
pub mod netgen;
pub mod policy;
mod scalar;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use balancesheet::{build_state, sample_sizes_powerlaw, BalanceParams, BankStatus};
pub use engine::{
    market_impact, run_cascade, run_cascade_on, select_target, CascadeOptions, Criterion, ShockKind, ShockSpec,
    ShockTarget,
};
pub use netgen::{generate_network, BipartiteNetwork, DegreeSpec};
pub use policy::{allocate, allocate_capped, PolicyKind};

pub type SystemState = balancesheet::SystemState<f64>;
pub type Bank = balancesheet::Bank<f64>;
pub type AssetMarket = balancesheet::AssetMarket<f64>;
pub type CascadeResult = engine::CascadeResult<f64>;
pub type PolicySpec = policy::PolicySpec<f64>;
pub type Allocation = balancesheet::Allocation<f64>;
