//! Splitting an aggregate capital injection `χ` across banks.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use crate::balancesheet::Allocation;
use crate::balancesheet::SystemState;
use crate::engine::{ranked, top_count};
use crate::error::{param, Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Equal shares for the lowest-degree banks.
    TargetSpecialised,
    /// Equal shares for the largest banks.
    TargetBiggest,
    /// Equal shares for a uniformly random set of banks.
    RandomSet,
    /// `ε_i ∝ 1/k_i`.
    DiversificationWeighted,
    /// `ε_i ∝ A_i`.
    SizeWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySpec<T> {
    pub kind: PolicyKind,
    pub chi: T,
    /// Share of banks in the targeted and random sets.
    pub top_fraction: f64,
}

impl<T: Scalar> PolicySpec<T> {
    pub fn new(kind: PolicyKind, chi: T) -> Self {
        Self { kind, chi, top_fraction: 0.05 }
    }
}

/// Distributes `spec.chi` across the banks of `state`.
///
/// Set-based policies split `χ` equally over `⌈top_fraction·N⌉` banks; ties in
/// degree or size go to the lower index. The weighted policies use `1/k_i` and
/// `A⁰_i` as weights. Fails if any recipient would receive more than its liabilities.
pub fn allocate<T: Scalar, R: Rng + ?Sized>(
    state: &SystemState<T>,
    spec: &PolicySpec<T>,
    rng: &mut R,
) -> Result<Allocation<T>> {
    let allocation = uncapped(state, spec, rng)?;
    for (&bank, &eps) in &allocation {
        let liabilities = state.banks[bank].liabilities;
        if eps > liabilities {
            return Err(Error::Allocation {
                bank,
                epsilon: eps.to_f64().unwrap_or(f64::NAN),
                liabilities: liabilities.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(allocation)
}

/// As [`allocate`], but a recipient whose share exceeds its liabilities gets
/// exactly its liabilities and the excess is spread over the other recipients
/// in proportion to their shares. Identical to [`allocate`] whenever that succeeds.
/// If the recipients' liabilities together fall short of `χ`, every recipient
/// gets its full liabilities and the rest of the budget is left unspent.
pub fn allocate_capped<T: Scalar, R: Rng + ?Sized>(
    state: &SystemState<T>,
    spec: &PolicySpec<T>,
    rng: &mut R,
) -> Result<Allocation<T>> {
    let mut allocation = uncapped(state, spec, rng)?;
    let cap = |bank: usize| state.banks[bank].liabilities;
    if allocation.iter().all(|(&b, &e)| e <= cap(b)) {
        return Ok(allocation);
    }
    let weights = allocation.clone();
    let mut capped = std::collections::BTreeSet::new();
    loop {
        let over: Vec<usize> = allocation
            .iter()
            .filter(|(b, &e)| !capped.contains(*b) && e > cap(**b))
            .map(|(&b, _)| b)
            .collect();
        if over.is_empty() {
            return Ok(allocation);
        }
        capped.extend(over);
        let fixed: T = capped.iter().map(|&b| cap(b)).sum();
        let free_weight: T = weights.iter().filter(|(b, _)| !capped.contains(*b)).map(|(_, &w)| w).sum();
        let remaining = spec.chi - fixed;
        if !(free_weight > T::zero()) {
            return Ok(weights.keys().map(|&b| (b, cap(b))).collect());
        }
        for (&b, e) in allocation.iter_mut() {
            *e = if capped.contains(&b) { cap(b) } else { remaining * weights[&b] / free_weight };
        }
    }
}

fn uncapped<T: Scalar, R: Rng + ?Sized>(
    state: &SystemState<T>,
    spec: &PolicySpec<T>,
    rng: &mut R,
) -> Result<Allocation<T>> {
    if !(spec.chi > T::zero()) || !spec.chi.is_finite() {
        return Err(param(format!("capital budget {} must be positive", spec.chi)));
    }
    if !(spec.top_fraction > 0.0 && spec.top_fraction <= 1.0) {
        return Err(param(format!("top fraction {} not in (0, 1]", spec.top_fraction)));
    }
    let n = state.n_banks();
    if n == 0 {
        return Err(param("no banks to allocate to"));
    }
    let degrees = state.network.bank_degrees();
    let count = top_count(spec.top_fraction, n);
    let equal_split = |banks: &[usize]| -> Allocation<T> {
        let share = spec.chi / T::of(banks.len() as f64);
        banks.iter().map(|&i| (i, share)).collect()
    };
    let weighted = |weight: &dyn Fn(usize) -> T| -> Allocation<T> {
        let total: T = (0..n).map(weight).sum();
        (0..n).map(|i| (i, spec.chi * weight(i) / total)).collect()
    };

    let allocation = match spec.kind {
        PolicyKind::TargetSpecialised => equal_split(&ranked(n, |i| degrees[i])[..count]),
        PolicyKind::TargetBiggest => equal_split(&ranked(n, |i| -state.banks[i].total_assets)[..count]),
        PolicyKind::RandomSet => {
            let mut chosen = index::sample(rng, n, count).into_vec();
            chosen.sort_unstable();
            equal_split(&chosen)
        }
        PolicyKind::DiversificationWeighted => {
            if let Some(i) = (0..n).find(|&i| degrees[i] == 0) {
                return Err(param(format!("bank {i} has degree 0")));
            }
            weighted(&|i| T::one() / T::of(degrees[i] as f64))
        }
        PolicyKind::SizeWeighted => weighted(&|i| state.banks[i].total_assets),
    };
    Ok(allocation)
}

/// Writes `bank_id,epsilon` rows.
pub fn write_allocation_csv<T: Scalar, W: std::io::Write>(allocation: &Allocation<T>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["bank_id", "epsilon"])?;
    for (bank, eps) in allocation {
        w.write_record([bank.to_string(), eps.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
