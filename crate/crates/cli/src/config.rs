use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use firesale::experiments::{BucketBy, ExperimentConfig};
use firesale::{Criterion, PolicyKind, ShockSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Top-level keys of an [`ExperimentConfig`] to override on the preset.
pub type Patch = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Desk,
    Paper,
}

impl Preset {
    pub fn base(self) -> ExperimentConfig {
        match self {
            Preset::Desk => ExperimentConfig::desk(),
            Preset::Paper => ExperimentConfig::paper(),
        }
    }
}

/// One named experiment in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Entry {
    /// A single network or cascade, for `generate` and `cascade`.
    Single {
        #[serde(default)]
        config: Patch,
    },
    /// Contagion probability against mean bank degree, one curve per shock.
    Sweep {
        #[serde(default)]
        config: Patch,
        #[serde(default)]
        mu_grid: Option<Vec<f64>>,
        #[serde(default)]
        shocks: Option<BTreeMap<String, ShockSpec>>,
    },
    /// Ratio of contagion probabilities under two capital policies.
    Ratio {
        #[serde(default)]
        config: Patch,
        policy_a: PolicyKind,
        policy_b: PolicyKind,
        #[serde(default)]
        mu_grid: Option<Vec<f64>>,
        #[serde(default)]
        chi_levels: Option<Vec<f64>>,
    },
    /// Default-before-contagion profile. Without `mu`, the grid point with
    /// contagion probability nearest one half is used.
    Profile {
        #[serde(default)]
        config: Patch,
        bucket_by: BucketBy,
        #[serde(default)]
        mu: Option<f64>,
        #[serde(default)]
        mu_grid: Option<Vec<f64>>,
        #[serde(default)]
        n_buckets: Option<usize>,
    },
    /// Contagion probability over leverage and mean degree.
    Phase {
        #[serde(default)]
        config: Patch,
        #[serde(default)]
        lambda_grid: Option<Vec<f64>>,
        #[serde(default)]
        mu_grid: Option<Vec<f64>>,
    },
}

pub type ConfigFile = BTreeMap<String, Entry>;

pub fn default_mu_grid() -> Vec<f64> {
    (1..=20).map(f64::from).collect()
}

pub fn default_lambda_grid() -> Vec<f64> {
    vec![1.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 50.0]
}

pub fn default_phase_mu_grid() -> Vec<f64> {
    (1..=10).map(|m| f64::from(2 * m)).collect()
}

pub const DEFAULT_CHI_LEVELS: [f64; 3] = [0.25, 0.5, 1.0];
pub const DEFAULT_SIZE_BUCKETS: usize = 10;

impl Entry {
    pub fn kind(&self) -> &'static str {
        match self {
            Entry::Single { .. } => "single",
            Entry::Sweep { .. } => "sweep",
            Entry::Ratio { .. } => "ratio",
            Entry::Profile { .. } => "profile",
            Entry::Phase { .. } => "phase",
        }
    }

    pub fn patch(&self) -> &Patch {
        match self {
            Entry::Single { config }
            | Entry::Sweep { config, .. }
            | Entry::Ratio { config, .. }
            | Entry::Profile { config, .. }
            | Entry::Phase { config, .. } => config,
        }
    }

    fn patch_mut(&mut self) -> &mut Patch {
        match self {
            Entry::Single { config }
            | Entry::Sweep { config, .. }
            | Entry::Ratio { config, .. }
            | Entry::Profile { config, .. }
            | Entry::Phase { config, .. } => config,
        }
    }

    /// Fills every optional grid with its default.
    fn fill_defaults(&mut self) {
        match self {
            Entry::Single { .. } => {}
            Entry::Sweep { mu_grid, .. } | Entry::Ratio { mu_grid, .. } | Entry::Profile { mu_grid, .. } => {
                mu_grid.get_or_insert_with(default_mu_grid);
            }
            Entry::Phase { lambda_grid, mu_grid, .. } => {
                lambda_grid.get_or_insert_with(default_lambda_grid);
                mu_grid.get_or_insert_with(default_phase_mu_grid);
            }
        }
        match self {
            Entry::Ratio { chi_levels, .. } => {
                chi_levels.get_or_insert_with(|| DEFAULT_CHI_LEVELS.to_vec());
            }
            Entry::Profile { bucket_by: BucketBy::Size, n_buckets, .. } => {
                n_buckets.get_or_insert(DEFAULT_SIZE_BUCKETS);
            }
            _ => {}
        }
    }
}

/// An entry with its patch replaced by the complete experiment config.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub name: String,
    pub entry: Entry,
    pub config: ExperimentConfig,
}

impl Resolved {
    /// SHA-256 over the canonical JSON of the resolved entry.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.entry).expect("entries serialize");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<u64>,
}

pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn parse(text: &str) -> Result<ConfigFile, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn resolve(file: &ConfigFile, preset: Preset, overrides: Overrides) -> Result<Vec<Resolved>, CliError> {
    let base = serde_json::to_value(preset.base()).expect("configs serialize");
    file.iter()
        .map(|(name, entry)| {
            let mut merged = base.as_object().expect("config is an object").clone();
            for (k, v) in entry.patch() {
                merged.insert(k.clone(), v.clone());
            }
            if let Some(seed) = overrides.seed {
                merged.insert("master_seed".into(), json!(seed));
            }
            if let Some(runs) = overrides.runs {
                merged.insert("runs".into(), json!(runs));
            }
            let config: ExperimentConfig = serde_json::from_value(Value::Object(merged.clone()))
                .map_err(|e| CliError::Config(format!("experiment {name}: {e}")))?;
            config
                .validate()
                .map_err(|e| CliError::Config(format!("experiment {name}: {e}")))?;
            let mut entry = entry.clone();
            *entry.patch_mut() = serde_json::to_value(&config)
                .expect("configs serialize")
                .as_object()
                .expect("config is an object")
                .clone();
            entry.fill_defaults();
            if let Entry::Sweep { shocks, .. } = &mut entry {
                shocks.get_or_insert_with(|| BTreeMap::from([("default".to_string(), config.shock)]));
            }
            Ok(Resolved { name: name.clone(), entry, config })
        })
        .collect()
}

/// Re-serializes resolved entries as a config file.
pub fn echo(resolved: &[Resolved]) -> ConfigFile {
    resolved.iter().map(|r| (r.name.clone(), r.entry.clone())).collect()
}

fn patch(value: Value) -> Patch {
    value.as_object().cloned().unwrap_or_default()
}

fn shocks(list: &[(&str, ShockSpec)]) -> Option<BTreeMap<String, ShockSpec>> {
    Some(list.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

/// The experiment set reproduced when no config file is given.
pub fn default_file() -> ConfigFile {
    use firesale::experiments::targeted;

    let pl = json!({ "kind": "power_law", "gamma": 2.5, "mean": 4.0 });
    let bank_pl = json!({ "bank_spec": pl });
    let asset_pl = json!({ "asset_spec": pl });
    let size_pl = json!({ "size_spec": { "kind": "power_law", "gamma": 2.5, "mean": 1.0 } });
    let both_pl = json!({ "bank_spec": pl, "size_spec": { "kind": "power_law", "gamma": 2.5, "mean": 1.0 } });
    let rewired = |j: f64| json!({ "bank_spec": pl, "rewire_j": j });
    let bank_and_asset = shocks(&[("random_bank", ShockSpec::random_bank()), ("random_asset", ShockSpec::random_asset(1.0))]);

    let sweep = |config: Value, shocks| Entry::Sweep { config: patch(config), mu_grid: None, shocks };
    let ratio = |config: Value, policy_a, policy_b| Entry::Ratio {
        config: patch(config),
        policy_a,
        policy_b,
        mu_grid: None,
        chi_levels: None,
    };

    let mut f = ConfigFile::new();
    f.insert("baseline".into(), Entry::Single { config: Patch::new() });
    f.insert("homogeneous_degrees".into(), sweep(json!({}), bank_and_asset.clone()));
    f.insert("heterogeneous_bank_degrees".into(), sweep(bank_pl.clone(), bank_and_asset.clone()));
    f.insert(
        "targeted_bank_shocks".into(),
        sweep(
            bank_pl.clone(),
            shocks(&[
                ("random_bank", ShockSpec::random_bank()),
                ("most_specialised", targeted(Criterion::MostSpecialised)),
                ("most_diversified", targeted(Criterion::MostDiversified)),
            ]),
        ),
    );
    f.insert(
        "heterogeneous_asset_degrees".into(),
        sweep(
            asset_pl,
            shocks(&[
                ("random_bank", ShockSpec::random_bank()),
                ("random_asset", ShockSpec::random_asset(1.0)),
                ("most_concentrated", targeted(Criterion::MostConcentrated)),
            ]),
        ),
    );
    f.insert(
        "heterogeneous_sizes".into(),
        sweep(
            size_pl.clone(),
            shocks(&[
                ("random_bank", ShockSpec::random_bank()),
                ("biggest", targeted(Criterion::Biggest)),
                ("smallest", targeted(Criterion::Smallest)),
            ]),
        ),
    );
    f.insert("uncorrelated".into(), sweep(bank_pl.clone(), bank_and_asset.clone()));
    f.insert("assortative".into(), sweep(rewired(1.0), bank_and_asset.clone()));
    f.insert("disassortative".into(), sweep(rewired(-1.0), bank_and_asset));
    f.insert("specialised_vs_random_policy".into(), ratio(bank_pl.clone(), PolicyKind::TargetSpecialised, PolicyKind::RandomSet));
    f.insert("biggest_vs_random_policy".into(), ratio(size_pl.clone(), PolicyKind::TargetBiggest, PolicyKind::RandomSet));
    f.insert(
        "diversification_vs_size_policy".into(),
        ratio(both_pl, PolicyKind::DiversificationWeighted, PolicyKind::SizeWeighted),
    );
    f.insert(
        "degree_profile".into(),
        Entry::Profile { config: patch(bank_pl.clone()), bucket_by: BucketBy::Degree, mu: None, mu_grid: None, n_buckets: None },
    );
    f.insert(
        "size_profile".into(),
        Entry::Profile { config: patch(size_pl), bucket_by: BucketBy::Size, mu: None, mu_grid: None, n_buckets: None },
    );
    f.insert("leverage_phase".into(), Entry::Phase { config: patch(bank_pl), lambda_grid: None, mu_grid: None });
    f
}
