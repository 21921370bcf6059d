//! Quick invariant checks, run by `firesale selftest`.

use firesale::experiments::{contagion_flags, trial_state, ExperimentConfig, SizeSpec};
use firesale::netgen::{degree_product_sum, rewire_assortativity, RewireOptions};
use firesale::seed::{trial_rng, Stream};
use firesale::{
    allocate, generate_network, market_impact, run_cascade, CascadeOptions, DegreeSpec, PolicyKind, PolicySpec,
    ShockSpec,
};

type Check = fn() -> Result<(), String>;

const CHECKS: [(&str, Check); 6] = [
    ("toy cascade", toy_cascade),
    ("market impact calibration", calibration),
    ("unleveraged banks never spread", unleveraged),
    ("policy budgets sum to chi", budgets),
    ("rewiring keeps degrees", rewiring),
    ("trials are reproducible", reproducible),
];

/// Prints one line per check; returns whether all passed.
pub fn run() -> bool {
    let mut ok = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => println!("ok      {name}"),
            Err(e) => {
                ok = false;
                println!("FAILED  {name}: {e}");
            }
        }
    }
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn toy_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::baseline(2, 1);
    c.n_assets = 1;
    c.bank_spec = DegreeSpec::Regular { mean: 1.0 };
    c.asset_spec = DegreeSpec::Regular { mean: 2.0 };
    c.size_spec = SizeSpec::Homogeneous { mean: 100.0 };
    c
}

fn toy_cascade() -> Result<(), String> {
    let c = toy_config();
    let mut state = trial_state(&c, 0).map_err(|e| e.to_string())?;
    let mut rng = trial_rng(c.master_seed, 0, Stream::Shock);
    let r = run_cascade(&mut state, &c.shock, &mut rng, CascadeOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.n_defaults() == 2 && r.contagion, || format!("{} defaults, contagion={}", r.n_defaults(), r.contagion))
}

fn calibration() -> Result<(), String> {
    let p = market_impact(0.1f64, 1.0536).map_err(|e| e.to_string())?;
    ensure((p - 0.9).abs() < 1e-4, || format!("price after 10% sold is {p}"))
}

fn unleveraged() -> Result<(), String> {
    for (i, shock) in [ShockSpec::random_bank(), ShockSpec::random_asset(1.0)].into_iter().enumerate() {
        let mut c = ExperimentConfig::baseline(50, 100).with_bank_power_law().with_shock(shock);
        c.capital_fraction = 1.0;
        for t in 0..c.runs {
            let mut state = trial_state(&c, t).map_err(|e| e.to_string())?;
            let mut rng = trial_rng(c.master_seed, t, Stream::Shock);
            let r = run_cascade(&mut state, &c.shock, &mut rng, CascadeOptions::default()).map_err(|e| e.to_string())?;
            let seeds = usize::from(i == 0);
            ensure(r.n_defaults() == seeds, || format!("trial {t}: {} defaults", r.n_defaults()))?;
        }
    }
    Ok(())
}

fn budgets() -> Result<(), String> {
    let c = ExperimentConfig::baseline(100, 1).with_bank_power_law();
    let state = trial_state(&c, 0).map_err(|e| e.to_string())?;
    let chi = 0.01 * state.total_initial_equity();
    for kind in [
        PolicyKind::TargetSpecialised,
        PolicyKind::TargetBiggest,
        PolicyKind::RandomSet,
        PolicyKind::DiversificationWeighted,
        PolicyKind::SizeWeighted,
    ] {
        let a = allocate(&state, &PolicySpec::new(kind, chi), &mut trial_rng(1, 0, Stream::Policy))
            .map_err(|e| e.to_string())?;
        let total: f64 = a.values().sum();
        ensure((total - chi).abs() <= 1e-9 * chi, || format!("{kind:?} spends {total} of {chi}"))?;
    }
    Ok(())
}

fn rewiring() -> Result<(), String> {
    let spec = DegreeSpec::PowerLaw { gamma: 2.5, mean: 4.0 };
    let mut rng = trial_rng(3, 0, Stream::Network);
    let net = generate_network(200, 200, spec, DegreeSpec::Poisson { mean: 4.0 }, &mut rng).map_err(|e| e.to_string())?;
    let base = degree_product_sum(&net);
    for j in [1.0, -1.0] {
        let r = rewire_assortativity(&net, j, RewireOptions::default(), &mut trial_rng(3, 0, Stream::Rewire));
        ensure(r.bank_degrees() == net.bank_degrees() && r.asset_degrees() == net.asset_degrees(), || {
            format!("degrees changed at J={j}")
        })?;
        let s = degree_product_sum(&r);
        ensure(if j > 0.0 { s >= base } else { s <= base }, || format!("J={j} moved the degree product sum the wrong way"))?;
    }
    Ok(())
}

fn reproducible() -> Result<(), String> {
    let c = ExperimentConfig::baseline(100, 40).with_bank_power_law();
    let a = contagion_flags(&c).map_err(|e| e.to_string())?;
    let b = contagion_flags(&c).map_err(|e| e.to_string())?;
    let mut longer = c.clone();
    longer.runs = 60;
    let l = contagion_flags(&longer).map_err(|e| e.to_string())?;
    ensure(a == b && l[..40] == a[..], || "trial outcomes changed between runs".into())
}
