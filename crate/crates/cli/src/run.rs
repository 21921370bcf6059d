use firesale::experiments::{
    default_before_contagion_profile, leverage_phase_diagram, most_uncertain_mu, policy_ratio, sweep_mu_multi,
    trial_state, write_curve_csv, write_profile_csv, write_ratio_csv, CurvePoint, PolicyConfig, RatioPoint,
};
use firesale::{run_cascade, CascadeOptions};
use firesale::seed::{trial_rng, Stream};
use serde_json::json;

use crate::config::{Entry, Resolved};
use crate::output::OutDir;
use crate::CliError;

fn header(r: &Resolved, flags: &str, extra: &str) -> String {
    let mut line = format!(
        "# experiment={} config_hash={} master_seed={} {flags}",
        r.name,
        r.hash(),
        r.config.master_seed
    );
    if !extra.is_empty() {
        line.push(' ');
        line.push_str(extra);
    }
    line
}

fn csv_err(e: firesale::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Edge list of one trial's network, after rewiring.
pub fn generate(r: &Resolved, trial: u64, out: &OutDir) -> Result<String, CliError> {
    let state = trial_state(&r.config, trial)?;
    let text = state.network.to_edge_list();
    let head = header(r, &r.config.flags(), &format!("trial={trial}"));
    out.write_result(&format!("{}_edges.txt", r.name), |w| {
        writeln!(w, "{head}")?;
        w.write_all(text.as_bytes()).map_err(Into::into)
    })?;
    Ok(text)
}

/// A single cascade as JSON.
pub fn cascade(r: &Resolved, trial: u64, out: &OutDir) -> Result<String, CliError> {
    let c = &r.config;
    let mut state = trial_state(c, trial)?;
    let mut rng = trial_rng(c.master_seed, trial, Stream::Shock);
    let result = run_cascade(&mut state, &c.shock, &mut rng, CascadeOptions { phi: c.phi, max_rounds: None })?;
    let doc = json!({
        "experiment": r.name,
        "config_hash": r.hash(),
        "master_seed": c.master_seed,
        "trial": trial,
        "flags": c.flags(),
        "n_defaults": result.n_defaults(),
        "result": result,
    });
    out.write_json(&format!("{}_cascade.json", r.name), &doc)?;
    Ok(serde_json::to_string(&doc).expect("json"))
}

pub fn sweep(r: &Resolved, out: &OutDir) -> Result<(), CliError> {
    let Entry::Sweep { mu_grid: Some(grid), shocks: Some(shocks), .. } = &r.entry else {
        unreachable!("resolved sweep entries carry grids and shocks")
    };
    let specs: Vec<_> = shocks.values().copied().collect();
    let curves = sweep_mu_multi(&r.config, &specs, grid)?;
    let mut doc = serde_json::Map::new();
    for ((label, shock), curve) in shocks.iter().zip(&curves) {
        let flags = r.config.clone().with_shock(*shock).flags();
        let head = header(r, &flags, &format!("shock={label}"));
        out.write_result(&format!("{}_{label}.csv", r.name), |w| write_curve_csv(curve, &head, w).map_err(csv_err))?;
        doc.insert(label.clone(), json!(curve));
    }
    out.write_json(
        &format!("{}.json", r.name),
        &json!({ "experiment": r.name, "config_hash": r.hash(), "master_seed": r.config.master_seed, "curves": doc }),
    )?;
    for (label, curve) in shocks.keys().zip(&curves) {
        println!("{} {label}: upper edge {}", r.name, upper_edge(curve).map_or("none".into(), |x| x.to_string()));
    }
    Ok(())
}

fn upper_edge(curve: &[CurvePoint]) -> Option<f64> {
    curve.iter().rev().find(|p| p.p_contagion > 0.0).map(|p| p.x)
}

pub fn policy(r: &Resolved, out: &OutDir) -> Result<(), CliError> {
    let Entry::Ratio { policy_a, policy_b, mu_grid: Some(grid), chi_levels: Some(chis), .. } = &r.entry else {
        unreachable!("resolved ratio entries carry grids")
    };
    let mut levels = Vec::new();
    for &chi in chis {
        let a = r.config.clone().with_policy(Some(PolicyConfig::new(*policy_a, chi)));
        let b = r.config.clone().with_policy(Some(PolicyConfig::new(*policy_b, chi)));
        let points: Vec<RatioPoint> = policy_ratio(&a, &b, grid)?;
        let head = header(r, &a.flags(), &format!("policy_a={policy_a:?} policy_b={policy_b:?}"));
        out.write_result(&format!("{}_chi{chi}.csv", r.name), |w| write_ratio_csv(&points, &head, w).map_err(csv_err))?;
        let median = firesale::stats::median(&points.iter().map(|p| p.r).collect::<Vec<_>>());
        println!("{} chi={chi}: median ratio {}", r.name, median.map_or("n/a".into(), |m| format!("{m:.3}")));
        levels.push(json!({ "chi_fraction": chi, "points": points }));
    }
    out.write_json(
        &format!("{}.json", r.name),
        &json!({ "experiment": r.name, "config_hash": r.hash(), "master_seed": r.config.master_seed, "levels": levels }),
    )?;
    Ok(())
}

pub fn profile(r: &Resolved, out: &OutDir) -> Result<(), CliError> {
    let Entry::Profile { bucket_by, mu, mu_grid: Some(grid), n_buckets, .. } = &r.entry else {
        unreachable!("resolved profile entries carry a grid")
    };
    let mu = match mu {
        Some(mu) => *mu,
        None => most_uncertain_mu(&r.config, grid)?,
    };
    let config = r.config.clone().with_mean_degree(mu);
    let profile = default_before_contagion_profile(&config, *bucket_by, n_buckets.unwrap_or(0))?;
    let head = header(r, &config.flags(), &format!("mu={mu}"));
    out.write_result(&format!("{}.csv", r.name), |w| write_profile_csv(&profile, &head, w).map_err(csv_err))?;
    out.write_json(
        &format!("{}.json", r.name),
        &json!({ "experiment": r.name, "config_hash": r.hash(), "master_seed": r.config.master_seed, "mu": mu, "profile": profile }),
    )?;
    println!("{} at mu={mu}: {} of {} trials contagious", r.name, profile.contagion_trials, profile.trials);
    Ok(())
}

pub fn phase(r: &Resolved, out: &OutDir) -> Result<(), CliError> {
    let Entry::Phase { lambda_grid: Some(lambdas), mu_grid: Some(mus), .. } = &r.entry else {
        unreachable!("resolved phase entries carry grids")
    };
    let diagram = leverage_phase_diagram(&r.config, lambdas, mus)?;
    let head = header(r, &r.config.flags(), "");
    out.write_result(&format!("{}.csv", r.name), |w| diagram.write_csv(&head, w).map_err(csv_err))?;
    let critical = diagram.critical_leverage();
    out.write_json(
        &format!("{}.json", r.name),
        &json!({
            "experiment": r.name,
            "config_hash": r.hash(),
            "master_seed": r.config.master_seed,
            "diagram": diagram,
            "critical_leverage": critical,
        }),
    )?;
    for (mu, l) in diagram.mus.iter().zip(&critical) {
        println!("{} mu={mu}: critical leverage {}", r.name, l.map_or("none".into(), |l| l.to_string()));
    }
    Ok(())
}
