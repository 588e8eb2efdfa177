//! Scenario runners behind the `sim` presets.
//!
//! Every scenario resolves its parameters from a [`Config`], runs the
//! physics, and returns the same bundle: a sample table destined for
//! `trajectory.csv`, a figures-of-merit object for `report.json`, and the
//! fully resolved parameters plus the tolerances in force, recorded in
//! `manifest.json` so a run can be reproduced bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use collective_decay::analytic::{
    absd_closed_form, eta4_squeezed_final, two_atom_squeezed_steady_with_phase,
};
use collective_decay::cavity::{mode_vacuum, reduction_check};
use collective_decay::dfs::{dark_subspace, dicke_degeneracy, dicke_numbers, zsa_check};
use collective_decay::dynamics::{
    absd_series, evolve_grid, fidelity_series, population_series, purity_series, steady_state,
    IntegratorConfig, SteadyStateCriteria,
};
use collective_decay::hilbert::{
    fidelity, frobenius_distance, frobenius_norm, ground_state, make_eta, make_w, parse_complex,
    DensityMatrix, StateVector,
};
use collective_decay::liouvillian::{
    dissipator_collective, vacuum_collective, Generator, ModelParams, ThermostatParams,
};
use collective_decay::memory::{memory_cycle, MemoryConfig};
use collective_decay::sampling::{random_complex_vector, random_q, random_zsa_q, rng_from_seed};
use collective_decay::{C64, Error, Result};
use serde_json::{json, Value};

use crate::config::Config;

/// Preset names with one-line physics annotations, in listing order.
pub const PRESETS: &[(&str, &str)] = &[
    (
        "eta-vacuum",
        "zero-sum single-excitation state held invariant by collective vacuum decay",
    ),
    (
        "w-vacuum",
        "uniform W state superradiating into the ground state",
    ),
    (
        "eta-absd-compare",
        "extracted decay coefficients A, B, S, D against their closed forms",
    ),
    (
        "two-atom-squeezed",
        "two atoms driven into the pure steady state of the maximally squeezed channel",
    ),
    (
        "eta3-squeezed",
        "three-site zero-sum state decohering into a mixed state under the squeezed channel",
    ),
    (
        "eta4-squeezed",
        "four-site zero-sum state purified into the target obtained by replacing |00⟩ → s",
    ),
    (
        "memory-cycle",
        "write–store–read swap cycle swept over the storage time",
    ),
    (
        "full-cavity-reduction",
        "dispersive cavity model traced down onto the collective channel",
    ),
    (
        "dfs-scan",
        "dark-subspace scan: the single-excitation sector has dimension n−1",
    ),
];

/// Everything a run produces, ready for the artifact writers.
pub struct Artifacts {
    pub scenario: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub report: Value,
    /// Resolved parameters (sampled amplitudes spelled out as literals), so
    /// replaying them through `sim run` reproduces the run exactly.
    pub parameters: BTreeMap<String, String>,
    pub tolerances: Value,
}

pub fn run_scenario(cfg: &Config) -> Result<Artifacts> {
    match cfg.scenario.as_str() {
        "eta-vacuum" => eta_vacuum(cfg),
        "w-vacuum" => w_vacuum(cfg),
        "eta-absd-compare" => eta_absd_compare(cfg),
        "two-atom-squeezed" => two_atom_squeezed(cfg),
        "eta3-squeezed" => eta3_squeezed(cfg),
        "eta4-squeezed" => eta4_squeezed(cfg),
        "memory-cycle" => memory_cycle_sweep(cfg),
        "full-cavity-reduction" => full_cavity_reduction(cfg),
        "dfs-scan" => dfs_scan(cfg),
        other => Err(Error::Parse(format!(
            "unknown scenario `{other}`; `sim list` shows the available presets"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Shared parameter resolution
// ---------------------------------------------------------------------------

/// Evenly spaced sample times covering [0, t_final].
fn time_grid(cfg: &Config, t_default: f64, samples_default: usize) -> Result<Vec<f64>> {
    let t_final = cfg.f64_or("t_final", t_default)?;
    let samples = cfg.usize_or("samples", samples_default)?;
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::Parse(format!(
            "key `t_final`: must be a positive time, got {t_final}"
        )));
    }
    if samples < 2 {
        return Err(Error::Parse(format!(
            "key `samples`: need at least 2 sample times, got {samples}"
        )));
    }
    Ok((0..samples)
        .map(|i| t_final * i as f64 / (samples - 1) as f64)
        .collect())
}

/// Resolve the atom count and single-excitation amplitudes. `q` accepts
/// `zsa-random` (seeded zero-sum sample), `random` (seeded generic sample,
/// resampled away from the zero-sum manifold), or an explicit bracketed
/// list, which is normalized and also fixes `n`.
fn resolve_n_q(
    cfg: &Config,
    n_default: usize,
    q_default: &str,
    seed: u64,
) -> Result<(usize, Vec<C64>)> {
    let spec = cfg.str_or("q", q_default);
    if spec.starts_with('[') {
        let raw = if cfg.raw("q").is_some() {
            cfg.complex_list("q")?.expect("q key present")
        } else {
            collective_decay::hilbert::parse_complex_list(&spec)?
        };
        let n = match cfg.raw("n") {
            None => raw.len(),
            Some(_) => {
                let n = cfg.usize_or("n", 0)?;
                if n != raw.len() {
                    return Err(Error::Parse(format!(
                        "q lists {} amplitudes but n = {n}",
                        raw.len()
                    )));
                }
                n
            }
        };
        let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Normalization("q must not be the zero vector".into()));
        }
        return Ok((n, raw.into_iter().map(|z| z / norm).collect()));
    }
    let n = cfg.usize_or("n", n_default)?;
    match spec.as_str() {
        "zsa-random" => {
            if n < 2 {
                return Err(Error::Size(format!(
                    "a zero-sum pattern needs at least two sites, got n = {n}"
                )));
            }
            Ok((n, random_zsa_q(&mut rng_from_seed(seed), n)))
        }
        "random" => {
            if n == 0 {
                return Err(Error::Size("need at least one site, got n = 0".into()));
            }
            let mut rng = rng_from_seed(seed);
            let mut q = random_q(&mut rng, n);
            while zsa_check(&q) {
                q = random_q(&mut rng, n);
            }
            Ok((n, q))
        }
        other => Err(Error::Parse(format!(
            "key `q`: expected `zsa-random`, `random`, or a bracketed list, got `{other}`"
        ))),
    }
}

/// Thermostat from the `N` / `M` keys. `M` defaults to the saturation
/// value √(N(N+1)) with zero phase, so `N=0` is the vacuum and any `N>0`
/// is the maximally squeezed bath unless `M` is overridden.
fn resolve_bath(cfg: &Config, n_default: f64) -> Result<ThermostatParams> {
    let n_occ = cfg.f64_or("N", n_default)?;
    let m = match cfg.raw("M") {
        Some(text) => parse_complex(text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("key `M`: {msg}")),
            other => other,
        })?,
        None => C64::new((n_occ * (n_occ + 1.0)).sqrt(), 0.0),
    };
    ThermostatParams::new(n_occ, m)
}

/// Saturated-correlator thermostat with an explicit phase on M.
fn saturated_bath(n_occ: f64, phase: f64) -> Result<ThermostatParams> {
    ThermostatParams::new(n_occ, C64::from_polar((n_occ * (n_occ + 1.0)).sqrt(), phase))
}

// ---------------------------------------------------------------------------
// Report and manifest helpers
// ---------------------------------------------------------------------------

/// Canonical literal for a complex list; round-trips through the parser.
fn complex_literal(q: &[C64]) -> String {
    let mut s = String::from("[");
    for (k, z) in q.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{:e}{:+e}j", z.re, z.im);
    }
    s.push(']');
    s
}

fn complex_json(q: &[C64]) -> Value {
    Value::Array(q.iter().map(|z| json!([z.re, z.im])).collect())
}

fn params(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn integrator_tolerances() -> BTreeMap<String, Value> {
    let cfg = IntegratorConfig::default();
    let mut map = BTreeMap::new();
    map.insert("integrator_rel_tol".to_string(), json!(cfg.rel_tol));
    map.insert("integrator_abs_tol".to_string(), json!(cfg.abs_tol));
    map
}

fn tolerances(extra: &[(&str, Value)]) -> Value {
    let mut map = integrator_tolerances();
    for (k, v) in extra {
        map.insert(k.to_string(), v.clone());
    }
    json!(map)
}

fn max_deviation_from(values: &[f64], target: f64) -> f64 {
    values
        .iter()
        .map(|v| (v - target).abs())
        .fold(0.0, f64::max)
}

fn last(values: &[f64]) -> f64 {
    *values.last().expect("non-empty series")
}

/// Interleave the time column with the value columns, row-major.
fn table(times: &[f64], columns: &[&[f64]]) -> Vec<Vec<f64>> {
    times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = Vec::with_capacity(columns.len() + 1);
            row.push(t);
            row.extend(columns.iter().map(|c| c[i]));
            row
        })
        .collect()
}

fn column_names(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn residual_of(gen: &Generator, rho: &DensityMatrix) -> Result<f64> {
    Ok(frobenius_norm(&gen.apply(&rho.entries)?))
}

fn default_steady_tol(gen: &Generator) -> f64 {
    1e-10 * gen.space().dim() as f64
}

// ---------------------------------------------------------------------------
// Scenario: eta-vacuum
// ---------------------------------------------------------------------------

/// A zero-sum η state is dark under collective vacuum decay: the fidelity
/// column should stay pinned at 1 for zero-sum amplitudes and decay
/// otherwise.
fn eta_vacuum(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["n", "q", "seed", "kappa", "t_final", "samples", "out"])?;
    let seed = cfg.u64_or("seed", 1)?;
    let (n, q) = resolve_n_q(cfg, 4, "zsa-random", seed)?;
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let times = time_grid(cfg, 10.0, 51)?;

    let eta = make_eta(&q)?;
    let gen = vacuum_collective(n, kappa)?;
    let traj = evolve_grid(&gen, &eta.to_density()?, &times, &IntegratorConfig::default())?;
    let fid = fidelity_series(&traj, &eta)?;
    let pur = purity_series(&traj);
    let ground = population_series(&traj, 0)?;

    let report = json!({
        "n": n,
        "kappa": kappa,
        "zero_sum": zsa_check(&q),
        "q": complex_json(&q),
        "final_fidelity_to_initial": last(&fid),
        "max_fidelity_deviation": max_deviation_from(&fid, 1.0),
        "final_purity": last(&pur),
        "final_ground_population": last(&ground),
    });
    Ok(Artifacts {
        scenario: "eta-vacuum".into(),
        columns: column_names(&["t", "fidelity_to_initial", "purity", "ground_population"]),
        rows: table(&times, &[&fid, &pur, &ground]),
        report,
        parameters: params(&[
            ("n", n.to_string()),
            ("q", complex_literal(&q)),
            ("seed", seed.to_string()),
            ("kappa", kappa.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[]),
    })
}

// ---------------------------------------------------------------------------
// Scenario: w-vacuum
// ---------------------------------------------------------------------------

/// The uniform W state is superradiant: its ground population follows the
/// closed form S(t) and approaches 1.
fn w_vacuum(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["n", "kappa", "t_final", "samples", "out"])?;
    let n = cfg.usize_or("n", 3)?;
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let times = time_grid(cfg, 5.0, 51)?;

    let w = make_w(n)?;
    let gen = vacuum_collective(n, kappa)?;
    let traj = evolve_grid(&gen, &w.to_density()?, &times, &IntegratorConfig::default())?;
    let ground = population_series(&traj, 0)?;
    let fid = fidelity_series(&traj, &w)?;
    let pur = purity_series(&traj);

    let uniform: Vec<C64> = vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let closed: Vec<f64> = times
        .iter()
        .map(|&t| absd_closed_form(&uniform, kappa, t).map(|state| state.s))
        .collect::<Result<_>>()?;
    let worst = ground
        .iter()
        .zip(&closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let report = json!({
        "n": n,
        "kappa": kappa,
        "final_ground_population": last(&ground),
        "closed_form_final_ground_population": last(&closed),
        "max_ground_population_deviation": worst,
        "final_fidelity_to_initial": last(&fid),
    });
    Ok(Artifacts {
        scenario: "w-vacuum".into(),
        columns: column_names(&[
            "t",
            "ground_population",
            "closed_form_ground_population",
            "fidelity_to_initial",
            "purity",
        ]),
        rows: table(&times, &[&ground, &closed, &fid, &pur]),
        report,
        parameters: params(&[
            ("n", n.to_string()),
            ("kappa", kappa.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[]),
    })
}

// ---------------------------------------------------------------------------
// Scenario: eta-absd-compare
// ---------------------------------------------------------------------------

/// Extract the five-operator coefficients from the integrated trajectory
/// and set them against the closed-form solution. Needs a generic `q`:
/// zero-sum or uniform amplitudes make the extraction family degenerate.
fn eta_absd_compare(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["n", "q", "seed", "kappa", "t_final", "samples", "out"])?;
    let seed = cfg.u64_or("seed", 1)?;
    let (n, q) = resolve_n_q(cfg, 4, "random", seed)?;
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let times = time_grid(cfg, 4.0, 41)?;

    let eta = make_eta(&q)?;
    let gen = vacuum_collective(n, kappa)?;
    let traj = evolve_grid(&gen, &eta.to_density()?, &times, &IntegratorConfig::default())?;
    let extracted = absd_series(&traj, &q, kappa)?;

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); 11];
    let mut max_coefficient_deviation: f64 = 0.0;
    let mut max_state_distance: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let closed = absd_closed_form(&q, kappa, t)?;
        let got = &extracted[i];
        for (slot, value) in [
            got.a.re, got.a.im, got.b, got.s, got.d,
            closed.a.re, closed.a.im, closed.b, closed.s, closed.d,
        ]
        .into_iter()
        .enumerate()
        {
            columns[slot].push(value);
        }
        let dev = [
            (got.a - closed.a).norm(),
            (got.b - closed.b).abs(),
            (got.s - closed.s).abs(),
            (got.d - closed.d).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        max_coefficient_deviation = max_coefficient_deviation.max(dev);

        let reference = collective_decay::analytic::eta_decay_solution(t, &q, kappa)?;
        let dist = frobenius_distance(&traj.states[i], &reference)?;
        max_state_distance = max_state_distance.max(dist);
        columns[10].push(dist);
    }

    let report = json!({
        "n": n,
        "kappa": kappa,
        "q": complex_json(&q),
        "max_coefficient_deviation": max_coefficient_deviation,
        "max_state_distance": max_state_distance,
        "final_dark_weight": extracted.last().expect("non-empty").d,
    });
    let refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
    Ok(Artifacts {
        scenario: "eta-absd-compare".into(),
        columns: column_names(&[
            "t", "a_re", "a_im", "b", "s", "d",
            "closed_a_re", "closed_a_im", "closed_b", "closed_s", "closed_d",
            "state_distance",
        ]),
        rows: table(&times, &refs),
        report,
        parameters: params(&[
            ("n", n.to_string()),
            ("q", complex_literal(&q)),
            ("seed", seed.to_string()),
            ("kappa", kappa.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[]),
    })
}

// ---------------------------------------------------------------------------
// Scenario: two-atom-squeezed
// ---------------------------------------------------------------------------

/// With the correlator saturated (|M|² = N(N+1)) the two-atom collective
/// channel has a pure steady state; the run relaxes the ground state onto
/// it and reports the overlap with the analytic vector.
fn two_atom_squeezed(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["N", "phase", "kappa", "t_final", "samples", "out"])?;
    let n_occ = cfg.f64_or("N", 1.0)?;
    let phase = cfg.f64_or("phase", 0.0)?;
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let times = time_grid(cfg, 15.0, 31)?;

    let bath = saturated_bath(n_occ, phase)?;
    let gen = dissipator_collective(2, &bath, kappa)?;
    let target = two_atom_squeezed_steady_with_phase(n_occ, phase)?;
    let rho0 = ground_state(2)?.to_density()?;
    let traj = evolve_grid(&gen, &rho0, &times, &IntegratorConfig::default())?;
    let fid = fidelity_series(&traj, &target)?;
    let pur = purity_series(&traj);

    let ss = steady_state(&gen, &rho0, &SteadyStateCriteria::default())?;
    let report = json!({
        "N": n_occ,
        "phase": phase,
        "kappa": kappa,
        "fidelity_to_analytic": fidelity(&target, &ss)?,
        "steady_purity": ss.purity(),
        "generator_residual": residual_of(&gen, &ss)?,
    });
    Ok(Artifacts {
        scenario: "two-atom-squeezed".into(),
        columns: column_names(&["t", "fidelity_to_analytic", "purity"]),
        rows: table(&times, &[&fid, &pur]),
        report,
        parameters: params(&[
            ("N", n_occ.to_string()),
            ("phase", phase.to_string()),
            ("kappa", kappa.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[(
            "steady_state_residual",
            json!(default_steady_tol(&gen)),
        )]),
    })
}

// ---------------------------------------------------------------------------
// Scenarios: eta3-squeezed / eta4-squeezed
// ---------------------------------------------------------------------------

/// Three zero-sum sites in the saturated squeezed bath: no pure steady
/// state exists, so the purity must drop and stay below 1.
fn eta3_squeezed(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["N", "q", "seed", "kappa", "t_final", "samples", "out"])?;
    let seed = cfg.u64_or("seed", 1)?;
    let (_, q) = resolve_n_q(cfg, 3, "zsa-random", seed)?;
    if q.len() != 3 {
        return Err(Error::Parse(format!(
            "eta3-squeezed is a three-site scenario, got {} amplitudes",
            q.len()
        )));
    }
    let n_occ = cfg.f64_or("N", 1.0)?;
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let times = time_grid(cfg, 15.0, 31)?;

    let bath = saturated_bath(n_occ, 0.0)?;
    let gen = dissipator_collective(3, &bath, kappa)?;
    let eta = make_eta(&q)?;
    let rho0 = eta.to_density()?;
    let traj = evolve_grid(&gen, &rho0, &times, &IntegratorConfig::default())?;
    let pur = purity_series(&traj);
    let fid = fidelity_series(&traj, &eta)?;

    let ss = steady_state(&gen, &rho0, &SteadyStateCriteria::default())?;
    let report = json!({
        "N": n_occ,
        "kappa": kappa,
        "zero_sum": zsa_check(&q),
        "q": complex_json(&q),
        "final_purity": last(&pur),
        "steady_purity": ss.purity(),
        "steady_state_is_mixed": ss.purity() < 0.99,
    });
    Ok(Artifacts {
        scenario: "eta3-squeezed".into(),
        columns: column_names(&["t", "purity", "fidelity_to_initial"]),
        rows: table(&times, &[&pur, &fid]),
        report,
        parameters: params(&[
            ("N", n_occ.to_string()),
            ("q", complex_literal(&q)),
            ("seed", seed.to_string()),
            ("kappa", kappa.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[(
            "steady_state_residual",
            json!(default_steady_tol(&gen)),
        )]),
    })
}

/// Four zero-sum sites purify: the steady state is the initial pattern
/// with the doubly-ground component replaced by the squeezed-pair vector.
fn eta4_squeezed(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["N", "q", "seed", "kappa", "t_final", "samples", "out"])?;
    let seed = cfg.u64_or("seed", 1)?;
    let (_, q) = resolve_n_q(cfg, 4, "zsa-random", seed)?;
    if q.len() != 4 {
        return Err(Error::Parse(format!(
            "eta4-squeezed is a four-site scenario, got {} amplitudes",
            q.len()
        )));
    }
    let n_occ = cfg.f64_or("N", 1.0)?;
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let times = time_grid(cfg, 15.0, 31)?;

    let bath = saturated_bath(n_occ, 0.0)?;
    let gen = dissipator_collective(4, &bath, kappa)?;
    let eta = make_eta(&q)?;
    let rho0 = eta.to_density()?;
    let target = eta4_squeezed_final(&q, n_occ)?;
    let traj = evolve_grid(&gen, &rho0, &times, &IntegratorConfig::default())?;
    let fid = fidelity_series(&traj, &target)?;
    let pur = purity_series(&traj);

    let ss = steady_state(&gen, &rho0, &SteadyStateCriteria::default())?;
    let report = json!({
        "N": n_occ,
        "kappa": kappa,
        "zero_sum": zsa_check(&q),
        "q": complex_json(&q),
        "fidelity_to_analytic": fidelity(&target, &ss)?,
        "steady_purity": ss.purity(),
        "generator_residual": residual_of(&gen, &ss)?,
    });
    Ok(Artifacts {
        scenario: "eta4-squeezed".into(),
        columns: column_names(&["t", "fidelity_to_analytic", "purity"]),
        rows: table(&times, &[&fid, &pur]),
        report,
        parameters: params(&[
            ("N", n_occ.to_string()),
            ("q", complex_literal(&q)),
            ("seed", seed.to_string()),
            ("kappa", kappa.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[(
            "steady_state_residual",
            json!(default_steady_tol(&gen)),
        )]),
    })
}

// ---------------------------------------------------------------------------
// Scenario: memory-cycle
// ---------------------------------------------------------------------------

/// Sweep the write–store–read cycle over the storage time. The `t` column
/// is the storage duration; each row is one complete cycle.
fn memory_cycle_sweep(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&[
        "n", "q", "seed", "coupling_f", "store_kappa", "N", "M", "store_times", "out",
    ])?;
    let seed = cfg.u64_or("seed", 1)?;
    let (n, q) = resolve_n_q(cfg, 3, "zsa-random", seed)?;
    let coupling_f = cfg.f64_or("coupling_f", 1.0)?;
    let store_kappa = cfg.f64_or("store_kappa", 1.0)?;
    let bath = resolve_bath(cfg, 0.0)?;
    let store_times = cfg.real_list_or("store_times", &[0.0, 0.5, 1.0, 2.0, 4.0])?;
    if store_times.is_empty() {
        return Err(Error::Parse("key `store_times`: list is empty".into()));
    }
    if store_times.windows(2).any(|w| w[1] <= w[0]) || store_times[0] < 0.0 {
        return Err(Error::Parse(
            "key `store_times`: need non-negative, strictly increasing times".into(),
        ));
    }

    let mut write = Vec::with_capacity(store_times.len());
    let mut post_store = Vec::with_capacity(store_times.len());
    let mut read = Vec::with_capacity(store_times.len());
    let mut purity_after = Vec::with_capacity(store_times.len());
    for &store_time in &store_times {
        let config = MemoryConfig::standard(n, coupling_f, store_time, bath, store_kappa)?;
        let cycle = memory_cycle(&config, &q)?;
        write.push(cycle.write_fidelity);
        post_store.push(cycle.post_store_fidelity);
        read.push(cycle.read_fidelity);
        purity_after.push(cycle.purity_after_store);
    }

    let report = json!({
        "n": n,
        "zero_sum": zsa_check(&q),
        "q": complex_json(&q),
        "coupling_f": coupling_f,
        "write_time": std::f64::consts::FRAC_PI_2 / coupling_f,
        "store_kappa": store_kappa,
        "store_occupation": bath.occupation(),
        "min_read_fidelity": read.iter().copied().fold(f64::INFINITY, f64::min),
        "final_read_fidelity": last(&read),
    });
    Ok(Artifacts {
        scenario: "memory-cycle".into(),
        columns: column_names(&[
            "t",
            "write_fidelity",
            "post_store_fidelity",
            "read_fidelity",
            "purity_after_store",
        ]),
        rows: table(&store_times, &[&write, &post_store, &read, &purity_after]),
        report,
        parameters: params(&[
            ("n", n.to_string()),
            ("q", complex_literal(&q)),
            ("seed", seed.to_string()),
            ("coupling_f", coupling_f.to_string()),
            ("store_kappa", store_kappa.to_string()),
            ("N", bath.occupation().to_string()),
            ("M", format!("{:e}{:+e}j", bath.correlator().re, bath.correlator().im)),
            (
                "store_times",
                complex_literal(
                    &store_times
                        .iter()
                        .map(|&t| C64::new(t, 0.0))
                        .collect::<Vec<_>>(),
                ),
            ),
        ]),
        tolerances: tolerances(&[]),
    })
}

// ---------------------------------------------------------------------------
// Scenario: full-cavity-reduction
// ---------------------------------------------------------------------------

/// Integrate the full atoms-plus-mode model and compare its reduced atomic
/// trajectory against the collective channel alone.
fn full_cavity_reduction(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&[
        "n", "q", "seed", "g", "delta", "k_sq", "gamma_sq", "kappa", "cutoff", "N", "M",
        "t_final", "samples", "out",
    ])?;
    let seed = cfg.u64_or("seed", 1)?;
    let (n, q) = resolve_n_q(cfg, 3, "random", seed)?;
    let model = ModelParams {
        n,
        g: cfg.f64_or("g", 0.1)?,
        delta: cfg.f64_or("delta", 200.0)?,
        k_sq: cfg.f64_or("k_sq", 1e-6)?,
        gamma_sq: cfg.f64_or("gamma_sq", 1.0)?,
        kappa: cfg.f64_or("kappa", 1.0)?,
        cavity_cutoff: cfg.usize_or("cutoff", 4)?,
    };
    let bath = resolve_bath(cfg, 0.0)?;
    let times = time_grid(cfg, 5.0, 11)?;

    let rho_atoms0 = make_eta(&q)?.to_density()?;
    let mode0 = mode_vacuum(model.cavity_cutoff)?;
    let grid: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
    let check = reduction_check(&model, &bath, &rho_atoms0, &mode0, &grid)?;

    let mut psd_times = vec![0.0];
    psd_times.extend(&check.times);
    let mut distances = vec![0.0];
    distances.extend(&check.distances);

    let report = json!({
        "n": n,
        "q": complex_json(&q),
        "max_trace_distance": check.max_trace_distance,
        "cutoff": check.cutoff,
        "cutoff_convergence": check.cutoff_convergence,
        "within_documented_bounds":
            check.max_trace_distance <= 1e-3 && check.cutoff_convergence <= 1e-8,
        "regime": serde_json::to_value(&check.regime)
            .map_err(|e| Error::Parse(format!("report serialization: {e}")))?,
        "warning": check.warning,
    });
    let dist_col: Vec<f64> = distances.clone();
    Ok(Artifacts {
        scenario: "full-cavity-reduction".into(),
        columns: column_names(&["t", "trace_distance"]),
        rows: table(&psd_times, &[&dist_col]),
        report,
        parameters: params(&[
            ("n", n.to_string()),
            ("q", complex_literal(&q)),
            ("seed", seed.to_string()),
            ("g", model.g.to_string()),
            ("delta", model.delta.to_string()),
            ("k_sq", model.k_sq.to_string()),
            ("gamma_sq", model.gamma_sq.to_string()),
            ("kappa", model.kappa.to_string()),
            ("cutoff", model.cavity_cutoff.to_string()),
            ("N", bath.occupation().to_string()),
            ("M", format!("{:e}{:+e}j", bath.correlator().re, bath.correlator().im)),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[
            ("trace_distance_bound", json!(1e-3)),
            ("cutoff_convergence_bound", json!(1e-8)),
        ]),
    })
}

// ---------------------------------------------------------------------------
// Scenario: dfs-scan
// ---------------------------------------------------------------------------

/// Enumerate the dark subspace of the single-excitation sector for each
/// atom count up to `n_max`, then evolve a seeded random dark
/// superposition at `n_max` to demonstrate decoherence-free storage.
fn dfs_scan(cfg: &Config) -> Result<Artifacts> {
    cfg.restrict_keys(&["n_max", "kappa", "seed", "t_final", "samples", "out"])?;
    let n_max = cfg.usize_or("n_max", 6)?;
    if n_max < 2 {
        return Err(Error::Parse(format!(
            "key `n_max`: the dark sector needs at least two atoms, got {n_max}"
        )));
    }
    let kappa = cfg.f64_or("kappa", 1.0)?;
    let seed = cfg.u64_or("seed", 1)?;
    let times = time_grid(cfg, 5.0, 26)?;

    let mut sectors = Vec::new();
    let mut top_gen: Option<Generator> = None;
    let mut top_basis: Vec<StateVector> = Vec::new();
    for n in 2..=n_max {
        let gen = vacuum_collective(n, kappa)?;
        let basis = dark_subspace(&gen, Some(1))?;
        let mut all_zero_sum = true;
        let mut max_j_error: f64 = 0.0;
        let j_target = n as f64 / 2.0 - 1.0;
        for vector in &basis {
            let q: Vec<C64> = (0..n)
                .map(|k| vector.amplitudes[1usize << (n - 1 - k)])
                .collect();
            all_zero_sum &= zsa_check(&q);
            let (j, _) = dicke_numbers(vector)?;
            max_j_error = max_j_error.max((j - j_target).abs());
        }
        sectors.push(json!({
            "n": n,
            "dimension": basis.len(),
            "expected_dimension": n - 1,
            "all_zero_sum": all_zero_sum,
            "j": j_target,
            "max_j_error": max_j_error,
            "degeneracy": dicke_degeneracy(n, j_target)? as u64,
        }));
        if n == n_max {
            top_gen = Some(gen);
            top_basis = basis;
        }
    }

    let gen = top_gen.expect("n_max >= 2");
    let mut rng = rng_from_seed(seed);
    let coeffs = random_complex_vector(&mut rng, top_basis.len());
    let mut amplitudes = ndarray::Array1::<C64>::zeros(gen.space().dim());
    for (c, vector) in coeffs.iter().zip(&top_basis) {
        amplitudes = amplitudes + vector.amplitudes.mapv(|z| z * c);
    }
    let psi = StateVector::new(gen.space().clone(), amplitudes)?.normalize()?;
    let traj = evolve_grid(&gen, &psi.to_density()?, &times, &IntegratorConfig::default())?;
    let fid = fidelity_series(&traj, &psi)?;
    let pur = purity_series(&traj);

    let report = json!({
        "sectors": sectors,
        "largest_n": n_max,
        "kappa": kappa,
        "final_fidelity_to_initial": last(&fid),
        "max_fidelity_deviation": max_deviation_from(&fid, 1.0),
    });
    Ok(Artifacts {
        scenario: "dfs-scan".into(),
        columns: column_names(&["t", "fidelity_to_initial", "purity"]),
        rows: table(&times, &[&fid, &pur]),
        report,
        parameters: params(&[
            ("n_max", n_max.to_string()),
            ("kappa", kappa.to_string()),
            ("seed", seed.to_string()),
            ("t_final", last(&times).to_string()),
            ("samples", times.len().to_string()),
        ]),
        tolerances: tolerances(&[]),
    })
}
