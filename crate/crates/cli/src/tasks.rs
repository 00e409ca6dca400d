//! Task drivers: everything behind `pairkit <task>` once a validated
//! [`RunConfig`] exists.

use std::collections::BTreeMap;

use pairkit::bcs;
use pairkit::ed;
use pairkit::extrapolate::{self, SeriesPoint};
use pairkit::fock::SectorBasis;
use pairkit::models::{build_hamiltonian, equally_spaced_levels, ModelSpec};
use pairkit::seniority;

use crate::config::{
    OutputFormat, RunConfig, SeniorityFamily, SweepSolver, SweepVariable, TaskKind,
};
use crate::output::{
    fmt_sig, json_object, parse_series_csv, series_csv, write_artifact, SeriesRow, Value,
};
use crate::verify;

/// Failure modes mapped to process exit codes.
#[derive(Debug)]
pub enum TaskError {
    /// exit 3
    Config(String),
    /// exit 4
    Capacity(String),
    /// exit 2
    NoConvergence(String),
    /// exit 1
    Io(String),
    /// exit 1
    Failed(String),
}

impl TaskError {
    pub fn exit_code(&self) -> i32 {
        match self {
            TaskError::Config(_) => 3,
            TaskError::Capacity(_) => 4,
            TaskError::NoConvergence(_) => 2,
            TaskError::Io(_) | TaskError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            TaskError::Config(m)
            | TaskError::Capacity(m)
            | TaskError::NoConvergence(m)
            | TaskError::Io(m)
            | TaskError::Failed(m) => m,
        }
    }
}

fn lift(err: pairkit::Error) -> TaskError {
    match err {
        pairkit::Error::CapacityExceeded { .. } => TaskError::Capacity(err.to_string()),
        pairkit::Error::NoConvergence { .. } => TaskError::NoConvergence(err.to_string()),
        pairkit::Error::OmegaTooLarge { .. }
        | pairkit::Error::BadParticleNumber { .. }
        | pairkit::Error::UnsupportedClass(_)
        | pairkit::Error::Domain(_) => TaskError::Config(err.to_string()),
        other => TaskError::Failed(other.to_string()),
    }
}

pub fn run(config: &RunConfig) -> Result<(), TaskError> {
    config
        .validate()
        .map_err(|e| TaskError::Config(e.to_string()))?;
    match config.task.kind {
        TaskKind::Seniority => seniority_task(config),
        TaskKind::Ed => ed_task(config),
        TaskKind::BcsBulk => bcs_bulk_task(config),
        TaskKind::BcsFinite => bcs_finite_task(config),
        TaskKind::Sweep => sweep_task(config),
        TaskKind::Extrapolate => extrapolate_task(config),
        TaskKind::Verify => verify_task(config),
    }
}

fn seniority_task(config: &RunConfig) -> Result<(), TaskError> {
    let m = &config.model;
    let t = &config.task;
    let omega = m.omega;
    let n = m.n_or_quarter();
    let coupling = m.coupling().map_err(|e| TaskError::Config(e.to_string()))?;
    let spec = ModelSpec::new(
        pairkit::models::ModelClass::Su4Seniority,
        omega,
        n,
        coupling,
    );
    let big_g = spec.big_g();
    let g = spec.bulk_g();

    let (family_name, energy) = match t.family {
        SeniorityFamily::Identical => (
            "identical",
            seniority::energy_identical(big_g, omega, n, t.v).map_err(lift)?,
        ),
        SeniorityFamily::Isovector => (
            "isovector",
            seniority::energy_isovector(big_g, omega, n, t.v, t.t).map_err(lift)?,
        ),
        SeniorityFamily::Su4 => (
            "su4",
            seniority::energy_su4(big_g, omega, n, t.lambda2).map_err(lift)?,
        ),
    };

    // quasiparticle combinations exist for the two-label families at even n
    let gaps = match t.family {
        SeniorityFamily::Identical => seniority::quasiparticle_energies_seniority(
            g,
            omega,
            n,
            seniority::SeniorityModel::Identical,
        )
        .ok(),
        SeniorityFamily::Isovector => seniority::quasiparticle_energies_seniority(
            g,
            omega,
            n,
            seniority::SeniorityModel::Isovector,
        )
        .ok(),
        SeniorityFamily::Su4 => None,
    };

    let artifact = match config.output.format {
        OutputFormat::Json => {
            let mut fields = vec![
                ("model", Value::Text(family_name.into())),
                ("omega", Value::Integer(omega as i64)),
                ("n", Value::Integer(n as i64)),
                ("v", Value::Integer(t.v as i64)),
                ("t", Value::Number(t.t)),
                ("lambda2", Value::Integer(t.lambda2 as i64)),
                ("big_g", Value::Number(big_g)),
                ("g", Value::Number(g)),
                ("energy", Value::Number(energy)),
                ("e_per_n", Value::Number(energy / n.max(1) as f64)),
            ];
            if let Some(gaps) = gaps {
                fields.push(("e_2q", Value::Number(gaps.e_2q)));
                fields.push(("e_q_even", Value::Number(gaps.e_q_even)));
                fields.push(("e_q_odd", Value::Number(gaps.e_q_odd)));
                fields.push(("delta_oe", Value::Number(gaps.delta_oe)));
            }
            json_object(&fields)
        }
        OutputFormat::Csv => {
            let mut s = String::from("model,omega,n,v,t,lambda2,G,energy\n");
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                family_name,
                omega,
                n,
                t.v,
                fmt_sig(t.t),
                t.lambda2,
                fmt_sig(big_g),
                fmt_sig(energy)
            ));
            s
        }
    };
    write_artifact(&config.output.path, &artifact).map_err(TaskError::Io)
}

fn ed_task(config: &RunConfig) -> Result<(), TaskError> {
    let m = &config.model;
    let t = &config.task;
    let n = m.n_or_quarter();
    let spec = m
        .to_spec(m.omega, n)
        .map_err(|e| TaskError::Config(e.to_string()))?;
    let basis = SectorBasis::enumerate_with(m.omega, n, None, t.dim_cap).map_err(lift)?;
    let h = build_hamiltonian(&spec, &basis).map_err(lift)?;
    let levels = ed::excitation_spectrum(&h, &basis, t.k, t.tol).map_err(lift)?;
    let ground = ed::lowest_states(&h, 1, t.tol).map_err(lift)?;
    let occ = ed::occupations(&ground.vectors[0], &basis);
    let delta_c = ed::canonical_gap(&occ, spec.bulk_g(), m.omega);

    let artifact = match config.output.format {
        OutputFormat::Json => {
            let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
            let excitations: Vec<f64> = levels.iter().map(|l| l.excitation).collect();
            let spins: Vec<Option<f64>> = levels.iter().map(|l| l.total_spin).collect();
            let isospins: Vec<Option<f64>> = levels.iter().map(|l| l.total_isospin).collect();
            let casimirs: Vec<Option<f64>> = levels.iter().map(|l| l.casimir_su4).collect();
            json_object(&[
                ("class", Value::Text(spec.class.name().into())),
                ("omega", Value::Integer(m.omega as i64)),
                ("n", Value::Integer(n as i64)),
                ("g", Value::Number(spec.bulk_g())),
                ("dim", Value::Integer(basis.dim() as i64)),
                ("energies", Value::NumberList(energies)),
                ("excitations", Value::NumberList(excitations)),
                ("total_spin", Value::MaybeNumberList(spins)),
                ("total_isospin", Value::MaybeNumberList(isospins)),
                ("casimir_su4", Value::MaybeNumberList(casimirs)),
                ("ground_delta_c", Value::Number(delta_c)),
                ("iterations", Value::Integer(ground.iterations as i64)),
            ])
        }
        OutputFormat::Csv => {
            let mut s =
                String::from("level,energy,excitation,total_spin,total_isospin,casimir_su4\n");
            for (i, l) in levels.iter().enumerate() {
                let opt = |x: Option<f64>| x.map_or("".to_string(), fmt_sig);
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    i,
                    fmt_sig(l.energy),
                    fmt_sig(l.excitation),
                    opt(l.total_spin),
                    opt(l.total_isospin),
                    opt(l.casimir_su4)
                ));
            }
            s
        }
    };
    write_artifact(&config.output.path, &artifact).map_err(TaskError::Io)
}

fn bcs_bulk_task(config: &RunConfig) -> Result<(), TaskError> {
    let g = config.model.g_bulk.expect("validated");
    let x = config.task.filling;
    let sol = bcs::solve_bulk(g, x).map_err(lift)?;
    let eps_q = config.task.eps_q.unwrap_or(x / 8.0);
    let e_q = bcs::quasiparticle_energy(eps_q, sol.lambda, sol.delta);
    let artifact = json_object(&[
        ("g", Value::Number(g)),
        ("filling", Value::Number(x)),
        ("lambda", Value::Number(sol.lambda)),
        ("delta", Value::Number(sol.delta)),
        ("e_per_n", Value::Number(sol.energy_per_particle)),
        ("eps_q", Value::Number(eps_q)),
        ("e_q", Value::Number(e_q)),
        ("gap_residual", Value::Number(sol.gap_residual)),
        ("number_residual", Value::Number(sol.number_residual)),
        ("iterations", Value::Integer(sol.iterations as i64)),
        ("normal_phase", Value::Bool(sol.normal_phase)),
    ]);
    write_artifact(&config.output.path, &artifact).map_err(TaskError::Io)
}

/// Levels for a finite-omega mean-field solve: explicit list or the equally
/// spaced default band.
fn finite_levels(config: &RunConfig, omega: usize) -> Result<Vec<f64>, TaskError> {
    match &config.model.levels {
        Some(levels) => {
            if levels.len() != omega {
                return Err(TaskError::Config(format!(
                    "model.levels has {} entries but omega = {omega}",
                    levels.len()
                )));
            }
            Ok(levels.clone())
        }
        None => Ok(equally_spaced_levels(omega)),
    }
}

/// The blocked level for the quasiparticle energy: the configured value or
/// the lowest level at or above the chemical potential.
fn blocked_level(levels: &[f64], lambda: f64, configured: Option<f64>) -> f64 {
    configured.unwrap_or_else(|| {
        levels
            .iter()
            .cloned()
            .filter(|&e| e >= lambda)
            .fold(f64::INFINITY, f64::min)
    })
}

fn bcs_finite_point(
    config: &RunConfig,
    omega: usize,
    n: usize,
) -> Result<(bcs::BcsSolution, f64, f64, f64), TaskError> {
    let spec = config
        .model
        .to_spec(omega, n)
        .map_err(|e| TaskError::Config(e.to_string()))?;
    let g = spec.bulk_g();
    let levels = finite_levels(config, omega)?;
    let sol = bcs::solve_discrete(&levels, g, omega, n).map_err(lift)?;
    let eps_q = blocked_level(&levels, sol.lambda, config.task.eps_q);
    let e_q = bcs::quasiparticle_energy(eps_q, sol.lambda, sol.delta);
    let delta_c = bcs::canonical_gap_bcs(&levels, sol.lambda, sol.delta, g);
    Ok((sol, eps_q, e_q, delta_c))
}

fn bcs_finite_task(config: &RunConfig) -> Result<(), TaskError> {
    let omega = config.model.omega;
    let n = config.model.n_or_quarter();
    let (sol, eps_q, e_q, delta_c) = bcs_finite_point(config, omega, n)?;
    let artifact = json_object(&[
        ("omega", Value::Integer(omega as i64)),
        ("n", Value::Integer(n as i64)),
        ("lambda", Value::Number(sol.lambda)),
        ("delta", Value::Number(sol.delta)),
        ("e_per_n", Value::Number(sol.energy_per_particle)),
        ("eps_q", Value::Number(eps_q)),
        ("e_q", Value::Number(e_q)),
        ("delta_oe", Value::Number(sol.delta)),
        ("delta_c", Value::Number(delta_c)),
        ("gap_residual", Value::Number(sol.gap_residual)),
        ("number_residual", Value::Number(sol.number_residual)),
        ("iterations", Value::Integer(sol.iterations as i64)),
        ("normal_phase", Value::Bool(sol.normal_phase)),
    ]);
    write_artifact(&config.output.path, &artifact).map_err(TaskError::Io)
}

/// One exact-diagonalization sweep point: ground energies of the n, n+1 and
/// n+2 sectors plus ground occupations.
fn ed_point(config: &RunConfig, omega: usize, n: usize) -> Result<SeriesRow, TaskError> {
    let t = &config.task;
    if n == 0 || n > 4 * omega {
        return Err(TaskError::Config(format!(
            "sweep point n={n} outside the omega={omega} sector range"
        )));
    }
    let mut table = BTreeMap::new();
    let mut delta_c = None;
    for dn in 0..3usize {
        let sector_n = n + dn;
        if sector_n > 4 * omega {
            break;
        }
        let spec = config
            .model
            .to_spec(omega, sector_n)
            .map_err(|e| TaskError::Config(e.to_string()))?;
        let basis = SectorBasis::enumerate_with(omega, sector_n, None, t.dim_cap).map_err(lift)?;
        let h = build_hamiltonian(&spec, &basis).map_err(lift)?;
        let res = ed::lowest_states(&h, 1, t.tol).map_err(lift)?;
        table.insert(sector_n, res.energies[0]);
        if dn == 0 {
            let occ = ed::occupations(&res.vectors[0], &basis);
            delta_c = Some(ed::canonical_gap(&occ, spec.bulk_g(), omega));
        }
    }
    let e0 = table[&n];
    let gaps = ed::gap_observables(&table, n).ok();
    Ok(SeriesRow {
        n,
        e_per_n: Some(e0 / n as f64),
        e_q: gaps.map(|g| g.e_q),
        delta_oe: gaps.map(|g| g.delta_oe),
        delta_c,
    })
}

fn bcs_point(config: &RunConfig, omega: usize, n: usize) -> Result<SeriesRow, TaskError> {
    let (sol, _, e_q, delta_c) = bcs_finite_point(config, omega, n)?;
    Ok(SeriesRow {
        n,
        e_per_n: Some(sol.energy_per_particle),
        e_q: Some(e_q),
        delta_oe: Some(sol.delta),
        delta_c: Some(delta_c),
    })
}

fn sweep_task(config: &RunConfig) -> Result<(), TaskError> {
    let t = &config.task;
    let points: Vec<(usize, usize)> = t
        .values
        .iter()
        .map(|&value| match t.variable {
            SweepVariable::Omega => {
                let omega = value;
                let n = config.model.n.unwrap_or(omega);
                (omega, n)
            }
            SweepVariable::N => (config.model.omega, value),
        })
        .collect();

    let rows = parallel_try_map(points.len(), config.threads, |i| {
        let (omega, n) = points[i];
        match t.solver {
            SweepSolver::Bcs => bcs_point(config, omega, n),
            SweepSolver::Ed => ed_point(config, omega, n),
        }
    })?;

    // sweep output is always the series CSV (the interchange format)
    write_artifact(&config.output.path, &series_csv(&rows)).map_err(TaskError::Io)
}

fn extrapolate_task(config: &RunConfig) -> Result<(), TaskError> {
    let t = &config.task;
    let input = t.input.as_ref().expect("validated");
    let text = std::fs::read_to_string(input)
        .map_err(|e| TaskError::Io(format!("reading {input}: {e}")))?;
    let raw = parse_series_csv(&text, &t.observable).map_err(TaskError::Io)?;
    let points: Vec<SeriesPoint> = raw.iter().map(|&(n, v)| SeriesPoint::new(n, v)).collect();
    let fit = extrapolate::fit_inverse_powers(&points, t.degree).map_err(lift)?;
    let bulk = extrapolate::extrapolate_to_bulk(&fit);

    let mut fields = vec![
        ("observable", Value::Text(t.observable.clone())),
        ("degree", Value::Integer(fit.degree as i64)),
        ("n_points", Value::Integer(points.len() as i64)),
        ("coefficients", Value::NumberList(fit.coefficients.clone())),
        ("bulk", Value::Number(bulk)),
        ("rms_residual", Value::Number(fit.rms_residual)),
        ("max_residual", Value::Number(fit.max_residual)),
        ("condition", Value::Number(fit.condition)),
        ("ill_conditioned", Value::Bool(fit.ill_conditioned)),
    ];
    if fit.ill_conditioned {
        fields.push((
            "warning",
            Value::Text("condition number exceeds 1e10".into()),
        ));
    }
    let artifact = json_object(&fields);
    write_artifact(&config.output.path, &artifact).map_err(TaskError::Io)
}

fn verify_task(config: &RunConfig) -> Result<(), TaskError> {
    let report = verify::run_all();
    let mut out = String::new();
    let mut all_ok = true;
    for (name, result) in &report {
        match result {
            Ok(()) => out.push_str(&format!("PASS {name}\n")),
            Err(detail) => {
                all_ok = false;
                out.push_str(&format!("FAIL {name}: {detail}\n"));
            }
        }
    }
    out.push_str(&format!(
        "{} checks, {} failed\n",
        report.len(),
        report.iter().filter(|(_, r)| r.is_err()).count()
    ));
    write_artifact(&config.output.path, &out).map_err(TaskError::Io)?;
    if all_ok {
        Ok(())
    } else {
        Err(TaskError::Failed("verification failures".into()))
    }
}

/// Run `f` over 0..count on up to `threads` workers; results are assembled
/// in index order so the output is identical for any thread count.
fn parallel_try_map<T, F>(count: usize, threads: usize, f: F) -> Result<Vec<T>, TaskError>
where
    T: Send,
    F: Fn(usize) -> Result<T, TaskError> + Sync,
{
    let threads = threads.clamp(1, count.max(1));
    if threads == 1 {
        return (0..count).map(&f).collect();
    }
    let mut slots: Vec<Option<Result<T, TaskError>>> = (0..count).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots_ref = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let result = f(i);
                let mut guard = slots_ref.lock().unwrap();
                guard[i] = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.expect("every index filled"))
        .collect()
}
