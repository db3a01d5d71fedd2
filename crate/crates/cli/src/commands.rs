use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;
use rtkm::data::{generate_synthetic, inject_noise, LabeledTable};
use rtkm::metrics::{average_f1, me_score, Clustering};
use rtkm::{fit, Algorithm, Dataset, FitResult, SolverConfig};

use crate::args::{EvalArgs, FitArgs, GenerateArgs, SolverArgs, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::grid::parse_alpha_grid;
use crate::manifest::{
    EvalReport, FitArtifact, RunManifest, RunRecord, Selection, SweepRow, SWEEP_COLUMNS,
};

/// Average F1 and M_e of a fit, each `None` when the truth cannot support it.
pub fn score(fit: &FitResult, data: &Dataset) -> (Option<f64>, Option<f64>) {
    let f1 = data.truth_memberships().and_then(|_| {
        let truth = Clustering::from_truth(data).ok()?;
        let predicted = Clustering::from_fit(fit).ok()?;
        average_f1(&predicted, &truth).ok()
    });
    let me = data
        .truth_outliers()
        .and_then(|truth| me_score(&fit.outlier_flags, truth).ok());
    (f1, me)
}

fn run_one(
    algorithm: Algorithm,
    data: &Dataset,
    config: &SolverConfig,
    timing: bool,
) -> (RunRecord, Result<FitResult, rtkm::Error>) {
    let start = Instant::now();
    let outcome = fit(algorithm, data, config);
    let wall_ms = timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let mut record = RunRecord {
        alpha: config.alpha,
        seed: config.seed,
        objective: None,
        average_f1: None,
        me: None,
        iterations: 0,
        converged: false,
        n_outliers: 0,
        wall_ms,
        error: None,
    };
    match &outcome {
        Ok(result) => {
            let (f1, me) = score(result, data);
            record.objective = result.objective();
            record.average_f1 = f1;
            record.me = me;
            record.iterations = result.iterations;
            record.converged = result.converged;
            record.n_outliers = result.n_outliers();
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    (record, outcome)
}

fn check_sizes(solver: &SolverArgs, restarts: usize, data: &Dataset) -> CliResult<()> {
    if restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    if solver.k > data.n_points() {
        return Err(CliError::Usage(format!(
            "--k {} exceeds the {} available points",
            solver.k,
            data.n_points()
        )));
    }
    Ok(())
}

fn seeds(base: u64, restarts: usize) -> Vec<u64> {
    (0..restarts as u64).map(|i| base.wrapping_add(i)).collect()
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn cmd_fit(args: &FitArgs) -> CliResult<FitArtifact> {
    let (data, identity) = args.dataset.load()?;
    let base = args.solver.config(args.alpha)?;
    check_sizes(&args.solver, args.restarts, &data)?;
    let seeds = seeds(base.seed, args.restarts);
    let algorithm = args.solver.algorithm;
    let outcomes: Vec<_> = seeds
        .par_iter()
        .map(|&seed| run_one(algorithm, &data, &base.clone().with_seed(seed), args.timing))
        .collect();

    let mut best: Option<(u64, FitResult)> = None;
    let mut first_error = None;
    let mut records = Vec::with_capacity(outcomes.len());
    for (record, outcome) in outcomes {
        match outcome {
            Ok(result) => {
                let better = best.as_ref().is_none_or(|(_, b)| {
                    result.objective().unwrap_or(f64::INFINITY)
                        < b.objective().unwrap_or(f64::INFINITY)
                });
                if better {
                    best = Some((record.seed, result));
                }
            }
            Err(e) => {
                warn!("run with seed {} failed: {e}", record.seed);
                first_error.get_or_insert(e);
            }
        }
        records.push(record);
    }
    let Some((selected_seed, result)) = best else {
        return Err(first_error.expect("at least one run").into());
    };
    info!("selected seed {selected_seed} with objective {:?}", result.objective());
    Ok(FitArtifact {
        manifest: RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: "fit".into(),
            algorithm,
            config: base,
            dataset: identity,
            seeds,
            alpha_grid: Vec::new(),
            selection: Selection::BestObjective,
            runs: records,
        },
        selected_seed,
        result,
    })
}

fn stats(values: &[f64]) -> (Option<f64>, Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None, None);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Clamp so rounding in the sum never puts the mean outside [min, max].
    let mean = (values.iter().sum::<f64>() / values.len() as f64).clamp(min, max);
    (Some(min), Some(mean), Some(max))
}

/// Per-alpha statistics over the runs, in grid order.
pub fn summarize(grid: &[f64], restarts: usize, runs: &[RunRecord]) -> Vec<SweepRow> {
    grid.iter()
        .map(|&alpha| {
            let here: Vec<&RunRecord> = runs.iter().filter(|r| r.alpha == alpha).collect();
            let ok: Vec<&&RunRecord> = here.iter().filter(|r| r.error.is_none()).collect();
            let f1: Vec<f64> = ok.iter().filter_map(|r| r.average_f1).collect();
            let me: Vec<f64> = ok.iter().filter_map(|r| r.me).collect();
            let (f1_min, f1_mean, f1_max) = stats(&f1);
            let (me_min, me_mean, me_max) = stats(&me);
            SweepRow {
                alpha,
                restarts,
                f1_min,
                f1_mean,
                f1_max,
                me_min,
                me_mean,
                me_max,
                failures: here.len() - ok.len(),
            }
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> CliResult<String> {
    let cell = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        writer.write_record([
            r.alpha.to_string(),
            r.restarts.to_string(),
            cell(r.f1_min),
            cell(r.f1_mean),
            cell(r.f1_max),
            cell(r.me_min),
            cell(r.me_mean),
            cell(r.me_max),
            r.failures.to_string(),
        ])?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<(Vec<SweepRow>, RunManifest)> {
    let grid = parse_alpha_grid(&args.alpha_grid)?;
    let (data, identity) = args.dataset.load()?;
    if data.truth_memberships().is_none() {
        return Err(CliError::Usage(
            "a sweep scores every run and needs ground truth (--labels or --synthetic)".into(),
        ));
    }
    let base = args.solver.config(0.0)?;
    check_sizes(&args.solver, args.restarts, &data)?;
    let seeds = seeds(base.seed, args.restarts);
    let algorithm = args.solver.algorithm;
    let jobs: Vec<(f64, u64)> = grid
        .iter()
        .flat_map(|&a| seeds.iter().map(move |&s| (a, s)))
        .collect();
    let runs: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(alpha, seed)| {
            let config = base.clone().with_alpha(alpha).with_seed(seed);
            run_one(algorithm, &data, &config, args.timing).0
        })
        .collect();
    for r in runs.iter().filter(|r| r.error.is_some()) {
        warn!(
            "alpha {} seed {} failed and is excluded: {}",
            r.alpha,
            r.seed,
            r.error.as_deref().unwrap_or_default()
        );
    }
    let rows = summarize(&grid, args.restarts, &runs);
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        command: "sweep".into(),
        algorithm,
        config: base,
        dataset: identity,
        seeds,
        alpha_grid: grid,
        selection: Selection::All,
        runs,
    };
    Ok((rows, manifest))
}

/// `<out>.manifest.json` next to the sweep table.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<EvalReport> {
    let text = fs::read_to_string(&args.result)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.result.display())))?;
    let artifact: FitArtifact = serde_json::from_str(&text)?;
    let data = if args.truth_from_manifest {
        artifact.manifest.dataset.reload()?
    } else {
        args.dataset.load()?.0
    };
    let result = &artifact.result;
    let n = result.hard_assignments.len();
    if data.n_points() != n || result.outlier_flags.len() != n {
        return Err(CliError::Data(format!(
            "result covers {n} points but the truth has {}",
            data.n_points()
        )));
    }
    let truth = Clustering::from_truth(&data)?;
    let predicted = Clustering::from_fit(result)?;
    let f1 = average_f1(&predicted, &truth)?;
    let truth_flags = truth.outlier_flags();
    let me = me_score(&result.outlier_flags, &truth_flags).ok();
    Ok(EvalReport {
        result_seed: artifact.selected_seed,
        n_points: n,
        average_f1: f1,
        me,
        predicted_outliers: result.n_outliers(),
        truth_outliers: truth.outliers().len(),
    })
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<LabeledTable> {
    let spec = args.preset.spec(args.data_seed);
    let data = inject_noise(&generate_synthetic(&spec)?, args.noise, args.noise_seed)?;
    let k = spec.means.len();
    let memberships = data.truth_memberships().expect("generated data has truth");
    let flags = data.truth_outliers().expect("generated data has truth");
    let labels = memberships
        .iter()
        .zip(flags)
        .map(|(m, &out)| if out { vec![k] } else { m.clone() })
        .collect();
    Ok(LabeledTable {
        feature_names: (0..data.n_features()).map(|f| format!("x{f}")).collect(),
        class_names: (0..k)
            .map(|c| format!("c{c}"))
            .chain(std::iter::once("outlier".to_string()))
            .collect(),
        rows: data.points().columns().into_iter().map(|c| c.to_vec()).collect(),
        labels,
        skipped_rows: Vec::new(),
    })
}

pub fn write_fit(args: &FitArgs, artifact: &FitArtifact) -> CliResult<()> {
    write_output(args.out.as_deref(), &to_json(artifact)?)
}

pub fn write_sweep(args: &SweepArgs, rows: &[SweepRow], manifest: &RunManifest) -> CliResult<()> {
    let table = sweep_csv(rows)?;
    if let Some(out) = &args.out {
        write_output(Some(&manifest_path(out)), &to_json(manifest)?)?;
    }
    write_output(args.out.as_deref(), &table)
}

pub fn write_eval(args: &EvalArgs, report: &EvalReport) -> CliResult<()> {
    write_output(args.out.as_deref(), &to_json(report)?)
}

pub fn write_generate(args: &GenerateArgs, table: &LabeledTable) -> CliResult<()> {
    let file = fs::File::create(&args.out)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", args.out.display())))?;
    table.write_csv(std::io::BufWriter::new(file))?;
    info!(
        "wrote {} records; load with --labels {} --outlier-classes outlier",
        table.rows.len(),
        table.written_label_spec()
    );
    Ok(())
}
