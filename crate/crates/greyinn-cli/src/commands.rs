//! Subcommand implementations: fit, forecast, evaluate, compare,
//! search-order, synth.
//!
//! Every command resolves its configuration, computes everything in memory,
//! and only then writes files into the output directory, so a failing run
//! leaves no partial outputs behind.

use crate::config::{GreyTerm, Model, OrderSpec, RunConfig};
use crate::data::{continue_labels, fmt_f64, read_series, render_table, write_all, OutFile, SeriesFile};
use crate::error::{CliError, CliResult};
use crate::svg::{render_chart, ChartSeries};
use greyinn::{
    build_windows, fit_gm11, fit_tmfgm, forecast, make_grey_targets, select_order, train,
    Activation, FractionalOrder, GreyInformedLossConfig, GreyModelFit, MetricReport,
    Normalization, PsoConfig, SearchResult, TimeSeries, TrainConfig,
};
use serde::Serialize;
use std::path::Path;

/// Everything produced by running one model on one series.
pub struct ModelOutcome {
    pub model: Model,
    pub grey_params: Option<(f64, f64)>,
    pub order: Option<(f64, f64)>,
    /// (1-based series index, fitted value) over the training range.
    pub fitted: Vec<(usize, f64)>,
    pub forecasts: Vec<f64>,
    pub loss_trace: Vec<f64>,
}

fn pso_config(cfg: &RunConfig) -> PsoConfig {
    let mut pso = PsoConfig::for_order_search(cfg.seed);
    pso.swarm_size = cfg.pso_particles;
    pso.iterations = cfg.pso_iterations;
    pso
}

/// The (alpha, beta) to use for fractional models: explicit values when both
/// are fixed, otherwise PSO selection on the training series.
fn resolve_order(cfg: &RunConfig, train_series: &TimeSeries) -> CliResult<(FractionalOrder, Option<SearchResult>)> {
    match (cfg.alpha, cfg.beta) {
        (OrderSpec::Fixed(a), OrderSpec::Fixed(b)) => {
            Ok((FractionalOrder::new(a, b).map_err(CliError::from)?, None))
        }
        _ => {
            let (ord, result) = select_order(train_series, &pso_config(cfg))?;
            Ok((ord, Some(result)))
        }
    }
}

fn train_slice(data: &SeriesFile, cfg: &RunConfig) -> CliResult<(TimeSeries, usize)> {
    let n = data.series.len();
    let split = cfg.train_split.unwrap_or(n);
    if split < 1 || split > n {
        return Err(CliError::Usage(format!(
            "train split {split} outside the series length {n}"
        )));
    }
    let train = TimeSeries::new(data.series.values()[..split].to_vec()).map_err(CliError::from)?;
    Ok((train, split))
}

fn grey_outcome(model: Model, fit: &GreyModelFit, horizon: usize) -> CliResult<ModelOutcome> {
    let forecasts = if horizon > 0 {
        fit.predict(horizon)?.into_values()
    } else {
        Vec::new()
    };
    Ok(ModelOutcome {
        model,
        grey_params: Some((fit.params.a, fit.params.b)),
        order: fit.order.map(|o| (o.alpha(), o.beta())),
        fitted: (1..=fit.n).map(|k| (k, fit.restored_fit.at(k))).collect(),
        forecasts,
        loss_trace: Vec::new(),
    })
}

/// Fit one model on the training prefix and produce `horizon` forecasts.
pub fn run_model(
    model: Model,
    data: &SeriesFile,
    cfg: &RunConfig,
    horizon: usize,
) -> CliResult<ModelOutcome> {
    let (train_series, _split) = train_slice(data, cfg)?;
    match model {
        Model::Gm11 => grey_outcome(model, &fit_gm11(&train_series)?, horizon),
        Model::Tmfgm => {
            let (ord, _) = resolve_order(cfg, &train_series)?;
            grey_outcome(model, &fit_tmfgm(&train_series, ord)?, horizon)
        }
        Model::Mlp | Model::Ginn | Model::Fginn => {
            let dataset = build_windows(&train_series, cfg.window)?;
            let (loss_cfg, grey_fit) = match model {
                Model::Mlp => (GreyInformedLossConfig::plain(), None),
                Model::Ginn => {
                    let fit = fit_gm11(&train_series)?;
                    let g = make_grey_targets(&fit, dataset.first_target_index, dataset.targets.len())?;
                    (
                        GreyInformedLossConfig::new(cfg.xi, cfg.grey_term.to_lib(), g)?,
                        Some(fit),
                    )
                }
                Model::Fginn => {
                    let (ord, _) = resolve_order(cfg, &train_series)?;
                    let fit = fit_tmfgm(&train_series, ord)?;
                    let g = make_grey_targets(&fit, dataset.first_target_index, dataset.targets.len())?;
                    (
                        GreyInformedLossConfig::new(cfg.xi, cfg.grey_term.to_lib(), g)?,
                        Some(fit),
                    )
                }
                _ => unreachable!(),
            };
            let train_cfg = TrainConfig {
                learning_rate: cfg.lr,
                iterations: cfg.iters,
                normalization: Normalization::MinMax,
                hidden: vec![10],
                activation: Activation::Tanh,
            };
            let trained = train(&dataset, &loss_cfg, &train_cfg, cfg.seed)?;
            let fitted_vals = trained.fitted(&dataset)?;
            let forecasts = if horizon > 0 {
                forecast(&trained, &train_series, cfg.window, horizon)?.into_values()
            } else {
                Vec::new()
            };
            Ok(ModelOutcome {
                model,
                grey_params: grey_fit.as_ref().map(|f| (f.params.a, f.params.b)),
                order: grey_fit.as_ref().and_then(|f| f.order).map(|o| (o.alpha(), o.beta())),
                fitted: fitted_vals
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| (dataset.first_target_index + i, v))
                    .collect(),
                forecasts,
                loss_trace: trained.loss_trace,
            })
        }
    }
}

fn params_csv(cfg: &RunConfig, outcome: &ModelOutcome) -> String {
    let mut rows = vec![("model".to_string(), outcome.model.name().to_string())];
    if let Some((a, b)) = outcome.grey_params {
        rows.push(("a".into(), fmt_f64(a)));
        rows.push(("b".into(), fmt_f64(b)));
    }
    if let Some((alpha, beta)) = outcome.order {
        rows.push(("alpha".into(), fmt_f64(alpha)));
        rows.push(("beta".into(), fmt_f64(beta)));
    }
    if matches!(outcome.model, Model::Mlp | Model::Ginn | Model::Fginn) {
        rows.push(("window".into(), cfg.window.to_string()));
        rows.push(("xi".into(), fmt_f64(cfg.xi)));
        rows.push(("grey_term".into(), format!("{:?}", cfg.grey_term).to_lowercase()));
        rows.push(("lr".into(), fmt_f64(cfg.lr)));
        rows.push(("iters".into(), cfg.iters.to_string()));
        rows.push(("seed".into(), cfg.seed.to_string()));
    }
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn trace_csv(trace: &[f64]) -> String {
    let mut out = String::from("iteration,loss\n");
    for (i, l) in trace.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, fmt_f64(*l)));
    }
    out
}

pub fn cmd_fit(cfg: &RunConfig) -> CliResult<()> {
    let model = cfg.require_model()?;
    let data = read_series(cfg.require_data()?)?;
    let outcome = run_model(model, &data, cfg, 0)?;

    let mut predictions = String::from("label,actual,fitted\n");
    for &(k, v) in &outcome.fitted {
        predictions.push_str(&format!(
            "{},{},{}\n",
            data.labels[k - 1],
            fmt_f64(data.series.at(k)),
            fmt_f64(v)
        ));
    }
    let mut files = vec![
        OutFile {
            name: "params.csv".into(),
            content: params_csv(cfg, &outcome),
        },
        OutFile {
            name: "predictions.csv".into(),
            content: predictions,
        },
    ];
    if !outcome.loss_trace.is_empty() {
        files.push(OutFile {
            name: "trace.csv".into(),
            content: trace_csv(&outcome.loss_trace),
        });
    }
    write_all(&cfg.out, &files)
}

pub fn cmd_forecast(cfg: &RunConfig) -> CliResult<()> {
    let model = cfg.require_model()?;
    let horizon = cfg
        .horizon
        .ok_or_else(|| CliError::Usage("--horizon is required".into()))?;
    if horizon < 1 {
        return Err(CliError::Usage("horizon must be at least 1".into()));
    }
    let data = read_series(cfg.require_data()?)?;
    let (_, split) = train_slice(&data, cfg)?;
    let outcome = run_model(model, &data, cfg, horizon)?;

    let labels = continue_labels(&data.labels[..split], split, horizon);
    let mut predictions = String::from("label,predicted\n");
    for (label, v) in labels.iter().zip(&outcome.forecasts) {
        predictions.push_str(&format!("{label},{}\n", fmt_f64(*v)));
    }
    write_all(
        &cfg.out,
        &[OutFile {
            name: "predictions.csv".into(),
            content: predictions,
        }],
    )
}

fn metric_row(name: &str, r: &MetricReport) -> Vec<String> {
    vec![
        name.to_string(),
        fmt_f64(r.mape),
        fmt_f64(r.mse),
        fmt_f64(r.mae),
        fmt_f64(r.rmse),
    ]
}

fn evaluate_one(model: Model, data: &SeriesFile, cfg: &RunConfig) -> CliResult<(ModelOutcome, MetricReport)> {
    let n = data.series.len();
    let split = cfg
        .train_split
        .ok_or_else(|| CliError::Usage("--train-split is required for evaluation".into()))?;
    if split >= n {
        return Err(CliError::Usage(format!(
            "train split {split} leaves no test points in a series of length {n}"
        )));
    }
    let horizon = n - split;
    let outcome = run_model(model, data, cfg, horizon)?;
    let actual = TimeSeries::new(data.series.values()[split..].to_vec()).map_err(CliError::from)?;
    let predicted = TimeSeries::new(outcome.forecasts.clone()).map_err(CliError::from)?;
    let report = greyinn::evaluate(&actual, &predicted).map_err(CliError::from)?;
    Ok((outcome, report))
}

pub fn cmd_evaluate(cfg: &RunConfig) -> CliResult<()> {
    let model = cfg.require_model()?;
    let data = read_series(cfg.require_data()?)?;
    let (_, report) = evaluate_one(model, &data, cfg)?;
    let split = cfg.train_split.unwrap();

    let mut metrics = String::from("model,MAPE,MSE,MAE,RMSE\n");
    metrics.push_str(&metric_row(model.name(), &report).join(","));
    metrics.push('\n');

    let mut per_point = String::from("label,actual,predicted,abs_error\n");
    for (i, p) in report.per_point.iter().enumerate() {
        per_point.push_str(&format!(
            "{},{},{},{}\n",
            data.labels[split + i],
            fmt_f64(p.actual),
            fmt_f64(p.predicted),
            fmt_f64(p.abs_error)
        ));
    }

    println!(
        "{}",
        render_table(
            &["model", "MAPE", "MSE", "MAE", "RMSE"],
            &[metric_row(model.name(), &report)],
        )
    );

    write_all(
        &cfg.out,
        &[
            OutFile {
                name: "metrics.csv".into(),
                content: metrics,
            },
            OutFile {
                name: "predictions.csv".into(),
                content: per_point,
            },
        ],
    )
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    models: Vec<&'static str>,
    data: String,
    train_split: usize,
    window: usize,
    xi: f64,
    lr: f64,
    iterations: usize,
    grey_term: &'a str,
    seed: u64,
    alpha: String,
    beta: String,
    pso_particles: usize,
    pso_iterations: usize,
}

pub fn cmd_compare(cfg: &RunConfig, svg: bool) -> CliResult<()> {
    let data = read_series(cfg.require_data()?)?;
    let split = cfg
        .train_split
        .ok_or_else(|| CliError::Usage("--train-split is required for comparison".into()))?;

    let mut rows = Vec::new();
    let mut outcomes = Vec::new();
    for model in Model::ALL {
        let (outcome, report) = evaluate_one(model, &data, cfg)?;
        rows.push(metric_row(model.name(), &report));
        outcomes.push(outcome);
    }

    let mut metrics = String::from("model,MAPE,MSE,MAE,RMSE\n");
    for row in &rows {
        metrics.push_str(&row.join(","));
        metrics.push('\n');
    }

    let manifest = Manifest {
        command: "compare",
        models: Model::ALL.iter().map(|m| m.name()).collect(),
        data: cfg.require_data()?.display().to_string(),
        train_split: split,
        window: cfg.window,
        xi: cfg.xi,
        lr: cfg.lr,
        iterations: cfg.iters,
        grey_term: match cfg.grey_term {
            GreyTerm::Mae => "mae",
            GreyTerm::Mse => "mse",
        },
        seed: cfg.seed,
        alpha: cfg.alpha.to_string(),
        beta: cfg.beta.to_string(),
        pso_particles: cfg.pso_particles,
        pso_iterations: cfg.pso_iterations,
    };
    let manifest_toml = toml::to_string(&manifest)
        .map_err(|e| CliError::Numeric(format!("manifest serialization failed: {e}")))?;

    // Combined per-point predictions over the test range.
    let n = data.series.len();
    let mut predictions = String::from("label,actual");
    for m in Model::ALL {
        predictions.push(',');
        predictions.push_str(m.name());
    }
    predictions.push('\n');
    for (i, k) in (split + 1..=n).enumerate() {
        predictions.push_str(&format!("{},{}", data.labels[k - 1], fmt_f64(data.series.at(k))));
        for outcome in &outcomes {
            predictions.push_str(&format!(",{}", fmt_f64(outcome.forecasts[i])));
        }
        predictions.push('\n');
    }

    println!(
        "{}",
        render_table(&["model", "MAPE", "MSE", "MAE", "RMSE"], &rows)
    );
    println!("note: comparison covers the five models implemented by this toolkit.");

    let mut files = vec![
        OutFile {
            name: "metrics.csv".into(),
            content: metrics,
        },
        OutFile {
            name: "predictions.csv".into(),
            content: predictions,
        },
        OutFile {
            name: "manifest.toml".into(),
            content: manifest_toml,
        },
    ];
    if svg {
        let mut chart = vec![ChartSeries {
            name: "actual".into(),
            points: (1..=n).map(|k| (k, data.series.at(k))).collect(),
        }];
        for outcome in &outcomes {
            chart.push(ChartSeries {
                name: outcome.model.name().into(),
                points: outcome
                    .forecasts
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (split + 1 + i, v))
                    .collect(),
            });
        }
        files.push(OutFile {
            name: "chart.svg".into(),
            content: render_chart(&chart),
        });
    }
    write_all(&cfg.out, &files)
}

pub fn cmd_search_order(cfg: &RunConfig) -> CliResult<()> {
    let data = read_series(cfg.require_data()?)?;
    let (train_series, _) = train_slice(&data, cfg)?;
    let (ord, result) = select_order(&train_series, &pso_config(cfg))?;

    let order_csv = format!(
        "alpha,beta,fitness,evaluations\n{},{},{},{}\n",
        fmt_f64(ord.alpha()),
        fmt_f64(ord.beta()),
        fmt_f64(result.best_fitness),
        result.evaluations
    );
    let mut trace = String::from("iteration,best_fitness\n");
    for (i, f) in result.trace.iter().enumerate() {
        trace.push_str(&format!("{},{}\n", i + 1, fmt_f64(*f)));
    }
    println!(
        "selected order: alpha = {}, beta = {} (in-sample MAPE {})",
        fmt_f64(ord.alpha()),
        fmt_f64(ord.beta()),
        fmt_f64(result.best_fitness)
    );
    write_all(
        &cfg.out,
        &[
            OutFile {
                name: "order.csv".into(),
                content: order_csv,
            },
            OutFile {
                name: "trace.csv".into(),
                content: trace,
            },
        ],
    )
}

/// Generator for the seeded test-data kinds.
pub fn synth_series(
    kind: &str,
    c: f64,
    q: f64,
    sigma: f64,
    n: usize,
    seed: u64,
) -> CliResult<Vec<f64>> {
    if n < 1 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if c <= 0.0 {
        return Err(CliError::Usage("--c must be positive".into()));
    }
    let mut rng = greyinn::rng::SplitMix64::new(seed);
    let values = match kind {
        "constant" => vec![c; n],
        "geometric" => (0..n).map(|k| c * q.powi(k as i32)).collect(),
        "noisy-exp" => (0..n)
            .map(|k| c * q.powi(k as i32) * (1.0 + sigma * rng.next_gaussian()))
            .collect(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown synth kind {other:?} (expected constant, geometric, or noisy-exp)"
            )))
        }
    };
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(CliError::Numeric(
            "generated series left the positive range; reduce sigma or q".into(),
        ));
    }
    Ok(values)
}

pub fn cmd_synth(
    kind: &str,
    c: f64,
    q: f64,
    sigma: f64,
    n: usize,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    let values = synth_series(kind, c, q, sigma, n, seed)?;
    let mut csv = String::from("label,value\n");
    for (k, v) in values.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", k + 1, fmt_f64(*v)));
    }
    write_all(
        out,
        &[OutFile {
            name: "data.csv".into(),
            content: csv,
        }],
    )
}
