use std::fs::File;
use std::io::BufReader;

use degcorr::degree_sequences::sample_iid_degrees;
use degcorr::distributions::LimitAnnr;
use degcorr::experiments::{
    clt_experiment, ecm_cm_gap, presence_experiment, run_ensemble, with_threads, CltConfig,
    EnsembleConfig, GapConfig, Model, PresenceConfig,
};
use degcorr::graphs::{pair_stubs, repeated_cm};
use degcorr::measures::mixing_curves;
use degcorr::seeding::stream;
use degcorr::{DegreeSequence, FloorParetoLaw, MeasureKind, MultiGraph};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    CltArgs, Cli, Command, EnsembleArgs, Format, GapArgs, GenerateArgs, LimitsArgs, MeasureArgs,
    PresenceArgs,
};
use crate::config::{flag_table, resolve, RunOptions, Table};
use crate::output::{emit_csv, emit_json, metadata, runtime};
use crate::CliError;

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Limits(a) => limits(a),
        Command::Generate(a) => generate(a),
        Command::Measure(a) => measure(a),
        Command::Ensemble(a) => ensemble(a),
        Command::Presence(a) => presence(a),
        Command::Clt(a) => clt(a),
        Command::Gap(a) => gap(a),
    }
}

fn table(v: Value) -> Table {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("literal tables only"),
    }
}

fn in_pool<T: Send>(
    threads: Option<usize>,
    op: impl FnOnce() -> degcorr::Result<T> + Send,
) -> Result<T, CliError> {
    Ok(match threads {
        Some(t) => with_threads(t, op)??,
        None => op()?,
    })
}

#[derive(Debug, Serialize)]
struct LimitRow {
    gamma: f64,
    nu_ratio: Option<f64>,
    limit_annr: f64,
    error_bound: f64,
    terms: u64,
    converged: bool,
}

/// Renders a limit known to lie in `[value, value + bound]`. When the
/// interval pins six decimals its midpoint is printed; otherwise the lower
/// end is cut to the decimals the bound supports and marked with `±`.
fn render_limit(value: f64, bound: f64, converged: bool) -> String {
    if converged && bound <= 1e-6 {
        return format!("{:.6}", value + 0.5 * bound);
    }
    let digits = (-bound.log10()).floor().clamp(1.0, 6.0) as usize;
    let scale = 10f64.powi(digits as i32);
    format!("{:.*}±", digits, (value * scale).floor() / scale)
}

fn limits(a: LimitsArgs) -> Result<(), CliError> {
    let options = RunOptions {
        threads: None,
        format: a.format,
        out: a.out.clone(),
    };
    let meta = metadata(
        "limits",
        &json!({"gamma": a.gamma, "tol": a.tol, "max_terms": a.max_terms}),
        &options,
    );
    let mut rows = Vec::new();
    for &g in &a.gamma {
        let law = FloorParetoLaw::new(g)?;
        let (limit, converged) = match law.limit_annr_capped(a.tol, a.max_terms) {
            Ok(l) => (l, true),
            Err(degcorr::Error::PrecisionUnreachable {
                achieved,
                value,
                terms,
                ..
            }) => (
                LimitAnnr {
                    value,
                    error_bound: achieved,
                    terms,
                },
                false,
            ),
            Err(e) => return Err(e.into()),
        };
        rows.push(LimitRow {
            gamma: g,
            nu_ratio: law.moments().ratio(),
            limit_annr: limit.value,
            error_bound: limit.error_bound,
            terms: limit.terms,
            converged,
        });
    }
    match a.format {
        Format::Json => emit_json(&meta, &options, &rows),
        Format::Csv => emit_csv(&meta, &options, |w| {
            writeln!(w, "gamma, nu_ratio, limit_annr").map_err(runtime)?;
            for r in &rows {
                let ratio = r.nu_ratio.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"));
                let value = render_limit(r.limit_annr, r.error_bound, r.converged);
                writeln!(w, "{}, {ratio}, {value}", r.gamma).map_err(runtime)?;
            }
            Ok(())
        }),
    }
}

fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let seed = a.seed.unwrap_or_else(|| {
        let s: u64 = rand::random();
        eprintln!("seed: {s}");
        s
    });
    let mut rng = stream(seed);
    let seq = match &a.degrees_file {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", path.display())))?;
            DegreeSequence::read_from(BufReader::new(file))?.0
        }
        None => {
            let (Some(n), Some(gamma)) = (a.n, a.gamma) else {
                return Err(CliError::Usage(
                    "generate needs --n and --gamma, or --degrees-file".into(),
                ));
            };
            let law = FloorParetoLaw::new(gamma)?;
            if a.model == crate::args::ModelArg::Rcm {
                EnsembleConfig::new(gamma, n, 1, seed)
                    .with_model(Model::Rcm)
                    .validate()?;
            }
            sample_iid_degrees(n, &law, &mut rng)?
        }
    };
    let graph = match Model::from(a.model) {
        Model::Cm => MultiGraph::from_matching(&pair_stubs(&seq, &mut rng)?),
        Model::Ecm => MultiGraph::from_matching(&pair_stubs(&seq, &mut rng)?)
            .erase()
            .to_multigraph(),
        Model::Rcm => repeated_cm(&seq, &mut rng, a.max_attempts)?
            .graph
            .to_multigraph(),
    };
    let options = RunOptions {
        threads: None,
        format: Format::Csv,
        out: a.out.clone(),
    };
    let config = json!({
        "n": seq.len(),
        "gamma": a.gamma,
        "model": Model::from(a.model),
        "seed": seed,
        "degrees_file": a.degrees_file,
        "max_attempts": a.max_attempts,
    });
    let meta = metadata("generate", &config, &options);
    emit_csv(&meta, &options, |w| {
        graph.write_edge_list(w, Some(seed)).map_err(CliError::from)
    })
}

fn measure(a: MeasureArgs) -> Result<(), CliError> {
    let file = File::open(&a.input)
        .map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", a.input.display())))?;
    let graph = MultiGraph::read_edge_list(BufReader::new(file)).map_err(|e| match e {
        degcorr::Error::Parse { .. } => {
            CliError::Usage(format!("{}: {e}", a.input.display()))
        }
        other => other.into(),
    })?;
    let kind = MeasureKind::from(a.measure);
    let curve = mixing_curves(&graph).get(kind).clone();
    let options = RunOptions {
        threads: None,
        format: Format::Csv,
        out: a.out.clone(),
    };
    let meta = metadata(
        "measure",
        &json!({"input": a.input, "measure": kind}),
        &options,
    );
    emit_csv(&meta, &options, |w| curve.write_csv(w).map_err(CliError::from))
}

fn ensemble(a: EnsembleArgs) -> Result<(), CliError> {
    let mut flags = flag_table(&a);
    if let Some(m) = a.model {
        flags.insert("model".into(), json!(Model::from(m)));
    }
    if !a.measures.is_empty() {
        let kinds: Vec<MeasureKind> = a.measures.iter().map(|&m| m.into()).collect();
        flags.insert("measures".into(), json!(kinds));
    }
    let defaults = table(json!({
        "gamma": 2.5,
        "n": 100_000,
        "replicas": 100,
        "model": "cm",
        "measures": ["annd", "annr"],
        "max_attempts": degcorr::graphs::DEFAULT_MAX_ATTEMPTS,
    }));
    let r = resolve::<EnsembleConfig>(&a.run, defaults, flags)?;
    r.config.validate()?;
    let meta = metadata("ensemble", &r.config, &r.options);
    let summary = in_pool(r.options.threads, || run_ensemble(&r.config))?;
    if !summary.failed_replicas.is_empty() {
        eprintln!(
            "{} of {} replicas failed to produce a simple graph",
            summary.failed_replicas.len(),
            r.config.replicas
        );
    }
    match r.options.format {
        Format::Json => emit_json(&meta, &r.options, &summary),
        Format::Csv => emit_csv(&meta, &r.options, |w| summary.write_csv(w).map_err(CliError::from)),
    }
}

fn presence(a: PresenceArgs) -> Result<(), CliError> {
    let defaults = table(json!({
        "gamma": 2.5,
        "ns": [100_000],
        "exponents": [0.2, 0.4],
        "replicas": 200,
    }));
    let r = resolve::<PresenceConfig>(&a.run, defaults, flag_table(&a))?;
    let meta = metadata("presence", &r.config, &r.options);
    let rows = in_pool(r.options.threads, || presence_experiment(&r.config))?;
    match r.options.format {
        Format::Json => emit_json(&meta, &r.options, &rows),
        Format::Csv => emit_csv(&meta, &r.options, |w| {
            writeln!(w, "n,a,k,all_present_fraction,k_present_fraction,replicas").map_err(runtime)?;
            for row in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    row.n, row.a, row.k, row.all_present_fraction, row.k_present_fraction, row.replicas
                )
                .map_err(runtime)?;
            }
            Ok(())
        }),
    }
}

fn clt(a: CltArgs) -> Result<(), CliError> {
    let defaults = table(json!({"gamma": 1.5, "n": 100_000, "replicas": 1000, "k": 1}));
    let r = resolve::<CltConfig>(&a.run, defaults, flag_table(&a))?;
    let meta = metadata("clt", &r.config, &r.options);
    let report = in_pool(r.options.threads, || clt_experiment(&r.config))?;
    eprintln!(
        "hill_index={} theoretical_index={} excluded={}",
        report.hill_index.map_or_else(|| "-".into(), |h| h.to_string()),
        report.theoretical_index,
        report.excluded
    );
    match r.options.format {
        Format::Json => emit_json(&meta, &r.options, &report),
        Format::Csv => emit_csv(&meta, &r.options, |w| {
            writeln!(w, "sample,raw,rescaled").map_err(runtime)?;
            for (i, (raw, rescaled)) in report.raw.iter().zip(&report.rescaled).enumerate() {
                writeln!(w, "{i},{raw},{rescaled}").map_err(runtime)?;
            }
            Ok(())
        }),
    }
}

fn gap(a: GapArgs) -> Result<(), CliError> {
    let defaults = table(json!({"gamma": 2.5, "n": 100_000, "replicas": 50, "k": 1}));
    let r = resolve::<GapConfig>(&a.run, defaults, flag_table(&a))?;
    let meta = metadata("gap", &r.config, &r.options);
    let report = in_pool(r.options.threads, || ecm_cm_gap(&r.config))?;
    eprintln!(
        "threshold={} annd_fraction_exceeding={} annr_fraction_exceeding={} median_annd_gap={} median_annd_cm={}",
        report.threshold,
        report.annd_fraction_exceeding,
        report.annr_fraction_exceeding,
        report.median_annd_gap,
        report.median_annd_cm
    );
    match r.options.format {
        Format::Json => emit_json(&meta, &r.options, &report),
        Format::Csv => emit_csv(&meta, &r.options, |w| {
            writeln!(w, "replica,annd_cm,annd_ecm,annd_gap,annr_cm,annr_ecm,annr_gap")
                .map_err(runtime)?;
            for i in 0..report.annd_gaps.len() {
                writeln!(
                    w,
                    "{i},{},{},{},{},{},{}",
                    report.annd_cm[i],
                    report.annd_ecm[i],
                    report.annd_gaps[i],
                    report.annr_cm[i],
                    report.annr_ecm[i],
                    report.annr_gaps[i]
                )
                .map_err(runtime)?;
            }
            Ok(())
        }),
    }
}
