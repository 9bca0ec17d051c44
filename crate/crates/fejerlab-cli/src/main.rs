mod io;

/// `println!` that stops quietly when the reader hangs up.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

use clap::{Parser, Subcommand, ValueEnum};
use fejerlab::asymptotics::{
    cluster_directions, cone_from_clusters, cone_identity_2d, maximal_opial_flat, ratio_profile,
    support_mismatches, tail_diffs,
};
use fejerlab::engine::{clipped_polygon, grid_points, grid_snapshot, maximal_set_2d, TermList};
use fejerlab::lab::{classify, ClassifyHints};
use fejerlab::sets::{ClosedConvexSet, Region};
use fejerlab::verify::{claims_for, verify_all, verify_example, ClaimStatus, VerifyReport};
use fejerlab::zoo::{ExampleId, ExampleSpec};
use fejerlab::{LabConfig, Vector};
use io::{emit, inline_or_file, read_rows, terms_json, write_terms_csv, CliError, CliResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::ExitCode;

const SUPPORT_PROBES: usize = 64;

#[derive(Parser)]
#[command(
    name = "fejerlab",
    version,
    about = "Step halfspaces, maximal Fejer* sets and monotonicity checks for the example zoo"
)]
struct Cli {
    /// Config file; defaults to $FEJERLAB_CONFIG when set
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for concurrent verification
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the random support probes of `asymptotics`
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Examples and their registered claims
    List {
        /// Show the claims of one example
        #[arg(long)]
        claims: Option<ExampleId>,
        #[arg(long)]
        json: bool,
    },
    /// Emit the first terms of an example
    Gen {
        example: ExampleId,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Fejer, Fejer*, Opial and quasi-Fejer verdicts at sample points
    Classify {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        example: Option<ExampleId>,
        /// Term list as CSV (n, x0, x1, ...) or JSON
        #[arg(long)]
        file: Option<PathBuf>,
        /// Region JSON, inline or as a path; sample points outside it are dropped
        #[arg(long)]
        set: Option<String>,
        /// Sample points as CSV rows or a JSON array
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Intersection of the step halfplanes over a window, on a grid
    Maxset2d {
        example: ExampleId,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Direction clusters, limit cone, ratio profile and cone identity
    Asymptotics {
        example: ExampleId,
        #[arg(long)]
        horizon: Option<usize>,
        /// Also write the ratio profile as CSV (n, ratio)
        #[arg(long)]
        ratio_csv: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the registered claims of one example, or of all of them
    Verify {
        /// Example name or `all`
        target: String,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the summary table
        #[arg(long)]
        json: bool,
    },
}

fn load_config(cli: &Cli) -> CliResult<LabConfig> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("FEJERLAB_CONFIG").map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| CliError::File {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            LabConfig::parse(&text)?
        }
        None => LabConfig::default(),
    };
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn pretty(v: &impl serde::Serialize) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn cmd_list(claims: Option<ExampleId>, as_json: bool) -> CliResult<()> {
    let ids: Vec<ExampleId> = claims.map_or_else(|| ExampleId::ALL.to_vec(), |id| vec![id]);
    if as_json {
        let rows: Vec<Value> = ids
            .iter()
            .map(|&id| {
                let spec = ExampleSpec::new(id);
                json!({
                    "example": id.name(),
                    "planar": id.is_planar(),
                    "params": spec.params,
                    "claims": claims_for(id).iter().map(|c| json!({ "claim_id": c.id, "anchor": c.anchor })).collect::<Vec<_>>(),
                })
            })
            .collect();
        out!("{}", pretty(&rows)?);
        return Ok(());
    }
    for id in ids {
        let registered = claims_for(id);
        let space = if id.is_planar() {
            "plane"
        } else {
            "sequence space"
        };
        out!(
            "{:<20} {:<15} {} claims",
            id.name(),
            space,
            registered.len()
        );
        if claims.is_some() {
            for c in registered {
                out!("  {:<34} {}", c.id, c.anchor);
            }
        }
    }
    Ok(())
}

fn cmd_gen(id: ExampleId, n: usize, format: Format) -> CliResult<()> {
    let terms = ExampleSpec::new(id).terms(n);
    match format {
        Format::Csv => write_terms_csv(std::io::stdout().lock(), &terms),
        Format::Json => {
            out!("{}", serde_json::to_string(&terms_json(id.name(), &terms))?);
            Ok(())
        }
    }
}

fn default_points(id: Option<ExampleId>) -> Vec<Vector> {
    match id {
        Some(id) if !id.is_planar() => {
            let mut pts = vec![Vector::zero()];
            pts.extend((0..5).map(Vector::basis));
            pts
        }
        _ => grid_points(2.0, 5)
            .into_iter()
            .map(|(a, b)| Vector::plane(a, b))
            .collect(),
    }
}

struct ClassifyArgs {
    example: Option<ExampleId>,
    file: Option<PathBuf>,
    set: Option<String>,
    points: Option<PathBuf>,
    horizon: Option<usize>,
    report: Option<PathBuf>,
}

fn cmd_classify(args: ClassifyArgs, cfg: &LabConfig) -> CliResult<()> {
    let spec = args.example.map(ExampleSpec::new);
    let (seq, horizon): (Box<dyn fejerlab::engine::Sequence>, usize) = match (&spec, &args.file) {
        (Some(spec), _) => (
            Box::new(spec.generator.clone()),
            args.horizon.unwrap_or(cfg.horizon),
        ),
        (None, Some(path)) => {
            let terms = read_rows(path)?;
            if terms.len() < 2 {
                return Err(CliError::Usage(
                    "a term list needs at least two terms".into(),
                ));
            }
            let horizon = args.horizon.unwrap_or(cfg.horizon).min(terms.len() - 1);
            (Box::new(TermList(terms)), horizon)
        }
        (None, None) => return Err(CliError::Usage("pass --example or --file".into())),
    };
    let region = match (&args.set, &spec) {
        (Some(text), _) => Some(Region::from_json(&inline_or_file(text)?)?),
        (None, Some(spec)) => Some(spec.target.clone()),
        (None, None) => None,
    };
    let mut points = match &args.points {
        Some(path) => read_rows(path)?,
        None => default_points(args.example),
    };
    if let Some(r) = &region {
        points.retain(|y| r.contains_tol(y, cfg.zero_tol));
    }
    let hints = spec
        .as_ref()
        .map_or_else(ClassifyHints::default, |s| ClassifyHints {
            certificate: Some(s.analytic.certificate.as_ref()),
            sup_rule: s.analytic.sup_rule.clone(),
            comparators: s.analytic.comparators.clone(),
        });
    let rep = classify(seq.as_ref(), &points, horizon, &hints, cfg)?;
    emit(&pretty(&rep)?, args.report.as_deref())
}

fn cmd_maxset2d(
    id: ExampleId,
    start: usize,
    horizon: Option<usize>,
    grid: Option<usize>,
    format: Format,
    cfg: &LabConfig,
) -> CliResult<()> {
    if !id.is_planar() {
        return Err(CliError::Usage(format!("{id} is not a planar example")));
    }
    let horizon = horizon.unwrap_or(cfg.horizon);
    if start >= horizon {
        return Err(CliError::Usage("--start must be below --horizon".into()));
    }
    let grid = grid.unwrap_or(cfg.grid);
    if grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let spec = ExampleSpec::new(id);
    let region = maximal_set_2d(spec.generator.as_ref(), start, horizon)?;
    let cells = grid_snapshot(&region, cfg.extent, grid, cfg.zero_tol);
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["x", "y", "location"])?;
            for c in &cells {
                let loc = serde_json::to_value(c.location)?;
                w.write_record([
                    c.x.to_string(),
                    c.y.to_string(),
                    loc.as_str().unwrap_or_default().to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let out = json!({
                "example": id.name(),
                "start": start,
                "horizon": horizon,
                "extent": cfg.extent,
                "polygon": clipped_polygon(&region, cfg.extent),
                "cells": cells,
            });
            out!("{}", pretty(&out)?);
        }
    }
    Ok(())
}

fn cmd_asymptotics(
    id: ExampleId,
    horizon: Option<usize>,
    ratio_csv: Option<PathBuf>,
    report: Option<PathBuf>,
    cfg: &LabConfig,
) -> CliResult<()> {
    let horizon = horizon.unwrap_or(cfg.horizon);
    let spec = ExampleSpec::new(id);
    let seq = spec.generator.as_ref();
    let clusters = cluster_directions(&tail_diffs(seq, horizon), cfg.cluster_eps, cfg.min_count);
    let cone = cone_from_clusters(&clusters).ok();
    let z = spec.analytic.limit.clone();
    let cone_set = spec
        .analytic
        .limit_cone
        .clone()
        .or_else(|| cone.clone().map(ClosedConvexSet::Cone));
    let ratios = match &cone_set {
        Some(c) if spec.analytic.convergent => Some(ratio_profile(seq, c, z.as_ref(), horizon)?),
        _ => None,
    };
    let identity = match spec.limit_or_estimate(2 * horizon) {
        Some((z, _)) if id.is_planar() => match cone_identity_2d(seq, &z, horizon, cfg) {
            Ok(rep) => serde_json::to_value(rep)?,
            Err(e) => json!({ "error": e.to_string() }),
        },
        _ => Value::Null,
    };
    let opial = if id.is_planar() {
        Value::Null
    } else {
        match maximal_opial_flat(seq, horizon, cfg.cluster_eps, cfg) {
            Ok(rep) => serde_json::to_value(rep)?,
            Err(e) => json!({ "error": e.to_string() }),
        }
    };
    let support = match &cone {
        Some(k) if id.is_planar() => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let probes: Vec<Vector> = (0..SUPPORT_PROBES)
                .map(|_| Vector::from_angle(rng.random_range(0.0..TAU)))
                .collect();
            let mismatches = support_mismatches(&clusters, k, &probes, cfg.zero_tol.max(1e-9));
            json!({ "seed": cfg.seed, "probes": probes.len(), "mismatches": mismatches.iter().map(|&i| &probes[i]).collect::<Vec<_>>() })
        }
        _ => Value::Null,
    };
    if let (Some(path), Some(r)) = (&ratio_csv, &ratios) {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["n", "ratio"])?;
        for (n, v) in r.ratios.iter().enumerate() {
            w.write_record([n.to_string(), v.to_string()])?;
        }
        w.flush()?;
    }
    let out = json!({
        "example": id.name(),
        "horizon": horizon,
        "clusters": clusters,
        "cone_halfspaces": cone.as_ref().and_then(|c| c.normals().map(<[Vector]>::to_vec)),
        "ratio_profile": ratios,
        "identity": identity,
        "opial_flat": opial,
        "support_probes": support,
    });
    emit(&pretty(&out)?, report.as_deref())
}

fn status_label(s: ClaimStatus) -> &'static str {
    match s {
        ClaimStatus::Pass => "PASS",
        ClaimStatus::Fail => "FAIL",
        ClaimStatus::Inconclusive => "INCONCLUSIVE",
    }
}

fn cmd_verify(
    target: &str,
    report: Option<PathBuf>,
    as_json: bool,
    cfg: &LabConfig,
) -> CliResult<bool> {
    let reports: Vec<VerifyReport> = if target == "all" {
        verify_all(cfg)?
    } else {
        let id: ExampleId = target
            .parse()
            .map_err(|e: fejerlab::LabError| CliError::Usage(e.to_string()))?;
        vec![verify_example(id, cfg)]
    };
    let text = pretty(&reports)?;
    if let Some(path) = &report {
        emit(&text, Some(path))?;
    }
    if as_json {
        out!("{text}");
    } else {
        for r in &reports {
            out!("{} ({:.2}s)", r.example, r.wall_time);
            for c in &r.claims {
                out!("  {:<12} {}", status_label(c.status), c.claim_id);
            }
        }
        let total: usize = reports.iter().map(|r| r.claims.len()).sum();
        let failed: usize = reports
            .iter()
            .flat_map(|r| &r.claims)
            .filter(|c| c.status == ClaimStatus::Fail)
            .count();
        out!(
            "{} of {total} claims pass or are inconclusive",
            total - failed
        );
    }
    Ok(reports.iter().all(VerifyReport::passed))
}

fn run(cli: Cli) -> CliResult<bool> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::List { claims, json } => cmd_list(claims, json).map(|_| true),
        Command::Gen { example, n, format } => cmd_gen(example, n, format).map(|_| true),
        Command::Classify {
            example,
            file,
            set,
            points,
            horizon,
            report,
        } => cmd_classify(
            ClassifyArgs {
                example,
                file,
                set,
                points,
                horizon,
                report,
            },
            &cfg,
        )
        .map(|_| true),
        Command::Maxset2d {
            example,
            start,
            horizon,
            grid,
            format,
        } => cmd_maxset2d(example, start, horizon, grid, format, &cfg).map(|_| true),
        Command::Asymptotics {
            example,
            horizon,
            ratio_csv,
            report,
        } => cmd_asymptotics(example, horizon, ratio_csv, report, &cfg).map(|_| true),
        Command::Verify {
            target,
            report,
            json,
        } => cmd_verify(&target, report, json, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
