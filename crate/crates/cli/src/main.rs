use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use selectica::oracle::{oracle_coverage_check, oracle_halfwidth, OracleSpec};
use selectica::simlab::{build_model, format_float, run_grid, summarize, width_ratios, write_csv, RunRecord};
use selectica::{ExperimentConfig, Method, Signal, Vignette};

mod args;
mod demo;

use args::{Cli, Command, GridArgs, ModelArgs, OracleArgs};

/// Bad flag values: reported like clap's own usage errors.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::V1(a) => grid(Vignette::V1, a),
        Command::V2(a) => grid(Vignette::V2, a),
        Command::V3(a) => grid(Vignette::V3, a),
        Command::Oracle(a) => oracle(a),
        Command::Demo(a) => demo::run(&a),
    }
}

fn experiment(vignette: Vignette, m: &ModelArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(vignette, m.n, m.p.unwrap_or(m.n), m.noise.scales(vignette));
    let default_mean = if vignette == Vignette::V1 { 0.0 } else { 50.0 / 7.0 };
    let mean = m.signal_mean.unwrap_or(default_mean);
    cfg.signal = if mean == 0.0 {
        Signal::Null
    } else {
        Signal::Exponential {
            mean,
            sparsity: m.sparsity,
        }
    };
    cfg.rho = m.rho;
    cfg.sigma = m.sigma;
    cfg.seed = m.seed;
    cfg.mu_equals_phi = m.mu_equals_phi;
    cfg.cv_folds = m.cv_folds;
    cfg.threads = m.threads;
    cfg
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn grid(vignette: Vignette, a: GridArgs) -> Result<()> {
    let mut cfg = experiment(vignette, &a.model);
    cfg.alpha = a.alpha;
    cfg.replicates = a.reps;
    cfg.lambda_grid = a.lambda_grid;
    if let Some(methods) = a.methods {
        cfg.methods = methods;
    }
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;

    let records = run_grid(&cfg)?;
    write_csv(create(&a.out)?, &records).with_context(|| format!("cannot write {}", a.out.display()))?;
    print_summary(&records)?;
    Ok(())
}

fn print_summary(records: &[RunRecord]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<4} {:<11} {:>5} {:>5} {:>9} {:>6} {:>6} {:>8} {:>6} {:>10} {:>9}",
        "vig", "method", "n", "p", "c", "alpha", "ok", "infinite", "failed", "mean_width", "coverage"
    )?;
    let summaries = summarize(records);
    for s in &summaries {
        writeln!(
            out,
            "{:<4} {:<11} {:>5} {:>5} {:>9.4} {:>6} {:>6} {:>8} {:>6} {:>10.4} {:>9.4}",
            s.vignette.as_str(),
            s.method.as_str(),
            s.n,
            s.p,
            s.c,
            s.alpha,
            s.ok,
            s.infinite,
            s.empty_selection + s.degenerate,
            s.mean_width,
            s.coverage
        )?;
    }
    for (num, den) in [
        (Method::InferAndWiden, Method::Fission),
        (Method::InferAndWiden, Method::Rcsi),
        (Method::Classical, Method::DataThinning),
    ] {
        for r in width_ratios(&summaries, num, den) {
            writeln!(
                out,
                "width ratio {num}/{den} at c = {}: {}{}",
                format_float(r.c),
                format_float(r.ratio),
                if r.infinite { " (infinite-width cell)" } else { "" }
            )?;
        }
    }
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<()> {
    let cfg = experiment(a.vignette, &a.model);
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    let model = build_model(&cfg)?;
    let mut rows = Vec::new();
    for &c in &cfg.c_grid {
        let spec = OracleSpec::from_model(
            a.vignette,
            &model,
            cfg.cv_folds,
            c,
            cfg.sigma,
            a.m,
            a.coverage_grid.clone(),
        )?;
        spec.validate().map_err(|e| UsageError(e.to_string()))?;
        let curve = oracle_halfwidth(&spec, cfg.seed)?;
        let check = oracle_coverage_check(&spec, &curve, cfg.seed)?;
        rows.push((c, curve, check));
    }

    let mut w = create(&a.out)?;
    let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "vignette,n,p,c,level,halfwidth,width,coverage,m,skipped")?;
        for (c, curve, check) in &rows {
            for (k, &level) in curve.levels.iter().enumerate() {
                let h = curve.halfwidths[k];
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{}",
                    a.vignette,
                    cfg.n,
                    cfg.dim(),
                    format_float(*c),
                    format_float(level),
                    format_float(h),
                    format_float(2.0 * h),
                    format_float(check.coverage[k]),
                    a.m,
                    curve.skipped
                )?;
            }
        }
        w.flush()
    };
    write(&mut w).with_context(|| format!("cannot write {}", a.out.display()))?;

    let mut out = std::io::stdout().lock();
    for (c, curve, check) in &rows {
        for (k, level) in curve.levels.iter().enumerate() {
            writeln!(
                out,
                "c = {:.4}  level {level:.3}: oracle width {:.4}, fresh coverage {:.4}",
                c,
                2.0 * curve.halfwidths[k],
                check.coverage[k]
            )?;
        }
    }
    Ok(())
}
