//! One worked replicate, printed step by step.

use anyhow::{anyhow, Result};

use selectica::lasso_dt::{classical_interval_v3, dt_interval, selected_target};
use selectica::max_contrast::{classical_interval_v2, iw_interval_v2, iw_tuning_v2, rcsi_details};
use selectica::selection::{contrasts, select_v1, select_v2, select_v3, LambdaRule};
use selectica::simlab::{build_model, DataModel};
use selectica::winners_curse::{
    classical_interval_v1, fission_interval_v1, gauss_thin_interval_v1, iw_interval_v1, iw_tuning_v1,
};
use selectica::{ExperimentConfig, Interval, IwOutcome, RngStream, Vignette};

use crate::args::DemoArgs;

const SIGMA: f64 = 1.0;

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3}")).collect();
    format!("[{}]", parts.join(", "))
}

fn show(name: &str, iv: selectica::Result<Interval>, target: f64) {
    match iv {
        Ok(iv) => println!(
            "  {name:<11} [{:.4}, {:.4}]  width {:.4}  covers target: {}",
            iv.lo,
            iv.hi,
            iv.width(),
            iv.contains(target)
        ),
        Err(e) => println!("  {name:<11} no interval: {e}"),
    }
}

fn show_tuning(t: &IwOutcome) {
    match t {
        IwOutcome::Tuned(t) => println!(
            "infer-and-widen tuning: eta {:.4}, nu {:.3e}, adjusted level {:.3e}",
            t.eta, t.nu, t.adjusted_level
        ),
        IwOutcome::InfiniteWidth { eta, nu, ln_level } => println!(
            "infer-and-widen tuning: eta {eta:.4}, nu {nu:.3e}, ln level {ln_level:.2} (infinite width)"
        ),
    }
}

pub fn run(a: &DemoArgs) -> Result<()> {
    let v = a.vignette;
    let n = a.n.unwrap_or(if v == Vignette::V3 { 40 } else { 10 });
    let p = a.p.unwrap_or(8);
    let c = a.c.unwrap_or(if v == Vignette::V3 { 1.0 } else { 1.5f64.sqrt() });
    let mut cfg = ExperimentConfig::new(v, n, p, vec![c]);
    cfg.seed = a.seed;
    cfg.alpha = a.alpha;
    cfg.sigma = SIGMA;
    cfg.validate().map_err(|e| anyhow!(e))?;
    let model = build_model(&cfg)?;
    let y = model.draw(SIGMA, &mut RngStream::new(a.seed, 0, "data"))?;
    let mut stream = RngStream::new(a.seed, 0, "cell0/select");

    println!("vignette {v}, n = {n}, c = {c:.4}, alpha = {}, sigma = {SIGMA}, seed = {}", a.alpha, a.seed);
    match v {
        Vignette::V1 => demo_v1(&y, &model, c, a.alpha, a.seed, &mut stream),
        Vignette::V2 => demo_v2(&y, &model, c, a.alpha, &mut stream),
        Vignette::V3 => demo_v3(&y, &model, c, a.alpha, &cfg, &mut stream),
    }
}

fn demo_v1(y: &[f64], model: &DataModel, c: f64, alpha: f64, seed: u64, s: &mut RngStream) -> Result<()> {
    println!("Y     = {}", fmt_vec(y));
    let out = select_v1(y, c, s)?;
    let i = out.index();
    let target = model.mu[i];
    println!("zeta  = {}", fmt_vec(&out.zeta));
    println!(
        "selected index {i} (0-based): Y + zeta = {:.4}, sign(zeta) = {:+}, target mu = {target}",
        y[i] + out.zeta[i],
        out.zeta[i].signum()
    );
    let side = if out.zeta[i] > 0.0 { "(-inf, cut]" } else { "[cut, inf)" };
    println!("fission conditions on Y + zeta and the signs: Y_i truncated to {side}, cut = {:.4}", y[i] + out.zeta[i]);
    show_tuning(&iw_tuning_v1(alpha, y.len(), c)?);
    println!("intervals:");
    show("classical", classical_interval_v1(y, &out, alpha, SIGMA), target);
    show("iw", iw_interval_v1(y, &out, alpha, c, SIGMA), target);
    show("fission", fission_interval_v1(y, &out, alpha, c, SIGMA), target);
    let mut g = RngStream::new(seed, 0, "cell0/gauss");
    let (gout, giv) = gauss_thin_interval_v1(y, c, SIGMA, alpha, &mut g)?;
    println!("Gaussian-rule selection (own noise): index {}", gout.index());
    show("gauss_thin", Ok(giv), model.mu[gout.index()]);
    Ok(())
}

fn demo_v2(y: &[f64], model: &DataModel, c: f64, alpha: f64, s: &mut RngStream) -> Result<()> {
    let x = model.x.as_ref().ok_or_else(|| anyhow!("design missing"))?;
    let z = contrasts(x, y);
    println!("X'Y   = {}", fmt_vec(&z));
    let out = select_v2(y, x, c, s)?;
    let j = out.index();
    let target = contrasts(x, &model.mu)[j];
    println!("zeta  = {}", fmt_vec(&out.zeta));
    println!(
        "selected column {j} (0-based): X_j'Y + zeta_j = {:.4}, delta = {:+}, target X_j'mu = {target:.4}",
        z[j] + out.zeta[j],
        out.sign().unwrap_or(f64::NAN)
    );
    show_tuning(&iw_tuning_v2(alpha, x.ncols(), c)?);
    match rcsi_details(y, x, &out, alpha, SIGMA) {
        Ok(d) => println!(
            "conditioning record: residual W has norm {:.4}; statistic {:.4} truncated to [{:.4}, {:.4}]",
            d.event.w.iter().map(|w| w * w).sum::<f64>().sqrt(),
            d.statistic,
            d.limits.v_min,
            d.limits.v_max
        ),
        Err(e) => println!("conditioning record unavailable: {e}"),
    }
    println!("intervals:");
    show("classical", classical_interval_v2(y, x, &out, alpha, SIGMA), target);
    show("iw", iw_interval_v2(y, x, &out, alpha, c, SIGMA), target);
    show("rcsi", rcsi_details(y, x, &out, alpha, SIGMA).map(|d| d.interval), target);
    Ok(())
}

fn demo_v3(
    y: &[f64],
    model: &DataModel,
    c: f64,
    alpha: f64,
    cfg: &ExperimentConfig,
    s: &mut RngStream,
) -> Result<()> {
    let x = model.x.as_ref().ok_or_else(|| anyhow!("design missing"))?;
    println!("Y     = {}", fmt_vec(y));
    let out = match select_v3(y, x, c, SIGMA, s, LambdaRule::cv(cfg.cv_folds)) {
        Ok(out) => out,
        Err(e) => {
            println!("lasso selection: {e}; no inference for this replicate");
            return Ok(());
        }
    };
    let target = selected_target(x, &out.selected, &model.mu)?;
    println!("zeta  = {}", fmt_vec(&out.zeta));
    println!(
        "lasso on Y + c zeta, lambda = {:.4} by {}-fold CV: support by |beta| = {:?}",
        out.lambda.unwrap_or(f64::NAN),
        cfg.cv_folds,
        out.selected
    );
    println!("target: coefficient of column {} in the projection of mu, {target:.4}", out.selected[0]);
    println!("intervals:");
    show("classical", classical_interval_v3(y, x, &out, alpha, SIGMA), target);
    show("dt", dt_interval(y, x, &out, c, alpha, SIGMA), target);
    Ok(())
}
