//! Batch front door: load instance files, run analyses and experiments, emit
//! machine-readable reports.
//!
//! Exit codes: 0 when every reported check passes, 2 when a report contains a
//! failed check, 1 on usage, schema, or environment errors. Every artifact
//! carries a reproducibility header (version, seed, config hash); CSV headers
//! additionally carry a timestamp comment line, which is the only
//! run-dependent byte in an artifact.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::approx::{evaluate_decision, run_approx};
use crate::benchmarks::{block_value_dists, brev, prev_exact, srev, PARTITION_ENUM_CAP};
use crate::core_tail::{
    build_split, core_decomposition_bound, core_welfare_bound_check, tail_bound_check,
    variance_bound_check, SplitMode,
};
use crate::error::{Error, Result};
use crate::gaps::{results_to_csv, run_gap_experiment, GapConfig, GapKind};
use crate::market::MarketInstance;
use crate::menu_lp::REV_LP_TYPE_CAP;
use crate::pricing::{
    bundle_combine, check_brendan, check_random_reserve_exact, check_split_per_profile,
    random_reserve_sim, shatter, PricingScheme,
};
use crate::reductions::{
    brev_joint, check_cor_bound, srev_joint, symmetrize, to_pointmass_in_sum,
};
use crate::single_item::monopoly_price;

#[derive(Parser)]
#[command(name = "simplemech", version, about = "Simple-vs-optimal mechanism revenue toolbox")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PricingCheckArg {
    Split,
    Bundle,
    Shatter,
    Brendan,
    Reserve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GapKindArg {
    #[value(name = "many_iid", alias = "many-iid")]
    ManyIid,
    #[value(name = "prev_max", alias = "prev-max")]
    PrevMax,
    Cor,
}

impl From<GapKindArg> for GapKind {
    fn from(k: GapKindArg) -> GapKind {
        match k {
            GapKindArg::ManyIid => GapKind::ManyIid,
            GapKindArg::PrevMax => GapKind::PrevMax,
            GapKindArg::Cor => GapKind::Cor,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Benchmark an instance: srev, brev, prev, optimal revenue and ratios.
    Analyze {
        /// Instance JSON file.
        #[arg(long)]
        instance: PathBuf,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        /// Seed echoed into the artifact (no randomness in this command).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Core–tail split of a single-buyer instance with its certified bounds.
    Decompose {
        #[arg(long)]
        instance: PathBuf,
        /// Threshold mode: adaptive | uniform | amplified.
        #[arg(long, default_value = "adaptive")]
        mode: String,
        /// Scale parameter c.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Amplification parameter a (amplified mode only).
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the sampling-based separate-vs-bundle decision rule.
    Approx {
        #[arg(long)]
        instance: PathBuf,
        /// Sampling accuracy parameter.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Posted-pricing checks: split | bundle | shatter | brendan | reserve.
    Pricing {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        check: PricingCheckArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo trials for simulated checks.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gap-trend experiments over an n sweep, emitting CSV.
    Gaps {
        #[arg(long, value_enum)]
        kind: GapKindArg,
        /// Comma-separated item counts, e.g. 16,64,256.
        #[arg(long, value_delimiter = ',')]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo trials for the final estimates.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Support budget controlling grid coarsening.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point-mass-in-sum and symmetrization reductions with ratio checks.
    Reduce {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Parse and execute from an explicit argument list (testable).
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(all_pass) => {
            if all_pass {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn config_hash(parts: &[String]) -> String {
    let mut hasher = DefaultHasher::new();
    for p in parts {
        p.hash(&mut hasher);
    }
    format!("{:016x}", hasher.finish())
}

fn meta(seed: u64, config: &[String]) -> serde_json::Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "config_hash": config_hash(config),
        "generated_unix": now_unix(),
    })
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => println!("{content}"),
    }
    Ok(())
}

fn json_report<T: Serialize>(meta: serde_json::Value, body: &T) -> String {
    let mut value = serde_json::to_value(body).expect("report serialization");
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("meta".into(), meta);
    }
    serde_json::to_string_pretty(&value).expect("report serialization")
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Cmd::Analyze {
            instance,
            out,
            format,
            seed,
        } => analyze_cmd(&instance, &out, format, seed),
        Cmd::Decompose {
            instance,
            mode,
            c,
            a,
            out,
            seed,
        } => decompose_cmd(&instance, &mode, c, a, &out, seed),
        Cmd::Approx {
            instance,
            epsilon,
            seed,
            out,
        } => approx_cmd(&instance, epsilon, seed, &out),
        Cmd::Pricing {
            instance,
            check,
            seed,
            trials,
            out,
        } => pricing_cmd(&instance, check, seed, trials, &out),
        Cmd::Gaps {
            kind,
            ns,
            seed,
            trials,
            budget,
            out,
        } => gaps_cmd(kind, &ns, seed, trials, budget, &out),
        Cmd::Reduce { instance, out, seed } => reduce_cmd(&instance, &out, seed),
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    label: String,
    n_items: usize,
    n_buyers: usize,
    srev: f64,
    brev: f64,
    prev: Option<f64>,
    prev_skipped_reason: Option<String>,
    rev: Option<f64>,
    rev_skipped_reason: Option<String>,
    ratio_rev_over_max_simple: Option<f64>,
    six_approx_pass: Option<bool>,
    log_bound_pass: Option<bool>,
}

fn analyze_cmd(
    instance: &Path,
    out: &Option<PathBuf>,
    format: OutFormat,
    seed: u64,
) -> Result<bool> {
    let inst = MarketInstance::load(instance)?;
    let config = vec![format!("analyze:{}", instance.display())];
    let s = srev(&inst)?.value;
    let b = brev(&inst)?.value;
    let (prev, prev_reason) = if inst.n_items() <= PARTITION_ENUM_CAP {
        (Some(prev_exact(&inst)?.0.value), None)
    } else {
        (
            None,
            Some(format!("partition enumeration capped at {PARTITION_ENUM_CAP} items")),
        )
    };
    let (rev, rev_reason) = if inst.n_buyers() != 1 {
        (None, Some("optimal revenue needs a single buyer".to_string()))
    } else {
        match inst.to_joint(REV_LP_TYPE_CAP).and_then(|j| crate::menu_lp::rev_lp(&j)) {
            Ok(menu) => (Some(menu.objective), None),
            Err(Error::SizeCap { what, size, cap }) => {
                (None, Some(format!("{what}: {size} > {cap}")))
            }
            Err(e) => return Err(e),
        }
    };
    let max_simple = s.max(b);
    let ratio = rev.map(|r| r / max_simple);
    let six = rev.map(|r| r <= 6.0 * max_simple + 1e-6);
    let log = rev.map(|r| r <= ((inst.n_items() as f64).ln() + 3.0) * s + 1e-6);
    let report = AnalyzeReport {
        label: inst.label().to_string(),
        n_items: inst.n_items(),
        n_buyers: inst.n_buyers(),
        srev: s,
        brev: b,
        prev,
        prev_skipped_reason: prev_reason,
        rev,
        rev_skipped_reason: rev_reason,
        ratio_rev_over_max_simple: ratio,
        six_approx_pass: six,
        log_bound_pass: log,
    };
    let pass = six.unwrap_or(true) && log.unwrap_or(true);
    match format {
        OutFormat::Json => write_output(out, &json_report(meta(seed, &config), &report))?,
        OutFormat::Csv => {
            let mut text = csv_header(seed, &config);
            text.push_str(
                "label,n_items,n_buyers,srev,brev,prev,rev,ratio,six_approx_pass,log_bound_pass\n",
            );
            let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            let optb = |v: Option<bool>| v.map_or(String::new(), |x| x.to_string());
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                report.label,
                report.n_items,
                report.n_buyers,
                report.srev,
                report.brev,
                opt(report.prev),
                opt(report.rev),
                opt(report.ratio_rev_over_max_simple),
                optb(report.six_approx_pass),
                optb(report.log_bound_pass),
            ));
            write_output(out, &text)?;
        }
    }
    Ok(pass)
}

#[derive(Serialize)]
struct DecomposeReport {
    mode: SplitMode,
    r_i: Vec<f64>,
    r: f64,
    t_i: Vec<f64>,
    thresholds: Vec<f64>,
    p_i: Vec<f64>,
    ly1_pass: bool,
    decomposition: crate::core_tail::CoreDecompositionReport,
    tail_bound: crate::core_tail::TailBoundReport,
    core_welfare: crate::core_tail::CoreWelfareReport,
    variance_corollary_pass: bool,
    all_pass: bool,
}

fn decompose_cmd(
    instance: &Path,
    mode: &str,
    c: f64,
    a: Option<f64>,
    out: &Option<PathBuf>,
    seed: u64,
) -> Result<bool> {
    let inst = MarketInstance::load(instance)?;
    let split_mode = match mode {
        "adaptive" => SplitMode::Adaptive { c },
        "uniform" => SplitMode::UniformCn { c },
        "amplified" => SplitMode::UniformCan {
            c,
            a: a.ok_or_else(|| Error::invalid("a", "amplified mode needs --a"))?,
        },
        other => return Err(Error::invalid("mode", format!("unknown mode {other}"))),
    };
    let config = vec![format!("decompose:{}:{mode}:{c}:{a:?}", instance.display())];
    let split = build_split(&inst, split_mode)?;
    let decomposition = core_decomposition_bound(&split, &inst)?;
    let tail_bound = tail_bound_check(&split)?;
    let brev_value = match split_mode {
        SplitMode::Adaptive { .. } => Some(brev(&inst)?.value),
        _ => None,
    };
    let core_welfare = core_welfare_bound_check(&split, brev_value)?;
    // Corollary form: Var(core_i) <= 2 t_i r_i^2 (implied by the (2t-1) bound).
    let mut variance_ok = true;
    for i in 0..split.n_items() {
        if let Some(core) = &split.core[i] {
            let report = variance_bound_check(core, split.r_i[i], split.t_i[i])?;
            let corollary = core.variance() <= 2.0 * split.t_i[i] * split.r_i[i] * split.r_i[i] + 1e-9;
            variance_ok &= report.pass && corollary;
        }
    }
    let ly1 = split.ly1_holds();
    let all_pass = ly1
        && decomposition.pass
        && decomposition.parts_pass
        && tail_bound.pass
        && core_welfare.pass
        && variance_ok;
    let report = DecomposeReport {
        mode: split_mode,
        r_i: split.r_i.clone(),
        r: split.r,
        t_i: split.t_i.clone(),
        thresholds: split.thresholds.clone(),
        p_i: split.p_i.clone(),
        ly1_pass: ly1,
        decomposition,
        tail_bound,
        core_welfare,
        variance_corollary_pass: variance_ok,
        all_pass,
    };
    write_output(out, &json_report(meta(seed, &config), &report))?;
    Ok(all_pass)
}

fn approx_cmd(instance: &Path, epsilon: f64, seed: u64, out: &Option<PathBuf>) -> Result<bool> {
    let inst = MarketInstance::load(instance)?;
    let config = vec![format!("approx:{}:{epsilon}:{seed}", instance.display())];
    let decision = run_approx(&inst, epsilon, seed)?;
    let (evaluation, eval_reason) = match evaluate_decision(&decision, &inst, epsilon) {
        Ok(eval) => (Some(eval), None),
        Err(Error::SizeCap { what, size, cap }) => (None, Some(format!("{what}: {size} > {cap}"))),
        Err(e) => return Err(e),
    };
    let pass = evaluation.as_ref().is_none_or(|e| e.pass);
    let body = json!({
        "decision": decision,
        "evaluation": evaluation,
        "evaluation_skipped_reason": eval_reason,
    });
    write_output(out, &json_report(meta(seed, &config), &body))?;
    Ok(pass)
}

fn pricing_cmd(
    instance: &Path,
    check: PricingCheckArg,
    seed: u64,
    trials: u64,
    out: &Option<PathBuf>,
) -> Result<bool> {
    let inst = MarketInstance::load(instance)?;
    let config = vec![format!("pricing:{}:{check:?}:{seed}:{trials}", instance.display())];
    let all_items: Vec<usize> = (0..inst.n_items()).collect();
    let (body, pass) = match check {
        PricingCheckArg::Split => {
            let bidders = block_value_dists(&inst, &all_items)?;
            let ok = check_split_per_profile(&bidders)?;
            (json!({ "check": "split", "bidders": bidders.len(), "pass": ok }), ok)
        }
        PricingCheckArg::Reserve => {
            let bidders = block_value_dists(&inst, &all_items)?;
            let product: f64 = bidders.iter().map(|d| d.len() as f64).product::<f64>().powi(2);
            let report = if product <= 1e6 {
                check_random_reserve_exact(&bidders)?
            } else {
                random_reserve_sim(&bidders, trials, seed)?
            };
            let ok = report.pass;
            (json!({ "check": "reserve", "report": report }), ok)
        }
        PricingCheckArg::Bundle => {
            let items = inst.single_buyer_items()?;
            let mut schemes = Vec::new();
            let mut c1 = f64::INFINITY;
            for (i, d) in items.iter().enumerate() {
                let (price, _) = monopoly_price(d);
                schemes.push(PricingScheme::new(vec![i], price)?);
                c1 = c1.min(d.pr_geq(price));
            }
            let outcome = bundle_combine(&schemes, &items, c1)?;
            let ok = outcome.exact_revenue >= outcome.guarantee - 1e-9;
            (json!({ "check": "bundle", "outcome": outcome, "pass": ok }), ok)
        }
        PricingCheckArg::Shatter => {
            let items = inst.single_buyer_items()?;
            let bundle = block_value_dists(&inst, &all_items)?.remove(0);
            let (price, _) = monopoly_price(&bundle);
            let scheme = PricingScheme::new(all_items.clone(), price)?;
            let outcome = shatter(&scheme, &items)?;
            (json!({ "check": "shatter", "scheme": scheme, "outcome": outcome, "pass": true }), true)
        }
        PricingCheckArg::Brendan => {
            let items = inst.single_buyer_items()?;
            let bundle = block_value_dists(&inst, &all_items)?.remove(0);
            let (price, _) = monopoly_price(&bundle);
            let report = check_brendan(&items, &all_items, price, 0..=3)?;
            let ok = report.pass;
            (json!({ "check": "brendan", "price": price, "report": report }), ok)
        }
    };
    write_output(out, &json_report(meta(seed, &config), &body))?;
    Ok(pass)
}

fn csv_header(seed: u64, config: &[String]) -> String {
    format!(
        "# simplemech {}\n# generated_unix: {}\n# seed: {}\n# config: {}\n",
        env!("CARGO_PKG_VERSION"),
        now_unix(),
        seed,
        config_hash(config),
    )
}

fn gaps_cmd(
    kind: GapKindArg,
    ns: &[usize],
    seed: u64,
    trials: u64,
    budget: Option<u64>,
    out: &Option<PathBuf>,
) -> Result<bool> {
    let mut cfg = GapConfig {
        final_trials: trials,
        ..GapConfig::default()
    };
    if let Some(b) = budget {
        cfg.support_budget = b;
    }
    let config = vec![format!(
        "gaps:{kind:?}:{ns:?}:{seed}:{trials}:{}",
        cfg.support_budget
    )];
    let results = run_gap_experiment(kind.into(), ns, seed, &cfg)?;
    let mut text = csv_header(seed, &config);
    text.push_str(&results_to_csv(&results));
    write_output(out, &text)?;
    Ok(true)
}

fn reduce_cmd(instance: &Path, out: &Option<PathBuf>, seed: u64) -> Result<bool> {
    let inst = MarketInstance::load(instance)?;
    if inst.n_buyers() != 1 {
        return Err(Error::Precondition("reductions need a single buyer".into()));
    }
    let config = vec![format!("reduce:{}", instance.display())];
    let joint = inst.to_joint(10_000)?;
    let srev_before = srev_joint(&joint)?;
    let brev_before = brev_joint(&joint)?;
    let ratio_before = brev_before / srev_before;

    let red = to_pointmass_in_sum(&joint)?;
    let ratio_pointmass = brev_joint(&red.d_prime)? / srev_joint(&red.d_prime)?;
    let sym = symmetrize(&red.d_prime)?;
    let ratio_sym = brev_joint(&sym)? / srev_joint(&sym)?;

    let monotone_pointmass = ratio_pointmass >= ratio_before - 1e-9;
    let monotone_sym = ratio_sym >= ratio_pointmass - 1e-9;
    let cor = if inst.n_items() >= 2 {
        Some(check_cor_bound(&joint)?)
    } else {
        None
    };
    let pass = monotone_pointmass && monotone_sym && cor.as_ref().is_none_or(|c| c.pass);
    let body = json!({
        "bundle_price": red.bundle_price,
        "ratio_before": ratio_before,
        "ratio_after_pointmass": ratio_pointmass,
        "ratio_after_symmetrize": ratio_sym,
        "monotone_pointmass": monotone_pointmass,
        "monotone_symmetrize": monotone_sym,
        "cor_bound": cor,
        "pass": pass,
    });
    write_output(out, &json_report(meta(seed, &config), &body))?;
    Ok(pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ddt_file(dir: &std::path::Path) -> PathBuf {
        let inst = MarketInstance::single_buyer(
            "ddt",
            vec![
                crate::DiscreteDist::new(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
                crate::DiscreteDist::new(vec![(1.0, 0.5), (3.0, 0.5)]).unwrap(),
            ],
        )
        .unwrap();
        let path = dir.join("ddt.json");
        std::fs::write(&path, inst.to_json()).unwrap();
        path
    }

    #[test]
    fn analyze_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let path = ddt_file(dir.path());
        let out = dir.path().join("report.json");
        let code = run_from([
            "simplemech",
            "analyze",
            "--instance",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&out).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((v["srev"].as_f64().unwrap() - 2.5).abs() <= 1e-12);
        assert!((v["brev"].as_f64().unwrap() - 2.25).abs() <= 1e-12);
        assert!((v["rev"].as_f64().unwrap() - 2.625).abs() <= 1e-6);
        assert!((v["ratio_rev_over_max_simple"].as_f64().unwrap() - 1.05).abs() <= 1e-6);
        assert_eq!(v["six_approx_pass"], true);
        assert_eq!(v["meta"]["seed"], 0);
    }

    #[test]
    fn schema_error_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"label":"bad","items":1,"buyers":1,
               "grid":[[{"support":[1.0,2.0],"probs":[0.5,0.4]}]]}"#,
        )
        .unwrap();
        let code = run_from(["simplemech", "analyze", "--instance", path.to_str().unwrap()]);
        assert_eq!(code, 1);
    }

    #[test]
    fn usage_error_exits_one() {
        assert_eq!(run_from(["simplemech", "analyze"]), 1);
        assert_eq!(run_from(["simplemech", "no-such-command"]), 1);
    }

    #[test]
    fn decompose_ddt_thresholds() {
        let dir = tempfile::tempdir().unwrap();
        let path = ddt_file(dir.path());
        let out = dir.path().join("split.json");
        let code = run_from([
            "simplemech",
            "decompose",
            "--instance",
            path.to_str().unwrap(),
            "--mode",
            "adaptive",
            "--c",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["thresholds"], json!([2.5, 2.5]));
        assert_eq!(v["all_pass"], true);
    }

    #[test]
    fn approx_ddt_chooses_separate() {
        let dir = tempfile::tempdir().unwrap();
        let path = ddt_file(dir.path());
        let out = dir.path().join("approx.json");
        let code = run_from([
            "simplemech",
            "approx",
            "--instance",
            path.to_str().unwrap(),
            "--epsilon",
            "0.1",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["decision"]["choice"], "separate");
        assert_eq!(v["evaluation"]["pass"], true);
        assert_eq!(v["meta"]["seed"], 42);
    }

    #[test]
    fn pricing_checks_run() {
        let dir = tempfile::tempdir().unwrap();
        let path = ddt_file(dir.path());
        for check in ["split", "bundle", "shatter", "brendan", "reserve"] {
            let code = run_from([
                "simplemech",
                "pricing",
                "--instance",
                path.to_str().unwrap(),
                "--check",
                check,
                "--out",
                dir.path().join(format!("{check}.json")).to_str().unwrap(),
            ]);
            assert_eq!(code, 0, "check {check}");
        }
    }

    #[test]
    fn gaps_csv_deterministic_modulo_timestamp() {
        let dir = tempfile::tempdir().unwrap();
        let out1 = dir.path().join("a.csv");
        let out2 = dir.path().join("b.csv");
        for out in [&out1, &out2] {
            let code = run_from([
                "simplemech",
                "gaps",
                "--kind",
                "cor",
                "--ns",
                "16",
                "--seed",
                "7",
                "--trials",
                "1000",
                "--out",
                out.to_str().unwrap(),
            ]);
            assert_eq!(code, 0);
        }
        let strip = |text: String| -> String {
            text.lines()
                .filter(|l| !l.starts_with("# generated_unix"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let a = strip(std::fs::read_to_string(&out1).unwrap());
        let b = strip(std::fs::read_to_string(&out2).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("cor,16,7,"));
    }

    #[test]
    fn reduce_ddt_passes() {
        let dir = tempfile::tempdir().unwrap();
        let path = ddt_file(dir.path());
        let out = dir.path().join("reduce.json");
        let code = run_from([
            "simplemech",
            "reduce",
            "--instance",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["bundle_price"], 3.0);
    }
}
