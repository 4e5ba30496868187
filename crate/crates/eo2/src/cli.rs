//! Command-line surface: analyze curve files, print the standard-block
//! catalog, enumerate strata of a genus, and run randomized
//! cross-verification of the direct construction against the closed form.
//!
//! Exit codes: 0 success/verified, 1 verification mismatch, 2 input error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::classify::{
    enumerate_strata, partition_count, verify_main, Decomposition, VerifyReport,
};
use crate::curve::{random_curve, CurveFile};
use crate::drham::build_drham;
use crate::field::FieldCtx;
use crate::gc::{gc_a_number, gc_eo_closed, gc_relations, gc_summands, upper_range, GcRelation};

#[derive(Parser)]
#[command(
    name = "eo2",
    about = "2-torsion invariants of hyperelliptic curves in characteristic 2",
    version
)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a curve file: invariants, module type, closed form, verdict.
    Analyze(AnalyzeArgs),
    /// Show the generators, relations, and summand count of a block G_c.
    GcInfo(GcInfoArgs),
    /// List every stratum of a given genus with its module class.
    Enumerate(EnumerateArgs),
    /// Cross-verify random curves (deterministic in the seed).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Curve description file (JSON: field plus `f` or `branches`).
    file: PathBuf,
    /// For `f` inputs, fail on a pole at infinity instead of substituting
    /// it away.
    #[arg(long)]
    no_moebius: bool,
    /// Also write the constructed module and its basis-label manifest here.
    #[arg(long, value_name = "PATH")]
    dump_module: Option<PathBuf>,
}

#[derive(Args)]
struct GcInfoArgs {
    /// Block index c >= 1.
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    c: u64,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Genus g >= 1.
    #[arg(value_parser = clap::value_parser!(u64).range(1..))]
    g: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of trials.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    random: u64,
    /// Cap on the genus of sampled curves.
    #[arg(long, default_value_t = 12)]
    gmax: usize,
    /// Cap on the largest sampled pole order (default 2*gmax+1).
    #[arg(long)]
    dmax: Option<usize>,
    /// Use this field degree for every trial instead of cycling 1..=8.
    #[arg(long)]
    field_deg: Option<u32>,
    /// Field modulus bitmask (needs --field-deg).
    #[arg(long, requires = "field_deg")]
    modulus: Option<u32>,
    /// Master seed; trials derive per-index seeds from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fix the pole-order multiset (comma-separated odd numbers) and only
    /// vary coefficients; also checks that the type never changes.
    #[arg(long, value_delimiter = ',')]
    dset: Option<Vec<usize>>,
}

/// Parses arguments from the process environment, runs, and returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Analyze(a) => cmd_analyze(&a, cli.json),
        Cmd::GcInfo(a) => cmd_gc_info(&a, cli.json),
        Cmd::Enumerate(a) => cmd_enumerate(&a, cli.json),
        Cmd::Verify(a) => cmd_verify(&a, cli.json),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn fmt_list(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn render_decomposition(dec: &Decomposition) -> String {
    let mut parts = Vec::new();
    match dec.r {
        0 => {}
        1 => parts.push("(Z/2⊕μ2)".to_string()),
        r => parts.push(format!("(Z/2⊕μ2)^{r}")),
    }
    for &c in &dec.c_multiset {
        parts.push(format!("G_{c}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("⊕")
    }
}

fn cmd_analyze(args: &AnalyzeArgs, json_out: bool) -> anyhow::Result<i32> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", args.file.display()))?;
    let file: CurveFile = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("bad curve file {}: {e}", args.file.display()))?;
    let cd = file.load(!args.no_moebius)?;
    let report = verify_main(&cd);

    if let Some(path) = &args.dump_module {
        let dr = build_drham(&cd);
        let dump = json!({
            "module": dr.module.to_file(),
            "labels": dr.labels,
        });
        std::fs::write(path, serde_json::to_string_pretty(&dump)?)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
    }

    if json_out {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        let ctx = cd.ctx();
        println!(
            "d={} n={} modulus={}",
            fmt_list(&report.stratum),
            ctx.n(),
            ctx.modulus()
        );
        println!(
            "g={} r={} a={} EO={} J[2]={} {}",
            report.g,
            report.r,
            report.a,
            fmt_list(&report.eo_type),
            render_decomposition(&report.decomposition),
            if report.verified { "verified" } else { "MISMATCH" }
        );
        for f in &report.failures {
            eprintln!("  {f}");
        }
    }
    Ok(if report.verified { 0 } else { 1 })
}

fn cmd_gc_info(args: &GcInfoArgs, json_out: bool) -> anyhow::Result<i32> {
    let c = args.c as usize;
    let relations = gc_relations(c);
    let rendered: Vec<String> = relations.iter().map(GcRelation::render).collect();
    let lo = *upper_range(c).start();
    let eo = gc_eo_closed(c);
    if json_out {
        let payload = json!({
            "c": c,
            "dim": 2 * c,
            "a": gc_a_number(c),
            "generators": upper_range(c).collect::<Vec<_>>(),
            "relations": rendered,
            "summands": gc_summands(c),
            "eo_type": eo.as_slice(),
        });
        println!("{}", serde_json::to_string_pretty(&payload)?);
    } else {
        println!("G_{c}: dim={} a={}", 2 * c, gc_a_number(c));
        if lo == c {
            println!("generators: X_{c}");
        } else {
            println!("generators: X_{lo}..X_{c}");
        }
        println!("relations: {}", rendered.join(", "));
        println!("summands: {}", gc_summands(c));
        println!("EO={}", fmt_list(eo.as_slice()));
    }
    Ok(0)
}

fn cmd_enumerate(args: &EnumerateArgs, json_out: bool) -> anyhow::Result<i32> {
    let g = args.g as usize;
    let strata = enumerate_strata(g);
    let expected = partition_count(g + 1);
    let agree = strata.len() as u64 == expected;
    if json_out {
        let payload = json!({
            "g": g,
            "count": strata.len(),
            "partition_count": expected,
            "strata": strata,
        });
        println!("{}", serde_json::to_string_pretty(&payload)?);
    } else {
        println!("strata of genus {g}:");
        for s in &strata {
            println!(
                "d={} J[2]={} a={} r={} EO={}",
                fmt_list(&s.d_multiset),
                render_decomposition(&s.decomposition),
                s.a,
                s.p_rank,
                fmt_list(&s.eo_type)
            );
        }
        println!(
            "count={} partitions(g+1)={} {}",
            strata.len(),
            expected,
            if agree { "ok" } else { "MISMATCH" }
        );
    }
    Ok(if agree { 0 } else { 1 })
}

/// One planned verification trial; fully determined before any work runs.
struct TrialPlan {
    idx: usize,
    n: u32,
    modulus: Option<u32>,
    ds: Vec<usize>,
    seed: u64,
}

#[derive(Serialize)]
struct TrialOutcome {
    idx: usize,
    n: u32,
    ds: Vec<usize>,
    report: VerifyReport,
}

/// SplitMix64 step: decorrelates per-trial seeds from the master seed.
fn mix(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add((i + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Smallest field degree whose order can host `branches` distinct points.
fn min_degree(branches: usize) -> u32 {
    let mut n = 1;
    while (1usize << n) < branches {
        n += 1;
    }
    n as u32
}

fn plan_trials(args: &VerifyArgs) -> anyhow::Result<Vec<TrialPlan>> {
    let total = args.random as usize;
    let dmax = args.dmax.unwrap_or(2 * args.gmax + 1);
    if dmax.is_multiple_of(2) {
        anyhow::bail!("--dmax must be odd (pole orders are odd)");
    }
    if args.gmax == 0 {
        anyhow::bail!("--gmax must be at least 1");
    }
    let pmax = dmax.div_ceil(2);
    let degree_for = |cycle: usize, branches: usize| -> u32 {
        let floor = min_degree(branches);
        match args.field_deg {
            Some(n) => n.max(floor),
            None => (((cycle % 8) + 1) as u32).max(floor),
        }
    };

    let mut plans = Vec::with_capacity(total);
    if let Some(ds) = &args.dset {
        if ds.is_empty() || ds.iter().any(|&d| d % 2 == 0) {
            anyhow::bail!("--dset needs a non-empty list of odd pole orders");
        }
        let mut ds = ds.clone();
        ds.sort_unstable_by(|a, b| b.cmp(a));
        for idx in 0..total {
            plans.push(TrialPlan {
                idx,
                n: degree_for(idx, ds.len()),
                modulus: args.modulus,
                ds: ds.clone(),
                seed: mix(args.seed, idx as u64),
            });
        }
        return Ok(plans);
    }

    // Leading trials sweep every stratum of small genus so a default run
    // covers the whole catalog; the rest are random draws.
    'cover: for g in 1..=args.gmax.min(6) {
        for s in enumerate_strata(g) {
            if plans.len() == total {
                break 'cover;
            }
            if s.d_multiset.iter().any(|&d| d > dmax) {
                continue;
            }
            let idx = plans.len();
            plans.push(TrialPlan {
                idx,
                n: degree_for(idx, s.d_multiset.len()),
                modulus: args.modulus,
                ds: s.d_multiset,
                seed: mix(args.seed, idx as u64),
            });
        }
    }
    while plans.len() < total {
        let idx = plans.len();
        let mut rng = ChaCha8Rng::seed_from_u64(mix(args.seed, idx as u64) ^ 0x5EED);
        let g = rng.gen_range(1..=args.gmax);
        let mut remaining = g + 1;
        let mut parts = Vec::new();
        while remaining > 0 {
            let p = rng.gen_range(1..=remaining.min(pmax));
            parts.push(p);
            remaining -= p;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let ds: Vec<usize> = parts.iter().map(|&p| 2 * p - 1).collect();
        plans.push(TrialPlan {
            idx,
            n: degree_for(idx, ds.len()),
            modulus: args.modulus,
            ds,
            seed: mix(args.seed, idx as u64),
        });
    }
    Ok(plans)
}

fn run_trial(plan: &TrialPlan) -> anyhow::Result<TrialOutcome> {
    let ctx = match plan.modulus {
        Some(m) => FieldCtx::with_modulus(plan.n, m)?,
        None => FieldCtx::new(plan.n)?,
    };
    let cd = random_curve(&ctx, &plan.ds, plan.seed)?;
    Ok(TrialOutcome {
        idx: plan.idx,
        n: plan.n,
        ds: plan.ds.clone(),
        report: verify_main(&cd),
    })
}

fn cmd_verify(args: &VerifyArgs, json_out: bool) -> anyhow::Result<i32> {
    let plans = plan_trials(args)?;

    // Fail fast on an unusable field configuration before spawning workers.
    if let Some(n) = args.field_deg {
        match args.modulus {
            Some(m) => drop(FieldCtx::with_modulus(n, m)?),
            None => drop(FieldCtx::new(n)?),
        }
    }

    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(plans.len())
        .max(1);
    let mut outcomes: Vec<Option<anyhow::Result<TrialOutcome>>> =
        (0..plans.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let chunk: Vec<&TrialPlan> = plans.iter().skip(w).step_by(workers).collect();
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|p| (p.idx, run_trial(p)))
                    .collect::<Vec<_>>()
            }));
        }
        for h in handles {
            for (idx, res) in h.join().expect("verification worker panicked") {
                outcomes[idx] = Some(res);
            }
        }
    });

    let mut results = Vec::with_capacity(outcomes.len());
    for slot in outcomes {
        results.push(slot.expect("every trial index filled")?);
    }

    // Coefficient-independence mode: the type must be constant across all
    // trials of the fixed multiset.
    let mut type_drift = Vec::new();
    if args.dset.is_some() {
        for t in &results[1..] {
            if t.report.eo_type != results[0].report.eo_type {
                type_drift.push(format!(
                    "trial {}: EO={} differs from trial 0: EO={}",
                    t.idx,
                    fmt_list(&t.report.eo_type),
                    fmt_list(&results[0].report.eo_type)
                ));
            }
        }
    }

    let failed: Vec<&TrialOutcome> = results.iter().filter(|t| !t.report.verified).collect();
    let pass = results.len() - failed.len();
    if json_out {
        let payload = json!({
            "trials": results,
            "passed": pass,
            "failed": failed.len(),
            "type_drift": type_drift,
        });
        println!("{}", serde_json::to_string_pretty(&payload)?);
    } else {
        for t in &results {
            println!(
                "trial {:03}: n={} d={} g={} r={} a={} EO={} {}",
                t.idx,
                t.n,
                fmt_list(&t.ds),
                t.report.g,
                t.report.r,
                t.report.a,
                fmt_list(&t.report.eo_type),
                if t.report.verified { "ok" } else { "FAIL" }
            );
            for f in &t.report.failures {
                eprintln!("  {f}");
            }
        }
        for d in &type_drift {
            eprintln!("{d}");
        }
        println!("passed {pass}/{} trials", results.len());
        if args.dset.is_some() && type_drift.is_empty() {
            println!("type constant across all trials of d={}", fmt_list(&plans[0].ds));
        }
    }
    Ok(if failed.is_empty() && type_drift.is_empty() {
        0
    } else {
        1
    })
}
