use clap::{Args, Parser, Subcommand};
use meanset_attack::group::{GroupContext, GroupKind};
use meanset_attack::harness::config::{load_config, ExperimentConfig};
use meanset_attack::harness::emit::{format_cell, write_run};
use meanset_attack::harness::slln::{render_slln_csv, slln_path, slln_z, SllnReport};
use meanset_attack::harness::sweep::run_attack_sweep;
use meanset_attack::harness::tree_oracle::tree_oracle_batch;
use meanset_attack::protocol::{
    self, ChallengeMode, KeyFile, KeygenMode,
};
use meanset_attack::rng;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "meanset-attack",
    version,
    about = "Workbench for the mean-set attack on group-based challenge-response authentication"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one honest protocol instance and verify every round.
    ProtocolDemo(ProtocolDemoArgs),
    /// Run an (L, k) grid of attack trials and write result files.
    AttackSweep(AttackSweepArgs),
    /// Sample mean-set decay experiment on an exactly solvable platform.
    Slln(SllnArgs),
    /// Verify direct descent against brute force on random trees.
    TreeOracle(TreeOracleArgs),
}

fn parse_group(s: &str) -> Result<GroupKind, String> {
    match s {
        "free" => Ok(GroupKind::Free),
        "free-abelian" | "z" => Ok(GroupKind::FreeAbelian),
        "braid" => Ok(GroupKind::Braid),
        _ => Err(format!("unknown group {s:?} (free, free-abelian, braid)")),
    }
}

fn parse_keygen(s: &str) -> Result<KeygenMode, String> {
    match s {
        "classical" => Ok(KeygenMode::Classical),
        "alternative" => Ok(KeygenMode::Alternative),
        _ => Err(format!("unknown keygen mode {s:?} (classical, alternative)")),
    }
}

fn parse_challenge(s: &str) -> Result<ChallengeMode, String> {
    match s {
        "balanced" => Ok(ChallengeMode::Balanced),
        "bernoulli" => Ok(ChallengeMode::Bernoulli),
        _ => Err(format!("unknown challenge mode {s:?} (balanced, bernoulli)")),
    }
}

#[derive(Args)]
struct ProtocolDemoArgs {
    /// Platform group: free, free-abelian, braid.
    #[arg(long, default_value = "braid", value_parser = parse_group)]
    group: GroupKind,
    /// Strands (braid) or rank (otherwise).
    #[arg(long, default_value_t = 5)]
    n: u32,
    /// Key length: letters (classical) or permutation-braid factors
    /// (alternative).
    #[arg(long = "L", default_value_t = 10)]
    l: u32,
    /// Number of protocol rounds.
    #[arg(long, default_value_t = 10)]
    k: u32,
    /// Key generation mode: classical, alternative.
    #[arg(long, default_value = "classical", value_parser = parse_keygen)]
    mode: KeygenMode,
    /// Challenge mode: balanced, bernoulli.
    #[arg(long, default_value = "balanced", value_parser = parse_challenge)]
    challenge: ChallengeMode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write keys.json and transcript.jsonl here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackSweepArgs {
    /// JSON config (a bare config or a previous run-manifest.json); defaults
    /// apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's trials per cell.
    #[arg(long)]
    trials: Option<u32>,
    /// Override the config's error-ball radius.
    #[arg(long = "k-err")]
    k_err: Option<u32>,
    /// Output directory (default: config outDir, else "results").
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SllnArgs {
    /// Platform: z (integer line) or path (path graph).
    #[arg(long, default_value = "z")]
    platform: String,
    /// Support lower end (z platform).
    #[arg(long, default_value_t = -2)]
    lo: i64,
    /// Support upper end (z platform).
    #[arg(long, default_value_t = 2)]
    hi: i64,
    /// Vertex count (path platform).
    #[arg(long, default_value_t = 3)]
    vertices: usize,
    /// Sample sizes to test.
    #[arg(long = "n-list", value_delimiter = ',', default_value = "10,50,100")]
    n_list: Vec<u32>,
    /// Trials per sample size.
    #[arg(long, default_value_t = 500)]
    trials: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Proceed when the exact mean-set has several points (containment mode).
    #[arg(long)]
    allow_multi: bool,
    /// Also write a CSV decay table here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TreeOracleArgs {
    #[arg(long, default_value_t = 200)]
    trees: u32,
    #[arg(long, default_value_t = 40)]
    max_vertices: usize,
    #[arg(long, default_value_t = 3)]
    samples_per_tree: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn run_protocol_demo(args: ProtocolDemoArgs) -> meanset_attack::Result<()> {
    let ctx = GroupContext::from_kind(args.group, args.n)?;
    let mut rng = rng::stream(args.seed, "demo", &[]);
    let keys = match args.mode {
        KeygenMode::Classical => protocol::generate_keys_classical(&ctx, args.l, &mut rng)?,
        KeygenMode::Alternative => protocol::generate_keys_alternative(&ctx, args.l, &mut rng)?,
    };
    println!(
        "protocol demo: {:?} n={} L={} k={} mode={:?} challenge={:?} seed={}",
        args.group, args.n, args.l, args.k, args.mode, args.challenge, args.seed
    );
    println!(
        "keys: |s|={} |w|={} |t|={} (letters)",
        keys.secret().len(),
        keys.base().len(),
        keys.conjugate().len()
    );
    let transcript = protocol::run_protocol(&keys, args.k, args.challenge, &mut rng)?;
    let mut all_ok = true;
    println!("round  c  |y|  verified");
    for round in &transcript.rounds {
        let ok = protocol::verify_round(&keys, round);
        all_ok &= ok;
        println!(
            "{:>5}  {}  {:>3}  {}",
            round.index,
            round.challenge as u8,
            round.response.len(),
            ok
        );
    }
    println!("all rounds verified: {all_ok}");
    if let Some(dir) = args.out {
        std::fs::create_dir_all(&dir)?;
        let key_file = KeyFile::from_keys(&keys, args.seed);
        std::fs::write(
            dir.join("keys.json"),
            format!("{}\n", serde_json::to_string_pretty(&key_file)?),
        )?;
        let mut out = std::fs::File::create(dir.join("transcript.jsonl"))?;
        protocol::write_transcript_jsonl(&transcript, &mut out)?;
        println!("wrote {}", dir.join("keys.json").display());
        println!("wrote {}", dir.join("transcript.jsonl").display());
    }
    if !all_ok {
        return Err(meanset_attack::Error::Config(
            "completeness violated: a round failed verification".into(),
        ));
    }
    Ok(())
}

fn run_attack_sweep_cmd(args: AttackSweepArgs) -> meanset_attack::Result<()> {
    let mut config = match &args.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(k_err) = args.k_err {
        config.k_err = k_err;
    }
    if let Some(out) = args.out {
        config.out_dir = Some(out);
    }
    config.validate()?;

    let run = run_attack_sweep(&config)?;
    for cell in &run.cells {
        println!(
            "cell n={} L={} k={} T={}: {} exact={} conjugacy={} timeouts={} wall={:.1?}",
            cell.n,
            cell.l,
            cell.k,
            cell.trials,
            format_cell(cell.success_rate(), cell.avg_error_length()),
            cell.exact,
            cell.conjugacy,
            cell.timeouts,
            cell.wall
        );
    }
    let dir = config
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("results"));
    for name in write_run(&dir, &config, &run)? {
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}

fn print_slln(report: &SllnReport) {
    println!("platform: {}", report.platform);
    println!(
        "exact mean-set: {{{}}}{}",
        report.mean_set.join(", "),
        if report.multi_vertex {
            " (multiple points; reporting containment)"
        } else {
            ""
        }
    );
    println!("    n   trials  mismatches  frequency");
    for row in &report.rows {
        println!(
            "{:>5}  {:>7}  {:>10}  {:.4}",
            row.n,
            row.trials,
            row.mismatches,
            row.frequency()
        );
    }
}

fn run_slln(args: SllnArgs) -> meanset_attack::Result<()> {
    let report = match args.platform.as_str() {
        "z" => slln_z(
            args.lo,
            args.hi,
            &args.n_list,
            args.trials,
            args.seed,
            args.allow_multi,
        )?,
        "path" => slln_path(
            args.vertices,
            &args.n_list,
            args.trials,
            args.seed,
            args.allow_multi,
        )?,
        other => {
            return Err(meanset_attack::Error::Config(format!(
                "unknown platform {other:?} (z, path)"
            )))
        }
    };
    print_slln(&report);
    if let Some(path) = args.out {
        std::fs::write(&path, render_slln_csv(&report, args.seed))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_tree_oracle(args: TreeOracleArgs) -> meanset_attack::Result<()> {
    let report = tree_oracle_batch(
        args.trees,
        args.max_vertices,
        args.samples_per_tree,
        args.seed,
    )?;
    println!(
        "trees={} max-vertices={} samples-per-tree={} seed={}",
        report.trees, report.max_vertices, report.samples_per_tree, args.seed
    );
    println!(
        "descents checked: {}  counterexamples: {}",
        report.checks,
        report.counterexamples.len()
    );
    if report.pass() {
        println!("tree oracle: PASS");
    } else {
        println!("tree oracle: FAIL");
        for ce in &report.counterexamples {
            println!("{}", serde_json::to_string(ce)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ProtocolDemo(args) => run_protocol_demo(args),
        Command::AttackSweep(args) => run_attack_sweep_cmd(args),
        Command::Slln(args) => run_slln(args),
        Command::TreeOracle(args) => run_tree_oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
