use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use newsrace_core::config::{BackendMode, ProviderMode, RunConfig};
use newsrace_core::model::{Event, TimeWindow};
use newsrace_core::pipeline::{stored_config, Pipeline, RunSummary, Services};
use newsrace_core::provider::{project_budget, BackfillPolicy};
use newsrace_core::store::{RunStore, Stage};
use newsrace_core::{fixtures, polymarket, wcep};

#[derive(Parser)]
#[command(name = "newsrace", version, about = "Measure which channel reports a news event first")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scrape the Current Events portal and rank U.S. bullets by pageviews.
    SeedWcep(SeedWcepArgs),
    /// Filter prediction markets and pin each to its trading spike.
    SeedPolymarket(SeedPolymarketArgs),
    /// Seed (if needed) and draft queries for every event.
    Draft(StageArgs),
    /// Run the listening-provider query lifecycle for drafted events.
    Pull(PullArgs),
    /// Recover tweet times and bodies, then verify mentions.
    Verify(StageArgs),
    /// Broadening-ladder probe for the configured events.
    Probe(StageArgs),
    /// Render the five result tables.
    Analyze(StageArgs),
    /// Every stage in order.
    FullRun(StageArgs),
    /// Continue an existing run from its stored config.
    Resume(ResumeArgs),
    /// Write the deterministic mock corpus.
    Fixtures(FixturesArgs),
    /// Project provider requests and wall time for a live run.
    Budget(BudgetArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run config (TOML). Optional when --run names an existing run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run id of an existing run under --out.
    #[arg(long)]
    run: Option<String>,
    /// Directory holding run stores.
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    #[arg(long, value_enum)]
    provider: Option<ProviderArg>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
}

#[derive(Args)]
struct StageArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Redo this stage and everything after it.
    #[arg(long, value_enum)]
    force: Option<StageArg>,
    /// Clear failure marks before running.
    #[arg(long)]
    retry_failed: bool,
}

#[derive(Args)]
struct PullArgs {
    #[command(flatten)]
    stage: StageArgs,
    /// Pull window before the event time, e.g. 30m.
    #[arg(long, value_parser = parse_minutes)]
    window_pre: Option<i64>,
    /// Pull window after the event time, e.g. 24h.
    #[arg(long, value_parser = parse_minutes)]
    window_post: Option<i64>,
}

#[derive(Args)]
struct ResumeArgs {
    #[arg(long)]
    run: String,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    #[arg(long)]
    retry_failed: bool,
}

#[derive(Args)]
struct SeedWcepArgs {
    #[arg(long)]
    from: NaiveDate,
    #[arg(long)]
    to: NaiveDate,
    #[arg(long, default_value_t = wcep::DEFAULT_TOP_N)]
    top: usize,
    #[arg(long, default_value_t = wcep::DEFAULT_CAP)]
    cap: usize,
    /// Saved month pages and pageviews.csv instead of live fetches.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// Custom U.S. lexicon file.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Events as JSON lines; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeedPolymarketArgs {
    #[arg(long)]
    from: NaiveDate,
    #[arg(long)]
    to: NaiveDate,
    #[arg(long, default_value_t = polymarket::DEFAULT_VOLUME_FLOOR)]
    floor: f64,
    #[arg(long, default_value_t = polymarket::DEFAULT_TOP_K)]
    top: usize,
    /// Directory with markets.csv and trades.csv (or .parquet).
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long)]
    markets: Option<PathBuf>,
    #[arg(long)]
    trades: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Target directory.
    #[arg(long, default_value = "fixtures/corpus")]
    out: PathBuf,
    /// Also run the mock pipeline and compare outcomes with the plan.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    events: u64,
    #[arg(long, default_value_t = 28)]
    cap: usize,
    #[arg(long, default_value_t = 600)]
    window_s: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Live,
    Mock,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Remote,
    Fallback,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Seed,
    Draft,
    Pull,
    Recover,
    Verify,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Stage {
        match s {
            StageArg::Seed => Stage::Seeded,
            StageArg::Draft => Stage::Drafted,
            StageArg::Pull => Stage::Pulled,
            StageArg::Recover => Stage::Recovered,
            StageArg::Verify => Stage::Verified,
        }
    }
}

/// "30m", "24h", "90" (minutes).
fn parse_minutes(s: &str) -> std::result::Result<i64, String> {
    let (num, scale) = match s.strip_suffix('h') {
        Some(n) => (n, 60),
        None => (s.strip_suffix('m').unwrap_or(s), 1),
    };
    num.trim()
        .parse::<i64>()
        .map(|n| n * scale)
        .map_err(|e| format!("bad duration {s:?}: {e}"))
}

fn load_config(a: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match (&a.config, &a.run) {
        (Some(path), _) => RunConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        (None, Some(run)) => stored_config(&a.out, run)?,
        (None, None) => bail!("pass --config for a new run or --run for an existing one"),
    };
    if let (Some(_), Some(run)) = (&a.config, &a.run) {
        if &cfg.run_id != run {
            bail!("--run {run} does not match run_id {:?} in the config", cfg.run_id);
        }
    }
    if let Some(p) = a.provider {
        cfg.provider = match p {
            ProviderArg::Live => ProviderMode::Live,
            ProviderArg::Mock => ProviderMode::Mock,
        };
    }
    if let Some(b) = a.backend {
        cfg.backend = match b {
            BackendArg::Remote => BackendMode::Remote,
            BackendArg::Fallback => BackendMode::Fallback,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn open(cfg: RunConfig, out: &Path, s: &StageArgs) -> Result<Pipeline> {
    let services = Services::for_config(&cfg)?;
    let mut p = Pipeline::open(cfg, out, services)?;
    if s.retry_failed {
        p.retry_failed()?;
    }
    if let Some(stage) = s.force {
        p.force(stage.into())?;
    }
    Ok(p)
}

fn report(p: &Pipeline, s: RunSummary) -> ExitCode {
    let store = p.store();
    println!(
        "run {}: {} events, {} verified, {} failed, {} flagged for review, {} provider requests",
        p.manifest().run_id,
        s.events,
        s.verified,
        s.failed,
        s.needs_review,
        s.provider_requests
    );
    if store.tables_dir().exists() {
        println!("tables: {}", store.tables_dir().display());
    }
    for (id, rec) in &p.manifest().events {
        if let Some(f) = &rec.failed {
            warn!("{id}: failed at {}: {}", f.stage.as_str(), f.error);
        }
    }
    ExitCode::from(s.exit_code() as u8)
}

fn run_stage(s: &StageArgs, until: &str) -> Result<ExitCode> {
    let cfg = load_config(&s.run)?;
    let mut p = open(cfg, &s.run.out, s)?;
    p.seed()?;
    if until != "seed" {
        p.draft()?;
    }
    match until {
        "verify" => {
            p.pull()?;
            p.recover()?;
            p.verify()?;
        }
        "probe" => p.probe()?,
        "analyze" => p.analyze()?,
        "full" => {
            let s = p.full_run()?;
            return Ok(report(&p, s));
        }
        _ => {}
    }
    let s = p.summary();
    Ok(report(&p, s))
}

fn write_events(events: &[Event], out: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    for e in events {
        serde_json::to_writer(&mut buf, e)?;
        buf.push(b'\n');
    }
    match out {
        Some(path) => fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn seed_wcep_cmd(a: &SeedWcepArgs) -> Result<ExitCode> {
    let lexicon = match &a.lexicon {
        Some(p) => wcep::UsLexicon::load(p)?,
        None => wcep::UsLexicon::default(),
    };
    let params = wcep::WcepParams { from: a.from, to: a.to, cap: a.cap, top_n: a.top, parallelism: 4 };
    let seed = match &a.fixtures {
        Some(dir) => {
            let pages = wcep::FixtureWcep { dir: dir.join("wcep") };
            let views = wcep::FixturePageviews::load(&dir.join("pageviews.csv"))?;
            wcep::seed_wcep(&params, &pages, &lexicon, &views)?
        }
        None => wcep::seed_wcep(&params, &wcep::LiveWcep::new()?, &lexicon, &wcep::LivePageviews::new()?)?,
    };
    for e in &seed.parse_errors {
        warn!("day {}: {}", e.day, e.message);
    }
    for w in &seed.warnings {
        warn!("{w}");
    }
    eprintln!(
        "{} bullets, {} pass the U.S. filter, {} events over {} articles (shortfall {})",
        seed.candidates,
        seed.passing,
        seed.ranked.events.len(),
        seed.distinct_articles,
        seed.ranked.shortfall
    );
    write_events(&seed.ranked.events, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn seed_polymarket_cmd(a: &SeedPolymarketArgs) -> Result<ExitCode> {
    let pick = |explicit: &Option<PathBuf>, name: &str| -> Result<PathBuf> {
        match (explicit, &a.fixtures) {
            (Some(p), _) => Ok(p.clone()),
            (None, Some(dir)) => Ok(dir.join(name)),
            (None, None) => bail!("pass --fixtures or --{}", name.trim_end_matches(".csv")),
        }
    };
    let markets = polymarket::load_markets(&pick(&a.markets, "markets.csv")?)?;
    let trades = polymarket::load_trades(&pick(&a.trades, "trades.csv")?)?;
    let window = TimeWindow::from_dates(a.from, a.to)?;
    let seed = polymarket::seed_polymarket(&markets, trades, &window, a.floor, a.top)?;
    for id in &seed.pinned.dropped {
        info!("{id}: no trading spike inside the window");
    }
    eprintln!(
        "{} markets, {} pass the filter, {} pinned ({} dropped), {} event groups, median volume ${:.0}",
        seed.candidates,
        seed.filtered.len(),
        seed.pinned.events.len(),
        seed.pinned.dropped.len(),
        seed.distinct_groups,
        seed.median_volume_usd
    );
    write_events(&seed.pinned.events, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn fixtures_cmd(a: &FixturesArgs) -> Result<ExitCode> {
    let corpus = fixtures::generate()?;
    fixtures::write(&corpus, &a.out)?;
    println!("wrote {} documents and {} markets to {}", corpus.docs.len(), corpus.markets.len(), a.out.display());
    if a.check {
        let scratch = tempfile::tempdir()?;
        let problems = fixtures::check(&corpus, &a.out, scratch.path())?;
        for p in &problems {
            println!("off plan: {p}");
        }
        if !problems.is_empty() {
            return Ok(ExitCode::from(2));
        }
        println!("all {} events meet their plan", corpus.plans.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn budget_cmd(a: &BudgetArgs) -> ExitCode {
    let b = project_budget(a.events, &BackfillPolicy::default(), a.cap, a.window_s * 1000);
    println!(
        "{} events × {} requests = {} requests; at least {:.1} h under {} per {} s",
        b.events,
        b.requests_per_event,
        b.total_requests,
        b.hours(),
        a.cap,
        a.window_s
    );
    ExitCode::SUCCESS
}

fn dispatch(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::SeedWcep(a) => seed_wcep_cmd(&a),
        Cmd::SeedPolymarket(a) => seed_polymarket_cmd(&a),
        Cmd::Draft(s) => run_stage(&s, "draft"),
        Cmd::Pull(mut a) => {
            // Window overrides change the config hash, so they only apply to new runs.
            let mut cfg = load_config(&a.stage.run)?;
            if let Some(m) = a.window_pre {
                cfg.pull.window_pre_min = m;
            }
            if let Some(m) = a.window_post {
                cfg.pull.window_post_min = m;
            }
            a.stage.run.config = None;
            let mut p = open(cfg, &a.stage.run.out, &a.stage)?;
            p.seed()?;
            p.draft()?;
            p.pull()?;
            let s = p.summary();
            Ok(report(&p, s))
        }
        Cmd::Verify(s) => run_stage(&s, "verify"),
        Cmd::Probe(s) => run_stage(&s, "probe"),
        Cmd::Analyze(s) => run_stage(&s, "analyze"),
        Cmd::FullRun(s) => run_stage(&s, "full"),
        Cmd::Resume(a) => {
            if !RunStore::new(&a.out, &a.run).exists() {
                bail!("no run {:?} under {}", a.run, a.out.display());
            }
            let s = StageArgs {
                run: RunArgs { config: None, run: Some(a.run), out: a.out, provider: None, backend: None },
                force: None,
                retry_failed: a.retry_failed,
            };
            run_stage(&s, "full")
        }
        Cmd::Fixtures(a) => fixtures_cmd(&a),
        Cmd::Budget(a) => Ok(budget_cmd(&a)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match dispatch(Cli::parse().cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
