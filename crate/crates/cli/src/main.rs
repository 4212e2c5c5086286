use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use apfive::config::RunConfig;
use apfive::elimination::{check_targets, run_pipeline};
use apfive::frey::{kraus_trace_set, Kappa};
use apfive::newforms::lmfdb::{fetch_remote, Adapter, Transport};
use apfive::newforms::{level_file_name, load_store, validate_store, EXPECTED_CLASS_COUNTS};
use apfive::oracle::{derive_witness, identity_fuzz, search_solutions, three_divides_ab_check, three_divides_y};
use apfive::small_exponents::{run_case, Case};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "apfive", version, about = "Modular-method elimination for (x-d)^5 + x^5 + (x+d)^5 = y^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download eigenvalue data for the given levels.
    Fetch {
        #[arg(long, value_delimiter = ',', default_value = "70,350,8960,44800")]
        levels: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = apfive::newforms::lmfdb::DEFAULT_BASE_URL)]
        base_url: String,
        #[arg(long, default_value_t = 3)]
        retries: u32,
    },
    /// Load a data directory and compare class counts.
    Validate {
        #[arg(long)]
        data: PathBuf,
        /// Restrict the expected counts to these levels.
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<u64>>,
    },
    /// Run the three-stage sieve and write a JSON report.
    Eliminate {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Traces of the Frey curve over all admissible residues at p.
    Kraus {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        kappa: u64,
    },
    /// Brute-force search for solutions with |x|, |d| ≤ B.
    Search {
        #[arg(long = "box")]
        bound: u64,
        #[arg(long)]
        nmax: u32,
    },
    /// Checks for the n = 2, 3, 5 reductions.
    VerifySmall {
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// Random-point check of the factorisation identities.
    Fuzz {
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure classes, mapped to exit codes 1 and 2.
enum Failure {
    Mismatch(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<apfive::Error> for Failure {
    fn from(e: apfive::Error) -> Self {
        Failure::Data(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn mismatch_if(failed: bool, what: impl Into<String>) -> Outcome {
    if failed {
        Err(Failure::Mismatch(what.into()))
    } else {
        Ok(())
    }
}

struct UreqTransport(ureq::Agent);

impl Transport for UreqTransport {
    fn get(&self, url: &str) -> apfive::Result<String> {
        let remote = |e: ureq::Error| apfive::Error::Remote(format!("{url}: {e}"));
        self.0.get(url).header("Accept", "application/json").call().map_err(remote)?.body_mut().read_to_string().map_err(remote)
    }
}

fn fetch(levels: &[u64], out: &Path, base_url: String, retries: u32) -> Outcome {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(Duration::from_secs(120))).build().into();
    let transport = UreqTransport(agent);
    let adapter = Adapter { base_url, retries, ..Adapter::default() };
    let mut written = Vec::new();
    for &level in levels {
        let path = out.join(level_file_name(level));
        let n = fetch_remote(&transport, &adapter, level, &path)?;
        eprintln!("level {level}: {n} classes -> {}", path.display());
        written.push(json!({"level": level, "classes": n, "path": path}));
    }
    print(&json!({ "written": written }));
    Ok(())
}

fn validate(data: &Path, levels: Option<Vec<u64>>) -> Outcome {
    let store = load_store(data)?;
    let expected: Vec<(u64, usize)> = match levels {
        Some(ls) => EXPECTED_CLASS_COUNTS.iter().copied().filter(|(l, _)| ls.contains(l)).collect(),
        None => EXPECTED_CLASS_COUNTS.to_vec(),
    };
    let report = validate_store(&store, &expected);
    eprint!("{report}");
    print(&serde_json::to_value(&report).expect("json"));
    if let Some(c) = report.counts.iter().find(|c| c.found.is_none()) {
        return Err(Failure::Data(anyhow::anyhow!("no data for level {}", c.level)));
    }
    mismatch_if(!report.ok, "class counts or Hasse bound")
}

fn load_config(path: Option<&Path>) -> anyhow::Result<RunConfig> {
    let Some(path) = path else { return Ok(RunConfig::default()) };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(cfg)
}

fn eliminate(data: Option<PathBuf>, config: Option<PathBuf>, out: Option<PathBuf>) -> Outcome {
    let mut cfg = load_config(config.as_deref())?;
    if let Some(d) = data {
        cfg.data_dir = d;
    }
    if out.is_some() {
        cfg.out = out;
    }
    cfg.validate()?;
    let store = load_store(&cfg.data_dir)?;
    if let Some(missing) = cfg.levels.iter().find(|l| store.count(**l).is_none()) {
        return Err(Failure::Data(anyhow::anyhow!("no data for configured level {missing}")));
    }
    let report = run_pipeline(&store, &cfg)?;
    let text = report.to_json();
    match &cfg.out {
        Some(p) => {
            apfive::newforms::write_atomic(p, &text)?;
            eprintln!("report written to {}", p.display());
        }
        None => print!("{text}"),
    }
    let checks = check_targets(&report, &cfg.levels);
    for c in &checks {
        eprintln!("{} {}: expected {}, found {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.expected, c.found);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
    mismatch_if(!failed.is_empty(), failed.join(", "))
}

fn kraus(n: u64, p: u64, kappa: u64) -> Outcome {
    let kappa = Kappa::try_from(kappa)?;
    let set = kraus_trace_set(kappa, n, p)?;
    print(&json!({
        "kappa": kappa.value(),
        "n": n,
        "p": p,
        "residues": set.residues,
        "traces": set.traces,
        "singular": set.singular,
        "bt_classes": set.bt_classes(),
        "triples": set.triples,
    }));
    Ok(())
}

fn search(bound: u64, nmax: u32) -> Outcome {
    let records = search_solutions(bound, bound, nmax)?;
    let witnesses: Vec<Value> = records
        .iter()
        .filter(|r| r.y != 0 && apfive::arith::is_prime_u64(r.n as u64))
        .map(|r| match derive_witness(r) {
            Ok(w) => json!({"record": r, "witness": w}),
            Err(e) => json!({"record": r, "error": e.to_string()}),
        })
        .collect();
    let exact = records.iter().all(|r| r.holds());
    let three = three_divides_y(&records);
    print(&json!({"box": bound, "nmax": nmax, "records": records, "witnesses": witnesses, "three_divides_y": three}));
    mismatch_if(!exact || !three, "a record failed re-verification")
}

fn verify_small(case: &str) -> Outcome {
    let case: Case = case.parse()?;
    let results = run_case(case)?;
    let failed: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0.as_str()).collect();
    let checks: Vec<Value> = results.iter().map(|(name, ok, detail)| json!({"check": name, "pass": ok, "detail": detail})).collect();
    print(&json!({ "checks": checks }));
    for (name, ok, _) in &results {
        eprintln!("{} {name}", if *ok { "PASS" } else { "FAIL" });
    }
    mismatch_if(!failed.is_empty(), failed.join(", "))
}

fn fuzz(trials: u64, seed: u64) -> Outcome {
    let report = identity_fuzz(trials, seed)?;
    let three = three_divides_ab_check();
    print(&json!({"identities": report, "three_divides_ab": three}));
    mismatch_if(!report.ok || !three.ok, "identity or residue check failed")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Fetch { levels, out, base_url, retries } => fetch(&levels, &out, base_url, retries),
        Command::Validate { data, levels } => validate(&data, levels),
        Command::Eliminate { data, config, out } => eliminate(data, config, out),
        Command::Kraus { n, p, kappa } => kraus(n, p, kappa),
        Command::Search { bound, nmax } => search(bound, nmax),
        Command::VerifySmall { case } => verify_small(&case),
        Command::Fuzz { trials, seed } => fuzz(trials, seed),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(what)) => {
            eprintln!("mismatch: {what}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
