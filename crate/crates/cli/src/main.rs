//! Command-line front end for counting rich words and evaluating bounds.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use richbound::bounds::{self, BoundConfig, BoundError, PhiSpec};
use richbound::eertree::{PalTree, Word};
use richbound::richcount::{self, CountError, CountOptions, CountTable};
use richbound::verify::{self, VerifyOptions};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "richbound",
    version,
    about = "Count rich words and evaluate upper bounds on their number"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test whether a word is rich
    Check {
        word: String,
        /// Alphabet size; inferred from the word when omitted
        #[arg(long)]
        q: Option<u32>,
    },
    /// Exact counts R(1..=n)
    Count {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List every rich word of length n
    Enumerate {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Draw a random rich word
    Sample {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the bounds over a grid of n
    Bound {
        /// Comma-separated n values; scientific notation allowed
        #[arg(long, value_delimiter = ',', value_parser = parse_n, required = true)]
        n: Vec<u64>,
        /// Compute exact counts for grid values up to this length
        #[arg(long, default_value_t = 16)]
        count_max: usize,
        /// Also write `n e(n)/n` plot data here
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fit c6 so that ln* K_j <= c6 j^gamma for j <= J
    #[command(name = "fit-c6")]
    FitC6 {
        #[arg(long, default_value_t = 5)]
        j: u32,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Run the self-check suites
    Verify {
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Allow naive oracle runs beyond the default budget
        #[arg(long)]
        force: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Counts and bounds side by side for n = 1..=n
    Table {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Give up after visiting this many tree nodes
    #[arg(long, default_value_t = richcount::DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

impl RunArgs {
    fn count_options(&self) -> CountOptions {
        CountOptions {
            threads: self.threads,
            node_budget: self.node_budget,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct ConfigArgs {
    /// key=value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// K1 = q^k1_exp
    #[arg(long)]
    k1_exp: Option<f64>,
    #[arg(long)]
    c6: Option<f64>,
    #[arg(long)]
    n0: Option<u64>,
    /// sqrt, pow:<eps>, log or overlog
    #[arg(long)]
    phi: Option<String>,
}

enum Failure {
    Usage(String),
    Budget(String),
    Failed(String),
}

impl From<BoundError> for Failure {
    fn from(e: BoundError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BudgetExceeded { .. }
            | CountError::NaiveBudget { .. }
            | CountError::SampleBudget { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

/// Accepts `1000`, `1e3` or `2.5e6`; the value must be a positive integer.
fn parse_n(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.trim().parse::<u64>() {
        return if n > 0 {
            Ok(n)
        } else {
            Err("n must be positive".into())
        };
    }
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if !(x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64) {
        return Err(format!("not a positive integer: {s:?}"));
    }
    Ok(x as u64)
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Failure::Usage(format!("{}:{}: expected key=value", path.display(), i + 1))
        })?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

impl ConfigArgs {
    fn build(&self) -> Result<BoundConfig, Failure> {
        let mut kv = match &self.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let flags: [(&str, Option<String>); 10] = [
            ("q", self.q.map(|v| v.to_string())),
            ("lambda", self.lambda.map(|v| v.to_string())),
            ("delta", self.delta.map(|v| v.to_string())),
            ("gamma", self.gamma.map(|v| v.to_string())),
            ("c2", self.c2.map(|v| v.to_string())),
            ("c", self.c.map(|v| v.to_string())),
            ("k1_exp", self.k1_exp.map(|v| v.to_string())),
            ("c6", self.c6.map(|v| v.to_string())),
            ("n0", self.n0.map(|v| v.to_string())),
            ("phi", self.phi.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                kv.insert(k.to_string(), v);
            }
        }

        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, Failure> {
            v.parse()
                .map_err(|_| Failure::Usage(format!("bad value for {k}: {v:?}")))
        }
        let q = kv.get("q").map(|v| num("q", v)).transpose()?.unwrap_or(2);
        let phi: PhiSpec = match kv.get("phi") {
            Some(p) => p.parse()?,
            None => PhiSpec::Sqrt,
        };
        let mut cfg = BoundConfig::new(q.max(2), phi);
        cfg.q = q;
        for (k, v) in &kv {
            match k.as_str() {
                "q" | "phi" => {}
                "lambda" => cfg.lambda = num(k, v)?,
                "delta" => cfg.delta = num(k, v)?,
                "gamma" => cfg.gamma = num(k, v)?,
                "c2" => cfg.c2 = num(k, v)?,
                "c" => cfg.c = num(k, v)?,
                "k1_exp" => cfg.k1_exp = num(k, v)?,
                "c6" => cfg.c6 = num(k, v)?,
                "n0" => cfg.n0 = num(k, v)?,
                other => return Err(Failure::Usage(format!("unknown config key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_letters(q: u32) -> Result<(), Failure> {
    if q == 0 {
        return Err(Failure::Usage("alphabet size must be at least 1".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.cmd {
        Cmd::Check { word, q } => {
            // parse against the widest alphabet first, then narrow
            let w = Word::parse(&word, u32::MAX).map_err(|e| Failure::Usage(e.to_string()))?;
            let inferred = w.letters().iter().map(|l| l.0 + 1).max().unwrap_or(1);
            let q = q.unwrap_or(inferred);
            check_letters(q)?;
            let w = w.validate(q).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut t = PalTree::new(q).map_err(|e| Failure::Usage(e.to_string()))?;
            t.extend(&w).map_err(|e| Failure::Usage(e.to_string()))?;
            let rich = t.is_rich();
            println!(
                "{} {}/{}",
                if rich { "rich" } else { "not-rich" },
                t.pal_count(),
                w.len()
            );
            Ok(if rich {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            })
        }
        Cmd::Count { q, n, run } => {
            check_letters(q)?;
            let table = match richcount::count_rich_with(q, n, &run.count_options()) {
                Ok(t) => t,
                Err(CountError::BudgetExceeded { budget, partial }) => {
                    eprintln!("node budget {budget} exhausted; partial counts are lower bounds:");
                    eprint!("{}", partial.to_csv());
                    return Err(Failure::Budget("count incomplete".into()));
                }
                Err(e) => return Err(e.into()),
            };
            emit(&run.out, &render_table(&table, run.format))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enumerate { q, n, run } => {
            check_letters(q)?;
            let sink = |w: &Word| -> Result<String, io::Error> { Ok(format!("{w}\n")) };
            let mut writer: Box<dyn Write> = match &run.out {
                Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
                None => Box::new(BufWriter::new(io::stdout().lock())),
            };
            let res = richcount::enumerate_rich(q, n, |w| writer.write_all(sink(w)?.as_bytes()));
            match res {
                Ok(_) => {
                    writer.flush()?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(richcount::EnumerateError::Count(e)) => Err(e.into()),
                // closed pipe and similar: stop quietly
                Err(richcount::EnumerateError::Sink(e))
                    if e.kind() == io::ErrorKind::BrokenPipe =>
                {
                    Ok(ExitCode::SUCCESS)
                }
                Err(richcount::EnumerateError::Sink(e)) => Err(e.into()),
            }
        }
        Cmd::Sample { q, n, seed, out } => {
            check_letters(q)?;
            let w = richcount::sample_rich(q, n, seed)?;
            emit(&out, &format!("{w}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bound {
            n,
            count_max,
            plot,
            cfg,
            run,
        } => {
            let cfg = cfg.build()?;
            let mut grid = n;
            grid.sort_unstable();
            grid.dedup();
            let feasible = grid
                .iter()
                .copied()
                .filter(|&m| m as usize <= count_max)
                .max();
            let counts = match feasible {
                Some(m) => Some(richcount::count_rich_with(
                    cfg.q,
                    m as usize,
                    &run.count_options(),
                )?),
                None => None,
            };
            let rep = bounds::report(&grid, &cfg, counts.as_ref())?;
            if let Some(p) = plot {
                fs::write(p, rep.to_plot_data())?;
            }
            let text = match run.format {
                Format::Csv => rep.to_csv(),
                Format::Json => rep.to_json() + "\n",
            };
            emit(&run.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::FitC6 { j, cfg } => {
            let cfg = cfg.build()?;
            let (c6, out) = verify::c6_fit_check(j, &cfg);
            match c6 {
                Some(c6) => println!("c6 = {c6}"),
                None => println!("c6 could not be fitted"),
            }
            let mut ks = bounds::KSequence::new(&cfg);
            for i in 1..=j {
                let k = ks.k(i);
                let ls = k.iter_log().map_or("?".to_string(), |l| l.to_string());
                println!("j={i} ln*K={ls} K={k}");
            }
            println!("{out}");
            Ok(if c6.is_some() && out.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            })
        }
        Cmd::Verify {
            n,
            samples,
            force,
            inject_fault,
            cfg,
            run,
        } => {
            let cfg = cfg.build()?;
            let mut count = run.count_options();
            count.corrupt_tree = inject_fault;
            let opts = VerifyOptions {
                q: cfg.q,
                n_max: n,
                samples,
                seed: run.seed,
                count,
                naive_budget: if force {
                    u64::MAX
                } else {
                    richcount::NAIVE_WORD_BUDGET
                },
                cfg,
            };
            let suites = verify::run_all(&opts)?;
            let text = match run.format {
                Format::Json => serde_json::to_string_pretty(&suites).expect("plain data") + "\n",
                Format::Csv => {
                    let mut s = String::new();
                    for suite in &suites {
                        s.push_str(&suite.to_string());
                        s.push('\n');
                        if suite.indeterminate > 0 {
                            s.push_str(&format!(
                                "    warning: {} uncertified verdicts\n",
                                suite.indeterminate
                            ));
                        }
                    }
                    s
                }
            };
            emit(&run.out, &text)?;
            Ok(if suites.iter().all(|s| s.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            })
        }
        Cmd::Table { n, cfg, run } => {
            let cfg = cfg.build()?;
            let counts = richcount::count_rich_with(cfg.q, n, &run.count_options())?;
            let grid: Vec<u64> = (1..=n as u64).collect();
            let rep = bounds::report(&grid, &cfg, Some(&counts))?;
            let text = match run.format {
                Format::Csv => rep.to_csv(),
                Format::Json => rep.to_json() + "\n",
            };
            emit(&run.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render_table(t: &CountTable, f: Format) -> String {
    match f {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json() + "\n",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
