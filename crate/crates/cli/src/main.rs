use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use trajent::oracle::{
    enumerate_trajectories, oracle_conditional_sequence, oracle_conditional_set, oracle_entropy, sequence_mass,
    set_mass, OracleConfig,
};
use trajent::{
    bernoulli_entropy, entropy_matrix, entropy_via_sequence, io, trajectory_entropy, visit_probability, Chain,
    CondQuery, Error, ErrorKind, StateId,
};

mod report;

use report::{AlphaReport, CondReport, EntropyReport, InspectReport, MatrixReport, OracleCheck, Report};

#[derive(Parser)]
#[command(name = "trajent", version, about = "Entropy of Markov-chain trajectories")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Decimals shown in text output; JSON always carries full precision.
    #[arg(long, default_value_t = 4, global = true)]
    precision: usize,
    /// Worker threads, 0 for one per core.
    #[arg(long, env = "TRAJENT_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct ChainArg {
    /// Chain file: JSON `{"states": [...], "matrix": [[...]]}` or a TSV edge list.
    chain: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Cross-check against brute-force enumeration of trajectories.
    #[arg(long)]
    oracle: bool,
    /// Enumeration stops once the uncovered mass is below this bound.
    #[arg(long, default_value_t = 1e-12)]
    residual: f64,
    /// Enumeration gives up after this many expanded prefixes.
    #[arg(long, default_value_t = 10_000_000)]
    max_paths: usize,
}

impl OracleArgs {
    fn config(&self) -> Result<OracleConfig, Error> {
        let config = OracleConfig {
            residual_mass_bound: self.residual,
            max_paths: self.max_paths,
            ..OracleConfig::default()
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropy of the trajectory from one state to another, or the full matrix.
    Entropy {
        #[command(flatten)]
        chain: ChainArg,
        #[arg(long, required_unless_present = "matrix")]
        from: Option<String>,
        #[arg(long, required_unless_present = "matrix")]
        to: Option<String>,
        /// Print the entropy of every pair (the chain must be irreducible).
        #[arg(long, conflicts_with_all = ["from", "to", "oracle"])]
        matrix: bool,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Entropy conditioned on visiting intermediate states.
    Cond {
        #[command(flatten)]
        chain: ChainArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Ordered intermediate states, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "set", required_unless_present = "set")]
        via: Vec<String>,
        /// Unordered set of states to visit; computed by enumeration only.
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Probability that the walk from FROM visits VIA before TO.
    Alpha {
        #[command(flatten)]
        chain: ChainArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        via: String,
        #[arg(long)]
        to: String,
    },
    /// Local entropies, stationary distribution, entropy rate and components.
    Inspect {
        #[command(flatten)]
        chain: ChainArg,
    },
}

fn resolve(chain: &Chain, labels: &[String]) -> Result<Vec<StateId>, Error> {
    labels.iter().map(|l| chain.state(l)).collect()
}

fn oracle_check(
    chain: &Chain,
    s: StateId,
    d: StateId,
    args: &OracleArgs,
    closed: Option<f64>,
    filter: impl FnOnce(&trajent::EnumerationResult) -> Result<(f64, f64), Error>,
) -> Result<OracleCheck, Error> {
    let e = enumerate_trajectories(chain, s, d, &args.config()?)?;
    let (entropy, event_mass) = filter(&e)?;
    Ok(OracleCheck {
        entropy_bits: entropy,
        covered_mass: e.covered_mass,
        event_mass,
        trajectories: e.trajectories.len(),
        truncated: e.truncated,
        difference: closed.map(|h| (h - entropy).abs()),
    })
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Entropy {
            chain,
            from,
            to,
            matrix,
            oracle,
        } => {
            let c: Chain = io::load(&chain.chain)?;
            if *matrix {
                let h = entropy_matrix(&c)?;
                return Ok(Report::Matrix(MatrixReport {
                    command: "entropy",
                    chain: chain.chain.display().to_string(),
                    states: c.labels().to_vec(),
                    matrix: h.rows(),
                }));
            }
            let (from, to) = (from.as_deref().unwrap_or_default(), to.as_deref().unwrap_or_default());
            let (s, d) = (c.state(from)?, c.state(to)?);
            let h = trajectory_entropy(&c, s, d)?;
            let oracle = if oracle.oracle {
                Some(oracle_check(&c, s, d, oracle, Some(h), |e| {
                    Ok((oracle_entropy(e)?, e.covered_mass))
                })?)
            } else {
                None
            };
            Ok(Report::Entropy(EntropyReport {
                command: "entropy",
                chain: chain.chain.display().to_string(),
                from: from.to_string(),
                to: to.to_string(),
                entropy_bits: h,
                oracle,
            }))
        }
        Command::Cond {
            chain,
            from,
            to,
            via,
            set,
            oracle,
        } => {
            let c: Chain = io::load(&chain.chain)?;
            let (s, d) = (c.state(from)?, c.state(to)?);
            if !set.is_empty() {
                let members = resolve(&c, set)?;
                let check = oracle_check(&c, s, d, oracle, None, |e| {
                    Ok((oracle_conditional_set(e, &members)?, set_mass(e, &members)))
                })?;
                return Ok(Report::Cond(CondReport {
                    command: "cond",
                    chain: chain.chain.display().to_string(),
                    from: from.clone(),
                    to: to.clone(),
                    mode: "set",
                    states: set.clone(),
                    entropy_bits: check.entropy_bits,
                    per_leg: None,
                    leg_probabilities: None,
                    event_probability: check.event_mass,
                    poorly_conditioned: false,
                    oracle: Some(check),
                }));
            }
            let query = CondQuery::new(s, d, resolve(&c, via)?);
            let r = entropy_via_sequence(&c, &query)?;
            let check = if oracle.oracle {
                Some(oracle_check(&c, s, d, oracle, Some(r.entropy), |e| {
                    Ok((
                        oracle_conditional_sequence(e, &query.via)?,
                        sequence_mass(e, &query.via),
                    ))
                })?)
            } else {
                None
            };
            Ok(Report::Cond(CondReport {
                command: "cond",
                chain: chain.chain.display().to_string(),
                from: from.clone(),
                to: to.clone(),
                mode: "sequence",
                states: via.clone(),
                entropy_bits: r.entropy,
                per_leg: Some(r.per_leg),
                leg_probabilities: Some(r.leg_probabilities),
                event_probability: r.event_probability,
                poorly_conditioned: r.poorly_conditioned,
                oracle: check,
            }))
        }
        Command::Alpha { chain, from, via, to } => {
            let c: Chain = io::load(&chain.chain)?;
            let alpha = visit_probability(&c, c.state(from)?, c.state(via)?, c.state(to)?)?;
            Ok(Report::Alpha(AlphaReport {
                command: "alpha",
                chain: chain.chain.display().to_string(),
                from: from.clone(),
                via: via.clone(),
                to: to.clone(),
                alpha,
                binary_entropy_bits: bernoulli_entropy(alpha)?,
            }))
        }
        Command::Inspect { chain } => {
            let c: Chain = io::load(&chain.chain)?;
            let irreducible = c.is_irreducible();
            let label = |s: StateId| c.label(s).to_string();
            Ok(Report::Inspect(InspectReport {
                command: "inspect",
                chain: chain.chain.display().to_string(),
                n_states: c.n_states(),
                states: c.labels().to_vec(),
                local_entropies: c.local_entropies(),
                irreducible,
                stationary: if irreducible {
                    Some(c.stationary_distribution()?.into_vec())
                } else {
                    None
                },
                entropy_rate: if irreducible { Some(c.entropy_rate()?) } else { None },
                period: if irreducible { c.period() } else { None },
                components: c
                    .strongly_connected_components()
                    .into_iter()
                    .map(|comp| comp.into_iter().map(label).collect())
                    .collect(),
            }))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Input => 2,
        ErrorKind::Infeasible => 3,
        ErrorKind::Numerical => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("warning: {e}");
    }
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.to_text(cli.precision)),
                Format::Json => println!("{}", serde_json::to_string(&report).expect("report serializes")),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let line =
                serde_json::json!({ "error": e.code(), "kind": report::kind_name(e.kind()), "detail": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(exit_code(&e))
        }
    }
}
