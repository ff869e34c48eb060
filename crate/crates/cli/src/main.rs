use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lensbordant::knot::Parity;
use lensbordant::surgery::RecoverMode;
use lensbordant::E8Vector;
use lensbordant_cli::commands::{self, Outcome};
use lensbordant_cli::{input, CliError, KnotInput};

/// Changemaker vectors, coin games and lensbordant surgery searches.
#[derive(Parser)]
#[command(name = "lensbordant", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Changemaker predicates.
    #[command(subcommand)]
    Changemaker(ChangemakerCmd),
    /// The coin game and its relevant coefficients.
    #[command(subcommand)]
    Coin(CoinCmd),
    /// Torus knots and V-sequences.
    #[command(subcommand)]
    Knot(KnotCmd),
    /// Slope windows, bounds and reconstruction.
    #[command(subcommand)]
    Surgery(SurgeryCmd),
    /// Continued fractions and lattice embeddings.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// The E8-changemaker predicate and the Poincaré sphere threshold.
    #[command(subcommand)]
    E8(E8Cmd),
    /// Search every r and parity for slopes of one knot.
    Scan(ScanArgs),
}

#[derive(Subcommand)]
enum ChangemakerCmd {
    /// Test whether a vector is a changemaker.
    Check { sigma: String },
}

#[derive(Subcommand)]
enum CoinCmd {
    /// Best score with at most M coins.
    TSigma {
        sigma: String,
        m: u64,
        /// Also report the fractional relaxation.
        #[arg(long)]
        rational: bool,
    },
    /// Least budget reaching each score.
    VSigma {
        sigma: String,
        #[arg(long, default_value_t = 20)]
        upto: u64,
    },
    /// Number of purchase plans with at most M coins.
    CountPlans { m: u64 },
    /// Check the structural identities of the coin game.
    Structure {
        sigma: String,
        #[arg(long, default_value_t = 3)]
        x_max: u64,
    },
}

#[derive(Subcommand)]
enum KnotCmd {
    /// Alexander polynomial and V-sequence of T(p,q).
    Torus { p: u64, q: u64 },
    /// The relevant subsequence seen at slope r²p.
    Relevant {
        #[arg(long)]
        v: String,
        #[arg(long)]
        r: u64,
        #[arg(long, value_enum)]
        parity: ParityArg,
    },
}

#[derive(Subcommand)]
enum SurgeryCmd {
    /// Allowed slopes and p for given ν⁺ and r.
    Window { nu_plus: u64, r: u64 },
    /// Check V_0 against the bounds forced by σ.
    Bounds {
        sigma: String,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        v0: u64,
    },
    /// Every changemaker consistent with a V-sequence.
    Reconstruct {
        #[arg(long)]
        v: String,
        #[arg(long)]
        r: u64,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        p_hint: Option<u64>,
        #[arg(long)]
        p_max: Option<u64>,
    },
    /// The one-parameter family (4s+3, 2s+1, s+1, s, 1, …, 1).
    #[command(subcommand)]
    Family(FamilyCmd),
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Print the family member for s.
    Sigma { s: u64 },
    /// Evaluate the family formulas and inequalities.
    Verify { s: u64 },
    /// Values of s compatible with a V-sequence.
    Recover {
        #[arg(long)]
        v: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Rge2)]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Continued fraction expansion of p/q.
    Hj { p: u64, q: u64 },
    /// Lens spaces whose linear lattice is the complement of σ.
    Realize { sigma: String },
    /// Embed one linear lattice in the complement of σ.
    Embed { sigma: String, p: u64, q: u64 },
}

#[derive(Subcommand)]
enum E8Cmd {
    /// Test the E8-changemaker conditions for τ = (s, σ).
    Check {
        /// Eight coordinates; half-integers as "a/2". Defaults to zero.
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        sigma: String,
    },
    /// Which sphere an (r, p) lens space surgery comes from.
    Classify {
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Torus knot as "p,q".
    #[arg(long, conflicts_with = "v", required_unless_present = "v")]
    torus: Option<String>,
    /// Explicit V-sequence.
    #[arg(long)]
    v: Option<String>,
    #[arg(long, default_value_t = 4)]
    r_max: u64,
    /// Cap on p; required to search r = 1.
    #[arg(long)]
    p_max: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Odd => Parity::Odd,
            ParityArg::Even => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    R1,
    Rge2,
}

impl From<ModeArg> for RecoverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::R1 => RecoverMode::R1,
            ModeArg::Rge2 => RecoverMode::Rge2,
        }
    }
}

fn parse_torus(text: &str) -> Result<KnotInput, CliError> {
    let bad = || CliError::Usage(format!("torus knot must look like \"2,3\", got {text:?}"));
    let (p, q) = text.split_once(',').ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let q = q.trim().parse().map_err(|_| bad())?;
    Ok(KnotInput::Torus { p, q })
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Changemaker(ChangemakerCmd::Check { sigma }) => {
            commands::changemaker_check(&input::entries(&sigma)?)
        }
        Command::Coin(cmd) => match cmd {
            CoinCmd::TSigma { sigma, m, rational } => {
                commands::coin_t_sigma(&input::changemaker(&sigma)?, m, rational)
            }
            CoinCmd::VSigma { sigma, upto } => {
                commands::coin_v_sigma(&input::changemaker(&sigma)?, upto)
            }
            CoinCmd::CountPlans { m } => commands::coin_count_plans(m),
            CoinCmd::Structure { sigma, x_max } => {
                commands::coin_structure(&input::changemaker(&sigma)?, x_max)
            }
        },
        Command::Knot(cmd) => match cmd {
            KnotCmd::Torus { p, q } => commands::knot_torus(p, q),
            KnotCmd::Relevant { v, r, parity } => {
                commands::knot_relevant(&input::v_sequence(&v)?, r, parity.into())
            }
        },
        Command::Surgery(cmd) => match cmd {
            SurgeryCmd::Window { nu_plus, r } => commands::surgery_window(nu_plus, r),
            SurgeryCmd::Bounds { sigma, r, v0 } => {
                commands::surgery_bounds(&input::changemaker(&sigma)?, r, v0)
            }
            SurgeryCmd::Reconstruct {
                v,
                r,
                parity,
                p_hint,
                p_max,
            } => commands::surgery_reconstruct(
                &input::v_sequence(&v)?,
                r,
                parity.into(),
                p_hint,
                p_max,
            ),
            SurgeryCmd::Family(FamilyCmd::Sigma { s }) => commands::family_show(s),
            SurgeryCmd::Family(FamilyCmd::Verify { s }) => commands::family_verify(s),
            SurgeryCmd::Family(FamilyCmd::Recover { v, mode }) => {
                commands::family_recover(&input::v_sequence(&v)?, mode.into())
            }
        },
        Command::Lattice(cmd) => match cmd {
            LatticeCmd::Hj { p, q } => commands::lattice_hj(p, q),
            LatticeCmd::Realize { sigma } => {
                commands::lattice_realize(&input::changemaker(&sigma)?)
            }
            LatticeCmd::Embed { sigma, p, q } => {
                commands::lattice_embed(&input::changemaker(&sigma)?, p, q)
            }
        },
        Command::E8(cmd) => match cmd {
            E8Cmd::Check { s, sigma } => {
                let s = s
                    .as_deref()
                    .map(input::e8_vector)
                    .transpose()?
                    .unwrap_or(E8Vector::ZERO);
                commands::e8_check(s, input::entries(&sigma)?)
            }
            E8Cmd::Classify { genus, r, p } => commands::e8_classify(genus, r, p),
        },
        Command::Scan(args) => {
            let knot = match (&args.torus, &args.v) {
                (Some(t), _) => parse_torus(t)?,
                (None, Some(v)) => KnotInput::Sequence {
                    v: input::v_sequence(v)?.values().to_vec(),
                },
                (None, None) => return Err(CliError::Usage("give --torus or --v".into())),
            };
            commands::scan(&knot, args.r_max, args.p_max)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("warning: {e}");
    }
    match run(cli.command) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("valid JSON")
                );
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
