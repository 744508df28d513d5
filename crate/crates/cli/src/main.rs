use std::fmt::Display;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use arcring::complex::Cube;
use arcring::corpus::Move;
use arcring::invariants::kauffman;
use arcring::report::{self, envelope, Coefficients};
use arcring::{parse_input, Error, InputFormat, SliceKind, TangleWord};

#[derive(Parser)]
#[command(name = "arcring", version, about = "Arc rings, tangle complexes and their homology")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKind {
    Auto,
    Word,
    Braid,
    Pd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "F2", alias = "f2")]
    F2,
}

#[derive(clap::Args)]
struct Input {
    /// Input file, `-` for standard input.
    #[arg(short, long)]
    input: PathBuf,
    /// How to read the input.
    #[arg(long, value_enum, default_value_t = InputKind::Auto)]
    input_format: InputKind,
}

#[derive(Subcommand)]
enum Command {
    /// Ranks and basis of the arc ring H^n.
    Ring {
        #[arg(long)]
        n: usize,
        /// Also list every nonzero product of basis elements.
        #[arg(long)]
        table: bool,
    },
    /// Cartan matrix of H^n and its determinant.
    Cartan {
        #[arg(long)]
        n: usize,
    },
    /// Kauffman bracket of a diagram.
    Bracket(Input),
    /// Homology of a link diagram.
    Kh {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Coeff::Z)]
        coeff: Coeff,
        /// Compute from the full cube instead of the simplified complex.
        #[arg(long)]
        no_simplify: bool,
    },
    /// The complex of a tangle diagram.
    Tangle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        simplify: bool,
    },
    /// Checks invariance under the local moves inside a fixed outer diagram.
    Verify {
        /// Comma-separated subset of r1l, r1r, r2, r3.
        #[arg(long, value_delimiter = ',', default_value = "r1l,r1r,r2,r3")]
        moves: Vec<String>,
        /// Largest number of boundary strands (even).
        #[arg(long, default_value_t = 6)]
        max_strands: usize,
        /// Also check this many random words (seeded by --seed).
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Integral homology of every closure of a tangle.
    Closures(Input),
}

/// Random-word checks run by `verify --random`.
#[derive(Serialize, Deserialize)]
struct RandomCheck {
    word: String,
    squares_anticommute: bool,
    is_complex: bool,
    euler_is_kauffman: bool,
    simplified_euler_agrees: bool,
}

#[derive(Serialize, Deserialize)]
struct VerifyOutput {
    #[serde(flatten)]
    moves: report::VerifyReport,
    seed: u64,
    random: Vec<RandomCheck>,
}

impl Display for VerifyOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.moves)?;
        if !self.random.is_empty() {
            let ok = self.random.iter().filter(|r| r.passed()).count();
            writeln!(f, "random words (seed {}): {ok}/{} pass", self.seed, self.random.len())?;
            for r in self.random.iter().filter(|r| !r.passed()) {
                writeln!(f, "  FAIL {}", r.word)?;
            }
        }
        Ok(())
    }
}

impl RandomCheck {
    fn passed(&self) -> bool {
        self.squares_anticommute && self.is_complex && self.euler_is_kauffman && self.simplified_euler_agrees
    }
}

fn random_word(rng: &mut ChaCha8Rng) -> TangleWord {
    let mut w = TangleWord::new(2 * rng.gen_range(0..=2)).expect("even");
    for _ in 0..rng.gen_range(1..=6) {
        let points = w.top_points();
        let kind = [SliceKind::X, SliceKind::XBar, SliceKind::Cap, SliceKind::Cup][rng.gen_range(0..4)];
        if kind == SliceKind::Cup && points < 6 {
            w.push(kind, rng.gen_range(0..=points)).expect("cup fits");
        } else if kind != SliceKind::Cup && points >= 2 {
            w.push(kind, rng.gen_range(0..points - 1)).expect("slice fits");
        }
    }
    w
}

fn random_checks(seed: u64, count: usize) -> arcring::Result<Vec<RandomCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w = random_word(&mut rng);
            let cube = Cube::build(&w)?;
            let c = cube.complex();
            let k = kauffman(&w)?;
            Ok(RandomCheck {
                word: w.to_string(),
                squares_anticommute: cube.squares_anticommute(),
                is_complex: c.is_complex(),
                euler_is_kauffman: c.euler_class() == k,
                simplified_euler_agrees: c.simplify().euler_class() == k,
            })
        })
        .collect()
}

enum Failure {
    Parse(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse_error() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

fn read_word(input: &Input) -> Result<TangleWord, Failure> {
    let text = if input.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Compute(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&input.input)
            .map_err(|e| Failure::Compute(format!("reading {}: {e}", input.input.display())))?
    };
    let format = match input.input_format {
        InputKind::Auto => InputFormat::Auto,
        InputKind::Word => InputFormat::Word,
        InputKind::Braid => InputFormat::Braid,
        InputKind::Pd => InputFormat::Pd,
    };
    Ok(parse_input(&text, format)?)
}

fn emit<T: Serialize>(format: Format, command: &str, body: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let out = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(command, body))
                .map_err(|e| Failure::Compute(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => text(),
    };
    match std::io::stdout().lock().write_all(out.as_bytes()) {
        // A closed pipe (`arcring ... | head`) is not an error.
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Compute(e.to_string())),
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let fmt = cli.format;
    match &cli.command {
        Command::Ring { n, table } => {
            let r = report::ring_report(*n, *table)?;
            emit(fmt, "ring", &r, || r.to_string())
        }
        Command::Cartan { n } => {
            let r = report::cartan(*n);
            emit(fmt, "cartan", &r, || report::cartan_text(&r))
        }
        Command::Bracket(input) => {
            let r = report::bracket_report(&read_word(input)?)?;
            emit(fmt, "bracket", &r, || r.to_string())
        }
        Command::Kh { input, coeff, no_simplify } => {
            let c = match coeff {
                Coeff::Z => Coefficients::Z,
                Coeff::Q => Coefficients::Q,
                Coeff::F2 => Coefficients::F2,
            };
            let r = report::kh_report(&read_word(input)?, c, !no_simplify)?;
            emit(fmt, "kh", &r, || r.to_string())
        }
        Command::Tangle { input, simplify } => {
            let r = report::tangle_report(&read_word(input)?, *simplify)?;
            emit(fmt, "tangle", &r, || r.to_string())
        }
        Command::Closures(input) => {
            let r = report::closures_report(&read_word(input)?)?;
            emit(fmt, "closures", &r, || r.to_string())
        }
        Command::Verify { moves, max_strands, random } => {
            let mut ms = Vec::new();
            for m in moves {
                ms.push(Move::from_code(m.trim()).ok_or_else(|| {
                    Failure::Parse(format!("unknown move `{m}` (expected r1l, r1r, r2 or r3)"))
                })?);
            }
            if *max_strands < 2 || max_strands % 2 != 0 {
                return Err(Failure::Parse(format!("--max-strands must be even and at least 2, got {max_strands}")));
            }
            let out = VerifyOutput {
                moves: report::verify_report(&ms, *max_strands)?,
                seed: cli.seed,
                random: random_checks(cli.seed, *random)?,
            };
            emit(fmt, "verify", &out, || out.to_string())?;
            let ok = out.moves.all_equivalent && out.random.iter().all(RandomCheck::passed);
            if ok {
                Ok(())
            } else {
                Err(Failure::Compute("some checks failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
