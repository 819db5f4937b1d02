use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use agcode::code::{format_message, format_word, parse_message, parse_word, AgCode, CodeFamily};
use agcode::decoder::{criterion_floor, Criterion, DecodeOptions, Decoder};
use agcode::harness::{self, ErrorMode, GammaChoice, TrialStats};
use agcode::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($out, $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "agcode", version, about = "One-point AG codes: construction, encoding and Gröbner-basis list decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CurveArg {
    /// Curve file, or the name of a bundled curve (klein, hermitian16, gs9).
    #[arg(long)]
    curve: String,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    curve: CurveArg,
    /// Designed distance; selects Γ = {s ∈ Ĥ(Q) | ν(s) ≥ delta}.
    #[arg(long, required_unless_present = "gamma", conflicts_with = "gamma")]
    delta: Option<u32>,
    /// Explicit Γ as a comma-separated list of pole orders.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<u32>>,
}

impl CodeArgs {
    fn choice(&self) -> GammaChoice {
        match (&self.delta, &self.gamma) {
            (Some(d), _) => GammaChoice::Delta(*d),
            (None, Some(g)) => GammaChoice::Explicit(g.clone()),
            (None, None) => unreachable!("clap enforces one of --delta/--gamma"),
        }
    }

    fn build(&self) -> agcode::Result<AgCode> {
        let family = Arc::new(harness::load_family(&self.curve.curve)?);
        harness::build_code(family, &self.choice())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CritArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

impl From<CritArg> for Criterion {
    fn from(c: CritArg) -> Criterion {
        match c {
            CritArg::One => Criterion::First,
            CritArg::Two => Criterion::Second,
            CritArg::Three => Criterion::Third,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    R,
    N,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Lines,
}

#[derive(Subcommand)]
enum Command {
    /// Semigroup data, Ĥ(Q) and the ν table of a curve.
    Info(CurveArg),
    /// Γ, dimension and designed distance of a code.
    BuildCode(CodeArgs),
    /// Encode a message file of `s value` pairs.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Message file; standard input if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// List-decode a received word given as whitespace-separated symbols.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        tau: usize,
        #[arg(long, value_enum, default_value = "3")]
        criterion: CritArg,
        /// Received word file; standard input if omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Iteration cap; defaults to the closed-form bound.
        #[arg(long)]
        max_iterations: Option<u128>,
    },
    /// Monte-Carlo decoding trials.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        tau: usize,
        /// Run only this criterion; all three by default.
        #[arg(long, value_enum)]
        criterion: Option<CritArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum, default_value = "r", ignore_case = true)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Closed-form iteration bounds for each criterion.
    Bounds {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        tau: usize,
    },
}

fn read_input(path: &Option<PathBuf>) -> agcode::Result<String> {
    match path {
        Some(p) => Ok(fs::read_to_string(p)?),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn info(out: &mut String, fam: &CodeFamily) {
    let field = fam.field();
    let curve = &fam.ring.curve;
    let sg = &fam.ring.semigroup;
    outln!(out, "field GF({}) = GF({}^{}) modulus {}", field.order(), field.characteristic(), field.degree(), join(field.modulus()));
    outln!(out, "weights {}", join(&curve.weights));
    outln!(out, "points {}", fam.n());
    outln!(out, "genus {}", sg.genus());
    outln!(out, "generators {}", join(&sg.generators));
    outln!(out, "gaps {}", join(&sg.gaps));
    outln!(out, "apery {}", join(&sg.apery));
    outln!(out, "eta pole orders {}", join(&fam.eta.pole));
    outln!(out, "hhat {}", join(&fam.eval.hhat));
    outln!(out, "s nu");
    for &s in &fam.eval.hhat {
        outln!(out, "{s} {}", fam.nu(s));
    }
}

fn print_code(out: &mut String, code: &AgCode) {
    outln!(out, "n {}", code.n());
    outln!(out, "dim {}", code.spec.dim);
    outln!(out, "dag {}", code.spec.dag);
    outln!(out, "gamma {}", join(&code.spec.gamma));
}

fn run(cli: Cli, out: &mut String) -> agcode::Result<u8> {
    match cli.command {
        Command::Info(c) => info(out, &harness::load_family(&c.curve)?),
        Command::BuildCode(args) => print_code(out, &args.build()?),
        Command::Encode { code, input } => {
            let code = code.build()?;
            let msg = parse_message(code.field(), &code.spec, &read_input(&input)?)?;
            outln!(out, "{}", format_word(&code.encode(&msg)));
        }
        Command::Decode { code, tau, criterion, input, max_iterations } => {
            let code = code.build()?;
            if tau > code.n() {
                return Err(Error::InvalidConfig(format!("tau {tau} exceeds code length {}", code.n())));
            }
            let r = parse_word(code.field(), &read_input(&input)?, code.n())?;
            let mut opts = DecodeOptions::new(tau, criterion.into());
            opts.iteration_cap = max_iterations;
            let res = Decoder::new(&code, opts).list_decode(&r)?;
            outln!(
                out,
                "found {} iterations {} mul/div {} bound {}",
                res.entries.len(),
                res.iterations,
                res.cost.total(),
                res.cost.bound
            );
            for e in &res.entries {
                outln!(out, "distance {}", e.distance);
                outln!(out, "codeword {}", format_word(&e.codeword));
                outln!(out, "message {}", format_message(&code.spec, &e.message).replace('\n', ", "));
            }
        }
        Command::Simulate { code: args, tau, criterion, seed, trials, mode, format } => {
            let code = args.build()?;
            let criteria: Vec<Criterion> = match criterion {
                Some(c) => vec![c.into()],
                None => Criterion::ALL.to_vec(),
            };
            let mode = match mode {
                ModeArg::R => ErrorMode::Random,
                ModeArg::N => ErrorMode::TowardNearest,
            };
            let name = curve_label(&args.curve.curve);
            let sim = harness::simulate(&code, &name, tau, mode, &criteria, trials, seed)?;
            if let Format::Table = format {
                outln!(out, "{}", TrialStats::table_header());
            }
            for s in &sim.stats {
                match format {
                    Format::Table => outln!(out, "{}", s.table_row()),
                    Format::Lines => outln!(out, "{}", s.line()),
                }
            }
            if criteria.len() > 1 && !sim.criteria_agree() {
                eprintln!("warning: criteria returned different codeword sets");
            }
            if let Some(s) = sim.stats.iter().find(|s| !s.all_succeeded()) {
                eprintln!(
                    "error: transmitted codeword missing from the list in {} of {} trials (criterion {})",
                    s.trials - s.successes,
                    s.trials,
                    s.criterion
                );
                return Ok(2);
            }
        }
        Command::Bounds { code, tau } => {
            let code = code.build()?;
            print_code(out, &code);
            match criterion_floor(&code, tau) {
                Some(f) => outln!(out, "floor {f}"),
                None => outln!(out, "floor none"),
            }
            outln!(out, "criterion 1: {}", harness::iteration_bound(&code, tau, Criterion::First));
            outln!(out, "criterion 2: {}", harness::iteration_bound(&code, tau, Criterion::Second));
            outln!(out, "criterion 3: {}", harness::iteration_bound(&code, tau, Criterion::Third));
        }
    }
    Ok(0)
}

fn curve_label(curve: &str) -> String {
    let base = curve.rsplit('/').next().unwrap_or(curve);
    base.strip_suffix(".curve").unwrap_or(base).to_string()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        Error::InvalidConfig(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    // A closed pipe downstream is not worth reporting.
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
