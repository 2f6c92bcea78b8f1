//! `compcirc`: command-line front end for comparator circuits.
//!
//! Exit codes: 0 on success, 1 on bad input, 2 when a size guard refuses the
//! request. Every random choice is driven by `--seed` (default 0).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use compcirc::analysis::SubfunctionCensus;
use compcirc::circuit::{index_to_input, FORMAT_TAG};
use compcirc::hard_fn::{correlation, Andreev};
use compcirc::restrict::{apply_restriction, RestrictedResult, Restriction};
use compcirc::sat::{count_sat_brute, count_sat_memo, BlockPartition, PartitionStyle, SatOptions, SatReport};
use compcirc::shrinkage::{
    fool_test, identity_generator, kwise_generator, shrinkage_trial, KWiseSelectionSampler, SelectionSource,
    ShrinkageConfig, ShrinkageReport,
};
use compcirc::simplify::{simplify_full, useful_gate_bound};
use compcirc::{random_circuit, ComparatorCircuit, TruthTable};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format ccv1)");

#[derive(Parser, Debug)]
#[command(name = "compcirc", version = VERSION, about = "Comparator circuit toolkit")]
struct Cli {
    /// Worker threads for parallel loops; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a circuit on one input given as bits x1 x2 ... xn.
    Eval {
        file: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Print the truth table as hex (entry 0 is the most significant bit).
    Truthtable { file: PathBuf },
    /// Remove useless gates.
    Simplify {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a partial assignment such as "x1=0,x3=1".
    Restrict {
        file: PathBuf,
        #[arg(long)]
        fix: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count satisfying assignments.
    CountSat {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Memo)]
        method: Method,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Style::Consecutive)]
        style: Style,
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
    },
    /// Generate a uniformly random circuit.
    RandomCircuit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        wires: usize,
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parameters or truth table of the generalized Andreev function.
    Andreev {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Fixed message as hex; bit i-1 of the number is x_i.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        emit_truth_table: bool,
    },
    /// Exact agreement of a circuit with a reference function.
    Correlation {
        file: PathBuf,
        #[arg(long, value_enum)]
        against: Reference,
        #[arg(long)]
        k: usize,
    },
    /// Restriction trials measuring surviving wires.
    Shrinkage {
        file: Option<PathBuf>,
        /// Random circuit "n,wires,gates" drawn with --seed instead of a file.
        #[arg(long, conflicts_with = "file")]
        random: Option<String>,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = SelectionKind::Random)]
        selection: SelectionKind,
        /// Independence of k-wise selections.
        #[arg(long, default_value_t = 2)]
        independence: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact distinguishing advantage of a circuit against a generator.
    Fool {
        file: PathBuf,
        #[arg(long, value_enum)]
        generator: Generator,
        #[arg(long)]
        seed_len: Option<usize>,
        /// Independence of the k-wise generator.
        #[arg(long, default_value_t = 2)]
        independence: usize,
    },
    /// Subfunction census and wire lower bound for a hex truth table.
    Necip {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        blocks: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Brute,
    Memo,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Style {
    Consecutive,
    Interleaved,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportFormat {
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Reference {
    Andreev,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SelectionKind {
    Random,
    Kwise,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Generator {
    Uniform,
    Kwise,
    Constant,
}

#[derive(Debug)]
enum CliError {
    Lib(compcirc::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_guard() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<compcirc::Error> for CliError {
    fn from(e: compcirc::Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Parses a circuit file and insists that it survives a serialize/parse round trip.
fn load_circuit(path: &Path) -> CliResult<ComparatorCircuit> {
    let circuit = ComparatorCircuit::parse(&read(path)?)?;
    let again = ComparatorCircuit::parse(&circuit.to_text())?;
    if again != circuit {
        return Err(CliError::Usage(format!("{}: circuit does not round-trip", path.display())));
    }
    Ok(again)
}

fn load_truth_table(path: &Path, n: usize) -> CliResult<TruthTable> {
    let text = read(path)?;
    let tt = TruthTable::from_hex(n, text.trim())?;
    debug_assert_eq!(TruthTable::from_hex(n, &tt.to_hex())?, tt);
    Ok(tt)
}

fn parse_bits(s: &str) -> CliResult<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Usage(format!("input must be a string of 0 and 1, got {s:?}"))),
        })
        .collect()
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Eval { file, input } => {
            let c = load_circuit(&file)?;
            println!("{}", u8::from(c.evaluate(&parse_bits(&input)?)?));
        }
        Command::Truthtable { file } => {
            println!("{}", load_circuit(&file)?.truth_table()?.to_hex());
        }
        Command::Simplify { file, output } => {
            let c = load_circuit(&file)?;
            let s = simplify_full(&c)?;
            println!(
                "gates: {} -> {} (bound {})",
                c.num_gates(),
                s.num_gates(),
                useful_gate_bound(c.num_wires())
            );
            emit(&s.to_text(), output.as_deref())?;
        }
        Command::Restrict { file, fix, output } => {
            let c = load_circuit(&file)?;
            let rho = Restriction::parse_fixings(c.num_vars(), &fix)?;
            let text = match apply_restriction(&c, &rho)? {
                RestrictedResult::Constant(v) => format!("const {}\n", u8::from(v)),
                r => r.into_circuit(rho.num_free())?.to_text(),
            };
            emit(&text, output.as_deref())?;
        }
        Command::CountSat {
            file,
            method,
            k,
            style,
            report,
        } => {
            let c = load_circuit(&file)?;
            let start = Instant::now();
            match method {
                Method::Brute => {
                    let count = count_sat_brute(&c)?;
                    match report {
                        Some(ReportFormat::Csv) => println!("count\n{count}"),
                        None => println!("{count}"),
                    }
                }
                Method::Memo => {
                    let mut options = SatOptions::new(k);
                    options.style = match style {
                        Style::Consecutive => PartitionStyle::Consecutive,
                        Style::Interleaved => PartitionStyle::Interleaved,
                    };
                    let r = count_sat_memo(&c, options)?;
                    match report {
                        Some(ReportFormat::Csv) => println!("{}\n{}", SatReport::csv_header(), r.csv_row()),
                        None => println!("{}", r.count),
                    }
                }
            }
            eprintln!("elapsed: {:?}", start.elapsed());
        }
        Command::RandomCircuit {
            n,
            wires,
            gates,
            seed,
            output,
        } => {
            emit(&random_circuit(n, wires, gates, seed)?.to_text(), output.as_deref())?;
        }
        Command::Andreev {
            n,
            k,
            x,
            emit_truth_table,
        } => {
            let a = Andreev::new(n, k)?;
            let message = x.map(|hex| parse_message(&hex, n)).transpose()?;
            if emit_truth_table {
                let tt = match &message {
                    Some(x) => a.fixed_message_table(x)?,
                    None => a.truth_table()?,
                };
                println!("{}", tt.to_hex());
            } else {
                let p = a.params();
                println!("n: {n}");
                println!("k: {k}");
                println!("field_log: {}", p.field_log());
                println!("rs_degree: {}", p.rs_degree());
                println!("codeword_len: {}", p.codeword_len());
                println!("distance_bound: {}", p.distance_bound());
                println!("in_distance_regime: {}", p.in_distance_regime());
            }
        }
        Command::Correlation { file, against, k } => {
            let c = load_circuit(&file)?;
            let f = match against {
                Reference::Andreev => {
                    if c.num_vars() % 2 != 0 {
                        return Err(CliError::Usage(format!(
                            "an Andreev comparison needs an even number of variables, got {}",
                            c.num_vars()
                        )));
                    }
                    Andreev::new(c.num_vars() / 2, k)?.truth_table()?
                }
            };
            println!("{}", correlation(&c, &f)?);
        }
        Command::Shrinkage {
            file,
            random,
            p,
            trials,
            selection,
            independence,
            seed,
            c,
            csv,
        } => {
            let circuit = match (file, random) {
                (Some(path), None) => load_circuit(&path)?,
                (None, Some(shape)) => {
                    let [n, wires, gates] = parse_shape(&shape)?;
                    random_circuit(n, wires, gates, seed)?
                }
                _ => return Err(CliError::Usage("give a circuit file or --random n,wires,gates".into())),
            };
            let source = match selection {
                SelectionKind::Random => SelectionSource::Random { p },
                SelectionKind::Kwise => SelectionSource::KWise(KWiseSelectionSampler::for_probability(
                    circuit.num_vars(),
                    p,
                    independence,
                )?),
            };
            let config = ShrinkageConfig { trials, c, seed };
            let report = shrinkage_trial(&circuit, &source, config)?;
            print_shrinkage(&report);
            if let Some(path) = csv {
                write(&path, &report.csv())?;
            }
        }
        Command::Fool {
            file,
            generator,
            seed_len,
            independence,
        } => {
            let c = load_circuit(&file)?;
            let n = c.num_vars();
            let eps = match generator {
                Generator::Uniform => fool_test(&c, seed_len.unwrap_or(n), identity_generator(n))?,
                Generator::Constant => fool_test(&c, seed_len.unwrap_or(1), move |_| vec![false; n])?,
                Generator::Kwise => {
                    let sampler = KWiseSelectionSampler::for_probability(n, 0.5, independence)?;
                    let r = sampler.seed_len();
                    if seed_len.is_some_and(|s| s != r) {
                        return Err(CliError::Usage(format!(
                            "a {independence}-wise generator on {n} bits uses exactly {r} seed bits"
                        )));
                    }
                    fool_test(&c, r, kwise_generator(sampler))?
                }
            };
            println!("{eps}");
        }
        Command::Necip { file, n, blocks } => {
            let f = load_truth_table(&file, n)?;
            let partition = BlockPartition::parse_ranges(n, &blocks)?;
            let census = SubfunctionCensus::compute(&f, &partition)?;
            println!("block,size,subfunctions,non_constant,wire_bound");
            for b in &census.blocks {
                let vars: Vec<String> = b.block.iter().map(|v| format!("x{v}")).collect();
                println!(
                    "{},{},{},{},{}",
                    vars.join(" "),
                    b.block.len(),
                    b.subfunctions,
                    b.non_constant,
                    b.wire_bound
                );
            }
            println!("bound: {}", census.total_bound());
        }
    }
    Ok(())
}

fn parse_message(hex: &str, n: usize) -> CliResult<Vec<bool>> {
    let digits = hex.trim_start_matches("0x");
    let value = u64::from_str_radix(digits, 16).map_err(|e| CliError::Usage(format!("bad --x {hex:?}: {e}")))?;
    if n < 64 && value >> n != 0 {
        return Err(CliError::Usage(format!("--x {hex} has more than {n} bits")));
    }
    Ok(index_to_input(value as usize, n))
}

fn parse_shape(s: &str) -> CliResult<[usize; 3]> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad --random {s:?}: {e}")))?;
    parts
        .try_into()
        .map_err(|_| CliError::Usage(format!("--random expects n,wires,gates, got {s:?}")))
}

fn print_shrinkage(r: &ShrinkageReport) {
    println!("p: {}", r.p);
    println!("trials: {}", r.trials());
    println!("wires: {}", r.num_wires);
    println!("threshold: {}", r.threshold);
    println!("mean_survived: {}", r.mean_survived());
    println!("tail_frequency: {}", r.tail_frequency());
    println!("heavy_set_size: {}", r.heavy_set.len());
    println!("heavy_bound: {}", r.heavy_bound);
    println!("heavy_within_bound: {}", r.heavy_within_bound());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    debug_assert!(VERSION.ends_with(&format!("(format {FORMAT_TAG})")));
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
