use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use iotacurve::invariants::{classify_detailed, sh_standard};
use iotacurve::iota::{build_standard, product, ValidateOptions};
use iotacurve::{Error, InvariantRecord, StandardParams};
use iotacurve_cli::input::{parse_complex, Parsed};
use iotacurve_cli::render::{render_svg, RenderOptions};
use iotacurve_cli::term::{paint, stderr_color, stdout_color};
use iotacurve_cli::verify::verify_suite;

#[derive(Parser)]
#[command(name = "iotacurve", version, about = "Local equivalence classes of almost iota-complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Params,
    Json,
}

#[derive(Args)]
struct Inputs {
    /// Inline inputs: `C(+,-2)` notation or a JSON complex.
    inputs: Vec<String>,
    /// Read an input from a file (may be repeated).
    #[arg(long = "file")]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "params")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Standard complex locally equivalent to the input.
    Classify(Inputs),
    /// P, Pω and the nonzero φₙ of the input's class.
    Invariants(Inputs),
    /// Tensor product of two complexes.
    Product {
        #[command(flatten)]
        inputs: Inputs,
        /// Print the class of the product instead of the complex.
        #[arg(long)]
        classify: bool,
    },
    /// The shift homomorphism shₙ applied to the input's class.
    Shift {
        #[arg(short = 'n')]
        n: u32,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Write an SVG picture of the input's immersed multicurve.
    Render {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the seeded property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value = "params")]
        format: Format,
    },
}

enum Failure {
    Syntax(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_syntax() {
            Failure::Syntax(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

fn read_inputs(inp: &Inputs, want: usize) -> Result<Vec<Parsed>, Failure> {
    let mut texts = inp.inputs.clone();
    for f in &inp.files {
        let t = fs::read_to_string(f).map_err(|e| Failure::Validation(format!("{}: {}", f.display(), e)))?;
        texts.push(t);
    }
    if texts.len() != want {
        return Err(Failure::Syntax(format!("expected {} input(s), got {}", want, texts.len())));
    }
    texts.iter().map(|t| parse_complex(t).map_err(Failure::from)).collect()
}

fn classify_parsed(p: &Parsed) -> Result<StandardParams, Failure> {
    match p {
        Parsed::Standard(s) => Ok(s.clone()),
        Parsed::Complex(c) => Ok(classify_detailed(c, ValidateOptions::default())?.params),
    }
}

fn print_params(p: &StandardParams, format: Format) {
    match format {
        Format::Params => println!("{}", p),
        Format::Json => println!("{}", json!({ "params": p.to_string() })),
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Classify(inp) => {
            let parsed = read_inputs(&inp, 1)?;
            let det = classify_detailed(&parsed[0].complex(), ValidateOptions::default())?;
            match inp.format {
                Format::Params => println!("{}", det.params),
                Format::Json => {
                    let v = json!({ "params": det.params.to_string(), "multicurve": det.trace.multicurve.to_json() });
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
            }
        }
        Command::Invariants(inp) => {
            let parsed = read_inputs(&inp, 1)?;
            let rec = InvariantRecord::from_params(&classify_parsed(&parsed[0])?);
            match inp.format {
                Format::Params => {
                    println!("class {}", rec.params);
                    println!("P = {}", rec.p);
                    println!("Pω = {}", rec.p_omega);
                    for (n, v) in &rec.phi {
                        println!("φ_{} = {}", n, v);
                    }
                }
                Format::Json => println!("{}", serde_json::to_string(&rec).expect("serializable")),
            }
        }
        Command::Product { inputs, classify } => {
            let parsed = read_inputs(&inputs, 2)?;
            let c = product(&parsed[0].complex(), &parsed[1].complex());
            if classify {
                let p = classify_detailed(&c, ValidateOptions::default())?.params;
                print_params(&p, inputs.format);
            } else {
                // A product is not a standard complex, so it is always printed as JSON.
                println!("{}", c.to_json_string());
            }
        }
        Command::Shift { n, inputs } => {
            let parsed = read_inputs(&inputs, 1)?;
            let p = sh_standard(&classify_parsed(&parsed[0])?, n)?;
            match inputs.format {
                Format::Params => println!("{}", p),
                Format::Json => println!("{}", build_standard(&p).to_json_string()),
            }
        }
        Command::Render { inputs, out } => {
            let parsed = read_inputs(&inputs, 1)?;
            let det = classify_detailed(&parsed[0].complex(), ValidateOptions::default())?;
            let opts = RenderOptions { title: Some(det.params.to_string()), ..RenderOptions::default() };
            let svg = render_svg(&det.trace.multicurve, &opts);
            fs::write(&out, svg).map_err(|e| Failure::Validation(format!("{}: {}", out.display(), e)))?;
        }
        Command::Verify { seed, trials, format } => {
            if trials == 0 {
                return Err(Failure::Validation("trials must be at least 1".into()));
            }
            let report = verify_suite(seed, trials);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
                Format::Params => {
                    let color = stdout_color();
                    println!("seed {} trials {}", report.seed, report.trials);
                    for p in &report.properties {
                        let tag = if p.failed == 0 { paint("PASS", "32", color) } else { paint("FAIL", "31", color) };
                        println!("{} {:<18} {} passed, {} failed", tag, p.name, p.passed, p.failed);
                        if let Some(cx) = &p.counterexample {
                            println!("     A = {}  B = {}  ({})", cx.a, cx.b, cx.detail);
                        }
                    }
                }
            }
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let color = stderr_color();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Validation(msg)) => {
            eprintln!("{} {}", paint("error:", "31", color), msg);
            ExitCode::from(1)
        }
        Err(Failure::Syntax(msg)) => {
            eprintln!("{} {}", paint("error:", "31", color), msg);
            ExitCode::from(2)
        }
    }
}
