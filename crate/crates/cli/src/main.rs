use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cy3_cli::{parse_presentation, render_text, run_pipeline, Check, PipelineInput};
use cy3_core::normalform::default_bound;
use cy3_core::tensoralg::{parse_rational, Rational};

#[derive(Parser)]
#[command(name = "cy3", version, about = "Verify Ore-extension presentations of graded 3-Calabi-Yau algebras")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the matrix and that δ(r) = 0
    Validate(Common),
    /// Build the superpotential and check cyclicity and the Jacobian presentation
    Superpotential(Common),
    /// Hilbert series of the extension and the Beilinson grid
    Hilbert(Common),
    /// Graded symmetry of the Yoneda algebra
    CyCheck(Common),
    /// Coherence witnesses
    Coherence(Common),
    /// Congruence to the standard anti-symmetric matrix
    ReduceStandard(Common),
    /// Every stage
    All(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct Common {
    /// Presentation file
    file: PathBuf,
    /// Degree bound for Gröbner completion and per-degree checks
    #[arg(long)]
    max_degree: Option<usize>,
    /// Write the structured report to this path
    #[arg(long)]
    output: Option<PathBuf>,
    /// Format of the report on standard output
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Parameter value, overriding OPTIONS (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, Rational)>,
}

fn parse_param(s: &str) -> Result<(String, Rational), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v = parse_rational(v).ok_or_else(|| format!("`{v}` is not a rational"))?;
    Ok((k.to_string(), v))
}

impl Verb {
    fn split(&self) -> (&Common, &'static [Check]) {
        match self {
            Verb::Validate(c) => (c, &[Check::Validation, Check::DeltaR]),
            Verb::Superpotential(c) => (c, &[Check::Superpotential]),
            Verb::Hilbert(c) => (c, &[Check::Hilbert, Check::Beilinson]),
            Verb::CyCheck(c) => (c, &[Check::CalabiYau]),
            Verb::Coherence(c) => (c, &[Check::Coherence]),
            Verb::ReduceStandard(c) => (c, &[Check::StandardForm]),
            Verb::All(c) => (c, &Check::ALL),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, checks) = cli.verb.split();
    let path = args.file.display();
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let file = match parse_presentation(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let overrides: BTreeMap<String, Rational> = args.params.iter().cloned().collect();
    let instance = match file.instantiate(&overrides) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut parameters = file.params.clone();
    parameters.extend(overrides);
    let bound = args.max_degree.or(file.bound).unwrap_or_else(|| default_bound(file.n()));
    let input = PipelineInput { instance: &instance, ore_variable: &file.ore_variable, bound, parameters };
    let report = run_pipeline(&input, checks);

    let structured = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(out) = &args.output {
        if let Err(e) = std::fs::write(out, &structured) {
            eprintln!("error: {}: {e}", out.display());
            return ExitCode::from(2);
        }
    }
    match args.format {
        Format::Text => print!("{}", render_text(&report)),
        Format::Structured => print!("{structured}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
