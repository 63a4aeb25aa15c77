use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use superbi_cli::{eval_expr, output, parse_expr, run_suite, Format, SuiteName, SuiteOptions};
use superbi_core::eigen::Subspace;
use superbi_core::scalars::ParamPoint;
use superbi_core::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SubspaceChoice {
    Odd,
    Even,
    Both,
}

/// Exact verification of the Bannai-Ito algebra realized on superspace.
#[derive(Debug, Parser)]
#[command(name = "superbi", version)]
struct Cli {
    /// Verification suite to run.
    #[arg(long, value_enum, conflicts_with = "expr")]
    suite: Option<SuiteName>,

    /// Degree bound for the action identities.
    #[arg(long, default_value_t = 8,
          value_parser = clap::value_parser!(u32).range(0..=i64::from(superbi_cli::suites::MAX_DEGREE_LIMIT)))]
    max_degree: u32,

    /// Degree bound N for the eigenbasis, tridiagonal and Jacobi suites.
    #[arg(long = "max-N", default_value_t = 5,
          value_parser = clap::value_parser!(u32).range(0..=i64::from(superbi_cli::suites::MAX_N_LIMIT)))]
    max_n: u32,

    #[arg(long, value_enum, default_value = "both")]
    subspace: SubspaceChoice,

    /// Bind the parameters, e.g. nu1=1/3,nu2=2/5,nu3=3/7.
    #[arg(long, value_parser = parse_params)]
    params: Option<ParamPoint>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Evaluate one expression, print its normal form and whether it vanishes.
    #[arg(long)]
    expr: Option<String>,

    /// Seed for the randomized suites.
    #[arg(long, env = "SUPERBI_SEED", default_value_t = 0x5eed)]
    seed: u64,

    /// Number of random cases in the kernel and oracle suites.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

fn parse_params(s: &str) -> Result<ParamPoint, String> {
    let mut point: [Option<Rational>; 3] = [None, None, None];
    for part in s.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected nuJ=value, got '{part}'"))?;
        let j = match name.trim() {
            "nu1" => 0,
            "nu2" => 1,
            "nu3" => 2,
            other => return Err(format!("unknown parameter '{other}'")),
        };
        let r: Rational = value
            .trim()
            .parse()
            .map_err(|_| format!("'{value}' is not a rational number"))?;
        if point[j].replace(r).is_some() {
            return Err(format!("{} given twice", name.trim()));
        }
    }
    let [Some(a), Some(b), Some(c)] = point else {
        return Err("all of nu1, nu2, nu3 are required".into());
    };
    Ok([a, b, c])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(text) = &cli.expr {
        let ast = match parse_expr(text) {
            Ok(ast) => ast,
            Err(e) => {
                eprintln!("parse error at {e}");
                return ExitCode::from(2);
            }
        };
        return match eval_expr(&ast, cli.params.as_ref()) {
            Ok(op) => {
                println!("{op}");
                println!("zero: {}", op.is_zero());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("evaluation error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let Some(suite) = cli.suite else {
        eprintln!("nothing to do: pass --suite or --expr (see --help)");
        return ExitCode::from(2);
    };
    let options = SuiteOptions {
        max_degree: cli.max_degree,
        max_n: cli.max_n,
        subspaces: match cli.subspace {
            SubspaceChoice::Odd => vec![Subspace::Odd],
            SubspaceChoice::Even => vec![Subspace::Even],
            SubspaceChoice::Both => Subspace::ALL.to_vec(),
        },
        params: cli.params,
        seed: cli.seed,
        samples: cli.samples,
    };
    match run_suite(suite, &options) {
        Ok(report) => {
            print!("{}", output::render(&report, cli.format));
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("invalid options: {e}");
            ExitCode::from(2)
        }
    }
}
