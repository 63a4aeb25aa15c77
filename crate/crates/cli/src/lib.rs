//! Expression language, verification suites and report output for the
//! `superbi` command.

pub mod expr;
pub mod output;
pub mod suites;

pub use expr::{eval_expr, interpret, parse_expr, ExprAst, ParseError};
pub use output::Format;
pub use suites::{run_suite, OptionsError, SuiteName, SuiteOptions};
