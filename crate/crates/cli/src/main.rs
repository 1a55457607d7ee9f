//! `reductlab`: command-line workbench for filters, reduced products,
//! relations on products, and strongly independent matrices.

mod commands;
mod docs;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::{InputError, Report, Verdict};

#[derive(Debug, Parser)]
#[command(name = "reductlab", version, about = "Finite-model workbench for filters, reduced products and SLI matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Filters on a finite index set.
    #[command(subcommand)]
    Filter(FilterCmd),
    /// Finite algebras given by operation tables.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Reduced products and maps on products.
    #[command(subcommand)]
    Redprod(RedprodCmd),
    /// Formal relations, perps, and almost direct factors.
    #[command(subcommand)]
    Rel(RelCmd),
    /// Strongly independent matrices and reduced powers.
    #[command(subcommand)]
    Ek(EkCmd),
    /// Run every invariant suite within the caps.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Subcommand)]
enum FilterCmd {
    /// Check that the listed sets form a filter.
    Check(FileArg),
    /// Decompose a filter into principal ultrafilters.
    Decompose(FileArg),
    /// Least n for which the filter is n-bounded, or check a given n.
    Bdd(BddArgs),
}

#[derive(Debug, Subcommand)]
enum AlgebraCmd {
    /// Validate tables and check the axioms of the signature.
    Check(AlgebraArg),
    /// Check an equation as an identity.
    Identity(IdentityArgs),
}

#[derive(Debug, Subcommand)]
enum RedprodCmd {
    /// Build a reduced product.
    Build(BuildArgs),
    /// The filter a map on a product detects.
    Detect(FileArg),
    /// Factor a homomorphism through finitely many ultraproducts.
    Factor(FileArg),
    /// Check that a product maps onto a product of ultraproducts.
    Surj(SurjArgs),
}

#[derive(Debug, Subcommand)]
enum RelCmd {
    /// Check the substitution conditions of each relation.
    Dr(DrArgs),
    /// Compute the perp of a congruence.
    Perp(PerpArgs),
    /// Check the almost-direct-factor facts.
    Almost(AlmostArgs),
    /// Check strictness along the chain of images of a surjection.
    Chain(ChainArgs),
    /// Factor a surjection followed by the center quotient.
    Ccfactor(CcArgs),
}

#[derive(Debug, Subcommand)]
enum EkCmd {
    /// Build a strongly independent matrix.
    Build(EkBuildArgs),
    /// Verify that every square minor is nonsingular.
    Verify(MatrixArg),
    /// Check the zero-count bound for coefficient vectors.
    Zerobound(ZeroboundArgs),
    /// Cardinality and dimension of a reduced power.
    Redpow(RedpowArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct FileArg {
    /// JSON document.
    pub file: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct BddArgs {
    /// Filter document.
    pub file: PathBuf,
    /// Check n-boundedness for this n.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct AlgebraArg {
    /// Algebra document path or built-in name.
    pub algebra: String,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentityArgs {
    /// Algebra document path or built-in name.
    pub algebra: String,
    /// Equation `lhs = rhs` in prefix notation.
    #[arg(long)]
    pub equation: String,
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    /// Factor algebras, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub factors: Vec<String>,
    /// Filter document on the index set of the factors.
    #[arg(long)]
    pub filter: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SurjArgs {
    /// Factor algebras, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub factors: Vec<String>,
    /// Points of the principal ultrafilters, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorArg {
    Ring,
    Group,
}

#[derive(Debug, Args, Serialize)]
pub struct DrArgs {
    /// Algebra document path or built-in name.
    pub algebra: String,
    /// Relation documents; the built-in catalog when absent.
    #[arg(long = "relation")]
    pub relations: Vec<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PerpArgs {
    /// Algebra document path or built-in name.
    pub algebra: String,
    /// Relation documents; the built-in catalog when absent.
    #[arg(long = "relation")]
    pub relations: Vec<PathBuf>,
    /// Blocks of the congruence as JSON, e.g. `[[0,1],[2,3]]`; the full relation when absent.
    #[arg(long)]
    pub blocks: Option<String>,
    /// Require symmetry and closure under the operations.
    #[arg(long)]
    pub closed: bool,
    /// Search every congruence for a non-transitive perp instead.
    #[arg(long)]
    pub search: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct AlmostArgs {
    /// Algebra document path or built-in name.
    pub algebra: String,
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct ChainArgs {
    /// Homomorphism document.
    pub file: PathBuf,
    /// Ordered partition of the index set as JSON, e.g. `[[1],[0,2]]`.
    #[arg(long)]
    pub parts: String,
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
}

#[derive(Debug, Args, Serialize)]
pub struct CcArgs {
    /// Homomorphism document.
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub flavor: Option<FlavorArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedOrder {
    /// 0, 1, -1, 2, -2, ...
    Canonical,
    /// 0, 1, 2, ...
    Nonnegative,
}

#[derive(Debug, Args, Serialize)]
pub struct EkBuildArgs {
    /// Matrix side.
    #[arg(long)]
    pub size: usize,
    /// A prime `p` or `rational`.
    #[arg(long)]
    pub field: String,
    #[arg(long, value_enum, default_value = "canonical")]
    pub seed_order: SeedOrder,
    /// Backtracking search, for primes too small for the greedy construction.
    #[arg(long)]
    pub search: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArg {
    /// Matrix document.
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ZeroboundArgs {
    /// Matrix document.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Coefficients, comma separated; every nonzero vector over the prime field when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<String>>,
}

#[derive(Debug, Args, Serialize)]
pub struct RedpowArgs {
    /// Filter document.
    #[arg(long)]
    pub filter: PathBuf,
    /// Size of the base set X.
    #[arg(long)]
    pub x_size: Option<usize>,
    /// Field order q; also checks the dimension over F_q.
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyAllArgs {
    #[arg(long, default_value_t = 3)]
    pub max_index: usize,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    #[arg(long, default_value_t = 4)]
    pub max_matrix: usize,
    /// Replace one table entry first: `ALGEBRA:SYMBOL:POSITION:VALUE`.
    #[arg(long)]
    pub inject_fault: Option<String>,
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(raw) = std::env::var("REDUCTLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| InputError(format!("REDUCTLAB_THREADS must be a positive integer, found {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, inputs, result) = commands::dispatch(&cli.command);
    let result = configure_threads().and_then(|()| result());
    let report = Report::new(&name, inputs, result, start.elapsed());
    let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
    if let Some(msg) = &report.error {
        eprintln!("error: {msg}");
    }
    if let Some(dir) = std::env::var_os("REDUCTLAB_OUT") {
        if let Err(e) = report.write_to(std::path::Path::new(&dir)) {
            eprintln!("error: cannot write report to {}: {e}", PathBuf::from(dir).display());
            return ExitCode::from(Verdict::Error.exit_code());
        }
    }
    ExitCode::from(report.verdict.exit_code())
}
