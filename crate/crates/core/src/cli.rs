//! Command-line workflows and the JSON basis document.
//!
//! Exit codes: 0 success, 1 mathematical violation found, 2 usage or input
//! error, 3 search incomplete (budget or target stop).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::construct::standard_basis;
use crate::error::{KummerError, Result};
use crate::graphs::{
    a_priori_blocks, build_graph, classify_block, to_dot, ArrowOrder, BlockType, LemmaReport,
};
use crate::kummer::{
    is_kummer_set, multiset_condition_holds, symmetric_coefficient, MultisetSpec, ViolationRecord,
};
use crate::monomial::{product_exponent, AlgebraShape, ExponentVector};
use crate::search::{
    enumerate_kummer_sets, enumerate_maximal_sets, max_kummer_dimension, SearchConfig, SearchResult,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

/// Worker cap for parallel search.
pub const THREADS_ENV: &str = "KUMMER_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "kummer",
    version,
    about = "Monomial Kummer spaces in tensor products of symbol algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    /// Degree of each symbol algebra.
    #[arg(long)]
    pub d: u32,
    /// Number of tensor factors.
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the standard dn+1 Kummer basis as a JSON basis document.
    Construct {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether a basis document spans a Kummer space.
    Check {
        #[arg(long)]
        file: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Render the labeled graph of a basis (d=4) as DOT.
    Graph {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        dot: PathBuf,
    },
    /// Symmetric-product coefficient of the basis elements with given multiplicities.
    Coeff {
        #[arg(long)]
        file: PathBuf,
        /// Comma-separated multiplicities, one per basis element.
        #[arg(long, value_delimiter = ',')]
        mults: Vec<u32>,
    },
    /// Find the maximal dimension of a monomial Kummer space.
    Search {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        no_symmetry: bool,
        /// Single-threaded with reproducible output.
        #[arg(long)]
        deterministic: bool,
        /// Time budget in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Stop once a set of this size is found.
        #[arg(long)]
        target: Option<usize>,
        /// Also write the result as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run every graph checker over enumerated Kummer sets (d=4, n=1).
    VerifyLemmas {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Check every Kummer set of size >= 2, not only the maximal ones.
        #[arg(long)]
        exhaustive: bool,
    },
}

/// On-disk basis: `{"d": 4, "n": 1, "basis": [[0, 1], …]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDocument {
    pub d: u32,
    pub n: u32,
    pub basis: Vec<Vec<i64>>,
}

impl BasisDocument {
    pub fn from_basis(shape: AlgebraShape, basis: &[ExponentVector]) -> Self {
        BasisDocument {
            d: shape.degree(),
            n: shape.factors(),
            basis: basis
                .iter()
                .map(|v| v.entries().iter().map(|&e| e as i64).collect())
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| KummerError::InvalidInput(format!("malformed basis document: {e}")))
    }

    /// Validates entry ranges and row lengths and rejects duplicates.
    pub fn to_basis(&self) -> Result<(AlgebraShape, Vec<ExponentVector>)> {
        let shape = AlgebraShape::new(self.d, self.n)?;
        let mut out: Vec<ExponentVector> = Vec::with_capacity(self.basis.len());
        for (i, row) in self.basis.iter().enumerate() {
            if row.len() != shape.width() {
                return Err(KummerError::InvalidInput(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    shape.width()
                )));
            }
            if let Some(e) = row.iter().find(|&&e| e < 0 || e >= self.d as i64) {
                return Err(KummerError::InvalidInput(format!(
                    "row {i}: entry {e} outside [0, {})",
                    self.d
                )));
            }
            let v = ExponentVector::new(shape, row.iter().map(|&e| e as u8).collect())?;
            if out.contains(&v) {
                return Err(KummerError::InvalidInput(format!(
                    "row {i} duplicates an earlier row"
                )));
            }
            out.push(v);
        }
        Ok((shape, out))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                format!(
                    "    {}",
                    serde_json::to_string(r).expect("integers serialize")
                )
            })
            .collect();
        format!(
            "{{\n  \"d\": {},\n  \"n\": {},\n  \"basis\": [\n{}\n  ]\n}}\n",
            self.d,
            self.n,
            rows.join(",\n")
        )
    }
}

fn read_document(path: &Path) -> Result<(AlgebraShape, Vec<ExponentVector>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| KummerError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    BasisDocument::parse(&text)?.to_basis()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| KummerError::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn rows(vs: &[ExponentVector]) -> Vec<Vec<u8>> {
    vs.iter().map(|v| v.entries().to_vec()).collect()
}

#[derive(Serialize)]
struct CheckReport {
    kummer: bool,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<ViolationRecord>,
}

#[derive(Serialize)]
struct SearchReport {
    d: u32,
    n: u32,
    max_size: usize,
    complete: bool,
    termination: String,
    explored_nodes: u64,
    elapsed_ms: u64,
    witness: Vec<Vec<u8>>,
}

impl SearchReport {
    fn new(shape: AlgebraShape, r: &SearchResult) -> Self {
        SearchReport {
            d: shape.degree(),
            n: shape.factors(),
            max_size: r.max_size,
            complete: r.complete,
            termination: format!("{:?}", r.termination).to_lowercase(),
            explored_nodes: r.explored_nodes,
            elapsed_ms: r.elapsed.as_millis() as u64,
            witness: rows(&r.witness),
        }
    }
}

/// Runs a parsed command, writing results to `out` and errors to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| KummerError::InvalidInput(format!("output error: {e}"));
    match cmd {
        Command::Construct { shape, out: path } => {
            let shape = AlgebraShape::new(shape.d, shape.n)?;
            let doc = BasisDocument::from_basis(shape, &standard_basis(shape)).to_json();
            match path {
                Some(p) => write_file(&p, &doc)?,
                None => write!(out, "{doc}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Check { file, json } => {
            let (shape, basis) = read_document(&file)?;
            let verdict = is_kummer_set(shape, &basis)?;
            let report = CheckReport {
                kummer: verdict.is_ok(),
                size: basis.len(),
                violation: verdict.as_ref().err().map(ViolationRecord::from),
            };
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                )
                .map_err(io)?;
            } else if let Err(v) = &verdict {
                writeln!(out, "not Kummer ({} elements)", basis.len()).map_err(io)?;
                writeln!(out, "subset = {:?}", rows(&v.subset)).map_err(io)?;
                writeln!(out, "multiplicities = {:?}", v.multiplicities).map_err(io)?;
                writeln!(
                    out,
                    "coefficient = {:?} ({})",
                    v.coefficient.coeffs(),
                    v.coefficient
                )
                .map_err(io)?;
                writeln!(out, "exponent = {:?}", v.exponent.entries()).map_err(io)?;
            } else {
                writeln!(out, "Kummer ({} elements)", basis.len()).map_err(io)?;
            }
            Ok(if verdict.is_ok() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Graph { file, dot } => {
            let (shape, basis) = read_document(&file)?;
            let g = build_graph(shape, &basis)?;
            write_file(&dot, &to_dot(&g))?;
            writeln!(out, "wrote {} vertices to {}", g.len(), dot.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Coeff { file, mults } => {
            let (shape, basis) = read_document(&file)?;
            let spec = MultisetSpec::new(shape, basis, mults)?;
            let c = symmetric_coefficient(shape, &spec)?;
            let items: Vec<_> = spec
                .elements()
                .iter()
                .cloned()
                .zip(spec.multiplicities().iter().copied())
                .collect();
            let exponent = product_exponent(shape, &items)?;
            writeln!(out, "c = {c}").map_err(io)?;
            writeln!(out, "coefficients = {:?}", c.coeffs()).map_err(io)?;
            writeln!(out, "exponent = {:?}", exponent.entries()).map_err(io)?;
            writeln!(
                out,
                "condition holds = {}",
                multiset_condition_holds(shape, &spec)?
            )
            .map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Search {
            shape,
            no_symmetry,
            deterministic,
            timeout,
            target,
            json,
        } => {
            let shape = AlgebraShape::new(shape.d, shape.n)?;
            let time_budget = match timeout {
                Some(t) if !(t > 0.0 && t.is_finite()) => {
                    return Err(KummerError::InvalidInput(
                        "--timeout must be positive".into(),
                    ))
                }
                t => t.map(Duration::from_secs_f64),
            };
            let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok());
            let config = SearchConfig {
                use_symmetry: !no_symmetry,
                deterministic,
                time_budget,
                target,
                threads,
                ..Default::default()
            };
            let result = max_kummer_dimension(shape, &config)?;
            writeln!(out, "shape = {shape}").map_err(io)?;
            writeln!(out, "max = {}", result.max_size).map_err(io)?;
            writeln!(out, "complete = {}", result.complete).map_err(io)?;
            writeln!(out, "witness = {:?}", rows(&result.witness)).map_err(io)?;
            writeln!(out, "nodes = {}", result.explored_nodes).map_err(io)?;
            writeln!(out, "time = {:.3}s", result.elapsed.as_secs_f64()).map_err(io)?;
            if let Some(path) = json {
                let report = SearchReport::new(shape, &result);
                write_file(
                    &path,
                    &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
                )?;
            }
            Ok(if result.complete {
                EXIT_OK
            } else {
                EXIT_INCOMPLETE
            })
        }
        Command::VerifyLemmas { shape, exhaustive } => {
            let shape = AlgebraShape::new(shape.d, shape.n)?;
            if shape.degree() != 4 {
                return Err(KummerError::UnsupportedDegree(shape.degree()));
            }
            let sets = if exhaustive {
                enumerate_kummer_sets(shape)?
                    .into_iter()
                    .filter(|s| s.len() >= 2)
                    .collect()
            } else {
                enumerate_maximal_sets(shape)?
            };
            let summary = verify_lemmas(shape, &sets)?;
            writeln!(
                out,
                "checked {} Kummer sets (d=4, n={})",
                sets.len(),
                shape.factors()
            )
            .map_err(io)?;
            for (name, bad) in &summary.violations {
                writeln!(out, "{name}: {bad} violations").map_err(io)?;
            }
            writeln!(
                out,
                "admissible block types: {} of 8",
                summary.admissible_blocks
            )
            .map_err(io)?;
            Ok(if summary.is_clean() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
    }
}

/// Per-check violation counts over a family of Kummer sets.
#[derive(Debug, Clone)]
pub struct LemmaSummary {
    pub sets: usize,
    pub violations: Vec<(&'static str, usize)>,
    pub admissible_blocks: usize,
}

impl LemmaSummary {
    pub fn is_clean(&self) -> bool {
        self.violations.iter().all(|(_, n)| *n == 0) && self.admissible_blocks == 4
    }
}

/// Runs the six graph checkers plus the arrow-ordering check (one element
/// dropped from each dashed pair must leave an acyclic arrow tournament) on
/// every set, and counts admissible block configurations.
pub fn verify_lemmas(shape: AlgebraShape, sets: &[Vec<ExponentVector>]) -> Result<LemmaSummary> {
    let mut counts: Vec<(&'static str, usize)> = LemmaReport::default()
        .outcomes()
        .iter()
        .map(|(name, _)| (*name, 0))
        .collect();
    counts.push(("arrow ordering", 0));
    for set in sets {
        let g = build_graph(shape, set)?;
        for (k, (_, ok)) in LemmaReport::run(&g).outcomes().iter().enumerate() {
            if !ok {
                counts[k].1 += 1;
            }
        }
        let kept: Vec<usize> = (0..g.len())
            .filter(|&i| !(0..i).any(|j| g.phase(i, j) == 2))
            .collect();
        let ordered = kept
            .iter()
            .all(|&i| kept.iter().all(|&j| i == j || g.phase(i, j) % 2 == 1))
            && matches!(
                crate::graphs::topological_arrow_order(&g, &kept),
                Ok(ArrowOrder::Order(_))
            );
        if !ordered {
            counts[6].1 += 1;
        }
    }
    let admissible_blocks = a_priori_blocks()
        .iter()
        .filter(|b| {
            classify_block(b)
                .map(|t| t != BlockType::Forbidden)
                .unwrap_or(false)
        })
        .count();
    Ok(LemmaSummary {
        sets: sets.len(),
        violations: counts,
        admissible_blocks,
    })
}
