//! Command-line front end: instance parsing, generators, basis
//! computation, verification, and reporting.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::decompose::tree_coforest;
use crate::embed::EmbeddedGraph;
use crate::gen;
use crate::gf2::BitMatrix;
use crate::instance;
use crate::mcb::{self, McbError};
use crate::mhb;
use crate::oracle;
use crate::report::{write_structured, write_text, CycleReport, RunReport};
use crate::support::Recursion;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Full-enumeration oracle limit for `--verify`; beyond it the Horton
/// ground set is used, and beyond [`VERIFY_N_LIMIT`] vertices verification
/// is refused as unsupported.
pub const VERIFY_ENUM_DIM: usize = 16;
pub const VERIFY_N_LIMIT: usize = 600;

#[derive(Parser, Debug)]
#[command(name = "surface-basis", version, about = "Minimum cycle and homology bases of surface-embedded graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum RecursionArg {
    #[default]
    Balanced,
    Simple,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print topological invariants and decomposition sizes.
    Info {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compute a minimum cycle basis (orientable embeddings only).
    Mcb {
        path: PathBuf,
        /// Cross-check the result against the brute-force oracle.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Worker threads for candidate generation and selection.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Compute a minimum homology basis.
    Mhb {
        path: PathBuf,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Support-vector update strategy (differential testing switch).
        #[arg(long, value_enum, default_value_t)]
        recursion: RecursionArg,
    },
    /// Write a generated instance to stdout or a file.
    Gen {
        /// One of: theta, k4-sphere, projective-loop, torus-grid <N>,
        /// random-rotation <n> <m> <seed>.
        kind: String,
        params: Vec<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Info { path, format } => cmd_info(&path, format),
        Command::Mcb { path, verify, format, threads } => {
            with_threads(threads, || cmd_mcb(&path, verify, format))
        }
        Command::Mhb { path, verify, format, threads, recursion } => {
            with_threads(threads, || cmd_mhb(&path, verify, format, recursion))
        }
        Command::Gen { kind, params, out } => cmd_gen(&kind, &params, out.as_deref()),
    }
}

fn with_threads<F: FnOnce() -> i32 + Send>(threads: usize, f: F) -> i32 {
    if threads <= 1 {
        // A one-thread pool keeps selection strictly sequential.
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build();
        match pool {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                eprintln!("error: cannot build thread pool: {e}");
                EXIT_INPUT
            }
        }
    }
}

fn load(path: &std::path::Path) -> Result<(EmbeddedGraph, u128), (i32, String)> {
    let t0 = Instant::now();
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    let spec = instance::parse(&text).map_err(|e| (EXIT_INPUT, e.to_string()))?;
    let graph = EmbeddedGraph::build(spec).map_err(|e| (EXIT_INPUT, e.to_string()))?;
    Ok((graph, t0.elapsed().as_micros()))
}

fn emit(report: &RunReport, format: Format) {
    match format {
        Format::Text => print!("{}", write_text(report)),
        Format::Structured => print!("{}", write_structured(report)),
    }
}

fn cmd_info(path: &std::path::Path, format: Format) -> i32 {
    let (g, parse_us) = match load(path) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let mut report = RunReport::new("info", &path.display().to_string(), g.stats());
    report.timings.push(("parse".into(), parse_us));
    // Decomposition sizes; closed surfaces are punctured for the purpose.
    let gd = if g.boundary_faces().is_empty() {
        let f = g.faces().len() - 1;
        report.notes.push(format!("punctured face {f} for decomposition"));
        g.puncture(f)
    } else {
        g.clone()
    };
    match tree_coforest(&gd) {
        Ok(d) => {
            report.decomposition =
                Some((d.tree_edges.len(), d.coforest_edges.len(), d.leftover_edges.len()));
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    }
    emit(&report, format);
    EXIT_OK
}

fn basis_reports(cycles: &[mcb::BasisCycle]) -> (Vec<CycleReport>, f64) {
    let mut total = 0.0;
    let reports = cycles
        .iter()
        .map(|c| {
            total += c.weight;
            CycleReport {
                edges: c.edges.clone(),
                weight: c.weight,
                signature: c.signature.to_bit_string(),
            }
        })
        .collect();
    (reports, total)
}

fn rank_verification(cycles: &[mcb::BasisCycle], want: usize) -> (String, String) {
    let rank = BitMatrix::from_rows(cycles.iter().map(|c| c.signature.clone()).collect()).rank();
    if rank == want {
        ("signature-rank".into(), "pass".into())
    } else {
        ("signature-rank".into(), format!("fail rank {rank} expected {want}"))
    }
}

enum OracleVerdict {
    Checked(String, String),
    TooLarge,
}

fn oracle_verification(g: &EmbeddedGraph, total: f64, homology: bool) -> OracleVerdict {
    let dim = g.cycle_space_dim();
    let expect = if dim <= VERIFY_ENUM_DIM {
        if homology {
            oracle::greedy_mhb(g).map(|b| b.total_weight)
        } else {
            oracle::greedy_mcb(g).map(|b| b.total_weight)
        }
        .expect("dimension within enumeration limit")
    } else if g.vertex_count() <= VERIFY_N_LIMIT {
        if homology {
            oracle::greedy_mhb_horton(g).total_weight
        } else {
            oracle::greedy_mcb_horton(g).total_weight
        }
    } else {
        return OracleVerdict::TooLarge;
    };
    let name = "oracle-weight".to_string();
    if expect == total {
        OracleVerdict::Checked(name, "pass".into())
    } else {
        OracleVerdict::Checked(name, format!("fail got {total} expected {expect}"))
    }
}

fn cmd_mcb(path: &std::path::Path, verify: bool, format: Format) -> i32 {
    let (g, parse_us) = match load(path) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let result = match mcb::minimum_cycle_basis(&g) {
        Ok(r) => r,
        Err(McbError::NonOrientable) => {
            eprintln!("error: minimum cycle basis requires an orientable embedding");
            return EXIT_UNSUPPORTED;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut report = RunReport::new("mcb", &path.display().to_string(), g.stats());
    report.notes = result.normalization.clone();
    report.timings.push(("parse".into(), parse_us));
    for (phase, d) in &result.timings {
        report.timings.push(((*phase).into(), d.as_micros()));
    }
    let (cycles, total) = basis_reports(&result.cycles);
    report.cycles = Some(cycles);
    report.total_weight = Some(total);
    if verify {
        report.verifications.push(rank_verification(&result.cycles, result.dim));
        match oracle_verification(&g, total, false) {
            OracleVerdict::Checked(name, verdict) => report.verifications.push((name, verdict)),
            OracleVerdict::TooLarge => {
                eprintln!("error: instance too large for oracle verification");
                return EXIT_UNSUPPORTED;
            }
        }
    }
    let ok = report.all_verifications_pass();
    emit(&report, format);
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_mhb(path: &std::path::Path, verify: bool, format: Format, recursion: RecursionArg) -> i32 {
    let (g, parse_us) = match load(path) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let rec = match recursion {
        RecursionArg::Balanced => Recursion::Balanced,
        RecursionArg::Simple => Recursion::Simple,
    };
    let result = match mhb::minimum_homology_basis_with(&g, rec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut report = RunReport::new("mhb", &path.display().to_string(), g.stats());
    report.notes = result.normalization.clone();
    report.timings.push(("parse".into(), parse_us));
    for (phase, d) in &result.timings {
        report.timings.push(((*phase).into(), d.as_micros()));
    }
    let (cycles, total) = basis_reports(&result.cycles);
    report.cycles = Some(cycles);
    report.total_weight = Some(total);
    if verify {
        report.verifications.push(rank_verification(&result.cycles, result.beta));
        match oracle_verification(&g, total, true) {
            OracleVerdict::Checked(name, verdict) => report.verifications.push((name, verdict)),
            OracleVerdict::TooLarge => {
                eprintln!("error: instance too large for oracle verification");
                return EXIT_UNSUPPORTED;
            }
        }
    }
    let ok = report.all_verifications_pass();
    emit(&report, format);
    if ok {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_gen(kind: &str, params: &[String], out: Option<&std::path::Path>) -> i32 {
    let spec = match (kind, params) {
        ("theta", []) => gen::theta_spec(),
        ("k4-sphere", []) => gen::k4_sphere_spec(),
        ("projective-loop", []) => gen::projective_loop_spec(),
        ("torus-grid", [n]) => match n.parse::<usize>() {
            Ok(n) if n >= 1 => gen::torus_grid_spec(n),
            _ => {
                eprintln!("error: torus-grid needs a positive size");
                return EXIT_INPUT;
            }
        },
        ("random-rotation", [n, m, seed]) => {
            let (Ok(n), Ok(m), Ok(seed)) =
                (n.parse::<usize>(), m.parse::<usize>(), seed.parse::<u64>())
            else {
                eprintln!("error: random-rotation needs <n> <m> <seed>");
                return EXIT_INPUT;
            };
            if n == 0 || m + 1 < n {
                eprintln!("error: need n >= 1 and m >= n - 1 for a connected graph");
                return EXIT_INPUT;
            }
            let opts = gen::RandomOptions::new(n, m - (n - 1), seed);
            match gen::random_embedding(&opts) {
                Ok(g) => g.to_spec(),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT;
                }
            }
        }
        _ => {
            eprintln!(
                "error: unknown generator `{kind}` or wrong parameters; kinds: theta, k4-sphere, projective-loop, torus-grid <N>, random-rotation <n> <m> <seed>"
            );
            return EXIT_INPUT;
        }
    };
    let text = instance::write(&spec);
    match out {
        None => {
            print!("{text}");
            EXIT_OK
        }
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_INPUT
            }
        },
    }
}
