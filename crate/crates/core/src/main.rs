//! Command-line surface: enumeration, classification, cyclic construction,
//! trade scans, the volume-3 census, move-graph connectivity, path
//! construction, exact rank, the kernel-span experiment, and certificate
//! verification.
//!
//! Exit codes: 0 = success/verified, 1 = verified-false (disconnected,
//! replay failure, claim mismatch), 2 = usage or parse error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fourcycle::connectivity::{bfs_connectivity, bfs_path, path_engine, BfsOptions};
use fourcycle::decompose::{
    self, admissible, canonical_label, develop_cyclic, match_table4, CyclicStarter,
};
use fourcycle::io::{
    census_certificate, kernel_span_certificate, parse_certificate, parse_system_source,
    path_certificate, rank_certificate, system_certificate, trade_list_certificate,
    verify_certificate, write_system,
};
use fourcycle::trades::{exhaustive_trade_census, find_trades, TradeVolume};
use fourcycle::{algebra, CycleSystem, Error};

#[derive(Parser)]
#[command(
    name = "fourcycle",
    version,
    about = "4-cycle systems, trades, and trade-move connectivity",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate all 4-CS(n) for n <= 9 (count, or full stream)
    Enumerate(EnumerateArgs),
    /// Classify the systems of a file against the eight stored classes
    Classify(ClassifyArgs),
    /// Develop base cycles (0-based labels) by +1 mod n and validate
    Cyclic(CyclicArgs),
    /// Detect volume-2/3 trades inside a system
    ScanTrades(ScanArgs),
    /// Exhaustive census of volume-3 trade graphs by foundation
    Census(CensusArgs),
    /// Breadth-first closure of a system under trade moves
    Connectivity(ConnArgs),
    /// Build a trade path between two systems
    Path(PathArgs),
    /// Replay-verify a path certificate
    VerifyPath(VerifyArgs),
    /// Pair inclusion matrix: shape, exact rank, optional export
    Matrix(MatrixArgs),
    /// Double-diamond kernel-span experiment
    KernelSpan(SpanArgs),
    /// Verify any certificate produced by this tool
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    order: u8,
    /// Print only the total
    #[arg(long)]
    count_only: bool,
    /// Write systems (or the count) here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// System file (or S1..S8 literal)
    #[arg(long = "in")]
    input: String,
}

#[derive(Args)]
struct CyclicArgs {
    #[arg(long)]
    order: u8,
    /// Base cycles like "0 3 1 12; 0 4 10 17; 0 1 6 15"
    #[arg(long)]
    bases: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long = "in")]
    input: String,
    /// 2, 3, or both
    #[arg(long, default_value = "both")]
    volume: String,
    /// Also print the configuration label of each trade
    #[arg(long)]
    classify: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 3)]
    volume: u8,
    /// Inclusive range like "6..10"
    #[arg(long, default_value = "6..10")]
    foundations: String,
}

#[derive(Args)]
struct ConnArgs {
    /// Start system: file or S1..S8
    #[arg(long)]
    start: String,
    /// Explore the whole closure (default)
    #[arg(long)]
    full: bool,
    /// Stop once all eight classes are reached
    #[arg(long)]
    classes_only: bool,
    /// State budget (default 4000000)
    #[arg(long)]
    max_states: Option<usize>,
    /// Known total labeled count to decide the component count
    #[arg(long)]
    expect_total: Option<u64>,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    /// bfs or constructive
    #[arg(long, default_value = "constructive")]
    method: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// State budget for the bfs method
    #[arg(long, default_value_t = 2_000_000)]
    max_states: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long)]
    order: u8,
    /// Compute the exact rank (always on; flag kept for script symmetry)
    #[arg(long)]
    rank: bool,
    /// Write the dense 0/1 matrix (row-major text) here
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Args)]
struct SpanArgs {
    #[arg(long)]
    order: u8,
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::InvalidInput {
            what: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_volume(s: &str) -> Result<TradeVolume, Error> {
    match s {
        "2" => Ok(TradeVolume::Two),
        "3" => Ok(TradeVolume::Three),
        "both" => Ok(TradeVolume::Both),
        _ => Err(Error::InvalidInput {
            what: format!("--volume must be 2, 3, or both (got {s})"),
        }),
    }
}

/// Ok(true) -> exit 0, Ok(false) -> exit 1.
fn run(cmd: Cmd) -> Result<bool, Error> {
    match cmd {
        Cmd::Enumerate(a) => {
            if a.order > 9 {
                return Err(Error::Unsupported {
                    what: format!("full enumeration is budgeted for n <= 9, got {}", a.order),
                });
            }
            if a.count_only {
                let count = decompose::count_systems(a.order);
                emit(
                    &a.out,
                    &format!(
                        "# fourcycle {}\n# command: {}\norder: {}\ncount: {count}\n",
                        fourcycle::io::TOOL_VERSION,
                        command_echo(),
                        a.order
                    ),
                )?;
            } else {
                let keys = decompose::enumerate_keys(a.order);
                let io_err = |e: std::io::Error| Error::InvalidInput {
                    what: format!("write failed: {e}"),
                };
                let mut sink: Box<dyn Write> = match &a.out {
                    Some(path) => Box::new(std::io::BufWriter::new(
                        std::fs::File::create(path).map_err(io_err)?,
                    )),
                    None => Box::new(std::io::stdout().lock()),
                };
                for key in keys {
                    sink.write_all(write_system(&CycleSystem::from_key(key, a.order)).as_bytes())
                        .map_err(io_err)?;
                }
                sink.flush().map_err(io_err)?;
            }
            Ok(true)
        }
        Cmd::Classify(a) => {
            let systems = if let Ok(label) = a.input.parse::<decompose::SLabel>() {
                vec![label.system().clone()]
            } else {
                let text = std::fs::read_to_string(&a.input).map_err(|e| Error::InvalidInput {
                    what: format!("cannot read {}: {e}", a.input),
                })?;
                fourcycle::io::parse_systems(&text)?
            };
            if systems.is_empty() {
                return Err(Error::ParseError {
                    line: 1,
                    msg: "no system found".into(),
                });
            }
            for (i, s) in systems.iter().enumerate() {
                if s.order() == 9 {
                    let label = match_table4(s)?;
                    let cls = canonical_label(s);
                    println!(
                        "system {}: order=9 class={} automorphisms={}",
                        i + 1,
                        label.map_or_else(|| "none".to_string(), |l| l.to_string()),
                        cls.automorphism_count
                    );
                } else {
                    println!("system {}: order={} (no stored classes)", i + 1, s.order());
                }
            }
            Ok(true)
        }
        Cmd::Cyclic(a) => {
            let mut base_cycles = Vec::new();
            for (i, part) in a.bases.split(';').enumerate() {
                let labels: Vec<u8> = part
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<u8>().map_err(|_| Error::ParseError {
                            line: i + 1,
                            msg: format!("bad base label {t:?}"),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if labels.len() != 4 {
                    return Err(Error::ParseError {
                        line: i + 1,
                        msg: format!("base cycle needs 4 labels, got {}", labels.len()),
                    });
                }
                base_cycles.push([labels[0], labels[1], labels[2], labels[3]]);
            }
            let system = match develop_cyclic(&CyclicStarter {
                order: a.order,
                base_cycles,
            }) {
                Ok(s) => s,
                // a starter that fails to develop is a verified-false
                // outcome, not a usage error
                Err(e @ Error::NotADecomposition { .. }) => {
                    eprintln!("not a decomposition: {e}");
                    return Ok(false);
                }
                Err(e) => return Err(e),
            };
            eprintln!(
                "developed {} cycles over order {} (admissible: {})",
                system.len(),
                a.order,
                admissible(a.order)
            );
            emit(&a.out, &system_certificate(&system, &command_echo()))?;
            Ok(true)
        }
        Cmd::ScanTrades(a) => {
            let system = parse_system_source(&a.input)?;
            let trades = find_trades(&system, parse_volume(&a.volume)?);
            print!(
                "{}",
                trade_list_certificate(system.order(), &trades, a.classify, &command_echo())
            );
            Ok(true)
        }
        Cmd::Census(a) => {
            if a.volume != 3 {
                return Err(Error::Unsupported {
                    what: format!("census supports volume 3, got {}", a.volume),
                });
            }
            let (lo, hi) = a
                .foundations
                .split_once("..")
                .and_then(|(l, h)| Some((l.parse::<u8>().ok()?, h.parse::<u8>().ok()?)))
                .ok_or_else(|| Error::InvalidInput {
                    what: format!("--foundations must look like 6..10, got {}", a.foundations),
                })?;
            let entries = exhaustive_trade_census(lo..=hi);
            print!("{}", census_certificate(&entries, &command_echo()));
            Ok(true)
        }
        Cmd::Connectivity(a) => {
            let start = parse_system_source(&a.start)?;
            let opts = BfsOptions {
                max_states: a.max_states.unwrap_or(4_000_000),
                expected_total: a.expect_total,
                stop_on_full_coverage: a.classes_only && !a.full,
            };
            let stats = bfs_connectivity(&start, opts);
            let classes: Vec<String> =
                stats.class_coverage.iter().map(|l| l.to_string()).collect();
            println!("# fourcycle {}", fourcycle::io::TOOL_VERSION);
            println!("# command: {}", command_echo());
            println!("reached: {}", stats.vertex_count);
            println!("depth: {}", stats.max_bfs_depth);
            println!("classes: {}", classes.join(" "));
            println!("complete: {}", stats.complete);
            println!("components: {}", stats.component_count);
            let ok = if opts.stop_on_full_coverage {
                stats.class_coverage.len() == 8
            } else {
                stats.complete
                    && stats.class_coverage.len() == 8
                    && a.expect_total.is_none_or(|t| stats.vertex_count == t)
            };
            Ok(ok)
        }
        Cmd::Path(a) => {
            let from = parse_system_source(&a.from)?;
            let to = parse_system_source(&a.to)?;
            let path = match a.method.as_str() {
                "constructive" => path_engine()?.constructive_path(&from, &to)?,
                "bfs" => match bfs_path(&from, &to, a.max_states)? {
                    Some(p) => p,
                    None => {
                        eprintln!("no path found within {} states", a.max_states);
                        return Ok(false);
                    }
                },
                other => {
                    return Err(Error::InvalidInput {
                        what: format!("--method must be bfs or constructive, got {other}"),
                    })
                }
            };
            path.validate()?;
            eprintln!("path length: {}", path.len());
            emit(&a.out, &path_certificate(&path, &command_echo()))?;
            Ok(true)
        }
        Cmd::VerifyPath(a) | Cmd::Verify(a) => {
            let text = std::fs::read_to_string(&a.input).map_err(|e| Error::InvalidInput {
                what: format!("cannot read {}: {e}", a.input.display()),
            })?;
            let cert = parse_certificate(&text)?;
            let verdict = verify_certificate(&cert)?;
            println!(
                "{}: {} ({})",
                match cert.kind {
                    fourcycle::io::CertificateKind::System => "system",
                    fourcycle::io::CertificateKind::TradeList => "trade-list",
                    fourcycle::io::CertificateKind::Path => "path",
                    fourcycle::io::CertificateKind::Census => "census",
                    fourcycle::io::CertificateKind::Rank => "rank",
                    fourcycle::io::CertificateKind::KernelSpan => "kernel-span",
                },
                if verdict.ok { "VERIFIED" } else { "FAILED" },
                verdict.detail
            );
            Ok(verdict.ok)
        }
        Cmd::Matrix(a) => {
            let m = algebra::build_matrix(a.order)?;
            let _ = a.rank; // the exact rank is always computed
            let rank = algebra::exact_rank(&m);
            print!("{}", rank_certificate(&m, rank, &command_echo()));
            if let Some(path) = &a.export {
                let mut text = String::new();
                for row in m.dense_rows() {
                    let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                    text.push_str(&line.join(" "));
                    text.push('\n');
                }
                std::fs::write(path, text).map_err(|e| Error::InvalidInput {
                    what: format!("cannot write {}: {e}", path.display()),
                })?;
            }
            Ok(true)
        }
        Cmd::KernelSpan(a) => {
            let report = algebra::double_diamond_span(a.order)?;
            print!("{}", kernel_span_certificate(&report, &command_echo()));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            ExitCode::from(2)
        }
    }
}
