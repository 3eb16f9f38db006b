//! Text formats and machine-readable certificates.
//!
//! A cycle prints as `a b c d`; a system is one cycle per line (sorted by
//! cycle index) terminated by a blank line. Certificates carry a version
//! header and a kind-specific, line-oriented body, and everything emitted
//! can be replay-verified by [`verify_certificate`] without re-running the
//! original search.

use std::fmt::Write as _;
use std::path::Path;

use crate::algebra;
use crate::configs::TradeConfig;
use crate::decompose::SLabel;
use crate::error::{Error, Result};
use crate::model::{Bitrade, CycleSystem, FourCycle, PathStep, TradePath};
use crate::trades::{self, CensusEntry};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

// ---------------------------------------------------------------------------
// system text form
// ---------------------------------------------------------------------------

/// Render a system in the standard text form (cycle lines, blank
/// terminator).
pub fn write_system(s: &CycleSystem) -> String {
    let mut out = String::new();
    for c in s.cycles() {
        let _ = writeln!(out, "{c}");
    }
    out.push('\n');
    out
}

fn parse_cycle_tokens(tokens: &[&str], line_no: usize) -> Result<Vec<FourCycle>> {
    if !tokens.len().is_multiple_of(4) {
        return Err(Error::ParseError {
            line: line_no,
            msg: format!("expected groups of 4 vertex labels, got {} tokens", tokens.len()),
        });
    }
    tokens
        .chunks(4)
        .map(|q| {
            let mut v = [0u8; 4];
            for (slot, t) in v.iter_mut().zip(q) {
                *slot = t.parse::<u8>().map_err(|_| Error::ParseError {
                    line: line_no,
                    msg: format!("bad vertex label {t:?}"),
                })?;
            }
            FourCycle::from_array(v).map_err(|e| Error::ParseError {
                line: line_no,
                msg: e.to_string(),
            })
        })
        .collect()
}

/// Parse one or more blank-line-separated systems from text. The order of
/// each system is the maximum label appearing in it.
pub fn parse_systems(text: &str) -> Result<Vec<CycleSystem>> {
    let mut systems = Vec::new();
    let mut cycles: Vec<FourCycle> = Vec::new();
    let mut flush = |cycles: &mut Vec<FourCycle>, line_no: usize| -> Result<()> {
        if cycles.is_empty() {
            return Ok(());
        }
        let order = cycles.iter().map(|c| c.max_vertex()).max().unwrap();
        let sys = CycleSystem::from_cycles(order, std::mem::take(cycles)).map_err(|e| {
            Error::ParseError {
                line: line_no,
                msg: e.to_string(),
            }
        })?;
        systems.push(sys);
        Ok(())
    };
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last = line_no;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut cycles, line_no)?;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        cycles.extend(parse_cycle_tokens(&tokens, line_no)?);
    }
    flush(&mut cycles, last + 1)?;
    Ok(systems)
}

/// Resolve a CLI system argument: a Table 4 label (`S1`..`S8`), a path to
/// a system file, or a path to a system certificate.
pub fn parse_system_source(src: &str) -> Result<CycleSystem> {
    if let Ok(label) = src.parse::<SLabel>() {
        return Ok(label.system().clone());
    }
    let text = std::fs::read_to_string(Path::new(src)).map_err(|e| Error::InvalidInput {
        what: format!("cannot read {src}: {e}"),
    })?;
    parse_system_text(&text)
}

/// Parse exactly one system from text (label literal, plain system file,
/// or system certificate).
pub fn parse_system_text(text: &str) -> Result<CycleSystem> {
    let trimmed = text.trim();
    if let Ok(label) = trimmed.parse::<SLabel>() {
        return Ok(label.system().clone());
    }
    if text.lines().any(|l| l.trim().starts_with("kind:")) {
        let cert = parse_certificate(text)?;
        return match cert.body {
            CertBody::System { cycles, .. } => {
                let order = cycles.iter().map(|c| c.max_vertex()).max().unwrap_or(1);
                CycleSystem::from_cycles(order, cycles)
            }
            _ => Err(Error::InvalidInput {
                what: "certificate does not carry a system".into(),
            }),
        };
    }
    let mut systems = parse_systems(text)?;
    match systems.len() {
        1 => Ok(systems.pop().unwrap()),
        0 => Err(Error::ParseError {
            line: 1,
            msg: "no system found".into(),
        }),
        k => Err(Error::InvalidInput {
            what: format!("expected one system, found {k}"),
        }),
    }
}

// ---------------------------------------------------------------------------
// certificates
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    System,
    TradeList,
    Path,
    Census,
    Rank,
    KernelSpan,
}

impl CertificateKind {
    fn as_str(self) -> &'static str {
        match self {
            CertificateKind::System => "system",
            CertificateKind::TradeList => "trade-list",
            CertificateKind::Path => "path",
            CertificateKind::Census => "census",
            CertificateKind::Rank => "rank",
            CertificateKind::KernelSpan => "kernel-span",
        }
    }

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "system" => CertificateKind::System,
            "trade-list" => CertificateKind::TradeList,
            "path" => CertificateKind::Path,
            "census" => CertificateKind::Census,
            "rank" => CertificateKind::Rank,
            "kernel-span" => CertificateKind::KernelSpan,
            _ => {
                return Err(Error::InvalidInput {
                    what: format!("unknown certificate kind {s:?}"),
                })
            }
        })
    }
}

/// One claimed trade line of a trade-list certificate.
#[derive(Clone, Debug)]
pub struct TradeClaim {
    pub volume: usize,
    pub foundation: u8,
    pub config: Option<TradeConfig>,
    pub t1: Vec<FourCycle>,
    pub t2: Vec<FourCycle>,
}

#[derive(Clone, Debug)]
pub enum CertBody {
    System {
        order: u8,
        cycles: Vec<FourCycle>,
    },
    TradeList {
        order: u8,
        claims: Vec<TradeClaim>,
    },
    Path {
        order: u8,
        start: Vec<FourCycle>,
        steps: Vec<(Vec<FourCycle>, Vec<FourCycle>)>,
        end: Vec<FourCycle>,
    },
    Census {
        volume: usize,
        entries: Vec<CensusEntry>,
    },
    Rank {
        order: u8,
        rows: usize,
        cols: usize,
        rank: usize,
        nullity: usize,
    },
    KernelSpan {
        order: u8,
        graphs: usize,
        vectors: usize,
        generated_rank: usize,
        nullity: usize,
        spans: bool,
    },
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub command: String,
    pub body: CertBody,
}

/// Result of replaying a certificate.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub ok: bool,
    pub detail: String,
}

fn header(kind: CertificateKind, command: &str) -> String {
    format!(
        "# fourcycle {TOOL_VERSION}\n# command: {command}\nkind: {}\n",
        kind.as_str()
    )
}

fn cycles_line(cycles: &[FourCycle]) -> String {
    cycles
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("  ")
}

fn cycles_csv(cycles: &[FourCycle]) -> String {
    cycles
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

// -- renderers --------------------------------------------------------------

pub fn system_certificate(s: &CycleSystem, command: &str) -> String {
    let mut out = header(CertificateKind::System, command);
    let _ = writeln!(out, "order: {}", s.order());
    out.push_str("system:\n");
    out.push_str(&write_system(s));
    out
}

pub fn trade_list_certificate(
    order: u8,
    trades: &[Bitrade],
    with_config: bool,
    command: &str,
) -> String {
    let mut out = header(CertificateKind::TradeList, command);
    let _ = writeln!(out, "order: {order}");
    out.push_str("trades:\n");
    for t in trades {
        let cfg = if with_config {
            format!(" config={}", t.config())
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "vol={} found={}{cfg} | t1={}; t2={}",
            t.volume(),
            t.foundation(),
            cycles_csv(t.t1()),
            cycles_csv(t.t2()),
        );
    }
    out
}

pub fn path_certificate(path: &TradePath, command: &str) -> String {
    let mut out = header(CertificateKind::Path, command);
    let _ = writeln!(out, "order: {}", path.start().order());
    out.push_str("start:\n");
    out.push_str(&write_system(path.start()));
    out.push_str("steps:\n");
    for step in path.steps() {
        let _ = writeln!(
            out,
            "- {} | + {}",
            cycles_line(&step.removed),
            cycles_line(&step.added)
        );
    }
    out.push_str("end:\n");
    out.push_str(&write_system(path.end()));
    out
}

pub fn census_certificate(entries: &[CensusEntry], command: &str) -> String {
    let mut out = header(CertificateKind::Census, command);
    out.push_str("volume: 3\ncensus:\n");
    for e in entries {
        let _ = writeln!(out, "foundation={} classes={}", e.foundation, e.classes);
    }
    out
}

pub fn rank_certificate(m: &algebra::InclusionMatrix, rank: usize, command: &str) -> String {
    let mut out = header(CertificateKind::Rank, command);
    let _ = writeln!(out, "order: {}", m.order());
    out.push_str("rank:\n");
    let _ = writeln!(
        out,
        "rows={} cols={} rank={} nullity={}",
        m.rows(),
        m.cols(),
        rank,
        m.cols() - rank
    );
    out
}

pub fn kernel_span_certificate(report: &algebra::DdSpanReport, command: &str) -> String {
    let mut out = header(CertificateKind::KernelSpan, command);
    let _ = writeln!(out, "order: {}", report.n);
    out.push_str("kernel-span:\n");
    let _ = writeln!(
        out,
        "dd_graphs={} dd_vectors={} generated_rank={} nullity={} spans={}",
        report.graph_count, report.vector_count, report.generated_rank, report.nullity, report.spans
    );
    out
}

// -- parser ------------------------------------------------------------------

struct KvLine<'a> {
    line_no: usize,
    raw: &'a str,
}

fn parse_kv(raw: &str, line_no: usize) -> Result<Vec<(String, String)>> {
    raw.split_whitespace()
        .map(|tok| {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::ParseError {
                line: line_no,
                msg: format!("expected key=value, got {tok:?}"),
            })?;
            Ok((k.to_string(), v.to_string()))
        })
        .collect()
}

fn kv_get<'a>(kv: &'a [(String, String)], key: &str, line_no: usize) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::ParseError {
            line: line_no,
            msg: format!("missing {key}="),
        })
}

fn parse_usize(s: &str, line_no: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::ParseError {
        line: line_no,
        msg: format!("bad number {s:?}"),
    })
}

/// Parse a certificate from text.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut kind: Option<CertificateKind> = None;
    let mut command = String::from("-");
    let mut order: Option<u8> = None;
    let mut volume: Option<usize> = None;
    let mut section: Option<&str> = None;

    let mut system_cycles: Vec<FourCycle> = Vec::new();
    let mut start: Vec<FourCycle> = Vec::new();
    let mut end: Vec<FourCycle> = Vec::new();
    let mut steps: Vec<(Vec<FourCycle>, Vec<FourCycle>)> = Vec::new();
    let mut claims: Vec<TradeClaim> = Vec::new();
    let mut census: Vec<CensusEntry> = Vec::new();
    let mut rank_line: Option<KvLine> = None;
    let mut span_line: Option<KvLine> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix("# command:") {
            command = rest.trim().to_string();
            continue;
        }
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("kind:") {
            kind = Some(CertificateKind::from_str(rest.trim())?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("order:") {
            order = Some(rest.trim().parse().map_err(|_| Error::ParseError {
                line: line_no,
                msg: "bad order".into(),
            })?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("volume:") {
            volume = Some(parse_usize(rest.trim(), line_no)?);
            continue;
        }
        match line {
            "system:" | "start:" | "steps:" | "end:" | "trades:" | "census:" | "rank:"
            | "kernel-span:" => {
                section = Some(match line {
                    "system:" => "system",
                    "start:" => "start",
                    "steps:" => "steps",
                    "end:" => "end",
                    "trades:" => "trades",
                    "census:" => "census",
                    "rank:" => "rank",
                    _ => "kernel-span",
                });
                continue;
            }
            _ => {}
        }
        match section {
            Some("system") => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                system_cycles.extend(parse_cycle_tokens(&tokens, line_no)?);
            }
            Some("start") => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                start.extend(parse_cycle_tokens(&tokens, line_no)?);
            }
            Some("end") => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                end.extend(parse_cycle_tokens(&tokens, line_no)?);
            }
            Some("steps") => {
                let rest = line.strip_prefix('-').ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "step line must start with '-'".into(),
                })?;
                let (rm, ad) = rest.split_once('|').ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "step line must contain '|'".into(),
                })?;
                let ad = ad.trim().strip_prefix('+').ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "added cycles must start with '+'".into(),
                })?;
                let removed =
                    parse_cycle_tokens(&rm.split_whitespace().collect::<Vec<_>>(), line_no)?;
                let added =
                    parse_cycle_tokens(&ad.split_whitespace().collect::<Vec<_>>(), line_no)?;
                steps.push((removed, added));
            }
            Some("trades") => {
                let (meta, legs) = line.split_once('|').ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "trade line must contain '|'".into(),
                })?;
                let kv = parse_kv(meta, line_no)?;
                let vol = parse_usize(kv_get(&kv, "vol", line_no)?, line_no)?;
                let found = parse_usize(kv_get(&kv, "found", line_no)?, line_no)? as u8;
                let config = kv
                    .iter()
                    .find(|(k, _)| k == "config")
                    .map(|(_, v)| v.parse::<TradeConfig>())
                    .transpose()?;
                let (t1s, t2s) = legs.split_once(';').ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "trade legs must be separated by ';'".into(),
                })?;
                let t1s = t1s.trim().strip_prefix("t1=").ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "missing t1=".into(),
                })?;
                let t2s = t2s.trim().strip_prefix("t2=").ok_or_else(|| Error::ParseError {
                    line: line_no,
                    msg: "missing t2=".into(),
                })?;
                let parse_leg = |s: &str| -> Result<Vec<FourCycle>> {
                    let tokens: Vec<&str> = s
                        .split(',')
                        .flat_map(|c| c.split_whitespace())
                        .collect();
                    parse_cycle_tokens(&tokens, line_no)
                };
                claims.push(TradeClaim {
                    volume: vol,
                    foundation: found,
                    config,
                    t1: parse_leg(t1s)?,
                    t2: parse_leg(t2s)?,
                });
            }
            Some("census") => {
                let kv = parse_kv(line, line_no)?;
                census.push(CensusEntry {
                    foundation: parse_usize(kv_get(&kv, "foundation", line_no)?, line_no)? as u8,
                    classes: parse_usize(kv_get(&kv, "classes", line_no)?, line_no)?,
                });
            }
            Some("rank") => rank_line = Some(KvLine { line_no, raw }),
            Some("kernel-span") => span_line = Some(KvLine { line_no, raw }),
            _ => {
                return Err(Error::ParseError {
                    line: line_no,
                    msg: format!("unexpected line {line:?}"),
                })
            }
        }
    }

    let kind = kind.ok_or(Error::ParseError {
        line: 1,
        msg: "missing kind:".into(),
    })?;
    let body = match kind {
        CertificateKind::System => CertBody::System {
            order: order.unwrap_or_else(|| {
                system_cycles.iter().map(|c| c.max_vertex()).max().unwrap_or(1)
            }),
            cycles: system_cycles,
        },
        CertificateKind::Path => CertBody::Path {
            order: order.ok_or(Error::ParseError {
                line: 1,
                msg: "path certificate missing order:".into(),
            })?,
            start,
            steps,
            end,
        },
        CertificateKind::TradeList => CertBody::TradeList {
            order: order.ok_or(Error::ParseError {
                line: 1,
                msg: "trade-list certificate missing order:".into(),
            })?,
            claims,
        },
        CertificateKind::Census => CertBody::Census {
            volume: volume.unwrap_or(3),
            entries: census,
        },
        CertificateKind::Rank => {
            let l = rank_line.ok_or(Error::ParseError {
                line: 1,
                msg: "rank certificate missing body".into(),
            })?;
            let kv = parse_kv(l.raw, l.line_no)?;
            CertBody::Rank {
                order: order.ok_or(Error::ParseError {
                    line: l.line_no,
                    msg: "rank certificate missing order:".into(),
                })?,
                rows: parse_usize(kv_get(&kv, "rows", l.line_no)?, l.line_no)?,
                cols: parse_usize(kv_get(&kv, "cols", l.line_no)?, l.line_no)?,
                rank: parse_usize(kv_get(&kv, "rank", l.line_no)?, l.line_no)?,
                nullity: parse_usize(kv_get(&kv, "nullity", l.line_no)?, l.line_no)?,
            }
        }
        CertificateKind::KernelSpan => {
            let l = span_line.ok_or(Error::ParseError {
                line: 1,
                msg: "kernel-span certificate missing body".into(),
            })?;
            let kv = parse_kv(l.raw, l.line_no)?;
            CertBody::KernelSpan {
                order: order.ok_or(Error::ParseError {
                    line: l.line_no,
                    msg: "kernel-span certificate missing order:".into(),
                })?,
                graphs: parse_usize(kv_get(&kv, "dd_graphs", l.line_no)?, l.line_no)?,
                vectors: parse_usize(kv_get(&kv, "dd_vectors", l.line_no)?, l.line_no)?,
                generated_rank: parse_usize(kv_get(&kv, "generated_rank", l.line_no)?, l.line_no)?,
                nullity: parse_usize(kv_get(&kv, "nullity", l.line_no)?, l.line_no)?,
                spans: match kv_get(&kv, "spans", l.line_no)? {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(Error::ParseError {
                            line: l.line_no,
                            msg: format!("bad spans value {other:?}"),
                        })
                    }
                },
            }
        }
    };
    Ok(Certificate {
        kind,
        command,
        body,
    })
}

// -- verifier ----------------------------------------------------------------

fn fail(detail: String) -> Verdict {
    Verdict { ok: false, detail }
}

fn pass(detail: String) -> Verdict {
    Verdict { ok: true, detail }
}

/// Replay a certificate with full revalidation: path certificates step by
/// step, trade lists trade by trade, rank claims against a modular
/// recomputation, census and kernel-span claims against recomputation.
pub fn verify_certificate(cert: &Certificate) -> Result<Verdict> {
    match &cert.body {
        CertBody::System { order, cycles } => {
            match CycleSystem::from_cycles(*order, cycles.clone()) {
                Ok(_) => Ok(pass(format!("system of order {order} validates"))),
                Err(e) => Ok(fail(format!("system invalid: {e}"))),
            }
        }
        CertBody::Path {
            order,
            start,
            steps,
            end,
        } => {
            let start_sys = match CycleSystem::from_cycles(*order, start.clone()) {
                Ok(s) => s,
                Err(e) => return Ok(fail(format!("start system invalid: {e}"))),
            };
            let mut path = TradePath::empty(start_sys);
            for (i, (removed, added)) in steps.iter().enumerate() {
                if let Err(e) = path.push(PathStep {
                    removed: removed.clone(),
                    added: added.clone(),
                }) {
                    return Ok(fail(format!("step {} fails replay: {e}", i + 1)));
                }
            }
            let end_sys = match CycleSystem::from_cycles(*order, end.clone()) {
                Ok(s) => s,
                Err(e) => return Ok(fail(format!("end system invalid: {e}"))),
            };
            if path.end() != &end_sys {
                return Ok(fail("replayed end differs from certified end".into()));
            }
            Ok(pass(format!("path of {} steps replays", steps.len())))
        }
        CertBody::TradeList { order, claims } => {
            for (i, claim) in claims.iter().enumerate() {
                let t = match Bitrade::new(claim.t1.clone(), claim.t2.clone()) {
                    Ok(t) => t,
                    Err(e) => return Ok(fail(format!("trade {} invalid: {e}", i + 1))),
                };
                if t.volume() != claim.volume || t.foundation() != claim.foundation {
                    return Ok(fail(format!(
                        "trade {}: claimed vol={} found={}, actual vol={} found={}",
                        i + 1,
                        claim.volume,
                        claim.foundation,
                        t.volume(),
                        t.foundation()
                    )));
                }
                if t.t1().iter().any(|c| c.max_vertex() > *order) {
                    return Ok(fail(format!("trade {}: vertex out of order range", i + 1)));
                }
                if let Some(cfg) = claim.config {
                    if t.config() != cfg {
                        return Ok(fail(format!(
                            "trade {}: claimed config {}, actual {}",
                            i + 1,
                            cfg,
                            t.config()
                        )));
                    }
                }
            }
            Ok(pass(format!("{} trades validate", claims.len())))
        }
        CertBody::Census { volume, entries } => {
            if *volume != 3 {
                return Ok(fail(format!("census supports volume 3, got {volume}")));
            }
            for e in entries {
                let recomputed = trades::exhaustive_trade_census(e.foundation..=e.foundation);
                if recomputed[0].classes != e.classes {
                    return Ok(fail(format!(
                        "foundation {}: claimed {} classes, recomputed {}",
                        e.foundation, e.classes, recomputed[0].classes
                    )));
                }
            }
            Ok(pass(format!("{} census entries recompute", entries.len())))
        }
        CertBody::Rank {
            order,
            rows,
            cols,
            rank,
            nullity,
        } => {
            let m = algebra::build_matrix(*order)?;
            if m.rows() != *rows || m.cols() != *cols {
                return Ok(fail(format!(
                    "matrix shape is {}x{}, certificate says {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            if cols - rank != *nullity {
                return Ok(fail("nullity is not cols - rank".into()));
            }
            let (p1, _) = algebra::screen_primes();
            let spot = algebra::modular_rank(&m, p1);
            if spot != *rank {
                return Ok(fail(format!(
                    "rank mod {p1} is {spot}, certificate says {rank}"
                )));
            }
            Ok(pass(format!("rank {rank} agrees with the mod-{p1} spot check")))
        }
        CertBody::KernelSpan {
            order,
            graphs,
            vectors,
            generated_rank,
            nullity,
            spans,
        } => {
            let report = algebra::double_diamond_span(*order)?;
            if report.graph_count != *graphs
                || report.vector_count != *vectors
                || report.generated_rank != *generated_rank
                || report.nullity != *nullity
                || report.spans != *spans
            {
                return Ok(fail(format!(
                    "recomputed (graphs={} vectors={} rank={} nullity={} spans={})",
                    report.graph_count,
                    report.vector_count,
                    report.generated_rank,
                    report.nullity,
                    report.spans
                )));
            }
            Ok(pass("kernel-span report recomputes".into()))
        }
    }
}
