//! Run reports and the structured output format.
//!
//! The structured format is line-delimited key/value text, stable across
//! versions and parseable back into a [`RunReport`] without loss. Floats
//! print in Rust's shortest round-trip form. The human-readable text format
//! is secondary and not machine-parsed.

use std::fmt::Write as _;

use thiserror::Error;

use crate::embed::TopoStats;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ReportStats {
    pub n: usize,
    pub m: usize,
    pub faces: usize,
    pub boundary: usize,
    pub chi: i64,
    pub genus: usize,
    pub orientable: bool,
    pub beta: usize,
}

impl From<TopoStats> for ReportStats {
    fn from(s: TopoStats) -> Self {
        ReportStats {
            n: s.n,
            m: s.m,
            faces: s.faces,
            boundary: s.boundary,
            chi: s.chi,
            genus: s.genus,
            orientable: s.orientable,
            beta: s.beta,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleReport {
    pub edges: Vec<u32>,
    pub weight: f64,
    /// Bit string; `-` for an empty signature.
    pub signature: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub instance: String,
    pub stats: ReportStats,
    pub notes: Vec<String>,
    /// Tree / coforest / leftover sizes, reported by `info`.
    pub decomposition: Option<(usize, usize, usize)>,
    pub cycles: Option<Vec<CycleReport>>,
    pub total_weight: Option<f64>,
    pub timings: Vec<(String, u128)>,
    /// `(check, verdict)` pairs; a verdict is `pass` or `fail <detail>`.
    pub verifications: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(command: &str, instance: &str, stats: TopoStats) -> RunReport {
        RunReport {
            command: command.to_string(),
            instance: instance.to_string(),
            stats: stats.into(),
            notes: Vec::new(),
            decomposition: None,
            cycles: None,
            total_weight: None,
            timings: Vec::new(),
            verifications: Vec::new(),
        }
    }

    pub fn all_verifications_pass(&self) -> bool {
        self.verifications.iter().all(|(_, v)| v == "pass")
    }
}

pub fn write_structured(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "report-version {REPORT_VERSION}");
    let _ = writeln!(out, "command {}", r.command);
    let _ = writeln!(out, "instance {}", r.instance);
    let s = &r.stats;
    let _ = writeln!(out, "stat n {}", s.n);
    let _ = writeln!(out, "stat m {}", s.m);
    let _ = writeln!(out, "stat faces {}", s.faces);
    let _ = writeln!(out, "stat boundary {}", s.boundary);
    let _ = writeln!(out, "stat chi {}", s.chi);
    let _ = writeln!(out, "stat genus {}", s.genus);
    let _ = writeln!(out, "stat orientable {}", s.orientable);
    let _ = writeln!(out, "stat beta {}", s.beta);
    for note in &r.notes {
        let _ = writeln!(out, "note {note}");
    }
    if let Some((t, c, l)) = r.decomposition {
        let _ = writeln!(out, "decomp tree {t} coforest {c} leftover {l}");
    }
    if let Some(cycles) = &r.cycles {
        let _ = writeln!(out, "basis-size {}", cycles.len());
        for (i, c) in cycles.iter().enumerate() {
            let edges = c
                .edges
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let edges = if edges.is_empty() { "-".to_string() } else { edges };
            let _ = writeln!(
                out,
                "cycle {i} weight {} edges {edges} signature {}",
                c.weight, c.signature
            );
        }
    }
    if let Some(w) = r.total_weight {
        let _ = writeln!(out, "total-weight {w}");
    }
    for (phase, micros) in &r.timings {
        let _ = writeln!(out, "timing {phase} {micros}");
    }
    for (check, verdict) in &r.verifications {
        let _ = writeln!(out, "verify {check} {verdict}");
    }
    let _ = writeln!(out, "end");
    out
}

#[derive(Debug, Error, PartialEq)]
#[error("report line {line}: {message}")]
pub struct ReportParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ReportParseError {
    ReportParseError { line, message: message.into() }
}

/// Parses structured report text back into a [`RunReport`].
pub fn parse_structured(text: &str) -> Result<RunReport, ReportParseError> {
    let mut report = RunReport {
        command: String::new(),
        instance: String::new(),
        stats: ReportStats {
            n: 0,
            m: 0,
            faces: 0,
            boundary: 0,
            chi: 0,
            genus: 0,
            orientable: true,
            beta: 0,
        },
        notes: Vec::new(),
        decomposition: None,
        cycles: None,
        total_weight: None,
        timings: Vec::new(),
        verifications: Vec::new(),
    };
    let mut saw_end = false;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "report-version" => {
                let v: u32 = rest.parse().map_err(|_| perr(ln, "bad version"))?;
                if v != REPORT_VERSION {
                    return Err(perr(ln, format!("unsupported report version {v}")));
                }
            }
            "command" => report.command = rest.to_string(),
            "instance" => report.instance = rest.to_string(),
            "stat" => {
                let (name, value) = rest.split_once(' ').ok_or(perr(ln, "bad stat"))?;
                let s = &mut report.stats;
                match name {
                    "n" => s.n = value.parse().map_err(|_| perr(ln, "bad stat n"))?,
                    "m" => s.m = value.parse().map_err(|_| perr(ln, "bad stat m"))?,
                    "faces" => s.faces = value.parse().map_err(|_| perr(ln, "bad stat"))?,
                    "boundary" => s.boundary = value.parse().map_err(|_| perr(ln, "bad stat"))?,
                    "chi" => s.chi = value.parse().map_err(|_| perr(ln, "bad stat"))?,
                    "genus" => s.genus = value.parse().map_err(|_| perr(ln, "bad stat"))?,
                    "orientable" => {
                        s.orientable = value.parse().map_err(|_| perr(ln, "bad stat"))?
                    }
                    "beta" => s.beta = value.parse().map_err(|_| perr(ln, "bad stat"))?,
                    other => return Err(perr(ln, format!("unknown stat `{other}`"))),
                }
            }
            "note" => report.notes.push(rest.to_string()),
            "decomp" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 6 || parts[0] != "tree" || parts[2] != "coforest" || parts[4] != "leftover" {
                    return Err(perr(ln, "bad decomp line"));
                }
                let t = parts[1].parse().map_err(|_| perr(ln, "bad decomp"))?;
                let c = parts[3].parse().map_err(|_| perr(ln, "bad decomp"))?;
                let l = parts[5].parse().map_err(|_| perr(ln, "bad decomp"))?;
                report.decomposition = Some((t, c, l));
            }
            "basis-size" => {
                let k: usize = rest.parse().map_err(|_| perr(ln, "bad basis-size"))?;
                report.cycles = Some(Vec::with_capacity(k));
            }
            "cycle" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 7 || parts[1] != "weight" || parts[3] != "edges" || parts[5] != "signature" {
                    return Err(perr(ln, "bad cycle line"));
                }
                let weight: f64 = parts[2].parse().map_err(|_| perr(ln, "bad weight"))?;
                let edges: Vec<u32> = if parts[4] == "-" {
                    Vec::new()
                } else {
                    parts[4]
                        .split(',')
                        .map(|t| t.parse().map_err(|_| perr(ln, "bad edge id")))
                        .collect::<Result<_, _>>()?
                };
                let cycles = report.cycles.get_or_insert_with(Vec::new);
                cycles.push(CycleReport { edges, weight, signature: parts[6].to_string() });
            }
            "total-weight" => {
                report.total_weight =
                    Some(rest.parse().map_err(|_| perr(ln, "bad total-weight"))?);
            }
            "timing" => {
                let (phase, micros) = rest.split_once(' ').ok_or(perr(ln, "bad timing"))?;
                report.timings.push((
                    phase.to_string(),
                    micros.parse().map_err(|_| perr(ln, "bad timing"))?,
                ));
            }
            "verify" => {
                let (check, verdict) = rest.split_once(' ').ok_or(perr(ln, "bad verify"))?;
                report.verifications.push((check.to_string(), verdict.to_string()));
            }
            "end" => saw_end = true,
            other => return Err(perr(ln, format!("unknown report key `{other}`"))),
        }
    }
    if !saw_end {
        return Err(perr(text.lines().count(), "missing end marker"));
    }
    Ok(report)
}

/// Human-readable rendering.
pub fn write_text(r: &RunReport) -> String {
    let mut out = String::new();
    let s = &r.stats;
    let _ = writeln!(out, "{}: {}", r.command, r.instance);
    let _ = writeln!(
        out,
        "  n={} m={} faces={} boundary={} chi={} genus={} {} beta={}",
        s.n,
        s.m,
        s.faces,
        s.boundary,
        s.chi,
        s.genus,
        if s.orientable { "orientable" } else { "non-orientable" },
        s.beta
    );
    for note in &r.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    if let Some((t, c, l)) = r.decomposition {
        let _ = writeln!(out, "  decomposition: |T|={t} |C|={c} |L|={l}");
    }
    if let Some(cycles) = &r.cycles {
        let _ = writeln!(out, "  basis ({} cycles):", cycles.len());
        for (i, c) in cycles.iter().enumerate() {
            let edges = c
                .edges
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "    {i}: weight {} edges [{}] signature {}", c.weight, edges, c.signature);
        }
    }
    if let Some(w) = r.total_weight {
        let _ = writeln!(out, "  total weight: {w}");
    }
    for (phase, micros) in &r.timings {
        let _ = writeln!(out, "  time {phase}: {micros}us");
    }
    for (check, verdict) in &r.verifications {
        let _ = writeln!(out, "  verify {check}: {verdict}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            command: "mcb".into(),
            instance: "fixtures/theta.sg".into(),
            stats: ReportStats {
                n: 2,
                m: 3,
                faces: 3,
                boundary: 1,
                chi: 2,
                genus: 0,
                orientable: true,
                beta: 0,
            },
            notes: vec!["punctured face 2".into()],
            decomposition: Some((1, 2, 0)),
            cycles: Some(vec![
                CycleReport { edges: vec![0, 1], weight: 3.0, signature: "10".into() },
                CycleReport { edges: vec![0, 2], weight: 4.25, signature: "01".into() },
            ]),
            total_weight: Some(7.25),
            timings: vec![("parse".into(), 42), ("recursion".into(), 7)],
            verifications: vec![("signature-rank".into(), "pass".into())],
        }
    }

    #[test]
    fn structured_round_trip_is_lossless() {
        let r = sample();
        let text = write_structured(&r);
        let parsed = parse_structured(&text).unwrap();
        assert_eq!(parsed, r);
        assert_eq!(write_structured(&parsed), text);
    }

    #[test]
    fn fractional_weights_survive_round_trip() {
        let mut r = sample();
        r.cycles.as_mut().unwrap()[0].weight = 0.1 + 0.2; // 0.30000000000000004
        let parsed = parse_structured(&write_structured(&r)).unwrap();
        assert_eq!(parsed, r);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = parse_structured("report-version 1\nbogus 3\nend\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn missing_end_is_rejected() {
        assert!(parse_structured("report-version 1\ncommand info\n").is_err());
    }
}
