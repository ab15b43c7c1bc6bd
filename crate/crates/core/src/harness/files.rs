//! On-disk formats: network JSON, trace CSV and frontier JSON.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HarnessError;
use crate::dominance::Metrics;
use crate::filter::FilterDecision;
use crate::mads::{TraceDecision, TraceRecord};
use crate::sim::{Base, Branch, Bus, BusId, NetworkModel, VoltageLimits};
use crate::switches::SwitchVector;

pub const NETWORK_SCHEMA_VERSION: u32 = 1;
pub const FRONTIER_SCHEMA_VERSION: u32 = 1;
pub const TRACE_HEADER: [&str; 7] = [
    "eval",
    "candidate_bits",
    "f_kw",
    "h",
    "decision",
    "incumbent_id",
    "filter_size",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    schema_version: u32,
    base: BaseFile,
    #[serde(default)]
    v_limits: LimitsFile,
    source_bus: BusId,
    buses: Vec<BusFile>,
    branches: Vec<BranchFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseFile {
    s_base_kva: f64,
    v_base_kv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitsFile {
    min: f64,
    max: f64,
}

impl Default for LimitsFile {
    fn default() -> Self {
        let d = VoltageLimits::default();
        Self { min: d.min, max: d.max }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BusFile {
    id: BusId,
    p_kw: f64,
    q_kvar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchFile {
    id: u32,
    from: BusId,
    to: BusId,
    r_pu: f64,
    x_pu: f64,
    rating_pu: f64,
    switchable: bool,
}

/// Reads and validates a network file.
pub fn load_network(path: impl AsRef<Path>) -> Result<NetworkModel, HarnessError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| {
        if source.kind() == io::ErrorKind::NotFound {
            HarnessError::MissingFile(path.to_path_buf())
        } else {
            HarnessError::Io { path: path.to_path_buf(), source }
        }
    })?;
    parse_network(&text).map_err(|e| e.with_path(path))
}

/// Parses network JSON from a string.
pub fn parse_network(text: &str) -> Result<NetworkModel, HarnessError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: NetworkFile = serde_path_to_error::deserialize(de).map_err(|err| {
        let field = err.path().to_string();
        let inner = err.into_inner();
        HarnessError::Parse {
            path: None,
            line: inner.line(),
            column: inner.column(),
            field,
            message: inner.to_string(),
        }
    })?;
    if file.schema_version != NETWORK_SCHEMA_VERSION {
        return Err(HarnessError::UnsupportedSchema {
            found: file.schema_version,
            expected: NETWORK_SCHEMA_VERSION,
        });
    }
    let buses = file
        .buses
        .into_iter()
        .map(|b| Bus { id: b.id, p_kw: b.p_kw, q_kvar: b.q_kvar })
        .collect();
    let branches = file
        .branches
        .into_iter()
        .map(|b| Branch {
            id: b.id,
            from: b.from,
            to: b.to,
            r_pu: b.r_pu,
            x_pu: b.x_pu,
            rating_pu: b.rating_pu,
            switchable: b.switchable,
        })
        .collect();
    Ok(NetworkModel::new(
        Base { s_base_kva: file.base.s_base_kva, v_base_kv: file.base.v_base_kv },
        VoltageLimits { min: file.v_limits.min, max: file.v_limits.max },
        file.source_bus,
        buses,
        branches,
    )?)
}

/// Canonical JSON text for a network (pretty-printed, trailing newline).
pub fn network_to_json(network: &NetworkModel) -> String {
    let base = network.base();
    let limits = network.v_limits();
    let file = NetworkFile {
        schema_version: NETWORK_SCHEMA_VERSION,
        base: BaseFile { s_base_kva: base.s_base_kva, v_base_kv: base.v_base_kv },
        v_limits: LimitsFile { min: limits.min, max: limits.max },
        source_bus: network.source_bus(),
        buses: network
            .buses()
            .iter()
            .map(|b| BusFile { id: b.id, p_kw: b.p_kw, q_kvar: b.q_kvar })
            .collect(),
        branches: network
            .branches()
            .iter()
            .map(|b| BranchFile {
                id: b.id,
                from: b.from,
                to: b.to,
                r_pu: b.r_pu,
                x_pu: b.x_pu,
                rating_pu: b.rating_pu,
                switchable: b.switchable,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("network serializes");
    text.push('\n');
    text
}

/// A loss value that may be the infeasible sentinel, written as `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loss(pub f64);

impl Serialize for Loss {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Loss {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Loss(v)),
            Raw::Text(t) if t == "inf" => Ok(Loss(f64::INFINITY)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid loss {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierFileEntry {
    pub bits: String,
    pub f_kw: Loss,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierFile {
    pub schema_version: u32,
    pub entries: Vec<FrontierFileEntry>,
}

impl FrontierFile {
    /// Builds the file body, sorting by loss then violation.
    pub fn from_points<'a, I>(points: I) -> Self
    where
        I: IntoIterator<Item = (&'a SwitchVector, &'a Metrics)>,
    {
        let mut entries: Vec<(&SwitchVector, &Metrics)> = points.into_iter().collect();
        entries.sort_by(|a, b| {
            a.1.f()
                .total_cmp(&b.1.f())
                .then(a.1.h().total_cmp(&b.1.h()))
                .then(a.0.cmp(b.0))
        });
        Self {
            schema_version: FRONTIER_SCHEMA_VERSION,
            entries: entries
                .into_iter()
                .map(|(x, m)| FrontierFileEntry {
                    bits: x.to_string(),
                    f_kw: Loss(m.f()),
                    h: m.h(),
                })
                .collect(),
        }
    }

    /// Parsed entries as typed values.
    pub fn points(&self) -> Result<Vec<(SwitchVector, Metrics)>, HarnessError> {
        self.entries
            .iter()
            .map(|e| {
                let x = e.bits.parse().map_err(|err| HarnessError::InvalidOutput(format!("{err}")))?;
                let m = Metrics::new(e.f_kw.0, e.h)
                    .map_err(|err| HarnessError::InvalidOutput(format!("{err}")))?;
                Ok((x, m))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("frontier serializes");
        text.push('\n');
        text
    }
}

pub fn write_frontier(path: &Path, frontier: &FrontierFile) -> Result<(), HarnessError> {
    write_text(path, &frontier.to_json())
}

pub fn read_frontier(path: &Path) -> Result<FrontierFile, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| HarnessError::InvalidOutput(e.to_string()))
}

fn format_loss(f: f64) -> String {
    if f == f64::INFINITY {
        "inf".to_owned()
    } else {
        f.to_string()
    }
}

fn format_candidate(coords: &[i32]) -> String {
    coords.iter().map(i32::to_string).collect()
}

fn decision_label(decision: &TraceDecision) -> &'static str {
    match decision {
        TraceDecision::Filter(FilterDecision::AddedNonDominating) => "added",
        TraceDecision::Filter(FilterDecision::AddedReplacing(_)) => "replaced",
        TraceDecision::Filter(FilterDecision::Rejected(_)) => "rejected",
        TraceDecision::Filter(FilterDecision::RejectedDuplicate(_)) => "duplicate",
        TraceDecision::SkippedInvalid => "skipped_invalid",
    }
}

/// Writes trace rows as CSV under the fixed header.
pub fn write_trace_csv<W: Write>(out: W, trace: &[TraceRecord]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TRACE_HEADER)?;
    for record in trace {
        let (f, h) = match record.metrics {
            Some(m) => (format_loss(m.f()), m.h().to_string()),
            None => (String::new(), String::new()),
        };
        writer.write_record([
            record.eval_index.map(|i| i.to_string()).unwrap_or_default(),
            format_candidate(&record.candidate),
            f,
            h,
            decision_label(&record.decision).to_owned(),
            record.incumbent_id.map(|i| i.to_string()).unwrap_or_default(),
            record.filter_size_after.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn trace_to_csv(trace: &[TraceRecord]) -> String {
    let mut buf = Vec::new();
    write_trace_csv(&mut buf, trace).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn write_trace(path: &Path, trace: &[TraceRecord]) -> Result<(), HarnessError> {
    write_text(path, &trace_to_csv(trace))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|source| HarnessError::Io { path: PathBuf::from(path), source })
}
