//! On-disk schemas: instance CSV, ground-truth sidecar, solve report.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use gtm_core::problems::{Correspondence, HomographyMatch, PlanarMatch, ProblemKind, RegressionSample};
use gtm_core::simgen::{GenConfig, InstanceData, LabeledInstance};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// 17 significant digits, enough to read back the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header(data: &InstanceData) -> Vec<String> {
    let fixed = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
    match data {
        InstanceData::Linreg(rows) => {
            let n = rows.first().map_or(0, |r| r.a.len());
            (1..=n).map(|j| format!("a_{j}")).chain(["y".to_string()]).collect()
        }
        InstanceData::Planar(_) => fixed(&["u1", "u2", "up1", "up2"]),
        InstanceData::Registration(_) => fixed(&["p1", "p2", "p3", "q1", "q2", "q3"]),
        InstanceData::Homography(_) => fixed(&["z1", "z2", "zp1", "zp2"]),
    }
}

fn rows(data: &InstanceData) -> Vec<Vec<f64>> {
    match data {
        InstanceData::Linreg(v) => v.iter().map(|s| s.a.iter().copied().chain([s.y]).collect()).collect(),
        InstanceData::Planar(v) => v.iter().map(|m| vec![m.u[0], m.u[1], m.up[0], m.up[1]]).collect(),
        InstanceData::Registration(v) => v.iter().map(|c| c.p.iter().chain(&c.q).copied().collect()).collect(),
        InstanceData::Homography(v) => v.iter().map(|m| vec![m.z[0], m.z[1], m.zp[0], m.zp[1]]).collect(),
    }
}

pub fn write_instance_csv<W: Write>(data: &InstanceData, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(data))?;
    for row in rows(data) {
        w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()
}

fn parse_error(path: &str, line: u64, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_string(), line, message: message.into() }
}

fn expected_header(kind: ProblemKind, width: usize) -> Vec<String> {
    let template = match kind {
        ProblemKind::Linreg => InstanceData::Linreg(vec![RegressionSample { a: vec![0.0; width.saturating_sub(1)], y: 0.0 }]),
        ProblemKind::Planar => InstanceData::Planar(vec![]),
        ProblemKind::Registration => InstanceData::Registration(vec![]),
        ProblemKind::Homography => InstanceData::Homography(vec![]),
    };
    csv_header(&template)
}

/// Reads an instance CSV; `label` names the source in error messages.
pub fn read_instance_csv<R: Read>(kind: ProblemKind, input: R, label: &str) -> Result<InstanceData, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_error(label, 1, e.to_string()))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    if header.len() == 1 && header[0].is_empty() {
        return Err(parse_error(label, 1, "missing header row"));
    }
    let expected = expected_header(kind, header.len());
    if header != expected || (kind == ProblemKind::Linreg && header.len() < 3) {
        return Err(parse_error(
            label,
            1,
            format!("header '{}' does not match {kind} schema '{}'", header.join(","), expected.join(",")),
        ));
    }
    let width = header.len();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(label, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: Vec<f64> = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                let x: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| parse_error(label, line, format!("column {}: '{field}' is not a number", header[j])))?;
                if x.is_finite() {
                    Ok(x)
                } else {
                    Err(parse_error(label, line, format!("column {}: non-finite value", header[j])))
                }
            })
            .collect::<Result<_, _>>()?;
        debug_assert_eq!(row.len(), width);
        values.push(row);
    }
    if values.is_empty() {
        return Err(parse_error(label, 2, "no data rows"));
    }
    Ok(match kind {
        ProblemKind::Linreg => InstanceData::Linreg(
            values
                .into_iter()
                .map(|mut r| {
                    let y = r.pop().unwrap();
                    RegressionSample { a: r, y }
                })
                .collect(),
        ),
        ProblemKind::Planar => {
            InstanceData::Planar(values.iter().map(|r| PlanarMatch { u: [r[0], r[1]], up: [r[2], r[3]] }).collect())
        }
        ProblemKind::Registration => InstanceData::Registration(
            values.iter().map(|r| Correspondence { p: [r[0], r[1], r[2]], q: [r[3], r[4], r[5]] }).collect(),
        ),
        ProblemKind::Homography => {
            InstanceData::Homography(values.iter().map(|r| HomographyMatch { z: [r[0], r[1]], zp: [r[2], r[3]] }).collect())
        }
    })
}

pub fn read_instance_file(kind: ProblemKind, path: &Path) -> Result<InstanceData, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_instance_csv(kind, std::io::BufReader::new(file), &path.display().to_string())
}

/// Labels kept next to the data, never inside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthSidecar {
    pub problem: ProblemKind,
    pub config: GenConfig,
    pub ground_truth: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[[f64; 3]; 3]>,
    pub inlier_mask: Vec<bool>,
}

impl TruthSidecar {
    pub fn new(config: &GenConfig, instance: &LabeledInstance) -> Self {
        Self {
            problem: config.kind,
            config: config.clone(),
            ground_truth: instance.ground_truth.clone(),
            rotation: instance.rotation,
            inlier_mask: instance.inlier_mask.clone(),
        }
    }
}

/// `run.csv` -> `run.truth.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("truth.json")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    /// Row-major.
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
}

/// The JSON written by `solve`. `objective` and `certified_gap` are null
/// when the solver failed before producing an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub solver: String,
    pub problem: ProblemKind,
    pub xi: f64,
    pub epsilon: f64,
    pub solution: Vec<f64>,
    pub objective: Option<f64>,
    pub certified_gap: Option<f64>,
    pub outer_iterations: usize,
    pub inner_evals: usize,
    pub wall_ms: f64,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pose: Option<Pose>,
}
