//! File schemas for channels, processes and reports.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::divisibility::TrajectoryPoint;
use crate::models::{phase_insensitive_process, qbm_rate_profile, RateSegment};
use crate::{Error, GaussianMap, GaussianProcess, Mat, QbmParams, RateProfile, Result};

fn matrix_from_rows(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<Mat> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::invalid(format!("{what} must be a {dim}x{dim} array")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{what} has non-finite entries")));
    }
    Ok(Mat::from_fn(dim, dim, |i, j| rows[i][j]))
}

/// Row-major nested arrays, the layout used by all file schemas.
pub fn matrix_to_rows(m: &Mat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `{"n": 1, "X": [[..], ..], "Y": [[..], ..]}` with row-major `2n x 2n` arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub n: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<f64>>,
}

impl ChannelFile {
    pub fn from_map(map: &GaussianMap) -> Self {
        Self { n: map.modes(), x: matrix_to_rows(map.x()), y: matrix_to_rows(map.y()) }
    }

    pub fn to_map(&self) -> Result<GaussianMap> {
        if self.n == 0 {
            return Err(Error::invalid("channel needs n >= 1"));
        }
        let dim = 2 * self.n;
        GaussianMap::new(matrix_from_rows(&self.x, dim, "X")?, matrix_from_rows(&self.y, dim, "Y")?)
    }
}

pub fn parse_channel(text: &str) -> Result<GaussianMap> {
    let file: ChannelFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("channel JSON: {e}")))?;
    file.to_map()
}

/// Process description, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProcessFile {
    Tabulated {
        n: usize,
        times: Vec<f64>,
        #[serde(rename = "X")]
        x: Vec<Vec<Vec<f64>>>,
        #[serde(rename = "Y")]
        y: Vec<Vec<Vec<f64>>>,
    },
    Rates {
        segments: Vec<RateSegment>,
    },
    Qbm {
        omega0: f64,
        omega_c: f64,
        alpha: f64,
        #[serde(rename = "T_bath", default)]
        t_bath: f64,
        /// Defaults to `30 / omega0`.
        #[serde(default)]
        horizon: Option<f64>,
    },
    Damping {
        gamma: f64,
        nu_inf: f64,
        horizon: f64,
    },
}

/// A parsed process, with its rate profile when it is rate generated.
#[derive(Debug, Clone)]
pub struct LoadedProcess {
    pub process: GaussianProcess,
    pub rates: Option<Arc<RateProfile>>,
}

impl ProcessFile {
    pub fn load(&self) -> Result<LoadedProcess> {
        let rates = match self {
            ProcessFile::Tabulated { n, times, x, y } => {
                if *n == 0 {
                    return Err(Error::invalid("process needs n >= 1"));
                }
                if x.len() != times.len() || y.len() != times.len() {
                    return Err(Error::invalid("tabulated process needs one X and one Y per time"));
                }
                let dim = 2 * n;
                let xs = x.iter().map(|m| matrix_from_rows(m, dim, "X")).collect::<Result<_>>()?;
                let ys = y.iter().map(|m| matrix_from_rows(m, dim, "Y")).collect::<Result<_>>()?;
                let process = GaussianProcess::tabulated(times.clone(), xs, ys)?;
                return Ok(LoadedProcess { process, rates: None });
            }
            ProcessFile::Rates { segments } => RateProfile::piecewise(segments.clone())?,
            ProcessFile::Qbm { omega0, omega_c, alpha, t_bath, horizon } => qbm_rate_profile(QbmParams {
                omega0: *omega0,
                omega_c: *omega_c,
                alpha: *alpha,
                t_bath: *t_bath,
                horizon: horizon.unwrap_or(30.0 / omega0),
            })?,
            ProcessFile::Damping { gamma, nu_inf, horizon } => RateProfile::damping(*gamma, *nu_inf, *horizon)?,
        };
        let rates = Arc::new(rates);
        Ok(LoadedProcess { process: phase_insensitive_process(Arc::clone(&rates))?, rates: Some(rates) })
    }
}

pub fn parse_process(text: &str) -> Result<LoadedProcess> {
    let file: ProcessFile =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("process JSON: {e}")))?;
    file.load()
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    // Display for f64 is the shortest round-trip representation
    format!("{v}")
}

/// Trajectory CSV with header `t,eps,mu,delta,kappa,region`.
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("t,eps,mu,delta,kappa,region\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_float(p.t),
            format_float(p.eps),
            format_float(p.mu),
            format_float(p.delta),
            format_float(p.kappa),
            p.region.as_str()
        );
    }
    out
}
