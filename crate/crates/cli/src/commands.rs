use std::fmt::Write as _;

use gaussdiv::channel::{classify_map, FalsifierBudget};
use gaussdiv::divisibility::{
    classify_process as classify, first_global_cp_violation, intermediate_map, time_grid, trajectory as rate_path,
    DivisibilityReport, TrajectoryPoint,
};
use gaussdiv::io::{format_float, matrix_to_rows, parse_channel, parse_process, trajectory_csv, LoadedProcess};
use gaussdiv::models::{amplification_windows, is_physical, AmplificationWindow, PhysicalitySample};
use gaussdiv::{ClassifyOptions, Error, GaussianProcess, PositivityClass, PositivityScan, ProcessClass};
use serde::Serialize;

use crate::{Format, Produced, RunArgs};

const FALSIFIER_CAVEAT: &str = "falsifier-only";

fn json(value: &impl Serialize) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::NumericalFailure(format!("serialize: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn budget(a: &RunArgs) -> FalsifierBudget {
    FalsifierBudget { seed: a.seed, ..FalsifierBudget::default() }
}

fn options(a: &RunArgs) -> ClassifyOptions {
    ClassifyOptions { grid: a.grid, margin: a.margin, fd_step: a.fd_step, ..ClassifyOptions::default() }
}

fn load(a: &RunArgs) -> Result<LoadedProcess, Error> {
    parse_process(&a.read_input()?)
}

#[derive(Serialize)]
struct ChannelReport {
    n: usize,
    class: PositivityClass,
    cp_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_margin_sampled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<&'static str>,
}

pub fn check_channel(a: &RunArgs) -> Result<Produced, Error> {
    let map = parse_channel(&a.read_input()?)?;
    let v = classify_map(&map, a.tol, &PositivityScan::default(), &budget(a))?;
    let report = ChannelReport {
        n: map.modes(),
        class: v.class,
        cp_margin: v.cp_margin,
        p_margin: v.p_margin.filter(|_| v.exact),
        p_margin_sampled: v.p_margin.filter(|_| !v.exact),
        witness: v.witness.as_ref().map(matrix_to_rows),
        caveat: (!v.exact).then_some(FALSIFIER_CAVEAT),
    };
    let body = match a.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let p = v.p_margin.map(format_float).unwrap_or_default();
            format!("class,cp_margin,p_margin\n{},{},{p}\n", v.class.as_str(), format_float(v.cp_margin))
        }
    };
    Ok(Produced { body, unphysical: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Physicality {
    physical: bool,
    violation_time: Option<f64>,
}

fn global_physicality(loaded: &LoadedProcess, a: &RunArgs) -> Result<Physicality, Error> {
    let violation_time = match &loaded.rates {
        Some(r) => is_physical(r, a.grid)?.violation_time,
        None => first_global_cp_violation(&loaded.process, a.grid, a.tol)?,
    };
    Ok(Physicality { physical: violation_time.is_none(), violation_time })
}

#[derive(Serialize)]
struct ProcessReport {
    #[serde(flatten)]
    report: DivisibilityReport,
    #[serde(flatten)]
    physicality: Physicality,
}

#[derive(Debug, Clone, Serialize)]
struct MapSample {
    t: f64,
    region: PositivityClass,
    cp_margin: f64,
    p_margin: Option<f64>,
}

#[derive(Serialize)]
struct MultimodeReport {
    class: ProcessClass,
    samples: Vec<MapSample>,
    #[serde(flatten)]
    physicality: Physicality,
    caveat: &'static str,
}

/// Labels the intermediate maps `t -> t + tau` directly; used for processes
/// with more than one mode, where local rates are not defined.
fn classify_multimode(process: &GaussianProcess, a: &RunArgs) -> Result<Vec<MapSample>, Error> {
    let scan = PositivityScan::default();
    time_grid(process.horizon(), a.grid)
        .into_iter()
        .filter(|t| t + a.tau <= process.horizon())
        .map(|t| {
            let map = intermediate_map(process, t, a.tau)?;
            let v = classify_map(&map, a.tol, &scan, &budget(a))?;
            Ok(MapSample { t, region: v.class, cp_margin: v.cp_margin, p_margin: v.p_margin })
        })
        .collect()
}

pub fn classify_process(a: &RunArgs) -> Result<Produced, Error> {
    let loaded = load(a)?;
    let physicality = global_physicality(&loaded, a)?;
    let unphysical = !physicality.physical;
    if loaded.process.modes() > 1 {
        let samples = classify_multimode(&loaded.process, a)?;
        let class = ProcessClass::from_regions(samples.iter().map(|s| s.region));
        let body = match a.format.unwrap_or(Format::Json) {
            Format::Json => json(&MultimodeReport { class, samples, physicality, caveat: FALSIFIER_CAVEAT })?,
            Format::Csv => {
                let mut out = String::from("t,cp_margin,p_margin,region\n");
                for s in &samples {
                    let p = s.p_margin.map(format_float).unwrap_or_default();
                    let _ = writeln!(out, "{},{},{p},{}", format_float(s.t), format_float(s.cp_margin), s.region.as_str());
                }
                out
            }
        };
        return Ok(Produced { body, unphysical });
    }
    let report = classify(&loaded.process, &options(a))?;
    let body = match a.format.unwrap_or(Format::Json) {
        Format::Json => json(&ProcessReport { report, physicality })?,
        Format::Csv => trajectory_csv(&points(&report)),
    };
    Ok(Produced { body, unphysical })
}

fn points(report: &DivisibilityReport) -> Vec<TrajectoryPoint> {
    report
        .samples
        .iter()
        .map(|s| TrajectoryPoint {
            t: s.rates.t,
            eps: s.rates.eps,
            mu: s.rates.mu,
            delta: s.rates.delta,
            kappa: s.rates.kappa,
            region: s.region,
        })
        .collect()
}

pub fn trajectory(a: &RunArgs) -> Result<Produced, Error> {
    let loaded = load(a)?;
    let pts = rate_path(&loaded.process, &options(a))?;
    let body = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => trajectory_csv(&pts),
        Format::Json => json(&pts)?,
    };
    Ok(Produced { body, unphysical: false })
}

#[derive(Serialize)]
struct MarginRow {
    t: f64,
    cp_margin: f64,
}

#[derive(Serialize)]
struct PhysicalityOutput<T: Serialize> {
    #[serde(flatten)]
    physicality: Physicality,
    samples: Vec<T>,
}

pub fn physicality(a: &RunArgs) -> Result<Produced, Error> {
    let loaded = load(a)?;
    let format = a.format.unwrap_or(Format::Csv);
    if let Some(r) = &loaded.rates {
        let rep = is_physical(r, a.grid)?;
        let physicality = Physicality { physical: rep.physical, violation_time: rep.violation_time };
        let body = match format {
            Format::Json => json(&PhysicalityOutput { physicality, samples: rep.samples })?,
            Format::Csv => physicality_csv(&rep.samples),
        };
        return Ok(Produced { body, unphysical: !rep.physical });
    }
    // general processes: complete positivity of the global map on the grid
    let process = &loaded.process;
    let n = a.grid;
    let rows = (0..n)
        .map(|i| {
            let t = process.horizon() * i as f64 / (n - 1) as f64;
            Ok(MarginRow { t, cp_margin: process.map_at(t)?.cp_margin() })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let violation_time = rows.iter().find(|r| r.cp_margin < -a.tol).map(|r| r.t);
    let physicality = Physicality { physical: violation_time.is_none(), violation_time };
    let body = match format {
        Format::Json => json(&PhysicalityOutput { physicality, samples: rows })?,
        Format::Csv => {
            let mut out = String::from("t,cp_margin\n");
            for r in &rows {
                let _ = writeln!(out, "{},{}", format_float(r.t), format_float(r.cp_margin));
            }
            out
        }
    };
    Ok(Produced { body, unphysical: !physicality.physical })
}

fn physicality_csv(samples: &[PhysicalitySample]) -> String {
    let mut out = String::from("t,lambda_plus,lambda_minus,integral_plus,integral_minus\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_float(s.t),
            format_float(s.lambda_plus),
            format_float(s.lambda_minus),
            format_float(s.integral_plus),
            format_float(s.integral_minus)
        );
    }
    out
}

/// Windows read off the sampled local rates, for processes given as tables.
fn windows_from_samples(points: &[TrajectoryPoint]) -> Vec<AmplificationWindow> {
    let mut windows: Vec<AmplificationWindow> = Vec::new();
    let mut open = false;
    for p in points {
        let inside = p.eps > 0.0 && p.mu >= 0.0 && p.mu < p.eps;
        match (inside, open) {
            (true, true) => {
                let w = windows.last_mut().expect("open window");
                w.end = p.t;
                w.max_gap = w.max_gap.max(p.eps - p.mu);
            }
            (true, false) => windows.push(AmplificationWindow { start: p.t, end: p.t, max_gap: p.eps - p.mu }),
            _ => {}
        }
        open = inside;
    }
    windows
}

#[derive(Serialize)]
struct AmplificationOutput {
    windows: Vec<AmplificationWindow>,
}

pub fn amplification(a: &RunArgs) -> Result<Produced, Error> {
    let loaded = load(a)?;
    let windows = match &loaded.rates {
        Some(r) => amplification_windows(r, a.grid)?,
        None => windows_from_samples(&rate_path(&loaded.process, &options(a))?),
    };
    let body = match a.format.unwrap_or(Format::Json) {
        Format::Json => json(&AmplificationOutput { windows })?,
        Format::Csv => {
            let mut out = String::from("start,end,max_gap\n");
            for w in &windows {
                let _ = writeln!(out, "{},{},{}", format_float(w.start), format_float(w.end), format_float(w.max_gap));
            }
            out
        }
    };
    Ok(Produced { body, unphysical: false })
}
