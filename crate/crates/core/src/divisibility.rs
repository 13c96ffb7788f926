//! Divisibility of time-dependent Gaussian processes.
//!
//! A process is a family `(X_t, Y_t)` starting at the identity map. Its
//! intermediate maps `X_tau(t) = X_{t+tau} X_t^{-1}`,
//! `Y_tau(t) = Y_{t+tau} - X_tau(t) Y_t X_tau(t)^T` carry the state from `t` to
//! `t + tau`. For one mode, their first-order behaviour is captured by the
//! local rates `(eps, delta, kappa, mu)`, which place each instant in one of
//! three regions of the `(eps, mu)` plane:
//!
//! * CP: `mu >= |eps|`
//! * P but not CP: `2 mu >= |eps| - eps`
//! * NP: everything else.
//!
//! A process whose path stays in CP is Markovian, one that visits P\CP but
//! never NP is weakly non-Markovian, and one that reaches NP is strongly
//! non-Markovian.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::channel::{is_positive_one_mode, par_map, MarginCheck, PositivityScan};
use crate::spline::CubicSpline;
use crate::symplectic::max_abs;
use crate::{Error, GaussianMap, Mat, Result};

pub use crate::channel::PositivityClass as Region;

/// `t -> (X_t, Y_t)` or `t -> (dX/dt, dY/dt)`.
pub type Evaluator = Arc<dyn Fn(f64) -> Result<(Mat, Mat)> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    Analytic,
    Tabulated,
    RateGenerated,
}

/// Time-parameterized Gaussian process on `[0, horizon]`.
#[derive(Clone)]
pub struct GaussianProcess {
    n: usize,
    horizon: f64,
    kind: ProcessKind,
    eval: Evaluator,
    derivative: Option<Evaluator>,
}

impl fmt::Debug for GaussianProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaussianProcess")
            .field("n", &self.n)
            .field("horizon", &self.horizon)
            .field("kind", &self.kind)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl GaussianProcess {
    /// Builds a process and checks that it starts at the identity map.
    pub fn new(
        n: usize,
        horizon: f64,
        kind: ProcessKind,
        eval: Evaluator,
        derivative: Option<Evaluator>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("process needs at least one mode"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("process horizon must be positive and finite"));
        }
        let (x0, y0) = eval(0.0)?;
        if x0.shape() != (2 * n, 2 * n) || y0.shape() != (2 * n, 2 * n) {
            return Err(Error::invalid("process evaluator returned matrices of the wrong size"));
        }
        if max_abs(&(x0 - Mat::identity(2 * n, 2 * n))) > 1e-9 || max_abs(&y0) > 1e-9 {
            return Err(Error::invalid("process must start at the identity map (X_0 = 1, Y_0 = 0)"));
        }
        Ok(Self { n, horizon, kind, eval, derivative })
    }

    /// Entrywise natural cubic spline through tabulated `(X_t, Y_t)`. The
    /// first time must be 0.
    pub fn tabulated(times: Vec<f64>, xs: Vec<Mat>, ys: Vec<Mat>) -> Result<Self> {
        if times.len() < 2 || xs.len() != times.len() || ys.len() != times.len() {
            return Err(Error::invalid("tabulated process needs >= 2 samples of times, X and Y"));
        }
        if times[0] != 0.0 {
            return Err(Error::invalid("tabulated process must start at t = 0"));
        }
        let d = xs[0].nrows();
        if d == 0 || d % 2 != 0 || xs.iter().chain(ys.iter()).any(|m| m.shape() != (d, d)) {
            return Err(Error::invalid("tabulated matrices must all be 2n x 2n"));
        }
        let horizon = *times.last().expect("len >= 2");
        let mut splines = Vec::with_capacity(2 * d * d);
        for table in [&xs, &ys] {
            for i in 0..d {
                for j in 0..d {
                    let values = table.iter().map(|m| m[(i, j)]).collect();
                    splines.push(CubicSpline::new(times.clone(), values)?);
                }
            }
        }
        let splines = Arc::new(splines);
        let build = |which: usize| -> Evaluator {
            let splines = Arc::clone(&splines);
            Arc::new(move |t| {
                let pick = |offset: usize| {
                    Mat::from_fn(d, d, |i, j| {
                        let (v, dv) = splines[offset + i * d + j].eval(t);
                        if which == 0 {
                            v
                        } else {
                            dv
                        }
                    })
                };
                let x = pick(0);
                let y = pick(d * d);
                Ok((x, (&y + y.transpose()) * 0.5))
            })
        };
        Self::new(d / 2, horizon, ProcessKind::Tabulated, build(0), Some(build(1)))
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.horizon.max(1.0);
        if !(t >= -slack && t <= self.horizon + slack) {
            return Err(Error::invalid(format!("time {t} outside [0, {}]", self.horizon)));
        }
        Ok(())
    }

    /// Raw `(X_t, Y_t)`.
    pub fn matrices(&self, t: f64) -> Result<(Mat, Mat)> {
        self.check_time(t)?;
        (self.eval)(t)
    }

    /// The global map from 0 to `t`.
    pub fn map_at(&self, t: f64) -> Result<GaussianMap> {
        let (x, y) = self.matrices(t)?;
        GaussianMap::new(x, y)
    }

    fn derivative_fd(&self, t: f64, h: f64) -> Result<(Mat, Mat)> {
        let (lo, hi) = (0.0, self.horizon);
        if t - h >= lo && t + h <= hi {
            let (xp, yp) = (self.eval)(t + h)?;
            let (xm, ym) = (self.eval)(t - h)?;
            Ok(((xp - xm) / (2.0 * h), (yp - ym) / (2.0 * h)))
        } else {
            // second-order one-sided stencil pointing into the interval
            let s = if t - h < lo { h } else { -h };
            let (x0, y0) = (self.eval)(t)?;
            let (x1, y1) = (self.eval)(t + s)?;
            let (x2, y2) = (self.eval)(t + 2.0 * s)?;
            let dx = (x1 * 4.0 - x0 * 3.0 - x2) / (2.0 * s);
            let dy = (y1 * 4.0 - y0 * 3.0 - y2) / (2.0 * s);
            Ok((dx, dy))
        }
    }
}

fn invert(x: &Mat, t: f64) -> Result<Mat> {
    let scale = max_abs(x).max(f64::MIN_POSITIVE);
    let det = x.determinant();
    if !det.is_finite() || det.abs() <= 1e-12 * scale.powi(x.nrows() as i32) {
        return Err(Error::SingularMap { t: Some(t) });
    }
    x.clone().try_inverse().ok_or(Error::SingularMap { t: Some(t) })
}

/// Intermediate map carrying the state from `t` to `t + tau`.
pub fn intermediate_map(process: &GaussianProcess, t: f64, tau: f64) -> Result<GaussianMap> {
    if tau < 0.0 {
        return Err(Error::invalid("tau must be non-negative"));
    }
    let (x_t, y_t) = process.matrices(t)?;
    let (x_end, y_end) = process.matrices(t + tau)?;
    let x_tau = x_end * invert(&x_t, t)?;
    let y_tau = y_end - &x_tau * y_t * x_tau.transpose();
    GaussianMap::new(x_tau, (&y_tau + y_tau.transpose()) * 0.5)
}

/// First-order invariants of the intermediate map at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalRates {
    pub t: f64,
    pub eps: f64,
    pub delta: f64,
    pub kappa: f64,
    pub mu: f64,
}

/// `|delta|` below which the first-order noise matrix is treated as zero.
pub const DEFAULT_TOL_DELTA: f64 = 1e-12;

impl LocalRates {
    /// Assembles the rates and derives `mu` from `delta` and `kappa`.
    pub fn from_parts(t: f64, eps: f64, delta: f64, kappa: f64, tol_delta: f64) -> Self {
        let mu = if delta.abs() <= tol_delta {
            0.0
        } else if delta > 0.0 {
            // sgn(0) is irrelevant: trace 0 and det > 0 cannot co-occur
            kappa.signum() * delta.sqrt()
        } else {
            -(-delta).sqrt()
        };
        Self { t, eps, delta, kappa, mu }
    }
}

fn rates_from_derivatives(
    t: f64,
    x: &Mat,
    y: &Mat,
    dx: &Mat,
    dy: &Mat,
    tol_delta: f64,
) -> Result<LocalRates> {
    if x.nrows() != 2 {
        return Err(Error::Unsupported("local rates are defined for one-mode processes only".into()));
    }
    let x_inv = invert(x, t)?;
    let eps = 0.5 * (&x_inv * dx).trace();
    let w = &x_inv * y * x_inv.transpose();
    let a = &x_inv * dx;
    let w_dot = &x_inv * dy * x_inv.transpose() - &a * &w - &w * a.transpose();
    let det_x = x.determinant();
    let delta = det_x * det_x * w_dot.determinant();
    let kappa = dy.trace() - 2.0 * (dx * &x_inv * y).trace();
    Ok(LocalRates::from_parts(t, eps, delta, kappa, tol_delta))
}

fn check_interior(process: &GaussianProcess, t: f64) -> Result<()> {
    if !(t > 0.0 && t < process.horizon) {
        return Err(Error::invalid(format!(
            "local rates need t in (0, {}), got {t}",
            process.horizon
        )));
    }
    Ok(())
}

/// Local rates at `t`, using the analytic derivative when the process has one
/// and central differences with step `h` otherwise.
pub fn local_rates(process: &GaussianProcess, t: f64, h: f64) -> Result<LocalRates> {
    local_rates_with(process, t, h, DEFAULT_TOL_DELTA, false)
}

/// Local rates from finite differences regardless of the analytic derivative.
pub fn local_rates_fd(process: &GaussianProcess, t: f64, h: f64) -> Result<LocalRates> {
    local_rates_with(process, t, h, DEFAULT_TOL_DELTA, true)
}

pub fn local_rates_with(
    process: &GaussianProcess,
    t: f64,
    h: f64,
    tol_delta: f64,
    force_fd: bool,
) -> Result<LocalRates> {
    check_interior(process, t)?;
    if !(h > 0.0) {
        return Err(Error::invalid("finite-difference step must be positive"));
    }
    let (x, y) = (process.eval)(t)?;
    let (dx, dy) = match (&process.derivative, force_fd) {
        (Some(d), false) => d(t)?,
        _ => process.derivative_fd(t, h)?,
    };
    rates_from_derivatives(t, &x, &y, &dx, &dy, tol_delta)
}

/// Region of `(eps, mu)` with a tolerance band `margin` on each boundary.
pub fn classify_point(eps: f64, mu: f64, margin: f64) -> Region {
    if mu >= eps.abs() - margin {
        Region::Cp
    } else if 2.0 * mu >= eps.abs() - eps - margin {
        Region::PNotCp
    } else {
        Region::Np
    }
}

/// Region of a full rate sample: indefinite first-order noise (`delta < 0`)
/// is never positive, and a negative trace rules out complete positivity.
pub fn classify_rates(rates: &LocalRates, margin: f64, tol_delta: f64) -> Region {
    if rates.delta < -tol_delta {
        return Region::Np;
    }
    let region = classify_point(rates.eps, rates.mu, margin);
    if region == Region::Cp && rates.kappa < -margin {
        if 2.0 * rates.mu >= rates.eps.abs() - rates.eps - margin {
            Region::PNotCp
        } else {
            Region::Np
        }
    } else {
        region
    }
}

/// Non-Markovianity class of a process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProcessClass {
    #[serde(rename = "markovian")]
    Markovian,
    #[serde(rename = "weak")]
    WeaklyNonMarkovian,
    #[serde(rename = "strong")]
    StronglyNonMarkovian,
}

impl ProcessClass {
    pub fn from_regions(regions: impl IntoIterator<Item = Region>) -> Self {
        let mut class = ProcessClass::Markovian;
        for r in regions {
            match r {
                Region::Np => return ProcessClass::StronglyNonMarkovian,
                Region::PNotCp => class = ProcessClass::WeaklyNonMarkovian,
                Region::Cp => {}
            }
        }
        class
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProcessClass::Markovian => "markovian",
            ProcessClass::WeaklyNonMarkovian => "weak",
            ProcessClass::StronglyNonMarkovian => "strong",
        }
    }
}

/// Knobs for [`classify_process`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    pub grid: usize,
    pub margin: f64,
    pub fd_step: f64,
    pub tol_delta: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { grid: 400, margin: 1e-6, fd_step: 1e-4, tol_delta: DEFAULT_TOL_DELTA }
    }
}

/// Cell midpoints `T (i + 1/2) / N`, strictly inside `(0, T)`.
pub fn time_grid(horizon: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| horizon * (i as f64 + 0.5) / n as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    #[serde(flatten)]
    pub rates: LocalRates,
    pub region: Region,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    pub from: Region,
    pub to: Region,
}

/// Per-time region labels, boundary crossings and the overall class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub class: ProcessClass,
    pub crossings: Vec<Crossing>,
    pub samples: Vec<RateSample>,
}

impl DivisibilityReport {
    /// The path `{(eps_s, mu_s)}` in the rate plane.
    pub fn path(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.rates.eps, s.rates.mu)).collect()
    }
}

fn label_at(process: &GaussianProcess, t: f64, opts: &ClassifyOptions) -> Result<Region> {
    let rates = local_rates_with(process, t, opts.fd_step, opts.tol_delta, false)?;
    Ok(classify_rates(&rates, opts.margin, opts.tol_delta))
}

/// Samples the local rates on [`time_grid`], labels every point, locates
/// region changes by bisection and assigns the three-class verdict.
pub fn classify_process(process: &GaussianProcess, opts: &ClassifyOptions) -> Result<DivisibilityReport> {
    if opts.grid < 2 {
        return Err(Error::invalid("classification grid needs at least 2 points"));
    }
    if !(opts.margin >= 0.0 && opts.fd_step > 0.0 && opts.tol_delta >= 0.0) {
        return Err(Error::invalid("margin, fd_step and tol_delta must be non-negative (fd_step > 0)"));
    }
    if process.n != 1 {
        return Err(Error::Unsupported(
            "rate-based classification is defined for one-mode processes; use direct intermediate-map checks".into(),
        ));
    }
    let grid = time_grid(process.horizon, opts.grid);
    let evaluated = par_map(grid.len(), |i| {
        let t = grid[i];
        let (x, _) = (process.eval)(t)?;
        let det = x.determinant();
        let rates = local_rates_with(process, t, opts.fd_step, opts.tol_delta, false)?;
        Ok::<_, Error>((det, rates))
    });
    let mut samples = Vec::with_capacity(grid.len());
    for (i, item) in evaluated.into_iter().enumerate() {
        let (det, rates) = item.map_err(|e| match e {
            Error::SingularMap { .. } => Error::SingularMap { t: Some(grid[i]) },
            Error::InvalidArgument(m) => Error::InvalidArgument(format!("at t = {}: {m}", grid[i])),
            Error::NumericalFailure(m) => Error::NumericalFailure(format!("at t = {}: {m}", grid[i])),
            other => other,
        })?;
        if det <= 0.0 {
            // X_0 = 1, so a non-positive determinant means a sign change
            return Err(Error::Unsupported(format!(
                "det X_t changes sign before t = {}; rate-based classification needs det X_t > 0",
                grid[i]
            )));
        }
        let region = classify_rates(&rates, opts.margin, opts.tol_delta);
        samples.push(RateSample { rates, region });
    }

    let resolution = process.horizon / (100.0 * opts.grid as f64);
    let mut crossings = Vec::new();
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.region == b.region {
            continue;
        }
        let (mut lo, mut hi) = (a.rates.t, b.rates.t);
        while hi - lo > resolution {
            let mid = 0.5 * (lo + hi);
            if label_at(process, mid, opts)? == a.region {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        crossings.push(Crossing { t: 0.5 * (lo + hi), from: a.region, to: b.region });
    }

    Ok(DivisibilityReport {
        class: ProcessClass::from_regions(samples.iter().map(|s| s.region)),
        crossings,
        samples,
    })
}

/// Row of the `(eps, mu)` trajectory export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub eps: f64,
    pub mu: f64,
    pub delta: f64,
    pub kappa: f64,
    pub region: Region,
}

pub fn trajectory(process: &GaussianProcess, opts: &ClassifyOptions) -> Result<Vec<TrajectoryPoint>> {
    Ok(classify_process(process, opts)?
        .samples
        .into_iter()
        .map(|s| TrajectoryPoint {
            t: s.rates.t,
            eps: s.rates.eps,
            mu: s.rates.mu,
            delta: s.rates.delta,
            kappa: s.rates.kappa,
            region: s.region,
        })
        .collect())
}

/// Complete positivity of the intermediate map from `t` to `t + tau`.
pub fn check_intermediate_cp(process: &GaussianProcess, t: f64, tau: f64, tol: f64) -> Result<MarginCheck> {
    Ok(intermediate_map(process, t, tau)?.is_cp(tol))
}

/// Positivity of the one-mode intermediate map from `t` to `t + tau`.
pub fn check_intermediate_p_one_mode(
    process: &GaussianProcess,
    t: f64,
    tau: f64,
    scan: &PositivityScan,
    tol: f64,
) -> Result<MarginCheck> {
    if process.n != 1 {
        return Err(Error::invalid("one-mode positivity check needs n = 1"));
    }
    let map = intermediate_map(process, t, tau)?;
    let p = is_positive_one_mode(&map, tol, scan).map_err(|e| match e {
        Error::SingularMap { .. } => Error::SingularMap { t: Some(t) },
        other => other,
    })?;
    Ok(MarginCheck { holds: p.positive, margin: p.margin })
}

/// First grid time at which the global map `(X_t, Y_t)` fails complete
/// positivity, if any. Grid includes both endpoints.
pub fn first_global_cp_violation(process: &GaussianProcess, grid: usize, tol: f64) -> Result<Option<f64>> {
    let n = grid.max(2);
    for i in 0..n {
        let t = process.horizon * i as f64 / (n - 1) as f64;
        if !process.map_at(t)?.is_cp(tol).holds {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
