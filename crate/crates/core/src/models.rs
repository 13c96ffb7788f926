//! Phase-insensitive processes generated by local rates, and the physical
//! models built on them (damping, quantum Brownian motion).
//!
//! A rate profile `(eps_t, mu_t)` composes infinitesimal maps
//! `((1 + eps tau) 1, mu tau 1)` into the global map
//!
//! ```text
//! X_t = e^{E(t)} 1,   Y_t = e^{2 E(t)} I(t) 1,
//! E(t) = int_0^t eps,   I(t) = int_0^t mu_r e^{-2 E(r)} dr.
//! ```
//!
//! The global map is CP iff `Lambda_+- = +-1/2 + e^{2E} (-+1/2 + I) >= 0`,
//! equivalently iff `int_0^t e^{-2E(r)} (mu_r -+ eps_r) dr >= 0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::channel::par_map;
use crate::divisibility::{Evaluator, GaussianProcess, ProcessKind};
use crate::quadrature::{integrate_fallible, QuadOptions};
use crate::{Error, Mat, Result};

/// Constant rates on `[t0, t1)`; the last segment is closed on the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSegment {
    pub t0: f64,
    pub t1: f64,
    pub eps: f64,
    pub mu: f64,
}

/// Scalar rate function of time.
pub type RateFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
enum RateSource {
    Segments(Vec<RateSegment>),
    Functions { eps: RateFn, mu: RateFn },
}

/// Cumulative integrals at a time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cumulants {
    /// `E(t) = int_0^t eps`
    pub e: f64,
    /// `I(t) = int_0^t mu_r e^{-2E(r)} dr`
    pub i: f64,
}

/// Rate profile on `[0, horizon]` with cumulative integrals cached at nodes.
#[derive(Clone)]
pub struct RateProfile {
    source: RateSource,
    horizon: f64,
    nodes: Vec<f64>,
    e_nodes: Vec<f64>,
    i_nodes: Vec<f64>,
    // int_0^t e^{-2E} (mu - eps) and int_0^t e^{-2E} (mu + eps)
    jp_nodes: Vec<f64>,
    jm_nodes: Vec<f64>,
}

impl fmt::Debug for RateProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            RateSource::Segments(s) => format!("{} segments", s.len()),
            RateSource::Functions { .. } => "functions".to_string(),
        };
        f.debug_struct("RateProfile")
            .field("source", &kind)
            .field("horizon", &self.horizon)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

/// Uniform cache intervals laid over `[0, horizon]` before breakpoints are
/// merged in.
const CACHE_INTERVALS: usize = 512;

fn quad_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: 4000 }
}

impl RateProfile {
    /// Piecewise-constant profile. Segments must tile `[0, T]` in order.
    pub fn piecewise(segments: Vec<RateSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("rate profile needs at least one segment"));
        }
        if segments[0].t0 != 0.0 {
            return Err(Error::invalid("first rate segment must start at t = 0"));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.t1 > s.t0) || ![s.t0, s.t1, s.eps, s.mu].iter().all(|v| v.is_finite()) {
                return Err(Error::invalid(format!("rate segment {i} is empty or not finite")));
            }
            if i > 0 && (s.t0 - segments[i - 1].t1).abs() > 1e-12 {
                return Err(Error::invalid(format!("rate segment {i} does not start where segment {} ends", i - 1)));
            }
        }
        let horizon = segments.last().expect("non-empty").t1;
        let breakpoints = segments.iter().map(|s| s.t0).collect();
        Self::build(RateSource::Segments(segments), horizon, breakpoints)
    }

    /// Profile from rate functions. `breakpoints` lists times where the rates
    /// may be discontinuous; the quadrature never straddles them.
    pub fn from_fns(horizon: f64, eps: RateFn, mu: RateFn, breakpoints: Vec<f64>) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid("rate profile horizon must be positive"));
        }
        Self::build(RateSource::Functions { eps, mu }, horizon, breakpoints)
    }

    /// Constant rates on `[0, horizon]`.
    pub fn constant(eps: f64, mu: f64, horizon: f64) -> Result<Self> {
        Self::piecewise(vec![RateSegment { t0: 0.0, t1: horizon, eps, mu }])
    }

    /// Damping towards a thermal state of variance `nu_inf`:
    /// `eps = -gamma`, `mu = 2 gamma nu_inf`, so `Y_t = nu_inf (1 - e^{-2 gamma t})`.
    pub fn damping(gamma: f64, nu_inf: f64, horizon: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !(nu_inf >= 0.0) {
            return Err(Error::invalid("damping needs gamma >= 0 and nu_inf >= 0"));
        }
        Self::constant(-gamma, 2.0 * gamma * nu_inf, horizon)
    }

    fn build(source: RateSource, horizon: f64, breakpoints: Vec<f64>) -> Result<Self> {
        let mut nodes: Vec<f64> = (0..=CACHE_INTERVALS)
            .map(|i| horizon * i as f64 / CACHE_INTERVALS as f64)
            .collect();
        nodes.extend(breakpoints.into_iter().filter(|b| *b > 0.0 && *b < horizon));
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * horizon);
        *nodes.last_mut().expect("non-empty") = horizon;

        let mut profile = Self {
            source,
            horizon,
            nodes,
            e_nodes: Vec::new(),
            i_nodes: Vec::new(),
            jp_nodes: Vec::new(),
            jm_nodes: Vec::new(),
        };
        let intervals = profile.nodes.len() - 1;
        let de = par_map(intervals, |k| {
            integrate_fallible(|s| profile.eps(s), profile.nodes[k], profile.nodes[k + 1], &quad_opts())
        });
        let mut e_nodes = Vec::with_capacity(intervals + 1);
        e_nodes.push(0.0);
        for d in de {
            let last = *e_nodes.last().expect("non-empty");
            e_nodes.push(last + d?);
        }
        profile.e_nodes = e_nodes;

        let increments = par_map(intervals, |k| profile.weighted_increments(k, profile.nodes[k + 1]));
        let (mut i_nodes, mut jp_nodes, mut jm_nodes) = (vec![0.0], vec![0.0], vec![0.0]);
        for inc in increments {
            let (di, djp, djm) = inc?;
            i_nodes.push(i_nodes.last().expect("non-empty") + di);
            jp_nodes.push(jp_nodes.last().expect("non-empty") + djp);
            jm_nodes.push(jm_nodes.last().expect("non-empty") + djm);
        }
        profile.i_nodes = i_nodes;
        profile.jp_nodes = jp_nodes;
        profile.jm_nodes = jm_nodes;
        Ok(profile)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn segments(&self) -> Option<&[RateSegment]> {
        match &self.source {
            RateSource::Segments(s) => Some(s),
            RateSource::Functions { .. } => None,
        }
    }

    /// Times where the rates may jump (segment starts), excluding 0.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.source {
            RateSource::Segments(s) => s.iter().skip(1).map(|s| s.t0).collect(),
            RateSource::Functions { .. } => Vec::new(),
        }
    }

    fn segment_at(segments: &[RateSegment], t: f64) -> &RateSegment {
        let idx = segments.partition_point(|s| s.t0 <= t);
        &segments[idx.saturating_sub(1)]
    }

    pub fn eps(&self, t: f64) -> Result<f64> {
        match &self.source {
            RateSource::Segments(s) => Ok(Self::segment_at(s, t).eps),
            RateSource::Functions { eps, .. } => eps(t),
        }
    }

    pub fn mu(&self, t: f64) -> Result<f64> {
        match &self.source {
            RateSource::Segments(s) => Ok(Self::segment_at(s, t).mu),
            RateSource::Functions { mu, .. } => mu(t),
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.horizon.max(1.0);
        if !(t >= -slack && t <= self.horizon + slack) {
            return Err(Error::invalid(format!("time {t} outside [0, {}]", self.horizon)));
        }
        Ok(())
    }

    fn node_index(&self, t: f64) -> usize {
        self.nodes.partition_point(|n| *n <= t).saturating_sub(1).min(self.nodes.len() - 2)
    }

    /// `E(r)` for `r` in the cache interval `k`.
    fn e_from_node(&self, k: usize, r: f64) -> Result<f64> {
        let start = self.nodes[k];
        Ok(self.e_nodes[k] + integrate_fallible(|s| self.eps(s), start, r, &quad_opts())?)
    }

    /// Increments of `I`, `J+` and `J-` from node `k` to `t`.
    fn weighted_increments(&self, k: usize, t: f64) -> Result<(f64, f64, f64)> {
        let start = self.nodes[k];
        if t == start {
            return Ok((0.0, 0.0, 0.0));
        }
        let weight = |r: f64| -> Result<(f64, f64, f64)> {
            let w = (-2.0 * self.e_from_node(k, r)?).exp();
            Ok((w, self.mu(r)?, self.eps(r)?))
        };
        let i = integrate_fallible(|r| weight(r).map(|(w, mu, _)| w * mu), start, t, &quad_opts())?;
        let we = integrate_fallible(|r| weight(r).map(|(w, _, eps)| w * eps), start, t, &quad_opts())?;
        Ok((i, i - we, i + we))
    }

    /// `E(t)` and `I(t)`.
    pub fn cumulants(&self, t: f64) -> Result<Cumulants> {
        self.check_time(t)?;
        let t = t.clamp(0.0, self.horizon);
        let k = self.node_index(t);
        let e = self.e_from_node(k, t)?;
        let (di, _, _) = self.weighted_increments(k, t)?;
        Ok(Cumulants { e, i: self.i_nodes[k] + di })
    }

    /// `(int_0^t e^{-2E} (mu - eps), int_0^t e^{-2E} (mu + eps))`: the integral
    /// forms of `Lambda_+ >= 0` and `Lambda_- >= 0`.
    pub fn physicality_integrals(&self, t: f64) -> Result<(f64, f64)> {
        self.check_time(t)?;
        let t = t.clamp(0.0, self.horizon);
        let k = self.node_index(t);
        let (_, djp, djm) = self.weighted_increments(k, t)?;
        Ok((self.jp_nodes[k] + djp, self.jm_nodes[k] + djm))
    }
}

/// Phase-insensitive process `X_t = e^{E} 1`, `Y_t = e^{2E} I 1` with its exact
/// derivative `dX = eps e^E 1`, `dY = (2 eps e^{2E} I + mu) 1`.
pub fn phase_insensitive_process(rates: Arc<RateProfile>) -> Result<GaussianProcess> {
    let horizon = rates.horizon();
    let r = Arc::clone(&rates);
    let eval: Evaluator = Arc::new(move |t| {
        let c = r.cumulants(t)?;
        let g = c.e.exp();
        Ok((Mat::identity(2, 2) * g, Mat::identity(2, 2) * (g * g * c.i)))
    });
    let r = rates;
    let derivative: Evaluator = Arc::new(move |t| {
        let c = r.cumulants(t)?;
        let (eps, mu) = (r.eps(t)?, r.mu(t)?);
        let g = c.e.exp();
        Ok((
            Mat::identity(2, 2) * (eps * g),
            Mat::identity(2, 2) * (2.0 * eps * g * g * c.i + mu),
        ))
    });
    GaussianProcess::new(1, horizon, ProcessKind::RateGenerated, eval, Some(derivative))
}

/// Eigenvalues `(Lambda_+, Lambda_-)` of the CP matrix of the global map.
pub fn physicality_eigenvalues(rates: &RateProfile, t: f64) -> Result<(f64, f64)> {
    let c = rates.cumulants(t)?;
    let g2 = (2.0 * c.e).exp();
    Ok((0.5 + g2 * (c.i - 0.5), -0.5 + g2 * (c.i + 0.5)))
}

/// Tolerance below zero tolerated by the physicality checks.
pub const PHYSICALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalitySample {
    pub t: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `int_0^t e^{-2E} (mu - eps)`
    pub integral_plus: f64,
    /// `int_0^t e^{-2E} (mu + eps)`
    pub integral_minus: f64,
}

impl PhysicalitySample {
    fn violated(&self) -> bool {
        [self.lambda_plus, self.lambda_minus, self.integral_plus, self.integral_minus]
            .iter()
            .any(|v| *v < -PHYSICALITY_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalityReport {
    pub physical: bool,
    /// First time at which a condition fails, refined by bisection.
    pub violation_time: Option<f64>,
    pub samples: Vec<PhysicalitySample>,
}

pub fn physicality_sample(rates: &RateProfile, t: f64) -> Result<PhysicalitySample> {
    let (lambda_plus, lambda_minus) = physicality_eigenvalues(rates, t)?;
    let (integral_plus, integral_minus) = rates.physicality_integrals(t)?;
    Ok(PhysicalitySample { t, lambda_plus, lambda_minus, integral_plus, integral_minus })
}

/// Checks global complete positivity on `grid` points spanning `[0, T]`.
pub fn is_physical(rates: &RateProfile, grid: usize) -> Result<PhysicalityReport> {
    let n = grid.max(2);
    let horizon = rates.horizon();
    let samples: Vec<PhysicalitySample> = par_map(n, |i| physicality_sample(rates, horizon * i as f64 / (n - 1) as f64))
        .into_iter()
        .collect::<Result<_>>()?;
    let first_bad = samples.iter().position(PhysicalitySample::violated);
    let violation_time = match first_bad {
        None => None,
        Some(0) => Some(0.0),
        Some(i) => {
            let (mut lo, mut hi) = (samples[i - 1].t, samples[i].t);
            while hi - lo > 1e-12 * horizon.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if physicality_sample(rates, mid)?.violated() {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(hi)
        }
    };
    Ok(PhysicalityReport { physical: violation_time.is_none(), violation_time, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceProduct {
    pub value: f64,
    /// Set when the product drops below the Heisenberg bound `1/4`.
    pub violates_uncertainty: bool,
}

/// `<q^2><p^2> = e^{4E} (nu + I)^2` for a thermal input `diag(nu, nu)`.
pub fn canonical_variance_product(rates: &RateProfile, nu: f64, t: f64) -> Result<VarianceProduct> {
    if !(nu >= 0.5) {
        return Err(Error::invalid("thermal parameter nu must be >= 1/2"));
    }
    let c = rates.cumulants(t)?;
    let value = (4.0 * c.e).exp() * (nu + c.i).powi(2);
    Ok(VarianceProduct { value, violates_uncertainty: value < 0.25 - 1e-10 })
}

/// Interval where the process amplifies with less added noise than a
/// quantum-limited amplifier (`eps > 0`, `0 <= mu < eps`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplificationWindow {
    pub start: f64,
    pub end: f64,
    /// Largest `eps - mu` seen inside the window.
    pub max_gap: f64,
}

fn beats_quantum_limit(rates: &RateProfile, t: f64) -> Result<bool> {
    let (eps, mu) = (rates.eps(t)?, rates.mu(t)?);
    Ok(eps > 0.0 && mu >= 0.0 && mu < eps)
}

fn refine_edge(rates: &RateProfile, mut inside: f64, mut outside: f64) -> Result<f64> {
    let resolution = 1e-13 * rates.horizon().max(1.0);
    while (outside - inside).abs() > resolution {
        let mid = 0.5 * (inside + outside);
        if beats_quantum_limit(rates, mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

/// Maximal windows of sub-quantum-limit amplification on a `grid`-point
/// sampling of `[0, T]`, with edges refined by bisection.
pub fn amplification_windows(rates: &RateProfile, grid: usize) -> Result<Vec<AmplificationWindow>> {
    let n = grid.max(2);
    let horizon = rates.horizon();
    let times: Vec<f64> = (0..n).map(|i| horizon * i as f64 / (n - 1) as f64).collect();
    let flags: Vec<bool> = times.iter().map(|&t| beats_quantum_limit(rates, t)).collect::<Result<_>>()?;
    let mut windows = Vec::new();
    let mut i = 0;
    while i < n {
        if !flags[i] {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < n && flags[i + 1] {
            i += 1;
        }
        let last = i;
        let start = if first == 0 { 0.0 } else { refine_edge(rates, times[first], times[first - 1])? };
        let end = if last == n - 1 { horizon } else { refine_edge(rates, times[last], times[last + 1])? };
        let mut max_gap = f64::NEG_INFINITY;
        for &t in &times[first..=last] {
            max_gap = max_gap.max(rates.eps(t)? - rates.mu(t)?);
        }
        windows.push(AmplificationWindow { start, end, max_gap });
        i += 1;
    }
    Ok(windows)
}

/// Quantum Brownian motion with an Ohmic bath `J(w) = w e^{-w / omega_c}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QbmParams {
    pub omega0: f64,
    pub omega_c: f64,
    pub alpha: f64,
    #[serde(rename = "T_bath", default)]
    pub t_bath: f64,
    pub horizon: f64,
}

impl QbmParams {
    /// Zero-temperature bath with cutoff `omega0 / 2`, weak coupling, horizon
    /// of 30 system periods over `2 pi`.
    pub fn reference() -> Self {
        Self { omega0: 1.0, omega_c: 0.5, alpha: 0.2, t_bath: 0.0, horizon: 30.0 }
    }

    fn validate(&self) -> Result<()> {
        let positive = [self.omega0, self.omega_c, self.alpha, self.horizon];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) || !(self.t_bath >= 0.0 && self.t_bath.is_finite()) {
            return Err(Error::invalid("QBM parameters must be positive (T_bath >= 0)"));
        }
        Ok(())
    }
}

/// Number of explicit Matsubara-like terms in the thermal noise kernel.
const THERMAL_TERMS: usize = 200;

/// Kernels of the second-order time-convolutionless coefficients.
#[derive(Debug, Clone, Copy)]
struct QbmKernels {
    params: QbmParams,
}

impl QbmKernels {
    /// `int_0^inf J(w) coth(w / 2T) cos(w s) dw`.
    fn noise(&self, s: f64) -> f64 {
        let a = 1.0 / self.params.omega_c;
        let re_inv_sq = |c: f64| (c * c - s * s) / (c * c + s * s).powi(2);
        if self.params.t_bath == 0.0 {
            return re_inv_sq(a);
        }
        // coth(w / 2T) = 1 + 2 sum_{n >= 1} e^{-n w / T}
        let beta = 1.0 / self.params.t_bath;
        let mut sum = re_inv_sq(a);
        for n in 1..=THERMAL_TERMS {
            sum += 2.0 * re_inv_sq(a + n as f64 * beta);
        }
        // midpoint tail: 2 int_{N+1/2}^inf Re (c(x) - i s)^{-2} dx
        let c = a + (THERMAL_TERMS as f64 + 0.5) * beta;
        sum + 2.0 * c / (beta * (c * c + s * s))
    }

    /// `int_0^inf J(w) sin(w s) dw`.
    fn dissipation(&self, s: f64) -> f64 {
        let a = 1.0 / self.params.omega_c;
        2.0 * a * s / (a * a + s * s).powi(2)
    }

    fn delta_integrand(&self, s: f64) -> f64 {
        self.params.alpha.powi(2) * (self.params.omega0 * s).cos() * self.noise(s)
    }

    fn gamma_integrand(&self, s: f64) -> f64 {
        self.params.alpha.powi(2) * (self.params.omega0 * s).sin() * self.dissipation(s)
    }
}

/// Direct evaluation of `(Delta_t, gamma_t)` by quadrature from 0.
pub fn qbm_coefficients(params: &QbmParams, t: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(t >= 0.0) {
        return Err(Error::invalid("QBM coefficients need t >= 0"));
    }
    let k = QbmKernels { params: *params };
    let opts = quad_opts();
    let delta = crate::quadrature::integrate(|s| k.delta_integrand(s), 0.0, t, &opts)?;
    let gamma = crate::quadrature::integrate(|s| k.gamma_integrand(s), 0.0, t, &opts)?;
    Ok((delta, gamma))
}

/// QBM coefficients with cumulative values cached on a uniform grid.
#[derive(Debug, Clone)]
pub struct QbmModel {
    kernels: QbmKernels,
    step: f64,
    delta_nodes: Vec<f64>,
    gamma_nodes: Vec<f64>,
}

impl QbmModel {
    pub fn new(params: QbmParams) -> Result<Self> {
        params.validate()?;
        let kernels = QbmKernels { params };
        let intervals = 2048;
        let step = params.horizon / intervals as f64;
        let opts = quad_opts();
        let pieces = par_map(intervals, |k| {
            let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
            let d = crate::quadrature::integrate(|s| kernels.delta_integrand(s), a, b, &opts)?;
            let g = crate::quadrature::integrate(|s| kernels.gamma_integrand(s), a, b, &opts)?;
            Ok::<_, Error>((d, g))
        });
        let (mut delta_nodes, mut gamma_nodes) = (vec![0.0], vec![0.0]);
        for p in pieces {
            let (d, g) = p?;
            delta_nodes.push(delta_nodes.last().expect("non-empty") + d);
            gamma_nodes.push(gamma_nodes.last().expect("non-empty") + g);
        }
        Ok(Self { kernels, step, delta_nodes, gamma_nodes })
    }

    pub fn params(&self) -> &QbmParams {
        &self.kernels.params
    }

    /// `(Delta_t, gamma_t)`.
    pub fn coefficients(&self, t: f64) -> Result<(f64, f64)> {
        let horizon = self.kernels.params.horizon;
        if !(t >= 0.0 && t <= horizon * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!("time {t} outside [0, {horizon}]")));
        }
        let k = ((t / self.step).floor() as usize).min(self.delta_nodes.len() - 2);
        let a = k as f64 * self.step;
        let opts = quad_opts();
        let d = crate::quadrature::integrate(|s| self.kernels.delta_integrand(s), a, t, &opts)?;
        let g = crate::quadrature::integrate(|s| self.kernels.gamma_integrand(s), a, t, &opts)?;
        Ok((self.delta_nodes[k] + d, self.gamma_nodes[k] + g))
    }

    /// Rates `eps_t = -gamma_t`, `mu_t = Delta_t`.
    pub fn rate_profile(self: &Arc<Self>) -> Result<RateProfile> {
        let (m1, m2) = (Arc::clone(self), Arc::clone(self));
        let eps: RateFn = Arc::new(move |t| m1.coefficients(t).map(|(_, g)| -g));
        let mu: RateFn = Arc::new(move |t| m2.coefficients(t).map(|(d, _)| d));
        RateProfile::from_fns(self.kernels.params.horizon, eps, mu, Vec::new())
    }
}

/// Rate profile of the QBM model.
pub fn qbm_rate_profile(params: QbmParams) -> Result<RateProfile> {
    Arc::new(QbmModel::new(params)?).rate_profile()
}

/// Phase-insensitive process of the QBM model.
pub fn qbm_process(params: QbmParams) -> Result<GaussianProcess> {
    phase_insensitive_process(Arc::new(qbm_rate_profile(params)?))
}
