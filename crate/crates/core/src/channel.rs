//! Gaussian maps `(X, Y)` and their positivity battery.
//!
//! * complete positivity: `Y - (i/2) Omega + (i/2) X Omega X^T >= 0`;
//! * positivity on Gaussian inputs: `(1/2) X S S^T X^T + Y - (i/2) Omega >= 0`
//!   for every symplectic `S` (decided exactly for one mode, falsified by
//!   sampling otherwise);
//! * k-positivity: positivity of `(X (+) 1_k, Y (+) 0_k)`, falsified on
//!   two-mode squeezed witnesses and random pure states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::symplectic::{is_symmetric, max_abs, min_eig_parts, omega, random_symplectic_with, rotation};
use crate::{Error, GaussianState, Mat, Result, Vector};

/// A Gaussian map on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMap {
    x: Mat,
    y: Mat,
}

/// A boolean verdict together with the minimum eigenvalue behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginCheck {
    pub holds: bool,
    pub margin: f64,
}

impl GaussianMap {
    pub fn new(x: Mat, y: Mat) -> Result<Self> {
        if !x.is_square() || x.nrows() == 0 || x.nrows() % 2 != 0 {
            return Err(Error::invalid("X must be a non-empty 2n x 2n matrix"));
        }
        if x.shape() != y.shape() {
            return Err(Error::invalid("X and Y must have the same shape"));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("X and Y must be finite"));
        }
        if !is_symmetric(&y, 1e-10) {
            return Err(Error::invalid("Y must be symmetric"));
        }
        let y = (&y + y.transpose()) * 0.5;
        Ok(Self { x, y })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x: Mat::identity(2 * n, 2 * n),
            y: Mat::zeros(2 * n, 2 * n),
        }
    }

    /// One-mode `X = g 1`, `Y = y 1`.
    pub fn phase_insensitive(gain: f64, noise: f64) -> Self {
        Self {
            x: Mat::identity(2, 2) * gain,
            y: Mat::identity(2, 2) * noise,
        }
    }

    /// Pure-loss channel with transmissivity `eta`.
    pub fn attenuator(eta: f64) -> Self {
        Self::phase_insensitive(eta.sqrt(), (1.0 - eta) / 2.0)
    }

    /// Quantum-limited amplifier with intensity gain `gain`.
    pub fn amplifier(gain: f64) -> Self {
        Self::phase_insensitive(gain.sqrt(), (gain - 1.0) / 2.0)
    }

    /// Phase-space transposition `p -> -p`: positive but not CP.
    pub fn transposition() -> Self {
        Self {
            x: Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
            y: Mat::zeros(2, 2),
        }
    }

    pub fn modes(&self) -> usize {
        self.x.nrows() / 2
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.modes() != self.modes() {
            return Err(Error::invalid(format!(
                "map acts on {} modes, state has {}",
                self.modes(),
                state.modes()
            )));
        }
        let d = &self.x * state.displacement();
        let sigma = &self.x * state.covariance() * self.x.transpose() + &self.y;
        Ok(GaussianState::from_parts_unchecked(d, sigma))
    }

    /// `self` applied after `earlier`.
    pub fn after(&self, earlier: &GaussianMap) -> Result<GaussianMap> {
        compose(self, earlier)
    }

    /// Direct sum with `k` identity ancilla modes appended after the system.
    pub fn extend(&self, k: usize) -> Result<GaussianMap> {
        if k == 0 {
            return Err(Error::invalid("extension needs at least one ancilla mode"));
        }
        let d = self.x.nrows();
        let total = d + 2 * k;
        let mut x = Mat::identity(total, total);
        x.view_mut((0, 0), (d, d)).copy_from(&self.x);
        let mut y = Mat::zeros(total, total);
        y.view_mut((0, 0), (d, d)).copy_from(&self.y);
        Ok(GaussianMap { x, y })
    }

    /// Minimum eigenvalue of `Y - (i/2) Omega + (i/2) X Omega X^T`.
    pub fn cp_margin(&self) -> f64 {
        let w = omega(self.modes());
        let im = (&self.x * &w * self.x.transpose() - &w) * 0.5;
        min_eig_parts(&self.y, &im)
    }

    pub fn is_cp(&self, tol: f64) -> MarginCheck {
        let margin = self.cp_margin();
        MarginCheck { holds: margin >= -tol, margin }
    }

    /// Added noise above the quantum limit for a phase-insensitive map,
    /// `y - |g^2 - 1| / 2`. Negative values beat the limit.
    pub fn quantum_limit_gap(&self) -> Result<f64> {
        let d = self.x.nrows();
        let g = self.x[(0, 0)];
        let noise = self.y[(0, 0)];
        let scalar_x = max_abs(&(&self.x - Mat::identity(d, d) * g)) <= 1e-9;
        let scalar_y = max_abs(&(&self.y - Mat::identity(d, d) * noise)) <= 1e-9;
        if !(scalar_x && scalar_y) {
            return Err(Error::invalid("map is not phase-insensitive (X, Y must be multiples of 1)"));
        }
        Ok(noise - (g * g - 1.0).abs() / 2.0)
    }
}

/// `later o earlier`: `X = X2 X1`, `Y = X2 Y1 X2^T + Y2`.
pub fn compose(later: &GaussianMap, earlier: &GaussianMap) -> Result<GaussianMap> {
    if later.modes() != earlier.modes() {
        return Err(Error::invalid("cannot compose maps on different mode counts"));
    }
    let x = &later.x * &earlier.x;
    let y = &later.x * &earlier.y * later.x.transpose() + &later.y;
    let y = (&y + y.transpose()) * 0.5;
    Ok(GaussianMap { x, y })
}

/// Grid for the one-mode positivity decision. `S S^T` is parameterized as
/// `O_theta diag(z^2, z^-2) O_theta^T` with `theta in [0, pi)` and
/// `log10 z in [log10_z_min, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityScan {
    pub theta_steps: usize,
    pub log10_z_steps: usize,
    pub log10_z_min: f64,
    /// Number of best coarse cells refined by golden-section search.
    pub refine_starts: usize,
    pub refine_rounds: usize,
}

impl Default for PositivityScan {
    fn default() -> Self {
        Self {
            theta_steps: 128,
            log10_z_steps: 128,
            log10_z_min: -6.0,
            refine_starts: 4,
            refine_rounds: 8,
        }
    }
}

/// Result of the one-mode positivity decision.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityCheck {
    pub positive: bool,
    pub margin: f64,
    /// Symplectic `S` attaining the worst margin; `(1/2) S S^T` is the input
    /// state closest to violating the uncertainty relation at the output.
    pub witness: Mat,
}

/// Minimum eigenvalue of `(1/2) X S S^T X^T + Y - (i/2) Omega` for one mode.
///
/// The output covariance has entries of order `z^-2`, so a generic eigensolver
/// loses all absolute accuracy near `z = 1e-6`. The determinant is assembled
/// from `det(X S S^T X^T / 2) = det(X)^2 / 4` and terms linear in the large
/// matrix, and the small eigenvalue is recovered as `det / lambda_max`.
struct OneModeScanner {
    x: [[f64; 2]; 2],
    y: [f64; 3],
    det_y: f64,
    det_p: f64,
}

impl OneModeScanner {
    fn new(map: &GaussianMap) -> Self {
        let x = [[map.x[(0, 0)], map.x[(0, 1)]], [map.x[(1, 0)], map.x[(1, 1)]]];
        let y = [map.y[(0, 0)], map.y[(0, 1)], map.y[(1, 1)]];
        let det_x = x[0][0] * x[1][1] - x[0][1] * x[1][0];
        Self {
            x,
            y,
            det_y: y[0] * y[2] - y[1] * y[1],
            det_p: det_x * det_x / 4.0,
        }
    }

    fn margin(&self, theta: f64, log10_z: f64) -> f64 {
        let z2 = 10f64.powf(2.0 * log10_z);
        let (s, c) = theta.sin_cos();
        // columns of X O_theta, scaled by z and 1/z
        let u = [self.x[0][0] * c + self.x[0][1] * s, self.x[1][0] * c + self.x[1][1] * s];
        let v = [-self.x[0][0] * s + self.x[0][1] * c, -self.x[1][0] * s + self.x[1][1] * c];
        let p00 = 0.5 * (z2 * u[0] * u[0] + v[0] * v[0] / z2);
        let p11 = 0.5 * (z2 * u[1] * u[1] + v[1] * v[1] / z2);
        let p01 = 0.5 * (z2 * u[0] * u[1] + v[0] * v[1] / z2);
        let a = p00 + self.y[0];
        let d = p11 + self.y[2];
        let b = p01 + self.y[1];
        let cross = p00 * self.y[2] + p11 * self.y[0] - 2.0 * p01 * self.y[1];
        let det_m = self.det_p + self.det_y + cross - 0.25;
        let half_tr = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b + 0.25).sqrt();
        if half_tr > 0.0 {
            det_m / (half_tr + radius)
        } else {
            half_tr - radius
        }
    }

    fn witness(theta: f64, log10_z: f64) -> Mat {
        let z = 10f64.powf(log10_z);
        rotation(theta) * Mat::from_diagonal(&Vector::from_vec(vec![z, 1.0 / z]))
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..iters {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        }
    }
    if fa < fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

/// Exact positivity decision for one-mode maps by a compact scan over
/// `Sp(2, R)` modulo rotations.
pub fn is_positive_one_mode(map: &GaussianMap, tol: f64, scan: &PositivityScan) -> Result<PositivityCheck> {
    if map.modes() != 1 {
        return Err(Error::invalid("one-mode positivity scan needs n = 1"));
    }
    if scan.theta_steps < 2 || scan.log10_z_steps < 2 || scan.log10_z_min >= 0.0 {
        return Err(Error::invalid("positivity scan needs >= 2 steps per axis and log10_z_min < 0"));
    }
    let det_x = map.x.determinant();
    if det_x.abs() <= 1e-12 * max_abs(&map.x).powi(2).max(f64::MIN_POSITIVE) {
        return Err(Error::SingularMap { t: None });
    }
    let scanner = OneModeScanner::new(map);
    let pi = std::f64::consts::PI;
    let d_theta = pi / scan.theta_steps as f64;
    let d_lz = -scan.log10_z_min / (scan.log10_z_steps - 1) as f64;

    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(scan.theta_steps * scan.log10_z_steps);
    for i in 0..scan.theta_steps {
        let theta = i as f64 * d_theta;
        for j in 0..scan.log10_z_steps {
            let lz = scan.log10_z_min + j as f64 * d_lz;
            cells.push((scanner.margin(theta, lz), theta, lz));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = cells[0];
    for &(m0, theta0, lz0) in cells.iter().take(scan.refine_starts.max(1)) {
        let (mut theta, mut lz, mut m) = (theta0, lz0, m0);
        let (mut h_theta, mut h_lz) = (d_theta, d_lz);
        for _ in 0..scan.refine_rounds {
            let (t_new, m_t) = golden_min(|t| scanner.margin(t, lz), theta - h_theta, theta + h_theta, 40);
            if m_t < m {
                theta = t_new;
                m = m_t;
            }
            let lo = (lz - h_lz).max(scan.log10_z_min);
            let hi = (lz + h_lz).min(0.0);
            let (lz_new, m_z) = golden_min(|l| scanner.margin(theta, l), lo, hi, 40);
            if m_z < m {
                lz = lz_new;
                m = m_z;
            }
            h_theta *= 0.5;
            h_lz *= 0.5;
        }
        // endpoints of the z range are not reachable by golden section
        for edge in [scan.log10_z_min, 0.0] {
            let me = scanner.margin(theta, edge);
            if me < m {
                m = me;
                lz = edge;
            }
        }
        if m < best.0 {
            best = (m, theta, lz);
        }
    }
    let (margin, theta, lz) = best;
    Ok(PositivityCheck {
        positive: margin >= -tol,
        margin,
        witness: OneModeScanner::witness(theta.rem_euclid(pi), lz),
    })
}

/// Sampling falsifier for positivity on `n >= 1` modes: the worst margin of
/// `(1/2) X S S^T X^T + Y - (i/2) Omega` over `samples` random symplectics.
pub fn positivity_falsifier(map: &GaussianMap, r_max: f64, samples: usize, seed: u64) -> (f64, Mat) {
    let n = map.modes();
    let im = omega(n) * -0.5;
    let eval = |i: usize| {
        let mut rng = stream_rng(seed, i as u64);
        let s = random_symplectic_with(n, r_max, &mut rng);
        let out = &map.x * &s * s.transpose() * map.x.transpose() * 0.5 + &map.y;
        (min_eig_parts(&out, &im), s)
    };
    let mut worst = (f64::INFINITY, Mat::identity(2 * n, 2 * n));
    // the identity is always a candidate: it is the vacuum input
    let out = &map.x * map.x.transpose() * 0.5 + &map.y;
    let m0 = min_eig_parts(&out, &im);
    if m0 < worst.0 {
        worst.0 = m0;
    }
    for (m, s) in par_map(samples, eval) {
        if m < worst.0 {
            worst = (m, s);
        }
    }
    worst
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..count).map(f).collect()
}

/// Positivity class of a Gaussian map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositivityClass {
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "P_not_CP")]
    PNotCp,
    #[serde(rename = "NP")]
    Np,
}

impl PositivityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PositivityClass::Cp => "CP",
            PositivityClass::PNotCp => "P_not_CP",
            PositivityClass::Np => "NP",
        }
    }
}

/// Full positivity verdict for a map.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityVerdict {
    pub class: PositivityClass,
    pub cp_margin: f64,
    /// Worst positivity margin: exact scan for one mode, sampled otherwise.
    pub p_margin: Option<f64>,
    /// Symplectic attaining `p_margin`.
    pub witness: Option<Mat>,
    /// `false` when the P/NP split comes from the sampling falsifier only.
    pub exact: bool,
}

/// Sampling budget used for the multimode positivity falsifier.
#[derive(Debug, Clone, PartialEq)]
pub struct FalsifierBudget {
    pub r_max: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for FalsifierBudget {
    fn default() -> Self {
        Self { r_max: 3.0, samples: 2000, seed: 0 }
    }
}

/// Classifies `map` as CP, P-not-CP or NP.
pub fn classify_map(
    map: &GaussianMap,
    tol: f64,
    scan: &PositivityScan,
    budget: &FalsifierBudget,
) -> Result<PositivityVerdict> {
    let cp = map.is_cp(tol);
    if map.modes() == 1 {
        let p = match is_positive_one_mode(map, tol, scan) {
            Ok(p) => Some(p),
            Err(Error::SingularMap { .. }) if cp.holds => None,
            Err(e) => return Err(e),
        };
        let class = match (&p, cp.holds) {
            (_, true) => PositivityClass::Cp,
            (Some(p), false) if p.positive => PositivityClass::PNotCp,
            _ => PositivityClass::Np,
        };
        return Ok(PositivityVerdict {
            class,
            cp_margin: cp.margin,
            p_margin: p.as_ref().map(|p| p.margin),
            witness: p.map(|p| p.witness),
            exact: true,
        });
    }
    let (p_margin, witness) = positivity_falsifier(map, budget.r_max, budget.samples, budget.seed);
    let class = if cp.holds {
        PositivityClass::Cp
    } else if p_margin >= -tol {
        PositivityClass::PNotCp
    } else {
        PositivityClass::Np
    };
    Ok(PositivityVerdict {
        class,
        cp_margin: cp.margin,
        p_margin: Some(p_margin),
        witness: Some(witness),
        exact: false,
    })
}

/// Outcome of the k-positivity falsifier.
#[derive(Debug, Clone, PartialEq)]
pub enum KPositivity {
    NoViolationFound,
    /// `state` is the `(n + k)`-mode covariance whose image violates the
    /// uncertainty relation by `margin`.
    Violated { state: Mat, margin: f64 },
}

impl KPositivity {
    pub fn is_violated(&self) -> bool {
        matches!(self, KPositivity::Violated { .. })
    }
}

/// Default two-mode squeezing sweep `r = 0.25, 0.5, ..., 5`.
pub fn default_r_grid() -> Vec<f64> {
    (1..=20).map(|i| 0.25 * i as f64).collect()
}

/// Two-mode squeezed vacuum between `mode_a` and `mode_b` of an `n`-mode
/// register, all other modes in vacuum.
pub fn tmsv_embedded(n: usize, mode_a: usize, mode_b: usize, r: f64) -> Mat {
    let mut sigma = Mat::identity(2 * n, 2 * n) * 0.5;
    let (ch, sh) = (0.5 * r.cosh(), 0.5 * r.sinh());
    for q in 0..2 {
        let sign = if q == 0 { 1.0 } else { -1.0 };
        let (a, b) = (2 * mode_a + q, 2 * mode_b + q);
        sigma[(a, a)] = ch;
        sigma[(b, b)] = ch;
        sigma[(a, b)] = sh * sign;
        sigma[(b, a)] = sh * sign;
    }
    sigma
}

/// Searches for an `(n + k)`-mode state whose image under the extended map
/// violates the uncertainty relation. A `NoViolationFound` outcome is not a
/// proof of k-positivity.
pub fn is_kpositive_falsifier(
    map: &GaussianMap,
    k: usize,
    r_grid: &[f64],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<KPositivity> {
    let ext = map.extend(k)?;
    let n = map.modes();
    let total = n + k;
    let im = omega(total) * -0.5;
    let test = |sigma: Mat| -> Option<KPositivity> {
        let out = &ext.x * &sigma * ext.x.transpose() + &ext.y;
        let margin = min_eig_parts(&out, &im);
        let threshold = tol + 64.0 * f64::EPSILON * max_abs(&out);
        (margin < -threshold).then_some(KPositivity::Violated { state: sigma, margin })
    };

    for mode in 0..n {
        for &r in r_grid {
            if let Some(v) = test(tmsv_embedded(total, mode, n, r)) {
                return Ok(v);
            }
        }
    }
    let found = par_map(samples, |i| {
        let mut rng = stream_rng(seed, i as u64);
        let s = random_symplectic_with(total, 2.0, &mut rng);
        test(&s * s.transpose() * 0.5)
    });
    Ok(found.into_iter().flatten().next().unwrap_or(KPositivity::NoViolationFound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::is_valid_covariance;
    use approx::assert_abs_diff_eq;

    fn diag(v: &[f64]) -> Mat {
        Mat::from_diagonal(&Vector::from_vec(v.to_vec()))
    }

    #[test]
    fn apply_examples() {
        let vac = GaussianState::vacuum(1);
        assert_eq!(GaussianMap::identity(1).apply(&vac).unwrap(), vac);
        let out = GaussianMap::attenuator(0.5).apply(&vac).unwrap();
        assert!((out.covariance() - Mat::identity(2, 2) * 0.5).amax() < 1e-15);
        let m = GaussianMap::new(Mat::identity(2, 2) * 2.0, Mat::zeros(2, 2)).unwrap();
        let s = GaussianState::from_parts_unchecked(Vector::from_vec(vec![1.0, 0.0]), Mat::identity(2, 2) * 0.5);
        let out = m.apply(&s).unwrap();
        assert_eq!(out.displacement(), &Vector::from_vec(vec![2.0, 0.0]));
        assert_eq!(out.covariance(), &(Mat::identity(2, 2) * 2.0));
        assert!(m.apply(&GaussianState::vacuum(2)).is_err());
    }

    #[test]
    fn compose_attenuators() {
        let m = compose(&GaussianMap::attenuator(0.3), &GaussianMap::attenuator(0.6)).unwrap();
        let expect = GaussianMap::attenuator(0.18);
        assert!((m.x() - expect.x()).amax() < 1e-15);
        assert!((m.y() - expect.y()).amax() < 1e-15);
        assert!(compose(&GaussianMap::identity(1), &GaussianMap::identity(2)).is_err());
    }

    #[test]
    fn cp_examples() {
        let c = GaussianMap::phase_insensitive(2f64.sqrt(), 0.5).is_cp(1e-9);
        assert!(c.holds);
        assert_abs_diff_eq!(c.margin, 0.0, epsilon = 1e-12);
        let c = GaussianMap::phase_insensitive(2f64.sqrt(), 0.25).is_cp(1e-9);
        assert!(!c.holds);
        assert_abs_diff_eq!(c.margin, -0.25, epsilon = 1e-12);
        let c = GaussianMap::transposition().is_cp(1e-9);
        assert!(!c.holds);
        assert_abs_diff_eq!(c.margin, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn positivity_examples() {
        let scan = PositivityScan::default();
        let t = is_positive_one_mode(&GaussianMap::transposition(), 1e-9, &scan).unwrap();
        assert!(t.positive, "margin {}", t.margin);
        assert!(t.margin >= -1e-9);
        let np = GaussianMap::new(Mat::identity(2, 2), Mat::identity(2, 2) * -0.25).unwrap();
        let p = is_positive_one_mode(&np, 1e-9, &scan).unwrap();
        assert!(!p.positive);
        // S = 1 already gives eigenvalue 1/4 - 1/2
        assert!(p.margin <= -0.25 + 1e-12);
        let amp = is_positive_one_mode(&GaussianMap::amplifier(3.0), 1e-9, &scan).unwrap();
        assert!(amp.positive);
    }

    #[test]
    fn positivity_rejects_bad_input() {
        let scan = PositivityScan::default();
        let singular = GaussianMap::new(diag(&[1.0, 0.0]), Mat::identity(2, 2)).unwrap();
        assert_eq!(is_positive_one_mode(&singular, 1e-9, &scan), Err(Error::SingularMap { t: None }));
        assert!(is_positive_one_mode(&GaussianMap::identity(2), 1e-9, &scan).is_err());
    }

    #[test]
    fn scanner_matches_generic_eigensolver() {
        let map = GaussianMap::new(
            Mat::from_row_slice(2, 2, &[1.3, -0.4, 0.2, 0.9]),
            Mat::from_row_slice(2, 2, &[0.3, 0.1, 0.1, -0.2]),
        )
        .unwrap();
        let scanner = OneModeScanner::new(&map);
        for &(theta, lz) in &[(0.0, 0.0), (0.4, -0.3), (2.0, -1.0), (3.0, -0.7)] {
            let s = OneModeScanner::witness(theta, lz);
            let out = map.x() * &s * s.transpose() * map.x().transpose() * 0.5 + map.y();
            let generic = min_eig_parts(&out, &(omega(1) * -0.5));
            assert_abs_diff_eq!(scanner.margin(theta, lz), generic, epsilon = 1e-10);
        }
    }

    #[test]
    fn extension_layout() {
        let e = GaussianMap::identity(1).extend(1).unwrap();
        assert_eq!(e, GaussianMap::identity(2));
        let e = GaussianMap::attenuator(0.25).extend(1).unwrap();
        assert_eq!(e.x(), &diag(&[0.5, 0.5, 1.0, 1.0]));
        assert_eq!(e.y(), &diag(&[0.375, 0.375, 0.0, 0.0]));
        let m = GaussianMap::attenuator(0.25);
        assert_eq!(m.extend(1).unwrap().extend(1).unwrap(), m.extend(2).unwrap());
        assert!(m.extend(0).is_err());
    }

    #[test]
    fn falsifier_examples() {
        let grid = default_r_grid();
        for k in 1..=2 {
            let v = is_kpositive_falsifier(&GaussianMap::identity(1), k, &grid, 50, 1, 1e-9).unwrap();
            assert_eq!(v, KPositivity::NoViolationFound);
        }
        let v = is_kpositive_falsifier(&GaussianMap::transposition(), 1, &[1.0], 0, 1, 1e-9).unwrap();
        assert!(v.is_violated());
        let v = is_kpositive_falsifier(&GaussianMap::amplifier(2.0), 1, &grid, 200, 7, 1e-9).unwrap();
        assert_eq!(v, KPositivity::NoViolationFound);
    }

    #[test]
    fn tmsv_is_pure_and_valid() {
        for r in [0.0, 0.5, 1.0, 5.0] {
            let s = tmsv_embedded(2, 0, 1, r);
            let c = is_valid_covariance(&s, 1e-9).unwrap();
            assert!(c.valid);
            assert!(c.margin.abs() < 1e-9 * r.cosh());
        }
    }

    #[test]
    fn quantum_limit_gap_examples() {
        assert_abs_diff_eq!(
            GaussianMap::phase_insensitive(2f64.sqrt(), 0.5).quantum_limit_gap().unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_eq!(GaussianMap::identity(1).quantum_limit_gap().unwrap(), 0.0);
        assert_abs_diff_eq!(
            GaussianMap::phase_insensitive(2f64.sqrt(), 0.25).quantum_limit_gap().unwrap(),
            -0.25,
            epsilon = 1e-15
        );
        assert!(GaussianMap::transposition().quantum_limit_gap().is_err());
    }

    #[test]
    fn classify_map_examples() {
        let scan = PositivityScan::default();
        let budget = FalsifierBudget::default();
        let v = classify_map(&GaussianMap::attenuator(0.5), 1e-9, &scan, &budget).unwrap();
        assert_eq!(v.class, PositivityClass::Cp);
        let v = classify_map(&GaussianMap::transposition(), 1e-9, &scan, &budget).unwrap();
        assert_eq!(v.class, PositivityClass::PNotCp);
        let np = GaussianMap::new(Mat::identity(2, 2), Mat::identity(2, 2) * -0.25).unwrap();
        assert_eq!(classify_map(&np, 1e-9, &scan, &budget).unwrap().class, PositivityClass::Np);
        let v = classify_map(&GaussianMap::identity(2), 1e-9, &scan, &budget).unwrap();
        assert_eq!(v.class, PositivityClass::Cp);
        assert!(!v.exact);
    }
}
