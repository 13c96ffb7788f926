//! Brute-force verifiers and seeded generators for the test suites.

use rand::Rng;
use serde::Serialize;

use crate::channel::{is_kpositive_falsifier, stream_rng, GaussianMap, KPositivity};
use crate::models::{RateProfile, RateSegment};
use crate::symplectic::omega;
use crate::{Mat, Result};

/// Two-mode squeezed vacuum shared between a system mode and an ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessState {
    pub r: f64,
    pub system: usize,
    pub ancilla: usize,
    pub covariance: Mat,
}

/// Two-mode squeezed vacuum with squeezing `r`: diagonal blocks
/// `(1/2) cosh r 1`, off-diagonal block `(1/2) sinh r diag(1, -1)`.
pub fn tmsv_witness(r: f64) -> WitnessState {
    assert!(r >= 0.0, "squeezing must be non-negative");
    WitnessState { r, system: 0, ancilla: 1, covariance: crate::channel::tmsv_embedded(2, 0, 1, r) }
}

/// Random `n`-mode Gaussian map. The noise term `Y = u A^T A - v 1` is drawn so
/// that a large sample covers CP, P-not-CP and NP maps.
pub fn random_gaussian_map(n: usize, spread: f64, seed: u64) -> GaussianMap {
    assert!(spread > 0.0, "spread must be positive");
    let mut rng = stream_rng(seed, 0);
    let dim = 2 * n;
    let x = Mat::from_fn(dim, dim, |_, _| rng.random_range(-spread..=spread));
    let a = Mat::from_fn(dim, dim, |_, _| rng.random_range(-1.0..=1.0));
    // calibrated on 500 seeds at spread 2: roughly 40/15/45 % CP/P-not-CP/NP
    let u = rng.random_range(0.0..=2.0 * spread * spread);
    let v = rng.random_range(0.0..=0.15 * spread);
    let mut y = a.transpose() * &a * u - Mat::identity(dim, dim) * v;
    // exact symmetry
    for i in 0..dim {
        for j in 0..i {
            y[(i, j)] = y[(j, i)];
        }
    }
    GaussianMap::new(x, y).expect("generated map is well formed")
}

/// Outcome of the CP / 1-positivity equivalence check on one map.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Theorem1Check {
    Consistent { cp: bool },
    Inconsistent { cp_margin: f64, k1_violated: bool, k2_violated: bool },
    /// Map lies inside the boundary band, where sampling cannot decide.
    Skipped { cp_margin: f64 },
}

impl Theorem1Check {
    pub fn is_inconsistent(&self) -> bool {
        matches!(self, Theorem1Check::Inconsistent { .. })
    }
}

/// Half-width of the excluded band around `cp_margin = 0`.
pub const BOUNDARY_BAND: f64 = 1e-6;

/// Tolerance used when testing extended outputs for validity.
const FALSIFIER_TOL: f64 = 1e-10;

/// Checks that the complete-positivity test agrees with the 1-ancilla
/// falsifier, and that two ancillas never find a violation one missed.
pub fn verify_theorem1(map: &GaussianMap, r_grid: &[f64], samples: usize, seed: u64) -> Result<Theorem1Check> {
    let cp_margin = map.cp_margin();
    if cp_margin.abs() < BOUNDARY_BAND {
        // boundary maps that are CP to working precision must still survive
        let k1 = is_kpositive_falsifier(map, 1, r_grid, samples, seed, FALSIFIER_TOL)?.is_violated();
        return Ok(if cp_margin >= -crate::DEFAULT_TOL && !k1 {
            Theorem1Check::Consistent { cp: true }
        } else {
            Theorem1Check::Skipped { cp_margin }
        });
    }
    let cp = cp_margin >= 0.0;
    let k1 = is_kpositive_falsifier(map, 1, r_grid, samples, seed, FALSIFIER_TOL)?.is_violated();
    let k2 = if k1 {
        true
    } else {
        is_kpositive_falsifier(map, 2, r_grid, samples, seed, FALSIFIER_TOL)?.is_violated()
    };
    if cp == !k1 && (k1 || !k2) {
        Ok(Theorem1Check::Consistent { cp })
    } else {
        Ok(Theorem1Check::Inconsistent { cp_margin, k1_violated: k1, k2_violated: k2 })
    }
}

/// Whether the TMSV sweep alone (no random states) exposes a non-CP map.
pub fn tmsv_sweep_detects(map: &GaussianMap, r_grid: &[f64]) -> Result<bool> {
    Ok(matches!(
        is_kpositive_falsifier(map, 1, r_grid, 0, 0, FALSIFIER_TOL)?,
        KPositivity::Violated { .. }
    ))
}

/// Brute-force complete-positivity margin: smallest eigenvalue of
/// `Y - (i/2) Omega + (i/2) X Omega X^T` through the real `4n x 4n` embedding.
pub fn cp_margin_realified(map: &GaussianMap) -> f64 {
    let n = map.modes();
    let om = omega(n);
    let im = (map.x() * &om * map.x().transpose() - &om) * 0.5;
    let dim = 2 * n;
    let mut big = Mat::zeros(2 * dim, 2 * dim);
    big.view_mut((0, 0), (dim, dim)).copy_from(map.y());
    big.view_mut((dim, dim), (dim, dim)).copy_from(map.y());
    big.view_mut((0, dim), (dim, dim)).copy_from(&(-&im));
    big.view_mut((dim, 0), (dim, dim)).copy_from(&im);
    big.symmetric_eigenvalues().min()
}

/// Random piecewise-constant profile with `segments` equal pieces on
/// `[0, horizon]`, `eps` in `[-1, 1]` and `mu` in `[-0.5, 1.5]`.
pub fn random_piecewise_profile(segments: usize, horizon: f64, seed: u64) -> Result<RateProfile> {
    let mut rng = stream_rng(seed, 1);
    let width = horizon / segments as f64;
    let segs = (0..segments)
        .map(|i| RateSegment {
            t0: i as f64 * width,
            t1: if i + 1 == segments { horizon } else { (i + 1) as f64 * width },
            eps: rng.random_range(-1.0..=1.0),
            mu: rng.random_range(-0.5..=1.5),
        })
        .collect();
    RateProfile::piecewise(segs)
}

/// Random profile whose first segment lies outside the CP region
/// (`mu_0 < |eps_0|`); later segments are arbitrary.
pub fn random_outside_start_profile(segments: usize, horizon: f64, seed: u64) -> Result<RateProfile> {
    let base = random_piecewise_profile(segments, horizon, seed)?;
    let mut segs = base.segments().expect("piecewise").to_vec();
    let mut rng = stream_rng(seed, 2);
    let eps: f64 = rng.random_range(0.05..=1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    segs[0].eps = eps;
    segs[0].mu = eps.abs() * rng.random_range(-1.0..0.95);
    RateProfile::piecewise(segs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::default_r_grid;
    use crate::symplectic::{is_valid_covariance, symplectic_eigenvalues};

    #[test]
    fn tmsv_witness_examples() {
        assert_eq!(tmsv_witness(0.0).covariance, Mat::identity(4, 4) * 0.5);
        for &r in &[0.3, 1.0, 4.0] {
            let w = tmsv_witness(r);
            for nu in symplectic_eigenvalues(&w.covariance).unwrap() {
                assert!((nu - 0.5).abs() < 1e-9 * r.cosh());
            }
        }
        let c = is_valid_covariance(&tmsv_witness(1.0).covariance, 1e-9).unwrap();
        assert!(c.valid && c.margin.abs() < 1e-9);
    }

    #[test]
    fn random_maps_are_deterministic() {
        let a = random_gaussian_map(1, 2.0, 17);
        let b = random_gaussian_map(1, 2.0, 17);
        assert_eq!(a, b);
        assert_eq!(a.y()[(0, 1)], a.y()[(1, 0)]);
    }

    #[test]
    fn theorem1_examples() {
        let grid = default_r_grid();
        let t = verify_theorem1(&GaussianMap::transposition(), &grid, 50, 0).unwrap();
        assert_eq!(t, Theorem1Check::Consistent { cp: false });
        assert!(tmsv_sweep_detects(&GaussianMap::transposition(), &[1.0]).unwrap());
        let g: f64 = 2.0;
        let amp = GaussianMap::phase_insensitive(g.sqrt(), 0.5 + 1e-3);
        assert_eq!(verify_theorem1(&amp, &grid, 50, 0).unwrap(), Theorem1Check::Consistent { cp: true });
        let id = GaussianMap::identity(1);
        assert_eq!(verify_theorem1(&id, &grid, 50, 0).unwrap(), Theorem1Check::Consistent { cp: true });
        let noisy = GaussianMap::phase_insensitive(1.0, 0.1);
        assert_eq!(verify_theorem1(&noisy, &grid, 50, 0).unwrap(), Theorem1Check::Consistent { cp: true });
    }

    #[test]
    fn realified_margin_matches() {
        for seed in 0..20 {
            let m = random_gaussian_map(1, 2.0, seed);
            assert!((m.cp_margin() - cp_margin_realified(&m)).abs() < 1e-10 * (1.0 + m.cp_margin().abs()));
        }
    }

    #[test]
    fn outside_start_profiles() {
        for seed in 0..10 {
            let p = random_outside_start_profile(4, 2.0, seed).unwrap();
            let (e, m) = (p.eps(0.0).unwrap(), p.mu(0.0).unwrap());
            assert!(m < e.abs());
        }
    }
}
