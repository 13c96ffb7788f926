//! Divisibility hierarchy of Gaussian continuous-variable processes.
//!
//! A Gaussian map acts on displacement and covariance as `D -> X D`,
//! `sigma -> X sigma X^T + Y`. This crate decides whether such maps are
//! completely positive, positive but not completely positive, or not
//! positive, and lifts that test to time-dependent processes through their
//! intermediate maps. One-mode processes are reduced to local rates
//! `(eps, mu)` and classified as Markovian, weakly non-Markovian or strongly
//! non-Markovian.
//!
//! Module map:
//!
//! * [`symplectic`]: symplectic forms, covariance validity, Hermitian
//!   minimum eigenvalues, Euler decomposition, random symplectic sampling.
//! * [`channel`]: Gaussian maps and the CP / P / k-positivity battery.
//! * [`divisibility`]: processes, intermediate maps, local rates, region
//!   labels and the three-class verdict.
//! * [`models`]: phase-insensitive synthesis from rate profiles, damping,
//!   quantum Brownian motion, physicality and amplification diagnostics.
//! * [`oracle`]: brute-force witnesses and random generators used by tests.
//! * [`io`]: JSON channel/process schemas and report serialization.

pub mod channel;
pub mod divisibility;
mod error;
pub mod io;
pub mod models;
pub mod oracle;
pub mod quadrature;
pub mod spline;
pub mod symplectic;

pub use channel::{GaussianMap, PositivityClass, PositivityScan, PositivityVerdict};
pub use divisibility::{
    ClassifyOptions, DivisibilityReport, GaussianProcess, LocalRates, ProcessClass, Region,
};
pub use error::{Error, Result};
pub use models::{QbmParams, RateProfile};
pub use symplectic::{GaussianState, SymplecticForm};

/// Dense real matrix used throughout.
pub type Mat = nalgebra::DMatrix<f64>;
/// Dense real vector used throughout.
pub type Vector = nalgebra::DVector<f64>;

/// Default absolute tolerance on eigenvalues of order-one matrices.
pub const DEFAULT_TOL: f64 = 1e-9;
