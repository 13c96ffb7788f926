//! Symplectic linear algebra on small dense matrices.
//!
//! Quadratures are ordered mode by mode, `(q1, p1, q2, p2, ...)`, with
//! vacuum variance `1/2`. Hermitian eigenproblems are solved by realifying
//! `M = A + iB` into the real symmetric `[[A, -B], [B, A]]`, whose spectrum is
//! the spectrum of `M` with every eigenvalue doubled.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Mat, Result, Vector};

pub type CMat = DMatrix<Complex<f64>>;

/// The `n`-mode symplectic form `Omega_n = [[0, 1], [-1, 0]]^{(+) n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: Mat,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("mode count must be at least 1"));
        }
        Ok(Self { n, matrix: omega(n) })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat {
        self.matrix
    }
}

/// Returns `Omega_n` as a `2n x 2n` matrix.
pub fn symplectic_form(n: usize) -> Result<Mat> {
    SymplecticForm::new(n).map(SymplecticForm::into_matrix)
}

/// Infallible variant for internal callers that already know `n >= 1`.
pub(crate) fn omega(n: usize) -> Mat {
    let mut m = Mat::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

pub(crate) fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub(crate) fn is_symmetric(m: &Mat, rel_tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (m[(i, j)] - m[(j, i)]).abs() > rel_tol * scale {
                return false;
            }
        }
    }
    true
}

/// `[[A, -B], [B, A]]` for `M = A + iB`.
pub(crate) fn realify(re: &Mat, im: &Mat) -> Mat {
    let d = re.nrows();
    let mut out = Mat::zeros(2 * d, 2 * d);
    out.view_mut((0, 0), (d, d)).copy_from(re);
    out.view_mut((d, d), (d, d)).copy_from(re);
    out.view_mut((0, d), (d, d)).copy_from(&(-im));
    out.view_mut((d, 0), (d, d)).copy_from(im);
    // symmetrize away rounding so the symmetric solver sees exact symmetry
    let t = out.transpose();
    (out + t) * 0.5
}

/// Smallest eigenvalue of the Hermitian `re + i im`. No validation.
pub(crate) fn min_eig_parts(re: &Mat, im: &Mat) -> f64 {
    SymmetricEigen::new(realify(re, im)).eigenvalues.min()
}

/// All eigenvalues of the Hermitian `re + i im`, ascending, with the
/// realification doubling removed.
pub(crate) fn eigenvalues_parts(re: &Mat, im: &Mat) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(realify(re, im)).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

fn split(m: &CMat) -> (Mat, Mat) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

fn check_hermitian(m: &CMat) -> Result<()> {
    if !m.is_square() {
        return Err(Error::invalid("matrix must be square"));
    }
    let scale = m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    let n = m.nrows();
    for i in 0..n {
        for j in i..n {
            let diff = (m[(i, j)] - m[(j, i)].conj()).norm();
            if diff > 1e-10 * scale {
                return Err(Error::invalid(format!(
                    "matrix is not Hermitian (entry ({i}, {j}) off by {diff:e})"
                )));
            }
        }
    }
    Ok(())
}

/// Smallest eigenvalue of a complex Hermitian matrix.
pub fn hermitian_min_eig(m: &CMat) -> Result<f64> {
    check_hermitian(m)?;
    let (re, im) = split(m);
    Ok(min_eig_parts(&re, &im))
}

/// Full ascending spectrum of a complex Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let (re, im) = split(m);
    Ok(eigenvalues_parts(&re, &im))
}

/// Outcome of a positive-semidefiniteness test: the boolean verdict and the
/// minimum eigenvalue it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceCheck {
    pub valid: bool,
    pub margin: f64,
}

fn mode_count(m: &Mat) -> Result<usize> {
    if !m.is_square() || m.nrows() == 0 || m.nrows() % 2 != 0 {
        return Err(Error::invalid(format!(
            "expected a non-empty 2n x 2n matrix, got {} x {}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows() / 2)
}

/// Robertson-Schroedinger test `sigma - (i/2) Omega >= -tol`.
pub fn is_valid_covariance(sigma: &Mat, tol: f64) -> Result<CovarianceCheck> {
    let n = mode_count(sigma)?;
    if !is_symmetric(sigma, 1e-10) {
        return Err(Error::invalid("covariance matrix is not symmetric"));
    }
    let margin = min_eig_parts(sigma, &(omega(n) * -0.5));
    Ok(CovarianceCheck { valid: margin >= -tol, margin })
}

/// Symplectic spectrum `{nu_j}`: moduli of the eigenvalues of `i Omega sigma`,
/// one per mode, ascending.
pub fn symplectic_eigenvalues(sigma: &Mat) -> Result<Vec<f64>> {
    let n = mode_count(sigma)?;
    if !is_symmetric(sigma, 1e-10) {
        return Err(Error::invalid("covariance matrix is not symmetric"));
    }
    let eig = SymmetricEigen::new(sigma.clone());
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    if eig.eigenvalues.min() <= 1e-14 * scale {
        return Err(Error::invalid("covariance matrix is not positive definite"));
    }
    // i Omega sigma is similar to the Hermitian i sigma^{1/2} Omega sigma^{1/2}
    let sqrt_diag = eig.eigenvalues.map(f64::sqrt);
    let root = &eig.eigenvectors * Mat::from_diagonal(&sqrt_diag) * eig.eigenvectors.transpose();
    let antisym = &root * omega(n) * &root;
    let zero = Mat::zeros(2 * n, 2 * n);
    let spectrum = eigenvalues_parts(&zero, &antisym);
    let mut moduli: Vec<f64> = spectrum.iter().map(|v| v.abs()).collect();
    moduli.sort_by(f64::total_cmp);
    Ok(moduli.into_iter().step_by(2).collect())
}

/// `true` iff `max |S Omega S^T - Omega| <= tol`.
pub fn is_symplectic(s: &Mat, tol: f64) -> bool {
    let Ok(n) = mode_count(s) else {
        return false;
    };
    let w = omega(n);
    max_abs(&(s * &w * s.transpose() - &w)) <= tol
}

/// Euler (Bloch-Messiah) factors of a one-mode symplectic matrix:
/// `S = O1 diag(z, 1/z) O2` with rotations `O1`, `O2` and `z in (0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactors {
    pub o1: Mat,
    pub o2: Mat,
    pub z: f64,
}

impl EulerFactors {
    pub fn squeezer(&self) -> Mat {
        Mat::from_diagonal(&Vector::from_vec(vec![self.z, 1.0 / self.z]))
    }

    pub fn reconstruct(&self) -> Mat {
        &self.o1 * self.squeezer() * &self.o2
    }
}

pub(crate) fn rotation(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}

pub fn euler_decompose(s: &Mat) -> Result<EulerFactors> {
    if s.nrows() != 2 || s.ncols() != 2 {
        return Err(Error::invalid("euler_decompose expects a 2 x 2 matrix"));
    }
    if !is_symplectic(s, 1e-9 * max_abs(s).max(1.0)) {
        return Err(Error::invalid("matrix is not symplectic"));
    }
    let svd = s.clone().svd(true, true);
    let mut u = svd.u.expect("requested U");
    let mut v_t = svd.v_t.expect("requested V^T");
    let (s_max, s_min) = (svd.singular_values[0], svd.singular_values[1]);
    if s_max - s_min <= 1e-14 * s_max {
        // orthogonal input; O2 = 1 by convention
        return Ok(EulerFactors {
            o1: &u * &v_t,
            o2: Mat::identity(2, 2),
            z: 1.0,
        });
    }
    if u.determinant() < 0.0 {
        // det U = det V since det S = 1; flipping the second column of U and
        // the second row of V^T leaves U Sigma V^T unchanged
        u.column_mut(1).neg_mut();
        v_t.row_mut(1).neg_mut();
    }
    // diag(s_max, s_min) = R diag(z, 1/z) R^T with R the quarter turn
    let quarter = rotation(std::f64::consts::FRAC_PI_2);
    let z = 1.0 / s_max;
    Ok(EulerFactors {
        o1: &u * &quarter,
        o2: quarter.transpose() * &v_t,
        z,
    })
}

fn mode_rotation(n: usize, mode: usize, phi: f64) -> Mat {
    let mut m = Mat::identity(2 * n, 2 * n);
    m.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(&rotation(phi));
    m
}

fn beam_splitter(n: usize, j: usize, k: usize, theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    let mut m = Mat::identity(2 * n, 2 * n);
    for quad in 0..2 {
        let (a, b) = (2 * j + quad, 2 * k + quad);
        m[(a, a)] = c;
        m[(a, b)] = s;
        m[(b, a)] = -s;
        m[(b, b)] = c;
    }
    m
}

fn random_orthosymplectic(n: usize, rng: &mut impl Rng) -> Mat {
    let tau = std::f64::consts::TAU;
    let mut o = Mat::identity(2 * n, 2 * n);
    for _ in 0..n.max(1) {
        for mode in 0..n {
            o = mode_rotation(n, mode, rng.random_range(0.0..tau)) * o;
        }
        for j in 0..n {
            for k in (j + 1)..n {
                o = beam_splitter(n, j, k, rng.random_range(0.0..tau)) * o;
            }
        }
    }
    o
}

/// Random symplectic `O1 Z O0` built from phase shifters, beam splitters and
/// single-mode squeezers with squeezing uniform in `[0, r_max]`.
/// Deterministic in `seed`.
pub fn random_symplectic(n: usize, r_max: f64, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symplectic_with(n, r_max, &mut rng)
}

pub(crate) fn random_symplectic_with(n: usize, r_max: f64, rng: &mut impl Rng) -> Mat {
    let inner = random_orthosymplectic(n, rng);
    let mut diag = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let r = if r_max > 0.0 { rng.random_range(0.0..=r_max) } else { 0.0 };
        diag.push((-r).exp());
        diag.push(r.exp());
    }
    let outer = random_orthosymplectic(n, rng);
    outer * Mat::from_diagonal(&Vector::from_vec(diag)) * inner
}

/// Gaussian state: displacement and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    displacement: Vector,
    covariance: Mat,
}

impl GaussianState {
    /// Validated constructor: `sigma` must be symmetric and satisfy the
    /// uncertainty relation within `tol`.
    pub fn new(displacement: Vector, covariance: Mat, tol: f64) -> Result<Self> {
        let n = mode_count(&covariance)?;
        if displacement.len() != 2 * n {
            return Err(Error::invalid("displacement length does not match covariance"));
        }
        let check = is_valid_covariance(&covariance, tol)?;
        if !check.valid {
            return Err(Error::invalid(format!(
                "covariance violates the uncertainty relation (margin {:e})",
                check.margin
            )));
        }
        Ok(Self { displacement, covariance })
    }

    /// Constructor without physicality checks, used for outputs of maps that
    /// are not guaranteed to be positive.
    pub fn from_parts_unchecked(displacement: Vector, covariance: Mat) -> Self {
        Self { displacement, covariance }
    }

    pub fn vacuum(n: usize) -> Self {
        Self::thermal(n, 0.5)
    }

    pub fn thermal(n: usize, nu: f64) -> Self {
        Self {
            displacement: Vector::zeros(2 * n),
            covariance: Mat::identity(2 * n, 2 * n) * nu,
        }
    }

    /// Pure state `(1/2) S S^T`.
    pub fn pure(s: &Mat) -> Self {
        Self {
            displacement: Vector::zeros(s.nrows()),
            covariance: s * s.transpose() * 0.5,
        }
    }

    pub fn modes(&self) -> usize {
        self.covariance.nrows() / 2
    }

    pub fn displacement(&self) -> &Vector {
        &self.displacement
    }

    pub fn covariance(&self) -> &Mat {
        &self.covariance
    }

    pub fn is_physical(&self, tol: f64) -> Result<CovarianceCheck> {
        is_valid_covariance(&self.covariance, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn minus_half_i_omega() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.0, 0.0)])
    }

    #[test]
    fn form_blocks() {
        assert_eq!(symplectic_form(1).unwrap(), Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let w2 = symplectic_form(2).unwrap();
        assert_eq!(w2.view((0, 0), (2, 2)), symplectic_form(1).unwrap());
        assert_eq!(w2.view((2, 2), (2, 2)), symplectic_form(1).unwrap());
        assert_eq!(w2.view((0, 2), (2, 2)), Mat::zeros(2, 2));
        for n in 1..=4 {
            let w = symplectic_form(n).unwrap();
            assert_eq!(&w * &w, -Mat::identity(2 * n, 2 * n));
            assert_eq!(w.transpose() * &w, Mat::identity(2 * n, 2 * n));
        }
        assert!(matches!(symplectic_form(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn min_eig_examples() {
        assert_abs_diff_eq!(hermitian_min_eig(&CMat::identity(2, 2)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hermitian_min_eig(&minus_half_i_omega()).unwrap(), -0.5, epsilon = 1e-14);
        let m = CMat::identity(2, 2) * c(0.4, 0.0) + minus_half_i_omega();
        assert_abs_diff_eq!(hermitian_min_eig(&m).unwrap(), -0.1, epsilon = 1e-14);
    }

    #[test]
    fn min_eig_rejects_non_hermitian() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!(matches!(hermitian_min_eig(&m), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn covariance_validity() {
        let vac = is_valid_covariance(&(Mat::identity(2, 2) * 0.5), 1e-9).unwrap();
        assert!(vac.valid);
        assert_abs_diff_eq!(vac.margin, 0.0, epsilon = 1e-14);
        let thermal = is_valid_covariance(&Mat::identity(2, 2), 1e-9).unwrap();
        assert!(thermal.valid);
        assert_abs_diff_eq!(thermal.margin, 0.5, epsilon = 1e-14);
        let bad = is_valid_covariance(&(Mat::identity(2, 2) * 0.4), 1e-9).unwrap();
        assert!(!bad.valid);
        assert_abs_diff_eq!(bad.margin, -0.1, epsilon = 1e-14);
        let asym = Mat::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 1.0]);
        assert!(is_valid_covariance(&asym, 1e-9).is_err());
    }

    #[test]
    fn symplectic_spectra() {
        let nu = symplectic_eigenvalues(&(Mat::identity(2, 2) * 0.5)).unwrap();
        assert_abs_diff_eq!(nu[0], 0.5, epsilon = 1e-14);
        let nu = symplectic_eigenvalues(&Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        assert_abs_diff_eq!(nu[0], 1.0, epsilon = 1e-12);
        let s = random_symplectic(2, 1.0, 3);
        let nu = symplectic_eigenvalues(&(&s * s.transpose() * 0.5)).unwrap();
        assert_eq!(nu.len(), 2);
        for v in nu {
            assert_abs_diff_eq!(v, 0.5, epsilon = 1e-10);
        }
        let thermal = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, 3.0, 3.0]));
        let nu = symplectic_eigenvalues(&thermal).unwrap();
        assert_abs_diff_eq!(nu[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nu[1], 3.0, epsilon = 1e-12);
        assert!(symplectic_eigenvalues(&Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).is_err());
    }

    #[test]
    fn symplectic_membership() {
        assert!(is_symplectic(&Mat::identity(2, 2), 1e-12));
        assert!(is_symplectic(&Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]), 1e-12));
        assert!(!is_symplectic(&Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]), 1e-12));
        assert!(!is_symplectic(&Mat::identity(3, 3), 1e-12));
    }

    #[test]
    fn euler_of_diagonal_squeezer() {
        let s = Mat::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0]);
        let f = euler_decompose(&s).unwrap();
        assert_abs_diff_eq!(f.z, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(f.o1.determinant(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.o2.determinant(), 1.0, epsilon = 1e-12);
        assert!((f.reconstruct() - s).amax() < 1e-12);
    }

    #[test]
    fn euler_of_rotation() {
        let r = rotation(0.7);
        let f = euler_decompose(&r).unwrap();
        assert_eq!(f.z, 1.0);
        assert_eq!(f.o2, Mat::identity(2, 2));
        assert!((&f.o1 * &f.o2 - r).amax() < 1e-14);
    }

    #[test]
    fn euler_rejects_non_symplectic() {
        let s = Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(euler_decompose(&s).is_err());
    }

    #[test]
    fn random_symplectic_contract() {
        let a = random_symplectic(3, 1.5, 42);
        let b = random_symplectic(3, 1.5, 42);
        assert_eq!(a, b);
        assert!(is_symplectic(&a, 1e-9));
        let o = random_symplectic(1, 0.0, 5);
        assert!((o.transpose() * &o - Mat::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn state_constructor_checks_physics() {
        let bad = GaussianState::new(Vector::zeros(2), Mat::identity(2, 2) * 0.4, 1e-9);
        assert!(bad.is_err());
        let ok = GaussianState::new(Vector::zeros(2), Mat::identity(2, 2) * 0.5, 1e-9).unwrap();
        assert_eq!(ok, GaussianState::vacuum(1));
    }
}
