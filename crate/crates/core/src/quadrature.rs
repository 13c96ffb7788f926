//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes (1, 3, 5) and the centre
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

/// Single fixed-order rule on `[a, b]`; returns `(kronrod, |kronrod - gauss|)`.
pub fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive integral of `f` over `[a, b]` (either orientation).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, opts).map(|v| -v);
    }
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if pieces.len() >= opts.max_intervals {
            return Err(Error::NumericalFailure(format!(
                "quadrature on [{a}, {b}] did not converge (error estimate {err:e})"
            )));
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, pv, pe) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval cannot be split further in floating point
            return Err(Error::NumericalFailure(format!(
                "quadrature interval collapsed near {lo} (error estimate {err:e})"
            )));
        }
        let (lv, le) = gk15(&f, lo, mid);
        let (rv, re) = gk15(&f, mid, hi);
        total += lv + rv - pv;
        err += le + re - pe;
        pieces.push((lo, mid, lv, le));
        pieces.push((mid, hi, rv, re));
    }
    // re-sum to drop the drift of the running updates
    Ok(pieces.iter().map(|p| p.2).sum())
}

/// [`integrate`] for integrands that can fail; the first integrand error is
/// returned in place of the quadrature result.
pub fn integrate_fallible(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    let failure = std::cell::RefCell::new(None);
    let value = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        opts,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => value,
    }
}
