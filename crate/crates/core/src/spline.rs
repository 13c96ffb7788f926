//! Natural cubic splines for tabulated processes.

use crate::{Error, Result};

/// Natural cubic spline through `(t_i, v_i)` with strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    // second derivatives at the knots
    curvature: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n < 2 || values.len() != n {
            return Err(Error::invalid("spline needs at least two knots and matching values"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("spline knots must be strictly increasing"));
        }
        let mut curvature = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm for the interior second derivatives
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 0..m {
                let h0 = knots[i + 1] - knots[i];
                let h1 = knots[i + 2] - knots[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((values[i + 2] - values[i + 1]) / h1 - (values[i + 1] - values[i]) / h0);
            }
            for i in 1..m {
                let lower = knots[i + 1] - knots[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            curvature[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                curvature[i + 1] = (rhs[i] - upper[i] * curvature[i + 2]) / diag[i];
            }
        }
        Ok(Self { knots, values, curvature })
    }

    fn segment(&self, t: f64) -> usize {
        match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.knots.len() - 2),
        }
    }

    /// Value and first derivative at `t` (extrapolates the end cubics).
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let i = self.segment(t);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        let (c0, c1) = (self.curvature[i], self.curvature[i + 1]);
        let value = a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * c0 + (b * b * b - b) * c1) * h * h / 6.0;
        let slope = (self.values[i + 1] - self.values[i]) / h
            + ((1.0 - 3.0 * a * a) * c0 + (3.0 * b * b - 1.0) * c1) * h / 6.0;
        (value, slope)
    }
}
