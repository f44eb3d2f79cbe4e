//! Least-squares quadratic fit `y = a x^2 + b x + c` and its vertex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticModel<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    /// Residual sum of squares of the fit.
    pub rss: S,
    pub n_samples: usize,
}

impl<S: Scalar> QuadraticModel<S> {
    /// A model with given coefficients and no fit statistics.
    pub fn from_coefficients(a: S, b: S, c: S) -> Self {
        Self {
            a,
            b,
            c,
            rss: S::zero(),
            n_samples: 0,
        }
    }

    pub fn eval(&self, x: S) -> S {
        (self.a * x + self.b) * x + self.c
    }

    /// Coefficients of `k * y`; the vertex abscissa is unchanged.
    pub fn scaled(&self, k: S) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            rss: self.rss * k * k,
            n_samples: self.n_samples,
        }
    }
}

/// Ordinary least squares on the monomial basis `{x^2, x, 1}`. The 3x3
/// normal equations are solved by Gaussian elimination with partial
/// pivoting.
pub fn fit_quadratic<S: Scalar>(samples: &[(S, S)]) -> Result<QuadraticModel<S>> {
    let distinct = count_distinct(samples.iter().map(|s| s.0));
    if distinct < 3 {
        return Err(Error::RankDeficient(distinct));
    }
    // Gram matrix entries are power sums of x.
    let mut power = [S::zero(); 5];
    let mut moment = [S::zero(); 3];
    for &(x, y) in samples {
        let mut xp = S::one();
        for (k, slot) in power.iter_mut().enumerate() {
            *slot = *slot + xp;
            if k < 3 {
                moment[k] = moment[k] + xp * y;
            }
            xp = xp * x;
        }
    }
    // Unknowns ordered (c, b, a) so row i, column j holds sum x^(i+j).
    let mut m = [[S::zero(); 4]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().take(3).enumerate() {
            *cell = power[i + j];
        }
        row[3] = moment[i];
    }
    let [c, b, a] = solve3(m)?;
    let rss = samples.iter().fold(S::zero(), |acc, &(x, y)| {
        let r = y - ((a * x + b) * x + c);
        acc + r * r
    });
    Ok(QuadraticModel {
        a,
        b,
        c,
        rss,
        n_samples: samples.len(),
    })
}

fn count_distinct<S: Scalar>(xs: impl Iterator<Item = S>) -> usize {
    let mut xs: Vec<S> = xs.collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    xs.dedup_by(|a, b| a.approx_eq(*b));
    xs.len()
}

fn solve3<S: Scalar>(mut m: [[S; 4]; 3]) -> Result<[S; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if m[pivot][col].is_zero() {
            return Err(Error::RankDeficient(col));
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (cell, &p) in m[row].iter_mut().zip(&pivot_row).skip(col) {
                *cell = *cell - factor * p;
            }
        }
    }
    let mut out = [S::zero(); 3];
    for row in (0..3).rev() {
        let tail = (row + 1..3).fold(S::zero(), |acc, k| acc + m[row][k] * out[k]);
        out[row] = (m[row][3] - tail) / m[row][row];
    }
    Ok(out)
}

/// Turning point `(-b / 2a, f(-b / 2a))`.
pub fn vertex<S: Scalar>(model: &QuadraticModel<S>) -> Result<(S, S)> {
    if model.a.abs() <= S::tolerance() {
        return Err(Error::Degenerate);
    }
    let x = -model.b / (S::from_count(2) * model.a);
    Ok((x, model.eval(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn zero_data() {
        let m = fit_quadratic(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]).unwrap();
        assert_eq!((m.a, m.b, m.c, m.rss), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(m.n_samples, 3);
    }

    #[test]
    fn rank_deficiency() {
        assert_eq!(
            fit_quadratic(&[(1.0, 1.0), (1.0, 2.0), (2.0, 3.0), (2.0, 0.0)]),
            Err(Error::RankDeficient(2))
        );
        assert_eq!(fit_quadratic::<f64>(&[]), Err(Error::RankDeficient(0)));
    }

    #[test]
    fn noisy_line_has_positive_rss() {
        let s = [(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0)];
        let m = fit_quadratic(&s).unwrap();
        assert!(m.rss > 0.0);
        // Residuals of a least-squares fit are orthogonal to the constant.
        let sum: f64 = s.iter().map(|&(x, y)| y - m.eval(x)).sum();
        assert!(sum.abs() < 1e-12);
    }

    #[test]
    fn vertex_examples() {
        let (x, y) = vertex(&QuadraticModel::<f64>::from_coefficients(-0.1, 0.7, 3.0)).unwrap();
        assert!((x - 3.5).abs() < 1e-12 && (y - 4.225).abs() < 1e-12);
        let (x, y) = vertex(&QuadraticModel::<f64>::from_coefficients(-4.0, 28.0, 120.0)).unwrap();
        assert!((x - 3.5).abs() < 1e-12 && (y - 169.0).abs() < 1e-12);
        let (x, y) = vertex(&QuadraticModel::from_coefficients(-1.0, 0.0, 0.0)).unwrap();
        assert_eq!((x, y), (0.0, 0.0));
        assert_eq!(
            vertex(&QuadraticModel::from_coefficients(0.0, 1.0, 0.0)),
            Err(Error::Degenerate)
        );
    }

    #[test]
    fn exact_fit_over_rationals() {
        let r = Rational64::new;
        let samples: Vec<_> = (0..=10)
            .map(|k| {
                let x = r(k, 1);
                (x, r(-1, 10) * x * x + r(7, 10) * x + r(3, 1))
            })
            .collect();
        let m = fit_quadratic(&samples).unwrap();
        assert_eq!((m.a, m.b, m.c), (r(-1, 10), r(7, 10), r(3, 1)));
        assert_eq!(m.rss, r(0, 1));
        assert_eq!(vertex(&m).unwrap(), (r(7, 2), r(169, 40)));
    }
}
