//! Ordinary least squares via Householder QR, plus the nested-model F-test
//! used by Granger screening.
//!
//! The same engine backs the scenario regressions, the ADF test regression
//! and both Granger regressions, so fits are always computed the same way.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{f_sf, t_two_sided};

/// A diagonal entry of R below this fraction of the largest one marks the
/// design as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// F statistics are capped here when the unrestricted model fits exactly.
pub const F_STAT_CAP: f64 = 1e12;

/// Name given to the intercept column by [`DesignMatrix::with_intercept`].
pub const INTERCEPT: &str = "const";

/// Regressor matrix, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    n_rows: usize,
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl DesignMatrix {
    /// Build from named columns of equal length.
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::Arity {
                what: "design column names".into(),
                expected: columns.len(),
                got: names.len(),
            });
        }
        if columns.is_empty() {
            return Err(Error::InvalidArgument("design matrix has no columns".into()));
        }
        let n_rows = columns[0].len();
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(Error::Arity {
                    what: format!("length of design column '{name}'"),
                    expected: n_rows,
                    got: col.len(),
                });
            }
            if let Some(index) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        for j in 1..columns.len() {
            if columns[..j].iter().any(|c| c == &columns[j]) {
                return Err(Error::SingularDesign {
                    column: names[j].clone(),
                });
            }
        }
        Ok(Self {
            n_rows,
            columns,
            names,
        })
    }

    /// Build from rows; columns are named `x0, x1, …`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); k];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Arity {
                    what: format!("length of design row {i}"),
                    expected: k,
                    got: row.len(),
                });
            }
            for (col, v) in columns.iter_mut().zip(row) {
                col.push(*v);
            }
        }
        let names = (0..k).map(|j| format!("x{j}")).collect();
        Self::from_columns(names, columns)
    }

    /// Prepend a column of ones named [`INTERCEPT`].
    pub fn with_intercept(mut self) -> Result<Self> {
        let ones = vec![1.0; self.n_rows];
        self.columns.insert(0, ones);
        self.names.insert(0, INTERCEPT.to_string());
        Self::from_columns(self.names, self.columns)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// True when some column is a nonzero constant.
    pub fn has_intercept(&self) -> bool {
        self.columns
            .iter()
            .any(|c| c[0] != 0.0 && c.iter().all(|v| *v == c[0]))
    }

    /// X·β
    pub fn mul_vec(&self, beta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows];
        for (col, b) in self.columns.iter().zip(beta) {
            for (o, x) in out.iter_mut().zip(col) {
                *o += x * b;
            }
        }
        out
    }
}

/// Result of an OLS fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionFit {
    pub column_names: Vec<String>,
    pub beta: Vec<f64>,
    pub se_beta: Vec<f64>,
    pub residuals: Vec<f64>,
    /// SSR / (n − k)
    pub sigma2: f64,
    pub ssr: f64,
    pub r_squared: f64,
    pub n_obs: usize,
    pub n_params: usize,
    pub has_intercept: bool,
}

impl RegressionFit {
    pub fn t_stat(&self, j: usize) -> f64 {
        self.beta[j] / self.se_beta[j]
    }

    /// Two-sided p-value of the t-ratio on coefficient `j`.
    pub fn p_value(&self, j: usize) -> f64 {
        t_two_sided(self.t_stat(j), (self.n_obs - self.n_params) as f64)
    }

    /// Gaussian AIC up to an additive constant: n·ln(SSR/n) + 2k.
    pub fn aic(&self) -> f64 {
        let n = self.n_obs as f64;
        n * (self.ssr / n).ln() + 2.0 * self.n_params as f64
    }

    pub fn fitted(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.residuals).map(|(y, e)| y - e).collect()
    }
}

/// Least-squares fit of `y` on `x`.
///
/// Columns are equilibrated to unit norm, then factored with Householder QR.
/// A diagonal entry of R below [`RANK_TOLERANCE`] times the largest one is
/// reported as a singular design naming that column.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<RegressionFit> {
    let n = x.n_rows();
    let k = x.n_cols();
    if y.len() != n {
        return Err(Error::Arity {
            what: "response length".into(),
            expected: n,
            got: y.len(),
        });
    }
    if let Some(index) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if n <= k {
        return Err(Error::insufficient("least squares", k + 1, n));
    }

    let scales: Vec<f64> = x
        .columns
        .iter()
        .map(|c| {
            let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                norm
            } else {
                1.0
            }
        })
        .collect();
    let mut a: Vec<Vec<f64>> = x
        .columns
        .iter()
        .zip(&scales)
        .map(|(c, s)| c.iter().map(|v| v / s).collect())
        .collect();
    let mut qty = y.to_vec();
    let mut diag = vec![0.0; k];

    for j in 0..k {
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            diag[j] = 0.0;
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        // v = a[j][j..] - alpha e1, stored in place
        a[j][j] -= alpha;
        let vnorm2: f64 = a[j][j..].iter().map(|v| v * v).sum();
        if vnorm2 > 0.0 {
            for c in (j + 1)..k {
                let dot: f64 = (j..n).map(|i| a[j][i] * a[c][i]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in j..n {
                    a[c][i] -= f * a[j][i];
                }
            }
            let dot: f64 = (j..n).map(|i| a[j][i] * qty[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                qty[i] -= f * a[j][i];
            }
        }
        diag[j] = alpha;
    }

    let largest = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    for (j, d) in diag.iter().enumerate() {
        if d.abs() <= RANK_TOLERANCE * largest || largest == 0.0 {
            return Err(Error::SingularDesign {
                column: x.names[j].clone(),
            });
        }
    }

    // R above the diagonal lives in a[c][r] for r < c; the diagonal in `diag`.
    let r_at = |row: usize, col: usize| if row == col { diag[row] } else { a[col][row] };
    let mut beta_scaled = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qty[i];
        for c in (i + 1)..k {
            s -= r_at(i, c) * beta_scaled[c];
        }
        beta_scaled[i] = s / diag[i];
    }

    // R⁻¹, upper triangular; row norms give diag((XᵀX)⁻¹) in scaled units
    let mut rinv = vec![vec![0.0; k]; k];
    for c in 0..k {
        rinv[c][c] = 1.0 / diag[c];
        for r in (0..c).rev() {
            let mut s = 0.0;
            for m in (r + 1)..=c {
                s += r_at(r, m) * rinv[m][c];
            }
            rinv[r][c] = -s / diag[r];
        }
    }

    let beta: Vec<f64> = beta_scaled.iter().zip(&scales).map(|(b, s)| b / s).collect();
    let fitted = x.mul_vec(&beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = ssr / (n - k) as f64;
    let se_beta = (0..k)
        .map(|i| {
            let v: f64 = rinv[i][i..].iter().map(|v| v * v).sum();
            (sigma2 * v).sqrt() / scales[i]
        })
        .collect();

    let has_intercept = x.has_intercept();
    let sst = if has_intercept {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
    } else {
        y.iter().map(|v| v * v).sum::<f64>()
    };
    let r_squared = if sst > 0.0 {
        (1.0 - ssr / sst).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(RegressionFit {
        column_names: x.names.clone(),
        beta,
        se_beta,
        residuals,
        sigma2,
        ssr,
        r_squared,
        n_obs: n,
        n_params: k,
        has_intercept,
    })
}

/// Apply a fitted model to new regressor rows.
pub fn predict(fit: &RegressionFit, x_new: &DesignMatrix) -> Result<Vec<f64>> {
    if x_new.n_cols() != fit.n_params {
        return Err(Error::Arity {
            what: "prediction design columns".into(),
            expected: fit.n_params,
            got: x_new.n_cols(),
        });
    }
    Ok(x_new.mul_vec(&fit.beta))
}

/// Outcome of a nested-model F-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FTestResult {
    pub f_stat: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub p_value: f64,
}

/// F-test of a restricted model against the unrestricted model nesting it.
pub fn f_test_nested(restricted: &RegressionFit, unrestricted: &RegressionFit) -> Result<FTestResult> {
    if restricted.n_obs != unrestricted.n_obs {
        return Err(Error::Arity {
            what: "observations of nested models".into(),
            expected: unrestricted.n_obs,
            got: restricted.n_obs,
        });
    }
    if unrestricted.n_params <= restricted.n_params {
        return Err(Error::InvalidArgument(format!(
            "unrestricted model has {} parameters, restricted has {}",
            unrestricted.n_params, restricted.n_params
        )));
    }
    let q = unrestricted.n_params - restricted.n_params;
    let df_den = unrestricted.n_obs - unrestricted.n_params;
    f_from_ssr(restricted.ssr, unrestricted.ssr, q, df_den)
}

/// F statistic from the two residual sums of squares.
pub fn f_from_ssr(ssr_r: f64, ssr_u: f64, q: usize, df_den: usize) -> Result<FTestResult> {
    if q == 0 || df_den == 0 {
        return Err(Error::InvalidArgument(format!(
            "F-test degrees of freedom must be positive (got {q}, {df_den})"
        )));
    }
    // rounding can put SSR_r a hair below SSR_u for useless regressors
    let slack = 1e-12 * ssr_r.abs().max(ssr_u.abs());
    if ssr_r < ssr_u - slack {
        return Err(Error::InvalidNesting {
            ssr_restricted: ssr_r,
            ssr_unrestricted: ssr_u,
        });
    }
    let gain = (ssr_r - ssr_u).max(0.0);
    let f_stat = if gain <= slack {
        0.0
    } else if ssr_u <= 0.0 {
        F_STAT_CAP
    } else {
        ((gain / q as f64) / (ssr_u / df_den as f64)).min(F_STAT_CAP)
    };
    Ok(FTestResult {
        f_stat,
        df_num: q,
        df_den,
        p_value: f_sf(f_stat, q as f64, df_den as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rows(r: &[&[f64]]) -> DesignMatrix {
        DesignMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn exact_line() {
        let x = rows(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
        let fit = ols_fit(&x, &[2.0, 4.0, 6.0]).unwrap();
        assert!(fit.beta[0].abs() < 1e-12);
        assert!((fit.beta[1] - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.has_intercept);
    }

    #[test]
    fn intercept_only_fits_mean() {
        let x = rows(&[&[1.0], &[1.0], &[1.0]]);
        let fit = ols_fit(&x, &[3.0, 5.0, 7.0]).unwrap();
        assert!((fit.beta[0] - 5.0).abs() < 1e-12);
        for (e, want) in fit.residuals.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((e - want).abs() < 1e-12);
        }
        // se of a mean: sqrt(s²/n) with s² = 8/2
        assert!((fit.se_beta[0] - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn duplicated_column_is_singular() {
        let err = DesignMatrix::from_columns(
            vec!["const".into(), "a".into(), "b".into()],
            vec![vec![1.0; 4], vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 2.0, 3.0, 4.0]],
        )
        .unwrap_err();
        assert_eq!(err, Error::SingularDesign { column: "b".into() });
    }

    #[test]
    fn collinear_column_is_named() {
        let x = DesignMatrix::from_columns(
            vec!["const".into(), "a".into(), "twice_a_plus_1".into()],
            vec![
                vec![1.0; 5],
                vec![1.0, 2.0, 4.0, 8.0, 3.0],
                vec![3.0, 5.0, 9.0, 17.0, 7.0],
            ],
        )
        .unwrap();
        let err = ols_fit(&x, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap_err();
        assert_eq!(err, Error::SingularDesign { column: "twice_a_plus_1".into() });
    }

    #[test]
    fn predict_examples() {
        let fit = |beta: Vec<f64>| RegressionFit {
            column_names: vec![],
            n_params: beta.len(),
            se_beta: vec![0.0; beta.len()],
            beta,
            residuals: vec![],
            sigma2: 0.0,
            ssr: 0.0,
            r_squared: 1.0,
            n_obs: 0,
            has_intercept: true,
        };
        assert_eq!(predict(&fit(vec![0.0, 2.0]), &rows(&[&[1.0, 4.0]])).unwrap(), vec![8.0]);
        assert_eq!(
            predict(&fit(vec![5.0]), &rows(&[&[1.0], &[1.0]])).unwrap(),
            vec![5.0, 5.0]
        );
        // 1·1 − 1·2 + 0.5·4 = 1
        assert_eq!(
            predict(&fit(vec![1.0, -1.0, 0.5]), &rows(&[&[1.0, 2.0, 4.0]])).unwrap(),
            vec![1.0]
        );
        assert!(matches!(
            predict(&fit(vec![1.0, 2.0]), &rows(&[&[1.0]])),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn f_test_examples() {
        let r = f_from_ssr(10.0, 10.0, 2, 10).unwrap();
        assert_eq!(r.f_stat, 0.0);
        assert_eq!(r.p_value, 1.0);

        // [(20 − 10)/1] / [10/10] = 10
        let r = f_from_ssr(20.0, 10.0, 1, 10).unwrap();
        assert!((r.f_stat - 10.0).abs() < 1e-12);
        assert!((r.p_value - 1.011_955_973_543_371_8e-2).abs() < 1e-10);

        let r = f_from_ssr(5.0, 0.0, 1, 10).unwrap();
        assert_eq!(r.f_stat, F_STAT_CAP);
        assert!(r.p_value < 1e-12);

        assert!(matches!(
            f_from_ssr(5.0, 6.0, 1, 10),
            Err(Error::InvalidNesting { .. })
        ));
    }

    #[test]
    fn f_test_on_fits_with_perfect_extra_regressor() {
        let extra = [0.3, -1.2, 2.2, 0.1, -0.7, 1.9, 0.4, -2.0, 1.1, 0.0];
        let y: Vec<f64> = extra.iter().map(|v| 3.0 * v).collect();
        let r = ols_fit(&rows(&vec![&[1.0][..]; 10]), &y).unwrap();
        let cols = DesignMatrix::from_columns(
            vec!["const".into(), "x".into()],
            vec![vec![1.0; 10], extra.to_vec()],
        )
        .unwrap();
        let u = ols_fit(&cols, &y).unwrap();
        let f = f_test_nested(&r, &u).unwrap();
        assert!(f.f_stat > 1e10);
        assert!(f.p_value < 1e-12);
        assert!(matches!(f_test_nested(&u, &r), Err(Error::InvalidArgument(_))));
    }

    fn random_design(seed: u64, n: usize, k: usize) -> (DesignMatrix, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols = vec![vec![1.0; n]];
        for _ in 1..k {
            cols.push((0..n).map(|_| rng.random_range(-5.0..5.0)).collect());
        }
        let y = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
        let names = (0..k).map(|j| format!("c{j}")).collect();
        (DesignMatrix::from_columns(names, cols).unwrap(), y)
    }

    fn norm(v: &[f64]) -> f64 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    proptest! {
        #[test]
        fn residuals_orthogonal_to_design(seed in any::<u64>(), n in 8usize..40, k in 1usize..5) {
            let (x, y) = random_design(seed, n, k);
            let fit = ols_fit(&x, &y).unwrap();
            for j in 0..k {
                let dot: f64 = x.column(j).iter().zip(&fit.residuals).map(|(a, e)| a * e).sum();
                prop_assert!(dot.abs() <= 1e-8 * norm(&y));
            }
            let sum: f64 = fit.residuals.iter().sum();
            prop_assert!(sum.abs() <= 1e-8 * norm(&y));
            prop_assert!((0.0..=1.0).contains(&fit.r_squared));
        }

        #[test]
        fn scale_equivariance(seed in any::<u64>(), c in prop_oneof![-50.0f64..-0.1, 0.1f64..50.0]) {
            let (x, y) = random_design(seed, 20, 3);
            let fit = ols_fit(&x, &y).unwrap();
            let scaled: Vec<f64> = y.iter().map(|v| c * v).collect();
            let fit_c = ols_fit(&x, &scaled).unwrap();
            for (a, b) in fit.beta.iter().zip(&fit_c.beta) {
                prop_assert!((c * a - b).abs() <= 1e-9 * (1.0 + b.abs()));
            }
            for (a, b) in fit.residuals.iter().zip(&fit_c.residuals) {
                prop_assert!((c * a - b).abs() <= 1e-9 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn prediction_plus_residual_is_response(seed in any::<u64>()) {
            let (x, y) = random_design(seed, 15, 3);
            let fit = ols_fit(&x, &y).unwrap();
            let p = predict(&fit, &x).unwrap();
            for ((p, e), y) in p.iter().zip(&fit.residuals).zip(&y) {
                prop_assert!((p + e - y).abs() <= 1e-12 * (1.0 + y.abs()));
            }
        }

        #[test]
        fn noise_column_never_raises_ssr(seed in any::<u64>()) {
            let (x, y) = random_design(seed, 25, 3);
            let base = ols_fit(&x, &y).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let mut names = x.names().to_vec();
            names.push("noise".into());
            let mut cols: Vec<Vec<f64>> = (0..3).map(|j| x.column(j).to_vec()).collect();
            cols.push((0..25).map(|_| rng.random_range(-1.0..1.0)).collect());
            let bigger = ols_fit(&DesignMatrix::from_columns(names, cols).unwrap(), &y).unwrap();
            prop_assert!(bigger.ssr <= base.ssr * (1.0 + 1e-12));
            let f = f_test_nested(&base, &bigger).unwrap();
            prop_assert!((0.0..=1.0).contains(&f.p_value));
        }
    }
}
