//! Nelder–Mead downhill simplex minimizer.

/// Stopping rule and initial simplex size.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Converged once every vertex lies within this distance of the best.
    pub diameter_tol: f64,
    pub max_evaluations: usize,
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            diameter_tol: 1e-8,
            max_evaluations: 5000,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(best)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn towards(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimize `f` from `x0`. Non-finite objective values are treated as +∞.
/// The returned point is never worse than `x0`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let evaluations = std::cell::Cell::new(0usize);
    let mut eval = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    loop {
        // stable sort keeps the earlier vertex first on ties
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let converged = diameter(&simplex) < opts.diameter_tol;
        if converged || evaluations.get() >= opts.max_evaluations || dim == 0 {
            return SimplexResult {
                x: simplex.swap_remove(0),
                value: values[0],
                evaluations: evaluations.get(),
                converged: converged || dim == 0,
            };
        }

        let worst = dim;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..worst].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();

        let xr = towards(&centroid, &simplex[worst], -REFLECT);
        let fr = eval(&xr);
        if fr < values[0] {
            let xe = towards(&centroid, &simplex[worst], -EXPAND);
            let fe = eval(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[worst - 1] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        // contraction: outside if the reflection improved on the worst
        let (xc, fc) = if fr < values[worst] {
            let xc = towards(&centroid, &xr, CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = towards(&centroid, &simplex[worst], CONTRACT);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        for i in 1..=dim {
            simplex[i] = towards(&simplex[0], &simplex[i], SHRINK);
            values[i] = eval(&simplex[i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let r = minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + 0.5 * x[0] * x[1],
            &[0.0, 0.0],
            &SimplexOptions::default(),
        );
        assert!(r.converged);
        let grad = |x: &[f64]| [2.0 * (x[0] - 1.0) + 0.5 * x[1], 6.0 * (x[1] + 2.0) + 0.5 * x[0]];
        let g = grad(&r.x);
        assert!(g[0].abs() < 1e-6 && g[1].abs() < 1e-6, "{:?}", r);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &SimplexOptions::default(),
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5, "{:?}", r);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &SimplexOptions {
                max_evaluations: 20,
                ..SimplexOptions::default()
            },
        );
        assert!(!r.converged);
        assert!(r.value <= 24.2);
    }

    #[test]
    fn never_worse_than_start_and_tolerates_nan() {
        let f = |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { (x[0] - 0.3).powi(2) };
        let r = minimize(f, &[0.0], &SimplexOptions::default());
        assert!(r.value <= 0.09);
        assert!((r.x[0] - 0.3).abs() < 1e-6);
    }
}
