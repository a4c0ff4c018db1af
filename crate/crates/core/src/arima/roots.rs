//! Lag-polynomial roots and reflection into the stationary / invertible
//! region.
//!
//! A lag polynomial `1 + c₁z + … + c_m zᵐ` is stationary (invertible) when
//! all its roots lie outside the unit circle. Reflecting each offending root
//! `r ↦ 1/r̄` and rebuilding the polynomial leaves the autocorrelation
//! structure unchanged up to scale, so the optimizer can roam freely.

use num_complex::Complex64;

/// Roots on or inside this radius are pushed out to it.
const MIN_MODULUS: f64 = 1.0 + 1e-7;
const DK_MAX_ITER: usize = 1000;
const DK_TOL: f64 = 1e-14;

/// Roots of `1 + c₁z + … + c_m zᵐ` with trailing zero coefficients dropped.
pub fn lag_poly_roots(c: &[f64]) -> Vec<Complex64> {
    let degree = c.iter().rposition(|v| *v != 0.0).map_or(0, |i| i + 1);
    if degree == 0 {
        return Vec::new();
    }
    // monic in z: zᵐ + a_{m−1} z^{m−1} + … + a₀ with a_i = coef_i / c_m
    let lead = c[degree - 1];
    let mut monic: Vec<f64> = std::iter::once(1.0)
        .chain(c[..degree - 1].iter().copied())
        .map(|v| v / lead)
        .collect();
    monic.push(1.0);
    durand_kerner(&monic)
}

/// All roots of the monic polynomial with ascending coefficients `a`
/// (`a.last() == 1`).
fn durand_kerner(a: &[f64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    if n == 1 {
        return vec![Complex64::new(-a[0], 0.0)];
    }
    let eval = |z: Complex64| a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(10.0)).collect();
    for _ in 0..DK_MAX_ITER {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < DK_TOL {
            break;
        }
    }
    z
}

/// `1 + c₁z + … + c_m zᵐ` from its roots `r_i`, as `∏ (1 − z/r_i)`.
fn from_roots(roots: &[Complex64], degree: usize) -> Vec<f64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let inv = -1.0 / r;
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, p) in poly.iter().enumerate() {
            next[i] += p;
            next[i + 1] += p * inv;
        }
        poly = next;
    }
    let mut out: Vec<f64> = poly[1..].iter().map(|c| c.re).collect();
    out.resize(degree, 0.0);
    out
}

/// Whether every root of `1 + c₁z + …` lies strictly outside the unit circle.
pub fn is_outside_unit_circle(c: &[f64]) -> bool {
    lag_poly_roots(c).iter().all(|r| r.norm() > 1.0)
}

/// Coefficients with every root at modulus ≤ 1 reflected (and nudged)
/// outside the unit circle. Already-admissible input is returned unchanged.
pub fn reflect_outside(c: &[f64]) -> Vec<f64> {
    let roots = lag_poly_roots(c);
    if roots.iter().all(|r| r.norm() >= MIN_MODULUS) {
        return c.to_vec();
    }
    let fixed: Vec<Complex64> = roots
        .iter()
        .map(|r| {
            let m = r.norm();
            if m >= MIN_MODULUS {
                *r
            } else if m < 1.0 / MIN_MODULUS {
                1.0 / r.conj()
            } else {
                // on or next to the circle: push straight out
                r / m * MIN_MODULUS
            }
        })
        .collect();
    from_roots(&fixed, c.len())
}
