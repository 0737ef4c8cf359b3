//! Durand–Kerner simultaneous iteration for monic complex polynomials.

use num_complex::Complex64;

use crate::error::{HexaError, Result};

const MAX_ITERATIONS: usize = 500;
const UPDATE_TOL: f64 = 1e-13;
const RESIDUAL_REL: f64 = 1e-9;
/// Offset keeping the starting points away from roots of unity.
const START_ANGLE: f64 = 0.4;

/// Evaluates `z^m + c[0] z^(m-1) + ... + c[m-1]` by Horner's rule.
pub fn eval_monic(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
}

/// All `m` roots of the monic polynomial with lower coefficients `coeffs`.
///
/// Accepts the result when `|p(root)| <= 1e-9 max|coeff|` for every root.
pub fn monic_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = coeffs.len();
    if m == 0 {
        return Err(HexaError::Invalid("root finding needs degree >= 1".into()));
    }
    if let Some(bad) = coeffs.iter().find(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(HexaError::Invalid(format!("non-finite coefficient {bad}")));
    }
    if m == 1 {
        return Ok(vec![-coeffs[0]]);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / m as f64 + START_ANGLE))
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut max_update = 0.0f64;
        for j in 0..m {
            let denom = (0..m)
                .filter(|&i| i != j)
                .fold(Complex64::new(1.0, 0.0), |acc, i| acc * (z[j] - z[i]));
            if denom.norm() == 0.0 {
                // coincident iterates; nudge apart
                z[j] += Complex64::new(1e-8 * radius, 1e-8 * radius);
                max_update = f64::INFINITY;
                continue;
            }
            let step = eval_monic(coeffs, z[j]) / denom;
            z[j] -= step;
            max_update = max_update.max(step.norm() / (1.0 + z[j].norm()));
        }
        if max_update < UPDATE_TOL {
            break;
        }
    }

    let worst = z
        .iter()
        .map(|&r| eval_monic(coeffs, r).norm())
        .fold(0.0, f64::max);
    if worst.is_finite() && worst <= RESIDUAL_REL * scale {
        Ok(z)
    } else {
        Err(HexaError::NonConvergence { worst_residual: worst })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn square_roots_of_one() {
        let r = sorted_re(monic_roots(&[c(0.0, 0.0), c(-1.0, 0.0)]).unwrap());
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn plus_minus_i() {
        let mut r = monic_roots(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-13);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn linear_and_empty() {
        assert_eq!(monic_roots(&[c(2.0, -1.0)]).unwrap(), vec![c(-2.0, 1.0)]);
        assert!(monic_roots(&[]).is_err());
    }

    #[test]
    fn double_root() {
        // (z - 2)^2
        let r = monic_roots(&[c(-4.0, 0.0), c(4.0, 0.0)]).unwrap();
        for z in r {
            assert!((z - c(2.0, 0.0)).norm() < 1e-6);
        }
    }
}
