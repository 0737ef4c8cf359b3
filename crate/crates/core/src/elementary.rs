//! Elementary functions and power series of a 6-complex variable.
//!
//! Every function acts on the canonical components: the real components
//! `v+`, `v-` go through the real function and each pair `v_k + i ~v_k` through
//! the complex one.

use num_complex::Complex64;

use crate::algebra::{HexaNumber, Variant, ZERO_DIVISOR_REL};
use crate::canonical::{self, Canonical};
use crate::error::{HexaError, Result};

fn componentwise(
    u: &HexaNumber,
    real: impl Fn(f64) -> f64,
    pair: impl Fn(Complex64) -> Complex64,
) -> HexaNumber {
    canonical::from_canonical(&canonical::to_canonical(u).map(real, pair))
}

pub fn exp(u: &HexaNumber) -> HexaNumber {
    componentwise(u, f64::exp, |z| z.exp())
}

pub fn cos(u: &HexaNumber) -> HexaNumber {
    componentwise(u, f64::cos, |z| z.cos())
}

pub fn sin(u: &HexaNumber) -> HexaNumber {
    componentwise(u, f64::sin, |z| z.sin())
}

pub fn cosh(u: &HexaNumber) -> HexaNumber {
    componentwise(u, f64::cosh, |z| z.cosh())
}

pub fn sinh(u: &HexaNumber) -> HexaNumber {
    componentwise(u, f64::sinh, |z| z.sinh())
}

/// Principal logarithm, `ln rho` plus the exponent of the exponential form.
///
/// Azimuths are taken in `[0, 2 pi)`, so `ln(exp(u)) = u` only when every
/// `~v_k` of `u` lies in that band.
pub fn ln(u: &HexaNumber) -> Result<HexaNumber> {
    let form = canonical::exp_form(u)?;
    Ok(form.exponent + HexaNumber::real(u.variant(), form.rho.ln()))
}

/// `u^m` for real `m`.
///
/// Integer exponents accept any `u` (negative ones need an invertible `u`);
/// other exponents need the domain of [`ln`].
pub fn pow_real(u: &HexaNumber, m: f64) -> Result<HexaNumber> {
    if !m.is_finite() {
        return Err(HexaError::Domain(format!("exponent {m} is not finite")));
    }
    let c = canonical::to_canonical(u);
    let tol = ZERO_DIVISOR_REL * u.modulus();
    let integer = m.fract() == 0.0 && m.abs() <= i32::MAX as f64;
    if integer {
        let n = m as i32;
        if n == 0 {
            return Ok(HexaNumber::one(u.variant()));
        }
        if n < 0 {
            if let Some(component) = c.vanishing_component(tol) {
                return Err(HexaError::ZeroDivisor { component });
            }
        }
        let powered = c.map(|v| v.powi(n), |z| polar_pow(z, m));
        return Ok(canonical::from_canonical(&powered));
    }
    if let Some(component) = c.vanishing_component(tol) {
        return Err(HexaError::Domain(format!(
            "non-integer power needs canonical component {component} to be nonzero"
        )));
    }
    let powered = c.try_map(
        |component, v| {
            if v > 0.0 {
                Ok(v.powf(m))
            } else {
                Err(HexaError::Domain(format!(
                    "non-integer power needs {component} > 0 (got {v})"
                )))
            }
        },
        |_, z| Ok(polar_pow(z, m)),
    )?;
    Ok(canonical::from_canonical(&powered))
}

/// `rho^m (cos m phi + i sin m phi)` with `phi` in `[0, 2 pi)`.
fn polar_pow(z: Complex64, m: f64) -> Complex64 {
    let rho = z.norm();
    if rho == 0.0 {
        return Complex64::new(if m == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    let phi = canonical::wrap_angle(z.im.atan2(z.re));
    Complex64::from_polar(rho.powf(m), m * phi)
}

/// Coefficients `a_0, a_1, ...` of a power series together with their canonical
/// projections.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients {
    terms: Vec<HexaNumber>,
    projections: Vec<Canonical>,
}

impl SeriesCoefficients {
    pub fn new(terms: Vec<HexaNumber>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| HexaError::Invalid("a series needs at least one coefficient".into()))?;
        if let Some(bad) = terms.iter().find(|t| t.variant() != first.variant()) {
            return Err(HexaError::VariantMismatch {
                left: first.variant(),
                right: bad.variant(),
            });
        }
        let projections = terms.iter().map(canonical::to_canonical).collect();
        Ok(Self { terms, projections })
    }

    /// Real coefficients `a_l` embedded as `a_l * 1`.
    pub fn from_reals(variant: Variant, reals: &[f64]) -> Result<Self> {
        Self::new(reals.iter().map(|&a| HexaNumber::real(variant, a)).collect())
    }

    pub fn variant(&self) -> Variant {
        self.terms[0].variant()
    }

    pub fn terms(&self) -> &[HexaNumber] {
        &self.terms
    }

    /// `A_{l+}, A_{l-}, A_{lk}, ~A_{lk}` (polar) or `A_{lk}, ~A_{lk}` (planar) per `l`.
    pub fn projections(&self) -> &[Canonical] {
        &self.projections
    }
}

/// Convergence radius estimate of one canonical component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radius {
    Estimate(f64),
    /// Too few nonzero coefficients, or a ratio sequence that is not monotone.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// `c+`, `c-` (polar); empty for planar.
    pub reals: Vec<Radius>,
    /// `c_k` for every pair.
    pub pairs: Vec<Radius>,
    /// Crude bound `|a_l| / (sqrt(n) |a_{l+1}|)` with `n` = 6 (polar) or 3 (planar).
    pub overall: Radius,
}

const RATIO_WINDOW: usize = 5;

/// Averages the last ratios `|a_l| / |a_{l+1}|`.
fn ratio_radius(magnitudes: &[f64], divisor: f64) -> Radius {
    if magnitudes.len() < 2 {
        return Radius::Indeterminate;
    }
    let start = magnitudes.len().saturating_sub(RATIO_WINDOW + 1);
    let tail = &magnitudes[start..];
    let mut ratios = Vec::with_capacity(tail.len() - 1);
    for w in tail.windows(2) {
        if w[0] == 0.0 || w[1] == 0.0 {
            return Radius::Indeterminate;
        }
        ratios.push(w[0] / (divisor * w[1]));
    }
    let rises = ratios.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let falls = ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    if !(rises || falls) {
        return Radius::Indeterminate;
    }
    Radius::Estimate(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// Evaluates `sum_l a_l u^l` through the canonical rearrangement.
pub fn eval_series(coeffs: &SeriesCoefficients, u: &HexaNumber) -> Result<(HexaNumber, ConvergenceReport)> {
    let variant = coeffs.variant();
    if u.variant() != variant {
        return Err(HexaError::VariantMismatch {
            left: variant,
            right: u.variant(),
        });
    }
    let cu = canonical::to_canonical(u);
    let (ur, up) = (cu.reals(), cu.pairs());
    let mut sum_r = vec![0.0; ur.len()];
    let mut sum_p = vec![Complex64::new(0.0, 0.0); up.len()];
    let mut pow_r = vec![1.0; ur.len()];
    let mut pow_p = vec![Complex64::new(1.0, 0.0); up.len()];
    for a in &coeffs.projections {
        for (i, (s, ar)) in sum_r.iter_mut().zip(a.reals()).enumerate() {
            *s += ar * pow_r[i];
            pow_r[i] *= ur[i];
        }
        for (k, (s, ap)) in sum_p.iter_mut().zip(a.pairs()).enumerate() {
            *s += ap * pow_p[k];
            pow_p[k] *= up[k];
        }
    }
    let value = canonical::from_canonical(&Canonical::from_parts(variant, &sum_r, &sum_p));

    let reals = (0..ur.len())
        .map(|i| {
            let mags: Vec<f64> = coeffs.projections.iter().map(|a| a.reals()[i].abs()).collect();
            ratio_radius(&mags, 1.0)
        })
        .collect();
    let pairs = (0..up.len())
        .map(|k| {
            let mags: Vec<f64> = coeffs.projections.iter().map(|a| a.pairs()[k].norm()).collect();
            ratio_radius(&mags, 1.0)
        })
        .collect();
    let dim_root = match variant {
        Variant::Polar => 6f64.sqrt(),
        Variant::Planar => 3f64.sqrt(),
    };
    let mags: Vec<f64> = coeffs.terms.iter().map(HexaNumber::modulus).collect();
    let report = ConvergenceReport {
        reals,
        pairs,
        overall: ratio_radius(&mags, dim_root),
    };
    Ok((value, report))
}
