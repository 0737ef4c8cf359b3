//! The polar cosexponential functions `g_{6k}` and the planar ones `f_{6k}`.
//!
//! `g_{6k}(y) = sum_p y^(k+6p) / (k+6p)!` and
//! `f_{6k}(y) = sum_p (-1)^p y^(k+6p) / (k+6p)!`, k = 0..5. Each is available as
//! a closed form in hyperbolic/trigonometric functions, as the truncated series
//! and as a six-term exponential sum.

use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::algebra::{HexaNumber, Variant};
use crate::canonical::SQRT_3;
use crate::error::{HexaError, Result};

/// Default cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 300;
const SERIES_REL_STOP: f64 = 1e-17;

/// `g` (polar) or `f` (planar).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    G,
    F,
}

impl Family {
    pub fn variant(self) -> Variant {
        match self {
            Family::G => Variant::Polar,
            Family::F => Variant::Planar,
        }
    }

    pub fn for_variant(variant: Variant) -> Self {
        match variant {
            Variant::Polar => Family::G,
            Variant::Planar => Family::F,
        }
    }

    pub fn eval(self, k: usize, y: f64, method: Method) -> f64 {
        match (self, method) {
            (Family::G, Method::ClosedForm) => g6(k, y),
            (Family::G, Method::Series) => g6_series(k, y, SERIES_MAX_TERMS),
            (Family::G, Method::SumForm) => g6_sumform(k, y),
            (Family::F, Method::ClosedForm) => f6(k, y),
            (Family::F, Method::Series) => f6_series(k, y, SERIES_MAX_TERMS),
            (Family::F, Method::SumForm) => f6_sumform(k, y),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::G => "g",
            Family::F => "f",
        })
    }
}

impl FromStr for Family {
    type Err = HexaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(Family::G),
            "f" => Ok(Family::F),
            other => Err(HexaError::Invalid(format!("unknown function family '{other}' (expected g or f)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    ClosedForm,
    SumForm,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosexpEvaluation {
    pub family: Family,
    pub k: usize,
    pub y: f64,
    pub value: f64,
    pub method: Method,
}

impl CosexpEvaluation {
    pub fn compute(family: Family, k: usize, y: f64, method: Method) -> Self {
        Self {
            family,
            k,
            y,
            value: family.eval(k, y, method),
            method,
        }
    }
}

fn check_index(k: usize) {
    assert!(k < 6, "cosexponential index {k} out of range 0..5");
}

/// Closed form of `g_{6k}(y)`.
///
/// # Panics
/// If `k > 5`.
pub fn g6(k: usize, y: f64) -> f64 {
    check_index(k);
    let (ch, sh) = (y.cosh(), y.sinh());
    let (ch2, sh2) = ((y / 2.0).cosh(), (y / 2.0).sinh());
    let b = SQRT_3 / 2.0 * y;
    let (c, s) = (b.cos(), b.sin());
    let t = SQRT_3 / 3.0;
    match k {
        0 => ch / 3.0 + 2.0 / 3.0 * ch2 * c,
        1 => sh / 3.0 + sh2 * c / 3.0 + t * ch2 * s,
        2 => ch / 3.0 - ch2 * c / 3.0 + t * sh2 * s,
        3 => sh / 3.0 - 2.0 / 3.0 * sh2 * c,
        4 => ch / 3.0 - ch2 * c / 3.0 - t * sh2 * s,
        _ => sh / 3.0 + sh2 * c / 3.0 - t * ch2 * s,
    }
}

/// Closed form of `f_{6k}(y)`.
///
/// # Panics
/// If `k > 5`.
pub fn f6(k: usize, y: f64) -> f64 {
    check_index(k);
    let (c1, s1) = (y.cos(), y.sin());
    let (c2, s2) = ((y / 2.0).cos(), (y / 2.0).sin());
    let a = SQRT_3 / 2.0 * y;
    let (ch, sh) = (a.cosh(), a.sinh());
    let t = SQRT_3 / 3.0;
    match k {
        0 => c1 / 3.0 + 2.0 / 3.0 * ch * c2,
        1 => s1 / 3.0 + t * sh * c2 + ch * s2 / 3.0,
        2 => -c1 / 3.0 + ch * c2 / 3.0 + t * sh * s2,
        3 => -s1 / 3.0 + 2.0 / 3.0 * ch * s2,
        4 => c1 / 3.0 - ch * c2 / 3.0 + t * sh * s2,
        _ => s1 / 3.0 - t * sh * c2 + ch * s2 / 3.0,
    }
}

/// Shared series loop; `alternate` flips the sign every six powers.
fn series(k: usize, y: f64, max_terms: usize, alternate: bool) -> f64 {
    check_index(k);
    assert!(max_terms >= 1, "at least one series term is required");
    let mut term = (1..=k).fold(1.0, |acc, i| acc * y / i as f64);
    let mut sum = term;
    let y6 = y.powi(6);
    for p in 1..max_terms {
        let n = (k + 6 * p) as f64;
        let denom = (0..6).fold(1.0, |acc, i| acc * (n - i as f64));
        term *= y6 / denom;
        if alternate {
            term = -term;
        }
        if term == 0.0 {
            break;
        }
        sum += term;
        if term.abs() < SERIES_REL_STOP * sum.abs() {
            break;
        }
    }
    sum
}

/// Truncated series for `g_{6k}(y)` with at most `max_terms` terms.
///
/// # Panics
/// If `k > 5` or `max_terms == 0`.
pub fn g6_series(k: usize, y: f64, max_terms: usize) -> f64 {
    series(k, y, max_terms, false)
}

/// Truncated series for `f_{6k}(y)` with at most `max_terms` terms.
///
/// # Panics
/// If `k > 5` or `max_terms == 0`.
pub fn f6_series(k: usize, y: f64, max_terms: usize) -> f64 {
    series(k, y, max_terms, true)
}

/// `(1/6) sum_{l=0}^{5} exp(y cos(pi l/3)) cos(y sin(pi l/3) - pi k l/3)`.
pub fn g6_sumform(k: usize, y: f64) -> f64 {
    check_index(k);
    (0..6)
        .map(|l| {
            let a = PI * l as f64 / 3.0;
            (y * a.cos()).exp() * (y * a.sin() - a * k as f64).cos()
        })
        .sum::<f64>()
        / 6.0
}

/// `(1/6) sum_{l=1}^{6} exp(y cos(pi (2l-1)/6)) cos(y sin(pi (2l-1)/6) - pi (2l-1) k/6)`.
pub fn f6_sumform(k: usize, y: f64) -> f64 {
    check_index(k);
    (1..=6)
        .map(|l| {
            let a = PI * (2 * l - 1) as f64 / 6.0;
            (y * a.cos()).exp() * (y * a.sin() - a * k as f64).cos()
        })
        .sum::<f64>()
        / 6.0
}

/// Right-hand side of the addition theorem for index `k` at `(y, z)`:
/// `sum_j s_j F_j(y) F_{k-j}(z)`, where `s_j = -1` for wrapped indices in the
/// planar family.
pub fn addition_rhs(family: Family, k: usize, y: f64, z: f64) -> f64 {
    check_index(k);
    (0..6)
        .map(|j| {
            let other = (k + 6 - j) % 6;
            let sign = if family == Family::F && j > k { -1.0 } else { 1.0 };
            sign * family.eval(j, y, Method::ClosedForm) * family.eval(other, z, Method::ClosedForm)
        })
        .sum()
}

/// `e^{h_k y}` as its cosexponential combination.
///
/// With `h_k^q = s h_{kq mod 6}` and `h_k^6 = +1` (polar) or `(-1)^k` (planar),
/// the coefficient of `h_{kq mod 6}` collects `s` times `g_{6q}` when the
/// period sign is `+1` and `f_{6q}` when it is `-1`.
///
/// # Panics
/// If `k` is not in `1..=5`.
pub fn exp_basis(variant: Variant, k: usize, y: f64) -> HexaNumber {
    assert!((1..6).contains(&k), "exp_basis index {k} out of range 1..5");
    let mut x = [0.0; 6];
    for q in 0..6 {
        let (index, wraps) = ((k * q) % 6, (k * q) / 6);
        let (sign, family) = match variant {
            Variant::Polar => (1.0, Family::G),
            Variant::Planar => (
                if wraps % 2 == 0 { 1.0 } else { -1.0 },
                if k % 2 == 0 { Family::G } else { Family::F },
            ),
        };
        x[index] += sign * family.eval(q, y, Method::ClosedForm);
    }
    HexaNumber::new(variant, x).expect("cosexponentials are finite for finite arguments")
}

/// Uniform grid `a + (b - a) i / n`, `n = round((b - a) / step)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            start: -4.0,
            end: 4.0,
            step: 0.05,
        }
    }
}

impl Grid {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(HexaError::Invalid(format!("step must be positive (got {step})")));
        }
        if !start.is_finite() || !end.is_finite() || end < start {
            return Err(HexaError::Invalid(format!("invalid range {start}:{end}")));
        }
        Ok(Self { start, end, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step).round() as usize;
        if n == 0 {
            return vec![self.start];
        }
        (0..=n)
            .map(|i| self.start + (self.end - self.start) * i as f64 / n as f64)
            .collect()
    }
}

/// CSV table `y,c0,...,c5` of the closed forms, 17 significant digits.
pub fn table_csv(family: Family, grid: &Grid) -> String {
    let mut out = String::from("y,c0,c1,c2,c3,c4,c5\n");
    for y in grid.points() {
        let _ = write!(out, "{y:.16e}");
        for k in 0..6 {
            let _ = write!(out, ",{:.16e}", family.eval(k, y, Method::ClosedForm));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        for family in [Family::G, Family::F] {
            for method in [Method::Series, Method::ClosedForm, Method::SumForm] {
                assert!((family.eval(0, 0.0, method) - 1.0).abs() < 1e-15);
                for k in 1..6 {
                    assert!(family.eval(k, 0.0, method).abs() < 1e-15, "{family}{k} {method:?}");
                }
            }
        }
    }

    #[test]
    fn first_term_only() {
        assert_eq!(g6_series(1, 0.37, 1), 0.37);
        assert_eq!(f6_series(0, 2.0, 1), 1.0);
    }

    #[test]
    fn sums_give_exponentials() {
        let total: f64 = (0..6).map(|k| g6(k, 1.0)).sum();
        assert!((total - 1f64.exp()).abs() < 1e-14);
        let alt: f64 = (0..6).map(|k| if k % 2 == 0 { g6(k, 1.0) } else { -g6(k, 1.0) }).sum();
        assert!((alt - (-1f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn parity() {
        for k in 0..6 {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((g6_series(k, -1.3, 300) - s * g6_series(k, 1.3, 300)).abs() < 1e-15);
            assert!((f6(k, -1.3) - s * f6(k, 1.3)).abs() < 1e-14);
        }
    }

    #[test]
    fn exp_basis_h3() {
        let y = 0.9;
        let p = exp_basis(Variant::Polar, 3, y).components();
        assert!((p[0] - y.cosh()).abs() < 1e-15 && (p[3] - y.sinh()).abs() < 1e-15);
        let q = exp_basis(Variant::Planar, 3, y).components();
        assert!((q[0] - y.cos()).abs() < 1e-15 && (q[3] - y.sin()).abs() < 1e-15);
        for v in [Variant::Polar, Variant::Planar] {
            for k in 1..6 {
                assert!(exp_basis(v, k, 0.0).max_abs_diff(&HexaNumber::one(v)) < 1e-15);
            }
        }
    }

    #[test]
    fn planar_h2_uses_g_combinations() {
        let y = 0.6;
        let x = exp_basis(Variant::Planar, 2, y).components();
        assert!((x[0] - (g6(0, y) - g6(3, y))).abs() < 1e-15);
    }

    #[test]
    fn grid_hits_zero() {
        let pts = Grid::default().points();
        assert_eq!(pts.len(), 161);
        assert_eq!(pts[80], 0.0);
        assert_eq!(pts[0], -4.0);
        assert_eq!(pts[160], 4.0);
        assert!(Grid::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn csv_shape() {
        let csv = table_csv(Family::G, &Grid::new(0.0, 0.0, 1.0).unwrap());
        assert_eq!(
            csv,
            "y,c0,c1,c2,c3,c4,c5\n0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,\
             0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0\n"
        );
    }
}
