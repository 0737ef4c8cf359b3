//! Canonical coordinates, the idempotent bases, the rotated orthonormal axes and
//! the geometric parameters (modulus, amplitude, angles) of 6-complex numbers.
//!
//! In canonical coordinates multiplication is componentwise: the real
//! components `v+`, `v-` (polar only) multiply as reals and every pair
//! `(v_k, ~v_k)` multiplies as an ordinary complex number `v_k + i ~v_k`. The
//! pairs are therefore stored as [`Complex64`].

use std::f64::consts::{SQRT_2, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{component_of, HexaNumber, Matrix6, Variant, ZERO_DIVISOR_REL};
use crate::elementary;
use crate::error::{Component, HexaError, Result};

pub(crate) const SQRT_3: f64 = 1.7320508075688772;
const S3_2: f64 = 0.8660254037844386;
const INV_SQRT_6: f64 = 0.408248290463863;
const INV_SQRT_3: f64 = 0.5773502691896257;
const S3_6: f64 = 0.28867513459481287;

/// `x -> (v+, v-, v1, ~v1, v2, ~v2)`.
#[rustfmt::skip]
const POLAR_TO_CANONICAL: Matrix6 = Matrix6([
    [1.0,  1.0,  1.0,  1.0,  1.0,  1.0],
    [1.0, -1.0,  1.0, -1.0,  1.0, -1.0],
    [1.0,  0.5, -0.5, -1.0, -0.5,  0.5],
    [0.0,  S3_2, S3_2, 0.0, -S3_2, -S3_2],
    [1.0, -0.5, -0.5,  1.0, -0.5, -0.5],
    [0.0,  S3_2, -S3_2, 0.0, S3_2, -S3_2],
]);

/// `x -> (v1, ~v1, v2, ~v2, v3, ~v3)`.
#[rustfmt::skip]
const PLANAR_TO_CANONICAL: Matrix6 = Matrix6([
    [1.0,  S3_2, 0.5,  0.0, -0.5, -S3_2],
    [0.0,  0.5,  S3_2, 1.0,  S3_2, 0.5],
    [1.0,  0.0, -1.0,  0.0,  1.0,  0.0],
    [0.0,  1.0,  0.0, -1.0,  0.0,  1.0],
    [1.0, -S3_2, 0.5,  0.0, -0.5,  S3_2],
    [0.0,  0.5, -S3_2, 1.0, -S3_2, 0.5],
]);

/// Orthogonal rotation `x -> (xi+, xi-, xi1, eta1, xi2, eta2)`.
#[rustfmt::skip]
const POLAR_ROTATION: Matrix6 = Matrix6([
    [INV_SQRT_6,  INV_SQRT_6, INV_SQRT_6,  INV_SQRT_6, INV_SQRT_6,  INV_SQRT_6],
    [INV_SQRT_6, -INV_SQRT_6, INV_SQRT_6, -INV_SQRT_6, INV_SQRT_6, -INV_SQRT_6],
    [INV_SQRT_3,  S3_6,      -S3_6,       -INV_SQRT_3, -S3_6,       S3_6],
    [0.0,         0.5,        0.5,         0.0,        -0.5,       -0.5],
    [INV_SQRT_3, -S3_6,      -S3_6,        INV_SQRT_3, -S3_6,      -S3_6],
    [0.0,         0.5,       -0.5,         0.0,         0.5,       -0.5],
]);

/// Orthogonal rotation `x -> (xi1, eta1, xi2, eta2, xi3, eta3)`.
#[rustfmt::skip]
const PLANAR_ROTATION: Matrix6 = Matrix6([
    [INV_SQRT_3,  0.5,        S3_6,        0.0,        -S3_6,       -0.5],
    [0.0,         S3_6,       0.5,         INV_SQRT_3,  0.5,         S3_6],
    [INV_SQRT_3,  0.0,       -INV_SQRT_3,  0.0,         INV_SQRT_3,  0.0],
    [0.0,         INV_SQRT_3, 0.0,        -INV_SQRT_3,  0.0,         INV_SQRT_3],
    [INV_SQRT_3, -0.5,        S3_6,        0.0,        -S3_6,        0.5],
    [0.0,         S3_6,      -0.5,         INV_SQRT_3, -0.5,         S3_6],
]);

/// Rows are `e+, e-, e1, ~e1, e2, ~e2` in the `1, h1, ..., h5` basis.
#[rustfmt::skip]
const POLAR_BASIS: Matrix6 = Matrix6([
    [1.0 / 6.0,  1.0 / 6.0,  1.0 / 6.0,  1.0 / 6.0,  1.0 / 6.0,  1.0 / 6.0],
    [1.0 / 6.0, -1.0 / 6.0,  1.0 / 6.0, -1.0 / 6.0,  1.0 / 6.0, -1.0 / 6.0],
    [1.0 / 3.0,  1.0 / 6.0, -1.0 / 6.0, -1.0 / 3.0, -1.0 / 6.0,  1.0 / 6.0],
    [0.0,        S3_6,       S3_6,       0.0,       -S3_6,      -S3_6],
    [1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0,  1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0],
    [0.0,        S3_6,      -S3_6,       0.0,        S3_6,      -S3_6],
]);

/// Rows are `e1, ~e1, e2, ~e2, e3, ~e3` in the `1, h1, ..., h5` basis.
#[rustfmt::skip]
const PLANAR_BASIS: Matrix6 = Matrix6([
    [1.0 / 3.0,  S3_6,       1.0 / 6.0,  0.0,       -1.0 / 6.0, -S3_6],
    [0.0,        1.0 / 6.0,  S3_6,       1.0 / 3.0,  S3_6,       1.0 / 6.0],
    [1.0 / 3.0,  0.0,       -1.0 / 3.0,  0.0,        1.0 / 3.0,  0.0],
    [0.0,        1.0 / 3.0,  0.0,       -1.0 / 3.0,  0.0,        1.0 / 3.0],
    [1.0 / 3.0, -S3_6,       1.0 / 6.0,  0.0,       -1.0 / 6.0,  S3_6],
    [0.0,        1.0 / 6.0, -S3_6,       1.0 / 3.0, -S3_6,       1.0 / 6.0],
]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarCanonical {
    pub v_plus: f64,
    pub v_minus: f64,
    /// `(v_k, ~v_k)` as `v_k + i ~v_k`, k = 1, 2.
    pub pairs: [Complex64; 2],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarCanonical {
    /// `(v_k, ~v_k)` as `v_k + i ~v_k`, k = 1, 2, 3.
    pub pairs: [Complex64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Canonical {
    Polar(PolarCanonical),
    Planar(PlanarCanonical),
}

impl Canonical {
    pub fn variant(&self) -> Variant {
        match self {
            Canonical::Polar(_) => Variant::Polar,
            Canonical::Planar(_) => Variant::Planar,
        }
    }

    /// Flattened as `(v+, v-, v1, ~v1, v2, ~v2)` or `(v1, ~v1, v2, ~v2, v3, ~v3)`.
    pub fn to_array(&self) -> [f64; 6] {
        match self {
            Canonical::Polar(c) => [
                c.v_plus,
                c.v_minus,
                c.pairs[0].re,
                c.pairs[0].im,
                c.pairs[1].re,
                c.pairs[1].im,
            ],
            Canonical::Planar(c) => [
                c.pairs[0].re,
                c.pairs[0].im,
                c.pairs[1].re,
                c.pairs[1].im,
                c.pairs[2].re,
                c.pairs[2].im,
            ],
        }
    }

    pub fn from_array(variant: Variant, a: [f64; 6]) -> Self {
        match variant {
            Variant::Polar => Canonical::Polar(PolarCanonical {
                v_plus: a[0],
                v_minus: a[1],
                pairs: [Complex64::new(a[2], a[3]), Complex64::new(a[4], a[5])],
            }),
            Variant::Planar => Canonical::Planar(PlanarCanonical {
                pairs: [
                    Complex64::new(a[0], a[1]),
                    Complex64::new(a[2], a[3]),
                    Complex64::new(a[4], a[5]),
                ],
            }),
        }
    }

    /// The real components: `[v+, v-]` for polar, empty for planar.
    pub fn reals(&self) -> Vec<f64> {
        match self {
            Canonical::Polar(c) => vec![c.v_plus, c.v_minus],
            Canonical::Planar(_) => Vec::new(),
        }
    }

    pub fn pairs(&self) -> Vec<Complex64> {
        match self {
            Canonical::Polar(c) => c.pairs.to_vec(),
            Canonical::Planar(c) => c.pairs.to_vec(),
        }
    }

    /// Builds a canonical value from its real components and pairs, in the
    /// order returned by [`Canonical::reals`] and [`Canonical::pairs`].
    pub fn from_parts(variant: Variant, reals: &[f64], pairs: &[Complex64]) -> Self {
        match variant {
            Variant::Polar => Canonical::Polar(PolarCanonical {
                v_plus: reals[0],
                v_minus: reals[1],
                pairs: [pairs[0], pairs[1]],
            }),
            Variant::Planar => Canonical::Planar(PlanarCanonical {
                pairs: [pairs[0], pairs[1], pairs[2]],
            }),
        }
    }

    /// Applies `real` to every real component and `pair` to every pair.
    pub fn map(&self, real: impl Fn(f64) -> f64, pair: impl Fn(Complex64) -> Complex64) -> Self {
        match self {
            Canonical::Polar(c) => Canonical::Polar(PolarCanonical {
                v_plus: real(c.v_plus),
                v_minus: real(c.v_minus),
                pairs: c.pairs.map(&pair),
            }),
            Canonical::Planar(c) => Canonical::Planar(PlanarCanonical {
                pairs: c.pairs.map(&pair),
            }),
        }
    }

    /// Fallible [`Canonical::map`]; the closures receive the component they act on.
    pub fn try_map(
        &self,
        mut real: impl FnMut(Component, f64) -> Result<f64>,
        mut pair: impl FnMut(Component, Complex64) -> Result<Complex64>,
    ) -> Result<Self> {
        let variant = self.variant();
        let reals = self.reals();
        let pairs = self.pairs();
        let mut new_reals = Vec::with_capacity(reals.len());
        for (i, &v) in reals.iter().enumerate() {
            new_reals.push(real(component_of(variant, i), v)?);
        }
        let mut new_pairs = Vec::with_capacity(pairs.len());
        for (k, &z) in pairs.iter().enumerate() {
            new_pairs.push(pair(Component::Pair(k + 1), z)?);
        }
        Ok(Self::from_parts(variant, &new_reals, &new_pairs))
    }

    /// First component whose magnitude (radius, for pairs) is at most `threshold`.
    pub fn vanishing_component(&self, threshold: f64) -> Option<Component> {
        let variant = self.variant();
        if let Some(i) = self.reals().iter().position(|v| v.abs() <= threshold) {
            return Some(component_of(variant, i));
        }
        self.pairs()
            .iter()
            .position(|z| z.norm() <= threshold)
            .map(|k| Component::Pair(k + 1))
    }

    /// Radii `rho_k` of the pairs.
    pub fn radii(&self) -> Vec<f64> {
        self.pairs().iter().map(|z| z.norm()).collect()
    }
}

pub fn to_canonical(u: &HexaNumber) -> Canonical {
    let m = match u.variant() {
        Variant::Polar => &POLAR_TO_CANONICAL,
        Variant::Planar => &PLANAR_TO_CANONICAL,
    };
    Canonical::from_array(u.variant(), m.apply(&u.components()))
}

/// Recombines canonical components with the idempotent basis.
pub fn from_canonical(c: &Canonical) -> HexaNumber {
    let basis = basis_matrix(c.variant());
    let v = c.to_array();
    let mut x = [0.0; 6];
    for (coef, row) in v.iter().zip(basis.0.iter()) {
        for (xj, b) in x.iter_mut().zip(row.iter()) {
            *xj += coef * b;
        }
    }
    HexaNumber::from_raw(c.variant(), x)
}

fn basis_matrix(variant: Variant) -> &'static Matrix6 {
    match variant {
        Variant::Polar => &POLAR_BASIS,
        Variant::Planar => &PLANAR_BASIS,
    }
}

/// `(e+, e-, e1, ~e1, e2, ~e2)` or `(e1, ~e1, e2, ~e2, e3, ~e3)`.
pub fn canonical_basis(variant: Variant) -> [HexaNumber; 6] {
    basis_matrix(variant).0.map(|row| HexaNumber::from_raw(variant, row))
}

/// The orthogonal matrix `T` of the rotated axes.
pub fn rotation_matrix(variant: Variant) -> Matrix6 {
    match variant {
        Variant::Polar => POLAR_ROTATION,
        Variant::Planar => PLANAR_ROTATION,
    }
}

/// Coordinates of a number along the rotated orthonormal axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatedCoords {
    pub variant: Variant,
    /// `(xi+, xi-, xi1, eta1, xi2, eta2)` or `(xi1, eta1, xi2, eta2, xi3, eta3)`.
    pub xi: [f64; 6],
}

impl RotatedCoords {
    pub fn norm(&self) -> f64 {
        self.xi.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Projection onto the `(xi_k, eta_k)` plane, `k` counted from 1.
    pub fn plane(&self, k: usize) -> Result<(f64, f64)> {
        let start = plane_offset(self.variant, k)?;
        Ok((self.xi[start], self.xi[start + 1]))
    }
}

/// Index of `xi_k` inside the rotated coordinate list.
pub(crate) fn plane_offset(variant: Variant, k: usize) -> Result<usize> {
    match (variant, k) {
        (Variant::Polar, 1 | 2) => Ok(2 * k),
        (Variant::Planar, 1..=3) => Ok(2 * (k - 1)),
        _ => Err(HexaError::Invalid(format!("no plane {k} for a {variant} number"))),
    }
}

pub fn rotated_coords(u: &HexaNumber) -> RotatedCoords {
    RotatedCoords {
        variant: u.variant(),
        xi: rotation_matrix(u.variant()).apply(&u.components()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarGeometry {
    pub d: f64,
    /// `(v+ v- rho1^2 rho2^2)^(1/6)`; absent when that product is negative.
    pub rho: Option<f64>,
    pub theta_plus: Option<f64>,
    pub theta_minus: Option<f64>,
    pub psi1: Option<f64>,
    pub phi: [Option<f64>; 2],
    pub rho_k: [f64; 2],
    pub v_plus: f64,
    pub v_minus: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarGeometry {
    pub d: f64,
    /// `(rho1 rho2 rho3)^(1/3)`.
    pub rho: f64,
    pub psi: [Option<f64>; 2],
    pub phi: [Option<f64>; 3],
    pub rho_k: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Polar(PolarGeometry),
    Planar(PlanarGeometry),
}

impl Geometry {
    pub fn d(&self) -> f64 {
        match self {
            Geometry::Polar(g) => g.d,
            Geometry::Planar(g) => g.d,
        }
    }

    pub fn rho(&self) -> Option<f64> {
        match self {
            Geometry::Polar(g) => g.rho,
            Geometry::Planar(g) => Some(g.rho),
        }
    }

    /// Key/value pairs in record order; undefined angles are left out.
    pub fn entries(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Vec::new();
        let mut push = |k: &str, v: Option<f64>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        match self {
            Geometry::Polar(g) => {
                push("d", Some(g.d));
                push("rho", g.rho);
                push("theta_plus", g.theta_plus);
                push("theta_minus", g.theta_minus);
                push("psi1", g.psi1);
                push("phi1", g.phi[0]);
                push("phi2", g.phi[1]);
                push("rho1", Some(g.rho_k[0]));
                push("rho2", Some(g.rho_k[1]));
            }
            Geometry::Planar(g) => {
                push("d", Some(g.d));
                push("rho", Some(g.rho));
                push("psi1", g.psi[0]);
                push("psi2", g.psi[1]);
                push("phi1", g.phi[0]);
                push("phi2", g.phi[1]);
                push("phi3", g.phi[2]);
                push("rho1", Some(g.rho_k[0]));
                push("rho2", Some(g.rho_k[1]));
                push("rho3", Some(g.rho_k[2]));
            }
        }
        out
    }
}

/// Flat `key=value` record, one entry per line.
impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            match f.precision() {
                Some(p) => writeln!(f, "{k}={v:.p$}")?,
                None => writeln!(f, "{k}={v}")?,
            }
        }
        Ok(())
    }
}

fn azimuth(z: Complex64, tol: f64) -> Option<f64> {
    if z.norm() <= tol {
        return None;
    }
    let a = z.im.atan2(z.re).rem_euclid(TAU);
    Some(if a >= TAU { 0.0 } else { a })
}

/// Angle in `[0, pi]` whose tangent is `num / den` with `num >= 0`; absent at 0/0.
fn ratio_angle(num: f64, den: f64, tol: f64) -> Option<f64> {
    let num = if num <= tol { 0.0 } else { num };
    let den = if den.abs() <= tol { 0.0 } else { den };
    if num == 0.0 && den == 0.0 {
        None
    } else {
        Some(num.atan2(den))
    }
}

pub fn geometry(u: &HexaNumber) -> Geometry {
    let d = u.modulus();
    let tol = ZERO_DIVISOR_REL * d;
    let c = to_canonical(u);
    match c {
        Canonical::Polar(p) => {
            let rho_k = [p.pairs[0].norm(), p.pairs[1].norm()];
            let product = p.v_plus * p.v_minus * rho_k[0].powi(2) * rho_k[1].powi(2);
            let degenerate = c.vanishing_component(tol).is_some();
            let rho = if degenerate {
                Some(0.0)
            } else if product >= 0.0 {
                Some(product.powf(1.0 / 6.0))
            } else {
                None
            };
            Geometry::Polar(PolarGeometry {
                d,
                rho,
                theta_plus: ratio_angle(SQRT_2 * rho_k[0], p.v_plus, tol),
                theta_minus: ratio_angle(SQRT_2 * rho_k[0], p.v_minus, tol),
                psi1: ratio_angle(rho_k[0], rho_k[1], tol),
                phi: [azimuth(p.pairs[0], tol), azimuth(p.pairs[1], tol)],
                rho_k,
                v_plus: p.v_plus,
                v_minus: p.v_minus,
            })
        }
        Canonical::Planar(p) => {
            let rho_k = p.pairs.map(|z| z.norm());
            let rho = if c.vanishing_component(tol).is_some() {
                0.0
            } else {
                (rho_k[0] * rho_k[1] * rho_k[2]).cbrt()
            };
            Geometry::Planar(PlanarGeometry {
                d,
                rho,
                psi: [
                    ratio_angle(rho_k[0], rho_k[1], tol),
                    ratio_angle(rho_k[0], rho_k[2], tol),
                ],
                phi: p.pairs.map(|z| azimuth(z, tol)),
                rho_k,
            })
        }
    }
}

/// `u = rho * exp(exponent)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpForm {
    pub rho: f64,
    pub exponent: HexaNumber,
}

impl ExpForm {
    pub fn evaluate(&self) -> HexaNumber {
        elementary::exp(&self.exponent).scale(self.rho)
    }
}

fn h_combination(variant: Variant, coeffs: [f64; 6]) -> HexaNumber {
    HexaNumber::from_raw(variant, coeffs)
}

fn require_positive(u: &HexaNumber) -> Result<()> {
    let tol = ZERO_DIVISOR_REL * u.modulus();
    let c = to_canonical(u);
    if let Some(component) = c.vanishing_component(tol) {
        return Err(HexaError::Domain(format!("canonical component {component} vanishes")));
    }
    for (i, v) in c.reals().into_iter().enumerate() {
        if v < 0.0 {
            return Err(HexaError::Domain(format!(
                "canonical component {} is negative ({v})",
                component_of(u.variant(), i)
            )));
        }
    }
    Ok(())
}

/// Exponential form built from the amplitude and the angles.
///
/// Requires `v+ > 0`, `v- > 0` and nonvanishing pairs (polar), or nonvanishing
/// pairs (planar).
pub fn exp_form(u: &HexaNumber) -> Result<ExpForm> {
    require_positive(u)?;
    let variant = u.variant();
    let basis = canonical_basis(variant);
    match geometry(u) {
        Geometry::Polar(g) => {
            let (Some(rho), Some(tp), Some(tm), Some(psi1), Some(phi1), Some(phi2)) =
                (g.rho, g.theta_plus, g.theta_minus, g.psi1, g.phi[0], g.phi[1])
            else {
                return Err(HexaError::Domain("geometry is degenerate".into()));
            };
            let sixth = 1.0 / 6.0;
            let a = h_combination(variant, [0.0, sixth, sixth, sixth, sixth, sixth]);
            let b = h_combination(variant, [0.0, sixth, -sixth, sixth, -sixth, sixth]);
            let c = h_combination(variant, [0.0, sixth, sixth, -2.0 * sixth, sixth, sixth]);
            let exponent = a.scale((SQRT_2 / tp.tan()).ln()) - b.scale((SQRT_2 / tm.tan()).ln())
                + c.scale(psi1.tan().ln())
                + basis[3].scale(phi1)
                + basis[5].scale(phi2);
            Ok(ExpForm { rho, exponent })
        }
        Geometry::Planar(g) => {
            let (Some(psi1), Some(psi2), Some(phi1), Some(phi2), Some(phi3)) =
                (g.psi[0], g.psi[1], g.phi[0], g.phi[1], g.phi[2])
            else {
                return Err(HexaError::Domain("geometry is degenerate".into()));
            };
            let a = h_combination(variant, [0.0, 0.0, 1.0 / 3.0, 0.0, -1.0 / 3.0, 0.0]);
            let b = h_combination(
                variant,
                [0.0, SQRT_3 / 6.0, -1.0 / 6.0, 0.0, 1.0 / 6.0, -SQRT_3 / 6.0],
            );
            let exponent = a.scale(psi1.tan().ln())
                + b.scale(psi2.tan().ln())
                + basis[1].scale(phi1)
                + basis[3].scale(phi2)
                + basis[5].scale(phi3);
            Ok(ExpForm { rho: g.rho, exponent })
        }
    }
}

/// `u = scale * direction * exp(phase)`, with `scale = d sqrt(3) (...)^(-1/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigForm {
    pub scale: f64,
    pub direction: HexaNumber,
    pub phase: HexaNumber,
}

impl TrigForm {
    pub fn evaluate(&self) -> HexaNumber {
        (self.direction * elementary::exp(&self.phase)).scale(self.scale)
    }
}

/// Trigonometric form; requires `rho1 > 0` so that every tangent is finite.
pub fn trig_form(u: &HexaNumber) -> Result<TrigForm> {
    let variant = u.variant();
    let basis = canonical_basis(variant);
    match geometry(u) {
        Geometry::Polar(g) => {
            let (Some(tp), Some(tm), Some(psi1)) = (g.theta_plus, g.theta_minus, g.psi1) else {
                return Err(HexaError::Domain("polar angles undefined".into()));
            };
            if g.rho_k[0] <= ZERO_DIVISOR_REL * g.d {
                return Err(HexaError::Domain("rho1 vanishes".into()));
            }
            let cot = |a: f64| a.cos() / a.sin();
            let s = cot(tp).powi(2) + cot(tm).powi(2) + 1.0 + cot(psi1).powi(2);
            let direction = basis[0].scale(SQRT_2 * cot(tp))
                + basis[1].scale(SQRT_2 * cot(tm))
                + basis[2]
                + basis[4].scale(cot(psi1));
            let phase = basis[3].scale(g.phi[0].unwrap_or(0.0)) + basis[5].scale(g.phi[1].unwrap_or(0.0));
            Ok(TrigForm {
                scale: g.d * SQRT_3 / s.sqrt(),
                direction,
                phase,
            })
        }
        Geometry::Planar(g) => {
            let (Some(psi1), Some(psi2)) = (g.psi[0], g.psi[1]) else {
                return Err(HexaError::Domain("planar angles undefined".into()));
            };
            if g.rho_k[0] <= ZERO_DIVISOR_REL * g.d {
                return Err(HexaError::Domain("rho1 vanishes".into()));
            }
            let cot = |a: f64| a.cos() / a.sin();
            let s = 1.0 + cot(psi1).powi(2) + cot(psi2).powi(2);
            let direction = basis[0] + basis[2].scale(cot(psi1)) + basis[4].scale(cot(psi2));
            let phase = basis[1].scale(g.phi[0].unwrap_or(0.0))
                + basis[3].scale(g.phi[1].unwrap_or(0.0))
                + basis[5].scale(g.phi[2].unwrap_or(0.0));
            Ok(TrigForm {
                scale: g.d * SQRT_3 / s.sqrt(),
                direction,
                phase,
            })
        }
    }
}

/// Constant of the polar modulus/amplitude relation, `2^(1/3) / sqrt(6)`.
pub fn polar_d_rho_constant() -> f64 {
    2f64.cbrt() / 6f64.sqrt()
}

/// Constant of the planar modulus/amplitude relation, `1 / sqrt(3)`.
pub const PLANAR_D_RHO_CONSTANT: f64 = INV_SQRT_3;

#[derive(Clone, Debug, PartialEq)]
pub enum DRhoCheck {
    Checked {
        d: f64,
        /// Modulus predicted from the amplitude and the angles.
        predicted: f64,
        constant: f64,
    },
    Skipped(String),
}

impl DRhoCheck {
    pub fn residual(&self) -> Option<f64> {
        match self {
            DRhoCheck::Checked { d, predicted, .. } => Some((d - predicted).abs()),
            DRhoCheck::Skipped(_) => None,
        }
    }
}

/// Modulus predicted from amplitude and angles, using the given leading constant.
pub fn predicted_modulus(g: &Geometry, constant: f64) -> Option<f64> {
    match g {
        Geometry::Polar(g) => {
            let (rho, tp, tm, psi1) = (g.rho?, g.theta_plus?, g.theta_minus?, g.psi1?);
            let (t_plus, t_minus, t_psi) = (tp.tan(), tm.tan(), psi1.tan());
            let tangent_product = t_plus * t_minus * t_psi * t_psi;
            if !(tangent_product > 0.0) || !tangent_product.is_finite() {
                return None;
            }
            let s = 1.0 / t_plus.powi(2) + 1.0 / t_minus.powi(2) + 1.0 + 1.0 / t_psi.powi(2);
            Some(rho * constant * tangent_product.powf(1.0 / 6.0) * s.sqrt())
        }
        Geometry::Planar(g) => {
            let (psi1, psi2) = (g.psi[0]?, g.psi[1]?);
            let (t1, t2) = (psi1.tan(), psi2.tan());
            if !(t1 > 0.0 && t2 > 0.0) || !(t1 * t2).is_finite() {
                return None;
            }
            let s = 1.0 + 1.0 / t1.powi(2) + 1.0 / t2.powi(2);
            Some(g.rho * constant * (t1 * t2).cbrt() * s.sqrt())
        }
    }
}

/// Checks the relation between modulus and amplitude.
pub fn check_d_rho_relation(u: &HexaNumber) -> DRhoCheck {
    let g = geometry(u);
    let constant = match u.variant() {
        Variant::Polar => polar_d_rho_constant(),
        Variant::Planar => PLANAR_D_RHO_CONSTANT,
    };
    if g.rho().is_none_or(|r| r <= 0.0) {
        return DRhoCheck::Skipped("amplitude vanishes or is undefined".into());
    }
    match predicted_modulus(&g, constant) {
        Some(predicted) => DRhoCheck::Checked {
            d: g.d(),
            predicted,
            constant,
        },
        None => DRhoCheck::Skipped("angles outside the range of the relation".into()),
    }
}

/// `[0, 2 pi)` reduction used for azimuthal angles.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}
