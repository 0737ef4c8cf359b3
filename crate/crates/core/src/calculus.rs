//! Numerical differentiation and contour integration of 6-complex functions.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::algebra::{HexaNumber, Variant};
use crate::canonical::{self, plane_offset};
use crate::elementary;
use crate::error::{HexaError, Result};

/// Step of the first-order central differences.
pub const FIRST_ORDER_STEP: f64 = 1e-5;
/// Step of the mixed second-order central differences.
pub const SECOND_ORDER_STEP: f64 = 1e-4;
/// Smallest canonical component of `u - u0` tolerated on a residue contour.
pub const RESIDUE_CLEARANCE: f64 = 1e-6;
/// Smallest distance of a projected path from the projected point.
pub const WINDING_CLEARANCE: f64 = 1e-9;

type Evaluator = dyn Fn(&HexaNumber) -> Result<HexaNumber> + Send + Sync;

/// A named function `f(u) = sum_k h_k P_k(x0, ..., x5)`.
pub struct FunctionUnderTest {
    pub name: String,
    /// Where the function is regular.
    pub domain: String,
    evaluator: Box<Evaluator>,
}

impl FunctionUnderTest {
    pub fn new(
        name: impl Into<String>,
        domain: impl Into<String>,
        f: impl Fn(&HexaNumber) -> Result<HexaNumber> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain: domain.into(),
            evaluator: Box::new(f),
        }
    }

    pub fn eval(&self, u: &HexaNumber) -> Result<HexaNumber> {
        (self.evaluator)(u)
    }

    pub fn exp() -> Self {
        Self::new("exp", "everywhere", |u| Ok(elementary::exp(u)))
    }

    pub fn sin() -> Self {
        Self::new("sin", "everywhere", |u| Ok(elementary::sin(u)))
    }

    pub fn cos() -> Self {
        Self::new("cos", "everywhere", |u| Ok(elementary::cos(u)))
    }

    /// `u^n` for `n >= 0`.
    pub fn power(n: u32) -> Self {
        Self::new(format!("u^{n}"), "everywhere", move |u| u.powi(n as i64))
    }

    pub fn constant(c: HexaNumber) -> Self {
        Self::new(format!("{c}"), "everywhere", move |_| Ok(c))
    }

    /// `exp`, `sin`, `cos`, `one`, `u`, `u2`, `u3`.
    pub fn by_name(name: &str, variant: Variant) -> Result<Self> {
        match name {
            "exp" => Ok(Self::exp()),
            "sin" => Ok(Self::sin()),
            "cos" => Ok(Self::cos()),
            "one" | "1" => Ok(Self::constant(HexaNumber::one(variant))),
            "u" => Ok(Self::power(1)),
            "u2" => Ok(Self::power(2)),
            "u3" => Ok(Self::power(3)),
            other => Err(HexaError::Invalid(format!(
                "unknown function '{other}' (expected exp, sin, cos, one, u, u2 or u3)"
            ))),
        }
    }
}

impl fmt::Debug for FunctionUnderTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionUnderTest")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// `[f(u0 + h dir) - f(u0 - h dir)] / (2 h dir)`.
pub fn directional_derivative(
    f: impl Fn(&HexaNumber) -> Result<HexaNumber>,
    u0: &HexaNumber,
    dir: &HexaNumber,
) -> Result<HexaNumber> {
    let inv_dir = dir.inverse().map_err(|e| {
        HexaError::Domain(format!("direction {dir} is not invertible ({e})"))
    })?;
    let h = FIRST_ORDER_STEP * u0.modulus().max(1.0) / dir.modulus();
    let step = dir.try_mul(&HexaNumber::real(dir.variant(), h))?;
    let forward = f(&u0.try_add(&step)?)?;
    let backward = f(&u0.try_sub(&step)?)?;
    Ok(forward.try_sub(&backward)?.try_mul(&inv_dir)?.scale(0.5 / h))
}

fn unit(variant: Variant, i: usize) -> HexaNumber {
    HexaNumber::basis(variant, i)
}

/// Sign of `h_i h_j` and whether the index sum wrapped.
fn product_sign(variant: Variant, i: usize, j: usize) -> f64 {
    match variant {
        Variant::Planar if i + j >= 6 => -1.0,
        _ => 1.0,
    }
}

/// Residuals of the component relations of an analytic function.
#[derive(Clone, Debug, PartialEq)]
pub struct CrReport {
    /// `jacobian[k][l] = dP_k / dx_l`.
    pub jacobian: [[f64; 6]; 6],
    /// Largest spread within one of the six first-order chains.
    pub first_order: f64,
    /// Largest spread among second partials that must coincide.
    pub second_order: f64,
}

impl CrReport {
    pub fn max_residual(&self) -> f64 {
        self.first_order.max(self.second_order)
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Checks the first- and second-order relations between the partial
/// derivatives of the components `P_k` at `u0`.
///
/// For an analytic `f` with derivative `a`, `dP_k/dx_l` equals the `h_k`
/// coefficient of `a h_l`, so every chain `dP_{c+l}/dx_l` (sign-corrected
/// on wraparound in the planar case) holds the same value `a_c`; second
/// partials depend on `(i, j)` only through `h_i h_j`.
pub fn cr_check(f: impl Fn(&HexaNumber) -> Result<HexaNumber>, u0: &HexaNumber) -> Result<CrReport> {
    let variant = u0.variant();
    let h = FIRST_ORDER_STEP;
    let mut jacobian = [[0.0; 6]; 6];
    for l in 0..6 {
        let step = unit(variant, l).scale(h);
        let diff = f(&u0.try_add(&step)?)?.try_sub(&f(&u0.try_sub(&step)?)?)?.scale(0.5 / h);
        for (k, row) in jacobian.iter_mut().enumerate() {
            row[l] = diff[k];
        }
    }
    let mut first_order = 0.0f64;
    for c in 0..6 {
        let chain: Vec<f64> = (0..6)
            .map(|l| product_sign(variant, c, l) * jacobian[(c + l) % 6][l])
            .collect();
        first_order = first_order.max(spread(&chain));
    }

    let h = SECOND_ORDER_STEP;
    let mut hessian = [[[0.0; 6]; 6]; 6];
    for i in 0..6 {
        for j in i..6 {
            let (ei, ej) = (unit(variant, i).scale(h), unit(variant, j).scale(h));
            let pp = f(&(*u0 + ei + ej))?;
            let pm = f(&(*u0 + ei - ej))?;
            let mp = f(&(*u0 - ei + ej))?;
            let mm = f(&(*u0 - ei - ej))?;
            let d = (pp - pm - mp + mm).scale(0.25 / (h * h));
            for (k, plane) in hessian.iter_mut().enumerate() {
                plane[i][j] = d[k];
                plane[j][i] = d[k];
            }
        }
    }
    let mut second_order = 0.0f64;
    for plane in &hessian {
        for m in 0..6 {
            let group: Vec<f64> = (0..6)
                .flat_map(|i| (0..6).map(move |j| (i, j)))
                .filter(|&(i, j)| (i + j) % 6 == m)
                .map(|(i, j)| product_sign(variant, i, j) * plane[i][j])
                .collect();
            second_order = second_order.max(spread(&group));
        }
    }
    Ok(CrReport {
        jacobian,
        first_order,
        second_order,
    })
}

/// A sampled curve `u(t_0), ..., u(t_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    variant: Variant,
    samples: Vec<HexaNumber>,
    closed: bool,
}

impl Path {
    /// Needs at least two samples of one variant; a closed path must end
    /// exactly where it starts.
    pub fn new(samples: Vec<HexaNumber>, closed: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(HexaError::Invalid(format!(
                "a path needs at least 2 samples (got {})",
                samples.len()
            )));
        }
        let variant = samples[0].variant();
        if let Some(bad) = samples.iter().find(|s| s.variant() != variant) {
            return Err(HexaError::VariantMismatch {
                left: variant,
                right: bad.variant(),
            });
        }
        if closed && samples.first() != samples.last() {
            return Err(HexaError::Invalid("closed path must end at its first sample".into()));
        }
        Ok(Self {
            variant,
            samples,
            closed,
        })
    }

    /// Straight segments through `points`, each split into `per_segment` pieces.
    pub fn polyline(points: &[HexaNumber], per_segment: usize) -> Result<Self> {
        let per_segment = per_segment.max(1);
        let mut samples = Vec::new();
        for w in points.windows(2) {
            let delta = w[1].try_sub(&w[0])?;
            for i in 0..per_segment {
                samples.push(w[0] + delta.scale(i as f64 / per_segment as f64));
            }
        }
        if let Some(last) = points.last() {
            samples.push(*last);
        }
        let closed = points.len() > 2 && points.first() == points.last();
        Self::new(samples, closed)
    }

    /// Circle of `radius` about `center` in the rotated `(xi_k, eta_k)` plane,
    /// `samples` segments long.
    pub fn circle(center: &HexaNumber, plane: usize, radius: f64, samples: usize) -> Result<Self> {
        Self::loop_in_planes(center, &[(plane, radius, 1)], samples)
    }

    /// Closed loop `center + sum_k r_k (cos(n_k t) a_k + sin(n_k t) b_k)`, where
    /// `a_k`, `b_k` are the unit vectors of the `(xi_k, eta_k)` axes and every
    /// entry of `planes` is `(k, r_k, n_k)`.
    pub fn loop_in_planes(center: &HexaNumber, planes: &[(usize, f64, i32)], samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(HexaError::Invalid("a loop needs at least 2 segments".into()));
        }
        let variant = center.variant();
        let t = canonical::rotation_matrix(variant);
        let mut axes = Vec::with_capacity(planes.len());
        for &(k, r, n) in planes {
            let row = plane_offset(variant, k)?;
            axes.push((
                HexaNumber::new(variant, t.0[row])?,
                HexaNumber::new(variant, t.0[row + 1])?,
                r,
                n as f64,
            ));
        }
        let mut points: Vec<HexaNumber> = (0..samples)
            .map(|i| {
                let s = TAU * i as f64 / samples as f64;
                axes.iter().fold(*center, |acc, (a, b, r, n)| {
                    acc + a.scale(r * (n * s).cos()) + b.scale(r * (n * s).sin())
                })
            })
            .collect();
        points.push(points[0]);
        Self::new(points, true)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn samples(&self) -> &[HexaNumber] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn length(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1] - w[0]).modulus()).sum()
    }

    /// Header `variant N closed`, then one sample of six reals per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.variant, self.samples.len(), self.closed);
        for s in &self.samples {
            let line: Vec<String> = s.components().iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl FromStr for Path {
    type Err = HexaError;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| HexaError::Invalid("empty path text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [variant, count, closed] = fields[..] else {
            return Err(HexaError::Invalid(format!("bad path header '{header}'")));
        };
        let variant: Variant = variant.parse()?;
        let count: usize = count
            .parse()
            .map_err(|_| HexaError::Invalid(format!("bad sample count '{count}'")))?;
        let closed: bool = closed
            .parse()
            .map_err(|_| HexaError::Invalid(format!("bad closed flag '{closed}'")))?;
        let mut samples = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            let values: Vec<f64> = line
                .split_whitespace()
                .map(|v| v.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| HexaError::Invalid(format!("sample {i}: {e}")))?;
            let x: [f64; 6] = values
                .try_into()
                .map_err(|_| HexaError::Invalid(format!("sample {i} does not have six values")))?;
            samples.push(HexaNumber::new(variant, x)?);
        }
        if samples.len() != count {
            return Err(HexaError::Invalid(format!(
                "header announces {count} samples, found {}",
                samples.len()
            )));
        }
        Path::new(samples, closed)
    }
}

/// Midpoint sum `sum f((u_i + u_{i+1}) / 2) (u_{i+1} - u_i)`.
pub fn line_integral(f: impl Fn(&HexaNumber) -> Result<HexaNumber>, path: &Path) -> Result<HexaNumber> {
    let mut acc = HexaNumber::zero(path.variant);
    for w in path.samples.windows(2) {
        let mid = (w[0] + w[1]).scale(0.5);
        acc = acc + f(&mid)? * (w[1] - w[0]);
    }
    Ok(acc)
}

/// Number of turns of the projection of `path - u0` on the `(xi_k, eta_k)` plane.
pub fn winding_number(path: &Path, u0: &HexaNumber, plane: usize) -> Result<i64> {
    if !path.closed {
        return Err(HexaError::Invalid("winding number needs a closed path".into()));
    }
    let offset = plane_offset(path.variant, plane)?;
    let t = canonical::rotation_matrix(path.variant);
    let mut total = 0.0;
    let mut previous: Option<f64> = None;
    for s in &path.samples {
        let xi = t.apply(&s.try_sub(u0)?.components());
        let (x, y) = (xi[offset], xi[offset + 1]);
        if x.hypot(y) < WINDING_CLEARANCE {
            return Err(HexaError::DegeneratePath(format!(
                "projection on plane {plane} passes through the point"
            )));
        }
        let angle = y.atan2(x);
        if let Some(p) = previous {
            let mut d = angle - p;
            if d > PI {
                d -= TAU;
            } else if d <= -PI {
                d += TAU;
            }
            total += d;
        }
        previous = Some(angle);
    }
    Ok((total / TAU).round() as i64)
}

/// Numeric contour integral of `f(u) / (u - u0)` next to the pole formula.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueComparison {
    pub numeric: HexaNumber,
    /// `2 pi f(u0) sum_k ~e_k int_k`.
    pub formula: HexaNumber,
    /// Winding number in each `(xi_k, eta_k)` plane.
    pub windings: Vec<i64>,
}

impl ResidueComparison {
    pub fn error(&self) -> f64 {
        self.numeric.max_abs_diff(&self.formula)
    }
}

pub fn residue_integral(
    f: impl Fn(&HexaNumber) -> Result<HexaNumber>,
    path: &Path,
    u0: &HexaNumber,
) -> Result<ResidueComparison> {
    if u0.variant() != path.variant {
        return Err(HexaError::VariantMismatch {
            left: path.variant,
            right: u0.variant(),
        });
    }
    let clear = |u: &HexaNumber| -> Result<HexaNumber> {
        let d = u.try_sub(u0)?;
        if let Some(component) = canonical::to_canonical(&d).vanishing_component(RESIDUE_CLEARANCE) {
            return Err(HexaError::DegeneratePath(format!(
                "canonical component {component} of u - u0 vanishes on the path"
            )));
        }
        d.inverse().map_err(|e| HexaError::DegeneratePath(e.to_string()))
    };
    for s in &path.samples {
        clear(s)?;
    }
    let numeric = line_integral(|u| Ok(f(u)? * clear(u)?), path)?;

    let basis = canonical::canonical_basis(path.variant);
    let planes = match path.variant {
        Variant::Polar => 2,
        Variant::Planar => 3,
    };
    let mut windings = Vec::with_capacity(planes);
    let mut tilde_sum = HexaNumber::zero(path.variant);
    for k in 1..=planes {
        let w = winding_number(path, u0, k)?;
        windings.push(w);
        let e_tilde = basis[plane_offset(path.variant, k)? + 1];
        tilde_sum = tilde_sum + e_tilde.scale(w as f64);
    }
    let formula = (f(u0)? * tilde_sum).scale(TAU);
    Ok(ResidueComparison {
        numeric,
        formula,
        windings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(variant: Variant, s: &str) -> HexaNumber {
        HexaNumber::parse(variant, s).unwrap()
    }

    #[test]
    fn derivative_of_exp_at_zero() {
        for v in [Variant::Polar, Variant::Planar] {
            let f = FunctionUnderTest::exp();
            let d = directional_derivative(|u| f.eval(u), &HexaNumber::zero(v), &HexaNumber::one(v)).unwrap();
            assert!(d.max_abs_diff(&HexaNumber::one(v)) < 1e-9);
            let d1 = directional_derivative(|u| f.eval(u), &HexaNumber::zero(v), &HexaNumber::basis(v, 1)).unwrap();
            assert!(d1.max_abs_diff(&d) < 1e-6);
        }
    }

    #[test]
    fn zero_divisor_direction_rejected() {
        let e_plus = canonical::canonical_basis(Variant::Polar)[0];
        let f = FunctionUnderTest::exp();
        assert!(matches!(
            directional_derivative(|u| f.eval(u), &HexaNumber::zero(Variant::Polar), &e_plus),
            Err(HexaError::Domain(_))
        ));
    }

    #[test]
    fn cr_of_constant_and_square() {
        let c = FunctionUnderTest::constant(num(Variant::Polar, "1 + h2"));
        let r = cr_check(|u| c.eval(u), &num(Variant::Polar, "0.2 - h4")).unwrap();
        assert_eq!(r.max_residual(), 0.0);
        let sq = FunctionUnderTest::power(2);
        let r = cr_check(|u| sq.eval(u), &num(Variant::Planar, "0.2 - 0.5 h4 + 0.3 h1")).unwrap();
        assert!(r.max_residual() < 1e-6, "{r:?}");
        // dP_0/dx_5 = -dP_1/dx_0 for planar u^2 with wraparound sign
        assert!((r.jacobian[0][5] + r.jacobian[1][0]).abs() < 1e-6);
    }

    #[test]
    fn antiderivative_of_u() {
        let u1 = num(Variant::Polar, "0.5 + 0.2 h1 - 0.3 h5");
        let path = Path::polyline(&[HexaNumber::zero(Variant::Polar), u1], 10).unwrap();
        let i = line_integral(|u| Ok(*u), &path).unwrap();
        assert!(i.max_abs_diff(&(u1 * u1).scale(0.5)) < 1e-12);
    }

    #[test]
    fn winding_counts() {
        let v = Variant::Polar;
        let u0 = num(v, "0.3 + 0.1 h2");
        let once = Path::circle(&u0, 1, 1.0, 64).unwrap();
        assert_eq!(winding_number(&once, &u0, 1).unwrap(), 1);
        // plane 2 sees only the center
        assert!(matches!(winding_number(&once, &u0, 2), Err(HexaError::DegeneratePath(_))));
        let twice = Path::loop_in_planes(&u0, &[(1, 1.0, 2)], 128).unwrap();
        assert_eq!(winding_number(&twice, &u0, 1).unwrap(), 2);
        let shifted = Path::circle(&(u0 + HexaNumber::basis(v, 2).scale(5.0)), 2, 0.5, 64).unwrap();
        assert_eq!(winding_number(&shifted, &u0, 2).unwrap(), 0);
    }

    #[test]
    fn path_text_round_trip() {
        let p = Path::circle(&num(Variant::Planar, "1 - h3"), 3, 0.7, 8).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("planar 9 true\n"));
        assert_eq!(text.parse::<Path>().unwrap(), p);
        assert!("polar 3 true\n1 2 3 4 5 6\n".parse::<Path>().is_err());
    }

    #[test]
    fn closed_path_checks() {
        let a = HexaNumber::zero(Variant::Polar);
        let b = HexaNumber::one(Variant::Polar);
        assert!(Path::new(vec![a, b], true).is_err());
        assert!(Path::new(vec![a], false).is_err());
    }
}
