//! The 6-complex value type and its ring operations.
//!
//! Both algebras share the representation `u = x0 + h1 x1 + ... + h5 x5` and
//! differ only in the sign attached to a basis product whose index sum wraps
//! past `h5`:
//!
//! * polar:  `h_j h_k = h_{(j+k) mod 6}`
//! * planar: `h_j h_k = h_{j+k}` for `j + k <= 5`, `-h_{j+k-6}` otherwise
//!
//! In particular the planar unit `h3` squares to `-1`, which is what the planar
//! product formula, the planar `e^{h3 y} = cos y + h3 sin y` and the planar
//! factorization `u^2 + 1 = (u + h3)(u - h3)` all require.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::str::FromStr;

use crate::canonical::{self, Canonical};
use crate::error::{Component, HexaError, Result};

/// Relative threshold below which a canonical component counts as zero,
/// measured against the modulus of the number it belongs to.
pub const ZERO_DIVISOR_REL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Polar,
    Planar,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Polar => "polar",
            Variant::Planar => "planar",
        })
    }
}

impl FromStr for Variant {
    type Err = HexaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(Variant::Polar),
            "planar" => Ok(Variant::Planar),
            other => Err(HexaError::Invalid(format!("unknown variant `{other}`"))),
        }
    }
}

/// Result of multiplying two basis elements: `sign * h_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisProduct {
    pub index: usize,
    pub sign: i8,
}

/// Product of the basis elements `h_j` and `h_k` (with `h_0 = 1`).
///
/// # Panics
///
/// Panics if either index is larger than 5.
pub fn basis_mul(j: usize, k: usize, variant: Variant) -> BasisProduct {
    assert!(j < 6 && k < 6, "basis index out of range: h{j} h{k}");
    let sum = j + k;
    let sign = match variant {
        Variant::Polar => 1,
        Variant::Planar if sum >= 6 => -1,
        Variant::Planar => 1,
    };
    BasisProduct {
        index: sum % 6,
        sign,
    }
}

/// A polar or planar 6-complex number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexaNumber {
    variant: Variant,
    x: [f64; 6],
}

impl HexaNumber {
    /// Builds a number from its six real components, rejecting NaN and infinities.
    pub fn new(variant: Variant, x: [f64; 6]) -> Result<Self> {
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(HexaError::NonFinite { index, value });
        }
        Ok(Self { variant, x })
    }

    pub(crate) const fn from_raw(variant: Variant, x: [f64; 6]) -> Self {
        Self { variant, x }
    }

    pub const fn zero(variant: Variant) -> Self {
        Self::from_raw(variant, [0.0; 6])
    }

    pub const fn one(variant: Variant) -> Self {
        Self::real(variant, 1.0)
    }

    pub const fn real(variant: Variant, value: f64) -> Self {
        Self::from_raw(variant, [value, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    /// The basis element `h_k`, with `h_0 = 1`.
    pub fn basis(variant: Variant, k: usize) -> Self {
        assert!(k < 6, "basis index out of range: h{k}");
        let mut x = [0.0; 6];
        x[k] = 1.0;
        Self::from_raw(variant, x)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn components(&self) -> [f64; 6] {
        self.x
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite())
    }

    fn check_variant(&self, other: &Self) -> Result<()> {
        if self.variant == other.variant {
            Ok(())
        } else {
            Err(HexaError::VariantMismatch {
                left: self.variant,
                right: other.variant,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_variant(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_variant(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Full 36-term product driven by [`basis_mul`].
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_variant(other)?;
        let mut out = [0.0; 6];
        for (j, &a) in self.x.iter().enumerate() {
            for (k, &b) in other.x.iter().enumerate() {
                let p = basis_mul(j, k, self.variant);
                out[p.index] += f64::from(p.sign) * a * b;
            }
        }
        Ok(Self::from_raw(self.variant, out))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_raw(self.variant, self.x.map(|v| v * s))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = [0.0; 6];
        for (o, (a, b)) in out.iter_mut().zip(self.x.iter().zip(other.x.iter())) {
            *o = f(*a, *b);
        }
        Self::from_raw(self.variant, out)
    }

    /// Euclidean norm `d` of the six components.
    pub fn modulus(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.x
            .iter()
            .zip(other.x.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Rounds every component to `digits` significant digits and zeroes
    /// components below `10^-digits` times the modulus.
    pub fn round_sig(&self, digits: usize) -> Self {
        let digits = digits.clamp(1, 17);
        let floor = self.modulus() * 10f64.powi(-(digits as i32));
        let x = self.x.map(|v| {
            if v.abs() <= floor {
                0.0
            } else {
                format!("{v:.*e}", digits - 1).parse().unwrap_or(v)
            }
        });
        Self::from_raw(self.variant, x)
    }

    /// Multiplicative inverse, obtained by inverting every canonical component.
    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_tol(ZERO_DIVISOR_REL)
    }

    /// As [`HexaNumber::inverse`], with a caller-chosen zero-divisor threshold
    /// (relative to the modulus).
    pub fn inverse_with_tol(&self, rel_tol: f64) -> Result<Self> {
        let c = canonical::to_canonical(self);
        if let Some(component) = c.vanishing_component(rel_tol * self.modulus()) {
            return Err(HexaError::ZeroDivisor { component });
        }
        let inv = c.map(|v| 1.0 / v, |z| z.inv());
        Ok(canonical::from_canonical(&inv))
    }

    /// `self^n` for any integer `n`; negative powers go through the inverse.
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.variant);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// 6x6 real matrix whose product mirrors the algebra product; row 0 is `x`.
    pub fn to_matrix(&self) -> Matrix6 {
        let mut m = [[0.0; 6]; 6];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = if c >= r {
                    self.x[c - r]
                } else {
                    let v = self.x[c + 6 - r];
                    match self.variant {
                        Variant::Polar => v,
                        Variant::Planar => -v,
                    }
                };
            }
        }
        Matrix6(m)
    }

    /// Reads a number back from the first row of a representation matrix.
    pub fn from_matrix_row(variant: Variant, m: &Matrix6) -> Self {
        Self::from_raw(variant, m.0[0])
    }

    /// Conjugates the representation matrix by the rotation of the canonical axes.
    pub fn irreducible_rep(&self) -> IrreducibleRep {
        let t = canonical::rotation_matrix(self.variant);
        let conjugated = t * self.to_matrix() * t.transpose();
        IrreducibleRep::from_matrix(self.variant, conjugated)
    }
}

impl Index<usize> for HexaNumber {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.x[i]
    }
}

// The operator impls panic on mixed variants; use the `try_*` methods when the
// operands come from untrusted input.
impl Add for HexaNumber {
    type Output = HexaNumber;

    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("mixed-variant addition")
    }
}

impl Sub for HexaNumber {
    type Output = HexaNumber;

    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("mixed-variant subtraction")
    }
}

impl Mul for HexaNumber {
    type Output = HexaNumber;

    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("mixed-variant multiplication")
    }
}

impl Mul<f64> for HexaNumber {
    type Output = HexaNumber;

    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Neg for HexaNumber {
    type Output = HexaNumber;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Canonical text form: `a0 + a1 h1 + a2 h2 + a3 h3 + a4 h4 + a5 h5`, zero terms
/// omitted. A formatter precision, if given, applies to every coefficient.
impl fmt::Display for HexaNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let precision = f.precision();
        let coef = |v: f64| match precision {
            Some(p) => format!("{v:.p$}"),
            None => format!("{v}"),
        };
        let mut first = true;
        for (k, &v) in self.x.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let magnitude = if k > 0 && v.abs() == 1.0 { String::new() } else { coef(v.abs()) };
            let sign = match (first, v < 0.0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sign)?;
            f.write_str(&magnitude)?;
            if k > 0 {
                if !magnitude.is_empty() {
                    f.write_str(" ")?;
                }
                write!(f, "h{k}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl HexaNumber {
    /// Parses the canonical text form produced by `Display`.
    ///
    /// Coefficients may be omitted in front of a basis symbol (`h2` means `1 h2`).
    /// Repeated basis symbols are summed.
    pub fn parse(variant: Variant, text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let mut x = [0.0; 6];
        let mut i = 0;
        let mut first = true;
        skip_ws(&mut i);
        if i == chars.len() {
            return Err(HexaError::Invalid("empty number".into()));
        }
        while i < chars.len() {
            let mut sign = 1.0;
            match chars[i] {
                '+' => i += 1,
                '-' => {
                    sign = -1.0;
                    i += 1;
                }
                _ if first => {}
                c => return Err(HexaError::Invalid(format!("expected `+` or `-`, found `{c}`"))),
            }
            first = false;
            skip_ws(&mut i);
            let start = i;
            while i < chars.len() {
                let c = chars[i];
                let exp_sign =
                    (c == '+' || c == '-') && i > start && matches!(chars[i - 1], 'e' | 'E');
                if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            let number: String = chars[start..i].iter().collect();
            let value = if number.is_empty() {
                None
            } else {
                Some(
                    number
                        .parse::<f64>()
                        .map_err(|_| HexaError::Invalid(format!("bad number `{number}`")))?,
                )
            };
            skip_ws(&mut i);
            let index = if i < chars.len() && chars[i] == 'h' {
                let d = chars
                    .get(i + 1)
                    .and_then(|c| c.to_digit(10))
                    .filter(|d| (1..=5).contains(d))
                    .ok_or_else(|| HexaError::Invalid("expected basis symbol h1..h5".into()))?;
                i += 2;
                d as usize
            } else {
                0
            };
            let value = match (value, index) {
                (Some(v), _) => v,
                (None, k) if k > 0 => 1.0,
                (None, _) => return Err(HexaError::Invalid("missing coefficient".into())),
            };
            x[index] += sign * value;
            skip_ws(&mut i);
        }
        Self::new(variant, x)
    }
}

/// Dense 6x6 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix6(pub [[f64; 6]; 6]);

impl Matrix6 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Matrix6(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 6]; 6];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.0[c][r];
            }
        }
        Matrix6(m)
    }

    pub fn apply(&self, v: &[f64; 6]) -> [f64; 6] {
        let mut out = [0.0; 6];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            *o = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for col in 0..6 {
            let pivot = (col..6)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap_or(col);
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..6 {
                let factor = a[r][col] / a[col][col];
                for c in col..6 {
                    a[r][c] -= factor * a[col][c];
                }
            }
        }
        det
    }
}

impl Mul for Matrix6 {
    type Output = Matrix6;

    fn mul(self, rhs: Self) -> Self {
        let mut m = [[0.0; 6]; 6];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..6).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        Matrix6(m)
    }
}

impl fmt::Display for Matrix6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = f.width().unwrap_or(12);
        let prec = f.precision().unwrap_or(6);
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$.prec$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// One diagonal block of the irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Block {
    /// 1x1 block holding `v+` or `v-`.
    Scalar(f64),
    /// 2x2 block `[[v, ~v], [-~v, v]]`.
    Rotation { v: f64, v_tilde: f64 },
}

/// The matrix `T U T^-1` together with the blocks read off its diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleRep {
    pub variant: Variant,
    pub matrix: Matrix6,
    pub blocks: Vec<Block>,
    /// Largest magnitude found outside the diagonal blocks.
    pub off_block_max: f64,
    /// Largest violation of the `[[v, ~v], [-~v, v]]` pattern inside 2x2 blocks.
    pub block_shape_error: f64,
}

impl IrreducibleRep {
    fn from_matrix(variant: Variant, matrix: Matrix6) -> Self {
        let m = &matrix.0;
        // (start, size) of each diagonal block
        let layout: &[(usize, usize)] = match variant {
            Variant::Polar => &[(0, 1), (1, 1), (2, 2), (4, 2)],
            Variant::Planar => &[(0, 2), (2, 2), (4, 2)],
        };
        let mut in_block = [[false; 6]; 6];
        let mut blocks = Vec::new();
        let mut shape_err: f64 = 0.0;
        for &(s, n) in layout {
            for r in s..s + n {
                for c in s..s + n {
                    in_block[r][c] = true;
                }
            }
            if n == 1 {
                blocks.push(Block::Scalar(m[s][s]));
            } else {
                shape_err = shape_err
                    .max((m[s][s] - m[s + 1][s + 1]).abs())
                    .max((m[s][s + 1] + m[s + 1][s]).abs());
                blocks.push(Block::Rotation {
                    v: m[s][s],
                    v_tilde: m[s][s + 1],
                });
            }
        }
        let mut off: f64 = 0.0;
        for r in 0..6 {
            for c in 0..6 {
                if !in_block[r][c] {
                    off = off.max(m[r][c].abs());
                }
            }
        }
        Self {
            variant,
            matrix,
            blocks,
            off_block_max: off,
            block_shape_error: shape_err,
        }
    }

    /// The blocks as a canonical value, for comparison with [`canonical::to_canonical`].
    pub fn to_canonical(&self) -> Canonical {
        let pair = |b: &Block| match *b {
            Block::Rotation { v, v_tilde } => num_complex::Complex64::new(v, v_tilde),
            Block::Scalar(v) => num_complex::Complex64::new(v, 0.0),
        };
        let scalar = |b: &Block| match *b {
            Block::Scalar(v) => v,
            Block::Rotation { v, .. } => v,
        };
        match self.variant {
            Variant::Polar => Canonical::Polar(canonical::PolarCanonical {
                v_plus: scalar(&self.blocks[0]),
                v_minus: scalar(&self.blocks[1]),
                pairs: [pair(&self.blocks[2]), pair(&self.blocks[3])],
            }),
            Variant::Planar => Canonical::Planar(canonical::PlanarCanonical {
                pairs: [pair(&self.blocks[0]), pair(&self.blocks[1]), pair(&self.blocks[2])],
            }),
        }
    }
}

/// Which canonical component an index of the flattened component list refers to.
pub(crate) fn component_of(variant: Variant, slot: usize) -> Component {
    match (variant, slot) {
        (Variant::Polar, 0) => Component::Plus,
        (Variant::Polar, 1) => Component::Minus,
        (Variant::Polar, s) => Component::Pair(s - 1),
        (Variant::Planar, s) => Component::Pair(s + 1),
    }
}
