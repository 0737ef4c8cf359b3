//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library except to build or read `HexaNumber`s.

#![allow(dead_code)]

use hexacomplex::{HexaNumber, Variant};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Mat = [[f64; 6]; 6];

pub const VARIANTS: [Variant; 2] = [Variant::Polar, Variant::Planar];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hexa(rng: &mut impl Rng, variant: Variant, scale: f64) -> HexaNumber {
    let x: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-scale..scale));
    HexaNumber::new(variant, x).unwrap()
}

pub fn hexa_strategy(variant: Variant, scale: f64) -> impl Strategy<Value = HexaNumber> {
    prop::array::uniform6(-scale..scale).prop_map(move |x| HexaNumber::new(variant, x).unwrap())
}

pub fn variant_strategy() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Polar), Just(Variant::Planar)]
}

/// Representation matrix read off the printed row pattern: each row is the
/// previous one shifted right by one place, and in the planar case the entry
/// that wraps around to the front changes sign.
pub fn rep_matrix(u: &HexaNumber) -> Mat {
    let mut m = [[0.0; 6]; 6];
    m[0] = u.components();
    for r in 1..6 {
        let wrap = m[r - 1][5];
        m[r][0] = match u.variant() {
            Variant::Polar => wrap,
            Variant::Planar => -wrap,
        };
        for c in 1..6 {
            m[r][c] = m[r - 1][c - 1];
        }
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = (0..6).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_max_abs(a: &Mat) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn mat_max_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Product via the matrix representation: row 0 of `U(u) U(v)`.
pub fn matrix_product(u: &HexaNumber, v: &HexaNumber) -> HexaNumber {
    let m = matmul(&rep_matrix(u), &rep_matrix(v));
    HexaNumber::new(u.variant(), m[0]).unwrap()
}

/// Matrix exponential by scaling and squaring of a Taylor polynomial.
pub fn mat_exp(a: &Mat) -> Mat {
    let norm: f64 = a.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let s = 0.5f64.powi(squarings);
    let scaled: Mat = a.map(|r| r.map(|v| v * s));
    let mut result = [[0.0; 6]; 6];
    let mut term = [[0.0; 6]; 6];
    for i in 0..6 {
        result[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for n in 1..=30 {
        term = matmul(&term, &scaled).map(|r| r.map(|v| v / n as f64));
        for i in 0..6 {
            for j in 0..6 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// `exp(u)` read back from the first row of `exp(U(u))`.
pub fn exp_oracle(u: &HexaNumber) -> HexaNumber {
    HexaNumber::new(u.variant(), mat_exp(&rep_matrix(u))[0]).unwrap()
}

/// `sum_p z^(k+6p) / (k+6p)!` for complex `z`.
pub fn g6_complex(k: usize, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    for i in 1..=k {
        term = term * z / i as f64;
    }
    let mut sum = term;
    for n in k + 1..k + 200 {
        term = term * z / n as f64;
        if (n - k) % 6 == 0 {
            sum += term;
        }
    }
    sum
}

/// `Re[e^{-i pi k / 2} g_{6k}(i y)]`.
pub fn f6_via_complex(k: usize, y: f64) -> f64 {
    let phase = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * k as f64);
    (phase * g6_complex(k, Complex64::new(0.0, y))).re
}

/// Three-dimensional cosexponentials `sum_p s^p y^(k+3p) / (k+3p)!` with
/// `s = 1` (polar) or `s = -1` (planar), by direct summation.
pub fn cosexp3(k: usize, y: f64, alternate: bool) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 0..200usize {
        if n > 0 {
            term *= y / n as f64;
        }
        if n >= k && (n - k) % 3 == 0 {
            let p = (n - k) / 3;
            sum += if alternate && p % 2 == 1 { -term } else { term };
        }
    }
    sum
}

/// Scaled agreement check `|a - b| <= tol * (1 + scale)`.
pub fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + scale)
}

pub fn hexa(variant: Variant, text: &str) -> HexaNumber {
    HexaNumber::parse(variant, text).unwrap()
}
