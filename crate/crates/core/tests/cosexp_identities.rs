mod common;

use std::f64::consts::E;

use common::*;
use hexacomplex::cosexp::{self, Family, Method};
use hexacomplex::elementary;
use hexacomplex::{HexaNumber, Variant};

const FAMILIES: [Family; 2] = [Family::G, Family::F];

fn wide_grid() -> Vec<f64> {
    (0..=80).map(|i| -10.0 + 0.25 * i as f64).collect()
}

fn scale(y: f64) -> f64 {
    y.abs().exp().max(1.0)
}

#[test]
fn three_methods_agree() {
    for family in FAMILIES {
        for k in 0..6 {
            for y in wide_grid() {
                let closed = family.eval(k, y, Method::ClosedForm);
                let series = family.eval(k, y, Method::Series);
                let sum = family.eval(k, y, Method::SumForm);
                let tol = 1e-11 * scale(y);
                assert!((closed - series).abs() <= tol, "{family}{k}({y}) series {series} vs {closed}");
                assert!((closed - sum).abs() <= tol, "{family}{k}({y}) sum {sum} vs {closed}");
            }
        }
    }
}

#[test]
fn values_at_zero_and_first_term() {
    for family in FAMILIES {
        assert_eq!(family.eval(0, 0.0, Method::ClosedForm), 1.0);
        assert_eq!(family.eval(0, 0.0, Method::SumForm), 1.0);
        for k in 1..6 {
            assert!(family.eval(k, 0.0, Method::ClosedForm).abs() < 1e-16);
        }
    }
    assert_eq!(cosexp::g6_series(1, 0.7, 1), 0.7);
    assert_eq!(cosexp::f6_series(1, 0.7, 1), 0.7);
}

#[test]
fn parity() {
    for family in FAMILIES {
        for k in 0..6 {
            for y in wide_grid() {
                let (a, b) = (family.eval(k, y, Method::Series), family.eval(k, -y, Method::Series));
                let expected = if k % 2 == 0 { a } else { -a };
                assert!((b - expected).abs() <= 1e-12 * scale(y), "{family}{k} parity at {y}");
            }
        }
    }
}

#[test]
fn matches_series_oracles() {
    for y in wide_grid() {
        for k in 0..6 {
            let g = cosexp::g6(k, y);
            assert!((g - g6_complex(k, y.into()).re).abs() <= 1e-11 * scale(y));
            let f = cosexp::f6(k, y);
            assert!((f - f6_via_complex(k, y)).abs() <= 1e-11 * scale(y), "f{k}({y})");
        }
    }
}

#[test]
fn sum_identities() {
    for y in wide_grid() {
        let g: Vec<f64> = (0..6).map(|k| cosexp::g6(k, y)).collect();
        let f: Vec<f64> = (0..6).map(|k| cosexp::f6(k, y)).collect();
        let total: f64 = g.iter().sum();
        let alternating: f64 = g.iter().enumerate().map(|(k, v)| if k % 2 == 0 { *v } else { -v }).sum();
        assert!(close(total, y.exp(), 1e-11, y.exp()));
        assert!(close(alternating, (-y).exp(), 1e-11, (-y).exp()));

        let sum_g2: f64 = (0..6).map(|k| cosexp::g6_sumform(k, y).powi(2)).sum();
        let expected = (2.0 * y).cosh() / 3.0 + 2.0 * y.cosh() / 3.0;
        assert!(close(sum_g2, expected, 1e-11, expected), "g squares at {y}");

        let sum_f2: f64 = f.iter().map(|v| v * v).sum();
        let expected = 1.0 / 3.0 + 2.0 * (3f64.sqrt() * y).cosh() / 3.0;
        assert!(close(sum_f2, expected, 1e-11, expected), "f squares at {y}");
    }
    let at_one: f64 = (0..6).map(|k| cosexp::g6(k, 1.0)).sum();
    assert!((at_one - E).abs() < 1e-14);
}

#[test]
fn addition_theorems() {
    let grid: Vec<f64> = (0..20).map(|i| -3.0 + 6.0 * i as f64 / 19.0).collect();
    for family in FAMILIES {
        for k in 0..6 {
            for &y in &grid {
                for &z in &grid {
                    let lhs = family.eval(k, y + z, Method::ClosedForm);
                    let rhs = cosexp::addition_rhs(family, k, y, z);
                    assert!((lhs - rhs).abs() <= 1e-11 * scale(y + z).max(scale(y) * scale(z)), "{family}{k}({y}+{z})");
                }
            }
        }
    }
}

#[test]
fn derivative_chains_by_finite_difference() {
    let h = 1e-5;
    for family in FAMILIES {
        for k in 0..6 {
            let (target, sign) = match (family, k) {
                (Family::F, 0) => (5, -1.0),
                _ => ((k + 5) % 6, 1.0),
            };
            for i in 0..=40 {
                let y = -3.0 + 0.15 * i as f64;
                let d = (family.eval(k, y + h, Method::ClosedForm) - family.eval(k, y - h, Method::ClosedForm)) / (2.0 * h);
                let expected = sign * family.eval(target, y, Method::ClosedForm);
                assert!((d - expected).abs() <= 1e-8 * scale(y), "{family}{k}' at {y}: {d} vs {expected}");
            }
        }
    }
}

/// Series term of degree `n`: `Some(sign)` when present, with magnitude `1/n!`.
fn term_sign(family: Family, k: usize, n: usize) -> Option<i32> {
    if n < k || (n - k) % 6 != 0 {
        return None;
    }
    let p = (n - k) / 6;
    Some(if family == Family::F && p % 2 == 1 { -1 } else { 1 })
}

#[test]
fn derivative_chains_by_term_shift() {
    // d/dy of s y^(n+1)/(n+1)! is s y^n / n!: compare signs and supports exactly
    for family in FAMILIES {
        for k in 0..6 {
            let (target, sign) = match (family, k) {
                (Family::F, 0) => (5, -1),
                _ => ((k + 5) % 6, 1),
            };
            for n in 0..120 {
                let shifted = term_sign(family, k, n + 1);
                let expected = term_sign(family, target, n).map(|s| s * sign);
                assert_eq!(shifted, expected, "{family}{k} degree {n}");
            }
        }
    }
}

#[test]
fn power_identities() {
    for variant in VARIANTS {
        for y in [0.3, 1.0] {
            let base = cosexp::exp_basis(variant, 1, y);
            for l in [2, 3, 4] {
                let power = (1..l).fold(base, |acc, _| acc * base);
                let expected = cosexp::exp_basis(variant, 1, l as f64 * y);
                assert!(power.max_abs_diff(&expected) <= 1e-10 * (1.0 + expected.modulus()), "{variant} l={l} y={y}");
            }
        }
    }
}

#[test]
fn exp_basis_matches_exponential() {
    for variant in VARIANTS {
        for k in 1..6 {
            assert!(cosexp::exp_basis(variant, k, 0.0).max_abs_diff(&HexaNumber::one(variant)) < 1e-16);
            for y in [-2.0, -0.5, 0.3, 1.0, 2.5] {
                let direct = elementary::exp(&HexaNumber::basis(variant, k).scale(y));
                let combo = cosexp::exp_basis(variant, k, y);
                assert!(direct.max_abs_diff(&combo) <= 1e-11 * (1.0 + direct.modulus()), "{variant} h{k} y={y}");
                let oracle = exp_oracle(&HexaNumber::basis(variant, k).scale(y));
                assert!(oracle.max_abs_diff(&combo) <= 1e-11 * (1.0 + oracle.modulus()));
            }
        }
    }
    for y in [-1.5, 0.4, 2.0] {
        let polar = cosexp::exp_basis(Variant::Polar, 3, y);
        let expected = HexaNumber::new(Variant::Polar, [y.cosh(), 0.0, 0.0, y.sinh(), 0.0, 0.0]).unwrap();
        assert!(polar.max_abs_diff(&expected) < 1e-13);
        let planar = cosexp::exp_basis(Variant::Planar, 3, y);
        let expected = HexaNumber::new(Variant::Planar, [y.cos(), 0.0, 0.0, y.sin(), 0.0, 0.0]).unwrap();
        assert!(planar.max_abs_diff(&expected) < 1e-13);
    }
}

#[test]
fn three_dimensional_reductions() {
    for y in [-2.0, -0.7, 0.0, 0.9, 2.2] {
        // polar e^{h2 y} = g30 + h2 g31 + h4 g32
        let u = cosexp::exp_basis(Variant::Polar, 2, y);
        let x = u.components();
        let expected = [cosexp3(0, y, false), 0.0, cosexp3(1, y, false), 0.0, cosexp3(2, y, false), 0.0];
        for (a, b) in x.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12 * scale(y));
        }
        assert!((cosexp::g6(0, y) + cosexp::g6(3, y) - cosexp3(0, y, false)).abs() < 1e-12 * scale(y));
        // planar e^{h2 y}: components built from the alternating three-dimensional functions
        let u = cosexp::exp_basis(Variant::Planar, 2, y);
        let x = u.components();
        let expected = [cosexp3(0, y, true), 0.0, cosexp3(1, y, true), 0.0, cosexp3(2, y, true), 0.0];
        for (a, b) in x.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12 * scale(y), "planar h2 reduction at {y}");
        }
    }
}

#[test]
fn table_shape() {
    let csv = cosexp::table_csv(Family::G, &cosexp::Grid::default());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "y,c0,c1,c2,c3,c4,c5");
    assert_eq!(lines.len(), 162);
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 7));
    assert!(cosexp::Grid::new(1.0, 0.0, 0.1).is_err());
    assert!(cosexp::Grid::new(0.0, 1.0, 0.0).is_err());
}
