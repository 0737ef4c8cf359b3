//! Factorization of monic polynomials with 6-complex coefficients.
//!
//! In canonical coordinates a polynomial splits into independent component
//! polynomials: real ones for `v+`, `v-` (polar) and complex ones for every
//! pair. Any choice of one root per component and factor slot gives a root
//! `u_p` of the original polynomial, so factorizations are far from unique.
//!
//! Complex conjugate roots of a real component cannot appear in a linear
//! factor; they are grouped into monic quadratic factors instead.

mod roots;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{component_of, HexaNumber, Variant};
use crate::canonical::{self, Canonical};
use crate::error::{Component, HexaError, Result};

pub use roots::{eval_monic, monic_roots};

const SNAP_REAL_REL: f64 = 1e-10;
const DEDUP_TOL: f64 = 1e-9;
const REPEATED_ROOT_SEPARATION: f64 = 1e-6;

/// Monic polynomial `u^m + a1 u^(m-1) + ... + am`.
#[derive(Clone, Debug, PartialEq)]
pub struct HexaPolynomial {
    variant: Variant,
    coeffs: Vec<HexaNumber>,
}

impl HexaPolynomial {
    /// Monic polynomial from its lower coefficients `a1..am`.
    pub fn new(coeffs: Vec<HexaNumber>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| HexaError::Invalid("polynomial degree must be at least 1".into()))?;
        let variant = first.variant();
        if let Some(bad) = coeffs.iter().find(|c| c.variant() != variant) {
            return Err(HexaError::VariantMismatch {
                left: variant,
                right: bad.variant(),
            });
        }
        Ok(Self { variant, coeffs })
    }

    /// Normalizes `a0 u^m + a1 u^(m-1) + ...` by an invertible leading coefficient.
    pub fn from_leading(leading: &HexaNumber, rest: Vec<HexaNumber>) -> Result<Self> {
        let inv = leading.inverse()?;
        let mut coeffs = Vec::with_capacity(rest.len());
        for c in &rest {
            coeffs.push(c.try_mul(&inv)?);
        }
        Self::new(coeffs)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `a1..am`.
    pub fn coeffs(&self) -> &[HexaNumber] {
        &self.coeffs
    }

    pub fn eval(&self, u: &HexaNumber) -> Result<HexaNumber> {
        let mut acc = HexaNumber::one(self.variant);
        for c in &self.coeffs {
            acc = acc.try_mul(u)?.try_add(c)?;
        }
        Ok(acc)
    }

    /// Largest component difference between corresponding coefficients.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() || self.variant != other.variant {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    /// Largest coefficient modulus, at least 1 (the leading coefficient).
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(HexaNumber::modulus).fold(1.0, f64::max)
    }
}

impl fmt::Display for HexaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        write_power(f, m)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            let power = m - i - 1;
            if *c == HexaNumber::zero(self.variant) {
                continue;
            }
            write_signed_coefficient(f, c)?;
            if power > 0 {
                f.write_str(" ")?;
                write_power(f, power)?;
            }
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, power: usize) -> fmt::Result {
    match power {
        1 => f.write_str("u"),
        p => write!(f, "u^{p}"),
    }
}

/// ` + 2`, ` - 1` for real values, ` + (x)` otherwise.
fn write_signed_coefficient(f: &mut fmt::Formatter<'_>, c: &HexaNumber) -> fmt::Result {
    let c = c.round_sig(f.precision().unwrap_or(15));
    let x = c.components();
    if x[1..].iter().all(|&v| v == 0.0) {
        if x[0] < 0.0 {
            write!(f, " - {}", -x[0])
        } else {
            write!(f, " + {}", x[0])
        }
    } else {
        write!(f, " + ({c})")
    }
}

/// One canonical component of a polynomial: `v^m + c1 v^(m-1) + ... + cm`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentPolynomial {
    pub component: Component,
    /// `c1..cm`; purely real for `v+`, `v-`.
    pub coeffs: Vec<Complex64>,
}

impl ComponentPolynomial {
    pub fn is_real(&self) -> bool {
        matches!(self.component, Component::Plus | Component::Minus)
    }
}

/// Projection sums of one coefficient, in canonical order.
fn projection_sums(variant: Variant, a: &HexaNumber) -> Vec<Complex64> {
    let x = a.components();
    let sum = |angle: &dyn Fn(f64) -> f64| {
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, xp) in x.iter().enumerate() {
            let t = angle(p as f64);
            re += xp * t.cos();
            im += xp * t.sin();
        }
        Complex64::new(re, im)
    };
    match variant {
        Variant::Polar => {
            let plus = x.iter().sum::<f64>();
            let minus = x.iter().enumerate().map(|(p, v)| if p % 2 == 0 { *v } else { -v }).sum::<f64>();
            let mut out = vec![Complex64::new(plus, 0.0), Complex64::new(minus, 0.0)];
            for k in 1..=2 {
                out.push(sum(&|p| PI * k as f64 * p / 3.0));
            }
            out
        }
        Variant::Planar => (1..=3)
            .map(|k| sum(&|p| PI * (2 * k - 1) as f64 * p / 6.0))
            .collect(),
    }
}

fn component_list(variant: Variant) -> Vec<Component> {
    let reals = match variant {
        Variant::Polar => 2,
        Variant::Planar => 0,
    };
    let pairs = match variant {
        Variant::Polar => 2,
        Variant::Planar => 3,
    };
    (0..reals)
        .map(|i| component_of(variant, i))
        .chain((1..=pairs).map(Component::Pair))
        .collect()
}

/// Splits a polynomial into its canonical component polynomials.
pub fn decompose(p: &HexaPolynomial) -> Vec<ComponentPolynomial> {
    let sums: Vec<Vec<Complex64>> = p.coeffs.iter().map(|a| projection_sums(p.variant, a)).collect();
    component_list(p.variant)
        .into_iter()
        .enumerate()
        .map(|(slot, component)| ComponentPolynomial {
            component,
            coeffs: sums.iter().map(|s| s[slot]).collect(),
        })
        .collect()
}

/// All roots of a component polynomial, with multiplicity.
pub fn component_roots(cp: &ComponentPolynomial) -> Result<Vec<Complex64>> {
    monic_roots(&cp.coeffs)
}

/// A monic factor `u - root` or `u^2 + b u + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    Linear { root: HexaNumber },
    Quadratic { b: HexaNumber, c: HexaNumber },
}

impl Factor {
    /// Lower coefficients of the factor.
    pub fn coeffs(&self) -> Vec<HexaNumber> {
        match self {
            Factor::Linear { root } => vec![-*root],
            Factor::Quadratic { b, c } => vec![*b, *c],
        }
    }

    fn matches(&self, other: &Factor, tol: f64) -> bool {
        let (a, b) = (self.coeffs(), other.coeffs());
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.max_abs_diff(y) <= tol)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degree = self.coeffs().len();
        f.write_str("[")?;
        write_power(f, degree)?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.round_sig(f.precision().unwrap_or(15)) == HexaNumber::zero(c.variant()) {
                continue;
            }
            write_signed_coefficient(f, c)?;
            if degree - i - 1 > 0 {
                f.write_str(" u")?;
            }
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub variant: Variant,
    /// Quadratic factors first, then linear ones.
    pub factors: Vec<Factor>,
    /// Some component polynomial has roots closer than `1e-6`; enumeration then
    /// counts distinct assignments only.
    pub repeated_roots: bool,
}

impl Factorization {
    /// Roots `u_p` of the linear factors.
    pub fn roots(&self) -> Vec<HexaNumber> {
        self.factors
            .iter()
            .filter_map(|f| match f {
                Factor::Linear { root } => Some(*root),
                Factor::Quadratic { .. } => None,
            })
            .collect()
    }

    pub fn quadratic_count(&self) -> usize {
        self.factors.iter().filter(|f| matches!(f, Factor::Quadratic { .. })).count()
    }

    /// Same multiset of factors within `tol`.
    pub fn same_as(&self, other: &Factorization, tol: f64) -> bool {
        if self.factors.len() != other.factors.len() {
            return false;
        }
        let mut used = vec![false; other.factors.len()];
        self.factors.iter().all(|f| {
            match other.factors.iter().enumerate().position(|(i, g)| !used[i] && f.matches(g, tol)) {
                Some(i) => {
                    used[i] = true;
                    true
                }
                None => false,
            }
        })
    }
}

/// Bracketed product, e.g. `[u + 1][u - 1]`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.factors {
            match f.precision() {
                Some(p) => write!(f, "{factor:.p$}")?,
                None => write!(f, "{factor}")?,
            }
        }
        Ok(())
    }
}

/// Roots of one component, prepared for slot assignment.
struct ComponentRoots {
    real: bool,
    roots: Vec<Complex64>,
    /// Conjugate partner of each non-real root of a real component.
    partner: Vec<Option<usize>>,
}

impl ComponentRoots {
    fn prepare(cp: &ComponentPolynomial) -> Result<Self> {
        let mut roots = component_roots(cp)?;
        let m = roots.len();
        let mut partner = vec![None; m];
        if cp.is_real() {
            for r in roots.iter_mut() {
                if r.im.abs() <= SNAP_REAL_REL * (1.0 + r.norm()) {
                    *r = Complex64::new(r.re, 0.0);
                }
            }
            for i in 0..m {
                if roots[i].im <= 0.0 || partner[i].is_some() {
                    continue;
                }
                let target = roots[i].conj();
                let j = (0..m)
                    .filter(|&j| roots[j].im < 0.0 && partner[j].is_none())
                    .min_by(|&a, &b| {
                        (roots[a] - target)
                            .norm()
                            .total_cmp(&(roots[b] - target).norm())
                    });
                let Some(j) = j else {
                    return Err(HexaError::NonConvergence {
                        worst_residual: roots[i].im.abs(),
                    });
                };
                let mean = (roots[i] + roots[j].conj()) / 2.0;
                roots[i] = mean;
                roots[j] = mean.conj();
                partner[i] = Some(j);
                partner[j] = Some(i);
            }
            if let Some(i) = (0..m).find(|&i| roots[i].im != 0.0 && partner[i].is_none()) {
                return Err(HexaError::NonConvergence {
                    worst_residual: roots[i].im.abs(),
                });
            }
        }
        Ok(Self {
            real: cp.is_real(),
            roots,
            partner,
        })
    }

    fn conjugate_pairs(&self) -> usize {
        self.partner.iter().filter(|p| p.is_some()).count() / 2
    }

    fn has_repeated_roots(&self) -> bool {
        let r = &self.roots;
        (0..r.len()).any(|i| (i + 1..r.len()).any(|j| (r[i] - r[j]).norm() < REPEATED_ROOT_SEPARATION))
    }

    /// Whether `order` is an admissible assignment with `q` quadratic slots,
    /// in the normal form where each quadratic slot lists its lower index first.
    fn admissible(&self, order: &[usize], q: usize) -> bool {
        for s in 0..q {
            let (a, b) = (order[2 * s], order[2 * s + 1]);
            if a > b {
                return false;
            }
            if self.real {
                let both_real = self.roots[a].im == 0.0 && self.roots[b].im == 0.0;
                if !both_real && self.partner[a] != Some(b) {
                    return false;
                }
            }
        }
        !self.real || order[2 * q..].iter().all(|&i| self.roots[i].im == 0.0)
    }

    /// Admissible orderings, generated lazily in lexicographic order.
    fn orderings(&self, q: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        Permutations::new(self.roots.len()).filter(move |o| self.admissible(o, q))
    }
}

/// Lexicographic permutations of `0..n`.
struct Permutations {
    next: Option<Vec<usize>>,
}

impl Permutations {
    fn new(n: usize) -> Self {
        Self {
            next: Some((0..n).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut p = current.clone();
        let n = p.len();
        if n >= 2 {
            if let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) {
                let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("a larger element exists");
                p.swap(i, j);
                p[i + 1..].reverse();
                self.next = Some(p);
            }
        }
        Some(current)
    }
}

struct Prepared {
    variant: Variant,
    components: Vec<ComponentRoots>,
    degree: usize,
    quadratics: usize,
    repeated: bool,
}

fn prepare(p: &HexaPolynomial) -> Result<Prepared> {
    let components = decompose(p)
        .iter()
        .map(ComponentRoots::prepare)
        .collect::<Result<Vec<_>>>()?;
    let quadratics = components.iter().map(ComponentRoots::conjugate_pairs).max().unwrap_or(0);
    let repeated = components.iter().any(ComponentRoots::has_repeated_roots);
    Ok(Prepared {
        variant: p.variant,
        components,
        degree: p.degree(),
        quadratics,
        repeated,
    })
}

impl Prepared {
    fn assemble(&self, orders: &[Vec<usize>]) -> Factorization {
        let q = self.quadratics;
        let build = |values: &[Complex64]| {
            let mut reals = Vec::new();
            let mut pairs = Vec::new();
            for (c, v) in self.components.iter().zip(values) {
                if c.real {
                    reals.push(v.re);
                } else {
                    pairs.push(*v);
                }
            }
            canonical::from_canonical(&Canonical::from_parts(self.variant, &reals, &pairs))
        };
        let mut factors = Vec::with_capacity(self.degree - q);
        for s in 0..q {
            let (mut bs, mut cs) = (Vec::new(), Vec::new());
            for (c, order) in self.components.iter().zip(orders) {
                let (r1, r2) = (c.roots[order[2 * s]], c.roots[order[2 * s + 1]]);
                bs.push(-(r1 + r2));
                cs.push(r1 * r2);
            }
            factors.push(Factor::Quadratic {
                b: build(&bs),
                c: build(&cs),
            });
        }
        for pos in 2 * q..self.degree {
            let values: Vec<Complex64> = self
                .components
                .iter()
                .zip(orders)
                .map(|(c, order)| c.roots[order[pos]])
                .collect();
            factors.push(Factor::Linear { root: build(&values) });
        }
        Factorization {
            variant: self.variant,
            factors,
            repeated_roots: self.repeated,
        }
    }

    fn first_orders(&self) -> Vec<Vec<usize>> {
        self.components
            .iter()
            .map(|c| {
                c.orderings(self.quadratics)
                    .next()
                    .expect("conjugate pairing always leaves an admissible ordering")
            })
            .collect()
    }
}

/// One factorization of `p`.
pub fn factor(p: &HexaPolynomial) -> Result<Factorization> {
    let prepared = prepare(p)?;
    Ok(prepared.assemble(&prepared.first_orders()))
}

/// Distinct factorizations of `p`, at most `limit` of them.
///
/// The assignment of the first component is held fixed; every admissible
/// assignment of the remaining components is tried and duplicates (same
/// multiset of factors within `1e-9`) are dropped.
pub fn enumerate_factorizations(p: &HexaPolynomial, limit: usize) -> Result<Vec<Factorization>> {
    let prepared = prepare(p)?;
    let mut found: Vec<Factorization> = Vec::new();
    if limit == 0 {
        return Ok(found);
    }
    let q = prepared.quadratics;
    let first = prepared.first_orders();
    let choices: Vec<Vec<Vec<usize>>> = prepared.components[1..]
        .iter()
        .map(|c| c.orderings(q).collect())
        .collect();
    let mut index = vec![0usize; choices.len()];
    let tol = DEDUP_TOL * p.scale();
    loop {
        let mut orders = vec![first[0].clone()];
        orders.extend(index.iter().zip(&choices).map(|(&i, c)| c[i].clone()));
        let candidate = prepared.assemble(&orders);
        if !found.iter().any(|f| f.same_as(&candidate, tol)) {
            found.push(candidate);
            if found.len() >= limit {
                break;
            }
        }
        // odometer increment
        let mut pos = index.len();
        loop {
            if pos == 0 {
                return Ok(found);
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < choices[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }
    Ok(found)
}

/// Multiplies the factors back out.
pub fn expand(f: &Factorization) -> HexaPolynomial {
    let one = HexaNumber::one(f.variant);
    let mut poly = vec![one];
    for factor in &f.factors {
        let mut fp = vec![one];
        fp.extend(factor.coeffs());
        let mut out = vec![HexaNumber::zero(f.variant); poly.len() + fp.len() - 1];
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in fp.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        poly = out;
    }
    HexaPolynomial {
        variant: f.variant,
        coeffs: poly[1..].to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(variant: Variant, coeffs: &[&str]) -> HexaPolynomial {
        HexaPolynomial::new(coeffs.iter().map(|c| HexaNumber::parse(variant, c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn decompose_u2_minus_1() {
        let parts = decompose(&poly(Variant::Polar, &["0", "-1"]));
        assert_eq!(parts.len(), 4);
        for cp in &parts {
            assert!((cp.coeffs[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
            assert!(cp.coeffs[0].norm() < 1e-15);
        }
        let parts = decompose(&poly(Variant::Planar, &["0", "1"]));
        assert_eq!(parts.len(), 3);
        for cp in &parts {
            assert!((cp.coeffs[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn decompose_matches_canonical() {
        let p = poly(Variant::Planar, &["0.3 - 1.1 h1 + 2 h5"]);
        let c = canonical::to_canonical(&p.coeffs()[0]).to_array();
        let parts = decompose(&p);
        for (k, cp) in parts.iter().enumerate() {
            assert!((cp.coeffs[0].re - c[2 * k]).abs() < 1e-14);
            assert!((cp.coeffs[0].im - c[2 * k + 1]).abs() < 1e-14);
        }
    }

    #[test]
    fn counts_from_the_tables() {
        let all = enumerate_factorizations(&poly(Variant::Polar, &["0", "-1"]), 100).unwrap();
        assert_eq!(all.len(), 8);
        let all = enumerate_factorizations(&poly(Variant::Planar, &["0", "1"]), 100).unwrap();
        assert_eq!(all.len(), 4);
        let all = enumerate_factorizations(&poly(Variant::Polar, &["-2 + h1"]), 100).unwrap();
        assert_eq!(all.len(), 1);
        assert!(enumerate_factorizations(&poly(Variant::Polar, &["0", "-1"]), 3).unwrap().len() == 3);
    }

    #[test]
    fn polar_u2_plus_1_is_quadratic() {
        let f = factor(&poly(Variant::Polar, &["0", "1"])).unwrap();
        assert_eq!(f.quadratic_count(), 1);
        assert_eq!(f.factors.len(), 1);
        assert!(expand(&f).max_coeff_diff(&poly(Variant::Polar, &["0", "1"])) < 1e-12);
    }

    #[test]
    fn planar_u2_plus_1_has_h3() {
        let all = enumerate_factorizations(&poly(Variant::Planar, &["0", "1"]), 100).unwrap();
        let h3 = HexaNumber::basis(Variant::Planar, 3);
        let target = Factorization {
            variant: Variant::Planar,
            factors: vec![Factor::Linear { root: h3 }, Factor::Linear { root: -h3 }],
            repeated_roots: false,
        };
        assert!(all.iter().any(|f| f.same_as(&target, 1e-9)));
    }

    #[test]
    fn display_style() {
        let f = Factorization {
            variant: Variant::Polar,
            factors: vec![
                Factor::Linear { root: HexaNumber::real(Variant::Polar, -1.0) },
                Factor::Linear { root: HexaNumber::one(Variant::Polar) },
            ],
            repeated_roots: false,
        };
        assert_eq!(f.to_string(), "[u + 1][u - 1]");
        assert_eq!(poly(Variant::Polar, &["0", "-1"]).to_string(), "u^2 - 1");
    }

    #[test]
    fn repeated_roots_flagged() {
        let f = factor(&poly(Variant::Polar, &["-2", "1"])).unwrap();
        assert!(f.repeated_roots);
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(Permutations::new(3).count(), 6);
        assert_eq!(Permutations::new(1).count(), 1);
    }
}
