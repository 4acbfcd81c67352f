//! Univariate rational functions over the rationals.
//!
//! A [`RatFun`] is always stored reduced with a monic denominator, so two
//! equal functions have identical representations. Degree-1 functions are
//! the units under composition and are handled through [`MoebiusUnit`].

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::linalg::nullspace;
use crate::exactalg::{factor, poly_gcd, Poly, Rational};

mod parse;

pub use parse::{parse_ratfun, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFunError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inner function of a composition is constant")]
    ConstantInner,
    #[error("function is constant")]
    Constant,
    #[error("not a unit: degree {0}")]
    NotUnit(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// Value of a rational function at a point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Finite(Rational),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinity => None,
        }
    }
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RatFunError> {
        if den.is_zero() {
            return Err(RatFunError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFun { num, den: Poly::one() });
        }
        let g = poly_gcd(&num, &den).expect("denominator is nonzero");
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lc = den.leading_coeff().recip();
        Ok(RatFun { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn identity() -> Self {
        RatFun::from_poly(Poly::x())
    }

    /// Numerator and denominator given by integer coefficient lists,
    /// lowest degree first. Panics on a zero denominator.
    pub fn from_ints(num: &[i64], den: &[i64]) -> Self {
        RatFun::new(Poly::from_ints(num), Poly::from_ints(den)).expect("nonzero denominator")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Maximum of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// `deg num - deg den`; the order of the pole at infinity when positive.
    pub fn pole_order_at_infinity(&self) -> i64 {
        self.num.degree_i64() - self.den.degree_i64()
    }

    pub fn is_normal_form(&self) -> bool {
        self.num.degree_i64() > self.den.degree_i64() && self.num.constant_term().is_zero()
    }

    pub fn evaluate(&self, p: &Rational) -> Value {
        let d = self.den.eval(p);
        if d.is_zero() {
            debug_assert!(!self.num.eval(p).is_zero(), "reduced fraction");
            return Value::Infinity;
        }
        Value::Finite(self.num.eval(p) / d)
    }

    pub fn evaluate_at_infinity(&self) -> Value {
        match self.pole_order_at_infinity() {
            k if k > 0 => Value::Infinity,
            0 => Value::Finite(self.num.leading_coeff() / self.den.leading_coeff()),
            _ => Value::Finite(Rational::zero()),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RatFun) -> Result<RatFun, RatFunError> {
        if inner.is_constant() {
            return Err(RatFunError::ConstantInner);
        }
        let k = self.degree();
        let (n, d) = homogenized_pair(&self.num, &self.den, k, inner);
        RatFun::new(n, d)
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatFun::new(num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, RatFunError> {
        RatFun::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn pow(&self, e: u32) -> RatFun {
        RatFun { num: self.num.pow(e), den: self.den.pow(e) }
    }
}

/// `Σ p_i · hN^i · hD^(k-i)` for both `p = num` and `p = den`, sharing the
/// powers of the inner numerator and denominator.
pub(crate) fn homogenized_pair(num: &Poly, den: &Poly, k: usize, inner: &RatFun) -> (Poly, Poly) {
    let powers = homogeneous_basis(inner, k);
    let combine =
        |p: &Poly| p.coeffs().iter().zip(&powers).fold(Poly::zero(), |acc, (c, b)| &acc + &b.scale(c));
    (combine(num), combine(den))
}

/// `[hD^k, hN·hD^(k-1), …, hN^k]`.
pub(crate) fn homogeneous_basis(h: &RatFun, k: usize) -> Vec<Poly> {
    let mut num_pows = vec![Poly::one()];
    let mut den_pows = vec![Poly::one()];
    for i in 1..=k {
        num_pows.push(&num_pows[i - 1] * &h.num);
        den_pows.push(&den_pows[i - 1] * &h.den);
    }
    (0..=k).map(|i| &num_pows[i] * &den_pows[k - i]).collect()
}

impl fmt::Display for RatFun {
    /// Expanded numerator and denominator in descending powers; the
    /// denominator is omitted when it is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `x ↦ (a·x + b)/(c·x + d)` with `ad − bc ≠ 0`, scaled so the first
/// nonzero of `(a, b, c, d)` is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MoebiusUnit {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl MoebiusUnit {
    /// `None` when the matrix is singular.
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Option<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return None;
        }
        let first = [&a, &b, &c, &d].into_iter().find(|v| !v.is_zero()).expect("nonsingular").recip();
        Some(MoebiusUnit { a: a * &first, b: b * &first, c: c * &first, d: d * first })
    }

    pub fn identity() -> Self {
        MoebiusUnit::new(Rational::one(), Rational::zero(), Rational::zero(), Rational::one()).unwrap()
    }

    pub fn translation(t: Rational) -> Self {
        MoebiusUnit::new(Rational::one(), t, Rational::zero(), Rational::one()).unwrap()
    }

    pub fn coefficients(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == MoebiusUnit::identity()
    }

    pub fn to_ratfun(&self) -> RatFun {
        RatFun::new(
            Poly::new(vec![self.b.clone(), self.a.clone()]),
            Poly::new(vec![self.d.clone(), self.c.clone()]),
        )
        .expect("nonsingular unit")
    }

    /// Reads a degree-1 rational function as a unit.
    pub fn from_ratfun(f: &RatFun) -> Result<Self, RatFunError> {
        if f.degree() != 1 {
            return Err(RatFunError::NotUnit(f.degree()));
        }
        Ok(MoebiusUnit::new(f.num.coeff(1), f.num.coeff(0), f.den.coeff(1), f.den.coeff(0))
            .expect("reduced degree-1 function is invertible"))
    }

    /// Adjugate of the coefficient matrix.
    pub fn inverse(&self) -> MoebiusUnit {
        MoebiusUnit::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
            .expect("nonsingular")
    }

    /// `self ∘ other` as a matrix product.
    pub fn then_apply(&self, other: &MoebiusUnit) -> MoebiusUnit {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&other.a, &other.b, &other.c, &other.d);
        MoebiusUnit::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of nonsingular matrices")
    }

    pub fn apply(&self, p: &Value) -> Value {
        match p {
            Value::Infinity => {
                if self.c.is_zero() {
                    Value::Infinity
                } else {
                    Value::Finite(&self.a / &self.c)
                }
            }
            Value::Finite(x) => self.to_ratfun().evaluate(x),
        }
    }

    /// `self ∘ f`.
    pub fn compose_left(&self, f: &RatFun) -> RatFun {
        self.to_ratfun().compose(f).expect("unit outer function")
    }

    /// `f ∘ self`.
    pub fn compose_right(&self, f: &RatFun) -> RatFun {
        f.compose(&self.to_ratfun()).expect("unit inner function is not constant")
    }
}

impl fmt::Display for MoebiusUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratfun())
    }
}

pub fn unit_inverse(u: &MoebiusUnit) -> MoebiusUnit {
    u.inverse()
}

/// The unique unit `w` with `target = w ∘ source`, if any.
pub fn left_unit_between(source: &RatFun, target: &RatFun) -> Option<MoebiusUnit> {
    // target = (a·s + b)/(c·s + d):
    // a·sN·tD + b·sD·tD − c·sN·tN − d·sD·tN = 0
    let columns = [
        &source.num * &target.den,
        &source.den * &target.den,
        -&(&source.num * &target.num),
        -&(&source.den * &target.num),
    ];
    let rows = columns.iter().map(|p| p.degree_i64()).max().unwrap_or(-1) + 1;
    let matrix: Vec<Vec<Rational>> =
        (0..rows as usize).map(|i| columns.iter().map(|p| p.coeff(i)).collect()).collect();
    let kernel = nullspace(&matrix, 4);
    if kernel.len() != 1 {
        return None;
    }
    let v = &kernel[0];
    let w = MoebiusUnit::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())?;
    (w.compose_left(source) == *target).then_some(w)
}

/// Finds units `u`, `v` with `u ∘ f ∘ v` in normal form.
///
/// Scans `a = 0, 1, 2, …` for the first point with `f(a)` finite, then the
/// first `a' > a` with `f(a')` finite and different; `v` sends `∞ ↦ a`,
/// `0 ↦ a'` and `u` sends `f(a) ↦ ∞`, `f(a') ↦ 0`.
pub fn to_normal_form(f: &RatFun) -> Result<(MoebiusUnit, MoebiusUnit, RatFun), RatFunError> {
    if f.is_constant() {
        return Err(RatFunError::Constant);
    }
    if f.is_normal_form() {
        return Ok((MoebiusUnit::identity(), MoebiusUnit::identity(), f.clone()));
    }
    let mut a = 0i64;
    let fa = loop {
        if let Value::Finite(v) = f.evaluate(&Rational::from_integer(a.into())) {
            break v;
        }
        a += 1;
    };
    let mut a2 = a + 1;
    let fa2 = loop {
        if let Value::Finite(v) = f.evaluate(&Rational::from_integer(a2.into())) {
            if v != fa {
                break v;
            }
        }
        a2 += 1;
    };
    let (ar, a2r) = (Rational::from_integer(a.into()), Rational::from_integer(a2.into()));
    let v = MoebiusUnit::new(ar, a2r, Rational::one(), Rational::one()).expect("a != a'");
    let w = (&fa2 - &fa).recip();
    let u = MoebiusUnit::new(-w.clone(), Rational::one() + &w * &fa, Rational::one(), -fa)
        .expect("determinant is -1");
    let fbar = u.compose_left(&v.compose_right(f));
    assert!(fbar.num.degree_i64() > fbar.den.degree_i64(), "normalization leaves a pole at infinity");
    debug_assert!(fbar.is_normal_form());
    Ok((u, v, fbar))
}

/// Every unit `σ` over the rationals with `f ∘ σ = f`, sorted.
///
/// Each such `σ` maps a point `x0` into the fiber of `f(x0)`; three base
/// points with rational fibers pin `σ` down, and every candidate is checked
/// by composition.
pub fn automorphisms(f: &RatFun) -> Vec<MoebiusUnit> {
    if f.is_constant() {
        return Vec::new();
    }
    let at_infinity = f.evaluate_at_infinity();
    let mut bases = Vec::new();
    let mut x0 = 0i64;
    while bases.len() < 3 {
        let x = Rational::from_integer(x0.into());
        if let v @ Value::Finite(_) = f.evaluate(&x) {
            if v != at_infinity {
                bases.push((x, v.finite().unwrap().clone()));
            }
        }
        x0 += 1;
    }
    let fibers: Vec<Vec<Rational>> = bases.iter().map(|(_, value)| rational_fiber(f, value)).collect();
    let mut found = Vec::new();
    for y0 in &fibers[0] {
        for y1 in &fibers[1] {
            for y2 in &fibers[2] {
                if y0 == y1 || y0 == y2 || y1 == y2 {
                    continue;
                }
                let images = [y0, y1, y2];
                let Some(sigma) = unit_through_points(&bases, &images) else {
                    continue;
                };
                if sigma.compose_right(f) == *f && !found.contains(&sigma) {
                    found.push(sigma);
                }
            }
        }
    }
    found.sort_by_key(|u| u.to_string());
    found
}

/// Rational solutions `y` of `f(y) = value`.
fn rational_fiber(f: &RatFun, value: &Rational) -> Vec<Rational> {
    let p = &f.num - &f.den.scale(value);
    if p.is_zero() {
        return Vec::new();
    }
    factor(&p)
        .map(|fac| {
            fac.factors.iter().filter(|(g, _)| g.degree() == Some(1)).map(|(g, _)| -g.coeff(0)).collect()
        })
        .unwrap_or_default()
}

fn unit_through_points(bases: &[(Rational, Rational)], images: &[&Rational; 3]) -> Option<MoebiusUnit> {
    // a·x + b − c·x·y − d·y = 0
    let matrix: Vec<Vec<Rational>> = bases
        .iter()
        .zip(images)
        .map(|((x, _), y)| vec![x.clone(), Rational::one(), -(x * *y), -(*y).clone()])
        .collect();
    let kernel = nullspace(&matrix, 4);
    let v = kernel.first()?;
    MoebiusUnit::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, ratio};

    pub(crate) fn flagship() -> RatFun {
        let num = &(&Poly::from_ints(&[0, 1]).pow(3) * &Poly::from_ints(&[6, 1]).pow(3))
            * &Poly::from_ints(&[36, -6, 1]).pow(3);
        let den = &Poly::from_ints(&[-3, 1]).pow(3) * &Poly::from_ints(&[9, 3, 1]).pow(3);
        RatFun::new(num, den).unwrap()
    }

    #[test]
    fn construction_reduces() {
        assert_eq!(RatFun::from_ints(&[-1, 0, 1], &[-1, 1]), RatFun::from_ints(&[1, 1], &[1]));
        assert_eq!(RatFun::from_ints(&[0, 2], &[2]), RatFun::identity());
        assert_eq!(RatFun::new(Poly::x(), Poly::zero()), Err(RatFunError::ZeroDenominator));
        let f = flagship();
        assert_eq!(f.num().degree(), Some(12));
        assert_eq!(f.den().degree(), Some(9));
    }

    #[test]
    fn degrees() {
        assert_eq!(RatFun::from_ints(&[1, 1], &[1]).degree(), 1);
        assert_eq!(flagship().degree(), 12);
        assert_eq!(RatFun::from_ints(&[0, 6, 1], &[-3, 1]).degree(), 2);
    }

    #[test]
    fn flagship_chains_compose() {
        let cube = RatFun::from_ints(&[0, 0, 0, 1], &[1]);
        let mid = RatFun::from_ints(&[0, -12, 1], &[-3, 1]);
        let inner = RatFun::from_ints(&[0, 6, 1], &[-3, 1]);
        let chain1 = cube.compose(&mid).unwrap().compose(&inner).unwrap();
        assert_eq!(chain1, flagship());

        let outer = RatFun::from_ints(&[0, 0, 0, 24, 1], &[-3, 1]);
        let inner3 = RatFun::from_ints(&[0, 36, -6, 1], &[9, 3, 1]);
        assert_eq!(outer.compose(&inner3).unwrap(), flagship());
        assert_eq!(flagship().compose(&RatFun::identity()).unwrap(), flagship());
        assert_eq!(cube.compose(&RatFun::constant(rat(2))), Err(RatFunError::ConstantInner));
    }

    #[test]
    fn evaluation() {
        let inv = RatFun::from_ints(&[1], &[0, 1]);
        assert_eq!(inv.evaluate(&rat(0)), Value::Infinity);
        let sq = RatFun::from_ints(&[0, 0, 1], &[1]);
        assert_eq!(sq.evaluate(&rat(3)), Value::Finite(rat(9)));
        // 1·7^3·31^3 / ((-2)^3·13^3)
        let expected = ratio(7i64.pow(3) * 31i64.pow(3), -8 * 13i64.pow(3));
        assert_eq!(flagship().evaluate(&rat(1)), Value::Finite(expected));
        assert_eq!(sq.evaluate_at_infinity(), Value::Infinity);
        assert_eq!(inv.evaluate_at_infinity(), Value::Finite(rat(0)));
        assert_eq!(RatFun::from_ints(&[1, 3], &[0, 2]).evaluate_at_infinity(), Value::Finite(ratio(3, 2)));
    }

    #[test]
    fn normal_form_predicate() {
        assert!(RatFun::from_ints(&[0, 0, 1], &[1, 1]).is_normal_form());
        assert!(!RatFun::from_ints(&[1, 0, 1], &[0, 1]).is_normal_form());
        assert!(RatFun::from_ints(&[0, 6, 1], &[-3, 1]).is_normal_form());
    }

    #[test]
    fn normalization_round_trip() {
        let f = RatFun::from_ints(&[1, 0, 1], &[0, 1]);
        let (u, v, fbar) = to_normal_form(&f).unwrap();
        assert!(fbar.is_normal_form());
        let back = u.inverse().compose_left(&v.inverse().compose_right(&fbar));
        assert_eq!(back, f);

        let g = flagship();
        let (u, v, gbar) = to_normal_form(&g).unwrap();
        assert!(u.is_identity() && v.is_identity());
        assert_eq!(gbar, g);

        let h = RatFun::from_ints(&[1], &[0, 1]);
        let (_, _, hbar) = to_normal_form(&h).unwrap();
        assert_eq!(hbar.degree(), 1);
        assert!(hbar.is_normal_form());
        assert_eq!(to_normal_form(&RatFun::constant(rat(1))), Err(RatFunError::Constant));
    }

    #[test]
    fn units() {
        let u = MoebiusUnit::new(rat(2), rat(3), rat(5), rat(7)).unwrap();
        let back = u.then_apply(&u.inverse());
        assert!(back.is_identity());
        assert_eq!(MoebiusUnit::translation(rat(5)).inverse(), MoebiusUnit::translation(rat(-5)));
        let flip = MoebiusUnit::from_ratfun(&RatFun::from_ints(&[1], &[0, 1])).unwrap();
        assert_eq!(flip.inverse(), flip);
        assert_eq!(u.to_ratfun().compose(&u.inverse().to_ratfun()).unwrap(), RatFun::identity());
        assert!(MoebiusUnit::new(rat(1), rat(2), rat(2), rat(4)).is_none());
        // first nonzero coefficient scaled to one
        let v = MoebiusUnit::new(rat(0), rat(4), rat(2), rat(6)).unwrap();
        assert_eq!(v.coefficients()[1], &rat(1));
    }

    #[test]
    fn left_unit_recovery() {
        let h = RatFun::from_ints(&[0, 6, 1], &[-3, 1]);
        let w = MoebiusUnit::new(rat(2), rat(-1), rat(1), rat(4)).unwrap();
        let twisted = w.compose_left(&h);
        assert_eq!(left_unit_between(&h, &twisted), Some(w));
        let other = RatFun::from_ints(&[0, 0, 1], &[1]);
        assert_eq!(left_unit_between(&h, &other), None);
    }

    #[test]
    fn flagship_symmetry() {
        let auts = automorphisms(&flagship());
        let sigma = MoebiusUnit::new(rat(3), rat(18), rat(1), rat(-3)).unwrap();
        assert!(auts.contains(&MoebiusUnit::identity()));
        assert!(auts.contains(&sigma));
        for a in &auts {
            assert_eq!(a.compose_right(&flagship()), flagship());
        }
    }
}
