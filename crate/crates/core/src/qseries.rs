//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! Every series carries its absolute precision: the largest exponent through
//! which its coefficients are certified. Coefficients past the stored ones
//! and up to the precision are zero.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::rational::format_rational;
use crate::exactalg::{Poly, Rational};
use crate::ratfun::RatFun;

/// Precision used for exactly known series such as constants.
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series that is zero to precision")]
    DivisionByZeroSeries,
    #[error("result has no certified coefficients")]
    EmptyPrecision,
    #[error("cancellation consumed all known coefficients")]
    PrecisionExhausted,
    #[error("exact quotient is not a finite series")]
    InfiniteExpansion,
    #[error("leading term of the target does not match the function")]
    LeadingMismatch,
    #[error("function has no pole at infinity")]
    NoPoleAtInfinity,
    #[error("series is zero to precision")]
    ZeroSeries,
    #[error("principal part is not exactly 1/q")]
    NotMonicPrincipal,
}

fn clamp(p: i64) -> i64 {
    p.min(EXACT)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralLaurent {
    lead_exp: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

impl GeneralLaurent {
    /// `coeffs[i]` is the coefficient of `q^(lead_exp + i)`. Leading and
    /// trailing zeros are stripped and terms past `prec` are dropped.
    pub fn new(mut lead_exp: i64, mut coeffs: Vec<Rational>, prec: i64) -> Self {
        let prec = clamp(prec);
        let keep = (prec - lead_exp + 1).max(0) as usize;
        coeffs.truncate(keep);
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..skip);
        lead_exp += skip as i64;
        if coeffs.is_empty() {
            lead_exp = prec.saturating_add(1);
        }
        GeneralLaurent { lead_exp, coeffs, prec }
    }

    pub fn zero(prec: i64) -> Self {
        Self::new(0, Vec::new(), prec)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(0, vec![c], EXACT)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        Self::new(exp, vec![c], EXACT)
    }

    pub fn lead_exp(&self) -> i64 {
        self.lead_exp
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    /// Coefficient of `q^exp`; zero outside the stored range.
    pub fn coeff(&self, exp: i64) -> Rational {
        if exp < self.lead_exp {
            return Rational::zero();
        }
        self.coeffs.get((exp - self.lead_exp) as usize).cloned().unwrap_or_default()
    }

    fn last_exp(&self) -> i64 {
        self.lead_exp + self.coeffs.len() as i64 - 1
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.lead_exp, self.coeffs.clone(), prec.min(self.prec))
    }

    /// Nonzero terms `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lead_exp + i as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let prec = self.prec.min(other.prec);
        if other.is_zero() {
            return self.truncate(prec);
        }
        if self.is_zero() {
            let o = if negate { other.neg() } else { other.clone() };
            return o.truncate(prec);
        }
        let lead = self.lead_exp.min(other.lead_exp);
        let end = self.last_exp().max(other.last_exp()).min(prec);
        let coeffs = (lead..=end)
            .map(|e| {
                let b = other.coeff(e);
                self.coeff(e) + if negate { -b } else { b }
            })
            .collect();
        Self::new(lead, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.lead_exp, self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(EXACT);
        }
        Self::new(self.lead_exp, self.coeffs.iter().map(|x| x * c).collect(), self.prec)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (la, lb) = (self.lead_exp, other.lead_exp);
        let prec = clamp(self.prec.saturating_add(lb).min(other.prec.saturating_add(la)));
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(prec));
        }
        let lead = la + lb;
        if prec < lead {
            return Err(SeriesError::EmptyPrecision);
        }
        let end = (self.last_exp() + other.last_exp()).min(prec);
        let mut coeffs = vec![Rational::zero(); (end - lead + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if let Some(slot) = coeffs.get_mut(i + j) {
                    *slot += a * b;
                } else {
                    break;
                }
            }
        }
        Ok(Self::new(lead, coeffs, prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let Some(b0) = other.leading_coeff() else {
            return Err(SeriesError::DivisionByZeroSeries);
        };
        let lb = other.lead_exp;
        let la = if self.is_zero() { self.prec.saturating_add(1) } else { self.lead_exp };
        let prec =
            clamp(self.prec.saturating_sub(lb).min(other.prec.saturating_sub(2 * lb).saturating_add(la)));
        if self.is_zero() {
            return Ok(Self::zero(prec));
        }
        let lead = la - lb;
        if prec < lead {
            return Err(SeriesError::EmptyPrecision);
        }
        if other.coeffs.len() == 1 {
            let inv = b0.recip();
            return Ok(Self::new(lead, self.coeffs.iter().map(|c| c * &inv).collect(), prec));
        }
        if prec == EXACT {
            return Err(SeriesError::InfiniteExpansion);
        }
        let n = (prec - lead + 1) as usize;
        let inv = b0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for t in 0..n {
            let mut acc = self.coeffs.get(t).cloned().unwrap_or_default();
            for (u, b) in other.coeffs.iter().enumerate().skip(1).take(t) {
                if !b.is_zero() {
                    acc -= b * &out[t - u];
                }
            }
            out.push(acc * &inv);
        }
        Ok(Self::new(lead, out, prec))
    }

    pub fn pow(&self, e: u32) -> Result<Self, SeriesError> {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `q ↦ q^r`; a series known through `q^p` becomes known through
    /// `q^(r·p)`.
    pub fn substitute_power(&self, r: u32) -> Self {
        assert!(r >= 1, "substitution exponent must be positive");
        let r64 = r as i64;
        let mut coeffs = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * r as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * r as usize] = c.clone();
        }
        let prec = if self.is_exact() { EXACT } else { clamp(self.prec.saturating_mul(r64)) };
        if self.is_zero() {
            return Self::zero(prec);
        }
        Self::new(self.lead_exp * r64, coeffs, prec)
    }

    /// The `t` with `self = t(q^m)`, when `m` divides every exponent.
    pub fn compress(&self, m: u32) -> Option<Self> {
        let m64 = m as i64;
        if m == 0 || self.terms().any(|(e, _)| e % m64 != 0) {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(Integer::div_floor(&self.prec, &m64)));
        }
        let coeffs = self.coeffs.iter().step_by(m as usize).cloned().collect();
        let prec = if self.is_exact() { EXACT } else { Integer::div_floor(&self.prec, &m64) };
        Some(Self::new(self.lead_exp / m64, coeffs, prec))
    }
}

impl fmt::Display for GeneralLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = if c < &Rational::zero() { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let monomial = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if monomial.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{}*{monomial}", format_rational(&mag))?;
            }
        }
        if !self.is_exact() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(q^{})", self.prec + 1)?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `1/q + c_0 + c_1 q + … + c_prec q^prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// `coeffs[k]` is the coefficient of `q^k`; must be nonempty.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Self::new(self.coeffs[..=prec.min(self.prec())].to_vec())
    }

    pub fn to_laurent(&self) -> GeneralLaurent {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::one());
        coeffs.extend(self.coeffs.iter().cloned());
        GeneralLaurent::new(-1, coeffs, self.prec() as i64)
    }

    pub fn from_laurent(s: &GeneralLaurent) -> Result<Self, SeriesError> {
        if s.lead_exp() != -1 || !s.leading_coeff().is_some_and(One::is_one) || s.prec() < 0 {
            return Err(SeriesError::NotMonicPrincipal);
        }
        if s.is_exact() {
            let last = s.last_exp().max(0);
            return Ok(Self::new((0..=last).map(|k| s.coeff(k)).collect()));
        }
        Ok(Self::new((0..=s.prec()).map(|k| s.coeff(k)).collect()))
    }

    pub fn substitute_power(&self, r: u32) -> GeneralLaurent {
        self.to_laurent().substitute_power(r)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_laurent().fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn series_arith(
    a: &GeneralLaurent,
    b: &GeneralLaurent,
    op: SeriesOp,
) -> Result<GeneralLaurent, SeriesError> {
    match op {
        SeriesOp::Add => Ok(a.add(b)),
        SeriesOp::Sub => Ok(a.sub(b)),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Div => a.div(b),
    }
}

pub fn eval_poly_at_laurent(p: &Poly, s: &GeneralLaurent) -> Result<GeneralLaurent, SeriesError> {
    let mut acc = GeneralLaurent::zero(EXACT);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(s)?.add(&GeneralLaurent::constant(c.clone()));
    }
    Ok(acc)
}

pub fn eval_ratfun_at_laurent(f: &RatFun, s: &GeneralLaurent) -> Result<GeneralLaurent, SeriesError> {
    let num = eval_poly_at_laurent(f.num(), s)?;
    let den = eval_poly_at_laurent(f.den(), s)?;
    num.div(&den).map_err(|e| match e {
        SeriesError::DivisionByZeroSeries | SeriesError::EmptyPrecision => SeriesError::PrecisionExhausted,
        other => other,
    })
}

pub fn eval_ratfun_at_series(f: &RatFun, s: &QSeries) -> Result<GeneralLaurent, SeriesError> {
    eval_ratfun_at_laurent(f, &s.to_laurent())
}

/// The series `s = 1/q + c_0 + …` with `f(s) = target`.
///
/// Writing `E(s) = N(s) − target·D(s)`, the coefficient of `E` at
/// `q^(T − n)` is linear in `c_(T−1)` with pivot `d·lc(N)` once the lower
/// coefficients are fixed, so the powers of `s` are built one column at a
/// time.
pub fn inner_series_solve(f: &RatFun, target: &GeneralLaurent) -> Result<QSeries, SeriesError> {
    inner_series_solve_to(f, target, usize::MAX)
}

/// As [`inner_series_solve`], stopping once `q^max_prec` is reached.
pub fn inner_series_solve_to(
    f: &RatFun,
    target: &GeneralLaurent,
    max_prec: usize,
) -> Result<QSeries, SeriesError> {
    let (num, den) = (f.num(), f.den());
    let n = num.degree().unwrap_or(0);
    let m = den.degree().unwrap_or(0);
    if num.is_zero() || n <= m {
        return Err(SeriesError::NoPoleAtInfinity);
    }
    let d = (n - m) as i64;
    let lc = num.leading_coeff();
    if target.lead_exp() != -d || target.leading_coeff() != Some(&lc) || target.prec() < -d {
        return Err(SeriesError::LeadingMismatch);
    }
    if target.is_exact() {
        return Err(SeriesError::InfiniteExpansion);
    }
    let tgt = |a: usize| target.coeff(-d + a as i64);
    let last_t = ((target.prec() + d) as usize).min(max_prec.saturating_add(1));
    let pivot = Rational::from_integer(d.into()) * &lc;
    // powers[i][t] is the coefficient of q^(t - i) in s^i
    let mut powers: Vec<Vec<Rational>> = (0..=n).map(|_| Vec::with_capacity(last_t + 1)).collect();
    for p in powers.iter_mut() {
        p.push(Rational::one());
    }
    let mut s: Vec<Rational> = vec![Rational::one()];
    for t in 1..=last_t {
        s.push(Rational::zero());
        powers[0].push(Rational::zero());
        for i in 1..=n {
            let mut acc = Rational::zero();
            for a in 0..=t {
                if !s[a].is_zero() {
                    acc += &s[a] * &powers[i - 1][t - a];
                }
            }
            powers[i].push(acc);
        }
        let mut residual = Rational::zero();
        for (i, c) in num.coeffs().iter().enumerate() {
            if let Some(idx) = (t + i).checked_sub(n) {
                if !c.is_zero() {
                    residual += c * &powers[i][idx];
                }
            }
        }
        for (j, c) in den.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let Some(top) = (t + j).checked_sub(m) else { continue };
            let mut inner = Rational::zero();
            for a in 0..=top {
                inner += tgt(a) * &powers[j][top - a];
            }
            residual -= c * inner;
        }
        let c_new = -residual / &pivot;
        for (i, p) in powers.iter_mut().enumerate().skip(1) {
            p[t] += Rational::from_integer(i.into()) * &c_new;
        }
        s[t] = c_new;
    }
    Ok(QSeries::new(s.split_off(1)))
}

/// Largest `m` with `s = t(q^m)`; 1 when there is no compression.
pub fn power_support(s: &GeneralLaurent) -> Result<u32, SeriesError> {
    if s.is_zero() {
        return Err(SeriesError::ZeroSeries);
    }
    let lead = s.lead_exp();
    let g = s.terms().fold(lead.unsigned_abs(), |g, (e, _)| g.gcd(&(e - lead).unsigned_abs()));
    Ok(if g == 0 { 1 } else { g as u32 })
}
