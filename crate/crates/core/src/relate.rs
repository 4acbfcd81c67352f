//! Search for `f ∈ ℚ(t)` and `r` with `s1(q^r) = f(s2(q))`.
//!
//! For each `r` the monic ansatz
//! `f = (t^e + a_(e−1) t^(e−1) + … + a_0) / (t^(e−r) + b_(e−r−1) t^(e−r−1) + … + b_0)`
//! turns `T = s1(q^r)·D(s2) − N(s2)` into a series whose certified
//! coefficients are affine in the unknowns. Every certified coefficient
//! gives one equation.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::linalg::{solve, Solution};
use crate::exactalg::{Poly, Rational};
use crate::qseries::{eval_ratfun_at_series, GeneralLaurent, QSeries, SeriesError};
use crate::ratfun::RatFun;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelateError {
    #[error("linear system is consistent but underdetermined")]
    Underdetermined,
    #[error("r = {r}: {equations} certified equations for {unknowns} unknowns")]
    InsufficientPrecision { r: u32, equations: usize, unknowns: usize },
    #[error("areas must be positive")]
    NonpositiveArea,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationAnsatz {
    pub e: u32,
    pub r: u32,
}

impl RelationAnsatz {
    pub fn new(e: u32, r: u32) -> Self {
        assert!(1 <= r && r <= e, "need 1 <= r <= e");
        RelationAnsatz { e, r }
    }

    pub fn numerator_unknowns(&self) -> usize {
        self.e as usize
    }

    pub fn denominator_unknowns(&self) -> usize {
        (self.e - self.r) as usize
    }

    /// Unknowns are ordered `a_0 … a_(e−1), b_0 … b_(e−r−1)`.
    pub fn unknowns(&self) -> usize {
        self.numerator_unknowns() + self.denominator_unknowns()
    }

    pub fn instantiate(&self, values: &[Rational]) -> RatFun {
        let (a, b) = values.split_at(self.numerator_unknowns());
        let mut num = a.to_vec();
        num.push(Rational::one());
        let mut den = b.to_vec();
        den.push(Rational::one());
        RatFun::new(Poly::new(num), Poly::new(den)).expect("monic denominator")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub r: u32,
    pub f: RatFun,
    pub e: u32,
    pub verified_to: i64,
}

/// Unique solution, `None` when inconsistent.
pub fn solve_linear(sys: &LinearSystem) -> Result<Option<Vec<Rational>>, RelateError> {
    match solve(&sys.matrix, &sys.rhs) {
        Solution::Unique(v) => Ok(Some(v)),
        Solution::Inconsistent => Ok(None),
        Solution::Underdetermined { .. } => Err(RelateError::Underdetermined),
    }
}

/// `a2 / a1` when it is a positive integer.
pub fn degree_from_areas(a1: &Rational, a2: &Rational) -> Result<Option<u32>, RelateError> {
    if *a1 <= Rational::zero() || *a2 <= Rational::zero() {
        return Err(RelateError::NonpositiveArea);
    }
    let q = a2 / a1;
    if !q.is_integer() {
        return Ok(None);
    }
    Ok(u32::try_from(q.to_integer()).ok().filter(|&e| e > 0))
}

/// The equations of `T = s1(q^r)·D(s2) − N(s2)` for exponents `−e` through
/// the certified precision of `T`, with that precision.
pub fn build_system(
    s1: &QSeries,
    s2: &QSeries,
    ansatz: RelationAnsatz,
) -> Result<(LinearSystem, i64), RelateError> {
    let (e, r) = (ansatz.e as usize, ansatz.r);
    let s1r = s1.substitute_power(r);
    let s2l = s2.to_laurent();
    let mut powers = vec![GeneralLaurent::constant(Rational::one())];
    for i in 1..=e {
        let next = powers[i - 1].mul(&s2l)?;
        powers.push(next);
    }
    let dn = ansatz.denominator_unknowns();
    let constant = s1r.mul(&powers[dn])?.sub(&powers[e]);
    let mut columns: Vec<GeneralLaurent> = powers[..e].iter().map(GeneralLaurent::neg).collect();
    for p in &powers[..dn] {
        columns.push(s1r.mul(p)?);
    }
    let prec = columns.iter().map(GeneralLaurent::prec).fold(constant.prec(), i64::min);
    let lead = -(e as i64);
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for x in lead..=prec {
        matrix.push(columns.iter().map(|c| c.coeff(x)).collect());
        rhs.push(-constant.coeff(x));
    }
    Ok((LinearSystem { matrix, rhs }, prec))
}

/// Lowest `r` for which the degree-`e` ansatz has a unique solution that
/// verifies on every certified coefficient.
pub fn find_relation(s1: &QSeries, s2: &QSeries, e: u32) -> Result<Option<Relation>, RelateError> {
    if e == 0 {
        return Err(RelateError::ZeroDegree);
    }
    for r in 1..=e {
        if let Some(rel) = try_r(s1, s2, RelationAnsatz::new(e, r))? {
            return Ok(Some(rel));
        }
    }
    Ok(None)
}

/// Every `r` with a verified relation of degree `e`. Values of `r` whose
/// system is underdetermined are skipped rather than reported.
pub fn find_all_relations(s1: &QSeries, s2: &QSeries, e: u32) -> Result<Vec<Relation>, RelateError> {
    if e == 0 {
        return Err(RelateError::ZeroDegree);
    }
    let mut out = Vec::new();
    for r in 1..=e {
        match try_r(s1, s2, RelationAnsatz::new(e, r)) {
            Ok(Some(rel)) => out.push(rel),
            Ok(None) | Err(RelateError::Underdetermined) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

/// First degree in `1..=emax` admitting a relation. Underdetermined degrees
/// are skipped.
pub fn find_relation_up_to(s1: &QSeries, s2: &QSeries, emax: u32) -> Result<Option<Relation>, RelateError> {
    for e in 1..=emax {
        match find_relation(s1, s2, e) {
            Ok(Some(rel)) => return Ok(Some(rel)),
            Ok(None) | Err(RelateError::Underdetermined) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(None)
}

fn try_r(s1: &QSeries, s2: &QSeries, ansatz: RelationAnsatz) -> Result<Option<Relation>, RelateError> {
    let (sys, prec) = build_system(s1, s2, ansatz)?;
    let unknowns = ansatz.unknowns();
    if sys.rows() < unknowns + 2 {
        return Err(RelateError::InsufficientPrecision { r: ansatz.r, equations: sys.rows(), unknowns });
    }
    let solution =
        if unknowns == 0 { sys.rhs.iter().all(Zero::is_zero).then(Vec::new) } else { solve_linear(&sys)? };
    let Some(values) = solution else {
        return Ok(None);
    };
    let f = ansatz.instantiate(&values);
    let mut rel = Relation { r: ansatz.r, f, e: ansatz.e, verified_to: 0 };
    rel.verified_to = verify_relation(s1, s2, &rel);
    let certified = relation_difference(s1, s2, &rel).map_or(prec, |d| d.prec());
    Ok((rel.verified_to >= certified && rel.f.degree() == ansatz.e as usize).then_some(rel))
}

fn relation_difference(s1: &QSeries, s2: &QSeries, rel: &Relation) -> Result<GeneralLaurent, SeriesError> {
    Ok(s1.substitute_power(rel.r).sub(&eval_ratfun_at_series(&rel.f, s2)?))
}

/// Highest exponent through which `s1(q^r) − f(s2)` is known to vanish.
pub fn verify_relation(s1: &QSeries, s2: &QSeries, rel: &Relation) -> i64 {
    match relation_difference(s1, s2, rel) {
        Ok(d) if d.is_zero() => d.prec(),
        Ok(d) => d.lead_exp() - 1,
        Err(_) => -(rel.e as i64) - 1,
    }
}
