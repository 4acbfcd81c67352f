//! Polynomial relations between `s(q^k1)` and `s(q^k2)`.

use super::{CatalogEntry, GraphError};
use crate::exactalg::PolyOverPoly;
use crate::qseries::{eval_poly_at_laurent, GeneralLaurent, QSeries, SeriesError};
use crate::ratfun::RatFun;
use crate::relate::{degree_from_areas, find_all_relations, RelateError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularRelation {
    pub series_name: String,
    /// The series the two relations share on their left-hand sides.
    pub via: String,
    pub k1: u32,
    pub k2: u32,
    pub p: PolyOverPoly,
}

/// `P(x, y) = N1(x)·D2(y) − N2(y)·D1(x)`, content-reduced. When
/// `f1(s(q^k1)) = f2(s(q^k2))`, `P(s(q^k1), s(q^k2)) = 0`.
pub fn modular_polynomial(f1: &RatFun, k1: u32, f2: &RatFun, k2: u32) -> Result<PolyOverPoly, GraphError> {
    if k1 == k2 {
        return Err(GraphError::IdenticalK(k1));
    }
    let n1 = PolyOverPoly::from_outer(f1.num());
    let d1 = PolyOverPoly::from_outer(f1.den());
    let n2 = PolyOverPoly::from_inner(f2.num());
    let d2 = PolyOverPoly::from_inner(f2.den());
    Ok(n1.mul(&d2).sub(&n2.mul(&d1)).content_reduced())
}

/// Highest exponent through which `P(s(q^k1), s(q^k2))` vanishes, and the
/// certified precision of that value.
pub fn modular_vanishing_order(
    p: &PolyOverPoly,
    s: &QSeries,
    k1: u32,
    k2: u32,
) -> Result<(i64, i64), SeriesError> {
    let x = s.substitute_power(k1);
    let y = s.substitute_power(k2);
    let mut acc = GeneralLaurent::zero(crate::qseries::EXACT);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&x)?.add(&eval_poly_at_laurent(c, &y)?);
    }
    let upto = if acc.is_zero() { acc.prec() } else { acc.lead_exp() - 1 };
    Ok((upto, acc.prec()))
}

/// For every catalog series `s1` with two relations `s1(q^ra) = fa(s)`,
/// `s1(q^rb) = fb(s)` to the target `s`, the polynomial with
/// `P(s(q^rb), s(q^ra)) = 0`.
pub fn find_modular_relations(
    catalog: &[CatalogEntry],
    target: &str,
    e_max: u32,
) -> Result<Vec<ModularRelation>, GraphError> {
    let t = catalog
        .iter()
        .find(|c| c.name == target)
        .ok_or_else(|| GraphError::UnknownNode(target.to_string()))?;
    let mut out = Vec::new();
    for s1 in catalog.iter().filter(|c| c.name != target) {
        let Ok(Some(e)) = degree_from_areas(&s1.area, &t.area) else { continue };
        if e > e_max || s1.series.prec() < 2 * e as usize + 1 || t.series.prec() < 2 * e as usize + 1 {
            continue;
        }
        let relations = match find_all_relations(&s1.series, &t.series, e) {
            Ok(r) => r,
            Err(RelateError::InsufficientPrecision { .. }) => continue,
            Err(err) => return Err(GraphError::Verification(err.to_string())),
        };
        for (i, a) in relations.iter().enumerate() {
            for b in &relations[i + 1..] {
                let p = modular_polynomial(&a.f, b.r, &b.f, a.r)?;
                out.push(ModularRelation {
                    series_name: target.to_string(),
                    via: s1.name.clone(),
                    k1: b.r,
                    k2: a.r,
                    p,
                });
            }
        }
    }
    Ok(out)
}
