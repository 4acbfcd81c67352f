//! Decomposition of rational functions under composition.
//!
//! A function is moved to normal form by units, candidate inner components
//! are read off the monic divisors of the normalized numerator and
//! denominator, and each candidate is tested by solving a homogeneous linear
//! system for the outer component. Recursing on both sides yields complete
//! chains of indecomposable components.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::exactalg::linalg::nullspace;
use crate::exactalg::{factor, Poly, Rational};
use crate::ratfun::{
    automorphisms, homogeneous_basis, left_unit_between, to_normal_form, MoebiusUnit, RatFun, RatFunError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("function is not in normal form")]
    NotNormalForm,
    #[error("inner degree {inner} does not divide degree {outer} or is below 2")]
    DegreeMismatch { outer: usize, inner: usize },
    #[error("decompositions of different functions")]
    DifferentTarget,
    #[error("degree {0} is too small to decompose")]
    DegreeTooSmall(usize),
    #[error(transparent)]
    RatFun(#[from] RatFunError),
}

/// Monic divisor pair `(A, B)` of the normalized numerator and denominator,
/// read as the inner candidate `A/B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateComponent {
    pub a_part: Poly,
    pub b_part: Poly,
}

impl CandidateComponent {
    pub fn to_ratfun(&self) -> RatFun {
        RatFun::new(self.a_part.clone(), self.b_part.clone()).expect("monic denominator")
    }
}

/// `f = outer ∘ inner` with both parts of degree at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub outer: RatFun,
    pub inner: RatFun,
}

impl Decomposition {
    pub fn compose(&self) -> RatFun {
        self.outer.compose(&self.inner).expect("inner is not constant")
    }
}

/// Indecomposable components, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionChain {
    pub components: Vec<RatFun>,
}

impl DecompositionChain {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().map(RatFun::degree).collect()
    }

    pub fn compose(&self) -> RatFun {
        let mut it = self.components.iter().rev();
        let first = it.next().expect("nonempty chain").clone();
        it.fold(first, |acc, g| g.compose(&acc).expect("components are not constant"))
    }
}

/// All `(A, B)` with `A | fbar_N`, `B | fbar_D` monic, `A(0) = 0`,
/// `deg B < deg A`, `1 < deg A < deg fbar` and `deg A | deg fbar`; sorted by
/// `deg A`, then `A`, then `B`.
pub fn candidate_components(fbar: &RatFun) -> Result<Vec<CandidateComponent>, DecompError> {
    if !fbar.is_normal_form() {
        return Err(DecompError::NotNormalForm);
    }
    let n = fbar.degree();
    let mut num_divs = factor(fbar.num()).expect("nonzero").monic_divisors();
    let mut den_divs = factor(fbar.den()).expect("nonzero").monic_divisors();
    num_divs.retain(|a| {
        let m = a.degree().unwrap_or(0);
        m > 1 && m < n && n % m == 0 && a.constant_term() == Rational::default()
    });
    num_divs.sort_by(Poly::canonical_cmp);
    den_divs.sort_by(Poly::canonical_cmp);
    let mut out = Vec::new();
    for a in &num_divs {
        for b in den_divs.iter().filter(|b| b.degree_i64() < a.degree_i64()) {
            out.push(CandidateComponent { a_part: a.clone(), b_part: b.clone() });
        }
    }
    Ok(out)
}

/// The `g` with `f = g ∘ h`, if it exists.
///
/// Writing `g = G_N / G_D` with unknown coefficients of degree
/// `k = deg f / deg h`, the condition `f_N·Ĝ_D − f_D·Ĝ_N = 0` is linear and
/// homogeneous in those coefficients (`Ĝ` is the `h`-homogenization). Its
/// solution space has dimension at most one.
pub fn left_component(f: &RatFun, h: &RatFun) -> Result<Option<Decomposition>, DecompError> {
    let (n, m) = (f.degree(), h.degree());
    if m < 2 || n % m != 0 {
        return Err(DecompError::DegreeMismatch { outer: n, inner: m });
    }
    let k = n / m;
    let basis = homogeneous_basis(h, k);
    let mut columns: Vec<Poly> = basis.iter().map(|b| -&(f.den() * b)).collect();
    columns.extend(basis.iter().map(|b| f.num() * b));
    let rows = columns.iter().map(Poly::degree_i64).max().unwrap_or(-1) + 1;
    let matrix: Vec<Vec<Rational>> =
        (0..rows as usize).map(|i| columns.iter().map(|c| c.coeff(i)).collect()).collect();
    let kernel = nullspace(&matrix, 2 * (k + 1));
    let [v] = kernel.as_slice() else {
        return Ok(None);
    };
    let g_num = Poly::new(v[..=k].to_vec());
    let g_den = Poly::new(v[k + 1..].to_vec());
    if g_den.is_zero() {
        return Ok(None);
    }
    let g = RatFun::new(g_num, g_den)?;
    if g.degree() != k || g.compose(h)? != *f {
        return Ok(None);
    }
    Ok(Some(Decomposition { outer: g, inner: h.clone() }))
}

/// One representative of every class of decompositions of `f`; empty when
/// `f` is indecomposable.
pub fn decompose_one_level(f: &RatFun) -> Result<Vec<Decomposition>, DecompError> {
    let n = f.degree();
    if n < 2 {
        return Err(DecompError::DegreeTooSmall(n));
    }
    let (u, v, fbar) = to_normal_form(f)?;
    let candidates = candidate_components(&fbar)?;
    let found: Vec<Option<Decomposition>> = candidates
        .par_iter()
        .map(|c| left_component(&fbar, &c.to_ratfun()).expect("degree checked by candidates"))
        .collect();
    let (u_inv, v_inv) = (u.inverse(), v.inverse());
    let mut out: Vec<Decomposition> = Vec::new();
    for d in found.into_iter().flatten() {
        let d = Decomposition { outer: u_inv.compose_left(&d.outer), inner: v_inv.compose_right(&d.inner) };
        if !out.iter().any(|e| left_unit_between(&e.inner, &d.inner).is_some()) {
            out.push(d);
        }
    }
    Ok(out)
}

/// Whether `d2 = (d1.outer ∘ w⁻¹, w ∘ d1.inner)` for some unit `w`.
pub fn equivalent(d1: &Decomposition, d2: &Decomposition) -> Result<bool, DecompError> {
    if d1.compose() != d2.compose() {
        return Err(DecompError::DifferentTarget);
    }
    Ok(left_unit_between(&d1.inner, &d2.inner).is_some())
}

/// Componentwise unit equivalence: `c2[i] = w_(i-1) ∘ c1[i] ∘ w_i⁻¹`.
pub fn chains_equivalent(c1: &DecompositionChain, c2: &DecompositionChain) -> bool {
    if c1.degrees() != c2.degrees() {
        return false;
    }
    let mut cur = c1.components.clone();
    for i in (1..cur.len()).rev() {
        let Some(w) = left_unit_between(&cur[i], &c2.components[i]) else {
            return false;
        };
        cur[i - 1] = w.inverse().compose_right(&cur[i - 1]);
    }
    cur[0] == c2.components[0]
}

/// Every complete decomposition chain of `f` up to componentwise unit
/// equivalence, first representative kept.
pub fn all_chains(f: &RatFun) -> Result<Vec<DecompositionChain>, DecompError> {
    if f.is_constant() {
        return Err(DecompError::DegreeTooSmall(0));
    }
    let mut memo = HashMap::new();
    let chains = chains_of(f, &mut memo)?;
    Ok(chains.into_iter().map(|components| DecompositionChain { components }).collect())
}

fn chains_of(
    f: &RatFun,
    memo: &mut HashMap<RatFun, Vec<Vec<RatFun>>>,
) -> Result<Vec<Vec<RatFun>>, DecompError> {
    if let Some(hit) = memo.get(f) {
        return Ok(hit.clone());
    }
    let splits = if f.degree() < 2 { Vec::new() } else { decompose_one_level(f)? };
    let mut out: Vec<DecompositionChain> = Vec::new();
    if splits.is_empty() {
        out.push(DecompositionChain { components: vec![f.clone()] });
    }
    for d in &splits {
        let outer_chains = chains_of(&d.outer, memo)?;
        let inner_chains = chains_of(&d.inner, memo)?;
        for co in &outer_chains {
            for ci in &inner_chains {
                let candidate = DecompositionChain { components: co.iter().chain(ci).cloned().collect() };
                if !out.iter().any(|c| chains_equivalent(c, &candidate)) {
                    out.push(candidate);
                }
            }
        }
    }
    let result: Vec<Vec<RatFun>> = out.into_iter().map(|c| c.components).collect();
    memo.insert(f.clone(), result.clone());
    Ok(result)
}

/// Chains identified further under the symmetries of `f`: `c ~ c'` when
/// `c'` is equivalent to `c` with its innermost component precomposed by a
/// unit `σ` satisfying `f ∘ σ = f`.
#[derive(Clone, Debug)]
pub struct ChainClass {
    pub representative: DecompositionChain,
    pub members: Vec<DecompositionChain>,
}

pub fn chains_up_to_symmetry(f: &RatFun) -> Result<Vec<ChainClass>, DecompError> {
    let chains = all_chains(f)?;
    let symmetries = automorphisms(f);
    Ok(group_by_symmetry(chains, &symmetries))
}

pub fn group_by_symmetry(chains: Vec<DecompositionChain>, symmetries: &[MoebiusUnit]) -> Vec<ChainClass> {
    let mut classes: Vec<ChainClass> = Vec::new();
    for chain in chains {
        let home = classes.iter_mut().find(|class| {
            symmetries.iter().any(|sigma| {
                let mut moved = class.representative.clone();
                let last = moved.components.last_mut().expect("nonempty chain");
                *last = sigma.compose_right(last);
                chains_equivalent(&moved, &chain)
            })
        });
        match home {
            Some(class) => class.members.push(chain),
            None => classes.push(ChainClass { representative: chain.clone(), members: vec![chain] }),
        }
    }
    classes
}

/// For normal-form `f` and `inner`: `inner_N | f_N` and `inner_D | f_D`.
pub fn inner_divides(f: &RatFun, inner: &RatFun) -> bool {
    inner.num().divides(f.num()) && inner.den().divides(f.den())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use crate::ratfun::parse_ratfun;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    fn flagship() -> RatFun {
        rf("x^3*(x+6)^3*(x^2-6*x+36)^3/((x-3)^3*(x^2+3*x+9)^3)")
    }

    #[test]
    fn candidates_of_x4() {
        let c = candidate_components(&rf("x^4")).unwrap();
        assert_eq!(c, vec![CandidateComponent { a_part: rf("x^2").num().clone(), b_part: Poly::one() }]);
    }

    #[test]
    fn candidates_contain_flagship_inner_parts() {
        let c = candidate_components(&flagship()).unwrap();
        let has = |a: &str, b: &str| {
            let (a, b) = (rf(a).num().clone(), rf(b).num().clone());
            c.iter().any(|x| x.a_part == a && x.b_part == b)
        };
        assert!(has("x*(x^2-6*x+36)", "x^2+3*x+9"));
        assert!(has("x*(x+6)", "x-3"));
        assert!(c.iter().all(|x| x.a_part.divides(flagship().num())));
        let degrees: Vec<_> = c.iter().map(|x| x.a_part.degree().unwrap()).collect();
        assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn prime_degree_has_no_candidates() {
        assert!(candidate_components(&rf("x^5/(x+1)")).unwrap().is_empty());
        assert_eq!(candidate_components(&rf("(x^2+1)/x")), Err(DecompError::NotNormalForm));
    }

    #[test]
    fn left_component_examples() {
        let d = left_component(&flagship(), &rf("x*(x^2-6*x+36)/(x^2+3*x+9)")).unwrap().unwrap();
        assert_eq!(d.outer, rf("x^3*(x+24)/(x-3)"));
        assert_eq!(left_component(&rf("x^4"), &rf("x^2")).unwrap().unwrap().outer, rf("x^2"));
        assert_eq!(left_component(&rf("x^4+x"), &rf("x^2")).unwrap(), None);
        assert_eq!(
            left_component(&rf("x^4"), &rf("x^3")),
            Err(DecompError::DegreeMismatch { outer: 4, inner: 3 })
        );
    }

    #[test]
    fn x4_plus_x_brute_force() {
        // g = a x^2 + b x + c: g(x^2) has only even powers, so x^4 + x is unreachable;
        // rational g of degree 2 likewise: g(x^2) is even in x.
        let f = rf("x^4+x");
        let neg = f.compose(&rf("-x")).unwrap();
        assert_ne!(neg, f);
        assert!(decompose_one_level(&f).unwrap().is_empty());
    }

    #[test]
    fn one_level_examples() {
        let d = decompose_one_level(&rf("x^4")).unwrap();
        assert_eq!(d, vec![Decomposition { outer: rf("x^2"), inner: rf("x^2") }]);
        assert!(decompose_one_level(&rf("x^2+x+1")).unwrap().is_empty());
        assert_eq!(decompose_one_level(&rf("x+1")), Err(DecompError::DegreeTooSmall(1)));
    }

    #[test]
    fn flagship_one_level_splits() {
        let d = decompose_one_level(&flagship()).unwrap();
        let inner: Vec<usize> = d.iter().map(|x| x.inner.degree()).collect();
        assert_eq!(inner, vec![2, 3, 3, 4]);
        for x in &d {
            assert_eq!(x.compose(), flagship());
            assert!(inner_divides(&flagship(), &x.inner));
        }
        assert_eq!(d[0].inner, rf("x*(x+6)/(x-3)"));
        assert_eq!(d[0].outer, rf("x^3*(x-12)^3/(x-3)^3"));
        assert_eq!(d[1].inner, rf("x^3"));
        assert_eq!(d[2].inner, rf("x*(x^2-6*x+36)/(x^2+3*x+9)"));
        for i in 0..d.len() {
            for j in 0..d.len() {
                assert_eq!(equivalent(&d[i], &d[j]).unwrap(), i == j);
            }
        }
    }

    #[test]
    fn equivalence_by_explicit_unit() {
        let d1 = Decomposition { outer: rf("x^2"), inner: rf("x^2") };
        let d2 = Decomposition { outer: rf("x^2/4"), inner: rf("2*x^2") };
        assert!(equivalent(&d1, &d2).unwrap());
        assert!(equivalent(&d1, &d1).unwrap());
        let d3 = Decomposition { outer: rf("x^2"), inner: rf("x^3") };
        assert_eq!(equivalent(&d1, &d3), Err(DecompError::DifferentTarget));
    }

    #[test]
    fn chain_examples() {
        let chains = all_chains(&rf("x^8")).unwrap();
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].degrees(), vec![2, 2, 2]);
        let prime = rf("(x^5+3*x)/(x^2+1)");
        assert_eq!(all_chains(&prime).unwrap(), vec![DecompositionChain { components: vec![prime] }]);
    }

    #[test]
    fn non_normal_input() {
        // (x^2 + 1)^2 / x^2 = (x + 1/x)^2 ∘ ... = y^2 ∘ (x^2+1)/x
        let f = rf("(x^2+1)^2/x^2");
        let d = decompose_one_level(&f).unwrap();
        assert!(!d.is_empty());
        let target = Decomposition { outer: rf("x^2"), inner: rf("(x^2+1)/x") };
        assert!(d.iter().any(|x| equivalent(x, &target).unwrap()));
        for x in &d {
            assert_eq!(x.compose(), f);
        }
    }

    #[test]
    fn unit_twisted_chain_is_equivalent() {
        let w = MoebiusUnit::new(rat(2), rat(1), rat(1), rat(1)).unwrap();
        let c1 =
            DecompositionChain { components: vec![rf("x^3"), rf("x*(x-12)/(x-3)"), rf("x*(x+6)/(x-3)")] };
        let mut c2 = c1.clone();
        c2.components[2] = w.compose_left(&c2.components[2]);
        c2.components[1] = w.inverse().compose_right(&c2.components[1]);
        assert!(chains_equivalent(&c1, &c2));
        assert_eq!(c2.compose(), flagship());
    }

    #[test]
    fn flagship_chains() {
        let f = flagship();
        let chains = all_chains(&f).unwrap();
        let degrees: Vec<_> = chains.iter().map(|c| c.degrees()).collect();
        assert_eq!(degrees, vec![vec![3, 2, 2], vec![4, 3], vec![4, 3]]);
        for c in &chains {
            assert_eq!(c.compose(), f);
        }
        let classes = chains_up_to_symmetry(&f).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].representative.components[0], rf("x^3"));
        let heads: Vec<_> = classes[1].members.iter().map(|c| c.components[0].clone()).collect();
        assert_eq!(heads, vec![rf("x*(x+216)^3/(x-27)^3"), rf("x^3*(x+24)/(x-3)")]);
        assert_eq!(classes[1].members.len(), 2);
    }
}
