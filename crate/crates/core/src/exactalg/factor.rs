//! Factorization over the rationals.
//!
//! Squarefree decomposition first; each squarefree part is cleared to a
//! primitive integer polynomial, factored modulo the smallest suitable
//! prime, Hensel lifted past twice the Mignotte-style coefficient bound and
//! recombined by trial division (Zassenhaus).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{Field, ModPoly};
use super::poly::{squarefree_decomposition, Poly};
use super::rational::Rational;
use super::AlgError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    /// Monic irreducible factors with multiplicities, sorted by degree then
    /// by coefficient sequence.
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }

    /// Every monic divisor, as the product of factor powers. Order follows
    /// the mixed-radix counter over exponent vectors.
    pub fn monic_divisors(&self) -> Vec<Poly> {
        let mut out = vec![Poly::one()];
        for (f, m) in &self.factors {
            let mut next = Vec::with_capacity(out.len() * (*m as usize + 1));
            let powers: Vec<Poly> = (0..=*m).map(|k| f.pow(k)).collect();
            for d in &out {
                for pw in &powers {
                    next.push(d * pw);
                }
            }
            out = next;
        }
        out
    }
}

pub fn factor(a: &Poly) -> Result<Factorization, AlgError> {
    let (unit, parts) = squarefree_decomposition(a)?;
    let mut factors = Vec::new();
    for (part, mult) in parts {
        let (_, ints) = part.primitive_integer();
        for g in factor_squarefree_integer(&ints) {
            factors.push((Poly::from_integers(&g).monic(), mult));
        }
    }
    factors.sort_by(|(f, _), (g, _)| f.canonical_cmp(g));
    Ok(Factorization { unit, factors })
}

/// Factors a primitive squarefree integer polynomial of positive degree
/// into primitive irreducible integer polynomials.
fn factor_squarefree_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let deg = f.len() - 1;
    if deg <= 1 {
        return vec![f.to_vec()];
    }
    // Peel off the root at zero so the modular image keeps full degree.
    if f[0].is_zero() {
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        out.extend(factor_squarefree_integer(&f[1..]));
        return out;
    }
    let fp = choose_prime(f);
    let p = fp.p;
    let lc = f.last().unwrap().clone();
    let image = reduce(f, p);
    let lc_inv = fp.inv(image[deg]);
    let monic_image: ModPoly = image.iter().map(|c| c * lc_inv % p).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ p);
    let modular = fp.factor_squarefree(&monic_image, &mut rng);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    let bound = BigInt::from(2) * lc.abs() * coefficient_bound(f) + BigInt::one();
    let mut exponent = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= bound {
        modulus *= p;
        exponent += 1;
    }
    let lifted = hensel_lift(f, &modular, fp, exponent);
    recombine(f, lifted, &modulus)
}

fn reduce(f: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let mut out: ModPoly = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Smallest prime `p >= 3` not dividing the leading coefficient for which
/// the image stays squarefree.
fn choose_prime(f: &[BigInt]) -> Field {
    let lc = f.last().unwrap();
    let mut p = 3u64;
    loop {
        if is_prime(p) && !(lc % p).is_zero() {
            let fp = Field::new(p);
            let image = reduce(f, p);
            if fp.is_squarefree(&image) {
                return fp;
            }
        }
        p += 2;
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Bound on the coefficients of any integer factor: `2^deg * ||f||_2`.
fn coefficient_bound(f: &[BigInt]) -> BigInt {
    let sum_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = sum_sq.sqrt() + BigInt::one();
    norm << (f.len() - 1)
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn lift_int(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts the monic modular factorization of `lc(f)^-1 f` to monic factors
/// modulo `p^exponent`, one factor at a time by linear two-factor lifting.
fn hensel_lift(f: &[BigInt], factors: &[ModPoly], fp: Field, exponent: u32) -> Vec<Vec<BigInt>> {
    let p = BigInt::from(fp.p);
    let modulus = num_traits::pow(p.clone(), exponent as usize);
    let lc = f.last().unwrap();
    let lc_inv = lc.modinv(&modulus).expect("prime does not divide the leading coefficient");
    let mut target: Vec<BigInt> = f.iter().map(|c| (c * &lc_inv).mod_floor(&modulus)).collect();

    let mut out = Vec::with_capacity(factors.len());
    for i in 0..factors.len() - 1 {
        let g0 = &factors[i];
        let h0 = factors[i + 1..].iter().fold(vec![1u64], |acc, q| fp.mul_poly(&acc, q));
        let (g, h) = lift_pair(&target, g0, &h0, fp, exponent);
        out.push(g);
        target = h;
    }
    out.push(target);
    out
}

/// Given monic `target ≡ g0*h0 (mod p)` with `g0`, `h0` monic and coprime,
/// returns monic `g`, `h` with `target ≡ g*h (mod p^exponent)`.
fn lift_pair(
    target: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    fp: Field,
    exponent: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(fp.p);
    let (one, _, t) = fp.xgcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let mut g = lift_int(g0);
    let mut h = lift_int(h0);
    let mut pk = p.clone();
    for _ in 1..exponent {
        let next = &pk * &p;
        let gh = int_mul(&g, &h);
        let err: Vec<BigInt> = (0..target.len())
            .map(|i| {
                let d = &target[i] - gh.get(i).cloned().unwrap_or_default();
                let d = d.mod_floor(&next);
                debug_assert!((&d % &pk).is_zero());
                d / &pk
            })
            .collect();
        let e = reduce(&err, fp.p);
        if !e.is_empty() {
            // sigma*h0 + tau*g0 = e with deg sigma < deg g0
            let sigma = fp.rem(&fp.mul_poly(&t, &e), g0);
            let (tau, rest) = fp.divrem(&fp.sub_poly(&e, &fp.mul_poly(&sigma, h0)), g0);
            debug_assert!(rest.is_empty());
            add_scaled(&mut g, &sigma, &pk, &next);
            add_scaled(&mut h, &tau, &pk, &next);
        }
        pk = next;
    }
    let reduce_all = |v: Vec<BigInt>| v.into_iter().map(|c| c.mod_floor(&pk)).collect();
    (reduce_all(g), reduce_all(h))
}

fn add_scaled(target: &mut Vec<BigInt>, delta: &[u64], scale: &BigInt, modulus: &BigInt) {
    if target.len() < delta.len() {
        target.resize(delta.len(), BigInt::zero());
    }
    for (i, &d) in delta.iter().enumerate() {
        target[i] = (&target[i] + scale * BigInt::from(d)).mod_floor(modulus);
    }
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let mut v = v;
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let mut g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v;
    }
    if v.last().unwrap().sign() == Sign::Minus {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Exact integer division of polynomials; `None` unless `d` divides `f`
/// over the integers.
fn int_div_exact(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let dd = d.len() - 1;
    if f.len() < d.len() {
        return None;
    }
    let lc = d.last().unwrap();
    let mut rem = f.to_vec();
    let mut quot = vec![BigInt::zero(); f.len() - dd];
    for i in (0..quot.len()).rev() {
        let (q, r) = rem[i + dd].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if q.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            rem[i + j] -= &q * dc;
        }
        quot[i] = q;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

fn recombine(f: &[BigInt], mut modular: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut found = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    while 2 * size <= modular.len() {
        let mut hit = None;
        for subset in Subsets::new(modular.len(), size) {
            let lc = rest.last().unwrap().clone();
            let mut cand = vec![lc];
            for &i in &subset {
                cand = int_mul(&cand, &modular[i]);
                for c in cand.iter_mut() {
                    *c = c.mod_floor(modulus);
                }
            }
            let cand: Vec<BigInt> = cand.iter().map(|c| sym_mod(c, modulus)).collect();
            let cand = primitive(cand);
            if let Some(q) = int_div_exact(&rest, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                let mut i = 0;
                modular.retain(|_| {
                    let keep = !subset.contains(&i);
                    i += 1;
                    keep
                });
            }
            None => size += 1,
        }
    }
    if rest.len() > 1 {
        found.push(primitive(rest));
    }
    found
}

/// Lexicographic `k`-subsets of `0..n`.
struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Subsets { n, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::ratio;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn flagship_numerator_factors() {
        let a = &(&p(&[0, 1]).pow(3) * &p(&[6, 1]).pow(3)) * &p(&[36, -6, 1]).pow(3);
        let fac = factor(&a).unwrap();
        assert_eq!(fac.unit, ratio(1, 1));
        assert_eq!(fac.factors, vec![(p(&[0, 1]), 3), (p(&[6, 1]), 3), (p(&[36, -6, 1]), 3)]);
        // x^2 - 6x + 36 has discriminant 36 - 144 < 0
        assert_eq!(fac.expand(), a);
    }

    #[test]
    fn small_examples() {
        let fac = factor(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        let fac = factor(&p(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 0, 0, 0, 1]), 1)]);
        assert_eq!(factor(&Poly::zero()), Err(AlgError::ZeroInput));
    }

    #[test]
    fn x4_plus_1_has_no_low_degree_integer_factor() {
        // Brute force: monic quadratics x^2 + b x + c with c in {±1} and
        // any b, and linear factors x ± 1; none divide x^4 + 1.
        let f = p(&[1, 0, 0, 0, 1]);
        for c in [-1i64, 1] {
            assert!(!p(&[c, 1]).divides(&f));
            for b in -3i64..=3 {
                assert!(!p(&[c, b, 1]).divides(&f));
            }
        }
        assert_eq!(factor(&f).unwrap().factors.len(), 1);
    }

    #[test]
    fn rational_coefficients_and_unit() {
        // -3/2 (x - 1/2)(x^2 + 2)
        let a = (&p(&[-1, 2]) * &p(&[2, 0, 1])).scale(&ratio(-3, 4));
        let fac = factor(&a).unwrap();
        assert_eq!(fac.unit, ratio(-3, 2));
        assert_eq!(fac.factors, vec![(Poly::linear_root(ratio(1, 2)), 1), (p(&[2, 0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like_needs_recombination() {
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime.
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(factor(&f).unwrap().factors, vec![(f.clone(), 1)]);
        // (x^4 - 10x^2 + 1)(x^2 - 3)
        let g = &f * &p(&[-3, 0, 1]);
        let fac = factor(&g).unwrap();
        assert_eq!(fac.factors, vec![(p(&[-3, 0, 1]), 1), (f, 1)]);
    }

    #[test]
    fn cyclotomic_degree_72() {
        // x^72 - 1 = product of the cyclotomic polynomials Phi_d, d | 72
        let mut c = vec![0i64; 73];
        c[0] = -1;
        c[72] = 1;
        let fac = factor(&p(&c)).unwrap();
        assert_eq!(fac.factors.len(), 12);
        assert_eq!(fac.expand(), p(&c));
    }

    #[test]
    fn divisor_enumeration() {
        let a = &p(&[0, 1]).pow(2) * &p(&[1, 1]);
        let divisors = factor(&a).unwrap().monic_divisors();
        assert_eq!(divisors.len(), 6);
        assert!(divisors.iter().all(|d| d.divides(&a)));
    }
}
