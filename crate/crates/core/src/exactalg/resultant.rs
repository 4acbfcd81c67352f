//! Polynomials whose coefficients are polynomials in a second variable, and
//! their Sylvester resultant computed by fraction-free elimination.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{gcd_of_integers, lcm_of_denominators, Rational};
use super::AlgError;

/// `Σ coeffs[i](y) · x^i`; the highest stored coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyOverPoly {
    coeffs: Vec<Poly>,
}

impl PolyOverPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        PolyOverPoly { coeffs }
    }

    /// Embeds a univariate polynomial in `x` with constant coefficients.
    pub fn from_outer(p: &Poly) -> Self {
        PolyOverPoly::new(p.coeffs().iter().cloned().map(Poly::constant).collect())
    }

    /// Embeds a univariate polynomial in `y` as a constant in `x`.
    pub fn from_inner(p: &Poly) -> Self {
        PolyOverPoly::new(vec![p.clone()])
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &PolyOverPoly) -> PolyOverPoly {
        if self.is_zero() || other.is_zero() {
            return PolyOverPoly::default();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PolyOverPoly::new(out)
    }

    pub fn sub(&self, other: &PolyOverPoly) -> PolyOverPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Poly::zero();
        PolyOverPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&zero);
                    let b = other.coeffs.get(i).unwrap_or(&zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> PolyOverPoly {
        PolyOverPoly::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.coeffs.get(i).map(|p| p.coeff(j)).unwrap_or_else(Rational::zero)
    }

    /// Scales to integer coefficients with trivial content and a positive
    /// leading coefficient (highest `x` power, then highest `y` power).
    pub fn content_reduced(&self) -> PolyOverPoly {
        if self.is_zero() {
            return self.clone();
        }
        let all: Vec<&Rational> = self.coeffs.iter().flat_map(|p| p.coeffs()).collect();
        let den = lcm_of_denominators(all.iter().copied());
        let nums: Vec<_> =
            all.iter().map(|c| (*c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut content = gcd_of_integers(&nums);
        let lead = self.coeffs.last().unwrap().leading_coeff();
        if lead < Rational::zero() {
            content = -content;
        }
        self.scale(&Rational::new(den, content))
    }

    /// Substitutes polynomial values: `Σ coeffs[i](y_value) x_value^i` where
    /// both arguments are given by an evaluator on polynomials.
    pub fn evaluate_with<T, FI, FO>(&self, eval_inner: FI, outer_power: FO, zero: T) -> T
    where
        T: Clone + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
        FI: Fn(&Poly) -> T,
        FO: Fn(usize) -> T,
    {
        self.coeffs.iter().enumerate().fold(zero, |acc, (i, c)| acc + eval_inner(c) * outer_power(i))
    }

    /// Specializes the outer variable, leaving a polynomial in `y`.
    pub fn eval_outer(&self, x: &Rational) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| &acc.scale(x) + c)
    }
}

impl fmt::Display for PolyOverPoly {
    /// Sum of `c*x^i*y^j` terms, highest `x` power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            for (j, a) in c.coeffs().iter().enumerate().rev() {
                if a.is_zero() {
                    continue;
                }
                terms.push((a.clone(), i, j));
            }
        }
        for (k, (a, i, j)) in terms.iter().enumerate() {
            let negative = *a < Rational::zero();
            let mag = if negative { -a.clone() } else { a.clone() };
            if negative {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (*i == 0 && *j == 0) {
                factors.push(super::rational::format_rational(&mag));
            }
            for (var, e) in [("x", *i), ("y", *j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Determinant of the Sylvester matrix of `a` and `b` in the outer
/// variable; Bareiss elimination keeps every entry in `Q[y]`.
pub fn resultant(a: &PolyOverPoly, b: &PolyOverPoly) -> Result<Poly, AlgError> {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return Err(AlgError::ZeroOuter);
    };
    if m == 0 && n == 0 {
        return Ok(Poly::one());
    }
    if m == 0 {
        return Ok(a.coeffs[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(b.coeffs[0].pow(m as u32));
    }
    let size = m + n;
    let mut rows: Vec<Vec<Poly>> = Vec::with_capacity(size);
    for shift in 0..n {
        rows.push(sylvester_row(a, shift, size));
    }
    for shift in 0..m {
        rows.push(sylvester_row(b, shift, size));
    }
    Ok(bareiss_determinant(rows))
}

/// Row with the coefficients of `p` from highest to lowest power, starting
/// at column `shift`.
fn sylvester_row(p: &PolyOverPoly, shift: usize, size: usize) -> Vec<Poly> {
    let mut row = vec![Poly::zero(); size];
    for (k, c) in p.coeffs.iter().rev().enumerate() {
        row[shift + k] = c.clone();
    }
    row
}

/// Fraction-free Gaussian elimination; every division is exact in `Q[y]`.
pub fn bareiss_determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = Rational::one();
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn outer(c: &[i64]) -> PolyOverPoly {
        PolyOverPoly::from_outer(&Poly::from_ints(c))
    }

    #[test]
    fn linear_convention() {
        // Res(x - 3, x - 5) = 3 - 5
        let r = resultant(&outer(&[-3, 1]), &outer(&[-5, 1])).unwrap();
        assert_eq!(r, Poly::constant(rat(-2)));
    }

    #[test]
    fn sylvester_four_by_four() {
        let r = resultant(&outer(&[1, 0, 1]), &outer(&[-2, 0, 1])).unwrap();
        assert_eq!(r, Poly::constant(rat(9)));
    }

    #[test]
    fn common_root_in_second_variable() {
        let y = Poly::x();
        let a = PolyOverPoly::new(vec![-&y, Poly::one()]);
        let b = PolyOverPoly::new(vec![-&(&y * &y), Poly::zero(), Poly::one()]);
        assert!(resultant(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(resultant(&PolyOverPoly::default(), &outer(&[1, 1])), Err(AlgError::ZeroOuter));
    }

    #[test]
    fn content_reduction() {
        let p = PolyOverPoly::new(vec![
            Poly::new(vec![crate::exactalg::rational::ratio(-1, 2)]),
            Poly::new(vec![rat(0), crate::exactalg::rational::ratio(-3, 2)]),
        ]);
        let q = p.content_reduced();
        assert_eq!(q.to_string(), "3*x*y+1");
    }
}
