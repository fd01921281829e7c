//! Dense univariate polynomials with exact rational coefficients.
//!
//! Support code for the rational-function semifield: arithmetic, gcd,
//! evaluation, and extraction of the power of x dividing a polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order; trailing zeros are trimmed, so the zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly(vec![c]);
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    fn trim(&mut self) {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant term.
    pub fn at_zero(&self) -> BigRational {
        self.coeff(0)
    }

    /// The largest k with x^k dividing self (0 for the zero polynomial).
    pub fn x_valuation(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Divide by x^k; panics if x^k does not divide self.
    pub fn shr_x(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        assert!(self.0[..k].iter().all(|c| c.is_zero()), "x^{k} does not divide");
        Poly::from_coeffs(self.0[k..].to_vec())
    }

    /// Multiply by x^k.
    pub fn shl_x(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); k];
        v.extend_from_slice(&self.0);
        Poly(v)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) + other.coeff(k));
        }
        Poly::from_coeffs(v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k) - other.coeff(k));
        }
        Poly::from_coeffs(v)
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead = divisor.0[dd].clone();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = &rem.0[dr] / &lead;
            quot[dr - dd] = c.clone();
            let shifted = divisor.shl_x(dr - dd).scale(&c);
            rem = rem.sub(&shifted);
        }
        (Poly::from_coeffs(quot), rem)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.0.last().unwrap().clone();
        a.scale(&lead.recip())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Display as `c0+c1*x+c2*x^2+...` (used by the textual semifield syntax).
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = rational_display(c);
            let term = match k {
                0 => cs,
                1 => format!("{cs}*x"),
                _ => format!("{cs}*x^{k}"),
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (n, p) in parts.iter().enumerate() {
            if n > 0 && !p.starts_with('-') {
                out.push('+');
            }
            out.push_str(p);
        }
        out
    }
}

pub fn rational_display(c: &BigRational) -> String {
    if c.denom() == &BigInt::one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn rational_is_positive(c: &BigRational) -> bool {
    c.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigRational::from_i64(c).unwrap()).collect())
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[1, 0, 2, 3]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn gcd_of_common_factor() {
        let common = p(&[1, 2]);
        let a = common.mul(&p(&[3, 1]));
        let b = common.mul(&p(&[5]));
        let g = a.gcd(&b);
        // monic version of 1+2x is 1/2 + x
        assert_eq!(g, common.scale(&BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn x_valuation_and_shift() {
        let a = p(&[0, 0, 3, 1]);
        assert_eq!(a.x_valuation(), 2);
        assert_eq!(a.shr_x(2), p(&[3, 1]));
        assert_eq!(a.shr_x(2).shl_x(2), a);
    }
}
