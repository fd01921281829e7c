//! The three semifields and their `◦`-extensions.
//!
//! A semifield here is a set with a commutative associative addition, a
//! commutative group multiplication, and distributivity; there is no
//! subtraction. The three concrete instances:
//!
//! * positive rationals with ordinary sum and product,
//! * the tropical integers (sum = min, product = integer addition),
//! * rational functions of the form `x^e*f/g` with `f(0) > 0`, `g(0) > 0`.
//!
//! Adjoining the symbol `◦` (neutral for addition, absorbing for
//! multiplication) yields the extension modeled by [`ExtValue`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rational_display, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    #[serde(rename = "posrat")]
    PosRational,
    #[serde(rename = "tropical")]
    TropicalInt,
    #[serde(rename = "ratfun")]
    PosRatFun,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::PosRational => write!(f, "posrat"),
            Tag::TropicalInt => write!(f, "tropical"),
            Tag::PosRatFun => write!(f, "ratfun"),
        }
    }
}

/// Canonical form of `x^e * num/den`: all powers of x extracted into `e`
/// (so `num(0) != 0`), `num`/`den` coprime, `den(0) = 1`, `num(0) > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    pub e: BigInt,
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    /// Build from raw parts, normalizing. Errors if the element is not in
    /// the semifield (zero, or a constant-term sign that cannot be fixed).
    pub fn new(e: BigInt, num: Poly, den: Poly) -> Result<RatFun> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::NotInSemifield(
                "zero numerator or denominator".into(),
            ));
        }
        let vn = num.x_valuation();
        let vd = den.x_valuation();
        let e = e + BigInt::from(vn) - BigInt::from(vd);
        let mut num = num.shr_x(vn);
        let mut den = den.shr_x(vd);
        let g = num.gcd(&den);
        if g.degree().map_or(false, |d| d > 0) {
            num = num.div_rem(&g).0;
            den = den.div_rem(&g).0;
        }
        // after gcd reduction the x-valuations are still 0
        let d0 = den.at_zero();
        num = num.scale(&d0.recip());
        den = den.scale(&d0.recip());
        if !num.at_zero().is_positive() {
            return Err(Error::NotInSemifield(format!(
                "constant term {} is not positive",
                rational_display(&num.at_zero())
            )));
        }
        Ok(RatFun { e, num, den })
    }

    pub fn one() -> RatFun {
        RatFun {
            e: BigInt::zero(),
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    /// The monomial x^e.
    pub fn monomial(e: BigInt) -> RatFun {
        RatFun {
            e,
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> Result<RatFun> {
        RatFun::new(BigInt::zero(), Poly::constant(c), Poly::one())
    }
}

/// An element of one of the three semifields K.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    PosRat(BigRational),
    Trop(BigInt),
    RatFun(RatFun),
}

impl Value {
    pub fn tag(&self) -> Tag {
        match self {
            Value::PosRat(_) => Tag::PosRational,
            Value::Trop(_) => Tag::TropicalInt,
            Value::RatFun(_) => Tag::PosRatFun,
        }
    }

    pub fn one(tag: Tag) -> Value {
        match tag {
            Tag::PosRational => Value::PosRat(BigRational::one()),
            Tag::TropicalInt => Value::Trop(BigInt::zero()),
            Tag::PosRatFun => Value::RatFun(RatFun::one()),
        }
    }

    pub fn is_one(&self) -> bool {
        self == &Value::one(self.tag())
    }

    fn check_tags(a: &Value, b: &Value, op: &str) -> Result<()> {
        if a.tag() != b.tag() {
            return Err(Error::TagMismatch(format!(
                "{op} on {} and {}",
                a.tag(),
                b.tag()
            )));
        }
        Ok(())
    }

    /// Semifield sum (min for the tropical tag).
    pub fn add(&self, other: &Value) -> Result<Value> {
        Value::check_tags(self, other, "add")?;
        Ok(match (self, other) {
            (Value::PosRat(a), Value::PosRat(b)) => Value::PosRat(a + b),
            (Value::Trop(a), Value::Trop(b)) => Value::Trop(a.min(b).clone()),
            (Value::RatFun(a), Value::RatFun(b)) => {
                // x^e1 n1/d1 + x^e2 n2/d2 over a common x-power and denominator
                let e = a.e.clone().min(b.e.clone());
                let sa = (&a.e - &e).to_usize().expect("exponent gap fits usize");
                let sb = (&b.e - &e).to_usize().expect("exponent gap fits usize");
                let num = a
                    .num
                    .shl_x(sa)
                    .mul(&b.den)
                    .add(&b.num.shl_x(sb).mul(&a.den));
                let den = a.den.mul(&b.den);
                Value::RatFun(RatFun::new(e, num, den).expect("closure under addition"))
            }
            _ => unreachable!(),
        })
    }

    /// Semifield product (integer addition for the tropical tag).
    pub fn mul(&self, other: &Value) -> Result<Value> {
        Value::check_tags(self, other, "mul")?;
        Ok(match (self, other) {
            (Value::PosRat(a), Value::PosRat(b)) => Value::PosRat(a * b),
            (Value::Trop(a), Value::Trop(b)) => Value::Trop(a + b),
            (Value::RatFun(a), Value::RatFun(b)) => Value::RatFun(
                RatFun::new(&a.e + &b.e, a.num.mul(&b.num), a.den.mul(&b.den))
                    .expect("closure under multiplication"),
            ),
            _ => unreachable!(),
        })
    }

    /// Multiplicative inverse: K is a group under multiplication.
    pub fn recip(&self) -> Value {
        match self {
            Value::PosRat(a) => Value::PosRat(a.recip()),
            Value::Trop(a) => Value::Trop(-a),
            Value::RatFun(a) => Value::RatFun(
                RatFun::new(-a.e.clone(), a.den.clone(), a.num.clone())
                    .expect("reciprocal stays in the semifield"),
            ),
        }
    }

    pub fn div(&self, other: &Value) -> Result<Value> {
        self.mul(&other.recip())
    }

    /// k^n for an integer n (negative powers via the group inverse).
    pub fn pow(&self, n: i64) -> Value {
        if n == 0 {
            return Value::one(self.tag());
        }
        let base = if n < 0 { self.recip() } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..n.unsigned_abs() {
            acc = acc.mul(&base).expect("same tag");
        }
        acc
    }
}

/// An element of K^! = K ∪ {◦}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Absent,
    Present(Value),
}

impl ExtValue {
    pub fn one(tag: Tag) -> ExtValue {
        ExtValue::Present(Value::one(tag))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, ExtValue::Absent)
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            ExtValue::Absent => None,
            ExtValue::Present(v) => Some(v),
        }
    }

    /// ◦ is neutral: ◦ + a = a.
    pub fn add(&self, other: &ExtValue) -> Result<ExtValue> {
        Ok(match (self, other) {
            (ExtValue::Absent, x) | (x, ExtValue::Absent) => x.clone(),
            (ExtValue::Present(a), ExtValue::Present(b)) => ExtValue::Present(a.add(b)?),
        })
    }

    /// ◦ is absorbing: ◦ × a = ◦.
    pub fn mul(&self, other: &ExtValue) -> Result<ExtValue> {
        Ok(match (self, other) {
            (ExtValue::Absent, _) | (_, ExtValue::Absent) => ExtValue::Absent,
            (ExtValue::Present(a), ExtValue::Present(b)) => ExtValue::Present(a.mul(b)?),
        })
    }

    pub fn div(&self, other: &ExtValue) -> Result<ExtValue> {
        match other {
            ExtValue::Absent => Err(Error::DivisionByAbsent("divisor is ◦".into())),
            ExtValue::Present(b) => Ok(match self {
                ExtValue::Absent => ExtValue::Absent,
                ExtValue::Present(a) => ExtValue::Present(a.div(b)?),
            }),
        }
    }
}

/// The natural number N as 1 + 1 + ... + 1 in K^! (◦ when N = 0).
pub fn nat_embed(tag: Tag, n: &BigUint) -> ExtValue {
    if n.is_zero() {
        return ExtValue::Absent;
    }
    ExtValue::Present(match tag {
        Tag::PosRational => Value::PosRat(BigRational::from(BigInt::from(n.clone()))),
        // min(0, 0, ..., 0) = 0: every positive N embeds as the unit
        Tag::TropicalInt => Value::Trop(BigInt::zero()),
        Tag::PosRatFun => Value::RatFun(
            RatFun::from_rational(BigRational::from(BigInt::from(n.clone())))
                .expect("positive integers lie in the semifield"),
        ),
    })
}

pub fn nat_embed_u64(tag: Tag, n: u64) -> ExtValue {
    nat_embed(tag, &BigUint::from(n))
}

/// The tropicalization r(x^e f1/f2) = e, extended by ◦ ↦ ◦.
pub fn valuation(a: &ExtValue) -> Result<ExtValue> {
    match a {
        ExtValue::Absent => Ok(ExtValue::Absent),
        ExtValue::Present(Value::RatFun(f)) => Ok(ExtValue::Present(Value::Trop(f.e.clone()))),
        ExtValue::Present(v) => Err(Error::TagMismatch(format!(
            "valuation expects ratfun, got {}",
            v.tag()
        ))),
    }
}

/// Evaluate x^e f/g at a positive rational t; the result must be positive.
pub fn evaluate_at(a: &ExtValue, t: &BigRational) -> Result<ExtValue> {
    if !t.is_positive() {
        return Err(Error::NonPositiveEvaluation(format!(
            "evaluation point {} is not positive",
            rational_display(t)
        )));
    }
    match a {
        ExtValue::Absent => Ok(ExtValue::Absent),
        ExtValue::Present(Value::RatFun(f)) => {
            let dv = f.den.eval(t);
            if dv.is_zero() {
                return Err(Error::NonPositiveEvaluation(format!(
                    "denominator vanishes at {}",
                    rational_display(t)
                )));
            }
            let e = f
                .e
                .to_i64()
                .ok_or_else(|| Error::NonPositiveEvaluation("exponent overflow".into()))?;
            let mut v = f.num.eval(t) / dv;
            let tp = if e >= 0 {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= t;
                }
                acc
            } else {
                let mut acc = BigRational::one();
                for _ in 0..(-e) {
                    acc *= t;
                }
                acc.recip()
            };
            v *= tp;
            if !v.is_positive() {
                return Err(Error::NonPositiveEvaluation(format!(
                    "value {} at t={} (t not small enough)",
                    rational_display(&v),
                    rational_display(t)
                )));
            }
            Ok(ExtValue::Present(Value::PosRat(v)))
        }
        ExtValue::Present(v) => Err(Error::TagMismatch(format!(
            "evaluate_at expects ratfun, got {}",
            v.tag()
        ))),
    }
}

// ---------------------------------------------------------------------------
// Textual syntax
// ---------------------------------------------------------------------------

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Absent => write!(f, "inf"),
            ExtValue::Present(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::PosRat(a) => write!(f, "{}", rational_display(a)),
            Value::Trop(a) => write!(f, "{a}"),
            Value::RatFun(a) => write!(
                f,
                "x^{}*({})/({})",
                a.e,
                a.num.display(),
                a.den.display()
            ),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}

/// Parse `c0+c1*x+c2*x^2-...` with exact rational coefficients.
fn parse_poly(s: &str) -> Result<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // split into signed terms
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (idx, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && idx > 0 && !matches!(s.as_bytes()[idx - 1], b'+' | b'-' | b'^' | b'/') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut coeffs: Vec<BigRational> = Vec::new();
    for t in terms {
        let (coeff_str, power) = if let Some((c, xp)) = t.split_once('x') {
            let power = match xp.strip_prefix('^') {
                Some(p) => p
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad power in '{t}'")))?,
                None if xp.is_empty() => 1,
                None => return Err(Error::Parse(format!("bad term '{t}'"))),
            };
            let c = c.trim_end_matches('*');
            let c = match c {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            (c.to_string(), power)
        } else {
            (t.clone(), 0)
        };
        let c = parse_rational(&coeff_str)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += c;
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Parse a K^! element in the tag's textual syntax. `inf` denotes ◦ for any
/// tag; for the rational tags `0` also denotes ◦.
pub fn parse_ext(tag: Tag, s: &str) -> Result<ExtValue> {
    let s = s.trim();
    if s == "inf" || s == "*" {
        return Ok(ExtValue::Absent);
    }
    match tag {
        Tag::TropicalInt => {
            let n: BigInt = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad tropical integer '{s}'")))?;
            Ok(ExtValue::Present(Value::Trop(n)))
        }
        Tag::PosRational => {
            let v = parse_rational(s)?;
            if v.is_zero() {
                return Ok(ExtValue::Absent);
            }
            if !v.is_positive() {
                return Err(Error::NotInSemifield(format!("{s} is not positive")));
            }
            Ok(ExtValue::Present(Value::PosRat(v)))
        }
        Tag::PosRatFun => {
            if s == "0" {
                return Ok(ExtValue::Absent);
            }
            // x^e*(num)/(den), with the x^e* prefix optional
            let (e, rest) = if let Some(r) = s.strip_prefix("x^") {
                let end = r
                    .find('*')
                    .ok_or_else(|| Error::Parse(format!("expected '*' after exponent in '{s}'")))?;
                let e: BigInt = r[..end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?;
                (e, &r[end + 1..])
            } else {
                (BigInt::zero(), s)
            };
            let (num_s, den_s) = split_fraction(rest)?;
            let num = parse_poly(strip_parens(num_s))?;
            let den = parse_poly(strip_parens(den_s))?;
            Ok(ExtValue::Present(Value::RatFun(RatFun::new(e, num, den)?)))
        }
    }
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Split `"(...)/(...)"` at the top-level '/' (denominator optional).
fn split_fraction(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0usize;
    for (idx, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in '{s}'")))?
            }
            '/' if depth == 0 => return Ok((&s[..idx], &s[idx + 1..])),
            _ => {}
        }
    }
    Ok((s, "1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn trop(n: i64) -> ExtValue {
        ExtValue::Present(Value::Trop(BigInt::from(n)))
    }

    fn rat(n: i64, d: i64) -> ExtValue {
        ExtValue::Present(Value::PosRat(BigRational::new(n.into(), d.into())))
    }

    fn rf(s: &str) -> ExtValue {
        parse_ext(Tag::PosRatFun, s).unwrap()
    }

    #[test]
    fn tropical_sum_is_min() {
        assert_eq!(trop(2).add(&trop(5)).unwrap(), trop(2));
    }

    #[test]
    fn tropical_product_is_plus() {
        assert_eq!(trop(2).mul(&trop(5)).unwrap(), trop(7));
    }

    #[test]
    fn absent_is_neutral_and_absorbing() {
        for v in [trop(3), rat(2, 3), rf("x^1*(1)/(1)")] {
            assert_eq!(ExtValue::Absent.add(&v).unwrap(), v);
            assert_eq!(v.add(&ExtValue::Absent).unwrap(), v);
            assert_eq!(ExtValue::Absent.mul(&v).unwrap(), ExtValue::Absent);
            assert_eq!(v.mul(&ExtValue::Absent).unwrap(), ExtValue::Absent);
        }
        assert_eq!(
            ExtValue::Absent.add(&ExtValue::Absent).unwrap(),
            ExtValue::Absent
        );
    }

    #[test]
    fn ratfun_addition_extracts_x_power() {
        let a = rf("x^1*(1)/(1)");
        assert_eq!(a.add(&a).unwrap(), rf("x^1*(2)/(1)"));
    }

    #[test]
    fn posrat_product() {
        assert_eq!(rat(2, 3).mul(&rat(3, 4)).unwrap(), rat(1, 2));
    }

    #[test]
    fn tropical_division_is_subtraction() {
        assert_eq!(trop(5).div(&trop(2)).unwrap(), trop(3));
    }

    #[test]
    fn self_division_is_unit() {
        let a = rf("x^2*(1+x)/(2+x)");
        assert_eq!(a.div(&a).unwrap(), rf("x^0*(1)/(1)"));
    }

    #[test]
    fn nat_embed_values() {
        assert_eq!(nat_embed_u64(Tag::TropicalInt, 3), trop(0));
        assert_eq!(nat_embed_u64(Tag::TropicalInt, 0), ExtValue::Absent);
        assert_eq!(nat_embed_u64(Tag::PosRational, 3), rat(3, 1));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&rf("x^2*(1+x)/(2+x)")).unwrap(), trop(2));
        assert_eq!(valuation(&rf("x^0*(1)/(1)")).unwrap(), trop(0));
        let a = rf("x^2*(1+x)/(2+x)");
        let b = rf("x^-1*(3)/(1+x)");
        let ab = a.mul(&b).unwrap();
        assert_eq!(valuation(&ab).unwrap(), trop(1));
    }

    #[test]
    fn evaluate_at_examples() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(evaluate_at(&rf("x^1*(1)/(1)"), &half).unwrap(), rat(1, 2));
        assert_eq!(
            evaluate_at(&rf("x^0*(2+x)/(1+x)"), &BigRational::one()).unwrap(),
            rat(3, 2)
        );
        let err = evaluate_at(&rf("x^0*(1-x)/(1)"), &BigRational::from_i64(2).unwrap());
        assert!(matches!(err, Err(Error::NonPositiveEvaluation(_))));
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in [
            "x^2*(1+x)/(2+x)",
            "x^-3*(1/2+2*x^2)/(1)",
            "x^0*(3)/(1+x)",
        ] {
            let v = rf(s);
            assert_eq!(rf(&v.to_string()), v);
        }
        assert_eq!(parse_ext(Tag::TropicalInt, "inf").unwrap(), ExtValue::Absent);
        assert_eq!(parse_ext(Tag::TropicalInt, "-4").unwrap(), trop(-4));
    }

    #[test]
    fn canonical_form_decides_equality() {
        // (1+x)(2+x) / (2+x) normalizes to (1+x)/1
        let a = rf("x^0*(2+3*x+x^2)/(2+x)");
        let b = rf("x^0*(1+x)/(1)");
        assert_eq!(a, b);
    }
}
