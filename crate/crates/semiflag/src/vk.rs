//! The semifield module V(K): formal K^!-combinations of the canonical
//! basis, the one-parameter monoid generators, the maps tau, the basis
//! involution, base change along semifield homomorphisms, and
//! projectivization.
//!
//! Coefficients equal to ◦ are never stored: absence from the sparse map
//! is the unique representation, so the support is the stored key set.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::repdata::{Op, Rep};
use crate::semifield::{evaluate_at, nat_embed, parse_ext, valuation, ExtValue, Tag, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VkVector {
    pub tag: Tag,
    pub coeffs: BTreeMap<usize, Value>,
}

impl VkVector {
    pub fn empty(tag: Tag) -> VkVector {
        VkVector {
            tag,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis vector b with unit coefficient.
    pub fn basis(tag: Tag, b: usize) -> VkVector {
        let mut v = VkVector::empty(tag);
        v.coeffs.insert(b, Value::one(tag));
        v
    }

    pub fn get(&self, b: usize) -> ExtValue {
        match self.coeffs.get(&b) {
            Some(v) => ExtValue::Present(v.clone()),
            None => ExtValue::Absent,
        }
    }

    pub fn set(&mut self, b: usize, v: ExtValue) {
        match v {
            ExtValue::Absent => {
                self.coeffs.remove(&b);
            }
            ExtValue::Present(v) => {
                self.coeffs.insert(b, v);
            }
        }
    }

    pub fn add_at(&mut self, b: usize, v: &Value) -> Result<()> {
        let cur = self.get(b).add(&ExtValue::Present(v.clone()))?;
        self.set(b, cur);
        Ok(())
    }

    pub fn supp(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn supp_set(&self) -> std::collections::BTreeSet<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &VkVector) -> Result<VkVector> {
        let mut out = self.clone();
        for (b, v) in &other.coeffs {
            out.add_at(*b, v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Value) -> Result<VkVector> {
        let mut out = VkVector::empty(self.tag);
        for (b, v) in &self.coeffs {
            out.coeffs.insert(*b, k.mul(v)?);
        }
        Ok(out)
    }
}

fn op_accumulate(op: &Op, factor: &Value, b: usize, coeff: &Value, out: &mut VkVector) -> Result<()> {
    for (bp, c) in &op.rows[b] {
        let nat = nat_embed(out.tag, c);
        let nat = nat.as_value().expect("stored constants are nonzero");
        let term = coeff.mul(factor)?.mul(nat)?;
        out.add_at(*bp, &term)?;
    }
    Ok(())
}

/// The generator i^k: xi |-> sum_n k^n e_i^{(n)} xi.
pub fn apply_e(rep: &Rep, i: usize, k: &Value, xi: &VkVector) -> Result<VkVector> {
    if k.tag() != xi.tag {
        return Err(Error::TagMismatch("apply_e".into()));
    }
    let mut out = VkVector::empty(xi.tag);
    for (b, coeff) in &xi.coeffs {
        for (n, op) in rep.e_ops[i].iter().enumerate() {
            op_accumulate(op, &k.pow(n as i64), *b, coeff, &mut out)?;
        }
    }
    Ok(out)
}

/// The generator (-i)^k: xi |-> sum_n k^n f_i^{(n)} xi.
pub fn apply_f(rep: &Rep, i: usize, k: &Value, xi: &VkVector) -> Result<VkVector> {
    if k.tag() != xi.tag {
        return Err(Error::TagMismatch("apply_f".into()));
    }
    let mut out = VkVector::empty(xi.tag);
    for (b, coeff) in &xi.coeffs {
        for (n, op) in rep.f_ops[i].iter().enumerate() {
            op_accumulate(op, &k.pow(n as i64), *b, coeff, &mut out)?;
        }
    }
    Ok(out)
}

/// The torus generator: b |-> k^{z_i(b)} b.
pub fn apply_torus(rep: &Rep, i: usize, k: &Value, xi: &VkVector) -> Result<VkVector> {
    if k.tag() != xi.tag {
        return Err(Error::TagMismatch("apply_torus".into()));
    }
    let mut out = VkVector::empty(xi.tag);
    for (b, coeff) in &xi.coeffs {
        out.coeffs.insert(*b, coeff.mul(&k.pow(rep.z(i, *b)))?);
    }
    Ok(out)
}

/// tau: b' coefficient is sum_b d_{b,b',i,<i,nu_b>} xi_b. Total on V(K);
/// bijective from V(K)^{e_i} onto V(K)^{f_i}.
pub fn tau(rep: &Rep, i: usize, xi: &VkVector) -> Result<VkVector> {
    let mut out = VkVector::empty(xi.tag);
    for (b, coeff) in &xi.coeffs {
        if let Some(op) = rep.f_op(i, rep.z(i, *b)) {
            op_accumulate(op, &Value::one(xi.tag), *b, coeff, &mut out)?;
        }
    }
    Ok(out)
}

/// The inverse direction, using e_i^{(-<i,nu_b>)} weight-wise.
pub fn tau_inverse(rep: &Rep, i: usize, xi: &VkVector) -> Result<VkVector> {
    let mut out = VkVector::empty(xi.tag);
    for (b, coeff) in &xi.coeffs {
        if let Some(op) = rep.e_op(i, -rep.z(i, *b)) {
            op_accumulate(op, &Value::one(xi.tag), *b, coeff, &mut out)?;
        }
    }
    Ok(out)
}

/// tau with its bijection contract: the input must be supported on beta^{e_i}.
pub fn tau_bijective(rep: &Rep, i: usize, xi: &VkVector) -> Result<VkVector> {
    let dom = rep.compute_beta_ei(i);
    if let Some(b) = xi.supp().find(|b| !dom.contains(b)) {
        return Err(Error::DomainViolation(format!(
            "support contains id {b} outside beta^(e_{})",
            i + 1
        )));
    }
    tau(rep, i, xi)
}

pub fn tau_inverse_bijective(rep: &Rep, i: usize, xi: &VkVector) -> Result<VkVector> {
    let dom = rep.compute_beta_fi(i);
    if let Some(b) = xi.supp().find(|b| !dom.contains(b)) {
        return Err(Error::DomainViolation(format!(
            "support contains id {b} outside beta^(f_{})",
            i + 1
        )));
    }
    tau_inverse(rep, i, xi)
}

/// A registered semifield homomorphism r: K -> K2 for base change.
#[derive(Debug, Clone)]
pub enum Hom {
    /// the x-adic valuation, onto the tropical integers
    Valuation,
    /// evaluation at a positive rational, onto the positive rationals
    EvaluateAt(BigRational),
}

impl Hom {
    pub fn target_tag(&self) -> Tag {
        match self {
            Hom::Valuation => Tag::TropicalInt,
            Hom::EvaluateAt(_) => Tag::PosRational,
        }
    }

    pub fn apply(&self, v: &ExtValue) -> Result<ExtValue> {
        match self {
            Hom::Valuation => valuation(v),
            Hom::EvaluateAt(t) => evaluate_at(v, t),
        }
    }
}

/// Coefficient-wise base change.
pub fn v_r(hom: &Hom, xi: &VkVector) -> Result<VkVector> {
    if xi.tag != Tag::PosRatFun {
        return Err(Error::TagMismatch(
            "base change applies to rational-function vectors".into(),
        ));
    }
    let mut out = VkVector::empty(hom.target_tag());
    for (b, v) in &xi.coeffs {
        out.set(*b, hom.apply(&ExtValue::Present(v.clone()))?);
    }
    Ok(out)
}

/// Coefficient permutation by the basis involution.
pub fn phi_k(rep: &Rep, xi: &VkVector) -> VkVector {
    let mut out = VkVector::empty(xi.tag);
    for (b, v) in &xi.coeffs {
        // out_{phi(b)} = xi_b since phi is an involution
        out.coeffs.insert(rep.phi[*b], v.clone());
    }
    out
}

/// A point of P(K): a vector normalized so the coefficient at the least
/// support id is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PkPoint(VkVector);

impl PkPoint {
    pub fn vector(&self) -> &VkVector {
        &self.0
    }

    pub fn tag(&self) -> Tag {
        self.0.tag
    }
}

pub fn projectivize(xi: &VkVector) -> Result<PkPoint> {
    let least = *xi.coeffs.keys().next().ok_or(Error::ZeroVector)?;
    let unit = xi.coeffs[&least].recip();
    Ok(PkPoint(xi.scale(&unit)?))
}

pub fn pk_equal(p: &PkPoint, q: &PkPoint) -> bool {
    p == q
}

// ---------------------------------------------------------------------------
// generator words

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gen {
    E(usize, Value),
    F(usize, Value),
    Torus(usize, Value),
}

pub fn apply_gen(rep: &Rep, g: &Gen, xi: &VkVector) -> Result<VkVector> {
    match g {
        Gen::E(i, k) => apply_e(rep, *i, k, xi),
        Gen::F(i, k) => apply_f(rep, *i, k, xi),
        Gen::Torus(i, k) => apply_torus(rep, *i, k, xi),
    }
}

/// Apply a word of generators, rightmost first (operator composition).
pub fn apply_word(rep: &Rep, word: &[Gen], xi: &VkVector) -> Result<VkVector> {
    let mut out = xi.clone();
    for g in word.iter().rev() {
        out = apply_gen(rep, g, &out)?;
    }
    Ok(out)
}

/// Parse a word like "f1^3 e2^1 t1^2" (1-based vertex indices).
pub fn parse_word(rank: usize, tag: Tag, s: &str) -> Result<Vec<Gen>> {
    let mut word = Vec::new();
    for token in s.split_whitespace() {
        let (head, val) = token
            .split_once('^')
            .ok_or_else(|| Error::Usage(format!("generator '{token}' lacks '^'")))?;
        let kind = head
            .chars()
            .next()
            .ok_or_else(|| Error::Usage(format!("empty generator in '{s}'")))?;
        let idx: usize = head[kind.len_utf8()..]
            .parse()
            .map_err(|_| Error::Usage(format!("bad vertex index in '{token}'")))?;
        if idx == 0 || idx > rank {
            return Err(Error::Usage(format!("vertex index {idx} out of range")));
        }
        let k = match parse_ext(tag, val)? {
            ExtValue::Present(v) => v,
            ExtValue::Absent => {
                return Err(Error::Usage(format!("generator exponent in '{token}' is ◦")))
            }
        };
        word.push(match kind {
            'e' => Gen::E(idx - 1, k),
            'f' => Gen::F(idx - 1, k),
            't' | 'u' => Gen::Torus(idx - 1, k),
            _ => return Err(Error::Usage(format!("unknown generator kind '{kind}'"))),
        });
    }
    Ok(word)
}

// ---------------------------------------------------------------------------
// JSON

pub fn vk_to_json(xi: &VkVector) -> serde_json::Value {
    let coeffs: serde_json::Map<String, serde_json::Value> = xi
        .coeffs
        .iter()
        .map(|(b, v)| (b.to_string(), json!(v.to_string())))
        .collect();
    json!({"tag": serde_json::to_value(xi.tag).unwrap(), "coeffs": coeffs})
}

pub fn vk_from_json(value: &serde_json::Value) -> Result<VkVector> {
    let tag: Tag = serde_json::from_value(
        value
            .get("tag")
            .ok_or_else(|| Error::SchemaError("vector JSON lacks 'tag'".into()))?
            .clone(),
    )
    .map_err(|e| Error::SchemaError(format!("bad tag: {e}")))?;
    let coeffs = value
        .get("coeffs")
        .and_then(|c| c.as_object())
        .ok_or_else(|| Error::SchemaError("vector JSON lacks 'coeffs' object".into()))?;
    let mut out = VkVector::empty(tag);
    for (key, val) in coeffs {
        let b: usize = key
            .parse()
            .map_err(|_| Error::SchemaError(format!("bad basis id '{key}'")))?;
        let s = val
            .as_str()
            .ok_or_else(|| Error::SchemaError("coefficients must be strings".into()))?;
        out.set(b, parse_ext(tag, s)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// sampling and the relation suite

pub fn sample_value<R: Rng>(rng: &mut R, tag: Tag) -> Value {
    use crate::poly::Poly;
    use crate::semifield::RatFun;
    use num_bigint::BigInt;
    match tag {
        Tag::PosRational => Value::PosRat(BigRational::new(
            BigInt::from(rng.gen_range(1..=6)),
            BigInt::from(rng.gen_range(1..=6)),
        )),
        Tag::TropicalInt => Value::Trop(BigInt::from(rng.gen_range(-5..=5))),
        Tag::PosRatFun => {
            let poly = |rng: &mut R| {
                Poly::from_coeffs(vec![
                    BigRational::from(BigInt::from(rng.gen_range(1..=4))),
                    BigRational::from(BigInt::from(rng.gen_range(0..=3))),
                    BigRational::from(BigInt::from(rng.gen_range(0..=2))),
                ])
            };
            let num = poly(rng);
            let den = poly(rng);
            Value::RatFun(
                RatFun::new(BigInt::from(rng.gen_range(-2..=2)), num, den)
                    .expect("positive constant terms"),
            )
        }
    }
}

/// A random vector with nonempty support.
pub fn sample_vector<R: Rng>(rng: &mut R, tag: Tag, dim: usize) -> VkVector {
    let mut out = VkVector::empty(tag);
    while out.is_empty() {
        for b in 0..dim {
            if rng.gen_bool(0.5) {
                out.coeffs.insert(b, sample_value(rng, tag));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct RelationReport {
    /// relation name -> number of verified instances
    pub checked: Vec<(String, usize)>,
}

fn assert_words_equal(rep: &Rep, tag: Tag, name: &str, lhs: &[Gen], rhs: &[Gen]) -> Result<()> {
    for b in 0..rep.dim() {
        let basis = VkVector::basis(tag, b);
        let l = apply_word(rep, lhs, &basis)?;
        let r = apply_word(rep, rhs, &basis)?;
        if l != r {
            return Err(Error::RelationFailure(format!(
                "{name} differs on basis id {b}: {} vs {}",
                vk_to_json(&l),
                vk_to_json(&r)
            )));
        }
    }
    Ok(())
}

fn run_relations<R: Rng>(rep: &Rep, tag: Tag, samples: usize, rng: &mut R) -> Result<RelationReport> {
    let rank = rep.rank();
    let one = Value::one(tag);
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for _ in 0..samples {
        let a = sample_value(rng, tag);
        let b = sample_value(rng, tag);
        let c = sample_value(rng, tag);
        let k = sample_value(rng, tag);
        for i in 0..rank {
            // R1: one-parameter subgroups compose additively, the torus
            // multiplicatively
            let ab = a.add(&b)?;
            assert_words_equal(
                rep,
                tag,
                "R1(e)",
                &[Gen::E(i, a.clone()), Gen::E(i, b.clone())],
                &[Gen::E(i, ab.clone())],
            )?;
            assert_words_equal(
                rep,
                tag,
                "R1(f)",
                &[Gen::F(i, a.clone()), Gen::F(i, b.clone())],
                &[Gen::F(i, ab.clone())],
            )?;
            assert_words_equal(
                rep,
                tag,
                "R1(t)",
                &[Gen::Torus(i, a.clone()), Gen::Torus(i, b.clone())],
                &[Gen::Torus(i, a.mul(&b)?)],
            )?;
            *counts.entry("R1").or_default() += 3;

            // R5: i^a (-i)^b factors through the torus
            let p = one.add(&a.mul(&b)?)?;
            assert_words_equal(
                rep,
                tag,
                "R5",
                &[Gen::E(i, a.clone()), Gen::F(i, b.clone())],
                &[
                    Gen::F(i, b.div(&p)?),
                    Gen::Torus(i, p.clone()),
                    Gen::E(i, a.div(&p)?),
                ],
            )?;
            *counts.entry("R5").or_default() += 1;

            for j in 0..rank {
                if j != i {
                    // R4
                    assert_words_equal(
                        rep,
                        tag,
                        "R4",
                        &[Gen::E(i, a.clone()), Gen::F(j, b.clone())],
                        &[Gen::F(j, b.clone()), Gen::E(i, a.clone())],
                    )?;
                    *counts.entry("R4").or_default() += 1;
                }
                if j != i && rep.cartan.matrix[i][j] == 0 {
                    // R2: everything for i commutes with everything for j
                    let gens_i = [
                        Gen::E(i, a.clone()),
                        Gen::F(i, a.clone()),
                        Gen::Torus(i, a.clone()),
                    ];
                    let gens_j = [
                        Gen::E(j, b.clone()),
                        Gen::F(j, b.clone()),
                        Gen::Torus(j, b.clone()),
                    ];
                    for x in &gens_i {
                        for y in &gens_j {
                            assert_words_equal(
                                rep,
                                tag,
                                "R2",
                                &[x.clone(), y.clone()],
                                &[y.clone(), x.clone()],
                            )?;
                            *counts.entry("R2").or_default() += 1;
                        }
                    }
                }
                if j != i && rep.cartan.matrix[i][j] == -1 {
                    // R3: the braid-like relation, exponents in semifield
                    // arithmetic
                    let s = a.add(&c)?;
                    let left = b.mul(&c)?.div(&s)?;
                    let right = a.mul(&b)?.div(&s)?;
                    assert_words_equal(
                        rep,
                        tag,
                        "R3(e)",
                        &[Gen::E(i, a.clone()), Gen::E(j, b.clone()), Gen::E(i, c.clone())],
                        &[Gen::E(j, left.clone()), Gen::E(i, s.clone()), Gen::E(j, right.clone())],
                    )?;
                    assert_words_equal(
                        rep,
                        tag,
                        "R3(f)",
                        &[Gen::F(i, a.clone()), Gen::F(j, b.clone()), Gen::F(i, c.clone())],
                        &[Gen::F(j, left), Gen::F(i, s.clone()), Gen::F(j, right)],
                    )?;
                    *counts.entry("R3").or_default() += 2;
                }
                // R6: torus conjugation rescales by k^{a_ij}
                let aij = rep.cartan.matrix[i][j];
                assert_words_equal(
                    rep,
                    tag,
                    "R6(e)",
                    &[
                        Gen::Torus(i, k.clone()),
                        Gen::E(j, a.clone()),
                        Gen::Torus(i, k.recip()),
                    ],
                    &[Gen::E(j, k.pow(aij).mul(&a)?)],
                )?;
                assert_words_equal(
                    rep,
                    tag,
                    "R6(f)",
                    &[
                        Gen::Torus(i, k.clone()),
                        Gen::F(j, a.clone()),
                        Gen::Torus(i, k.recip()),
                    ],
                    &[Gen::F(j, k.pow(-aij).mul(&a)?)],
                )?;
                *counts.entry("R6").or_default() += 2;
            }
        }
    }
    Ok(RelationReport {
        checked: counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    })
}

/// Verify the monoid relations on every basis vector for sampled parameter
/// tuples. The relation list is validated over the positive-rational model
/// first, then asserted over the requested tag.
pub fn check_relations(rep: &Rep, tag: Tag, samples: usize, seed: u64) -> Result<RelationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rational = run_relations(rep, Tag::PosRational, samples, &mut rng)?;
    if tag == Tag::PosRational {
        return Ok(rational);
    }
    run_relations(rep, tag, samples, &mut rng)
}

/// Sampled check that i^k and (-i)^k act injectively on V(K).
pub fn check_injectivity(rep: &Rep, tag: Tag, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..samples {
        let xi = sample_vector(&mut rng, tag, rep.dim());
        let xip = sample_vector(&mut rng, tag, rep.dim());
        if xi == xip {
            continue;
        }
        let i = rng.gen_range(0..rep.rank());
        let k = sample_value(&mut rng, tag);
        for (name, img, imgp) in [
            (
                "e",
                apply_e(rep, i, &k, &xi)?,
                apply_e(rep, i, &k, &xip)?,
            ),
            (
                "f",
                apply_f(rep, i, &k, &xi)?,
                apply_f(rep, i, &k, &xip)?,
            ),
        ] {
            if img == imgp {
                return Err(Error::InjectivityFailure(format!(
                    "{name}-generator (i={}, k={k:?}) identifies two distinct vectors",
                    i + 1
                )));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repdata::build_rep;
    use crate::rootdata::CartanDatum;
    use num_bigint::BigInt;

    fn rep_a1(m: i64) -> Rep {
        build_rep(&CartanDatum::parse_type("A1").unwrap(), &vec![m]).unwrap()
    }

    fn rep_a2() -> Rep {
        build_rep(&CartanDatum::parse_type("A2").unwrap(), &vec![1, 1]).unwrap()
    }

    fn trop(n: i64) -> Value {
        Value::Trop(BigInt::from(n))
    }

    fn trop_vec(pairs: &[(usize, i64)]) -> VkVector {
        let mut v = VkVector::empty(Tag::TropicalInt);
        for &(b, n) in pairs {
            v.coeffs.insert(b, trop(n));
        }
        v
    }

    #[test]
    fn apply_f_tropical_example() {
        let rep = rep_a1(2);
        let xi = VkVector::basis(Tag::TropicalInt, rep.xi_plus);
        let out = apply_f(&rep, 0, &trop(3), &xi).unwrap();
        assert_eq!(out, trop_vec(&[(0, 0), (1, 3), (2, 6)]));
    }

    #[test]
    fn apply_e_kills_highest_weight() {
        let rep = rep_a1(2);
        let xi = VkVector::basis(Tag::TropicalInt, rep.xi_plus);
        assert_eq!(apply_e(&rep, 0, &trop(4), &xi).unwrap(), xi);
    }

    #[test]
    fn apply_torus_examples() {
        let rep = rep_a1(2);
        // z(b=2) = -2, tropical power is integer multiple
        let xi = VkVector::basis(Tag::TropicalInt, 2);
        let out = apply_torus(&rep, 0, &trop(5), &xi).unwrap();
        assert_eq!(out, trop_vec(&[(2, -10)]));
        // unit torus parameter acts as identity; exponents compose
        let v = trop_vec(&[(0, 1), (1, 7), (2, -3)]);
        assert_eq!(apply_torus(&rep, 0, &trop(0), &v).unwrap(), v);
        let twice = apply_torus(&rep, 0, &trop(2), &apply_torus(&rep, 0, &trop(3), &v).unwrap())
            .unwrap();
        assert_eq!(twice, apply_torus(&rep, 0, &trop(5), &v).unwrap());
    }

    #[test]
    fn tau_examples() {
        let rep = rep_a1(2);
        let xi = VkVector::basis(Tag::TropicalInt, rep.xi_plus);
        let out = tau_bijective(&rep, 0, &xi).unwrap();
        assert_eq!(out, VkVector::basis(Tag::TropicalInt, 2));
        let back = tau_inverse_bijective(&rep, 0, &out).unwrap();
        assert_eq!(back, xi);
        // off-domain invocation is rejected
        let bad = trop_vec(&[(1, 0)]);
        assert!(tau_bijective(&rep, 0, &bad).is_err());
    }

    #[test]
    fn tau_round_trips_on_domain() {
        for rep in [rep_a1(3), rep_a2()] {
            for i in 0..rep.rank() {
                let dom = rep.compute_beta_ei(i);
                let mut rng = ChaCha8Rng::seed_from_u64(11);
                for tag in [Tag::PosRational, Tag::TropicalInt, Tag::PosRatFun] {
                    for _ in 0..10 {
                        let mut xi = VkVector::empty(tag);
                        for &b in &dom {
                            if rng.gen_bool(0.7) {
                                xi.coeffs.insert(b, sample_value(&mut rng, tag));
                            }
                        }
                        let there = tau(&rep, i, &xi).unwrap();
                        assert_eq!(tau_inverse(&rep, i, &there).unwrap(), xi);
                    }
                }
            }
        }
    }

    #[test]
    fn v_r_functoriality() {
        let rep = rep_a2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let xi = sample_vector(&mut rng, Tag::PosRatFun, rep.dim());
            let k = sample_value(&mut rng, Tag::PosRatFun);
            let i = rng.gen_range(0..rep.rank());
            let hom = Hom::Valuation;
            let kv = match hom.apply(&ExtValue::Present(k.clone())).unwrap() {
                ExtValue::Present(v) => v,
                ExtValue::Absent => unreachable!(),
            };
            for (img, img_trop) in [
                (apply_f(&rep, i, &k, &xi).unwrap(), apply_f(&rep, i, &kv, &v_r(&hom, &xi).unwrap()).unwrap()),
                (apply_e(&rep, i, &k, &xi).unwrap(), apply_e(&rep, i, &kv, &v_r(&hom, &xi).unwrap()).unwrap()),
                (apply_torus(&rep, i, &k, &xi).unwrap(), apply_torus(&rep, i, &kv, &v_r(&hom, &xi).unwrap()).unwrap()),
                (tau(&rep, i, &xi).unwrap(), tau(&rep, i, &v_r(&hom, &xi).unwrap()).unwrap()),
            ] {
                assert_eq!(v_r(&hom, &img).unwrap(), img_trop);
            }
        }
    }

    #[test]
    fn v_r_trivial_cases() {
        let rep = rep_a1(2);
        let mut xi = VkVector::empty(Tag::PosRatFun);
        for b in 0..rep.dim() {
            xi.coeffs.insert(b, Value::one(Tag::PosRatFun));
        }
        let out = v_r(&Hom::Valuation, &xi).unwrap();
        assert_eq!(out, trop_vec(&[(0, 0), (1, 0), (2, 0)]));
        assert!(v_r(&Hom::Valuation, &VkVector::empty(Tag::PosRatFun)).unwrap().is_empty());
    }

    #[test]
    fn phi_k_properties() {
        let rep = rep_a2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let xi = sample_vector(&mut rng, Tag::TropicalInt, rep.dim());
        let twice = phi_k(&rep, &phi_k(&rep, &xi));
        assert_eq!(twice, xi);
        let img = phi_k(&rep, &VkVector::basis(Tag::TropicalInt, rep.xi_plus));
        assert_eq!(img, VkVector::basis(Tag::TropicalInt, rep.xi_minus));
        let supp: Vec<usize> = phi_k(&rep, &xi).supp().collect();
        let mut expect: Vec<usize> = xi.supp().map(|b| rep.phi[b]).collect();
        expect.sort_unstable();
        assert_eq!(supp, expect);
    }

    #[test]
    fn phi_k_conjugates_generators() {
        for rep in [rep_a1(2), rep_a2()] {
            let sigma = &rep.phi_sigma;
            for tag in [Tag::PosRational, Tag::TropicalInt] {
                let mut rng = ChaCha8Rng::seed_from_u64(3);
                let k = sample_value(&mut rng, tag);
                for i in 0..rep.rank() {
                    for b in 0..rep.dim() {
                        let basis = VkVector::basis(tag, b);
                        let lhs = phi_k(&rep, &apply_e(&rep, i, &k, &basis).unwrap());
                        let rhs =
                            apply_f(&rep, sigma[i], &k, &phi_k(&rep, &basis)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn projectivize_examples() {
        let p = projectivize(&trop_vec(&[(0, 0), (1, 3), (2, 6)])).unwrap();
        let q = projectivize(&trop_vec(&[(0, 5), (1, 8), (2, 11)])).unwrap();
        assert!(pk_equal(&p, &q));
        let r = projectivize(&trop_vec(&[(0, 0), (1, 3)])).unwrap();
        assert!(!pk_equal(&p, &r));
        let again = projectivize(p.vector()).unwrap();
        assert!(pk_equal(&p, &again));
        assert!(matches!(
            projectivize(&VkVector::empty(Tag::TropicalInt)),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn additivity_and_homogeneity() {
        let rep = rep_a2();
        for tag in [Tag::PosRational, Tag::TropicalInt, Tag::PosRatFun] {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            for _ in 0..10 {
                let xi = sample_vector(&mut rng, tag, rep.dim());
                let xip = sample_vector(&mut rng, tag, rep.dim());
                let k = sample_value(&mut rng, tag);
                let i = rng.gen_range(0..rep.rank());
                let t = sample_value(&mut rng, tag);
                let ops: Vec<Box<dyn Fn(&VkVector) -> VkVector>> = vec![
                    Box::new(|v| apply_e(&rep, i, &t, v).unwrap()),
                    Box::new(|v| apply_f(&rep, i, &t, v).unwrap()),
                    Box::new(|v| apply_torus(&rep, i, &t, v).unwrap()),
                    Box::new(|v| tau(&rep, i, v).unwrap()),
                ];
                for op in &ops {
                    assert_eq!(
                        op(&xi.add(&xip).unwrap()),
                        op(&xi).add(&op(&xip)).unwrap()
                    );
                    assert_eq!(op(&xi.scale(&k).unwrap()), op(&xi).scale(&k).unwrap());
                }
            }
        }
    }

    #[test]
    fn f_generator_preserves_leading_part() {
        // (-i)^k xi = xi plus strictly lower-weight terms
        let rep = rep_a2();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let xi = sample_vector(&mut rng, Tag::TropicalInt, rep.dim());
            let k = sample_value(&mut rng, Tag::TropicalInt);
            let i = rng.gen_range(0..rep.rank());
            let out = apply_f(&rep, i, &k, &xi).unwrap();
            // heights: coefficient at b can only move to strictly larger
            // f-degree, so at each minimal-degree support element the
            // coefficient is unchanged
            let deg = |b: usize| {
                let diff: i64 = rep
                    .lambda
                    .iter()
                    .zip(rep.weight(b))
                    .map(|(l, w)| l - w)
                    .sum();
                diff
            };
            for b in xi.supp() {
                let lower = xi.supp().any(|bp| bp != b && deg(bp) < deg(b));
                if !lower {
                    // nothing above can land here
                    if xi.supp().all(|bp| bp == b || deg(bp) > deg(b)) {
                        assert_eq!(out.get(b), xi.get(b));
                    }
                }
            }
        }
    }

    #[test]
    fn relations_hold_on_small_modules() {
        for rep in [rep_a1(2), rep_a2()] {
            for tag in [Tag::PosRational, Tag::TropicalInt, Tag::PosRatFun] {
                let report = check_relations(&rep, tag, 3, 0).unwrap();
                assert!(!report.checked.is_empty());
            }
        }
        let rep = build_rep(&CartanDatum::parse_type("A1xA1").unwrap(), &vec![1, 1]).unwrap();
        check_relations(&rep, Tag::TropicalInt, 3, 0).unwrap();
    }

    #[test]
    fn r1_tropical_exponent_is_min() {
        // composing i^2 and i^5 gives i^min(2,5) = i^2 over the tropical tag
        let rep = rep_a1(2);
        for b in 0..rep.dim() {
            let basis = VkVector::basis(Tag::TropicalInt, b);
            let two_then_five = apply_e(
                &rep,
                0,
                &trop(2),
                &apply_e(&rep, 0, &trop(5), &basis).unwrap(),
            )
            .unwrap();
            assert_eq!(two_then_five, apply_e(&rep, 0, &trop(2), &basis).unwrap());
        }
    }

    #[test]
    fn injectivity_examples() {
        let rep = rep_a1(2);
        let xi = VkVector::basis(Tag::TropicalInt, 0);
        let xip = VkVector::basis(Tag::TropicalInt, 1);
        let a = apply_f(&rep, 0, &trop(1), &xi).unwrap();
        let b = apply_f(&rep, 0, &trop(1), &xip).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, apply_f(&rep, 0, &trop(1), &xi).unwrap());
        let rep2 = rep_a2();
        assert!(check_injectivity(&rep2, Tag::TropicalInt, 500, 0).unwrap() > 400);
    }

    #[test]
    fn json_roundtrip() {
        let v = trop_vec(&[(0, 0), (2, -3)]);
        let back = vk_from_json(&vk_to_json(&v)).unwrap();
        assert_eq!(back, v);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for tag in [Tag::PosRational, Tag::PosRatFun] {
            let v = sample_vector(&mut rng, tag, 5);
            assert_eq!(vk_from_json(&vk_to_json(&v)).unwrap(), v);
        }
    }

    #[test]
    fn word_parsing() {
        let word = parse_word(2, Tag::TropicalInt, "f1^3 e2^1 t1^2").unwrap();
        assert_eq!(
            word,
            vec![
                Gen::F(0, trop(3)),
                Gen::E(1, trop(1)),
                Gen::Torus(0, trop(2)),
            ]
        );
        assert!(parse_word(2, Tag::TropicalInt, "g1^3").is_err());
        assert!(parse_word(1, Tag::TropicalInt, "f2^3").is_err());
    }
}
