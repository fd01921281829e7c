//! Cells of the flag manifold over a semifield: the parametrization theta
//! of each piece indexed by a Bruhat pair v <= w, its support set, the
//! inverse parametrization and classifier, the full census, and the induced
//! actions on classified points.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::repdata::Rep;
use crate::rootdata::{positive_subexpression, PositiveSubexpression, WeylElem, WeylGroup};
use crate::semifield::{nat_embed, ExtValue, Tag, Value};
use crate::vk::{
    apply_f, apply_word, phi_k, projectivize, sample_value, tau, tau_inverse, vk_to_json, Gen,
    PkPoint, VkVector,
};

/// One piece of the partition: the pair v <= w, a reduced word of w with
/// its distinguished subexpression, and the support set carried by every
/// point of the piece.
#[derive(Debug, Clone)]
pub struct CellDescriptor {
    pub pse: PositiveSubexpression,
    pub support: BTreeSet<usize>,
    /// the extremal vector b_w
    pub bw: usize,
    /// suffix_bw[k] = id of the extremal vector of s_{i_k} ... s_{i_{m-1}};
    /// entry m is the highest weight vector
    pub suffix_bw: Vec<usize>,
    /// step_supports[k] = support after the positions k..m-1 have been
    /// applied; entry m is the highest weight line, entry 0 is `support`
    pub step_supports: Vec<BTreeSet<usize>>,
    /// whether the support exactly fills its upper bound
    /// beta^w ∩ phi(beta^{v w_I}); recorded as data, never asserted
    pub support_fills_bound: bool,
}

impl CellDescriptor {
    pub fn v(&self) -> WeylElem {
        self.pse.v
    }

    pub fn w(&self) -> WeylElem {
        self.pse.w
    }

    pub fn word(&self) -> &[usize] {
        &self.pse.word
    }

    /// Coordinate count of the piece.
    pub fn dim(&self) -> usize {
        self.pse.primes.len()
    }
}

fn check_h_len(pse: &PositiveSubexpression, h: &[Value], tag: Tag) -> Result<()> {
    if h.len() != pse.primes.len() {
        return Err(Error::Usage(format!(
            "expected {} coordinates, got {}",
            pse.primes.len(),
            h.len()
        )));
    }
    if let Some(v) = h.iter().find(|v| v.tag() != tag) {
        return Err(Error::TagMismatch(format!(
            "coordinate {v:?} does not match the requested semifield"
        )));
    }
    Ok(())
}

/// The parametrization applied to a bare subexpression, recording the
/// support after each position. Processes the word right to left from the
/// highest weight vector: free positions act by the f-generator with the
/// given coordinate, bound positions act by tau.
fn theta_steps(
    rep: &Rep,
    pse: &PositiveSubexpression,
    tag: Tag,
    h: &[Value],
) -> Result<(VkVector, Vec<BTreeSet<usize>>)> {
    check_h_len(pse, h, tag)?;
    let pos_of: HashMap<usize, usize> = pse
        .primes
        .iter()
        .enumerate()
        .map(|(j, &k)| (k, j))
        .collect();
    let m = pse.word.len();
    let mut xi = VkVector::basis(tag, rep.xi_plus);
    let mut steps = vec![BTreeSet::new(); m + 1];
    steps[m] = xi.supp_set();
    for k in (0..m).rev() {
        let i = pse.word[k];
        match pos_of.get(&k) {
            Some(&j) => xi = apply_f(rep, i, &h[j], &xi)?,
            None => {
                let dom = rep.compute_beta_ei(i);
                if let Some(b) = xi.supp().find(|b| !dom.contains(b)) {
                    return Err(Error::IntermediateDomainViolation(format!(
                        "support id {b} escapes beta^(e_{}) at position {}",
                        i + 1,
                        k + 1
                    )));
                }
                xi = tau(rep, i, &xi)?;
            }
        }
        steps[k] = xi.supp_set();
    }
    Ok((xi, steps))
}

/// The parametrization applied to a bare subexpression, before the support
/// set is known.
pub fn theta_raw(
    rep: &Rep,
    pse: &PositiveSubexpression,
    tag: Tag,
    h: &[Value],
) -> Result<VkVector> {
    theta_steps(rep, pse, tag, h).map(|(xi, _)| xi)
}

/// The per-step support sets of a piece: computed over the tropical
/// integers at h = 0 and cross-checked at 5 random positive-rational
/// coordinate tuples.
fn support_steps(rep: &Rep, pse: &PositiveSubexpression) -> Result<Vec<BTreeSet<usize>>> {
    let zero_h = vec![Value::Trop(BigInt::zero()); pse.primes.len()];
    let (_, steps) = theta_steps(rep, pse, Tag::TropicalInt, &zero_h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..5 {
        let h: Vec<Value> = (0..pse.primes.len())
            .map(|_| sample_value(&mut rng, Tag::PosRational))
            .collect();
        let (_, other) = theta_steps(rep, pse, Tag::PosRational, &h)?;
        if other != steps {
            return Err(Error::SupportInstability(format!(
                "support of piece (v={}, w={}) varies with the coordinates",
                pse.v, pse.w
            )));
        }
    }
    Ok(steps)
}

/// The support set of a piece.
pub fn support_set(rep: &Rep, pse: &PositiveSubexpression) -> Result<BTreeSet<usize>> {
    support_steps(rep, pse).map(|mut steps| steps.swap_remove(0))
}

/// Build the descriptor of the piece (v, w) along the given reduced word,
/// checking the structural invariants.
pub fn descriptor(
    rep: &Rep,
    group: &WeylGroup,
    v: WeylElem,
    word: &[usize],
) -> Result<CellDescriptor> {
    let pse = positive_subexpression(group, v, word)?;
    let w = pse.w;
    if pse.primes.len() != group.len(w) - group.len(v) {
        return Err(Error::InvariantViolation(format!(
            "free position count {} differs from l(w)-l(v)",
            pse.primes.len()
        )));
    }
    let m = word.len();
    let mut suffix = vec![group.identity(); m + 1];
    for k in (0..m).rev() {
        suffix[k] = group.mul(group.generator(word[k]), suffix[k + 1]);
    }
    let suffix_bw: Vec<usize> = suffix
        .iter()
        .map(|&u| rep.compute_bw(group, u))
        .collect::<Result<_>>()?;
    let bw = suffix_bw[0];
    let step_supports = support_steps(rep, &pse)?;
    let support = step_supports[0].clone();
    if !support.contains(&bw) {
        return Err(Error::InvariantViolation(format!(
            "extremal vector id {bw} missing from the support of (v={v}, w={w})"
        )));
    }
    // upper bound beta^w ∩ phi(beta^{v w_I})
    let beta_w = rep.compute_beta_w(group, w)?;
    let beta_vwi = rep.compute_beta_w(group, group.mul(v, group.longest()))?;
    let bound: BTreeSet<usize> = beta_w
        .iter()
        .copied()
        .filter(|&b| beta_vwi.contains(&rep.phi[b]))
        .collect();
    if let Some(b) = support.iter().find(|b| !bound.contains(b)) {
        return Err(Error::InvariantViolation(format!(
            "support id {b} of (v={v}, w={w}) escapes its weight bound"
        )));
    }
    // no support element sits one raising step above b_w in a direction
    // that still lengthens w
    for i in 0..rep.rank() {
        if group.len(group.mul(group.generator(i), w)) <= group.len(w) {
            continue;
        }
        let alpha = rep.cartan.simple_root(i);
        let raised: Vec<i64> = rep
            .weight(bw)
            .iter()
            .zip(&alpha)
            .map(|(x, a)| x + a)
            .collect();
        if let Some(b) = support.iter().find(|&&b| *rep.weight(b) == raised) {
            return Err(Error::InvariantViolation(format!(
                "support id {b} of (v={v}, w={w}) has a forbidden weight"
            )));
        }
    }
    let support_fills_bound = support == bound;
    Ok(CellDescriptor {
        pse,
        support,
        bw,
        suffix_bw,
        step_supports,
        support_fills_bound,
    })
}

/// The parametrization of the piece, with its support contract asserted.
pub fn theta(rep: &Rep, desc: &CellDescriptor, tag: Tag, h: &[Value]) -> Result<VkVector> {
    let xi = theta_raw(rep, &desc.pse, tag, h)?;
    if xi.supp_set() != desc.support {
        return Err(Error::InvariantViolation(format!(
            "parametrized point of (v={}, w={}) has the wrong support",
            desc.v(),
            desc.w()
        )));
    }
    if xi.get(desc.bw).is_absent() {
        return Err(Error::InvariantViolation(
            "extremal coefficient is absent".into(),
        ));
    }
    Ok(xi)
}

/// Independent implementation of the parametrization: materializes the sum
/// over exponent assignments on the free positions, with the exponent at
/// each bound position read off from the accumulated weight. Exponential in
/// the number of free positions; used as a cross-check only.
pub fn theta_oracle(rep: &Rep, desc: &CellDescriptor, tag: Tag, h: &[Value]) -> Result<VkVector> {
    check_h_len(&desc.pse, h, tag)?;
    let word = desc.word();
    let m = word.len();
    let pos_of: HashMap<usize, usize> = desc
        .pse
        .primes
        .iter()
        .enumerate()
        .map(|(j, &k)| (k, j))
        .collect();
    // per-coordinate exponent bound: the largest stored divided power
    let radix: Vec<usize> = desc.pse.primes.iter().map(|&k| rep.f_ops[word[k]].len()).collect();
    let mut chi = vec![0usize; radix.len()];
    let mut out = VkVector::empty(tag);
    loop {
        // one exponent assignment: apply the monomial right to left
        let mut vec = rep.indicator(rep.xi_plus);
        let mut nu = rep.lambda.clone();
        let mut scalar = Value::one(tag);
        let mut vanished = false;
        for k in (0..m).rev() {
            let i = word[k];
            let n: i64 = match pos_of.get(&k) {
                Some(&j) => {
                    let n = chi[j] as i64;
                    scalar = scalar.mul(&h[j].pow(n))?;
                    n
                }
                None => {
                    let c = nu[i];
                    if c < 0 {
                        vanished = true;
                        break;
                    }
                    c
                }
            };
            if n > 0 {
                vec = rep.apply_f_q(i, n, &vec);
                let alpha = rep.cartan.simple_root(i);
                for (x, a) in nu.iter_mut().zip(&alpha) {
                    *x -= n * a;
                }
            }
            if vec.iter().all(|c| c.is_zero()) {
                vanished = true;
                break;
            }
        }
        if !vanished {
            for (b, coeff) in vec.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let nat = coeff
                    .to_integer()
                    .to_biguint()
                    .expect("structure constants are nonnegative");
                let term = match nat_embed(tag, &nat) {
                    ExtValue::Present(v) => scalar.mul(&v)?,
                    ExtValue::Absent => unreachable!(),
                };
                out.add_at(b, &term)?;
            }
        }
        // advance the mixed-radix counter
        let mut j = 0;
        loop {
            if j == chi.len() {
                let direct = theta(rep, desc, tag, h)?;
                if out != direct {
                    return Err(Error::OracleMismatch(format!(
                        "(v={}, w={}): {} vs {}",
                        desc.v(),
                        desc.w(),
                        vk_to_json(&out),
                        vk_to_json(&direct)
                    )));
                }
                return Ok(out);
            }
            chi[j] += 1;
            if chi[j] < radix[j] {
                break;
            }
            chi[j] = 0;
            j += 1;
        }
    }
}

/// The projectivized parametrization.
pub fn omega(rep: &Rep, desc: &CellDescriptor, tag: Tag, h: &[Value]) -> Result<PkPoint> {
    projectivize(&theta(rep, desc, tag, h)?)
}

/// The support set of (v, w), shown independent of the reduced word by
/// computing it for every reduced word of w.
pub fn beta_vw(
    rep: &Rep,
    group: &WeylGroup,
    v: WeylElem,
    w: WeylElem,
) -> Result<BTreeSet<usize>> {
    if !group.bruhat_leq(v, w) {
        return Err(Error::NotBruhatBelow(format!("v={v} is not below w={w}")));
    }
    let mut result: Option<BTreeSet<usize>> = None;
    for word in group.reduced_words(w) {
        let pse = positive_subexpression(group, v, &word)?;
        let supp = support_set(rep, &pse)?;
        match &result {
            None => result = Some(supp),
            Some(first) => {
                if *first != supp {
                    return Err(Error::ReducedWordDependence(format!(
                        "support of (v={v}, w={w}) differs between reduced words"
                    )));
                }
            }
        }
    }
    Ok(result.expect("every element has a reduced word"))
}

/// The full partition table: one descriptor per Bruhat pair v <= w, with
/// pairwise distinct supports.
#[derive(Debug, Clone)]
pub struct Census {
    pub entries: Vec<CellDescriptor>,
    by_support: BTreeMap<Vec<usize>, usize>,
}

impl Census {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, supp: &BTreeSet<usize>) -> Option<&CellDescriptor> {
        let key: Vec<usize> = supp.iter().copied().collect();
        self.by_support.get(&key).map(|&idx| &self.entries[idx])
    }

    pub fn find(&self, v: WeylElem, w: WeylElem) -> Option<&CellDescriptor> {
        self.entries
            .iter()
            .find(|d| d.v() == v && d.w() == w)
    }
}

pub fn census(rep: &Rep, group: &WeylGroup) -> Result<Census> {
    if !crate::rootdata::is_very_dominant(&rep.lambda) {
        return Err(Error::LambdaNotVeryDominant(format!(
            "census requires strictly dominant lambda, got {:?}",
            rep.lambda
        )));
    }
    let mut entries = Vec::new();
    let mut by_support = BTreeMap::new();
    for (v, w) in group.bruhat_pairs() {
        let desc = descriptor(rep, group, v, group.reduced_word(w).to_vec().as_slice())?;
        // the support must not depend on the chosen reduced word
        let zero_h = |pse: &PositiveSubexpression| {
            let h = vec![Value::Trop(BigInt::zero()); pse.primes.len()];
            theta_raw(rep, pse, Tag::TropicalInt, &h).map(|xi| xi.supp_set())
        };
        for word in group.reduced_words(w) {
            let pse = positive_subexpression(group, v, &word)?;
            if zero_h(&pse)? != desc.support {
                return Err(Error::ReducedWordDependence(format!(
                    "support of (v={v}, w={w}) differs between reduced words"
                )));
            }
        }
        let key: Vec<usize> = desc.support.iter().copied().collect();
        if let Some(&other) = by_support.get(&key) {
            let o: &CellDescriptor = &entries[other];
            return Err(Error::DuplicateSupport(format!(
                "(v={v}, w={w}) and (v={}, w={}) share a support",
                o.v(),
                o.w()
            )));
        }
        by_support.insert(key, entries.len());
        entries.push(desc);
    }
    Ok(Census {
        entries,
        by_support,
    })
}

pub fn census_to_json(group: &WeylGroup, census: &Census) -> serde_json::Value {
    let pieces: Vec<serde_json::Value> = census
        .entries
        .iter()
        .map(|d| {
            json!({
                "v": group.element_string(d.v()),
                "w": group.element_string(d.w()),
                "word": d.word().iter().map(|i| i + 1).collect::<Vec<_>>(),
                "primes": d.pse.primes.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "support": d.support.iter().collect::<Vec<_>>(),
                "dim": d.dim(),
                "support_fills_bound": d.support_fills_bound,
            })
        })
        .collect();
    json!({"schema": "census-v1", "pieces": pieces})
}

// ---------------------------------------------------------------------------
// inverse parametrization

/// Signed field arithmetic lifting the rational-valued semifields, used to
/// undo an f-generator by the alternating inverse series.
#[derive(Debug, Clone)]
enum FieldElt {
    Q(BigRational),
    R(Poly, Poly),
}

impl FieldElt {
    fn zero(tag: Tag) -> FieldElt {
        match tag {
            Tag::PosRational => FieldElt::Q(BigRational::zero()),
            Tag::PosRatFun => FieldElt::R(Poly::zero(), Poly::one()),
            Tag::TropicalInt => unreachable!("tropical values have no signed lift"),
        }
    }

    fn from_value(v: &Value) -> FieldElt {
        match v {
            Value::PosRat(r) => FieldElt::Q(r.clone()),
            Value::RatFun(rf) => {
                let e = rf.e.to_i64().expect("desk-scale exponent");
                if e >= 0 {
                    FieldElt::R(rf.num.shl_x(e as usize), rf.den.clone())
                } else {
                    FieldElt::R(rf.num.clone(), rf.den.shl_x((-e) as usize))
                }
            }
            Value::Trop(_) => unreachable!("tropical values have no signed lift"),
        }
    }

    fn from_nat(tag: Tag, n: &num_bigint::BigUint) -> FieldElt {
        let c = BigRational::from(BigInt::from(n.clone()));
        match tag {
            Tag::PosRational => FieldElt::Q(c),
            Tag::PosRatFun => FieldElt::R(Poly::constant(c), Poly::one()),
            Tag::TropicalInt => unreachable!(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            FieldElt::Q(r) => r.is_zero(),
            FieldElt::R(n, _) => n.is_zero(),
        }
    }

    fn reduce(num: Poly, den: Poly) -> FieldElt {
        if num.is_zero() {
            return FieldElt::R(Poly::zero(), Poly::one());
        }
        let g = num.gcd(&den);
        if g.degree().map_or(false, |d| d > 0) {
            FieldElt::R(num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            FieldElt::R(num, den)
        }
    }

    fn add(&self, other: &FieldElt) -> FieldElt {
        match (self, other) {
            (FieldElt::Q(a), FieldElt::Q(b)) => FieldElt::Q(a + b),
            (FieldElt::R(n1, d1), FieldElt::R(n2, d2)) => {
                FieldElt::reduce(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2))
            }
            _ => unreachable!("mixed field elements"),
        }
    }

    fn mul(&self, other: &FieldElt) -> FieldElt {
        match (self, other) {
            (FieldElt::Q(a), FieldElt::Q(b)) => FieldElt::Q(a * b),
            (FieldElt::R(n1, d1), FieldElt::R(n2, d2)) => {
                FieldElt::reduce(n1.mul(n2), d1.mul(d2))
            }
            _ => unreachable!("mixed field elements"),
        }
    }

    fn neg(&self) -> FieldElt {
        match self {
            FieldElt::Q(a) => FieldElt::Q(-a),
            FieldElt::R(n, d) => FieldElt::R(n.neg(), d.clone()),
        }
    }

    /// Back into the semifield: zero becomes the absent coefficient; a
    /// value outside the semifield means the vector was not in the image.
    fn to_ext(&self) -> Result<ExtValue> {
        match self {
            FieldElt::Q(r) => {
                if r.is_zero() {
                    Ok(ExtValue::Absent)
                } else if r.is_positive() {
                    Ok(ExtValue::Present(Value::PosRat(r.clone())))
                } else {
                    Err(Error::PeelFailure(format!(
                        "negative coefficient {r} while undoing an f-generator"
                    )))
                }
            }
            FieldElt::R(n, d) => {
                if n.is_zero() {
                    return Ok(ExtValue::Absent);
                }
                let rf = crate::semifield::RatFun::new(BigInt::zero(), n.clone(), d.clone())
                    .map_err(|_| {
                        Error::PeelFailure(
                            "coefficient left the semifield while undoing an f-generator".into(),
                        )
                    })?;
                Ok(ExtValue::Present(Value::RatFun(rf)))
            }
        }
    }
}

/// A preimage of xi under the f-generator with parameter k, or an error if
/// none exists. Over the rational-valued semifields (which cancel) the
/// preimage is unique; over the tropical integers the minimum can mask
/// coordinates, so `allowed` restricts the support of the solution to the
/// known support of the earlier cell stage.
pub fn invert_apply_f(
    rep: &Rep,
    i: usize,
    k: &Value,
    xi: &VkVector,
    allowed: Option<&BTreeSet<usize>>,
) -> Result<VkVector> {
    let out = match xi.tag {
        Tag::TropicalInt => invert_apply_f_tropical(rep, i, k, xi, allowed),
        _ => invert_apply_f_field(rep, i, k, xi),
    }?;
    if apply_f(rep, i, k, &out)? != *xi {
        return Err(Error::PeelFailure(
            "vector is not in the image of the f-generator".into(),
        ));
    }
    Ok(out)
}

/// Min-plus residuation: the componentwise least value compatible with
/// every constraint solves the system whenever any solution exists.
fn invert_apply_f_tropical(
    rep: &Rep,
    i: usize,
    k: &Value,
    xi: &VkVector,
    allowed: Option<&BTreeSet<usize>>,
) -> Result<VkVector> {
    let Value::Trop(h) = k else {
        return Err(Error::TagMismatch("tropical inversion".into()));
    };
    // lower[b]: Some(max of t_{b'} - n*h), None once forced to be absent
    let mut lower: Vec<Option<Option<BigInt>>> = vec![Some(None); rep.dim()];
    if let Some(allowed) = allowed {
        for (b, slot) in lower.iter_mut().enumerate() {
            if !allowed.contains(&b) {
                *slot = None;
            }
        }
    }
    for (n, op) in rep.f_ops[i].iter().enumerate() {
        let shift = BigInt::from(n) * h;
        for b in 0..rep.dim() {
            for (bp, _) in &op.rows[b] {
                let bound = match xi.coeffs.get(bp) {
                    Some(Value::Trop(t)) => Some(t - &shift),
                    Some(_) => unreachable!(),
                    None => None, // an absent target forces an absent source
                };
                match (&mut lower[b], bound) {
                    (slot @ Some(_), None) => *slot = None,
                    (Some(cur), Some(t)) => {
                        if cur.as_ref().map_or(true, |c| t > *c) {
                            *cur = Some(t);
                        }
                    }
                    (None, _) => {}
                }
            }
        }
    }
    let mut out = VkVector::empty(Tag::TropicalInt);
    for (b, slot) in lower.into_iter().enumerate() {
        if let Some(Some(t)) = slot {
            out.coeffs.insert(b, Value::Trop(t));
        }
    }
    Ok(out)
}

/// Exact inversion over the rational-valued semifields via the alternating
/// series sum_n (-k)^n f_i^{(n)}, computed in the ambient field.
fn invert_apply_f_field(rep: &Rep, i: usize, k: &Value, xi: &VkVector) -> Result<VkVector> {
    let tag = xi.tag;
    let kf = FieldElt::from_value(k);
    let mut acc: Vec<FieldElt> = (0..rep.dim()).map(|_| FieldElt::zero(tag)).collect();
    let mut pow = match tag {
        Tag::PosRational => FieldElt::Q(BigRational::from(BigInt::from(1))),
        _ => FieldElt::R(Poly::one(), Poly::one()),
    };
    for op in rep.f_ops[i].iter() {
        for (b, coeff) in &xi.coeffs {
            let c = FieldElt::from_value(coeff).mul(&pow);
            if c.is_zero() {
                continue;
            }
            for (bp, d) in &op.rows[*b] {
                acc[*bp] = acc[*bp].add(&c.mul(&FieldElt::from_nat(tag, d)));
            }
        }
        pow = pow.mul(&kf.neg());
    }
    let mut out = VkVector::empty(tag);
    for (b, v) in acc.iter().enumerate() {
        out.set(b, v.to_ext()?);
    }
    Ok(out)
}

/// The exponent assignments on the free positions whose monomial
/// contributes to each coefficient of the parametrization, keyed by basis
/// index and sorted by the number of assignments. Over the tropical
/// integers the coefficient at b is the minimum over these assignments chi
/// of the linear form sum_j chi_j * h_j.
fn piece_monomials(rep: &Rep, desc: &CellDescriptor) -> Vec<(usize, Vec<Vec<u64>>)> {
    let word = desc.word();
    let m = word.len();
    let pos_of: HashMap<usize, usize> = desc
        .pse
        .primes
        .iter()
        .enumerate()
        .map(|(j, &k)| (k, j))
        .collect();
    let radix: Vec<usize> = desc
        .pse
        .primes
        .iter()
        .map(|&k| rep.f_ops[word[k]].len())
        .collect();
    let mut chi = vec![0usize; radix.len()];
    let mut mons: BTreeMap<usize, BTreeSet<Vec<u64>>> = BTreeMap::new();
    loop {
        let mut vec = rep.indicator(rep.xi_plus);
        let mut nu = rep.lambda.clone();
        let mut vanished = false;
        for k in (0..m).rev() {
            let i = word[k];
            let n: i64 = match pos_of.get(&k) {
                Some(&j) => chi[j] as i64,
                None => {
                    let c = nu[i];
                    if c < 0 {
                        vanished = true;
                        break;
                    }
                    c
                }
            };
            if n > 0 {
                vec = rep.apply_f_q(i, n, &vec);
                let alpha = rep.cartan.simple_root(i);
                for (x, a) in nu.iter_mut().zip(&alpha) {
                    *x -= n * a;
                }
            }
            if vec.iter().all(|c| c.is_zero()) {
                vanished = true;
                break;
            }
        }
        if !vanished {
            let exps: Vec<u64> = chi.iter().map(|&n| n as u64).collect();
            for (b, coeff) in vec.iter().enumerate() {
                if !coeff.is_zero() {
                    mons.entry(b).or_default().insert(exps.clone());
                }
            }
        }
        let mut j = 0;
        loop {
            if j == chi.len() {
                let mut out: Vec<(usize, Vec<Vec<u64>>)> = mons
                    .into_iter()
                    .map(|(b, s)| (b, s.into_iter().collect()))
                    .collect();
                out.sort_by_key(|(_, v)| v.len());
                return out;
            }
            chi[j] += 1;
            if chi[j] < radix[j] {
                break;
            }
            chi[j] = 0;
            j += 1;
        }
    }
}

/// Reduced row echelon form over the rationals, grown one equation at a
/// time; each stored row is normalized and eliminated against the others.
#[derive(Clone)]
struct Rref {
    rows: Vec<(usize, Vec<BigRational>, BigRational)>,
}

enum RrefAdd {
    Added,
    Redundant,
    Inconsistent,
}

impl Rref {
    fn new() -> Rref {
        Rref { rows: Vec::new() }
    }

    fn add(&mut self, mut coeffs: Vec<BigRational>, mut rhs: BigRational) -> RrefAdd {
        for (piv, pc, prhs) in &self.rows {
            let f = coeffs[*piv].clone();
            if !f.is_zero() {
                for (c, pcv) in coeffs.iter_mut().zip(pc) {
                    *c -= &f * pcv;
                }
                rhs -= &f * prhs;
            }
        }
        let Some(piv) = coeffs.iter().position(|c| !c.is_zero()) else {
            return if rhs.is_zero() {
                RrefAdd::Redundant
            } else {
                RrefAdd::Inconsistent
            };
        };
        let lead = coeffs[piv].clone();
        for c in coeffs.iter_mut() {
            *c /= lead.clone();
        }
        rhs /= lead;
        for (_, pc, prhs) in self.rows.iter_mut() {
            let g = pc[piv].clone();
            if !g.is_zero() {
                for (c, nv) in pc.iter_mut().zip(&coeffs) {
                    *c -= &g * nv;
                }
                *prhs -= &g * &rhs;
            }
        }
        self.rows.push((piv, coeffs, rhs));
        RrefAdd::Added
    }
}

struct TropicalSolver<'a> {
    rep: &'a Rep,
    desc: &'a CellDescriptor,
    xi_proj: PkPoint,
    // one entry per support element: its coefficient and the candidate
    // linear forms, any one of which may attain it
    eqs: Vec<(BigRational, Vec<Vec<u64>>)>,
    nvars: usize,
}

impl TropicalSolver<'_> {
    fn row(&self, chi: &[u64]) -> Vec<BigRational> {
        // variables: the global scale followed by the coordinates
        let mut row = Vec::with_capacity(self.nvars);
        row.push(BigRational::from(BigInt::from(1)));
        row.extend(chi.iter().map(|&n| BigRational::from(BigInt::from(n))));
        row
    }

    fn search(&self, idx: usize, rref: &Rref) -> Option<Vec<Value>> {
        if rref.rows.len() == self.nvars {
            return self.check_candidate(rref);
        }
        if idx == self.eqs.len() {
            return None;
        }
        let (t, chis) = &self.eqs[idx];
        for chi in chis {
            let mut next = rref.clone();
            match next.add(self.row(chi), t.clone()) {
                RrefAdd::Inconsistent => continue,
                RrefAdd::Added | RrefAdd::Redundant => {
                    if let Some(h) = self.search(idx + 1, &next) {
                        return Some(h);
                    }
                }
            }
        }
        None
    }

    fn check_candidate(&self, rref: &Rref) -> Option<Vec<Value>> {
        let mut x = vec![BigRational::zero(); self.nvars];
        for (piv, _, rhs) in &rref.rows {
            x[*piv] = rhs.clone();
        }
        let mut h = Vec::with_capacity(self.nvars - 1);
        for v in &x[1..] {
            if !v.is_integer() {
                return None;
            }
            h.push(Value::Trop(v.to_integer()));
        }
        let cand = theta(self.rep, self.desc, Tag::TropicalInt, &h).ok()?;
        if projectivize(&cand).ok()? == self.xi_proj {
            Some(h)
        } else {
            None
        }
    }
}

/// Recover the coordinates of a tropical point of the piece. The
/// left-to-right peel is unsound here: the minimum can mask the
/// coefficients it reads. Instead, every coefficient of the parametrized
/// point equals the minimum of a known set of linear forms in the
/// coordinates (plus a global scale), so we branch over which form attains
/// each minimum, solve the resulting rational linear systems exactly, and
/// keep the unique solution that reproduces the point.
fn invert_theta_tropical(rep: &Rep, desc: &CellDescriptor, xi: &VkVector) -> Result<Vec<Value>> {
    let mons = piece_monomials(rep, desc);
    let mut eqs = Vec::with_capacity(mons.len());
    for (b, chis) in mons {
        let Some(Value::Trop(t)) = xi.coeffs.get(&b) else {
            return Err(Error::NotInCell(format!(
                "support does not match the piece (v={}, w={})",
                desc.v(),
                desc.w()
            )));
        };
        eqs.push((BigRational::from(t.clone()), chis));
    }
    let solver = TropicalSolver {
        rep,
        desc,
        xi_proj: projectivize(xi)?,
        eqs,
        nvars: desc.dim() + 1,
    };
    solver.search(0, &Rref::new()).ok_or_else(|| {
        Error::PeelFailure("no coordinate tuple reproduces the point".into())
    })
}

/// Recover the coordinates of a point of the piece. Over the
/// rational-valued semifields the word is peeled left to right: bound
/// positions are undone by the inverse of tau, free positions read their
/// coordinate from the two extremal-weight coefficients and then undo the
/// f-generator. Over the tropical integers the peel is unsound and a
/// global solve is used instead.
pub fn invert_theta(rep: &Rep, desc: &CellDescriptor, xi: &VkVector) -> Result<Vec<Value>> {
    if xi.supp_set() != desc.support {
        return Err(Error::NotInCell(format!(
            "support does not match the piece (v={}, w={})",
            desc.v(),
            desc.w()
        )));
    }
    let tag = xi.tag;
    if tag == Tag::TropicalInt {
        return invert_theta_tropical(rep, desc, xi);
    }
    let mut cur = xi.clone();
    let mut h = Vec::with_capacity(desc.dim());
    for (k, q) in desc.pse.q.iter().enumerate() {
        let i = desc.word()[k];
        if cur.supp_set() != desc.step_supports[k] {
            return Err(Error::PeelFailure(format!(
                "unexpected support at position {}",
                k + 1
            )));
        }
        if q.is_some() {
            let dom = rep.compute_beta_fi(i);
            if cur.supp().any(|b| !dom.contains(&b)) {
                return Err(Error::PeelFailure(format!(
                    "support escapes beta^(f_{}) at position {}",
                    i + 1,
                    k + 1
                )));
            }
            cur = tau_inverse(rep, i, &cur)?;
        } else {
            let bwp = desc.suffix_bw[k + 1];
            let Some(c) = cur.coeffs.get(&bwp).cloned() else {
                return Err(Error::PeelFailure(format!(
                    "extremal coefficient absent at position {}",
                    k + 1
                )));
            };
            let op = rep
                .f_op(i, 1)
                .ok_or_else(|| Error::PeelFailure("missing first divided power".into()))?;
            let (bp, d) = op.rows[bwp]
                .first()
                .ok_or_else(|| Error::PeelFailure("extremal vector is f-killed".into()))?;
            let Some(num) = cur.coeffs.get(bp).cloned() else {
                return Err(Error::PeelFailure(format!(
                    "lowered coefficient absent at position {}",
                    k + 1
                )));
            };
            let den = match nat_embed(tag, d) {
                ExtValue::Present(v) => c.mul(&v)?,
                ExtValue::Absent => unreachable!("d > 0"),
            };
            let hk = num.div(&den)?;
            cur = invert_apply_f(rep, i, &hk, &cur, Some(&desc.step_supports[k + 1]))?;
            h.push(hk);
        }
    }
    if cur.supp_set() != BTreeSet::from([rep.xi_plus]) {
        return Err(Error::PeelFailure(
            "peeling did not terminate at the highest weight line".into(),
        ));
    }
    // the recovered coordinates must reproduce the point projectively
    let check = projectivize(&theta(rep, desc, tag, &h)?)?;
    if check != projectivize(xi)? {
        return Err(Error::PeelFailure(
            "recovered coordinates do not reproduce the point".into(),
        ));
    }
    Ok(h)
}

/// Locate the piece containing the vector and recover its coordinates.
pub fn classify(
    rep: &Rep,
    census: &Census,
    xi: &VkVector,
) -> Result<(WeylElem, WeylElem, Vec<Value>)> {
    let supp = xi.supp_set();
    let desc = census.lookup(&supp).ok_or_else(|| {
        Error::UnknownSupport(format!("support {supp:?} matches no census piece"))
    })?;
    let h = invert_theta(rep, desc, xi)?;
    Ok((desc.v(), desc.w(), h))
}

/// Apply a generator word to a point and classify the image.
pub fn act(
    rep: &Rep,
    census: &Census,
    word: &[Gen],
    point: &PkPoint,
) -> Result<(WeylElem, WeylElem, Vec<Value>)> {
    let img = apply_word(rep, word, point.vector())?;
    classify(rep, census, &img)
}

/// The basis involution on classified points.
pub fn phi_on_cells(
    rep: &Rep,
    census: &Census,
    point: &PkPoint,
) -> Result<(PkPoint, (WeylElem, WeylElem, Vec<Value>))> {
    let img = projectivize(&phi_k(rep, point.vector()))?;
    let cls = classify(rep, census, img.vector())?;
    Ok((img, cls))
}

/// All coordinate tuples with entries in the integer interval [-radius,
/// radius], over the tropical tag.
pub fn tropical_grid(dim: usize, radius: i64) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::new();
        for tuple in &out {
            for x in -radius..=radius {
                let mut t = tuple.clone();
                t.push(Value::Trop(BigInt::from(x)));
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Random coordinate tuples for a piece.
pub fn sample_h<R: Rng>(rng: &mut R, tag: Tag, dim: usize) -> Vec<Value> {
    (0..dim).map(|_| sample_value(rng, tag)).collect()
}
