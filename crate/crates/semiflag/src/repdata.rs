//! Canonical-basis data of irreducible highest-weight modules over exact
//! rationals: the basis, weights, divided-power structure constants,
//! the involution phi, extremal vectors b_w, and the subsets beta^w,
//! beta^{e_i}, beta^{f_i}.
//!
//! Built-in constructions cover type A1, type A2, and products of those
//! (each A2 module is realized inside a tensor power of the two 3-dim
//! modules and cut out by exact linear algebra). Everything else comes in
//! through the `repdata-v1` JSON schema and is re-validated on load.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{qvec_is_zero, qvec_zero, BasisSolver, QVec};
use crate::rootdata::{CartanComponent, CartanDatum, Weight, WeylElem, WeylGroup};

/// An f-monomial: pairs (i, n) meaning f_{i_1}^{(n_1)} ... f_{i_k}^{(n_k)}
/// applied to the highest weight vector, rightmost factor first.
pub type Monomial = Vec<(usize, u64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub id: usize,
    pub weight: Weight,
    pub provenance: Monomial,
}

/// A divided-power operator on the canonical basis: row b lists the pairs
/// (b', coefficient) of the image of b. All coefficients are nonnegative
/// integers by construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Op {
    pub rows: Vec<Vec<(usize, BigUint)>>,
}

impl Op {
    pub fn identity(dim: usize) -> Op {
        Op {
            rows: (0..dim).map(|b| vec![(b, BigUint::one())]).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn entry(&self, b: usize, bp: usize) -> BigUint {
        self.rows[b]
            .iter()
            .find(|(t, _)| *t == bp)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigUint::zero)
    }

    /// Apply to an exact rational vector in basis coordinates.
    pub fn apply_q(&self, v: &QVec) -> QVec {
        let mut out = qvec_zero(self.rows.len());
        for (b, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (bp, d) in &self.rows[b] {
                out[*bp] += c * BigRational::from(BigInt::from(d.clone()));
            }
        }
        out
    }

    fn dense(&self) -> Vec<QVec> {
        let n = self.rows.len();
        let mut m = vec![qvec_zero(n); n];
        for (b, row) in self.rows.iter().enumerate() {
            for (bp, c) in row {
                m[b][*bp] = BigRational::from(BigInt::from(c.clone()));
            }
        }
        m
    }
}

fn dense_compose(first: &[QVec], then: &[QVec]) -> Vec<QVec> {
    // row b of the result is the image of b under `first` followed by `then`
    let n = first.len();
    let mut out = vec![qvec_zero(n); n];
    for b in 0..n {
        for (mid, c) in first[b].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (bp, d) in then[mid].iter().enumerate() {
                if !d.is_zero() {
                    out[b][bp] += c * d;
                }
            }
        }
    }
    out
}

fn factorial(n: u64) -> BigRational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    BigRational::from(f)
}

/// Weyl dimension of the type-A_r irreducible with highest weight lambda.
fn weyl_dim_type_a(lambda: &[i64]) -> u64 {
    let r = lambda.len();
    let mut num = BigRational::one();
    for i in 0..r {
        for j in i..r {
            let sum: i64 = lambda[i..=j].iter().sum();
            let len = (j - i + 1) as i64;
            num *= BigRational::new(BigInt::from(sum + len), BigInt::from(len));
        }
    }
    assert!(num.is_integer());
    num.to_integer().to_u64().expect("dimension overflows u64")
}

/// Weyl dimension of a product of type-A components.
pub fn weyl_dim(components: &[CartanComponent], lambda: &Weight) -> Result<u64> {
    let mut dim = 1u64;
    let mut off = 0;
    for c in components {
        if c.kind != "A" {
            return Err(Error::UnsupportedType(format!(
                "no dimension formula for type {}",
                c.kind
            )));
        }
        dim *= weyl_dim_type_a(&lambda[off..off + c.rank]);
        off += c.rank;
    }
    if off != lambda.len() {
        return Err(Error::DimensionMismatch(
            "lambda length does not match the Cartan rank".into(),
        ));
    }
    Ok(dim)
}

/// The canonical-basis package of one irreducible module.
#[derive(Debug, Clone)]
pub struct Rep {
    pub cartan: CartanDatum,
    pub lambda: Weight,
    pub basis: Vec<BasisElement>,
    /// f_ops[i][n] is the matrix of f_i^{(n)}; n past the stored range is zero
    pub f_ops: Vec<Vec<Op>>,
    pub e_ops: Vec<Vec<Op>>,
    pub xi_plus: usize,
    pub xi_minus: usize,
    pub phi: Vec<usize>,
    /// index relabeling under phi: phi(e_i^(n) x) = f_{sigma(i)}^(n) phi(x).
    /// The identity whenever the highest weight is symmetric enough for the
    /// plain intertwiner to exist; the -w_I diagram flip otherwise.
    pub phi_sigma: Vec<usize>,
}

impl Rep {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn weight(&self, b: usize) -> &Weight {
        &self.basis[b].weight
    }

    /// z_i(b) = <i, nu_b>.
    pub fn z(&self, i: usize, b: usize) -> i64 {
        self.basis[b].weight[i]
    }

    /// f_i^{(n)}; None encodes the zero map (n < 0 or beyond the stored range).
    pub fn f_op(&self, i: usize, n: i64) -> Option<&Op> {
        if n < 0 {
            return None;
        }
        self.f_ops[i].get(n as usize)
    }

    pub fn e_op(&self, i: usize, n: i64) -> Option<&Op> {
        if n < 0 {
            return None;
        }
        self.e_ops[i].get(n as usize)
    }

    fn op_apply_q(&self, ops: &[Vec<Op>], i: usize, n: i64, v: &QVec) -> QVec {
        match (n >= 0).then(|| ops[i].get(n as usize)).flatten() {
            Some(op) => op.apply_q(v),
            None => qvec_zero(self.dim()),
        }
    }

    pub fn apply_f_q(&self, i: usize, n: i64, v: &QVec) -> QVec {
        self.op_apply_q(&self.f_ops, i, n, v)
    }

    pub fn apply_e_q(&self, i: usize, n: i64, v: &QVec) -> QVec {
        self.op_apply_q(&self.e_ops, i, n, v)
    }

    pub fn indicator(&self, b: usize) -> QVec {
        let mut v = qvec_zero(self.dim());
        v[b] = BigRational::one();
        v
    }

    /// The extremal vector b_w, via the weight-wise rule along a reduced
    /// word processed right to left.
    pub fn compute_bw(&self, group: &WeylGroup, w: WeylElem) -> Result<usize> {
        let mut cur = self.xi_plus;
        for &i in group.reduced_word(w).iter().rev() {
            let n = self.z(i, cur);
            if n < 0 {
                return Err(Error::NotExtremal(format!(
                    "negative pairing <{}, nu> = {n} at basis id {cur}",
                    i + 1
                )));
            }
            let row = match self.f_op(i, n) {
                Some(op) => &op.rows[cur],
                None => {
                    return Err(Error::NotExtremal(format!(
                        "f_{}^({n}) kills basis id {cur}",
                        i + 1
                    )))
                }
            };
            if row.len() != 1 || !row[0].1.is_one() {
                return Err(Error::NotExtremal(format!(
                    "f_{}^({n}) of basis id {cur} is not a unit basis vector",
                    i + 1
                )));
            }
            cur = row[0].0;
        }
        Ok(cur)
    }

    /// Supports of all f-monomial images of xi_plus along one reduced word.
    fn beta_w_f_side(&self, word: &[usize]) -> BTreeSet<usize> {
        let mut stage: HashSet<QVec> = HashSet::new();
        stage.insert(self.indicator(self.xi_plus));
        for &i in word.iter().rev() {
            let mut next = HashSet::new();
            for v in &stage {
                let mut n = 0i64;
                loop {
                    let img = self.apply_f_q(i, n, v);
                    if qvec_is_zero(&img) {
                        break;
                    }
                    next.insert(img);
                    n += 1;
                }
            }
            stage = next;
        }
        let mut supp = BTreeSet::new();
        for v in &stage {
            supp.extend(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(b, _)| b));
        }
        supp
    }

    /// Dual description: supports of the e-monomial images of b_w.
    fn beta_w_e_side(&self, group: &WeylGroup, w: WeylElem, word: &[usize]) -> Result<BTreeSet<usize>> {
        let bw = self.compute_bw(group, w)?;
        let mut stage: HashSet<QVec> = HashSet::new();
        stage.insert(self.indicator(bw));
        for &i in word.iter() {
            let mut next = HashSet::new();
            for v in &stage {
                let mut n = 0i64;
                loop {
                    let img = self.apply_e_q(i, n, v);
                    if qvec_is_zero(&img) {
                        break;
                    }
                    next.insert(img);
                    n += 1;
                }
            }
            stage = next;
        }
        let mut supp = BTreeSet::new();
        for v in &stage {
            supp.extend(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(b, _)| b));
        }
        Ok(supp)
    }

    /// beta^w, cross-checked against the dual e-monomial description.
    pub fn compute_beta_w(&self, group: &WeylGroup, w: WeylElem) -> Result<BTreeSet<usize>> {
        let word = group.reduced_word(w).to_vec();
        let f_side = self.beta_w_f_side(&word);
        let e_side = self.beta_w_e_side(group, w, &word)?;
        if f_side != e_side {
            return Err(Error::CrossCheckMismatch(format!(
                "beta^w differs between the f- and e-descriptions for w id {w}: {f_side:?} vs {e_side:?}"
            )));
        }
        Ok(f_side)
    }

    /// beta^{e_i}: basis elements killed by e_i.
    pub fn compute_beta_ei(&self, i: usize) -> BTreeSet<usize> {
        let zero_row = Vec::new();
        (0..self.dim())
            .filter(|&b| {
                self.e_op(i, 1)
                    .map_or(&zero_row, |op| &op.rows[b])
                    .is_empty()
            })
            .collect()
    }

    pub fn compute_beta_fi(&self, i: usize) -> BTreeSet<usize> {
        let zero_row = Vec::new();
        (0..self.dim())
            .filter(|&b| {
                self.f_op(i, 1)
                    .map_or(&zero_row, |op| &op.rows[b])
                    .is_empty()
            })
            .collect()
    }

    /// Full invariant suite. Cheap at the dimensions this library targets.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let rank = self.rank();
        if self.lambda.len() != rank {
            return Err(Error::SchemaError("lambda length != rank".into()));
        }
        if !self.cartan.components.is_empty() {
            let expected = weyl_dim(&self.cartan.components, &self.lambda)?;
            if expected != n as u64 {
                return Err(Error::DimensionMismatch(format!(
                    "basis has {n} elements, Weyl dimension is {expected}"
                )));
            }
        }
        // weight bookkeeping: ops shift weights by multiples of simple roots
        for i in 0..rank {
            let alpha = self.cartan.simple_root(i);
            for (ops, sign) in [(&self.f_ops, -1i64), (&self.e_ops, 1i64)] {
                for (nn, op) in ops[i].iter().enumerate() {
                    if op.rows.len() != n {
                        return Err(Error::SchemaError("operator has wrong dimension".into()));
                    }
                    for (b, row) in op.rows.iter().enumerate() {
                        for (bp, _) in row {
                            let expect: Weight = self
                                .weight(b)
                                .iter()
                                .zip(&alpha)
                                .map(|(x, a)| x + sign * nn as i64 * a)
                                .collect();
                            if self.weight(*bp) != &expect {
                                return Err(Error::InvariantViolation(format!(
                                    "operator ({i},{nn}) does not shift weights correctly at ({b},{bp})"
                                )));
                            }
                        }
                    }
                }
            }
            if self.f_ops[i].is_empty() || self.f_ops[i][0] != Op::identity(n) {
                return Err(Error::InvariantViolation("f^(0) is not the identity".into()));
            }
            if self.e_ops[i].is_empty() || self.e_ops[i][0] != Op::identity(n) {
                return Err(Error::InvariantViolation("e^(0) is not the identity".into()));
            }
        }
        // divided-power consistency: n! * op_n = (op_1)^n over the rationals
        for i in 0..rank {
            for (ops, name) in [(&self.f_ops, "f"), (&self.e_ops, "e")] {
                let first = ops[i].get(1).map(|o| o.dense()).unwrap_or_else(|| vec![qvec_zero(n); n]);
                let mut power = first.clone();
                for nn in 2..ops[i].len() as u64 {
                    power = dense_compose(&first, &power);
                    // careful with orientation: both factors are the same map
                    let scaled: Vec<QVec> = ops[i][nn as usize]
                        .dense()
                        .into_iter()
                        .map(|row| row.into_iter().map(|c| c * factorial(nn)).collect())
                        .collect();
                    if scaled != power {
                        return Err(Error::InvariantViolation(format!(
                            "{name}_{}^({nn}) != {name}_{}^{nn}/{nn}!",
                            i + 1,
                            i + 1
                        )));
                    }
                }
                // everything beyond the stored range must really be zero
                let top = ops[i].len() as u64;
                let extra = if top >= 2 {
                    dense_compose(&first, &power)
                } else {
                    first.clone()
                };
                if extra.iter().any(|row| !qvec_is_zero(row)) {
                    return Err(Error::InvariantViolation(format!(
                        "{name}_{}^({top}) is nonzero but not stored",
                        i + 1
                    )));
                }
            }
        }
        // sl2 and Serre relations
        let f1: Vec<Vec<QVec>> = (0..rank)
            .map(|i| self.f_ops[i].get(1).map(|o| o.dense()).unwrap_or_else(|| vec![qvec_zero(n); n]))
            .collect();
        let e1: Vec<Vec<QVec>> = (0..rank)
            .map(|i| self.e_ops[i].get(1).map(|o| o.dense()).unwrap_or_else(|| vec![qvec_zero(n); n]))
            .collect();
        for i in 0..rank {
            for j in 0..rank {
                let ef = dense_compose(&f1[j], &e1[i]); // f_j then e_i
                let fe = dense_compose(&e1[i], &f1[j]);
                for b in 0..n {
                    for bp in 0..n {
                        let lhs = &ef[b][bp] - &fe[b][bp];
                        let rhs = if i == j && b == bp {
                            BigRational::from(BigInt::from(self.z(i, b)))
                        } else {
                            BigRational::zero()
                        };
                        if lhs != rhs {
                            return Err(Error::InvariantViolation(format!(
                                "[e_{}, f_{}] wrong at ({b},{bp})",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
                if i != j && self.cartan.matrix[i][j] == -1 {
                    for (ops, name) in [(&f1, "f"), (&e1, "e")] {
                        let xxy = dense_compose(&dense_compose(&ops[i], &ops[i]), &ops[j]);
                        let xyx = dense_compose(&dense_compose(&ops[i], &ops[j]), &ops[i]);
                        let yxx = dense_compose(&dense_compose(&ops[j], &ops[i]), &ops[i]);
                        for b in 0..n {
                            for bp in 0..n {
                                let serre = &xxy[b][bp] - BigRational::from(BigInt::from(2)) * &xyx[b][bp]
                                    + &yxx[b][bp];
                                if !serre.is_zero() {
                                    return Err(Error::InvariantViolation(format!(
                                        "Serre relation fails for {name}_{}, {name}_{}",
                                        i + 1,
                                        j + 1
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        // phi
        self.check_phi()?;
        Ok(())
    }

    fn check_phi(&self) -> Result<()> {
        let n = self.dim();
        let mut seen = vec![false; n];
        for &p in &self.phi {
            if p >= n || seen[p] {
                return Err(Error::NotAPermutation("phi".into()));
            }
            seen[p] = true;
        }
        if self.phi[self.xi_plus] != self.xi_minus {
            return Err(Error::NotAPermutation("phi(xi+) != xi-".into()));
        }
        for b in 0..n {
            if self.phi[self.phi[b]] != b {
                return Err(Error::NotAPermutation("phi is not an involution".into()));
            }
        }
        // intertwining: phi(e_i^(n) b) = f_{sigma(i)}^(n) phi(b) entrywise
        for i in 0..self.rank() {
            let si = self.phi_sigma[i];
            let depth = self.e_ops[i].len().max(self.f_ops[si].len());
            for nn in 0..depth {
                for b in 0..n {
                    let mut lhs: Vec<(usize, BigUint)> = self
                        .e_op(i, nn as i64)
                        .map(|op| op.rows[b].iter().map(|(bp, c)| (self.phi[*bp], c.clone())).collect())
                        .unwrap_or_default();
                    let mut rhs: Vec<(usize, BigUint)> = self
                        .f_op(si, nn as i64)
                        .map(|op| op.rows[self.phi[b]].clone())
                        .unwrap_or_default();
                    lhs.sort();
                    rhs.sort();
                    if lhs != rhs {
                        return Err(Error::NotAPermutation(format!(
                            "phi does not intertwine e_{}^({nn}) with f_{}^({nn}) at basis id {b}",
                            i + 1,
                            si + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// construction

/// Explicit module with exact rational operator actions, used as the
/// ambient space the canonical basis is cut out of.
struct Ambient {
    dim: usize,
    weights: Vec<Weight>,
    /// per generator: triples (from, to, coeff)
    f: Vec<Vec<(usize, usize, BigRational)>>,
    e: Vec<Vec<(usize, usize, BigRational)>>,
    xi_plus: usize,
}

impl Ambient {
    fn apply(&self, triples: &[(usize, usize, BigRational)], v: &QVec) -> QVec {
        let mut out = qvec_zero(self.dim);
        for (from, to, c) in triples {
            if !v[*from].is_zero() {
                out[*to] += &v[*from] * c;
            }
        }
        out
    }

    /// x^n / n! for x one of the generator actions.
    fn apply_divided(&self, triples: &[(usize, usize, BigRational)], n: u64, v: &QVec) -> QVec {
        let mut out = v.clone();
        for _ in 0..n {
            out = self.apply(triples, &out);
        }
        let inv = factorial(n).recip();
        out.into_iter().map(|c| c * &inv).collect()
    }

    fn vector_weight(&self, v: &QVec) -> Option<Weight> {
        let mut w = None;
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match &w {
                None => w = Some(self.weights[k].clone()),
                Some(prev) => assert_eq!(prev, &self.weights[k], "non-homogeneous vector"),
            }
        }
        w
    }
}

fn a1_ambient(m: i64) -> Ambient {
    let dim = (m + 1) as usize;
    let weights = (0..dim).map(|a| vec![m - 2 * a as i64]).collect();
    let f = (0..dim - 1)
        .map(|a| (a, a + 1, BigRational::from(BigInt::from(a as i64 + 1))))
        .collect();
    let e = (1..dim)
        .map(|a| (a, a - 1, BigRational::from(BigInt::from(m - a as i64 + 1))))
        .collect();
    Ambient {
        dim,
        weights,
        f: vec![f],
        e: vec![e],
        xi_plus: 0,
    }
}

/// Tensor of p copies of the 3-dim module with highest weight (1,0) and q
/// copies of the one with highest weight (0,1).
fn a2_ambient(p: i64, q: i64) -> Ambient {
    // per factor kind: weights, f-moves (i, from, to), e-moves (i, from, to)
    let std_weights = [vec![1, 0], vec![-1, 1], vec![0, -1]];
    let dual_weights = [vec![0, 1], vec![1, -1], vec![-1, 0]];
    let std_f = [(0usize, 0usize, 1usize), (1, 1, 2)];
    let dual_f = [(1usize, 0usize, 1usize), (0, 1, 2)];
    let factors = (p + q) as usize;
    let dim = 3usize.pow(factors as u32);
    let digits = |idx: usize| -> Vec<usize> {
        let mut d = Vec::with_capacity(factors);
        let mut x = idx;
        for _ in 0..factors {
            d.push(x % 3);
            x /= 3;
        }
        d
    };
    let weights: Vec<Weight> = (0..dim)
        .map(|idx| {
            let d = digits(idx);
            let mut w = vec![0i64; 2];
            for (t, &dig) in d.iter().enumerate() {
                let fw = if t < p as usize { &std_weights[dig] } else { &dual_weights[dig] };
                w[0] += fw[0];
                w[1] += fw[1];
            }
            w
        })
        .collect();
    let mut f: Vec<Vec<(usize, usize, BigRational)>> = vec![Vec::new(), Vec::new()];
    let mut e: Vec<Vec<(usize, usize, BigRational)>> = vec![Vec::new(), Vec::new()];
    for idx in 0..dim {
        let d = digits(idx);
        for (t, &dig) in d.iter().enumerate() {
            let moves: &[(usize, usize, usize)] =
                if t < p as usize { &std_f } else { &dual_f };
            let stride = 3usize.pow(t as u32);
            for &(i, from, to) in moves {
                if dig == from {
                    f[i].push((idx, idx + (to - from) * stride, BigRational::one()));
                }
                if dig == to {
                    e[i].push((idx, idx - (to - from) * stride, BigRational::one()));
                }
            }
        }
    }
    Ambient {
        dim,
        weights,
        f,
        e,
        xi_plus: 0,
    }
}

/// Candidate f-monomials whose nonzero images form the canonical basis.
fn candidate_monomials(comp: &CartanComponent, lambda: &[i64]) -> Vec<Monomial> {
    match comp.rank {
        1 => (0..=lambda[0] as u64).map(|a| vec![(0usize, a)]).collect(),
        2 => {
            let bound = (lambda[0] + lambda[1]) as u64;
            let mut out = Vec::new();
            for a in 0..=bound {
                for b in 0..=bound {
                    for c in 0..=bound {
                        if b >= a + c {
                            out.push(vec![(0, a), (1, b), (0, c)]);
                        }
                        if b > a + c {
                            out.push(vec![(1, a), (0, b), (1, c)]);
                        }
                    }
                }
            }
            out
        }
        _ => unreachable!("checked by build_rep"),
    }
}

fn monomial_degree(m: &Monomial) -> u64 {
    m.iter().map(|&(_, n)| n).sum()
}

fn normalize_monomial(m: &Monomial) -> Monomial {
    m.iter().copied().filter(|&(_, n)| n > 0).collect()
}

fn build_component(comp: &CartanComponent, lambda: &[i64]) -> Result<Rep> {
    let cartan = CartanDatum::from_components(vec![comp.clone()])?;
    let rank = comp.rank;
    let ambient = match rank {
        1 => a1_ambient(lambda[0]),
        2 => a2_ambient(lambda[0], lambda[1]),
        _ => {
            return Err(Error::UnsupportedType(format!(
                "A{rank} has no built-in canonical basis; supply a data file",
            )))
        }
    };
    let xi = {
        let mut v = qvec_zero(ambient.dim);
        v[ambient.xi_plus] = BigRational::one();
        v
    };
    // evaluate candidates, drop zeros and duplicates
    let mut vectors: Vec<(Monomial, QVec)> = Vec::new();
    let mut seen: HashSet<QVec> = HashSet::new();
    for mon in candidate_monomials(comp, lambda) {
        let mut v = xi.clone();
        for &(i, nn) in mon.iter().rev() {
            v = ambient.apply_divided(&ambient.f[i], nn, &v);
            if qvec_is_zero(&v) {
                break;
            }
        }
        if qvec_is_zero(&v) || !seen.insert(v.clone()) {
            continue;
        }
        vectors.push((normalize_monomial(&mon), v));
    }
    vectors.sort_by(|(ma, va), (mb, vb)| {
        (monomial_degree(ma), ambient.vector_weight(va), ma.clone()).cmp(&(
            monomial_degree(mb),
            ambient.vector_weight(vb),
            mb.clone(),
        ))
    });
    let expected = weyl_dim_type_a(lambda);
    if vectors.len() as u64 != expected {
        return Err(Error::DimensionMismatch(format!(
            "found {} monomial images, Weyl dimension is {expected}",
            vectors.len()
        )));
    }
    let rows: Vec<QVec> = vectors.iter().map(|(_, v)| v.clone()).collect();
    let solver = BasisSolver::new(&rows).ok_or_else(|| {
        Error::InvariantViolation("monomial images are linearly dependent".into())
    })?;
    let basis: Vec<BasisElement> = vectors
        .iter()
        .enumerate()
        .map(|(id, (mon, v))| BasisElement {
            id,
            weight: ambient.vector_weight(v).unwrap(),
            provenance: mon.clone(),
        })
        .collect();
    let dim = basis.len();

    // structure constants
    let mut f_ops: Vec<Vec<Op>> = Vec::new();
    let mut e_ops: Vec<Vec<Op>> = Vec::new();
    for i in 0..rank {
        for (triples, ops) in [(&ambient.f[i], &mut f_ops), (&ambient.e[i], &mut e_ops)] {
            let mut per_n = vec![Op::identity(dim)];
            loop {
                let nn = per_n.len() as u64;
                let mut op = Op {
                    rows: vec![Vec::new(); dim],
                };
                for (b, row) in rows.iter().enumerate() {
                    let img = ambient.apply_divided(triples, nn, row);
                    if qvec_is_zero(&img) {
                        continue;
                    }
                    let coords = solver.solve(&img).ok_or_else(|| {
                        Error::InvariantViolation(format!(
                            "operator image escapes the basis span at ({i},{nn},{b})"
                        ))
                    })?;
                    for (bp, c) in coords.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        if !c.is_integer() || c.is_negative() {
                            return Err(Error::PositivityViolation(format!(
                                "structure constant {c} at ({i},{nn},{b},{bp})"
                            )));
                        }
                        op.rows[b].push((bp, c.to_integer().to_biguint().unwrap()));
                    }
                }
                if op.is_zero() {
                    break;
                }
                per_n.push(op);
            }
            ops.push(per_n);
        }
    }

    let f1_empty: Vec<bool> = (0..dim)
        .map(|b| (0..rank).all(|i| f_ops[i].get(1).map_or(true, |op| op.rows[b].is_empty())))
        .collect();
    let lowest: Vec<usize> = (0..dim).filter(|&b| f1_empty[b]).collect();
    if lowest.len() != 1 {
        return Err(Error::InvariantViolation(
            "lowest weight vector is not unique".into(),
        ));
    }
    let xi_minus = lowest[0];

    let mut rep = Rep {
        cartan,
        lambda: lambda.to_vec(),
        basis,
        f_ops,
        e_ops,
        xi_plus: 0,
        xi_minus,
        phi: Vec::new(),
        phi_sigma: Vec::new(),
    };
    let (phi, sigma) = compute_phi(&rep)?;
    rep.phi = phi;
    rep.phi_sigma = sigma;
    rep.validate()?;
    Ok(rep)
}

/// The componentwise index reversal: the diagram map induced by -w_I.
pub fn star_map(components: &[CartanComponent]) -> Vec<usize> {
    let mut sigma = Vec::new();
    let mut off = 0;
    for c in components {
        sigma.extend((0..c.rank).map(|i| off + c.rank - 1 - i));
        off += c.rank;
    }
    sigma
}

fn try_phi(rep: &Rep, sigma: &[usize]) -> Result<Vec<usize>> {
    // phi sends the f-monomial image of xi+ to the sigma-relabeled
    // e-monomial image of xi-
    let mut phi = vec![usize::MAX; rep.dim()];
    for b in 0..rep.dim() {
        let mut v = rep.indicator(rep.xi_minus);
        for &(i, nn) in rep.basis[b].provenance.iter().rev() {
            v = rep.apply_e_q(sigma[i], nn as i64, &v);
        }
        let supp: Vec<usize> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect();
        if supp.len() != 1 || !v[supp[0]].is_one() {
            return Err(Error::NotAPermutation(format!(
                "image of basis id {b} is not a unit basis vector"
            )));
        }
        phi[b] = supp[0];
    }
    Ok(phi)
}

/// The basis involution with phi(xi+) = xi-. Intertwines e_i with f_i when
/// such a map exists (highest weight fixed by the -w_I flip); otherwise it
/// intertwines e_i with f_{sigma(i)} for the flip sigma.
pub fn compute_phi(rep: &Rep) -> Result<(Vec<usize>, Vec<usize>)> {
    let identity: Vec<usize> = (0..rep.rank()).collect();
    if let Ok(phi) = try_phi(rep, &identity) {
        return Ok((phi, identity));
    }
    if !rep.cartan.components.is_empty() {
        let sigma = star_map(&rep.cartan.components);
        if sigma != identity {
            let phi = try_phi(rep, &sigma)?;
            return Ok((phi, sigma));
        }
    }
    Err(Error::NotAPermutation(
        "no basis involution intertwines the e- and f-actions".into(),
    ))
}

/// Exterior tensor of two modules over a product diagram.
fn tensor_rep(a: &Rep, b: &Rep) -> Result<Rep> {
    let mut components = a.cartan.components.clone();
    components.extend(b.cartan.components.clone());
    let cartan = CartanDatum::from_components(components)?;
    let ra = a.rank();
    let dim = a.dim() * b.dim();
    let pair_id = |ba: usize, bb: usize| ba * b.dim() + bb;
    let mut basis = Vec::with_capacity(dim);
    for ba in 0..a.dim() {
        for bb in 0..b.dim() {
            let mut weight = a.weight(ba).clone();
            weight.extend(b.weight(bb).iter().copied());
            let mut provenance = a.basis[ba].provenance.clone();
            provenance.extend(b.basis[bb].provenance.iter().map(|&(i, n)| (i + ra, n)));
            basis.push(BasisElement {
                id: pair_id(ba, bb),
                weight,
                provenance,
            });
        }
    }
    let lift = |ops: &Vec<Op>, left: bool| -> Vec<Op> {
        ops.iter()
            .enumerate()
            .map(|(nn, op)| {
                if nn == 0 {
                    return Op::identity(dim);
                }
                let mut rows = vec![Vec::new(); dim];
                for ba in 0..a.dim() {
                    for bb in 0..b.dim() {
                        let row = &mut rows[pair_id(ba, bb)];
                        if left {
                            for (t, c) in &op.rows[ba] {
                                row.push((pair_id(*t, bb), c.clone()));
                            }
                        } else {
                            for (t, c) in &op.rows[bb] {
                                row.push((pair_id(ba, *t), c.clone()));
                            }
                        }
                    }
                }
                Op { rows }
            })
            .collect()
    };
    let mut f_ops = Vec::new();
    let mut e_ops = Vec::new();
    for i in 0..ra {
        f_ops.push(lift(&a.f_ops[i], true));
        e_ops.push(lift(&a.e_ops[i], true));
    }
    for i in 0..b.rank() {
        f_ops.push(lift(&b.f_ops[i], false));
        e_ops.push(lift(&b.e_ops[i], false));
    }
    let phi = (0..a.dim())
        .flat_map(|ba| (0..b.dim()).map(move |bb| (ba, bb)))
        .map(|(ba, bb)| pair_id(a.phi[ba], b.phi[bb]))
        .collect();
    let mut phi_sigma = a.phi_sigma.clone();
    phi_sigma.extend(b.phi_sigma.iter().map(|&i| i + ra));
    let mut lambda = a.lambda.clone();
    lambda.extend(b.lambda.iter().copied());
    let rep = Rep {
        cartan,
        lambda,
        basis,
        f_ops,
        e_ops,
        xi_plus: pair_id(a.xi_plus, b.xi_plus),
        xi_minus: pair_id(a.xi_minus, b.xi_minus),
        phi,
        phi_sigma,
    };
    rep.validate()?;
    Ok(rep)
}

/// Build the canonical-basis data for a dominant weight over a product of
/// A1 and A2 components.
pub fn build_rep(cartan: &CartanDatum, lambda: &Weight) -> Result<Rep> {
    if cartan.components.is_empty() {
        return Err(Error::UnsupportedType(
            "no component decomposition; use a data file".into(),
        ));
    }
    if lambda.len() != cartan.rank() {
        return Err(Error::DimensionMismatch(
            "lambda length does not match the Cartan rank".into(),
        ));
    }
    if lambda.iter().any(|&c| c < 0) {
        return Err(Error::Usage("lambda must be dominant".into()));
    }
    let mut rep: Option<Rep> = None;
    let mut off = 0;
    for comp in &cartan.components {
        let piece = build_component(comp, &lambda[off..off + comp.rank])?;
        off += comp.rank;
        rep = Some(match rep {
            None => piece,
            Some(acc) => tensor_rep(&acc, &piece)?,
        });
    }
    Ok(rep.unwrap())
}

// ---------------------------------------------------------------------------
// persistence (schema repdata-v1)

#[derive(Serialize, Deserialize)]
struct CartanJson {
    matrix: Vec<Vec<i64>>,
    #[serde(default)]
    components: Vec<CartanComponent>,
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    id: usize,
    weight: Vec<i64>,
    provenance: Vec<(usize, u64)>,
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    schema: String,
    cartan: CartanJson,
    lambda: Vec<i64>,
    dim: usize,
    basis: Vec<BasisJson>,
    /// entries (i, n, b, b', value) with value a decimal string
    f_ops: Vec<(usize, u64, usize, usize, String)>,
    e_ops: Vec<(usize, u64, usize, usize, String)>,
    xi_plus: usize,
    xi_minus: usize,
}

fn ops_to_json(ops: &[Vec<Op>]) -> Vec<(usize, u64, usize, usize, String)> {
    let mut out = Vec::new();
    for (i, per_n) in ops.iter().enumerate() {
        for (nn, op) in per_n.iter().enumerate().skip(1) {
            for (b, row) in op.rows.iter().enumerate() {
                for (bp, c) in row {
                    out.push((i, nn as u64, b, *bp, c.to_string()));
                }
            }
        }
    }
    out
}

fn ops_from_json(
    entries: &[(usize, u64, usize, usize, String)],
    rank: usize,
    dim: usize,
) -> Result<Vec<Vec<Op>>> {
    let mut ops: Vec<Vec<Op>> = (0..rank).map(|_| vec![Op::identity(dim)]).collect();
    for (i, nn, b, bp, val) in entries {
        if *i >= rank || *b >= dim || *bp >= dim || *nn == 0 {
            return Err(Error::SchemaError(format!(
                "operator entry out of range: ({i},{nn},{b},{bp})"
            )));
        }
        let parsed: BigInt = val
            .parse()
            .map_err(|_| Error::SchemaError(format!("bad integer '{val}'")))?;
        if parsed.sign() == Sign::Minus {
            return Err(Error::PositivityViolation(format!(
                "negative structure constant {val} at ({i},{nn},{b},{bp})"
            )));
        }
        while ops[*i].len() <= *nn as usize {
            let filler = Op {
                rows: vec![Vec::new(); dim],
            };
            ops[*i].push(filler);
        }
        ops[*i][*nn as usize].rows[*b].push((*bp, parsed.to_biguint().unwrap()));
    }
    for per_n in &mut ops {
        while per_n.len() > 1 && per_n.last().unwrap().is_zero() {
            per_n.pop();
        }
        for op in per_n.iter_mut() {
            for row in &mut op.rows {
                row.sort();
            }
        }
    }
    Ok(ops)
}

pub fn rep_to_json(rep: &Rep) -> serde_json::Value {
    let doc = RepJson {
        schema: "repdata-v1".into(),
        cartan: CartanJson {
            matrix: rep.cartan.matrix.clone(),
            components: rep.cartan.components.clone(),
        },
        lambda: rep.lambda.clone(),
        dim: rep.dim(),
        basis: rep
            .basis
            .iter()
            .map(|b| BasisJson {
                id: b.id,
                weight: b.weight.clone(),
                provenance: b.provenance.clone(),
            })
            .collect(),
        f_ops: ops_to_json(&rep.f_ops),
        e_ops: ops_to_json(&rep.e_ops),
        xi_plus: rep.xi_plus,
        xi_minus: rep.xi_minus,
    };
    serde_json::to_value(doc).unwrap()
}

pub fn rep_from_json(value: serde_json::Value) -> Result<Rep> {
    let doc: RepJson = serde_json::from_value(value)
        .map_err(|e| Error::SchemaError(format!("repdata-v1: {e}")))?;
    if doc.schema != "repdata-v1" {
        return Err(Error::SchemaError(format!("unknown schema '{}'", doc.schema)));
    }
    let mut cartan = CartanDatum::from_matrix(doc.cartan.matrix)?;
    if !doc.cartan.components.is_empty() {
        let rebuilt = CartanDatum::from_components(doc.cartan.components)?;
        if rebuilt.matrix != cartan.matrix {
            return Err(Error::SchemaError(
                "component list does not match the matrix".into(),
            ));
        }
        cartan = rebuilt;
    }
    let dim = doc.dim;
    if doc.basis.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "dim field {dim} but {} basis elements",
            doc.basis.len()
        )));
    }
    let mut basis = Vec::with_capacity(dim);
    for (k, b) in doc.basis.iter().enumerate() {
        if b.id != k {
            return Err(Error::SchemaError("basis ids must be 0..dim in order".into()));
        }
        basis.push(BasisElement {
            id: b.id,
            weight: b.weight.clone(),
            provenance: b.provenance.clone(),
        });
    }
    let rank = cartan.rank();
    let f_ops = ops_from_json(&doc.f_ops, rank, dim)?;
    let e_ops = ops_from_json(&doc.e_ops, rank, dim)?;
    let mut rep = Rep {
        cartan,
        lambda: doc.lambda,
        basis,
        f_ops,
        e_ops,
        xi_plus: doc.xi_plus,
        xi_minus: doc.xi_minus,
        phi: Vec::new(),
        phi_sigma: Vec::new(),
    };
    let (phi, sigma) = compute_phi(&rep)?;
    rep.phi = phi;
    rep.phi_sigma = sigma;
    rep.validate()?;
    Ok(rep)
}

pub fn save_rep(rep: &Rep, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(&rep_to_json(rep))?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn load_rep(path: &Path) -> Result<Rep> {
    let text = std::fs::read_to_string(path)?;
    rep_from_json(serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::DEFAULT_WEYL_BOUND;

    fn rep_a1(m: i64) -> Rep {
        build_rep(&CartanDatum::parse_type("A1").unwrap(), &vec![m]).unwrap()
    }

    fn rep_a2(p: i64, q: i64) -> Rep {
        build_rep(&CartanDatum::parse_type("A2").unwrap(), &vec![p, q]).unwrap()
    }

    fn group(t: &str) -> WeylGroup {
        WeylGroup::enumerate(CartanDatum::parse_type(t).unwrap(), DEFAULT_WEYL_BOUND).unwrap()
    }

    #[test]
    fn a1_divided_power_module() {
        let rep = rep_a1(2);
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.weight(0), &vec![2]);
        assert_eq!(rep.weight(2), &vec![-2]);
        // f^(1) f^(a) xi+ = (a+1) f^(a+1) xi+
        assert_eq!(rep.f_op(0, 1).unwrap().entry(0, 1), BigUint::from(1u32));
        assert_eq!(rep.f_op(0, 1).unwrap().entry(1, 2), BigUint::from(2u32));
        assert_eq!(rep.e_op(0, 1).unwrap().entry(1, 0), BigUint::from(2u32));
        assert_eq!(rep.f_op(0, 2).unwrap().entry(0, 2), BigUint::from(1u32));
        assert!(rep.f_op(0, 3).is_none());
    }

    #[test]
    fn trivial_module() {
        let rep = rep_a1(0);
        assert_eq!(rep.dim(), 1);
        assert_eq!(rep.xi_plus, rep.xi_minus);
    }

    #[test]
    fn a2_dimensions() {
        assert_eq!(rep_a2(1, 1).dim(), 8);
        assert_eq!(rep_a2(2, 1).dim(), 15);
        assert_eq!(rep_a2(1, 0).dim(), 3);
        assert_eq!(rep_a2(2, 2).dim(), 27);
    }

    #[test]
    fn product_module() {
        let rep = build_rep(&CartanDatum::parse_type("A1xA1").unwrap(), &vec![1, 1]).unwrap();
        assert_eq!(rep.dim(), 4);
        let rep = build_rep(&CartanDatum::parse_type("A1xA2").unwrap(), &vec![2, 1, 1]).unwrap();
        assert_eq!(rep.dim(), 24);
    }

    #[test]
    fn phi_is_the_reversal_for_a1() {
        let rep = rep_a1(2);
        assert_eq!(rep.phi, vec![2, 1, 0]);
        assert_eq!(rep.phi[rep.xi_plus], rep.xi_minus);
        assert_eq!(rep.phi_sigma, vec![0]);
    }

    #[test]
    fn phi_twists_for_asymmetric_weights() {
        // for lambda not fixed by the -w_I flip the plain intertwiner does
        // not exist; phi relabels the vertices instead
        let rep = rep_a2(2, 1);
        assert_eq!(rep.phi_sigma, vec![1, 0]);
        let rep = rep_a2(1, 1);
        assert_eq!(rep.phi_sigma, vec![0, 1]);
    }

    #[test]
    fn bw_examples() {
        let g = group("A1");
        let rep = rep_a1(2);
        assert_eq!(rep.compute_bw(&g, g.identity()).unwrap(), rep.xi_plus);
        assert_eq!(rep.compute_bw(&g, g.generator(0)).unwrap(), 2);

        let g = group("A2");
        let rep = rep_a2(1, 1);
        assert_eq!(rep.compute_bw(&g, g.identity()).unwrap(), rep.xi_plus);
        assert_eq!(rep.compute_bw(&g, g.longest()).unwrap(), rep.xi_minus);
        assert_eq!(rep.compute_bw(&g, g.longest()).unwrap(), rep.phi[rep.xi_plus]);
    }

    #[test]
    fn bw_is_reduced_word_independent() {
        let g = group("A2");
        let rep = rep_a2(1, 1);
        for w in 0..g.order() {
            let reference = rep.compute_bw(&g, w).unwrap();
            for word in g.reduced_words(w) {
                let mut cur = rep.xi_plus;
                for &i in word.iter().rev() {
                    let n = rep.z(i, cur);
                    let row = &rep.f_op(i, n).unwrap().rows[cur];
                    assert_eq!(row.len(), 1);
                    cur = row[0].0;
                }
                assert_eq!(cur, reference);
            }
            // b_w has weight w(lambda)
            assert_eq!(rep.weight(reference), &g.apply(w, &rep.lambda));
        }
    }

    #[test]
    fn beta_w_examples() {
        let g = group("A1");
        let rep = rep_a1(2);
        assert_eq!(
            rep.compute_beta_w(&g, g.identity()).unwrap(),
            BTreeSet::from([rep.xi_plus])
        );
        assert_eq!(
            rep.compute_beta_w(&g, g.generator(0)).unwrap(),
            BTreeSet::from([0, 1, 2])
        );

        let g = group("A2");
        let rep = rep_a2(1, 1);
        let all: BTreeSet<usize> = (0..rep.dim()).collect();
        assert_eq!(rep.compute_beta_w(&g, g.longest()).unwrap(), all);
        for w in 0..g.order() {
            let bw = rep.compute_bw(&g, w).unwrap();
            assert!(rep.compute_beta_w(&g, w).unwrap().contains(&bw));
        }
    }

    #[test]
    fn beta_ei_fi_examples() {
        let rep = rep_a1(2);
        assert_eq!(rep.compute_beta_ei(0), BTreeSet::from([0]));
        assert_eq!(rep.compute_beta_fi(0), BTreeSet::from([2]));
        let rep = rep_a2(1, 1);
        for i in 0..2 {
            assert!(rep.compute_beta_ei(i).contains(&rep.xi_plus));
        }
    }

    #[test]
    fn validate_passes_on_builds() {
        for rep in [rep_a1(3), rep_a2(1, 1), rep_a2(2, 1)] {
            rep.validate().unwrap();
        }
    }

    #[test]
    fn save_load_roundtrip() {
        let rep = rep_a2(1, 1);
        let json = rep_to_json(&rep);
        let back = rep_from_json(json).unwrap();
        assert_eq!(back.basis, rep.basis);
        assert_eq!(back.f_ops, rep.f_ops);
        assert_eq!(back.e_ops, rep.e_ops);
        assert_eq!(back.phi, rep.phi);
    }

    #[test]
    fn load_rejects_corrupt_data() {
        let rep = rep_a1(2);
        let mut json = rep_to_json(&rep);
        json["f_ops"][0][4] = serde_json::json!("-1");
        assert!(matches!(
            rep_from_json(json),
            Err(Error::PositivityViolation(_))
        ));

        let mut json = rep_to_json(&rep);
        json["dim"] = serde_json::json!(4);
        assert!(matches!(
            rep_from_json(json),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn weyl_dim_formula() {
        assert_eq!(weyl_dim_type_a(&[1, 1]), 8);
        assert_eq!(weyl_dim_type_a(&[2, 1]), 15);
        assert_eq!(weyl_dim_type_a(&[3]), 4);
        assert_eq!(weyl_dim_type_a(&[1, 0, 0]), 4);
        assert_eq!(weyl_dim_type_a(&[1, 0, 1]), 15); // adjoint of A3
    }
}

