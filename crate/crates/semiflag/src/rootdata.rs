//! Simply-laced Cartan data, finite Weyl groups, Bruhat order, reduced
//! words, positive subexpressions, and diagram automorphisms.
//!
//! Group elements are canonical indices into an enumerated table. The
//! faithful model is the action on weight coordinates: the simple
//! reflection s_i sends a weight with fundamental coordinates l to the
//! weight with coordinates l_j - a_{ij} l_i.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer weight in fundamental-weight coordinates: coords[i] = <i, lambda>.
pub type Weight = Vec<i64>;

pub fn is_dominant(w: &Weight) -> bool {
    w.iter().all(|&c| c >= 0)
}

pub fn is_very_dominant(w: &Weight) -> bool {
    w.iter().all(|&c| c >= 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanComponent {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
}

/// A simply-laced Cartan matrix, possibly a product of simple components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    pub matrix: Vec<Vec<i64>>,
    /// Simple components in index order, when built from a component list.
    pub components: Vec<CartanComponent>,
}

impl CartanDatum {
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<CartanDatum> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SchemaError("Cartan matrix is not square".into()));
            }
            for (j, &a) in row.iter().enumerate() {
                if i == j && a != 2 {
                    return Err(Error::SchemaError("Cartan diagonal must be 2".into()));
                }
                if i != j && a != 0 && a != -1 {
                    return Err(Error::SchemaError(
                        "off-diagonal entries must be 0 or -1 (simply laced)".into(),
                    ));
                }
                if matrix[j][i] != a {
                    return Err(Error::SchemaError("Cartan matrix must be symmetric".into()));
                }
            }
        }
        Ok(CartanDatum {
            matrix,
            components: Vec::new(),
        })
    }

    /// Build a product of type-A components, e.g. [A2], [A1, A1].
    pub fn from_components(components: Vec<CartanComponent>) -> Result<CartanDatum> {
        let mut blocks: Vec<Vec<Vec<i64>>> = Vec::new();
        for c in &components {
            if c.kind != "A" || c.rank == 0 {
                return Err(Error::UnsupportedType(format!(
                    "component {}{} (only type A is built in)",
                    c.kind, c.rank
                )));
            }
            let r = c.rank;
            let mut m = vec![vec![0i64; r]; r];
            for i in 0..r {
                m[i][i] = 2;
                if i + 1 < r {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
            }
            blocks.push(m);
        }
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut matrix = vec![vec![0i64; n]; n];
        let mut off = 0;
        for b in &blocks {
            for i in 0..b.len() {
                for j in 0..b.len() {
                    matrix[off + i][off + j] = b[i][j];
                }
            }
            off += b.len();
        }
        let mut d = CartanDatum::from_matrix(matrix)?;
        d.components = components;
        Ok(d)
    }

    /// Parse "A2", "A1xA1", "A1xA2", ...
    pub fn parse_type(s: &str) -> Result<CartanDatum> {
        let mut components = Vec::new();
        for part in s.split(['x', 'X']) {
            let part = part.trim();
            let kind = part
                .chars()
                .take_while(|c| c.is_ascii_alphabetic())
                .collect::<String>();
            let rank: usize = part[kind.len()..]
                .parse()
                .map_err(|_| Error::Usage(format!("cannot parse Cartan type '{s}'")))?;
            components.push(CartanComponent { kind, rank });
        }
        CartanDatum::from_components(components)
    }

    /// The simple root of i, as a weight: row i of the Cartan matrix.
    pub fn simple_root(&self, i: usize) -> Weight {
        self.matrix[i].clone()
    }

    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let li = w[i];
        w.iter()
            .enumerate()
            .map(|(j, &lj)| lj - self.matrix[i][j] * li)
            .collect()
    }
}

type Mat = Vec<Vec<i64>>;

fn mat_identity(n: usize) -> Mat {
    let mut m = vec![vec![0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                m[i][j] += aik * b[k][j];
            }
        }
    }
    m
}

/// A Weyl group element: an index into the enumerated table.
pub type WeylElem = usize;

/// Enumerated finite Weyl group with cached lengths and one reduced word
/// per element.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub cartan: CartanDatum,
    mats: Vec<Mat>,
    index: HashMap<Mat, WeylElem>,
    right: Vec<Vec<WeylElem>>,
    length: Vec<usize>,
    word: Vec<Vec<usize>>,
    longest: WeylElem,
}

pub const DEFAULT_WEYL_BOUND: usize = 100_000;

impl WeylGroup {
    pub fn enumerate(cartan: CartanDatum, bound: usize) -> Result<WeylGroup> {
        let n = cartan.rank();
        // matrix of s_i acting on fundamental coordinates
        let gens: Vec<Mat> = (0..n)
            .map(|i| {
                let mut m = mat_identity(n);
                for j in 0..n {
                    m[j][i] -= cartan.matrix[i][j];
                }
                m
            })
            .collect();
        // (s_i l)_j = l_j - a_{ij} l_i, so column i of the identity loses a_{ij}
        let mut mats = vec![mat_identity(n)];
        let mut index = HashMap::new();
        index.insert(mats[0].clone(), 0usize);
        let mut length = vec![0usize];
        let mut word: Vec<Vec<usize>> = vec![Vec::new()];
        let mut right: Vec<Vec<WeylElem>> = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back(0usize);
        let mut discovered = 1usize;
        while let Some(w) = queue.pop_front() {
            let mut row = Vec::with_capacity(n);
            for (i, g) in gens.iter().enumerate() {
                let m = mat_mul(&mats[w], g);
                let id = match index.get(&m) {
                    Some(&id) => id,
                    None => {
                        let id = mats.len();
                        if id >= bound {
                            return Err(Error::BoundExceeded(format!(
                                "more than {bound} Weyl group elements"
                            )));
                        }
                        mats.push(m.clone());
                        index.insert(m, id);
                        length.push(length[w] + 1);
                        let mut ww = word[w].clone();
                        ww.push(i);
                        word.push(ww);
                        queue.push_back(id);
                        discovered += 1;
                        id
                    }
                };
                row.push(id);
            }
            // rows are pushed in BFS order, which is the element id order
            right.push(row);
        }
        let _ = discovered;
        let max_len = *length.iter().max().unwrap();
        let longest_ids: Vec<_> = (0..mats.len()).filter(|&w| length[w] == max_len).collect();
        debug_assert_eq!(longest_ids.len(), 1, "longest element must be unique");
        Ok(WeylGroup {
            cartan,
            mats,
            index,
            right,
            length,
            word,
            longest: longest_ids[0],
        })
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn identity(&self) -> WeylElem {
        0
    }

    pub fn generator(&self, i: usize) -> WeylElem {
        self.right[0][i]
    }

    pub fn longest(&self) -> WeylElem {
        self.longest
    }

    pub fn len(&self, w: WeylElem) -> usize {
        self.length[w]
    }

    /// One reduced word for w (the BFS word).
    pub fn reduced_word(&self, w: WeylElem) -> &[usize] {
        &self.word[w]
    }

    pub fn right_mul(&self, w: WeylElem, i: usize) -> WeylElem {
        self.right[w][i]
    }

    pub fn mul(&self, a: WeylElem, b: WeylElem) -> WeylElem {
        let m = mat_mul(&self.mats[a], &self.mats[b]);
        self.index[&m]
    }

    pub fn inv(&self, a: WeylElem) -> WeylElem {
        let mut w = self.identity();
        for &i in self.word[a].iter().rev() {
            w = self.right_mul(w, i);
        }
        w
    }

    pub fn apply(&self, w: WeylElem, l: &Weight) -> Weight {
        let m = &self.mats[w];
        (0..self.rank())
            .map(|j| (0..self.rank()).map(|k| m[j][k] * l[k]).sum())
            .collect()
    }

    /// All v with v <= w, by the subword DP along one reduced word of w.
    pub fn bruhat_lower(&self, w: WeylElem) -> HashSet<WeylElem> {
        let mut set = HashSet::new();
        set.insert(self.identity());
        for &i in self.reduced_word(w) {
            let ups: Vec<WeylElem> = set
                .iter()
                .filter_map(|&v| {
                    let vi = self.right_mul(v, i);
                    (self.len(vi) > self.len(v)).then_some(vi)
                })
                .collect();
            set.extend(ups);
        }
        set
    }

    pub fn bruhat_leq(&self, v: WeylElem, w: WeylElem) -> bool {
        self.bruhat_lower(w).contains(&v)
    }

    /// All reduced words of w.
    pub fn reduced_words(&self, w: WeylElem) -> Vec<Vec<usize>> {
        if w == self.identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let wi = self.right_mul(w, i);
            if self.len(wi) < self.len(w) {
                for mut word in self.reduced_words(wi) {
                    word.push(i);
                    out.push(word);
                }
            }
        }
        out.sort();
        out
    }

    /// A display form like "s1s2" ("e" for the identity), from one reduced
    /// word.
    pub fn element_string(&self, w: WeylElem) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }

    /// Parse "e", "s1s2", "s1 s2", or "1,2" into a group element.
    pub fn parse_element(&self, s: &str) -> Result<WeylElem> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "1" {
            return Ok(self.identity());
        }
        let mut w = self.identity();
        for part in s
            .replace('s', " ")
            .replace(',', " ")
            .split_whitespace()
        {
            let i: usize = part
                .parse()
                .map_err(|_| Error::Usage(format!("bad generator '{part}' in '{s}'")))?;
            if i == 0 || i > self.rank() {
                return Err(Error::Usage(format!("generator index {i} out of range")));
            }
            w = self.right_mul(w, i - 1);
        }
        Ok(w)
    }

    /// All pairs (v, w) with v <= w, ordered by (w, v) indices.
    pub fn bruhat_pairs(&self) -> Vec<(WeylElem, WeylElem)> {
        let mut out = Vec::new();
        for w in 0..self.order() {
            let mut lower: Vec<_> = self.bruhat_lower(w).into_iter().collect();
            lower.sort_unstable();
            for v in lower {
                out.push((v, w));
            }
        }
        out
    }
}

/// The distinguished subexpression of v inside a reduced word of w: the
/// unique q with nondecreasing partial products that never pass through a
/// descent of the remaining letter.
#[derive(Debug, Clone)]
pub struct PositiveSubexpression {
    pub v: WeylElem,
    pub w: WeylElem,
    pub word: Vec<usize>,
    /// q[k] = Some(i_k) when q_k = s_{i_k}, None when q_k = 1.
    pub q: Vec<Option<usize>>,
    /// positions k with q_k = 1 (0-based), carrying the cell coordinates
    pub primes: Vec<usize>,
    pub doubleprimes: Vec<usize>,
}

impl PositiveSubexpression {
    fn satisfies_conditions(group: &WeylGroup, v: WeylElem, word: &[usize], q: &[Option<usize>]) -> bool {
        let mut prev = group.identity();
        for (k, &qk) in q.iter().enumerate() {
            let i = word[k];
            // partial products never pass a descent of s_{i_k}
            if group.len(group.right_mul(prev, i)) < group.len(prev) {
                return false;
            }
            let cur = match qk {
                Some(_) => group.right_mul(prev, i),
                None => prev,
            };
            if group.len(cur) < group.len(prev) {
                return false;
            }
            prev = cur;
        }
        prev == v
    }
}

/// Greedy right-to-left computation, with the defining conditions asserted
/// on the result.
pub fn positive_subexpression(
    group: &WeylGroup,
    v: WeylElem,
    word: &[usize],
) -> Result<PositiveSubexpression> {
    let m = word.len();
    let mut u = v;
    let mut q: Vec<Option<usize>> = vec![None; m];
    for k in (0..m).rev() {
        let i = word[k];
        let usi = group.right_mul(u, i);
        if group.len(usi) < group.len(u) {
            q[k] = Some(i);
            u = usi;
        }
    }
    if u != group.identity() {
        return Err(Error::NotBruhatBelow(format!(
            "v (id {v}) is not below the word {word:?}"
        )));
    }
    if !PositiveSubexpression::satisfies_conditions(group, v, word, &q) {
        return Err(Error::NotBruhatBelow(format!(
            "greedy subexpression for v (id {v}) violates the defining conditions"
        )));
    }
    let primes = (0..m).filter(|&k| q[k].is_none()).collect();
    let doubleprimes = (0..m).filter(|&k| q[k].is_some()).collect();
    let mut w = group.identity();
    for &i in word {
        w = group.right_mul(w, i);
    }
    Ok(PositiveSubexpression {
        v,
        w,
        word: word.to_vec(),
        q,
        primes,
        doubleprimes,
    })
}

/// A permutation of the vertex set compatible with the Cartan matrix, with
/// each orbit consisting of pairwise commuting vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> DiagramAutomorphism {
        DiagramAutomorphism {
            perm: (0..rank).collect(),
        }
    }

    pub fn new(cartan: &CartanDatum, perm: Vec<usize>) -> Result<DiagramAutomorphism> {
        let n = cartan.rank();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidAutomorphism("wrong permutation length".into()));
        }
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidAutomorphism("not a permutation".into()));
            }
            seen[p] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if cartan.matrix[perm[i]][perm[j]] != cartan.matrix[i][j] {
                    return Err(Error::InvalidAutomorphism(
                        "permutation does not preserve the Cartan matrix".into(),
                    ));
                }
            }
            if cartan.matrix[i][perm[i]] == -1 {
                return Err(Error::InvalidAutomorphism(format!(
                    "s_{} and s_{} do not commute",
                    i + 1,
                    perm[i] + 1
                )));
            }
        }
        Ok(DiagramAutomorphism { perm })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// Orbits of the permutation on the vertex set, each sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                orbit.push(i);
                i = self.perm[i];
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    pub fn apply_weight(&self, w: &Weight) -> Weight {
        // <delta(i), delta(l)> = <i, l>
        let mut out = vec![0; w.len()];
        for (i, &c) in w.iter().enumerate() {
            out[self.perm[i]] = c;
        }
        out
    }
}

/// The fixed subgroup W^delta with its own length function: word length in
/// the orbit-product generators.
#[derive(Debug, Clone)]
pub struct FixedSubgroup {
    pub orbits: Vec<Vec<usize>>,
    /// ids (in the ambient group) of the orbit-product generators
    pub generators: Vec<WeylElem>,
    pub elements: Vec<WeylElem>,
    pub delta_length: HashMap<WeylElem, usize>,
    /// one reduced word per element, in generator (orbit) indices
    pub delta_word: HashMap<WeylElem, Vec<usize>>,
}

pub fn fixed_subgroup(group: &WeylGroup, delta: &DiagramAutomorphism) -> FixedSubgroup {
    let orbits = delta.orbits();
    let generators: Vec<WeylElem> = orbits
        .iter()
        .map(|orbit| {
            let mut g = group.identity();
            for &i in orbit {
                g = group.right_mul(g, i);
            }
            g
        })
        .collect();
    let mut delta_length = HashMap::new();
    let mut delta_word: HashMap<WeylElem, Vec<usize>> = HashMap::new();
    delta_length.insert(group.identity(), 0);
    delta_word.insert(group.identity(), Vec::new());
    let mut elements = vec![group.identity()];
    let mut queue = VecDeque::new();
    queue.push_back(group.identity());
    while let Some(w) = queue.pop_front() {
        for (oi, &g) in generators.iter().enumerate() {
            let next = group.mul(w, g);
            if !delta_length.contains_key(&next) {
                delta_length.insert(next, delta_length[&w] + 1);
                let mut word = delta_word[&w].clone();
                word.push(oi);
                delta_word.insert(next, word);
                elements.push(next);
                queue.push_back(next);
            }
        }
    }
    elements.sort_unstable();
    FixedSubgroup {
        orbits,
        generators,
        elements,
        delta_length,
        delta_word,
    }
}

impl FixedSubgroup {
    pub fn contains(&self, w: WeylElem) -> bool {
        self.delta_length.contains_key(&w)
    }

    pub fn delta_len(&self, w: WeylElem) -> usize {
        self.delta_length[&w]
    }

    /// Expand the delta-word of w into a word in simple reflections, one
    /// orbit block at a time.
    pub fn adapted_word(&self, w: WeylElem) -> Vec<usize> {
        self.delta_word[&w]
            .iter()
            .flat_map(|&oi| self.orbits[oi].iter().copied())
            .collect()
    }

    /// Block index of each position of the adapted word of w.
    pub fn adapted_blocks(&self, w: WeylElem) -> Vec<usize> {
        self.delta_word[&w]
            .iter()
            .enumerate()
            .flat_map(|(pos, &oi)| std::iter::repeat(pos).take(self.orbits[oi].len()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> WeylGroup {
        WeylGroup::enumerate(CartanDatum::parse_type("A1").unwrap(), DEFAULT_WEYL_BOUND).unwrap()
    }

    fn a2() -> WeylGroup {
        WeylGroup::enumerate(CartanDatum::parse_type("A2").unwrap(), DEFAULT_WEYL_BOUND).unwrap()
    }

    fn a1a1() -> WeylGroup {
        WeylGroup::enumerate(CartanDatum::parse_type("A1xA1").unwrap(), DEFAULT_WEYL_BOUND).unwrap()
    }

    #[test]
    fn enumerate_small_groups() {
        let g = a1();
        assert_eq!(g.order(), 2);
        assert_eq!(g.longest(), g.generator(0));

        let g = a2();
        assert_eq!(g.order(), 6);
        assert_eq!(g.len(g.longest()), 3);

        let g = a1a1();
        assert_eq!(g.order(), 4);
        assert_eq!(
            g.longest(),
            g.mul(g.generator(0), g.generator(1))
        );
    }

    #[test]
    fn bruhat_order_a2() {
        let g = a2();
        let s1 = g.generator(0);
        let s2 = g.generator(1);
        let s1s2 = g.mul(s1, s2);
        for w in 0..g.order() {
            assert!(g.bruhat_leq(g.identity(), w));
        }
        assert!(g.bruhat_leq(s1, s1s2));
        assert!(!g.bruhat_leq(s1s2, s2));
    }

    #[test]
    fn bruhat_all_words_agree_a2_and_a1a1() {
        // subword-of-one-reduced-word is independent of the chosen word
        for g in [a2(), a1a1()] {
            for w in 0..g.order() {
                let words = g.reduced_words(w);
                let reference = g.bruhat_lower(w);
                for word in &words {
                    let mut set: HashSet<WeylElem> = HashSet::new();
                    set.insert(g.identity());
                    for &i in word {
                        let ups: Vec<_> = set
                            .iter()
                            .filter_map(|&v| {
                                let vi = g.right_mul(v, i);
                                (g.len(vi) > g.len(v)).then_some(vi)
                            })
                            .collect();
                        set.extend(ups);
                    }
                    assert_eq!(set, reference);
                }
            }
        }
    }

    #[test]
    fn reduced_words_a2() {
        let g = a2();
        let w0 = g.longest();
        assert_eq!(g.reduced_words(w0), vec![vec![0, 1, 0], vec![1, 0, 1]]);
        assert_eq!(g.reduced_words(g.identity()), vec![Vec::<usize>::new()]);
        let s1s2 = g.mul(g.generator(0), g.generator(1));
        assert_eq!(g.reduced_words(s1s2), vec![vec![0, 1]]);
    }

    #[test]
    fn positive_subexpression_examples() {
        let g = a2();
        let s2 = g.generator(1);
        let pse = positive_subexpression(&g, s2, &[0, 1, 0]).unwrap();
        assert_eq!(pse.q, vec![None, Some(1), None]);
        assert_eq!(pse.primes, vec![0, 2]);

        let pse = positive_subexpression(&g, g.identity(), &[0, 1, 0]).unwrap();
        assert_eq!(pse.primes, vec![0, 1, 2]);

        let w0 = g.longest();
        let pse = positive_subexpression(&g, w0, &[0, 1, 0]).unwrap();
        assert!(pse.primes.is_empty());

        assert!(positive_subexpression(&g, w0, &[0, 1]).is_err());
    }

    #[test]
    fn positive_subexpression_is_unique() {
        // exhaustive search over all 2^m subexpressions
        let g = a2();
        for (v, w) in g.bruhat_pairs() {
            for word in g.reduced_words(w) {
                let m = word.len();
                let mut found = Vec::new();
                for mask in 0..(1u32 << m) {
                    let q: Vec<Option<usize>> = (0..m)
                        .map(|k| (mask >> k & 1 == 1).then_some(word[k]))
                        .collect();
                    if PositiveSubexpression::satisfies_conditions(&g, v, &word, &q) {
                        found.push(q);
                    }
                }
                assert_eq!(found.len(), 1, "v={v} word={word:?}");
                let pse = positive_subexpression(&g, v, &word).unwrap();
                assert_eq!(found[0], pse.q);
                // dimension count
                assert_eq!(pse.primes.len(), g.len(w) - g.len(v));
            }
        }
    }

    #[test]
    fn fixed_subgroup_swap_a1a1() {
        let g = a1a1();
        let delta = DiagramAutomorphism::new(&g.cartan, vec![1, 0]).unwrap();
        let sub = fixed_subgroup(&g, &delta);
        assert_eq!(sub.elements.len(), 2);
        let s1s2 = g.mul(g.generator(0), g.generator(1));
        assert!(sub.contains(s1s2));
        assert_eq!(sub.delta_len(s1s2), 1);
        assert_eq!(sub.adapted_word(s1s2), vec![0, 1]);
    }

    #[test]
    fn fixed_subgroup_identity_is_whole_group() {
        let g = a2();
        let delta = DiagramAutomorphism::identity(2);
        let sub = fixed_subgroup(&g, &delta);
        assert_eq!(sub.elements.len(), g.order());
        for &w in &sub.elements {
            assert_eq!(sub.delta_len(w), g.len(w));
        }
    }

    #[test]
    fn fixed_subgroup_a3_fold_is_b2() {
        let g = WeylGroup::enumerate(CartanDatum::parse_type("A3").unwrap(), DEFAULT_WEYL_BOUND)
            .unwrap();
        assert_eq!(g.order(), 24);
        let delta = DiagramAutomorphism::new(&g.cartan, vec![2, 1, 0]).unwrap();
        let sub = fixed_subgroup(&g, &delta);
        assert_eq!(sub.elements.len(), 8);
    }

    #[test]
    fn rejects_noncommuting_orbit() {
        let g = a2();
        // A2 swap has a_{1,2} = -1, so s_1 s_2 do not commute
        assert!(DiagramAutomorphism::new(&g.cartan, vec![1, 0]).is_err());
    }

    #[test]
    fn weight_reflection() {
        let c = CartanDatum::parse_type("A2").unwrap();
        assert_eq!(c.reflect(0, &vec![1, 1]), vec![-1, 2]);
        let g = a2();
        let w0 = g.longest();
        assert_eq!(g.apply(w0, &vec![1, 1]), vec![-1, -1]);
    }
}
