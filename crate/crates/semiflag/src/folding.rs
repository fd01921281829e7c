//! Folding along a diagram automorphism: the induced permutation of the
//! canonical basis, the induced involution of projective points, and the
//! census of the fixed-point locus, indexed by Bruhat pairs in the fixed
//! subgroup with coordinates constant on the orbits of the free positions.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::cells::{census, descriptor, theta, tropical_grid, CellDescriptor};
use crate::error::{Error, Result};
use crate::linalg::{BasisSolver, QVec};
use crate::repdata::Rep;
use crate::rootdata::{fixed_subgroup, DiagramAutomorphism, WeylElem, WeylGroup};
use crate::semifield::Tag;
use crate::vk::{pk_equal, projectivize, PkPoint, VkVector};

/// The unique linear map fixing the highest weight vector and relabeling
/// the lowering generators by the automorphism; it permutes the canonical
/// basis, and the permutation is returned as an id-indexed table.
pub fn delta_on_basis(rep: &Rep, delta: &DiagramAutomorphism) -> Result<Vec<usize>> {
    if delta.apply_weight(&rep.lambda) != rep.lambda {
        return Err(Error::LambdaNotFixed(format!(
            "{:?} is not fixed by the automorphism",
            rep.lambda
        )));
    }
    let dim = rep.dim();
    // breadth-first spanning from the highest weight vector, tracking the
    // image of each spanning vector under the relabeled lowering action
    let mut sel_rows: Vec<QVec> = Vec::new();
    let mut sel_imgs: Vec<QVec> = Vec::new();
    let mut red: Vec<(usize, QVec)> = Vec::new();
    let mut queue = vec![(rep.indicator(rep.xi_plus), rep.indicator(rep.xi_plus))];
    while let Some((v, img)) = queue.pop() {
        if sel_rows.len() == dim {
            break;
        }
        let mut w = v.clone();
        for (piv, row) in &red {
            let f = w[*piv].clone();
            if !f.is_zero() {
                for (c, rc) in w.iter_mut().zip(row) {
                    *c -= &f * rc;
                }
            }
        }
        let Some(piv) = w.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        let lead = w[piv].clone();
        for c in w.iter_mut() {
            *c /= lead.clone();
        }
        red.push((piv, w));
        for i in 0..rep.rank() {
            let vi = rep.apply_f_q(i, 1, &v);
            if vi.iter().all(|c| c.is_zero()) {
                continue;
            }
            let gi = rep.apply_f_q(delta.apply(i), 1, &img);
            queue.push((vi, gi));
        }
        sel_rows.push(v);
        sel_imgs.push(img);
    }
    if sel_rows.len() != dim {
        return Err(Error::NotAPermutation(
            "lowering monomials do not span the module".into(),
        ));
    }
    let solver = BasisSolver::new(&sel_rows)
        .ok_or_else(|| Error::NotAPermutation("spanning vectors are not independent".into()))?;
    let mut perm = vec![usize::MAX; dim];
    let mut hit = vec![false; dim];
    for b in 0..dim {
        let coords = solver
            .solve(&rep.indicator(b))
            .ok_or_else(|| Error::NotAPermutation("basis vector outside the span".into()))?;
        let mut img = vec![num_rational::BigRational::zero(); dim];
        for (c, g) in coords.iter().zip(&sel_imgs) {
            if c.is_zero() {
                continue;
            }
            for (o, gi) in img.iter_mut().zip(g) {
                *o += c * gi;
            }
        }
        let mut target = None;
        for (bp, c) in img.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_one() || target.is_some() {
                return Err(Error::NotAPermutation(format!(
                    "the image of basis vector {b} is not a basis vector"
                )));
            }
            target = Some(bp);
        }
        let Some(bp) = target else {
            return Err(Error::NotAPermutation(format!(
                "basis vector {b} maps to zero"
            )));
        };
        if hit[bp] {
            return Err(Error::NotAPermutation(format!(
                "two basis vectors map to {bp}"
            )));
        }
        hit[bp] = true;
        perm[b] = bp;
    }
    // the relabeled structure constants agree under the permutation, for
    // every stored divided power of both generator families
    for i in 0..rep.rank() {
        let j = delta.apply(i);
        for (ops_a, ops_b) in [(&rep.f_ops, &rep.f_ops), (&rep.e_ops, &rep.e_ops)] {
            for (n, op) in ops_a[i].iter().enumerate() {
                let opj = &ops_b[j][n];
                for b in 0..dim {
                    let mut lhs: Vec<(usize, _)> = op.rows[b]
                        .iter()
                        .map(|(bp, d)| (perm[*bp], d.clone()))
                        .collect();
                    lhs.sort();
                    let mut rhs = opj.rows[perm[b]].clone();
                    rhs.sort();
                    if lhs != rhs {
                        return Err(Error::NotAPermutation(format!(
                            "structure constants disagree at i={}, n={n}, b={b}",
                            i + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(perm)
}

/// The induced map on vectors: the coefficient at b moves to the image of
/// b under the basis permutation.
pub fn delta_on_vector(perm: &[usize], xi: &VkVector) -> VkVector {
    let mut out = VkVector::empty(xi.tag);
    for (b, v) in &xi.coeffs {
        out.coeffs.insert(perm[*b], v.clone());
    }
    out
}

/// The induced involution of projective points.
pub fn delta_on_points(perm: &[usize], p: &PkPoint) -> Result<PkPoint> {
    projectivize(&delta_on_vector(perm, p.vector()))
}

/// Whether a projective point is fixed by the induced involution.
pub fn is_fixed(perm: &[usize], p: &PkPoint) -> Result<bool> {
    Ok(pk_equal(&delta_on_points(perm, p)?, p))
}

/// One piece of the fixed-point census: a Bruhat pair in the fixed
/// subgroup, its length-difference dimension there, and the (invariant)
/// support of the ambient piece.
#[derive(Debug, Clone)]
pub struct FoldedCensusEntry {
    pub v: WeylElem,
    pub w: WeylElem,
    pub delta_dim: usize,
    pub support: BTreeSet<usize>,
    /// the descriptor of the ambient piece, over an orbit-adapted word
    pub descriptor: CellDescriptor,
    /// orbits of the free positions under the automorphism, as index sets
    /// into the coordinate tuple
    pub coordinate_orbits: Vec<Vec<usize>>,
}

/// The census of the fixed-point locus: the ambient pieces whose Bruhat
/// pair lies in the fixed subgroup, rebuilt over orbit-adapted reduced
/// words. For each piece the fixed points are exactly the points whose
/// coordinates are constant on the orbits of the free positions; this
/// characterization is checked exhaustively on a small tropical grid.
pub fn folded_census(
    rep: &Rep,
    group: &WeylGroup,
    delta: &DiagramAutomorphism,
) -> Result<Vec<FoldedCensusEntry>> {
    let perm = delta_on_basis(rep, delta)?;
    let sub = fixed_subgroup(group, delta);
    let ambient = census(rep, group)?;
    let mut entries = Vec::new();
    for &w in &sub.elements {
        let word = sub.adapted_word(w);
        let blocks = sub.adapted_blocks(w);
        for &v in &sub.elements {
            if !group.bruhat_leq(v, w) {
                continue;
            }
            let desc = descriptor(rep, group, v, &word)?;
            // the ambient census must carry the same support for (v, w)
            let unfolded = ambient.find(v, w).ok_or_else(|| {
                Error::FixedPointMismatch(format!(
                    "pair (v={v}, w={w}) is missing from the ambient census"
                ))
            })?;
            if unfolded.support != desc.support {
                return Err(Error::FixedPointMismatch(format!(
                    "support of (v={v}, w={w}) depends on the adapted word"
                )));
            }
            if desc.support.iter().map(|&b| perm[b]).collect::<BTreeSet<_>>() != desc.support {
                return Err(Error::FixedPointMismatch(format!(
                    "support of (v={v}, w={w}) is not invariant"
                )));
            }
            // pair each position with the position carrying the relabeled
            // letter inside the same orbit block
            let m = word.len();
            let mut partner = vec![usize::MAX; m];
            for k in 0..m {
                let want = delta.apply(word[k]);
                partner[k] = (0..m)
                    .find(|&kp| blocks[kp] == blocks[k] && word[kp] == want)
                    .ok_or_else(|| {
                        Error::FixedPointMismatch(format!(
                            "no partner for position {} of (v={v}, w={w})",
                            k + 1
                        ))
                    })?;
            }
            // free positions pair with free positions
            let primes: Vec<usize> = desc.pse.primes.clone();
            let free: BTreeSet<usize> = primes.iter().copied().collect();
            for &k in &primes {
                if !free.contains(&partner[k]) {
                    return Err(Error::FixedPointMismatch(format!(
                        "the free positions of (v={v}, w={w}) are not invariant"
                    )));
                }
            }
            // orbits of the free positions, as coordinate index sets
            let mut coordinate_orbits: Vec<Vec<usize>> = Vec::new();
            let mut seen = vec![false; primes.len()];
            for start in 0..primes.len() {
                if seen[start] {
                    continue;
                }
                let mut orbit = Vec::new();
                let mut j = start;
                while !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                    let kp = partner[primes[j]];
                    j = primes.iter().position(|&k| k == kp).unwrap();
                }
                orbit.sort_unstable();
                coordinate_orbits.push(orbit);
            }
            let delta_dim = sub.delta_len(w) - sub.delta_len(v);
            if coordinate_orbits.len() != delta_dim {
                return Err(Error::FixedPointMismatch(format!(
                    "(v={v}, w={w}): {} coordinate orbits but folded dimension {delta_dim}",
                    coordinate_orbits.len()
                )));
            }
            // a grid point is fixed exactly when its coordinates are
            // constant on the orbits
            for h in tropical_grid(desc.dim(), 2) {
                let p = projectivize(&theta(rep, &desc, Tag::TropicalInt, &h)?)?;
                let symmetric = coordinate_orbits
                    .iter()
                    .all(|orbit| orbit.iter().all(|&j| h[j] == h[orbit[0]]));
                if is_fixed(&perm, &p)? != symmetric {
                    return Err(Error::FixedPointMismatch(format!(
                        "(v={v}, w={w}): fixed-point test disagrees at {h:?}"
                    )));
                }
            }
            entries.push(FoldedCensusEntry {
                v,
                w,
                delta_dim,
                support: desc.support.clone(),
                descriptor: desc,
                coordinate_orbits,
            });
        }
    }
    entries.sort_by_key(|e| (e.w, e.v));
    Ok(entries)
}

/// JSON rendering of the folded census, one object per piece.
pub fn folded_census_to_json(
    group: &WeylGroup,
    entries: &[FoldedCensusEntry],
) -> serde_json::Value {
    let pieces: Vec<serde_json::Value> = entries
        .iter()
        .map(|e| {
            serde_json::json!({
                "v": group.element_string(e.v),
                "w": group.element_string(e.w),
                "dim": e.delta_dim,
                "support": e.support.iter().collect::<Vec<_>>(),
                "orbits": e.coordinate_orbits,
            })
        })
        .collect();
    serde_json::json!({
        "schema": "folded-census-v1",
        "pieces": pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::sample_h;
    use crate::repdata::build_rep;
    use crate::rootdata::{CartanDatum, DEFAULT_WEYL_BOUND};
    use crate::semifield::Value;
    use crate::vk::{apply_f, VkVector};
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(kind: &str, lambda: &[i64]) -> (Rep, WeylGroup) {
        let cartan = CartanDatum::parse_type(kind).unwrap();
        let rep = build_rep(&cartan, &lambda.to_vec()).unwrap();
        let group = WeylGroup::enumerate(cartan, DEFAULT_WEYL_BOUND).unwrap();
        (rep, group)
    }

    fn swap() -> DiagramAutomorphism {
        let cartan = CartanDatum::parse_type("A1xA1").unwrap();
        DiagramAutomorphism::new(&cartan, vec![1, 0]).unwrap()
    }

    fn trop(n: i64) -> Value {
        Value::Trop(BigInt::from(n))
    }

    #[test]
    fn identity_automorphism_fixes_everything() {
        let (rep, group) = setup("A2", &[1, 1]);
        let delta = DiagramAutomorphism::identity(2);
        let perm = delta_on_basis(&rep, &delta).unwrap();
        assert_eq!(perm, (0..rep.dim()).collect::<Vec<_>>());
        // the folded census then equals the unfolded census
        let folded = folded_census(&rep, &group, &delta).unwrap();
        let unfolded = census(&rep, &group).unwrap();
        assert_eq!(folded.len(), unfolded.len());
        for e in &folded {
            let d = unfolded.find(e.v, e.w).unwrap();
            assert_eq!(e.support, d.support);
            assert_eq!(e.delta_dim, d.dim());
        }
    }

    #[test]
    fn swap_permutation_on_the_tensor_square() {
        let (rep, _) = setup("A1xA1", &[1, 1]);
        let delta = swap();
        let perm = delta_on_basis(&rep, &delta).unwrap();
        // an involution fixing the extreme vectors and swapping the two
        // mixed-weight basis vectors
        assert_ne!(perm, (0..rep.dim()).collect::<Vec<_>>());
        for b in 0..rep.dim() {
            assert_eq!(perm[perm[b]], b);
            let mut w = rep.weight(b).clone();
            w.swap(0, 1);
            assert_eq!(rep.weight(perm[b]), &w);
        }
        assert_eq!(perm[rep.xi_plus], rep.xi_plus);
        assert_eq!(perm[rep.xi_minus], rep.xi_minus);
    }

    #[test]
    fn rejects_asymmetric_highest_weight() {
        let (rep, _) = setup("A1xA1", &[2, 1]);
        assert!(matches!(
            delta_on_basis(&rep, &swap()),
            Err(Error::LambdaNotFixed(_))
        ));
    }

    #[test]
    fn delta_commutes_with_the_action() {
        let (rep, _) = setup("A1xA1", &[2, 2]);
        let delta = swap();
        let perm = delta_on_basis(&rep, &delta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for tag in [Tag::PosRational, Tag::TropicalInt, Tag::PosRatFun] {
            for b in 0..rep.dim() {
                for i in 0..rep.rank() {
                    let k = &sample_h(&mut rng, tag, 1)[0];
                    let xi = VkVector::basis(tag, b);
                    let lhs = delta_on_vector(&perm, &apply_f(&rep, i, k, &xi).unwrap());
                    let rhs = apply_f(
                        &rep,
                        delta.apply(i),
                        k,
                        &delta_on_vector(&perm, &xi),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn fixed_points_have_symmetric_coordinates() {
        let (rep, group) = setup("A1xA1", &[1, 1]);
        let delta = swap();
        let perm = delta_on_basis(&rep, &delta).unwrap();
        // the highest weight point is fixed
        let top = projectivize(&VkVector::basis(Tag::TropicalInt, rep.xi_plus)).unwrap();
        assert!(is_fixed(&perm, &top).unwrap());
        // on the top piece: symmetric coordinates are fixed, others are not
        let sub = fixed_subgroup(&group, &delta);
        let wi = group.longest();
        let desc = descriptor(&rep, &group, group.identity(), &sub.adapted_word(wi)).unwrap();
        let sym = projectivize(&theta(&rep, &desc, Tag::TropicalInt, &[trop(3), trop(3)]).unwrap())
            .unwrap();
        assert!(is_fixed(&perm, &sym).unwrap());
        let asym =
            projectivize(&theta(&rep, &desc, Tag::TropicalInt, &[trop(1), trop(2)]).unwrap())
                .unwrap();
        assert!(!is_fixed(&perm, &asym).unwrap());
    }

    #[test]
    fn folded_census_matches_the_rank_one_model() {
        let (rep, group) = setup("A1xA1", &[2, 2]);
        let folded = folded_census(&rep, &group, &swap()).unwrap();
        assert_eq!(folded.len(), 3);
        let mut dims: Vec<usize> = folded.iter().map(|e| e.delta_dim).collect();
        dims.sort_unstable();
        // same piece dimensions as the census of the folded rank-one model
        let (rep1, group1) = setup("A1", &[2]);
        let mut expect: Vec<usize> = census(&rep1, &group1)
            .unwrap()
            .entries
            .iter()
            .map(|d| d.dim())
            .collect();
        expect.sort_unstable();
        assert_eq!(dims, expect);
    }
}
