//! Independence of the projective model on the chosen highest weight: the
//! tensor pairing E, the intertwiner Gamma with natural-number structure
//! constants, rank-one factorization of decomposable tensors, the
//! comparison map H between the models for lambda + lambda' and lambda,
//! and the change-of-weight bijections gamma with their cocycle law.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cells::{census, classify, omega, Census};
use crate::error::{Error, Result};
use crate::linalg::{qvec_zero, BasisSolver, QVec};
use crate::repdata::{build_rep, Rep};
use crate::rootdata::{is_dominant, is_very_dominant, Weight, WeylGroup};
use crate::semifield::{nat_embed, ExtValue, Tag, Value};
use crate::vk::{apply_word, pk_equal, projectivize, Gen, Hom, PkPoint, VkVector};

/// A vector of the tensor module: a formal sum over pairs of basis
/// elements of the two factors, with coefficients in the semifield.
/// Absent coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector {
    pub tag: Tag,
    pub dim_left: usize,
    pub dim_right: usize,
    pub coeffs: BTreeMap<(usize, usize), Value>,
}

impl TensorVector {
    pub fn empty(tag: Tag, dim_left: usize, dim_right: usize) -> TensorVector {
        TensorVector {
            tag,
            dim_left,
            dim_right,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_at(&mut self, s: (usize, usize), v: &Value) -> Result<()> {
        match self.coeffs.get(&s) {
            Some(old) => {
                let sum = old.add(v)?;
                self.coeffs.insert(s, sum);
            }
            None => {
                self.coeffs.insert(s, v.clone());
            }
        }
        Ok(())
    }
}

/// The bilinear pairing: (xi, xi') goes to the tensor with coefficient
/// xi_b * xi'_{b'} at (b, b'). Any absent factor makes the entry absent.
pub fn e_k(rep_l: &Rep, rep_r: &Rep, xi: &VkVector, xip: &VkVector) -> Result<TensorVector> {
    if xi.tag != xip.tag {
        return Err(Error::TagMismatch("tensor pairing".into()));
    }
    let mut out = TensorVector::empty(xi.tag, rep_l.dim(), rep_r.dim());
    for (b, vb) in &xi.coeffs {
        for (bp, vbp) in &xip.coeffs {
            out.coeffs.insert((*b, *bp), vb.mul(vbp)?);
        }
    }
    Ok(out)
}

/// The intertwiner from the module of the summed weight into the tensor of
/// the two factor modules, stored through its natural-number structure
/// constants: row b lists the pairs (b1, b'1) with the entry at each.
#[derive(Debug, Clone)]
pub struct GammaData {
    pub dim_left: usize,
    pub dim_right: usize,
    pub rows: Vec<Vec<((usize, usize), BigUint)>>,
}

/// The semifield-linear extension of the intertwiner.
pub fn gamma_k(gamma: &GammaData, xi: &VkVector) -> Result<TensorVector> {
    let mut out = TensorVector::empty(xi.tag, gamma.dim_left, gamma.dim_right);
    for (b, vb) in &xi.coeffs {
        for (s, e) in &gamma.rows[*b] {
            if let ExtValue::Present(en) = nat_embed(xi.tag, e) {
                out.add_at(*s, &vb.mul(&en)?)?;
            }
        }
    }
    Ok(out)
}

/// Entrywise application of a semifield homomorphism to a tensor.
pub fn tensor_v_r(hom: &Hom, u: &TensorVector) -> Result<TensorVector> {
    let mut out = TensorVector::empty(hom.target_tag(), u.dim_left, u.dim_right);
    for (s, v) in &u.coeffs {
        if let ExtValue::Present(w) = hom.apply(&ExtValue::Present(v.clone()))? {
            out.coeffs.insert(*s, w);
        }
    }
    Ok(out)
}

/// Index of the pair (b1, b2) in the flattened tensor coordinates.
fn tidx(dim_right: usize, b1: usize, b2: usize) -> usize {
    b1 * dim_right + b2
}

/// Applies sum_{p+q=n} f_i^{(p)} (x) f_i^{(q)} to a rational tensor
/// coordinate vector (the action of the n-th divided power on a tensor
/// product at the classical specialization).
fn tensor_apply_fn(rep_l: &Rep, rep_r: &Rep, i: usize, n: i64, u: &QVec) -> QVec {
    let dr = rep_r.dim();
    let mut out = qvec_zero(u.len());
    for p in 0..=n {
        let q = n - p;
        let (Some(op_l), Some(op_r)) = (rep_l.f_op(i, p), rep_r.f_op(i, q)) else {
            continue;
        };
        for (idx, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (b1, b2) = (idx / dr, idx % dr);
            for (c1, d1) in &op_l.rows[b1] {
                for (c2, d2) in &op_r.rows[b2] {
                    let d = BigRational::from(num_bigint::BigInt::from(d1 * d2));
                    out[tidx(dr, *c1, *c2)] += c * d;
                }
            }
        }
    }
    out
}

/// Same for the raising generators.
fn tensor_apply_en(rep_l: &Rep, rep_r: &Rep, i: usize, n: i64, u: &QVec) -> QVec {
    let dr = rep_r.dim();
    let mut out = qvec_zero(u.len());
    for p in 0..=n {
        let q = n - p;
        let (Some(op_l), Some(op_r)) = (rep_l.e_op(i, p), rep_r.e_op(i, q)) else {
            continue;
        };
        for (idx, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (b1, b2) = (idx / dr, idx % dr);
            for (c1, d1) in &op_l.rows[b1] {
                for (c2, d2) in &op_r.rows[b2] {
                    let d = BigRational::from(num_bigint::BigInt::from(d1 * d2));
                    out[tidx(dr, *c1, *c2)] += c * d;
                }
            }
        }
    }
    out
}

/// Builds the unique rational linear map from the module of the summed
/// weight into the tensor module that commutes with the lowering
/// generators and sends highest weight vector to the tensor of the two
/// highest weight vectors. The module is spanned by lowering monomials
/// applied to the highest weight vector, so the map is determined by
/// back-substitution; all structure constants are then verified to be
/// natural numbers and the full intertwining property is asserted.
pub fn build_gamma(rep_l: &Rep, rep_r: &Rep, rep_sum: &Rep) -> Result<GammaData> {
    if rep_l.cartan != rep_r.cartan || rep_l.cartan != rep_sum.cartan {
        return Err(Error::DimensionMismatch(
            "the three modules must share a Cartan datum".into(),
        ));
    }
    let expected: Weight = rep_l
        .lambda
        .iter()
        .zip(&rep_r.lambda)
        .map(|(a, b)| a + b)
        .collect();
    if expected != rep_sum.lambda {
        return Err(Error::DimensionMismatch(
            "the third weight must be the sum of the first two".into(),
        ));
    }
    let dr = rep_r.dim();
    let ds = rep_sum.dim();
    let tdim = rep_l.dim() * dr;
    // breadth-first spanning from the highest weight line, tracking the
    // image of each spanning vector in the tensor module
    let mut sel_rows: Vec<QVec> = Vec::new();
    let mut sel_imgs: Vec<QVec> = Vec::new();
    let mut red: Vec<(usize, QVec)> = Vec::new();
    let mut start_img = qvec_zero(tdim);
    start_img[tidx(dr, rep_l.xi_plus, rep_r.xi_plus)] = BigRational::from_integer(1.into());
    let mut queue = vec![(rep_sum.indicator(rep_sum.xi_plus), start_img)];
    while let Some((v, img)) = queue.pop() {
        if sel_rows.len() == ds {
            break;
        }
        // reduce against the selected rows to test independence
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
        for i in 0..rep_sum.rank() {
            let vi = rep_sum.apply_f_q(i, 1, &v);
            if vi.iter().all(|c| c.is_zero()) {
                continue;
            }
            queue.push((vi, tensor_apply_fn(rep_l, rep_r, i, 1, &img)));
        }
        sel_rows.push(v);
        sel_imgs.push(img);
    }
    if sel_rows.len() != ds {
        return Err(Error::IntertwinerFailure(
            "lowering monomials do not span the module".into(),
        ));
    }
    let solver = BasisSolver::new(&sel_rows).ok_or_else(|| {
        Error::IntertwinerFailure("spanning vectors are not independent".into())
    })?;
    let mut qrows: Vec<QVec> = Vec::with_capacity(ds);
    for b in 0..ds {
        let coords = solver.solve(&rep_sum.indicator(b)).ok_or_else(|| {
            Error::IntertwinerFailure("basis vector outside the monomial span".into())
        })?;
        let mut img = qvec_zero(tdim);
        for (c, g) in coords.iter().zip(&sel_imgs) {
            if c.is_zero() {
                continue;
            }
            for (o, gi) in img.iter_mut().zip(g) {
                *o += c * gi;
            }
        }
        qrows.push(img);
    }
    // the full intertwining property, for every stored divided power
    for i in 0..rep_sum.rank() {
        let powers = rep_sum.f_ops[i].len() as i64;
        for n in 1..powers {
            for b in 0..ds {
                let lhs = tensor_apply_fn(rep_l, rep_r, i, n, &qrows[b]);
                let mut rhs = qvec_zero(tdim);
                if let Some(op) = rep_sum.f_op(i, n) {
                    for (bp, d) in &op.rows[b] {
                        let d = BigRational::from(num_bigint::BigInt::from(d.clone()));
                        for (o, c) in rhs.iter_mut().zip(&qrows[*bp]) {
                            *o += &d * c;
                        }
                    }
                }
                if lhs != rhs {
                    return Err(Error::IntertwinerFailure(format!(
                        "lowering intertwining fails at i={}, n={}, b={}",
                        i + 1,
                        n,
                        b
                    )));
                }
                let lhs = tensor_apply_en(rep_l, rep_r, i, n, &qrows[b]);
                let mut rhs = qvec_zero(tdim);
                if let Some(op) = rep_sum.e_op(i, n) {
                    for (bp, d) in &op.rows[b] {
                        let d = BigRational::from(num_bigint::BigInt::from(d.clone()));
                        for (o, c) in rhs.iter_mut().zip(&qrows[*bp]) {
                            *o += &d * c;
                        }
                    }
                }
                if lhs != rhs {
                    return Err(Error::IntertwinerFailure(format!(
                        "raising intertwining fails at i={}, n={}, b={}",
                        i + 1,
                        n,
                        b
                    )));
                }
            }
        }
    }
    // natural-number structure constants, with no vanishing row
    let mut rows = Vec::with_capacity(ds);
    for (b, img) in qrows.iter().enumerate() {
        let mut row = Vec::new();
        for (idx, c) in img.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() || c.is_negative() {
                return Err(Error::PositivityViolation(format!(
                    "entry {c} of row {b} is not a natural number"
                )));
            }
            let e = c.to_integer().to_biguint().unwrap();
            row.push(((idx / dr, idx % dr), e));
        }
        if row.is_empty() {
            return Err(Error::PositivityViolation(format!(
                "row {b} of the intertwiner vanishes"
            )));
        }
        rows.push(row);
    }
    Ok(GammaData {
        dim_left: rep_l.dim(),
        dim_right: dr,
        rows,
    })
}

/// Factors a decomposable tensor as a pair (xi, xi') with
/// u_{b,b'} = xi_b * xi'_{b'}, pivoting at the lexicographically least
/// support pair; the factorization is unique up to a reciprocal pair of
/// scalars, which the pivot convention fixes by normalizing the second
/// factor at the pivot column.
pub fn factor_rank_one(u: &TensorVector) -> Result<(VkVector, VkVector)> {
    let Some((&(b0, b0p), pivot)) = u.coeffs.iter().next() else {
        return Err(Error::NotDecomposable("the zero tensor".into()));
    };
    let mut xi = VkVector::empty(u.tag);
    let mut xip = VkVector::empty(u.tag);
    for (&(b, bp), v) in &u.coeffs {
        if bp == b0p {
            xi.coeffs.insert(b, v.clone());
        }
        if b == b0 {
            xip.coeffs.insert(bp, v.div(pivot)?);
        }
    }
    let mut covered = 0usize;
    for (b, vb) in &xi.coeffs {
        for (bp, vbp) in &xip.coeffs {
            let Some(got) = u.coeffs.get(&(*b, *bp)) else {
                return Err(Error::NotDecomposable(format!(
                    "entry ({b}, {bp}) is absent but both factors are present"
                )));
            };
            if *got != vb.mul(vbp)? {
                return Err(Error::NotDecomposable(format!(
                    "entry ({b}, {bp}) is not the product of the factors"
                )));
            }
            covered += 1;
        }
    }
    if covered != u.coeffs.len() {
        return Err(Error::NotDecomposable(
            "the support is not a product of two supports".into(),
        ));
    }
    Ok((xi, xip))
}

/// Classifies a point in one model and re-parametrizes the recovered cell
/// coordinates in another model over the same Weyl group.
pub fn reparametrize(
    rep_a: &Rep,
    census_a: &Census,
    rep_b: &Rep,
    census_b: &Census,
    point: &PkPoint,
) -> Result<PkPoint> {
    let (v, w, h) = classify(rep_a, census_a, point.vector())?;
    let desc = census_b.find(v, w).ok_or_else(|| {
        Error::UnknownSupport(format!("no piece for (v={v}, w={w}) in the target census"))
    })?;
    omega(rep_b, desc, point.tag(), &h)
}

/// The change-of-weight bijection between two projective models, computed
/// by the parametrization route: classify in the source model and
/// re-parametrize in the target model.
pub fn gamma_bijection(
    rep_a: &Rep,
    census_a: &Census,
    rep_b: &Rep,
    census_b: &Census,
    point: &PkPoint,
) -> Result<PkPoint> {
    reparametrize(rep_a, census_a, rep_b, census_b, point)
}

/// Everything needed to compare the models for lambda, lambda' and their
/// sum: the three modules, their censuses, and the intertwiners in both
/// factor orders. The second census and intertwiner order are only
/// available when lambda' itself is very dominant.
pub struct GammaContext {
    pub rep_l: Rep,
    pub rep_r: Rep,
    pub rep_sum: Rep,
    pub census_l: Census,
    pub census_r: Option<Census>,
    pub census_sum: Census,
    pub gamma_lr: GammaData,
    pub gamma_rl: GammaData,
}

impl GammaContext {
    pub fn new(group: &WeylGroup, rep_l: &Rep, rep_r: &Rep) -> Result<GammaContext> {
        if !is_very_dominant(&rep_l.lambda) {
            return Err(Error::LambdaNotVeryDominant(format!(
                "{:?} is not very dominant",
                rep_l.lambda
            )));
        }
        if !is_dominant(&rep_r.lambda) {
            return Err(Error::LambdaNotVeryDominant(format!(
                "{:?} is not dominant",
                rep_r.lambda
            )));
        }
        let sum: Weight = rep_l
            .lambda
            .iter()
            .zip(&rep_r.lambda)
            .map(|(a, b)| a + b)
            .collect();
        let rep_sum = build_rep(&rep_l.cartan, &sum)?;
        let census_l = census(rep_l, group)?;
        let census_sum = census(&rep_sum, group)?;
        let gamma_lr = build_gamma(rep_l, rep_r, &rep_sum)?;
        let gamma_rl = build_gamma(rep_r, rep_l, &rep_sum)?;
        let census_r = if is_very_dominant(&rep_r.lambda) {
            Some(census(rep_r, group)?)
        } else {
            None
        };
        Ok(GammaContext {
            rep_l: rep_l.clone(),
            rep_r: rep_r.clone(),
            rep_sum,
            census_l,
            census_r,
            census_sum,
            gamma_lr,
            gamma_rl,
        })
    }

    /// The comparison map: apply the intertwiner to a representative of a
    /// point of the summed model, factor the (decomposable) image and
    /// return the class of the first factor, a point of the first model.
    pub fn h(&self, point: &PkPoint) -> Result<PkPoint> {
        let u = gamma_k(&self.gamma_lr, point.vector())?;
        let (xi, _) = factor_rank_one(&u)?;
        projectivize(&xi)
    }

    /// The comparison map in the other factor order, landing in the
    /// second model.
    pub fn h_prime(&self, point: &PkPoint) -> Result<PkPoint> {
        let u = gamma_k(&self.gamma_rl, point.vector())?;
        let (xi, _) = factor_rank_one(&u)?;
        projectivize(&xi)
    }

    /// The inverse of the comparison map: the comparison map acts as the
    /// identity on cell coordinates, so the inverse is classify in the
    /// first model and re-parametrize in the summed model.
    pub fn h_inverse(&self, point: &PkPoint) -> Result<PkPoint> {
        reparametrize(
            &self.rep_l,
            &self.census_l,
            &self.rep_sum,
            &self.census_sum,
            point,
        )
    }

    /// The change-of-weight bijection from the first model to the second,
    /// computed by the parametrization route and cross-checked against the
    /// intertwiner-and-factorization route through the summed model.
    pub fn gamma(&self, point: &PkPoint) -> Result<PkPoint> {
        let census_r = self.census_r.as_ref().ok_or_else(|| {
            Error::LambdaNotVeryDominant(
                "the second weight must be very dominant for the bijection".into(),
            )
        })?;
        let direct = reparametrize(&self.rep_l, &self.census_l, &self.rep_r, census_r, point)?;
        let via_h = self.h_prime(&self.h_inverse(point)?)?;
        if !pk_equal(&direct, &via_h) {
            return Err(Error::CrossCheckMismatch(
                "parametrization and intertwiner routes disagree".into(),
            ));
        }
        Ok(direct)
    }

    /// The bijection commutes with the generator action: acting first and
    /// mapping must agree with mapping first and acting.
    pub fn check_gamma_commutes(&self, word: &[Gen], point: &PkPoint) -> Result<()> {
        let census_r = self.census_r.as_ref().ok_or_else(|| {
            Error::LambdaNotVeryDominant(
                "the second weight must be very dominant for the bijection".into(),
            )
        })?;
        let acted = projectivize(&apply_word(&self.rep_l, word, point.vector())?)?;
        let lhs = reparametrize(&self.rep_l, &self.census_l, &self.rep_r, census_r, &acted)?;
        let mapped = reparametrize(&self.rep_l, &self.census_l, &self.rep_r, census_r, point)?;
        let rhs = projectivize(&apply_word(&self.rep_r, word, mapped.vector())?)?;
        if !pk_equal(&lhs, &rhs) {
            return Err(Error::CrossCheckMismatch(
                "the bijection does not commute with the word action".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{theta, tropical_grid, sample_h};
    use crate::rootdata::{CartanDatum, DEFAULT_WEYL_BOUND};
    use crate::vk::{sample_vector, v_r, sample_value};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a1_setup(lambda: i64) -> (Rep, WeylGroup) {
        let cartan = CartanDatum::parse_type("A1").unwrap();
        let rep = build_rep(&cartan, &vec![lambda]).unwrap();
        let group = WeylGroup::enumerate(cartan, DEFAULT_WEYL_BOUND).unwrap();
        (rep, group)
    }

    fn trop(n: i64) -> Value {
        Value::Trop(BigInt::from(n))
    }

    #[test]
    fn gamma_rows_a1() {
        let (rep_l, _) = a1_setup(1);
        let (rep_r, _) = a1_setup(2);
        let (rep_sum, _) = a1_setup(3);
        let g = build_gamma(&rep_l, &rep_r, &rep_sum).unwrap();
        // the highest weight vector maps to the tensor of the two
        assert_eq!(
            g.rows[rep_sum.xi_plus],
            vec![((rep_l.xi_plus, rep_r.xi_plus), BigUint::from(1u32))]
        );
        // its first lowering maps by the product rule with entries 1, 1
        let (b1, _) = rep_sum.f_op(0, 1).unwrap().rows[rep_sum.xi_plus][0];
        let mut row = g.rows[b1].clone();
        row.sort();
        assert_eq!(
            row,
            vec![
                ((0, 1), BigUint::from(1u32)),
                ((1, 0), BigUint::from(1u32)),
            ]
        );
    }

    #[test]
    fn gamma_rows_a2() {
        let cartan = CartanDatum::parse_type("A2").unwrap();
        let rep = build_rep(&cartan, &vec![1, 1]).unwrap();
        let rep_sum = build_rep(&cartan, &vec![2, 2]).unwrap();
        let g = build_gamma(&rep, &rep, &rep_sum).unwrap();
        assert_eq!(g.rows.len(), 27);
        assert!(g.rows.iter().all(|r| !r.is_empty()));
    }

    #[test]
    fn e_k_examples() {
        let (rep_l, _) = a1_setup(1);
        let (rep_r, _) = a1_setup(2);
        for tag in [Tag::PosRational, Tag::TropicalInt, Tag::PosRatFun] {
            let xi = VkVector::basis(tag, rep_l.xi_plus);
            let xip = VkVector::basis(tag, rep_r.xi_plus);
            let u = e_k(&rep_l, &rep_r, &xi, &xip).unwrap();
            assert_eq!(u.coeffs.len(), 1);
            assert_eq!(
                u.coeffs.get(&(rep_l.xi_plus, rep_r.xi_plus)),
                Some(&Value::one(tag))
            );
            // any absent factor gives the zero tensor
            let zero = VkVector::empty(tag);
            assert!(e_k(&rep_l, &rep_r, &zero, &xip).unwrap().is_empty());
            assert!(e_k(&rep_l, &rep_r, &xi, &zero).unwrap().is_empty());
        }
    }

    #[test]
    fn factor_examples() {
        // additive rank-one data: 0 2 / 3 5 factors, 0 2 / 3 4 does not
        let mut u = TensorVector::empty(Tag::TropicalInt, 2, 2);
        u.coeffs.insert((0, 0), trop(0));
        u.coeffs.insert((0, 1), trop(2));
        u.coeffs.insert((1, 0), trop(3));
        u.coeffs.insert((1, 1), trop(5));
        let (xi, xip) = factor_rank_one(&u).unwrap();
        assert_eq!(xi.coeffs, BTreeMap::from([(0, trop(0)), (1, trop(3))]));
        assert_eq!(xip.coeffs, BTreeMap::from([(0, trop(0)), (1, trop(2))]));
        u.coeffs.insert((1, 1), trop(4));
        assert!(matches!(
            factor_rank_one(&u),
            Err(Error::NotDecomposable(_))
        ));
        let empty = TensorVector::empty(Tag::TropicalInt, 2, 2);
        assert!(matches!(
            factor_rank_one(&empty),
            Err(Error::NotDecomposable(_))
        ));
    }

    #[test]
    fn factor_round_trips_e_k() {
        let (rep_l, _) = a1_setup(2);
        let (rep_r, _) = a1_setup(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for tag in [Tag::PosRational, Tag::TropicalInt, Tag::PosRatFun] {
            for _ in 0..50 {
                let xi = sample_vector(&mut rng, tag, rep_l.dim());
                let xip = sample_vector(&mut rng, tag, rep_r.dim());
                let u = e_k(&rep_l, &rep_r, &xi, &xip).unwrap();
                let (f, fp) = factor_rank_one(&u).unwrap();
                // equal up to the reciprocal scalar pair
                assert!(pk_equal(
                    &projectivize(&f).unwrap(),
                    &projectivize(&xi).unwrap()
                ));
                assert!(pk_equal(
                    &projectivize(&fp).unwrap(),
                    &projectivize(&xip).unwrap()
                ));
            }
        }
    }

    #[test]
    fn gamma_k_valuation_functoriality() {
        let (rep_l, _) = a1_setup(1);
        let (rep_r, _) = a1_setup(2);
        let (rep_sum, _) = a1_setup(3);
        let g = build_gamma(&rep_l, &rep_r, &rep_sum).unwrap();
        let hom = Hom::Valuation;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let xi = sample_vector(&mut rng, Tag::PosRatFun, rep_sum.dim());
            let lhs = tensor_v_r(&hom, &gamma_k(&g, &xi).unwrap()).unwrap();
            let rhs = gamma_k(&g, &v_r(&hom, &xi).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn h_is_identity_on_parameters() {
        let (rep_l, group) = a1_setup(1);
        let (rep_r, _) = a1_setup(2);
        let ctx = GammaContext::new(&group, &rep_l, &rep_r).unwrap();
        // the highest weight class maps to the highest weight class
        let top = projectivize(&VkVector::basis(
            Tag::TropicalInt,
            ctx.rep_sum.xi_plus,
        ))
        .unwrap();
        let img = ctx.h(&top).unwrap();
        assert!(pk_equal(
            &img,
            &projectivize(&VkVector::basis(Tag::TropicalInt, rep_l.xi_plus)).unwrap()
        ));
        // the comparison map preserves the cell coordinates of every piece
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for desc in &ctx.census_sum.entries {
            let target = ctx.census_l.find(desc.v(), desc.w()).unwrap();
            for h in tropical_grid(desc.dim(), 2) {
                let p = projectivize(&theta(&ctx.rep_sum, desc, Tag::TropicalInt, &h).unwrap())
                    .unwrap();
                let expect =
                    projectivize(&theta(&rep_l, target, Tag::TropicalInt, &h).unwrap()).unwrap();
                assert!(pk_equal(&ctx.h(&p).unwrap(), &expect));
                assert!(pk_equal(&ctx.h_inverse(&expect).unwrap(), &p));
            }
            for tag in [Tag::PosRational, Tag::PosRatFun] {
                let h = sample_h(&mut rng, tag, desc.dim());
                let p = projectivize(&theta(&ctx.rep_sum, desc, tag, &h).unwrap()).unwrap();
                let expect = projectivize(&theta(&rep_l, target, tag, &h).unwrap()).unwrap();
                assert!(pk_equal(&ctx.h(&p).unwrap(), &expect));
            }
        }
    }

    #[test]
    fn h_tropicalization_square() {
        let (rep_l, group) = a1_setup(1);
        let (rep_r, _) = a1_setup(2);
        let ctx = GammaContext::new(&group, &rep_l, &rep_r).unwrap();
        let hom = Hom::Valuation;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for desc in &ctx.census_sum.entries {
            for _ in 0..5 {
                let h = sample_h(&mut rng, Tag::PosRatFun, desc.dim());
                let over_k = theta(&ctx.rep_sum, desc, Tag::PosRatFun, &h).unwrap();
                let pk = projectivize(&over_k).unwrap();
                let lhs =
                    projectivize(&v_r(&hom, ctx.h(&pk).unwrap().vector()).unwrap()).unwrap();
                let pz = projectivize(&v_r(&hom, &over_k).unwrap()).unwrap();
                let rhs = ctx.h(&pz).unwrap();
                assert!(pk_equal(&lhs, &rhs));
            }
        }
    }

    #[test]
    fn gamma_bijection_properties() {
        let (rep1, group) = a1_setup(1);
        let (rep2, _) = a1_setup(2);
        let (rep3, _) = a1_setup(3);
        let c1 = census(&rep1, &group).unwrap();
        let c2 = census(&rep2, &group).unwrap();
        let c3 = census(&rep3, &group).unwrap();
        for desc in &c1.entries {
            for h in tropical_grid(desc.dim(), 2) {
                let p = projectivize(&theta(&rep1, desc, Tag::TropicalInt, &h).unwrap()).unwrap();
                // gamma from a model to itself is the identity
                let same = gamma_bijection(&rep1, &c1, &rep1, &c1, &p).unwrap();
                assert!(pk_equal(&same, &p));
                // 1 -> 2 -> 1 is the identity
                let q = gamma_bijection(&rep1, &c1, &rep2, &c2, &p).unwrap();
                let back = gamma_bijection(&rep2, &c2, &rep1, &c1, &q).unwrap();
                assert!(pk_equal(&back, &p));
                // the cocycle law through the third model
                let direct = gamma_bijection(&rep1, &c1, &rep3, &c3, &p).unwrap();
                let composed = gamma_bijection(&rep2, &c2, &rep3, &c3, &q).unwrap();
                assert!(pk_equal(&direct, &composed));
            }
        }
    }

    #[test]
    fn gamma_cross_checks_and_commutes() {
        let (rep1, group) = a1_setup(1);
        let (rep2, _) = a1_setup(2);
        let ctx = GammaContext::new(&group, &rep1, &rep2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for desc in &ctx.census_l.entries {
            for h in tropical_grid(desc.dim(), 2) {
                let p = projectivize(&theta(&rep1, desc, Tag::TropicalInt, &h).unwrap()).unwrap();
                // the two routes agree
                ctx.gamma(&p).unwrap();
                // the bijection commutes with random generator words
                for _ in 0..5 {
                    let word: Vec<Gen> = (0..3)
                        .map(|_| {
                            let k = sample_value(&mut rng, Tag::TropicalInt);
                            match rng.gen_range(0..3) {
                                0 => Gen::E(0, k),
                                1 => Gen::F(0, k),
                                _ => Gen::Torus(0, k),
                            }
                        })
                        .collect();
                    ctx.check_gamma_commutes(&word, &p).unwrap();
                }
            }
        }
    }

    #[test]
    fn gamma_requires_very_dominant_weights() {
        let cartan = CartanDatum::parse_type("A2").unwrap();
        let group = WeylGroup::enumerate(cartan.clone(), DEFAULT_WEYL_BOUND).unwrap();
        let flat = build_rep(&cartan, &vec![1, 0]).unwrap();
        let good = build_rep(&cartan, &vec![1, 1]).unwrap();
        assert!(matches!(
            GammaContext::new(&group, &flat, &good),
            Err(Error::LambdaNotVeryDominant(_))
        ));
    }
}
