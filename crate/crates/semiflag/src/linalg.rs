//! Exact dense linear algebra over the rationals: just enough to express
//! vectors in a chosen basis and to assert linear independence.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QVec = Vec<BigRational>;

pub fn qvec_zero(n: usize) -> QVec {
    vec![BigRational::zero(); n]
}

pub fn qvec_is_zero(v: &QVec) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Solves x·A = y for row vectors y, where A is a fixed full-row-rank
/// matrix whose rows are the basis vectors. Construction fails if the rows
/// are dependent.
pub struct BasisSolver {
    /// reduced row echelon form of the basis matrix
    rref: Vec<QVec>,
    /// transform with rref = transform · basis
    transform: Vec<QVec>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl BasisSolver {
    pub fn new(rows: &[QVec]) -> Option<BasisSolver> {
        let k = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rref: Vec<QVec> = rows.to_vec();
        let mut transform: Vec<QVec> = (0..k)
            .map(|r| {
                let mut t = qvec_zero(k);
                t[r] = BigRational::one();
                t
            })
            .collect();
        let mut pivots = Vec::with_capacity(k);
        let mut row = 0;
        for col in 0..ncols {
            if row == k {
                break;
            }
            let Some(p) = (row..k).find(|&r| !rref[r][col].is_zero()) else {
                continue;
            };
            rref.swap(row, p);
            transform.swap(row, p);
            let inv = rref[row][col].clone().recip();
            for c in &mut rref[row] {
                *c *= &inv;
            }
            for c in &mut transform[row] {
                *c *= &inv;
            }
            for r in 0..k {
                if r != row && !rref[r][col].is_zero() {
                    let factor = rref[r][col].clone();
                    for j in 0..ncols {
                        let d = &factor * &rref[row][j];
                        rref[r][j] -= d;
                    }
                    for j in 0..k {
                        let d = &factor * &transform[row][j];
                        transform[r][j] -= d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if row < k {
            return None; // dependent rows
        }
        Some(BasisSolver {
            rref,
            transform,
            pivots,
            ncols,
        })
    }

    /// Coordinates of y in the basis, or None if y is outside the row span.
    pub fn solve(&self, y: &QVec) -> Option<QVec> {
        assert_eq!(y.len(), self.ncols);
        let k = self.pivots.len();
        // coefficients in the rref basis are read off at the pivot columns
        let coeffs: Vec<BigRational> = self.pivots.iter().map(|&c| y[c].clone()).collect();
        for j in 0..self.ncols {
            let mut acc = BigRational::zero();
            for r in 0..k {
                if !coeffs[r].is_zero() {
                    acc += &coeffs[r] * &self.rref[r][j];
                }
            }
            if &acc != &y[j] {
                return None;
            }
        }
        let mut x = qvec_zero(k);
        for r in 0..k {
            if coeffs[r].is_zero() {
                continue;
            }
            for j in 0..k {
                let d = &coeffs[r] * &self.transform[r][j];
                x[j] += d;
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(v: &[i64]) -> QVec {
        v.iter().map(|&c| BigRational::from_i64(c).unwrap()).collect()
    }

    #[test]
    fn solve_in_span() {
        let rows = vec![q(&[1, 2, 0]), q(&[0, 1, 1])];
        let s = BasisSolver::new(&rows).unwrap();
        assert_eq!(s.solve(&q(&[2, 5, 1])), Some(q(&[2, 1])));
        assert_eq!(s.solve(&q(&[0, 0, 1])), None);
        assert_eq!(s.solve(&q(&[0, 0, 0])), Some(q(&[0, 0])));
    }

    #[test]
    fn dependent_rows_rejected() {
        let rows = vec![q(&[1, 2]), q(&[2, 4])];
        assert!(BasisSolver::new(&rows).is_none());
    }
}
