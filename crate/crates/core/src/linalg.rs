//! Incremental Gauss–Jordan elimination over a [`Scalar`] field.
//!
//! Rows arrive one at a time and are kept in reduced row echelon form, so
//! the caller can stop generating equations as soon as the rank is full.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("inconsistent system: a row reduced to 0 = nonzero")]
    Inconsistent,
    #[error("row has {got} entries, system has {expected} unknowns")]
    WrongWidth { expected: usize, got: usize },
    #[error("system is rank deficient ({rank} of {unknowns})")]
    RankDeficient { rank: usize, unknowns: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOutcome {
    NewPivot(usize),
    Redundant,
}

#[derive(Debug, Clone)]
struct PivotRow<F> {
    pivot: usize,
    coeffs: Vec<F>,
    rhs: F,
}

/// Reduced row echelon form of `A x = b`, grown row by row.
#[derive(Debug, Clone)]
pub struct EchelonSystem<F> {
    unknowns: usize,
    rows: Vec<PivotRow<F>>,
    pivot_of: Vec<Option<usize>>,
}

impl<F: Scalar> EchelonSystem<F> {
    pub fn new(unknowns: usize) -> Self {
        EchelonSystem { unknowns, rows: Vec::new(), pivot_of: vec![None; unknowns] }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.unknowns
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of[col].is_some()
    }

    pub fn add_row(&mut self, mut coeffs: Vec<F>, mut rhs: F) -> Result<RowOutcome, LinalgError> {
        if coeffs.len() != self.unknowns {
            return Err(LinalgError::WrongWidth { expected: self.unknowns, got: coeffs.len() });
        }
        for row in &self.rows {
            let factor = coeffs[row.pivot].clone();
            if factor.is_negligible() {
                continue;
            }
            for (c, r) in coeffs.iter_mut().zip(&row.coeffs) {
                if !r.is_negligible() {
                    *c = c.clone() - factor.clone() * r.clone();
                }
            }
            rhs = rhs - factor * row.rhs.clone();
            coeffs[row.pivot] = F::zero();
        }
        let pivot = coeffs.iter().enumerate().filter(|(_, c)| !c.is_negligible()).min_by_key(|(_, c)| c.pivot_cost()).map(|(i, _)| i);
        let Some(pivot) = pivot else {
            return if rhs.is_negligible() { Ok(RowOutcome::Redundant) } else { Err(LinalgError::Inconsistent) };
        };
        let inv = F::one() / coeffs[pivot].clone();
        for c in coeffs.iter_mut() {
            if !c.is_negligible() {
                *c = c.clone() * inv.clone();
            } else {
                *c = F::zero();
            }
        }
        coeffs[pivot] = F::one();
        rhs = rhs * inv;
        for row in &mut self.rows {
            let factor = row.coeffs[pivot].clone();
            if factor.is_negligible() {
                continue;
            }
            for (c, r) in row.coeffs.iter_mut().zip(&coeffs) {
                if !r.is_negligible() {
                    *c = c.clone() - factor.clone() * r.clone();
                }
            }
            row.coeffs[pivot] = F::zero();
            row.rhs = row.rhs.clone() - factor * rhs.clone();
        }
        self.pivot_of[pivot] = Some(self.rows.len());
        self.rows.push(PivotRow { pivot, coeffs, rhs });
        Ok(RowOutcome::NewPivot(pivot))
    }

    /// Values of the unknowns that are determined by the rows so far.
    pub fn determined(&self) -> Vec<Option<F>> {
        let mut out = vec![None; self.unknowns];
        for row in &self.rows {
            let free = row.coeffs.iter().enumerate().any(|(j, c)| j != row.pivot && !c.is_negligible());
            if !free {
                out[row.pivot] = Some(row.rhs.clone());
            }
        }
        out
    }

    pub fn solution(&self) -> Result<Vec<F>, LinalgError> {
        if !self.is_full_rank() {
            return Err(LinalgError::RankDeficient { rank: self.rank(), unknowns: self.unknowns });
        }
        Ok(self.determined().into_iter().map(|v| v.expect("full rank")).collect())
    }
}

/// Solves a square or overdetermined system exactly (for exact fields).
pub fn solve<F: Scalar>(matrix: &[Vec<F>], rhs: &[F]) -> Result<Vec<F>, LinalgError> {
    let unknowns = matrix.first().map_or(0, |r| r.len());
    let mut sys = EchelonSystem::new(unknowns);
    for (row, b) in matrix.iter().zip(rhs) {
        sys.add_row(row.clone(), b.clone())?;
    }
    sys.solution()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    #[test]
    fn solves_small_system_exactly() {
        // 2x + y = 3, x - y = 0  → x = y = 1
        let a = mat(&[&[2, 1], &[1, -1]]);
        let x = solve(&a, &[q(3, 1), q(0, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(1, 1)]);
        // fractional solution
        let a = mat(&[&[3, 0], &[0, 7]]);
        assert_eq!(solve(&a, &[q(1, 1), q(2, 1)]).unwrap(), vec![q(1, 3), q(2, 7)]);
    }

    #[test]
    fn detects_redundancy_and_inconsistency() {
        let mut s = EchelonSystem::<Q>::new(2);
        assert_eq!(s.add_row(vec![q(1, 1), q(1, 1)], q(2, 1)).unwrap(), RowOutcome::NewPivot(0));
        assert_eq!(s.add_row(vec![q(2, 1), q(2, 1)], q(4, 1)).unwrap(), RowOutcome::Redundant);
        assert_eq!(s.add_row(vec![q(3, 1), q(3, 1)], q(1, 1)), Err(LinalgError::Inconsistent));
        assert!(!s.is_full_rank());
        assert!(matches!(s.solution(), Err(LinalgError::RankDeficient { rank: 1, unknowns: 2 })));
        assert_eq!(s.add_row(vec![q(1, 1)], q(0, 1)), Err(LinalgError::WrongWidth { expected: 2, got: 1 }));
    }

    #[test]
    fn partially_determined_unknowns() {
        let mut s = EchelonSystem::<Q>::new(3);
        s.add_row(vec![q(0, 1), q(0, 1), q(5, 1)], q(10, 1)).unwrap();
        s.add_row(vec![q(1, 1), q(1, 1), q(0, 1)], q(1, 1)).unwrap();
        let d = s.determined();
        assert_eq!(d[2], Some(q(2, 1)));
        assert!(d[0].is_none() || d[1].is_none());
    }

    #[test]
    fn float_instantiation_agrees() {
        let a = vec![vec![4.0f64, -2.0, 1.0], vec![-2.0, 4.0, -2.0], vec![1.0, -2.0, 4.0]];
        let b = vec![11.0, -16.0, 17.0];
        let x = solve(&a, &b).unwrap();
        let aq: Vec<Vec<Q>> = a.iter().map(|r| r.iter().map(|v| Q::from_float(*v).unwrap()).collect()).collect();
        let bq: Vec<Q> = b.iter().map(|v| Q::from_float(*v).unwrap()).collect();
        let xq = solve(&aq, &bq).unwrap();
        for (f, e) in x.iter().zip(&xq) {
            let e: f64 = num_traits::ToPrimitive::to_f64(e).unwrap();
            assert!((f - e).abs() < 1e-9);
        }
    }

    proptest! {
        /// Build A from a random integer solution; elimination must recover it
        /// and every row must have zero residual.
        #[test]
        fn recovers_planted_solution(
            entries in prop::collection::vec(-6i64..=6, 16),
            sol in prop::collection::vec(-20i64..=20, 4),
            extra in prop::collection::vec(-3i64..=3, 4),
        ) {
            let n = 4;
            let mut a: Vec<Vec<Q>> = entries.chunks(n).map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect();
            // a redundant combination row
            let combo: Vec<Q> = (0..n).map(|j| a.iter().zip(&extra).fold(q(0, 1), |acc, (r, &c)| acc + r[j].clone() * q(c, 1))).collect();
            a.push(combo);
            let x: Vec<Q> = sol.iter().map(|&v| q(v, 1)).collect();
            let b: Vec<Q> = a.iter().map(|r| r.iter().zip(&x).fold(q(0, 1), |acc, (c, v)| acc + c.clone() * v.clone())).collect();
            match solve(&a, &b) {
                Ok(found) => prop_assert_eq!(found, x),
                Err(LinalgError::RankDeficient { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
