use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// One sparse equation `sum coeffs[v] * x_v = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEquation {
    pub coeffs: BTreeMap<usize, BigRational>,
    pub rhs: BigRational,
}

impl LinearEquation {
    pub fn new(coeffs: BTreeMap<usize, BigRational>, rhs: BigRational) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { coeffs, rhs }
    }

    /// Evaluates the left-hand side minus the right-hand side.
    pub fn residual(&self, x: &[BigRational]) -> BigRational {
        let mut acc = -self.rhs.clone();
        for (v, c) in &self.coeffs {
            acc += c * &x[*v];
        }
        acc
    }
}

/// Outcome of [`solve_linear_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// One solution; free variables are set to zero.
    Solved(Vec<BigRational>),
    /// A combination of the input equations whose left-hand side cancels
    /// while the right-hand side does not.
    Inconsistent {
        combination: BTreeMap<usize, BigRational>,
        rhs: BigRational,
    },
}

impl LinearSolution {
    pub fn solution(&self) -> Option<&[BigRational]> {
        match self {
            LinearSolution::Solved(x) => Some(x),
            LinearSolution::Inconsistent { .. } => None,
        }
    }
}

struct Row {
    coeffs: BTreeMap<usize, BigRational>,
    rhs: BigRational,
    combination: BTreeMap<usize, BigRational>,
}

fn axpy(target: &mut BTreeMap<usize, BigRational>, factor: &BigRational, source: &BTreeMap<usize, BigRational>) {
    for (k, v) in source {
        let entry = target.entry(*k).or_insert_with(BigRational::zero);
        *entry += factor * v;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

/// Exact Gaussian elimination over the rationals.
///
/// Each pivot row is keyed by its smallest variable, so reducing a new row
/// in increasing variable order never reintroduces an eliminated pivot.
pub fn solve_linear_system(num_vars: usize, equations: &[LinearEquation]) -> LinearSolution {
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for (idx, eq) in equations.iter().enumerate() {
        let mut row = Row {
            coeffs: eq.coeffs.clone(),
            rhs: eq.rhs.clone(),
            combination: BTreeMap::from([(idx, BigRational::one())]),
        };
        let mut cursor = 0usize;
        loop {
            let next = row.coeffs.range(cursor..).find(|(v, _)| pivots.contains_key(v));
            let Some((&v, c)) = next else { break };
            let factor = -c.clone();
            let pivot = &pivots[&v];
            axpy(&mut row.coeffs, &factor, &pivot.coeffs);
            row.rhs += &factor * &pivot.rhs;
            axpy(&mut row.combination, &factor, &pivot.combination);
            cursor = v + 1;
        }
        match row.coeffs.iter().next() {
            None => {
                if !row.rhs.is_zero() {
                    return LinearSolution::Inconsistent {
                        combination: row.combination,
                        rhs: row.rhs,
                    };
                }
            }
            Some((&v, c)) => {
                let inv = c.recip();
                for value in row.coeffs.values_mut() {
                    *value *= &inv;
                }
                row.rhs *= &inv;
                for value in row.combination.values_mut() {
                    *value *= &inv;
                }
                pivots.insert(v, row);
            }
        }
    }
    let mut x = vec![BigRational::zero(); num_vars];
    for (&v, row) in pivots.iter().rev() {
        let mut value = row.rhs.clone();
        for (w, c) in row.coeffs.range(v + 1..) {
            value -= c * &x[*w];
        }
        x[v] = value;
    }
    LinearSolution::Solved(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::scalar::rational;

    fn eq(coeffs: &[(usize, i64)], rhs: i64) -> LinearEquation {
        LinearEquation::new(
            coeffs.iter().map(|&(v, c)| (v, rational(c, 1))).collect(),
            rational(rhs, 1),
        )
    }

    #[test]
    fn empty_system() {
        assert_eq!(solve_linear_system(0, &[]), LinearSolution::Solved(vec![]));
    }

    #[test]
    fn two_by_two() {
        let sys = [eq(&[(0, 1), (1, 1)], 1), eq(&[(0, 1), (1, -1)], 1)];
        let x = solve_linear_system(2, &sys);
        assert_eq!(x, LinearSolution::Solved(vec![rational(1, 1), rational(0, 1)]));
    }

    #[test]
    fn inconsistent_witness_is_certified() {
        let sys = [eq(&[(0, 1)], 1), eq(&[(0, 1)], 2)];
        match solve_linear_system(1, &sys) {
            LinearSolution::Inconsistent { combination, rhs } => {
                let mut lhs: BTreeMap<usize, BigRational> = BTreeMap::new();
                let mut total = BigRational::zero();
                for (i, c) in &combination {
                    axpy(&mut lhs, c, &sys[*i].coeffs);
                    total += c * &sys[*i].rhs;
                }
                assert!(lhs.is_empty());
                assert_eq!(total, rhs);
                assert!(!rhs.is_zero());
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn free_variables_are_zero() {
        let sys = [eq(&[(0, 1), (2, 1)], 3)];
        let x = solve_linear_system(3, &sys);
        assert_eq!(
            x,
            LinearSolution::Solved(vec![rational(3, 1), rational(0, 1), rational(0, 1)])
        );
    }

    #[test]
    fn redundant_rows_are_accepted() {
        let sys = [
            eq(&[(0, 2), (1, 4)], 6),
            eq(&[(0, 1), (1, 2)], 3),
            eq(&[(1, 1)], 1),
        ];
        let x = solve_linear_system(2, &sys);
        let sol = x.solution().unwrap();
        for e in &sys {
            assert!(e.residual(sol).is_zero());
        }
    }
}
