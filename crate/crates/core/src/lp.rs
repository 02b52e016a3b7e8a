//! Exact linear feasibility over the rationals.
//!
//! A dense phase-one simplex with Bland's pivoting rule. Problems here have at
//! most a few dozen columns, so the dense tableau over `BigRational` is fine
//! and removes every tolerance question.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{to_big, Q};

/// Finds `x ≥ 0` with `A x = b`, or `None` when the system is infeasible.
pub fn nonnegative_solution(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r = vec![BigRational::zero(); width];
        for (j, x) in row.iter().enumerate() {
            r[j] = if flip { -x.clone() } else { x.clone() };
        }
        r[n + i] = BigRational::one();
        r[rhs] = if flip { -bi.clone() } else { bi.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a pivot.
        let (row, _) = leave.expect("phase-one simplex is bounded");
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for x in t[row].iter_mut() {
        *x = &*x / &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, pr) in r.iter_mut().zip(&pivot_row) {
            if !pr.is_zero() {
                *x -= &f * pr;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (x, pr) in cost.iter_mut().zip(&pivot_row) {
            if !pr.is_zero() {
                *x -= &f * pr;
            }
        }
    }
}

/// Finds a free `x` with `A x ≥ b` componentwise.
pub fn solve_inequalities(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<BigRational>> {
    let n = a.first().map_or(0, Vec::len);
    let m = a.len();
    // x = u - v, A u - A v - s = b with u, v, s ≥ 0.
    let rows: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(to_big).collect();
            r.extend(row.iter().map(|x| -to_big(x)));
            r.extend((0..m).map(|k| if k == i { -BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let rhs: Vec<BigRational> = b.iter().map(to_big).collect();
    let sol = nonnegative_solution(&rows, &rhs)?;
    Some((0..n).map(|j| &sol[j] - &sol[n + j]).collect())
}

/// Finds `c ≥ 0` with `Σ c_i g_i = target`.
pub fn conic_combination(generators: &[Vec<Q>], target: &[Q]) -> Option<Vec<BigRational>> {
    let dim = target.len();
    let rows: Vec<Vec<BigRational>> = (0..dim).map(|k| generators.iter().map(|g| to_big(&g[k])).collect()).collect();
    let rhs: Vec<BigRational> = target.iter().map(to_big).collect();
    nonnegative_solution(&rows, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn infeasible_system() {
        // x + y = -1 with x, y ≥ 0.
        let a = vec![vec![q(1), q(1)]];
        assert!(conic_combination(&[vec![q(1)], vec![q(1)]], &[q(-1)]).is_none());
        assert!(solve_inequalities(&[vec![q(1)], vec![q(-1)]], &[q(1), q(0)]).is_none());
        let _ = a;
    }

    #[test]
    fn strict_chamber_witness() {
        // x ≥ 1, y - x ≥ 1
        let sol = solve_inequalities(&[vec![q(1), q(0)], vec![q(-1), q(1)]], &[q(1), q(1)]).unwrap();
        assert!(sol[0] >= BigRational::one());
        assert!(&sol[1] - &sol[0] >= BigRational::one());
    }

    #[test]
    fn conic_membership() {
        let gens = vec![vec![q(1), q(0)], vec![q(1), q(1)]];
        assert!(conic_combination(&gens, &[q(3), q(1)]).is_some());
        assert!(conic_combination(&gens, &[q(0), q(1)]).is_none());
    }

    #[test]
    fn degenerate_pivots_terminate() {
        // Many redundant constraints through the origin.
        let a: Vec<Vec<Q>> = (1..8).map(|k| vec![q(k), q(-1)]).chain([vec![q(0), q(1)]]).collect();
        let b = vec![q(0); 8];
        assert!(solve_inequalities(&a, &b).is_some());
    }
}
