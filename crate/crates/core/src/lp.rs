//! Exact feasibility LP: find `x ≥ 0` with `A x = b`.
//!
//! Redundant rows are removed by exact Gauss-Jordan elimination, then a
//! phase-I simplex with one artificial per row minimizes the total
//! artificial mass. Pivots follow Bland's rule, so degenerate vertices
//! cannot cycle.

use crate::rational::Rational;

/// Outcome of [`solve`], with pivot statistics for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible { x: Vec<Rational>, pivots: usize },
    Infeasible,
}

/// Row-reduces `[A | b]` in place and returns the independent rows, or
/// `None` when some row reduces to `0 = c` with `c ≠ 0`.
fn independent_rows(mut rows: Vec<Vec<Rational>>, cols: usize) -> Option<Vec<Vec<Rational>>> {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = Rational::one() / &rows[rank][col];
        for v in rows[rank].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&factor * p);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if rows[rank..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    rows.truncate(rank);
    Some(rows)
}

/// Solves `A x = b, x ≥ 0` for an `m × n` matrix given row-major.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == n), "ragged matrix");

    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| row.iter().cloned().chain(std::iter::once(rhs.clone())).collect())
        .collect();
    let Some(mut rows) = independent_rows(augmented, n) else {
        return Feasibility::Infeasible;
    };
    if n == 0 {
        return if rows.is_empty() {
            Feasibility::Feasible { x: Vec::new(), pivots: 0 }
        } else {
            Feasibility::Infeasible
        };
    }
    for row in rows.iter_mut() {
        if row[n].is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
    }

    let m = rows.len();
    let width = n + m;
    // Tableau columns: n originals, m artificials, then the rhs.
    let mut tab: Vec<Vec<Rational>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let mut t = Vec::with_capacity(width + 1);
            t.extend_from_slice(&row[..n]);
            t.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            t.push(row[n].clone());
            t
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs of the phase-I objective Σ artificials.
    let mut cost: Vec<Rational> = (0..=width)
        .map(|j| {
            if (n..width).contains(&j) {
                Rational::zero()
            } else {
                -tab.iter().map(|r| &r[j]).sum::<Rational>()
            }
        })
        .collect();

    let mut pivots = 0;
    // Bland: lowest-index improving column. Artificials never re-enter.
    while let Some(enter) = (0..n).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let (pr, _) = leave.expect("phase-I objective is bounded below");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
        pivots += 1;
    }

    // Objective value is -cost[width].
    if !cost[width].is_zero() {
        return Feasibility::Infeasible;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tab[r][width].clone();
        }
    }
    Feasibility::Feasible { x, pivots }
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = Rational::one() / &tab[pr][pc];
    for v in tab[pr].iter_mut() {
        if !v.is_zero() {
            *v = &*v * &inv;
        }
    }
    let pivot_row = tab[pr].clone();
    let eliminate = |row: &mut [Rational]| {
        let factor = row[pc].clone();
        if factor.is_zero() {
            return;
        }
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &(&factor * p);
            }
        }
    };
    for (r, row) in tab.iter_mut().enumerate() {
        if r != pr {
            eliminate(row);
        }
    }
    eliminate(cost);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&k| Rational::from_integer(k)).collect()
    }

    fn check(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, rhs) in a.iter().zip(b) {
            let lhs: Rational = row.iter().zip(x).map(|(c, v)| c * v).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn simple_feasible_system() {
        let a = vec![r(&[1, 1, 1]), r(&[1, -1, 0])];
        let b = vec![q(1, 1), q(1, 3)];
        match solve(&a, &b) {
            Feasibility::Feasible { x, .. } => check(&a, &b, &x),
            Feasibility::Infeasible => panic!("expected feasible"),
        }
    }

    #[test]
    fn sign_constraint_makes_it_infeasible() {
        // x1 + x2 = 1, x1 - x2 = 3 forces x2 = -1
        let a = vec![r(&[1, 1]), r(&[1, -1])];
        assert_eq!(solve(&a, &r(&[1, 3])), Feasibility::Infeasible);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![r(&[1, 1, 0]), r(&[2, 2, 0]), r(&[0, 1, 1]), r(&[1, 2, 1])];
        let b = r(&[1, 2, 1, 2]);
        match solve(&a, &b) {
            Feasibility::Feasible { x, .. } => check(&a, &b, &x),
            Feasibility::Infeasible => panic!("expected feasible"),
        }
        // inconsistent redundancy
        let b = r(&[1, 3, 1, 2]);
        assert_eq!(solve(&a, &b), Feasibility::Infeasible);
    }

    #[test]
    fn degenerate_rhs_terminates() {
        // Highly degenerate: b = 0 except the normalization.
        let a = vec![r(&[1, 1, 1, 1]), r(&[1, -1, 1, -1]), r(&[1, 1, -1, -1]), r(&[1, -1, -1, 1])];
        let b = r(&[1, 0, 0, 0]);
        match solve(&a, &b) {
            Feasibility::Feasible { x, .. } => {
                check(&a, &b, &x);
                assert_eq!(x, vec![q(1, 4); 4]);
            }
            Feasibility::Infeasible => panic!("expected feasible"),
        }
    }
}
