//! Smith normal form over the integers, arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero diagonal entries of the Smith normal form of `matrix`, positive
/// and each dividing the next. Their count is the rank.
pub fn invariant_factors(matrix: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = smallest_nonzero(&a, t) else {
            break;
        };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            if let Some((i, j)) = clear_cross(&mut a, t) {
                // A smaller remainder appeared; make it the pivot and retry.
                a.swap(t, i);
                for row in a.iter_mut() {
                    row.swap(t, j);
                }
                continue;
            }
            match find_non_multiple(&a, t) {
                Some(i) => {
                    let row_i = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(row_i) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
    }
    diagonal
}

pub fn rank(matrix: &[Vec<i64>]) -> usize {
    invariant_factors(matrix).len()
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Reduces row and column `t` by the pivot. Returns the position of a
/// nonzero remainder if one is left.
fn clear_cross(a: &mut [Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let pivot = a[t][t].clone();
    let mut leftover = None;
    for i in t + 1..a.len() {
        if a[i][t].is_zero() {
            continue;
        }
        let q = a[i][t].div_floor(&pivot);
        let row_t = a[t].clone();
        for (x, y) in a[i].iter_mut().zip(row_t) {
            *x -= &q * y;
        }
        if !a[i][t].is_zero() {
            leftover = Some((i, t));
        }
    }
    if leftover.is_some() {
        return leftover;
    }
    let cols = a[t].len();
    for j in t + 1..cols {
        if a[t][j].is_zero() {
            continue;
        }
        let q = a[t][j].div_floor(&pivot);
        for row in a.iter_mut() {
            let delta = &q * &row[t];
            row[j] -= delta;
        }
        if !a[t][j].is_zero() {
            leftover = Some((t, j));
        }
    }
    leftover
}

fn find_non_multiple(a: &[Vec<BigInt>], t: usize) -> Option<usize> {
    let pivot = &a[t][t];
    (t + 1..a.len()).find(|&i| a[i].iter().skip(t + 1).any(|x| !x.is_multiple_of(pivot)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(m: &[Vec<i64>]) -> Vec<i64> {
        invariant_factors(m)
            .into_iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn textbook_examples() {
        assert_eq!(factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(factors(&[vec![7]]), vec![7]);
        assert_eq!(factors(&[]), Vec::<i64>::new());
    }

    #[test]
    fn non_square() {
        assert_eq!(factors(&[vec![4, 6, 8]]), vec![2]);
        assert_eq!(factors(&[vec![4], vec![6], vec![9]]), vec![1]);
        assert_eq!(rank(&[vec![1, 2], vec![2, 4], vec![3, 6]]), 1);
    }
}
