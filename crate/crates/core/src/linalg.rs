//! Exact linear algebra over ℚ.

use num_traits::Zero;

use crate::Rat;

/// Rank of a matrix given as rows, by Gaussian elimination.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.iter().map(Vec::len).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r].get(col).is_some_and(|c| !c.is_zero()))
        else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in 0..m.len() {
            if r == rank {
                continue;
            }
            let factor = m[r].get(col).cloned().unwrap_or_else(Rat::zero) / &lead;
            if factor.is_zero() {
                continue;
            }
            let pivot_row = m[rank].clone();
            m[r].resize(cols, Rat::zero());
            for (c, p) in pivot_row.iter().enumerate() {
                m[r][c] -= &factor * p;
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of `{v : M v = 0}` for `M` with `n` columns.
pub fn nullity(rows: &[Vec<Rat>], n: usize) -> usize {
    n - rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]])), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
        assert_eq!(nullity(&m(&[&[1, 0, 0], &[0, 0, 1]]), 3), 1);
    }
}
