use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::tournament::RegularBipartiteTournament;

/// Exhaustive enumeration is limited to `k <= 3` (297 200 labeled instances).
pub const EXHAUSTIVE_MAX_K: usize = 3;

/// Rows as bitmasks over the `2k` columns; row `i`, bit `j` is `s_i -> t_j`.
pub(crate) type Rows = Vec<u16>;

/// Every `2k x 2k` 0/1 matrix with all row and column sums `k`, rows in
/// ascending mask order.
pub(crate) fn labeled_rows(k: usize) -> Vec<Rows> {
    let n = 2 * k;
    let row_masks: Vec<u16> = (0u16..1 << n).filter(|m| m.count_ones() as usize == k).collect();
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(n);
    let mut cols = vec![0usize; n];
    fill(k, n, &row_masks, &mut rows, &mut cols, &mut out);
    out
}

fn fill(k: usize, n: usize, masks: &[u16], rows: &mut Rows, cols: &mut [usize], out: &mut Vec<Rows>) {
    let left = n - rows.len();
    if left == 0 {
        out.push(rows.clone());
        return;
    }
    for &m in masks {
        // after this row, every column still needs at most `left - 1` ones
        let ok = (0..n).all(|j| {
            let c = cols[j] + (m >> j & 1) as usize;
            c <= k && c + left > k
        });
        if !ok {
            continue;
        }
        for (j, c) in cols.iter_mut().enumerate() {
            *c += (m >> j & 1) as usize;
        }
        rows.push(m);
        fill(k, n, masks, rows, cols, out);
        rows.pop();
        for (j, c) in cols.iter_mut().enumerate() {
            *c -= (m >> j & 1) as usize;
        }
    }
}

pub(crate) fn to_instance(k: usize, rows: &Rows) -> RegularBipartiteTournament {
    let n = 2 * k;
    let m: Vec<Vec<bool>> = rows.iter().map(|&r| (0..n).map(|j| r >> j & 1 == 1).collect()).collect();
    RegularBipartiteTournament::from_matrix(k, &m).expect("margins are k")
}

/// Number of labeled instances, by a cell-by-cell recursion independent of
/// [`enumerate_instances`].
pub fn count_labeled(k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    if k > EXHAUSTIVE_MAX_K + 1 {
        return Err(Error::TooLarge(4 * k));
    }
    let n = 2 * k;
    fn go(cell: usize, n: usize, k: usize, row: &mut [usize], col: &mut [usize]) -> u64 {
        if cell == n * n {
            return 1;
        }
        let (i, j) = (cell / n, cell % n);
        let mut total = 0;
        for bit in [0usize, 1] {
            row[i] += bit;
            col[j] += bit;
            let row_ok = row[i] <= k && (j + 1 < n || row[i] == k) && row[i] + (n - 1 - j) >= k;
            let col_ok = col[j] <= k && (i + 1 < n || col[j] == k) && col[j] + (n - 1 - i) >= k;
            if row_ok && col_ok {
                total += go(cell + 1, n, k, row, col);
            }
            row[i] -= bit;
            col[j] -= bit;
        }
        total
    }
    Ok(go(0, n, k, &mut vec![0; n], &mut vec![0; n]))
}

/// Smallest sorted row list over all column permutations, for the matrix and
/// for the side-swapped one (complement transposed).
fn canonical(k: usize, rows: &Rows) -> Rows {
    let n = 2 * k;
    let swapped: Rows = (0..n)
        .map(|j| (0..n).fold(0u16, |m, i| if rows[i] >> j & 1 == 0 { m | 1 << i } else { m }))
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Rows> = None;
    loop {
        for mat in [rows, &swapped] {
            let mut r: Rows = mat
                .iter()
                .map(|&row| (0..n).fold(0u16, |m, j| if row >> j & 1 == 1 { m | 1 << perm[j] } else { m }))
                .collect();
            r.sort_unstable();
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.expect("at least one permutation")
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub(crate) fn instance_rows(k: usize, up_to_iso: bool) -> Result<Vec<Rows>> {
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    if k > EXHAUSTIVE_MAX_K {
        return Err(Error::TooLarge(4 * k));
    }
    let all = labeled_rows(k);
    if !up_to_iso {
        return Ok(all);
    }
    // sorting rows stays inside the class, so sorted matrices meet every class
    let mut seen = HashSet::new();
    Ok(all
        .into_iter()
        .filter(|r| r.is_sorted() && seen.insert(canonical(k, r)))
        .collect())
}

/// All labeled `k`-regular bipartite tournaments (`k <= 3`), or one per
/// isomorphism class when `up_to_iso`.
pub fn enumerate_instances(k: usize, up_to_iso: bool) -> Result<impl Iterator<Item = RegularBipartiteTournament>> {
    Ok(instance_rows(k, up_to_iso)?.into_iter().map(move |r| to_instance(k, &r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::{is_f_isomorphic, FMode};

    #[test]
    fn k1_is_one_class_of_two_labelings() {
        assert_eq!(enumerate_instances(1, false).unwrap().count(), 2);
        assert_eq!(count_labeled(1).unwrap(), 2);
        assert_eq!(enumerate_instances(1, true).unwrap().count(), 1);
    }

    #[test]
    fn k2_counts_agree() {
        assert_eq!(count_labeled(2).unwrap(), 90);
        assert_eq!(enumerate_instances(2, false).unwrap().count(), 90);
    }

    #[test]
    fn k2_classes() {
        let reps: Vec<_> = enumerate_instances(2, true).unwrap().collect();
        assert_eq!(reps.iter().filter(|d| is_f_isomorphic(d.digraph(), d.digraph().vertices(), FMode::F)).count(), 1);
        assert!(reps.len() >= 2);
    }

    #[test]
    fn rejects_large_k() {
        assert!(enumerate_instances(4, false).is_err());
    }
}
