//! Packed GF(2) vectors and elimination helpers.

use crate::matrix::BitMatrix;

pub(crate) fn words(n: usize) -> usize {
    n.div_ceil(64)
}

pub(crate) fn get_bit(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

pub(crate) fn flip_bit(v: &mut [u64], i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub(crate) fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&w| w == 0)
}

pub(crate) fn dot(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones())
        .sum::<u32>()
        % 2
        == 1
}

/// Incrementally maintained row-echelon basis.
#[derive(Debug, Clone, Default)]
pub(crate) struct Basis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Basis {
    pub(crate) fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if get_bit(&v, *pivot) {
                xor_into(&mut v, row);
            }
        }
        v
    }

    /// Adds `v` if independent; returns whether it was.
    pub(crate) fn insert(&mut self, v: &[u64]) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = (0..r.len() * 64).find(|&i| get_bit(&r, i)) else {
            return false;
        };
        self.rows.push((pivot, r));
        true
    }
}

/// Basis of `{ y : yᵀ M[:, cols] = 0 }`, each vector packed over the rows.
pub(crate) fn left_null_space(m: &BitMatrix, cols: &[usize]) -> Vec<Vec<u64>> {
    let rows = m.num_rows();
    let mut local = vec![usize::MAX; m.num_cols()];
    for (i, &c) in cols.iter().enumerate() {
        local[c] = i;
    }
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut v = vec![0u64; words(cols.len())];
            for &c in m.row(r) {
                if local[c] != usize::MAX {
                    flip_bit(&mut v, local[c]);
                }
            }
            v
        })
        .collect();
    let mut track: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut v = vec![0u64; words(rows)];
            flip_bit(&mut v, r);
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(pivot) = (rank..rows).find(|&r| get_bit(&a[r], col)) else {
            continue;
        };
        a.swap(rank, pivot);
        track.swap(rank, pivot);
        let (pa, pt) = (a[rank].clone(), track[rank].clone());
        for r in rank + 1..rows {
            if get_bit(&a[r], col) {
                xor_into(&mut a[r], &pa);
                xor_into(&mut track[r], &pt);
            }
        }
        rank += 1;
    }
    track.split_off(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_path_graph() {
        // Two disjoint edges on four rows: each component sums to zero.
        let m = BitMatrix::from_columns(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let null = left_null_space(&m, &[0, 1]);
        assert_eq!(null.len(), 2);
        for y in &null {
            for c in 0..2 {
                let hits = m.col(c).iter().filter(|&&r| get_bit(y, r)).count();
                assert_eq!(hits % 2, 0);
            }
        }
    }

    #[test]
    fn basis_detects_dependency() {
        let mut b = Basis::default();
        assert!(b.insert(&[0b011]));
        assert!(b.insert(&[0b110]));
        assert!(!b.insert(&[0b101]));
        assert!(!b.insert(&[0]));
    }
}
