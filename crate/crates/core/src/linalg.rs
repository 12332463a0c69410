//! Exact rank of sparse integer systems.
//!
//! Rows are reduced one at a time against an echelon basis using
//! fraction-free updates `r <- b[c]·r - r[c]·b`, after which the content
//! (gcd of the entries) is divided out. All arithmetic is on `BigInt`, so no
//! rounding or overflow can change the rank.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse row: `(column, coefficient)` pairs, strictly increasing columns,
/// no zero coefficients.
pub type SparseRow = Vec<(usize, BigInt)>;

#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        EchelonBasis {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `row` against the basis. Returns `true` when it was linearly
    /// independent and has been added.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = normalize(row);
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            debug_assert!(lead < self.ncols);
            match self.rows.get(&lead) {
                Some(basis) => row = normalize(eliminate(&row, basis)),
                None => {
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    pub fn insert_small(&mut self, row: &[(usize, i64)]) -> bool {
        let mut sorted: Vec<(usize, i64)> = row.to_vec();
        sorted.sort_by_key(|&(c, _)| c);
        let mut merged: SparseRow = Vec::with_capacity(sorted.len());
        for (c, v) in sorted {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, BigInt::from(v))),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.insert(merged)
    }
}

/// `pivot(basis)·row - lead(row)·basis`; both rows share the leading column.
fn eliminate(row: &SparseRow, basis: &SparseRow) -> SparseRow {
    let f = &basis[0].1;
    let g = &row[0].1;
    let mut out = Vec::with_capacity(row.len() + basis.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < basis.len() {
        let take_row = j >= basis.len() || (i < row.len() && row[i].0 < basis[j].0);
        let take_basis = i >= row.len() || (j < basis.len() && basis[j].0 < row[i].0);
        let (col, v) = if take_row {
            let r = (row[i].0, f * &row[i].1);
            i += 1;
            r
        } else if take_basis {
            let r = (basis[j].0, -(g * &basis[j].1));
            j += 1;
            r
        } else {
            let r = (row[i].0, f * &row[i].1 - g * &basis[j].1);
            i += 1;
            j += 1;
            r
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// Divides out the content and makes the leading coefficient positive.
fn normalize(mut row: SparseRow) -> SparseRow {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// Rank of a system of small-integer sparse rows.
pub fn rank_of<'a, I>(rows: I, ncols: usize) -> usize
where
    I: IntoIterator<Item = &'a [(usize, i64)]>,
{
    let mut basis = EchelonBasis::new(ncols);
    for row in rows {
        if basis.is_full() {
            break;
        }
        basis.insert_small(row);
    }
    basis.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows: Vec<Vec<(usize, i64)>> = vec![
            vec![(0, 1), (1, 1)],
            vec![(1, 1), (2, 1)],
            vec![(0, 1), (2, -1)],
            vec![(0, 2), (1, 2)],
        ];
        assert_eq!(rank_of(rows.iter().map(Vec::as_slice), 3), 2);
    }

    #[test]
    fn rank_of_identity() {
        let rows: Vec<Vec<(usize, i64)>> = (0..5).map(|i| vec![(i, 3)]).collect();
        assert_eq!(rank_of(rows.iter().map(Vec::as_slice), 5), 5);
    }

    #[test]
    fn insert_merges_duplicate_columns() {
        let mut b = EchelonBasis::new(2);
        assert!(!b.insert_small(&[(0, 1), (0, -1)]));
        assert!(b.insert_small(&[(1, 2), (0, 1), (1, -2), (1, 4)]));
        assert_eq!(b.pivots().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn rows_are_primitive_after_elimination() {
        let mut b = EchelonBasis::new(3);
        b.insert_small(&[(0, 2), (1, 4), (2, 6)]);
        b.insert_small(&[(0, 3), (1, 5), (2, 7)]);
        for row in b.rows.values() {
            let g = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
            assert!(g.is_one());
            assert!(row[0].1.is_positive());
        }
        assert_eq!(b.rank(), 2);
    }
}
