use crate::error::{Error, Result};

use super::field::Field;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec<E> {
    entries: Vec<(usize, E)>,
}

impl<E> Default for SparseVec<E> {
    fn default() -> Self {
        SparseVec { entries: Vec::new() }
    }
}

impl<E: Clone> SparseVec<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates and
    /// dropping zeros.
    pub fn from_pairs<K: Field<Elem = E>>(field: &K, mut pairs: Vec<(usize, E)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, E)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w = field.add(w, &v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !field.is_zero(v));
        SparseVec { entries }
    }

    /// Trusts the caller: entries sorted, unique and nonzero.
    pub(crate) fn from_sorted_unchecked(entries: Vec<(usize, E)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVec { entries }
    }

    pub fn unit<K: Field<Elem = E>>(field: &K, index: usize) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    pub fn entries(&self) -> &[(usize, E)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, E)> {
        self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&E> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale<K: Field<Elem = E>>(&self, field: &K, c: &E) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, field.mul(v, c)))
                .filter(|(_, v)| !field.is_zero(v))
                .collect(),
        }
    }

    /// `self + c * other`
    pub fn axpy<K: Field<Elem = E>>(&self, field: &K, c: &E, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.nnz() + other.nnz());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        let v = field.mul(c, y);
                        if !field.is_zero(&v) {
                            out.push((*j, v));
                        }
                        b.next();
                    } else {
                        let v = field.add(x, &field.mul(c, y));
                        if !field.is_zero(&v) {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    let v = field.mul(c, y);
                    if !field.is_zero(&v) {
                        out.push((*j, v));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn dot<K: Field<Elem = E>>(&self, field: &K, other: &Self) -> E {
        let mut acc = field.zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            if i < j {
                a += 1;
            } else if j < i {
                b += 1;
            } else {
                acc = field.add(&acc, &field.mul(x, y));
                a += 1;
                b += 1;
            }
        }
        acc
    }

    /// Reindexes every entry through `f`, which must be strictly monotone.
    pub fn map_indices_monotone(&self, f: impl Fn(usize) -> usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (f(*i), v.clone())).collect(),
        }
    }

    pub fn map_values<K2: Field>(&self, field: &K2, f: impl Fn(&E) -> K2::Elem) -> SparseVec<K2::Elem> {
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, f(v)))
                .filter(|(_, v)| !field.is_zero(v))
                .collect(),
        }
    }
}

/// Sparse matrix in coordinate form, triplets sorted by `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, E)>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Validates indices, sums duplicates and drops zero entries.
    pub fn from_triplets<K: Field<Elem = E>>(
        field: &K,
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, E)>,
    ) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::IndexOutOfRange {
                row: r,
                col: c,
                rows,
                cols,
            });
        }
        triplets.sort_by_key(|(r, c, _)| (*r, *c));
        let mut entries: Vec<(usize, usize, E)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some((r0, c0, w)) if *r0 == r && *c0 == c => *w = field.add(w, &v),
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|(_, _, v)| !field.is_zero(v));
        Ok(SparseMatrix { rows, cols, entries })
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec<E>]) -> Result<Self> {
        let mut entries = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row.max_index().filter(|&c| c >= cols) {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows: rows.len(),
                    cols,
                });
            }
            entries.extend(row.entries().iter().map(|(c, v)| (r, *c, v.clone())));
        }
        Ok(SparseMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn identity<K: Field<Elem = E>>(field: &K, n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, field.one())).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, E)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn row_vectors(&self) -> Vec<SparseVec<E>> {
        let mut out: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out.into_iter().map(SparseVec::from_sorted_unchecked).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<(usize, usize, E)> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Product `self * other`.
    pub fn mul<K: Field<Elem = E>>(&self, field: &K, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let rhs = other.row_vectors();
        let mut triplets = Vec::new();
        for (r, row) in self.row_vectors().into_iter().enumerate() {
            let mut acc: SparseVec<E> = SparseVec::zero();
            for (k, v) in row.entries() {
                acc = acc.axpy(field, v, &rhs[*k]);
            }
            triplets.extend(acc.into_entries().into_iter().map(|(c, v)| (r, c, v)));
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: triplets,
        })
    }

    pub fn map_values<K2: Field>(&self, field: &K2, f: impl Fn(&E) -> K2::Elem) -> SparseMatrix<K2::Elem> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*r, *c, f(v)))
                .filter(|(_, _, v)| !field.is_zero(v))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::PrimeField;

    #[test]
    fn pairs_are_canonicalized() {
        let f = PrimeField::new(7).unwrap();
        let v = SparseVec::from_pairs(&f, vec![(3, 2), (1, 5), (3, 5), (0, 0)]);
        assert_eq!(v.entries(), &[(1, 5)]);
    }

    #[test]
    fn axpy_cancels() {
        let f = PrimeField::new(11).unwrap();
        let a = SparseVec::from_pairs(&f, vec![(0, 1), (2, 3)]);
        let b = SparseVec::from_pairs(&f, vec![(2, 1), (5, 1)]);
        let c = a.axpy(&f, &8, &b);
        assert_eq!(c.entries(), &[(0, 1), (5, 8)]);
    }

    #[test]
    fn triplets_out_of_range_rejected() {
        let f = PrimeField::new(11).unwrap();
        assert!(SparseMatrix::from_triplets(&f, 2, 2, vec![(2, 0, 1)]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let f = PrimeField::new(101).unwrap();
        let a = SparseMatrix::from_triplets(&f, 2, 3, vec![(0, 0, 1), (0, 2, 2), (1, 1, 3)]).unwrap();
        let at = a.transpose();
        let g = a.mul(&f, &at).unwrap();
        assert_eq!(g.entries(), &[(0, 0, 5), (1, 1, 9)]);
    }
}
