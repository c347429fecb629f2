use crate::error::{Error, Result};

use super::echelon::Echelon;
use super::field::Field;
use super::sparse::SparseVec;

/// A linear subspace of `K^ambient`, stored as its reduced row echelon basis.
///
/// The basis is the unique canonical representative of the row space, so
/// two subspaces over the same field are equal iff their bases are equal.
#[derive(Clone, Debug)]
pub struct Subspace<K: Field> {
    field: K,
    ambient: usize,
    pivots: Vec<usize>,
    basis: Vec<SparseVec<K::Elem>>,
}

impl<K: Field> PartialEq for Subspace<K> {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec()
            && self.ambient == other.ambient
            && self.pivots == other.pivots
            && self.basis == other.basis
    }
}

impl<K: Field> Subspace<K> {
    pub fn zero(field: K, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            pivots: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn full(field: K, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| SparseVec::unit(&field, i)).collect();
        Subspace {
            field,
            ambient,
            pivots: (0..ambient).collect(),
            basis,
        }
    }

    /// Span of arbitrary vectors, canonicalized.
    pub fn span(field: K, ambient: usize, vectors: Vec<SparseVec<K::Elem>>) -> Result<Self> {
        if let Some(bad) = vectors.iter().filter_map(|v| v.max_index()).find(|&i| i >= ambient) {
            return Err(Error::IndexOutOfRange {
                row: 0,
                col: bad,
                rows: vectors.len(),
                cols: ambient,
            });
        }
        Ok(Self::from_echelon(Echelon::from_rows(field, ambient, vectors)))
    }

    pub fn from_echelon(ech: Echelon<K>) -> Self {
        let field = ech.field().clone();
        let ambient = ech.cols();
        let (pivots, basis) = ech.into_rref();
        Subspace {
            field,
            ambient,
            pivots,
            basis,
        }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[SparseVec<K::Elem>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(self.field.clone(), self.ambient, rows)
    }

    /// Intersection via the Zassenhaus construction: eliminate `[u | u]`
    /// stacked on `[v | 0]` and keep the rows whose left half vanished.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.ambient;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field.clone(), n));
        }
        let mut ech = Echelon::new(self.field.clone(), 2 * n);
        for b in &self.basis {
            let mut entries = b.entries().to_vec();
            entries.extend(b.entries().iter().map(|(i, x)| (i + n, x.clone())));
            ech.insert(SparseVec::from_sorted_unchecked(entries));
        }
        for b in &other.basis {
            ech.insert(b.clone());
        }
        let rows: Vec<SparseVec<K::Elem>> = ech
            .rows()
            .iter()
            .filter(|r| r.leading().unwrap() >= n)
            .map(|r| r.map_indices_monotone(|i| i - n))
            .collect();
        Self::span(self.field.clone(), n, rows)
    }

    /// Annihilator in the dual coordinates of the standard pairing.
    pub fn annihilator(&self) -> Self {
        let f = &self.field;
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        // column j of the basis, restricted to non-pivot j
        let mut columns: Vec<Vec<(usize, K::Elem)>> = vec![Vec::new(); self.ambient];
        for (p, row) in self.pivots.iter().zip(&self.basis) {
            for (j, x) in &row.entries()[1..] {
                columns[*j].push((*p, f.neg(x)));
            }
        }
        let mut basis = Vec::with_capacity(self.ambient - self.dim());
        let mut pivots = Vec::with_capacity(self.ambient - self.dim());
        // Each e_j - sum_i B[i][j] e_{p_i} kills the basis; these are already
        // reduced but their leading entry may be a pivot p_i < j.
        for j in 0..self.ambient {
            if is_pivot[j] {
                continue;
            }
            let mut entries = std::mem::take(&mut columns[j]);
            entries.push((j, f.one()));
            entries.sort_by_key(|(i, _)| *i);
            basis.push(SparseVec::from_sorted_unchecked(entries));
            pivots.push(j);
        }
        if basis.iter().zip(&pivots).all(|(b, p)| b.leading() == Some(*p)) {
            return Subspace {
                field: f.clone(),
                ambient: self.ambient,
                pivots,
                basis,
            };
        }
        Self::from_echelon(Echelon::from_rows(f.clone(), self.ambient, basis))
    }

    pub fn contains(&self, w: &SparseVec<K::Elem>) -> Result<bool> {
        if let Some(i) = w.max_index().filter(|&i| i >= self.ambient) {
            return Err(Error::IndexOutOfRange {
                row: 0,
                col: i,
                rows: 1,
                cols: self.ambient,
            });
        }
        Ok(self.reduce(w).is_zero())
    }

    /// Normal form of `w` modulo the subspace: the unique representative
    /// supported on non-pivot coordinates.
    pub fn reduce(&self, w: &SparseVec<K::Elem>) -> SparseVec<K::Elem> {
        let f = &self.field;
        // RREF rows vanish on every other pivot column, so one pass suffices.
        let mut pairs: Vec<(usize, K::Elem)> = Vec::with_capacity(w.nnz());
        let mut touched = false;
        for (i, x) in w.entries() {
            match self.pivots.binary_search(i) {
                Ok(k) => {
                    touched = true;
                    let row = &self.basis[k];
                    pairs.extend(row.entries()[1..].iter().map(|(j, y)| (*j, f.neg(&f.mul(x, y)))));
                }
                Err(_) => pairs.push((*i, x.clone())),
            }
        }
        if !touched {
            return w.clone();
        }
        SparseVec::from_pairs(f, pairs)
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        for b in &self.basis {
            if !other.reduce(b).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Converts a rational subspace to another field, re-canonicalizing.
    pub fn convert<K2: Field>(&self, target: &K2, map: impl Fn(&K::Elem) -> Result<K2::Elem>) -> Result<Subspace<K2>> {
        let mut rows = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let mut entries = Vec::with_capacity(b.nnz());
            for (i, x) in b.entries() {
                let y = map(x)?;
                if !target.is_zero(&y) {
                    entries.push((*i, y));
                }
            }
            rows.push(SparseVec::from_sorted_unchecked(entries));
        }
        Subspace::span(target.clone(), self.ambient, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::{PrimeField, Rationals};

    fn vq(pairs: &[(usize, i64)]) -> SparseVec<num_rational::BigRational> {
        let f = Rationals;
        SparseVec::from_pairs(&f, pairs.iter().map(|&(i, x)| (i, f.from_i64(x))).collect())
    }

    #[test]
    fn sum_with_zero_is_identity() {
        let u = Subspace::span(Rationals, 3, vec![vq(&[(0, 1), (2, 5)])]).unwrap();
        let z = Subspace::zero(Rationals, 3);
        assert_eq!(u.sum(&z).unwrap(), u);
    }

    #[test]
    fn coordinate_lines_sum_to_plane() {
        let a = Subspace::span(Rationals, 2, vec![vq(&[(0, 1)])]).unwrap();
        let b = Subspace::span(Rationals, 2, vec![vq(&[(1, 1)])]).unwrap();
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(Rationals, 2));
    }

    #[test]
    fn self_intersection() {
        let u = Subspace::span(Rationals, 4, vec![vq(&[(0, 1), (1, 1)]), vq(&[(2, 1), (3, -1)])]).unwrap();
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn planes_in_three_space_meet_in_a_line() {
        let u = Subspace::span(Rationals, 3, vec![vq(&[(0, 1)]), vq(&[(1, 1)])]).unwrap();
        let v = Subspace::span(Rationals, 3, vec![vq(&[(0, 1), (2, 1)]), vq(&[(1, 1), (2, 3)])]).unwrap();
        let w = u.intersect(&v).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(
            w.basis()[0],
            vq(&[(0, 3), (1, -1)]).scale(&Rationals, &Rationals.from_rational(&"1/3".parse().unwrap()).unwrap())
        );
    }

    #[test]
    fn annihilator_edge_cases() {
        let f = PrimeField::new(101).unwrap();
        assert!(Subspace::full(f, 5).annihilator().is_zero());
        assert_eq!(Subspace::zero(f, 5).annihilator(), Subspace::full(f, 5));
    }

    #[test]
    fn annihilator_of_antidiagonal() {
        let u = Subspace::span(Rationals, 2, vec![vq(&[(0, 1), (1, -1)])]).unwrap();
        let a = u.annihilator();
        assert_eq!(a.basis(), &[vq(&[(0, 1), (1, 1)])]);
        assert_eq!(a.annihilator(), u);
    }

    #[test]
    fn containment() {
        let u = Subspace::span(Rationals, 2, vec![vq(&[(0, 1)])]).unwrap();
        assert!(u.contains(&SparseVec::zero()).unwrap());
        assert!(!u.contains(&vq(&[(1, 1)])).unwrap());
        assert!(u.contains(&vq(&[(2, 1)])).is_err());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::zero(Rationals, 2);
        let b = Subspace::zero(Rationals, 3);
        assert!(matches!(a.sum(&b), Err(Error::AmbientMismatch { .. })));
        assert!(a.intersect(&b).is_err());
    }
}
