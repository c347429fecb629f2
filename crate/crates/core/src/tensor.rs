//! Word bases of tensor powers and the two graded families built from a
//! relator space: ideal slices `I_n` (sum of all paddings of `R`) and dual
//! Koszul slices `J_n` (intersection of all paddings).

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, Field, PrimeField, QVec, Rationals, SparseVec, Subspace};

/// A monomial in the generators, letters in `0..g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Inverse of [`word_index`].
    pub fn from_index(mut index: usize, generators: usize, degree: usize) -> Word {
        let mut letters = vec![0; degree];
        for slot in letters.iter_mut().rev() {
            *slot = index % generators;
            index /= generators;
        }
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Big-endian positional index of a word among all words of its length.
pub fn word_index(w: &Word, generators: usize) -> Result<usize> {
    let mut idx = 0usize;
    for &letter in &w.0 {
        if letter >= generators {
            return Err(Error::LetterOutOfRange { letter, generators });
        }
        idx = idx * generators + letter;
    }
    Ok(idx)
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    base.checked_pow(exp as u32)
}

/// `g^n`, panicking on overflow; callers bound degrees beforehand.
pub fn pow(base: usize, exp: usize) -> usize {
    checked_pow(base, exp).expect("tensor power overflows usize")
}

/// A homogeneous element of `E^{⊗n}` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    pub degree: usize,
    pub generators: usize,
    pub coeffs: QVec,
}

impl TensorVector {
    pub fn zero(generators: usize, degree: usize) -> Self {
        TensorVector {
            degree,
            generators,
            coeffs: SparseVec::zero(),
        }
    }

    /// Sums `coeff * word` terms; all words must share one length.
    pub fn from_terms(generators: usize, terms: &[(Word, BigRational)]) -> Result<Self> {
        let degree = terms.first().map(|(w, _)| w.len()).unwrap_or(0);
        let mut pairs = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            if w.len() != degree {
                return Err(Error::InvalidPresentation(format!(
                    "inhomogeneous element: word {w} has degree {} but expected {degree}",
                    w.len()
                )));
            }
            pairs.push((word_index(w, generators)?, c.clone()));
        }
        Ok(TensorVector {
            degree,
            generators,
            coeffs: SparseVec::from_pairs(&Rationals, pairs),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Tensor product (concatenation of words).
    pub fn tensor(&self, other: &TensorVector) -> TensorVector {
        assert_eq!(self.generators, other.generators);
        let shift = pow(self.generators, other.degree);
        let mut pairs = Vec::with_capacity(self.coeffs.nnz() * other.coeffs.nnz());
        for (i, x) in self.coeffs.entries() {
            for (j, y) in other.coeffs.entries() {
                pairs.push((i * shift + j, x * y));
            }
        }
        TensorVector {
            degree: self.degree + other.degree,
            generators: self.generators,
            coeffs: SparseVec::from_pairs(&Rationals, pairs),
        }
    }

    pub fn add(&self, other: &TensorVector) -> TensorVector {
        assert_eq!(self.degree, other.degree);
        TensorVector {
            degree: self.degree,
            generators: self.generators,
            coeffs: self.coeffs.axpy(&Rationals, &Rationals.one(), &other.coeffs),
        }
    }

    pub fn scale(&self, c: &BigRational) -> TensorVector {
        TensorVector {
            degree: self.degree,
            generators: self.generators,
            coeffs: self.coeffs.scale(&Rationals, c),
        }
    }

    pub fn generator(generators: usize, letter: usize) -> TensorVector {
        TensorVector {
            degree: 1,
            generators,
            coeffs: SparseVec::unit(&Rationals, letter),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Word, &BigRational)> + '_ {
        self.coeffs
            .entries()
            .iter()
            .map(move |(i, c)| (Word::from_index(*i, self.generators, self.degree), c))
    }
}

/// Maps rational coefficients into a field.
pub trait FromRational: Field {
    fn convert_vec(&self, v: &QVec) -> Result<SparseVec<Self::Elem>> {
        let mut entries = Vec::with_capacity(v.nnz());
        for (i, q) in v.entries() {
            let x = self.from_rational(q)?;
            if !self.is_zero(&x) {
                entries.push((*i, x));
            }
        }
        Ok(SparseVec::from_pairs(self, entries))
    }
}

impl FromRational for Rationals {}
impl FromRational for PrimeField {}

/// The relator space `R ⊂ E^{⊗N}` of an N-homogeneous algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct RelatorSpace<K: Field = Rationals> {
    generators: usize,
    degree: usize,
    space: Subspace<K>,
}

impl<K: Field> RelatorSpace<K> {
    pub fn new(generators: usize, degree: usize, space: Subspace<K>) -> Result<Self> {
        if generators == 0 {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        if degree < 2 {
            return Err(Error::InvalidPresentation(format!(
                "relation degree must be at least 2, got {degree}"
            )));
        }
        let ambient = checked_pow(generators, degree)
            .ok_or_else(|| Error::InvalidPresentation("relator ambient overflows".into()))?;
        if space.ambient() != ambient {
            return Err(Error::AmbientMismatch {
                left: space.ambient(),
                right: ambient,
            });
        }
        Ok(RelatorSpace {
            generators,
            degree,
            space,
        })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Homogeneity degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self) -> &Subspace<K> {
        &self.space
    }

    pub fn field(&self) -> &K {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Relator space over another field.
    pub fn to_field<K2: FromRational>(&self, target: &K2) -> Result<RelatorSpace<K2>>
    where
        K: Field<Elem = BigRational>,
    {
        let rows = self
            .space
            .basis()
            .iter()
            .map(|b| target.convert_vec(b))
            .collect::<Result<Vec<_>>>()?;
        let space = Subspace::span(target.clone(), self.space.ambient(), rows)?;
        if space.dim() != self.space.dim() {
            // a relator basis became dependent mod p
            if let Some(p) = match target.spec() {
                crate::exactlin::FieldSpec::PrimeModular { prime } => Some(prime),
                _ => None,
            } {
                return Err(Error::DegeneratePrime { prime: p });
            }
        }
        RelatorSpace::new(self.generators, self.degree, space)
    }

    /// Spanning rows of `E^{⊗i} ⊗ R ⊗ E^{⊗(n-N-i)}` inside `E^{⊗n}`.
    pub fn shift_rows(&self, i: usize, n: usize) -> Result<Vec<SparseVec<K::Elem>>> {
        let big_n = self.degree;
        if i + big_n > n {
            return Err(Error::DegreeUnderflow {
                shift: i,
                relation_degree: big_n,
                degree: n,
            });
        }
        let g = self.generators;
        let right = n - big_n - i;
        let left_count = pow(g, i);
        let right_count = pow(g, right);
        let mid_stride = right_count;
        let left_stride = pow(g, n - i);
        let mut rows = Vec::with_capacity(left_count * right_count * self.dim());
        for u in 0..left_count {
            for b in self.space.basis() {
                for v in 0..right_count {
                    rows.push(b.map_indices_monotone(|r| u * left_stride + r * mid_stride + v));
                }
            }
        }
        Ok(rows)
    }

    pub fn shift_embed(&self, i: usize, n: usize) -> Result<Subspace<K>> {
        let rows = self.shift_rows(i, n)?;
        Subspace::span(self.field().clone(), pow(self.generators, n), rows)
    }

    /// Echelon form of `I_n`, eliminated in one pass over all shift rows.
    pub fn ideal_echelon(&self, n: usize) -> Echelon<K> {
        let ambient = pow(self.generators, n);
        if n < self.degree {
            return Echelon::new(self.field().clone(), ambient);
        }
        let mut rows = Vec::new();
        for i in 0..=n - self.degree {
            rows.extend(self.shift_rows(i, n).expect("shift in range"));
        }
        Echelon::from_rows(self.field().clone(), ambient, rows)
    }

    /// `I_n = I_{n-1} ⊗ E + E^{⊗(n-N)} ⊗ R` from the canonical basis of
    /// `I_{n-1}`, whose padded rows are already in echelon form.
    pub fn ideal_slice_extending(&self, prev: &Subspace<K>, n: usize) -> Subspace<K> {
        let g = self.generators;
        if n <= self.degree {
            return self.ideal_slice(n);
        }
        assert_eq!(prev.ambient(), pow(g, n - 1), "previous slice has the wrong degree");
        let mut ech = Echelon::new(self.field().clone(), pow(g, n));
        for b in prev.basis() {
            for j in 0..g {
                ech.push_echelon_row(b.map_indices_monotone(|c| c * g + j));
            }
        }
        let mut rows = self.shift_rows(n - self.degree, n).expect("shift in range");
        rows.sort_by_key(|r| (r.nnz(), r.leading()));
        for r in rows {
            ech.insert(r);
        }
        Subspace::from_echelon(ech)
    }

    /// Degree-`n` slice `I_n` of the two-sided ideal generated by `R`.
    pub fn ideal_slice(&self, n: usize) -> Subspace<K> {
        Subspace::from_echelon(self.ideal_echelon(n))
    }

    /// `J_n`: intersection of every padding of `R` in degree `n`, with
    /// `J_n = E^{⊗n}` below the relation degree.
    pub fn dual_koszul_slice(&self, n: usize) -> Subspace<K> {
        let ambient = pow(self.generators, n);
        if n < self.degree {
            return Subspace::full(self.field().clone(), ambient);
        }
        let mut acc = self.shift_embed(0, n).expect("shift in range");
        for i in 1..=n - self.degree {
            if acc.is_zero() {
                break;
            }
            let next = self.shift_embed(i, n).expect("shift in range");
            acc = acc.intersect(&next).expect("same ambient");
        }
        acc
    }
}

impl RelatorSpace<Rationals> {
    /// Canonical relator space spanned by the given tensors, together with the
    /// indices of input relators that were linearly dependent on earlier ones.
    pub fn from_tensors(generators: usize, degree: usize, relators: &[TensorVector]) -> Result<(Self, Vec<usize>)> {
        let ambient = checked_pow(generators, degree)
            .ok_or_else(|| Error::InvalidPresentation("relator ambient overflows".into()))?;
        let mut ech = Echelon::new(Rationals, ambient);
        let mut dropped = Vec::new();
        for (k, r) in relators.iter().enumerate() {
            if r.generators != generators {
                return Err(Error::InvalidPresentation(format!(
                    "relator {k} uses {} generators, expected {generators}",
                    r.generators
                )));
            }
            if !r.is_zero() && r.degree != degree {
                return Err(Error::InvalidPresentation(format!(
                    "relator {k} has degree {}, expected {degree}",
                    r.degree
                )));
            }
            if !ech.insert(r.coeffs.clone()) {
                dropped.push(k);
            }
        }
        let space = Subspace::from_echelon(ech);
        Ok((RelatorSpace::new(generators, degree, space)?, dropped))
    }
}
