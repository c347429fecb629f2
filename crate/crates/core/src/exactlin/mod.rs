//! Exact sparse linear algebra over the rationals and prime fields.
//!
//! Everything above this module talks about subspaces of coordinate
//! spaces; ranks come from a sparse incremental echelon form. Modular
//! ranks are cross-checked against a second prime and, on disagreement,
//! against fraction-free integer elimination.

mod echelon;
mod field;
pub mod primes;
mod sparse;
mod subspace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use echelon::{Echelon, Workspace};
pub use field::{format_rational, parse_rational, Field, FieldSpec, PrimeField, Rationals};
pub use sparse::{SparseMatrix, SparseVec};
pub use subspace::Subspace;

use crate::error::{Error, Result};

pub type QMatrix = SparseMatrix<BigRational>;
pub type QVec = SparseVec<BigRational>;

/// Row rank of a rational matrix over the requested field.
///
/// In modular mode this is the rank of the reduction mod p, which never
/// exceeds the rational rank; a denominator divisible by p is reported as
/// [`Error::DegeneratePrime`].
pub fn rank(m: &QMatrix, spec: FieldSpec) -> Result<usize> {
    match spec {
        FieldSpec::ExactRational => Ok(bareiss_rank(m)),
        FieldSpec::PrimeModular { prime } => {
            let f = PrimeField::new(prime)?;
            let rows = reduce_rows(&f, m)?;
            Ok(Echelon::from_rows(f, m.cols(), rows).rank())
        }
    }
}

/// Canonical basis of the right null space `{x : m x = 0}`.
pub fn kernel_basis<K: Field>(field: &K, m: &SparseMatrix<K::Elem>) -> Subspace<K> {
    let rows = m.row_vectors();
    Subspace::from_echelon(Echelon::from_rows(field.clone(), m.cols(), rows)).annihilator()
}

/// Null space of a rational matrix computed in the given field.
pub fn kernel_basis_in(m: &QMatrix, spec: FieldSpec) -> Result<KernelBasis> {
    match spec {
        FieldSpec::ExactRational => Ok(KernelBasis::Rational(kernel_basis(&Rationals, m))),
        FieldSpec::PrimeModular { prime } => {
            let f = PrimeField::new(prime)?;
            let rows = reduce_rows(&f, m)?;
            let mm = SparseMatrix::from_rows(m.cols(), &rows)?;
            Ok(KernelBasis::Modular(kernel_basis(&f, &mm)))
        }
    }
}

#[derive(Clone, Debug)]
pub enum KernelBasis {
    Rational(Subspace<Rationals>),
    Modular(Subspace<PrimeField>),
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        match self {
            KernelBasis::Rational(s) => s.dim(),
            KernelBasis::Modular(s) => s.dim(),
        }
    }
}

fn reduce_rows(f: &PrimeField, m: &QMatrix) -> Result<Vec<SparseVec<u64>>> {
    m.row_vectors()
        .iter()
        .map(|row| {
            let mut entries = Vec::with_capacity(row.nnz());
            for (i, q) in row.entries() {
                let x = f.from_rational(q)?;
                if x != 0 {
                    entries.push((*i, x));
                }
            }
            Ok(SparseVec::from_pairs(f, entries))
        })
        .collect()
}

/// Fraction-free Bareiss elimination on the integer matrix obtained by
/// clearing each row's denominators. Every division is exact.
pub fn bareiss_rank(m: &QMatrix) -> usize {
    let cols = m.cols();
    let mut a: Vec<Vec<BigInt>> = m
        .row_vectors()
        .into_iter()
        .filter(|r| !r.is_zero())
        .map(|r| {
            let lcm = r.entries().iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
            let mut dense = vec![BigInt::zero(); cols];
            for (i, q) in r.entries() {
                dense[*i] = q.numer() * (&lcm / q.denom());
            }
            dense
        })
        .collect();
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // smallest row index with a nonzero entry in this column
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// How certificate-grade ranks are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldStrategy {
    /// One seeded random prime.
    Modular,
    /// Exact rational arithmetic throughout.
    Exact,
    /// Two seeded random primes; disagreement escalates to exact arithmetic.
    Verify,
}

/// Which arithmetic produced a reported number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComputedBy {
    SinglePrime,
    TwoPrimesAgree,
    ExactEscalated,
    Exact,
}

/// Evaluates `job` according to the strategy: over seeded primes, then over
/// the rationals when primes disagree (or a prime degenerates).
pub fn with_strategy<T, FM, FQ>(
    strategy: FieldStrategy,
    seed: u64,
    mut modular: FM,
    exact: FQ,
) -> Result<(T, ComputedBy)>
where
    T: PartialEq,
    FM: FnMut(PrimeField) -> Result<T>,
    FQ: FnOnce(Rationals) -> Result<T>,
{
    match strategy {
        FieldStrategy::Exact => Ok((exact(Rationals)?, ComputedBy::Exact)),
        FieldStrategy::Modular => {
            for p in primes::random_primes(seed, 4) {
                match modular(PrimeField::new(p)?) {
                    Err(Error::DegeneratePrime { .. }) => continue,
                    other => return other.map(|v| (v, ComputedBy::SinglePrime)),
                }
            }
            Ok((exact(Rationals)?, ComputedBy::ExactEscalated))
        }
        FieldStrategy::Verify => {
            let primes = primes::random_primes(seed, 2);
            let a = modular(PrimeField::new(primes[0])?);
            let b = modular(PrimeField::new(primes[1])?);
            match (a, b) {
                (Ok(a), Ok(b)) if a == b => Ok((a, ComputedBy::TwoPrimesAgree)),
                (Err(e), _) | (_, Err(e)) if !matches!(e, Error::DegeneratePrime { .. }) => Err(e),
                _ => Ok((exact(Rationals)?, ComputedBy::ExactEscalated)),
            }
        }
    }
}

/// Rank of a rational matrix under a strategy, recording the path taken.
pub fn certified_rank(m: &QMatrix, strategy: FieldStrategy, seed: u64) -> Result<(usize, ComputedBy)> {
    with_strategy(strategy, seed, |f| rank(m, f.spec()), |_| Ok(bareiss_rank(m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn identity_and_zero_ranks() {
        let id = SparseMatrix::identity(&Rationals, 4);
        assert_eq!(rank(&id, FieldSpec::ExactRational).unwrap(), 4);
        let p = primes::random_primes(1, 1)[0];
        assert_eq!(rank(&id, FieldSpec::PrimeModular { prime: p }).unwrap(), 4);
        let z: QMatrix = SparseMatrix::zeros(3, 5);
        assert_eq!(rank(&z, FieldSpec::ExactRational).unwrap(), 0);
        assert_eq!(rank(&z, FieldSpec::PrimeModular { prime: p }).unwrap(), 0);
    }

    #[test]
    fn modular_rank_drops_when_prime_divides_a_minor() {
        // det = 7
        let m = SparseMatrix::from_triplets(
            &Rationals,
            2,
            2,
            vec![(0, 0, q(3)), (0, 1, q(1)), (1, 0, q(1)), (1, 1, q(5))],
        )
        .unwrap();
        assert_eq!(rank(&m, FieldSpec::ExactRational).unwrap(), 2);
        assert_eq!(rank(&m, FieldSpec::PrimeModular { prime: 7 }).unwrap(), 1);
    }

    #[test]
    fn denominators_divisible_by_prime_are_signalled() {
        let m =
            SparseMatrix::from_triplets(&Rationals, 1, 1, vec![(0, 0, BigRational::new(1.into(), 5.into()))]).unwrap();
        assert!(matches!(
            rank(&m, FieldSpec::PrimeModular { prime: 5 }),
            Err(Error::DegeneratePrime { prime: 5 })
        ));
    }

    #[test]
    fn kernel_of_difference_row() {
        let m = SparseMatrix::from_triplets(&Rationals, 1, 2, vec![(0, 0, q(1)), (0, 1, q(-1))]).unwrap();
        let k = kernel_basis(&Rationals, &m);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis()[0].entries(), &[(0, q(1)), (1, q(1))]);
        let id = SparseMatrix::identity(&Rationals, 3);
        assert!(kernel_basis(&Rationals, &id).is_zero());
    }

    #[test]
    fn strategies_agree_on_small_matrix() {
        let m = SparseMatrix::from_triplets(
            &Rationals,
            3,
            3,
            vec![(0, 0, q(2)), (0, 1, q(4)), (1, 0, q(1)), (1, 1, q(2)), (2, 2, q(9))],
        )
        .unwrap();
        for s in [FieldStrategy::Modular, FieldStrategy::Exact, FieldStrategy::Verify] {
            assert_eq!(certified_rank(&m, s, 3).unwrap().0, 2);
        }
        assert_eq!(
            certified_rank(&m, FieldStrategy::Verify, 3).unwrap().1,
            ComputedBy::TwoPrimesAgree
        );
    }

    #[test]
    fn verify_escalates_when_primes_disagree() {
        let mut calls = 0;
        let (v, how) = with_strategy(
            FieldStrategy::Verify,
            0,
            |f| {
                calls += 1;
                Ok(f.prime() % 2 + calls)
            },
            |_| Ok(99u64),
        )
        .unwrap();
        assert_eq!((v, how), (99, ComputedBy::ExactEscalated));
    }
}
