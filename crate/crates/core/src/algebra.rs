//! Graded algebras `T(E)/(R)` given by a presentation: component
//! dimensions, standard-word sections, projections, multiplication
//! matrices and the Koszul dual presentation.

use std::sync::{Arc, OnceLock};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactlin::{with_strategy, ComputedBy, Field, FieldStrategy, Rationals, SparseMatrix, SparseVec, Subspace};
use crate::tensor::{checked_pow, pow, FromRational, RelatorSpace, TensorVector};

/// Largest ambient `g^n` the algebra will build a component for.
pub const DEFAULT_MAX_AMBIENT: usize = 1 << 18;

/// A presentation of an N-homogeneous algebra `A(E, R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: RelatorSpace<Rationals>,
    label: String,
    dropped: Vec<usize>,
}

impl Presentation {
    /// Builds a presentation from relator tensors. Dependent relators are
    /// dropped (their input positions are kept in [`Self::dropped_relators`]).
    pub fn new(
        generator_names: Vec<String>,
        degree: usize,
        relators: &[TensorVector],
        label: impl Into<String>,
    ) -> Result<Self> {
        if generator_names.is_empty() {
            return Err(Error::InvalidPresentation("empty generator list".into()));
        }
        let g = generator_names.len();
        let (relators, dropped) = RelatorSpace::from_tensors(g, degree, relators)?;
        if !dropped.is_empty() {
            log::warn!("dropped linearly dependent relators at positions {dropped:?}");
        }
        Ok(Presentation {
            generator_names,
            relators,
            label: label.into(),
            dropped,
        })
    }

    pub fn from_relator_space(
        generator_names: Vec<String>,
        relators: RelatorSpace<Rationals>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if generator_names.len() != relators.generators() {
            return Err(Error::InvalidPresentation(format!(
                "{} generator names for {} generators",
                generator_names.len(),
                relators.generators()
            )));
        }
        Ok(Presentation {
            generator_names,
            relators,
            label: label.into(),
            dropped: Vec::new(),
        })
    }

    pub fn generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// Homogeneity degree `N`.
    pub fn degree(&self) -> usize {
        self.relators.degree()
    }

    pub fn relators(&self) -> &RelatorSpace<Rationals> {
        &self.relators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dropped_relators(&self) -> &[usize] {
        &self.dropped
    }

    /// Relator basis vectors as tensors.
    pub fn relator_tensors(&self) -> Vec<TensorVector> {
        self.relators
            .space()
            .basis()
            .iter()
            .map(|b| TensorVector {
                degree: self.degree(),
                generators: self.generators(),
                coeffs: b.clone(),
            })
            .collect()
    }

    /// `A^! = A(E^*, R^⊥)`: same generator count and degree, relators the
    /// annihilator of `R` under the word-basis pairing.
    pub fn dual(&self) -> Presentation {
        let ann = self.relators.space().annihilator();
        let relators = RelatorSpace::new(self.generators(), self.degree(), ann).expect("same shape");
        let names = self
            .generator_names
            .iter()
            .enumerate()
            .map(|(i, n)| match n.strip_prefix("theta") {
                Some(rest) => format!("d{rest}"),
                None => format!("theta{i}"),
            })
            .collect();
        Presentation {
            generator_names: names,
            relators,
            label: format!("{}!", self.label),
            dropped: Vec::new(),
        }
    }
}

/// Which side a generator multiplies from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

const NOT_STANDARD: u32 = u32::MAX;

/// Degree-`n` component `A_n = E^{⊗n} / I_n` with the standard-word section.
///
/// Standard words are the non-pivot columns of the canonical basis of
/// `I_n` in lexicographic word order; every other word is rewritten
/// through its pivot row.
#[derive(Debug)]
pub struct GradedComponent<K: Field> {
    degree: usize,
    generators: usize,
    ideal: Subspace<K>,
    standard_words: Vec<usize>,
    position: Vec<u32>,
}

impl<K: Field> GradedComponent<K> {
    fn new(degree: usize, generators: usize, ideal: Subspace<K>) -> Self {
        let ambient = ideal.ambient();
        let mut position = vec![NOT_STANDARD; ambient];
        let mut standard_words = Vec::with_capacity(ambient - ideal.dim());
        let mut pivots = ideal.pivots().iter().peekable();
        for w in 0..ambient {
            if pivots.peek() == Some(&&w) {
                pivots.next();
                continue;
            }
            position[w] = standard_words.len() as u32;
            standard_words.push(w);
        }
        GradedComponent {
            degree,
            generators,
            ideal,
            standard_words,
            position,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.standard_words.len()
    }

    pub fn ideal_slice(&self) -> &Subspace<K> {
        &self.ideal
    }

    pub fn standard_words(&self) -> &[usize] {
        &self.standard_words
    }

    /// Position of a word in the section, if it is standard.
    pub fn standard_position(&self, word: usize) -> Option<usize> {
        match self.position[word] {
            NOT_STANDARD => None,
            p => Some(p as usize),
        }
    }

    /// Coordinates of the class of a single word.
    pub fn project_word(&self, word: usize, coeff: &K::Elem, out: &mut Vec<(usize, K::Elem)>) {
        let f = self.ideal.field();
        if let Some(p) = self.standard_position(word) {
            out.push((p, coeff.clone()));
            return;
        }
        let k = self
            .ideal
            .pivots()
            .binary_search(&word)
            .expect("non-standard word is a pivot");
        // w + sum c_j s_j lies in the ideal, so w = -sum c_j s_j in A_n
        for (j, c) in &self.ideal.basis()[k].entries()[1..] {
            out.push((self.position[*j] as usize, f.neg(&f.mul(coeff, c))));
        }
    }

    /// Quotient coordinates of a tensor in `E^{⊗n}`.
    pub fn project(&self, v: &SparseVec<K::Elem>) -> SparseVec<K::Elem> {
        let mut out = Vec::new();
        for (w, c) in v.entries() {
            self.project_word(*w, c, &mut out);
        }
        SparseVec::from_pairs(self.ideal.field(), out)
    }

    /// The projection `E^{⊗n} → A_n` as a `g^n × dim` matrix (row = word).
    pub fn projection_matrix(&self) -> SparseMatrix<K::Elem> {
        let f = self.ideal.field();
        let mut triplets = Vec::new();
        let mut buf = Vec::new();
        for w in 0..self.ideal.ambient() {
            buf.clear();
            self.project_word(w, &f.one(), &mut buf);
            triplets.extend(buf.drain(..).map(|(c, x)| (w, c, x)));
        }
        SparseMatrix::from_triplets(f, self.ideal.ambient(), self.dim(), triplets).expect("in range")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }
}

/// A homogeneous algebra element with coefficients in `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<K: Field> {
    pub degree: usize,
    pub coeffs: SparseVec<K::Elem>,
}

impl<K: Field> Element<K> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// `A(E, R)` over the field `K`, with a per-degree component cache.
///
/// Components are built at most once per degree; concurrent readers of
/// the same degree wait for the first builder.
pub struct Algebra<K: FromRational> {
    presentation: Arc<Presentation>,
    relators: RelatorSpace<K>,
    max_degree: usize,
    components: Vec<OnceLock<Arc<GradedComponent<K>>>>,
}

impl<K: FromRational> Algebra<K> {
    pub fn new(presentation: Arc<Presentation>, field: K) -> Result<Self> {
        Self::with_limit(presentation, field, DEFAULT_MAX_AMBIENT)
    }

    pub fn with_limit(presentation: Arc<Presentation>, field: K, max_ambient: usize) -> Result<Self> {
        let relators = presentation.relators().to_field(&field)?;
        let g = presentation.generators();
        let mut max_degree = 0;
        while checked_pow(g, max_degree + 1).is_some_and(|a| a <= max_ambient) && (g > 1 || max_degree < 4096) {
            max_degree += 1;
        }
        let components = (0..=max_degree).map(|_| OnceLock::new()).collect();
        Ok(Algebra {
            presentation,
            relators,
            max_degree,
            components,
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn field(&self) -> &K {
        self.relators.field()
    }

    pub fn relators(&self) -> &RelatorSpace<K> {
        &self.relators
    }

    pub fn generators(&self) -> usize {
        self.presentation.generators()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn guard(&self, n: usize) -> Result<()> {
        if n > self.max_degree {
            let g = self.generators() as u128;
            return Err(Error::CutoffExceeded {
                degree: n,
                ambient: g.saturating_pow(n as u32),
                limit: (g.saturating_pow(self.max_degree as u32)),
            });
        }
        Ok(())
    }

    /// Cached component `A_n`.
    pub fn component(&self, n: usize) -> Result<Arc<GradedComponent<K>>> {
        self.guard(n)?;
        let c = self.components[n].get_or_init(|| {
            let ideal = match n.checked_sub(1).map(|m| self.component(m)) {
                Some(Ok(prev)) if n > self.relators.degree() => self.relators.ideal_slice_extending(&prev.ideal, n),
                _ => self.relators.ideal_slice(n),
            };
            Arc::new(GradedComponent::new(n, self.generators(), ideal))
        });
        Ok(Arc::clone(c))
    }

    /// `dim A_n = g^n - dim I_n`.
    pub fn graded_dim(&self, n: usize) -> Result<usize> {
        Ok(self.component(n)?.dim())
    }

    pub fn graded_dims(&self, cutoff: usize) -> Result<Vec<usize>> {
        (0..=cutoff).map(|n| self.graded_dim(n)).collect()
    }

    /// Matrix of multiplication by `element` from `A_n` to `A_{n+d}`, with
    /// rows indexed by the standard words of `A_n`.
    pub fn mult_by_element(&self, side: Side, element: &Element<K>, n: usize) -> Result<SparseMatrix<K::Elem>> {
        let src = self.component(n)?;
        let dst = self.component(n + element.degree)?;
        let f = self.field();
        let g = self.generators();
        let left_shift = pow(g, n);
        let right_shift = pow(g, element.degree);
        let mut triplets = Vec::new();
        let mut buf = Vec::new();
        for (row, &w) in src.standard_words().iter().enumerate() {
            buf.clear();
            for (u, c) in element.coeffs.entries() {
                let word = match side {
                    Side::Left => u * left_shift + w,
                    Side::Right => w * right_shift + u,
                };
                dst.project_word(word, c, &mut buf);
            }
            let v = SparseVec::from_pairs(f, std::mem::take(&mut buf));
            triplets.extend(v.into_entries().into_iter().map(|(c, x)| (row, c, x)));
        }
        SparseMatrix::from_triplets(f, src.dim(), dst.dim(), triplets)
    }

    /// Multiplication by the generator `letter` on the given side.
    pub fn mult_matrix(&self, side: Side, letter: usize, n: usize) -> Result<SparseMatrix<K::Elem>> {
        if letter >= self.generators() {
            return Err(Error::LetterOutOfRange {
                letter,
                generators: self.generators(),
            });
        }
        let e = Element {
            degree: 1,
            coeffs: SparseVec::unit(self.field(), letter),
        };
        self.mult_by_element(side, &e, n)
    }

    /// Whether a tensor lies in the ideal slice of its degree.
    pub fn ideal_membership(&self, v: &TensorVector) -> Result<bool> {
        let comp = self.component(v.degree)?;
        let w = self.field().convert_vec(&v.coeffs)?;
        comp.ideal_slice().contains(&w)
    }

    /// Class of a rational tensor in `A_n` coordinates.
    pub fn class_of(&self, v: &TensorVector) -> Result<SparseVec<K::Elem>> {
        let comp = self.component(v.degree)?;
        let w = self.field().convert_vec(&v.coeffs)?;
        Ok(comp.project(&w))
    }

    pub fn element(&self, v: &TensorVector) -> Result<Element<K>> {
        Ok(Element {
            degree: v.degree,
            coeffs: self.field().convert_vec(&v.coeffs)?,
        })
    }
}

/// `sub ⊆ (quot)` tested in degree `N_sub`: every relator of `sub` lies in
/// the ideal slice of `quot` in that degree.
pub fn quotient_check(sub: &RelatorSpace<Rationals>, quot: &RelatorSpace<Rationals>) -> Result<bool> {
    if sub.generators() != quot.generators() {
        return Err(Error::InvalidPresentation(format!(
            "generator counts differ: {} vs {}",
            sub.generators(),
            quot.generators()
        )));
    }
    if sub.degree() < quot.degree() {
        return Err(Error::InvalidPresentation(format!(
            "relation degree {} is below the quotient's {}",
            sub.degree(),
            quot.degree()
        )));
    }
    let slice = quot.ideal_slice(sub.degree());
    sub.space().is_subspace_of(&slice)
}

/// Graded dimensions `dim A_n`, `n = 0..=cutoff`, computed over `field`.
pub fn graded_dims<K: FromRational>(p: &Presentation, field: K, cutoff: usize) -> Result<Vec<usize>> {
    let alg = Algebra::new(Arc::new(p.clone()), field)?;
    alg.graded_dims(cutoff)
}

/// Field strategy, prime seed and resource guard for certified computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComputeOptions {
    pub strategy: FieldStrategy,
    pub seed: u64,
    pub max_ambient: usize,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            strategy: FieldStrategy::Modular,
            seed: 0,
            max_ambient: DEFAULT_MAX_AMBIENT,
        }
    }
}

/// A computation that can run over any coefficient field.
pub trait FieldJob {
    type Output: PartialEq;
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<Self::Output>;
}

/// Runs `job` under the strategy in `opts`, recording which arithmetic
/// produced the answer.
pub fn run_job<J: FieldJob>(p: &Presentation, opts: &ComputeOptions, job: &J) -> Result<(J::Output, ComputedBy)> {
    let p = Arc::new(p.clone());
    with_strategy(
        opts.strategy,
        opts.seed,
        |f| job.run(Arc::new(Algebra::with_limit(Arc::clone(&p), f, opts.max_ambient)?)),
        |q| job.run(Arc::new(Algebra::with_limit(Arc::clone(&p), q, opts.max_ambient)?)),
    )
}

struct DimsJob(usize);

impl FieldJob for DimsJob {
    type Output = Vec<usize>;
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<Vec<usize>> {
        algebra.graded_dims(self.0)
    }
}

/// Graded dimensions under a field strategy.
pub fn graded_dims_with(p: &Presentation, cutoff: usize, opts: &ComputeOptions) -> Result<(Vec<usize>, ComputedBy)> {
    run_job(p, opts, &DimsJob(cutoff))
}

/// Element from rational terms, as used by presets and tests.
pub fn rational_element(v: &TensorVector) -> Element<Rationals> {
    Element {
        degree: v.degree,
        coeffs: v.coeffs.clone(),
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::PrimeField;
    use crate::tensor::Word;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn free(g: usize, degree: usize) -> Presentation {
        Presentation::new((0..g).map(|i| format!("x{i}")).collect(), degree, &[], "free").unwrap()
    }

    fn polynomial2() -> Presentation {
        let r = TensorVector::from_terms(2, &[(Word(vec![0, 1]), q(1)), (Word(vec![1, 0]), q(-1))]).unwrap();
        Presentation::new(vec!["x".into(), "y".into()], 2, &[r], "poly2").unwrap()
    }

    #[test]
    fn degree_zero_component() {
        let alg = Algebra::new(Arc::new(polynomial2()), Rationals).unwrap();
        let c = alg.component(0).unwrap();
        assert_eq!(c.standard_words(), &[0]);
        assert_eq!(c.dim(), 1);
        let m = alg.mult_matrix(Side::Left, 1, 0).unwrap();
        assert_eq!(m.entries(), &[(0, 1, q(1))]);
    }

    #[test]
    fn free_algebra_everything_standard() {
        let alg = Algebra::new(Arc::new(free(3, 2)), PrimeField::new(101).unwrap()).unwrap();
        assert_eq!(alg.graded_dims(4).unwrap(), vec![1, 3, 9, 27, 81]);
        assert_eq!(alg.component(3).unwrap().standard_words().len(), 27);
        // left multiplication by x2 prepends a letter: injective word map
        let m = alg.mult_matrix(Side::Left, 2, 2).unwrap();
        assert_eq!(m.nnz(), 9);
        assert!(m.entries().iter().all(|(r, c, v)| *c == 18 + r && *v == 1));
    }

    #[test]
    fn polynomial_ring_commutes() {
        let alg = Algebra::new(Arc::new(polynomial2()), Rationals).unwrap();
        assert_eq!(alg.graded_dims(5).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        let xy = TensorVector::from_terms(2, &[(Word(vec![0, 1]), q(1))]).unwrap();
        let yx = TensorVector::from_terms(2, &[(Word(vec![1, 0]), q(1))]).unwrap();
        assert_eq!(alg.class_of(&xy).unwrap(), alg.class_of(&yx).unwrap());
        assert!(alg.ideal_membership(&xy.add(&yx.scale(&q(-1)))).unwrap());
        assert!(!alg.ideal_membership(&xy).unwrap());
    }

    #[test]
    fn projection_kills_ideal_and_fixes_standard_words() {
        let alg = Algebra::new(Arc::new(polynomial2()), Rationals).unwrap();
        let c = alg.component(3).unwrap();
        for (pos, &w) in c.standard_words().iter().enumerate() {
            assert_eq!(c.project(&SparseVec::unit(&Rationals, w)).entries(), &[(pos, q(1))]);
        }
        for b in c.ideal_slice().basis() {
            assert!(c.project(b).is_zero());
        }
        assert_eq!(c.projection_matrix().rows(), 8);
    }

    #[test]
    fn cutoff_guard() {
        let alg = Algebra::with_limit(Arc::new(free(4, 2)), Rationals, 256).unwrap();
        assert_eq!(alg.max_degree(), 4);
        assert!(matches!(
            alg.graded_dim(5),
            Err(Error::CutoffExceeded { degree: 5, .. })
        ));
    }

    #[test]
    fn dual_of_free_quadratic() {
        let d = free(3, 2).dual();
        assert_eq!(graded_dims(&d, Rationals, 4).unwrap(), vec![1, 3, 0, 0, 0]);
        assert_eq!(d.dual().relators(), free(3, 2).relators());
    }

    #[test]
    fn empty_generators_rejected() {
        assert!(Presentation::new(vec![], 2, &[], "x").is_err());
    }

    #[test]
    fn quotient_check_reflexive() {
        let p = polynomial2();
        assert!(quotient_check(p.relators(), p.relators()).unwrap());
        let f = free(2, 2);
        assert!(quotient_check(f.relators(), p.relators()).unwrap());
        assert!(!quotient_check(p.relators(), f.relators()).unwrap());
    }
}
