//! The Koszul N-complex `K(A) = A ⊗ J_•`, its contractions `C_{m,q}`,
//! graded slices as chains of scalar matrices, homology ranks, and the
//! degree-bounded certificates built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{run_job, Algebra, ComputeOptions, Element, FieldJob, Presentation, Side};
use crate::error::{Error, Result};
use crate::exactlin::{ComputedBy, Echelon, Field, FieldStrategy, SparseMatrix, SparseVec, Subspace};
use crate::presets::{
    sd_matrix_n, sd_matrix_n_minus, self_duality, self_duality_relators, yang_mills, ym_matrix_m, ym_raised_relators,
    Metric, Sign, TensorMatrix,
};
use crate::tensor::{pow, FromRational, TensorVector};

/// A free module `A ⊗ J_k` of the template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Position {
    /// Tensor degree `k`, which is also the internal generation degree.
    pub index: usize,
    pub rank: usize,
}

/// Matrix of homogeneous algebra elements; rows index the source basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementMatrix<K: Field> {
    pub degree: usize,
    pub entries: Vec<Vec<Element<K>>>,
}

impl<K: Field> ElementMatrix<K> {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TemplateKind {
    /// The full N-complex with single-step differentials.
    NComplex,
    Contraction {
        m: usize,
        q: usize,
    },
}

/// Positions ascending by generation degree; `maps[i]` goes from
/// `positions[i + 1]` to `positions[i]` and acts on row vectors by right
/// multiplication.
pub struct FreeComplexTemplate<K: FromRational> {
    algebra: Arc<Algebra<K>>,
    kind: TemplateKind,
    positions: Vec<Position>,
    bases: Vec<Subspace<K>>,
    maps: Vec<ElementMatrix<K>>,
    augmented: bool,
    complete: bool,
}

impl<K: FromRational> FreeComplexTemplate<K> {
    pub fn algebra(&self) -> &Arc<Algebra<K>> {
        &self.algebra
    }

    pub fn kind(&self) -> TemplateKind {
        self.kind
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    /// Canonical basis of `J_k` at each position.
    pub fn bases(&self) -> &[Subspace<K>] {
        &self.bases
    }

    pub fn maps(&self) -> &[ElementMatrix<K>] {
        &self.maps
    }

    /// Whether the trivial module `k` is attached at position 0 via ε.
    pub fn augmented(&self) -> bool {
        self.augmented
    }

    /// False when `J_k` was still nonzero at the last position examined,
    /// i.e. the complex may continue past the bound it was built to.
    pub fn complete(&self) -> bool {
        self.complete
    }

    /// Length of the complex when it is known to end.
    pub fn extension(&self) -> Option<usize> {
        self.complete.then(|| self.positions.len().saturating_sub(1))
    }
}

/// Lazily computed dual slices `J_0, J_1, ...`, stopping at the first zero.
struct DualSlices<'a, K: FromRational> {
    algebra: &'a Algebra<K>,
    slices: Vec<Subspace<K>>,
}

impl<'a, K: FromRational> DualSlices<'a, K> {
    fn new(algebra: &'a Algebra<K>) -> Self {
        DualSlices {
            algebra,
            slices: Vec::new(),
        }
    }

    fn get(&mut self, k: usize) -> Result<&Subspace<K>> {
        while self.slices.len() <= k {
            let n = self.slices.len();
            let next = match self.slices.last() {
                Some(prev) if prev.is_zero() => Subspace::zero(self.algebra.field().clone(), 0),
                _ => {
                    if n > self.algebra.max_degree() {
                        let g = self.algebra.generators() as u128;
                        return Err(Error::CutoffExceeded {
                            degree: n,
                            ambient: g.saturating_pow(n as u32),
                            limit: g.saturating_pow(self.algebra.max_degree() as u32),
                        });
                    }
                    self.algebra.relators().dual_koszul_slice(n)
                }
            };
            self.slices.push(next);
        }
        Ok(&self.slices[k])
    }
}

/// `d^m` from `A ⊗ J_k` to `A ⊗ J_{k-m}`: each basis tensor of `J_k` is
/// split as `Σ_u e_u ⊗ c_u` with `|u| = m`, and `c_u` is expanded in the
/// basis of `J_{k-m}`.
fn split_map<K: Field>(
    field: &K,
    g: usize,
    jk: &Subspace<K>,
    k: usize,
    jl: &Subspace<K>,
    m: usize,
) -> Result<ElementMatrix<K>> {
    let tail = pow(g, k - m);
    let mut entries = Vec::with_capacity(jk.dim());
    for b in jk.basis() {
        let mut per_u: BTreeMap<usize, Vec<(usize, K::Elem)>> = BTreeMap::new();
        for (idx, c) in b.entries() {
            per_u.entry(idx / tail).or_default().push((idx % tail, c.clone()));
        }
        let mut row: Vec<Vec<(usize, K::Elem)>> = vec![Vec::new(); jl.dim()];
        for (u, pairs) in per_u {
            let c = SparseVec::from_pairs(field, pairs);
            if !jl.contains(&c)? {
                return Err(Error::NotAComplex(format!(
                    "J_{k} is not contained in E^{m} ⊗ J_{}",
                    k - m
                )));
            }
            for (j, p) in jl.pivots().iter().enumerate() {
                if let Some(x) = c.get(*p) {
                    row[j].push((u, x.clone()));
                }
            }
        }
        entries.push(
            row.into_iter()
                .map(|pairs| Element {
                    degree: m,
                    coeffs: SparseVec::from_pairs(field, pairs),
                })
                .collect(),
        );
    }
    Ok(ElementMatrix { degree: m, entries })
}

/// Tensor degrees of the positions of `C_{m,q}`: `Nr + q` and `Nr + q - m`.
pub fn contraction_indices(degree: usize, m: usize, q: usize, bound: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut r = 0;
    loop {
        let hi = degree * r + q;
        if r > 0 && hi >= m && hi - m <= bound {
            out.push(hi - m);
        }
        if hi > bound {
            break;
        }
        out.push(hi);
        r += 1;
    }
    out
}

/// The contraction `C_{m,q}` of `K(A)`, with positions of generation
/// degree at most `bound`. `C_{N-1,0}` is the Koszul complex.
pub fn koszul_template<K: FromRational>(
    algebra: Arc<Algebra<K>>,
    m: usize,
    q: usize,
    bound: usize,
) -> Result<FreeComplexTemplate<K>> {
    let n = algebra.presentation().degree();
    if q + 2 > n || m < q + 1 || m + 1 > n {
        return Err(Error::InvalidContraction { m, q, degree: n });
    }
    let indices = contraction_indices(n, m, q, bound);
    build_template(algebra, TemplateKind::Contraction { m, q }, &indices, bound)
}

/// The Koszul complex `C_{N-1,0}`.
pub fn koszul_complex<K: FromRational>(algebra: Arc<Algebra<K>>, bound: usize) -> Result<FreeComplexTemplate<K>> {
    let n = algebra.presentation().degree();
    koszul_template(algebra, n - 1, 0, bound)
}

/// The N-complex `K(A)` itself, positions `0..=bound`.
pub fn n_complex<K: FromRational>(algebra: Arc<Algebra<K>>, bound: usize) -> Result<FreeComplexTemplate<K>> {
    let indices: Vec<usize> = (0..=bound).collect();
    build_template(algebra, TemplateKind::NComplex, &indices, bound)
}

fn build_template<K: FromRational>(
    algebra: Arc<Algebra<K>>,
    kind: TemplateKind,
    indices: &[usize],
    bound: usize,
) -> Result<FreeComplexTemplate<K>> {
    let field = algebra.field().clone();
    let g = algebra.generators();
    let mut slices = DualSlices::new(&algebra);
    let mut positions = Vec::new();
    let mut bases: Vec<Subspace<K>> = Vec::new();
    let mut maps = Vec::new();
    let mut complete = false;
    for &k in indices {
        let jk = slices.get(k)?.clone();
        if jk.is_zero() {
            complete = true;
            break;
        }
        if let (Some(prev), Some(jl)) = (positions.last(), bases.last()) {
            let Position { index: l, .. } = *prev;
            maps.push(split_map(&field, g, &jk, k, jl, k - l)?);
        }
        positions.push(Position {
            index: k,
            rank: jk.dim(),
        });
        bases.push(jk);
    }
    if !complete {
        // the next position lies beyond the bound; it ends the complex only if J vanishes there
        let next = match kind {
            TemplateKind::NComplex => bound + 1,
            TemplateKind::Contraction { m, q } => {
                let n = algebra.presentation().degree();
                contraction_indices(n, m, q, bound + n)
                    .into_iter()
                    .find(|&k| k > bound)
                    .expect("a position within one period")
            }
        };
        complete = next <= algebra.max_degree() && slices.get(next).is_ok_and(|j| j.is_zero());
    }
    let augmented = positions.first().is_some_and(|p| p.index == 0);
    drop(slices);
    Ok(FreeComplexTemplate {
        algebra,
        kind,
        positions,
        bases,
        maps,
        augmented,
        complete,
    })
}

/// Degree slice of a template: per-position dimensions and one scalar
/// matrix per differential (rows index the source).
#[derive(Clone, Debug)]
pub struct ComplexSlice<K: Field> {
    /// Total degree for chains, internal degree `t` for the dual cochains.
    pub degree: i64,
    pub dims: Vec<usize>,
    /// Chains: `maps[i]` from position `i+1` to `i`. Cochains: from `i` to `i+1`.
    pub maps: Vec<SparseMatrix<K::Elem>>,
    pub cochain: bool,
}

fn component_dim<K: FromRational>(alg: &Algebra<K>, degree: i64) -> Result<usize> {
    if degree < 0 {
        Ok(0)
    } else {
        alg.graded_dim(degree as usize)
    }
}

/// Scalar matrix of an element matrix acting on `A_a`-coefficients, as
/// right multiplication on row vectors (chains) or left multiplication on
/// column vectors (dual cochains).
fn assemble<K: FromRational>(
    alg: &Algebra<K>,
    em: &ElementMatrix<K>,
    side: Side,
    rows_len: usize,
    cols_len: usize,
    a: i64,
) -> Result<SparseMatrix<K::Elem>> {
    let f = alg.field();
    let (src_rank, tgt_rank) = match side {
        Side::Right => (rows_len, cols_len),
        Side::Left => (cols_len, rows_len),
    };
    let tgt_dim = component_dim(alg, a + em.degree as i64)?;
    if a < 0 {
        return Ok(SparseMatrix::zeros(0, tgt_rank * tgt_dim));
    }
    let src_dim = alg.graded_dim(a as usize)?;
    let mut triplets = Vec::new();
    for (i, row) in em.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let block = alg.mult_by_element(side, e, a as usize)?;
            let (bi, bj) = match side {
                Side::Right => (i, j),
                Side::Left => (j, i),
            };
            triplets.extend(
                block
                    .entries()
                    .iter()
                    .map(|(r, c, x)| (bi * src_dim + r, bj * tgt_dim + c, x.clone())),
            );
        }
    }
    SparseMatrix::from_triplets(f, src_rank * src_dim, tgt_rank * tgt_dim, triplets)
}

/// Total-degree-`n` slice of a chain template.
pub fn slice<K: FromRational>(t: &FreeComplexTemplate<K>, n: usize) -> Result<ComplexSlice<K>> {
    let alg = &t.algebra;
    let n = n as i64;
    let dims = t
        .positions
        .iter()
        .map(|p| Ok(p.rank * component_dim(alg, n - p.index as i64)?))
        .collect::<Result<Vec<_>>>()?;
    let maps = t
        .maps
        .iter()
        .enumerate()
        .map(|(i, em)| {
            let src = &t.positions[i + 1];
            assemble(
                alg,
                em,
                Side::Right,
                src.rank,
                t.positions[i].rank,
                n - src.index as i64,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let s = ComplexSlice {
        degree: n,
        dims,
        maps,
        cochain: false,
    };
    let steps = match t.kind {
        TemplateKind::Contraction { .. } => 2,
        TemplateKind::NComplex => alg.presentation().degree(),
    };
    if let Some(i) = first_nonzero_power(alg.field(), &s, steps)? {
        return Err(Error::NotAComplex(format!(
            "composite of {steps} maps from position {} is nonzero in degree {n}",
            i + steps
        )));
    }
    Ok(s)
}

/// Slice at internal degree `t` of the dual cochain complex
/// `Hom_A(C, A)`: position `k` becomes `A_{t + k}^{r}` and each element
/// matrix acts transposed, by left multiplication.
pub fn dual_slice<K: FromRational>(t: &FreeComplexTemplate<K>, internal: i64) -> Result<ComplexSlice<K>> {
    let alg = &t.algebra;
    let dims = t
        .positions
        .iter()
        .map(|p| Ok(p.rank * component_dim(alg, internal + p.index as i64)?))
        .collect::<Result<Vec<_>>>()?;
    let maps = t
        .maps
        .iter()
        .enumerate()
        .map(|(i, em)| {
            let src = &t.positions[i];
            assemble(
                alg,
                em,
                Side::Left,
                t.positions[i + 1].rank,
                src.rank,
                internal + src.index as i64,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let s = ComplexSlice {
        degree: internal,
        dims,
        maps,
        cochain: true,
    };
    if let Some(i) = first_nonzero_power(alg.field(), &s, 2)? {
        return Err(Error::NotAComplex(format!(
            "dual maps at position {i} do not compose to zero in degree {internal}"
        )));
    }
    Ok(s)
}

/// Composite of `maps[lo..hi]` in the direction of the differential.
pub fn composite<K: Field>(field: &K, s: &ComplexSlice<K>, lo: usize, hi: usize) -> Result<SparseMatrix<K::Elem>> {
    let mut order: Vec<&SparseMatrix<K::Elem>> = s.maps[lo..hi].iter().collect();
    if !s.cochain {
        order.reverse();
    }
    let mut acc = order[0].clone();
    for m in &order[1..] {
        acc = acc.mul(field, m)?;
    }
    Ok(acc)
}

/// Index of the first run of `steps` consecutive maps whose composite is
/// nonzero.
fn first_nonzero_power<K: Field>(field: &K, s: &ComplexSlice<K>, steps: usize) -> Result<Option<usize>> {
    if s.maps.len() < steps {
        return Ok(None);
    }
    for lo in 0..=s.maps.len() - steps {
        let m = composite(field, s, lo, lo + steps)?;
        if !m.is_zero() {
            return Ok(Some(lo));
        }
    }
    Ok(None)
}

/// Rank via an echelon form on whichever side has fewer vectors.
pub fn matrix_rank<K: Field>(field: &K, m: &SparseMatrix<K::Elem>) -> usize {
    if m.is_zero() {
        return 0;
    }
    if m.rows() > m.cols() {
        let t = m.transpose();
        Echelon::from_rows(field.clone(), t.cols(), t.row_vectors()).rank()
    } else {
        Echelon::from_rows(field.clone(), m.cols(), m.row_vectors()).rank()
    }
}

/// One cell of a homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    /// Total degree (chains) or internal degree (dual cochains).
    pub degree: i64,
    /// Index in the complex, 0 at the bottom.
    pub position: usize,
    pub dim: usize,
    pub kernel: usize,
    pub image: usize,
    pub homology: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub entries: Vec<HomologyEntry>,
}

impl HomologyReport {
    pub fn get(&self, degree: i64, position: usize) -> Option<&HomologyEntry> {
        self.entries
            .iter()
            .find(|e| e.degree == degree && e.position == position)
    }

    /// `Σ (-1)^k dim` and `Σ (-1)^k homology` for one degree.
    pub fn euler_characteristics(&self, degree: i64) -> (i64, i64) {
        self.entries
            .iter()
            .filter(|e| e.degree == degree)
            .fold((0, 0), |(a, b), e| {
                let sign = if e.position % 2 == 0 { 1 } else { -1 };
                (a + sign * e.dim as i64, b + sign * e.homology as i64)
            })
    }
}

fn slice_homology<K: Field>(field: &K, s: &ComplexSlice<K>, out: &mut Vec<HomologyEntry>) {
    let ranks: Vec<usize> = s.maps.iter().map(|m| matrix_rank(field, m)).collect();
    let len = s.dims.len();
    for k in 0..len {
        // chains: out of k is maps[k-1], into k is maps[k]; cochains the reverse
        let (out_rank, in_rank) = if s.cochain {
            (ranks.get(k).copied().unwrap_or(0), if k > 0 { ranks[k - 1] } else { 0 })
        } else {
            (if k > 0 { ranks[k - 1] } else { 0 }, ranks.get(k).copied().unwrap_or(0))
        };
        let kernel = s.dims[k] - out_rank;
        out.push(HomologyEntry {
            degree: s.degree,
            position: k,
            dim: s.dims[k],
            kernel,
            image: in_rank,
            homology: kernel - in_rank,
        });
    }
}

/// Homology of a chain template in total degrees `0..=n_max`.
pub fn homology<K: FromRational>(t: &FreeComplexTemplate<K>, n_max: usize) -> Result<HomologyReport> {
    let mut entries = Vec::new();
    for n in 0..=n_max {
        let s = slice(t, n)?;
        slice_homology(t.algebra.field(), &s, &mut entries);
    }
    Ok(HomologyReport { entries })
}

/// Cohomology of the dual of a chain template at the given internal degrees.
pub fn dual_cohomology<K: FromRational>(
    t: &FreeComplexTemplate<K>,
    degrees: impl IntoIterator<Item = i64>,
) -> Result<HomologyReport> {
    let mut entries = Vec::new();
    for d in degrees {
        let s = dual_slice(t, d)?;
        slice_homology(t.algebra.field(), &s, &mut entries);
    }
    Ok(HomologyReport { entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Koszul,
    Gorenstein,
    #[serde(rename = "dN_zero")]
    DnZero,
    Euler,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::Koszul => "koszul",
            CertificateKind::Gorenstein => "gorenstein",
            CertificateKind::DnZero => "dN_zero",
            CertificateKind::Euler => "euler",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// First failing cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub position: usize,
    pub degree: i64,
    pub reason: String,
}

/// A degree-bounded verification result. Serialized field order is the
/// declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub cutoff: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub field_strategy: FieldStrategy,
    pub computed_by: ComputedBy,
    pub positions: Vec<Position>,
    pub global_dimension: Option<usize>,
    /// Internal degree carrying the top cohomology class (Gorenstein only).
    pub top_degree: Option<i64>,
    pub homology: Vec<HomologyEntry>,
    pub note: String,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn new(
        kind: CertificateKind,
        cutoff: usize,
        opts: &ComputeOptions,
        computed_by: ComputedBy,
        witness: Option<Witness>,
    ) -> Self {
        let verdict = if witness.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Certificate {
            kind,
            cutoff,
            verdict,
            witness,
            field_strategy: opts.strategy,
            computed_by,
            positions: Vec::new(),
            global_dimension: None,
            top_degree: None,
            homology: Vec::new(),
            note: format!("verified through degree {cutoff}"),
        }
    }
}

#[derive(PartialEq)]
struct KoszulOutcome {
    positions: Vec<Position>,
    extension: Option<usize>,
    report: HomologyReport,
}

struct KoszulJob(usize);

impl FieldJob for KoszulJob {
    type Output = KoszulOutcome;
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<KoszulOutcome> {
        let t = koszul_complex(algebra, self.0)?;
        Ok(KoszulOutcome {
            positions: t.positions.clone(),
            extension: t.extension(),
            report: homology(&t, self.0)?,
        })
    }
}

/// Homology of the Koszul complex through `n_max`: passes iff it is zero
/// everywhere except `H_0 = k` in degree 0.
pub fn koszul_certificate(p: &Presentation, n_max: usize, opts: &ComputeOptions) -> Result<Certificate> {
    let (out, how) = run_job(p, opts, &KoszulJob(n_max))?;
    let witness = out.report.entries.iter().find_map(|e| {
        let expected = usize::from(e.degree == 0 && e.position == 0);
        (e.homology != expected).then(|| Witness {
            position: e.position,
            degree: e.degree,
            reason: format!("homology has dimension {}, expected {expected}", e.homology),
        })
    });
    let mut c = Certificate::new(CertificateKind::Koszul, n_max, opts, how, witness);
    if c.passed() {
        c.global_dimension = out.extension;
        if out.extension.is_none() {
            c.note.push_str("; the complex does not end within the cutoff");
        }
    }
    c.positions = out.positions;
    c.homology = out.report.entries;
    Ok(c)
}

#[derive(PartialEq)]
struct GorensteinOutcome {
    positions: Vec<Position>,
    extension: Option<usize>,
    report: HomologyReport,
}

struct GorensteinJob(usize);

impl FieldJob for GorensteinJob {
    type Output = GorensteinOutcome;
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<GorensteinOutcome> {
        let t = koszul_complex(algebra, self.0)?;
        let report = match (t.extension(), t.positions.last()) {
            (Some(_), Some(top)) => {
                let s = top.index as i64;
                dual_cohomology(&t, -s..=self.0 as i64 - s)?
            }
            _ => HomologyReport::default(),
        };
        Ok(GorensteinOutcome {
            positions: t.positions.clone(),
            extension: t.extension(),
            report,
        })
    }
}

/// Cohomology of `Hom_A(C_{N-1,0}, A)` at every internal degree whose
/// slices use algebra components of degree at most `n_max`. Passes iff
/// it vanishes below the top position and is one-dimensional in total at
/// the top.
pub fn gorenstein_certificate(p: &Presentation, n_max: usize, opts: &ComputeOptions) -> Result<Certificate> {
    let (out, how) = run_job(p, opts, &GorensteinJob(n_max))?;
    let mut top_degree = None;
    let witness = match out.extension {
        None => Some(Witness {
            position: out.positions.len(),
            degree: n_max as i64 + 1,
            reason: "the Koszul complex does not end within the cutoff".into(),
        }),
        Some(d) => {
            let lower = out
                .report
                .entries
                .iter()
                .find(|e| e.position < d && e.homology != 0)
                .map(|e| Witness {
                    position: e.position,
                    degree: e.degree,
                    reason: format!("cohomology below the top has dimension {}", e.homology),
                });
            let tops: Vec<&HomologyEntry> = out
                .report
                .entries
                .iter()
                .filter(|e| e.position == d && e.homology != 0)
                .collect();
            let total: usize = tops.iter().map(|e| e.homology).sum();
            if total == 1 {
                top_degree = Some(tops[0].degree);
            }
            lower.or_else(|| {
                (total != 1).then(|| Witness {
                    position: d,
                    degree: tops.first().map_or(-(out.positions[d].index as i64), |e| e.degree),
                    reason: format!("top cohomology has total dimension {total}, expected 1"),
                })
            })
        }
    };
    let mut c = Certificate::new(CertificateKind::Gorenstein, n_max, opts, how, witness);
    c.global_dimension = out.extension;
    c.top_degree = top_degree;
    c.positions = out.positions;
    c.homology = out.report.entries;
    Ok(c)
}

struct DnZeroJob(usize);

impl FieldJob for DnZeroJob {
    type Output = (Vec<Position>, Option<Witness>);
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<Self::Output> {
        let f = algebra.field().clone();
        let n_deg = algebra.presentation().degree();
        let kc = n_complex(Arc::clone(&algebra), self.0)?;
        let kz = koszul_complex(algebra, self.0)?;
        for n in 0..=self.0 {
            // `slice` itself rejects a nonzero N-fold composite
            let s = match slice(&kc, n) {
                Ok(s) => s,
                Err(Error::NotAComplex(reason)) => {
                    return Ok((
                        kc.positions.clone(),
                        Some(Witness {
                            position: 0,
                            degree: n as i64,
                            reason,
                        }),
                    ))
                }
                Err(e) => return Err(e),
            };
            let sz = slice(&kz, n)?;
            for (i, m) in sz.maps.iter().enumerate() {
                let lo = kz.positions[i].index;
                let hi = kz.positions[i + 1].index;
                if composite(&f, &s, lo, hi)? != *m {
                    return Ok((
                        kc.positions.clone(),
                        Some(Witness {
                            position: i + 1,
                            degree: n as i64,
                            reason: format!("d^{} from J_{hi} differs from the contraction map", hi - lo),
                        }),
                    ));
                }
            }
            debug_assert!(n_deg >= 2);
        }
        Ok((kc.positions.clone(), None))
    }
}

/// Checks `d^N = 0` on every slice of `K(A)` through `n_max`, and that
/// each map of the Koszul complex is the matching composite of single
/// steps.
pub fn dn_zero_check(p: &Presentation, n_max: usize, opts: &ComputeOptions) -> Result<Certificate> {
    let ((positions, witness), how) = run_job(p, opts, &DnZeroJob(n_max))?;
    let mut c = Certificate::new(CertificateKind::DnZero, n_max, opts, how, witness);
    c.positions = positions;
    Ok(c)
}

struct EulerJob(usize);

impl FieldJob for EulerJob {
    type Output = (Vec<Position>, Vec<usize>);
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<Self::Output> {
        let dims = algebra.graded_dims(self.0)?;
        let t = koszul_complex(algebra, self.0)?;
        Ok((t.positions.clone(), dims))
    }
}

/// `Σ_k (-1)^k r_k p_{n - s_k} = δ_{n0}` for the Koszul complex ranks
/// `r_k`, shifts `s_k` and graded dimensions `p_n`.
pub fn euler_check(p: &Presentation, n_max: usize, opts: &ComputeOptions) -> Result<Certificate> {
    let ((positions, dims), how) = run_job(p, opts, &EulerJob(n_max))?;
    let witness = (0..=n_max).find_map(|n| {
        let sum: i128 = positions
            .iter()
            .enumerate()
            .filter(|(_, pos)| pos.index <= n)
            .map(|(k, pos)| {
                let term = pos.rank as i128 * dims[n - pos.index] as i128;
                if k % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum();
        let expected = i128::from(n == 0);
        (sum != expected).then(|| Witness {
            position: 0,
            degree: n as i64,
            reason: format!("alternating sum is {sum}, expected {expected}"),
        })
    });
    let mut c = Certificate::new(CertificateKind::Euler, n_max, opts, how, witness);
    c.positions = positions;
    Ok(c)
}

/// Compares a closed-form matrix with the Koszul complex map leaving the
/// position of tensor degree `source`, written in a basis of `J_source`
/// given by `basis`. Checks the element matrices as tensors and then
/// their slices in every total degree through `n_max`.
pub fn closed_form_check(
    p: &Presentation,
    source: usize,
    basis: &[TensorVector],
    matrix: &TensorMatrix,
    n_max: usize,
    opts: &ComputeOptions,
) -> Result<(bool, ComputedBy)> {
    let job = ClosedFormJob {
        source,
        basis,
        matrix,
        n_max,
    };
    run_job(p, opts, &job)
}

/// The Yang-Mills Koszul map out of `A ⊗ R` has matrix `M` in the basis
/// `g^{μν} r_ν`, through `n_max`.
pub fn ym_matrix_check(metric: &Metric, n_max: usize, opts: &ComputeOptions) -> Result<(bool, ComputedBy)> {
    let p = yang_mills(metric)?;
    closed_form_check(&p, 3, &ym_raised_relators(metric), &ym_matrix_m(metric), n_max, opts)
}

/// The self-duality Koszul map out of `A ⊗ R` has matrix `N` in the basis
/// of the defining relators, through `n_max`.
pub fn sd_matrix_check(sign: Sign, n_max: usize, opts: &ComputeOptions) -> Result<(bool, ComputedBy)> {
    let n = match sign {
        Sign::Plus => sd_matrix_n(),
        Sign::Minus => sd_matrix_n_minus(),
    };
    closed_form_check(&self_duality(sign), 2, &self_duality_relators(sign), &n, n_max, opts)
}

struct ClosedFormJob<'a> {
    source: usize,
    basis: &'a [TensorVector],
    matrix: &'a TensorMatrix,
    n_max: usize,
}

impl FieldJob for ClosedFormJob<'_> {
    type Output = bool;
    fn run<K: FromRational>(&self, algebra: Arc<Algebra<K>>) -> Result<bool> {
        let f = algebra.field().clone();
        let t = koszul_complex(Arc::clone(&algebra), self.n_max.max(self.source))?;
        let Some(i) = t
            .positions
            .iter()
            .position(|p| p.index == self.source)
            .filter(|&i| i > 0)
        else {
            return Err(Error::InvalidPresentation(format!(
                "no Koszul map leaves tensor degree {}",
                self.source
            )));
        };
        let d = &t.maps[i - 1];
        let jk = &t.bases[i];
        if self.basis.len() != jk.dim()
            || self.matrix.len() != jk.dim()
            || self.matrix.iter().any(|r| r.len() != d.cols())
        {
            return Ok(false);
        }
        // coordinates of the given basis in the canonical one
        let mut coords = Vec::with_capacity(self.basis.len());
        let mut given = Vec::with_capacity(self.basis.len());
        for b in self.basis {
            let v = f.convert_vec(&b.coeffs)?;
            if !jk.contains(&v)? {
                return Ok(false);
            }
            coords.push(
                jk.pivots()
                    .iter()
                    .map(|p| v.get(*p).cloned().unwrap_or_else(|| f.zero()))
                    .collect::<Vec<_>>(),
            );
            given.push(v);
        }
        if Subspace::span(f.clone(), jk.ambient(), given)?.dim() != jk.dim() {
            return Ok(false);
        }
        let mut claimed = Vec::with_capacity(self.matrix.len());
        for (r, row) in self.matrix.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, entry) in row.iter().enumerate() {
                let mut acc: SparseVec<K::Elem> = SparseVec::zero();
                for (l, c) in coords[r].iter().enumerate() {
                    if !f.is_zero(c) {
                        acc = acc.axpy(&f, c, &d.entries[l][j].coeffs);
                    }
                }
                let want = f.convert_vec(&entry.coeffs)?;
                if entry.degree != d.degree || acc != want {
                    return Ok(false);
                }
                out.push(Element {
                    degree: d.degree,
                    coeffs: want,
                });
            }
            claimed.push(out);
        }
        let cm = ElementMatrix {
            degree: d.degree,
            entries: claimed,
        };
        let rank = jk.dim();
        for n in self.source..=self.n_max {
            let a = (n - self.source) as i64;
            let ours = assemble(&algebra, d, Side::Right, rank, d.cols(), a)?;
            let theirs = assemble(&algebra, &cm, Side::Right, rank, d.cols(), a)?;
            // rows of `theirs` are coords-combinations of rows of `ours`
            let block = algebra.graded_dim(a as usize)?;
            let ours_rows = ours.row_vectors();
            let mut rows = Vec::with_capacity(theirs.rows());
            for r in 0..rank {
                for w in 0..block {
                    let mut acc: SparseVec<K::Elem> = SparseVec::zero();
                    for (l, c) in coords[r].iter().enumerate() {
                        if !f.is_zero(c) {
                            acc = acc.axpy(&f, c, &ours_rows[l * block + w]);
                        }
                    }
                    rows.push(acc);
                }
            }
            if SparseMatrix::from_rows(ours.cols(), &rows)? != theirs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
