//! Constructors for the Yang-Mills, self-duality and sanity algebras, the
//! closed-form matrices `M` and `N` of their Koszul complexes, the dual
//! relation identities and a matrix representation checker.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Presentation, Side};
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, Rationals, Subspace};
use crate::series::{poly, self_duality_series, yang_mills_series, RationalSeries};
use crate::tensor::{RelatorSpace, TensorVector, Word};

type QDense = Vec<Vec<BigRational>>;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Inverse of a square rational matrix by Gauss-Jordan, `None` if singular.
pub fn invert(m: &[Vec<BigRational>]) -> Option<QDense> {
    let n = m.len();
    let mut a: QDense = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &factor * y;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// An invertible symmetric rational metric `g_{μν}` with its inverse `g^{μν}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    lower: QDense,
    upper: QDense,
}

impl Metric {
    pub fn new(lower: QDense) -> Result<Self> {
        let n = lower.len();
        if n < 2 {
            return Err(Error::InvalidMetric(format!("need at least 2 dimensions, got {n}")));
        }
        if lower.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if lower[i][j] != lower[j][i] {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        let upper = invert(&lower).ok_or_else(|| Error::InvalidMetric("singular matrix".into()))?;
        Ok(Metric { lower, upper })
    }

    pub fn diagonal(entries: &[BigRational]) -> Result<Self> {
        let n = entries.len();
        let lower = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { q(0) }).collect())
            .collect();
        Self::new(lower)
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::diagonal(&vec![q(1); dim]).expect("identity is a metric")
    }

    /// `diag(-1, 1, ..., 1)`
    pub fn minkowski(dim: usize) -> Self {
        let mut d = vec![q(1); dim];
        d[0] = q(-1);
        Self::diagonal(&d).expect("minkowski is a metric")
    }

    /// Number of generators `s + 1`.
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &QDense {
        &self.lower
    }

    pub fn upper(&self) -> &QDense {
        &self.upper
    }

    pub fn is_euclidean(&self) -> bool {
        *self == Self::euclidean(self.dim())
    }

    /// `euclid<n>`, `minkowski<n>`, or `diag:a,b,...` with rational entries.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("euclid") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::InvalidMetric(format!("bad dimension in {spec:?}")))?;
            return Metric::diagonal(&vec![q(1); n]);
        }
        if let Some(rest) = spec.strip_prefix("minkowski") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::InvalidMetric(format!("bad dimension in {spec:?}")))?;
            let mut d = vec![q(1); n];
            if let Some(first) = d.first_mut() {
                *first = q(-1);
            }
            return Metric::diagonal(&d);
        }
        if let Some(rest) = spec.strip_prefix("diag:") {
            let entries = rest
                .split(',')
                .map(|s| parse_rational(s).ok_or_else(|| Error::InvalidMetric(format!("bad entry {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            return Metric::diagonal(&entries);
        }
        Err(Error::InvalidMetric(format!("unknown metric {spec:?}")))
    }

    /// Canonical text form, inverse of [`Metric::parse`] for diagonal metrics.
    pub fn describe(&self) -> String {
        let n = self.dim();
        if *self == Self::euclidean(n) {
            return format!("euclid{n}");
        }
        if *self == Self::minkowski(n) {
            return format!("minkowski{n}");
        }
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || self.lower[i][j].is_zero()));
        if diagonal {
            let parts: Vec<String> = (0..n).map(|i| format_rational(&self.lower[i][i])).collect();
            return format!("diag:{}", parts.join(","));
        }
        let rows: Vec<String> = self
            .lower
            .iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(","))
            .collect();
        format!("matrix:{}", rows.join(";"))
    }
}

fn names(prefix: &str, g: usize) -> Vec<String> {
    (0..g).map(|i| format!("{prefix}{i}")).collect()
}

fn term(letters: &[usize], c: BigRational) -> (Word, BigRational) {
    (Word(letters.to_vec()), c)
}

/// The `s+1` Yang-Mills relators
/// `g^{λμ}(∇_λ∇_μ∇_ν + ∇_ν∇_λ∇_μ - 2∇_λ∇_ν∇_μ)`, indexed by `ν`.
pub fn yang_mills_relators(metric: &Metric) -> Vec<TensorVector> {
    let g = metric.dim();
    let up = metric.upper();
    (0..g)
        .map(|nu| {
            let mut terms = Vec::new();
            for l in 0..g {
                for m in 0..g {
                    let c = &up[l][m];
                    if c.is_zero() {
                        continue;
                    }
                    terms.push(term(&[l, m, nu], c.clone()));
                    terms.push(term(&[nu, l, m], c.clone()));
                    terms.push(term(&[l, nu, m], c * q(-2)));
                }
            }
            TensorVector::from_terms(g, &terms).expect("cubic terms")
        })
        .collect()
}

/// The cubic Yang-Mills algebra for a metric of size `s+1`.
pub fn yang_mills(metric: &Metric) -> Result<Presentation> {
    let g = metric.dim();
    Presentation::new(
        names("D", g),
        3,
        &yang_mills_relators(metric),
        format!("yang-mills({})", metric.describe()),
    )
}

/// Orientation sign of the self-duality relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

const CYCLIC: [(usize, usize, usize); 3] = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];

/// `[∇_0, ∇_k] - ε[∇_ℓ, ∇_m]` for cyclic `(k, ℓ, m)`.
pub fn self_duality_relators(sign: Sign) -> Vec<TensorVector> {
    let e = sign.value();
    CYCLIC
        .iter()
        .map(|&(k, l, m)| {
            TensorVector::from_terms(
                4,
                &[
                    term(&[0, k], q(1)),
                    term(&[k, 0], q(-1)),
                    term(&[l, m], q(-e)),
                    term(&[m, l], q(e)),
                ],
            )
            .expect("quadratic terms")
        })
        .collect()
}

/// The quadratic (anti-)self-duality algebra on four generators.
pub fn self_duality(sign: Sign) -> Presentation {
    let label = match sign {
        Sign::Plus => "self-duality(+)",
        Sign::Minus => "self-duality(-)",
    };
    Presentation::new(names("D", 4), 2, &self_duality_relators(sign), label).expect("valid preset")
}

/// Relators `θ^λθ^μ ± ½ Σ ε^{λμνρ} θ^νθ^ρ` of the dual of the self-duality algebra.
pub fn self_duality_dual_relators(sign: Sign) -> Vec<TensorVector> {
    let mut out = Vec::new();
    for l in 0..4 {
        for m in 0..4 {
            let mut terms = vec![term(&[l, m], q(1))];
            for n in 0..4 {
                for r in 0..4 {
                    let eps = levi_civita(&[l, m, n, r]);
                    if eps != 0 {
                        terms.push(term(&[n, r], BigRational::new((eps * sign.value()).into(), 2.into())));
                    }
                }
            }
            out.push(TensorVector::from_terms(4, &terms).expect("quadratic terms"));
        }
    }
    out
}

/// The displayed dual relators span exactly `R^⊥`.
pub fn sd_dual_relation_check(sign: Sign) -> Result<bool> {
    let rows = self_duality_dual_relators(sign).into_iter().map(|t| t.coeffs).collect();
    let span = Subspace::span(Rationals, 16, rows)?;
    Ok(span == self_duality(sign).relators().space().annihilator())
}

/// Sign of a permutation of distinct indices, 0 on repeats.
pub fn levi_civita(idx: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `U(heisenberg)`: the two-generator Yang-Mills algebra.
pub fn heisenberg() -> Presentation {
    let mut p = yang_mills(&Metric::euclidean(2)).expect("valid preset");
    p = Presentation::from_relator_space(vec!["x".into(), "y".into()], p.relators().clone(), "heisenberg")
        .expect("same shape");
    p
}

/// Tensor algebra on `g` generators, presented as quadratic with no relators.
pub fn free(g: usize) -> Result<Presentation> {
    Presentation::new(names("x", g), 2, &[], format!("free({g})"))
}

/// Polynomial ring in `g` commuting variables.
pub fn polynomial(g: usize) -> Result<Presentation> {
    let mut rels = Vec::new();
    for i in 0..g {
        for j in i + 1..g {
            rels.push(TensorVector::from_terms(
                g,
                &[term(&[i, j], q(1)), term(&[j, i], q(-1))],
            )?);
        }
    }
    Presentation::new(names("x", g), 2, &rels, format!("polynomial({g})"))
}

/// `k[x]/(x^2)`.
pub fn dual_numbers() -> Presentation {
    let r = TensorVector::from_terms(1, &[term(&[0, 0], q(1))]).expect("quadratic term");
    Presentation::new(vec!["x".into()], 2, &[r], "dual-numbers").expect("valid preset")
}

/// Named presets accepted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresetId {
    YangMills(Metric),
    SelfDuality(Sign),
    Heisenberg,
    Free(usize),
    Polynomial(usize),
    DualNumbers,
}

impl PresetId {
    /// Parses `ym`, `sd+`, `sd-`, `heisenberg`, `free:<g>`, `poly:<g>`,
    /// `dual-numbers`. Yang-Mills takes its metric separately.
    pub fn parse(name: &str, metric: Option<&str>) -> Result<Self> {
        let bad = || Error::InvalidPresentation(format!("unknown preset {name:?}"));
        Ok(match name {
            "ym" | "yang-mills" => PresetId::YangMills(Metric::parse(metric.unwrap_or("euclid4"))?),
            "sd+" | "sd" => PresetId::SelfDuality(Sign::Plus),
            "sd-" => PresetId::SelfDuality(Sign::Minus),
            "heisenberg" => PresetId::Heisenberg,
            "dual-numbers" => PresetId::DualNumbers,
            other => {
                if let Some(g) = other.strip_prefix("free:") {
                    PresetId::Free(g.parse().map_err(|_| bad())?)
                } else if let Some(g) = other.strip_prefix("poly:") {
                    PresetId::Polynomial(g.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        })
    }

    pub fn build(&self) -> Result<Presentation> {
        match self {
            PresetId::YangMills(m) => yang_mills(m),
            PresetId::SelfDuality(s) => Ok(self_duality(*s)),
            PresetId::Heisenberg => Ok(heisenberg()),
            PresetId::Free(g) => free(*g),
            PresetId::Polynomial(g) => polynomial(*g),
            PresetId::DualNumbers => Ok(dual_numbers()),
        }
    }
}

impl PresetId {
    /// Known Poincaré series of the preset.
    pub fn closed_form_series(&self) -> RationalSeries {
        let one_minus = |k: usize, c: i64| {
            let mut v = vec![0; k + 1];
            v[0] = 1;
            v[k] = -c;
            poly(&v)
        };
        let r = match self {
            PresetId::YangMills(m) => yang_mills_series(m.dim() as u64 - 1),
            PresetId::SelfDuality(_) => Ok(self_duality_series()),
            PresetId::Heisenberg => RationalSeries::reciprocal_of(&[one_minus(1, 1), one_minus(1, 1), one_minus(2, 1)]),
            PresetId::Free(g) => RationalSeries::reciprocal_of(&[one_minus(1, *g as i64)]),
            PresetId::Polynomial(g) => RationalSeries::reciprocal_of(&vec![one_minus(1, 1); *g]),
            PresetId::DualNumbers => RationalSeries::new(poly(&[1, 1]), poly(&[1])),
        };
        r.expect("nonzero constant term")
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetId::YangMills(m) => write!(f, "ym[{}]", m.describe()),
            PresetId::SelfDuality(Sign::Plus) => write!(f, "sd+"),
            PresetId::SelfDuality(Sign::Minus) => write!(f, "sd-"),
            PresetId::Heisenberg => write!(f, "heisenberg"),
            PresetId::Free(g) => write!(f, "free:{g}"),
            PresetId::Polynomial(g) => write!(f, "poly:{g}"),
            PresetId::DualNumbers => write!(f, "dual-numbers"),
        }
    }
}

impl FromStr for PresetId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetId::parse(s, None)
    }
}

/// A matrix whose entries are homogeneous tensors of one degree.
pub type TensorMatrix = Vec<Vec<TensorVector>>;

/// `M^{μν} = (g^{μν}g^{αβ} + g^{μα}g^{νβ} - 2g^{μβ}g^{να}) ∇_α∇_β`.
pub fn ym_matrix_m(metric: &Metric) -> TensorMatrix {
    let g = metric.dim();
    let up = metric.upper();
    (0..g)
        .map(|mu| {
            (0..g)
                .map(|nu| {
                    let mut terms = Vec::new();
                    for a in 0..g {
                        for b in 0..g {
                            let c = &up[mu][nu] * &up[a][b] + &up[mu][a] * &up[nu][b] - q(2) * &up[mu][b] * &up[nu][a];
                            if !c.is_zero() {
                                terms.push(term(&[a, b], c));
                            }
                        }
                    }
                    if terms.is_empty() {
                        TensorVector::zero(g, 2)
                    } else {
                        TensorVector::from_terms(g, &terms).expect("quadratic terms")
                    }
                })
                .collect()
        })
        .collect()
}

/// The 3×4 matrix `N` of the self-duality Koszul complex.
pub fn sd_matrix_n() -> TensorMatrix {
    let gen = |i: usize, s: i64| TensorVector::generator(4, i).scale(&q(s));
    vec![
        vec![gen(1, -1), gen(0, 1), gen(3, 1), gen(2, -1)],
        vec![gen(2, -1), gen(3, -1), gen(0, 1), gen(1, 1)],
        vec![gen(3, -1), gen(2, 1), gen(1, -1), gen(0, 1)],
    ]
}

/// Column vector `∇` as single-letter tensors.
pub fn nabla(g: usize) -> Vec<TensorVector> {
    (0..g).map(|i| TensorVector::generator(g, i)).collect()
}

/// Components of `A·v` for a tensor matrix `A` and tensor column `v`.
pub fn matrix_times_column(a: &TensorMatrix, v: &[TensorVector]) -> Vec<TensorVector> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(x, y)| x.tensor(y))
                .reduce(|s, t| s.add(&t))
                .expect("nonempty row")
        })
        .collect()
}

/// Components of `vᵗ·A`.
pub fn row_times_matrix(v: &[TensorVector], a: &TensorMatrix) -> Vec<TensorVector> {
    let cols = a[0].len();
    (0..cols)
        .map(|j| {
            v.iter()
                .zip(a)
                .map(|(x, row)| x.tensor(&row[j]))
                .reduce(|s, t| s.add(&t))
                .expect("nonempty column")
        })
        .collect()
}

/// Every component of `M∇` and `∇ᵗM` lies in the Yang-Mills relator space.
pub fn ym_relation_identities(metric: &Metric) -> Result<bool> {
    let p = yang_mills(metric)?;
    let m = ym_matrix_m(metric);
    let v = nabla(metric.dim());
    let mut comps = matrix_times_column(&m, &v);
    comps.extend(row_times_matrix(&v, &m));
    all_in_relators(p.relators(), &comps)
}

/// Every component of `N∇` lies in the self-duality relator space.
pub fn sd_relation_identities(sign: Sign) -> Result<bool> {
    let n = match sign {
        Sign::Plus => sd_matrix_n(),
        Sign::Minus => sd_matrix_n_minus(),
    };
    all_in_relators(self_duality(sign).relators(), &matrix_times_column(&n, &nabla(4)))
}

/// The analogue of `N` for the opposite orientation.
pub fn sd_matrix_n_minus() -> TensorMatrix {
    let mut n = sd_matrix_n();
    for row in n.iter_mut() {
        for (j, e) in row.iter_mut().enumerate() {
            if j > 0 && !matches!(e.terms().next(), Some((w, _)) if w.0 == [0]) {
                *e = e.scale(&q(-1));
            }
        }
    }
    n
}

/// `r'_μ = g^{μν} r_ν`, the basis of `R` in which the Koszul map out of
/// tensor degree 3 has matrix `M`.
pub fn ym_raised_relators(metric: &Metric) -> Vec<TensorVector> {
    let r = yang_mills_relators(metric);
    let g = metric.dim();
    (0..g)
        .map(|mu| {
            (0..g)
                .filter(|&nu| !metric.upper()[mu][nu].is_zero())
                .map(|nu| r[nu].scale(&metric.upper()[mu][nu]))
                .reduce(|a, b| a.add(&b))
                .unwrap_or_else(|| TensorVector::zero(g, 3))
        })
        .collect()
}

/// Relator tensors of the dual cubic relations
/// `θ^λθ^μθ^ν - c(g^{λμ}θ^ν + g^{μν}θ^λ - 2g^{λν}θ^μ)𝐠`, `𝐠 = g_{αβ}θ^αθ^β`,
/// with the coefficient `c` (`1/s` for the true relations).
pub fn dual_cubic_relators(metric: &Metric, coeff: &BigRational) -> Vec<TensorVector> {
    let g = metric.dim();
    let up = metric.upper();
    let gee = metric_element(metric);
    let mut out = Vec::new();
    for l in 0..g {
        for m in 0..g {
            for n in 0..g {
                let mut rhs = TensorVector::zero(g, 1);
                for (idx, c) in [(n, &up[l][m]), (l, &up[m][n])] {
                    if !c.is_zero() {
                        rhs = rhs.add(&TensorVector::generator(g, idx).scale(c));
                    }
                }
                if !up[l][n].is_zero() {
                    rhs = rhs.add(&TensorVector::generator(g, m).scale(&(q(-2) * &up[l][n])));
                }
                let lhs = TensorVector::from_terms(g, &[term(&[l, m, n], q(1))]).expect("cubic term");
                out.push(lhs.add(&rhs.tensor(&gee).scale(&-coeff)));
            }
        }
    }
    out
}

/// `𝐠 = g_{αβ} θ^α θ^β` in degree 2.
pub fn metric_element(metric: &Metric) -> TensorVector {
    let g = metric.dim();
    let mut terms = Vec::new();
    for a in 0..g {
        for b in 0..g {
            if !metric.lower()[a][b].is_zero() {
                terms.push(term(&[a, b], metric.lower()[a][b].clone()));
            }
        }
    }
    TensorVector::from_terms(g, &terms).expect("quadratic terms")
}

/// Checks that the dual cubic relations span exactly `R^⊥` and that `𝐠` is
/// central modulo them in degree 3.
pub fn dual_relation_check(metric: &Metric) -> Result<bool> {
    let s = metric.dim() as i64 - 1;
    dual_relation_check_with(metric, &BigRational::new(1.into(), s.into()))
}

/// [`dual_relation_check`] with an arbitrary coefficient in place of `1/s`.
pub fn dual_relation_check_with(metric: &Metric, coeff: &BigRational) -> Result<bool> {
    let ym = yang_mills(metric)?;
    let g = metric.dim();
    let ambient = g * g * g;
    let ann = ym.relators().space().annihilator();
    let rows = dual_cubic_relators(metric, coeff)
        .into_iter()
        .map(|t| t.coeffs)
        .collect();
    let span = Subspace::span(Rationals, ambient, rows)?;
    if span != ann {
        return Ok(false);
    }
    let dual = ym.dual();
    let slice = dual.relators().ideal_slice(3);
    let gee = metric_element(metric);
    for nu in 0..g {
        let th = TensorVector::generator(g, nu);
        let comm = gee.tensor(&th).add(&th.tensor(&gee).scale(&q(-1)));
        if !slice.contains(&comm.coeffs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Square rational matrices standing in for the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCandidate {
    size: usize,
    matrices: Vec<QDense>,
}

impl RepCandidate {
    pub fn new(matrices: Vec<QDense>) -> Result<Self> {
        let size = matrices.first().map_or(0, |m| m.len());
        for (i, m) in matrices.iter().enumerate() {
            if m.len() != size || m.iter().any(|r| r.len() != size) {
                return Err(Error::SizeMismatch(format!("matrix {i} is not {size}x{size}")));
            }
        }
        Ok(RepCandidate { size, matrices })
    }

    pub fn zeros(generators: usize, size: usize) -> Self {
        RepCandidate {
            size,
            matrices: vec![vec![vec![q(0); size]; size]; generators],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrices(&self) -> &[QDense] {
        &self.matrices
    }

    /// Simultaneous conjugation `P X P^{-1}`.
    pub fn conjugate(&self, p: &[Vec<BigRational>]) -> Result<Self> {
        let pinv = invert(p).ok_or_else(|| Error::SizeMismatch("conjugating matrix is singular".into()))?;
        let matrices = self
            .matrices
            .iter()
            .map(|m| dense_mul(&dense_mul(p, m), &pinv))
            .collect();
        Ok(RepCandidate {
            size: self.size,
            matrices,
        })
    }
}

pub fn dense_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> QDense {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![q(0); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

/// Integer arithmetic for relator evaluation; `None` signals overflow.
trait Ring: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn mul_add(&self, a: &Self, b: &Self) -> Option<Self>;
    fn sum(&self, other: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul_add(&self, a: &Self, b: &Self) -> Option<Self> {
        self.checked_add(a.checked_mul(*b)?)
    }
    fn sum(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_add(&self, a: &Self, b: &Self) -> Option<Self> {
        Some(self + a * b)
    }
    fn sum(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
}

type Dense<T> = Vec<Vec<T>>;

fn ring_mul<T: Ring>(a: &Dense<T>, b: &Dense<T>) -> Option<Dense<T>> {
    let n = a.len();
    let mut out = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].mul_add(&a[i][l], &b[l][j])?;
                }
            }
        }
    }
    Some(out)
}

/// `Σ_w c_w X_{w_1} ⋯ X_{w_N}` over words sorted lexicographically,
/// grouped by common prefixes.
fn evaluate<T: Ring>(terms: &[(Vec<usize>, T)], mats: &[Dense<T>], depth: usize) -> Option<Dense<T>> {
    let n = mats[0].len();
    let mut out = vec![vec![T::zero(); n]; n];
    let mut i = 0;
    while i < terms.len() {
        let a = terms[i].0[depth];
        let mut j = i;
        while j < terms.len() && terms[j].0[depth] == a {
            j += 1;
        }
        if depth + 1 == terms[i].0.len() {
            let c = &terms[i].1;
            for (row, src) in out.iter_mut().zip(&mats[a]) {
                for (x, y) in row.iter_mut().zip(src) {
                    if !y.is_zero() {
                        *x = x.mul_add(c, y)?;
                    }
                }
            }
        } else {
            let prod = ring_mul(&mats[a], &evaluate(&terms[i..j], mats, depth + 1)?)?;
            for (row, src) in out.iter_mut().zip(&prod) {
                for (x, y) in row.iter_mut().zip(src) {
                    if !y.is_zero() {
                        *x = x.sum(y)?;
                    }
                }
            }
        }
        i = j;
    }
    Some(out)
}

fn relator_vanishes<T: Ring>(terms: &[(Vec<usize>, T)], mats: &[Dense<T>]) -> Option<bool> {
    Some(evaluate(terms, mats, 0)?.iter().flatten().all(|x| x.is_zero()))
}

/// Substitutes matrices for generators in every relator; true iff all vanish.
///
/// Relators are homogeneous, so matrices and coefficients are scaled to
/// integers first; arithmetic is `i128` with a big-integer fallback.
pub fn representation_check(p: &Presentation, rep: &RepCandidate) -> Result<bool> {
    if rep.matrices.len() != p.generators() {
        return Err(Error::SizeMismatch(format!(
            "{} matrices for {} generators",
            rep.matrices.len(),
            p.generators()
        )));
    }
    if rep.size == 0 {
        return Ok(true);
    }
    let lcm = |acc: BigInt, x: &BigRational| acc.lcm(x.denom());
    let scale = rep.matrices.iter().flatten().flatten().fold(BigInt::one(), lcm);
    let big_mats: Vec<Dense<BigInt>> = rep
        .matrices
        .iter()
        .map(|m| {
            m.iter()
                .map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect())
                .collect()
        })
        .collect();
    let small_mats: Option<Vec<Dense<i128>>> = big_mats
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|x| x.to_i128()).collect()).collect())
        .collect();
    for r in p.relator_tensors() {
        let terms: Vec<(Word, BigRational)> = r.terms().map(|(w, c)| (w, c.clone())).collect();
        let cscale = terms.iter().map(|(_, c)| c).fold(BigInt::one(), lcm);
        let big: Vec<(Vec<usize>, BigInt)> = terms
            .iter()
            .map(|(w, c)| (w.0.clone(), (c * &cscale).to_integer()))
            .collect();
        let small: Option<Vec<(Vec<usize>, i128)>> =
            big.iter().map(|(w, c)| c.to_i128().map(|c| (w.clone(), c))).collect();
        let fast = match (&small_mats, &small) {
            (Some(m), Some(t)) => relator_vanishes(t, m),
            _ => None,
        };
        let ok = match fast {
            Some(v) => v,
            None => relator_vanishes(&big, &big_mats).expect("big integers do not overflow"),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Left multiplication by each generator on `A / A_{>top}`, a faithful
/// finite-dimensional representation of the relations.
pub fn truncated_regular_representation(p: &Presentation, top: usize) -> Result<RepCandidate> {
    let alg = Algebra::new(Arc::new(p.clone()), Rationals)?;
    let dims = alg.graded_dims(top)?;
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let size: usize = dims.iter().sum();
    let mut matrices = Vec::with_capacity(p.generators());
    for letter in 0..p.generators() {
        // column convention: the matrix maps coordinate vectors x to ∇·x
        let mut m = vec![vec![q(0); size]; size];
        for n in 0..top {
            let mm = alg.mult_matrix(Side::Left, letter, n)?;
            for (r, c, v) in mm.entries() {
                m[offsets[n + 1] + c][offsets[n] + r] = v.clone();
            }
        }
        matrices.push(m);
    }
    RepCandidate::new(matrices)
}

/// A seeded unimodular integer matrix `L·U`: unit-diagonal triangular
/// factors with sparse small off-diagonal entries.
pub fn seeded_conjugator(size: usize, seed: u64) -> QDense {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut tri = |upper: bool| -> QDense {
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| match (i == j, (j > i) == upper) {
                        (true, _) => q(1),
                        (false, true) if rng.gen_bool(0.2) => q(rng.gen_range(-3..=3)),
                        _ => q(0),
                    })
                    .collect()
            })
            .collect()
    };
    let l = tri(false);
    let u = tri(true);
    dense_mul(&l, &u)
}

/// The Heisenberg nilpotent pair `E_12`, `E_23`.
pub fn heisenberg_rep() -> RepCandidate {
    let mut a = vec![vec![q(0); 3]; 3];
    let mut b = vec![vec![q(0); 3]; 3];
    a[0][1] = q(1);
    b[1][2] = q(1);
    RepCandidate::new(vec![a, b]).expect("square")
}

/// Relator basis change: rows express the given tensors in the canonical
/// basis of `space` (coefficient of basis vector `i` is the pivot entry).
pub fn coordinates_in(space: &Subspace<Rationals>, tensors: &[TensorVector]) -> Result<QDense> {
    tensors
        .iter()
        .map(|t| {
            if !space.contains(&t.coeffs)? {
                return Err(Error::InvalidPresentation("tensor outside the subspace".into()));
            }
            Ok(space
                .pivots()
                .iter()
                .map(|p| t.coeffs.get(*p).cloned().unwrap_or_else(|| q(0)))
                .collect())
        })
        .collect()
}

/// True if every relator tensor lies in the given relator space.
pub fn all_in_relators(space: &RelatorSpace<Rationals>, tensors: &[TensorVector]) -> Result<bool> {
    for t in tensors {
        if !space.space().contains(&t.coeffs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::graded_dims;

    #[test]
    fn metric_validation() {
        assert!(Metric::parse("euclid4").unwrap().is_euclidean());
        assert!(Metric::parse("diag:1,0,1").is_err());
        assert!(Metric::new(vec![vec![q(1), q(2)], vec![q(3), q(1)]]).is_err());
        assert!(Metric::parse("euclid1").is_err());
        assert!(Metric::parse("bogus").is_err());
        let m = Metric::parse("diag:2,-1/3").unwrap();
        assert_eq!(m.upper()[1][1], q(-3));
        assert_eq!(Metric::parse(&m.describe()).unwrap(), m);
        assert_eq!(Metric::minkowski(4).describe(), "minkowski4");
    }

    #[test]
    fn ym_relator_space_dimension() {
        let p = yang_mills(&Metric::euclidean(4)).unwrap();
        assert_eq!(p.relators().dim(), 4);
        assert!(p.dropped_relators().is_empty());
    }

    #[test]
    fn self_duality_dims_in_degree_two() {
        let p = self_duality(Sign::Plus);
        assert_eq!(p.relators().dim(), 3);
        assert_eq!(graded_dims(&p, Rationals, 2).unwrap(), vec![1, 4, 13]);
    }

    #[test]
    fn self_duality_dual_relations() {
        let p = self_duality(Sign::Plus);
        let span = Subspace::span(
            Rationals,
            16,
            self_duality_dual_relators(Sign::Plus)
                .into_iter()
                .map(|t| t.coeffs)
                .collect(),
        )
        .unwrap();
        assert_eq!(span, p.relators().space().annihilator());
        assert!(sd_dual_relation_check(Sign::Minus).unwrap());
        assert_ne!(span, self_duality(Sign::Minus).relators().space().annihilator());
    }

    #[test]
    fn n_times_nabla_lies_in_relators() {
        let p = self_duality(Sign::Plus);
        let comps = matrix_times_column(&sd_matrix_n(), &nabla(4));
        assert!(all_in_relators(p.relators(), &comps).unwrap());
        // first row of N∇ is exactly [∇_0,∇_1] - [∇_2,∇_3]
        assert_eq!(comps[0], self_duality_relators(Sign::Plus)[0]);
    }

    #[test]
    fn closed_form_identities() {
        assert!(ym_relation_identities(&Metric::euclidean(4)).unwrap());
        assert!(ym_relation_identities(&Metric::parse("diag:2,-1,1/3").unwrap()).unwrap());
        assert!(sd_relation_identities(Sign::Plus).unwrap());
        assert!(sd_relation_identities(Sign::Minus).unwrap());
    }

    #[test]
    fn dual_relations() {
        for s in 1..=3 {
            assert!(dual_relation_check(&Metric::euclidean(s + 1)).unwrap());
        }
        assert!(dual_relation_check(&Metric::minkowski(4)).unwrap());
        assert!(!dual_relation_check_with(&Metric::euclidean(4), &q(1)).unwrap());
    }

    #[test]
    fn closed_forms_match_linear_algebra() {
        use crate::series::expand;
        for (id, cutoff) in [
            ("heisenberg", 7),
            ("free:3", 4),
            ("poly:3", 5),
            ("dual-numbers", 6),
            ("sd-", 4),
            ("ym", 5),
        ] {
            let id = PresetId::parse(id, None).unwrap();
            let want = expand(&id.closed_form_series(), cutoff).unwrap().to_u64s().unwrap();
            let got = graded_dims(&id.build().unwrap(), Rationals, cutoff).unwrap();
            assert_eq!(got.iter().map(|&d| d as u64).collect::<Vec<_>>(), want, "{id}");
        }
    }

    #[test]
    fn preset_parsing() {
        assert_eq!(
            PresetId::parse("sd-", None).unwrap(),
            PresetId::SelfDuality(Sign::Minus)
        );
        assert_eq!(PresetId::parse("free:3", None).unwrap(), PresetId::Free(3));
        assert!(PresetId::parse("nope", None).is_err());
        assert!(PresetId::parse("ym", Some("diag:1,0")).is_err());
        assert_eq!(PresetId::parse("ym", None).unwrap().to_string(), "ym[euclid4]");
    }

    #[test]
    fn zero_representation_is_a_representation() {
        let p = yang_mills(&Metric::euclidean(4)).unwrap();
        assert!(representation_check(&p, &RepCandidate::zeros(4, 3)).unwrap());
        assert!(representation_check(&p, &RepCandidate::zeros(3, 3)).is_err());
    }

    #[test]
    fn heisenberg_nilpotent_representation() {
        assert!(representation_check(&heisenberg(), &heisenberg_rep()).unwrap());
        // swapping in a non-nilpotent matrix breaks the cubic relation
        let mut bad = heisenberg_rep().matrices().to_vec();
        bad[0][1][0] = q(1);
        assert!(!representation_check(&heisenberg(), &RepCandidate::new(bad).unwrap()).unwrap());
    }

    #[test]
    fn self_dual_representations_satisfy_yang_mills() {
        let ym = yang_mills(&Metric::euclidean(4)).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let sd = self_duality(sign);
            let rep = truncated_regular_representation(&sd, 3).unwrap();
            let rep = rep.conjugate(&seeded_conjugator(rep.size(), 7)).unwrap();
            assert!(representation_check(&sd, &rep).unwrap());
            assert!(representation_check(&ym, &rep).unwrap());
        }
        // the regular representation of the Yang-Mills algebra itself does
        // not satisfy the self-duality relations
        let rep = truncated_regular_representation(&ym, 3).unwrap();
        assert!(representation_check(&ym, &rep).unwrap());
        assert!(!representation_check(&self_duality(Sign::Plus), &rep).unwrap());
    }

    #[test]
    fn levi_civita_signs() {
        assert_eq!(levi_civita(&[0, 1, 2, 3]), 1);
        assert_eq!(levi_civita(&[1, 0, 2, 3]), -1);
        assert_eq!(levi_civita(&[0, 0, 2, 3]), 0);
    }
}
