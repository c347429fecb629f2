//! Truncated integer power series, rational-function expansion and the
//! Witt/Möbius extraction of graded Lie algebra dimensions from an
//! enveloping algebra's Poincaré series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial with integer coefficients, constant term first.
pub type Poly = Vec<BigInt>;

pub fn poly(coeffs: &[i64]) -> Poly {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients `c_0..=c_cutoff` of a power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(poly(coeffs))
    }

    pub fn from_dims(dims: &[usize]) -> Self {
        Self::new(dims.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        Self::new(self.coeffs[..=cutoff.min(self.cutoff())].to_vec())
    }

    /// Product truncated at the smaller cutoff.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let cutoff = self.cutoff().min(other.cutoff());
        self.mul_poly(&other.coeffs[..=cutoff]).truncate(cutoff)
    }

    pub fn mul_poly(&self, q: &[BigInt]) -> TruncatedSeries {
        let n = self.cutoff();
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in q.iter().enumerate().take(n + 1 - i) {
                out[i + j] += x * y;
            }
        }
        TruncatedSeries::new(out)
    }

    /// `1 / self` up to the same cutoff; needs constant term ±1.
    pub fn inverse(&self) -> Result<TruncatedSeries> {
        expand(&RationalSeries::new(poly(&[1]), self.coeffs.clone())?, self.cutoff())
    }

    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.coeffs.iter().map(|c| u64::try_from(c).ok()).collect()
    }
}

/// `numerator / denominator` with a nonzero constant term below.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    numerator: Poly,
    denominator: Poly,
}

impl RationalSeries {
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.first().is_none_or(|c| c.is_zero()) {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(RationalSeries { numerator, denominator })
    }

    /// `1 / prod(factors)`
    pub fn reciprocal_of(factors: &[Poly]) -> Result<Self> {
        let den = factors.iter().fold(poly(&[1]), |acc, f| poly_mul(&acc, f));
        Self::new(poly(&[1]), den)
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[BigInt] {
        &self.denominator
    }
}

/// Exact expansion through the denominator's linear recurrence
/// `d_0 c_n = a_n - sum_{k>=1} d_k c_{n-k}`.
pub fn expand_rational(r: &RationalSeries, cutoff: usize) -> Vec<BigRational> {
    let d0 = BigRational::from_integer(r.denominator[0].clone());
    let mut out: Vec<BigRational> = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        let mut acc = BigRational::from_integer(r.numerator.get(n).cloned().unwrap_or_default());
        for (k, d) in r.denominator.iter().enumerate().skip(1).take(n) {
            acc -= &out[n - k] * BigRational::from_integer(d.clone());
        }
        out.push(acc / &d0);
    }
    out
}

/// Integer expansion; fails unless every coefficient through the cutoff is integral.
pub fn expand(r: &RationalSeries, cutoff: usize) -> Result<TruncatedSeries> {
    let coeffs = expand_rational(r, cutoff);
    let ints = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::NonEnveloping {
                    index: i,
                    value: c.to_string(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::new(ints))
}

/// Whether `p · q = 1 + O(t^{cutoff+1})`.
pub fn pq_one_check(p: &TruncatedSeries, q: &[BigInt]) -> bool {
    let prod = p.mul_poly(q);
    prod.coeffs()
        .iter()
        .enumerate()
        .all(|(n, c)| if n == 0 { c.is_one() } else { c.is_zero() })
}

/// The Möbius function.
pub fn mobius(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    let mut m = n;
    let mut sign = 1i64;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Graded Lie algebra dimensions `N_1, N_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieDims {
    values: Vec<BigInt>,
    /// Number of leading entries taken from the series extraction rather
    /// than from a closed form.
    from_series: usize,
}

impl LieDims {
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `N_j`, 1-based.
    pub fn get(&self, j: usize) -> &BigInt {
        &self.values[j - 1]
    }

    pub fn jmax(&self) -> usize {
        self.values.len()
    }

    pub fn from_series_count(&self) -> usize {
        self.from_series
    }

    /// `prod_j (1 - t^j)^{-N_j}` through `t^cutoff`.
    pub fn reconstruct(&self, cutoff: usize) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::new({
            let mut v = vec![BigInt::zero(); cutoff + 1];
            v[0] = BigInt::one();
            v
        });
        for (idx, n_j) in self.values.iter().enumerate() {
            let j = idx + 1;
            if j > cutoff {
                break;
            }
            // (1 - t^j)^{-N} = sum_k binom(N + k - 1, k) t^{jk}, also for N < 0
            let mut factor = vec![BigInt::zero(); cutoff + 1];
            let mut binom = BigInt::one();
            for k in 0..=cutoff / j {
                if k > 0 {
                    binom = binom * (n_j + BigInt::from(k - 1)) / BigInt::from(k);
                }
                factor[j * k] = binom.clone();
            }
            acc = acc.mul_poly(&factor);
        }
        Ok(acc)
    }
}

/// Coefficients `a_1..=a_cutoff` of `t P'(t) / P(t)`, using
/// `n p_n = sum_{k=1}^{n} a_k p_{n-k}` with `p_0 = 1`.
pub fn log_derivative(p: &TruncatedSeries) -> Result<Vec<BigInt>> {
    if !p.coeff(0).is_one() {
        return Err(Error::BadConstantTerm);
    }
    let c = p.coeffs();
    let mut a: Vec<BigInt> = vec![BigInt::zero()];
    for n in 1..=p.cutoff() {
        let mut v = BigInt::from(n) * &c[n];
        for k in 1..n {
            v -= &a[k] * &c[n - k];
        }
        a.push(v);
    }
    Ok(a)
}

fn mobius_invert(a: &[BigInt], j: usize) -> Result<BigInt> {
    let mut sum = BigInt::zero();
    for d in divisors(j) {
        let mu = mobius((j / d) as u64)?;
        if mu != 0 {
            sum += &a[d] * mu;
        }
    }
    let (q, r) = sum.div_rem(&BigInt::from(j));
    if !r.is_zero() {
        return Err(Error::NonEnveloping {
            index: j,
            value: format!("{sum}/{j}"),
        });
    }
    Ok(q)
}

/// Signed exponents `N_j`, `j = 1..=cutoff`, with
/// `prod_j (1-t^j)^{-N_j} = P(t)`. Every series with constant term 1 has
/// such a product form.
pub fn witt_exponents(p: &TruncatedSeries) -> Result<LieDims> {
    let a = log_derivative(p)?;
    let values = (1..=p.cutoff())
        .map(|j| mobius_invert(&a, j))
        .collect::<Result<Vec<_>>>()?;
    let from_series = values.len();
    Ok(LieDims { values, from_series })
}

/// [`witt_exponents`] restricted to enveloping algebras: fails when some
/// `N_j` is negative.
pub fn lie_dims_from_series(p: &TruncatedSeries) -> Result<LieDims> {
    let dims = witt_exponents(p)?;
    if let Some((i, n)) = dims.values.iter().enumerate().find(|(_, n)| n.is_negative()) {
        return Err(Error::NonEnveloping {
            index: i + 1,
            value: n.to_string(),
        });
    }
    Ok(dims)
}

/// Power sums `t1^k + t2^k` of the roots of `t^2 - (s+1) t + 1`, `k = 0..=kmax`.
pub fn root_power_sums(s: u64, kmax: usize) -> Vec<BigInt> {
    let trace = BigInt::from(s + 1);
    let mut out = vec![BigInt::from(2), trace.clone()];
    while out.len() <= kmax {
        let k = out.len();
        let next = &trace * &out[k - 1] - &out[k - 2];
        out.push(next);
    }
    out.truncate(kmax + 1);
    out
}

/// Lie dimensions of the Yang-Mills algebra on `s+1` generators: the
/// Möbius closed form over root power sums for `j > 2`, with `N_1`, `N_2`
/// taken from the series extraction.
pub fn lie_dims_closed_form(s: u64, jmax: usize) -> Result<LieDims> {
    if jmax < 3 {
        return Err(Error::NonPositive);
    }
    let p = root_power_sums(s, jmax);
    let head = lie_dims_from_series(&expand(&yang_mills_series(s)?, 2)?)?;
    let mut values: Vec<BigInt> = head.values[..2].to_vec();
    for j in 3..=jmax {
        values.push(mobius_invert(&p, j)?);
    }
    Ok(LieDims { values, from_series: 2 })
}

/// `1 / ((1 - t^2)(1 - (s+1) t + t^2))`
pub fn yang_mills_series(s: u64) -> Result<RationalSeries> {
    RationalSeries::reciprocal_of(&[poly(&[1, 0, -1]), poly(&[1, -(s as i64 + 1), 1])])
}

/// `1 - (s+1) t + (s+1) t^3 - t^4`
pub fn yang_mills_q(s: u64) -> Poly {
    let g = s as i64 + 1;
    poly(&[1, -g, 0, g, -1])
}

/// `1 / ((1 - t)(1 - 3t))`
pub fn self_duality_series() -> RationalSeries {
    RationalSeries::reciprocal_of(&[poly(&[1, -1]), poly(&[1, -3])]).expect("nonzero constant term")
}

/// `p_n / p_{n-1}`
pub fn growth_ratio(p: &TruncatedSeries, n: usize) -> Result<BigRational> {
    if n == 0 || n > p.cutoff() {
        return Err(Error::NonPositive);
    }
    let den = p.coeff(n - 1);
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(p.coeff(n).clone(), den.clone()))
}
