//! Sparse truncated holomorphic series on the unit ball of C^n.
//!
//! A series is stored as a finite map from multi-indices to complex
//! coefficients, truncated at an explicit degree `max_degree`. Indices beyond
//! the truncation are semantically zero. Iteration (and therefore every
//! floating-point summation in the crate) is in graded lexicographic order:
//! ascending total degree, lexicographic within a degree. This makes results
//! run-to-run identical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multi-index m = (m_1, ..., m_n) with non-negative components.
///
/// Ordered by total degree first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    /// The zero index of length `n`.
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index e_i of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = 1;
        MultiIndex(c)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree |m| = m_1 + ... + m_n.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        let mut out = Vec::with_capacity(self.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    /// z^m = z_1^{m_1} ... z_n^{m_n}.
    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(self.len(), z.len());
        let mut p = Complex64::new(1.0, 0.0);
        for (zi, &mi) in z.iter().zip(&self.0) {
            if mi > 0 {
                p *= zi.powu(mi);
            }
        }
        p
    }

    /// m! = m_1! ... m_n! as f64.
    pub fn factorial(&self) -> f64 {
        let mut p = 1.0;
        for &mi in &self.0 {
            for j in 2..=mi {
                p *= j as f64;
            }
        }
        p
    }

    /// Multinomial coefficient |m|! / m!.
    pub fn multinomial(&self) -> f64 {
        // Product of binomials C(s_i, m_i) over running partial sums s_i.
        let mut total = 0u32;
        let mut c = 1.0;
        for &mi in &self.0 {
            total += mi;
            let mut s = total;
            for j in 1..=mi {
                c *= s as f64 / j as f64;
                s -= 1;
            }
        }
        c
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point z with |z| < 1 in C^n, with the norm cached.
#[derive(Clone, Debug)]
pub struct BallPoint {
    coords: Vec<Complex64>,
    norm: f64,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite("ball point coordinates".into()));
        }
        if norm >= 1.0 {
            return Err(Error::InvalidParameter(format!("|z| = {norm} is not < 1")));
        }
        Ok(BallPoint { coords, norm })
    }

    pub fn origin(n: usize) -> Self {
        BallPoint {
            coords: vec![Complex64::new(0.0, 0.0); n],
            norm: 0.0,
        }
    }

    /// Point (t, 0, ..., 0) on the first axis; |t| < 1.
    pub fn on_axis(n: usize, t: f64) -> Result<Self> {
        let mut coords = vec![Complex64::new(0.0, 0.0); n];
        coords[0] = Complex64::new(t, 0.0);
        BallPoint::new(coords)
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// The rotated point e^{i theta} z.
    pub fn rotated(&self, theta: f64) -> BallPoint {
        let phase = Complex64::from_polar(1.0, theta);
        BallPoint {
            coords: self.coords.iter().map(|c| c * phase).collect(),
            norm: self.norm,
        }
    }
}

/// Hermitian inner product <z, w> = sum z_i conj(w_i).
pub fn inner_product(z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: z.len(),
            right: w.len(),
        });
    }
    Ok(z.iter().zip(w).map(|(a, b)| a * b.conj()).sum())
}

/// Truncated holomorphic series sum a_m z^m with |m| <= max_degree.
#[derive(Clone, Debug)]
pub struct HoloSeries {
    dim: usize,
    max_degree: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl HoloSeries {
    /// The zero series in dimension `dim`, truncated at `max_degree`.
    pub fn zero(dim: usize, max_degree: u32) -> Self {
        assert!(dim > 0, "dimension must be positive");
        HoloSeries {
            dim,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant series `value`.
    pub fn constant(dim: usize, value: Complex64, max_degree: u32) -> Self {
        let mut s = HoloSeries::zero(dim, max_degree);
        if value != Complex64::new(0.0, 0.0) {
            s.coeffs.insert(MultiIndex::zero(dim), value);
        }
        s
    }

    /// The monomial c * z^m.
    pub fn monomial(dim: usize, m: MultiIndex, c: Complex64, max_degree: u32) -> Result<Self> {
        let mut s = HoloSeries::zero(dim, max_degree);
        s.insert(m, c)?;
        Ok(s)
    }

    pub fn from_terms<I>(dim: usize, max_degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut s = HoloSeries::zero(dim, max_degree);
        for (m, c) in terms {
            s.insert(m, c)?;
        }
        Ok(s)
    }

    /// Sets the coefficient of z^m, replacing any previous value.
    pub fn insert(&mut self, m: MultiIndex, c: Complex64) -> Result<()> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: m.len(),
                right: self.dim,
            });
        }
        if m.order() > self.max_degree {
            return Err(Error::DegreeOutOfRange {
                degree: m.order(),
                max: self.max_degree,
            });
        }
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of z^m.
    pub fn add_term(&mut self, m: MultiIndex, c: Complex64) -> Result<()> {
        let cur = self.coeff(&m);
        self.insert(m, cur + c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Largest total degree with a stored coefficient (0 for the zero series).
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.order()).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient a_m (zero if absent).
    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        self.coeffs
            .get(m)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest absolute coefficient.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &HoloSeries) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Evaluates the series at z, summing degree blocks in ascending order.
    pub fn evaluate(&self, z: &BallPoint) -> Result<Complex64> {
        self.evaluate_at(z.coords())
    }

    /// Evaluates at raw coordinates (used for sphere nodes as well).
    pub fn evaluate_at(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: z.len(),
                right: self.dim,
            });
        }
        let mut total = Complex64::new(0.0, 0.0);
        let mut block = Complex64::new(0.0, 0.0);
        let mut block_degree = 0u32;
        for (m, c) in &self.coeffs {
            let k = m.order();
            if k != block_degree {
                total += block;
                block = Complex64::new(0.0, 0.0);
                block_degree = k;
            }
            block += c * m.monomial(z);
        }
        total += block;
        Ok(total)
    }

    /// The homogeneous part of degree k: sum over |m| = k of a_m z^m.
    pub fn homogeneous_part(&self, k: u32) -> Result<HoloSeries> {
        if k > self.max_degree {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                max: self.max_degree,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(m, _)| m.order() == k)
            .map(|(m, c)| (m.clone(), *c))
            .collect();
        Ok(HoloSeries {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs,
        })
    }

    /// Coefficient-convolution product truncated to degree `max_degree`.
    pub fn multiply(&self, other: &HoloSeries, max_degree: u32) -> Result<HoloSeries> {
        self.check_dim(other)?;
        let mut out = HoloSeries::zero(self.dim, max_degree);
        for (a, ca) in &self.coeffs {
            let ka = a.order();
            if ka > max_degree {
                continue;
            }
            for (b, cb) in &other.coeffs {
                if ka + b.order() > max_degree {
                    continue;
                }
                let m = a.plus(b);
                let cur = out.coeff(&m);
                out.insert(m, cur + ca * cb)?;
            }
        }
        Ok(out)
    }

    /// Coefficientwise sum; truncation is the larger of the two.
    pub fn plus(&self, other: &HoloSeries) -> Result<HoloSeries> {
        self.check_dim(other)?;
        let mut out = self.clone();
        out.max_degree = self.max_degree.max(other.max_degree);
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn minus(&self, other: &HoloSeries) -> Result<HoloSeries> {
        self.plus(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> HoloSeries {
        if c == Complex64::new(0.0, 0.0) {
            return HoloSeries::zero(self.dim, self.max_degree);
        }
        HoloSeries {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Rescales each degree block by `factor(k)`.
    pub fn scale_by_degree(&self, factor: impl Fn(u32) -> f64) -> HoloSeries {
        let mut cache: Vec<Option<f64>> = vec![None; self.max_degree as usize + 1];
        let mut coeffs = BTreeMap::new();
        for (m, c) in &self.coeffs {
            let k = m.order() as usize;
            let f = *cache[k].get_or_insert_with(|| factor(k as u32));
            if f != 0.0 {
                coeffs.insert(m.clone(), c * f);
            }
        }
        HoloSeries {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs,
        }
    }

    /// Drops terms above degree `k` and sets the truncation to `k`.
    pub fn truncated(&self, k: u32) -> HoloSeries {
        HoloSeries {
            dim: self.dim,
            max_degree: k,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.order() <= k)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// The series of f(e^{i theta} z): multiplies each degree-k block by
    /// e^{i k theta}.
    pub fn rotated(&self, theta: f64) -> HoloSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(m, c)| {
                (
                    m.clone(),
                    c * Complex64::from_polar(1.0, theta * m.order() as f64),
                )
            })
            .collect();
        HoloSeries {
            dim: self.dim,
            max_degree: self.max_degree,
            coeffs,
        }
    }

    /// Largest absolute coefficient difference, requiring equal dims.
    pub fn max_coeff_distance(&self, other: &HoloSeries) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.minus(other)?.max_coeff_norm())
    }
}

/// Enumerates multi-indices of length `n` and total degree `k`, restricted to
/// the given support positions.
fn compositions_on_support(n: usize, k: u32, support: &[usize]) -> Vec<MultiIndex> {
    fn rec(
        support: &[usize],
        pos: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<MultiIndex>,
    ) {
        if pos + 1 == support.len() {
            current[support[pos]] = remaining;
            out.push(MultiIndex::new(current.clone()));
            current[support[pos]] = 0;
            return;
        }
        for v in (0..=remaining).rev() {
            current[support[pos]] = v;
            rec(support, pos + 1, remaining - v, current, out);
        }
        current[support[pos]] = 0;
    }

    let mut out = Vec::new();
    if support.is_empty() {
        if k == 0 {
            out.push(MultiIndex::zero(n));
        }
        return out;
    }
    let mut current = vec![0u32; n];
    rec(support, 0, k, &mut current, &mut out);
    out
}

/// Truncation to degree `max_degree` of (1 - <xi, tau>)^{-s} as a series in
/// xi, via the binomial series and the multinomial expansion of <xi, tau>^k.
///
/// The degree-k scalar coefficient is Gamma(s+k) / (Gamma(s) k!), computed by
/// recurrence; only indices supported on the nonzero coordinates of tau are
/// generated, so on-axis kernels stay O(K) sparse in any dimension.
pub fn kernel_series(tau: &BallPoint, s: f64, max_degree: u32) -> Result<HoloSeries> {
    if s <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "kernel exponent s = {s} must be positive"
        )));
    }
    let n = tau.dim();
    let support: Vec<usize> = (0..n)
        .filter(|&i| tau.coords()[i] != Complex64::new(0.0, 0.0))
        .collect();
    let tau_conj: Vec<Complex64> = tau.coords().iter().map(|c| c.conj()).collect();

    let mut out = HoloSeries::zero(n, max_degree);
    let mut binom = 1.0; // Gamma(s+k) / (Gamma(s) k!)
    for k in 0..=max_degree {
        if k > 0 {
            binom *= (s + (k - 1) as f64) / k as f64;
        }
        for m in compositions_on_support(n, k, &support) {
            let coeff = binom * m.multinomial() * m.monomial(&tau_conj);
            if coeff != Complex64::new(0.0, 0.0) {
                out.add_term(m, coeff)?;
            }
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct SeriesTermFile {
    m: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesFile {
    dim: usize,
    max_degree: u32,
    terms: Vec<SeriesTermFile>,
}

impl HoloSeries {
    pub fn from_json_str(s: &str) -> Result<HoloSeries> {
        let file: SeriesFile = serde_json::from_str(s)?;
        if file.dim == 0 {
            return Err(Error::Parse("series dim must be positive".into()));
        }
        let mut out = HoloSeries::zero(file.dim, file.max_degree);
        let mut seen = std::collections::BTreeSet::new();
        for t in &file.terms {
            let m = MultiIndex::new(t.m.clone());
            if m.len() != file.dim {
                return Err(Error::Parse(format!(
                    "term index {m} has length {} but dim is {}",
                    m.len(),
                    file.dim
                )));
            }
            if m.order() > file.max_degree {
                return Err(Error::Parse(format!(
                    "term index {m} exceeds max_degree {}",
                    file.max_degree
                )));
            }
            if !seen.insert(m.clone()) {
                return Err(Error::Parse(format!("duplicate index {m}")));
            }
            out.insert(m, Complex64::new(t.re, t.im))?;
        }
        Ok(out)
    }

    pub fn to_json_string(&self) -> String {
        let file = SeriesFile {
            dim: self.dim,
            max_degree: self.max_degree,
            terms: self
                .coeffs
                .iter()
                .map(|(m, c)| SeriesTermFile {
                    m: m.components().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("series serialization cannot fail")
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<HoloSeries> {
        let text = std::fs::read_to_string(path)?;
        HoloSeries::from_json_str(&text)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}
