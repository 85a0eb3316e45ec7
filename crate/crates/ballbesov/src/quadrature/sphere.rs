//! Quadrature on the unit sphere of C^n (real dimension 2n-1), normalized so
//! the total measure is 1, plus the exact monomial integral it is checked
//! against.
//!
//! The deterministic rule is a product construction in the coordinates
//! zeta_j = e^{i theta_j} sqrt(t_j): equally spaced angles on each circle
//! factor and Gauss-Legendre points for the simplex variables t (via the
//! stick-breaking map, whose polynomial Jacobian is folded into the weights).
//! With 2d+1 angles per coordinate and enough simplex points the rule is
//! exact for zeta^m conj(zeta)^l whenever |m|, |l| <= d. Angle counts can be
//! set per coordinate, which keeps node counts reasonable for integrands
//! whose phase content concentrates on one axis.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss::gauss_legendre_on;
use crate::series::MultiIndex;

/// Construction recipe of a sphere rule (also its JSON descriptor).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SphereSpec {
    /// Product rule exact for monomials of bidegree up to `degree`.
    Exact { degree: u32 },
    /// Product rule with explicit per-coordinate angle counts.
    Product {
        angles: Vec<usize>,
        simplex_points: usize,
    },
    /// Seeded Monte Carlo with `N` uniform points.
    Mc {
        #[serde(rename = "N")]
        n: usize,
        seed: u64,
    },
}

/// Nodes and weights on the unit sphere; weights are positive and sum to 1.
#[derive(Clone, Debug)]
pub struct SphereRule {
    dim: usize,
    /// Flat node storage, stride `dim`.
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    spec: SphereSpec,
}

impl SphereRule {
    /// Deterministic rule integrating zeta^m conj(zeta)^l exactly for
    /// |m|, |l| <= degree.
    pub fn exact(dim: usize, degree: u32) -> Result<SphereRule> {
        let angles = vec![2 * degree as usize + 1; dim];
        let simplex = ((degree as usize + dim).div_ceil(2)).max(1);
        let mut rule = SphereRule::product(dim, angles, simplex)?;
        rule.spec = SphereSpec::Exact { degree };
        Ok(rule)
    }

    /// Product rule with explicit angle counts (one per coordinate).
    pub fn product(dim: usize, angles: Vec<usize>, simplex_points: usize) -> Result<SphereRule> {
        if dim == 0 {
            return Err(Error::InvalidParameter("sphere dimension must be positive".into()));
        }
        if angles.len() != dim {
            return Err(Error::DimensionMismatch {
                left: angles.len(),
                right: dim,
            });
        }
        if angles.iter().any(|&m| m == 0) || (dim > 1 && simplex_points == 0) {
            return Err(Error::InvalidParameter("sphere rule needs nodes on every factor".into()));
        }
        let spec = SphereSpec::Product {
            angles: angles.clone(),
            simplex_points,
        };

        // Simplex part: t_1 = u_1, t_j = u_j prod_{i<j}(1-u_i), t_n = prod(1-u_i),
        // with uniform simplex density (n-1)! prod_j (1-u_j)^{n-1-j}.
        let mut simplex_nodes: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
        for axis in 0..dim.saturating_sub(1) {
            let (u, w) = gauss_legendre_on(simplex_points, 0.0, 1.0);
            let power = (dim - 2 - axis) as i32;
            let mut next = Vec::with_capacity(simplex_nodes.len() * simplex_points);
            for (stick, weight) in &simplex_nodes {
                for (ui, wi) in u.iter().zip(&w) {
                    let mut s = stick.clone();
                    s.push(*ui);
                    next.push((s, weight * wi * (1.0 - ui).powi(power)));
                }
            }
            simplex_nodes = next;
        }
        let factorial: f64 = (1..dim).map(|k| k as f64).product();

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut angle_index = vec![0usize; dim];
        loop {
            // torus point for the current angle combination
            let phases: Vec<Complex64> = (0..dim)
                .map(|j| {
                    let theta =
                        2.0 * std::f64::consts::PI * angle_index[j] as f64 / angles[j] as f64;
                    Complex64::from_polar(1.0, theta)
                })
                .collect();
            let torus_weight: f64 = 1.0 / angles.iter().map(|&m| m as f64).product::<f64>();

            for (stick, sw) in &simplex_nodes {
                // radii from stick-breaking
                let mut t = Vec::with_capacity(dim);
                let mut rest = 1.0;
                for &u in stick {
                    t.push(u * rest);
                    rest *= 1.0 - u;
                }
                t.push(rest);

                let mut node: Vec<Complex64> = phases
                    .iter()
                    .zip(&t)
                    .map(|(ph, ti)| ph * ti.sqrt())
                    .collect();
                // renormalize against rounding in the stick products
                let norm = node.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in &mut node {
                    *z /= norm;
                }
                nodes.extend_from_slice(&node);
                weights.push(torus_weight * sw * factorial);
            }

            // advance the mixed-radix angle counter
            let mut j = 0;
            loop {
                if j == dim {
                    break;
                }
                angle_index[j] += 1;
                if angle_index[j] < angles[j] {
                    break;
                }
                angle_index[j] = 0;
                j += 1;
            }
            if j == dim {
                break;
            }
        }

        let rule = SphereRule {
            dim,
            nodes,
            weights,
            spec,
        };
        rule.validate()?;
        Ok(rule)
    }

    /// Uniform Monte Carlo nodes from normalized complex Gaussian vectors.
    pub fn monte_carlo(dim: usize, samples: usize, seed: u64) -> Result<SphereRule> {
        if dim == 0 {
            return Err(Error::InvalidParameter("sphere dimension must be positive".into()));
        }
        if samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "monte carlo sphere rule needs at least 2 samples, got {samples}"
            )));
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut nodes = Vec::with_capacity(samples * dim);
        for _ in 0..samples {
            nodes.extend_from_slice(&gaussian_sphere_point(dim, &mut rng));
        }
        let rule = SphereRule {
            dim,
            nodes,
            weights: vec![1.0 / samples as f64; samples],
            spec: SphereSpec::Mc { n: samples, seed },
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn from_spec(dim: usize, spec: &SphereSpec) -> Result<SphereRule> {
        match spec {
            SphereSpec::Exact { degree } => SphereRule::exact(dim, *degree),
            SphereSpec::Product {
                angles,
                simplex_points,
            } => SphereRule::product(dim, angles.clone(), *simplex_points),
            SphereSpec::Mc { n, seed } => SphereRule::monte_carlo(dim, *n, *seed),
        }
    }

    fn validate(&self) -> Result<()> {
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NonFinite(format!(
                "sphere weights sum to {total}, not 1"
            )));
        }
        for i in 0..self.len() {
            let norm2: f64 = self.node(i).iter().map(|z| z.norm_sqr()).sum();
            if (norm2.sqrt() - 1.0).abs() > 1e-14 {
                return Err(Error::NonFinite(format!(
                    "sphere node {i} has norm {}",
                    norm2.sqrt()
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[Complex64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn spec(&self) -> &SphereSpec {
        &self.spec
    }

    pub fn descriptor(&self) -> serde_json::Value {
        serde_json::to_value(&self.spec).expect("sphere spec serializes")
    }

    /// Weighted sum of `f` over the nodes (the surface integral).
    pub fn integrate(&self, mut f: impl FnMut(&[Complex64]) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.len() {
            acc += self.weights[i] * f(self.node(i));
        }
        acc
    }
}

fn gaussian_sphere_point(dim: usize, rng: &mut ChaCha12Rng) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for z in &mut v {
                *z /= norm;
            }
            return v;
        }
    }
}

/// Exact surface integral of zeta^m conj(zeta)^l over the normalized sphere:
/// zero unless m = l, in which case it equals (n-1)! m! / (n-1+|m|)!.
///
/// Evaluated as an interleaved product of ratios <= 1, so it neither
/// overflows nor loses more than |m| ulps. Validated against
/// [`monte_carlo_sphere`] in the test suite before being trusted as the
/// oracle of record.
pub fn sphere_monomial_integral(m: &MultiIndex, l: &MultiIndex) -> Result<f64> {
    if m.len() != l.len() {
        return Err(Error::DimensionMismatch {
            left: m.len(),
            right: l.len(),
        });
    }
    if m != l {
        return Ok(0.0);
    }
    let n = m.len();
    let k = m.order();
    // m! / (n (n+1) ... (n+k-1))
    let mut value = 1.0;
    let mut denom = n as f64;
    for &mi in m.components() {
        for j in 1..=mi {
            value *= j as f64 / denom;
            denom += 1.0;
        }
    }
    debug_assert_eq!(denom, n as f64 + k as f64);
    Ok(value)
}

/// Monte Carlo surface integral: mean and standard error over `samples`
/// uniform points, deterministic for a given seed.
pub fn monte_carlo_sphere(
    dim: usize,
    f: impl Fn(&[Complex64]) -> Complex64,
    samples: usize,
    seed: u64,
) -> Result<(Complex64, f64)> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "monte carlo needs at least 2 samples, got {samples}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0; // of |f|^2, for the variance
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let point = gaussian_sphere_point(dim, &mut rng);
        let v = f(&point);
        sum += v;
        sum_sq += v.norm_sqr();
        values.push(v);
    }
    let nf = samples as f64;
    let mean = sum / nf;
    // sample variance of the complex values around the mean
    let var = (sum_sq - nf * mean.norm_sqr()).max(0.0) / (nf - 1.0);
    let stderr = (var / nf).sqrt();
    let _ = values;
    Ok((mean, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_integral_examples() {
        let zero = MultiIndex::zero(3);
        assert_eq!(sphere_monomial_integral(&zero, &zero).unwrap(), 1.0);

        let m = MultiIndex::new(vec![1, 0]);
        let l = MultiIndex::new(vec![0, 1]);
        assert_eq!(sphere_monomial_integral(&m, &l).unwrap(), 0.0);

        for n in 1..=4usize {
            let e1 = MultiIndex::unit(n, 0);
            let got = sphere_monomial_integral(&e1, &e1).unwrap();
            assert!((got - 1.0 / n as f64).abs() < 1e-15);
        }

        assert!(sphere_monomial_integral(&zero, &MultiIndex::zero(2)).is_err());
    }

    #[test]
    fn product_rule_reproduces_monomial_integrals() {
        for n in 1..=3usize {
            let degree = 4;
            let rule = SphereRule::exact(n, degree).unwrap();
            // all diagonal and a few off-diagonal pairs up to the degree
            let indices = all_indices(n, degree);
            for m in &indices {
                for l in &indices {
                    let exact = sphere_monomial_integral(m, l).unwrap();
                    let got = rule.integrate(|z| m.monomial(z) * l.monomial(z).conj());
                    assert!(
                        (got.re - exact).abs() < 1e-13 && got.im.abs() < 1e-13,
                        "n={n} m={m} l={l}: got {got}, exact {exact}"
                    );
                }
            }
        }
    }

    fn all_indices(n: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                for v in 0..=left {
                    cur[pos] = v;
                    out.push(MultiIndex::new(cur.clone()));
                }
                cur[pos] = 0;
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(cur, pos + 1, left - v, out);
            }
            cur[pos] = 0;
        }
        rec(&mut cur, 0, degree, &mut out);
        out
    }

    #[test]
    fn monte_carlo_examples() {
        // constant: estimate 1, stderr 0
        let (est, se) = monte_carlo_sphere(2, |_| c(1.0, 0.0), 1000, 7).unwrap();
        assert_eq!(est, c(1.0, 0.0));
        assert!(se < 1e-15);

        // |zeta_1|^2 over S^3 has mean 1/2
        let (est, se) =
            monte_carlo_sphere(2, |z| c(z[0].norm_sqr(), 0.0), 1_000_000, 42).unwrap();
        assert!((est.re - 0.5).abs() <= 3.0 * se, "est {est}, se {se}");

        // odd symmetry: zeta_1 integrates to 0
        let (est, se) = monte_carlo_sphere(2, |z| z[0], 100_000, 11).unwrap();
        assert!(est.norm() <= 3.0 * se);

        assert!(monte_carlo_sphere(2, |_| c(0.0, 0.0), 1, 0).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_sphere(3, |z| z[1] * z[2].conj(), 5000, 99).unwrap();
        let b = monte_carlo_sphere(3, |z| z[1] * z[2].conj(), 5000, 99).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn rule_invariants() {
        for rule in [
            SphereRule::exact(2, 6).unwrap(),
            SphereRule::monte_carlo(3, 500, 4).unwrap(),
            SphereRule::product(2, vec![9, 3], 5).unwrap(),
        ] {
            let total: f64 = (0..rule.len()).map(|i| rule.weight(i)).sum();
            assert!((total - 1.0).abs() < 1e-12);
            for i in 0..rule.len() {
                let norm: f64 = rule.node(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sphere_spec_json() {
        let spec: SphereSpec = serde_json::from_str(r#"{"kind":"mc","N":1000,"seed":5}"#).unwrap();
        assert_eq!(
            spec,
            SphereSpec::Mc {
                n: 1000,
                seed: 5
            }
        );
        let spec: SphereSpec = serde_json::from_str(r#"{"kind":"exact","degree":8}"#).unwrap();
        assert_eq!(spec, SphereSpec::Exact { degree: 8 });
    }
}
