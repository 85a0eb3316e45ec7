//! The Bergman-type integral operator with conjugated symbol, the pointwise
//! multiplier M_h, and the reproducing transform they are built on.
//!
//! The operator maps f to
//! `int_B (1-|xi|^2)^alpha conj(h(xi)) f(xi) (1 - <z, xi>)^{-(n+alpha+1)} dnu(xi)`.
//! On polynomial data its action reduces to exact coefficient algebra through
//! the weighted monomial integrals (the exact path, the oracle of record).
//! The quadrature path evaluates the integral directly at chosen points and
//! is held to looser tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::frac_derivative;
use crate::error::{Error, Result};
use crate::quadrature::{
    ball_monomial_integral, integrate_ball, radial_beta_factor, sphere_monomial_integral, BallRule,
};
use crate::series::{inner_product, BallPoint, HoloSeries, MultiIndex};

/// Parameters of the integral operator: symbol h, weight exponent alpha,
/// kernel and output truncations.
#[derive(Clone, Debug)]
pub struct OperatorSpec {
    symbol: HoloSeries,
    alpha: f64,
    kernel_truncation: u32,
    output_truncation: u32,
}

impl OperatorSpec {
    pub fn new(
        symbol: HoloSeries,
        alpha: f64,
        kernel_truncation: u32,
        output_truncation: u32,
    ) -> Result<Self> {
        if alpha <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "operator weight exponent alpha = {alpha} must be > -1"
            )));
        }
        if kernel_truncation < output_truncation {
            return Err(Error::Truncation(format!(
                "kernel truncation {kernel_truncation} < requested output truncation {output_truncation}"
            )));
        }
        Ok(OperatorSpec {
            symbol,
            alpha,
            kernel_truncation,
            output_truncation,
        })
    }

    /// Default headroom: kernel expanded 10 degrees past the output.
    pub fn with_default_headroom(symbol: HoloSeries, alpha: f64, output: u32) -> Result<Self> {
        OperatorSpec::new(symbol, alpha, output + 10, output)
    }

    pub fn symbol(&self) -> &HoloSeries {
        &self.symbol
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kernel_truncation(&self) -> u32 {
        self.kernel_truncation
    }

    pub fn output_truncation(&self) -> u32 {
        self.output_truncation
    }

    /// Kernel exponent n + alpha + 1.
    pub fn kernel_exponent(&self) -> f64 {
        self.symbol.dim() as f64 + self.alpha + 1.0
    }

    pub fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha,
            "K_kernel": self.kernel_truncation,
            "K_out": self.output_truncation,
            "symbol_terms": self.symbol.num_terms(),
            "symbol_degree": self.symbol.degree(),
        })
    }
}

/// JSON form of an operator spec; `h` names a series file.
#[derive(Serialize, Deserialize)]
pub struct OperatorSpecFile {
    pub alpha: f64,
    pub h: String,
    #[serde(rename = "K_kernel")]
    pub k_kernel: u32,
    #[serde(rename = "K_out")]
    pub k_out: u32,
}

/// C(n, m) = Gamma(n+m+1) / (Gamma(n+1) Gamma(m+1)), the reproducing-kernel
/// normalizing constant, evaluated as an n-factor product.
pub fn bergman_constant(n: usize, m: f64) -> Result<f64> {
    if m <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "bergman constant needs m > -1, got {m}"
        )));
    }
    let mut value = 1.0;
    for j in 1..=n {
        value *= (m + j as f64) / j as f64;
    }
    Ok(value)
}

/// Degree-k coefficient of (1-w)^{-s}: Gamma(s+k) / (Gamma(s) k!).
fn kernel_coefficients(s: f64, max_k: u32) -> Vec<f64> {
    let mut c = Vec::with_capacity(max_k as usize + 1);
    c.push(1.0);
    for k in 1..=max_k {
        let prev = c[k as usize - 1];
        c.push(prev * (s + (k - 1) as f64) / k as f64);
    }
    c
}

/// Exact action of the operator on a polynomial f, as a series in z of
/// degree <= the spec's output truncation.
///
/// Coefficient formula: out[l] = c_{|l|}(s) (|l|!/l!) sum_a conj(h_a)
/// f_{a+l} B(a+l, alpha), with B the weighted ball monomial integral and
/// s the kernel exponent. Conjugate-linear in h, linear in f.
pub fn apply_t_exact(spec: &OperatorSpec, f: &HoloSeries) -> Result<HoloSeries> {
    let n = f.dim();
    if spec.symbol.dim() != n {
        return Err(Error::DimensionMismatch {
            left: spec.symbol.dim(),
            right: n,
        });
    }
    let s = spec.kernel_exponent();
    let coeffs = kernel_coefficients(s, spec.output_truncation);
    let mut out = HoloSeries::zero(n, spec.output_truncation);
    for (a, ha) in spec.symbol.terms() {
        for (b, fb) in f.terms() {
            let Some(l) = b.checked_sub(a) else { continue };
            let k = l.order();
            if k > spec.output_truncation {
                continue;
            }
            let weight = ball_monomial_integral(b, b, spec.alpha)?;
            let contribution = ha.conj() * fb * weight * coeffs[k as usize] * l.multinomial();
            out.add_term(l, contribution)?;
        }
    }
    Ok(out)
}

/// Direct quadrature of the defining integral at each z.
///
/// Points must stay inside |z| <= max_radius (default 0.95) so the kernel is
/// resolvable by the rule.
pub fn apply_t_quad(
    spec: &OperatorSpec,
    f: &HoloSeries,
    z_points: &[BallPoint],
    rule: &BallRule,
    max_radius: Option<f64>,
) -> Result<Vec<Complex64>> {
    let n = f.dim();
    if spec.symbol.dim() != n {
        return Err(Error::DimensionMismatch {
            left: spec.symbol.dim(),
            right: n,
        });
    }
    if rule.dim() != n {
        return Err(Error::DimensionMismatch {
            left: rule.dim(),
            right: n,
        });
    }
    let bound = max_radius.unwrap_or(0.95);
    let s = spec.kernel_exponent();
    let mut out = Vec::with_capacity(z_points.len());
    for z in z_points {
        if z.norm() > bound {
            return Err(Error::Precondition(format!(
                "|z| = {} exceeds the quadrature resolution bound {bound}",
                z.norm()
            )));
        }
        let v = integrate_ball(rule, |sample| {
            let hv = match spec.symbol.evaluate_at(sample.coords) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let fv = match f.evaluate_at(sample.coords) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let ip = match inner_product(z.coords(), sample.coords) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let kernel = (Complex64::new(1.0, 0.0) - ip).powf(-s);
            sample.one_minus_r_sq().powf(spec.alpha) * hv.conj() * fv * kernel
        })?;
        out.push(v);
    }
    Ok(out)
}

/// The multiplier M_h f = h f, truncated to degree `max_degree`.
pub fn apply_m(h: &HoloSeries, f: &HoloSeries, max_degree: u32) -> Result<HoloSeries> {
    h.multiply(f, max_degree)
}

/// The scalar that multiplies each monomial in the reproducing identity:
/// C(n,m) c_{|mu|}(n+1+m) (|mu|!/mu!) B(mu, m). Equal to 1 in exact
/// arithmetic for every mu and m > -1; evaluating it is pure Gamma
/// arithmetic with integer-count products.
pub fn reproducing_termwise_factor(n: usize, m: f64, mu: &MultiIndex) -> Result<f64> {
    if m <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "reproducing exponent m = {m} must be > -1"
        )));
    }
    let k = mu.order();
    let s = n as f64 + 1.0 + m;
    // c_k(s) by recurrence
    let mut ck = 1.0;
    for j in 0..k {
        ck *= (s + j as f64) / (j as f64 + 1.0);
    }
    let ball = radial_beta_factor(n, k, m) * sphere_monomial_integral(mu, mu)?;
    Ok(bergman_constant(n, m)? * ck * mu.multinomial() * ball)
}

/// Exact-path reproducing transform: C(n,m) T^{m}_{h==1}(Df) as a series.
/// Agrees with Df up to floating-point rounding.
pub fn reproducing_transform(f: &HoloSeries, m: f64) -> Result<HoloSeries> {
    let n = f.dim();
    let df = frac_derivative(f, 1.0);
    let degree = df.degree();
    let spec = OperatorSpec::new(
        HoloSeries::constant(n, Complex64::new(1.0, 0.0), 0),
        m,
        degree,
        degree,
    )?;
    Ok(apply_t_exact(&spec, &df)?.scaled(Complex64::new(bergman_constant(n, m)?, 0.0)))
}

/// Quadrature-path reproducing values C(n,m) int (1-|zeta|^2)^m Df(zeta)
/// (1 - <z, zeta>)^{-(n+1+m)} dnu at each z.
pub fn reproducing_quad(
    f: &HoloSeries,
    m: f64,
    z_points: &[BallPoint],
    rule: &BallRule,
    max_radius: Option<f64>,
) -> Result<Vec<Complex64>> {
    let n = f.dim();
    let df = frac_derivative(f, 1.0);
    let spec = OperatorSpec::new(
        HoloSeries::constant(n, Complex64::new(1.0, 0.0), 0),
        m,
        df.max_degree(),
        df.max_degree(),
    )?;
    let c = bergman_constant(n, m)?;
    Ok(apply_t_quad(&spec, &df, z_points, rule, max_radius)?
        .into_iter()
        .map(|v| v * c)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::SphereRule;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one(n: usize) -> HoloSeries {
        HoloSeries::constant(n, c(1.0, 0.0), 0)
    }

    #[test]
    fn bergman_constant_examples() {
        assert_eq!(bergman_constant(1, 0.0).unwrap(), 1.0);
        assert_eq!(bergman_constant(1, 1.0).unwrap(), 2.0);
        assert_eq!(bergman_constant(2, 0.0).unwrap(), 1.0);
        // C(2, 1.5) = Gamma(4.5)/(Gamma(3) Gamma(2.5)) = (2.5)(3.5)/2
        assert!((bergman_constant(2, 1.5).unwrap() - 2.5 * 3.5 / 2.0).abs() < 1e-14);
        assert!(bergman_constant(1, -1.0).is_err());
    }

    #[test]
    fn t_exact_on_constants() {
        // h == 1, f == 1: unnormalized output is 1/C(n, alpha)
        for n in 1..=3usize {
            for alpha in [0.0, 1.0, 2.5] {
                let spec = OperatorSpec::new(one(n), alpha, 5, 5).unwrap();
                let out = apply_t_exact(&spec, &one(n)).unwrap();
                let expect = 1.0 / bergman_constant(n, alpha).unwrap();
                assert_eq!(out.num_terms(), 1);
                assert!(
                    (out.coeff(&MultiIndex::zero(n)) - c(expect, 0.0)).norm() < 1e-14,
                    "n={n} alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn t_exact_single_term_contraction() {
        // h == 1, f = z1: output proportional to z1 with coefficient
        // c_1(s) * B((1), alpha)
        let n = 2;
        let alpha = 1.0;
        let f = HoloSeries::monomial(n, MultiIndex::unit(n, 0), c(1.0, 0.0), 3).unwrap();
        let spec = OperatorSpec::new(one(n), alpha, 3, 3).unwrap();
        let out = apply_t_exact(&spec, &f).unwrap();
        let s = n as f64 + alpha + 1.0;
        let expect = s * ball_monomial_integral(&MultiIndex::unit(n, 0), &MultiIndex::unit(n, 0), alpha)
            .unwrap();
        assert_eq!(out.num_terms(), 1);
        assert!((out.coeff(&MultiIndex::unit(n, 0)) - c(expect, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn t_exact_orthogonality_annihilates() {
        // h = z1, f == 1: no holomorphic degree pairs with conj(xi_1)
        let n = 2;
        let h = HoloSeries::monomial(n, MultiIndex::unit(n, 0), c(1.0, 0.0), 1).unwrap();
        let spec = OperatorSpec::new(h, 0.5, 4, 4).unwrap();
        let out = apply_t_exact(&spec, &one(n)).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn t_is_linear_in_f_conjugate_linear_in_h() {
        let n = 1;
        let f = HoloSeries::from_terms(
            1,
            3,
            vec![
                (MultiIndex::new(vec![1]), c(1.0, 1.0)),
                (MultiIndex::new(vec![3]), c(0.5, 0.0)),
            ],
        )
        .unwrap();
        let h = HoloSeries::from_terms(
            1,
            1,
            vec![
                (MultiIndex::new(vec![0]), c(0.5, 0.25)),
                (MultiIndex::new(vec![1]), c(0.0, -1.0)),
            ],
        )
        .unwrap();
        let lam = c(2.0, -3.0);

        let spec = OperatorSpec::new(h.clone(), 0.0, 4, 4).unwrap();
        let spec_scaled_h = OperatorSpec::new(h.scaled(lam), 0.0, 4, 4).unwrap();

        let base = apply_t_exact(&spec, &f).unwrap();
        let scaled_f = apply_t_exact(&spec, &f.scaled(lam)).unwrap();
        assert!(scaled_f
            .max_coeff_distance(&base.scaled(lam))
            .unwrap()
            < 1e-14);

        let scaled_h = apply_t_exact(&spec_scaled_h, &f).unwrap();
        assert!(scaled_h
            .max_coeff_distance(&base.scaled(lam.conj()))
            .unwrap()
            < 1e-14);
    }

    #[test]
    fn t_quad_at_origin() {
        // h == 1, f == 1, n=1, alpha=0, z=0: plain volume integral = 1
        let spec = OperatorSpec::new(one(1), 0.0, 4, 4).unwrap();
        let rule = BallRule::smooth(1, 16, 12, SphereRule::exact(1, 8).unwrap()).unwrap();
        let vals = apply_t_quad(&spec, &one(1), &[BallPoint::origin(1)], &rule, None).unwrap();
        assert!((vals[0] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn t_quad_matches_exact_path() {
        // h = 1 + z1, f = z1^2, n=2, alpha=1, z=(0.3, 0.2i)
        let n = 2;
        let h = HoloSeries::from_terms(
            n,
            1,
            vec![
                (MultiIndex::zero(n), c(1.0, 0.0)),
                (MultiIndex::unit(n, 0), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let f = HoloSeries::monomial(n, MultiIndex::new(vec![2, 0]), c(1.0, 0.0), 4).unwrap();
        let spec = OperatorSpec::new(h, 1.0, 6, 6).unwrap();
        let z = BallPoint::new(vec![c(0.3, 0.0), c(0.0, 0.2)]).unwrap();

        let exact_series = apply_t_exact(&spec, &f).unwrap();
        let exact = exact_series.evaluate(&z).unwrap();

        let rule =
            BallRule::build(n, 1.0, None, 18, 14, SphereRule::exact(n, 12).unwrap()).unwrap();
        let quad = apply_t_quad(&spec, &f, &[z], &rule, None).unwrap()[0];
        assert!(
            (quad - exact).norm() < 1e-6 * exact.norm().max(1e-12),
            "quad {quad} vs exact {exact}"
        );
    }

    #[test]
    fn t_quad_conjugate_linearity_doubling() {
        let spec1 = OperatorSpec::new(one(1), 0.0, 3, 3).unwrap();
        let spec2 = OperatorSpec::new(one(1).scaled(c(2.0, 0.0)), 0.0, 3, 3).unwrap();
        let f = HoloSeries::monomial(1, MultiIndex::new(vec![1]), c(1.0, -1.0), 3).unwrap();
        let rule = BallRule::smooth(1, 14, 10, SphereRule::exact(1, 6).unwrap()).unwrap();
        let z = BallPoint::on_axis(1, 0.4).unwrap();
        let a = apply_t_quad(&spec1, &f, &[z.clone()], &rule, None).unwrap()[0];
        let b = apply_t_quad(&spec2, &f, &[z], &rule, None).unwrap()[0];
        assert!((b - 2.0 * a).norm() < 1e-12);
    }

    #[test]
    fn t_quad_rejects_boundary_points() {
        let spec = OperatorSpec::new(one(1), 0.0, 3, 3).unwrap();
        let f = one(1);
        let rule = BallRule::smooth(1, 10, 8, SphereRule::exact(1, 4).unwrap()).unwrap();
        let z = BallPoint::on_axis(1, 0.99).unwrap();
        assert!(apply_t_quad(&spec, &f, &[z], &rule, None).is_err());
    }

    #[test]
    fn multiplier_examples() {
        let f = HoloSeries::from_terms(
            2,
            3,
            vec![
                (MultiIndex::zero(2), c(1.0, 2.0)),
                (MultiIndex::new(vec![1, 1]), c(-0.5, 0.0)),
            ],
        )
        .unwrap();
        // h == 1 is the identity
        let out = apply_m(&one(2), &f, 3).unwrap();
        assert_eq!(out.max_coeff_distance(&f).unwrap(), 0.0);

        // z1 * z2
        let h = HoloSeries::monomial(2, MultiIndex::unit(2, 0), c(1.0, 0.0), 1).unwrap();
        let g = HoloSeries::monomial(2, MultiIndex::unit(2, 1), c(1.0, 0.0), 1).unwrap();
        let prod = apply_m(&h, &g, 2).unwrap();
        assert_eq!(prod.coeff(&MultiIndex::new(vec![1, 1])), c(1.0, 0.0));

        // D(M_h f) = h Df + f Dh - h f, coefficient-exact
        let k = 6;
        let lhs = frac_derivative(&apply_m(&h, &f, k).unwrap(), 1.0);
        let rhs = apply_m(&h, &frac_derivative(&f, 1.0), k)
            .unwrap()
            .plus(&apply_m(&f, &frac_derivative(&h, 1.0), k).unwrap())
            .unwrap()
            .minus(&apply_m(&h, &f, k).unwrap())
            .unwrap();
        assert!(lhs.max_coeff_distance(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn termwise_factor_is_one() {
        for n in 1..=3usize {
            for m in [0.0, 1.0, 2.0, 5.0] {
                for k in 0..=20u32 {
                    // a few index shapes per degree
                    let shapes = index_shapes(n, k);
                    for mu in shapes {
                        let v = reproducing_termwise_factor(n, m, &mu).unwrap();
                        assert!(
                            (v - 1.0).abs() < 1e-12,
                            "n={n} m={m} mu={mu}: {v}"
                        );
                    }
                }
            }
        }
    }

    fn index_shapes(n: usize, k: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut c = vec![0u32; n];
        c[0] = k;
        out.push(MultiIndex::new(c.clone()));
        if n >= 2 && k >= 2 {
            c[0] = k / 2;
            c[1] = k - k / 2;
            out.push(MultiIndex::new(c.clone()));
        }
        if n >= 3 && k >= 3 {
            let a = k / 3;
            c[0] = a;
            c[1] = a;
            c[2] = k - 2 * a;
            out.push(MultiIndex::new(c));
        }
        out
    }

    #[test]
    fn reproducing_transform_fixes_df() {
        // constants reproduce exactly
        let f = HoloSeries::constant(2, c(2.0, -1.0), 0);
        let repro = reproducing_transform(&f, 1.0).unwrap();
        assert!(
            repro
                .max_coeff_distance(&frac_derivative(&f, 1.0))
                .unwrap()
                < 1e-10
        );

        // f = z1^2 + z2, n=2, m=2
        let f = HoloSeries::from_terms(
            2,
            2,
            vec![
                (MultiIndex::new(vec![2, 0]), c(1.0, 0.0)),
                (MultiIndex::new(vec![0, 1]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let repro = reproducing_transform(&f, 2.0).unwrap();
        let df = frac_derivative(&f, 1.0);
        assert!(repro.max_coeff_distance(&df).unwrap() < 1e-8);
    }

    #[test]
    fn reproducing_quad_path() {
        // n=1 at |z| <= 0.9 with a large-angle circle rule
        let f = HoloSeries::from_terms(
            1,
            3,
            vec![
                (MultiIndex::new(vec![0]), c(0.5, 0.0)),
                (MultiIndex::new(vec![2]), c(1.0, -0.5)),
            ],
        )
        .unwrap();
        let m = 2.0;
        let rule = BallRule::build(
            1,
            m,
            None,
            18,
            14,
            SphereRule::product(1, vec![420], 1).unwrap(),
        )
        .unwrap();
        let zs = vec![
            BallPoint::on_axis(1, 0.9).unwrap(),
            BallPoint::on_axis(1, -0.55).unwrap(),
            BallPoint::new(vec![c(0.4, 0.6)]).unwrap(),
        ];
        let got = reproducing_quad(&f, m, &zs, &rule, Some(0.92)).unwrap();
        let df = frac_derivative(&f, 1.0);
        for (z, v) in zs.iter().zip(got) {
            let want = df.evaluate(z).unwrap();
            assert!((v - want).norm() < 1e-5, "z={z:?}: {v} vs {want}");
        }
    }

    #[test]
    fn spec_validation() {
        assert!(OperatorSpec::new(one(1), -1.0, 4, 4).is_err());
        assert!(OperatorSpec::new(one(1), 0.0, 3, 4).is_err());
        let spec = OperatorSpec::with_default_headroom(one(1), 0.0, 4).unwrap();
        assert_eq!(spec.kernel_truncation(), 14);
        assert_eq!(spec.output_truncation(), 4);
    }
}
