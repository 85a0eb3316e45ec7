//! Fractional differential D^alpha, its inverse, and the radial derivative R.
//!
//! All three are diagonal in the homogeneous expansion: the degree-k block of
//! D^alpha f is scaled by (k+1)^alpha, the block of R f by k. D = D^1
//! satisfies D = I + R and the product rule D(fg) = g Df + f Dg - fg.

use crate::series::HoloSeries;
use crate::{Error, Result};

/// D^alpha f: scales the degree-k block by (k+1)^alpha.
///
/// (k+1)^alpha is computed as exp(alpha ln(k+1)), once per degree block.
pub fn frac_derivative(f: &HoloSeries, alpha: f64) -> HoloSeries {
    if alpha == 0.0 {
        return f.clone();
    }
    f.scale_by_degree(|k| (alpha * ((k + 1) as f64).ln()).exp())
}

/// D^{-alpha} f, the inverse of `frac_derivative` at equal truncation.
pub fn frac_integral(f: &HoloSeries, alpha: f64) -> HoloSeries {
    frac_derivative(f, -alpha)
}

/// R f = sum_k k f_k: annihilates constants, satisfies Df = f + Rf.
pub fn radial_derivative(f: &HoloSeries) -> HoloSeries {
    f.scale_by_degree(|k| k as f64)
}

/// Residual of the product rule D(fg) = g Df + f Dg - fg at truncation `k`,
/// as the largest coefficient deviation.
///
/// Requires deg f + deg g <= k so the identity is not clipped.
pub fn product_rule_residual(f: &HoloSeries, g: &HoloSeries, k: u32) -> Result<f64> {
    if f.degree() + g.degree() > k {
        return Err(Error::Truncation(format!(
            "product rule needs truncation >= deg f + deg g = {}, got {k}",
            f.degree() + g.degree()
        )));
    }
    let fg = f.multiply(g, k)?;
    let lhs = frac_derivative(&fg, 1.0);
    let rhs = g
        .multiply(&frac_derivative(f, 1.0), k)?
        .plus(&f.multiply(&frac_derivative(g, 1.0), k)?)?
        .minus(&fg)?;
    lhs.max_coeff_distance(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{kernel_series, BallPoint, MultiIndex};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn term(m: Vec<u32>, re: f64) -> (MultiIndex, Complex64) {
        (MultiIndex::new(m), c(re, 0.0))
    }

    #[test]
    fn frac_derivative_examples() {
        let one = HoloSeries::constant(2, c(1.0, 0.0), 4);
        for alpha in [0.0, 0.5, 1.0, 3.7] {
            let d = frac_derivative(&one, alpha);
            assert_eq!(d.coeff(&MultiIndex::zero(2)), c(1.0, 0.0));
        }

        // f = z1 z2 (k=2), alpha=1: block scaled by 3
        let f = HoloSeries::from_terms(2, 4, vec![term(vec![1, 1], 1.0)]).unwrap();
        let d = frac_derivative(&f, 1.0);
        assert!((d.coeff(&MultiIndex::new(vec![1, 1])) - c(3.0, 0.0)).norm() < 1e-15);

        // f = z1, alpha = 0.5: sqrt(2) z1
        let f = HoloSeries::from_terms(1, 2, vec![term(vec![1], 1.0)]).unwrap();
        let d = frac_derivative(&f, 0.5);
        assert!((d.coeff(&MultiIndex::new(vec![1])) - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn frac_integral_examples() {
        // inverse law on f = 1 + z1 + z1^2
        let f = HoloSeries::from_terms(
            1,
            2,
            vec![term(vec![0], 1.0), term(vec![1], 1.0), term(vec![2], 1.0)],
        )
        .unwrap();
        for alpha in [0.5, 1.0, 2.0, 3.7, 7.0] {
            let back = frac_integral(&frac_derivative(&f, alpha), alpha);
            assert!(back.max_coeff_distance(&f).unwrap() <= 1e-12);
        }

        // f = 4 z1, alpha = 2: (1+1)^{-2} * 4 = 1
        let f = HoloSeries::from_terms(1, 1, vec![term(vec![1], 4.0)]).unwrap();
        let g = frac_integral(&f, 2.0);
        assert!((g.coeff(&MultiIndex::new(vec![1])) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn radial_derivative_examples() {
        let one = HoloSeries::constant(1, c(1.0, 0.0), 3);
        assert!(radial_derivative(&one).is_zero());

        let z1 = HoloSeries::from_terms(1, 3, vec![term(vec![1], 1.0)]).unwrap();
        assert_eq!(
            radial_derivative(&z1).max_coeff_distance(&z1).unwrap(),
            0.0
        );

        let f = HoloSeries::from_terms(2, 3, vec![term(vec![2, 1], 1.0)]).unwrap();
        let r = radial_derivative(&f);
        assert_eq!(r.coeff(&MultiIndex::new(vec![2, 1])), c(3.0, 0.0));
    }

    #[test]
    fn d_equals_identity_plus_r() {
        let f = HoloSeries::from_terms(
            2,
            5,
            vec![
                term(vec![0, 0], 2.0),
                term(vec![1, 0], -1.0),
                term(vec![2, 3], 0.5),
            ],
        )
        .unwrap();
        let lhs = frac_derivative(&f, 1.0);
        let rhs = f.plus(&radial_derivative(&f)).unwrap();
        assert_eq!(lhs.max_coeff_distance(&rhs).unwrap(), 0.0);
    }

    #[test]
    fn semigroup_property() {
        let f = HoloSeries::from_terms(
            1,
            6,
            vec![term(vec![0], 1.0), term(vec![3], -2.0), term(vec![6], 0.25)],
        )
        .unwrap();
        for (a, b) in [(0.5, 0.25), (1.0, 1.0), (2.0, -0.5), (1.5, 1.0)] {
            let lhs = frac_derivative(&frac_derivative(&f, a), b);
            let rhs = frac_derivative(&f, a + b);
            assert!(lhs.max_coeff_distance(&rhs).unwrap() < 1e-12);
        }
    }

    #[test]
    fn product_rule_hand_example() {
        // f = g = z1: D(z1^2) = 3 z1^2 and 2 z1^2 + 2 z1^2 - z1^2 = 3 z1^2
        let z1 = HoloSeries::from_terms(1, 1, vec![term(vec![1], 1.0)]).unwrap();
        assert!(product_rule_residual(&z1, &z1, 2).unwrap() <= 1e-15);

        // constant f: identity reduces to c Dg = gc + c Dg - cg
        let cst = HoloSeries::constant(1, c(2.5, -1.0), 0);
        let g = HoloSeries::from_terms(1, 3, vec![term(vec![2], 1.0), term(vec![3], -4.0)]).unwrap();
        assert!(product_rule_residual(&cst, &g, 3).unwrap() <= 1e-15);

        // truncation too small is rejected rather than reported as failure
        assert!(product_rule_residual(&g, &g, 5).is_err());
    }

    #[test]
    fn leibniz_for_radial_derivative() {
        let f = HoloSeries::from_terms(2, 2, vec![term(vec![1, 0], 1.5), term(vec![0, 2], -1.0)])
            .unwrap();
        let g = HoloSeries::from_terms(2, 2, vec![term(vec![0, 1], 2.0), term(vec![2, 0], 0.5)])
            .unwrap();
        let k = 4;
        let lhs = radial_derivative(&f.multiply(&g, k).unwrap());
        let rhs = g
            .multiply(&radial_derivative(&f), k)
            .unwrap()
            .plus(&f.multiply(&radial_derivative(&g), k).unwrap())
            .unwrap();
        assert_eq!(lhs.max_coeff_distance(&rhs).unwrap(), 0.0);
    }

    #[test]
    fn kernel_derivative_growth_bounded() {
        // |D^m kernel| / (1 - <z,zeta>)^{-alpha-m} stays bounded on a radial
        // grid up to |z| = 0.99; the observed constant is printed.
        let alpha = 1.5;
        let zeta = BallPoint::on_axis(1, 0.999_999).unwrap();
        // high truncation so the tail is immaterial at r = 0.99
        let kernel = kernel_series(&zeta, alpha, 4000).unwrap();
        for m in [1u32, 2] {
            let dm = frac_derivative(&kernel, m as f64);
            let mut sup = 0.0f64;
            for j in 1..=40 {
                let r = 0.99 * j as f64 / 40.0;
                let z = BallPoint::on_axis(1, r).unwrap();
                let num = dm.evaluate(&z).unwrap().norm();
                let den = (1.0 - r * zeta.coords()[0].re).powf(-(alpha + m as f64));
                sup = sup.max(num / den);
            }
            // constant recorded; generous envelope asserts boundedness only
            println!("kernel derivative growth m={m}: sup ratio = {sup:.6}");
            assert!(sup.is_finite() && sup < 100.0);
        }
    }
}
