//! Gauss-Legendre nodes and weights by Newton iteration on the Legendre
//! recurrence.

use std::f64::consts::PI;

/// Nodes (ascending) and weights on [-1, 1]; exact for polynomials of
/// degree <= 2q - 1.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1);
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let nf = q as f64;
    for i in 0..q.div_ceil(2) {
        // Tricomi initial guess for the i-th root from the top
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_q and P'_q at x
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=q {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    (nodes, weights)
}

/// Nodes and weights mapped to [a, b].
pub fn gauss_legendre_on(q: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(q);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for q in [1usize, 2, 3, 5, 8, 16, 32] {
            let (x, w) = gauss_legendre(q);
            assert_eq!(x.len(), q);
            // exactness on monomials up to degree 2q-1
            for d in 0..(2 * q) {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(d as i32)).sum();
                let expect = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
                assert!(
                    (got - expect).abs() < 1e-13,
                    "q={q} degree={d}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn mapped_interval() {
        let (x, w) = gauss_legendre_on(12, 0.25, 0.75);
        let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi).sum();
        let expect = (0.75f64.powi(3) - 0.25f64.powi(3)) / 3.0;
        assert!((got - expect).abs() < 1e-15);
        assert!(x.iter().all(|&v| (0.25..=0.75).contains(&v)));
    }
}
