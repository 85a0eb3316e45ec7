//! The per-lemma and per-theorem checkers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::calculus::{frac_derivative, product_rule_residual, radial_derivative};
use crate::error::{Error, Result};
use crate::norms::{besov_norm_with, norm_rule, NormOptions};
use crate::operators::{
    apply_t_exact, bergman_constant, reproducing_quad, reproducing_termwise_factor,
    reproducing_transform, OperatorSpec,
};
use crate::quadrature::{
    build_radial_rule, integrate_ball, integrate_radial, zonal_kernel_sphere_average, BallRule,
    SphereRule,
};
use crate::series::{inner_product, kernel_series, BallPoint, HoloSeries, MultiIndex};
use crate::validation::{CheckReport, Record};
use crate::weights::WeightS;

const ALGEBRA_TOL: f64 = 1e-12;
const INEQ_SLACK: f64 = 1e-6;

/// Lemma 5 product rule and D = I + R on seeded random polynomial pairs,
/// coefficient-exact.
pub fn check_lemma5_random(
    seed: u64,
    trials_per_dim: usize,
    dims: &[usize],
    max_degree: u32,
) -> Result<CheckReport> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    let mut sup = 0.0f64;
    for &n in dims {
        let mut worst_product = 0.0f64;
        let mut worst_dplus = 0.0f64;
        for _ in 0..trials_per_dim {
            let f = random_polynomial(&mut rng, n, max_degree);
            let g = random_polynomial(&mut rng, n, max_degree);
            let res = product_rule_residual(&f, &g, f.degree() + g.degree())?;
            worst_product = worst_product.max(res);

            let lhs = frac_derivative(&f, 1.0);
            let rhs = f.plus(&radial_derivative(&f))?;
            worst_dplus = worst_dplus.max(lhs.max_coeff_distance(&rhs)?);
        }
        records.push(Record::new(format!("n={n} product rule"), worst_product, ALGEBRA_TOL));
        records.push(Record::new(format!("n={n} D = I + R"), worst_dplus, ALGEBRA_TOL));
        sup = sup.max(worst_product).max(worst_dplus);
    }
    Ok(CheckReport {
        check_id: "lemma5".into(),
        criterion: format!(
            "max coefficient residual of D(fg) = g Df + f Dg - fg and D = I + R over {} random pairs per dim <= {ALGEBRA_TOL:e}",
            trials_per_dim
        ),
        pass: sup <= ALGEBRA_TOL,
        gated: true,
        sup_ratio: None,
        sup_residual: Some(sup),
        inputs: serde_json::json!({
            "dims": dims, "trials_per_dim": trials_per_dim, "max_degree": max_degree,
        }),
        records,
        provenance: serde_json::json!({ "seed": seed }),
    })
}

fn random_polynomial(rng: &mut ChaCha12Rng, dim: usize, max_degree: u32) -> HoloSeries {
    let mut f = HoloSeries::zero(dim, max_degree);
    let mut indices = Vec::new();
    enumerate_indices(dim, max_degree, &mut indices);
    for m in indices {
        let re = rng.gen_range(-1.0..1.0);
        let im = rng.gen_range(-1.0..1.0);
        f.insert(m, Complex64::new(re, im)).expect("index in range");
    }
    f
}

pub(crate) fn enumerate_indices(dim: usize, max_degree: u32, out: &mut Vec<MultiIndex>) {
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
    let mut cur = vec![0u32; dim];
    rec(&mut cur, 0, max_degree, out);
    out.sort();
}

/// Parameters for the Lemma 2 pointwise-bound check.
pub struct Lemma2Params<'a> {
    pub f: &'a HoloSeries,
    pub p: f64,
    pub weight: &'a WeightS,
    /// Integer kernel exponent m (hypothesis m > -n/p - beta_w/p).
    pub m: u32,
    /// On-axis |z| values.
    pub z_radii: Vec<f64>,
    pub rule: &'a BallRule,
    pub label: String,
}

/// |f(z)| against C(n,m) int (1-|zeta|^2)^m |Df| |1 - <z,zeta>|^{-(n+m)} dnu.
///
/// The pass budget (2^{n+m} - 1)/(n+m) comes from the elementary bound
/// |((1-w)^{-N} - 1)/w| <= (2^N - 1) |1-w|^{-N} on |w| <= 1 applied to the
/// collapsed radial integral of the reproducing formula; pass means bounded
/// by that constant, not <= 1.
pub fn check_lemma2(params: Lemma2Params<'_>) -> Result<CheckReport> {
    let n = params.f.dim();
    let hyp = params.weight.check_hypotheses(
        0.0,
        0.0,
        Some((n, params.p, params.m as f64)),
    );
    if hyp.pointwise_ok != Some(true) {
        return Err(Error::Precondition(format!(
            "lemma2 hypothesis m > -n/p - beta_w/p violated: m = {}, threshold = {:?}",
            params.m, hyp.pointwise_threshold
        )));
    }
    let budget = (2f64.powi((n as u32 + params.m) as i32) - 1.0) / (n as f64 + params.m as f64);
    let df = frac_derivative(params.f, 1.0);
    let c = bergman_constant(n, params.m as f64)?;
    let exponent = -((n as f64) + params.m as f64);

    let mut radii = params.z_radii.clone();
    // midpoint densification for the grid-stability record
    let mut mids: Vec<f64> = params.z_radii.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    radii.append(&mut mids);
    radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));

    let mut records = Vec::new();
    let mut sup: f64 = 0.0;
    let mut sup_base: f64 = 0.0;
    for &rho in &radii {
        let z = BallPoint::on_axis(n, rho)?;
        let lhs = params.f.evaluate(&z)?.norm();
        let integral = integrate_ball(params.rule, |s| {
            let dv = match df.evaluate_at(s.coords) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let ip = match inner_product(z.coords(), s.coords) {
                Ok(v) => v,
                Err(_) => return Complex64::new(f64::NAN, 0.0),
            };
            let kernel = (Complex64::new(1.0, 0.0) - ip).norm().powf(exponent);
            Complex64::new(s.one_minus_r_sq().powf(params.m as f64) * dv.norm() * kernel, 0.0)
        })?;
        let rhs = c * integral.re;
        let record = Record::new(format!("|z|={rho}"), lhs, rhs);
        if let Some(r) = record.ratio {
            sup = sup.max(r);
            if params.z_radii.contains(&rho) {
                sup_base = sup_base.max(r);
            }
        }
        records.push(record);
    }
    let grid_stable = sup <= sup_base * 1.10 + INEQ_SLACK;
    let pass = sup <= budget * (1.0 + INEQ_SLACK) && grid_stable;
    Ok(CheckReport {
        check_id: "lemma2".into(),
        criterion: format!(
            "sup |f| / (C(n,m) majorant) <= {budget:.6} and stable under z-grid densification"
        ),
        pass,
        gated: true,
        sup_ratio: Some(sup),
        sup_residual: None,
        inputs: serde_json::json!({
            "label": params.label, "n": n, "p": params.p, "m": params.m,
            "weight": crate::weights::RadialWeight::descriptor(params.weight),
            "z_radii": params.z_radii, "budget": budget,
        }),
        records,
        provenance: serde_json::json!({ "rule": params.rule.descriptor() }),
    })
}

/// Parameters for the Lemma 3 embedding check (0 < p <= 1).
pub struct Lemma3Params<'a> {
    pub f: &'a HoloSeries,
    pub p: f64,
    pub weight: &'a WeightS,
    pub levels: u32,
    pub points: u32,
    pub sphere: SphereRule,
    pub label: String,
}

/// ( int |Df| omega^{1/p}(1-|z|) (1-|z|)^{-n} dnu )^p against
/// int |Df|^p (1-|z|)^p omega(1-|z|) (1-|z|)^{-(n+1)} dnu.
pub fn check_lemma3(params: Lemma3Params<'_>) -> Result<CheckReport> {
    if !(params.p > 0.0 && params.p <= 1.0) {
        return Err(Error::Precondition(format!(
            "lemma3 needs 0 < p <= 1, got {}",
            params.p
        )));
    }
    let n = params.f.dim();
    let df = frac_derivative(params.f, 1.0);
    let e = params.weight.near_zero_exponent();

    // each side gets a rule built for its own radial profile
    let lhs_profile = -(n as f64) + e / params.p;
    let rhs_profile = params.p - n as f64 - 1.0 + e;
    let lhs_rule = BallRule::build_lenient(
        n,
        lhs_profile,
        None,
        params.levels,
        params.points,
        params.sphere.clone(),
    )?;
    let rhs_rule = BallRule::build_lenient(
        n,
        rhs_profile,
        None,
        params.levels,
        params.points,
        params.sphere.clone(),
    )?;

    let weight = params.weight;
    let inv_p = 1.0 / params.p;
    let lhs_integral = integrate_ball(&lhs_rule, |s| {
        let dv = match df.evaluate_at(s.coords) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, 0.0),
        };
        let w = match weight.eval(s.one_minus_r) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, 0.0),
        };
        Complex64::new(
            dv.norm() * w.powf(inv_p) * s.one_minus_r.powi(-(n as i32)),
            0.0,
        )
    })?
    .re;
    let lhs = lhs_integral.max(0.0).powf(params.p);

    let p = params.p;
    let rhs = integrate_ball(&rhs_rule, |s| {
        let dv = match df.evaluate_at(s.coords) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, 0.0),
        };
        let w = match weight.eval(s.one_minus_r) {
            Ok(v) => v,
            Err(_) => return Complex64::new(f64::NAN, 0.0),
        };
        Complex64::new(
            dv.norm().powf(p) * s.one_minus_r.powf(p - n as f64 - 1.0) * w,
            0.0,
        )
    })?
    .re;

    // homogeneity record: both sides scale by lambda^p, ratio invariant
    let lambda: f64 = 2.3;
    let scale = lambda.powf(params.p);

    let pass = lhs <= rhs * (1.0 + INEQ_SLACK);
    let mut records = vec![
        Record::new("lhs vs rhs", lhs, rhs),
        Record::new("scaled by 2.3 (both sides x lambda^p)", lhs * scale, rhs * scale),
    ];
    records[1].ratio = records[0].ratio; // homogeneity: ratio unchanged
    Ok(CheckReport {
        check_id: "lemma3".into(),
        criterion: "lhs <= rhs (1 + 1e-6); observed constant reported".into(),
        pass,
        gated: true,
        sup_ratio: records[0].ratio,
        sup_residual: None,
        inputs: serde_json::json!({
            "label": params.label, "n": n, "p": params.p,
            "weight": crate::weights::RadialWeight::descriptor(params.weight),
        }),
        records,
        provenance: serde_json::json!({
            "lhs_rule": lhs_rule.descriptor(), "rhs_rule": rhs_rule.descriptor(),
        }),
    })
}

/// Parameters for the Lemma 4 kernel-integral bound.
pub struct Lemma4Params<'a> {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub weight: &'a WeightS,
    /// |z| values, ascending; the stability comparison uses the first
    /// `prefix` of them as the reference sup.
    pub radii: Vec<f64>,
    pub prefix: usize,
    pub levels: u32,
    pub points: u32,
    /// Run despite violated hypotheses (to observe blow-up).
    pub exploratory: bool,
    pub label: String,
}

/// int (1-|zeta|^2)^alpha omega(1-|zeta|) |1 - <z,zeta>|^{-(beta+n+1)} dnu
/// against omega(1-|z|^2) (1-|z|^2)^{alpha-beta}, at z = r e_1.
///
/// The sphere factor is zonal and summed exactly; only the radial integral is
/// quadrature, so the check stays accurate at radii within 2^{-10} of the
/// boundary.
pub fn check_lemma4(params: Lemma4Params<'_>) -> Result<CheckReport> {
    let hyp = params.weight.check_hypotheses(params.alpha, params.beta, None);
    let hypotheses_ok = hyp.integrability_ok && hyp.decay_ok;
    if !hypotheses_ok && !params.exploratory {
        return Err(Error::Precondition(format!(
            "lemma4 hypotheses violated: alpha+1-beta_w = {}, beta-alpha-alpha_w = {}",
            params.alpha + 1.0 - params.weight.beta_w(),
            params.beta - params.alpha - params.weight.alpha_w(),
        )));
    }
    let rows = lemma4_curve(
        params.n,
        params.alpha,
        params.beta,
        params.weight,
        &params.radii,
        params.levels,
        params.points,
    )?;

    let mut records = Vec::new();
    let mut sup: f64 = 0.0;
    let mut sup_prefix: f64 = 0.0;
    for (i, &(rho, lhs, rhs)) in rows.iter().enumerate() {
        let rec = Record::new(format!("|z|={rho}"), lhs, rhs);
        if let Some(r) = rec.ratio {
            sup = sup.max(r);
            if i < params.prefix {
                sup_prefix = sup_prefix.max(r);
            }
        }
        records.push(rec);
    }

    let stable = sup <= sup_prefix * 1.10;
    records.push(Record::new(
        format!("stability: sup(all) vs 1.1 sup(first {})", params.prefix),
        sup,
        1.10 * sup_prefix,
    ));
    let pass = hypotheses_ok && stable;
    Ok(CheckReport {
        check_id: "lemma4".into(),
        criterion: format!(
            "ratio bounded: sup over all radii within 10% of sup over the first {} radii",
            params.prefix
        ),
        pass,
        gated: !params.exploratory,
        sup_ratio: Some(sup),
        sup_residual: None,
        inputs: serde_json::json!({
            "label": params.label, "n": params.n, "alpha": params.alpha, "beta": params.beta,
            "weight": crate::weights::RadialWeight::descriptor(params.weight),
            "radii": params.radii, "prefix": params.prefix,
            "hypotheses_ok": hypotheses_ok,
        }),
        records,
        provenance: serde_json::json!({
            "levels": params.levels, "points": params.points, "sphere": "zonal-exact",
        }),
    })
}

/// Per-radius (|z|, lhs, rhs) rows of the Lemma 4 comparison, shared by the
/// checker and the CSV sweep.
pub fn lemma4_curve(
    n: usize,
    alpha: f64,
    beta: f64,
    weight: &WeightS,
    radii: &[f64],
    levels: u32,
    points: u32,
) -> Result<Vec<(f64, f64, f64)>> {
    let radial = build_radial_rule(alpha + weight.near_zero_exponent(), levels, points)?;
    let c = (beta + n as f64 + 1.0) / 2.0;
    let mut rows = Vec::with_capacity(radii.len());
    for &rho in radii {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::Precondition(format!("|z| = {rho} outside [0, 1)")));
        }
        let mut failed = false;
        let lhs = integrate_radial(&radial, |t, omt| {
            let w = match weight.eval(omt) {
                Ok(v) => v,
                Err(_) => {
                    failed = true;
                    return 0.0;
                }
            };
            let zonal = match zonal_kernel_sphere_average(n, c, t * rho) {
                Ok(v) => v,
                Err(_) => {
                    failed = true;
                    return 0.0;
                }
            };
            2.0 * n as f64
                * t.powi(2 * n as i32 - 1)
                * (omt * (1.0 + t)).powf(alpha)
                * w
                * zonal
        });
        if failed || !lhs.is_finite() {
            return Err(Error::NonFinite(format!("lemma4 lhs at |z| = {rho}")));
        }
        let omr2 = (1.0 - rho) * (1.0 + rho);
        let rhs = weight.eval(omr2)? * omr2.powf(alpha - beta);
        rows.push((rho, lhs, rhs));
    }
    Ok(rows)
}

/// Parameters for the reproducing-formula check.
pub struct ReproParams {
    /// (label, f) pairs; the exact path runs on all of them.
    pub corpus: Vec<(String, HoloSeries)>,
    /// Kernel exponent m for the full check.
    pub m: f64,
    /// Termwise Gamma-identity sweep: degrees <= this, dims <= this, each m.
    pub termwise_max_degree: u32,
    pub termwise_dims: Vec<usize>,
    pub termwise_ms: Vec<f64>,
    /// On-axis |z| values for the pointwise residuals.
    pub z_radii: Vec<f64>,
    /// Quadrature-path runs: (label, f, rule); empty to skip.
    pub quad: Vec<(String, HoloSeries, BallRule)>,
    pub exact_tol: f64,
    pub quad_tol: f64,
}

/// Termwise Gamma identity, exact-path residuals, and quadrature-path
/// residuals for the reproducing formula.
pub fn check_repro(params: ReproParams) -> Result<CheckReport> {
    let mut records = Vec::new();
    let mut termwise_worst = 0.0f64;
    for &n in &params.termwise_dims {
        for &m in &params.termwise_ms {
            let mut worst = 0.0f64;
            for k in 0..=params.termwise_max_degree {
                for mu in degree_shapes(n, k) {
                    let v = reproducing_termwise_factor(n, m, &mu)?;
                    worst = worst.max((v - 1.0).abs());
                }
            }
            records.push(Record::new(format!("termwise n={n} m={m}"), worst, ALGEBRA_TOL));
            termwise_worst = termwise_worst.max(worst);
        }
    }

    let mut exact_worst = 0.0f64;
    for (label, f) in &params.corpus {
        let df = frac_derivative(f, 1.0);
        let repro = reproducing_transform(f, params.m)?;
        let mut worst = 0.0f64;
        for &rho in &params.z_radii {
            let z = BallPoint::on_axis(f.dim(), rho)?;
            let want = df.evaluate(&z)?;
            let got = repro.evaluate(&z)?;
            worst = worst.max((want - got).norm());
        }
        records.push(Record::new(format!("exact {label}"), worst, params.exact_tol));
        exact_worst = exact_worst.max(worst);
    }

    let mut quad_worst = 0.0f64;
    for (label, f, rule) in &params.quad {
        let df = frac_derivative(f, 1.0);
        let zs: Vec<BallPoint> = params
            .z_radii
            .iter()
            .map(|&rho| BallPoint::on_axis(f.dim(), rho))
            .collect::<Result<_>>()?;
        let got = reproducing_quad(f, params.m, &zs, rule, Some(0.91))?;
        let mut worst = 0.0f64;
        for (z, v) in zs.iter().zip(got) {
            worst = worst.max((df.evaluate(z)? - v).norm());
        }
        records.push(Record::new(format!("quad {label}"), worst, params.quad_tol));
        quad_worst = quad_worst.max(worst);
    }

    let pass = termwise_worst <= ALGEBRA_TOL
        && exact_worst <= params.exact_tol
        && (params.quad.is_empty() || quad_worst <= params.quad_tol);
    Ok(CheckReport {
        check_id: "repro".into(),
        criterion: format!(
            "termwise Gamma identity <= {ALGEBRA_TOL:e}; exact-path residual <= {:e}; quadrature-path residual <= {:e}",
            params.exact_tol, params.quad_tol
        ),
        pass,
        gated: true,
        sup_ratio: None,
        sup_residual: Some(termwise_worst.max(exact_worst).max(quad_worst)),
        inputs: serde_json::json!({
            "m": params.m,
            "termwise": {
                "max_degree": params.termwise_max_degree,
                "dims": params.termwise_dims,
                "ms": params.termwise_ms,
            },
            "z_radii": params.z_radii,
            "corpus": params.corpus.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>(),
            "quad": params.quad.iter().map(|(l, _, _)| l.clone()).collect::<Vec<_>>(),
        }),
        records,
        provenance: serde_json::json!({
            "quad_rules": params.quad.iter().map(|(_, _, r)| r.descriptor()).collect::<Vec<_>>(),
        }),
    })
}

fn degree_shapes(n: usize, k: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut c = vec![0u32; n];
    c[0] = k;
    out.push(MultiIndex::new(c.clone()));
    if n >= 2 && k >= 1 {
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

/// Parameters for the Theorem 1 necessity-mechanism check.
pub struct Thm1Params<'a> {
    pub symbol: HoloSeries,
    pub symbol_label: String,
    pub tau: f64,
    pub alpha: f64,
    pub kernel_truncation: u32,
    /// Output truncation; kernel headroom absorbs the input tail.
    pub output_truncation: u32,
    /// Weight for the p=2 norms in the |h(tau)| recovery.
    pub weight: &'a WeightS,
    pub levels: u32,
    pub points: u32,
    /// Extra rotation angle applied to tau for the rotation record.
    pub rotation: f64,
}

/// Outcome of both `thm1_identity` and `thm1_necessity` in one run.
pub struct Thm1Outcome {
    pub identity: CheckReport,
    pub necessity: CheckReport,
}

/// Coefficient identity T(f_tau) = conj(h(tau)) f_tau / C(n, alpha) on
/// truncations, plus the |h(tau)| <= C(n,alpha) ||T f_tau|| / ||f_tau||
/// recovery via p=2 norms.
pub fn check_thm1_identity(params: Thm1Params<'_>) -> Result<Thm1Outcome> {
    let n = params.symbol.dim();
    let s = n as f64 + params.alpha + 1.0;
    let c = bergman_constant(n, params.alpha)?;

    let mut identity_records = Vec::new();
    let mut necessity_records = Vec::new();
    let mut sup_residual = 0.0f64;
    let mut sup_recovery_err = 0.0f64;

    for (tag, tau_point) in [
        ("tau".to_string(), BallPoint::on_axis(n, params.tau)?),
        (
            format!("tau rotated by {}", params.rotation),
            BallPoint::on_axis(n, params.tau)?.rotated(params.rotation),
        ),
    ] {
        let f_tau = kernel_series(&tau_point, s, params.kernel_truncation)?;
        let spec = OperatorSpec::new(
            params.symbol.clone(),
            params.alpha,
            params.kernel_truncation,
            params.output_truncation,
        )?;
        let transformed = apply_t_exact(&spec, &f_tau)?;
        let h_at_tau = params.symbol.evaluate(&tau_point)?;
        let target = kernel_series(&tau_point, s, params.output_truncation)?
            .scaled(h_at_tau.conj() / c);
        let residual = transformed.max_coeff_distance(&target)?;
        sup_residual = sup_residual.max(residual);
        identity_records.push(Record::new(format!("{tag} residual"), residual, 1e-8));

        // necessity: recover |h(tau)| from the norm ratio
        let rule = norm_rule(
            n,
            2.0,
            params.weight,
            params.levels,
            params.points,
            SphereRule::exact(n, 2)?,
        )?;
        let opts = NormOptions {
            enforce_integrability: true,
            refinement_check: false,
            force_quadrature: false,
        };
        let norm_f = besov_norm_with(&f_tau, 2.0, params.weight, &rule, opts)?.value;
        let norm_tf = besov_norm_with(&transformed, 2.0, params.weight, &rule, opts)?.value;
        let recovered = c * norm_tf / norm_f;
        let expected = h_at_tau.norm();
        let err = (recovered - expected).abs();
        sup_recovery_err = sup_recovery_err.max(err);
        necessity_records.push(Record::new(
            format!("{tag} |h| recovered vs exact"),
            recovered,
            expected,
        ));
    }

    let inputs = serde_json::json!({
        "h": params.symbol_label, "tau": params.tau, "alpha": params.alpha, "n": n,
        "K_kernel": params.kernel_truncation, "K_out": params.output_truncation,
        "weight": crate::weights::RadialWeight::descriptor(params.weight),
        "rotation": params.rotation,
    });
    let provenance = serde_json::json!({
        "levels": params.levels, "points": params.points,
        "note": "proof display reads conj(h(z)) and omits 1/C(n,alpha); the verified identity uses conj(h(tau)) and the constant",
    });

    Ok(Thm1Outcome {
        identity: CheckReport {
            check_id: "thm1_identity".into(),
            criterion: "coefficient residual of T(f_tau) vs conj(h(tau)) f_tau / C(n,alpha) <= 1e-8".into(),
            pass: sup_residual <= 1e-8,
            gated: true,
            sup_ratio: None,
            sup_residual: Some(sup_residual),
            inputs: inputs.clone(),
            records: identity_records,
            provenance: provenance.clone(),
        },
        necessity: CheckReport {
            check_id: "thm1_necessity".into(),
            criterion: "|h(tau)| recovered from C(n,alpha) ||T f_tau|| / ||f_tau|| within 1e-6".into(),
            pass: sup_recovery_err <= 1e-6,
            gated: true,
            sup_ratio: None,
            sup_residual: Some(sup_recovery_err),
            inputs,
            records: necessity_records,
            provenance,
        },
    })
}
