//! The validation manifest: a JSON description of the corpus of record and
//! every checker's parameters, so that a validation run is a pure function
//! of (manifest, seed) and reports are byte-reproducible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{BallRule, SphereRule};
use crate::series::{kernel_series, BallPoint, HoloSeries, MultiIndex};
use crate::validation::checks::{self, enumerate_indices};
use crate::validation::sweep::{boundedness_sweep, OpKind, SweepParams};
use crate::validation::{CheckReport, Record};
use crate::weights::WeightS;

pub const CHECK_IDS: [&str; 9] = [
    "lemma2",
    "lemma3",
    "lemma4",
    "lemma5",
    "repro",
    "thm1_identity",
    "thm1_necessity",
    "thm1_bound",
    "thm2_bound",
];

/// A function of the corpus, in JSON form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "lowercase")]
pub enum FnSpec {
    /// A single monomial z^m (dimension = length of m).
    Monomial { m: Vec<u32> },
    /// Kernel truncation (1 - <xi, tau e_1>)^{-s} to degree k.
    Kernel { dim: usize, tau: f64, s: f64, k: u32 },
    /// Explicit term list.
    Terms {
        dim: usize,
        max_degree: u32,
        terms: Vec<TermSpec>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermSpec {
    pub m: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl FnSpec {
    pub fn build(&self) -> Result<(String, HoloSeries)> {
        match self {
            FnSpec::Monomial { m } => {
                let idx = MultiIndex::new(m.clone());
                let label = format!("z^{idx}");
                let dim = idx.len();
                let degree = idx.order();
                Ok((
                    label,
                    HoloSeries::monomial(dim, idx, Complex64::new(1.0, 0.0), degree)?,
                ))
            }
            FnSpec::Kernel { dim, tau, s, k } => {
                let label = format!("kernel(tau={tau}, s={s}, K={k}, n={dim})");
                let point = BallPoint::on_axis(*dim, *tau)?;
                Ok((label, kernel_series(&point, *s, *k)?))
            }
            FnSpec::Terms {
                dim,
                max_degree,
                terms,
            } => {
                let mut f = HoloSeries::zero(*dim, *max_degree);
                for t in terms {
                    f.add_term(MultiIndex::new(t.m.clone()), Complex64::new(t.re, t.im))?;
                }
                Ok((format!("poly({} terms, n={dim})", terms.len()), f))
            }
        }
    }
}

/// Builds one of the named polynomial symbols: "1", "z1", "(1+z1)/2".
pub fn symbol_by_name(name: &str, dim: usize) -> Result<HoloSeries> {
    let one = Complex64::new(1.0, 0.0);
    match name {
        "1" => Ok(HoloSeries::constant(dim, one, 0)),
        "z1" => HoloSeries::monomial(dim, MultiIndex::unit(dim, 0), one, 1),
        "(1+z1)/2" => HoloSeries::from_terms(
            dim,
            1,
            vec![
                (MultiIndex::zero(dim), 0.5 * one),
                (MultiIndex::unit(dim, 0), 0.5 * one),
            ],
        ),
        other => Err(Error::Parse(format!("unknown symbol name {other:?}"))),
    }
}

fn weight_from_value(v: &serde_json::Value) -> Result<WeightS> {
    WeightS::from_json_str(&v.to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma5Cfg {
    pub trials_per_dim: usize,
    pub dims: Vec<usize>,
    pub max_degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma2Cfg {
    pub f: FnSpec,
    pub p: f64,
    pub weight: serde_json::Value,
    pub m: u32,
    pub z_radii: Vec<f64>,
    pub angles: Vec<usize>,
    pub simplex_points: usize,
    pub levels: u32,
    pub points: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma3Cfg {
    pub f: FnSpec,
    pub p: f64,
    pub weight: serde_json::Value,
    pub sphere_degree: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma4Cfg {
    pub alpha: f64,
    pub beta: f64,
    pub weight: serde_json::Value,
    #[serde(default)]
    pub exploratory: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReproQuadCfg {
    pub f: FnSpec,
    pub angles: Vec<usize>,
    pub simplex_points: usize,
    pub levels: u32,
    pub points: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReproCfg {
    pub m: f64,
    pub termwise_ms: Vec<f64>,
    pub termwise_max_degree: u32,
    pub termwise_dims: Vec<usize>,
    pub z_radii: Vec<f64>,
    pub exact_corpus: Vec<FnSpec>,
    pub quad: Vec<ReproQuadCfg>,
    pub exact_tol: f64,
    pub quad_tol: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NecessityWeight {
    pub dim: usize,
    pub weight: serde_json::Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thm1Cfg {
    pub symbols: Vec<String>,
    pub taus: Vec<f64>,
    pub alphas: Vec<f64>,
    pub kernel_truncation: u32,
    pub output_truncation: u32,
    pub rotation: f64,
    pub necessity_weights: Vec<NecessityWeight>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCfg {
    pub op: OpKind,
    pub symbol: String,
    pub alpha: f64,
    pub p: f64,
    pub weight: serde_json::Value,
    #[serde(default)]
    pub star_m: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSphereCfg {
    pub dim: usize,
    pub angles: Vec<usize>,
    pub simplex_points: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub monomial_degree: u32,
    pub kernel_taus: Vec<f64>,
    pub kernel_truncation: u32,
    pub kernel_truncation_extended: u32,
    pub levels: u32,
    pub points: u32,
    pub lemma5: Lemma5Cfg,
    pub lemma2: Vec<Lemma2Cfg>,
    pub lemma3: Vec<Lemma3Cfg>,
    pub lemma4: Vec<Lemma4Cfg>,
    pub lemma4_j_max: u32,
    pub lemma4_j_prefix: u32,
    pub repro: ReproCfg,
    pub thm1: Thm1Cfg,
    pub sweeps: Vec<SweepCfg>,
    pub sweep_spheres: Vec<SweepSphereCfg>,
    pub sweep_levels: u32,
    pub sweep_points: u32,
}

impl Manifest {
    pub fn from_json_str(s: &str) -> Result<Manifest> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load_json(path: impl AsRef<std::path::Path>) -> Result<Manifest> {
        let text = std::fs::read_to_string(path)?;
        Manifest::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialization cannot fail")
    }

    /// The shipped default manifest (the corpus of record).
    pub fn default_manifest() -> Manifest {
        Manifest::from_json_str(include_str!("../../manifests/default.json"))
            .expect("embedded default manifest is valid")
    }

    /// Copy with the given seed.
    pub fn with_seed(mut self, seed: u64) -> Manifest {
        self.seed = seed;
        self
    }

    /// Monomials to the configured degree plus kernel truncations at the
    /// configured taus, for dimension n and kernel exponent s.
    pub fn corpus_of_record(&self, n: usize, s: f64, k: u32) -> Result<Vec<(String, HoloSeries)>> {
        let mut out = Vec::new();
        let mut indices = Vec::new();
        enumerate_indices(n, self.monomial_degree, &mut indices);
        for m in indices {
            let degree = m.order();
            out.push((
                format!("z^{m}"),
                HoloSeries::monomial(n, m, Complex64::new(1.0, 0.0), degree)?,
            ));
        }
        for &tau in &self.kernel_taus {
            let point = BallPoint::on_axis(n, tau)?;
            out.push((
                format!("kernel(tau={tau}, K={k})"),
                kernel_series(&point, s, k)?,
            ));
        }
        Ok(out)
    }

    fn kernel_extension(&self, n: usize, s: f64) -> Result<Vec<(String, HoloSeries)>> {
        let k = self.kernel_truncation_extended;
        let mut out = Vec::new();
        for &tau in &self.kernel_taus {
            let point = BallPoint::on_axis(n, tau)?;
            out.push((
                format!("kernel(tau={tau}, K={k})"),
                kernel_series(&point, s, k)?,
            ));
        }
        Ok(out)
    }

    fn sweep_sphere(&self, dim: usize) -> Result<SphereRule> {
        let cfg = self
            .sweep_spheres
            .iter()
            .find(|c| c.dim == dim)
            .ok_or_else(|| {
                Error::Parse(format!("manifest has no sweep sphere config for dim {dim}"))
            })?;
        SphereRule::product(dim, cfg.angles.clone(), cfg.simplex_points)
    }
}

/// Merges per-configuration reports into one report per check id.
fn fold_reports(check_id: &str, criterion: &str, parts: Vec<CheckReport>) -> CheckReport {
    let mut records = Vec::new();
    let mut inputs = Vec::new();
    let mut provenance = Vec::new();
    let mut pass = true;
    let mut gated = false;
    let mut sup_ratio: Option<f64> = None;
    let mut sup_residual: Option<f64> = None;
    for part in parts {
        let label = part
            .inputs
            .get("label")
            .and_then(|v| v.as_str())
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("part{}", inputs.len()));
        for r in part.records {
            records.push(Record {
                id: format!("{label} / {}", r.id),
                ..r
            });
        }
        if part.gated {
            gated = true;
            pass &= part.pass;
        }
        for (acc, v) in [(&mut sup_ratio, part.sup_ratio), (&mut sup_residual, part.sup_residual)] {
            if let Some(x) = v {
                *acc = Some(acc.map_or(x, |cur| cur.max(x)));
            }
        }
        inputs.push(part.inputs);
        provenance.push(part.provenance);
    }
    CheckReport {
        check_id: check_id.into(),
        criterion: criterion.into(),
        pass,
        gated,
        sup_ratio,
        sup_residual,
        inputs: serde_json::Value::Array(inputs),
        records,
        provenance: serde_json::Value::Array(provenance),
    }
}

/// Runs one named check against the manifest. Most checks yield a single
/// folded report; `thm1_identity` and `thm1_necessity` are computed together
/// and filtered.
pub fn run_check(id: &str, manifest: &Manifest) -> Result<Vec<CheckReport>> {
    match id {
        "lemma5" => Ok(vec![checks::check_lemma5_random(
            manifest.seed,
            manifest.lemma5.trials_per_dim,
            &manifest.lemma5.dims,
            manifest.lemma5.max_degree,
        )?]),
        "lemma2" => {
            let mut parts = Vec::new();
            for cfg in &manifest.lemma2 {
                let (label, f) = cfg.f.build()?;
                let weight = weight_from_value(&cfg.weight)?;
                let n = f.dim();
                let sphere = SphereRule::product(n, cfg.angles.clone(), cfg.simplex_points)?;
                let rule =
                    BallRule::build(n, cfg.m as f64, None, cfg.levels, cfg.points, sphere)?;
                parts.push(checks::check_lemma2(checks::Lemma2Params {
                    f: &f,
                    p: cfg.p,
                    weight: &weight,
                    m: cfg.m,
                    z_radii: cfg.z_radii.clone(),
                    rule: &rule,
                    label,
                })?);
            }
            Ok(vec![fold_reports(
                "lemma2",
                "pointwise bound |f| <= C(n,m) majorant within the proof budget, per configuration",
                parts,
            )])
        }
        "lemma3" => {
            let mut parts = Vec::new();
            for cfg in &manifest.lemma3 {
                let (label, f) = cfg.f.build()?;
                let weight = weight_from_value(&cfg.weight)?;
                let n = f.dim();
                parts.push(checks::check_lemma3(checks::Lemma3Params {
                    f: &f,
                    p: cfg.p,
                    weight: &weight,
                    levels: manifest.levels,
                    points: manifest.points,
                    sphere: SphereRule::exact(n, cfg.sphere_degree)?,
                    label,
                })?);
            }
            Ok(vec![fold_reports(
                "lemma3",
                "lhs <= rhs (1 + 1e-6) per configuration",
                parts,
            )])
        }
        "lemma4" => {
            let radii: Vec<f64> = (0..=manifest.lemma4_j_max)
                .map(|j| 1.0 - 0.5f64.powi(j as i32))
                .collect();
            let prefix = manifest.lemma4_j_prefix as usize + 1;
            let mut parts = Vec::new();
            for cfg in &manifest.lemma4 {
                let weight = weight_from_value(&cfg.weight)?;
                for &n in &manifest.dims {
                    parts.push(checks::check_lemma4(checks::Lemma4Params {
                        n,
                        alpha: cfg.alpha,
                        beta: cfg.beta,
                        weight: &weight,
                        radii: radii.clone(),
                        prefix,
                        levels: manifest.levels,
                        points: manifest.points,
                        exploratory: cfg.exploratory,
                        label: format!(
                            "n={n} alpha={} beta={} {}",
                            cfg.alpha,
                            cfg.beta,
                            if cfg.exploratory { "exploratory" } else { "gated" }
                        ),
                    })?);
                }
            }
            Ok(vec![fold_reports(
                "lemma4",
                "kernel-integral ratio bounded (sup stable under radii extension) for every gated configuration",
                parts,
            )])
        }
        "repro" => {
            let mut corpus = Vec::new();
            for spec in &manifest.repro.exact_corpus {
                corpus.push(spec.build()?);
            }
            let mut quad = Vec::new();
            for cfg in &manifest.repro.quad {
                let (label, f) = cfg.f.build()?;
                let n = f.dim();
                let sphere = SphereRule::product(n, cfg.angles.clone(), cfg.simplex_points)?;
                let rule = BallRule::build(
                    n,
                    manifest.repro.m,
                    None,
                    cfg.levels,
                    cfg.points,
                    sphere,
                )?;
                quad.push((label, f, rule));
            }
            Ok(vec![checks::check_repro(checks::ReproParams {
                corpus,
                m: manifest.repro.m,
                termwise_max_degree: manifest.repro.termwise_max_degree,
                termwise_dims: manifest.repro.termwise_dims.clone(),
                termwise_ms: manifest.repro.termwise_ms.clone(),
                z_radii: manifest.repro.z_radii.clone(),
                quad,
                exact_tol: manifest.repro.exact_tol,
                quad_tol: manifest.repro.quad_tol,
            })?])
        }
        "thm1_identity" | "thm1_necessity" => {
            let mut identity_parts = Vec::new();
            let mut necessity_parts = Vec::new();
            for nw in &manifest.thm1.necessity_weights {
                let n = nw.dim;
                if !manifest.dims.contains(&n) {
                    continue;
                }
                let weight = weight_from_value(&nw.weight)?;
                for name in &manifest.thm1.symbols {
                    let symbol = symbol_by_name(name, n)?;
                    for &tau in &manifest.thm1.taus {
                        for &alpha in &manifest.thm1.alphas {
                            let outcome = checks::check_thm1_identity(checks::Thm1Params {
                                symbol: symbol.clone(),
                                symbol_label: name.clone(),
                                tau,
                                alpha,
                                kernel_truncation: manifest.thm1.kernel_truncation,
                                output_truncation: manifest.thm1.output_truncation,
                                weight: &weight,
                                levels: manifest.levels,
                                points: manifest.points,
                                rotation: manifest.thm1.rotation,
                            })?;
                            let label = format!("n={n} h={name} tau={tau} alpha={alpha}");
                            identity_parts.push(tag_label(outcome.identity, &label));
                            necessity_parts.push(tag_label(outcome.necessity, &label));
                        }
                    }
                }
            }
            let identity = fold_reports(
                "thm1_identity",
                "coefficient residual of T(f_tau) vs conj(h(tau)) f_tau / C(n,alpha) <= 1e-8 for every combination",
                identity_parts,
            );
            let necessity = fold_reports(
                "thm1_necessity",
                "|h(tau)| recovered from the norm ratio within 1e-6 for every combination",
                necessity_parts,
            );
            Ok(match id {
                "thm1_identity" => vec![identity],
                _ => vec![necessity],
            })
        }
        "thm1_bound" | "thm2_bound" => {
            let want = if id == "thm1_bound" { OpKind::T } else { OpKind::M };
            let mut parts = Vec::new();
            for cfg in manifest.sweeps.iter().filter(|c| c.op == want) {
                let weight = weight_from_value(&cfg.weight)?;
                for &n in &manifest.dims {
                    let s = n as f64 + cfg.alpha + 1.0;
                    let corpus = self_corpus(manifest, n, s)?;
                    let extension = manifest.kernel_extension(n, s)?;
                    let mut report = boundedness_sweep(SweepParams {
                        check_id: id.to_string(),
                        op: cfg.op,
                        symbol: symbol_by_name(&cfg.symbol, n)?,
                        symbol_label: cfg.symbol.clone(),
                        alpha: cfg.alpha,
                        p: cfg.p,
                        weight: &weight,
                        star_m: cfg.star_m,
                        levels: manifest.sweep_levels,
                        points: manifest.sweep_points,
                        sphere: manifest.sweep_sphere(n)?,
                        corpus,
                        extension,
                    })?;
                    let label = format!(
                        "n={n} p={} w={} star={:?} h={}",
                        cfg.p, cfg.weight, cfg.star_m, cfg.symbol
                    );
                    report = tag_label(report, &label);
                    parts.push(report);
                }
            }
            Ok(vec![fold_reports(
                id,
                "sup norm-ratio grows < 10% under corpus extension for every (p, weight) combination",
                parts,
            )])
        }
        other => Err(Error::Parse(format!("unknown check id {other:?}"))),
    }
}

fn self_corpus(manifest: &Manifest, n: usize, s: f64) -> Result<Vec<(String, HoloSeries)>> {
    manifest.corpus_of_record(n, s, manifest.kernel_truncation)
}

fn tag_label(mut report: CheckReport, label: &str) -> CheckReport {
    if let serde_json::Value::Object(map) = &mut report.inputs {
        map.insert("label".into(), serde_json::Value::String(label.into()));
    }
    report
}

/// Runs every check in the canonical order.
pub fn run_all(manifest: &Manifest) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for id in CHECK_IDS {
        out.extend(run_check(id, manifest)?);
    }
    Ok(out)
}
