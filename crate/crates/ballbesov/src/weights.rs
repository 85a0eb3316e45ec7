//! Regular-variation weights omega(x) = exp( int_x^1 eps(u)/u du ).
//!
//! The generating function eps is bounded, -alpha_w <= eps <= beta_w, which
//! pins omega between the power envelopes x^{alpha_w} <= omega(x) <=
//! x^{-beta_w}. Constructors are restricted to the constant and
//! piecewise-constant eps families; both admit closed forms, and a log-space
//! adaptive-Simpson path is kept as an independent cross-check.

use std::collections::HashMap;
use std::path::Path;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The generating function eps of a weight.
#[derive(Clone, Debug, PartialEq)]
pub enum EpsFn {
    Constant(f64),
    /// Piecewise constant: `values[i]` on (b_i, b_{i+1}) where the boundary
    /// list is 0, breaks..., 1.
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
}

impl EpsFn {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            EpsFn::Constant(a) => *a,
            EpsFn::Piecewise { breaks, values } => {
                let mut idx = 0;
                for (i, b) in breaks.iter().enumerate() {
                    if u >= *b {
                        idx = i + 1;
                    }
                }
                values[idx]
            }
        }
    }

    fn min_value(&self) -> f64 {
        match self {
            EpsFn::Constant(a) => *a,
            EpsFn::Piecewise { values, .. } => values.iter().cloned().fold(f64::INFINITY, f64::min),
        }
    }

    fn max_value(&self) -> f64 {
        match self {
            EpsFn::Constant(a) => *a,
            EpsFn::Piecewise { values, .. } => {
                values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// eps shifted by a constant (used to absorb a power factor t^e).
    fn shifted(&self, delta: f64) -> EpsFn {
        match self {
            EpsFn::Constant(a) => EpsFn::Constant(a + delta),
            EpsFn::Piecewise { breaks, values } => EpsFn::Piecewise {
                breaks: breaks.clone(),
                values: values.iter().map(|v| v + delta).collect(),
            },
        }
    }
}

/// A class-S weight with its tight eps bounds.
#[derive(Debug)]
pub struct WeightS {
    eps: EpsFn,
    alpha_w: f64,
    beta_w: f64,
    near_zero_exponent: f64,
    use_closed_form: bool,
    memo: RwLock<HashMap<u64, f64>>,
}

impl Clone for WeightS {
    fn clone(&self) -> Self {
        WeightS {
            eps: self.eps.clone(),
            alpha_w: self.alpha_w,
            beta_w: self.beta_w,
            near_zero_exponent: self.near_zero_exponent,
            use_closed_form: self.use_closed_form,
            memo: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for WeightS {
    fn eq(&self, other: &Self) -> bool {
        self.eps == other.eps && self.use_closed_form == other.use_closed_form
    }
}

impl WeightS {
    fn from_eps(eps: EpsFn) -> Self {
        let alpha_w = (-eps.min_value()).max(0.0);
        let beta_w = eps.max_value().max(0.0);
        let near_zero_exponent = match &eps {
            EpsFn::Constant(a) => -a,
            EpsFn::Piecewise { values, .. } => -values[0],
        };
        WeightS {
            eps,
            alpha_w,
            beta_w,
            near_zero_exponent,
            use_closed_form: true,
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// omega(x) = x^{-a}, from eps == a.
    pub fn power(a: f64) -> Self {
        WeightS::from_eps(EpsFn::Constant(a))
    }

    /// The constant weight omega == 1.
    pub fn one() -> Self {
        WeightS::power(0.0)
    }

    /// Piecewise-constant eps: `values[i]` holds on the i-th interval of the
    /// partition 0, breaks..., 1.
    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("piecewise weight needs values".into()));
        }
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "piecewise weight needs {} values for {} breaks",
                breaks.len() + 1,
                breaks.len()
            )));
        }
        for w in breaks.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidParameter("breaks must be strictly sorted".into()));
            }
        }
        for b in &breaks {
            if !(*b > 0.0 && *b < 1.0) {
                return Err(Error::InvalidParameter(format!("break {b} outside (0,1)")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("eps values must be finite".into()));
        }
        Ok(WeightS::from_eps(EpsFn::Piecewise { breaks, values }))
    }

    /// A copy that ignores the closed form and evaluates by quadrature.
    pub fn without_closed_form(&self) -> Self {
        let mut w = self.clone();
        w.use_closed_form = false;
        w
    }

    pub fn eps(&self) -> &EpsFn {
        &self.eps
    }

    /// Lower eps-bound parameter (alpha_w >= 0, -alpha_w <= eps).
    pub fn alpha_w(&self) -> f64 {
        self.alpha_w
    }

    /// Upper eps-bound parameter (eps <= beta_w, beta_w >= 0).
    pub fn beta_w(&self) -> f64 {
        self.beta_w
    }

    /// Exponent e with omega(t) ~ c t^e as t -> 0 (exact for the constructed
    /// families; -a for the power weight x^{-a}).
    pub fn near_zero_exponent(&self) -> f64 {
        self.near_zero_exponent
    }

    fn check_domain(x: f64) -> Result<()> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::Precondition(format!(
                "weight evaluated at x = {x}, outside (0, 1]"
            )));
        }
        Ok(())
    }

    /// int_x^1 eps(u)/u du in closed form.
    fn log_integral_closed(&self, x: f64) -> f64 {
        match &self.eps {
            EpsFn::Constant(a) => -a * x.ln(),
            EpsFn::Piecewise { breaks, values } => {
                // boundaries b_0 = 0 < b_1 < ... < b_m < b_{m+1} = 1
                let mut acc = 0.0;
                let mut lo = x;
                for (i, v) in values.iter().enumerate() {
                    let hi = if i < breaks.len() { breaks[i] } else { 1.0 };
                    if hi <= lo {
                        continue;
                    }
                    acc += v * (hi.ln() - lo.ln());
                    lo = hi;
                }
                acc
            }
        }
    }

    /// omega(x). Uses the closed form when enabled, otherwise adaptive
    /// quadrature; results are memoized per bit pattern of x (idempotent
    /// fill, safe under concurrent readers).
    pub fn eval(&self, x: f64) -> Result<f64> {
        Self::check_domain(x)?;
        if x == 1.0 {
            return Ok(1.0); // empty integral
        }
        let key = x.to_bits();
        if let Some(v) = self.memo.read().expect("weight memo poisoned").get(&key) {
            return Ok(*v);
        }
        let integral = if self.use_closed_form {
            self.log_integral_closed(x)
        } else {
            self.log_integral_quadrature(x)
        };
        let v = integral.exp();
        self.memo
            .write()
            .expect("weight memo poisoned")
            .insert(key, v);
        Ok(v)
    }

    /// omega(x) forced through the numerical-quadrature path (cross-check).
    pub fn eval_via_quadrature(&self, x: f64) -> Result<f64> {
        Self::check_domain(x)?;
        if x == 1.0 {
            return Ok(1.0);
        }
        Ok(self.log_integral_quadrature(x).exp())
    }

    /// int_x^1 eps(u)/u du = int_{ln x}^0 eps(e^v) dv by adaptive Simpson.
    ///
    /// The log substitution keeps the integrand bounded, so the recursion
    /// depth stays modest even for x near the underflow range.
    fn log_integral_quadrature(&self, x: f64) -> f64 {
        let g = |v: f64| self.eps.eval(v.exp());
        adaptive_simpson(&g, x.ln(), 0.0, 1e-10)
    }

    /// Hypothesis report for the inequality checkers.
    pub fn check_hypotheses(
        &self,
        alpha: f64,
        beta: f64,
        pointwise: Option<(usize, f64, f64)>,
    ) -> HypothesisReport {
        let threshold = pointwise.map(|(n, p, _)| -(n as f64) / p - self.beta_w / p);
        HypothesisReport {
            alpha,
            beta,
            alpha_w: self.alpha_w,
            beta_w: self.beta_w,
            integrability_ok: alpha + 1.0 - self.beta_w > 0.0,
            decay_ok: beta - alpha > self.alpha_w,
            pointwise_threshold: threshold,
            pointwise_ok: pointwise.map(|(n, p, m)| m > -(n as f64) / p - self.beta_w / p),
        }
    }
}

/// Outcome of the weight hypothesis checks: `integrability_ok` is
/// alpha + 1 - beta_w > 0, `decay_ok` is beta - alpha > alpha_w, and the
/// pointwise entries carry the threshold m > -n/p - beta_w/p when (n, p, m)
/// was supplied.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_w: f64,
    pub beta_w: f64,
    pub integrability_ok: bool,
    pub decay_ok: bool,
    pub pointwise_threshold: Option<f64>,
    pub pointwise_ok: Option<bool>,
}

/// The modified weight omega*(t) = t^exponent * omega(t).
#[derive(Clone, Debug)]
pub struct WeightStar {
    base: WeightS,
    exponent: f64,
}

impl WeightStar {
    pub fn new(base: WeightS, exponent: f64) -> Self {
        WeightStar { base, exponent }
    }

    /// The target-space weight with exponent (alpha + m + 1)(1 - p).
    pub fn from_parameters(base: WeightS, alpha: f64, m: f64, p: f64) -> Self {
        WeightStar::new(base, (alpha + m + 1.0) * (1.0 - p))
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn base(&self) -> &WeightS {
        &self.base
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(t.powf(self.exponent) * self.base.eval(t)?)
    }

    /// omega* is itself of class S with eps shifted by -exponent.
    pub fn as_weight(&self) -> WeightS {
        let mut w = WeightS::from_eps(self.base.eps.shifted(-self.exponent));
        w.use_closed_form = self.base.use_closed_form;
        w
    }
}

/// Radial weight factor in a norm integrand: either omega or omega*.
pub trait RadialWeight: Sync {
    fn eval(&self, t: f64) -> Result<f64>;
    fn near_zero_exponent(&self) -> f64;
    fn descriptor(&self) -> serde_json::Value;
}

impl RadialWeight for WeightS {
    fn eval(&self, t: f64) -> Result<f64> {
        WeightS::eval(self, t)
    }

    fn near_zero_exponent(&self) -> f64 {
        self.near_zero_exponent
    }

    fn descriptor(&self) -> serde_json::Value {
        weight_descriptor(self)
    }
}

impl RadialWeight for WeightStar {
    fn eval(&self, t: f64) -> Result<f64> {
        WeightStar::eval(self, t)
    }

    fn near_zero_exponent(&self) -> f64 {
        self.base.near_zero_exponent + self.exponent
    }

    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({
            "type": "star",
            "exponent": self.exponent,
            "base": weight_descriptor(&self.base),
        })
    }
}

fn weight_descriptor(w: &WeightS) -> serde_json::Value {
    match &w.eps {
        EpsFn::Constant(a) => serde_json::json!({"type": "power", "a": a}),
        EpsFn::Piecewise { breaks, values } => {
            serde_json::json!({"type": "piecewise", "breaks": breaks, "values": values})
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum WeightFile {
    Power { a: f64 },
    Piecewise { breaks: Vec<f64>, values: Vec<f64> },
}

impl WeightS {
    pub fn from_json_str(s: &str) -> Result<WeightS> {
        let file: WeightFile = serde_json::from_str(s)?;
        match file {
            WeightFile::Power { a } => {
                if !a.is_finite() {
                    return Err(Error::Parse("power weight exponent must be finite".into()));
                }
                Ok(WeightS::power(a))
            }
            WeightFile::Piecewise { breaks, values } => WeightS::piecewise(breaks, values),
        }
    }

    pub fn to_json_string(&self) -> String {
        let file = match &self.eps {
            EpsFn::Constant(a) => WeightFile::Power { a: *a },
            EpsFn::Piecewise { breaks, values } => WeightFile::Piecewise {
                breaks: breaks.clone(),
                values: values.clone(),
            },
        };
        serde_json::to_string_pretty(&file).expect("weight serialization cannot fail")
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<WeightS> {
        let text = std::fs::read_to_string(path)?;
        WeightS::from_json_str(&text)
    }
}

/// Adaptive Simpson quadrature with relative tolerance.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    let scale = whole.abs().max(1e-3);
    rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        // eps == 0 -> omega == 1
        let w = WeightS::power(0.0);
        for x in [0.01, 0.25, 0.5, 0.99, 1.0] {
            assert_eq!(w.eval(x).unwrap(), 1.0);
        }

        // eps == -1 -> omega(x) = x
        let w = WeightS::power(-1.0);
        assert!((w.eval(0.25).unwrap() - 0.25).abs() < 1e-14);

        // eps == 2 -> omega(x) = x^{-2}; omega(0.5) = 4
        let w = WeightS::power(2.0);
        assert!((w.eval(0.5).unwrap() - 4.0).abs() < 1e-13);

        // eps == 0.5 -> omega(0.25) = 2
        let w = WeightS::power(0.5);
        assert!((w.eval(0.25).unwrap() - 2.0).abs() < 1e-13);

        assert!(w.eval(0.0).is_err());
        assert!(w.eval(1.5).is_err());
        assert!(w.eval(-0.1).is_err());
    }

    #[test]
    fn power_weight_bounds() {
        let w = WeightS::power(0.0);
        assert_eq!((w.alpha_w(), w.beta_w()), (0.0, 0.0));

        let w = WeightS::power(-1.0);
        assert_eq!((w.alpha_w(), w.beta_w()), (1.0, 0.0));
        assert_eq!(w.near_zero_exponent(), 1.0);

        let w = WeightS::power(0.5);
        assert_eq!((w.alpha_w(), w.beta_w()), (0.0, 0.5));
        assert_eq!(w.near_zero_exponent(), -0.5);
    }

    #[test]
    fn piecewise_examples() {
        // single piece equals the power weight
        let w = WeightS::piecewise(vec![], vec![-0.75]).unwrap();
        let p = WeightS::power(-0.75);
        for x in [0.1, 0.3, 0.9] {
            assert!((w.eval(x).unwrap() - p.eval(x).unwrap()).abs() < 1e-14);
        }

        // -1 on (0, 1/2), 0 on [1/2, 1): omega(x) = 2x below 1/2, 1 above
        let w = WeightS::piecewise(vec![0.5], vec![-1.0, 0.0]).unwrap();
        assert!((w.eval(0.25).unwrap() - 0.5).abs() < 1e-14);
        assert!((w.eval(0.75).unwrap() - 1.0).abs() < 1e-14);
        // continuity at the break
        let below = w.eval(0.5 - 1e-12).unwrap();
        let above = w.eval(0.5 + 1e-12).unwrap();
        assert!((below - above).abs() < 1e-10);

        // all zero values give omega == 1
        let w = WeightS::piecewise(vec![0.3, 0.6], vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(w.eval(0.2).unwrap(), 1.0);

        assert!(WeightS::piecewise(vec![0.5, 0.4], vec![1.0, 1.0, 1.0]).is_err());
        assert!(WeightS::piecewise(vec![], vec![]).is_err());
        assert!(WeightS::piecewise(vec![1.5], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn hypothesis_checks() {
        // omega == 1: both Lemma 4 hypotheses hold for alpha=0, beta=1
        let r = WeightS::one().check_hypotheses(0.0, 1.0, None);
        assert!(r.integrability_ok && r.decay_ok);

        // beta_w = 2 breaks alpha + 1 - beta_w > 0 at alpha = 0.5
        let r = WeightS::power(2.0).check_hypotheses(0.5, 3.0, None);
        assert!(!r.integrability_ok);

        // alpha_w = 1 breaks beta - alpha > alpha_w at (0, 0.5)
        let r = WeightS::power(-1.0).check_hypotheses(0.0, 0.5, None);
        assert!(!r.decay_ok);

        // pointwise threshold m > -n/p - beta_w/p
        let r = WeightS::one().check_hypotheses(0.0, 1.0, Some((2, 0.5, 1.0)));
        assert_eq!(r.pointwise_threshold, Some(-4.0));
        assert_eq!(r.pointwise_ok, Some(true));
    }

    #[test]
    fn multiplicativity_under_eps_addition() {
        // constant + constant
        let w1 = WeightS::power(0.7);
        let w2 = WeightS::power(-1.3);
        let sum = WeightS::power(0.7 - 1.3);
        for j in 1..=50 {
            let x = j as f64 / 51.0;
            let lhs = sum.eval(x).unwrap();
            let rhs = w1.eval(x).unwrap() * w2.eval(x).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-8);
        }

        // piecewise + constant
        let w1 = WeightS::piecewise(vec![0.4], vec![-1.0, 0.5]).unwrap();
        let w2 = WeightS::power(0.25);
        let sum = WeightS::piecewise(vec![0.4], vec![-0.75, 0.75]).unwrap();
        for j in 1..=50 {
            let x = j as f64 / 51.0;
            let lhs = sum.eval(x).unwrap();
            let rhs = w1.eval(x).unwrap() * w2.eval(x).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn monotone_envelope_two_point_bounds() {
        // -alpha_w <= eps <= beta_w pins the two-point ratio:
        // (y/x)^{-alpha_w} <= omega(x)/omega(y) <= (y/x)^{beta_w} for x <= y
        let weights = [
            WeightS::power(0.8),
            WeightS::power(-2.0),
            WeightS::piecewise(vec![0.2, 0.7], vec![1.0, -0.5, 0.25]).unwrap(),
        ];
        for w in &weights {
            for i in 1..20 {
                for j in i..20 {
                    let x = i as f64 / 20.0;
                    let y = j as f64 / 20.0;
                    let ratio = w.eval(x).unwrap() / w.eval(y).unwrap();
                    let hi = (y / x).powf(w.beta_w());
                    let lo = (y / x).powf(-w.alpha_w());
                    assert!(ratio <= hi * (1.0 + 1e-12));
                    assert!(ratio >= lo * (1.0 - 1e-12));
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let weights = [
            WeightS::power(1.5),
            WeightS::power(-0.5),
            WeightS::piecewise(vec![0.25, 0.5, 0.75], vec![-1.0, 0.0, 2.0, 0.5]).unwrap(),
        ];
        for w in &weights {
            for j in 1..=100 {
                let x = j as f64 / 101.0;
                let exact = w.eval(x).unwrap();
                let quad = w.eval_via_quadrature(x).unwrap();
                assert!(
                    (quad / exact - 1.0).abs() < 1e-8,
                    "x={x}: closed {exact} vs quadrature {quad}"
                );
            }
        }
        // the no-closed-form copy routes eval() through quadrature
        let w = weights[2].without_closed_form();
        let x = 0.37;
        assert!((w.eval(x).unwrap() / weights[2].eval(x).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn quadrature_path_handles_tiny_arguments() {
        let w = WeightS::power(0.5);
        let x: f64 = 1e-40;
        let exact = x.powf(-0.5);
        let quad = w.eval_via_quadrature(x).unwrap();
        assert!((quad / exact - 1.0).abs() < 1e-8);
    }

    #[test]
    fn weight_star_shifts_exponent() {
        let base = WeightS::power(-0.5); // omega = t^{1/2}
        let star = WeightStar::from_parameters(base.clone(), 0.0, 1.0, 0.5);
        assert!((star.exponent() - 1.0).abs() < 1e-15);
        for t in [0.1, 0.4, 0.9] {
            let direct = star.eval(t).unwrap();
            let via_s = star.as_weight().eval(t).unwrap();
            assert!((direct - t.powf(1.5)).abs() < 1e-13);
            assert!((direct - via_s).abs() < 1e-13);
        }
        assert_eq!(RadialWeight::near_zero_exponent(&star), 1.5);
    }

    #[test]
    fn json_round_trip() {
        let w = WeightS::from_json_str(r#"{"type":"power","a":0.5}"#).unwrap();
        assert!((w.eval(0.25).unwrap() - 2.0).abs() < 1e-13);

        let w =
            WeightS::from_json_str(r#"{"type":"piecewise","breaks":[0.5],"values":[-1.0,0.0]}"#)
                .unwrap();
        assert!((w.eval(0.25).unwrap() - 0.5).abs() < 1e-14);

        let s = w.to_json_string();
        let w2 = WeightS::from_json_str(&s).unwrap();
        assert_eq!(w, w2);

        assert!(WeightS::from_json_str(r#"{"type":"nope"}"#).is_err());
    }
}
