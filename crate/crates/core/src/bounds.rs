//! Evaluators for the theoretical regret upper bounds, their validity
//! thresholds `t_min`, the weaker sub-threshold pull bound, and the
//! classical logarithmic lower-bound curve.

use crate::distributions::bernoulli_kl;
use crate::error::{Error, Result};
use crate::scaling::{smallest_t_satisfying, DecayFn, ScalingFn, MIN_T};

/// Policy family a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    RUcb,
    RUcbG,
    RUcbGMom,
}

/// Distribution-class membership certificate for an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    /// sigma-subgaussian arms.
    Sg { sigma: f64 },
    /// (v, alpha)-subexponential arms.
    Se { v: f64, alpha: f64 },
    /// Heavy-tails admitted: `E|X|^(1+eps) <= moment_bound` for every arm.
    G { eps: f64, moment_bound: f64 },
    /// Supports contained in `[lo, hi]` (used by the sub-threshold bound).
    Bounded { lo: f64, hi: f64 },
}

impl Certificate {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Certificate::Sg { sigma } => *sigma > 0.0,
            Certificate::Se { v, alpha } => *v > 0.0 && *alpha > 0.0,
            Certificate::G { eps, moment_bound } => *eps > 0.0 && *moment_bound > 0.0,
            Certificate::Bounded { lo, hi } => lo < hi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "certificate parameters must be positive: {self:?}"
            )))
        }
    }
}

/// Parametric family declaration for the lower-bound curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerBoundFamily {
    /// Gaussian arms sharing a fixed, known sigma: `d_i = gap^2 / (2 sigma^2)`.
    GaussianFixedSigma { sigma: f64 },
    /// Bernoulli arms with optimal mean `mu_star`: `d_i = kl(mu_i, mu_star)`.
    Bernoulli { mu_star: f64 },
    /// A whole oblivious class (bounded/subgaussian/subexponential/heavy):
    /// the perturbation argument drives `d_i` to zero, so no logarithmic
    /// lower-bound curve exists.
    Oblivious,
}

/// Gaps plus class certificate (and optionally a parametric family for the
/// lower-bound curve).
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceMeta {
    pub gaps: Vec<f64>,
    pub certificate: Certificate,
    pub family: Option<LowerBoundFamily>,
}

impl InstanceMeta {
    pub fn new(gaps: Vec<f64>, certificate: Certificate) -> Result<Self> {
        certificate.validate()?;
        if gaps.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::InvalidParameter(
                "gaps must be finite and nonnegative".into(),
            ));
        }
        Ok(InstanceMeta {
            gaps,
            certificate,
            family: None,
        })
    }

    pub fn with_family(mut self, family: LowerBoundFamily) -> Self {
        self.family = Some(family);
        self
    }

    fn positive_gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.gaps.iter().copied().filter(|g| *g > 0.0)
    }

    fn min_positive_gap(&self) -> Option<f64> {
        self.positive_gaps().fold(None, |acc, g| {
            Some(acc.map_or(g, |a: f64| a.min(g)))
        })
    }

    fn max_positive_gap(&self) -> Option<f64> {
        self.positive_gaps().fold(None, |acc, g| {
            Some(acc.map_or(g, |a: f64| a.max(g)))
        })
    }
}

/// One named validity condition with the round from which it holds.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdComponent {
    pub name: String,
    pub t: u64,
    pub rule: String,
}

/// Validity thresholds for a regret theorem. `t_min` is the max over the
/// binding `components`; `crossovers` are informational round estimates of
/// when the displayed bound terms dominate the constant threshold, computed
/// by grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub t_min: u64,
    pub components: Vec<ThresholdComponent>,
    pub crossovers: Vec<ThresholdComponent>,
}

fn mismatch(kind: PolicyKind, certificate: &Certificate, need: &str) -> Error {
    Error::CertificateMismatch(format!("{kind:?} needs a {need} certificate, got {certificate:?}"))
}

/// Theoretical cumulative-regret upper bound at round `t`.
///
/// Per kind, summed over arms with positive gap `d`:
/// - R-UCB, subgaussian: `4 f(t) ln t / d + 4d`
/// - R-UCB, subexponential: `f(t) ln t * max(4/d, d (alpha/v^2)^2) + 4d`
/// - R-UCB-G: `32 f(t) ln t / (1 - 2/(d ln f(t))) + 4d`
/// - R-UCB-G-MoM: `d (2 f(t) / d)^(1/g(t)) * 32 ln t + 4d`
pub fn regret_bound(
    kind: PolicyKind,
    meta: &InstanceMeta,
    f: &ScalingFn,
    g: Option<&DecayFn>,
    t: u64,
) -> Result<f64> {
    let ft = f.eval(t)?;
    let ln_t = (t as f64).ln();
    let mut total = 0.0;
    for gap in meta.positive_gaps() {
        total += match (kind, &meta.certificate) {
            (PolicyKind::RUcb, Certificate::Sg { .. }) => 4.0 * ft * ln_t / gap + 4.0 * gap,
            (PolicyKind::RUcb, Certificate::Se { v, alpha }) => {
                let ratio = alpha / (v * v);
                ft * ln_t * (4.0 / gap).max(gap * ratio * ratio) + 4.0 * gap
            }
            (PolicyKind::RUcbG, Certificate::G { .. }) => {
                let lf = ft.ln();
                if gap * lf <= 2.0 {
                    return Err(Error::BoundInvalidBelowT1 { gap });
                }
                32.0 * ft * ln_t / (1.0 - 2.0 / (gap * lf)) + 4.0 * gap
            }
            (PolicyKind::RUcbGMom, Certificate::G { .. }) => {
                let decay = g.ok_or_else(|| {
                    Error::CertificateMismatch("R-UCB-G-MoM bound needs a decay function".into())
                })?;
                gap * (2.0 * ft / gap).powf(1.0 / decay.eval(t)?) * 32.0 * ln_t + 4.0 * gap
            }
            (k, c) => {
                return Err(mismatch(
                    k,
                    c,
                    match k {
                        PolicyKind::RUcb => "subgaussian or subexponential",
                        _ => "heavy-tail moment",
                    },
                ))
            }
        };
    }
    Ok(total)
}

/// Validity thresholds for the regret theorems.
pub fn compute_tmin(
    kind: PolicyKind,
    meta: &InstanceMeta,
    f: &ScalingFn,
    g: Option<&DecayFn>,
) -> Result<ThresholdReport> {
    let mut components = Vec::new();
    let mut crossovers = Vec::new();
    match (kind, &meta.certificate) {
        (PolicyKind::RUcb, Certificate::Sg { sigma }) => {
            let target = 8.0 * sigma * sigma;
            let t0 = f.inverse_threshold(target)?;
            components.push(ThresholdComponent {
                name: "t0".into(),
                t: t0,
                rule: format!("f(t) >= 8 sigma^2 = {target}"),
            });
            if let Some(gap) = meta.max_positive_gap() {
                let pred = |t: u64| Ok(4.0 * f.eval(t)? * (t as f64).ln() / (gap * gap) >= t0 as f64);
                let t1 = smallest_t_satisfying(pred, "r-ucb crossover")?;
                crossovers.push(ThresholdComponent {
                    name: "t1_crossover".into(),
                    t: t1,
                    rule: format!("4 f(t) ln t / {gap}^2 >= t0 = {t0}"),
                });
            }
        }
        (PolicyKind::RUcb, Certificate::Se { v, alpha }) => {
            let target = 8.0 * v * v;
            let t0 = f.inverse_threshold(target)?;
            components.push(ThresholdComponent {
                name: "t0".into(),
                t: t0,
                rule: format!("f(t) >= 8 v^2 = {target}"),
            });
            if let Some(gap) = meta.max_positive_gap() {
                let ratio = alpha / (v * v);
                let pred = |t: u64| {
                    let fl = f.eval(t)? * (t as f64).ln();
                    Ok(fl * (4.0 / (gap * gap)).max(ratio * ratio) >= t0 as f64)
                };
                let t1 = smallest_t_satisfying(pred, "r-ucb crossover")?;
                crossovers.push(ThresholdComponent {
                    name: "t1_crossover".into(),
                    t: t1,
                    rule: format!("max(4 f ln t / {gap}^2, f ln t (alpha/v^2)^2) >= t0 = {t0}"),
                });
            }
        }
        (PolicyKind::RUcbG, Certificate::G { eps, moment_bound }) => {
            let t0 = heavy_tail_concentration_threshold(f, *eps, *moment_bound)?;
            components.push(ThresholdComponent {
                name: "t0".into(),
                t: t0,
                rule: format!("3B ln f(t) < 2 f(t)^eps from here on (eps={eps}, B={moment_bound})"),
            });
            if let Some(gap) = meta.min_positive_gap() {
                let pred = |t: u64| Ok(gap * f.eval(t)?.ln() > 2.0);
                let t1 = smallest_t_satisfying(pred, "gap ln f(t) > 2")?;
                components.push(ThresholdComponent {
                    name: "t1".into(),
                    t: t1,
                    rule: format!("{gap} * ln f(t) > 2"),
                });
            }
        }
        (PolicyKind::RUcbGMom, Certificate::G { eps, moment_bound }) => {
            let decay = g.ok_or_else(|| {
                Error::CertificateMismatch("R-UCB-G-MoM thresholds need a decay function".into())
            })?;
            let cut = eps / (1.0 + eps);
            let pred_g = |t: u64| Ok(decay.eval(t)? < cut);
            let tg = smallest_t_satisfying(pred_g, "g(t) < eps/(1+eps)")?;
            components.push(ThresholdComponent {
                name: "t0_decay".into(),
                t: tg,
                rule: format!("g(t) < eps/(1+eps) = {cut}"),
            });
            let target = 12.0 * moment_bound;
            let pred_f = |t: u64| Ok(f.eval(t)?.powf(1.0 + eps) > target);
            let tf = smallest_t_satisfying(pred_f, "f(t)^(1+eps) > 12B")?;
            components.push(ThresholdComponent {
                name: "t0_scaling".into(),
                t: tf,
                rule: format!("f(t)^(1+eps) > 12B = {target}"),
            });
        }
        (k, c) => {
            return Err(mismatch(
                k,
                c,
                match k {
                    PolicyKind::RUcb => "subgaussian or subexponential",
                    _ => "heavy-tail moment",
                },
            ))
        }
    }
    let t_min = components.iter().map(|c| c.t).max().unwrap_or(MIN_T);
    Ok(ThresholdReport {
        t_min,
        components,
        crossovers,
    })
}

/// Smallest `t` from which `3B ln f(t) < 2 f(t)^eps` holds for good: the
/// margin `2 y^eps - 3B ln y` is decreasing then increasing in `y = f(t)`,
/// so the condition is stable once `f(t)` clears the largest root.
fn heavy_tail_concentration_threshold(f: &ScalingFn, eps: f64, b: f64) -> Result<u64> {
    let margin = |y: f64| 2.0 * y.powf(eps) - 3.0 * b * y.ln();
    let dip = (3.0 * b / (2.0 * eps)).powf(1.0 / eps);
    if dip <= 1.0 || margin(dip) > 0.0 {
        return Ok(MIN_T);
    }
    let mut lo = dip;
    let mut hi = 2.0 * dip;
    while margin(hi) <= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if margin(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = hi;
    smallest_t_satisfying(|t| Ok(f.eval(t)? > root), "3B ln f(t) < 2 f(t)^eps")
}

/// Weaker expected-pull bound for rounds below `t_min`:
/// `u_i + (t - u_i) * t^(1 - c_hat f(t) ln t)`, with `c_hat` the
/// concentration rate of the certificate class. The summand is evaluated
/// literally (it does not depend on the summation index).
pub fn sub_threshold_pulls(meta: &InstanceMeta, f: &ScalingFn, t: u64, u_i: u64) -> Result<f64> {
    if u_i > t {
        return Err(Error::InvalidParameter(format!(
            "u_i = {u_i} exceeds the round count t = {t}"
        )));
    }
    let c_hat = match &meta.certificate {
        Certificate::Bounded { lo, hi } => 2.0 / ((hi - lo) * (hi - lo)),
        Certificate::Sg { sigma } => 1.0 / (2.0 * sigma * sigma),
        Certificate::Se { v, .. } => 1.0 / (2.0 * v * v),
        c @ Certificate::G { .. } => {
            return Err(Error::CertificateMismatch(format!(
                "no sub-threshold concentration rate for {c:?}"
            )))
        }
    };
    let ln_t = (t as f64).ln();
    let exponent = 1.0 - c_hat * f.eval(t)? * ln_t;
    Ok(u_i as f64 + (t - u_i) as f64 * (exponent * ln_t).exp())
}

/// Classical instance-dependent lower-bound curve `sum_i (gap_i / d_i) ln n`
/// over arms with positive gap, for a declared parametric family.
///
/// Requesting it for an oblivious class errors: the mean-shift perturbation
/// makes `d_i = 0`, so regret grows super-logarithmically instead.
pub fn lower_bound_curve(meta: &InstanceMeta, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let family = meta.family.ok_or_else(|| {
        Error::InvalidParameter("lower_bound_curve needs a declared parametric family".into())
    })?;
    let ln_n = (n as f64).ln();
    let mut total = 0.0;
    for gap in meta.positive_gaps() {
        let d = match family {
            LowerBoundFamily::GaussianFixedSigma { sigma } => gap * gap / (2.0 * sigma * sigma),
            LowerBoundFamily::Bernoulli { mu_star } => {
                if !(0.0..=1.0).contains(&mu_star) || mu_star - gap < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "bernoulli means must lie in [0, 1]: mu_star={mu_star}, gap={gap}"
                    )));
                }
                bernoulli_kl(mu_star - gap, mu_star)
            }
            LowerBoundFamily::Oblivious => return Err(Error::LowerBoundInfinite),
        };
        total += gap / d * ln_n;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn ln_f() -> ScalingFn {
        ScalingFn::log_power(1.0, 1.0).unwrap()
    }

    fn sg_meta(gaps: &[f64], sigma: f64) -> InstanceMeta {
        InstanceMeta::new(gaps.to_vec(), Certificate::Sg { sigma }).unwrap()
    }

    fn g_meta(gaps: &[f64], eps: f64, b: f64) -> InstanceMeta {
        InstanceMeta::new(gaps.to_vec(), Certificate::G { eps, moment_bound: b }).unwrap()
    }

    #[test]
    fn regret_bound_hand_values() {
        let meta = sg_meta(&[0.0, 2.0], 1.0);
        let v = regret_bound(PolicyKind::RUcb, &meta, &ln_f(), None, 55).unwrap();
        assert_close(v, 40.117438514930846, 1e-9);

        let meta_g = g_meta(&[0.0, 2.0], 1.0, 1.0);
        let f_e2 = ScalingFn::constant(std::f64::consts::E.powi(2)).unwrap();
        let v = regret_bound(PolicyKind::RUcbG, &meta_g, &f_e2, None, 10).unwrap();
        assert_close(v, 1096.8915471804448, 1e-9);

        let ln10 = (10f64).ln();
        let f2 = ScalingFn::constant(2.0).unwrap();
        let g_half = DecayFn::inv_log_power(0.5 * ln10, 1.0).unwrap();
        let v = regret_bound(PolicyKind::RUcbGMom, &meta_g, &f2, Some(&g_half), 10).unwrap();
        assert_close(v, 597.4617838064758, 1e-8);
    }

    #[test]
    fn se_bound_degenerates_to_sg_for_small_alpha() {
        let sg = sg_meta(&[0.0, 2.0], 1.0);
        let se = InstanceMeta::new(vec![0.0, 2.0], Certificate::Se { v: 1.0, alpha: 1e-9 }).unwrap();
        let f = ln_f();
        let a = regret_bound(PolicyKind::RUcb, &sg, &f, None, 55).unwrap();
        let b = regret_bound(PolicyKind::RUcb, &se, &f, None, 55).unwrap();
        assert_close(a, b, 1e-12);

        // SE certificates never beat the SG guarantee for the same arms.
        for alpha in [0.5, 1.0, 4.0] {
            let se = InstanceMeta::new(vec![0.0, 2.0], Certificate::Se { v: 1.0, alpha }).unwrap();
            for t in [55u64, 1_000, 100_000] {
                let loose = regret_bound(PolicyKind::RUcb, &se, &f, None, t).unwrap();
                let tight = regret_bound(PolicyKind::RUcb, &sg, &f, None, t).unwrap();
                assert!(loose >= tight);
            }
        }
    }

    #[test]
    fn rucbg_bound_invalid_below_t1() {
        let meta = g_meta(&[0.0, 2.0], 1.0, 1.0);
        // gap * ln f = 2 exactly: still invalid
        let f_e = ScalingFn::constant(std::f64::consts::E).unwrap();
        assert!(matches!(
            regret_bound(PolicyKind::RUcbG, &meta, &f_e, None, 10),
            Err(Error::BoundInvalidBelowT1 { .. })
        ));
    }

    #[test]
    fn certificate_mismatches_error() {
        let meta = g_meta(&[0.0, 2.0], 1.0, 1.0);
        assert!(regret_bound(PolicyKind::RUcb, &meta, &ln_f(), None, 55).is_err());
        let sg = sg_meta(&[0.0, 2.0], 1.0);
        assert!(regret_bound(PolicyKind::RUcbG, &sg, &ln_f(), None, 55).is_err());
        assert!(compute_tmin(PolicyKind::RUcbGMom, &sg, &ln_f(), None).is_err());
        // MoM needs the decay function
        let g = g_meta(&[0.0, 2.0], 1.0, 1.0);
        assert!(regret_bound(PolicyKind::RUcbGMom, &g, &ln_f(), None, 55).is_err());
    }

    #[test]
    fn tmin_sg_matches_inverse_threshold() {
        let meta = sg_meta(&[0.0, 2.0], 1.0);
        let report = compute_tmin(PolicyKind::RUcb, &meta, &ln_f(), None).unwrap();
        assert_eq!(report.t_min, 2981);
        assert_eq!(report.components.len(), 1);
        // defining inequality holds at t_min, fails at t_min - 1
        let f = ln_f();
        assert!(f.eval(2981).unwrap() >= 8.0);
        assert!(f.eval(2980).unwrap() < 8.0);
        assert!(!report.crossovers.is_empty());
        assert_eq!(report.t_min, report.components.iter().map(|c| c.t).max().unwrap());
    }

    #[test]
    fn tmin_rucbg_components() {
        let meta = g_meta(&[0.0, 2.0], 1.0, 1.0);
        let report = compute_tmin(PolicyKind::RUcbG, &meta, &ln_f(), None).unwrap();
        let t0 = report.components.iter().find(|c| c.name == "t0").unwrap();
        let t1 = report.components.iter().find(|c| c.name == "t1").unwrap();
        assert_eq!(t0.t, 3);
        assert_eq!(t1.t, 16);
        assert_eq!(report.t_min, 16);
        // t1 condition: holds at 16, fails at 15
        let f = ln_f();
        assert!(2.0 * f.eval(16).unwrap().ln() > 2.0);
        assert!(2.0 * f.eval(15).unwrap().ln() <= 2.0);
    }

    #[test]
    fn tmin_mom_components() {
        let meta = g_meta(&[0.0, 2.0], 1.0, 1.0);
        let g = DecayFn::inv_log_power(1.0, 1.0).unwrap();
        let report = compute_tmin(PolicyKind::RUcbGMom, &meta, &ln_f(), Some(&g)).unwrap();
        assert_eq!(report.t_min, 32);
        let tg = report
            .components
            .iter()
            .find(|c| c.name == "t0_decay")
            .unwrap();
        let tf = report
            .components
            .iter()
            .find(|c| c.name == "t0_scaling")
            .unwrap();
        assert_eq!(tg.t, 8);
        assert_eq!(tf.t, 32);
        // each condition holds at its own threshold and fails just below
        assert!(g.eval(8).unwrap() < 0.5);
        assert!(g.eval(7).unwrap() >= 0.5);
        let f = ln_f();
        assert!(f.eval(32).unwrap().powi(2) > 12.0);
        assert!(f.eval(31).unwrap().powi(2) <= 12.0);
    }

    #[test]
    fn tmin_without_positive_gaps_has_no_gap_component() {
        let meta = g_meta(&[0.0, 0.0], 1.0, 1.0);
        let report = compute_tmin(PolicyKind::RUcbG, &meta, &ln_f(), None).unwrap();
        assert!(report.components.iter().all(|c| c.name != "t1"));
        assert_eq!(report.t_min, 3);
    }

    #[test]
    fn sub_threshold_pulls_hand_values() {
        let meta = sg_meta(&[0.0, 2.0], 1.0);
        let v = sub_threshold_pulls(&meta, &ln_f(), 10, 5).unwrap();
        assert_close(v, 5.11169171232996, 1e-10);

        // exponent-zero case: c_hat * f(t) * ln t = 1 collapses to t
        let f = ScalingFn::constant(2.0 / (10f64).ln()).unwrap();
        let v = sub_threshold_pulls(&meta, &f, 10, 5).unwrap();
        assert_close(v, 10.0, 1e-9);

        // empty sum
        let v = sub_threshold_pulls(&meta, &ln_f(), 10, 10).unwrap();
        assert_close(v, 10.0, 0.0);
        assert!(sub_threshold_pulls(&meta, &ln_f(), 10, 11).is_err());

        // bounded-support class uses 2/(b-a)^2
        let bounded =
            InstanceMeta::new(vec![0.0, 1.0], Certificate::Bounded { lo: 0.0, hi: 1.0 }).unwrap();
        let direct = 5.0 + 5.0 * ((1.0 - 2.0 * (10f64).ln().powi(2)) * (10f64).ln()).exp();
        let v = sub_threshold_pulls(&bounded, &ln_f(), 10, 5).unwrap();
        assert_close(v, direct, 1e-12);

        let heavy = g_meta(&[0.0, 1.0], 1.0, 1.0);
        assert!(sub_threshold_pulls(&heavy, &ln_f(), 10, 5).is_err());
    }

    #[test]
    fn lower_bound_curve_values() {
        let meta = sg_meta(&[0.0, 1.0], 1.0)
            .with_family(LowerBoundFamily::GaussianFixedSigma { sigma: 1.0 });
        // d = 1/(2 sigma^2) = 0.5, so the curve is 2 ln n
        for n in [3u64, 100, 1_000_000] {
            let v = lower_bound_curve(&meta, n).unwrap();
            assert_close(v, 2.0 * (n as f64).ln(), 1e-12);
        }

        let flat = sg_meta(&[0.0, 0.0], 1.0)
            .with_family(LowerBoundFamily::GaussianFixedSigma { sigma: 1.0 });
        assert_eq!(lower_bound_curve(&flat, 100).unwrap(), 0.0);

        let oblivious = sg_meta(&[0.0, 1.0], 1.0).with_family(LowerBoundFamily::Oblivious);
        assert!(matches!(
            lower_bound_curve(&oblivious, 100),
            Err(Error::LowerBoundInfinite)
        ));

        let bern = InstanceMeta::new(vec![0.0, 0.2], Certificate::Sg { sigma: 1.0 })
            .unwrap()
            .with_family(LowerBoundFamily::Bernoulli { mu_star: 0.5 });
        let d = bernoulli_kl(0.3, 0.5);
        let v = lower_bound_curve(&bern, 100).unwrap();
        assert_close(v, 0.2 / d * (100f64).ln(), 1e-12);

        let undeclared = sg_meta(&[0.0, 1.0], 1.0);
        assert!(lower_bound_curve(&undeclared, 100).is_err());
    }

    #[test]
    fn bounds_grow_superlogarithmically_and_sublinearly() {
        let sg = sg_meta(&[0.0, 2.0], 1.0);
        let g_cert = g_meta(&[0.0, 2.0], 1.0, 1.0);
        let f = ln_f();

        let grid = |from: u64| {
            let mut ts = Vec::new();
            let mut t = from;
            while t <= 10_000_000 {
                ts.push(t);
                t = (t as f64 * 1.6) as u64 + 1;
            }
            ts
        };

        // R-UCB/sg from its t_min
        let eval_sg = |t: u64| regret_bound(PolicyKind::RUcb, &sg, &f, None, t).unwrap();
        check_growth(&grid(2981), eval_sg);

        // R-UCB-G from a round where the denominator has healed (the bound
        // spikes right above t1 and decreases while 2/(gap ln f) recedes).
        let eval_g = |t: u64| regret_bound(PolicyKind::RUcbG, &g_cert, &f, None, t).unwrap();
        check_growth(&grid(200), eval_g);

        // MoM with the consistency-constructed pair; the raw (ln t, 1/ln t)
        // pair makes the MoM bound superlinear, so it cannot witness
        // sublinearity.
        let (fc, gc) =
            crate::scaling::from_consistency_target(ScalingFn::log_power(1.0, 2.0).unwrap(), 0.5)
                .unwrap();
        let eval_mom =
            |t: u64| regret_bound(PolicyKind::RUcbGMom, &g_cert, &fc, Some(&gc), t).unwrap();
        check_growth(&grid(1_000), eval_mom);
    }

    fn check_growth(ts: &[u64], eval: impl Fn(u64) -> f64) {
        let mut prev = f64::NEG_INFINITY;
        let mut prev_log_ratio = f64::NEG_INFINITY;
        let mut prev_per_round = f64::INFINITY;
        for &t in ts {
            let v = eval(t);
            assert!(v >= prev, "bound decreased at t={t}");
            let log_ratio = v / (t as f64).ln();
            assert!(
                log_ratio >= prev_log_ratio * (1.0 - 1e-12),
                "bound/ln t decreased at t={t}"
            );
            let per_round = v / t as f64;
            assert!(per_round <= prev_per_round, "bound/t increased at t={t}");
            prev = v;
            prev_log_ratio = log_ratio;
            prev_per_round = per_round;
        }
    }
}
