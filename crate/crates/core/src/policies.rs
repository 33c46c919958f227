//! Arm-selection policies: R-UCB, R-UCB-G, R-UCB-G-MoM, and a non-robust
//! alpha-UCB baseline used to demonstrate inconsistency under parameter
//! mismatch.
//!
//! All policies share the same skeleton: rounds `t = 1..k` pull each arm
//! once in index order; afterwards round `t` pulls the arm maximizing
//! `estimate + width(u, t)`, with ties broken toward the lowest index.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::{MoMState, RunningMean, TruncatedMeanState};
use crate::scaling::{DecayFn, ScalingFn, MIN_T};
use crate::textform::{canonical_name, parse_f64, split_args, split_callable};

/// Grid used for the `f > 1` validation of R-UCB-G scaling functions.
const VALIDATION_GRID: &[u64] = &[3, 10, 100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];

#[derive(Debug, Clone, PartialEq)]
pub enum PolicySpec {
    /// Empirical mean with width `sqrt(f(t) ln t / u)`.
    RUcb { scaling: ScalingFn },
    /// Truncated mean at level `f(t)` with width
    /// `1/ln f(t) + 16 f(t) ln t / u`; `f` must take values in `(1, inf)`.
    RUcbG { scaling: ScalingFn },
    /// Median-of-means with width `f(t) (32 ln t / u)^g(t)`.
    RUcbGMom { scaling: ScalingFn, decay: DecayFn },
    /// Classical UCB tuned for `sigma`-subgaussian rewards:
    /// width `sqrt(2 alpha sigma^2 ln t / u)`, `alpha > 1`.
    AlphaUcb { sigma: f64, alpha: f64 },
}

/// Conventional exploration parameter for the baseline.
pub const DEFAULT_ALPHA: f64 = 2.0;

impl PolicySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PolicySpec::RUcb { scaling } => scaling.validate(false),
            PolicySpec::RUcbG { scaling } => {
                scaling.validate(false)?;
                for &t in VALIDATION_GRID {
                    let v = scaling.eval(t)?;
                    if v <= 1.0 {
                        return Err(Error::InvalidParameter(format!(
                            "r-ucb-g needs f taking values in (1, inf); f({t}) = {v}"
                        )));
                    }
                }
                Ok(())
            }
            PolicySpec::RUcbGMom { scaling, decay } => {
                scaling.validate(false)?;
                decay.validate()
            }
            PolicySpec::AlphaUcb { sigma, alpha } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha-ucb sigma must be > 0, got {sigma}"
                    )));
                }
                if !(alpha.is_finite() && *alpha > 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha-ucb alpha must be > 1, got {alpha}"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
enum ArmEstimator {
    Mean(RunningMean),
    Truncated(TruncatedMeanState),
    Mom(MoMState),
}

impl ArmEstimator {
    fn absorb(&mut self, x: f64) -> Result<()> {
        match self {
            ArmEstimator::Mean(m) => m.absorb(x),
            ArmEstimator::Truncated(t) => t.absorb(x),
            ArmEstimator::Mom(m) => m.absorb(x),
        }
    }

    fn count(&self) -> u64 {
        match self {
            ArmEstimator::Mean(m) => m.count(),
            ArmEstimator::Truncated(t) => t.count(),
            ArmEstimator::Mom(m) => m.count(),
        }
    }
}

/// Per-run policy state: pull counts, per-arm estimator, round counter.
#[derive(Debug, Clone)]
pub struct PolicyState {
    spec: PolicySpec,
    num_arms: usize,
    rounds: u64,
    pulls: Vec<u64>,
    estimators: Vec<ArmEstimator>,
}

impl PolicyState {
    /// Initializes the policy for `num_arms >= 1` arms; the first
    /// `num_arms` selections are the round-robin phase.
    pub fn new(spec: PolicySpec, num_arms: usize) -> Result<Self> {
        if num_arms == 0 {
            return Err(Error::InvalidParameter(
                "a policy needs at least one arm".into(),
            ));
        }
        spec.validate()?;
        let estimators = (0..num_arms)
            .map(|_| match &spec {
                PolicySpec::RUcb { .. } | PolicySpec::AlphaUcb { .. } => {
                    ArmEstimator::Mean(RunningMean::new())
                }
                PolicySpec::RUcbG { .. } => ArmEstimator::Truncated(TruncatedMeanState::new()),
                PolicySpec::RUcbGMom { .. } => ArmEstimator::Mom(MoMState::new()),
            })
            .collect();
        Ok(PolicyState {
            spec,
            num_arms,
            rounds: 0,
            pulls: vec![0; num_arms],
            estimators,
        })
    }

    pub fn spec(&self) -> &PolicySpec {
        &self.spec
    }

    pub fn num_arms(&self) -> usize {
        self.num_arms
    }

    /// Completed rounds; equals the sum of pull counts.
    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    /// Samples absorbed by the arm's estimator (equals its pull count).
    pub fn arm_sample_count(&self, arm: usize) -> u64 {
        self.estimators[arm].count()
    }

    /// Arm to pull at round `t`: round-robin for `t <= k`, otherwise the
    /// index maximizer. Rounds below the scaling domain (only possible for
    /// `k < 3`) evaluate the scaling functions at `t = 3`.
    pub fn select_arm(&mut self, t: u64) -> Result<usize> {
        if t == 0 {
            return Err(Error::InvalidParameter("rounds are 1-based".into()));
        }
        if t <= self.num_arms as u64 {
            return Ok((t - 1) as usize);
        }
        let t_eval = t.max(MIN_T);
        let mut best = 0usize;
        let mut best_index = f64::NEG_INFINITY;
        for arm in 0..self.num_arms {
            let index = self.ucb_index(arm, t_eval)?;
            if index > best_index {
                best = arm;
                best_index = index;
            }
        }
        Ok(best)
    }

    /// Upper confidence index `estimate + width` for one arm at round `t`.
    ///
    /// Requires `u >= 1` pulls of the arm and `t >= 3`; for R-UCB-G the
    /// estimator is queried at threshold `f(t)`, advancing its watermark.
    pub fn ucb_index(&mut self, arm: usize, t: u64) -> Result<f64> {
        if arm >= self.num_arms {
            return Err(Error::InvalidParameter(format!(
                "arm index {arm} out of range for {} arms",
                self.num_arms
            )));
        }
        if t < MIN_T {
            return Err(Error::ScalingDomain(t));
        }
        let u = self.pulls[arm];
        if u == 0 {
            return Err(Error::EmptyEstimator);
        }
        let u = u as f64;
        let ln_t = (t as f64).ln();
        match (&self.spec, &mut self.estimators[arm]) {
            (PolicySpec::RUcb { scaling }, ArmEstimator::Mean(est)) => {
                let mean = est.mean().ok_or(Error::EmptyEstimator)?;
                Ok(mean + (scaling.eval(t)? * ln_t / u).sqrt())
            }
            (PolicySpec::AlphaUcb { sigma, alpha }, ArmEstimator::Mean(est)) => {
                let mean = est.mean().ok_or(Error::EmptyEstimator)?;
                Ok(mean + (2.0 * alpha * sigma * sigma * ln_t / u).sqrt())
            }
            (PolicySpec::RUcbG { scaling }, ArmEstimator::Truncated(est)) => {
                let level = scaling.eval(t)?;
                let mean = est.query(level)?;
                Ok(mean + 1.0 / level.ln() + 16.0 * level * ln_t / u)
            }
            (PolicySpec::RUcbGMom { scaling, decay }, ArmEstimator::Mom(est)) => {
                let mean = est.query(t)?;
                Ok(mean + scaling.eval(t)? * (32.0 * ln_t / u).powf(decay.eval(t)?))
            }
            _ => unreachable!("estimator kind always matches the spec"),
        }
    }

    /// Records the observed reward for `arm` at round `t = rounds() + 1`.
    pub fn update(&mut self, arm: usize, reward: f64, t: u64) -> Result<()> {
        if arm >= self.num_arms {
            return Err(Error::InvalidParameter(format!(
                "arm index {arm} out of range for {} arms",
                self.num_arms
            )));
        }
        if t != self.rounds + 1 {
            return Err(Error::InvalidParameter(format!(
                "out-of-order update: round {t} after {} completed rounds",
                self.rounds
            )));
        }
        self.estimators[arm].absorb(reward)?;
        self.pulls[arm] += 1;
        self.rounds = t;
        Ok(())
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::RUcb { scaling } => write!(f, "r-ucb(f={scaling})"),
            PolicySpec::RUcbG { scaling } => write!(f, "r-ucb-g(f={scaling})"),
            PolicySpec::RUcbGMom { scaling, decay } => {
                write!(f, "r-ucb-g-mom(f={scaling}, g={decay})")
            }
            PolicySpec::AlphaUcb { sigma, alpha } => {
                write!(f, "alpha-ucb(sigma={sigma}, alpha={alpha})")
            }
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args_text) = split_callable(s)?;
        let mut f_arg: Option<ScalingFn> = None;
        let mut g_arg: Option<DecayFn> = None;
        let mut sigma: Option<f64> = None;
        let mut alpha: Option<f64> = None;
        for arg in split_args(args_text) {
            let (key, value) = arg.split_once('=').ok_or_else(|| {
                Error::Parse(format!("expected `key=value` in policy args, got `{arg}`"))
            })?;
            match key.trim().to_ascii_lowercase().as_str() {
                "f" => f_arg = Some(value.trim().parse()?),
                "g" => g_arg = Some(value.trim().parse()?),
                "sigma" => sigma = Some(parse_f64(value, "alpha-ucb sigma")?),
                "alpha" => alpha = Some(parse_f64(value, "alpha-ucb alpha")?),
                other => {
                    return Err(Error::Parse(format!("unknown policy argument `{other}`")));
                }
            }
        }
        let need_f = || f_arg.clone().ok_or_else(|| Error::Parse("missing `f=` argument".into()));
        let spec = match canonical_name(name).as_str() {
            "rucb" => PolicySpec::RUcb { scaling: need_f()? },
            "rucbg" => PolicySpec::RUcbG { scaling: need_f()? },
            "rucbgmom" => PolicySpec::RUcbGMom {
                scaling: need_f()?,
                decay: g_arg.ok_or_else(|| Error::Parse("missing `g=` argument".into()))?,
            },
            "alphaucb" => PolicySpec::AlphaUcb {
                sigma: sigma.ok_or_else(|| Error::Parse("missing `sigma=` argument".into()))?,
                alpha: alpha.unwrap_or(DEFAULT_ALPHA),
            },
            other => return Err(Error::Parse(format!("unknown policy `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}
