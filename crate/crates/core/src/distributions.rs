//! Arm reward models: sampling, analytic moments, KL divergence, and the
//! bounded-support mean-shift perturbation behind the lower-bound argument.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::{Error, Result};
use crate::textform::{canonical_name, parse_f64, split_args, split_callable};

/// Sample count for the Monte-Carlo fallback of [`ArmModel::tail_mean`].
pub const TAIL_MEAN_MC_SAMPLES: u64 = 1_000_000;

/// Fixed seed for the Monte-Carlo fallback, so `tail_mean` is deterministic.
const TAIL_MEAN_MC_SEED: u64 = 0x7A11_3EA9;

/// A reward distribution attached to one arm.
///
/// Build models through the validating constructors ([`ArmModel::uniform`],
/// [`ArmModel::pareto`], ...); operations assume the invariants they enforce
/// (e.g. `lo < hi`, finite mean).
#[derive(Debug, Clone, PartialEq)]
pub enum ArmModel {
    /// Value 1 with probability `p`, else 0.
    Bernoulli { p: f64 },
    /// Uniform on `[lo, hi]`, `lo < hi`.
    Uniform { lo: f64, hi: f64 },
    Gaussian { mean: f64, std_dev: f64 },
    /// `shift + Exp(rate)`.
    Exponential { rate: f64, shift: f64 },
    /// Pareto with scale `x_m > 0` and shape `a > 1` (finite mean).
    Pareto { scale: f64, shape: f64 },
    PointMass { value: f64 },
    /// Mean-shift perturbation of a bounded base model: with probability
    /// `1 - gamma` draw from `base`, otherwise uniform on
    /// `(upper, extended_upper]`. The CDF is `(1 - gamma) * F(x)` on the base
    /// support, which fixes the KL divergence from the base at
    /// `-ln(1 - gamma)` independent of `extended_upper`.
    Perturbed {
        base: Box<ArmModel>,
        gamma: f64,
        upper: f64,
        extended_upper: f64,
    },
}

/// Result of [`ArmModel::tail_mean`]: `stderr` is `Some` when the value was
/// estimated by the Monte-Carlo fallback rather than computed in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMean {
    pub value: f64,
    pub stderr: Option<f64>,
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

fn finite(x: f64, what: &str) -> Result<()> {
    require(x.is_finite(), || format!("{what} must be finite, got {x}"))
}

impl ArmModel {
    pub fn bernoulli(p: f64) -> Result<Self> {
        finite(p, "bernoulli p")?;
        require((0.0..=1.0).contains(&p), || {
            format!("bernoulli p must lie in [0, 1], got {p}")
        })?;
        Ok(ArmModel::Bernoulli { p })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        finite(lo, "uniform lo")?;
        finite(hi, "uniform hi")?;
        require(lo < hi, || format!("uniform requires lo < hi, got [{lo}, {hi}]"))?;
        Ok(ArmModel::Uniform { lo, hi })
    }

    pub fn gaussian(mean: f64, std_dev: f64) -> Result<Self> {
        finite(mean, "gaussian mean")?;
        finite(std_dev, "gaussian std_dev")?;
        require(std_dev > 0.0, || {
            format!("gaussian std_dev must be > 0, got {std_dev}")
        })?;
        Ok(ArmModel::Gaussian { mean, std_dev })
    }

    pub fn exponential(rate: f64, shift: f64) -> Result<Self> {
        finite(rate, "exponential rate")?;
        finite(shift, "exponential shift")?;
        require(rate > 0.0, || format!("exponential rate must be > 0, got {rate}"))?;
        Ok(ArmModel::Exponential { rate, shift })
    }

    pub fn pareto(scale: f64, shape: f64) -> Result<Self> {
        finite(scale, "pareto scale")?;
        finite(shape, "pareto shape")?;
        require(scale > 0.0, || format!("pareto scale must be > 0, got {scale}"))?;
        require(shape > 1.0, || {
            format!("pareto shape must be > 1 for a finite mean, got {shape}")
        })?;
        Ok(ArmModel::Pareto { scale, shape })
    }

    pub fn point_mass(value: f64) -> Result<Self> {
        finite(value, "point mass value")?;
        Ok(ArmModel::PointMass { value })
    }

    pub fn perturbed(base: ArmModel, gamma: f64, upper: f64, extended_upper: f64) -> Result<Self> {
        finite(gamma, "perturbed gamma")?;
        finite(upper, "perturbed upper")?;
        finite(extended_upper, "perturbed extended upper")?;
        require(gamma > 0.0 && gamma < 1.0, || {
            format!("perturbed gamma must lie in (0, 1), got {gamma}")
        })?;
        require(base.is_bounded(), || {
            "perturbed base must have bounded support".to_string()
        })?;
        require(base.support().1 <= upper, || {
            format!(
                "perturbed upper {upper} must dominate the base support (up to {})",
                base.support().1
            )
        })?;
        require(extended_upper > upper, || {
            format!("perturbed requires extended_upper > upper, got {extended_upper} <= {upper}")
        })?;
        Ok(ArmModel::Perturbed {
            base: Box::new(base),
            gamma,
            upper,
            extended_upper,
        })
    }

    /// Support as `(inf, sup)`; infinite endpoints for unbounded models.
    pub fn support(&self) -> (f64, f64) {
        match self {
            ArmModel::Bernoulli { .. } => (0.0, 1.0),
            ArmModel::Uniform { lo, hi } => (*lo, *hi),
            ArmModel::Gaussian { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            ArmModel::Exponential { shift, .. } => (*shift, f64::INFINITY),
            ArmModel::Pareto { scale, .. } => (*scale, f64::INFINITY),
            ArmModel::PointMass { value } => (*value, *value),
            ArmModel::Perturbed {
                base,
                extended_upper,
                ..
            } => (base.support().0, *extended_upper),
        }
    }

    pub fn is_bounded(&self) -> bool {
        let (lo, hi) = self.support();
        lo.is_finite() && hi.is_finite()
    }

    /// Analytic mean.
    pub fn mean(&self) -> f64 {
        match self {
            ArmModel::Bernoulli { p } => *p,
            ArmModel::Uniform { lo, hi } => 0.5 * (lo + hi),
            ArmModel::Gaussian { mean, .. } => *mean,
            ArmModel::Exponential { rate, shift } => shift + 1.0 / rate,
            ArmModel::Pareto { scale, shape } => shape * scale / (shape - 1.0),
            ArmModel::PointMass { value } => *value,
            ArmModel::Perturbed {
                base,
                gamma,
                upper,
                extended_upper,
            } => (1.0 - gamma) * base.mean() + 0.5 * gamma * (extended_upper + upper),
        }
    }

    /// `E[|X|^(1+eps)]`; `f64::INFINITY` when the moment diverges.
    ///
    /// Closed forms for the bernoulli/uniform/pareto/point-mass/perturbed
    /// families; gaussian and shifted-exponential absolute moments have no
    /// elementary closed form, so they are evaluated by deterministic
    /// adaptive quadrature (accurate far beyond any tolerance used here).
    pub fn abs_moment(&self, eps: f64) -> Result<f64> {
        require(eps > 0.0 && eps.is_finite(), || {
            format!("abs_moment requires eps > 0, got {eps}")
        })?;
        let p = 1.0 + eps;
        Ok(match self {
            ArmModel::Bernoulli { p: prob } => *prob,
            ArmModel::Uniform { lo, hi } => abs_power_integral(*lo, *hi, p) / (hi - lo),
            ArmModel::Gaussian { mean, std_dev } => {
                let (mu, sd) = (*mean, *std_dev);
                let lo = mu - 40.0 * sd;
                let hi = mu + 40.0 * sd;
                let pdf = move |x: f64| {
                    let z = (x - mu) / sd;
                    (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
                };
                integrate_abs_moment(pdf, lo, hi, p)
            }
            ArmModel::Exponential { rate, shift } => {
                let (r, s) = (*rate, *shift);
                let hi = s + 60.0 / r;
                let pdf = move |x: f64| r * (-r * (x - s)).exp();
                integrate_abs_moment(pdf, s, hi, p)
            }
            ArmModel::Pareto { scale, shape } => {
                if p >= *shape {
                    f64::INFINITY
                } else {
                    shape * scale.powf(p) / (shape - p)
                }
            }
            ArmModel::PointMass { value } => value.abs().powf(p),
            ArmModel::Perturbed {
                base,
                gamma,
                upper,
                extended_upper,
            } => {
                (1.0 - gamma) * base.abs_moment(eps)?
                    + gamma * abs_power_integral(*upper, *extended_upper, p)
                        / (extended_upper - upper)
            }
        })
    }

    /// `E[|X| * 1{|X| > m}]`.
    ///
    /// Closed form for bounded families and pareto; Monte-Carlo fallback with
    /// [`TAIL_MEAN_MC_SAMPLES`] draws (and reported standard error) for
    /// gaussian and exponential.
    pub fn tail_mean(&self, m: f64) -> Result<TailMean> {
        require(m > 0.0 && m.is_finite(), || {
            format!("tail_mean requires m > 0, got {m}")
        })?;
        let exact = |value: f64| TailMean {
            value,
            stderr: None,
        };
        Ok(match self {
            ArmModel::Bernoulli { p } => exact(if 1.0 > m { *p } else { 0.0 }),
            ArmModel::Uniform { lo, hi } => exact(uniform_tail(*lo, *hi, m) / (hi - lo)),
            ArmModel::Gaussian { .. } | ArmModel::Exponential { .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(TAIL_MEAN_MC_SEED);
                let n = TAIL_MEAN_MC_SAMPLES;
                let mut sum = 0.0;
                let mut sum_sq = 0.0;
                for _ in 0..n {
                    let x = self.sample(&mut rng);
                    let g = if x.abs() > m { x.abs() } else { 0.0 };
                    sum += g;
                    sum_sq += g * g;
                }
                let mean = sum / n as f64;
                let var = (sum_sq / n as f64 - mean * mean).max(0.0);
                TailMean {
                    value: mean,
                    stderr: Some((var / n as f64).sqrt()),
                }
            }
            ArmModel::Pareto { scale, shape } => {
                let cut = m.max(*scale);
                exact(shape * scale.powf(*shape) * cut.powf(1.0 - shape) / (shape - 1.0))
            }
            ArmModel::PointMass { value } => exact(if value.abs() > m { value.abs() } else { 0.0 }),
            ArmModel::Perturbed {
                base,
                gamma,
                upper,
                extended_upper,
            } => {
                let base_tail = base.tail_mean(m)?;
                debug_assert!(base_tail.stderr.is_none());
                let spike = uniform_tail(*upper, *extended_upper, m) / (extended_upper - upper);
                exact((1.0 - gamma) * base_tail.value + gamma * spike)
            }
        })
    }

    /// One draw. Advancing the same rng state with the same model yields a
    /// deterministic sequence.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ArmModel::Bernoulli { p } => {
                if rng.random::<f64>() < *p {
                    1.0
                } else {
                    0.0
                }
            }
            ArmModel::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            ArmModel::Gaussian { mean, std_dev } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + std_dev * z
            }
            ArmModel::Exponential { rate, shift } => {
                shift + exponential_inv_cdf(*rate, rng.random::<f64>())
            }
            ArmModel::Pareto { scale, shape } => pareto_inv_cdf(*scale, *shape, rng.random::<f64>()),
            ArmModel::PointMass { value } => *value,
            ArmModel::Perturbed {
                base,
                gamma,
                upper,
                extended_upper,
            } => {
                if rng.random::<f64>() < 1.0 - gamma {
                    base.sample(rng)
                } else {
                    // uniform on (upper, extended_upper]
                    extended_upper - (extended_upper - upper) * rng.random::<f64>()
                }
            }
        }
    }

    /// Builds the mean-shift perturbation of a bounded model: the result has
    /// `kl_divergence(self, out) = a` and `mean(out) >= b`.
    ///
    /// `gamma = 1 - e^(-a)`; `extended_upper` solves the mean equation
    /// `(1-gamma) mu + gamma (v' + v)/2 = b`, nudged above the support when
    /// the solution degenerates.
    pub fn perturb_bounded(&self, a: f64, b: f64) -> Result<ArmModel> {
        require(self.is_bounded(), || {
            format!("cannot perturb `{self}`: unbounded support")
        })?;
        require(a > 0.0 && a.is_finite(), || {
            format!("perturbation divergence budget must be > 0, got {a}")
        })?;
        let mu = self.mean();
        require(b > mu && b.is_finite(), || {
            format!("target mean {b} must exceed the base mean {mu}")
        })?;
        let gamma = 1.0 - (-a).exp();
        let upper = self.support().1;
        let solved = 2.0 * (b - (1.0 - gamma) * mu) / gamma - upper;
        let extended_upper = solved.max(upper * (1.0 + 1e-9));
        ArmModel::perturbed(self.clone(), gamma, upper, extended_upper)
    }
}

/// `int_lo^hi |x|^p dx` via the sign-carrying antiderivative.
fn abs_power_integral(lo: f64, hi: f64, p: f64) -> f64 {
    let anti = |x: f64| x.signum() * x.abs().powf(p + 1.0) / (p + 1.0);
    anti(hi) - anti(lo)
}

/// `int over [lo, hi] of |x| * 1{|x| > m} dx` (unnormalized).
fn uniform_tail(lo: f64, hi: f64, m: f64) -> f64 {
    // antiderivative of |x|
    let anti = |x: f64| 0.5 * x * x.abs();
    let mut total = 0.0;
    // piece below -m
    let left_hi = hi.min(-m);
    if lo < left_hi {
        total += anti(left_hi) - anti(lo);
    }
    // piece above m
    let right_lo = lo.max(m);
    if right_lo < hi {
        total += anti(hi) - anti(right_lo);
    }
    total.abs()
}

fn pareto_inv_cdf(scale: f64, shape: f64, u: f64) -> f64 {
    scale * (1.0 - u).powf(-1.0 / shape)
}

fn exponential_inv_cdf(rate: f64, u: f64) -> f64 {
    -(1.0 - u).ln() / rate
}

/// `E[|X|^p]` for a density `pdf` supported on `[lo, hi]`, splitting at the
/// kink of `|x|^p` when the interval straddles zero.
fn integrate_abs_moment(pdf: impl Fn(f64) -> f64 + Copy, lo: f64, hi: f64, p: f64) -> f64 {
    let f = move |x: f64| x.abs().powf(p) * pdf(x);
    if lo < 0.0 && hi > 0.0 {
        adaptive_simpson(f, lo, 0.0) + adaptive_simpson(f, 0.0, hi)
    } else {
        adaptive_simpson(f, lo, hi)
    }
}

fn adaptive_simpson(f: impl Fn(f64) -> f64 + Copy, a: f64, b: f64) -> f64 {
    fn simpson(f: impl Fn(f64) -> f64, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse(
        f: impl Fn(f64) -> f64 + Copy,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, left, 0.5 * tol, depth - 1) + recurse(f, m, b, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    recurse(f, a, b, simpson(f, a, m, b), 1e-13, 48)
}

/// KL divergence `D(f || fp)` for the supported pairs: identical models,
/// gaussian–gaussian, bernoulli–bernoulli, and `(base, perturbed(base, ..))`.
pub fn kl_divergence(f: &ArmModel, fp: &ArmModel) -> Result<f64> {
    if f == fp {
        return Ok(0.0);
    }
    match (f, fp) {
        (
            ArmModel::Gaussian {
                mean: m1,
                std_dev: s1,
            },
            ArmModel::Gaussian {
                mean: m2,
                std_dev: s2,
            },
        ) => Ok((s2 / s1).ln() + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2.0 * s2 * s2) - 0.5),
        (ArmModel::Bernoulli { p }, ArmModel::Bernoulli { p: q }) => Ok(bernoulli_kl(*p, *q)),
        (base_f, ArmModel::Perturbed { base, gamma, .. }) if base.as_ref() == base_f => {
            Ok(-(1.0 - gamma).ln())
        }
        _ => Err(Error::NoClosedFormKl),
    }
}

/// KL divergence between Bernoulli(p) and Bernoulli(q), with the usual
/// `0 ln 0 = 0` convention; infinite when q is degenerate and p differs.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    let term = |a: f64, b: f64| {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    };
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// A bandit instance: an ordered list of arms with precomputed gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    arms: Vec<ArmModel>,
    mu_star: f64,
    gaps: Vec<f64>,
}

impl BanditInstance {
    pub fn new(arms: Vec<ArmModel>) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::InvalidParameter(
                "a bandit instance needs at least one arm".into(),
            ));
        }
        let mu_star = arms
            .iter()
            .map(ArmModel::mean)
            .fold(f64::NEG_INFINITY, f64::max);
        let gaps = arms.iter().map(|a| mu_star - a.mean()).collect();
        Ok(BanditInstance {
            arms,
            mu_star,
            gaps,
        })
    }

    pub fn arms(&self) -> &[ArmModel] {
        &self.arms
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn mu_star(&self) -> f64 {
        self.mu_star
    }

    /// Sub-optimality gaps, one per arm; at least one is exactly zero.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }
}

impl fmt::Display for ArmModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArmModel::Bernoulli { p } => write!(f, "bernoulli({p})"),
            ArmModel::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
            ArmModel::Gaussian { mean, std_dev } => write!(f, "gaussian({mean},{std_dev})"),
            ArmModel::Exponential { rate, shift } => write!(f, "exponential({rate},{shift})"),
            ArmModel::Pareto { scale, shape } => write!(f, "pareto({scale},{shape})"),
            ArmModel::PointMass { value } => write!(f, "point_mass({value})"),
            ArmModel::Perturbed {
                base,
                gamma,
                upper,
                extended_upper,
            } => write!(f, "perturbed({base},{gamma},{upper},{extended_upper})"),
        }
    }
}

impl FromStr for ArmModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args_text) = split_callable(s)?;
        let args = split_args(args_text);
        let expect = |n: usize| -> Result<()> {
            require(args.len() == n, || {
                format!("`{name}` expects {n} argument(s), got {}", args.len())
            })
        };
        match canonical_name(name).as_str() {
            "bernoulli" => {
                expect(1)?;
                ArmModel::bernoulli(parse_f64(args[0], "bernoulli p")?)
            }
            "uniform" => {
                expect(2)?;
                ArmModel::uniform(
                    parse_f64(args[0], "uniform lo")?,
                    parse_f64(args[1], "uniform hi")?,
                )
            }
            "gaussian" => {
                expect(2)?;
                ArmModel::gaussian(
                    parse_f64(args[0], "gaussian mean")?,
                    parse_f64(args[1], "gaussian std_dev")?,
                )
            }
            "exponential" => {
                require(args.len() == 1 || args.len() == 2, || {
                    format!("`exponential` expects 1 or 2 arguments, got {}", args.len())
                })?;
                let shift = if args.len() == 2 {
                    parse_f64(args[1], "exponential shift")?
                } else {
                    0.0
                };
                ArmModel::exponential(parse_f64(args[0], "exponential rate")?, shift)
            }
            "pareto" => {
                expect(2)?;
                ArmModel::pareto(
                    parse_f64(args[0], "pareto scale")?,
                    parse_f64(args[1], "pareto shape")?,
                )
            }
            "pointmass" => {
                expect(1)?;
                ArmModel::point_mass(parse_f64(args[0], "point mass value")?)
            }
            "perturbed" => {
                expect(4)?;
                ArmModel::perturbed(
                    args[0].parse()?,
                    parse_f64(args[1], "perturbed gamma")?,
                    parse_f64(args[2], "perturbed upper")?,
                    parse_f64(args[3], "perturbed extended upper")?,
                )
            }
            other => Err(Error::Parse(format!("unknown distribution `{other}`"))),
        }
    }
}
