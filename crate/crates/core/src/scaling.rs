//! Slow-growing scaling functions `f(t)` and slow-decaying functions `g(t)`.
//!
//! These drive the confidence widths and truncation levels of the robust
//! policies. The domain starts at `t = 3` so that `ln ln t` is positive;
//! policies only evaluate scaling functions after the round-robin phase and
//! the simulator maps earlier rounds up to `t = 3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::textform::{canonical_name, parse_f64, split_args, split_callable};

/// Smallest round index in the scaling-function domain.
pub const MIN_T: u64 = 3;

/// Searches only consider thresholds below 2^63.
const SEARCH_CAP: u64 = 1 << 63;

/// A nondecreasing scaling function on integer rounds `t >= 3`.
///
/// `Constant` is admitted as a degenerate member for testing and as the
/// offset carrier in prior-informed compositions, even though a constant is
/// not slow-growing; `validate(strict = true)` rejects it.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalingFn {
    /// `scale * (ln t)^exponent`
    LogPower { scale: f64, exponent: f64 },
    /// `scale * ln ln t`
    LogLog { scale: f64 },
    /// `offset + inner(t)`
    Affine { offset: f64, inner: Box<ScalingFn> },
    /// `0.5 * exp(0.5 * (ln target(t))^(1 - rate))` for `rate` in (0, 1);
    /// built by [`from_consistency_target`].
    Consistency { target: Box<ScalingFn>, rate: f64 },
    Constant { value: f64 },
}

/// A nonincreasing, vanishing function on integer rounds `t >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub enum DecayFn {
    /// `scale * (ln t)^(-exponent)`
    InvLogPower { scale: f64, exponent: f64 },
    /// `(ln target(t))^(-rate)`; built by [`from_consistency_target`].
    Consistency { target: Box<ScalingFn>, rate: f64 },
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

/// Formulas never go nonpositive for t >= 3 with valid parameters; the clamp
/// keeps downstream logs and powers finite if they ever do.
fn clamp_pos(x: f64) -> f64 {
    if x <= 0.0 {
        1e-12
    } else {
        x
    }
}

fn check_domain(t: u64) -> Result<f64> {
    if t < MIN_T {
        Err(Error::ScalingDomain(t))
    } else {
        Ok((t as f64).ln())
    }
}

impl ScalingFn {
    pub fn log_power(scale: f64, exponent: f64) -> Result<Self> {
        require(scale > 0.0 && scale.is_finite(), || {
            format!("logpow scale must be > 0, got {scale}")
        })?;
        require(exponent > 0.0 && exponent.is_finite(), || {
            format!("logpow exponent must be > 0, got {exponent}")
        })?;
        Ok(ScalingFn::LogPower { scale, exponent })
    }

    pub fn log_log(scale: f64) -> Result<Self> {
        require(scale > 0.0 && scale.is_finite(), || {
            format!("loglog scale must be > 0, got {scale}")
        })?;
        Ok(ScalingFn::LogLog { scale })
    }

    pub fn affine(offset: f64, inner: ScalingFn) -> Result<Self> {
        require(offset >= 0.0 && offset.is_finite(), || {
            format!("affine offset must be >= 0, got {offset}")
        })?;
        Ok(ScalingFn::Affine {
            offset,
            inner: Box::new(inner),
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        require(value > 0.0 && value.is_finite(), || {
            format!("constant scaling must be > 0, got {value}")
        })?;
        Ok(ScalingFn::Constant { value })
    }

    /// Evaluates at integer round `t >= 3`.
    pub fn eval(&self, t: u64) -> Result<f64> {
        let lt = check_domain(t)?;
        let value = match self {
            ScalingFn::LogPower { scale, exponent } => scale * lt.powf(*exponent),
            ScalingFn::LogLog { scale } => scale * clamp_pos(lt).ln(),
            ScalingFn::Affine { offset, inner } => offset + inner.eval(t)?,
            ScalingFn::Consistency { target, rate } => {
                let log_target = clamp_pos(clamp_pos(target.eval(t)?).ln());
                0.5 * (0.5 * log_target.powf(1.0 - rate)).exp()
            }
            ScalingFn::Constant { value } => *value,
        };
        Ok(clamp_pos(value))
    }

    /// Smallest integer `t >= 3` with `f(t) >= y`.
    pub fn inverse_threshold(&self, y: f64) -> Result<u64> {
        require(y.is_finite(), || format!("threshold target must be finite, got {y}"))?;
        smallest_t_satisfying(
            |t| Ok(self.eval(t)? >= y),
            &format!("f(t) >= {y} for f = {self}"),
        )
    }

    /// Checks parameters; with `strict`, additionally rejects members that
    /// are not slow-growing (constants, and affine shells around them).
    pub fn validate(&self, strict: bool) -> Result<()> {
        match self {
            ScalingFn::LogPower { scale, exponent } => {
                Self::log_power(*scale, *exponent).map(|_| ())
            }
            ScalingFn::LogLog { scale } => Self::log_log(*scale).map(|_| ()),
            ScalingFn::Affine { offset, inner } => {
                require(*offset >= 0.0 && offset.is_finite(), || {
                    format!("affine offset must be >= 0, got {offset}")
                })?;
                inner.validate(strict)?;
                if strict && inner.is_effectively_constant() {
                    return Err(Error::InvalidParameter(
                        "affine with a constant inner is not slow-growing".into(),
                    ));
                }
                Ok(())
            }
            ScalingFn::Consistency { target, rate } => {
                require(*rate > 0.0 && *rate < 1.0, || {
                    format!("consistency rate must lie in (0, 1), got {rate}")
                })?;
                target.validate(true)
            }
            ScalingFn::Constant { value } => {
                require(*value > 0.0 && value.is_finite(), || {
                    format!("constant scaling must be > 0, got {value}")
                })?;
                if strict {
                    return Err(Error::InvalidParameter(
                        "a constant is not slow-growing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn is_effectively_constant(&self) -> bool {
        match self {
            ScalingFn::Constant { .. } => true,
            ScalingFn::Affine { inner, .. } => inner.is_effectively_constant(),
            _ => false,
        }
    }
}

impl DecayFn {
    pub fn inv_log_power(scale: f64, exponent: f64) -> Result<Self> {
        require(scale > 0.0 && scale.is_finite(), || {
            format!("invlogpow scale must be > 0, got {scale}")
        })?;
        require(exponent > 0.0 && exponent.is_finite(), || {
            format!("invlogpow exponent must be > 0, got {exponent}")
        })?;
        Ok(DecayFn::InvLogPower { scale, exponent })
    }

    /// Evaluates at integer round `t >= 3`.
    pub fn eval(&self, t: u64) -> Result<f64> {
        let lt = check_domain(t)?;
        let value = match self {
            DecayFn::InvLogPower { scale, exponent } => scale * lt.powf(-exponent),
            DecayFn::Consistency { target, rate } => {
                clamp_pos(clamp_pos(target.eval(t)?).ln()).powf(-rate)
            }
        };
        Ok(clamp_pos(value))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DecayFn::InvLogPower { scale, exponent } => {
                Self::inv_log_power(*scale, *exponent).map(|_| ())
            }
            DecayFn::Consistency { target, rate } => {
                require(*rate > 0.0 && *rate < 1.0, || {
                    format!("consistency rate must lie in (0, 1), got {rate}")
                })?;
                target.validate(true)
            }
        }
    }
}

/// Builds the pair `(f, g)` that keeps the median-of-means regret factor
/// `(2 f(t) / gap)^(1 / g(t))` below the target `phi(t)` for all large `t`:
/// `f(t) = 0.5 exp(0.5 (ln phi(t))^(1-c))` and `g(t) = (ln phi(t))^(-c)`.
pub fn from_consistency_target(phi: ScalingFn, c: f64) -> Result<(ScalingFn, DecayFn)> {
    require(c > 0.0 && c < 1.0, || {
        format!("consistency rate must lie in (0, 1), got {c}")
    })?;
    phi.validate(true)?;
    let f = ScalingFn::Consistency {
        target: Box::new(phi.clone()),
        rate: c,
    };
    let g = DecayFn::Consistency {
        target: Box::new(phi),
        rate: c,
    };
    Ok((f, g))
}

/// Prior-informed scaling for sub-gaussian-looking instances:
/// `f(t) = 8 sigma^2 + h(t)`.
pub fn prior_informed_sg(sigma_guess: f64, h: ScalingFn) -> Result<ScalingFn> {
    require(sigma_guess > 0.0 && sigma_guess.is_finite(), || {
        format!("sigma guess must be > 0, got {sigma_guess}")
    })?;
    h.validate(false)?;
    ScalingFn::affine(8.0 * sigma_guess * sigma_guess, h)
}

/// Prior-informed scaling for heavy-tailed instances: `f(t) = c + h(t)`
/// where `c` is the smallest value > 1 with `ln x <= x^eps / (3B)` for all
/// `x >= c`.
pub fn prior_informed_g(eps_guess: f64, b_guess: f64, h: ScalingFn) -> Result<ScalingFn> {
    require(eps_guess > 0.0 && eps_guess.is_finite(), || {
        format!("eps guess must be > 0, got {eps_guess}")
    })?;
    require(b_guess > 0.0 && b_guess.is_finite(), || {
        format!("moment-bound guess must be > 0, got {b_guess}")
    })?;
    h.validate(false)?;
    ScalingFn::affine(heavy_tail_offset(eps_guess, b_guess), h)
}

/// Largest root of `x^eps / (3B) - ln x`, or `1 + 1e-9` when the inequality
/// `ln x <= x^eps / (3B)` already holds on all of `x > 1`.
fn heavy_tail_offset(eps: f64, b: f64) -> f64 {
    let margin = |x: f64| x.powf(eps) / (3.0 * b) - x.ln();
    // margin is decreasing then increasing with its minimum here
    let dip = (3.0 * b / eps).powf(1.0 / eps);
    if dip <= 1.0 || margin(dip) >= 0.0 {
        return 1.0 + 1e-9;
    }
    let mut lo = dip;
    let mut hi = 2.0 * dip;
    while margin(hi) < 0.0 {
        hi *= 2.0;
    }
    // scan-and-bisect on the upcrossing, tolerance 1e-9
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if margin(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest `t >= 3` satisfying a monotone predicate, by doubling and
/// bisection; errors if the predicate is not satisfied below 2^63.
pub(crate) fn smallest_t_satisfying<F>(pred: F, what: &str) -> Result<u64>
where
    F: Fn(u64) -> Result<bool>,
{
    if pred(MIN_T)? {
        return Ok(MIN_T);
    }
    let mut lo = MIN_T;
    let mut hi = MIN_T;
    loop {
        hi = hi.saturating_mul(2);
        if hi >= SEARCH_CAP {
            hi = SEARCH_CAP - 1;
            if !pred(hi)? {
                return Err(Error::ThresholdOverflow(what.to_string()));
            }
            break;
        }
        if pred(hi)? {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

impl fmt::Display for ScalingFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingFn::LogPower { scale, exponent } => write!(f, "logpow({scale},{exponent})"),
            ScalingFn::LogLog { scale } => write!(f, "loglog({scale})"),
            ScalingFn::Affine { offset, inner } => write!(f, "affine({offset}, {inner})"),
            ScalingFn::Consistency { target, rate } => write!(f, "consistency({target}, {rate})"),
            ScalingFn::Constant { value } => write!(f, "const({value})"),
        }
    }
}

impl FromStr for ScalingFn {
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
            "logpow" => {
                expect(2)?;
                ScalingFn::log_power(
                    parse_f64(args[0], "logpow scale")?,
                    parse_f64(args[1], "logpow exponent")?,
                )
            }
            "loglog" => {
                expect(1)?;
                ScalingFn::log_log(parse_f64(args[0], "loglog scale")?)
            }
            "affine" => {
                expect(2)?;
                ScalingFn::affine(parse_f64(args[0], "affine offset")?, args[1].parse()?)
            }
            "consistency" => {
                expect(2)?;
                let phi: ScalingFn = args[0].parse()?;
                let rate = parse_f64(args[1], "consistency rate")?;
                require(rate > 0.0 && rate < 1.0, || {
                    format!("consistency rate must lie in (0, 1), got {rate}")
                })?;
                Ok(ScalingFn::Consistency {
                    target: Box::new(phi),
                    rate,
                })
            }
            "const" => {
                expect(1)?;
                ScalingFn::constant(parse_f64(args[0], "constant value")?)
            }
            other => Err(Error::Parse(format!("unknown scaling function `{other}`"))),
        }
    }
}

impl fmt::Display for DecayFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecayFn::InvLogPower { scale, exponent } => {
                write!(f, "invlogpow({scale},{exponent})")
            }
            DecayFn::Consistency { target, rate } => write!(f, "consistency({target}, {rate})"),
        }
    }
}

impl FromStr for DecayFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args_text) = split_callable(s)?;
        let args = split_args(args_text);
        match canonical_name(name).as_str() {
            "invlogpow" => {
                require(args.len() == 2, || {
                    format!("`invlogpow` expects 2 arguments, got {}", args.len())
                })?;
                DecayFn::inv_log_power(
                    parse_f64(args[0], "invlogpow scale")?,
                    parse_f64(args[1], "invlogpow exponent")?,
                )
            }
            "consistency" => {
                require(args.len() == 2, || {
                    format!("`consistency` expects 2 arguments, got {}", args.len())
                })?;
                let phi: ScalingFn = args[0].parse()?;
                let rate = parse_f64(args[1], "consistency rate")?;
                require(rate > 0.0 && rate < 1.0, || {
                    format!("consistency rate must lie in (0, 1), got {rate}")
                })?;
                Ok(DecayFn::Consistency {
                    target: Box::new(phi),
                    rate,
                })
            }
            other => Err(Error::Parse(format!("unknown decay function `{other}`"))),
        }
    }
}
