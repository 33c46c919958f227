//! Incremental mean estimators used by the policies.
//!
//! The truncated-mean state exploits that truncation levels are queried with
//! a nondecreasing schedule: a sample whose magnitude once fell below the
//! threshold stays included forever, so absorbed samples either fold into a
//! running sum or wait in a min-heap keyed by magnitude. This turns the
//! naive O(u) per-round recomputation into O(log u) amortized work.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteSample(x))
    }
}

/// Plain running mean.
#[derive(Debug, Clone, Default)]
pub struct RunningMean {
    count: u64,
    sum: f64,
}

impl RunningMean {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        self.count += 1;
        self.sum += x;
        Ok(())
    }

    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pending {
    magnitude: f64,
    value: f64,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.magnitude
            .total_cmp(&other.magnitude)
            .then(self.value.total_cmp(&other.value))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Monotone-truncated mean: `query(tau)` returns `(1/u) * sum of X over all
/// absorbed samples with |X| <= tau`, where `u` is the total absorbed count
/// (truncated-away samples still count in the divisor).
///
/// Thresholds must be queried in nondecreasing order; a violation signals a
/// non-slow-growing truncation schedule and is rejected.
#[derive(Debug, Clone)]
pub struct TruncatedMeanState {
    count: u64,
    included_sum: f64,
    pending: BinaryHeap<std::cmp::Reverse<Pending>>,
    watermark: f64,
    drain_ops: u64,
}

impl Default for TruncatedMeanState {
    fn default() -> Self {
        Self::new()
    }
}

impl TruncatedMeanState {
    pub fn new() -> Self {
        TruncatedMeanState {
            count: 0,
            included_sum: 0.0,
            pending: BinaryHeap::new(),
            watermark: f64::NEG_INFINITY,
            drain_ops: 0,
        }
    }

    pub fn absorb(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        self.count += 1;
        if x.abs() <= self.watermark {
            self.included_sum += x;
        } else {
            self.pending.push(std::cmp::Reverse(Pending {
                magnitude: x.abs(),
                value: x,
            }));
        }
        Ok(())
    }

    /// Truncated mean at threshold `tau >= watermark`; advances the watermark.
    pub fn query(&mut self, tau: f64) -> Result<f64> {
        if !tau.is_finite() {
            return Err(Error::NonFiniteSample(tau));
        }
        if self.count == 0 {
            return Err(Error::EmptyEstimator);
        }
        if tau < self.watermark {
            return Err(Error::NonMonotoneThreshold {
                requested: tau,
                watermark: self.watermark,
            });
        }
        while let Some(std::cmp::Reverse(head)) = self.pending.peek() {
            if head.magnitude <= tau {
                self.included_sum += head.value;
                self.pending.pop();
                self.drain_ops += 1;
            } else {
                break;
            }
        }
        self.watermark = tau;
        Ok(self.included_sum / self.count as f64)
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn watermark(&self) -> f64 {
        self.watermark
    }

    pub fn pending_len(&self) -> usize {
        self.pending.len()
    }

    /// Number of heap pops performed so far; each absorbed sample is popped
    /// at most once over the lifetime of the state.
    pub fn drain_ops(&self) -> u64 {
        self.drain_ops
    }
}

#[derive(Debug, Clone, Copy)]
struct MomCache {
    count: usize,
    bins: usize,
    value: f64,
}

/// Median-of-means with a round-dependent bin count.
///
/// With `u` samples at round `t`: when `u > 32 ln t`, the samples are split
/// in arrival order into bins of `N = ceil(u / q)` consecutive samples with
/// `q = ceil(32 ln t)` (the last bin may be short), and the estimate is the
/// median of the bin means; otherwise it is the median of the raw samples.
#[derive(Debug, Clone, Default)]
pub struct MoMState {
    samples: Vec<f64>,
    cache: Option<MomCache>,
}

impl MoMState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&mut self, x: f64) -> Result<()> {
        check_finite(x)?;
        self.samples.push(x);
        self.cache = None;
        Ok(())
    }

    /// Median-of-means estimate at round `t >= 3`. Bin means are recomputed
    /// only when `(u, q)` changes.
    pub fn query(&mut self, t: u64) -> Result<f64> {
        if self.samples.is_empty() {
            return Err(Error::EmptyEstimator);
        }
        if t < crate::scaling::MIN_T {
            return Err(Error::ScalingDomain(t));
        }
        let u = self.samples.len();
        let threshold = 32.0 * (t as f64).ln();
        let bins = if (u as f64) > threshold {
            threshold.ceil() as usize
        } else {
            0 // sentinel: raw-median branch
        };
        if let Some(c) = self.cache {
            if c.count == u && c.bins == bins {
                return Ok(c.value);
            }
        }
        let value = if bins > 0 {
            let chunk = u.div_ceil(bins);
            let mut means: Vec<f64> = self
                .samples
                .chunks(chunk)
                .map(|c| c.iter().sum::<f64>() / c.len() as f64)
                .collect();
            median_in_place(&mut means)
        } else {
            let mut xs = self.samples.clone();
            median_in_place(&mut xs)
        };
        self.cache = Some(MomCache {
            count: u,
            bins,
            value,
        });
        Ok(value)
    }

    pub fn count(&self) -> u64 {
        self.samples.len() as u64
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Median with the even-count convention: average of the two middle order
/// statistics.
fn median_in_place(xs: &mut [f64]) -> f64 {
    debug_assert!(!xs.is_empty());
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Naive oracle: full recomputation of the truncated mean.
    fn truncated_oracle(samples: &[f64], tau: f64) -> f64 {
        let kept: f64 = samples.iter().filter(|x| x.abs() <= tau).sum();
        kept / samples.len() as f64
    }

    /// Naive oracle: partition into consecutive chunks and take the median.
    fn mom_oracle(samples: &[f64], t: u64) -> f64 {
        let u = samples.len();
        let threshold = 32.0 * (t as f64).ln();
        let mut means: Vec<f64> = if (u as f64) > threshold {
            let q = threshold.ceil() as usize;
            let n = u.div_ceil(q);
            samples
                .chunks(n)
                .map(|c| c.iter().sum::<f64>() / c.len() as f64)
                .collect()
        } else {
            samples.to_vec()
        };
        median_in_place(&mut means)
    }

    #[test]
    fn running_mean_basics() {
        let mut m = RunningMean::new();
        assert_eq!(m.mean(), None);
        m.absorb(2.0).unwrap();
        assert_eq!(m.count(), 1);
        assert_eq!(m.mean(), Some(2.0));
        assert!(m.absorb(f64::NAN).is_err());
        assert!(m.absorb(f64::INFINITY).is_err());
    }

    #[test]
    fn truncated_mean_hand_values() {
        let mut s = TruncatedMeanState::new();
        for x in [0.5, -3.0, 2.0] {
            s.absorb(x).unwrap();
        }
        let v = s.query(1.5).unwrap();
        assert!((v - 0.5 / 3.0).abs() < 1e-15);
        // raising the threshold drains the rest
        let v = s.query(10.0).unwrap();
        assert!((v - (0.5 - 3.0 + 2.0) / 3.0).abs() < 1e-15);
        // lowering it is a monotonicity violation
        assert!(matches!(
            s.query(5.0),
            Err(Error::NonMonotoneThreshold { .. })
        ));

        let mut all_out = TruncatedMeanState::new();
        all_out.absorb(5.0).unwrap();
        all_out.absorb(7.0).unwrap();
        assert_eq!(all_out.query(0.1).unwrap(), 0.0); // divisor is u = 2

        let mut empty = TruncatedMeanState::new();
        assert!(matches!(empty.query(1.0), Err(Error::EmptyEstimator)));
    }

    #[test]
    fn truncated_absorb_respects_watermark() {
        let mut s = TruncatedMeanState::new();
        s.absorb(0.0).unwrap();
        s.query(1.5).unwrap();
        let pending_before = s.pending_len();
        s.absorb(-3.0).unwrap(); // above watermark: goes to pending
        assert_eq!(s.pending_len(), pending_before + 1);
        let v = s.query(1.5).unwrap();
        assert!((v - 0.0 / 2.0).abs() < 1e-15);
        s.absorb(1.0).unwrap(); // below watermark: folded immediately
        assert_eq!(s.pending_len(), pending_before + 1);
        assert!((s.query(1.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn truncated_matches_oracle_on_random_stream() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = TruncatedMeanState::new();
        let mut seen: Vec<f64> = Vec::new();
        let mut tau = 0.0f64;
        for step in 0..3_000 {
            let x: f64 = rng.random::<f64>() * 20.0 - 10.0;
            state.absorb(x).unwrap();
            seen.push(x);
            tau += rng.random::<f64>() * 0.02; // nondecreasing schedule
            let got = state.query(tau).unwrap();
            let want = truncated_oracle(&seen, tau);
            let scale = want.abs().max(1.0);
            assert!(
                (got - want).abs() <= 1e-12 * scale,
                "step {step}: {got} vs {want}"
            );
        }
        // each sample enters and leaves pending at most once
        assert!(state.drain_ops() <= state.count());
    }

    #[test]
    fn mom_hand_values() {
        let mut s = MoMState::new();
        for x in [1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
            s.absorb(x).unwrap();
        }
        // u = 6 <= 32 ln 3: raw median of an even count
        assert_eq!(s.query(3).unwrap(), 3.5);

        let mut alt = MoMState::new();
        for i in 0..40 {
            alt.absorb(if i % 2 == 0 { 0.0 } else { 2.0 }).unwrap();
        }
        // u = 40 > 32 ln 3 = 35.16: q = 36, N = 2, twenty bins of mean 1
        assert_eq!(alt.query(3).unwrap(), 1.0);

        let mut constant = MoMState::new();
        for _ in 0..10 {
            constant.absorb(4.25).unwrap();
        }
        for t in [3, 10, 10_000] {
            assert_eq!(constant.query(t).unwrap(), 4.25);
        }

        let mut empty = MoMState::new();
        assert!(matches!(empty.query(3), Err(Error::EmptyEstimator)));
        assert!(constant.query(2).is_err());
    }

    #[test]
    fn mom_matches_oracle_across_counts_and_rounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut state = MoMState::new();
        let mut seen = Vec::new();
        for _ in 0..500 {
            let x: f64 = rng.random::<f64>() * 6.0 - 3.0;
            state.absorb(x).unwrap();
            seen.push(x);
            for t in [3u64, 10, 100, 10_000] {
                let got = state.query(t).unwrap();
                let want = mom_oracle(&seen, t);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "u={} t={t}: {got} vs {want}",
                    seen.len()
                );
            }
        }
    }

    #[test]
    fn mom_cache_stays_coherent_when_t_moves_backwards() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut state = MoMState::new();
        let mut seen = Vec::new();
        for _ in 0..200 {
            let x: f64 = rng.random::<f64>();
            state.absorb(x).unwrap();
            seen.push(x);
        }
        for t in [10_000u64, 3, 500, 3, 10_000] {
            assert_eq!(state.query(t).unwrap(), mom_oracle(&seen, t));
        }
    }

    proptest! {
        #[test]
        fn truncated_oracle_equivalence(
            xs in proptest::collection::vec(-100.0f64..100.0, 1..120),
            steps in proptest::collection::vec(0.0f64..5.0, 1..120),
        ) {
            let mut state = TruncatedMeanState::new();
            let mut seen = Vec::new();
            let mut tau = 0.0;
            for (x, dt) in xs.iter().zip(&steps) {
                state.absorb(*x).unwrap();
                seen.push(*x);
                tau += dt;
                let got = state.query(tau).unwrap();
                let want = truncated_oracle(&seen, tau);
                prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
            }
            prop_assert!(state.drain_ops() <= state.count());
        }

        #[test]
        fn mom_oracle_equivalence(
            xs in proptest::collection::vec(-50.0f64..50.0, 1..260),
            t in 3u64..20_000,
        ) {
            let mut state = MoMState::new();
            for x in &xs {
                state.absorb(*x).unwrap();
            }
            let got = state.query(t).unwrap();
            let want = mom_oracle(&xs, t);
            prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }
}
