//! Ordered-regime extraction.
//!
//! Transition `t` (from record `t` to `t + 1`) is ordered when the tracked
//! field barely moves: `|h(t+1) − h(t)| < threshold`. Ordered intervals are
//! the maximal runs of consecutive ordered transitions.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedInterval {
    /// Index of the first ordered transition.
    pub start: usize,
    /// Number of consecutive ordered transitions.
    pub duration: usize,
    /// The interval runs into the final transition, so its true length is
    /// unknown.
    pub censored: bool,
}

impl OrderedInterval {
    /// One past the last transition of the interval.
    pub fn end(&self) -> usize {
        self.start + self.duration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseStats {
    pub intervals: Vec<OrderedInterval>,
    pub ordered_transitions: usize,
    pub total_transitions: usize,
    pub ratio: f64,
}

impl PhaseStats {
    /// Durations of the uncensored intervals, the sample used for rate fits.
    pub fn complete_durations(&self) -> Vec<u64> {
        self.intervals
            .iter()
            .filter(|iv| !iv.censored)
            .map(|iv| iv.duration as u64)
            .collect()
    }
}

pub fn extract_ordered_intervals(h: &[f64], threshold: f64) -> Result<Vec<OrderedInterval>> {
    if h.len() < 2 {
        return Err(Error::InsufficientData("need at least two recorded steps"));
    }
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument("threshold must be positive"));
    }
    let last = h.len() - 2;
    let mut out = Vec::new();
    let mut open: Option<usize> = None;
    for (t, w) in h.windows(2).enumerate() {
        let ordered = (w[1] - w[0]).abs() < threshold;
        match (ordered, open) {
            (true, None) => open = Some(t),
            (false, Some(start)) => {
                out.push(OrderedInterval {
                    start,
                    duration: t - start,
                    censored: false,
                });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        out.push(OrderedInterval {
            start,
            duration: last + 1 - start,
            censored: true,
        });
    }
    Ok(out)
}

/// Occupancy of the ordered phase. Censored intervals count toward the ratio.
pub fn phase_stats(
    intervals: Vec<OrderedInterval>,
    total_transitions: usize,
) -> Result<PhaseStats> {
    if total_transitions == 0 {
        return Err(Error::InvalidArgument(
            "total transitions must be at least 1",
        ));
    }
    let ordered_transitions: usize = intervals.iter().map(|iv| iv.duration).sum();
    if ordered_transitions > total_transitions {
        return Err(Error::InvalidArgument(
            "intervals exceed the number of transitions",
        ));
    }
    let ratio = ordered_transitions as f64 / total_transitions as f64;
    Ok(PhaseStats {
        intervals,
        ordered_transitions,
        total_transitions,
        ratio,
    })
}

/// Extraction followed by [`phase_stats`] over all `h.len() - 1` transitions.
pub fn analyze(h: &[f64], threshold: f64) -> Result<PhaseStats> {
    let intervals = extract_ordered_intervals(h, threshold)?;
    phase_stats(intervals, h.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn iv(start: usize, duration: usize, censored: bool) -> OrderedInterval {
        OrderedInterval {
            start,
            duration,
            censored,
        }
    }

    #[test]
    fn constant_series_is_one_censored_interval() {
        let out = extract_ordered_intervals(&[0.0; 5], 0.5).unwrap();
        assert_eq!(out, vec![iv(0, 4, true)]);
    }

    #[test]
    fn no_ordered_transitions() {
        assert!(extract_ordered_intervals(&[0.0, 1.0, 0.0, 1.0], 0.5)
            .unwrap()
            .is_empty());
        // strict inequality: a jump of exactly the threshold is disordered
        assert!(extract_ordered_intervals(&[0.0, 0.5, 1.0], 0.5)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn mixed_series() {
        // differences 0.2, 0.8, 0.1, 0.1, 1.8
        let out = extract_ordered_intervals(&[0.0, 0.2, 1.0, 1.1, 1.2, 3.0], 0.5).unwrap();
        assert_eq!(out, vec![iv(0, 1, false), iv(2, 2, false)]);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            extract_ordered_intervals(&[1.0], 0.5),
            Err(Error::InsufficientData("need at least two recorded steps"))
        );
    }

    #[test]
    fn stats_arithmetic() {
        let s = phase_stats(vec![iv(0, 1, false), iv(2, 2, false)], 5).unwrap();
        assert_eq!(s.ordered_transitions, 3);
        assert!((s.ratio - 0.6).abs() < 1e-15);
        assert_eq!(phase_stats(vec![], 5).unwrap().ratio, 0.0);
        assert!(phase_stats(vec![], 0).is_err());
    }

    #[test]
    fn censored_counts_in_ratio_not_in_durations() {
        let s = analyze(&[0.0, 2.0, 2.0, 2.0], 0.5).unwrap();
        assert_eq!(s.intervals, vec![iv(1, 2, true)]);
        assert!((s.ratio - 2.0 / 3.0).abs() < 1e-15);
        assert!(s.complete_durations().is_empty());
    }
}
