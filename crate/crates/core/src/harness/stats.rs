use serde::{Deserialize, Serialize};

use crate::dynamics::RunRecord;

/// Normal-approximation quantile for a two-sided 95% interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    /// Converged trials the moments are taken over.
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
    /// Only reported when no trial timed out.
    pub ci95: Option<(f64, f64)>,
    pub min: f64,
    pub max: f64,
    pub timeouts: usize,
    pub nontrivial: u64,
    pub trivial: u64,
    pub noop: u64,
}

impl SummaryStats {
    pub fn from_records(records: &[RunRecord]) -> Self {
        let samples: Vec<f64> = records.iter().filter_map(|r| r.t_con).map(|t| t as f64).collect();
        let timeouts = records.iter().filter(|r| r.timeout).count();
        let mut s = SummaryStats::from_samples(&samples);
        s.timeouts = timeouts;
        if timeouts > 0 {
            s.ci95 = None;
        }
        for r in records {
            s.nontrivial += r.nontrivial;
            s.trivial += r.trivial;
            s.noop += r.noop;
        }
        s
    }

    /// Plain moments of a sample; empty samples give zeros.
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len();
        let m = count as f64;
        let mean = if count > 0 { samples.iter().sum::<f64>() / m } else { 0.0 };
        let variance = if count > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)
        } else {
            0.0
        };
        let se = if count > 0 { (variance / m).sqrt() } else { 0.0 };
        SummaryStats {
            count,
            mean,
            variance,
            se,
            ci95: (count > 0).then_some((mean - Z95 * se, mean + Z95 * se)),
            min: samples.iter().copied().reduce(f64::min).unwrap_or(0.0),
            max: samples.iter().copied().reduce(f64::max).unwrap_or(0.0),
            timeouts: 0,
            nontrivial: 0,
            trivial: 0,
            noop: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments() {
        let s = SummaryStats::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!((s.se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        let (lo, hi) = s.ci95.unwrap();
        assert!((hi - lo - 2.0 * Z95 * s.se).abs() < 1e-12);
    }

    #[test]
    fn empty_and_single() {
        let s = SummaryStats::from_samples(&[]);
        assert_eq!((s.count, s.mean, s.ci95), (0, 0.0, None));
        let s = SummaryStats::from_samples(&[7.0]);
        assert_eq!((s.mean, s.variance, s.se), (7.0, 0.0, 0.0));
    }
}
