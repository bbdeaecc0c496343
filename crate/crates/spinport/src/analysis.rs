//! Stream-level analysis: coincidence building, causal classification, and
//! summary estimators.
//!
//! Input is a pair of timestamped detector streams, one per detector arm.
//! Coincidence building walks the polarimeter-arm (F-2) stream in time
//! order and pairs each record with the nearest-in-time unmatched trigger
//! (F-1) record inside the window; ties go to the earlier record, and every
//! record is used at most once. The process is greedy and deterministic, so
//! re-running it on the same streams always yields the same pairs.
//!
//! Estimators that would divide by zero are reported as absent values, never
//! as NaN or silently-zero numbers.

use thiserror::Error;

use crate::vec3::Vec3;
use crate::SPEED_OF_LIGHT_M_PER_S;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("{detector} stream is not time-ordered at record {index}")]
    UnsortedStream { detector: DetectorId, index: usize },
    #[error("{detector} stream has a non-finite timestamp at record {index}")]
    BadTimestamp { detector: DetectorId, index: usize },
    #[error("coincidence window must be positive and finite, got {0} s")]
    InvalidWindow(f64),
    #[error("separation must be positive and finite, got {0} m")]
    InvalidSeparation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorId {
    F1,
    F2,
}

impl std::fmt::Display for DetectorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DetectorId::F1 => "F-1",
            DetectorId::F2 => "F-2",
        })
    }
}

/// Side of the analyzer the polarimeter proton was deflected to. `None`
/// marks records from attempts the trigger rejected, which carry no
/// left/right information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deflection {
    Left,
    Right,
    None,
}

impl Deflection {
    pub fn label(self) -> &'static str {
        match self {
            Deflection::Left => "left",
            Deflection::Right => "right",
            Deflection::None => "none",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "left" => Some(Deflection::Left),
            "right" => Some(Deflection::Right),
            "none" => Some(Deflection::None),
            _ => Option::None,
        }
    }
}

/// Event metadata carried alongside each detector record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventTag {
    pub event_id: u64,
    pub accepted: bool,
    pub lr: Deflection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorRecord {
    pub timestamp_s: f64,
    pub hit_position_m: Vec3,
    pub tag: EventTag,
}

/// Time-ordered list of one detector's records.
#[derive(Debug, Clone)]
pub struct DetectorStream {
    id: DetectorId,
    records: Vec<DetectorRecord>,
}

impl DetectorStream {
    /// Wraps records after checking they are finite and non-decreasing in
    /// time. Records sharing a timestamp keep their given order, which is
    /// part of the deterministic tie-break.
    pub fn new(id: DetectorId, records: Vec<DetectorRecord>) -> Result<Self, AnalysisError> {
        for (index, r) in records.iter().enumerate() {
            if !r.timestamp_s.is_finite() {
                return Err(AnalysisError::BadTimestamp { detector: id, index });
            }
            if index > 0 && r.timestamp_s < records[index - 1].timestamp_s {
                return Err(AnalysisError::UnsortedStream { detector: id, index });
            }
        }
        Ok(DetectorStream { id, records })
    }

    pub fn id(&self) -> DetectorId {
        self.id
    }

    pub fn records(&self) -> &[DetectorRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// One matched trigger/polarimeter record pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidencePair {
    pub f1: DetectorRecord,
    pub f2: DetectorRecord,
    /// |t_f1 - t_f2|, seconds.
    pub t12_s: f64,
    /// Set by [`classify_all`]; freshly built pairs carry `false`.
    pub causal_separate: bool,
}

/// Pairs each F-2 record with the nearest unmatched F-1 record within the
/// window. Pairs come out in F-2 time order; F-2 records with no available
/// partner are dropped.
pub fn build_coincidences(
    f1: &DetectorStream,
    f2: &DetectorStream,
    window_s: f64,
) -> Result<Vec<CoincidencePair>, AnalysisError> {
    if !window_s.is_finite() || window_s <= 0.0 {
        return Err(AnalysisError::InvalidWindow(window_s));
    }
    let trig = f1.records();
    let mut used = vec![false; trig.len()];
    let mut pairs = Vec::new();
    for rec in f2.records() {
        let t2 = rec.timestamp_s;
        // First trigger index with timestamp >= t2.
        let split = trig.partition_point(|r| r.timestamp_s < t2);

        // Nearest unmatched candidate strictly before t2; among equal
        // timestamps prefer the earliest record in the stream.
        let mut left: Option<usize> = None;
        let mut i = split;
        while i > 0 {
            i -= 1;
            if t2 - trig[i].timestamp_s > window_s {
                break;
            }
            if !used[i] {
                match left {
                    Some(best) if trig[best].timestamp_s != trig[i].timestamp_s => break,
                    _ => left = Some(i),
                }
            }
        }
        // Nearest unmatched candidate at or after t2; the first unused one
        // is already the earliest.
        let mut right: Option<usize> = None;
        for (j, r) in trig.iter().enumerate().skip(split) {
            if r.timestamp_s - t2 > window_s {
                break;
            }
            if !used[j] {
                right = Some(j);
                break;
            }
        }

        let choice = match (left, right) {
            (Some(l), Some(r)) => {
                let dl = t2 - trig[l].timestamp_s;
                let dr = trig[r].timestamp_s - t2;
                // Equal distance: the left candidate is the earlier record.
                if dl <= dr {
                    Some(l)
                } else {
                    Some(r)
                }
            }
            (Some(l), None) => Some(l),
            (None, Some(r)) => Some(r),
            (None, None) => None,
        };
        if let Some(k) = choice {
            used[k] = true;
            pairs.push(CoincidencePair {
                f1: trig[k],
                f2: *rec,
                t12_s: (trig[k].timestamp_s - t2).abs(),
                causal_separate: false,
            });
        }
    }
    Ok(pairs)
}

/// The causal-separation criterion itself: the detector separation must
/// exceed the light travel distance during the arrival-time difference,
/// S > c * t12, strictly. An exact tie is not separate.
pub fn causal_separate(separation_s_m: f64, t12_s: f64) -> bool {
    separation_s_m > SPEED_OF_LIGHT_M_PER_S * t12_s
}

/// Applies the causal criterion to one coincidence pair.
pub fn classify_causal(pair: &CoincidencePair, separation_s_m: f64) -> bool {
    causal_separate(separation_s_m, pair.t12_s)
}

/// Stamps every pair's `causal_separate` flag for one separation.
pub fn classify_all(pairs: &mut [CoincidencePair], separation_s_m: f64) -> Result<(), AnalysisError> {
    if !separation_s_m.is_finite() || separation_s_m <= 0.0 {
        return Err(AnalysisError::InvalidSeparation(separation_s_m));
    }
    for p in pairs.iter_mut() {
        p.causal_separate = classify_causal(p, separation_s_m);
    }
    Ok(())
}

/// Raw counters feeding the summary estimators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub n_total: u64,
    pub n_accepted: u64,
    pub n_left: u64,
    pub n_right: u64,
    pub n_causal: u64,
}

impl Counts {
    pub fn add(&mut self, accepted: bool, lr: Deflection, causal: bool) {
        self.n_total += 1;
        if causal {
            self.n_causal += 1;
        }
        if accepted {
            self.n_accepted += 1;
            match lr {
                Deflection::Left => self.n_left += 1,
                Deflection::Right => self.n_right += 1,
                Deflection::None => {}
            }
        }
    }
}

/// Aggregated results of one run. Estimators whose denominators vanish are
/// `None`; `estimated_polarization` is additionally `None` when the
/// analyzing power is zero, which carries no polarization information.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub n_total: u64,
    pub n_accepted: u64,
    pub n_left: u64,
    pub n_right: u64,
    pub n_causal: u64,
    pub asymmetry: Option<f64>,
    pub asymmetry_error: Option<f64>,
    pub acceptance_rate: Option<f64>,
    pub estimated_polarization: Option<f64>,
    pub chsh_value: Option<f64>,
}

impl RunSummary {
    pub fn from_counts(c: Counts, analyzing_power: f64) -> Self {
        let sided = c.n_left + c.n_right;
        let asymmetry =
            (sided > 0).then(|| (c.n_left as f64 - c.n_right as f64) / sided as f64);
        let asymmetry_error =
            asymmetry.map(|a| ((1.0 - a * a) / sided as f64).sqrt());
        let acceptance_rate = (c.n_total > 0).then(|| c.n_accepted as f64 / c.n_total as f64);
        let estimated_polarization = match (asymmetry, analyzing_power) {
            (Some(a), ay) if ay != 0.0 => Some(a / ay),
            _ => None,
        };
        RunSummary {
            n_total: c.n_total,
            n_accepted: c.n_accepted,
            n_left: c.n_left,
            n_right: c.n_right,
            n_causal: c.n_causal,
            asymmetry,
            asymmetry_error,
            acceptance_rate,
            estimated_polarization,
            chsh_value: None,
        }
    }

    pub fn causal_fraction(&self) -> Option<f64> {
        (self.n_total > 0).then(|| self.n_causal as f64 / self.n_total as f64)
    }
}

/// Folds classified pairs into a [`RunSummary`]. With `causal_only` set,
/// only causally separated pairs are considered at all. The trigger flag is
/// read from the F-1 record and the deflection from the F-2 record.
pub fn summarize(pairs: &[CoincidencePair], causal_only: bool, analyzing_power: f64) -> RunSummary {
    let mut counts = Counts::default();
    for p in pairs {
        if causal_only && !p.causal_separate {
            continue;
        }
        counts.add(p.f1.tag.accepted, p.f2.tag.lr, p.causal_separate);
    }
    RunSummary::from_counts(counts, analyzing_power)
}

/// Outcome counts for the four CHSH analyzer settings (a,b), (a,b'),
/// (a',b), (a',b'). `counts[s][i][j]` holds the number of joint outcomes
/// with first-arm outcome i and second-arm outcome j, index 0 meaning +1
/// and index 1 meaning -1.
pub type SettingCounts = [[[u64; 2]; 2]; 4];

/// Correlation E = (N++ + N-- - N+- - N-+) / N for one setting; `None` for
/// an empty setting.
pub fn setting_correlation(c: &[[u64; 2]; 2]) -> Option<f64> {
    let n = c[0][0] + c[0][1] + c[1][0] + c[1][1];
    if n == 0 {
        return None;
    }
    let signed = c[0][0] as f64 + c[1][1] as f64 - c[0][1] as f64 - c[1][0] as f64;
    Some(signed / n as f64)
}

/// CHSH sum E(a,b) - E(a,b') + E(a',b) + E(a',b') from outcome counts;
/// `None` when any setting has no counts.
pub fn chsh_from_counts(counts: &SettingCounts) -> Option<f64> {
    let e: Vec<f64> = counts.iter().map(setting_correlation).collect::<Option<_>>()?;
    Some(e[0] - e[1] + e[2] + e[3])
}

/// One-sigma statistical error on [`chsh_from_counts`] assuming independent
/// binomial counts per setting; `None` when any setting is empty.
pub fn chsh_statistical_error(counts: &SettingCounts) -> Option<f64> {
    let mut var = 0.0;
    for c in counts {
        let n = c[0][0] + c[0][1] + c[1][0] + c[1][1];
        if n == 0 {
            return None;
        }
        let e = setting_correlation(c).expect("non-empty setting");
        var += (1.0 - e * e) / n as f64;
    }
    Some(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3;

    // Timestamps below are exact small doubles; the matcher is unit-blind,
    // so integer "seconds" exercise the same paths as nanoseconds without
    // last-ulp noise in the distance comparisons.
    fn rec(t_s: f64, event_id: u64, accepted: bool, lr: Deflection) -> DetectorRecord {
        DetectorRecord {
            timestamp_s: t_s,
            hit_position_m: vec3::ZERO,
            tag: EventTag { event_id, accepted, lr },
        }
    }

    fn stream(id: DetectorId, recs: Vec<DetectorRecord>) -> DetectorStream {
        DetectorStream::new(id, recs).unwrap()
    }

    #[test]
    fn matches_inside_window_only() {
        let f1 = stream(DetectorId::F1, vec![rec(10.0, 0, true, Deflection::None)]);
        let f2 = stream(DetectorId::F2, vec![rec(160.0, 0, true, Deflection::Left)]);
        let pairs = build_coincidences(&f1, &f2, 100.0).unwrap();
        assert!(pairs.is_empty());

        let f2 = stream(DetectorId::F2, vec![rec(105.0, 0, true, Deflection::Left)]);
        let pairs = build_coincidences(&f1, &f2, 100.0).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].t12_s, 95.0);
    }

    #[test]
    fn nearest_wins_and_ties_go_to_the_earlier_record() {
        let f1 = stream(
            DetectorId::F1,
            vec![rec(9.0, 0, true, Deflection::None), rec(11.0, 1, true, Deflection::None)],
        );
        let f2 = stream(DetectorId::F2, vec![rec(10.0, 2, true, Deflection::Left)]);
        let pairs = build_coincidences(&f1, &f2, 5.0).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].f1.tag.event_id, 0, "tie must resolve to the earlier trigger");

        // A strictly nearer later trigger beats an earlier farther one.
        let f2 = stream(DetectorId::F2, vec![rec(10.5, 2, true, Deflection::Left)]);
        let pairs = build_coincidences(&f1, &f2, 5.0).unwrap();
        assert_eq!(pairs[0].f1.tag.event_id, 1);
    }

    #[test]
    fn each_trigger_record_is_used_at_most_once() {
        let f1 = stream(DetectorId::F1, vec![rec(10.0, 0, true, Deflection::None)]);
        let f2 = stream(
            DetectorId::F2,
            vec![rec(11.0, 1, true, Deflection::Left), rec(12.0, 2, true, Deflection::Right)],
        );
        let pairs = build_coincidences(&f1, &f2, 100.0).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].f2.tag.event_id, 1, "first polarimeter record claims the trigger");
    }

    #[test]
    fn pairs_come_out_in_polarimeter_time_order() {
        let f1 = stream(
            DetectorId::F1,
            vec![
                rec(10.0, 0, true, Deflection::None),
                rec(20.0, 1, true, Deflection::None),
                rec(30.0, 2, true, Deflection::None),
            ],
        );
        let f2 = stream(
            DetectorId::F2,
            vec![
                rec(12.0, 0, true, Deflection::Left),
                rec(21.0, 1, true, Deflection::Right),
                rec(29.0, 2, true, Deflection::Left),
            ],
        );
        let pairs = build_coincidences(&f1, &f2, 100.0).unwrap();
        let ids: Vec<u64> = pairs.iter().map(|p| p.f1.tag.event_id).collect();
        assert_eq!(ids, vec![0, 1, 2]);
        assert!(pairs.windows(2).all(|w| w[0].f2.timestamp_s <= w[1].f2.timestamp_s));
    }

    #[test]
    fn unsorted_stream_is_rejected() {
        let recs = vec![rec(10.0, 0, true, Deflection::None), rec(5.0, 1, true, Deflection::None)];
        let err = DetectorStream::new(DetectorId::F1, recs).unwrap_err();
        assert_eq!(err, AnalysisError::UnsortedStream { detector: DetectorId::F1, index: 1 });
    }

    #[test]
    fn invalid_window_is_rejected() {
        let f1 = stream(DetectorId::F1, vec![]);
        let f2 = stream(DetectorId::F2, vec![]);
        assert!(matches!(
            build_coincidences(&f1, &f2, 0.0),
            Err(AnalysisError::InvalidWindow(_))
        ));
    }

    #[test]
    fn causal_classification_is_strict() {
        let mk = |t12_s: f64| CoincidencePair {
            f1: rec(0.0, 0, true, Deflection::None),
            f2: rec(0.0, 0, true, Deflection::Left),
            t12_s,
            causal_separate: false,
        };
        // 10 ns of light travel is just under 3 m.
        assert!(classify_causal(&mk(1e-8), 3.0));
        assert!(!classify_causal(&mk(1.1e-8), 3.0));
        // Exact boundary: S == c * t12 is not separate.
        let t12 = 1e-8;
        let s = SPEED_OF_LIGHT_M_PER_S * t12;
        assert!(!classify_causal(&mk(t12), s));
        // Zero time difference is separate for any positive S.
        assert!(classify_causal(&mk(0.0), 1e-6));
    }

    #[test]
    fn summary_estimators_from_known_counts() {
        let mut c = Counts::default();
        for _ in 0..70 {
            c.add(true, Deflection::Left, true);
        }
        for _ in 0..30 {
            c.add(true, Deflection::Right, true);
        }
        let s = RunSummary::from_counts(c, 0.5);
        assert_eq!((s.n_total, s.n_accepted, s.n_left, s.n_right), (100, 100, 70, 30));
        assert!((s.asymmetry.unwrap() - 0.4).abs() < 1e-15);
        let expected_err = ((1.0 - 0.16) / 100.0_f64).sqrt();
        assert!((s.asymmetry_error.unwrap() - expected_err).abs() < 1e-15);
        assert!((expected_err - 0.0917).abs() < 1e-4);
        assert!((s.estimated_polarization.unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(s.causal_fraction(), Some(1.0));
    }

    #[test]
    fn empty_input_leaves_estimators_undefined() {
        let s = summarize(&[], false, 0.5);
        assert_eq!(s.n_total, 0);
        assert_eq!(s.asymmetry, None);
        assert_eq!(s.asymmetry_error, None);
        assert_eq!(s.acceptance_rate, None);
        assert_eq!(s.estimated_polarization, None);
        assert_eq!(s.causal_fraction(), None);
    }

    #[test]
    fn zero_analyzing_power_leaves_polarization_undefined() {
        let mut c = Counts::default();
        c.add(true, Deflection::Left, false);
        let s = RunSummary::from_counts(c, 0.0);
        assert!(s.asymmetry.is_some());
        assert_eq!(s.estimated_polarization, None);
    }

    #[test]
    fn causal_only_restricts_every_counter() {
        let mut pairs = vec![
            CoincidencePair {
                f1: rec(0.0, 0, true, Deflection::None),
                f2: rec(1.0, 0, true, Deflection::Left),
                t12_s: 1e-9,
                causal_separate: false,
            },
            CoincidencePair {
                f1: rec(100.0, 1, true, Deflection::None),
                f2: rec(125.0, 1, true, Deflection::Right),
                t12_s: 25e-9,
                causal_separate: false,
            },
        ];
        classify_all(&mut pairs, 3.0).unwrap();
        assert!(pairs[0].causal_separate);
        assert!(!pairs[1].causal_separate, "25 ns of light travel exceeds 3 m");

        let all = summarize(&pairs, false, 0.5);
        assert_eq!((all.n_total, all.n_causal), (2, 1));
        let causal = summarize(&pairs, true, 0.5);
        assert_eq!((causal.n_total, causal.n_causal), (1, 1));
        assert_eq!(causal.n_right, 0);
    }

    #[test]
    fn chsh_counts_examples() {
        // Perfect anti-correlation in one setting.
        let anti = [[0, 50], [50, 0]];
        assert!((setting_correlation(&anti).unwrap() + 1.0).abs() < 1e-15);

        // All outcomes equally likely in every setting: S = 0.
        let flat = [[25, 25], [25, 25]];
        let s = chsh_from_counts(&[flat, flat, flat, flat]).unwrap();
        assert_eq!(s, 0.0);

        // Any empty setting poisons the estimate.
        let empty = [[0, 0], [0, 0]];
        assert_eq!(chsh_from_counts(&[flat, flat, flat, empty]), None);
        assert_eq!(chsh_statistical_error(&[flat, flat, flat, empty]), None);
    }
}
