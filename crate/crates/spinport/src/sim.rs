//! Monte Carlo model of the teleportation beamline.
//!
//! Per event: an entangled proton pair (p2, p3) leaves the entangling
//! target; p3 meets the polarized target proton p1 and the pair (p1, p3) is
//! measured in the Bell basis; the trigger accepts the singlet outcome.
//! Meanwhile p2 flies through the collapse point toward the carbon analyzer,
//! which deflects it left or right with probability set by its spin
//! component along the analyzer axis. Both detector arms are timestamped so
//! the analysis can test whether acceptance and deflection were causally
//! separated.
//!
//! Determinism contract: event i consumes only the dedicated counter-mode
//! substream (master_seed, i), so any subset of events can be regenerated in
//! any order, serially or in parallel, with bit-identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{
    self, causal_separate, Counts, Deflection, DetectorId, DetectorRecord, DetectorStream,
    EventTag, RunSummary, SettingCounts,
};
use crate::kinematics::{solve_elastic, time_of_flight, BeamSpec, KinematicsError};
use crate::quantum::{
    chsh, optimal_chsh_axes, spin_projector, Axis, BellOutcome, BlochVector, ChannelSpec,
    DensityOperator, QuantumError, Sign,
};
use crate::vec3::Vec3;

/// Both hydrogen-target scatterings are taken at this center-of-momentum
/// angle, the kinematic point selected by the singlet trigger.
pub const SCATTER_THETA_CM_DEG: f64 = 90.0;

/// Lateral displacement of the polarimeter-arm hit recording a left or
/// right deflection, meters. Position metadata only; the physics of the
/// deflection lives in the analyzing power.
pub const DEFLECTION_OFFSET_M: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("target polarization norm must lie in (0, 1], got {norm}")]
    PolarizationOutOfRange { norm: f64 },
    #[error("analyzing power must lie in [-1, 1], got {value}")]
    AnalyzingPowerOutOfRange { value: f64 },
    #[error("{name} must be non-negative and finite, got {value}")]
    NegativeKnob { name: &'static str, value: f64 },
    #[error("event spacing must be positive and finite, got {0} s")]
    InvalidSpacing(f64),
    #[error("detector separation must be positive and finite, got {0} m")]
    InvalidSeparation(f64),
    #[error("geometry positions must all be finite")]
    NonFiniteGeometry,
    #[error("analyzer and polarimeter detector coincide; deflection direction is undefined")]
    DegenerateDeflectionAxis,
    #[error("n_events must be positive")]
    ZeroEvents,
}

/// What the beamline feeds the experiment: beam energy, entangled-pair
/// quality, and the polarized target state that is teleported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub beam: BeamSpec,
    pub channel: ChannelSpec,
    pub ph2_polarization: BlochVector,
}

impl SourceSpec {
    pub fn new(
        beam: BeamSpec,
        channel: ChannelSpec,
        ph2_polarization: BlochVector,
    ) -> Result<Self, SimError> {
        let norm = ph2_polarization.norm();
        if norm <= 0.0 {
            return Err(SimError::PolarizationOutOfRange { norm });
        }
        Ok(SourceSpec { beam, channel, ph2_polarization })
    }
}

/// Station positions in lab coordinates, meters. `lh2_m` is the entangling
/// target, `ph2_m` the polarized target where the trigger fires, `k_m` the
/// collapse point on the other leg, `c_m` the carbon analyzer, and `f1_m` /
/// `f2_m` the two detector arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub lh2_m: Vec3,
    pub ph2_m: Vec3,
    pub k_m: Vec3,
    pub c_m: Vec3,
    pub f1_m: Vec3,
    pub f2_m: Vec3,
    /// Separation used by the causal criterion. Defaults to |ph2 - k|, the
    /// distance between the acceptance decision and the collapse point.
    pub separation_s_m: f64,
}

impl GeometryConfig {
    pub fn new(
        lh2_m: Vec3,
        ph2_m: Vec3,
        k_m: Vec3,
        c_m: Vec3,
        f1_m: Vec3,
        f2_m: Vec3,
        separation_override_m: Option<f64>,
    ) -> Result<Self, SimError> {
        for p in [lh2_m, ph2_m, k_m, c_m, f1_m, f2_m] {
            if !p.is_finite() {
                return Err(SimError::NonFiniteGeometry);
            }
        }
        if c_m.distance(f2_m) == 0.0 {
            return Err(SimError::DegenerateDeflectionAxis);
        }
        let separation_s_m = separation_override_m.unwrap_or_else(|| ph2_m.distance(k_m));
        if !separation_s_m.is_finite() || separation_s_m <= 0.0 {
            return Err(SimError::InvalidSeparation(separation_s_m));
        }
        Ok(GeometryConfig { lh2_m, ph2_m, k_m, c_m, f1_m, f2_m, separation_s_m })
    }

    /// Distance between the trigger decision and the collapse point.
    pub fn trigger_to_collapse_m(&self) -> f64 {
        self.ph2_m.distance(self.k_m)
    }

    /// Distance between the two detector arms themselves.
    pub fn detector_to_detector_m(&self) -> f64 {
        self.f1_m.distance(self.f2_m)
    }
}

/// Carbon analyzer model: a single analyzing power along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSpec {
    pub analyzing_power: f64,
    pub analyzer_axis: Axis,
}

impl AnalyzerSpec {
    pub fn new(analyzing_power: f64, analyzer_axis: Axis) -> Result<Self, SimError> {
        if !analyzing_power.is_finite() || analyzing_power.abs() > 1.0 {
            return Err(SimError::AnalyzingPowerOutOfRange { value: analyzing_power });
        }
        Ok(AnalyzerSpec { analyzing_power, analyzer_axis })
    }

    /// P(Left) for a proton with the given Bloch vector.
    pub fn left_probability(&self, bloch: Vec3) -> f64 {
        0.5 * (1.0 + self.analyzing_power * bloch.dot(self.analyzer_axis.vec()))
    }
}

/// Which flight legs enter the timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingMode {
    /// Both arms are stamped with the trigger-scattering time; all
    /// post-scattering flight is neglected.
    PaperSimplified,
    /// Every leg's time of flight is added at the kinematic speeds.
    WithTof,
}

impl TimingMode {
    pub fn label(self) -> &'static str {
        match self {
            TimingMode::PaperSimplified => "paper_simplified",
            TimingMode::WithTof => "with_tof",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "paper_simplified" => Some(TimingMode::PaperSimplified),
            "with_tof" => Some(TimingMode::WithTof),
            _ => None,
        }
    }
}

/// Timestamp formation: flight-leg mode plus electronics knobs. Jitter and
/// per-arm cable delays default to zero and exist for sensitivity studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingSpec {
    pub mode: TimingMode,
    pub jitter_sigma_s: f64,
    pub f1_delay_s: f64,
    pub f2_delay_s: f64,
    /// Wall-clock gap between consecutive beam events. Keeps one event's
    /// records far outside every other event's coincidence window, matching
    /// a low-rate beam with no accidental overlaps.
    pub event_spacing_s: f64,
}

impl TimingSpec {
    pub fn new(
        mode: TimingMode,
        jitter_sigma_s: f64,
        f1_delay_s: f64,
        f2_delay_s: f64,
        event_spacing_s: f64,
    ) -> Result<Self, SimError> {
        for (name, value) in [
            ("timing jitter", jitter_sigma_s),
            ("F-1 delay", f1_delay_s),
            ("F-2 delay", f2_delay_s),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(SimError::NegativeKnob { name, value });
            }
        }
        if !event_spacing_s.is_finite() || event_spacing_s <= 0.0 {
            return Err(SimError::InvalidSpacing(event_spacing_s));
        }
        Ok(TimingSpec { mode, jitter_sigma_s, f1_delay_s, f2_delay_s, event_spacing_s })
    }
}

/// Trigger policy. `SingletOnly` is the experiment's post-selected mode.
/// `KeepAll` disables post-selection: every Bell outcome is accepted and
/// analyzed, the diagnostic mode that shows the polarimeter arm alone
/// carries no signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionMode {
    SingletOnly,
    KeepAll,
}

impl SelectionMode {
    pub fn label(self) -> &'static str {
        match self {
            SelectionMode::SingletOnly => "singlet_only",
            SelectionMode::KeepAll => "keep_all",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "singlet_only" => Some(SelectionMode::SingletOnly),
            "keep_all" => Some(SelectionMode::KeepAll),
            _ => None,
        }
    }
}

/// Everything one event needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub source: SourceSpec,
    pub geometry: GeometryConfig,
    pub analyzer: AnalyzerSpec,
    pub timing: TimingSpec,
    pub selection: SelectionMode,
}

/// One simulated teleportation attempt.
///
/// Invariants: `lr` is `Deflection::None` exactly when `accepted` is false;
/// timestamps are finite and non-negative; `causal_separate` agrees with
/// the causal criterion applied to the timestamps and the configured
/// separation. `rng_draws` lists the raw uniform deviates consumed, in
/// order: Bell outcome, deflection (accepted events), then four deviates
/// feeding the two jitter gaussians when jitter is enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub event_id: u64,
    pub accepted: bool,
    pub lr: Deflection,
    pub t_f1_s: f64,
    pub t_f2_s: f64,
    pub f1_hit_m: Vec3,
    pub f2_hit_m: Vec3,
    pub causal_separate: bool,
    pub teleported_bloch: Vec3,
    pub rng_draws: Vec<f64>,
}

/// Per-event deviate source: a counter-mode substream selected by
/// (master_seed, stream_id), recording every uniform it hands out.
pub struct RngStream {
    rng: ChaCha8Rng,
    draws: Vec<f64>,
}

impl RngStream {
    pub fn for_event(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        RngStream { rng, draws: Vec::new() }
    }

    /// Uniform deviate in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        let u: f64 = self.rng.gen();
        self.draws.push(u);
        u
    }

    /// Standard gaussian via Box-Muller on two recorded uniforms.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn draws(&self) -> &[f64] {
        &self.draws
    }

    pub fn into_draws(self) -> Vec<f64> {
        self.draws
    }
}

/// Simulates one beam event end to end.
pub fn generate_event(
    params: &SimParams,
    event_id: u64,
    rng: &mut RngStream,
) -> Result<EventRecord, SimError> {
    let src = &params.source;
    let geo = &params.geometry;

    // Quantum stage: qubit 0 is the polarized target proton p1, qubit 1 the
    // incoming partner p3, qubit 2 the far proton p2.
    let input = DensityOperator::from_bloch(src.ph2_polarization);
    let full = input.tensor(&DensityOperator::werner(src.channel))?;
    let bell = full.bell_measure((0, 1), rng.uniform())?;
    let accepted = match params.selection {
        SelectionMode::SingletOnly => bell.outcome.is_singlet(),
        SelectionMode::KeepAll => true,
    };
    let teleported_bloch = bell.collapsed.partial_trace(&[0, 1])?.bloch()?;

    let lr = if accepted {
        let p_left = params.analyzer.left_probability(teleported_bloch);
        if rng.uniform() < p_left {
            Deflection::Left
        } else {
            Deflection::Right
        }
    } else {
        Deflection::None
    };

    // Timing stage. The first scattering fixes both outgoing speeds; at 90
    // degrees center-of-momentum the two legs share one speed.
    let first = solve_elastic(src.beam, SCATTER_THETA_CM_DEG)?;
    let offset = event_id as f64 * params.timing.event_spacing_s;
    let t_scatter = offset + time_of_flight(geo.lh2_m.distance(geo.ph2_m), first.beta_out)?;
    let (mut t_f1, mut t_f2) = match params.timing.mode {
        TimingMode::PaperSimplified => (t_scatter, t_scatter),
        TimingMode::WithTof => {
            // The trigger arm sees the re-scattered proton, which leaves the
            // polarized target at the energy of a second 90-degree split.
            let second = solve_elastic(BeamSpec::new(first.t_out_mev)?, SCATTER_THETA_CM_DEG)?;
            let t1 = t_scatter + time_of_flight(geo.ph2_m.distance(geo.f1_m), second.beta_out)?;
            // The polarimeter arm keeps its speed through the analyzer; the
            // carbon nucleus is heavy enough that the elastic deflection
            // costs negligible energy.
            let leg = geo.lh2_m.distance(geo.k_m)
                + geo.k_m.distance(geo.c_m)
                + geo.c_m.distance(geo.f2_m);
            let t2 = offset + time_of_flight(leg, first.beta_out)?;
            (t1, t2)
        }
    };
    t_f1 += params.timing.f1_delay_s;
    t_f2 += params.timing.f2_delay_s;
    if params.timing.jitter_sigma_s > 0.0 {
        t_f1 += params.timing.jitter_sigma_s * rng.gaussian();
        t_f2 += params.timing.jitter_sigma_s * rng.gaussian();
        t_f1 = t_f1.max(0.0);
        t_f2 = t_f2.max(0.0);
    }

    let f2_hit_m = match lr {
        Deflection::None => geo.f2_m,
        side => {
            let along = (geo.f2_m - geo.c_m).unit().expect("validated non-degenerate");
            match params.analyzer.analyzer_axis.vec().cross(along).unit() {
                Some(e) => {
                    let sign = if side == Deflection::Left { 1.0 } else { -1.0 };
                    geo.f2_m + e * (sign * DEFLECTION_OFFSET_M)
                }
                // Analyzer axis parallel to the flight direction: the
                // left/right plane is undefined, record the arm center.
                None => geo.f2_m,
            }
        }
    };

    Ok(EventRecord {
        event_id,
        accepted,
        lr,
        t_f1_s: t_f1,
        t_f2_s: t_f2,
        f1_hit_m: geo.f1_m,
        f2_hit_m,
        causal_separate: causal_separate(geo.separation_s_m, (t_f1 - t_f2).abs()),
        teleported_bloch,
        rng_draws: rng.draws().to_vec(),
    })
}

/// A full simulated run: the event list plus its direct summary.
#[derive(Debug, Clone)]
pub struct SimRun {
    pub events: Vec<EventRecord>,
    pub summary: RunSummary,
}

/// Generates `n_events` events in parallel. Because each event owns its
/// substream the result is identical to the serial path.
pub fn run_simulation(params: &SimParams, n_events: u64, master_seed: u64) -> Result<SimRun, SimError> {
    if n_events == 0 {
        return Err(SimError::ZeroEvents);
    }
    let events: Vec<EventRecord> = (0..n_events)
        .into_par_iter()
        .map(|i| generate_event(params, i, &mut RngStream::for_event(master_seed, i)))
        .collect::<Result<_, _>>()?;
    let summary = summarize_events(&events, false, params.analyzer.analyzing_power);
    Ok(SimRun { events, summary })
}

/// Single-threaded reference path for [`run_simulation`].
pub fn run_simulation_serial(
    params: &SimParams,
    n_events: u64,
    master_seed: u64,
) -> Result<SimRun, SimError> {
    if n_events == 0 {
        return Err(SimError::ZeroEvents);
    }
    let events: Vec<EventRecord> = (0..n_events)
        .map(|i| generate_event(params, i, &mut RngStream::for_event(master_seed, i)))
        .collect::<Result<_, _>>()?;
    let summary = summarize_events(&events, false, params.analyzer.analyzing_power);
    Ok(SimRun { events, summary })
}

/// Event-level summary, the same estimators the stream analysis produces.
/// With `causal_only` set, only causally separated events are counted,
/// mirroring [`analysis::summarize`].
pub fn summarize_events(
    events: &[EventRecord],
    causal_only: bool,
    analyzing_power: f64,
) -> RunSummary {
    let mut counts = Counts::default();
    for e in events {
        if causal_only && !e.causal_separate {
            continue;
        }
        counts.add(e.accepted, e.lr, e.causal_separate);
    }
    RunSummary::from_counts(counts, analyzing_power)
}

/// Builds one arm's detector stream out of event records, canonically
/// ordered by (timestamp, event id).
pub fn detector_stream(id: DetectorId, events: &[EventRecord]) -> DetectorStream {
    let mut records: Vec<DetectorRecord> = events
        .iter()
        .map(|e| {
            let tag = EventTag { event_id: e.event_id, accepted: e.accepted, lr: e.lr };
            match id {
                DetectorId::F1 => {
                    DetectorRecord { timestamp_s: e.t_f1_s, hit_position_m: e.f1_hit_m, tag }
                }
                DetectorId::F2 => {
                    DetectorRecord { timestamp_s: e.t_f2_s, hit_position_m: e.f2_hit_m, tag }
                }
            }
        })
        .collect();
    let key = |r: &DetectorRecord| (r.timestamp_s, r.tag.event_id);
    records.sort_by(|a, b| key(a).partial_cmp(&key(b)).expect("finite timestamps"));
    DetectorStream::new(id, records).expect("sorted by construction")
}

/// Splits event records into the two per-arm detector streams.
pub fn split_into_streams(events: &[EventRecord]) -> (DetectorStream, DetectorStream) {
    (detector_stream(DetectorId::F1, events), detector_stream(DetectorId::F2, events))
}

/// Result of a four-setting correlation run.
#[derive(Debug, Clone, PartialEq)]
pub struct BellRun {
    pub counts: SettingCounts,
    /// Sampled CHSH estimate; `None` only if a setting got no events.
    pub estimate: Option<f64>,
    pub sigma: Option<f64>,
    /// Exact CHSH value of the channel state at the same axes.
    pub analytic: f64,
}

/// Samples the four-setting CHSH experiment on the channel state at the
/// axes that saturate the quantum bound for a perfect singlet. Events are
/// split evenly across settings (earlier settings absorb any remainder);
/// setting s draws from substream (master_seed, s).
pub fn run_bell_experiment(
    channel: ChannelSpec,
    n_events: u64,
    master_seed: u64,
) -> Result<BellRun, SimError> {
    if n_events == 0 {
        return Err(SimError::ZeroEvents);
    }
    let state = DensityOperator::werner(channel);
    let (a, a2, b, b2) = optimal_chsh_axes();
    let settings: [(Axis, Axis); 4] = [(a, b), (a, b2), (a2, b), (a2, b2)];
    let mut counts: SettingCounts = [[[0; 2]; 2]; 4];
    for (s, (first, second)) in settings.iter().enumerate() {
        // Joint Born probabilities for the four outcome pairs, in the order
        // (+,+), (+,-), (-,+), (-,-).
        let signs = [Sign::Plus, Sign::Minus];
        let mut probs = [0.0; 4];
        for (i, si) in signs.iter().enumerate() {
            for (j, sj) in signs.iter().enumerate() {
                let proj = spin_projector(*first, *si).kron(&spin_projector(*second, *sj));
                probs[i * 2 + j] = state.matrix().mul(&proj).trace().re.clamp(0.0, 1.0);
            }
        }
        let n_here = n_events / 4 + if (s as u64) < n_events % 4 { 1 } else { 0 };
        let mut rng = RngStream::for_event(master_seed, s as u64);
        for _ in 0..n_here {
            let u = rng.uniform();
            let mut cum = 0.0;
            let mut cell = 3;
            for (k, p) in probs.iter().enumerate() {
                cum += p;
                if u < cum {
                    cell = k;
                    break;
                }
            }
            counts[s][cell / 2][cell % 2] += 1;
        }
    }
    let estimate = analysis::chsh_from_counts(&counts);
    let sigma = analysis::chsh_statistical_error(&counts);
    let analytic = chsh(&state, a, a2, b, b2)?;
    Ok(BellRun { counts, estimate, sigma, analytic })
}

/// Result of sweeping teleportation over random pure inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportCheck {
    pub n_states: u64,
    pub attempts_per_state: u64,
    /// Post-selected output overlap with the input, extremes over states.
    pub min_fidelity: f64,
    pub mean_fidelity: f64,
    /// Closed-form Werner prediction f + (1 - f) / 3.
    pub predicted_fidelity: f64,
    /// Sampled fraction of attempts the trigger accepted.
    pub mc_acceptance_rate: f64,
    /// Mean Born probability of the singlet outcome, exact per state.
    pub analytic_acceptance: f64,
}

/// Sweeps `n_states` random pure inputs through the teleportation channel.
/// The post-selected fidelity per state is computed exactly from the forced
/// singlet branch; attempts are sampled only to estimate the acceptance
/// rate. State i draws from substream (master_seed, i).
pub fn run_teleport_check(
    channel: ChannelSpec,
    n_states: u64,
    attempts_per_state: u64,
    master_seed: u64,
) -> Result<TeleportCheck, SimError> {
    if n_states == 0 || attempts_per_state == 0 {
        return Err(SimError::ZeroEvents);
    }
    let channel_state = DensityOperator::werner(channel);
    let mut min_fidelity = f64::INFINITY;
    let mut sum_fidelity = 0.0;
    let mut accepted: u64 = 0;
    let mut sum_p_singlet = 0.0;
    for i in 0..n_states {
        let mut rng = RngStream::for_event(master_seed, i);
        // Uniform point on the Bloch sphere.
        let z = 2.0 * rng.uniform() - 1.0;
        let phi = std::f64::consts::TAU * rng.uniform();
        let r = (1.0 - z * z).sqrt();
        let input = BlochVector::new(Vec3::new(r * phi.cos(), r * phi.sin(), z))
            .expect("unit vector");

        let full = DensityOperator::from_bloch(input).tensor(&channel_state)?;
        let branch = full.bell_projection((0, 1), BellOutcome::PsiMinus)?;
        sum_p_singlet += branch.probability;
        let output = branch
            .collapsed
            .expect("singlet branch of a product input state has probability 1/4")
            .partial_trace(&[0, 1])?;
        let fidelity = output.fidelity_with(input)?;
        min_fidelity = min_fidelity.min(fidelity);
        sum_fidelity += fidelity;

        for _ in 0..attempts_per_state {
            if rng.uniform() < branch.probability {
                accepted += 1;
            }
        }
    }
    let f = channel.singlet_fraction();
    Ok(TeleportCheck {
        n_states,
        attempts_per_state,
        min_fidelity,
        mean_fidelity: sum_fidelity / n_states as f64,
        predicted_fidelity: f + (1.0 - f) / 3.0,
        mc_acceptance_rate: accepted as f64 / (n_states * attempts_per_state) as f64,
        analytic_acceptance: sum_p_singlet / n_states as f64,
    })
}
