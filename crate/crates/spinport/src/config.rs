//! Flat `key = value` run configuration.
//!
//! The format is a plain text file: one `key = value` pair per line, `#`
//! starts a comment, blank lines are ignored. Keys carry their units as
//! suffixes. Unknown keys, duplicate keys, and malformed values are hard
//! errors with line numbers, so a typo cannot silently fall back to a
//! default. [`RunConfig::to_document`] renders a commented file that parses
//! back to the identical configuration.

use std::fmt::Write as _;

use thiserror::Error;

use crate::kinematics::{BeamSpec, SINGLET_WINDOW_MEV};
use crate::quantum::{Axis, BlochVector, ChannelSpec};
use crate::sim::{
    AnalyzerSpec, GeometryConfig, SelectionMode, SimError, SimParams, SourceSpec, TimingMode,
    TimingSpec,
};
use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    MissingEquals { line: usize, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: value '{value}' for key '{key}' is malformed: expected {expected}")]
    MalformedValue { line: usize, key: String, value: String, expected: &'static str },
}

/// Every run setting, as read from a config file. Defaults describe the
/// baseline bench: a 30 MeV beam on the 45-degree two-leg geometry with
/// post-selection on.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub beam_energy_mev: f64,
    pub singlet_fraction: f64,
    pub polarization: Vec3,
    pub analyzing_power: f64,
    pub analyzer_axis: Vec3,
    pub lh2_pos_m: Vec3,
    pub ph2_pos_m: Vec3,
    pub k_pos_m: Vec3,
    pub c_pos_m: Vec3,
    pub f1_pos_m: Vec3,
    pub f2_pos_m: Vec3,
    /// Separation used by the causal criterion; `None` derives |ph2 - k|.
    pub separation_s_m: Option<f64>,
    pub timing_mode: TimingMode,
    pub timing_jitter_sigma_s: f64,
    pub f1_delay_s: f64,
    pub f2_delay_s: f64,
    pub event_spacing_s: f64,
    pub n_events: u64,
    pub master_seed: u64,
    pub coincidence_window_s: f64,
    pub causal_only: bool,
    pub post_selection: SelectionMode,
    pub events_out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            beam_energy_mev: 30.0,
            singlet_fraction: 0.97,
            polarization: Vec3::new(0.0, 0.8, 0.0),
            analyzing_power: 0.5,
            analyzer_axis: Vec3::new(0.0, 1.0, 0.0),
            lh2_pos_m: Vec3::new(0.0, 0.0, 0.0),
            ph2_pos_m: Vec3::new(1.5, 0.0, 1.5),
            k_pos_m: Vec3::new(-1.5, 0.0, 1.5),
            c_pos_m: Vec3::new(-2.0, 0.0, 2.0),
            f1_pos_m: Vec3::new(2.0, 0.0, 2.0),
            f2_pos_m: Vec3::new(-2.5, 0.0, 2.5),
            separation_s_m: None,
            timing_mode: TimingMode::WithTof,
            timing_jitter_sigma_s: 0.0,
            f1_delay_s: 0.0,
            f2_delay_s: 0.0,
            event_spacing_s: 1e-3,
            n_events: 10_000,
            master_seed: 1,
            coincidence_window_s: 1e-7,
            causal_only: false,
            post_selection: SelectionMode::SingletOnly,
            events_out: "events.csv".to_string(),
        }
    }
}

impl RunConfig {
    /// Separation the causal criterion will use: the explicit override, or
    /// the trigger-to-collapse distance.
    pub fn effective_separation_m(&self) -> f64 {
        self.separation_s_m.unwrap_or_else(|| self.ph2_pos_m.distance(self.k_pos_m))
    }

    /// Warning text when the beam sits outside the energy window where
    /// 90-degree proton-proton scattering is singlet-dominated (the regime
    /// both the entangler and the trigger rely on). `None` inside it.
    pub fn energy_window_note(&self) -> Option<String> {
        let (lo, hi) = SINGLET_WINDOW_MEV;
        if self.beam_energy_mev >= lo && self.beam_energy_mev <= hi {
            None
        } else {
            Some(format!(
                "warning: beam energy {} MeV is outside the {}-{} MeV window where \
                 90-degree pp scattering is singlet-dominated; the entangler and \
                 trigger models assume that window",
                self.beam_energy_mev, lo, hi
            ))
        }
    }

    /// Builds the validated simulation parameters.
    pub fn to_params(&self) -> Result<SimParams, SimError> {
        let beam = BeamSpec::new(self.beam_energy_mev)?;
        let channel = ChannelSpec::new(self.singlet_fraction)?;
        let polarization = BlochVector::new(self.polarization)?;
        let source = SourceSpec::new(beam, channel, polarization)?;
        let geometry = GeometryConfig::new(
            self.lh2_pos_m,
            self.ph2_pos_m,
            self.k_pos_m,
            self.c_pos_m,
            self.f1_pos_m,
            self.f2_pos_m,
            self.separation_s_m,
        )?;
        let analyzer = AnalyzerSpec::new(self.analyzing_power, Axis::new(self.analyzer_axis)?)?;
        let timing = TimingSpec::new(
            self.timing_mode,
            self.timing_jitter_sigma_s,
            self.f1_delay_s,
            self.f2_delay_s,
            self.event_spacing_s,
        )?;
        Ok(SimParams { source, geometry, analyzer, timing, selection: self.post_selection })
    }

    /// Renders the configuration as a commented config file. Parsing the
    /// result reproduces `self` exactly.
    pub fn to_document(&self) -> String {
        let mut s = String::new();
        let v = |v: Vec3| format!("{} {} {}", v.x, v.y, v.z);
        let _ = writeln!(s, "# Teleportation-bench run configuration.");
        let _ = writeln!(s, "# One 'key = value' per line; '#' starts a comment.");
        let _ = writeln!(s, "# Unknown or duplicate keys are errors.");
        let _ = writeln!(s);
        let _ = writeln!(s, "# --- beam and entangled channel ---");
        let _ = writeln!(
            s,
            "# Kinetic energy of the proton beam. {}-{} MeV is the window where\n\
             # 90-degree pp elastic scattering is dominated by the spin-singlet\n\
             # channel, which is what makes both scatterings act as entangler and\n\
             # Bell trigger.",
            SINGLET_WINDOW_MEV.0, SINGLET_WINDOW_MEV.1
        );
        let _ = writeln!(s, "beam_energy_mev = {}", self.beam_energy_mev);
        let _ = writeln!(s, "# Singlet weight of the pair channel (1 = ideal singlet source;");
        let _ = writeln!(s, "# the rest is isotropic noise). Placeholder purity, not a");
        let _ = writeln!(s, "# measured value.");
        let _ = writeln!(s, "singlet_fraction = {}", self.singlet_fraction);
        let _ = writeln!(s);
        let _ = writeln!(s, "# --- polarized target and analyzer ---");
        let _ = writeln!(s, "# Bloch vector of the polarized hydrogen target (|p| <= 1).");
        let _ = writeln!(s, "polarization = {}", v(self.polarization));
        let _ = writeln!(s, "# Carbon analyzing power (placeholder scale; calibration data");
        let _ = writeln!(s, "# replaces it) and the axis it analyzes along.");
        let _ = writeln!(s, "analyzing_power = {}", self.analyzing_power);
        let _ = writeln!(s, "analyzer_axis = {}", v(self.analyzer_axis));
        let _ = writeln!(s);
        let _ = writeln!(s, "# --- bench geometry, lab frame, meters ---");
        let _ = writeln!(s, "# lh2: entangling target, ph2: polarized target (trigger arm),");
        let _ = writeln!(s, "# k: collapse point, c: carbon analyzer, f1/f2: detector arms.");
        let _ = writeln!(s, "lh2_pos_m = {}", v(self.lh2_pos_m));
        let _ = writeln!(s, "ph2_pos_m = {}", v(self.ph2_pos_m));
        let _ = writeln!(s, "k_pos_m = {}", v(self.k_pos_m));
        let _ = writeln!(s, "c_pos_m = {}", v(self.c_pos_m));
        let _ = writeln!(s, "f1_pos_m = {}", v(self.f1_pos_m));
        let _ = writeln!(s, "f2_pos_m = {}", v(self.f2_pos_m));
        let _ = writeln!(s, "# Separation S used by the causal criterion S > c * t12.");
        match self.separation_s_m {
            Some(sep) => {
                let _ = writeln!(s, "separation_s_m = {}", sep);
            }
            None => {
                let _ = writeln!(
                    s,
                    "# separation_s_m = {}   (derived: |ph2 - k|; uncomment to override)",
                    self.effective_separation_m()
                );
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "# --- timestamps ---");
        let _ = writeln!(s, "# 'with_tof' adds every flight leg at kinematic speeds;");
        let _ = writeln!(s, "# 'paper_simplified' stamps both arms at the trigger-scattering");
        let _ = writeln!(s, "# time, neglecting post-scattering flight.");
        let _ = writeln!(s, "timing_mode = {}", self.timing_mode.label());
        let _ = writeln!(s, "# Gaussian electronics jitter (sigma) and per-arm cable delays.");
        let _ = writeln!(s, "timing_jitter_sigma_s = {}", self.timing_jitter_sigma_s);
        let _ = writeln!(s, "f1_delay_s = {}", self.f1_delay_s);
        let _ = writeln!(s, "f2_delay_s = {}", self.f2_delay_s);
        let _ = writeln!(s, "# Wall-clock gap between beam events; keeps distinct events far");
        let _ = writeln!(s, "# outside each other's coincidence window (no accidentals).");
        let _ = writeln!(s, "event_spacing_s = {}", self.event_spacing_s);
        let _ = writeln!(s);
        let _ = writeln!(s, "# --- run control ---");
        let _ = writeln!(s, "n_events = {}", self.n_events);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "coincidence_window_s = {}", self.coincidence_window_s);
        let _ = writeln!(s, "# Restrict summaries to causally separated pairs.");
        let _ = writeln!(s, "causal_only = {}", self.causal_only);
        let _ = writeln!(s, "# 'singlet_only' keeps triggered events; 'keep_all' disables");
        let _ = writeln!(s, "# post-selection and analyzes every Bell outcome.");
        let _ = writeln!(s, "post_selection = {}", self.post_selection.label());
        let _ = writeln!(s, "events_out = {}", self.events_out);
        s
    }
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ConfigError::MalformedValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
            expected: "a finite number",
        }),
    }
}

fn parse_u64(line: usize, key: &str, value: &str) -> Result<u64, ConfigError> {
    value.parse::<u64>().map_err(|_| ConfigError::MalformedValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        expected: "a non-negative integer",
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::MalformedValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
            expected: "true or false",
        }),
    }
}

fn parse_vec3(line: usize, key: &str, value: &str) -> Result<Vec3, ConfigError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    let err = || ConfigError::MalformedValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
        expected: "three space-separated numbers",
    };
    if parts.len() != 3 {
        return Err(err());
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = match part.parse::<f64>() {
            Ok(x) if x.is_finite() => x,
            _ => return Err(err()),
        };
    }
    Ok(Vec3::new(out[0], out[1], out[2]))
}

/// Parses config text. Settings not mentioned keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = match content.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => {
                return Err(ConfigError::MissingEquals { line, text: content.to_string() });
            }
        };
        if seen.iter().any(|s| s == key) {
            return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
        }
        seen.push(key.to_string());
        match key {
            "beam_energy_mev" => cfg.beam_energy_mev = parse_f64(line, key, value)?,
            "singlet_fraction" => cfg.singlet_fraction = parse_f64(line, key, value)?,
            "polarization" => cfg.polarization = parse_vec3(line, key, value)?,
            "analyzing_power" => cfg.analyzing_power = parse_f64(line, key, value)?,
            "analyzer_axis" => cfg.analyzer_axis = parse_vec3(line, key, value)?,
            "lh2_pos_m" => cfg.lh2_pos_m = parse_vec3(line, key, value)?,
            "ph2_pos_m" => cfg.ph2_pos_m = parse_vec3(line, key, value)?,
            "k_pos_m" => cfg.k_pos_m = parse_vec3(line, key, value)?,
            "c_pos_m" => cfg.c_pos_m = parse_vec3(line, key, value)?,
            "f1_pos_m" => cfg.f1_pos_m = parse_vec3(line, key, value)?,
            "f2_pos_m" => cfg.f2_pos_m = parse_vec3(line, key, value)?,
            "separation_s_m" => cfg.separation_s_m = Some(parse_f64(line, key, value)?),
            "timing_mode" => {
                cfg.timing_mode = TimingMode::from_label(value).ok_or_else(|| {
                    ConfigError::MalformedValue {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                        expected: "paper_simplified or with_tof",
                    }
                })?;
            }
            "timing_jitter_sigma_s" => cfg.timing_jitter_sigma_s = parse_f64(line, key, value)?,
            "f1_delay_s" => cfg.f1_delay_s = parse_f64(line, key, value)?,
            "f2_delay_s" => cfg.f2_delay_s = parse_f64(line, key, value)?,
            "event_spacing_s" => cfg.event_spacing_s = parse_f64(line, key, value)?,
            "n_events" => cfg.n_events = parse_u64(line, key, value)?,
            "master_seed" => cfg.master_seed = parse_u64(line, key, value)?,
            "coincidence_window_s" => cfg.coincidence_window_s = parse_f64(line, key, value)?,
            "causal_only" => cfg.causal_only = parse_bool(line, key, value)?,
            "post_selection" => {
                cfg.post_selection = SelectionMode::from_label(value).ok_or_else(|| {
                    ConfigError::MalformedValue {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                        expected: "singlet_only or keep_all",
                    }
                })?;
            }
            "events_out" => {
                if value.is_empty() {
                    return Err(ConfigError::MalformedValue {
                        line,
                        key: key.to_string(),
                        value: value.to_string(),
                        expected: "a file path",
                    });
                }
                cfg.events_out = value.to_string();
            }
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
    }
    Ok(cfg)
}
