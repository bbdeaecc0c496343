//! Plain-text reports shared by the command-line paths.
//!
//! The simulate and analyze commands both end their output with
//! [`run_summary_block`]; because each renders the same estimator values it
//! computed through the same code, a freshly simulated run and a re-analysis
//! of its event file print byte-identical summary blocks.

use std::fmt::Write as _;

use crate::analysis::RunSummary;
use crate::config::RunConfig;
use crate::sim::{BellRun, TeleportCheck};
use crate::vec3::Vec3;

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), num)
}

fn vec(v: Vec3) -> String {
    format!("({}, {}, {})", v.x, v.y, v.z)
}

/// The final block of simulate/analyze output. Starts with the literal line
/// `run summary`, the marker downstream comparisons key on.
pub fn run_summary_block(s: &RunSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "run summary");
    let _ = writeln!(out, "  events counted:         {}", s.n_total);
    let _ = writeln!(out, "  accepted:               {}", s.n_accepted);
    let _ = writeln!(out, "  left / right:           {} / {}", s.n_left, s.n_right);
    let _ = writeln!(out, "  acceptance rate:        {}", opt(s.acceptance_rate));
    match (s.asymmetry, s.asymmetry_error) {
        (Some(a), Some(e)) => {
            let _ = writeln!(out, "  asymmetry (L-R)/(L+R):  {} +/- {}", num(a), num(e));
        }
        _ => {
            let _ = writeln!(out, "  asymmetry (L-R)/(L+R):  n/a");
        }
    }
    let _ = writeln!(out, "  estimated polarization: {}", opt(s.estimated_polarization));
    let _ = writeln!(
        out,
        "  causally separated:     {} (fraction {})",
        s.n_causal,
        opt(s.causal_fraction())
    );
    if let Some(chsh) = s.chsh_value {
        let _ = writeln!(out, "  CHSH value:             {}", num(chsh));
    }
    out
}

/// Resolved-settings echo printed before a simulation run.
pub fn config_echo(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "configuration");
    let _ = writeln!(out, "  beam energy:            {} MeV", num(cfg.beam_energy_mev));
    let _ = writeln!(out, "  singlet fraction:       {}", num(cfg.singlet_fraction));
    let _ = writeln!(
        out,
        "  target polarization:    {} (|p| = {})",
        vec(cfg.polarization),
        num(cfg.polarization.norm())
    );
    let _ = writeln!(
        out,
        "  analyzing power:        {} along {}",
        num(cfg.analyzing_power),
        vec(cfg.analyzer_axis)
    );
    let _ = writeln!(out, "  timing mode:            {}", cfg.timing_mode.label());
    let _ = writeln!(out, "  timing jitter sigma:    {} s", num(cfg.timing_jitter_sigma_s));
    let _ = writeln!(
        out,
        "  arm delays:             F-1 {} s, F-2 {} s",
        num(cfg.f1_delay_s),
        num(cfg.f2_delay_s)
    );
    let _ = writeln!(out, "  event spacing:          {} s", num(cfg.event_spacing_s));
    let _ = writeln!(out, "  coincidence window:     {} s", num(cfg.coincidence_window_s));
    let _ = writeln!(out, "  post-selection:         {}", cfg.post_selection.label());
    let _ = writeln!(out, "  causal-only summaries:  {}", cfg.causal_only);
    let trig = cfg.ph2_pos_m.distance(cfg.k_pos_m);
    let arms = cfg.f1_pos_m.distance(cfg.f2_pos_m);
    let _ = writeln!(
        out,
        "  separation S:           {} m (trigger-to-collapse {} m, detector arms {} m)",
        num(cfg.effective_separation_m()),
        num(trig),
        num(arms)
    );
    let _ = writeln!(
        out,
        "  events / master seed:   {} / {}",
        cfg.n_events, cfg.master_seed
    );
    let _ = writeln!(out, "  events file:            {}", cfg.events_out);
    if let Some(note) = cfg.energy_window_note() {
        let _ = writeln!(out, "  {note}");
    }
    out
}

/// Report for the four-setting correlation run.
pub fn bell_report(run: &BellRun) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bell correlation run");
    let _ = writeln!(out, "  analytic CHSH:          {}", num(run.analytic));
    match (run.estimate, run.sigma) {
        (Some(est), Some(sig)) => {
            let _ = writeln!(out, "  sampled CHSH:           {} +/- {}", num(est), num(sig));
            if sig > 0.0 {
                let _ = writeln!(
                    out,
                    "  deviation:              {} sigma",
                    num((est - run.analytic).abs() / sig)
                );
            }
        }
        _ => {
            let _ = writeln!(out, "  sampled CHSH:           n/a (a setting has no events)");
        }
    }
    let labels = ["a  b ", "a  b'", "a' b ", "a' b'"];
    let _ = writeln!(out, "  per-setting counts (++, +-, -+, --):");
    for (s, label) in labels.iter().enumerate() {
        let c = &run.counts[s];
        let e = crate::analysis::setting_correlation(c);
        let _ = writeln!(
            out,
            "    {label}: {:>8} {:>8} {:>8} {:>8}   E = {}",
            c[0][0],
            c[0][1],
            c[1][0],
            c[1][1],
            opt(e)
        );
    }
    out
}

/// Report for the random-input teleportation sweep.
pub fn teleport_report(check: &TeleportCheck) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "teleportation check");
    let _ = writeln!(
        out,
        "  inputs:                 {} random pure states, {} attempts each",
        check.n_states, check.attempts_per_state
    );
    let _ = writeln!(
        out,
        "  post-selected fidelity: min {}, mean {}",
        num(check.min_fidelity),
        num(check.mean_fidelity)
    );
    let _ = writeln!(
        out,
        "  predicted fidelity:     {} (channel weight f gives f + (1 - f)/3)",
        num(check.predicted_fidelity)
    );
    let _ = writeln!(
        out,
        "  acceptance rate:        sampled {}, exact {}",
        num(check.mc_acceptance_rate),
        num(check.analytic_acceptance)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Counts;

    #[test]
    fn summary_block_starts_with_marker_line() {
        let mut c = Counts::default();
        c.n_total = 10;
        c.n_accepted = 4;
        c.n_left = 3;
        c.n_right = 1;
        c.n_causal = 10;
        let block = run_summary_block(&RunSummary::from_counts(c, 0.5));
        assert!(block.starts_with("run summary\n"));
        assert!(block.contains("accepted:               4"));
        assert!(block.contains("asymmetry (L-R)/(L+R):  0.5 +/-"));
        assert!(block.contains("estimated polarization: 1"));
    }

    #[test]
    fn empty_run_renders_not_available_fields() {
        let block = run_summary_block(&RunSummary::from_counts(Counts::default(), 0.5));
        assert!(block.contains("acceptance rate:        n/a"));
        assert!(block.contains("asymmetry (L-R)/(L+R):  n/a"));
    }

    #[test]
    fn identical_summaries_render_identically() {
        let mut c = Counts::default();
        c.n_total = 7;
        c.n_accepted = 2;
        c.n_left = 1;
        c.n_right = 1;
        let a = run_summary_block(&RunSummary::from_counts(c, 0.5));
        let b = run_summary_block(&RunSummary::from_counts(c, 0.5));
        assert_eq!(a, b);
    }

    #[test]
    fn config_echo_reports_both_distances_and_window_note() {
        let mut cfg = RunConfig::default();
        let echo = config_echo(&cfg);
        assert!(echo.contains("trigger-to-collapse 3 m"));
        assert!(echo.contains("separation S:           3 m"));
        assert!(!echo.contains("warning"));
        cfg.beam_energy_mev = 10.0;
        assert!(config_echo(&cfg).contains("warning"));
    }
}
