//! Relativistic two-body elastic kinematics for equal-mass protons.
//!
//! A beam proton with kinetic energy T scatters elastically off a target
//! proton at rest. With gamma_cm = sqrt((2m + T) / (2m)), both outgoing lab
//! angles follow tan(theta_lab) = sin(theta_cm) / (gamma_cm (1 +- cos
//! theta_cm)), and lab energies come from boosting the center-of-momentum
//! energies back to the lab. Energies are in MeV, angles in degrees at the
//! interface, lengths in meters, times in seconds.

use thiserror::Error;

use crate::{PROTON_MASS_MEV, SPEED_OF_LIGHT_M_PER_S};

/// Beam kinetic-energy window, MeV, in which 90-degree center-of-momentum
/// proton-proton scattering is dominated by the spin-zero intermediate
/// state. Outside it the simulation still runs but flags the configuration.
pub const SINGLET_WINDOW_MEV: (f64, f64) = (20.0, 50.0);

#[derive(Debug, Error, PartialEq)]
pub enum KinematicsError {
    #[error("beam kinetic energy must be positive and finite, got {0} MeV")]
    NonPositiveEnergy(f64),
    #[error("center-of-momentum angle must lie strictly inside (0, 180) degrees, got {0}")]
    AngleOutOfRange(f64),
    #[error("speed fraction beta must lie strictly inside (0, 1), got {0}")]
    BetaOutOfRange(f64),
    #[error("path length must be non-negative and finite, got {0} m")]
    NegativePath(f64),
}

/// Proton beam hitting a proton target at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    kinetic_energy_mev: f64,
}

impl BeamSpec {
    pub fn new(kinetic_energy_mev: f64) -> Result<Self, KinematicsError> {
        if !kinetic_energy_mev.is_finite() || kinetic_energy_mev <= 0.0 {
            return Err(KinematicsError::NonPositiveEnergy(kinetic_energy_mev));
        }
        Ok(BeamSpec { kinetic_energy_mev })
    }

    pub fn kinetic_energy_mev(self) -> f64 {
        self.kinetic_energy_mev
    }

    /// Lorentz factor of the center-of-momentum frame in the lab.
    pub fn gamma_cm(self) -> f64 {
        ((2.0 * PROTON_MASS_MEV + self.kinetic_energy_mev) / (2.0 * PROTON_MASS_MEV)).sqrt()
    }

    /// True when the beam energy leaves the singlet-dominance window.
    pub fn outside_singlet_window(self) -> bool {
        self.kinetic_energy_mev < SINGLET_WINDOW_MEV.0
            || self.kinetic_energy_mev > SINGLET_WINDOW_MEV.1
    }
}

/// Lab-frame kinematics of both outgoing protons for one
/// center-of-momentum scattering angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterSolution {
    pub theta_cm_deg: f64,
    /// Scattered proton's lab angle from the beam axis, degrees.
    pub theta_lab_out_deg: f64,
    /// Recoil proton's lab angle, degrees, on the opposite side of the axis.
    pub theta_lab_recoil_deg: f64,
    pub t_out_mev: f64,
    pub t_recoil_mev: f64,
    /// Outgoing speeds as fractions of c.
    pub beta_out: f64,
    pub beta_recoil: f64,
    pub gamma_cm: f64,
}

impl ScatterSolution {
    /// Lab opening angle between the two outgoing protons, degrees.
    pub fn opening_angle_deg(&self) -> f64 {
        self.theta_lab_out_deg + self.theta_lab_recoil_deg
    }
}

/// Solves equal-mass elastic scattering for one center-of-momentum angle.
pub fn solve_elastic(beam: BeamSpec, theta_cm_deg: f64) -> Result<ScatterSolution, KinematicsError> {
    if !theta_cm_deg.is_finite() || theta_cm_deg <= 0.0 || theta_cm_deg >= 180.0 {
        return Err(KinematicsError::AngleOutOfRange(theta_cm_deg));
    }
    let m = PROTON_MASS_MEV;
    let t = beam.kinetic_energy_mev();
    let gamma = beam.gamma_cm();
    let beta_cm = {
        // Total lab momentum over total lab energy.
        let p1 = (t * t + 2.0 * m * t).sqrt();
        p1 / (2.0 * m + t)
    };
    // Center-of-momentum energy and momentum per proton: E*^2 = m^2 + mT/2.
    let e_star = (m * m + 0.5 * m * t).sqrt();
    let p_star = (0.5 * m * t).sqrt();

    let theta = theta_cm_deg.to_radians();
    let (sin_cm, cos_cm) = theta.sin_cos();

    let theta_out = (sin_cm / (gamma * (1.0 + cos_cm))).atan();
    let theta_recoil = (sin_cm / (gamma * (1.0 - cos_cm))).atan();

    let e_out = gamma * (e_star + beta_cm * p_star * cos_cm);
    let e_recoil = gamma * (e_star - beta_cm * p_star * cos_cm);

    let beta_of = |e: f64| (e * e - m * m).sqrt() / e;

    Ok(ScatterSolution {
        theta_cm_deg,
        theta_lab_out_deg: theta_out.to_degrees(),
        theta_lab_recoil_deg: theta_recoil.to_degrees(),
        t_out_mev: e_out - m,
        t_recoil_mev: e_recoil - m,
        beta_out: beta_of(e_out),
        beta_recoil: beta_of(e_recoil),
        gamma_cm: gamma,
    })
}

/// Straight-line flight time over `path_m` at speed `beta * c`.
pub fn time_of_flight(path_m: f64, beta: f64) -> Result<f64, KinematicsError> {
    if !beta.is_finite() || beta <= 0.0 || beta >= 1.0 {
        return Err(KinematicsError::BetaOutOfRange(beta));
    }
    if !path_m.is_finite() || path_m < 0.0 {
        return Err(KinematicsError::NegativePath(path_m));
    }
    Ok(path_m / (beta * SPEED_OF_LIGHT_M_PER_S))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_conservation_across_grid() {
        for t in [20.0, 27.5, 30.0, 42.0, 50.0] {
            let beam = BeamSpec::new(t).unwrap();
            for theta in [10.0, 45.0, 90.0, 135.0, 170.0] {
                let s = solve_elastic(beam, theta).unwrap();
                assert!(
                    (s.t_out_mev + s.t_recoil_mev - t).abs() < 1e-9,
                    "energy not conserved at T={t} theta={theta}"
                );
                assert!(s.t_out_mev > 0.0 && s.t_recoil_mev > 0.0);
                assert!(s.theta_lab_out_deg > 0.0 && s.theta_lab_out_deg < 90.0);
                assert!(s.theta_lab_recoil_deg > 0.0 && s.theta_lab_recoil_deg < 90.0);
            }
        }
    }

    #[test]
    fn ninety_degrees_splits_energy_evenly() {
        let s = solve_elastic(BeamSpec::new(30.0).unwrap(), 90.0).unwrap();
        assert!((s.t_out_mev - 15.0).abs() < 1e-9);
        assert!((s.t_recoil_mev - 15.0).abs() < 1e-9);
        assert!((s.beta_out - s.beta_recoil).abs() < 1e-12);
        // Both protons close toward the axis relative to the 45-degree
        // nonrelativistic direction.
        assert!(s.theta_lab_out_deg < 45.0);
        assert!((s.theta_lab_out_deg - s.theta_lab_recoil_deg).abs() < 1e-9);
    }

    #[test]
    fn relativistic_opening_angle_stays_below_ninety() {
        for t in [1.0, 10.0, 30.0, 50.0, 500.0] {
            let s = solve_elastic(BeamSpec::new(t).unwrap(), 90.0).unwrap();
            assert!(s.opening_angle_deg() < 90.0);
        }
    }

    #[test]
    fn newtonian_limit_recovers_half_angle_and_cosine_squared() {
        let t = 0.01;
        let beam = BeamSpec::new(t).unwrap();
        for theta_cm in [30.0, 60.0, 90.0, 120.0] {
            let s = solve_elastic(beam, theta_cm).unwrap();
            let half = theta_cm / 2.0;
            assert!((s.theta_lab_out_deg - half).abs() / half < 1e-3);
            let newton = t * half.to_radians().cos().powi(2);
            assert!((s.t_out_mev - newton).abs() / newton < 1e-3);
        }
    }

    #[test]
    fn time_of_flight_matches_hand_value() {
        // 1.499 m at beta = 0.5 is within a quarter permille of 10 ns.
        let tof = time_of_flight(1.499, 0.5).unwrap();
        assert!((tof - 1.0e-8).abs() < 3e-12);
        assert_eq!(time_of_flight(0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(BeamSpec::new(0.0), Err(KinematicsError::NonPositiveEnergy(_))));
        assert!(matches!(BeamSpec::new(-5.0), Err(KinematicsError::NonPositiveEnergy(_))));
        let beam = BeamSpec::new(30.0).unwrap();
        assert!(matches!(solve_elastic(beam, 0.0), Err(KinematicsError::AngleOutOfRange(_))));
        assert!(matches!(solve_elastic(beam, 180.0), Err(KinematicsError::AngleOutOfRange(_))));
        assert!(matches!(time_of_flight(1.0, 0.0), Err(KinematicsError::BetaOutOfRange(_))));
        assert!(matches!(time_of_flight(1.0, 1.0), Err(KinematicsError::BetaOutOfRange(_))));
        assert!(matches!(time_of_flight(-1.0, 0.5), Err(KinematicsError::NegativePath(_))));
    }

    #[test]
    fn singlet_window_flag() {
        assert!(BeamSpec::new(10.0).unwrap().outside_singlet_window());
        assert!(BeamSpec::new(55.0).unwrap().outside_singlet_window());
        assert!(!BeamSpec::new(30.0).unwrap().outside_singlet_window());
        assert!(!BeamSpec::new(20.0).unwrap().outside_singlet_window());
        assert!(!BeamSpec::new(50.0).unwrap().outside_singlet_window());
    }
}
