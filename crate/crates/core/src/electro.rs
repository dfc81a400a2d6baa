//! Pyroelectric source, leaky charging node, pull-in switch and loads.

use crate::error::{Error, Result};
use crate::units::EPSILON_0;

/// Default release threshold as a fraction of the pull-in voltage.
pub const DEFAULT_RELEASE_RATIO: f64 = 0.4;
pub const DEFAULT_CONTACT_RESISTANCE: f64 = 1e3;
pub const DEFAULT_LEAK_RESISTANCE: f64 = 6e11;

/// Pyroelectric and dielectric data of one crystal.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalSpec {
    /// Magnitude of the pyroelectric coefficient, C/(m² K).
    pub pyro_coeff: f64,
    pub electrode_area: f64,
    pub thickness: f64,
    pub rel_permittivity: f64,
    /// Farads.
    pub self_capacitance: f64,
}

impl CrystalSpec {
    /// Parallel-plate crystal with the capacitance derived from its geometry.
    pub fn from_geometry(
        pyro_coeff: f64,
        electrode_area: f64,
        thickness: f64,
        rel_permittivity: f64,
    ) -> Self {
        CrystalSpec {
            pyro_coeff,
            electrode_area,
            thickness,
            rel_permittivity,
            self_capacitance: parallel_plate_capacitance(rel_permittivity, electrode_area, thickness),
        }
    }

    /// z-cut lithium niobate cube with gold electrodes on two opposite faces.
    pub fn lithium_niobate_cube(edge: f64) -> Self {
        CrystalSpec::from_geometry(8.3e-5, edge * edge, edge, 28.7)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("crystal.pyro_coeff", self.pyro_coeff),
            ("crystal.electrode_area", self.electrode_area),
            ("crystal.thickness", self.thickness),
            ("crystal.rel_permittivity", self.rel_permittivity),
            ("crystal.self_capacitance", self.self_capacitance),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Charge per kelvin, p A.
    pub fn charge_per_kelvin(&self) -> f64 {
        self.pyro_coeff * self.electrode_area
    }
}

impl Default for CrystalSpec {
    fn default() -> Self {
        CrystalSpec::lithium_niobate_cube(5e-3)
    }
}

pub fn parallel_plate_capacitance(rel_permittivity: f64, area: f64, gap: f64) -> f64 {
    EPSILON_0 * rel_permittivity * area / gap
}

pub fn pyro_charge(crystal: &CrystalSpec, delta_t: f64) -> f64 {
    crystal.charge_per_kelvin() * delta_t
}

pub fn pyro_current(crystal: &CrystalSpec, dtdt: f64) -> f64 {
    crystal.charge_per_kelvin() * dtdt
}

/// Gap-closing electrostatic switch geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchGeometry {
    pub gap: f64,
    pub actuation_area: f64,
    pub spring_constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchSpec {
    /// Explicit threshold; wins over the geometry. `INFINITY` disables the
    /// switch.
    pub pull_in_voltage: Option<f64>,
    /// Defaults to [`DEFAULT_RELEASE_RATIO`] times the pull-in voltage.
    pub release_voltage: Option<f64>,
    pub contact_resistance: f64,
    pub geometry: Option<SwitchGeometry>,
}

impl Default for SwitchSpec {
    /// 50 µm gap, 1 mm² electrode, 250 N/m suspension: about 1.02 kV.
    fn default() -> Self {
        SwitchSpec {
            pull_in_voltage: None,
            release_voltage: None,
            contact_resistance: DEFAULT_CONTACT_RESISTANCE,
            geometry: Some(SwitchGeometry {
                gap: 50e-6,
                actuation_area: 1e-6,
                spring_constant: 250.0,
            }),
        }
    }
}

impl SwitchSpec {
    pub fn with_pull_in(pull_in_voltage: f64) -> Self {
        SwitchSpec {
            pull_in_voltage: Some(pull_in_voltage),
            release_voltage: None,
            contact_resistance: DEFAULT_CONTACT_RESISTANCE,
            geometry: None,
        }
    }

    /// A switch that never closes.
    pub fn disabled() -> Self {
        SwitchSpec::with_pull_in(f64::INFINITY)
    }

    pub fn thresholds(&self) -> Result<SwitchThresholds> {
        let pull_in = pull_in_voltage(self)?;
        let release = self
            .release_voltage
            .unwrap_or(DEFAULT_RELEASE_RATIO * pull_in);
        if !(release > 0.0 && release <= pull_in) {
            return Err(Error::config(
                "switch.release_voltage",
                format!("must satisfy 0 < release <= pull-in ({pull_in} V), got {release}"),
            ));
        }
        if !(self.contact_resistance > 0.0) {
            return Err(Error::config("switch.contact_resistance", "must be positive"));
        }
        Ok(SwitchThresholds { pull_in, release })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchThresholds {
    pub pull_in: f64,
    pub release: f64,
}

/// Parallel-plate pull-in threshold sqrt(8 k g³ / (27 ε₀ A)), unless the spec
/// pins the value explicitly.
pub fn pull_in_voltage(switch: &SwitchSpec) -> Result<f64> {
    if let Some(v) = switch.pull_in_voltage {
        if !(v > 0.0) {
            return Err(Error::config("switch.pull_in_voltage", "must be positive"));
        }
        return Ok(v);
    }
    let g = switch.geometry.as_ref().ok_or_else(|| {
        Error::config(
            "switch.pull_in_voltage",
            "neither an explicit pull-in voltage nor a switch geometry is given",
        )
    })?;
    if !(g.gap >= 0.0 && g.actuation_area > 0.0 && g.spring_constant > 0.0) {
        return Err(Error::config(
            "switch.geometry",
            "gap must be non-negative, area and spring constant positive",
        ));
    }
    Ok((8.0 * g.spring_constant * g.gap.powi(3) / (27.0 * EPSILON_0 * g.actuation_area)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadKind {
    Capacitor,
    Actuator,
}

impl LoadKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LoadKind::Capacitor => "capacitor",
            LoadKind::Actuator => "actuator",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElectricalNetworkSpec {
    pub crystal: CrystalSpec,
    pub store_capacitance: f64,
    pub parasitic_capacitance: f64,
    /// Ohms; `INFINITY` for a lossless crystal.
    pub leak_resistance: f64,
    pub switch: SwitchSpec,
    pub load_kind: LoadKind,
}

impl ElectricalNetworkSpec {
    pub fn with_store(store_capacitance: f64) -> Self {
        ElectricalNetworkSpec {
            crystal: CrystalSpec::default(),
            store_capacitance,
            parasitic_capacitance: 0.0,
            leak_resistance: DEFAULT_LEAK_RESISTANCE,
            switch: SwitchSpec::default(),
            load_kind: LoadKind::Capacitor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.crystal.validate()?;
        if !(self.store_capacitance >= 0.0 && self.store_capacitance.is_finite()) {
            return Err(Error::config("electrical.store_capacitance", "must be non-negative"));
        }
        if !(self.parasitic_capacitance >= 0.0 && self.parasitic_capacitance.is_finite()) {
            return Err(Error::config(
                "electrical.parasitic_capacitance",
                "must be non-negative",
            ));
        }
        if !(self.leak_resistance > 0.0) {
            return Err(Error::config(
                "electrical.leak_resistance",
                "must be positive or infinite",
            ));
        }
        self.switch.thresholds()?;
        Ok(())
    }

    /// Capacitance on the crystal node with the load disconnected.
    pub fn pyro_capacitance(&self) -> f64 {
        self.crystal.self_capacitance + self.parasitic_capacitance
    }

    pub fn total_capacitance(&self) -> f64 {
        self.pyro_capacitance() + self.store_capacitance
    }

    pub fn node_capacitance(&self, load_connected: bool) -> f64 {
        if load_connected {
            self.total_capacitance()
        } else {
            self.pyro_capacitance()
        }
    }

    /// dV/dt on the crystal node: (i - V/R_leak) / C.
    pub fn voltage_rate(&self, v: f64, i_pyro: f64, load_connected: bool) -> f64 {
        (i_pyro - v / self.leak_resistance) / self.node_capacitance(load_connected)
    }

    /// Current into the crystal node after the leakage path, amperes.
    pub fn net_current(&self, v: f64, i_pyro: f64) -> f64 {
        i_pyro - v / self.leak_resistance
    }

    pub fn time_constant(&self, load_connected: bool) -> f64 {
        self.leak_resistance * self.node_capacitance(load_connected)
    }

    pub fn check_step(&self, dt: f64, load_connected: bool) -> Result<()> {
        let limit = self.time_constant(load_connected) / 10.0;
        if !(dt > 0.0) || dt > limit {
            return Err(Error::StepSize {
                dt,
                limit,
                context: "electrical node, limit is R_leak C / 10".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchPhase {
    Open,
    Closed,
}

/// How charge reaches the load across heating and cooling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccumulationMode {
    /// Polarity-blind switch: closes on |V| and lets cooling-phase charge of
    /// the opposite sign flow back into the load.
    Bipolar,
    /// Closure only while heating and with positive polarity; the load is
    /// fed through a one-way path, so it only ratchets up.
    #[default]
    UnipolarGated,
}

impl AccumulationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AccumulationMode::Bipolar => "bipolar",
            AccumulationMode::UnipolarGated => "unipolar-gated",
        }
    }
}

impl std::str::FromStr for AccumulationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipolar" => Ok(AccumulationMode::Bipolar),
            "unipolar-gated" => Ok(AccumulationMode::UnipolarGated),
            other => Err(Error::config(
                "sim.accumulation_mode",
                format!("unknown mode `{other}` (expected bipolar or unipolar-gated)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalState {
    pub pyro_voltage: f64,
    pub load_voltage: f64,
    pub switch_phase: SwitchPhase,
    /// Load shares the crystal node. Always true while closed in bipolar
    /// mode; in gated mode the one-way path may be blocking.
    pub conducting: bool,
}

impl Default for ElectricalState {
    fn default() -> Self {
        ElectricalState {
            pyro_voltage: 0.0,
            load_voltage: 0.0,
            switch_phase: SwitchPhase::Open,
            conducting: false,
        }
    }
}

impl ElectricalState {
    pub fn is_closed(&self) -> bool {
        self.switch_phase == SwitchPhase::Closed
    }
}

/// Advance the crystal node by `dt` with a constant source current.
pub fn electrical_step(
    state: &ElectricalState,
    net: &ElectricalNetworkSpec,
    i_pyro: f64,
    dt: f64,
) -> Result<ElectricalState> {
    let connected = state.conducting;
    net.check_step(dt, connected)?;
    let f = |v: f64| net.voltage_rate(v, i_pyro, connected);
    let v = state.pyro_voltage;
    let k1 = f(v);
    let k2 = f(v + 0.5 * dt * k1);
    let k3 = f(v + 0.5 * dt * k2);
    let k4 = f(v + dt * k3);
    let v_new = v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Ok(ElectricalState {
        pyro_voltage: v_new,
        load_voltage: if connected { v_new } else { state.load_voltage },
        ..*state
    })
}

/// Common voltage after connecting the crystal node to the load.
pub fn charge_share(v_pyro: f64, v_load: f64, net: &ElectricalNetworkSpec) -> Result<f64> {
    let total = net.total_capacitance();
    if !(total > 0.0) {
        return Err(Error::config(
            "electrical",
            "total capacitance is zero, charge sharing is undefined",
        ));
    }
    if net.store_capacitance == 0.0 {
        return Ok(v_pyro);
    }
    Ok((net.pyro_capacitance() * v_pyro + net.store_capacitance * v_load) / total)
}

fn connect(state: &mut ElectricalState, net: &ElectricalNetworkSpec) -> Result<()> {
    let v = charge_share(state.pyro_voltage, state.load_voltage, net)?;
    state.pyro_voltage = v;
    state.load_voltage = v;
    state.conducting = true;
    Ok(())
}

/// Apply every switch transition the state currently calls for, including
/// the charge sharing that happens at the instant of connection.
pub fn switch_transition(
    state: &ElectricalState,
    net: &ElectricalNetworkSpec,
    thresholds: SwitchThresholds,
    mode: AccumulationMode,
    i_pyro: f64,
) -> Result<ElectricalState> {
    let gated = mode == AccumulationMode::UnipolarGated;
    let mut s = *state;
    // A handful of passes is enough: close, share, maybe release or block.
    for _ in 0..8 {
        let before = s;
        match s.switch_phase {
            SwitchPhase::Open => {
                let allowed = !gated || (i_pyro > 0.0 && s.pyro_voltage > 0.0);
                if allowed && s.pyro_voltage.abs() >= thresholds.pull_in {
                    s.switch_phase = SwitchPhase::Closed;
                    if !gated || s.pyro_voltage >= s.load_voltage {
                        connect(&mut s, net)?;
                    }
                }
            }
            SwitchPhase::Closed => {
                if s.pyro_voltage.abs() < thresholds.release {
                    s.switch_phase = SwitchPhase::Open;
                    s.conducting = false;
                } else if gated {
                    let net_i = net.net_current(s.pyro_voltage, i_pyro);
                    if s.conducting && net_i <= 0.0 {
                        s.conducting = false;
                    } else if !s.conducting && s.pyro_voltage >= s.load_voltage && net_i > 0.0 {
                        connect(&mut s, net)?;
                    }
                }
            }
        }
        if s == before {
            break;
        }
    }
    Ok(s)
}

pub fn stored_energy(capacitance: f64, voltage: f64) -> f64 {
    0.5 * capacitance * voltage * voltage
}

/// Capacitive actuator with a quadratic voltage-to-displacement map.
#[derive(Debug, Clone, PartialEq)]
pub struct ActuatorSpec {
    /// m/V².
    pub quad_coeff: f64,
    pub capacitance: f64,
}

impl ActuatorSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.quad_coeff >= 0.0 && self.quad_coeff.is_finite()) {
            return Err(Error::config("actuator.quad_coeff", "must be non-negative"));
        }
        if !(self.capacitance >= 0.0 && self.capacitance.is_finite()) {
            return Err(Error::config("actuator.capacitance", "must be non-negative"));
        }
        Ok(())
    }
}

pub fn actuator_displacement(act: &ActuatorSpec, voltage: f64) -> f64 {
    act.quad_coeff * voltage * voltage
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn crystal() -> CrystalSpec {
        CrystalSpec::default()
    }

    fn net(store: f64) -> ElectricalNetworkSpec {
        ElectricalNetworkSpec {
            switch: SwitchSpec::with_pull_in(1000.0),
            ..ElectricalNetworkSpec::with_store(store)
        }
    }

    fn thresholds() -> SwitchThresholds {
        SwitchThresholds {
            pull_in: 1000.0,
            release: 400.0,
        }
    }

    #[test]
    fn default_crystal_capacitance() {
        let c = crystal();
        assert_relative_eq!(c.self_capacitance, 1.2706e-12, max_relative = 1e-4);
        assert_relative_eq!(c.charge_per_kelvin(), 2.075e-9, max_relative = 1e-12);
    }

    #[test]
    fn charge_and_current() {
        let c = crystal();
        assert_relative_eq!(pyro_charge(&c, 60.0), 1.245e-7, max_relative = 1e-12);
        assert_relative_eq!(pyro_charge(&c, 1.0), 2.075e-9, max_relative = 1e-12);
        assert_eq!(pyro_charge(&c, 0.0), 0.0);
        assert_relative_eq!(pyro_current(&c, 2.0), 4.15e-9, max_relative = 1e-12);
        assert_eq!(pyro_current(&c, 0.0), 0.0);
        assert_eq!(pyro_current(&c, -2.0), -pyro_current(&c, 2.0));
    }

    /// 4.15 nA into 3.27 pF through 1 TΩ, sampled at one time constant.
    #[test]
    fn leaky_integrator_one_time_constant() {
        let mut n = ElectricalNetworkSpec::with_store(2e-12);
        n.crystal.self_capacitance = 1.27e-12;
        n.leak_resistance = 1e12;
        let tau = n.time_constant(true);
        assert_relative_eq!(tau, 3.27, max_relative = 1e-12);
        let mut s = ElectricalState {
            switch_phase: SwitchPhase::Closed,
            conducting: true,
            ..Default::default()
        };
        let dt = tau / 1000.0;
        for _ in 0..1000 {
            s = electrical_step(&s, &n, 4.15e-9, dt).unwrap();
        }
        let exact = 4150.0 * (1.0 - (-1.0f64).exp());
        assert_relative_eq!(s.pyro_voltage, exact, max_relative = 1e-9);
        assert!((s.pyro_voltage - 2623.5).abs() < 0.5);
        assert_eq!(s.load_voltage, s.pyro_voltage);
    }

    #[test]
    fn free_decay_and_lossless_ramp() {
        let mut n = net(0.0);
        let tau = n.time_constant(false);
        let mut s = ElectricalState {
            pyro_voltage: 1000.0,
            ..Default::default()
        };
        let dt = tau / 500.0;
        for _ in 0..500 {
            s = electrical_step(&s, &n, 0.0, dt).unwrap();
        }
        assert_relative_eq!(s.pyro_voltage, 1000.0 * (-1.0f64).exp(), max_relative = 1e-10);

        n.leak_resistance = f64::INFINITY;
        let mut s = ElectricalState::default();
        for _ in 0..100 {
            s = electrical_step(&s, &n, 1e-9, 0.01).unwrap();
        }
        assert_relative_eq!(s.pyro_voltage, 1e-9 * 1.0 / n.pyro_capacitance(), max_relative = 1e-12);
    }

    #[test]
    fn step_guard() {
        let n = net(0.0);
        let limit = n.time_constant(false) / 10.0;
        let s = ElectricalState::default();
        assert!(electrical_step(&s, &n, 0.0, limit).is_ok());
        assert!(matches!(
            electrical_step(&s, &n, 0.0, limit * 1.001),
            Err(Error::StepSize { .. })
        ));
        assert!(electrical_step(&s, &n, 0.0, 0.0).is_err());
    }

    #[test]
    fn open_switch_leaves_load_alone() {
        let n = net(2e-12);
        let s = ElectricalState {
            load_voltage: 500.0,
            ..Default::default()
        };
        let s = electrical_step(&s, &n, 1e-9, 0.01).unwrap();
        assert_eq!(s.load_voltage, 500.0);
        assert!(s.pyro_voltage > 0.0);
    }

    #[test]
    fn pull_in_formula() {
        let sw = SwitchSpec {
            pull_in_voltage: None,
            geometry: Some(SwitchGeometry {
                gap: 10e-6,
                actuation_area: 1e-6,
                spring_constant: 100.0,
            }),
            ..SwitchSpec::default()
        };
        let v = pull_in_voltage(&sw).unwrap();
        assert!((v - 57.85).abs() < 0.01, "{v}");

        let mut wide = sw.clone();
        wide.geometry.as_mut().unwrap().gap = 40e-6;
        assert_relative_eq!(pull_in_voltage(&wide).unwrap(), 8.0 * v, max_relative = 1e-12);

        let mut shut = sw.clone();
        shut.geometry.as_mut().unwrap().gap = 0.0;
        assert_eq!(pull_in_voltage(&shut).unwrap(), 0.0);

        let explicit = SwitchSpec {
            pull_in_voltage: Some(123.0),
            ..sw
        };
        assert_eq!(pull_in_voltage(&explicit).unwrap(), 123.0);

        let nothing = SwitchSpec {
            pull_in_voltage: None,
            geometry: None,
            ..SwitchSpec::default()
        };
        assert!(matches!(pull_in_voltage(&nothing), Err(Error::Config { .. })));
    }

    #[test]
    fn default_switch_is_about_a_kilovolt() {
        let t = SwitchSpec::default().thresholds().unwrap();
        assert!(t.pull_in > 1000.0 && t.pull_in < 1050.0, "{}", t.pull_in);
        assert_relative_eq!(t.release, 0.4 * t.pull_in);
    }

    #[test]
    fn release_above_pull_in_is_rejected() {
        let sw = SwitchSpec {
            release_voltage: Some(1500.0),
            ..SwitchSpec::with_pull_in(1000.0)
        };
        assert!(sw.thresholds().is_err());
    }

    #[test]
    fn closes_exactly_at_threshold_either_polarity() {
        let n = net(0.0);
        for v in [1000.0, -1000.0] {
            let s = ElectricalState {
                pyro_voltage: v,
                ..Default::default()
            };
            let out = switch_transition(&s, &n, thresholds(), AccumulationMode::Bipolar, 0.0).unwrap();
            assert!(out.is_closed(), "{v}");
        }
        let below = ElectricalState {
            pyro_voltage: 999.999,
            ..Default::default()
        };
        let out = switch_transition(&below, &n, thresholds(), AccumulationMode::Bipolar, 0.0).unwrap();
        assert!(!out.is_closed());
    }

    #[test]
    fn hysteresis_keeps_switch_closed_above_release() {
        let n = net(0.0);
        let s = ElectricalState {
            pyro_voltage: 400.0,
            switch_phase: SwitchPhase::Closed,
            conducting: true,
            ..Default::default()
        };
        let out = switch_transition(&s, &n, thresholds(), AccumulationMode::Bipolar, 0.0).unwrap();
        assert!(out.is_closed());
        let s = ElectricalState {
            pyro_voltage: 399.0,
            ..s
        };
        let out = switch_transition(&s, &n, thresholds(), AccumulationMode::Bipolar, 0.0).unwrap();
        assert!(!out.is_closed());
    }

    #[test]
    fn gated_mode_blocks_cooling_closures() {
        let n = net(2e-12);
        let s = ElectricalState {
            pyro_voltage: -1200.0,
            ..Default::default()
        };
        let out =
            switch_transition(&s, &n, thresholds(), AccumulationMode::UnipolarGated, -5e-9).unwrap();
        assert!(!out.is_closed());
        let out = switch_transition(&s, &n, thresholds(), AccumulationMode::Bipolar, -5e-9).unwrap();
        assert!(out.is_closed());
    }

    #[test]
    fn gated_closure_below_load_does_not_discharge_store() {
        let n = net(2e-12);
        let s = ElectricalState {
            pyro_voltage: 1000.0,
            load_voltage: 2000.0,
            ..Default::default()
        };
        let out =
            switch_transition(&s, &n, thresholds(), AccumulationMode::UnipolarGated, 5e-9).unwrap();
        assert!(out.is_closed());
        assert!(!out.conducting);
        assert_eq!(out.load_voltage, 2000.0);
    }

    #[test]
    fn closure_shares_then_releases_when_common_voltage_is_low() {
        let n = net(47e-12);
        let s = ElectricalState {
            pyro_voltage: 1000.0,
            ..Default::default()
        };
        let out =
            switch_transition(&s, &n, thresholds(), AccumulationMode::UnipolarGated, 5e-9).unwrap();
        assert!(!out.is_closed());
        let expect = n.pyro_capacitance() * 1000.0 / n.total_capacitance();
        assert_relative_eq!(out.load_voltage, expect, max_relative = 1e-14);
    }

    #[test]
    fn charge_share_values() {
        let mut n = net(2e-12);
        n.crystal.self_capacitance = 1.27e-12;
        let v = charge_share(3000.0, 0.0, &n).unwrap();
        assert!((v - 1165.1).abs() < 0.05, "{v}");
        assert_eq!(charge_share(700.0, 700.0, &n).unwrap(), 700.0);
        let n0 = net(0.0);
        assert_eq!(charge_share(700.0, 5.0, &n0).unwrap(), 700.0);
        let mut empty = net(0.0);
        empty.crystal.self_capacitance = 0.0;
        assert!(charge_share(1.0, 0.0, &empty).is_err());
    }

    #[test]
    fn energy_values() {
        assert_relative_eq!(stored_energy(2e-12, 2470.0), 6.1009e-6, max_relative = 1e-4);
        assert_eq!(stored_energy(47e-12, 0.0), 0.0);
    }

    #[test]
    fn actuator_map() {
        let act = ActuatorSpec {
            quad_coeff: 2.5e-6 / (1033.0 * 1033.0),
            capacitance: 0.0,
        };
        assert_relative_eq!(actuator_displacement(&act, 1033.0), 2.5e-6, max_relative = 1e-15);
        assert_relative_eq!(actuator_displacement(&act, 516.5), 0.625e-6, max_relative = 1e-15);
        assert_eq!(actuator_displacement(&act, 0.0), 0.0);
        assert!((act.quad_coeff - 2.343e-12).abs() < 5e-16);
    }

    proptest! {
        #[test]
        fn sharing_conserves_charge(
            cp in 1e-13f64..1e-10, cs in 0.0f64..1e-10,
            vp in -5e3f64..5e3, vl in -5e3f64..5e3,
        ) {
            let mut n = net(cs);
            n.crystal.self_capacitance = cp;
            let v = charge_share(vp, vl, &n).unwrap();
            let before = cp * vp + cs * vl;
            let after = (cp + cs) * v;
            let scale = cp * vp.abs() + cs * vl.abs();
            prop_assert!((before - after).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn energy_even_and_nonnegative(c in 0.0f64..1e-9, v in -1e4f64..1e4) {
            prop_assert!(stored_energy(c, v) >= 0.0);
            prop_assert_eq!(stored_energy(c, v), stored_energy(c, -v));
        }

        #[test]
        fn superposition_of_source_currents(i1 in -1e-8f64..1e-8, i2 in -1e-8f64..1e-8) {
            let n = net(2e-12);
            let dt = n.time_constant(false) / 200.0;
            let run = |i: f64| {
                let mut s = ElectricalState::default();
                for _ in 0..300 {
                    s = electrical_step(&s, &n, i, dt).unwrap();
                }
                s.pyro_voltage
            };
            let sum = run(i1) + run(i2);
            let both = run(i1 + i2);
            prop_assert!((sum - both).abs() <= 1e-9 * (run(i1).abs() + run(i2).abs()) + 1e-12);
        }
    }

    #[test]
    fn steady_state_is_i_times_r() {
        let n = net(0.0);
        let tau = n.time_constant(false);
        let dt = tau / 100.0;
        let mut s = ElectricalState::default();
        for _ in 0..2000 {
            s = electrical_step(&s, &n, 4e-9, dt).unwrap();
        }
        assert_relative_eq!(s.pyro_voltage, 4e-9 * n.leak_resistance, max_relative = 1e-6);
    }
}
