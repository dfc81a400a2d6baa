//! Hybrid simulation of a fluid loop feeding a chain of generator units.
//!
//! Within one step `dt` the fluid temperature at every unit is held fixed
//! (computed from the inlet schedule and the heat draws at the end of the
//! previous step). All units are then integrated together with RK4; the
//! thermal ladder and the crystal node share the state vector so the source
//! current is evaluated at every stage. Switch transitions are located by
//! bisection on re-integrated sub-steps and applied at the crossing time,
//! after which integration resumes for the rest of the step.

use rayon::prelude::*;

use crate::electro::{
    actuator_displacement, pyro_current, stored_energy, switch_transition, AccumulationMode,
    ActuatorSpec, ElectricalNetworkSpec, ElectricalState, LoadKind, SwitchPhase, SwitchThresholds,
};
use crate::error::{Error, Result};
use crate::fluid::{advect_step, chain_energy_audit, AuditRow, EnergyAudit, FluidChainSpec, FluidState};
use crate::ode::{rk4_step, Rk4Workspace};
use crate::thermal::{Ladder, ThermalUnitSpec, UnitGeometry};
use crate::units::{celsius_to_kelvin, Dimension};

/// Upper bound on switch events inside a single step.
const MAX_EVENTS_PER_STEP: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitConfig {
    pub thermal: ThermalUnitSpec,
    pub electrical: ElectricalNetworkSpec,
    pub actuator: Option<ActuatorSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub fluid: FluidChainSpec,
    pub units: Vec<UnitConfig>,
    /// Initial temperature of every node.
    pub ambient_temp: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Volts; accuracy of localized switch crossings.
    pub event_tolerance: f64,
    pub accumulation_mode: AccumulationMode,
}

impl ScenarioConfig {
    /// Square 30/90 °C inlet with a 240 s period, default geometry and
    /// materials, `unit_count` identical units with the given store.
    pub fn reference(unit_count: usize, store_capacitance: f64) -> Self {
        let ambient = celsius_to_kelvin(30.0);
        let unit = UnitConfig {
            thermal: UnitGeometry::default().to_unit_spec(ambient),
            electrical: ElectricalNetworkSpec::with_store(store_capacitance),
            actuator: None,
        };
        ScenarioConfig {
            fluid: FluidChainSpec {
                schedule: crate::fluid::InletSchedule::square(
                    celsius_to_kelvin(90.0),
                    celsius_to_kelvin(30.0),
                    240.0,
                ),
                heat_capacity_rate: 4.18,
                unit_count,
                transit_delay_per_unit: 0.0,
            },
            units: vec![unit; unit_count],
            ambient_temp: ambient,
            dt: 0.01,
            t_end: 480.0,
            event_tolerance: 0.01,
            accumulation_mode: AccumulationMode::UnipolarGated,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::config("sim.dt", "must be positive"));
        }
        if !(self.t_end > self.dt) {
            return Err(Error::config("sim.t_end", "must exceed sim.dt"));
        }
        if !(self.event_tolerance > 0.0) {
            return Err(Error::config("sim.event_tolerance", "must be positive"));
        }
        if !self.ambient_temp.is_finite() {
            return Err(Error::config("sim.ambient", "must be finite"));
        }
        self.fluid.validate()?;
        if self.units.len() != self.fluid.unit_count {
            return Err(Error::config(
                "units",
                format!(
                    "{} units configured but the fluid chain has {}",
                    self.units.len(),
                    self.fluid.unit_count
                ),
            ));
        }
        for (i, u) in self.units.iter().enumerate() {
            u.validate(self.dt).map_err(|e| e.in_unit(i))?;
        }
        Ok(())
    }
}

impl UnitConfig {
    fn validate(&self, dt: f64) -> Result<()> {
        let ladder = self.thermal.ladder()?;
        ladder.check_step(dt)?;
        self.electrical.validate()?;
        self.electrical.check_step(dt, false)?;
        if let Some(act) = &self.actuator {
            act.validate()?;
        }
        if self.electrical.load_kind == LoadKind::Actuator && self.actuator.is_none() {
            return Err(Error::config("actuator", "actuator load requires an actuator block"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSample {
    pub fluid_temp: f64,
    pub crystal_temp: f64,
    pub pyro_voltage: f64,
    pub switch_closed: bool,
    pub load_voltage: f64,
    /// Joules on the load capacitance.
    pub load_energy: f64,
    /// Metres; zero without an actuator.
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub time: f64,
    pub inlet_temp: f64,
    pub units: Vec<UnitSample>,
    /// Row inserted at a localized switch event rather than a step boundary.
    pub event: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Pull-in: the switch closes.
    Closure,
    /// Voltage fell below the release threshold.
    Release,
    /// Gated mode: the one-way path starts feeding the load.
    Connect,
    /// Gated mode: the one-way path stops conducting.
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEvent {
    pub time: f64,
    pub unit: usize,
    pub kind: EventKind,
    /// Crystal node voltage just before the transition.
    pub pyro_voltage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub events: Vec<SwitchEvent>,
    pub fluid_audit: Vec<AuditRow>,
    pub heat_capacity_rate: f64,
}

impl Trace {
    pub fn max_load_voltage(&self) -> f64 {
        self.unit_max(|u| u.load_voltage.abs())
    }

    pub fn max_load_energy(&self) -> f64 {
        self.unit_max(|u| u.load_energy)
    }

    pub fn max_displacement(&self) -> f64 {
        self.unit_max(|u| u.displacement)
    }

    fn unit_max(&self, f: impl Fn(&UnitSample) -> f64) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.units.iter())
            .map(f)
            .fold(0.0, f64::max)
    }

    pub fn energy_audit(&self) -> Result<EnergyAudit> {
        chain_energy_audit(self.heat_capacity_rate, &self.fluid_audit)
    }

    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("trace has an initial row")
    }
}

/// Bisect on `trajectory` for the time in `interval` at which it crosses
/// `threshold`, in the direction implied by `v_before`.
///
/// Returns the first bracket end on the far side of the threshold once it is
/// within `tolerance` of it (or the bracket has collapsed to rounding).
pub fn localize_event<F>(
    v_before: f64,
    v_after: f64,
    threshold: f64,
    interval: (f64, f64),
    tolerance: f64,
    mut trajectory: F,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (start, end) = interval;
    if v_before == threshold {
        return Ok(start);
    }
    let rising = v_before < threshold;
    let crossed = |v: f64| if rising { v >= threshold } else { v <= threshold };
    if !crossed(v_after) {
        return Err(Error::NoCrossing {
            v_before,
            v_after,
            threshold,
        });
    }
    let (mut lo, mut hi) = (start, end);
    let mut v_hi = v_after;
    for _ in 0..200 {
        if (v_hi - threshold).abs() <= tolerance {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = trajectory(mid);
        if crossed(v) {
            hi = mid;
            v_hi = v;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Per-unit pieces the integrator needs, resolved once per run.
struct UnitModel {
    ladder: Ladder,
    net: ElectricalNetworkSpec,
    thresholds: SwitchThresholds,
    actuator: Option<ActuatorSpec>,
    /// Offset of this unit in the global state vector:
    /// [dynamic temps..., crystal voltage, heat drawn].
    offset: usize,
    n_temps: usize,
}

impl UnitModel {
    fn temps<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[self.offset..self.offset + self.n_temps]
    }

    fn voltage_index(&self) -> usize {
        self.offset + self.n_temps
    }

    fn heat_index(&self) -> usize {
        self.offset + self.n_temps + 1
    }

    fn width(&self) -> usize {
        self.n_temps + 2
    }

    fn source_current(&self, y: &[f64], fluid_temp: f64) -> f64 {
        let rate = self.ladder.crystal_rate(self.temps(y), fluid_temp);
        pyro_current(&self.net.crystal, rate)
    }
}

struct Simulation<'a> {
    config: &'a ScenarioConfig,
    models: Vec<UnitModel>,
    mode: AccumulationMode,
    ws: Rk4Workspace,
    scratch: Vec<f64>,
    expand_buf: Vec<f64>,
}

impl<'a> Simulation<'a> {
    fn new(config: &'a ScenarioConfig) -> Result<Self> {
        let mut offset = 0;
        let mut models = Vec::with_capacity(config.units.len());
        for (i, u) in config.units.iter().enumerate() {
            let ladder = u.thermal.ladder().map_err(|e| e.in_unit(i))?;
            let thresholds = u.electrical.switch.thresholds().map_err(|e| e.in_unit(i))?;
            let n_temps = ladder.dynamic_len();
            let m = UnitModel {
                ladder,
                net: u.electrical.clone(),
                thresholds,
                actuator: u.actuator.clone(),
                offset,
                n_temps,
            };
            offset += m.width();
            models.push(m);
        }
        Ok(Simulation {
            config,
            models,
            mode: config.accumulation_mode,
            ws: Rk4Workspace::new(offset),
            scratch: vec![0.0; offset],
            expand_buf: Vec::new(),
        })
    }

    fn state_len(&self) -> usize {
        self.models.last().map_or(0, |m| m.offset + m.width())
    }

    fn advance(
        models: &[UnitModel],
        ws: &mut Rk4Workspace,
        y: &mut [f64],
        h: f64,
        fluid: &[f64],
        elec: &[ElectricalState],
    ) {
        rk4_step(y, h, ws, |y, dy| {
            for (k, m) in models.iter().enumerate() {
                let f = fluid[k];
                let temps = m.temps(y);
                let (dtemps, rest) = dy[m.offset..m.offset + m.width()].split_at_mut(m.n_temps);
                m.ladder.rates(temps, f, dtemps);
                let i = pyro_current(&m.net.crystal, dtemps[m.n_temps - 1]);
                rest[0] = m.net.voltage_rate(y[m.voltage_index()], i, elec[k].conducting);
                rest[1] = m.ladder.heat_draw(temps, f);
            }
        });
    }

    /// Event functions currently armed for unit `k`. Each is non-negative
    /// exactly when [`switch_transition`] would act.
    fn armed_events(
        &self,
        k: usize,
        y: &[f64],
        fluid_temp: f64,
        e: &ElectricalState,
    ) -> [Option<(EventKind, f64)>; 2] {
        let m = &self.models[k];
        let v = y[m.voltage_index()];
        let i = m.source_current(y, fluid_temp);
        let th = m.thresholds;
        let gated = self.mode == AccumulationMode::UnipolarGated;
        // strictly negative stand-in when the guard condition is false
        let neg = |x: f64| -(x.abs().max(f64::MIN_POSITIVE));
        match (e.switch_phase, gated) {
            (SwitchPhase::Open, false) => [Some((EventKind::Closure, v.abs() - th.pull_in)), None],
            (SwitchPhase::Open, true) => {
                let g = if i > 0.0 { v - th.pull_in } else { neg(v - th.pull_in) };
                [Some((EventKind::Closure, g)), None]
            }
            (SwitchPhase::Closed, _) => {
                let release = if v.abs() < th.release {
                    th.release - v.abs()
                } else {
                    neg(v.abs() - th.release)
                };
                let second = if !gated {
                    None
                } else if e.conducting {
                    // scaled to the voltage change one step of that current makes
                    let net_i = m.net.net_current(v, i);
                    let scale = self.config.dt / m.net.total_capacitance();
                    Some((EventKind::Block, -net_i * scale))
                } else {
                    let g = if m.net.net_current(v, i) > 0.0 {
                        v - e.load_voltage
                    } else {
                        neg(v - e.load_voltage)
                    };
                    Some((EventKind::Connect, g))
                };
                [Some((EventKind::Release, release)), second]
            }
        }
    }

    fn apply_transitions(
        &self,
        t: f64,
        y: &mut [f64],
        fluid: &[f64],
        elec: &mut [ElectricalState],
        events: &mut Vec<SwitchEvent>,
    ) -> Result<bool> {
        let mut changed = false;
        for (k, m) in self.models.iter().enumerate() {
            let vi = m.voltage_index();
            let mut e = elec[k];
            e.pyro_voltage = y[vi];
            if e.conducting {
                e.load_voltage = y[vi];
            }
            let i = m.source_current(y, fluid[k]);
            let next = switch_transition(&e, &m.net, m.thresholds, self.mode, i)
                .map_err(|err| err.in_unit(k))?;
            if next != e {
                let kind = match (e.switch_phase, next.switch_phase) {
                    (SwitchPhase::Open, SwitchPhase::Closed) => EventKind::Closure,
                    (SwitchPhase::Closed, SwitchPhase::Open) => EventKind::Release,
                    _ if next.conducting => EventKind::Connect,
                    _ => EventKind::Block,
                };
                events.push(SwitchEvent {
                    time: t,
                    unit: k,
                    kind,
                    pyro_voltage: e.pyro_voltage,
                });
                changed = true;
            }
            y[vi] = next.pyro_voltage;
            elec[k] = next;
        }
        Ok(changed)
    }

    fn sample(
        &mut self,
        t: f64,
        y: &[f64],
        fluid: &[f64],
        elec: &[ElectricalState],
        event: bool,
    ) -> TraceRow {
        let mut units = Vec::with_capacity(self.models.len());
        for (k, m) in self.models.iter().enumerate() {
            m.ladder.expand(m.temps(y), fluid[k], &mut self.expand_buf);
            let v = y[m.voltage_index()];
            let e = &elec[k];
            let load = if e.conducting { v } else { e.load_voltage };
            let load_energy = stored_energy(m.net.store_capacitance, load);
            units.push(UnitSample {
                fluid_temp: fluid[k],
                crystal_temp: *self.expand_buf.last().unwrap(),
                pyro_voltage: v,
                switch_closed: e.is_closed(),
                load_voltage: load,
                load_energy,
                displacement: m.actuator.as_ref().map_or(0.0, |a| actuator_displacement(a, load)),
            });
        }
        TraceRow {
            time: t,
            inlet_temp: self.config.fluid.schedule.temperature_at(t),
            units,
            event,
        }
    }

    fn run(mut self) -> Result<Trace> {
        let cfg = self.config;
        let n = self.state_len();
        let mut y = vec![0.0; n];
        for m in &self.models {
            for t in &mut y[m.offset..m.offset + m.n_temps] {
                *t = cfg.ambient_temp;
            }
        }
        let mut elec = vec![ElectricalState::default(); self.models.len()];
        let mut fluid_state = FluidState::new(&cfg.fluid, 0.0);
        let mut lagged_draws = vec![0.0; self.models.len()];

        let steps = (cfg.t_end / cfg.dt).round().max(1.0) as usize;
        let mut trace = Trace {
            rows: Vec::with_capacity(steps + 1),
            events: Vec::new(),
            fluid_audit: Vec::with_capacity(steps),
            heat_capacity_rate: cfg.fluid.heat_capacity_rate,
        };
        let first = self.sample(0.0, &y, &fluid_state.per_unit_temps, &elec, false);
        trace.rows.push(first);

        for step in 0..steps {
            let t0 = step as f64 * cfg.dt;
            let t1 = (step + 1) as f64 * cfg.dt;
            fluid_state = advect_step(&fluid_state, &cfg.fluid, &lagged_draws, t0)?;
            let fluid = fluid_state.per_unit_temps.clone();
            let heat_before: Vec<f64> = self.models.iter().map(|m| y[m.heat_index()]).collect();

            self.apply_transitions(t0, &mut y, &fluid, &mut elec, &mut trace.events)?;

            let mut t = t0;
            let mut n_events = 0;
            while t < t1 {
                let h_rem = t1 - t;
                self.scratch.copy_from_slice(&y);
                Self::advance(&self.models, &mut self.ws, &mut self.scratch, h_rem, &fluid, &elec);

                let mut earliest: Option<f64> = None;
                for k in 0..self.models.len() {
                    let before = self.armed_events(k, &y, fluid[k], &elec[k]);
                    let after = self.armed_events(k, &self.scratch, fluid[k], &elec[k]);
                    for (slot, (b, a)) in before.iter().zip(after.iter()).enumerate() {
                        let (Some((kind, gb)), Some((_, ga))) = (b, a) else { continue };
                        if !(*gb < 0.0 && *ga >= 0.0) {
                            continue;
                        }
                        let mut probe = y.clone();
                        // the load drains after a block crossing, so resolve it to rounding
                        let tol = if *kind == EventKind::Block { 0.0 } else { cfg.event_tolerance };
                        let h = localize_event(*gb, *ga, 0.0, (0.0, h_rem), tol, |h| {
                            probe.copy_from_slice(&y);
                            Self::advance(&self.models, &mut self.ws, &mut probe, h, &fluid, &elec);
                            self.armed_events(k, &probe, fluid[k], &elec[k])[slot]
                                .map_or(f64::NEG_INFINITY, |(_, g)| g)
                        })?;
                        earliest = Some(earliest.map_or(h, |e: f64| e.min(h)));
                    }
                }

                match earliest {
                    Some(h) if h < h_rem => {
                        Self::advance(&self.models, &mut self.ws, &mut y, h, &fluid, &elec);
                        t += h;
                        let changed =
                            self.apply_transitions(t, &mut y, &fluid, &mut elec, &mut trace.events)?;
                        if changed && t < t1 {
                            let row = self.sample(t, &y, &fluid, &elec, true);
                            if row.time > trace.rows.last().map_or(f64::NEG_INFINITY, |r| r.time) {
                                trace.rows.push(row);
                            }
                        }
                        n_events += 1;
                        if n_events > MAX_EVENTS_PER_STEP {
                            return Err(Error::Trace(format!(
                                "more than {MAX_EVENTS_PER_STEP} switch events in the step at t = {t0} s"
                            )));
                        }
                    }
                    _ => {
                        y.copy_from_slice(&self.scratch);
                        t = t1;
                        self.apply_transitions(t, &mut y, &fluid, &mut elec, &mut trace.events)?;
                    }
                }
            }
            // keep load voltages in sync with the merged node
            for (k, m) in self.models.iter().enumerate() {
                if elec[k].conducting {
                    elec[k].load_voltage = y[m.voltage_index()];
                }
                elec[k].pyro_voltage = y[m.voltage_index()];
            }

            let draws: Vec<f64> = self
                .models
                .iter()
                .zip(&heat_before)
                .map(|(m, e0)| (y[m.heat_index()] - e0) / cfg.dt)
                .collect();
            let last = self.models.len() - 1;
            trace.fluid_audit.push(AuditRow {
                dt: cfg.dt,
                draws,
                inlet_temp: cfg.fluid.delayed_inlet(last, t0),
                outlet_temp: fluid_state.outlet_temp(&cfg.fluid, lagged_draws[last]),
            });
            for (k, m) in self.models.iter().enumerate() {
                lagged_draws[k] = m.ladder.heat_draw(m.temps(&y), fluid[k]);
            }

            let row = self.sample(t1, &y, &fluid, &elec, false);
            trace.rows.push(row);
        }
        Ok(trace)
    }
}

/// Run one scenario to completion.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Trace> {
    config.validate()?;
    Simulation::new(config)?.run()
}

/// Numeric configuration fields a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Dt,
    TEnd,
    HotTemp,
    ColdTemp,
    Period,
    HeatCapacityRate,
    StoreCapacitance,
    ParasiticCapacitance,
    LeakResistance,
    PullInVoltage,
    PyroCoeff,
}

impl SweepParam {
    const PATHS: [(&'static str, SweepParam); 11] = [
        ("sim.dt", SweepParam::Dt),
        ("sim.t_end", SweepParam::TEnd),
        ("fluid.schedule.hot", SweepParam::HotTemp),
        ("fluid.schedule.cold", SweepParam::ColdTemp),
        ("fluid.schedule.period", SweepParam::Period),
        ("fluid.heat_capacity_rate", SweepParam::HeatCapacityRate),
        ("electrical.store_capacitance", SweepParam::StoreCapacitance),
        ("electrical.parasitic_capacitance", SweepParam::ParasiticCapacitance),
        ("electrical.leak_resistance", SweepParam::LeakResistance),
        ("switch.pull_in_voltage", SweepParam::PullInVoltage),
        ("crystal.pyro_coeff", SweepParam::PyroCoeff),
    ];

    pub fn dimension(self) -> Dimension {
        match self {
            SweepParam::Dt | SweepParam::TEnd | SweepParam::Period => Dimension::Time,
            SweepParam::HotTemp | SweepParam::ColdTemp => Dimension::Temperature,
            SweepParam::HeatCapacityRate => Dimension::HeatCapacityRate,
            SweepParam::StoreCapacitance | SweepParam::ParasiticCapacitance => {
                Dimension::Capacitance
            }
            SweepParam::LeakResistance => Dimension::Resistance,
            SweepParam::PullInVoltage => Dimension::Voltage,
            SweepParam::PyroCoeff => Dimension::PyroCoefficient,
        }
    }

    fn is_unit_field(self) -> bool {
        matches!(
            self,
            SweepParam::StoreCapacitance
                | SweepParam::ParasiticCapacitance
                | SweepParam::LeakResistance
                | SweepParam::PullInVoltage
                | SweepParam::PyroCoeff
        )
    }
}

/// A parameter path such as `fluid.schedule.hot`, `units.electrical.store_capacitance`
/// (every unit) or `units[1].switch.pull_in_voltage` (one unit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepTarget {
    pub param: SweepParam,
    pub unit: Option<usize>,
}

impl std::str::FromStr for SweepTarget {
    type Err = Error;

    fn from_str(path: &str) -> Result<Self> {
        let bad = || {
            let known: Vec<_> = SweepParam::PATHS.iter().map(|(p, _)| *p).collect();
            Error::config(
                path,
                format!("not a sweepable parameter; unit fields take a `units.` or `units[i].` prefix, known: {}", known.join(", ")),
            )
        };
        let (unit, rest, scoped) = if let Some(rest) = path.strip_prefix("units.") {
            (None, rest, true)
        } else if let Some(rest) = path.strip_prefix("units[") {
            let (idx, rest) = rest.split_once("].").ok_or_else(bad)?;
            let idx: usize = idx.parse().map_err(|_| bad())?;
            (Some(idx), rest, true)
        } else {
            (None, path, false)
        };
        let param = SweepParam::PATHS
            .iter()
            .find(|(p, _)| *p == rest)
            .map(|(_, v)| *v)
            .ok_or_else(bad)?;
        if param.is_unit_field() != scoped {
            return Err(bad());
        }
        Ok(SweepTarget { param, unit })
    }
}

impl SweepTarget {
    pub fn apply(&self, config: &mut ScenarioConfig, value: f64) -> Result<()> {
        let units: Vec<usize> = match self.unit {
            Some(i) if i >= config.units.len() => {
                return Err(Error::config(
                    format!("units[{i}]"),
                    format!("only {} units configured", config.units.len()),
                ))
            }
            Some(i) => vec![i],
            None => (0..config.units.len()).collect(),
        };
        match self.param {
            SweepParam::Dt => config.dt = value,
            SweepParam::TEnd => config.t_end = value,
            SweepParam::HotTemp => config.fluid.schedule.hot_temp = value,
            SweepParam::ColdTemp => config.fluid.schedule.cold_temp = value,
            SweepParam::Period => config.fluid.schedule.period = value,
            SweepParam::HeatCapacityRate => config.fluid.heat_capacity_rate = value,
            p => {
                for i in units {
                    let net = &mut config.units[i].electrical;
                    match p {
                        SweepParam::StoreCapacitance => net.store_capacitance = value,
                        SweepParam::ParasiticCapacitance => net.parasitic_capacitance = value,
                        SweepParam::LeakResistance => net.leak_resistance = value,
                        SweepParam::PullInVoltage => net.switch.pull_in_voltage = Some(value),
                        SweepParam::PyroCoeff => net.crystal.pyro_coeff = value,
                        _ => unreachable!(),
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub max_load_voltage: f64,
    /// Joules.
    pub max_load_energy: f64,
}

/// One independent run per value, executed in parallel; rows come back in
/// the order of `values`.
pub fn sweep(template: &ScenarioConfig, target: SweepTarget, values: &[f64]) -> Result<Vec<SweepRow>> {
    let configs = values
        .iter()
        .map(|&v| {
            let mut c = template.clone();
            target.apply(&mut c, v)?;
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(c, &value)| {
            let trace = run_scenario(c)?;
            Ok(SweepRow {
                value,
                max_load_voltage: trace.max_load_voltage(),
                max_load_energy: trace.max_load_energy(),
            })
        })
        .collect()
}
