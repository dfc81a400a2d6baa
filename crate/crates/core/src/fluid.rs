//! Recirculating fluid as quasi-static plug flow through the chain of units.
//!
//! The fluid at unit `i` carries the inlet temperature from `i` transit delays
//! ago, minus the heat already handed to the upstream units.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveform {
    Square,
    Sine,
    Constant,
}

impl Waveform {
    pub fn as_str(self) -> &'static str {
        match self {
            Waveform::Square => "square",
            Waveform::Sine => "sine",
            Waveform::Constant => "constant",
        }
    }
}

impl std::str::FromStr for Waveform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Waveform::Square),
            "sine" => Ok(Waveform::Sine),
            "constant" => Ok(Waveform::Constant),
            other => Err(Error::config(
                "fluid.schedule.waveform",
                format!("unknown waveform `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InletSchedule {
    pub waveform: Waveform,
    pub hot_temp: f64,
    pub cold_temp: f64,
    pub period: f64,
    pub phase: f64,
}

impl InletSchedule {
    pub fn constant(temp: f64) -> Self {
        InletSchedule {
            waveform: Waveform::Constant,
            hot_temp: temp,
            cold_temp: temp,
            period: 1.0,
            phase: 0.0,
        }
    }

    pub fn square(hot_temp: f64, cold_temp: f64, period: f64) -> Self {
        InletSchedule {
            waveform: Waveform::Square,
            hot_temp,
            cold_temp,
            period,
            phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hot_temp.is_finite() && self.cold_temp.is_finite()) {
            return Err(Error::config("fluid.schedule", "temperatures must be finite"));
        }
        if self.hot_temp < self.cold_temp {
            return Err(Error::config(
                "fluid.schedule.hot_temp",
                "hot temperature must not be below the cold temperature",
            ));
        }
        if self.waveform != Waveform::Constant && !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::config("fluid.schedule.period", "must be positive"));
        }
        if !self.phase.is_finite() {
            return Err(Error::config("fluid.schedule.phase", "must be finite"));
        }
        Ok(())
    }

    /// Inlet temperature at time `t`. The schedule repeats, so negative
    /// arguments (upstream fluid still in transit at start) are well defined.
    pub fn temperature_at(&self, t: f64) -> f64 {
        match self.waveform {
            Waveform::Constant => self.hot_temp,
            Waveform::Square => {
                let local = (t - self.phase).rem_euclid(self.period);
                if local < 0.5 * self.period {
                    self.hot_temp
                } else {
                    self.cold_temp
                }
            }
            Waveform::Sine => {
                let mid = 0.5 * (self.hot_temp + self.cold_temp);
                let amp = 0.5 * (self.hot_temp - self.cold_temp);
                mid + amp * (TAU * (t - self.phase) / self.period).sin()
            }
        }
    }
}

pub fn inlet_temperature(schedule: &InletSchedule, t: f64) -> f64 {
    schedule.temperature_at(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluidChainSpec {
    pub schedule: InletSchedule,
    /// Mass flow times specific heat, W/K.
    pub heat_capacity_rate: f64,
    pub unit_count: usize,
    pub transit_delay_per_unit: f64,
}

impl FluidChainSpec {
    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        if !(self.heat_capacity_rate > 0.0) {
            return Err(Error::config("fluid.heat_capacity_rate", "must be positive"));
        }
        if self.unit_count == 0 {
            return Err(Error::config("fluid.unit_count", "at least one unit is required"));
        }
        if !(self.transit_delay_per_unit >= 0.0 && self.transit_delay_per_unit.is_finite()) {
            return Err(Error::config(
                "fluid.transit_delay_per_unit",
                "must be non-negative",
            ));
        }
        Ok(())
    }

    /// Inlet temperature of the slug that reaches unit `index` at time `t`.
    pub fn delayed_inlet(&self, index: usize, t: f64) -> f64 {
        self.schedule
            .temperature_at(t - index as f64 * self.transit_delay_per_unit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub per_unit_temps: Vec<f64>,
}

impl FluidState {
    pub fn new(spec: &FluidChainSpec, t: f64) -> Self {
        FluidState {
            per_unit_temps: (0..spec.unit_count)
                .map(|i| spec.delayed_inlet(i, t))
                .collect(),
        }
    }

    /// Temperature after the last unit given that unit's draw.
    pub fn outlet_temp(&self, spec: &FluidChainSpec, last_draw: f64) -> f64 {
        self.per_unit_temps.last().copied().unwrap_or(f64::NAN) - last_draw / spec.heat_capacity_rate
    }
}

/// Fluid temperatures seen by each unit at time `t`, given the heat each
/// unit is drawing. The plug flow has no memory, so `state` only fixes the
/// chain length.
pub fn advect_step(
    state: &FluidState,
    spec: &FluidChainSpec,
    unit_draws: &[f64],
    t: f64,
) -> Result<FluidState> {
    if unit_draws.len() != spec.unit_count || state.per_unit_temps.len() != spec.unit_count {
        return Err(Error::Trace(format!(
            "expected {} unit draws and fluid temperatures, got {} and {}",
            spec.unit_count,
            unit_draws.len(),
            state.per_unit_temps.len()
        )));
    }
    let mut per_unit_temps = Vec::with_capacity(spec.unit_count);
    let mut depletion = 0.0;
    for (i, draw) in unit_draws.iter().enumerate() {
        per_unit_temps.push(spec.delayed_inlet(i, t) - depletion);
        depletion += draw / spec.heat_capacity_rate;
    }
    Ok(FluidState { per_unit_temps })
}

/// One step of fluid bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub dt: f64,
    /// Heat taken by each unit during the step, watts.
    pub draws: Vec<f64>,
    /// Inlet temperature of the slug leaving the chain this step.
    pub inlet_temp: f64,
    pub outlet_temp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAudit {
    pub extracted_joules: f64,
    pub enthalpy_drop_joules: f64,
    /// Sum of |draw| dt, the heat throughput in either direction.
    pub gross_joules: f64,
}

impl EnergyAudit {
    /// Mismatch relative to the gross heat throughput. Net extraction over
    /// whole hot/cold cycles is close to zero, so it is a poor denominator.
    pub fn relative_mismatch(&self) -> f64 {
        let diff = (self.extracted_joules - self.enthalpy_drop_joules).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.gross_joules
        }
    }
}

pub fn chain_energy_audit(heat_capacity_rate: f64, rows: &[AuditRow]) -> Result<EnergyAudit> {
    let units = rows.first().map_or(0, |r| r.draws.len());
    let mut audit = EnergyAudit {
        extracted_joules: 0.0,
        enthalpy_drop_joules: 0.0,
        gross_joules: 0.0,
    };
    for (k, row) in rows.iter().enumerate() {
        if row.draws.len() != units {
            return Err(Error::Trace(format!(
                "row {k} has {} draws, expected {units}",
                row.draws.len()
            )));
        }
        if !(row.dt > 0.0) {
            return Err(Error::Trace(format!("row {k} has non-positive dt {}", row.dt)));
        }
        for q in &row.draws {
            audit.extracted_joules += q * row.dt;
            audit.gross_joules += q.abs() * row.dt;
        }
        audit.enthalpy_drop_joules +=
            heat_capacity_rate * (row.inlet_temp - row.outlet_temp) * row.dt;
    }
    Ok(audit)
}
