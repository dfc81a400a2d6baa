//! Series RC ladder for one generator unit: fluid, metal channel wall,
//! adhesive bond, crystal, with an optional loss path from the crystal to
//! ambient air.
//!
//! Each layer contributes a resistance between the previous node (or the
//! fluid) and its own node, and a heat capacity at its own node. Layers with
//! zero capacity are algebraic: their temperature follows the series
//! resistance divider between the neighbouring dynamic nodes.

use crate::error::{Error, Result};
use crate::ode::{rk4_step, Rk4Workspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Channel,
    Adhesive,
    Crystal,
}

impl LayerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LayerKind::Channel => "channel",
            LayerKind::Adhesive => "adhesive",
            LayerKind::Crystal => "crystal",
        }
    }
}

impl std::fmt::Display for LayerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for LayerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "channel" => Ok(LayerKind::Channel),
            "adhesive" => Ok(LayerKind::Adhesive),
            "crystal" => Ok(LayerKind::Crystal),
            other => Err(Error::config(
                "layer.label",
                format!("unknown layer `{other}` (expected channel, adhesive or crystal)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalLayerSpec {
    pub kind: LayerKind,
    /// K/W, between the previous node and this layer's node.
    pub thermal_resistance: f64,
    /// J/K. Zero makes the node algebraic (the crystal must be dynamic).
    pub thermal_capacitance: f64,
}

impl ThermalLayerSpec {
    pub fn new(kind: LayerKind, thermal_resistance: f64, thermal_capacitance: f64) -> Self {
        ThermalLayerSpec {
            kind,
            thermal_resistance,
            thermal_capacitance,
        }
    }

    pub fn time_constant(&self) -> f64 {
        self.thermal_resistance * self.thermal_capacitance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalUnitSpec {
    /// Fluid side first, crystal last.
    pub layers: Vec<ThermalLayerSpec>,
    pub ambient_temp: f64,
    /// Crystal to ambient air, K/W. `f64::INFINITY` disables the loss path.
    pub ambient_loss_resistance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    /// One temperature per layer, kelvin.
    pub node_temps: Vec<f64>,
    /// Rate of the crystal node at the current state and fluid temperature.
    pub crystal_dtdt: f64,
}

impl ThermalState {
    pub fn crystal_temp(&self) -> f64 {
        *self.node_temps.last().expect("validated ladder has a crystal node")
    }
}

/// Geometry and handbook material data from which default layer values are
/// derived. Lengths in metres, areas in square metres.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGeometry {
    /// Crystal faces bonded into the holder (three 5 mm faces).
    pub contact_area: f64,
    pub wall_thickness: f64,
    /// AlSi10Mg, W/(m K).
    pub wall_conductivity: f64,
    /// Channel surface wetted by the fluid within one holder.
    pub wetted_area: f64,
    /// Effective fluid-side film coefficient, W/(m² K).
    pub film_coefficient: f64,
    pub holder_volume: f64,
    /// J/(m³ K).
    pub holder_volumetric_heat_capacity: f64,
    pub adhesive_thickness: f64,
    pub adhesive_conductivity: f64,
    pub adhesive_volumetric_heat_capacity: f64,
    /// Treat the bond line as a pure resistance.
    pub lump_adhesive: bool,
    pub crystal_edge: f64,
    pub crystal_conductivity: f64,
    pub crystal_density: f64,
    pub crystal_specific_heat: f64,
    /// Crystal surface exposed to still air.
    pub exposed_area: f64,
    pub air_film_coefficient: f64,
}

impl Default for UnitGeometry {
    fn default() -> Self {
        UnitGeometry {
            contact_area: 75e-6,
            wall_thickness: 500e-6,
            wall_conductivity: 130.0,
            wetted_area: 63e-6,
            film_coefficient: 800.0,
            holder_volume: 0.3e-6,
            holder_volumetric_heat_capacity: 2.4e6,
            adhesive_thickness: 100e-6,
            adhesive_conductivity: 1.4,
            adhesive_volumetric_heat_capacity: 2.0e6,
            lump_adhesive: true,
            crystal_edge: 5e-3,
            crystal_conductivity: 4.6,
            crystal_density: 4640.0,
            crystal_specific_heat: 630.0,
            exposed_area: 75e-6,
            air_film_coefficient: 10.0,
        }
    }
}

impl UnitGeometry {
    pub fn to_unit_spec(&self, ambient_temp: f64) -> ThermalUnitSpec {
        let channel_r = self.wall_thickness / (self.wall_conductivity * self.contact_area)
            + 1.0 / (self.film_coefficient * self.wetted_area);
        let channel_c = self.holder_volume * self.holder_volumetric_heat_capacity;

        let adhesive_r = self.adhesive_thickness / (self.adhesive_conductivity * self.contact_area);
        let adhesive_c = if self.lump_adhesive {
            0.0
        } else {
            self.adhesive_thickness * self.contact_area * self.adhesive_volumetric_heat_capacity
        };

        // conduction from the bonded faces to the crystal centre
        let crystal_r = 0.5 * self.crystal_edge / (self.crystal_conductivity * self.contact_area);
        let crystal_c =
            self.crystal_edge.powi(3) * self.crystal_density * self.crystal_specific_heat;

        let ambient_loss_resistance = if self.air_film_coefficient > 0.0 {
            1.0 / (self.air_film_coefficient * self.exposed_area)
        } else {
            f64::INFINITY
        };

        ThermalUnitSpec {
            layers: vec![
                ThermalLayerSpec::new(LayerKind::Channel, channel_r, channel_c),
                ThermalLayerSpec::new(LayerKind::Adhesive, adhesive_r, adhesive_c),
                ThermalLayerSpec::new(LayerKind::Crystal, crystal_r, crystal_c),
            ],
            ambient_temp,
            ambient_loss_resistance,
        }
    }
}

impl ThermalUnitSpec {
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::config("thermal.layers", "at least one layer is required"));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            let name = format!("thermal.layers[{i}] ({})", layer.kind);
            if !(layer.thermal_resistance > 0.0 && layer.thermal_resistance.is_finite()) {
                return Err(Error::config(
                    name,
                    format!("thermal resistance must be positive, got {}", layer.thermal_resistance),
                ));
            }
            let c = layer.thermal_capacitance;
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::config(
                    name,
                    format!("thermal capacitance must be non-negative, got {c}"),
                ));
            }
        }
        let last = self.layers.last().unwrap();
        if last.kind != LayerKind::Crystal {
            return Err(Error::config("thermal.layers", "the last layer must be the crystal"));
        }
        if last.thermal_capacitance <= 0.0 {
            return Err(Error::config(
                format!("thermal.layers[{}] (crystal)", self.layers.len() - 1),
                "crystal thermal capacitance must be positive",
            ));
        }
        if !(self.ambient_loss_resistance > 0.0) {
            return Err(Error::config(
                "thermal.ambient_loss_resistance",
                "must be positive or infinite",
            ));
        }
        if !self.ambient_temp.is_finite() {
            return Err(Error::config("thermal.ambient_temp", "must be finite"));
        }
        Ok(())
    }

    pub fn total_resistance(&self) -> f64 {
        self.layers.iter().map(|l| l.thermal_resistance).sum()
    }

    pub fn total_capacitance(&self) -> f64 {
        self.layers.iter().map(|l| l.thermal_capacitance).sum()
    }

    /// Fluid-to-crystal resistance times the total heat capacity.
    pub fn effective_time_constant(&self) -> f64 {
        self.total_resistance() * self.total_capacitance()
    }

    pub fn ladder(&self) -> Result<Ladder> {
        self.validate()?;
        Ok(Ladder::new(self))
    }

    /// Largest step the explicit integrator accepts for this ladder.
    pub fn max_stable_dt(&self) -> Result<f64> {
        Ok(self.ladder()?.max_stable_dt())
    }
}

#[derive(Debug, Clone, Copy)]
enum Anchor {
    Fluid,
    Node(usize),
}

/// Compiled form of a validated [`ThermalUnitSpec`] operating on the vector
/// of dynamic node temperatures.
#[derive(Debug, Clone)]
pub struct Ladder {
    layer_count: usize,
    /// Layer index of each dynamic node.
    dynamic_layers: Vec<usize>,
    capacitance: Vec<f64>,
    /// Conductance from the previous dynamic node (or the fluid).
    upstream_g: Vec<f64>,
    ambient_g: f64,
    ambient_temp: f64,
    /// For every layer: where its temperature comes from.
    slaving: Vec<Slave>,
    first_resistance: f64,
}

#[derive(Debug, Clone, Copy)]
enum Slave {
    Dynamic(usize),
    /// T = T_up + w (T_down - T_up)
    Divider { up: Anchor, down: usize, w: f64 },
}

impl Ladder {
    fn new(spec: &ThermalUnitSpec) -> Self {
        let mut dynamic_layers = Vec::new();
        let mut capacitance = Vec::new();
        let mut upstream_g = Vec::new();
        let mut pending_r = 0.0;
        for (i, layer) in spec.layers.iter().enumerate() {
            pending_r += layer.thermal_resistance;
            if layer.thermal_capacitance > 0.0 {
                dynamic_layers.push(i);
                capacitance.push(layer.thermal_capacitance);
                upstream_g.push(1.0 / pending_r);
                pending_r = 0.0;
            }
        }

        let mut slaving = Vec::with_capacity(spec.layers.len());
        let mut up = Anchor::Fluid;
        let mut up_layer: Option<usize> = None;
        let mut next_dyn = 0;
        for i in 0..spec.layers.len() {
            if next_dyn < dynamic_layers.len() && dynamic_layers[next_dyn] == i {
                slaving.push(Slave::Dynamic(next_dyn));
                up = Anchor::Node(next_dyn);
                up_layer = Some(i);
                next_dyn += 1;
                continue;
            }
            let down_layer = dynamic_layers[next_dyn];
            let start = up_layer.map_or(0, |l| l + 1);
            let r_total: f64 = spec.layers[start..=down_layer]
                .iter()
                .map(|l| l.thermal_resistance)
                .sum();
            let r_to_node: f64 = spec.layers[start..=i]
                .iter()
                .map(|l| l.thermal_resistance)
                .sum();
            slaving.push(Slave::Divider {
                up,
                down: next_dyn,
                w: r_to_node / r_total,
            });
        }

        Ladder {
            layer_count: spec.layers.len(),
            dynamic_layers,
            capacitance,
            upstream_g,
            ambient_g: 1.0 / spec.ambient_loss_resistance,
            ambient_temp: spec.ambient_temp,
            slaving,
            first_resistance: spec.layers[0].thermal_resistance,
        }
    }

    pub fn dynamic_len(&self) -> usize {
        self.dynamic_layers.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    /// Node time constants C / (sum of attached conductances).
    fn node_time_constants(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.dynamic_len();
        (0..n).map(move |k| {
            let down = if k + 1 < n {
                self.upstream_g[k + 1]
            } else {
                self.ambient_g
            };
            self.capacitance[k] / (self.upstream_g[k] + down)
        })
    }

    pub fn min_time_constant(&self) -> f64 {
        self.node_time_constants().fold(f64::INFINITY, f64::min)
    }

    pub fn max_stable_dt(&self) -> f64 {
        self.min_time_constant() / 4.0
    }

    pub fn check_step(&self, dt: f64) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::StepSize {
                dt,
                limit: self.max_stable_dt(),
                context: "thermal step must be positive".into(),
            });
        }
        let tau = self.min_time_constant();
        if dt > tau / 4.0 {
            return Err(Error::StepSize {
                dt,
                limit: tau / 4.0,
                context: format!("thermal ladder, limiting node time constant {tau} s"),
            });
        }
        Ok(())
    }

    /// Write dT/dt of every dynamic node into `out`.
    pub fn rates(&self, temps: &[f64], fluid_temp: f64, out: &mut [f64]) {
        let n = self.dynamic_len();
        let mut inflow = self.upstream_g[0] * (fluid_temp - temps[0]);
        for k in 0..n {
            let outflow = if k + 1 < n {
                self.upstream_g[k + 1] * (temps[k] - temps[k + 1])
            } else if self.ambient_g > 0.0 {
                self.ambient_g * (temps[k] - self.ambient_temp)
            } else {
                0.0
            };
            out[k] = (inflow - outflow) / self.capacitance[k];
            inflow = outflow;
        }
    }

    pub fn crystal_rate(&self, temps: &[f64], fluid_temp: f64) -> f64 {
        let n = self.dynamic_len();
        let inflow = if n == 1 {
            self.upstream_g[0] * (fluid_temp - temps[0])
        } else {
            self.upstream_g[n - 1] * (temps[n - 2] - temps[n - 1])
        };
        let outflow = if self.ambient_g > 0.0 {
            self.ambient_g * (temps[n - 1] - self.ambient_temp)
        } else {
            0.0
        };
        (inflow - outflow) / self.capacitance[n - 1]
    }

    /// Heat flowing from the fluid into the first dynamic node, watts.
    pub fn heat_draw(&self, temps: &[f64], fluid_temp: f64) -> f64 {
        self.upstream_g[0] * (fluid_temp - temps[0])
    }

    pub fn dynamic_temps(&self, state: &ThermalState) -> Vec<f64> {
        self.dynamic_layers
            .iter()
            .map(|&i| state.node_temps[i])
            .collect()
    }

    /// Expand dynamic temperatures to one value per layer.
    pub fn expand(&self, temps: &[f64], fluid_temp: f64, node_temps: &mut Vec<f64>) {
        node_temps.clear();
        for slave in &self.slaving {
            let t = match *slave {
                Slave::Dynamic(k) => temps[k],
                Slave::Divider { up, down, w } => {
                    let t_up = match up {
                        Anchor::Fluid => fluid_temp,
                        Anchor::Node(k) => temps[k],
                    };
                    t_up + w * (temps[down] - t_up)
                }
            };
            node_temps.push(t);
        }
    }

    pub fn state_from(&self, temps: &[f64], fluid_temp: f64) -> ThermalState {
        let mut node_temps = Vec::with_capacity(self.layer_count);
        self.expand(temps, fluid_temp, &mut node_temps);
        ThermalState {
            node_temps,
            crystal_dtdt: self.crystal_rate(temps, fluid_temp),
        }
    }

    pub fn first_resistance(&self) -> f64 {
        self.first_resistance
    }
}

pub fn build_unit_network(spec: &ThermalUnitSpec, initial_temp: f64) -> Result<ThermalState> {
    spec.validate()?;
    if !initial_temp.is_finite() {
        return Err(Error::config("thermal.initial_temp", "must be finite"));
    }
    Ok(ThermalState {
        node_temps: vec![initial_temp; spec.layers.len()],
        crystal_dtdt: 0.0,
    })
}

/// Advance the ladder by `dt` with the fluid held at `fluid_temp`.
pub fn thermal_step(
    state: &ThermalState,
    spec: &ThermalUnitSpec,
    fluid_temp: f64,
    dt: f64,
) -> Result<ThermalState> {
    let ladder = spec.ladder()?;
    ladder.check_step(dt)?;
    if state.node_temps.len() != ladder.layer_count() {
        return Err(Error::config(
            "thermal.state",
            format!(
                "state has {} nodes, spec has {} layers",
                state.node_temps.len(),
                ladder.layer_count()
            ),
        ));
    }
    let mut temps = ladder.dynamic_temps(state);
    let mut ws = Rk4Workspace::new(temps.len());
    rk4_step(&mut temps, dt, &mut ws, |y, dy| ladder.rates(y, fluid_temp, dy));
    Ok(ladder.state_from(&temps, fluid_temp))
}

/// Largest |dT/dt| of the crystal when the fluid steps to `fluid_temp` from a
/// unit soaked at `ambient`, over `horizon` seconds.
pub fn peak_crystal_dtdt(
    spec: &ThermalUnitSpec,
    fluid_temp: f64,
    ambient: f64,
    horizon: f64,
) -> Result<f64> {
    let spec = ThermalUnitSpec {
        ambient_temp: ambient,
        ..spec.clone()
    };
    let ladder = spec.ladder()?;
    if !(horizon > 0.0) {
        return Err(Error::config("horizon", "must be positive"));
    }
    let dt = ladder.max_stable_dt().min(horizon / 20_000.0);
    let steps = (horizon / dt).ceil() as usize;
    let dt = horizon / steps as f64;

    let mut temps = vec![ambient; ladder.dynamic_len()];
    let mut ws = Rk4Workspace::new(temps.len());
    let mut peak = ladder.crystal_rate(&temps, fluid_temp).abs();
    for _ in 0..steps {
        rk4_step(&mut temps, dt, &mut ws, |y, dy| ladder.rates(y, fluid_temp, dy));
        peak = peak.max(ladder.crystal_rate(&temps, fluid_temp).abs());
    }
    Ok(peak)
}

/// Heat leaving the fluid into the unit, watts. Negative when the fluid is
/// colder than the channel.
pub fn unit_heat_draw(state: &ThermalState, spec: &ThermalUnitSpec, fluid_temp: f64) -> f64 {
    (fluid_temp - state.node_temps[0]) / spec.layers[0].thermal_resistance
}
