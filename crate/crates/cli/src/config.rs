//! JSON scenario documents.
//!
//! Every scalar is a [`Quantity`]: a bare SI number or a string with a unit
//! suffix. Optional fields fall back to defaults; each one applied is
//! reported so the caller can echo it.

use std::path::Path;

use pyrohv::electro::{
    AccumulationMode, ActuatorSpec, CrystalSpec, ElectricalNetworkSpec, LoadKind, SwitchGeometry,
    SwitchSpec, DEFAULT_CONTACT_RESISTANCE, DEFAULT_LEAK_RESISTANCE,
};
use pyrohv::engine::{ScenarioConfig, UnitConfig};
use pyrohv::fluid::{FluidChainSpec, InletSchedule, Waveform};
use pyrohv::thermal::{LayerKind, ThermalLayerSpec, ThermalUnitSpec, UnitGeometry};
use pyrohv::units::{celsius_to_kelvin, Dimension};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::quantity::Quantity;

type Q = Quantity;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub sim: SimDoc,
    pub fluid: FluidDoc,
    pub units: Vec<UnitDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimDoc {
    pub dt: Q,
    pub t_end: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_tolerance: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accumulation_mode: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidDoc {
    pub schedule: ScheduleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heat_capacity_rate: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transit_delay_per_unit: Option<Q>,
    /// Replicates a single `units` entry this many times.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waveform: Option<String>,
    pub hot: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cold: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal: Option<ThermalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crystal: Option<CrystalDoc>,
    pub electrical: ElectricalDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch: Option<SwitchDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actuator: Option<ActuatorDoc>,
}

/// Either `geometry` (derived ladder) or explicit `layers`, not both.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<LayerDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_loss_resistance: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDoc {
    pub kind: String,
    pub resistance: Q,
    pub capacitance: Q,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDoc {
    pub contact_area: Option<Q>,
    pub wall_thickness: Option<Q>,
    pub wall_conductivity: Option<Q>,
    pub wetted_area: Option<Q>,
    pub film_coefficient: Option<Q>,
    pub holder_volume: Option<Q>,
    pub holder_volumetric_heat_capacity: Option<Q>,
    pub adhesive_thickness: Option<Q>,
    pub adhesive_conductivity: Option<Q>,
    pub adhesive_volumetric_heat_capacity: Option<Q>,
    pub lump_adhesive: Option<bool>,
    pub crystal_edge: Option<Q>,
    pub crystal_conductivity: Option<Q>,
    pub crystal_density: Option<Q>,
    pub crystal_specific_heat: Option<Q>,
    pub exposed_area: Option<Q>,
    pub air_film_coefficient: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalDoc {
    /// Cube edge; sets electrode area and thickness unless those are given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pyro_coeff: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electrode_area: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_permittivity: Option<Q>,
    /// Overrides the parallel-plate value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacitance: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectricalDoc {
    pub store_capacitance: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parasitic_capacitance: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leak_resistance: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pull_in_voltage: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub release_voltage: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact_resistance: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actuation_area: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spring_constant: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActuatorDoc {
    pub quad_coeff: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacitance: Option<Q>,
}

/// Converts document values to SI and records every default it applies.
#[derive(Default)]
struct Resolver {
    defaults: Vec<String>,
}

impl Resolver {
    fn req(&self, q: &Q, at: &str, dim: Dimension) -> Result<f64> {
        q.to_si(dim).map_err(|m| CliError::at(at, m))
    }

    fn opt(&mut self, q: &Option<Q>, at: &str, dim: Dimension, default: f64) -> Result<f64> {
        match q {
            Some(q) => self.req(q, at, dim),
            None => {
                self.note(at, &display(&Quantity::si(default, dim)));
                Ok(default)
            }
        }
    }

    fn note(&mut self, at: &str, value: &str) {
        self.defaults.push(format!("{at} = {value}"));
    }
}

fn display(q: &Q) -> String {
    match q {
        Quantity::Number(v) => v.to_string(),
        Quantity::Text(s) => s.clone(),
    }
}

/// Config plus the defaults that were filled in, as `path = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedConfig {
    pub config: ScenarioConfig,
    pub defaults: Vec<String>,
}

pub fn parse_config(path: &Path) -> Result<ParsedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_str(&text)
}

pub fn parse_document(text: &str) -> Result<ConfigDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let at = if at == "." { "document".to_string() } else { at };
        CliError::at(at, e.into_inner().to_string())
    })
}

pub fn parse_config_str(text: &str) -> Result<ParsedConfig> {
    let doc = parse_document(text)?;
    resolve(&doc)
}

pub fn resolve(doc: &ConfigDocument) -> Result<ParsedConfig> {
    let mut r = Resolver::default();
    let s = &doc.sim;
    let ambient = r.opt(&s.ambient, "sim.ambient", Dimension::Temperature, celsius_to_kelvin(30.0))?;
    let dt = r.req(&s.dt, "sim.dt", Dimension::Time)?;
    let t_end = r.req(&s.t_end, "sim.t_end", Dimension::Time)?;
    let event_tolerance = r.opt(&s.event_tolerance, "sim.event_tolerance", Dimension::Voltage, 0.01)?;
    let accumulation_mode = match &s.accumulation_mode {
        Some(m) => m
            .parse()
            .map_err(|e: pyrohv::Error| CliError::at("sim.accumulation_mode", e.to_string()))?,
        None => {
            let m = AccumulationMode::default();
            r.note("sim.accumulation_mode", m.as_str());
            m
        }
    };

    let f = &doc.fluid;
    let sch = &f.schedule;
    let waveform = match &sch.waveform {
        Some(w) => w
            .parse()
            .map_err(|e: pyrohv::Error| CliError::at("fluid.schedule.waveform", e.to_string()))?,
        None => {
            r.note("fluid.schedule.waveform", Waveform::Square.as_str());
            Waveform::Square
        }
    };
    let hot_temp = r.req(&sch.hot, "fluid.schedule.hot", Dimension::Temperature)?;
    let cold_temp = match (&sch.cold, waveform) {
        (None, Waveform::Constant) => hot_temp,
        (q, _) => r.opt(q, "fluid.schedule.cold", Dimension::Temperature, ambient)?,
    };
    let schedule = InletSchedule {
        waveform,
        hot_temp,
        cold_temp,
        period: r.opt(&sch.period, "fluid.schedule.period", Dimension::Time, 240.0)?,
        phase: r.opt(&sch.phase, "fluid.schedule.phase", Dimension::Time, 0.0)?,
    };

    if doc.units.is_empty() {
        return Err(CliError::at("units", "at least one unit is required"));
    }
    let mut units = Vec::with_capacity(doc.units.len());
    for (i, u) in doc.units.iter().enumerate() {
        units.push(resolve_unit(&mut r, u, &format!("units[{i}]"), ambient)?);
    }
    if let Some(n) = f.unit_count {
        if units.len() == 1 && n >= 1 {
            units = vec![units.pop().unwrap(); n];
        } else if n != units.len() {
            return Err(CliError::at(
                "fluid.unit_count",
                format!("{n} does not match the {} entries in units", units.len()),
            ));
        }
    }

    let fluid = FluidChainSpec {
        schedule,
        heat_capacity_rate: r.opt(&f.heat_capacity_rate, "fluid.heat_capacity_rate", Dimension::HeatCapacityRate, 4.18)?,
        unit_count: units.len(),
        transit_delay_per_unit: r.opt(&f.transit_delay_per_unit, "fluid.transit_delay_per_unit", Dimension::Time, 0.0)?,
    };
    let config = ScenarioConfig {
        fluid,
        units,
        ambient_temp: ambient,
        dt,
        t_end,
        event_tolerance,
        accumulation_mode,
    };
    config.validate()?;
    Ok(ParsedConfig {
        config,
        defaults: r.defaults,
    })
}

fn resolve_unit(r: &mut Resolver, u: &UnitDoc, at: &str, ambient: f64) -> Result<UnitConfig> {
    let empty = ThermalDoc::default();
    let th = u.thermal.as_ref().unwrap_or(&empty);
    let thermal = match (&th.geometry, &th.layers) {
        (Some(_), Some(_)) => {
            return Err(CliError::at(format!("{at}.thermal"), "give either geometry or layers, not both"))
        }
        (_, Some(layers)) => {
            let mut out = Vec::with_capacity(layers.len());
            for (k, l) in layers.iter().enumerate() {
                let lat = format!("{at}.thermal.layers[{k}]");
                let kind: LayerKind = l
                    .kind
                    .parse()
                    .map_err(|e: pyrohv::Error| CliError::at(format!("{lat}.kind"), e.to_string()))?;
                out.push(ThermalLayerSpec::new(
                    kind,
                    r.req(&l.resistance, &format!("{lat}.resistance"), Dimension::ThermalResistance)?,
                    r.req(&l.capacitance, &format!("{lat}.capacitance"), Dimension::ThermalCapacitance)?,
                ));
            }
            ThermalUnitSpec {
                layers: out,
                ambient_temp: ambient,
                ambient_loss_resistance: r.opt(
                    &th.ambient_loss_resistance,
                    &format!("{at}.thermal.ambient_loss_resistance"),
                    Dimension::ThermalResistance,
                    f64::INFINITY,
                )?,
            }
        }
        (geometry, None) => {
            if geometry.is_none() {
                r.note(&format!("{at}.thermal.geometry"), "default unit geometry");
            }
            let g = resolve_geometry(r, geometry.as_ref(), &format!("{at}.thermal.geometry"))?;
            let mut spec = g.to_unit_spec(ambient);
            if let Some(q) = &th.ambient_loss_resistance {
                spec.ambient_loss_resistance =
                    r.req(q, &format!("{at}.thermal.ambient_loss_resistance"), Dimension::ThermalResistance)?;
            }
            spec
        }
    };

    let c = u.crystal.clone().unwrap_or_default();
    let cat = format!("{at}.crystal");
    let base = if c.electrode_area.is_some() && c.thickness.is_some() {
        CrystalSpec::default()
    } else {
        let edge = r.opt(&c.edge, &format!("{cat}.edge"), Dimension::Length, 5e-3)?;
        CrystalSpec::lithium_niobate_cube(edge)
    };
    let mut crystal = CrystalSpec::from_geometry(
        r.opt(&c.pyro_coeff, &format!("{cat}.pyro_coeff"), Dimension::PyroCoefficient, base.pyro_coeff)?,
        match &c.electrode_area {
            Some(q) => r.req(q, &format!("{cat}.electrode_area"), Dimension::Area)?,
            None => base.electrode_area,
        },
        match &c.thickness {
            Some(q) => r.req(q, &format!("{cat}.thickness"), Dimension::Length)?,
            None => base.thickness,
        },
        r.opt(&c.rel_permittivity, &format!("{cat}.rel_permittivity"), Dimension::Dimensionless, base.rel_permittivity)?,
    );
    if let Some(q) = &c.capacitance {
        crystal.self_capacitance = r.req(q, &format!("{cat}.capacitance"), Dimension::Capacitance)?;
    }

    let e = &u.electrical;
    let eat = format!("{at}.electrical");
    let load_kind = match e.load.as_deref() {
        None => {
            let k = if u.actuator.is_some() { LoadKind::Actuator } else { LoadKind::Capacitor };
            r.note(&format!("{eat}.load"), k.as_str());
            k
        }
        Some("capacitor") => LoadKind::Capacitor,
        Some("actuator") => LoadKind::Actuator,
        Some(other) => {
            return Err(CliError::at(
                format!("{eat}.load"),
                format!("unknown load `{other}`, expected capacitor or actuator"),
            ))
        }
    };

    let sw = u.switch.clone().unwrap_or_default();
    let sat = format!("{at}.switch");
    let has_geometry = sw.gap.is_some() || sw.actuation_area.is_some() || sw.spring_constant.is_some();
    let default_geometry = SwitchSpec::default().geometry.unwrap();
    let geometry = if has_geometry || sw.pull_in_voltage.is_none() {
        Some(SwitchGeometry {
            gap: r.opt(&sw.gap, &format!("{sat}.gap"), Dimension::Length, default_geometry.gap)?,
            actuation_area: r.opt(&sw.actuation_area, &format!("{sat}.actuation_area"), Dimension::Area, default_geometry.actuation_area)?,
            spring_constant: r.opt(&sw.spring_constant, &format!("{sat}.spring_constant"), Dimension::Stiffness, default_geometry.spring_constant)?,
        })
    } else {
        None
    };
    let switch = SwitchSpec {
        pull_in_voltage: sw
            .pull_in_voltage
            .as_ref()
            .map(|q| r.req(q, &format!("{sat}.pull_in_voltage"), Dimension::Voltage))
            .transpose()?,
        release_voltage: sw
            .release_voltage
            .as_ref()
            .map(|q| r.req(q, &format!("{sat}.release_voltage"), Dimension::Voltage))
            .transpose()?,
        contact_resistance: r.opt(&sw.contact_resistance, &format!("{sat}.contact_resistance"), Dimension::Resistance, DEFAULT_CONTACT_RESISTANCE)?,
        geometry,
    };

    let electrical = ElectricalNetworkSpec {
        crystal,
        store_capacitance: r.req(&e.store_capacitance, &format!("{eat}.store_capacitance"), Dimension::Capacitance)?,
        parasitic_capacitance: r.opt(&e.parasitic_capacitance, &format!("{eat}.parasitic_capacitance"), Dimension::Capacitance, 0.0)?,
        leak_resistance: r.opt(&e.leak_resistance, &format!("{eat}.leak_resistance"), Dimension::Resistance, DEFAULT_LEAK_RESISTANCE)?,
        switch,
        load_kind,
    };

    let actuator = match &u.actuator {
        Some(a) => Some(ActuatorSpec {
            quad_coeff: r.req(&a.quad_coeff, &format!("{at}.actuator.quad_coeff"), Dimension::ActuatorCoefficient)?,
            capacitance: r.opt(&a.capacitance, &format!("{at}.actuator.capacitance"), Dimension::Capacitance, electrical.store_capacitance)?,
        }),
        None => None,
    };
    Ok(UnitConfig {
        thermal,
        electrical,
        actuator,
    })
}

fn resolve_geometry(r: &mut Resolver, g: Option<&GeometryDoc>, at: &str) -> Result<UnitGeometry> {
    let mut out = UnitGeometry::default();
    let Some(g) = g else { return Ok(out) };
    let fields: [(&Option<Q>, &mut f64, &str, Dimension); 16] = [
        (&g.contact_area, &mut out.contact_area, "contact_area", Dimension::Area),
        (&g.wall_thickness, &mut out.wall_thickness, "wall_thickness", Dimension::Length),
        (&g.wall_conductivity, &mut out.wall_conductivity, "wall_conductivity", Dimension::Conductivity),
        (&g.wetted_area, &mut out.wetted_area, "wetted_area", Dimension::Area),
        (&g.film_coefficient, &mut out.film_coefficient, "film_coefficient", Dimension::FilmCoefficient),
        (&g.holder_volume, &mut out.holder_volume, "holder_volume", Dimension::Volume),
        (&g.holder_volumetric_heat_capacity, &mut out.holder_volumetric_heat_capacity, "holder_volumetric_heat_capacity", Dimension::VolumetricHeatCapacity),
        (&g.adhesive_thickness, &mut out.adhesive_thickness, "adhesive_thickness", Dimension::Length),
        (&g.adhesive_conductivity, &mut out.adhesive_conductivity, "adhesive_conductivity", Dimension::Conductivity),
        (&g.adhesive_volumetric_heat_capacity, &mut out.adhesive_volumetric_heat_capacity, "adhesive_volumetric_heat_capacity", Dimension::VolumetricHeatCapacity),
        (&g.crystal_edge, &mut out.crystal_edge, "crystal_edge", Dimension::Length),
        (&g.crystal_conductivity, &mut out.crystal_conductivity, "crystal_conductivity", Dimension::Conductivity),
        (&g.crystal_density, &mut out.crystal_density, "crystal_density", Dimension::Density),
        (&g.crystal_specific_heat, &mut out.crystal_specific_heat, "crystal_specific_heat", Dimension::SpecificHeat),
        (&g.exposed_area, &mut out.exposed_area, "exposed_area", Dimension::Area),
        (&g.air_film_coefficient, &mut out.air_film_coefficient, "air_film_coefficient", Dimension::FilmCoefficient),
    ];
    for (q, slot, name, dim) in fields {
        if let Some(q) = q {
            *slot = r.req(q, &format!("{at}.{name}"), dim)?;
        }
    }
    if let Some(b) = g.lump_adhesive {
        out.lump_adhesive = b;
    }
    Ok(out)
}

/// Fully explicit document for `config`, in SI with unit suffixes. Parsing it
/// back gives an identical config.
pub fn to_document(config: &ScenarioConfig) -> ConfigDocument {
    let si = Quantity::si;
    let s = &config.fluid.schedule;
    ConfigDocument {
        sim: SimDoc {
            dt: si(config.dt, Dimension::Time),
            t_end: si(config.t_end, Dimension::Time),
            event_tolerance: Some(si(config.event_tolerance, Dimension::Voltage)),
            ambient: Some(si(config.ambient_temp, Dimension::Temperature)),
            accumulation_mode: Some(config.accumulation_mode.as_str().to_string()),
        },
        fluid: FluidDoc {
            schedule: ScheduleDoc {
                waveform: Some(s.waveform.as_str().to_string()),
                hot: si(s.hot_temp, Dimension::Temperature),
                cold: Some(si(s.cold_temp, Dimension::Temperature)),
                period: Some(si(s.period, Dimension::Time)),
                phase: Some(si(s.phase, Dimension::Time)),
            },
            heat_capacity_rate: Some(si(config.fluid.heat_capacity_rate, Dimension::HeatCapacityRate)),
            transit_delay_per_unit: Some(si(config.fluid.transit_delay_per_unit, Dimension::Time)),
            unit_count: None,
        },
        units: config.units.iter().map(unit_document).collect(),
    }
}

fn unit_document(u: &UnitConfig) -> UnitDoc {
    let si = Quantity::si;
    let net = &u.electrical;
    let c = &net.crystal;
    let sw = &net.switch;
    UnitDoc {
        thermal: Some(ThermalDoc {
            geometry: None,
            layers: Some(
                u.thermal
                    .layers
                    .iter()
                    .map(|l| LayerDoc {
                        kind: l.kind.as_str().to_string(),
                        resistance: si(l.thermal_resistance, Dimension::ThermalResistance),
                        capacitance: si(l.thermal_capacitance, Dimension::ThermalCapacitance),
                    })
                    .collect(),
            ),
            ambient_loss_resistance: Some(si(u.thermal.ambient_loss_resistance, Dimension::ThermalResistance)),
        }),
        crystal: Some(CrystalDoc {
            edge: None,
            pyro_coeff: Some(si(c.pyro_coeff, Dimension::PyroCoefficient)),
            electrode_area: Some(si(c.electrode_area, Dimension::Area)),
            thickness: Some(si(c.thickness, Dimension::Length)),
            rel_permittivity: Some(si(c.rel_permittivity, Dimension::Dimensionless)),
            capacitance: Some(si(c.self_capacitance, Dimension::Capacitance)),
        }),
        electrical: ElectricalDoc {
            store_capacitance: si(net.store_capacitance, Dimension::Capacitance),
            parasitic_capacitance: Some(si(net.parasitic_capacitance, Dimension::Capacitance)),
            leak_resistance: Some(si(net.leak_resistance, Dimension::Resistance)),
            load: Some(net.load_kind.as_str().to_string()),
        },
        switch: Some(SwitchDoc {
            pull_in_voltage: sw.pull_in_voltage.map(|v| si(v, Dimension::Voltage)),
            release_voltage: sw.release_voltage.map(|v| si(v, Dimension::Voltage)),
            contact_resistance: Some(si(sw.contact_resistance, Dimension::Resistance)),
            gap: sw.geometry.as_ref().map(|g| si(g.gap, Dimension::Length)),
            actuation_area: sw.geometry.as_ref().map(|g| si(g.actuation_area, Dimension::Area)),
            spring_constant: sw.geometry.as_ref().map(|g| si(g.spring_constant, Dimension::Stiffness)),
        }),
        actuator: u.actuator.as_ref().map(|a| ActuatorDoc {
            quad_coeff: si(a.quad_coeff, Dimension::ActuatorCoefficient),
            capacitance: Some(si(a.capacitance, Dimension::Capacitance)),
        }),
    }
}

pub fn to_json(config: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(&to_document(config)).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "sim": {"dt": "10 ms", "t_end": "480 s"},
        "fluid": {"schedule": {"hot": "90 C", "cold": "30 C"}},
        "units": [{"electrical": {"store_capacitance": "2 pF"}}]
    }"#;

    #[test]
    fn minimal_config_converts_units() {
        let p = parse_config_str(MINIMAL).unwrap();
        let s = &p.config.fluid.schedule;
        assert_eq!(s.hot_temp, 363.15);
        assert_eq!(s.cold_temp, 303.15);
        assert_eq!(p.config.dt, 0.01);
        assert_eq!(p.config.units[0].electrical.store_capacitance, 2e-12);
        assert_eq!(p.config, ScenarioConfig::reference(1, 2e-12));
    }

    #[test]
    fn defaults_are_reported() {
        let p = parse_config_str(MINIMAL).unwrap();
        assert!(p
            .defaults
            .iter()
            .any(|d| d == "units[0].electrical.parasitic_capacitance = 0 F"));
        assert!(p.defaults.iter().any(|d| d.starts_with("sim.ambient = ")));
    }

    #[test]
    fn negative_dt_names_field() {
        let text = MINIMAL.replace("\"10 ms\"", "-0.01");
        let err = parse_config_str(&text).unwrap_err();
        assert_eq!(err.field_path().as_deref(), Some("sim.dt"));
    }

    #[test]
    fn unknown_key_is_rejected_with_path() {
        let text = MINIMAL.replace("\"store_capacitance\"", "\"store_cap\": 1, \"store_capacitance\"");
        let err = parse_config_str(&text).unwrap_err();
        assert_eq!(err.field_path().as_deref(), Some("units[0].electrical.store_cap"));
        assert!(err.to_string().contains("store_cap"));
    }

    #[test]
    fn bad_suffix_names_field() {
        let text = MINIMAL.replace("\"2 pF\"", "\"2 pV\"");
        let err = parse_config_str(&text).unwrap_err();
        assert_eq!(err.field_path().as_deref(), Some("units[0].electrical.store_capacitance"));
    }

    #[test]
    fn unit_level_invariant_names_unit() {
        let text = MINIMAL.replace("\"2 pF\"}", "\"2 pF\", \"leak_resistance\": \"1 GOhm\"}");
        let err = parse_config_str(&text).unwrap_err();
        assert_eq!(err.field_path().as_deref(), Some("units[0]"));
    }

    #[test]
    fn unit_count_replicates() {
        let text = MINIMAL.replace("\"cold\": \"30 C\"}", "\"cold\": \"30 C\"}, \"unit_count\": 3");
        let p = parse_config_str(&text).unwrap();
        assert_eq!(p.config.units.len(), 3);
        assert_eq!(p.config.fluid.unit_count, 3);
    }

    #[test]
    fn full_document_round_trips() {
        let mut c = ScenarioConfig::reference(2, 10e-12);
        c.units[1].electrical.switch = SwitchSpec::with_pull_in(900.0);
        c.units[1].electrical.leak_resistance = 5.671234567e11;
        c.units[0].actuator = Some(ActuatorSpec {
            quad_coeff: 2.5e-6 / (1033.0 * 1033.0),
            capacitance: 10e-12,
        });
        c.units[0].electrical.load_kind = LoadKind::Actuator;
        let p = parse_config_str(&to_json(&c)).unwrap();
        assert_eq!(p.config, c);
        assert!(p.defaults.is_empty(), "{:?}", p.defaults);
    }
}
