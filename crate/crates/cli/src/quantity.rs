//! Scalars with optional unit suffixes, e.g. `"90 C"`, `"2 pF"`, `"500 um"`.
//! Bare numbers are taken as SI (kelvin for temperatures).

use pyrohv::units::{format_number, Dimension, ZERO_CELSIUS};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    /// SI value with the canonical suffix, parsing back to exactly `value`.
    pub fn si(value: f64, dim: Dimension) -> Self {
        match canonical_unit(dim) {
            "" => Quantity::Number(value),
            unit => Quantity::Text(format!("{} {unit}", format_number(value))),
        }
    }

    pub fn to_si(&self, dim: Dimension) -> Result<f64, String> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => parse_quantity(s, dim),
        }
    }
}

fn canonical_unit(dim: Dimension) -> &'static str {
    match dim {
        Dimension::Time => "s",
        Dimension::Temperature => "K",
        Dimension::Capacitance => "F",
        Dimension::Resistance => "Ohm",
        Dimension::Voltage => "V",
        Dimension::Length => "m",
        Dimension::Area => "m2",
        Dimension::Volume => "m3",
        Dimension::HeatCapacityRate => "W/K",
        Dimension::PyroCoefficient => "C/m2K",
        Dimension::ThermalResistance => "K/W",
        Dimension::ThermalCapacitance => "J/K",
        Dimension::FilmCoefficient => "W/m2K",
        Dimension::Conductivity => "W/mK",
        Dimension::Density => "kg/m3",
        Dimension::SpecificHeat => "J/kgK",
        Dimension::VolumetricHeatCapacity => "J/m3K",
        Dimension::Stiffness => "N/m",
        Dimension::ActuatorCoefficient => "m/V2",
        Dimension::Dimensionless => "",
    }
}

/// Decimal exponent of an SI prefix.
fn prefix_exponent(p: &str) -> Option<i32> {
    Some(match p {
        "" => 0,
        "T" => 12,
        "G" => 9,
        "M" => 6,
        "k" => 3,
        "c" => -2,
        "m" => -3,
        "u" | "µ" | "μ" => -6,
        "n" => -9,
        "p" => -12,
        "f" => -15,
        _ => return None,
    })
}

/// `value · 10^exp` with a single rounding: powers of ten up to 1e22 are exact,
/// so dividing keeps "500 um" equal to the literal 500e-6.
fn scale(value: f64, exp: i32) -> f64 {
    let p = 10f64.powi(exp.abs());
    if exp >= 0 {
        value * p
    } else {
        value / p
    }
}

fn prefixed(unit: &str, bases: &[&str], allowed: &[&str]) -> Option<i32> {
    for base in bases {
        if let Some(p) = unit.strip_suffix(base) {
            if allowed.contains(&p) {
                return prefix_exponent(p);
            }
        }
    }
    None
}

const ALL_PREFIXES: &[&str] = &["", "T", "G", "M", "k", "m", "u", "µ", "μ", "n", "p", "f"];

/// Convert `value` in `unit` to SI. Temperatures need an offset so the full
/// conversion happens here rather than via a scale factor.
fn convert(value: f64, unit: &str, dim: Dimension) -> Option<f64> {
    let scaled = |e: Option<i32>| e.map(|e| scale(value, e));
    match dim {
        Dimension::Temperature => match unit {
            "K" => Some(value),
            "C" | "°C" | "degC" => Some(value + ZERO_CELSIUS),
            _ => None,
        },
        Dimension::Time => match unit {
            "min" => Some(value * 60.0),
            "h" => Some(value * 3600.0),
            _ => scaled(prefixed(unit, &["s"], &["", "m", "u", "µ", "μ", "n"])),
        },
        Dimension::Capacitance => scaled(prefixed(unit, &["F"], &["", "m", "u", "µ", "μ", "n", "p", "f"])),
        Dimension::Resistance => scaled(prefixed(unit, &["Ohm", "ohm", "Ω"], ALL_PREFIXES)),
        Dimension::Voltage => scaled(prefixed(unit, &["V"], &["", "M", "k", "m", "u", "µ", "μ"])),
        Dimension::Length => scaled(prefixed(unit, &["m"], &["", "m", "u", "µ", "μ", "n"])),
        Dimension::Area => {
            let base = unit.strip_suffix("m2").or_else(|| unit.strip_suffix("m^2"))?;
            let e = match base {
                "" | "c" | "m" | "u" | "µ" | "μ" => prefix_exponent(base)?,
                _ => return None,
            };
            Some(scale(value, 2 * e))
        }
        Dimension::Volume => {
            let base = unit.strip_suffix("m3").or_else(|| unit.strip_suffix("m^3"))?;
            let e = match base {
                "" | "c" | "m" => prefix_exponent(base)?,
                _ => return None,
            };
            Some(scale(value, 3 * e))
        }
        Dimension::PyroCoefficient => match unit {
            "C/m2K" | "C/(m2 K)" | "C/(m2K)" => Some(value),
            "uC/m2K" | "µC/m2K" | "μC/m2K" => Some(scale(value, -6)),
            _ => None,
        },
        Dimension::Dimensionless => None,
        other => (unit == canonical_unit(other)).then_some(value),
    }
}

pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(i, c)| {
            // the number ends at the first character that cannot continue it
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && t[i + 1..].starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map_or(t.len(), |(i, _)| i);
    let (num, unit) = t.split_at(split);
    let (num, unit) = if num.is_empty() && (unit.starts_with("inf") || unit.starts_with("-inf")) {
        let n = if unit.starts_with('-') { 4 } else { 3 };
        unit.split_at(n)
    } else {
        (num, unit)
    };
    let value: f64 = num
        .parse()
        .map_err(|_| format!("`{text}` does not start with a number"))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    convert(value, unit, dim).ok_or_else(|| {
        let hint = canonical_unit(dim);
        if hint.is_empty() {
            format!("`{text}`: this value takes no unit")
        } else {
            format!("`{text}`: unit `{unit}` is not a valid {dim:?} unit (SI form is `{hint}`)")
        }
    })
}
