//! Physical constants and the few unit conversions used at API boundaries.
//! Everything inside the crate is SI with temperatures in kelvin.

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

pub const ZERO_CELSIUS: f64 = 273.15;

pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + ZERO_CELSIUS
}

pub fn kelvin_to_celsius(k: f64) -> f64 {
    k - ZERO_CELSIUS
}

/// Physical dimension of a configurable scalar, used to pick accepted unit
/// suffixes when parsing user input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Time,
    Temperature,
    Capacitance,
    Resistance,
    Voltage,
    Length,
    Area,
    Volume,
    /// W/K
    HeatCapacityRate,
    /// C/(m²·K)
    PyroCoefficient,
    /// K/W
    ThermalResistance,
    /// J/K
    ThermalCapacitance,
    /// W/(m²·K)
    FilmCoefficient,
    /// W/(m·K)
    Conductivity,
    /// kg/m³
    Density,
    /// J/(kg·K)
    SpecificHeat,
    /// J/(m³·K)
    VolumetricHeatCapacity,
    /// N/m
    Stiffness,
    /// m/V²
    ActuatorCoefficient,
    Dimensionless,
}

/// Shortest representation that parses back to the same `f64`, switching to
/// exponent notation outside `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, -2.5, 1e-12, 6.1e-6, 2470.0, 5.95e11, 1e15, 123456.789, -3.3e-300] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(2e-12), "2e-12");
        assert_eq!(format_number(90.0), "90");
    }
}
