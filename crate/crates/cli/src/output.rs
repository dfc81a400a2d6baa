//! CSV and summary writers.

use std::fmt::Write;

use pyrohv::engine::{EventKind, SweepRow, Trace};
use pyrohv::units::kelvin_to_celsius;

/// `printf("%.9g")`: nine significant digits, trailing zeros dropped,
/// exponent form below 1e-4 or from 1e9 up.
pub fn fmt_g9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn trace_header(units: usize) -> String {
    let mut h = String::from("time_s,inlet_C");
    for i in 0..units {
        for col in ["fluid_C", "crystal_C", "Vpyro_V", "switch", "Vload_V", "E_uJ", "x_um"] {
            let _ = write!(h, ",u{i}_{col}");
        }
    }
    h
}

pub fn trace_csv(trace: &Trace) -> String {
    let units = trace.rows.first().map_or(0, |r| r.units.len());
    let mut out = trace_header(units);
    out.push('\n');
    for row in &trace.rows {
        out.push_str(&fmt_g9(row.time));
        out.push(',');
        out.push_str(&fmt_g9(kelvin_to_celsius(row.inlet_temp)));
        for u in &row.units {
            let _ = write!(
                out,
                ",{},{},{},{},{},{},{}",
                fmt_g9(kelvin_to_celsius(u.fluid_temp)),
                fmt_g9(kelvin_to_celsius(u.crystal_temp)),
                fmt_g9(u.pyro_voltage),
                u8::from(u.switch_closed),
                fmt_g9(u.load_voltage),
                fmt_g9(u.load_energy * 1e6),
                fmt_g9(u.displacement * 1e6),
            );
        }
        out.push('\n');
    }
    out
}

pub fn summary(trace: &Trace, has_actuator: bool) -> String {
    let closures = trace.events.iter().filter(|e| e.kind == EventKind::Closure).count();
    let releases = trace.events.iter().filter(|e| e.kind == EventKind::Release).count();
    let mut s = String::new();
    let _ = writeln!(s, "max_load_voltage_V={}", fmt_g9(trace.max_load_voltage()));
    let _ = writeln!(s, "max_stored_energy_uJ={}", fmt_g9(trace.max_load_energy() * 1e6));
    if has_actuator {
        let _ = writeln!(s, "max_displacement_um={}", fmt_g9(trace.max_displacement() * 1e6));
    }
    let _ = writeln!(s, "switch_closures={closures}");
    let _ = writeln!(s, "switch_releases={releases}");
    let _ = writeln!(s, "rows={}", trace.rows.len());
    if let Ok(audit) = trace.energy_audit() {
        let _ = writeln!(s, "fluid_audit_mismatch={}", fmt_g9(audit.relative_mismatch()));
    }
    s
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("param_value,v_max_V,e_max_uJ\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_g9(r.value),
            fmt_g9(r.max_load_voltage),
            fmt_g9(r.max_load_energy * 1e6)
        );
    }
    out
}
