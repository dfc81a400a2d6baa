use proptest::prelude::*;

use pyrohv::calibrate::{fit_saturating_exponential, infer_leak_resistance, saturating_exponential, DataSet};
use pyrohv::electro::{AccumulationMode, SwitchSpec};
use pyrohv::engine::{run_scenario, EventKind, ScenarioConfig};
use pyrohv::fluid::{advect_step, FluidChainSpec, FluidState, InletSchedule};
use pyrohv::thermal::{build_unit_network, peak_crystal_dtdt, thermal_step, UnitGeometry};
use pyrohv::units::celsius_to_kelvin;

fn short_reference(store: f64, hot_c: f64, mode: AccumulationMode) -> ScenarioConfig {
    let mut c = ScenarioConfig::reference(1, store);
    c.fluid.schedule.hot_temp = celsius_to_kelvin(hot_c);
    c.fluid.schedule.period = 60.0;
    c.t_end = 120.0;
    c.dt = 0.02;
    c.accumulation_mode = mode;
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn thermal_response_scales_with_drive(alpha in 0.1f64..5.0, drive in 1.0f64..60.0) {
        let ambient = 300.0;
        let spec = UnitGeometry::default().to_unit_spec(ambient);
        let mut a = build_unit_network(&spec, ambient).unwrap();
        let mut b = a.clone();
        for _ in 0..2000 {
            a = thermal_step(&a, &spec, ambient + drive, 0.05).unwrap();
            b = thermal_step(&b, &spec, ambient + alpha * drive, 0.05).unwrap();
            for (ta, tb) in a.node_temps.iter().zip(&b.node_temps) {
                let expect = alpha * (ta - ambient);
                prop_assert!((tb - ambient - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
            }
        }
    }

    #[test]
    fn depletion_is_monotone_along_chain(
        draws in prop::collection::vec(0.0f64..5.0, 1..12),
        rate in 0.5f64..50.0,
        t in 0.0f64..1000.0,
    ) {
        let spec = FluidChainSpec {
            schedule: InletSchedule::square(360.0, 300.0, 100.0),
            heat_capacity_rate: rate,
            unit_count: draws.len(),
            transit_delay_per_unit: 0.0,
        };
        let state = advect_step(&FluidState::new(&spec, t), &spec, &draws, t).unwrap();
        prop_assert!(state.per_unit_temps.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn gated_load_is_nondecreasing(store_pf in 1.0f64..60.0, hot_c in 60.0f64..95.0) {
        let c = short_reference(store_pf * 1e-12, hot_c, AccumulationMode::UnipolarGated);
        let trace = run_scenario(&c).unwrap();
        let mut prev = 0.0f64;
        for row in &trace.rows {
            let v = row.units[0].load_voltage.abs();
            prop_assert!(v >= prev - 1e-9, "fell from {} to {} at {}", prev, v, row.time);
            prev = prev.max(v);
        }
    }

    #[test]
    fn switch_never_chatters(store_pf in 1.0f64..60.0, hot_c in 60.0f64..95.0) {
        let c = short_reference(store_pf * 1e-12, hot_c, AccumulationMode::Bipolar);
        let th = c.units[0].electrical.switch.thresholds().unwrap();
        let trace = run_scenario(&c).unwrap();
        let mut closed = false;
        for e in &trace.events {
            match e.kind {
                EventKind::Closure => {
                    prop_assert!(!closed);
                    closed = true;
                }
                EventKind::Release => {
                    prop_assert!(closed);
                    prop_assert!(e.pyro_voltage.abs() < th.release + c.event_tolerance);
                    closed = false;
                }
                _ => {}
            }
        }
    }

    #[test]
    fn exponential_fit_reproduces_its_forward_model(
        a in 100.0f64..5000.0, b in 5.0f64..60.0, x0 in 0.0f64..29.0,
    ) {
        let data = DataSet::new((30..=90).step_by(10).map(|x| {
            let x = f64::from(x);
            (x, saturating_exponential(x, a, b, x0))
        }).collect());
        let fit = fit_saturating_exponential(&data).unwrap();
        prop_assert!(fit.residual_rms <= 1e-10 * a);
    }
}

#[test]
fn hot_temperature_sweep_is_nondecreasing() {
    let mut prev = 0.0;
    for hot_c in (30..=90).step_by(10) {
        let c = short_reference(2e-12, f64::from(hot_c), AccumulationMode::UnipolarGated);
        let v = run_scenario(&c).unwrap().max_load_voltage();
        assert!(v >= prev, "{hot_c} C: {v} < {prev}");
        prev = v;
    }
}

#[test]
fn inferred_leak_resistance_closes_the_loop() {
    let mut c = ScenarioConfig::reference(1, 2e-12);
    let hot = celsius_to_kelvin(90.0);
    c.fluid.schedule = InletSchedule::constant(hot);
    c.units[0].electrical.switch = SwitchSpec::disabled();
    c.t_end = 60.0;
    let dtdt = peak_crystal_dtdt(&c.units[0].thermal, hot, c.ambient_temp, 60.0).unwrap();
    let r = infer_leak_resistance(2470.0, &c.units[0].electrical.crystal, dtdt).unwrap();
    c.units[0].electrical.leak_resistance = r;
    let trace = run_scenario(&c).unwrap();
    let peak = trace
        .rows
        .iter()
        .map(|row| row.units[0].pyro_voltage)
        .fold(0.0, f64::max);
    assert!((peak / 2470.0 - 1.0).abs() <= 0.05, "peak {peak} V");
}
