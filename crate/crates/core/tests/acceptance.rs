//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use pyrohv::calibrate::{
    calibrate_actuator, fit_linear, fit_saturating_exponential, infer_leak_resistance,
    saturating_exponential, DataSet,
};
use pyrohv::electro::{
    actuator_displacement, charge_share, electrical_step, stored_energy, ActuatorSpec,
    ElectricalNetworkSpec, ElectricalState, SwitchSpec,
};
use pyrohv::engine::{run_scenario, sweep, EventKind, ScenarioConfig, SweepTarget};
use pyrohv::fluid::InletSchedule;
use pyrohv::thermal::{
    build_unit_network, peak_crystal_dtdt, thermal_step, LayerKind, ThermalLayerSpec,
    ThermalUnitSpec, UnitGeometry,
};
use pyrohv::units::celsius_to_kelvin;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn energy_identity() -> Outcome {
    let e2 = stored_energy(2e-12, 2470.0);
    let e47 = stored_energy(47e-12, 861.0);
    check(
        rel(e2, 6.10e-6) <= 0.01 && rel(e47, 17.46e-6) <= 0.01,
        format!("E(2 pF, 2470 V) = {:.4} uJ, E(47 pF, 861 V) = {:.4} uJ", e2 * 1e6, e47 * 1e6),
    )
}

fn leaky_integrator() -> Outcome {
    let net = ElectricalNetworkSpec::with_store(2e-12);
    let i = 4.15e-9;
    let r = net.leak_resistance;
    let c = net.pyro_capacitance();
    let tau = r * c;
    let dt = tau / 1000.0;
    let mut s = ElectricalState::default();
    let mut worst: f64 = 0.0;
    let mut step = 0;
    for k in [1usize, 2, 5] {
        while step < 1000 * k {
            s = electrical_step(&s, &net, i, dt).map_err(|e| e.to_string())?;
            step += 1;
        }
        let t = step as f64 * dt;
        let exact = i * r * (1.0 - (-t / tau).exp());
        worst = worst.max(rel(s.pyro_voltage, exact));
    }
    check(worst <= 1e-6, format!("max relative error {worst:.2e} at tau, 2tau, 5tau"))
}

fn thermal_single_rc() -> Outcome {
    let (r, c, t0, tf) = (10.0, 2.0, 293.15, 353.15);
    let spec = ThermalUnitSpec {
        layers: vec![ThermalLayerSpec::new(LayerKind::Crystal, r, c)],
        ambient_temp: t0,
        ambient_loss_resistance: f64::INFINITY,
    };
    let tau = r * c;
    let dt = tau / 1000.0;
    let mut state = build_unit_network(&spec, t0).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for n in 1..=5000 {
        state = thermal_step(&state, &spec, tf, dt).map_err(|e| e.to_string())?;
        let t = n as f64 * dt;
        let exact = tf + (t0 - tf) * (-t / tau).exp();
        worst = worst.max(rel(state.crystal_temp(), exact));
    }
    check(worst <= 1e-6, format!("max relative error {worst:.2e} over 5 tau"))
}

fn dtdt_linearity() -> Outcome {
    let ambient = celsius_to_kelvin(30.0);
    let spec = UnitGeometry::default().to_unit_spec(ambient);
    let mut points = Vec::new();
    for c in (30..=90).step_by(10) {
        let peak = peak_crystal_dtdt(&spec, celsius_to_kelvin(c as f64), ambient, 240.0)
            .map_err(|e| e.to_string())?;
        points.push((c as f64, peak));
    }
    let fit = fit_linear(&DataSet::new(points.clone())).map_err(|e| e.to_string())?;
    check(
        fit.r_squared >= 0.999,
        format!(
            "R^2 = {:.12}, slope {:.5} K/s per K, peak at 90 C {:.4} K/s",
            fit.r_squared,
            fit.param("slope").unwrap(),
            points.last().unwrap().1
        ),
    )
}

fn charge_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let mut net = ElectricalNetworkSpec::with_store(10f64.powf(rng.gen_range(-13.0..-9.0)));
        net.parasitic_capacitance = 10f64.powf(rng.gen_range(-14.0..-11.0));
        let vp = rng.gen_range(-5000.0..5000.0);
        let vl = rng.gen_range(-5000.0..5000.0);
        let cp = net.pyro_capacitance();
        let cs = net.store_capacitance;
        let v = charge_share(vp, vl, &net).map_err(|e| e.to_string())?;
        let before = cp * vp + cs * vl;
        let after = (cp + cs) * v;
        let gross = (cp * vp).abs() + (cs * vl).abs();
        worst = worst.max((after - before).abs() / gross);
    }
    check(worst <= 1e-12, format!("worst charge mismatch {worst:.2e} of gross charge over 10^4 cases"))
}

fn fluid_conservation() -> Outcome {
    let mut c = ScenarioConfig::reference(3, 2e-12);
    c.fluid.transit_delay_per_unit = 0.5;
    c.t_end = 10.0 * c.fluid.schedule.period;
    let trace = run_scenario(&c).map_err(|e| e.to_string())?;
    let audit = trace.energy_audit().map_err(|e| e.to_string())?;
    let m = audit.relative_mismatch();
    check(
        m <= 1e-3,
        format!(
            "extracted {:.3} J vs enthalpy drop {:.3} J, mismatch {:.2e} of {:.1} J throughput",
            audit.extracted_joules, audit.enthalpy_drop_joules, m, audit.gross_joules
        ),
    )
}

fn event_localization() -> Outcome {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for store in [2e-12, 47e-12] {
        let c = ScenarioConfig::reference(1, store);
        let pull_in = c.units[0].electrical.switch.thresholds().unwrap().pull_in;
        let trace = run_scenario(&c).map_err(|e| e.to_string())?;
        for e in trace.events.iter().filter(|e| e.kind == EventKind::Closure) {
            count += 1;
            worst = worst.max((e.pyro_voltage.abs() - pull_in).abs());
        }
        if worst > c.event_tolerance {
            break;
        }
    }
    check(
        count > 0 && worst <= 0.01,
        format!("{count} closures, worst |V - V_PI| = {worst:.2e} V"),
    )
}

fn convergence_order() -> Outcome {
    let energy = |dt: f64| -> Result<f64, String> {
        let mut c = ScenarioConfig::reference(1, 2e-12);
        c.fluid.schedule = InletSchedule::constant(celsius_to_kelvin(90.0));
        c.units[0].electrical.switch = SwitchSpec::disabled();
        c.t_end = 20.0;
        c.dt = dt;
        let trace = run_scenario(&c).map_err(|e| e.to_string())?;
        let v = trace.last().units[0].pyro_voltage;
        Ok(stored_energy(c.units[0].electrical.pyro_capacitance(), v))
    };
    let e = [energy(0.04)?, energy(0.02)?, energy(0.01)?];
    let order = ((e[0] - e[1]).abs() / (e[1] - e[2]).abs()).log2();
    check(
        order >= 3.5,
        format!("observed order {order:.3} (final crystal-node energy {:.6} uJ)", e[2] * 1e6),
    )
}

fn calibration_recovery() -> Outcome {
    let xs: Vec<f64> = (30..=90).step_by(10).map(f64::from).collect();
    let affine = DataSet::new(xs.iter().map(|&x| (x, 0.2 * x - 6.0)).collect());
    let lin = fit_linear(&affine).map_err(|e| e.to_string())?;
    let lin_err = rel(lin.param("slope").unwrap(), 0.2).max(rel(lin.param("intercept").unwrap(), -6.0));

    let truth = [2500.0, 25.0, 25.0];
    let model = |x: f64| saturating_exponential(x, truth[0], truth[1], truth[2]);
    let clean = DataSet::new(xs.iter().map(|&x| (x, model(x))).collect());
    let fit = fit_saturating_exponential(&clean).map_err(|e| e.to_string())?;
    let exp_err = ["amplitude", "rate", "offset"]
        .iter()
        .zip(truth)
        .map(|(n, t)| rel(fit.param(n).unwrap(), t))
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let noisy = DataSet::new(
        (30..=90)
            .map(|x| {
                let x = f64::from(x);
                (x, model(x) * (1.0 + noise.sample(&mut rng)))
            })
            .collect(),
    );
    let noisy_fit = fit_saturating_exponential(&noisy).map_err(|e| e.to_string())?;
    let amp_err = rel(noisy_fit.param("amplitude").unwrap(), truth[0]);
    check(
        lin_err <= 1e-12 && exp_err <= 1e-6 && amp_err <= 0.02,
        format!("linear {lin_err:.1e}, exponential {exp_err:.1e}, noisy amplitude {amp_err:.2e}"),
    )
}

fn calibrated_reproduction() -> Outcome {
    let mut c = ScenarioConfig::reference(1, 2e-12);
    c.t_end = c.fluid.schedule.period;
    let hot = c.fluid.schedule.hot_temp;
    let dtdt = peak_crystal_dtdt(&c.units[0].thermal, hot, c.ambient_temp, c.fluid.schedule.period / 2.0)
        .map_err(|e| e.to_string())?;
    let r = infer_leak_resistance(2470.0, &c.units[0].electrical.crystal, dtdt)
        .map_err(|e| e.to_string())?;
    c.units[0].electrical.leak_resistance = r;
    let target: SweepTarget = "units.electrical.store_capacitance".parse().unwrap();
    let rows = sweep(&c, target, &[2e-12, 10e-12, 47e-12]).map_err(|e| e.to_string())?;
    let v: Vec<f64> = rows.iter().map(|r| r.max_load_voltage).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.max_load_energy).collect();
    check(
        v[0] > v[1] && v[1] > v[2] && rel(v[0], 2470.0) <= 0.10 && e[2] > e[0],
        format!(
            "R_leak {r:.4e} Ohm; V_max {:.1}/{:.1}/{:.1} V; E_max {:.3}/{:.3}/{:.3} uJ",
            v[0],
            v[1],
            v[2],
            e[0] * 1e6,
            e[1] * 1e6,
            e[2] * 1e6
        ),
    )
}

fn actuator() -> Outcome {
    let k = calibrate_actuator(2.5e-6, 1033.0).map_err(|e| e.to_string())?;
    let act = ActuatorSpec {
        quad_coeff: k,
        capacitance: 1e-12,
    };
    let x = actuator_displacement(&act, 1033.0);
    let x2 = actuator_displacement(&act, 2066.0);
    let err = rel(x, 2.5e-6);
    check(
        err <= 2.0 * f64::EPSILON && rel(x2 / x, 4.0) <= 2.0 * f64::EPSILON,
        format!("k = {k:.4e} m/V^2, x(1033 V) = {:.6} um, x(2066 V)/x(1033 V) = {}", x * 1e6, x2 / x),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 energy identity", energy_identity),
        ("2 leaky integrator oracle", leaky_integrator),
        ("3 thermal single RC oracle", thermal_single_rc),
        ("4 dT/dt linear in inlet temperature", dtdt_linearity),
        ("5 charge conservation", charge_conservation),
        ("6 fluid energy audit", fluid_conservation),
        ("7 event localization", event_localization),
        ("8 integrator order", convergence_order),
        ("9 calibration recovery", calibration_recovery),
        ("10 calibrated capacitor sweep", calibrated_reproduction),
        ("11 actuator calibration", actuator),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<38} {detail} [{secs:.2} s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<38} {detail} [{secs:.2} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
