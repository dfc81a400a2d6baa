//! Command-line front end for the `pyrohv` simulator.

pub mod config;
pub mod error;
pub mod output;
pub mod quantity;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pyrohv::calibrate::{calibrate_actuator, fit_linear, fit_saturating_exponential, infer_leak_resistance, DataSet};
use pyrohv::engine::{run_scenario, sweep, SweepTarget};
use pyrohv::fluid::Waveform;
use pyrohv::thermal::peak_crystal_dtdt;
use pyrohv::units::{format_number, Dimension};

pub use config::{parse_config, ParsedConfig};
pub use error::{CliError, Result};
use quantity::parse_quantity;

#[derive(Debug, Parser)]
#[command(name = "pyrohv", version, about = "Simulate fluid-heated pyroelectric high-voltage generators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write trace.csv and summary.txt.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the scenario once per value of a parameter and write sweep.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Parameter path, e.g. units.electrical.store_capacitance or fluid.schedule.hot.
        #[arg(long)]
        param: String,
        /// Comma-separated values, unit suffixes allowed: 2pF,10pF,47pF.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit or calibrate model parameters; prints key=value lines and writes fit.csv.
    Calibrate {
        #[arg(long, value_enum)]
        mode: CalibrationMode,
        /// x,y CSV with a header row (linear and exp modes).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Target plateau voltage (rleak mode).
        #[arg(long)]
        v_max: Option<String>,
        /// Peak crystal dT/dt in K/s (rleak mode); otherwise computed from --config.
        #[arg(long)]
        dtdt: Option<f64>,
        /// Scenario whose first unit and hot inlet temperature set the peak dT/dt (rleak mode).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Measured displacement (actuator mode).
        #[arg(long)]
        displacement: Option<String>,
        /// Voltage at that displacement (actuator mode).
        #[arg(long)]
        voltage: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CalibrationMode {
    Linear,
    Exp,
    Rleak,
    Actuator,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn echo_defaults(parsed: &ParsedConfig) {
    for d in &parsed.defaults {
        eprintln!("default: {d}");
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str, mode: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--mode {mode} requires {flag}")))
}

fn quantity_arg(text: &str, flag: &str, dim: Dimension) -> Result<f64> {
    parse_quantity(text, dim).map_err(|m| CliError::at(flag, m))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out } => {
            let parsed = parse_config(&config)?;
            echo_defaults(&parsed);
            let trace = run_scenario(&parsed.config)?;
            prepare_dir(&out)?;
            write_file(&out.join("trace.csv"), &output::trace_csv(&trace))?;
            let has_actuator = parsed.config.units.iter().any(|u| u.actuator.is_some());
            let summary = output::summary(&trace, has_actuator);
            write_file(&out.join("summary.txt"), &summary)?;
            print!("{summary}");
            Ok(())
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let parsed = parse_config(&config)?;
            echo_defaults(&parsed);
            let target: SweepTarget = param.parse()?;
            let dim = target.param.dimension();
            let values = values
                .iter()
                .map(|v| quantity_arg(v, "--values", dim))
                .collect::<Result<Vec<_>>>()?;
            let rows = sweep(&parsed.config, target, &values)?;
            prepare_dir(&out)?;
            let csv = output::sweep_csv(&rows);
            write_file(&out.join("sweep.csv"), &csv)?;
            print!("{csv}");
            Ok(())
        }
        Command::Calibrate {
            mode,
            data,
            v_max,
            dtdt,
            config,
            displacement,
            voltage,
            out,
        } => {
            let (stdout, csv) = match mode {
                CalibrationMode::Linear | CalibrationMode::Exp => {
                    let path = data.ok_or_else(|| CliError::Usage("--mode linear|exp requires --data".into()))?;
                    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                    let set = DataSet::from_csv(&text)?;
                    let fit = if mode == CalibrationMode::Linear {
                        fit_linear(&set)?
                    } else {
                        fit_saturating_exponential(&set)?
                    };
                    (fit.to_key_values(), fit.to_csv())
                }
                CalibrationMode::Rleak => {
                    let v = quantity_arg(required(&v_max, "--v-max", "rleak")?, "--v-max", Dimension::Voltage)?;
                    let (peak, crystal) = match (dtdt, config) {
                        (Some(d), None) => (d, Default::default()),
                        (None, Some(path)) => {
                            let parsed = parse_config(&path)?;
                            echo_defaults(&parsed);
                            let c = &parsed.config;
                            let s = &c.fluid.schedule;
                            let horizon = match s.waveform {
                                Waveform::Constant => c.t_end,
                                _ => s.period / 2.0,
                            };
                            let unit = &c.units[0];
                            let peak = peak_crystal_dtdt(&unit.thermal, s.hot_temp, c.ambient_temp, horizon)?;
                            (peak, unit.electrical.crystal.clone())
                        }
                        _ => {
                            return Err(CliError::Usage(
                                "--mode rleak requires exactly one of --dtdt or --config".into(),
                            ))
                        }
                    };
                    let r = infer_leak_resistance(v, &crystal, peak)?;
                    let pairs = [("leak_resistance", r), ("dtdt_peak", peak), ("v_max", v)];
                    point_outputs(&pairs)
                }
                CalibrationMode::Actuator => {
                    let x = quantity_arg(
                        required(&displacement, "--displacement", "actuator")?,
                        "--displacement",
                        Dimension::Length,
                    )?;
                    let v = quantity_arg(required(&voltage, "--voltage", "actuator")?, "--voltage", Dimension::Voltage)?;
                    let k = calibrate_actuator(x, v)?;
                    point_outputs(&[("quad_coeff", k), ("displacement", x), ("voltage", v)])
                }
            };
            prepare_dir(&out)?;
            write_file(&out.join("fit.csv"), &csv)?;
            print!("{stdout}");
            Ok(())
        }
    }
}

fn point_outputs(pairs: &[(&str, f64)]) -> (String, String) {
    let mut kv = String::new();
    let mut csv = String::from("name,value\n");
    for (k, v) in pairs {
        kv.push_str(&format!("{k}={}\n", format_number(*v)));
        csv.push_str(&format!("{k},{}\n", format_number(*v)));
    }
    (kv, csv)
}
