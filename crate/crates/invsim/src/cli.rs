//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::airframe::{Airframe, AirframeParams, Guards};
use crate::atmosphere::{self, AtmosphereSample, R_AIR};
use crate::error::{Error, Result};
use crate::forward::{round_trip_with, Hold};
use crate::output::{emit_plots, format_sig9, load_controls, save_controls};
use crate::solver::{run_tables, ControlSeries, RunSummary};
use crate::trajectory::{load_sampled, preprocess, KinematicTables, ManeuverInput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

fn long_version() -> &'static str {
    concat!(
        env!("CARGO_PKG_VERSION"),
        "\npackage: ",
        env!("CARGO_PKG_NAME"),
        "\ndescription: ",
        env!("CARGO_PKG_DESCRIPTION"),
    )
}

#[derive(Debug, Parser)]
#[command(name = "invsim", version, long_version = long_version(), about = "Inverse simulation of fixed-wing aircraft maneuvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute thrust and control deflections for a maneuver.
    Run(RunArgs),
    /// Replay a controls file through the forward simulator.
    Verify(VerifyArgs),
    /// Print standard-atmosphere properties as CSV.
    Atmosphere(AtmosphereArgs),
    /// Render SVG figures from a controls file.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct ManeuverArgs {
    /// Airframe parameter file (JSON); the bundled Mirage III set when omitted.
    #[arg(long)]
    airframe: Option<PathBuf>,
    /// Built-in maneuver name.
    #[arg(long, conflicts_with = "trajectory", required_unless_present = "trajectory")]
    maneuver: Option<String>,
    /// Sampled trajectory CSV with columns t,x_g,y_g,z_g,phi_rad.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Integration step, s.
    #[arg(long, env = "INVSIM_DT", default_value_t = 0.001)]
    dt: f64,
    /// Minimum airspeed guard, m/s.
    #[arg(long)]
    v_min: Option<f64>,
    /// Closest admissible approach of angles to +-90 deg, rad.
    #[arg(long)]
    angle_guard: Option<f64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    maneuver: ManeuverArgs,
    /// Controls CSV to write.
    #[arg(long, default_value = "controls.csv")]
    out: PathBuf,
    /// Directory for SVG figures.
    #[arg(long)]
    plots: Option<PathBuf>,
    /// Write the summary as JSON to this path as well.
    #[arg(long)]
    summary_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    maneuver: ManeuverArgs,
    /// Controls CSV produced by `run`.
    #[arg(long)]
    controls: PathBuf,
    /// Report JSON to write.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Hold controls constant between stations instead of interpolating.
    #[arg(long)]
    zoh: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct AtmosphereArgs {
    /// Geometric altitude, m.
    #[arg(long)]
    altitude: Option<f64>,
    /// Altitude sweep: start, end and step in m.
    #[arg(long, num_args = 3, value_names = ["H0", "H1", "STEP"])]
    table: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[command(flatten)]
    maneuver: ManeuverArgs,
    /// Controls CSV produced by `run`.
    #[arg(long)]
    controls: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "plots")]
    dir: PathBuf,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Atmosphere(a) => cmd_atmosphere(a, &mut out),
        Command::Plot(a) => cmd_plot(a, &mut out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn out_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

impl ManeuverArgs {
    fn airframe(&self) -> Result<Airframe> {
        let params = match &self.airframe {
            Some(path) => AirframeParams::load(path)?,
            None => AirframeParams::mirage3(),
        };
        let mut guards = Guards::default();
        if let Some(v) = self.v_min {
            if !(v >= 0.1) {
                return Err(Error::Config(format!("--v-min must be at least 0.1 m/s, got {v}")));
            }
            guards.v_min = v;
        }
        if let Some(a) = self.angle_guard {
            if !(a > 0.0 && a < 0.5) {
                return Err(Error::Config(format!("--angle-guard must lie in (0, 0.5) rad, got {a}")));
            }
            guards.angle = a;
        }
        Airframe::with_guards(params, guards)
    }

    fn input(&self) -> Result<ManeuverInput> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("--dt must be positive, got {}", self.dt)));
        }
        match (&self.maneuver, &self.trajectory) {
            (Some(name), None) => ManeuverInput::by_name(name, self.dt),
            (None, Some(path)) => load_sampled(path, Some(self.dt)),
            _ => Err(Error::Config("give exactly one of --maneuver or --trajectory".into())),
        }
    }

    fn load(&self) -> Result<(Airframe, ManeuverInput, KinematicTables)> {
        let af = self.airframe()?;
        let input = self.input()?;
        let tables = preprocess(&input, &af)?;
        Ok((af, input, tables))
    }
}

fn cmd_run(a: RunArgs, out: &mut impl Write) -> Result<()> {
    let (af, _input, tables) = a.maneuver.load()?;
    let series = run_tables(&tables, &af)?;
    for w in &series.warnings {
        eprintln!("warning: {w}");
    }
    save_controls(&series, &a.out)?;
    let summary = series.summary();
    write_summary(out, &tables, &summary).map_err(out_err)?;
    writeln!(out, "controls written to {} ({} rows)", a.out.display(), series.len()).map_err(out_err)?;
    if let Some(path) = &a.summary_json {
        let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Data(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    if let Some(dir) = &a.plots {
        let files = emit_plots(&series, dir)?;
        writeln!(out, "{} figures written to {}", files.len(), dir.display()).map_err(out_err)?;
    }
    Ok(())
}

fn write_summary(out: &mut impl Write, tables: &KinematicTables, s: &RunSummary) -> std::io::Result<()> {
    let rho = tables.rho[0];
    let temp = tables.temperature[0];
    writeln!(out, "flight characteristics at t = {} s", tables.t0)?;
    writeln!(out, "  altitude                      {:>12.3} m", tables.h[0])?;
    writeln!(out, "  airspeed                      {:>12.3} m/s", tables.v[0])?;
    writeln!(out, "  air density                   {:>12.6} kg/m^3", rho)?;
    writeln!(out, "  temperature                   {:>12.2} K", temp)?;
    writeln!(out, "  static pressure               {:>12.1} Pa", rho * R_AIR * temp)?;
    writeln!(out, "  speed of sound                {:>12.2} m/s", tables.sound_speed[0])?;
    writeln!(out, "  Mach number                   {:>12.4}", tables.mach[0])?;
    writeln!(out, "  dynamic pressure              {:>12.2} Pa", tables.qbar[0])?;
    writeln!(out, "  equilibrium angle of attack   {:>12.4} deg", s.alpha_equb_deg)?;
    writeln!(out, "  initial thrust                {:>12.1} N", s.thrust_initial)?;
    writeln!(out, "run: {} stations at dt = {} s", s.stations, s.dt)?;
    writeln!(out, "  thrust max {:.1} N at {:.3} s, min {:.1} N at {:.3} s", s.thrust_max.value, s.thrust_max.t, s.thrust_min.value, s.thrust_min.t)?;
    for e in &s.thrust_local_maxima {
        writeln!(out, "    local maximum {:.1} N at {:.3} s", e.value, e.t)?;
    }
    for e in &s.thrust_local_minima {
        writeln!(out, "    local minimum {:.1} N at {:.3} s", e.value, e.t)?;
    }
    for (name, e, mean) in [
        ("aileron ", s.max_abs_delta_l_deg, s.mean_delta_l_deg),
        ("elevator", s.max_abs_delta_m_deg, s.mean_delta_m_deg),
        ("rudder  ", s.max_abs_delta_n_deg, s.mean_delta_n_deg),
    ] {
        writeln!(out, "  {name} max |deflection| {:>8.3} deg at {:>7.3} s, mean {:>7.3} deg", e.value, e.t, mean)?;
    }
    writeln!(
        out,
        "  conventional angle of attack in [{:.4}, {:.4}] deg",
        s.alpha_conventional_min_deg, s.alpha_conventional_max_deg
    )?;
    writeln!(out, "  max |sideslip| {:.3} deg", s.beta_max_abs_deg)?;
    writeln!(out, "  max flight-path residual {:.3e}", s.max_flightpath_residual)?;
    if s.thrust_reversal {
        writeln!(out, "  note: thrust reverses sign")?;
    }
    if s.deflection_limit_exceeded {
        writeln!(out, "  note: a control surface exceeds 60 deg")?;
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs, out: &mut impl Write) -> Result<()> {
    let (af, input, tables) = a.maneuver.load()?;
    let controls = load_controls(&a.controls, tables.alpha_equb)?;
    let hold = if a.zoh { Hold::ZeroOrder } else { Hold::Linear };
    let report = round_trip_with(&input, &controls, &af, hold)?;
    writeln!(
        out,
        "max position deviation {:.3} m (tolerance {:.3} m over {:.1} m flown)\nrms position deviation {:.3} m\nmax roll deviation {:.4} deg (tolerance {} deg)\n{}",
        report.max_pos_dev_m,
        report.pos_tolerance_m,
        report.path_length_m,
        report.rms_pos_dev_m,
        report.max_roll_dev_deg,
        report.roll_tolerance_deg,
        if report.pass { "PASS" } else { "FAIL" }
    )
    .map_err(out_err)?;
    if let Some(path) = &a.report {
        let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Data(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn cmd_atmosphere(a: AtmosphereArgs, out: &mut impl Write) -> Result<()> {
    let rows = match (a.altitude, a.table) {
        (Some(h), None) => vec![AtmosphereSample::at(h)?],
        (None, Some(t)) => atmosphere::table(t[0], t[1], t[2])?,
        _ => return Err(Error::Config("give exactly one of --altitude or --table".into())),
    };
    writeln!(out, "altitude_m,density_kg_m3,temperature_K,speed_of_sound_m_s").map_err(out_err)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            format_sig9(r.altitude_m),
            format_sig9(r.density_kg_m3),
            format_sig9(r.temperature_k),
            format_sig9(r.speed_of_sound_m_s)
        )
        .map_err(out_err)?;
    }
    Ok(())
}

fn cmd_plot(a: PlotArgs, out: &mut impl Write) -> Result<()> {
    let (_af, _input, tables) = a.maneuver.load()?;
    let mut series = load_controls(&a.controls, tables.alpha_equb)?;
    attach_roll(&mut series, &tables, &a.controls)?;
    let files = emit_plots(&series, &a.dir)?;
    writeln!(out, "{} figures written to {}", files.len(), a.dir.display()).map_err(out_err)
}

/// Controls files carry no roll channel; take it from the maneuver.
fn attach_roll(series: &mut ControlSeries, tables: &KinematicTables, path: &Path) -> Result<()> {
    if series.len() != tables.len() {
        return Err(Error::Config(format!(
            "{} has {} rows but the maneuver has {} stations",
            path.display(),
            series.len(),
            tables.len()
        )));
    }
    for (i, r) in series.records.iter_mut().enumerate() {
        r.phi = tables.phi[i];
        r.phi_dot = tables.phi_dot[i];
        r.phi_ddot = tables.phi_ddot[i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_map_to_four() {
        assert_eq!(main(["invsim", "frobnicate"]), EXIT_USAGE);
        assert_eq!(main(["invsim", "atmosphere"]), EXIT_USAGE);
        assert_eq!(main(["invsim", "--version"]), EXIT_OK);
    }

    #[test]
    fn atmosphere_out_of_range_is_numerical() {
        assert_eq!(main(["invsim", "atmosphere", "--altitude", "25000"]), EXIT_NUMERICAL);
    }

    #[test]
    fn guard_overrides_are_validated() {
        let args = ManeuverArgs {
            airframe: None,
            maneuver: Some("mirage-double-roll".into()),
            trajectory: None,
            dt: 0.01,
            v_min: Some(0.01),
            angle_guard: None,
        };
        assert!(matches!(args.airframe(), Err(Error::Config(_))));
    }
}
