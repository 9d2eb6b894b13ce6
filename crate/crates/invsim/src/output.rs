//! CSV emission of control series and SVG line plots.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solver::{orbit_detachment, ControlRecord, ControlSeries};

pub const CONTROL_COLUMNS: [&str; 14] = [
    "t_s",
    "thrust_N",
    "delta_l_rad",
    "delta_m_rad",
    "delta_n_rad",
    "alpha_rad",
    "beta_rad",
    "theta_rad",
    "psi_rad",
    "L_Nm",
    "M_Nm",
    "N_Nm",
    "res_eq33",
    "res_eq34",
];

/// Formats `v` with nine significant digits, fixed notation for moderate
/// magnitudes and scientific otherwise, without trailing zeros.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn row(r: &ControlRecord) -> [f64; 14] {
    [
        r.t, r.thrust, r.delta_l, r.delta_m, r.delta_n, r.alpha, r.beta, r.theta, r.psi, r.l, r.m, r.n, r.res_eq33,
        r.res_eq34,
    ]
}

pub fn write_controls(series: &ControlSeries, writer: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(CONTROL_COLUMNS).map_err(err)?;
    for r in &series.records {
        w.write_record(row(r).iter().map(|&v| format_sig9(v))).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))
}

pub fn save_controls(series: &ControlSeries, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_controls(series, std::io::BufWriter::new(file))
}

/// Rows of a controls CSV in column order.
pub fn read_controls(reader: impl std::io::Read) -> Result<Vec<[f64; 14]>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Data(e.to_string()))?;
    if headers.iter().ne(CONTROL_COLUMNS.iter().copied()) {
        return Err(Error::Data(format!("unexpected controls header: {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| Error::Data(format!("row {i}: {e}")))?;
            let mut out = [0.0; 14];
            for (k, field) in rec.iter().enumerate().take(14) {
                out[k] = field
                    .parse()
                    .map_err(|_| Error::Data(format!("row {i}: '{field}' is not a number")))?;
            }
            Ok(out)
        })
        .collect()
}

/// Rebuilds a control series (thrust, deflections and the logged state
/// channels) from a controls CSV.
pub fn load_controls(path: &Path, alpha_equb: f64) -> Result<ControlSeries> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let rows = read_controls(file).map_err(|e| match e {
        Error::Data(m) => Error::Data(format!("{}: {m}", path.display())),
        other => other,
    })?;
    if rows.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: rows.len(),
        });
    }
    let dt = rows[1][0] - rows[0][0];
    let records = rows
        .iter()
        .map(|r| ControlRecord {
            t: r[0],
            thrust: r[1],
            delta_l: r[2],
            delta_m: r[3],
            delta_n: r[4],
            alpha: r[5],
            beta: r[6],
            alpha_conventional: r[5] + alpha_equb,
            theta: r[7],
            psi: r[8],
            l: r[9],
            m: r[10],
            n: r[11],
            res_eq33: r[12],
            res_eq34: r[13],
            ..Default::default()
        })
        .collect();
    Ok(ControlSeries {
        dt,
        alpha_equb,
        records,
        warnings: Vec::new(),
    })
}

/// A two-dimensional line chart rendered as standalone SVG.
#[derive(Debug, Clone)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub lines: Vec<(String, Vec<(f64, f64)>)>,
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 40.0, 55.0);

/// Round tick spacing giving about `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::MAX, f64::MIN), |a, v| (a.0.min(v), a.1.max(v)));
    if lo > hi {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    let pad = if span > 1e-12 * hi.abs().max(1.0) {
        0.05 * span
    } else {
        0.5 * hi.abs().max(1.0)
    };
    (lo - pad, hi + pad)
}

impl LinePlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            lines: Vec::new(),
        }
    }

    pub fn line(mut self, name: &str, points: Vec<(f64, f64)>) -> Self {
        self.lines.push((name.into(), points));
        self
    }

    pub fn to_svg(&self) -> String {
        let (ml, mr, mt, mb) = MARGIN;
        let (pw, ph) = (WIDTH - ml - mr, HEIGHT - mt - mb);
        let all = || self.lines.iter().flat_map(|(_, p)| p.iter());
        let (x0, x1) = padded_range(all().map(|p| p.0));
        let (y0, y1) = padded_range(all().map(|p| p.1));
        let sx = |x: f64| ml + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| mt + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, esc(&self.title));
        for (step, vertical) in [(tick_step(x1 - x0, 8.0), true), (tick_step(y1 - y0, 6.0), false)] {
            let (lo, hi) = if vertical { (x0, x1) } else { (y0, y1) };
            let mut v = (lo / step).ceil() * step;
            while v <= hi + 1e-9 * step {
                let label = format_tick(v, step);
                if vertical {
                    let x = sx(v);
                    let _ = writeln!(s, r##"<line x1="{x:.1}" y1="{mt}" x2="{x:.1}" y2="{:.1}" stroke="#e5e5e5"/>"##, mt + ph);
                    let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{label}</text>"#, mt + ph + 16.0);
                } else {
                    let y = sy(v);
                    let _ = writeln!(s, r##"<line x1="{ml}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#e5e5e5"/>"##, ml + pw);
                    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"#, ml - 6.0, y + 4.0);
                }
                v += step;
            }
        }
        let _ = writeln!(s, r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            ml + pw / 2.0,
            HEIGHT - 12.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
            mt + ph / 2.0,
            esc(&self.y_label)
        );
        for (k, (name, pts)) in self.lines.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let stride = (pts.len() / 4000).max(1);
            let mut d = String::new();
            for (i, &(x, y)) in pts.iter().enumerate() {
                if i % stride != 0 && i + 1 != pts.len() {
                    continue;
                }
                let _ = write!(d, "{}{:.2},{:.2}", if d.is_empty() { "M" } else { " L" }, sx(x), sy(y));
            }
            let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
            if self.lines.len() > 1 {
                let ly = mt + 16.0 + 16.0 * k as f64;
                let lx = ml + pw - 150.0;
                let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 24.0);
                let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 30.0, ly + 4.0, esc(name));
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn format_tick(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
    let v = if v.abs() < 1e-9 * step { 0.0 } else { v };
    format!("{v:.decimals$}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes the standard figure set for a run and returns the file paths.
pub fn emit_plots(series: &ControlSeries, dir: &Path) -> Result<Vec<PathBuf>> {
    if series.is_empty() {
        return Err(Error::Data("cannot plot an empty control series".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let t = series.column(|r| r.t);
    let deg = |f: fn(&ControlRecord) -> f64| -> Vec<(f64, f64)> {
        series.records.iter().map(|r| (r.t, f(r).to_degrees())).collect()
    };
    let raw = |f: fn(&ControlRecord) -> f64| -> Vec<(f64, f64)> { t.iter().zip(&series.records).map(|(&t, r)| (t, f(r))).collect() };
    let time = "time (s)";
    let orbit_title = match orbit_detachment(series) {
        Ok(gap) => format!("Orbit of pitch and yaw (loop gap {gap:.3} deg)"),
        Err(_) => "Orbit of pitch and yaw".to_string(),
    };
    let plots = [
        ("roll.svg", LinePlot::new("Roll angle", time, "roll (deg)").line("phi", deg(|r| r.phi))),
        (
            "roll_rates.svg",
            LinePlot::new("Roll rate and acceleration", time, "deg/s, deg/s^2")
                .line("roll rate (deg/s)", deg(|r| r.phi_dot))
                .line("roll acceleration (deg/s^2)", deg(|r| r.phi_ddot)),
        ),
        ("thrust.svg", LinePlot::new("Thrust", time, "thrust (N)").line("T", raw(|r| r.thrust))),
        ("rudder.svg", LinePlot::new("Rudder deflection", time, "deflection (deg)").line("rudder", deg(|r| r.delta_n))),
        (
            "elevator_aileron.svg",
            LinePlot::new("Elevator and aileron deflections", time, "deflection (deg)")
                .line("elevator", deg(|r| r.delta_m))
                .line("aileron", deg(|r| r.delta_l)),
        ),
        (
            "aoa_sideslip.svg",
            LinePlot::new("Angle of attack and sideslip", time, "angle (deg)")
                .line("conventional angle of attack", deg(|r| r.alpha_conventional))
                .line("sideslip", deg(|r| r.beta)),
        ),
        (
            "pitch_yaw.svg",
            LinePlot::new("Pitch and yaw", time, "angle (deg)")
                .line("pitch", deg(|r| r.theta))
                .line("yaw", deg(|r| r.psi)),
        ),
        (
            "orbit.svg",
            LinePlot::new(&orbit_title, "yaw (deg)", "pitch (deg)").line(
                "orbit",
                series.records.iter().map(|r| (r.psi.to_degrees(), r.theta.to_degrees())).collect(),
            ),
        ),
    ];
    let mut paths = Vec::with_capacity(plots.len());
    for (name, plot) in plots {
        let path = dir.join(name);
        std::fs::write(&path, plot.to_svg()).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
