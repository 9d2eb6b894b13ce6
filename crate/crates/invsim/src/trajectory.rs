//! Maneuver inputs and their pre-processing into per-station kinematic tables.
//!
//! A maneuver prescribes the inertial position of the centre of gravity and
//! the roll angle over time, either as closed-form functions or as samples
//! on a uniform grid.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::path::Path;
use std::sync::Arc;

use crate::airframe::{equilibrium_aoa, Airframe};
use crate::atmosphere;
use crate::dynamics::{flight_path_from_inertial_rates, flight_path_rates, FlightPathAngles};
use crate::error::{Error, Result};
use crate::numdiff::{Jet2, UniformSeries};

/// Largest tolerated deviation of a sample time from the uniform grid, s.
pub const TIME_JITTER: f64 = 1e-9;

/// A maneuver given by closed-form functions of time.
pub trait AnalyticManeuver: Send + Sync + Debug {
    fn name(&self) -> &str;
    fn duration(&self) -> f64;
    /// Inertial position and its first four time derivatives.
    fn position(&self, t: f64) -> [[f64; 3]; 5];
    /// Roll angle with its first two time derivatives.
    fn roll(&self, t: f64) -> [f64; 3];
}

/// Straight, level flight at constant speed with a two-harmonic double roll
/// (0 to 720 deg) over `duration` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleRoll {
    pub speed: f64,
    /// Height above the inertial origin, m (z_g = -height).
    pub height: f64,
    pub duration: f64,
}

impl DoubleRoll {
    /// 150 m/s at 5000 m for 30 s.
    pub fn mirage() -> Self {
        Self {
            speed: 150.0,
            height: 5000.0,
            duration: 30.0,
        }
    }
}

impl AnalyticManeuver for DoubleRoll {
    fn name(&self) -> &str {
        "double-roll"
    }

    fn duration(&self) -> f64 {
        self.duration
    }

    fn position(&self, t: f64) -> [[f64; 3]; 5] {
        let mut d = [[0.0; 3]; 5];
        d[0] = [self.speed * t, 0.0, -self.height];
        d[1][0] = self.speed;
        d
    }

    fn roll(&self, t: f64) -> [f64; 3] {
        let w = PI / self.duration;
        let (s1, c1) = (w * t).sin_cos();
        let (s3, c3) = (3.0 * w * t).sin_cos();
        [
            PI / 4.0 * (8.0 + c3 - 9.0 * c1),
            PI / 4.0 * (-3.0 * w * s3 + 9.0 * w * s1),
            PI / 4.0 * (-9.0 * w * w * c3 + 9.0 * w * w * c1),
        ]
    }
}

/// Level constant-speed turn entered smoothly: the heading rate ramps from
/// zero to `turn_rate` and back, with the bank following a matching profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothTurn {
    pub speed: f64,
    pub height: f64,
    pub duration: f64,
    /// Peak heading rate, rad/s.
    pub turn_rate: f64,
    /// Peak bank angle, rad.
    pub bank: f64,
}

impl SmoothTurn {
    fn heading_rate(&self, t: f64) -> [f64; 4] {
        // omega(t) = w0 (1 - cos(2 pi t / D)) / 2 and its derivatives
        let k = 2.0 * PI / self.duration;
        let (s, c) = (k * t).sin_cos();
        let w0 = 0.5 * self.turn_rate;
        [w0 * (1.0 - c), w0 * k * s, w0 * k * k * c, -w0 * k * k * k * s]
    }

    fn heading(&self, t: f64) -> f64 {
        let k = 2.0 * PI / self.duration;
        0.5 * self.turn_rate * (t - (k * t).sin() / k)
    }
}

impl AnalyticManeuver for SmoothTurn {
    fn name(&self) -> &str {
        "smooth-turn"
    }

    fn duration(&self) -> f64 {
        self.duration
    }

    fn position(&self, t: f64) -> [[f64; 3]; 5] {
        // velocity V (cos chi, sin chi); derivatives by hand through chi(t)
        let v = self.speed;
        let chi = self.heading(t);
        let [w, wd, wdd, _] = self.heading_rate(t);
        let (s, c) = chi.sin_cos();
        let x = self.numeric_x(t);
        [
            [x[0], x[1], -self.height],
            [v * c, v * s, 0.0],
            [-v * s * w, v * c * w, 0.0],
            [-v * (c * w * w + s * wd), v * (-s * w * w + c * wd), 0.0],
            [
                -v * (-s * w * w * w + 3.0 * c * w * wd + s * wdd),
                v * (-c * w * w * w - 3.0 * s * w * wd + c * wdd),
                0.0,
            ],
        ]
    }

    fn roll(&self, t: f64) -> [f64; 3] {
        let [w, wd, wdd, _] = self.heading_rate(t);
        let scale = self.bank / self.turn_rate;
        [scale * w, scale * wd, scale * wdd]
    }
}

impl SmoothTurn {
    /// Horizontal position by Gauss-Legendre quadrature of the velocity.
    fn numeric_x(&self, t: f64) -> [f64; 2] {
        const NODES: [f64; 5] = [0.0, -0.538_469_310_105_683, 0.538_469_310_105_683, -0.906_179_845_938_664, 0.906_179_845_938_664];
        const WEIGHTS: [f64; 5] = [0.568_888_888_888_889, 0.478_628_670_499_366, 0.478_628_670_499_366, 0.236_926_885_056_189, 0.236_926_885_056_189];
        let panels = ((t / self.duration) * 64.0).ceil().max(1.0) as usize;
        let h = t / panels as f64;
        let mut acc = [0.0, 0.0];
        for i in 0..panels {
            let mid = (i as f64 + 0.5) * h;
            for (x, w) in NODES.iter().zip(WEIGHTS) {
                let (s, c) = self.heading(mid + 0.5 * h * x).sin_cos();
                acc[0] += 0.5 * h * w * c;
                acc[1] += 0.5 * h * w * s;
            }
        }
        [self.speed * acc[0], self.speed * acc[1]]
    }
}

/// Input columns sampled on a uniform grid starting at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledManeuver {
    pub t0: f64,
    pub x_g: Vec<f64>,
    pub y_g: Vec<f64>,
    pub z_g: Vec<f64>,
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum ManeuverSource {
    Analytic(Arc<dyn AnalyticManeuver>),
    Sampled(SampledManeuver),
}

#[derive(Debug, Clone)]
pub struct ManeuverInput {
    pub duration: f64,
    pub dt: f64,
    pub source: ManeuverSource,
}

/// Built-in maneuver names accepted by [`ManeuverInput::by_name`].
pub const BUILTIN_MANEUVERS: &[&str] = &["mirage-double-roll", "smooth-turn"];

/// Number of stations covering `duration` at step `dt`, both ends included.
pub fn station_count(duration: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("time step must be positive, got {dt}")));
    }
    if !(duration > 0.0) {
        return Err(Error::Config(format!("duration must be positive, got {duration}")));
    }
    let steps = duration / dt;
    let rounded = steps.round();
    if (steps - rounded).abs() > 1e-6 * rounded.max(1.0) {
        return Err(Error::Config(format!(
            "duration {duration} s is not a whole number of {dt} s steps"
        )));
    }
    Ok(rounded as usize + 1)
}

impl ManeuverInput {
    pub fn analytic(m: Arc<dyn AnalyticManeuver>, dt: f64) -> Result<Self> {
        let duration = m.duration();
        station_count(duration, dt)?;
        Ok(Self {
            duration,
            dt,
            source: ManeuverSource::Analytic(m),
        })
    }

    pub fn mirage_double_roll(dt: f64) -> Result<Self> {
        Self::analytic(Arc::new(DoubleRoll::mirage()), dt)
    }

    pub fn by_name(name: &str, dt: f64) -> Result<Self> {
        match name {
            "mirage-double-roll" => Self::mirage_double_roll(dt),
            "smooth-turn" => Self::analytic(
                Arc::new(SmoothTurn {
                    speed: 150.0,
                    height: 5000.0,
                    duration: 40.0,
                    turn_rate: 0.1,
                    bank: 0.99,
                }),
                dt,
            ),
            _ => Err(Error::Config(format!(
                "unknown maneuver '{name}', expected one of {}",
                BUILTIN_MANEUVERS.join(", ")
            ))),
        }
    }

    pub fn sampled(s: SampledManeuver, dt: f64) -> Result<Self> {
        let n = s.x_g.len();
        if [s.y_g.len(), s.z_g.len(), s.phi.len()].iter().any(|&l| l != n) {
            return Err(Error::Data("sampled columns differ in length".into()));
        }
        if n < 5 {
            return Err(Error::TooShort { needed: 5, got: n });
        }
        let duration = (n - 1) as f64 * dt;
        station_count(duration, dt)?;
        Ok(Self {
            duration,
            dt,
            source: ManeuverSource::Sampled(s),
        })
    }

    pub fn stations(&self) -> usize {
        station_count(self.duration, self.dt).expect("validated on construction")
    }

    pub fn t0(&self) -> f64 {
        match &self.source {
            ManeuverSource::Analytic(_) => 0.0,
            ManeuverSource::Sampled(s) => s.t0,
        }
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0() + n as f64 * self.dt
    }

    /// Samples the prescribed position and roll at every station.
    pub fn to_sampled(&self) -> SampledManeuver {
        match &self.source {
            ManeuverSource::Sampled(s) => s.clone(),
            ManeuverSource::Analytic(m) => {
                let n = self.stations();
                let mut s = SampledManeuver {
                    t0: 0.0,
                    x_g: Vec::with_capacity(n),
                    y_g: Vec::with_capacity(n),
                    z_g: Vec::with_capacity(n),
                    phi: Vec::with_capacity(n),
                };
                for i in 0..n {
                    let t = self.time(i);
                    let p = m.position(t)[0];
                    s.x_g.push(p[0]);
                    s.y_g.push(p[1]);
                    s.z_g.push(p[2]);
                    s.phi.push(m.roll(t)[0]);
                }
                s
            }
        }
    }

    /// Target position and roll at station `n`.
    pub fn target(&self, n: usize) -> ([f64; 3], f64) {
        match &self.source {
            ManeuverSource::Analytic(m) => {
                let t = self.time(n);
                (m.position(t)[0], m.roll(t)[0])
            }
            ManeuverSource::Sampled(s) => ([s.x_g[n], s.y_g[n], s.z_g[n]], s.phi[n]),
        }
    }

    /// Length of the prescribed path, m.
    pub fn path_length(&self) -> f64 {
        let n = self.stations();
        let mut len = 0.0;
        let mut prev = self.target(0).0;
        for i in 1..n {
            let p = self.target(i).0;
            len += ((p[0] - prev[0]).powi(2) + (p[1] - prev[1]).powi(2) + (p[2] - prev[2]).powi(2)).sqrt();
            prev = p;
        }
        len
    }
}

/// Reads a sampled maneuver with columns `t,x_g,y_g,z_g,phi_rad`. The step is
/// `dt_expected` when given, otherwise the first time increment.
pub fn load_sampled(path: &Path, dt_expected: Option<f64>) -> Result<ManeuverInput> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_sampled(file, dt_expected).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_sampled(reader: impl std::io::Read, dt_expected: Option<f64>) -> Result<ManeuverInput> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Data(e.to_string()))?.clone();
    let names = ["t", "x_g", "y_g", "z_g", "phi_rad"];
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| Error::Data(format!("missing column '{n}' in header")))
        })
        .collect::<Result<_>>()?;
    let mut cols: [Vec<f64>; 5] = Default::default();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Data(format!("row {row}: {e}")))?;
        for (k, &i) in idx.iter().enumerate() {
            let field = rec.get(i).ok_or_else(|| Error::Data(format!("row {row}: missing field {}", names[k])))?;
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Data(format!("row {row}: '{field}' is not a number")))?;
            if !v.is_finite() {
                return Err(Error::Data(format!("row {row}: non-finite {}", names[k])));
            }
            cols[k].push(v);
        }
    }
    let [t, x_g, y_g, z_g, phi] = cols;
    if t.len() < 5 {
        return Err(Error::TooShort {
            needed: 5,
            got: t.len(),
        });
    }
    let dt = dt_expected.unwrap_or(t[1] - t[0]);
    if !(dt > 0.0) {
        return Err(Error::Data(format!("time is not increasing at row 1 (step {dt})")));
    }
    if let Some(i) = (1..t.len()).find(|&i| t[i] <= t[i - 1]) {
        return Err(Error::Data(format!("time is not increasing at row {i}")));
    }
    if let Some(i) = (0..t.len()).find(|&i| (t[i] - (t[0] + i as f64 * dt)).abs() > TIME_JITTER) {
        return Err(Error::Data(format!(
            "non-uniform time at row {i}: t = {} but the {dt} s grid expects {}",
            t[i],
            t[0] + i as f64 * dt
        )));
    }
    ManeuverInput::sampled(
        SampledManeuver {
            t0: t[0],
            x_g,
            y_g,
            z_g,
            phi,
        },
        dt,
    )
}

/// Writes the maneuver sampled at its stations, at full precision.
pub fn write_sampled(input: &ManeuverInput, writer: impl std::io::Write) -> Result<()> {
    let s = input.to_sampled();
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(["t", "x_g", "y_g", "z_g", "phi_rad"]).map_err(err)?;
    for i in 0..s.x_g.len() {
        let row = [input.time(i), s.x_g[i], s.y_g[i], s.z_g[i], s.phi[i]];
        w.write_record(row.iter().map(|v| v.to_string())).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))
}

/// Position derivatives (orders 0 to 4) and roll derivatives (0 to 2) at an
/// instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawKinematics {
    pub pos: [[f64; 3]; 5],
    pub roll: [f64; 3],
}

impl RawKinematics {
    fn lerp(a: &Self, b: &Self, w: f64) -> Self {
        let l = |x: f64, y: f64| x + w * (y - x);
        Self {
            pos: std::array::from_fn(|k| std::array::from_fn(|i| l(a.pos[k][i], b.pos[k][i]))),
            roll: std::array::from_fn(|k| l(a.roll[k], b.roll[k])),
        }
    }
}

/// Trajectory quantities at one instant, carrying the first two time
/// derivatives wherever the solver differentiates through them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub t: f64,
    pub phi: Jet2,
    pub v: Jet2,
    pub fp: FlightPathAngles<Jet2>,
    pub qbar: Jet2,
    pub h: f64,
    pub rho: f64,
    /// Inertial acceleration with its first two derivatives.
    pub accel: [Jet2; 3],
}

impl PathPoint {
    pub fn new(af: &Airframe, t: f64, raw: &RawKinematics) -> Result<Self> {
        let d = &raw.pos;
        let vel: [Jet2; 3] = std::array::from_fn(|i| Jet2::new(d[1][i], d[2][i], d[3][i]));
        let (v, fp) = flight_path_from_inertial_rates(af, vel).map_err(|e| with_time(e, t))?;
        let h = Jet2::new(af.params.h_ini - d[0][2], -d[1][2], -d[2][2]);
        let rho = atmosphere::density_of(h)?;
        Ok(Self {
            t,
            phi: Jet2::new(raw.roll[0], raw.roll[1], raw.roll[2]),
            v,
            fp,
            qbar: rho * v * v * 0.5,
            h: h.v,
            rho: rho.v,
            accel: std::array::from_fn(|i| Jet2::new(d[2][i], d[3][i], d[4][i])),
        })
    }
}

fn with_time(e: Error, t: f64) -> Error {
    match e {
        Error::VerticalFlight { speed, .. } => Error::VerticalFlight { t, speed },
        other => other,
    }
}

/// Per-station kinematic vectors produced by pre-processing.
#[derive(Debug, Clone)]
pub struct KinematicTables {
    pub t0: f64,
    pub dt: f64,
    pub x_g: Vec<f64>,
    pub y_g: Vec<f64>,
    pub z_g: Vec<f64>,
    pub phi: Vec<f64>,
    pub x_dot: Vec<f64>,
    pub y_dot: Vec<f64>,
    pub z_dot: Vec<f64>,
    pub phi_dot: Vec<f64>,
    pub x_ddot: Vec<f64>,
    pub y_ddot: Vec<f64>,
    pub z_ddot: Vec<f64>,
    pub phi_ddot: Vec<f64>,
    pub x_dddot: Vec<f64>,
    pub y_dddot: Vec<f64>,
    pub z_dddot: Vec<f64>,
    /// Fourth derivatives of position, needed for consistent second
    /// derivatives of the wind angles.
    pub x_snap: Vec<f64>,
    pub y_snap: Vec<f64>,
    pub z_snap: Vec<f64>,
    pub v: Vec<f64>,
    pub v_dot: Vec<f64>,
    pub v_ddot: Vec<f64>,
    pub h: Vec<f64>,
    pub rho: Vec<f64>,
    pub qbar: Vec<f64>,
    pub theta_w: Vec<f64>,
    pub theta_w_dot: Vec<f64>,
    pub theta_w_ddot: Vec<f64>,
    pub psi_w: Vec<f64>,
    pub psi_w_dot: Vec<f64>,
    pub psi_w_ddot: Vec<f64>,
    pub temperature: Vec<f64>,
    pub sound_speed: Vec<f64>,
    pub mach: Vec<f64>,
    /// Equilibrium angle of attack at the first station, held for the run.
    pub alpha_equb: f64,
    analytic: Option<Arc<dyn AnalyticManeuver>>,
}

impl KinematicTables {
    pub fn len(&self) -> usize {
        self.x_g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_g.is_empty()
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic.is_some()
    }

    fn raw_station(&self, n: usize) -> RawKinematics {
        RawKinematics {
            pos: [
                [self.x_g[n], self.y_g[n], self.z_g[n]],
                [self.x_dot[n], self.y_dot[n], self.z_dot[n]],
                [self.x_ddot[n], self.y_ddot[n], self.z_ddot[n]],
                [self.x_dddot[n], self.y_dddot[n], self.z_dddot[n]],
                [self.x_snap[n], self.y_snap[n], self.z_snap[n]],
            ],
            roll: [self.phi[n], self.phi_dot[n], self.phi_ddot[n]],
        }
    }

    /// Raw kinematics at any time in the table span: exact for analytic
    /// sources, linearly interpolated otherwise.
    pub fn raw_at(&self, t: f64) -> RawKinematics {
        if let Some(m) = &self.analytic {
            return RawKinematics {
                pos: m.position(t),
                roll: m.roll(t),
            };
        }
        let s = ((t - self.t0) / self.dt).clamp(0.0, (self.len() - 1) as f64);
        let i = (s.floor() as usize).min(self.len() - 2);
        let w = s - i as f64;
        if w == 0.0 {
            return self.raw_station(i);
        }
        RawKinematics::lerp(&self.raw_station(i), &self.raw_station(i + 1), w)
    }

    pub fn point_at(&self, af: &Airframe, t: f64) -> Result<PathPoint> {
        PathPoint::new(af, t, &self.raw_at(t))
    }

    pub fn point(&self, af: &Airframe, n: usize) -> Result<PathPoint> {
        self.point_at(af, self.time(n))
    }

    /// Second derivatives of the flight-path angles by differencing their
    /// first-derivative vectors; a diagnostic alternative to the stored ones.
    pub fn flight_path_accels_by_differences(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let th = UniformSeries::new(self.dt, self.theta_w_dot.clone())?.derivative(1)?;
        let ps = UniformSeries::new(self.dt, self.psi_w_dot.clone())?.derivative(1)?;
        Ok((th.values, ps.values))
    }

    /// Named columns in a fixed order, for export and comparisons.
    pub fn columns(&self) -> Vec<(&'static str, &[f64])> {
        vec![
            ("x_g", &self.x_g),
            ("y_g", &self.y_g),
            ("z_g", &self.z_g),
            ("phi", &self.phi),
            ("x_dot", &self.x_dot),
            ("y_dot", &self.y_dot),
            ("z_dot", &self.z_dot),
            ("phi_dot", &self.phi_dot),
            ("x_ddot", &self.x_ddot),
            ("y_ddot", &self.y_ddot),
            ("z_ddot", &self.z_ddot),
            ("phi_ddot", &self.phi_ddot),
            ("x_dddot", &self.x_dddot),
            ("y_dddot", &self.y_dddot),
            ("z_dddot", &self.z_dddot),
            ("v", &self.v),
            ("v_dot", &self.v_dot),
            ("v_ddot", &self.v_ddot),
            ("h", &self.h),
            ("rho", &self.rho),
            ("qbar", &self.qbar),
            ("theta_w", &self.theta_w),
            ("theta_w_dot", &self.theta_w_dot),
            ("theta_w_ddot", &self.theta_w_ddot),
            ("psi_w", &self.psi_w),
            ("psi_w_dot", &self.psi_w_dot),
            ("psi_w_ddot", &self.psi_w_ddot),
        ]
    }
}

/// Removes 2 pi jumps so that consecutive values differ by less than pi.
pub fn unwrap_angles(a: &mut [f64]) {
    let mut offset = 0.0;
    for i in 1..a.len() {
        let raw = a[i] + offset;
        let jump = raw - a[i - 1];
        let k = (jump / (2.0 * PI)).round();
        offset -= k * 2.0 * PI;
        a[i] = raw - k * 2.0 * PI;
    }
}

fn empty_tables(n: usize, t0: f64, dt: f64, analytic: Option<Arc<dyn AnalyticManeuver>>) -> KinematicTables {
    let z = || Vec::with_capacity(n);
    KinematicTables {
        t0,
        dt,
        x_g: z(),
        y_g: z(),
        z_g: z(),
        phi: z(),
        x_dot: z(),
        y_dot: z(),
        z_dot: z(),
        phi_dot: z(),
        x_ddot: z(),
        y_ddot: z(),
        z_ddot: z(),
        phi_ddot: z(),
        x_dddot: z(),
        y_dddot: z(),
        z_dddot: z(),
        x_snap: z(),
        y_snap: z(),
        z_snap: z(),
        v: z(),
        v_dot: z(),
        v_ddot: z(),
        h: z(),
        rho: z(),
        qbar: z(),
        theta_w: z(),
        theta_w_dot: z(),
        theta_w_ddot: z(),
        psi_w: z(),
        psi_w_dot: z(),
        psi_w_ddot: z(),
        temperature: z(),
        sound_speed: z(),
        mach: z(),
        alpha_equb: 0.0,
        analytic,
    }
}

/// Materializes the per-station kinematic vectors. Analytic sources are
/// differentiated exactly; sampled ones with finite differences.
pub fn preprocess(input: &ManeuverInput, af: &Airframe) -> Result<KinematicTables> {
    let n = input.stations();
    let (raws, analytic) = match &input.source {
        ManeuverSource::Analytic(m) => {
            let raws: Vec<RawKinematics> = (0..n)
                .map(|i| {
                    let t = input.time(i);
                    RawKinematics {
                        pos: m.position(t),
                        roll: m.roll(t),
                    }
                })
                .collect();
            (raws, Some(m.clone()))
        }
        ManeuverSource::Sampled(s) => (differentiate_samples(s, input.dt)?, None),
    };
    let mut tb = empty_tables(n, input.t0(), input.dt, analytic);
    for (i, raw) in raws.iter().enumerate() {
        let t = input.time(i);
        let pt = PathPoint::new(af, t, raw)?;
        let d = &raw.pos;
        tb.x_g.push(d[0][0]);
        tb.y_g.push(d[0][1]);
        tb.z_g.push(d[0][2]);
        tb.x_dot.push(d[1][0]);
        tb.y_dot.push(d[1][1]);
        tb.z_dot.push(d[1][2]);
        tb.x_ddot.push(d[2][0]);
        tb.y_ddot.push(d[2][1]);
        tb.z_ddot.push(d[2][2]);
        tb.x_dddot.push(d[3][0]);
        tb.y_dddot.push(d[3][1]);
        tb.z_dddot.push(d[3][2]);
        tb.x_snap.push(d[4][0]);
        tb.y_snap.push(d[4][1]);
        tb.z_snap.push(d[4][2]);
        tb.phi.push(raw.roll[0]);
        tb.phi_dot.push(raw.roll[1]);
        tb.phi_ddot.push(raw.roll[2]);
        tb.h.push(pt.h);
        tb.rho.push(pt.rho);
        tb.v.push(pt.v.v);
        tb.qbar.push(pt.qbar.v);
        tb.theta_w.push(pt.fp.theta_w.v);
        tb.theta_w_ddot.push(pt.fp.theta_w.d2);
        tb.psi_w.push(pt.fp.psi_w.v);
        tb.psi_w_ddot.push(pt.fp.psi_w.d2);
        let temp = atmosphere::temperature(pt.h)?;
        let a = atmosphere::speed_of_sound(pt.h)?;
        tb.temperature.push(temp);
        tb.sound_speed.push(a);
        tb.mach.push(pt.v.v / a);
        if tb.analytic.is_some() {
            tb.v_dot.push(pt.v.d1);
            tb.v_ddot.push(pt.v.d2);
            tb.theta_w_dot.push(pt.fp.theta_w.d1);
            tb.psi_w_dot.push(pt.fp.psi_w.d1);
        } else {
            let [_, psd, thd] = flight_path_rates(d[1], d[2]);
            tb.theta_w_dot.push(thd);
            tb.psi_w_dot.push(psd);
        }
    }
    if tb.analytic.is_none() {
        let v = UniformSeries::new(input.dt, tb.v.clone())?;
        tb.v_dot = v.derivative(1)?.values;
        tb.v_ddot = v.derivative(2)?.values;
    }
    unwrap_angles(&mut tb.psi_w);
    tb.alpha_equb = equilibrium_aoa(&af.params, tb.qbar[0])?;
    Ok(tb)
}

fn differentiate_samples(s: &SampledManeuver, dt: f64) -> Result<Vec<RawKinematics>> {
    let diff = |v: &[f64], order: u8| -> Result<Vec<f64>> {
        Ok(UniformSeries::new(dt, v.to_vec())?.derivative(order)?.values)
    };
    let mut cols: Vec<[Vec<f64>; 5]> = Vec::with_capacity(3);
    for v in [&s.x_g, &s.y_g, &s.z_g] {
        let jerk = diff(v, 3)?;
        let snap = diff(&jerk, 1)?;
        cols.push([v.clone(), diff(v, 1)?, diff(v, 2)?, jerk, snap]);
    }
    let mut phi = s.phi.clone();
    unwrap_angles(&mut phi);
    let phi_d = diff(&phi, 1)?;
    let phi_dd = diff(&phi, 2)?;
    Ok((0..s.x_g.len())
        .map(|i| RawKinematics {
            pos: std::array::from_fn(|k| std::array::from_fn(|c| cols[c][k][i])),
            roll: [phi[i], phi_d[i], phi_dd[i]],
        })
        .collect())
}
