//! Forward six-degree-of-freedom simulation under prescribed controls, used
//! to replay an inverse solution and measure how closely it flies the target.

use serde::Serialize;

use crate::airframe::{force_coefficients_of, moment_coefficients_forward, Airframe, Deflections, MomentArgs};
use crate::atmosphere;
use crate::dynamics::{
    alpha_dot, beta_dot, check_wind, euler_rates_from_body, flight_path_from_attitude, inertial_velocity,
    rotational_accels_from_moments, speed_dot, EulerAngles, Flight, WindState,
};
use crate::error::{Error, Result};
use crate::solver::{initialize, rk4_step, ControlSeries};
use crate::trajectory::{preprocess, ManeuverInput};

/// Largest relative position error, against path length, that passes.
pub const POSITION_TOLERANCE_FRACTION: f64 = 0.0015;
pub const ROLL_TOLERANCE_DEG: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ForwardState {
    pub v: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub x_g: f64,
    pub y_g: f64,
    pub z_g: f64,
}

impl ForwardState {
    pub fn to_array(&self) -> [f64; 12] {
        [
            self.v, self.alpha, self.beta, self.phi, self.theta, self.psi, self.p, self.q, self.r, self.x_g, self.y_g,
            self.z_g,
        ]
    }

    pub fn from_array(a: &[f64; 12]) -> Self {
        Self {
            v: a[0],
            alpha: a[1],
            beta: a[2],
            phi: a[3],
            theta: a[4],
            psi: a[5],
            p: a[6],
            q: a[7],
            r: a[8],
            x_g: a[9],
            y_g: a[10],
            z_g: a[11],
        }
    }
}

/// Thrust and deflections applied at an instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInput {
    pub thrust: f64,
    pub deflections: Deflections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Hold {
    #[default]
    Linear,
    ZeroOrder,
}

/// Controls sampled on a uniform grid, evaluated between samples by linear
/// interpolation or zero-order hold.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<ControlInput>,
    pub hold: Hold,
}

impl ControlSchedule {
    pub fn from_series(s: &ControlSeries, hold: Hold) -> Result<Self> {
        if s.records.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: s.records.len(),
            });
        }
        Ok(Self {
            t0: s.records[0].t,
            dt: s.dt,
            samples: s
                .records
                .iter()
                .map(|r| ControlInput {
                    thrust: r.thrust,
                    deflections: Deflections {
                        dl: r.delta_l,
                        dm: r.delta_m,
                        dn: r.delta_n,
                    },
                })
                .collect(),
            hold,
        })
    }

    pub fn duration(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn at(&self, t: f64) -> ControlInput {
        let last = self.samples.len() - 1;
        let s = ((t - self.t0) / self.dt).clamp(0.0, last as f64);
        let i = (s.floor() as usize).min(last - 1);
        let w = s - i as f64;
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        match self.hold {
            // within rounding of a station, use the station itself
            Hold::ZeroOrder => {
                if w > 1.0 - 1e-9 {
                    *b
                } else {
                    *a
                }
            }
            Hold::Linear => {
                let l = |x: f64, y: f64| x + w * (y - x);
                ControlInput {
                    thrust: l(a.thrust, b.thrust),
                    deflections: Deflections {
                        dl: l(a.deflections.dl, b.deflections.dl),
                        dm: l(a.deflections.dm, b.deflections.dm),
                        dn: l(a.deflections.dn, b.deflections.dn),
                    },
                }
            }
        }
    }
}

/// Environment held fixed during a forward run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardModel<'a> {
    pub airframe: &'a Airframe,
    pub alpha_equb: f64,
}

impl ForwardModel<'_> {
    pub fn derivative(&self, x: &ForwardState, u: &ControlInput) -> Result<[f64; 12]> {
        let af = self.airframe;
        let p = &af.params;
        let wind = WindState {
            v: x.v,
            alpha: x.alpha,
            beta: x.beta,
        };
        check_wind(af, &wind)?;
        let rho = atmosphere::density(p.h_ini - x.z_g)?;
        let qbar = 0.5 * rho * x.v * x.v;
        let k = force_coefficients_of(p, x.alpha, x.beta, self.alpha_equb);
        let f = Flight {
            wind,
            phi: x.phi,
            theta: x.theta,
            qbar,
        };
        let pqr = [x.p, x.q, x.r];
        let vdot = speed_dot(af, &f, &k, u.thrust);
        let ad = alpha_dot(af, &f, &k, u.thrust, pqr);
        let bd = beta_dot(af, &f, &k, u.thrust, pqr);
        let args = MomentArgs {
            alpha: x.alpha,
            beta: x.beta,
            p: x.p,
            q: x.q,
            r: x.r,
            v: x.v,
        };
        let [cl, cm, cn] = moment_coefficients_forward(af, &args, &u.deflections)?;
        let qs = qbar * p.s;
        let lmn = [qs * p.b * cl, qs * p.c * cm, qs * p.b * cn];
        let w = rotational_accels_from_moments(af, pqr, lmn);
        let e = EulerAngles {
            phi: x.phi,
            theta: x.theta,
            psi: x.psi,
        };
        let [phid, thd, psd] = euler_rates_from_body(af, &e, pqr)?;
        let vel = inertial_velocity(x.v, &flight_path_from_attitude(&e, &wind));
        Ok([vdot, ad, bd, phid, thd, psd, w[0], w[1], w[2], vel[0], vel[1], vel[2]])
    }

    /// One Runge-Kutta step under the scheduled controls.
    pub fn step(&self, x: &ForwardState, t: f64, dt: f64, controls: &ControlSchedule) -> Result<ForwardState> {
        let y = rk4_step(t, &x.to_array(), dt, |ts, ya, stage| {
            self.derivative(&ForwardState::from_array(ya), &controls.at(ts))
                .map_err(|e| Error::Integration {
                    t: ts,
                    stage,
                    source: Box::new(e),
                })
        })?;
        Ok(ForwardState::from_array(&y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub max_pos_dev_m: f64,
    pub rms_pos_dev_m: f64,
    pub max_roll_dev_deg: f64,
    pub max_speed_dev_m_s: f64,
    pub path_length_m: f64,
    pub pos_tolerance_m: f64,
    pub roll_tolerance_deg: f64,
    pub pass: bool,
    /// Position deviation at each station.
    #[serde(skip)]
    pub pos_dev_history: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<ForwardState>,
}

/// Replays `controls` from the inverse solution's initial state and compares
/// the flown trajectory and roll with the maneuver.
pub fn round_trip(input: &ManeuverInput, controls: &ControlSeries, af: &Airframe) -> Result<RoundTripReport> {
    round_trip_with(input, controls, af, Hold::Linear)
}

pub fn round_trip_with(input: &ManeuverInput, controls: &ControlSeries, af: &Airframe, hold: Hold) -> Result<RoundTripReport> {
    let n = input.stations();
    if controls.len() != n || (controls.dt - input.dt).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "controls cover {} stations at {} s but the maneuver has {n} at {} s",
            controls.len(),
            controls.dt,
            input.dt
        )));
    }
    let tables = preprocess(input, af)?;
    let schedule = ControlSchedule::from_series(controls, hold)?;
    let model = ForwardModel {
        airframe: af,
        alpha_equb: tables.alpha_equb,
    };
    let y0 = initialize(af, &tables)?;
    let (pos0, phi0) = input.target(0);
    let mut x = ForwardState {
        v: tables.v[0],
        alpha: y0.alpha,
        beta: y0.beta,
        phi: phi0,
        theta: y0.theta,
        psi: y0.psi,
        p: y0.p,
        q: y0.q,
        r: y0.r,
        x_g: pos0[0],
        y_g: pos0[1],
        z_g: pos0[2],
    };
    let mut states = Vec::with_capacity(n);
    let mut history = Vec::with_capacity(n);
    let (mut max_roll, mut max_speed, mut sum2): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..n {
        if i > 0 {
            x = model.step(&x, input.time(i - 1), input.dt, &schedule)?;
        }
        let (pos, phi) = input.target(i);
        let d = ((x.x_g - pos[0]).powi(2) + (x.y_g - pos[1]).powi(2) + (x.z_g - pos[2]).powi(2)).sqrt();
        history.push(d);
        sum2 += d * d;
        max_roll = max_roll.max((x.phi - phi).abs());
        max_speed = max_speed.max((x.v - tables.v[i]).abs());
        states.push(x);
    }
    let path_length = input.path_length();
    let max_pos = history.iter().cloned().fold(0.0, f64::max);
    let pos_tol = POSITION_TOLERANCE_FRACTION * path_length;
    Ok(RoundTripReport {
        max_pos_dev_m: max_pos,
        rms_pos_dev_m: (sum2 / n as f64).sqrt(),
        max_roll_dev_deg: max_roll.to_degrees(),
        max_speed_dev_m_s: max_speed,
        path_length_m: path_length,
        pos_tolerance_m: pos_tol,
        roll_tolerance_deg: ROLL_TOLERANCE_DEG,
        pass: max_pos < pos_tol && max_roll.to_degrees() < ROLL_TOLERANCE_DEG,
        pos_dev_history: history,
        states,
    })
}
