//! Inverse simulation: initialization at equilibrium and the fourth-order
//! Runge-Kutta loop that recovers thrust and control deflections.
//!
//! Eight flight variables are integrated (thrust, wind angles, pitch, yaw and
//! body rates) together with the rates of the wind angles, pitch and yaw.
//! Those second derivatives come from differentiating, twice in time, the
//! three wind-axes force balances and the two flight-path relations, which
//! gives a 5x5 linear system at every stage.

use nalgebra::{SMatrix, SVector};
use serde::Serialize;

use crate::airframe::{deflections_for_moments, force_coefficients_of, Airframe, Deflections, MomentArgs};
use crate::dynamics::{
    alpha_dot, beta_dot, body_accels_from_euler, body_rates_from_euler, check_wind, euler_rates_from_flightpath,
    flightpath_residuals, force_balance_residuals, moments_from_auxiliary, thrust_explicit,
    auxiliary_moments_from_accels, EulerAngles, Flight, FlightPathAngles, PathCoupling, WindState,
};
use crate::error::{Error, Result};
use crate::numdiff::Jet2;
use crate::trajectory::{preprocess, KinematicTables, ManeuverInput, PathPoint};

/// Above this step the solution develops spurious oscillations.
pub const DT_WARNING: f64 = 0.01;

/// Classic fourth-order Runge-Kutta step with weights 1-2-2-1.
pub fn rk4_step<const N: usize, E>(
    t: f64,
    y: &[f64; N],
    dt: f64,
    mut f: impl FnMut(f64, &[f64; N], usize) -> std::result::Result<[f64; N], E>,
) -> std::result::Result<[f64; N], E> {
    let axpy = |a: f64, k: &[f64; N]| -> [f64; N] { std::array::from_fn(|i| y[i] + a * k[i]) };
    let k1 = f(t, y, 1)?;
    let k2 = f(t + 0.5 * dt, &axpy(0.5 * dt, &k1), 2)?;
    let k3 = f(t + 0.5 * dt, &axpy(0.5 * dt, &k2), 3)?;
    let k4 = f(t + dt, &axpy(dt, &k3), 4)?;
    Ok(std::array::from_fn(|i| {
        y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    }))
}

/// Integrated variables plus the carried first derivatives of the wind
/// angles, yaw and pitch.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SimState {
    pub thrust: f64,
    pub alpha: f64,
    pub beta: f64,
    pub psi: f64,
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub alpha_dot: f64,
    pub beta_dot: f64,
    pub psi_dot: f64,
    pub theta_dot: f64,
}

impl SimState {
    pub fn to_array(&self) -> [f64; 12] {
        [
            self.thrust,
            self.alpha,
            self.beta,
            self.psi,
            self.theta,
            self.p,
            self.q,
            self.r,
            self.alpha_dot,
            self.beta_dot,
            self.psi_dot,
            self.theta_dot,
        ]
    }

    pub fn from_array(a: &[f64; 12]) -> Self {
        Self {
            thrust: a[0],
            alpha: a[1],
            beta: a[2],
            psi: a[3],
            theta: a[4],
            p: a[5],
            q: a[6],
            r: a[7],
            alpha_dot: a[8],
            beta_dot: a[9],
            psi_dot: a[10],
            theta_dot: a[11],
        }
    }

    pub fn pqr(&self) -> [f64; 3] {
        [self.p, self.q, self.r]
    }
}

/// Second derivatives and related quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageEval {
    pub thrust_dot: f64,
    pub alpha_ddot: f64,
    pub beta_ddot: f64,
    pub psi_ddot: f64,
    pub theta_ddot: f64,
    /// Time derivatives of p, q, r.
    pub body_accels: [f64; 3],
}

impl StageEval {
    fn derivative(&self, y: &SimState) -> [f64; 12] {
        [
            self.thrust_dot,
            y.alpha_dot,
            y.beta_dot,
            y.psi_dot,
            y.theta_dot,
            self.body_accels[0],
            self.body_accels[1],
            self.body_accels[2],
            self.alpha_ddot,
            self.beta_ddot,
            self.psi_ddot,
            self.theta_ddot,
        ]
    }
}

fn flat(j: Jet2) -> Jet2 {
    Jet2::constant(j.v)
}

/// Copy of the trajectory point with every time derivative removed, used
/// when differentiating with respect to the unknowns only.
fn frozen(pt: &PathPoint) -> PathPoint {
    PathPoint {
        phi: flat(pt.phi),
        v: flat(pt.v),
        fp: FlightPathAngles {
            theta_w: flat(pt.fp.theta_w),
            psi_w: flat(pt.fp.psi_w),
        },
        qbar: flat(pt.qbar),
        accel: pt.accel.map(flat),
        ..*pt
    }
}

/// Force balances and flight-path relations in terms of the unknowns
/// (alpha, beta, theta, psi, thrust).
fn constraint_residuals(af: &Airframe, alpha_equb: f64, pt: &PathPoint, z: &[Jet2; 5]) -> [Jet2; 5] {
    let e = EulerAngles {
        phi: pt.phi,
        theta: z[2],
        psi: z[3],
    };
    let w = WindState {
        v: pt.v,
        alpha: z[0],
        beta: z[1],
    };
    let k = force_coefficients_of(&af.params, z[0], z[1], alpha_equb);
    let fb = force_balance_residuals(af, &e, &w, pt.qbar, &k, z[4], pt.accel);
    let fr = flightpath_residuals(&e, &w, &pt.fp);
    [fr[0], fr[1], fb[0], fb[1], fb[2]]
}

fn flight_jets(pt: &PathPoint, alpha: Jet2, beta: Jet2, theta: Jet2) -> Flight<Jet2> {
    Flight {
        wind: WindState { v: pt.v, alpha, beta },
        phi: pt.phi,
        theta,
        qbar: pt.qbar,
    }
}

/// Thrust rate and second derivatives of the wind angles, pitch and yaw
/// consistent with the prescribed trajectory.
pub fn evaluate(af: &Airframe, tables: &KinematicTables, pt: &PathPoint, y: &SimState) -> Result<StageEval> {
    check_wind(
        af,
        &WindState {
            v: pt.v.v,
            alpha: y.alpha,
            beta: y.beta,
        },
    )?;
    let a_eq = tables.alpha_equb;
    let alpha = Jet2::new(y.alpha, y.alpha_dot, 0.0);
    let beta = Jet2::new(y.beta, y.beta_dot, 0.0);
    let theta = Jet2::new(y.theta, y.theta_dot, 0.0);
    let psi = Jet2::new(y.psi, y.psi_dot, 0.0);

    let k = force_coefficients_of(&af.params, alpha, beta, a_eq);
    let vdot = Jet2::new(pt.v.d1, pt.v.d2, 0.0);
    let thrust_jet = thrust_explicit(af, &flight_jets(pt, alpha, beta, theta), &k, vdot);
    let thrust = Jet2::new(y.thrust, thrust_jet.d1, 0.0);

    let z = [alpha, beta, theta, psi, thrust];
    let rhs = constraint_residuals(af, a_eq, pt, &z);
    let still = frozen(pt);
    let zc = z.map(flat);
    let mut jac = SMatrix::<f64, 5, 5>::zeros();
    for j in 0..5 {
        let mut zj = zc;
        zj[j] = Jet2::variable(zj[j].v);
        let col = constraint_residuals(af, a_eq, &still, &zj);
        for i in 0..5 {
            jac[(i, j)] = col[i].d1;
        }
    }
    let b = SVector::<f64, 5>::from_fn(|i, _| -rhs[i].d2);
    let zdd = jac
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular("wind-angle acceleration system is singular".into()))?;
    if zdd.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("wind-angle acceleration system is singular".into()));
    }

    let e = EulerAngles {
        phi: pt.phi.v,
        theta: y.theta,
        psi: y.psi,
    };
    let body_accels = body_accels_from_euler(
        &e,
        [pt.phi.d1, y.theta_dot, y.psi_dot],
        [pt.phi.d2, zdd[2], zdd[3]],
    );
    Ok(StageEval {
        thrust_dot: thrust_jet.d1,
        alpha_ddot: zdd[0],
        beta_ddot: zdd[1],
        theta_ddot: zdd[2],
        psi_ddot: zdd[3],
        body_accels,
    })
}

fn tag(t: f64, stage: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Integration {
        t,
        stage,
        source: Box::new(e),
    }
}

/// Rates of the wind angles from the momentum balance and of pitch and yaw
/// from the flight-path relations, at an integrated state.
pub fn station_rates(af: &Airframe, tables: &KinematicTables, pt: &PathPoint, y: &SimState) -> Result<[f64; 4]> {
    let f = Flight {
        wind: WindState {
            v: pt.v.v,
            alpha: y.alpha,
            beta: y.beta,
        },
        phi: pt.phi.v,
        theta: y.theta,
        qbar: pt.qbar.v,
    };
    check_wind(af, &f.wind)?;
    let k = force_coefficients_of(&af.params, y.alpha, y.beta, tables.alpha_equb);
    let ad = alpha_dot(af, &f, &k, y.thrust, y.pqr());
    let bd = beta_dot(af, &f, &k, y.thrust, y.pqr());
    let c = PathCoupling {
        alpha: Jet2::new(y.alpha, ad, 0.0),
        beta: Jet2::new(y.beta, bd, 0.0),
        phi: pt.phi,
        fp: pt.fp,
    };
    let [thd, psd] = euler_rates_from_flightpath(af, &c, y.theta, y.psi)?;
    Ok([ad, bd, psd, thd])
}

/// Equilibrium state at the first station.
pub fn initialize(af: &Airframe, tables: &KinematicTables) -> Result<SimState> {
    let t = tables.time(0);
    let pt = tables.point(af, 0).map_err(tag(t, 0))?;
    let f = Flight {
        wind: WindState {
            v: pt.v.v,
            alpha: 0.0,
            beta: 0.0,
        },
        phi: pt.phi.v,
        theta: pt.fp.theta_w.v,
        qbar: pt.qbar.v,
    };
    check_wind(af, &f.wind).map_err(tag(t, 0))?;
    let k = force_coefficients_of(&af.params, 0.0, 0.0, tables.alpha_equb);
    let thrust = thrust_explicit(af, &f, &k, pt.v.d1);
    let c = PathCoupling {
        alpha: Jet2::constant(0.0),
        beta: Jet2::constant(0.0),
        phi: pt.phi,
        fp: pt.fp,
    };
    let (theta, psi) = (pt.fp.theta_w.v, pt.fp.psi_w.v);
    let [theta_dot, psi_dot] = euler_rates_from_flightpath(af, &c, theta, psi).map_err(tag(t, 0))?;
    let e = EulerAngles {
        phi: pt.phi.v,
        theta,
        psi,
    };
    let [p, q, r] = body_rates_from_euler(&e, [pt.phi.d1, theta_dot, psi_dot]);
    Ok(SimState {
        thrust,
        alpha: 0.0,
        beta: 0.0,
        psi,
        theta,
        p,
        q,
        r,
        alpha_dot: 0.0,
        beta_dot: 0.0,
        psi_dot,
        theta_dot,
    })
}

/// Advances the state from station `n` to `n + 1`, then re-evaluates the
/// carried rates at the new station.
pub fn step(af: &Airframe, tables: &KinematicTables, y: &SimState, n: usize) -> Result<SimState> {
    let t = tables.time(n);
    let dt = tables.dt;
    let next = rk4_step(t, &y.to_array(), dt, |ts, ya, stage| {
        let s = SimState::from_array(ya);
        let pt = tables.point_at(af, ts).map_err(tag(ts, stage))?;
        let ev = evaluate(af, tables, &pt, &s).map_err(tag(ts, stage))?;
        Ok::<_, Error>(ev.derivative(&s))
    })?;
    let mut s = SimState::from_array(&next);
    let t1 = tables.time(n + 1);
    let pt = tables.point(af, n + 1).map_err(tag(t1, 0))?;
    let [ad, bd, psd, thd] = station_rates(af, tables, &pt, &s).map_err(tag(t1, 0))?;
    s.alpha_dot = ad;
    s.beta_dot = bd;
    s.psi_dot = psd;
    s.theta_dot = thd;
    Ok(s)
}

/// One output row: controls plus diagnostics at a station.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ControlRecord {
    pub t: f64,
    pub thrust: f64,
    pub delta_l: f64,
    pub delta_m: f64,
    pub delta_n: f64,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_conventional: f64,
    pub theta: f64,
    pub psi: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub phi_ddot: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub cl: f64,
    pub cm: f64,
    pub cn: f64,
    pub res_eq33: f64,
    pub res_eq34: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub thrust_dot: f64,
    pub alpha_dot: f64,
    pub beta_dot: f64,
    pub theta_dot: f64,
    pub psi_dot: f64,
    pub alpha_ddot: f64,
    pub beta_ddot: f64,
    pub theta_ddot: f64,
    pub psi_ddot: f64,
}

/// Moments, coefficients and deflections that realize the state's angular
/// accelerations at station `n`.
pub fn extract_controls(af: &Airframe, tables: &KinematicTables, y: &SimState, n: usize) -> Result<ControlRecord> {
    let t = tables.time(n);
    let pt = tables.point(af, n)?;
    let ev = evaluate(af, tables, &pt, y)?;
    let aux = auxiliary_moments_from_accels(af, ev.body_accels);
    let [l, m, nn] = moments_from_auxiliary(af, y.pqr(), aux);
    let p = &af.params;
    let qs = pt.qbar.v * p.s;
    let coef = [l / (qs * p.b), m / (qs * p.c), nn / (qs * p.b)];
    let args = MomentArgs {
        alpha: y.alpha,
        beta: y.beta,
        p: y.p,
        q: y.q,
        r: y.r,
        v: pt.v.v,
    };
    let Deflections { dl, dm, dn } = deflections_for_moments(af, &args, coef)?;
    let e = EulerAngles {
        phi: pt.phi.v,
        theta: y.theta,
        psi: y.psi,
    };
    let w = WindState {
        v: pt.v.v,
        alpha: y.alpha,
        beta: y.beta,
    };
    let fp = FlightPathAngles {
        theta_w: pt.fp.theta_w.v,
        psi_w: pt.fp.psi_w.v,
    };
    let [res_eq33, res_eq34] = flightpath_residuals(&e, &w, &fp);
    Ok(ControlRecord {
        t,
        thrust: y.thrust,
        delta_l: dl,
        delta_m: dm,
        delta_n: dn,
        alpha: y.alpha,
        beta: y.beta,
        alpha_conventional: y.alpha + tables.alpha_equb,
        theta: y.theta,
        psi: y.psi,
        phi: pt.phi.v,
        phi_dot: pt.phi.d1,
        phi_ddot: pt.phi.d2,
        l,
        m,
        n: nn,
        cl: coef[0],
        cm: coef[1],
        cn: coef[2],
        res_eq33,
        res_eq34,
        p: y.p,
        q: y.q,
        r: y.r,
        thrust_dot: ev.thrust_dot,
        alpha_dot: y.alpha_dot,
        beta_dot: y.beta_dot,
        theta_dot: y.theta_dot,
        psi_dot: y.psi_dot,
        alpha_ddot: ev.alpha_ddot,
        beta_ddot: ev.beta_ddot,
        theta_ddot: ev.theta_ddot,
        psi_ddot: ev.psi_ddot,
    })
}

/// Controls and diagnostics at every station.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSeries {
    pub dt: f64,
    pub alpha_equb: f64,
    pub records: Vec<ControlRecord>,
    pub warnings: Vec<String>,
}

impl ControlSeries {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn column(&self, f: impl Fn(&ControlRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }

    pub fn summary(&self) -> RunSummary {
        RunSummary::new(self)
    }
}

/// Runs pre-processing, initialization and the time loop.
pub fn run(input: &ManeuverInput, af: &Airframe) -> Result<ControlSeries> {
    let tables = preprocess(input, af)?;
    run_tables(&tables, af)
}

pub fn run_tables(tables: &KinematicTables, af: &Airframe) -> Result<ControlSeries> {
    let mut warnings = Vec::new();
    if tables.dt > DT_WARNING {
        warnings.push(format!(
            "time step {} s exceeds {DT_WARNING} s; expect spurious oscillations in the controls",
            tables.dt
        ));
    }
    let mut y = initialize(af, tables)?;
    let mut records = Vec::with_capacity(tables.len());
    records.push(extract_controls(af, tables, &y, 0).map_err(tag(tables.time(0), 0))?);
    for n in 0..tables.len() - 1 {
        y = step(af, tables, &y, n)?;
        records.push(extract_controls(af, tables, &y, n + 1).map_err(tag(tables.time(n + 1), 0))?);
    }
    if records.iter().any(|r| r.thrust < 0.0) {
        warnings.push("thrust reversal: the maneuver needs negative thrust".into());
    }
    Ok(ControlSeries {
        dt: tables.dt,
        alpha_equb: tables.alpha_equb,
        records,
        warnings,
    })
}

/// An extremum of a series: time and value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub t: f64,
    pub value: f64,
}

/// Interior local maxima whose prominence exceeds `min_prominence`.
pub fn local_maxima(t: &[f64], v: &[f64], min_prominence: f64) -> Vec<Extremum> {
    let n = v.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if v[i] > v[i - 1] {
            // extend across a plateau
            let mut j = i;
            while j + 1 < n && v[j + 1] == v[i] {
                j += 1;
            }
            if j + 1 < n && v[j + 1] < v[i] {
                let left = v[..i].iter().rev().take_while(|&&x| x <= v[i]).fold(v[i], |a, &x| a.min(x));
                let right = v[j + 1..].iter().take_while(|&&x| x <= v[i]).fold(v[i], |a, &x| a.min(x));
                let base = left.max(right);
                if v[i] - base >= min_prominence {
                    out.push(Extremum { t: t[i], value: v[i] });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

pub fn local_minima(t: &[f64], v: &[f64], min_prominence: f64) -> Vec<Extremum> {
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    local_maxima(t, &neg, min_prominence)
        .into_iter()
        .map(|e| Extremum { t: e.t, value: -e.value })
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn argmax(t: &[f64], v: &[f64]) -> Extremum {
    let i = (0..v.len()).fold(0, |a, i| if v[i] > v[a] { i } else { a });
    Extremum { t: t[i], value: v[i] }
}

fn max_abs_deg(t: &[f64], v: &[f64]) -> Extremum {
    let a: Vec<f64> = v.iter().map(|x| x.abs().to_degrees()).collect();
    argmax(t, &a)
}

/// Extrema and means of a run; angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub stations: usize,
    pub dt: f64,
    pub alpha_equb_deg: f64,
    pub thrust_initial: f64,
    pub thrust_final: f64,
    pub thrust_max: Extremum,
    pub thrust_min: Extremum,
    pub thrust_local_maxima: Vec<Extremum>,
    pub thrust_local_minima: Vec<Extremum>,
    pub thrust_reversal: bool,
    pub max_abs_delta_l_deg: Extremum,
    pub max_abs_delta_m_deg: Extremum,
    pub max_abs_delta_n_deg: Extremum,
    pub mean_delta_l_deg: f64,
    pub mean_delta_m_deg: f64,
    pub mean_delta_n_deg: f64,
    pub alpha_conventional_min_deg: f64,
    pub alpha_conventional_max_deg: f64,
    pub beta_max_abs_deg: f64,
    /// Any surface beyond 60 deg, a plausibility limit that is flagged only.
    pub deflection_limit_exceeded: bool,
    pub max_flightpath_residual: f64,
}

impl RunSummary {
    pub fn new(s: &ControlSeries) -> Self {
        let t = s.column(|r| r.t);
        let thrust = s.column(|r| r.thrust);
        let dl = s.column(|r| r.delta_l);
        let dm = s.column(|r| r.delta_m);
        let dn = s.column(|r| r.delta_n);
        let ac = s.column(|r| r.alpha_conventional.to_degrees());
        let (tmin, tmax) = thrust.iter().fold((f64::MAX, f64::MIN), |a, &x| (a.0.min(x), a.1.max(x)));
        let prominence = 1e-3 * (tmax - tmin).max(1.0);
        let neg: Vec<f64> = thrust.iter().map(|x| -x).collect();
        let lowest = argmax(&t, &neg);
        let max_dl = max_abs_deg(&t, &dl);
        let max_dm = max_abs_deg(&t, &dm);
        let max_dn = max_abs_deg(&t, &dn);
        Self {
            stations: s.len(),
            dt: s.dt,
            alpha_equb_deg: s.alpha_equb.to_degrees(),
            thrust_initial: thrust[0],
            thrust_final: thrust[thrust.len() - 1],
            thrust_max: argmax(&t, &thrust),
            thrust_min: Extremum {
                t: lowest.t,
                value: -lowest.value,
            },
            thrust_local_maxima: local_maxima(&t, &thrust, prominence),
            thrust_local_minima: local_minima(&t, &thrust, prominence),
            thrust_reversal: tmin < 0.0,
            deflection_limit_exceeded: [max_dl, max_dm, max_dn].iter().any(|e| e.value > 60.0),
            max_abs_delta_l_deg: max_dl,
            max_abs_delta_m_deg: max_dm,
            max_abs_delta_n_deg: max_dn,
            mean_delta_l_deg: mean(&dl).to_degrees(),
            mean_delta_m_deg: mean(&dm).to_degrees(),
            mean_delta_n_deg: mean(&dn).to_degrees(),
            alpha_conventional_min_deg: ac.iter().cloned().fold(f64::MAX, f64::min),
            alpha_conventional_max_deg: ac.iter().cloned().fold(f64::MIN, f64::max),
            beta_max_abs_deg: s.records.iter().map(|r| r.beta.abs().to_degrees()).fold(0.0, f64::max),
            max_flightpath_residual: s
                .records
                .iter()
                .map(|r| r.res_eq33.abs().max(r.res_eq34.abs()))
                .fold(0.0, f64::max),
        }
    }
}

/// Largest separation, in degrees, between the pitch/yaw locus of the first
/// roll revolution and that of the second. Points are paired by roll angle:
/// each station of the first revolution is compared with the interpolated
/// state one full turn later. Requires a nondecreasing roll history.
pub fn orbit_detachment(series: &ControlSeries) -> Result<f64> {
    use std::f64::consts::TAU;
    let phi = series.column(|r| r.phi);
    if phi.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Data("roll history is not monotone".into()));
    }
    let last = phi[phi.len() - 1];
    if last - phi[0] < 2.0 * TAU - 1e-9 {
        return Err(Error::Data("roll history covers less than two revolutions".into()));
    }
    let mut worst: f64 = 0.0;
    for (i, r) in series.records.iter().enumerate() {
        let target = phi[i] + TAU;
        if target > last + 1e-12 {
            break;
        }
        // first station at or beyond the target roll angle
        let j = phi.partition_point(|&x| x < target).min(phi.len() - 1);
        let (a, b) = if j == 0 { (0, 0) } else { (j - 1, j) };
        let w = if phi[b] > phi[a] {
            ((target - phi[a]) / (phi[b] - phi[a])).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let ra = &series.records[a];
        let rb = &series.records[b];
        let psi = ra.psi + w * (rb.psi - ra.psi);
        let theta = ra.theta + w * (rb.theta - ra.theta);
        worst = worst.max((psi - r.psi).hypot(theta - r.theta));
    }
    Ok(worst.to_degrees())
}
