//! Browser entry points. Each returns a JSON string; failures come back as
//! `{"error": "..."}` so the page needs no exception handling.

use std::sync::Arc;

use invsim::airframe::Airframe;
use invsim::atmosphere;
use invsim::solver::{orbit_detachment, run, ControlSeries, RunSummary};
use invsim::trajectory::{DoubleRoll, ManeuverInput};
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

/// Points per plotted channel.
const MAX_POINTS: usize = 1500;

fn to_json<T: Serialize>(r: invsim::Result<T>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e.to_string()),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn decimate(series: &ControlSeries, f: impl Fn(&invsim::solver::ControlRecord) -> f64) -> Vec<f64> {
    let stride = series.len().div_ceil(MAX_POINTS).max(1);
    series.records.iter().step_by(stride).map(f).collect()
}

#[derive(Serialize)]
struct Profile {
    altitude_m: Vec<f64>,
    density_kg_m3: Vec<f64>,
    temperature_k: Vec<f64>,
    speed_of_sound_m_s: Vec<f64>,
}

/// Standard atmosphere from `h0` to `h1` (m) every `step` m.
#[wasm_bindgen]
pub fn atmosphere_profile(h0: f64, h1: f64, step: f64) -> String {
    to_json(atmosphere::table(h0, h1, step).map(|rows| Profile {
        altitude_m: rows.iter().map(|r| r.altitude_m).collect(),
        density_kg_m3: rows.iter().map(|r| r.density_kg_m3).collect(),
        temperature_k: rows.iter().map(|r| r.temperature_k).collect(),
        speed_of_sound_m_s: rows.iter().map(|r| r.speed_of_sound_m_s).collect(),
    }))
}

#[derive(Serialize)]
struct DoubleRollResult {
    t: Vec<f64>,
    thrust_n: Vec<f64>,
    aileron_deg: Vec<f64>,
    elevator_deg: Vec<f64>,
    rudder_deg: Vec<f64>,
    alpha_deg: Vec<f64>,
    beta_deg: Vec<f64>,
    theta_deg: Vec<f64>,
    psi_deg: Vec<f64>,
    summary: RunSummary,
    warnings: Vec<String>,
}

/// Controls for a Mirage III double roll at the given speed (m/s), height
/// (m), duration (s) and step (s).
#[wasm_bindgen]
pub fn double_roll(speed: f64, height: f64, duration: f64, dt: f64) -> String {
    let result = (|| {
        let af = Airframe::mirage3();
        let input = ManeuverInput::analytic(Arc::new(DoubleRoll { speed, height, duration }), dt)?;
        let s = run(&input, &af)?;
        let deg = |f: fn(&invsim::solver::ControlRecord) -> f64| decimate(&s, |r| f(r).to_degrees());
        Ok(DoubleRollResult {
            t: decimate(&s, |r| r.t),
            thrust_n: decimate(&s, |r| r.thrust),
            aileron_deg: deg(|r| r.delta_l),
            elevator_deg: deg(|r| r.delta_m),
            rudder_deg: deg(|r| r.delta_n),
            alpha_deg: deg(|r| r.alpha_conventional),
            beta_deg: deg(|r| r.beta),
            theta_deg: deg(|r| r.theta),
            psi_deg: deg(|r| r.psi),
            summary: s.summary(),
            warnings: s.warnings.clone(),
        })
    })();
    to_json(result)
}

#[derive(Serialize)]
struct Orbit {
    dt: f64,
    gap_deg: f64,
    psi_deg: Vec<f64>,
    theta_deg: Vec<f64>,
}

/// Pitch/yaw orbits of the standard Mirage double roll for each step in
/// `dts`, with the gap between the two loops.
#[wasm_bindgen]
pub fn orbit_convergence(dts: Vec<f64>) -> String {
    let af = Airframe::mirage3();
    let result: invsim::Result<Vec<Orbit>> = dts
        .into_iter()
        .map(|dt| {
            let s = run(&ManeuverInput::mirage_double_roll(dt)?, &af)?;
            Ok(Orbit {
                dt,
                gap_deg: orbit_detachment(&s)?,
                psi_deg: decimate(&s, |r| r.psi.to_degrees()),
                theta_deg: decimate(&s, |r| r.theta.to_degrees()),
            })
        })
        .collect();
    to_json(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn profile_has_matching_columns() {
        let v: Value = serde_json::from_str(&atmosphere_profile(0.0, 20000.0, 500.0)).unwrap();
        assert_eq!(v["altitude_m"].as_array().unwrap().len(), 41);
        assert_eq!(v["density_kg_m3"].as_array().unwrap().len(), 41);
    }

    #[test]
    fn errors_are_reported_as_json() {
        let v: Value = serde_json::from_str(&atmosphere_profile(0.0, 30000.0, 500.0)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("altitude"));
        let v: Value = serde_json::from_str(&double_roll(150.0, 5000.0, 30.0, -1.0)).unwrap();
        assert!(v.get("error").is_some());
    }

    #[test]
    fn double_roll_is_decimated() {
        let v: Value = serde_json::from_str(&double_roll(150.0, 5000.0, 30.0, 0.005)).unwrap();
        let n = v["t"].as_array().unwrap().len();
        assert!(n <= MAX_POINTS && n > 1000);
        assert_eq!(v["rudder_deg"].as_array().unwrap().len(), n);
        assert_eq!(v["summary"]["stations"], 6001);
    }

    #[test]
    fn orbit_gap_shrinks() {
        let v: Value = serde_json::from_str(&orbit_convergence(vec![0.02, 0.01])).unwrap();
        let gaps: Vec<f64> = v.as_array().unwrap().iter().map(|o| o["gap_deg"].as_f64().unwrap()).collect();
        assert!(gaps[0] > gaps[1]);
    }
}
