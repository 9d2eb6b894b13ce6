//! International Standard Atmosphere up to 20 km geometric altitude.
//!
//! Linear temperature lapse in the troposphere, isothermal layer above
//! 11 km. Gravity is constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numdiff::Scalar;

pub const G: f64 = 9.81;
/// Specific gas constant of air, J/(kg K).
pub const R_AIR: f64 = 287.0;
pub const GAMMA: f64 = 1.4;
/// Temperature lapse rate in the troposphere, K/m.
pub const LAPSE: f64 = 0.0065;
pub const T_SEA_LEVEL: f64 = 288.15;
pub const RHO_SEA_LEVEL: f64 = 1.225;
pub const T_TROPOPAUSE: f64 = 216.65;
pub const H_TROPOPAUSE: f64 = 11_000.0;
pub const H_CEILING: f64 = 20_000.0;
/// Density at the base of the isothermal layer.
pub const RHO_TROPOPAUSE: f64 = 0.3636309;
pub const EARTH_RADIUS: f64 = 6_371_000.0;

const RANGE: &str = "[0, 20000] m";

/// Exponent of the troposphere density law, g/(R lapse) - 1.
pub fn troposphere_exponent() -> f64 {
    G / (R_AIR * LAPSE) - 1.0
}

/// Decay rate of density with height in the isothermal layer, 1/m.
pub fn tropopause_decay() -> f64 {
    G / (T_TROPOPAUSE * R_AIR)
}

fn check(h: f64) -> Result<()> {
    if (0.0..=H_CEILING).contains(&h) {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity: "altitude",
            value: h,
            range: RANGE,
        })
    }
}

/// Air density in kg/m^3 at geometric altitude `h` in metres.
pub fn density(h: f64) -> Result<f64> {
    density_of(h)
}

/// Density for any scalar type, so that altitude jets yield density jets.
pub fn density_of<S: Scalar>(h: S) -> Result<S> {
    check(h.value())?;
    Ok(if h.value() < H_TROPOPAUSE {
        troposphere_law(h)
    } else {
        tropopause_law(h)
    })
}

fn troposphere_law<S: Scalar>(h: S) -> S {
    ((h * (-LAPSE / T_SEA_LEVEL)) + 1.0).powf(troposphere_exponent()) * RHO_SEA_LEVEL
}

/// The isothermal-layer law evaluated at any altitude, without range checks.
/// Extrapolating it to sea level is a useful benchmark of the constants.
pub fn tropopause_law<S: Scalar>(h: S) -> S {
    ((h - H_TROPOPAUSE) * -tropopause_decay()).exp() * RHO_TROPOPAUSE
}

/// Absolute temperature in K.
pub fn temperature(h: f64) -> Result<f64> {
    check(h)?;
    Ok(if h < H_TROPOPAUSE {
        T_SEA_LEVEL - LAPSE * h
    } else {
        T_TROPOPAUSE
    })
}

pub fn speed_of_sound(h: f64) -> Result<f64> {
    Ok((GAMMA * R_AIR * temperature(h)?).sqrt())
}

pub fn mach(speed: f64, h: f64) -> Result<f64> {
    if speed < 0.0 {
        return Err(Error::Domain {
            quantity: "speed",
            value: speed,
            range: "[0, inf)",
        });
    }
    Ok(speed / speed_of_sound(h)?)
}

/// Static pressure from the ideal gas law, Pa.
pub fn pressure(h: f64) -> Result<f64> {
    Ok(density(h)? * R_AIR * temperature(h)?)
}

pub fn geopotential_of_geometric(h: f64) -> Result<f64> {
    check(h)?;
    Ok(EARTH_RADIUS * h / (EARTH_RADIUS + h))
}

pub fn geometric_of_geopotential(hp: f64) -> Result<f64> {
    check(hp)?;
    Ok(EARTH_RADIUS * hp / (EARTH_RADIUS - hp))
}

/// Symmetric percentage deviation between two altitudes.
pub fn percent_deviation(h: f64, hp: f64) -> f64 {
    if h + hp == 0.0 {
        return 0.0;
    }
    200.0 * (h - hp).abs() / (h + hp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtmosphereSample {
    pub altitude_m: f64,
    pub density_kg_m3: f64,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    pub speed_of_sound_m_s: f64,
}

impl AtmosphereSample {
    pub fn at(h: f64) -> Result<Self> {
        Ok(Self {
            altitude_m: h,
            density_kg_m3: density(h)?,
            temperature_k: temperature(h)?,
            speed_of_sound_m_s: speed_of_sound(h)?,
        })
    }
}

/// Samples from `h0` to `h1` inclusive.
pub fn table(h0: f64, h1: f64, step: f64) -> Result<Vec<AtmosphereSample>> {
    if !(step > 0.0) {
        return Err(Error::Config(format!("table step must be positive, got {step}")));
    }
    if h1 < h0 {
        return Err(Error::Config(format!("table end {h1} is below its start {h0}")));
    }
    let n = ((h1 - h0) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| AtmosphereSample::at(h0 + i as f64 * step)).collect()
}
