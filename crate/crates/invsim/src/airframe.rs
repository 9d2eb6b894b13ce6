//! Airframe constants, inertia quantities and aerodynamic coefficient models.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::atmosphere::G;
use crate::error::{Error, Result};
use crate::numdiff::Scalar;

/// The bundled Mirage III parameter set.
pub const MIRAGE3_JSON: &str = include_str!("../data/mirage3.json");

/// The thirty user constants describing an airframe. Derivatives multiplying
/// an angle or a deflection are per radian; those multiplying the
/// nondimensional rate groups are dimensionless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AirframeParams {
    /// Mass, kg.
    pub m: f64,
    /// Wing planform area, m^2.
    pub s: f64,
    /// Mean aerodynamic chord, m.
    pub c: f64,
    /// Wing span, m.
    pub b: f64,
    pub a_xx: f64,
    pub b_yy: f64,
    pub c_zz: f64,
    pub d_yz: f64,
    pub e_xz: f64,
    pub f_xy: f64,
    pub cl0: f64,
    pub cla: f64,
    pub cd0: f64,
    pub kcd: f64,
    pub ccb: f64,
    pub cm0: f64,
    pub cma: f64,
    pub cmq: f64,
    pub cmdm: f64,
    pub clb: f64,
    pub clp: f64,
    pub clr: f64,
    pub cldl: f64,
    pub cldn: f64,
    pub cnb: f64,
    pub cnp: f64,
    pub cnr: f64,
    pub cndl: f64,
    pub cndn: f64,
    /// Altitude of the inertial origin, m.
    pub h_ini: f64,
}

impl AirframeParams {
    pub fn mirage3() -> Self {
        serde_json::from_str(MIRAGE3_JSON).expect("bundled airframe parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("airframe JSON: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Inertia tensor with products of inertia entering negatively.
    pub fn inertia_matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.a_xx, -self.f_xy, -self.e_xz],
            [-self.f_xy, self.b_yy, -self.d_yz],
            [-self.e_xz, -self.d_yz, self.c_zz],
        ]
    }

    /// Aileron/rudder control-inversion determinant.
    pub fn lateral_control_det(&self) -> f64 {
        self.cldl * self.cndn - self.cldn * self.cndl
    }
}

/// Limits that keep the formulation away from its singularities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guards {
    /// Smallest admissible airspeed, m/s.
    pub v_min: f64,
    /// Closest approach of alpha, beta and flight-path angles to +-pi/2, rad.
    pub angle: f64,
    /// Smallest admissible determinant for 2x2 and control-inversion solves.
    pub det: f64,
    /// Largest pitch the forward simulator accepts, rad.
    pub forward_pitch: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            v_min: 1.0,
            angle: 1e-3,
            det: 1e-8,
            forward_pitch: 85f64.to_radians(),
        }
    }
}

impl Guards {
    pub fn check_angle(&self, name: &str, a: f64) -> Result<()> {
        if !a.is_finite() || (std::f64::consts::FRAC_PI_2 - a.abs()) < self.angle {
            return Err(Error::Singular(format!(
                "{name} = {a} rad is within {} rad of +-pi/2",
                self.angle
            )));
        }
        Ok(())
    }

    pub fn check_speed(&self, v: f64) -> Result<()> {
        if !(v > self.v_min) {
            return Err(Error::Singular(format!(
                "airspeed {v} m/s is not above the minimum {} m/s",
                self.v_min
            )));
        }
        Ok(())
    }
}

/// Determinant and cofactor products of the inertia tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaDerived {
    pub t0: f64,
    pub bc_d2: f64,
    pub fc_ed: f64,
    pub fd_eb: f64,
    pub ac_e2: f64,
    pub ad_ef: f64,
    pub ab_f2: f64,
}

impl InertiaDerived {
    pub fn new(p: &AirframeParams) -> Result<Self> {
        let (a, b, c, d, e, f) = (p.a_xx, p.b_yy, p.c_zz, p.d_yz, p.e_xz, p.f_xy);
        let t0 = a * b * c - a * d * d - b * e * e - c * f * f - 2.0 * d * e * f;
        let minor2 = a * b - f * f;
        if !(a > 0.0 && minor2 > 0.0 && t0 > 0.0) {
            return Err(Error::Config(format!(
                "inertia tensor is not positive definite (minors {a}, {minor2}, {t0})"
            )));
        }
        Ok(Self {
            t0,
            bc_d2: b * c - d * d,
            fc_ed: f * c + e * d,
            fd_eb: f * d + e * b,
            ac_e2: a * c - e * e,
            ad_ef: a * d + e * f,
            ab_f2: a * b - f * f,
        })
    }
}

/// Validated airframe: parameters, cached inertia quantities and guards.
#[derive(Debug, Clone, PartialEq)]
pub struct Airframe {
    pub params: AirframeParams,
    pub inertia: InertiaDerived,
    pub guards: Guards,
}

impl Airframe {
    pub fn new(params: AirframeParams) -> Result<Self> {
        Self::with_guards(params, Guards::default())
    }

    pub fn with_guards(params: AirframeParams, guards: Guards) -> Result<Self> {
        let p = &params;
        for (name, v) in [("m", p.m), ("s", p.s), ("c", p.c), ("b", p.b)] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if p.cla == 0.0 {
            return Err(Error::Config("cla must be nonzero".into()));
        }
        if p.cmdm.abs() < guards.det {
            return Err(Error::Config("cmdm must be nonzero".into()));
        }
        if p.lateral_control_det().abs() < guards.det {
            return Err(Error::Config(format!(
                "uncontrollable configuration: cldl*cndn - cldn*cndl = {}",
                p.lateral_control_det()
            )));
        }
        if guards.v_min < 0.1 {
            return Err(Error::Config(format!("v_min must be at least 0.1 m/s, got {}", guards.v_min)));
        }
        if !(guards.angle > 0.0 && guards.angle < 0.5) {
            return Err(Error::Config(format!("angle guard {} rad is out of bounds", guards.angle)));
        }
        let inertia = InertiaDerived::new(p)?;
        Ok(Self {
            params,
            inertia,
            guards,
        })
    }

    pub fn mirage3() -> Self {
        Self::new(AirframeParams::mirage3()).expect("bundled airframe is valid")
    }
}

/// Angle of attack the wing needs for lift to balance weight at `qbar`.
pub fn equilibrium_aoa(p: &AirframeParams, qbar: f64) -> Result<f64> {
    if p.cla == 0.0 {
        return Err(Error::Config("cla must be nonzero".into()));
    }
    if !(qbar > 0.0) {
        return Err(Error::Domain {
            quantity: "dynamic pressure",
            value: qbar,
            range: "(0, inf)",
        });
    }
    Ok((p.m * G / (qbar * p.s) - p.cl0) / p.cla)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AeroCoefficients<S = f64> {
    pub cl: S,
    pub cd: S,
    pub cc: S,
    pub cx: S,
    pub cy: S,
    pub cz: S,
}

/// Force coefficients without angle guards; the callers check them.
pub fn force_coefficients_of<S: Scalar>(p: &AirframeParams, alpha: S, beta: S, alpha_equb: f64) -> AeroCoefficients<S> {
    let cl = (alpha + alpha_equb) * p.cla + p.cl0;
    let cd = cl * cl * p.kcd + p.cd0;
    let cc = beta * p.ccb;
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    AeroCoefficients {
        cl,
        cd,
        cc,
        cx: -(cd * ca * cb) - cc * ca * sb + cl * sa,
        cy: -(cd * sb) + cc * cb,
        cz: -(cd * sa * cb) - cc * sa * sb - cl * ca,
    }
}

pub fn force_coefficients(af: &Airframe, alpha: f64, beta: f64, alpha_equb: f64) -> Result<AeroCoefficients> {
    af.guards.check_angle("alpha", alpha)?;
    af.guards.check_angle("beta", beta)?;
    Ok(force_coefficients_of(&af.params, alpha, beta, alpha_equb))
}

/// Wind angles, body rates and airspeed that the moment models depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentArgs {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub v: f64,
}

/// Aileron, elevator and rudder deflections, rad.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Deflections {
    pub dl: f64,
    pub dm: f64,
    pub dn: f64,
}

pub fn moment_coefficients_forward(af: &Airframe, x: &MomentArgs, d: &Deflections) -> Result<[f64; 3]> {
    af.guards.check_speed(x.v)?;
    let p = &af.params;
    let (pb, rb, qc) = (x.p * p.b / x.v, x.r * p.b / x.v, x.q * p.c / x.v);
    Ok([
        p.clb * x.beta + p.clp * pb + p.clr * rb + p.cldl * d.dl + p.cldn * d.dn,
        p.cm0 + p.cma * x.alpha + p.cmq * qc + p.cmdm * d.dm,
        p.cnb * x.beta + p.cnp * pb + p.cnr * rb + p.cndl * d.dl + p.cndn * d.dn,
    ])
}

/// Deflections that produce the moment coefficients `coef`; the inverse of
/// [`moment_coefficients_forward`].
pub fn deflections_for_moments(af: &Airframe, x: &MomentArgs, coef: [f64; 3]) -> Result<Deflections> {
    af.guards.check_speed(x.v)?;
    let p = &af.params;
    let det = p.lateral_control_det();
    if det.abs() < af.guards.det {
        return Err(Error::Singular(format!("uncontrollable configuration: control determinant {det}")));
    }
    let (pb, rb, qc) = (x.p * p.b / x.v, x.r * p.b / x.v, x.q * p.c / x.v);
    let roll = coef[0] - p.clb * x.beta - p.clp * pb - p.clr * rb;
    let yaw = coef[2] - p.cnb * x.beta - p.cnp * pb - p.cnr * rb;
    Ok(Deflections {
        dl: (roll * p.cndn - yaw * p.cldn) / det,
        dm: (coef[1] - p.cm0 - p.cma * x.alpha - p.cmq * qc) / p.cmdm,
        dn: (yaw * p.cldl - roll * p.cndl) / det,
    })
}

/// Planform chord distribution along the half span.
#[derive(Debug, Clone, PartialEq)]
pub enum ChordProfile {
    Rectangular { chord: f64, span: f64 },
    /// Linear taper from `root` to `tip`; `tip = 0` is a delta wing.
    Trapezoidal { root: f64, tip: f64, span: f64 },
    /// Chords at uniformly spaced stations from root to tip.
    Sampled { chords: Vec<f64>, span: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WingGeometry {
    pub area: f64,
    /// Mean aerodynamic chord.
    pub mac: f64,
    /// Standard mean chord.
    pub smc: f64,
    pub aspect_ratio: f64,
}

pub fn wing_geometry(profile: &ChordProfile) -> Result<WingGeometry> {
    let (span, area, chord2) = match profile {
        ChordProfile::Rectangular { chord, span } => (*span, chord * span, chord * chord * span),
        ChordProfile::Trapezoidal { root, tip, span } => {
            let area = 0.5 * (root + tip) * span;
            let chord2 = span / 3.0 * (root * root + root * tip + tip * tip);
            (*span, area, chord2)
        }
        ChordProfile::Sampled { chords, span } => {
            if chords.len() < 2 {
                return Err(Error::TooShort {
                    needed: 2,
                    got: chords.len(),
                });
            }
            let h = 0.5 * span / (chords.len() - 1) as f64;
            let trap = |f: &dyn Fn(f64) -> f64| {
                let inner: f64 = chords[1..chords.len() - 1].iter().map(|&c| f(c)).sum();
                h * (0.5 * (f(chords[0]) + f(chords[chords.len() - 1])) + inner)
            };
            (*span, 2.0 * trap(&|c| c), 2.0 * trap(&|c| c * c))
        }
    };
    if !(area > 0.0) || !(span > 0.0) {
        return Err(Error::Domain {
            quantity: "wing area",
            value: area,
            range: "(0, inf)",
        });
    }
    Ok(WingGeometry {
        area,
        mac: chord2 / area,
        smc: area / span,
        aspect_ratio: span * span / area,
    })
}
