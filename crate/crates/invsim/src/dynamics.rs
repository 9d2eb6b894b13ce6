//! Rigid-body flight mechanics: attitude kinematics, wind-axes momentum
//! balance, rotational equations and flight-path relations.
//!
//! Formulas that have to be differentiated in time are written against
//! [`Scalar`] so they can be evaluated on plain numbers or on [`Jet2`]s.
//! They do not check guards; the `f64` entry points used by the solvers do.

use crate::airframe::{AeroCoefficients, Airframe};
use crate::atmosphere::G;
use crate::error::{Error, Result};
use crate::numdiff::{Jet2, Scalar};

/// Roll, pitch and yaw in the 3-2-1 sequence, rad.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles<S = f64> {
    pub phi: S,
    pub theta: S,
    pub psi: S,
}

/// Airspeed magnitude and the two aerodynamic angles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WindState<S = f64> {
    pub v: S,
    pub alpha: S,
    pub beta: S,
}

/// Elevation and azimuth of the inertial velocity vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlightPathAngles<S = f64> {
    pub theta_w: S,
    pub psi_w: S,
}

/// Everything the translational equations need besides rates and thrust.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flight<S> {
    pub wind: WindState<S>,
    pub phi: S,
    pub theta: S,
    pub qbar: S,
}

pub fn check_wind(af: &Airframe, w: &WindState) -> Result<()> {
    af.guards.check_speed(w.v)?;
    af.guards.check_angle("alpha", w.alpha)?;
    af.guards.check_angle("beta", w.beta)
}

/// Body rates (p, q, r) from Euler angles and their rates.
pub fn body_rates_from_euler<S: Scalar>(e: &EulerAngles<S>, rates: [S; 3]) -> [S; 3] {
    let [dphi, dtheta, dpsi] = rates;
    let (sf, cf) = e.phi.sin_cos();
    let (st, ct) = e.theta.sin_cos();
    [
        dphi - st * dpsi,
        cf * dtheta + ct * sf * dpsi,
        ct * cf * dpsi - sf * dtheta,
    ]
}

/// Time derivatives of the body rates, given Euler rates and accelerations.
pub fn body_accels_from_euler(e: &EulerAngles, rates: [f64; 3], accels: [f64; 3]) -> [f64; 3] {
    let [dphi, dtheta, dpsi] = rates;
    let [ddphi, ddtheta, ddpsi] = accels;
    let (sf, cf) = e.phi.sin_cos();
    let (st, ct) = e.theta.sin_cos();
    [
        ddphi - ct * dpsi * dtheta - st * ddpsi,
        -sf * dtheta * dphi + cf * ddtheta - st * sf * dpsi * dtheta + ct * cf * dpsi * dphi + ct * sf * ddpsi,
        -st * cf * dpsi * dtheta - ct * sf * dpsi * dphi + ct * cf * ddpsi - cf * dtheta * dphi - sf * ddtheta,
    ]
}

/// Euler rates from body rates; singular at pitch +-90 deg, so the pitch
/// is checked against the forward-simulation limit.
pub fn euler_rates_from_body(af: &Airframe, e: &EulerAngles, pqr: [f64; 3]) -> Result<[f64; 3]> {
    if !(e.theta.abs() <= af.guards.forward_pitch) {
        return Err(Error::Singular(format!(
            "pitch {:.3} deg exceeds the {:.1} deg limit of the Euler-rate formulation",
            e.theta.to_degrees(),
            af.guards.forward_pitch.to_degrees()
        )));
    }
    let [p, q, r] = pqr;
    let (sf, cf) = e.phi.sin_cos();
    let lateral = q * sf + r * cf;
    Ok([p + lateral * e.theta.tan(), q * cf - r * sf, lateral / e.theta.cos()])
}

/// Auxiliary moments (T1, T2, T3) from angular accelerations: the inertia
/// tensor applied to (pdot, qdot, rdot).
pub fn auxiliary_moments_from_accels(af: &Airframe, accels: [f64; 3]) -> [f64; 3] {
    let i = af.params.inertia_matrix();
    std::array::from_fn(|k| i[k][0] * accels[0] + i[k][1] * accels[1] + i[k][2] * accels[2])
}

/// Auxiliary moments from body rates and external moments (L, M, N).
pub fn auxiliary_moments_from_moments(af: &Airframe, pqr: [f64; 3], lmn: [f64; 3]) -> [f64; 3] {
    let gyro = gyroscopic_terms(af, pqr);
    [gyro[0] + lmn[0], gyro[1] + lmn[1], gyro[2] + lmn[2]]
}

fn gyroscopic_terms(af: &Airframe, [p, q, r]: [f64; 3]) -> [f64; 3] {
    let k = &af.params;
    let (a, b, c, d, e, f) = (k.a_xx, k.b_yy, k.c_zz, k.d_yz, k.e_xz, k.f_xy);
    [
        (b - c) * q * r + (e * q - f * r) * p + (q * q - r * r) * d,
        (c - a) * r * p + (f * r - d * p) * q + (r * r - p * p) * e,
        (a - b) * p * q + (d * p - e * q) * r + (p * p - q * q) * f,
    ]
}

/// Angular accelerations from the external moments (forward direction).
pub fn rotational_accels_from_moments(af: &Airframe, pqr: [f64; 3], lmn: [f64; 3]) -> [f64; 3] {
    let [t1, t2, t3] = auxiliary_moments_from_moments(af, pqr, lmn);
    let i = &af.inertia;
    [
        (i.bc_d2 * t1 + i.fc_ed * t2 + i.fd_eb * t3) / i.t0,
        (i.ac_e2 * t2 + i.ad_ef * t3 + i.fc_ed * t1) / i.t0,
        (i.ab_f2 * t3 + i.fd_eb * t1 + i.ad_ef * t2) / i.t0,
    ]
}

/// External moments (L, M, N) given body rates and auxiliary moments.
pub fn moments_from_auxiliary(af: &Airframe, pqr: [f64; 3], aux: [f64; 3]) -> [f64; 3] {
    let gyro = gyroscopic_terms(af, pqr);
    [aux[0] - gyro[0], aux[1] - gyro[1], aux[2] - gyro[2]]
}

/// Body-axes aerodynamic force projected on the velocity direction, per q S.
fn drag_axis_coefficient<S: Scalar>(k: &AeroCoefficients<S>, w: &WindState<S>) -> S {
    let (sa, ca) = w.alpha.sin_cos();
    let (sb, cb) = w.beta.sin_cos();
    k.cx * ca * cb + k.cy * sb + k.cz * sa * cb
}

fn gravity_along_velocity<S: Scalar>(f: &Flight<S>) -> S {
    let (sa, ca) = f.wind.alpha.sin_cos();
    let (sb, cb) = f.wind.beta.sin_cos();
    let (sf, cf) = f.phi.sin_cos();
    let (st, ct) = f.theta.sin_cos();
    ct * sf * sb - st * ca * cb + ct * cf * sa * cb
}

/// Thrust needed for the airspeed rate `vdot`.
pub fn thrust_explicit<S: Scalar>(af: &Airframe, f: &Flight<S>, k: &AeroCoefficients<S>, vdot: S) -> S {
    let p = &af.params;
    let (ca, cb) = (f.wind.alpha.cos(), f.wind.beta.cos());
    (vdot * p.m - f.qbar * p.s * drag_axis_coefficient(k, &f.wind) - gravity_along_velocity(f) * (p.m * G)) / (ca * cb)
}

/// Airspeed rate for a given thrust.
pub fn speed_dot<S: Scalar>(af: &Airframe, f: &Flight<S>, k: &AeroCoefficients<S>, thrust: S) -> S {
    let p = &af.params;
    let (ca, cb) = (f.wind.alpha.cos(), f.wind.beta.cos());
    (f.qbar * p.s * drag_axis_coefficient(k, &f.wind) + gravity_along_velocity(f) * (p.m * G) + thrust * ca * cb) / p.m
}

/// Angle-of-attack rate from the normal force balance.
pub fn alpha_dot<S: Scalar>(af: &Airframe, f: &Flight<S>, k: &AeroCoefficients<S>, thrust: S, pqr: [S; 3]) -> S {
    let pa = &af.params;
    let [p, q, r] = pqr;
    let v = f.wind.v;
    let (sa, ca) = f.wind.alpha.sin_cos();
    let (sb, cb) = f.wind.beta.sin_cos();
    let cf = f.phi.cos();
    let (st, ct) = f.theta.sin_cos();
    let aero = f.qbar * pa.s * (k.cz * ca - k.cx * sa);
    let grav = (st * sa + ct * cf * ca) * (pa.m * G);
    let kin = v * (q * cb - r * sa * sb - p * ca * sb) * pa.m;
    (aero + grav - thrust * sa + kin) / (v * cb * pa.m)
}

/// Sideslip rate from the lateral force balance.
pub fn beta_dot<S: Scalar>(af: &Airframe, f: &Flight<S>, k: &AeroCoefficients<S>, thrust: S, pqr: [S; 3]) -> S {
    let pa = &af.params;
    let [p, _, r] = pqr;
    let v = f.wind.v;
    let (sa, ca) = f.wind.alpha.sin_cos();
    let (sb, cb) = f.wind.beta.sin_cos();
    let (sf, cf) = f.phi.sin_cos();
    let (st, ct) = f.theta.sin_cos();
    let aero = f.qbar * pa.s * (k.cy * cb - k.cx * ca * sb - k.cz * sa * sb);
    let grav = (ct * sf * cb + st * ca * sb - ct * cf * sa * sb) * (pa.m * G);
    let kin = v * (-(r * ca) + p * sa) * pa.m;
    (aero + grav - thrust * ca * sb + kin) / (v * pa.m)
}

/// Rotate an inertial vector into body axes.
pub fn inertial_to_body<S: Scalar>(e: &EulerAngles<S>, v: [S; 3]) -> [S; 3] {
    let (sf, cf) = e.phi.sin_cos();
    let (st, ct) = e.theta.sin_cos();
    let (sp, cp) = e.psi.sin_cos();
    let x1 = cp * v[0] + sp * v[1];
    let y1 = -(sp * v[0]) + cp * v[1];
    let x2 = ct * x1 - st * v[2];
    let z2 = st * x1 + ct * v[2];
    [x2, cf * y1 + sf * z2, -(sf * y1) + cf * z2]
}

/// Wind-axes force balance residuals, scaled by the weight. `accel` is the
/// inertial acceleration of the centre of gravity. All three vanish on a
/// trajectory the airframe actually flies with the given thrust.
pub fn force_balance_residuals<S: Scalar>(
    af: &Airframe,
    e: &EulerAngles<S>,
    w: &WindState<S>,
    qbar: S,
    k: &AeroCoefficients<S>,
    thrust: S,
    accel: [S; 3],
) -> [S; 3] {
    let p = &af.params;
    let weight = p.m * G;
    let specific = [accel[0], accel[1], accel[2] - G];
    let ab = inertial_to_body(e, specific);
    let (sa, ca) = w.alpha.sin_cos();
    let (sb, cb) = w.beta.sin_cos();
    let qs = qbar * p.s;
    let along = (ab[0] * ca * cb + ab[1] * sb + ab[2] * sa * cb) * p.m
        - qs * (k.cx * ca * cb + k.cy * sb + k.cz * sa * cb)
        - thrust * ca * cb;
    let side = (-(ab[0] * ca * sb) + ab[1] * cb - ab[2] * sa * sb) * p.m
        - qs * (k.cy * cb - k.cx * ca * sb - k.cz * sa * sb)
        + thrust * ca * sb;
    let normal = (-(ab[0] * sa) + ab[2] * ca) * p.m - qs * (k.cz * ca - k.cx * sa) + thrust * sa;
    [along / weight, side / weight, normal / weight]
}

/// Airspeed and flight-path angles from the inertial velocity.
pub fn flight_path_from_inertial_rates<S: Scalar>(af: &Airframe, vel: [S; 3]) -> Result<(S, FlightPathAngles<S>)> {
    let [vx, vy, vz] = vel;
    let horiz2 = vx * vx + vy * vy;
    let horiz = horiz2.value().sqrt();
    if !(horiz > af.guards.v_min * af.guards.angle) {
        return Err(Error::VerticalFlight {
            t: f64::NAN,
            speed: horiz,
        });
    }
    let v = (horiz2 + vz * vz).sqrt();
    let angles = FlightPathAngles {
        theta_w: (-vz).atan2(horiz2.sqrt()),
        psi_w: vy.atan2(vx),
    };
    af.guards.check_angle("theta_w", angles.theta_w.value())?;
    Ok((v, angles))
}

/// First derivatives of airspeed, azimuth and elevation from velocity and
/// acceleration.
pub fn flight_path_rates(vel: [f64; 3], acc: [f64; 3]) -> [f64; 3] {
    let [vx, vy, vz] = vel;
    let [ax, ay, az] = acc;
    let v = (vx * vx + vy * vy + vz * vz).sqrt();
    let vdot = (vx * ax + vy * ay + vz * az) / v;
    let horiz2 = vx * vx + vy * vy;
    let psi_w_dot = (ay * vx - ax * vy) / horiz2;
    let sin_tw = -vz / v;
    let cos_tw = horiz2.sqrt() / v;
    let theta_w_dot = -(az + vdot * sin_tw) / (v * cos_tw);
    [vdot, psi_w_dot, theta_w_dot]
}

/// Airspeed and flight-path angles with their first two time derivatives,
/// from velocity, acceleration and jerk.
pub fn flight_path_jets(
    af: &Airframe,
    vel: [f64; 3],
    acc: [f64; 3],
    jerk: [f64; 3],
) -> Result<(Jet2, FlightPathAngles<Jet2>)> {
    let v: [Jet2; 3] = std::array::from_fn(|i| Jet2::new(vel[i], acc[i], jerk[i]));
    flight_path_from_inertial_rates(af, v)
}

/// Residuals of the two relations tying the flight-path angles to attitude
/// and wind angles.
pub fn flightpath_residuals<S: Scalar>(e: &EulerAngles<S>, w: &WindState<S>, fp: &FlightPathAngles<S>) -> [S; 2] {
    let (sa, ca) = w.alpha.sin_cos();
    let (sb, cb) = w.beta.sin_cos();
    let (sf, cf) = e.phi.sin_cos();
    let (st, ct) = e.theta.sin_cos();
    let (stw, ctw) = fp.theta_w.sin_cos();
    [
        ctw * (fp.psi_w - e.psi).sin() - (cf * sb - sf * sa * cb),
        stw - (st * ca * cb - ct * sf * sb - ct * cf * sa * cb),
    ]
}

pub fn verify_flightpath_constraints(e: &EulerAngles, w: &WindState, fp: &FlightPathAngles) -> [f64; 2] {
    flightpath_residuals(e, w, fp)
}

/// Direction of the velocity in the yawed frame (yaw removed), from attitude
/// and wind angles.
pub fn velocity_direction(e: &EulerAngles, w: &WindState) -> [f64; 3] {
    let (sa, ca) = w.alpha.sin_cos();
    let (sb, cb) = w.beta.sin_cos();
    let (sf, cf) = e.phi.sin_cos();
    let (st, ct) = e.theta.sin_cos();
    let lateral = sf * sb + cf * sa * cb;
    [ct * ca * cb + st * lateral, cf * sb - sf * sa * cb, -st * ca * cb + ct * lateral]
}

/// Flight-path angles implied by attitude and wind angles.
pub fn flight_path_from_attitude(e: &EulerAngles, w: &WindState) -> FlightPathAngles {
    let d = velocity_direction(e, w);
    FlightPathAngles {
        theta_w: (-d[2]).atan2(d[0].hypot(d[1])),
        psi_w: e.psi + d[1].atan2(d[0]),
    }
}

/// Inertial velocity components from airspeed and flight-path angles.
pub fn inertial_velocity(v: f64, fp: &FlightPathAngles) -> [f64; 3] {
    let (stw, ctw) = fp.theta_w.sin_cos();
    let (spw, cpw) = fp.psi_w.sin_cos();
    [v * ctw * cpw, v * ctw * spw, -v * stw]
}

/// Inputs for the pitch/yaw recovery from the flight-path relations: wind
/// angles, flight-path angles and roll, each with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathCoupling {
    pub alpha: Jet2,
    pub beta: Jet2,
    pub phi: Jet2,
    pub fp: FlightPathAngles<Jet2>,
}

fn coupling_residuals(c: &PathCoupling, theta: Jet2, psi: Jet2) -> [Jet2; 2] {
    let e = EulerAngles {
        phi: c.phi,
        theta,
        psi,
    };
    let w = WindState {
        v: Jet2::constant(1.0),
        alpha: c.alpha,
        beta: c.beta,
    };
    flightpath_residuals(&e, &w, &c.fp)
}

fn solve2(af: &Airframe, j: [[f64; 2]; 2], rhs: [f64; 2]) -> Result<[f64; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det.abs() >= af.guards.det) {
        return Err(Error::Singular(format!("attitude singularity: pitch/yaw system determinant {det}")));
    }
    Ok([
        (rhs[0] * j[1][1] - rhs[1] * j[0][1]) / det,
        (rhs[1] * j[0][0] - rhs[0] * j[1][0]) / det,
    ])
}

fn coupling_jacobian(c: &PathCoupling, theta: f64, psi: f64) -> [[f64; 2]; 2] {
    let flat = |j: Jet2| Jet2::constant(j.v);
    let c0 = PathCoupling {
        alpha: flat(c.alpha),
        beta: flat(c.beta),
        phi: flat(c.phi),
        fp: FlightPathAngles {
            theta_w: flat(c.fp.theta_w),
            psi_w: flat(c.fp.psi_w),
        },
    };
    let dth = coupling_residuals(&c0, Jet2::variable(theta), Jet2::constant(psi));
    let dps = coupling_residuals(&c0, Jet2::constant(theta), Jet2::variable(psi));
    [[dth[0].d1, dps[0].d1], [dth[1].d1, dps[1].d1]]
}

/// Pitch and yaw rates keeping the flight-path relations satisfied.
pub fn euler_rates_from_flightpath(af: &Airframe, c: &PathCoupling, theta: f64, psi: f64) -> Result<[f64; 2]> {
    let r = coupling_residuals(c, Jet2::constant(theta), Jet2::constant(psi));
    solve2(af, coupling_jacobian(c, theta, psi), [-r[0].d1, -r[1].d1])
}

/// Pitch and yaw accelerations given the pitch and yaw rates.
pub fn euler_accels_from_flightpath(
    af: &Airframe,
    c: &PathCoupling,
    theta: [f64; 2],
    psi: [f64; 2],
) -> Result<[f64; 2]> {
    let r = coupling_residuals(c, Jet2::new(theta[0], theta[1], 0.0), Jet2::new(psi[0], psi[1], 0.0));
    solve2(af, coupling_jacobian(c, theta[0], psi[0]), [-r[0].d2, -r[1].d2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airframe::{equilibrium_aoa, force_coefficients_of, AirframeParams};
    use crate::atmosphere;
    use nalgebra::{Matrix3, Vector3};
    use proptest::prelude::*;

    fn mirage() -> Airframe {
        Airframe::mirage3()
    }

    fn level() -> EulerAngles {
        EulerAngles::default()
    }

    #[test]
    fn body_rate_examples() {
        let e = EulerAngles {
            phi: 0.3,
            theta: -0.4,
            psi: 1.0,
        };
        assert_eq!(body_rates_from_euler(&e, [1.0, 0.0, 0.0]), [1.0, 0.0, 0.0]);
        assert_eq!(body_rates_from_euler(&level(), [0.0, 0.0, 1.0]), [0.0, 0.0, 1.0]);
        let up = EulerAngles {
            phi: 0.0,
            theta: std::f64::consts::FRAC_PI_2,
            psi: 0.0,
        };
        assert!(body_rates_from_euler(&up, [1.0, 0.0, 1.0])[0].abs() < 1e-15);
        assert_eq!(body_accels_from_euler(&e, [0.0; 3], [1.0, 0.0, 0.0]), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn body_accels_are_derivatives_of_body_rates() {
        // smooth Euler history evaluated with jets
        for &t in &[0.0, 0.7, 2.3] {
            let var = Jet2::variable(t);
            let e = EulerAngles {
                phi: (var * 1.3).sin() * 0.8,
                theta: (var * 0.7).cos() * 0.3,
                psi: var * 0.2 + (var * 2.1).sin() * 0.1,
            };
            let rates = [
                Jet2::new(e.phi.d1, e.phi.d2, 0.0),
                Jet2::new(e.theta.d1, e.theta.d2, 0.0),
                Jet2::new(e.psi.d1, e.psi.d2, 0.0),
            ];
            // third derivatives of the Euler angles are not needed for first
            // derivatives of the rates
            let pqr = body_rates_from_euler(&e, rates);
            let ev = EulerAngles {
                phi: e.phi.v,
                theta: e.theta.v,
                psi: e.psi.v,
            };
            let acc = body_accels_from_euler(&ev, [e.phi.d1, e.theta.d1, e.psi.d1], [e.phi.d2, e.theta.d2, e.psi.d2]);
            for k in 0..3 {
                assert!((pqr[k].d1 - acc[k]).abs() < 1e-10, "{k}: {} vs {}", pqr[k].d1, acc[k]);
            }
        }
    }

    #[test]
    fn mirage_auxiliary_moments() {
        let af = mirage();
        assert_eq!(auxiliary_moments_from_accels(&af, [1.0, 0.0, 0.0]), [90000.0, 0.0, -1800.0]);
        assert_eq!(auxiliary_moments_from_accels(&af, [0.0; 3]), [0.0; 3]);
        let back = rotational_accels_from_moments(&af, [0.0; 3], [90000.0, 0.0, -1800.0]);
        assert!((back[0] - 1.0).abs() < 1e-14 && back[1].abs() < 1e-14 && back[2].abs() < 1e-14);
        assert_eq!(rotational_accels_from_moments(&af, [0.0; 3], [0.0; 3]), [0.0; 3]);
    }

    #[test]
    fn moments_equal_auxiliary_at_rest() {
        let af = mirage();
        assert_eq!(moments_from_auxiliary(&af, [0.0; 3], [1.0, -2.0, 3.0]), [1.0, -2.0, 3.0]);
    }

    fn random_inertia() -> impl Strategy<Value = AirframeParams> {
        (1.0..10.0f64, 1.0..10.0f64, 1.0..10.0f64, -0.3..0.3f64, -0.3..0.3f64, -0.3..0.3f64).prop_map(
            |(a, b, c, d, e, f)| {
                let mut p = AirframeParams::mirage3();
                let s = a.min(b).min(c);
                (p.a_xx, p.b_yy, p.c_zz) = (a * 1e4, b * 1e4, c * 1e4);
                (p.d_yz, p.e_xz, p.f_xy) = (d * s * 1e4, e * s * 1e4, f * s * 1e4);
                p
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn auxiliary_moments_solve_the_rotational_system(
            p in random_inertia(),
            w in proptest::array::uniform3(-2.0..2.0f64),
        ) {
            let af = Airframe::new(p.clone()).unwrap();
            let t = auxiliary_moments_from_accels(&af, w);
            // oracle: numerically solve I x = t
            let i = Matrix3::from_fn(|r, c| p.inertia_matrix()[r][c]);
            // the determinant cancels heavily for near-singular tensors
            let scale = p.a_xx * p.b_yy * p.c_zz;
            prop_assert!((i.determinant() - af.inertia.t0).abs() <= 1e-12 * scale);
            let x = i.lu().solve(&Vector3::from(t)).unwrap();
            // the closed-form rotational equations with zero rates reproduce w
            let back = rotational_accels_from_moments(&af, [0.0; 3], t);
            for k in 0..3 {
                prop_assert!((x[k] - w[k]).abs() < 1e-9);
                prop_assert!((back[k] - w[k]).abs() < 1e-10 * (1.0 + w[k].abs()));
            }
            // closed form of the third auxiliary moment; its denominator is
            // minus the determinant (a B*E^2 term with the opposite sign
            // would break this for any nonzero E)
            let (a, b, c, d, e, f) = (p.a_xx, p.b_yy, p.c_zz, p.d_yz, p.e_xz, p.f_xy);
            let den = a * d * d + 2.0 * d * e * f - a * c * b + f * f * c + e * e * b;
            prop_assert!((den + af.inertia.t0).abs() <= 1e-12 * scale);
            let t3 = af.inertia.t0 * (w[1] * d - w[2] * c + w[0] * e) / den;
            prop_assert!((t3 - t[2]).abs() <= 1e-9 * (1.0 + t[2].abs()));
        }

        #[test]
        fn rotational_pair_round_trips(
            p in random_inertia(),
            w in proptest::array::uniform3(-2.0..2.0f64),
            pqr in proptest::array::uniform3(-1.5..1.5f64),
        ) {
            let af = Airframe::new(p).unwrap();
            let aux = auxiliary_moments_from_accels(&af, w);
            let lmn = moments_from_auxiliary(&af, pqr, aux);
            let back = rotational_accels_from_moments(&af, pqr, lmn);
            for k in 0..3 {
                prop_assert!((back[k] - w[k]).abs() < 1e-9);
            }
        }
    }

    /// Closed forms for a plane-symmetric airframe (no D, F products).
    pub(crate) fn symmetric_accels(af: &Airframe, [p, q, r]: [f64; 3], [l, m, n]: [f64; 3]) -> [f64; 3] {
        let k = &af.params;
        let (a, b, c, e) = (k.a_xx, k.b_yy, k.c_zz, k.e_xz);
        let den = a * c - e * e;
        [
            ((b * c - e * e - c * c) * q * r + (a - b + c) * e * p * q + c * l + e * n) / den,
            (e * r * r - e * p * p + (c - a) * p * r + m) / b,
            ((a * a + e * e - a * b) * p * q + (b - a - c) * e * q * r + a * n + e * l) / den,
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn symmetric_airframe_forms_agree(
            abce in proptest::array::uniform4(0.5..3.0f64),
            pqr in proptest::array::uniform3(-2.0..2.0f64),
            lmn in proptest::array::uniform3(-1e5..1e5f64),
        ) {
            let mut p = AirframeParams::mirage3();
            (p.a_xx, p.b_yy, p.c_zz) = (abce[0] * 1e5, abce[1] * 1e5, abce[2] * 1e5);
            p.e_xz = (abce[3] - 1.75) * 0.2 * p.a_xx.min(p.c_zz);
            (p.d_yz, p.f_xy) = (0.0, 0.0);
            let af = Airframe::new(p).unwrap();
            let general = rotational_accels_from_moments(&af, pqr, lmn);
            let sym = symmetric_accels(&af, pqr, lmn);
            for k in 0..3 {
                prop_assert!((general[k] - sym[k]).abs() < 1e-10 * (1.0 + sym[k].abs()));
            }
        }
    }

    fn equilibrium() -> (Airframe, Flight<f64>, AeroCoefficients, f64) {
        let af = mirage();
        let rho = atmosphere::density(5000.0).unwrap();
        let qbar = 0.5 * rho * 150.0 * 150.0;
        let a_eq = equilibrium_aoa(&af.params, qbar).unwrap();
        let k = force_coefficients_of(&af.params, 0.0, 0.0, a_eq);
        let f = Flight {
            wind: WindState {
                v: 150.0,
                alpha: 0.0,
                beta: 0.0,
            },
            phi: 0.0,
            theta: 0.0,
            qbar,
        };
        (af, f, k, a_eq)
    }

    #[test]
    fn equilibrium_is_a_fixed_point() {
        let (af, f, k, _) = equilibrium();
        let t = thrust_explicit(&af, &f, &k, 0.0);
        assert!((t - 11543.0).abs() < 10.0, "{t}");
        assert!((t - f.qbar * af.params.s * k.cd).abs() < 1e-9);
        assert!(speed_dot(&af, &f, &k, t).abs() < 1e-9);
        assert!(alpha_dot(&af, &f, &k, t, [0.0; 3]).abs() < 1e-9);
        assert!(beta_dot(&af, &f, &k, t, [0.0; 3]).abs() < 1e-9);
        assert_eq!(rotational_accels_from_moments(&af, [0.0; 3], [0.0; 3]), [0.0; 3]);
    }

    #[test]
    fn rate_terms_in_wind_angle_rates() {
        let (af, f, k, _) = equilibrium();
        let t = thrust_explicit(&af, &f, &k, 0.0);
        assert!((alpha_dot(&af, &f, &k, t, [0.0, 1.0, 0.0]) - 1.0).abs() < 1e-9);
        assert!((beta_dot(&af, &f, &k, t, [0.0, 0.0, 1.0]) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn thrust_without_gravity_or_aero_is_mass_times_acceleration() {
        let mut p = AirframeParams::mirage3();
        (p.cl0, p.cla, p.cd0, p.kcd, p.ccb) = (0.0, 1.0, 0.0, 0.0, 0.0);
        let af = Airframe::new(p).unwrap();
        let f = Flight {
            wind: WindState {
                v: 100.0,
                alpha: 0.0,
                beta: 0.0,
            },
            phi: 0.0,
            theta: 0.0,
            qbar: 0.0,
        };
        let k = force_coefficients_of(&af.params, 0.0, 0.0, 0.0);
        // level attitude puts gravity normal to the velocity
        assert!((thrust_explicit(&af, &f, &k, 1.0) - 7400.0).abs() < 1e-9);
    }

    #[test]
    fn flight_path_examples() {
        let af = mirage();
        let (v, fp) = flight_path_from_inertial_rates(&af, [150.0, 0.0, 0.0]).unwrap();
        assert_eq!((v, fp.psi_w, fp.theta_w), (150.0, 0.0, 0.0));
        let (v, fp) = flight_path_from_inertial_rates(&af, [0.0, 100.0, 0.0]).unwrap();
        assert_eq!((v, fp.psi_w, fp.theta_w), (100.0, std::f64::consts::FRAC_PI_2, 0.0));
        let (v, fp) = flight_path_from_inertial_rates(&af, [100.0, 0.0, -100.0]).unwrap();
        assert!((v - 141.42).abs() < 0.01);
        assert!((fp.theta_w - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let (_, fp) = flight_path_from_inertial_rates(&af, [-10.0, -1e-3, 0.0]).unwrap();
        assert!(fp.psi_w < -3.0);
        assert!(matches!(
            flight_path_from_inertial_rates(&af, [0.0, 0.0, -50.0]),
            Err(Error::VerticalFlight { .. })
        ));
    }

    #[test]
    fn circular_path_turn_rate() {
        let (r, w) = (2000.0, 0.05);
        for &t in &[0.0, 3.0, 17.0, 40.0] {
            let vel = [-r * w * (w * t).sin(), r * w * (w * t).cos(), 0.0];
            let acc = [-r * w * w * (w * t).cos(), -r * w * w * (w * t).sin(), 0.0];
            let [vdot, psid, thd] = flight_path_rates(vel, acc);
            assert!((psid - w).abs() < 1e-14);
            assert!(vdot.abs() < 1e-12 && thd.abs() < 1e-14);
        }
    }

    #[test]
    fn flight_path_rates_match_differences() {
        // climbing helix with varying speed
        let pos = |t: f64| [300.0 * (0.1 * t).sin() + 20.0 * t, 250.0 * (1.0 - (0.1 * t).cos()), -3.0 * t - 0.2 * t * t];
        let vel = |t: f64| [30.0 * (0.1 * t).cos() + 20.0, 25.0 * (0.1 * t).sin(), -3.0 - 0.4 * t];
        let acc = |t: f64| [-3.0 * (0.1 * t).sin(), 2.5 * (0.1 * t).cos(), -0.4];
        let jerk = |t: f64| [-0.3 * (0.1 * t).cos(), -0.25 * (0.1 * t).sin(), 0.0];
        let af = mirage();
        let h = 1e-3;
        let _ = pos;
        for &t in &[1.0, 7.5, 22.0] {
            let ang = |s: f64| {
                let (v, fp) = flight_path_from_inertial_rates(&af, vel(s)).unwrap();
                [v, fp.psi_w, fp.theta_w]
            };
            let rates = flight_path_rates(vel(t), acc(t));
            let (vj, fpj) = flight_path_jets(&af, vel(t), acc(t), jerk(t)).unwrap();
            let jets = [vj, fpj.psi_w, fpj.theta_w];
            let (am, a0, ap) = (ang(t - h), ang(t), ang(t + h));
            for k in 0..3 {
                let d1 = (ap[k] - am[k]) / (2.0 * h);
                let d2 = (ap[k] - 2.0 * a0[k] + am[k]) / (h * h);
                assert!((rates[k] - d1).abs() < 1e-5 * d1.abs().max(1e-3), "{k}");
                assert!((jets[k].d1 - rates[k]).abs() < 1e-12 * rates[k].abs().max(1.0));
                assert!((jets[k].d2 - d2).abs() < 1e-4 * d2.abs().max(1e-3), "{k}: {} vs {d2}", jets[k].d2);
            }
        }
    }

    #[test]
    fn residuals_vanish_when_body_aligns_with_path() {
        let e = EulerAngles {
            phi: 0.0,
            theta: 0.2,
            psi: -0.7,
        };
        let fp = FlightPathAngles {
            theta_w: 0.2,
            psi_w: -0.7,
        };
        assert_eq!(verify_flightpath_constraints(&e, &WindState::default(), &fp), [0.0, 0.0]);
        let off = WindState {
            v: 100.0,
            alpha: 0.1,
            beta: -0.05,
        };
        let r = verify_flightpath_constraints(&e, &off, &fp);
        assert!(r[0].abs() > 1e-3 && r[1].abs() > 1e-3);
    }

    #[test]
    fn attitude_and_path_are_consistent() {
        let e = EulerAngles {
            phi: 1.1,
            theta: 0.3,
            psi: 2.0,
        };
        let w = WindState {
            v: 120.0,
            alpha: 0.08,
            beta: -0.12,
        };
        let fp = flight_path_from_attitude(&e, &w);
        let r = verify_flightpath_constraints(&e, &w, &fp);
        assert!(r[0].abs() < 1e-15 && r[1].abs() < 1e-15);
        // the velocity seen in body axes is V (cos a cos b, sin b, sin a cos b)
        let vi = inertial_velocity(w.v, &fp);
        let vb = inertial_to_body(&e, vi);
        let expect = [w.v * w.alpha.cos() * w.beta.cos(), w.v * w.beta.sin(), w.v * w.alpha.sin() * w.beta.cos()];
        for k in 0..3 {
            assert!((vb[k] - expect[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn pitch_and_yaw_follow_path_with_zero_wind_angles() {
        let af = mirage();
        let c = PathCoupling {
            alpha: Jet2::constant(0.0),
            beta: Jet2::constant(0.0),
            phi: Jet2::constant(0.0),
            fp: FlightPathAngles {
                theta_w: Jet2::new(0.1, 0.02, -0.003),
                psi_w: Jet2::new(0.5, -0.04, 0.001),
            },
        };
        let [thd, psd] = euler_rates_from_flightpath(&af, &c, 0.1, 0.5).unwrap();
        assert!((thd - 0.02).abs() < 1e-14 && (psd + 0.04).abs() < 1e-14);
        let [thdd, psdd] = euler_accels_from_flightpath(&af, &c, [0.1, thd], [0.5, psd]).unwrap();
        assert!((thdd + 0.003).abs() < 1e-14 && (psdd - 0.001).abs() < 1e-14);
    }

    #[test]
    fn level_equilibrium_has_no_pitch_or_yaw_rate() {
        let af = mirage();
        let c = PathCoupling {
            alpha: Jet2::constant(0.0),
            beta: Jet2::constant(0.0),
            phi: Jet2::new(0.0, 0.0, 0.0),
            fp: FlightPathAngles::default(),
        };
        assert_eq!(euler_rates_from_flightpath(&af, &c, 0.0, 0.0).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn pitch_and_yaw_rates_keep_residuals_stationary() {
        let af = mirage();
        let c = PathCoupling {
            alpha: Jet2::new(0.05, 0.1, -0.2),
            beta: Jet2::new(-0.08, 0.3, 0.05),
            phi: Jet2::new(0.9, 0.7, 0.1),
            fp: FlightPathAngles {
                theta_w: Jet2::new(0.05, 0.01, 0.0),
                psi_w: Jet2::new(0.2, 0.03, 0.002),
            },
        };
        // pick the attitude that satisfies both relations
        let (mut th, mut ps) = (0.0, 0.0);
        for _ in 0..30 {
            let r = coupling_residuals(&c, Jet2::constant(th), Jet2::constant(ps));
            let j = coupling_jacobian(&c, th, ps);
            let d = solve2(&af, j, [-r[0].v, -r[1].v]).unwrap();
            th += d[0];
            ps += d[1];
        }
        let [thd, psd] = euler_rates_from_flightpath(&af, &c, th, ps).unwrap();
        let [thdd, psdd] = euler_accels_from_flightpath(&af, &c, [th, thd], [ps, psd]).unwrap();
        let r = coupling_residuals(&c, Jet2::new(th, thd, thdd), Jet2::new(ps, psd, psdd));
        for rk in r {
            assert!(rk.v.abs() < 1e-14 && rk.d1.abs() < 1e-14 && rk.d2.abs() < 1e-13);
        }
    }

    #[test]
    fn force_balance_matches_translational_rates() {
        // a body flying with consistent kinematics: the force residuals equal
        // mass times the mismatch between the prescribed and the dynamic rates
        let af = mirage();
        let (_, f0, _, a_eq) = equilibrium();
        let e = EulerAngles {
            phi: 0.6,
            theta: 0.1,
            psi: 0.3,
        };
        let w = WindState {
            v: 150.0,
            alpha: 0.02,
            beta: -0.03,
        };
        let k = force_coefficients_of(&af.params, w.alpha, w.beta, a_eq);
        let thrust = 9000.0;
        let f = Flight {
            wind: w,
            phi: e.phi,
            theta: e.theta,
            qbar: f0.qbar,
        };
        let vdot = speed_dot(&af, &f, &k, thrust);
        let pqr = [0.3, -0.05, 0.1];
        let ad = alpha_dot(&af, &f, &k, thrust, pqr);
        let bd = beta_dot(&af, &f, &k, thrust, pqr);
        // build the inertial acceleration of this motion from body kinematics
        let (sa, ca) = w.alpha.sin_cos();
        let (sb, cb) = w.beta.sin_cos();
        let vb = [w.v * ca * cb, w.v * sb, w.v * sa * cb];
        let vbd = [
            vdot * ca * cb - w.v * sa * cb * ad - w.v * ca * sb * bd,
            vdot * sb + w.v * cb * bd,
            vdot * sa * cb + w.v * ca * cb * ad - w.v * sa * sb * bd,
        ];
        let [p, q, r] = pqr;
        let ab = [
            vbd[0] + q * vb[2] - r * vb[1],
            vbd[1] + r * vb[0] - p * vb[2],
            vbd[2] + p * vb[1] - q * vb[0],
        ];
        // back to inertial axes by solving the orthogonal rotation
        let ex = inertial_to_body(&e, [1.0, 0.0, 0.0]);
        let ey = inertial_to_body(&e, [0.0, 1.0, 0.0]);
        let ez = inertial_to_body(&e, [0.0, 0.0, 1.0]);
        let dot = |u: [f64; 3]| u[0] * ab[0] + u[1] * ab[1] + u[2] * ab[2];
        let accel = [dot(ex), dot(ey), dot(ez)];
        let res = force_balance_residuals(&af, &e, &w, f.qbar, &k, thrust, accel);
        for (i, v) in res.iter().enumerate() {
            assert!(v.abs() < 1e-12, "{i}: {v}");
        }
    }

    #[test]
    fn euler_rate_inversion() {
        let af = mirage();
        let e = EulerAngles {
            phi: 0.4,
            theta: -0.6,
            psi: 2.0,
        };
        let rates = [0.3, -0.2, 0.15];
        let pqr = body_rates_from_euler(&e, rates);
        let back = euler_rates_from_body(&af, &e, pqr).unwrap();
        for k in 0..3 {
            assert!((back[k] - rates[k]).abs() < 1e-14);
        }
        let steep = EulerAngles {
            theta: 86f64.to_radians(),
            ..e
        };
        assert!(euler_rates_from_body(&af, &steep, pqr).is_err());
    }
}
