//! Forward and backward Poincaré half-maps on the switching line `x = 0`.
//!
//! `y_L` follows the left flow forward from `(0, y0)`, `y0 ≥ 0`, to the next
//! point `(0, y1)` with `y1 ≤ 0`. `y_R` does the same with the right flow in
//! reversed time and `b = 0`; the general backward map is the shift
//! `y_R^b(y0) = y_R(y0 − b) + b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::HalfOrbit;
use crate::lienard::{domain_interval, CanonicalPWL, QuadraticW, DEFAULT_CAP};

/// Residual tolerance on `x` at the return point.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfMapConfig {
    pub tol: f64,
    pub cap: f64,
    /// Number of rotation-scale steps before giving up on a return.
    pub horizon_steps: usize,
}

impl Default for HalfMapConfig {
    fn default() -> Self {
        HalfMapConfig {
            tol: DEFAULT_TOL,
            cap: DEFAULT_CAP,
            horizon_steps: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfMapSample {
    pub y0: f64,
    pub y1: f64,
    pub flight_time: f64,
    /// `|x|` at the computed return point.
    pub residual: f64,
}

impl HalfMapSample {
    pub const CSV_HEADER: &'static str = "y0,y1,flight_time,residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            self.y0, self.y1, self.flight_time, self.residual
        )
    }
}

fn left_orbit(c: &CanonicalPWL) -> HalfOrbit {
    HalfOrbit {
        tau: c.t_left,
        d: c.d_left,
        f: -c.a_left,
    }
}

fn right_orbit(c: &CanonicalPWL) -> HalfOrbit {
    HalfOrbit {
        tau: -c.t_right,
        d: c.d_right,
        f: c.a_right,
    }
}

fn eval_on(orbit: HalfOrbit, w: &QuadraticW, y0: f64, cfg: &HalfMapConfig) -> Result<HalfMapSample> {
    let dom = domain_interval(w, cfg.cap).domain;
    if !y0.is_finite() || !dom.contains(y0) {
        return Err(Error::DomainViolation {
            y0,
            lo: dom.lo,
            hi: dom.hi,
        });
    }
    let r = orbit.first_return(y0, cfg.tol, cfg.horizon_steps)?;
    Ok(HalfMapSample {
        y0,
        y1: r.y1,
        flight_time: r.time,
        residual: r.residual,
    })
}

/// Forward half-map of the left zone.
pub fn eval_y_l(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<HalfMapSample> {
    eval_on(left_orbit(c), &c.w_left(), y0, cfg)
}

/// Backward half-map of the right zone with `b = 0`.
pub fn eval_y_r(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<HalfMapSample> {
    eval_on(right_orbit(c), &c.w_right(), y0, cfg)
}

/// Backward half-map of the right zone for the system's `b`.
pub fn eval_y_rb(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<HalfMapSample> {
    let shifted = eval_y_r(c, y0 - c.b, cfg).map_err(|e| match e {
        Error::DomainViolation { lo, hi, .. } => Error::DomainViolation {
            y0,
            lo: lo + c.b,
            hi: hi + c.b,
        },
        other => other,
    })?;
    Ok(HalfMapSample {
        y0,
        y1: shifted.y1 + c.b,
        ..shifted
    })
}

fn deriv(w: &QuadraticW, y0: f64, y1: f64) -> Result<f64> {
    if y1 == 0.0 {
        return Err(Error::Singularity("image ordinate is zero"));
    }
    let w0 = w.eval(y0);
    if w0 == 0.0 {
        return Err(Error::Singularity("W vanishes at y0"));
    }
    Ok(y0 * w.eval(y1) / (y1 * w0))
}

/// `y_L'(y0) = y0 W_L(y1) / (y1 W_L(y0))` at `y1 = y_L(y0)`.
pub fn deriv_y_l(c: &CanonicalPWL, y0: f64, y1: f64) -> Result<f64> {
    deriv(&c.w_left(), y0, y1)
}

/// `y_R'(y0) = y0 W_R(y1) / (y1 W_R(y0))` at `y1 = y_R(y0)`.
pub fn deriv_y_r(c: &CanonicalPWL, y0: f64, y1: f64) -> Result<f64> {
    deriv(&c.w_right(), y0, y1)
}
