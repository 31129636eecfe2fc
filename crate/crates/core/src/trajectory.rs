//! Direct numerical integration of the canonical two-zone system.
//!
//! This path shares nothing with the closed-form half-maps: it runs an
//! adaptive Dormand–Prince 5(4) scheme on the planar vector field and locates
//! crossings of `x = 0` by re-stepping from the last accepted state.

use crate::error::{Error, Result};
use crate::lienard::CanonicalPWL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_time: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-13,
            atol: 1e-14,
            max_time: 1e4,
            max_steps: 2_000_000,
        }
    }
}

/// Which linear field drives the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Left,
    Right,
}

type State = [f64; 2];

fn field(c: &CanonicalPWL, zone: Zone, z: State) -> State {
    let [x, y] = z;
    match zone {
        Zone::Left => [c.t_left * x - y, c.d_left * x - c.a_left],
        Zone::Right => [c.t_right * x - y + c.b, c.d_right * x - c.a_right],
    }
}

// Dormand–Prince coefficients
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One embedded step; returns the 5th-order state and an error estimate.
fn dp_step(c: &CanonicalPWL, zone: Zone, sign: f64, z: State, h: f64) -> (State, f64) {
    let mut k = [[0.0f64; 2]; 7];
    for i in 0..7 {
        let mut zi = z;
        for (j, kj) in k.iter().enumerate().take(i) {
            zi[0] += h * A[i][j] * kj[0];
            zi[1] += h * A[i][j] * kj[1];
        }
        let f = field(c, zone, zi);
        k[i] = [sign * f[0], sign * f[1]];
    }
    let mut z5 = z;
    let mut err = [0.0f64; 2];
    for i in 0..7 {
        for d in 0..2 {
            z5[d] += h * B5[i] * k[i][d];
            err[d] += h * (B5[i] - B4[i]) * k[i][d];
        }
    }
    (z5, err[0].abs().max(err[1].abs()))
}

/// Integrates one zone from `(0, y0)` until the orbit comes back to `x = 0`.
/// `backward` reverses time. Returns `(y at the crossing, elapsed time)`.
pub fn cross_zone(
    c: &CanonicalPWL,
    zone: Zone,
    y0: f64,
    backward: bool,
    cfg: &IntegratorConfig,
) -> Result<(f64, f64)> {
    let sign = if backward { -1.0 } else { 1.0 };
    // side of the line the orbit must live on while in this zone
    let side = match zone {
        Zone::Left => -1.0,
        Zone::Right => 1.0,
    };
    let mut z: State = [0.0, y0];
    let mut t = 0.0;
    let scale = 1.0 + y0.abs();
    let mut h = 1e-3 * (1.0 / (1.0 + y0.abs())).min(1.0);
    let mut left_line = false;

    for _ in 0..cfg.max_steps {
        if t > cfg.max_time {
            break;
        }
        let (z_new, err) = dp_step(c, zone, sign, z, h);
        let tol = cfg.atol + cfg.rtol * z[0].abs().max(z[1].abs()).max(scale);
        if err > tol && h > 1e-14 {
            h *= (0.9 * (tol / err).powf(0.2)).max(0.1);
            continue;
        }
        if !left_line && side * z_new[0] <= 0.0 && h > 1e-300 {
            // first step overshot a very short excursion
            h *= 0.1;
            continue;
        }
        if left_line && side * z_new[0] <= 0.0 {
            // crossing inside [t, t + h]: bisect on the step length
            let (mut lo, mut hi) = (0.0, h);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let (zm, _) = dp_step(c, zone, sign, z, mid);
                if side * zm[0] > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (zc, _) = dp_step(c, zone, sign, z, hi);
            return Ok((zc[1], t + hi));
        }
        if side * z_new[0] > 0.0 {
            left_line = true;
        }
        z = z_new;
        t += h;
        let grow = if err > 0.0 {
            (0.9 * (tol / err).powf(0.2)).min(5.0)
        } else {
            5.0
        };
        h *= grow;
    }
    Err(Error::NoReturn {
        y0,
        reason: "direct integration found no crossing",
    })
}

/// Backward half-map of the right zone with the system's own `b`,
/// integrated directly (no shift identity).
pub fn backward_right_direct(c: &CanonicalPWL, y0: f64, cfg: &IntegratorConfig) -> Result<f64> {
    cross_zone(c, Zone::Right, y0, true, cfg).map(|(y, _)| y)
}

/// Forward half-map of the left zone, integrated directly.
pub fn forward_left_direct(c: &CanonicalPWL, y0: f64, cfg: &IntegratorConfig) -> Result<f64> {
    cross_zone(c, Zone::Left, y0, false, cfg).map(|(y, _)| y)
}

/// Follows a full crossing orbit from `(0, y0)`: left zone forward, then
/// right zone forward. Returns `(y at the left exit, y after one turn, period)`.
pub fn full_turn(c: &CanonicalPWL, y0: f64, cfg: &IntegratorConfig) -> Result<(f64, f64, f64)> {
    let (y1, t1) = cross_zone(c, Zone::Left, y0, false, cfg)?;
    let (y2, t2) = cross_zone(c, Zone::Right, y1, false, cfg)?;
    Ok((y1, y2, t1 + t2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_turn_closes() {
        let c = CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        let (y1, y2, period) = full_turn(&c, 1.0, &IntegratorConfig::default()).unwrap();
        assert!((y1 + 1.0).abs() < 1e-10);
        assert!((y2 - 1.0).abs() < 1e-10);
        assert!((period - 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn backward_right_with_offset() {
        // right center with b = 2: y_R^b(3) = y_R(1) + 2 = 1
        let c = CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 2.0);
        let y = backward_right_direct(&c, 3.0, &IntegratorConfig::default()).unwrap();
        assert!((y - 1.0).abs() < 1e-10);
    }
}
