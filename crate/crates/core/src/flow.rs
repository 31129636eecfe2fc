//! Closed-form solution of the scalar problem
//!
//! ```text
//! w'' − τ w' + D w = f,   w(0) = 0,   w'(0) = y0
//! ```
//!
//! Both half-maps reduce to it. For the left zone `w = −x`, `τ = T_L`,
//! `f = −a_L`; for the right zone in reversed time `w = x`, `τ = −T_R`,
//! `f = a_R`. In both cases the ordinate on the switching line equals `w'`,
//! so the first positive zero `t*` of `w` gives the image `w'(t*)`.
//!
//! Writing `h` for the impulse response (`h(0) = 0`, `h'(0) = 1`) and
//! `H = ∫₀ᵗ h`, the solution is `w = y0 h + f H`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_TERMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HalfOrbit {
    pub tau: f64,
    pub d: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Return {
    pub time: f64,
    pub y1: f64,
    pub residual: f64,
}

/// Values `(h, h', H)` at time `t`.
#[derive(Debug, Clone, Copy)]
struct Kernel {
    h: f64,
    hp: f64,
    big_h: f64,
}

impl HalfOrbit {
    #[inline]
    fn disc4(&self) -> f64 {
        self.tau * self.tau - 4.0 * self.d
    }

    /// Upper bound for the modulus of the eigenvalues.
    #[inline]
    fn rate_bound(&self) -> f64 {
        0.5 * self.tau.abs() + 0.5 * self.disc4().abs().sqrt() + self.d.abs().sqrt()
    }

    fn kernel(&self, t: f64) -> Kernel {
        if self.rate_bound() * t <= 1.0 {
            return self.kernel_series(t);
        }
        let (tau, d) = (self.tau, self.d);
        let mu = 0.5 * tau;
        let disc4 = self.disc4();
        let (h, hp) = if disc4 < 0.0 {
            let omega = 0.5 * (-disc4).sqrt();
            let e = (mu * t).exp();
            let (s, c) = (omega * t).sin_cos();
            (e * s / omega, e * (mu * s / omega + c))
        } else if disc4 == 0.0 {
            let e = (mu * t).exp();
            (t * e, e * (1.0 + mu * t))
        } else {
            let nu = 0.5 * disc4.sqrt();
            if nu * t < 1.0 {
                let e = (mu * t).exp();
                let (sh, ch) = ((nu * t).sinh(), (nu * t).cosh());
                (e * sh / nu, e * (mu * sh / nu + ch))
            } else {
                let (l1, l2) = self.real_eigenvalues();
                let (e1, e2) = ((l1 * t).exp(), (l2 * t).exp());
                let den = l1 - l2;
                ((e1 - e2) / den, (l1 * e1 - l2 * e2) / den)
            }
        };
        let big_h = if disc4 > 0.0 && d.abs() <= 0.125 * tau * tau {
            // one eigenvalue is small; the equilibrium form would cancel
            let (l1, l2) = self.real_eigenvalues();
            (expm1_over(l1, t) - expm1_over(l2, t)) / (l1 - l2)
        } else {
            (1.0 - (hp - tau * h)) / d
        };
        Kernel { h, hp, big_h }
    }

    /// Stable pair of real eigenvalues, larger magnitude first.
    fn real_eigenvalues(&self) -> (f64, f64) {
        let sq = self.disc4().sqrt();
        let s = if self.tau >= 0.0 { 1.0 } else { -1.0 };
        let l1 = 0.5 * (self.tau + s * sq);
        (l1, self.d / l1)
    }

    fn kernel_series(&self, t: f64) -> Kernel {
        let (tau, d) = (self.tau, self.d);
        let mut c = [0.0f64; SERIES_TERMS];
        c[1] = 1.0;
        for n in 0..SERIES_TERMS - 2 {
            let n1 = (n + 1) as f64;
            let n2 = (n + 2) as f64;
            c[n + 2] = (tau * n1 * c[n + 1] - d * c[n]) / (n1 * n2);
        }
        let (mut h, mut hp, mut big_h) = (0.0, 0.0, 0.0);
        let mut pow = 1.0; // t^(n-1)
        for (n, &cn) in c.iter().enumerate().skip(1) {
            let nf = n as f64;
            hp += nf * cn * pow;
            h += cn * pow * t;
            big_h += cn * pow * t * t / (nf + 1.0);
            pow *= t;
        }
        Kernel { h, hp, big_h }
    }

    /// `(w(t), w'(t))` for initial slope `y0`.
    #[inline]
    pub fn state(&self, y0: f64, t: f64) -> (f64, f64) {
        let k = self.kernel(t);
        (y0 * k.h + self.f * k.big_h, y0 * k.hp + self.f * k.h)
    }

    /// First positive zero of `w` and the slope there.
    pub fn first_return(&self, y0: f64, tol: f64, horizon_steps: usize) -> Result<Return> {
        if y0 == 0.0 {
            return Ok(Return {
                time: 0.0,
                y1: 0.0,
                residual: 0.0,
            });
        }
        let disc4 = self.disc4();
        let (tau, d, f) = (self.tau, self.d, self.f);

        // Real stable spectrum: w has a single maximum and then decreases
        // monotonically to f/D, so a return happens iff f < 0.
        if disc4 >= 0.0 && tau < 0.0 && d > 0.0 && f >= 0.0 {
            return Err(Error::NoReturn {
                y0,
                reason: "orbit converges to an equilibrium",
            });
        }

        let base = (2.0 * PI / disc4.abs().max(1.0).sqrt()).min(1.0) / 4.0;
        let mut t_max = base * 4.0 * horizon_steps as f64;
        if disc4 < 0.0 && tau <= 0.0 {
            // minima of a non-expanding spiral never decrease after one turn
            let period = 2.0 * PI / (0.5 * (-disc4).sqrt());
            t_max = t_max.min(1.05 * period + base);
        }
        let guess = if f < 0.0 { (2.0 * y0 / -f).min(base) } else { base };
        let t0 = guess / 64.0;
        let escape = 1e15 * (1.0 + y0.abs() + f.abs());

        let mut lo = 0.0;
        let mut t = t0;
        let hi = loop {
            let (w, _) = self.state(y0, t);
            if !w.is_finite() || w > escape {
                return Err(Error::NoReturn {
                    y0,
                    reason: "orbit escapes to infinity",
                });
            }
            if w <= 0.0 {
                break t;
            }
            if t >= t_max {
                return Err(Error::NoReturn {
                    y0,
                    reason: "no return within the time horizon",
                });
            }
            lo = t;
            t += t.max(t0).min(base);
        };

        let time = self.refine(y0, lo, hi);
        let (w, wp) = self.state(y0, time);
        let residual = w.abs();
        if residual > tol * (1.0 + y0.abs() + f.abs()) {
            return Err(Error::NoReturn {
                y0,
                reason: "return point not resolved to tolerance",
            });
        }
        Ok(Return {
            time,
            y1: wp.min(0.0),
            residual,
        })
    }

    /// Safeguarded Newton on `w(t) = 0` with `w(lo) > 0` (or `lo = 0`) and
    /// `w(hi) <= 0`.
    fn refine(&self, y0: f64, mut lo: f64, mut hi: f64) -> f64 {
        let mut t = hi;
        let (mut w, mut wp) = self.state(y0, t);
        for _ in 0..200 {
            if w == 0.0 || hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
            let mut next = t - w / wp;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if next == t {
                break;
            }
            t = next;
            (w, wp) = self.state(y0, t);
            if w > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
        }
        // prefer the endpoint with the smaller residual
        let (w_lo, _) = self.state(y0, lo);
        let (w_hi, _) = self.state(y0, hi);
        if lo > 0.0 && w_lo.abs() < w_hi.abs() {
            lo
        } else {
            hi
        }
    }
}

#[inline]
fn expm1_over(l: f64, t: f64) -> f64 {
    if l == 0.0 {
        t
    } else {
        (l * t).exp_m1() / l
    }
}
