//! The displacement function `δ_b(y0) = y_R^b(y0) − y_L(y0)` and its zeros.
//!
//! Zeros of `δ_b` in the interior of `I_b = I_L ∩ (I_R + b)` are crossing
//! periodic orbits; simple zeros are hyperbolic limit cycles. A cycle is
//! attracting when `δ_b' < 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfmap::{deriv_y_l, deriv_y_r, eval_y_l, eval_y_rb, HalfMapConfig};
use crate::lienard::{domain_interval, CanonicalPWL, DomainInterval};

/// Number of consecutive near-zero grid values that flags a continuum.
pub const CONTINUUM_RUN: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Attracting,
    Repelling,
    Degenerate,
}

/// One crossing limit cycle through `(0, y0_star)` and `(0, y1_star)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub y0_star: f64,
    pub y1_star: f64,
    pub stability: Stability,
    pub delta_residual: f64,
    /// `F_b(y0_star, y1_star)`; its sign is the sign of `δ_b'`.
    pub fprime_value: f64,
}

impl CycleRecord {
    pub const CSV_HEADER: &'static str = "y0_star,y1_star,stability,delta_residual,fprime_value";

    pub fn csv_row(&self) -> String {
        let s = match self.stability {
            Stability::Attracting => "attracting",
            Stability::Repelling => "repelling",
            Stability::Degenerate => "degenerate",
        };
        format!(
            "{:.16e},{:.16e},{},{:.16e},{:.16e}",
            self.y0_star, self.y1_star, s, self.delta_residual, self.fprime_value
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub grid_n: usize,
    /// Zero tolerance, applied relative to `1 + |y0|`.
    pub tol: f64,
    pub halfmap: HalfMapConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            grid_n: 512,
            tol: 1e-10,
            halfmap: HalfMapConfig::default(),
        }
    }
}

/// Result of a cycle search over `int(I_b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleScan {
    pub cycles: Vec<CycleRecord>,
    /// Zeros within tolerance of an endpoint of `I_b`; never counted as cycles.
    pub boundary_suspects: Vec<f64>,
    /// `δ_b` vanishes on a whole subinterval (a period annulus).
    pub continuum: bool,
    /// `I_b`, or `None` when its interior is empty.
    pub interval: Option<DomainInterval>,
    /// Grid points where a half-map could not be evaluated.
    pub failures: usize,
    pub cap: f64,
    pub warnings: Vec<String>,
}

/// Values of both half-maps and of `δ_b` at one ordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSample {
    pub y0: f64,
    pub y_left: f64,
    pub y_right: f64,
    pub delta: f64,
}

/// `I_b = I_L ∩ (I_R + b)`; `None` when the interior is empty.
pub fn search_interval(c: &CanonicalPWL, cap: f64) -> Option<DomainInterval> {
    let il = domain_interval(&c.w_left(), cap).domain;
    let ir = domain_interval(&c.w_right(), cap).domain.shifted(c.b);
    il.intersect(&ir)
}

pub fn delta_sample(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<DeltaSample> {
    let l = eval_y_l(c, y0, cfg)?;
    let r = eval_y_rb(c, y0, cfg)?;
    Ok(DeltaSample {
        y0,
        y_left: l.y1,
        y_right: r.y1,
        delta: r.y1 - l.y1,
    })
}

/// `δ_b(y0)`.
pub fn delta(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<f64> {
    delta_sample(c, y0, cfg).map(|s| s.delta)
}

/// `δ_b'(y0)` from the closed-form half-map derivatives.
pub fn delta_prime(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<f64> {
    let s = delta_sample(c, y0, cfg)?;
    let dr = deriv_y_r(c, y0 - c.b, s.y_right - c.b)?;
    let dl = deriv_y_l(c, y0, s.y_left)?;
    Ok(dr - dl)
}

/// `∂δ_b(y0)/∂b = 1 − y_R'(y0 − b)`.
pub fn db_derivative(c: &CanonicalPWL, y0: f64, cfg: &HalfMapConfig) -> Result<f64> {
    if y0 == c.b {
        return Err(Error::Singularity("y0 equals b"));
    }
    let r = eval_y_rb(c, y0, cfg)?;
    Ok(1.0 - deriv_y_r(c, y0 - c.b, r.y1 - c.b)?)
}

/// `F_b(y0, y1)` evaluated in floating point from its defining quotient
/// `N(y0, y1) / (y0 − y1)`.
pub fn contact_value(c: &CanonicalPWL, y0: f64, y1: f64) -> f64 {
    let (wl, wr, b) = (c.w_left(), c.w_right(), c.b);
    let n = (y0 - b) * wr.eval(y1 - b) * y1 * wl.eval(y0) - y0 * wl.eval(y1) * (y1 - b) * wr.eval(y0 - b);
    n / (y0 - y1)
}

fn degenerate_threshold(y0: f64) -> f64 {
    1e-8 * (1.0 + y0.abs()).powi(4)
}

pub fn classify(fprime: f64, y0: f64) -> Stability {
    if fprime.abs() <= degenerate_threshold(y0) {
        Stability::Degenerate
    } else if fprime < 0.0 {
        Stability::Attracting
    } else {
        Stability::Repelling
    }
}

/// Search grid over the interior of `iv`: Chebyshev-clustered points in the
/// linear coordinate plus geometric points approaching each finite end.
/// The flag marks the linear part.
pub(crate) fn build_grid(iv: &DomainInterval, n: usize) -> Vec<(f64, bool)> {
    let (lo, hi) = (iv.lo, iv.hi);
    let w = hi - lo;
    let n_lin = n / 2;
    let n_geo = n - n_lin;
    let mut pts: Vec<(f64, bool)> = Vec::with_capacity(n);
    for k in 0..n_lin {
        let u = std::f64::consts::PI * (k as f64 + 0.5) / n_lin as f64;
        pts.push((lo + w * 0.5 * (1.0 - u.cos()), true));
    }
    let geo = |count: usize, start: f64, end: f64| -> Vec<f64> {
        let ratio = (end / start).ln();
        (0..count)
            .map(|k| start * (ratio * k as f64 / (count.max(2) - 1) as f64).exp())
            .collect()
    };
    let s_min = (1e-7 * (1.0 + lo.abs())).min(1e-3 * w);
    if iv.bounded {
        let half = n_geo / 2;
        for d in geo(half, s_min, 0.5 * w) {
            pts.push((lo + d, false));
        }
        let s_hi = (1e-7 * (1.0 + hi.abs())).min(1e-3 * w);
        for d in geo(n_geo - half, s_hi, 0.5 * w) {
            pts.push((hi - d, false));
        }
    } else {
        for d in geo(n_geo, s_min, w) {
            pts.push((lo + d, false));
        }
    }
    pts.retain(|&(y, _)| y > lo && y < hi);
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-15 * a.0.abs().max(1.0));
    pts
}

pub(crate) fn zero_tol(tol: f64, y: f64) -> f64 {
    tol * (1.0 + y.abs())
}

/// Bisection on a sign change of `δ`; returns the final sample.
fn bisect(c: &CanonicalPWL, mut a: DeltaSample, mut b: DeltaSample, cfg: &ScanConfig) -> DeltaSample {
    let mut best = if a.delta.abs() <= b.delta.abs() { a } else { b };
    for _ in 0..400 {
        let mid = 0.5 * (a.y0 + b.y0);
        if mid <= a.y0 || mid >= b.y0 {
            break;
        }
        let width_ok = b.y0 - a.y0 <= 1e-12 * mid.abs().max(1.0);
        if width_ok && best.delta.abs() <= zero_tol(cfg.tol, best.y0) {
            break;
        }
        let Ok(m) = delta_sample(c, mid, &cfg.halfmap) else { break };
        if m.delta.abs() < best.delta.abs() || width_ok {
            best = m;
        }
        if m.delta == 0.0 {
            return m;
        }
        if (m.delta > 0.0) == (a.delta > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    best
}

enum MinOutcome {
    Split(DeltaSample),
    Touch(DeltaSample),
    Clear,
}

/// Golden-section search for the minimum of `|δ|` on `[a, b]` where the
/// middle sample has the same sign as both ends.
fn refine_minimum(c: &CanonicalPWL, a: f64, b: f64, sign: f64, cfg: &ScanConfig) -> MinOutcome {
    const G: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let eval = |y: f64| delta_sample(c, y, &cfg.halfmap).ok();
    let mut x1 = b - G * (b - a);
    let mut x2 = a + G * (b - a);
    let (Some(mut f1), Some(mut f2)) = (eval(x1), eval(x2)) else {
        return MinOutcome::Clear;
    };
    for _ in 0..80 {
        for s in [f1, f2] {
            if s.delta * sign < 0.0 || s.delta == 0.0 {
                return if s.delta == 0.0 {
                    MinOutcome::Touch(s)
                } else {
                    MinOutcome::Split(s)
                };
            }
        }
        if b - a <= 1e-12 * b.abs().max(1.0) {
            break;
        }
        if f1.delta.abs() < f2.delta.abs() {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - G * (b - a);
            let Some(f) = eval(x1) else { return MinOutcome::Clear };
            f1 = f;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + G * (b - a);
            let Some(f) = eval(x2) else { return MinOutcome::Clear };
            f2 = f;
        }
    }
    let best = if f1.delta.abs() < f2.delta.abs() { f1 } else { f2 };
    if best.delta.abs() <= zero_tol(cfg.tol, best.y0) {
        MinOutcome::Touch(best)
    } else {
        MinOutcome::Clear
    }
}

/// Samples per side clustered against an edge of the set where `δ_b` is defined.
const EDGE_POINTS: usize = 32;

/// Where a grid point without a half-map value neighbors one with a value,
/// bisects for the edge of the defined set and samples geometrically away
/// from it. Orbits that spiral into a real equilibrium never return, so the
/// defined set can start strictly inside `I_b`, and a zero of `δ_b` between
/// that edge and the next grid point would otherwise go unbracketed.
fn domain_edges(
    c: &CanonicalPWL,
    samples: &[(f64, Option<DeltaSample>, bool)],
    cfg: &ScanConfig,
) -> (Vec<f64>, Vec<DeltaSample>) {
    let (mut edges, mut out) = (Vec::new(), Vec::new());
    for w in samples.windows(2) {
        let (mut good, mut bad) = match (&w[0].1, &w[1].1) {
            (None, Some(_)) => (w[1].0, w[0].0),
            (Some(_), None) => (w[0].0, w[1].0),
            _ => continue,
        };
        let far = good;
        let mut edge_sample = None;
        for _ in 0..200 {
            let mid = 0.5 * (good + bad);
            if mid == good || mid == bad {
                break;
            }
            match delta_sample(c, mid, &cfg.halfmap) {
                Ok(s) => {
                    good = mid;
                    edge_sample = Some(s);
                }
                Err(_) => bad = mid,
            }
        }
        edges.push(good);
        out.extend(edge_sample);
        let span = far - good;
        for k in 0..EDGE_POINTS {
            let d = span * 1e-9f64.powf(1.0 - k as f64 / (EDGE_POINTS - 1) as f64);
            if let Ok(s) = delta_sample(c, good + d, &cfg.halfmap) {
                out.push(s);
            }
        }
    }
    (edges, out)
}

/// Locates the zeros of `δ_b` on `int(I_b)` and classifies each cycle.
pub fn find_cycles(c: &CanonicalPWL, grid_n: usize, tol: f64) -> CycleScan {
    find_cycles_with(
        c,
        &ScanConfig {
            grid_n,
            tol,
            ..ScanConfig::default()
        },
    )
}

pub fn find_cycles_with(c: &CanonicalPWL, cfg: &ScanConfig) -> CycleScan {
    assert!(cfg.grid_n >= 64, "grid must have at least 64 points");
    let cap = cfg.halfmap.cap;
    let mut scan = CycleScan {
        cycles: Vec::new(),
        boundary_suspects: Vec::new(),
        continuum: false,
        interval: search_interval(c, cap),
        failures: 0,
        cap,
        warnings: Vec::new(),
    };
    let Some(iv) = scan.interval else {
        scan.warnings.push("I_b has empty interior".into());
        return scan;
    };

    let grid = build_grid(&iv, cfg.grid_n);
    let samples: Vec<(f64, Option<DeltaSample>, bool)> = grid
        .par_iter()
        .map(|&(y, linear)| (y, delta_sample(c, y, &cfg.halfmap).ok(), linear))
        .collect();
    scan.failures = samples.iter().filter(|s| s.1.is_none()).count();
    if scan.failures > 0 {
        scan.warnings.push(format!(
            "{} of {} grid points have no half-map value and were skipped",
            scan.failures,
            samples.len()
        ));
    }

    // continuum: a long run of near-zero values on the linear subgrid
    let mut run = 0;
    for (_, s, linear) in &samples {
        if !linear {
            continue;
        }
        match s {
            Some(s) if s.delta.abs() <= zero_tol(cfg.tol, s.y0) => {
                run += 1;
                if run >= CONTINUUM_RUN {
                    scan.continuum = true;
                    return scan;
                }
            }
            _ => run = 0,
        }
    }

    let (edges, edge_samples) = domain_edges(c, &samples, cfg);
    let mut ok: Vec<DeltaSample> = samples.iter().filter_map(|s| s.1).chain(edge_samples).collect();
    ok.sort_by(|a, b| a.y0.total_cmp(&b.y0));
    ok.dedup_by(|a, b| a.y0 == b.y0);
    let mut zeros: Vec<DeltaSample> = Vec::new();
    let mut brackets: Vec<(DeltaSample, DeltaSample)> = Vec::new();
    for (i, s) in ok.iter().enumerate() {
        if s.delta == 0.0 {
            zeros.push(*s);
            continue;
        }
        if let Some(next) = ok.get(i + 1) {
            if next.delta != 0.0 && (s.delta > 0.0) != (next.delta > 0.0) {
                brackets.push((*s, *next));
            }
        }
    }
    for w in ok.windows(3) {
        let (p, m, n) = (w[0], w[1], w[2]);
        let same = m.delta != 0.0 && m.delta * p.delta > 0.0 && m.delta * n.delta > 0.0;
        if same && m.delta.abs() < p.delta.abs() && m.delta.abs() < n.delta.abs() {
            match refine_minimum(c, p.y0, n.y0, m.delta.signum(), cfg) {
                MinOutcome::Split(s) => {
                    brackets.push((p, s));
                    brackets.push((s, n));
                }
                MinOutcome::Touch(s) => zeros.push(s),
                MinOutcome::Clear => {}
            }
        }
    }
    zeros.extend(brackets.into_iter().map(|(a, b)| bisect(c, a, b, cfg)));
    zeros.sort_by(|a, b| a.y0.total_cmp(&b.y0));
    zeros.dedup_by(|a, b| (a.y0 - b.y0).abs() <= 1e-9 * a.y0.abs().max(1.0));

    for z in zeros {
        let near_lo = z.y0 - iv.lo <= zero_tol(cfg.tol, iv.lo);
        let near_hi = iv.hi - z.y0 <= zero_tol(cfg.tol, iv.hi);
        let near_edge = edges.iter().any(|&e| (z.y0 - e).abs() <= zero_tol(cfg.tol, e));
        if near_lo || near_hi || near_edge {
            scan.boundary_suspects.push(z.y0);
            continue;
        }
        if z.delta.abs() > zero_tol(cfg.tol, z.y0) {
            scan.warnings.push(format!(
                "zero near y0 = {:e} only resolved to |δ| = {:e}",
                z.y0,
                z.delta.abs()
            ));
        }
        let f = contact_value(c, z.y0, z.y_left);
        scan.cycles.push(CycleRecord {
            y0_star: z.y0,
            y1_star: z.y_left,
            stability: classify(f, z.y0),
            delta_residual: z.delta,
            fprime_value: f,
        });
    }
    scan
}
