//! Per-instance certification of the counting chain
//!
//! ```text
//! cycles ≤ intersections(γ_b, 𝒪_b) + 1 ≤ N + k + 1 ≤ 8
//! ```
//!
//! where `γ_b = {F_b = 0}`, `𝒪_b` is the graph of `y_L` over `int(I_b)`,
//! `k` counts contact points of `γ_b` with `X_L` inside `U` and `N` counts
//! noncompact branches of `γ_b`. For `T_L = 0` the orbit is a segment of
//! `y1 = −y0` and the intersection bound is 4.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conic::{conic_report, ConicKind};
use crate::contact::{
    excluded_point, excluded_point_solves, solution_at_infinity, solve_system, ContactPolynomials,
    ContactSolutionSet, ExcludedPoint, RegionSpec, Sign,
};
use crate::displacement::{build_grid, search_interval, CycleScan, ScanConfig, Stability};
use crate::error::{Error, Result};
use crate::halfmap::eval_y_l;
use crate::lienard::CanonicalPWL;
use crate::poly::BivarPoly;

/// Normalized `|F|` below which a sample counts as lying on `γ_b`.
pub const TOUCH_TOL: f64 = 1e-10;
/// Intersection bound for the line case `T_L = 0`.
pub const LINE_CASE_BOUND: usize = 4;
/// Ceiling on hyperbolic limit cycles.
pub const CYCLE_CEILING: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub t_l_sign: Sign,
    pub k_contacts: usize,
    pub n_branches: usize,
    /// `N + k`, or 4 when `T_L = 0`.
    pub intersection_bound: usize,
    pub observed_intersections: usize,
    /// Even-contact touches included in `observed_intersections`.
    pub tangential_touches: usize,
    pub observed_cycles: usize,
    pub certified: bool,
    /// A bound of the chain was exceeded by a certified computation.
    pub violation: bool,
    pub continuum: bool,
    pub conic: Option<ConicKind>,
    pub excluded_point: Option<ExcludedPoint>,
    /// For `D_L = 0`: whether a Bezout solution sits at infinity.
    pub solution_at_infinity: Option<bool>,
    pub contacts: Option<ContactSolutionSet>,
    pub notes: Vec<String>,
}

impl CountReport {
    fn new(c: &CanonicalPWL, scan: &CycleScan) -> Self {
        let t_l_sign = Sign::of(c.t_left);
        CountReport {
            t_l_sign,
            k_contacts: 0,
            n_branches: 0,
            intersection_bound: if t_l_sign == Sign::Zero { LINE_CASE_BOUND } else { 7 },
            observed_intersections: 0,
            tangential_touches: 0,
            observed_cycles: scan.cycles.len(),
            certified: true,
            violation: false,
            continuum: scan.continuum,
            conic: None,
            excluded_point: None,
            solution_at_infinity: None,
            contacts: None,
            notes: Vec::new(),
        }
    }

    fn decline(&mut self, note: impl Into<String>) {
        self.certified = false;
        self.notes.push(note.into());
    }

    fn violate(&mut self, note: impl Into<String>) {
        self.violation = true;
        self.certified = false;
        self.notes.push(note.into());
    }
}

/// Intersections of `γ_b` with the traced orbit `𝒪_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCount {
    pub sign_changes: usize,
    pub touches: usize,
}

impl IntersectionCount {
    pub fn total(&self) -> usize {
        self.sign_changes + self.touches
    }
}

/// `F` scaled by the sum of the absolute values of its terms at the point.
fn normalized(f: &BivarPoly, y0: f64, y1: f64) -> f64 {
    let m = f.magnitude_f64(y0, y1);
    if m == 0.0 {
        0.0
    } else {
        f.eval_f64(y0, y1) / m
    }
}

/// Counts isolated intersections of `γ_b` with `𝒪_b` by tracing `y_L` over
/// `int(I_b)` (plus any `extra` ordinates, such as cycle entry points).
/// For `T_L ≠ 0` only the arc inside the region `U` is traced.
pub fn count_curve_orbit_intersections(
    c: &CanonicalPWL,
    cfg: &ScanConfig,
    extra: &[f64],
) -> Result<IntersectionCount> {
    let f = crate::contact::derive_f(c)?;
    count_intersections_with(c, &f, cfg, extra)
}

/// As [`count_curve_orbit_intersections`] with a given curve polynomial.
pub fn count_intersections_with(
    c: &CanonicalPWL,
    f: &BivarPoly,
    cfg: &ScanConfig,
    extra: &[f64],
) -> Result<IntersectionCount> {
    if f.is_zero() {
        return Err(Error::Inconclusive("F_b vanishes identically".into()));
    }
    let Some(iv) = search_interval(c, cfg.halfmap.cap) else {
        return Ok(IntersectionCount {
            sign_changes: 0,
            touches: 0,
        });
    };
    let mut ys: Vec<f64> = build_grid(&iv, cfg.grid_n).into_iter().map(|p| p.0).collect();
    ys.extend(extra.iter().copied().filter(|&y| iv.contains_interior(y)));
    ys.sort_by(f64::total_cmp);
    ys.dedup();

    // off the line case only the arc of the orbit inside U is relevant
    let region = (c.t_left != 0.0).then(|| RegionSpec::for_system(c, cfg.halfmap.cap));
    let trace = |y0: f64| -> Option<(f64, f64)> {
        let s = eval_y_l(c, y0, &cfg.halfmap).ok()?;
        if region.is_some_and(|r| !r.contains(y0, s.y1)) {
            return None;
        }
        Some((y0, normalized(f, y0, s.y1)))
    };
    let pts: Vec<(f64, f64)> = ys.par_iter().filter_map(|&y| trace(y)).collect();

    let mut run = 0;
    for &(_, v) in &pts {
        if v.abs() <= TOUCH_TOL {
            run += 1;
            if run >= crate::displacement::CONTINUUM_RUN {
                return Err(Error::Inconclusive("F_b stays within tolerance along an arc of the orbit".into()));
            }
        } else {
            run = 0;
        }
    }

    let mut count = IntersectionCount {
        sign_changes: 0,
        touches: 0,
    };
    // sign changes across samples away from γ_b; near-zero samples sit between
    let mut last_sign = 0.0;
    let mut zero_since_last = false;
    for &(_, v) in &pts {
        if v.abs() <= TOUCH_TOL {
            zero_since_last = true;
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 {
            if s != last_sign {
                count.sign_changes += 1;
            } else if zero_since_last {
                count.touches += 1;
            }
        }
        last_sign = s;
        zero_since_last = false;
    }

    // local minima of |F| without a sign change: look for hidden crossings
    for w in pts.windows(3) {
        let ((ya, fa), (_, fm), (yb, fb)) = (w[0], w[1], w[2]);
        let same = fm.abs() > TOUCH_TOL && fa * fm > 0.0 && fb * fm > 0.0;
        if !(same && fm.abs() < fa.abs() && fm.abs() < fb.abs()) {
            continue;
        }
        match refine_min(&trace, ya, yb, fm.signum()) {
            Some(MinKind::Crossing) => count.sign_changes += 2,
            Some(MinKind::Touch) => count.touches += 1,
            None => {}
        }
    }
    Ok(count)
}

enum MinKind {
    Crossing,
    Touch,
}

fn refine_min(trace: &impl Fn(f64) -> Option<(f64, f64)>, a: f64, b: f64, sign: f64) -> Option<MinKind> {
    const G: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut x1 = b - G * (b - a);
    let mut x2 = a + G * (b - a);
    let mut f1 = trace(x1)?.1;
    let mut f2 = trace(x2)?.1;
    for _ in 0..80 {
        if f1 * sign < -TOUCH_TOL || f2 * sign < -TOUCH_TOL {
            return Some(MinKind::Crossing);
        }
        if b - a <= 1e-12 * b.abs().max(1.0) {
            break;
        }
        if f1.abs() < f2.abs() {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - G * (b - a);
            f1 = trace(x1)?.1;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + G * (b - a);
            f2 = trace(x2)?.1;
        }
    }
    (f1.abs().min(f2.abs()) <= TOUCH_TOL).then_some(MinKind::Touch)
}

/// Assembles the certified chain for one instance from its cycle scan.
pub fn certify(c: &CanonicalPWL, scan: &CycleScan, cfg: &ScanConfig) -> CountReport {
    let mut r = CountReport::new(c, scan);

    // consecutive hyperbolic cycles must alternate in stability
    let hyperbolic: Vec<Stability> = scan
        .cycles
        .iter()
        .map(|cy| cy.stability)
        .filter(|s| *s != Stability::Degenerate)
        .collect();
    if hyperbolic.windows(2).any(|w| w[0] == w[1]) {
        r.decline("consecutive hyperbolic cycles share a stability class; a zero was likely missed");
    }
    if scan.cycles.iter().any(|cy| cy.stability == Stability::Degenerate) {
        r.notes.push("degenerate cycle present".into());
    }

    if scan.continuum {
        r.notes.push("continuum: δ_b vanishes on a subinterval (period annulus); no isolated cycles".into());
        return r;
    }

    let polys = match ContactPolynomials::derive(c) {
        Ok(p) => p,
        Err(e) => {
            r.violate(format!("contact polynomial construction failed: {e}"));
            return r;
        }
    };
    if polys.f.is_zero() {
        r.notes.push("F_b vanishes identically: δ_b is constant".into());
        if !scan.cycles.is_empty() {
            r.decline("cycles reported although δ_b is constant");
        }
        return r;
    }

    if r.t_l_sign == Sign::Zero {
        line_case(&polys.f, scan, cfg, &mut r);
    } else {
        general_case(c, &polys, cfg, &mut r);
    }

    match count_intersections_with(c, &polys.f, cfg, &scan.cycles.iter().map(|cy| cy.y0_star).collect::<Vec<_>>()) {
        Ok(n) => {
            r.observed_intersections = n.total();
            r.tangential_touches = n.touches;
        }
        Err(e) => r.decline(format!("intersection count: {e}")),
    }

    if r.certified {
        if r.observed_intersections > r.intersection_bound {
            r.violate(format!(
                "{} intersections exceed the bound N + k = {}",
                r.observed_intersections, r.intersection_bound
            ));
        }
        if r.observed_cycles > r.observed_intersections + 1 {
            r.violate(format!(
                "{} cycles exceed intersections + 1 = {}",
                r.observed_cycles,
                r.observed_intersections + 1
            ));
        }
    }
    if r.observed_cycles > r.intersection_bound + 1 || r.observed_cycles > CYCLE_CEILING {
        r.violate(format!("{} cycles exceed the ceiling", r.observed_cycles));
    }
    r
}

fn line_case(f: &BivarPoly, scan: &CycleScan, cfg: &ScanConfig, r: &mut CountReport) {
    r.intersection_bound = LINE_CASE_BOUND;
    r.notes.push("T_L = 0: the orbit is a segment of y1 = −y0; Bezout bound 4".into());
    // F restricted to the bisector must not vanish identically
    let on_line = crate::poly::UniPoly::new(
        (0..=f.degree())
            .map(|d| {
                f.terms()
                    .filter(|(&(i, j), _)| i + j == d)
                    .map(|(&(_, j), v)| if j % 2 == 1 { -v.clone() } else { v.clone() })
                    .fold(num_rational::BigRational::from_integer(0.into()), |acc, v| acc + v)
            })
            .collect(),
    );
    if on_line.is_zero() {
        r.decline("F_b vanishes on the bisector; intersections are not isolated");
    }
    for cy in &scan.cycles {
        if (cy.y0_star + cy.y1_star).abs() > cfg.tol.max(1e-8) * (1.0 + cy.y0_star.abs()) {
            r.decline(format!("cycle at y0 = {:e} is off the bisector", cy.y0_star));
        }
    }
}

fn general_case(c: &CanonicalPWL, polys: &ContactPolynomials, cfg: &ScanConfig, r: &mut CountReport) {
    let region = RegionSpec::for_system(c, cfg.halfmap.cap);

    if c.d_left != 0.0 {
        match (excluded_point(c, &region), excluded_point_solves(c, &polys.f_tilde, &polys.g_tilde)) {
            (Ok(e), Ok(solves)) => {
                if !solves {
                    r.violate("excluded point does not solve the transformed system");
                }
                if !e.outside {
                    r.violate("excluded point lies inside φ(U)");
                }
                r.excluded_point = Some(e);
            }
            (Err(e), _) | (_, Err(e)) => r.decline(format!("excluded point: {e}")),
        }
    } else {
        let inf = solution_at_infinity(&polys.f_tilde, &polys.g_tilde);
        r.solution_at_infinity = Some(inf);
        if !inf {
            r.decline("D_L = 0 but no Bezout solution at infinity was found");
        }
    }

    match solve_system(&polys.f_tilde, &polys.g_tilde, &region) {
        Ok(set) => {
            r.k_contacts = set.k();
            if set.uncertified_in_region() > 0 {
                r.decline("a contact solution in φ(U) has a singular Jacobian");
            }
            if set.solutions.len() > 6 {
                r.violate("more than 6 real solutions of the transformed system");
            }
            if r.k_contacts > 5 {
                r.violate(format!("{} contact points in φ(U) exceed 5", r.k_contacts));
            }
            r.notes.extend(set.notes.iter().cloned());
            r.contacts = Some(set);
        }
        Err(e) => r.decline(format!("contact system: {e}")),
    }

    if polys.f_tilde.degree() <= 2 {
        let conic = conic_report(&polys.f_tilde, &region);
        r.n_branches = conic.branches_in_region;
        r.conic = Some(conic.kind);
        if conic.singular {
            r.decline(format!("the conic F̃_b = 0 is singular ({:?})", conic.kind));
        }
    }
    r.intersection_bound = r.n_branches + r.k_contacts;
}

/// Where the traced orbit `𝒪_b` ends relative to `∂U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatingReport {
    pub lower_end: (f64, f64),
    pub upper_end: (f64, f64),
    pub lower_on_boundary: bool,
    pub upper_on_boundary: bool,
    /// The sampled orbit stays in `B⁺` (`T_L < 0`) or `B⁻` (`T_L > 0`).
    pub stays_in_sector: bool,
    /// `I_b` is truncated at the cap; the upper end is monitored only up to it.
    pub truncated: bool,
    pub notes: Vec<String>,
}

impl SeparatingReport {
    pub fn is_separating(&self) -> bool {
        self.lower_on_boundary && self.upper_on_boundary && self.stays_in_sector
    }
}

/// Checks numerically that `𝒪_b` leaves every compact subset of `U`, that is,
/// its limit points at both ends lie on `∂U`.
pub fn separating_solution_check(c: &CanonicalPWL, cfg: &ScanConfig) -> Result<SeparatingReport> {
    if c.t_left == 0.0 {
        return Err(Error::NotApplicable("T_L = 0: the orbit is a line segment"));
    }
    let iv = search_interval(c, cfg.halfmap.cap).ok_or(Error::NotApplicable("I_b has empty interior"))?;
    let region = RegionSpec::for_system(c, cfg.halfmap.cap);
    let s = region.y0_sign();
    let eps = 1e-7;

    let end_value = |y: f64, toward: f64| -> Result<(f64, f64)> {
        // the endpoint itself, or the closest point inward that returns
        let mut y_try = y;
        for k in 0..12 {
            if let Ok(smp) = eval_y_l(c, y_try, &cfg.halfmap) {
                return Ok((y_try, smp.y1));
            }
            y_try = y + (toward - y) * 10f64.powi(k - 12);
        }
        Err(Error::Inconclusive(format!("no half-map value near the end y0 = {y:e}")))
    };
    let mid = 0.5 * (iv.lo + iv.hi);
    let lower_end = end_value(iv.lo, mid)?;
    let upper_end = end_value(iv.hi, mid)?;

    let im = region.image_interval;
    let in_closure = |(y0, y1): (f64, f64)| {
        let tol = eps * (1.0 + y0.abs() + y1.abs());
        let sector = s * (y0 + y1) >= -tol && y1 <= tol;
        let image = im.is_none_or(|im| y1 >= im.lo - tol && y1 <= im.hi + tol);
        sector && image
    };
    let at_end = |(y0, _): (f64, f64), end: f64| (y0 - end).abs() <= eps * (1.0 + end.abs());

    let mut notes = Vec::new();
    let truncated = !iv.bounded;
    let lower_on_boundary = at_end(lower_end, iv.lo) && in_closure(lower_end);
    let upper_on_boundary = if truncated {
        notes.push(format!("I_b is unbounded; the orbit is monitored up to the cap {:e}", iv.hi));
        in_closure(upper_end) && upper_end.1.abs() >= lower_end.1.abs()
    } else {
        at_end(upper_end, iv.hi) && in_closure(upper_end)
    };

    let grid = build_grid(&iv, 128);
    let stays_in_sector = grid
        .iter()
        .filter_map(|&(y0, _)| eval_y_l(c, y0, &cfg.halfmap).ok().map(|smp| (y0, smp.y1)))
        .all(|(y0, y1)| s * (y0 + y1) > 0.0 && y1 < 0.0);
    if !stays_in_sector {
        notes.push("a sampled orbit point leaves the sector B".into());
    }
    Ok(SeparatingReport {
        lower_end,
        upper_end,
        lower_on_boundary,
        upper_on_boundary,
        stays_in_sector,
        truncated,
        notes,
    })
}
