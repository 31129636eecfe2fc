//! Classification of the conic `F̃_b = 0` and its noncompact branches.
//!
//! The type is decided exactly from the invariants of the symmetric matrix
//! of `A Y0² + B Y0 Y1 + C Y1² + D Y0 + E Y1 + F`. Whether a branch meets
//! the open quadrant `{Y1 < 0, s Y0 > 0}` is decided on an explicit
//! parametrization in floating point.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::contact::RegionSpec;
use crate::poly::bivar::determinant;
use crate::poly::univar::rat;
use crate::poly::BivarPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    /// No real points.
    Empty,
    Ellipse,
    Parabola,
    Hyperbola,
    /// A single real point (degenerate ellipse).
    Point,
    IntersectingLines,
    ParallelLines,
    /// A double line.
    CoincidentLines,
    /// The polynomial has degree one.
    Line,
}

impl ConicKind {
    /// Number of noncompact connected components in the whole plane.
    pub fn noncompact_branches(self) -> usize {
        match self {
            ConicKind::Empty | ConicKind::Ellipse | ConicKind::Point => 0,
            ConicKind::Parabola | ConicKind::CoincidentLines | ConicKind::Line => 1,
            // two crossing lines form one connected set
            ConicKind::IntersectingLines => 1,
            ConicKind::Hyperbola | ConicKind::ParallelLines => 2,
        }
    }

    /// Whether the real locus fails to be a smooth curve.
    pub fn singular(self) -> bool {
        matches!(
            self,
            ConicKind::Point | ConicKind::IntersectingLines | ConicKind::CoincidentLines
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicReport {
    pub kind: ConicKind,
    pub singular: bool,
    /// Noncompact branches in the plane.
    pub branches_total: usize,
    /// Noncompact branches meeting the open quadrant of the region.
    pub branches_in_region: usize,
}

struct Coeffs {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
    e: BigRational,
    f: BigRational,
}

fn coeffs(p: &BivarPoly) -> Coeffs {
    Coeffs {
        a: p.coeff(2, 0),
        b: p.coeff(1, 1),
        c: p.coeff(0, 2),
        d: p.coeff(1, 0),
        e: p.coeff(0, 1),
        f: p.coeff(0, 0),
    }
}

/// Exact type of the conic. Panics if `p` has degree above two or is zero.
pub fn classify_conic(p: &BivarPoly) -> ConicKind {
    assert!(p.degree() <= 2 && !p.is_zero(), "expected a nonzero polynomial of degree at most 2");
    let k = coeffs(p);
    let half = rat(1) / rat(2);
    if k.a.is_zero() && k.b.is_zero() && k.c.is_zero() {
        return if k.d.is_zero() && k.e.is_zero() {
            ConicKind::Empty
        } else {
            ConicKind::Line
        };
    }
    let (b2, d2, e2) = (&k.b * &half, &k.d * &half, &k.e * &half);
    let big_delta = determinant(vec![
        vec![k.a.clone(), b2.clone(), d2.clone()],
        vec![b2.clone(), k.c.clone(), e2.clone()],
        vec![d2.clone(), e2.clone(), k.f.clone()],
    ]);
    let delta2 = &k.a * &k.c - &b2 * &b2;
    let trace = &k.a + &k.c;

    if !big_delta.is_zero() {
        if delta2.is_positive() {
            // real iff trace and Δ have opposite signs
            if (&trace * &big_delta).is_negative() {
                ConicKind::Ellipse
            } else {
                ConicKind::Empty
            }
        } else if delta2.is_zero() {
            ConicKind::Parabola
        } else {
            ConicKind::Hyperbola
        }
    } else if delta2.is_negative() {
        ConicKind::IntersectingLines
    } else if delta2.is_positive() {
        ConicKind::Point
    } else {
        let kk = (&k.a * &k.f - &d2 * &d2) + (&k.c * &k.f - &e2 * &e2);
        if kk.is_negative() {
            ConicKind::ParallelLines
        } else if kk.is_zero() {
            ConicKind::CoincidentLines
        } else {
            ConicKind::Empty
        }
    }
}

/// Whether the line `p + t d` meets the open quadrant `{Y1 < 0, s Y0 > 0}`.
fn line_meets(p: [f64; 2], d: [f64; 2], s: f64) -> bool {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let norm = d[0].hypot(d[1]);
    let d = [d[0] / norm, d[1] / norm];
    // constraints of the form α + t β > 0; rounding-level tilts count as none
    for (alpha, beta) in [(-p[1], -d[1]), (s * p[0], s * d[0])] {
        if beta.abs() <= 1e-13 {
            if alpha <= 0.0 {
                return false;
            }
        } else if beta > 0.0 {
            lo = lo.max(-alpha / beta);
        } else {
            hi = hi.min(-alpha / beta);
        }
    }
    lo < hi
}

/// Strict membership with a relative margin, so that points lying on an
/// asymptote up to rounding count as boundary points.
fn in_quadrant(q: [f64; 2], s: f64) -> bool {
    let margin = 1e-12 * (q[0].abs() + q[1].abs());
    q[1] < -margin && s * q[0] > margin
}

fn samples_meet(s: f64, f: impl Fn(f64) -> [f64; 2]) -> bool {
    const N: usize = 8001;
    (0..N).any(|i| {
        let t = -16.0 + 32.0 * i as f64 / (N - 1) as f64;
        in_quadrant(f(t), s)
    })
}

/// Eigen-decomposition of `[[a, h], [h, c]]`: `(λ1, λ2, e1, e2)`.
fn sym_eigen(a: f64, h: f64, c: f64) -> (f64, f64, [f64; 2], [f64; 2]) {
    if h == 0.0 {
        return (a, c, [1.0, 0.0], [0.0, 1.0]);
    }
    let theta = 0.5 * (2.0 * h).atan2(a - c);
    let (sn, cs) = theta.sin_cos();
    let e1 = [cs, sn];
    let e2 = [-sn, cs];
    let l1 = a * cs * cs + 2.0 * h * cs * sn + c * sn * sn;
    let l2 = a * sn * sn - 2.0 * h * cs * sn + c * cs * cs;
    (l1, l2, e1, e2)
}

/// Number of noncompact branches of `F̃ = 0` meeting the open quadrant
/// `{Y1 < 0, −sign(T_L) Y0 > 0}`, never more than two.
pub fn count_noncompact_components(ft: &BivarPoly, region: &RegionSpec) -> usize {
    conic_report(ft, region).branches_in_region
}

pub fn conic_report(ft: &BivarPoly, region: &RegionSpec) -> ConicReport {
    let kind = classify_conic(ft);
    let s = region.y0_sign();
    let branches_in_region = if s == 0.0 { 0 } else { branches_meeting(ft, kind, s) };
    let singular = match kind {
        // the crossing of two lines, or an isolated point, is harmless off the open quadrant
        ConicKind::IntersectingLines | ConicKind::Point => s == 0.0 || singular_point_in_quadrant(ft, s),
        k => k.singular(),
    };
    ConicReport {
        kind,
        singular,
        branches_total: kind.noncompact_branches(),
        branches_in_region: branches_in_region.min(2),
    }
}

/// Exact test of the unique singular point of a conic with `4AC ≠ B²`.
fn singular_point_in_quadrant(ft: &BivarPoly, s: f64) -> bool {
    let k = coeffs(ft);
    let det = rat(4) * &k.a * &k.c - &k.b * &k.b;
    let x = (&k.b * &k.e - rat(2) * &k.c * &k.d) / &det;
    let y = (&k.b * &k.d - rat(2) * &k.a * &k.e) / &det;
    y.is_negative() && if s > 0.0 { x.is_positive() } else { x.is_negative() }
}

fn branches_meeting(ft: &BivarPoly, kind: ConicKind, s: f64) -> usize {
    let k = coeffs(ft);
    let f64_of = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
    let (a, b, c, d, e, f) = (f64_of(&k.a), f64_of(&k.b), f64_of(&k.c), f64_of(&k.d), f64_of(&k.e), f64_of(&k.f));
    let h = 0.5 * b;
    let center = || {
        let det = a * c - h * h;
        [(-0.5 * d * c + 0.5 * e * h) / det, (-0.5 * e * a + 0.5 * d * h) / det]
    };
    let add = |p: [f64; 2], u: f64, e1: [f64; 2], v: f64, e2: [f64; 2]| {
        [p[0] + u * e1[0] + v * e2[0], p[1] + u * e1[1] + v * e2[1]]
    };
    match kind {
        ConicKind::Empty | ConicKind::Ellipse | ConicKind::Point => 0,
        ConicKind::Line => {
            // d Y0 + e Y1 + f = 0
            let n2 = d * d + e * e;
            let p = [-f * d / n2, -f * e / n2];
            usize::from(line_meets(p, [-e, d], s))
        }
        ConicKind::Hyperbola => {
            let p = center();
            let (l1, l2, e1, e2) = sym_eigen(a, h, c);
            let fc = f + 0.5 * (d * p[0] + e * p[1]);
            // λ1 u² + λ2 v² + fc = 0; the branches open along whichever axis
            // carries the sign opposite to fc
            let (l1, l2, e1, e2) = if -fc / l1 > 0.0 { (l1, l2, e1, e2) } else { (l2, l1, e2, e1) };
            let ru = (-fc / l1).sqrt();
            let rv = (fc / l2).sqrt();
            [1.0, -1.0]
                .iter()
                .filter(|&&sg| samples_meet(s, |t| add(p, sg * ru * t.cosh(), e1, rv * t.sinh(), e2)))
                .count()
        }
        ConicKind::Parabola => {
            let (l1, l2, e1, e2) = sym_eigen(a, h, c);
            let (lam, ea, eb) = if l1.abs() >= l2.abs() { (l1, e1, e2) } else { (l2, e2, e1) };
            let q = d * ea[0] + e * ea[1];
            let r = d * eb[0] + e * eb[1];
            let scale = 1.0 + (q / lam).abs() + (f / lam).abs().sqrt();
            usize::from(samples_meet(s, |t| {
                let u = scale * t.sinh();
                let v = -(lam * u * u + q * u + f) / r;
                add([0.0, 0.0], u, ea, v, eb)
            }))
        }
        ConicKind::ParallelLines | ConicKind::CoincidentLines => {
            let (l1, l2, e1, e2) = sym_eigen(a, h, c);
            let (lam, ea, eb) = if l1.abs() >= l2.abs() { (l1, e1, e2) } else { (l2, e2, e1) };
            let q = d * ea[0] + e * ea[1];
            let disc = (q * q - 4.0 * lam * f).max(0.0).sqrt();
            let mut us = vec![(-q - disc) / (2.0 * lam), (-q + disc) / (2.0 * lam)];
            if kind == ConicKind::CoincidentLines {
                us.truncate(1);
            }
            us.iter().filter(|&&u| line_meets([u * ea[0], u * ea[1]], eb, s)).count()
        }
        ConicKind::IntersectingLines => {
            let p = center();
            let (l1, l2, e1, e2) = sym_eigen(a, h, c);
            let m = (-l1 / l2).sqrt();
            [m, -m]
                .iter()
                .filter(|&&m| line_meets(p, [e1[0] + m * e2[0], e1[1] + m * e2[1]], s))
                .count()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::Sign;

    fn p(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(k, c)| (k, rat(c))))
    }

    fn region(sign: Sign) -> RegionSpec {
        RegionSpec {
            t_l_sign: sign,
            i_b: None,
            image_interval: None,
        }
    }

    #[test]
    fn textbook_conics() {
        let ellipse = p(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]);
        assert_eq!(classify_conic(&ellipse), ConicKind::Ellipse);
        assert_eq!(classify_conic(&ellipse).noncompact_branches(), 0);
        assert_eq!(count_noncompact_components(&ellipse, &region(Sign::Neg)), 0);

        let hyperbola = p(&[((1, 1), 1), ((0, 0), -1)]);
        assert_eq!(classify_conic(&hyperbola), ConicKind::Hyperbola);
        assert!(count_noncompact_components(&hyperbola, &region(Sign::Neg)) <= 2);

        let parallel = p(&[((0, 2), 1), ((0, 0), -1)]);
        assert_eq!(classify_conic(&parallel), ConicKind::ParallelLines);
        assert_eq!(classify_conic(&parallel).noncompact_branches(), 2);
        // only Y1 = −1 reaches the lower half-plane
        assert_eq!(count_noncompact_components(&parallel, &region(Sign::Neg)), 1);

        assert_eq!(classify_conic(&p(&[((2, 0), 1), ((0, 2), 1), ((0, 0), 1)])), ConicKind::Empty);
        assert_eq!(classify_conic(&p(&[((2, 0), 1), ((0, 1), -1)])), ConicKind::Parabola);
        assert_eq!(classify_conic(&p(&[((2, 0), 1), ((0, 2), -1)])), ConicKind::IntersectingLines);
        assert_eq!(classify_conic(&p(&[((2, 0), 1), ((0, 2), 1)])), ConicKind::Point);
        assert_eq!(classify_conic(&p(&[((0, 2), 1), ((0, 1), 2), ((0, 0), 1)])), ConicKind::CoincidentLines);
    }

    #[test]
    fn crossing_lines_off_the_quadrant_are_smooth_there() {
        // Y1 (Y0 + Y1 + 1): crossing at (−1, 0) on the boundary
        let lines = p(&[((1, 1), 1), ((0, 2), 1), ((0, 1), 1)]);
        let r = conic_report(&lines, &region(Sign::Pos));
        assert_eq!(r.kind, ConicKind::IntersectingLines);
        assert!(!r.singular);
        assert_eq!(r.branches_in_region, 1);
        // (Y0 − 1)(Y1 + 1) crosses at (1, −1), inside the quadrant for Y0 > 0
        let lines = p(&[((1, 1), 1), ((1, 0), 1), ((0, 1), -1), ((0, 0), -1)]);
        assert!(conic_report(&lines, &region(Sign::Neg)).singular);
        assert!(!conic_report(&lines, &region(Sign::Pos)).singular);
    }

    #[test]
    fn hyperbola_branches_by_quadrant() {
        // Y0 Y1 = 1 lives in the first and third quadrants
        let h = p(&[((1, 1), 1), ((0, 0), -1)]);
        // lower half-plane with Y0 < 0 (T_L > 0)
        assert_eq!(count_noncompact_components(&h, &region(Sign::Pos)), 1);
        assert_eq!(count_noncompact_components(&h, &region(Sign::Neg)), 0);
        // Y0 Y1 = −1: second and fourth quadrants
        let h = p(&[((1, 1), 1), ((0, 0), 1)]);
        assert_eq!(count_noncompact_components(&h, &region(Sign::Neg)), 1);
    }

    #[test]
    fn parabola_and_lines_in_quadrant() {
        // Y1 = Y0² − 1 dips below zero on both sides of the axis
        let par = p(&[((2, 0), 1), ((0, 1), -1), ((0, 0), -1)]);
        assert_eq!(count_noncompact_components(&par, &region(Sign::Neg)), 1);
        // Y1 = Y0² + 1 never does
        let par = p(&[((2, 0), 1), ((0, 1), -1), ((0, 0), 1)]);
        assert_eq!(count_noncompact_components(&par, &region(Sign::Neg)), 0);
        // the line Y1 = 1 misses, Y0 + Y1 = 0 meets the fourth quadrant
        assert_eq!(count_noncompact_components(&p(&[((0, 1), 1), ((0, 0), -1)]), &region(Sign::Neg)), 0);
        assert_eq!(count_noncompact_components(&p(&[((0, 1), 1), ((1, 0), 1)]), &region(Sign::Neg)), 1);
        // no quadrant when T_L = 0
        assert_eq!(count_noncompact_components(&par, &region(Sign::Zero)), 0);
    }
}
