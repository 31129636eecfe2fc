//! Contact polynomials of the displacement problem.
//!
//! `F_b` is the symmetric quartic with `δ_b'(y0*) ∝ F_b(y0*, y1*)` at every
//! crossing periodic orbit, and `G_b = ⟨∇F_b, X_L⟩` marks the contact points
//! of the curve `F_b = 0` with the cubic field
//! `X_L(y0, y1) = −(y1 W_L(y0), y0 W_L(y1))` whose orbits are graphs of `y_L`.
//! Both are rewritten in `(Y0, Y1) = (y0 + y1, y0 y1)` and the transformed
//! system is solved exactly. All coefficient arithmetic is rational.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lienard::{domain_interval, CanonicalPWL, DomainInterval, DEFAULT_CAP};
use crate::poly::bivar::sylvester_det;
use crate::poly::sturm::{default_width, isolate_real_roots};
use crate::poly::{to_rational, BivarPoly, UniPoly};

/// Monomials allowed in `F_b` (upper triangle; the template is symmetric).
const F_TEMPLATE: [(u32, u32); 6] = [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)];
/// Monomials allowed in `G_b`, in the order of `n_1..n_9`.
const G_TEMPLATE: [(u32, u32); 9] = [
    (1, 0),
    (1, 1),
    (2, 0),
    (2, 1),
    (3, 0),
    (2, 2),
    (3, 1),
    (3, 2),
    (3, 3),
];

/// Canonical parameters promoted verbatim to exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactParams {
    pub t_left: BigRational,
    pub d_left: BigRational,
    pub a_left: BigRational,
    pub t_right: BigRational,
    pub d_right: BigRational,
    pub a_right: BigRational,
    pub b: BigRational,
}

impl ExactParams {
    pub fn from_canonical(c: &CanonicalPWL) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidInput("non-finite canonical parameters".into()));
        }
        let p = c.to_array().map(to_rational);
        let [t_left, d_left, a_left, t_right, d_right, a_right, b] = p;
        Ok(ExactParams {
            t_left,
            d_left,
            a_left,
            t_right,
            d_right,
            a_right,
            b,
        })
    }

    /// `W_L` as a univariate polynomial.
    pub fn w_left(&self) -> UniPoly {
        w_exact(&self.t_left, &self.d_left, &self.a_left)
    }

    pub fn w_right(&self) -> UniPoly {
        w_exact(&self.t_right, &self.d_right, &self.a_right)
    }
}

fn w_exact(t: &BigRational, d: &BigRational, a: &BigRational) -> UniPoly {
    UniPoly::new(vec![a * a, -(a * t), d.clone()])
}

fn konst(c: &BigRational) -> BivarPoly {
    BivarPoly::constant(c.clone())
}

fn check_template(p: &BivarPoly, allowed: &[(u32, u32)], what: &str) -> Result<()> {
    if !p.is_symmetric() {
        return Err(Error::DerivationMismatch(format!("{what} is not symmetric")));
    }
    for (&(i, j), _) in p.terms() {
        let key = if i >= j { (i, j) } else { (j, i) };
        if !allowed.contains(&key) {
            return Err(Error::DerivationMismatch(format!(
                "{what} has a monomial y0^{i} y1^{j} outside its template"
            )));
        }
    }
    Ok(())
}

/// The quotient `N(y0, y1) / (y0 − y1)` where `N` is the numerator of
/// `δ_b'` over the common denominator `y1 (y1 − b) W_L(y0) W_R(y0 − b)`.
/// Variables: `x = y0`, `y = y1`.
pub fn derive_f(c: &CanonicalPWL) -> Result<BivarPoly> {
    let p = ExactParams::from_canonical(c)?;
    let (x, y) = (BivarPoly::x(), BivarPoly::y());
    let b = konst(&p.b);
    let (wl, wr) = (p.w_left(), p.w_right());
    let x_b = &x - &b;
    let y_b = &y - &b;

    let wl_x = BivarPoly::substitute_into(&wl, &x);
    let wl_y = BivarPoly::substitute_into(&wl, &y);
    let wr_xb = BivarPoly::substitute_into(&wr, &x_b);
    let wr_yb = BivarPoly::substitute_into(&wr, &y_b);

    let first = &(&(&x_b * &wr_yb) * &y) * &wl_x;
    let second = &(&(&x * &wl_y) * &y_b) * &wr_xb;
    let numerator = &first - &second;

    let (f, rem) = numerator.div_rem_x_minus_y();
    if !rem.is_zero() {
        return Err(Error::DerivationMismatch(format!(
            "division by y0 - y1 leaves remainder {rem}"
        )));
    }
    if f.degree() > 4 {
        return Err(Error::DerivationMismatch(format!("F_b has degree {}", f.degree())));
    }
    check_template(&f, &F_TEMPLATE, "F_b")?;
    Ok(f)
}

/// `G_b = ⟨∇F_b, X_L⟩` with `X_L = −(y1 W_L(y0), y0 W_L(y1))`.
pub fn derive_g(f: &BivarPoly, c: &CanonicalPWL) -> Result<BivarPoly> {
    let p = ExactParams::from_canonical(c)?;
    let (x, y) = (BivarPoly::x(), BivarPoly::y());
    let wl = p.w_left();
    let x1 = -&(&y * &BivarPoly::substitute_into(&wl, &x));
    let x2 = -&(&x * &BivarPoly::substitute_into(&wl, &y));
    let g = &(&f.partial_x() * &x1) + &(&f.partial_y() * &x2);
    if g.degree() > 6 {
        return Err(Error::DerivationMismatch(format!("G_b has degree {}", g.degree())));
    }
    check_template(&g, &G_TEMPLATE, "G_b")?;
    Ok(g)
}

/// Coefficients `m_0..m_5` of `F_b` in its symmetric template.
pub fn f_coefficients(f: &BivarPoly) -> [BigRational; 6] {
    F_TEMPLATE.map(|(i, j)| f.coeff(i, j))
}

/// Coefficients `n_1..n_9` of `G_b` in its symmetric template.
pub fn g_coefficients(g: &BivarPoly) -> [BigRational; 9] {
    G_TEMPLATE.map(|(i, j)| g.coeff(i, j))
}

/// Rewrites a symmetric polynomial in `e1 = y0 + y1`, `e2 = y0 y1`, returned
/// with `x = Y0 = e1`, `y = Y1 = e2`.
pub fn transform_phi(p: &BivarPoly) -> Result<BivarPoly> {
    if !p.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let e1 = &BivarPoly::x() + &BivarPoly::y();
    let e2 = &BivarPoly::x() * &BivarPoly::y();
    let mut rest = p.clone();
    let mut out = BivarPoly::zero();
    // peel off the lexicographically largest monomial x^i y^j (i >= j)
    while let Some((&(i, j), c)) = rest.terms().last() {
        debug_assert!(i >= j);
        let c = c.clone();
        let piece = &(&e1.pow(i - j) * &e2.pow(j)).scale(&c);
        rest = &rest - piece;
        out = &out + &BivarPoly::monomial(i - j, j, c);
    }
    Ok(out)
}

/// Pulls a polynomial in `(Y0, Y1)` back to `(y0, y1)`.
pub fn pullback_phi(p: &BivarPoly) -> BivarPoly {
    let e1 = &BivarPoly::x() + &BivarPoly::y();
    let e2 = &BivarPoly::x() * &BivarPoly::y();
    let mut out = BivarPoly::zero();
    for (&(i, j), c) in p.terms() {
        out = &out + &(&e1.pow(i) * &e2.pow(j)).scale(c);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Pos
        } else if v < 0.0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Neg => -1.0,
            Sign::Zero => 0.0,
            Sign::Pos => 1.0,
        }
    }
}

/// The open set `U = B ∩ int(I_b × image)` where the traced orbit lives, and
/// its image under `φ`. The image interval is bounded through the roots of
/// `W_L` and `W_R`, which contains `y_L(I_b) ∩ y_R^b(I_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub t_l_sign: Sign,
    pub i_b: Option<DomainInterval>,
    pub image_interval: Option<DomainInterval>,
}

impl RegionSpec {
    pub fn for_system(c: &CanonicalPWL, cap: f64) -> Self {
        let dl = domain_interval(&c.w_left(), cap);
        let dr = domain_interval(&c.w_right(), cap);
        RegionSpec {
            t_l_sign: Sign::of(c.t_left),
            i_b: dl.domain.intersect(&dr.domain.shifted(c.b)),
            image_interval: dl.image.intersect(&dr.image.shifted(c.b)),
        }
    }

    /// Required sign of `Y0 = y0 + y1` inside the region: `−sign(T_L)`.
    pub fn y0_sign(&self) -> f64 {
        -self.t_l_sign.value()
    }

    pub fn contains(&self, y0: f64, y1: f64) -> bool {
        let s = self.y0_sign();
        let (Some(ib), Some(im)) = (self.i_b, self.image_interval) else {
            return false;
        };
        s != 0.0
            && y0 > 0.0
            && y1 < 0.0
            && s * (y0 + y1) > 0.0
            && ib.contains_interior(y0)
            && im.contains_interior(y1)
    }

    /// Membership of `(Y0, Y1)` in `φ(U)`; boundary points are outside.
    pub fn contains_phi(&self, big_y0: f64, big_y1: f64) -> bool {
        if !(big_y1 < 0.0) || self.y0_sign() * big_y0 <= 0.0 {
            return false;
        }
        let (y0, y1) = preimage_phi(big_y0, big_y1);
        self.contains(y0, y1)
    }
}

/// `(y0, y1)` with `y0 > 0 > y1` mapped to `(Y0, Y1)` by `φ`, for `Y1 < 0`.
pub fn preimage_phi(big_y0: f64, big_y1: f64) -> (f64, f64) {
    let disc = (big_y0 * big_y0 - 4.0 * big_y1).sqrt();
    // stable: the larger-magnitude root first
    let big = 0.5 * (big_y0 + big_y0.signum() * disc);
    let big = if big == 0.0 { 0.5 * disc } else { big };
    let small = big_y1 / big;
    if big > small {
        (big, small)
    } else {
        (small, big)
    }
}

/// One real solution of `F̃ = G̃ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactSolution {
    pub big_y0: f64,
    pub big_y1: f64,
    /// Certified isolating intervals (`"num/den"` endpoints) from the two eliminants.
    pub big_y0_interval: [String; 2],
    pub big_y1_interval: [String; 2],
    pub jacobian: f64,
    /// Nonzero Jacobian determinant at the solution.
    pub isolated: bool,
    pub in_region: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactSolutionSet {
    pub solutions: Vec<ContactSolution>,
    /// Degrees of the eliminants in `Y1` and `Y0`.
    pub eliminant_degrees: [usize; 2],
    pub notes: Vec<String>,
}

impl ContactSolutionSet {
    /// The contact bound `k`: certified isolated solutions inside `φ(U)`.
    pub fn k(&self) -> usize {
        self.solutions.iter().filter(|s| s.in_region && s.isolated).count()
    }

    /// In-region solutions whose isolatedness could not be certified.
    pub fn uncertified_in_region(&self) -> usize {
        self.solutions.iter().filter(|s| s.in_region && !s.isolated).count()
    }
}

fn rat_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn relative_residual(p: &BivarPoly, x: f64, y: f64) -> f64 {
    let m = p.magnitude_f64(x, y);
    if m == 0.0 {
        0.0
    } else {
        p.eval_f64(x, y).abs() / m
    }
}

/// Newton polish of a candidate on `(ft, gt)`; returns the point and the
/// Jacobian determinant.
fn polish(ft: &BivarPoly, gt: &BivarPoly, mut x: f64, mut y: f64) -> (f64, f64, f64) {
    let (fx, fy, gx, gy) = (ft.partial_x(), ft.partial_y(), gt.partial_x(), gt.partial_y());
    let jac = |x: f64, y: f64| {
        let (a, b, c, d) = (fx.eval_f64(x, y), fy.eval_f64(x, y), gx.eval_f64(x, y), gy.eval_f64(x, y));
        (a, b, c, d, a * d - b * c)
    };
    for _ in 0..8 {
        let (a, b, c, d, det) = jac(x, y);
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let (f, g) = (ft.eval_f64(x, y), gt.eval_f64(x, y));
        let dx = (d * f - b * g) / det;
        let dy = (a * g - c * f) / det;
        if !(dx.is_finite() && dy.is_finite()) {
            break;
        }
        x -= dx;
        y -= dy;
        if dx.abs() <= 1e-16 * (1.0 + x.abs()) && dy.abs() <= 1e-16 * (1.0 + y.abs()) {
            break;
        }
    }
    let (a, b, c, d, det) = jac(x, y);
    // scale of the determinant for a relative singularity test
    let scale = (a.abs() + b.abs()) * (c.abs() + d.abs());
    let rel = if scale > 0.0 { det / scale } else { 0.0 };
    (x, y, rel)
}

fn univariate_in(p: &BivarPoly, in_x: bool) -> UniPoly {
    let coeffs_len = if in_x { p.degree_x() } else { p.degree_y() } as usize + 1;
    let mut c = vec![BigRational::zero(); coeffs_len];
    for (&(i, j), v) in p.terms() {
        c[if in_x { i } else { j } as usize] += v;
    }
    UniPoly::new(c)
}

fn strip_common_y1(ft: &BivarPoly, gt: &BivarPoly) -> (BivarPoly, BivarPoly, u32) {
    let min_j = |p: &BivarPoly| p.terms().map(|(&(_, j), _)| j).min().unwrap_or(0);
    let m = min_j(ft).min(min_j(gt));
    let shift = |p: &BivarPoly| BivarPoly::from_terms(p.terms().map(|(&(i, j), v)| ((i, j - m), v.clone())));
    (shift(ft), shift(gt), m)
}

/// Solves `F̃ = G̃ = 0` by exact elimination in both variables, pairs the
/// certified real roots, and flags isolatedness and membership in `φ(U)`.
pub fn solve_system(ft: &BivarPoly, gt: &BivarPoly, region: &RegionSpec) -> Result<ContactSolutionSet> {
    if ft.is_zero() || gt.is_zero() {
        return Err(Error::DegenerateSystem("a contact polynomial vanishes identically"));
    }
    let mut notes = Vec::new();
    // Y1 = y0 y1 never vanishes on φ(U), so a shared power of Y1 is dropped
    let (ft, gt, m) = strip_common_y1(ft, gt);
    if m > 0 {
        notes.push(format!("common factor Y1^{m} removed; it vanishes only off φ(U)"));
    }
    let (ft, gt) = (&ft, &gt);
    let res_y1 = ft.resultant_x(gt);
    let res_y0 = ft.resultant_y(gt);
    let (res_y1, res_y0) = match (res_y1, res_y0) {
        (Some(r1), Some(r0)) => (r1, r0),
        (None, _) | (_, None) => {
            // both polynomials depend on one variable only: common roots are lines
            let in_x = ft.degree_y() == 0 && gt.degree_y() == 0;
            let g = univariate_in(ft, in_x).gcd(&univariate_in(gt, in_x));
            if g.degree().unwrap_or(0) > 0 {
                return Err(Error::DegenerateSystem("common factor in a single variable"));
            }
            return Ok(ContactSolutionSet {
                solutions: Vec::new(),
                eliminant_degrees: [0, 0],
                notes: vec!["both polynomials depend on one variable; no common zeros".into()],
            });
        }
    };
    if res_y1.is_zero() || res_y0.is_zero() {
        return Err(Error::DegenerateSystem("F̃ and G̃ share a common component"));
    }
    let width = default_width();
    let roots_y1 = isolate_real_roots(&res_y1, &width);
    let roots_y0 = isolate_real_roots(&res_y0, &width);

    let mut solutions: Vec<ContactSolution> = Vec::new();
    for r0 in &roots_y0 {
        for r1 in &roots_y1 {
            let (u, v) = (r0.approx, r1.approx);
            if !(relative_residual(ft, u, v) <= 1e-6 && relative_residual(gt, u, v) <= 1e-6) {
                continue;
            }
            let (x, y, jac) = polish(ft, gt, u, v);
            let close = (x - u).abs() <= 1e-6 * (1.0 + u.abs()) && (y - v).abs() <= 1e-6 * (1.0 + v.abs());
            if !close || relative_residual(ft, x, y) > 1e-9 || relative_residual(gt, x, y) > 1e-9 {
                continue;
            }
            if solutions
                .iter()
                .any(|s| (s.big_y0 - x).abs() <= 1e-9 * (1.0 + x.abs()) && (s.big_y1 - y).abs() <= 1e-9 * (1.0 + y.abs()))
            {
                continue;
            }
            let isolated = jac.abs() > 1e-9;
            if !isolated {
                notes.push(format!("solution ({x:e}, {y:e}) has a singular Jacobian; not certified isolated"));
            }
            solutions.push(ContactSolution {
                big_y0: x,
                big_y1: y,
                big_y0_interval: [rat_string(&r0.lo), rat_string(&r0.hi)],
                big_y1_interval: [rat_string(&r1.lo), rat_string(&r1.hi)],
                jacobian: jac,
                isolated,
                in_region: region.contains_phi(x, y),
            });
        }
    }
    if solutions.len() > 6 {
        notes.push(format!("{} real solutions exceed the Bezout number 6", solutions.len()));
    }
    Ok(ContactSolutionSet {
        solutions,
        eliminant_degrees: [
            res_y1.degree().unwrap_or(0),
            res_y0.degree().unwrap_or(0),
        ],
        notes,
    })
}

/// Which sign case places the excluded point outside `φ(U)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionCase {
    /// `D_L > 0` or `a_L = 0`: `Y1* ≥ 0`.
    NonnegativeProduct,
    /// `D_L < 0`, `a_L < 0`: `sign(Y0*) = sign(T_L)`.
    WrongSide,
    /// `D_L < 0`, `a_L > 0`: the preimage is the pair of roots of `W_L`,
    /// which bound `I_L` and its image.
    RootsOfW,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedPoint {
    /// `(a_L T_L / D_L, a_L² / D_L)` as `"num/den"` strings.
    pub exact: [String; 2],
    pub approx: [f64; 2],
    pub case: ExclusionCase,
    pub outside: bool,
}

/// The finite common zero `(a_L T_L / D_L, a_L² / D_L)` of `F̃_b` and `G̃_b`
/// and the case argument placing it outside `φ(U)`.
pub fn excluded_point(c: &CanonicalPWL, region: &RegionSpec) -> Result<ExcludedPoint> {
    let p = ExactParams::from_canonical(c)?;
    if p.d_left.is_zero() {
        return Err(Error::NotApplicable("D_L = 0: the lost solution is at infinity"));
    }
    let big_y0 = &p.a_left * &p.t_left / &p.d_left;
    let big_y1 = &p.a_left * &p.a_left / &p.d_left;
    let approx = [big_y0.to_f64().unwrap_or(f64::NAN), big_y1.to_f64().unwrap_or(f64::NAN)];

    let (case, outside) = if p.d_left.is_positive() || p.a_left.is_zero() {
        (ExclusionCase::NonnegativeProduct, !big_y1.is_negative())
    } else if p.a_left.is_negative() {
        let same_side = match region.t_l_sign {
            Sign::Zero => true, // the region is empty
            Sign::Pos => big_y0.is_positive(),
            Sign::Neg => big_y0.is_negative(),
        };
        (ExclusionCase::WrongSide, same_side)
    } else {
        // z² − Y0* z + Y1* is W_L / D_L, so the preimage is the root pair of
        // W_L; its positive root closes I_L and hence bounds I_b.
        let monic = p.w_left().monic();
        let identity = monic == UniPoly::new(vec![big_y1.clone(), -big_y0.clone(), BigRational::one()]);
        let (root_pos, _) = preimage_phi(approx[0], approx[1]);
        let dl = domain_interval(&c.w_left(), DEFAULT_CAP.max(2.0 * root_pos));
        let closes = dl.domain.bounded && (dl.domain.hi - root_pos).abs() <= 1e-12 * (1.0 + root_pos);
        let beyond_ib = region.i_b.is_none_or(|ib| ib.hi <= dl.domain.hi);
        (ExclusionCase::RootsOfW, identity && closes && beyond_ib)
    };
    Ok(ExcludedPoint {
        exact: [rat_string(&big_y0), rat_string(&big_y1)],
        approx,
        case,
        outside,
    })
}

/// Exact check that `(a_L T_L / D_L, a_L² / D_L)` solves both polynomials.
pub fn excluded_point_solves(c: &CanonicalPWL, ft: &BivarPoly, gt: &BivarPoly) -> Result<bool> {
    let p = ExactParams::from_canonical(c)?;
    if p.d_left.is_zero() {
        return Err(Error::NotApplicable("D_L = 0"));
    }
    let big_y0 = &p.a_left * &p.t_left / &p.d_left;
    let big_y1 = &p.a_left * &p.a_left / &p.d_left;
    Ok(ft.eval(&big_y0, &big_y1).is_zero() && gt.eval(&big_y0, &big_y1).is_zero())
}

/// For `D_L = 0`: whether the projective closures of `F̃ = 0` and `G̃ = 0`
/// meet on the line at infinity, which removes one of the six Bezout
/// solutions from the affine plane. A drop of either degree counts too.
pub fn solution_at_infinity(ft: &BivarPoly, gt: &BivarPoly) -> bool {
    if ft.degree() < 2 || gt.degree() < 3 {
        return true;
    }
    // leading forms dehomogenized at Y1 = 1 with formal degrees 2 and 3
    let lead = |p: &BivarPoly, d: u32| {
        let h = p.homogeneous_part(d);
        UniPoly::new((0..=d).map(|i| h.coeff(i, d - i)).collect())
    };
    sylvester_det(&lead(ft, 2), 2, &lead(gt, 3), 3).is_zero()
}

/// `F_b`, `G_b` and their transforms for one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactPolynomials {
    pub f: BivarPoly,
    pub g: BivarPoly,
    pub f_tilde: BivarPoly,
    pub g_tilde: BivarPoly,
}

impl ContactPolynomials {
    pub fn derive(c: &CanonicalPWL) -> Result<Self> {
        let f = derive_f(c)?;
        let g = derive_g(&f, c)?;
        let f_tilde = transform_phi(&f)?;
        let g_tilde = transform_phi(&g)?;
        if f_tilde.degree() > 2 || g_tilde.degree() > 3 {
            return Err(Error::DerivationMismatch(format!(
                "transformed degrees {} and {} exceed 2 and 3",
                f_tilde.degree(),
                g_tilde.degree()
            )));
        }
        Ok(ContactPolynomials {
            f,
            g,
            f_tilde,
            g_tilde,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::univar::rat;

    fn p(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(k, c)| (k, rat(c))))
    }

    #[test]
    fn newton_identities() {
        assert_eq!(transform_phi(&p(&[((2, 0), 1), ((0, 2), 1)])).unwrap(), p(&[((2, 0), 1), ((0, 1), -2)]));
        assert_eq!(transform_phi(&p(&[((2, 2), 1)])).unwrap(), p(&[((0, 2), 1)]));
        assert_eq!(transform_phi(&p(&[((1, 0), 1)])), Err(Error::NotSymmetric));
    }

    #[test]
    fn identical_centers_give_zero() {
        let c = CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0);
        let f = derive_f(&c).unwrap();
        assert!(f.is_zero());
        assert!(derive_g(&f, &c).unwrap().is_zero());
    }

    #[test]
    fn transformed_f_matches_the_displayed_combination() {
        let c = CanonicalPWL::new(0.75, -1.5, 2.0, -0.25, 2.5, -1.0, 0.5);
        let cp = ContactPolynomials::derive(&c).unwrap();
        let [m0, m1, m2, m3, m4, m5] = f_coefficients(&cp.f);
        let expected = BivarPoly::from_terms([
            ((0, 0), m0),
            ((1, 0), m1),
            ((0, 1), &m2 - &(&m3 * rat(2))),
            ((2, 0), m3),
            ((1, 1), m4),
            ((0, 2), m5),
        ]);
        assert_eq!(cp.f_tilde, expected);
        assert_eq!(pullback_phi(&cp.f_tilde), cp.f);
        assert_eq!(pullback_phi(&cp.g_tilde), cp.g);
    }

    #[test]
    fn shared_circle_is_degenerate() {
        let circle = p(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]);
        let g = &p(&[((1, 0), 1)]) * &circle;
        let region = RegionSpec::for_system(&CanonicalPWL::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0), 1e6);
        assert!(matches!(solve_system(&circle, &g, &region), Err(Error::DegenerateSystem(_))));
    }

    #[test]
    fn line_and_cubic() {
        // Y1 = Y0 and Y1 = Y0^3 meet at -1, 0, 1
        let ft = p(&[((0, 1), 1), ((1, 0), -1)]);
        let gt = p(&[((0, 1), 1), ((3, 0), -1)]);
        let region = RegionSpec::for_system(&CanonicalPWL::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0), 1e6);
        let set = solve_system(&ft, &gt, &region).unwrap();
        let mut xs: Vec<f64> = set.solutions.iter().map(|s| s.big_y0).collect();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs.len(), 3);
        assert!((xs[0] + 1.0).abs() < 1e-12 && xs[1].abs() < 1e-12 && (xs[2] - 1.0).abs() < 1e-12);
        assert!(set.solutions.iter().all(|s| s.isolated));
    }

    #[test]
    fn excluded_point_cases() {
        let region = |c: &CanonicalPWL| RegionSpec::for_system(c, 1e6);
        let c = CanonicalPWL::new(2.0, 1.0, 1.0, 0.5, 1.0, 0.3, 0.1);
        let e = excluded_point(&c, &region(&c)).unwrap();
        assert_eq!(e.approx, [2.0, 1.0]);
        assert_eq!(e.case, ExclusionCase::NonnegativeProduct);
        assert!(e.outside);

        let c = CanonicalPWL::new(1.0, -1.0, -1.0, 0.5, 1.0, 0.3, 0.1);
        let e = excluded_point(&c, &region(&c)).unwrap();
        assert_eq!(e.approx[0], 1.0);
        assert_eq!(e.case, ExclusionCase::WrongSide);
        assert!(e.outside);

        let c = CanonicalPWL::new(-0.5, -1.0, 1.0, 0.5, 1.0, 0.3, 0.1);
        let e = excluded_point(&c, &region(&c)).unwrap();
        assert_eq!(e.case, ExclusionCase::RootsOfW);
        assert!(e.outside);

        let c = CanonicalPWL::new(1.0, 0.0, 1.0, 0.5, 1.0, 0.3, 0.1);
        assert!(matches!(excluded_point(&c, &region(&c)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn excluded_point_solves_the_system() {
        for c in [
            CanonicalPWL::new(2.0, 1.0, 1.0, 0.5, 1.0, 0.3, 0.1),
            CanonicalPWL::new(-0.5, -1.0, 1.0, 0.5, -2.0, 0.3, -0.7),
            CanonicalPWL::new(1.25, -0.5, -0.75, -1.0, 3.0, 2.0, 1.5),
        ] {
            let cp = ContactPolynomials::derive(&c).unwrap();
            assert!(excluded_point_solves(&c, &cp.f_tilde, &cp.g_tilde).unwrap());
        }
    }

    #[test]
    fn f_sign_matches_float_quotient() {
        let c = CanonicalPWL::new(0.3, 1.2, 0.8, -0.6, 0.9, -0.4, 0.25);
        let f = derive_f(&c).unwrap();
        for &(y0, y1) in &[(1.0, -2.0), (0.3, -0.1), (4.0, -3.5)] {
            let exact = f.eval_f64(y0, y1);
            let quotient = crate::displacement::contact_value(&c, y0, y1);
            assert!((exact - quotient).abs() <= 1e-10 * (1.0 + exact.abs()), "{exact} vs {quotient}");
        }
    }
}
