//! Two-zone systems, their Liénard canonical form, and the quadratic
//! polynomials `W(y) = D y² − a T y + a²` that govern the half-map domains.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation bound for unbounded half-map domains.
pub const DEFAULT_CAP: f64 = 1e6;

/// A general two-zone system `ẋ = A_L x + b_L` for `x1 ≤ 0`,
/// `ẋ = A_R x + b_R` for `x1 ≥ 0`. Matrices are row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralPWL {
    #[serde(rename = "A_L")]
    pub a_left: [[f64; 2]; 2],
    #[serde(rename = "A_R")]
    pub a_right: [[f64; 2]; 2],
    #[serde(rename = "b_L")]
    pub b_left: [f64; 2],
    #[serde(rename = "b_R")]
    pub b_right: [f64; 2],
}

impl GeneralPWL {
    pub fn is_finite(&self) -> bool {
        self.a_left
            .iter()
            .chain(self.a_right.iter())
            .flatten()
            .chain(self.b_left.iter())
            .chain(self.b_right.iter())
            .all(|v| v.is_finite())
    }

    /// Continuity across the switching line: equal second columns and equal offsets.
    pub fn is_continuous(&self) -> bool {
        self.a_left[0][1] == self.a_right[0][1]
            && self.a_left[1][1] == self.a_right[1][1]
            && self.b_left == self.b_right
    }
}

/// The seven parameters of the canonical form
///
/// ```text
/// x < 0:  ẋ = T_L x − y,       ẏ = D_L x − a_L
/// x > 0:  ẋ = T_R x − y + b,   ẏ = D_R x − a_R
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPWL {
    #[serde(rename = "T_L")]
    pub t_left: f64,
    #[serde(rename = "D_L")]
    pub d_left: f64,
    #[serde(rename = "a_L")]
    pub a_left: f64,
    #[serde(rename = "T_R")]
    pub t_right: f64,
    #[serde(rename = "D_R")]
    pub d_right: f64,
    #[serde(rename = "a_R")]
    pub a_right: f64,
    pub b: f64,
}

impl CanonicalPWL {
    pub fn new(t_l: f64, d_l: f64, a_l: f64, t_r: f64, d_r: f64, a_r: f64, b: f64) -> Self {
        CanonicalPWL {
            t_left: t_l,
            d_left: d_l,
            a_left: a_l,
            t_right: t_r,
            d_right: d_r,
            a_right: a_r,
            b,
        }
    }

    /// Parameters in the fixed order `(T_L, D_L, a_L, T_R, D_R, a_R, b)`.
    pub fn to_array(&self) -> [f64; 7] {
        [
            self.t_left,
            self.d_left,
            self.a_left,
            self.t_right,
            self.d_right,
            self.a_right,
            self.b,
        ]
    }

    pub fn from_array(p: [f64; 7]) -> Self {
        CanonicalPWL::new(p[0], p[1], p[2], p[3], p[4], p[5], p[6])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Continuous canonical systems are exactly those with `b = 0` and `a_L = a_R`.
    pub fn is_continuous(&self) -> bool {
        self.b == 0.0 && self.a_left == self.a_right
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn w_left(&self) -> QuadraticW {
        w_poly(self.t_left, self.d_left, self.a_left).on(Side::Left)
    }

    pub fn w_right(&self) -> QuadraticW {
        w_poly(self.t_right, self.d_right, self.a_right).on(Side::Right)
    }
}

/// Reduces a general two-zone system to Liénard canonical form.
pub fn to_canonical(sys: &GeneralPWL) -> Result<CanonicalPWL> {
    if !sys.is_finite() {
        return Err(Error::InvalidInput("system has non-finite entries".into()));
    }
    let [[a11l, a12l], [a21l, a22l]] = sys.a_left;
    let [[a11r, a12r], [a21r, a22r]] = sys.a_right;
    let [b1l, b2l] = sys.b_left;
    let [b1r, b2r] = sys.b_right;

    let sign = a12l * a12r;
    if !(sign > 0.0) {
        return Err(Error::NoCrossingDynamics(sign));
    }

    Ok(CanonicalPWL {
        t_left: a11l + a22l,
        d_left: a11l * a22l - a12l * a21l,
        a_left: a12l * b2l - a22l * b1l,
        t_right: a11r + a22r,
        d_right: a11r * a22r - a12r * a21r,
        a_right: a12r * b2r - a22r * b1r,
        b: a12l * b1r / a12r - b1l,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `W(y) = D y² + negaT y + a2` with `negaT = −aT` and `a2 = a²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticW {
    pub d: f64,
    pub nega_t: f64,
    pub a2: f64,
    pub side: Side,
}

pub fn w_poly(t: f64, d: f64, a: f64) -> QuadraticW {
    QuadraticW {
        d,
        nega_t: -a * t,
        a2: a * a,
        side: Side::Left,
    }
}

impl QuadraticW {
    pub fn on(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        (self.d * y + self.nega_t) * y + self.a2
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0.0 && self.nega_t == 0.0 && self.a2 == 0.0
    }

    /// Real roots in ascending order, repeated for a double root.
    ///
    /// The larger-magnitude root is computed first and the other one recovered
    /// from the product of the roots.
    pub fn real_roots(&self) -> Vec<f64> {
        let (a, b, c) = (self.d, self.nega_t, self.a2);
        if a == 0.0 {
            if b == 0.0 {
                return Vec::new();
            }
            return vec![-c / b];
        }
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Vec::new();
        }
        if disc == 0.0 {
            let r = -b / (2.0 * a);
            return vec![r, r];
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        // b == 0 gives signum 1, so q is nonzero whenever disc > 0
        let (r1, r2) = (q / a, c / q);
        if r1 <= r2 {
            vec![r1, r2]
        } else {
            vec![r2, r1]
        }
    }
}

/// Interval with possibly truncated endpoints. Unbounded ends are stored as
/// the truncation cap and are always open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub bounded: bool,
}

impl DomainInterval {
    pub fn contains(&self, y: f64) -> bool {
        let above = if self.lo_closed { y >= self.lo } else { y > self.lo };
        let below = if self.hi_closed { y <= self.hi } else { y < self.hi };
        above && below
    }

    pub fn contains_interior(&self, y: f64) -> bool {
        y > self.lo && y < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Shifts both endpoints by `s`.
    pub fn shifted(mut self, s: f64) -> Self {
        self.lo += s;
        self.hi += s;
        self
    }

    /// Intersection of two intervals; `None` when the interior is empty.
    pub fn intersect(&self, other: &DomainInterval) -> Option<DomainInterval> {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed, bounded) = if self.hi < other.hi {
            (self.hi, self.hi_closed, self.bounded)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed, other.bounded)
        } else {
            (
                self.hi,
                self.hi_closed && other.hi_closed,
                self.bounded || other.bounded,
            )
        };
        (lo < hi).then_some(DomainInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
            bounded,
        })
    }
}

/// Domain `I ⊂ [0, ∞)` of a half-map together with its image `⊂ (−∞, 0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfMapDomain {
    pub domain: DomainInterval,
    pub image: DomainInterval,
}

/// Half-map domain from the roots of `W`: the smallest positive root closes
/// the domain, the greatest negative root closes the image. Missing roots are
/// replaced by `±cap`.
pub fn domain_interval(w: &QuadraticW, cap: f64) -> HalfMapDomain {
    assert!(cap > 0.0, "truncation cap must be positive");
    let roots = w.real_roots();
    let pos = roots.iter().copied().filter(|&r| r > 0.0).fold(None, |m: Option<f64>, r| {
        Some(m.map_or(r, |m| m.min(r)))
    });
    let neg = roots.iter().copied().filter(|&r| r < 0.0).fold(None, |m: Option<f64>, r| {
        Some(m.map_or(r, |m| m.max(r)))
    });

    let domain = match pos {
        Some(r) if r < cap => DomainInterval {
            lo: 0.0,
            hi: r,
            lo_closed: true,
            hi_closed: true,
            bounded: true,
        },
        _ => DomainInterval {
            lo: 0.0,
            hi: cap,
            lo_closed: true,
            hi_closed: false,
            bounded: false,
        },
    };
    let image = match neg {
        Some(r) if r > -cap => DomainInterval {
            lo: r,
            hi: 0.0,
            lo_closed: true,
            hi_closed: true,
            bounded: true,
        },
        _ => DomainInterval {
            lo: -cap,
            hi: 0.0,
            lo_closed: false,
            hi_closed: true,
            bounded: false,
        },
    };
    HalfMapDomain { domain, image }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralTag {
    ComplexPair,
    RealDistinct,
    RealDouble,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralClass {
    pub tag: SpectralTag,
    /// `T² − 4D`
    pub discriminant: f64,
}

pub fn spectral_class(t: f64, d: f64) -> SpectralClass {
    let discriminant = t * t - 4.0 * d;
    let tag = if discriminant < 0.0 {
        SpectralTag::ComplexPair
    } else if discriminant == 0.0 {
        SpectralTag::RealDouble
    } else {
        SpectralTag::RealDistinct
    };
    SpectralClass { tag, discriminant }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn general(a_l: [[f64; 2]; 2], b_l: [f64; 2], a_r: [[f64; 2]; 2], b_r: [f64; 2]) -> GeneralPWL {
        GeneralPWL {
            a_left: a_l,
            a_right: a_r,
            b_left: b_l,
            b_right: b_r,
        }
    }

    #[test]
    fn canonical_of_node_and_center() {
        let sys = general([[1.0, 1.0], [0.0, 1.0]], [0.0, 0.0], [[0.0, 1.0], [-1.0, 0.0]], [0.0, 0.0]);
        let c = to_canonical(&sys).unwrap();
        assert_eq!(c.to_array(), [2.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn opposite_a12_signs_have_no_crossing_dynamics() {
        let sys = general([[0.0, 1.0], [1.0, 0.0]], [0.0, 0.0], [[0.0, -1.0], [1.0, 0.0]], [0.0, 0.0]);
        assert!(matches!(to_canonical(&sys), Err(Error::NoCrossingDynamics(_))));
    }

    #[test]
    fn canonical_offsets_by_hand() {
        // a_L = 2(-1) - 3(1) = -5, a_R = 1(2) - 0(0) = 2, b = 2(0)/1 - 1 = -1
        let sys = general([[0.0, 2.0], [-1.0, 3.0]], [1.0, -1.0], [[1.0, 1.0], [2.0, 0.0]], [0.0, 2.0]);
        let c = to_canonical(&sys).unwrap();
        assert_eq!(c.a_left, -5.0);
        assert_eq!(c.a_right, 2.0);
        assert_eq!(c.b, -1.0);
        assert_eq!(c.t_left, 3.0);
        assert_eq!(c.d_left, 2.0);
        assert_eq!(c.t_right, 1.0);
        assert_eq!(c.d_right, -2.0);
    }

    #[test]
    fn w_examples() {
        let w = w_poly(0.0, 1.0, 0.0);
        assert_eq!((w.d, w.nega_t, w.a2), (1.0, 0.0, 0.0));
        assert_eq!(w.eval(3.0), 9.0);

        let w = w_poly(0.0, -1.0, 1.0);
        assert_eq!(w.real_roots(), vec![-1.0, 1.0]);

        let w = w_poly(2.0, 1.0, 1.0);
        assert_eq!((w.d, w.nega_t, w.a2), (1.0, -2.0, 1.0));
        assert_eq!(w.real_roots(), vec![1.0, 1.0]);
    }

    #[test]
    fn domain_examples() {
        let dom = domain_interval(&w_poly(0.0, -1.0, 1.0), DEFAULT_CAP);
        assert_eq!(dom.domain.hi, 1.0);
        assert!(dom.domain.hi_closed && dom.domain.bounded);
        assert_eq!(dom.image.lo, -1.0);
        assert!(dom.image.lo_closed && dom.image.bounded);

        // y² + 1: no real roots
        let w = QuadraticW { d: 1.0, nega_t: 0.0, a2: 1.0, side: Side::Left };
        let dom = domain_interval(&w, DEFAULT_CAP);
        assert_eq!((dom.domain.lo, dom.domain.hi), (0.0, DEFAULT_CAP));
        assert!(!dom.domain.bounded && !dom.domain.hi_closed);
        assert_eq!(dom.image.lo, -DEFAULT_CAP);

        let dom = domain_interval(&w_poly(2.0, 1.0, 1.0), DEFAULT_CAP);
        assert_eq!(dom.domain.hi, 1.0);
        assert!(dom.domain.bounded);
    }

    #[test]
    fn stable_roots_near_cancellation() {
        // roots 1e-9 and 1e9
        let w = QuadraticW { d: 1.0, nega_t: -(1e9 + 1e-9), a2: 1.0, side: Side::Left };
        let r = w.real_roots();
        assert!((r[0] - 1e-9).abs() < 1e-24);
        assert!((r[1] - 1e9).abs() < 1e-6);
    }

    #[test]
    fn spectral_examples() {
        assert_eq!(spectral_class(0.0, 1.0).tag, SpectralTag::ComplexPair);
        assert_eq!(spectral_class(2.0, 1.0).tag, SpectralTag::RealDouble);
        assert_eq!(spectral_class(3.0, 1.0).tag, SpectralTag::RealDistinct);
    }

    #[test]
    fn interval_intersection() {
        let a = DomainInterval { lo: 0.0, hi: 5.0, lo_closed: true, hi_closed: true, bounded: true };
        let b = a.shifted(2.0);
        let i = a.intersect(&b).unwrap();
        assert_eq!((i.lo, i.hi), (2.0, 5.0));
        assert!(a.intersect(&a.shifted(6.0)).is_none());
    }
}
