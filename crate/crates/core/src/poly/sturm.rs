//! Certified real-root isolation by Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::univar::{rat, UniPoly};

/// An isolating interval `[lo, hi]` holding exactly one real root; `lo == hi`
/// when the root is an exact dyadic rational.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Floating estimate of the root, refined from the interval.
    pub approx: f64,
}

/// A positive multiple of a rational polynomial with primitive integer
/// coefficients, for fast exact sign evaluation.
#[derive(Clone, Debug)]
struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    fn new(p: &UniPoly) -> Self {
        let lcm = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::primitive(p.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
    }

    /// Divides out the positive content and trims leading zeros.
    fn primitive(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let g = coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in coeffs.iter_mut() {
                *c /= &g;
            }
        }
        IntPoly { coeffs }
    }

    fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn derivative(&self) -> Self {
        IntPoly::primitive(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// A positive multiple of the remainder of `self` divided by `b`.
    fn rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.coeffs[db].clone();
        let mut r = self.coeffs.clone();
        let mut negative = false;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            // r ← lb·r − lr·x^(dr−db)·b, which scales the remainder by lb
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (k, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + k] -= &lr * bc;
            }
            negative ^= lb.is_negative();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        if negative {
            for c in r.iter_mut() {
                *c = -&*c;
            }
        }
        IntPoly::primitive(r)
    }

    fn to_unipoly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Sign at `x = n / d` from `Σ c_i n^i d^(deg − i)`, with `d > 0`.
    fn sign_at(&self, x: &BigRational) -> i8 {
        let (n, d) = (x.numer(), x.denom());
        let Some((last, rest)) = self.coeffs.split_last() else {
            return 0;
        };
        let mut acc = last.clone();
        let mut dpow = BigInt::one();
        for c in rest.iter().rev() {
            dpow *= d;
            acc = acc * n + c * &dpow;
        }
        match acc.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        }
    }
}

/// Sturm chain `p, p', −rem, …`, each term kept as a positive multiple. It
/// ends in `gcd(p, p')` and counts distinct roots even when `p` is not
/// squarefree.
pub struct SturmSequence {
    seq: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &UniPoly) -> Self {
        SturmSequence::from_int(IntPoly::new(p))
    }

    fn from_int(p: IntPoly) -> Self {
        let mut seq = vec![p];
        if seq[0].degree().unwrap_or(0) > 0 {
            seq.push(seq[0].derivative());
            loop {
                let n = seq.len();
                let r = seq[n - 2].rem(&seq[n - 1]);
                if r.degree().is_none() {
                    break;
                }
                seq.push(IntPoly {
                    coeffs: r.coeffs.into_iter().map(|c| -c).collect(),
                });
            }
        }
        SturmSequence { seq }
    }

    /// `p / gcd(p, p')`, the squarefree part.
    fn squarefree_part(&self) -> IntPoly {
        let g = self.seq.last().expect("nonempty chain").to_unipoly();
        let (q, _) = self.seq[0].to_unipoly().div_rem(&g);
        IntPoly::new(&q)
    }

    pub fn sign_variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_variations(a).saturating_sub(self.sign_variations(b))
    }
}

/// Smallest power of two exceeding the Cauchy bound `1 + max |a_k / a_n|`.
fn root_bound(p: &UniPoly) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let mut m = BigRational::zero();
    for c in p.coeffs() {
        let r = c.abs() / &lead;
        if r > m {
            m = r;
        }
    }
    let bound = m + BigRational::one();
    let mut b = BigRational::one();
    while b <= bound {
        b = b * rat(2);
    }
    b
}

/// Isolates every real root of `p` and shrinks each isolating interval to
/// width at most `width` by exact bisection.
pub fn isolate_real_roots(p: &UniPoly, width: &BigRational) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = SturmSequence::new(p);
    let qi = sturm.squarefree_part();
    let q = qi.to_unipoly();
    if q.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let b = root_bound(&q);
    let sign = |_: &UniPoly, x: &BigRational| qi.sign_at(x);
    let mut stack = vec![(-b.clone(), b)];
    let mut out = Vec::new();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && sign(&q, &hi) != 0 {
            out.push(refine(&q, &qi, lo, hi, width));
            continue;
        }
        let mid = (&lo + &hi) * &half;
        if sign(&q, &mid) == 0 {
            out.push(RootInterval {
                approx: mid.to_f64().unwrap_or(f64::NAN),
                lo: mid.clone(),
                hi: mid.clone(),
            });
            // step off the exact root until it is isolated on both sides
            let mut eps = (&hi - &lo) * &half * &half;
            loop {
                let l = &mid - &eps;
                let r = &mid + &eps;
                if sign(&q, &l) != 0 && sign(&q, &r) != 0 && sturm.count(&l, &r) == 1 {
                    stack.push((lo.clone(), l));
                    stack.push((r, hi.clone()));
                    break;
                }
                eps = eps * &half;
            }
        } else {
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Bisection on a sign change; `q(lo)` may be zero only if the root is `lo`
/// itself, which cannot happen for the half-open Sturm intervals used here.
fn refine(q: &UniPoly, qi: &IntPoly, mut lo: BigRational, mut hi: BigRational, width: &BigRational) -> RootInterval {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let s_hi = qi.sign_at(&hi);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) * &half;
        let s = qi.sign_at(&mid);
        if s == 0 {
            return RootInterval {
                approx: mid.to_f64().unwrap_or(f64::NAN),
                lo: mid.clone(),
                hi: mid,
            };
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (a, b) = (lo.to_f64().unwrap_or(f64::NAN), hi.to_f64().unwrap_or(f64::NAN));
    RootInterval {
        approx: float_polish(q, a, b),
        lo,
        hi,
    }
}

/// One secant step inside the certified bracket.
fn float_polish(q: &UniPoly, a: f64, b: f64) -> f64 {
    let (fa, fb) = (q.eval_f64(a), q.eval_f64(b));
    let x = if fa.is_finite() && fb.is_finite() && fa != fb {
        a - fa * (b - a) / (fb - fa)
    } else {
        0.5 * (a + b)
    };
    if x >= a && x <= b {
        x
    } else {
        0.5 * (a + b)
    }
}

/// `10^-12` as an exact rational.
pub fn default_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p, &default_width());
        assert_eq!(roots.len(), 2);
        let s2 = 2f64.sqrt();
        assert!((roots[0].approx + s2).abs() < 1e-12);
        assert!((roots[1].approx - s2).abs() < 1e-12);
        assert!(&roots[1].hi - &roots[1].lo <= default_width());
    }

    #[test]
    fn exact_and_repeated_roots() {
        // x (x - 1)^2 (x + 1/2)(x^2 + 1)
        let x = UniPoly::from_i64(&[0, 1]);
        let a = UniPoly::from_i64(&[-1, 1]);
        let b = UniPoly::new(vec![rat(1) / rat(2), rat(1)]);
        let c = UniPoly::from_i64(&[1, 0, 1]);
        let p = &(&(&x * &(&a * &a)) * &b) * &c;
        let roots = isolate_real_roots(&p, &default_width());
        let approx: Vec<f64> = roots.iter().map(|r| r.approx).collect();
        assert_eq!(approx.len(), 3);
        assert!((approx[0] + 0.5).abs() < 1e-12);
        assert!(approx[1].abs() < 1e-12);
        assert!((approx[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn close_roots_are_separated() {
        // (x - 1)(x - 1 - 1e-9)
        let e = BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000));
        let r2 = rat(1) + e;
        let p = &UniPoly::new(vec![rat(-1), rat(1)]) * &UniPoly::new(vec![-r2, rat(1)]);
        let roots = isolate_real_roots(&p, &default_width());
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&UniPoly::from_i64(&[1, 0, 1]), &default_width()).is_empty());
        assert!(isolate_real_roots(&UniPoly::from_i64(&[3]), &default_width()).is_empty());
    }
}
