use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::univar::{rat, UniPoly};

/// Sparse bivariate polynomial in `(x, y)` with exact rational
/// coefficients. Keys are exponent pairs `(i, j)` for `x^i y^j`; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

/// Exact rational with the same value as a finite `f64`.
pub fn to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite parameter")
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        BivarPoly::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BivarPoly { terms }
    }

    pub fn x() -> Self {
        BivarPoly::monomial(1, 0, BigRational::one())
    }

    pub fn y() -> Self {
        BivarPoly::monomial(0, 1, BigRational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigRational)>>(it: I) -> Self {
        let mut p = BivarPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        BivarPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(BivarPoly::constant(BigRational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * pow_q(x, i) * pow_q(y, j);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    /// `Σ |c| |x|^i |y|^j`, a natural scale for rounding errors of `eval_f64`.
    pub fn magnitude_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| {
                c.to_f64().unwrap_or(f64::NAN).abs() * x.abs().powi(i as i32) * y.abs().powi(j as i32)
            })
            .sum()
    }

    pub fn partial_x(&self) -> Self {
        BivarPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * rat(i as i64))),
        )
    }

    pub fn partial_y(&self) -> Self {
        BivarPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * rat(j as i64))),
        )
    }

    /// `p(y, x)`.
    pub fn swapped(&self) -> Self {
        BivarPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    pub fn is_symmetric(&self) -> bool {
        self.swapped() == *self
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        BivarPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 + k.1 == d)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    /// Univariate `x ↦ q(x)` composed into a bivariate argument: `q(self)`.
    pub fn substitute_into(q: &UniPoly, arg: &BivarPoly) -> BivarPoly {
        q.coeffs().iter().rev().fold(BivarPoly::zero(), |acc, c| {
            &(&acc * arg) + &BivarPoly::constant(c.clone())
        })
    }

    /// Quotient and remainder of division by `x − y`, viewing the
    /// polynomial in `x` over `Q[y]`. The remainder is `p(y, y)` as a
    /// polynomial in `y` alone.
    pub fn div_rem_x_minus_y(&self) -> (BivarPoly, BivarPoly) {
        let n = self.degree_x() as usize;
        // c[k] = coefficient of x^k, a polynomial in y
        let mut c: Vec<BivarPoly> = vec![BivarPoly::zero(); n + 1];
        for (&(i, j), v) in &self.terms {
            c[i as usize].add_term((0, j), v.clone());
        }
        let y = BivarPoly::y();
        // synthetic division by the root x = y
        let mut quot = BivarPoly::zero();
        let mut carry = BivarPoly::zero();
        for k in (1..=n).rev() {
            carry = &c[k] + &(&carry * &y);
            for (&(_, j), v) in &carry.terms {
                quot.add_term((k as u32 - 1, j), v.clone());
            }
        }
        let rem = &c[0] + &(&carry * &y);
        (quot, rem)
    }

    /// Coefficients in `x` after substituting a value for `y`.
    pub fn specialize_y(&self, y: &BigRational) -> UniPoly {
        let n = self.degree_x() as usize;
        let mut c = vec![BigRational::zero(); n + 1];
        for (&(i, j), v) in &self.terms {
            c[i as usize] += v * pow_q(y, j);
        }
        UniPoly::new(c)
    }

    pub fn specialize_x(&self, x: &BigRational) -> UniPoly {
        self.swapped().specialize_y(x)
    }

    /// Resultant with respect to `x`, a polynomial in `y`.
    ///
    /// Computed by evaluating the Sylvester determinant (with the formal
    /// `x`-degrees of both inputs) at enough integer abscissae and
    /// interpolating. `None` when both inputs are free of `x`.
    pub fn resultant_x(&self, other: &BivarPoly) -> Option<UniPoly> {
        let (m, n) = (self.degree_x() as usize, other.degree_x() as usize);
        if m == 0 && n == 0 {
            return None;
        }
        // work with integer multiples λ·self, μ·other; the resultant scales by λ^n μ^m
        let (lambda, p_int) = self.integer_multiple();
        let (mu, q_int) = other.integer_multiple();
        // degree of the resultant in y is bounded by the product of total degrees
        let bound = (self.degree() * other.degree()) as i64;
        let points: Vec<(BigRational, BigRational)> = (0..=bound + 2)
            .map(|k| {
                let yk = BigInt::from(k);
                let p = specialize_int(&p_int, &yk, m);
                let q = specialize_int(&q_int, &yk, n);
                let r = sylvester_det_int(&p, m, &q, n);
                (rat(k), BigRational::from_integer(r))
            })
            .collect();
        let scale = BigRational::from_integer(lambda.pow(n as u32) * mu.pow(m as u32));
        let r = UniPoly::interpolate(&points).scale(&scale.recip());
        debug_assert!(r.degree().map_or(true, |d| d as i64 <= bound));
        Some(r)
    }

    /// `(λ, terms of λ·self)` with `λ > 0` the least common denominator.
    fn integer_multiple(&self) -> (BigInt, Vec<((u32, u32), BigInt)>) {
        let lambda = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| (k, c.numer() * (&lambda / c.denom())))
            .collect();
        (lambda, terms)
    }

    pub fn resultant_y(&self, other: &BivarPoly) -> Option<UniPoly> {
        self.swapped().resultant_x(&other.swapped())
    }
}

fn pow_q(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Coefficients in `x` of integer terms at the integer ordinate `y`.
fn specialize_int(terms: &[((u32, u32), BigInt)], y: &BigInt, deg_x: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); deg_x + 1];
    for ((i, j), v) in terms {
        c[*i as usize] += v * y.pow(*j);
    }
    c
}

/// Integer Sylvester determinant by fraction-free Bareiss elimination.
fn sylvester_det_int(p: &[BigInt], m: usize, q: &[BigInt], n: usize) -> BigInt {
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for k in 0..=m {
            mat[row][row + k] = p[m - k].clone();
        }
    }
    for row in 0..m {
        for k in 0..=n {
            mat[n + row][row + k] = q[n - k].clone();
        }
    }
    bareiss(mat)
}

fn bareiss(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&r| !mat[r][k].is_zero()) else {
                return BigInt::zero();
            };
            mat.swap(k, piv);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j]) / &prev;
                mat[i][j] = v;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}

/// Determinant of the Sylvester matrix of `p` (formal degree `m`) and `q`
/// (formal degree `n`).
pub(crate) fn sylvester_det(p: &UniPoly, m: usize, q: &UniPoly, n: usize) -> BigRational {
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut mat = vec![vec![BigRational::zero(); size]; size];
    for row in 0..n {
        for k in 0..=m {
            mat[row][row + k] = p.coeff(m - k);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            mat[n + row][row + k] = q.coeff(n - k);
        }
    }
    determinant(mat)
}

pub(crate) fn determinant(mut mat: Vec<Vec<BigRational>>) -> BigRational {
    let n = mat.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        let p = mat[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] / &p;
            for c in col..n {
                let v = &factor * &mat[col][c];
                mat[r][c] -= v;
            }
        }
    }
    det
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), a * b);
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, -c)))
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", c.abs())?;
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Serialized as `{"i,j": "num/den"}`.
impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (&(i, j), c) in &self.terms {
            map.serialize_entry(&format!("{i},{j}"), &format!("{}/{}", c.numer(), c.denom()))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut p = BivarPoly::zero();
        for (k, v) in raw {
            let (i, j) = k
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| de::Error::custom(format!("bad exponent key {k:?}")))?;
            let c = parse_rational(&v).ok_or_else(|| de::Error::custom(format!("bad rational {v:?}")))?;
            p.add_term((i, j), c);
        }
        Ok(p)
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[((u32, u32), i64)]) -> BivarPoly {
        BivarPoly::from_terms(terms.iter().map(|&(k, c)| (k, rat(c))))
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = p(&[((1, 0), 1), ((0, 1), 1)]);
        let b = p(&[((1, 0), 1), ((0, 1), -1)]);
        let prod = &a * &b;
        assert_eq!(prod, p(&[((2, 0), 1), ((0, 2), -1)]));
        assert!((&prod - &prod).is_zero());
        assert_eq!(prod.degree(), 2);
    }

    #[test]
    fn divide_by_x_minus_y() {
        // x^3 - y^3 = (x - y)(x^2 + xy + y^2)
        let num = p(&[((3, 0), 1), ((0, 3), -1)]);
        let (q, r) = num.div_rem_x_minus_y();
        assert!(r.is_zero());
        assert_eq!(q, p(&[((2, 0), 1), ((1, 1), 1), ((0, 2), 1)]));

        let (_, r) = p(&[((2, 0), 1), ((0, 0), 1)]).div_rem_x_minus_y();
        assert_eq!(r, p(&[((0, 2), 1), ((0, 0), 1)]));
    }

    #[test]
    fn resultant_of_circle_and_line() {
        // x^2 + y^2 - 1 and x - y: eliminating x gives 2y^2 - 1
        let circle = p(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]);
        let line = p(&[((1, 0), 1), ((0, 1), -1)]);
        let r = circle.resultant_x(&line).unwrap();
        assert_eq!(r, UniPoly::from_i64(&[-1, 0, 2]));
    }

    #[test]
    fn partials_and_symmetry() {
        let f = p(&[((2, 1), 3), ((1, 2), 3), ((0, 0), 5)]);
        assert!(f.is_symmetric());
        assert_eq!(f.partial_x(), p(&[((1, 1), 6), ((0, 2), 3)]));
        assert!(!f.partial_x().is_symmetric());
    }

    #[test]
    fn json_shape() {
        let f = BivarPoly::from_terms([((1, 2), BigRational::new(BigInt::from(-3), BigInt::from(4)))]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"1,2":"-3/4"}"#);
        let back: BivarPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
