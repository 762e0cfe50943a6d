//! Laurent polynomials in two torus variables with big-integer coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = (i64, i64);

pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;

/// A point of the torus in angle coordinates; `omega_j = exp(2 pi i theta_j)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct TorusPoint {
    pub theta1: f64,
    pub theta2: f64,
}

impl TorusPoint {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        TorusPoint {
            theta1: theta1 - theta1.floor(),
            theta2: theta2 - theta2.floor(),
        }
    }

    pub fn omega(&self) -> (Complex64, Complex64) {
        (cis(self.theta1), cis(self.theta2))
    }
}

fn cis(t: f64) -> Complex64 {
    let a = std::f64::consts::TAU * t;
    Complex64::new(a.cos(), a.sin())
}

/// Graded-lex order on `(e1+e2, e1)`; used for division and fusion.
pub fn grlex(a: &Exponent, b: &Exponent) -> Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial((0, 0), 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial((0, 0), c)
    }

    pub fn monomial(e: Exponent, c: impl Into<BigInt>) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(e, c.into());
        p
    }

    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in it {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exponent) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff((0, 0))
    }

    /// Exponent negation, i.e. complex conjugation on the torus.
    pub fn conjugate(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| ((-e.0, -e.1), c.clone())).collect(),
        }
    }

    /// Substitute exponents by an integer linear map.
    pub fn map_exponents(&self, f: impl Fn(Exponent) -> Exponent) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(f(*e), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn try_mul(&self, o: &LaurentPoly, cap: usize) -> Result<LaurentPoly> {
        let mut acc: HashMap<Exponent, BigInt> =
            HashMap::with_capacity(self.len().saturating_mul(o.len()).min(cap));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = (ea.0 + eb.0, ea.1 + eb.1);
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
            if acc.len() > cap {
                return Err(Error::SupportCap(cap));
            }
        }
        let terms: BTreeMap<_, _> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { terms })
    }

    pub fn try_pow(&self, n: u32, cap: usize) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = out.try_mul(&base, cap)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base, cap)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        self.try_pow(n, usize::MAX).expect("uncapped power")
    }

    /// `sum_v p_v q_v`, the constant term of `p * conj(q)`, without forming the product.
    pub fn pairing(&self, q: &LaurentPoly) -> BigInt {
        let (small, big) = if self.len() <= q.len() { (self, q) } else { (q, self) };
        small
            .terms
            .iter()
            .filter_map(|(e, c)| big.terms.get(e).map(|d| c * d))
            .sum()
    }

    pub fn evaluate(&self, t: TorusPoint) -> Complex64 {
        self.evaluate_angles(t.theta1, t.theta2)
    }

    pub fn evaluate_angles(&self, t1: f64, t2: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let phase = (e.0 as f64 * t1 + e.1 as f64 * t2).rem_euclid(1.0);
            s += cis(phase) * c.to_f64().unwrap_or(f64::NAN);
        }
        s
    }

    /// Evaluate at arbitrary nonzero complex `(w1, w2)`, not necessarily on the torus.
    pub fn evaluate_complex(&self, w1: Complex64, w2: Complex64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            s += w1.powi(e.0 as i32) * w2.powi(e.1 as i32) * c.to_f64().unwrap_or(f64::NAN);
        }
        s
    }

    /// Gradient in angle coordinates: d/dtheta_j of a monomial multiplies by `2 pi i e_j`.
    pub fn gradient(&self, t: TorusPoint) -> (Complex64, Complex64) {
        let mut g = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (e, c) in &self.terms {
            let phase = (e.0 as f64 * t.theta1 + e.1 as f64 * t.theta2).rem_euclid(1.0);
            let v = cis(phase) * c.to_f64().unwrap_or(f64::NAN) * Complex64::new(0.0, std::f64::consts::TAU);
            g.0 += v * e.0 as f64;
            g.1 += v * e.1 as f64;
        }
        g
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn abs_coefficient_sum(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn leading(&self) -> Option<(Exponent, &BigInt)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex(a.0, b.0))
            .map(|(e, c)| (*e, c))
    }

    fn trailing(&self) -> Option<Exponent> {
        self.terms.keys().min_by(|a, b| grlex(a, b)).copied()
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.terms.keys().map(|e| e.0.abs().max(e.1.abs())).max().unwrap_or(0)
    }

    /// Exact quotient by repeated cancellation of graded-lex leading terms.
    pub fn exact_divide(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        let (dl, dc) = match den.leading() {
            Some((e, c)) => (e, c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut q = LaurentPoly::zero();
        let (nt, dt) = match (self.trailing(), den.trailing()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(q),
        };
        // Any quotient term e satisfies e >= nt - dt in the graded-lex order.
        let floor = (nt.0 - dt.0, nt.1 - dt.1);
        while let Some((rl, rc)) = rem.leading() {
            let e = (rl.0 - dl.0, rl.1 - dl.1);
            if grlex(&e, &floor) == Ordering::Less || !(rc % &dc).is_zero() {
                return Err(Error::InexactDivision(rem.terms.keys().copied().collect()));
            }
            let k = rc / &dc;
            for (de, c) in &den.terms {
                rem.add_term((e.0 + de.0, e.1 + de.1), -(c * &k));
            }
            q.add_term(e, k);
            if q.len() > DEFAULT_SUPPORT_CAP {
                return Err(Error::SupportCap(DEFAULT_SUPPORT_CAP));
            }
        }
        Ok(q)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            s.push_str(&format!("({},{}): {}\n", e.0, e.1, c));
        }
        s
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the `(e1,e2): coeff` line format written by `to_text`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |l: &str| Error::InvalidArgument(format!("bad polynomial line `{l}`"));
        let mut p = LaurentPoly::zero();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| bad(line))?;
            let lhs = lhs.trim().trim_start_matches('(').trim_end_matches(')');
            let (a, b) = lhs.split_once(',').ok_or_else(|| bad(line))?;
            let e = (
                a.trim().parse().map_err(|_| bad(line))?,
                b.trim().parse().map_err(|_| bad(line))?,
            );
            let c: BigInt = rhs.trim().parse().map_err(|_| bad(line))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match *e {
                (0, 0) => String::new(),
                (a, 0) => format!("w1^{a}"),
                (0, b) => format!("w2^{b}"),
                (a, b) => format!("w1^{a}*w2^{b}"),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.try_mul(o, usize::MAX).expect("uncapped product")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &[((i64, i64), i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(s.iter().copied())
    }

    #[test]
    fn basic_products() {
        let x = p(&[((1, 0), 1), ((-1, 0), 1)]);
        assert_eq!(&x * &x, p(&[((2, 0), 1), ((0, 0), 2), ((-2, 0), 1)]));
        let a = p(&[((1, 0), 1), ((0, 1), 1)]);
        let prod = &a * &a.conjugate();
        assert_eq!(prod, p(&[((0, 0), 2), ((1, -1), 1), ((-1, 1), 1)]));
        assert_eq!(prod.constant_term(), BigInt::from(2));
        assert_eq!((&prod * &prod).constant_term(), BigInt::from(6));
    }

    #[test]
    fn evaluation() {
        let x = p(&[((1, 0), 1), ((-1, 0), 1)]);
        assert!((x.evaluate(TorusPoint::new(0.0, 0.0)) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let w = p(&[((1, 0), 1)]);
        assert!((w.evaluate(TorusPoint::new(0.25, 0.0)) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn division() {
        let num = p(&[((2, 0), 1), ((-2, 0), -1)]);
        let den = p(&[((1, 0), 1), ((-1, 0), -1)]);
        assert_eq!(num.exact_divide(&den).unwrap(), p(&[((1, 0), 1), ((-1, 0), 1)]));
        let bad = p(&[((1, 0), 1), ((0, 1), 1)]);
        let d2 = p(&[((1, 0), 1), ((0, 1), -1)]);
        assert!(matches!(bad.exact_divide(&d2), Err(Error::InexactDivision(_))));
        assert!(matches!(bad.exact_divide(&LaurentPoly::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn text_round_trip() {
        let a = p(&[((3, -1), -7), ((0, 0), 2), ((-2, 5), 1)]);
        let s = a.to_text();
        assert_eq!(s, "(-2,5): 1\n(0,0): 2\n(3,-1): -7\n");
        assert_eq!(s.parse::<LaurentPoly>().unwrap(), a);
    }

    #[test]
    fn support_cap() {
        let x = p(&[((1, 0), 1), ((0, 1), 1), ((-1, -1), 1)]);
        assert!(matches!(x.try_pow(20, 50), Err(Error::SupportCap(50))));
    }
}
