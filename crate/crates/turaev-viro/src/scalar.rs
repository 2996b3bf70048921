//! Scalar arithmetic for the three computation backends.
//!
//! Every quantity in an invariant computation lives in one of
//!
//! * exact rationals,
//! * an exact real or imaginary quadratic extension `Q(sqrt(m))` for a
//!   squarefree integer `m` (Fibonacci data lives in `Q(sqrt(5))`, the
//!   quantum-double character data for `Z3`/`S3` in `Q(sqrt(-3))`),
//! * complex doubles with a declared equality tolerance.
//!
//! Rationals promote silently into a quadratic extension; anything promotes
//! into complex doubles. Two distinct quadratic extensions never mix.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::TvError;

/// Default absolute equality tolerance for the complex backend.
pub const EPS_EQ: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Rational,
    /// `Q(sqrt(m))`, `m` squarefree and not 0 or 1.
    Quad(i64),
    Complex,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => write!(f, "rational"),
            Backend::Quad(m) => write!(f, "quad {m}"),
            Backend::Complex => write!(f, "complex"),
        }
    }
}

/// A backend-tagged field element.
#[derive(Debug, Clone)]
pub enum Scalar {
    Rat(BigRational),
    /// `a + b*sqrt(m)`.
    Quad { m: i64, a: BigRational, b: BigRational },
    C64(Complex64),
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(big(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0);
        Scalar::Rat(big(p) / big(q))
    }

    pub fn quad(m: i64, a: BigRational, b: BigRational) -> Self {
        if b.is_zero() {
            Scalar::Rat(a)
        } else {
            Scalar::Quad { m, a, b }
        }
    }

    /// `sqrt(m)` itself as an element of `Q(sqrt(m))`.
    pub fn sqrt_of(m: i64) -> Self {
        Scalar::Quad { m, a: BigRational::zero(), b: BigRational::one() }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::C64(Complex64::new(re, im))
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Rat(_) => Backend::Rational,
            Scalar::Quad { m, .. } => Backend::Quad(*m),
            Scalar::C64(_) => Backend::Complex,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad { a, b, .. } => a.is_zero() && b.is_zero(),
            Scalar::C64(z) => z.norm_sqr() == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Quad { a, b, .. } => a.is_one() && b.is_zero(),
            Scalar::C64(z) => *z == Complex64::new(1.0, 0.0),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Rat(r) => Complex64::new(rat_f64(r), 0.0),
            Scalar::Quad { m, a, b } => {
                let root = (m.abs() as f64).sqrt();
                let bv = rat_f64(b) * root;
                if *m >= 0 {
                    Complex64::new(rat_f64(a) + bv, 0.0)
                } else {
                    Complex64::new(rat_f64(a), bv)
                }
            }
            Scalar::C64(z) => *z,
        }
    }

    /// Promote `self` into the target backend. Fails when two distinct
    /// quadratic extensions would have to mix exactly.
    pub fn promote(&self, target: Backend) -> Result<Scalar, TvError> {
        match (self, target) {
            (Scalar::Rat(_), Backend::Rational) => Ok(self.clone()),
            (Scalar::Rat(r), Backend::Quad(m)) => {
                Ok(Scalar::Quad { m, a: r.clone(), b: BigRational::zero() })
            }
            (Scalar::Quad { m, .. }, Backend::Quad(t)) if *m == t => Ok(self.clone()),
            (Scalar::Quad { m, a, b }, Backend::Quad(t)) if b.is_zero() => {
                let _ = m;
                Ok(Scalar::Quad { m: t, a: a.clone(), b: BigRational::zero() })
            }
            (_, Backend::Complex) => Ok(Scalar::C64(self.to_c64())),
            (Scalar::Quad { a, b, .. }, Backend::Rational) if b.is_zero() => {
                Ok(Scalar::Rat(a.clone()))
            }
            _ => Err(TvError::BackendMismatch(self.backend(), target)),
        }
    }

    /// Least backend containing both operands.
    pub fn join_backend(x: Backend, y: Backend) -> Result<Backend, TvError> {
        use Backend::*;
        Ok(match (x, y) {
            (Rational, b) | (b, Rational) => b,
            (Quad(m), Quad(n)) if m == n => Quad(m),
            (Complex, _) | (_, Complex) => Complex,
            (a, b) => return Err(TvError::BackendMismatch(a, b)),
        })
    }

    fn binop(
        &self,
        rhs: &Scalar,
        rat: fn(&BigRational, &BigRational) -> BigRational,
        quad: fn(i64, (&BigRational, &BigRational), (&BigRational, &BigRational)) -> (BigRational, BigRational),
        c64: fn(Complex64, Complex64) -> Complex64,
    ) -> Scalar {
        let target = Scalar::join_backend(self.backend(), rhs.backend())
            .unwrap_or_else(|e| panic!("scalar backend mix: {e}"));
        let l = self.promote(target).unwrap();
        let r = rhs.promote(target).unwrap();
        match (l, r) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(rat(&a, &b)),
            (Scalar::Quad { m, a, b }, Scalar::Quad { a: c, b: d, .. }) => {
                let (x, y) = quad(m, (&a, &b), (&c, &d));
                Scalar::quad(m, x, y)
            }
            (Scalar::C64(a), Scalar::C64(b)) => Scalar::C64(c64(a, b)),
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar, TvError> {
        if self.is_zero() {
            return Err(TvError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Quad { m, a, b } => {
                // (a + b s)^-1 = (a - b s) / (a^2 - m b^2)
                let norm = a * a - big(*m) * b * b;
                assert!(!norm.is_zero(), "quadratic norm vanished for nonzero element");
                Scalar::quad(*m, a / &norm, -b / &norm)
            }
            Scalar::C64(z) => Scalar::C64(z.inv()),
        })
    }

    pub fn pow(&self, n: i64) -> Scalar {
        if n == 0 {
            return Scalar::one();
        }
        let base = if n < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Exact equality for exact backends, absolute `EPS_EQ` (relative above 1)
    /// for complex.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        self.approx_eq_tol(other, EPS_EQ)
    }

    pub fn approx_eq_tol(&self, other: &Scalar, tol: f64) -> bool {
        let target = match Scalar::join_backend(self.backend(), other.backend()) {
            Ok(t) => t,
            Err(_) => return false,
        };
        match target {
            Backend::Complex => {
                let a = self.to_c64();
                let b = other.to_c64();
                let scale = a.norm().max(b.norm()).max(1.0);
                (a - b).norm() <= tol * scale
            }
            _ => {
                let l = self.promote(target).unwrap();
                let r = other.promote(target).unwrap();
                l == r
            }
        }
    }

    /// Rational part accessor used by oracles; errors off the rational backend.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Rat(r) => Some(r.clone()),
            Scalar::Quad { a, b, .. } if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        let target = match Scalar::join_backend(self.backend(), other.backend()) {
            Ok(t) => t,
            Err(_) => return false,
        };
        let l = self.promote(target).unwrap();
        let r = other.promote(target).unwrap();
        match (l, r) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Quad { a, b, .. }, Scalar::Quad { a: c, b: d, .. }) => a == c && b == d,
            (Scalar::C64(a), Scalar::C64(b)) => a == b,
            _ => unreachable!(),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $ratop:expr, $quadop:expr, $c64op:expr) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binop(rhs, $ratop, $quadop, $c64op)
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(
    Add,
    add,
    |a, b| a + b,
    |_m, (a, b), (c, d)| (a + c, b + d),
    |a, b| a + b
);
scalar_binop!(
    Sub,
    sub,
    |a, b| a - b,
    |_m, (a, b), (c, d)| (a - c, b - d),
    |a, b| a - b
);
scalar_binop!(
    Mul,
    mul,
    |a, b| a * b,
    |m, (a, b), (c, d)| (a * c + big(m) * b * d, a * d + b * c),
    |a, b| a * b
);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("scalar division by zero")
    }
}
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::zero() - self.clone()
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Quad { a, b, .. } => {
                if b.is_zero() {
                    write!(f, "{}", fmt_rat(a))
                } else if a.is_zero() {
                    write!(f, "{}s", fmt_rat(b))
                } else if b.is_negative() {
                    write!(f, "{}{}s", fmt_rat(a), fmt_rat(b))
                } else {
                    write!(f, "{}+{}s", fmt_rat(a), fmt_rat(b))
                }
            }
            Scalar::C64(z) => {
                if z.im == 0.0 {
                    write!(f, "{:.12e}", z.re)
                } else if z.im < 0.0 {
                    write!(f, "{:.12e}{:.12e}i", z.re, z.im)
                } else {
                    write!(f, "{:.12e}+{:.12e}i", z.re, z.im)
                }
            }
        }
    }
}

/// Parse a scalar literal in the given backend.
///
/// Grammar: rationals `p` or `p/q`; quadratic `a`, `bs`, `a+bs`, `a-bs` with
/// rational `a`, `b` and `s` standing for `sqrt(m)`; complex decimals
/// `x`, `yi`, `x+yi`, `x-yi`.
pub fn parse_scalar(text: &str, backend: Backend) -> Result<Scalar, TvError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || TvError::Parse(format!("bad scalar literal `{text}`"));
    match backend {
        Backend::Rational => Ok(Scalar::Rat(parse_big_rat(&t).ok_or_else(bad)?)),
        Backend::Quad(m) => {
            if let Some(rest) = t.strip_suffix('s') {
                // split rest into a +/- b at the last top-level sign
                let (a, b) = split_quad(rest).ok_or_else(bad)?;
                Ok(Scalar::quad(m, a, b))
            } else {
                Ok(Scalar::quad(m, parse_big_rat(&t).ok_or_else(bad)?, BigRational::zero()))
            }
        }
        Backend::Complex => {
            if let Some(rest) = t.strip_suffix('i') {
                let (re, im) = split_complex(rest).ok_or_else(bad)?;
                Ok(Scalar::C64(Complex64::new(re, im)))
            } else {
                let re: f64 = t.parse().map_err(|_| bad())?;
                Ok(Scalar::C64(Complex64::new(re, 0.0)))
            }
        }
    }
}

fn parse_big_rat(t: &str) -> Option<BigRational> {
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        let p: BigInt = t.parse().ok()?;
        Some(BigRational::from_integer(p))
    }
}

/// Split `a+b` / `a-b` / `b` (coefficient of s) into rational parts.
fn split_quad(rest: &str) -> Option<(BigRational, BigRational)> {
    // find a '+' or '-' splitting the two rationals; skip a leading sign
    for (i, c) in rest.char_indices().skip(1) {
        if (c == '+' || c == '-') && !rest[..i].ends_with('/') {
            let a = parse_big_rat(&rest[..i])?;
            let bstr = if c == '+' { &rest[i + 1..] } else { &rest[i..] };
            let b = if bstr == "-" {
                -BigRational::one()
            } else if bstr.is_empty() {
                BigRational::one()
            } else {
                parse_big_rat(bstr)?
            };
            return Some((a, b));
        }
    }
    // pure coefficient of s
    let b = if rest.is_empty() {
        BigRational::one()
    } else if rest == "-" {
        -BigRational::one()
    } else {
        parse_big_rat(rest)?
    };
    Some((BigRational::zero(), b))
}

fn split_complex(rest: &str) -> Option<(f64, f64)> {
    // rest is for example "1.5+2.0" (the trailing i was stripped)
    let mut split_at = None;
    let chars: Vec<char> = rest.chars().collect();
    for i in (1..chars.len()).rev() {
        if (chars[i] == '+' || chars[i] == '-') && chars[i - 1] != 'e' && chars[i - 1] != 'E' {
            split_at = Some(i);
            break;
        }
    }
    match split_at {
        Some(i) => {
            let re: f64 = rest[..i].parse().ok()?;
            let imstr = &rest[i..];
            let im: f64 = if imstr == "+" {
                1.0
            } else if imstr == "-" {
                -1.0
            } else {
                imstr.parse().ok()?
            };
            Some((re, im))
        }
        None => {
            let im: f64 = if rest.is_empty() {
                1.0
            } else if rest == "-" {
                -1.0
            } else {
                rest.parse().ok()?
            };
            Some((0.0, im))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(backend: Backend) -> Vec<Scalar> {
        match backend {
            Backend::Rational => vec![
                Scalar::from_int(0),
                Scalar::from_int(1),
                Scalar::ratio(-3, 7),
                Scalar::ratio(22, 5),
            ],
            Backend::Quad(m) => vec![
                Scalar::from_int(1).promote(Backend::Quad(m)).unwrap(),
                Scalar::quad(m, big(1) / big(2), big(1) / big(2)),
                Scalar::quad(m, big(-2), big(3)),
                Scalar::sqrt_of(m),
            ],
            Backend::Complex => vec![
                Scalar::complex(1.5, 0.0),
                Scalar::complex(0.0, -2.0),
                Scalar::complex(0.25, 0.75),
            ],
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        for backend in [Backend::Rational, Backend::Quad(5), Backend::Quad(-3), Backend::Complex] {
            let xs = samples(backend);
            for x in &xs {
                for y in &xs {
                    for z in &xs {
                        let lhs = &(x + y) * z;
                        let rhs = &(x * z) + &(y * z);
                        assert!(lhs.approx_eq(&rhs), "distributivity failed on {backend}");
                        assert!((&(x * y) * z).approx_eq(&(x * &(y * z))));
                        assert!((x + y).approx_eq(&(y + x)));
                        assert!((x * y).approx_eq(&(y * x)));
                    }
                    if !y.is_zero() {
                        let q = x / y;
                        assert!((&q * y).approx_eq(x));
                    }
                }
            }
        }
    }

    #[test]
    fn quad_inverse_golden_ratio() {
        // phi = (1+sqrt5)/2 satisfies phi^2 = phi + 1, 1/phi = phi - 1
        let phi = Scalar::quad(5, big(1) / big(2), big(1) / big(2));
        assert_eq!(&phi * &phi, &phi + &Scalar::one());
        assert_eq!(phi.inv().unwrap(), &phi - &Scalar::one());
    }

    #[test]
    fn literal_round_trip() {
        for (txt, backend) in [
            ("-3/7", Backend::Rational),
            ("5", Backend::Rational),
            ("1/2+1/2s", Backend::Quad(5)),
            ("-2+3s", Backend::Quad(-3)),
            ("-1/3s", Backend::Quad(5)),
            ("7/2", Backend::Quad(5)),
        ] {
            let v = parse_scalar(txt, backend).unwrap();
            let re = parse_scalar(&v.to_string(), backend).unwrap();
            assert_eq!(v, re, "round trip through `{txt}`");
        }
        let z = parse_scalar("1.25e-3+2.5i", Backend::Complex).unwrap();
        assert_eq!(z.to_c64(), Complex64::new(1.25e-3, 2.5));
    }

    #[test]
    fn promotion_rules() {
        let r = Scalar::ratio(1, 2);
        let q = Scalar::sqrt_of(5);
        assert_eq!((&r + &q).backend(), Backend::Quad(5));
        let other = Scalar::sqrt_of(-3);
        assert!(Scalar::join_backend(q.backend(), other.backend()).is_err());
        assert_eq!((&r + &Scalar::complex(0.5, 0.0)).backend(), Backend::Complex);
    }
}
