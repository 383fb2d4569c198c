//! Exact coefficient arithmetic: univariate polynomials in the deformation
//! parameter `b` over the rationals, and the rational-function field they
//! generate.
//!
//! Every quantity downstream (series coefficients, operator entries, Jack
//! norms) lives in this field. Canonical forms matter: positivity checks
//! detect "denominator is 1" syntactically, so every operation renormalizes.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A polynomial in `b` with rational coefficients. `coeffs[i]` is the
/// coefficient of `b^i`; no trailing zeros are stored, and the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BPoly {
    coeffs: Vec<BigRational>,
}

impl BPoly {
    pub fn zero() -> Self {
        BPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        BPoly::constant(BigRational::one())
    }

    /// The variable `b` itself.
    pub fn b() -> Self {
        BPoly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// `alpha = 1 + b`.
    pub fn alpha() -> Self {
        BPoly::from_coeffs(vec![BigRational::one(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        BPoly::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        BPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = BPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Evaluate at a rational value of `b`.
    pub fn eval(&self, b: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * b + c;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    fn divmod(&self, d: &BPoly) -> (BPoly, BPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let dd = d.degree().unwrap();
        let lead = d.leading_coeff().unwrap().clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading_coeff().unwrap() / &lead;
            let shift = rd - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                let v = &rem.coeffs[shift + i] - c * &factor;
                rem.coeffs[shift + i] = v;
            }
            rem.trim();
            quot[shift] = factor;
        }
        (BPoly::from_coeffs(quot), rem)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &BPoly) -> BPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading_coeff().unwrap().clone();
        a.scale(&lead.recip())
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &BPoly) -> BPoly {
        let (q, r) = self.divmod(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl Add for &BPoly {
    type Output = BPoly;
    fn add(self, rhs: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        BPoly::from_coeffs(out)
    }
}

impl Sub for &BPoly {
    type Output = BPoly;
    fn sub(self, rhs: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        BPoly::from_coeffs(out)
    }
}

impl Mul for &BPoly {
    type Output = BPoly;
    fn mul(self, rhs: &BPoly) -> BPoly {
        if self.is_zero() || rhs.is_zero() {
            return BPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BPoly::from_coeffs(out)
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        BPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if i == 0 || !unit_mag {
                write!(f, "{}", mag)?;
            }
            if i == 1 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                write!(f, "b")?;
            } else if i > 1 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                write!(f, "b^{}", i)?;
            }
        }
        Ok(())
    }
}

/// Why a value failed the nonnegative-integer-polynomial test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositivityFailure {
    NontrivialDenominator,
    NegativeCoefficient { power: usize },
    NonIntegerCoefficient { power: usize },
}

impl fmt::Display for PositivityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PositivityFailure::NontrivialDenominator => write!(f, "nontrivial denominator"),
            PositivityFailure::NegativeCoefficient { power } => {
                write!(f, "negative coefficient of b^{}", power)
            }
            PositivityFailure::NonIntegerCoefficient { power } => {
                write!(f, "non-integer coefficient of b^{}", power)
            }
        }
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of the field Q(b): a quotient of two coprime `BPoly`s with a
/// monic denominator. All arithmetic renormalizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BRat {
    num: BPoly,
    den: BPoly,
}

impl BRat {
    pub fn new(num: BPoly, den: BPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: BPoly, den: BPoly) -> Self {
        if num.is_zero() {
            return BRat {
                num: BPoly::zero(),
                den: BPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lead = den.leading_coeff().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        BRat { num, den }
    }

    pub fn zero() -> Self {
        BRat {
            num: BPoly::zero(),
            den: BPoly::one(),
        }
    }

    pub fn one() -> Self {
        BRat {
            num: BPoly::one(),
            den: BPoly::one(),
        }
    }

    pub fn from_poly(p: BPoly) -> Self {
        BRat {
            num: p,
            den: BPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        BRat::from_poly(BPoly::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0);
        BRat::from_poly(BPoly::constant(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    pub fn b() -> Self {
        BRat::from_poly(BPoly::b())
    }

    pub fn alpha() -> Self {
        BRat::from_poly(BPoly::alpha())
    }

    pub fn numerator(&self) -> &BPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == BPoly::one() && self.den == BPoly::one()
    }

    /// The polynomial content of a denominator-free value.
    pub fn as_poly(&self) -> Option<&BPoly> {
        if self.den == BPoly::one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        BRat::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &BRat) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(BRat::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Evaluate at a rational value of `b`; panics if the denominator
    /// vanishes there.
    pub fn eval(&self, b: &BigRational) -> BigRational {
        let d = self.den.eval(b);
        assert!(!d.is_zero(), "pole at b = {}", b);
        self.num.eval(b) / d
    }

    /// Substitute `b = 0`.
    pub fn at_b_zero(&self) -> BigRational {
        self.eval(&BigRational::zero())
    }

    /// Passes iff the value is a polynomial in `b` with nonnegative integer
    /// coefficients.
    pub fn is_nonneg_int_poly(&self) -> Result<(), PositivityFailure> {
        let p = self
            .as_poly()
            .ok_or(PositivityFailure::NontrivialDenominator)?;
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.is_negative() {
                return Err(PositivityFailure::NegativeCoefficient { power: i });
            }
            if !c.is_integer() {
                return Err(PositivityFailure::NonIntegerCoefficient { power: i });
            }
        }
        Ok(())
    }

    /// JSON form `{"num": [[p,q],...], "den": [[p,q],...]}` with one exact
    /// integer pair per coefficient.
    pub fn to_json(&self) -> serde_json::Value {
        fn poly_json(p: &BPoly) -> serde_json::Value {
            serde_json::Value::Array(
                p.coeffs()
                    .iter()
                    .map(|c| {
                        serde_json::Value::Array(vec![bigint_json(c.numer()), bigint_json(c.denom())])
                    })
                    .collect(),
            )
        }
        fn bigint_json(n: &BigInt) -> serde_json::Value {
            match i64::try_from(n.clone()) {
                Ok(v) => serde_json::Value::from(v),
                Err(_) => serde_json::Value::from(n.to_string()),
            }
        }
        let mut map = serde_json::Map::new();
        map.insert("num".into(), poly_json(&self.num));
        map.insert("den".into(), poly_json(&self.den));
        serde_json::Value::Object(map)
    }
}

impl Add for &BRat {
    type Output = BRat;
    fn add(self, rhs: &BRat) -> BRat {
        BRat::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &BRat {
    type Output = BRat;
    fn sub(self, rhs: &BRat) -> BRat {
        BRat::normalized(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &BRat {
    type Output = BRat;
    fn mul(self, rhs: &BRat) -> BRat {
        BRat::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &BRat {
    type Output = BRat;
    fn div(self, rhs: &BRat) -> BRat {
        self.div(rhs).expect("division by zero")
    }
}

impl Neg for &BRat {
    type Output = BRat;
    fn neg(self) -> BRat {
        BRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for BRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == BPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
