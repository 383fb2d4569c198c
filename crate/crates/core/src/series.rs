//! Sparse multivariate series over `BRat` in the registered variable
//! families, truncated in the degree of `t`.
//!
//! The `t`-degree is the sole truncation grading: in every series we build,
//! the sizes of the p/q/u monomials are tied to the `t`-exponent, so
//! truncating in `t` bounds everything that matters.

use crate::exact::BRat;
use crate::partition::Partition;
use num::bigint::BigInt;
use num::rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Variable families, in canonical monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    T,
    P,
    Q,
    Y,
    Yp,
    Z,
    Zp,
    U,
    G,
    Hbar,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::T => "T",
            Family::P => "P",
            Family::Q => "Q",
            Family::Y => "Y",
            Family::Yp => "Yp",
            Family::Z => "Z",
            Family::Zp => "Zp",
            Family::U => "U",
            Family::G => "G",
            Family::Hbar => "HBAR",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub family: Family,
    pub index: u32,
}

impl VarId {
    pub fn new(family: Family, index: u32) -> Self {
        match family {
            Family::P | Family::Q | Family::U | Family::G => {
                assert!(index >= 1, "{:?} indices start at 1", family)
            }
            Family::T | Family::Hbar => assert!(index == 0, "{:?} index is fixed to 0", family),
            _ => {}
        }
        VarId { family, index }
    }

    pub fn t() -> Self {
        VarId::new(Family::T, 0)
    }

    pub fn p(i: u32) -> Self {
        VarId::new(Family::P, i)
    }

    pub fn q(i: u32) -> Self {
        VarId::new(Family::Q, i)
    }

    pub fn y(i: u32) -> Self {
        VarId::new(Family::Y, i)
    }

    pub fn yp(i: u32) -> Self {
        VarId::new(Family::Yp, i)
    }

    pub fn z(i: u32) -> Self {
        VarId::new(Family::Z, i)
    }

    pub fn zp(i: u32) -> Self {
        VarId::new(Family::Zp, i)
    }

    pub fn u(i: u32) -> Self {
        VarId::new(Family::U, i)
    }

    pub fn g(i: u32) -> Self {
        VarId::new(Family::G, i)
    }

    pub fn hbar() -> Self {
        VarId::new(Family::Hbar, 0)
    }
}

/// Polynomial spaces with linearity constraints, nested `P < PY < PYZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Space {
    P,
    PY,
    PYZ,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("monomial {0} violates the constraints of space {1:?}")]
    SpaceViolation(String, Space),
    #[error("series constant term must be 1 and all other terms must carry t")]
    LogRequiresUnitConstant,
    #[error("pi swap with k = {k} met variable u_{index}")]
    PiSwapIndex { k: u32, index: u32 },
}

/// A sorted sparse exponent list; exponents are at least 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    vars: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { vars: vec![] }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { vars: vec![(v, 1)] }
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable_by_key(|&(v, _)| v);
        let mut vars: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            if let Some(last) = vars.last_mut() {
                if last.0 == v {
                    last.1 += e;
                    continue;
                }
            }
            vars.push((v, e));
        }
        Monomial { vars }
    }

    pub fn vars(&self) -> &[(VarId, u32)] {
        &self.vars
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.vars
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn t_degree(&self) -> u32 {
        self.exponent(VarId::t())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pairs = self.vars.clone();
        pairs.extend_from_slice(&other.vars);
        Monomial::from_pairs(pairs)
    }

    pub fn mul_var(&self, v: VarId, e: u32) -> Monomial {
        let mut pairs = self.vars.clone();
        pairs.push((v, e));
        Monomial::from_pairs(pairs)
    }

    /// Remove one power of `v`; `None` if `v` is absent.
    pub fn div_var(&self, v: VarId) -> Option<Monomial> {
        let pos = self.vars.iter().position(|&(w, _)| w == v)?;
        let mut vars = self.vars.clone();
        if vars[pos].1 == 1 {
            vars.remove(pos);
        } else {
            vars[pos].1 -= 1;
        }
        Some(Monomial { vars })
    }

    /// Graded degree used by the operator harness: `deg x_i = i` for the
    /// p/q/y/z families (primed included), 0 for t, u, g, hbar.
    pub fn grade(&self) -> u32 {
        self.vars
            .iter()
            .map(|&(v, e)| match v.family {
                Family::P | Family::Q | Family::Y | Family::Yp | Family::Z | Family::Zp => {
                    v.index * e
                }
                _ => 0,
            })
            .sum()
    }

    pub fn check_space(&self, space: Space) -> Result<(), SeriesError> {
        let mut count = BTreeMap::new();
        for &(v, e) in &self.vars {
            match v.family {
                Family::Y | Family::Yp | Family::Z | Family::Zp => {
                    *count.entry(v.family).or_insert(0u32) += e;
                }
                _ => {}
            }
        }
        let violation = || SeriesError::SpaceViolation(format!("{}", self), space);
        match space {
            Space::P => {
                if !count.is_empty() {
                    return Err(violation());
                }
            }
            Space::PY => {
                if count.keys().any(|&f| f != Family::Y) {
                    return Err(violation());
                }
                if count.get(&Family::Y).copied().unwrap_or(0) > 1 {
                    return Err(violation());
                }
            }
            Space::PYZ => {
                if count.values().any(|&e| e > 1) {
                    return Err(violation());
                }
                let primed = count.contains_key(&Family::Yp) || count.contains_key(&Family::Zp);
                let unprimed = count.contains_key(&Family::Y) || count.contains_key(&Family::Z);
                if primed && unprimed {
                    return Err(violation());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "1");
        }
        for (i, &(v, e)) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            match v.family {
                Family::T => write!(f, "t")?,
                Family::Hbar => write!(f, "h")?,
                _ => write!(f, "{}{}", v.family.name().to_lowercase(), v.index)?,
            }
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// A truncated series: term map plus the maximal retained `t`-exponent.
#[derive(Clone, Debug)]
pub struct Series {
    terms: BTreeMap<Monomial, BRat>,
    trunc: u32,
    space: Space,
}

/// Equality is mathematical: same terms at the same truncation. The space
/// tag is a constraint attribute and the spaces are nested, so it does not
/// participate.
impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.terms == other.terms
    }
}

impl Eq for Series {}

impl Series {
    pub fn zero(space: Space, trunc: u32) -> Self {
        Series {
            terms: BTreeMap::new(),
            trunc,
            space,
        }
    }

    pub fn one(space: Space, trunc: u32) -> Self {
        Series::constant(BRat::one(), space, trunc)
    }

    pub fn constant(c: BRat, space: Space, trunc: u32) -> Self {
        let mut s = Series::zero(space, trunc);
        if !c.is_zero() {
            s.terms.insert(Monomial::one(), c);
        }
        s
    }

    pub fn monomial(m: Monomial, c: BRat, space: Space, trunc: u32) -> Result<Self, SeriesError> {
        m.check_space(space)?;
        let mut s = Series::zero(space, trunc);
        if !c.is_zero() && m.t_degree() <= trunc {
            s.terms.insert(m, c);
        }
        Ok(s)
    }

    /// Accumulate validated terms into a fresh series.
    pub fn from_terms<I>(space: Space, trunc: u32, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Monomial, BRat)>,
    {
        let mut s = Series::zero(space, trunc);
        for (m, c) in terms {
            m.check_space(space)?;
            s.insert(m, c);
        }
        Ok(s)
    }

    pub fn var(v: VarId, space: Space, trunc: u32) -> Self {
        Series::monomial(Monomial::var(v), BRat::one(), space, trunc)
            .expect("single variable violates space")
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BRat {
        self.terms.get(m).cloned().unwrap_or_else(BRat::zero)
    }

    fn insert(&mut self, m: Monomial, c: BRat) {
        if c.is_zero() || m.t_degree() > self.trunc {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.space.max(other.space), self.trunc.min(other.trunc));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, c: &BRat) -> Series {
        if c.is_zero() {
            return Series::zero(self.space, self.trunc);
        }
        let mut out = Series::zero(self.space, self.trunc);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    /// Product that reports a space violation instead of producing it.
    pub fn checked_mul(&self, other: &Series) -> Result<Series, SeriesError> {
        let space = self.space.max(other.space);
        let trunc = self.trunc.min(other.trunc);
        let mut out = Series::zero(space, trunc);
        for (ma, ca) in &self.terms {
            let ta = ma.t_degree();
            if ta > trunc {
                continue;
            }
            for (mb, cb) in &other.terms {
                if ta + mb.t_degree() > trunc {
                    continue;
                }
                let m = ma.mul(mb);
                m.check_space(space)?;
                out.insert(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Series) -> Series {
        self.checked_mul(other).expect("space violation in product")
    }

    pub fn mul_var(&self, v: VarId) -> Result<Series, SeriesError> {
        let needed = match v.family {
            Family::Y => Space::PY,
            Family::Yp | Family::Z | Family::Zp => Space::PYZ,
            _ => Space::P,
        };
        let space = self.space.max(needed);
        let mut out = Series::zero(space, self.trunc);
        for (m, c) in &self.terms {
            let m2 = m.mul_var(v, 1);
            m2.check_space(space)?;
            out.insert(m2, c.clone());
        }
        Ok(out)
    }

    /// Widen the space tag; the spaces are nested so no term can be
    /// invalidated.
    pub fn promote(&self, space: Space) -> Series {
        let mut out = self.clone();
        out.space = out.space.max(space);
        out
    }

    /// Retag with a (possibly smaller) space after validating every term.
    pub fn restrict(&self, space: Space) -> Result<Series, SeriesError> {
        for m in self.terms.keys() {
            m.check_space(space)?;
        }
        let mut out = self.clone();
        out.space = space;
        Ok(out)
    }

    pub fn truncate(&self, n: u32) -> Series {
        let mut out = Series::zero(self.space, n.min(self.trunc));
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    /// Restrict to the terms of exact `t`-degree `n`.
    pub fn t_component(&self, n: u32) -> Series {
        let mut out = Series::zero(self.space, self.trunc);
        for (m, c) in &self.terms {
            if m.t_degree() == n {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to a single variable.
    pub fn derivative(&self, v: VarId) -> Series {
        let mut out = Series::zero(self.space, self.trunc);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let m2 = m.div_var(v).unwrap();
            out.insert(m2, c * &BRat::from_int(e as i64));
        }
        out
    }

    /// The Euler operator `t d/dt`.
    pub fn t_log_derivative(&self) -> Series {
        let mut out = Series::zero(self.space, self.trunc);
        for (m, c) in &self.terms {
            let e = m.t_degree();
            if e == 0 {
                continue;
            }
            out.insert(m.clone(), c * &BRat::from_int(e as i64));
        }
        out
    }

    fn unit_plus_positive(&self) -> Result<Series, SeriesError> {
        if !self.coefficient(&Monomial::one()).is_one() {
            return Err(SeriesError::LogRequiresUnitConstant);
        }
        let mut x = self.clone();
        x.terms.remove(&Monomial::one());
        if x.terms.keys().any(|m| m.t_degree() == 0) {
            return Err(SeriesError::LogRequiresUnitConstant);
        }
        Ok(x)
    }

    /// Formal logarithm of a series with constant term 1 whose remaining
    /// terms all carry a positive power of `t`.
    pub fn log(&self) -> Result<Series, SeriesError> {
        let x = self.unit_plus_positive()?;
        let mut out = Series::zero(self.space, self.trunc);
        let mut power = Series::one(self.space, self.trunc);
        for m in 1..=(self.trunc as i64) {
            power = power.mul(&x);
            if power.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&BRat::from_ratio(sign, m)));
        }
        Ok(out)
    }

    /// Formal exponential of a series with zero constant term whose terms
    /// all carry a positive power of `t`.
    pub fn exp(&self) -> Result<Series, SeriesError> {
        if self.terms.keys().any(|m| m.t_degree() == 0) {
            return Err(SeriesError::LogRequiresUnitConstant);
        }
        let mut out = Series::one(self.space, self.trunc);
        let mut power = Series::one(self.space, self.trunc);
        let mut factorial = BigRational::from_integer(BigInt::from(1));
        for m in 1..=(self.trunc as i64) {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            factorial *= BigRational::from_integer(BigInt::from(m));
            let inv = BRat::from_poly(crate::exact::BPoly::constant(factorial.recip()));
            out = out.add(&power.scale(&inv));
        }
        Ok(out)
    }

    /// `(1+b) t d/dt log`.
    pub fn connected_log_derivative(&self) -> Result<Series, SeriesError> {
        Ok(self.log()?.t_log_derivative().scale(&BRat::alpha()))
    }

    /// Exchange `p_i <-> q_i` and `u_i <-> u_{k+1-i}`.
    pub fn pi_swap(&self, k: u32) -> Result<Series, SeriesError> {
        let mut out = Series::zero(self.space, self.trunc);
        for (m, c) in &self.terms {
            let mut pairs = Vec::with_capacity(m.vars().len());
            for &(v, e) in m.vars() {
                let w = match v.family {
                    Family::P => VarId::q(v.index),
                    Family::Q => VarId::p(v.index),
                    Family::U => {
                        if v.index > k {
                            return Err(SeriesError::PiSwapIndex { k, index: v.index });
                        }
                        VarId::u(k + 1 - v.index)
                    }
                    _ => v,
                };
                pairs.push((w, e));
            }
            out.insert(Monomial::from_pairs(pairs), c.clone());
        }
        Ok(out)
    }

    /// Exact coefficient of `t^td p_lambda q_mu prod u_i^{v_i} hbar^hd`.
    pub fn extract_coefficient(
        &self,
        t_deg: u32,
        p_part: &Partition,
        q_part: &Partition,
        u_exps: &[(u32, u32)],
        hbar_deg: u32,
    ) -> BRat {
        let mut pairs = vec![(VarId::t(), t_deg), (VarId::hbar(), hbar_deg)];
        for &part in p_part.parts() {
            pairs.push((VarId::p(part), 1));
        }
        for &part in q_part.parts() {
            pairs.push((VarId::q(part), 1));
        }
        for &(i, e) in u_exps {
            pairs.push((VarId::u(i), e));
        }
        self.coefficient(&Monomial::from_pairs(pairs))
    }

    /// JSON: a list of `{"m": [[family, index, exponent], ...], "c": coeff}`.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<serde_json::Value> = m
                    .vars()
                    .iter()
                    .map(|&(v, e)| {
                        serde_json::Value::Array(vec![
                            serde_json::Value::from(v.family.name()),
                            serde_json::Value::from(v.index),
                            serde_json::Value::from(e),
                        ])
                    })
                    .collect();
                let mut obj = serde_json::Map::new();
                obj.insert("m".into(), serde_json::Value::Array(vars));
                obj.insert("c".into(), c.to_json());
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(items)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, m)?;
        }
        Ok(())
    }
}
