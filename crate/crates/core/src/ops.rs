//! The differential-operator calculus acting on `Series`, plus a generic
//! identity-verification harness.
//!
//! Operators are implemented as direct termwise actions; identities between
//! them are checked exactly by applying both sides to every basis monomial
//! of the declared space up to a grade bound. Every operator here shifts the
//! grade by a fixed bounded amount, so this is an exact procedure.

use crate::exact::BRat;
use crate::series::{Family, Monomial, Series, SeriesError, Space, VarId};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum OpsError {
    #[error("operator {0} expects space {1:?} but input contains {2}")]
    SpaceMismatch(String, Space, String),
    #[error("operators act on different spaces ({0:?} vs {1:?})")]
    IncompatibleSpaces(Space, Space),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Alphabets for the edge-adding operator and its variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaKind {
    Y,
    Z,
    Yp,
    Zp,
    TildeY,
    TildeZ,
    CrossZZpYYp,
    CrossYYpZZp,
    Delta,
}

/// Index-shift and substitution operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftThetaKind {
    YPlus,
    ZPlus,
    TildeYPlus,
    TildeZPlus,
    ThetaY,
    ThetaTildeY,
    ThetaTildeZ,
}

/// Definition-by-composition versus definition-by-recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpMode {
    Definition,
    Recursion,
}

type Action = Arc<dyn Fn(&Series) -> Result<Series, OpsError> + Send + Sync>;

/// A linear endomorphism of a declared polynomial space with a declared
/// grade shift.
#[derive(Clone)]
pub struct LinearOp {
    pub name: String,
    pub space: Space,
    pub grade_shift: i64,
    action: Action,
}

impl fmt::Debug for LinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearOp({}, {:?}, shift {})",
            self.name, self.space, self.grade_shift
        )
    }
}

impl LinearOp {
    pub fn new<F>(name: impl Into<String>, space: Space, grade_shift: i64, f: F) -> Self
    where
        F: Fn(&Series) -> Result<Series, OpsError> + Send + Sync + 'static,
    {
        LinearOp {
            name: name.into(),
            space,
            grade_shift,
            action: Arc::new(f),
        }
    }

    pub fn apply(&self, s: &Series) -> Result<Series, OpsError> {
        (self.action)(s)
    }

    pub fn zero(space: Space) -> Self {
        LinearOp::new("0", space, 0, move |s| {
            Ok(Series::zero(space, s.trunc()))
        })
    }

    pub fn identity(space: Space) -> Self {
        LinearOp::new("id", space, 0, |s| Ok(s.clone()))
    }

    /// `self` after `other` (apply `other` first).
    pub fn compose(&self, other: &LinearOp) -> LinearOp {
        let a = self.action.clone();
        let b = other.action.clone();
        LinearOp::new(
            format!("{} {}", self.name, other.name),
            self.space.max(other.space),
            self.grade_shift + other.grade_shift,
            move |s| a(&b(s)?),
        )
    }

    pub fn add(&self, other: &LinearOp) -> LinearOp {
        let a = self.action.clone();
        let b = other.action.clone();
        LinearOp::new(
            format!("({} + {})", self.name, other.name),
            self.space.max(other.space),
            self.grade_shift.max(other.grade_shift),
            move |s| Ok(a(s)?.add(&b(s)?)),
        )
    }

    pub fn sub(&self, other: &LinearOp) -> LinearOp {
        let a = self.action.clone();
        let b = other.action.clone();
        LinearOp::new(
            format!("({} - {})", self.name, other.name),
            self.space.max(other.space),
            self.grade_shift.max(other.grade_shift),
            move |s| Ok(a(s)?.sub(&b(s)?)),
        )
    }

    pub fn scale(&self, c: BRat) -> LinearOp {
        let a = self.action.clone();
        LinearOp::new(
            format!("({})*{}", c, self.name),
            self.space,
            self.grade_shift,
            move |s| Ok(a(s)?.scale(&c)),
        )
    }

    /// Multiplication by a single variable, as an operator.
    pub fn mul_var(v: VarId, space: Space) -> LinearOp {
        let grade = match v.family {
            Family::P | Family::Q | Family::Y | Family::Yp | Family::Z | Family::Zp => {
                v.index as i64
            }
            _ => 0,
        };
        LinearOp::new(format!("{:?}{}", v.family, v.index), space, grade, move |s| {
            Ok(s.mul_var(v)?)
        })
    }

    /// Right-to-left product: the last element of `factors` acts first.
    pub fn product(factors: &[LinearOp]) -> LinearOp {
        let mut it = factors.iter();
        let first = it.next().expect("empty operator product").clone();
        it.fold(first, |acc, op| acc.compose(op))
    }
}

/// `[A, B] = AB - BA`; the operators must share a space.
pub fn commutator(a: &LinearOp, b: &LinearOp) -> Result<LinearOp, OpsError> {
    if a.space != b.space {
        return Err(OpsError::IncompatibleSpaces(a.space, b.space));
    }
    let mut op = a.compose(b).sub(&b.compose(a));
    op.name = format!("[{}, {}]", a.name, b.name);
    op.grade_shift = a.grade_shift + b.grade_shift;
    Ok(op)
}

/// Occurrences of a family inside a monomial: (index, exponent).
fn family_vars(m: &Monomial, fam: Family) -> Vec<(u32, u32)> {
    m.vars()
        .iter()
        .filter(|&&(v, _)| v.family == fam)
        .map(|&(v, e)| (v.index, e))
        .collect()
}

fn lambda_plain_terms(m: &Monomial, c: &BRat, fam: Family, out: &mut Vec<(Monomial, BRat)>) {
    let alpha = BRat::alpha();
    let b = BRat::b();
    // (1+b) sum_{i,j>=1} a_{i+j-1} i d^2/(dp_i da_{j-1})
    for (pi, pe) in family_vars(m, Family::P) {
        for (s, ae) in family_vars(m, fam) {
            let m2 = m
                .div_var(VarId::p(pi))
                .unwrap()
                .div_var(VarId::new(fam, s))
                .unwrap()
                .mul_var(VarId::new(fam, pi + s), 1);
            let coeff = &(c * &alpha) * &BRat::from_int((pi as i64) * (pe as i64) * (ae as i64));
            out.push((m2, coeff));
        }
    }
    // sum_{i,j>=1} a_{i-1} p_j d/da_{i+j-1}
    for (s, ae) in family_vars(m, fam) {
        if s == 0 {
            continue;
        }
        for low in 0..s {
            // a_low p_{s-low}
            let m2 = m
                .div_var(VarId::new(fam, s))
                .unwrap()
                .mul_var(VarId::new(fam, low), 1)
                .mul_var(VarId::p(s - low), 1);
            out.push((m2, c * &BRat::from_int(ae as i64)));
        }
    }
    // b sum_{i>=0} i a_i d/da_i
    for (s, ae) in family_vars(m, fam) {
        if s == 0 {
            continue;
        }
        out.push((m.clone(), &(c * &b) * &BRat::from_int((s as i64) * (ae as i64))));
    }
}

/// Cross operator consuming (src, src2) and producing (dst, dst2), where the
/// first sum weights by alpha and the primed-to-unprimed sum carries weight 1
/// plus a diagonal `b` term. `unprimed = (Y or Z, partner)`, `primed` the
/// primed pair.
fn cross_terms(
    m: &Monomial,
    c: &BRat,
    first: Family,
    second: Family,
    first_p: Family,
    second_p: Family,
    out: &mut Vec<(Monomial, BRat)>,
) {
    let alpha = BRat::alpha();
    let b = BRat::b();
    // (1+b) sum over (first_a, second_b) -> sum_{i=1..a} first'_{i+b} second'_{a-i}
    for (a, ea) in family_vars(m, first) {
        for (bb, eb) in family_vars(m, second) {
            let base = m
                .div_var(VarId::new(first, a))
                .unwrap()
                .div_var(VarId::new(second, bb))
                .unwrap();
            for i in 1..=a {
                let m2 = base
                    .mul_var(VarId::new(first_p, i + bb), 1)
                    .mul_var(VarId::new(second_p, a - i), 1);
                out.push((m2, &(c * &alpha) * &BRat::from_int((ea * eb) as i64)));
            }
        }
    }
    // primed consumed: -> unprimed (weight 1) + primed (weight b)
    for (a, ea) in family_vars(m, first_p) {
        for (bb, eb) in family_vars(m, second_p) {
            let base = m
                .div_var(VarId::new(first_p, a))
                .unwrap()
                .div_var(VarId::new(second_p, bb))
                .unwrap();
            for i in 1..=a {
                let w = BRat::from_int((ea * eb) as i64);
                let m_un = base
                    .mul_var(VarId::new(first, i + bb), 1)
                    .mul_var(VarId::new(second, a - i), 1);
                out.push((m_un, c * &w));
                let m_pr = base
                    .mul_var(VarId::new(first_p, i + bb), 1)
                    .mul_var(VarId::new(second_p, a - i), 1);
                out.push((m_pr, &(c * &b) * &w));
            }
        }
    }
}

fn delta_terms(m: &Monomial, c: &BRat, out: &mut Vec<(Monomial, BRat)>) {
    let alpha = BRat::alpha();
    let b = BRat::b();
    // (1+b) z'_i y'_j d^2/(dy_i dz_j): note the index crossing
    for (i, ey) in family_vars(m, Family::Y) {
        for (j, ez) in family_vars(m, Family::Z) {
            let m2 = m
                .div_var(VarId::y(i))
                .unwrap()
                .div_var(VarId::z(j))
                .unwrap()
                .mul_var(VarId::zp(i), 1)
                .mul_var(VarId::yp(j), 1);
            out.push((m2, &(c * &alpha) * &BRat::from_int((ey * ez) as i64)));
        }
    }
    // z_i y_j d^2/(dy'_i dz'_j) + b z'_i y'_j d^2/(dy'_i dz'_j)
    for (i, ey) in family_vars(m, Family::Yp) {
        for (j, ez) in family_vars(m, Family::Zp) {
            let base = m
                .div_var(VarId::yp(i))
                .unwrap()
                .div_var(VarId::zp(j))
                .unwrap();
            let w = BRat::from_int((ey * ez) as i64);
            out.push((
                base.mul_var(VarId::z(i), 1).mul_var(VarId::y(j), 1),
                c * &w,
            ));
            out.push((
                base.mul_var(VarId::zp(i), 1).mul_var(VarId::yp(j), 1),
                &(c * &b) * &w,
            ));
        }
    }
}

fn termwise(space: Space, s: &Series, f: impl Fn(&Monomial, &BRat, &mut Vec<(Monomial, BRat)>)) -> Result<Series, OpsError> {
    let mut terms = Vec::new();
    for (m, c) in s.terms() {
        f(m, c, &mut terms);
    }
    Ok(Series::from_terms(space.max(s.space()), s.trunc(), terms)?)
}

/// The edge-adding operator for the requested alphabet, applied termwise.
pub fn apply_lambda(s: &Series, kind: LambdaKind) -> Result<Series, OpsError> {
    let space = match kind {
        LambdaKind::Y => Space::PY,
        _ => Space::PYZ,
    };
    match kind {
        LambdaKind::Y => termwise(space, s, |m, c, out| {
            lambda_plain_terms(m, c, Family::Y, out)
        }),
        LambdaKind::Z => termwise(space, s, |m, c, out| {
            lambda_plain_terms(m, c, Family::Z, out)
        }),
        LambdaKind::Yp => termwise(space, s, |m, c, out| {
            lambda_plain_terms(m, c, Family::Yp, out)
        }),
        LambdaKind::Zp => termwise(space, s, |m, c, out| {
            lambda_plain_terms(m, c, Family::Zp, out)
        }),
        LambdaKind::CrossZZpYYp => termwise(space, s, |m, c, out| {
            // consumes (y, z), produces (y', z') with the y-side split
            cross_terms(m, c, Family::Y, Family::Z, Family::Yp, Family::Zp, out)
        }),
        LambdaKind::CrossYYpZZp => termwise(space, s, |m, c, out| {
            cross_terms(m, c, Family::Z, Family::Y, Family::Zp, Family::Yp, out)
        }),
        LambdaKind::Delta => termwise(space, s, delta_terms),
        LambdaKind::TildeY => {
            let a = apply_lambda(s, LambdaKind::Y)?;
            let b = apply_lambda(s, LambdaKind::Yp)?;
            let c = apply_lambda(s, LambdaKind::CrossYYpZZp)?;
            Ok(a.add(&b).add(&c))
        }
        LambdaKind::TildeZ => {
            let a = apply_lambda(s, LambdaKind::Z)?;
            let b = apply_lambda(s, LambdaKind::Zp)?;
            let c = apply_lambda(s, LambdaKind::CrossZZpYYp)?;
            Ok(a.add(&b).add(&c))
        }
    }
}

/// Index shifts `a_i -> a_{i+1}` and the substitutions `a_i -> p_i`
/// (with `p_0 = 1` on the tilde variants).
pub fn apply_shift_theta(s: &Series, which: ShiftThetaKind) -> Result<Series, OpsError> {
    fn plus(s: &Series, fam: Family, space: Space) -> Result<Series, OpsError> {
        termwise(space, s, |m, c, out| {
            for (i, e) in family_vars(m, fam) {
                let m2 = m
                    .div_var(VarId::new(fam, i))
                    .unwrap()
                    .mul_var(VarId::new(fam, i + 1), 1);
                out.push((m2, c * &BRat::from_int(e as i64)));
            }
        })
    }
    fn theta_simple(s: &Series, fam: Family, space: Space) -> Result<Series, OpsError> {
        termwise(space, s, |m, c, out| {
            for (i, e) in family_vars(m, fam) {
                if i == 0 {
                    continue;
                }
                let m2 = m
                    .div_var(VarId::new(fam, i))
                    .unwrap()
                    .mul_var(VarId::p(i), 1);
                out.push((m2, c * &BRat::from_int(e as i64)));
            }
        })
    }
    fn theta_tilde(
        s: &Series,
        kill: Family,
        produced: Family,
        famp: Family,
        partner_p: Family,
    ) -> Result<Series, OpsError> {
        // sum_{i>=0} p_i d/d(kill)_i with p_0 = 1, plus
        // sum_{i,j>=0} (produced)_{i+j} d^2/(d(famp)_i d(partner_p)_j)
        termwise(Space::PYZ, s, |m, c, out| {
            for (i, e) in family_vars(m, kill) {
                let base = m.div_var(VarId::new(kill, i)).unwrap();
                let m2 = if i == 0 { base } else { base.mul_var(VarId::p(i), 1) };
                out.push((m2, c * &BRat::from_int(e as i64)));
            }
            for (i, ei) in family_vars(m, famp) {
                for (j, ej) in family_vars(m, partner_p) {
                    let m2 = m
                        .div_var(VarId::new(famp, i))
                        .unwrap()
                        .div_var(VarId::new(partner_p, j))
                        .unwrap()
                        .mul_var(VarId::new(produced, i + j), 1);
                    out.push((m2, c * &BRat::from_int((ei * ej) as i64)));
                }
            }
        })
    }
    match which {
        ShiftThetaKind::YPlus => plus(s, Family::Y, Space::PY),
        ShiftThetaKind::ZPlus => plus(s, Family::Z, Space::PYZ),
        ShiftThetaKind::TildeYPlus => {
            Ok(plus(s, Family::Y, Space::PYZ)?.add(&plus(s, Family::Yp, Space::PYZ)?))
        }
        ShiftThetaKind::TildeZPlus => {
            Ok(plus(s, Family::Z, Space::PYZ)?.add(&plus(s, Family::Zp, Space::PYZ)?))
        }
        ShiftThetaKind::ThetaY => theta_simple(s, Family::Y, Space::PY),
        ShiftThetaKind::ThetaTildeZ => {
            theta_tilde(s, Family::Z, Family::Y, Family::Yp, Family::Zp)
        }
        ShiftThetaKind::ThetaTildeY => {
            theta_tilde(s, Family::Y, Family::Z, Family::Zp, Family::Yp)
        }
    }
}

/// Laplace-Beltrami action on the p-variables; other families are passive.
pub fn d_alpha_action(s: &Series) -> Result<Series, OpsError> {
    let alpha = BRat::alpha();
    let b = BRat::b();
    let half = BRat::from_ratio(1, 2);
    termwise(s.space(), s, |m, c, out| {
        let ps = family_vars(m, Family::P);
        // (1+b)/2 sum_{i,j} p_{i+j} i j d^2/(dp_i dp_j) over ordered pairs
        for &(i, ei) in &ps {
            for &(j, ej) in &ps {
                let mult = (ei as i64) * (ej as i64 - i64::from(i == j));
                if mult == 0 {
                    continue;
                }
                let m2 = m
                    .div_var(VarId::p(i))
                    .unwrap()
                    .div_var(VarId::p(j))
                    .unwrap()
                    .mul_var(VarId::p(i + j), 1);
                let coeff = &(&(c * &alpha) * &half)
                    * &BRat::from_int((i as i64) * (j as i64) * mult);
                out.push((m2, coeff));
            }
        }
        // 1/2 sum_{i,j} (i+j) p_i p_j d/dp_{i+j}
        for &(sdx, e) in &ps {
            if sdx < 2 {
                continue;
            }
            for i in 1..sdx {
                let m2 = m
                    .div_var(VarId::p(sdx))
                    .unwrap()
                    .mul_var(VarId::p(i), 1)
                    .mul_var(VarId::p(sdx - i), 1);
                out.push((
                    m2,
                    &(c * &half) * &BRat::from_int((sdx as i64) * (e as i64)),
                ));
            }
        }
        // b/2 sum_i i(i-1) p_i d/dp_i
        for &(i, e) in &ps {
            let w = (i as i64) * (i as i64 - 1) * (e as i64);
            if w != 0 {
                out.push((m.clone(), &(&(c * &b) * &half) * &BRat::from_int(w)));
            }
        }
    })
}

/// The promotion of the Laplace-Beltrami operator to series linear in y.
pub fn d_alpha_prime_action(s: &Series) -> Result<Series, OpsError> {
    let alpha = BRat::alpha();
    let b = BRat::b();
    let half = BRat::from_ratio(1, 2);
    termwise(Space::PY.max(s.space()), s, |m, c, out| {
        // (1+b) sum_{i,j>=1} y_{i+j} i j d^2/(dy_i dp_j)
        for (i, ey) in family_vars(m, Family::Y) {
            if i == 0 {
                continue;
            }
            for (j, ep) in family_vars(m, Family::P) {
                let m2 = m
                    .div_var(VarId::y(i))
                    .unwrap()
                    .div_var(VarId::p(j))
                    .unwrap()
                    .mul_var(VarId::y(i + j), 1);
                let coeff = &(c * &alpha)
                    * &BRat::from_int((i as i64) * (j as i64) * (ey as i64) * (ep as i64));
                out.push((m2, coeff));
            }
        }
        // sum_{i,j>=1} i y_i p_j d/dy_{i+j}
        for (sdx, e) in family_vars(m, Family::Y) {
            if sdx < 2 {
                continue;
            }
            for i in 1..sdx {
                let m2 = m
                    .div_var(VarId::y(sdx))
                    .unwrap()
                    .mul_var(VarId::y(i), 1)
                    .mul_var(VarId::p(sdx - i), 1);
                out.push((m2, c * &BRat::from_int((i as i64) * (e as i64))));
            }
        }
        // b/2 sum_{i>=1} i(i-1) y_i d/dy_i
        for (i, e) in family_vars(m, Family::Y) {
            let w = (i as i64) * (i as i64 - 1) * (e as i64);
            if w != 0 {
                out.push((m.clone(), &(&(c * &b) * &half) * &BRat::from_int(w)));
            }
        }
    })
}

/// Public entry point with the contract of the spec: the input must live in
/// the plain polynomial space (t/q/u passive).
pub fn apply_d_alpha(s: &Series) -> Result<Series, OpsError> {
    for (m, _) in s.terms() {
        if let Err(e) = m.check_space(Space::P) {
            return Err(OpsError::SpaceMismatch("D_alpha".into(), Space::P, e.to_string()));
        }
    }
    d_alpha_action(s)
}

pub fn d_alpha_op(space: Space) -> LinearOp {
    LinearOp::new("D_alpha", space, 0, d_alpha_action)
}

pub fn d_alpha_prime_op(space: Space) -> LinearOp {
    LinearOp::new("D'_alpha", space, 0, d_alpha_prime_action)
}

pub fn lambda_op(kind: LambdaKind, space: Space) -> LinearOp {
    LinearOp::new(format!("Lambda({:?})", kind), space, 0, move |s| {
        apply_lambda(s, kind)
    })
}

pub fn shift_theta_op(kind: ShiftThetaKind, space: Space) -> LinearOp {
    let shift = match kind {
        ShiftThetaKind::YPlus
        | ShiftThetaKind::ZPlus
        | ShiftThetaKind::TildeYPlus
        | ShiftThetaKind::TildeZPlus => 1,
        _ => 0,
    };
    LinearOp::new(format!("{:?}", kind), space, shift, move |s| {
        apply_shift_theta(s, kind)
    })
}

/// `Y_+ prod_{l=1..k} (Lambda_Y + u_l)`, the factor with `u_1` acting first.
pub fn y_plus_u_product(k: u32, space: Space) -> LinearOp {
    let mut factors = vec![shift_theta_op(ShiftThetaKind::YPlus, space)];
    for l in (1..=k).rev() {
        factors.push(
            lambda_op(LambdaKind::Y, space).add(&LinearOp::mul_var(VarId::u(l), space)),
        );
    }
    LinearOp::product(&factors)
}

/// `A_{j+1} = Theta_Y Y_+ Lambda_Y^j y_0/(1+b)` or the commutator recursion
/// `A_1 = p_1/(1+b)`, `A_{j+1} = [D_alpha, A_j]`.
pub fn build_a(j: u32, mode: OpMode) -> LinearOp {
    assert!(j >= 1);
    match mode {
        OpMode::Definition => {
            let mut factors = vec![
                shift_theta_op(ShiftThetaKind::ThetaY, Space::PY),
                shift_theta_op(ShiftThetaKind::YPlus, Space::PY),
            ];
            for _ in 0..(j - 1) {
                factors.push(lambda_op(LambdaKind::Y, Space::PY));
            }
            factors.push(LinearOp::mul_var(VarId::y(0), Space::PY));
            let mut op = LinearOp::product(&factors)
                .scale(BRat::one().div(&BRat::alpha()).unwrap());
            op.name = format!("A_{}(def)", j);
            op.space = Space::P;
            op.grade_shift = 1;
            op
        }
        OpMode::Recursion => {
            let mut op = LinearOp::mul_var(VarId::p(1), Space::P)
                .scale(BRat::one().div(&BRat::alpha()).unwrap());
            op.name = "A_1".into();
            for i in 2..=j {
                op = commutator(&d_alpha_op(Space::P), &op).unwrap();
                op.name = format!("A_{}(rec)", i);
                op.grade_shift = 1;
            }
            op
        }
    }
}

/// `Omega_Y^(k) = Theta_Y Y_+ prod(Lambda_Y + u_l) Lambda_Y y_0/(1+b)`.
pub fn omega_y(k: u32) -> LinearOp {
    let mut factors = vec![
        shift_theta_op(ShiftThetaKind::ThetaY, Space::PY),
        y_plus_u_product(k, Space::PY),
    ];
    factors.push(lambda_op(LambdaKind::Y, Space::PY));
    factors.push(LinearOp::mul_var(VarId::y(0), Space::PY));
    let mut op = LinearOp::product(&factors).scale(BRat::one().div(&BRat::alpha()).unwrap());
    op.name = format!("Omega_Y^({})", k);
    op.space = Space::P;
    op.grade_shift = 1;
    op
}

/// `B_m^(k) = (m-1)! Theta_Y (Y_+ prod(Lambda_Y + u_l))^m y_0/(1+b)` or the
/// commutator recursion `B_{m+1} = [Omega_Y^(k), B_m]`.
pub fn build_b(k: u32, m: u32, mode: OpMode) -> LinearOp {
    assert!(k >= 1 && m >= 1);
    match mode {
        OpMode::Definition => {
            let mut factors = vec![shift_theta_op(ShiftThetaKind::ThetaY, Space::PY)];
            for _ in 0..m {
                factors.push(y_plus_u_product(k, Space::PY));
            }
            factors.push(LinearOp::mul_var(VarId::y(0), Space::PY));
            let mut fact = BRat::one();
            for i in 1..m as i64 {
                fact = &fact * &BRat::from_int(i);
            }
            let scale = fact.div(&BRat::alpha()).unwrap();
            let mut op = LinearOp::product(&factors).scale(scale);
            op.name = format!("B^({})_{}(def)", k, m);
            op.space = Space::P;
            op.grade_shift = m as i64;
            op
        }
        OpMode::Recursion => {
            let mut op = build_b(k, 1, OpMode::Definition);
            op.name = format!("B^({})_1", k);
            let omega = omega_y(k);
            for i in 2..=m {
                op = commutator(&omega, &op).unwrap();
                op.name = format!("B^({})_{}(rec)", k, i);
                op.grade_shift = i as i64;
            }
            op
        }
    }
}

/// `A_2^perp = sum_i (p_{i+1}/alpha)^perp p_i`, the adjoint of `A_2` for the
/// alpha-deformed inner product.
pub fn a2_perp_op() -> LinearOp {
    LinearOp::new("A_2^perp", Space::P, -1, |s| {
        termwise(s.space(), s, |m, c, out| {
            for (i, e) in family_vars(m, Family::P) {
                if i < 2 {
                    continue;
                }
                let m2 = m
                    .div_var(VarId::p(i))
                    .unwrap()
                    .mul_var(VarId::p(i - 1), 1);
                out.push((m2, c * &BRat::from_int((i as i64) * (e as i64))));
            }
        })
    })
}

/// `G_j = j! d/dp_j`, directly or through `G_{j+1} = [G_j, A_2^perp]`.
pub fn g_op(j: u32, mode: OpMode) -> LinearOp {
    assert!(j >= 1);
    match mode {
        OpMode::Definition => {
            let mut fact = BRat::one();
            for i in 1..=j as i64 {
                fact = &fact * &BRat::from_int(i);
            }
            LinearOp::new(format!("G_{}", j), Space::P, -(j as i64), move |s| {
                Ok(s.derivative(VarId::p(j)).scale(&fact))
            })
        }
        OpMode::Recursion => {
            let mut op = g_op(1, OpMode::Definition);
            let a2p = a2_perp_op();
            for i in 2..=j {
                op = commutator(&op, &a2p).unwrap();
                op.name = format!("G_{}(rec)", i);
                op.grade_shift = -(i as i64);
            }
            op
        }
    }
}

/// All basis monomials of the space with grade at most `max_degree`.
pub fn basis_monomials(space: Space, max_degree: u32) -> Vec<Monomial> {
    let mut p_blocks: Vec<Monomial> = Vec::new();
    for d in 0..=max_degree {
        for lam in crate::partition::partitions_of(d) {
            let pairs: Vec<(VarId, u32)> =
                lam.parts().iter().map(|&part| (VarId::p(part), 1)).collect();
            p_blocks.push(Monomial::from_pairs(pairs));
        }
    }
    let mut out = Vec::new();
    let single = |fam: Family, i: u32| Monomial::var(VarId::new(fam, i));
    match space {
        Space::P => out.extend(p_blocks),
        Space::PY => {
            for m in &p_blocks {
                out.push(m.clone());
                let used = m.grade();
                for i in 0..=(max_degree - used) {
                    out.push(m.mul(&single(Family::Y, i)));
                }
            }
        }
        Space::PYZ => {
            for m in &p_blocks {
                out.push(m.clone());
                let used = m.grade();
                let room = max_degree - used;
                for fam in [Family::Y, Family::Z, Family::Yp, Family::Zp] {
                    for i in 0..=room {
                        out.push(m.mul(&single(fam, i)));
                    }
                }
                for (fa, fb) in [(Family::Y, Family::Z), (Family::Yp, Family::Zp)] {
                    for i in 0..=room {
                        for j in 0..=(room - i) {
                            out.push(m.mul(&single(fa, i)).mul(&single(fb, j)));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Outcome of an operator-identity check, serializable for the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: String,
    pub space: Space,
    pub max_degree: u32,
    pub passed: bool,
    pub witness: Option<String>,
}

impl IdentityReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("identity".into(), self.identity.clone().into());
        map.insert("space".into(), format!("{:?}", self.space).into());
        map.insert("max_degree".into(), self.max_degree.into());
        map.insert(
            "status".into(),
            if self.passed { "pass" } else { "fail" }.into(),
        );
        if let Some(w) = &self.witness {
            map.insert("witness".into(), w.clone().into());
        }
        serde_json::Value::Object(map)
    }
}

/// Apply both operators to every basis monomial of the space up to
/// `max_degree` and compare exactly; the first mismatch is the witness.
pub fn verify_operator_identity(
    lhs: &LinearOp,
    rhs: &LinearOp,
    space: Space,
    max_degree: u32,
) -> Result<IdentityReport, OpsError> {
    use rayon::prelude::*;
    let basis = basis_monomials(space, max_degree);
    let name = format!("{} = {}", lhs.name, rhs.name);
    let failures: Vec<(usize, String)> = basis
        .par_iter()
        .enumerate()
        .filter_map(|(idx, m)| {
            let input = Series::monomial(m.clone(), BRat::one(), space, 0).ok()?;
            let l = lhs.apply(&input);
            let r = rhs.apply(&input);
            match (l, r) {
                (Ok(l), Ok(r)) => {
                    if l == r {
                        None
                    } else {
                        let diff = l.sub(&r);
                        Some((idx, format!("input {}: LHS - RHS = {}", m, diff)))
                    }
                }
                (Err(e), _) | (_, Err(e)) => Some((idx, format!("input {}: {}", m, e))),
            }
        })
        .collect();
    let witness = failures.into_iter().min_by_key(|&(i, _)| i).map(|(_, w)| w);
    Ok(IdentityReport {
        identity: name,
        space,
        max_degree,
        passed: witness.is_none(),
        witness,
    })
}

/// The named identities of the appendix lemmas, addressable from the CLI.
pub fn named_identity(name: &str) -> Option<(LinearOp, LinearOp, Space)> {
    let py = Space::PY;
    let pyz = Space::PYZ;
    let d_total = |sp| d_alpha_op(sp).add(&d_alpha_prime_op(sp));
    let lam_y = |sp| lambda_op(LambdaKind::Y, sp);
    let y_plus = |sp| shift_theta_op(ShiftThetaKind::YPlus, sp);
    let theta_y = |sp| shift_theta_op(ShiftThetaKind::ThetaY, sp);
    let lam_ty = lambda_op(LambdaKind::TildeY, pyz);
    let lam_tz = lambda_op(LambdaKind::TildeZ, pyz);
    let delta = lambda_op(LambdaKind::Delta, pyz);
    let ty_plus = shift_theta_op(ShiftThetaKind::TildeYPlus, pyz);
    let tz_plus = shift_theta_op(ShiftThetaKind::TildeZPlus, pyz);
    let th_tz = shift_theta_op(ShiftThetaKind::ThetaTildeZ, pyz);
    let th_ty = shift_theta_op(ShiftThetaKind::ThetaTildeY, pyz);
    let got = match name {
        "rela1" => (
            commutator(&d_total(py), &lam_y(py)).unwrap(),
            LinearOp::zero(py),
            py,
        ),
        "rela2" => (
            commutator(&d_total(py), &y_plus(py)).unwrap(),
            y_plus(py).compose(&lam_y(py)),
            py,
        ),
        "rela3" => (
            theta_y(py).compose(&d_total(py)),
            d_alpha_op(py).compose(&theta_y(py)),
            py,
        ),
        "rel1" => (lam_tz.compose(&delta), delta.compose(&lam_ty), pyz),
        "rel2a" => (
            lam_tz.add(&delta).compose(&lam_ty),
            lam_ty.compose(&lam_tz.add(&delta)),
            pyz,
        ),
        "rel2b" => (
            lam_tz.add(&delta).compose(&lam_ty),
            lam_ty.add(&delta).compose(&lam_tz),
            pyz,
        ),
        "rel2c" => (
            lam_ty.add(&delta).compose(&lam_tz),
            lam_tz.compose(&lam_ty.add(&delta)),
            pyz,
        ),
        "rel3" => (
            commutator(&lam_tz, &ty_plus).unwrap(),
            ty_plus.compose(&delta),
            pyz,
        ),
        "rel3bis" => (
            commutator(&lam_ty, &tz_plus).unwrap(),
            tz_plus.compose(&delta),
            pyz,
        ),
        "rel4" => (
            th_tz.compose(&lam_ty),
            lambda_op(LambdaKind::Y, pyz).compose(&th_tz),
            pyz,
        ),
        "rel4bis" => (
            th_ty.compose(&lam_tz),
            lambda_op(LambdaKind::Z, pyz).compose(&th_ty),
            pyz,
        ),
        "rel5" => (
            th_tz.compose(&ty_plus),
            shift_theta_op(ShiftThetaKind::YPlus, pyz).compose(&th_tz),
            pyz,
        ),
        "rel5bis" => (
            th_ty.compose(&tz_plus),
            shift_theta_op(ShiftThetaKind::ZPlus, pyz).compose(&th_ty),
            pyz,
        ),
        _ => return None,
    };
    Some(got)
}

pub fn named_identity_list() -> Vec<&'static str> {
    vec![
        "rela1", "rela2", "rela3", "rel1", "rel2a", "rel2b", "rel2c", "rel3", "rel3bis", "rel4",
        "rel4bis", "rel5", "rel5bis",
    ]
}

/// The symmetrized bilinear identity of the big space, for given m and n:
/// `[Z~+ L_Z~^{m+1}, Y~+ L_Y~^n] + [Z~+ L_Z~^{n+1}, Y~+ L_Y~^m]
///  = Y~+ L_Y~^n Z~+ L_Z~^m Delta + Y~+ L_Y~^m Z~+ L_Z~^n Delta`.
pub fn bilinear_identity(m: u32, n: u32) -> (LinearOp, LinearOp) {
    let pyz = Space::PYZ;
    let lam_ty = lambda_op(LambdaKind::TildeY, pyz);
    let lam_tz = lambda_op(LambdaKind::TildeZ, pyz);
    let delta = lambda_op(LambdaKind::Delta, pyz);
    let ty_plus = shift_theta_op(ShiftThetaKind::TildeYPlus, pyz);
    let tz_plus = shift_theta_op(ShiftThetaKind::TildeZPlus, pyz);
    let pow = |op: &LinearOp, e: u32| -> LinearOp {
        let mut acc = LinearOp::identity(pyz);
        for _ in 0..e {
            acc = acc.compose(op);
        }
        acc
    };
    let zl = |e: u32| tz_plus.compose(&pow(&lam_tz, e));
    let yl = |e: u32| ty_plus.compose(&pow(&lam_ty, e));
    let lhs = commutator(&zl(m + 1), &yl(n))
        .unwrap()
        .add(&commutator(&zl(n + 1), &yl(m)).unwrap());
    let rhs = yl(n)
        .compose(&zl(m))
        .compose(&delta)
        .add(&yl(m).compose(&zl(n)).compose(&delta));
    (lhs, rhs)
}
