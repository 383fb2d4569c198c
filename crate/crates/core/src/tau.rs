//! The Jack-expansion tau-functions and everything derived from them:
//! the k-point deformation, the weighted generating function for a formal
//! weight series G, the Hurwitz specialization G = exp(hbar z), b-Hurwitz
//! numbers, the cut-and-join residual, and the one-variable marginals.

use crate::exact::{BPoly, BRat, PositivityFailure};
use crate::jack::{jack_j, jack_norm, principal_specialization, JackError};
use crate::partition::{partitions_of, Partition};
use crate::series::{Family, Monomial, Series, SeriesError, Space, VarId};
use num::bigint::BigInt;
use num::rational::BigRational;
use rayon::prelude::*;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum TauError {
    #[error(transparent)]
    Jack(#[from] JackError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("partition sizes differ: |lambda| = {0}, |mu| = {1}")]
    SizeMismatch(u64, u64),
    #[error("hurwitz truncation must cover n = {0}")]
    TruncationTooSmall(u64),
}

/// Weight series `G(z) = 1 + sum g_k z^k` in one of three realizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSeriesG {
    /// Formal indeterminates `g_1..g_max`.
    Formal { max_k: u32 },
    /// `g_k = e_k(u_1..u_k)`, i.e. `G(z) = prod_{i<=k} (1 + u_i z)`.
    UElementary { k: u32 },
    /// `g_k = hbar^k / k!`, truncated at `hbar^max_l`.
    Exponential { max_l: u32 },
}

/// `G(c)` for a content value `c`, in the ambient series ring.
fn weight_of_content(g: &WeightSeriesG, c: &BPoly, space: Space, trunc: u32) -> Series {
    let mut out = Series::one(space, trunc);
    match g {
        WeightSeriesG::Formal { max_k } => {
            let mut cpow = BRat::one();
            for k in 1..=*max_k {
                cpow = &cpow * &BRat::from_poly(c.clone());
                let term = Series::monomial(
                    Monomial::var(VarId::g(k)),
                    cpow.clone(),
                    space,
                    trunc,
                )
                .expect("g variable");
                out = out.add(&term);
            }
        }
        WeightSeriesG::UElementary { k } => {
            let mut prod = Series::one(space, trunc);
            for i in 1..=*k {
                let ui = Series::monomial(
                    Monomial::var(VarId::u(i)),
                    BRat::from_poly(c.clone()),
                    space,
                    trunc,
                )
                .expect("u variable");
                prod = prod.mul(&Series::one(space, trunc).add(&ui));
            }
            out = prod;
        }
        WeightSeriesG::Exponential { max_l } => {
            let mut cpow = BRat::one();
            let mut fact = BigRational::from_integer(BigInt::from(1));
            for l in 1..=*max_l {
                cpow = &cpow * &BRat::from_poly(c.clone());
                fact *= BigRational::from_integer(BigInt::from(l));
                let coeff = &cpow * &BRat::from_poly(BPoly::constant(fact.recip()));
                let term = Series::monomial(
                    Monomial::from_pairs(vec![(VarId::hbar(), l)]),
                    coeff,
                    space,
                    trunc,
                )
                .expect("hbar variable");
                out = out.add(&term);
            }
        }
    }
    out
}

fn jack_pair_term(lam: &Partition, trunc: u32) -> Result<Series, TauError> {
    let j = jack_j(lam)?;
    let jp = j.expansion.to_series(Family::P, Space::P, trunc);
    let jq = j.expansion.to_series(Family::Q, Space::P, trunc);
    Ok(jp.mul(&jq))
}

fn t_power(n: u32, trunc: u32) -> Series {
    Series::monomial(
        Monomial::from_pairs(vec![(VarId::t(), n)]),
        BRat::one(),
        Space::P,
        trunc,
    )
    .unwrap()
}

/// `tau_b^(k) = sum_n t^n sum_{lam} J(p) J(q) prod_i J(u_i) / j_lam`.
pub fn tau_k(k: u32, trunc: u32) -> Result<Series, TauError> {
    assert!(k >= 1);
    let mut acc = Series::zero(Space::P, trunc);
    for n in 0..=trunc {
        let lams = partitions_of(n);
        let parts: Result<Vec<Series>, TauError> = lams
            .par_iter()
            .map(|lam| {
                let mut term = jack_pair_term(lam, trunc)?;
                let spec = principal_specialization(lam);
                for i in 1..=k {
                    let mut upoly = Series::zero(Space::P, trunc);
                    for (e, c) in spec.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let m = Monomial::from_pairs(vec![(VarId::u(i), e as u32)]);
                        upoly = upoly.add(
                            &Series::monomial(m, BRat::from_poly(c.clone()), Space::P, trunc)
                                .unwrap(),
                        );
                    }
                    term = term.mul(&upoly);
                }
                let inv_norm = BRat::one().div(&jack_norm(lam)).unwrap();
                Ok(term.scale(&inv_norm))
            })
            .collect();
        let mut level = Series::zero(Space::P, trunc);
        for p in parts? {
            level = level.add(&p);
        }
        acc = acc.add(&level.mul(&t_power(n, trunc)));
    }
    Ok(acc)
}

/// `F^G = sum_n t^n sum_lam J(p) J(q) prod_box G(c_alpha(box)) / j_lam`.
pub fn hat_f_g(g: &WeightSeriesG, trunc: u32) -> Result<Series, TauError> {
    let mut acc = Series::zero(Space::P, trunc);
    for n in 0..=trunc {
        let lams = partitions_of(n);
        let parts: Result<Vec<Series>, TauError> = lams
            .par_iter()
            .map(|lam| {
                let mut term = jack_pair_term(lam, trunc)?;
                for (x, y) in lam.boxes() {
                    let c = Partition::content_alpha(x, y);
                    term = term.mul(&weight_of_content(g, &c, Space::P, trunc));
                }
                let inv_norm = BRat::one().div(&jack_norm(lam)).unwrap();
                Ok(term.scale(&inv_norm))
            })
            .collect();
        let mut level = Series::zero(Space::P, trunc);
        for p in parts? {
            level = level.add(&p);
        }
        acc = acc.add(&level.mul(&t_power(n, trunc)));
    }
    Ok(acc)
}

/// `F_Hurwitz`: the weighted series with `G(z) = exp(hbar z)`, truncated at
/// `t^trunc_t` and `hbar^trunc_hbar`.
pub fn f_hurwitz(trunc_t: u32, trunc_hbar: u32) -> Result<Series, TauError> {
    hat_f_g(&WeightSeriesG::Exponential { max_l: trunc_hbar }, trunc_t)
}

/// The modified-marking substitution: `t -> t u_1 .. u_k`, `u_i -> 1/u_i`,
/// realized monomial-wise as the exponent flip `v_i -> n - v_i` on each
/// `t^n` term. Projects tau onto the weighted normal-form series.
pub fn modified_marking(tau: &Series, k: u32) -> Series {
    let terms: Vec<(Monomial, BRat)> = tau
        .terms()
        .map(|(m, c)| {
            let n = m.t_degree();
            let mut pairs: Vec<(VarId, u32)> = m
                .vars()
                .iter()
                .filter(|&&(v, _)| v.family != Family::U)
                .map(|&(v, e)| (v, e))
                .collect();
            for i in 1..=k {
                let v = m.exponent(VarId::u(i));
                assert!(v <= n, "u-exponent exceeds t-degree");
                pairs.push((VarId::u(i), n - v));
            }
            (Monomial::from_pairs(pairs), c.clone())
        })
        .collect();
    Series::from_terms(tau.space(), tau.trunc(), terms).expect("flip preserves the space")
}

/// Substitute `u_i = 0`: keep only the terms free of `u_i`.
pub fn set_u_zero(s: &Series, i: u32) -> Series {
    let terms: Vec<(Monomial, BRat)> = s
        .terms()
        .filter(|(m, _)| m.exponent(VarId::u(i)) == 0)
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    Series::from_terms(s.space(), s.trunc(), terms).unwrap()
}

/// The connected b-Hurwitz number `H^ell(lambda, mu)(b)`: `ell!` times the
/// coefficient of `t^n p_lambda q_mu hbar^ell` in the connected
/// log-derivative of `F_Hurwitz`. The result is checked to be a polynomial
/// in b with nonnegative integer coefficients.
pub fn hurwitz_number(ell: u32, lam: &Partition, mu: &Partition) -> Result<BRat, TauError> {
    if lam.size() != mu.size() {
        return Err(TauError::SizeMismatch(lam.size(), mu.size()));
    }
    let n = lam.size() as u32;
    let f = f_hurwitz(n, ell)?;
    let conn = f.connected_log_derivative()?;
    let c = conn.extract_coefficient(n, lam, mu, &[], ell);
    let mut fact = BRat::one();
    for i in 1..=ell as i64 {
        fact = &fact * &BRat::from_int(i);
    }
    let h = &c * &fact;
    debug_assert!(
        h.is_nonneg_int_poly().is_ok(),
        "H^{}({}, {}) = {} is not a nonnegative integer polynomial",
        ell,
        lam,
        mu,
        h
    );
    Ok(h)
}

/// `dF/dhbar - D_alpha F`, truncated at `(trunc_t, trunc_hbar - 1)`;
/// identically zero by the cut-and-join equation.
pub fn cut_and_join_residual(trunc_t: u32, trunc_hbar: u32) -> Result<Series, TauError> {
    let f = f_hurwitz(trunc_t, trunc_hbar)?;
    let dh = f.derivative(VarId::hbar());
    let da = crate::ops::d_alpha_action(&f).expect("tau lives in the plain space");
    let resid = dh.sub(&da);
    // drop the hbar orders that the truncation cannot certify
    let keep = trunc_hbar.saturating_sub(1);
    let terms: Vec<(Monomial, BRat)> = resid
        .terms()
        .filter(|(m, _)| m.exponent(VarId::hbar()) <= keep)
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    Ok(Series::from_terms(resid.space(), resid.trunc(), terms)?)
}

/// The marginals `U_m = (1+b) m d/dq_m log tau` and `V_m = (1+b) m d/dp_m
/// log tau`; `V_m = pi U_m` holds and is re-checked here.
pub fn u_v_series(k: u32, m: u32, trunc: u32) -> Result<(Series, Series), TauError> {
    let tau = tau_k(k, trunc)?;
    let log = tau.log()?;
    let scale = &BRat::alpha() * &BRat::from_int(m as i64);
    let u = log.derivative(VarId::q(m)).scale(&scale);
    let v = log.derivative(VarId::p(m)).scale(&scale);
    debug_assert_eq!(v, u.pi_swap(k)?);
    Ok((u, v))
}

/// Outcome of the coefficientwise positivity scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub passed: bool,
    pub violations: Vec<(String, PositivityFailure)>,
}

/// Apply the nonnegative-integer-polynomial test to every coefficient.
pub fn b_positivity_report(s: &Series) -> PositivityReport {
    let mut violations = Vec::new();
    for (m, c) in s.terms() {
        if let Err(e) = c.is_nonneg_int_poly() {
            violations.push((format!("{}", m), e));
        }
    }
    PositivityReport {
        passed: violations.is_empty(),
        violations,
    }
}

/// Euler characteristic of a marking monomial `t^n p_lam q_mu prod u^v`:
/// `2n - sum_{i=-1..k} (n - l^i)` with `l^{-1} = l(lam)`, `l^0 = l(mu)`,
/// `l^i = v_i`.
pub fn euler_characteristic_of_monomial(m: &Monomial, k: u32) -> i64 {
    let n = m.t_degree() as i64;
    let lp = m
        .vars()
        .iter()
        .filter(|&&(v, _)| v.family == Family::P)
        .map(|&(_, e)| e as i64)
        .sum::<i64>();
    let lq = m
        .vars()
        .iter()
        .filter(|&&(v, _)| v.family == Family::Q)
        .map(|&(_, e)| e as i64)
        .sum::<i64>();
    let mut chi = 2 * n - (n - lp) - (n - lq);
    for i in 1..=k {
        let v = m.exponent(VarId::u(i)) as i64;
        chi -= n - v;
    }
    chi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn mono(pairs: Vec<(VarId, u32)>) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    #[test]
    fn tau_low_orders() {
        let tau = tau_k(1, 2).unwrap();
        // t^0 coefficient is 1
        assert!(tau.coefficient(&Monomial::one()).is_one());
        // t^1 coefficient is p1 q1 u1 / (1+b)
        let m = mono(vec![
            (VarId::t(), 1),
            (VarId::p(1), 1),
            (VarId::q(1), 1),
            (VarId::u(1), 1),
        ]);
        assert_eq!(
            tau.coefficient(&m),
            BRat::one().div(&BRat::alpha()).unwrap()
        );
    }

    #[test]
    fn pinned_t2_log_derivative() {
        // [t^2] (1+b) t d/dt log tau^(1) =
        //   u1^2 p2 q2 + u1 p1^2 q2 + u1 p2 q1^2 + b u1 p2 q2
        let tau = tau_k(1, 2).unwrap();
        let conn = tau.connected_log_derivative().unwrap();
        let t2 = conn.t_component(2);
        let mut want = Series::zero(Space::P, 2);
        let term = |ue: u32, pp: &[u32], qp: &[u32], c: BRat| {
            let mut pairs = vec![(VarId::t(), 2), (VarId::u(1), ue)];
            for &i in pp {
                pairs.push((VarId::p(i), 1));
            }
            for &i in qp {
                pairs.push((VarId::q(i), 1));
            }
            Series::monomial(mono(pairs), c, Space::P, 2).unwrap()
        };
        want = want.add(&term(2, &[2], &[2], BRat::one()));
        want = want.add(&term(1, &[1, 1], &[2], BRat::one()));
        want = want.add(&term(1, &[2], &[1, 1], BRat::one()));
        want = want.add(&term(1, &[2], &[2], BRat::b()));
        assert_eq!(t2, want);
    }

    #[test]
    fn extract_t2_b_coefficient() {
        let tau = tau_k(1, 2).unwrap();
        let conn = tau.connected_log_derivative().unwrap();
        let c = conn.extract_coefficient(2, &pt(&[2]), &pt(&[2]), &[(1, 1)], 0);
        assert_eq!(c, BRat::b());
    }

    #[test]
    fn hat_f_g_trivial_weight() {
        // G = 1: [t^1] = p1 q1 / (1+b)
        let f = hat_f_g(&WeightSeriesG::Formal { max_k: 0 }, 1).unwrap();
        let m = mono(vec![(VarId::t(), 1), (VarId::p(1), 1), (VarId::q(1), 1)]);
        assert_eq!(f.coefficient(&m), BRat::one().div(&BRat::alpha()).unwrap());
    }

    #[test]
    fn hat_f_g_formal_g1_vanishes_at_t1() {
        let f = hat_f_g(&WeightSeriesG::Formal { max_k: 2 }, 1).unwrap();
        let m = mono(vec![
            (VarId::t(), 1),
            (VarId::p(1), 1),
            (VarId::q(1), 1),
            (VarId::g(1), 1),
        ]);
        assert!(f.coefficient(&m).is_zero());
    }

    #[test]
    fn hat_f_matches_modified_tau() {
        for k in 1..=2u32 {
            for trunc in 0..=3u32 {
                let f = hat_f_g(&WeightSeriesG::UElementary { k }, trunc).unwrap();
                let tau = tau_k(k, trunc).unwrap();
                assert_eq!(f, modified_marking(&tau, k), "k = {}, N = {}", k, trunc);
            }
        }
    }

    #[test]
    fn projective_limit_consistency() {
        for k in 1..=2u32 {
            for trunc in 0..=3u32 {
                let f_k = hat_f_g(&WeightSeriesG::UElementary { k }, trunc).unwrap();
                let f_k1 = hat_f_g(&WeightSeriesG::UElementary { k: k + 1 }, trunc).unwrap();
                assert_eq!(set_u_zero(&f_k1, k + 1), f_k, "k = {}, N = {}", k, trunc);
            }
        }
    }

    #[test]
    fn hurwitz_low_orders() {
        // [t^1 hbar^0] of F_Hurwitz is p1 q1/(1+b); [t^1 hbar^1] vanishes
        let f = f_hurwitz(1, 1).unwrap();
        let m0 = mono(vec![(VarId::t(), 1), (VarId::p(1), 1), (VarId::q(1), 1)]);
        assert_eq!(f.coefficient(&m0), BRat::one().div(&BRat::alpha()).unwrap());
        let m1 = mono(vec![
            (VarId::t(), 1),
            (VarId::p(1), 1),
            (VarId::q(1), 1),
            (VarId::hbar(), 1),
        ]);
        assert!(f.coefficient(&m1).is_zero());
    }

    #[test]
    fn hurwitz_number_examples() {
        assert_eq!(hurwitz_number(0, &pt(&[1]), &pt(&[1])).unwrap(), BRat::one());
        assert_eq!(
            hurwitz_number(1, &pt(&[2]), &pt(&[1, 1])).unwrap(),
            BRat::one()
        );
        assert_eq!(hurwitz_number(1, &pt(&[2]), &pt(&[2])).unwrap(), BRat::b());
        assert!(matches!(
            hurwitz_number(1, &pt(&[2]), &pt(&[1])),
            Err(TauError::SizeMismatch(2, 1))
        ));
    }

    #[test]
    fn hurwitz_t2_hbar1_connected() {
        // [t^2 hbar^1] of the connected log-derivative:
        // p1^2 q2 + p2 q1^2 + b p2 q2
        let f = f_hurwitz(2, 2).unwrap();
        let conn = f.connected_log_derivative().unwrap();
        let grab = |pp: &[u32], qp: &[u32]| {
            conn.extract_coefficient(2, &pt(pp), &pt(qp), &[], 1)
        };
        assert_eq!(grab(&[1, 1], &[2]), BRat::one());
        assert_eq!(grab(&[2], &[1, 1]), BRat::one());
        assert_eq!(grab(&[2], &[2]), BRat::b());
        assert!(grab(&[1, 1], &[1, 1]).is_zero());
    }

    #[test]
    fn cut_and_join_vanishes() {
        assert!(cut_and_join_residual(1, 3).unwrap().is_zero());
        assert!(cut_and_join_residual(2, 2).unwrap().is_zero());
        assert!(cut_and_join_residual(3, 3).unwrap().is_zero());
    }

    #[test]
    fn u_v_marginals() {
        let (u1, v1) = u_v_series(1, 1, 2).unwrap();
        let m = mono(vec![(VarId::t(), 1), (VarId::p(1), 1), (VarId::u(1), 1)]);
        assert_eq!(u1.t_component(1).coefficient(&m), BRat::one());
        assert_eq!(v1, u1.pi_swap(1).unwrap());
        // [t^2] U_2 = u1 p1^2 + u1^2 p2 + b u1 p2
        let (u2, _) = u_v_series(1, 2, 2).unwrap();
        let t2 = u2.t_component(2);
        let mk = |ue: u32, pp: &[(u32, u32)], c: BRat| {
            let mut pairs = vec![(VarId::t(), 2), (VarId::u(1), ue)];
            for &(i, e) in pp {
                pairs.push((VarId::p(i), e));
            }
            Series::monomial(mono(pairs), c, Space::P, 2).unwrap()
        };
        let want = mk(1, &[(1, 2)], BRat::one())
            .add(&mk(2, &[(2, 1)], BRat::one()))
            .add(&mk(1, &[(2, 1)], BRat::b()));
        assert_eq!(t2, want);
    }

    #[test]
    fn positivity_reports() {
        let tau = tau_k(1, 2).unwrap();
        let conn = tau.connected_log_derivative().unwrap();
        assert!(b_positivity_report(&conn).passed);
        // tau itself has (1+b) denominators
        let rep = b_positivity_report(&tau);
        assert!(!rep.passed);
        assert!(rep
            .violations
            .iter()
            .any(|(_, e)| *e == PositivityFailure::NontrivialDenominator));
        assert!(b_positivity_report(&Series::zero(Space::P, 1)).passed);
    }

    #[test]
    fn euler_bookkeeping() {
        for k in 1..=2u32 {
            let tau = tau_k(k, 3).unwrap();
            let conn = tau.connected_log_derivative().unwrap();
            for (m, _) in conn.terms() {
                let chi = euler_characteristic_of_monomial(m, k);
                assert!(chi <= 2, "chi = {} for {}", chi, m);
            }
        }
    }

    #[test]
    fn unconnected_equation() {
        // m q_m d/dq_m F = Theta_Y t^m q_m (Y+ prod(Lambda_Y + u))^m
        //                  (y0/(1+b)) F,   k = 1, m <= 2, N <= 3
        use crate::ops::{shift_theta_op, y_plus_u_product, ShiftThetaKind};
        for trunc in 1..=3u32 {
            let f = tau_k(1, trunc).unwrap();
            for m in 1..=2u32 {
                let lhs = f
                    .derivative(VarId::q(m))
                    .mul_var(VarId::q(m))
                    .unwrap()
                    .scale(&BRat::from_int(m as i64));
                let y0f = f
                    .mul_var(VarId::y(0))
                    .unwrap()
                    .scale(&BRat::one().div(&BRat::alpha()).unwrap());
                let mut img = y0f;
                let step = y_plus_u_product(1, Space::PY);
                for _ in 0..m {
                    img = step.apply(&img).unwrap();
                }
                let theta = shift_theta_op(ShiftThetaKind::ThetaY, Space::PY);
                let rhs = theta
                    .apply(&img)
                    .unwrap()
                    .mul(&t_power(m, trunc))
                    .mul_var(VarId::q(m))
                    .unwrap()
                    .truncate(trunc);
                assert_eq!(lhs.truncate(trunc), rhs, "m = {}, N = {}", m, trunc);
            }
        }
    }

    #[test]
    fn lemma_g_b_family() {
        // G_m(q) tau = t^m B_m^(k)(p) tau for m <= 3, k <= 2, N <= 3
        use crate::ops::{build_b, OpMode};
        for k in 1..=2u32 {
            let trunc = 3;
            let tau = tau_k(k, trunc).unwrap();
            for m in 1..=3u32 {
                let mut fact = BRat::one();
                for i in 1..=m as i64 {
                    fact = &fact * &BRat::from_int(i);
                }
                let lhs = tau.derivative(VarId::q(m)).scale(&fact);
                let b_op = build_b(k, m, OpMode::Definition);
                let rhs = b_op.apply(&tau).unwrap().mul(&t_power(m, trunc));
                assert_eq!(lhs, rhs.truncate(trunc), "k = {}, m = {}", k, m);
            }
        }
    }
}
