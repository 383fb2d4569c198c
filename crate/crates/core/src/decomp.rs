//! Order-by-order solver for the decomposition equations characterizing the
//! root-degree marginals `H^[m]`, and the comparator against the Jack
//! pipeline.
//!
//! Each insertion of a dual marginal raises the t-order by at least one, so
//! iterating the right-hand side from zero converges: after `N` passes the
//! coefficients up to `t^N` are exact.

use crate::exact::BRat;
use crate::ops::{lambda_op, shift_theta_op, LambdaKind, OpsError, ShiftThetaKind};
use crate::series::{Family, Monomial, Series, SeriesError, Space, VarId};
use crate::tau::{tau_k, u_v_series, TauError};
use std::collections::BTreeMap;

#[derive(Clone, Debug, thiserror::Error)]
pub enum DecompError {
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The solved family: `h[m]` is the generating function of rooted connected
/// constellations whose root vertex has degree `m` (root vertex unmarked),
/// `htilde[m]` its image under the variable exchange.
#[derive(Clone, Debug)]
pub struct HFamily {
    pub k: u32,
    pub trunc: u32,
    pub h: BTreeMap<u32, Series>,
    pub htilde: BTreeMap<u32, Series>,
}

fn y_vars(m: &Monomial) -> Vec<(u32, u32)> {
    m.vars()
        .iter()
        .filter(|&&(v, _)| v.family == Family::Y)
        .map(|&(v, e)| (v.index, e))
        .collect()
}

/// `sum_{i,j >= 1} y_{j+i-1} Htilde^[i] d/dy_{j-1}` applied to `f`.
fn insertion_apply(
    f: &Series,
    htilde: &BTreeMap<u32, Series>,
    trunc: u32,
) -> Result<Series, DecompError> {
    let mut out = Series::zero(Space::PY, trunc);
    for (m, c) in f.terms() {
        for (s, e) in y_vars(m) {
            let base = m.div_var(VarId::y(s)).unwrap();
            let scale = c * &BRat::from_int(e as i64);
            for (&i, h) in htilde {
                if h.is_zero() {
                    continue;
                }
                let lifted = Series::monomial(
                    base.mul_var(VarId::y(s + i), 1),
                    scale.clone(),
                    Space::PY,
                    trunc,
                )?;
                out = out.add(&lifted.mul(&h.promote(Space::PY)));
            }
        }
    }
    Ok(out)
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

/// One evaluation of the right-hand sides `t^m Theta_Y (Y_+ prod_l
/// (Lambda_Y + u_l + insertion))^m (y_0)` for all `m <= trunc`, using the
/// given dual marginals.
fn rhs_all(
    k: u32,
    trunc: u32,
    htilde: &BTreeMap<u32, Series>,
) -> Result<BTreeMap<u32, Series>, DecompError> {
    let y_plus = shift_theta_op(ShiftThetaKind::YPlus, Space::PY);
    let lam = lambda_op(LambdaKind::Y, Space::PY);
    let theta = shift_theta_op(ShiftThetaKind::ThetaY, Space::PY);
    let step = |w: &Series| -> Result<Series, DecompError> {
        let mut cur = w.clone();
        for l in 1..=k {
            let mut next = lam.apply(&cur)?;
            next = next.add(&cur.mul_var(VarId::u(l))?);
            next = next.add(&insertion_apply(&cur, htilde, trunc)?);
            cur = next;
        }
        Ok(y_plus.apply(&cur)?)
    };
    let mut out = BTreeMap::new();
    let mut w = Series::var(VarId::y(0), Space::PY, trunc);
    for m in 1..=trunc {
        w = step(&w)?;
        let projected = theta.apply(&w)?;
        out.insert(m, projected.mul(&t_power(m, trunc)).restrict(Space::P)?);
    }
    Ok(out)
}

/// Solve the decomposition equations up to `t^trunc` by fixed-point
/// iteration; each pass fixes one more t-order.
pub fn solve_decomposition(k: u32, trunc: u32) -> Result<HFamily, DecompError> {
    assert!(k >= 1 && trunc >= 1);
    let mut htilde: BTreeMap<u32, Series> = (1..=trunc)
        .map(|m| (m, Series::zero(Space::P, trunc)))
        .collect();
    let mut h = htilde.clone();
    for _ in 0..trunc {
        h = rhs_all(k, trunc, &htilde)?;
        htilde = h
            .iter()
            .map(|(&m, s)| Ok((m, s.pi_swap(k)?)))
            .collect::<Result<_, SeriesError>>()?;
    }
    Ok(HFamily {
        k,
        trunc,
        h,
        htilde,
    })
}

impl HFamily {
    /// `sum_m q_m H^[m]`, the full rooted connected generating function.
    pub fn rooted_series(&self) -> Result<Series, DecompError> {
        let mut acc = Series::zero(Space::P, self.trunc);
        for (&m, s) in &self.h {
            acc = acc.add(&s.mul_var(VarId::q(m))?);
        }
        Ok(acc)
    }
}

/// Outcome of the main-theorem comparison.
#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub k: u32,
    pub trunc: u32,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Assert `sum_m q_m H^[m] = (1+b) t d/dt log tau^(k)` and `U_m = H^[m]`
/// for each `m <= trunc`; the witness is the first differing monomial.
pub fn main_theorem_check(k: u32, trunc: u32) -> Result<MainTheoremReport, DecompError> {
    let family = solve_decomposition(k, trunc)?;
    let lhs = family.rooted_series()?;
    let tau = tau_k(k, trunc)?;
    let rhs = tau.connected_log_derivative()?;
    let witness = first_difference(&lhs, &rhs, "sum_m q_m H^[m]", "(1+b) t dlog tau");
    if let Some(w) = witness {
        return Ok(MainTheoremReport {
            k,
            trunc,
            passed: false,
            witness: Some(w),
        });
    }
    for m in 1..=trunc {
        let (u_m, _) = u_v_series(k, m, trunc)?;
        let h_m = &family.h[&m];
        if let Some(w) = first_difference(h_m, &u_m, &format!("H^[{}]", m), &format!("U_{}", m)) {
            return Ok(MainTheoremReport {
                k,
                trunc,
                passed: false,
                witness: Some(w),
            });
        }
    }
    Ok(MainTheoremReport {
        k,
        trunc,
        passed: true,
        witness: None,
    })
}

fn first_difference(a: &Series, b: &Series, la: &str, lb: &str) -> Option<String> {
    let diff = a.sub(b);
    let witness = diff.terms().next().map(|(m, _)| {
        format!(
            "{} and {} differ at {}: {} vs {}",
            la,
            lb,
            m,
            a.coefficient(m),
            b.coefficient(m)
        )
    });
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn lowest_orders_k1() {
        let fam = solve_decomposition(1, 2).unwrap();
        // [t^1] H^[1] = u1 p1
        let h1 = fam.h[&1].t_component(1);
        let m = Monomial::from_pairs(vec![(VarId::t(), 1), (VarId::p(1), 1), (VarId::u(1), 1)]);
        assert_eq!(h1.coefficient(&m), BRat::one());
        assert_eq!(h1.num_terms(), 1);
        // [t^2] H^[1] = u1 p2 q1
        let h1t2 = fam.h[&1].t_component(2);
        let m = Monomial::from_pairs(vec![
            (VarId::t(), 2),
            (VarId::p(2), 1),
            (VarId::q(1), 1),
            (VarId::u(1), 1),
        ]);
        assert_eq!(h1t2.coefficient(&m), BRat::one());
        assert_eq!(h1t2.num_terms(), 1);
        // [t^2] H^[2] = u1 p1^2 + u1^2 p2 + b u1 p2
        let h2 = fam.h[&2].t_component(2);
        let mk = |ue: u32, pp: &[(u32, u32)]| {
            let mut pairs = vec![(VarId::t(), 2), (VarId::u(1), ue)];
            for &(i, e) in pp {
                pairs.push((VarId::p(i), e));
            }
            Monomial::from_pairs(pairs)
        };
        assert_eq!(h2.coefficient(&mk(1, &[(1, 2)])), BRat::one());
        assert_eq!(h2.coefficient(&mk(2, &[(2, 1)])), BRat::one());
        assert_eq!(h2.coefficient(&mk(1, &[(2, 1)])), BRat::b());
        assert_eq!(h2.num_terms(), 3);
    }

    #[test]
    fn lowest_order_law() {
        let fam = solve_decomposition(1, 3).unwrap();
        for (&m, s) in &fam.h {
            for n in 0..m {
                assert!(s.t_component(n).is_zero(), "t^{} of H^[{}]", n, m);
            }
        }
    }

    #[test]
    fn involution_consistency() {
        let fam = solve_decomposition(2, 2).unwrap();
        for (&m, s) in &fam.h {
            assert_eq!(
                s.pi_swap(2).unwrap().pi_swap(2).unwrap(),
                s.clone(),
                "m = {}",
                m
            );
            assert_eq!(fam.htilde[&m], s.pi_swap(2).unwrap());
        }
    }

    #[test]
    fn main_theorem_small() {
        let rep = main_theorem_check(1, 2).unwrap();
        assert!(rep.passed, "witness: {:?}", rep.witness);
        let rep = main_theorem_check(2, 2).unwrap();
        assert!(rep.passed, "witness: {:?}", rep.witness);
    }

    #[test]
    fn b_positivity_of_marginals() {
        let fam = solve_decomposition(1, 3).unwrap();
        for (_, s) in &fam.h {
            assert!(crate::tau::b_positivity_report(s).passed);
        }
    }

    #[test]
    fn hurwitz_profile_coefficient_via_decomp() {
        // the projective-plane digon contributes b at t^2 p2 q2 u1
        let fam = solve_decomposition(1, 2).unwrap();
        let s = fam.rooted_series().unwrap();
        assert_eq!(
            s.extract_coefficient(2, &pt(&[2]), &pt(&[2]), &[(1, 1)], 0),
            BRat::b()
        );
    }
}
