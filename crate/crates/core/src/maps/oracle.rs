//! Brute-force oracles: the MON-weighted aggregate over enumerated
//! constellations, the permutation-factorization model at b = 0, and the
//! transposition-factorization double Hurwitz count.

use super::mon::MonKind;
use super::{combinatorial_decomposition, enumerate_constellations, FlagMap, MapsError};
use crate::exact::{BPoly, BRat};
use crate::partition::Partition;
use crate::series::{Monomial, Series, Space, VarId};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

/// The marking monomial of a constellation: one `p` per face, one `q` per
/// colour-0 vertex, `u_i` per colour-i vertex.
pub fn marking(m: &FlagMap) -> Monomial {
    let profile = m.full_profile();
    let mut pairs: Vec<(VarId, u32)> = Vec::new();
    for &deg in profile[0].parts() {
        pairs.push((VarId::p(deg), 1));
    }
    for &deg in profile[1].parts() {
        pairs.push((VarId::q(deg), 1));
    }
    for i in 1..=m.k {
        let count = profile[i as usize + 1].len() as u32;
        if count > 0 {
            pairs.push((VarId::u(i), count));
        }
    }
    Monomial::from_pairs(pairs)
}

/// Sum over rooted connected constellations of `t^n weight(M) kappa(M)`.
pub fn aggregate_weighted_series(n: u32, k: u32, kind: MonKind) -> Result<Series, MapsError> {
    let mut acc = Series::zero(Space::P, n);
    for rooted in enumerate_constellations(n, k)? {
        let out = combinatorial_decomposition(&rooted.map, rooted.root, kind)?;
        let mono = marking(&rooted.map).mul_var(VarId::t(), n);
        acc = acc.add(&Series::monomial(mono, out.weight, Space::P, n).expect("marking monomial"));
    }
    Ok(acc)
}

fn cycle_type(perm: &[usize]) -> Partition {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            len += 1;
            cur = perm[cur];
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a . b)(x) = a(b(x))
    b.iter().map(|&x| a[x]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &v) in a.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn transitive(perms: &[&Vec<usize>], n: usize) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for p in perms {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, p[i]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|i| find(&mut parent, i) == root)
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

fn factorial(n: u64) -> BigInt {
    let mut f = BigInt::one();
    for i in 1..=n {
        f *= BigInt::from(i);
    }
    f
}

/// The b = 0 oracle: sum over `(k+2)`-tuples of permutations with identity
/// product and transitive joint action, marked by the cycle types, divided
/// by `(n-1)!`. The result carries no power of `t`.
pub fn permutation_oracle_b0(n: u32, k: u32) -> Result<Series, MapsError> {
    if n > 5 || k > 2 || k == 0 || n == 0 {
        return Err(MapsError::CapExceeded { n, k });
    }
    let nn = n as usize;
    let perms = all_permutations(nn);
    let mut acc = Series::zero(Space::P, 0);
    let mut stack: Vec<usize> = vec![0; k as usize + 1];
    loop {
        // tuple (tau_0, ..., tau_k) by index; tau_{-1} is forced
        let taus: Vec<&Vec<usize>> = stack.iter().map(|&i| &perms[i]).collect();
        let mut prod: Vec<usize> = (0..nn).collect();
        for t in &taus {
            prod = compose(&prod, t);
        }
        let tau_m1 = inverse(&prod);
        let mut gens = taus.clone();
        gens.push(&tau_m1);
        if transitive(&gens, nn) {
            let mut pairs: Vec<(VarId, u32)> = Vec::new();
            for &part in cycle_type(&tau_m1).parts() {
                pairs.push((VarId::p(part), 1));
            }
            for &part in cycle_type(taus[0]).parts() {
                pairs.push((VarId::q(part), 1));
            }
            for (i, t) in taus.iter().enumerate().skip(1) {
                pairs.push((VarId::u(i as u32), cycle_type(t).len() as u32));
            }
            acc = acc.add(
                &Series::monomial(Monomial::from_pairs(pairs), BRat::one(), Space::P, 0)
                    .expect("marking"),
            );
        }
        let mut pos = 0;
        loop {
            if pos == stack.len() {
                let scale = BRat::from_poly(BPoly::constant(
                    BigRational::from_integer(factorial(n as u64 - 1)).recip(),
                ));
                return Ok(acc.scale(&scale));
            }
            stack[pos] += 1;
            if stack[pos] < perms.len() {
                break;
            }
            stack[pos] = 0;
            pos += 1;
        }
    }
}

/// Transposition-factorization oracle for double Hurwitz numbers: the
/// number of transitive tuples `(tau_0 of type mu, t_1, ..., t_ell)` whose
/// forced closing permutation has type `lambda`, divided by `(n-1)!`.
/// Equals `H^ell(lambda, mu)(0)`.
pub fn hurwitz_oracle_b0(ell: u32, lam: &Partition, mu: &Partition) -> BigRational {
    assert_eq!(lam.size(), mu.size());
    let n = lam.size() as usize;
    assert!(n >= 1 && n <= 4 && ell <= 3);
    let perms = all_permutations(n);
    let mut transpositions: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(i, j);
            transpositions.push(t);
        }
    }
    let tau0s: Vec<&Vec<usize>> = perms.iter().filter(|p| &cycle_type(p) == mu).collect();
    let mut count = BigInt::zero();
    if transpositions.is_empty() && ell > 0 {
        return BigRational::zero();
    }
    for tau0 in tau0s {
        let mut idx = vec![0usize; ell as usize];
        'tuples: loop {
            let ts: Vec<&Vec<usize>> = idx.iter().map(|&i| &transpositions[i]).collect();
            let mut prod = tau0.clone();
            for t in &ts {
                prod = compose(&prod, t);
            }
            let tau_m1 = inverse(&prod);
            if &cycle_type(&tau_m1) == lam {
                let mut gens = vec![tau0];
                gens.extend(ts.iter().copied());
                gens.push(&tau_m1);
                if transitive(&gens, n) {
                    count += 1;
                }
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break 'tuples;
                }
                idx[pos] += 1;
                if idx[pos] < transpositions.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
    BigRational::new(count, factorial(n as u64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn oracle_size_one() {
        let s = permutation_oracle_b0(1, 1).unwrap();
        let m = Monomial::from_pairs(vec![(VarId::p(1), 1), (VarId::q(1), 1), (VarId::u(1), 1)]);
        assert_eq!(s.coefficient(&m), BRat::one());
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn oracle_size_two() {
        // u1^2 p2 q2 + u1 p1^2 q2 + u1 p2 q1^2
        let s = permutation_oracle_b0(2, 1).unwrap();
        assert_eq!(s.num_terms(), 3);
        let m = |pp: &[u32], qp: &[u32], ue: u32| {
            let mut pairs = vec![(VarId::u(1), ue)];
            for &i in pp {
                pairs.push((VarId::p(i), 1));
            }
            for &i in qp {
                pairs.push((VarId::q(i), 1));
            }
            Monomial::from_pairs(pairs)
        };
        assert_eq!(s.coefficient(&m(&[2], &[2], 2)), BRat::one());
        assert_eq!(s.coefficient(&m(&[1, 1], &[2], 1)), BRat::one());
        assert_eq!(s.coefficient(&m(&[2], &[1, 1], 1)), BRat::one());
    }

    #[test]
    fn aggregate_size_one() {
        let s = aggregate_weighted_series(1, 1, MonKind::IntegralCoherent).unwrap();
        let m = Monomial::from_pairs(vec![
            (VarId::t(), 1),
            (VarId::p(1), 1),
            (VarId::q(1), 1),
            (VarId::u(1), 1),
        ]);
        assert_eq!(s.coefficient(&m), BRat::one());
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn aggregate_size_two_pinned() {
        let s = aggregate_weighted_series(2, 1, MonKind::IntegralCoherent).unwrap();
        let m = |pp: &[u32], qp: &[u32], ue: u32| {
            let mut pairs = vec![(VarId::t(), 2), (VarId::u(1), ue)];
            for &i in pp {
                pairs.push((VarId::p(i), 1));
            }
            for &i in qp {
                pairs.push((VarId::q(i), 1));
            }
            Monomial::from_pairs(pairs)
        };
        assert_eq!(s.coefficient(&m(&[2], &[2], 2)), BRat::one());
        assert_eq!(s.coefficient(&m(&[1, 1], &[2], 1)), BRat::one());
        assert_eq!(s.coefficient(&m(&[2], &[1, 1], 1)), BRat::one());
        assert_eq!(s.coefficient(&m(&[2], &[2], 1)), BRat::b());
        assert_eq!(s.num_terms(), 4);
    }

    #[test]
    fn hurwitz_oracle_small() {
        assert_eq!(
            hurwitz_oracle_b0(0, &pt(&[1]), &pt(&[1])),
            BigRational::one()
        );
        assert_eq!(
            hurwitz_oracle_b0(1, &pt(&[2]), &pt(&[1, 1])),
            BigRational::one()
        );
        // the projective digon only exists at b > 0
        assert!(hurwitz_oracle_b0(1, &pt(&[2]), &pt(&[2])).is_zero());
    }
}
