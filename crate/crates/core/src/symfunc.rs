//! Transition matrices between the monomial, power-sum, and elementary
//! bases, and the alpha-deformed inner product.

use crate::exact::{BPoly, BRat};
use crate::partition::{partitions_of, Partition};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::Mutex;

/// A homogeneous symmetric function written in the power-sum basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PExpr {
    degree: u64,
    coeffs: BTreeMap<Partition, BRat>,
}

impl PExpr {
    pub fn zero(degree: u64) -> Self {
        PExpr {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn term(lam: Partition, c: BRat) -> Self {
        let mut e = PExpr::zero(lam.size());
        if !c.is_zero() {
            e.coeffs.insert(lam, c);
        }
        e
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, BRat> {
        &self.coeffs
    }

    pub fn coefficient(&self, lam: &Partition) -> BRat {
        self.coeffs.get(lam).cloned().unwrap_or_else(BRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, lam: Partition, c: &BRat) {
        debug_assert_eq!(lam.size(), self.degree, "homogeneity violated");
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(lam);
        use std::collections::btree_map::Entry;
        match entry {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                let v = &*e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &PExpr) -> PExpr {
        assert_eq!(self.degree, other.degree, "homogeneity violated");
        let mut out = self.clone();
        for (lam, c) in &other.coeffs {
            out.add_term(lam.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &PExpr) -> PExpr {
        self.add(&other.scale(&-&BRat::one()))
    }

    pub fn scale(&self, c: &BRat) -> PExpr {
        let mut out = PExpr::zero(self.degree);
        if c.is_zero() {
            return out;
        }
        for (lam, v) in &self.coeffs {
            out.coeffs.insert(lam.clone(), v * c);
        }
        out
    }

    /// Multiply by the power sum `p_r`, raising the degree by `r`.
    pub fn mul_p(&self, r: u32) -> PExpr {
        let mut out = PExpr::zero(self.degree + r as u64);
        for (lam, c) in &self.coeffs {
            let mut parts = lam.parts().to_vec();
            parts.push(r);
            out.add_term(Partition::from_unsorted(parts), c);
        }
        out
    }

    /// Substitute `p_i -> u` for every `i`; returns coefficients of powers
    /// of `u`, index = exponent.
    pub fn substitute_all_p(&self) -> Vec<BRat> {
        let mut out = vec![BRat::zero(); self.coeffs.keys().map(|l| l.len()).max().unwrap_or(0) + 1];
        for (lam, c) in &self.coeffs {
            let idx = lam.len();
            out[idx] = &out[idx] + c;
        }
        out
    }

    /// Render in a series ring, with the partition indices mapped to the
    /// given variable family (P or Q).
    pub fn to_series(
        &self,
        fam: crate::series::Family,
        space: crate::series::Space,
        trunc: u32,
    ) -> crate::series::Series {
        use crate::series::{Monomial, Series, VarId};
        let terms = self.coeffs.iter().map(|(lam, c)| {
            let pairs: Vec<(VarId, u32)> = lam
                .parts()
                .iter()
                .map(|&p| (VarId::new(fam, p), 1))
                .collect();
            (Monomial::from_pairs(pairs), c.clone())
        });
        Series::from_terms(space, trunc, terms).expect("p-monomials are valid in every space")
    }

    /// JSON: list of `[partition, coeff]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|(lam, c)| {
                    serde_json::Value::Array(vec![
                        serde_json::Value::Array(
                            lam.parts().iter().map(|&p| serde_json::Value::from(p)).collect(),
                        ),
                        c.to_json(),
                    ])
                })
                .collect(),
        )
    }
}

/// Coefficient of `m_nu` in `m_lam * p_r`, summed over all candidate `nu`.
fn m_basis_mul_p(expr: &BTreeMap<Partition, BigRational>, r: u32) -> BTreeMap<Partition, BigRational> {
    let mut out: BTreeMap<Partition, BigRational> = BTreeMap::new();
    for (lam, c) in expr {
        let mut candidates: Vec<(Partition, u32)> = Vec::new();
        // grow one existing part by r, once per distinct part value
        let mut seen = Vec::new();
        for &w in lam.parts() {
            if seen.contains(&w) {
                continue;
            }
            seen.push(w);
            let mut parts = lam.parts().to_vec();
            let pos = parts.iter().position(|&p| p == w).unwrap();
            parts[pos] += r;
            candidates.push((Partition::from_unsorted(parts), w + r));
        }
        // or append r as a new part
        let mut parts = lam.parts().to_vec();
        parts.push(r);
        candidates.push((Partition::from_unsorted(parts), r));
        for (nu, v) in candidates {
            let mult = nu.multiplicity(v);
            let add = c * BigRational::from_integer(BigInt::from(mult));
            *out.entry(nu).or_insert_with(BigRational::zero) += add;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Expansion of `p_mu` in the monomial basis.
pub fn p_in_m(mu: &Partition) -> BTreeMap<Partition, BigRational> {
    let mut expr = BTreeMap::new();
    expr.insert(Partition::empty(), BigRational::one());
    for &r in mu.parts() {
        expr = m_basis_mul_p(&expr, r);
    }
    expr
}

static M_TO_P_CACHE: Mutex<Option<HashMap<Partition, PExpr>>> = Mutex::new(None);

/// Expansion of the monomial symmetric function `m_lam` in the power-sum
/// basis, via the unitriangular system `p_mu = sum_{nu >= mu} c m_nu`.
pub fn m_to_p(lam: &Partition) -> PExpr {
    {
        let cache = M_TO_P_CACHE.lock().unwrap();
        if let Some(map) = cache.as_ref() {
            if let Some(e) = map.get(lam) {
                return e.clone();
            }
        }
    }
    let n = lam.size() as u32;
    let ps = partitions_of(n);
    // matrix[i][j]: coefficient of m_{ps[i]} in p_{ps[j]}; upper triangular
    // in the reverse-lexicographic order, which refines dominance.
    let idx: HashMap<&Partition, usize> = ps.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let dim = ps.len();
    let mut mat = vec![vec![BigRational::zero(); dim]; dim];
    for (j, mu) in ps.iter().enumerate() {
        for (nu, c) in p_in_m(mu) {
            mat[idx[&nu]][j] = c;
        }
    }
    let mut results: HashMap<Partition, PExpr> = HashMap::new();
    for (target, lam_i) in ps.iter().enumerate() {
        // solve mat * x = e_target by back substitution from the bottom
        let mut x = vec![BigRational::zero(); dim];
        for j in (0..dim).rev() {
            let mut rhs = if j == target {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for (jj, xv) in x.iter().enumerate().skip(j + 1) {
                rhs -= &mat[j][jj] * xv;
            }
            assert!(!mat[j][j].is_zero(), "transition matrix not unitriangular");
            x[j] = rhs / &mat[j][j];
        }
        let mut e = PExpr::zero(n as u64);
        for (j, xv) in x.iter().enumerate() {
            if !xv.is_zero() {
                e.add_term(ps[j].clone(), &BRat::from_poly(BPoly::constant(xv.clone())));
            }
        }
        results.insert(lam_i.clone(), e);
    }
    let out = results[lam].clone();
    let mut cache = M_TO_P_CACHE.lock().unwrap();
    cache.get_or_insert_with(HashMap::new).extend(results);
    out
}

/// Round-trip companion of `m_to_p`: expand a power-sum expression in the
/// monomial basis.
pub fn p_to_m(expr: &PExpr) -> BTreeMap<Partition, BRat> {
    let mut out: BTreeMap<Partition, BRat> = BTreeMap::new();
    for (mu, c) in expr.coeffs() {
        for (nu, v) in p_in_m(mu) {
            let add = c * &BRat::from_poly(BPoly::constant(v));
            let e = out.entry(nu).or_insert_with(BRat::zero);
            *e = &*e + &add;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Bilinear extension of `<p_mu, p_nu> = alpha^{l(mu)} z_mu delta_{mu,nu}`.
pub fn inner_product_alpha(f: &PExpr, g: &PExpr) -> BRat {
    if f.degree() != g.degree() {
        return BRat::zero();
    }
    let alpha = BRat::alpha();
    let mut acc = BRat::zero();
    for (lam, cf) in f.coeffs() {
        let cg = g.coefficient(lam);
        if cg.is_zero() {
            continue;
        }
        let mut w = BRat::one();
        for _ in 0..lam.len() {
            w = &w * &alpha;
        }
        let z = crate::partition::partition_stats(lam).z;
        w = &w * &BRat::from_poly(BPoly::constant(BigRational::from_integer(z)));
        acc = &acc + &(&(cf * &cg) * &w);
    }
    acc
}

/// Number of 0-1 matrices with row sums `mu` and column sums `iota`.
pub fn zero_one_matrix_count(mu: &Partition, iota: &Partition) -> BigInt {
    fn rec(rows: &[u32], cols: &mut Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), BigInt>) -> BigInt {
        if rows.is_empty() {
            return if cols.iter().all(|&c| c == 0) {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        let key = (rows.len(), cols.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let r = rows[0] as usize;
        let ncols = cols.len();
        let mut total = BigInt::zero();
        // choose the set of columns receiving a 1 in this row
        let mut choice = vec![false; ncols];
        fn choose(
            i: usize,
            left: usize,
            choice: &mut Vec<bool>,
            rows: &[u32],
            cols: &mut Vec<u32>,
            total: &mut BigInt,
            memo: &mut HashMap<(usize, Vec<u32>), BigInt>,
        ) {
            if left == 0 {
                *total += rec(&rows[1..], cols, memo);
                return;
            }
            if i >= choice.len() || choice.len() - i < left {
                return;
            }
            if cols[i] > 0 {
                choice[i] = true;
                cols[i] -= 1;
                choose(i + 1, left - 1, choice, rows, cols, total, memo);
                cols[i] += 1;
                choice[i] = false;
            }
            choose(i + 1, left, choice, rows, cols, total, memo);
        }
        choose(0, r, &mut choice, rows, cols, &mut total, memo);
        memo.insert(key, total.clone());
        total
    }
    if mu.size() != iota.size() {
        return BigInt::zero();
    }
    let rows: Vec<u32> = mu.parts().to_vec();
    let mut cols: Vec<u32> = iota.parts().to_vec();
    let mut memo = HashMap::new();
    rec(&rows, &mut cols, &mut memo)
}

/// The polynomial `f_iota` with `f_iota(e_1, e_2, ...) = m_iota`, as a map
/// from partitions `mu` to the coefficient of `g_mu = prod g_{mu_i}`.
pub fn monomial_in_elementary(iota: &Partition) -> BTreeMap<Partition, BigRational> {
    let n = iota.size() as u32;
    let ps = partitions_of(n);
    let dim = ps.len();
    // R[mu][iota] with e_mu = sum_iota R m_iota; solve R^T-style system for
    // the column of R^{-1} indexed by iota.
    let mut r = vec![vec![BigRational::zero(); dim]; dim];
    for (i, mu) in ps.iter().enumerate() {
        for (j, io) in ps.iter().enumerate() {
            r[i][j] = BigRational::from_integer(zero_one_matrix_count(mu, io));
        }
    }
    // m_iota = sum_mu (R^{-1})_{iota, mu} e_mu: solve x R = e_iota, i.e.
    // R^T x = e_iota by Gaussian elimination (sizes are tiny).
    let target = ps.iter().position(|p| p == iota).expect("partition size");
    let mut a = vec![vec![BigRational::zero(); dim + 1]; dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i][j] = r[j][i].clone();
        }
        a[i][dim] = if i == target {
            BigRational::one()
        } else {
            BigRational::zero()
        };
    }
    for col in 0..dim {
        let pivot = (col..dim)
            .find(|&row| !a[row][col].is_zero())
            .expect("0-1 matrix transition is invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..=dim {
            a[col][j] = &a[col][j] / &p;
        }
        for row in 0..dim {
            if row != col && !a[row][col].is_zero() {
                let f = a[row][col].clone();
                for j in col..=dim {
                    a[row][j] = &a[row][j] - &(&f * &a[col][j]);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (i, mu) in ps.iter().enumerate() {
        if !a[i][dim].is_zero() {
            out.insert(mu.clone(), a[i][dim].clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::dominance_leq;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn m_to_p_examples() {
        assert_eq!(m_to_p(&pt(&[1])), PExpr::term(pt(&[1]), BRat::one()));
        assert_eq!(m_to_p(&pt(&[2])), PExpr::term(pt(&[2]), BRat::one()));
        // m_{1,1} = (p1^2 - p2)/2
        let mut want = PExpr::zero(2);
        want.add_term(pt(&[1, 1]), &BRat::from_ratio(1, 2));
        want.add_term(pt(&[2]), &BRat::from_ratio(-1, 2));
        assert_eq!(m_to_p(&pt(&[1, 1])), want);
    }

    #[test]
    fn roundtrip_up_to_eight() {
        for n in 0..=8u32 {
            for lam in partitions_of(n) {
                let back = p_to_m(&m_to_p(&lam));
                assert_eq!(back.len(), 1, "lambda = {}", lam);
                let (k, v) = back.iter().next().unwrap();
                assert_eq!(k, &lam);
                assert!(v.is_one());
            }
        }
    }

    #[test]
    fn inner_product_examples() {
        let p2 = PExpr::term(pt(&[2]), BRat::one());
        let alpha = BRat::alpha();
        // <p2, p2> = 2 alpha
        assert_eq!(
            inner_product_alpha(&p2, &p2),
            &BRat::from_int(2) * &alpha
        );
        let p11 = PExpr::term(pt(&[1, 1]), BRat::one());
        assert!(inner_product_alpha(&p11, &p2).is_zero());
        // <p1^2 + alpha p2, same> = 2 alpha^2 (1 + alpha) = j_{(2)}
        let f = p11.add(&p2.scale(&alpha));
        let norm = inner_product_alpha(&f, &f);
        let want = &(&(&BRat::from_int(2) * &alpha) * &alpha)
            * &(&BRat::one() + &alpha);
        assert_eq!(norm, want);
    }

    #[test]
    fn elementary_examples() {
        let f1 = monomial_in_elementary(&pt(&[1]));
        assert_eq!(f1.len(), 1);
        assert_eq!(f1[&pt(&[1])], BigRational::one());
        // m_{1,1} = e_2
        let f11 = monomial_in_elementary(&pt(&[1, 1]));
        assert_eq!(f11.len(), 1);
        assert_eq!(f11[&pt(&[2])], BigRational::one());
        // m_2 = e_1^2 - 2 e_2
        let f2 = monomial_in_elementary(&pt(&[2]));
        assert_eq!(f2[&pt(&[1, 1])], BigRational::one());
        assert_eq!(f2[&pt(&[2])], BigRational::from_integer(BigInt::from(-2)));
        assert_eq!(f2.len(), 2);
    }

    #[test]
    fn r_inverse_is_integral() {
        for n in 1..=6u32 {
            for iota in partitions_of(n) {
                for (_, c) in monomial_in_elementary(&iota) {
                    assert!(c.is_integer(), "non-integer inverse entry for {}", iota);
                }
            }
        }
    }

    #[test]
    fn r_unitriangular_under_dominance() {
        // R_{mu, iota} nonzero only for iota <= mu' in dominance, and
        // R_{mu, mu'} = 1.
        for n in 1..=6u32 {
            for mu in partitions_of(n) {
                let conj = mu.conjugate();
                assert_eq!(zero_one_matrix_count(&mu, &conj), BigInt::one());
                for iota in partitions_of(n) {
                    let c = zero_one_matrix_count(&mu, &iota);
                    if !c.is_zero() {
                        assert!(dominance_leq(&iota, &conj).unwrap());
                    }
                }
            }
        }
    }

    // Dense expansion oracle in a fixed number of variables.
    type Dense = HashMap<Vec<u32>, BigRational>;

    fn dense_m(lam: &Partition, vars: usize) -> Dense {
        use itertools::Itertools;
        let mut exps = lam.parts().to_vec();
        exps.resize(vars, 0);
        let mut out = Dense::new();
        for perm in exps.iter().copied().permutations(vars).unique() {
            out.insert(perm, BigRational::one());
        }
        out
    }

    fn dense_e(k: u32, vars: usize) -> Dense {
        use itertools::Itertools;
        let mut out = Dense::new();
        for combo in (0..vars).combinations(k as usize) {
            let mut exp = vec![0u32; vars];
            for i in combo {
                exp[i] = 1;
            }
            out.insert(exp, BigRational::one());
        }
        out
    }

    fn dense_mul(a: &Dense, b: &Dense) -> Dense {
        let mut out = Dense::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.entry(e).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn e_mu_expansion_matches_dense_oracle() {
        for n in 1..=6u32 {
            let vars = n as usize;
            for mu in partitions_of(n) {
                let mut emu = Dense::new();
                emu.insert(vec![0; vars], BigRational::one());
                for &part in mu.parts() {
                    emu = dense_mul(&emu, &dense_e(part, vars));
                }
                let mut sum = Dense::new();
                for iota in partitions_of(n) {
                    let r = zero_one_matrix_count(&mu, &iota);
                    if r.is_zero() {
                        continue;
                    }
                    let r = BigRational::from_integer(r);
                    for (e, c) in dense_m(&iota, vars) {
                        let entry = sum.entry(e).or_insert_with(BigRational::zero);
                        *entry += &r * &c;
                    }
                }
                sum.retain(|_, v| !v.is_zero());
                assert_eq!(emu, sum, "mu = {}", mu);
            }
        }
    }

    #[test]
    fn m_to_p_matches_dense_symmetrization() {
        // the declared design: validate against a finitely-many-variables
        // expansion for small degree
        for n in 1..=5u32 {
            let vars = n as usize;
            for lam in partitions_of(n) {
                let expr = m_to_p(&lam);
                let mut dense = Dense::new();
                for (mu, c) in expr.coeffs() {
                    let c0 = c.at_b_zero();
                    let mut pm = Dense::new();
                    pm.insert(vec![0; vars], BigRational::one());
                    for &part in mu.parts() {
                        let mut pk = Dense::new();
                        for v in 0..vars {
                            let mut e = vec![0u32; vars];
                            e[v] = part;
                            pk.insert(e, BigRational::one());
                        }
                        pm = dense_mul(&pm, &pk);
                    }
                    for (e, v) in pm {
                        let entry = dense.entry(e).or_insert_with(BigRational::zero);
                        *entry += &c0 * &v;
                    }
                }
                dense.retain(|_, v| !v.is_zero());
                assert_eq!(dense, dense_m(&lam, vars), "lambda = {}", lam);
            }
        }
    }
}
