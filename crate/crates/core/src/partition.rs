//! Integer partitions, dominance order, and the alpha-statistics (hooks,
//! contents, z-factor) carried by Young diagrams.
//!
//! Box convention: a box `(x, y)` sits in column `x`, row `y`, both starting
//! at 1. Arm length is `lambda_y - x`, leg length is `lambda^t_x - y`.

use crate::exact::BPoly;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing and positive")]
    NotWeaklyDecreasing,
    #[error("dominance comparison requires equal sizes ({0} vs {1})")]
    SizeMismatch(u64, u64),
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(PartitionError::NotWeaklyDecreasing);
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(PartitionError::NotWeaklyDecreasing);
        }
        Ok(Partition { parts })
    }

    /// Sorts the given parts, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity of the part `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for i in 1..=cols {
            t.push(self.parts.iter().filter(|&&p| p >= i as u32).count() as u32);
        }
        Partition { parts: t }
    }

    /// Boxes `(x, y)` = (column, row), row-major.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (1..=len).map(move |x| (x, r as u32 + 1)))
    }

    /// Arm length of the box `(x, y)`.
    pub fn arm(&self, x: u32, y: u32) -> u32 {
        self.parts[(y - 1) as usize] - x
    }

    /// Leg length of the box `(x, y)`.
    pub fn leg(&self, x: u32, y: u32) -> u32 {
        self.parts.iter().filter(|&&p| p >= x).count() as u32 - y
    }

    /// alpha-content `alpha*(x-1) - (y-1)` as a polynomial in `b`.
    pub fn content_alpha(x: u32, y: u32) -> BPoly {
        let a = BPoly::alpha().scale(&BigRational::from_integer(BigInt::from(x as i64 - 1)));
        &a - &BPoly::from_int(y as i64 - 1)
    }

    /// Partitions covering `self` by a single box, with the added box.
    pub fn covers(&self) -> Vec<(Partition, (u32, u32))> {
        let mut out = Vec::new();
        for row in 0..=self.parts.len() {
            let cur = self.parts.get(row).copied().unwrap_or(0);
            let above = if row == 0 { u32::MAX } else { self.parts[row - 1] };
            if cur < above {
                let mut parts = self.parts.clone();
                if row == parts.len() {
                    parts.push(1);
                } else {
                    parts[row] += 1;
                }
                out.push((Partition { parts }, (cur + 1, row as u32 + 1)));
            }
        }
        out
    }

    /// Corner boxes whose removal leaves a partition.
    pub fn corners(&self) -> Vec<(Partition, (u32, u32))> {
        let mut out = Vec::new();
        for row in 0..self.parts.len() {
            let cur = self.parts[row];
            let below = self.parts.get(row + 1).copied().unwrap_or(0);
            if cur > below {
                let mut parts = self.parts.clone();
                parts[row] -= 1;
                if parts[row] == 0 {
                    parts.remove(row);
                }
                out.push((Partition { parts }, (cur, row as u32 + 1)));
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in reverse-lexicographic order, `(n)` first.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        let hi = max.min(remaining);
        for next in (1..=hi).rev() {
            current.push(next);
            rec(remaining - next, next, current, out);
            current.pop();
        }
    }
    rec(n, n, &mut current, &mut out);
    out
}

/// Dominance order: `lam <= mu` iff all prefix sums of `lam` are at most
/// those of `mu`. Only defined for equal sizes.
pub fn dominance_leq(lam: &Partition, mu: &Partition) -> Result<bool, PartitionError> {
    if lam.size() != mu.size() {
        return Err(PartitionError::SizeMismatch(lam.size(), mu.size()));
    }
    let mut sl = 0u64;
    let mut sm = 0u64;
    let rows = lam.len().max(mu.len());
    for i in 0..rows {
        sl += lam.parts.get(i).copied().unwrap_or(0) as u64;
        sm += mu.parts.get(i).copied().unwrap_or(0) as u64;
        if sl > sm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hook products, the z-factor, contents, and the Jack norm of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStats {
    pub hook: BPoly,
    pub hook_prime: BPoly,
    pub z: BigInt,
    pub contents: Vec<BPoly>,
    pub j: BPoly,
}

/// hook = prod(alpha*a + l + 1), hook' = prod(alpha*a + l + alpha),
/// z = prod i^{m_i} m_i!, contents = {alpha(x-1) - (y-1)}, j = hook * hook'.
pub fn partition_stats(lam: &Partition) -> PartitionStats {
    let alpha = BPoly::alpha();
    let mut hook = BPoly::one();
    let mut hook_prime = BPoly::one();
    let mut contents = Vec::new();
    for (x, y) in lam.boxes() {
        let a = lam.arm(x, y) as i64;
        let l = lam.leg(x, y) as i64;
        let aa = alpha.scale(&BigRational::from_integer(BigInt::from(a)));
        hook = &hook * &(&(&aa + &BPoly::from_int(l)) + &BPoly::one());
        hook_prime = &hook_prime * &(&(&aa + &BPoly::from_int(l)) + &alpha);
        contents.push(Partition::content_alpha(x, y));
    }
    let mut z = BigInt::one();
    let max_part = lam.parts.first().copied().unwrap_or(0);
    for i in 1..=max_part {
        let m = lam.multiplicity(i);
        for _ in 0..m {
            z *= BigInt::from(i);
        }
        for f in 1..=m {
            z *= BigInt::from(f);
        }
    }
    let j = &hook * &hook_prime;
    PartitionStats {
        hook,
        hook_prime,
        z,
        contents,
        j,
    }
}

/// Sum of alpha-contents of all boxes, the Laplace-Beltrami eigenvalue.
pub fn content_sum(lam: &Partition) -> BPoly {
    let mut s = BPoly::zero();
    for (x, y) in lam.boxes() {
        s = &s + &Partition::content_alpha(x, y);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    fn pt(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn counts_match_partition_function() {
        assert_eq!(partitions_of(0).len(), 1);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(6).len(), 11);
        assert_eq!(partitions_of(8).len(), 22);
    }

    #[test]
    fn revlex_order() {
        let ps = partitions_of(4);
        let expect: Vec<Partition> = vec![
            pt(&[4]),
            pt(&[3, 1]),
            pt(&[2, 2]),
            pt(&[2, 1, 1]),
            pt(&[1, 1, 1, 1]),
        ];
        assert_eq!(ps, expect);
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&pt(&[1, 1, 1]), &pt(&[2, 1])).unwrap());
        assert!(dominance_leq(&pt(&[2, 2]), &pt(&[3, 1])).unwrap());
        assert!(!dominance_leq(&pt(&[3, 1]), &pt(&[2, 2])).unwrap());
        assert!(dominance_leq(&pt(&[2, 1]), &pt(&[2, 1])).unwrap());
        assert!(matches!(
            dominance_leq(&pt(&[2]), &pt(&[1])),
            Err(PartitionError::SizeMismatch(2, 1))
        ));
    }

    #[test]
    fn conjugate_involution() {
        for n in 0..=8u32 {
            for lam in partitions_of(n) {
                assert_eq!(lam.conjugate().conjugate(), lam);
            }
        }
    }

    #[test]
    fn stats_single_box() {
        let s = partition_stats(&pt(&[1]));
        assert_eq!(s.hook, BPoly::one());
        assert_eq!(s.hook_prime, BPoly::alpha());
        assert_eq!(s.j, BPoly::alpha());
        assert_eq!(s.contents, vec![BPoly::zero()]);
        assert_eq!(s.z, BigInt::one());
    }

    #[test]
    fn stats_row_two() {
        let s = partition_stats(&pt(&[2]));
        let alpha = BPoly::alpha();
        assert_eq!(s.hook, &alpha + &BPoly::one());
        let two_alpha_sq = (&alpha * &alpha).scale(&BigRational::from_integer(BigInt::from(2)));
        assert_eq!(s.hook_prime, two_alpha_sq);
        assert_eq!(s.j, &(&alpha + &BPoly::one()) * &s.hook_prime);
        assert_eq!(s.contents, vec![BPoly::zero(), BPoly::alpha()]);
        assert_eq!(s.z, BigInt::from(2));
    }

    #[test]
    fn contents_two_one() {
        let s = partition_stats(&pt(&[2, 1]));
        let mut got = s.contents.clone();
        got.sort_by_key(|p| format!("{:?}", p));
        let mut want = vec![BPoly::zero(), BPoly::alpha(), -&BPoly::one()];
        want.sort_by_key(|p| format!("{:?}", p));
        assert_eq!(got, want);
    }

    /// Counts standard Young tableaux by recursive corner removal.
    fn syt_count(lam: &Partition) -> BigInt {
        if lam.is_empty() {
            return BigInt::one();
        }
        lam.corners()
            .into_iter()
            .map(|(mu, _)| syt_count(&mu))
            .sum()
    }

    #[test]
    fn jack_norm_at_b_zero_vs_syt() {
        // j_lambda(b=0) = (n!/f_lambda)^2 with f from the SYT oracle.
        for n in 0..=8u32 {
            let mut fact = BigInt::one();
            for i in 1..=n {
                fact *= BigInt::from(i);
            }
            for lam in partitions_of(n) {
                let f = syt_count(&lam);
                let j0 = partition_stats(&lam).j.eval(&BigRational::zero());
                let ratio = BigRational::from_integer(fact.clone())
                    / BigRational::from_integer(f.clone());
                assert_eq!(j0, &ratio * &ratio, "lambda = {}", lam);
            }
        }
    }

    #[test]
    fn contents_conjugate_swap() {
        // contents of the conjugate match contents of lambda with the roles
        // of x and y exchanged: alpha(y-1) - (x-1) recomputed directly.
        for n in 0..=8u32 {
            for lam in partitions_of(n) {
                let mut direct: Vec<BPoly> = partition_stats(&lam.conjugate()).contents;
                let mut swapped: Vec<BPoly> = lam
                    .boxes()
                    .map(|(x, y)| Partition::content_alpha(y, x))
                    .collect();
                direct.sort_by_key(|p| format!("{:?}", p));
                swapped.sort_by_key(|p| format!("{:?}", p));
                assert_eq!(direct, swapped, "lambda = {}", lam);
            }
        }
    }

    #[test]
    fn z_factor() {
        assert_eq!(partition_stats(&pt(&[2, 1])).z, BigInt::from(2));
        assert_eq!(partition_stats(&pt(&[1, 1, 1])).z, BigInt::from(6));
        assert_eq!(partition_stats(&pt(&[3, 3, 2])).z, BigInt::from(36));
    }

    #[test]
    fn content_sum_two() {
        assert_eq!(content_sum(&pt(&[2])), BPoly::alpha());
        assert_eq!(content_sum(&pt(&[1, 1])), -&BPoly::one());
        assert!(content_sum(&pt(&[1])).is_zero());
        let _ = BPoly::zero().is_zero();
    }

    #[test]
    fn empty_partition_stats() {
        let s = partition_stats(&Partition::empty());
        assert_eq!(s.j, BPoly::one());
        assert!(s.contents.is_empty());
        assert!(BigRational::zero().is_zero());
    }
}
