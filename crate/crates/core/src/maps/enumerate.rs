//! Exhaustive generation of rooted connected k-constellations of a given
//! size, by enumerating corner pairings over a fixed edge skeleton and
//! deduplicating with root-based canonical forms.

use super::{Flag, FlagMap, MapsError};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct RootedMap {
    pub map: FlagMap,
    pub root: Flag,
}

/// All perfect matchings of the given flags.
fn matchings(flags: &[Flag]) -> Vec<Vec<(Flag, Flag)>> {
    if flags.is_empty() {
        return vec![vec![]];
    }
    let first = flags[0];
    let mut out = Vec::new();
    for (i, &other) in flags.iter().enumerate().skip(1) {
        let mut rest: Vec<Flag> = Vec::with_capacity(flags.len() - 2);
        rest.extend_from_slice(&flags[1..i]);
        rest.extend_from_slice(&flags[i + 1..]);
        for mut sub in matchings(&rest) {
            sub.push((first, other));
            out.push(sub);
        }
    }
    out
}

/// All pairings of `a` against `b` (bipartite perfect matchings).
fn bipartite_matchings(a: &[Flag], b: &[Flag]) -> Vec<Vec<(Flag, Flag)>> {
    use itertools::Itertools;
    let n = a.len();
    assert_eq!(n, b.len());
    b.iter()
        .copied()
        .permutations(n)
        .map(|perm| a.iter().copied().zip(perm).collect())
        .collect()
}

/// Every rooted connected k-constellation of size `n` on any surface,
/// exactly once up to rooted isomorphism, in canonical-form order.
pub fn enumerate_constellations(n: u32, k: u32) -> Result<Vec<RootedMap>, MapsError> {
    if n > 3 || k > 2 || k == 0 {
        return Err(MapsError::CapExceeded { n, k });
    }
    if n == 0 {
        return Ok(vec![]);
    }
    let n = n as usize;
    let num_edges = k as usize * n;
    let num_flags = 4 * num_edges;
    // edge e of band i (colour {i, i+1}): flags 4e..4e+3, lower-colour end
    // {4e, 4e+2}, upper end {4e+1, 4e+3}
    let mut s0 = vec![0usize; num_flags];
    let mut s2 = vec![0usize; num_flags];
    let mut color = vec![0u32; num_flags];
    for e in 0..num_edges {
        let band = (e / n) as u32;
        let base = 4 * e;
        s0[base] = base + 1;
        s0[base + 1] = base;
        s0[base + 2] = base + 3;
        s0[base + 3] = base + 2;
        s2[base] = base + 2;
        s2[base + 2] = base;
        s2[base + 1] = base + 3;
        s2[base + 3] = base + 1;
        color[base] = band;
        color[base + 2] = band;
        color[base + 1] = band + 1;
        color[base + 3] = band + 1;
    }
    let lower_ends = |band: usize| -> Vec<Flag> {
        (0..n)
            .flat_map(|e| {
                let base = 4 * (band * n + e);
                [base, base + 2]
            })
            .collect()
    };
    let upper_ends = |band: usize| -> Vec<Flag> {
        (0..n)
            .flat_map(|e| {
                let base = 4 * (band * n + e);
                [base + 1, base + 3]
            })
            .collect()
    };
    // corner pairings per colour class
    let mut class_choices: Vec<Vec<Vec<(Flag, Flag)>>> = Vec::new();
    class_choices.push(matchings(&lower_ends(0)));
    for c in 1..k as usize {
        class_choices.push(bipartite_matchings(&upper_ends(c - 1), &lower_ends(c)));
    }
    class_choices.push(matchings(&upper_ends(k as usize - 1)));

    let mut found: BTreeMap<Vec<u32>, RootedMap> = BTreeMap::new();
    let mut indices = vec![0usize; class_choices.len()];
    loop {
        let mut s1 = vec![usize::MAX; num_flags];
        for (ci, &ix) in indices.iter().enumerate() {
            for &(a, b) in &class_choices[ci][ix] {
                s1[a] = b;
                s1[b] = a;
            }
        }
        let map = FlagMap::new(k, s0.clone(), s1, s2.clone(), color.clone())
            .expect("skeleton construction is structurally valid");
        if map.components().len() == 1 {
            debug_assert!(map.validate_constellation().is_ok());
            for root in 0..num_flags {
                if map.color(root) != 0 {
                    continue;
                }
                let enc = map.canonical_encoding(root);
                found.entry(enc).or_insert_with(|| RootedMap {
                    map: map.clone(),
                    root,
                });
            }
        }
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == indices.len() {
                return Ok(found.into_values().collect());
            }
            indices[pos] += 1;
            if indices[pos] < class_choices[pos].len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_small_sizes() {
        assert_eq!(enumerate_constellations(1, 1).unwrap().len(), 1);
        // 3 orientable + 1 non-orientable rooted bipartite maps of size 2
        let maps = enumerate_constellations(2, 1).unwrap();
        assert_eq!(maps.len(), 4);
        let orientable = maps.iter().filter(|r| r.map.orientable()).count();
        assert_eq!(orientable, 3);
    }

    #[test]
    fn euler_formula_from_profile() {
        for (n, k) in [(1u32, 1u32), (2, 1), (3, 1), (1, 2), (2, 2)] {
            for rooted in enumerate_constellations(n, k).unwrap() {
                let m = &rooted.map;
                let profile = m.full_profile();
                let nn = m.size() as i64;
                let mut chi = 2 * nn;
                for lam in &profile {
                    chi -= nn - lam.len() as i64;
                }
                assert_eq!(chi, m.euler_characteristic(), "n = {}, k = {}", n, k);
                assert!(chi <= 2);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_constellations(4, 1),
            Err(MapsError::CapExceeded { n: 4, k: 1 })
        ));
        assert!(matches!(
            enumerate_constellations(2, 3),
            Err(MapsError::CapExceeded { n: 2, k: 3 })
        ));
    }

    #[test]
    fn roots_are_colour_zero() {
        for rooted in enumerate_constellations(2, 2).unwrap() {
            assert_eq!(rooted.map.color(rooted.root), 0);
            rooted.map.validate_constellation().unwrap();
        }
    }
}
