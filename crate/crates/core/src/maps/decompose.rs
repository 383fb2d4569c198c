//! The combinatorial decomposition: repeatedly delete the right-path of the
//! current root corner, collect MON values edge by edge, and recurse on the
//! duals of the components that split off.

use super::mon::{mon_value, MonKind};
use super::{dual_map, Flag, FlagMap, MapsError};
use crate::exact::BRat;
use num::{One, Zero};
use std::collections::HashSet;

/// Result of decomposing a rooted constellation: the collected b-weight,
/// and for integral MONs the exponent `nu` with `weight = b^nu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionOutcome {
    pub weight: BRat,
    pub nu: Option<u32>,
}

/// Decompose the rooted connected constellation and collect its b-weight.
pub fn combinatorial_decomposition(
    map: &FlagMap,
    root: Flag,
    kind: MonKind,
) -> Result<DecompositionOutcome, MapsError> {
    map.validate_constellation()?;
    if !map.is_alive(root) || map.color(root) != 0 {
        return Err(MapsError::NotAConstellation(
            "root must be a live corner of colour 0".into(),
        ));
    }
    if map.components().len() != 1 {
        return Err(MapsError::NotAConstellation("map is not connected".into()));
    }
    let weight = vec_rho(map.clone(), root, kind)?;
    let nu = match kind {
        MonKind::RhoSym => None,
        MonKind::IntegralCoherent => {
            let p = weight.as_poly().expect("integral weight is a polynomial");
            let mut nu = None;
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                assert!(nu.is_none() && c.is_one(), "integral weight is not b^nu: {}", weight);
                nu = Some(i as u32);
            }
            Some(nu.expect("nonzero weight") )
        }
    };
    Ok(DecompositionOutcome { weight, nu })
}

fn vec_rho(mut m: FlagMap, root: Flag, kind: MonKind) -> Result<BRat, MapsError> {
    if m.is_edgeless() {
        return Ok(BRat::one());
    }
    let k = m.k;
    let rounds = m.vertex_degree(root);
    let mut total = BRat::one();
    let mut extracted: Vec<(FlagMap, Flag)> = Vec::new();
    let mut cur_root = root;
    for round in 0..rounds {
        // the right-path of the current corner, computed before deleting
        let mut path = vec![cur_root];
        for _ in 1..k {
            let last = *path.last().unwrap();
            path.push(m.s1(m.s0(last)));
        }
        let next_root = if round + 1 < rounds {
            Some(m.s1(m.s2(cur_root)))
        } else {
            None
        };
        for j in 0..k as usize {
            let phi = path[j];
            let e = m.edge_flags(phi);
            let far = m.s0(phi);
            let far_start = (!e.contains(&m.s1(far))).then(|| m.s1(far));
            let near_start = (!e.contains(&m.s1(m.s2(phi)))).then(|| m.s1(m.s2(phi)));
            total = &total * &mon_value(kind, &m, phi);
            m.delete_edge(phi);
            // split off every component that contains no future material:
            // neither remaining path flags, nor the root vertex, nor the
            // induced next root
            let mut future: HashSet<Flag> = path[j + 1..]
                .iter()
                .copied()
                .filter(|&g| m.is_alive(g))
                .collect();
            if let Some(nr) = next_root {
                if m.is_alive(nr) {
                    future.insert(nr);
                }
            }
            for comp in m.components() {
                if comp.iter().any(|g| future.contains(g)) {
                    continue;
                }
                let start = [far_start, near_start]
                    .into_iter()
                    .flatten()
                    .find(|&s| comp.binary_search(&s).is_ok());
                let Some(start) = start else {
                    continue;
                };
                let sub = m.restrict_to(&comp);
                let sub_root = first_color0_corner(&sub, start)?;
                extracted.push((sub, sub_root));
                for g in comp {
                    m.delete_flag(g);
                }
            }
        }
        if let Some(nr) = next_root {
            cur_root = nr;
        }
    }
    debug_assert!(m.is_edgeless(), "decomposition left unextracted flags");
    for (sub, sub_root) in extracted {
        let (dual, droot) = dual_map(&sub, Some(sub_root))?;
        total = &total * &vec_rho(dual.clone(), droot.unwrap(), kind)?;
    }
    Ok(total)
}

/// First corner of colour 0 on the face trace from `start`, inclusive.
fn first_color0_corner(m: &FlagMap, start: Flag) -> Result<Flag, MapsError> {
    let mut cur = start;
    for _ in 0..=m.raw_flag_count() {
        if m.color(cur) == 0 {
            return Ok(cur);
        }
        cur = m.face_next(cur);
    }
    Err(MapsError::NotAConstellation(
        "face without colour-0 corners".into(),
    ))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::BPoly;

    fn single_edge() -> FlagMap {
        FlagMap::new(
            1,
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![2, 3, 0, 1],
            vec![0, 1, 0, 1],
        )
        .unwrap()
    }

    #[test]
    fn size_one_map() {
        let m = single_edge();
        for kind in [MonKind::IntegralCoherent, MonKind::RhoSym] {
            let out = combinatorial_decomposition(&m, 0, kind).unwrap();
            assert!(out.weight.is_one());
        }
        let out = combinatorial_decomposition(&m, 0, MonKind::IntegralCoherent).unwrap();
        assert_eq!(out.nu, Some(0));
    }

    #[test]
    fn spherical_digon_nu_zero() {
        let mut m = single_edge();
        m.add_chord(0, 1, false);
        let out = combinatorial_decomposition(&m, 0, MonKind::IntegralCoherent).unwrap();
        assert_eq!(out.nu, Some(0));
    }

    #[test]
    fn projective_digon_nu_one() {
        let mut m = single_edge();
        m.add_chord(0, 1, true);
        let out = combinatorial_decomposition(&m, 0, MonKind::IntegralCoherent).unwrap();
        assert_eq!(out.nu, Some(1));
        assert_eq!(out.weight, BRat::b());
    }

    #[test]
    fn path_map_with_recursion_step() {
        // the 0-1-0 path: root at a degree-one colour-0 vertex, so the
        // remainder is rerooted, dualized, and recursed
        let mut m = single_edge();
        // pendant colour-0 leaf from the colour-1 vertex corner
        m.add_pendant(1, 0);
        m.validate_constellation().unwrap();
        let root = m.flags().find(|&f| m.color(f) == 0).unwrap();
        let out = combinatorial_decomposition(&m, root, MonKind::IntegralCoherent).unwrap();
        assert_eq!(out.nu, Some(0));
    }

    #[test]
    fn rejects_bad_root() {
        let m = single_edge();
        let err = combinatorial_decomposition(&m, 1, MonKind::RhoSym);
        assert!(err.is_err());
    }

    #[test]
    fn weight_is_monomial_for_integral() {
        let mut m = single_edge();
        m.add_chord(0, 1, true);
        let out = combinatorial_decomposition(&m, 0, MonKind::IntegralCoherent).unwrap();
        assert_eq!(out.weight.as_poly(), Some(&BPoly::b()));
    }
}
