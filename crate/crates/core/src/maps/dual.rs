//! Constellation duality: add a vertex inside each face joined to every
//! corner of colour k, remove the colour-0 vertices and their edges, then
//! exchange colours `-1 <-> 0` and `i <-> k+1-i`.

use super::{Flag, FlagMap, MapsError};
use std::collections::BTreeMap;

/// Dual of a constellation, with the root transported through the natural
/// correspondence between colour-0 corners. Returns a compacted map.
pub fn dual_map(m: &FlagMap, root: Option<Flag>) -> Result<(FlagMap, Option<Flag>), MapsError> {
    m.validate_constellation()?;
    if let Some(r) = root {
        if !m.is_alive(r) || m.color(r) != 0 {
            return Err(MapsError::NotAConstellation(
                "root must be a live corner of colour 0".into(),
            ));
        }
    }
    let k = m.k;
    let star_color = k + 1;
    let mut work = m.clone();
    let mut droot: Option<Flag> = None;

    // collect the spoke attachment slots for every face, before mutating
    let mut face_walks: Vec<(bool, Vec<Flag>)> = Vec::new();
    let mut seen: BTreeMap<Flag, ()> = BTreeMap::new();
    let mut face_starts: Vec<(bool, Flag)> = Vec::new();
    if let Some(r) = root {
        face_starts.push((true, r));
        for f in m.face_of(r) {
            seen.insert(f, ());
        }
    }
    for f in m.flags() {
        if seen.contains_key(&f) {
            continue;
        }
        let face = m.face_of(f);
        let start = *face.iter().min().unwrap();
        for g in face {
            seen.insert(g, ());
        }
        face_starts.push((false, start));
    }
    for &(is_root_face, start) in &face_starts {
        let cycle = m.face_cycle(start);
        let slots: Vec<Flag> = cycle
            .iter()
            .map(|&g| m.s0(g))
            .filter(|&x| m.color(x) == k)
            .collect();
        if slots.is_empty() {
            return Err(MapsError::NotAConstellation(
                "face without colour-k corners".into(),
            ));
        }
        face_walks.push((is_root_face, slots));
    }

    // build one star per face
    for (is_root_face, slots) in face_walks {
        let (_, _, p1, q1) = work.add_pendant(slots[0], star_color);
        let mut last_open = q1;
        for (idx, &slot) in slots.iter().enumerate().skip(1) {
            let omegas: &[Flag] = if idx == 1 { &[q1, p1] } else { &[last_open] };
            let mut placed = false;
            'outer: for &omega in omegas {
                for twisted in [false, true] {
                    if !work.face_of(omega).contains(&slot) {
                        continue 'outer;
                    }
                    let before = work.num_faces();
                    let mut trial = work.clone();
                    let (_, h, _, _) = trial.add_chord(omega, slot, twisted);
                    if trial.num_faces() == before + 1 {
                        work = trial;
                        last_open = h;
                        placed = true;
                        break 'outer;
                    }
                }
            }
            assert!(placed, "star spoke could not be placed inside its face");
        }
        if is_root_face {
            droot = Some(work.s1(last_open));
        }
    }

    // remove the colour-0 vertices with their edges
    let mut zero_edges: Vec<Flag> = Vec::new();
    let mut seen_edges: BTreeMap<Flag, ()> = BTreeMap::new();
    for f in work.flags() {
        if work.color(f) == 0 {
            let id = work.edge_id(f);
            if seen_edges.insert(id, ()).is_none() {
                zero_edges.push(id);
            }
        }
    }
    for e in zero_edges {
        work.delete_edge(e);
    }

    // relabel colours
    let relabeled = work.recolor(|c| if c == star_color { 0 } else { k + 1 - c });
    let (compacted, relabel) = relabeled.compact();
    compacted.validate_constellation()?;
    let droot = droot.map(|r| relabel[&r]);
    Ok((compacted, droot))
}

impl FlagMap {
    fn recolor(&self, f: impl Fn(u32) -> u32) -> FlagMap {
        let mut out = self.clone();
        for i in 0..out.color.len() {
            if out.alive[i] {
                out.color[i] = f(out.color[i]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn single_edge_self_dual() {
        let m = single_edge();
        let (d, droot) = dual_map(&m, Some(0)).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(d.num_vertices(), 2);
        assert_eq!(d.num_faces(), 1);
        let enc_orig = m.canonical_encoding(0);
        assert_eq!(d.canonical_encoding(droot.unwrap()), enc_orig);
    }

    #[test]
    fn digon_dual_profile_swap() {
        // spherical digon: faces (1,1), colour-0 degrees (2), colour-1 (2);
        // its dual has faces (2), colour-0 degrees (1,1), colour-1 (2)
        let mut m = single_edge();
        m.add_chord(0, 1, false);
        let profile = m.full_profile();
        assert_eq!(profile[0].parts(), &[1, 1]);
        assert_eq!(profile[1].parts(), &[2]);
        let (d, _) = dual_map(&m, Some(0)).unwrap();
        let dp = d.full_profile();
        assert_eq!(dp[0].parts(), &[2]);
        assert_eq!(dp[1].parts(), &[1, 1]);
        assert_eq!(dp[2].parts(), &[2]);
        assert_eq!(d.euler_characteristic(), 2);
    }

    #[test]
    fn projective_digon_dual_stays_projective() {
        let mut m = single_edge();
        m.add_chord(0, 1, true);
        let (d, _) = dual_map(&m, Some(0)).unwrap();
        assert_eq!(d.euler_characteristic(), 1);
        assert!(!d.orientable());
        let dp = d.full_profile();
        assert_eq!(dp[0].parts(), &[2]);
        assert_eq!(dp[1].parts(), &[2]);
        assert_eq!(dp[2].parts(), &[2]);
    }

    #[test]
    fn duality_is_an_involution_small() {
        for twisted in [false, true] {
            let mut m = single_edge();
            m.add_chord(0, 1, twisted);
            for root in m.flags().filter(|&f| m.color(f) == 0).collect::<Vec<_>>() {
                let (d, dr) = dual_map(&m, Some(root)).unwrap();
                let (dd, ddr) = dual_map(&d, dr).unwrap();
                assert_eq!(
                    dd.canonical_encoding(ddr.unwrap()),
                    m.canonical_encoding(root),
                    "twisted = {}, root = {}",
                    twisted,
                    root
                );
            }
        }
    }
}
