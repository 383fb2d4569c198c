//! Measures of non-orientability: edge classification and the two concrete
//! MONs used here, the integral coherent one built from fixed face
//! orientations and the symmetric one with value (1+b)/2 on cross-face
//! deletions.

use super::{Flag, FlagMap};
use crate::exact::BRat;
use std::collections::HashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Bridge,
    CrossFace,
    SameFaceUntwisted,
    SameFaceTwisted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonKind {
    /// Values in {1, b}, fixed by canonical per-face orientations; global
    /// orientation on orientable components.
    IntegralCoherent,
    /// Value (1+b)/2 on every cross-face deletion.
    RhoSym,
}

/// Classify the deletion of the edge containing `f` from `m`.
pub fn classify_edge(m: &FlagMap, f: Flag) -> EdgeClass {
    let mut n = m.clone();
    let e = m.edge_flags(f);
    n.delete_edge(f);
    let isolated = [f, m.s0(f)]
        .iter()
        .filter(|&&end| e.contains(&m.s1(end)))
        .count();
    let comps_before = m.num_components();
    let comps_after = n.num_components() + isolated;
    if comps_after > comps_before {
        return EdgeClass::Bridge;
    }
    // liberated corners: the merged corners at the two endpoints
    let c1 = m.s1(f);
    let c2 = m.s1(m.s0(f));
    let face1 = n.face_of(c1);
    if !face1.contains(&c2) {
        return EdgeClass::CrossFace;
    }
    if m.num_faces() == n.num_faces() + 1 {
        EdgeClass::SameFaceUntwisted
    } else {
        EdgeClass::SameFaceTwisted
    }
}

/// Canonical direction of each face of the component of `any` in `m`: a set
/// of flags, one trace cycle per face. On orientable components the
/// directions come from a global orientation; otherwise each face is
/// oriented from its least flag under the canonical component labeling.
fn canonical_directions(m: &FlagMap, any: Flag) -> HashSet<Flag> {
    let comp = m.component_of(any);
    let croot = m.canonical_component_root(any);
    let mut chosen = HashSet::new();
    if let Some(classes) = orientation_classes_within(m, croot) {
        let side = classes[croot];
        for &f in &comp {
            if classes[f] == side {
                chosen.insert(f);
            }
        }
        return chosen;
    }
    // non-orientable: per-face minimal flag under the canonical labeling
    let labeling = canonical_labels(m, croot);
    let mut seen: HashSet<Flag> = HashSet::new();
    for &f in &comp {
        if seen.contains(&f) {
            continue;
        }
        let face = m.face_of(f);
        seen.extend(face.iter().copied());
        let start = *face
            .iter()
            .min_by_key(|&&g| labeling[g])
            .expect("nonempty face");
        chosen.extend(m.face_cycle(start));
    }
    chosen
}

fn orientation_classes_within(m: &FlagMap, root: Flag) -> Option<Vec<u8>> {
    let mut side = vec![u8::MAX; m.raw_flag_count()];
    side[root] = 0;
    let mut stack = vec![root];
    while let Some(g) = stack.pop() {
        for h in [m.s0(g), m.s1(g), m.s2(g)] {
            if side[h] == u8::MAX {
                side[h] = side[g] ^ 1;
                stack.push(h);
            } else if side[h] == side[g] {
                return None;
            }
        }
    }
    Some(side)
}

fn canonical_labels(m: &FlagMap, root: Flag) -> Vec<usize> {
    let mut label = vec![usize::MAX; m.raw_flag_count()];
    let mut order = vec![root];
    label[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let f = order[head];
        head += 1;
        for g in [m.s0(f), m.s1(f), m.s2(f)] {
            if label[g] == usize::MAX {
                label[g] = order.len();
                order.push(g);
            }
        }
    }
    label
}

/// The MON value of deleting the edge containing `f` from `m`.
pub fn mon_value(kind: MonKind, m: &FlagMap, f: Flag) -> BRat {
    match classify_edge(m, f) {
        EdgeClass::Bridge | EdgeClass::SameFaceUntwisted => BRat::one(),
        EdgeClass::SameFaceTwisted => BRat::b(),
        EdgeClass::CrossFace => match kind {
            MonKind::RhoSym => BRat::alpha().div(&BRat::from_int(2)).unwrap(),
            MonKind::IntegralCoherent => {
                if cross_face_respects_orientation(m, f) {
                    BRat::one()
                } else {
                    BRat::b()
                }
            }
        },
    }
}

/// For a cross-face deletion: walk the merged face of `m` in the direction
/// of `f`'s side and test whether the two face stretches of `m - e` both
/// follow their canonical directions (or both oppose them).
fn cross_face_respects_orientation(m: &FlagMap, f: Flag) -> bool {
    let e = m.edge_flags(f);
    let mut n = m.clone();
    n.delete_edge(f);
    let c1 = m.s1(f);
    let face1 = n.face_of(c1);
    let chosen = canonical_directions(&n, c1);
    // the merged face of m contains all four edge flags; trace it in the
    // direction of f
    let cycle = m.face_cycle(f);
    let mut agree1: Option<bool> = None;
    let mut agree2: Option<bool> = None;
    for &g in &cycle {
        if e.contains(&g) {
            continue;
        }
        let in_face1 = face1.contains(&g);
        let agrees = chosen.contains(&g);
        let slot = if in_face1 { &mut agree1 } else { &mut agree2 };
        match slot {
            None => *slot = Some(agrees),
            Some(prev) => debug_assert_eq!(
                *prev, agrees,
                "direction flip inside one stretch at flag {}",
                g
            ),
        }
    }
    let (a1, a2) = (
        agree1.expect("first face has surviving flags"),
        agree2.expect("second face has surviving flags"),
    );
    a1 == a2
}
