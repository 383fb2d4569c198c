//! Flag-encoded vertex-coloured maps on general surfaces.
//!
//! A map is a set of flags with three fixed-point-free involutions:
//! `s0` crosses an edge to its other end, `s1` rotates across a corner to
//! the adjacent edge at the same vertex, `s2` flips to the other side of a
//! half-edge. Vertices are orbits of `<s1,s2>`, edges orbits of `<s0,s2>`
//! (size four), faces orbits of `<s0,s1>`. A corner is an `s1`-pair and an
//! oriented corner is a single flag.
//!
//! Edge deletion, face tracing, duality, and orientability are all orbit
//! computations; orientability is bipartiteness of the flag graph.

mod decompose;
mod dual;
mod enumerate;
mod mon;
mod oracle;

pub use decompose::{combinatorial_decomposition, DecompositionOutcome};
pub use dual::dual_map;
pub use enumerate::{enumerate_constellations, RootedMap};
pub use mon::{classify_edge, mon_value, EdgeClass, MonKind};
pub use oracle::{aggregate_weighted_series, hurwitz_oracle_b0, permutation_oracle_b0};

use crate::partition::Partition;
use std::collections::BTreeMap;

pub type Flag = usize;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum MapsError {
    #[error("not a constellation: {0}")]
    NotAConstellation(String),
    #[error("enumeration cap exceeded: n = {n}, k = {k}")]
    CapExceeded { n: u32, k: u32 },
    #[error("invalid involution data: {0}")]
    InvalidStructure(String),
}

/// A vertex-coloured map encoded by flags and three involutions. Deleted
/// flags stay allocated but dead, so flag identities are stable across
/// edge deletions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagMap {
    pub k: u32,
    s0: Vec<Flag>,
    s1: Vec<Flag>,
    s2: Vec<Flag>,
    color: Vec<u32>,
    alive: Vec<bool>,
}

impl FlagMap {
    pub fn new(
        k: u32,
        s0: Vec<Flag>,
        s1: Vec<Flag>,
        s2: Vec<Flag>,
        color: Vec<u32>,
    ) -> Result<Self, MapsError> {
        let n = s0.len();
        if s1.len() != n || s2.len() != n || color.len() != n {
            return Err(MapsError::InvalidStructure("length mismatch".into()));
        }
        let map = FlagMap {
            k,
            s0,
            s1,
            s2,
            color,
            alive: vec![true; n],
        };
        map.check_involutions()?;
        Ok(map)
    }

    fn check_involutions(&self) -> Result<(), MapsError> {
        for f in self.flags() {
            for (name, s) in [("s0", &self.s0), ("s1", &self.s1), ("s2", &self.s2)] {
                let g = s[f];
                if g >= self.s0.len() || !self.alive[g] {
                    return Err(MapsError::InvalidStructure(format!(
                        "{}[{}] out of range",
                        name, f
                    )));
                }
                if g == f {
                    return Err(MapsError::InvalidStructure(format!(
                        "{} has fixed point {}",
                        name, f
                    )));
                }
                if s[g] != f {
                    return Err(MapsError::InvalidStructure(format!(
                        "{} is not an involution at {}",
                        name, f
                    )));
                }
            }
            if self.s0[self.s2[f]] != self.s2[self.s0[f]] {
                return Err(MapsError::InvalidStructure(format!(
                    "s0 and s2 do not commute at {}",
                    f
                )));
            }
            if self.s0[f] == self.s2[f] {
                return Err(MapsError::InvalidStructure(format!(
                    "degenerate edge at {}",
                    f
                )));
            }
        }
        Ok(())
    }

    pub fn s0(&self, f: Flag) -> Flag {
        self.s0[f]
    }

    pub fn s1(&self, f: Flag) -> Flag {
        self.s1[f]
    }

    pub fn s2(&self, f: Flag) -> Flag {
        self.s2[f]
    }

    pub fn color(&self, f: Flag) -> u32 {
        self.color[f]
    }

    pub fn is_alive(&self, f: Flag) -> bool {
        f < self.alive.len() && self.alive[f]
    }

    pub fn flags(&self) -> impl Iterator<Item = Flag> + '_ {
        (0..self.alive.len()).filter(move |&f| self.alive[f])
    }

    pub fn num_flags(&self) -> usize {
        self.flags().count()
    }

    /// Total allocated flag slots, including dead ones.
    pub fn raw_flag_count(&self) -> usize {
        self.alive.len()
    }

    pub fn is_edgeless(&self) -> bool {
        self.flags().next().is_none()
    }

    /// The four flags of the edge containing `f`.
    pub fn edge_flags(&self, f: Flag) -> [Flag; 4] {
        [f, self.s0[f], self.s2[f], self.s0[self.s2[f]]]
    }

    /// Canonical representative of the edge containing `f`.
    pub fn edge_id(&self, f: Flag) -> Flag {
        *self.edge_flags(f).iter().min().unwrap()
    }

    fn orbits(&self, gens: &[&Vec<Flag>]) -> Vec<Vec<Flag>> {
        let mut seen = vec![false; self.alive.len()];
        let mut out = Vec::new();
        for start in self.flags() {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(f) = stack.pop() {
                for s in gens {
                    let g = s[f];
                    if !seen[g] {
                        seen[g] = true;
                        orbit.push(g);
                        stack.push(g);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out.sort();
        out
    }

    pub fn vertices(&self) -> Vec<Vec<Flag>> {
        self.orbits(&[&self.s1, &self.s2])
    }

    pub fn edges(&self) -> Vec<Vec<Flag>> {
        self.orbits(&[&self.s0, &self.s2])
    }

    pub fn faces(&self) -> Vec<Vec<Flag>> {
        self.orbits(&[&self.s0, &self.s1])
    }

    pub fn components(&self) -> Vec<Vec<Flag>> {
        self.orbits(&[&self.s0, &self.s1, &self.s2])
    }

    pub fn vertex_of(&self, f: Flag) -> Vec<Flag> {
        self.orbit_of(f, &[&self.s1, &self.s2])
    }

    pub fn face_of(&self, f: Flag) -> Vec<Flag> {
        self.orbit_of(f, &[&self.s0, &self.s1])
    }

    pub fn component_of(&self, f: Flag) -> Vec<Flag> {
        self.orbit_of(f, &[&self.s0, &self.s1, &self.s2])
    }

    fn orbit_of(&self, start: Flag, gens: &[&Vec<Flag>]) -> Vec<Flag> {
        let mut seen = vec![false; self.alive.len()];
        let mut orbit = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(f) = stack.pop() {
            for s in gens {
                let g = s[f];
                if !seen[g] {
                    seen[g] = true;
                    orbit.push(g);
                    stack.push(g);
                }
            }
        }
        orbit.sort_unstable();
        orbit
    }

    /// Face-trace rotation: the next flag around the face in the direction
    /// of `f`.
    pub fn face_next(&self, f: Flag) -> Flag {
        self.s1[self.s0[f]]
    }

    /// The trace cycle of the face direction selected by `f`.
    pub fn face_cycle(&self, f: Flag) -> Vec<Flag> {
        let mut out = vec![f];
        let mut cur = self.face_next(f);
        while cur != f {
            out.push(cur);
            cur = self.face_next(cur);
        }
        out
    }

    /// Degree of the vertex containing `f` (number of incident edge ends).
    pub fn vertex_degree(&self, f: Flag) -> u32 {
        (self.vertex_of(f).len() / 2) as u32
    }

    /// Degree of a face: the number of colour-0 corners it contains.
    pub fn face_degree(&self, face: &[Flag]) -> u32 {
        (face.iter().filter(|&&f| self.color[f] == 0).count() / 2) as u32
    }

    /// Size: the number of corners of colour 0.
    pub fn size(&self) -> u32 {
        (self.flags().filter(|&f| self.color[f] == 0).count() / 2) as u32
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices().len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces().len()
    }

    /// Euler characteristic of the (edge-supporting part of the) map.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// A component is orientable iff its flag graph is bipartite.
    pub fn component_orientable(&self, f: Flag) -> bool {
        let mut side = vec![u8::MAX; self.alive.len()];
        side[f] = 0;
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            for s in [&self.s0, &self.s1, &self.s2] {
                let h = s[g];
                if side[h] == u8::MAX {
                    side[h] = side[g] ^ 1;
                    stack.push(h);
                } else if side[h] == side[g] {
                    return false;
                }
            }
        }
        true
    }

    pub fn orientable(&self) -> bool {
        self.components()
            .iter()
            .all(|comp| self.component_orientable(comp[0]))
    }

    /// Delete the edge containing `f`, healing the corner pairing at each
    /// surviving endpoint.
    pub fn delete_edge(&mut self, f: Flag) {
        let e = self.edge_flags(f);
        for end in [f, self.s0[f]] {
            let a = end;
            let b = self.s2[a];
            let x = self.s1[a];
            let y = self.s1[b];
            if e.contains(&x) {
                // degree-one endpoint vanishes entirely
                continue;
            }
            self.s1[x] = y;
            self.s1[y] = x;
        }
        for g in e {
            self.alive[g] = false;
        }
    }

    /// Number of connected components, counting each endpoint of the listed
    /// extra isolated vertices.
    pub fn num_components(&self) -> usize {
        self.components().len()
    }

    /// Validate the local colouring constraints of a k-constellation.
    pub fn validate_constellation(&self) -> Result<(), MapsError> {
        self.check_involutions()?;
        let k = self.k;
        for v in self.vertices() {
            let c = self.color[v[0]];
            if v.iter().any(|&f| self.color[f] != c) {
                return Err(MapsError::NotAConstellation(
                    "vertex with mixed colours".into(),
                ));
            }
            if c > k {
                return Err(MapsError::NotAConstellation(format!(
                    "colour {} out of range",
                    c
                )));
            }
            for &f in &v {
                let nb = self.color[self.s0[f]];
                let ok = match c {
                    0 => nb == 1,
                    c if c == k => nb == k - 1,
                    _ => nb == c - 1 || nb == c + 1,
                };
                if !ok {
                    return Err(MapsError::NotAConstellation(format!(
                        "colour {} adjacent to colour {}",
                        c, nb
                    )));
                }
            }
            // each corner of a middle colour separates c-1 and c+1
            if c > 0 && c < k {
                for &f in &v {
                    let partner = self.s1[f];
                    let a = self.color[self.s0[f]];
                    let b = self.color[self.s0[partner]];
                    if !(a == c - 1 && b == c + 1 || a == c + 1 && b == c - 1) {
                        return Err(MapsError::NotAConstellation(format!(
                            "corner at colour {} sees {} and {}",
                            c, a, b
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Full profile `(faces, colour-0 degrees, ..., colour-k degrees)`.
    pub fn full_profile(&self) -> Vec<Partition> {
        let mut out = Vec::with_capacity(self.k as usize + 2);
        let face_degs: Vec<u32> = self.faces().iter().map(|f| self.face_degree(f)).collect();
        out.push(Partition::from_unsorted(face_degs));
        for c in 0..=self.k {
            let degs: Vec<u32> = self
                .vertices()
                .iter()
                .filter(|v| self.color[v[0]] == c)
                .map(|v| (v.len() / 2) as u32)
                .collect();
            out.push(Partition::from_unsorted(degs));
        }
        out
    }

    /// Number of vertices of each colour, indexed 0..=k.
    pub fn vertex_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.k as usize + 1];
        for v in self.vertices() {
            counts[self.color[v[0]] as usize] += 1;
        }
        counts
    }

    /// Insert a new edge end into the corner slot between `at` and
    /// `s1(at)`; returns `(g, h)` with `g` adjacent to `at`.
    fn insert_end(&mut self, at: Flag) -> (Flag, Flag) {
        let g = self.alloc(self.color[at]);
        let h = self.alloc(self.color[at]);
        let psi = self.s1[at];
        self.s2[g] = h;
        self.s2[h] = g;
        self.s1[at] = g;
        self.s1[g] = at;
        self.s1[h] = psi;
        self.s1[psi] = h;
        (g, h)
    }

    fn alloc(&mut self, color: u32) -> Flag {
        let f = self.alive.len();
        self.s0.push(f);
        self.s1.push(f);
        self.s2.push(f);
        self.color.push(color);
        self.alive.push(true);
        f
    }

    /// Add a pendant edge from the corner slot at `at` to a fresh vertex of
    /// the given colour; returns `(g, h, p, q)` with `(g, h)` at `at`'s
    /// vertex and `(p, q)` the new vertex.
    pub fn add_pendant(&mut self, at: Flag, color: u32) -> (Flag, Flag, Flag, Flag) {
        let (g, h) = self.insert_end(at);
        let p = self.alloc(color);
        let q = self.alloc(color);
        self.s2[p] = q;
        self.s2[q] = p;
        self.s1[p] = q;
        self.s1[q] = p;
        self.s0[g] = p;
        self.s0[p] = g;
        self.s0[h] = q;
        self.s0[q] = h;
        (g, h, p, q)
    }

    /// Add an edge between the corner slots at `at1` and `at2` (distinct
    /// corners); `twisted` selects the gluing. Returns `(g, h, p, q)` with
    /// `(g, h)` at `at1` and `(p, q)` at `at2`.
    pub fn add_chord(&mut self, at1: Flag, at2: Flag, twisted: bool) -> (Flag, Flag, Flag, Flag) {
        assert!(at1 != at2 && self.s1[at1] != at2, "chord needs two corners");
        let (g, h) = self.insert_end(at1);
        let (p, q) = self.insert_end(at2);
        if twisted {
            self.s0[g] = q;
            self.s0[q] = g;
            self.s0[h] = p;
            self.s0[p] = h;
        } else {
            self.s0[g] = p;
            self.s0[p] = g;
            self.s0[h] = q;
            self.s0[q] = h;
        }
        (g, h, p, q)
    }

    /// Renumber the alive flags to 0..n, preserving structure; returns the
    /// compacted map and the old-to-new relabeling.
    pub fn compact(&self) -> (FlagMap, BTreeMap<Flag, Flag>) {
        let mut relabel = BTreeMap::new();
        for (new, old) in self.flags().enumerate() {
            relabel.insert(old, new);
        }
        let n = relabel.len();
        let mut s0 = vec![0; n];
        let mut s1 = vec![0; n];
        let mut s2 = vec![0; n];
        let mut color = vec![0; n];
        for (&old, &new) in &relabel {
            s0[new] = relabel[&self.s0[old]];
            s1[new] = relabel[&self.s1[old]];
            s2[new] = relabel[&self.s2[old]];
            color[new] = self.color[old];
        }
        (
            FlagMap {
                k: self.k,
                s0,
                s1,
                s2,
                color,
                alive: vec![true; n],
            },
            relabel,
        )
    }

    /// Drop a single flag from the structure without healing; used when an
    /// already-disconnected component is carved out wholesale.
    pub(crate) fn delete_flag(&mut self, f: Flag) {
        self.alive[f] = false;
    }

    /// Restrict to the flags of one component.
    pub fn restrict_to(&self, flags: &[Flag]) -> FlagMap {
        let mut out = self.clone();
        let keep: std::collections::HashSet<Flag> = flags.iter().copied().collect();
        for f in 0..out.alive.len() {
            if out.alive[f] && !keep.contains(&f) {
                out.alive[f] = false;
            }
        }
        out
    }

    /// Breadth-first canonical encoding from a root flag: deterministic
    /// relabeling by discovery order over (s0, s1, s2), then the flattened
    /// involution tables and colours.
    pub fn canonical_encoding(&self, root: Flag) -> Vec<u32> {
        let mut label = vec![usize::MAX; self.alive.len()];
        let mut order = Vec::new();
        label[root] = 0;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let f = order[head];
            head += 1;
            for s in [&self.s0, &self.s1, &self.s2] {
                let g = s[f];
                if label[g] == usize::MAX {
                    label[g] = order.len();
                    order.push(g);
                }
            }
        }
        let mut enc = Vec::with_capacity(order.len() * 4);
        for &f in &order {
            enc.push(label[self.s0[f]] as u32);
            enc.push(label[self.s1[f]] as u32);
            enc.push(label[self.s2[f]] as u32);
            enc.push(self.color[f]);
        }
        enc
    }

    /// Canonical root choice for an unrooted component: the flag whose
    /// encoding is lexicographically least, ties broken by flag id.
    pub fn canonical_component_root(&self, any: Flag) -> Flag {
        let comp = self.component_of(any);
        let mut best: Option<(Vec<u32>, Flag)> = None;
        for &f in &comp {
            let enc = self.canonical_encoding(f);
            match &best {
                Some((be, _)) if *be <= enc => {}
                _ => best = Some((enc, f)),
            }
        }
        best.unwrap().1
    }

    /// JSON in the external interchange format.
    pub fn to_json(&self, root: Option<Flag>) -> serde_json::Value {
        let (compacted, relabel) = self.compact();
        let mut map = serde_json::Map::new();
        map.insert("flags".into(), (compacted.alive.len() as u64).into());
        let arr = |v: &Vec<Flag>| {
            serde_json::Value::Array(v.iter().map(|&x| (x as u64).into()).collect())
        };
        map.insert("s0".into(), arr(&compacted.s0));
        map.insert("s1".into(), arr(&compacted.s1));
        map.insert("s2".into(), arr(&compacted.s2));
        map.insert(
            "colors".into(),
            serde_json::Value::Array(compacted.color.iter().map(|&c| c.into()).collect()),
        );
        if let Some(r) = root {
            map.insert("root".into(), (relabel[&r] as u64).into());
        }
        serde_json::Value::Object(map)
    }
}
