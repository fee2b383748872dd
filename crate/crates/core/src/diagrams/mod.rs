//! Uni-trivalent diagrams: the graphs underlying 𝒜, 𝒜′, ℬ and ℬ′.
//!
//! A diagram is stored as a list of vertices, each owning an ordered list
//! of half-edges, plus a perfect matching on half-edges. For internal
//! trivalent vertices the slot order is the cyclic orientation. Skeleton
//! vertices own one half-edge (the internal edge); their two skeleton arcs
//! are implicit in the interval order.

mod canon;
mod enumerate;
mod text;

pub use canon::{canonical_form, CanonicalDiagram, CanonicalForm, CANONICAL_FORMAT};
pub use enumerate::enumerate_diagrams;
pub use text::{parse_diagram, write_diagram};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// Univalent vertex of a Chinese character.
    Leg,
    /// Trivalent vertex with three internal half-edges.
    Internal,
    /// Trivalent vertex sitting on the skeleton interval.
    Skeleton,
}

impl VertexKind {
    pub fn slot_count(self) -> usize {
        match self {
            VertexKind::Internal => 3,
            VertexKind::Leg | VertexKind::Skeleton => 1,
        }
    }

    pub(crate) fn letter(self) -> char {
        match self {
            VertexKind::Leg => 'U',
            VertexKind::Internal => 'T',
            VertexKind::Skeleton => 'S',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Interval skeleton, connected.
    A,
    /// Interval skeleton, any connectivity.
    APrime,
    /// No skeleton, every component has a leg.
    B,
    /// No skeleton, any connectivity.
    BPrime,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 4] = [SpaceKind::A, SpaceKind::APrime, SpaceKind::B, SpaceKind::BPrime];

    pub fn has_skeleton(self) -> bool {
        matches!(self, SpaceKind::A | SpaceKind::APrime)
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::A => "A",
            SpaceKind::APrime => "Aprime",
            SpaceKind::B => "B",
            SpaceKind::BPrime => "Bprime",
        }
    }

    pub fn parse(s: &str) -> Result<SpaceKind> {
        match s {
            "A" => Ok(SpaceKind::A),
            "Aprime" | "A'" => Ok(SpaceKind::APrime),
            "B" => Ok(SpaceKind::B),
            "Bprime" | "B'" => Ok(SpaceKind::BPrime),
            other => Err(Error::InvalidArgument(format!("unknown space kind {other:?}"))),
        }
    }

    /// The connectivity-relaxed kind with the same skeleton policy.
    pub fn primed(self) -> SpaceKind {
        if self.has_skeleton() {
            SpaceKind::APrime
        } else {
            SpaceKind::BPrime
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A uni-trivalent graph, optionally attached to an interval skeleton.
///
/// The builder methods allow constructing invalid graphs (for example with
/// unpaired half-edges); [`validate_diagram`] reports such problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniTrivalentDiagram {
    kinds: Vec<VertexKind>,
    slots: Vec<Vec<usize>>,
    mate: Vec<Option<usize>>,
    owner: Vec<usize>,
    skeleton: Option<Vec<usize>>,
}

impl UniTrivalentDiagram {
    /// An empty Chinese character (no skeleton).
    pub fn chinese() -> Self {
        UniTrivalentDiagram {
            kinds: Vec::new(),
            slots: Vec::new(),
            mate: Vec::new(),
            owner: Vec::new(),
            skeleton: None,
        }
    }

    /// An empty diagram on an interval skeleton.
    pub fn on_interval() -> Self {
        UniTrivalentDiagram {
            skeleton: Some(Vec::new()),
            ..Self::chinese()
        }
    }

    /// Adds a vertex with `slots` fresh half-edges and returns its id.
    /// Skeleton vertices are appended to the end of the interval.
    pub fn add_vertex_with_slots(&mut self, kind: VertexKind, slots: usize) -> usize {
        let v = self.kinds.len();
        self.kinds.push(kind);
        let hs: Vec<usize> = (0..slots)
            .map(|_| {
                let h = self.mate.len();
                self.mate.push(None);
                self.owner.push(v);
                h
            })
            .collect();
        self.slots.push(hs);
        if kind == VertexKind::Skeleton {
            if let Some(order) = self.skeleton.as_mut() {
                order.push(v);
            }
        }
        v
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> usize {
        self.add_vertex_with_slots(kind, kind.slot_count())
    }

    /// Adds a leg and returns its half-edge.
    pub fn add_leg(&mut self) -> usize {
        let v = self.add_vertex(VertexKind::Leg);
        self.slots[v][0]
    }

    /// Adds an internal vertex and returns its half-edges in cyclic order.
    pub fn add_internal(&mut self) -> [usize; 3] {
        let v = self.add_vertex(VertexKind::Internal);
        [self.slots[v][0], self.slots[v][1], self.slots[v][2]]
    }

    /// Appends a skeleton vertex to the interval and returns its half-edge.
    pub fn add_skeleton_vertex(&mut self) -> usize {
        let v = self.add_vertex(VertexKind::Skeleton);
        self.slots[v][0]
    }

    /// Pairs two half-edges into an edge, replacing earlier pairings.
    pub fn join(&mut self, a: usize, b: usize) {
        for h in [a, b] {
            if let Some(old) = self.mate[h] {
                self.mate[old] = None;
            }
        }
        self.mate[a] = Some(b);
        self.mate[b] = Some(a);
    }

    pub fn set_skeleton_order(&mut self, order: Vec<usize>) {
        self.skeleton = Some(order);
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.mate.len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn slots(&self, v: usize) -> &[usize] {
        &self.slots[v]
    }

    pub fn mate(&self, h: usize) -> Option<usize> {
        self.mate[h]
    }

    /// Mate of a half-edge in a diagram known to be fully paired.
    pub(crate) fn mate_of(&self, h: usize) -> usize {
        self.mate[h].expect("validated diagram has a perfect matching")
    }

    pub fn owner(&self, h: usize) -> usize {
        self.owner[h]
    }

    pub fn skeleton_order(&self) -> Option<&[usize]> {
        self.skeleton.as_deref()
    }

    pub fn is_chinese(&self) -> bool {
        self.skeleton.is_none()
    }

    pub fn count(&self, kind: VertexKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Legs of a Chinese character, or skeleton vertices of a skeleton diagram.
    pub fn external_count(&self) -> usize {
        if self.is_chinese() {
            self.count(VertexKind::Leg)
        } else {
            self.count(VertexKind::Skeleton)
        }
    }

    /// Leg vertices in id order.
    pub fn legs(&self) -> Vec<usize> {
        (0..self.kinds.len())
            .filter(|&v| self.kinds[v] == VertexKind::Leg)
            .collect()
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    /// Skeleton arcs are not edges here.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.kinds.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &h in &self.slots[v] {
                    if let Some(m) = self.mate[h] {
                        let w = self.owner[m];
                        if comp[w] == usize::MAX {
                            comp[w] = id;
                            stack.push(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The same graph with every internal vertex orientation preserved but
    /// vertex ids permuted: vertex `v` becomes `perm[v]`. Skeleton order is
    /// carried along.
    pub fn relabeled(&self, perm: &[usize]) -> UniTrivalentDiagram {
        let n = self.kinds.len();
        let mut inverse = vec![0; n];
        for (v, &p) in perm.iter().enumerate() {
            inverse[p] = v;
        }
        let mut out = if self.is_chinese() {
            UniTrivalentDiagram::chinese()
        } else {
            UniTrivalentDiagram::on_interval()
        };
        // half-edge map old -> new
        let mut hmap = vec![0; self.mate.len()];
        for &old in &inverse {
            let v = out.add_vertex_with_slots(self.kinds[old], self.slots[old].len());
            for (i, &h) in self.slots[old].iter().enumerate() {
                hmap[h] = out.slots[v][i];
            }
        }
        for h in 0..self.mate.len() {
            if let Some(m) = self.mate[h] {
                out.mate[hmap[h]] = Some(hmap[m]);
            }
        }
        if let Some(order) = &self.skeleton {
            out.skeleton = Some(order.iter().map(|&v| perm[v]).collect());
        }
        out
    }

    /// Reverses the cyclic order at internal vertex `v` (an AS move).
    pub fn reverse_vertex(&mut self, v: usize) {
        assert_eq!(self.kinds[v], VertexKind::Internal);
        self.slots[v].swap(1, 2);
    }

    /// Clears the pairing of `h` and of its former mate.
    pub(crate) fn unpair(&mut self, h: usize) {
        if let Some(m) = self.mate[h].take() {
            self.mate[m] = None;
        }
    }

    /// Copy without the vertices for which `drop` holds. Returns the copy and
    /// the map from old half-edges to new ones. Edges into dropped vertices
    /// are left unpaired.
    pub(crate) fn without(&self, drop: impl Fn(usize) -> bool) -> (UniTrivalentDiagram, Vec<Option<usize>>) {
        let mut out = if self.is_chinese() {
            UniTrivalentDiagram::chinese()
        } else {
            UniTrivalentDiagram::on_interval()
        };
        let mut vmap = vec![None; self.kinds.len()];
        let mut hmap = vec![None; self.mate.len()];
        for v in 0..self.kinds.len() {
            if drop(v) {
                continue;
            }
            let nv = out.add_vertex_with_slots(self.kinds[v], self.slots[v].len());
            vmap[v] = Some(nv);
            for (i, &h) in self.slots[v].iter().enumerate() {
                hmap[h] = Some(out.slots[nv][i]);
            }
        }
        for h in 0..self.mate.len() {
            if let (Some(nh), Some(m)) = (hmap[h], self.mate[h]) {
                if let Some(nm) = hmap[m] {
                    out.mate[nh] = Some(nm);
                }
            }
        }
        if let Some(order) = &self.skeleton {
            out.skeleton = Some(order.iter().filter_map(|&v| vmap[v]).collect());
        }
        (out, hmap)
    }

    /// The skeleton diagram obtained by placing the legs on an interval in
    /// the given order (a permutation of [`legs`](Self::legs)).
    pub(crate) fn place_legs(&self, order: &[usize]) -> UniTrivalentDiagram {
        debug_assert!(self.is_chinese());
        let mut out = self.clone();
        for &v in order {
            out.kinds[v] = VertexKind::Skeleton;
        }
        out.skeleton = Some(order.to_vec());
        out
    }
}

/// Checks the structural invariants of `d` and the skeleton/connectivity
/// policy of `kind`.
pub fn validate_diagram(d: &UniTrivalentDiagram, kind: SpaceKind) -> Result<()> {
    let violation = |invariant: &str, location: String| Error::Violation {
        invariant: invariant.to_string(),
        location,
    };
    for v in 0..d.vertex_count() {
        let k = d.kinds[v];
        if d.slots[v].len() != k.slot_count() {
            return Err(violation(
                "vertex valence",
                format!("vertex {v} ({:?}) has {} half-edges", k, d.slots[v].len()),
            ));
        }
    }
    for h in 0..d.half_edge_count() {
        match d.mate[h] {
            None => return Err(violation("perfect pairing", format!("half-edge {h} is unpaired"))),
            Some(m) if m == h => {
                return Err(violation("perfect pairing", format!("half-edge {h} is paired with itself")))
            }
            Some(m) if d.mate[m] != Some(h) => {
                return Err(violation("perfect pairing", format!("half-edges {h} and {m} disagree")))
            }
            _ => {}
        }
    }
    match &d.skeleton {
        None => {
            if let Some(v) = (0..d.vertex_count()).find(|&v| d.kinds[v] == VertexKind::Skeleton) {
                return Err(violation("skeleton policy", format!("skeleton vertex {v} without skeleton")));
            }
        }
        Some(order) => {
            if let Some(v) = (0..d.vertex_count()).find(|&v| d.kinds[v] == VertexKind::Leg) {
                return Err(violation("skeleton policy", format!("leg vertex {v} on a skeleton diagram")));
            }
            let mut seen = vec![false; d.vertex_count()];
            for &v in order {
                if v >= d.vertex_count() || d.kinds[v] != VertexKind::Skeleton || seen[v] {
                    return Err(violation("skeleton order", format!("bad skeleton entry {v}")));
                }
                seen[v] = true;
            }
            if let Some(v) =
                (0..d.vertex_count()).find(|&v| d.kinds[v] == VertexKind::Skeleton && !seen[v])
            {
                return Err(violation("skeleton order", format!("skeleton vertex {v} missing from order")));
            }
        }
    }
    if kind.has_skeleton() == d.is_chinese() {
        return Err(Error::KindMismatch {
            expected: kind.name().to_string(),
            found: if d.is_chinese() { "Chinese character" } else { "skeleton diagram" }.to_string(),
        });
    }
    if !d.vertex_count().is_multiple_of(2) {
        return Err(violation("even vertex count", format!("{} vertices", d.vertex_count())));
    }
    let required = match kind {
        SpaceKind::A => Some(VertexKind::Skeleton),
        SpaceKind::B => Some(VertexKind::Leg),
        _ => None,
    };
    if let Some(req) = required {
        for comp in d.components() {
            if !comp.iter().any(|&v| d.kinds[v] == req) {
                return Err(violation(
                    "connectivity policy",
                    format!("component containing vertex {} has no {:?} vertex", comp[0], req),
                ));
            }
        }
    }
    Ok(())
}

/// Half the number of vertices (legs count for Chinese characters,
/// skeleton vertices for skeleton diagrams).
pub fn degree_of(d: &UniTrivalentDiagram) -> Result<usize> {
    let n = d.vertex_count();
    if !n.is_multiple_of(2) {
        return Err(Error::MalformedDiagram(format!("odd vertex count {n}")));
    }
    Ok(n / 2)
}

pub fn disjoint_union(a: &UniTrivalentDiagram, b: &UniTrivalentDiagram) -> Result<UniTrivalentDiagram> {
    for d in [a, b] {
        if !d.is_chinese() {
            return Err(Error::KindMismatch {
                expected: "Chinese character".into(),
                found: "skeleton diagram".into(),
            });
        }
    }
    let mut out = a.clone();
    append(&mut out, b);
    Ok(out)
}

/// Appends all vertices and edges of `b` to `out`; skeleton vertices of `b`
/// go after those of `out`. Returns the half-edge offset.
pub(crate) fn append(out: &mut UniTrivalentDiagram, b: &UniTrivalentDiagram) -> usize {
    let voff = out.kinds.len();
    let hoff = out.mate.len();
    out.kinds.extend_from_slice(&b.kinds);
    out.slots.extend(b.slots.iter().map(|s| s.iter().map(|h| h + hoff).collect()));
    out.mate.extend(b.mate.iter().map(|m| m.map(|m| m + hoff)));
    out.owner.extend(b.owner.iter().map(|v| v + voff));
    if let (Some(order), Some(border)) = (out.skeleton.as_mut(), b.skeleton.as_ref()) {
        order.extend(border.iter().map(|v| v + voff));
    }
    hoff
}

/// A single edge with two legs.
pub fn strut() -> UniTrivalentDiagram {
    let mut d = UniTrivalentDiagram::chinese();
    let a = d.add_leg();
    let b = d.add_leg();
    d.join(a, b);
    d
}

/// Two internal vertices joined by three parallel edges.
pub fn theta() -> UniTrivalentDiagram {
    let mut d = UniTrivalentDiagram::chinese();
    let u = d.add_internal();
    let v = d.add_internal();
    d.join(u[0], v[0]);
    d.join(u[1], v[2]);
    d.join(u[2], v[1]);
    d
}

/// The `n`-gon with one leg per corner. Corner `i` has cyclic order
/// (leg, edge to corner i+1, edge to corner i-1).
pub fn wheel(n: usize) -> UniTrivalentDiagram {
    assert!(n >= 1);
    let mut d = UniTrivalentDiagram::chinese();
    let corners: Vec<[usize; 3]> = (0..n).map(|_| d.add_internal()).collect();
    for (i, c) in corners.iter().enumerate() {
        let leg = d.add_leg();
        d.join(c[0], leg);
        let next = &corners[(i + 1) % n];
        d.join(c[1], next[2]);
    }
    d
}

/// A single chord on the interval.
pub fn chord() -> UniTrivalentDiagram {
    let mut d = UniTrivalentDiagram::on_interval();
    let a = d.add_skeleton_vertex();
    let b = d.add_skeleton_vertex();
    d.join(a, b);
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_diagram_is_valid_in_every_primed_kind() {
        validate_diagram(&UniTrivalentDiagram::on_interval(), SpaceKind::APrime).unwrap();
        validate_diagram(&UniTrivalentDiagram::on_interval(), SpaceKind::A).unwrap();
        validate_diagram(&UniTrivalentDiagram::chinese(), SpaceKind::BPrime).unwrap();
        validate_diagram(&UniTrivalentDiagram::chinese(), SpaceKind::B).unwrap();
    }

    #[test]
    fn theta_has_no_leg_so_is_not_in_b() {
        let t = theta();
        validate_diagram(&t, SpaceKind::BPrime).unwrap();
        let err = validate_diagram(&t, SpaceKind::B).unwrap_err();
        match err {
            Error::Violation { invariant, .. } => assert_eq!(invariant, "connectivity policy"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_half_edge_is_reported() {
        let mut d = UniTrivalentDiagram::chinese();
        let u = d.add_internal();
        let v = d.add_internal();
        let l1 = d.add_leg();
        let l2 = d.add_leg();
        d.join(u[0], l1);
        d.join(v[0], l2);
        d.join(u[1], v[2]);
        // u[2] and v[1] left unpaired
        let err = validate_diagram(&d, SpaceKind::BPrime).unwrap_err();
        match err {
            Error::Violation { invariant, location } => {
                assert_eq!(invariant, "perfect pairing");
                assert!(location.contains("unpaired"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn skeleton_and_leg_policies() {
        let mut d = UniTrivalentDiagram::on_interval();
        let s = d.add_skeleton_vertex();
        let l = d.add_leg();
        d.join(s, l);
        assert!(validate_diagram(&d, SpaceKind::APrime).is_err());
        assert!(matches!(
            validate_diagram(&chord(), SpaceKind::BPrime),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_of(&chord()).unwrap(), 1);
        assert_eq!(degree_of(&wheel(4)).unwrap(), 4);
        assert_eq!(degree_of(&theta()).unwrap(), 1);
        let mut odd = UniTrivalentDiagram::chinese();
        odd.add_leg();
        assert!(matches!(degree_of(&odd), Err(Error::MalformedDiagram(_))));
    }

    #[test]
    fn unions() {
        let e = UniTrivalentDiagram::chinese();
        assert_eq!(disjoint_union(&wheel(2), &e).unwrap(), wheel(2));
        let w = disjoint_union(&wheel(2), &wheel(2)).unwrap();
        assert_eq!(degree_of(&w).unwrap(), 4);
        assert_eq!(w.components().len(), 2);
        let st = disjoint_union(&strut(), &theta()).unwrap();
        assert_eq!(degree_of(&st).unwrap(), 2);
        assert_eq!(st.count(VertexKind::Leg), 2);
        assert_eq!(st.components().len(), 2);
        assert!(disjoint_union(&chord(), &strut()).is_err());
    }
}
