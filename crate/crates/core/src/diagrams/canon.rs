//! Canonical labeling with AS sign tracking.
//!
//! Each connected component is labeled by a breadth-first traversal from a
//! root half-edge. Entering an internal vertex through one half-edge leaves
//! two ways to order the remaining two; every root and every such choice is
//! explored, and the lexicographically least traversal code wins. The
//! labeled slot order of the winner is the canonical orientation, and the
//! sign of a labeling is the product over internal vertices of +1 when the
//! labeled order is a rotation of the diagram's cyclic order, −1 otherwise.
//! Two winning labelings with opposite signs exhibit an orientation-reversing
//! automorphism, so the diagram vanishes by AS.
//!
//! Components touching the skeleton are labeled together, starting from the
//! skeleton vertices in interval order. Free components are labeled
//! separately and sorted.
//!
//! Serialized form (`jd1`): `jd1|<I|N>|<ext:02>|<int:02>|<records>` where a
//! record is the kind letter followed by the comma-separated labels of the
//! mates of the vertex's half-edges, records separated by spaces. Half-edge
//! labels are contiguous per vertex in record order. The external count
//! (legs or skeleton vertices) leads so that lexicographic order lists
//! diagrams with more internal vertices first.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::{UniTrivalentDiagram, VertexKind};
use crate::error::{Error, Result};

pub const CANONICAL_FORMAT: &str = "jd1";

const UNLABELED: u32 = u32::MAX;
const NEW_VERTEX: u32 = 1 << 20;

/// A canonical serialized diagram. Equality and ordering are on the bytes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalDiagram {
    bytes: Arc<str>,
    degree: usize,
    legs: usize,
    components: usize,
}

impl CanonicalDiagram {
    pub fn bytes(&self) -> &str {
        &self.bytes
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Legs of a Chinese character, or skeleton vertices of a skeleton diagram.
    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn has_skeleton(&self) -> bool {
        self.bytes.as_bytes().get(4) == Some(&b'I')
    }

    /// The empty diagram, with or without a skeleton.
    pub fn empty(skeleton: bool) -> CanonicalDiagram {
        let flag = if skeleton { 'I' } else { 'N' };
        CanonicalDiagram {
            bytes: format!("{CANONICAL_FORMAT}|{flag}|00|00|").into(),
            degree: 0,
            legs: 0,
            components: 0,
        }
    }

    /// Parses and checks a serialized canonical diagram.
    pub fn from_bytes(bytes: &str) -> Result<CanonicalDiagram> {
        let d = decode(bytes)?;
        match canonical_form(&d)? {
            CanonicalForm::Nonzero { sign: 1, diagram } if &*diagram.bytes == bytes => Ok(diagram),
            _ => Err(Error::MalformedDiagram(format!("not a canonical encoding: {bytes}"))),
        }
    }

    /// The canonical representative, with slot order as orientation.
    pub fn to_diagram(&self) -> UniTrivalentDiagram {
        decode(&self.bytes).expect("canonical bytes always decode")
    }
}

impl fmt::Debug for CanonicalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bytes)
    }
}

impl fmt::Display for CanonicalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bytes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    /// The diagram vanishes by AS.
    Zero,
    /// `diagram = sign · canonical representative`.
    Nonzero { sign: i32, diagram: CanonicalDiagram },
}

impl CanonicalForm {
    pub fn is_zero(&self) -> bool {
        matches!(self, CanonicalForm::Zero)
    }

    pub fn into_parts(self) -> Option<(i32, CanonicalDiagram)> {
        match self {
            CanonicalForm::Zero => None,
            CanonicalForm::Nonzero { sign, diagram } => Some((sign, diagram)),
        }
    }
}

struct ComponentLabel {
    sign: i32,
    /// (kind, mate labels) per vertex, labels local to the component.
    records: Vec<(VertexKind, Vec<u32>)>,
}

pub fn canonical_form(d: &UniTrivalentDiagram) -> Result<CanonicalForm> {
    for v in 0..d.vertex_count() {
        if d.slots(v).len() != d.kind(v).slot_count() {
            return Err(Error::MalformedDiagram(format!("vertex {v} has wrong valence")));
        }
        for &h in d.slots(v) {
            match d.mate(h) {
                Some(m) if m != h => {}
                _ => return Err(Error::MalformedDiagram(format!("half-edge {h} is not paired"))),
            }
        }
    }
    if !d.vertex_count().is_multiple_of(2) {
        return Err(Error::MalformedDiagram("odd vertex count".into()));
    }

    let components = d.components();
    let mut sign = 1;
    let mut anchored: Option<ComponentLabel> = None;
    let mut free: Vec<ComponentLabel> = Vec::new();

    if let Some(order) = d.skeleton_order() {
        let mut in_anchor = vec![false; d.vertex_count()];
        for comp in &components {
            if comp.iter().any(|&v| d.kind(v) == VertexKind::Skeleton) {
                for &v in comp {
                    in_anchor[v] = true;
                }
            }
        }
        match label_anchored(d, order) {
            Some(c) => {
                sign *= c.sign;
                anchored = Some(c);
            }
            None => return Ok(CanonicalForm::Zero),
        }
        for comp in components.iter().filter(|c| !in_anchor[c[0]]) {
            match label_free(d, comp) {
                Some(c) => {
                    sign *= c.sign;
                    free.push(c);
                }
                None => return Ok(CanonicalForm::Zero),
            }
        }
    } else {
        for comp in &components {
            match label_free(d, comp) {
                Some(c) => {
                    sign *= c.sign;
                    free.push(c);
                }
                None => return Ok(CanonicalForm::Zero),
            }
        }
    }

    free.sort_by(|a, b| a.records.cmp(&b.records));
    let mut records: Vec<(VertexKind, Vec<u32>)> = Vec::new();
    let mut offset = 0u32;
    let mut component_count = free.len();
    if let Some(a) = anchored {
        if !a.records.is_empty() {
            component_count += count_components(&a.records);
        }
        offset += push_records(&mut records, a.records, offset);
    }
    for c in free {
        offset += push_records(&mut records, c.records, offset);
    }

    let ext = records
        .iter()
        .filter(|(k, _)| *k != VertexKind::Internal)
        .count();
    let internal = records.len() - ext;
    let mut bytes = format!(
        "{CANONICAL_FORMAT}|{}|{:02}|{:02}|",
        if d.is_chinese() { 'N' } else { 'I' },
        ext,
        internal
    );
    for (i, (k, mates)) in records.iter().enumerate() {
        if i > 0 {
            bytes.push(' ');
        }
        bytes.push(k.letter());
        for (j, m) in mates.iter().enumerate() {
            if j > 0 {
                bytes.push(',');
            }
            bytes.push_str(&m.to_string());
        }
    }
    Ok(CanonicalForm::Nonzero {
        sign,
        diagram: CanonicalDiagram {
            bytes: bytes.into(),
            degree: records.len() / 2,
            legs: ext,
            components: component_count,
        },
    })
}

fn push_records(out: &mut Vec<(VertexKind, Vec<u32>)>, recs: Vec<(VertexKind, Vec<u32>)>, offset: u32) -> u32 {
    let mut n = 0;
    for (k, mates) in recs {
        n += mates.len() as u32;
        out.push((k, mates.into_iter().map(|m| m + offset).collect()));
    }
    n
}

/// Graph components among labeled records (used only for metadata).
fn count_components(records: &[(VertexKind, Vec<u32>)]) -> usize {
    let mut he_owner = Vec::new();
    for (v, (_, mates)) in records.iter().enumerate() {
        for _ in mates {
            he_owner.push(v);
        }
    }
    let n = records.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (v, (_, mates)) in records.iter().enumerate() {
        for &m in mates {
            let w = he_owner[m as usize];
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            parent[a] = b;
        }
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

#[derive(Clone)]
struct State {
    label: Vec<u32>,
    labeled: Vec<usize>,
    vertices: Vec<usize>,
    queue: usize,
    code: Vec<u32>,
    sign: i32,
    ahead: bool,
}

struct Search<'a> {
    d: &'a UniTrivalentDiagram,
    best_code: Option<Vec<u32>>,
    best: Option<State>,
    saw_plus: bool,
    saw_minus: bool,
}

impl<'a> Search<'a> {
    fn new(d: &'a UniTrivalentDiagram) -> Self {
        Search {
            d,
            best_code: None,
            best: None,
            saw_plus: false,
            saw_minus: false,
        }
    }

    fn fresh_state(&self) -> State {
        State {
            label: vec![UNLABELED; self.d.half_edge_count()],
            labeled: Vec::new(),
            vertices: Vec::new(),
            queue: 0,
            code: Vec::new(),
            sign: 1,
            ahead: false,
        }
    }

    /// Appends a symbol; false means the branch is worse than the best so far.
    fn emit(&self, st: &mut State, sym: u32) -> bool {
        let pos = st.code.len();
        st.code.push(sym);
        if st.ahead {
            return true;
        }
        match &self.best_code {
            None => {
                st.ahead = true;
                true
            }
            Some(best) => match sym.cmp(&best[pos]) {
                Ordering::Less => {
                    st.ahead = true;
                    true
                }
                Ordering::Equal => true,
                Ordering::Greater => false,
            },
        }
    }

    /// Re-compares a whole prefix against the current best, which may have
    /// changed since the state was cloned.
    fn recheck(&self, st: &mut State) -> bool {
        st.ahead = false;
        match &self.best_code {
            None => {
                st.ahead = true;
                true
            }
            Some(best) => match st.code.as_slice().cmp(&best[..st.code.len()]) {
                Ordering::Less => {
                    st.ahead = true;
                    true
                }
                Ordering::Equal => true,
                Ordering::Greater => false,
            },
        }
    }

    fn label_vertex(&self, st: &mut State, v: usize, order: &[usize]) {
        st.vertices.push(v);
        for &h in order {
            st.label[h] = st.labeled.len() as u32;
            st.labeled.push(h);
        }
    }

    /// The two orderings (after `entry`) of an internal vertex's other slots,
    /// with the sign of each relative to the stored cyclic order.
    fn internal_orders(&self, v: usize, entry: usize) -> [([usize; 3], i32); 2] {
        let s = self.d.slots(v);
        let i = s.iter().position(|&h| h == entry).expect("entry slot belongs to vertex");
        let x = s[(i + 1) % 3];
        let y = s[(i + 2) % 3];
        [([entry, x, y], 1), ([entry, y, x], -1)]
    }

    fn enter(&mut self, mut st: State, v: usize, entry: usize) {
        let kind = self.d.kind(v);
        if !self.emit(&mut st, NEW_VERTEX + kind as u32) {
            return;
        }
        if kind == VertexKind::Internal {
            for (order, s) in self.internal_orders(v, entry) {
                let mut branch = st.clone();
                if !self.recheck(&mut branch) {
                    return;
                }
                branch.sign *= s;
                self.label_vertex(&mut branch, v, &order);
                self.run(branch);
            }
        } else {
            self.label_vertex(&mut st, v, &[entry]);
            self.run(st);
        }
    }

    fn run(&mut self, mut st: State) {
        while st.queue < st.labeled.len() {
            let h = st.labeled[st.queue];
            st.queue += 1;
            let m = self.d.mate_of(h);
            if st.label[m] != UNLABELED {
                let sym = st.label[m];
                if !self.emit(&mut st, sym) {
                    return;
                }
                continue;
            }
            let w = self.d.owner(m);
            self.enter(st, w, m);
            return;
        }
        self.leaf(st);
    }

    fn leaf(&mut self, st: State) {
        if st.ahead || self.best_code.is_none() {
            self.best_code = Some(st.code.clone());
            self.saw_plus = st.sign > 0;
            self.saw_minus = st.sign < 0;
            self.best = Some(st);
        } else if st.sign > 0 {
            self.saw_plus = true;
        } else {
            self.saw_minus = true;
        }
    }

    fn finish(self) -> Option<ComponentLabel> {
        if self.saw_plus && self.saw_minus {
            return None;
        }
        let st = self.best.expect("at least one labeling");
        let mut records = Vec::with_capacity(st.vertices.len());
        let mut next = 0usize;
        for &v in &st.vertices {
            let n = self.d.slots(v).len();
            let mates = st.labeled[next..next + n]
                .iter()
                .map(|&h| st.label[self.d.mate_of(h)])
                .collect();
            records.push((self.d.kind(v), mates));
            next += n;
        }
        Some(ComponentLabel {
            sign: st.sign,
            records,
        })
    }
}

fn label_anchored(d: &UniTrivalentDiagram, order: &[usize]) -> Option<ComponentLabel> {
    let mut search = Search::new(d);
    let mut st = search.fresh_state();
    for &v in order {
        if !search.emit(&mut st, NEW_VERTEX + VertexKind::Skeleton as u32) {
            unreachable!("first traversal cannot be pruned");
        }
        let h = d.slots(v)[0];
        search.label_vertex(&mut st, v, &[h]);
    }
    search.run(st);
    search.finish()
}

fn label_free(d: &UniTrivalentDiagram, comp: &[usize]) -> Option<ComponentLabel> {
    let mut search = Search::new(d);
    let legs: Vec<usize> = comp.iter().copied().filter(|&v| d.kind(v) == VertexKind::Leg).collect();
    let roots: Vec<(usize, usize)> = if legs.is_empty() {
        comp.iter()
            .flat_map(|&v| d.slots(v).iter().map(move |&h| (v, h)))
            .collect()
    } else {
        legs.iter().map(|&v| (v, d.slots(v)[0])).collect()
    };
    for (v, h) in roots {
        let st = search.fresh_state();
        search.enter(st, v, h);
    }
    search.finish()
}

/// Parses the `jd1` serialization into a diagram whose slot orders are the
/// canonical orientations.
fn decode(bytes: &str) -> Result<UniTrivalentDiagram> {
    let bad = |m: &str| Error::MalformedDiagram(format!("{m}: {bytes:?}"));
    let mut parts = bytes.splitn(5, '|');
    if parts.next() != Some(CANONICAL_FORMAT) {
        return Err(bad("unknown canonical format"));
    }
    let mut d = match parts.next() {
        Some("I") => UniTrivalentDiagram::on_interval(),
        Some("N") => UniTrivalentDiagram::chinese(),
        _ => return Err(bad("bad skeleton flag")),
    };
    let ext: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad count"))?;
    let int: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad count"))?;
    let body = parts.next().ok_or_else(|| bad("missing body"))?;
    let mut mates: Vec<u32> = Vec::new();
    for rec in body.split(' ').filter(|r| !r.is_empty()) {
        let kind = match rec.as_bytes()[0] {
            b'U' => VertexKind::Leg,
            b'T' => VertexKind::Internal,
            b'S' => VertexKind::Skeleton,
            _ => return Err(bad("bad vertex kind")),
        };
        let ms: Vec<u32> = rec[1..]
            .split(',')
            .map(|s| s.parse::<u32>().map_err(|_| bad("bad label")))
            .collect::<Result<_>>()?;
        if ms.len() != kind.slot_count() {
            return Err(bad("bad valence"));
        }
        d.add_vertex(kind);
        mates.extend(ms);
    }
    if mates.len() != d.half_edge_count() {
        return Err(bad("label count"));
    }
    for (h, &m) in mates.iter().enumerate() {
        let m = m as usize;
        if m >= mates.len() || m == h || mates[m] as usize != h {
            return Err(bad("inconsistent pairing"));
        }
    }
    for (h, &m) in mates.iter().enumerate() {
        if h < m as usize {
            d.join(h, m as usize);
        }
    }
    if d.external_count() != ext || d.count(VertexKind::Internal) != int {
        return Err(bad("count mismatch"));
    }
    Ok(d)
}
