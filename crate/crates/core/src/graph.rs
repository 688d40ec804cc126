//! Loopless multigraph with stable integer vertex ids.
//!
//! Graphs are immutable values in practice: every transformation returns a
//! new graph. Edges are stored as a multiplicity map over ordered pairs
//! (u < v), so iteration order is canonical everywhere, which keeps
//! constructions and witnesses reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::sequences::DegreeSequence;

pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    Loop(VertexId),
    #[error("vertex {0} not in graph")]
    MissingVertex(VertexId),
    #[error("edge {0}-{1} not in graph")]
    MissingEdge(VertexId, VertexId),
    #[error("graph is not simple")]
    NotSimple,
    #[error("vertex id collision on {0}")]
    IdCollision(VertexId),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("orientation length {got} does not match edge count {want}")]
    IncompleteOrientation { got: usize, want: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<(VertexId, VertexId), u32>,
}

impl MultiGraph {
    pub fn new() -> Self {
        MultiGraph { vertices: BTreeSet::new(), edges: BTreeMap::new() }
    }

    /// Graph with the given vertices and edge instances; repeated pairs
    /// raise multiplicity.
    pub fn with_vertices<I, J>(vertices: I, pairs: J) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = VertexId>,
        J: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = MultiGraph::new();
        for v in vertices {
            g.vertices.insert(v);
        }
        for (u, v) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_edge_list(pairs: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        Self::with_vertices(std::iter::empty(), pairs.iter().copied())
    }

    /// Complete simple graph on ids 1..=n.
    pub fn complete(n: u32) -> Self {
        let mut g = MultiGraph::new();
        for v in 1..=n {
            g.vertices.insert(v);
        }
        for u in 1..=n {
            for v in u + 1..=n {
                g.edges.insert((u, v), 1);
            }
        }
        g
    }

    /// Two vertices joined by m parallel edges.
    pub fn parallel_pair(m: u32) -> Self {
        let mut g = MultiGraph::new();
        g.vertices.insert(1);
        g.vertices.insert(2);
        if m > 0 {
            g.edges.insert((1, 2), m);
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::Loop(u));
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        *self.edges.entry(key(u, v)).or_insert(0) += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edge instances (parallel edges counted with multiplicity).
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> u32 {
        if u == v {
            return 0;
        }
        self.edges.get(&key(u, v)).copied().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.multiplicity(u, v) > 0
    }

    /// Distinct edge pairs (u < v) with multiplicities, in canonical order.
    pub fn edge_pairs(&self) -> impl Iterator<Item = ((VertexId, VertexId), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    /// Every edge instance in canonical order: pairs sorted, parallel
    /// instances consecutive. This order defines orientation bit positions.
    pub fn edge_instances(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (&(u, v), &m) in &self.edges {
            for _ in 0..m {
                out.push((u, v));
            }
        }
        out
    }

    pub fn degree(&self, v: VertexId) -> u32 {
        let mut d = 0;
        for (&(a, b), &m) in &self.edges {
            if a == v || b == v {
                d += m;
            }
        }
        d
    }

    /// Per-vertex degrees in vertex id order.
    pub fn degree_map(&self) -> BTreeMap<VertexId, u32> {
        let mut map: BTreeMap<VertexId, u32> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for (&(u, v), &m) in &self.edges {
            *map.get_mut(&u).unwrap() += m;
            *map.get_mut(&v).unwrap() += m;
        }
        map
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.degree_map().into_values().collect())
            .expect("graph has at least one vertex")
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m <= 1)
    }

    /// Distinct neighbors of v in ascending id order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (&(a, b), _) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn max_vertex_id(&self) -> VertexId {
        self.vertices.iter().next_back().copied().unwrap_or(0)
    }

    pub fn remove_vertex(&self, v: VertexId) -> MultiGraph {
        let mut g = self.clone();
        g.vertices.remove(&v);
        g.edges.retain(|&(a, b), _| a != v && b != v);
        g
    }

    /// Removes one edge instance per listed pair; errors when one is absent.
    pub fn minus_edges(&self, edges: &[(VertexId, VertexId)]) -> Result<MultiGraph, GraphError> {
        let mut g = self.clone();
        for &(u, v) in edges {
            let k = key(u, v);
            match g.edges.get_mut(&k) {
                Some(m) if *m > 1 => *m -= 1,
                Some(_) => {
                    g.edges.remove(&k);
                }
                None => return Err(GraphError::MissingEdge(u, v)),
            }
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Removes vertex u and adds one new v-w edge instance. Requires
    /// d(u) >= 4 and both uv, uw present.
    pub fn lift(&self, u: VertexId, v: VertexId, w: VertexId) -> Result<MultiGraph, GraphError> {
        if v == w {
            return Err(GraphError::Precondition("lift requires v != w"));
        }
        if self.degree(u) < 4 {
            return Err(GraphError::Precondition("lift requires degree(u) >= 4"));
        }
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        if !self.has_edge(u, w) {
            return Err(GraphError::MissingEdge(u, w));
        }
        let mut g = self.remove_vertex(u);
        g.add_edge(v, w)?;
        Ok(g)
    }

    /// Contracts the given edge instances: every connected component they
    /// span collapses to its minimum vertex id, loops are discarded, and
    /// parallel edges are kept. Returns the quotient and the old-to-new map.
    pub fn contract(
        &self,
        edge_set: &[(VertexId, VertexId)],
    ) -> Result<(MultiGraph, BTreeMap<VertexId, VertexId>), GraphError> {
        let mut used: BTreeMap<(VertexId, VertexId), u32> = BTreeMap::new();
        for &(u, v) in edge_set {
            if self.multiplicity(u, v) == 0 {
                return Err(GraphError::MissingEdge(u, v));
            }
            let e = used.entry(key(u, v)).or_insert(0);
            *e += 1;
            if *e > self.multiplicity(u, v) {
                return Err(GraphError::MissingEdge(u, v));
            }
        }
        // union-find over contracted endpoints
        let ids: Vec<VertexId> = self.vertices.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for (&(u, v), _) in &used {
            let (a, b) = (find(&mut parent, index[&u]), find(&mut parent, index[&v]));
            if a != b {
                // root at the smaller vertex id
                if ids[a] < ids[b] {
                    parent[b] = a;
                } else {
                    parent[a] = b;
                }
            }
        }
        let mut mapping = BTreeMap::new();
        for &v in &ids {
            let r = find(&mut parent, index[&v]);
            mapping.insert(v, ids[r]);
        }
        let mut out = MultiGraph::new();
        for &v in mapping.values() {
            out.vertices.insert(v);
        }
        for (&(u, v), &m) in &self.edges {
            let (a, b) = (mapping[&u], mapping[&v]);
            if a == b {
                continue; // loop after identification, discarded
            }
            let keep = m - used.get(&(u, v)).copied().unwrap_or(0);
            debug_assert!(mapping[&u] != mapping[&v] || keep == m);
            if keep > 0 {
                *out.edges.entry(key(a, b)).or_insert(0) += keep;
            }
        }
        // contracted instances always vanish; between-component contracted
        // instances cannot exist (their endpoints were merged)
        Ok((out, mapping))
    }

    /// Contracts all edges among the given vertex set (the induced
    /// subgraph), collapsing it to one vertex.
    pub fn contract_vertex_set(
        &self,
        set: &BTreeSet<VertexId>,
    ) -> Result<(MultiGraph, BTreeMap<VertexId, VertexId>), GraphError> {
        for &v in set {
            if !self.contains_vertex(v) {
                return Err(GraphError::MissingVertex(v));
            }
        }
        let Some(&root) = set.iter().next() else {
            return Ok((self.clone(), self.vertices.iter().map(|&v| (v, v)).collect()));
        };
        let mut out = MultiGraph::new();
        let mut mapping = BTreeMap::new();
        for &v in &self.vertices {
            let img = if set.contains(&v) { root } else { v };
            mapping.insert(v, img);
            out.vertices.insert(img);
        }
        for (&(u, v), &m) in &self.edges {
            let (a, b) = (mapping[&u], mapping[&v]);
            if a != b {
                *out.edges.entry(key(a, b)).or_insert(0) += m;
            }
        }
        Ok((out, mapping))
    }

    /// Disjoint union plus all edges between the two sides.
    pub fn join(&self, other: &MultiGraph) -> Result<MultiGraph, GraphError> {
        if let Some(&v) = self.vertices.intersection(&other.vertices).next() {
            return Err(GraphError::IdCollision(v));
        }
        let mut g = self.clone();
        g.vertices.extend(other.vertices.iter().copied());
        for (&e, &m) in &other.edges {
            g.edges.insert(e, m);
        }
        for &u in &self.vertices {
            for &v in &other.vertices {
                g.edges.insert(key(u, v), 1);
            }
        }
        Ok(g)
    }

    /// Simple graph on the same vertices with exactly the non-edges.
    pub fn complement(&self) -> Result<MultiGraph, GraphError> {
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        let mut g = MultiGraph::new();
        g.vertices = self.vertices.clone();
        let ids: Vec<VertexId> = self.vertices.iter().copied().collect();
        for (i, &u) in ids.iter().enumerate() {
            for &v in &ids[i + 1..] {
                if !self.has_edge(u, v) {
                    g.edges.insert((u, v), 1);
                }
            }
        }
        Ok(g)
    }

    /// Induced subgraph on the given vertex set.
    pub fn induced(&self, set: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = MultiGraph::new();
        g.vertices = set.clone();
        for (&(u, v), &m) in &self.edges {
            if set.contains(&u) && set.contains(&v) {
                g.edges.insert((u, v), m);
            }
        }
        g
    }

    /// Repeatedly inserts an edge between the lexicographically first
    /// nonadjacent pair with degree sum >= n, until none remains. Returns
    /// the closure and the insertion order.
    pub fn bc_closure(&self) -> Result<(MultiGraph, Vec<(VertexId, VertexId)>), GraphError> {
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        let n = self.vertex_count() as u32;
        let ids: Vec<VertexId> = self.vertices.iter().copied().collect();
        let mut g = self.clone();
        let mut deg = g.degree_map();
        let mut added = Vec::new();
        loop {
            let mut grew = false;
            for (i, &u) in ids.iter().enumerate() {
                for &v in &ids[i + 1..] {
                    if !g.has_edge(u, v) && deg[&u] + deg[&v] >= n {
                        g.edges.insert((u, v), 1);
                        *deg.get_mut(&u).unwrap() += 1;
                        *deg.get_mut(&v).unwrap() += 1;
                        added.push((u, v));
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok((g, added));
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        let ids: Vec<VertexId> = self.vertices.iter().copied().collect();
        for (i, &u) in ids.iter().enumerate() {
            for &v in &ids[i + 1..] {
                if self.multiplicity(u, v) != 1 {
                    return false;
                }
            }
        }
        self.is_simple()
    }

    /// Hamiltonian cycle search: when the closure is complete, builds the
    /// canonical cycle of the closure and unwinds the added edges in reverse
    /// insertion order through crossing-edge rerouting; otherwise falls back
    /// to a bounded exhaustive search. `None` means no cycle was found
    /// within the budget (exhaustive below the budget proves absence).
    pub fn hamiltonian_cycle(&self, fallback_budget: u64) -> Result<Option<HamCycleWitness>, GraphError> {
        if self.vertex_count() < 3 {
            return Err(GraphError::Precondition("hamiltonian cycle requires n >= 3"));
        }
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        let (closure, added) = self.bc_closure()?;
        if closure.is_complete() {
            let mut cycle: Vec<VertexId> = self.vertices.iter().copied().collect();
            // peel the added edges newest-first; adjacency level j allows
            // the original edges plus added[..j]
            let mut allowed = closure;
            for j in (0..added.len()).rev() {
                let (x, y) = added[j];
                allowed.edges.remove(&key(x, y));
                cycle = reroute_without_edge(&allowed, cycle, x, y);
            }
            let witness = HamCycleWitness { order: cycle };
            debug_assert!(witness.validate(self));
            return Ok(Some(witness));
        }
        Ok(exhaustive_hamiltonian(self, fallback_budget))
    }

    /// Adds a new vertex adjacent to exactly the targets (inverse of
    /// deleting a minimum-degree vertex).
    pub fn inverse_layoff(&self, targets: &[VertexId]) -> Result<(MultiGraph, VertexId), GraphError> {
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        if targets.len() < 4 {
            return Err(GraphError::Precondition("inverse layoff requires at least 4 targets"));
        }
        let set: BTreeSet<VertexId> = targets.iter().copied().collect();
        if set.len() != targets.len() {
            return Err(GraphError::Precondition("duplicate target"));
        }
        for &t in targets {
            if !self.contains_vertex(t) {
                return Err(GraphError::MissingVertex(t));
            }
        }
        let u = self.max_vertex_id() + 1;
        let mut g = self.clone();
        g.add_vertex(u);
        for &t in targets {
            g.add_edge(u, t)?;
        }
        Ok((g, u))
    }

    /// Adds a new vertex adjacent to targets plus both ends of `split`,
    /// removing the split edge; lifting the new vertex through (u, w)
    /// recovers the original graph.
    pub fn inverse_lift(
        &self,
        targets: &[VertexId],
        split: (VertexId, VertexId),
    ) -> Result<(MultiGraph, VertexId), GraphError> {
        let (u, w) = split;
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        if targets.len() < 2 {
            return Err(GraphError::Precondition("inverse lift requires at least 2 targets"));
        }
        let set: BTreeSet<VertexId> = targets.iter().copied().collect();
        if set.len() != targets.len() {
            return Err(GraphError::Precondition("duplicate target"));
        }
        if set.contains(&u) || set.contains(&w) {
            return Err(GraphError::Precondition("split edge touches a target"));
        }
        if !self.has_edge(u, w) {
            return Err(GraphError::MissingEdge(u, w));
        }
        let vn = self.max_vertex_id() + 1;
        let mut g = self.clone();
        g.add_vertex(vn);
        g.edges.remove(&key(u, w));
        for &t in targets {
            g.add_edge(vn, t)?;
        }
        g.add_edge(vn, u)?;
        g.add_edge(vn, w)?;
        Ok((g, vn))
    }

    /// Replaces vertex u by a fresh K6; u's neighbors are partitioned in
    /// ascending id order into quota blocks attached to the first k of the
    /// six new vertices. Returns the new graph and the six ids.
    pub fn expand_k6(&self, u: VertexId, quotas: &[u32]) -> Result<(MultiGraph, [VertexId; 6]), GraphError> {
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        if quotas.is_empty() || quotas.len() > 5 {
            return Err(GraphError::Precondition("expand_k6 requires 1 <= k <= 5 quotas"));
        }
        if quotas.iter().any(|&q| q == 0) {
            return Err(GraphError::Precondition("expand_k6 quotas must be positive"));
        }
        if !self.contains_vertex(u) {
            return Err(GraphError::MissingVertex(u));
        }
        let nbrs = self.neighbors(u);
        let total: u32 = quotas.iter().sum();
        if total != self.degree(u) {
            return Err(GraphError::Precondition("expand_k6 quotas must sum to degree(u)"));
        }
        let base = self.max_vertex_id();
        let six = [base + 1, base + 2, base + 3, base + 4, base + 5, base + 6];
        let mut g = self.remove_vertex(u);
        for &v in &six {
            g.add_vertex(v);
        }
        for i in 0..6 {
            for j in i + 1..6 {
                g.add_edge(six[i], six[j])?;
            }
        }
        let mut it = nbrs.into_iter();
        for (i, &q) in quotas.iter().enumerate() {
            for _ in 0..q {
                let nb = it.next().expect("quota total equals degree");
                g.add_edge(six[i], nb)?;
            }
        }
        Ok((g, six))
    }

    /// Strong connectivity of the directed multigraph given by orienting
    /// every edge instance: bit false orients low-id to high-id.
    pub fn is_strongly_connected(&self, orientation: &[bool]) -> Result<bool, GraphError> {
        let m = self.edge_count();
        if orientation.len() != m {
            return Err(GraphError::IncompleteOrientation { got: orientation.len(), want: m });
        }
        let Some(&start) = self.vertices.iter().next() else {
            return Ok(true);
        };
        if self.vertex_count() == 1 {
            return Ok(true);
        }
        let mut fwd: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        let mut bwd: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (&(u, v), flip) in self.edge_instances().iter().zip(orientation) {
            let (s, t) = if *flip { (v, u) } else { (u, v) };
            fwd.entry(s).or_default().push(t);
            bwd.entry(t).or_default().push(s);
        }
        let reach = |adj: &BTreeMap<VertexId, Vec<VertexId>>| {
            let mut seen = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                if let Some(ns) = adj.get(&v) {
                    for &w in ns {
                        if seen.insert(w) {
                            stack.push(w);
                        }
                    }
                }
            }
            seen.len() == self.vertices.len()
        };
        Ok(reach(&fwd) && reach(&bwd))
    }

    /// One `u v` line per edge instance, canonical order.
    pub fn to_edge_list_text(&self) -> String {
        let mut s = String::new();
        if self.edges.is_empty() {
            for &v in &self.vertices {
                let _ = writeln!(s, "{v}");
            }
            return s;
        }
        let isolated: Vec<VertexId> = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| self.degree(v) == 0)
            .collect();
        for v in isolated {
            let _ = writeln!(s, "{v}");
        }
        for (u, v) in self.edge_instances() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// Parses the edge-list text format: `u v` per line (repeats raise
    /// multiplicity), bare `v` declares an isolated vertex.
    pub fn from_edge_list_text(text: &str) -> Result<Self, GraphError> {
        let mut g = MultiGraph::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse = |t: &str| {
                t.parse::<VertexId>()
                    .map_err(|_| GraphError::Parse(format!("line {}: bad vertex `{t}`", lineno + 1)))
            };
            match fields.as_slice() {
                [v] => {
                    g.add_vertex(parse(v)?);
                }
                [u, v] => {
                    g.add_edge(parse(u)?, parse(v)?)?;
                }
                _ => return Err(GraphError::Parse(format!("line {}: expected `u v`", lineno + 1))),
            }
        }
        Ok(g)
    }

    /// DOT output; parallel edges appear as repeated edge statements.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph {\n");
        for &v in &self.vertices {
            let _ = writeln!(s, "  {v};");
        }
        for (u, v) in self.edge_instances() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

impl Default for MultiGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// Cyclic vertex order claimed to be a Hamiltonian cycle.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HamCycleWitness {
    pub order: Vec<VertexId>,
}

impl HamCycleWitness {
    /// Every vertex exactly once and every consecutive pair (with
    /// wraparound) an edge of `g`.
    pub fn validate(&self, g: &MultiGraph) -> bool {
        let n = g.vertex_count();
        if self.order.len() != n || n < 3 {
            return false;
        }
        let set: BTreeSet<VertexId> = self.order.iter().copied().collect();
        if set.len() != n || !g.vertices().all(|v| set.contains(&v)) {
            return false;
        }
        (0..n).all(|i| g.has_edge(self.order[i], self.order[(i + 1) % n]))
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.order.len();
        (0..n).map(|i| (self.order[i], self.order[(i + 1) % n])).collect()
    }
}

/// Rewrites `cycle` so it avoids the edge x-y, assuming it is a valid cycle
/// in `allowed` + xy and deg(x) + deg(y) >= n in `allowed`.
fn reroute_without_edge(
    allowed: &MultiGraph,
    cycle: Vec<VertexId>,
    x: VertexId,
    y: VertexId,
) -> Vec<VertexId> {
    let n = cycle.len();
    let uses = (0..n).any(|i| {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        (a, b) == (x, y) || (a, b) == (y, x)
    });
    if !uses {
        return cycle;
    }
    // rotate into a path u_1 .. u_n with u_1 = x, u_n = y
    let pos = (0..n)
        .find(|&i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            (a, b) == (x, y) || (a, b) == (y, x)
        })
        .unwrap();
    let mut path: Vec<VertexId> = Vec::with_capacity(n);
    for i in 0..n {
        path.push(cycle[(pos + 1 + i) % n]);
    }
    if path[0] != x {
        path.reverse();
    }
    debug_assert_eq!(path[0], x);
    debug_assert_eq!(path[n - 1], y);
    // crossing pair: x ~ u_{i+1} and y ~ u_i gives the rerouted cycle
    for i in 1..n - 1 {
        if allowed.has_edge(x, path[i + 1]) && allowed.has_edge(y, path[i]) {
            let mut out: Vec<VertexId> = Vec::with_capacity(n);
            out.extend_from_slice(&path[..=i]);
            out.extend(path[i + 1..].iter().rev());
            return out;
        }
    }
    unreachable!("degree-sum condition guarantees a crossing pair");
}

fn exhaustive_hamiltonian(g: &MultiGraph, budget: u64) -> Option<HamCycleWitness> {
    let ids: Vec<VertexId> = g.vertices().collect();
    let n = ids.len();
    let mut order = vec![ids[0]];
    let mut used: BTreeSet<VertexId> = [ids[0]].into_iter().collect();
    let mut steps = 0u64;
    fn dfs(
        g: &MultiGraph,
        n: usize,
        order: &mut Vec<VertexId>,
        used: &mut BTreeSet<VertexId>,
        steps: &mut u64,
        budget: u64,
    ) -> bool {
        if *steps >= budget {
            return false;
        }
        *steps += 1;
        if order.len() == n {
            return g.has_edge(order[n - 1], order[0]);
        }
        let last = *order.last().unwrap();
        for w in g.neighbors(last) {
            if !used.contains(&w) {
                order.push(w);
                used.insert(w);
                if dfs(g, n, order, used, steps, budget) {
                    return true;
                }
                order.pop();
                used.remove(&w);
            }
        }
        false
    }
    if dfs(g, n, &mut order, &mut used, &mut steps, budget) {
        Some(HamCycleWitness { order })
    } else {
        None
    }
}

/// Exact multigraph isomorphism by degree-refined backtracking. Intended
/// for kernel-sized graphs (at most ~9 vertices).
pub fn is_isomorphic(a: &MultiGraph, b: &MultiGraph) -> bool {
    find_embedding(a, b, false)
}

/// True when some vertex bijection maps `kernel` into `g` with every
/// multiplicity at least the kernel's (spanning supergraph containment).
pub fn contains_spanning(g: &MultiGraph, kernel: &MultiGraph) -> bool {
    find_embedding(kernel, g, true)
}

fn find_embedding(a: &MultiGraph, b: &MultiGraph, allow_extra: bool) -> bool {
    if a.vertex_count() != b.vertex_count() {
        return false;
    }
    if !allow_extra {
        if a.edge_count() != b.edge_count() {
            return false;
        }
        let mut da: Vec<u32> = a.degree_map().into_values().collect();
        let mut db: Vec<u32> = b.degree_map().into_values().collect();
        da.sort_unstable();
        db.sort_unstable();
        if da != db {
            return false;
        }
    }
    let va: Vec<VertexId> = a.vertices().collect();
    let vb: Vec<VertexId> = b.vertices().collect();
    let n = va.len();
    let mut assign: Vec<Option<usize>> = vec![None; n]; // a-index -> b-index
    let mut used = vec![false; n];
    fn bt(
        a: &MultiGraph,
        b: &MultiGraph,
        va: &[VertexId],
        vb: &[VertexId],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        i: usize,
        allow_extra: bool,
    ) -> bool {
        let n = va.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                let ma = a.multiplicity(va[i], va[k]);
                let mb = b.multiplicity(vb[j], vb[assign[k].unwrap()]);
                if allow_extra {
                    mb >= ma
                } else {
                    mb == ma
                }
            });
            if ok {
                assign[i] = Some(j);
                used[j] = true;
                if bt(a, b, va, vb, assign, used, i + 1, allow_extra) {
                    return true;
                }
                assign[i] = None;
                used[j] = false;
            }
        }
        false
    }
    bt(a, b, &va, &vb, &mut assign, &mut used, 0, allow_extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_basics() {
        let g = MultiGraph::from_edge_list(&[(1, 2), (1, 2), (1, 2), (1, 2)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree_sequence().degrees(), &[4, 4]);
        assert!(!g.is_simple());

        let k1 = MultiGraph::with_vertices([7], []).unwrap();
        assert_eq!(k1.vertex_count(), 1);
        assert_eq!(k1.edge_count(), 0);

        assert_eq!(MultiGraph::from_edge_list(&[(1, 1)]), Err(GraphError::Loop(1)));
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(MultiGraph::complete(7).degree_sequence().degrees(), &[6; 7]);
        let k4s = crate::atlas::get_entry("K4*").unwrap();
        assert_eq!(k4s.graph.degree_sequence().degrees(), &[5, 5, 5, 5]);
        assert!(!MultiGraph::complete(7).has_edge(1, 1));
        assert!(MultiGraph::complete(7).is_simple());
        assert!(!crate::atlas::get_entry("K(1,3,3)").unwrap().graph.is_simple());
    }

    #[test]
    fn lift_examples() {
        let k5 = MultiGraph::complete(5);
        let g = k5.lift(5, 1, 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.multiplicity(1, 2), 2);
        assert_eq!(g.degree_sequence().degrees(), &[4, 4, 3, 3]);

        // degree < 4 rejected
        let c4 = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(matches!(c4.lift(1, 2, 4), Err(GraphError::Precondition(_))));
    }

    #[test]
    fn contract_k6_inside_k7() {
        let k7 = MultiGraph::complete(7);
        let mut inner = Vec::new();
        for u in 1..=6u32 {
            for v in u + 1..=6 {
                inner.push((u, v));
            }
        }
        let (q, map) = k7.contract(&inner).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.multiplicity(1, 7), 6);
        assert_eq!(map[&3], 1);
        assert_eq!(map[&7], 7);
    }

    #[test]
    fn contract_triangle_and_empty() {
        let g = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        let (q, _) = g.contract(&[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.multiplicity(1, 4), 1);

        let (same, _) = g.contract(&[]).unwrap();
        assert_eq!(same, g);

        assert!(g.contract(&[(1, 4)]).is_err());
    }

    #[test]
    fn join_examples() {
        let k1a = MultiGraph::with_vertices([1], []).unwrap();
        let k1b = MultiGraph::with_vertices([2], []).unwrap();
        let k2 = k1a.join(&k1b).unwrap();
        assert_eq!(k2.degree_sequence().degrees(), &[1, 1]);

        let hub = MultiGraph::with_vertices([9], []).unwrap();
        let c4 = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let w4 = hub.join(&c4).unwrap();
        assert!(is_isomorphic(&w4, &crate::atlas::get_entry("W4").unwrap().graph));

        assert!(k1a.join(&k1a).is_err());
    }

    #[test]
    fn complement_examples() {
        let k4 = MultiGraph::complete(4);
        assert_eq!(k4.complement().unwrap().edge_count(), 0);
        let c5 = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        assert!(is_isomorphic(&c5.complement().unwrap(), &c5));
        assert_eq!(c5.complement().unwrap().complement().unwrap(), c5);
        assert!(MultiGraph::parallel_pair(2).complement().is_err());
    }

    #[test]
    fn closure_examples() {
        let c5 = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        let (cl, added) = c5.bc_closure().unwrap();
        assert_eq!(cl, c5);
        assert!(added.is_empty());

        let mut k4me = MultiGraph::complete(4);
        k4me.edges.remove(&(1, 2));
        let (cl, added) = k4me.bc_closure().unwrap();
        assert!(cl.is_complete());
        assert_eq!(added, vec![(1, 2)]);
    }

    #[test]
    fn hamiltonian_examples() {
        let c5 = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        let w = c5.hamiltonian_cycle(10_000).unwrap().unwrap();
        assert!(w.validate(&c5));

        let star = MultiGraph::from_edge_list(&[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(star.hamiltonian_cycle(10_000).unwrap().is_none());

        let k2 = MultiGraph::from_edge_list(&[(1, 2)]).unwrap();
        assert!(k2.hamiltonian_cycle(10).is_err());
    }

    #[test]
    fn closure_witness_uses_original_edges_only() {
        // dense enough that the closure completes but the original is far
        // from complete: two high-degree hubs plus a path
        let g = MultiGraph::from_edge_list(&[
            (1, 3), (1, 4), (1, 5), (1, 6),
            (2, 3), (2, 4), (2, 5), (2, 6),
            (3, 4), (5, 6), (1, 2),
        ])
        .unwrap();
        if let Some(w) = g.hamiltonian_cycle(100_000).unwrap() {
            assert!(w.validate(&g));
        }
    }

    #[test]
    fn inverse_layoff_examples() {
        let k6 = MultiGraph::complete(6);
        let (g, u) = k6.inverse_layoff(&[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(g.degree_sequence().degrees(), &[6; 7]);
        assert_eq!(g.remove_vertex(u), k6);

        assert!(k6.inverse_layoff(&[1, 2, 3]).is_err());
        assert!(k6.inverse_layoff(&[1, 1, 2, 3]).is_err());

        // contracting the old graph collapses to a parallel pair
        let (g, _) = k6.inverse_layoff(&[1, 2, 3, 4, 5, 6]).unwrap();
        let inner: Vec<_> = k6.edge_instances();
        let (q, _) = g.contract(&inner).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edge_count(), 6);
    }

    #[test]
    fn inverse_lift_roundtrip() {
        let g = crate::atlas::get_entry("(6^3,5^4)").unwrap().graph.clone();
        // targets: four degree-5 vertices; split edge between two degree-6
        let (bigger, vn) = g.inverse_lift(&[1, 2, 5, 6], (3, 4)).unwrap();
        assert_eq!(bigger.degree_sequence().degrees(), &[6; 8]);
        let back = bigger.lift(vn, 3, 4).unwrap();
        assert_eq!(back, g);

        assert!(g.inverse_lift(&[1, 2, 5, 6], (3, 5)).is_err()); // touches target
        assert!(g.inverse_lift(&[2, 6], (1, 5)).is_err()); // 1-5 not an edge
    }

    #[test]
    fn expand_k6_bookkeeping() {
        let g = crate::atlas::get_entry("(6^3,5^4)").unwrap().graph.clone();
        // vertex 3 has degree 6: split 6 = 4 + 2
        let (big, six) = g.expand_k6(3, &[4, 2]).unwrap();
        let mut degs: Vec<u32> = six.iter().map(|&v| big.degree(v)).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(degs, vec![9, 7, 5, 5, 5, 5]);
        // the K6 is all there
        for i in 0..6 {
            for j in i + 1..6 {
                assert!(big.has_edge(six[i], six[j]));
            }
        }
        // contracting the K6 recovers the original up to the merged id
        let set: BTreeSet<VertexId> = six.iter().copied().collect();
        let (q, _) = big.contract_vertex_set(&set).unwrap();
        assert!(is_isomorphic(&q, &g));

        assert!(g.expand_k6(3, &[4, 1]).is_err()); // quota mismatch
    }

    #[test]
    fn strong_connectivity_examples() {
        let c3 = MultiGraph::from_edge_list(&[(1, 2), (2, 3), (1, 3)]).unwrap();
        // instances: (1,2), (1,3), (2,3); cycle 1->2->3->1
        assert!(c3.is_strongly_connected(&[false, true, false]).unwrap());
        // all edges toward 3
        assert!(!c3.is_strongly_connected(&[false, false, false]).unwrap());
        // disconnected graph is never strong
        let dis = MultiGraph::with_vertices([1, 2, 3, 4], [(1, 2), (3, 4)]).unwrap();
        assert!(!dis.is_strongly_connected(&[false, false]).unwrap());
        assert!(c3.is_strongly_connected(&[false]).is_err());
    }

    #[test]
    fn text_roundtrip_and_dot() {
        let g = MultiGraph::with_vertices([5], [(1, 2), (1, 2), (2, 3)]).unwrap();
        let text = g.to_edge_list_text();
        let back = MultiGraph::from_edge_list_text(&text).unwrap();
        assert_eq!(back, g);
        let dot = g.to_dot();
        assert_eq!(dot.matches("1 -- 2").count(), 2);
    }

    #[test]
    fn isomorphism_and_spanning() {
        let k133 = crate::atlas::get_entry("K(1,3,3)").unwrap().graph.clone();
        let relabeled =
            MultiGraph::from_edge_list(&[(10, 20), (10, 30), (10, 30), (10, 30), (20, 30), (20, 30), (20, 30)])
                .unwrap();
        assert!(is_isomorphic(&k133, &relabeled));
        let mut plus = relabeled.clone();
        plus.add_edge(10, 20).unwrap();
        assert!(!is_isomorphic(&k133, &plus));
        assert!(contains_spanning(&plus, &k133));
        assert!(!contains_spanning(&k133, &plus));
    }
}
