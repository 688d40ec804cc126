//! Certificate schema and structural verifier.
//!
//! A certificate is a tree of construction steps over graphs. Child graphs
//! are never stored: the verifier re-derives them from the step data, so a
//! forged intermediate graph cannot slip through. Leaves are either named
//! kernels (whose properties the test suite establishes once by exhaustive
//! oracle) or explicit oracle invocations bounded by the edge cap.

use serde::{Deserialize, Serialize};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::atlas::{self, Claim, LiftScript};
use crate::graph::{is_isomorphic, HamCycleWitness, MultiGraph, VertexId};
use crate::oracles;

pub const SCHEMA_VERSION: u32 = 1;

/// Small graphs whose S3-connectivity is established by exhaustive oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "snake_case")]
pub enum KernelName {
    K133,
    K4Star,
    /// Two vertices with m >= 4 parallel edges.
    ParallelPair { m: u32 },
    /// Complete graph on n >= 7 vertices.
    Complete { n: u32 },
}

impl fmt::Display for KernelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelName::K133 => write!(f, "K(1,3,3)"),
            KernelName::K4Star => write!(f, "K4*"),
            KernelName::ParallelPair { m } => write!(f, "{m}K2"),
            KernelName::Complete { n } => write!(f, "K{n}"),
        }
    }
}

/// S3-connectivity certificate steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Certificate {
    Kernel {
        #[serde(flatten)]
        name: KernelName,
    },
    /// g with vertex u lifted through (v, w) yields the child graph.
    LiftExpansion {
        u: VertexId,
        v: VertexId,
        w: VertexId,
        child: Box<Certificate>,
    },
    /// g minus vertex u (of degree >= 4) yields the child graph.
    LayoffExpansion { u: VertexId, child: Box<Certificate> },
    /// General contraction: the induced subgraph on `inner_vertices` and
    /// the quotient are both certified.
    Contract {
        inner_vertices: Vec<VertexId>,
        inner: Box<Certificate>,
        quotient: Box<Certificate>,
    },
    /// The six vertices induce a K6 that is proper (two of them joined by a
    /// path avoiding its edges); contracting it yields the quotient.
    K6Expansion {
        six: Vec<VertexId>,
        quotient: Box<Certificate>,
    },
    /// g minus the Hamiltonian cycle is Z3-connected.
    Z3PlusHam {
        cycle: HamCycleWitness,
        z3: Z3Certificate,
    },
    /// Replaying the lifting script lands on its terminal kernel.
    ScriptReduction { script: LiftScript },
}

/// Z3-connectivity certificate steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Z3Certificate {
    /// Isomorphic to a Z3-claimed atlas entry.
    Z3Kernel { name: String },
    /// The five vertices induce a spanning W4; contracting them yields the
    /// quotient.
    W4Contract {
        five: Vec<VertexId>,
        quotient: Box<Z3Certificate>,
    },
    /// The vertex arrived with >= 2 attachment edges; removing it yields
    /// the child graph.
    Attach {
        vertex: VertexId,
        edges: Vec<(VertexId, VertexId)>,
        child: Box<Z3Certificate>,
    },
    /// Exhaustive oracle confirmation, bounded by the edge cap.
    Z3Oracle { edges: usize },
}

/// Where verification failed and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    /// Path of step labels from the root to the failing step.
    pub path: Vec<String>,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.path.join("/"), self.reason)
    }
}

impl std::error::Error for VerifyFailure {}

fn fail<T>(path: &[String], reason: impl Into<String>) -> Result<T, VerifyFailure> {
    Err(VerifyFailure { path: path.to_vec(), reason: reason.into() })
}

impl Certificate {
    /// Renames every vertex reference through the map (ids absent from the
    /// map are kept).
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Certificate {
        let f = |v: VertexId| map.get(&v).copied().unwrap_or(v);
        match self {
            Certificate::Kernel { name } => Certificate::Kernel { name: name.clone() },
            Certificate::LiftExpansion { u, v, w, child } => Certificate::LiftExpansion {
                u: f(*u),
                v: f(*v),
                w: f(*w),
                child: Box::new(child.relabel(map)),
            },
            Certificate::LayoffExpansion { u, child } => Certificate::LayoffExpansion {
                u: f(*u),
                child: Box::new(child.relabel(map)),
            },
            Certificate::Contract { inner_vertices, inner, quotient } => Certificate::Contract {
                inner_vertices: inner_vertices.iter().map(|&v| f(v)).collect(),
                inner: Box::new(inner.relabel(map)),
                quotient: Box::new(quotient.relabel(map)),
            },
            Certificate::K6Expansion { six, quotient } => Certificate::K6Expansion {
                six: six.iter().map(|&v| f(v)).collect(),
                quotient: Box::new(quotient.relabel(map)),
            },
            Certificate::Z3PlusHam { cycle, z3 } => Certificate::Z3PlusHam {
                cycle: HamCycleWitness { order: cycle.order.iter().map(|&v| f(v)).collect() },
                z3: z3.relabel(map),
            },
            Certificate::ScriptReduction { script } => Certificate::ScriptReduction {
                script: LiftScript {
                    steps: script.steps.iter().map(|&(a, b, c)| (f(a), f(b), f(c))).collect(),
                    terminal: script.terminal.clone(),
                    terminal_spanning: script.terminal_spanning,
                },
            },
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Certificate::Kernel { .. } => "kernel",
            Certificate::LiftExpansion { .. } => "lift_expansion",
            Certificate::LayoffExpansion { .. } => "layoff_expansion",
            Certificate::Contract { .. } => "contract",
            Certificate::K6Expansion { .. } => "k6_expansion",
            Certificate::Z3PlusHam { .. } => "z3_plus_ham",
            Certificate::ScriptReduction { .. } => "script_reduction",
        }
    }
}

impl Z3Certificate {
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Z3Certificate {
        let f = |v: VertexId| map.get(&v).copied().unwrap_or(v);
        match self {
            Z3Certificate::Z3Kernel { name } => Z3Certificate::Z3Kernel { name: name.clone() },
            Z3Certificate::W4Contract { five, quotient } => Z3Certificate::W4Contract {
                five: five.iter().map(|&v| f(v)).collect(),
                quotient: Box::new(quotient.relabel(map)),
            },
            Z3Certificate::Attach { vertex, edges, child } => Z3Certificate::Attach {
                vertex: f(*vertex),
                edges: edges.iter().map(|&(a, b)| (f(a), f(b))).collect(),
                child: Box::new(child.relabel(map)),
            },
            Z3Certificate::Z3Oracle { edges } => Z3Certificate::Z3Oracle { edges: *edges },
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Z3Certificate::Z3Kernel { .. } => "z3_kernel",
            Z3Certificate::W4Contract { .. } => "w4_contract",
            Z3Certificate::Attach { .. } => "attach",
            Z3Certificate::Z3Oracle { .. } => "z3_oracle",
        }
    }
}

/// Checks that `g` matches the named kernel family.
fn check_kernel(g: &MultiGraph, name: &KernelName, path: &[String]) -> Result<(), VerifyFailure> {
    match name {
        KernelName::K133 => {
            let k = &atlas::get_entry("K(1,3,3)").unwrap().graph;
            if !is_isomorphic(g, k) {
                return fail(path, "graph is not isomorphic to K(1,3,3)");
            }
        }
        KernelName::K4Star => {
            let k = &atlas::get_entry("K4*").unwrap().graph;
            if !is_isomorphic(g, k) {
                return fail(path, "graph is not isomorphic to K4*");
            }
        }
        KernelName::ParallelPair { m } => {
            if *m < 4 {
                return fail(path, format!("parallel pair kernel needs m >= 4, got {m}"));
            }
            if !is_isomorphic(g, &MultiGraph::parallel_pair(*m)) {
                return fail(path, format!("graph is not {m} parallel edges on two vertices"));
            }
        }
        KernelName::Complete { n } => {
            if *n < 7 {
                return fail(path, format!("complete kernel needs n >= 7, got {n}"));
            }
            if g.vertex_count() != *n as usize || !g.is_complete() {
                return fail(path, format!("graph is not K{n}"));
            }
        }
    }
    Ok(())
}

/// Verifies an S3 certificate against `g`. Structural steps are linear in
/// certificate size; only explicit oracle leaves run the exponential scan.
pub fn verify(g: &MultiGraph, cert: &Certificate, edge_cap: usize) -> Result<(), VerifyFailure> {
    verify_at(g, cert, edge_cap, &mut vec!["root".to_string()])
}

fn verify_at(
    g: &MultiGraph,
    cert: &Certificate,
    edge_cap: usize,
    path: &mut Vec<String>,
) -> Result<(), VerifyFailure> {
    path.push(cert.label().to_string());
    let result = (|| -> Result<(), VerifyFailure> {
        match cert {
            Certificate::Kernel { name } => check_kernel(g, name, path),
            Certificate::LiftExpansion { u, v, w, child } => {
                if !g.contains_vertex(*u) {
                    return fail(path, format!("lift vertex {u} missing"));
                }
                if g.degree(*u) < 4 {
                    return fail(path, format!("lift vertex {u} has degree {} < 4", g.degree(*u)));
                }
                let lifted = match g.lift(*u, *v, *w) {
                    Ok(l) => l,
                    Err(e) => return fail(path, format!("lift failed: {e}")),
                };
                verify_at(&lifted, child, edge_cap, path)
            }
            Certificate::LayoffExpansion { u, child } => {
                if !g.contains_vertex(*u) {
                    return fail(path, format!("layoff vertex {u} missing"));
                }
                if g.degree(*u) < 4 {
                    return fail(path, format!("layoff vertex {u} has degree {} < 4", g.degree(*u)));
                }
                verify_at(&g.remove_vertex(*u), child, edge_cap, path)
            }
            Certificate::Contract { inner_vertices, inner, quotient } => {
                let set: BTreeSet<VertexId> = inner_vertices.iter().copied().collect();
                if set.len() != inner_vertices.len() || set.is_empty() {
                    return fail(path, "inner vertex set empty or has duplicates");
                }
                if let Some(&v) = set.iter().find(|v| !g.contains_vertex(**v)) {
                    return fail(path, format!("inner vertex {v} missing"));
                }
                let inner_graph = g.induced(&set);
                verify_at(&inner_graph, inner, edge_cap, path)?;
                let (q, _) = g
                    .contract(&inner_graph.edge_instances())
                    .map_err(|e| VerifyFailure { path: path.clone(), reason: format!("contract failed: {e}") })?;
                verify_at(&q, quotient, edge_cap, path)
            }
            Certificate::K6Expansion { six, quotient } => {
                let set: BTreeSet<VertexId> = six.iter().copied().collect();
                if six.len() != 6 || set.len() != 6 {
                    return fail(path, "k6 expansion needs six distinct vertices");
                }
                if let Some(&v) = set.iter().find(|v| !g.contains_vertex(**v)) {
                    return fail(path, format!("k6 vertex {v} missing"));
                }
                let ids: Vec<VertexId> = set.iter().copied().collect();
                let mut k6_instances = Vec::new();
                for i in 0..6 {
                    for j in i + 1..6 {
                        if !g.has_edge(ids[i], ids[j]) {
                            return fail(
                                path,
                                format!("missing K6 edge {}-{}", ids[i], ids[j]),
                            );
                        }
                        k6_instances.push((ids[i], ids[j]));
                    }
                }
                if !has_outside_path(g, &ids, &k6_instances) {
                    return fail(path, "K6 is not proper: no outside path joins two of its vertices");
                }
                let (q, _) = g
                    .contract(&k6_instances)
                    .map_err(|e| VerifyFailure { path: path.clone(), reason: format!("contract failed: {e}") })?;
                verify_at(&q, quotient, edge_cap, path)
            }
            Certificate::Z3PlusHam { cycle, z3 } => {
                if !cycle.validate(g) {
                    return fail(path, "hamiltonian cycle witness is invalid");
                }
                let rest = g
                    .minus_edges(&cycle.edges())
                    .map_err(|e| VerifyFailure { path: path.clone(), reason: format!("cycle removal failed: {e}") })?;
                verify_z3_at(&rest, z3, edge_cap, path)
            }
            Certificate::ScriptReduction { script } => {
                match script.validate(g) {
                    Ok(true) => Ok(()),
                    Ok(false) => fail(path, format!("script terminal does not match {}", script.terminal)),
                    Err(e) => fail(path, format!("script replay failed: {e}")),
                }
            }
        }
    })();
    path.pop();
    result
}

/// Does some pair of `six` lie in one component of g minus the K6 edges?
fn has_outside_path(g: &MultiGraph, six: &[VertexId], k6_instances: &[(VertexId, VertexId)]) -> bool {
    let Ok(stripped) = g.minus_edges(k6_instances) else {
        return false;
    };
    // component labels by BFS
    let mut comp: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut next = 0;
    for start in stripped.vertices() {
        if comp.contains_key(&start) {
            continue;
        }
        next += 1;
        let mut stack = vec![start];
        comp.insert(start, next);
        while let Some(v) = stack.pop() {
            for w in stripped.neighbors(v) {
                if !comp.contains_key(&w) {
                    comp.insert(w, next);
                    stack.push(w);
                }
            }
        }
    }
    for i in 0..six.len() {
        for j in i + 1..six.len() {
            if comp[&six[i]] == comp[&six[j]] {
                return true;
            }
        }
    }
    false
}

/// Verifies a Z3 certificate against `g`.
pub fn verify_z3(g: &MultiGraph, cert: &Z3Certificate, edge_cap: usize) -> Result<(), VerifyFailure> {
    verify_z3_at(g, cert, edge_cap, &mut vec!["root".to_string()])
}

fn verify_z3_at(
    g: &MultiGraph,
    cert: &Z3Certificate,
    edge_cap: usize,
    path: &mut Vec<String>,
) -> Result<(), VerifyFailure> {
    path.push(cert.label().to_string());
    let result = (|| -> Result<(), VerifyFailure> {
        match cert {
            Z3Certificate::Z3Kernel { name } => {
                let entry = match atlas::get_entry(name) {
                    Ok(e) => e,
                    Err(_) => return fail(path, format!("unknown kernel `{name}`")),
                };
                if entry.claim != Claim::Z3Connected {
                    return fail(path, format!("atlas entry `{name}` is not a Z3 kernel"));
                }
                if !is_isomorphic(g, &entry.graph) {
                    return fail(path, format!("graph is not isomorphic to atlas `{name}`"));
                }
                Ok(())
            }
            Z3Certificate::W4Contract { five, quotient } => {
                let set: BTreeSet<VertexId> = five.iter().copied().collect();
                if five.len() != 5 || set.len() != 5 {
                    return fail(path, "w4 contraction needs five distinct vertices");
                }
                if let Some(&v) = set.iter().find(|v| !g.contains_vertex(**v)) {
                    return fail(path, format!("w4 vertex {v} missing"));
                }
                if !induces_w4(g, &set) {
                    return fail(path, "five vertices do not induce a spanning W4");
                }
                let (q, _) = g
                    .contract_vertex_set(&set)
                    .map_err(|e| VerifyFailure { path: path.clone(), reason: format!("contract failed: {e}") })?;
                verify_z3_at(&q, quotient, edge_cap, path)
            }
            Z3Certificate::Attach { vertex, edges, child } => {
                if !g.contains_vertex(*vertex) {
                    return fail(path, format!("attach vertex {vertex} missing"));
                }
                if edges.len() < 2 {
                    return fail(path, "attach needs at least 2 attachment edges");
                }
                if g.degree(*vertex) as usize != edges.len() {
                    return fail(
                        path,
                        format!(
                            "attachment list has {} edges but vertex {} has degree {}",
                            edges.len(),
                            vertex,
                            g.degree(*vertex)
                        ),
                    );
                }
                let mut need: BTreeMap<(VertexId, VertexId), u32> = BTreeMap::new();
                for &(a, b) in edges {
                    if a != *vertex && b != *vertex {
                        return fail(path, format!("attachment edge {a}-{b} does not touch {vertex}"));
                    }
                    *need.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                }
                for (&(a, b), &m) in &need {
                    if g.multiplicity(a, b) < m {
                        return fail(path, format!("attachment edge {a}-{b} absent"));
                    }
                }
                verify_z3_at(&g.remove_vertex(*vertex), child, edge_cap, path)
            }
            Z3Certificate::Z3Oracle { edges } => {
                if *edges != g.edge_count() {
                    return fail(
                        path,
                        format!("oracle leaf claims {} edges, graph has {}", edges, g.edge_count()),
                    );
                }
                match oracles::is_z3_connected(g, edge_cap) {
                    Ok(true) => Ok(()),
                    Ok(false) => fail(path, "oracle refutes Z3-connectivity"),
                    Err(e) => fail(path, format!("oracle error: {e}")),
                }
            }
        }
    })();
    path.pop();
    result
}

/// Is there a hub assignment making the five vertices a W4 (4-cycle plus a
/// center adjacent to all of it)?
fn induces_w4(g: &MultiGraph, set: &BTreeSet<VertexId>) -> bool {
    let ids: Vec<VertexId> = set.iter().copied().collect();
    for hub_i in 0..5 {
        let hub = ids[hub_i];
        let rim: Vec<VertexId> = ids.iter().copied().filter(|&v| v != hub).collect();
        if rim.iter().any(|&r| !g.has_edge(hub, r)) {
            continue;
        }
        // 4-cycles on labeled {a,b,c,d}: a-b-c-d, a-c-b-d, a-b-d-c
        let orders = [
            [rim[0], rim[1], rim[2], rim[3]],
            [rim[0], rim[2], rim[1], rim[3]],
            [rim[0], rim[1], rim[3], rim[2]],
        ];
        for ord in orders {
            if (0..4).all(|i| g.has_edge(ord[i], ord[(i + 1) % 4])) {
                return true;
            }
        }
    }
    false
}

/// Serialized certificate document with a schema version field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub certificate: Certificate,
}

impl CertificateDocument {
    pub fn new(certificate: Certificate) -> Self {
        CertificateDocument { schema_version: SCHEMA_VERSION, certificate }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 26;

    #[test]
    fn kernel_checks() {
        let k7 = MultiGraph::complete(7);
        verify(&k7, &Certificate::Kernel { name: KernelName::Complete { n: 7 } }, CAP).unwrap();
        assert!(verify(&MultiGraph::complete(6), &Certificate::Kernel { name: KernelName::Complete { n: 6 } }, CAP).is_err());
        verify(
            &MultiGraph::parallel_pair(4),
            &Certificate::Kernel { name: KernelName::ParallelPair { m: 4 } },
            CAP,
        )
        .unwrap();
        assert!(verify(
            &MultiGraph::parallel_pair(3),
            &Certificate::Kernel { name: KernelName::ParallelPair { m: 3 } },
            CAP
        )
        .is_err());
    }

    #[test]
    fn script_entries_verify() {
        for name in ["(7^4,4^4)", "(10^3,4^8)"] {
            let e = atlas::get_entry(name).unwrap();
            let cert = Certificate::ScriptReduction { script: e.script.clone().unwrap() };
            verify(&e.graph, &cert, CAP).unwrap();
        }
    }

    #[test]
    fn tampered_script_fails_with_locus() {
        let e = atlas::get_entry("(7^4,4^4)").unwrap();
        let mut script = e.script.clone().unwrap();
        script.steps[1] = (6, 2, 6); // v = w is never a valid lift
        let cert = Certificate::ScriptReduction { script };
        let err = verify(&e.graph, &cert, CAP).unwrap_err();
        assert!(err.path.contains(&"script_reduction".to_string()));
    }

    #[test]
    fn z3_plus_ham_on_atlas_entry() {
        let e = atlas::get_entry("(6^3,5^4)").unwrap();
        let (_, cycle) = e.decomposition.as_ref().unwrap();
        let cert = Certificate::Z3PlusHam {
            cycle: cycle.clone(),
            z3: Z3Certificate::Z3Kernel { name: "(4^3,3^4)".to_string() },
        };
        verify(&e.graph, &cert, CAP).unwrap();

        // wrong kernel name fails inside the z3 subtree
        let bad = Certificate::Z3PlusHam {
            cycle: cycle.clone(),
            z3: Z3Certificate::Z3Kernel { name: "(4^4,3^4)".to_string() },
        };
        let err = verify(&e.graph, &bad, CAP).unwrap_err();
        assert!(err.path.contains(&"z3_kernel".to_string()));
    }

    #[test]
    fn w4_contract_certifies_figure_two() {
        let e = atlas::get_entry("(4^5,3^4)").unwrap();
        let cert = Z3Certificate::W4Contract {
            five: vec![5, 6, 7, 8, 9],
            quotient: Box::new(Z3Certificate::Z3Kernel { name: "W4".to_string() }),
        };
        verify_z3(&e.graph, &cert, CAP).unwrap();
    }

    #[test]
    fn attach_rules() {
        // W4 plus a vertex attached by two edges
        let w4 = atlas::get_entry("W4").unwrap().graph.clone();
        let mut g = w4.clone();
        g.add_edge(6, 1).unwrap();
        g.add_edge(6, 2).unwrap();
        let good = Z3Certificate::Attach {
            vertex: 6,
            edges: vec![(6, 1), (6, 2)],
            child: Box::new(Z3Certificate::Z3Kernel { name: "W4".to_string() }),
        };
        verify_z3(&g, &good, CAP).unwrap();

        // single attachment edge is rejected
        let mut g1 = w4.clone();
        g1.add_edge(6, 1).unwrap();
        let bad = Z3Certificate::Attach {
            vertex: 6,
            edges: vec![(6, 1)],
            child: Box::new(Z3Certificate::Z3Kernel { name: "W4".to_string() }),
        };
        assert!(verify_z3(&g1, &bad, CAP).is_err());

        // attachment list must cover the whole degree
        let stale = Z3Certificate::Attach {
            vertex: 6,
            edges: vec![(6, 1), (6, 1)],
            child: Box::new(Z3Certificate::Z3Kernel { name: "W4".to_string() }),
        };
        assert!(verify_z3(&g, &stale, CAP).is_err());
    }

    #[test]
    fn k6_expansion_on_k7_minus_edge() {
        let g = MultiGraph::complete(7).minus_edges(&[(6, 7)]).unwrap();
        let cert = Certificate::K6Expansion {
            six: vec![1, 2, 3, 4, 5, 6],
            quotient: Box::new(Certificate::Kernel { name: KernelName::ParallelPair { m: 5 } }),
        };
        verify(&g, &cert, CAP).unwrap();
    }

    #[test]
    fn json_roundtrip() {
        let e = atlas::get_entry("(6^3,5^4)").unwrap();
        let (_, cycle) = e.decomposition.as_ref().unwrap();
        let cert = Certificate::Z3PlusHam {
            cycle: cycle.clone(),
            z3: Z3Certificate::Z3Kernel { name: "(4^3,3^4)".to_string() },
        };
        let doc = CertificateDocument::new(cert.clone());
        let text = doc.to_json();
        let back = CertificateDocument::from_json(&text).unwrap();
        assert_eq!(back.schema_version, SCHEMA_VERSION);
        assert_eq!(back.certificate, cert);
    }
}
