//! Hard-coded kernel graphs with their claimed properties, Hamiltonian-cycle
//! decompositions, and lifting scripts.
//!
//! Every entry is a frozen constant: the edge list carries a checksum that is
//! recomputed at load time, so silent drift in a transcription turns into a
//! panic instead of a wrong ground truth. The S3 entries come in two styles:
//! small multigraph kernels established directly by the orientation oracle,
//! and larger graphs whose property reduces to a kernel either through a
//! lifting script or through a Z3-part-plus-Hamiltonian-cycle decomposition.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{contains_spanning, GraphError, HamCycleWitness, MultiGraph, VertexId};
use crate::sequences::DegreeSequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtlasError {
    #[error("unknown atlas key `{0}`")]
    UnknownKey(String),
    #[error("join family precondition violated: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Claim {
    S3Connected,
    Z3Connected,
}

/// An ordered list of lifting steps ending at a named kernel. When
/// `terminal_spanning` is set the replay result only needs to contain the
/// kernel as a spanning subgraph; otherwise it must be isomorphic to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftScript {
    pub steps: Vec<(VertexId, VertexId, VertexId)>,
    pub terminal: String,
    pub terminal_spanning: bool,
}

impl LiftScript {
    /// Applies every lift in order; errors if any precondition fails.
    pub fn replay(&self, g: &MultiGraph) -> Result<MultiGraph, GraphError> {
        let mut cur = g.clone();
        for &(u, v, w) in &self.steps {
            cur = cur.lift(u, v, w)?;
        }
        Ok(cur)
    }

    /// Replays and checks the terminal condition against the named kernel.
    pub fn validate(&self, g: &MultiGraph) -> Result<bool, AtlasError> {
        let terminal = self.replay(g)?;
        let kernel = &get_entry(&self.terminal)?.graph;
        Ok(if self.terminal_spanning {
            contains_spanning(&terminal, kernel)
        } else {
            crate::graph::is_isomorphic(&terminal, kernel)
        })
    }
}

#[derive(Debug, Clone)]
pub struct AtlasEntry {
    pub name: &'static str,
    pub graph: MultiGraph,
    pub claim: Claim,
    /// Solid Z3-connected part plus dashed Hamiltonian cycle, when the entry
    /// is established that way.
    pub decomposition: Option<(MultiGraph, HamCycleWitness)>,
    pub script: Option<LiftScript>,
    pub checksum: u64,
}

fn fnv1a64(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn edge_list_checksum(g: &MultiGraph) -> u64 {
    fnv1a64(g.to_edge_list_text().as_bytes())
}

struct EntrySpec {
    name: &'static str,
    claim: Claim,
    solid: &'static [(VertexId, VertexId)],
    dashed_cycle: &'static [VertexId],
    script: Option<(&'static [(VertexId, VertexId, VertexId)], &'static str)>,
    checksum: u64,
}

const K133_EDGES: &[(VertexId, VertexId)] =
    &[(1, 2), (1, 3), (1, 3), (1, 3), (2, 3), (2, 3), (2, 3)];
const K4STAR_EDGES: &[(VertexId, VertexId)] = &[
    (1, 3), (2, 4), (1, 2), (1, 2), (2, 3), (2, 3), (3, 4), (3, 4), (1, 4), (1, 4),
];
const W4_EDGES: &[(VertexId, VertexId)] =
    &[(1, 2), (2, 3), (3, 4), (1, 4), (1, 5), (2, 5), (3, 5), (4, 5)];
const Z3_4333: &[(VertexId, VertexId)] = &[
    (1, 2), (1, 4), (1, 7), (2, 3), (2, 7), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 7), (6, 7),
];
const Z3_4434: &[(VertexId, VertexId)] = &[
    (1, 2), (1, 4), (1, 5), (1, 8), (2, 3), (2, 4), (2, 8), (3, 4), (3, 6), (3, 7), (4, 5), (5, 6),
    (6, 7), (7, 8),
];
const Z3_54235: &[(VertexId, VertexId)] = &[
    (1, 2), (1, 4), (1, 6), (1, 7), (1, 8), (2, 3), (2, 4), (2, 6), (3, 4), (3, 5), (4, 5), (5, 8),
    (6, 7), (7, 8),
];
const Z3_5236: &[(VertexId, VertexId)] = &[
    (1, 2), (1, 4), (1, 7), (2, 3), (2, 7), (3, 4), (3, 7), (4, 5), (4, 6), (4, 8), (5, 6), (5, 8),
    (6, 7), (7, 8),
];
const Z3_4534: &[(VertexId, VertexId)] = &[
    (1, 2), (1, 4), (1, 8), (2, 3), (2, 7), (3, 4), (3, 6), (4, 5), (5, 6), (5, 8), (5, 9), (6, 7),
    (6, 9), (7, 8), (7, 9), (8, 9),
];
const FIG4_COMMON_K4: &[(VertexId, VertexId)] = &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

fn fig4_apex_edges(apexes: &[(VertexId, &[VertexId])]) -> Vec<(VertexId, VertexId)> {
    let mut edges: Vec<(VertexId, VertexId)> = FIG4_COMMON_K4.to_vec();
    for &(a, nbrs) in apexes {
        for &b in nbrs {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges
}

const ENTRIES: &[EntrySpec] = &[
    EntrySpec {
        name: "K(1,3,3)",
        claim: Claim::S3Connected,
        solid: K133_EDGES,
        dashed_cycle: &[],
        script: None,
        checksum: 0x6876f00ba0b3aa1b,
    },
    EntrySpec {
        name: "K4*",
        claim: Claim::S3Connected,
        solid: K4STAR_EDGES,
        dashed_cycle: &[],
        script: None,
        checksum: 0x01a2ffeda2c26771,
    },
    EntrySpec {
        name: "W4",
        claim: Claim::Z3Connected,
        solid: W4_EDGES,
        dashed_cycle: &[],
        script: None,
        checksum: 0x3987a4bf62e90349,
    },
    EntrySpec {
        name: "(4^3,3^4)",
        claim: Claim::Z3Connected,
        solid: Z3_4333,
        dashed_cycle: &[],
        script: None,
        checksum: 0xbf744aa6ef8143c9,
    },
    EntrySpec {
        name: "(4^4,3^4)",
        claim: Claim::Z3Connected,
        solid: Z3_4434,
        dashed_cycle: &[],
        script: None,
        checksum: 0xa5ecf4859073b99d,
    },
    EntrySpec {
        name: "(5,4^2,3^5)",
        claim: Claim::Z3Connected,
        solid: Z3_54235,
        dashed_cycle: &[],
        script: None,
        checksum: 0xa186ce5fb31c1003,
    },
    EntrySpec {
        name: "(5^2,3^6)",
        claim: Claim::Z3Connected,
        solid: Z3_5236,
        dashed_cycle: &[],
        script: None,
        checksum: 0x8baa9cc150a1079d,
    },
    EntrySpec {
        name: "(4^5,3^4)",
        claim: Claim::Z3Connected,
        solid: Z3_4534,
        dashed_cycle: &[],
        script: None,
        checksum: 0x903ec3418b6abcb1,
    },
    EntrySpec {
        name: "(6^3,5^4)",
        claim: Claim::S3Connected,
        solid: Z3_4333,
        dashed_cycle: &[1, 3, 7, 4, 2, 5, 6],
        script: None,
        checksum: 0x8d2cdf821e6778e3,
    },
    EntrySpec {
        name: "(6^4,5^4)",
        claim: Claim::S3Connected,
        solid: Z3_4434,
        dashed_cycle: &[1, 6, 4, 8, 3, 5, 2, 7],
        script: None,
        checksum: 0xa2b9319c36beab35,
    },
    EntrySpec {
        name: "(7,6^2,5^5)",
        claim: Claim::S3Connected,
        solid: Z3_54235,
        dashed_cycle: &[1, 3, 8, 6, 4, 7, 2, 5],
        script: None,
        checksum: 0x27c8d5d258f9e3df,
    },
    EntrySpec {
        name: "(7^2,5^6)",
        claim: Claim::S3Connected,
        solid: Z3_5236,
        dashed_cycle: &[1, 5, 7, 4, 2, 6, 3, 8],
        script: None,
        checksum: 0x45f127672fec3cf5,
    },
    EntrySpec {
        name: "(6^5,5^4)",
        claim: Claim::S3Connected,
        solid: Z3_4534,
        dashed_cycle: &[1, 3, 8, 6, 2, 9, 4, 7, 5],
        script: None,
        checksum: 0x9081187e075872f7,
    },
    EntrySpec {
        name: "(7^4,4^4)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((&[(5, 3, 4), (6, 2, 3), (7, 1, 2), (8, 1, 4)], "K4*")),
        checksum: 0xbfc0b65fb7fc42d1,
    },
    EntrySpec {
        name: "(7^3,6,5,4^3)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((&[(5, 1, 4), (6, 3, 4), (7, 2, 3), (8, 1, 2)], "K4*")),
        checksum: 0x176cb298eed91de1,
    },
    EntrySpec {
        name: "(7^3,5^3,4^2)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((&[(7, 1, 2), (8, 2, 3), (5, 3, 4), (6, 1, 4)], "K4*")),
        checksum: 0xda092f9127b1010e,
    },
    EntrySpec {
        name: "(7^2,6^3,4^3)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((&[(5, 1, 4), (7, 2, 3), (8, 1, 2), (6, 3, 4)], "K4*")),
        checksum: 0x0012eda3a01e6a5e,
    },
    EntrySpec {
        name: "(8^3,5^2,4^4)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((
            &[(9, 3, 6), (5, 3, 4), (8, 1, 4), (7, 1, 2), (6, 2, 3)],
            "K4*",
        )),
        checksum: 0x49dd9a88044e9589,
    },
    EntrySpec {
        name: "(8^3,6,4^5)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((
            &[(6, 3, 7), (9, 3, 4), (5, 1, 4), (8, 1, 2), (7, 2, 3)],
            "K4*",
        )),
        checksum: 0x6ae4016214b7c5d3,
    },
    EntrySpec {
        name: "(9^3,5,4^6)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((
            &[(10, 2, 7), (8, 1, 5), (9, 3, 4), (6, 1, 4), (5, 1, 2), (7, 2, 3)],
            "K4*",
        )),
        checksum: 0x9086f54b75699903,
    },
    EntrySpec {
        name: "(10^3,4^8)",
        claim: Claim::S3Connected,
        solid: &[],
        dashed_cycle: &[],
        script: Some((
            &[
                (4, 1, 5), (5, 2, 3), (6, 1, 7), (7, 2, 3), (8, 2, 9), (9, 1, 2), (10, 2, 11),
                (11, 1, 2),
            ],
            "K(1,3,3)",
        )),
        checksum: 0x68a1254f15a20557,
    },
];

/// Edge lists for the script entries: three or four dominating vertices
/// joined to everything, plus a sparse remainder.
fn script_entry_edges(name: &str) -> Vec<(VertexId, VertexId)> {
    match name {
        "(7^4,4^4)" => fig4_apex_edges(&[
            (5, &[1, 2, 3, 4]),
            (6, &[1, 2, 3, 4]),
            (7, &[1, 2, 3, 4]),
            (8, &[1, 2, 3, 4]),
        ]),
        "(7^3,6,5,4^3)" => fig4_apex_edges(&[
            (5, &[1, 2, 3, 4]),
            (6, &[1, 2, 3, 4]),
            (7, &[1, 2, 3, 8]),
            (8, &[1, 2, 3, 4]),
        ]),
        "(7^3,5^3,4^2)" => fig4_apex_edges(&[
            (5, &[1, 2, 3, 4, 8]),
            (6, &[1, 2, 3, 4, 7]),
            (7, &[1, 2, 3]),
            (8, &[1, 2, 3]),
        ]),
        "(7^2,6^3,4^3)" => fig4_apex_edges(&[
            (5, &[1, 2, 3, 4]),
            (6, &[1, 2, 3, 4, 7, 8]),
            (7, &[1, 2, 3]),
            (8, &[1, 2, 4]),
        ]),
        "(8^3,5^2,4^4)" => {
            let mut e = Vec::new();
            for hub in 1..=3u32 {
                for v in hub + 1..=9 {
                    e.push((hub, v));
                }
            }
            e.extend([(4, 5), (4, 8), (6, 7), (6, 9)]);
            e
        }
        "(8^3,6,4^5)" => {
            let mut e = Vec::new();
            for hub in 1..=3u32 {
                for v in hub + 1..=9 {
                    e.push((hub, v));
                }
            }
            e.extend([(4, 5), (4, 8), (4, 9), (6, 7)]);
            e
        }
        "(9^3,5,4^6)" => {
            let mut e = Vec::new();
            for hub in 1..=3u32 {
                for v in hub + 1..=10 {
                    e.push((hub, v));
                }
            }
            e.extend([(4, 6), (4, 9), (5, 8), (7, 10)]);
            e
        }
        "(10^3,4^8)" => {
            let mut e = Vec::new();
            for hub in 1..=3u32 {
                for v in hub + 1..=11 {
                    e.push((hub, v));
                }
            }
            e.extend([(4, 5), (6, 7), (8, 9), (10, 11)]);
            e
        }
        _ => unreachable!("not a script entry"),
    }
}

fn build_entry(spec: &EntrySpec) -> AtlasEntry {
    let (graph, decomposition) = if spec.script.is_some() {
        (
            MultiGraph::from_edge_list(&script_entry_edges(spec.name)).expect("atlas edge list"),
            None,
        )
    } else if spec.dashed_cycle.is_empty() {
        (MultiGraph::from_edge_list(spec.solid).expect("atlas edge list"), None)
    } else {
        let solid = MultiGraph::from_edge_list(spec.solid).expect("atlas edge list");
        let cycle = HamCycleWitness { order: spec.dashed_cycle.to_vec() };
        let mut graph = solid.clone();
        for (u, v) in cycle.edges() {
            graph.add_edge(u, v).expect("atlas cycle edge");
        }
        (graph, Some((solid, cycle)))
    };
    let checksum = edge_list_checksum(&graph);
    assert_eq!(
        checksum, spec.checksum,
        "atlas entry {} drifted from its frozen checksum",
        spec.name
    );
    AtlasEntry {
        name: spec.name,
        graph,
        claim: spec.claim,
        decomposition,
        script: spec.script.map(|(steps, terminal)| LiftScript {
            steps: steps.to_vec(),
            terminal: terminal.to_string(),
            terminal_spanning: false,
        }),
        checksum,
    }
}

fn table() -> &'static BTreeMap<&'static str, AtlasEntry> {
    static TABLE: OnceLock<BTreeMap<&'static str, AtlasEntry>> = OnceLock::new();
    TABLE.get_or_init(|| ENTRIES.iter().map(|s| (s.name, build_entry(s))).collect())
}

pub fn get_entry(name: &str) -> Result<&'static AtlasEntry, AtlasError> {
    table().get(name).ok_or_else(|| AtlasError::UnknownKey(name.to_string()))
}

/// All entry names in declaration order (Figures 1 through 5).
pub fn list_entries() -> Vec<&'static str> {
    ENTRIES.iter().map(|s| s.name).collect()
}

/// Looks up a Z3-claimed entry whose degree sequence equals `seq`.
pub fn z3_entry_for_sequence(seq: &DegreeSequence) -> Option<&'static AtlasEntry> {
    ENTRIES
        .iter()
        .filter(|s| s.claim == Claim::Z3Connected)
        .map(|s| get_entry(s.name).unwrap())
        .find(|e| &e.graph.degree_sequence() == seq)
}

/// Looks up an S3-claimed entry whose degree sequence equals `seq`.
pub fn s3_entry_for_sequence(seq: &DegreeSequence) -> Option<&'static AtlasEntry> {
    ENTRIES
        .iter()
        .filter(|s| s.claim == Claim::S3Connected)
        .map(|s| get_entry(s.name).unwrap())
        .find(|e| &e.graph.degree_sequence() == seq)
}

/// Builds the hub-and-cycles join realization of ((n-1)^2, d3, 4^{n-3})
/// together with the lifting script that reduces it to a three-vertex
/// multigraph spanned by K(1,3,3).
///
/// Vertex layout: 1 and 2 are the joined pair, 3 is the cycle hub, and
/// 4..=n are the cycle vertices. Cycles have length 2 except the last,
/// which absorbs the remainder.
pub fn build_join_family(n: u32, d3: u32) -> Result<(MultiGraph, LiftScript), AtlasError> {
    if d3 % 2 != 0 || d3 < 10 || d3 > n - 1 {
        return Err(AtlasError::Precondition("need even d3 with 10 <= d3 <= n-1"));
    }
    if n - 3 < d3 - 2 {
        return Err(AtlasError::Precondition("need n-3 >= d3-2 cycle vertices"));
    }
    let seq = {
        let mut v = vec![n - 1, n - 1, d3];
        v.extend(std::iter::repeat(4).take((n - 3) as usize));
        DegreeSequence::new(v).expect("nonempty")
    };
    if !seq.is_graphic() {
        return Err(AtlasError::Precondition("((n-1)^2, d3, 4^{n-3}) must be graphic"));
    }
    let d = (d3 - 2) / 2; // number of cycles through the hub
    let hub: VertexId = 3;
    let (u1, u2): (VertexId, VertexId) = (1, 2);
    // cycle i (1-based) owns n_i vertices; all but the last have length 2
    let mut cycles: Vec<Vec<VertexId>> = Vec::new();
    let mut next: VertexId = 4;
    for i in 1..=d {
        let len = if i < d { 2 } else { n - 3 - 2 * (d - 1) };
        let verts: Vec<VertexId> = (next..next + len).collect();
        next += len;
        cycles.push(verts);
    }
    debug_assert_eq!(next, n + 1);
    let mut g = MultiGraph::new();
    for v in 1..=n {
        g.add_vertex(v);
    }
    for cyc in &cycles {
        g.add_edge(hub, cyc[0])?;
        for w in cyc.windows(2) {
            g.add_edge(w[0], w[1])?;
        }
        g.add_edge(*cyc.last().unwrap(), hub)?;
    }
    // join K2 = {1, 2} to the hub-and-cycles graph
    g.add_edge(u1, u2)?;
    for v in 3..=n {
        g.add_edge(u1, v)?;
        g.add_edge(u2, v)?;
    }
    debug_assert_eq!(g.degree_sequence(), seq);
    // script: sweep each cycle toward the hub, ending at u1 for the first
    // floor((d3-2)/4) cycles and at u2 for the rest
    let p = (d3 - 2) / 4;
    let mut steps = Vec::new();
    for (i, cyc) in cycles.iter().enumerate() {
        let target = if (i as u32) < p { u1 } else { u2 };
        for j in 0..cyc.len() {
            let next_stop = if j + 1 < cyc.len() { cyc[j + 1] } else { target };
            steps.push((cyc[j], hub, next_stop));
        }
    }
    let script = LiftScript {
        steps,
        terminal: "K(1,3,3)".to_string(),
        terminal_spanning: true,
    };
    Ok((g, script))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_reproduce_their_named_sequences() {
        for name in list_entries() {
            let e = get_entry(name).unwrap();
            if name.starts_with('(') {
                let seq = DegreeSequence::parse(&name[1..name.len() - 1]).unwrap();
                assert_eq!(e.graph.degree_sequence(), seq, "entry {name}");
            }
        }
        assert_eq!(get_entry("K4*").unwrap().graph.degree_sequence().degrees(), &[5; 4]);
        assert_eq!(
            get_entry("K(1,3,3)").unwrap().graph.degree_sequence().degrees(),
            &[6, 4, 4]
        );
        assert_eq!(get_entry("W4").unwrap().graph.degree_sequence().degrees(), &[4, 3, 3, 3, 3]);
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(get_entry("K9*"), Err(AtlasError::UnknownKey(_))));
    }

    #[test]
    fn listing_contains_expected_names() {
        let names = list_entries();
        assert!(!names.is_empty());
        for want in [
            "W4", "K(1,3,3)", "K4*", "(4^5,3^4)", "(4^3,3^4)", "(4^4,3^4)", "(5,4^2,3^5)",
            "(5^2,3^6)", "(6^3,5^4)", "(6^4,5^4)", "(7,6^2,5^5)", "(7^2,5^6)", "(6^5,5^4)",
        ] {
            assert!(names.contains(&want), "missing {want}");
        }
        let fig4 = [
            "(7^4,4^4)", "(7^3,6,5,4^3)", "(7^3,5^3,4^2)", "(7^2,6^3,4^3)", "(8^3,5^2,4^4)",
            "(8^3,6,4^5)", "(9^3,5,4^6)", "(10^3,4^8)",
        ];
        for want in fig4 {
            assert!(names.contains(&want), "missing {want}");
        }
    }

    #[test]
    fn scripts_replay_to_their_kernels() {
        for name in list_entries() {
            let e = get_entry(name).unwrap();
            if let Some(script) = &e.script {
                assert!(script.validate(&e.graph).unwrap(), "script for {name}");
            }
        }
    }

    #[test]
    fn decompositions_are_exact_partitions() {
        for name in list_entries() {
            let e = get_entry(name).unwrap();
            if let Some((solid, cycle)) = &e.decomposition {
                assert!(cycle.validate(&e.graph), "cycle of {name}");
                // solid + cycle = entry graph, edge-disjoint
                let mut rebuilt = solid.clone();
                for (u, v) in cycle.edges() {
                    assert!(!solid.has_edge(u, v), "overlap in {name}");
                    rebuilt.add_edge(u, v).unwrap();
                }
                assert_eq!(&rebuilt, &e.graph, "partition of {name}");
            }
        }
    }

    #[test]
    fn join_family_produces_named_sequence_and_kernel() {
        for (n, d3) in [(13u32, 10u32), (13, 12), (14, 10), (20, 14), (16, 12)] {
            let (g, script) = build_join_family(n, d3).unwrap();
            let mut want = vec![n - 1, n - 1, d3];
            want.extend(std::iter::repeat(4).take((n - 3) as usize));
            assert_eq!(g.degree_sequence(), DegreeSequence::new(want).unwrap());
            let terminal = script.replay(&g).unwrap();
            assert_eq!(terminal.vertex_count(), 3);
            assert_eq!(terminal.multiplicity(3, 1), (d3 - 2) / 4 + 1);
            assert_eq!(terminal.multiplicity(3, 2), (d3 - 2) / 2 - (d3 - 2) / 4 + 1);
            assert_eq!(terminal.multiplicity(1, 2), 1);
            assert!(script.validate(&g).unwrap());
        }
    }

    #[test]
    fn join_family_rejects_bad_parameters() {
        assert!(build_join_family(13, 9).is_err()); // odd
        assert!(build_join_family(13, 8).is_err()); // too small
        assert!(build_join_family(10, 10).is_err()); // d3 > n-1
    }
}
