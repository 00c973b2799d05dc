//! Undirected simple graphs and the board families used throughout the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type Vertex = u32;

/// An undirected simple graph over dense vertex ids `0..vertex_count`.
///
/// Edges are stored normalized (`u < v`) and sorted, so two graphs with the
/// same edge set compare equal regardless of construction order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct Graph {
    vertex_count: u32,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
}

/// Wire form: `{"vertices": N, "edges": [[u, v], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    vertices: u32,
    edges: Vec<(Vertex, Vertex)>,
}

impl TryFrom<GraphDoc> for Graph {
    type Error = GraphError;

    fn try_from(doc: GraphDoc) -> Result<Self, Self::Error> {
        Graph::new(doc.vertices, &doc.edges)
    }
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> Self {
        GraphDoc {
            vertices: g.vertex_count,
            edges: g.edges,
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range ids and duplicate edges.
    pub fn new(vertex_count: u32, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (position, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(GraphError::SelfLoop { position, vertex: a });
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(GraphError::OutOfRange {
                    position,
                    vertex: a.max(b),
                    vertex_count,
                });
            }
            normalized.push((a.min(b), a.max(b)));
        }
        let mut sorted = normalized.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                let position = normalized.iter().rposition(|e| *e == pair[0]).unwrap_or(0);
                return Err(GraphError::DuplicateEdge {
                    position,
                    edge: pair[0],
                });
            }
        }
        let mut adjacency = vec![Vec::new(); vertex_count as usize];
        for &(a, b) in &sorted {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges: sorted,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn len(&self) -> usize {
        self.vertex_count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// N(v), sorted ascending.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adjacency
            .get(a as usize)
            .is_some_and(|n| n.binary_search(&b).is_ok())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.vertex_count
    }

    /// Image of the graph under the vertex permutation `perm` (`v -> perm[v]`).
    pub fn relabeled(&self, perm: &[Vertex]) -> Self {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
            .collect();
        Graph::new(self.vertex_count, &edges).expect("permutation preserves simplicity")
    }

    /// Whether `perm` maps the edge set onto itself.
    pub fn is_automorphism(&self, perm: &[Vertex]) -> bool {
        perm.len() == self.len()
            && self
                .edges
                .iter()
                .all(|&(a, b)| self.has_edge(perm[a as usize], perm[b as usize]))
    }

    /// Two-colouring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.len()];
        for start in self.vertices() {
            if side[start as usize].is_some() {
                continue;
            }
            side[start as usize] = Some(false);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let s = side[v as usize].unwrap();
                for &u in self.neighbors(v) {
                    match side[u as usize] {
                        None => {
                            side[u as usize] = Some(!s);
                            stack.push(u);
                        }
                        Some(t) if t == s => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
    }

    /// For a perfect matching, the other endpoint of `v`'s edge.
    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        match self.neighbors(v) {
            [u] => Some(*u),
            _ => None,
        }
    }

    /// True when every vertex has degree exactly one.
    pub fn is_perfect_matching(&self) -> bool {
        self.vertex_count > 0 && self.vertices().all(|v| self.degree(v) == 1)
    }
}

/// Board families discussed for the game, with a fixed labeling:
///
/// * `matching(m)`: edges `(2i, 2i+1)`, so `u_i = 2i` and `v_i = 2i+1`;
/// * `cycle(n)`: edges `(i, i+1 mod n)`;
/// * `path(n)`: edges `(i, i+1)`;
/// * `complete(n)`: all pairs;
/// * `star(n)`: center `0` adjacent to `1..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "size", rename_all = "snake_case")]
pub enum GraphFamily {
    Matching(u32),
    Cycle(u32),
    Path(u32),
    Complete(u32),
    Star(u32),
}

impl GraphFamily {
    pub fn generate(self) -> Result<Graph, GraphError> {
        let edges: Vec<(Vertex, Vertex)> = match self {
            GraphFamily::Matching(m) => {
                check_positive(self, m)?;
                (0..m).map(|i| (2 * i, 2 * i + 1)).collect()
            }
            GraphFamily::Cycle(n) => {
                if n < 3 {
                    return Err(GraphError::BadFamily(format!(
                        "cycle needs at least 3 vertices, got {n}"
                    )));
                }
                (0..n).map(|i| (i, (i + 1) % n)).collect()
            }
            GraphFamily::Path(n) => {
                check_positive(self, n)?;
                (1..n).map(|i| (i - 1, i)).collect()
            }
            GraphFamily::Complete(n) => {
                check_positive(self, n)?;
                (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .collect()
            }
            GraphFamily::Star(n) => {
                check_positive(self, n)?;
                (1..n).map(|i| (0, i)).collect()
            }
        };
        Graph::new(self.vertex_count(), &edges)
    }

    pub fn vertex_count(self) -> u32 {
        match self {
            GraphFamily::Matching(m) => 2 * m,
            GraphFamily::Cycle(n)
            | GraphFamily::Path(n)
            | GraphFamily::Complete(n)
            | GraphFamily::Star(n) => n,
        }
    }
}

fn check_positive(family: GraphFamily, size: u32) -> Result<(), GraphError> {
    if size == 0 {
        Err(GraphError::BadFamily(format!("{family} needs a positive size")))
    } else {
        Ok(())
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Matching(m) => write!(f, "matching:{m}"),
            GraphFamily::Cycle(n) => write!(f, "cycle:{n}"),
            GraphFamily::Path(n) => write!(f, "path:{n}"),
            GraphFamily::Complete(n) => write!(f, "complete:{n}"),
            GraphFamily::Star(n) => write!(f, "star:{n}"),
        }
    }
}

/// Parses `matching:3`, `cycle:5`, `path:4`, `complete:3`, `star:6`.
impl FromStr for GraphFamily {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, size) = s
            .split_once(':')
            .ok_or_else(|| GraphError::BadFamily(format!("expected <family>:<size>, got {s:?}")))?;
        let size: u32 = size
            .trim()
            .parse()
            .map_err(|_| GraphError::BadFamily(format!("bad size in {s:?}")))?;
        match name.trim() {
            "matching" => Ok(GraphFamily::Matching(size)),
            "cycle" => Ok(GraphFamily::Cycle(size)),
            "path" => Ok(GraphFamily::Path(size)),
            "complete" => Ok(GraphFamily::Complete(size)),
            "star" => Ok(GraphFamily::Star(size)),
            other => Err(GraphError::BadFamily(format!("unknown family {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_three_is_three_disjoint_edges() {
        let g = GraphFamily::Matching(3).generate().unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edges(), &[(0, 1), (2, 3), (4, 5)]);
        assert!(g.is_perfect_matching());
        assert_eq!(g.partner(4), Some(5));
    }

    #[test]
    fn cycle_five_labels() {
        let g = GraphFamily::Cycle(5).generate().unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.neighbors(0), &[1, 4]);
        assert_eq!(g.edges().len(), 5);
        assert!(GraphFamily::Cycle(2).generate().is_err());
    }

    #[test]
    fn degenerate_star_is_single_vertex() {
        let g = GraphFamily::Star(1).generate().unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(
            Graph::new(2, &[(0, 0)]),
            Err(GraphError::SelfLoop { .. })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { position: 1, .. })
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::OutOfRange { .. })
        ));
    }

    #[test]
    fn degree_bounds_for_families() {
        for n in 3..8 {
            let c = GraphFamily::Cycle(n).generate().unwrap();
            let p = GraphFamily::Path(n).generate().unwrap();
            assert!(c.vertices().all(|v| c.degree(v) == 2));
            assert!(p.vertices().all(|v| p.degree(v) <= 2));
        }
        let k4 = GraphFamily::Complete(4).generate().unwrap();
        assert_eq!(k4.edges().len(), 6);
    }

    #[test]
    fn family_parse_roundtrip() {
        for f in [
            GraphFamily::Matching(2),
            GraphFamily::Cycle(5),
            GraphFamily::Path(7),
            GraphFamily::Complete(3),
            GraphFamily::Star(4),
        ] {
            assert_eq!(f.to_string().parse::<GraphFamily>().unwrap(), f);
        }
        assert!("hexagon:3".parse::<GraphFamily>().is_err());
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        assert!(GraphFamily::Cycle(4).generate().unwrap().bipartition().is_some());
        assert!(GraphFamily::Cycle(5).generate().unwrap().bipartition().is_none());
    }
}
