//! Canonical state keys under small graph-automorphism groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::graph::{Graph, GraphFamily, Vertex};
use crate::rules::{AttackPolicy, GameState, Phase, Player};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryGroup {
    #[default]
    Identity,
    /// Permute the edges of a perfect matching and swap endpoints.
    MatchingEdges,
    /// Rotations and reflections of `cycle(n)` in its standard labeling.
    CycleDihedral,
}

impl SymmetryGroup {
    pub fn check_sound(self, graph: &Graph) -> Result<(), SolveError> {
        match self {
            SymmetryGroup::Identity => Ok(()),
            SymmetryGroup::MatchingEdges => {
                if graph.is_perfect_matching() {
                    Ok(())
                } else {
                    Err(SolveError::UnsoundSymmetry(format!(
                        "{self}: graph is not a perfect matching"
                    )))
                }
            }
            SymmetryGroup::CycleDihedral => {
                let n = graph.vertex_count();
                let ok = n >= 3
                    && GraphFamily::Cycle(n)
                        .generate()
                        .map(|c| c.edges() == graph.edges())
                        .unwrap_or(false);
                if ok {
                    Ok(())
                } else {
                    Err(SolveError::UnsoundSymmetry(format!(
                        "{self}: graph is not the standard cycle"
                    )))
                }
            }
        }
    }

    /// The natural group for a graph: matchings and standard cycles get their
    /// automorphism groups, everything else the identity.
    pub fn natural_for(graph: &Graph) -> Self {
        if SymmetryGroup::MatchingEdges.check_sound(graph).is_ok() {
            SymmetryGroup::MatchingEdges
        } else if SymmetryGroup::CycleDihedral.check_sound(graph).is_ok() {
            SymmetryGroup::CycleDihedral
        } else {
            SymmetryGroup::Identity
        }
    }

    /// Every group element as a vertex permutation. Matching groups grow as
    /// `m! * 2^m`; intended for small graphs and tests.
    pub fn elements(self, graph: &Graph) -> Result<Vec<Vec<Vertex>>, SolveError> {
        self.check_sound(graph)?;
        let n = graph.vertex_count();
        Ok(match self {
            SymmetryGroup::Identity => vec![(0..n).collect()],
            SymmetryGroup::CycleDihedral => dihedral_maps(n),
            SymmetryGroup::MatchingEdges => {
                let edges: Vec<(Vertex, Vertex)> = graph.edges().to_vec();
                let m = edges.len();
                let mut out = Vec::new();
                for order in permutations(m) {
                    for flips in 0u32..(1 << m) {
                        let mut perm = vec![0; n as usize];
                        for (i, &(a, b)) in edges.iter().enumerate() {
                            let (c, d) = edges[order[i]];
                            let (c, d) = if flips >> i & 1 == 1 { (d, c) } else { (c, d) };
                            perm[a as usize] = c;
                            perm[b as usize] = d;
                        }
                        out.push(perm);
                    }
                }
                out
            }
        })
    }
}

impl fmt::Display for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryGroup::Identity => "identity",
            SymmetryGroup::MatchingEdges => "matching_edges",
            SymmetryGroup::CycleDihedral => "cycle_dihedral",
        })
    }
}

impl FromStr for SymmetryGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" | "none" => Ok(SymmetryGroup::Identity),
            "matching_edges" | "matching" => Ok(SymmetryGroup::MatchingEdges),
            "cycle_dihedral" | "cycle" => Ok(SymmetryGroup::CycleDihedral),
            other => Err(format!("unknown symmetry group {other:?}")),
        }
    }
}

/// `v -> (r + s*v) mod n` for every rotation `r` and direction `s`.
pub(crate) fn dihedral_maps(n: u32) -> Vec<Vec<Vertex>> {
    let mut maps = Vec::with_capacity(2 * n as usize);
    for r in 0..n {
        maps.push((0..n).map(|v| (r + v) % n).collect());
        maps.push((0..n).map(|v| (r + n - v) % n).collect());
    }
    maps
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Opaque key identifying a state up to an admitted symmetry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Canonical key of `state` under `group`, rejecting unsound groups.
pub fn canonical_key(state: &GameState, group: SymmetryGroup) -> Result<CanonicalKey, SolveError> {
    group.check_sound(state.graph())?;
    Ok(key_unchecked(state, group))
}

/// Per-vertex content as a sortable pair: `(0,0)` empty, `(1,t)` Lata, `(2,t)` Raj.
#[inline]
pub(crate) fn content(state: &GameState, v: Vertex) -> (u8, u32) {
    match state.owner(v) {
        None => (0, 0),
        Some(Player::Lata) => (1, state.troops(v)),
        Some(Player::Raj) => (2, state.troops(v)),
    }
}

fn player_code(p: Option<Player>) -> u8 {
    match p {
        None => 0,
        Some(Player::Lata) => 1,
        Some(Player::Raj) => 2,
    }
}

fn header(state: &GameState, out: &mut Vec<u8>) {
    let config = state.config();
    out.push(match state.phase() {
        Phase::Placement => 0,
        Phase::Attack => 1,
        Phase::Terminal => 2,
    });
    out.push(player_code(Some(state.to_move())));
    out.push(player_code(state.first_passer()));
    out.push(state.placement_passes());
    out.push(state.attack_passes());
    out.push(match config.attack_policy {
        AttackPolicy::Mandatory => 0,
        AttackPolicy::Optional => 1,
    });
    out.extend_from_slice(&config.placement_cap.unwrap_or(0).to_le_bytes());
    out.extend_from_slice(&state.budget(Player::Lata).to_le_bytes());
    out.extend_from_slice(&state.budget(Player::Raj).to_le_bytes());
}

fn push_content(out: &mut Vec<u8>, c: (u8, u32)) {
    out.push(c.0);
    out.extend_from_slice(&c.1.to_le_bytes());
}

/// Key computation without the soundness check; callers validate the group once.
pub(crate) fn key_unchecked(state: &GameState, group: SymmetryGroup) -> CanonicalKey {
    let n = state.graph().vertex_count();
    let mut out = Vec::with_capacity(20 + 5 * n as usize);
    header(state, &mut out);
    match group {
        SymmetryGroup::Identity => {
            for v in 0..n {
                push_content(&mut out, content(state, v));
            }
        }
        SymmetryGroup::MatchingEdges => {
            let mut edges: Vec<[(u8, u32); 2]> = state
                .graph()
                .edges()
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (content(state, a), content(state, b));
                    if x <= y {
                        [x, y]
                    } else {
                        [y, x]
                    }
                })
                .collect();
            edges.sort_unstable();
            for [x, y] in edges {
                push_content(&mut out, x);
                push_content(&mut out, y);
            }
        }
        SymmetryGroup::CycleDihedral => {
            let base: Vec<(u8, u32)> = (0..n).map(|v| content(state, v)).collect();
            let mut best: Option<Vec<(u8, u32)>> = None;
            for r in 0..n {
                for dir in [1, n - 1] {
                    let seq: Vec<(u8, u32)> = (0..n)
                        .map(|i| base[((r + dir * i) % n) as usize])
                        .collect();
                    if best.as_ref().is_none_or(|b| seq < *b) {
                        best = Some(seq);
                    }
                }
            }
            for c in best.unwrap_or_default() {
                push_content(&mut out, c);
            }
        }
    }
    CanonicalKey(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{Move, RuleConfig};

    fn start(f: GraphFamily, t: u32) -> GameState {
        GameState::new(f.generate().unwrap(), t, t, RuleConfig::standard()).unwrap()
    }

    #[test]
    fn matching_edge_swap_gives_equal_keys() {
        let s = start(GraphFamily::Matching(2), 3);
        let a = s.replay(&[Move::place(0, 2), Move::place(1, 1)]).unwrap();
        let b = s.replay(&[Move::place(3, 2), Move::place(2, 1)]).unwrap();
        assert_eq!(
            canonical_key(&a, SymmetryGroup::MatchingEdges).unwrap(),
            canonical_key(&b, SymmetryGroup::MatchingEdges).unwrap()
        );
        assert_ne!(
            canonical_key(&a, SymmetryGroup::Identity).unwrap(),
            canonical_key(&b, SymmetryGroup::Identity).unwrap()
        );
    }

    #[test]
    fn cycle_rotation_gives_equal_keys() {
        let s = start(GraphFamily::Cycle(5), 4);
        let a = s.replay(&[Move::place(0, 2), Move::place(1, 3)]).unwrap();
        let b = s.replay(&[Move::place(1, 2), Move::place(2, 3)]).unwrap();
        let c = s.replay(&[Move::place(0, 2), Move::place(4, 3)]).unwrap();
        let ka = canonical_key(&a, SymmetryGroup::CycleDihedral).unwrap();
        assert_eq!(ka, canonical_key(&b, SymmetryGroup::CycleDihedral).unwrap());
        assert_eq!(ka, canonical_key(&c, SymmetryGroup::CycleDihedral).unwrap());
        assert_ne!(
            canonical_key(&a, SymmetryGroup::Identity).unwrap(),
            canonical_key(&b, SymmetryGroup::Identity).unwrap()
        );
    }

    #[test]
    fn identity_keys_separate_bookkeeping() {
        let s = start(GraphFamily::Matching(1), 1);
        let a = s.apply(Move::place(0, 1)).unwrap();
        let b = a.apply(Move::place(1, 1)).unwrap();
        let c = b.apply(Move::PassPlacement).unwrap();
        let keys: Vec<_> = [&s, &a, &b, &c]
            .iter()
            .map(|s| canonical_key(s, SymmetryGroup::Identity).unwrap())
            .collect();
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                assert_ne!(keys[i], keys[j]);
            }
        }
        let other_budget = GameState::new(
            GraphFamily::Matching(1).generate().unwrap(),
            2,
            1,
            RuleConfig::standard(),
        )
        .unwrap();
        assert_ne!(
            canonical_key(&s, SymmetryGroup::Identity).unwrap(),
            canonical_key(&other_budget, SymmetryGroup::Identity).unwrap()
        );
    }

    #[test]
    fn unsound_groups_rejected() {
        let p = start(GraphFamily::Path(4), 2);
        assert!(canonical_key(&p, SymmetryGroup::MatchingEdges).is_err());
        assert!(canonical_key(&p, SymmetryGroup::CycleDihedral).is_err());
        let m = start(GraphFamily::Matching(3), 2);
        assert!(canonical_key(&m, SymmetryGroup::CycleDihedral).is_err());
    }

    #[test]
    fn group_elements_are_automorphisms() {
        for f in [GraphFamily::Matching(3), GraphFamily::Cycle(6)] {
            let g = f.generate().unwrap();
            let group = SymmetryGroup::natural_for(&g);
            let elems = group.elements(&g).unwrap();
            assert!(elems.iter().all(|p| g.is_automorphism(p)));
            let expected = match f {
                GraphFamily::Matching(3) => 48,
                _ => 12,
            };
            assert_eq!(elems.len(), expected);
        }
    }
}
