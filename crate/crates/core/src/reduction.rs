//! From Multi-Colored Clique to the attack-phase response problem.
//!
//! For a colored graph with `k` classes of size `n` and `m` edges, the board
//! has one Raj vertex `u_{i,j}` (m troops) per input vertex, one Lata vertex
//! `w_e` (1 troop) per edge joined to both endpoint images, one guard `g_i`
//! (m+1 troops) joined to all of class `i`, and `(n-1)k - C(k,2) + 1`
//! isolated Lata vertices `z_t` (1 troop). Raj plans to attack the guards,
//! then every `w_e`. Lata can beat that plan exactly when the colored graph
//! has a clique with one vertex per class.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::ReductionError;
use crate::graph::{Graph, Vertex};
use crate::response::{ORInstance, TauEntry};

/// Input to the reduction: vertices `0..k*n`, partitioned into `k` classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredGraph {
    pub k: u32,
    pub n: u32,
    pub classes: Vec<Vec<Vertex>>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl ColoredGraph {
    /// Classes are consecutive id blocks: class `i` is `i*n..(i+1)*n`.
    pub fn blocks(k: u32, n: u32, edges: Vec<(Vertex, Vertex)>) -> Self {
        let classes = (0..k).map(|i| (i * n..(i + 1) * n).collect()).collect();
        Self {
            k,
            n,
            classes,
            edges,
        }
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        let bad = |msg: String| Err(ReductionError::InvalidInput(msg));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.classes.len() != self.k as usize {
            return bad(format!("{} classes listed, k = {}", self.classes.len(), self.k));
        }
        let total = self.k * self.n;
        let mut class_of = vec![None; total as usize];
        for (i, class) in self.classes.iter().enumerate() {
            if class.len() != self.n as usize {
                return bad(format!("class {i} has {} vertices, n = {}", class.len(), self.n));
            }
            for &v in class {
                if v >= total {
                    return bad(format!("vertex {v} out of range 0..{total}"));
                }
                if class_of[v as usize].replace(i).is_some() {
                    return bad(format!("vertex {v} appears in two classes"));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for (pos, &(a, b)) in self.edges.iter().enumerate() {
            if a >= total || b >= total {
                return bad(format!("edge #{pos} ({a}, {b}) out of range"));
            }
            if a == b {
                return bad(format!("edge #{pos} is a self-loop"));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return bad(format!("edge #{pos} ({a}, {b}) is repeated"));
            }
        }
        Ok(())
    }

    /// `(class, index)` of every vertex.
    fn positions(&self) -> Vec<(u32, u32)> {
        let mut pos = vec![(0, 0); (self.k * self.n) as usize];
        for (i, class) in self.classes.iter().enumerate() {
            for (j, &v) in class.iter().enumerate() {
                pos[v as usize] = (i as u32, j as u32);
            }
        }
        pos
    }

    fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.edges
            .iter()
            .any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub k: u32,
    pub n: u32,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOutput {
    pub instance: ORInstance,
    /// `u_{i,j}`, `w_{t}`, `g_{i}`, `z_{t}` (1-based) to vertex ids.
    pub name_map: BTreeMap<String, Vertex>,
    pub params: ReductionParams,
    /// Board vertex `u_{i,j}` of each input vertex, indexed by input id.
    pub u_image: Vec<Vertex>,
}

fn choose2(k: u32) -> u32 {
    k * k.saturating_sub(1) / 2
}

/// Number of isolated Lata vertices: `(n-1)k - C(k,2) + 1`.
pub fn z_count(k: u32, n: u32) -> u32 {
    (n - 1) * k + 1 - choose2(k)
}

/// `T_L = k(m+1) + m + (n-1)k - C(k,2) + 1`.
pub fn lata_budget(p: ReductionParams) -> u32 {
    p.k * (p.m + 1) + p.m + z_count(p.k, p.n)
}

/// `T_R = mnk`.
pub fn raj_budget(p: ReductionParams) -> u32 {
    p.m * p.n * p.k
}

impl ReductionOutput {
    pub fn tau_for_clique(&self, clique: &[Vertex]) -> Vec<TauEntry> {
        let mut images: Vec<Vertex> = clique.iter().map(|&v| self.u_image[v as usize]).collect();
        images.sort_unstable();
        images.into_iter().map(TauEntry::Attack).collect()
    }
}

pub fn reduce_mcc(g: &ColoredGraph) -> Result<ReductionOutput, ReductionError> {
    reduce_mcc_with(g, false)
}

/// With `equalize`, the `z` vertices are joined to `g_1` (making the board
/// connected when every class is) and `z_1` carries the extra troops that
/// bring Lata's total up to Raj's. Territories are unchanged and Lata still
/// trails on troops in every territorial tie, so the answer is unchanged.
pub fn reduce_mcc_with(g: &ColoredGraph, equalize: bool) -> Result<ReductionOutput, ReductionError> {
    g.validate()?;
    let (k, n) = (g.k, g.n);
    if n <= k + 2 {
        return Err(ReductionError::ClassesTooSmall { k, n });
    }
    let m = g.edges.len() as u32;
    let params = ReductionParams { k, n, m };
    let zs = z_count(k, n);
    let u = |i: u32, j: u32| i * n + j;
    let w = |t: u32| k * n + t;
    let guard = |i: u32| k * n + m + i;
    let z = |t: u32| k * n + m + k + t;
    let total = k * n + m + k + zs;

    let pos = g.positions();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..n {
            edges.push((guard(i), u(i, j)));
        }
    }
    for (t, &(a, b)) in g.edges.iter().enumerate() {
        let (ia, ja) = pos[a as usize];
        let (ib, jb) = pos[b as usize];
        edges.push((w(t as u32), u(ia, ja)));
        edges.push((w(t as u32), u(ib, jb)));
    }
    if equalize {
        for t in 0..zs {
            edges.push((guard(0), z(t)));
        }
    }
    let graph = Graph::new(total, &edges).map_err(|e| ReductionError::InvalidInput(e.to_string()))?;

    let mut f1 = BTreeMap::new();
    let mut f2 = BTreeMap::new();
    let mut names = BTreeMap::new();
    for i in 0..k {
        for j in 0..n {
            f2.insert(u(i, j), m);
            names.insert(format!("u_{{{},{}}}", i + 1, j + 1), u(i, j));
        }
    }
    for t in 0..m {
        f1.insert(w(t), 1);
        names.insert(format!("w_{{{}}}", t + 1), w(t));
    }
    for i in 0..k {
        f1.insert(guard(i), m + 1);
        names.insert(format!("g_{{{}}}", i + 1), guard(i));
    }
    for t in 0..zs {
        f1.insert(z(t), 1);
        names.insert(format!("z_{{{}}}", t + 1), z(t));
    }
    // With m = 0 Raj's vertices would carry no troops at all.
    f2.retain(|_, c| *c > 0);
    if equalize {
        let (tl, tr) = (lata_budget(params), raj_budget(params));
        if tl > tr {
            return Err(ReductionError::Equalize(format!(
                "Lata already has {tl} troops against Raj's {tr}"
            )));
        }
        *f1.entry(z(0)).or_insert(0) += tr - tl;
    }
    let sigma = (0..k).map(guard).chain((0..m).map(w)).collect();
    let u_image = pos.iter().map(|&(i, j)| u(i, j)).collect();
    Ok(ReductionOutput {
        instance: ORInstance {
            graph,
            f1,
            f2,
            sigma,
        },
        name_map: names,
        params,
        u_image,
    })
}

/// Default cap on candidate sets for [`brute_force_mcc`].
pub const MCC_LIMIT: u128 = 100_000_000;

/// Some multicolored clique (one vertex per class, in class order), by
/// trying every choice.
pub fn brute_force_mcc(g: &ColoredGraph) -> Result<Option<Vec<Vertex>>, ReductionError> {
    g.validate()?;
    let candidates = u128::from(g.n).pow(g.k);
    if candidates > MCC_LIMIT {
        return Err(ReductionError::LimitExceeded(candidates));
    }
    let mut chosen = Vec::with_capacity(g.k as usize);
    Ok(extend(g, &mut chosen).then_some(chosen))
}

fn extend(g: &ColoredGraph, chosen: &mut Vec<Vertex>) -> bool {
    let i = chosen.len();
    if i == g.k as usize {
        return true;
    }
    for &v in &g.classes[i] {
        if chosen.iter().all(|&c| g.adjacent(c, v)) {
            chosen.push(v);
            if extend(g, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{decide_optimal_response, simulate_response};
    use crate::rules::GameResult;

    /// k=3, n=6 with the triangle 0-6-12 plus a few stray edges (9 total).
    fn planted() -> ColoredGraph {
        ColoredGraph::blocks(
            3,
            6,
            vec![
                (0, 6),
                (6, 12),
                (0, 12),
                (1, 7),
                (2, 13),
                (3, 8),
                (8, 14),
                (4, 15),
                (5, 11),
            ],
        )
    }

    #[test]
    fn sizes_and_budgets() {
        let out = reduce_mcc(&planted()).unwrap();
        let inst = &out.instance;
        assert_eq!(inst.graph.vertex_count(), 43);
        assert_eq!(z_count(3, 6), 13);
        assert_eq!(inst.lata_budget(), 52);
        assert_eq!(inst.raj_budget(), 162);
        assert_eq!(inst.sigma.len(), 12);
        assert_eq!(out.name_map.len(), 43);
        assert!(inst.graph.bipartition().is_some());
    }

    #[test]
    fn smallest_shape() {
        let out = reduce_mcc(&ColoredGraph::blocks(1, 4, vec![])).unwrap();
        assert_eq!(out.instance.graph.vertex_count(), 4 + 1 + 4);
        assert_eq!(out.instance.sigma, vec![4]);
    }

    #[test]
    fn small_classes_are_rejected() {
        assert_eq!(
            reduce_mcc(&ColoredGraph::blocks(3, 5, vec![])),
            Err(ReductionError::ClassesTooSmall { k: 3, n: 5 })
        );
    }

    #[test]
    fn planted_triangle_replays_to_sixteen_against_fifteen() {
        let g = planted();
        let clique = brute_force_mcc(&g).unwrap().unwrap();
        assert_eq!(clique, vec![0, 6, 12]);
        let out = reduce_mcc(&g).unwrap();
        let result = simulate_response(&out.instance, &out.tau_for_clique(&clique)).unwrap();
        assert_eq!(result.territories, [16, 15]);
        assert_eq!(result.result, GameResult::LataWin);
        let idle = simulate_response(&out.instance, &[]).unwrap();
        assert_eq!(idle.territories, [13, 18]);
        assert_eq!(idle.result, GameResult::RajWin);
        assert!(decide_optimal_response(&out.instance).unwrap().decision);
    }

    #[test]
    fn equalized_budgets_keep_the_answer() {
        let g = planted();
        let out = reduce_mcc_with(&g, true).unwrap();
        assert_eq!(out.instance.lata_budget(), out.instance.raj_budget());
        assert!(out.instance.graph.bipartition().is_some());
        assert!(decide_optimal_response(&out.instance).unwrap().decision);
        let mut broken = g.clone();
        broken.edges.retain(|&e| e != (0, 12));
        assert_eq!(brute_force_mcc(&broken).unwrap(), None);
        let out = reduce_mcc_with(&broken, true).unwrap();
        assert!(!decide_optimal_response(&out.instance).unwrap().decision);
    }

    #[test]
    fn oracle_edge_cases() {
        assert_eq!(brute_force_mcc(&ColoredGraph::blocks(2, 3, vec![])).unwrap(), None);
        assert_eq!(
            brute_force_mcc(&ColoredGraph::blocks(1, 4, vec![])).unwrap(),
            Some(vec![0])
        );
    }
}
