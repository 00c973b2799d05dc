//! Strategies on disjoint unions of edges.
//!
//! Whenever a script has to pick among several empty vertices it orders them
//! by what they are (named by the memory, what sits on the partner vertex)
//! before falling back to ids. Ids only break ties between vertices on
//! interchangeable edges, which is what lets the verifier merge opponent
//! moves onto untouched edges.

use crate::error::StrategyError;
use crate::graph::{Graph, Vertex};
use crate::rules::{GameState, Move, Player};

use super::tables::{table, NamedEdge, TableKind};

fn partner(graph: &Graph, v: Vertex) -> Result<Vertex, StrategyError> {
    graph
        .partner(v)
        .ok_or_else(|| StrategyError::Inconsistent(format!("vertex {v} is not matched")))
}

fn edge_of(graph: &Graph, v: Vertex) -> Result<(Vertex, Vertex), StrategyError> {
    let u = partner(graph, v)?;
    Ok((v.min(u), v.max(u)))
}

fn untouched(state: &GameState, (a, b): (Vertex, Vertex)) -> bool {
    state.is_empty_vertex(a) && state.is_empty_vertex(b)
}

fn untouched_edges(state: &GameState) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    state
        .graph()
        .edges()
        .iter()
        .copied()
        .filter(move |&e| untouched(state, e))
}

/// Places the mover's remaining troops one at a time, preferring named
/// vertices, then vertices whose partner the mover holds, then untouched
/// edges, then vertices facing the opponent. The last empty vertex gets
/// everything left.
pub(crate) fn leftover(state: &GameState, bound: &[Vertex]) -> Result<Move, StrategyError> {
    let me = state.to_move();
    let graph = state.graph();
    let mut best: Option<((usize, u8, u32, Vertex), Vertex)> = None;
    let mut empties = 0;
    for v in state.empty_vertices() {
        empties += 1;
        let rank = bound.iter().position(|&b| b == v).unwrap_or(usize::MAX);
        let (side, troops) = match graph.partner(v) {
            Some(u) => match state.owner(u) {
                Some(p) if p == me => (0, state.troops(u)),
                None => (1, 0),
                Some(_) => (2, state.troops(u)),
            },
            None => (3, 0),
        };
        let key = (rank, side, troops, v);
        if best.is_none_or(|(k, _)| key < k) {
            best = Some((key, v));
        }
    }
    let budget = state.budget(me);
    Ok(match best {
        None => Move::PassPlacement,
        Some((_, v)) if empties == 1 => Move::place(v, budget),
        Some((_, v)) => Move::place(v, 1),
    })
}

/// Answers Lata's troops on an edge with the same number on its other end.
pub(crate) fn mirror(state: &GameState) -> Result<Move, StrategyError> {
    let me = state.to_move();
    let graph = state.graph();
    for &(a, b) in graph.edges() {
        for (theirs, mine) in [(a, b), (b, a)] {
            if state.owner(theirs) == Some(me.opponent()) && state.is_empty_vertex(mine) {
                let count = state.troops(theirs);
                if count > state.budget(me) {
                    return Err(StrategyError::Unspecified(format!(
                        "mirroring {count} troops needs more than the {} left",
                        state.budget(me)
                    )));
                }
                return Ok(Move::place(mine, count));
            }
        }
    }
    leftover(state, &[])
}

/// One troop on the first untouched edge while Raj still has troops, then
/// one troop at a time on vertices Raj cannot attack.
pub(crate) fn sparse(state: &GameState) -> Result<Move, StrategyError> {
    let me = state.to_move();
    if state.budget(me.opponent()) > 0 {
        if let Some((a, _)) = untouched_edges(state).next() {
            return Ok(Move::place(a, 1));
        }
    }
    let graph = state.graph();
    let safe = state.empty_vertices().find(|&v| {
        graph
            .partner(v)
            .is_none_or(|u| state.owner(u) != Some(me.opponent()))
    });
    match safe {
        Some(_) => leftover(state, &[]).map(|mv| match mv {
            Move::Place { vertex, .. } => Move::place(vertex, 1),
            other => other,
        }),
        None => leftover(state, &[]),
    }
}

/// Lata on one or two edges: half her troops (rounded up) on one endpoint,
/// the rest next to it, or across on the other edge when Raj took the
/// partner.
pub(crate) fn two_edges(state: &GameState) -> Result<Move, StrategyError> {
    let me = state.to_move();
    let graph = state.graph();
    let total = state.initial_budget(me);
    let mine: Vec<Vertex> = graph
        .vertices()
        .filter(|&v| state.owner(v) == Some(me))
        .collect();
    let edges = graph.edges().len();
    match (edges, mine.as_slice()) {
        (1, []) => Ok(Move::place(0, state.budget(me))),
        (2, []) => Ok(Move::place(0, total.div_ceil(2))),
        (2, [u]) if total / 2 > 0 => {
            let v = partner(graph, *u)?;
            let count = (total / 2).min(state.budget(me));
            if state.owner(v) == Some(me.opponent()) {
                match untouched_edges(state).next() {
                    Some((x, _)) => Ok(Move::place(x, count)),
                    None => leftover(state, &[]),
                }
            } else if state.is_empty_vertex(v) {
                Ok(Move::place(v, count))
            } else {
                leftover(state, &[])
            }
        }
        _ => leftover(state, &[]),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Opening {
    /// One troop opposite a heavy first placement.
    Scary,
    /// One more than Lata on the first edge; later answers come from the
    /// rows of block `block`.
    Triumphant { block: u32 },
}

/// Raj's table-driven play on three or four edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct TableRun {
    kind: TableKind,
    /// Budgets (T_R, T_L) = (10, 9): heavy openings are given up, lighter
    /// ones read the block one higher and add a troop to the first tie.
    strong: bool,
    scope: Vec<(Vertex, Vertex)>,
    /// (Lata's vertex, Raj's vertex) for w/p, x/q, y/r, z/s in binding order.
    names: Vec<(Vertex, Vertex)>,
    responded: usize,
    opening: Option<Opening>,
    bonus_pending: bool,
}

const LATA_NAMES: [char; 4] = ['w', 'x', 'y', 'z'];
const RAJ_NAMES: [char; 4] = ['p', 'q', 'r', 's'];

impl TableRun {
    pub(crate) fn standalone(kind: TableKind, strong: bool, graph: &Graph) -> Self {
        Self {
            kind,
            strong,
            scope: graph.edges().to_vec(),
            names: Vec::new(),
            responded: 0,
            opening: None,
            bonus_pending: false,
        }
    }

    fn delegated(
        kind: TableKind,
        strong: bool,
        mut scope: Vec<(Vertex, Vertex)>,
        first: (Vertex, Vertex),
    ) -> Self {
        scope.sort_unstable();
        Self {
            kind,
            strong,
            scope,
            names: vec![first],
            responded: 0,
            opening: None,
            bonus_pending: false,
        }
    }

    pub(crate) fn bound_vertices(&self) -> Vec<Vertex> {
        self.names.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub(crate) fn describe(&self) -> String {
        let mut parts: Vec<String> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, (l, r))| format!("{}={l} {}={r}", LATA_NAMES[i], RAJ_NAMES[i]))
            .collect();
        match self.opening {
            Some(Opening::Scary) => parts.push("scary".into()),
            Some(Opening::Triumphant { block }) => parts.push(format!("triumphant block {block}")),
            None => {}
        }
        parts.join(" ")
    }

    fn named(&self, e: (Vertex, Vertex)) -> bool {
        self.names
            .iter()
            .any(|&(a, b)| (a.min(b), a.max(b)) == e)
    }

    pub(crate) fn observe(&mut self, mv: Move, before: &GameState) -> Result<(), StrategyError> {
        let Move::Place { vertex, .. } = mv else {
            return Ok(());
        };
        if before.to_move() != Player::Lata {
            return Ok(());
        }
        let e = edge_of(before.graph(), vertex)?;
        let fresh = untouched(before, e) && self.scope.contains(&e) && !self.named(e);
        if fresh && self.names.len() < self.kind.edges() {
            let p = partner(before.graph(), vertex)?;
            self.names.push((vertex, p));
        }
        Ok(())
    }

    pub(crate) fn next(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let n = self.kind.edges();
        let j = self.responded;
        let lata_done = state.budget(Player::Lata) == 0;
        if j < self.names.len() {
            return self.respond(state, j);
        }
        if j < n && lata_done {
            let spare = self
                .scope
                .iter()
                .copied()
                .find(|&e| untouched(state, e) && !self.named(e));
            if let Some((a, b)) = spare {
                self.names.push((a, b));
                return self.respond(state, j);
            }
        }
        if j >= n || lata_done {
            return leftover(state, &self.bound_vertices());
        }
        Err(StrategyError::Unspecified(
            "Lata's last placement is not on a fresh edge".into(),
        ))
    }

    fn named_edges(&self, state: &GameState) -> Vec<NamedEdge> {
        let lata_done = state.budget(Player::Lata) == 0;
        let held = |v: Vertex| -> [u32; 2] {
            match state.owner(v) {
                Some(Player::Lata) => [state.troops(v), 0],
                Some(Player::Raj) => [0, state.troops(v)],
                None => [0, 0],
            }
        };
        (0..self.kind.edges())
            .map(|i| match self.names.get(i) {
                Some(&(l, r)) => {
                    let on_l = held(l);
                    NamedEdge {
                        lata: (on_l[0] > 0 || lata_done).then_some(on_l[0]),
                        on_lata_vertex: on_l,
                        on_raj_vertex: held(r),
                    }
                }
                None => NamedEdge {
                    lata: lata_done.then_some(0),
                    on_lata_vertex: [0, 0],
                    on_raj_vertex: [0, 0],
                },
            })
            .collect()
    }

    fn respond(&mut self, state: &GameState, j: usize) -> Result<Move, StrategyError> {
        let (lv, rv) = self.names[j];
        let f1 = if state.owner(lv) == Some(Player::Lata) {
            state.troops(lv)
        } else {
            0
        };
        let heavy = if self.strong { 4 } else { 5 };
        let out = if j == 0 {
            if f1 >= heavy {
                self.opening = Some(Opening::Scary);
                1
            } else {
                let block = if self.strong { f1 + 1 } else { f1 };
                self.opening = Some(Opening::Triumphant { block });
                self.bonus_pending = self.strong;
                f1 + 1
            }
        } else {
            match self.opening {
                Some(Opening::Scary) => f1 + 1,
                Some(Opening::Triumphant { block }) => {
                    let named = self.named_edges(state);
                    let row = table(self.kind).lookup(block, &named).ok_or_else(|| {
                        StrategyError::Unspecified(format!(
                            "no row of block f1(w)={block} fits {}",
                            self.describe_values(&named)
                        ))
                    })?;
                    let mut out = row.outputs[j - 1];
                    if self.bonus_pending && out == f1 && f1 > 0 {
                        out += 1;
                        self.bonus_pending = false;
                    }
                    out
                }
                None => {
                    return Err(StrategyError::Inconsistent(
                        "answering before the first edge".into(),
                    ))
                }
            }
        };
        let budget = state.budget(Player::Raj);
        if out == 0 {
            return Err(StrategyError::Unspecified(format!(
                "row places no troops on {} while Raj holds {budget}",
                RAJ_NAMES[j]
            )));
        }
        if out > budget {
            return Err(StrategyError::Unspecified(format!(
                "{out} troops on {} exceeds the {budget} left",
                RAJ_NAMES[j]
            )));
        }
        if !state.is_empty_vertex(rv) {
            return Err(StrategyError::Unspecified(format!(
                "{}={rv} is already occupied",
                RAJ_NAMES[j]
            )));
        }
        self.responded += 1;
        Ok(Move::place(rv, out))
    }

    fn describe_values(&self, named: &[NamedEdge]) -> String {
        named
            .iter()
            .enumerate()
            .map(|(i, e)| match e.lata {
                Some(v) => format!("f1({})={v}", LATA_NAMES[i]),
                None => format!("f1({})=?", LATA_NAMES[i]),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum MoveClass {
    Normal,
    Dangerous,
    Cliffhanger,
    /// A mirrored answer while Raj is ahead on troops.
    Ahead,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Stage {
    Balanced,
    Ahead,
    Delegated(Box<TableRun>),
}

/// Raj's inductive play on `N >= 4` edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct InductionRun {
    stage: Stage,
    history: Vec<MoveClass>,
    /// Lata's latest fresh edge, waiting for an answer.
    pending: Option<(Vertex, Vertex)>,
}

impl InductionRun {
    pub(crate) fn new(state: &GameState) -> Self {
        let stage = if state.budget(Player::Lata) == state.budget(Player::Raj) {
            Stage::Balanced
        } else {
            Stage::Ahead
        };
        Self {
            stage,
            history: Vec::new(),
            pending: None,
        }
    }

    pub(crate) fn bound_vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.pending.iter().flat_map(|&(a, b)| [a, b]).collect();
        if let Stage::Delegated(run) = &self.stage {
            out.extend(run.bound_vertices());
        }
        out
    }

    pub(crate) fn describe(&self) -> String {
        let hist: Vec<&str> = self
            .history
            .iter()
            .map(|c| match c {
                MoveClass::Normal => "normal",
                MoveClass::Dangerous => "dangerous",
                MoveClass::Cliffhanger => "cliffhanger",
                MoveClass::Ahead => "ahead",
            })
            .collect();
        match &self.stage {
            Stage::Delegated(run) => format!("{} | {}", hist.join(","), run.describe()),
            _ => hist.join(","),
        }
    }

    pub(crate) fn observe(&mut self, mv: Move, before: &GameState) -> Result<(), StrategyError> {
        if let Stage::Delegated(run) = &mut self.stage {
            return run.observe(mv, before);
        }
        if let Move::Place { vertex, .. } = mv {
            let e = edge_of(before.graph(), vertex)?;
            if before.to_move() == Player::Lata && untouched(before, e) {
                self.pending = Some((vertex, partner(before.graph(), vertex)?));
            }
        }
        Ok(())
    }

    pub(crate) fn next(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        if let Stage::Delegated(run) = &mut self.stage {
            return run.next(state);
        }
        let Some((lv, rv)) = self.pending.take() else {
            if state.budget(Player::Lata) == 0 {
                return leftover(state, &[]);
            }
            return Err(StrategyError::Unspecified(
                "no fresh edge from Lata to answer".into(),
            ));
        };
        let t = state.troops(lv);
        let rem = untouched_edges(state).count();
        let k = state.budget(Player::Raj);
        let ahead = matches!(self.stage, Stage::Ahead);
        if rem == 3 {
            let mut scope: Vec<_> = untouched_edges(state).collect();
            scope.push((lv.min(rv), lv.max(rv)));
            let mut run = TableRun::delegated(TableKind::FourEdges, ahead, scope, (lv, rv));
            self.history.push(MoveClass::Cliffhanger);
            let mv = run.next(state);
            self.stage = Stage::Delegated(Box::new(run));
            return mv;
        }
        let need = rem as u64 + 6;
        if ahead {
            if u64::from(k) >= u64::from(t) + need {
                self.history.push(MoveClass::Ahead);
                return Ok(Move::place(rv, t));
            }
            return Err(StrategyError::Unspecified(format!(
                "Raj ahead with {k} troops cannot mirror {t} and keep {need}"
            )));
        }
        if u64::from(k.saturating_sub(t)) < need {
            if rem < 4 {
                return Err(StrategyError::Unspecified(format!(
                    "dangerous move with only {rem} edges left"
                )));
            }
            self.history.push(MoveClass::Dangerous);
            self.stage = Stage::Ahead;
            return Ok(Move::place(rv, 1));
        }
        self.history.push(MoveClass::Normal);
        Ok(Move::place(rv, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;
    use crate::rules::RuleConfig;
    use crate::strategies::{initial_memory, next_move, relabel, StrategyId};

    fn start(m: u32, tl: u32, tr: u32) -> GameState {
        GameState::new(
            GraphFamily::Matching(m).generate().unwrap(),
            tl,
            tr,
            RuleConfig::standard(),
        )
        .unwrap()
    }

    fn reply(id: StrategyId, state: &GameState, lata: Move) -> (GameState, Move) {
        let mem = initial_memory(id, state);
        let mem = relabel(id, &mem, lata, state).unwrap();
        let s = state.apply(lata).unwrap();
        let (mv, _) = next_move(id, &s, &mem).unwrap();
        (s, mv)
    }

    #[test]
    fn mirror_copies_lata() {
        let s = start(3, 9, 9);
        let (_, mv) = reply(StrategyId::RajMirrorMatching, &s, Move::place(4, 4));
        assert_eq!(mv, Move::place(5, 4));
    }

    #[test]
    fn scary_and_triumphant_openings() {
        let s = start(3, 9, 9);
        let (_, mv) = reply(StrategyId::RajThreeEdges, &s, Move::place(4, 5));
        assert_eq!(mv, Move::place(5, 1));
        let (_, mv) = reply(StrategyId::RajThreeEdges, &s, Move::place(3, 4));
        assert_eq!(mv, Move::place(2, 5));
    }

    #[test]
    fn three_three_three_follows_row_four() {
        let id = StrategyId::RajThreeEdges;
        let mut s = start(3, 9, 9);
        let mut mem = initial_memory(id, &s);
        let mut raj = Vec::new();
        for lata in [Move::place(0, 3), Move::place(2, 3), Move::place(4, 3)] {
            mem = relabel(id, &mem, lata, &s).unwrap();
            s = s.apply(lata).unwrap();
            let (mv, m2) = next_move(id, &s, &mem).unwrap();
            mem = m2;
            s = s.apply(mv).unwrap();
            raj.push(mv);
        }
        assert_eq!(
            raj,
            vec![Move::place(1, 4), Move::place(3, 4), Move::place(5, 1)]
        );
    }

    #[test]
    fn binding_uses_the_touched_edge() {
        let id = StrategyId::RajThreeEdges;
        let s = start(3, 9, 9);
        let mem = initial_memory(id, &s);
        let mem = relabel(id, &mem, Move::place(4, 2), &s).unwrap();
        assert_eq!(mem.bound_vertices(), vec![4, 5]);
    }

    #[test]
    fn sparse_takes_fresh_edges_one_troop_at_a_time() {
        let s = start(4, 2, 2);
        let (mv, _) = next_move(StrategyId::LataSparseMatching, &s, &Default::default()).unwrap();
        assert_eq!(mv, Move::place(0, 1));
    }

    #[test]
    fn induction_classifies_moves() {
        let id = StrategyId::RajMatchingInduction;
        let s = start(7, 13, 13);
        // 13 - 1 >= 6 + 6: normal, mirrored.
        let (_, mv) = reply(id, &s, Move::place(0, 1));
        assert_eq!(mv, Move::place(1, 1));
        // 13 - 2 < 12: dangerous, one troop opposite.
        let (_, mv) = reply(id, &s, Move::place(0, 2));
        assert_eq!(mv, Move::place(1, 1));
    }

    #[test]
    fn unmatched_vertex_is_a_binding_error() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let s = GameState::new(g, 9, 9, RuleConfig::standard()).unwrap();
        let mut run = TableRun::standalone(TableKind::ThreeEdges, false, s.graph());
        assert!(matches!(
            run.observe(Move::place(1, 1), &s),
            Err(StrategyError::Inconsistent(_))
        ));
    }
}
