//! Raj's case tables for three and four edges, kept as data.
//!
//! Each row reads `f1(w) | conditions | outputs`. Lata's vertices are named
//! `w x y z` in the order she first touches an edge; Raj's partners are
//! `p q r s`. Outputs are Raj's placements on `q r` (three edges) or
//! `q r s` (four edges), in that order. Conditions are transcribed literally,
//! including the ones stated on `f2` of a Lata name.

use std::sync::OnceLock;

const THREE_EDGES: &str = "
4 | f1(x)=5 f1(y)=0 | 1 1
4 | f1(x)=4 f1(y)=1 | 1 2
4 | f1(x)=3 f1(y)=2 | 1 3
3 | f1(x)=6 f1(y)=0 | 1 1
3 | f1(x)=5 f1(y)=1 | 1 2
3 | f1(x)=4 f1(y)=2 | 1 3
3 | f1(x)=3 f1(y)=3 | 4 1
2 | f1(x)=7 f1(y)=0 | 1 1
2 | f1(x)=6 f1(y)=1 | 1 2
2 | f1(x)=5 f1(y)=2 | 1 3
2 | f1(x)=4 f1(y)=3 | 1 4
1 | f1(x)=8 f1(y)=0 | 1 1
1 | f1(x)=7 f1(y)=1 | 1 2
1 | f1(x)=6 f1(y)=2 | 1 3
1 | f1(x)=5 f1(y)=3 | 1 4
1 | f1(x)=4 f1(y)=4 | 5 1
";

const FOUR_EDGES: &str = "
4 | f1(x)=6 f1(y)=0 f1(z)=0 | 1 1 1
4 | f1(x)=5 f1(y)=1 f1(z)=0 | 1 2 1
4 | f1(x)=4 f1(y)=2 f2(z)=0 | 1 3 1
4 | f1(x)=4 f1(y)=1 f2(z)=1 | 1 2 2
4 | f1(x)=3 f1(y)=3 f2(z)=0 | 1 4 0
4 | f1(x)=3 f1(y)=2 f2(z)=1 | 1 3 1
4 | f1(x)=2 f1(y)=4 f2(s)=0 | 3 1 1
4 | f1(x)=2 f1(y)=3 f2(s)=1 | 3 1 1
4 | f1(x)=2 f1(y)=2 f2(z)=2 | 3 2 0
4 | f1(x)=1 f1(y)=5 f2(z)=0 | 2 1 1
4 | f1(x)=1 f1(y)=4 f2(z)=1 | 2 1 2
4 | f1(x)=1 f1(y)=3 f2(z)=2 | 2 1 2
3 | f1(x)=7 f1(y)=0 f1(z)=0 | 1 1 1
3 | f1(x)=6 f1(y)=1 f1(z)=0 | 1 2 1
3 | f1(x)=5 f1(y)=1 f1(z)=1 | 1 2 2
3 | f1(x)=4 f1(y)=3 f2(z)=0 | 1 4 1
3 | f1(x)=4 f1(y)=2 f2(z)=1 | 1 3 2
3 | f1(x)=3 f1(y)=4 f2(z)=0 | 4 1 1
3 | f1(x)=3 f1(y)=3 f2(z)=1 | 4 1 1
3 | f1(x)=3 f1(y)=2 f2(z)=2 | 4 2 0
3 | f1(x)=2 f1(y)=5 f2(z)=0 | 3 1 1
3 | f1(x)=2 f1(y)=4 f2(z)=1 | 3 1 2
3 | f1(x)=2 f1(y)=3 f2(z)=2 | 3 1 2
3 | f1(x)=1 f1(y)=6 f2(z)=0 | 2 1 1
3 | f1(x)=1 f1(y)=5 f2(z)=1 | 2 1 2
3 | f1(x)=1 f1(y)=4 f2(z)=2 | 2 1 2
3 | f1(x)=1 f1(y)=3 f2(z)=3 | 2 3 0
2 | f1(x)=8 f1(y)=0 f1(z)=0 | 1 1 1
2 | f1(x)=7 f1(y)=1 f1(z)=0 | 1 2 1
2 | f1(x)=6 f1(y)=2 f1(z)=0 | 1 3 1
2 | f1(x)=6 f1(y)=1 f1(z)=1 | 1 2 2
2 | f1(x)=5 f1(y)=3 f1(z)=0 | 1 4 1
2 | f1(x)=5 f1(y)=2 f1(z)=1 | 1 3 2
2 | f1(x)=4 f1(y)=4 f2(z)=0 | 1 5 1
2 | f1(x)=4 f1(y)=3 f2(z)=1 | 1 4 2
2 | f1(x)=4 f1(y)=2 f2(z)=2 | 1 3 3
2 | f1(x)=3 f1(y)=5 f2(z)=0 | 4 1 1
2 | f1(x)=3 f1(y)=4 f2(s)=1 | 4 1 2
2 | f1(x)=3 f1(y)=3 f2(z)=2 | 4 1 2
2 | f1(x)=2 f1(y)=6 f2(z)=0 | 3 1 1
2 | f1(x)=2 f1(y)=5 f2(z)=1 | 3 1 2
2 | f1(x)=2 f1(y)=4 f2(z)=2 | 3 1 3
2 | f1(x)=2 f1(y)=3 f2(z)=3 | 3 1 3
2 | f1(x)=1 f1(y)=7 f2(z)=0 | 2 1 1
2 | f1(x)=1 f1(y)=6 f2(z)=1 | 2 1 2
2 | f1(x)=1 f1(y)=5 f2(z)=2 | 2 1 3
2 | f1(x)=1 f1(y)=4 f2(s)=3 | 2 5 0
1 | f1(x)=9 f1(y)=0 f1(z)=0 | 1 1 1
1 | f1(x)=8 f1(y)=1 f1(z)=0 | 1 2 1
1 | f1(x)=7 f1(y)=2 f1(z)=0 | 1 3 1
1 | f1(x)=7 f1(y)=1 f1(z)=1 | 1 2 2
1 | f1(x)=6 f1(y)=3 f1(z)=0 | 1 4 1
1 | f1(x)=6 f1(y)=2 f1(z)=1 | 1 3 2
1 | f1(x)=5 f1(y)=4 f2(z)=0 | 1 5 1
1 | f1(x)=5 f1(y)=3 f2(z)=1 | 1 4 2
1 | f1(x)=5 f1(y)=2 f2(z)=2 | 1 3 3
1 | f1(x)=4 f1(y)=5 f2(z)=0 | 5 1 1
1 | f1(x)=4 f1(y)=4 f2(z)=1 | 5 1 2
1 | f1(x)=4 f1(y)=3 f2(z)=2 | 5 1 2
1 | f1(x)=3 f1(y)=6 f2(z)=0 | 4 1 1
1 | f1(x)=3 f1(y)=5 f2(z)=1 | 3 1 2
1 | f1(x)=3 f1(y)=4 f2(z)=2 | 3 1 3
1 | f1(x)=3 f1(y)=3 f2(z)=3 | 4 1 3
1 | f1(x)=2 f1(y)=7 f2(z)=0 | 3 1 1
1 | f1(x)=2 f1(y)=6 f2(z)=1 | 3 1 2
1 | f1(x)=2 f1(y)=5 f2(z)=2 | 3 1 3
1 | f1(x)=2 f1(y)=4 f2(z)=3 | 3 5 0
1 | f1(x)=1 f1(y)=8 f2(z)=0 | 2 1 1
1 | f1(x)=1 f1(y)=7 f2(z)=1 | 2 1 2
1 | f1(x)=1 f1(y)=6 f2(z)=2 | 2 1 3
1 | f1(x)=1 f1(y)=5 f2(z)=3 | 2 1 4
1 | f1(x)=1 f1(y)=4 f2(s)=4 | 2 4 0
";

/// `f1` reads Lata's troops, `f2` reads Raj's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    F1,
    F2,
}

/// One literal condition `f?(name) = value`. Names index the edge
/// (0 = w/p, 1 = x/q, 2 = y/r, 3 = z/s); `lata_name` records whether the
/// letter written was one of Lata's (`w x y z`) or Raj's (`p q r s`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Condition {
    pub side: Side,
    pub edge: usize,
    pub lata_name: bool,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    /// 1-based position inside its `f1(w)` block.
    pub number: usize,
    pub w: u32,
    pub conditions: Vec<Condition>,
    /// Raj's placements on edges 1.. (q, r, s).
    pub outputs: Vec<u32>,
    /// Whether this is the interchanged copy of a printed row.
    pub swapped: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableKind {
    ThreeEdges,
    FourEdges,
}

impl TableKind {
    pub fn edges(self) -> usize {
        match self {
            TableKind::ThreeEdges => 3,
            TableKind::FourEdges => 4,
        }
    }

    /// The common budget the rows were written for.
    pub fn budget(self) -> u32 {
        match self {
            TableKind::ThreeEdges => 9,
            TableKind::FourEdges => 10,
        }
    }

    /// The pair of edges declared interchangeable.
    fn swap(self) -> (usize, usize) {
        match self {
            TableKind::ThreeEdges => (1, 2),
            TableKind::FourEdges => (2, 3),
        }
    }
}

pub struct Table {
    pub kind: TableKind,
    /// Printed rows in order, followed by their interchanged copies.
    pub rows: Vec<Row>,
}

pub fn table(kind: TableKind) -> &'static Table {
    static THREE: OnceLock<Table> = OnceLock::new();
    static FOUR: OnceLock<Table> = OnceLock::new();
    let (cell, text) = match kind {
        TableKind::ThreeEdges => (&THREE, THREE_EDGES),
        TableKind::FourEdges => (&FOUR, FOUR_EDGES),
    };
    cell.get_or_init(|| Table::parse(kind, text).expect("built-in table parses"))
}

impl Table {
    pub fn parse(kind: TableKind, text: &str) -> Result<Table, String> {
        let mut printed = Vec::new();
        let mut counters = [0usize; 16];
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| format!("line {}: {what}: {line:?}", lineno + 1);
            let mut parts = line.split('|').map(str::trim);
            let (Some(w), Some(conds), Some(outs), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad("expected three fields"));
            };
            let w: u32 = w.parse().map_err(|_| bad("bad f1(w)"))?;
            let conditions = conds
                .split_whitespace()
                .map(|c| parse_condition(c).ok_or_else(|| bad("bad condition")))
                .collect::<Result<Vec<_>, _>>()?;
            let outputs = outs
                .split_whitespace()
                .map(|o| o.parse::<u32>().map_err(|_| bad("bad output")))
                .collect::<Result<Vec<_>, _>>()?;
            if outputs.len() != kind.edges() - 1 {
                return Err(bad("wrong number of outputs"));
            }
            if conditions.iter().any(|c| c.edge == 0 || c.edge >= kind.edges()) {
                return Err(bad("condition on an edge outside the table"));
            }
            let slot = counters.get_mut(w as usize).ok_or_else(|| bad("f1(w) too large"))?;
            *slot += 1;
            printed.push(Row {
                number: *slot,
                w,
                conditions,
                outputs,
                swapped: false,
            });
        }
        let (a, b) = kind.swap();
        let swapped: Vec<Row> = printed
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.swapped = true;
                for c in &mut r.conditions {
                    c.edge = swap_index(c.edge, a, b);
                }
                r.outputs.swap(a - 1, b - 1);
                r
            })
            .collect();
        printed.extend(swapped);
        Ok(Table {
            kind,
            rows: printed,
        })
    }

    /// Rows whose totals exceed the budget the table was written for.
    /// Lata's side counts `f1(w)` plus every `f1` condition; Raj's side counts
    /// his `f1(w)+1` opening plus the outputs.
    pub fn audit(&self) -> Vec<String> {
        let t = self.kind.budget();
        let mut problems = Vec::new();
        for row in self.rows.iter().filter(|r| !r.swapped) {
            let lata: u32 = row.w
                + row
                    .conditions
                    .iter()
                    .filter(|c| c.side == Side::F1)
                    .map(|c| c.value)
                    .sum::<u32>();
            let raj: u32 = row.w + 1 + row.outputs.iter().sum::<u32>();
            if lata > t {
                problems.push(format!(
                    "f1(w)={} row {}: Lata would place {lata} > {t}",
                    row.w, row.number
                ));
            }
            if raj > t {
                problems.push(format!(
                    "f1(w)={} row {}: Raj would place {raj} > {t}",
                    row.w, row.number
                ));
            }
        }
        problems
    }

    pub fn block(&self, w: u32) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.w == w)
    }
}

fn swap_index(i: usize, a: usize, b: usize) -> usize {
    if i == a {
        b
    } else if i == b {
        a
    } else {
        i
    }
}

fn parse_condition(text: &str) -> Option<Condition> {
    let (lhs, value) = text.split_once('=')?;
    let value = value.parse().ok()?;
    let side = match lhs.get(..3)? {
        "f1(" => Side::F1,
        "f2(" => Side::F2,
        _ => return None,
    };
    let name = lhs.get(3..)?.strip_suffix(')')?;
    let (edge, lata_name) = match name {
        "w" => (0, true),
        "x" => (1, true),
        "y" => (2, true),
        "z" => (3, true),
        "p" => (0, false),
        "q" => (1, false),
        "r" => (2, false),
        "s" => (3, false),
        _ => return None,
    };
    Some(Condition {
        side,
        edge,
        lata_name,
        value,
    })
}

/// What is known about one named edge when Raj consults the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedEdge {
    /// Troops Lata has on her named endpoint, if that is settled.
    pub lata: Option<u32>,
    /// Troops each player currently holds on the Lata-named endpoint.
    pub on_lata_vertex: [u32; 2],
    /// Troops each player currently holds on the Raj-named endpoint.
    pub on_raj_vertex: [u32; 2],
}

impl Condition {
    /// `None` when the condition cannot be decided yet.
    pub fn holds(&self, edges: &[NamedEdge]) -> Option<bool> {
        let e = edges.get(self.edge)?;
        match (self.side, self.lata_name) {
            (Side::F1, true) => e.lata.map(|v| v == self.value),
            (Side::F1, false) => Some(e.on_raj_vertex[0] == self.value),
            (Side::F2, true) => Some(e.on_lata_vertex[1] == self.value),
            (Side::F2, false) => Some(e.on_raj_vertex[1] == self.value),
        }
    }
}

impl Row {
    pub fn compatible(&self, edges: &[NamedEdge]) -> bool {
        self.conditions
            .iter()
            .all(|c| c.holds(edges) != Some(false))
    }
}

impl Table {
    /// First compatible row in the `f1(w)` block: printed rows first, then
    /// their interchanged copies.
    pub fn lookup(&self, w: u32, edges: &[NamedEdge]) -> Option<&Row> {
        self.block(w).find(|r| r.compatible(edges))
    }
}
