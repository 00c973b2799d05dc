//! The `aggression` command line.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use aggression_core::codec::{self, to_json};
use aggression_core::reduction::reduce_mcc_with;
use aggression_core::response::{decide_optimal_response_with_limit, simulate_response, TauEntry};
use aggression_core::strategies::{Guarantee, StrategyId};
use aggression_core::verifier::{verify_guarantee_with, VerifyMode, VerifyOptions};
use aggression_core::{
    format_line, AttackPolicy, GameState, Graph, GraphFamily, Player, ResponseError,
    RuleConfig, SearchLimits, SolveError, Solver, SymmetryGroup, VerifyError,
};
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::server::{self, AppState, ServerConfig};
use crate::session::{parse_move, GameRecord, Opponent, Session};

pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

/// Node limit used by `play` and `serve` when none is given.
const INTERACTIVE_NODE_LIMIT: u64 = 2_000_000;

#[derive(Debug, Parser)]
#[command(name = "aggression", version, about = "Solve, verify and play the Aggression graph game")]
pub struct Cli {
    /// Accepted for reproducible scripts; every command is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact game value and a principal line.
    Solve(SolveArgs),
    /// Check a scripted strategy against every opponent reply.
    Verify(VerifyArgs),
    /// Build a response instance from a colored graph.
    Reduce(ReduceArgs),
    /// Decide whether Lata can answer a fixed attack plan and win.
    Respond(RespondArgs),
    /// Play in the terminal, or replay a recorded game.
    Play(PlayArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct BoardArgs {
    /// Graph family such as `matching:3` or `cycle:5`.
    #[arg(long, conflicts_with = "graph")]
    family: Option<GraphFamily>,
    /// Graph document (JSON).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Troops for each player.
    #[arg(long, short, conflicts_with_all = ["lata", "raj"])]
    troops: Option<u32>,
    #[arg(long, requires = "raj")]
    lata: Option<u32>,
    #[arg(long, requires = "lata")]
    raj: Option<u32>,
    /// `mandatory` or `optional`.
    #[arg(long, value_parser = parse_name::<AttackPolicy>)]
    attack_policy: Option<AttackPolicy>,
    /// Most troops per placement; 1 is the micro variant.
    #[arg(long)]
    placement_cap: Option<u32>,
}

impl BoardArgs {
    fn graph(&self) -> anyhow::Result<Graph> {
        match (&self.family, &self.graph) {
            (Some(f), None) => Ok(f.generate()?),
            (None, Some(path)) => Ok(codec::parse_graph(&read(path)?)
                .with_context(|| format!("reading {}", path.display()))?),
            _ => bail!("give --family or --graph"),
        }
    }

    fn budgets(&self) -> anyhow::Result<(u32, u32)> {
        match (self.troops, self.lata, self.raj) {
            (Some(t), _, _) => Ok((t, t)),
            (None, Some(l), Some(r)) => Ok((l, r)),
            _ => bail!("give --troops or both --lata and --raj"),
        }
    }

    fn rules_over(&self, base: RuleConfig) -> RuleConfig {
        let mut rules = base;
        if let Some(p) = self.attack_policy {
            rules.attack_policy = p;
        }
        if self.placement_cap.is_some() {
            rules.placement_cap = self.placement_cap;
        }
        rules
    }

    fn overrides_rules(&self) -> bool {
        self.attack_policy.is_some() || self.placement_cap.is_some()
    }

    fn initial(&self) -> anyhow::Result<GameState> {
        let (lata, raj) = self.budgets()?;
        let rules = self.rules_over(RuleConfig::standard());
        Ok(GameState::new(self.graph()?, lata, raj, rules)?)
    }
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Stop after this many search nodes.
    #[arg(long, env = "AGGRESSION_NODE_LIMIT")]
    node_limit: Option<u64>,
    /// Stop after this many seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl LimitArgs {
    fn limits(&self, default_nodes: Option<u64>) -> SearchLimits {
        SearchLimits {
            max_nodes: self.node_limit.or(default_nodes),
            max_time: self.time_limit.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    board: BoardArgs,
    #[command(flatten)]
    limits: LimitArgs,
    /// `identity`, `matching_edges` or `cycle_dihedral`; defaults to the
    /// largest group that fits the graph.
    #[arg(long)]
    symmetry: Option<SymmetryGroup>,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    strategy: StrategyId,
    #[command(flatten)]
    board: BoardArgs,
    #[command(flatten)]
    limits: LimitArgs,
    /// `faithful` counts unscripted positions; `repaired` fills them by search.
    #[arg(long, default_value = "faithful", value_parser = parse_name::<VerifyMode>)]
    mode: VerifyMode,
    #[arg(long)]
    symmetry: Option<SymmetryGroup>,
    /// Check this guarantee instead of the claimed one.
    #[arg(long, value_parser = parse_name::<Guarantee>)]
    guarantee: Option<Guarantee>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Colored graph document.
    #[arg(long, short)]
    input: PathBuf,
    /// Instance document; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Add troops so both players have the same budget.
    #[arg(long)]
    equalize_budgets: bool,
    /// Also write the vertex naming and parameters here.
    #[arg(long)]
    names: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RespondArgs {
    /// Instance document.
    #[arg(long, short)]
    instance: PathBuf,
    /// Score this reply instead of searching, e.g. `3,_,5` (`_` skips).
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, env = "AGGRESSION_NODE_LIMIT")]
    node_limit: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[command(flatten)]
    board: Option<BoardArgs>,
    /// Replay a game record, or a move list on the board given by the
    /// other flags, and print the result.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Side you play.
    #[arg(long, default_value = "lata", value_parser = parse_name::<Player>)]
    human: Player,
    /// `none`, `solver` or a strategy id.
    #[arg(long, default_value = "solver", value_parser = parse_opponent)]
    opponent: Opponent,
    /// Save the finished game here.
    #[arg(long)]
    record: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    bind: String,
    /// Hints computed at the same time.
    #[arg(long, default_value_t = 4)]
    hint_workers: usize,
    /// Append created games and moves to this JSON-lines file.
    #[arg(long)]
    log: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

fn parse_name<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    T::deserialize(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_opponent(s: &str) -> Result<Opponent, String> {
    match s {
        "none" => Ok(Opponent::None),
        "solver" => Ok(Opponent::Solver),
        id => id
            .parse::<StrategyId>()
            .map(Opponent::Strategy)
            .map_err(|e| e.to_string()),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a parsed command line and maps failures to exit codes.
pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Reduce(a) => reduce(a),
        Command::Respond(a) => respond(a),
        Command::Play(a) => play(a),
        Command::Serve(a) => serve(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_limit(&e) { EXIT_LIMIT } else { EXIT_USAGE })
        }
    }
}

fn is_limit(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<SolveError>(),
            Some(SolveError::LimitExceeded { .. })
        ) || matches!(
            cause.downcast_ref::<VerifyError>(),
            Some(VerifyError::Solve(SolveError::LimitExceeded { .. }))
        ) || matches!(
            cause.downcast_ref::<ResponseError>(),
            Some(ResponseError::LimitExceeded { .. })
        )
    })
}

fn solve(a: SolveArgs) -> anyhow::Result<ExitCode> {
    let state = a.board.initial()?;
    let group = a
        .symmetry
        .unwrap_or_else(|| SymmetryGroup::natural_for(state.graph()));
    let result = Solver::new(group, a.limits.limits(None)).solve(&state)?;
    if a.json {
        print!("{}", to_json(&result));
    } else {
        println!("value: {}", result.value);
        println!("result: {}", result.value.result());
        if let Some(mv) = result.best_move {
            println!("best move: {mv}");
        }
        println!("principal line: {}", format_line(&result.principal_line));
        println!("nodes: {}", result.nodes_expanded);
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let graph = a.board.graph()?;
    let budgets = a.board.budgets()?;
    let options = VerifyOptions {
        mode: a.mode,
        symmetry: a.symmetry.unwrap_or_else(|| SymmetryGroup::natural_for(&graph)),
        guarantee: a.guarantee,
        rules: a
            .board
            .overrides_rules()
            .then(|| a.board.rules_over(a.strategy.rule_config())),
        limits: a.limits.limits(None),
    };
    let report = verify_guarantee_with(a.strategy, &graph, budgets, &options)?;
    write_or_print(a.output.as_deref(), &to_json(&report))?;
    eprintln!(
        "{} {} on {} vertices at ({}, {}): {}",
        report.strategy,
        report.guarantee_claimed,
        graph.vertex_count(),
        budgets.0,
        budgets.1,
        if report.holds {
            "holds".to_string()
        } else if report.counterexample.is_some() {
            "refuted".to_string()
        } else {
            format!("{} unspecified positions", report.unspecified)
        }
    );
    Ok(if report.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_REFUTED)
    })
}

fn reduce(a: ReduceArgs) -> anyhow::Result<ExitCode> {
    let g = codec::parse_colored_graph(&read(&a.input)?)?;
    let out = reduce_mcc_with(&g, a.equalize_budgets)?;
    write_or_print(a.output.as_deref(), &to_json(&out.instance))?;
    if let Some(p) = &a.names {
        std::fs::write(p, to_json(&out)).with_context(|| format!("writing {}", p.display()))?;
    }
    eprintln!(
        "{} vertices, Lata {} troops, Raj {} troops, plan of {} attacks",
        out.instance.graph.vertex_count(),
        out.instance.lata_budget(),
        out.instance.raj_budget(),
        out.instance.sigma.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_tau(text: &str) -> anyhow::Result<Vec<TauEntry>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|e| match e.trim() {
            "_" | "skip" => Ok(TauEntry::Skip),
            v => Ok(TauEntry::Attack(
                v.parse().with_context(|| format!("bad reply entry {v:?}"))?,
            )),
        })
        .collect()
}

fn respond(a: RespondArgs) -> anyhow::Result<ExitCode> {
    let inst = codec::parse_instance(&read(&a.instance)?)?;
    if let Some(text) = &a.tau {
        let out = simulate_response(&inst, &parse_tau(text)?)?;
        println!("{}", out.result);
        println!("territories: {} to {}", out.territories[0], out.territories[1]);
        return Ok(ExitCode::SUCCESS);
    }
    let limit = a
        .node_limit
        .unwrap_or(aggression_core::response::DEFAULT_NODE_LIMIT);
    let answer = decide_optimal_response_with_limit(&inst, limit)?;
    match answer.witness_tau {
        Some(tau) if answer.decision => {
            println!("yes");
            println!("{}", serde_json::to_string(&tau)?);
            Ok(ExitCode::SUCCESS)
        }
        _ => {
            println!("no");
            Ok(ExitCode::from(EXIT_REFUTED))
        }
    }
}

/// A replay file: a full record, or a bare move list played on the board
/// given by the flags.
#[derive(Deserialize)]
#[serde(untagged)]
enum ReplayDoc {
    Record(GameRecord),
    Moves(Vec<serde_json::Value>),
}

fn play(a: PlayArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = &a.replay {
        let record = match serde_json::from_str::<ReplayDoc>(&read(path)?)
            .with_context(|| format!("reading {}", path.display()))?
        {
            ReplayDoc::Record(r) => r,
            ReplayDoc::Moves(values) => {
                let board = a.board.as_ref().context("a bare move list needs --family or --graph")?;
                let initial = board.initial()?;
                let moves = values
                    .into_iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => parse_move(&s).map_err(anyhow::Error::msg),
                        other => Ok(serde_json::from_value(other)?),
                    })
                    .collect::<anyhow::Result<_>>()?;
                GameRecord {
                    graph: initial.graph().clone(),
                    budgets: aggression_core::verifier::Budgets {
                        lata: initial.initial_budget(Player::Lata),
                        raj: initial.initial_budget(Player::Raj),
                    },
                    rules: initial.config(),
                    moves,
                }
            }
        };
        let state = record
            .replay()
            .map_err(|(i, e)| anyhow::anyhow!("move #{i} ({}): {e}", record.moves[i]))?;
        print_board(&state);
        return Ok(ExitCode::SUCCESS);
    }
    let board = a.board.as_ref().context("give --family or --graph, or --replay")?;
    let mut initial = board.initial()?;
    if let (Opponent::Strategy(id), false) = (a.opponent, board.overrides_rules()) {
        initial = GameState::new(
            initial.graph().clone(),
            initial.initial_budget(Player::Lata),
            initial.initial_budget(Player::Raj),
            id.rule_config(),
        )?;
    }
    let limits = a.limits.limits(Some(INTERACTIVE_NODE_LIMIT));
    let mut session = Session::new("local".into(), initial, a.human, a.opponent, limits)?;
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    while !session.state().is_terminal() {
        print_board(session.state());
        print!("{}> ", session.state().to_move());
        std::io::stdout().flush()?;
        let Some(line) = lines.next() else { break };
        let line = line?;
        match line.trim() {
            "" => continue,
            "quit" | "q" => break,
            "hint" => match session.hint(limits) {
                Ok(h) => println!("hint: {} ({:?})", h.mv, h.source),
                Err(e) => println!("no hint: {e}"),
            },
            "moves" => {
                let legal = session.state().legal_moves();
                println!("{}", format_line(&legal));
            }
            text => match parse_move(text) {
                Ok(mv) => {
                    let before = session.log().len();
                    match session.play(mv) {
                        Ok(()) => {
                            for reply in &session.log()[before + 1..] {
                                println!("opponent: {reply}");
                            }
                        }
                        Err(e) => println!("rejected: {e}"),
                    }
                }
                Err(e) => println!("{e}"),
            },
        }
    }
    if session.state().is_terminal() {
        print_board(session.state());
    }
    if let Some(p) = &a.record {
        std::fs::write(p, to_json(&session.record()))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_board(state: &GameState) {
    for v in state.graph().vertices() {
        let who = match state.owner(v) {
            Some(p) => format!("{p} {}", state.troops(v)),
            None => "empty".to_string(),
        };
        println!("  {v}: {who:<10} -> {:?}", state.graph().neighbors(v));
    }
    match state.outcome() {
        Ok(out) => println!(
            "{}: territories {}-{}, troops {}-{}",
            out.result,
            out.territories[0],
            out.territories[1],
            out.surviving_troops[0],
            out.surviving_troops[1]
        ),
        Err(_) => println!(
            "{:?} phase, budgets Lata {} / Raj {}",
            state.phase(),
            state.budget(Player::Lata),
            state.budget(Player::Raj)
        ),
    }
}

fn serve(a: ServeArgs) -> anyhow::Result<ExitCode> {
    let config = ServerConfig {
        limits: a.limits.limits(Some(INTERACTIVE_NODE_LIMIT)),
        hint_workers: a.hint_workers,
        log_path: a.log,
    };
    let app = AppState::new(config)?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((a.bind.as_str(), a.port))
            .await
            .with_context(|| format!("binding {}:{}", a.bind, a.port))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, server::router(app))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok::<_, anyhow::Error>(())
    })?;
    Ok(ExitCode::SUCCESS)
}
