//! Loading a graph and answering queries from a console or a batch file.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{Context as _, Result};
use log::info;
use stepshare::terrain::{format_path, TerrainSssp};
use stepshare::{Engine, EngineConfig, QueryId, QueryOutcome, WorkerProgram};

use crate::config::Output;

/// Per-app rendering of an answer file.
pub trait CliApp: WorkerProgram {
    fn answer_text(&self, outcome: &QueryOutcome<Self>) -> String {
        outcome.format(self)
    }
}

impl CliApp for stepshare::ppsp::Bfs {}
impl CliApp for stepshare::ppsp::BiBfs {}
impl CliApp for stepshare::ppsp::Hub2 {}
impl CliApp for stepshare::xml::XmlSearch {}
impl CliApp for stepshare::reach::ReachSearch {}
impl CliApp for stepshare::gkws::GkwsPlain {}
impl CliApp for stepshare::gkws::GkwsRdf {}

impl CliApp for TerrainSssp {
    /// The record line followed by the path polyline.
    fn answer_text(&self, outcome: &QueryOutcome<Self>) -> String {
        let mut s = outcome.format(self);
        if let Ok(path) = outcome.result.as_ref().map_err(drop).and_then(|a| a.extract_path().map_err(drop)) {
            s.push('\n');
            s.push_str(format_path(path).trim_end());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRow {
    pub qid: QueryId,
    pub ok: bool,
    pub supersteps: u32,
    pub admitted_round: u64,
    pub finished_round: u64,
    pub vq_allocations: u64,
    pub messages: u64,
    pub wall: Duration,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub vertices: usize,
    pub load: Duration,
    pub rounds: u64,
    /// Messages sent in each round.
    pub round_messages: Vec<u64>,
    pub queries: Vec<QueryRow>,
}

impl RunStats {
    /// Share of the graph that held state for the query.
    pub fn access(&self, row: &QueryRow) -> f64 {
        if self.vertices == 0 {
            0.0
        } else {
            row.vq_allocations as f64 / self.vertices as f64
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("qid\tstatus\tsupersteps\tadmitted_round\tfinished_round\tvq_allocations\taccess\tmessages\twall_ms\n");
        let mut rows: Vec<&QueryRow> = self.queries.iter().collect();
        rows.sort_by_key(|r| r.qid);
        for r in rows {
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\t{:.3}",
                r.qid,
                if r.ok { "ok" } else { "error" },
                r.supersteps,
                r.admitted_round,
                r.finished_round,
                r.vq_allocations,
                self.access(r),
                r.messages,
                r.wall.as_secs_f64() * 1e3
            )
            .unwrap();
        }
        s
    }

    pub fn summary(&self) -> String {
        let msgs: u64 = self.round_messages.iter().sum();
        let per_round = if self.rounds == 0 { 0.0 } else { msgs as f64 / self.rounds as f64 };
        let failed = self.queries.iter().filter(|r| !r.ok).count();
        format!(
            "{} vertices loaded in {:.3}s; {} queries ({failed} failed) in {} rounds; {msgs} messages, {per_round:.1} per round",
            self.vertices,
            self.load.as_secs_f64(),
            self.queries.len(),
            self.rounds
        )
    }
}

/// Receives answers as they complete.
pub trait Sink {
    fn answer(&mut self, qid: QueryId, text: &str) -> Result<()>;
    fn finish(&mut self, stats: &RunStats) -> Result<()>;
}

/// Writes `<qid>.txt` per answer plus `_stats.tsv`.
pub struct DirSink {
    dir: PathBuf,
}

impl DirSink {
    pub fn create(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(DirSink { dir })
    }
}

impl Sink for DirSink {
    fn answer(&mut self, qid: QueryId, text: &str) -> Result<()> {
        let path = self.dir.join(format!("{qid}.txt"));
        fs::write(&path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
    }

    fn finish(&mut self, stats: &RunStats) -> Result<()> {
        fs::write(self.dir.join("_stats.tsv"), stats.to_tsv())?;
        eprintln!("{}", stats.summary());
        Ok(())
    }
}

pub struct WriterSink<W: Write>(pub W);

impl<W: Write> Sink for WriterSink<W> {
    fn answer(&mut self, _: QueryId, text: &str) -> Result<()> {
        writeln!(self.0, "{text}")?;
        Ok(())
    }

    fn finish(&mut self, stats: &RunStats) -> Result<()> {
        self.0.flush()?;
        eprintln!("{}", stats.summary());
        Ok(())
    }
}

pub fn sink_for(output: &Output) -> Result<Box<dyn Sink>> {
    Ok(match output {
        Output::Console => Box::new(WriterSink(io::stdout().lock())),
        Output::Dir(d) => Box::new(DirSink::create(d)?),
    })
}

const USAGE: &str = "enter one query per line; `help` shows this, `quit` ends the session";

pub struct Session<P: CliApp> {
    engine: Engine<P>,
    stats: RunStats,
    first_round: u64,
}

impl<P: CliApp> Session<P> {
    pub fn open(app: P, config: EngineConfig, graph: &Path) -> Result<Self> {
        let mut engine = Engine::new(app, config)?;
        let started = Instant::now();
        let vertices = engine.load_graph(graph).with_context(|| format!("loading {}", graph.display()))?;
        let load = started.elapsed();
        info!("loaded {vertices} vertices from {} in {load:?}", graph.display());
        Ok(Session { first_round: engine.rounds(), engine, stats: RunStats { vertices, load, ..Default::default() } })
    }

    pub fn engine(&self) -> &Engine<P> {
        &self.engine
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    fn record(&mut self, o: &QueryOutcome<P>) {
        self.stats.queries.push(QueryRow {
            qid: o.qid,
            ok: o.result.is_ok(),
            supersteps: o.stats.supersteps,
            admitted_round: o.stats.admitted_round,
            finished_round: o.stats.finished_round,
            vq_allocations: o.stats.vq_allocations,
            messages: o.stats.messages,
            wall: o.stats.wall,
        });
    }

    fn record_parse_error(&mut self, qid: QueryId) {
        let round = self.engine.rounds();
        self.stats.queries.push(QueryRow {
            qid,
            ok: false,
            supersteps: 0,
            admitted_round: round,
            finished_round: round,
            vq_allocations: 0,
            messages: 0,
            wall: Duration::ZERO,
        });
    }

    /// Runs one super-round and returns the rendered answers it finished.
    fn step(&mut self) -> Result<Vec<(QueryId, String, u32, f64)>> {
        let report = self.engine.run_super_round()?;
        self.stats.rounds = self.engine.rounds() - self.first_round;
        if !report.admitted.is_empty() || !report.finished.is_empty() || report.active_queries > 0 {
            self.stats.round_messages.push(report.messages_sent);
        }
        let mut done = Vec::new();
        for o in self.engine.drain_completed() {
            self.record(&o);
            let access = self.stats.access(self.stats.queries.last().unwrap());
            done.push((o.qid, self.engine.app().answer_text(&o), o.stats.supersteps, access));
        }
        Ok(done)
    }

    fn busy(&self) -> bool {
        self.engine.in_flight() > 0 || self.engine.queued() > 0
    }

    /// Answers every query line of `input`. Blank lines and `#` comments are
    /// skipped; lines that fail to parse get an error answer of their own.
    pub fn run_batch(&mut self, input: impl BufRead, sink: &mut dyn Sink) -> Result<()> {
        for line in input.lines() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Err(e) = self.engine.enqueue_str(text) {
                let qid = self.engine.submitter().reserve();
                self.record_parse_error(qid);
                sink.answer(qid, &format!("{qid} ERROR malformed query: {e}"))?;
            }
        }
        while self.busy() {
            for (qid, text, ..) in self.step()? {
                sink.answer(qid, &text)?;
            }
        }
        sink.finish(&self.stats)
    }

    /// Interactive loop. Lines are read on a separate thread so queries typed
    /// while rounds run join the queue straight away.
    pub fn run_console<R, W>(&mut self, input: R, out: &mut W, dump: Option<&Path>) -> Result<()>
    where
        R: BufRead + Send + 'static,
        W: Write,
    {
        let prompt = io::stdin().is_terminal();
        let (tx, rx) = mpsc::channel::<String>();
        thread::spawn(move || {
            for line in input.lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut quit = false;
        let mut eof = false;
        if prompt {
            write!(out, "> ")?;
            out.flush()?;
        }
        while !(quit || eof) || self.busy() {
            let mut lines = Vec::new();
            if !(quit || eof) {
                if self.busy() {
                    lines.extend(rx.try_iter());
                } else {
                    match rx.recv() {
                        Ok(l) => lines.push(l),
                        Err(_) => eof = true,
                    }
                }
            }
            for line in lines {
                if quit {
                    break;
                }
                let text = line.trim();
                match text {
                    "" => {}
                    "quit" | "exit" | ":q" | ":quit" => quit = true,
                    "help" | ":help" => writeln!(out, "{USAGE}")?,
                    ":stats" => writeln!(out, "{}", self.stats.summary())?,
                    _ if text.starts_with(':') => writeln!(out, "unknown command {text:?}; {USAGE}")?,
                    _ => {
                        if let Err(e) = self.engine.enqueue_str(text) {
                            writeln!(out, "error: {e} ({USAGE})")?;
                        }
                    }
                }
                if prompt && !quit {
                    write!(out, "> ")?;
                    out.flush()?;
                }
            }
            if self.busy() {
                for (_, text, supersteps, access) in self.step()? {
                    writeln!(out, "{text}")?;
                    writeln!(out, "  supersteps {supersteps}, access {:.4}%", access * 100.0)?;
                }
                out.flush()?;
            }
        }
        if quit {
            if let Some(path) = dump {
                self.engine.dump_graph(path).with_context(|| format!("dumping graph to {}", path.display()))?;
                info!("graph written to {}", path.display());
            }
        }
        Ok(())
    }
}
