//! The superstep-sharing scheduler.
//!
//! Each call to [`Engine::run_super_round`] admits queued queries up to the
//! capacity, advances every in-flight query by one superstep on all workers
//! in parallel, and exchanges the messages of all queries behind a single
//! barrier. A query that needs `n` supersteps occupies `n + 1` rounds; in the
//! last one its results are dumped and its state is released.

pub mod transport;
pub mod wire;

use std::collections::{BTreeMap, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::mem;
use std::path::Path;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use log::warn;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::{EngineError, QueryError};
use crate::model::{owner_of, QueryId, QueryState, VertexData, VertexId, VertexSlot, WorkerState};
use crate::program::{Activation, AggPartial, AggValue, Aggregator, Context, VertexProgram, WorkerProgram};
use transport::{Batch, Outgoing, Transport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransportKind {
    #[default]
    InProcess,
    /// TCP over loopback, one connection per worker pair.
    Socket,
}

/// What happens to a message addressed to a vertex that does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingTarget {
    /// The query fails with [`QueryError::MissingTarget`].
    #[default]
    Fail,
    /// The message is dropped with a warning.
    Drop,
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub workers: usize,
    /// Maximum number of queries in flight.
    pub capacity: usize,
    pub combiner: bool,
    pub transport: TransportKind,
    pub missing_target: MissingTarget,
    /// Shuffle every inbox with this seed before compute.
    pub shuffle_inboxes: Option<u64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            workers: 4,
            capacity: 8,
            combiner: true,
            transport: TransportKind::InProcess,
            missing_target: MissingTarget::Fail,
            shuffle_inboxes: None,
        }
    }
}

impl EngineConfig {
    pub fn new(workers: usize, capacity: usize) -> Self {
        EngineConfig { workers, capacity, ..Default::default() }
    }

    pub fn with_combiner(mut self, on: bool) -> Self {
        self.combiner = on;
        self
    }

    pub fn with_transport(mut self, t: TransportKind) -> Self {
        self.transport = t;
        self
    }

    pub fn with_missing_target(mut self, m: MissingTarget) -> Self {
        self.missing_target = m;
        self
    }

    pub fn with_shuffle(mut self, seed: u64) -> Self {
        self.shuffle_inboxes = Some(seed);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryStats {
    /// Compute supersteps executed.
    pub supersteps: u32,
    pub admitted_round: u64,
    /// Round in which the results were dumped.
    pub finished_round: u64,
    /// VQ entries created for the query over all workers.
    pub vq_allocations: u64,
    pub messages: u64,
    pub wall: Duration,
}

pub struct QueryOutcome<P: WorkerProgram> {
    pub qid: QueryId,
    pub query: Arc<P::Query>,
    pub result: Result<P::Answer, QueryError>,
    pub stats: QueryStats,
}

impl<P: WorkerProgram> QueryOutcome<P> {
    /// One answer record, or an error record.
    pub fn format(&self, app: &P) -> String {
        match &self.result {
            Ok(a) => app.format_answer(self.qid, &self.query, a, &self.stats),
            Err(e) => format!("{} ERROR {}", self.qid, e),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuperRoundReport {
    pub round: u64,
    pub admitted: Vec<QueryId>,
    pub finished: Vec<QueryId>,
    pub messages_sent: u64,
    pub active_queries: usize,
}

type Queue<Q> = Arc<Mutex<VecDeque<(QueryId, Arc<Q>)>>>;

/// Enqueues queries into a running engine from any thread.
pub struct QuerySubmitter<Q> {
    queue: Queue<Q>,
    next: Arc<AtomicU32>,
}

impl<Q> Clone for QuerySubmitter<Q> {
    fn clone(&self) -> Self {
        QuerySubmitter { queue: self.queue.clone(), next: self.next.clone() }
    }
}

impl<Q> QuerySubmitter<Q> {
    pub fn submit(&self, query: Q) -> QueryId {
        let mut queue = self.queue.lock().expect("queue poisoned");
        // allocate under the lock so ids follow queue order
        let qid = QueryId(self.next.fetch_add(1, Ordering::Relaxed));
        queue.push_back((qid, Arc::new(query)));
        qid
    }

    /// Takes the next query id without queueing anything, so a caller can
    /// report a query that failed to parse under its own id.
    pub fn reserve(&self) -> QueryId {
        let _queue = self.queue.lock().expect("queue poisoned");
        QueryId(self.next.fetch_add(1, Ordering::Relaxed))
    }

    pub fn len(&self) -> usize {
        self.queue.lock().expect("queue poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct Tracked<P: WorkerProgram> {
    content: Arc<P::Query>,
    agg: AggValue<P>,
    supersteps: u32,
    admitted_round: u64,
    started: Instant,
    messages: u64,
    error: Option<QueryError>,
}

struct RoundOptions {
    round: u64,
    combine: bool,
    missing: MissingTarget,
    shuffle: Option<u64>,
}

struct QueryRound<P: VertexProgram> {
    active: u64,
    sent: u64,
    partial: AggPartial<P>,
    force: bool,
    error: Option<QueryError>,
}

struct Dumped<P: WorkerProgram> {
    qid: QueryId,
    parts: Vec<P::Part>,
    allocations: u64,
}

struct WorkerRound<P: WorkerProgram> {
    outgoing: Vec<Vec<Batch<P::Msg>>>,
    queries: Vec<(QueryId, QueryRound<P>)>,
    dumped: Vec<Dumped<P>>,
    live_vq: usize,
}

pub struct Engine<P: WorkerProgram> {
    app: P,
    config: EngineConfig,
    workers: Vec<WorkerState<P>>,
    mailboxes: Vec<Vec<Batch<P::Msg>>>,
    transport: Transport,
    submitter: QuerySubmitter<P::Query>,
    tracked: BTreeMap<QueryId, Tracked<P>>,
    completed: VecDeque<QueryOutcome<P>>,
    round: u64,
    peak_vq: usize,
}

impl<P: WorkerProgram> Engine<P> {
    pub fn new(app: P, config: EngineConfig) -> Result<Self, EngineError> {
        if config.workers == 0 {
            return Err(EngineError::Config("workers must be at least 1".into()));
        }
        if config.capacity == 0 {
            return Err(EngineError::Config("capacity must be at least 1".into()));
        }
        let w = config.workers;
        let transport = match config.transport {
            TransportKind::InProcess => Transport::in_process(),
            TransportKind::Socket => Transport::socket(w)?,
        };
        Ok(Engine {
            app,
            workers: (0..w).map(|i| WorkerState::new(i, w)).collect(),
            mailboxes: (0..w).map(|_| Vec::new()).collect(),
            transport,
            submitter: QuerySubmitter { queue: Arc::default(), next: Arc::new(AtomicU32::new(1)) },
            tracked: BTreeMap::new(),
            completed: VecDeque::new(),
            round: 0,
            peak_vq: 0,
            config,
        })
    }

    pub fn app(&self) -> &P {
        &self.app
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    // ---- loading ----

    /// Adds vertices, routing each to its owner. Only between queries.
    pub fn load_vertices<I>(&mut self, vertices: I) -> Result<usize, EngineError>
    where
        I: IntoIterator<Item = VertexData<P::Value>>,
    {
        if !self.tracked.is_empty() {
            return Err(EngineError::Config("cannot load while queries are in flight".into()));
        }
        let mut n = 0;
        for v in vertices {
            self.insert_vertex(v)?;
            n += 1;
        }
        Ok(n)
    }

    fn insert_vertex(&mut self, v: VertexData<P::Value>) -> Result<(), EngineError> {
        let w = &mut self.workers[owner_of(v.id, self.config.workers)];
        if w.ht_v.contains_key(&v.id) {
            return Err(EngineError::DuplicateVertex(v.id));
        }
        let pos = w.varray.len();
        w.ht_v.insert(v.id, pos as u32);
        self.app.load_to_index(&mut w.local_index, &v, pos);
        w.varray.push(VertexSlot::new(v));
        Ok(())
    }

    /// Loads one vertex per line; blank lines and `#` comments are skipped.
    pub fn load_reader(&mut self, reader: impl BufRead) -> Result<usize, EngineError> {
        if !self.tracked.is_empty() {
            return Err(EngineError::Config("cannot load while queries are in flight".into()));
        }
        let mut n = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let v = self
                .app
                .parse_vertex(&line)
                .map_err(|e| EngineError::Parse { line: i + 1, message: e.0 })?;
            self.insert_vertex(v)?;
            n += 1;
        }
        Ok(n)
    }

    pub fn load_graph(&mut self, path: impl AsRef<Path>) -> Result<usize, EngineError> {
        self.load_reader(BufReader::new(File::open(path)?))
    }

    /// V-data lines of every vertex, ordered by vertex id.
    pub fn dump_vdata_lines(&self) -> Vec<String> {
        let mut lines: Vec<(VertexId, String)> = self
            .workers
            .iter()
            .flat_map(|w| w.vertices())
            .filter_map(|v| self.app.dump_vdata(v).map(|l| (v.id, l)))
            .collect();
        lines.sort_by_key(|(id, _)| *id);
        lines.into_iter().map(|(_, l)| l).collect()
    }

    pub fn dump_graph(&self, path: impl AsRef<Path>) -> Result<(), EngineError> {
        let mut out = BufWriter::new(File::create(path)?);
        for l in self.dump_vdata_lines() {
            writeln!(out, "{l}")?;
        }
        out.flush()?;
        Ok(())
    }

    // ---- inspection ----

    pub fn num_vertices(&self) -> usize {
        self.workers.iter().map(|w| w.len()).sum()
    }

    pub fn worker(&self, i: usize) -> &WorkerState<P> {
        &self.workers[i]
    }

    /// (worker, position) of a vertex.
    pub fn get_vpos(&self, id: VertexId) -> Option<(usize, usize)> {
        let w = owner_of(id, self.config.workers);
        self.workers[w].get_vpos(id).map(|p| (w, p))
    }

    pub fn vertex(&self, id: VertexId) -> Option<&VertexData<P::Value>> {
        self.get_vpos(id).map(|(w, p)| &self.workers[w].varray[p].data)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexData<P::Value>> {
        self.workers.iter().flat_map(|w| w.vertices())
    }

    /// Takes all vertices out, ordered by id.
    pub fn into_vertices(self) -> Vec<VertexData<P::Value>> {
        let mut all: Vec<_> = self.workers.into_iter().flat_map(|w| w.varray.into_iter().map(|s| s.data)).collect();
        all.sort_by_key(|v| v.id);
        all
    }

    pub fn rounds(&self) -> u64 {
        self.round
    }

    pub fn barrier_count(&self) -> u64 {
        self.transport.barriers()
    }

    pub fn peak_vq_entries(&self) -> usize {
        self.peak_vq
    }

    pub fn live_vq_entries(&self) -> usize {
        self.workers.iter().map(|w| w.live_vq_entries()).sum()
    }

    pub fn in_flight(&self) -> usize {
        self.tracked.len()
    }

    pub fn queued(&self) -> usize {
        self.submitter.len()
    }

    /// True when every worker holds the same set of in-flight queries.
    pub fn query_tables_agree(&self) -> bool {
        let first = self.workers[0].query_ids();
        self.workers.iter().all(|w| w.query_ids() == first)
    }

    // ---- queries ----

    pub fn submitter(&self) -> QuerySubmitter<P::Query> {
        self.submitter.clone()
    }

    pub fn enqueue(&self, query: P::Query) -> QueryId {
        self.submitter.submit(query)
    }

    /// Parses and enqueues a query string.
    pub fn enqueue_str(&self, text: &str) -> Result<QueryId, crate::text::ParseError> {
        Ok(self.enqueue(self.app.parse_query(text)?))
    }

    /// Admits queued queries while fewer than `capacity` are in flight.
    pub fn begin_super_round(&mut self) -> Vec<QueryId> {
        let mut admitted = Vec::new();
        while self.tracked.len() < self.config.capacity {
            let next = self.submitter.queue.lock().expect("queue poisoned").pop_front();
            let Some((qid, content)) = next else { break };
            self.admit(qid, content);
            admitted.push(qid);
        }
        admitted
    }

    fn admit(&mut self, qid: QueryId, content: Arc<P::Query>) {
        let agg = self.app.aggregator().initial(&content);
        let w = self.config.workers;
        let mut error = None;
        let mut states = Vec::with_capacity(w);
        for worker in &mut self.workers {
            let mut qs = QueryState::<P>::new(qid, content.clone(), agg.clone(), w);
            let mut act = Activation {
                app: &self.app,
                worker: worker.index,
                workers: w,
                varray: &mut worker.varray,
                ht_v: &worker.ht_v,
                index: &worker.local_index,
                query: &mut qs,
            };
            if let Err(e) = self.app.init_activate(&mut act) {
                error.get_or_insert(e);
            }
            states.push(qs);
        }
        for (worker, mut qs) in self.workers.iter_mut().zip(states) {
            if error.is_some() {
                qs.error = error.clone();
            }
            worker.ht_q.insert(qid, qs);
        }
        self.tracked.insert(
            qid,
            Tracked {
                content,
                agg,
                supersteps: 0,
                admitted_round: self.round + 1,
                started: Instant::now(),
                messages: 0,
                error,
            },
        );
    }

    /// Runs one super-round. With nothing in flight and nothing queued this
    /// is a no-op that does not count as a round.
    pub fn run_super_round(&mut self) -> Result<SuperRoundReport, EngineError> {
        let admitted = self.begin_super_round();
        if self.tracked.is_empty() {
            return Ok(SuperRoundReport { round: self.round, ..Default::default() });
        }
        self.round += 1;
        let opts = RoundOptions {
            round: self.round,
            combine: self.config.combiner,
            missing: self.config.missing_target,
            shuffle: self.config.shuffle_inboxes,
        };
        let mailboxes = mem::take(&mut self.mailboxes);
        let app = &self.app;
        let results: Vec<WorkerRound<P>> = if self.workers.len() == 1 {
            vec![self.workers[0].run_round(app, mailboxes.into_iter().next().unwrap_or_default(), &opts)]
        } else {
            self.workers
                .par_iter_mut()
                .zip(mailboxes.into_par_iter())
                .map(|(w, mb)| w.run_round(app, mb, &opts))
                .collect()
        };

        let mut outgoing: Outgoing<P::Msg> = Vec::with_capacity(results.len());
        let mut merged: BTreeMap<QueryId, QueryRound<P>> = BTreeMap::new();
        let mut dumped: BTreeMap<QueryId, (Vec<P::Part>, u64)> = BTreeMap::new();
        let mut live_vq = 0;
        for r in results {
            outgoing.push(r.outgoing);
            live_vq += r.live_vq;
            for (qid, s) in r.queries {
                match merged.get_mut(&qid) {
                    None => {
                        merged.insert(qid, s);
                    }
                    Some(m) => {
                        m.active += s.active;
                        m.sent += s.sent;
                        m.force |= s.force;
                        if m.error.is_none() {
                            m.error = s.error;
                        }
                        self.app.aggregator().merge(&mut m.partial, s.partial);
                    }
                }
            }
            for d in r.dumped {
                let e = dumped.entry(d.qid).or_insert_with(|| (Vec::new(), 0));
                e.0.extend(d.parts);
                e.1 += d.allocations;
            }
        }
        self.peak_vq = self.peak_vq.max(live_vq);

        self.mailboxes = self.transport.exchange(outgoing)?;

        let mut messages_sent = 0;
        for (qid, m) in merged {
            let t = self.tracked.get_mut(&qid).expect("tracked query");
            t.supersteps += 1;
            t.messages += m.sent;
            messages_sent += m.sent;
            let finished = if let Some(e) = m.error {
                t.error.get_or_insert(e);
                true
            } else if t.error.is_some() {
                true
            } else {
                let f = self.app.aggregator().finish(&t.content, t.supersteps, &t.agg, m.partial);
                t.agg = f.value;
                m.force || f.terminate || (m.active == 0 && m.sent == 0)
            };
            for w in &mut self.workers {
                let q = w.ht_q.get_mut(&qid).expect("query on every worker");
                q.agg_prev = t.agg.clone();
                if finished {
                    q.finished = true;
                } else {
                    q.step += 1;
                }
            }
        }

        let mut finished = Vec::new();
        for (qid, (parts, allocations)) in dumped {
            let t = self.tracked.remove(&qid).expect("tracked query");
            let result = match t.error {
                Some(e) => Err(e),
                None => self.app.assemble(&t.content, &t.agg, parts),
            };
            self.completed.push_back(QueryOutcome {
                qid,
                query: t.content,
                result,
                stats: QueryStats {
                    supersteps: t.supersteps,
                    admitted_round: t.admitted_round,
                    finished_round: self.round,
                    vq_allocations: allocations,
                    messages: t.messages,
                    wall: t.started.elapsed(),
                },
            });
            finished.push(qid);
        }

        Ok(SuperRoundReport {
            round: self.round,
            admitted,
            finished,
            messages_sent,
            active_queries: self.tracked.len(),
        })
    }

    /// Finished queries not yet taken, in completion order.
    pub fn drain_completed(&mut self) -> Vec<QueryOutcome<P>> {
        self.completed.drain(..).collect()
    }

    /// Runs rounds until the queue is empty and nothing is in flight.
    pub fn run_until_idle(&mut self) -> Result<Vec<QueryOutcome<P>>, EngineError> {
        while !self.tracked.is_empty() || !self.submitter.is_empty() {
            self.run_super_round()?;
        }
        Ok(self.drain_completed())
    }

    /// Enqueues `queries`, runs them all and returns outcomes in id order.
    pub fn run_batch(&mut self, queries: impl IntoIterator<Item = P::Query>) -> Result<Vec<QueryOutcome<P>>, EngineError> {
        for q in queries {
            self.enqueue(q);
        }
        let mut out = self.run_until_idle()?;
        out.sort_by_key(|o| o.qid);
        Ok(out)
    }

    /// Runs a single query to completion.
    pub fn run_one(&mut self, query: P::Query) -> Result<QueryOutcome<P>, EngineError> {
        let qid = self.enqueue(query);
        let mut done = self.run_until_idle()?;
        let pos = done.iter().position(|o| o.qid == qid).expect("query completed");
        let out = done.swap_remove(pos);
        self.completed.extend(done);
        Ok(out)
    }
}

impl<P: WorkerProgram> WorkerState<P> {
    fn run_round(&mut self, app: &P, mailbox: Vec<Batch<P::Msg>>, opts: &RoundOptions) -> WorkerRound<P> {
        for batch in mailbox {
            let Some(q) = self.ht_q.get_mut(&batch.query) else { continue };
            if q.finished {
                continue;
            }
            for (dst, msg) in batch.messages {
                match self.ht_v.get(&dst) {
                    Some(&pos) => q.incoming.push((pos, msg)),
                    None => match opts.missing {
                        MissingTarget::Fail => {
                            q.error.get_or_insert(QueryError::MissingTarget(dst));
                        }
                        MissingTarget::Drop => warn!("query {}: dropped message to missing vertex {dst}", q.qid),
                    },
                }
            }
        }

        let mut rng = opts
            .shuffle
            .map(|s| StdRng::seed_from_u64(s ^ opts.round.wrapping_mul(0x9e37_79b9) ^ (self.index as u64) << 48));
        let mut out = WorkerRound {
            outgoing: (0..self.workers).map(|_| Vec::new()).collect(),
            queries: Vec::new(),
            dumped: Vec::new(),
            live_vq: 0,
        };
        let qids: Vec<QueryId> = self.ht_q.keys().copied().collect();
        for qid in qids {
            if self.ht_q[&qid].finished {
                out.dumped.push(self.dump_query(app, qid));
                continue;
            }
            let stats = self.compute_query(app, qid, opts.combine, rng.as_mut(), &mut out.outgoing);
            out.queries.push((qid, stats));
        }
        out.live_vq = self.ht_q.values().map(|q| q.touched.len()).sum();
        out
    }

    fn compute_query(
        &mut self,
        app: &P,
        qid: QueryId,
        combine: bool,
        mut rng: Option<&mut StdRng>,
        outgoing: &mut [Vec<Batch<P::Msg>>],
    ) -> QueryRound<P> {
        let combiner = if combine { app.combiner() } else { None };
        let varray = &mut self.varray;
        let q = self.ht_q.get_mut(&qid).expect("query present");
        let QueryState {
            content,
            step,
            outboxes,
            agg_prev,
            agg_partial,
            force_term,
            active_count,
            sent_count,
            error,
            touched,
            frontier,
            incoming,
            ..
        } = q;
        *active_count = 0;
        *sent_count = 0;
        let content: &P::Query = content;

        if error.is_none() {
            for (pos, msg) in incoming.drain(..) {
                let (entry, created) = varray[pos as usize].vq_get_or_init(qid, |v| app.init_value(v, content));
                if created {
                    touched.push(pos);
                }
                match (combiner, entry.inbox.first_mut()) {
                    (Some(c), Some(first)) => c.combine(first, msg),
                    _ => entry.inbox.push(msg),
                }
                frontier.push(pos);
            }
            frontier.sort_unstable();
            frontier.dedup();
            for pos in mem::take(frontier) {
                let VertexSlot { data, lut } = &mut varray[pos as usize];
                let Some(entry) = lut.get_mut(&qid) else { continue };
                if !entry.active && entry.inbox.is_empty() {
                    continue;
                }
                entry.active = true;
                let mut msgs = mem::take(&mut entry.inbox);
                if let Some(r) = rng.as_deref_mut() {
                    msgs.shuffle(r);
                }
                let mut ctx = Context {
                    app,
                    vertex: data,
                    qvalue: &mut entry.value,
                    active: &mut entry.active,
                    qid,
                    query: content,
                    step: *step,
                    agg_prev,
                    agg_partial: &mut *agg_partial,
                    outboxes: &mut outboxes[..],
                    sent: &mut *sent_count,
                    force_term: &mut *force_term,
                };
                if let Err(e) = app.compute(&mut ctx, &msgs) {
                    *error = Some(e);
                    break;
                }
                if entry.active {
                    *active_count += 1;
                    frontier.push(pos);
                }
                if entry.inbox.is_empty() {
                    msgs.clear();
                    entry.inbox = msgs;
                }
            }
        } else {
            incoming.clear();
        }

        if error.is_some() {
            outboxes.iter_mut().for_each(Vec::clear);
        }
        for (w, ob) in outboxes.iter_mut().enumerate() {
            if ob.is_empty() {
                continue;
            }
            let mut msgs = mem::take(ob);
            if let Some(c) = combiner {
                msgs = combine_by_destination(c, msgs);
            }
            outgoing[w].push(Batch { query: qid, messages: msgs });
        }
        QueryRound {
            active: *active_count,
            sent: *sent_count,
            partial: mem::take(agg_partial),
            force: *force_term,
            error: error.clone(),
        }
    }

    /// Hands every VQ entry of a finished query to the dump hook, then
    /// releases the query's state on this worker.
    fn dump_query(&mut self, app: &P, qid: QueryId) -> Dumped<P> {
        let q = &self.ht_q[&qid];
        let mut parts = Vec::new();
        if q.error.is_none() {
            for &pos in &q.touched {
                let VertexSlot { data, lut } = &mut self.varray[pos as usize];
                if let Some(entry) = lut.get(&qid) {
                    app.dump_vertex(data, &entry.value, &q.content, &mut parts);
                }
            }
        }
        let allocations = q.touched.len() as u64;
        self.gc_query(qid);
        Dumped { qid, parts, allocations }
    }
}

fn combine_by_destination<M>(c: &dyn crate::program::Combiner<M>, msgs: Vec<(VertexId, M)>) -> Vec<(VertexId, M)> {
    let mut slot: std::collections::HashMap<VertexId, usize> = std::collections::HashMap::with_capacity(msgs.len());
    let mut out: Vec<(VertexId, M)> = Vec::with_capacity(msgs.len());
    for (dst, m) in msgs {
        match slot.get(&dst) {
            Some(&i) => c.combine(&mut out[i].1, m),
            None => {
                slot.insert(dst, out.len());
                out.push((dst, m));
            }
        }
    }
    out
}
