mod common;

use std::thread;

use common::graph::bfs_all;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stepshare::graph_io::EdgeList;
use stepshare::ppsp::{vertices_from_edges, BiBfs, Bfs, Distance, PpspQuery};
use stepshare::program::AggValue;
use stepshare::synth::random_graph;
use stepshare::text::ParseError;
use stepshare::{
    Activation, Context, Engine, EngineConfig, EngineError, MissingTarget, NoAggregator, QueryError, QueryId,
    QueryStats, TransportKind, VertexData, VertexId, VertexProgram, WorkerProgram,
};

fn graph(seed: u64, n: usize, m: usize) -> EdgeList {
    random_graph(n, m, &mut StdRng::seed_from_u64(seed))
}

fn queries(n: usize, count: usize, seed: u64) -> Vec<PpspQuery> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| PpspQuery::new(rng.random_range(0..n as u64), rng.random_range(0..n as u64))).collect()
}

fn answers<P>(app: P, g: &EdgeList, qs: &[PpspQuery], cfg: EngineConfig) -> Vec<Distance>
where
    P: WorkerProgram<Query = PpspQuery, Answer = Distance, Value = stepshare::ppsp::PpspVertex>,
{
    let mut e = Engine::new(app, cfg).unwrap();
    e.load_vertices(vertices_from_edges(g, true)).unwrap();
    e.run_batch(qs.iter().copied()).unwrap().into_iter().map(|o| o.result.unwrap()).collect()
}

#[test]
fn answers_do_not_depend_on_workers_capacity_or_transport() {
    let g = graph(1, 150, 400);
    let qs = queries(150, 60, 2);
    let base = answers(Bfs::new(), &g, &qs, EngineConfig::new(1, 1));
    for w in [1, 2, 4] {
        for c in [1, 4, 8] {
            assert_eq!(answers(Bfs::new(), &g, &qs, EngineConfig::new(w, c)), base, "W={w} C={c}");
            assert_eq!(answers(BiBfs::new(), &g, &qs, EngineConfig::new(w, c)), base, "bibfs W={w} C={c}");
        }
    }
    let socket = EngineConfig::new(3, 8).with_transport(TransportKind::Socket);
    assert_eq!(answers(BiBfs::new(), &g, &qs, socket), base);
    assert_eq!(answers(Bfs::new(), &g, &qs, EngineConfig::new(3, 8).with_combiner(false)), base);
    assert_eq!(answers(BiBfs::new(), &g, &qs, EngineConfig::new(3, 8).with_shuffle(99)), base);
}

#[test]
fn one_barrier_per_round_and_idle_calls_are_free() {
    for transport in [TransportKind::InProcess, TransportKind::Socket] {
        let g = graph(3, 80, 200);
        let mut e = Engine::new(Bfs::new(), EngineConfig::new(2, 4).with_transport(transport)).unwrap();
        e.load_vertices(vertices_from_edges(&g, true)).unwrap();
        e.run_super_round().unwrap();
        assert_eq!(e.rounds(), 0);
        e.run_batch(queries(80, 20, 4)).unwrap();
        assert!(e.rounds() > 0);
        assert_eq!(e.barrier_count(), e.rounds());
    }
}

#[test]
fn lazy_allocation_counts_touched_vertices() {
    let g = graph(5, 120, 300);
    let adj = g.out_adj();
    let qs = queries(120, 40, 6);
    let mut e = Engine::new(Bfs::new(), EngineConfig::new(3, 5)).unwrap();
    e.load_vertices(vertices_from_edges(&g, true)).unwrap();
    let out = e.run_batch(qs.iter().copied()).unwrap();
    for (q, o) in qs.iter().zip(&out) {
        let dist = bfs_all(&adj, q.s.0 as usize);
        // Every vertex no farther than t receives a message (or is s); the
        // last superstep's messages are never delivered.
        let touched = match dist[q.t.0 as usize] {
            Some(dt) => dist.iter().filter(|d| d.is_some_and(|d| d <= dt)).count(),
            None => dist.iter().filter(|d| d.is_some()).count(),
        };
        assert_eq!(o.stats.vq_allocations, touched as u64, "{q:?}");
    }
    assert_eq!(e.live_vq_entries(), 0);
    assert!(e.peak_vq_entries() > 0);
    let total: u64 = out.iter().map(|o| o.stats.vq_allocations).sum();
    assert!(e.peak_vq_entries() as u64 <= total);
}

#[test]
fn rounds_queries_and_capacity() {
    let g = graph(7, 100, 250);
    let mut e = Engine::new(Bfs::new(), EngineConfig::new(3, 3)).unwrap();
    e.load_vertices(vertices_from_edges(&g, true)).unwrap();
    let alone = e.run_one(PpspQuery::new(0, 50)).unwrap();
    assert_eq!(alone.stats.finished_round - alone.stats.admitted_round, alone.stats.supersteps as u64);

    for q in queries(100, 25, 8) {
        e.enqueue(q);
    }
    let mut seen = 0;
    while e.in_flight() > 0 || e.queued() > 0 {
        let r = e.run_super_round().unwrap();
        assert!(e.in_flight() <= 3);
        assert!(e.query_tables_agree());
        for w in 0..3 {
            assert_eq!(e.worker(w).query_ids().len(), e.in_flight());
        }
        seen += r.finished.len();
    }
    assert_eq!(seen, 25);
    assert_eq!(e.live_vq_entries(), 0);
}

#[test]
fn queries_can_be_submitted_from_another_thread() {
    let g = graph(9, 60, 150);
    let mut e = Engine::new(BiBfs::new(), EngineConfig::new(2, 4)).unwrap();
    e.load_vertices(vertices_from_edges(&g, true)).unwrap();
    let sub = e.submitter();
    let qs = queries(60, 30, 10);
    let handle = thread::spawn({
        let qs = qs.clone();
        move || qs.into_iter().map(|q| sub.submit(q)).collect::<Vec<_>>()
    });
    let ids = handle.join().unwrap();
    assert_eq!(ids, (1..=30).map(QueryId).collect::<Vec<_>>());
    let mut out = e.run_until_idle().unwrap();
    out.sort_by_key(|o| o.qid);
    let want = answers(BiBfs::new(), &g, &qs, EngineConfig::new(1, 1));
    assert_eq!(out.into_iter().map(|o| o.result.unwrap()).collect::<Vec<_>>(), want);
}

#[test]
fn bad_queries_fail_alone() {
    let g = graph(11, 30, 60);
    let mut e = Engine::new(Bfs::new(), EngineConfig::new(2, 4)).unwrap();
    e.load_vertices(vertices_from_edges(&g, true)).unwrap();
    let out = e.run_batch([PpspQuery::new(0, 1), PpspQuery::new(999, 1), PpspQuery::new(2, 3)]).unwrap();
    assert_eq!(out[1].result, Err(QueryError::UnknownVertex(VertexId(999))));
    assert_eq!(out[1].format(e.app()), "2 ERROR vertex 999 is not in the graph");
    assert!(out[0].result.is_ok() && out[2].result.is_ok());
    assert_eq!(e.live_vq_entries(), 0);
    assert!(e.enqueue_str("1 x").is_err());
}

#[test]
fn loading_errors() {
    let mut e = Engine::new(Bfs::new(), EngineConfig::new(2, 4)).unwrap();
    let err = e.load_reader("# comment\n0\t1\n\n1\t0\n0\t1\n".as_bytes()).unwrap_err();
    assert!(matches!(err, EngineError::DuplicateVertex(VertexId(0))), "{err}");
    let mut e = Engine::new(Bfs::new(), EngineConfig::new(2, 4)).unwrap();
    let err = e.load_reader("0\t1\nx\t2\n".as_bytes()).unwrap_err();
    assert!(matches!(err, EngineError::Parse { line: 2, .. }), "{err}");
    assert!(Engine::new(Bfs::new(), EngineConfig::new(0, 4)).is_err());
    assert!(Engine::new(Bfs::new(), EngineConfig::new(2, 0)).is_err());
}

#[test]
fn graph_dump_round_trips() {
    let g = graph(12, 40, 90);
    let mut e = Engine::new(Bfs::new(), EngineConfig::new(3, 4)).unwrap();
    e.load_vertices(vertices_from_edges(&g, true)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    e.dump_graph(&path).unwrap();
    let mut f = Engine::new(Bfs::new(), EngineConfig::new(2, 4)).unwrap();
    f.load_graph(&path).unwrap();
    assert_eq!(f.dump_vdata_lines(), e.dump_vdata_lines());
    assert_eq!(f.num_vertices(), 40);
}

/// Walks `steps` hops from `start`, adding `tag` to the query value of every
/// vertex it passes. Optionally messages a vertex that does not exist.
struct Walk;

#[derive(Debug, Clone, PartialEq)]
struct WalkQuery {
    start: VertexId,
    steps: u32,
    tag: u64,
    stray: Option<VertexId>,
}

impl VertexProgram for Walk {
    type Value = Vec<VertexId>;
    type QValue = u64;
    type Msg = u64;
    type Query = WalkQuery;
    type Agg = NoAggregator;

    fn aggregator(&self) -> &NoAggregator {
        &NoAggregator
    }

    fn init_value(&self, _: &VertexData<Vec<VertexId>>, _: &WalkQuery) -> u64 {
        0
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[u64]) -> Result<(), QueryError> {
        let q = ctx.query();
        *ctx.qvalue_mut() += q.tag * (msgs.len() as u64).max(1);
        if ctx.superstep() <= q.steps {
            for &u in ctx.value() {
                ctx.send(u, q.tag);
            }
        }
        if let (Some(s), 1) = (q.stray, ctx.superstep()) {
            ctx.send(s, 0);
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for Walk {
    type Index = ();
    type Part = (VertexId, u64);
    type Answer = Vec<(VertexId, u64)>;

    fn parse_vertex(&self, _: &str) -> Result<VertexData<Vec<VertexId>>, ParseError> {
        Err(ParseError::new("unused"))
    }

    fn parse_query(&self, _: &str) -> Result<WalkQuery, ParseError> {
        Err(ParseError::new("unused"))
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let s = act.query().start;
        if let Some(p) = act.get_vpos(s) {
            act.activate(p);
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<Vec<VertexId>>, x: &u64, _: &WalkQuery, out: &mut Vec<(VertexId, u64)>) {
        out.push((v.id, *x));
    }

    fn assemble(&self, _: &WalkQuery, _: &AggValue<Self>, mut parts: Vec<(VertexId, u64)>) -> Result<Self::Answer, QueryError> {
        parts.sort();
        Ok(parts)
    }

    fn format_answer(&self, qid: QueryId, _: &WalkQuery, a: &Self::Answer, _: &QueryStats) -> String {
        format!("{qid} {}", a.len())
    }
}

fn walk_engine(cfg: EngineConfig) -> Engine<Walk> {
    let g = graph(13, 50, 140);
    let mut e = Engine::new(Walk, cfg).unwrap();
    e.load_vertices(g.out_adj().into_iter().enumerate().map(|(i, a)| VertexData::new(i as u64, a.into_iter().map(VertexId).collect())))
        .unwrap();
    e
}

#[test]
fn concurrent_queries_keep_separate_state() {
    let qs: Vec<WalkQuery> =
        (0..12).map(|i| WalkQuery { start: VertexId(i * 3), steps: 1 + (i as u32 % 4), tag: 1 << i, stray: None }).collect();
    let mut alone = Vec::new();
    for q in &qs {
        alone.push(walk_engine(EngineConfig::new(2, 1)).run_one(q.clone()).unwrap().result.unwrap());
    }
    let mut e = walk_engine(EngineConfig::new(4, 12).with_combiner(false));
    let together: Vec<_> = e.run_batch(qs.clone()).unwrap().into_iter().map(|o| o.result.unwrap()).collect();
    assert_eq!(together, alone);
    for (q, a) in qs.iter().zip(&together) {
        assert!(a.iter().all(|(_, x)| x % q.tag == 0 && *x > 0));
    }
}

#[test]
fn messages_to_missing_vertices() {
    let stray = WalkQuery { start: VertexId(0), steps: 2, tag: 1, stray: Some(VertexId(777)) };
    let mut e = walk_engine(EngineConfig::new(3, 4));
    let out = e.run_batch([stray.clone(), WalkQuery { stray: None, ..stray.clone() }]).unwrap();
    assert_eq!(out[0].result, Err(QueryError::MissingTarget(VertexId(777))));
    assert!(out[1].result.is_ok());
    let mut e = walk_engine(EngineConfig::new(3, 4).with_missing_target(MissingTarget::Drop));
    let out = e.run_batch([stray.clone(), WalkQuery { stray: None, ..stray }]).unwrap();
    assert_eq!(out[0].result, out[1].result);
    assert_eq!(e.live_vq_entries(), 0);
}
