use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData};
use crate::program::{Activation, AggValue, Aggregator, Combiner, Context, Finish, NoAggregator, VertexProgram, WorkerProgram};
use crate::text::ParseError;

use super::{activate_endpoints, Distance, PpspQuery, PpspVertex, INF};

/// Keeps one of several identical messages.
pub(crate) struct KeepOne;

impl Combiner<()> for KeepOne {
    fn combine(&self, _: &mut (), _: ()) {}
}

pub(crate) struct OrBits;

impl Combiner<u8> for OrBits {
    fn combine(&self, into: &mut u8, other: u8) {
        *into |= other;
    }
}

pub(crate) const FWD: u8 = 1;
pub(crate) const BWD: u8 = 2;

/// Breadth-first search from `s` until `t` is reached.
#[derive(Debug, Default)]
pub struct Bfs {
    agg: NoAggregator,
}

impl Bfs {
    pub fn new() -> Self {
        Bfs::default()
    }
}

impl VertexProgram for Bfs {
    type Value = PpspVertex;
    type QValue = u32;
    type Msg = ();
    type Query = PpspQuery;
    type Agg = NoAggregator;

    fn aggregator(&self) -> &NoAggregator {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<()>> {
        Some(&KeepOne)
    }

    fn init_value(&self, v: &VertexData<PpspVertex>, q: &PpspQuery) -> u32 {
        if v.id == q.s {
            0
        } else {
            INF
        }
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, _: &[()]) -> Result<(), QueryError> {
        let step = ctx.superstep();
        if step == 1 || *ctx.qvalue() == INF {
            *ctx.qvalue_mut() = step - 1;
            if ctx.id() == ctx.query().t {
                ctx.force_terminate();
            } else {
                for &u in &ctx.value().out {
                    ctx.send(u, ());
                }
            }
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for Bfs {
    type Index = ();
    type Part = u32;
    type Answer = Distance;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<PpspVertex>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<PpspQuery, ParseError> {
        super::parse_query(text)
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let q = *act.query();
        activate_endpoints(act, &[q.s])?;
        // t must exist even though it is not activated
        if act.is_owner(q.t) && act.get_vpos(q.t).is_none() {
            return Err(QueryError::UnknownVertex(q.t));
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<PpspVertex>, d: &u32, q: &PpspQuery, out: &mut Vec<u32>) {
        if v.id == q.t {
            out.push(*d);
        }
    }

    fn assemble(&self, _: &PpspQuery, _: &(), parts: Vec<u32>) -> Result<Distance, QueryError> {
        Ok(Distance::from_raw(parts.into_iter().min().unwrap_or(INF)))
    }

    fn format_answer(&self, qid: QueryId, q: &PpspQuery, d: &Distance, stats: &QueryStats) -> String {
        super::format_answer(qid, q, d, stats)
    }

    fn dump_vdata(&self, v: &VertexData<PpspVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}

/// Per-superstep counts and the best meeting distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiPartial {
    pub fwd_sent: u64,
    pub bwd_sent: u64,
    pub best: u32,
}

impl Default for BiPartial {
    fn default() -> Self {
        BiPartial { fwd_sent: 0, bwd_sent: 0, best: INF }
    }
}

impl BiPartial {
    pub(crate) fn merge(&mut self, o: BiPartial) {
        self.fwd_sent += o.fwd_sent;
        self.bwd_sent += o.bwd_sent;
        self.best = self.best.min(o.best);
    }
}

/// Tracks `min(ds + dt)` over bi-reached vertices and stops the search once
/// either direction has run dry.
#[derive(Debug, Default)]
pub struct BiBfsAgg;

impl Aggregator<PpspQuery> for BiBfsAgg {
    type Partial = BiPartial;
    type Value = u32;

    fn initial(&self, _: &PpspQuery) -> u32 {
        INF
    }

    fn merge(&self, into: &mut BiPartial, other: BiPartial) {
        into.merge(other);
    }

    fn finish(&self, _: &PpspQuery, _: u32, prev: &u32, m: BiPartial) -> Finish<u32> {
        let best = (*prev).min(m.best);
        if m.fwd_sent == 0 || m.bwd_sent == 0 {
            Finish::terminate(best)
        } else {
            Finish::next(best)
        }
    }
}

/// Bidirectional BFS: forward from `s` along out-edges, backward from `t`
/// along in-edges, stopping at the first superstep in which some vertex is
/// reached from both sides.
#[derive(Debug, Default)]
pub struct BiBfs {
    agg: BiBfsAgg,
}

impl BiBfs {
    pub fn new() -> Self {
        BiBfs::default()
    }
}

/// `(ds, dt)`.
pub type DistPair = (u32, u32);

fn init_pair(v: &VertexData<PpspVertex>, q: &PpspQuery) -> DistPair {
    (if v.id == q.s { 0 } else { INF }, if v.id == q.t { 0 } else { INF })
}

impl VertexProgram for BiBfs {
    type Value = PpspVertex;
    type QValue = DistPair;
    type Msg = u8;
    type Query = PpspQuery;
    type Agg = BiBfsAgg;

    fn aggregator(&self) -> &BiBfsAgg {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<u8>> {
        Some(&OrBits)
    }

    fn init_value(&self, v: &VertexData<PpspVertex>, q: &PpspQuery) -> DistPair {
        init_pair(v, q)
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[u8]) -> Result<(), QueryError> {
        let step = ctx.superstep();
        let bits = msgs.iter().fold(0, |a, b| a | b);
        let (ds, dt) = *ctx.qvalue();
        let (new_f, new_b) = if step == 1 {
            (ds == 0, dt == 0)
        } else {
            (bits & FWD != 0 && ds == INF, bits & BWD != 0 && dt == INF)
        };
        let (ds, dt) = (if new_f { step - 1 } else { ds }, if new_b { step - 1 } else { dt });
        *ctx.qvalue_mut() = (ds, dt);
        let mut part = BiPartial::default();
        if ds != INF && dt != INF {
            part.best = ds + dt;
            ctx.force_terminate();
        } else {
            if new_f {
                for &u in &ctx.value().out {
                    ctx.send(u, FWD);
                    part.fwd_sent += 1;
                }
            }
            if new_b {
                for &u in ctx.value().in_nbrs() {
                    ctx.send(u, BWD);
                    part.bwd_sent += 1;
                }
            }
        }
        ctx.aggregate(part);
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for BiBfs {
    type Index = ();
    type Part = ();
    type Answer = Distance;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<PpspVertex>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<PpspQuery, ParseError> {
        super::parse_query(text)
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let q = *act.query();
        activate_endpoints(act, &[q.s, q.t])
    }

    fn assemble(&self, _: &PpspQuery, best: &AggValue<Self>, _: Vec<()>) -> Result<Distance, QueryError> {
        Ok(Distance::from_raw(*best))
    }

    fn format_answer(&self, qid: QueryId, q: &PpspQuery, d: &Distance, stats: &QueryStats) -> String {
        super::format_answer(qid, q, d, stats)
    }

    fn dump_vdata(&self, v: &VertexData<PpspVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}
