use std::collections::HashSet;
use std::sync::Arc;

use crate::engine::wire::{WireError, WireMessage};
use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData, VertexId};
use crate::program::{Activation, Aggregator, Combiner, Context, Finish, NoAggregator, VertexProgram, WorkerProgram};
use crate::text::ParseError;

use super::bfs::{BiPartial, BWD, FWD};
use super::{activate_endpoints, Distance, PpspQuery, PpspVertex, INF};

/// Direction of one indexing BFS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchDir {
    /// Along out-edges; yields `d(h, v)`.
    Forward,
    /// Along in-edges; yields `d(v, h)`.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HubIndexQuery {
    pub hub: VertexId,
    pub dir: SearchDir,
}

/// Builds hub labels: one BFS per hub (two on directed graphs). A vertex
/// keeps the label of hub `h` only if no shortest path between them passes
/// through another hub; hubs keep every label.
#[derive(Debug)]
pub struct HubIndexer {
    hubs: HashSet<VertexId>,
    agg: NoAggregator,
}

struct OrBool;

impl Combiner<bool> for OrBool {
    fn combine(&self, into: &mut bool, other: bool) {
        *into |= other;
    }
}

impl HubIndexer {
    pub fn new(hubs: impl IntoIterator<Item = VertexId>) -> Self {
        HubIndexer { hubs: hubs.into_iter().collect(), agg: NoAggregator }
    }

    /// The query set for the given hubs.
    pub fn queries(hubs: &[VertexId], directed: bool) -> Vec<HubIndexQuery> {
        hubs.iter()
            .flat_map(|&hub| {
                let fwd = HubIndexQuery { hub, dir: SearchDir::Forward };
                let bwd = HubIndexQuery { hub, dir: SearchDir::Backward };
                if directed {
                    vec![bwd, fwd]
                } else {
                    vec![bwd]
                }
            })
            .collect()
    }
}

/// `(d, pre)`: `pre` is set when a shortest path from the hub passes through
/// another hub.
pub type IndexState = (u32, bool);

impl VertexProgram for HubIndexer {
    type Value = PpspVertex;
    type QValue = IndexState;
    type Msg = bool;
    type Query = HubIndexQuery;
    type Agg = NoAggregator;

    fn aggregator(&self) -> &NoAggregator {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<bool>> {
        Some(&OrBool)
    }

    fn init_value(&self, v: &VertexData<PpspVertex>, q: &HubIndexQuery) -> IndexState {
        (if v.id == q.hub { 0 } else { INF }, false)
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[bool]) -> Result<(), QueryError> {
        let step = ctx.superstep();
        if step == 1 || ctx.qvalue().0 == INF {
            let pre = msgs.iter().any(|&m| m);
            *ctx.qvalue_mut() = (step - 1, pre);
            let q = *ctx.query();
            let through = pre || (ctx.id() != q.hub && self.hubs.contains(&ctx.id()));
            let v = ctx.value();
            let nbrs = match q.dir {
                SearchDir::Forward => &v.out[..],
                SearchDir::Backward => v.in_nbrs(),
            };
            for &u in nbrs {
                ctx.send(u, through);
            }
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for HubIndexer {
    type Index = ();
    type Part = ();
    type Answer = ();

    fn parse_vertex(&self, line: &str) -> Result<VertexData<PpspVertex>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<HubIndexQuery, ParseError> {
        let mut toks = text.split_whitespace();
        let hub = crate::text::parse_field(toks.next().unwrap_or(""), "hub id")?;
        let dir = match toks.next() {
            None | Some("bwd") => SearchDir::Backward,
            Some("fwd") => SearchDir::Forward,
            Some(t) => return Err(ParseError::new(format!("bad direction {t:?}"))),
        };
        Ok(HubIndexQuery { hub, dir })
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let h = act.query().hub;
        activate_endpoints(act, &[h])
    }

    fn dump_vertex(&self, v: &mut VertexData<PpspVertex>, st: &IndexState, q: &HubIndexQuery, _: &mut Vec<()>) {
        let (d, pre) = *st;
        if d == INF || (pre && !self.hubs.contains(&v.id)) {
            return;
        }
        let directed = v.value.is_directed();
        let list = match q.dir {
            SearchDir::Forward if directed => &mut v.value.l_out,
            _ => &mut v.value.l_in,
        };
        PpspVertex::insert_label(list, q.hub, d);
    }

    fn assemble(&self, _: &HubIndexQuery, _: &(), _: Vec<()>) -> Result<(), QueryError> {
        Ok(())
    }

    fn format_answer(&self, qid: QueryId, q: &HubIndexQuery, _: &(), stats: &QueryStats) -> String {
        format!("{qid} hub {} {:?} {}", q.hub, q.dir, stats.supersteps)
    }

    fn dump_vdata(&self, v: &VertexData<PpspVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}

/// Hub query message: BFS direction bits plus an optional `d(s, h)` seed
/// sent to a core hub of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HubMsg {
    pub bits: u8,
    pub seed: u32,
}

impl WireMessage for HubMsg {
    fn encode(&self, out: &mut Vec<u8>) {
        self.bits.encode(out);
        self.seed.encode(out);
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        Ok(HubMsg { bits: u8::decode(input)?, seed: u32::decode(input)? })
    }
}

struct HubMsgCombiner;

impl Combiner<HubMsg> for HubMsgCombiner {
    fn combine(&self, into: &mut HubMsg, other: HubMsg) {
        into.bits |= other.bits;
        into.seed = into.seed.min(other.seed);
    }
}

#[derive(Debug, Clone, Default)]
pub struct Hub2Partial {
    pub search: BiPartial,
    /// Smallest three-term sum seen this superstep.
    pub ub: Option<u32>,
    /// Labels of `t` with `d(h, t)`, published in superstep 1.
    pub t_labels: Option<Arc<[(VertexId, u32)]>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hub2Value {
    pub best: u32,
    pub d_ub: u32,
    pub t_labels: Arc<[(VertexId, u32)]>,
    /// True when the query ended on the hub bound rather than a meeting.
    pub early_stopped: bool,
}

#[derive(Debug, Clone)]
pub struct Hub2Agg {
    pub early_stop: bool,
}

impl Aggregator<PpspQuery> for Hub2Agg {
    type Partial = Hub2Partial;
    type Value = Hub2Value;

    fn initial(&self, _: &PpspQuery) -> Hub2Value {
        Hub2Value { best: INF, d_ub: INF, t_labels: Arc::from([]), early_stopped: false }
    }

    fn merge(&self, into: &mut Hub2Partial, other: Hub2Partial) {
        into.search.merge(other.search);
        into.ub = match (into.ub, other.ub) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if into.t_labels.is_none() {
            into.t_labels = other.t_labels;
        }
    }

    fn finish(&self, _: &PpspQuery, step: u32, prev: &Hub2Value, m: Hub2Partial) -> Finish<Hub2Value> {
        let mut v = prev.clone();
        v.best = v.best.min(m.search.best);
        if let Some(ub) = m.ub {
            v.d_ub = v.d_ub.min(ub);
        }
        if let Some(l) = m.t_labels {
            v.t_labels = l;
        }
        // the bound is complete only after superstep 2
        if step < 2 {
            return Finish::next(v);
        }
        if m.search.fwd_sent == 0 || m.search.bwd_sent == 0 {
            return Finish::terminate(v);
        }
        // a vertex first met in superstep j has ds + dt >= 2j - 3
        if self.early_stop && v.d_ub != INF && 2 * (step + 1) - 3 >= v.d_ub {
            v.early_stopped = true;
            return Finish::terminate(v);
        }
        Finish::next(v)
    }
}

/// Hub-labeling distance query: an upper bound through hubs combined with a
/// bidirectional BFS that does not expand hubs.
#[derive(Debug, Clone)]
pub struct Hub2 {
    agg: Hub2Agg,
}

impl Default for Hub2 {
    fn default() -> Self {
        Hub2::new(true)
    }
}

impl Hub2 {
    pub fn new(early_stop: bool) -> Self {
        Hub2 { agg: Hub2Agg { early_stop } }
    }
}

impl VertexProgram for Hub2 {
    type Value = PpspVertex;
    type QValue = super::bfs::DistPair;
    type Msg = HubMsg;
    type Query = PpspQuery;
    type Agg = Hub2Agg;

    fn aggregator(&self) -> &Hub2Agg {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<HubMsg>> {
        Some(&HubMsgCombiner)
    }

    fn init_value(&self, v: &VertexData<PpspVertex>, q: &PpspQuery) -> super::bfs::DistPair {
        (if v.id == q.s { 0 } else { INF }, if v.id == q.t { 0 } else { INF })
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[HubMsg]) -> Result<(), QueryError> {
        let step = ctx.superstep();
        let q = *ctx.query();
        let me = ctx.id();
        let v = ctx.value();
        let hub = v.dist_to_hub(me) == Some(0);
        let mut part = Hub2Partial::default();

        if step == 1 {
            if q.s == q.t {
                part.search.best = 0;
                ctx.aggregate(part);
                ctx.force_terminate();
                return Ok(());
            }
            if me == q.s {
                if hub {
                    ctx.send(me, HubMsg { bits: 0, seed: 0 });
                } else {
                    for &(h, d) in v.labels_to_hubs() {
                        ctx.send(h, HubMsg { bits: 0, seed: d });
                    }
                    for &u in &v.out {
                        ctx.send(u, HubMsg { bits: FWD, seed: INF });
                        part.search.fwd_sent += 1;
                    }
                }
            }
            if me == q.t {
                let labels: Arc<[(VertexId, u32)]> = if hub { Arc::from([(me, 0)]) } else { Arc::from(v.labels_from_hubs()) };
                part.t_labels = Some(labels);
                if !hub {
                    for &u in v.in_nbrs() {
                        ctx.send(u, HubMsg { bits: BWD, seed: INF });
                        part.search.bwd_sent += 1;
                    }
                }
            }
            ctx.aggregate(part);
            ctx.vote_to_halt();
            return Ok(());
        }

        let bits = msgs.iter().fold(0, |a, m| a | m.bits);
        let seed = msgs.iter().map(|m| m.seed).min().unwrap_or(INF);
        if seed != INF && hub {
            let t_labels = ctx.aggregated().t_labels.clone();
            let best = t_labels
                .iter()
                .filter_map(|&(ht, dt)| v.dist_to_hub(ht).map(|dh| seed as u64 + dh as u64 + dt as u64))
                .min();
            if let Some(b) = best {
                part.ub = Some(b.min(INF as u64 - 1) as u32);
            }
        }
        let (ds, dt) = *ctx.qvalue();
        let new_f = bits & FWD != 0 && ds == INF;
        let new_b = bits & BWD != 0 && dt == INF;
        let (ds, dt) = (if new_f { step - 1 } else { ds }, if new_b { step - 1 } else { dt });
        *ctx.qvalue_mut() = (ds, dt);
        if !hub {
            if ds != INF && dt != INF {
                part.search.best = ds + dt;
                ctx.force_terminate();
            } else {
                if new_f {
                    for &u in &v.out {
                        ctx.send(u, HubMsg { bits: FWD, seed: INF });
                        part.search.fwd_sent += 1;
                    }
                }
                if new_b {
                    for &u in v.in_nbrs() {
                        ctx.send(u, HubMsg { bits: BWD, seed: INF });
                        part.search.bwd_sent += 1;
                    }
                }
            }
        }
        ctx.aggregate(part);
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for Hub2 {
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

    fn assemble(&self, _: &PpspQuery, v: &Hub2Value, _: Vec<()>) -> Result<Distance, QueryError> {
        Ok(Distance::from_raw(v.best.min(v.d_ub)))
    }

    fn format_answer(&self, qid: QueryId, q: &PpspQuery, d: &Distance, stats: &QueryStats) -> String {
        super::format_answer(qid, q, d, stats)
    }

    fn dump_vdata(&self, v: &VertexData<PpspVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}
