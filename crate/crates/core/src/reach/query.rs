use std::collections::HashMap;
use std::fmt;

use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData, VertexId};
use crate::ppsp::bfs::{OrBits, BWD, FWD};
use crate::program::{Activation, Aggregator, Combiner, Context, Finish, VertexProgram, WorkerProgram};
use crate::text::{parse_field, ParseError};

use super::ReachVertex;

/// Which label rules the search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReachRules {
    pub level: bool,
    pub yes: bool,
    pub no: bool,
}

impl ReachRules {
    pub const ALL: ReachRules = ReachRules { level: true, yes: true, no: true };
    pub const NONE: ReachRules = ReachRules { level: false, yes: false, no: false };

    /// The 8 on/off combinations, indexed by bit mask (level=1, yes=2, no=4).
    pub fn from_mask(mask: u8) -> Self {
        ReachRules { level: mask & 1 != 0, yes: mask & 2 != 0, no: mask & 4 != 0 }
    }
}

impl Default for ReachRules {
    fn default() -> Self {
        ReachRules::ALL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReachQuery {
    pub s: VertexId,
    pub t: VertexId,
    pub rules: ReachRules,
}

impl ReachQuery {
    pub fn new(s: u64, t: u64) -> Self {
        ReachQuery { s: VertexId(s), t: VertexId(t), rules: ReachRules::ALL }
    }

    pub fn with_rules(mut self, rules: ReachRules) -> Self {
        self.rules = rules;
        self
    }
}

/// How a verdict was reached. Ordered by precedence when several apply in
/// the same superstep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    SameScc,
    Met,
    YesLabel,
    Pruned,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub reachable: bool,
    pub reason: Reason,
}

pub type ReachAnswer = Verdict;

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.reachable { "TRUE" } else { "FALSE" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndLabels {
    pub level: u32,
    pub yes: (u32, u32),
    pub no: (u32, u32),
}

fn within(inner: (u32, u32), outer: (u32, u32)) -> bool {
    outer.0 <= inner.0 && inner.1 <= outer.1
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReachPartial {
    src: Option<EndLabels>,
    dst: Option<EndLabels>,
    hit: Option<Reason>,
    fwd_sent: u64,
    bwd_sent: u64,
    pruned: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReachState {
    pub src: Option<EndLabels>,
    pub dst: Option<EndLabels>,
    pub verdict: Option<Verdict>,
    pub pruned: u64,
}

#[derive(Debug, Default)]
pub struct ReachAgg;

impl Aggregator<ReachQuery> for ReachAgg {
    type Partial = ReachPartial;
    type Value = ReachState;

    fn initial(&self, _: &ReachQuery) -> ReachState {
        ReachState::default()
    }

    fn merge(&self, into: &mut ReachPartial, o: ReachPartial) {
        into.src = into.src.or(o.src);
        into.dst = into.dst.or(o.dst);
        into.hit = match (into.hit, o.hit) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        into.fwd_sent += o.fwd_sent;
        into.bwd_sent += o.bwd_sent;
        into.pruned += o.pruned;
    }

    fn finish(&self, _: &ReachQuery, step: u32, prev: &ReachState, m: ReachPartial) -> Finish<ReachState> {
        let mut st = *prev;
        st.pruned += m.pruned;
        if step == 1 {
            st.src = m.src;
            st.dst = m.dst;
            if let Some(r) = m.hit {
                st.verdict = Some(Verdict { reachable: true, reason: r });
                return Finish::terminate(st);
            }
            if st.src.is_none() || st.dst.is_none() {
                return Finish::terminate(st);
            }
            return Finish::next(st);
        }
        if let Some(r) = m.hit {
            st.verdict = Some(Verdict { reachable: true, reason: r });
            return Finish::terminate(st);
        }
        if m.fwd_sent == 0 || m.bwd_sent == 0 {
            let reason = if st.pruned > 0 { Reason::Pruned } else { Reason::Exhausted };
            st.verdict = Some(Verdict { reachable: false, reason });
            return Finish::terminate(st);
        }
        Finish::next(st)
    }
}

/// Bidirectional BFS over the labeled DAG with level, yes and no pruning.
#[derive(Debug, Default)]
pub struct ReachSearch {
    agg: ReachAgg,
    rules: ReachRules,
}

impl ReachSearch {
    pub fn new() -> Self {
        ReachSearch::default()
    }

    /// Rules given to queries parsed from text.
    pub fn with_rules(rules: ReachRules) -> Self {
        ReachSearch { agg: ReachAgg, rules }
    }
}

fn labels_of(id: VertexId, r: &ReachVertex) -> Result<EndLabels, QueryError> {
    match (r.level, r.yes(), r.no()) {
        (Some(level), Some(yes), Some(no)) => Ok(EndLabels { level, yes, no }),
        _ => Err(QueryError::App(format!("vertex {id} is not labeled"))),
    }
}

impl VertexProgram for ReachSearch {
    type Value = ReachVertex;
    /// (forward-visited, backward-visited)
    type QValue = (bool, bool);
    type Msg = u8;
    type Query = ReachQuery;
    type Agg = ReachAgg;

    fn aggregator(&self) -> &ReachAgg {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<u8>> {
        Some(&OrBits)
    }

    fn init_value(&self, v: &VertexData<ReachVertex>, q: &ReachQuery) -> (bool, bool) {
        let m = &v.value.members;
        (m.binary_search(&q.s).is_ok(), m.binary_search(&q.t).is_ok())
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[u8]) -> Result<(), QueryError> {
        let q = *ctx.query();
        let step = ctx.superstep();
        let (f, b) = *ctx.qvalue();
        let v = ctx.value();
        let mut part = ReachPartial::default();

        if step == 1 {
            if f && b {
                part.hit = Some(Reason::SameScc);
            } else if f || b {
                let mine = labels_of(ctx.id(), v)?;
                part.src = f.then_some(mine);
                part.dst = b.then_some(mine);
            }
            ctx.aggregate(part);
            return Ok(());
        }

        let st = ctx.aggregated();
        let (src, dst) = match (st.src, st.dst) {
            (Some(s), Some(t)) => (s, t),
            _ => unreachable!("search continues only when both endpoints exist"),
        };
        let bits = msgs.iter().fold(0, |a, m| a | m);
        let new_f = if step == 2 { f } else { bits & FWD != 0 && !f };
        let new_b = if step == 2 { b } else { bits & BWD != 0 && !b };
        *ctx.qvalue_mut() = (f || new_f, b || new_b);
        ctx.vote_to_halt();
        if !new_f && !new_b {
            return Ok(());
        }
        if (f || new_f) && (b || new_b) {
            part.hit = Some(Reason::Met);
            ctx.aggregate(part);
            ctx.force_terminate();
            return Ok(());
        }
        let me = labels_of(ctx.id(), v)?;
        let r = q.rules;
        if new_f {
            if r.yes && within(dst.yes, me.yes) {
                part.hit = Some(Reason::YesLabel);
            } else if (r.level && me.level >= dst.level) || (r.no && !within(dst.no, me.no)) {
                part.pruned += 1;
            } else {
                for &u in &v.out {
                    ctx.send(u, FWD);
                }
                part.fwd_sent += v.out.len() as u64;
            }
        }
        if new_b {
            if r.yes && within(me.yes, src.yes) {
                part.hit = Some(Reason::YesLabel);
            } else if (r.level && me.level <= src.level) || (r.no && !within(me.no, src.no)) {
                part.pruned += 1;
            } else {
                for &u in &v.inc {
                    ctx.send(u, BWD);
                }
                part.bwd_sent += v.inc.len() as u64;
            }
        }
        if part.hit.is_some() {
            ctx.force_terminate();
        }
        ctx.aggregate(part);
        Ok(())
    }
}

impl WorkerProgram for ReachSearch {
    /// Original vertex id to the position of its component.
    type Index = HashMap<VertexId, usize>;
    type Part = ();
    type Answer = Verdict;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<ReachVertex>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<ReachQuery, ParseError> {
        let f: Vec<&str> = text.split_whitespace().collect();
        if f.len() != 2 {
            return Err(ParseError::new(format!("expected `s t`, got {text:?}")));
        }
        Ok(ReachQuery { s: parse_field(f[0], "source")?, t: parse_field(f[1], "target")?, rules: self.rules })
    }

    fn load_to_index(&self, index: &mut Self::Index, v: &VertexData<ReachVertex>, pos: usize) {
        for &m in &v.value.members {
            index.insert(m, pos);
        }
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let q = *act.query();
        for id in [q.s, q.t] {
            if let Some(&pos) = act.index().get(&id) {
                act.activate(pos);
            }
        }
        Ok(())
    }

    fn assemble(&self, q: &ReachQuery, st: &ReachState, _: Vec<()>) -> Result<Verdict, QueryError> {
        if st.src.is_none() && st.verdict.is_none() {
            return Err(QueryError::UnknownVertex(q.s));
        }
        if st.dst.is_none() && st.verdict.is_none() {
            return Err(QueryError::UnknownVertex(q.t));
        }
        st.verdict.ok_or_else(|| QueryError::App("search ended without a verdict".into()))
    }

    fn format_answer(&self, qid: QueryId, q: &ReachQuery, v: &Verdict, stats: &QueryStats) -> String {
        format!("{qid} {} {} {v} {}", q.s, q.t, stats.supersteps)
    }

    fn dump_vdata(&self, v: &VertexData<ReachVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}
