use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData};
use crate::program::{Activation, Aggregator, Context, Finish, VertexProgram, WorkerProgram};
use crate::text::ParseError;

use super::ReachVertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelKind {
    Level,
    Yes,
    No,
}

/// One labeling pass. `aligned` processes one level per superstep, deepest
/// first, so that each vertex broadcasts exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelJob {
    pub kind: LabelKind,
    pub aligned: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LabelState {
    pub value: Option<u32>,
    pub broadcasts: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LabelReport {
    pub vertices: u64,
    pub broadcasts: u64,
    pub max_broadcasts: u32,
}

/// Level schedule of the aligned passes: collects the deepest sink level in
/// superstep 1, then counts down to 0.
#[derive(Debug, Default)]
pub struct LabelAgg;

impl Aggregator<LabelJob> for LabelAgg {
    type Partial = Option<u32>;
    type Value = Option<u32>;

    fn initial(&self, _: &LabelJob) -> Option<u32> {
        None
    }

    fn merge(&self, into: &mut Option<u32>, other: Option<u32>) {
        *into = (*into).max(other);
    }

    fn finish(&self, job: &LabelJob, step: u32, prev: &Option<u32>, merged: Option<u32>) -> Finish<Option<u32>> {
        if !job.aligned {
            return Finish::next(None);
        }
        if step == 1 {
            return match merged {
                None => Finish::terminate(None),
                l => Finish::next(l),
            };
        }
        match prev {
            Some(0) | None => Finish::terminate(None),
            Some(l) => Finish::next(Some(l - 1)),
        }
    }
}

/// Vertex-centric jobs computing reachability labels on a DAG.
#[derive(Debug, Default)]
pub struct ReachLabeler {
    agg: LabelAgg,
}

impl ReachLabeler {
    pub fn new() -> Self {
        ReachLabeler::default()
    }
}

impl VertexProgram for ReachLabeler {
    type Value = ReachVertex;
    type QValue = LabelState;
    type Msg = u32;
    type Query = LabelJob;
    type Agg = LabelAgg;

    fn aggregator(&self) -> &LabelAgg {
        &self.agg
    }

    fn init_value(&self, v: &VertexData<ReachVertex>, job: &LabelJob) -> LabelState {
        let value = match job.kind {
            LabelKind::Level => None,
            LabelKind::Yes => Some(v.value.pre),
            LabelKind::No => Some(v.value.post),
        };
        LabelState { value, broadcasts: 0 }
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[u32]) -> Result<(), QueryError> {
        let job = *ctx.query();
        let step = ctx.superstep();
        let v = ctx.value();
        if job.kind == LabelKind::Level {
            let incoming = msgs.iter().copied().max().unwrap_or(0);
            let st = ctx.qvalue_mut();
            if st.value.is_none_or(|l| incoming > l) {
                st.value = Some(incoming);
                st.broadcasts += 1;
                for &u in &v.out {
                    ctx.send(u, incoming + 1);
                }
            }
            ctx.vote_to_halt();
            return Ok(());
        }

        let st = ctx.qvalue_mut();
        let before = st.value;
        for &m in msgs {
            st.value = match (job.kind, st.value) {
                (LabelKind::Yes, Some(x)) => Some(x.max(m)),
                (LabelKind::No, Some(x)) => Some(x.min(m)),
                (_, x) => x.or(Some(m)),
            };
        }
        let value = st.value.expect("yes/no labels start from the vertex's own number");

        if !job.aligned {
            if step == 1 || st.value != before {
                st.broadcasts += 1;
                for &u in &v.inc {
                    ctx.send(u, value);
                }
            }
            ctx.vote_to_halt();
            return Ok(());
        }

        let level = v.level.ok_or_else(|| QueryError::App(format!("vertex {} has no level", ctx.id())))?;
        if step == 1 {
            if v.out.is_empty() {
                ctx.aggregate(Some(level));
            }
            return Ok(());
        }
        if *ctx.aggregated() == Some(level) {
            ctx.qvalue_mut().broadcasts += 1;
            for &u in &v.inc {
                ctx.send(u, value);
            }
            ctx.vote_to_halt();
        }
        Ok(())
    }
}

impl WorkerProgram for ReachLabeler {
    type Index = ();
    type Part = u32;
    type Answer = LabelReport;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<ReachVertex>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<LabelJob, ParseError> {
        let mut t = text.split_whitespace();
        let kind = match t.next() {
            Some("level") => LabelKind::Level,
            Some("yes") => LabelKind::Yes,
            Some("no") => LabelKind::No,
            other => return Err(ParseError::new(format!("unknown label job {other:?}"))),
        };
        let aligned = match t.next() {
            None | Some("aligned") => true,
            Some("naive") => false,
            Some(o) => return Err(ParseError::new(format!("unknown variant {o:?}"))),
        };
        Ok(LabelJob { kind, aligned })
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let level = act.query().kind == LabelKind::Level;
        for pos in 0..act.len() {
            if !level || act.vertex(pos).value.inc.is_empty() {
                act.activate(pos);
            }
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<ReachVertex>, st: &LabelState, job: &LabelJob, out: &mut Vec<u32>) {
        match job.kind {
            LabelKind::Level => v.value.level = st.value,
            LabelKind::Yes => v.value.max_pre = st.value,
            LabelKind::No => v.value.min_post = st.value,
        }
        out.push(st.broadcasts);
    }

    fn assemble(&self, _: &LabelJob, _: &Option<u32>, parts: Vec<u32>) -> Result<LabelReport, QueryError> {
        Ok(LabelReport {
            vertices: parts.len() as u64,
            broadcasts: parts.iter().map(|&b| b as u64).sum(),
            max_broadcasts: parts.iter().copied().max().unwrap_or(0),
        })
    }

    fn format_answer(&self, qid: QueryId, job: &LabelJob, r: &LabelReport, stats: &QueryStats) -> String {
        format!("{qid} {:?} vertices={} broadcasts={} supersteps={}", job.kind, r.vertices, r.broadcasts, stats.supersteps)
    }

    fn dump_vdata(&self, v: &VertexData<ReachVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}
