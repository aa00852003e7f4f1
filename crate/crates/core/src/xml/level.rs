use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData};
use crate::program::{Activation, Context, NoAggregator, VertexProgram, WorkerProgram};
use crate::text::ParseError;

use super::XmlNode;

/// One-query job that stores every node's depth (root at 0) in its V-data.
#[derive(Debug, Default)]
pub struct XmlLevels {
    agg: NoAggregator,
}

impl XmlLevels {
    pub fn new() -> Self {
        XmlLevels::default()
    }
}

impl VertexProgram for XmlLevels {
    type Value = XmlNode;
    type QValue = u32;
    type Msg = u32;
    type Query = ();
    type Agg = NoAggregator;

    fn aggregator(&self) -> &NoAggregator {
        &self.agg
    }

    fn init_value(&self, _: &VertexData<XmlNode>, _: &()) -> u32 {
        0
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[u32]) -> Result<(), QueryError> {
        let level = msgs.first().copied().unwrap_or(0);
        *ctx.qvalue_mut() = level;
        for &c in &ctx.value().children {
            ctx.send(c, level + 1);
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for XmlLevels {
    type Index = ();
    type Part = ();
    type Answer = ();

    fn parse_vertex(&self, line: &str) -> Result<VertexData<XmlNode>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, _: &str) -> Result<(), ParseError> {
        Ok(())
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        for pos in 0..act.len() {
            if act.vertex(pos).value.pa.is_none() {
                act.activate(pos);
            }
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<XmlNode>, level: &u32, _: &(), _: &mut Vec<()>) {
        v.value.level = Some(*level);
    }

    fn assemble(&self, _: &(), _: &(), _: Vec<()>) -> Result<(), QueryError> {
        Ok(())
    }

    fn format_answer(&self, qid: QueryId, _: &(), _: &(), stats: &QueryStats) -> String {
        format!("{qid} levels {}", stats.supersteps)
    }

    fn dump_vdata(&self, v: &VertexData<XmlNode>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}
