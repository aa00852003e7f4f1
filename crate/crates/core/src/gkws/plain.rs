use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::graph_io::EdgeList;
use crate::model::{QueryId, VertexData, VertexId};
use crate::program::{Activation, Combiner, Context, VertexProgram, WorkerProgram};
use crate::text::{escape, parse_field, tokenize, unescape, ParseError};

use super::{
    absorb, forwardable, index_words, matching_positions, tree_of, AnswerTree, FieldMin, GkwsAnswer, GkwsQuery,
    HopCap, KeywordIndex, DEFAULT_HOP_CAP, NONE,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlainVertex {
    pub text: String,
    pub inc: Vec<VertexId>,
}

impl PlainVertex {
    pub fn words(&self) -> Vec<String> {
        tokenize(&self.text)
    }
}

/// Vertices of `g` with the given texts; `texts[i]` belongs to vertex `i`.
pub fn plain_vertices(g: &EdgeList, texts: &[String]) -> Vec<VertexData<PlainVertex>> {
    g.in_adj()
        .into_iter()
        .enumerate()
        .map(|(i, inc)| {
            VertexData::new(
                i as u64,
                PlainVertex { text: texts[i].clone(), inc: inc.into_iter().map(VertexId).collect() },
            )
        })
        .collect()
}

/// `id \t text \t in-neighbors`
pub fn format_vertex(v: &VertexData<PlainVertex>) -> String {
    let inc: Vec<String> = v.value.inc.iter().map(|u| u.to_string()).collect();
    format!("{}\t{}\t{}", v.id, escape(&v.value.text), inc.join(" "))
}

pub fn parse_vertex(line: &str) -> Result<VertexData<PlainVertex>, ParseError> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 3 {
        return Err(ParseError::new(format!("expected 3 tab-separated fields, got {}", f.len())));
    }
    let inc = f[2].split_whitespace().map(|t| parse_field(t, "in-neighbor")).collect::<Result<_, _>>()?;
    Ok(VertexData { id: parse_field(f[0], "vertex id")?, value: PlainVertex { text: unescape(f[1].trim())?, inc } })
}

/// Keyword search on a graph whose vertices carry text.
#[derive(Debug)]
pub struct GkwsPlain {
    agg: HopCap,
    default_cap: u32,
}

impl Default for GkwsPlain {
    fn default() -> Self {
        GkwsPlain::new(DEFAULT_HOP_CAP)
    }
}

impl GkwsPlain {
    /// `default_cap` applies to text queries without `--hops=`.
    pub fn new(default_cap: u32) -> Self {
        GkwsPlain { agg: HopCap, default_cap }
    }
}

impl VertexProgram for GkwsPlain {
    type Value = PlainVertex;
    type QValue = Vec<(u64, u32)>;
    type Msg = Vec<(u64, u32)>;
    type Query = GkwsQuery;
    type Agg = HopCap;

    fn aggregator(&self) -> &HopCap {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<Vec<(u64, u32)>>> {
        Some(&FieldMin)
    }

    fn init_value(&self, v: &VertexData<PlainVertex>, q: &GkwsQuery) -> Vec<(u64, u32)> {
        let mut f = vec![NONE; q.keywords.len()];
        for i in q.matches(&v.value.words()) {
            f[i] = (v.id.0, 0);
        }
        f
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[Vec<(u64, u32)>]) -> Result<(), QueryError> {
        let cap = ctx.query().hop_cap;
        let out = if ctx.superstep() == 1 {
            Some(ctx.qvalue().clone())
        } else {
            absorb(ctx.qvalue_mut(), msgs)
        };
        if let Some(m) = out.and_then(|m| forwardable(m, cap)) {
            for &u in &ctx.value().inc {
                ctx.send(u, m.clone());
            }
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for GkwsPlain {
    type Index = KeywordIndex;
    type Part = AnswerTree;
    type Answer = GkwsAnswer;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<PlainVertex>, ParseError> {
        parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<GkwsQuery, ParseError> {
        super::parse_query(text, self.default_cap)
    }

    fn load_to_index(&self, index: &mut KeywordIndex, v: &VertexData<PlainVertex>, pos: usize) {
        index_words(index, v.value.words(), pos);
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        for pos in matching_positions(act.index(), act.query()) {
            act.activate(pos);
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<PlainVertex>, f: &Vec<(u64, u32)>, _: &GkwsQuery, out: &mut Vec<AnswerTree>) {
        out.extend(tree_of(v.id, f));
    }

    fn assemble(&self, _: &GkwsQuery, _: &(), parts: Vec<AnswerTree>) -> Result<GkwsAnswer, QueryError> {
        Ok(super::assemble(parts))
    }

    fn format_answer(&self, qid: QueryId, q: &GkwsQuery, a: &GkwsAnswer, stats: &QueryStats) -> String {
        super::format_answer(qid, q, a, stats)
    }

    fn dump_vdata(&self, v: &VertexData<PlainVertex>) -> Option<String> {
        Some(format_vertex(v))
    }
}
