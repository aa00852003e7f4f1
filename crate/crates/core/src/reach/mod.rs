//! Point-to-point reachability on directed graphs.
//!
//! The graph is condensed to a DAG of strongly connected components and
//! numbered by a DFS forest. Vertex-centric jobs ([`ReachLabeler`]) then
//! compute three labels per DAG vertex: the level (longest hop count from a
//! root), the yes-interval `[pre(v), max pre over Out(v)]` and the
//! no-interval `[min post over Out(v), post(v)]`. [`ReachSearch`] answers
//! queries with a bidirectional BFS that uses the labels to prune and to
//! stop early.
//!
//! Vertex line: `id \t out \t in \t level \t pre \t max \t minpost \t post \t
//! members`, `-` for labels not yet computed. The id of a DAG vertex is the
//! smallest original id in its component.

mod dfs;
mod labels;
mod query;
mod scc;

pub use dfs::{dfs_number, DfsNumbering, NotADag};
pub use labels::{LabelAgg, LabelJob, LabelKind, LabelReport, ReachLabeler};
pub use query::{Reason, ReachAnswer, ReachQuery, ReachRules, ReachSearch, Verdict};
pub use scc::{condense, Condensation};

use crate::engine::{Engine, EngineConfig};
use crate::error::EngineError;
use crate::graph_io::EdgeList;
use crate::model::{VertexData, VertexId};
use crate::text::{parse_field, ParseError};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReachVertex {
    pub out: Vec<VertexId>,
    pub inc: Vec<VertexId>,
    pub level: Option<u32>,
    pub pre: u32,
    /// Upper end of the yes-interval.
    pub max_pre: Option<u32>,
    /// Lower end of the no-interval.
    pub min_post: Option<u32>,
    pub post: u32,
    /// Original vertices of this component, sorted.
    pub members: Vec<VertexId>,
}

impl ReachVertex {
    pub fn yes(&self) -> Option<(u32, u32)> {
        self.max_pre.map(|m| (self.pre, m))
    }

    pub fn no(&self) -> Option<(u32, u32)> {
        self.min_post.map(|m| (m, self.post))
    }
}

/// DAG vertices with DFS numbers but no labels yet.
pub fn dag_vertices(g: &EdgeList) -> Result<Vec<VertexData<ReachVertex>>, NotADag> {
    let c = condense(g);
    let out = c.dag.out_adj();
    let inc = c.dag.in_adj();
    let num = dfs_number(&out)?;
    let rep = |i: &u64| VertexId(c.rep(*i as usize));
    Ok((0..c.members.len())
        .map(|i| {
            VertexData::new(
                c.rep(i),
                ReachVertex {
                    out: out[i].iter().map(rep).collect(),
                    inc: inc[i].iter().map(rep).collect(),
                    level: None,
                    pre: num.pre[i],
                    max_pre: None,
                    min_post: None,
                    post: num.post[i],
                    members: c.members[i].iter().copied().map(VertexId).collect(),
                },
            )
        })
        .collect())
}

/// Runs the level, yes and no jobs over `vertices` and returns them labeled.
pub fn build_labels(
    vertices: Vec<VertexData<ReachVertex>>,
    config: EngineConfig,
    aligned: bool,
) -> Result<Vec<VertexData<ReachVertex>>, EngineError> {
    let mut e = Engine::new(ReachLabeler::new(), config)?;
    e.load_vertices(vertices)?;
    for kind in [LabelKind::Level, LabelKind::Yes, LabelKind::No] {
        let job = LabelJob { kind, aligned: aligned && kind != LabelKind::Level };
        e.run_one(job)?.result.map_err(|err| EngineError::Config(format!("{kind:?} job failed: {err}")))?;
    }
    Ok(e.into_vertices())
}

/// Condenses, numbers and labels `g`.
pub fn label_graph(g: &EdgeList, config: EngineConfig, aligned: bool) -> Result<Vec<VertexData<ReachVertex>>, EngineError> {
    let vs = dag_vertices(g).map_err(|e| EngineError::Config(e.to_string()))?;
    build_labels(vs, config, aligned)
}

fn dash(v: Option<u32>) -> String {
    v.map_or("-".into(), |x| x.to_string())
}

fn join(ids: &[VertexId]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn format_vertex(v: &VertexData<ReachVertex>) -> String {
    let r = &v.value;
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        v.id,
        join(&r.out),
        join(&r.inc),
        dash(r.level),
        r.pre,
        dash(r.max_pre),
        dash(r.min_post),
        r.post,
        join(&r.members)
    )
}

pub fn parse_vertex(line: &str) -> Result<VertexData<ReachVertex>, ParseError> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 9 {
        return Err(ParseError::new(format!("expected 9 tab-separated fields, got {}", f.len())));
    }
    let ids = |s: &str| -> Result<Vec<VertexId>, ParseError> {
        s.split_whitespace().map(|t| parse_field(t, "vertex id")).collect()
    };
    let opt = |s: &str, what| -> Result<Option<u32>, ParseError> {
        if s.trim() == "-" {
            Ok(None)
        } else {
            parse_field(s, what).map(Some)
        }
    };
    let id: VertexId = parse_field(f[0], "vertex id")?;
    let mut members = ids(f[8])?;
    if members.is_empty() {
        members.push(id);
    }
    Ok(VertexData {
        id,
        value: ReachVertex {
            out: ids(f[1])?,
            inc: ids(f[2])?,
            level: opt(f[3], "level")?,
            pre: parse_field(f[4], "pre")?,
            max_pre: opt(f[5], "max")?,
            min_post: opt(f[6], "minpost")?,
            post: parse_field(f[7], "post")?,
            members,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_round_trip() {
        let g = EdgeList::new(4, vec![(0, 1), (1, 2), (2, 1), (2, 3)]);
        let vs = dag_vertices(&g).unwrap();
        assert_eq!(vs.len(), 3);
        assert_eq!(vs[1].value.members, [VertexId(1), VertexId(2)]);
        for v in vs {
            assert_eq!(parse_vertex(&format_vertex(&v)).unwrap(), v);
        }
        assert!(parse_vertex("1\t\t\t-\t0").is_err());
    }
}
