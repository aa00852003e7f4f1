use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData, VertexId};
use crate::program::{Activation, Aggregator, Combiner, Context, Finish, VertexProgram, WorkerProgram};
use crate::text::{parse_field, ParseError};

use super::{dist3, Point, TerrainVertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TerrainQuery {
    pub s: VertexId,
    pub t: VertexId,
    pub early_term: bool,
}

impl TerrainQuery {
    pub fn new(s: u64, t: u64) -> Self {
        TerrainQuery { s: VertexId(s), t: VertexId(t), early_term: true }
    }

    pub fn without_early_term(mut self) -> Self {
        self.early_term = false;
        self
    }
}

/// Per-superstep contributions: the source position (superstep 1 only), the
/// smallest Euclidean distance from `s` among vertices relaxed in this
/// superstep, and the current network distance of `t`.
#[derive(Debug, Clone, Copy)]
pub struct Wave {
    pub src: Option<Point>,
    pub de_min: f64,
    pub t_dist: f64,
}

impl Default for Wave {
    fn default() -> Self {
        Wave { src: None, de_min: f64::INFINITY, t_dist: f64::INFINITY }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TerrainStep {
    pub src: Option<Point>,
    /// Wavefront bound of the last superstep.
    pub de_min: f64,
    pub t_dist: f64,
    pub early_stopped: bool,
}

/// Stops the search once `d_N(s, t)` is below the wavefront bound: every
/// later relaxation starts from a wavefront vertex `v` and so cannot go
/// below `d_E(s, v)`.
#[derive(Debug, Default)]
pub struct TerrainAgg;

impl Aggregator<TerrainQuery> for TerrainAgg {
    type Partial = Wave;
    type Value = TerrainStep;

    fn initial(&self, _: &TerrainQuery) -> TerrainStep {
        TerrainStep { src: None, de_min: 0.0, t_dist: f64::INFINITY, early_stopped: false }
    }

    fn merge(&self, into: &mut Wave, o: Wave) {
        into.src = into.src.or(o.src);
        into.de_min = into.de_min.min(o.de_min);
        into.t_dist = into.t_dist.min(o.t_dist);
    }

    fn finish(&self, q: &TerrainQuery, _: u32, prev: &TerrainStep, m: Wave) -> Finish<TerrainStep> {
        let st = TerrainStep {
            src: prev.src.or(m.src),
            de_min: m.de_min,
            t_dist: prev.t_dist.min(m.t_dist),
            early_stopped: false,
        };
        if q.early_term && st.t_dist < st.de_min && m.de_min.is_finite() {
            return Finish::terminate(TerrainStep { early_stopped: true, ..st });
        }
        Finish::next(st)
    }
}

/// Distance-relaxation SSSP with predecessor tracking.
#[derive(Debug, Default)]
pub struct TerrainSssp {
    agg: TerrainAgg,
}

impl TerrainSssp {
    pub fn new() -> Self {
        TerrainSssp::default()
    }
}

/// Keeps the shorter candidate; ties go to the smaller predecessor id.
struct MinDist;

impl Combiner<(f64, VertexId)> for MinDist {
    fn combine(&self, into: &mut (f64, VertexId), other: (f64, VertexId)) {
        if (other.0, other.1) < (into.0, into.1) {
            *into = other;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxed {
    pub dist: f64,
    pub pred: Option<VertexId>,
}

impl VertexProgram for TerrainSssp {
    type Value = TerrainVertex;
    type QValue = Relaxed;
    type Msg = (f64, VertexId);
    type Query = TerrainQuery;
    type Agg = TerrainAgg;

    fn aggregator(&self) -> &TerrainAgg {
        &self.agg
    }

    fn combiner(&self) -> Option<&dyn Combiner<(f64, VertexId)>> {
        Some(&MinDist)
    }

    fn init_value(&self, _: &VertexData<TerrainVertex>, _: &TerrainQuery) -> Relaxed {
        Relaxed { dist: f64::INFINITY, pred: None }
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[(f64, VertexId)]) -> Result<(), QueryError> {
        let q = *ctx.query();
        let me = ctx.id();
        let v = ctx.value();
        let mut wave = Wave::default();
        let best = if ctx.superstep() == 1 {
            wave.src = Some(v.pos);
            Some((0.0, None))
        } else {
            msgs.iter()
                .copied()
                .min_by(|a, b| a.partial_cmp(b).expect("distances are finite"))
                .filter(|m| m.0 < ctx.qvalue().dist)
                .map(|(d, from)| (d, Some(from)))
        };
        if let Some((dist, pred)) = best {
            *ctx.qvalue_mut() = Relaxed { dist, pred };
            let src = wave.src.or(ctx.aggregated().src).expect("source position is published in superstep 1");
            wave.de_min = dist3(&src, &v.pos);
            if me == q.t {
                wave.t_dist = dist;
            }
            for &(u, w) in &v.adj {
                ctx.send(u, (dist + w, me));
            }
        }
        ctx.aggregate(wave);
        ctx.vote_to_halt();
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerrainAnswer {
    pub dist: Option<f64>,
    /// Vertices of the shortest path from `s` to `t`.
    pub path: Vec<VertexId>,
    pub polyline: Vec<Point>,
    pub early_stopped: bool,
    /// Vertices that were relaxed at least once.
    pub reached: usize,
}

impl TerrainAnswer {
    pub fn hops(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    /// The 3D polyline of the path; fails when `t` was not reached.
    pub fn extract_path(&self) -> Result<&[Point], QueryError> {
        match self.dist {
            Some(_) => Ok(&self.polyline),
            None => Err(QueryError::App("no path: target unreachable".into())),
        }
    }
}

impl WorkerProgram for TerrainSssp {
    type Index = ();
    /// (vertex, predecessor, position)
    type Part = (VertexId, Option<VertexId>, Point);
    type Answer = TerrainAnswer;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<TerrainVertex>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<TerrainQuery, ParseError> {
        let f: Vec<&str> = text.split_whitespace().collect();
        let early_term = match f.get(2) {
            None => true,
            Some(&"--no-early-term") => false,
            Some(o) => return Err(ParseError::new(format!("unknown option {o:?}"))),
        };
        if f.len() < 2 || f.len() > 3 {
            return Err(ParseError::new(format!("expected `s t [--no-early-term]`, got {text:?}")));
        }
        Ok(TerrainQuery { s: parse_field(f[0], "source")?, t: parse_field(f[1], "target")?, early_term })
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let q = *act.query();
        crate::ppsp::activate_endpoints(act, &[q.s])?;
        if act.is_owner(q.t) && act.get_vpos(q.t).is_none() {
            return Err(QueryError::UnknownVertex(q.t));
        }
        Ok(())
    }

    fn dump_vertex(
        &self,
        v: &mut VertexData<TerrainVertex>,
        r: &Relaxed,
        _: &TerrainQuery,
        out: &mut Vec<(VertexId, Option<VertexId>, Point)>,
    ) {
        if r.dist.is_finite() {
            out.push((v.id, r.pred, v.value.pos));
        }
    }

    fn assemble(
        &self,
        q: &TerrainQuery,
        st: &TerrainStep,
        parts: Vec<(VertexId, Option<VertexId>, Point)>,
    ) -> Result<TerrainAnswer, QueryError> {
        let reached = parts.len();
        let by_id: std::collections::HashMap<VertexId, (Option<VertexId>, Point)> =
            parts.into_iter().map(|(id, pred, pos)| (id, (pred, pos))).collect();
        let mut answer = TerrainAnswer { dist: None, path: Vec::new(), polyline: Vec::new(), early_stopped: st.early_stopped, reached };
        if !st.t_dist.is_finite() {
            return Ok(answer);
        }
        let mut cur = Some(q.t);
        while let Some(id) = cur {
            let &(pred, pos) = by_id.get(&id).ok_or_else(|| QueryError::App(format!("path broken at {id}")))?;
            answer.path.push(id);
            answer.polyline.push(pos);
            if answer.path.len() > reached {
                return Err(QueryError::App("predecessor cycle".into()));
            }
            cur = pred;
        }
        answer.path.reverse();
        answer.polyline.reverse();
        answer.dist = Some(st.t_dist);
        Ok(answer)
    }

    fn format_answer(&self, qid: QueryId, _: &TerrainQuery, a: &TerrainAnswer, stats: &QueryStats) -> String {
        match a.dist {
            Some(d) => format!("{qid} {d:.6} {} {}", a.hops(), stats.supersteps),
            None => format!("{qid} INF 0 {}", stats.supersteps),
        }
    }

    fn dump_vdata(&self, v: &VertexData<TerrainVertex>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}
