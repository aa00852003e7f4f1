//! The contract applications implement.
//!
//! A [`VertexProgram`] says how one vertex advances one query by one
//! superstep. A [`WorkerProgram`] adds the worker-level hooks: parsing,
//! initial activation, the optional local index, result dumping and
//! formatting.

use std::collections::HashMap;

use crate::engine::wire::WireMessage;
use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{owner_of, QueryId, QueryState, Slot, VertexData, VertexId};
use crate::text::ParseError;

/// What the aggregator hands back after a superstep.
#[derive(Debug, Clone, PartialEq)]
pub struct Finish<V> {
    /// Visible to every vertex of the query in the next superstep.
    pub value: V,
    /// Ends the query after this superstep.
    pub terminate: bool,
}

impl<V> Finish<V> {
    pub fn next(value: V) -> Self {
        Finish { value, terminate: false }
    }

    pub fn terminate(value: V) -> Self {
        Finish { value, terminate: true }
    }
}

/// Per-query reduction over vertex contributions. `merge` must be
/// associative and commutative.
pub trait Aggregator<Q>: Send + Sync {
    type Partial: Default + Send;
    type Value: Clone + Send + Sync;

    /// Value seen in superstep 1.
    fn initial(&self, query: &Q) -> Self::Value;

    fn merge(&self, into: &mut Self::Partial, other: Self::Partial);

    /// Called once per superstep on the merged partials of all workers.
    fn finish(&self, query: &Q, step: u32, prev: &Self::Value, merged: Self::Partial) -> Finish<Self::Value>;
}

/// Aggregator for programs that do not need one.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoAggregator;

impl<Q> Aggregator<Q> for NoAggregator {
    type Partial = ();
    type Value = ();

    fn initial(&self, _: &Q) {}

    fn merge(&self, _: &mut (), _: ()) {}

    fn finish(&self, _: &Q, _: u32, _: &(), _: ()) -> Finish<()> {
        Finish::next(())
    }
}

/// Merges two messages bound for the same (query, vertex). Must be
/// associative and commutative.
pub trait Combiner<M>: Send + Sync {
    fn combine(&self, into: &mut M, other: M);
}

pub type AggValue<P> = <<P as VertexProgram>::Agg as Aggregator<<P as VertexProgram>::Query>>::Value;
pub type AggPartial<P> = <<P as VertexProgram>::Agg as Aggregator<<P as VertexProgram>::Query>>::Partial;

pub trait VertexProgram: Send + Sync + Sized + 'static {
    /// V-data payload.
    type Value: Send + Sync;
    /// VQ-data payload.
    type QValue: Send;
    type Msg: WireMessage + Send;
    type Query: Send + Sync;
    type Agg: Aggregator<Self::Query>;

    fn aggregator(&self) -> &Self::Agg;

    fn combiner(&self) -> Option<&dyn Combiner<Self::Msg>> {
        None
    }

    /// Initial VQ value of a vertex when a query first touches it. Pure.
    fn init_value(&self, vertex: &VertexData<Self::Value>, query: &Self::Query) -> Self::QValue;

    fn compute(&self, ctx: &mut Context<'_, Self>, messages: &[Self::Msg]) -> Result<(), QueryError>;
}

pub trait WorkerProgram: VertexProgram {
    /// Per-worker read-only index built after loading.
    type Index: Default + Send + Sync;
    /// Unit of output a vertex contributes when its query is dumped.
    type Part: Send;
    type Answer: Send;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<Self::Value>, ParseError>;

    fn parse_query(&self, text: &str) -> Result<Self::Query, ParseError>;

    /// Activates the vertices a new query starts from. Runs on every worker.
    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError>;

    /// Called once per loaded vertex with its final array position.
    fn load_to_index(&self, _index: &mut Self::Index, _vertex: &VertexData<Self::Value>, _pos: usize) {}

    /// Called for every vertex a finished query touched, before its state is
    /// released. May update V-data; runs serially per worker.
    fn dump_vertex(
        &self,
        _vertex: &mut VertexData<Self::Value>,
        _qvalue: &Self::QValue,
        _query: &Self::Query,
        _out: &mut Vec<Self::Part>,
    ) {
    }

    /// Builds the answer from the final aggregator value and all dumped parts.
    fn assemble(
        &self,
        query: &Self::Query,
        agg: &AggValue<Self>,
        parts: Vec<Self::Part>,
    ) -> Result<Self::Answer, QueryError>;

    fn format_answer(&self, qid: QueryId, query: &Self::Query, answer: &Self::Answer, stats: &QueryStats) -> String;

    /// Line written for the vertex by the end-of-job graph dump.
    fn dump_vdata(&self, _vertex: &VertexData<Self::Value>) -> Option<String> {
        None
    }
}

/// The (vertex, query) pair a compute call is bound to. Every accessor goes
/// straight to the bound state; there is no way to reach another query's
/// entry from here.
pub struct Context<'a, P: VertexProgram> {
    pub(crate) app: &'a P,
    pub(crate) vertex: &'a VertexData<P::Value>,
    pub(crate) qvalue: &'a mut P::QValue,
    pub(crate) active: &'a mut bool,
    pub(crate) qid: QueryId,
    pub(crate) query: &'a P::Query,
    pub(crate) step: u32,
    pub(crate) agg_prev: &'a AggValue<P>,
    pub(crate) agg_partial: &'a mut AggPartial<P>,
    pub(crate) outboxes: &'a mut [Vec<(VertexId, P::Msg)>],
    pub(crate) sent: &'a mut u64,
    pub(crate) force_term: &'a mut bool,
}

impl<'a, P: VertexProgram> Context<'a, P> {
    pub fn id(&self) -> VertexId {
        self.vertex.id
    }

    pub fn value(&self) -> &'a P::Value {
        &self.vertex.value
    }

    pub fn qvalue(&self) -> &P::QValue {
        self.qvalue
    }

    pub fn qvalue_mut(&mut self) -> &mut P::QValue {
        self.qvalue
    }

    pub fn query(&self) -> &'a P::Query {
        self.query
    }

    pub fn query_id(&self) -> QueryId {
        self.qid
    }

    pub fn superstep(&self) -> u32 {
        self.step
    }

    /// Aggregated value published at the end of the previous superstep.
    pub fn aggregated(&self) -> &'a AggValue<P> {
        self.agg_prev
    }

    pub fn aggregate(&mut self, contribution: AggPartial<P>) {
        self.app.aggregator().merge(self.agg_partial, contribution);
    }

    pub fn send(&mut self, dst: VertexId, msg: P::Msg) {
        let w = owner_of(dst, self.outboxes.len());
        self.outboxes[w].push((dst, msg));
        *self.sent += 1;
    }

    pub fn vote_to_halt(&mut self) {
        *self.active = false;
    }

    pub fn is_active(&self) -> bool {
        *self.active
    }

    /// Ends the query at the end of the current superstep.
    pub fn force_terminate(&mut self) {
        *self.force_term = true;
    }
}

/// Handed to [`WorkerProgram::init_activate`] for a newly admitted query.
pub struct Activation<'a, P: WorkerProgram> {
    pub(crate) app: &'a P,
    pub(crate) worker: usize,
    pub(crate) workers: usize,
    pub(crate) varray: &'a mut [Slot<P>],
    pub(crate) ht_v: &'a HashMap<VertexId, u32>,
    pub(crate) index: &'a P::Index,
    pub(crate) query: &'a mut QueryState<P>,
}

impl<'a, P: WorkerProgram> Activation<'a, P> {
    pub fn query(&self) -> &P::Query {
        &self.query.content
    }

    pub fn query_id(&self) -> QueryId {
        self.query.qid
    }

    /// Position of `id` if this worker owns it.
    pub fn get_vpos(&self, id: VertexId) -> Option<usize> {
        self.ht_v.get(&id).map(|&p| p as usize)
    }

    pub fn is_owner(&self, id: VertexId) -> bool {
        owner_of(id, self.workers) == self.worker
    }

    pub fn index(&self) -> &'a P::Index {
        self.index
    }

    pub fn len(&self) -> usize {
        self.varray.len()
    }

    pub fn is_empty(&self) -> bool {
        self.varray.is_empty()
    }

    pub fn vertex(&self, pos: usize) -> &VertexData<P::Value> {
        &self.varray[pos].data
    }

    /// Allocates the query's state at `pos` (if needed) and marks it active.
    pub fn activate(&mut self, pos: usize) {
        let q = &mut *self.query;
        let content = &q.content;
        let app = self.app;
        let (entry, created) = self.varray[pos].vq_get_or_init(q.qid, |v| app.init_value(v, content));
        entry.active = true;
        if created {
            q.touched.push(pos as u32);
        }
        q.frontier.push(pos as u32);
    }
}
