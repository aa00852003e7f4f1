//! Vertex, query and worker state.
//!
//! Data is split three ways: V-data ([`VertexData`]) depends only on the
//! vertex, VQ-data ([`VqEntry`]) on a (vertex, query) pair, and Q-data
//! ([`QueryState`]) only on the query. VQ entries live in a per-vertex ordered
//! map and exist only for queries that actually touched the vertex.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::QueryError;
use crate::program::{AggPartial, AggValue, VertexProgram, WorkerProgram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for VertexId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(VertexId)
    }
}

impl From<u64> for VertexId {
    fn from(v: u64) -> Self {
        VertexId(v)
    }
}

/// Assigned at enqueue time, starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QueryId(pub u32);

impl fmt::Display for QueryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Owning worker of a vertex. Stable for a given worker count.
pub fn owner_of(id: VertexId, workers: usize) -> usize {
    // splitmix64 finalizer, so sequential ids spread evenly
    let mut z = id.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z % workers as u64) as usize
}

/// Query-independent data of one vertex: its id plus the application value
/// (adjacency and attributes).
#[derive(Debug, Clone, PartialEq)]
pub struct VertexData<V> {
    pub id: VertexId,
    pub value: V,
}

impl<V> VertexData<V> {
    pub fn new(id: impl Into<VertexId>, value: V) -> Self {
        VertexData { id: id.into(), value }
    }
}

#[derive(Debug, Clone)]
pub struct VqEntry<Q, M> {
    pub value: Q,
    pub active: bool,
    pub inbox: Vec<M>,
}

#[derive(Debug)]
pub struct VertexSlot<V, Q, M> {
    pub data: VertexData<V>,
    pub lut: BTreeMap<QueryId, VqEntry<Q, M>>,
}

impl<V, Q, M> VertexSlot<V, Q, M> {
    pub fn new(data: VertexData<V>) -> Self {
        VertexSlot { data, lut: BTreeMap::new() }
    }

    /// Returns the entry of `qid`, creating it with `init` if absent. The flag
    /// is true when the entry was created by this call.
    pub fn vq_get_or_init(
        &mut self,
        qid: QueryId,
        init: impl FnOnce(&VertexData<V>) -> Q,
    ) -> (&mut VqEntry<Q, M>, bool) {
        let data = &self.data;
        let mut created = false;
        let entry = self.lut.entry(qid).or_insert_with(|| {
            created = true;
            VqEntry { value: init(data), active: true, inbox: Vec::new() }
        });
        (entry, created)
    }
}

/// Per-worker Q-data of one in-flight query.
pub struct QueryState<P: VertexProgram> {
    pub(crate) qid: QueryId,
    pub(crate) content: Arc<P::Query>,
    /// Superstep number, starting at 1.
    pub(crate) step: u32,
    pub(crate) outboxes: Vec<Vec<(VertexId, P::Msg)>>,
    pub(crate) agg_prev: AggValue<P>,
    pub(crate) agg_partial: AggPartial<P>,
    pub(crate) force_term: bool,
    pub(crate) finished: bool,
    pub(crate) active_count: u64,
    pub(crate) sent_count: u64,
    pub(crate) error: Option<QueryError>,
    /// Positions holding a VQ entry for this query.
    pub(crate) touched: Vec<u32>,
    /// Positions to run next superstep.
    pub(crate) frontier: Vec<u32>,
    /// Delivered messages not yet moved into inboxes.
    pub(crate) incoming: Vec<(u32, P::Msg)>,
}

impl<P: VertexProgram> QueryState<P> {
    pub(crate) fn new(qid: QueryId, content: Arc<P::Query>, agg: AggValue<P>, workers: usize) -> Self {
        QueryState {
            qid,
            content,
            step: 1,
            outboxes: (0..workers).map(|_| Vec::new()).collect(),
            agg_prev: agg,
            agg_partial: Default::default(),
            force_term: false,
            finished: false,
            active_count: 0,
            sent_count: 0,
            error: None,
            touched: Vec::new(),
            frontier: Vec::new(),
            incoming: Vec::new(),
        }
    }

    pub fn id(&self) -> QueryId {
        self.qid
    }

    pub fn content(&self) -> &P::Query {
        &self.content
    }

    pub fn superstep(&self) -> u32 {
        self.step
    }
}

pub(crate) type Slot<P> =
    VertexSlot<<P as VertexProgram>::Value, <P as VertexProgram>::QValue, <P as VertexProgram>::Msg>;

/// Everything one worker owns. Confined to a single thread during a round.
pub struct WorkerState<P: WorkerProgram> {
    pub(crate) index: usize,
    pub(crate) workers: usize,
    pub(crate) varray: Vec<Slot<P>>,
    pub(crate) ht_v: HashMap<VertexId, u32>,
    /// Iterated in ascending query id order.
    pub(crate) ht_q: BTreeMap<QueryId, QueryState<P>>,
    pub(crate) local_index: P::Index,
}

impl<P: WorkerProgram> WorkerState<P> {
    pub(crate) fn new(index: usize, workers: usize) -> Self {
        WorkerState {
            index,
            workers,
            varray: Vec::new(),
            ht_v: HashMap::new(),
            ht_q: BTreeMap::new(),
            local_index: P::Index::default(),
        }
    }

    pub fn get_vpos(&self, id: VertexId) -> Option<usize> {
        self.ht_v.get(&id).map(|&p| p as usize)
    }

    pub fn len(&self) -> usize {
        self.varray.len()
    }

    pub fn is_empty(&self) -> bool {
        self.varray.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexData<P::Value>> {
        self.varray.iter().map(|s| &s.data)
    }

    pub fn query_ids(&self) -> Vec<QueryId> {
        self.ht_q.keys().copied().collect()
    }

    pub fn live_vq_entries(&self) -> usize {
        self.varray.iter().map(|s| s.lut.len()).sum()
    }

    /// Removes every trace of `qid` from this worker.
    pub(crate) fn gc_query(&mut self, qid: QueryId) {
        if let Some(q) = self.ht_q.remove(&qid) {
            for pos in q.touched {
                self.varray[pos as usize].lut.remove(&qid);
            }
        }
    }
}
