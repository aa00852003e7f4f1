//! Point-to-point shortest path distance on unweighted graphs.
//!
//! Three query programs share one vertex format: [`Bfs`], [`BiBfs`] and the
//! hub-labeling query [`Hub2`]. Hub labels are built by running
//! [`HubIndexer`] with one query per hub.
//!
//! Vertex line: `id \t out-list [| in-list] [| L entries]`. An in-list makes
//! the graph directed. Label entries are `h:d` on undirected graphs and
//! `<h:d` (distance to the hub) or `>h:d` (distance from the hub) on
//! directed ones.

pub(crate) mod bfs;
mod hub;

use std::fmt;
use std::fmt::Write as _;

use log::warn;

pub use bfs::{BiBfs, BiBfsAgg, Bfs};
pub use hub::{Hub2, Hub2Agg, Hub2Value, HubIndexQuery, HubIndexer, SearchDir};

use crate::error::QueryError;
use crate::model::{QueryId, VertexData, VertexId};
use crate::program::Activation;
use crate::text::{parse_field, ParseError};
use crate::engine::QueryStats;

/// Unreachable.
pub const INF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PpspQuery {
    pub s: VertexId,
    pub t: VertexId,
}

impl PpspQuery {
    pub fn new(s: u64, t: u64) -> Self {
        PpspQuery { s: VertexId(s), t: VertexId(t) }
    }
}

/// Hop distance; `None` is unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(pub Option<u32>);

impl Distance {
    pub fn from_raw(d: u32) -> Self {
        Distance((d != INF).then_some(d))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("INF"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PpspVertex {
    pub out: Vec<VertexId>,
    /// In-neighbors of a directed graph; `None` means undirected.
    pub inc: Option<Vec<VertexId>>,
    /// Hubs this vertex reaches, with `d(v, h)`. The only label list of an
    /// undirected graph.
    pub l_in: Vec<(VertexId, u32)>,
    /// Hubs reaching this vertex, with `d(h, v)`. Directed graphs only.
    pub l_out: Vec<(VertexId, u32)>,
}

impl PpspVertex {
    pub fn undirected(nbrs: Vec<VertexId>) -> Self {
        PpspVertex { out: nbrs, ..Default::default() }
    }

    pub fn directed(out: Vec<VertexId>, inc: Vec<VertexId>) -> Self {
        PpspVertex { out, inc: Some(inc), ..Default::default() }
    }

    pub fn is_directed(&self) -> bool {
        self.inc.is_some()
    }

    pub fn in_nbrs(&self) -> &[VertexId] {
        self.inc.as_deref().unwrap_or(&self.out)
    }

    /// Labels with `d(v, h)`.
    pub fn labels_to_hubs(&self) -> &[(VertexId, u32)] {
        &self.l_in
    }

    /// Labels with `d(h, v)`.
    pub fn labels_from_hubs(&self) -> &[(VertexId, u32)] {
        if self.is_directed() {
            &self.l_out
        } else {
            &self.l_in
        }
    }

    /// Distance to hub `h` from this vertex's own labels.
    pub fn dist_to_hub(&self, h: VertexId) -> Option<u32> {
        lookup(&self.l_in, h)
    }

    pub(crate) fn insert_label(list: &mut Vec<(VertexId, u32)>, h: VertexId, d: u32) {
        match list.binary_search_by_key(&h, |e| e.0) {
            Ok(i) => list[i].1 = d,
            Err(i) => list.insert(i, (h, d)),
        }
    }
}

fn lookup(list: &[(VertexId, u32)], h: VertexId) -> Option<u32> {
    list.binary_search_by_key(&h, |e| e.0).ok().map(|i| list[i].1)
}

/// Hub membership as recorded by the labels: a hub always carries itself at
/// distance 0.
pub fn is_hub(v: &VertexData<PpspVertex>) -> bool {
    v.value.dist_to_hub(v.id) == Some(0)
}

pub fn parse_vertex(line: &str) -> Result<VertexData<PpspVertex>, ParseError> {
    let (id, rest) = line.split_once('\t').unwrap_or((line, ""));
    let id: VertexId = parse_field(id, "vertex id")?;
    let mut segs = rest.split('|');
    let out = parse_ids(segs.next().unwrap_or(""))?;
    let mut v = PpspVertex::undirected(out);
    let mut raw_labels = Vec::new();
    for seg in segs {
        let seg = seg.trim();
        if let Some(l) = seg.strip_prefix('L').filter(|l| l.is_empty() || l.starts_with(char::is_whitespace)) {
            raw_labels.extend(l.split_whitespace());
        } else if v.inc.is_none() && raw_labels.is_empty() {
            v.inc = Some(parse_ids(seg)?);
        } else {
            return Err(ParseError::new(format!("unexpected segment {seg:?}")));
        }
    }
    for e in raw_labels {
        let (list, body) = match e.as_bytes()[0] {
            b'<' => (&mut v.l_in, &e[1..]),
            b'>' => (&mut v.l_out, &e[1..]),
            _ => (&mut v.l_in, e),
        };
        let (h, d) = body.split_once(':').ok_or_else(|| ParseError::new(format!("bad label {e:?}")))?;
        PpspVertex::insert_label(list, parse_field(h, "hub id")?, parse_field(d, "hub distance")?);
    }
    Ok(VertexData { id, value: v })
}

fn parse_ids(s: &str) -> Result<Vec<VertexId>, ParseError> {
    s.split_whitespace().map(|t| parse_field(t, "neighbor id")).collect()
}

pub fn format_vertex(v: &VertexData<PpspVertex>) -> String {
    let join = |ids: &[VertexId]| ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!("{}\t{}", v.id, join(&v.value.out));
    if let Some(inc) = &v.value.inc {
        write!(s, " | {}", join(inc)).unwrap();
    }
    if !v.value.l_in.is_empty() || !v.value.l_out.is_empty() {
        s.push_str(" | L");
        let directed = v.value.is_directed();
        for (h, d) in &v.value.l_in {
            write!(s, " {}{h}:{d}", if directed { "<" } else { "" }).unwrap();
        }
        for (h, d) in &v.value.l_out {
            write!(s, " >{h}:{d}").unwrap();
        }
    }
    s
}

pub fn parse_query(text: &str) -> Result<PpspQuery, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    match toks[..] {
        [s, t] => Ok(PpspQuery { s: parse_field(s, "source")?, t: parse_field(t, "target")? }),
        _ => Err(ParseError::new("expected `s t`")),
    }
}

pub fn format_answer(qid: QueryId, q: &PpspQuery, d: &Distance, stats: &QueryStats) -> String {
    format!("{qid} {} {} {d} {}", q.s, q.t, stats.supersteps)
}

/// Activates the endpoints this worker owns, failing if one is missing from
/// the graph.
pub(crate) fn activate_endpoints<P>(act: &mut Activation<'_, P>, ids: &[VertexId]) -> Result<(), QueryError>
where
    P: crate::program::WorkerProgram,
{
    for &id in ids {
        if !act.is_owner(id) {
            continue;
        }
        match act.get_vpos(id) {
            Some(pos) => act.activate(pos),
            None => return Err(QueryError::UnknownVertex(id)),
        }
    }
    Ok(())
}

/// Degree used to rank hub candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeMode {
    /// Neighbor count; for directed graphs the out-degree.
    #[default]
    Undirected,
    In,
    Out,
    Sum,
}

impl std::str::FromStr for DegreeMode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "undirected" | "degree" => Ok(DegreeMode::Undirected),
            "in" => Ok(DegreeMode::In),
            "out" => Ok(DegreeMode::Out),
            "sum" | "in+out" => Ok(DegreeMode::Sum),
            _ => Err(ParseError::new(format!("unknown degree mode {s:?}"))),
        }
    }
}

/// The `k` vertices of highest degree, ties broken by smaller id. `k` larger
/// than the graph is clamped.
pub fn hub_select<'a>(
    vertices: impl IntoIterator<Item = &'a VertexData<PpspVertex>>,
    k: usize,
    mode: DegreeMode,
) -> Result<Vec<VertexId>, ParseError> {
    if k == 0 {
        return Err(ParseError::new("hub count must be positive"));
    }
    let mut ranked: Vec<(usize, VertexId)> = vertices
        .into_iter()
        .map(|v| {
            let d = match mode {
                DegreeMode::Undirected | DegreeMode::Out => v.value.out.len(),
                DegreeMode::In => v.value.in_nbrs().len(),
                DegreeMode::Sum => v.value.out.len() + v.value.in_nbrs().len(),
            };
            (d, v.id)
        })
        .collect();
    if k > ranked.len() {
        warn!("hub count {k} exceeds vertex count {}; using all vertices", ranked.len());
    }
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut hubs: Vec<VertexId> = ranked.into_iter().take(k).map(|(_, id)| id).collect();
    hubs.sort();
    Ok(hubs)
}

/// PPSP vertices of `g`, treating edges as undirected or directed.
pub fn vertices_from_edges(g: &crate::graph_io::EdgeList, directed: bool) -> Vec<VertexData<PpspVertex>> {
    let ids = |l: &Vec<u64>| l.iter().copied().map(VertexId).collect::<Vec<_>>();
    if directed {
        let (out, inc) = (g.out_adj(), g.in_adj());
        (0..g.n).map(|i| VertexData::new(i as u64, PpspVertex::directed(ids(&out[i]), ids(&inc[i])))).collect()
    } else {
        g.undirected_adj()
            .iter()
            .enumerate()
            .map(|(i, a)| VertexData::new(i as u64, PpspVertex::undirected(ids(a))))
            .collect()
    }
}
