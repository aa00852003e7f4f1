//! Graph keyword search.
//!
//! A query is a set of keywords and a hop cap. Every vertex `r` that can
//! reach, for each keyword, some matching vertex within the cap is the root
//! of one answer tree, which lists the closest match per keyword (ties go to
//! the smaller id). Match information flows backwards along edges, one hop
//! per superstep.
//!
//! [`GkwsPlain`] searches graphs whose vertices carry text. [`GkwsRdf`]
//! searches RDF data converted by [`convert_triples`], where keywords may
//! also match edge predicates and literal attributes.

mod plain;
mod rdf;

pub use plain::{format_vertex as format_plain_vertex, parse_vertex as parse_plain_vertex, plain_vertices, GkwsPlain, PlainVertex};
pub use rdf::{convert_triples, GkwsRdf, Literal, RdfGraph, RdfVertex, Triple};

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexId};
use crate::program::{Aggregator, Combiner, Finish};
use crate::text::{tokenize, ParseError};

pub const DEFAULT_HOP_CAP: u32 = 3;

/// Unknown match in a keyword field.
pub const NONE: (u64, u32) = (u64::MAX, u32::MAX);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GkwsQuery {
    pub keywords: Vec<String>,
    pub hop_cap: u32,
}

impl GkwsQuery {
    /// Tokenizes `text` into distinct lowercase keywords.
    pub fn new(text: &str, hop_cap: u32) -> Result<Self, QueryError> {
        let mut keywords: Vec<String> = Vec::new();
        for k in tokenize(text) {
            if !keywords.contains(&k) {
                keywords.push(k);
            }
        }
        if keywords.is_empty() {
            return Err(QueryError::Malformed("no keywords".into()));
        }
        Ok(GkwsQuery { keywords, hop_cap })
    }

    /// Indices of the keywords contained in `words`.
    pub fn matches(&self, words: &[String]) -> Vec<usize> {
        (0..self.keywords.len()).filter(|&i| words.contains(&self.keywords[i])).collect()
    }
}

/// Keywords separated by spaces, optionally followed by `--hops=N`.
pub(crate) fn parse_query(text: &str, default_cap: u32) -> Result<GkwsQuery, ParseError> {
    let mut cap = default_cap;
    let mut words = Vec::new();
    for t in text.split_whitespace() {
        match t.strip_prefix("--hops=") {
            Some(n) => cap = n.parse().map_err(|_| ParseError::new(format!("bad hop cap {n:?}")))?,
            None => words.push(t),
        }
    }
    GkwsQuery::new(&words.join(" "), cap).map_err(|e| ParseError::new(e.to_string()))
}

/// Root of an answer and, per keyword, `(match id, hops from the root)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerTree {
    pub root: VertexId,
    pub fields: Vec<(u64, u32)>,
}

pub type GkwsAnswer = Vec<AnswerTree>;

/// Per-keyword minimum of `(hops, id)`.
pub(crate) struct FieldMin;

impl Combiner<Vec<(u64, u32)>> for FieldMin {
    fn combine(&self, into: &mut Vec<(u64, u32)>, other: Vec<(u64, u32)>) {
        for (a, b) in into.iter_mut().zip(other) {
            if better(b, *a) {
                *a = b;
            }
        }
    }
}

pub(crate) fn better(a: (u64, u32), b: (u64, u32)) -> bool {
    (a.1, a.0) < (b.1, b.0)
}

/// Folds neighbor fields into `fields`, one hop further away. Returns the
/// improved entries, with [`NONE`] elsewhere, or `None` if nothing changed.
pub(crate) fn absorb(fields: &mut [(u64, u32)], msgs: &[Vec<(u64, u32)>]) -> Option<Vec<(u64, u32)>> {
    let mut changed = vec![NONE; fields.len()];
    let mut any = false;
    for m in msgs {
        for (i, &(id, hop)) in m.iter().enumerate() {
            if hop == u32::MAX {
                continue;
            }
            let cand = (id, hop + 1);
            if better(cand, fields[i]) {
                fields[i] = cand;
                changed[i] = cand;
                any = true;
            }
        }
    }
    any.then_some(changed)
}

/// Drops entries that are already at the cap so they are not forwarded.
pub(crate) fn forwardable(mut fields: Vec<(u64, u32)>, cap: u32) -> Option<Vec<(u64, u32)>> {
    let mut any = false;
    for f in fields.iter_mut() {
        if f.1 >= cap {
            *f = NONE;
        } else {
            any = true;
        }
    }
    any.then_some(fields)
}

/// Ends a query after `hop_cap + 1` supersteps.
#[derive(Debug, Default)]
pub struct HopCap;

impl Aggregator<GkwsQuery> for HopCap {
    type Partial = ();
    type Value = ();

    fn initial(&self, _: &GkwsQuery) {}

    fn merge(&self, _: &mut (), _: ()) {}

    fn finish(&self, q: &GkwsQuery, step: u32, _: &(), _: ()) -> Finish<()> {
        if step > q.hop_cap {
            Finish::terminate(())
        } else {
            Finish::next(())
        }
    }
}

/// Keyword to local vertex positions.
pub type KeywordIndex = HashMap<String, Vec<usize>>;

pub(crate) fn index_words(index: &mut KeywordIndex, words: impl IntoIterator<Item = String>, pos: usize) {
    for w in words {
        let e = index.entry(w).or_default();
        if e.last() != Some(&pos) {
            e.push(pos);
        }
    }
}

pub(crate) fn matching_positions(index: &KeywordIndex, q: &GkwsQuery) -> Vec<usize> {
    let mut ps: Vec<usize> = q.keywords.iter().filter_map(|k| index.get(k)).flatten().copied().collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

pub(crate) fn tree_of(root: VertexId, fields: &[(u64, u32)]) -> Option<AnswerTree> {
    fields.iter().all(|f| f.1 != u32::MAX).then(|| AnswerTree { root, fields: fields.to_vec() })
}

pub(crate) fn assemble(mut parts: Vec<AnswerTree>) -> GkwsAnswer {
    parts.sort_by_key(|t| t.root);
    parts
}

/// One line per tree: `qid root (keyword match hops)...`, or `qid NONE`.
pub fn format_answer(qid: QueryId, q: &GkwsQuery, trees: &GkwsAnswer, _: &QueryStats) -> String {
    if trees.is_empty() {
        return format!("{qid} NONE");
    }
    let mut s = String::new();
    for (n, t) in trees.iter().enumerate() {
        if n > 0 {
            s.push('\n');
        }
        let _ = write!(s, "{qid} {}", t.root);
        for (k, (id, hop)) in q.keywords.iter().zip(&t.fields) {
            let _ = write!(s, " ({k} {id} {hop})");
        }
    }
    s
}
