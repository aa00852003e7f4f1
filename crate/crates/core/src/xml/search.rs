use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::engine::wire::{WireError, WireMessage};
use crate::engine::QueryStats;
use crate::error::QueryError;
use crate::model::{QueryId, VertexData, VertexId};
use crate::program::{Activation, Aggregator, Context, Finish, VertexProgram, WorkerProgram};
use crate::text::{tokenize, ParseError};

use super::XmlNode;

/// Keyword bitmaps are 32 bits wide.
pub const MAX_KEYWORDS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum XmlMode {
    /// SLCA by free bottom-up propagation.
    #[default]
    Slca,
    /// SLCA processed one tree level per superstep.
    SlcaAligned,
    Elca,
    /// Level-aligned SLCA followed by top-down pruning of each SLCA subtree.
    MaxMatch,
}

impl FromStr for XmlMode {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        match s {
            "slca" => Ok(XmlMode::Slca),
            "slca-aligned" => Ok(XmlMode::SlcaAligned),
            "elca" => Ok(XmlMode::Elca),
            "maxmatch" => Ok(XmlMode::MaxMatch),
            _ => Err(ParseError::new(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XmlQuery {
    pub keywords: Vec<String>,
    pub mode: XmlMode,
}

impl XmlQuery {
    /// Tokenizes and deduplicates `text` into keywords.
    pub fn new(mode: XmlMode, text: &str) -> Result<Self, ParseError> {
        let mut keywords: Vec<String> = Vec::new();
        for t in tokenize(text) {
            if !keywords.contains(&t) {
                keywords.push(t);
            }
        }
        if keywords.is_empty() {
            return Err(ParseError::new("query has no keywords"));
        }
        if keywords.len() > MAX_KEYWORDS {
            return Err(ParseError::new(format!("at most {MAX_KEYWORDS} keywords are supported")));
        }
        Ok(XmlQuery { keywords, mode })
    }

    pub fn all_one(&self) -> u32 {
        if self.keywords.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.keywords.len()) - 1
        }
    }

    pub fn bits_of(&self, words: &[String]) -> u32 {
        self.keywords
            .iter()
            .enumerate()
            .filter(|(_, k)| words.contains(k))
            .fold(0, |b, (i, _)| b | 1 << i)
    }

    fn aligned(&self) -> bool {
        self.mode != XmlMode::Slca
    }
}

/// Parses `[mode:] keywords...`.
pub fn parse_query(text: &str) -> Result<XmlQuery, ParseError> {
    let text = text.trim();
    match text.split_once(':') {
        Some((m, rest)) if !m.contains(char::is_whitespace) => XmlQuery::new(m.trim().parse()?, rest),
        _ => XmlQuery::new(XmlMode::Slca, text),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XmlMsg {
    /// Top-down MaxMatch message rather than a child bitmap.
    pub down: bool,
    pub from: VertexId,
    pub bm: u32,
}

impl WireMessage for XmlMsg {
    fn encode(&self, out: &mut Vec<u8>) {
        self.down.encode(out);
        self.from.encode(out);
        self.bm.encode(out);
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        Ok(XmlMsg { down: bool::decode(input)?, from: VertexId::decode(input)?, bm: u32::decode(input)? })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct XmlState {
    /// Keywords known to occur in the subtree.
    pub bm: u32,
    /// Own keywords plus those of children whose bitmap is not all-one.
    pub star: u32,
    /// Some child subtree holds every keyword.
    pub blocked: bool,
    pub label: bool,
    /// Child bitmaps kept for MaxMatch.
    pub kids: Vec<(VertexId, u32)>,
    pub up_sent: u32,
    pub in_tree: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelState {
    /// Level processed in the coming superstep.
    pub level: Option<u32>,
    /// 2 once MaxMatch pruning has started.
    pub phase: u8,
}

#[derive(Debug, Default)]
pub struct XmlAgg;

impl Aggregator<XmlQuery> for XmlAgg {
    /// Deepest level among matching vertices.
    type Partial = Option<u32>;
    type Value = LevelState;

    fn initial(&self, _: &XmlQuery) -> LevelState {
        LevelState { level: None, phase: 1 }
    }

    fn merge(&self, into: &mut Option<u32>, other: Option<u32>) {
        *into = (*into).max(other);
    }

    fn finish(&self, q: &XmlQuery, step: u32, prev: &LevelState, merged: Option<u32>) -> Finish<LevelState> {
        if !q.aligned() || prev.phase == 2 {
            return Finish::next(*prev);
        }
        if step == 1 {
            return match merged {
                None => Finish::terminate(*prev),
                Some(l) => Finish::next(LevelState { level: Some(l), phase: 1 }),
            };
        }
        match prev.level {
            Some(0) | None if q.mode == XmlMode::MaxMatch => Finish::next(LevelState { level: None, phase: 2 }),
            Some(0) | None => Finish::terminate(*prev),
            Some(l) => Finish::next(LevelState { level: Some(l - 1), phase: 1 }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XmlHit {
    pub id: VertexId,
    pub start: u64,
    pub end: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct XmlAnswer {
    /// SLCAs or ELCAs, or every kept vertex for MaxMatch; ordered by id.
    pub hits: Vec<XmlHit>,
    /// Largest number of bitmaps any vertex sent to its parent.
    pub max_parent_messages: u32,
}

/// Inverted index from word to positions.
pub type WordIndex = HashMap<String, Vec<u32>>;

#[derive(Debug, Default)]
pub struct XmlSearch {
    agg: XmlAgg,
}

impl XmlSearch {
    pub fn new() -> Self {
        XmlSearch::default()
    }
}

fn dominated(u1: u32, u2: u32) -> bool {
    u1 != u2 && (u1 | u2) == u2
}

impl VertexProgram for XmlSearch {
    type Value = XmlNode;
    type QValue = XmlState;
    type Msg = XmlMsg;
    type Query = XmlQuery;
    type Agg = XmlAgg;

    fn aggregator(&self) -> &XmlAgg {
        &self.agg
    }

    fn init_value(&self, v: &VertexData<XmlNode>, q: &XmlQuery) -> XmlState {
        let bm = q.bits_of(&v.value.words);
        XmlState { bm, star: bm, ..Default::default() }
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[XmlMsg]) -> Result<(), QueryError> {
        let q = ctx.query();
        let all = q.all_one();
        let step = ctx.superstep();
        let me = ctx.id();
        let node = ctx.value();

        if !q.aligned() {
            let st = ctx.qvalue_mut();
            let old = st.bm;
            for m in msgs {
                st.bm |= m.bm;
                st.blocked |= m.bm == all;
            }
            st.label = st.bm == all && !st.blocked;
            let bm = st.bm;
            if step == 1 || bm != old {
                if let Some(p) = node.pa {
                    ctx.qvalue_mut().up_sent += 1;
                    ctx.send(p, XmlMsg { down: false, from: me, bm });
                }
            }
            ctx.vote_to_halt();
            return Ok(());
        }

        let agg = *ctx.aggregated();
        if agg.phase == 2 {
            let st = ctx.qvalue_mut();
            if st.label || msgs.iter().any(|m| m.down) {
                st.in_tree = true;
                let keep: Vec<VertexId> = st
                    .kids
                    .iter()
                    .filter(|(_, b1)| !st.kids.iter().any(|(_, b2)| dominated(*b1, *b2)))
                    .map(|(c, _)| *c)
                    .collect();
                for c in keep {
                    ctx.send(c, XmlMsg { down: true, from: me, bm: 0 });
                }
            }
            ctx.vote_to_halt();
            return Ok(());
        }

        let my_level = node.level.ok_or_else(|| QueryError::App(format!("vertex {me} has no level")))?;
        if step == 1 {
            ctx.aggregate(Some(my_level));
            return Ok(());
        }
        if agg.level != Some(my_level) {
            // a matching vertex above the current level waits its turn
            return Ok(());
        }
        let st = ctx.qvalue_mut();
        for m in msgs {
            st.bm |= m.bm;
            if m.bm == all {
                st.blocked = true;
            } else {
                st.star |= m.bm;
            }
            if q.mode == XmlMode::MaxMatch {
                st.kids.push((m.from, m.bm));
            }
        }
        st.label = match q.mode {
            XmlMode::Elca => st.star == all,
            _ => st.bm == all && !st.blocked,
        };
        let (bm, keep_active) = (st.bm, q.mode == XmlMode::MaxMatch && st.label);
        if let Some(p) = node.pa {
            ctx.qvalue_mut().up_sent += 1;
            ctx.send(p, XmlMsg { down: false, from: me, bm });
        }
        if !keep_active {
            ctx.vote_to_halt();
        }
        Ok(())
    }
}

impl WorkerProgram for XmlSearch {
    type Index = WordIndex;
    type Part = (Option<XmlHit>, u32);
    type Answer = XmlAnswer;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<XmlNode>, ParseError> {
        super::parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<XmlQuery, ParseError> {
        parse_query(text)
    }

    fn load_to_index(&self, index: &mut WordIndex, v: &VertexData<XmlNode>, pos: usize) {
        for w in &v.value.words {
            let list = index.entry(w.clone()).or_default();
            if list.last() != Some(&(pos as u32)) {
                list.push(pos as u32);
            }
        }
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        let index = act.index();
        let keywords = act.query().keywords.clone();
        for k in &keywords {
            for &pos in index.get(k).map(Vec::as_slice).unwrap_or(&[]) {
                act.activate(pos as usize);
            }
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<XmlNode>, st: &XmlState, q: &XmlQuery, out: &mut Vec<(Option<XmlHit>, u32)>) {
        let hit = match q.mode {
            XmlMode::MaxMatch => st.in_tree,
            _ => st.label,
        };
        let hit = hit.then_some(XmlHit { id: v.id, start: v.value.start, end: v.value.end });
        out.push((hit, st.up_sent));
    }

    fn assemble(&self, _: &XmlQuery, _: &LevelState, parts: Vec<(Option<XmlHit>, u32)>) -> Result<XmlAnswer, QueryError> {
        let max_parent_messages = parts.iter().map(|p| p.1).max().unwrap_or(0);
        let mut hits: Vec<XmlHit> = parts.into_iter().filter_map(|p| p.0).collect();
        hits.sort();
        Ok(XmlAnswer { hits, max_parent_messages })
    }

    fn format_answer(&self, qid: QueryId, q: &XmlQuery, a: &XmlAnswer, _: &QueryStats) -> String {
        if a.hits.is_empty() {
            return format!("{qid} NONE");
        }
        if q.mode == XmlMode::MaxMatch {
            let mut s = qid.to_string();
            for h in &a.hits {
                write!(s, " {}", h.id).unwrap();
            }
            return s;
        }
        a.hits.iter().map(|h| format!("{qid} {} {}", h.start, h.end)).collect::<Vec<_>>().join("\n")
    }

    fn dump_vdata(&self, v: &VertexData<XmlNode>) -> Option<String> {
        Some(super::format_vertex(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_parsing() {
        let q = parse_query("elca: Tom tom GRAPH").unwrap();
        assert_eq!(q.mode, XmlMode::Elca);
        assert_eq!(q.keywords, ["tom", "graph"]);
        assert_eq!(q.all_one(), 0b11);
        assert_eq!(parse_query("tom").unwrap().mode, XmlMode::Slca);
        assert!(parse_query("bogus: tom").is_err());
        assert!(parse_query("  ").is_err());
        let many: String = (0..33).map(|i| format!("w{i} ")).collect();
        assert!(parse_query(&many).is_err());
        let max: String = (0..32).map(|i| format!("w{i} ")).collect();
        assert_eq!(parse_query(&max).unwrap().all_one(), u32::MAX);
    }

    #[test]
    fn domination_is_strict() {
        assert!(dominated(0b01, 0b11));
        assert!(!dominated(0b11, 0b11));
        assert!(!dominated(0b01, 0b10));
    }
}
