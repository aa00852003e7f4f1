use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use crate::engine::QueryStats;
use crate::error::{EngineError, QueryError};
use crate::model::{QueryId, VertexData, VertexId};
use crate::program::{Activation, Combiner, Context, VertexProgram, WorkerProgram};
use crate::text::{escape, parse_field, tokenize, unescape, ParseError};

use super::{
    absorb, better, forwardable, index_words, matching_positions, tree_of, AnswerTree, FieldMin, GkwsAnswer,
    GkwsQuery, HopCap, KeywordIndex, DEFAULT_HOP_CAP, NONE,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub s: String,
    pub p: String,
    pub o: String,
    /// The object is a literal rather than a resource.
    pub literal: bool,
}

impl Triple {
    pub fn resource(s: &str, p: &str, o: &str) -> Self {
        Triple { s: s.into(), p: p.into(), o: o.into(), literal: false }
    }

    pub fn literal(s: &str, p: &str, o: &str) -> Self {
        Triple { s: s.into(), p: p.into(), o: o.into(), literal: true }
    }

    /// `s \t p \t o \t R|L`
    pub fn parse(line: &str) -> Result<Self, ParseError> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 4 {
            return Err(ParseError::new(format!("expected `s\\tp\\to\\tR|L`, got {} fields", f.len())));
        }
        let literal = match f[3].trim() {
            "R" => false,
            "L" => true,
            o => return Err(ParseError::new(format!("object kind must be R or L, got {o:?}"))),
        };
        Ok(Triple { s: f[0].into(), p: f[1].into(), o: f[2].into(), literal })
    }

    pub fn read_all(reader: impl BufRead) -> Result<Vec<Triple>, EngineError> {
        let mut out = Vec::new();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            out.push(Triple::parse(&line).map_err(|e| EngineError::Parse { line: n + 1, message: e.0 })?);
        }
        Ok(out)
    }
}

/// A literal attribute of a resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub id: u64,
    pub text: String,
    pub pred: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RdfVertex {
    pub name: String,
    /// In-neighbors with the predicate of the connecting edge.
    pub inc: Vec<(VertexId, String)>,
    pub literals: Vec<Literal>,
}

/// Converted RDF data. `names[id]` is the resource name or literal text.
#[derive(Debug, Clone, PartialEq)]
pub struct RdfGraph {
    pub vertices: Vec<VertexData<RdfVertex>>,
    pub names: Vec<String>,
}

/// Groups triples into resource vertices. Ids are assigned in order of first
/// appearance; every literal occurrence gets its own id. Repeated triples are
/// ignored.
pub fn convert_triples(triples: &[Triple]) -> RdfGraph {
    let mut ids: HashMap<String, u64> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    // Vertex slot of each id; `None` for literals.
    let mut slot: Vec<Option<usize>> = Vec::new();
    let mut vertices: Vec<VertexData<RdfVertex>> = Vec::new();
    let mut seen = HashSet::new();
    for t in triples {
        if !seen.insert(t) {
            continue;
        }
        let mut resource = |name: &str| -> usize {
            if let Some(&id) = ids.get(name) {
                return slot[id as usize].expect("resource");
            }
            let id = names.len() as u64;
            ids.insert(name.to_string(), id);
            names.push(name.to_string());
            slot.push(Some(vertices.len()));
            vertices.push(VertexData::new(id, RdfVertex { name: name.to_string(), ..RdfVertex::default() }));
            vertices.len() - 1
        };
        let s = resource(&t.s);
        if t.literal {
            let id = names.len() as u64;
            names.push(t.o.clone());
            slot.push(None);
            vertices[s].value.literals.push(Literal { id, text: t.o.clone(), pred: t.p.clone() });
        } else {
            let o = resource(&t.o);
            let sid = vertices[s].id;
            vertices[o].value.inc.push((sid, t.p.clone()));
        }
    }
    RdfGraph { vertices, names }
}

/// `id \t name \t u=pred ... \t lid=pred=text ...`, each part escaped.
pub fn format_vertex(v: &VertexData<RdfVertex>) -> String {
    let inc: Vec<String> = v.value.inc.iter().map(|(u, p)| format!("{u}={}", escape(p))).collect();
    let lits: Vec<String> =
        v.value.literals.iter().map(|l| format!("{}={}={}", l.id, escape(&l.pred), escape(&l.text))).collect();
    format!("{}\t{}\t{}\t{}", v.id, escape(&v.value.name), inc.join(" "), lits.join(" "))
}

pub fn parse_vertex(line: &str) -> Result<VertexData<RdfVertex>, ParseError> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 4 {
        return Err(ParseError::new(format!("expected 4 tab-separated fields, got {}", f.len())));
    }
    let inc = f[2]
        .split_whitespace()
        .map(|e| {
            let (u, p) = e.split_once('=').ok_or_else(|| ParseError::new(format!("bad in-neighbor {e:?}")))?;
            Ok((parse_field(u, "in-neighbor")?, unescape(p)?))
        })
        .collect::<Result<_, ParseError>>()?;
    let literals = f[3]
        .split_whitespace()
        .map(|e| {
            let mut parts = e.splitn(3, '=');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(id), Some(p), Some(t)) => {
                    Ok(Literal { id: parse_field(id, "literal id")?, pred: unescape(p)?, text: unescape(t)? })
                }
                _ => Err(ParseError::new(format!("bad literal {e:?}"))),
            }
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(VertexData {
        id: parse_field(f[0], "vertex id")?,
        value: RdfVertex { name: unescape(f[1].trim())?, inc, literals },
    })
}

/// Keyword search on converted RDF data.
#[derive(Debug)]
pub struct GkwsRdf {
    agg: HopCap,
    default_cap: u32,
}

impl Default for GkwsRdf {
    fn default() -> Self {
        GkwsRdf::new(DEFAULT_HOP_CAP)
    }
}

impl GkwsRdf {
    pub fn new(default_cap: u32) -> Self {
        GkwsRdf { agg: HopCap, default_cap }
    }
}

fn has(words: &[String], k: &str) -> bool {
    words.iter().any(|w| w == k)
}

impl VertexProgram for GkwsRdf {
    type Value = RdfVertex;
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

    fn init_value(&self, v: &VertexData<RdfVertex>, q: &GkwsQuery) -> Vec<(u64, u32)> {
        let name = tokenize(&v.value.name);
        let lits: Vec<(u64, Vec<String>)> = v
            .value
            .literals
            .iter()
            .map(|l| (l.id, tokenize(&l.text).into_iter().chain(tokenize(&l.pred)).collect()))
            .collect();
        q.keywords
            .iter()
            .map(|k| {
                if has(&name, k) {
                    return (v.id.0, 0);
                }
                if q.hop_cap == 0 {
                    return NONE;
                }
                lits.iter().filter(|(_, w)| has(w, k)).map(|(id, _)| (*id, 1)).fold(NONE, |a, b| if better(b, a) { b } else { a })
            })
            .collect()
    }

    fn compute(&self, ctx: &mut Context<'_, Self>, msgs: &[Vec<(u64, u32)>]) -> Result<(), QueryError> {
        let q = ctx.query();
        let me = ctx.id();
        let v = ctx.value();
        if ctx.superstep() > 1 {
            if let Some(m) = absorb(ctx.qvalue_mut(), msgs).and_then(|m| forwardable(m, q.hop_cap)) {
                let mut last = None;
                for &(u, _) in &v.inc {
                    if last != Some(u) {
                        ctx.send(u, m.clone());
                    }
                    last = Some(u);
                }
            }
            ctx.vote_to_halt();
            return Ok(());
        }

        // Cases 1-3: broadcast the fields known at activation.
        let mut out: BTreeMap<VertexId, Vec<(u64, u32)>> = BTreeMap::new();
        if let Some(m) = forwardable(ctx.qvalue().clone(), q.hop_cap) {
            for &(u, _) in &v.inc {
                out.insert(u, m.clone());
            }
        }
        // Case 4: an in-edge whose predicate matches makes this vertex a
        // match for that in-neighbor only.
        if q.hop_cap > 0 {
            for (i, k) in q.keywords.iter().enumerate() {
                if ctx.qvalue()[i] == (me.0, 0) {
                    continue;
                }
                for (u, p) in &v.inc {
                    if has(&tokenize(p), k) {
                        let mut m = vec![NONE; q.keywords.len()];
                        m[i] = (me.0, 0);
                        match out.get_mut(u) {
                            Some(e) => FieldMin.combine(e, m),
                            None => {
                                out.insert(*u, m);
                            }
                        }
                    }
                }
            }
        }
        for (u, m) in out {
            ctx.send(u, m);
        }
        ctx.vote_to_halt();
        Ok(())
    }
}

impl WorkerProgram for GkwsRdf {
    type Index = KeywordIndex;
    type Part = AnswerTree;
    type Answer = GkwsAnswer;

    fn parse_vertex(&self, line: &str) -> Result<VertexData<RdfVertex>, ParseError> {
        parse_vertex(line)
    }

    fn parse_query(&self, text: &str) -> Result<GkwsQuery, ParseError> {
        super::parse_query(text, self.default_cap)
    }

    fn load_to_index(&self, index: &mut KeywordIndex, v: &VertexData<RdfVertex>, pos: usize) {
        let r = &v.value;
        let words = tokenize(&r.name)
            .into_iter()
            .chain(r.inc.iter().flat_map(|(_, p)| tokenize(p)))
            .chain(r.literals.iter().flat_map(|l| tokenize(&l.text).into_iter().chain(tokenize(&l.pred))));
        index_words(index, words, pos);
    }

    fn init_activate(&self, act: &mut Activation<'_, Self>) -> Result<(), QueryError> {
        for pos in matching_positions(act.index(), act.query()) {
            act.activate(pos);
        }
        Ok(())
    }

    fn dump_vertex(&self, v: &mut VertexData<RdfVertex>, f: &Vec<(u64, u32)>, _: &GkwsQuery, out: &mut Vec<AnswerTree>) {
        out.extend(tree_of(v.id, f));
    }

    fn assemble(&self, _: &GkwsQuery, _: &(), parts: Vec<AnswerTree>) -> Result<GkwsAnswer, QueryError> {
        Ok(super::assemble(parts))
    }

    fn format_answer(&self, qid: QueryId, q: &GkwsQuery, a: &GkwsAnswer, stats: &QueryStats) -> String {
        super::format_answer(qid, q, a, stats)
    }

    fn dump_vdata(&self, v: &VertexData<RdfVertex>) -> Option<String> {
        Some(format_vertex(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_groups_by_object_and_subject() {
        let g = convert_triples(&[
            Triple::resource("Tom", "supervises", "Peter"),
            Triple::literal("Peter", "age", "25"),
            Triple::resource("Tom", "supervises", "Peter"),
        ]);
        assert_eq!(g.names, ["Tom", "Peter", "25"]);
        let peter = &g.vertices[1].value;
        assert_eq!(peter.inc, [(VertexId(0), "supervises".to_string())]);
        assert_eq!(peter.literals, [Literal { id: 2, text: "25".into(), pred: "age".into() }]);
        for v in &g.vertices {
            assert_eq!(parse_vertex(&format_vertex(v)).unwrap(), *v);
        }
    }

    #[test]
    fn triple_lines() {
        assert_eq!(Triple::parse("a\tb c\td\tL").unwrap(), Triple::literal("a", "b c", "d"));
        assert!(Triple::parse("a\tb\td\tX").is_err());
        assert!(Triple::parse("a\tb\td").is_err());
    }
}
