//! Keyword search over an XML tree.
//!
//! A document becomes one vertex per element and per non-blank text node,
//! numbered in document order. Each node knows its parent, children, words
//! and byte range in the source. [`XmlLevels`] fills in node depths;
//! [`XmlSearch`] answers SLCA, ELCA and MaxMatch queries.
//!
//! Vertex line: `id \t pa \t level \t start \t end \t words \t children`,
//! with `-` for a missing parent or level.

mod level;
mod search;

pub use level::XmlLevels;
pub use search::{XmlAgg, XmlAnswer, XmlHit, XmlMode, XmlQuery, XmlSearch, XmlState, MAX_KEYWORDS};

use roxmltree::{Document, NodeType};

use crate::model::{VertexData, VertexId};
use crate::text::{parse_field, tokenize, ParseError};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct XmlNode {
    pub pa: Option<VertexId>,
    pub children: Vec<VertexId>,
    /// Lowercased tokens of the tag name or the text.
    pub words: Vec<String>,
    /// Byte range in the source document.
    pub start: u64,
    pub end: u64,
    pub level: Option<u32>,
}

/// Parses a document into its node table, ids in document order. Element
/// words come from the tag name; attributes, comments and blank text are
/// skipped.
pub fn parse_xml(doc: &str) -> Result<Vec<VertexData<XmlNode>>, ParseError> {
    let d = Document::parse(doc).map_err(|e| ParseError::new(format!("xml at {}: {e}", e.pos())))?;
    let mut nodes: Vec<VertexData<XmlNode>> = Vec::new();
    let mut stack = vec![(d.root_element(), None::<usize>)];
    while let Some((n, parent)) = stack.pop() {
        let words = match n.node_type() {
            NodeType::Element => tokenize(n.tag_name().name()),
            NodeType::Text => tokenize(n.text().unwrap_or("")),
            _ => unreachable!("only elements and text are pushed"),
        };
        let id = nodes.len();
        let r = n.range();
        nodes.push(VertexData::new(
            id as u64,
            XmlNode {
                pa: parent.map(|p| VertexId(p as u64)),
                children: Vec::new(),
                words,
                start: r.start as u64,
                end: r.end as u64,
                level: None,
            },
        ));
        if let Some(p) = parent {
            nodes[p].value.children.push(VertexId(id as u64));
        }
        let kids: Vec<_> = n
            .children()
            .filter(|c| c.is_element() || (c.is_text() && !c.text().unwrap_or("").trim().is_empty()))
            .collect();
        for c in kids.into_iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    Ok(nodes)
}

pub fn parse_vertex(line: &str) -> Result<VertexData<XmlNode>, ParseError> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 7 {
        return Err(ParseError::new(format!("expected 7 tab-separated fields, got {}", f.len())));
    }
    let opt = |s: &str, what| -> Result<Option<u64>, ParseError> {
        if s.trim() == "-" {
            Ok(None)
        } else {
            parse_field(s, what).map(Some)
        }
    };
    Ok(VertexData {
        id: parse_field(f[0], "vertex id")?,
        value: XmlNode {
            pa: opt(f[1], "parent")?.map(VertexId),
            level: opt(f[2], "level")?.map(|l| l as u32),
            start: parse_field(f[3], "start")?,
            end: parse_field(f[4], "end")?,
            words: f[5].split_whitespace().map(str::to_string).collect(),
            children: f[6].split_whitespace().map(|c| parse_field(c, "child id")).collect::<Result<_, _>>()?,
        },
    })
}

pub fn format_vertex(v: &VertexData<XmlNode>) -> String {
    let n = &v.value;
    let dash = |o: Option<u64>| o.map_or("-".to_string(), |x| x.to_string());
    let kids: Vec<String> = n.children.iter().map(|c| c.to_string()).collect();
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        v.id,
        dash(n.pa.map(|p| p.0)),
        dash(n.level.map(u64::from)),
        n.start,
        n.end,
        n.words.join(" "),
        kids.join(" ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_document() {
        let doc = "<a>x</a>";
        let n = parse_xml(doc).unwrap();
        assert_eq!(n.len(), 2);
        assert_eq!(n[0].value.children, [VertexId(1)]);
        assert_eq!(n[1].value.pa, Some(VertexId(0)));
        assert_eq!(n[1].value.words, ["x"]);
        let (a, x) = (&n[0].value, &n[1].value);
        assert!(a.start <= x.start && x.end <= a.end && x.start < x.end);
        assert_eq!(&doc[x.start as usize..x.end as usize], "x");
    }

    #[test]
    fn malformed_document_reports_position() {
        let e = parse_xml("<a><b></a>").unwrap_err();
        assert!(e.0.contains("1:"), "{e}");
    }

    #[test]
    fn lines_round_trip() {
        let doc = "<lab><p n='1'>Tom  Peter</p><!-- c --><q/></lab>";
        for v in parse_xml(doc).unwrap() {
            assert_eq!(parse_vertex(&format_vertex(&v)).unwrap(), v);
        }
        let mut v = parse_xml(doc).unwrap().remove(0);
        v.value.level = Some(0);
        assert_eq!(parse_vertex(&format_vertex(&v)).unwrap(), v);
        assert!(parse_vertex("1\t-\t-\t0\t5\tx").is_err());
    }
}
