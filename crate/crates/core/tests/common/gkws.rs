use std::collections::{HashMap, VecDeque};

use stepshare::gkws::Triple;
use stepshare::text::tokenize;

/// Node of a plain labeled graph, as seen by the oracle.
pub struct Node {
    pub words: Vec<String>,
    /// Id reported when this node is a match.
    pub ident: u64,
    pub root: bool,
}

/// Per-root answers: forward BFS from every root up to `cap` hops, keeping
/// the closest (then smallest-id) match per keyword.
pub fn answers(out: &[Vec<usize>], nodes: &[Node], keywords: &[String], cap: u32) -> Vec<(u64, Vec<(u64, u32)>)> {
    let mut res = Vec::new();
    for r in 0..nodes.len() {
        if !nodes[r].root {
            continue;
        }
        let mut dist = vec![u32::MAX; nodes.len()];
        dist[r] = 0;
        let mut q = VecDeque::from([r]);
        let mut best: Vec<Option<(u32, u64)>> = vec![None; keywords.len()];
        while let Some(u) = q.pop_front() {
            for (i, k) in keywords.iter().enumerate() {
                if nodes[u].words.contains(k) {
                    let c = (dist[u], nodes[u].ident);
                    if best[i].is_none_or(|b| c < b) {
                        best[i] = Some(c);
                    }
                }
            }
            if dist[u] == cap {
                continue;
            }
            for &v in &out[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        if best.iter().all(|b| b.is_some()) {
            res.push((nodes[r].ident, best.into_iter().map(|b| b.map(|(h, id)| (id, h)).unwrap()).collect()));
        }
    }
    res.sort();
    res
}

/// Expands RDF triples into a plain graph: each literal occurrence becomes a
/// node one hop below its subject, matching on its text and predicate; each
/// resource edge gets an extra node one hop below the subject that matches
/// on the predicate and reports the object.
pub fn expand(triples: &[Triple]) -> (Vec<Vec<usize>>, Vec<Node>) {
    let mut ids: HashMap<&str, u64> = HashMap::new();
    let mut next = 0u64;
    let mut seen = std::collections::HashSet::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut node_of: HashMap<u64, usize> = HashMap::new();
    let add = |nodes: &mut Vec<Node>, out: &mut Vec<Vec<usize>>, n: Node| {
        nodes.push(n);
        out.push(Vec::new());
        nodes.len() - 1
    };
    for t in triples {
        if !seen.insert(t) {
            continue;
        }
        let rid = |name: &str, ids: &mut HashMap<&str, u64>, next: &mut u64| -> (u64, bool) {
            match ids.get(name) {
                Some(&id) => (id, false),
                None => {
                    let id = *next;
                    *next += 1;
                    (id, true)
                }
            }
        };
        let (s, new) = rid(&t.s, &mut ids, &mut next);
        if new {
            ids.insert(&t.s, s);
            let n = add(&mut nodes, &mut out, Node { words: tokenize(&t.s), ident: s, root: true });
            node_of.insert(s, n);
        }
        let sn = node_of[&s];
        if t.literal {
            let id = next;
            next += 1;
            let words = tokenize(&t.o).into_iter().chain(tokenize(&t.p)).collect();
            let ln = add(&mut nodes, &mut out, Node { words, ident: id, root: false });
            out[sn].push(ln);
        } else {
            let (o, new) = rid(&t.o, &mut ids, &mut next);
            if new {
                ids.insert(&t.o, o);
                let n = add(&mut nodes, &mut out, Node { words: tokenize(&t.o), ident: o, root: true });
                node_of.insert(o, n);
            }
            let on = node_of[&o];
            out[sn].push(on);
            let xn = add(&mut nodes, &mut out, Node { words: tokenize(&t.p), ident: o, root: false });
            out[sn].push(xn);
        }
    }
    (out, nodes)
}
