//! Seeded generators for test fixtures and benchmarks.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::graph_io::EdgeList;

/// `m` distinct random edges without self-loops over `n` vertices. Edges are
/// ordered pairs; callers decide whether to read them as directed.
pub fn random_graph(n: usize, m: usize, rng: &mut impl Rng) -> EdgeList {
    let max = n.saturating_mul(n.saturating_sub(1));
    let m = m.min(max);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n as u64);
        let v = rng.random_range(0..n as u64);
        if u != v && seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    EdgeList::new(n, edges)
}

/// Random DAG: every edge goes from a smaller to a larger position of a
/// random permutation.
pub fn random_dag(n: usize, m: usize, rng: &mut impl Rng) -> EdgeList {
    let mut order: Vec<u64> = (0..n as u64).collect();
    use rand::seq::SliceRandom;
    order.shuffle(rng);
    let g = random_graph(n, m, rng);
    let edges = g
        .edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            (order[a as usize], order[b as usize])
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    EdgeList::new(n, edges)
}

/// Graph with a few high-degree vertices: each new vertex links to `per`
/// earlier ones chosen in proportion to their degree.
pub fn preferential_graph(n: usize, per: usize, rng: &mut impl Rng) -> EdgeList {
    let mut edges = Vec::with_capacity(n * per);
    let mut ends: Vec<u64> = Vec::with_capacity(2 * n * per);
    for v in 1..n as u64 {
        let mut picked = Vec::with_capacity(per);
        for _ in 0..per.min(v as usize) {
            let u = if ends.is_empty() || rng.random_bool(0.2) {
                rng.random_range(0..v)
            } else {
                *ends.choose(rng).expect("nonempty")
            };
            if !picked.contains(&u) {
                picked.push(u);
            }
        }
        for u in picked {
            edges.push((v, u));
            ends.push(u);
            ends.push(v);
        }
    }
    EdgeList::new(n, edges)
}

/// Parent array of a random tree rooted at 0; `parent[i] < i`.
pub fn random_tree(n: usize, max_fanout_bias: f64, rng: &mut impl Rng) -> Vec<Option<usize>> {
    let mut parent = vec![None; n];
    for (i, p) in parent.iter_mut().enumerate().skip(1) {
        // bias toward recent nodes makes deeper trees
        let lo = if rng.random_bool(max_fanout_bias.clamp(0.0, 1.0)) { i.saturating_sub(4) } else { 0 };
        *p = Some(rng.random_range(lo..i));
    }
    parent
}

/// One text per vertex: with probability `p` one or two words from `vocab`,
/// otherwise empty.
pub fn random_texts(n: usize, vocab: &[&str], p: f64, rng: &mut impl Rng) -> Vec<String> {
    (0..n)
        .map(|_| {
            if !rng.random_bool(p) {
                return String::new();
            }
            let k = rng.random_range(1..=2);
            (0..k).map(|_| *vocab.choose(rng).expect("vocab")).collect::<Vec<_>>().join(" ")
        })
        .collect()
}

/// About `m` random triples over `resources` resources named `r<i>`, some
/// suffixed with a word from `vocab`. A `literal_ratio` share of objects are
/// literals drawn from `vocab`; predicates come from `preds`.
pub fn random_triples(
    resources: usize,
    m: usize,
    preds: &[&str],
    vocab: &[&str],
    literal_ratio: f64,
    rng: &mut impl Rng,
) -> Vec<crate::gkws::Triple> {
    let names: Vec<String> = (0..resources)
        .map(|i| match rng.random_bool(0.3) {
            true => format!("r{i}_{}", vocab.choose(rng).expect("vocab")),
            false => format!("r{i}"),
        })
        .collect();
    (0..m)
        .map(|_| {
            let s = names.choose(rng).expect("resources");
            let p = preds.choose(rng).expect("predicates");
            if rng.random_bool(literal_ratio) {
                crate::gkws::Triple::literal(s, p, vocab.choose(rng).expect("vocab"))
            } else {
                crate::gkws::Triple::resource(s, p, names.choose(rng).expect("resources"))
            }
        })
        .collect()
}

/// Random XML document with about `n` nodes: elements named from a small tag
/// set, some carrying a text child of one to three words from `vocab`.
pub fn random_xml(n: usize, vocab: &[&str], rng: &mut impl Rng) -> String {
    const TAGS: [&str; 5] = ["item", "group", "entry", "part", "node"];
    let elements = (n / 2).max(1);
    let parent = random_tree(elements, 0.5, rng);
    let mut kids = vec![Vec::new(); elements];
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            kids[*p].push(i);
        }
    }
    let tags: Vec<&str> = (0..elements).map(|_| *TAGS.choose(rng).expect("tags")).collect();
    let texts: Vec<Option<String>> = (0..elements)
        .map(|_| {
            rng.random_bool(0.6).then(|| {
                let k = rng.random_range(1..=3);
                (0..k).map(|_| *vocab.choose(rng).expect("vocab")).collect::<Vec<_>>().join(" ")
            })
        })
        .collect();
    let mut out = String::new();
    write_element(0, &kids, &tags, &texts, &mut out);
    out
}

fn write_element(i: usize, kids: &[Vec<usize>], tags: &[&str], texts: &[Option<String>], out: &mut String) {
    // iterative to survive deep trees
    enum Step {
        Open(usize),
        Close(usize),
    }
    let mut stack = vec![Step::Open(i)];
    while let Some(s) = stack.pop() {
        match s {
            Step::Open(v) => {
                out.push('<');
                out.push_str(tags[v]);
                out.push('>');
                if let Some(t) = &texts[v] {
                    out.push_str(t);
                }
                stack.push(Step::Close(v));
                for &c in kids[v].iter().rev() {
                    stack.push(Step::Open(c));
                }
            }
            Step::Close(v) => {
                out.push_str("</");
                out.push_str(tags[v]);
                out.push('>');
            }
        }
    }
}
