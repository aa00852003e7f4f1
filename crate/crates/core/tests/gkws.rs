mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::gkws::{answers, expand, Node};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use stepshare::gkws::{
    convert_triples, plain_vertices, AnswerTree, GkwsAnswer, GkwsPlain, GkwsQuery, GkwsRdf, PlainVertex, RdfVertex,
    Triple,
};
use stepshare::synth::{random_graph, random_texts, random_triples};
use stepshare::text::tokenize;
use stepshare::{Engine, EngineConfig, VertexData, WorkerProgram};

const VOCAB: [&str; 5] = ["alpha", "beta", "gamma", "delta", "omega"];
const PREDS: [&str; 3] = ["knows", "cites", "likes"];

fn run<P>(app: P, vs: Vec<VertexData<P::Value>>, qs: &[GkwsQuery]) -> Vec<(GkwsAnswer, u32)>
where
    P: WorkerProgram<Query = GkwsQuery, Answer = GkwsAnswer>,
{
    let mut e = Engine::new(app, EngineConfig::new(3, 8)).unwrap();
    e.load_vertices(vs).unwrap();
    e.run_batch(qs.iter().cloned()).unwrap().into_iter().map(|o| (o.result.unwrap(), o.stats.supersteps)).collect()
}

fn flat(a: &GkwsAnswer) -> Vec<(u64, Vec<(u64, u32)>)> {
    a.iter().map(|t| (t.root.0, t.fields.clone())).collect()
}

fn random_query(rng: &mut impl Rng, words: &[&str]) -> GkwsQuery {
    let m = rng.random_range(1..=3);
    let text: Vec<&str> = (0..m).map(|_| *words.choose(rng).unwrap()).collect();
    GkwsQuery::new(&text.join(" "), rng.random_range(0..=4)).unwrap()
}

fn check_caps(out: &[(GkwsAnswer, u32)], qs: &[GkwsQuery]) {
    for ((a, steps), q) in out.iter().zip(qs) {
        assert!(*steps <= q.hop_cap + 1);
        assert!(a.iter().all(|t| t.fields.iter().all(|f| f.1 <= q.hop_cap)));
    }
}

#[test]
fn plain_matches_per_root_bfs() {
    for seed in 0..30u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.random_range(5..80);
        let g = random_graph(n, rng.random_range(n / 2..n * 3), &mut rng);
        let texts = random_texts(n, &VOCAB, 0.3, &mut rng);
        let nodes: Vec<Node> =
            texts.iter().enumerate().map(|(i, t)| Node { words: tokenize(t), ident: i as u64, root: true }).collect();
        let out: Vec<Vec<usize>> = g.out_adj().into_iter().map(|a| a.into_iter().map(|v| v as usize).collect()).collect();
        let qs: Vec<GkwsQuery> = (0..8).map(|_| random_query(&mut rng, &VOCAB)).collect();
        let got = run(GkwsPlain::default(), plain_vertices(&g, &texts), &qs);
        check_caps(&got, &qs);
        for (q, (a, _)) in qs.iter().zip(&got) {
            assert_eq!(flat(a), answers(&out, &nodes, &q.keywords, q.hop_cap), "seed {seed} {q:?}");
        }
    }
}

#[test]
fn plain_boundary_cases() {
    let g = stepshare::graph_io::EdgeList::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
    let texts: Vec<String> = ["alpha beta", "alpha", "", "beta"].map(String::from).to_vec();
    let vs = plain_vertices(&g, &texts);
    let qs = [
        GkwsQuery::new("alpha", 3).unwrap(),
        GkwsQuery::new("alpha beta", 0).unwrap(),
        GkwsQuery::new("alpha beta", 1).unwrap(),
        GkwsQuery::new("zeta", 3).unwrap(),
    ];
    let out = run(GkwsPlain::default(), vs, &qs);
    let roots = |a: &GkwsAnswer| a.iter().map(|t| t.root.0).collect::<Vec<_>>();
    // A single keyword: matches are roots at hop 0, others reach them.
    assert!(out[0].0.iter().filter(|t| t.fields[0].1 == 0).map(|t| t.root.0).eq([0, 1]));
    assert_eq!(roots(&out[1].0), [0]);
    assert_eq!(out[1].1, 1);
    // Vertex 3 matches beta itself and reaches alpha at 0 in one hop.
    assert_eq!(out[2].0.iter().find(|t| t.root.0 == 3).unwrap().fields, [(0, 1), (3, 0)]);
    assert!(out[3].0.is_empty());
}

fn rdf_vertices(triples: &[Triple]) -> Vec<VertexData<RdfVertex>> {
    convert_triples(triples).vertices
}

#[test]
fn figure_fragment_cases() {
    let triples = [Triple::resource("Tom", "supervises", "Peter"), Triple::literal("Peter", "age", "25")];
    let qs = [GkwsQuery::new("age", 3).unwrap(), GkwsQuery::new("supervises", 3).unwrap(), GkwsQuery::new("25 tom", 3).unwrap()];
    let out = run(GkwsRdf::default(), rdf_vertices(&triples), &qs);
    // Tom = 0, Peter = 1, the literal "25" = 2.
    assert_eq!(
        out[0].0,
        [AnswerTree { root: 0.into(), fields: vec![(2, 2)] }, AnswerTree { root: 1.into(), fields: vec![(2, 1)] }]
    );
    assert_eq!(out[1].0, [AnswerTree { root: 0.into(), fields: vec![(1, 1)] }]);
    assert_eq!(out[2].0, [AnswerTree { root: 0.into(), fields: vec![(2, 2), (0, 0)] }]);
    let mut e = Engine::new(GkwsRdf::default(), EngineConfig::new(1, 1)).unwrap();
    e.load_vertices(rdf_vertices(&triples)).unwrap();
    e.enqueue_str("age --hops=1").unwrap();
    let o = e.run_until_idle().unwrap();
    assert_eq!(o[0].format(e.app()), "1 1 (age 2 1)");
}

#[test]
fn rdf_matches_expanded_graph_oracle() {
    let words: Vec<&str> = VOCAB.iter().chain(&PREDS).copied().collect();
    for seed in 0..30u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.random_range(4..40);
        let triples = random_triples(n, rng.random_range(n..n * 4), &PREDS, &VOCAB, 0.3, &mut rng);
        let (out, nodes) = expand(&triples);
        let qs: Vec<GkwsQuery> = (0..8).map(|_| random_query(&mut rng, &words)).collect();
        let got = run(GkwsRdf::default(), rdf_vertices(&triples), &qs);
        check_caps(&got, &qs);
        for (q, (a, _)) in qs.iter().zip(&got) {
            assert_eq!(flat(a), answers(&out, &nodes, &q.keywords, q.hop_cap), "seed {seed} {q:?}");
        }
    }
}

#[test]
fn rdf_without_label_matches_equals_plain() {
    for seed in 0..10u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.random_range(4..40);
        let triples = random_triples(n, n * 3, &PREDS, &VOCAB, 0.0, &mut rng);
        let rdf = rdf_vertices(&triples);
        let plain: Vec<VertexData<PlainVertex>> = rdf
            .iter()
            .map(|v| {
                let inc = v.value.inc.iter().map(|(u, _)| *u).collect::<BTreeSet<_>>().into_iter().collect();
                VertexData { id: v.id, value: PlainVertex { text: v.value.name.clone(), inc } }
            })
            .collect();
        let qs: Vec<GkwsQuery> = (0..8).map(|_| random_query(&mut rng, &VOCAB)).collect();
        let a = run(GkwsRdf::default(), rdf, &qs);
        let b = run(GkwsPlain::default(), plain, &qs);
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn conversion_matches_group_by() {
    let mut rng = StdRng::seed_from_u64(4);
    let triples = random_triples(30, 120, &PREDS, &VOCAB, 0.4, &mut rng);
    let g = convert_triples(&triples);
    let mut inc: BTreeMap<&str, BTreeSet<(&str, &str)>> = BTreeMap::new();
    let mut lits: BTreeMap<&str, BTreeSet<(&str, &str)>> = BTreeMap::new();
    for t in &triples {
        if t.literal {
            lits.entry(&t.s).or_default().insert((&t.p, &t.o));
        } else {
            inc.entry(&t.o).or_default().insert((&t.p, &t.s));
        }
    }
    for v in &g.vertices {
        let name = v.value.name.as_str();
        assert_eq!(g.names[v.id.0 as usize], name);
        let got: BTreeSet<(&str, &str)> =
            v.value.inc.iter().map(|(u, p)| (p.as_str(), g.names[u.0 as usize].as_str())).collect();
        assert_eq!(got, inc.get(name).cloned().unwrap_or_default(), "{name}");
        let got: BTreeSet<(&str, &str)> = v.value.literals.iter().map(|l| (l.pred.as_str(), l.text.as_str())).collect();
        assert_eq!(got, lits.get(name).cloned().unwrap_or_default(), "{name}");
        for l in &v.value.literals {
            assert_eq!(g.names[l.id as usize], l.text);
        }
    }
}
