mod common;

use std::collections::{BTreeSet, HashSet};

use common::xml::{Tree, LAB};
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use stepshare::synth::random_xml;
use stepshare::xml::{parse_xml, XmlAnswer, XmlLevels, XmlMode, XmlNode, XmlQuery, XmlSearch};
use stepshare::{Engine, EngineConfig, VertexData};

fn with_levels(nodes: Vec<VertexData<XmlNode>>, cfg: &EngineConfig) -> Vec<VertexData<XmlNode>> {
    let mut e = Engine::new(XmlLevels::new(), cfg.clone()).unwrap();
    e.load_vertices(nodes).unwrap();
    e.run_one(()).unwrap().result.unwrap();
    e.into_vertices()
}

fn search_engine(doc: &str, cfg: EngineConfig) -> Engine<XmlSearch> {
    let nodes = with_levels(parse_xml(doc).unwrap(), &cfg);
    let mut e = Engine::new(XmlSearch::new(), cfg).unwrap();
    e.load_vertices(nodes).unwrap();
    e
}

fn ids(a: &XmlAnswer) -> BTreeSet<usize> {
    a.hits.iter().map(|h| h.id.0 as usize).collect()
}

fn tree_of(doc: &str) -> Tree {
    let nodes = parse_xml(doc).unwrap();
    Tree::new(
        nodes.iter().map(|v| v.value.pa.map(|p| p.0 as usize)).collect(),
        nodes.iter().map(|v| v.value.words.iter().cloned().collect::<HashSet<_>>()).collect(),
    )
}

#[test]
fn lab_document_answers() {
    let mut e = search_engine(LAB, EngineConfig::new(3, 8));
    let mut ask = |mode, kw: &str| ids(&e.run_one(XmlQuery::new(mode, kw).unwrap()).unwrap().result.unwrap());
    assert_eq!(ask(XmlMode::Slca, "Tom Graph"), BTreeSet::from([9]));
    assert_eq!(ask(XmlMode::SlcaAligned, "Tom Graph"), BTreeSet::from([9]));
    assert_eq!(ask(XmlMode::Elca, "Tom Graph"), BTreeSet::from([1, 9]));
    assert_eq!(ask(XmlMode::Elca, "Peter Graph"), BTreeSet::from([9]));
    let mm = ask(XmlMode::MaxMatch, "Tom Graph");
    assert_eq!(mm, BTreeSet::from([9, 10, 11, 12, 13]));
    assert!(!mm.contains(&14));
    assert_eq!(ask(XmlMode::Slca, "Hong"), BTreeSet::from([20]));
    assert!(ask(XmlMode::Slca, "nowhere").is_empty());
}

#[test]
fn lab_levels_and_ranges() {
    let nodes = with_levels(parse_xml(LAB).unwrap(), &EngineConfig::new(2, 1));
    let levels: Vec<u32> = nodes.iter().map(|v| v.value.level.unwrap()).collect();
    assert_eq!(&levels[..12], &[0, 1, 2, 3, 2, 3, 2, 3, 4, 3, 4, 5]);
    let t = &nodes[9].value;
    assert!(LAB[t.start as usize..t.end as usize].starts_with("<paper><author>Tom Peter"));
}

#[test]
fn matches_at_one_level_finish_in_depth_plus_two() {
    let mut e = search_engine(LAB, EngineConfig::new(2, 4));
    // "tom" at 3 and 11 differ in depth; "hong" only at level 2
    let out = e.run_one(XmlQuery::new(XmlMode::SlcaAligned, "hong").unwrap()).unwrap();
    assert_eq!(out.stats.supersteps, 2 + 2);
}

#[test]
fn random_trees_match_oracles() {
    let vocab = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"];
    let mut nonempty = 0;
    for seed in 0..20u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let doc = random_xml(rng.random_range(20..400), &vocab, &mut rng);
        let tree = tree_of(&doc);
        let mut e = search_engine(&doc, EngineConfig::new(1 + seed as usize % 4, 4));
        for _ in 0..6 {
            let m = rng.random_range(1..=3);
            let kws: Vec<String> = (0..m).map(|_| vocab.choose(&mut rng).unwrap().to_string()).collect();
            let q = |mode| XmlQuery::new(mode, &kws.join(" ")).unwrap();
            let kws = q(XmlMode::Slca).keywords;
            let run = |e: &mut Engine<XmlSearch>, mode| e.run_one(q(mode)).unwrap().result.unwrap();
            let slca = tree.slca(&kws);
            nonempty += usize::from(slca.len() > 1);
            assert_eq!(ids(&run(&mut e, XmlMode::Slca)), slca, "seed {seed} {kws:?}");
            let aligned = run(&mut e, XmlMode::SlcaAligned);
            assert_eq!(ids(&aligned), slca);
            assert!(aligned.max_parent_messages <= 1);
            let elca = ids(&run(&mut e, XmlMode::Elca));
            assert_eq!(elca, tree.elca(&kws));
            assert!(slca.is_subset(&elca));
            assert_eq!(ids(&run(&mut e, XmlMode::MaxMatch)), tree.maxmatch(&kws));
        }
    }
    assert!(nonempty > 40, "fixtures too sparse: {nonempty}");
}
