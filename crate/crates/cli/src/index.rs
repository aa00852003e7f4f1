//! Offline jobs that turn raw inputs into graphs the query apps load.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use log::info;
use stepshare::gkws::{convert_triples, GkwsRdf, Triple};
use stepshare::graph_io::{read_edge_list, write_lines, EdgeList};
use stepshare::ppsp::{format_vertex, hub_select, is_hub, vertices_from_edges, HubIndexer, PpspVertex};
use stepshare::terrain::{build_network, DemGrid};
use stepshare::xml::{parse_xml, XmlLevels};
use stepshare::{reach, terrain, Engine, VertexData, WorkerProgram};

use crate::config::{App, CliConfig};

/// What an index job produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub vertices: usize,
    /// Queries the job ran on the engine; zero for pure conversions.
    pub queries: usize,
    pub rounds: u64,
}

fn read_edges(path: &Path) -> Result<EdgeList> {
    Ok(read_edge_list(BufReader::new(File::open(path)?))?)
}

fn sorted_lines<V>(mut vs: Vec<VertexData<V>>, fmt: impl Fn(&VertexData<V>) -> String) -> Vec<String> {
    vs.sort_by_key(|v| v.id);
    vs.iter().map(fmt).collect()
}

/// Hub labels over a PPSP vertex file: one BFS query per hub and direction.
fn hub_labels(cfg: &CliConfig, out: &Path) -> Result<IndexReport> {
    let mut engine = Engine::new(HubIndexer::new([]), cfg.engine())?;
    engine.load_graph(&cfg.graph)?;
    let vertices: Vec<VertexData<PpspVertex>> = engine.vertices().cloned().collect();
    if vertices.iter().any(is_hub) {
        bail!("{} already carries hub labels", cfg.graph.display());
    }
    let directed = vertices.iter().any(|v| v.value.is_directed());
    let hubs = hub_select(&vertices, cfg.hubs, cfg.degree_mode.into())?;
    let mut engine = Engine::new(HubIndexer::new(hubs.clone()), cfg.engine())?;
    engine.load_vertices(vertices)?;
    let queries = HubIndexer::queries(&hubs, directed);
    let n = queries.len();
    for o in engine.run_batch(queries)? {
        o.result.with_context(|| format!("hub query {}", o.qid))?;
    }
    let rounds = engine.rounds();
    let lines = sorted_lines(engine.into_vertices(), format_vertex);
    write_lines(out, &lines)?;
    Ok(IndexReport { vertices: lines.len(), queries: n, rounds })
}

fn xml_levels(cfg: &CliConfig, out: &Path) -> Result<IndexReport> {
    let doc = fs::read_to_string(&cfg.graph)?;
    let mut engine = Engine::new(XmlLevels::new(), cfg.engine())?;
    engine.load_vertices(parse_xml(&doc)?)?;
    engine.run_one(())?.result?;
    let rounds = engine.rounds();
    let lines = sorted_lines(engine.into_vertices(), stepshare::xml::format_vertex);
    write_lines(out, &lines)?;
    Ok(IndexReport { vertices: lines.len(), queries: 1, rounds })
}

/// Condense, number, then run the level, yes and no label jobs.
fn reach_labels(cfg: &CliConfig, out: &Path) -> Result<IndexReport> {
    let g = read_edges(&cfg.graph)?;
    let vs = reach::label_graph(&g, cfg.engine(), !cfg.naive)?;
    let lines = sorted_lines(vs, reach::format_vertex);
    write_lines(out, &lines)?;
    Ok(IndexReport { vertices: lines.len(), queries: 3, rounds: 0 })
}

fn terrain_network(cfg: &CliConfig, out: &Path) -> Result<IndexReport> {
    let grid = DemGrid::parse(&fs::read_to_string(&cfg.graph)?)?;
    let eps = cfg.eps.unwrap_or(grid.spacing / 5.0);
    let net = build_network(&grid, eps)?;
    info!("{} vertices and {} edges at eps {eps}", net.len(), net.edges.len());
    let lines = sorted_lines(net.vertices(), terrain::format_vertex);
    write_lines(out, &lines)?;
    Ok(IndexReport { vertices: lines.len(), queries: 0, rounds: 0 })
}

fn rdf_graph(cfg: &CliConfig, out: &Path) -> Result<IndexReport> {
    let triples = Triple::read_all(BufReader::new(File::open(&cfg.graph)?))?;
    let app = GkwsRdf::new(cfg.hops);
    let lines = sorted_lines(convert_triples(&triples).vertices, |v| app.dump_vdata(v).expect("rdf vertex line"));
    write_lines(out, &lines)?;
    Ok(IndexReport { vertices: lines.len(), queries: 0, rounds: 0 })
}

fn ppsp_graph(cfg: &CliConfig, out: &Path) -> Result<IndexReport> {
    let g = read_edges(&cfg.graph)?;
    let lines = sorted_lines(vertices_from_edges(&g, cfg.directed), format_vertex);
    write_lines(out, &lines)?;
    Ok(IndexReport { vertices: lines.len(), queries: 0, rounds: 0 })
}

/// Runs the index job of `cfg.app`, writing the graph to `--output`.
///
/// | app | input | output |
/// |-----|-------|--------|
/// | `ppsp`, `ppsp-bfs` | edge list | PPSP vertex file |
/// | `ppsp-hub2` | PPSP vertex file | the same with hub labels |
/// | `xml` | XML document | tree with levels |
/// | `reach` | edge list | labeled condensation |
/// | `terrain` | DEM grid | shortcut network |
/// | `gkws-rdf` | triples | RDF vertex file |
pub fn run_index(cfg: &CliConfig) -> Result<IndexReport> {
    cfg.validate()?;
    let out = cfg.index_output()?;
    let started = Instant::now();
    let report = match cfg.app {
        App::Ppsp | App::PpspBfs => ppsp_graph(cfg, &out)?,
        App::PpspHub2 => hub_labels(cfg, &out)?,
        App::Xml => xml_levels(cfg, &out)?,
        App::Reach => reach_labels(cfg, &out)?,
        App::Terrain => terrain_network(cfg, &out)?,
        App::GkwsRdf => rdf_graph(cfg, &out)?,
        App::Gkws => bail!("gkws graphs are loaded as written; there is no index job"),
    };
    info!("index job wrote {} vertices to {} in {:?}", report.vertices, out.display(), started.elapsed());
    Ok(report)
}
