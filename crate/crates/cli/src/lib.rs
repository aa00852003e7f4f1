//! Console and batch front-end for the stepshare engine.

pub mod config;
pub mod index;
pub mod session;

use std::fs::File;
use std::io::{self, BufReader};

use anyhow::Result;
use clap::{Parser, Subcommand};
use stepshare::gkws::{GkwsPlain, GkwsRdf};
use stepshare::ppsp::{Bfs, BiBfs, Hub2};
use stepshare::reach::ReachSearch;
use stepshare::terrain::TerrainSssp;
use stepshare::xml::XmlSearch;

use config::{App, CliConfig};
use session::{sink_for, CliApp, Session};

#[derive(Debug, Parser)]
#[command(name = "stepshare", version, about = "Answer graph queries with shared supersteps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a graph and answer queries from `--batch` or standard input.
    Run(CliConfig),
    /// Build the graph file a query app loads.
    Index(CliConfig),
}

fn serve<P: CliApp>(app: P, cfg: &CliConfig) -> Result<()> {
    let mut session = Session::open(app, cfg.engine(), &cfg.graph)?;
    match &cfg.batch {
        Some(path) => {
            let mut sink = sink_for(&cfg.output())?;
            session.run_batch(BufReader::new(File::open(path)?), sink.as_mut())
        }
        None => {
            let input = BufReader::new(io::stdin());
            session.run_console(input, &mut io::stdout().lock(), cfg.dump.as_deref())
        }
    }
}

/// Validates `cfg` and serves queries with the chosen app.
pub fn run(cfg: &CliConfig) -> Result<()> {
    cfg.validate()?;
    match cfg.app {
        App::Ppsp => serve(BiBfs::new(), cfg),
        App::PpspBfs => serve(Bfs::new(), cfg),
        App::PpspHub2 => serve(Hub2::new(true), cfg),
        App::Xml => serve(XmlSearch::new(), cfg),
        App::Terrain => serve(TerrainSssp::new(), cfg),
        App::Reach => serve(ReachSearch::new(), cfg),
        App::Gkws => serve(GkwsPlain::new(cfg.hops), cfg),
        App::GkwsRdf => serve(GkwsRdf::new(cfg.hops), cfg),
    }
}
