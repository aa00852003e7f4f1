//! Command-line options and their validation.

use std::path::PathBuf;

use anyhow::{bail, ensure, Context as _, Result};
use clap::{Args, ValueEnum};
use stepshare::ppsp::DegreeMode;
use stepshare::{EngineConfig, TransportKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum App {
    /// Bidirectional BFS.
    Ppsp,
    /// Single-source BFS from `s`.
    PpspBfs,
    /// Hub-label search over a graph labeled by `index`.
    PpspHub2,
    Xml,
    Terrain,
    Reach,
    Gkws,
    GkwsRdf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Transport {
    #[default]
    InProcess,
    Socket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Degree {
    #[default]
    Undirected,
    In,
    Out,
    Sum,
}

impl From<Degree> for DegreeMode {
    fn from(d: Degree) -> Self {
        match d {
            Degree::Undirected => DegreeMode::Undirected,
            Degree::In => DegreeMode::In,
            Degree::Out => DegreeMode::Out,
            Degree::Sum => DegreeMode::Sum,
        }
    }
}

/// Where answers go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Console,
    Dir(PathBuf),
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    #[arg(long, env = "QGL_APP", value_enum)]
    pub app: App,

    /// Graph file. For `index`, the raw input of the chosen app.
    #[arg(long, env = "QGL_GRAPH")]
    pub graph: PathBuf,

    #[arg(long, env = "QGL_WORKERS", default_value_t = 4)]
    pub workers: usize,

    /// Queries in flight per super-round.
    #[arg(long, env = "QGL_CAPACITY", default_value_t = 8)]
    pub capacity: usize,

    /// Results directory, or `console`. For `index`, the output file.
    #[arg(long, env = "QGL_OUTPUT")]
    pub output: Option<String>,

    /// Query file, one query per line.
    #[arg(long, env = "QGL_BATCH")]
    pub batch: Option<PathBuf>,

    #[arg(long, env = "QGL_TRANSPORT", value_enum, default_value_t)]
    pub transport: Transport,

    /// Number of hubs for the hub-label index.
    #[arg(long, env = "QGL_HUBS", default_value_t = 10)]
    pub hubs: usize,

    #[arg(long, env = "QGL_DEGREE_MODE", value_enum, default_value_t)]
    pub degree_mode: Degree,

    /// Terrain split length; defaults to a fifth of the grid spacing.
    #[arg(long, env = "QGL_EPS")]
    pub eps: Option<f64>,

    /// Default hop cap for keyword search.
    #[arg(long, env = "QGL_HOPS", default_value_t = stepshare::gkws::DEFAULT_HOP_CAP)]
    pub hops: u32,

    /// Treat edge-list input as directed.
    #[arg(long)]
    pub directed: bool,

    /// Reach labels without level alignment.
    #[arg(long)]
    pub naive: bool,

    /// Console: write the graph here on `quit`.
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

impl CliConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.workers >= 1, "--workers must be at least 1");
        ensure!(self.capacity >= 1, "--capacity must be at least 1");
        ensure!(self.hubs >= 1, "--hubs must be at least 1");
        if let Some(eps) = self.eps {
            ensure!(eps.is_finite() && eps > 0.0, "--eps must be positive, got {eps}");
        }
        if !self.graph.is_file() {
            bail!("graph file {} does not exist", self.graph.display());
        }
        if let Some(b) = &self.batch {
            ensure!(b.is_file(), "batch file {} does not exist", b.display());
        }
        Ok(())
    }

    pub fn engine(&self) -> EngineConfig {
        let t = match self.transport {
            Transport::InProcess => TransportKind::InProcess,
            Transport::Socket => TransportKind::Socket,
        };
        EngineConfig::new(self.workers, self.capacity).with_transport(t)
    }

    pub fn output(&self) -> Output {
        match self.output.as_deref() {
            None | Some("console") | Some("-") => Output::Console,
            Some(dir) => Output::Dir(dir.into()),
        }
    }

    /// The output file of an index job.
    pub fn index_output(&self) -> Result<PathBuf> {
        match self.output() {
            Output::Dir(p) => Ok(p),
            Output::Console => None.context("index jobs need --output FILE"),
        }
    }
}
