//! Approximate terrain shortest paths.
//!
//! A DEM grid is turned into a network: every cell edge is split so that
//! neighboring points are at most `eps` apart, and inside each cell every
//! pair of points that do not lie on a common cell edge is joined by a
//! straight shortcut. [`TerrainSssp`] then runs single-source shortest paths
//! from `s` and stops once no unsettled vertex can still improve `t`.

mod hausdorff;
mod sssp;

pub use hausdorff::{hausdorff, hausdorff_with, polyline_length};
pub use sssp::{TerrainAgg, TerrainAnswer, TerrainQuery, TerrainSssp, TerrainStep, Wave};

use rand::Rng;
use thiserror::Error;

use crate::model::{VertexData, VertexId};
use crate::text::{parse_field, ParseError};

pub type Point = [f64; 3];

#[derive(Debug, Error, PartialEq)]
pub enum TerrainError {
    #[error("grid needs at least 2 rows and 2 columns, got {0}x{1}")]
    Degenerate(usize, usize),
    #[error("eps must be positive and finite, got {0}")]
    BadEps(f64),
    #[error("bad DEM: {0}")]
    Parse(String),
    #[error("polyline is empty")]
    EmptyPolyline,
}

/// Elevation samples on a square lattice. Row `i`, column `j` lies at
/// `(j * spacing, i * spacing)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DemGrid {
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
    pub z: Vec<f64>,
}

impl DemGrid {
    pub fn new(rows: usize, cols: usize, spacing: f64, z: Vec<f64>) -> Result<Self, TerrainError> {
        if rows < 2 || cols < 2 {
            return Err(TerrainError::Degenerate(rows, cols));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(TerrainError::Parse(format!("spacing must be positive, got {spacing}")));
        }
        if z.len() != rows * cols {
            return Err(TerrainError::Parse(format!("expected {} elevations, got {}", rows * cols, z.len())));
        }
        if let Some(bad) = z.iter().find(|v| !v.is_finite()) {
            return Err(TerrainError::Parse(format!("non-finite elevation {bad}")));
        }
        Ok(DemGrid { rows, cols, spacing, z })
    }

    pub fn flat(rows: usize, cols: usize, spacing: f64) -> Result<Self, TerrainError> {
        DemGrid::new(rows, cols, spacing, vec![0.0; rows * cols])
    }

    /// Smooth random hills: a sum of a few Gaussian bumps.
    pub fn synthetic(rows: usize, cols: usize, spacing: f64, rng: &mut impl Rng) -> Result<Self, TerrainError> {
        let (w, h) = (cols as f64 * spacing, rows as f64 * spacing);
        let hills: Vec<(f64, f64, f64, f64)> = (0..5)
            .map(|_| {
                (
                    rng.random_range(0.0..w),
                    rng.random_range(0.0..h),
                    rng.random_range(5.0..60.0),
                    rng.random_range(0.1..0.4) * w.max(h),
                )
            })
            .collect();
        let mut z = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let (x, y) = (j as f64 * spacing, i as f64 * spacing);
                let e: f64 = hills
                    .iter()
                    .map(|&(cx, cy, a, r)| a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * r * r)).exp())
                    .sum();
                z.push(e);
            }
        }
        DemGrid::new(rows, cols, spacing, z)
    }

    /// Header `rows cols spacing`, then row-major elevations.
    pub fn parse(text: &str) -> Result<Self, TerrainError> {
        let mut t = text.split_whitespace();
        let mut next = |what: &str| t.next().ok_or_else(|| TerrainError::Parse(format!("missing {what}")));
        let err = |e: ParseError| TerrainError::Parse(e.0);
        let rows: usize = parse_field(next("rows")?, "rows").map_err(err)?;
        let cols: usize = parse_field(next("cols")?, "cols").map_err(err)?;
        let spacing: f64 = parse_field(next("spacing")?, "spacing").map_err(err)?;
        let z = t.map(|v| parse_field(v, "elevation").map_err(err)).collect::<Result<Vec<f64>, _>>()?;
        DemGrid::new(rows, cols, spacing, z)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.spacing);
        for row in self.z.chunks(self.cols) {
            s.push_str(&row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
            s.push('\n');
        }
        s
    }

    pub fn sample(&self, i: usize, j: usize) -> Point {
        [j as f64 * self.spacing, i as f64 * self.spacing, self.z[i * self.cols + j]]
    }
}

pub fn dist3(a: &Point, b: &Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Undirected network with 3D coordinates. Edge weights are the Euclidean
/// lengths of their segments.
#[derive(Debug, Clone, PartialEq)]
pub struct TerrainNetwork {
    pub coords: Vec<Point>,
    pub edges: Vec<(u32, u32, f64)>,
}

impl TerrainNetwork {
    fn push_edge(&mut self, a: u32, b: u32) {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let w = dist3(&self.coords[a as usize], &self.coords[b as usize]);
        self.edges.push((a, b, w));
    }

    fn finish(mut self) -> Self {
        self.edges.sort_by_key(|e| (e.0, e.1));
        self.edges.dedup_by(|x, y| (x.0, x.1) == (y.0, y.1));
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<(u32, f64)>> {
        let mut adj = vec![Vec::new(); self.coords.len()];
        for &(a, b, w) in &self.edges {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        adj
    }

    pub fn vertices(&self) -> Vec<VertexData<TerrainVertex>> {
        self.adjacency()
            .into_iter()
            .enumerate()
            .map(|(i, nb)| {
                VertexData::new(
                    i as u64,
                    TerrainVertex {
                        pos: self.coords[i],
                        adj: nb.into_iter().map(|(u, w)| (VertexId(u as u64), w)).collect(),
                    },
                )
            })
            .collect()
    }
}

/// Network vertex id of grid sample `(i, j)`; samples come first in every
/// network built here.
pub fn corner_id(grid: &DemGrid, i: usize, j: usize) -> u64 {
    (i * grid.cols + j) as u64
}

/// Builds the split-and-shortcut network. Each cell edge is divided into
/// `ceil(spacing / eps)` equal segments.
pub fn build_network(grid: &DemGrid, eps: f64) -> Result<TerrainNetwork, TerrainError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(TerrainError::BadEps(eps));
    }
    let (rows, cols) = (grid.rows, grid.cols);
    let k = ((grid.spacing / eps) - 1e-9).ceil().max(1.0) as usize;
    let splits = k - 1;
    let mut net = TerrainNetwork { coords: Vec::new(), edges: Vec::new() };
    for i in 0..rows {
        for j in 0..cols {
            net.coords.push(grid.sample(i, j));
        }
    }
    let corner = |i: usize, j: usize| (i * cols + j) as u32;
    let h_base = net.coords.len();
    let v_base = h_base + rows * (cols - 1) * splits;

    let interp = |net: &mut TerrainNetwork, a: Point, b: Point| {
        for s in 1..k {
            let f = s as f64 / k as f64;
            net.coords.push([a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f, a[2] + (b[2] - a[2]) * f]);
        }
    };
    for i in 0..rows {
        for j in 0..cols - 1 {
            interp(&mut net, grid.sample(i, j), grid.sample(i, j + 1));
        }
    }
    for i in 0..rows - 1 {
        for j in 0..cols {
            interp(&mut net, grid.sample(i, j), grid.sample(i + 1, j));
        }
    }

    // Points of one cell edge in order, corners included.
    let horizontal = |i: usize, j: usize| -> Vec<u32> {
        let base = h_base + (i * (cols - 1) + j) * splits;
        let mut p = vec![corner(i, j)];
        p.extend((0..splits).map(|s| (base + s) as u32));
        p.push(corner(i, j + 1));
        p
    };
    let vertical = |i: usize, j: usize| -> Vec<u32> {
        let base = v_base + (i * cols + j) * splits;
        let mut p = vec![corner(i, j)];
        p.extend((0..splits).map(|s| (base + s) as u32));
        p.push(corner(i + 1, j));
        p
    };

    for i in 0..rows {
        for j in 0..cols - 1 {
            for w in horizontal(i, j).windows(2) {
                net.push_edge(w[0], w[1]);
            }
        }
    }
    for i in 0..rows - 1 {
        for j in 0..cols {
            for w in vertical(i, j).windows(2) {
                net.push_edge(w[0], w[1]);
            }
        }
    }

    let mut members: Vec<(u32, u8)> = Vec::new();
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            members.clear();
            let sides = [horizontal(i, j), horizontal(i + 1, j), vertical(i, j), vertical(i, j + 1)];
            for (bit, side) in sides.iter().enumerate() {
                for &p in side {
                    match members.iter_mut().find(|m| m.0 == p) {
                        Some(m) => m.1 |= 1 << bit,
                        None => members.push((p, 1 << bit)),
                    }
                }
            }
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    if members[a].1 & members[b].1 == 0 {
                        net.push_edge(members[a].0, members[b].0);
                    }
                }
            }
        }
    }
    Ok(net.finish())
}

/// Grid edges plus one fixed diagonal per cell, from `(i, j)` to
/// `(i + 1, j + 1)`. No splitting and no shortcuts.
pub fn build_tin(grid: &DemGrid) -> TerrainNetwork {
    let mut net = TerrainNetwork { coords: Vec::new(), edges: Vec::new() };
    for i in 0..grid.rows {
        for j in 0..grid.cols {
            net.coords.push(grid.sample(i, j));
        }
    }
    let c = |i: usize, j: usize| (i * grid.cols + j) as u32;
    for i in 0..grid.rows {
        for j in 0..grid.cols {
            if j + 1 < grid.cols {
                net.push_edge(c(i, j), c(i, j + 1));
            }
            if i + 1 < grid.rows {
                net.push_edge(c(i, j), c(i + 1, j));
            }
            if i + 1 < grid.rows && j + 1 < grid.cols {
                net.push_edge(c(i, j), c(i + 1, j + 1));
            }
        }
    }
    net.finish()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TerrainVertex {
    pub pos: Point,
    pub adj: Vec<(VertexId, f64)>,
}

/// `id \t x y z \t nbr:w nbr:w ...`
pub fn format_vertex(v: &VertexData<TerrainVertex>) -> String {
    let [x, y, z] = v.value.pos;
    let adj: Vec<String> = v.value.adj.iter().map(|(u, w)| format!("{u}:{w}")).collect();
    format!("{}\t{x} {y} {z}\t{}", v.id, adj.join(" "))
}

pub fn parse_vertex(line: &str) -> Result<VertexData<TerrainVertex>, ParseError> {
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 3 {
        return Err(ParseError::new(format!("expected 3 tab-separated fields, got {}", f.len())));
    }
    let id: VertexId = parse_field(f[0], "vertex id")?;
    let xyz: Vec<f64> = crate::text::parse_list(f[1])?;
    let pos: Point = xyz.try_into().map_err(|_| ParseError::new("expected `x y z`"))?;
    let adj = f[2]
        .split_whitespace()
        .map(|e| {
            let (u, w) = e.split_once(':').ok_or_else(|| ParseError::new(format!("bad edge {e:?}")))?;
            Ok((parse_field(u, "neighbor")?, parse_field(w, "weight")?))
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(VertexData { id, value: TerrainVertex { pos, adj } })
}

/// One `x y z` line per point.
pub fn format_path(path: &[Point]) -> String {
    path.iter().map(|[x, y, z]| format!("{x} {y} {z}\n")).collect()
}
