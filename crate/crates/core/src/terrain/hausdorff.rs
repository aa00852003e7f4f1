use super::{dist3, Point, TerrainError};

pub fn polyline_length(p: &[Point]) -> f64 {
    p.windows(2).map(|w| dist3(&w[0], &w[1])).sum()
}

fn point_segment(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
    if len2 == 0.0 {
        return dist3(p, a);
    }
    let t = (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1] + (p[2] - a[2]) * ab[2]) / len2).clamp(0.0, 1.0);
    dist3(p, &[a[0] + ab[0] * t, a[1] + ab[1] * t, a[2] + ab[2] * t])
}

fn point_polyline(p: &Point, line: &[Point]) -> f64 {
    if line.len() == 1 {
        return dist3(p, &line[0]);
    }
    line.windows(2).map(|w| point_segment(p, &w[0], &w[1])).fold(f64::INFINITY, f64::min)
}

/// Points along `line` no more than `step` apart, vertices included.
fn samples(line: &[Point], step: f64) -> Vec<Point> {
    let mut out = vec![line[0]];
    for w in line.windows(2) {
        let n = (dist3(&w[0], &w[1]) / step).ceil().max(1.0) as usize;
        for i in 1..=n {
            let f = i as f64 / n as f64;
            out.push([
                w[0][0] + (w[1][0] - w[0][0]) * f,
                w[0][1] + (w[1][1] - w[0][1]) * f,
                w[0][2] + (w[1][2] - w[0][2]) * f,
            ]);
        }
    }
    out
}

fn directed(a: &[Point], b: &[Point], step: f64) -> f64 {
    samples(a, step).iter().map(|p| point_polyline(p, b)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two 3D polylines, sampling each at
/// `step` meters of arc length.
pub fn hausdorff_with(p1: &[Point], p2: &[Point], step: f64) -> Result<f64, TerrainError> {
    if p1.is_empty() || p2.is_empty() {
        return Err(TerrainError::EmptyPolyline);
    }
    Ok(directed(p1, p2, step).max(directed(p2, p1, step)))
}

/// [`hausdorff_with`] at 0.1 m resolution.
pub fn hausdorff(p1: &[Point], p2: &[Point]) -> Result<f64, TerrainError> {
    hausdorff_with(p1, p2, 0.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_offset_lines() {
        let a = [[0.0, 0.0, 0.0], [10.0, 0.0, 0.0], [10.0, 5.0, 1.0]];
        assert!(hausdorff(&a, &a).unwrap() < 1e-9);
        let b = [[0.0, 3.0, 0.0], [10.0, 3.0, 0.0]];
        let c = [[0.0, 0.0, 0.0], [10.0, 0.0, 0.0]];
        assert!((hausdorff(&b, &c).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(hausdorff(&[], &c), Err(TerrainError::EmptyPolyline));
    }
}
