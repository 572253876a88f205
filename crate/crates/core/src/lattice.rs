//! Integer-vertex lattice triangles: strict interior enumeration and Pick's
//! theorem. Everything is exact integer arithmetic.

use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};

pub type LatticePoint = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Triangle {
    pub vertices: [LatticePoint; 3],
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

impl Triangle {
    pub fn new(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<Self> {
        if cross(a, b, c) == 0 {
            return Err(Error::Domain(format!("degenerate triangle {a:?}, {b:?}, {c:?}")));
        }
        Ok(Self { vertices: [a, b, c] })
    }

    /// Twice the unsigned area (shoelace).
    pub fn doubled_area(&self) -> i64 {
        let [a, b, c] = self.vertices;
        cross(a, b, c).abs()
    }

    /// Lattice points on the boundary, vertices included.
    pub fn boundary_points(&self) -> i64 {
        let [a, b, c] = self.vertices;
        [(a, b), (b, c), (c, a)].iter().map(|(u, v)| gcd(u.0.abs_diff(v.0), u.1.abs_diff(v.1)) as i64).sum()
    }

    /// Whether `pt` lies strictly inside.
    pub fn contains_strictly(&self, pt: LatticePoint) -> bool {
        let [a, b, c] = self.vertices;
        let orient = cross(a, b, c).signum();
        [cross(a, b, pt), cross(b, c, pt), cross(c, a, pt)].iter().all(|s| s.signum() == orient)
    }

    /// All integer points strictly inside, sorted lexicographically.
    pub fn interior_points(&self) -> Vec<LatticePoint> {
        let xs = self.vertices.map(|v| v.0);
        let ys = self.vertices.map(|v| v.1);
        let (x_lo, x_hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y_lo, y_hi) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let mut out = Vec::new();
        for x in x_lo..=x_hi {
            for y in y_lo..=y_hi {
                if self.contains_strictly((x, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Interior count from Pick's theorem: I = A − B/2 + 1.
    pub fn interior_count_by_pick(&self) -> i64 {
        (self.doubled_area() - self.boundary_points() + 2) / 2
    }
}
