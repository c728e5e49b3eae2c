use serde::{Deserialize, Serialize};

use super::{LPolynomial, ZetaError};
use crate::rational::{Rational, Vertex};

/// Lower convex hull of the points (k, v_q(a_k)), normalized so v_q(q) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NewtonPolygon {
    vertices: Vec<Vertex>,
}

impl NewtonPolygon {
    pub fn from_l_polynomial(l: &LPolynomial) -> Self {
        let a = i64::from(l.q_degree());
        let points = l.coeffs().iter().enumerate().filter_map(|(k, c)| {
            let v = c.trailing_zeros()?;
            Some(Vertex::new(k as u32, Rational::new(v as i64, a)))
        });
        NewtonPolygon::lower_hull(points)
    }

    /// Hull of arbitrary points with distinct x; at each x the lowest point counts.
    pub fn lower_hull(points: impl IntoIterator<Item = Vertex>) -> Self {
        let mut pts: Vec<Vertex> = points.into_iter().collect();
        pts.sort();
        pts.dedup_by_key(|p| p.x);
        let mut hull: Vec<Vertex> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Rational::from_integer(0)
            {
                hull.pop();
            }
            hull.push(p);
        }
        NewtonPolygon { vertices: hull }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// End of the first segment.
    pub fn first_vertex(&self) -> Result<Vertex, ZetaError> {
        self.vertices.get(1).copied().ok_or(ZetaError::DegeneratePolygon)
    }

    /// Slope of each segment, increasing.
    pub fn slopes(&self) -> Vec<Rational> {
        self.vertices.windows(2).map(|w| (w[1].y - w[0].y) / i64::from(w[1].x - w[0].x)).collect()
    }
}

/// z-component of (b - o) x (p - o); positive for a left turn.
fn cross(o: &Vertex, b: &Vertex, p: &Vertex) -> Rational {
    let (bx, by) = (i64::from(b.x) - i64::from(o.x), b.y - o.y);
    let (px, py) = (i64::from(p.x) - i64::from(o.x), p.y - o.y);
    by * (-px) + py * bx
}
