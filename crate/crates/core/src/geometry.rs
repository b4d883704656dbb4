//! Planar convex hulls.

use serde::{Deserialize, Serialize};

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex polygon with vertices in counter-clockwise order and no
/// collinear vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexHull {
    pub vertices: Vec<[f64; 2]>,
}

impl ConvexHull {
    /// Andrew's monotone chain.
    pub fn of(points: &[[f64; 2]]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() < 3 {
            return Self { vertices: pts };
        }
        let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
                Box::new(pts.iter())
            } else {
                Box::new(pts.iter().rev())
            };
            for &p in iter {
                while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        Self { vertices: hull }
    }

    pub fn area(&self) -> f64 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0.0;
        }
        let twice: f64 = (0..v.len())
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum();
        0.5 * twice.abs()
    }

    /// Closed containment test; degenerate hulls contain only their segment.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => v[0] == p,
            2 => {
                cross(v[0], v[1], p) == 0.0
                    && (p[0] - v[0][0]) * (p[0] - v[1][0]) <= 0.0
                    && (p[1] - v[0][1]) * (p[1] - v[1][1]) <= 0.0
            }
            m => (0..m).all(|i| cross(v[i], v[(i + 1) % m], p) >= 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = [
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 2.0],
            [0.0, 2.0],
            [1.0, 1.0],
            [1.0, 0.0],
            [2.0, 2.0],
        ];
        let h = ConvexHull::of(&pts);
        assert_eq!(h.vertices, vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]);
        assert_eq!(h.area(), 4.0);
        assert!(h.contains([1.0, 1.0]) && h.contains([2.0, 1.0]));
        assert!(!h.contains([2.5, 1.0]));
    }

    #[test]
    fn degenerate_hulls() {
        let seg = ConvexHull::of(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]);
        assert_eq!(seg.vertices.len(), 2);
        assert_eq!(seg.area(), 0.0);
        assert!(seg.contains([1.0, 1.0]) && !seg.contains([1.0, 0.0]));
        assert!(ConvexHull::of(&[[3.0, 3.0]]).contains([3.0, 3.0]));
        assert!(!ConvexHull::of(&[]).contains([0.0, 0.0]));
    }

    #[test]
    fn hull_contains_its_points() {
        use rand::Rng;
        let mut rng = crate::rng::stream_rng(1, 0);
        let pts: Vec<[f64; 2]> = (0..300).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        let h = ConvexHull::of(&pts);
        assert!(pts.iter().all(|&p| h.contains(p)));
        assert!(h.area() > 3.5 && h.area() <= 4.0);
    }
}
