use serde::{Deserialize, Serialize};

use crate::lp::{membership_infinite, membership_monotone, membership_sym, LpError};

/// Which hull the vertex list generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullKind {
    /// `co(V ∪ −V)`, the unit ball of a norm on ℝᵈ.
    Symmetric,
    /// `(co(V) − ℝ₊ᵈ) ∩ ℝ₊ᵈ`, the unit ball of a monotone norm on the orthant.
    Monotone,
    /// `co(V) + ℝ₊ᵈ`, the unit level set of an antinorm on the orthant.
    Infinite,
}

impl HullKind {
    pub fn requires_nonnegative(self) -> bool {
        !matches!(self, HullKind::Symmetric)
    }

    /// Gauge value of `z` relative to the hull of `vertices`.
    pub fn membership(self, z: &[f64], vertices: &[Vec<f64>]) -> Result<f64, LpError> {
        match self {
            HullKind::Symmetric => membership_sym(z, vertices),
            HullKind::Monotone => membership_monotone(z, vertices),
            HullKind::Infinite => membership_infinite(z, vertices),
        }
    }

    /// How far `z` lies outside the hull, given its gauge value `f`:
    /// `f − 1` for finite hulls and `1 − f` for the infinite hull.
    pub fn excess(self, f: f64) -> f64 {
        match self {
            HullKind::Infinite => 1.0 - f,
            _ => f - 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HullKind::Symmetric => "symmetric",
            HullKind::Monotone => "monotone",
            HullKind::Infinite => "infinite",
        }
    }
}

impl std::fmt::Display for HullKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A polytope given by its vertex description.
///
/// Symmetric polytopes store one representative per `±v` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub hull: HullKind,
    pub vertices: Vec<Vec<f64>>,
    /// Sweep in which each vertex was added (0 for the initial set).
    pub generation: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeFile {
    hull: HullKind,
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum PolytopeFormatError {
    #[error("invalid polytope JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("vertex {index} has length {found}, expected dim {dim}")]
    VertexLength {
        index: usize,
        found: usize,
        dim: usize,
    },
    #[error("vertex {index} has a negative coordinate but the hull is {hull}")]
    Negative { index: usize, hull: HullKind },
}

impl Polytope {
    pub fn new(hull: HullKind, vertices: Vec<Vec<f64>>) -> Self {
        let generation = vec![0; vertices.len()];
        Self {
            hull,
            vertices,
            generation,
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Gauge value of `z` (see [`HullKind::membership`]).
    pub fn membership(&self, z: &[f64]) -> Result<f64, LpError> {
        self.hull.membership(z, &self.vertices)
    }

    /// Drops vertices lying inside the hull of the remaining ones by more
    /// than `tol` in gauge value. The hull itself is unchanged.
    pub fn prune_redundant(&mut self, tol: f64) -> Result<usize, LpError> {
        let mut removed = 0;
        let mut i = 0;
        while i < self.vertices.len() && self.vertices.len() > 1 {
            let others: Vec<Vec<f64>> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let f = self.hull.membership(&self.vertices[i], &others)?;
            if self.hull.excess(f) < -tol {
                self.vertices.remove(i);
                self.generation.remove(i);
                removed += 1;
            } else {
                i += 1;
            }
        }
        Ok(removed)
    }

    pub fn to_json(&self) -> String {
        let file = PolytopeFile {
            hull: self.hull,
            dim: self.dim(),
            vertices: self.vertices.clone(),
        };
        serde_json::to_string_pretty(&file).expect("polytope serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, PolytopeFormatError> {
        let file: PolytopeFile = serde_json::from_str(s)?;
        for (index, v) in file.vertices.iter().enumerate() {
            if v.len() != file.dim {
                return Err(PolytopeFormatError::VertexLength {
                    index,
                    found: v.len(),
                    dim: file.dim,
                });
            }
            if file.hull.requires_nonnegative() && v.iter().any(|&x| x < 0.0) {
                return Err(PolytopeFormatError::Negative {
                    index,
                    hull: file.hull,
                });
            }
        }
        Ok(Self::new(file.hull, file.vertices))
    }

    /// Boundary polyline of a planar polytope, ordered by angle.
    ///
    /// Finite hulls return the closed boundary of the convex hull (with `−V`
    /// for the symmetric kind, and the projections onto the axes plus the
    /// origin for the monotone kind). The infinite hull returns the lower-left
    /// boundary from the ray along the second axis to the ray along the first.
    pub fn boundary_2d(&self) -> Option<Vec<[f64; 2]>> {
        if self.dim() != 2 {
            return None;
        }
        let mut pts: Vec<[f64; 2]> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
        match self.hull {
            HullKind::Symmetric => {
                let neg: Vec<[f64; 2]> = pts.iter().map(|p| [-p[0], -p[1]]).collect();
                pts.extend(neg);
                Some(convex_hull(pts))
            }
            HullKind::Monotone => {
                let extra: Vec<[f64; 2]> = pts
                    .iter()
                    .flat_map(|p| [[p[0], 0.0], [0.0, p[1]]])
                    .collect();
                pts.extend(extra);
                pts.push([0.0, 0.0]);
                Some(convex_hull(pts))
            }
            HullKind::Infinite => {
                // Lower-left chain of the hull of V plus far points on the rays.
                let big = pts.iter().map(|p| p[0].max(p[1])).fold(1.0, f64::max) * 4.0;
                let xmin = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let ymin = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
                let mut all = pts.clone();
                all.push([xmin, big]);
                all.push([big, ymin]);
                all.push([big, big]);
                let hull = convex_hull(all);
                // Keep the part that is not on the far sides.
                let chain: Vec<[f64; 2]> = hull
                    .into_iter()
                    .filter(|p| !(p[0] == big && p[1] == big))
                    .collect();
                Some(chain)
            }
        }
    }
}

/// Andrew's monotone chain; returns the hull counter-clockwise.
fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let p = Polytope::new(
            HullKind::Monotone,
            vec![vec![0.25, 1.0, 1e-17], vec![3.0, 0.1, 0.7]],
        );
        let back = Polytope::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_rejects_negative_for_cone_hulls() {
        let s = r#"{"hull":"infinite","dim":2,"vertices":[[1.0,-0.5]]}"#;
        assert!(matches!(
            Polytope::from_json(s),
            Err(PolytopeFormatError::Negative { index: 0, .. })
        ));
        let s = r#"{"hull":"symmetric","dim":2,"vertices":[[1.0]]}"#;
        assert!(matches!(
            Polytope::from_json(s),
            Err(PolytopeFormatError::VertexLength { .. })
        ));
    }

    #[test]
    fn prune_keeps_extreme_points() {
        let mut p = Polytope::new(
            HullKind::Symmetric,
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.3, 0.3], vec![1.0, 1.0]],
        );
        let removed = p.prune_redundant(1e-9).unwrap();
        assert_eq!(removed, 1);
        assert!(!p.vertices.contains(&vec![0.3, 0.3]));
    }

    #[test]
    fn boundary_of_symmetric_square() {
        let p = Polytope::new(HullKind::Symmetric, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let b = p.boundary_2d().unwrap();
        assert_eq!(b.len(), 4);
    }
}
