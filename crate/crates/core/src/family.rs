//! Finite families of generator matrices and their JSON file format.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{is_metzler, mat_exp, LinalgError, Matrix};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family must be nonempty")]
    Empty,
    #[error("matrix {index}: {source}")]
    Matrix {
        index: usize,
        #[source]
        source: LinalgError,
    },
    #[error("matrix {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{found} labels given for {expected} matrices")]
    Labels { expected: usize, found: usize },
    #[error("invalid family JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// An ordered list of `d×d` generators with display labels.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    matrices: Vec<Matrix>,
    labels: Vec<String>,
    metzler: bool,
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    dim: usize,
    matrices: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl MatrixFamily {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self, FamilyError> {
        let labels = (1..=matrices.len()).map(|i| format!("A{i}")).collect();
        Self::with_labels(matrices, labels)
    }

    pub fn with_labels(matrices: Vec<Matrix>, labels: Vec<String>) -> Result<Self, FamilyError> {
        let first = matrices.first().ok_or(FamilyError::Empty)?;
        let d = first.dim();
        for (index, m) in matrices.iter().enumerate() {
            if m.dim() != d {
                return Err(FamilyError::Dimension {
                    index,
                    expected: d,
                    found: m.dim(),
                });
            }
        }
        if labels.len() != matrices.len() {
            return Err(FamilyError::Labels {
                expected: matrices.len(),
                found: labels.len(),
            });
        }
        let metzler = matrices.iter().all(is_metzler);
        Ok(Self {
            matrices,
            labels,
            metzler,
        })
    }

    /// Builds a family from nested row lists, reporting the offending matrix.
    pub fn from_rows(rows: &[Vec<Vec<f64>>]) -> Result<Self, FamilyError> {
        let matrices = rows
            .iter()
            .enumerate()
            .map(|(index, r)| Matrix::from_rows(r).map_err(|source| FamilyError::Matrix { index, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(matrices)
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    /// All generators have nonnegative off-diagonal entries.
    pub fn is_metzler(&self) -> bool {
        self.metzler
    }

    /// `{A − s·I}`.
    pub fn shifted(&self, s: f64) -> Self {
        Self {
            matrices: self.matrices.iter().map(|a| a.shift(-s)).collect(),
            labels: self.labels.clone(),
            metzler: self.metzler,
        }
    }

    /// `{e^{τA}}`.
    pub fn exponentials(&self, tau: f64) -> Result<Vec<Matrix>, LinalgError> {
        self.matrices.iter().map(|a| mat_exp(a, tau)).collect()
    }

    pub fn from_json(s: &str) -> Result<Self, FamilyError> {
        let file: FamilyFile = serde_json::from_str(s)?;
        for (index, m) in file.matrices.iter().enumerate() {
            if m.len() != file.dim {
                return Err(FamilyError::Dimension {
                    index,
                    expected: file.dim,
                    found: m.len(),
                });
            }
        }
        let fam = Self::from_rows(&file.matrices)?;
        match file.labels {
            Some(labels) => Self::with_labels(fam.matrices, labels),
            None => Ok(fam),
        }
    }

    pub fn to_json(&self) -> String {
        let file = FamilyFile {
            dim: self.dim(),
            matrices: self.matrices.iter().map(Matrix::to_rows).collect(),
            labels: Some(self.labels.clone()),
        };
        serde_json::to_string_pretty(&file).expect("family serializes")
    }
}

pub fn load_family(path: impl AsRef<Path>) -> Result<MatrixFamily, FamilyError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FamilyError::Io {
        path: path.display().to_string(),
        source,
    })?;
    MatrixFamily::from_json(&text)
}

/// Entry law for [`random_metzler`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryLaw {
    /// Entries drawn from {−1, 0, 1}.
    Sign,
    /// Entries drawn uniformly from [−1, 1].
    Uniform,
}

/// `count` random Metzler matrices of size `dim`. Diagonal entries follow
/// `law`; off-diagonal entries are the absolute values of draws from it.
/// The same seed always gives the same family.
pub fn random_metzler(dim: usize, count: usize, law: EntryLaw, seed: u64) -> Result<MatrixFamily, FamilyError> {
    if dim == 0 || count == 0 {
        return Err(FamilyError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| match law {
        EntryLaw::Sign => rng.gen_range(-1i32..=1) as f64,
        EntryLaw::Uniform => rng.gen_range(-1.0..=1.0),
    };
    let rows: Vec<Vec<Vec<f64>>> = (0..count)
        .map(|_| {
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let x = draw(&mut rng);
                            if i == j { x } else { x.abs() }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    MatrixFamily::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_metzler_is_seeded() {
        let a = random_metzler(5, 3, EntryLaw::Sign, 7).unwrap();
        let b = random_metzler(5, 3, EntryLaw::Sign, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_metzler());
        assert!(a.matrices()[0].as_slice().iter().all(|x| [-1.0, 0.0, 1.0].contains(x)));
        let c = random_metzler(5, 3, EntryLaw::Uniform, 8).unwrap();
        assert!(c.is_metzler());
        assert_ne!(a, c);
    }

    #[test]
    fn round_trip_is_exact() {
        let fam = MatrixFamily::from_rows(&[
            vec![vec![0.1, 1.0 / 3.0], vec![-2.5e-17, 7.0]],
            vec![vec![std::f64::consts::PI, 0.0], vec![1.0, -1.0]],
        ])
        .unwrap();
        let back = MatrixFamily::from_json(&fam.to_json()).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            MatrixFamily::from_json(r#"{"dim":2,"matrices":[]}"#),
            Err(FamilyError::Empty)
        ));
        let e = MatrixFamily::from_json(r#"{"dim":2,"matrices":[[[1,2],[3,4]],[[1,2],[3]]]}"#)
            .unwrap_err();
        assert!(matches!(e, FamilyError::Matrix { index: 1, .. }), "{e}");
        let e = MatrixFamily::from_json(r#"{"dim":3,"matrices":[[[1,2],[3,4]]]}"#).unwrap_err();
        assert!(matches!(e, FamilyError::Dimension { index: 0, .. }));
        assert_eq!(FamilyError::Empty.to_string(), "family must be nonempty");
    }

    #[test]
    fn metzler_flag() {
        let fam = MatrixFamily::from_rows(&[
            vec![vec![-2.0, 0.0, 0.0], vec![10.0, -2.0, 0.0], vec![0.0, 0.0, -11.0]],
            vec![vec![-11.0, 0.0, 10.0], vec![0.0, -11.0, 0.0], vec![0.0, 10.0, -2.0]],
        ])
        .unwrap();
        assert!(fam.is_metzler());
        let fam = MatrixFamily::from_rows(&[vec![vec![0.0, 1.0], vec![-1.0, 0.0]]]).unwrap();
        assert!(!fam.is_metzler());
    }
}
