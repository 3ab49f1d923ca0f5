//! Maps recorded by their values on atoms.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::linalg::Matrix;
use crate::measure::{coincide, DiscreteMeasure, MERGE_TOL};

/// A map `T: ℝⁿ → ℝᵈ` known either through a linear part or extensionally,
/// by its values on a finite set of domain atoms.
///
/// Two maps that agree on `supp(μ)` are the same map as far as any μ-a.e.
/// statement is concerned, so the table form loses nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomMapFile", into = "AtomMapFile")]
pub struct AtomMap {
    domain_dim: usize,
    codomain_dim: usize,
    kind: MapKind,
}

#[derive(Debug, Clone, PartialEq)]
enum MapKind {
    Linear(Matrix),
    Table {
        domain: Vec<Vec<f64>>,
        images: Vec<Vec<f64>>,
    },
}

impl AtomMap {
    pub fn linear(m: Matrix) -> Self {
        AtomMap {
            domain_dim: m.dim(),
            codomain_dim: m.dim(),
            kind: MapKind::Linear(m),
        }
    }

    pub fn from_table(
        domain_dim: usize,
        codomain_dim: usize,
        domain: Vec<Vec<f64>>,
        images: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(FrameError::InvalidMap(format!(
                "{} domain atoms but {} images",
                domain.len(),
                images.len()
            )));
        }
        for d in &domain {
            if d.len() != domain_dim {
                return Err(FrameError::DimMismatch {
                    expected: domain_dim,
                    found: d.len(),
                });
            }
        }
        for v in &images {
            if v.len() != codomain_dim {
                return Err(FrameError::DimMismatch {
                    expected: codomain_dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(FrameError::InvalidMap("non-finite image value".into()));
            }
        }
        Ok(AtomMap {
            domain_dim,
            codomain_dim,
            kind: MapKind::Table { domain, images },
        })
    }

    /// Map on the support of `mu` whose values are `images`, aligned with
    /// `mu.support_indices()`.
    pub fn on_support(mu: &DiscreteMeasure, images: Vec<Vec<f64>>) -> Result<Self> {
        let domain = mu.support().map(|(a, _)| a.to_vec()).collect::<Vec<_>>();
        let codomain_dim = images.first().map_or(mu.dim(), |v| v.len());
        AtomMap::from_table(mu.dim(), codomain_dim, domain, images)
    }

    /// Map on all atoms of `mu`, aligned with `mu.atoms()`.
    pub fn on_atoms(mu: &DiscreteMeasure, images: Vec<Vec<f64>>) -> Result<Self> {
        let codomain_dim = images.first().map_or(mu.dim(), |v| v.len());
        AtomMap::from_table(mu.dim(), codomain_dim, mu.atoms().to_vec(), images)
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn linear_part(&self) -> Option<&Matrix> {
        match &self.kind {
            MapKind::Linear(m) => Some(m),
            MapKind::Table { .. } => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.domain_dim {
            return Err(FrameError::DimMismatch {
                expected: self.domain_dim,
                found: x.len(),
            });
        }
        match &self.kind {
            MapKind::Linear(m) => Ok(m.mul_vec(x)),
            MapKind::Table { domain, images } => domain
                .iter()
                .position(|d| coincide(d, x, MERGE_TOL))
                .map(|k| images[k].clone())
                .ok_or_else(|| FrameError::MapDomainMismatch { atom: x.to_vec() }),
        }
    }

    /// Values on the support atoms of `mu`, aligned with `mu.support_indices()`.
    pub fn images_on_support(&self, mu: &DiscreteMeasure) -> Result<Vec<Vec<f64>>> {
        if self.domain_dim != mu.dim() {
            return Err(FrameError::DimMismatch {
                expected: mu.dim(),
                found: self.domain_dim,
            });
        }
        mu.support().map(|(a, _)| self.eval(a)).collect()
    }

    /// Tabulated copy restricted to the support of `mu`.
    pub fn tabulate(&self, mu: &DiscreteMeasure) -> Result<AtomMap> {
        let images = self.images_on_support(mu)?;
        let domain = mu.support().map(|(a, _)| a.to_vec()).collect();
        AtomMap::from_table(self.domain_dim, self.codomain_dim, domain, images)
    }
}

/// On-disk form of an [`AtomMap`].
///
/// Either `linear` (a square matrix) or `images` must be present. Without
/// `domain`, images are aligned positionally with the atoms of the measure
/// the map is bound to (see [`AtomMapFile::bind`]).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomMapFile {
    pub domain_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<Vec<f64>>>,
}

impl AtomMapFile {
    /// Resolves the file against `mu`; positional tables use `mu.atoms()` as domain.
    pub fn bind(self, mu: &DiscreteMeasure) -> Result<AtomMap> {
        if self.linear.is_none() && self.domain.is_none() {
            let images = self
                .images
                .ok_or_else(|| FrameError::InvalidMap("map needs `linear` or `images`".into()))?;
            if images.len() != mu.len() {
                return Err(FrameError::InvalidMap(format!(
                    "{} positional images for a measure with {} atoms",
                    images.len(),
                    mu.len()
                )));
            }
            let codomain_dim = self.codomain_dim.unwrap_or(self.domain_dim);
            if self.domain_dim != mu.dim() {
                return Err(FrameError::DimMismatch {
                    expected: mu.dim(),
                    found: self.domain_dim,
                });
            }
            return AtomMap::from_table(self.domain_dim, codomain_dim, mu.atoms().to_vec(), images);
        }
        AtomMap::try_from(self)
    }
}

impl TryFrom<AtomMapFile> for AtomMap {
    type Error = FrameError;
    fn try_from(f: AtomMapFile) -> Result<Self> {
        let codomain_dim = f.codomain_dim.unwrap_or(f.domain_dim);
        match (f.linear, f.domain, f.images) {
            (Some(rows), None, None) => {
                let m = Matrix::from_rows(&rows)?;
                if m.dim() != f.domain_dim || codomain_dim != f.domain_dim {
                    return Err(FrameError::DimMismatch {
                        expected: f.domain_dim,
                        found: m.dim(),
                    });
                }
                Ok(AtomMap::linear(m))
            }
            (None, Some(domain), Some(images)) => {
                AtomMap::from_table(f.domain_dim, codomain_dim, domain, images)
            }
            _ => Err(FrameError::InvalidMap(
                "map needs either `linear`, or both `domain` and `images`".into(),
            )),
        }
    }
}

impl From<AtomMap> for AtomMapFile {
    fn from(m: AtomMap) -> Self {
        match m.kind {
            MapKind::Linear(mat) => AtomMapFile {
                domain_dim: m.domain_dim,
                codomain_dim: Some(m.codomain_dim),
                linear: Some(mat.rows()),
                domain: None,
                images: None,
            },
            MapKind::Table { domain, images } => AtomMapFile {
                domain_dim: m.domain_dim,
                codomain_dim: Some(m.codomain_dim),
                linear: None,
                domain: Some(domain),
                images: Some(images),
            },
        }
    }
}
