//! Finitely supported probability measures on ℝⁿ.

use serde::{Deserialize, Serialize};

use crate::coupling::Coupling;
use crate::error::{FrameError, Result};
use crate::linalg::norm;
use crate::map::AtomMap;

/// Weight sums within this distance of 1 are renormalized; larger errors are rejected.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Atoms with weight at or below this value are not part of the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Coordinatewise tolerance used when merging coinciding atoms.
pub const MERGE_TOL: f64 = 1e-12;

/// A probability measure `Σ wᵢ δ_{xᵢ}` on ℝⁿ.
///
/// Construction never merges atoms; only [`DiscreteMeasure::pushforward`],
/// [`DiscreteMeasure::mixture`] and [`DiscreteMeasure::merged`] do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureFile", into = "MeasureFile")]
pub struct DiscreteMeasure {
    dim: usize,
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// On-disk form: `{"dim": 2, "atoms": [[1,0],[0,1]], "weights": [0.5,0.5]}`.
/// `weights` may be omitted for the uniform measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub dim: usize,
    pub atoms: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl TryFrom<MeasureFile> for DiscreteMeasure {
    type Error = FrameError;
    fn try_from(f: MeasureFile) -> Result<Self> {
        match f.weights {
            Some(w) => DiscreteMeasure::new(f.dim, f.atoms, w),
            None => DiscreteMeasure::uniform(f.dim, f.atoms),
        }
    }
}

impl From<DiscreteMeasure> for MeasureFile {
    fn from(m: DiscreteMeasure) -> Self {
        MeasureFile {
            dim: m.dim,
            atoms: m.atoms,
            weights: Some(m.weights),
        }
    }
}

impl DiscreteMeasure {
    pub fn new(dim: usize, atoms: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(FrameError::InvalidMeasure(
                "dimension must be positive".into(),
            ));
        }
        if atoms.is_empty() {
            return Err(FrameError::InvalidMeasure(
                "measure needs at least one atom".into(),
            ));
        }
        if atoms.len() != weights.len() {
            return Err(FrameError::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        for a in &atoms {
            if a.len() != dim {
                return Err(FrameError::DimMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(FrameError::InvalidMeasure(
                    "non-finite atom coordinate".into(),
                ));
            }
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(FrameError::InvalidMeasure(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(FrameError::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(DiscreteMeasure {
            dim,
            atoms,
            weights,
        })
    }

    pub fn uniform(dim: usize, atoms: Vec<Vec<f64>>) -> Result<Self> {
        let m = atoms.len();
        if m == 0 {
            return Err(FrameError::InvalidMeasure(
                "measure needs at least one atom".into(),
            ));
        }
        DiscreteMeasure::new(dim, atoms, vec![1.0 / m as f64; m])
    }

    pub fn dirac(point: Vec<f64>) -> Result<Self> {
        DiscreteMeasure::new(point.len(), vec![point], vec![1.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Vec<f64>] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Indices of atoms whose weight exceeds [`SUPPORT_TOL`].
    pub fn support_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.weights[i] > SUPPORT_TOL)
            .collect()
    }

    /// `(atom, weight)` pairs of the support.
    pub fn support(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.atoms
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > SUPPORT_TOL)
            .map(|(a, w)| (a.as_slice(), *w))
    }

    /// Number of distinct support points (coinciding atoms counted once).
    pub fn support_size(&self) -> usize {
        self.merged(MERGE_TOL).support().count()
    }

    /// The measure restricted to its support, renormalized.
    pub fn support_measure(&self) -> DiscreteMeasure {
        let (atoms, weights): (Vec<_>, Vec<_>) =
            self.support().map(|(a, w)| (a.to_vec(), w)).unzip();
        let total: f64 = weights.iter().sum();
        DiscreteMeasure {
            dim: self.dim,
            atoms,
            weights: weights.into_iter().map(|w| w / total).collect(),
        }
    }

    /// `M₂(μ) = Σ wᵢ‖xᵢ‖²`.
    pub fn second_moment(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| w * norm(a).powi(2))
            .sum()
    }

    /// `∫|⟨x,y⟩|ᵖ dμ(y)` for a fixed direction `x`.
    pub fn directional_moment(&self, x: &[f64], p: f64) -> f64 {
        self.support()
            .map(|(a, w)| w * crate::linalg::dot(x, a).abs().powf(p))
            .sum()
    }

    /// Mean `∫ y dμ(y)`.
    pub fn mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            for (o, v) in out.iter_mut().zip(a) {
                *o += w * v;
            }
        }
        out
    }

    /// Pushforward `T_#μ`; coinciding images are merged.
    pub fn pushforward(&self, map: &AtomMap) -> Result<DiscreteMeasure> {
        if map.domain_dim() != self.dim {
            return Err(FrameError::DimMismatch {
                expected: self.dim,
                found: map.domain_dim(),
            });
        }
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (a, w) in self.support() {
            atoms.push(map.eval(a)?);
            weights.push(w);
        }
        Ok(merge_atoms(map.codomain_dim(), atoms, weights, MERGE_TOL))
    }

    /// `t·μ + (1−t)·ν`, with coinciding atoms merged.
    pub fn mixture(&self, other: &DiscreteMeasure, t: f64) -> Result<DiscreteMeasure> {
        if other.dim != self.dim {
            return Err(FrameError::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(FrameError::InvalidMeasure(format!(
                "mixture parameter {t} outside [0, 1]"
            )));
        }
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (a, w) in self.atoms.iter().zip(&self.weights) {
            if t * w > 0.0 {
                atoms.push(a.clone());
                weights.push(t * w);
            }
        }
        for (a, w) in other.atoms.iter().zip(&other.weights) {
            if (1.0 - t) * w > 0.0 {
                atoms.push(a.clone());
                weights.push((1.0 - t) * w);
            }
        }
        Ok(merge_atoms(self.dim, atoms, weights, MERGE_TOL))
    }

    /// Independent coupling `μ ⊗ ν`.
    pub fn product(&self, other: &DiscreteMeasure) -> Coupling {
        let plan = self
            .weights
            .iter()
            .map(|wi| other.weights.iter().map(|vj| wi * vj).collect())
            .collect();
        Coupling::from_parts_unchecked(self.dim, self.atoms.clone(), other.atoms.clone(), plan)
    }

    /// Canonical form: coinciding atoms (coordinatewise within `tol`) merged,
    /// zero-weight atoms dropped.
    pub fn merged(&self, tol: f64) -> DiscreteMeasure {
        merge_atoms(self.dim, self.atoms.clone(), self.weights.clone(), tol)
    }

    /// Equality up to merging: both measures are canonicalized at `atom_tol`,
    /// then support atoms must pair up within `atom_tol` with weights within
    /// `weight_tol`.
    pub fn approx_eq(&self, other: &DiscreteMeasure, atom_tol: f64, weight_tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let a: Vec<_> = self
            .merged(atom_tol)
            .support()
            .map(|(x, w)| (x.to_vec(), w))
            .collect();
        let b: Vec<_> = other
            .merged(atom_tol)
            .support()
            .map(|(x, w)| (x.to_vec(), w))
            .collect();
        if a.len() != b.len() {
            return false;
        }
        let mut used = vec![false; b.len()];
        'outer: for (x, w) in &a {
            for (j, (y, v)) in b.iter().enumerate() {
                if !used[j] && coincide(x, y, atom_tol) && (w - v).abs() <= weight_tol {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

pub(crate) fn coincide(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn merge_atoms(dim: usize, atoms: Vec<Vec<f64>>, weights: Vec<f64>, tol: f64) -> DiscreteMeasure {
    let mut out_atoms: Vec<Vec<f64>> = Vec::with_capacity(atoms.len());
    let mut out_weights: Vec<f64> = Vec::with_capacity(atoms.len());
    for (a, w) in atoms.into_iter().zip(weights) {
        if w <= 0.0 {
            continue;
        }
        match out_atoms.iter().position(|b| coincide(&a, b, tol)) {
            Some(k) => out_weights[k] += w,
            None => {
                out_atoms.push(a);
                out_weights.push(w);
            }
        }
    }
    let total: f64 = out_weights.iter().sum();
    DiscreteMeasure {
        dim,
        atoms: out_atoms,
        weights: out_weights.into_iter().map(|w| w / total).collect(),
    }
}
