//! Transport couplings between two discrete measures.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::linalg::{dot, Matrix};
use crate::map::AtomMap;
use crate::measure::{DiscreteMeasure, SUPPORT_TOL};

/// Tolerance on total mass and marginal sums.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Negative plan entries above `-NEGATIVE_TOL` are clamped to zero.
const NEGATIVE_TOL: f64 = 1e-12;

/// A joint weight matrix `γᵢⱼ` over pairs `(xᵢ, yⱼ)`.
///
/// The marginals are the row and column sums; they are what `Γ(μ, ν)`
/// membership is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CouplingFile", into = "CouplingFile")]
pub struct Coupling {
    dim: usize,
    mu_atoms: Vec<Vec<f64>>,
    nu_atoms: Vec<Vec<f64>>,
    plan: Vec<Vec<f64>>,
}

/// `{"dim": n, "mu_atoms": [...], "nu_atoms": [...], "plan": [[...]]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingFile {
    pub dim: usize,
    pub mu_atoms: Vec<Vec<f64>>,
    pub nu_atoms: Vec<Vec<f64>>,
    pub plan: Vec<Vec<f64>>,
}

impl TryFrom<CouplingFile> for Coupling {
    type Error = FrameError;
    fn try_from(f: CouplingFile) -> Result<Self> {
        Coupling::new(f.dim, f.mu_atoms, f.nu_atoms, f.plan)
    }
}

impl From<Coupling> for CouplingFile {
    fn from(c: Coupling) -> Self {
        CouplingFile {
            dim: c.dim,
            mu_atoms: c.mu_atoms,
            nu_atoms: c.nu_atoms,
            plan: c.plan,
        }
    }
}

impl Coupling {
    pub fn new(
        dim: usize,
        mu_atoms: Vec<Vec<f64>>,
        nu_atoms: Vec<Vec<f64>>,
        mut plan: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if dim == 0 || mu_atoms.is_empty() || nu_atoms.is_empty() {
            return Err(FrameError::InvalidCoupling("empty coupling".into()));
        }
        for a in mu_atoms.iter().chain(&nu_atoms) {
            if a.len() != dim {
                return Err(FrameError::DimMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(FrameError::InvalidCoupling("non-finite atom".into()));
            }
        }
        if plan.len() != mu_atoms.len() || plan.iter().any(|r| r.len() != nu_atoms.len()) {
            return Err(FrameError::InvalidCoupling(format!(
                "plan must be {}x{}",
                mu_atoms.len(),
                nu_atoms.len()
            )));
        }
        for v in plan.iter_mut().flatten() {
            if !v.is_finite() || *v < -NEGATIVE_TOL {
                return Err(FrameError::InvalidCoupling(format!(
                    "invalid plan entry {v}"
                )));
            }
            *v = v.max(0.0);
        }
        let total: f64 = plan.iter().flatten().sum();
        if (total - 1.0).abs() > MARGINAL_TOL {
            return Err(FrameError::InvalidCoupling(format!(
                "total mass {total}, not 1"
            )));
        }
        Ok(Coupling {
            dim,
            mu_atoms,
            nu_atoms,
            plan,
        })
    }

    pub(crate) fn from_parts_unchecked(
        dim: usize,
        mu_atoms: Vec<Vec<f64>>,
        nu_atoms: Vec<Vec<f64>>,
        plan: Vec<Vec<f64>>,
    ) -> Self {
        Coupling {
            dim,
            mu_atoms,
            nu_atoms,
            plan,
        }
    }

    /// Graph coupling `(Id, T)_#μ` over the support of `mu`.
    pub fn graph(mu: &DiscreteMeasure, map: &AtomMap) -> Result<Self> {
        let images = map.images_on_support(mu)?;
        if map.codomain_dim() != mu.dim() {
            return Err(FrameError::DimMismatch {
                expected: mu.dim(),
                found: map.codomain_dim(),
            });
        }
        let support: Vec<(Vec<f64>, f64)> = mu.support().map(|(a, w)| (a.to_vec(), w)).collect();
        let m = support.len();
        let mut plan = vec![vec![0.0; m]; m];
        for (i, (_, w)) in support.iter().enumerate() {
            plan[i][i] = *w;
        }
        Ok(Coupling {
            dim: mu.dim(),
            mu_atoms: support.into_iter().map(|(a, _)| a).collect(),
            nu_atoms: images,
            plan,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mu_atoms(&self) -> &[Vec<f64>] {
        &self.mu_atoms
    }

    pub fn nu_atoms(&self) -> &[Vec<f64>] {
        &self.nu_atoms
    }

    pub fn plan(&self) -> &[Vec<f64>] {
        &self.plan
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.plan.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nu_atoms.len()];
        for row in &self.plan {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    pub fn total_mass(&self) -> f64 {
        self.plan.iter().flatten().sum()
    }

    /// First marginal `(π_x)_#γ`.
    pub fn first_marginal(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::new(self.dim, self.mu_atoms.clone(), self.row_sums())
    }

    /// Second marginal `(π_y)_#γ`.
    pub fn second_marginal(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::new(self.dim, self.nu_atoms.clone(), self.col_sums())
    }

    /// Pairs `(xᵢ, yⱼ, γᵢⱼ)` with positive mass.
    pub fn pairs(&self) -> impl Iterator<Item = (&[f64], &[f64], f64)> + '_ {
        self.plan.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, g)| **g > SUPPORT_TOL)
                .map(move |(j, g)| (self.mu_atoms[i].as_slice(), self.nu_atoms[j].as_slice(), *g))
        })
    }

    /// `∫ x yᵗ dγ`.
    pub fn cross_moment(&self) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for (i, row) in self.plan.iter().enumerate() {
            let x = &self.mu_atoms[i];
            for (j, g) in row.iter().enumerate() {
                if *g == 0.0 {
                    continue;
                }
                let y = &self.nu_atoms[j];
                for a in 0..n {
                    let gx = g * x[a];
                    for b in 0..n {
                        m[(a, b)] += gx * y[b];
                    }
                }
            }
        }
        m
    }

    /// `∫ f(x, y) dγ` over all plan entries.
    pub fn integrate(&self, f: impl Fn(&[f64], &[f64]) -> f64) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.plan.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if *g != 0.0 {
                    s += g * f(&self.mu_atoms[i], &self.nu_atoms[j]);
                }
            }
        }
        s
    }

    /// `∫⟨x,y⟩ dγ`.
    pub fn trace_integral(&self) -> f64 {
        self.integrate(dot)
    }

    /// Checks `γ ∈ Γ(mu, nu)`: the marginals of `γ` coincide with `mu` and
    /// `nu` up to atom merging, with weights within [`MARGINAL_TOL`].
    pub fn check_marginals(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<()> {
        if mu.dim() != self.dim || nu.dim() != self.dim {
            return Err(FrameError::DimMismatch {
                expected: self.dim,
                found: if mu.dim() != self.dim {
                    mu.dim()
                } else {
                    nu.dim()
                },
            });
        }
        let first = self
            .first_marginal()
            .map_err(|e| FrameError::InvalidCoupling(e.to_string()))?;
        if !first.approx_eq(mu, crate::measure::MERGE_TOL, MARGINAL_TOL) {
            return Err(FrameError::InvalidCoupling(
                "first marginal does not match".into(),
            ));
        }
        let second = self
            .second_marginal()
            .map_err(|e| FrameError::InvalidCoupling(e.to_string()))?;
        if !second.approx_eq(nu, crate::measure::MERGE_TOL, MARGINAL_TOL) {
            return Err(FrameError::InvalidCoupling(
                "second marginal does not match".into(),
            ));
        }
        Ok(())
    }

    /// `(U, U)_#γ`: both atom lists transformed by `u`, plan unchanged.
    pub fn transform(&self, u: &Matrix) -> Coupling {
        Coupling {
            dim: self.dim,
            mu_atoms: self.mu_atoms.iter().map(|a| u.mul_vec(a)).collect(),
            nu_atoms: self.nu_atoms.iter().map(|a| u.mul_vec(a)).collect(),
            plan: self.plan.clone(),
        }
    }
}
