//! Exact p-Wasserstein distances between discrete measures.

use serde::Serialize;

use crate::coupling::Coupling;
use crate::error::{FrameError, Result};
use crate::linalg::{distance, norm, Matrix};
use crate::lp::{self, LpProblem, LpStatus};
use crate::map::AtomMap;
use crate::measure::DiscreteMeasure;

/// Atoms must have unit norm within this for sphere-supported operations.
pub const UNIT_TOL: f64 = 1e-9;

/// Plan entries at or below this are round-off and are set to zero.
const PLAN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Serialize)]
pub struct TransportPlan {
    pub coupling: Coupling,
    /// `W_pᵖ = Σ γᵢⱼ‖xᵢ − yⱼ‖ᵖ`.
    pub cost: f64,
    pub p: f64,
    /// `W_p = cost^{1/p}`.
    pub distance: f64,
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(FrameError::BadExponent { p });
    }
    Ok(())
}

/// Optimal transport plan for cost `‖x − y‖ᵖ`, solved exactly as a
/// transportation LP over the supports.
pub fn wasserstein(mu: &DiscreteMeasure, nu: &DiscreteMeasure, p: f64) -> Result<TransportPlan> {
    if mu.dim() != nu.dim() {
        return Err(FrameError::DimMismatch {
            expected: mu.dim(),
            found: nu.dim(),
        });
    }
    check_exponent(p)?;
    let xs: Vec<(&[f64], f64)> = mu.support().collect();
    let ys: Vec<(&[f64], f64)> = nu.support().collect();
    let (m, l) = (xs.len(), ys.len());

    let mut cost = Vec::with_capacity(m * l);
    for (x, _) in &xs {
        for (y, _) in &ys {
            cost.push(distance(x, y).powf(p));
        }
    }
    let mut rows = Vec::with_capacity(m + l);
    let mut rhs = Vec::with_capacity(m + l);
    for (i, (_, w)) in xs.iter().enumerate() {
        let mut r = vec![0.0; m * l];
        r[i * l..(i + 1) * l].fill(1.0);
        rows.push(r);
        rhs.push(*w);
    }
    for (j, (_, v)) in ys.iter().enumerate() {
        let mut r = vec![0.0; m * l];
        for i in 0..m {
            r[i * l + j] = 1.0;
        }
        rows.push(r);
        rhs.push(*v);
    }
    let solution = lp::solve(&LpProblem::new(cost.clone(), rows, rhs)?)?;
    if solution.status != LpStatus::Optimal {
        return Err(FrameError::NumericalBreakdown(format!(
            "transportation problem reported {:?}",
            solution.status
        )));
    }
    let plan: Vec<Vec<f64>> = solution
        .point
        .chunks(l)
        .map(|r| {
            r.iter()
                .map(|&g| if g > PLAN_FLOOR { g } else { 0.0 })
                .collect()
        })
        .collect();
    let total: f64 = plan.iter().flatten().zip(&cost).map(|(g, c)| g * c).sum();
    let coupling = Coupling::from_parts_unchecked(
        mu.dim(),
        xs.iter().map(|(x, _)| x.to_vec()).collect(),
        ys.iter().map(|(y, _)| y.to_vec()).collect(),
        plan,
    );
    Ok(TransportPlan {
        coupling,
        cost: total,
        p,
        distance: total.powf(1.0 / p),
    })
}

/// Orthogonal projection onto the hyperplane `x⊥` of a unit vector `x`.
pub fn hyperplane_projection(x: &[f64]) -> Result<AtomMap> {
    let r = norm(x);
    if (r - 1.0).abs() > UNIT_TOL {
        return Err(FrameError::NotUnitVector { norm: r });
    }
    let n = x.len();
    Ok(AtomMap::linear(Matrix::from_fn(n, |i, j| {
        (if i == j { 1.0 } else { 0.0 }) - x[i] * x[j]
    })))
}

/// Both sides of `W_pᵖ(μ, (π_{x⊥})_#μ) = ∫|⟨x,y⟩|ᵖ dμ(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperplaneDistance {
    /// Left side, from the transportation LP.
    pub wp_p: f64,
    /// Right side, by direct summation.
    pub moment: f64,
}

pub fn hyperplane_projection_distance(
    mu: &DiscreteMeasure,
    x: &[f64],
    p: f64,
) -> Result<HyperplaneDistance> {
    if x.len() != mu.dim() {
        return Err(FrameError::DimMismatch {
            expected: mu.dim(),
            found: x.len(),
        });
    }
    check_exponent(p)?;
    let projected = mu.pushforward(&hyperplane_projection(x)?)?;
    Ok(HyperplaneDistance {
        wp_p: wasserstein(mu, &projected, p)?.cost,
        moment: mu.directional_moment(x, p),
    })
}

/// `Σᵢ wᵢ·W_pᵖ(μ, (π_{xᵢ⊥})_#μ)` for μ supported on the unit sphere; this
/// equals the p-frame potential `Σᵢⱼ wᵢwⱼ|⟨xᵢ,xⱼ⟩|ᵖ`.
pub fn potential_as_transport(mu: &DiscreteMeasure, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let max_deviation = mu
        .support()
        .map(|(x, _)| (norm(x) - 1.0).abs())
        .fold(0.0, f64::max);
    if max_deviation > UNIT_TOL {
        return Err(FrameError::NotSphereSupported { max_deviation });
    }
    let mut total = 0.0;
    for (x, w) in mu.support() {
        total += w * hyperplane_projection_distance(mu, x, p)?.wp_p;
    }
    Ok(total)
}
