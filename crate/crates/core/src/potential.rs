//! Frame and dual frame potentials with their sharp lower bounds.
//!
//! For a frame μ with bounds `A ≤ B` and a dual ν,
//!
//! ```text
//! PDFP_μ(ν) = ∫∫ |⟨x,y⟩|² dμ(x) dν(y) ≥ n·A/B
//! ```
//!
//! with equality exactly when μ is tight and `ν = (S_μ⁻¹)_#μ`. Pushforward
//! duals `T_#μ` satisfy the sharper bound `n`, attained only by `T = S_μ⁻¹`.

use serde::Serialize;

use crate::coupling::Coupling;
use crate::duality::{check_dual, require_pushforward_dual, DUAL_TOL};
use crate::error::{FrameError, Result};
use crate::frame::{canonical_dual, frame_bounds, FrameBounds};
use crate::linalg::{distance, dot, Matrix};
use crate::map::AtomMap;
use crate::measure::DiscreteMeasure;

/// Atom and weight tolerance when comparing a dual with the canonical one.
pub const CANONICAL_TOL: f64 = 1e-7;

/// Relative gap below which a bound counts as attained.
pub const EQUALITY_TOL: f64 = 1e-8;

/// Tolerance for `‖UᵗU − I‖_max`.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialReport {
    pub value: f64,
    pub lower_bound: f64,
    /// `value − lower_bound`.
    pub gap: f64,
    /// Whether the pair is in the bound's equality case.
    pub equality_case: bool,
    /// Number of distinct support atoms of μ.
    pub support_size: usize,
    pub dim: usize,
}

impl PotentialReport {
    fn new(mu: &DiscreteMeasure, value: f64, lower_bound: f64, equality_case: bool) -> Self {
        PotentialReport {
            value,
            lower_bound,
            gap: value - lower_bound,
            equality_case,
            support_size: mu.support_size(),
            dim: mu.dim(),
        }
    }

    /// `gap ≤ 1e-8·max(1, lower_bound)`.
    pub fn gap_attained(&self) -> bool {
        self.gap <= EQUALITY_TOL * self.lower_bound.max(1.0)
    }
}

/// The second measure of a dual frame potential: either an arbitrary
/// measure ν, or a map `T` standing for `T_#μ`.
#[derive(Debug, Clone, Copy)]
pub enum DualTarget<'a> {
    Measure(&'a DiscreteMeasure),
    Pushforward(&'a AtomMap),
}

/// `|t|^q`, computed as `exp(q·ln|t|)` so that non-integer exponents behave
/// uniformly; `|t| ≤ 1e-300` maps to 0.
pub fn abs_pow(t: f64, q: f64) -> f64 {
    let a = t.abs();
    if a <= 1e-300 {
        0.0
    } else {
        (q * a.ln()).exp()
    }
}

fn require_frame(mu: &DiscreteMeasure) -> Result<FrameBounds> {
    let bounds = frame_bounds(mu)?;
    if !bounds.is_frame() {
        return Err(FrameError::NotAFrame {
            lower_bound: bounds.lower,
        });
    }
    Ok(bounds)
}

fn check_dims(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<()> {
    if mu.dim() != nu.dim() {
        return Err(FrameError::DimMismatch {
            expected: mu.dim(),
            found: nu.dim(),
        });
    }
    Ok(())
}

fn double_sum(mu: &DiscreteMeasure, nu: &DiscreteMeasure, q: f64) -> f64 {
    let ys: Vec<(&[f64], f64)> = nu.support().collect();
    let mut total = 0.0;
    for (x, w) in mu.support() {
        for (y, v) in &ys {
            let ip = dot(x, y);
            total += w * v * if q == 2.0 { ip * ip } else { abs_pow(ip, q) };
        }
    }
    total
}

fn is_canonical(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<bool> {
    let (_, canonical) = canonical_dual(mu)?;
    Ok(nu.approx_eq(&canonical, CANONICAL_TOL, CANONICAL_TOL))
}

/// Largest `‖T(x) − S_μ⁻¹x‖` over the support of μ.
pub fn distance_to_canonical(mu: &DiscreteMeasure, map: &AtomMap) -> Result<f64> {
    let (canonical, _) = canonical_dual(mu)?;
    let images = map.images_on_support(mu)?;
    let mut worst: f64 = 0.0;
    for ((x, _), tx) in mu.support().zip(&images) {
        worst = worst.max(distance(tx, &canonical.eval(x)?));
    }
    Ok(worst)
}

/// `PDFP_μ(ν)` against the product `μ⊗ν`, with lower bound `n·A/B`.
///
/// The bound only holds for duals; verify ν first with
/// [`find_dual_coupling`](crate::duality::find_dual_coupling). The equality
/// case is decided by the characterization (μ tight, ν canonical), not by
/// the gap.
pub fn pdfp(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<PotentialReport> {
    check_dims(mu, nu)?;
    let bounds = require_frame(mu)?;
    let n = mu.dim() as f64;
    let value = double_sum(mu, nu, 2.0);
    let equality = bounds.tight && is_canonical(mu, nu)?;
    Ok(PotentialReport::new(
        mu,
        value,
        n * bounds.lower / bounds.upper,
        equality,
    ))
}

/// `PDFP_μ(T_#μ) = ∫∫|⟨x,T(y)⟩|² dμ(x)dμ(y)` with lower bound `n`.
///
/// Fails with `NotADual` unless the graph coupling of `T` certifies duality.
pub fn pdfp_pushforward(mu: &DiscreteMeasure, map: &AtomMap) -> Result<PotentialReport> {
    require_frame(mu)?;
    require_pushforward_dual(mu, map)?;
    let nu = mu.pushforward(map)?;
    let value = double_sum(mu, &nu, 2.0);
    let equality = distance_to_canonical(mu, map)? <= CANONICAL_TOL;
    Ok(PotentialReport::new(mu, value, mu.dim() as f64, equality))
}

/// Dispatches to [`pdfp`] or [`pdfp_pushforward`].
pub fn pdfp_target(mu: &DiscreteMeasure, target: DualTarget<'_>) -> Result<PotentialReport> {
    match target {
        DualTarget::Measure(nu) => pdfp(mu, nu),
        DualTarget::Pushforward(map) => pdfp_pushforward(mu, map),
    }
}

/// The 2p-dual frame potential `∫∫|⟨x,y⟩|^{2p}` for `p > 1`.
///
/// The lower bound is `nᵖ` for pushforward duals and `(n·A/B)ᵖ` otherwise.
/// It is never attained when `n ≥ 2` or μ has three or more support atoms;
/// the remaining one-dimensional cases (`δ_z`, `wδ_z + (1−w)δ_{−z}`) attain
/// it with the canonical dual.
pub fn pdfp_2p(mu: &DiscreteMeasure, target: DualTarget<'_>, p: f64) -> Result<PotentialReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(FrameError::BadExponent { p });
    }
    let bounds = require_frame(mu)?;
    let n = mu.dim() as f64;
    let (nu, lower, canonical) = match target {
        DualTarget::Measure(nu) => {
            check_dims(mu, nu)?;
            let canonical = bounds.tight && is_canonical(mu, nu)?;
            (
                nu.clone(),
                (n * bounds.lower / bounds.upper).powf(p),
                canonical,
            )
        }
        DualTarget::Pushforward(map) => {
            require_pushforward_dual(mu, map)?;
            let canonical = distance_to_canonical(mu, map)? <= CANONICAL_TOL;
            (mu.pushforward(map)?, n.powf(p), canonical)
        }
    };
    let value = double_sum(mu, &nu, 2.0 * p);
    let small = mu.dim() == 1 && mu.support_size() <= 2;
    let mut report = PotentialReport::new(mu, value, lower, false);
    report.equality_case = small && canonical && report.gap_attained();
    Ok(report)
}

/// `μ⊗ν-esssup |⟨x,y⟩|^{2p}` for `p ≥ 1`.
pub fn esssup_potential(mu: &DiscreteMeasure, target: DualTarget<'_>, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(FrameError::BadExponent { p });
    }
    let nu = match target {
        DualTarget::Measure(nu) => {
            check_dims(mu, nu)?;
            nu.clone()
        }
        DualTarget::Pushforward(map) => mu.pushforward(map)?,
    };
    let ys: Vec<&[f64]> = nu.support().map(|(y, _)| y).collect();
    Ok(mu
        .support()
        .flat_map(|(x, _)| ys.iter().map(move |y| abs_pow(dot(x, y), 2.0 * p)))
        .fold(0.0, f64::max))
}

/// `Σᵢⱼ wᵢwⱼ|⟨xᵢ,xⱼ⟩|ᵖ`; `p = 2` is the frame potential.
pub fn p_frame_potential(mu: &DiscreteMeasure, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(FrameError::BadExponent { p });
    }
    Ok(double_sum(mu, mu, p))
}

/// Outcome of [`unitary_invariance_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub before: f64,
    pub after: f64,
    /// Residual of the rotated coupling `(U,U)_#γ`.
    pub rotated_residual: f64,
    pub holds: bool,
}

/// Compares `PDFP_μ(ν)` with `PDFP_{U_#μ}(U_#ν)` and checks that `(U,U)_#γ`
/// still certifies duality.
pub fn unitary_invariance_check(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    gamma: &Coupling,
    u: &Matrix,
) -> Result<InvarianceCheck> {
    check_dims(mu, nu)?;
    if u.dim() != mu.dim() {
        return Err(FrameError::DimMismatch {
            expected: mu.dim(),
            found: u.dim(),
        });
    }
    let defect = u.orthogonality_defect();
    if defect > ORTHOGONALITY_TOL {
        return Err(FrameError::NotOrthogonal { defect });
    }
    gamma.check_marginals(mu, nu)?;
    let rotate = AtomMap::linear(u.clone());
    let before = double_sum(mu, nu, 2.0);
    let after = double_sum(&mu.pushforward(&rotate)?, &nu.pushforward(&rotate)?, 2.0);
    let rotated_residual = check_dual(&gamma.transform(u)).residual;
    Ok(InvarianceCheck {
        before,
        after,
        rotated_residual,
        holds: (before - after).abs() <= EQUALITY_TOL && rotated_residual <= DUAL_TOL,
    })
}
