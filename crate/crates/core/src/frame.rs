//! Frame operators, frame bounds and constructions on discrete measures.

use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::linalg::{dot, Matrix, SymMatrix, DEFAULT_INVERSE_TOL, DEFAULT_PSD_TOL};
use crate::map::AtomMap;
use crate::measure::DiscreteMeasure;

/// Relative spread `(B−A)/B` at or below which a frame counts as tight.
pub const TIGHT_TOL: f64 = 1e-9;

/// `λ_min(S_μ)` must exceed this for μ to be a frame.
pub const FRAME_TOL: f64 = 1e-10;

/// Optimal frame bounds `A = λ_min(S_μ)`, `B = λ_max(S_μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub tight: bool,
    pub parseval: bool,
}

impl FrameBounds {
    fn from_extremes(lower: f64, upper: f64) -> Self {
        let lower = lower.max(0.0);
        let upper = upper.max(lower);
        let tight = (upper - lower) / upper.max(1e-300) <= TIGHT_TOL;
        FrameBounds {
            lower,
            upper,
            tight,
            parseval: tight && (lower - 1.0).abs() <= TIGHT_TOL,
        }
    }

    pub fn is_frame(&self) -> bool {
        self.lower > FRAME_TOL
    }
}

/// `S_μ = Σ wᵢ xᵢxᵢᵗ`.
pub fn frame_operator(mu: &DiscreteMeasure) -> SymMatrix {
    let n = mu.dim();
    let mut s = Matrix::zeros(n);
    for (x, w) in mu.support() {
        for a in 0..n {
            let wa = w * x[a];
            for b in a..n {
                s[(a, b)] += wa * x[b];
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            s[(a, b)] = s[(b, a)];
        }
    }
    SymMatrix::symmetrize(s)
}

pub fn frame_bounds(mu: &DiscreteMeasure) -> Result<FrameBounds> {
    let eig = frame_operator(mu).eigen()?;
    Ok(FrameBounds::from_extremes(eig.min(), eig.max()))
}

pub fn is_frame(mu: &DiscreteMeasure) -> Result<bool> {
    Ok(frame_bounds(mu)?.is_frame())
}

/// `S_μ⁻¹`, failing with `NotAFrame` when μ does not span.
pub fn inverse_frame_operator(mu: &DiscreteMeasure) -> Result<SymMatrix> {
    let s = frame_operator(mu);
    s.inverse(DEFAULT_INVERSE_TOL).map_err(|e| match e {
        FrameError::Singular { min_eigenvalue } => FrameError::NotAFrame {
            lower_bound: min_eigenvalue,
        },
        other => other,
    })
}

/// Canonical dual: the map `x ↦ S_μ⁻¹x` and its pushforward `(S_μ⁻¹)_#μ`.
///
/// The dual has frame bounds `1/B` and `1/A`.
pub fn canonical_dual(mu: &DiscreteMeasure) -> Result<(AtomMap, DiscreteMeasure)> {
    let inv = inverse_frame_operator(mu)?;
    let map = AtomMap::linear(inv.into_matrix());
    let measure = mu.pushforward(&map)?;
    Ok((map, measure))
}

/// Default tight reference measure with bound `2k`: uniform on the `2n`
/// vectors `±√(2kn)·eᵢ`.
pub fn default_tight_reference(dim: usize, k: f64) -> DiscreteMeasure {
    let r = (2.0 * k * dim as f64).sqrt();
    let mut atoms = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        for sign in [1.0, -1.0] {
            let mut a = vec![0.0; dim];
            a[i] = sign * r;
            atoms.push(a);
        }
    }
    DiscreteMeasure::uniform(dim, atoms).expect("reference measure is valid")
}

/// Result of completing a Bessel measure to a tight frame.
#[derive(Debug, Clone)]
pub struct TightCompletion {
    /// `½μ + ½ν_k`.
    pub measure: DiscreteMeasure,
    /// `ν_k = (B·Id − S_μ/(2k))^{1/2}_# η_k`.
    pub complement: DiscreteMeasure,
    /// Bessel bound `B` used in the construction.
    pub bessel_bound: f64,
    /// Tight bound of the result, `kB`.
    pub tight_bound: f64,
}

/// Completes a Bessel measure μ to the tight frame `½μ + ½ν_k` with bound `kB`.
///
/// `eta` must be tight with bound `2k`; `None` uses
/// [`default_tight_reference`]. `bessel_bound` defaults to `λ_max(S_μ)` and
/// may be overridden by any `B ≥ λ_max(S_μ)`, `B > 0`.
pub fn bessel_to_tight(
    mu: &DiscreteMeasure,
    k: f64,
    eta: Option<&DiscreteMeasure>,
    bessel_bound: Option<f64>,
) -> Result<TightCompletion> {
    if !(k >= 0.5) {
        return Err(FrameError::KTooSmall { k });
    }
    let n = mu.dim();
    let s = frame_operator(mu);
    let lambda_max = s.eigen()?.max();
    let b = bessel_bound.unwrap_or(lambda_max);
    if !(b > 0.0) || !b.is_finite() || b < lambda_max * (1.0 - 1e-12) {
        return Err(FrameError::InvalidBesselBound {
            bound: b,
            lambda_max,
        });
    }

    let default_eta;
    let eta = match eta {
        Some(e) => e,
        None => {
            default_eta = default_tight_reference(n, k);
            &default_eta
        }
    };
    if eta.dim() != n {
        return Err(FrameError::DimMismatch {
            expected: n,
            found: eta.dim(),
        });
    }
    let eb = frame_bounds(eta)?;
    let expected = 2.0 * k;
    if !eb.tight || (eb.lower - expected).abs() > TIGHT_TOL * expected.max(1.0) {
        return Err(FrameError::EtaNotTight {
            lower: eb.lower,
            upper: eb.upper,
            expected,
        });
    }

    let gap = SymMatrix::scaled_identity(n, b).combine(1.0, &s, -1.0 / (2.0 * k));
    let root = gap.psd_sqrt(DEFAULT_PSD_TOL * b.max(1.0))?;
    let complement = eta.pushforward(&AtomMap::linear(root.into_matrix()))?;
    let measure = mu.mixture(&complement, 0.5)?;
    Ok(TightCompletion {
        measure,
        complement,
        bessel_bound: b,
        tight_bound: k * b,
    })
}

/// Whether `(k·Id)_#μ` is a pushforward dual of μ, i.e. `k·S_μ = Id`
/// within 1e-9. Equivalent to μ being tight with bound `1/k`.
pub fn tight_via_scaled_dual(mu: &DiscreteMeasure, k: f64) -> Result<bool> {
    if !(k > 0.0) {
        return Err(FrameError::InvalidMap(format!(
            "scale k = {k} must be positive"
        )));
    }
    if !is_frame(mu)? {
        return Err(FrameError::NotAFrame {
            lower_bound: frame_bounds(mu)?.lower,
        });
    }
    let cross = frame_operator(mu).into_matrix().scale(k);
    Ok(cross.sub(&Matrix::identity(mu.dim())).max_abs() <= TIGHT_TOL)
}

/// `PFP(μ) = ΣᵢΣⱼ wᵢwⱼ⟨xᵢ,xⱼ⟩²`, bounded below by `M₂(μ)²/n`.
pub fn finite_frame_potential(mu: &DiscreteMeasure) -> f64 {
    let support: Vec<(&[f64], f64)> = mu.support().collect();
    let mut total = 0.0;
    for (x, w) in &support {
        for (y, v) in &support {
            let ip = dot(x, y);
            total += w * v * ip * ip;
        }
    }
    total
}

/// Lower bound `M₂(μ)²/n` of [`finite_frame_potential`].
pub fn frame_potential_lower_bound(mu: &DiscreteMeasure) -> f64 {
    mu.second_moment().powi(2) / mu.dim() as f64
}
