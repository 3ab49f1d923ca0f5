//! Probabilistic dual frames certified by transport couplings.
//!
//! ν is a dual of μ when some `γ ∈ Γ(μ, ν)` satisfies `∫ x yᵗ dγ = Id`.
//! Duals of pushforward type `T_#μ` use the graph coupling `(Id, T)_#μ` and
//! are exactly the maps produced by [`psi_h_dual`]. Other duals can only be
//! found by solving the coupling feasibility problem ([`find_dual_coupling`]).

use serde::Serialize;

use crate::coupling::Coupling;
use crate::error::{FrameError, Result};
use crate::frame::{frame_operator, inverse_frame_operator};
use crate::linalg::{distance, dot, norm, Matrix, DEFAULT_INVERSE_TOL};
use crate::lp::{self, LpOptions, LpProblem, LpStatus};
use crate::map::AtomMap;
use crate::measure::DiscreteMeasure;

/// A certificate is valid when `‖∫xyᵗdγ − Id‖_max` is at most this.
pub const DUAL_TOL: f64 = 1e-7;

/// Tolerance for the trace identity `∫⟨x,y⟩dγ = n`.
pub const TRACE_TOL: f64 = 1e-6;

/// Tolerance for `Σ wᵢωᵢxᵢ = f` in [`pythagorean_decomposition`].
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct DualCertificate {
    pub coupling: Coupling,
    /// `‖∫xyᵗdγ − Id‖_max`.
    pub residual: f64,
    /// `∫⟨x,y⟩dγ`.
    pub trace_value: f64,
    /// `‖M − Mᵗ‖_max` for `M = ∫xyᵗdγ` (diagnostic only).
    pub asymmetry: f64,
}

impl DualCertificate {
    pub fn is_valid(&self) -> bool {
        self.residual <= DUAL_TOL
    }
}

/// Evaluates `∫ x yᵗ dγ` against the identity.
pub fn check_dual(gamma: &Coupling) -> DualCertificate {
    let m = gamma.cross_moment();
    let n = gamma.dim();
    DualCertificate {
        residual: m.sub(&Matrix::identity(n)).max_abs(),
        trace_value: m.trace(),
        asymmetry: m.asymmetry(),
        coupling: gamma.clone(),
    }
}

/// Graph coupling of `map` on μ, checked for duality.
pub fn pushforward_certificate(mu: &DiscreteMeasure, map: &AtomMap) -> Result<DualCertificate> {
    Ok(check_dual(&Coupling::graph(mu, map)?))
}

/// Like [`pushforward_certificate`] but fails with `NotADual` for invalid certificates.
pub fn require_pushforward_dual(mu: &DiscreteMeasure, map: &AtomMap) -> Result<DualCertificate> {
    let cert = pushforward_certificate(mu, map)?;
    if !cert.is_valid() {
        return Err(FrameError::NotADual {
            residual: cert.residual,
        });
    }
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum DualSearch {
    Feasible(DualCertificate),
    Infeasible { phase_one_objective: f64 },
}

impl DualSearch {
    pub fn certificate(&self) -> Option<&DualCertificate> {
        match self {
            DualSearch::Feasible(c) => Some(c),
            DualSearch::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, DualSearch::Feasible(_))
    }
}

/// Searches for `γ ∈ Γ(μ, ν)` with `∫xyᵗdγ = Id`.
///
/// The unknowns are the plan entries over the supports of μ and ν; the
/// constraints are the row sums, the column sums and the n² entries of the
/// cross moment. Phase 1 of the simplex decides feasibility; the returned
/// plan is a vertex of the feasible polytope, with no preference among
/// vertices.
pub fn find_dual_coupling(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<DualSearch> {
    if mu.dim() != nu.dim() {
        return Err(FrameError::DimMismatch {
            expected: mu.dim(),
            found: nu.dim(),
        });
    }
    let n = mu.dim();
    let xs: Vec<(&[f64], f64)> = mu.support().collect();
    let ys: Vec<(&[f64], f64)> = nu.support().collect();
    let (m, l) = (xs.len(), ys.len());
    let vars = m * l;

    let mut rows = Vec::with_capacity(m + l + n * n);
    let mut rhs = Vec::with_capacity(m + l + n * n);
    for (i, (_, w)) in xs.iter().enumerate() {
        let mut r = vec![0.0; vars];
        r[i * l..(i + 1) * l].fill(1.0);
        rows.push(r);
        rhs.push(*w);
    }
    for (j, (_, v)) in ys.iter().enumerate() {
        let mut r = vec![0.0; vars];
        for i in 0..m {
            r[i * l + j] = 1.0;
        }
        rows.push(r);
        rhs.push(*v);
    }
    for a in 0..n {
        for b in 0..n {
            let mut r = vec![0.0; vars];
            for (i, (x, _)) in xs.iter().enumerate() {
                for (j, (y, _)) in ys.iter().enumerate() {
                    r[i * l + j] = x[a] * y[b];
                }
            }
            rows.push(r);
            rhs.push(if a == b { 1.0 } else { 0.0 });
        }
    }

    let problem = LpProblem::feasibility(rows, rhs)?;
    let options = LpOptions {
        feasibility_tol: DUAL_TOL,
        ..LpOptions::default()
    };
    let solution = match lp::solve_with(&problem, &options) {
        Ok(s) => s,
        // a point violating the constraints beyond DUAL_TOL is not a certificate
        Err(FrameError::NumericalBreakdown(_)) => {
            return Ok(DualSearch::Infeasible {
                phase_one_objective: f64::NAN,
            })
        }
        Err(e) => return Err(e),
    };
    if solution.status != LpStatus::Optimal {
        return Ok(DualSearch::Infeasible {
            phase_one_objective: solution.phase_one_objective,
        });
    }

    let plan: Vec<Vec<f64>> = solution.point.chunks(l).map(|r| r.to_vec()).collect();
    let coupling = Coupling::from_parts_unchecked(
        n,
        xs.iter().map(|(x, _)| x.to_vec()).collect(),
        ys.iter().map(|(y, _)| y.to_vec()).collect(),
        plan,
    );
    let cert = check_dual(&coupling);
    if !cert.is_valid() {
        return Ok(DualSearch::Infeasible {
            phase_one_objective: cert.residual,
        });
    }
    Ok(DualSearch::Feasible(cert))
}

/// The pushforward dual
///
/// ```text
/// ψ_h(x) = S⁻¹x + h(x) − ∫⟨S⁻¹x, y⟩ h(y) dμ(y)
/// ```
///
/// tabulated on the support of μ. Every pushforward dual of μ arises this
/// way (take `h = T`), and `h ≡ 0` gives the canonical dual.
pub fn psi_h_dual(mu: &DiscreteMeasure, h: &AtomMap) -> Result<AtomMap> {
    let n = mu.dim();
    if h.codomain_dim() != n {
        return Err(FrameError::DimMismatch {
            expected: n,
            found: h.codomain_dim(),
        });
    }
    let inv = inverse_frame_operator(mu)?;
    let h_vals = h.images_on_support(mu)?;
    // H = ∫ h(y) yᵗ dμ(y), so the correction term is H·S⁻¹x.
    let mut hm = Matrix::zeros(n);
    for ((y, w), hy) in mu.support().zip(&h_vals) {
        for a in 0..n {
            for b in 0..n {
                hm[(a, b)] += w * hy[a] * y[b];
            }
        }
    }
    let images = mu
        .support()
        .zip(&h_vals)
        .map(|((x, _), hx)| {
            let sx = inv.mul_vec(x);
            let corr = hm.mul_vec(&sx);
            (0..n).map(|a| sx[a] + hx[a] - corr[a]).collect()
        })
        .collect();
    AtomMap::on_support(mu, images)
}

/// `(∫⟨x,y⟩dγ, γ-esssup ⟨x,y⟩)`; for a dual coupling the integral is `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceIdentity {
    pub integral: f64,
    pub esssup: f64,
}

pub fn trace_identity(gamma: &Coupling) -> TraceIdentity {
    TraceIdentity {
        integral: gamma.trace_integral(),
        esssup: gamma
            .pairs()
            .map(|(x, y, _)| dot(x, y))
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// `(∫|⟨x,y⟩|ᵖdγ, γ-esssup |⟨x,y⟩|ᵖ)`; both are at least `nᵖ` for dual couplings.
pub fn trace_p_bound(gamma: &Coupling, p: f64) -> Result<TraceIdentity> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(FrameError::BadExponent { p });
    }
    Ok(TraceIdentity {
        integral: gamma.integrate(|x, y| dot(x, y).abs().powf(p)),
        esssup: gamma
            .pairs()
            .map(|(x, y, _)| dot(x, y).abs().powf(p))
            .fold(f64::NEG_INFINITY, f64::max),
    })
}

/// `(∫⟨x,T(x)⟩dμ, ∫‖S^{-1/2}x‖²dμ)`, both equal to `n` when `T_#μ` is a dual.
pub fn trace_equality(mu: &DiscreteMeasure, map: &AtomMap) -> Result<(f64, f64)> {
    let images = map.images_on_support(mu)?;
    let through_map = mu
        .support()
        .zip(&images)
        .map(|((x, w), tx)| w * dot(x, tx))
        .sum();
    let root = frame_operator(mu)
        .inverse_sqrt(DEFAULT_INVERSE_TOL)
        .map_err(|_| FrameError::NotAFrame {
            lower_bound: crate::frame::frame_bounds(mu)
                .map(|b| b.lower)
                .unwrap_or(0.0),
        })?;
    let through_root = mu
        .support()
        .map(|(x, w)| w * norm(&root.mul_vec(x)).powi(2))
        .sum();
    Ok((through_map, through_root))
}

/// Canonical coefficients `⟨S⁻¹f, xᵢ⟩`, aligned with `mu.atoms()`.
pub fn canonical_coefficients(mu: &DiscreteMeasure, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != mu.dim() {
        return Err(FrameError::DimMismatch {
            expected: mu.dim(),
            found: f.len(),
        });
    }
    let g = inverse_frame_operator(mu)?.mul_vec(f);
    Ok(mu.atoms().iter().map(|x| dot(&g, x)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualEnergy {
    /// `∫ω² dμ`.
    pub energy: f64,
    /// `∫|⟨S⁻¹f, x⟩|² dμ`.
    pub canonical_energy: f64,
    /// `∫|ω − ⟨S⁻¹f, x⟩|² dμ`.
    pub residual_energy: f64,
}

/// Splits the energy of a reconstruction `f = ∫ ω(x) x dμ` into the canonical
/// part and an orthogonal remainder. `omega` is aligned with `mu.atoms()`.
pub fn pythagorean_decomposition(
    mu: &DiscreteMeasure,
    f: &[f64],
    omega: &[f64],
) -> Result<DualEnergy> {
    if omega.len() != mu.len() {
        return Err(FrameError::DimMismatch {
            expected: mu.len(),
            found: omega.len(),
        });
    }
    if omega.iter().any(|v| !v.is_finite()) {
        return Err(FrameError::InvalidMap("non-finite coefficient".into()));
    }
    let canonical = canonical_coefficients(mu, f)?;
    let n = mu.dim();
    let mut recon = vec![0.0; n];
    for ((x, w), o) in mu.atoms().iter().zip(mu.weights()).zip(omega) {
        for a in 0..n {
            recon[a] += w * o * x[a];
        }
    }
    let error = distance(&recon, f);
    if error > RECONSTRUCTION_TOL {
        return Err(FrameError::NotAReconstruction { error });
    }
    let mut out = DualEnergy {
        energy: 0.0,
        canonical_energy: 0.0,
        residual_energy: 0.0,
    };
    for ((w, o), c) in mu.weights().iter().zip(omega).zip(&canonical) {
        out.energy += w * o * o;
        out.canonical_energy += w * c * c;
        out.residual_energy += w * (o - c) * (o - c);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationCertificate {
    /// `κ = ∫‖x − z‖·‖T(x)‖ dγ(x, z)`.
    pub kappa: f64,
    /// `(1−κ)²/M₂(T_#μ)` when `κ < 1`.
    pub lower_bound: Option<f64>,
    /// `M₂(η)`.
    pub upper_bound: f64,
}

/// Frame bounds for η certified by a pushforward dual `T_#μ` and a coupling
/// `γ ∈ Γ(μ, η)`. When `κ ≥ 1` no lower bound is certified.
pub fn perturbation_certificate(
    mu: &DiscreteMeasure,
    map: &AtomMap,
    eta: &DiscreteMeasure,
    gamma: &Coupling,
) -> Result<PerturbationCertificate> {
    gamma.check_marginals(mu, eta)?;
    require_pushforward_dual(mu, map)?;

    let mut kappa = 0.0;
    for (i, row) in gamma.plan().iter().enumerate() {
        if row.iter().all(|g| *g == 0.0) {
            continue;
        }
        let x = &gamma.mu_atoms()[i];
        let tx = norm(&map.eval(x)?);
        for (j, g) in row.iter().enumerate() {
            if *g != 0.0 {
                kappa += g * distance(x, &gamma.nu_atoms()[j]) * tx;
            }
        }
    }
    let dual_moment = mu.pushforward(map)?.second_moment();
    Ok(PerturbationCertificate {
        kappa,
        lower_bound: (kappa < 1.0).then(|| (1.0 - kappa).powi(2) / dual_moment),
        upper_bound: eta.second_moment(),
    })
}
