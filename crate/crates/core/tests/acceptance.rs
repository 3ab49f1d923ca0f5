//! Acceptance suite: twelve randomized and worked-example checks of the
//! library's identities and inequalities at fixed tolerances. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::time::{Duration, Instant};

use probframe::coupling::Coupling;
use probframe::duality::{
    self, canonical_coefficients, find_dual_coupling, perturbation_certificate, psi_h_dual,
    pythagorean_decomposition, trace_identity, DualCertificate,
};
use probframe::frame::{
    bessel_to_tight, canonical_dual, finite_frame_potential, frame_bounds, frame_operator,
};
use probframe::linalg::{distance, dot, norm, Matrix};
use probframe::potential::{distance_to_canonical, pdfp, pdfp_2p, pdfp_pushforward, DualTarget};
use probframe::transport::hyperplane_projection_distance;
use probframe::{AtomMap, DiscreteMeasure, FrameError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    pass: bool,
    detail: String,
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn random_weights(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..1.5)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Gaussian atoms, random weights, rejected unless `λ_min(S_μ) > 1e-6`.
fn random_frame(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DiscreteMeasure {
    loop {
        let atoms = (0..m).map(|_| gaussian(rng, n)).collect();
        let mu = DiscreteMeasure::new(n, atoms, random_weights(rng, m)).unwrap();
        if frame_bounds(&mu).unwrap().lower > 1e-6 {
            return mu;
        }
    }
}

fn random_frame_any(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> DiscreteMeasure {
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(n..=max_m);
    random_frame(rng, n, m)
}

fn random_h(rng: &mut ChaCha8Rng, mu: &DiscreteMeasure, scale: f64) -> AtomMap {
    let images = (0..mu.len())
        .map(|_| {
            gaussian(rng, mu.dim())
                .into_iter()
                .map(|v| v * scale)
                .collect()
        })
        .collect();
    AtomMap::on_atoms(mu, images).unwrap()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < n {
        let mut v = gaussian(rng, n);
        for c in &cols {
            let p = dot(&v, c);
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
        }
        let r = norm(&v);
        if r > 1e-6 {
            cols.push(v.into_iter().map(|a| a / r).collect());
        }
    }
    Matrix::from_fn(n, |i, j| cols[j][i])
}

/// Parseval frame `(S_μ^{-1/2})_#μ` built from a random frame.
fn random_tight(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> DiscreteMeasure {
    let mu = random_frame_any(rng, max_n, max_m);
    let root = frame_operator(&mu).inverse_sqrt(1e-12).unwrap();
    mu.pushforward(&AtomMap::linear(root.into_matrix()))
        .unwrap()
}

fn one_d(atoms: &[f64], weights: &[f64]) -> DiscreteMeasure {
    DiscreteMeasure::new(
        1,
        atoms.iter().map(|a| vec![*a]).collect(),
        weights.to_vec(),
    )
    .unwrap()
}

fn within(elapsed: Duration, limit: Option<f64>) -> bool {
    limit.map_or(true, |l| elapsed.as_secs_f64() < l)
}

/// Certificates collected by criteria 1 to 3, consumed by criterion 4.
#[derive(Default)]
struct Certificates(Vec<(usize, DualCertificate)>);

fn canonical_equality(rng: &mut ChaCha8Rng, certs: &mut Certificates) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut flagged = 0;
    for _ in 0..500 {
        let mu = random_frame_any(rng, 5, 10);
        let (t, _) = canonical_dual(&mu).unwrap();
        let r = pdfp_pushforward(&mu, &t).unwrap();
        worst = worst.max((r.value - mu.dim() as f64).abs());
        flagged += r.equality_case as usize;
        certs
            .0
            .push((mu.dim(), duality::pushforward_certificate(&mu, &t).unwrap()));
    }
    Outcome {
        pass: worst <= 1e-8 && flagged == 500,
        detail: format!(
            "500 frames, max |value - n| = {worst:.2e}, equality flagged {flagged}/500"
        ),
    }
}

fn pushforward_lower_bound(rng: &mut ChaCha8Rng, certs: &mut Certificates) -> Outcome {
    let (mut min_gap, mut strict, mut far, mut violations) = (f64::INFINITY, 0, 0, 0);
    for _ in 0..500 {
        let mu = random_frame_any(rng, 5, 10);
        let psi = psi_h_dual(&mu, &random_h(rng, &mu, 0.5)).unwrap();
        let r = pdfp_pushforward(&mu, &psi).unwrap();
        let n = mu.dim() as f64;
        min_gap = min_gap.min(r.value - n);
        if r.value < n - 1e-8 {
            violations += 1;
        }
        if distance_to_canonical(&mu, &psi).unwrap() > 1e-3 {
            far += 1;
            if r.value > n + 1e-6 {
                strict += 1;
            } else {
                violations += 1;
            }
        }
        certs.0.push((
            mu.dim(),
            duality::pushforward_certificate(&mu, &psi).unwrap(),
        ));
    }
    Outcome {
        pass: violations == 0,
        detail: format!(
            "500 pairs, min(value - n) = {min_gap:.2e}, strict {strict}/{far} non-canonical, violations {violations}"
        ),
    }
}

/// A dual obtained by perturbing the canonical one, and whether it is the
/// canonical one itself.
fn perturbed_dual(
    rng: &mut ChaCha8Rng,
    mu: &DiscreteMeasure,
    kind: usize,
) -> (DiscreteMeasure, bool) {
    let (t, canonical) = canonical_dual(mu).unwrap();
    match kind {
        // a nearby pushforward dual
        0 => {
            let psi = psi_h_dual(mu, &random_h(rng, mu, 0.1)).unwrap();
            (mu.pushforward(&psi).unwrap(), false)
        }
        // split each canonical atom y into y ± d with half the weight
        1 => {
            let mut atoms = Vec::new();
            let mut weights = Vec::new();
            for (x, w) in mu.support() {
                let y = t.eval(x).unwrap();
                let d: Vec<f64> = gaussian(rng, mu.dim())
                    .into_iter()
                    .map(|v| 0.2 * v)
                    .collect();
                atoms.push(y.iter().zip(&d).map(|(a, b)| a + b).collect());
                atoms.push(y.iter().zip(&d).map(|(a, b)| a - b).collect());
                weights.extend([w / 2.0, w / 2.0]);
            }
            (
                DiscreteMeasure::new(mu.dim(), atoms, weights).unwrap(),
                false,
            )
        }
        // jitter canonical atoms; usually not a dual any more
        2 => {
            let atoms = canonical
                .atoms()
                .iter()
                .map(|y| {
                    y.iter()
                        .map(|a| a + 0.05 * rng.sample::<f64, _>(StandardNormal))
                        .collect()
                })
                .collect();
            (
                DiscreteMeasure::new(mu.dim(), atoms, canonical.weights().to_vec()).unwrap(),
                false,
            )
        }
        _ => (canonical, true),
    }
}

fn general_lower_bound(rng: &mut ChaCha8Rng, certs: &mut Certificates) -> Outcome {
    let (mut accepted, mut discarded, mut violations, mut equalities, mut mismatches) =
        (0, 0, 0, 0, 0);
    let mut min_gap = f64::INFINITY;
    let mut attempt = 0usize;
    while accepted < 200 && attempt < 5000 {
        attempt += 1;
        // kinds 3 and 4 use tight frames: canonical duals there are the equality case
        let kind = attempt % 5;
        let mu = if kind >= 3 {
            random_tight(rng, 4, 8)
        } else {
            random_frame_any(rng, 4, 8)
        };
        let (nu, _) = perturbed_dual(rng, &mu, if kind == 4 { 1 } else { kind });
        // a perturbation can land back on the canonical dual when that dual is unique
        let is_canonical = nu.approx_eq(&canonical_dual(&mu).unwrap().1, 1e-7, 1e-9);
        let Some(cert) = find_dual_coupling(&mu, &nu).unwrap().certificate().cloned() else {
            discarded += 1;
            continue;
        };
        accepted += 1;
        let r = pdfp(&mu, &nu).unwrap();
        let scale = r.lower_bound.max(1.0);
        min_gap = min_gap.min(r.gap / scale);
        if r.gap < -1e-8 * scale {
            violations += 1;
        }
        let tight = frame_bounds(&mu).unwrap().tight;
        if r.gap_attained() {
            equalities += 1;
            if !(tight && is_canonical) {
                violations += 1;
            }
        }
        if r.equality_case != r.gap_attained() || r.equality_case != (tight && is_canonical) {
            mismatches += 1;
        }
        certs.0.push((mu.dim(), cert));
    }
    Outcome {
        pass: accepted == 200 && violations == 0 && mismatches == 0 && equalities > 0,
        detail: format!(
            "{accepted} verified duals ({discarded} infeasible discarded), min relative gap {min_gap:.2e}, \
             {equalities} equality cases (all tight + canonical), violations {violations}, flag mismatches {mismatches}"
        ),
    }
}

fn trace_law(certs: &Certificates) -> Outcome {
    let (mut worst, mut esssup_short) = (0.0f64, 0);
    for (n, cert) in &certs.0 {
        let n = *n as f64;
        worst = worst.max((cert.trace_value - n).abs());
        if trace_identity(&cert.coupling).esssup < n - 1e-6 {
            esssup_short += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-6 && esssup_short == 0 && !certs.0.is_empty(),
        detail: format!(
            "{} certificates, max |trace - n| = {worst:.2e}, esssup below n: {esssup_short}",
            certs.0.len()
        ),
    }
}

fn bessel_completion(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut worst, mut k_errors) = (0.0f64, 0);
    for _ in 0..200 {
        let n = rng.random_range(1..=5);
        let m = rng.random_range(1..=8);
        let atoms = (0..m).map(|_| gaussian(rng, n)).collect();
        let mu = DiscreteMeasure::new(n, atoms, random_weights(rng, m)).unwrap();
        for k in [0.5, 0.75, 1.0, 2.0] {
            let c = bessel_to_tight(&mu, k, None, None).unwrap();
            let target = Matrix::identity(n).scale(k * c.bessel_bound);
            worst = worst.max(frame_operator(&c.measure).matrix().sub(&target).max_abs());
        }
        if !matches!(
            bessel_to_tight(&mu, 0.4, None, None),
            Err(FrameError::KTooSmall { .. })
        ) {
            k_errors += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-8 && k_errors == 0,
        detail: format!("200 measures x 4 values of k, max |S - kB Id| = {worst:.2e}, k = 0.4 not rejected: {k_errors}"),
    }
}

fn psi_idempotence(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let mu = random_frame_any(rng, 5, 10);
        let psi = psi_h_dual(&mu, &random_h(rng, &mu, 0.5)).unwrap();
        let again = psi_h_dual(&mu, &psi).unwrap();
        for (x, _) in mu.support() {
            worst = worst.max(distance(&psi.eval(x).unwrap(), &again.eval(x).unwrap()));
        }
    }
    Outcome {
        pass: worst <= 1e-8,
        detail: format!("200 pairs, max atom distance {worst:.2e}"),
    }
}

fn pythagoras(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut below = 0;
    for _ in 0..500 {
        let mu = random_frame_any(rng, 5, 10);
        let f = gaussian(rng, mu.dim());
        let canonical = canonical_coefficients(&mu, &f).unwrap();
        // z minus its projection onto the range of the analysis operator
        let z = gaussian(rng, mu.len());
        let mut synth = vec![0.0; mu.dim()];
        for ((x, w), zi) in mu.atoms().iter().zip(mu.weights()).zip(&z) {
            synth.iter_mut().zip(x).for_each(|(s, a)| *s += w * zi * a);
        }
        let back = canonical_coefficients(&mu, &synth).unwrap();
        let omega: Vec<f64> = canonical
            .iter()
            .zip(&z)
            .zip(&back)
            .map(|((c, zi), b)| c + zi - b)
            .collect();
        let e = pythagorean_decomposition(&mu, &f, &omega).unwrap();
        worst = worst.max((e.energy - e.canonical_energy - e.residual_energy).abs());
        if e.energy < e.canonical_energy - 1e-8 {
            below += 1;
        }
    }
    let pm = one_d(&[1.0, -1.0], &[0.5, 0.5]);
    let e = pythagorean_decomposition(&pm, &[1.0], &[3.0, 1.0]).unwrap();
    let example = (e.energy, e.canonical_energy, e.residual_energy) == (5.0, 1.0, 4.0);
    Outcome {
        pass: worst <= 1e-8 && below == 0 && example,
        detail: format!(
            "500 reconstructions, max |E - E_can - E_res| = {worst:.2e}, E < E_can: {below}, \
             worked example (5, 1, 4) exact: {example}"
        ),
    }
}

fn hyperplane(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=8);
        let atoms = (0..m).map(|_| gaussian(rng, n)).collect();
        let mu = DiscreteMeasure::new(n, atoms, random_weights(rng, m)).unwrap();
        let x = gaussian(rng, n);
        let r = norm(&x);
        let x: Vec<f64> = x.into_iter().map(|a| a / r).collect();
        let p = [1.0, 1.5, 2.0, 3.0][i % 4];
        let h = hyperplane_projection_distance(&mu, &x, p).unwrap();
        worst = worst.max((h.wp_p - h.moment).abs());
    }
    Outcome {
        pass: worst <= 1e-7,
        detail: format!("200 instances, max |W_p^p - moment| = {worst:.2e}"),
    }
}

fn perturbation(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut accepted, mut lower_bad, mut upper_bad) = (0, 0, 0);
    let mut max_kappa: f64 = 0.0;
    while accepted < 200 {
        let mu = random_frame_any(rng, 4, 8);
        let t = if accepted % 2 == 0 {
            canonical_dual(&mu).unwrap().0
        } else {
            psi_h_dual(&mu, &random_h(rng, &mu, 0.3)).unwrap()
        };
        let reach = t
            .images_on_support(&mu)
            .unwrap()
            .iter()
            .map(|v| norm(v))
            .fold(0.0, f64::max);
        let eps = rng.random_range(1e-4..0.5) / reach;
        let shifted = mu
            .support()
            .map(|(x, _)| {
                x.iter()
                    .map(|a| a + eps * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            })
            .collect();
        let shift = AtomMap::on_support(&mu, shifted).unwrap();
        let eta = mu.pushforward(&shift).unwrap();
        let gamma = Coupling::graph(&mu, &shift).unwrap();
        let c = perturbation_certificate(&mu, &t, &eta, &gamma).unwrap();
        let Some(lower) = c.lower_bound else { continue };
        accepted += 1;
        max_kappa = max_kappa.max(c.kappa);
        let b = frame_bounds(&eta).unwrap();
        lower_bad += (lower > b.lower + 1e-8) as usize;
        upper_bad += (b.upper > c.upper_bound + 1e-8) as usize;
    }
    Outcome {
        pass: lower_bad == 0 && upper_bad == 0,
        detail: format!(
            "200 perturbations (max kappa {max_kappa:.3}), lower bound violated {lower_bad}, upper bound violated {upper_bad}"
        ),
    }
}

fn worked_examples(rng: &mut ChaCha8Rng) -> Outcome {
    let d1 = one_d(&[1.0], &[1.0]);
    let nu = one_d(&[0.5, 1.5], &[0.5, 0.5]);
    let feasible = find_dual_coupling(&d1, &nu).unwrap().is_feasible();
    let value = pdfp(&d1, &nu).unwrap().value;
    let delta_two = find_dual_coupling(&d1, &one_d(&[2.0], &[1.0]))
        .unwrap()
        .is_feasible();

    let (mut mean_ok, mut other_ok) = (0, 0);
    for i in 0..40 {
        let z = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let k = rng.random_range(1..=5);
        let raw: Vec<f64> = gaussian(rng, k);
        let w = random_weights(rng, k);
        let mean: f64 = raw.iter().zip(&w).map(|(a, b)| a * b).sum();
        let target = if i < 20 {
            1.0 / z
        } else {
            1.0 / z + rng.random_range(0.01..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 }
        };
        let atoms: Vec<f64> = raw.iter().map(|a| a - mean + target).collect();
        let found = find_dual_coupling(&one_d(&[z], &[1.0]), &one_d(&atoms, &w))
            .unwrap()
            .is_feasible();
        if i < 20 && found {
            mean_ok += 1;
        } else if i >= 20 && !found {
            other_ok += 1;
        }
    }
    Outcome {
        pass: feasible && (value - 1.25).abs() <= 1e-12 && !delta_two && mean_ok == 20 && other_ok == 20,
        detail: format!(
            "delta_1 vs (1/2, 3/2): feasible {feasible}, PDFP {value}; mean-1/z feasible {mean_ok}/20; \
             other means infeasible {other_ok}/20; delta_2 feasible {delta_two}"
        ),
    }
}

fn two_p_strictness(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut accepted, mut not_strict, mut flagged) = (0, 0, 0);
    let mut min_margin = f64::INFINITY;
    while accepted < 100 {
        let n = rng.random_range(2..=4);
        let m = rng.random_range(n..=8);
        let mu = random_frame(rng, n, m);
        let nu = if accepted % 3 == 0 {
            canonical_dual(&mu).unwrap().1
        } else {
            perturbed_dual(rng, &mu, 1 - accepted % 2).0
        };
        if !find_dual_coupling(&mu, &nu).unwrap().is_feasible() {
            continue;
        }
        accepted += 1;
        for p in [1.5, 2.0] {
            let r = pdfp_2p(&mu, DualTarget::Measure(&nu), p).unwrap();
            min_margin = min_margin.min(r.gap);
            not_strict += (r.gap <= 1e-10) as usize;
            flagged += r.equality_case as usize;
        }
    }

    let mut exceptions_ok = true;
    let mut worst_exception: f64 = 0.0;
    for _ in 0..20 {
        let z = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let w = rng.random_range(0.05..0.95);
        let cases = [
            (one_d(&[z], &[1.0]), one_d(&[1.0 / z], &[1.0])),
            (
                one_d(&[z, -z], &[w, 1.0 - w]),
                one_d(&[1.0 / z, -1.0 / z], &[w, 1.0 - w]),
            ),
        ];
        for (mu, nu) in &cases {
            for p in [1.5, 2.0] {
                let r = pdfp_2p(mu, DualTarget::Measure(nu), p).unwrap();
                worst_exception = worst_exception.max(r.gap.abs());
                exceptions_ok &= r.gap.abs() <= 1e-10 && r.equality_case;
            }
        }
    }
    Outcome {
        pass: not_strict == 0 && flagged == 0 && exceptions_ok,
        detail: format!(
            "100 frames x p in {{1.5, 2}}: min gap {min_margin:.3e}, not strict {not_strict}, flagged {flagged}; \
             one-dimensional exceptions attain within {worst_exception:.1e}"
        ),
    }
}

fn finite_frame_bridge(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let big_n = rng.random_range(n..=8);
        let frame: Vec<Vec<f64>> = loop {
            let f: Vec<Vec<f64>> = (0..big_n).map(|_| gaussian(rng, n)).collect();
            let probe = DiscreteMeasure::uniform(n, f.clone()).unwrap();
            if frame_bounds(&probe).unwrap().lower > 1e-6 {
                break f;
            }
        };
        // finite canonical duals g_j = S_F⁻¹ f_j with S_F = Σ f fᵗ (no weights)
        let mu = DiscreteMeasure::uniform(n, frame.clone()).unwrap();
        let s_f = frame_operator(&mu).into_matrix().scale(big_n as f64);
        let s_f_inv = probframe::SymMatrix::symmetrize(s_f)
            .inverse(1e-12)
            .unwrap();
        let duals: Vec<Vec<f64>> = frame.iter().map(|f| s_f_inv.mul_vec(f)).collect();
        let nu = DiscreteMeasure::uniform(n, duals).unwrap();
        let dfp = (big_n * big_n) as f64 * pdfp(&mu, &nu).unwrap().value;
        worst = worst.max((dfp - n as f64).abs());
    }

    let (mut below, mut iff_broken, mut tight_seen) = (0, 0, 0);
    for i in 0..500 {
        let n = rng.random_range(2..=4);
        let vectors: Vec<Vec<f64>> = match i % 3 {
            // union of random orthonormal bases: tight
            0 => {
                let q = rng.random_range(1..=3);
                (0..q)
                    .flat_map(|_| {
                        let u = random_orthogonal(rng, n);
                        (0..n).map(move |j| u.column(j))
                    })
                    .collect()
            }
            // harmonic frame in the plane, embedded as the first two coordinates
            1 if n == 2 => {
                let big_n = rng.random_range(3..=9);
                let phase = rng.random_range(0.0..std::f64::consts::PI);
                (0..big_n)
                    .map(|k| {
                        let a = phase + std::f64::consts::PI * k as f64 / big_n as f64;
                        vec![a.cos(), a.sin()]
                    })
                    .collect()
            }
            _ => {
                let big_n = rng.random_range(n..=8);
                (0..big_n)
                    .map(|_| {
                        let v = gaussian(rng, n);
                        let r = norm(&v);
                        v.into_iter().map(|a| a / r).collect()
                    })
                    .collect()
            }
        };
        let big_n = vectors.len() as f64;
        let mu = DiscreteMeasure::uniform(n, vectors).unwrap();
        let fp = big_n * big_n * finite_frame_potential(&mu);
        let bound = big_n * big_n / n as f64;
        below += (fp < bound - 1e-9 * bound) as usize;
        let attains = fp - bound <= 1e-8 * bound;
        let tight = frame_bounds(&mu).unwrap().tight;
        tight_seen += tight as usize;
        iff_broken += (attains != tight) as usize;
    }

    let h = 3f64.sqrt() / 2.0;
    let mb =
        DiscreteMeasure::uniform(2, vec![vec![0.0, 1.0], vec![-h, -0.5], vec![h, -0.5]]).unwrap();
    let pfp = finite_frame_potential(&mb);
    let mercedes_ok = (pfp - 0.5).abs() <= 1e-12 && (9.0 * pfp - 4.5).abs() <= 1e-12;
    Outcome {
        pass: worst <= 1e-7 && below == 0 && iff_broken == 0 && tight_seen > 0 && mercedes_ok,
        detail: format!(
            "100 finite frames, max |N^2 PDFP - n| = {worst:.2e}; 500 unit-norm frames ({tight_seen} tight): \
             FP below N^2/n {below}, equality-iff-tight broken {iff_broken}; Mercedes-Benz N^2 PFP = {}",
            9.0 * pfp
        ),
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f4a3e);
    let mut certs = Certificates::default();
    let mut failures = 0;

    let mut report =
        |id: usize, name: &str, limit: Option<f64>, run: &mut dyn FnMut() -> Outcome| {
            let start = Instant::now();
            let outcome = run();
            let elapsed = start.elapsed();
            let timely = within(elapsed, limit);
            let pass = outcome.pass && timely;
            if !pass {
                failures += 1;
            }
            let budget = limit.map(|l| format!(" (limit {l} s)")).unwrap_or_default();
            println!(
                "{} {:>2} {name}: {}; {:.2} s{budget}",
                if pass { "PASS" } else { "FAIL" },
                id,
                outcome.detail,
                elapsed.as_secs_f64(),
            );
        };

    report(1, "canonical dual attains PDFP = n", Some(5.0), &mut || {
        canonical_equality(&mut rng, &mut certs)
    });
    report(
        2,
        "pushforward duals satisfy PDFP >= n",
        Some(10.0),
        &mut || pushforward_lower_bound(&mut rng, &mut certs),
    );
    report(
        3,
        "general duals satisfy PDFP >= nA/B",
        Some(60.0),
        &mut || general_lower_bound(&mut rng, &mut certs),
    );
    report(
        4,
        "trace identity on accepted certificates",
        None,
        &mut || trace_law(&certs),
    );
    report(
        5,
        "Bessel measures complete to tight frames",
        None,
        &mut || bessel_completion(&mut rng),
    );
    report(6, "psi construction is idempotent", None, &mut || {
        psi_idempotence(&mut rng)
    });
    report(7, "dual energy splits orthogonally", None, &mut || {
        pythagoras(&mut rng)
    });
    report(
        8,
        "hyperplane projection transport identity",
        Some(60.0),
        &mut || hyperplane(&mut rng),
    );
    report(
        9,
        "perturbation certificate brackets frame bounds",
        None,
        &mut || perturbation(&mut rng),
    );
    report(10, "one-dimensional worked examples", None, &mut || {
        worked_examples(&mut rng)
    });
    report(
        11,
        "2p potential is strict above dimension one",
        None,
        &mut || two_p_strictness(&mut rng),
    );
    report(12, "finite frame potentials", None, &mut || {
        finite_frame_bridge(&mut rng)
    });

    if failures > 0 {
        println!("{failures} of 12 criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
