//! `probframe` command-line front end. Every subcommand reads JSON files,
//! runs one library operation and prints a single JSON document with a
//! `"status"` field.
//!
//! Exit codes: 0 success, 1 domain error, 2 malformed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use probframe::duality::{self, check_dual, find_dual_coupling};
use probframe::frame::{self, bessel_to_tight, frame_bounds, frame_operator};
use probframe::map::AtomMapFile;
use probframe::potential::{self, DualTarget};
use probframe::transport::{self, hyperplane_projection, hyperplane_projection_distance};
use probframe::{AtomMap, Coupling, DiscreteMeasure, FrameError};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "probframe",
    version,
    about = "Probabilistic frames on R^n as discrete measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, second moment, frame operator and frame bounds.
    Info { measure: PathBuf },
    /// Canonical dual map S⁻¹ and the measure (S⁻¹)_#μ.
    CanonicalDual { measure: PathBuf },
    /// Checks whether a coupling satisfies ∫xyᵗdγ = Id.
    CheckDual { coupling: PathBuf },
    /// Searches for a dual coupling between two measures.
    FindDual { mu: PathBuf, nu: PathBuf },
    /// Builds the pushforward dual ψ_h from an arbitrary map h.
    PsiH { mu: PathBuf, h: PathBuf },
    /// Dual frame potential against a dual measure or a pushforward dual map.
    Pdfp {
        #[command(flatten)]
        target: Target,
        /// Uses the 2p-potential with this exponent (p > 1).
        #[arg(long)]
        p: Option<f64>,
    },
    /// Essential supremum of |⟨x,y⟩|ᵖ over the chosen dual.
    Esssup {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        p: f64,
    },
    /// Exact p-Wasserstein distance.
    Wasserstein {
        mu: PathBuf,
        nu: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Transport cost to the projection onto the hyperplane x⊥.
    Hyperplane {
        measure: PathBuf,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        x: Reals,
        #[arg(long)]
        p: f64,
    },
    /// Completes a Bessel measure to a tight frame with bound kB.
    BesselToTight {
        measure: PathBuf,
        #[arg(long)]
        k: f64,
        /// Tight reference measure with bound 2k.
        #[arg(long)]
        eta: Option<PathBuf>,
        /// Overrides B = λ_max(S_μ).
        #[arg(long)]
        bessel_bound: Option<f64>,
    },
    /// Frame bounds certified for a perturbation η of a frame μ.
    Perturb {
        mu: PathBuf,
        map: PathBuf,
        eta: PathBuf,
        coupling: PathBuf,
    },
    /// Splits the energy of a reconstruction into canonical and residual parts.
    Pythagoras {
        measure: PathBuf,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        f: Reals,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        omega: Reals,
    },
}

/// Either a dual measure `nu` or a dual map given with `--pushforward`.
#[derive(Args)]
#[command(group(ArgGroup::new("dual").required(true).args(["nu", "pushforward"])))]
struct Target {
    mu: PathBuf,
    nu: Option<PathBuf>,
    #[arg(long)]
    pushforward: Option<PathBuf>,
}

/// A comma-separated list of reals such as `1,0,-0.5`. Wrapped so clap
/// treats it as one value rather than repeated occurrences.
#[derive(Clone)]
struct Reals(Vec<f64>);

fn parse_vector(s: &str) -> Result<Reals, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {t:?}: {e}"))
        })
        .collect::<Result<_, _>>()
        .map(Reals)
}

enum Failure {
    Domain(FrameError),
    Input { kind: &'static str, detail: String },
}

impl From<FrameError> for Failure {
    fn from(e: FrameError) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<Value, Failure>;

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input {
        kind: "IoError",
        detail: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure::Input {
        kind: "ParseError",
        detail: format!("{}: {e}", path.display()),
    })
}

fn load_map(path: &Path, mu: &DiscreteMeasure) -> Result<AtomMap, Failure> {
    load::<AtomMapFile>(path)?
        .bind(mu)
        .map_err(|e| Failure::Input {
            kind: e.kind(),
            detail: format!("{}: {e}", path.display()),
        })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library outputs serialize")
}

fn run(command: Command) -> Outcome {
    Ok(match command {
        Command::Info { measure } => {
            let mu: DiscreteMeasure = load(&measure)?;
            let b = frame_bounds(&mu)?;
            json!({
                "dim": mu.dim(),
                "second_moment": mu.second_moment(),
                "support_size": mu.support_size(),
                "frame_operator": frame_operator(&mu).rows(),
                "A": b.lower,
                "B": b.upper,
                "is_frame": b.is_frame(),
                "tight": b.tight,
                "parseval": b.parseval,
            })
        }
        Command::CanonicalDual { measure } => {
            let mu: DiscreteMeasure = load(&measure)?;
            let (map, nu) = frame::canonical_dual(&mu)?;
            json!({ "map": map, "measure": nu })
        }
        Command::CheckDual { coupling } => {
            let gamma: Coupling = load(&coupling)?;
            let cert = check_dual(&gamma);
            let mut v = to_value(&cert);
            v["valid"] = json!(cert.is_valid());
            v
        }
        Command::FindDual { mu, nu } => {
            let (mu, nu): (DiscreteMeasure, DiscreteMeasure) = (load(&mu)?, load(&nu)?);
            to_value(&find_dual_coupling(&mu, &nu)?)
        }
        Command::PsiH { mu, h } => {
            let mu: DiscreteMeasure = load(&mu)?;
            let h = load_map(&h, &mu)?;
            let psi = duality::psi_h_dual(&mu, &h)?;
            let cert = duality::pushforward_certificate(&mu, &psi)?;
            json!({
                "map": psi,
                "measure": mu.pushforward(&psi)?,
                "residual": cert.residual,
                "distance_to_canonical": potential::distance_to_canonical(&mu, &psi)?,
            })
        }
        Command::Pdfp { target, p } => with_target(&target, |mu, t| {
            let report = match p {
                Some(p) => potential::pdfp_2p(mu, t, p)?,
                None => potential::pdfp_target(mu, t)?,
            };
            Ok(to_value(&report))
        })?,
        Command::Esssup { target, p } => with_target(&target, |mu, t| {
            Ok(json!({ "p": p, "esssup": potential::esssup_potential(mu, t, p)? }))
        })?,
        Command::Wasserstein { mu, nu, p } => {
            let (mu, nu): (DiscreteMeasure, DiscreteMeasure) = (load(&mu)?, load(&nu)?);
            to_value(&transport::wasserstein(&mu, &nu, p)?)
        }
        Command::Hyperplane {
            measure,
            x: Reals(x),
            p,
        } => {
            let mu: DiscreteMeasure = load(&measure)?;
            let h = hyperplane_projection_distance(&mu, &x, p)?;
            let mut v = to_value(&h);
            v["projected"] = to_value(&mu.pushforward(&hyperplane_projection(&x)?)?);
            v
        }
        Command::BesselToTight {
            measure,
            k,
            eta,
            bessel_bound,
        } => {
            let mu: DiscreteMeasure = load(&measure)?;
            let eta: Option<DiscreteMeasure> = eta.as_deref().map(load).transpose()?;
            let c = bessel_to_tight(&mu, k, eta.as_ref(), bessel_bound)?;
            json!({
                "measure": c.measure,
                "complement": c.complement,
                "bessel_bound": c.bessel_bound,
                "tight_bound": c.tight_bound,
            })
        }
        Command::Perturb {
            mu,
            map,
            eta,
            coupling,
        } => {
            let mu: DiscreteMeasure = load(&mu)?;
            let t = load_map(&map, &mu)?;
            let (eta, gamma): (DiscreteMeasure, Coupling) = (load(&eta)?, load(&coupling)?);
            to_value(&duality::perturbation_certificate(&mu, &t, &eta, &gamma)?)
        }
        Command::Pythagoras {
            measure,
            f: Reals(f),
            omega: Reals(omega),
        } => {
            let mu: DiscreteMeasure = load(&measure)?;
            to_value(&duality::pythagorean_decomposition(&mu, &f, &omega)?)
        }
    })
}

fn with_target(
    target: &Target,
    op: impl FnOnce(&DiscreteMeasure, DualTarget<'_>) -> Outcome,
) -> Outcome {
    let mu: DiscreteMeasure = load(&target.mu)?;
    match (&target.nu, &target.pushforward) {
        (_, Some(map)) => {
            let t = load_map(map, &mu)?;
            op(&mu, DualTarget::Pushforward(&t))
        }
        (Some(nu), None) => {
            let nu: DiscreteMeasure = load(nu)?;
            op(&mu, DualTarget::Measure(&nu))
        }
        (None, None) => unreachable!("clap requires one of nu and --pushforward"),
    }
}

fn emit(status: &str, body: Value) {
    let mut out = Map::new();
    out.insert("status".into(), json!(status));
    match body {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("result".into(), other);
        }
    }
    println!("{}", Value::Object(out));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(
                "error",
                json!({ "error": "UsageError", "detail": e.to_string().trim_end() }),
            );
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(body) => {
            emit("ok", body);
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            emit(
                "error",
                json!({ "error": e.kind(), "detail": e.to_string() }),
            );
            ExitCode::from(1)
        }
        Err(Failure::Input { kind, detail }) => {
            emit("error", json!({ "error": kind, "detail": detail }));
            ExitCode::from(2)
        }
    }
}
