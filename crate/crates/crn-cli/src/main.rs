//! `crn` — analysis of mass-action reaction networks from the command line.
//!
//! Verbs: `classify`, `endotactic`, `realize`, `equilibrium`, `simulate`,
//! `verify-bound`. Machine-readable output (JSON or CSV) goes to stdout;
//! diagnostics go to stderr. Exit codes: 0 success, 1 parse error, 2
//! precondition violation, 3 verification failure.

mod jsonfmt;

use std::collections::BTreeMap;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crn::dsl::{self, Diagnostic, Severity};
use crn::dynamics::{self, simulate, simulate_closed_form, verify_bound};
use crn::endo::{
    first_order_endotactic_jobs, indicator_violations, one_dim_strongly_endotactic,
    sufficient_endotactic, u_endotactic, u_strongly_endotactic, Certificate, Direction,
    EndoVerdict,
};
use crn::exact::{self, Rat};
use crn::graph::{
    self, conservation_laws, cross_component_subgraph, deficiency, deficiency_standard,
    highest_order_subgraph, is_weakly_reversible, stoichiometric_subspace,
    strongly_connected_components, weakly_connected_components, zero_component_split,
    zero_path_sets, ReactionNetwork,
};
use crn::kinetics::{
    equilibrium, flux_system, is_strong_realization, monomolecular_realization, source_flux,
    spectral_report, EquilibriumMode, FluxSystem,
};

#[derive(Parser)]
#[command(name = "crn", version, about = "Analyze mass-action reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Network file: `.crn` text or `.json`.
    input: PathBuf,
    /// Add a wall-clock timestamp field to the JSON output.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report: components, deficiency, conservation laws,
    /// subgraph extractions. A directory input analyzes every network in it.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Worker threads for batch directory analysis.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Endotacticity verdict with witnesses.
    Endotactic {
        #[command(flatten)]
        common: Common,
        /// Test one direction, e.g. "1,-1/2,0".
        #[arg(long)]
        vector: Option<String>,
        /// Strong endotacticity variants.
        #[arg(long)]
        strong: bool,
        /// Collect every violating (direction, reaction) pair.
        #[arg(long)]
        all_witnesses: bool,
        /// Worker threads for the direction scan.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Monomolecular strong realization with the flux-match certificate.
    Realize {
        #[command(flatten)]
        common: Common,
    },
    /// Unique equilibrium in the compatibility class of --init.
    Equilibrium {
        #[command(flatten)]
        common: Common,
        /// Initial concentrations "v1,...,vd".
        #[arg(long)]
        init: String,
        /// Run without an endotacticity certificate.
        #[arg(long)]
        force: bool,
    },
    /// Integrate the mass-action ODE and emit a CSV trajectory.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Initial concentrations "v1,...,vd".
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Evaluate the linear closed form instead of integrating.
        #[arg(long)]
        closed_form: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the exponential convergence bound along a trajectory.
    VerifyBound {
        #[command(flatten)]
        common: Common,
        /// Initial concentrations "v1,...,vd".
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
}

enum Failure {
    /// Input did not parse (exit 1).
    Parse(Vec<Diagnostic>),
    /// An operation's precondition failed (exit 2).
    Precondition(String),
    /// A verification-style check failed (exit 3).
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Verification(_) => 3,
        }
    }
}

fn use_color() -> bool {
    match std::env::var("CRN_COLOR").as_deref() {
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn report_diagnostic(d: &Diagnostic, color: bool) {
    let tag = match (d.severity, color) {
        (Severity::Error, true) => "\x1b[31merror\x1b[0m",
        (Severity::Error, false) => "error",
        (Severity::Warning, true) => "\x1b[33mwarning\x1b[0m",
        (Severity::Warning, false) => "warning",
    };
    eprintln!("{}:{}: {}: {}", d.line, d.column, tag, d.message);
}

fn load_network(path: &Path) -> Result<ReactionNetwork, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Parse(vec![Diagnostic {
                line: e.line(),
                column: e.column(),
                severity: Severity::Error,
                message: e.to_string(),
            }]))?;
        dsl::parse_json(&value).map_err(Failure::Parse)?
    } else {
        dsl::parse_network(&text).map_err(Failure::Parse)?
    };
    let color = use_color();
    for w in &parsed.warnings {
        report_diagnostic(w, color);
    }
    Ok(parsed.network)
}

fn parse_init(init: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let values: Result<Vec<f64>, _> = init
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect();
    let values =
        values.map_err(|e| Failure::Precondition(format!("bad --init value: {e}")))?;
    if values.len() != dim {
        return Err(Failure::Precondition(format!(
            "--init has {} components, the network has {dim} species",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| **v < 0.0 || !v.is_finite()) {
        return Err(Failure::Precondition(format!(
            "--init components must be finite and nonnegative, got {v}"
        )));
    }
    Ok(values)
}

fn parse_direction(text: &str, dim: usize) -> Result<Direction, Failure> {
    let mut coords = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        let (neg, body) = match tok.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, tok),
        };
        let value = match body.split_once('/') {
            Some((n, d)) => {
                let n = exact::parse_decimal(n.trim())
                    .ok_or_else(|| Failure::Precondition(format!("bad rational `{tok}`")))?;
                let d = exact::parse_decimal(d.trim())
                    .ok_or_else(|| Failure::Precondition(format!("bad rational `{tok}`")))?;
                if d == Rat::from_integer(0.into()) {
                    return Err(Failure::Precondition(format!("zero denominator in `{tok}`")));
                }
                n / d
            }
            None => exact::parse_decimal(body)
                .ok_or_else(|| Failure::Precondition(format!("bad rational `{tok}`")))?,
        };
        coords.push(if neg { -value } else { value });
    }
    if coords.len() != dim {
        return Err(Failure::Precondition(format!(
            "--vector has {} components, the network has {dim} species",
            coords.len()
        )));
    }
    Direction::new(coords).map_err(|e| Failure::Precondition(e.to_string()))
}

fn network_json(net: &ReactionNetwork) -> Value {
    dsl::serialize_json(net)
}

fn partition_json(net: &ReactionNetwork, blocks: &[std::collections::BTreeSet<crn::Complex>]) -> Value {
    Value::Array(
        blocks
            .iter()
            .map(|b| {
                Value::Array(
                    b.iter()
                        .map(|c| Value::String(c.render(net.species())))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn maybe_timestamp(doc: &mut Value, enabled: bool) {
    if enabled {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        doc["timestamp"] = json!(secs);
    }
}

fn classify_one(net: &ReactionNetwork) -> Value {
    let scc = strongly_connected_components(net);
    let wcc = weakly_connected_components(net);
    let (zero_part, remainder) = zero_component_split(net);
    let laws = conservation_laws(net);
    let def = deficiency(net);
    let zero_paths = zero_path_sets(net).ok().map(|sets| {
        let names = |s: &std::collections::BTreeSet<usize>| -> Vec<String> {
            s.iter().map(|&i| net.species()[i].clone()).collect()
        };
        json!({
            "to_zero": names(&sets.to_zero),
            "from_zero": names(&sets.from_zero),
            "relayed": names(&sets.relayed),
        })
    });
    json!({
        "species": net.species(),
        "reactions": net.reaction_count(),
        "dimension": stoichiometric_subspace(net).dim(),
        "order": net.order().as_ref().map(exact::to_f64),
        "net_order": net.net_order().as_ref().map(exact::to_f64),
        "first_order": net.is_first_order(),
        "monomolecular": net.is_monomolecular(),
        "homogeneous": graph::is_homogeneous(net).ok(),
        "weakly_reversible": is_weakly_reversible(net),
        "deficiency": def,
        "deficiency_standard": deficiency_standard(net),
        "deficiency_nonnegative": def >= 0,
        "strongly_connected_components": partition_json(net, &scc.blocks),
        "weakly_connected_components": partition_json(net, &wcc.blocks),
        "zero_component": network_json(&zero_part),
        "remainder": network_json(&remainder),
        "cross_component": network_json(&cross_component_subgraph(net)),
        "highest_order": highest_order_subgraph(net).ok().map(|g| network_json(&g)),
        "conservation": {
            "basis": laws
                .basis
                .vectors
                .iter()
                .map(|v| v.iter().map(exact::render).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "positive_vector_exists": laws.positive_vector_exists,
        },
        "zero_paths": zero_paths,
    })
}

fn classify(common: &Common, jobs: usize) -> Result<Value, Failure> {
    if common.input.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&common.input)
            .map_err(|e| Failure::Precondition(format!("cannot read directory: {e}")))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .is_some_and(|ext| ext == "crn" || ext == "json")
            })
            .collect();
        files.sort();
        let jobs = jobs.max(1).min(files.len().max(1));
        let analyze = |path: &PathBuf| -> (String, Value) {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let report = match load_network(path) {
                Ok(net) => classify_one(&net),
                Err(Failure::Parse(diags)) => json!({
                    "error": diags.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                }),
                Err(Failure::Precondition(m)) | Err(Failure::Verification(m)) => {
                    json!({ "error": [m] })
                }
            };
            (name, report)
        };
        let reports: BTreeMap<String, Value> = if jobs == 1 {
            files.iter().map(analyze).collect()
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = files
                    .chunks(files.len().div_ceil(jobs))
                    .map(|chunk| scope.spawn(move || chunk.iter().map(analyze).collect::<Vec<_>>()))
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("batch thread panicked"))
                    .collect()
            })
        };
        return Ok(json!({ "batch": reports }));
    }
    let net = load_network(&common.input)?;
    Ok(classify_one(&net))
}

/// Certificate for first-order networks, or the reason there is none.
fn certify(net: &ReactionNetwork, jobs: usize) -> Result<Certificate, Failure> {
    match first_order_endotactic_jobs(net, jobs) {
        Ok(analysis) => analysis.certificate.ok_or_else(|| {
            Failure::Precondition("network is not endotactic".to_string())
        }),
        Err(e) => Err(Failure::Precondition(e.to_string())),
    }
}

fn endotactic_verdict(
    net: &ReactionNetwork,
    vector: Option<&str>,
    strong: bool,
    jobs: usize,
) -> Result<EndoVerdict, Failure> {
    if let Some(text) = vector {
        let u = parse_direction(text, net.dim())?;
        let verdict = if strong {
            u_strongly_endotactic(net, &u)
        } else {
            u_endotactic(net, &u)
        };
        return verdict.map_err(|e| Failure::Precondition(e.to_string()));
    }
    let first_order = net.is_integer_embedded() && net.is_first_order() && !net.is_empty();
    if first_order {
        let analysis = first_order_endotactic_jobs(net, jobs)
            .map_err(|e| Failure::Precondition(e.to_string()))?;
        if !strong {
            return Ok(analysis.verdict);
        }
        // Strong endotacticity over all of space: conclusive for first-order
        // networks. With conserved components, any direction orthogonal to
        // the stoichiometric subspace already fails the strong test.
        return match analysis.certificate {
            Some(cert) if cert.strongly_endotactic => Ok(EndoVerdict {
                method: "indicator-scan-strong",
                ..analysis.verdict
            }),
            Some(_) => {
                let laws = conservation_laws(net);
                let u = Direction::new(laws.basis.vectors[0].clone())
                    .expect("conservation basis vectors are nonzero");
                u_strongly_endotactic(net, &u)
                    .map_err(|e| Failure::Precondition(e.to_string()))
            }
            None => Ok(analysis.verdict),
        };
    }
    if strong {
        // The strong question has a complete answer only in dimension one
        // here; otherwise callers must supply a direction.
        if stoichiometric_subspace(net).dim() == 1 {
            return one_dim_strongly_endotactic(net)
                .map_err(|e| Failure::Precondition(e.to_string()));
        }
        return Err(Failure::Precondition(
            "no strong-endotacticity test applies to this network; use --vector".to_string(),
        ));
    }
    sufficient_endotactic(net).map_err(|e| Failure::Precondition(e.to_string()))
}

fn run_endotactic(
    common: &Common,
    vector: Option<&str>,
    strong: bool,
    all_witnesses: bool,
    jobs: usize,
) -> Result<Value, Failure> {
    let net = load_network(&common.input)?;
    let verdict = endotactic_verdict(&net, vector, strong, jobs)?;
    let mut doc = verdict.to_json(net.species());
    if all_witnesses {
        let witnesses = indicator_violations(&net, jobs)
            .map_err(|e| Failure::Precondition(e.to_string()))?;
        doc["all_witnesses"] = Value::Array(
            witnesses
                .iter()
                .map(|(u, r)| {
                    json!({
                        "direction": u.coords().iter().map(exact::render).collect::<Vec<_>>(),
                        "reaction": r.render(net.species()),
                    })
                })
                .collect(),
        );
    }
    Ok(doc)
}

fn run_realize(common: &Common) -> Result<Value, Failure> {
    let net = load_network(&common.input)?;
    let realization =
        monomolecular_realization(&net).map_err(|e| Failure::Precondition(e.to_string()))?;
    let exact_match = is_strong_realization(&net, &realization);
    if !exact_match {
        return Err(Failure::Verification(
            "constructed realization does not match the source fluxes".to_string(),
        ));
    }
    let mut sources = net.sources();
    sources.extend(realization.sources());
    let flux_rows: Vec<Value> = sources
        .iter()
        .map(|s| {
            json!({
                "source": s.render(net.species()),
                "flux": source_flux(&net, s)
                    .iter()
                    .map(exact::render)
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "realization": {
            "dsl": dsl::serialize_dsl(&realization)
                .map_err(|e| Failure::Precondition(e.to_string()))?,
            "network": network_json(&realization),
        },
        "weakly_reversible": is_weakly_reversible(&realization),
        "deficiency": deficiency(&realization),
        "strong_realization": {
            "exact": exact_match,
            "source_fluxes": flux_rows,
        },
    }))
}

fn flux_or_precondition(net: &ReactionNetwork) -> Result<FluxSystem, Failure> {
    flux_system(net).map_err(|e| Failure::Precondition(e.to_string()))
}

fn run_equilibrium(common: &Common, init: &str, force: bool) -> Result<Value, Failure> {
    let net = load_network(&common.input)?;
    let x0 = parse_init(init, net.dim())?;
    let sys = flux_or_precondition(&net)?;
    let cert = match certify(&net, 1) {
        Ok(cert) => Some(cert),
        Err(failure) => {
            if !force {
                return Err(failure);
            }
            eprintln!(
                "warning: running without an endotacticity certificate; \
                 uniqueness and positivity are not guaranteed"
            );
            None
        }
    };
    let mode = match &cert {
        Some(c) => EquilibriumMode::Certified(c),
        None => EquilibriumMode::Forced,
    };
    let result = equilibrium(&sys, &x0, mode).map_err(|e| Failure::Precondition(e.to_string()))?;
    let mut doc = result.to_json();
    doc["x0"] = json!(x0);
    Ok(doc)
}

fn run_simulate(
    common: &Common,
    init: &str,
    t_end: f64,
    dt: f64,
    closed_form: bool,
    out: Option<&Path>,
) -> Result<Option<String>, Failure> {
    let net = load_network(&common.input)?;
    let x0 = parse_init(init, net.dim())?;
    let traj = if closed_form {
        let sys = flux_or_precondition(&net)?;
        let x_star = match certify(&net, 1) {
            Ok(cert) => {
                equilibrium(&sys, &x0, EquilibriumMode::Certified(&cert))
                    .map_err(|e| Failure::Precondition(e.to_string()))?
                    .x_star
            }
            Err(_) => equilibrium(&sys, &x0, EquilibriumMode::Forced)
                .map_err(|e| {
                    Failure::Precondition(format!(
                        "closed form needs an equilibrium point: {e}"
                    ))
                })?
                .x_star,
        };
        simulate_closed_form(&sys, &x_star, &x0, t_end, dt)
    } else {
        simulate(&net, &x0, t_end, dt)
    };
    let traj = traj.map_err(|e| match e {
        dynamics::DynamicsError::NonFiniteState { .. } => Failure::Verification(e.to_string()),
        other => Failure::Precondition(other.to_string()),
    })?;
    let csv = traj.to_csv(net.species());
    match out {
        Some(path) => {
            std::fs::write(path, csv)
                .map_err(|e| Failure::Precondition(format!("cannot write output: {e}")))?;
            Ok(None)
        }
        None => Ok(Some(csv)),
    }
}

fn run_verify_bound(
    common: &Common,
    init: &str,
    t_end: f64,
    dt: f64,
) -> Result<(Value, bool), Failure> {
    let net = load_network(&common.input)?;
    let x0 = parse_init(init, net.dim())?;
    let cert = certify(&net, 1)?;
    let sys = flux_or_precondition(&net)?;
    let eq = equilibrium(&sys, &x0, EquilibriumMode::Certified(&cert))
        .map_err(|e| Failure::Precondition(e.to_string()))?;
    let report = spectral_report(&sys, Some(&cert))
        .map_err(|e| Failure::Precondition(e.to_string()))?;
    let traj =
        simulate(&net, &x0, t_end, dt).map_err(|e| Failure::Precondition(e.to_string()))?;
    let bound = verify_bound(&net, &traj, &eq.x_star, &report)
        .map_err(|e| Failure::Precondition(e.to_string()))?;
    let doc = json!({
        "bound": bound.to_json(),
        "equilibrium": eq.to_json(),
        "spectrum": report.to_json(),
    });
    Ok((doc, bound.pass))
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify { common, jobs } => {
            let mut doc = classify(common, *jobs)?;
            maybe_timestamp(&mut doc, common.timestamp);
            print!("{}", jsonfmt::render(&doc));
            Ok(())
        }
        Command::Endotactic {
            common,
            vector,
            strong,
            all_witnesses,
            jobs,
        } => {
            let mut doc =
                run_endotactic(common, vector.as_deref(), *strong, *all_witnesses, *jobs)?;
            maybe_timestamp(&mut doc, common.timestamp);
            print!("{}", jsonfmt::render(&doc));
            Ok(())
        }
        Command::Realize { common } => {
            let mut doc = run_realize(common)?;
            maybe_timestamp(&mut doc, common.timestamp);
            print!("{}", jsonfmt::render(&doc));
            Ok(())
        }
        Command::Equilibrium {
            common,
            init,
            force,
        } => {
            let mut doc = run_equilibrium(common, init, *force)?;
            maybe_timestamp(&mut doc, common.timestamp);
            print!("{}", jsonfmt::render(&doc));
            Ok(())
        }
        Command::Simulate {
            common,
            init,
            t_end,
            dt,
            closed_form,
            out,
        } => {
            if let Some(csv) =
                run_simulate(common, init, *t_end, *dt, *closed_form, out.as_deref())?
            {
                print!("{csv}");
            }
            Ok(())
        }
        Command::VerifyBound {
            common,
            init,
            t_end,
            dt,
        } => {
            let (mut doc, pass) = run_verify_bound(common, init, *t_end, *dt)?;
            maybe_timestamp(&mut doc, common.timestamp);
            print!("{}", jsonfmt::render(&doc));
            if !pass {
                return Err(Failure::Verification(
                    "convergence bound verification failed".to_string(),
                ));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let color = use_color();
            match &failure {
                Failure::Parse(diags) => {
                    for d in diags {
                        report_diagnostic(d, color);
                    }
                }
                Failure::Precondition(msg) | Failure::Verification(msg) => {
                    if color {
                        eprintln!("\x1b[31merror\x1b[0m: {msg}");
                    } else {
                        eprintln!("error: {msg}");
                    }
                }
            }
            ExitCode::from(failure.code())
        }
    }
}
