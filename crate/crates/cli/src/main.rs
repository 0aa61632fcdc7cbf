use clap::{Args, Parser, Subcommand};
use crncdr::acr::{acr_hyperplane, acr_sampling, classify, SamplingOptions};
use crncdr::decomposition::finest_independent_decomposition;
use crncdr::doa::{describe_partition, doa_search, format_vector, realize_witness, DoaOptions, DoaOutcome};
use crncdr::injectivity::{summarize, Verdict};
use crncdr::io::{from_json, parse, serialize, to_json, NetworkDocument};
use crncdr::models::{build_model, model_notes, ModelParams, MODEL_NAMES};
use crncdr::rational::{format_rational, parse_rational, to_f64};
use crncdr::report::analyze;
use crncdr::sim::{integrate, IntegrateOptions, NumericSystem};
use crncdr::transforms::{beccs_wr_transform, kinetic_deficiency};
use crncdr::{PowerLawKinetics, Q};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "crncdr", version, about = "Power-law reaction network analysis for carbon dioxide removal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Network numbers, structural flags and properties.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sign test of the injectivity determinant. Exit 1 unless injective.
    Injectivity {
        file: PathBuf,
        #[command(flatten)]
        params: ParamArg,
    },
    /// Deficiency-one search for a multistationarity witness. Exit 1 when none exists.
    Doa {
        file: PathBuf,
        /// Kinetic order values, e.g. p1=4,p2=2,q1=3,q2=2
        #[arg(long)]
        orders: String,
        /// Turn the witness into rate constants and two equilibria.
        #[arg(long)]
        realize: bool,
        /// Read the terminal-class condition as one sum over all terminal classes.
        #[arg(long)]
        union: bool,
    },
    /// Absolute concentration robustness. Exit 1 when no species shows it.
    Acr {
        file: PathBuf,
        /// Also sample N random starts and compare the equilibria reached.
        #[arg(long, value_name = "N")]
        sample: Option<usize>,
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        #[command(flatten)]
        params: ParamArg,
    },
    /// Finest independent decomposition of the reaction set.
    Fid { file: PathBuf },
    /// Integrate the mass balance ODE.
    Simulate {
        file: PathBuf,
        #[arg(long, value_name = "V1,V2,...")]
        x0: String,
        #[arg(long)]
        tmax: f64,
        #[arg(long, value_name = "OUT")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArg,
    },
    /// Build a built-in model.
    Model {
        name: String,
        /// Write the model to FILE (.json for JSON, anything else for the text format).
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArg,
    },
    /// Network transforms.
    Transform {
        file: PathBuf,
        /// Weakly reversible transform of a BECCS-shaped network.
        #[arg(long, required = true)]
        beccs_wr: bool,
    },
}

#[derive(Args)]
struct ParamArg {
    /// Symbol bindings, e.g. k1=1,p1=1/2
    #[arg(long, value_name = "K=V,...")]
    params: Option<String>,
}

/// Input errors map to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(String, bool), InputError>;

fn bindings(text: Option<&str>) -> Result<BTreeMap<String, Q>, InputError> {
    let mut out = BTreeMap::new();
    for item in text.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| InputError(format!("expected name=value, got '{item}'")))?;
        let v = parse_rational(v.trim()).ok_or_else(|| InputError(format!("'{}' is not a rational number", v.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn read_document(path: &Path) -> Result<NetworkDocument, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let doc = if is_json { from_json(&text) } else { parse(&text) };
    doc.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load(path: &Path, params: &ParamArg) -> Result<PowerLawKinetics, InputError> {
    let kin = read_document(path)?.to_kinetics()?;
    let extra = bindings(params.params.as_deref())?;
    Ok(if extra.is_empty() { kin } else { kin.with_bindings(&extra)? })
}

fn rows(out: &mut String, rows: &[(String, String)]) {
    let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    for (a, b) in rows {
        out.push_str(&format!("{a:<w$}  {b}\n"));
    }
}

fn floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.10e}")).collect();
    format!("({})", parts.join(", "))
}

fn cmd_analyze(file: &Path, json: bool) -> Outcome {
    let kin = load(file, &ParamArg { params: None })?;
    let report = analyze(&kin)?;
    Ok((if json { report.to_json() + "\n" } else { report.to_text() }, true))
}

fn cmd_injectivity(file: &Path, params: &ParamArg) -> Outcome {
    let kin = load(file, params)?;
    let a = summarize(&kin)?;
    let mut out = String::new();
    rows(
        &mut out,
        &[
            ("Network".into(), kin.network().name().to_string()),
            ("Determinant terms".into(), a.num_terms.to_string()),
            ("Verdict".into(), format!("{:?}", a.verdict.verdict)),
        ],
    );
    out.push_str(&format!("\ndet M* = {}\n", a.determinant));
    if !a.verdict.terms.is_empty() {
        out.push_str("\nTerms against the majority sign or unresolved:\n");
        for t in &a.verdict.terms {
            out.push_str(&format!("  {:?}  {} * {}\n", t.sign, t.coefficient, t.monomial));
        }
    }
    Ok((out, a.verdict.verdict == Verdict::Injective))
}

fn cmd_doa(file: &Path, orders: &str, realize: bool, union: bool) -> Outcome {
    let base = read_document(file)?.to_kinetics()?;
    let kin = base.with_bindings(&bindings(Some(orders))?)?;
    let net = kin.network();
    let outcome = doa_search(&kin, DoaOptions { union_form: union })?;
    let DoaOutcome::Multistationary(w) = outcome else {
        return Ok((format!("Network {}: no multistationarity witness\n", net.name()), false));
    };
    let names = |v: &[Q], labels: Vec<String>| -> String {
        labels.iter().zip(v).filter(|(_, x)| **x != Q::from_integer(0.into())).map(|(l, x)| format!("{l}: {}", format_rational(x))).collect::<Vec<_>>().join(", ")
    };
    let complexes: Vec<String> = (0..net.n()).map(|c| net.complex_name(c)).collect();
    let [u, m, l] = describe_partition(net, &w.partition);
    let mut out = format!("Network {}: multistationary (witness found)\n\n", net.name());
    rows(
        &mut out,
        &[
            ("h".into(), names(&w.h, complexes)),
            ("U".into(), u.join(", ")),
            ("M".into(), m.join(", ")),
            ("L".into(), l.join(", ")),
            ("mu".into(), format_vector(&w.mu)),
        ],
    );
    out.push_str("\nRelations\n");
    for r in &w.system.relations {
        out.push_str(&format!("  {}\n", r.text));
    }
    if realize {
        let r = realize_witness(&kin, &w.mu)?;
        out.push_str("\nRealization\n");
        let k: Vec<String> = net.reactions().iter().zip(&r.rate_constants).map(|(rx, k)| format!("{}={:.10e}", rx.label, to_f64(k))).collect();
        rows(
            &mut out,
            &[
                ("rate constants".into(), k.join(", ")),
                ("x1".into(), floats(&r.x1)),
                ("x2".into(), floats(&r.x2)),
                ("residuals".into(), format!("{:.3e}, {:.3e}", r.residual1, r.residual2)),
                ("total mismatch".into(), format!("{:.3e}", r.total_mismatch)),
                ("separation".into(), format!("{:.6e}", r.separation)),
            ],
        );
    }
    Ok((out, true))
}

fn cmd_acr(file: &Path, sample: Option<usize>, seed: Option<u64>, params: &ParamArg) -> Outcome {
    let kin = load(file, params)?;
    let mut out = format!("Network {}\n\n", kin.network().name());
    let mut any = false;
    let mut table = Vec::new();
    if let Ok(c) = classify(&kin) {
        table.push(("System class".to_string(), format!("{:?}", c.kind)));
    }
    match acr_hyperplane(&kin) {
        Ok(h) => {
            any |= !h.species.is_empty();
            let s = if h.species.is_empty() { "none".to_string() } else { h.species.join(", ") };
            table.push(("Hyperplane criterion".into(), format!("{s} (conclusive for PLP systems)")));
        }
        Err(e) => table.push(("Hyperplane criterion".into(), format!("not applicable: {e}"))),
    }
    if let Some(n) = sample {
        let mut opts = SamplingOptions { trials: n, ..SamplingOptions::default() };
        if let Some(s) = seed {
            opts.seed = s;
        }
        let res = acr_sampling(&kin, &opts)?;
        any |= !res.acr_species.is_empty();
        let s = if res.acr_species.is_empty() { "none".to_string() } else { res.acr_species.join(", ") };
        table.push(("Sampled ACR species".into(), s));
        table.push(("Seed".into(), res.seed.to_string()));
        table.push(("Equilibria found".into(), format!("{} of {n}", res.equilibria.len())));
        table.push(("Relative spread".into(), floats(&res.spread)));
    }
    rows(&mut out, &table);
    Ok((out, any))
}

fn cmd_fid(file: &Path) -> Outcome {
    let kin = load(file, &ParamArg { params: None })?;
    let net = kin.network();
    let d = finest_independent_decomposition(net);
    let mut out = format!("Network {}: {} block(s), independent: {}\n\n", net.name(), d.blocks.len(), if d.independent { "yes" } else { "no" });
    let table: Vec<(String, String)> = d
        .blocks
        .iter()
        .zip(&d.subspaces)
        .enumerate()
        .map(|(i, (b, s))| {
            let labels: Vec<&str> = b.iter().map(|&r| net.reactions()[r].label.as_str()).collect();
            (format!("N{} (rank {})", i + 1, s.dimension()), labels.join(", "))
        })
        .collect();
    rows(&mut out, &table);
    Ok((out, true))
}

fn cmd_simulate(file: &Path, x0: &str, tmax: f64, csv: Option<&Path>, params: &ParamArg) -> Outcome {
    let kin = load(file, params)?;
    let sys = NumericSystem::from_kinetics(&kin)?;
    let x0: Vec<f64> = x0
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| InputError(format!("'{}' is not a number", s.trim()))))
        .collect::<Result<_, _>>()?;
    let tr = integrate(&sys, &x0, tmax, &IntegrateOptions::default())?;
    if let Some(path) = csv {
        std::fs::write(path, tr.to_csv(&sys.species)).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    let mut out = String::new();
    let mut table: Vec<(String, String)> = vec![
        ("Network".into(), kin.network().name().to_string()),
        ("Steps".into(), (tr.t.len() - 1).to_string()),
        ("t".into(), format!("{tmax}")),
    ];
    for (s, v) in sys.species.iter().zip(tr.last()) {
        table.push((s.clone(), format!("{v:.10e}")));
    }
    table.push(("Residual".into(), format!("{:.3e}", sys.residual(tr.last()))));
    if !sys.conservation.is_empty() {
        table.push(("Max total drift".into(), format!("{:.3e}", tr.max_total_drift())));
    }
    rows(&mut out, &table);
    Ok((out, true))
}

fn cmd_model(name: &str, emit: Option<&Path>, params: &ParamArg) -> Outcome {
    if !MODEL_NAMES.contains(&name) {
        return Err(InputError(format!("unknown model '{name}' (known: {})", MODEL_NAMES.join(", "))));
    }
    let p = ModelParams { bindings: bindings(params.params.as_deref())?, operating_point: None };
    let kin = build_model(name, &p)?;
    let doc = NetworkDocument::from_kinetics(&kin);
    match emit {
        Some(path) => {
            let text = if path.extension().is_some_and(|e| e == "json") { to_json(&doc) + "\n" } else { serialize(&doc) };
            std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            let net = kin.network();
            Ok((format!("wrote {} ({}: {} species, {} reactions)\n", path.display(), name, net.m(), net.r()), true))
        }
        None => {
            let mut out = serialize(&doc);
            for n in model_notes(name) {
                out.push_str(&format!("# note: {n}\n"));
            }
            Ok((out, true))
        }
    }
}

fn cmd_transform(file: &Path) -> Outcome {
    let kin = load(file, &ParamArg { params: None })?;
    let wr = beccs_wr_transform(&kin)?;
    let mut out = String::new();
    if let Ok(d) = kinetic_deficiency(&wr) {
        out.push_str(&format!("# kinetic deficiency {d}\n"));
    }
    out.push_str(&serialize(&NetworkDocument::from_kinetics(&wr)));
    Ok((out, true))
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(v) = std::env::var("CRNCDR_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| InputError(format!("CRNCDR_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Analyze { file, json } => cmd_analyze(&file, json),
        Command::Injectivity { file, params } => cmd_injectivity(&file, &params),
        Command::Doa { file, orders, realize, union } => cmd_doa(&file, &orders, realize, union),
        Command::Acr { file, sample, seed, params } => cmd_acr(&file, sample, seed, &params),
        Command::Fid { file } => cmd_fid(&file),
        Command::Simulate { file, x0, tmax, csv, params } => cmd_simulate(&file, &x0, tmax, csv.as_deref(), &params),
        Command::Model { name, emit, params } => cmd_model(&name, emit.as_deref(), &params),
        Command::Transform { file, beccs_wr: _ } => cmd_transform(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, positive)) => {
            print!("{text}");
            if positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
