//! Command-line front end. `run` parses arguments, executes one command and
//! returns the process exit code; output goes to `--out` or standard output,
//! diagnostics to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use torus_lefschetz::json as tj;
use torus_lefschetz::lattice::{self, Cokernel};
use torus_lefschetz::oracle::{self, SearchBudget};
use torus_lefschetz::semiconjugacy::ClassCount;
use torus_lefschetz::trace::{self, ActionSide, TheoremVerdict};
use torus_lefschetz::{hochschild, DEFAULT_SUPPORT_BOUND, semiconjugacy, Endomorphism, Error, GroupElement, TensorChain1, TrivialityVerdict};

mod text;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_THEOREM_FALSE: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

/// Library operations reached by each command. Every operation appears
/// under exactly one command.
pub const COMMAND_OPERATIONS: &[(&str, &[&str])] = &[
    ("classes", &["class_count", "cokernel_reps", "class_id"]),
    ("same-class", &["same_class", "solve_affine"]),
    ("kernel", &["semicentralizer", "smith_normal_form"]),
    ("cycle-check", &["is_cycle"]),
    ("d1", &["d1", "apply_phi", "ring_mul"]),
    ("d2", &["d2"]),
    ("reduce", &["reduce_u_power"]),
    ("invariant", &["homology_invariant"]),
    ("trivial", &["is_trivial", "decompose_components"]),
    ("trace", &["one_parameter_trace", "validate_cellular"]),
    ("analyze", &["analyze", "det_slice"]),
    ("verify", &["theorem_verdict"]),
    ("oracle-certify", &["brute_certificate"]),
    ("oracle-class", &["brute_same_class"]),
    ("examples", &["fixed_point_free_example", "generate_valid_data"]),
];

#[derive(Parser, Debug)]
#[command(name = "torus-lefschetz", version, about = "One-parameter fixed point invariants of torus homotopies")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Matrix [φ] as JSON, row-major, e.g. '[[1,1],[0,1]]'
    #[arg(long, global = true)]
    pub phi: Option<String>,
    /// Input JSON file
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file (standard output if absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest exponent spread of a certificate beyond the cycle's hull
    #[arg(long, global = true, default_value_t = DEFAULT_SUPPORT_BOUND)]
    pub support_bound: u64,
    /// Side of the group action used to read off the trace
    #[arg(long, global = true, value_enum, default_value_t = Sign::Right)]
    pub sign: Sign,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count semiconjugacy classes, list representatives, classify elements
    Classes {
        /// Elements "m,n" to classify
        #[arg(long = "g", allow_hyphen_values = true)]
        elements: Vec<String>,
    },
    /// Decide whether two elements are semiconjugate
    SameClass {
        #[arg(long, allow_hyphen_values = true)]
        g1: String,
        #[arg(long, allow_hyphen_values = true)]
        g2: String,
    },
    /// Semicentralizer ker([φ]−I) and the Smith form of [φ]−I
    Kernel,
    /// Test whether a 1-chain is a d1-cycle
    CycleCheck,
    /// Apply d1 to a 1-chain
    D1,
    /// Apply d2 to a 2-chain
    D2,
    /// Reduce u^k ⊗ u^m v^n to k·(u ⊗ u^{m+k−1} v^n) with a certificate
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        k: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        m: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        n: BigInt,
    },
    /// Homology invariant of a cycle
    Invariant,
    /// Per-class triviality verdicts of a cycle
    Trivial,
    /// One-parameter trace R of cellular data
    Trace,
    /// Full report: components, N, L, alpha and the theorem check
    Analyze,
    /// Theorem verdict only; exit code 3 if false, 4 if inconclusive
    Verify,
    /// Brute-force boundary certificate in the window [−B,B]²
    OracleCertify {
        #[arg(long, default_value_t = 3)]
        window: u32,
    },
    /// Brute-force conjugator search in the window [−B,B]²
    OracleClass {
        #[arg(long, allow_hyphen_values = true)]
        g1: String,
        #[arg(long, allow_hyphen_values = true)]
        g2: String,
        #[arg(long, default_value_t = 20)]
        window: u32,
    },
    /// Write the example corpus to a directory
    Examples {
        #[arg(long)]
        dir: PathBuf,
        /// Seed of the generated shear data set
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// A finished command: the JSON document, its text rendering and the exit code.
struct Outcome {
    doc: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value, text: String) -> Self {
        Outcome { doc, text, code: EXIT_OK }
    }
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => match emit(&cli.global, &outcome) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                EXIT_USAGE
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn emit(global: &GlobalArgs, outcome: &Outcome) -> anyhow::Result<()> {
    let body = match global.format {
        Format::Json => tj::to_canonical_string(&outcome.doc),
        Format::Text => outcome.text.clone(),
    };
    match &global.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn phi_arg(global: &GlobalArgs) -> anyhow::Result<Endomorphism> {
    let s = global.phi.as_deref().ok_or_else(|| usage("--phi is required"))?;
    let v: Value = serde_json::from_str(s).map_err(|e| usage(format!("--phi is not JSON: {e}")))?;
    tj::endomorphism_from_json(&v).map_err(|e| usage(format!("--phi: {e}")))
}

fn read_input(global: &GlobalArgs) -> anyhow::Result<Value> {
    let path = global.input.as_ref().ok_or_else(|| usage("--in is required"))?;
    let text = fs::read_to_string(path).map_err(|e| anyhow!(Error::Malformed(format!("{}: {e}", path.display()))))?;
    Ok(tj::parse(&text)?)
}

fn element_arg(s: &str) -> anyhow::Result<GroupElement> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [m, n] => {
            let m: BigInt = m.parse().map_err(|_| usage(format!("bad exponent in \"{s}\"")))?;
            let n: BigInt = n.parse().map_err(|_| usage(format!("bad exponent in \"{s}\"")))?;
            Ok(GroupElement::new(m, n))
        }
        _ => Err(usage(format!("expected \"m,n\", got \"{s}\""))),
    }
}

fn side(sign: Sign) -> ActionSide {
    match sign {
        Sign::Right => ActionSide::Right,
        Sign::Left => ActionSide::Left,
    }
}

/// The cycle to analyze: a cellular document, a `{"R": ...}` object or a bare
/// 1-chain; φ from `--phi` or the document.
fn trace_input(global: &GlobalArgs) -> anyhow::Result<(Endomorphism, TensorChain1)> {
    let v = read_input(global)?;
    let phi_from_doc = v.get("phi").map(tj::endomorphism_from_json).transpose()?;
    let phi = match (&global.phi, phi_from_doc) {
        (Some(_), Some(doc_phi)) => {
            let p = phi_arg(global)?;
            if p != doc_phi {
                return Err(usage("--phi disagrees with the document's phi"));
            }
            p
        }
        (Some(_), None) => phi_arg(global)?,
        (None, Some(p)) => p,
        (None, None) => return Err(usage("--phi is required")),
    };
    let r = if let Some(cell) = v.get("cellular") {
        let data = tj::cellular_from_json(cell)?;
        trace::one_parameter_trace(&phi, &data, side(global.sign)).map_err(invalid_cellular)?
    } else if let Some(r) = v.get("R") {
        tj::chain1_from_json(r)?
    } else {
        tj::chain1_from_json(&v)?
    };
    Ok((phi, r))
}

fn invalid_cellular(e: Error) -> anyhow::Error {
    if let Error::InvalidCellular(vs) = &e {
        for v in vs {
            eprintln!("violation: {v}");
        }
    }
    anyhow!(e)
}

fn theorem_code(t: TheoremVerdict) -> u8 {
    match t {
        TheoremVerdict::Holds => EXIT_OK,
        TheoremVerdict::Fails => EXIT_THEOREM_FALSE,
        TheoremVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Classes { elements } => {
            let phi = phi_arg(g)?;
            let a = phi.minus_identity();
            let count = match semiconjugacy::class_count(&phi) {
                ClassCount::Finite(n) => tj::int_to_json(&n),
                ClassCount::Infinite => json!("infinite"),
            };
            let mut doc = json!({"det": tj::int_to_json(&a.det()), "count": count});
            match lattice::cokernel_reps(&a) {
                Cokernel::Finite(reps) => {
                    doc["representatives"] = Value::Array(reps.iter().map(tj::vec2_to_json).collect());
                }
                Cokernel::Infinite { invariant_factors: (d1, d2) } => {
                    doc["invariant_factors"] = json!([tj::int_to_json(&d1), tj::int_to_json(&d2)]);
                }
            }
            let mut ids = Vec::new();
            for e in elements {
                let x = element_arg(e)?;
                let c = semiconjugacy::class_id(&phi, &x);
                ids.push(json!({"g": tj::group_to_json(&x), "class": tj::group_to_json(&c.rep)}));
            }
            if !ids.is_empty() {
                doc["class_ids"] = Value::Array(ids);
            }
            let text = text::classes(&doc);
            Ok(Outcome::ok(doc, text))
        }
        Command::SameClass { g1, g2 } => {
            let phi = phi_arg(g)?;
            let (x1, x2) = (element_arg(g1)?, element_arg(g2)?);
            let w = (&x2 * &x1.inverse()).exponents();
            let doc = match semiconjugacy::same_class(&phi, &x1, &x2) {
                Some(z) => {
                    let sol = lattice::solve_affine(&phi.minus_identity(), &w).expect("solvable");
                    json!({
                        "same_class": true,
                        "witness": tj::vec2_to_json(&z),
                        "kernel": sol.kernel.basis().iter().map(tj::vec2_to_json).collect::<Vec<_>>(),
                    })
                }
                None => json!({"same_class": false, "witness": null}),
            };
            let text = text::same_class(&doc);
            Ok(Outcome::ok(doc, text))
        }
        Command::Kernel => {
            let phi = phi_arg(g)?;
            let lat = semiconjugacy::semicentralizer(&phi);
            let s = lattice::smith_normal_form(&phi.minus_identity());
            let doc = json!({
                "rank": lat.rank(),
                "basis": lat.basis().iter().map(tj::vec2_to_json).collect::<Vec<_>>(),
                "smith": {"U": tj::matrix_to_json(&s.u), "S": tj::matrix_to_json(&s.s), "V": tj::matrix_to_json(&s.v)},
            });
            let text = text::kernel(&doc);
            Ok(Outcome::ok(doc, text))
        }
        Command::CycleCheck => {
            let phi = phi_arg(g)?;
            let x = tj::chain1_from_json(&read_input(g)?)?;
            let b = hochschild::d1(&phi, &x);
            let doc = json!({"is_cycle": hochschild::is_cycle(&phi, &x), "d1": tj::ring_to_json(&b)});
            let text = format!("is_cycle: {}\nd1 = {}\n", b.is_zero(), b);
            Ok(Outcome::ok(doc, text))
        }
        Command::D1 => {
            let phi = phi_arg(g)?;
            let x = tj::chain1_from_json(&read_input(g)?)?;
            let b = hochschild::d1(&phi, &x);
            let text = format!("{b}\n");
            Ok(Outcome::ok(tj::ring_to_json(&b), text))
        }
        Command::D2 => {
            let phi = phi_arg(g)?;
            let y = tj::chain2_from_json(&read_input(g)?)?;
            let x = hochschild::d2(&phi, &y);
            let text = text::chain1(&x);
            Ok(Outcome::ok(tj::chain1_to_json(&x), text))
        }
        Command::Reduce { k, m, n } => {
            let phi = phi_arg(g)?;
            let r = hochschild::reduce_u_power(&phi, k, m, n)?;
            let doc = json!({"reduced": tj::chain1_to_json(&r.reduced), "certificate": tj::chain2_to_json(&r.certificate)});
            let text = format!("reduced: {}certificate: {}", text::chain1(&r.reduced), text::chain2(&r.certificate));
            Ok(Outcome::ok(doc, text))
        }
        Command::Invariant => {
            let phi = phi_arg(g)?;
            let x = tj::chain1_from_json(&read_input(g)?)?;
            let inv = hochschild::homology_invariant(&phi, &x)?;
            let text = format!("({}, {})\n", inv[0], inv[1]);
            Ok(Outcome::ok(tj::vec2_to_json(&inv), text))
        }
        Command::Trivial => {
            let phi = phi_arg(g)?;
            let x = tj::chain1_from_json(&read_input(g)?)?;
            if !hochschild::is_cycle(&phi, &x) {
                return Err(anyhow!(Error::NotACycle(hochschild::d1(&phi, &x).to_string())));
            }
            let mut comps = Vec::new();
            let mut unknown = false;
            for (class, c) in hochschild::decompose_components(&phi, &x) {
                let v = hochschild::is_trivial(&phi, &c, g.support_bound)?;
                unknown |= matches!(v, TrivialityVerdict::Unknown(_));
                let mut m = tj::verdict_fields(&v);
                m.insert("class".into(), tj::group_to_json(&class.rep));
                m.insert("component".into(), tj::chain1_to_json(&c));
                comps.push(Value::Object(m));
            }
            let doc = json!({"components": comps});
            let text = text::components(&doc);
            let code = if unknown { EXIT_INCONCLUSIVE } else { EXIT_OK };
            Ok(Outcome { doc, text, code })
        }
        Command::Trace => {
            let v = read_input(g)?;
            let (doc_phi, data) = tj::document_from_json(&v)?;
            let phi = match &g.phi {
                Some(_) => phi_arg(g)?,
                None => doc_phi,
            };
            let r = trace::one_parameter_trace(&phi, &data, side(g.sign)).map_err(invalid_cellular)?;
            let doc = json!({"phi": tj::matrix_to_json(phi.matrix()), "R": tj::chain1_to_json(&r)});
            let text = text::chain1(&r);
            Ok(Outcome::ok(doc, text))
        }
        Command::Analyze => {
            let (phi, r) = trace_input(g)?;
            let report = trace::analyze(&phi, &r, g.support_bound)?;
            let mut doc = tj::report_to_json(&report);
            doc["det"] = tj::int_to_json(&trace::det_slice(&phi));
            let text = text::report(&doc);
            Ok(Outcome { doc, text, code: theorem_code(report.theorem) })
        }
        Command::Verify => {
            let (phi, r) = trace_input(g)?;
            let report = trace::analyze(&phi, &r, g.support_bound)?;
            let theorem = match report.theorem {
                TheoremVerdict::Inconclusive => TheoremVerdict::Inconclusive,
                _ => trace::theorem_verdict(report.nielsen, &report.lefschetz, report.alpha.as_ref()),
            };
            let doc = json!({
                "N": report.nielsen,
                "L": tj::vec2_to_json(&report.lefschetz),
                "alpha": report.alpha.as_ref().map(tj::vec2_to_json).unwrap_or(Value::Null),
                "theorem_holds": tj::theorem_to_json(theorem),
            });
            let text = text::report(&doc);
            Ok(Outcome { doc, text, code: theorem_code(theorem) })
        }
        Command::OracleCertify { window } => {
            let phi = phi_arg(g)?;
            let x = tj::chain1_from_json(&read_input(g)?)?;
            let cert = oracle::brute_certificate(&phi, &x, &SearchBudget::window(*window))?;
            let doc = json!({"window": window, "certificate": cert.as_ref().map(tj::chain2_to_json).unwrap_or(Value::Null)});
            let text = match &cert {
                Some(c) => format!("certificate: {}", text::chain2(c)),
                None => format!("no certificate in window {window}\n"),
            };
            Ok(Outcome::ok(doc, text))
        }
        Command::OracleClass { g1, g2, window } => {
            let phi = phi_arg(g)?;
            let (x1, x2) = (element_arg(g1)?, element_arg(g2)?);
            let w = oracle::brute_same_class(&phi, &x1, &x2, &SearchBudget::window(*window));
            let doc = json!({"window": window, "witness": w.as_ref().map(tj::vec2_to_json).unwrap_or(Value::Null)});
            let text = text::same_class(&json!({"same_class": w.is_some(), "witness": doc["witness"]}));
            Ok(Outcome::ok(doc, text))
        }
        Command::Examples { dir, seed } => {
            let written = write_examples(dir, *seed)?;
            let doc = json!({"written": written});
            let text = written.iter().map(|f| format!("{f}\n")).collect();
            Ok(Outcome::ok(doc, text))
        }
    }
}

/// File names of the corpus written by `examples`.
pub fn example_files() -> Vec<&'static str> {
    vec!["fixed_point_free.json", "generated_shear.json", "scaling.json", "shear.json"]
}

fn write_examples(dir: &Path, seed: u64) -> anyhow::Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut docs: Vec<(String, Value)> = trace::corpus()
        .into_iter()
        .map(|(name, phi, data)| (format!("{name}.json"), tj::document_to_json(&phi, &data)))
        .collect();
    let shear = Endomorphism::from_rows(1, 1, 0, 1);
    let data = oracle::generate_valid_data(&shear, &SearchBudget::default(), seed)?;
    docs.push(("generated_shear.json".into(), tj::document_to_json(&shear, &data)));
    docs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut written = Vec::new();
    for (name, doc) in docs {
        let path = dir.join(&name);
        fs::write(&path, tj::to_canonical_string(&doc)).with_context(|| format!("writing {}", path.display()))?;
        written.push(name);
    }
    Ok(written)
}
