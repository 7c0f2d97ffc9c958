//! Command-line front end. [`run`] executes one invocation and returns its
//! exit code and output, so that it can be driven in-process.
//!
//! Exit codes: 0 holds / valid / verified, 1 countermodel or solution
//! found, 2 usage or input error, 3 budget exhausted.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use mvmodal::algebra::{ChainAlgebra, Rational};
use mvmodal::experiments::{self, ExperimentError};
use mvmodal::kripke::{self, KripkeError, KripkeModel, ModelFile, SearchOptions, Verdict};
use mvmodal::lukdecide::{self, DecideOptions, EncodingMode, LukError, PropVerdict, SolveOptions};
use mvmodal::pcp::{self, IndexSequence, PcpError, PcpInstance, SolveOutcome};
use mvmodal::syntax::{parse, Formula, Sequent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "mvmodal", version, about = "Many-valued modal logic workbench")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula at a world of a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
    },
    /// Decide local consequence in the minimal modal Łukasiewicz logic.
    Decide {
        /// Only `kluk` is supported.
        #[arg(long, default_value = "kluk")]
        logic: String,
        #[arg(long)]
        sequent: PathBuf,
        /// Also write the propositional encoding as SMT-LIB 2.
        #[arg(long)]
        emit_smt: Option<PathBuf>,
        #[arg(long, default_value_t = 200_000)]
        node_budget: u64,
        /// Encode both sides of every piecewise-linear node.
        #[arg(long)]
        full_encoding: bool,
    },
    /// Decide a modality-free Łukasiewicz sequent.
    PropDecide {
        #[arg(long)]
        sequent: PathBuf,
        #[arg(long, default_value_t = 200_000)]
        node_budget: u64,
        #[arg(long)]
        full_encoding: bool,
    },
    /// Post correspondence reduction artifacts.
    Pcp {
        #[command(subcommand)]
        command: PcpCommand,
    },
    /// Bounded countermodel search over MV_n.
    Search {
        #[arg(long)]
        sequent: PathBuf,
        #[arg(long, default_value = "mv:3")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        max_worlds: usize,
        #[arg(long)]
        transitive: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Separating-lemma and Δ checks.
    Experiments {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
    /// Write the SMT-LIB 2 encoding of a sequent's unfolding.
    EmitSmt {
        #[arg(long)]
        sequent: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum PcpCommand {
    /// Print the reduction sequent.
    Encode {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Search for a solution of bounded length.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Build the certified countermodel from a solution.
    Countermodel {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: String,
        #[arg(long, default_value = "luk")]
        algebra: String,
        /// Write the model file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a countermodel file against an instance and solution.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: String,
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Check the ω-chain recurrence model.
    OmegaChain {
        #[arg(long, default_value = "1/10")]
        alpha: String,
        #[arg(long, default_value_t = 50)]
        depth: usize,
    },
    /// Bounded transitive MV_n search on the separating sequent.
    SeparatingSearch {
        #[arg(long, default_value_t = 4)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        worlds: usize,
    },
    /// Pointwise Δ deduction theorem and SAT/validity bridge.
    DeltaDt {
        #[arg(long, default_value_t = 3)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        worlds: usize,
    },
    /// Local satisfiability search for the formula in a file.
    Sat {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, default_value = "mv:3")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        worlds: usize,
        #[arg(long)]
        transitive: bool,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An error carrying its exit code.
#[derive(Debug)]
struct Exit(i32, anyhow::Error);

macro_rules! exit_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Exit {
            fn from(e: $t) -> Self {
                let e = anyhow::Error::from(e);
                Exit(exit_code(&e), e)
            }
        }
    )*};
}

exit_from!(anyhow::Error, LukError, KripkeError, PcpError, ExperimentError);

fn exit_code(e: &anyhow::Error) -> i32 {
    let budget = e.chain().any(|c| {
        matches!(c.downcast_ref(), Some(LukError::ResourceBudgetExceeded(_)))
            || matches!(c.downcast_ref(), Some(KripkeError::BudgetExceeded(_)))
            || matches!(
                c.downcast_ref(),
                Some(ExperimentError::Kripke(KripkeError::BudgetExceeded(_)))
            )
    });
    if budget {
        EXIT_BUDGET
    } else {
        EXIT_USAGE
    }
}

struct Printer {
    format: Format,
    out: String,
}

impl Printer {
    fn emit(&mut self, human: impl AsRef<str>, json: Value) {
        match self.format {
            Format::Human => {
                self.out.push_str(human.as_ref());
                if !human.as_ref().ends_with('\n') {
                    self.out.push('\n');
                }
            }
            Format::Json => {
                self.out
                    .push_str(&serde_json::to_string_pretty(&json).expect("json values serialise"));
                self.out.push('\n');
            }
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut p = Printer {
        format: cli.format,
        out: String::new(),
    };
    match dispatch(cli.command, &mut p) {
        Ok(code) => Outcome {
            code,
            stdout: p.out,
            stderr: String::new(),
        },
        Err(Exit(code, e)) => Outcome {
            code,
            stdout: p.out,
            stderr: format!("error: {e:#}\n"),
        },
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequentFile {
    #[serde(default)]
    premises: Vec<String>,
    conclusion: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_sequent(path: &Path) -> Result<Sequent> {
    let file: SequentFile =
        serde_json::from_str(&read(path)?).with_context(|| format!("bad sequent file {}", path.display()))?;
    let ps: Vec<&str> = file.premises.iter().map(String::as_str).collect();
    Sequent::parse(&ps, &file.conclusion).with_context(|| format!("in {}", path.display()))
}

fn load_instance(path: &Path) -> Result<PcpInstance> {
    Ok(PcpInstance::from_json(&read(path)?)?)
}

fn load_model(path: &Path) -> Result<KripkeModel> {
    KripkeModel::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn parse_algebra(text: &str) -> Result<ChainAlgebra> {
    text.parse::<ChainAlgebra>()
        .map_err(|e| anyhow!("bad algebra `{text}`: {e}"))
}

fn model_json(m: &KripkeModel) -> Value {
    serde_json::to_value(ModelFile::from_model(m)).expect("model serialises")
}

fn valuation_json(v: &BTreeMap<String, Rational>) -> Value {
    Value::Object(v.iter().map(|(k, q)| (k.clone(), json!(q.to_string()))).collect())
}

fn sequent_json(s: &Sequent) -> Value {
    json!({
        "premises": s.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "conclusion": s.conclusion.to_string(),
    })
}

fn search_verdict(p: &mut Printer, v: &Verdict) -> i32 {
    match v {
        Verdict::Countermodel { model, world } => {
            p.emit(
                format!("Countermodel at world {}\n{}", model.worlds()[*world], model.to_json()),
                json!({"verdict": "Countermodel", "world": model.worlds()[*world], "model": model_json(model)}),
            );
            EXIT_FOUND
        }
        Verdict::NoCounterexampleFound(b) => {
            p.emit(
                format!("NoCounterexampleFound ({b})"),
                json!({
                    "verdict": "NoCounterexampleFound",
                    "algebra": b.algebra,
                    "max_worlds": b.max_worlds,
                    "transitive_only": b.transitive_only,
                    "models_checked": b.models_checked,
                }),
            );
            EXIT_OK
        }
        Verdict::Holds => {
            p.emit("Holds", json!({"verdict": "Holds"}));
            EXIT_OK
        }
    }
}

fn decide_options(node_budget: u64, full: bool) -> DecideOptions {
    DecideOptions {
        mode: if full {
            EncodingMode::Full
        } else {
            EncodingMode::Polarity
        },
        solve: SolveOptions {
            node_budget: Some(node_budget),
        },
    }
}

fn dispatch(cmd: Command, p: &mut Printer) -> Result<i32, Exit> {
    match cmd {
        Command::Eval { model, world, formula } => {
            let m = load_model(&model)?;
            let f = parse(&formula).map_err(|e| anyhow!("bad formula: {e}"))?;
            let w = m.world_index(&world)?;
            let alg = m.algebra();
            let text = alg.format_element(&m.evaluate(w, &f));
            p.emit(&text, json!({"world": world, "formula": f.to_string(), "value": text}));
            Ok(EXIT_OK)
        }
        Command::Decide {
            logic,
            sequent,
            emit_smt,
            node_budget,
            full_encoding,
        } => {
            if logic != "kluk" {
                return Err(anyhow!("unsupported logic `{logic}`; use `kluk` or the `search` command").into());
            }
            let s = load_sequent(&sequent)?;
            let opts = decide_options(node_budget, full_encoding);
            if let Some(path) = emit_smt {
                write_smt(&s, &path)?;
            }
            let d = lukdecide::decide(&s, &opts)?;
            match (&d.verdict, &d.prop) {
                (Verdict::Countermodel { model, world }, PropVerdict::Countervaluation { valuation, gap }) => {
                    let name = &model.worlds()[*world];
                    p.emit(
                        format!("Countermodel at world {name} (gap {gap})\n{}", model.to_json()),
                        json!({
                            "verdict": "Countermodel",
                            "world": name,
                            "gap": gap.to_string(),
                            "model": model_json(model),
                            "valuation": valuation_json(valuation),
                            "witness_worlds": d.unfolding.tree.worlds.len(),
                            "nodes": d.stats.nodes,
                        }),
                    );
                    Ok(EXIT_FOUND)
                }
                _ => {
                    p.emit(
                        "Holds",
                        json!({
                            "verdict": "Holds",
                            "witness_worlds": d.unfolding.tree.worlds.len(),
                            "nodes": d.stats.nodes,
                        }),
                    );
                    Ok(EXIT_OK)
                }
            }
        }
        Command::PropDecide {
            sequent,
            node_budget,
            full_encoding,
        } => {
            let s = load_sequent(&sequent)?;
            let (v, stats) = lukdecide::prop_decide(&s, &decide_options(node_budget, full_encoding))?;
            match v {
                PropVerdict::Valid => {
                    p.emit("Valid", json!({"verdict": "Valid", "nodes": stats.nodes}));
                    Ok(EXIT_OK)
                }
                PropVerdict::Countervaluation { valuation, gap } => {
                    let pairs: Vec<String> = valuation.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    p.emit(
                        format!("Countervaluation (gap {gap}): {}", pairs.join(", ")),
                        json!({
                            "verdict": "Countervaluation",
                            "gap": gap.to_string(),
                            "valuation": valuation_json(&valuation),
                            "nodes": stats.nodes,
                        }),
                    );
                    Ok(EXIT_FOUND)
                }
            }
        }
        Command::Pcp { command } => pcp_command(command, p),
        Command::Search {
            sequent,
            algebra,
            max_worlds,
            transitive,
            budget,
        } => {
            let s = load_sequent(&sequent)?;
            let alg = parse_algebra(&algebra)?;
            let opts = SearchOptions::new(max_worlds).transitive(transitive).budget(budget);
            let v = kripke::search_countermodel(&s, &alg, &opts)?;
            Ok(search_verdict(p, &v))
        }
        Command::Experiments { command } => experiment_command(command, p),
        Command::EmitSmt { sequent, out } => {
            let s = load_sequent(&sequent)?;
            match out {
                Some(path) => {
                    write_smt(&s, &path)?;
                    p.emit(
                        format!("wrote {}", path.display()),
                        json!({"written": path.display().to_string()}),
                    );
                }
                None => {
                    let text = smt_text(&s)?;
                    p.emit(&text, json!({"smt": text}));
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn smt_text(s: &Sequent) -> Result<String> {
    let u = lukdecide::unfold(s)?;
    let enc = lukdecide::encode_milp(&u.sequent, EncodingMode::Full);
    let text = lukdecide::emit_smt(&enc);
    lukdecide::check_smt(&text)?;
    Ok(text)
}

fn write_smt(s: &Sequent, path: &Path) -> Result<()> {
    fs::write(path, smt_text(s)?).with_context(|| format!("cannot write {}", path.display()))
}

fn pcp_command(cmd: PcpCommand, p: &mut Printer) -> Result<i32, Exit> {
    match cmd {
        PcpCommand::Encode { instance } => {
            let inst = load_instance(&instance)?;
            let s = pcp::reduction_sequent(&inst);
            let mut human = String::new();
            for g in &s.premises {
                human.push_str(&format!("{g}\n"));
            }
            human.push_str(&format!("⊢ {}", s.conclusion));
            p.emit(human, sequent_json(&s));
            Ok(EXIT_OK)
        }
        PcpCommand::Solve { instance, max_len } => {
            let inst = load_instance(&instance)?;
            match inst.brute_force_solve(max_len) {
                SolveOutcome::Solution(sol) => {
                    p.emit(
                        format!("Solution {sol}"),
                        json!({"result": "Solution", "solution": sol.indices()}),
                    );
                    Ok(EXIT_FOUND)
                }
                SolveOutcome::NotFoundWithinBound(k) => {
                    p.emit(
                        format!("NotFoundWithinBound (length ≤ {k})"),
                        json!({"result": "NotFoundWithinBound", "max_len": k}),
                    );
                    Ok(EXIT_OK)
                }
            }
        }
        PcpCommand::Countermodel {
            instance,
            solution,
            algebra,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let sol: IndexSequence = solution.parse()?;
            let alg = parse_algebra(&algebra)?;
            let cm = pcp::build_countermodel(&inst, &sol, &alg)?;
            let text = cm.model.to_json();
            if let Some(path) = &out {
                fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            }
            p.emit(
                format!("Countermodel at world u, α = {}\n{text}", alg.format_element(&cm.alpha)),
                json!({
                    "verdict": "Countermodel",
                    "world": "u",
                    "alpha": alg.format_element(&cm.alpha),
                    "model": model_json(&cm.model),
                }),
            );
            Ok(EXIT_FOUND)
        }
        PcpCommand::Verify {
            instance,
            solution,
            model,
        } => {
            let inst = load_instance(&instance)?;
            let sol: IndexSequence = solution.parse()?;
            let m = load_model(&model)?;
            let problems = verify_pcp_model(&inst, &sol, &m);
            let ok = problems.is_empty();
            p.emit(
                if ok {
                    "verified".to_string()
                } else {
                    format!("verification failed: {}", problems.join("; "))
                },
                json!({"verified": ok, "problems": problems}),
            );
            Ok(if ok { EXIT_OK } else { EXIT_FOUND })
        }
    }
}

/// The model is a countermodel to the reduction sequent at `u` and carries
/// the prefix-power characterization.
fn verify_pcp_model(inst: &PcpInstance, sol: &IndexSequence, m: &KripkeModel) -> Vec<String> {
    let mut problems = Vec::new();
    let Ok(u) = m.world_index("u") else {
        return vec!["no world `u`".into()];
    };
    match m.check_local_consequence_at(u, &pcp::reduction_sequent(inst)) {
        kripke::LocalCheck::ConclusionFails(_) => {}
        other => problems.push(format!("reduction sequent at u: {other:?}")),
    }
    if !pcp::verify_characterization(m, inst, sol) {
        problems.push("v, w values do not follow the prefix concatenations".into());
    }
    problems
}

fn parse_rational(text: &str) -> Result<Rational> {
    text.parse::<Rational>()
        .map_err(|_| anyhow!("`{text}` is not a rational number"))
}

fn experiment_command(cmd: ExperimentCommand, p: &mut Printer) -> Result<i32, Exit> {
    match cmd {
        ExperimentCommand::OmegaChain { alpha, depth } => {
            let a = parse_rational(&alpha)?;
            let r = experiments::omega_chain_check(&a, depth)?;
            let valid = r.valid();
            let records: Vec<Value> = r
                .records
                .iter()
                .map(|rec| {
                    json!({
                        "n": rec.n,
                        "x": rec.x.to_string(),
                        "box_x_squared": rec.box_x_squared.to_string(),
                        "strictly_increasing": rec.strictly_increasing,
                        "fixpoint": rec.fixpoint,
                        "closed_form": rec.closed_form,
                    })
                })
                .collect();
            p.emit(
                format!(
                    "omega chain α₀ = {a}, depth {depth}: {}; e(1,x) = {}, e(0, ~x \\/ x) = {}",
                    if valid { "all identities hold" } else { "FAILED" },
                    r.records[1].x,
                    r.conclusion_at_root
                ),
                json!({
                    "valid": valid,
                    "alpha0": a.to_string(),
                    "depth": depth,
                    "box_bottom_zero": r.box_bottom_zero,
                    "premises_at_root": r.premises_at_root.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    "conclusion_at_root": r.conclusion_at_root.to_string(),
                    "records": records,
                }),
            );
            Ok(if valid { EXIT_OK } else { EXIT_FOUND })
        }
        ExperimentCommand::SeparatingSearch { n, worlds } => {
            let v = experiments::mvn_separating_search(n, worlds)?;
            Ok(search_verdict(p, &v))
        }
        ExperimentCommand::DeltaDt { n, worlds } => {
            let pairs = experiments::delta_fixture_pairs();
            let r = experiments::delta_check(n, worlds, &pairs);
            let ok = r.deduction_failures.is_empty() && r.bridge_failures.is_empty();
            p.emit(
                format!(
                    "Δ deduction theorem and SAT/validity bridge on MV_{n}, ≤ {worlds} worlds: {} ({} checks, {} deduction failures, {} bridge failures)",
                    if ok { "hold" } else { "FAILED" },
                    r.checked,
                    r.deduction_failures.len(),
                    r.bridge_failures.len()
                ),
                json!({
                    "ok": ok,
                    "checked": r.checked,
                    "pairs": pairs.iter().map(|(g, f)| experiments::delta_deduction_transform(g, f).to_string()).collect::<Vec<_>>(),
                    "deduction_failures": r.deduction_failures.len(),
                    "bridge_failures": r.bridge_failures.len(),
                }),
            );
            Ok(if ok { EXIT_OK } else { EXIT_FOUND })
        }
        ExperimentCommand::Sat {
            formula,
            algebra,
            worlds,
            transitive,
        } => {
            let text = read(&formula)?;
            let f: Formula = parse(text.trim()).map_err(|e| anyhow!("bad formula: {e}"))?;
            let alg = parse_algebra(&algebra)?;
            match experiments::local_sat_search(&f, &alg, worlds, transitive)? {
                Some((m, w)) => {
                    p.emit(
                        format!("Satisfied at world {}\n{}", m.worlds()[w], m.to_json()),
                        json!({"result": "Satisfiable", "world": m.worlds()[w], "model": model_json(&m)}),
                    );
                    Ok(EXIT_FOUND)
                }
                None => {
                    p.emit(
                        "NotSatisfiedWithinBound",
                        json!({"result": "NotSatisfiedWithinBound", "max_worlds": worlds}),
                    );
                    Ok(EXIT_OK)
                }
            }
        }
    }
}
