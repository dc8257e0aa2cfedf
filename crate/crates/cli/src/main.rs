use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use smb_cli::format::{parse_algebra, parse_law, print_algebra, print_rows, Law};
use smb_cli::json::{classes, tuple_text, verdict, verdict_violations, violations};
use smb_core::chains::verify_cg_d3;
use smb_core::commutator::commutator;
use smb_core::congruence::{check_congruence, congruence_lattice, principal_congruence};
use smb_core::constructions::{example_b2, example_e3, example_n4, example_s2, extend_simple_type5, CorpusSpec};
use smb_core::criteria::RegularContext;
use smb_core::identity::{check_identity, check_quasiidentity};
use smb_core::regular::{check_regular, check_regular_base, taylor_check};
use smb_core::smb::{check_smb_over, find_smb_congruences, sim_from_wedge};
use smb_core::wnu::{regularize, run_pipeline};
use smb_core::{Error, FiniteAlgebra, Partition};

#[derive(Parser)]
#[command(name = "smb", version, about = "Finite SMB algebras: recognition, congruences, commutators, witnesses")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Is the algebra SMB (over SIM, or over some congruence)?
    CheckSmb {
        file: PathBuf,
        #[arg(long)]
        sim: Option<String>,
    },
    /// The four regularity conditions.
    CheckRegular {
        file: PathBuf,
        #[arg(long)]
        sim: Option<String>,
    },
    /// The twelve identities of the regular base.
    VerifyBase { file: PathBuf },
    /// Replace wedge by its regular form and d by the matching d'.
    Regularize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        sim: Option<String>,
    },
    /// All congruences.
    Con { file: PathBuf },
    /// The principal congruence Cg(a,b).
    Cg { file: PathBuf, a: usize, b: usize },
    /// Verify a theorem on every input tuple.
    Verify { what: Theorem, file: PathBuf },
    /// The commutator [P1, P2].
    Commutator { file: PathBuf, p1: String, p2: String },
    /// Iterate a wnu operation and derive a semilattice term.
    Pipeline {
        file: PathBuf,
        w: String,
        #[arg(long)]
        sim: Option<String>,
    },
    /// Print a built-in or constructed algebra.
    Construct {
        #[command(subcommand)]
        which: Construct,
    },
    /// Generate a seeded corpus.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        /// Write one `.alg` file per algebra here instead of printing.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Check an identity `s = t` or a quasi-identity `s = t & ... -> s = t`.
    Law { file: PathBuf, law: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    CgD3,
    Taylor,
    Cgvsim,
    Undersim,
    Commutator,
}

#[derive(Subcommand)]
enum Construct {
    E3 {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    B2 {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    S2 {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    N4 {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Adjoin three elements to get a simple algebra with wnu `v`.
    Extend {
        file: PathBuf,
        w: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A finished command: exit code, text and JSON renderings.
struct Report {
    code: u8,
    text: String,
    json: Value,
    error: bool,
}

impl Report {
    fn new(holds: bool, text: String, json: Value) -> Report {
        Report {
            code: if holds { 0 } else { 1 },
            text,
            json,
            error: false,
        }
    }
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<Report, Failure>;

fn load(path: &Path) -> Result<FiniteAlgebra, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_algebra(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn partition_arg(alg: &FiniteAlgebra, text: &str) -> Result<Partition, Failure> {
    let p: Partition = text
        .parse()
        .map_err(|e| Failure::Usage(format!("bad partition `{text}`: {e}")))?;
    if p.size() != alg.size() {
        return Err(Failure::Usage(format!(
            "partition `{text}` has {} elements, the algebra has {}",
            p.size(),
            alg.size()
        )));
    }
    Ok(p)
}

fn congruence_arg(alg: &FiniteAlgebra, text: &str) -> Result<Partition, Failure> {
    let p = partition_arg(alg, text)?;
    check_congruence(alg, &p).map_err(|e| Failure::Usage(format!("`{text}`: {e}")))?;
    Ok(p)
}

fn write_or_print(alg: &FiniteAlgebra, output: Option<&Path>) -> Result<String, Failure> {
    let text = print_algebra(alg);
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

fn check_smb(file: &Path, sim: Option<&str>) -> Outcome {
    let alg = load(file)?;
    let report = match sim {
        Some(s) => check_smb_over(&alg, &partition_arg(&alg, s)?)?,
        None => match find_smb_congruences(&alg)?.into_iter().next() {
            Some(s) => check_smb_over(&alg, &s)?,
            None => match sim_from_wedge(&alg)? {
                Some(s) => check_smb_over(&alg, &s)?,
                None => {
                    let text = "not SMB: x∧y = y and y∧x = x does not define an equivalence\n".to_string();
                    let j = json!({
                        "verdict": "fails",
                        "violations": [{"rule": "sim-equivalence", "witness": []}],
                        "sim": null,
                    });
                    return Ok(Report::new(false, text, j));
                }
            },
        },
    };
    let mut text = if report.holds {
        format!("SMB over {}\n", report.sim)
    } else {
        format!("not SMB over {}\n", report.sim)
    };
    for v in &report.violations {
        text.push_str(&format!("{} fails at {}\n", v.rule, tuple_text(&v.witness)));
    }
    let j = json!({
        "verdict": verdict(report.holds),
        "violations": violations(&report.violations),
        "sim": classes(&report.sim),
    });
    Ok(Report::new(report.holds, text, j))
}

fn check_regular_cmd(file: &Path, sim: Option<&str>) -> Outcome {
    let alg = load(file)?;
    let candidates = match sim {
        Some(s) => vec![partition_arg(&alg, s)?],
        None => find_smb_congruences(&alg)?,
    };
    if candidates.is_empty() {
        let j = json!({"verdict": "fails", "violations": [{"rule": "smb", "witness": []}], "sim": null});
        return Ok(Report::new(false, "not SMB over any congruence\n".into(), j));
    }
    let mut reports = Vec::new();
    for s in candidates {
        let r = match check_regular(&alg, &s) {
            Ok(r) => r,
            Err(Error::NotSmb(why)) => {
                let j = json!({"verdict": "fails", "violations": [{"rule": "smb", "witness": []}], "sim": classes(&s)});
                return Ok(Report::new(false, format!("not SMB over {s}: {why}\n"), j));
            }
            Err(e) => return Err(e.into()),
        };
        let holds = r.holds();
        reports.push((s, r));
        if holds {
            break;
        }
    }
    let (s, r) = reports.pop().expect("at least one candidate");
    let mut text = format!("over {s}\n");
    for (name, v) in &r.conditions {
        match v.counterexample() {
            None => text.push_str(&format!("{name} holds\n")),
            Some(w) => text.push_str(&format!("{name} fails at {}\n", tuple_text(w))),
        }
    }
    let j = json!({
        "verdict": verdict(r.holds()),
        "violations": verdict_violations(&r.conditions),
        "sim": classes(&s),
    });
    Ok(Report::new(r.holds(), text, j))
}

fn verify_base(file: &Path) -> Outcome {
    let alg = load(file)?;
    let r = check_regular_base(&alg)?;
    let mut text = String::new();
    for (name, v) in &r.verdicts {
        match v.counterexample() {
            None => text.push_str(&format!("{name} holds\n")),
            Some(w) => text.push_str(&format!("{name} fails at {}\n", tuple_text(w))),
        }
    }
    if let Some(s) = &r.recovered_sim {
        text.push_str(&format!("regular SMB over {s}\n"));
    }
    let j = json!({
        "verdict": verdict(r.holds()),
        "violations": verdict_violations(&r.verdicts),
        "sim": r.recovered_sim.as_ref().map(classes),
    });
    Ok(Report::new(r.holds(), text, j))
}

fn regularize_cmd(file: &Path, output: Option<&Path>, sim: Option<&str>) -> Outcome {
    let alg = load(file)?;
    let sim = sim.map(|s| partition_arg(&alg, s)).transpose()?;
    let r = regularize(&alg, sim.as_ref())?;
    let recovered = check_regular_base(&r)?.recovered_sim;
    let text = write_or_print(&r, output)?;
    let j = json!({
        "verdict": verdict(recovered.is_some()),
        "violations": [],
        "sim": recovered.as_ref().map(classes),
        "algebra": print_algebra(&r),
    });
    Ok(Report::new(recovered.is_some(), text, j))
}

fn con(file: &Path) -> Outcome {
    let alg = load(file)?;
    let lattice = congruence_lattice(&alg)?;
    let mut text = String::new();
    for p in lattice.elements() {
        text.push_str(&format!("{p}\n"));
    }
    let j = json!({
        "congruences": lattice.elements().iter().map(classes).collect::<Vec<_>>(),
        "partitions": lattice.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "covers": lattice.covers(),
    });
    Ok(Report::new(true, text, j))
}

fn cg(file: &Path, a: usize, b: usize) -> Outcome {
    let alg = load(file)?;
    for x in [a, b] {
        alg.check_element(x).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let p = principal_congruence(&alg, a, b)?;
    let j = json!({"partition": p.to_string(), "classes": classes(&p)});
    Ok(Report::new(true, format!("{p}\n"), j))
}

fn verify(what: Theorem, file: &Path) -> Outcome {
    let alg = load(file)?;
    let n = alg.size();
    match what {
        Theorem::CgD3 => {
            let mut chains = 0;
            let mut bad = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let r = verify_cg_d3(&alg, a, b)?;
                    if !r.holds() {
                        bad.push(vec![a, b]);
                    }
                    for (pair, chain) in &r.witnesses {
                        if !chain.replays(&alg, a, b)? {
                            return Err(Error::Falsified(format!("chain for {pair:?} in Cg({a},{b}) does not replay")).into());
                        }
                        chains += 1;
                    }
                }
            }
            let holds = bad.is_empty();
            let text = if holds {
                format!("Cg(a,b) = D∘D∘D for all {} pairs; {chains} chains replayed\n", n * n)
            } else {
                format!("Cg(a,b) != D∘D∘D at {} pairs, first {}\n", bad.len(), tuple_text(&bad[0]))
            };
            let vs: Vec<Value> = bad.iter().map(|w| json!({"rule": "cg-d3", "witness": w})).collect();
            let j = json!({"verdict": verdict(holds), "violations": vs, "pairs": n * n, "chains": chains});
            Ok(Report::new(holds, text, j))
        }
        Theorem::Taylor => {
            let verdicts = taylor_check(&alg)?;
            let holds = verdicts.iter().all(|(_, v)| v.holds());
            let mut text = String::new();
            for (name, v) in &verdicts {
                match v.counterexample() {
                    None => text.push_str(&format!("{name} = x∧y holds\n")),
                    Some(w) => text.push_str(&format!("{name} = x∧y fails at {}\n", tuple_text(w))),
                }
            }
            let j = json!({"verdict": verdict(holds), "violations": verdict_violations(&verdicts)});
            Ok(Report::new(holds, text, j))
        }
        Theorem::Cgvsim | Theorem::Undersim | Theorem::Commutator => {
            let mut ctx = RegularContext::new(&alg)?;
            let (name, label) = match what {
                Theorem::Cgvsim => ("cgvsim", "(c,d) ∈ Cg(a,b) ∨ ∼"),
                Theorem::Undersim => ("undersim", "Cg(a,b) ∧ Cg(c,d) ⊆ ∼"),
                _ => ("commutator", "[Cg(a,b), Cg(c,d)] ⊆ ∼"),
            };
            let mut count = 0;
            let mut tuples = smb_core::Tuples::new(n, 4);
            let mut total = 0;
            while let Some(t) = tuples.next_tuple() {
                let [a, b, c, d] = [t[0], t[1], t[2], t[3]];
                total += 1;
                count += match what {
                    Theorem::Cgvsim => ctx.cgvsim(a, b, c, d)?,
                    Theorem::Undersim => ctx.undersim(a, b, c, d)?,
                    _ => ctx.commutator_below_sim(a, b, c, d)?,
                } as usize;
            }
            let text = format!("{label}: both sides agree on all {total} tuples; true on {count}\n");
            let j = json!({
                "verdict": "holds",
                "violations": [],
                "sim": classes(ctx.sim()),
                "criterion": name,
                "tuples": total,
                "true": count,
            });
            Ok(Report::new(true, text, j))
        }
    }
}

fn commutator_cmd(file: &Path, p1: &str, p2: &str) -> Outcome {
    let alg = load(file)?;
    let alpha = congruence_arg(&alg, p1)?;
    let beta = congruence_arg(&alg, p2)?;
    let c = commutator(&alg, &alpha, &beta)?;
    let j = json!({"partition": c.to_string(), "classes": classes(&c)});
    Ok(Report::new(true, format!("{c}\n"), j))
}

fn pipeline(file: &Path, w: &str, sim: Option<&str>) -> Outcome {
    let alg = load(file)?;
    let sim = sim.map(|s| partition_arg(&alg, s)).transpose()?;
    let r = match run_pipeline(&alg, w, sim.as_ref()) {
        Err(Error::NotWnu(s)) => {
            let j = json!({"verdict": "fails", "violations": [{"rule": "wnu", "witness": []}], "sim": null});
            return Ok(Report::new(false, format!("`{s}` is not a weak near-unanimity operation\n"), j));
        }
        other => other?,
    };
    let mut text = format!("x∘y = {w}(x,...,x,y)\n{}", print_rows(&r.circ));
    text.push_str(&format!("after iteration\n{}", print_rows(&r.circ_iterated)));
    text.push_str(&format!("special\n{}", print_rows(&r.circ_special)));
    for d in &r.diagnostics {
        text.push_str(&format!("# {d}\n"));
    }
    match &r.wedge_candidate {
        Some((s, table)) => text.push_str(&format!("semilattice term over {s}\n{}", print_rows(table))),
        None => text.push_str("no congruence meets the semilattice-term hypotheses\n"),
    }
    let j = json!({
        "verdict": verdict(r.wedge_candidate.is_some()),
        "violations": [],
        "sim": r.wedge_candidate.as_ref().map(|(s, _)| classes(s)),
        "circ": r.circ.entries(),
        "circ_iterated": r.circ_iterated.entries(),
        "circ_special": r.circ_special.entries(),
        "wedge": r.wedge_candidate.as_ref().map(|(_, t)| t.entries()),
        "diagnostics": r.diagnostics,
    });
    Ok(Report::new(true, text, j))
}

fn construct(which: &Construct) -> Outcome {
    let (alg, output) = match which {
        Construct::E3 { output } => (example_e3(), output),
        Construct::B2 { output } => (example_b2(), output),
        Construct::S2 { output } => (example_s2(), output),
        Construct::N4 { output } => (example_n4(), output),
        Construct::Extend { file, w, output } => {
            let base = load(file)?;
            (extend_simple_type5(&base, w)?, output)
        }
    };
    let text = write_or_print(&alg, output.as_deref())?;
    Ok(Report::new(true, text, json!({"name": alg.name(), "size": alg.size(), "algebra": print_algebra(&alg)})))
}

fn corpus(seed: u64, max_size: usize, dir: Option<&Path>) -> Outcome {
    let algs = CorpusSpec::new(seed, max_size).generate()?;
    let mut text = String::new();
    let mut listing = Vec::new();
    for (i, alg) in algs.iter().enumerate() {
        let body = print_algebra(alg);
        match dir {
            Some(d) => {
                fs::create_dir_all(d).map_err(|e| Failure::Usage(format!("{}: {e}", d.display())))?;
                let path = d.join(format!("{i:03}-{}.alg", alg.name()));
                fs::write(&path, &body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                text.push_str(&format!("{}\n", path.display()));
            }
            None => {
                if i > 0 {
                    text.push('\n');
                }
                text.push_str(&body);
            }
        }
        listing.push(json!({"name": alg.name(), "size": alg.size(), "algebra": body}));
    }
    Ok(Report::new(true, text, Value::Array(listing)))
}

fn law(file: &Path, text: &str) -> Outcome {
    let alg = load(file)?;
    let parsed = parse_law(text, Some(&alg)).map_err(|e| Failure::Usage(format!("law: {e}")))?;
    let v = match &parsed.value {
        Law::Identity(id) => check_identity(&alg, id)?,
        Law::Quasi(q) => check_quasiidentity(&alg, q)?,
    };
    let out = match v.counterexample() {
        None => "holds\n".to_string(),
        Some(w) => {
            let names: Vec<String> = parsed.variables.iter().zip(w).map(|(n, x)| format!("{n}={x}")).collect();
            format!("fails at {}\n", names.join(" "))
        }
    };
    let vs: Vec<Value> = v.counterexample().map(|w| json!({"rule": text, "witness": w})).into_iter().collect();
    let j = json!({"verdict": verdict(v.holds()), "violations": vs, "variables": parsed.variables});
    Ok(Report::new(v.holds(), out, j))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::CheckSmb { file, sim } => check_smb(file, sim.as_deref()),
        Command::CheckRegular { file, sim } => check_regular_cmd(file, sim.as_deref()),
        Command::VerifyBase { file } => verify_base(file),
        Command::Regularize { file, output, sim } => regularize_cmd(file, output.as_deref(), sim.as_deref()),
        Command::Con { file } => con(file),
        Command::Cg { file, a, b } => cg(file, *a, *b),
        Command::Verify { what, file } => verify(*what, file),
        Command::Commutator { file, p1, p2 } => commutator_cmd(file, p1, p2),
        Command::Pipeline { file, w, sim } => pipeline(file, w, sim.as_deref()),
        Command::Construct { which } => construct(which),
        Command::Corpus { seed, max_size, dir } => corpus(*seed, *max_size, dir.as_deref()),
        Command::Law { file, law: text } => law(file, text),
    }
}

fn error_report(code: u8, kind: &str, message: String) -> Report {
    Report {
        code,
        json: json!({"verdict": kind, "error": message}),
        text: message,
        error: true,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(m)) => error_report(2, "error", m),
        Err(Failure::Engine(e @ Error::Falsified(_))) => error_report(3, "falsified", e.to_string()),
        Err(Failure::Engine(
            e @ (Error::NotSmb(_) | Error::NotWnu(_) | Error::HypothesesNotEstablished(_) | Error::CapExceeded { .. }),
        )) => error_report(1, "fails", e.to_string()),
        Err(Failure::Engine(e)) => error_report(2, "error", e.to_string()),
    };
    if cli.json {
        println!("{}", report.json);
    } else if report.error {
        eprintln!("smb: {}", report.text);
    } else {
        print!("{}", report.text);
    }
    ExitCode::from(report.code)
}
