//! Command-line front end: regime classification, solving, reduction
//! drivers, and corpus cross-checking over the on-disk formats.
//!
//! Exit codes follow the SAT-solver convention: 10 certified YES,
//! 20 certified NO, 21 monte-carlo NO, 2 usage or parse error,
//! 3 capacity guard, 70 internal error.

use clap::{Parser, Subcommand, ValueEnum};
use ewsat::bits::BitSet;
use ewsat::boolfun::{BoolFun, ConstraintFamily, RegimeTag};
use ewsat::clique::{Graph, Hypergraph};
use ewsat::formula::Formula;
use ewsat::gen;
use ewsat::impl_reduce;
use ewsat::solver::{self, Answer, Certainty, SolveConfig, Verdict};
use ewsat::wdi::WdiInstance;
use ewsat::{Error, Result};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::exit;

const EXIT_YES: i32 = 10;
const EXIT_NO: i32 = 20;
const EXIT_NO_MC: i32 = 21;
const EXIT_USAGE: i32 = 2;
const EXIT_CAPACITY: i32 = 3;
const EXIT_INTERNAL: i32 = 70;

#[derive(Parser)]
#[command(
    name = "ewsat",
    about = "Exact-weight constraint satisfaction toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a constraint family into its solving regime.
    Classify {
        /// Family file: `fun <name> <arity> <table>` lines.
        family: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve a formula at the target weight from its header.
    Solve {
        family: PathBuf,
        formula: PathBuf,
        /// Trial budget for the randomized pipeline.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Shorthand for --method oracle.
        #[arg(long)]
        oracle: bool,
        /// Force a solving method instead of following the regime.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        json: bool,
        /// Worker threads for randomized trials; results unchanged.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run a reduction and print the produced instance.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Cross-check a corpus directory against oracles and expectations.
    Xcheck {
        dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Exhaustive enumeration (n <= 24).
    Oracle,
    /// Bounded search tree plus randomized implication rounding.
    Frobenius,
    /// NAND closure plus color coding; on a NAND3-representing family
    /// this is the conditional reduction-based route.
    Clique,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Clique search as weighted closed-set search.
    CliqueToWdi {
        graph: PathBuf,
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Split weighted vertices into unit cycles.
    WdiToUnit {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Digraph closed-set search as an implication formula.
    DigraphToImpl {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the matching family file.
        #[arg(long)]
        family_out: Option<PathBuf>,
    },
    /// Hyperclique search as a NAND formula over the complement.
    HyperToNand {
        input: PathBuf,
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        family_out: Option<PathBuf>,
    },
    /// Re-express an IMPL or NAND formula in a representing family.
    Express {
        /// Family the input formula is written in (single function).
        in_family: PathBuf,
        formula: PathBuf,
        /// Family to express the formula in.
        target_family: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        family_out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(match e {
                Error::Usage(_) | Error::Parse { .. } => EXIT_USAGE,
                Error::Capacity(_) => EXIT_CAPACITY,
                Error::Internal(_) => EXIT_INTERNAL,
            })
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Classify { family, json } => classify_cmd(&family, json),
        Cmd::Solve {
            family,
            formula,
            budget,
            seed,
            oracle,
            method,
            json,
            threads,
        } => solve_cmd(&family, &formula, budget, seed, oracle, method, json, threads),
        Cmd::Gen(sub) => gen_cmd(sub),
        Cmd::Xcheck { dir, seed } => xcheck_cmd(&dir, seed),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Error::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn classify_cmd(family: &Path, json: bool) -> Result<i32> {
    let fam = ConstraintFamily::parse(&read(family)?)?;
    let regime = fam.classify()?;
    let targets = [BoolFun::impl2(), BoolFun::nand(2), BoolFun::nand(3)];
    if json {
        let mut reps = serde_json::Map::new();
        for g in &targets {
            let v = match fam.represents(g)? {
                Some((i, map)) => serde_json::json!({
                    "member": fam.funs()[i].name(),
                    "map": map.to_string(),
                }),
                None => serde_json::Value::Null,
            };
            reps.insert(g.name().to_string(), v);
        }
        println!(
            "{}",
            serde_json::json!({
                "regime": regime.tag.to_string(),
                "represents": reps,
            })
        );
    } else {
        println!("regime: {}", regime.tag);
        for g in &targets {
            match fam.represents(g)? {
                Some((i, map)) => {
                    println!("represents {}: {} {}", g.name(), fam.funs()[i].name(), map)
                }
                None => println!("avoids {}", g.name()),
            }
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn solve_cmd(
    family: &Path,
    formula: &Path,
    budget: Option<u64>,
    seed: u64,
    oracle: bool,
    method: Option<MethodArg>,
    json: bool,
    threads: Option<usize>,
) -> Result<i32> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::Usage("--threads must be at least 1".to_string()));
        }
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let method = match (oracle, method) {
        (true, Some(_)) => {
            return Err(Error::Usage("--oracle conflicts with --method".to_string()))
        }
        (true, None) => Some(MethodArg::Oracle),
        (false, m) => m,
    };
    let fam = ConstraintFamily::parse(&read(family)?)?;
    let (phi, k) = Formula::parse(&read(formula)?, &fam)?;
    let mut cfg = SolveConfig {
        seed,
        budget,
        ..SolveConfig::default()
    };
    let ans = match method {
        None => solver::solve(&phi, k, &cfg)?,
        Some(MethodArg::Oracle) => solver::solve_oracle(&phi, k)?,
        Some(MethodArg::Frobenius) => {
            let tag = fam.classify()?.tag;
            if !matches!(tag, RegimeTag::Fpt | RegimeTag::Subexponential) {
                return Err(Error::Usage(format!(
                    "family represents NAND2 (regime {tag}); the search-tree pipeline does not apply"
                )));
            }
            solver::solve(&phi, k, &cfg)?
        }
        Some(MethodArg::Clique) => {
            let tag = fam.classify()?.tag;
            if !matches!(tag, RegimeTag::Clique | RegimeTag::BruteForce) {
                return Err(Error::Usage(format!(
                    "family avoids NAND2 (regime {tag}); the color-coding pipeline does not apply"
                )));
            }
            cfg.conditional = true;
            solver::solve(&phi, k, &cfg)?
        }
    };
    Ok(report_answer(&ans, seed, json))
}

fn report_answer(ans: &Answer, seed: u64, json: bool) -> i32 {
    let (verdict, witness, code) = match (&ans.verdict, ans.certainty) {
        (Verdict::Yes(w), _) => ("yes", Some(w), EXIT_YES),
        (Verdict::No, Certainty::Certified) => ("no", None, EXIT_NO),
        (Verdict::No, Certainty::MonteCarlo) => ("monte-carlo-no", None, EXIT_NO_MC),
    };
    if json {
        let wjson: Option<Vec<usize>> =
            witness.map(|w| w.iter_ones().map(|v| v + 1).collect());
        println!(
            "{}",
            serde_json::json!({
                "verdict": verdict,
                "witness": wjson,
                "regime": ans.regime.to_string(),
                "method": ans.method.to_string(),
                "trials": ans.stats.trials,
                "seed": seed,
            })
        );
    } else {
        match witness {
            Some(w) => {
                println!("s YES");
                let vars: Vec<String> =
                    w.iter_ones().map(|v| (v + 1).to_string()).collect();
                println!("v {}", vars.join(" "));
            }
            None => println!("s NO ({})", ans.certainty),
        }
        println!(
            "c regime {} method {} trials {} nodes {} seed {}",
            ans.regime, ans.method, ans.stats.trials, ans.stats.nodes, seed
        );
    }
    code
}

fn gen_cmd(sub: GenCmd) -> Result<i32> {
    match sub {
        GenCmd::CliqueToWdi { graph, k, out } => {
            if k < 2 {
                return Err(Error::Usage("clique target must be at least 2".to_string()));
            }
            let g = Graph::parse(&read(&graph)?)?;
            let inst = gen::clique_to_wdi(&g, k);
            write_out(out.as_deref(), &inst.serialize())?;
        }
        GenCmd::WdiToUnit { input, out } => {
            let inst = WdiInstance::parse(&read(&input)?)?;
            let (unit, heads) = gen::wdi_to_unit(&inst);
            let mut text = unit.serialize();
            text.push_str("# heads");
            for h in heads {
                text.push_str(&format!(" {}", h + 1));
            }
            text.push('\n');
            write_out(out.as_deref(), &text)?;
        }
        GenCmd::DigraphToImpl {
            input,
            out,
            family_out,
        } => {
            let inst = WdiInstance::parse(&read(&input)?)?;
            let phi = gen::digraph_to_sat_impl(&inst);
            let k = usize::try_from(inst.k())
                .map_err(|_| Error::Usage("target weight exceeds the platform".to_string()))?;
            if let Some(p) = family_out {
                write_out(Some(&p), &phi.family().serialize())?;
            }
            write_out(out.as_deref(), &phi.serialize(k))?;
        }
        GenCmd::HyperToNand {
            input,
            k,
            out,
            family_out,
        } => {
            let h = Hypergraph::parse(&read(&input)?)?;
            let phi = gen::hypergraph_to_sat_nand(&h);
            if let Some(p) = family_out {
                write_out(Some(&p), &phi.family().serialize())?;
            }
            write_out(out.as_deref(), &phi.serialize(k))?;
        }
        GenCmd::Express {
            in_family,
            formula,
            target_family,
            out,
            family_out,
        } => {
            let fam_in = ConstraintFamily::parse(&read(&in_family)?)?;
            let (phi, k) = Formula::parse(&read(&formula)?, &fam_in)?;
            let fam_to = ConstraintFamily::parse(&read(&target_family)?)?;
            let name = target_family
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "family".to_string());
            let (psi, target) = gen::express_sat_g_in_family(&phi, &fam_to, &name, k)?;
            if let Some(p) = family_out {
                write_out(Some(&p), &psi.family().serialize())?;
            }
            write_out(out.as_deref(), &psi.serialize(target))?;
        }
    }
    Ok(0)
}

fn xcheck_cmd(dir: &Path, seed: u64) -> Result<i32> {
    let rd = fs::read_dir(dir)
        .map_err(|e| Error::Usage(format!("{}: {e}", dir.display())))?;
    let mut stems: Vec<String> = rd
        .filter_map(|ent| {
            let p = ent.ok()?.path();
            if p.extension().and_then(|s| s.to_str()) == Some("ewsat") {
                Some(p.file_stem()?.to_string_lossy().into_owned())
            } else {
                None
            }
        })
        .collect();
    stems.sort();
    if stems.is_empty() {
        eprintln!("warning: no instances in {}", dir.display());
        println!("checked 0 instances");
        return Ok(0);
    }
    let mut failures = Vec::new();
    for stem in &stems {
        if let Err(msg) = xcheck_one(dir, stem, seed) {
            failures.push(format!("{stem}: {msg}"));
        }
    }
    for f in &failures {
        println!("FAIL {f}");
    }
    println!(
        "checked {} instances: {}",
        stems.len(),
        if failures.is_empty() {
            "all agree".to_string()
        } else {
            format!("{} failures", failures.len())
        }
    );
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn xcheck_one(dir: &Path, stem: &str, seed: u64) -> std::result::Result<(), String> {
    let fam_text = fs::read_to_string(dir.join(format!("{stem}.fam")))
        .map_err(|e| format!("missing family file: {e}"))?;
    let fam = ConstraintFamily::parse(&fam_text).map_err(|e| e.to_string())?;
    let phi_text = fs::read_to_string(dir.join(format!("{stem}.ewsat")))
        .map_err(|e| e.to_string())?;
    let (phi, k) = Formula::parse(&phi_text, &fam).map_err(|e| e.to_string())?;
    let expect: Option<Option<BitSet>> =
        match fs::read_to_string(dir.join(format!("{stem}.expect"))) {
            Ok(t) => Some(parse_expect_checked(&t, &phi, k)?),
            Err(_) => None,
        };
    let cfg = SolveConfig {
        seed,
        ..SolveConfig::default()
    };
    let ans = solver::solve(&phi, k, &cfg).map_err(|e| e.to_string())?;
    let truth: Option<bool> = match &expect {
        Some(w) => Some(w.is_some()),
        None if phi.n() <= 24 => {
            let o = solver::solve_oracle(&phi, k).map_err(|e| e.to_string())?;
            Some(matches!(o.verdict, Verdict::Yes(_)))
        }
        None => None,
    };
    match (&ans.verdict, truth) {
        (Verdict::Yes(w), t) => {
            if w.count() != k || !phi.satisfied_by(w) {
                return Err("solver witness fails verification".to_string());
            }
            if t == Some(false) {
                return Err("YES on an infeasible instance".to_string());
            }
        }
        (Verdict::No, Some(true)) => {
            if ans.certainty == Certainty::Certified {
                return Err("certified NO on a feasible instance".to_string());
            }
            // A monte-carlo miss gets one retry at a hundredfold
            // budget and a hundredth of the coloring failure bound.
            let cfg2 = SolveConfig {
                seed,
                budget: Some(
                    impl_reduce::default_budget(k, phi.family().arity()).saturating_mul(100),
                ),
                delta: cfg.delta / 100.0,
                ..SolveConfig::default()
            };
            let again = solver::solve(&phi, k, &cfg2).map_err(|e| e.to_string())?;
            match again.verdict {
                Verdict::Yes(w) => {
                    if w.count() != k || !phi.satisfied_by(&w) {
                        return Err("retry witness fails verification".to_string());
                    }
                }
                Verdict::No => {
                    return Err(
                        "feasible instance unsolved at a hundredfold budget".to_string()
                    )
                }
            }
        }
        (Verdict::No, _) => {}
    }
    Ok(())
}

fn parse_expect_checked(
    text: &str,
    phi: &Formula,
    k: usize,
) -> std::result::Result<Option<BitSet>, String> {
    let expect = ewsat_cli::parse_expect(text, phi.n())?;
    if let Some(w) = &expect {
        if w.count() != k {
            return Err(format!(
                "expected witness has weight {}, target is {k}",
                w.count()
            ));
        }
        if !phi.satisfied_by(w) {
            return Err("expected witness fails verification".to_string());
        }
    }
    Ok(expect)
}
