//! Command-line front end: distances with certificates, display graphs, tree
//! decompositions and the MSO validation suites.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use phylomso::decomposition::{self, parse_gr, parse_td, validate};
use phylomso::displaygraph::build_display;
use phylomso::distances::{self, D2MP_DEFAULT_BOUND, RSPR_BFS_BOUND, TBR_BFS_BOUND};
use phylomso::forests::{is_agreement_forest, maf_rooted, umaf, AgreementForest};
use phylomso::msol::{self, CheckOptions, EvalConfig, GENERIC_MAX_TAXA};
use phylomso::treeio::parse_newick;
use phylomso::{Error, PhyloTree};

#[derive(Parser)]
#[command(name = "phylomso", version, about = "Agreement forests, display graphs and their MSO characterizations")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the validation suites.
    #[arg(long, global = true, env = "PHYLOMSO_THREADS", default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two trees, with its certificate.
    Dist(DistArgs),
    /// Emit the display graph of two trees.
    Display(DisplayArgs),
    /// Tree decompositions: build one from an agreement forest, or validate a .td file.
    Td(TdArgs),
    /// MSO validation suites, definitions, structures and formula checks.
    Msol(MsolArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Tbr,
    Rspr,
    Hn,
    Mp2,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long, value_enum)]
    measure: Measure,
    t1: PathBuf,
    t2: PathBuf,
    #[arg(long)]
    json: bool,
    /// Recompute the value by a second method and fail on disagreement.
    #[arg(long)]
    dual_certify: bool,
    /// Also decide the value with the MSO formula (small inputs only).
    #[arg(long)]
    msol_check: bool,
    /// Print the agreement forest in text mode.
    #[arg(long)]
    emit_forest: bool,
    /// Print a tree decomposition of the display graph built from the forest.
    #[arg(long)]
    emit_td: bool,
}

#[derive(Args)]
struct DisplayArgs {
    t1: PathBuf,
    t2: PathBuf,
    #[arg(long, conflicts_with = "gr")]
    dot: bool,
    #[arg(long)]
    gr: bool,
}

#[derive(Args)]
struct TdArgs {
    /// Build from the maximum agreement forest of two trees.
    #[arg(long, num_args = 2, value_names = ["T1", "T2"], required_unless_present = "validate")]
    from_forest: Option<Vec<PathBuf>>,
    /// Check a decomposition against a graph.
    #[arg(long, num_args = 2, value_names = ["GR", "TD"], conflicts_with = "from_forest")]
    validate: Option<Vec<PathBuf>>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Compiled predicates against their definitions.
    Predicates,
    /// Formula checks against the direct algorithms.
    Formulas,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaCheck {
    Umaf,
    Rspr,
    Hybnum,
    Fitch,
}

#[derive(Args)]
struct MsolArgs {
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(long, default_value_t = GENERIC_MAX_TAXA, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_taxa: usize,
    /// Validate on every tree pair instead of one pair per relabeling class.
    #[arg(long)]
    all_pairs: bool,
    /// Print the expanded definition of a predicate (e.g. `PAC`, `CPS[2]`, `HybNum[1]`).
    #[arg(long, value_name = "NAME")]
    define: Option<String>,
    /// Print the relational structure of the display graph of two trees as JSON.
    #[arg(long)]
    dump: bool,
    /// Decide a formula on two trees.
    #[arg(long, value_enum)]
    check: Option<FormulaCheck>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Record predicate calls up to this depth and print them.
    #[arg(long, default_value_t = 0)]
    trace: usize,
    #[arg(long)]
    json: bool,
    trees: Vec<PathBuf>,
}

/// Failures mapped to exit status 3; everything else is an input error.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn fail(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Failed(msg.into()))
}

fn read_tree(path: &Path) -> anyhow::Result<PhyloTree> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_newick(text.trim()).with_context(|| format!("parsing {}", path.display()))
}

fn read_pair(a: &Path, b: &Path) -> anyhow::Result<(PhyloTree, PhyloTree)> {
    Ok((read_tree(a)?, read_tree(b)?))
}

fn forest_text(f: &AgreementForest) -> String {
    f.components.iter().map(|c| format!("{}\n", c.tree)).collect()
}

fn to_json<T: Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("serializable")
}

fn pretty(v: &Json) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Second characterization of a forest-based distance: the move search when
/// small enough, otherwise a recheck of the forest's cut certificate.
fn certify_forest(
    t1: &PhyloTree,
    t2: &PhyloTree,
    value: usize,
    forest: &AgreementForest,
    rooted: bool,
) -> anyhow::Result<Json> {
    let (bound, bfs): (usize, fn(&PhyloTree, &PhyloTree) -> phylomso::Result<usize>) = if rooted {
        (RSPR_BFS_BOUND, distances::rspr_move_bfs)
    } else {
        (TBR_BFS_BOUND, distances::tbr_move_bfs)
    };
    if t1.leaf_count() <= bound {
        let moves = bfs(t1, t2)?;
        if moves != value {
            return Err(fail(format!("forest gives {value}, move search gives {moves}")));
        }
        return Ok(json!({"method": "move_search", "value": moves}));
    }
    if is_agreement_forest(t1, t2, &forest.k1, &forest.k2)?.is_none() {
        return Err(fail("the reported cuts do not give an agreement forest"));
    }
    Ok(json!({"method": "forest_recheck", "value": value}))
}

fn cmd_dist(a: &DistArgs) -> anyhow::Result<String> {
    let (t1, t2) = read_pair(&a.t1, &a.t2)?;
    let start = Instant::now();
    let mut rec = serde_json::Map::new();
    let mut forest = None;
    let value = match a.measure {
        Measure::Tbr | Measure::Rspr => {
            let rooted = matches!(a.measure, Measure::Rspr);
            let (value, f) = if rooted { distances::d_rspr(&t1, &t2)? } else { distances::d_tbr(&t1, &t2)? };
            if a.dual_certify {
                rec.insert("certificate".into(), certify_forest(&t1, &t2, value, &f, rooted)?);
            }
            if a.msol_check {
                let check = if rooted { msol::check_rspr_formula } else { msol::check_umaf_formula };
                let size = f.size();
                if !check(&t1, &t2, size)? || check(&t1, &t2, size - 1)? {
                    return Err(fail(format!("the formula does not single out forest size {size}")));
                }
                rec.insert("msol_check".into(), json!(true));
            }
            forest = Some(f);
            value
        }
        Measure::Hn => {
            let h = distances::hyb_number(&t1, &t2, a.dual_certify)?;
            if let Some(seq) = &h.sequence {
                rec.insert("certificate".into(), json!({"method": "tree_sequence", "sequence": to_json(seq)}));
            }
            if a.msol_check && (!msol::check_hybnum_formula(&t1, &t2, h.value)?
                || h.value > 0 && msol::check_hybnum_formula(&t1, &t2, h.value - 1)?)
            {
                return Err(fail(format!("the formula does not single out {}", h.value)));
            }
            if a.msol_check {
                rec.insert("msol_check".into(), json!(true));
            }
            forest = Some(h.forest);
            h.value
        }
        Measure::Mp2 => {
            let d = distances::d2mp(&t1, &t2, D2MP_DEFAULT_BOUND)?;
            if a.dual_certify {
                let f = fitch_scores_by_bruteforce(&t1, &t2, &d.witness)?;
                if f != d.scores {
                    return Err(fail(format!("Fitch scores {:?}, exhaustive scores {f:?}", d.scores)));
                }
                let (tbr, _) = distances::d_tbr(&t1, &t2)?;
                if d.value > tbr {
                    return Err(fail(format!("d2mp {} exceeds d_tbr {tbr}", d.value)));
                }
                rec.insert("certificate".into(), json!({"method": "exhaustive_fitch", "tbr": tbr}));
            }
            if a.msol_check {
                let forward = msol::fitch_mso_optimum(&t1, &t2)?;
                let backward = msol::fitch_mso_optimum(&t2, &t1)?;
                if forward.max(backward) != d.value as i64 {
                    return Err(fail(format!("the formula optimum is {}", forward.max(backward))));
                }
                rec.insert("msol_check".into(), json!(true));
            }
            rec.insert("witness".into(), to_json(&d.witness));
            rec.insert("scores".into(), json!([d.scores.0, d.scores.1]));
            d.value
        }
    };
    let mut td = None;
    if a.emit_td {
        let f = forest.as_ref().ok_or_else(|| anyhow!("--emit-td needs a forest-based measure"))?;
        let dec = decomposition::decomposition_from_forest(&t1, &t2, f)?;
        td = Some(decomposition::emit_td(&dec, build_display(&t1, &t2)?.vertex_count()));
    }
    let name = match a.measure {
        Measure::Tbr => "tbr",
        Measure::Rspr => "rspr",
        Measure::Hn => "hn",
        Measure::Mp2 => "mp2",
    };
    if a.json {
        let mut out = serde_json::Map::new();
        out.insert("measure".into(), json!(name));
        out.insert("value".into(), json!(value));
        if let Some(f) = &forest {
            out.insert("forest_size".into(), json!(f.size()));
            out.insert("forest".into(), to_json(f));
        }
        out.extend(rec);
        if let Some(td) = td {
            out.insert("td".into(), json!(td));
        }
        out.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1000.0));
        return Ok(pretty(&Json::Object(out)));
    }
    let mut text = format!("{name} {value}\n");
    if let Some(c) = rec.get("certificate") {
        text += &format!("certified by {}\n", c["method"].as_str().unwrap_or("?"));
    }
    if rec.contains_key("msol_check") {
        text += "formula check agrees\n";
    }
    if let Some(w) = rec.get("witness") {
        text += &format!("witness {w}\n");
    }
    if let (true, Some(f)) = (a.emit_forest, &forest) {
        text += &forest_text(f);
    }
    if let Some(td) = td {
        text += &td;
    }
    Ok(text)
}

fn fitch_scores_by_bruteforce(
    t1: &PhyloTree,
    t2: &PhyloTree,
    f: &distances::Character,
) -> anyhow::Result<(usize, usize)> {
    Ok((distances::fitch_bruteforce(t1, f)?, distances::fitch_bruteforce(t2, f)?))
}

fn cmd_display(a: &DisplayArgs) -> anyhow::Result<String> {
    let (t1, t2) = read_pair(&a.t1, &a.t2)?;
    let d = build_display(&t1, &t2)?;
    if a.dot {
        return Ok(d.emit_dot());
    }
    if a.gr {
        return Ok(d.emit_gr());
    }
    Ok(pretty(&json!({
        "vertices": d.vertex_count(),
        "edges": d.edge_count(),
        "taxa": d.taxon_count(),
        "rooted": d.rho().is_some(),
        "edge_list": d.edges(),
    })))
}

fn cmd_td(a: &TdArgs) -> anyhow::Result<String> {
    if let Some(paths) = &a.validate {
        let g = parse_gr(&fs::read_to_string(&paths[0]).with_context(|| format!("reading {}", paths[0].display()))?)?;
        let (td, n) = parse_td(&fs::read_to_string(&paths[1]).with_context(|| format!("reading {}", paths[1].display()))?)?;
        if n != g.vertex_count() {
            return Err(fail(format!("decomposition is for {n} vertices, graph has {}", g.vertex_count())));
        }
        validate(&td, &g).map_err(|v| fail(format!("invalid: {v}")))?;
        return Ok(if a.json {
            pretty(&json!({"valid": true, "width": td.width()}))
        } else {
            format!("valid, width {}\n", td.width())
        });
    }
    let paths = a.from_forest.as_ref().expect("clap enforces one mode");
    let (t1, t2) = read_pair(&paths[0], &paths[1])?;
    let forest = if t1.is_rooted() { maf_rooted(&t1, &t2)? } else { umaf(&t1, &t2)? };
    let d = build_display(&t1, &t2)?;
    let td = decomposition::decomposition_from_forest(&t1, &t2, &forest)?;
    validate(&td, &d.graph()).map_err(|v| fail(format!("built decomposition is invalid: {v}")))?;
    if td.width() > forest.size() + 1 {
        return Err(fail(format!("width {} exceeds forest size + 1 = {}", td.width(), forest.size() + 1)));
    }
    Ok(if a.json {
        pretty(&json!({
            "forest_size": forest.size(),
            "width": td.width(),
            "td": decomposition::emit_td(&td, d.vertex_count()),
        }))
    } else {
        decomposition::emit_td(&td, d.vertex_count())
    })
}

/// Runs the predicate suite on `threads` workers; reports keep suite order.
fn predicate_reports(family: &[msol::ValidationStructure], threads: usize) -> anyhow::Result<Vec<msol::ValidationReport>> {
    let threads = threads.max(1);
    let names = msol::SUITE;
    let mut slots: Vec<Option<phylomso::Result<msol::ValidationReport>>> = (0..names.len()).map(|_| None).collect();
    std::thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                sc.spawn(move || {
                    (w..names.len())
                        .step_by(threads)
                        .map(|i| (i, msol::validate_predicate(names[i], family)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| Ok(r.expect("every predicate ran")?)).collect()
}

fn cmd_msol(a: &MsolArgs, threads: usize) -> anyhow::Result<String> {
    if let Some(name) = &a.define {
        let def = msol::definition(name).ok_or_else(|| anyhow!("no predicate named {name}"))?;
        return Ok(format!("{def}\n"));
    }
    if let Some(suite) = a.suite {
        if a.max_taxa > GENERIC_MAX_TAXA && !a.all_pairs && matches!(suite, Suite::Formulas) {
            eprintln!("note: generic evaluation above {GENERIC_MAX_TAXA} taxa can take very long");
        }
        return match suite {
            Suite::Predicates => {
                let family = msol::display_structures(a.max_taxa, !a.all_pairs)?;
                let reports = predicate_reports(&family, threads)?;
                let total: usize = reports.iter().map(|r| r.mismatches.len()).sum();
                let text = if a.json {
                    pretty(&json!({"structures": family.len(), "reports": to_json(&reports), "mismatches": total}))
                } else {
                    let mut t = String::new();
                    for r in &reports {
                        t += &format!(
                            "{:24} {:>4} structures {:>8} tuples {} mismatches\n",
                            r.predicate,
                            r.structures,
                            r.tuples,
                            r.mismatches.len()
                        );
                        for m in &r.mismatches {
                            t += &format!("  {} {:?}: generic {} compiled {}\n", m.structure, m.arguments, m.generic, m.compiled);
                        }
                    }
                    t + &format!("{total} mismatches\n")
                };
                finish_suite(text, total)
            }
            Suite::Formulas => {
                let reports = msol::formula_sweep(a.max_taxa, &[1, 2, 3])?;
                let total: usize = reports.iter().map(|r| r.mismatches.len()).sum();
                let text = if a.json {
                    pretty(&json!({"reports": to_json(&reports), "mismatches": total}))
                } else {
                    let mut t = String::new();
                    for r in &reports {
                        t += &format!("{:8} {:>6} instances {} mismatches\n", r.check, r.instances, r.mismatches.len());
                        for m in &r.mismatches {
                            t += &format!("  {m}\n");
                        }
                    }
                    t + &format!("{total} mismatches\n")
                };
                finish_suite(text, total)
            }
        };
    }
    let [p1, p2] = &a.trees[..] else {
        bail!("expected --suite, --define, or two tree files");
    };
    let (t1, t2) = read_pair(p1, p2)?;
    if a.dump {
        let s = msol::structure_from_display(&build_display(&t1, &t2)?)?;
        return Ok(pretty(&to_json(&s.dump())));
    }
    let check = a.check.ok_or_else(|| anyhow!("expected --dump or --check"))?;
    let opts = CheckOptions {
        config: EvalConfig::leaves().trace(a.trace),
        max_taxa: a.max_taxa,
    };
    let (answer, trace): (Json, Vec<String>) = match check {
        FormulaCheck::Umaf => {
            let (r, t) = msol::check_umaf_formula_traced(&t1, &t2, a.k, &opts)?;
            (json!(r), t)
        }
        FormulaCheck::Rspr => {
            let (r, t) = msol::check_rspr_formula_traced(&t1, &t2, a.k, &opts)?;
            (json!(r), t)
        }
        FormulaCheck::Hybnum => {
            let (r, t) = msol::check_hybnum_formula_traced(&t1, &t2, a.k, &opts)?;
            (json!(r), t)
        }
        FormulaCheck::Fitch => (json!(msol::fitch_mso_optimum_with(&t1, &t2, &opts)?), vec![]),
    };
    Ok(if a.json {
        pretty(&json!({"result": answer, "trace": trace}))
    } else {
        let mut t = format!("{answer}\n");
        for line in trace {
            t += &line;
            t += "\n";
        }
        t
    })
}

fn finish_suite(text: String, total: usize) -> anyhow::Result<String> {
    if total > 0 {
        // Print the report before failing.
        print!("{text}");
        return Err(fail(format!("{total} mismatches")));
    }
    Ok(text)
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    match &cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Display(a) => cmd_display(a),
        Command::Td(a) => cmd_td(a),
        Command::Msol(a) => cmd_msol(a, cli.threads),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Failed>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Certification(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| {
        match &cli.output {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
