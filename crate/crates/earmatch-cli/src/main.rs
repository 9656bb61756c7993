use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use earmatch::classify;
use earmatch::construct;
use earmatch::ears;
use earmatch::graph::{BipGraph, Vertex};
use earmatch::kext;
use earmatch::matching;
use earmatch::recognize;
use earmatch::transform;
use earmatch_cli::{census_run, format, CliError};

#[derive(Parser)]
#[command(
    name = "earmatch",
    version,
    about = "Matching covered bipartite graphs: checks, extremal classification, transforms, extendability, and a small-order census"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a graph is matching covered, and whether minimally so
    Check {
        file: PathBuf,
        /// Write a DOT rendering of the graph
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Measure a minimal matching covered graph against the extremal bounds
    Classify {
        file: PathBuf,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Print an ear decomposition
    Ears { file: PathBuf },
    /// Bicontract degree-two chains down to the stable subgraph
    Retract {
        file: PathBuf,
        /// Write the retracted graph here instead of standard output
        #[arg(short, long, value_name = "OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Run the five extremal class recognizers
    Recognize { file: PathBuf },
    /// Build one of the named families
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Test whether every k-edge matching extends to a perfect matching
    Kext {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        /// Also evaluate the degree-class bounds
        #[arg(long)]
        bounds: bool,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// Enumerate small graphs and verify the theory over them
    Census {
        /// Largest order to enumerate (4 through 12)
        #[arg(long, value_name = "N")]
        max_n: usize,
        /// Extendability levels to test (0 through 3)
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Worker threads; record order interleaves when above one
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory for records.jsonl and summary.json
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Skip graphs with more edges than this
        #[arg(long, value_name = "M")]
        max_m: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Two copies of a tree joined over their shared leaves
    Leafmatch {
        /// Tree description: `star <r>`, `path <n>`, `double <p> <q>`,
        /// or `edges <n> <u>-<v> ...`
        #[arg(long, value_name = "DESC")]
        tree: String,
        #[arg(short, long, value_name = "OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// 2k copies of a tree joined over their shared leaves
    Kleafmatch {
        #[arg(long, value_name = "DESC")]
        tree: String,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(short, long, value_name = "OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// The star with r leaves joined over them with center multiplicity p
    #[command(name = "J")]
    J {
        p: usize,
        r: usize,
        #[arg(short, long, value_name = "OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
    /// The double star with center degrees p and q joined over its leaves
    Doublestar {
        p: usize,
        q: usize,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(short, long, value_name = "OUT")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Check { file, dot } => cmd_check(&file, dot.as_deref()),
        Command::Classify { file, json, dot } => cmd_classify(&file, json, dot.as_deref()),
        Command::Ears { file } => cmd_ears(&file),
        Command::Retract { file, out, dot } => cmd_retract(&file, out.as_deref(), dot.as_deref()),
        Command::Recognize { file } => cmd_recognize(&file),
        Command::Construct { what } => cmd_construct(what),
        Command::Kext { file, k, bounds, dot } => cmd_kext(&file, k, bounds, dot.as_deref()),
        Command::Census { max_n, k, jobs, out, max_m } => {
            census_run::run(&census_run::CensusArgs { max_n, k, jobs, out, max_m })
        }
    }
}

fn load(path: &Path) -> Result<BipGraph, CliError> {
    let text = fs::read_to_string(path).map_err(|err| CliError::io(path, err))?;
    format::parse_graph(&text)
        .map_err(|err| CliError::Message(format!("{}: {err}", path.display())))
}

fn maybe_dot(g: &BipGraph, dot: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = dot {
        fs::write(path, format::dot_graph(g)).map_err(|err| CliError::io(path, err))?;
    }
    Ok(())
}

fn emit_graph(g: &BipGraph, out: Option<&Path>, dot: Option<&Path>) -> Result<(), CliError> {
    let text = format::render_graph(g);
    match out {
        Some(path) => fs::write(path, text).map_err(|err| CliError::io(path, err))?,
        None => print!("{text}"),
    }
    maybe_dot(g, dot)
}

fn verdict(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn vertex_list(vertices: impl IntoIterator<Item = Vertex>) -> String {
    let mut out = String::new();
    for (i, v) in vertices.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out
}

fn cmd_check(file: &Path, dot: Option<&Path>) -> Result<ExitCode, CliError> {
    let g = load(file)?;
    maybe_dot(&g, dot)?;
    println!("order {}  size {}  classes {}+{}", g.n(), g.m(), g.a_count(), g.b_count());
    match matching::matching_covered_reason(&g) {
        Err(reason) => {
            println!("matching covered: no ({reason})");
            Ok(verdict(false))
        }
        Ok(()) => {
            println!("matching covered: yes");
            let removable =
                classify::removable_edges(&g).map_err(|e| CliError::Message(e.to_string()))?;
            if removable.is_empty() {
                println!("minimal: yes");
            } else {
                println!("minimal: no ({} removable edges)", removable.len());
            }
            Ok(verdict(true))
        }
    }
}

fn cmd_classify(file: &Path, json: bool, dot: Option<&Path>) -> Result<ExitCode, CliError> {
    let g = load(file)?;
    maybe_dot(&g, dot)?;
    let report = match classify::classify_extremal(&g) {
        Ok(report) => report,
        Err(err) => {
            println!("not classifiable: {err}");
            return Ok(verdict(false));
        }
    };
    let bounds = classify::check_bounds(&g).map_err(|e| CliError::Message(e.to_string()))?;
    if json {
        let doc = serde_json::json!({
            "schema": 1,
            "report": report,
            "bounds": bounds,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).map_err(|e| CliError::Message(e.to_string()))?
        );
        return Ok(verdict(true));
    }
    println!("order {}  size {}", report.n, report.m);
    println!(
        "profile: |V2|={} |V3|={} |E2|={} |E3|={} |E32|={}",
        report.v2_count, report.v3_count, report.e2_count, report.e3_count, report.e32_count
    );
    let flags = [
        ("h0", report.flags.h0),
        ("h2", report.flags.h2),
        ("h3", report.flags.h3),
        ("h4", report.flags.h4),
        ("h1", report.flags.h1),
    ];
    for (check, (name, tight)) in bounds.checks.iter().zip(flags) {
        let status = if check.exempt {
            "exempt"
        } else if tight {
            "tight"
        } else if check.holds {
            "holds"
        } else {
            "fails"
        };
        println!(
            "{name} {:<20} {:>4} vs {:>4}  slack {:>3}  {status}",
            check.name, check.lhs, check.rhs, check.slack
        );
    }
    let mut members: Vec<&str> =
        flags.iter().filter(|(_, tight)| *tight).map(|&(name, _)| name).collect();
    members.sort();
    println!("classes: {}", if members.is_empty() { "none".into() } else { members.join(" ") });
    Ok(verdict(true))
}

fn cmd_ears(file: &Path) -> Result<ExitCode, CliError> {
    let g = load(file)?;
    match ears::find_ear_decomposition(&g) {
        Err(err) => {
            println!("no ear decomposition: {err}");
            Ok(verdict(false))
        }
        Ok(ed) => {
            let check = ears::verify_ear_decomposition(&g, &ed);
            if !check.ok {
                return Err(CliError::Message(format!(
                    "decomposition failed verification: {}",
                    check.violation.unwrap_or_default()
                )));
            }
            println!("initial cycle: {}", vertex_list(ed.initial_cycle.vertices.clone()));
            for (i, ear) in ed.ears.iter().enumerate() {
                println!("ear {}: {}", i + 1, vertex_list(ear.vertices.clone()));
            }
            println!("ears: {}  (size - order = {})", ed.ear_count(), g.m() as i64 - g.n() as i64);
            Ok(verdict(true))
        }
    }
}

fn cmd_retract(file: &Path, out: Option<&Path>, dot: Option<&Path>) -> Result<ExitCode, CliError> {
    let g = load(file)?;
    let (retract, trace) = transform::partial_retract(&g);
    eprintln!(
        "retract: order {}  size {}  ({} contractions)",
        retract.n(),
        retract.m(),
        trace.steps.len()
    );
    emit_graph(&retract, out, dot)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_recognize(file: &Path) -> Result<ExitCode, CliError> {
    let g = load(file)?;
    let mut any = false;
    let h0 = recognize::recognize_h0(&g);
    let h1 = recognize::recognize_h1(&g);
    for (name, r) in [("h0", &h0), ("h1", &h1)] {
        if r.verdict {
            any = true;
            match &r.witness {
                Some(w) => println!(
                    "{name}: yes (retract of order {}, host tree of order {})",
                    r.retract.n(),
                    w.tree.n()
                ),
                None => println!("{name}: yes (retract of order {})", r.retract.n()),
            }
        } else {
            println!("{name}: no");
        }
    }
    let recognizers = [
        ("h2", recognize::recognize_h2(&g)),
        ("h3", recognize::recognize_h3(&g)),
        ("h4", recognize::recognize_h4(&g)),
    ];
    for (name, witness) in recognizers {
        match witness {
            Some(w) => {
                any = true;
                println!("{name}: yes (host tree of order {})", w.tree.n());
            }
            None => println!("{name}: no"),
        }
    }
    Ok(verdict(any))
}

fn cmd_construct(what: ConstructCmd) -> Result<ExitCode, CliError> {
    let build = |parts: Result<BipGraph, String>,
                 out: Option<PathBuf>,
                 dot: Option<PathBuf>|
     -> Result<ExitCode, CliError> {
        let g = parts.map_err(CliError::Message)?;
        eprintln!("order {}  size {}  classes {}+{}", g.n(), g.m(), g.a_count(), g.b_count());
        emit_graph(&g, out.as_deref(), dot.as_deref())?;
        Ok(ExitCode::SUCCESS)
    };
    match what {
        ConstructCmd::Leafmatch { tree, out, dot } => {
            let t = format::parse_tree(&tree)?;
            build(
                construct::leaf_matching(&t).map(|p| p.graph).map_err(|e| e.to_string()),
                out,
                dot,
            )
        }
        ConstructCmd::Kleafmatch { tree, k, out, dot } => {
            let t = format::parse_tree(&tree)?;
            build(
                construct::k_leaf_matching(&t, k).map(|p| p.graph).map_err(|e| e.to_string()),
                out,
                dot,
            )
        }
        ConstructCmd::J { p, r, out, dot } => {
            build(construct::star_join(p, r).map(|s| s.graph).map_err(|e| e.to_string()), out, dot)
        }
        ConstructCmd::Doublestar { p, q, k, out, dot } => build(
            construct::double_star_join(p, q, k).map(|d| d.graph).map_err(|e| e.to_string()),
            out,
            dot,
        ),
    }
}

fn cmd_kext(file: &Path, k: usize, bounds: bool, dot: Option<&Path>) -> Result<ExitCode, CliError> {
    let g = load(file)?;
    maybe_dot(&g, dot)?;
    let report = kext::is_k_extendable(&g, k).map_err(|e| CliError::Message(e.to_string()))?;
    if !report.verdict {
        match report.certificate {
            kext::KExtendCertificate::HallViolator { subset, neighborhood } => {
                println!("{k}-extendable: no");
                println!(
                    "violator: S = {{{}}}  N(S) = {{{}}}  (|N(S)| < |S| + {k})",
                    vertex_list(subset),
                    vertex_list(neighborhood)
                );
            }
            other => println!("{k}-extendable: no ({})", certificate_text(&other)),
        }
        return Ok(verdict(false));
    }
    match report.certificate {
        kext::KExtendCertificate::Extends { k_matchings: Some(count) } => {
            println!("{k}-extendable: yes (checked {count} matchings of size {k})");
        }
        _ => println!("{k}-extendable: yes"),
    }
    if k >= 1 {
        let minimal =
            kext::is_minimal_k_extendable(&g, k).map_err(|e| CliError::Message(e.to_string()))?;
        println!("minimal: {}", if minimal { "yes" } else { "no" });
    }
    if bounds {
        let table = kext::bounds_report(&g, k).map_err(|e| CliError::Message(e.to_string()))?;
        for line in &table.lines {
            let status = if !line.applies {
                "exempt"
            } else if !line.holds {
                "FAILS"
            } else if line.slack == 0 {
                "tight"
            } else {
                "holds"
            };
            println!(
                "{:<24} {:>5} vs {:>5}  slack {:>4}  {}  {status}",
                line.name,
                line.lhs,
                line.rhs,
                line.slack,
                if line.proven { "theorem   " } else { "conjecture" }
            );
        }
    }
    Ok(verdict(true))
}

fn certificate_text(cert: &kext::KExtendCertificate) -> String {
    match cert {
        kext::KExtendCertificate::Extends { .. } => "extends".into(),
        kext::KExtendCertificate::Unbalanced => "the classes have unequal sizes".into(),
        kext::KExtendCertificate::Disconnected => "the graph is disconnected".into(),
        kext::KExtendCertificate::TooSmall { n, need } => {
            format!("order {n} is below the required {need}")
        }
        kext::KExtendCertificate::NoPerfectMatching => "no perfect matching exists".into(),
        kext::KExtendCertificate::HallViolator { .. } => "a neighborhood is too small".into(),
    }
}
