//! `raagkit`: classification, verification and catalog runs from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or the graph
//! is not of the requested class, 2 on input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use raagkit::atlas::{enumerate_catalog, GraphCatalog, GraphClass};
use raagkit::focused::FocusedShape;
use raagkit::graph::{asymmetric_tree, build_focused, classify_focused, is_austere};
use raagkit::matalg::{
    build_centralizer, centralizer_bruteforce, group_ball, script_l_image, theta_xi_decompose, WORK_LIMIT_ENV,
};
use raagkit::verify::{verify_graph, InjectedFault, RunConfig, DEFAULT_SEED};
use raagkit::{GraphRef, GroupWord, RaagAutomorphism, SimplicialGraph};

#[derive(Parser)]
#[command(name = "raagkit", version, about = "Right-angled Artin group automorphism toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Requirement {
    Focused,
    Austere,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    Relation5,
    AustereAction,
}

#[derive(clap::Args)]
struct Bounds {
    /// Entry bound for the brute-force centralizer.
    #[arg(long, default_value_t = 3)]
    bound: i64,
    /// Maximal conjugator length in the inner-automorphism search.
    #[arg(long, default_value_t = 6)]
    word_len: usize,
    /// Number of powers in the infinitude witness.
    #[arg(long, default_value_t = 10)]
    t_max: u32,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Node budget for brute-force searches.
    #[arg(long, env = WORK_LIMIT_ENV, default_value_t = raagkit::matalg::DEFAULT_WORK_LIMIT)]
    work_limit: u64,
    /// Run against a deliberately broken model.
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,
}

impl Bounds {
    fn config(&self) -> RunConfig {
        RunConfig {
            bound: self.bound,
            word_len: self.word_len,
            t_max: self.t_max,
            seed: self.seed,
            work_limit: self.work_limit,
            fault: self.inject_fault.map(|f| match f {
                FaultArg::Relation5 => InjectedFault::Relation5,
                FaultArg::AustereAction => InjectedFault::AustereAction,
            }),
            ..RunConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a graph as focused, austere or neither.
    Classify {
        file: PathBuf,
        /// Exit with status 1 unless the graph has this class.
        #[arg(long, value_enum)]
        require: Option<Requirement>,
    },
    /// Run every check that applies to the graph's class.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the normal form of a word.
    Nf { file: PathBuf, word: String },
    /// Apply an automorphism (`inv v; tv u v; pc v {a,b}; perm (a b); conj w; id`) to a word.
    Apply {
        file: PathBuf,
        automorphism: String,
        word: String,
    },
    /// Enumerate connected graphs up to isomorphism and classify them.
    Atlas {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the brute-force centralizer with the generated group.
    ///
    /// With only --l, computes the centralizer of the 𝓛 block in GL_{2l}(Z).
    Centralizer {
        #[arg(long)]
        l: usize,
        #[arg(long, requires = "k")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        k: Option<usize>,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, env = WORK_LIMIT_ENV, default_value_t = raagkit::matalg::DEFAULT_WORK_LIMIT)]
        work_limit: u64,
    },
    /// Verify every focused and austere graph of a saved catalog.
    Report {
        catalog: PathBuf,
        /// Print the full report of every graph.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Build a focused graph with trivial symmetry and print it.
    Build {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        /// Number of extra components, each an asymmetric tree.
        #[arg(long, default_value_t = 0)]
        trees: usize,
    },
}

/// Failure classes mapped to exit codes.
enum Outcome {
    Pass,
    Fail,
}

fn read_graph(path: &Path) -> Result<GraphRef> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = SimplicialGraph::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Arc::new(g))
}

fn classify(file: &Path, require: Option<Requirement>) -> Result<Outcome> {
    let g = read_graph(file)?;
    let focused = classify_focused(g.clone());
    let austere = if g.n() > 1 { Some(is_austere(g.clone())) } else { None };
    match &focused {
        Ok(d) => {
            println!("focused: l={} m={} k={} rank={}", d.l(), d.m(), d.k(), d.rank());
            let components: Vec<String> = d.components.iter().map(|p| g.format_set(p)).collect();
            println!("  focus {}; components {}", g.vertex_name(d.focus), components.join(" "));
            if !d.trivial_automorphisms {
                println!("  nontrivial graph symmetry");
            }
        }
        Err(reason) => println!("not focused: {}", reason.describe(&g)),
    }
    match &austere {
        Some(Ok(cert)) => println!("{cert}"),
        Some(Err(reason)) => println!("not austere: {}", reason.describe(&g)),
        None => println!("not austere: single vertex"),
    }
    let is_focused = focused.is_ok();
    let is_austere = matches!(austere, Some(Ok(_)));
    let ok = match require {
        Some(Requirement::Focused) => is_focused,
        Some(Requirement::Austere) => is_austere,
        None => is_focused || is_austere,
    };
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn verify(file: &Path, bounds: &Bounds) -> Result<Outcome> {
    let g = read_graph(file)?;
    let report = verify_graph(g, &bounds.config())?;
    print!("{}", report.text());
    Ok(match report.first_failure() {
        None => Outcome::Pass,
        Some(check) => {
            eprintln!("first failing check: {}", check.label);
            Outcome::Fail
        }
    })
}

fn centralizer(l: usize, mk: Option<(usize, usize)>, bound: i64, work_limit: u64) -> Result<Outcome> {
    let mut out = String::new();
    let ok = match mk {
        None => {
            let image = script_l_image(l);
            let found = centralizer_bruteforce(&image.generators, 2 * l, bound, work_limit)?;
            let decomposed = found.iter().filter(|m| theta_xi_decompose(m).is_some()).count();
            writeln!(out, "CENTRALIZER block l={l} bound={bound} count={}", found.len())?;
            for m in &found {
                writeln!(out, "{m}")?;
            }
            writeln!(out, "THETA_XI decomposed={decomposed} of {}", found.len())?;
            decomposed == found.len()
        }
        Some((m, k)) => {
            let shape = FocusedShape::new(l, m, k)?;
            let alpha = shape.alpha_image();
            let description = build_centralizer(&shape, &alpha)?;
            let brute = centralizer_bruteforce(&alpha.generators, shape.dim(), bound, work_limit)?;
            let ball = group_ball(&description, 6, bound)?;
            writeln!(out, "SHAPE l={l} m={m} k={k} dim={}", shape.dim())?;
            write!(out, "{description}")?;
            let ok = brute == ball;
            writeln!(
                out,
                "CENTRALIZER {} bound={bound} bruteforce={} ball={}",
                if ok { "PASS" } else { "FAIL" },
                brute.len(),
                ball.len()
            )?;
            ok
        }
    };
    print!("{out}");
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn report(path: &Path, full: bool, bounds: &Bounds) -> Result<Outcome> {
    let catalog = GraphCatalog::load(path)?;
    let cfg = bounds.config();
    println!("# raagkit report seed={} maxN={}", cfg.seed, catalog.max_n);
    for line in catalog.summary() {
        println!("{line}");
    }
    let mut failed = 0;
    for (i, record) in catalog.records.iter().enumerate() {
        if record.class == GraphClass::Other {
            continue;
        }
        let report = verify_graph(record.graph.clone(), &cfg)?;
        if full {
            print!("{}", report.text());
        } else {
            let verdict = match report.first_failure() {
                None => "PASS".to_string(),
                Some(c) => format!("FAIL first={}", c.label),
            };
            let edges: Vec<String> = record.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
            println!(
                "record {} n={} class={} edges={} {verdict}",
                i + 1,
                record.n(),
                record.class,
                edges.join(",")
            );
        }
        failed += usize::from(!report.passed());
    }
    println!("TOTAL failed={failed}");
    Ok(if failed == 0 { Outcome::Pass } else { Outcome::Fail })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Classify { file, require } => classify(&file, require),
        Command::Verify { file, bounds } => verify(&file, &bounds),
        Command::Nf { file, word } => {
            let g = read_graph(&file)?;
            println!("{}", GroupWord::parse(&g, &word)?.normal_form());
            Ok(Outcome::Pass)
        }
        Command::Apply {
            file,
            automorphism,
            word,
        } => {
            let g = read_graph(&file)?;
            let f = RaagAutomorphism::parse(&g, &automorphism)?;
            println!("{}", f.apply(&GroupWord::parse(&g, &word)?)?);
            Ok(Outcome::Pass)
        }
        Command::Atlas { max_n, out } => {
            let catalog = enumerate_catalog(max_n)?;
            match out {
                Some(path) => {
                    catalog.save(&path)?;
                    for line in catalog.summary() {
                        println!("{line}");
                    }
                }
                None => print!("{}", catalog.to_text()),
            }
            Ok(Outcome::Pass)
        }
        Command::Centralizer {
            l,
            m,
            k,
            bound,
            work_limit,
        } => centralizer(l, m.zip(k), bound, work_limit),
        Command::Report { catalog, full, bounds } => report(&catalog, full, &bounds),
        Command::Build { l, m, trees } => {
            let shapes: Vec<SimplicialGraph> = (0..trees).map(|_| asymmetric_tree()).collect();
            print!("{}", build_focused(l, m, &shapes)?.to_text());
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
