//! gdecomp command line: graph partition multiplicities, certificates, and
//! reports.
//!
//! Exit codes: 0 success/Member/pass, 1 NonMember/Infeasible/fail,
//! 2 Unknown/budget, 64 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gdecomp::arithmetic::m1_lower_bound;
use gdecomp::constructions::{
    cyclic_base_search, orbit_construction, walecki_even, walecki_odd, CyclicSearchOutcome,
    DEFAULT_ORBIT_CAP,
};
use gdecomp::decompose::{complement_certificate, parse_certificate, Decomposition, CERT_HEADER};
use gdecomp::designs::{
    affine_plane, clique_obstruction, clique_partition, decomposition_to_design, design_necessary,
    lattice_from_affine_plane, parse_design, CliqueSearchOutcome, ObstructionOutcome,
};
use gdecomp::error::Error;
use gdecomp::graph::{parse_graph, SimpleGraph};
use gdecomp::membership::{
    compute_modulus, decide_membership, DecideOptions, Method, ModulusReport, NonMemberReason,
    Verdict,
};
use gdecomp::perm::parse_gens;
use gdecomp::spectral::{schwenk_obstruction, SchwenkVerdict};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "gdecomp", version, about = "edge partitions of m-fold complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    globals: Globals,
}

#[derive(Args, Clone)]
struct Globals {
    /// Search budget in tree nodes (GDECOMP_BUDGET overrides the default).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Scan bound for `modulus`.
    #[arg(long, global = true, default_value_t = 8)]
    bound: u64,
    /// Worker threads for search work splitting.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

impl Globals {
    fn budget(&self) -> u64 {
        self.budget
            .or_else(|| std::env::var("GDECOMP_BUDGET").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(10_000_000)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Divisibility lower bound m1 and its factors.
    M1 { graph: String },
    /// Decide whether m is a member for the template.
    Member {
        graph: String,
        #[arg(short, long)]
        m: u32,
        /// Comma-separated subset of arithmetic,spectral,cyclic,orbit,search.
        #[arg(long)]
        method: Option<String>,
        /// Permutation generators file enabling the orbit method.
        #[arg(long)]
        gens: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a certificate file.
    Verify { cert: PathBuf },
    /// Per-multiplicity report over 1..=bound.
    Modulus {
        graph: String,
        #[arg(long)]
        gens: Option<PathBuf>,
    },
    /// Eigenspace-intersection obstruction report for a regular template.
    Spectral {
        graph: String,
        #[arg(short, long)]
        m: u32,
    },
    /// Hamiltonian cycle decomposition of K_n (odd n) or 2K_n (even n).
    Walecki {
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a cyclic base and develop it into a certificate.
    Cyclic {
        graph: String,
        #[arg(short, long)]
        m: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Orbit of the identity embedding under generators; certificate when the
    /// coverage is uniform.
    Orbit {
        graph: String,
        #[arg(long)]
        gens: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Design helpers.
    Design {
        #[command(subcommand)]
        action: DesignAction,
    },
    /// Partition the template's edges into k-cliques; with --lambda, report
    /// the induced design obstruction.
    Cliques {
        graph: String,
        #[arg(short, long)]
        k: usize,
        #[arg(long)]
        lambda: Option<u64>,
    },
    /// Complement a graph (writes a graph file) or a certificate (writes the
    /// complemented certificate).
    Complement {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a clique-template certificate into a design file, or a builtin
    /// name into a graph file.
    Convert {
        input: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DesignAction {
    /// Integrality and Fisher checks for 2-(v,k,lambda).
    Necessary { v: u64, k: u64, lambda: u64 },
    /// Affine plane of prime order q as a resolvable design file.
    Affine {
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose K_{q^2} into (q+1)/2 square lattices from a plane file.
    Lattice {
        plane: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Reads a graph argument: a path when the file exists, otherwise a builtin
/// name or inline content.
fn load_graph(arg: &str) -> Result<SimpleGraph, Error> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)?;
        parse_graph(&text)
    } else {
        parse_graph(arg)
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_cert(path: &Option<PathBuf>, cert: &Decomposition) -> Result<(), Error> {
    if let Some(p) = path {
        std::fs::write(p, cert.to_text())?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn render_modulus_report(report: &ModulusReport) -> String {
    let mut out = String::new();
    out.push_str("  m  status     method        evidence\n");
    for row in &report.rows {
        let (status, method, evidence) = match &row.verdict {
            Verdict::Member { cert, method } => (
                "Member",
                method.to_string(),
                format!("certificate with {} copies", cert.copies().len()),
            ),
            Verdict::NonMember(reason) => {
                let kind = match reason {
                    NonMemberReason::Divisibility { .. } => "divisibility",
                    NonMemberReason::StarParity => "star",
                    NonMemberReason::EmbeddingObstruction { .. } => "embedding",
                    NonMemberReason::Spectral(_) => "spectral",
                    NonMemberReason::ExhaustedSearch { .. } => "search",
                };
                ("NonMember", kind.to_string(), reason.to_string())
            }
            Verdict::Unknown { nodes } => {
                ("Unknown", "-".to_string(), format!("budget exhausted at {nodes} nodes"))
            }
        };
        out.push_str(&format!("{:>3}  {:<9}  {:<12}  {}\n", row.m, status, method, evidence));
    }
    out.push_str(&format!("m1 = {}", report.profile.m1));
    match report.m0 {
        Some(m0) => out.push_str(&format!(", m0 = {m0} (gcd of certified members)")),
        None => out.push_str(", m0 unknown (no members certified)"),
    }
    if let Some(pi) = report.partition_index {
        out.push_str(&format!(", partition index = {pi}"));
    }
    out.push('\n');
    if report.exceptions_in_bound.is_empty() {
        out.push_str("exceptions within bound: none\n");
    } else {
        out.push_str(&format!(
            "exceptions within bound (F ⊇): {:?}\n",
            report.exceptions_in_bound
        ));
    }
    let unknowns = report.unknowns();
    if !unknowns.is_empty() {
        out.push_str(&format!("undecided within budget: {unknowns:?}\n"));
    }
    out
}

fn run(cli: Cli) -> Result<u8, Error> {
    let globals = &cli.globals;
    match cli.command {
        Command::M1 { graph } => {
            let g = load_graph(&graph)?;
            let p = m1_lower_bound(&g)?;
            println!(
                "m1 = {} (edge factor {}, degree factor {}; n = {}, e = {}, d = {})",
                p.m1, p.edge_factor, p.degree_factor, p.n, p.e, p.d
            );
            Ok(EXIT_OK)
        }
        Command::Member { graph, m, method, gens, output } => {
            let g = load_graph(&graph)?;
            let mut opts = DecideOptions {
                budget: globals.budget(),
                jobs: globals.jobs,
                ..DecideOptions::default()
            };
            if let Some(list) = method {
                opts.methods = list
                    .split(',')
                    .map(|t| t.trim().parse::<Method>())
                    .collect::<Result<_, _>>()?;
            }
            if let Some(path) = gens {
                opts.gens = Some(parse_gens(&std::fs::read_to_string(path)?)?);
            }
            match decide_membership(&g, m, &opts)? {
                Verdict::Member { cert, method } => {
                    println!(
                        "Member: m = {m} via {method} ({} copies)",
                        cert.copies().len()
                    );
                    write_cert(&output, &cert)?;
                    Ok(EXIT_OK)
                }
                Verdict::NonMember(reason) => {
                    println!("NonMember: {reason}");
                    Ok(EXIT_NEGATIVE)
                }
                Verdict::Unknown { nodes } => {
                    println!("Unknown: budget exhausted at {nodes} nodes");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Verify { cert } => {
            let cert = parse_certificate(&std::fs::read_to_string(cert)?)?;
            match cert.verify() {
                gdecomp::decompose::VerifyOutcome::Valid => {
                    println!(
                        "valid: multiplicity {} with {} copies on {} vertices",
                        cert.multiplicity(),
                        cert.copies().len(),
                        cert.template().n()
                    );
                    Ok(EXIT_OK)
                }
                gdecomp::decompose::VerifyOutcome::Invalid(f) => {
                    println!("invalid: {f}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Modulus { graph, gens } => {
            let g = load_graph(&graph)?;
            let mut opts = DecideOptions {
                budget: globals.budget(),
                jobs: globals.jobs,
                ..DecideOptions::default()
            };
            if let Some(path) = gens {
                opts.gens = Some(parse_gens(&std::fs::read_to_string(path)?)?);
            }
            let report = compute_modulus(&g, globals.bound, &opts)?;
            print!("{}", render_modulus_report(&report));
            Ok(EXIT_OK)
        }
        Command::Spectral { graph, m } => {
            let g = load_graph(&graph)?;
            let report = schwenk_obstruction(&g, m)?;
            println!(
                "t = {} copies of a {}-regular template{}",
                report.t,
                report.degree,
                if report.exact { " (integer-certified)" } else { "" }
            );
            println!("{:>10}  {:>4}  {:>6}  {:>10}  eigenvalue?", "θ", "f", "bound", "forced");
            for row in &report.rows {
                println!(
                    "{:>10.4}  {:>4}  {:>6}  {:>10.4}  {}",
                    row.theta,
                    row.multiplicity,
                    row.intersection_bound,
                    row.forced,
                    if row.forced_is_eigenvalue { "yes" } else { "no" }
                );
            }
            match report.verdict {
                SchwenkVerdict::Infeasible => {
                    println!("verdict: Infeasible (m = {m} is not a member)");
                    Ok(EXIT_NEGATIVE)
                }
                SchwenkVerdict::Inconclusive => {
                    println!("verdict: Inconclusive");
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Walecki { n, output } => {
            let cert = if n % 2 == 1 { walecki_odd(n)? } else { walecki_even(n)? };
            println!(
                "walecki({n}): multiplicity {} with {} Hamiltonian cycles",
                cert.multiplicity(),
                cert.copies().len()
            );
            write_cert(&output, &cert)?;
            Ok(EXIT_OK)
        }
        Command::Cyclic { graph, m, output } => {
            let g = load_graph(&graph)?;
            match cyclic_base_search(&g, m, globals.budget())? {
                CyclicSearchOutcome::Found(base) => {
                    let cert = base.develop()?;
                    println!(
                        "base found: ∞-degree {}, distance counts {:?}",
                        base.infinity_degree(),
                        base.distance_counts()
                    );
                    println!("developed into {} copies at m = {m}", cert.copies().len());
                    write_cert(&output, &cert)?;
                    Ok(EXIT_OK)
                }
                CyclicSearchOutcome::NotFound { nodes } => {
                    println!("no cyclic base exists ({nodes} nodes)");
                    Ok(EXIT_NEGATIVE)
                }
                CyclicSearchOutcome::Budget { nodes } => {
                    println!("budget exhausted at {nodes} nodes");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Orbit { graph, gens, output } => {
            let g = load_graph(&graph)?;
            let gens = parse_gens(&std::fs::read_to_string(gens)?)?;
            match orbit_construction(&g, &gens, DEFAULT_ORBIT_CAP) {
                Ok((cover, cert)) => {
                    println!(
                        "orbit size {} covers every pair {} times",
                        cover.orbit.len(),
                        cover.m
                    );
                    write_cert(&output, &cert)?;
                    Ok(EXIT_OK)
                }
                Err(e @ Error::NonUniformCoverage { .. }) => {
                    println!("{e}");
                    Ok(EXIT_NEGATIVE)
                }
                Err(e) => Err(e),
            }
        }
        Command::Design { action } => match action {
            DesignAction::Necessary { v, k, lambda } => {
                let report = design_necessary(v, k, lambda)?;
                if report.pass() {
                    println!(
                        "pass: r = {}, b = {}",
                        report.params.r, report.params.b
                    );
                    Ok(EXIT_OK)
                } else {
                    for f in &report.failures {
                        println!("fail: {f}");
                    }
                    Ok(EXIT_NEGATIVE)
                }
            }
            DesignAction::Affine { q, output } => {
                let plane = affine_plane(q)?;
                emit(&output, &plane.to_text())?;
                Ok(EXIT_OK)
            }
            DesignAction::Lattice { plane, output } => {
                let plane = parse_design(&std::fs::read_to_string(plane)?)?;
                let cert = lattice_from_affine_plane(&plane)?;
                println!(
                    "decomposed K_{} into {} square-lattice copies",
                    cert.template().n(),
                    cert.copies().len()
                );
                write_cert(&output, &cert)?;
                Ok(EXIT_OK)
            }
        },
        Command::Cliques { graph, k, lambda } => {
            let g = load_graph(&graph)?;
            match clique_partition(&g, k, globals.budget())? {
                CliqueSearchOutcome::Found(p) => {
                    println!("{} cliques of size {k}:", p.cliques.len());
                    for c in &p.cliques {
                        let line: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                        println!("  {}", line.join(" "));
                    }
                    if let Some(lambda) = lambda {
                        match clique_obstruction(&g, lambda, &p)? {
                            ObstructionOutcome::Pass(r) => {
                                println!("design necessary conditions pass (b = {})", r.params.b);
                            }
                            ObstructionOutcome::NonMemberEvidence(r) => {
                                for f in &r.failures {
                                    println!("λ = {lambda} is not a member: {f}");
                                }
                                return Ok(EXIT_NEGATIVE);
                            }
                        }
                    }
                    Ok(EXIT_OK)
                }
                CliqueSearchOutcome::NotFound { nodes } => {
                    println!("no clique partition exists ({nodes} nodes)");
                    Ok(EXIT_NEGATIVE)
                }
                CliqueSearchOutcome::Budget { nodes } => {
                    println!("budget exhausted at {nodes} nodes");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
        Command::Complement { input, output } => {
            let text = if Path::new(&input).is_file() {
                std::fs::read_to_string(&input)?
            } else {
                input.clone()
            };
            if text.trim_start().starts_with(CERT_HEADER) {
                let cert = parse_certificate(&text)?;
                let comp = complement_certificate(&cert)?;
                println!(
                    "complemented certificate: multiplicity {} with {} copies",
                    comp.multiplicity(),
                    comp.copies().len()
                );
                write_cert(&output, &comp)?;
            } else {
                let g = parse_graph(&text)?;
                let c = g.complement();
                emit(&output, &c.to_text())?;
            }
            Ok(EXIT_OK)
        }
        Command::Convert { input, output } => {
            let text = if Path::new(&input).is_file() {
                std::fs::read_to_string(&input)?
            } else {
                input.clone()
            };
            if text.trim_start().starts_with(CERT_HEADER) {
                let cert = parse_certificate(&text)?;
                let (design, resolvable) = decomposition_to_design(&cert)?;
                println!(
                    "design: 2-({}, {}, {}) with {} blocks{}",
                    design.v,
                    design.k,
                    design.lambda,
                    design.blocks.len(),
                    if resolvable { ", resolvable" } else { "" }
                );
                emit(&output, &design.to_text())?;
            } else {
                let g = parse_graph(&text)?;
                emit(&output, &g.to_text())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own success exit
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Budget { .. } => ExitCode::from(EXIT_UNKNOWN),
                Error::Io(_) | Error::Parse { .. } | Error::UnknownFamily(_)
                | Error::InvalidParams { .. } | Error::InvalidArgument(_)
                | Error::InvalidGraph(_) => ExitCode::from(EXIT_USAGE),
                _ => ExitCode::from(EXIT_NEGATIVE),
            }
        }
    }
}
