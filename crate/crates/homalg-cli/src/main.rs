//! Command-line front end: parse and validate input files, dispatch to the
//! library, and emit deterministic plain-text reports (optionally a JSON
//! twin). Exit codes: 0 success, 2 validation error, 3 a mathematical
//! failure result (the full report is still printed).

use clap::{Args, Parser, Subcommand, ValueEnum};
use homalg::hochschild::{self, Variant};
use homalg::io::{AlgebraFile, CoefficientFile, LinftyFile, ManifoldFile};
use homalg::linalg::SquareZero;
use homalg::operad::{self, ShiftConvention};
use homalg::trees::Tree;
use homalg::weyl;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "homalg", version, about = "exact workbench for operadic tree complexes, Chevalley-Eilenberg and Hochschild homology, and curvature models")]
struct Cli {
    /// Write a machine-readable JSON twin of the report to this path
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Guard rail: largest admissible basis size for a single degree
    #[arg(long, global = true, default_value_t = 300_000)]
    limit_basis: usize,
    /// Guard rail: largest admissible arity for tree-complex builds
    #[arg(long, global = true, default_value_t = 7)]
    max_arity: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tree calculus: enumeration and composition
    Trees {
        #[command(subcommand)]
        cmd: TreesCmd,
    },
    /// The tree complex at a fixed arity
    Loperad {
        #[command(subcommand)]
        cmd: LoperadCmd,
    },
    /// Configuration-space stratum dictionary
    Fm {
        #[command(subcommand)]
        cmd: FmCmd,
    },
    /// Chevalley-Eilenberg homology of an L-infinity input file
    Ce {
        #[command(subcommand)]
        cmd: CeCmd,
    },
    /// Hochschild-type homology of an algebra file
    Hochschild {
        #[command(subcommand)]
        cmd: HochschildCmd,
    },
    /// Chain-map certification and the induced map on homology
    Trace {
        #[command(subcommand)]
        cmd: TraceCmd,
    },
    /// Curvature-model verification
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
}

#[derive(Subcommand)]
enum TreesCmd {
    /// List trees on the given leaves with a fixed number of internal edges
    Enumerate {
        /// Comma-separated leaf labels
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        /// Number of internal edges; omit to list every count
        #[arg(long)]
        internal_edges: Option<usize>,
    },
    /// Graft one tree onto a leaf of another
    Compose {
        /// Host tree in parenthesized notation
        #[arg(long)]
        left: String,
        /// Leaf of the host to graft at
        #[arg(long)]
        at: String,
        /// Tree whose root is identified with that leaf
        #[arg(long)]
        right: String,
    },
}

#[derive(Subcommand)]
enum LoperadCmd {
    /// Build the complex and verify nilpotency of the differential
    Build(LoperadArgs),
    /// Homology dimensions per degree
    Homology(LoperadArgs),
}

#[derive(Args)]
struct LoperadArgs {
    #[arg(long)]
    arity: usize,
    /// Apply the ambient-dimension shift to the reported degrees
    #[arg(long)]
    dimension: Option<i64>,
    #[arg(long, value_enum, default_value_t = ShiftArg::NTimesArityMinusOne)]
    shift_convention: ShiftArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShiftArg {
    /// shift by n(s-1)
    NTimesArityMinusOne,
    /// alternative formula: shift by s(1-n)
    ArityTimesOneMinusN,
}

impl From<ShiftArg> for ShiftConvention {
    fn from(a: ShiftArg) -> ShiftConvention {
        match a {
            ShiftArg::NTimesArityMinusOne => ShiftConvention::NTimesArityMinusOne,
            ShiftArg::ArityTimesOneMinusN => ShiftConvention::ArityTimesOneMinusN,
        }
    }
}

#[derive(Subcommand)]
enum FmCmd {
    /// Dimension and codimension of strata indexed by trees
    Strata {
        /// A single tree in parenthesized notation
        #[arg(long, conflicts_with = "labels")]
        tree: Option<String>,
        /// Tabulate all trees on these comma-separated labels
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
        #[arg(long)]
        dimension: i64,
    },
    /// Codimension-one incidence of two strata on the same leaves
    Incidence {
        #[arg(long)]
        shallow: String,
        #[arg(long)]
        deep: String,
    },
}

#[derive(Subcommand)]
enum CeCmd {
    Homology {
        /// L-infinity input file
        #[arg(long)]
        input: PathBuf,
        /// Word-length cutoff
        #[arg(long)]
        cutoff: usize,
    },
}

#[derive(Subcommand)]
enum HochschildCmd {
    Homology {
        /// Algebra input file
        #[arg(long)]
        algebra: PathBuf,
        /// Top homological degree (flagged as truncation-affected)
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
    },
}

#[derive(Subcommand)]
enum TraceCmd {
    /// Decide proportionality degree by degree and record exact ratios
    Certify(TraceArgs),
    /// Ranks of the induced map on homology (needs a successful certificate)
    Induced(TraceArgs),
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    algebra: PathBuf,
    #[arg(long)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
    variant: VariantArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    CyclicQuotient,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::CyclicQuotient => Variant::CyclicQuotient,
        }
    }
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Verify one-dimensional total cohomology of the curvature model
    Verify {
        /// Ambient dimension n
        #[arg(long)]
        n: i64,
        /// Coefficient-space file (degrees and the pairing q)
        #[arg(long)]
        v: PathBuf,
        /// Manifold file (dimension, Betti data, intersection pairing)
        #[arg(long)]
        manifold: PathBuf,
    },
}

fn main() {
    let started = Instant::now();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            2
        }
    };
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    std::process::exit(code);
}

fn read_input(path: &Path, header: &mut String) -> Result<String, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{:02x}", b)).collect();
    let _ = writeln!(header, "input {}: sha256 {}", path.display(), hex);
    Ok(text)
}

fn command_echo() -> String {
    let args: Vec<String> = std::env::args().collect();
    format!("command: {}", args.join(" "))
}

fn emit_json(cli: &Cli, value: &serde_json::Value) -> Result<(), String> {
    if let Some(path) = &cli.json {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        std::fs::write(path, s).map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, String> {
    match &cli.cmd {
        Cmd::Trees { cmd } => run_trees(cli, cmd),
        Cmd::Loperad { cmd } => run_loperad(cli, cmd),
        Cmd::Fm { cmd } => run_fm(cli, cmd),
        Cmd::Ce { cmd } => run_ce(cli, cmd),
        Cmd::Hochschild { cmd } => run_hochschild(cli, cmd),
        Cmd::Trace { cmd } => run_trace(cli, cmd),
        Cmd::Weyl { cmd } => run_weyl(cli, cmd),
    }
}

fn run_trees(cli: &Cli, cmd: &TreesCmd) -> Result<i32, String> {
    match cmd {
        TreesCmd::Enumerate {
            labels,
            internal_edges,
        } => {
            if labels.len() < 2 {
                return Err("need at least 2 labels".to_string());
            }
            println!("{}", command_echo());
            let range: Vec<usize> = match internal_edges {
                Some(k) => vec![*k],
                None => (0..=labels.len().saturating_sub(2)).collect(),
            };
            let mut out = Vec::new();
            for k in range {
                let ts = homalg::trees::enumerate(labels, k).map_err(|e| e.to_string())?;
                println!("internal edges {}: {} trees", k, ts.len());
                for t in &ts {
                    println!("  {}", t);
                    out.push(json!({"edges": k, "tree": t.to_string()}));
                }
            }
            emit_json(cli, &json!({ "trees": out }))?;
            Ok(0)
        }
        TreesCmd::Compose { left, at, right } => {
            let t1 = Tree::parse(left).map_err(|e| e.to_string())?;
            let t2 = Tree::parse(right).map_err(|e| e.to_string())?;
            let t = t1.compose(at, &t2).map_err(|e| e.to_string())?;
            println!("{}", command_echo());
            println!("{}", t);
            emit_json(cli, &json!({"tree": t.to_string()}))?;
            Ok(0)
        }
    }
}

fn check_arity(cli: &Cli, s: usize) -> Result<(), String> {
    if s > cli.max_arity {
        return Err(format!(
            "arity {} exceeds the guard rail --max-arity {}",
            s, cli.max_arity
        ));
    }
    Ok(())
}

fn run_loperad(cli: &Cli, cmd: &LoperadCmd) -> Result<i32, String> {
    let (args, homology) = match cmd {
        LoperadCmd::Build(a) => (a, false),
        LoperadCmd::Homology(a) => (a, true),
    };
    check_arity(cli, args.arity)?;
    println!("{}", command_echo());
    println!("conventions: cohomological degrees; differential = signed sum of single edge splittings; trees with k internal edges sit in degree 2 - arity + k");
    let lc = operad::tree_complex_unverified(args.arity).map_err(|e| e.to_string())?;
    let shift = match args.dimension {
        Some(n) => {
            let conv: ShiftConvention = args.shift_convention.into();
            println!(
                "shift: dimension {} ({}), degrees moved down by {}",
                n,
                match args.shift_convention {
                    ShiftArg::NTimesArityMinusOne => "n(s-1)",
                    ShiftArg::ArityTimesOneMinusN => "s(1-n)",
                },
                conv.amount(args.arity, n)
            );
            conv.amount(args.arity, n)
        }
        None => 0,
    };
    match lc.complex().verify_square_zero() {
        SquareZero::Pass => println!("differential squares to zero: pass"),
        SquareZero::Witness { degree, basis, image } => {
            println!(
                "differential squares to zero: FAIL at degree {} on {}: d\u{b2} = {}",
                degree, basis, image
            );
            return Ok(3);
        }
    }
    let mut rows = Vec::new();
    if homology {
        let h = lc.complex().homology().map_err(|e| e.to_string())?;
        println!("degree  dim  rank(d)  homology");
        for d in lc.complex().degrees() {
            let rank = lc.complex().diff(d).rank();
            println!(
                "{:>6}  {:>3}  {:>7}  {:>8}",
                d - shift,
                lc.complex().dim(d),
                rank,
                h[&d].dim
            );
            rows.push(json!({
                "degree": d - shift, "dim": lc.complex().dim(d),
                "rank": rank, "homology": h[&d].dim
            }));
        }
        let nonzero: Vec<(i64, usize)> = h
            .iter()
            .filter(|(_, s)| s.dim > 0)
            .map(|(&d, s)| (d - shift, s.dim))
            .collect();
        if nonzero.len() == 1 {
            println!(
                "single nonzero homology degree: {} (dim {})",
                nonzero[0].0, nonzero[0].1
            );
        }
        emit_json(
            cli,
            &json!({"arity": args.arity, "rows": rows,
                    "nonzero": nonzero.iter().map(|(d, x)| json!({"degree": d, "dim": x})).collect::<Vec<_>>()}),
        )?;
    } else {
        println!("degree  dim  nnz(d)");
        for d in lc.complex().degrees() {
            println!(
                "{:>6}  {:>3}  {:>6}",
                d - shift,
                lc.complex().dim(d),
                lc.complex().diff(d).nnz()
            );
            rows.push(json!({"degree": d - shift, "dim": lc.complex().dim(d)}));
        }
        emit_json(cli, &json!({"arity": args.arity, "rows": rows}))?;
    }
    Ok(0)
}

fn run_fm(cli: &Cli, cmd: &FmCmd) -> Result<i32, String> {
    match cmd {
        FmCmd::Strata {
            tree,
            labels,
            dimension,
        } => {
            println!("{}", command_echo());
            println!("stratum indexing: codim = internal edges; dim = sum over internal vertices of (n\u{b7}arity - n - 1)");
            let trees: Vec<Tree> = match tree {
                Some(text) => vec![Tree::parse(text).map_err(|e| e.to_string())?],
                None => {
                    if labels.len() < 2 {
                        return Err("give --tree or at least 2 --labels".to_string());
                    }
                    let mut all = Vec::new();
                    for k in 0..=labels.len() - 2 {
                        all.extend(homalg::trees::enumerate(labels, k).map_err(|e| e.to_string())?);
                    }
                    all
                }
            };
            let mut rows = Vec::new();
            println!("{:>5}  {:>5}  tree", "dim", "codim");
            for t in &trees {
                let dim = operad::stratum_dim(t, *dimension).map_err(|e| e.to_string())?;
                let codim = operad::stratum_codim(t).map_err(|e| e.to_string())?;
                println!("{:>5}  {:>5}  {}", dim, codim, t);
                rows.push(json!({"tree": t.to_string(), "dim": dim, "codim": codim}));
            }
            emit_json(cli, &json!({"n": dimension, "strata": rows}))?;
            Ok(0)
        }
        FmCmd::Incidence { shallow, deep } => {
            let t1 = Tree::parse(shallow).map_err(|e| e.to_string())?;
            let t2 = Tree::parse(deep).map_err(|e| e.to_string())?;
            let inc = operad::incidence(&t1, &t2).map_err(|e| e.to_string())?;
            println!("{}", command_echo());
            println!(
                "codim {} vs {}: incident = {}",
                operad::stratum_codim(&t1).map_err(|e| e.to_string())?,
                operad::stratum_codim(&t2).map_err(|e| e.to_string())?,
                inc
            );
            emit_json(cli, &json!({"incident": inc}))?;
            Ok(0)
        }
    }
}

fn run_ce(cli: &Cli, cmd: &CeCmd) -> Result<i32, String> {
    let CeCmd::Homology { input, cutoff } = cmd;
    let mut header = command_echo();
    header.push('\n');
    let text = read_input(input, &mut header)?;
    let file = LinftyFile::parse(&text).map_err(|e| e.to_string())?;
    let g = file.to_linfty().map_err(|e| e.to_string())?;
    let ce = g.ce_complex(*cutoff).map_err(|e| e.to_string())?;
    print!("{}", header);
    println!("conventions: generators suspended (degree - 1, parity flipped); word length k of a degree-0 input sits at cohomological degree -k");
    match ce.complex().verify_square_zero() {
        SquareZero::Pass => println!("total differential squares to zero: pass"),
        SquareZero::Witness { degree, basis, image } => {
            println!(
                "total differential squares to zero: FAIL at degree {} on {}: d\u{b2} = {}",
                degree, basis, image
            );
            return Ok(3);
        }
    }
    let h = ce.homology().map_err(|e| e.to_string())?;
    println!("degree  dim  homology  status");
    let mut rows = Vec::new();
    for d in ce.complex().degrees() {
        let s = h[&d];
        println!(
            "{:>6}  {:>3}  {:>8}  {}",
            d,
            ce.complex().dim(d),
            s.dim,
            if s.flagged { "truncation-affected" } else { "exact" }
        );
        rows.push(json!({"degree": d, "dim": ce.complex().dim(d), "homology": s.dim, "exact": !s.flagged}));
    }
    emit_json(cli, &json!({"cutoff": cutoff, "rows": rows}))?;
    Ok(0)
}

fn run_hochschild(cli: &Cli, cmd: &HochschildCmd) -> Result<i32, String> {
    let HochschildCmd::Homology {
        algebra,
        max_degree,
        variant,
    } = cmd;
    let mut header = command_echo();
    header.push('\n');
    let text = read_input(algebra, &mut header)?;
    let alg = AlgebraFile::parse(&text)
        .map_err(|e| e.to_string())?
        .to_algebra()
        .map_err(|e| e.to_string())?;
    let h = hochschild::homology(&alg, *max_degree, (*variant).into(), cli.limit_basis)
        .map_err(|e| e.to_string())?;
    print!("{}", header);
    println!(
        "variant: {}; homological degree m stored at cohomological degree -m",
        Variant::from(*variant).name()
    );
    println!("degree  homology  status");
    let mut rows = Vec::new();
    for (m, s) in &h {
        println!(
            "{:>6}  {:>8}  {}",
            m,
            s.dim,
            if s.flagged { "truncation-affected" } else { "exact" }
        );
        rows.push(json!({"degree": m, "homology": s.dim, "exact": !s.flagged}));
    }
    emit_json(cli, &json!({"variant": Variant::from(*variant).name(), "rows": rows}))?;
    Ok(0)
}

fn run_trace(cli: &Cli, cmd: &TraceCmd) -> Result<i32, String> {
    let (args, induced) = match cmd {
        TraceCmd::Certify(a) => (a, false),
        TraceCmd::Induced(a) => (a, true),
    };
    let mut header = command_echo();
    header.push('\n');
    let text = read_input(&args.algebra, &mut header)?;
    let alg = AlgebraFile::parse(&text)
        .map_err(|e| e.to_string())?
        .to_algebra()
        .map_err(|e| e.to_string())?;
    let variant: Variant = args.variant.into();
    let cert = hochschild::certify_chain_map(&alg, args.max_degree, variant, cli.limit_basis)
        .map_err(|e| e.to_string())?;
    print!("{}", header);
    print!("{}", cert.render());
    if !induced {
        emit_json(
            cli,
            &json!({
                "variant": variant.name(),
                "success": cert.total_success(),
                "first_failure": cert.first_failure(),
            }),
        )?;
        return Ok(if cert.total_success() { 0 } else { 3 });
    }
    match hochschild::induced_homology_map(&alg, args.max_degree, variant, &cert, cli.limit_basis)
    {
        Ok(ranks) => {
            println!("induced map on homology (degree k word classes to degree k-1 classes):");
            println!("{:>2}  {:>9}  {:>9}  {:>4}", "k", "dim H(ce)", "dim H(tgt)", "rank");
            let mut rows = Vec::new();
            for r in &ranks {
                println!(
                    "{:>2}  {:>9}  {:>9}  {:>4}",
                    r.k, r.ce_homology_dim, r.target_homology_dim, r.rank
                );
                rows.push(json!({
                    "k": r.k, "ce": r.ce_homology_dim,
                    "target": r.target_homology_dim, "rank": r.rank
                }));
            }
            emit_json(cli, &json!({"variant": variant.name(), "ranks": rows}))?;
            Ok(0)
        }
        Err(hochschild::HochschildError::CertificateFailure { k }) => {
            println!("induced map refused: certification failed at k={}", k);
            emit_json(
                cli,
                &json!({"variant": variant.name(), "refused_at": k}),
            )?;
            Ok(3)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn run_weyl(cli: &Cli, cmd: &WeylCmd) -> Result<i32, String> {
    let WeylCmd::Verify { n, v, manifold } = cmd;
    let mut header = command_echo();
    header.push('\n');
    let v_text = read_input(v, &mut header)?;
    let m_text = read_input(manifold, &mut header)?;
    let v_file = CoefficientFile::parse(&v_text).map_err(|e| e.to_string())?;
    let m_file = ManifoldFile::parse(&m_text).map_err(|e| e.to_string())?;
    if m_file.n != *n {
        return Err(format!(
            "--n {} disagrees with the manifold file dimension {}",
            n, m_file.n
        ));
    }
    let paired = v_file.to_paired(*n).map_err(|e| e.to_string())?;
    let manifold_data = m_file.to_manifold().map_err(|e| e.to_string())?;
    let report =
        weyl::verify_one_dimensional(&paired, &manifold_data).map_err(|e| e.to_string())?;
    print!("{}", header);
    print!("{}", report.render());
    let pass = report.passes();
    let (total, location) = match &report.status {
        weyl::VerifyStatus::Exact { total, location, .. } => {
            (Some(*total), Some(*location))
        }
        _ => (None, None),
    };
    emit_json(
        cli,
        &json!({
            "n": n, "pass": pass, "total": total, "location": location,
            "omega": report.omega,
            "generators": report.info.iter().map(|g| json!({
                "name": g.name, "raw_degree": g.raw_degree, "stored_degree": g.stored_degree
            })).collect::<Vec<_>>(),
        }),
    )?;
    Ok(if pass { 0 } else { 3 })
}
