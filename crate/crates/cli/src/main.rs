//! `mifkit`: construct, check and compose intersecting set families.
//!
//! Reports go to standard output as JSON; progress and summaries go to
//! standard error. Exit status is 0 when the checked property holds, 1
//! when it fails or a reproduced value mismatches, and 2 on errors.

mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mifkit::composers::{
    self, corollary_bound, lower_bound, CompositionReport, PartitionMode, TransversalPartition,
};
use mifkit::constructions::{self, affine_plane};
use mifkit::io::{read_family, to_json, write_family};
use mifkit::isomorphism::are_isomorphic_with_budget;
use mifkit::properties::{is_cif, is_intersecting, is_mif, is_uniform, tau_of_dual};
use mifkit::transversal::check_upper_bound;
use mifkit::{Error, SetFamily};

#[derive(Parser)]
#[command(name = "mifkit", version, about = "Exact tools for maximal and closed intersecting families")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Cap on exhaustive work: candidate sets per sweep, partition
    /// assignments, or isomorphism search nodes
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family and write it in the standard format
    Construct(ConstructArgs),
    /// Test a property of a family
    Check {
        #[arg(long, value_enum)]
        property: CheckProperty,
        file: PathBuf,
    },
    /// Build a family with one of the composition theorems
    #[command(subcommand)]
    Compose(ComposeCommand),
    /// Search the transversals of a CIF for valid class partitions
    Partitions {
        #[arg(long)]
        cif: PathBuf,
        #[arg(long)]
        classes: usize,
        #[arg(long, value_enum, default_value = "pointset")]
        mode: Mode,
    },
    /// Recompute the published numbers and compare
    Repro {
        /// Run a single item
        #[arg(long)]
        item: Option<String>,
    },
    /// Evaluate a bound on M(k)
    Bound(BoundArgs),
    /// Decide whether two families are isomorphic
    Iso { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
    Complete,
    Pointed,
    Triangle,
    Singleton,
    Affine,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Order of the affine plane
    #[arg(long)]
    n: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckProperty {
    Intersecting,
    Uniform,
    Mif,
    Cif,
    DualTau,
    UpperBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pointset,
    Affine,
}

#[derive(Args)]
struct Output {
    /// Write the composed family here
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Check the result with the engine after composing
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand)]
enum ComposeCommand {
    /// F ⊔ A ⊛ F^T for a CIF F and a MIF A
    Embed {
        #[arg(long)]
        cif: PathBuf,
        #[arg(long)]
        mif: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// One MIF per class of a transversal partition
    Partitioned {
        #[arg(long)]
        cif: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// One per class, in class order
        #[arg(long = "mif", required = true)]
        mifs: Vec<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Parallel classes of an affine plane attached to transversal classes
    Affine {
        #[arg(long)]
        cif: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// Order of the plane
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Product of factor families over the blocks of a MIF
    Product {
        #[arg(long)]
        mif: PathBuf,
        /// One per point of the MIF, in label order
        #[arg(long = "factor", required = true)]
        factors: Vec<PathBuf>,
        /// Fail unless the factors are CIFs whose duals have tau = k
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// G ⊔ F ⊛ G^T
    Extend {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        /// Fail unless both inputs are CIFs
        #[arg(long)]
        closed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Split a MIF at one point
    Decompose {
        #[arg(long)]
        family: PathBuf,
        /// Label of the point
        #[arg(long)]
        point: String,
        /// Where to write the blocks avoiding the point
        #[arg(long)]
        out_family: Option<PathBuf>,
        /// Where to write the blocks through the point, point removed
        #[arg(long)]
        out_dual: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BoundArgs {
    /// Lower bound from the cycle construction at this k (with --t)
    #[arg(long, value_name = "K", requires = "t", conflicts_with_all = ["corollary", "upper"])]
    lower: Option<u64>,
    #[arg(long, requires = "lower")]
    t: Option<u64>,
    /// M(k - t); M(1) = 1 and M(2) = 3 are built in
    #[arg(long, requires = "lower")]
    base: Option<u128>,
    /// Closed-form bound at this k
    #[arg(long, value_name = "K", conflicts_with = "upper")]
    corollary: Option<u64>,
    /// Check a family against k^k
    #[arg(long, value_name = "FILE")]
    upper: Option<PathBuf>,
}

/// Outcome of a command: the JSON report and whether it counts as success.
struct Report {
    value: Value,
    holds: bool,
}

impl Report {
    fn new(value: Value, holds: bool) -> Self {
        Report { value, holds }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(report) => {
            if !report.value.is_null() {
                println!("{}", report.value);
            }
            if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    let budget = cli.budget;
    match cli.command {
        Command::Construct(args) => construct(args),
        Command::Check { property, file } => check(property, &load(&file)?, budget),
        Command::Compose(cmd) => compose(cmd, budget),
        Command::Partitions { cif, classes, mode } => {
            let cif = load(&cif)?;
            let mode = match mode {
                Mode::Pointset => PartitionMode::Pointset,
                Mode::Affine => PartitionMode::Affine,
            };
            let found = composers::search_partitions(&cif, classes, mode, budget)?;
            let dual = mifkit::transversal::transversals(&cif)?.transversals;
            eprintln!("{} valid partitions into {classes} classes", found.len());
            let list: Vec<Value> = found.iter().map(|p| p.to_json(&dual)).collect();
            Ok(Report::new(json!({ "count": found.len(), "partitions": list }), true))
        }
        Command::Repro { item } => repro::run(item.as_deref()),
        Command::Bound(args) => bound(args),
        Command::Iso { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let r = are_isomorphic_with_budget(&a, &b, budget)?;
            eprintln!(
                "{}",
                match &r.separating_invariant {
                    None => "isomorphic".to_string(),
                    Some(inv) => format!("not isomorphic ({inv})"),
                }
            );
            Ok(Report::new(r.to_json(), r.isomorphic))
        }
    }
}

fn load(path: &PathBuf) -> Result<SetFamily> {
    read_family(path).with_context(|| format!("reading {}", path.display()))
}

fn need(value: Option<usize>, flag: &str) -> Result<usize> {
    value.ok_or_else(|| anyhow!("--{flag} is required for this family"))
}

fn construct(args: ConstructArgs) -> Result<Report> {
    let family = match args.family {
        FamilyKind::F => constructions::circular_f(need(args.k, "k")?, need(args.t, "t")?)?,
        FamilyKind::G => constructions::circular_g(need(args.k, "k")?, need(args.t, "t")?)?,
        FamilyKind::Complete => constructions::complete_cif(need(args.k, "k")?, need(args.t, "t")?)?,
        FamilyKind::Pointed => constructions::pointed_cif(need(args.k, "k")?, need(args.t, "t")?)?,
        FamilyKind::Triangle => constructions::mif_triangle(),
        FamilyKind::Singleton => constructions::mif_singleton(),
        FamilyKind::Affine => affine_plane(need(args.n, "n")?)?.to_family(),
    };
    eprintln!("{} blocks on {} points", family.len(), family.num_points());
    emit_family(&family, args.output.as_ref(), json!({}))
}

/// Writes `family` to `path`, or inlines it in the report when no path is given.
fn emit_family(family: &SetFamily, path: Option<&PathBuf>, mut report: Value) -> Result<Report> {
    report["blocks"] = json!(family.len());
    report["points"] = json!(family.num_points());
    match path {
        Some(p) => {
            write_family(family, p).with_context(|| format!("writing {}", p.display()))?;
            report["output"] = json!(p.display().to_string());
        }
        None => {
            report["family"] = serde_json::from_str(&to_json(family))?;
        }
    }
    Ok(Report::new(report, true))
}

/// Refuses sweeps over more than `budget` candidate `k`-sets.
fn ensure_sweep(family: &SetFamily, budget: u64) -> Result<()> {
    let Some(k) = family.uniform_k() else {
        return Ok(());
    };
    let n = family.num_points() as u128;
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n - i) / (i + 1);
        if c > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: format!("C({n},{k}) candidate sets"),
                budget,
            }
            .into());
        }
    }
    Ok(())
}

fn check(property: CheckProperty, family: &SetFamily, budget: u64) -> Result<Report> {
    let verdict = match property {
        CheckProperty::Intersecting => is_intersecting(family),
        CheckProperty::Uniform => is_uniform(family),
        CheckProperty::Mif => {
            ensure_sweep(family, budget)?;
            is_mif(family)?
        }
        CheckProperty::Cif => {
            ensure_sweep(family, budget)?;
            is_cif(family)?
        }
        CheckProperty::UpperBound => check_upper_bound(family)?,
        CheckProperty::DualTau => {
            let value = tau_of_dual(family)?;
            eprintln!("tau of the transversal family: {value}");
            return Ok(Report::new(json!({ "property": "dual-tau", "value": value }), true));
        }
    };
    eprintln!("{}: {}", if verdict.holds { "holds" } else { "fails" }, verdict.detail);
    Ok(Report::new(verdict.to_json(family), verdict.holds))
}

fn finish(report: CompositionReport, out: Output, budget: u64) -> Result<Report> {
    for c in &report.checklist {
        eprintln!("  [{}] {}", if c.holds { "ok" } else { "no" }, c.name);
    }
    let mut value = report.to_json();
    let mut holds = true;
    if out.verify {
        ensure_sweep(&report.result, budget)?;
        let checks = report.verify()?;
        for c in &checks {
            eprintln!("  [{}] verified: {}", if c.holds { "ok" } else { "FAIL" }, c.name);
        }
        holds = checks.iter().all(|c| c.holds);
        value["verification"] = json!(checks);
    }
    let emitted = emit_family(&report.result, out.output.as_ref(), value)?;
    Ok(Report::new(emitted.value, holds))
}

fn compose(cmd: ComposeCommand, budget: u64) -> Result<Report> {
    match cmd {
        ComposeCommand::Embed { cif, mif, out } => {
            let r = composers::embed(&load(&cif)?, &load(&mif)?)?;
            finish(r, out, budget)
        }
        ComposeCommand::Partitioned {
            cif,
            partition,
            mifs,
            out,
        } => {
            let cif = load(&cif)?;
            let partition = load_partition(&cif, &partition)?;
            let mifs = mifs.iter().map(load).collect::<Result<Vec<_>>>()?;
            finish(composers::embed_partitioned(&cif, &partition, &mifs)?, out, budget)
        }
        ComposeCommand::Affine {
            cif,
            partition,
            order,
            out,
        } => {
            let cif = load(&cif)?;
            let partition = load_partition(&cif, &partition)?;
            let plane = affine_plane(order)?;
            finish(composers::embed_affine(&cif, &partition, &plane)?, out, budget)
        }
        ComposeCommand::Product {
            mif,
            factors,
            closed,
            out,
        } => {
            let factors = factors.iter().map(load).collect::<Result<Vec<_>>>()?;
            finish(composers::product(&load(&mif)?, &factors, closed)?, out, budget)
        }
        ComposeCommand::Extend { f, g, closed, out } => {
            finish(composers::extend(&load(&f)?, &load(&g)?, closed)?, out, budget)
        }
        ComposeCommand::Decompose {
            family,
            point,
            out_family,
            out_dual,
        } => {
            let x = load(&family)?;
            ensure_sweep(&x, budget)?;
            let p = x.point(&point).ok_or_else(|| Error::UnknownPoint(point.clone()))?;
            let d = composers::decompose_at(&x, p)?;
            let mut value = json!({
                "point": d.point.as_str(),
                "family_blocks": d.family.len(),
                "dual_blocks": d.dual.len(),
                "tau": d.tau,
            });
            for (key, fam, path) in [("family", &d.family, out_family), ("dual", &d.dual, out_dual)] {
                match path {
                    Some(p) => {
                        write_family(fam, &p).with_context(|| format!("writing {}", p.display()))?;
                        value[format!("{key}_output")] = json!(p.display().to_string());
                    }
                    None => value[key] = serde_json::from_str(&to_json(fam))?,
                }
            }
            eprintln!(
                "{} blocks avoid {point}, {} pass through it; tau of the rest is {}",
                d.family.len(),
                d.dual.len(),
                d.tau
            );
            Ok(Report::new(value, true))
        }
    }
}

fn load_partition(cif: &SetFamily, path: &PathBuf) -> Result<TransversalPartition> {
    #[derive(serde::Deserialize)]
    struct File {
        classes: Vec<Vec<Vec<String>>>,
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: File = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let dual = mifkit::transversal::transversals(cif)?.transversals;
    Ok(TransversalPartition::from_labels(&dual, &file.classes)?)
}

fn bound(args: BoundArgs) -> Result<Report> {
    if let Some(k) = args.lower {
        let t = args.t.expect("clap requires --t");
        let base = match args.base {
            Some(b) => b,
            None => match k.checked_sub(t) {
                Some(1) => 1,
                Some(2) => 3,
                _ => bail!("--base is required: only M(1) = 1 and M(2) = 3 are built in"),
            },
        };
        let table = lower_bound(k, t, base)?;
        eprintln!("M({k}) >= {}", table.bound);
        return Ok(Report::new(serde_json::to_value(&table)?, true));
    }
    if let Some(k) = args.corollary {
        let value = corollary_bound(k)?;
        eprintln!("M({k}) >= {value}");
        return Ok(Report::new(json!({ "k": k, "bound": big(value) }), true));
    }
    let Some(path) = args.upper else {
        bail!("one of --lower, --corollary or --upper is required");
    };
    let family = load(&path)?;
    let verdict = check_upper_bound(&family)?;
    eprintln!("{}", verdict.detail);
    Ok(Report::new(
        json!({ "holds": verdict.holds, "detail": verdict.detail }),
        verdict.holds,
    ))
}

/// A JSON number when it fits in 64 bits, otherwise its decimal string.
fn big(value: u128) -> Value {
    match u64::try_from(value) {
        Ok(v) => json!(v),
        Err(_) => json!(value.to_string()),
    }
}
