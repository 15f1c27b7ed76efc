use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use repkit_core::bench::{self, InstanceSpec, VerifyLevel};
use repkit_core::cnf::is_satisfiable;
use repkit_core::dimacs::{parse_dimacs, write_dimacs, Dimacs, Interpretation};
use repkit_core::mps::{dope, mps_subsets};
use repkit_core::reductions::{hd, phd, whd};
use repkit_core::smu::Tree;
use repkit_core::translations::{cant, cantm, kbase, xor_chain};
use repkit_core::trigger::{
    certify_disjoint_edges, depth_k_incomparable_family, matching_number, transversal_number, trigger_hypergraph,
};
use repkit_core::{ClauseSet, Limits};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "repkit", version, about = "Hardness measures, doped trees and benchmark instances for clause-sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LimitArgs {
    /// Variable limit of the backtracking SAT test.
    #[arg(long, default_value_t = Limits::default().sat_vars)]
    sat_vars: usize,
    /// Variable limit of the max-over-instantiations measures.
    #[arg(long, default_value_t = Limits::default().brute_force_vars)]
    brute_force_vars: usize,
    /// Variable limit of truth-table enumeration.
    #[arg(long, default_value_t = Limits::default().enum_vars)]
    enum_vars: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            sat_vars: self.sat_vars,
            brute_force_vars: self.brute_force_vars,
            enum_vars: self.enum_vars,
            ..Limits::default()
        }
    }
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    h: usize,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    variant: u8,
}

impl SpecArgs {
    fn spec(&self) -> Result<InstanceSpec> {
        Ok(InstanceSpec::new(self.k, self.h, self.variant)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Size measures, satisfiability and hardness of a DIMACS file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureArg::All)]
        measure: MeasureArg,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// All minimal premise sets of a clause-set, as JSON.
    Mps {
        file: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// The doped clause-set D(F).
    Dope {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The extremal tree ExT(k,h) as a clause-set, its doping, or a drawing.
    Tree {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: usize,
        #[arg(long, value_enum, default_value_t = TreeEmit::Cnf)]
        emit: TreeEmit,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translates a DNF into a CNF (cant, cantm), or an XOR constraint given
    /// by the first clause of the file into its chained encoding.
    Translate {
        #[arg(long, value_enum)]
        mode: TranslateMode,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The trigger hypergraph T_k of the prime implicates in the file.
    Trigger {
        #[arg(long)]
        k: usize,
        file: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// A greedy k-base of the prime implicates in the file.
    Kbase {
        #[arg(long)]
        k: usize,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Pairwise disjoint trigger edges for the doped extremal tree
    /// ExT(k+1, h).
    Certificate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        h: usize,
    },
    /// Writes the benchmark instance G^variant_{k,h} in DIMACS form.
    Generate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Closed-form statistics of one instance or of the published table.
    Stats {
        #[arg(long, conflicts_with_all = ["k", "h", "variant"])]
        table: bool,
        #[arg(long, required_unless_present = "table")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "table")]
        h: Option<usize>,
        #[arg(long, required_unless_present = "table")]
        variant: Option<u8>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Checks an instance against its size formulas or its hardness claim.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = LevelArg::Formulas)]
        level: LevelArg,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Hd,
    Phd,
    Whd,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeEmit {
    Cnf,
    DopedCnf,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum TranslateMode {
    Cant,
    Cantm,
    Xor,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Formulas,
    Hardness,
}

fn read(path: &Path) -> Result<Dimacs> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn sink(output: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_cnf(output: &Option<PathBuf>, f: &ClauseSet, comments: &[String]) -> Result<()> {
    let mut out = sink(output)?;
    write_dimacs(&mut out, f, Interpretation::Cnf, comments)?;
    out.flush()?;
    Ok(())
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    c: usize,
    l: usize,
    satisfiable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    hd: Option<repkit_core::reductions::HardnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phd: Option<repkit_core::reductions::HardnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    whd: Option<repkit_core::reductions::HardnessReport>,
}

#[derive(Serialize)]
struct TriggerOutput {
    k: usize,
    vertices: Vec<repkit_core::Clause>,
    edges: Vec<Vec<usize>>,
    transversal: repkit_core::trigger::HypergraphNumber,
    matching: repkit_core::trigger::HypergraphNumber,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { file, measure, limits } => {
            let l = limits.limits();
            let d = read(&file)?;
            if d.kind == Interpretation::Dnf {
                bail!("analyze expects a CNF file");
            }
            let f = d.clauses;
            let want = |m: MeasureArg| matches!(measure, MeasureArg::All) || measure == m;
            let a = Analysis {
                n: f.n(),
                c: f.c(),
                l: f.l(),
                satisfiable: is_satisfiable(&f, &l)?,
                hd: if want(MeasureArg::Hd) { Some(hd(&f, &l)?) } else { None },
                phd: if want(MeasureArg::Phd) { Some(phd(&f, &l)?) } else { None },
                whd: if want(MeasureArg::Whd) { Some(whd(&f, &l)?) } else { None },
            };
            print_json(&a)
        }
        Command::Mps { file, limits } => print_json(&mps_subsets(&read(&file)?.clauses, &limits.limits())?),
        Command::Dope { file, output } => {
            let d = dope(&read(&file)?.clauses);
            let comments: Vec<String> =
                d.pairs().map(|(c, u)| format!("doping {} for {}", u.id(), c)).collect();
            write_cnf(&output, d.clauses(), &comments)
        }
        Command::Tree { k, h, emit, output } => {
            let t = Tree::extremal(k, h)?;
            match emit {
                TreeEmit::Cnf => write_cnf(&output, &t.smuo(), &[format!("smuo of ExT({k},{h})")]),
                TreeEmit::DopedCnf => write_cnf(&output, dope(&t.smuo()).clauses(), &[format!("doped smuo of ExT({k},{h})")]),
                TreeEmit::Dot => {
                    let mut out = sink(&output)?;
                    out.write_all(t.to_dot().as_bytes())?;
                    out.flush()?;
                    Ok(())
                }
            }
        }
        Command::Translate { mode, file, output } => {
            let g = read(&file)?.clauses;
            match mode {
                TranslateMode::Cant | TranslateMode::Cantm => {
                    let r = if matches!(mode, TranslateMode::Cant) { cant(&g) } else { cantm(&g) };
                    let comments: Vec<String> =
                        r.new_var_map.iter().map(|(c, v)| format!("var {} for {}", v.id(), c)).collect();
                    write_cnf(&output, &r.output, &comments)
                }
                TranslateMode::Xor => {
                    let Some(c) = g.iter().next() else { bail!("xor mode needs one clause listing the literals") };
                    let f = xor_chain(c.lits())?;
                    write_cnf(&output, &f, &[format!("xor of {c} = 0")])
                }
            }
        }
        Command::Trigger { k, file, limits } => {
            let l = limits.limits();
            let p = repkit_core::reductions::prime_implicates(&read(&file)?.clauses, &l)?;
            let t = trigger_hypergraph(&p, k);
            let h = t.hypergraph();
            print_json(&TriggerOutput {
                k,
                transversal: transversal_number(&h, &l),
                matching: matching_number(&h, &l),
                vertices: t.vertices,
                edges: t.edges,
            })
        }
        Command::Kbase { k, file, output, limits } => {
            let l = limits.limits();
            let p = repkit_core::reductions::prime_implicates(&read(&file)?.clauses, &l)?;
            write_cnf(&output, &kbase(&p, k, &l)?, &[format!("{k}-base")])
        }
        Command::Certificate { k, h } => {
            let t = Tree::extremal(k + 1, h)?;
            let fam = depth_k_incomparable_family(&t, k)?;
            print_json(&certify_disjoint_edges(&t, k, &fam, &Limits::default())?)
        }
        Command::Generate { spec, output } => {
            let spec = spec.spec()?;
            let mut out = sink(&output)?;
            bench::write_instance(&spec, &mut out)?;
            out.flush()?;
            Ok(())
        }
        Command::Stats { table, k, h, variant, format } => {
            let rows = if table {
                bench::table()
            } else {
                let (Some(k), Some(h), Some(v)) = (k, h, variant) else { bail!("--k, --h and --variant are required") };
                vec![bench::stats(&InstanceSpec::new(k, h, v)?)?]
            };
            match format {
                Format::Json => print_json(&rows),
                Format::Csv => {
                    println!("k,h,variant,alpha,n,c,l,b_lower,b_nogood,hd_claimed");
                    for r in rows {
                        println!(
                            "{},{},{},{},{},{},{},{},{},{}",
                            r.k, r.h, r.variant, r.alpha, r.n, r.c, r.l, r.b_lower, r.b_nogood, r.hd_claimed
                        );
                    }
                    Ok(())
                }
            }
        }
        Command::Verify { spec, level, limits } => {
            let level = match level {
                LevelArg::Formulas => VerifyLevel::Formulas,
                LevelArg::Hardness => VerifyLevel::Hardness,
            };
            let mut l = limits.limits();
            // The hardness check runs one SAT test on the whole instance.
            l.sat_vars = l.sat_vars.max(64);
            let report = bench::verify(&spec.spec()?, level, &l)?;
            print_json(&report)?;
            if !report.ok {
                bail!("verification failed");
            }
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
