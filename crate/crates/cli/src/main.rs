use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hcolor::classify::{classify_digraph, classify_special_tree, compute_core, verify_lemma_suite, Verdict};
use hcolor::digraph::Digraph;
use hcolor::generate::gen_random_special_tree;
use hcolor::homsolver::{arc_consistency, build_instance, consistency_23, solve_hom};
use hcolor::minpath::OrientedPath;
use hcolor::polysearch::{find_majority, find_siggers, find_tsi, find_wnu, Budget, DEFAULT_TUPLE_BUDGET};
use hcolor::spectree::{compile, decompose_special_tree, SpecialTreeSpec};
use hcolor::homsolver::DEFAULT_NODE_BUDGET;

const FOUND: u8 = 0;
const NONE: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "hcolor", version, about = "H-coloring of special oriented trees")]
struct Cli {
    /// Worker threads for parallel verification sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search-node budget for backtracking.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: u64,
    /// Cap on the number of tuples in an indicator instance.
    #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
    budget_tuples: u128,
}

impl BudgetArgs {
    fn budget(self) -> anyhow::Result<Budget> {
        if self.budget_tuples == 0 {
            bail!("--budget-tuples must be positive");
        }
        Ok(Budget {
            tuples: self.budget_tuples,
            nodes: self.budget_nodes,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bt,
    Ac,
    #[value(name = "23")]
    Pc23,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Wnu,
    Siggers,
    Majority,
    Tsi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dg,
    Stree,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a .stree spec to a .dg digraph and a role sidecar.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// Decide whether INPUT maps homomorphically to TARGET.
    Solve {
        #[arg(long)]
        input: String,
        #[arg(long)]
        target: String,
        /// Pin `v=t`: vertex v of the input must map to vertex t.
        #[arg(long = "pin", value_parser = parse_pin)]
        pins: Vec<(usize, usize)>,
        #[arg(long, value_enum, default_value = "bt")]
        method: Method,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for a polymorphism of TARGET satisfying the chosen identities.
    Poly {
        #[arg(long)]
        target: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Classify a special tree (or cap the verdict for other digraphs).
    Classify {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        tree: Option<PathBuf>,
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compute the core of a digraph.
    Core {
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the retraction as `<input-vertex> <core-vertex>` lines.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        budget_nodes: u64,
    },
    /// Run instance checks of the absorption properties on a special tree.
    Verify {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value = "lemmas")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate a random special tree.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "a", default_value_t = 2)]
        a_count: usize,
        #[arg(long = "b", default_value_t = 2)]
        b_count: usize,
        #[arg(long, default_value_t = 2)]
        height: usize,
        #[arg(long)]
        max_path_len: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between .stree, .dg and path literals.
    Convert {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        to: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (v, t) = s.split_once('=').ok_or_else(|| format!("pin `{s}` is not of the form v=t"))?;
    let v = v.trim().parse().map_err(|_| format!("bad pin vertex in `{s}`"))?;
    let t = t.trim().parse().map_err(|_| format!("bad pin target in `{s}`"))?;
    Ok((v, t))
}

fn is_path_literal(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b == b'0' || b == b'1')
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_spec(path: &Path) -> anyhow::Result<SpecialTreeSpec> {
    Ok(SpecialTreeSpec::parse_stree(&read(path)?).with_context(|| format!("parsing {}", path.display()))?)
}

/// A digraph from a `.dg` file, a `.stree` file or a path literal.
fn load_digraph(arg: &str) -> anyhow::Result<(Digraph, bool)> {
    let p = Path::new(arg);
    if !p.exists() && is_path_literal(arg) {
        let path: OrientedPath = arg.parse()?;
        return Ok((path.to_digraph(), false));
    }
    let text = read(p)?;
    if p.extension().is_some_and(|e| e == "stree") || text.trim_start().starts_with("stree") {
        let spec = SpecialTreeSpec::parse_stree(&text).with_context(|| format!("parsing {arg}"))?;
        return Ok((compile(&spec)?.digraph, true));
    }
    Ok((Digraph::parse_dg(&text).with_context(|| format!("parsing {arg}"))?, false))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::Build { spec, out, roles } => {
            let tree = compile(&read_spec(&spec)?)?;
            emit(out.as_deref(), &tree.digraph.to_dg())?;
            if let Some(r) = roles {
                fs::write(&r, tree.roles_text()).with_context(|| format!("writing {}", r.display()))?;
            }
            Ok(FOUND)
        }
        Cmd::Solve {
            input,
            target,
            pins,
            method,
            budget,
        } => {
            let (x, _) = load_digraph(&input)?;
            let (h, _) = load_digraph(&target)?;
            match method {
                Method::Bt => match solve_hom(&x, &h, &pins, Some(budget.budget_nodes))? {
                    Some(map) => {
                        let text: String = map.iter().enumerate().map(|(v, t)| format!("{v} {t}\n")).collect();
                        print!("{text}");
                        Ok(FOUND)
                    }
                    None => {
                        println!("no homomorphism");
                        Ok(NONE)
                    }
                },
                Method::Ac | Method::Pc23 => {
                    let inst = build_instance(&x, &h, &pins)?;
                    let consistent = match method {
                        Method::Ac => arc_consistency(&inst).is_some(),
                        _ => consistency_23(&inst).is_some(),
                    };
                    println!("{}", if consistent { "consistent" } else { "refuted" });
                    Ok(if consistent { FOUND } else { NONE })
                }
            }
        }
        Cmd::Poly {
            target,
            kind,
            arity,
            out,
            budget,
        } => {
            let (h, _) = load_digraph(&target)?;
            let b = budget.budget()?;
            let found = match (kind, arity) {
                (Kind::Wnu, k) => find_wnu(&h, k.unwrap_or(3), b)?,
                (Kind::Tsi, k) => find_tsi(&h, k.unwrap_or(3), b)?,
                (Kind::Siggers, None | Some(4)) => find_siggers(&h, b)?,
                (Kind::Majority, None | Some(3)) => find_majority(&h, b)?,
                (Kind::Siggers, Some(k)) => bail!("Siggers operations are 4-ary, not {k}-ary"),
                (Kind::Majority, Some(k)) => bail!("majority operations are 3-ary, not {k}-ary"),
            };
            match found {
                Some(t) => {
                    emit(out.as_deref(), &t.to_op())?;
                    Ok(FOUND)
                }
                None => {
                    eprintln!("no such polymorphism");
                    Ok(NONE)
                }
            }
        }
        Cmd::Classify {
            tree,
            input,
            json: out,
            budget,
        } => {
            let b = budget.budget()?;
            let report = match (tree, input) {
                (Some(t), _) => classify_special_tree(&read_spec(&t)?, b),
                (None, Some(i)) => {
                    let (g, from_spec) = load_digraph(&i)?;
                    let special = from_spec || decompose_special_tree(&g).is_ok();
                    classify_digraph(&g, special, b)
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            emit(out.as_deref(), &json(&report)?)?;
            if out.is_some() {
                println!("{}", json(&report.verdict)?.trim());
            }
            Ok(match report.verdict {
                Verdict::BoundedWidth => FOUND,
                Verdict::NpComplete => NONE,
                Verdict::Undetermined => BUDGET,
            })
        }
        Cmd::Core {
            input,
            out,
            map,
            budget_nodes,
        } => {
            let (g, _) = load_digraph(&input)?;
            let c = compute_core(&g, budget_nodes)?;
            emit(out.as_deref(), &c.core.to_dg())?;
            if let Some(m) = map {
                let text: String = c.retraction.iter().enumerate().map(|(v, t)| format!("{v} {t}\n")).collect();
                fs::write(&m, text).with_context(|| format!("writing {}", m.display()))?;
            }
            Ok(FOUND)
        }
        Cmd::Verify {
            tree,
            suite,
            seed,
            json: out,
            budget,
        } => {
            if suite != "lemmas" {
                bail!("unknown suite `{suite}` (available: lemmas)");
            }
            let report = verify_lemma_suite(&read_spec(&tree)?, seed, budget.budget()?)?;
            emit(out.as_deref(), &json(&report)?)?;
            Ok(if report.passed() { FOUND } else { NONE })
        }
        Cmd::Gen {
            seed,
            a_count,
            b_count,
            height,
            max_path_len,
            out,
        } => {
            let spec = gen_random_special_tree(seed, a_count, b_count, height, max_path_len.unwrap_or(height + 2))?;
            emit(out.as_deref(), &spec.to_stree())?;
            Ok(FOUND)
        }
        Cmd::Convert { input, to, out } => {
            let (g, _) = load_digraph(&input)?;
            let text = match to {
                Format::Dg => g.to_dg(),
                Format::Stree => decompose_special_tree(&g)
                    .map_err(|e| anyhow!("input is not a special tree: {e}"))?
                    .0
                    .to_stree(),
            };
            emit(out.as_deref(), &text)?;
            Ok(FOUND)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { FOUND });
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e.chain().any(|c| c.downcast_ref::<hcolor::Error>().is_some_and(|h| h.is_budget()));
            ExitCode::from(if budget { BUDGET } else { USAGE })
        }
    }
}
