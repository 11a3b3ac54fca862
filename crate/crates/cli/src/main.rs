use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sigma3::report::format_rho;
use sigma3::{build_report, resolve, run_suite, Caps, Status, Subject, SuiteOptions, SUITES};
use sigma3_core::abelian::{format_quartet, pc_abelian_type};
use sigma3_core::artin::artin_pattern;
use sigma3_core::descendants::DescendantOptions;
use sigma3_core::{
    automorphism_group, immediate_descendants, instantiate_family, p_cover, p_quotient, parse_fp, parse_pcp,
    Family, FamilySpec, PQuotientOptions, TreePath,
};

/// Computations with finite 3-groups: p-quotients, p-covers, descendants,
/// Artin transfers and verification suites.
#[derive(Parser, Debug)]
#[command(name = "sigma3", version, about)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for randomized probes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Refuse groups of order larger than 3^N.
    #[arg(long, global = true, default_value_t = 20, value_name = "N")]
    max_order_exp: usize,
    /// Refuse groups of p-class larger than N.
    #[arg(long, global = true, default_value_t = 24, value_name = "N")]
    max_class: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SubjectArgs {
    /// A `.pcp` file.
    #[arg(long, value_name = "FILE")]
    pcp: Option<PathBuf>,
    /// A family (`bifurcation` or `metabelian-chain`), with --e.
    #[arg(long)]
    family: Option<Family>,
    /// Exponent of the family member.
    #[arg(long)]
    e: Option<u32>,
    /// A descendant-tree path such as `<2187,3>-#3;2`.
    #[arg(long)]
    path: Option<TreePath>,
}

impl SubjectArgs {
    fn subject(&self) -> anyhow::Result<Subject> {
        Subject::from_flags(self.pcp.as_deref(), self.family, self.e, self.path.as_ref())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest p-quotient of a finitely presented group (`.fpg`).
    Pq {
        file: PathBuf,
        /// Stop at this p-class.
        #[arg(long)]
        class: Option<u32>,
    },
    /// p-covering group, multiplicator rank and nuclear rank.
    Cover {
        #[command(flatten)]
        subject: SubjectArgs,
    },
    /// Immediate descendants of a given step size.
    Descendants {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// 1 adds transfer kernel types and first-layer invariants.
        #[arg(long, default_value_t = 0)]
        depth: u32,
    },
    /// Structure, Artin pattern and σ-test of one group.
    Report {
        #[command(flatten)]
        subject: SubjectArgs,
        /// 0: structure only, 1: with κ, ρ, α₁, σ, 2: also α₂.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        /// Count immediate descendants of this step size (repeatable).
        #[arg(long)]
        step: Vec<usize>,
    },
    /// Print a family member as `.pcp`.
    Family {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        e: u32,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        /// Restrict to these exponents (comma separated).
        #[arg(long, value_delimiter = ',')]
        e: Option<Vec<u32>>,
        /// Time budget of the stretch search in seconds.
        #[arg(long, default_value_t = 600)]
        budget_secs: u64,
    },
    /// Normalize a `.pcp` or `.fpg` file (comments are dropped).
    Fmt {
        file: PathBuf,
        /// Exit with status 1 if the file is not already normalized.
        #[arg(long)]
        check: bool,
    },
}

/// Exit statuses.
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

struct Output {
    text: String,
    fail: bool,
}

fn render<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<String> {
    if json {
        Ok(serde_json::to_string_pretty(value)? + "\n")
    } else {
        Ok(text())
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let caps = Caps { max_order_exp: cli.max_order_exp, max_class: cli.max_class };
    let ok = |text: String| Ok(Output { text, fail: false });
    match &cli.command {
        Command::Pq { file, class } => {
            let src = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let fp = parse_fp(&src)?;
            let opts = PQuotientOptions { class_bound: *class, max_class: caps.max_class, max_order_exp: caps.max_order_exp };
            let q = p_quotient(&fp, 3, opts)?;
            #[derive(Serialize)]
            struct Pq {
                lo: usize,
                p_class: u32,
                terminated: bool,
                abelianization: String,
                pcp: String,
            }
            let v = Pq {
                lo: q.pc.n(),
                p_class: q.pc.p_class(),
                terminated: q.terminated,
                abelianization: pc_abelian_type(&q.pc).to_string(),
                pcp: q.pc.to_string(),
            };
            ok(render(cli.json, &v, || {
                format!(
                    "# order 3^{}, p-class {}{}\n{}",
                    v.lo,
                    v.p_class,
                    if v.terminated { "" } else { " (class bound reached)" },
                    v.pcp
                )
            })?)
        }
        Command::Cover { subject } => {
            let g = resolve(&subject.subject()?, caps)?;
            let cd = p_cover(&g.pc)?;
            #[derive(Serialize)]
            struct Cover {
                subject: String,
                d: usize,
                r: usize,
                nu: usize,
                pcp: String,
            }
            let v = Cover { subject: g.label, d: cd.d, r: cd.r, nu: cd.nu(), pcp: cd.cover.to_string() };
            ok(render(cli.json, &v, || format!("# {}: d={} r={} nu={}\n{}", v.subject, v.d, v.r, v.nu, v.pcp))?)
        }
        Command::Descendants { subject, step, depth } => {
            let g = resolve(&subject.subject()?, caps)?;
            if g.pc.n() + step > caps.max_order_exp {
                return Err(sigma3_core::Error::ResourceCap(format!(
                    "descendants of order 3^{} exceed the cap 3^{}",
                    g.pc.n() + step,
                    caps.max_order_exp
                ))
                .into());
            }
            let aut = match g.aut.clone() {
                Some(a) => a,
                None => automorphism_group(&g.pc)?,
            };
            let opts = DescendantOptions { with_automorphisms: false, ..Default::default() };
            let rep = immediate_descendants(&g.pc, &aut, *step, opts)?;
            #[derive(Serialize)]
            struct Child {
                index: usize,
                path: Option<String>,
                lo: usize,
                abelianization: String,
                nu: usize,
                orbit: usize,
                kappa: Option<String>,
                kappa_name: Option<&'static str>,
                rho: Option<String>,
                alpha1: Option<String>,
                pcp: String,
            }
            #[derive(Serialize)]
            struct Desc {
                subject: String,
                step: usize,
                multiplicator_rank: usize,
                nucleus_rank: usize,
                allowable: String,
                #[serde(rename = "N")]
                n: usize,
                #[serde(rename = "C")]
                c: usize,
                children: Vec<Child>,
            }
            let children = rep
                .children
                .iter()
                .map(|d| {
                    let pat = if *depth >= 1 { artin_pattern(&d.pc, 1).ok() } else { None };
                    Child {
                        index: d.index,
                        path: g.path.as_ref().map(|p| p.child(*step, d.index).to_string()),
                        lo: d.pc.n(),
                        abelianization: pc_abelian_type(&d.pc).to_string(),
                        nu: d.nucleus_rank,
                        orbit: d.orbit_len,
                        kappa: pat.as_ref().map(|p| p.kappa_canonical.to_string()),
                        kappa_name: pat.as_ref().and_then(|p| p.kappa_name),
                        rho: pat.as_ref().map(|p| format_rho(&p.rho)),
                        alpha1: pat.as_ref().map(|p| format_quartet(&p.alpha1)),
                        pcp: d.pc.to_string(),
                    }
                })
                .collect();
            let v = Desc {
                subject: g.label,
                step: *step,
                multiplicator_rank: rep.multiplicator_rank,
                nucleus_rank: rep.nucleus_rank,
                allowable: rep.allowable.to_string(),
                n: rep.total(),
                c: rep.capable(),
                children,
            };
            ok(render(cli.json, &v, || {
                let mut s = format!(
                    "# {} step {}: N={} C={} (r={}, nu={}, {} allowable subspaces)\n",
                    v.subject, v.step, v.n, v.c, v.multiplicator_rank, v.nucleus_rank, v.allowable
                );
                for c in &v.children {
                    s.push_str(&format!(
                        "#{:<4} 3^{:<3} {:<8} nu={} orbit={}",
                        c.index, c.lo, c.abelianization, c.nu, c.orbit
                    ));
                    if let (Some(k), Some(r), Some(a)) = (&c.kappa, &c.rho, &c.alpha1) {
                        s.push_str(&format!(" kappa~{k}{} rho={r} alpha1={a}", c.kappa_name.map(|n| format!(" {n}")).unwrap_or_default()));
                    }
                    s.push('\n');
                }
                s
            })?)
        }
        Command::Report { subject, depth, step } => {
            let g = resolve(&subject.subject()?, caps)?;
            let r = build_report(&g, *depth, step, caps, Some(cli.seed))?;
            ok(render(cli.json, &r, || r.to_text())?)
        }
        Command::Family { family, e } => {
            let pc = instantiate_family(FamilySpec::new(*family, *e)?)?;
            caps.check(&pc)?;
            #[derive(Serialize)]
            struct Fam {
                family: String,
                e: u32,
                lo: usize,
                pcp: String,
            }
            let v = Fam { family: family.to_string(), e: *e, lo: pc.n(), pcp: pc.to_string() };
            ok(render(cli.json, &v, || format!("# {}({}), order 3^{}\n{}", v.family, v.e, v.lo, v.pcp))?)
        }
        Command::Verify { suite, e, budget_secs } => {
            let opts = SuiteOptions { e: e.clone(), seed: cli.seed, caps, budget: Duration::from_secs(*budget_secs) };
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut results = Vec::new();
            for n in names {
                results.push(run_suite(n, &opts)?);
            }
            let fail = results.iter().any(|r| r.status == Status::Fail);
            let text = render(cli.json, &results, || results.iter().map(|r| r.to_text()).collect())?;
            Ok(Output { text, fail })
        }
        Command::Fmt { file, check } => {
            let src = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let is_pcp = file.extension().is_some_and(|x| x == "pcp")
                || src.lines().map(|l| l.trim()).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("pc "));
            let formatted = if is_pcp { parse_pcp(&src)?.to_string() } else { parse_fp(&src)?.to_string() };
            let fail = *check && formatted != src;
            #[derive(Serialize)]
            struct Fmt {
                normalized: bool,
                text: String,
            }
            let v = Fmt { normalized: formatted == src, text: formatted };
            let text = render(cli.json, &v, || match (*check, v.normalized) {
                (false, _) => v.text.clone(),
                (true, true) => format!("{}: normalized\n", file.display()),
                (true, false) => format!("{}: would be reformatted\n", file.display()),
            })?;
            Ok(Output { text, fail })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<sigma3_core::Error>() {
        Some(sigma3_core::Error::ResourceCap(_)) => EXIT_CAP,
        Some(sigma3_core::Error::Inconsistent(_)) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SIGMA3_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
                None => std::io::stdout().write_all(out.text.as_bytes()).map_err(Into::into),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_USAGE);
            }
            if out.fail {
                ExitCode::from(EXIT_FAIL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
