mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use entropy_core::at::{default_roster, run_at_experiment, run_catalog_suite, ATExperiment, Verdict};
use entropy_core::dynamics::{build_endomorphism, NormalSpec, NormalSubgroup};
use entropy_core::entropy::{entropy_H, entropy_H_rel, entropy_h, BudgetPolicy};
use entropy_core::groups::truncation_family;
use entropy_core::permutability::{
    first_non_permutable, matrix_csv, permutability_matrix, sets_permute, sfin_noncofinal_witness, subgroup_enumerate,
    ENUMERATION_CAP,
};
use entropy_core::set::generate_from_codes;
use entropy_core::Error;

use input::{load_budget, load_endo, load_group, load_json, parse_codes, SetArg};

/// Exit status when a run stopped at its budget.
const EXIT_TRUNCATED: u8 = 3;
/// Exit status when a check found a violated invariant.
const EXIT_VIOLATION: u8 = 4;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "entropy", version, about = "Algebraic entropy of group endomorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate H(φ, X) for one set, or h(φ) over a family of finite subgroups.
    Compute(ComputeArgs),
    /// Run one Addition Theorem experiment.
    AtVerify {
        #[arg(long)]
        experiment: PathBuf,
        /// Budget JSON replacing the experiment's own.
        #[arg(long)]
        budget: Option<String>,
        /// Write the full report as JSON (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the built-in experiment roster.
    Suite {
        #[arg(long, value_enum, default_value_t = Roster::Default)]
        roster: Roster,
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Subgroup permutability checks.
    Permute(PermuteArgs),
    /// Named experiments from the built-in roster.
    Examples {
        #[command(subcommand)]
        action: ExampleAction,
    },
    /// Print a JSON schema for one of the input or report formats.
    Schema {
        #[arg(value_enum)]
        kind: SchemaKind,
    },
}

#[derive(Args)]
struct ComputeArgs {
    /// Group spec: catalog name, inline JSON, or a JSON file (`@path` or `*.json`).
    #[arg(long)]
    group: String,
    /// Endomorphism: shorthand such as `shift`, `inner:"(1 2 3)"`, or JSON.
    #[arg(long)]
    endo: String,
    /// `family[:size_bound]`, `subgroup:<json elements>`, or `<json elements>`.
    #[arg(long)]
    set: String,
    #[arg(long, default_value_t = 4)]
    max_exp: u32,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    time_cap: Option<f64>,
    /// Normal subgroup spec (JSON); computes the relative entropy modulo it.
    #[arg(long)]
    relative: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PermuteArgs {
    #[arg(long, required_unless_present = "sfin")]
    group: Option<String>,
    /// Enumerate all subgroups and print the permutability matrix summary.
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = ENUMERATION_CAP)]
    cap: usize,
    /// Write the matrix as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Two generator lists (JSON arrays); tests whether the generated subgroups permute.
    #[arg(long, num_args = 2, value_names = ["F", "E"])]
    pair: Option<Vec<String>>,
    /// Witness that the subgroups S_n do not form a cofinal permutable family.
    #[arg(long, num_args = 2, value_names = ["N", "M"], conflicts_with_all = ["group", "enumerate", "pair"])]
    sfin: Option<Vec<u32>>,
}

#[derive(Subcommand)]
enum ExampleAction {
    List,
    /// Print an example's experiment JSON.
    Show {
        name: String,
    },
    Run {
        name: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Roster {
    Default,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemaKind {
    GroupSpec,
    EndoSpec,
    NormalSpec,
    Budget,
    Experiment,
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_TRUNCATED,
        Some(Error::Invariance { .. } | Error::Specification(_) | Error::Precondition(_)) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Compute(args) => compute(args),
        Command::AtVerify {
            experiment,
            budget,
            json,
        } => {
            let text =
                std::fs::read_to_string(&experiment).with_context(|| format!("reading {}", experiment.display()))?;
            let mut exp = ATExperiment::from_json(&text)?;
            if let Some(b) = budget {
                exp.budget = load_budget(&b)?;
            }
            at_verify(&exp, json)
        }
        Command::Suite { roster, budget, json } => {
            let Roster::Default = roster;
            let budget = budget.map(|b| load_budget(&b)).transpose()?;
            let suite = run_catalog_suite(budget.as_ref())?;
            for r in &suite.reports {
                println!("{}", render::report_line(r));
            }
            let s = &suite.summary;
            println!(
                "{} experiments: {} exact, {} within tolerance, {} inconclusive, {} violations; negative controls {}",
                s.total, s.exact, s.within_tol, s.inconclusive, s.violations, s.negative_controls
            );
            if let Some(path) = json {
                render::write_json(&path, &suite)?;
            }
            Ok(if suite.healthy() { 0 } else { EXIT_VIOLATION })
        }
        Command::Permute(args) => permute(args),
        Command::Examples { action } => examples(action),
        Command::Schema { kind } => {
            println!("{}", render::schema(kind_name(kind)));
            Ok(0)
        }
    }
}

fn kind_name(kind: SchemaKind) -> &'static str {
    match kind {
        SchemaKind::GroupSpec => "group-spec",
        SchemaKind::EndoSpec => "endo-spec",
        SchemaKind::NormalSpec => "normal-spec",
        SchemaKind::Budget => "budget",
        SchemaKind::Experiment => "experiment",
        SchemaKind::Report => "report",
    }
}

fn compute(args: ComputeArgs) -> Result<u8> {
    let (spec, group) = load_group(&args.group)?;
    let phi = build_endomorphism(&spec, &group, &load_endo(&args.endo)?)?;
    let mut budget = BudgetPolicy::default().with_exponent(args.max_exp);
    if let Some(m) = args.max_size {
        budget.max_set_size = m;
    }
    if let Some(t) = args.time_cap {
        budget.time_cap = t;
    }
    let normal = args
        .relative
        .as_deref()
        .map(|text| -> Result<NormalSubgroup> {
            let ns: NormalSpec = serde_json::from_value(load_json(text)?).context("normal subgroup spec")?;
            Ok(NormalSubgroup::build(&ns, &spec, &group)?)
        })
        .transpose()?;

    let (estimate, members) = match SetArg::parse(&args.set)? {
        SetArg::Family(bound) => {
            if normal.is_some() {
                bail!("--relative takes a single set, not a family");
            }
            let family: Vec<_> = truncation_family(&group, bound)?
                .into_iter()
                .map(|f| f.into_set())
                .collect();
            let est = entropy_h(&phi, &family, &budget)?;
            (est.estimate.clone(), Some(est))
        }
        SetArg::Subgroup(values) => {
            let sub = generate_from_codes(&group, &parse_codes(&group, &values)?, budget.max_set_size)?;
            let x = sub.into_set();
            let est = match &normal {
                Some(h) => entropy_H_rel(&phi, &x, h, &budget)?,
                None => entropy_H(&phi, &x, &budget)?,
            };
            (est, None)
        }
        SetArg::Explicit(values) => {
            let x = entropy_core::FiniteSubset::new(&group, parse_codes(&group, &values)?)?;
            let est = match &normal {
                Some(h) => entropy_H_rel(&phi, &x, h, &budget)?,
                None => entropy_H(&phi, &x, &budget)?,
            };
            (est, None)
        }
    };

    println!("group {} endo {}", group.describe(), phi.name());
    print!("{}", render::estimate_text(&estimate));
    if let Some(f) = &members {
        print!("{}", render::members_text(f));
    }
    if let Some(path) = &args.json {
        match &members {
            Some(f) => render::write_json(path, f)?,
            None => render::write_json(path, &estimate)?,
        }
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, estimate.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if estimate.truncated { EXIT_TRUNCATED } else { 0 })
}

fn at_verify(exp: &ATExperiment, json: Option<PathBuf>) -> Result<u8> {
    let report = run_at_experiment(exp)?;
    println!("{}", render::report_line(&report));
    for note in &report.notes {
        println!("  note: {note}");
    }
    if let Some(path) = json {
        render::write_json(&path, &report)?;
    }
    let chain_failed = report.chain_checks.as_ref().is_some_and(|c| !c.all_pass);
    Ok(
        if report.verdict == Verdict::ViolationFlag || (chain_failed && !report.negative_control) {
            EXIT_VIOLATION
        } else if report.verdict == Verdict::InconclusiveBudget && !report.negative_control {
            EXIT_TRUNCATED
        } else {
            0
        },
    )
}

fn permute(args: PermuteArgs) -> Result<u8> {
    if let Some(nm) = args.sfin {
        let w = sfin_noncofinal_witness(nm[0], nm[1])?;
        println!("{}", serde_json::to_string_pretty(&w)?);
        return Ok(0);
    }
    let (_, group) = load_group(args.group.as_deref().expect("clap requires --group"))?;
    if let Some(pair) = args.pair {
        let f = generate_from_codes(&group, &parse_codes(&group, &input::value_list(&pair[0])?)?, args.cap)?;
        let e = generate_from_codes(&group, &parse_codes(&group, &input::value_list(&pair[1])?)?, args.cap)?;
        let r = sets_permute(&f, &e)?;
        println!("{}", serde_json::to_string_pretty(&r)?);
        return Ok(0);
    }
    if !args.enumerate {
        bail!("permute needs --enumerate, --pair or --sfin");
    }
    let subgroups = subgroup_enumerate(&group, args.cap)?;
    let matrix = permutability_matrix(&subgroups)?;
    println!("{}: {} subgroups", group.describe(), subgroups.len());
    for (i, s) in subgroups.iter().enumerate() {
        let gens: Vec<String> = s.generators().iter().map(|c| group.display(c)).collect();
        println!("  {i}: order {} generated by [{}]", s.order(), gens.join(", "));
    }
    match first_non_permutable(&matrix) {
        Some((i, j)) => println!("subgroups {i} and {j} do not permute"),
        None => println!("all pairs permute"),
    }
    if let Some(path) = args.csv {
        std::fs::write(&path, matrix_csv(&matrix)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn examples(action: ExampleAction) -> Result<u8> {
    let roster = default_roster();
    let find = |name: &str| -> Result<ATExperiment> {
        roster
            .iter()
            .find(|e| e.label == name)
            .cloned()
            .ok_or_else(|| anyhow::Error::new(Error::Usage(format!("no example named {name:?}"))))
    };
    match action {
        ExampleAction::List => {
            for e in &roster {
                let tag = if e.negative_control { " (negative control)" } else { "" };
                println!("{}{tag}", e.label);
            }
            Ok(0)
        }
        ExampleAction::Show { name } => {
            println!("{}", serde_json::to_string_pretty(&find(&name)?)?);
            Ok(0)
        }
        ExampleAction::Run { name, json } => at_verify(&find(&name)?, json),
    }
}
