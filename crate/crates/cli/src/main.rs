//! `corevote`: command-line access to the corevote library.
//!
//! Results are printed as JSON on stdout. Exit status is 0 on success, 2 on
//! usage errors, 3 when the enumeration guard refuses an instance and 1 on
//! any other error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corevote::constructive::{
    algorithm1_totsep, algorithm2_greedy_cc, jr_check, map_av_to_pav, map_av_to_sav,
    map_pav_to_av, map_sav_to_av,
};
use corevote::games::{
    enumerate_ntu_core, ntu_core_membership, tu_core_membership, tu_core_nonempty, Achieved,
    BlockingWitness, CoreVerdict, GameModel, TuCoreOutcome,
};
use corevote::io::{parse_profile_json, parse_profile_text, parse_utility_vector, to_profile_json};
use corevote::reductions::{
    gen_biclique_av_membership, gen_rx3c_pav_membership, gen_setcover_cc_membership,
    BicliqueInstance, Rx3cInstance, SetCoverInstance,
};
use corevote::scoring::{coalition_score, coalition_value, induced_scores, seat_cap, winning_committees};
use corevote::shapley::shapley_value;
use corevote::{Coalition, EnumerationGuard, Error, Instance, Rule, UtilityVector};
use serde_json::{json, Value};

const GUARD_ENV: &str = "COREVOTE_GUARD_LIMIT";

#[derive(Parser)]
#[command(name = "corevote", version, about = "Core stability for approval-based committee voting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Rx3c,
    Biclique,
    Setcover,
}

#[derive(Args)]
struct Common {
    /// Profile file.
    #[arg(long)]
    profile: PathBuf,
    /// Format of the profile file.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Lift the enumeration guard.
    #[arg(long)]
    override_guard: bool,
    /// Print a human-readable summary on stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Scores of a committee, per voter and in total.
    Score {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rule: Rule,
        /// Comma-separated alternative names.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        committee: Vec<String>,
        /// Restrict the total to these voters.
        #[arg(long, value_delimiter = ',')]
        coalition: Option<Vec<String>>,
    },
    /// All winning committees and their score.
    Winners {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rule: Rule,
    },
    /// Value of a coalition under its seat cap.
    CoalitionValue {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rule: Rule,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        coalition: Vec<String>,
    },
    /// One core-stable utility vector.
    CoreElement {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: GameModel,
        #[arg(long)]
        rule: Rule,
    },
    /// Core membership of a utility vector, with a blocking witness if any.
    CoreCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: GameModel,
        #[arg(long)]
        rule: Rule,
        /// JSON array of fractions, one per voter.
        #[arg(long)]
        alpha: PathBuf,
    },
    /// Committees whose induced vectors form the NTU core.
    CoreEnumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rule: Rule,
    },
    /// Whether the TU core is non-empty.
    CoreNonempty {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rule: Rule,
    },
    /// Shapley value of every voter in the TU game.
    Shapley {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        rule: Rule,
    },
    /// Justified representation of a size-k committee.
    JrCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        committee: Vec<String>,
    },
    /// Translate utility vectors between AV and PAV or SAV.
    MapUtilities {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        from: Rule,
        #[arg(long)]
        to: Rule,
    },
    /// Build a voting instance from an exact cover, biclique or set cover source.
    Gen {
        #[arg(long, value_enum)]
        source: Source,
        /// Source instance as JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        verbose: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Domain(Error::InvalidSource(format!("{}: {e}", path.display()))))
}

fn guard(common: &Common) -> Result<EnumerationGuard, Failure> {
    let mut guard = EnumerationGuard::default();
    if let Ok(limit) = std::env::var(GUARD_ENV) {
        let bad = || Failure::Usage(format!("{GUARD_ENV} must be VOTERS or VOTERS,COMMITTEES, got {limit:?}"));
        let mut parts = limit.split(',').map(str::trim);
        guard.max_voters = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if let Some(c) = parts.next() {
            guard.max_committees = c.parse().map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
    }
    guard.override_limits = common.override_guard;
    Ok(guard)
}

fn load(common: &Common) -> Result<Instance, Failure> {
    let text = read(&common.profile)?;
    Ok(match common.format {
        Format::Json => parse_profile_json(&text)?,
        Format::Text => parse_profile_text(&text)?,
    })
}

fn load_alpha(path: &Path, n: usize) -> Result<UtilityVector, Failure> {
    Ok(parse_utility_vector(&read(path)?, n)?)
}

fn names(instance: &Instance, coalition: &Coalition) -> Value {
    json!(instance.coalition_names(coalition))
}

fn witness_json(instance: &Instance, w: &BlockingWitness) -> Value {
    json!({
        "coalition": names(instance, &w.coalition),
        "committee": instance.committee_names(&w.committee),
        "model": w.model,
        "achieved": match &w.achieved {
            Achieved::Total(t) => json!(t),
            Achieved::PerVoter(v) => json!(v),
        },
    })
}

fn verdict_json(instance: &Instance, verdict: &CoreVerdict) -> Value {
    match verdict {
        CoreVerdict::Member => json!({ "status": "member" }),
        CoreVerdict::Blocked(w) => json!({ "status": "blocked", "witness": witness_json(instance, w) }),
        CoreVerdict::Infeasible(reason) => json!({
            "status": "infeasible",
            "reason": reason,
            "message": reason.to_string(),
        }),
    }
}

fn say(verbose: bool, message: impl FnOnce() -> String) {
    if verbose {
        eprintln!("{}", message());
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Score { common, rule, committee, coalition } => {
            let inst = load(&common)?;
            let w = inst.committee(&committee)?;
            let scores = induced_scores(rule, inst.profile(), &w)?;
            let coalition = match coalition {
                Some(c) => inst.coalition(&c)?,
                None => Coalition::grand(inst.n()),
            };
            let total = coalition_score(rule, inst.profile(), &coalition, &w)?;
            say(common.verbose, || format!("{rule} score of {:?}: {total}", inst.committee_names(&w)));
            Ok(json!({ "total": total, "scores": scores }))
        }
        Command::Winners { common, rule } => {
            let inst = load(&common)?;
            let (value, winners) = winning_committees(&inst, rule, &guard(&common)?)?;
            say(common.verbose, || format!("{} winning committee(s) with {rule} score {value}", winners.len()));
            let winners: Vec<Vec<String>> = winners.iter().map(|w| inst.committee_names(w)).collect();
            Ok(json!({ "value": value, "committees": winners }))
        }
        Command::CoalitionValue { common, rule, coalition } => {
            let inst = load(&common)?;
            let c = inst.coalition(&coalition)?;
            let v = coalition_value(&inst, rule, &c, &guard(&common)?)?;
            say(common.verbose, || format!("seat cap {}, value {}", seat_cap(&inst, &c), v.score));
            Ok(json!({
                "value": v.score,
                "committee": inst.committee_names(&v.committee),
                "seat_cap": seat_cap(&inst, &c),
            }))
        }
        Command::CoreElement { common, model, rule } => {
            let inst = load(&common)?;
            let g = guard(&common)?;
            let found = match (model, rule) {
                (GameModel::Tu, Rule::Av | Rule::Sav) => Some(algorithm1_totsep(&inst, rule)?),
                (GameModel::Tu, _) => match tu_core_nonempty(&inst, rule, &g)? {
                    TuCoreOutcome::NonEmpty(alpha) => Some(alpha),
                    TuCoreOutcome::Empty { .. } => None,
                },
                (GameModel::Ntu, Rule::Cc) => {
                    let (alpha, w) = algorithm2_greedy_cc(&inst);
                    say(common.verbose, || format!("greedy committee {:?}", inst.committee_names(&w)));
                    Some(alpha)
                }
                (GameModel::Ntu, _) => enumerate_ntu_core(&inst, rule, &g)?.into_iter().next().map(|(w, alpha)| {
                    say(common.verbose, || format!("induced by {:?}", inst.committee_names(&w)));
                    alpha
                }),
            };
            match found {
                Some(alpha) => Ok(json!(alpha)),
                None => {
                    say(common.verbose, || format!("the {model} core is empty under {rule}"));
                    Ok(json!({ "status": "empty" }))
                }
            }
        }
        Command::CoreCheck { common, model, rule, alpha } => {
            let inst = load(&common)?;
            let alpha = load_alpha(&alpha, inst.n())?;
            let g = guard(&common)?;
            let verdict = match model {
                GameModel::Tu => tu_core_membership(&inst, rule, &alpha, &g)?,
                GameModel::Ntu => ntu_core_membership(&inst, rule, &alpha, &g)?,
            };
            say(common.verbose, || format!("{verdict:?}"));
            Ok(verdict_json(&inst, &verdict))
        }
        Command::CoreEnumerate { common, rule } => {
            let inst = load(&common)?;
            let core = enumerate_ntu_core(&inst, rule, &guard(&common)?)?;
            say(common.verbose, || format!("{} committee(s) in the NTU core", core.len()));
            Ok(Value::Array(
                core.iter()
                    .map(|(w, alpha)| json!({ "committee": inst.committee_names(w), "utilities": alpha }))
                    .collect(),
            ))
        }
        Command::CoreNonempty { common, rule } => {
            let inst = load(&common)?;
            Ok(match tu_core_nonempty(&inst, rule, &guard(&common)?)? {
                TuCoreOutcome::NonEmpty(alpha) => json!({ "status": "nonempty", "alpha": alpha }),
                TuCoreOutcome::Empty { system, coalitions, certificate } => {
                    say(common.verbose, || {
                        format!("empty: {} coalition rows contradict efficiency", coalitions.len())
                    });
                    let coalitions: Vec<Value> = coalitions.iter().map(|c| names(&inst, c)).collect();
                    json!({
                        "status": "empty",
                        "coalitions": coalitions,
                        "system": system,
                        "certificate": certificate,
                    })
                }
            })
        }
        Command::Shapley { common, rule } => {
            let inst = load(&common)?;
            Ok(json!(shapley_value(&inst, rule, &guard(&common)?)?))
        }
        Command::JrCheck { common, committee } => {
            let inst = load(&common)?;
            let w = inst.committee(&committee)?;
            Ok(match jr_check(&inst, &w)? {
                None => json!({ "status": "jr" }),
                Some(v) => json!({
                    "status": "violation",
                    "cohesive_group": names(&inst, &v.cohesive_group),
                    "common_alternative": inst.profile().alternative_name(v.common_alternative),
                }),
            })
        }
        Command::MapUtilities { common, alpha, from, to } => {
            let inst = load(&common)?;
            let alpha = load_alpha(&alpha, inst.n())?;
            let (k, p) = (inst.k(), inst.profile());
            let mapped = match (from, to) {
                (a, b) if a == b => alpha,
                (Rule::Av, Rule::Pav) => map_av_to_pav(&alpha, k)?,
                (Rule::Av, Rule::Sav) => map_av_to_sav(&alpha, p)?,
                (Rule::Pav, Rule::Av) => map_pav_to_av(&alpha, k)?,
                (Rule::Sav, Rule::Av) => map_sav_to_av(&alpha, p)?,
                (Rule::Pav, Rule::Sav) => map_av_to_sav(&map_pav_to_av(&alpha, k)?, p)?,
                (Rule::Sav, Rule::Pav) => map_av_to_pav(&map_sav_to_av(&alpha, p)?, k)?,
                _ => return Err(Failure::Usage(format!("no utility map from {from} to {to}"))),
            };
            Ok(json!(mapped))
        }
        Command::Gen { source, input, verbose } => {
            let text = read(&input)?;
            let parse_err = |e: serde_json::Error| Failure::Domain(Error::Json(e));
            let (inst, alpha) = match source {
                Source::Rx3c => {
                    gen_rx3c_pav_membership(&serde_json::from_str::<Rx3cInstance>(&text).map_err(parse_err)?)?
                }
                Source::Biclique => gen_biclique_av_membership(
                    &serde_json::from_str::<BicliqueInstance>(&text).map_err(parse_err)?,
                )?,
                Source::Setcover => gen_setcover_cc_membership(
                    &serde_json::from_str::<SetCoverInstance>(&text).map_err(parse_err)?,
                )?,
            };
            say(verbose, || format!("generated {} voters, {} alternatives, k = {}", inst.n(), inst.m(), inst.k()));
            let profile: Value = serde_json::from_str(&to_profile_json(&inst)).expect("profile JSON is valid");
            Ok(json!({ "profile": profile, "alpha": alpha }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Usage(message) => eprintln!("error: {message}"),
                Failure::Domain(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&failure))
        }
    }
}

fn exit_code(failure: &Failure) -> u8 {
    match failure {
        Failure::Usage(_) => 2,
        Failure::Domain(e) if e.is_guard() => 3,
        Failure::Domain(_) => 1,
    }
}
