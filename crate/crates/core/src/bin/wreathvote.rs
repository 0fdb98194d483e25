use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wreathvote::ballot::{
    analyze_rule_on_profile, named_weights, schur_parameters, tally_committee_ballots, BallotTally, DistanceWeights,
    NamedWeights,
};
use wreathvote::combinatorics::{enumerate_committees, enumerate_orbits, orbit_count, Caps, Committee, Shape};
use wreathvote::decomposition::{decompose_result, distance_profile, DecompositionReport};
use wreathvote::error::{Error, Result};
use wreathvote::linalg::{format_rational, parse_rational, RatVector, Rational};
use wreathvote::paradox::{construct_paradox_profile, verify_solution, ParadoxInstance};
use wreathvote::ranking::{
    analyze_2wr2, effective_space, orbit_effective_space, parameter_count, permute_weights_identical, tally_rankings,
    OrbitSpace, OrbitWeights, RankingProfile,
};

#[derive(Parser)]
#[command(name = "wreathvote", version, about = "Exact analysis of voting on structured committees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Common {
    /// Candidates per department.
    #[arg(long)]
    m: usize,
    /// Number of departments.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest number of committees m^n.
    #[arg(long, default_value_t = Caps::default().dim)]
    cap_dim: usize,
    /// Largest number of rankings (m^n)! to enumerate.
    #[arg(long, default_value_t = Caps::default().rankings)]
    cap_fact: u64,
    /// Largest group order (m!)^n n!.
    #[arg(long, default_value_t = Caps::default().group)]
    cap_group: u64,
}

impl Common {
    fn shape(&self) -> Result<Shape> {
        Shape::new(self.m, self.n)
    }

    fn caps(&self) -> Result<Caps> {
        if self.cap_dim == 0 || self.cap_fact == 0 || self.cap_group == 0 {
            return Err(Error::Invalid("caps must be positive".into()));
        }
        Ok(Caps { dim: self.cap_dim, group: self.cap_group, rankings: self.cap_fact })
    }
}

#[derive(Subcommand)]
enum Command {
    /// List committees in lexicographic order.
    Committees {
        #[command(flatten)]
        common: Common,
    },
    /// Split a vector of committee scores into its components.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Comma-separated entries.
        #[arg(long, conflicts_with = "vector_file")]
        vector: Option<String>,
        /// JSON array of entries, or `-` for stdin.
        #[arg(long)]
        vector_file: Option<String>,
    },
    /// Entry values of the component spanning vectors by disagreement count.
    DistanceProfile {
        #[command(flatten)]
        common: Common,
        /// Only this component; all components otherwise.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Scalars by which a distance-weight rule acts on each component.
    Schur {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weights: DistanceArgs,
    },
    /// Score committee ballots with a distance-weight rule.
    TallyBallots {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weights: DistanceArgs,
        /// JSON object from committee index to multiplicity (file, inline JSON, or `-`).
        #[arg(long)]
        profile: String,
        /// Also decompose the profile and the scores.
        #[arg(long)]
        analyze: bool,
    },
    /// Score ranking ballots with per-orbit position weights.
    TallyRankings {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weights: OrbitArgs,
        /// JSON list of {"ranking": [...], "count": "p/q"} (file, inline JSON, or `-`).
        #[arg(long)]
        profile: String,
    },
    /// Orbits of rankings under the wreath product.
    Orbits {
        #[command(flatten)]
        common: Common,
        /// Print only the number of orbits, computed without enumeration.
        #[arg(long)]
        count_only: bool,
    },
    /// Rank, kernel and image of a ranking rule, orbit by orbit.
    Effective {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        weights: OrbitArgs,
        /// Restrict to one orbit.
        #[arg(long)]
        orbit: Option<String>,
    },
    /// Case analysis of three m = n = 2 orbit weights.
    TwoByTwo {
        /// Weights a,b,c,d for orbit 1.
        #[arg(long)]
        w1: String,
        /// Weights for orbit 2; defaults to w1.
        #[arg(long)]
        w2: Option<String>,
        /// Weights for orbit 3; defaults to w1.
        #[arg(long)]
        w3: Option<String>,
        /// Derive w2 and w3 from w1 so all orbits act alike.
        #[arg(long, conflicts_with_all = ["w2", "w3"])]
        permuted: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build a profile on one orbit meeting several targets at once.
    Paradox {
        #[command(flatten)]
        common: Common,
        /// JSON instance {"weights": [...], "targets": [...], "orbit": key} (file, inline JSON, or `-`).
        #[arg(long)]
        instance: Option<String>,
        /// Position weights, `;` between vectors (instead of --instance).
        #[arg(long, requires_all = ["targets", "orbit"], conflicts_with = "instance")]
        weights: Option<String>,
        /// Target score vectors, `;` between vectors.
        #[arg(long)]
        targets: Option<String>,
        /// Orbit key; overrides the instance's.
        #[arg(long)]
        orbit: Option<String>,
    },
    /// Number of free weights in a general ranking rule.
    ParamCount {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct DistanceArgs {
    /// Distance weights a0,a1,...,an.
    #[arg(long, conflicts_with = "named")]
    weights: Option<String>,
    /// One of borda_like, approval_nondisjoint, complement_pair, parity_even, alternating, first_last.
    #[arg(long)]
    named: Option<String>,
}

impl DistanceArgs {
    fn resolve(&self, shape: Shape) -> Result<DistanceWeights> {
        match (&self.weights, &self.named) {
            (Some(text), _) => DistanceWeights::parse(shape, text),
            (None, Some(name)) => named_weights(name.parse::<NamedWeights>()?, shape.m, shape.n),
            (None, None) => Err(Error::Invalid("give --weights or --named".into())),
        }
    }
}

#[derive(Args)]
struct OrbitArgs {
    /// One position-weight vector for every orbit.
    #[arg(long, conflicts_with = "weights_file")]
    weights: Option<String>,
    /// JSON {"default": [...], "orbits": {"<key>": [...]}} (file, inline JSON, or `-`).
    #[arg(long)]
    weights_file: Option<String>,
}

impl OrbitArgs {
    fn resolve(&self, shape: Shape, caps: &Caps) -> Result<OrbitWeights> {
        match (&self.weights, &self.weights_file) {
            (Some(text), _) => OrbitWeights::uniform(shape, text.parse()?, caps),
            (None, Some(src)) => OrbitWeights::from_json(shape, &read_source(src)?, caps),
            (None, None) => Err(Error::Invalid("give --weights or --weights-file".into())),
        }
    }
}

/// Inline JSON, `-` for stdin, or a file path.
fn read_source(src: &str) -> Result<String> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(src).map_err(|e| Error::Invalid(format!("{src}: {e}")))
}

fn parse_vector_list(text: &str) -> Result<Vec<RatVector>> {
    text.split(';').map(str::parse).collect()
}

/// Committee ballots: either a JSON object from index to count or a dense array.
fn parse_ballots(text: &str, dim: usize) -> Result<RatVector> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let count = |v: &serde_json::Value| -> Result<Rational> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(x) => parse_rational(&x.to_string()),
            other => Err(Error::Parse(format!("bad multiplicity {other}"))),
        }
    };
    match value {
        serde_json::Value::Object(map) => {
            let mut p = RatVector::zeros(dim);
            for (key, v) in &map {
                let idx: usize =
                    key.trim().parse().map_err(|_| Error::Parse(format!("bad committee index {key:?}")))?;
                if idx >= dim {
                    return Err(Error::Invalid(format!("committee index {idx} is outside 0..{dim}")));
                }
                p[idx] += count(v)?;
            }
            Ok(p)
        }
        serde_json::Value::Array(items) => {
            if items.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: items.len() });
            }
            Ok(RatVector::new(items.iter().map(count).collect::<Result<Vec<_>>>()?))
        }
        other => Err(Error::Parse(format!("expected an object or array, got {other}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn fmt_vec(v: &RatVector) -> String {
    v.to_string()
}

fn report_table(shape: Shape, report: &DecompositionReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<16} {:>12}", "committee", "input"));
    for k in 0..report.components.len() {
        out.push_str(&format!(" {:>12}", format!("k={k}")));
    }
    out.push('\n');
    for i in 0..report.input.dim() {
        out.push_str(&format!(
            "{:<16} {:>12}",
            Committee::from_index(shape, i).label(),
            format_rational(&report.input[i])
        ));
        for comp in &report.components {
            out.push_str(&format!(" {:>12}", format_rational(&comp[i])));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:<16} {:>12}", "norm^2", ""));
    for x in &report.norms_squared {
        out.push_str(&format!(" {:>12}", format_rational(x)));
    }
    out.push('\n');
    out
}

fn tally_table(shape: Shape, t: &BallotTally) -> String {
    let mut out = String::new();
    for i in 0..t.scores.dim() {
        let c = Committee::from_index(shape, i);
        let mark = if t.winners.contains(&c) { " *" } else { "" };
        out.push_str(&format!("{:>4}  {:<16} {:>12}{mark}\n", i, c.label(), format_rational(&t.scores[i])));
    }
    out.push_str(&format!("winners: {}\n", join(&t.winners.iter().map(Committee::label).collect::<Vec<_>>())));
    out
}

fn orbit_space_line(shape: Shape, o: &OrbitSpace) -> String {
    let alias = o.orbit.alias.map(|a| format!(" (orbit-{a})")).unwrap_or_default();
    format!(
        "{}{alias}  {}  rank {}  kernel {}  image dims {:?}\n",
        o.orbit.id,
        o.orbit.representative.label(shape),
        o.rank,
        o.kernel_dim,
        o.component_dims_of_image
    )
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Committees { common } => {
            let shape = common.shape()?;
            let committees = enumerate_committees(shape, &common.caps()?)?;
            Ok(match common.format {
                Format::Json => to_json(&json!({
                    "m": shape.m,
                    "n": shape.n,
                    "committees": committees.iter().enumerate().map(|(i, c)| json!({
                        "index": i,
                        "label": c.label(),
                        "choices": c.choices(),
                    })).collect::<Vec<_>>(),
                })),
                Format::Table => {
                    committees.iter().enumerate().map(|(i, c)| format!("{i:>4}  {}\n", c.label())).collect()
                }
            })
        }
        Command::Decompose { common, vector, vector_file } => {
            let shape = common.shape()?;
            let caps = common.caps()?;
            let v: RatVector = match (vector, vector_file) {
                (Some(text), _) => text.parse()?,
                (None, Some(src)) => {
                    serde_json::from_str(&read_source(&src)?).map_err(|e| Error::Parse(e.to_string()))?
                }
                (None, None) => return Err(Error::Invalid("give --vector or --vector-file".into())),
            };
            let report = decompose_result(shape, &v, &caps)?;
            Ok(match common.format {
                Format::Json => to_json(&report),
                Format::Table => report_table(shape, &report),
            })
        }
        Command::DistanceProfile { common, k } => {
            let shape = common.shape()?;
            let ks: Vec<usize> = match k {
                Some(k) => vec![k],
                None => (0..=shape.n).collect(),
            };
            let profiles = ks.into_iter().map(|k| distance_profile(shape, k)).collect::<Result<Vec<_>>>()?;
            Ok(match common.format {
                Format::Json => to_json(&profiles),
                Format::Table => profiles.iter().map(|p| format!("k={}  {}\n", p.k, p.display())).collect(),
            })
        }
        Command::Schur { common, weights } => {
            let shape = common.shape()?;
            let w = weights.resolve(shape)?;
            let params = schur_parameters(&w, &common.caps()?)?;
            Ok(match common.format {
                Format::Json => to_json(&json!({
                    "weights": w,
                    "lambda": params.lambda.iter().map(format_rational).collect::<Vec<_>>(),
                })),
                Format::Table => {
                    let mut out = format!("weights {}\n", w.display());
                    for (k, l) in params.lambda.iter().enumerate() {
                        out.push_str(&format!("k={k}  lambda {}\n", format_rational(l)));
                    }
                    out
                }
            })
        }
        Command::TallyBallots { common, weights, profile, analyze } => {
            let shape = common.shape()?;
            let caps = common.caps()?;
            let w = weights.resolve(shape)?;
            let p = parse_ballots(&read_source(&profile)?, shape.dim(&caps)?)?;
            let tally = tally_committee_ballots(&w, &p, &caps)?;
            if analyze {
                let analysis = analyze_rule_on_profile(&w, &p, &caps)?;
                return Ok(match common.format {
                    Format::Json => to_json(&json!({ "tally": tally, "analysis": analysis })),
                    Format::Table => format!(
                        "{}\nprofile\n{}\nscores\n{}\nlambda [{}]\n",
                        tally_table(shape, &tally),
                        report_table(shape, &analysis.profile),
                        report_table(shape, &analysis.scores),
                        join(&analysis.parameters.lambda.iter().map(format_rational).collect::<Vec<_>>())
                    ),
                });
            }
            Ok(match common.format {
                Format::Json => to_json(&tally),
                Format::Table => tally_table(shape, &tally),
            })
        }
        Command::TallyRankings { common, weights, profile } => {
            let shape = common.shape()?;
            let caps = common.caps()?;
            let ow = weights.resolve(shape, &caps)?;
            let p = RankingProfile::from_json(shape, &read_source(&profile)?)?;
            let tally = tally_rankings(&ow, &p, &caps)?;
            Ok(match common.format {
                Format::Json => to_json(&tally),
                Format::Table => tally_table(shape, &tally),
            })
        }
        Command::Orbits { common, count_only } => {
            let shape = common.shape()?;
            if count_only {
                let count = orbit_count(shape.m, shape.n);
                return Ok(match common.format {
                    Format::Json => to_json(&json!({ "m": shape.m, "n": shape.n, "orbit_count": count.to_string() })),
                    Format::Table => format!("{count}\n"),
                });
            }
            let orbits = enumerate_orbits(shape, &common.caps()?)?;
            Ok(match common.format {
                Format::Json => to_json(&json!({
                    "m": shape.m,
                    "n": shape.n,
                    "orbit_count": orbits.len(),
                    "orbits": orbits,
                })),
                Format::Table => orbits
                    .iter()
                    .map(|o| {
                        let alias = o.alias.map(|a| format!("  orbit-{a}")).unwrap_or_default();
                        format!("{:>6}  size {}  {}{alias}\n", o.id, o.size, o.representative.label(shape))
                    })
                    .collect(),
            })
        }
        Command::Effective { common, weights, orbit } => {
            let shape = common.shape()?;
            let caps = common.caps()?;
            let ow = weights.resolve(shape, &caps)?;
            if let Some(key) = orbit {
                let rep = wreathvote::combinatorics::resolve_orbit_key(shape, &key, &caps)?;
                let info = wreathvote::combinatorics::orbit_of_ranking(shape, &rep, &caps)?;
                let space = orbit_effective_space(&ow, &info, &caps)?;
                return Ok(match common.format {
                    Format::Json => to_json(&space),
                    Format::Table => orbit_space_line(shape, &space),
                });
            }
            let report = effective_space(&ow, &caps)?;
            Ok(match common.format {
                Format::Json => to_json(&report),
                Format::Table => {
                    let mut out: String = report.per_orbit.iter().map(|o| orbit_space_line(shape, o)).collect();
                    out.push_str(&format!(
                        "total image rank {}  image dims {:?}\n",
                        report.total_image_rank, report.image_component_dims
                    ));
                    out
                }
            })
        }
        Command::TwoByTwo { w1, w2, w3, permuted, format } => {
            let w1: RatVector = w1.parse()?;
            let (w1, w2, w3) = if permuted {
                permute_weights_identical(&w1)?
            } else {
                let w2 = w2.map(|s| s.parse()).transpose()?.unwrap_or_else(|| w1.clone());
                let w3 = w3.map(|s| s.parse()).transpose()?.unwrap_or_else(|| w1.clone());
                (w1, w2, w3)
            };
            let report = analyze_2wr2(&w1, &w2, &w3)?;
            Ok(match format {
                Format::Json => to_json(&report),
                Format::Table => report
                    .orbits
                    .iter()
                    .map(|o| {
                        format!(
                            "orbit-{}  w {}  x = ({}, {}, {}, {})  image dims {:?}  killed {:?}  rank {}\n",
                            o.alias,
                            fmt_vec(&o.weights),
                            format_rational(&o.coordinates.x1),
                            format_rational(&o.coordinates.x2),
                            format_rational(&o.coordinates.x3),
                            format_rational(&o.coordinates.x4),
                            o.image_component_dims,
                            o.killed,
                            o.rank
                        )
                    })
                    .collect(),
            })
        }
        Command::Paradox { common, instance, weights, targets, orbit } => {
            let shape = common.shape()?;
            let caps = common.caps()?;
            let mut inst = match (instance, weights, targets, &orbit) {
                (Some(src), _, _, _) => ParadoxInstance::from_json(shape, &read_source(&src)?, &caps)?,
                (None, Some(w), Some(t), Some(key)) => {
                    ParadoxInstance::new(shape, parse_vector_list(&w)?, parse_vector_list(&t)?, key, &caps)?
                }
                _ => return Err(Error::Invalid("give --instance, or --weights, --targets and --orbit".into())),
            };
            if let Some(key) = orbit {
                let rep = wreathvote::combinatorics::resolve_orbit_key(shape, &key, &caps)?;
                inst.orbit = wreathvote::combinatorics::orbit_of_ranking(shape, &rep, &caps)?;
            }
            let sol = construct_paradox_profile(&inst, &caps)?;
            let verified = verify_solution(&inst, &sol, &caps);
            Ok(match common.format {
                Format::Json => to_json(&json!({
                    "orbit": inst.orbit,
                    "profile": sol.profile,
                    "solution_space_dim": sol.solution_space_dim,
                    "orbit_count": orbit_count(shape.m, shape.n).to_string(),
                    "verified": verified,
                })),
                Format::Table => {
                    let mut out: String = sol
                        .profile
                        .votes
                        .iter()
                        .map(|(r, c)| format!("{:>10}  {}\n", format_rational(c), r.label(shape)))
                        .collect();
                    out.push_str(&format!("solution space dim {}  verified {verified}\n", sol.solution_space_dim));
                    out
                }
            })
        }
        Command::ParamCount { common } => {
            let shape = common.shape()?;
            let count = parameter_count(shape.m, shape.n);
            Ok(match common.format {
                Format::Json => to_json(&json!({
                    "m": shape.m,
                    "n": shape.n,
                    "parameter_count": count.to_string(),
                    "orbit_count": orbit_count(shape.m, shape.n).to_string(),
                })),
                Format::Table => format!("{count}\n"),
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeGuard { .. } => 2,
        Error::Infeasible(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let nl = if out.ends_with('\n') { "" } else { "\n" };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = write!(stdout, "{out}{nl}").and_then(|_| stdout.flush());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
