//! Run configuration and dispatch for the `modgraph` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::census::{enumerate_bounded, enumerate_reduced, is_excluded, Bounds, Census, CensusCache, CensusError, Kind};
use crate::envelope::{check_bijection, pi0_on_census, EnvelopeError};
use crate::homology::{build_complex, check_d_squared, HomologyError, Route};
use crate::operad::{
    check_axioms_sampled, Ass, Comm, InvAss, LinearOperad, Linearized, LoadOptions, OperadDoc, OperadError, SetOperad,
    TableOperad,
};
use crate::structured::{StructureError, StructuredGraph};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_EXCLUDED: u8 = 3;
pub const EXIT_AXIOM: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "MODGRAPH_CACHE";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    #[default]
    Census,
    Homology,
    Pi0,
    Thicken,
    CheckOperad,
    Selfcheck,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RouteName {
    #[default]
    Auto,
    Projector,
}

/// Everything a run needs; the JSON form of the command-line flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub operad: Option<String>,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub legs: Option<usize>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub dump_matrices: Option<PathBuf>,
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub max_arity: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub route: RouteName,
    /// Twists applied when loading the operad.
    #[serde(default)]
    pub load: LoadOptions,
    #[serde(default)]
    pub quick: bool,
}

#[derive(Parser, Debug)]
#[command(name = "modgraph", version, about = "Graph complexes, ribbon and Möbius graphs, and modular envelopes")]
pub struct Cli {
    /// Read the whole run from a JSON file instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Default)]
pub struct Legs {
    #[arg(long)]
    pub rank: Option<usize>,
    /// Number of legs, labelled 1..=n.
    #[arg(long)]
    pub legs: Option<usize>,
    /// Explicit comma-separated leg labels.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,
}

#[derive(Args, Debug, Default)]
pub struct Twists {
    /// Multiply every action by the sign of the permutation.
    #[arg(long)]
    pub twist_sign: bool,
    /// Constant added to every degree.
    #[arg(long, allow_hyphen_values = true)]
    pub degree_shift: Option<i64>,
    /// Adds `leg_shift * (n - 2)` to the degrees of arity n.
    #[arg(long, allow_hyphen_values = true)]
    pub leg_shift: Option<i64>,
    /// Sampled elements per axiom case when verifying a loaded table.
    #[arg(long)]
    pub check_samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Isomorphism classes of reduced graphs.
    Census {
        #[arg(long, value_enum, default_value = "plain")]
        kind: KindArg,
        #[command(flatten)]
        legs: Legs,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        max_vertices: Option<usize>,
    },
    /// Homology of the graph complex with coefficients in an operad.
    Homology {
        /// comm, ass, invass, or a path to an operad table.
        #[arg(long)]
        operad: String,
        #[command(flatten)]
        legs: Legs,
        #[arg(long)]
        dump_matrices: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteName,
        #[command(flatten)]
        twists: Twists,
    },
    /// Connected components of the modular envelope.
    Pi0 {
        #[arg(long)]
        operad: String,
        #[command(flatten)]
        legs: Legs,
    },
    /// Surface invariant of a ribbon or Möbius graph document.
    Thicken {
        #[arg(long)]
        file: PathBuf,
    },
    /// Verifies the cyclic operad axioms.
    CheckOperad {
        #[arg(long)]
        operad: String,
        #[arg(long)]
        max_arity: Option<usize>,
        /// Sampled elements per case; exhaustive when absent.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        twists: Twists,
    },
    /// Runs the property suite.
    Selfcheck {
        /// Smaller grids.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Plain,
    Ribbon,
    Mobius,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Plain => Kind::Plain,
            KindArg::Ribbon => Kind::Ribbon,
            KindArg::Mobius => Kind::Mobius,
        }
    }
}

/// A failure with its exit code and the module it came from.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub module: &'static str,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            module: "cli",
            kind: "ConfigError".into(),
            message: message.into(),
        }
    }

    fn internal(module: &'static str, kind: &str, message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            module,
            kind: kind.into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        json!({"error": {"module": self.module, "kind": self.kind, "message": self.message, "exit_code": self.code}}).to_string()
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        let (code, kind) = match &e {
            CensusError::ExcludedCase { .. } => (EXIT_EXCLUDED, "ExcludedCase"),
            CensusError::DuplicateLabel(_) => (EXIT_CONFIG, "DuplicateLabel"),
            CensusError::CacheCorrupt { .. } => (EXIT_INTERNAL, "CacheCorrupt"),
            CensusError::Io { .. } => (EXIT_INTERNAL, "Io"),
            CensusError::Schema(_) => (EXIT_INTERNAL, "Schema"),
        };
        CliError {
            code,
            module: "census",
            kind: kind.into(),
            message: e.to_string(),
        }
    }
}

impl From<OperadError> for CliError {
    fn from(e: OperadError) -> Self {
        let (code, kind) = match &e {
            OperadError::AxiomViolation(_) => (EXIT_AXIOM, "AxiomViolation"),
            OperadError::Schema(_) => (EXIT_CONFIG, "Schema"),
            OperadError::ArityBelowTwo(_) => (EXIT_CONFIG, "ArityBelowTwo"),
            OperadError::UnsupportedOperad(_) => (EXIT_CONFIG, "UnsupportedOperad"),
            OperadError::MissingArity { .. } => (EXIT_INTERNAL, "MissingArity"),
        };
        CliError {
            code,
            module: "operad",
            kind: kind.into(),
            message: e.to_string(),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Census(c) => c.into(),
            HomologyError::Operad(o) => o.into(),
            other => CliError::internal("homology", "HomologyError", other.to_string()),
        }
    }
}

impl From<EnvelopeError> for CliError {
    fn from(e: EnvelopeError) -> Self {
        match e {
            EnvelopeError::Census(c) => c.into(),
            EnvelopeError::Operad(o) => o.into(),
            other => CliError::internal("envelope", "EnvelopeError", other.to_string()),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError {
            code: EXIT_CONFIG,
            module: "structured",
            kind: "StructureError".into(),
            message: e.to_string(),
        }
    }
}

fn apply_legs(c: &mut RunConfig, l: Legs) {
    c.rank = l.rank;
    c.legs = l.legs;
    c.labels = l.labels;
}

fn apply_twists(c: &mut RunConfig, t: Twists) {
    c.load.twist.sign = t.twist_sign;
    c.load.twist.shift = t.degree_shift.unwrap_or(0);
    c.load.leg_shift = t.leg_shift.unwrap_or(0);
    c.load.check_samples = t.check_samples;
}

impl Cli {
    /// Resolves flags or the config file into a run configuration.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut c = match (self.config, self.command) {
            (Some(_), Some(_)) => return Err(CliError::config("give either --config or a subcommand, not both")),
            (None, None) => return Err(CliError::config("no subcommand given")),
            (Some(path), None) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<RunConfig>(&text)
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
            }
            (None, Some(cmd)) => {
                let mut c = RunConfig::default();
                match cmd {
                    Command::Census {
                        kind,
                        legs,
                        max_edges,
                        max_vertices,
                    } => {
                        c.command = CommandName::Census;
                        c.kind = Some(kind.into());
                        apply_legs(&mut c, legs);
                        c.bounds = Bounds {
                            max_internal_edges: max_edges,
                            max_vertices,
                        };
                    }
                    Command::Homology {
                        operad,
                        legs,
                        dump_matrices,
                        route,
                        twists,
                    } => {
                        c.command = CommandName::Homology;
                        c.operad = Some(operad);
                        apply_legs(&mut c, legs);
                        c.dump_matrices = dump_matrices;
                        c.route = route;
                        apply_twists(&mut c, twists);
                    }
                    Command::Pi0 { operad, legs } => {
                        c.command = CommandName::Pi0;
                        c.operad = Some(operad);
                        apply_legs(&mut c, legs);
                    }
                    Command::Thicken { file } => {
                        c.command = CommandName::Thicken;
                        c.file = Some(file);
                    }
                    Command::CheckOperad {
                        operad,
                        max_arity,
                        samples,
                        twists,
                    } => {
                        c.command = CommandName::CheckOperad;
                        c.operad = Some(operad);
                        c.max_arity = max_arity;
                        c.samples = samples;
                        apply_twists(&mut c, twists);
                    }
                    Command::Selfcheck { quick } => {
                        c.command = CommandName::Selfcheck;
                        c.quick = quick;
                    }
                }
                c
            }
        };
        if let Some(t) = self.threads {
            c.threads = Some(t);
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(d) = self.cache_dir {
            c.cache_dir = Some(d);
        }
        if let Some(o) = self.output {
            c.output = Some(o);
        }
        if let Some(f) = self.format {
            c.format = f;
        }
        Ok(c)
    }
}

impl RunConfig {
    /// Leg labels from `labels` or `legs`; they must agree when both are set.
    pub fn leg_labels(&self) -> Result<Vec<String>, CliError> {
        match (&self.labels, self.legs) {
            (Some(l), Some(n)) if l.len() != n => {
                Err(CliError::config(format!("{} labels given but legs = {n}", l.len())))
            }
            (Some(l), _) => Ok(l.clone()),
            (None, Some(n)) => Ok(crate::census::default_labels(n)),
            (None, None) => Ok(Vec::new()),
        }
    }

    fn rank_required(&self) -> Result<usize, CliError> {
        self.rank.ok_or_else(|| CliError::config(format!("{:?} needs a rank", self.command)))
    }

    fn operad_required(&self) -> Result<&str, CliError> {
        self.operad.as_deref().ok_or_else(|| CliError::config(format!("{:?} needs an operad", self.command)))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.threads == Some(0) {
            return Err(CliError::config("threads must be positive"));
        }
        let labels = self.leg_labels()?;
        match self.command {
            CommandName::Census => {
                self.rank_required()?;
            }
            CommandName::Homology | CommandName::Pi0 => {
                self.rank_required()?;
                self.operad_required()?;
            }
            CommandName::Thicken => {
                if self.file.is_none() {
                    return Err(CliError::config("thicken needs a file"));
                }
            }
            CommandName::CheckOperad => {
                self.operad_required()?;
            }
            CommandName::Selfcheck => {}
        }
        if self.format == Format::Csv && !matches!(self.command, CommandName::Census | CommandName::Homology) {
            return Err(CliError::config("csv output is only available for census and homology"));
        }
        if self.command == CommandName::Homology && self.kind.is_some_and(|k| k != Kind::Plain) {
            return Err(CliError::config("homology runs on plain censuses"));
        }
        if let Some(r) = self.rank {
            if matches!(self.command, CommandName::Census | CommandName::Homology | CommandName::Pi0)
                && is_excluded(r, labels.len())
            {
                return Err(CensusError::ExcludedCase { g: r, n: labels.len() }.into());
            }
        }
        Ok(())
    }

    fn cache(&self) -> Option<CensusCache> {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .or_else(|| self.cache_dir.clone())
            .map(CensusCache::new)
    }

    fn census(&self, kind: Kind) -> Result<Census, CliError> {
        let g = self.rank_required()?;
        let labels = self.leg_labels()?;
        Ok(match self.cache() {
            Some(cache) => cache.load_or_compute(kind, g, &labels, self.bounds)?.0,
            None => enumerate_bounded(kind, g, &labels, self.bounds)?,
        })
    }
}

/// Operad named on the command line.
pub enum OperadChoice {
    Comm,
    Ass,
    InvAss,
    Table(TableOperad),
}

impl OperadChoice {
    /// Presets by name, anything else is read as a table document. Twists
    /// turn presets into tables covering `max_arity`.
    pub fn resolve(name: &str, load: &LoadOptions, max_arity: usize, checked: bool) -> Result<Self, CliError> {
        let twisted = *load != LoadOptions::default();
        let preset = match name {
            "comm" => Some(OperadChoice::Comm),
            "ass" => Some(OperadChoice::Ass),
            "invass" => Some(OperadChoice::InvAss),
            _ => None,
        };
        let doc = match preset {
            Some(p) if !twisted => return Ok(p),
            Some(p) => TableOperad::document_of(p.linear(), max_arity.max(3)),
            None => {
                let text = std::fs::read_to_string(name)
                    .map_err(|e| CliError::config(format!("operad {name:?} is not a preset and cannot be read: {e}")))?;
                serde_json::from_str::<OperadDoc>(&text).map_err(|e| OperadError::Schema(e.to_string()))?
            }
        };
        let table = if checked {
            TableOperad::from_doc(&doc, load)?
        } else {
            TableOperad::from_doc_unchecked(&doc, load)?
        };
        Ok(OperadChoice::Table(table))
    }

    pub fn linear(&self) -> &dyn LinearOperad {
        const COMM: Linearized<Comm> = Linearized(Comm);
        const ASS: Linearized<Ass> = Linearized(Ass);
        const INVASS: Linearized<InvAss> = Linearized(InvAss);
        match self {
            OperadChoice::Comm => &COMM,
            OperadChoice::Ass => &ASS,
            OperadChoice::InvAss => &INVASS,
            OperadChoice::Table(t) => t,
        }
    }

    pub fn set(&self) -> Option<&dyn SetOperad> {
        match self {
            OperadChoice::Comm => Some(&Comm),
            OperadChoice::Ass => Some(&Ass),
            OperadChoice::InvAss => Some(&InvAss),
            OperadChoice::Table(_) => None,
        }
    }

    fn table_arity(&self) -> Option<usize> {
        match self {
            OperadChoice::Table(t) => t.max_arity(),
            _ => None,
        }
    }
}

/// Output of a successful run: the document and whether every check in it
/// passed.
pub struct RunOutput {
    pub text: String,
    pub code: u8,
}

pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let body = || -> Result<RunOutput, CliError> {
        match config.command {
            CommandName::Census => run_census(config),
            CommandName::Homology => run_homology(config),
            CommandName::Pi0 => run_pi0(config),
            CommandName::Thicken => run_thicken(config),
            CommandName::CheckOperad => run_check_operad(config),
            CommandName::Selfcheck => Ok(run_selfcheck(config)),
        }
    };
    let out = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::internal("cli", "ThreadPool", e.to_string()))?
            .install(body)?,
        None => body()?,
    };
    if let Some(path) = &config.output {
        write_file(path, &out.text)?;
    }
    Ok(out)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::internal("cli", "Io", format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::internal("cli", "Io", format!("{}: {e}", path.display())))
}

fn ok(text: String) -> Result<RunOutput, CliError> {
    Ok(RunOutput { text, code: 0 })
}

fn run_census(c: &RunConfig) -> Result<RunOutput, CliError> {
    let census = c.census(c.kind.unwrap_or(Kind::Plain))?;
    ok(match c.format {
        Format::Json => census.to_json(),
        Format::Csv => census.to_csv(),
    })
}

fn max_valence(g: usize, n: usize) -> usize {
    (2 * g + n).max(3)
}

fn run_homology(c: &RunConfig) -> Result<RunOutput, CliError> {
    let g = c.rank_required()?;
    let labels = c.leg_labels()?;
    let op = OperadChoice::resolve(c.operad_required()?, &c.load, max_valence(g, labels.len()), true)?;
    let census = c.census(Kind::Plain)?;
    let route = match c.route {
        RouteName::Auto => Route::Auto,
        RouteName::Projector => Route::Projector,
    };
    let complex = build_complex(op.linear(), &census, route)?;
    if let Some(dir) = &c.dump_matrices {
        complex.dump_matrices(dir)?;
    }
    let summary = complex.summary();
    ok(match c.format {
        Format::Json => serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("degree,dim,rank\n");
            for (d, dim) in &summary.dims {
                let _ = writeln!(s, "{d},{dim},{}", summary.ranks.get(d).copied().unwrap_or(0));
            }
            s
        }
    })
}

fn run_pi0(c: &RunConfig) -> Result<RunOutput, CliError> {
    let name = c.operad_required()?;
    let op = OperadChoice::resolve(name, &LoadOptions::default(), 0, false)?;
    let set_op = op
        .set()
        .ok_or_else(|| CliError::config(format!("pi0 needs a set-valued preset (comm, ass, invass), not {name:?}")))?;
    let census = c.census(Kind::Plain)?;
    let set = pi0_on_census(set_op, &census)?;
    ok(set.to_json(set_op) + "\n")
}

fn run_thicken(c: &RunConfig) -> Result<RunOutput, CliError> {
    let path = c.file.as_ref().expect("validated");
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let s = StructuredGraph::from_json(&text)?;
    let inv = s.thicken()?;
    ok(inv.to_json() + "\n")
}

fn run_check_operad(c: &RunConfig) -> Result<RunOutput, CliError> {
    let name = c.operad_required()?;
    let default_arity = 5;
    let op = OperadChoice::resolve(name, &c.load, c.max_arity.unwrap_or(default_arity), false)?;
    let max = c.max_arity.or(op.table_arity()).unwrap_or(default_arity);
    let report = check_axioms_sampled(op.linear(), max, c.samples, c.seed);
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    Ok(RunOutput {
        code: if report.violation_count == 0 { 0 } else { EXIT_AXIOM },
        text,
    })
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    passed: bool,
    detail: String,
}

fn line(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn grid(max_g: usize, max_n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for n in 0..=max_n {
            if !is_excluded(g, n) {
                out.push((g, n));
            }
        }
    }
    out
}

fn run_selfcheck(c: &RunConfig) -> RunOutput {
    let mut lines = Vec::new();
    let labels = crate::census::default_labels;

    // d^2 = 0
    let d2_grid = if c.quick { grid(1, 3) } else { grid(2, 3) };
    let ops: [(&str, &dyn LinearOperad); 3] = [("comm", &Linearized(Comm)), ("ass", &Linearized(Ass)), ("invass", &Linearized(InvAss))];
    for &(g, n) in &d2_grid {
        let census = match enumerate_reduced(Kind::Plain, g, &labels(n)) {
            Ok(c) => c,
            Err(e) => {
                lines.push(line(format!("census ({g},{n})"), false, e.to_string()));
                continue;
            }
        };
        for (name, op) in ops {
            let (passed, detail) = match check_d_squared(op, &census, Route::Auto) {
                Ok(r) => (r.holds(), format!("dims {:?}, failing degrees {:?}", r.dims, r.failing_degrees)),
                Err(e) => (false, e.to_string()),
            };
            lines.push(line(format!("d^2 = 0 for {name} ({g},{n})"), passed, detail));
        }
    }

    // axioms
    let arities: [(&str, &dyn LinearOperad, usize); 3] = if c.quick {
        [("ass", &Linearized(Ass), 5), ("invass", &Linearized(InvAss), 4), ("comm", &Linearized(Comm), 6)]
    } else {
        [("ass", &Linearized(Ass), 6), ("invass", &Linearized(InvAss), 5), ("comm", &Linearized(Comm), 7)]
    };
    for (name, op, max) in arities {
        let r = check_axioms_sampled(op, max, None, c.seed);
        lines.push(line(
            format!("axioms for {name} up to arity {max}"),
            r.violation_count == 0,
            format!("{} identities, {} violations", r.checks, r.violation_count),
        ));
    }

    // canonical forms survive random relabeling
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    for (g, n) in grid(2, 2) {
        let census = match enumerate_reduced(Kind::Plain, g, &labels(n)) {
            Ok(c) => c,
            Err(e) => {
                lines.push(line(format!("relabeling ({g},{n})"), false, e.to_string()));
                continue;
            }
        };
        let mut bad = 0;
        for class in &census.classes {
            let gr = &class.graph;
            let mut vperm: Vec<usize> = (0..gr.num_vertices()).collect();
            vperm.shuffle(&mut rng);
            let mut hperm: Vec<usize> = (0..gr.num_half_edges()).collect();
            hperm.shuffle(&mut rng);
            let moved = gr.relabel_vertices(&vperm).relabel(&hperm);
            let back = crate::graph::HalfEdgeGraph::from_json(&moved.to_json());
            let same = back.map(|b| b.canonical_form().canonical_bytes == class.key).unwrap_or(false);
            if !same {
                bad += 1;
            }
        }
        lines.push(line(
            format!("canonical form under relabeling ({g},{n})"),
            bad == 0,
            format!("{} classes, {bad} mismatches", census.classes.len()),
        ));
    }

    // components against surfaces
    for (g, n) in grid(2, 2) {
        for (name, op) in [("ass", &Ass as &dyn SetOperad), ("invass", &InvAss)] {
            let (passed, detail) = match check_bijection(op, g, &labels(n)) {
                Ok(r) => (r.holds(), format!("{r:?}")),
                Err(e) => (false, e.to_string()),
            };
            lines.push(line(format!("components biject with surfaces for {name} ({g},{n})"), passed, detail));
        }
    }

    // spot values
    let spot = |op: &dyn LinearOperad| {
        enumerate_reduced(Kind::Plain, 1, &labels(1))
            .ok()
            .and_then(|c| build_complex(op, &c, Route::Auto).ok())
            .map(|cx| (cx.dims(), cx.homology_ranks(), cx.euler_characteristic()))
    };
    let ass = spot(&Linearized(Ass));
    lines.push(line(
        "ass (1,1) is a line in degree 0",
        ass == Some((BTreeMap::from([(0, 1)]), BTreeMap::from([(0, 1)]), 1)),
        format!("{ass:?}"),
    ));
    let comm = spot(&Linearized(Comm));
    lines.push(line(
        "comm (1,1) is zero",
        comm == Some((BTreeMap::new(), BTreeMap::new(), 0)),
        format!("{comm:?}"),
    ));

    let passed = lines.iter().all(|l| l.passed);
    let text = serde_json::to_string_pretty(&json!({"passed": passed, "checks": lines})).expect("report serializes") + "\n";
    RunOutput {
        text,
        code: if passed { 0 } else { EXIT_INTERNAL },
    }
}
