//! Problem specifications in, deterministic JSON reports out.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::binomial::{markov_basis, minimal_primes_icala, power_ideal, toric_ideal_ia, toric_ideal_icala};
use crate::error::{Error, Result};
use crate::exact_algebra::{parse_cyclotomic, Cyclotomic, GroebnerEngine, IdealBasis, DEFAULT_PAIR_BUDGET};
use crate::group_lattice::{check_hypotheses, AbelianGroup, GroupElement, HypothesesReport, LatticeIndex};
use crate::hypergeometric::{
    bbgkz_primitive_presentation, default_binomial_bound, quasi_degrees, regularity_certificate, vanishing_test,
    ModuleSpec,
};
use crate::polyhedral::PointConfig;
use crate::rank_duality::{character_split, dual_system, rank_formula, DEFAULT_TRUNCATION};
use crate::semigroup::{elements_up_to, module_generators, ModuleKind, SemigroupModule};

pub const SCHEMA_VERSION: u32 = 1;

pub const VOLUME_CONVENTION: &str =
    "normalized: the simplex conv(0, e_1, ..., e_d) has volume 1; vol(A) is d! times the Euclidean volume of conv(A ∪ {0})";

/// Minimum `h`-degree slice reported in the module block.
pub const DEFAULT_H_DEGREE: i64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleChoice {
    K,
    KInterior,
    Explicit(Vec<GroupElement>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    pub h_degree: Option<i64>,
    pub binomial_degree: Option<i64>,
    pub truncation: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub torsion_orders: Vec<i64>,
    pub columns: Vec<GroupElement>,
    pub beta: Vec<Cyclotomic>,
    pub module: ModuleChoice,
    pub bounds: Bounds,
    /// sha256 of the spec text.
    pub hash: String,
}

impl ProblemSpec {
    pub fn config(&self) -> Result<PointConfig> {
        let d = self.columns[0].free.len();
        let group = AbelianGroup::new(self.torsion_orders.clone(), d)?;
        PointConfig::from_columns(group, self.columns.clone())
    }

    pub fn ell(&self) -> i64 {
        self.torsion_orders.iter().product()
    }

    pub fn d(&self) -> usize {
        self.columns[0].free.len()
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::Malformed(format!("missing field `{name}`")))
}

fn int_list(v: &Value, path: &str) -> Result<Vec<i64>> {
    let arr = v.as_array().ok_or_else(|| Error::Malformed(format!("`{path}` must be an array of integers")))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| x.as_i64().ok_or_else(|| Error::Malformed(format!("`{path}[{i}]` must be an integer"))))
        .collect()
}

fn element(v: &Value, path: &str, k: usize) -> Result<GroupElement> {
    let obj = v.as_object().ok_or_else(|| Error::Malformed(format!("`{path}` must be an object {{torsion, free}}")))?;
    let torsion = match obj.get("torsion") {
        Some(t) => int_list(t, &format!("{path}.torsion"))?,
        None if k == 0 => Vec::new(),
        None => return Err(Error::Malformed(format!("missing field `{path}.torsion`"))),
    };
    let free = int_list(field(obj, "free").map_err(|_| Error::Malformed(format!("missing field `{path}.free`")))?, &format!("{path}.free"))?;
    if torsion.len() != k {
        return Err(Error::DimensionMismatch(format!("`{path}.torsion` has length {}, expected {k}", torsion.len())));
    }
    Ok(GroupElement { torsion, free })
}

fn scalar(v: &Value, path: &str) -> Result<Cyclotomic> {
    match v {
        Value::String(s) => parse_cyclotomic(s).map_err(|e| match e {
            Error::UnsupportedCharacterValue(m) => Error::UnsupportedCharacterValue(format!("`{path}`: {m}")),
            Error::Malformed(m) => Error::Malformed(format!("`{path}`: {m}")),
            other => other,
        }),
        Value::Number(x) => match x.as_i64() {
            Some(i) => Ok(Cyclotomic::from_int(i)),
            None => Err(Error::UnsupportedCharacterValue(format!(
                "`{path}` = {x}: write non-integers as exact strings such as \"1/2\""
            ))),
        },
        _ => Err(Error::Malformed(format!("`{path}` must be a string or an integer"))),
    }
}

fn opt_bound(obj: Option<&Map<String, Value>>, name: &str) -> Result<Option<i64>> {
    match obj.and_then(|o| o.get(name)) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_i64().map(Some).ok_or_else(|| Error::Malformed(format!("`bounds.{name}` must be an integer"))),
    }
}

/// Parse and validate a JSON problem specification.
pub fn parse_spec(text: &str) -> Result<ProblemSpec> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Malformed(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let obj = root.as_object().ok_or_else(|| Error::Malformed("spec must be a JSON object".into()))?;
    let torsion_orders = match obj.get("torsion_orders") {
        Some(v) => int_list(v, "torsion_orders")?,
        None => Vec::new(),
    };
    if let Some((i, o)) = torsion_orders.iter().enumerate().find(|(_, &o)| o < 2) {
        return Err(Error::Malformed(format!("`torsion_orders[{i}]` = {o}: orders must be at least 2")));
    }
    let k = torsion_orders.len();
    let cols = field(obj, "columns")?.as_array().ok_or_else(|| Error::Malformed("`columns` must be an array".into()))?;
    if cols.is_empty() {
        return Err(Error::Malformed("`columns` is empty".into()));
    }
    let columns: Vec<GroupElement> =
        cols.iter().enumerate().map(|(j, c)| element(c, &format!("columns[{j}]"), k)).collect::<Result<_>>()?;
    let d = columns[0].free.len();
    if let Some(j) = columns.iter().position(|c| c.free.len() != d) {
        return Err(Error::DimensionMismatch(format!("`columns[{j}].free` has length {}, expected {d}", columns[j].free.len())));
    }
    let beta_v = field(obj, "beta")?.as_array().ok_or_else(|| Error::Malformed("`beta` must be an array".into()))?;
    if beta_v.len() != d {
        return Err(Error::DimensionMismatch(format!("`beta` has length {}, expected d = {d}", beta_v.len())));
    }
    let beta: Vec<Cyclotomic> =
        beta_v.iter().enumerate().map(|(i, b)| scalar(b, &format!("beta[{i}]"))).collect::<Result<_>>()?;
    let module = match obj.get("module") {
        None => ModuleChoice::K,
        Some(Value::String(s)) if s == "K" => ModuleChoice::K,
        Some(Value::String(s)) if s == "K_interior" => ModuleChoice::KInterior,
        Some(Value::Array(gens)) => ModuleChoice::Explicit(
            gens.iter().enumerate().map(|(i, g)| element(g, &format!("module[{i}]"), k)).collect::<Result<_>>()?,
        ),
        Some(other) => {
            return Err(Error::Malformed(format!(
                "`module` must be \"K\", \"K_interior\" or a generator list, got {other}"
            )))
        }
    };
    if let ModuleChoice::Explicit(g) = &module {
        if let Some(i) = g.iter().position(|e| e.free.len() != d) {
            return Err(Error::DimensionMismatch(format!("`module[{i}].free` must have length {d}")));
        }
    }
    let bounds_obj = match obj.get("bounds") {
        None | Some(Value::Null) => None,
        Some(Value::Object(b)) => Some(b),
        Some(_) => return Err(Error::Malformed("`bounds` must be an object".into())),
    };
    let bounds = Bounds {
        h_degree: opt_bound(bounds_obj, "h_degree")?,
        binomial_degree: opt_bound(bounds_obj, "binomial_degree")?,
        truncation: opt_bound(bounds_obj, "truncation")?,
    };
    let hash = format!("{:x}", Sha256::digest(text.as_bytes()));
    let spec = ProblemSpec { torsion_orders, columns, beta, module, bounds, hash };
    spec.config()?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    Check,
    Ideals,
    Primes,
    Module,
    System,
    Rank,
    Dual,
    Report,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Check,
        Command::Ideals,
        Command::Primes,
        Command::Module,
        Command::System,
        Command::Rank,
        Command::Dual,
        Command::Report,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Ideals => "ideals",
            Command::Primes => "primes",
            Command::Module => "module",
            Command::System => "system",
            Command::Rank => "rank",
            Command::Dual => "dual",
            Command::Report => "report",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    fn needs_hypotheses(&self) -> bool {
        matches!(self, Command::Module | Command::System | Command::Rank | Command::Dual | Command::Report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub pair_budget: usize,
    /// Overrides the binomial degree bound of the spec.
    pub bound: Option<i64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { pair_budget: DEFAULT_PAIR_BUDGET, bound: None }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypotheses(_) | Error::NotPointed | Error::NotFullDimensional { .. } | Error::EmptyCone => {
            EXIT_HYPOTHESES
        }
        Error::Malformed(_) | Error::DimensionMismatch(_) | Error::UnsupportedCharacterValue(_) => EXIT_PARSE,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INTERNAL,
    }
}

pub fn error_value(e: &Error) -> Value {
    json!({ "code": e.code(), "message": e.to_string() })
}

/// A finished report with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self) -> String {
        render(&self.report)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn strings(v: &[Cyclotomic]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn ideal_value(i: &IdealBasis) -> Value {
    json!(i.to_text())
}

fn hypotheses_value(h: &HypothesesReport) -> Value {
    let delta = match &h.delta {
        LatticeIndex::Finite(x) => json!(x.to_string()),
        LatticeIndex::Infinite => json!("INFINITE"),
    };
    json!({
        "all_hold": h.all_hold(),
        "delta": delta,
        "delta_divides_ell": h.delta_divides_ell,
        "ell": h.ell,
        "pointed": h.pointed,
        "spans": h.spans,
    })
}

fn is_literature_example(spec: &ProblemSpec) -> bool {
    spec.torsion_orders == [4]
        && spec.d() == 1
        && spec.columns.iter().map(|c| (c.torsion[0], c.free[0])).collect::<Vec<_>>() == [(1, 1), (1, 2)]
}

const LITERATURE_NOTE: &str = "I_calA for this configuration is quoted in the literature as (d1^4 - d2^2); \
     the kernel of calA is Z(8,-4), so the computed I_calA = (d1^8 - d2^4), which equals the power ideal. \
     (d1^4 - d2^2) is the toric ideal for torsion Z/2 instead.";

struct Context {
    spec: ProblemSpec,
    config: PointConfig,
    engine: GroebnerEngine,
    binomial_bound: Option<i64>,
    notes: Vec<String>,
}

impl Context {
    fn module(&self) -> Result<SemigroupModule> {
        match &self.spec.module {
            ModuleChoice::K => SemigroupModule::k(&self.config),
            ModuleChoice::KInterior => SemigroupModule::k_interior(&self.config),
            ModuleChoice::Explicit(g) => SemigroupModule::explicit(&self.config, g.clone()),
        }
    }

    fn module_spec(&self) -> Option<ModuleSpec> {
        match self.spec.module {
            ModuleChoice::K => Some(ModuleSpec::K),
            ModuleChoice::KInterior => Some(ModuleSpec::KInterior),
            ModuleChoice::Explicit(_) => None,
        }
    }

    fn binomial_bound(&self, module: &SemigroupModule) -> Result<i64> {
        match self.binomial_bound {
            Some(b) => Ok(b),
            None => default_binomial_bound(module, &self.engine),
        }
    }

    fn truncation(&self) -> i64 {
        self.spec.bounds.truncation.unwrap_or(DEFAULT_TRUNCATION)
    }

    fn ideals(&mut self) -> Result<Value> {
        let ia = toric_ideal_ia(&self.config, &self.engine)?;
        let ical = toric_ideal_icala(&self.config, &self.engine)?;
        let power = power_ideal(&self.config, &self.engine)?;
        if is_literature_example(&self.spec) {
            self.notes.push(LITERATURE_NOTE.into());
        }
        Ok(json!({
            "I_A": ideal_value(&ia),
            "I_calA": ideal_value(&ical),
            "markov_basis": markov_basis(&self.config, &self.engine)?,
            "power_ideal": ideal_value(&power),
        }))
    }

    fn primes(&self) -> Result<Value> {
        let primes = minimal_primes_icala(&self.config, &self.engine)?;
        Ok(json!({
            "count": primes.len(),
            "intersection_equals_I_calA": true,
            "minimal_primes": serde_json::to_value(&primes).expect("primes serialize"),
        }))
    }

    fn module_block(&self) -> Result<Value> {
        let m = self.module()?;
        let prim = module_generators(&m)?;
        let needed = prim.elements.iter().map(|t| m.h_degree(&t.free)).max().unwrap_or(0);
        let h_degree = self.spec.bounds.h_degree.unwrap_or(DEFAULT_H_DEGREE.max(needed));
        let slice = elements_up_to(&m, h_degree);
        Ok(json!({
            "grading": m.grading(),
            "kind": m.kind().label(),
            "slice_h_degree": h_degree,
            "slice_size": slice.len(),
            "T_prim": prim.elements,
            "T_prim_h_degree": needed,
            "units": m.units(),
        }))
    }

    fn system(&mut self) -> Result<Value> {
        let m = self.module()?;
        let bound = self.binomial_bound(&m)?;
        let p = bbgkz_primitive_presentation(&m, &self.spec.beta, bound)?;
        if p.stabilized == Some(false) {
            self.notes.push(format!("binomial relations did not stabilize between bounds {bound} and {}", bound + 2));
        }
        Ok(serde_json::to_value(&p).expect("presentation serializes"))
    }

    fn rank(&self) -> Result<Value> {
        let k = rank_formula(&self.config, ModuleKind::K)?;
        let ki = rank_formula(&self.config, ModuleKind::KInterior)?;
        let split = character_split(&self.config, self.truncation())?;
        Ok(json!({
            "character_split": {
                "certified": split.certified,
                "determinants": split.pieces.iter().map(|p| p.determinant.to_string()).collect::<std::collections::BTreeSet<_>>(),
                "maps": split.maps,
                "pieces": split.pieces.len(),
                "truncation": split.truncation,
            },
            "ell": self.config.ell(),
            "rank": k.to_string(),
            "rank_K": k.to_string(),
            "rank_K_interior": ki.to_string(),
            "volume": crate::polyhedral::normalized_volume(&self.config).to_string(),
        }))
    }

    fn dual(&mut self) -> Result<Value> {
        let interior = SemigroupModule::k_interior(&self.config)?;
        let bound = self.binomial_bound(&interior)?;
        let (p, report) = dual_system(&self.config, &self.spec.beta, bound)?;
        if p.stabilized == Some(false) {
            self.notes.push(format!("dual binomial relations did not stabilize between bounds {bound} and {}", bound + 2));
        }
        Ok(json!({
            "report": serde_json::to_value(&report).expect("report serializes"),
            "system": serde_json::to_value(&p).expect("presentation serializes"),
        }))
    }

    fn analysis(&mut self) -> Result<Value> {
        let (qdeg, vanishing) = match self.module_spec() {
            Some(ms) => {
                let arr = quasi_degrees(&ms, &self.config)?;
                let v = vanishing_test(&ms, &self.config, &self.spec.beta)?;
                (serde_json::to_value(&arr).expect("arrangement serializes"), serde_json::to_value(v).expect("enum"))
            }
            None => {
                self.notes.push("quasi-degrees are computed for K and K_interior only".into());
                (Value::Null, Value::Null)
            }
        };
        let cert = match regularity_certificate(&self.config) {
            Some(h) => json!(h.free_part.iter().map(ToString::to_string).collect::<Vec<_>>()),
            None => json!("NONE: no h with h·a_j = 1 for all j; regularity is not certified"),
        };
        Ok(json!({
            "duality": self.dual()?,
            "quasi_degrees": qdeg,
            "rank": self.rank()?,
            "regularity_certificate": cert,
            "vanishing": vanishing,
        }))
    }
}

/// Run one command on a validated spec.
pub fn run(spec: &ProblemSpec, command: Command, opts: &RunOptions) -> Outcome {
    let mut root = Map::new();
    root.insert("schema".into(), json!(SCHEMA_VERSION));
    root.insert("command".into(), json!(command.name()));
    root.insert("input_sha256".into(), json!(spec.hash));
    root.insert("volume_convention".into(), json!(VOLUME_CONVENTION));
    root.insert(
        "input".into(),
        json!({
            "beta": strings(&spec.beta),
            "columns": spec.columns,
            "module": match &spec.module {
                ModuleChoice::K => json!("K"),
                ModuleChoice::KInterior => json!("K_interior"),
                ModuleChoice::Explicit(g) => json!(g),
            },
            "torsion_orders": spec.torsion_orders,
        }),
    );
    let config = match spec.config() {
        Ok(c) => c,
        Err(e) => return failed(root, &e),
    };
    let hyp = check_hypotheses(&config);
    root.insert("hypotheses".into(), hypotheses_value(&hyp));
    let mut ctx = Context {
        spec: spec.clone(),
        config,
        engine: GroebnerEngine::with_budget(opts.pair_budget),
        binomial_bound: opts.bound.or(spec.bounds.binomial_degree),
        notes: Vec::new(),
    };
    root.insert("bounds".into(), bounds_value(&ctx, opts));
    if command.needs_hypotheses() && !hyp.all_hold() {
        let err = hyp.require().expect_err("hypotheses fail");
        root.insert("refused".into(), json!(["module", "system", "rank", "dual"]));
        return failed(root, &err);
    }
    let result = (|| -> Result<Vec<(&'static str, Value)>> {
        Ok(match command {
            Command::Check => Vec::new(),
            Command::Ideals => vec![("ideals", ctx.ideals()?)],
            Command::Primes => vec![("primes", ctx.primes()?)],
            Command::Module => vec![("module", ctx.module_block()?)],
            Command::System => vec![("system", ctx.system()?)],
            Command::Rank => vec![("rank", ctx.rank()?)],
            Command::Dual => vec![("dual", ctx.dual()?)],
            Command::Report => vec![
                ("ideals", ctx.ideals()?),
                ("primes", ctx.primes()?),
                ("module", ctx.module_block()?),
                ("system", ctx.system()?),
                ("analysis", ctx.analysis()?),
            ],
        })
    })();
    let notes = std::mem::take(&mut ctx.notes);
    match result {
        Ok(blocks) => {
            for (k, v) in blocks {
                root.insert(k.into(), v);
            }
            root.insert("notes".into(), json!(notes));
            let code = if command == Command::Check && !hyp.all_hold() { EXIT_HYPOTHESES } else { EXIT_OK };
            Outcome { report: Value::Object(root), exit_code: code }
        }
        Err(e) => {
            root.insert("notes".into(), json!(notes));
            failed(root, &e)
        }
    }
}

fn bounds_value(ctx: &Context, opts: &RunOptions) -> Value {
    let binomial = match ctx.binomial_bound {
        Some(b) => json!(b),
        None => match ctx.module().and_then(|m| default_binomial_bound(&m, &ctx.engine)) {
            Ok(b) => json!({ "default": b, "policy": "h-degree of the fibres searched for binomial relations: 2 + 2·ell·max h-degree of a Markov move; stability checked at bound + 2" }),
            Err(_) => Value::Null,
        },
    };
    json!({
        "binomial_degree": binomial,
        "h_degree": ctx.spec.bounds.h_degree.map_or(json!({"default": DEFAULT_H_DEGREE}), |b| json!(b)),
        "pair_budget": opts.pair_budget,
        "truncation": ctx.truncation(),
    })
}

fn failed(mut root: Map<String, Value>, e: &Error) -> Outcome {
    root.insert("error".into(), error_value(e));
    Outcome { report: Value::Object(root), exit_code: exit_code(e) }
}

/// Parse a spec text and run a command; parse errors become exit code 3.
pub fn run_text(text: &str, command: Command, opts: &RunOptions) -> Outcome {
    match parse_spec(text) {
        Ok(spec) => run(&spec, command, opts),
        Err(e) => {
            let mut root = Map::new();
            root.insert("schema".into(), json!(SCHEMA_VERSION));
            root.insert("command".into(), json!(command.name()));
            root.insert("input_sha256".into(), json!(format!("{:x}", Sha256::digest(text.as_bytes()))));
            let mut out = failed(root, &e);
            out.exit_code = EXIT_PARSE;
            out
        }
    }
}
