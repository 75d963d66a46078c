//! Command dispatch: argument file in, rendered result and exit code out.
//!
//! Exit codes: 0 success (and accepted / audit pass), 1 rejected or audit
//! fail, 2 inconsistent premises, 3 impossible evidence, 4 parse or input
//! errors. JSON output is deterministic: struct key order is fixed and all
//! values derive from the file contents alone.

use std::fs;
use std::path::Path;

use credence::credal::ConditionalBounds;
use credence::logic::Formula;
use credence::rational::{decimal_string, render_fraction, render_with_decimal, Fraction};
use credence::schema::{
    conjunction_audit, eliminate, evaluate_schema_i_detailed, evaluate_schema_ii,
};
use credence::{
    choose, expected_utility_interval, ChoiceRule, CredalError, CredalSet, DecisionProblem,
    Interval, SchemaError, SchemaIArgument, SchemaIIArgument, UncertaintyPremise,
    UtilityInterval, DEFAULT_ATOM_CAP,
};
use serde::Serialize;

use crate::dsl::{parse_argument_file, ArgumentFile, SupportBlock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Eval,
    Accept,
    Eliminate,
    Audit,
    Decide,
    Maxent,
}

impl CommandKind {
    fn name(&self) -> &'static str {
        match self {
            CommandKind::Eval => "eval",
            CommandKind::Accept => "accept",
            CommandKind::Eliminate => "eliminate",
            CommandKind::Audit => "audit",
            CommandKind::Decide => "decide",
            CommandKind::Maxent => "maxent",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Flags {
    pub resolution: Option<u32>,
    pub rule: ChoiceRule,
    pub max_atoms: usize,
    pub threshold: Option<Fraction>,
}

impl Default for Flags {
    fn default() -> Flags {
        Flags {
            resolution: None,
            rule: ChoiceRule::GammaMaximin,
            max_atoms: DEFAULT_ATOM_CAP,
            threshold: None,
        }
    }
}

/// A failed run with its exit code and message.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub exit_code: i32,
    pub message: String,
}

impl RunFailure {
    fn input(message: impl Into<String>) -> RunFailure {
        RunFailure {
            exit_code: 4,
            message: message.into(),
        }
    }
}

fn failure_from_schema(path: &Path, error: SchemaError) -> RunFailure {
    let exit_code = match &error {
        SchemaError::Credal(CredalError::InconsistentPremises) => 2,
        SchemaError::Credal(CredalError::ImpossibleEvidence) => 3,
        SchemaError::InconsistentCombination { .. } => 2,
        _ => 4,
    };
    RunFailure {
        exit_code,
        message: format!("{}: {error}", path.display()),
    }
}

fn failure_from_credal(path: &Path, error: CredalError) -> RunFailure {
    failure_from_schema(path, SchemaError::Credal(error))
}

#[derive(Debug, Serialize)]
struct FractionDto {
    exact: String,
    decimal: String,
}

impl FractionDto {
    fn new(f: &Fraction) -> FractionDto {
        FractionDto {
            exact: render_fraction(f),
            decimal: decimal_string(f, 6),
        }
    }
}

#[derive(Debug, Serialize)]
struct IntervalDto {
    lower: FractionDto,
    upper: FractionDto,
}

impl IntervalDto {
    fn new(interval: &Interval) -> IntervalDto {
        IntervalDto {
            lower: FractionDto::new(interval.lower()),
            upper: FractionDto::new(interval.upper()),
        }
    }

    fn from_utility(interval: &UtilityInterval) -> IntervalDto {
        IntervalDto {
            lower: FractionDto::new(&interval.lower),
            upper: FractionDto::new(&interval.upper),
        }
    }
}

#[derive(Debug, Serialize)]
struct VerdictDto {
    accepted: bool,
    threshold: FractionDto,
}

#[derive(Debug, Serialize)]
struct ExpansionTermDto {
    weight: IntervalDto,
    factor: IntervalDto,
}

#[derive(Debug, Serialize)]
struct EliminationDto {
    old_interval: IntervalDto,
    new_interval: IntervalDto,
    new_evidence: Vec<String>,
    new_background: Vec<String>,
    expansion: Vec<ExpansionTermDto>,
    deviation_bound: FractionDto,
}

#[derive(Debug, Serialize)]
struct AuditDto {
    premises: Vec<AuditPremiseDto>,
    conjunction: IntervalDto,
    frechet: FractionDto,
    threshold: FractionDto,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct AuditPremiseDto {
    formula: String,
    interval: IntervalDto,
}

#[derive(Debug, Serialize)]
struct DecisionActDto {
    name: String,
    expected_utility: IntervalDto,
}

#[derive(Debug, Serialize)]
struct DecisionDto {
    rule: String,
    acts: Vec<DecisionActDto>,
    chosen: Vec<String>,
}

#[derive(Debug, Serialize)]
struct MassDto {
    world: String,
    mass: String,
}

#[derive(Debug, Serialize)]
struct MaxentDto {
    masses: Vec<MassDto>,
    entropy_nats: String,
}

/// Deterministic, serializable account of one command run.
#[derive(Debug, Serialize)]
pub struct RunResult {
    command: &'static str,
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<IntervalDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<VerdictDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elimination: Option<EliminationDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decision: Option<DecisionDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    maxent: Option<MaxentDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<IntervalDto>,
    diagnostics: Vec<String>,
    #[serde(skip)]
    exit_code: i32,
    #[serde(skip)]
    human: Vec<String>,
}

impl RunResult {
    fn new(kind: CommandKind, path: &Path) -> RunResult {
        RunResult {
            command: kind.name(),
            file: path.display().to_string(),
            interval: None,
            verdict: None,
            elimination: None,
            audit: None,
            decision: None,
            maxent: None,
            oracle: None,
            diagnostics: Vec::new(),
            exit_code: 0,
            human: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_code
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable result")
    }

    pub fn render_human(&self) -> String {
        let mut out = format!("{}: {}", self.file, self.command);
        for line in &self.human {
            out.push('\n');
            out.push_str("  ");
            out.push_str(line);
        }
        for diagnostic in &self.diagnostics {
            out.push('\n');
            out.push_str("  note: ");
            out.push_str(diagnostic);
        }
        out
    }
}

fn render_interval(interval: &Interval) -> String {
    if interval.is_point() {
        render_with_decimal(interval.lower())
    } else {
        format!(
            "[{}, {}]",
            render_with_decimal(interval.lower()),
            render_with_decimal(interval.upper())
        )
    }
}

fn render_utility(interval: &UtilityInterval) -> String {
    format!(
        "[{}, {}]",
        render_with_decimal(&interval.lower),
        render_with_decimal(&interval.upper)
    )
}

/// Splits a formula into its top-level conjuncts.
fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        other => vec![other.clone()],
    }
}

fn load(path: &Path, flags: &Flags) -> Result<ArgumentFile, RunFailure> {
    let text = fs::read_to_string(path).map_err(|e| {
        RunFailure::input(format!("{}: cannot read file: {e}", path.display()))
    })?;
    parse_argument_file(&text, flags.max_atoms).map_err(|e| RunFailure {
        exit_code: 4,
        message: format!("{}: {e}", path.display()),
    })
}

fn schema_i_argument(file: &ArgumentFile, path: &Path) -> Result<SchemaIArgument, RunFailure> {
    let query = file.query.clone().ok_or_else(|| {
        RunFailure::input(format!("{}: this command needs a `query` line", path.display()))
    })?;
    Ok(SchemaIArgument {
        space: file.space.clone(),
        uncertainty: UncertaintyPremise::new(file.constraints.clone()),
        background: file.given.clone(),
        evidence: file.observe.clone(),
        query,
    })
}

fn effective_threshold(
    file: &ArgumentFile,
    flags: &Flags,
    path: &Path,
) -> Result<Fraction, RunFailure> {
    flags
        .threshold
        .clone()
        .or_else(|| file.threshold.clone())
        .ok_or_else(|| {
            RunFailure::input(format!(
                "{}: needs a `threshold` line or --threshold flag",
                path.display()
            ))
        })
}

fn note_regular_extension(result: &mut RunResult, bounds: &ConditionalBounds) {
    if bounds.regular_extension {
        result.diagnostics.push(
            "evidence can have probability zero; bounds quantify over distributions giving it positive mass (regular extension)"
                .to_string(),
        );
    }
}

pub fn run_file(kind: CommandKind, path: &Path, flags: &Flags) -> Result<RunResult, RunFailure> {
    let file = load(path, flags)?;
    match kind {
        CommandKind::Eval => run_eval(&file, path, flags),
        CommandKind::Accept => run_accept(&file, path, flags),
        CommandKind::Eliminate => run_eliminate(&file, path),
        CommandKind::Audit => run_audit(&file, path, flags),
        CommandKind::Decide => run_decide(&file, path, flags),
        CommandKind::Maxent => run_maxent(&file, path),
    }
}

fn run_eval(file: &ArgumentFile, path: &Path, flags: &Flags) -> Result<RunResult, RunFailure> {
    let arg = schema_i_argument(file, path)?;
    let bounds =
        evaluate_schema_i_detailed(&arg).map_err(|e| failure_from_schema(path, e))?;
    let mut result = RunResult::new(CommandKind::Eval, path);
    result.interval = Some(IntervalDto::new(&bounds.interval));
    result
        .human
        .push(format!("interval: {}", render_interval(&bounds.interval)));
    note_regular_extension(&mut result, &bounds);

    if let Some(resolution) = flags.resolution {
        let set = arg.credal_set();
        let evidence = arg.evidence_conjunction();
        match set.oracle_bounds(&arg.query, &evidence, resolution) {
            Some(grid) => {
                result
                    .human
                    .push(format!("grid oracle ({resolution}): {}", render_interval(&grid)));
                result.oracle = Some(IntervalDto::new(&grid));
            }
            None => result.diagnostics.push(format!(
                "grid oracle found no feasible point at resolution {resolution}"
            )),
        }
    }
    Ok(result)
}

fn run_accept(file: &ArgumentFile, path: &Path, flags: &Flags) -> Result<RunResult, RunFailure> {
    let base = schema_i_argument(file, path)?;
    let threshold = effective_threshold(file, flags, path)?;
    let arg = SchemaIIArgument::new(base, threshold.clone())
        .map_err(|e| failure_from_schema(path, e))?;
    let verdict = evaluate_schema_ii(&arg).map_err(|e| failure_from_schema(path, e))?;

    let mut result = RunResult::new(CommandKind::Accept, path);
    result.exit_code = if verdict.accepted { 0 } else { 1 };
    result.human.push(format!(
        "{} at {} with {}",
        if verdict.accepted { "ACCEPTED" } else { "REJECTED" },
        render_with_decimal(&threshold),
        render_interval(&verdict.interval)
    ));
    result.interval = Some(IntervalDto::new(&verdict.interval));
    result.verdict = Some(VerdictDto {
        accepted: verdict.accepted,
        threshold: FractionDto::new(&threshold),
    });
    Ok(result)
}

fn support_argument(
    file: &ArgumentFile,
    block: &SupportBlock,
    path: &Path,
) -> Result<(Formula, SchemaIIArgument), RunFailure> {
    let threshold = block.threshold.clone().ok_or_else(|| {
        RunFailure::input(format!(
            "{}: support `{}` needs a `threshold` line",
            path.display(),
            block.name
        ))
    })?;
    let base = SchemaIArgument {
        space: file.space.clone(),
        uncertainty: UncertaintyPremise::new(block.constraints.clone()),
        background: block.given.clone(),
        evidence: block.observe.clone(),
        query: block.concludes.clone(),
    };
    let arg = SchemaIIArgument::new(base, threshold)
        .map_err(|e| failure_from_schema(path, e))?;
    Ok((block.concludes.clone(), arg))
}

fn run_eliminate(file: &ArgumentFile, path: &Path) -> Result<RunResult, RunFailure> {
    let main = schema_i_argument(file, path)?;
    let supports: Vec<(Formula, SchemaIIArgument)> = file
        .supports
        .iter()
        .map(|block| support_argument(file, block, path))
        .collect::<Result<_, _>>()?;

    let report = eliminate(&main, &supports).map_err(|e| failure_from_schema(path, e))?;

    let mut result = RunResult::new(CommandKind::Eliminate, path);
    let space = &report.new_argument.space;
    result.human.push(format!(
        "old interval: {}",
        render_interval(&report.old_interval)
    ));
    result.human.push(format!(
        "new interval: {}",
        render_interval(&report.new_interval)
    ));
    result.human.push(format!(
        "expansion: {} terms, deviation bound {}",
        report.expansion.len(),
        render_with_decimal(&report.deviation_bound)
    ));
    if !supports.is_empty() {
        result.diagnostics.push(
            "uncertainty premises were combined after a consistency check only; any stronger justification for combining them rests with the author"
                .to_string(),
        );
    }
    result.elimination = Some(EliminationDto {
        old_interval: IntervalDto::new(&report.old_interval),
        new_interval: IntervalDto::new(&report.new_interval),
        new_evidence: report
            .new_argument
            .evidence
            .iter()
            .map(|f| f.render(space))
            .collect(),
        new_background: report
            .new_argument
            .background
            .iter()
            .map(|f| f.render(space))
            .collect(),
        expansion: report
            .expansion
            .iter()
            .map(|(weight, factor)| ExpansionTermDto {
                weight: IntervalDto::new(weight),
                factor: IntervalDto::new(factor),
            })
            .collect(),
        deviation_bound: FractionDto::new(&report.deviation_bound),
    });
    Ok(result)
}

fn run_audit(file: &ArgumentFile, path: &Path, flags: &Flags) -> Result<RunResult, RunFailure> {
    if !file.observe.is_empty() {
        return Err(RunFailure::input(format!(
            "{}: audit works on unconditional acceptance; remove `observe` lines",
            path.display()
        )));
    }
    let query = file.query.clone().ok_or_else(|| {
        RunFailure::input(format!(
            "{}: audit needs a `query` line whose top-level conjuncts are the accepted premises",
            path.display()
        ))
    })?;
    let threshold = effective_threshold(file, flags, path)?;
    let accepted = conjuncts(&query);
    let uncertainty = UncertaintyPremise::new(file.constraints.clone());
    let report = conjunction_audit(
        &uncertainty,
        &file.given,
        &accepted,
        &threshold,
        &file.space,
    )
    .map_err(|e| failure_from_schema(path, e))?;

    let mut result = RunResult::new(CommandKind::Audit, path);
    result.exit_code = if report.pass { 0 } else { 1 };
    for (formula, interval) in accepted.iter().zip(&report.premise_intervals) {
        result.human.push(format!(
            "premise {}: {}",
            formula.render(&file.space),
            render_interval(interval)
        ));
    }
    result.human.push(format!(
        "conjunction: {} (analytic floor {})",
        render_interval(&report.conjunction),
        render_with_decimal(&report.frechet)
    ));
    result.human.push(format!(
        "{} at {}",
        if report.pass { "PASS" } else { "FAIL" },
        render_with_decimal(&threshold)
    ));
    result.audit = Some(AuditDto {
        premises: accepted
            .iter()
            .zip(&report.premise_intervals)
            .map(|(formula, interval)| AuditPremiseDto {
                formula: formula.render(&file.space),
                interval: IntervalDto::new(interval),
            })
            .collect(),
        conjunction: IntervalDto::new(&report.conjunction),
        frechet: FractionDto::new(&report.frechet),
        threshold: FractionDto::new(&threshold),
        pass: report.pass,
    });
    Ok(result)
}

fn run_decide(file: &ArgumentFile, path: &Path, flags: &Flags) -> Result<RunResult, RunFailure> {
    if file.acts.is_empty() {
        return Err(RunFailure::input(format!(
            "{}: decide needs at least one `act`",
            path.display()
        )));
    }
    let problem = DecisionProblem {
        space: file.space.clone(),
        uncertainty: UncertaintyPremise::new(file.constraints.clone()),
        background: file.given.clone(),
        evidence: file.observe.clone(),
        acts: file.acts.clone(),
    };

    let map_decision_error = |e: credence::DecisionError| match e {
        credence::DecisionError::Credal(credal) => failure_from_credal(path, credal),
        other => RunFailure::input(format!("{}: {other}", path.display())),
    };

    let mut acts = Vec::with_capacity(problem.acts.len());
    let mut result = RunResult::new(CommandKind::Decide, path);
    for act in &problem.acts {
        let eu = expected_utility_interval(&problem, act).map_err(map_decision_error)?;
        result
            .human
            .push(format!("EU({}) = {}", act.name(), render_utility(&eu)));
        acts.push(DecisionActDto {
            name: act.name().to_string(),
            expected_utility: IntervalDto::from_utility(&eu),
        });
    }
    let chosen = choose(&problem, flags.rule).map_err(map_decision_error)?;
    let chosen_names: Vec<String> = chosen.iter().map(|a| a.name().to_string()).collect();
    let rule_name = match flags.rule {
        ChoiceRule::GammaMaximin => "gamma_maximin",
        ChoiceRule::IntervalDominance => "interval_dominance",
    };
    result
        .human
        .push(format!("chosen ({rule_name}): {}", chosen_names.join(", ")));
    result.decision = Some(DecisionDto {
        rule: rule_name.to_string(),
        acts,
        chosen: chosen_names,
    });
    Ok(result)
}

fn run_maxent(file: &ArgumentFile, path: &Path) -> Result<RunResult, RunFailure> {
    if !file.observe.is_empty() {
        return Err(RunFailure::input(format!(
            "{}: maxent selects an unconditional distribution; remove `observe` lines",
            path.display()
        )));
    }
    let set = CredalSet::new(file.space.clone(), file.constraints.clone()).restrict(
        &Formula::conjoin_all(file.given.iter().cloned()),
    );
    let dist = set
        .max_entropy()
        .map_err(|e| failure_from_credal(path, e))?;

    let mut result = RunResult::new(CommandKind::Maxent, path);
    let mut masses = Vec::with_capacity(file.space.world_count());
    for w in 0..file.space.world_count() {
        let mass = decimal_string(dist.mass(w), 9);
        result
            .human
            .push(format!("{}: {mass}", file.space.world_minterm(w)));
        masses.push(MassDto {
            world: file.space.world_minterm(w),
            mass,
        });
    }
    let entropy_nats = format!("{:.9}", dist.entropy());
    result.human.push(format!("entropy: {entropy_nats} nats"));
    result.maxent = Some(MaxentDto {
        masses,
        entropy_nats,
    });
    Ok(result)
}
