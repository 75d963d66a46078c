//! Constraint-defined credal sets and exact lower/upper probabilities.
//!
//! A [`CredalSet`] is the convex closed set of all distributions over a
//! [`WorldSpace`] satisfying a list of [`ProbStatement`]s plus structural
//! zeros. Conditional statements `P(t | c) in [l, u]` are linearized by
//! multiplying through by `P(c)`:
//!
//! ```text
//! l * P(c) <= P(t & c) <= u * P(c)
//! ```
//!
//! which makes them exact linear constraints on world masses, vacuously
//! satisfied when `P(c) = 0`. Conditional bounds are computed by the
//! Charnes-Cooper transformation of the linear-fractional program into a
//! linear program, solved in exact rational arithmetic.
//!
//! Zero-probability evidence follows the regular extension: bounds are
//! taken over admissible distributions that give the evidence positive
//! mass, and queries report when that restriction actually engaged.
//!
//! Identical columns in the world-mass program are merged before solving:
//! two worlds that the constraint rows and objective cannot tell apart are
//! interchangeable, so one variable per equivalence class suffices. This is
//! exact and keeps the programs small even on large spaces when statements
//! mention few events.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::logic::{models, Formula, WorldSet, WorldSpace};
use crate::rational::{int, to_f64, Fraction};
use crate::solver::{self, Direction, LpError, Rel, Row};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CredalError {
    #[error("premises are inconsistent")]
    InconsistentPremises,
    #[error("evidence has upper probability zero")]
    ImpossibleEvidence,
    #[error("bound [{lower}, {upper}] is not a probability interval")]
    InvalidBound { lower: String, upper: String },
}

/// Closed probability interval `[lower, upper]` within `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Fraction,
    upper: Fraction,
}

impl Interval {
    pub fn new(lower: Fraction, upper: Fraction) -> Result<Interval, CredalError> {
        if lower.is_negative() || upper > int(1) || lower > upper {
            return Err(CredalError::InvalidBound {
                lower: lower.to_string(),
                upper: upper.to_string(),
            });
        }
        Ok(Interval { lower, upper })
    }

    pub fn point(value: Fraction) -> Result<Interval, CredalError> {
        Interval::new(value.clone(), value)
    }

    /// The vacuous interval `[0, 1]`.
    pub fn vacuous() -> Interval {
        Interval {
            lower: int(0),
            upper: int(1),
        }
    }

    pub fn lower(&self) -> &Fraction {
        &self.lower
    }

    pub fn upper(&self) -> &Fraction {
        &self.upper
    }

    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> Fraction {
        &self.upper - &self.lower
    }

    pub fn contains(&self, value: &Fraction) -> bool {
        *value >= self.lower && *value <= self.upper
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// One linear uncertainty statement: `P(target | condition) in [lower, upper]`.
/// The condition defaults to the tautology for unconditional statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbStatement {
    target: Formula,
    condition: Option<Formula>,
    lower: Fraction,
    upper: Fraction,
}

impl ProbStatement {
    pub fn new(
        target: Formula,
        condition: Option<Formula>,
        lower: Fraction,
        upper: Fraction,
    ) -> Result<ProbStatement, CredalError> {
        let bounds = Interval::new(lower, upper)?;
        Ok(ProbStatement {
            target,
            condition,
            lower: bounds.lower,
            upper: bounds.upper,
        })
    }

    pub fn equals(target: Formula, value: Fraction) -> Result<ProbStatement, CredalError> {
        ProbStatement::new(target, None, value.clone(), value)
    }

    pub fn at_least(target: Formula, value: Fraction) -> Result<ProbStatement, CredalError> {
        ProbStatement::new(target, None, value, int(1))
    }

    pub fn at_most(target: Formula, value: Fraction) -> Result<ProbStatement, CredalError> {
        ProbStatement::new(target, None, int(0), value)
    }

    pub fn within(target: Formula, interval: &Interval) -> Result<ProbStatement, CredalError> {
        ProbStatement::new(target, None, interval.lower.clone(), interval.upper.clone())
    }

    pub fn conditional(
        target: Formula,
        condition: Formula,
        lower: Fraction,
        upper: Fraction,
    ) -> Result<ProbStatement, CredalError> {
        ProbStatement::new(target, Some(condition), lower, upper)
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    pub fn condition(&self) -> Option<&Formula> {
        self.condition.as_ref()
    }

    pub fn lower_bound(&self) -> &Fraction {
        &self.lower
    }

    pub fn upper_bound(&self) -> &Fraction {
        &self.upper
    }
}

/// Exact distribution over the worlds of a space. `approx` marks outputs of
/// numerical procedures whose masses are accurate only to a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    masses: Vec<Fraction>,
    approx: bool,
}

impl Distribution {
    pub(crate) fn exact(masses: Vec<Fraction>) -> Distribution {
        Distribution {
            masses,
            approx: false,
        }
    }

    pub fn masses(&self) -> &[Fraction] {
        &self.masses
    }

    pub fn mass(&self, world: usize) -> &Fraction {
        &self.masses[world]
    }

    pub fn is_approximate(&self) -> bool {
        self.approx
    }

    pub(crate) fn mark_approximate(&mut self) {
        self.approx = true;
    }

    /// Total mass on a set of worlds.
    pub fn prob(&self, event: &WorldSet) -> Fraction {
        event.iter_worlds().map(|w| self.masses[w].clone()).sum()
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.masses
            .iter()
            .map(|m| {
                let p = to_f64(m);
                if p > 0.0 { -p * p.ln() } else { 0.0 }
            })
            .sum()
    }
}

/// Outcome of a consistency check: a witness distribution, or the tags of a
/// conflicting statement subset when the solver can name one.
#[derive(Debug, Clone)]
pub enum Consistency {
    Consistent { witness: Distribution },
    Inconsistent { conflicting_statements: Vec<usize> },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }
}

/// Conditional bounds plus diagnostics about how they were obtained.
#[derive(Debug, Clone)]
pub struct ConditionalBounds {
    pub interval: Interval,
    /// True when the evidence can have probability zero under some
    /// admissible distribution, i.e. the bounds quantify only over the
    /// subfamily giving the evidence positive mass.
    pub regular_extension: bool,
}

/// Constraint-defined credal set over a world space.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalSet {
    space: WorldSpace,
    statements: Vec<ProbStatement>,
    structural_zero: WorldSet,
}

impl CredalSet {
    pub fn new(space: WorldSpace, statements: Vec<ProbStatement>) -> CredalSet {
        let structural_zero = WorldSet::empty(&space);
        CredalSet {
            space,
            statements,
            structural_zero,
        }
    }

    pub fn space(&self) -> &WorldSpace {
        &self.space
    }

    pub fn statements(&self) -> &[ProbStatement] {
        &self.statements
    }

    pub fn structural_zero(&self) -> &WorldSet {
        &self.structural_zero
    }

    /// Adds `background` as structural knowledge: worlds violating it are
    /// forced to mass zero. Consistency is not re-checked here.
    pub fn restrict(&self, background: &Formula) -> CredalSet {
        let violating = models(background, &self.space).complement();
        CredalSet {
            space: self.space.clone(),
            statements: self.statements.clone(),
            structural_zero: self.structural_zero.union(&violating),
        }
    }

    /// Feasibility check returning an exact witness distribution when the
    /// constraint system is satisfiable.
    pub fn assert_consistent(&self) -> Consistency {
        let program = MassProgram::build(self, &[], None);
        match solver::feasible_point(program.num_classes(), &program.rows) {
            Ok(solution) => Consistency::Consistent {
                witness: program.expand(&solution),
            },
            Err(LpError::Infeasible { conflict_tags }) => Consistency::Inconsistent {
                conflicting_statements: conflict_tags
                    .into_iter()
                    .filter_map(|tag| program.statement_of_tag(tag))
                    .collect(),
            },
            Err(LpError::Unbounded) => unreachable!("feasibility has no objective"),
        }
    }

    /// Exact minimum of `P(event)` over admissible distributions.
    pub fn lower_prob(&self, event: &Formula) -> Result<Fraction, CredalError> {
        Ok(self.cond_bounds(event, &Formula::True)?.lower)
    }

    /// Exact maximum of `P(event)` over admissible distributions.
    pub fn upper_prob(&self, event: &Formula) -> Result<Fraction, CredalError> {
        Ok(self.cond_bounds(event, &Formula::True)?.upper)
    }

    /// Exact bounds of `P(target | evidence)` under the regular extension.
    pub fn cond_bounds(&self, target: &Formula, evidence: &Formula) -> Result<Interval, CredalError> {
        Ok(self.cond_bounds_detailed(target, evidence)?.interval)
    }

    /// Like [`cond_bounds`](Self::cond_bounds) but also reports whether the
    /// regular extension engaged (evidence not bounded away from zero).
    pub fn cond_bounds_detailed(
        &self,
        target: &Formula,
        evidence: &Formula,
    ) -> Result<ConditionalBounds, CredalError> {
        let evidence_set = models(evidence, &self.space);
        let numerator = models(target, &self.space).intersect(&evidence_set);
        let (lower, upper, regular) =
            self.fractional_bounds(&ObjectiveSpec::Indicator(&numerator), &evidence_set)?;
        Ok(ConditionalBounds {
            interval: Interval::new(lower, upper).expect("probability bounds in [0, 1]"),
            regular_extension: regular,
        })
    }

    /// Min/max of `sum_w value(w) * P(w | evidence)` over the credal set;
    /// shared by conditional probabilities (0/1 values) and expected
    /// utilities. Returns `(lower, upper, regular_extension)`.
    pub(crate) fn fractional_bounds(
        &self,
        objective: &ObjectiveSpec<'_>,
        evidence: &WorldSet,
    ) -> Result<(Fraction, Fraction, bool), CredalError> {
        // Feasibility and evidence bounds over the unconditioned program.
        let base = MassProgram::build(self, &[evidence], None);
        if let Err(LpError::Infeasible { .. }) =
            solver::feasible_point(base.num_classes(), &base.rows)
        {
            return Err(CredalError::InconsistentPremises);
        }
        let evidence_obj = base.indicator_objective(evidence);
        let upper_evidence = solver::optimize(
            base.num_classes(),
            &base.rows,
            &evidence_obj,
            Direction::Maximize,
        )
        .map_err(|_| CredalError::InconsistentPremises)?
        .value;
        if upper_evidence.is_zero() {
            return Err(CredalError::ImpossibleEvidence);
        }
        let lower_evidence = solver::optimize(
            base.num_classes(),
            &base.rows,
            &evidence_obj,
            Direction::Minimize,
        )
        .map_err(|_| CredalError::InconsistentPremises)?
        .value;
        let regular = lower_evidence.is_zero();

        // Charnes-Cooper: replace `sum = 1` by `P(evidence) = 1` and drop the
        // normalization. Every solution maps back to an admissible
        // distribution with positive evidence mass, so the optima are
        // attained regular-extension bounds.
        let transformed = MassProgram::build_conditional(self, objective, evidence);
        let obj = transformed.objective_vector(objective);
        let lower = solver::optimize(
            transformed.num_classes(),
            &transformed.rows,
            &obj,
            Direction::Minimize,
        )
        .map_err(|_| CredalError::ImpossibleEvidence)?
        .value;
        let upper = solver::optimize(
            transformed.num_classes(),
            &transformed.rows,
            &obj,
            Direction::Maximize,
        )
        .map_err(|_| CredalError::ImpossibleEvidence)?
        .value;
        Ok((lower, upper, regular))
    }
}

/// Objective over worlds for the fractional programs.
pub(crate) enum ObjectiveSpec<'a> {
    /// 0/1 objective: total conditional mass of a world set.
    Indicator(&'a WorldSet),
    /// Arbitrary per-world values (conditional expectation numerators).
    Weighted(&'a [Fraction]),
}

/// Linear program over merged world classes.
///
/// Worlds are grouped by their full column of constraint coefficients plus
/// objective value; each class becomes one LP variable carrying the total
/// mass of its worlds.
pub(crate) struct MassProgram {
    /// Representative world per class.
    representatives: Vec<usize>,
    /// Number of worlds per class.
    sizes: Vec<usize>,
    /// Class of each world; `None` for structurally zeroed worlds.
    class_of_world: Vec<Option<usize>>,
    pub rows: Vec<Row>,
    world_count: usize,
}

/// Row tags: statement `i` owns tags `2i` (lower side) and `2i + 1` (upper
/// side); the normalization row gets `usize::MAX`.
const NORMALIZATION_TAG: usize = usize::MAX;

impl MassProgram {
    /// Builds the unconditioned program: class masses are nonnegative, sum
    /// to one, and satisfy every statement row.
    fn build(set: &CredalSet, extra_events: &[&WorldSet], weights: Option<&[Fraction]>) -> MassProgram {
        let mut program = MassProgram::classify(set, extra_events, weights);
        let ones = vec![int(1); program.num_classes()];
        program.rows.push(Row {
            coeffs: ones,
            rel: Rel::Eq,
            rhs: int(1),
            tag: NORMALIZATION_TAG,
        });
        program.push_statement_rows(set);
        program
    }

    /// Builds the Charnes-Cooper transformed program for conditioning on
    /// `evidence`: the normalization becomes `P(evidence) = 1` and all
    /// statement rows stay (they are homogeneous).
    fn build_conditional(
        set: &CredalSet,
        objective: &ObjectiveSpec<'_>,
        evidence: &WorldSet,
    ) -> MassProgram {
        let weights = match objective {
            ObjectiveSpec::Indicator(_) => None,
            ObjectiveSpec::Weighted(values) => Some(*values),
        };
        let mut extra: Vec<&WorldSet> = vec![evidence];
        if let ObjectiveSpec::Indicator(set) = objective {
            extra.push(set);
        }
        let mut program = MassProgram::classify(set, &extra, weights);
        let evidence_row = program.indicator_objective(evidence);
        program.rows.push(Row {
            coeffs: evidence_row,
            rel: Rel::Eq,
            rhs: int(1),
            tag: NORMALIZATION_TAG,
        });
        program.push_statement_rows(set);
        program
    }

    /// Groups worlds into classes with identical constraint columns and
    /// objective values. Structurally zeroed worlds are dropped.
    fn classify(
        set: &CredalSet,
        extra_events: &[&WorldSet],
        weights: Option<&[Fraction]>,
    ) -> MassProgram {
        let space = &set.space;
        let n = space.world_count();

        let mut events: Vec<WorldSet> = Vec::with_capacity(2 * set.statements.len() + extra_events.len());
        for statement in &set.statements {
            let cond_set = match &statement.condition {
                Some(c) => models(c, space),
                None => WorldSet::full(space),
            };
            let target_and_cond = models(&statement.target, space).intersect(&cond_set);
            events.push(target_and_cond);
            events.push(cond_set);
        }
        for extra in extra_events {
            events.push((*extra).clone());
        }

        // Signature: membership bits across all events, plus the objective
        // value when one is supplied.
        let mut class_index: BTreeMap<(Vec<bool>, Option<Fraction>), usize> = BTreeMap::new();
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut class_of_world: Vec<Option<usize>> = vec![None; n];
        for w in 0..n {
            if set.structural_zero.contains(w) {
                continue;
            }
            let bits: Vec<bool> = events.iter().map(|e| e.contains(w)).collect();
            let weight = weights.map(|values| values[w].clone());
            let next = representatives.len();
            let class = *class_index.entry((bits, weight)).or_insert_with(|| {
                representatives.push(w);
                sizes.push(0);
                next
            });
            sizes[class] += 1;
            class_of_world[w] = Some(class);
        }

        MassProgram {
            representatives,
            sizes,
            class_of_world,
            rows: Vec::new(),
            world_count: n,
        }
    }

    /// Statement rows over classes, evaluated at each representative world:
    /// `P(t & c) - l * P(c) >= 0` and `u * P(c) - P(t & c) >= 0`.
    fn push_statement_rows(&mut self, set: &CredalSet) {
        let space = &set.space;
        for (i, statement) in set.statements.iter().enumerate() {
            let cond_set = match &statement.condition {
                Some(c) => models(c, space),
                None => WorldSet::full(space),
            };
            let tc_set = models(&statement.target, space).intersect(&cond_set);
            let mut lower_row = Vec::with_capacity(self.num_classes());
            let mut upper_row = Vec::with_capacity(self.num_classes());
            for &rep in &self.representatives {
                let in_tc = if tc_set.contains(rep) { int(1) } else { int(0) };
                let in_c = if cond_set.contains(rep) { int(1) } else { int(0) };
                lower_row.push(&in_tc - &statement.lower * &in_c);
                upper_row.push(&statement.upper * &in_c - &in_tc);
            }
            if !statement.lower.is_zero() {
                self.rows.push(Row {
                    coeffs: lower_row,
                    rel: Rel::Ge,
                    rhs: int(0),
                    tag: 2 * i,
                });
            }
            if statement.upper < int(1) {
                self.rows.push(Row {
                    coeffs: upper_row,
                    rel: Rel::Ge,
                    rhs: int(0),
                    tag: 2 * i + 1,
                });
            }
        }
    }

    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }

    fn statement_of_tag(&self, tag: usize) -> Option<usize> {
        if tag == NORMALIZATION_TAG {
            None
        } else {
            Some(tag / 2)
        }
    }

    /// Per-class 0/1 objective for an event's total mass.
    fn indicator_objective(&self, event: &WorldSet) -> Vec<Fraction> {
        self.representatives
            .iter()
            .map(|&rep| if event.contains(rep) { int(1) } else { int(0) })
            .collect()
    }

    fn objective_vector(&self, objective: &ObjectiveSpec<'_>) -> Vec<Fraction> {
        match objective {
            ObjectiveSpec::Indicator(set) => self.indicator_objective(set),
            ObjectiveSpec::Weighted(values) => self
                .representatives
                .iter()
                .map(|&rep| values[rep].clone())
                .collect(),
        }
    }

    /// Expands class masses into a per-world distribution, splitting each
    /// class mass equally among its worlds. Class-constant constraints
    /// cannot tell the difference, so feasibility is preserved exactly.
    fn expand(&self, class_masses: &[Fraction]) -> Distribution {
        let mut masses = vec![int(0); self.world_count];
        for (w, class) in self.class_of_world.iter().enumerate() {
            if let Some(k) = class {
                masses[w] = &class_masses[*k] / int(self.sizes[*k] as i64);
            }
        }
        Distribution::exact(masses)
    }

    pub(crate) fn expand_masses(&self, class_masses: &[Fraction]) -> Distribution {
        self.expand(class_masses)
    }

    pub(crate) fn build_for_entropy(set: &CredalSet) -> MassProgram {
        MassProgram::build(set, &[], None)
    }

    pub(crate) fn class_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Per-class coefficient vectors of a statement's two linearized sides,
    /// `(P(t & c) - l * P(c), u * P(c) - P(t & c))`.
    pub(crate) fn statement_sides(
        &self,
        set: &CredalSet,
        statement: &ProbStatement,
    ) -> (Vec<Fraction>, Vec<Fraction>) {
        let space = set.space();
        let cond_set = match statement.condition() {
            Some(c) => models(c, space),
            None => WorldSet::full(space),
        };
        let tc_set = models(statement.target(), space).intersect(&cond_set);
        let mut lower_side = Vec::with_capacity(self.num_classes());
        let mut upper_side = Vec::with_capacity(self.num_classes());
        for &rep in &self.representatives {
            let in_tc = if tc_set.contains(rep) { int(1) } else { int(0) };
            let in_c = if cond_set.contains(rep) { int(1) } else { int(0) };
            lower_side.push(&in_tc - statement.lower_bound() * &in_c);
            upper_side.push(statement.upper_bound() * &in_c - &in_tc);
        }
        (lower_side, upper_side)
    }
}
