//! Argument schemas over credal sets.
//!
//! Two argument forms are modeled. The first carries uncertain premises
//! through a deductively valid procedure to a probability-qualified
//! conclusion: build the credal set from the uncertainty premise, impose
//! the categorical background structurally, condition on the observed
//! evidence, and report the exact interval. The second adds an acceptance
//! level `p in (1/2, 1]`: the conclusion is detached categorically when its
//! lower probability reaches `p`.
//!
//! The categorical premise is deliberately split in two. `background` acts
//! structurally (worlds violating it get mass zero), which is what a
//! conditional premise must do for an interval-probability premise to
//! propagate through it; `evidence` is conditioned on, which is what a
//! posterior-style argument requires. Authors choose per formula.
//!
//! [`eliminate`] mechanizes replacing accepted-but-uncertain evidence by
//! its own support: the supports' uncertainty premises are merged into the
//! main argument (consistency is checked; any stronger justification for
//! combining premises remains the author's responsibility), the targets
//! leave the evidence list, and the conclusion is re-derived together with
//! its total-probability expansion over the `2^k` sign patterns of the
//! eliminated premises. [`conjunction_audit`] checks the other direction:
//! whether premises that are individually acceptable stay acceptable as a
//! conjunction.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::credal::{
    Consistency, ConditionalBounds, CredalError, CredalSet, Interval, ProbStatement,
};
use crate::logic::{Formula, WorldSpace};
use crate::rational::{frac, int, Fraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error(transparent)]
    Credal(#[from] CredalError),
    #[error("elimination target `{target}` does not appear in the main evidence")]
    TargetNotInEvidence { target: String },
    #[error("support {index} does not conclude its elimination target")]
    SupportConclusionMismatch { index: usize },
    #[error("support {index} is rejected at its own threshold")]
    SupportRejected { index: usize },
    #[error("combined uncertainty premises are inconsistent")]
    InconsistentCombination { conflicting_statements: Vec<usize> },
    #[error("premise {index} is not individually accepted at the threshold")]
    PremiseNotAccepted { index: usize },
    #[error("acceptance threshold must lie in (1/2, 1]")]
    InvalidThreshold,
    #[error("arguments range over different world spaces")]
    SpaceMismatch,
}

/// The uncertainty premise: a list of probability statements, combined by
/// constraint intersection.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UncertaintyPremise {
    statements: Vec<ProbStatement>,
}

impl UncertaintyPremise {
    pub fn new(statements: Vec<ProbStatement>) -> UncertaintyPremise {
        UncertaintyPremise { statements }
    }

    pub fn empty() -> UncertaintyPremise {
        UncertaintyPremise::default()
    }

    pub fn statements(&self) -> &[ProbStatement] {
        &self.statements
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }
}

/// Uncertain premises, categorical premises, a query; the conclusion is the
/// exact probability interval of the query.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaIArgument {
    pub space: WorldSpace,
    pub uncertainty: UncertaintyPremise,
    /// Categorical premises imposed structurally.
    pub background: Vec<Formula>,
    /// Categorical premises conditioned on.
    pub evidence: Vec<Formula>,
    pub query: Formula,
}

impl SchemaIArgument {
    /// The credal set the argument quantifies over: uncertainty statements
    /// restricted by the conjunction of the background.
    pub fn credal_set(&self) -> CredalSet {
        let set = CredalSet::new(self.space.clone(), self.uncertainty.statements().to_vec());
        set.restrict(&Formula::conjoin_all(self.background.iter().cloned()))
    }

    pub fn evidence_conjunction(&self) -> Formula {
        Formula::conjoin_all(self.evidence.iter().cloned())
    }
}

/// A categorical-conclusion argument: the base argument plus an acceptance
/// level. The threshold must exceed 1/2, otherwise a sentence and its
/// negation could both be accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaIIArgument {
    base: SchemaIArgument,
    threshold: Fraction,
}

impl SchemaIIArgument {
    pub fn new(base: SchemaIArgument, threshold: Fraction) -> Result<SchemaIIArgument, SchemaError> {
        if threshold <= frac(1, 2) || threshold > int(1) {
            return Err(SchemaError::InvalidThreshold);
        }
        Ok(SchemaIIArgument { base, threshold })
    }

    pub fn base(&self) -> &SchemaIArgument {
        &self.base
    }

    pub fn threshold(&self) -> &Fraction {
        &self.threshold
    }
}

/// Outcome of a threshold-acceptance evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub interval: Interval,
    pub accepted: bool,
}

/// Result of eliminating accepted premises from a main argument.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationReport {
    pub old_interval: Interval,
    pub new_argument: SchemaIArgument,
    pub new_interval: Interval,
    /// One `(weight, factor)` pair per sign pattern of the eliminated
    /// targets, ordered by binary counting (all-positive first).
    pub expansion: Vec<(Interval, Interval)>,
    /// `1 - lower P(conjunction of targets | new evidence)`: how far the
    /// new value can drift from the old one.
    pub deviation_bound: Fraction,
}

/// Result of a conjunction (lottery) audit.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub premise_intervals: Vec<Interval>,
    pub conjunction: Interval,
    pub frechet: Fraction,
    pub pass: bool,
}

/// Evaluates a probability-qualified argument to its exact interval.
pub fn evaluate_schema_i(arg: &SchemaIArgument) -> Result<Interval, SchemaError> {
    Ok(evaluate_schema_i_detailed(arg)?.interval)
}

/// Like [`evaluate_schema_i`] with regular-extension diagnostics.
pub fn evaluate_schema_i_detailed(
    arg: &SchemaIArgument,
) -> Result<ConditionalBounds, SchemaError> {
    let set = arg.credal_set();
    if let Consistency::Inconsistent { .. } = set.assert_consistent() {
        return Err(CredalError::InconsistentPremises.into());
    }
    let evidence = arg.evidence_conjunction();
    Ok(set.cond_bounds_detailed(&arg.query, &evidence)?)
}

/// Evaluates a threshold argument: the conclusion is detached iff the lower
/// probability of the query reaches the acceptance level.
pub fn evaluate_schema_ii(arg: &SchemaIIArgument) -> Result<Verdict, SchemaError> {
    let interval = evaluate_schema_i(&arg.base)?;
    let accepted = interval.lower() >= &arg.threshold;
    Ok(Verdict { interval, accepted })
}

/// Combines two uncertainty premises by statement-list union, erroring when
/// the union is infeasible. The certificate lists indices into the combined
/// statement list when the solver can name a conflicting subset.
///
/// Feasibility is all that is checked; whether the premises may justifiably
/// be combined is a stronger question left to the author.
pub fn combine_premises(
    u1: &UncertaintyPremise,
    u2: &UncertaintyPremise,
    space: &WorldSpace,
) -> Result<UncertaintyPremise, SchemaError> {
    let mut statements = u1.statements().to_vec();
    statements.extend(u2.statements().iter().cloned());
    let set = CredalSet::new(space.clone(), statements.clone());
    match set.assert_consistent() {
        Consistency::Consistent { .. } => Ok(UncertaintyPremise::new(statements)),
        Consistency::Inconsistent {
            conflicting_statements,
        } => Err(SchemaError::InconsistentCombination {
            conflicting_statements,
        }),
    }
}

/// Total-probability expansion of `P(query | evidence)` over the sign
/// patterns of `targets`: term `i` negates target `j` iff bit `j` of `i` is
/// set, so the all-positive cell comes first. Impossible cells report
/// weight `[0, 0]` and the vacuous factor `[0, 1]`, keeping the point-case
/// decomposition identity summable.
pub fn expansion_terms(
    set: &CredalSet,
    query: &Formula,
    targets: &[Formula],
    evidence: &Formula,
) -> Result<Vec<(Interval, Interval)>, CredalError> {
    let count = 1usize << targets.len();
    let mut terms = Vec::with_capacity(count);
    for pattern in 0..count {
        let cell = sign_cell(targets, pattern);
        let weight = set.cond_bounds(&cell, evidence)?;
        if weight.upper().is_zero() {
            terms.push((
                Interval::new(int(0), int(0)).expect("zero interval"),
                Interval::vacuous(),
            ));
            continue;
        }
        let cell_and_evidence = Formula::and(cell, evidence.clone());
        let factor = set.cond_bounds(query, &cell_and_evidence)?;
        terms.push((weight, factor));
    }
    Ok(terms)
}

fn sign_cell(targets: &[Formula], pattern: usize) -> Formula {
    Formula::conjoin_all(targets.iter().enumerate().map(|(j, t)| {
        if (pattern >> j) & 1 == 0 {
            t.clone()
        } else {
            Formula::not(t.clone())
        }
    }))
}

/// Replaces accepted-but-uncertain evidence by its supports.
///
/// Each `(target, support)` pair removes `target` from the main evidence
/// and merges the support's uncertainty premise and evidence instead. The
/// new conclusion interval comes with its expansion over the eliminated
/// premises' sign patterns and the deviation bound.
pub fn eliminate(
    main: &SchemaIArgument,
    supports: &[(Formula, SchemaIIArgument)],
) -> Result<EliminationReport, SchemaError> {
    for (index, (target, support)) in supports.iter().enumerate() {
        if support.base.space != main.space {
            return Err(SchemaError::SpaceMismatch);
        }
        if !main.evidence.contains(target) {
            return Err(SchemaError::TargetNotInEvidence {
                target: target.render(&main.space),
            });
        }
        if support.base.query != *target {
            return Err(SchemaError::SupportConclusionMismatch { index });
        }
        let verdict = evaluate_schema_ii(support)?;
        if !verdict.accepted {
            return Err(SchemaError::SupportRejected { index });
        }
    }

    let old_interval = evaluate_schema_i(main)?;

    // Single-step combination: statement-list union is order-insensitive.
    let mut combined = main.uncertainty.clone();
    for (_, support) in supports {
        combined = combine_premises(&combined, &support.base.uncertainty, &main.space)?;
    }

    let targets: Vec<Formula> = supports.iter().map(|(t, _)| t.clone()).collect();
    let mut evidence: Vec<Formula> = main
        .evidence
        .iter()
        .filter(|f| !targets.contains(f))
        .cloned()
        .collect();
    for (_, support) in supports {
        for f in &support.base.evidence {
            if !evidence.contains(f) {
                evidence.push(f.clone());
            }
        }
    }
    let mut background = main.background.clone();
    for (_, support) in supports {
        for f in &support.base.background {
            if !background.contains(f) {
                background.push(f.clone());
            }
        }
    }

    let new_argument = SchemaIArgument {
        space: main.space.clone(),
        uncertainty: combined,
        background,
        evidence,
        query: main.query.clone(),
    };

    let new_interval = evaluate_schema_i(&new_argument)?;
    let set = new_argument.credal_set();
    let evidence_conjunction = new_argument.evidence_conjunction();
    let expansion = expansion_terms(&set, &new_argument.query, &targets, &evidence_conjunction)?;
    let targets_conjunction = Formula::conjoin_all(targets.iter().cloned());
    let deviation_bound = int(1)
        - set
            .cond_bounds(&targets_conjunction, &evidence_conjunction)?
            .lower()
            .clone();

    Ok(EliminationReport {
        old_interval,
        new_argument,
        new_interval,
        expansion,
        deviation_bound,
    })
}

/// Audits whether individually accepted premises survive conjunction: the
/// lottery check. Every formula in `accepted` must individually clear the
/// threshold (violations are a distinct error); the report carries the
/// conjunction's exact interval and the analytic floor
/// `max(0, sum of levels - (k - 1))`, which the LP result can only tighten.
pub fn conjunction_audit(
    uncertainty: &UncertaintyPremise,
    background: &[Formula],
    accepted: &[Formula],
    threshold: &Fraction,
    space: &WorldSpace,
) -> Result<AuditReport, SchemaError> {
    let set = CredalSet::new(space.clone(), uncertainty.statements().to_vec())
        .restrict(&Formula::conjoin_all(background.iter().cloned()));
    if let Consistency::Inconsistent { .. } = set.assert_consistent() {
        return Err(CredalError::InconsistentPremises.into());
    }

    let mut premise_intervals = Vec::with_capacity(accepted.len());
    for (index, premise) in accepted.iter().enumerate() {
        let interval = set.cond_bounds(premise, &Formula::True)?;
        if interval.lower() < threshold {
            return Err(SchemaError::PremiseNotAccepted { index });
        }
        premise_intervals.push(interval);
    }

    let conjunction_formula = Formula::conjoin_all(accepted.iter().cloned());
    let conjunction = set.cond_bounds(&conjunction_formula, &Formula::True)?;
    let levels: Vec<Fraction> = premise_intervals
        .iter()
        .map(|i| i.lower().clone())
        .collect();
    let frechet = frechet_lower(&levels);
    debug_assert!(conjunction.lower() >= &frechet);
    let pass = conjunction.lower() >= threshold;

    Ok(AuditReport {
        premise_intervals,
        conjunction,
        frechet,
        pass,
    })
}

/// Analytic floor on the probability of a conjunction from marginal lower
/// bounds: `max(0, sum levels - (k - 1))`.
pub fn frechet_lower(levels: &[Fraction]) -> Fraction {
    let sum: Fraction = levels.iter().sum();
    let floor = sum - (int(levels.len() as i64) - int(1));
    if floor.is_negative() {
        int(0)
    } else {
        floor
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, world_space};

    fn statement(space: &WorldSpace, target: &str, condition: Option<&str>, lo: Fraction, hi: Fraction) -> ProbStatement {
        let target = parse_formula(target, space).unwrap();
        let condition = condition.map(|c| parse_formula(c, space).unwrap());
        ProbStatement::new(target, condition, lo, hi).unwrap()
    }

    fn urn_argument() -> SchemaIArgument {
        let space = world_space(&["typeI", "black"]).unwrap();
        let uncertainty = UncertaintyPremise::new(vec![
            statement(&space, "typeI", None, frac(3, 5), frac(3, 5)),
            statement(&space, "black", Some("typeI"), frac(9, 10), frac(9, 10)),
            statement(&space, "black", Some("!typeI"), frac(1, 5), frac(1, 5)),
        ]);
        let query = parse_formula("typeI", &space).unwrap();
        let evidence = vec![parse_formula("black", &space).unwrap()];
        SchemaIArgument {
            space,
            uncertainty,
            background: vec![],
            evidence,
            query,
        }
    }

    #[test]
    fn urn_argument_evaluates_to_27_31() {
        let interval = evaluate_schema_i(&urn_argument()).unwrap();
        assert_eq!(*interval.lower(), frac(27, 31));
        assert_eq!(*interval.upper(), frac(27, 31));
    }

    #[test]
    fn rain_argument_with_background_conditional() {
        let space = world_space(&["rain", "wet"]).unwrap();
        let arg = SchemaIArgument {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![statement(
                &space,
                "rain",
                None,
                frac(1, 5),
                frac(3, 10),
            )]),
            background: vec![parse_formula("rain -> wet", &space).unwrap()],
            evidence: vec![],
            query: parse_formula("wet", &space).unwrap(),
        };
        let interval = evaluate_schema_i(&arg).unwrap();
        assert_eq!(*interval.lower(), frac(1, 5));
        assert_eq!(*interval.upper(), int(1));
    }

    #[test]
    fn empty_uncertainty_premise_is_vacuous() {
        let space = world_space(&["a"]).unwrap();
        let arg = SchemaIArgument {
            space: space.clone(),
            uncertainty: UncertaintyPremise::empty(),
            background: vec![],
            evidence: vec![],
            query: parse_formula("a", &space).unwrap(),
        };
        assert_eq!(evaluate_schema_i(&arg).unwrap(), Interval::vacuous());
    }

    fn picnic_argument(threshold: Fraction) -> SchemaIIArgument {
        let space = world_space(&["rain", "disaster"]).unwrap();
        let base = SchemaIArgument {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![statement(
                &space,
                "rain",
                None,
                frac(19, 20),
                frac(19, 20),
            )]),
            background: vec![parse_formula("rain -> disaster", &space).unwrap()],
            evidence: vec![],
            query: parse_formula("disaster", &space).unwrap(),
        };
        SchemaIIArgument::new(base, threshold).unwrap()
    }

    #[test]
    fn acceptance_at_the_stated_level() {
        let verdict = evaluate_schema_ii(&picnic_argument(frac(19, 20))).unwrap();
        assert!(verdict.accepted);
        assert_eq!(*verdict.interval.lower(), frac(19, 20));
        assert_eq!(*verdict.interval.upper(), int(1));
    }

    #[test]
    fn rejection_just_above_the_lower_bound() {
        let verdict = evaluate_schema_ii(&picnic_argument(frac(24, 25))).unwrap();
        assert!(!verdict.accepted);
    }

    #[test]
    fn tautological_query_is_always_accepted() {
        let space = world_space(&["a"]).unwrap();
        let base = SchemaIArgument {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![statement(
                &space,
                "a",
                None,
                frac(1, 2),
                frac(1, 2),
            )]),
            background: vec![],
            evidence: vec![],
            query: Formula::True,
        };
        let arg = SchemaIIArgument::new(base, int(1)).unwrap();
        let verdict = evaluate_schema_ii(&arg).unwrap();
        assert!(verdict.accepted);
        assert_eq!(*verdict.interval.lower(), int(1));
    }

    #[test]
    fn threshold_must_exceed_one_half() {
        let base = picnic_argument(frac(19, 20)).base.clone();
        assert_eq!(
            SchemaIIArgument::new(base.clone(), frac(1, 2)).unwrap_err(),
            SchemaError::InvalidThreshold
        );
        assert_eq!(
            SchemaIIArgument::new(base, frac(11, 10)).unwrap_err(),
            SchemaError::InvalidThreshold
        );
    }

    #[test]
    fn combining_premises() {
        let space = world_space(&["a", "b"]).unwrap();
        let u1 = UncertaintyPremise::new(vec![statement(&space, "a", None, frac(3, 5), frac(3, 5))]);
        let u2 = UncertaintyPremise::new(vec![statement(
            &space,
            "b",
            Some("a"),
            frac(9, 10),
            frac(9, 10),
        )]);
        let combined = combine_premises(&u1, &u2, &space).unwrap();
        assert_eq!(combined.statements().len(), 2);

        let empty = combine_premises(&u1, &UncertaintyPremise::empty(), &space).unwrap();
        assert_eq!(empty.statements(), u1.statements());

        let conflicting = UncertaintyPremise::new(vec![statement(&space, "a", None, int(0), frac(1, 10))]);
        let high = UncertaintyPremise::new(vec![statement(&space, "a", None, frac(4, 5), int(1))]);
        match combine_premises(&high, &conflicting, &space).unwrap_err() {
            SchemaError::InconsistentCombination {
                conflicting_statements,
            } => assert!(!conflicting_statements.is_empty()),
            other => panic!("expected combination conflict, got {other:?}"),
        }
    }

    fn pinned_elimination_instance() -> (SchemaIArgument, Formula, SchemaIIArgument) {
        let space = world_space(&["c", "d", "e"]).unwrap();
        let main = SchemaIArgument {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![
                statement(&space, "c", Some("d"), frac(9, 10), frac(9, 10)),
                statement(&space, "c", Some("!d"), frac(1, 10), frac(1, 10)),
                statement(&space, "c", Some("d & e"), frac(9, 10), frac(9, 10)),
                statement(&space, "c", Some("!d & e"), frac(1, 10), frac(1, 10)),
            ]),
            background: vec![],
            evidence: vec![parse_formula("d", &space).unwrap()],
            query: parse_formula("c", &space).unwrap(),
        };
        let support_base = SchemaIArgument {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![statement(
                &space,
                "d",
                Some("e"),
                frac(19, 20),
                frac(19, 20),
            )]),
            background: vec![],
            evidence: vec![parse_formula("e", &space).unwrap()],
            query: parse_formula("d", &space).unwrap(),
        };
        let support = SchemaIIArgument::new(support_base, frac(19, 20)).unwrap();
        let target = parse_formula("d", &space).unwrap();
        (main, target, support)
    }

    #[test]
    fn pinned_single_target_elimination() {
        let (main, target, support) = pinned_elimination_instance();
        let report = eliminate(&main, &[(target, support)]).unwrap();

        assert_eq!(*report.old_interval.lower(), frac(9, 10));
        assert!(report.old_interval.is_point());
        // 0.95 * 0.9 + 0.05 * 0.1 = 43/50.
        assert_eq!(*report.new_interval.lower(), frac(43, 50));
        assert!(report.new_interval.is_point());
        assert_eq!(report.deviation_bound, frac(1, 20));
        // |43/50 - 9/10| = 1/25 <= 1/20.
        let drift = frac(9, 10) - frac(43, 50);
        assert!(drift.abs() <= report.deviation_bound);

        assert_eq!(report.expansion.len(), 2);
        let (weight_pos, factor_pos) = &report.expansion[0];
        assert_eq!(*weight_pos.lower(), frac(19, 20));
        assert_eq!(*factor_pos.lower(), frac(9, 10));
        let (weight_neg, factor_neg) = &report.expansion[1];
        assert_eq!(*weight_neg.lower(), frac(1, 20));
        assert_eq!(*factor_neg.lower(), frac(1, 10));

        // The rewritten argument conditions on the support's evidence only.
        let space = &report.new_argument.space;
        assert_eq!(
            report.new_argument.evidence,
            vec![parse_formula("e", space).unwrap()]
        );
    }

    #[test]
    fn empty_elimination_is_the_identity() {
        let (main, _, _) = pinned_elimination_instance();
        let report = eliminate(&main, &[]).unwrap();
        assert_eq!(report.new_argument, main);
        assert_eq!(report.expansion.len(), 1);
        assert_eq!(report.old_interval, report.new_interval);
        assert_eq!(report.deviation_bound, int(0));
    }

    #[test]
    fn elimination_precondition_errors() {
        let (main, target, support) = pinned_elimination_instance();
        let space = &main.space;

        let mut no_evidence = main.clone();
        no_evidence.evidence = vec![];
        assert!(matches!(
            eliminate(&no_evidence, &[(target.clone(), support.clone())]),
            Err(SchemaError::TargetNotInEvidence { .. })
        ));

        let mut strict = support.clone();
        strict = SchemaIIArgument::new(strict.base.clone(), frac(24, 25)).unwrap();
        assert!(matches!(
            eliminate(&main, &[(target.clone(), strict)]),
            Err(SchemaError::SupportRejected { index: 0 })
        ));

        let mismatched_target = parse_formula("e", space).unwrap();
        assert!(matches!(
            eliminate(
                &{
                    let mut m = main.clone();
                    m.evidence.push(mismatched_target.clone());
                    m
                },
                &[(mismatched_target, support)]
            ),
            Err(SchemaError::SupportConclusionMismatch { index: 0 })
        ));
    }

    #[test]
    fn expansion_term_shapes() {
        let space = world_space(&["typeI", "black"]).unwrap();
        let set = CredalSet::new(
            space.clone(),
            vec![
                statement(&space, "typeI", None, frac(3, 5), frac(3, 5)),
                statement(&space, "black", Some("typeI"), frac(9, 10), frac(9, 10)),
                statement(&space, "black", Some("!typeI"), frac(1, 5), frac(1, 5)),
            ],
        );
        let query = parse_formula("typeI", &space).unwrap();
        let black = parse_formula("black", &space).unwrap();

        // No targets: single vacuous-weight term around the plain bounds.
        let terms = expansion_terms(&set, &query, &[], &Formula::True).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(*terms[0].0.lower(), int(1));
        assert_eq!(terms[0].1, set.cond_bounds(&query, &Formula::True).unwrap());

        // One target: weights are the pinned P(black) = 0.62 split, and the
        // positive cell's factor is the posterior 27/31.
        let terms = expansion_terms(&set, &query, std::slice::from_ref(&black), &Formula::True).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(*terms[0].0.lower(), frac(31, 50));
        assert_eq!(*terms[0].0.upper(), frac(31, 50));
        assert_eq!(*terms[1].0.lower(), frac(19, 50));
        assert_eq!(*terms[0].1.lower(), frac(27, 31));

        // Two targets: four cells.
        let type_i = parse_formula("typeI", &space).unwrap();
        let terms =
            expansion_terms(&set, &query, &[black, type_i], &Formula::True).unwrap();
        assert_eq!(terms.len(), 4);
    }

    #[test]
    fn impossible_cells_are_vacuous_not_errors() {
        let space = world_space(&["a", "b"]).unwrap();
        let set = CredalSet::new(
            space.clone(),
            vec![statement(&space, "a", None, int(1), int(1))],
        );
        let query = parse_formula("b", &space).unwrap();
        let not_a = parse_formula("!a", &space).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let terms = expansion_terms(&set, &query, &[not_a], &Formula::True).unwrap();
        assert_eq!(terms.len(), 2);
        // First cell is !a, impossible under P(a) = 1.
        assert_eq!(*terms[0].0.upper(), int(0));
        assert_eq!(terms[0].1, Interval::vacuous());
        // Second cell is !!a, equivalent to a.
        assert_eq!(*terms[1].0.lower(), int(1));
        let _ = a;
    }

    #[test]
    fn lottery_audit_fails_without_links() {
        let space = world_space(&["a", "b"]).unwrap();
        let uncertainty = UncertaintyPremise::new(vec![
            statement(&space, "a", None, frac(19, 20), int(1)),
            statement(&space, "b", None, frac(19, 20), int(1)),
        ]);
        let accepted = vec![
            parse_formula("a", &space).unwrap(),
            parse_formula("b", &space).unwrap(),
        ];
        let report =
            conjunction_audit(&uncertainty, &[], &accepted, &frac(19, 20), &space).unwrap();
        assert_eq!(*report.conjunction.lower(), frac(9, 10));
        assert_eq!(*report.conjunction.upper(), int(1));
        assert_eq!(report.frechet, frac(9, 10));
        assert!(!report.pass);

        // A structural link a -> b makes the conjunction collapse onto a.
        let background = vec![parse_formula("a -> b", &space).unwrap()];
        let linked =
            conjunction_audit(&uncertainty, &background, &accepted, &frac(19, 20), &space)
                .unwrap();
        assert_eq!(*linked.conjunction.lower(), frac(19, 20));
        assert!(linked.pass);
    }

    #[test]
    fn single_premise_audit_is_its_own_interval() {
        let space = world_space(&["a"]).unwrap();
        let uncertainty =
            UncertaintyPremise::new(vec![statement(&space, "a", None, frac(19, 20), int(1))]);
        let accepted = vec![parse_formula("a", &space).unwrap()];
        let report =
            conjunction_audit(&uncertainty, &[], &accepted, &frac(19, 20), &space).unwrap();
        assert_eq!(report.conjunction, report.premise_intervals[0]);
        assert!(report.pass);
    }

    #[test]
    fn audit_rejects_unaccepted_premises() {
        let space = world_space(&["a", "b"]).unwrap();
        let uncertainty = UncertaintyPremise::new(vec![
            statement(&space, "a", None, frac(19, 20), int(1)),
            statement(&space, "b", None, frac(1, 2), int(1)),
        ]);
        let accepted = vec![
            parse_formula("a", &space).unwrap(),
            parse_formula("b", &space).unwrap(),
        ];
        assert!(matches!(
            conjunction_audit(&uncertainty, &[], &accepted, &frac(19, 20), &space),
            Err(SchemaError::PremiseNotAccepted { index: 1 })
        ));
    }

    #[test]
    fn frechet_floor_values() {
        assert_eq!(frechet_lower(&[frac(19, 20), frac(19, 20)]), frac(9, 10));
        assert_eq!(frechet_lower(&[frac(4, 5)]), frac(4, 5));
        assert_eq!(
            frechet_lower(&[frac(3, 5), frac(3, 5), frac(3, 5)]),
            int(0)
        );
        assert_eq!(frechet_lower(&[]), int(1));
    }
}
