//! Interval expected utility and act selection.
//!
//! Expected utilities over a credal set are intervals: the min and max of
//! `sum_w u(w) * P(w | evidence)` over admissible distributions, computed
//! by the same fractional machinery as conditional probabilities. Two
//! selection rules are offered for interval-valued expectations: maximize
//! the lower expectation, or keep every act not strictly dominated.

use thiserror::Error;

use crate::credal::{Consistency, CredalError, CredalSet, ObjectiveSpec};
use crate::logic::{models, Formula, WorldSet, WorldSpace};
use crate::rational::Fraction;
use crate::schema::UncertaintyPremise;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Credal(#[from] CredalError),
    #[error("utility clauses of act `{act}` do not partition the world space: {detail}")]
    PartitionViolation { act: String, detail: String },
    #[error("a decision problem needs at least one act")]
    NoActs,
}

/// An act with state-dependent utilities: one exact utility per clause,
/// clauses partitioning the world space.
#[derive(Debug, Clone, PartialEq)]
pub struct Act {
    name: String,
    clauses: Vec<(Formula, Fraction)>,
}

impl Act {
    pub fn new(name: impl Into<String>, clauses: Vec<(Formula, Fraction)>) -> Act {
        Act {
            name: name.into(),
            clauses,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn clauses(&self) -> &[(Formula, Fraction)] {
        &self.clauses
    }

    /// Per-world utility vector; errors unless the clauses are pairwise
    /// disjoint and jointly exhaustive.
    fn utilities(&self, space: &WorldSpace) -> Result<Vec<Fraction>, DecisionError> {
        let mut covered = WorldSet::empty(space);
        let mut utilities: Vec<Option<Fraction>> = vec![None; space.world_count()];
        for (formula, utility) in &self.clauses {
            let set = models(formula, space);
            if !set.intersect(&covered).is_empty() {
                return Err(DecisionError::PartitionViolation {
                    act: self.name.clone(),
                    detail: format!("clause `{}` overlaps an earlier clause", formula.render(space)),
                });
            }
            for w in set.iter_worlds() {
                utilities[w] = Some(utility.clone());
            }
            covered = covered.union(&set);
        }
        if !covered.is_full() {
            let missing = covered
                .complement()
                .iter_worlds()
                .next()
                .expect("nonempty complement");
            return Err(DecisionError::PartitionViolation {
                act: self.name.clone(),
                detail: format!("world `{}` is not covered", space.world_minterm(missing)),
            });
        }
        Ok(utilities.into_iter().map(|u| u.expect("covered")).collect())
    }
}

/// Acts to choose among, under shared uncertain and categorical premises.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    pub space: WorldSpace,
    pub uncertainty: UncertaintyPremise,
    pub background: Vec<Formula>,
    pub evidence: Vec<Formula>,
    pub acts: Vec<Act>,
}

/// Closed utility interval; unlike probabilities the endpoints are
/// unrestricted rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UtilityInterval {
    pub lower: Fraction,
    pub upper: Fraction,
}

impl std::fmt::Display for UtilityInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceRule {
    /// Keep the acts maximizing the lower expected utility.
    GammaMaximin,
    /// Keep every act whose upper expectation is not beaten by another
    /// act's lower expectation.
    IntervalDominance,
}

impl DecisionProblem {
    fn credal_set(&self) -> CredalSet {
        CredalSet::new(self.space.clone(), self.uncertainty.statements().to_vec())
            .restrict(&Formula::conjoin_all(self.background.iter().cloned()))
    }

    fn evidence_set(&self) -> WorldSet {
        models(
            &Formula::conjoin_all(self.evidence.iter().cloned()),
            &self.space,
        )
    }
}

/// Exact interval of the act's expected utility conditioned on the
/// problem's evidence.
pub fn expected_utility_interval(
    problem: &DecisionProblem,
    act: &Act,
) -> Result<UtilityInterval, DecisionError> {
    let set = problem.credal_set();
    if let Consistency::Inconsistent { .. } = set.assert_consistent() {
        return Err(CredalError::InconsistentPremises.into());
    }
    let utilities = act.utilities(&problem.space)?;
    let evidence = problem.evidence_set();
    // Conditional expectation numerator: utilities masked to the evidence.
    let masked: Vec<Fraction> = utilities
        .iter()
        .enumerate()
        .map(|(w, u)| {
            if evidence.contains(w) {
                u.clone()
            } else {
                Fraction::from_integer(0.into())
            }
        })
        .collect();
    let (lower, upper, _) =
        set.fractional_bounds(&ObjectiveSpec::Weighted(&masked), &evidence)?;
    Ok(UtilityInterval { lower, upper })
}

/// Admissible acts under the rule, ordered lexicographically by name; ties
/// are all reported.
pub fn choose(problem: &DecisionProblem, rule: ChoiceRule) -> Result<Vec<Act>, DecisionError> {
    if problem.acts.is_empty() {
        return Err(DecisionError::NoActs);
    }
    let mut evaluated: Vec<(Act, UtilityInterval)> = Vec::with_capacity(problem.acts.len());
    for act in &problem.acts {
        let interval = expected_utility_interval(problem, act)?;
        evaluated.push((act.clone(), interval));
    }

    let mut admissible: Vec<Act> = match rule {
        ChoiceRule::GammaMaximin => {
            let best = evaluated
                .iter()
                .map(|(_, i)| i.lower.clone())
                .max()
                .expect("nonempty acts");
            evaluated
                .into_iter()
                .filter(|(_, i)| i.lower == best)
                .map(|(a, _)| a)
                .collect()
        }
        ChoiceRule::IntervalDominance => {
            let lowers: Vec<Fraction> = evaluated.iter().map(|(_, i)| i.lower.clone()).collect();
            evaluated
                .iter()
                .filter(|(_, interval)| !lowers.iter().any(|l| *l > interval.upper))
                .map(|(a, _)| a.clone())
                .collect()
        }
    };
    admissible.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(admissible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credal::ProbStatement;
    use crate::logic::{parse_formula, world_space};
    use crate::rational::{frac, int};

    fn picnic_problem() -> DecisionProblem {
        let space = world_space(&["rain", "wet"]).unwrap();
        let rain = parse_formula("rain", &space).unwrap();
        let not_rain = parse_formula("!rain", &space).unwrap();
        DecisionProblem {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![ProbStatement::new(
                rain.clone(),
                None,
                frac(1, 5),
                frac(3, 10),
            )
            .unwrap()]),
            background: vec![],
            evidence: vec![],
            acts: vec![
                Act::new("hold", vec![(rain.clone(), int(-10)), (not_rain.clone(), int(10))]),
                Act::new("cancel", vec![(Formula::True, int(0))]),
            ],
        }
    }

    #[test]
    fn picnic_expected_utilities() {
        let problem = picnic_problem();
        let hold = expected_utility_interval(&problem, &problem.acts[0]).unwrap();
        assert_eq!(hold.lower, int(4));
        assert_eq!(hold.upper, int(6));
        let cancel = expected_utility_interval(&problem, &problem.acts[1]).unwrap();
        assert_eq!(cancel.lower, int(0));
        assert_eq!(cancel.upper, int(0));
    }

    #[test]
    fn constant_utility_is_a_point() {
        let mut problem = picnic_problem();
        problem.acts = vec![Act::new("flat", vec![(Formula::True, frac(7, 3))])];
        let interval = expected_utility_interval(&problem, &problem.acts[0]).unwrap();
        assert_eq!(interval.lower, frac(7, 3));
        assert_eq!(interval.upper, frac(7, 3));
    }

    #[test]
    fn gamma_maximin_prefers_the_picnic() {
        let problem = picnic_problem();
        let chosen = choose(&problem, ChoiceRule::GammaMaximin).unwrap();
        assert_eq!(chosen.len(), 1);
        assert_eq!(chosen[0].name(), "hold");
    }

    #[test]
    fn interval_dominance_drops_the_dominated_act() {
        let problem = picnic_problem();
        let chosen = choose(&problem, ChoiceRule::IntervalDominance).unwrap();
        assert_eq!(chosen.len(), 1);
        assert_eq!(chosen[0].name(), "hold");
    }

    #[test]
    fn identical_acts_tie_in_name_order() {
        let mut problem = picnic_problem();
        let clauses = problem.acts[0].clauses().to_vec();
        problem.acts = vec![
            Act::new("second", clauses.clone()),
            Act::new("first", clauses),
        ];
        let chosen = choose(&problem, ChoiceRule::GammaMaximin).unwrap();
        assert_eq!(chosen.len(), 2);
        assert_eq!(chosen[0].name(), "first");
        assert_eq!(chosen[1].name(), "second");
    }

    #[test]
    fn partition_violations_are_rejected() {
        let space = world_space(&["rain"]).unwrap();
        let rain = parse_formula("rain", &space).unwrap();
        let mut problem = picnic_problem();
        problem.space = space.clone();
        problem.uncertainty = UncertaintyPremise::empty();

        problem.acts = vec![Act::new("gap", vec![(rain.clone(), int(1))])];
        assert!(matches!(
            expected_utility_interval(&problem, &problem.acts[0]),
            Err(DecisionError::PartitionViolation { .. })
        ));

        problem.acts = vec![Act::new(
            "overlap",
            vec![(Formula::True, int(1)), (rain, int(2))],
        )];
        assert!(matches!(
            expected_utility_interval(&problem, &problem.acts[0]),
            Err(DecisionError::PartitionViolation { .. })
        ));
    }

    #[test]
    fn zero_one_utility_matches_conditional_probability() {
        let space = world_space(&["a", "b"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let b = parse_formula("b", &space).unwrap();
        let not_a = parse_formula("!a", &space).unwrap();
        let problem = DecisionProblem {
            space: space.clone(),
            uncertainty: UncertaintyPremise::new(vec![ProbStatement::new(
                a.clone(),
                None,
                frac(1, 4),
                frac(1, 2),
            )
            .unwrap()]),
            background: vec![],
            evidence: vec![b.clone()],
            acts: vec![Act::new("bet", vec![(a.clone(), int(1)), (not_a, int(0))])],
        };
        let eu = expected_utility_interval(&problem, &problem.acts[0]).unwrap();
        let set = problem.credal_set();
        let cond = set.cond_bounds(&a, &b).unwrap();
        assert_eq!(&eu.lower, cond.lower());
        assert_eq!(&eu.upper, cond.upper());
    }
}
