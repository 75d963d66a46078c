//! Shared random-instance builders for the integration suites.
//!
//! Instances are generated from seeded RNGs so every run sees the same
//! cases. Statement bounds are drawn from coarse grids (denominators
//! dividing 60) so that grid oracles have feasible points to find.

// Not every suite uses every helper.
#![allow(dead_code)]

use credence::logic::{models, AtomId, Formula, WorldSet, WorldSpace};
use credence::rational::{frac, int, Fraction};
use credence::{CredalSet, ProbStatement};
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_space(rng: &mut StdRng, max_atoms: usize) -> WorldSpace {
    let count = rng.random_range(1..=max_atoms);
    let names: Vec<String> = (0..count).map(|i| format!("p{i}")).collect();
    credence::world_space(&names).unwrap()
}

pub fn random_formula(rng: &mut StdRng, space: &WorldSpace, depth: usize) -> Formula {
    if depth == 0 || rng.random_range(0..4) == 0 {
        let choice = rng.random_range(0..8);
        return match choice {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Atom(AtomId(rng.random_range(0..space.atom_count()))),
        };
    }
    let left = random_formula(rng, space, depth - 1);
    let right = random_formula(rng, space, depth - 1);
    match rng.random_range(0..4) {
        0 => Formula::not(left),
        1 => Formula::and(left, right),
        2 => Formula::or(left, right),
        _ => Formula::implies(left, right),
    }
}

/// Random bound endpoints on the 1/12 grid with lower <= upper.
fn random_bounds(rng: &mut StdRng) -> (Fraction, Fraction) {
    let a = rng.random_range(0..=12);
    let b = rng.random_range(0..=12);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    (frac(lo, 12), frac(hi, 12))
}

/// Random credal set with interval statements; occasionally conditional.
pub fn random_credal_set(
    rng: &mut StdRng,
    space: &WorldSpace,
    max_statements: usize,
) -> CredalSet {
    let count = rng.random_range(0..=max_statements);
    let mut statements = Vec::with_capacity(count);
    for _ in 0..count {
        let target = random_formula(rng, space, 2);
        let condition = if rng.random_range(0..3) == 0 {
            Some(random_formula(rng, space, 1))
        } else {
            None
        };
        let (lo, hi) = random_bounds(rng);
        statements.push(ProbStatement::new(target, condition, lo, hi).unwrap());
    }
    CredalSet::new(space.clone(), statements)
}

/// Keeps sampling until a consistent set appears.
pub fn random_consistent_set(
    rng: &mut StdRng,
    space: &WorldSpace,
    max_statements: usize,
) -> CredalSet {
    loop {
        let set = random_credal_set(rng, space, max_statements);
        if set.assert_consistent().is_consistent() {
            return set;
        }
    }
}

/// A strictly positive rational mass vector summing to one, with small
/// denominators, plus the statements pinning each world to it.
pub fn random_pinned_joint(rng: &mut StdRng, space: &WorldSpace) -> (CredalSet, Vec<Fraction>) {
    let n = space.world_count();
    let weights: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let masses: Vec<Fraction> = weights.iter().map(|w| frac(*w, total)).collect();
    let statements = masses
        .iter()
        .enumerate()
        .take(n - 1)
        .map(|(w, mass)| {
            ProbStatement::equals(credence::world_formula(space, w), mass.clone()).unwrap()
        })
        .collect();
    (CredalSet::new(space.clone(), statements), masses)
}

/// Direct-arithmetic conditional probability from a pinned mass vector;
/// `None` when the evidence has zero mass.
pub fn pinned_conditional(
    masses: &[Fraction],
    space: &WorldSpace,
    target: &Formula,
    evidence: &Formula,
) -> Option<Fraction> {
    let evidence_set = models(evidence, space);
    let joint = models(target, space).intersect(&evidence_set);
    let denom = mass_of(masses, &evidence_set);
    if denom == int(0) {
        return None;
    }
    Some(mass_of(masses, &joint) / denom)
}

pub fn mass_of(masses: &[Fraction], event: &WorldSet) -> Fraction {
    event.iter_worlds().map(|w| masses[w].clone()).sum()
}
