//! Brute-force grid oracle for conditional bounds.
//!
//! The oracle searches distributions whose masses are multiples of
//! `1/resolution`, checks the credal constraints exactly in integer
//! arithmetic, and reports the least and greatest conditional probability
//! among the feasible grid points it visits. Grid points are admissible
//! distributions, so the reported interval is always inside the exact
//! bounds, and it tightens toward them as the resolution grows.
//!
//! Small grids are enumerated exhaustively. Larger ones walk a divisor
//! chain: exhaustive search at the coarsest resolution whose grid fits a
//! node budget, then repeated scale-up and single-unit mass-move descent at
//! each finer level. Scaling preserves feasibility (the constraint rows are
//! homogeneous), so refinement only ever tightens the result, which makes
//! the interval monotone along nested resolutions. The whole search is
//! deterministic and shares no code with the simplex path.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::credal::{CredalSet, Interval};
use crate::logic::{models, Formula, WorldSet, WorldSpace};
use crate::rational::Fraction;

/// Node budget for one exhaustive enumeration level.
const ENUMERATION_BUDGET: u128 = 300_000;
/// Seeds carried from one refinement level to the next, per direction.
const SEEDS_PER_DIRECTION: usize = 12;

impl CredalSet {
    /// Min/max of `P(target | evidence)` over grid distributions with mass
    /// denominators dividing `resolution`. `None` means no feasible grid
    /// point with positive evidence mass was found (the grid may genuinely
    /// be empty, or constraint coefficients overflow the integer search).
    /// Meant for small spaces; keep the world count at or below 16.
    pub fn oracle_bounds(
        &self,
        target: &Formula,
        evidence: &Formula,
        resolution: u32,
    ) -> Option<Interval> {
        assert!(resolution > 0, "resolution must be positive");
        let search = GridSearch::build(self, target, evidence)?;
        search.run(resolution)
    }
}

struct IntegerRow {
    /// Coefficient per free world; `sum coeff * count >= 0` must hold.
    coeffs: Vec<i128>,
}

struct GridSearch {
    rows: Vec<IntegerRow>,
    /// 1 for worlds in target & evidence.
    numer: Vec<i128>,
    /// 1 for worlds in evidence.
    denom: Vec<i128>,
    free_worlds: usize,
    /// Primitive mass-move vectors spanning the integer kernel of the
    /// equality rows plus mass conservation; the only directions along
    /// which grid points stay feasible when statements pin exact values.
    directions: Vec<Vec<i128>>,
}

#[derive(Clone, PartialEq, Eq)]
struct GridPoint {
    counts: Vec<u32>,
    numer: i128,
    denom: i128,
}

impl GridPoint {
    /// Ratio comparison by cross multiplication; denominators are positive.
    fn ratio_less(&self, other: &GridPoint) -> bool {
        self.numer * other.denom < other.numer * self.denom
    }

    fn ratio(&self) -> Fraction {
        Fraction::new(BigInt::from(self.numer), BigInt::from(self.denom))
    }
}

impl GridSearch {
    fn build(set: &CredalSet, target: &Formula, evidence: &Formula) -> Option<GridSearch> {
        let space = set.space();
        let free: Vec<usize> = (0..space.world_count())
            .filter(|&w| !set.structural_zero().contains(w))
            .collect();
        if free.is_empty() {
            return None;
        }

        let mut rows = Vec::new();
        let mut eq_rows: Vec<Vec<i128>> = Vec::new();
        for statement in set.statements() {
            let cond_set = match statement.condition() {
                Some(c) => models(c, space),
                None => WorldSet::full(space),
            };
            let tc_set = models(statement.target(), space).intersect(&cond_set);
            let (l_num, l_den) = to_i128_parts(statement.lower_bound())?;
            let (u_num, u_den) = to_i128_parts(statement.upper_bound())?;
            // l <= P(t & c)/P(c):  l_den * P(t & c) - l_num * P(c) >= 0
            let lower_side = row_coeffs(&free, &tc_set, &cond_set, l_den, -l_num)?;
            if statement.lower_bound() == statement.upper_bound() {
                eq_rows.push(lower_side.clone());
            }
            rows.push(IntegerRow { coeffs: lower_side });
            // P(t & c)/P(c) <= u:  u_num * P(c) - u_den * P(t & c) >= 0
            rows.push(IntegerRow {
                coeffs: row_coeffs(&free, &tc_set, &cond_set, -u_den, u_num)?,
            });
        }

        let evidence_set = models(evidence, space);
        let numer_set = models(target, space).intersect(&evidence_set);
        let numer = free
            .iter()
            .map(|&w| i128::from(numer_set.contains(w)))
            .collect();
        let denom = free
            .iter()
            .map(|&w| i128::from(evidence_set.contains(w)))
            .collect();

        let directions = move_directions(free.len(), &eq_rows);
        Some(GridSearch {
            rows,
            numer,
            denom,
            free_worlds: free.len(),
            directions,
        })
    }

    fn run(&self, resolution: u32) -> Option<Interval> {
        // Every in-budget divisor grid is exhausted and refined along its
        // own chain; results are unioned. Divisors of a divisor of a finer
        // resolution are divisors of it too, so nested resolutions explore
        // supersets and the reported interval widens toward the exact one.
        let mut bases: Vec<u32> = (1..=resolution)
            .filter(|r| resolution.is_multiple_of(*r) && grid_size(*r, self.free_worlds) <= ENUMERATION_BUDGET)
            .collect();
        bases.sort_unstable_by(|a, b| b.cmp(a));

        let mut best: Option<(GridPoint, GridPoint)> = None;
        let mut escape_cache: BTreeMap<Vec<usize>, Vec<Vec<i128>>> = BTreeMap::new();
        for base in bases {
            let mut seeds: Vec<GridPoint> = Vec::new();
            self.enumerate(base, &mut best, &mut seeds);
            if seeds.is_empty() {
                continue;
            }
            for window in self.resolution_chain(base, resolution).windows(2) {
                let factor = window[1] / window[0];
                for seed in seeds.iter_mut() {
                    for count in seed.counts.iter_mut() {
                        *count *= factor;
                    }
                    seed.numer *= i128::from(factor);
                    seed.denom *= i128::from(factor);
                }
                let mut climbed: Vec<GridPoint> = Vec::new();
                for seed in &seeds {
                    let down = self.descend(seed.clone(), true, &mut escape_cache);
                    let up = self.descend(seed.clone(), false, &mut escape_cache);
                    update_best(&mut best, &down);
                    update_best(&mut best, &up);
                    climbed.push(down);
                    climbed.push(up);
                }
                seeds = select_seeds(climbed);
            }
        }

        best.map(|(lo, hi)| {
            Interval::new(lo.ratio(), hi.ratio()).expect("grid ratios are probabilities")
        })
    }

    /// Divisor chain from `base` up to `resolution` in prime-factor steps.
    fn resolution_chain(&self, base: u32, resolution: u32) -> Vec<u32> {
        let mut chain = vec![base];
        let mut current = base;
        while current < resolution {
            let mut quotient = resolution / current;
            let mut step = quotient;
            for p in [2u32, 3, 5, 7] {
                if quotient.is_multiple_of(p) {
                    step = p;
                    break;
                }
            }
            if step == quotient {
                // Remaining quotient is prime (or 1); jump straight to it.
                step = quotient;
            }
            // Guard against a pathological zero step.
            if step < 2 {
                step = quotient.max(2);
            }
            quotient = step;
            current *= quotient;
            chain.push(current);
        }
        chain
    }

    /// Exhaustive enumeration of all count vectors summing to `resolution`,
    /// pruned by interval reasoning on the constraint rows.
    fn enumerate(
        &self,
        resolution: u32,
        best: &mut Option<(GridPoint, GridPoint)>,
        seeds: &mut Vec<GridPoint>,
    ) {
        let n = self.free_worlds;
        // Per row, the per-unit best possible contribution of later worlds.
        let suffix_max: Vec<Vec<i128>> = self
            .rows
            .iter()
            .map(|row| {
                let mut out = vec![0i128; n + 1];
                for w in (0..n).rev() {
                    out[w] = out[w + 1].max(row.coeffs[w]);
                }
                out
            })
            .collect();

        let mut counts = vec![0u32; n];
        let mut row_values = vec![0i128; self.rows.len()];
        let mut collected: Vec<GridPoint> = Vec::new();
        self.enumerate_rec(
            0,
            resolution,
            &mut counts,
            &mut row_values,
            &suffix_max,
            best,
            &mut collected,
        );
        *seeds = select_seeds(collected);
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_rec(
        &self,
        world: usize,
        remaining: u32,
        counts: &mut Vec<u32>,
        row_values: &mut Vec<i128>,
        suffix_max: &[Vec<i128>],
        best: &mut Option<(GridPoint, GridPoint)>,
        collected: &mut Vec<GridPoint>,
    ) {
        // Prune: no completion can lift a violated row back to >= 0.
        for (r, value) in row_values.iter().enumerate() {
            let reach = value + i128::from(remaining) * suffix_max[r][world].max(0);
            if reach < 0 {
                return;
            }
        }

        if world + 1 == self.free_worlds {
            let k = i128::from(remaining);
            for (r, value) in row_values.iter().enumerate() {
                if value + k * self.rows[r].coeffs[world] < 0 {
                    return;
                }
            }
            counts[world] = remaining;
            let point = self.point_from_counts(counts);
            counts[world] = 0;
            if let Some(point) = point {
                update_best(best, &point);
                consider_seed(collected, point);
            }
            return;
        }

        for k in 0..=remaining {
            counts[world] = k;
            for (r, row) in self.rows.iter().enumerate() {
                row_values[r] += i128::from(k) * row.coeffs[world];
            }
            self.enumerate_rec(
                world + 1,
                remaining - k,
                counts,
                row_values,
                suffix_max,
                best,
                collected,
            );
            for (r, row) in self.rows.iter().enumerate() {
                row_values[r] -= i128::from(k) * row.coeffs[world];
            }
            counts[world] = 0;
        }
    }

    fn point_from_counts(&self, counts: &[u32]) -> Option<GridPoint> {
        let mut numer = 0i128;
        let mut denom = 0i128;
        for (w, &k) in counts.iter().enumerate() {
            numer += i128::from(k) * self.numer[w];
            denom += i128::from(k) * self.denom[w];
        }
        if denom == 0 {
            return None;
        }
        Some(GridPoint {
            counts: counts.to_vec(),
            numer,
            denom,
        })
    }

    /// Steepest feasible step along one signed direction. The ratio is
    /// monotone along a line while the denominator stays positive, so only
    /// the maximal step needs checking. Returns the applied step data.
    fn best_step(
        &self,
        point: &GridPoint,
        row_values: &[i128],
        direction: &[i128],
        sign: i128,
        minimize: bool,
    ) -> Option<(i128, i128, i128)> {
        let mut t_max = i128::from(u32::MAX);
        for (w, coeff) in direction.iter().enumerate() {
            let c = coeff * sign;
            if c < 0 {
                t_max = t_max.min(i128::from(point.counts[w]) / (-c));
            }
        }
        if t_max == 0 {
            return None;
        }
        for (r, row) in self.rows.iter().enumerate() {
            let rx: i128 = dot(&row.coeffs, direction) * sign;
            if rx < 0 {
                t_max = t_max.min(row_values[r] / (-rx));
            }
        }
        if t_max <= 0 {
            return None;
        }
        let dn = dot(&self.numer, direction) * sign;
        let dd = dot(&self.denom, direction) * sign;
        if dd < 0 {
            // Keep the evidence mass strictly positive.
            let cap = (point.denom - 1) / (-dd);
            t_max = t_max.min(cap);
        }
        if t_max <= 0 {
            return None;
        }
        let numer = point.numer + t_max * dn;
        let denom = point.denom + t_max * dd;
        let better = if minimize {
            numer * point.denom < point.numer * denom
        } else {
            numer * point.denom > point.numer * denom
        };
        better.then_some((t_max, numer, denom))
    }

    fn apply_step(
        &self,
        point: &mut GridPoint,
        row_values: &mut [i128],
        direction: &[i128],
        sign: i128,
        step: (i128, i128, i128),
    ) {
        let (t, numer, denom) = step;
        for (w, coeff) in direction.iter().enumerate() {
            let delta = t * coeff * sign;
            point.counts[w] = (i128::from(point.counts[w]) + delta) as u32;
        }
        for (r, row) in self.rows.iter().enumerate() {
            row_values[r] += t * dot(&row.coeffs, direction) * sign;
        }
        point.numer = numer;
        point.denom = denom;
    }

    /// Greedy descent on the ratio (ascent when `minimize` is false) along
    /// the precomputed kernel directions, round-robin until no signed
    /// direction improves. Stalls get a second chance: directions are
    /// recomputed treating currently tight rows as equalities, which yields
    /// the coupled moves that walk along active constraint faces. Every
    /// accepted move strictly improves the objective on a finite grid, so
    /// this terminates.
    fn descend(
        &self,
        mut point: GridPoint,
        minimize: bool,
        escape_cache: &mut BTreeMap<Vec<usize>, Vec<Vec<i128>>>,
    ) -> GridPoint {
        if self.directions.is_empty() {
            return point;
        }
        let mut row_values: Vec<i128> = self
            .rows
            .iter()
            .map(|row| {
                row.coeffs
                    .iter()
                    .zip(&point.counts)
                    .map(|(c, k)| c * i128::from(*k))
                    .sum()
            })
            .collect();

        'climb: loop {
            let signed_count = 2 * self.directions.len();
            let mut stale = 0usize;
            let mut cursor = 0usize;
            while stale < signed_count {
                let direction = &self.directions[cursor / 2];
                let sign: i128 = if cursor & 1 == 0 { 1 } else { -1 };
                match self.best_step(&point, &row_values, direction, sign, minimize) {
                    Some(step) => {
                        self.apply_step(&mut point, &mut row_values, direction, sign, step);
                        stale = 0;
                    }
                    None => stale += 1,
                }
                cursor = (cursor + 1) % signed_count;
            }

            // Stalled: retry along face-preserving directions of the tight
            // rows (single rows, pairs, and the full tight set).
            let tight: Vec<usize> = row_values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v == 0)
                .map(|(r, _)| r)
                .collect();
            for subset in tight_subsets(&tight) {
                let directions = escape_cache.entry(subset.clone()).or_insert_with(|| {
                    let rows: Vec<Vec<i128>> = subset
                        .iter()
                        .map(|&r| self.rows[r].coeffs.clone())
                        .collect();
                    move_directions(self.free_worlds, &rows)
                });
                for direction in directions.iter() {
                    for sign in [1i128, -1] {
                        if let Some(step) =
                            self.best_step(&point, &row_values, direction, sign, minimize)
                        {
                            self.apply_step(&mut point, &mut row_values, direction, sign, step);
                            continue 'climb;
                        }
                    }
                }
            }
            return point;
        }
    }
}

/// Single rows, pairs, and the whole set: the faces worth walking along.
fn tight_subsets(tight: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &a) in tight.iter().enumerate() {
        out.push(vec![a]);
        for &b in &tight[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    if tight.len() > 2 {
        out.push(tight.to_vec());
    }
    out
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primitive integer vectors `x` with `sum x = 0` and `row . x = 0` for
/// every equality row, over world subsets just large enough to admit
/// solutions. These span the moves that keep pinned statements pinned.
fn move_directions(n: usize, eq_rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};

    const MAX_COEFF: i128 = 10_000;
    let max_support = (eq_rows.len() + 2).min(n);
    let mut seen: std::collections::BTreeSet<Vec<i128>> = std::collections::BTreeSet::new();
    let mut out: Vec<Vec<i128>> = Vec::new();

    let mut support: Vec<usize> = Vec::new();
    // Iterate subsets of each size via simple recursion on indices.
    fn subsets(
        start: usize,
        n: usize,
        size: usize,
        support: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if support.len() == size {
            visit(support);
            return;
        }
        for i in start..n {
            support.push(i);
            subsets(i + 1, n, size, support, visit);
            support.pop();
        }
    }

    for size in 2..=max_support {
        subsets(0, n, size, &mut support, &mut |chosen: &[usize]| {
            // Matrix over the subset: mass conservation plus equality rows.
            let mut matrix: Vec<Vec<Fraction>> = Vec::with_capacity(1 + eq_rows.len());
            matrix.push(vec![Fraction::one(); chosen.len()]);
            for row in eq_rows {
                matrix.push(
                    chosen
                        .iter()
                        .map(|&w| Fraction::from_integer(BigInt::from(row[w])))
                        .collect(),
                );
            }
            for vector in rational_kernel(matrix, chosen.len()) {
                // Keep only vectors needing the whole subset; smaller
                // supports are produced by smaller subsets.
                if vector.iter().any(|v| v.is_zero()) {
                    continue;
                }
                let Some(mut primitive) = to_primitive_integers(&vector) else {
                    continue;
                };
                if primitive.iter().any(|c| c.abs() > MAX_COEFF) {
                    continue;
                }
                // Canonical sign: first entry positive.
                if primitive[0] < 0 {
                    for c in primitive.iter_mut() {
                        *c = -*c;
                    }
                }
                let mut full = vec![0i128; n];
                for (slot, &w) in chosen.iter().enumerate() {
                    full[w] = primitive[slot];
                }
                if seen.insert(full.clone()) {
                    out.push(full);
                }
            }
        });
    }
    out
}

/// Basis of the null space of `matrix` (rows over `width` columns).
#[allow(clippy::needless_range_loop)]
fn rational_kernel(mut matrix: Vec<Vec<Fraction>>, width: usize) -> Vec<Vec<Fraction>> {
    use num_traits::{One, Zero};

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0usize;
    for col in 0..width {
        let Some(pivot_row) = (row..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, pivot_row);
        let scale = matrix[row][col].clone();
        for c in col..width {
            matrix[row][c] = &matrix[row][c] / &scale;
        }
        for r in 0..matrix.len() {
            if r != row && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for c in col..width {
                    let delta = &factor * &matrix[row][c];
                    matrix[r][c] = &matrix[r][c] - &delta;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == matrix.len() {
            break;
        }
    }

    let pivot_cols: Vec<usize> = pivots.iter().map(|(_, c)| *c).collect();
    let mut basis = Vec::new();
    for free in 0..width {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut vector = vec![Fraction::zero(); width];
        vector[free] = Fraction::one();
        for &(pr, pc) in &pivots {
            vector[pc] = -matrix[pr][free].clone();
        }
        basis.push(vector);
    }
    basis
}

/// Scales a rational vector to coprime integers.
fn to_primitive_integers(vector: &[Fraction]) -> Option<Vec<i128>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    let mut lcm = BigInt::one();
    for value in vector {
        lcm = lcm.lcm(value.denom());
    }
    let scaled: Vec<BigInt> = vector
        .iter()
        .map(|v| (v * Fraction::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for value in &scaled {
        gcd = gcd.gcd(value);
    }
    if gcd.is_zero() {
        return None;
    }
    scaled
        .iter()
        .map(|v| (v / &gcd).to_i128())
        .collect::<Option<Vec<i128>>>()
}

fn update_best(best: &mut Option<(GridPoint, GridPoint)>, point: &GridPoint) {
    match best {
        None => *best = Some((point.clone(), point.clone())),
        Some((lo, hi)) => {
            if point.ratio_less(lo) {
                *lo = point.clone();
            }
            if hi.ratio_less(point) {
                *hi = point.clone();
            }
        }
    }
}

/// Keeps a bounded, deterministic pool of seed points: the most extreme
/// ratios in each direction.
fn consider_seed(collected: &mut Vec<GridPoint>, point: GridPoint) {
    collected.push(point);
    if collected.len() > 8 * SEEDS_PER_DIRECTION {
        let trimmed = select_seeds(std::mem::take(collected));
        *collected = trimmed;
    }
}

fn select_seeds(mut points: Vec<GridPoint>) -> Vec<GridPoint> {
    points.sort_by(|a, b| {
        (a.numer * b.denom)
            .cmp(&(b.numer * a.denom))
            .then_with(|| a.counts.cmp(&b.counts))
    });
    points.dedup();
    if points.len() <= 2 * SEEDS_PER_DIRECTION {
        return points;
    }
    let tail = points.split_off(points.len() - SEEDS_PER_DIRECTION);
    points.truncate(SEEDS_PER_DIRECTION);
    points.extend(tail);
    points
}

fn row_coeffs(
    free: &[usize],
    tc_set: &WorldSet,
    cond_set: &WorldSet,
    tc_weight: i128,
    cond_weight: i128,
) -> Option<Vec<i128>> {
    Some(
        free.iter()
            .map(|&w| {
                let mut value = 0i128;
                if tc_set.contains(w) {
                    value += tc_weight;
                }
                if cond_set.contains(w) {
                    value += cond_weight;
                }
                value
            })
            .collect(),
    )
}

fn to_i128_parts(f: &Fraction) -> Option<(i128, i128)> {
    Some((f.numer().to_i128()?, f.denom().to_i128()?))
}

/// Number of count vectors of length `worlds` summing to `resolution`,
/// saturating at `u128::MAX`.
fn grid_size(resolution: u32, worlds: usize) -> u128 {
    let n = u128::from(resolution) + worlds as u128 - 1;
    let k = worlds as u128 - 1;
    let mut result: u128 = 1;
    for i in 0..k {
        result = match result.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    result
}

/// Minterm formula of a world, for building pinned-joint statements.
pub fn world_formula(space: &WorldSpace, world: usize) -> Formula {
    let mut parts = Vec::with_capacity(space.atom_count());
    for i in 0..space.atom_count() {
        let atom = Formula::Atom(crate::logic::AtomId(i));
        parts.push(if (world >> i) & 1 == 1 {
            atom
        } else {
            Formula::not(atom)
        });
    }
    Formula::conjoin_all(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credal::ProbStatement;
    use crate::logic::{parse_formula, world_space};
    use crate::rational::{frac, int};

    #[test]
    fn unconstrained_grid_is_vacuous() {
        let space = world_space(&["a"]).unwrap();
        let set = CredalSet::new(space.clone(), vec![]);
        let a = parse_formula("a", &space).unwrap();
        let bounds = set.oracle_bounds(&a, &Formula::True, 10).unwrap();
        assert_eq!(*bounds.lower(), int(0));
        assert_eq!(*bounds.upper(), int(1));
    }

    #[test]
    fn pinned_half_is_exact_on_even_grids() {
        let space = world_space(&["a"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let set = CredalSet::new(
            space.clone(),
            vec![ProbStatement::equals(a.clone(), frac(1, 2)).unwrap()],
        );
        for resolution in [2, 10, 60] {
            let bounds = set.oracle_bounds(&a, &Formula::True, resolution).unwrap();
            assert_eq!(*bounds.lower(), frac(1, 2));
            assert_eq!(*bounds.upper(), frac(1, 2));
        }
        // Odd grids admit no point with P(a) = 1/2.
        assert!(set.oracle_bounds(&a, &Formula::True, 3).is_none());
    }

    #[test]
    fn pinned_urn_grid_recovers_the_posterior() {
        let space = world_space(&["typeI", "black"]).unwrap();
        let type_i = parse_formula("typeI", &space).unwrap();
        let black = parse_formula("black", &space).unwrap();
        let not_type_i = parse_formula("!typeI", &space).unwrap();
        let set = CredalSet::new(
            space,
            vec![
                ProbStatement::equals(type_i.clone(), frac(3, 5)).unwrap(),
                ProbStatement::conditional(black.clone(), type_i.clone(), frac(9, 10), frac(9, 10))
                    .unwrap(),
                ProbStatement::conditional(black.clone(), not_type_i, frac(1, 5), frac(1, 5))
                    .unwrap(),
            ],
        );
        // The statements pin the joint to hundredths, so the only feasible
        // grid points carry the exact posterior 27/31.
        let bounds = set.oracle_bounds(&type_i, &black, 100).unwrap();
        assert_eq!(*bounds.lower(), frac(27, 31));
        assert_eq!(*bounds.upper(), frac(27, 31));
    }

    #[test]
    fn frechet_conjunction_found_on_the_grid() {
        let space = world_space(&["a", "b"]).unwrap();
        let set = CredalSet::new(
            space.clone(),
            vec![
                ProbStatement::at_least(parse_formula("a", &space).unwrap(), frac(3, 5)).unwrap(),
                ProbStatement::at_least(parse_formula("b", &space).unwrap(), frac(7, 10)).unwrap(),
            ],
        );
        let conj = parse_formula("a & b", &space).unwrap();
        let bounds = set.oracle_bounds(&conj, &Formula::True, 60).unwrap();
        assert_eq!(*bounds.lower(), frac(3, 10));
        assert_eq!(*bounds.upper(), int(1));
    }

    #[test]
    fn refinement_is_monotone_along_nested_resolutions() {
        let space = world_space(&["a", "b", "c"]).unwrap();
        let set = CredalSet::new(
            space.clone(),
            vec![
                ProbStatement::new(
                    parse_formula("a", &space).unwrap(),
                    None,
                    frac(1, 4),
                    frac(3, 4),
                )
                .unwrap(),
                ProbStatement::conditional(
                    parse_formula("b", &space).unwrap(),
                    parse_formula("a", &space).unwrap(),
                    frac(1, 2),
                    int(1),
                )
                .unwrap(),
            ],
        );
        let target = parse_formula("b & c", &space).unwrap();
        let evidence = parse_formula("a | b", &space).unwrap();
        let exact = set.cond_bounds(&target, &evidence).unwrap();

        let mut previous: Option<Interval> = None;
        for resolution in [12, 60, 120, 600] {
            let grid = set
                .oracle_bounds(&target, &evidence, resolution)
                .expect("grid nonempty");
            assert!(
                exact.contains_interval(&grid),
                "grid {grid} escapes exact {exact} at resolution {resolution}"
            );
            if let Some(prev) = &previous {
                assert!(
                    grid.contains_interval(prev),
                    "refinement regressed: {prev} then {grid}"
                );
            }
            previous = Some(grid);
        }
    }
}
