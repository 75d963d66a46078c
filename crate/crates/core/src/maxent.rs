//! Maximum-entropy selection from a credal set.
//!
//! The entropy maximizer over a polytope of distributions is unique (strict
//! concavity on the relative interior), and within any block of worlds the
//! constraints cannot distinguish, it splits mass equally. The solver
//! therefore works on merged world classes, removes classes whose mass is
//! forced to zero (each checked by an exact LP), and optimizes the smooth
//! dual of the remaining problem by projected Newton: the optimum has the
//! exponential-family form `q_k = n_k * exp(s_k) / Z` with one multiplier
//! per constraint row.
//!
//! Unlike everything else in the crate this runs in floating point; the
//! declared tolerance is 1e-9 on masses and constraint residuals.

use num_traits::Signed;

use crate::credal::{Consistency, CredalError, CredalSet, Distribution, MassProgram};
use crate::rational::{int, to_f64, Fraction};
use crate::solver::{self, Direction};

const RESIDUAL_TOL: f64 = 1e-12;
const MAX_ITERS: usize = 400;

/// One dual row over classes: `coeffs . q = 0` when `equality`, else
/// `coeffs . q >= 0` with a nonnegative multiplier.
pub(crate) struct EntropyRow {
    pub coeffs: Vec<Fraction>,
    pub equality: bool,
}

impl CredalSet {
    /// The entropy-maximizing admissible distribution, to tolerance 1e-9 in
    /// mass. Masses are reported as exact rationals normalized to total
    /// mass one, but the distribution is flagged approximate.
    pub fn max_entropy(&self) -> Result<Distribution, CredalError> {
        match self.assert_consistent() {
            Consistency::Consistent { .. } => {}
            Consistency::Inconsistent { .. } => return Err(CredalError::InconsistentPremises),
        }

        let program = MassProgram::build_for_entropy(self);
        let num_classes = program.num_classes();
        let rows = self.entropy_rows(&program);

        // Classes whose mass is zero in every admissible distribution are
        // removed; the exponential family cannot represent exact zeros.
        let mut keep: Vec<usize> = Vec::new();
        for k in 0..num_classes {
            let mut obj = vec![int(0); num_classes];
            obj[k] = int(1);
            let max = solver::optimize(num_classes, &program.rows, &obj, Direction::Maximize)
                .map_err(|_| CredalError::InconsistentPremises)?;
            if max.value.is_positive() {
                keep.push(k);
            }
        }

        let sizes: Vec<f64> = keep
            .iter()
            .map(|&k| program.class_sizes()[k] as f64)
            .collect();
        let mut kept_rows: Vec<(Vec<f64>, bool)> = Vec::new();
        for row in &rows {
            let coeffs: Vec<f64> = keep.iter().map(|&k| to_f64(&row.coeffs[k])).collect();
            if coeffs.iter().any(|c| *c != 0.0) {
                kept_rows.push((coeffs, row.equality));
            }
        }

        let class_masses_f64 = solve_dual(&sizes, &kept_rows);

        // Normalize exactly so total mass is one; within-class equal split.
        let mut class_masses: Vec<Fraction> = vec![int(0); num_classes];
        for (i, &k) in keep.iter().enumerate() {
            class_masses[k] =
                Fraction::from_float(class_masses_f64[i].max(0.0)).unwrap_or_else(|| int(0));
        }
        let total: Fraction = class_masses.iter().sum();
        if total.is_positive() {
            for mass in class_masses.iter_mut() {
                *mass = &*mass / &total;
            }
        }
        let mut distribution = program.expand_masses(&class_masses);
        distribution.mark_approximate();
        Ok(distribution)
    }

    /// Per-class constraint rows for the dual problem; equality statements
    /// become single free-multiplier rows.
    fn entropy_rows(&self, program: &MassProgram) -> Vec<EntropyRow> {
        let mut rows = Vec::new();
        for statement in self.statements() {
            let (lower_side, upper_side) = program.statement_sides(self, statement);
            if statement.lower_bound() == statement.upper_bound() {
                rows.push(EntropyRow {
                    coeffs: lower_side,
                    equality: true,
                });
            } else {
                if statement.lower_bound().is_positive() {
                    rows.push(EntropyRow {
                        coeffs: lower_side,
                        equality: false,
                    });
                }
                if *statement.upper_bound() < int(1) {
                    rows.push(EntropyRow {
                        coeffs: upper_side,
                        equality: false,
                    });
                }
            }
        }
        rows
    }
}

/// Minimizes `ln sum_k n_k exp(sum_i lambda_i a_ik)` over multipliers, with
/// nonnegativity on inequality multipliers. Returns the primal masses.
#[allow(clippy::needless_range_loop)]
fn solve_dual(sizes: &[f64], rows: &[(Vec<f64>, bool)]) -> Vec<f64> {
    let k = sizes.len();
    let m = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let mut lambda = vec![0.0f64; m];
    let mut masses = primal(sizes, rows, &lambda);
    if m == 0 {
        return masses;
    }

    let mut ridge = 1e-10;
    for _ in 0..MAX_ITERS {
        let grad: Vec<f64> = (0..m)
            .map(|i| dot(&rows[i].0, &masses))
            .collect();

        let satisfied = (0..m).all(|i| {
            if rows[i].1 || lambda[i] > 0.0 {
                grad[i].abs() <= RESIDUAL_TOL
            } else {
                grad[i] >= -RESIDUAL_TOL
            }
        });
        if satisfied {
            break;
        }

        // Coordinates pinned at the bound with ascent pressure stay fixed.
        let free: Vec<usize> = (0..m)
            .filter(|&i| rows[i].1 || lambda[i] > 0.0 || grad[i] < 0.0)
            .collect();
        if free.is_empty() {
            break;
        }

        // Newton system on free coordinates: Hessian is the covariance of
        // the row values under the current distribution.
        let nf = free.len();
        let mut hess = vec![vec![0.0f64; nf]; nf];
        let means: Vec<f64> = free.iter().map(|&i| grad[i]).collect();
        for (a, &i) in free.iter().enumerate() {
            for (b, &j) in free.iter().enumerate().skip(a) {
                let mut cov = 0.0;
                for c in 0..k {
                    cov += masses[c] * rows[i].0[c] * rows[j].0[c];
                }
                cov -= means[a] * means[b];
                hess[a][b] = cov;
                hess[b][a] = cov;
            }
        }
        for (d, row) in hess.iter_mut().enumerate() {
            row[d] += ridge;
        }
        let rhs: Vec<f64> = means.iter().map(|g| -g).collect();
        let Some(step) = solve_linear(hess, rhs) else {
            ridge *= 10.0;
            continue;
        };

        // Backtracking line search on the dual objective with projection
        // onto the nonnegative orthant for inequality multipliers.
        let objective = |l: &[f64]| log_partition(sizes, rows, l);
        let f0 = objective(&lambda);
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..60 {
            let mut trial = lambda.clone();
            for (a, &i) in free.iter().enumerate() {
                trial[i] += t * step[a];
                if !rows[i].1 && trial[i] < 0.0 {
                    trial[i] = 0.0;
                }
            }
            if objective(&trial) < f0 - 1e-16 {
                lambda = trial;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            ridge *= 10.0;
            if ridge > 1e6 {
                break;
            }
        } else {
            ridge = (ridge * 0.1).max(1e-12);
        }
        masses = primal(sizes, rows, &lambda);
    }
    masses
}

fn primal(sizes: &[f64], rows: &[(Vec<f64>, bool)], lambda: &[f64]) -> Vec<f64> {
    let k = sizes.len();
    let mut scores = vec![0.0f64; k];
    for (i, (coeffs, _)) in rows.iter().enumerate() {
        for c in 0..k {
            scores[c] += lambda[i] * coeffs[c];
        }
    }
    let max_score = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut masses: Vec<f64> = scores
        .iter()
        .zip(sizes)
        .map(|(s, n)| n * (s - max_score).exp())
        .collect();
    let z: f64 = masses.iter().sum();
    for mass in masses.iter_mut() {
        *mass /= z;
    }
    masses
}

fn log_partition(sizes: &[f64], rows: &[(Vec<f64>, bool)], lambda: &[f64]) -> f64 {
    let k = sizes.len();
    let mut scores = vec![0.0f64; k];
    for (i, (coeffs, _)) in rows.iter().enumerate() {
        for c in 0..k {
            scores[c] += lambda[i] * coeffs[c];
        }
    }
    let max_score = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = scores
        .iter()
        .zip(sizes)
        .map(|(s, n)| n * (s - max_score).exp())
        .sum();
    max_score + sum.ln()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting; `None` on singular systems.
#[allow(clippy::needless_range_loop)]
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for c in row + 1..n {
            sum -= a[row][c] * x[c];
        }
        x[row] = sum / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credal::ProbStatement;
    use crate::logic::{parse_formula, world_space};
    use crate::rational::frac;

    fn assert_close(value: &Fraction, expected: f64) {
        let v = to_f64(value);
        assert!(
            (v - expected).abs() <= 1e-9,
            "expected {expected}, got {v}"
        );
    }

    #[test]
    fn unconstrained_is_uniform() {
        let space = world_space(&["a", "b"]).unwrap();
        let set = CredalSet::new(space, vec![]);
        let dist = set.max_entropy().unwrap();
        for w in 0..4 {
            assert_close(dist.mass(w), 0.25);
        }
        assert!(dist.is_approximate());
    }

    #[test]
    fn marginal_constraint_spreads_independently() {
        // Expected masses computed with the grid oracle in
        // tests/maxent_oracle.rs and analytically forced by symmetry:
        // (0.35, 0.35) on the !a worlds and (0.15, 0.15) on the a worlds.
        let space = world_space(&["a", "b"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let set = CredalSet::new(
            space,
            vec![ProbStatement::equals(a, frac(3, 10)).unwrap()],
        );
        let dist = set.max_entropy().unwrap();
        assert_close(dist.mass(0), 0.35); // !a & !b
        assert_close(dist.mass(1), 0.15); // a & !b
        assert_close(dist.mass(2), 0.35); // !a & b
        assert_close(dist.mass(3), 0.15); // a & b
    }

    #[test]
    fn certain_statement_gives_point_mass() {
        let space = world_space(&["a"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let set = CredalSet::new(space, vec![ProbStatement::equals(a, int(1)).unwrap()]);
        let dist = set.max_entropy().unwrap();
        assert_close(dist.mass(0), 0.0);
        assert_close(dist.mass(1), 1.0);
    }

    #[test]
    fn inconsistent_set_is_an_error() {
        let space = world_space(&["a"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let set = CredalSet::new(
            space,
            vec![
                ProbStatement::equals(a.clone(), frac(1, 5)).unwrap(),
                ProbStatement::equals(a, frac(4, 5)).unwrap(),
            ],
        );
        assert_eq!(
            set.max_entropy().unwrap_err(),
            CredalError::InconsistentPremises
        );
    }

    #[test]
    fn interval_constraint_settles_at_the_nearest_feasible_point() {
        // Entropy over {a} peaks at P(a) = 1/2; with P(a) <= 0.4 the
        // maximizer sits on the boundary 0.4.
        let space = world_space(&["a"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let set = CredalSet::new(
            space,
            vec![ProbStatement::at_most(a, frac(2, 5)).unwrap()],
        );
        let dist = set.max_entropy().unwrap();
        assert_close(dist.mass(1), 0.4);
        assert_close(dist.mass(0), 0.6);
    }

    #[test]
    fn slack_interval_leaves_the_unconstrained_optimum() {
        let space = world_space(&["a"]).unwrap();
        let a = parse_formula("a", &space).unwrap();
        let set = CredalSet::new(
            space,
            vec![ProbStatement::new(a, None, frac(1, 5), frac(4, 5)).unwrap()],
        );
        let dist = set.max_entropy().unwrap();
        assert_close(dist.mass(0), 0.5);
        assert_close(dist.mass(1), 0.5);
    }
}
