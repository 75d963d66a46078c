//! Exact two-phase simplex over rationals.
//!
//! The solver works on the standard form `min c.x` subject to `A x {=, >=} b`,
//! `x >= 0`, entirely in [`Fraction`] arithmetic. Pivot selection uses
//! Bland's rule in both phases, so the method terminates even on the highly
//! degenerate systems that 0/1 event vectors produce.
//!
//! When phase 1 ends with a positive objective the problem is infeasible and
//! the phase-1 duals give a Farkas certificate; the tags of rows with nonzero
//! multipliers are reported so callers can name a conflicting subset of
//! constraints.

use num_traits::{One, Signed, Zero};

use crate::rational::Fraction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ge,
}

/// One constraint row. `tag` is an opaque caller id used in infeasibility
/// certificates.
#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<Fraction>,
    pub rel: Rel,
    pub rhs: Fraction,
    pub tag: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct Optimum {
    pub value: Fraction,
    pub solution: Vec<Fraction>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("infeasible constraint system")]
    Infeasible { conflict_tags: Vec<usize> },
    #[error("unbounded objective")]
    Unbounded,
}

/// Finds any feasible point, or the conflict tags if there is none.
pub fn feasible_point(num_vars: usize, rows: &[Row]) -> Result<Vec<Fraction>, LpError> {
    let mut tableau = Tableau::build(num_vars, rows)?;
    tableau.phase_one()?;
    Ok(tableau.primal_solution(num_vars))
}

/// Optimizes a linear objective over the row system.
pub fn optimize(
    num_vars: usize,
    rows: &[Row],
    objective: &[Fraction],
    direction: Direction,
) -> Result<Optimum, LpError> {
    assert_eq!(objective.len(), num_vars);
    let mut tableau = Tableau::build(num_vars, rows)?;
    tableau.phase_one()?;
    let value = tableau.phase_two(objective, direction)?;
    Ok(Optimum {
        value,
        solution: tableau.primal_solution(num_vars),
    })
}

struct Tableau {
    /// Dense rows of the equality system, one per constraint.
    rows: Vec<Vec<Fraction>>,
    rhs: Vec<Fraction>,
    basis: Vec<usize>,
    /// Caller tag per row, kept aligned under row removal.
    tags: Vec<usize>,
    /// Initial unit column of each row (slack or artificial), for dual recovery.
    unit_cols: Vec<usize>,
    num_cols: usize,
    first_artificial: usize,
}

impl Tableau {
    /// Builds the equality tableau: surplus columns for `>=` rows, sign
    /// normalization to `rhs >= 0`, artificial columns where no initial
    /// basic variable is available.
    fn build(num_vars: usize, rows: &[Row]) -> Result<Tableau, LpError> {
        for row in rows {
            assert_eq!(row.coeffs.len(), num_vars, "row arity mismatch");
        }
        let num_surplus = rows.iter().filter(|r| r.rel == Rel::Ge).count();
        let mut width = num_vars + num_surplus;

        let mut dense: Vec<Vec<Fraction>> = Vec::with_capacity(rows.len());
        let mut rhs: Vec<Fraction> = Vec::with_capacity(rows.len());
        let mut tags = Vec::with_capacity(rows.len());
        let mut basis_candidate: Vec<Option<usize>> = Vec::with_capacity(rows.len());

        let mut next_surplus = num_vars;
        for row in rows {
            let mut coeffs = row.coeffs.clone();
            coeffs.resize(width, Fraction::zero());
            let mut b = row.rhs.clone();
            let mut surplus_col = None;
            if row.rel == Rel::Ge {
                coeffs[next_surplus] = -Fraction::one();
                surplus_col = Some(next_surplus);
                next_surplus += 1;
            }
            let mut flipped = false;
            if b.is_negative() {
                for c in coeffs.iter_mut() {
                    *c = -c.clone();
                }
                b = -b;
                flipped = true;
            }
            // The surplus column can seed the basis when its coefficient is
            // +1 after normalization, i.e. for `>=` rows with rhs <= 0.
            let candidate = match surplus_col {
                Some(col) if flipped => Some(col),
                Some(col) if b.is_zero() => {
                    // rhs is exactly zero: flip the row so the surplus gets +1.
                    for c in coeffs.iter_mut() {
                        *c = -c.clone();
                    }
                    Some(col)
                }
                _ => None,
            };
            dense.push(coeffs);
            rhs.push(b);
            tags.push(row.tag);
            basis_candidate.push(candidate);
        }

        let first_artificial = width;
        let mut basis = Vec::with_capacity(dense.len());
        let mut unit_cols = Vec::with_capacity(dense.len());
        for (r, candidate) in basis_candidate.iter().enumerate() {
            match candidate {
                Some(col) => {
                    basis.push(*col);
                    unit_cols.push(*col);
                }
                None => {
                    let col = width;
                    width += 1;
                    for (rr, row) in dense.iter_mut().enumerate() {
                        row.push(if rr == r {
                            Fraction::one()
                        } else {
                            Fraction::zero()
                        });
                    }
                    basis.push(col);
                    unit_cols.push(col);
                }
            }
        }
        // Pad rows that predate later artificial columns.
        for row in dense.iter_mut() {
            row.resize(width, Fraction::zero());
        }

        Ok(Tableau {
            rows: dense,
            rhs,
            basis,
            tags,
            unit_cols,
            num_cols: width,
            first_artificial,
        })
    }

    fn pivot(&mut self, pivot_row: usize, pivot_col: usize) {
        let factor = self.rows[pivot_row][pivot_col].clone();
        debug_assert!(!factor.is_zero());
        for c in 0..self.num_cols {
            if !self.rows[pivot_row][c].is_zero() {
                self.rows[pivot_row][c] = &self.rows[pivot_row][c] / &factor;
            }
        }
        self.rhs[pivot_row] = &self.rhs[pivot_row] / &factor;

        for r in 0..self.rows.len() {
            if r == pivot_row {
                continue;
            }
            let mult = self.rows[r][pivot_col].clone();
            if mult.is_zero() {
                continue;
            }
            for c in 0..self.num_cols {
                if !self.rows[pivot_row][c].is_zero() {
                    let delta = &mult * &self.rows[pivot_row][c];
                    self.rows[r][c] = &self.rows[r][c] - &delta;
                }
            }
            let delta = &mult * &self.rhs[pivot_row];
            self.rhs[r] = &self.rhs[r] - &delta;
        }
        self.basis[pivot_row] = pivot_col;
    }

    /// Reduced-cost row for objective `cost` (indexed over all columns)
    /// relative to the current basis, plus the objective value.
    #[allow(clippy::needless_range_loop)]
    fn reduced_costs(&self, cost: &dyn Fn(usize) -> Fraction) -> (Vec<Fraction>, Fraction) {
        let mut reduced: Vec<Fraction> = (0..self.num_cols).map(cost).collect();
        let mut value = Fraction::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost(b);
            if cb.is_zero() {
                continue;
            }
            for c in 0..self.num_cols {
                if !self.rows[r][c].is_zero() {
                    let delta = &cb * &self.rows[r][c];
                    reduced[c] = &reduced[c] - &delta;
                }
            }
            value += &cb * &self.rhs[r];
        }
        (reduced, value)
    }

    /// Bland's rule iteration: entering column = lowest index with negative
    /// reduced cost, leaving row = lowest basic index among minimum ratios.
    #[allow(clippy::needless_range_loop)]
    fn iterate(
        &mut self,
        reduced: &mut [Fraction],
        value: &mut Fraction,
        allow: &dyn Fn(usize) -> bool,
    ) -> Result<(), LpError> {
        loop {
            let entering = (0..self.num_cols)
                .find(|&c| allow(c) && reduced[c].is_negative());
            let Some(col) = entering else {
                return Ok(());
            };

            let mut leaving: Option<(usize, Fraction)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col].is_positive() {
                    let ratio = &self.rhs[r] / &self.rows[r][col];
                    let better = match &leaving {
                        None => true,
                        Some((best_r, best_ratio)) => {
                            ratio < *best_ratio
                                || (ratio == *best_ratio && self.basis[r] < self.basis[*best_r])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(LpError::Unbounded);
            };

            // Update the reduced-cost row alongside the pivot; the objective
            // moves by the reduced cost times the entering variable's value.
            let mult = reduced[col].clone();
            self.pivot(row, col);
            for c in 0..self.num_cols {
                if !self.rows[row][c].is_zero() {
                    let delta = &mult * &self.rows[row][c];
                    reduced[c] = &reduced[c] - &delta;
                }
            }
            *value += &mult * &self.rhs[row];
        }
    }

    fn phase_one(&mut self) -> Result<(), LpError> {
        if self.first_artificial == self.num_cols {
            // No artificials were needed; the seeded basis is feasible.
            return Ok(());
        }
        let first_artificial = self.first_artificial;
        let cost = move |c: usize| {
            if c >= first_artificial {
                Fraction::one()
            } else {
                Fraction::zero()
            }
        };
        let (mut reduced, mut value) = self.reduced_costs(&cost);
        self.iterate(&mut reduced, &mut value, &|_| true)?;

        if value.is_positive() {
            // Farkas: y_r = cost(unit_col) - reduced(unit_col); rows with
            // nonzero multipliers witness the conflict.
            let mut conflict: Vec<usize> = Vec::new();
            for (r, &col) in self.unit_cols.iter().enumerate() {
                let y = cost(col) - &reduced[col];
                if !y.is_zero() {
                    conflict.push(self.tags[r]);
                }
            }
            conflict.sort_unstable();
            conflict.dedup();
            return Err(LpError::Infeasible {
                conflict_tags: conflict,
            });
        }

        self.drive_out_artificials();
        Ok(())
    }

    /// Removes artificial variables still basic at zero: pivot them out on
    /// any structural column, or drop the (redundant) row.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                debug_assert!(self.rhs[r].is_zero());
                let col = (0..self.first_artificial).find(|&c| !self.rows[r][c].is_zero());
                match col {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        self.tags.remove(r);
                        self.unit_cols.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        // Artificial columns must never re-enter; truncating them keeps the
        // column scan in later phases short.
        for row in self.rows.iter_mut() {
            row.truncate(self.first_artificial);
        }
        self.num_cols = self.first_artificial;
    }

    fn phase_two(
        &mut self,
        objective: &[Fraction],
        direction: Direction,
    ) -> Result<Fraction, LpError> {
        let sign = match direction {
            Direction::Minimize => Fraction::one(),
            Direction::Maximize => -Fraction::one(),
        };
        let obj: Vec<Fraction> = objective.iter().map(|c| &sign * c).collect();
        let cost = move |c: usize| {
            if c < obj.len() {
                obj[c].clone()
            } else {
                Fraction::zero()
            }
        };
        let (mut reduced, mut value) = self.reduced_costs(&cost);
        self.iterate(&mut reduced, &mut value, &|_| true)?;
        Ok(match direction {
            Direction::Minimize => value,
            Direction::Maximize => -value,
        })
    }

    fn primal_solution(&self, num_vars: usize) -> Vec<Fraction> {
        let mut solution = vec![Fraction::zero(); num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                solution[b] = self.rhs[r].clone();
            }
        }
        solution
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ge(coeffs: Vec<Fraction>, rhs: Fraction, tag: usize) -> Row {
        Row {
            coeffs,
            rel: Rel::Ge,
            rhs,
            tag,
        }
    }

    fn eq(coeffs: Vec<Fraction>, rhs: Fraction, tag: usize) -> Row {
        Row {
            coeffs,
            rel: Rel::Eq,
            rhs,
            tag,
        }
    }

    #[test]
    fn optimizes_a_textbook_lp() {
        // max 3x + 4y s.t. x + y <= 6 (as -x - y >= -6), x + 2y <= 8, x,y >= 0
        let rows = vec![
            ge(vec![int(-1), int(-1)], int(-6), 0),
            ge(vec![int(-1), int(-2)], int(-8), 1),
        ];
        let opt = optimize(2, &rows, &[int(3), int(4)], Direction::Maximize).unwrap();
        assert_eq!(opt.value, int(20));
        assert_eq!(opt.solution, vec![int(4), int(2)]);
    }

    #[test]
    fn solves_distribution_bounds() {
        // Masses p0..p3 summing to 1 with p1 + p3 between 1/5 and 3/10;
        // maximizing p3 alone gives 3/10.
        let rows = vec![
            eq(vec![int(1); 4], int(1), 0),
            ge(vec![int(0), int(1), int(0), int(1)], frac(1, 5), 1),
            ge(vec![int(0), int(-1), int(0), int(-1)], frac(-3, 10), 2),
        ];
        let obj = vec![int(0), int(0), int(0), int(1)];
        let max = optimize(4, &rows, &obj, Direction::Maximize).unwrap();
        assert_eq!(max.value, frac(3, 10));
        let min = optimize(4, &rows, &obj, Direction::Minimize).unwrap();
        assert_eq!(min.value, int(0));
    }

    #[test]
    fn reports_infeasibility_with_conflict_tags() {
        // p >= 7/10 and p <= 2/10 cannot both hold.
        let rows = vec![
            eq(vec![int(1), int(1)], int(1), 0),
            ge(vec![int(1), int(0)], frac(7, 10), 1),
            ge(vec![int(-1), int(0)], frac(-2, 10), 2),
        ];
        let err = feasible_point(2, &rows).unwrap_err();
        match err {
            LpError::Infeasible { conflict_tags } => {
                assert!(conflict_tags.contains(&1));
                assert!(conflict_tags.contains(&2));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let rows = vec![ge(vec![int(1)], int(1), 0)];
        let err = optimize(1, &rows, &[int(1)], Direction::Maximize).unwrap_err();
        assert_eq!(err, LpError::Unbounded);
    }

    #[test]
    fn handles_degenerate_zero_rows() {
        // Homogeneous rows with rhs 0 exercise the seeded-surplus path and
        // heavy degeneracy; Bland's rule must terminate.
        let rows = vec![
            eq(vec![int(1); 4], int(1), 0),
            ge(vec![int(1), int(-1), int(0), int(0)], int(0), 1),
            ge(vec![int(0), int(1), int(-1), int(0)], int(0), 2),
            ge(vec![int(0), int(0), int(1), int(-1)], int(0), 3),
        ];
        let obj = vec![int(0), int(0), int(0), int(1)];
        let max = optimize(4, &rows, &obj, Direction::Maximize).unwrap();
        assert_eq!(max.value, frac(1, 4));
    }

    #[test]
    fn feasible_point_satisfies_rows() {
        let rows = vec![
            eq(vec![int(1), int(1), int(1)], int(1), 0),
            ge(vec![int(1), int(0), int(0)], frac(1, 3), 1),
            ge(vec![int(0), int(-1), int(0)], frac(-1, 2), 2),
        ];
        let point = feasible_point(3, &rows).unwrap();
        let total: Fraction = point.iter().sum();
        assert_eq!(total, int(1));
        assert!(point[0] >= frac(1, 3));
        assert!(point[1] <= frac(1, 2));
        assert!(point.iter().all(|p| !p.is_negative()));
    }
}
