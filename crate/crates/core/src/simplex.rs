//! Exact linear feasibility by phase-one simplex.
//!
//! Pivoting follows Bland's rule, so the method terminates on every input and
//! identical systems produce identical results. When the system is
//! infeasible the final dual values give a Farkas certificate, which
//! [`verify_certificate`] re-checks by plain arithmetic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Row = (Vec<Rational>, Rational);

/// Equalities `a·x = b` and inequalities `a·x >= b`, optionally with `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub equalities: Vec<Row>,
    pub inequalities_ge: Vec<Row>,
    pub variable_count: usize,
    pub nonnegative_variables: bool,
}

impl LinearSystem {
    pub fn new(variable_count: usize, nonnegative_variables: bool) -> Self {
        LinearSystem {
            equalities: Vec::new(),
            inequalities_ge: Vec::new(),
            variable_count,
            nonnegative_variables,
        }
    }

    pub fn add_equality(&mut self, coefficients: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.check_row(&coefficients)?;
        self.equalities.push((coefficients, rhs));
        Ok(())
    }

    pub fn add_inequality(&mut self, coefficients: Vec<Rational>, rhs: Rational) -> Result<()> {
        self.check_row(&coefficients)?;
        self.inequalities_ge.push((coefficients, rhs));
        Ok(())
    }

    fn check_row(&self, row: &[Rational]) -> Result<()> {
        if row.len() != self.variable_count {
            return Err(Error::ShapeMismatch(format!(
                "row has {} coefficients, system has {} variables",
                row.len(),
                self.variable_count
            )));
        }
        Ok(())
    }

    fn check_shape(&self) -> Result<()> {
        self.equalities
            .iter()
            .chain(&self.inequalities_ge)
            .try_for_each(|(row, _)| self.check_row(row))
    }

    /// Whether `point` satisfies every row and bound exactly.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        if point.len() != self.variable_count {
            return false;
        }
        let dot = |row: &[Rational]| -> Rational { row.iter().zip(point).map(|(a, x)| a * x).sum() };
        (!self.nonnegative_variables || point.iter().all(|x| !x.is_negative()))
            && self.equalities.iter().all(|(a, b)| &dot(a) == b)
            && self.inequalities_ge.iter().all(|(a, b)| &dot(a) >= b)
    }
}

/// Multipliers proving infeasibility.
///
/// Adding `equality_multipliers[i]` times equality `i`, `inequality_multipliers[j]`
/// times inequality `j` and `bound_multipliers[v]` times `x_v >= 0` yields a row
/// with all-zero coefficients and a positive right-hand side, i.e. `0 >= c > 0`.
/// Inequality and bound multipliers are nonnegative; bound multipliers are
/// zero when the variables are free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FarkasCertificate {
    pub equality_multipliers: Vec<Rational>,
    pub inequality_multipliers: Vec<Rational>,
    pub bound_multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

/// Phase-one tableau over the standard-form rows.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Phase-one reduced costs.
    costs: Vec<Rational>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if p != Rational::one() {
            let inv = Rational::one() / &p;
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            self.rhs[r] = &self.rhs[r] * &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for &j in &nonzero {
                let d = &f * &pivot_row[j];
                self.rows[i][j] -= d;
            }
            let d = &f * &pivot_rhs;
            self.rhs[i] -= d;
        }
        let f = self.costs[col].clone();
        if !f.is_zero() {
            for &j in &nonzero {
                let d = &f * &pivot_row[j];
                self.costs[j] -= d;
            }
        }
        self.basis[r] = col;
    }
}

/// Finds a point satisfying `system` or a certificate that none exists.
pub fn solve_feasibility(system: &LinearSystem) -> Result<Feasibility> {
    system.check_shape()?;
    let nv = system.variable_count;
    let structural = if system.nonnegative_variables { nv } else { 2 * nv };
    let neq = system.equalities.len();
    let nge = system.inequalities_ge.len();
    let nrows = neq + nge;
    let surplus0 = structural;
    let art0 = structural + nge;
    let ncols = art0 + nrows;

    let mut rows = Vec::with_capacity(nrows);
    let mut rhs = Vec::with_capacity(nrows);
    let mut signs = Vec::with_capacity(nrows);
    for (i, (a, b)) in system.equalities.iter().chain(&system.inequalities_ge).enumerate() {
        let flip = b.is_negative();
        let sign = |x: &Rational| if flip { -x } else { x.clone() };
        let mut row = vec![Rational::zero(); ncols];
        for (j, x) in a.iter().enumerate() {
            row[j] = sign(x);
            if !system.nonnegative_variables {
                row[nv + j] = -sign(x);
            }
        }
        if i >= neq {
            row[surplus0 + i - neq] = sign(&-Rational::one());
        }
        row[art0 + i] = Rational::one();
        rows.push(row);
        rhs.push(sign(b));
        signs.push(flip);
    }
    let mut costs = vec![Rational::zero(); ncols];
    for row in &rows {
        for (j, x) in row.iter().enumerate().take(art0) {
            costs[j] -= x;
        }
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (art0..ncols).collect(),
        costs,
    };

    // Bland: smallest entering index with negative reduced cost, ratio ties
    // broken by smallest basic index.
    while let Some(col) = (0..ncols).find(|&j| t.costs[j].is_negative()) {
        let mut leave: Option<(Rational, usize, usize)> = None;
        for r in 0..nrows {
            let a = &t.rows[r][col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &t.rhs[r] / a;
            let better = match &leave {
                None => true,
                Some((best, _, bvar)) => ratio < *best || (ratio == *best && t.basis[r] < *bvar),
            };
            if better {
                leave = Some((ratio, r, t.basis[r]));
            }
        }
        let (_, r, _) = leave.expect("phase one is bounded below");
        t.pivot(r, col);
    }

    let objective: Rational = (0..nrows)
        .filter(|&r| t.basis[r] >= art0)
        .map(|r| &t.rhs[r])
        .sum();
    if objective.is_zero() {
        let mut values = vec![Rational::zero(); structural];
        for r in 0..nrows {
            if t.basis[r] < structural {
                values[t.basis[r]] = t.rhs[r].clone();
            }
        }
        let point = if system.nonnegative_variables {
            values
        } else {
            (0..nv).map(|j| &values[j] - &values[nv + j]).collect()
        };
        return Ok(Feasibility::Feasible(point));
    }

    // Dual values of the phase-one optimum, read off the artificial columns.
    let duals: Vec<Rational> = (0..nrows)
        .map(|i| {
            let y = Rational::one() - &t.costs[art0 + i];
            if signs[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    let bound_multipliers = (0..nv)
        .map(|j| {
            if !system.nonnegative_variables {
                return Rational::zero();
            }
            let combined: Rational = system
                .equalities
                .iter()
                .chain(&system.inequalities_ge)
                .zip(&duals)
                .map(|((a, _), u)| &a[j] * u)
                .sum();
            -combined
        })
        .collect();
    Ok(Feasibility::Infeasible(FarkasCertificate {
        equality_multipliers: duals[..neq].to_vec(),
        inequality_multipliers: duals[neq..].to_vec(),
        bound_multipliers,
    }))
}

/// Checks that `certificate` proves `system` infeasible.
pub fn verify_certificate(system: &LinearSystem, certificate: &FarkasCertificate) -> Result<bool> {
    system.check_shape()?;
    let shape = |name: &str, got: usize, want: usize| -> Result<()> {
        if got == want {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{name}: expected {want}, got {got}")))
        }
    };
    shape(
        "equality multipliers",
        certificate.equality_multipliers.len(),
        system.equalities.len(),
    )?;
    shape(
        "inequality multipliers",
        certificate.inequality_multipliers.len(),
        system.inequalities_ge.len(),
    )?;
    shape(
        "bound multipliers",
        certificate.bound_multipliers.len(),
        system.variable_count,
    )?;
    if certificate.inequality_multipliers.iter().any(Rational::is_negative) {
        return Ok(false);
    }
    let bounds_ok = if system.nonnegative_variables {
        certificate.bound_multipliers.iter().all(|b| !b.is_negative())
    } else {
        certificate.bound_multipliers.iter().all(Rational::is_zero)
    };
    if !bounds_ok {
        return Ok(false);
    }
    let weighted = system
        .equalities
        .iter()
        .zip(&certificate.equality_multipliers)
        .chain(system.inequalities_ge.iter().zip(&certificate.inequality_multipliers));
    let mut combined = certificate.bound_multipliers.clone();
    let mut rhs = Rational::zero();
    for ((a, b), u) in weighted {
        if u.is_zero() {
            continue;
        }
        for (c, x) in combined.iter_mut().zip(a) {
            *c += x * u;
        }
        rhs += b * u;
    }
    Ok(combined.iter().all(Rational::is_zero) && rhs.is_positive())
}
