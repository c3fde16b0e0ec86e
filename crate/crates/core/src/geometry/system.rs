//! Exact rational linear systems and a feasibility kernel.
//!
//! Feasibility is decided by variable elimination: equalities are removed by
//! substitution (most recently indexed variable first), then the remaining
//! variables are projected out one at a time, pairing lower with upper bounds
//! and keeping strictness whenever either side is strict. Back-substitution
//! walks the eliminations in reverse, picking the midpoint of each final
//! interval (or the forced value for equalities), so a feasible system always
//! yields an exact rational witness.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the geometry engine.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Shorthand for `p/q`; panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or a plain integer string into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat, String> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = p
        .parse()
        .map_err(|_| format!("invalid rational numerator {p:?}"))?;
    let denom: BigInt = q
        .parse()
        .map_err(|_| format!("invalid rational denominator {q:?}"))?;
    if denom.is_zero() {
        return Err(format!("rational {text:?} has zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

/// How the left-hand side compares to the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

/// One linear constraint `coeffs · x REL rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    coeffs: Vec<Rat>,
    rel: Relation,
    rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rel: Relation, rhs: i64) -> Self {
        Constraint::new(coeffs.iter().map(|&c| rat(c)).collect(), rel, rat(rhs))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn rel(&self) -> Relation {
        self.rel
    }

    pub fn rhs(&self) -> &Rat {
        &self.rhs
    }

    pub fn satisfied_by(&self, point: &[Rat]) -> bool {
        let lhs: Rat = self
            .coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .sum();
        match self.rel {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{c}*x{}", m + 1)?;
                first = false;
            } else {
                write!(f, " + {c}*x{}", m + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        let op = match self.rel {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
        };
        write!(f, " {op} {}", self.rhs)
    }
}

/// A finite system of equalities and strict/weak inequalities over `vars`
/// variables with exact rational coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearSystem {
    vars: usize,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            vars,
            constraints: Vec::new(),
        }
    }

    pub fn with_constraints(vars: usize, constraints: Vec<Constraint>) -> Self {
        let mut system = LinearSystem::new(vars);
        for c in constraints {
            system.push(c);
        }
        system
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(
            c.coeffs.len(),
            self.vars,
            "constraint row length does not match variable count"
        );
        self.constraints.push(c);
    }

    pub fn is_satisfied_by(&self, point: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(point))
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// Decides feasibility and, when feasible, returns a witness satisfying
    /// every constraint exactly.
    pub fn feasible_point(&self) -> Option<Vec<Rat>> {
        Eliminator::new(self).solve()
    }
}

/// One elimination event, replayed in reverse for the witness.
enum Step {
    /// `row` is an equality solved for `var` (its coefficient is nonzero).
    Substitute { var: usize, row: Constraint },
    /// Every constraint that mentioned `var` when it was projected out.
    Bounds { var: usize, rows: Vec<Constraint> },
}

struct Eliminator {
    vars: usize,
    rows: Vec<Constraint>,
    steps: Vec<Step>,
    eliminated: Vec<bool>,
}

impl Eliminator {
    fn new(system: &LinearSystem) -> Self {
        Eliminator {
            vars: system.vars,
            rows: system.constraints.clone(),
            steps: Vec::new(),
            eliminated: vec![false; system.vars],
        }
    }

    fn solve(mut self) -> Option<Vec<Rat>> {
        self.rows = normalize(std::mem::take(&mut self.rows))?;
        self.substitute_equalities()?;
        self.project_inequalities()?;
        Some(self.back_substitute())
    }

    /// Removes equality rows in input order, substituting each one's
    /// highest-index variable with nonzero coefficient into every other row.
    fn substitute_equalities(&mut self) -> Option<()> {
        loop {
            let Some(pos) = self
                .rows
                .iter()
                .position(|r| r.rel == Relation::Eq && r.coeffs.iter().any(|c| !c.is_zero()))
            else {
                return Some(());
            };
            let row = self.rows.remove(pos);
            let var = row
                .coeffs
                .iter()
                .rposition(|c| !c.is_zero())
                .expect("row has a nonzero coefficient");
            let divisor = row.coeffs[var].clone();
            for r in self.rows.iter_mut() {
                if r.coeffs[var].is_zero() {
                    continue;
                }
                let factor = &r.coeffs[var] / &divisor;
                for m in 0..self.vars {
                    let delta = &factor * &row.coeffs[m];
                    r.coeffs[m] = &r.coeffs[m] - &delta;
                }
                r.rhs = &r.rhs - &(&factor * &row.rhs);
                r.coeffs[var] = Rat::zero();
            }
            self.eliminated[var] = true;
            self.steps.push(Step::Substitute { var, row });
            self.rows = normalize(std::mem::take(&mut self.rows))?;
        }
    }

    /// Fourier–Motzkin projection of the remaining variables, lowest index
    /// first. Combining a lower with an upper bound keeps strictness when
    /// either side is strict.
    fn project_inequalities(&mut self) -> Option<()> {
        for var in 0..self.vars {
            if self.eliminated[var] {
                continue;
            }
            let (mentioning, rest): (Vec<Constraint>, Vec<Constraint>) = std::mem::take(&mut self.rows)
                .into_iter()
                .partition(|r| !r.coeffs[var].is_zero());
            let mut combined = rest;
            let (uppers, lowers): (Vec<&Constraint>, Vec<&Constraint>) = mentioning
                .iter()
                .partition(|r| r.coeffs[var].is_positive());
            for lo in &lowers {
                for up in &uppers {
                    // lo.coeffs[var] < 0 < up.coeffs[var]; the positive
                    // combination (-lo[var])*up + up[var]*lo cancels `var`.
                    let a = lo.coeffs[var].clone();
                    let c = up.coeffs[var].clone();
                    let coeffs: Vec<Rat> = (0..self.vars)
                        .map(|m| &(-&a) * &up.coeffs[m] + &c * &lo.coeffs[m])
                        .collect();
                    let rhs = &(-&a) * &up.rhs + &c * &lo.rhs;
                    let rel = if lo.rel == Relation::Lt || up.rel == Relation::Lt {
                        Relation::Lt
                    } else {
                        Relation::Le
                    };
                    combined.push(Constraint::new(coeffs, rel, rhs));
                }
            }
            self.steps.push(Step::Bounds {
                var,
                rows: mentioning,
            });
            self.eliminated[var] = true;
            self.rows = normalize(combined)?;
        }
        Some(())
    }

    fn back_substitute(mut self) -> Vec<Rat> {
        let mut value: Vec<Option<Rat>> = vec![None; self.vars];
        let eval_rest = |row: &Constraint, var: usize, value: &[Option<Rat>]| -> Rat {
            let mut rest = row.rhs.clone();
            for (m, c) in row.coeffs.iter().enumerate() {
                if m != var && !c.is_zero() {
                    let x = value[m].as_ref().expect("later variable already chosen");
                    rest = &rest - &(c * x);
                }
            }
            rest
        };
        for step in self.steps.drain(..).rev() {
            match step {
                Step::Substitute { var, row } => {
                    let rest = eval_rest(&row, var, &value);
                    value[var] = Some(&rest / &row.coeffs[var]);
                }
                Step::Bounds { var, rows } => {
                    let mut max_lo: Option<Rat> = None;
                    let mut min_up: Option<Rat> = None;
                    for r in &rows {
                        let bound = eval_rest(r, var, &value) / &r.coeffs[var];
                        if r.coeffs[var].is_positive() {
                            if min_up.as_ref().is_none_or(|u| bound < *u) {
                                min_up = Some(bound);
                            }
                        } else if max_lo.as_ref().is_none_or(|l| bound > *l) {
                            max_lo = Some(bound);
                        }
                    }
                    let v = match (max_lo, min_up) {
                        (None, None) => Rat::zero(),
                        (Some(l), None) => l + Rat::one(),
                        (None, Some(u)) => u - Rat::one(),
                        (Some(l), Some(u)) => {
                            // Elimination already certified l REL u; when the
                            // interval is a single point both bounds are weak.
                            debug_assert!(l <= u);
                            (l + u) / rat(2)
                        }
                    };
                    value[var] = Some(v);
                }
            }
        }
        value
            .into_iter()
            .map(|v| v.unwrap_or_else(Rat::zero))
            .collect()
    }
}

/// Drops satisfied constant rows, rejects violated ones, and keeps only the
/// tightest inequality per positive-scaling direction. Returns `None` on a
/// contradiction.
fn normalize(rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut equalities = Vec::new();
    let mut tightest: BTreeMap<Vec<Rat>, (Relation, Rat)> = BTreeMap::new();
    for mut row in rows {
        match row.coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                let zero = Rat::zero();
                let ok = match row.rel {
                    Relation::Eq => row.rhs == zero,
                    Relation::Le => row.rhs >= zero,
                    Relation::Lt => row.rhs > zero,
                };
                if !ok {
                    return None;
                }
            }
            Some(first) => {
                if row.rel == Relation::Eq {
                    equalities.push(row);
                    continue;
                }
                let scale = row.coeffs[first].abs();
                if !scale.is_one() {
                    for c in row.coeffs.iter_mut() {
                        *c = &*c / &scale;
                    }
                    row.rhs = &row.rhs / &scale;
                }
                match tightest.entry(row.coeffs) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert((row.rel, row.rhs));
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let (rel, rhs) = e.get();
                        let replace = row.rhs < *rhs
                            || (row.rhs == *rhs && row.rel == Relation::Lt && *rel == Relation::Le);
                        if replace {
                            e.insert((row.rel, row.rhs));
                        }
                    }
                }
            }
        }
    }
    let mut out = equalities;
    out.extend(
        tightest
            .into_iter()
            .map(|(coeffs, (rel, rhs))| Constraint::new(coeffs, rel, rhs)),
    );
    Some(out)
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_system() -> impl Strategy<Value = LinearSystem> {
        (1usize..=4).prop_flat_map(|vars| {
            let constraint = (
                proptest::collection::vec(-3i64..=3, vars),
                prop_oneof![
                    Just(Relation::Eq),
                    Just(Relation::Le),
                    Just(Relation::Lt)
                ],
                -4i64..=4,
            )
                .prop_map(|(coeffs, rel, rhs)| Constraint::from_ints(&coeffs, rel, rhs));
            proptest::collection::vec(constraint, 0..=8)
                .prop_map(move |cs| LinearSystem::with_constraints(vars, cs))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn witnesses_satisfy_their_system(system in arb_system()) {
            if let Some(point) = system.feasible_point() {
                prop_assert!(system.is_satisfied_by(&point));
            }
        }

        #[test]
        fn infeasible_systems_have_no_integer_grid_point(system in arb_system()) {
            // One-sided sampling oracle: any grid point that satisfies the
            // system proves feasibility, so the kernel must agree.
            if system.is_feasible() {
                return Ok(());
            }
            let vars = system.vars();
            let mut point = vec![-3i64; vars];
            'grid: loop {
                let rats: Vec<Rat> = point.iter().map(|&v| rat(v)).collect();
                prop_assert!(!system.is_satisfied_by(&rats));
                let mut k = 0;
                loop {
                    if k == vars {
                        break 'grid;
                    }
                    point[k] += 1;
                    if point[k] <= 3 {
                        break;
                    }
                    point[k] = -3;
                    k += 1;
                }
            }
        }
    }
}
