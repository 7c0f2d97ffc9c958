//! Dense two-phase primal simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `Σ coeff·x_j  sense  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Maximise `objective · x` subject to `rows` and `x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub num_vars: usize,
    pub rows: Vec<Row>,
    pub objective: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side
    a: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let p = self.a[r][c].clone();
        if !p.is_one() {
            for v in self.a[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.a[r].clone();
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                obj[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = c;
    }

    /// Maximises with reduced costs `obj` (`obj[j] > 0` improves), where
    /// `obj[cols]` carries minus the current objective value. Columns at or
    /// beyond `limit` never enter.
    fn optimise(&mut self, obj: &mut [Rational], limit: usize) -> bool {
        loop {
            let Some(c) = (0..limit).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, obj);
        }
    }
}

pub fn solve(lp: &Lp) -> LpResult {
    let n = lp.num_vars;
    let m = lp.rows.len();
    let mut slack_count = 0;
    let mut art_count = 0;
    let rows: Vec<(Vec<(usize, Rational)>, Sense, Rational)> = lp
        .rows
        .iter()
        .map(|row| {
            if row.rhs.is_negative() {
                let flipped = match row.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                let coeffs = row.coeffs.iter().map(|(j, c)| (*j, -c.clone())).collect();
                (coeffs, flipped, -row.rhs.clone())
            } else {
                (row.coeffs.clone(), row.sense, row.rhs.clone())
            }
        })
        .collect();
    for (_, sense, _) in &rows {
        match sense {
            Sense::Le => slack_count += 1,
            Sense::Ge => {
                slack_count += 1;
                art_count += 1;
            }
            Sense::Eq => art_count += 1,
        }
    }
    let first_art = n + slack_count;
    let cols = first_art + art_count;
    let mut a = vec![vec![Rational::zero(); cols + 1]; m];
    let mut basis = vec![0; m];
    let (mut s, mut t) = (n, first_art);
    for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
        for (j, c) in coeffs {
            a[i][*j] += c;
        }
        a[i][cols] = rhs.clone();
        match sense {
            Sense::Le => {
                a[i][s] = Rational::one();
                basis[i] = s;
                s += 1;
            }
            Sense::Ge => {
                a[i][s] = -Rational::one();
                s += 1;
                a[i][t] = Rational::one();
                basis[i] = t;
                t += 1;
            }
            Sense::Eq => {
                a[i][t] = Rational::one();
                basis[i] = t;
                t += 1;
            }
        }
    }
    let mut tab = Tableau { a, basis, cols };

    if art_count > 0 {
        // maximise −Σ artificials; reduced costs are the sums of artificial rows
        let mut obj = vec![Rational::zero(); cols + 1];
        for (i, row) in tab.a.iter().enumerate() {
            if tab.basis[i] >= first_art {
                for j in 0..first_art {
                    obj[j] += &row[j];
                }
                obj[cols] += &row[cols];
            }
        }
        tab.optimise(&mut obj, first_art);
        if obj[cols].is_positive() {
            return LpResult::Infeasible;
        }
        // drive remaining artificials out of the basis
        let mut i = 0;
        while i < tab.a.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tab.a[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j, &mut obj),
                    None => {
                        tab.a.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut obj = vec![Rational::zero(); cols + 1];
    for (j, c) in &lp.objective {
        obj[*j] += c;
    }
    for (i, row) in tab.a.iter().enumerate() {
        let b = tab.basis[i];
        if !obj[b].is_zero() {
            let f = obj[b].clone();
            for j in 0..=cols {
                if !row[j].is_zero() {
                    obj[j] -= &f * &row[j];
                }
            }
        }
    }
    if !tab.optimise(&mut obj, first_art) {
        return LpResult::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.a[i][cols].clone();
        }
    }
    let value = lp
        .objective
        .iter()
        .fold(Rational::zero(), |acc, (j, c)| acc + c * &x[*j]);
    LpResult::Optimal { value, x }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn row(coeffs: &[(usize, i64)], sense: Sense, rhs: Rational) -> Row {
        Row {
            coeffs: coeffs.iter().map(|&(j, c)| (j, r(c, 1))).collect(),
            sense,
            rhs,
        }
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let lp = Lp {
            num_vars: 2,
            rows: vec![
                row(&[(0, 1), (1, 1)], Sense::Le, r(4, 1)),
                row(&[(0, 1), (1, 3)], Sense::Le, r(6, 1)),
                row(&[(0, 1)], Sense::Le, r(3, 1)),
            ],
            objective: vec![(0, r(3, 1)), (1, r(2, 1))],
        };
        assert_eq!(
            solve(&lp),
            LpResult::Optimal {
                value: r(11, 1),
                x: vec![r(3, 1), r(1, 1)]
            }
        );
    }

    #[test]
    fn equality_and_ge_rows() {
        // max −x − y, x + y = 1/2, x − y ≥ 1/4
        let lp = Lp {
            num_vars: 2,
            rows: vec![
                row(&[(0, 1), (1, 1)], Sense::Eq, r(1, 2)),
                row(&[(0, 1), (1, -1)], Sense::Ge, r(1, 4)),
            ],
            objective: vec![(0, r(-1, 1)), (1, r(-1, 1))],
        };
        let LpResult::Optimal { value, x } = solve(&lp) else {
            panic!()
        };
        assert_eq!(value, r(-1, 2));
        assert!(&x[0] - &x[1] >= r(1, 4));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = Lp {
            num_vars: 1,
            rows: vec![row(&[(0, 1)], Sense::Ge, r(2, 1)), row(&[(0, 1)], Sense::Le, r(1, 1))],
            objective: vec![],
        };
        assert_eq!(solve(&lp), LpResult::Infeasible);
        let lp = Lp {
            num_vars: 1,
            rows: vec![row(&[(0, 1)], Sense::Ge, r(2, 1))],
            objective: vec![(0, r(1, 1))],
        };
        assert_eq!(solve(&lp), LpResult::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_equalities() {
        // −x ≤ −1 (x ≥ 1), x = 1 twice, max −x
        let lp = Lp {
            num_vars: 1,
            rows: vec![
                row(&[(0, -1)], Sense::Le, r(-1, 1)),
                row(&[(0, 1)], Sense::Eq, r(1, 1)),
                row(&[(0, 2)], Sense::Eq, r(2, 1)),
            ],
            objective: vec![(0, r(-1, 1))],
        };
        assert_eq!(
            solve(&lp),
            LpResult::Optimal {
                value: r(-1, 1),
                x: vec![r(1, 1)]
            }
        );
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule
        let q = |n, d| r(n, d);
        let lp = Lp {
            num_vars: 4,
            rows: vec![
                Row {
                    coeffs: vec![(0, q(1, 4)), (1, q(-8, 1)), (2, q(-1, 1)), (3, q(9, 1))],
                    sense: Sense::Le,
                    rhs: q(0, 1),
                },
                Row {
                    coeffs: vec![(0, q(1, 2)), (1, q(-12, 1)), (2, q(-1, 2)), (3, q(3, 1))],
                    sense: Sense::Le,
                    rhs: q(0, 1),
                },
                Row {
                    coeffs: vec![(2, q(1, 1))],
                    sense: Sense::Le,
                    rhs: q(1, 1),
                },
            ],
            objective: vec![(0, q(3, 4)), (1, q(-20, 1)), (2, q(1, 2)), (3, q(-6, 1))],
        };
        let LpResult::Optimal { value, .. } = solve(&lp) else {
            panic!()
        };
        assert_eq!(value, q(5, 4));
    }
}
