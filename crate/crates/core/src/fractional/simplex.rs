//! Revised simplex for the covering problem `min Σ x_I` subject to every
//! vertex being covered at least once, over a growing pool of independent
//! sets. Exact rational arithmetic, explicit basis inverse, Bland's rule.
//!
//! Variables are the `n` surplus columns (`-e_v`, cost 0) followed by the
//! pool columns (indicator vectors, cost 1). The singleton sets are placed
//! first in the pool so that they form an identity starting basis.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub(crate) struct Master {
    n: usize,
    pool: Vec<Vec<usize>>,
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    x: Vec<Rational>,
}

impl Master {
    pub fn new(n: usize) -> Self {
        let identity = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Master {
            n,
            pool: (0..n).map(|v| vec![v]).collect(),
            basis: (n..2 * n).collect(),
            binv: identity,
            x: vec![Rational::one(); n],
        }
    }

    pub fn pool_len(&self) -> usize {
        self.pool.len()
    }

    pub fn add_column(&mut self, set: Vec<usize>) {
        self.pool.push(set);
    }

    fn cost(&self, var: usize) -> Rational {
        if var < self.n {
            Rational::zero()
        } else {
            Rational::one()
        }
    }

    /// `B⁻¹ a` for variable `var`.
    fn direction(&self, var: usize) -> Vec<Rational> {
        if var < self.n {
            self.binv.iter().map(|row| -row[var].clone()).collect()
        } else {
            let set = &self.pool[var - self.n];
            self.binv
                .iter()
                .map(|row| set.iter().map(|&v| &row[v]).sum())
                .collect()
        }
    }

    pub fn duals(&self) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.n];
        for (i, &var) in self.basis.iter().enumerate() {
            if var >= self.n {
                for (yj, b) in y.iter_mut().zip(&self.binv[i]) {
                    *yj += b;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, var: usize, y: &[Rational]) -> Rational {
        if var < self.n {
            y[var].clone()
        } else {
            Rational::one()
                - self.pool[var - self.n]
                    .iter()
                    .map(|&v| &y[v])
                    .sum::<Rational>()
        }
    }

    pub fn value(&self) -> Rational {
        self.basis
            .iter()
            .zip(&self.x)
            .map(|(&var, xi)| self.cost(var) * xi)
            .sum()
    }

    /// Pivot until no variable has negative reduced cost.
    pub fn optimize(&mut self) {
        loop {
            let y = self.duals();
            let total = self.n + self.pool.len();
            let in_basis = {
                let mut m = vec![false; total];
                self.basis.iter().for_each(|&b| m[b] = true);
                m
            };
            let Some(enter) =
                (0..total).find(|&j| !in_basis[j] && self.reduced_cost(j, &y).is_negative())
            else {
                return;
            };
            let d = self.direction(enter);
            let mut leave: Option<(usize, Rational)> = None;
            for (i, di) in d.iter().enumerate() {
                if di.is_positive() {
                    let ratio = &self.x[i] / di;
                    let better = match &leave {
                        None => true,
                        Some((r, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            // The covering problem is bounded below by zero.
            let (r, theta) = leave.expect("covering LP is bounded");
            for (i, di) in d.iter().enumerate() {
                if i != r && !di.is_zero() {
                    self.x[i] -= &theta * di;
                }
            }
            self.x[r] = theta;
            let pivot = d[r].clone();
            let prow: Vec<Rational> = self.binv[r].iter().map(|b| b / &pivot).collect();
            for (i, di) in d.iter().enumerate() {
                if i != r && !di.is_zero() {
                    for (b, p) in self.binv[i].iter_mut().zip(&prow) {
                        *b -= di * p;
                    }
                }
            }
            self.binv[r] = prow;
            self.basis[r] = enter;
        }
    }

    /// Pool columns with positive value.
    pub fn primal(&self) -> Vec<(Vec<usize>, Rational)> {
        let mut cols: Vec<(usize, Rational)> = self
            .basis
            .iter()
            .zip(&self.x)
            .filter(|(&var, xi)| var >= self.n && xi.is_positive())
            .map(|(&var, xi)| (var - self.n, xi.clone()))
            .collect();
        cols.sort_by_key(|c| c.0);
        cols.into_iter()
            .map(|(j, x)| (self.pool[j].clone(), x))
            .collect()
    }
}
