//! Dense exact linear algebra over the rationals.
//!
//! Everything downstream (Hamiltonian pair solving, class re-expression,
//! homology ranks) reduces to reduced row echelon form of small dense
//! matrices with `Rat` entries. No pivoting heuristics: the leftmost
//! nonzero column wins, which keeps every computed basis canonical.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatQ {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Rat>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c));
        MatQ {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c).clone() / inv.clone();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).clone() - f.clone() * self.at(row, c).clone();
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one vector per free column, in column
    /// order, with the free coordinate set to 1.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_row: std::collections::BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_row.contains_key(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (&pc, &pr) in &pivot_row {
                v[pc] = -m.at(pr, free).clone();
            }
            out.push(v);
        }
        out
    }
}

/// Outcome of a consistent-system solve.
pub enum Solve {
    /// Canonical solution: free variables pinned to zero.
    Solution(Vec<Rat>),
    /// The system `A x = b` has no solution.
    Inconsistent,
}

/// Solves `A x = b` by RREF of the augmented matrix; free variables are set
/// to zero so the solution is canonical.
pub fn solve(a: &MatQ, b: &[Rat]) -> Solve {
    assert_eq!(a.rows, b.len());
    let mut m = MatQ::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            m.set(r, c, a.at(r, c).clone());
        }
        m.set(r, a.cols, b[r].clone());
    }
    let pivots = m.rref();
    if pivots.contains(&a.cols) {
        return Solve::Inconsistent;
    }
    let mut x = vec![Rat::zero(); a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m.at(r, a.cols).clone();
    }
    Solve::Solution(x)
}

/// A subspace of Q^n kept as RREF rows; supports canonical reduction
/// modulo the subspace and membership tests.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: usize,
    /// RREF rows spanning the subspace.
    pub rows: Vec<Vec<Rat>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(ambient: usize, spanning: Vec<Vec<Rat>>) -> Self {
        let mut m = MatQ::from_rows(spanning);
        if m.rows == 0 {
            return Subspace {
                ambient,
                rows: vec![],
                pivots: vec![],
            };
        }
        assert_eq!(m.cols, ambient);
        let pivots = m.rref();
        let rows = (0..pivots.len())
            .map(|r| m.row(r).to_vec())
            .collect();
        Subspace {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `v` modulo the subspace: subtracts the
    /// unique combination of RREF rows clearing every pivot coordinate.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let f = out[p].clone();
                for c in 0..self.ambient {
                    out[c] = out[c].clone() - f.clone() * row[c].clone();
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn m(rows: &[&[i64]]) -> MatQ {
        MatQ::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_rref() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn kernel_dimension_rank_nullity() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = a.kernel_basis();
        assert_eq!(k.len() + a.rank(), a.cols);
        for v in &k {
            for r in 0..a.rows {
                let dot: Rat = (0..a.cols)
                    .map(|c| a.at(r, c).clone() * v[c].clone())
                    .sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_canonical() {
        // x + y = 2 with free y -> y = 0, x = 2
        let a = m(&[&[1, 1]]);
        match solve(&a, &[int(2)]) {
            Solve::Solution(x) => assert_eq!(x, vec![int(2), int(0)]),
            Solve::Inconsistent => panic!(),
        }
        // inconsistent
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(matches!(solve(&a, &[int(1), int(2)]), Solve::Inconsistent));
    }

    #[test]
    fn subspace_reduce() {
        let s = Subspace::from_spanning(3, vec![vec![int(1), int(1), int(0)]]);
        let r = s.reduce(&[int(2), int(3), int(4)]);
        assert_eq!(r, vec![int(0), int(1), int(4)]);
        assert!(s.contains(&[int(5), int(5), int(0)]));
        assert!(!s.contains(&[int(5), int(4), int(0)]));
    }
}
