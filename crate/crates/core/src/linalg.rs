//! Exact integer linear algebra.
//!
//! Everything here runs over `BigInt` with fraction-free row operations:
//! a row update is `p * row - a * pivot_row` followed by division by the
//! row content, so no rational numbers are ever formed and entries stay
//! small on the sparse 0/±1 systems produced by Hom computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

/// Result of a fraction-free Gauss-Jordan reduction.
///
/// Each pivot row has a positive pivot and every pivot column is zero
/// outside its pivot row.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub matrix: IntMatrix,
    /// Pivot column of each of the first `pivots.len()` rows.
    pub pivots: Vec<usize>,
}

/// Outcome of an exact solve of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigInt>),
    Inconsistent,
    /// The homogeneous system has a nontrivial kernel.
    Underdetermined,
    /// The unique rational solution is not integral.
    NonIntegral,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {r}");
            for (c, v) in row.iter().enumerate() {
                m.data[r][c] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r][c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.data[r][c] += v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r]
    }

    /// Appends a column, used to build augmented systems.
    pub fn with_column(&self, col: &[BigInt]) -> IntMatrix {
        assert_eq!(col.len(), self.rows);
        let mut out = self.clone();
        for (row, v) in out.data.iter_mut().zip(col) {
            row.push(v.clone());
        }
        out.cols += 1;
        out
    }

    /// Fraction-free Gauss-Jordan elimination.
    pub fn reduce(&self) -> Reduced {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // smallest nonzero pivot keeps the entries small
            let Some(best) = (row..self.rows)
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
            else {
                continue;
            };
            m.swap(row, best);
            normalize_row(&mut m[row][col..]);
            if m[row][col].is_negative() {
                for v in m[row][col..].iter_mut() {
                    *v = -&*v;
                }
            }
            let (before, rest) = m.split_at_mut(row);
            let (prow, after) = rest.split_first_mut().expect("pivot row");
            for other in before.iter_mut().chain(after.iter_mut()) {
                eliminate(other, prow, col);
            }
            pivots.push(col);
            row += 1;
        }
        Reduced {
            matrix: IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.reduce().pivots.len()
    }

    /// Primitive integer basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let red = self.reduce();
        red.kernel_basis()
    }

    /// Exact integer solution of `self * x = rhs`.
    pub fn solve(&self, rhs: &[BigInt]) -> Solution {
        let aug = self.with_column(rhs);
        let red = aug.reduce();
        if red.pivots.last() == Some(&self.cols) {
            return Solution::Inconsistent;
        }
        if red.pivots.len() < self.cols {
            return Solution::Underdetermined;
        }
        let mut x = vec![BigInt::zero(); self.cols];
        for (r, &pc) in red.pivots.iter().enumerate() {
            let p = red.matrix.get(r, pc);
            let b = red.matrix.get(r, self.cols);
            let (q, rem) = b.div_rem(p);
            if !rem.is_zero() {
                return Solution::NonIntegral;
            }
            x[pc] = q;
        }
        Solution::Unique(x)
    }
}

impl Reduced {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let cols = self.matrix.cols;
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut lcm = BigInt::one();
            for (r, &pc) in self.pivots.iter().enumerate() {
                if !self.matrix.get(r, free).is_zero() {
                    lcm = lcm.lcm(self.matrix.get(r, pc));
                }
            }
            let mut v = vec![BigInt::zero(); cols];
            v[free] = lcm.clone();
            for (r, &pc) in self.pivots.iter().enumerate() {
                let a = self.matrix.get(r, free);
                if !a.is_zero() {
                    v[pc] = -(&lcm / self.matrix.get(r, pc)) * a;
                }
            }
            normalize_row(&mut v);
            basis.push(v);
        }
        basis
    }
}

fn content(row: &[BigInt]) -> BigInt {
    row.iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::zero(), |g, v| g.gcd(v))
}

fn normalize_row(row: &mut [BigInt]) {
    let g = content(row);
    if g > BigInt::one() {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

fn eliminate(target: &mut [BigInt], pivot_row: &[BigInt], col: usize) {
    if target[col].is_zero() {
        return;
    }
    let p = &pivot_row[col];
    let g = p.gcd(&target[col]);
    let pm = p / &g;
    let am = &target[col] / &g;
    // the pivot row is zero left of `col`, but the target may hold an
    // earlier pivot there, so the whole row is rescaled
    for (t, pv) in target.iter_mut().zip(pivot_row) {
        if pv.is_zero() {
            if !t.is_zero() {
                *t = &*t * &pm;
            }
        } else {
            *t = &*t * &pm - &am * pv;
        }
    }
    normalize_row(target);
}

/// Rank over machine integers with the same fraction-free scheme; `None`
/// when an intermediate value overflows `i64`.
pub fn rank_i64(mut m: Vec<Vec<i64>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(best) = (rank..rows)
            .filter(|&r| m[r][col] != 0)
            .min_by_key(|&r| m[r][col].unsigned_abs())
        else {
            continue;
        };
        m.swap(rank, best);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        let p = prow[col];
        for row in rest.iter_mut() {
            let a = row[col];
            if a == 0 {
                continue;
            }
            let g = gcd_i64(p, a);
            let (pm, am) = (p / g, a / g);
            let mut content = 0;
            for c in col..cols {
                let v = row[c]
                    .checked_mul(pm)?
                    .checked_sub(am.checked_mul(prow[c])?)?;
                row[c] = v;
                content = gcd_i64(content, v);
            }
            if content > 1 {
                for v in row[col..].iter_mut() {
                    *v /= content;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Matrix product.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "inner dimensions differ");
    let mut out = IntMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for (k, x) in a.data[i].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let y = &b.data[k][j];
                if !y.is_zero() {
                    out.data[i][j] += x * y;
                }
            }
        }
    }
    out
}

/// Multiplies a matrix by a vector.
pub fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}
