//! Minimum-L1-norm solutions of `A x = b` by revised simplex.
//!
//! The problem `min Σ|x_j|` is rewritten with `x = x⁺ − x⁻`, `x^± ≥ 0` as a
//! standard-form LP with columns `[A, −A]` and unit costs. Phase 1 starts
//! from an all-artificial basis (rows flipped so `b ≥ 0`); artificials that
//! remain basic at zero are pivoted out or, for redundant rows, held at zero
//! by the ratio test. The basis inverse is kept dense and updated with
//! product-form pivots, and refactorized periodically.
//!
//! Pricing is Dantzig's rule; after a streak of degenerate pivots the solver
//! switches to Bland's rule until it makes progress again, which rules out
//! cycling.

use nalgebra::DMatrix;

use crate::{Error, Result};

const TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_STREAK: usize = 50;
const MAX_ITERATIONS: usize = 1_000_000;

/// Sparse real matrix stored by columns.
#[derive(Clone, Debug, Default)]
pub struct SparseColumns {
    rows: usize,
    starts: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<f64>,
}

impl SparseColumns {
    pub fn new(rows: usize) -> Self {
        Self { rows, starts: vec![0], idx: Vec::new(), val: Vec::new() }
    }

    pub fn push_column<I: IntoIterator<Item = (usize, f64)>>(&mut self, entries: I) {
        for (r, v) in entries {
            assert!(r < self.rows, "row {r} out of range");
            if v != 0.0 {
                self.idx.push(r as u32);
                self.val.push(v);
            }
        }
        self.starts.push(self.idx.len());
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.starts[j], self.starts[j + 1]);
        self.idx[a..b].iter().zip(&self.val[a..b]).map(|(&r, &v)| (r as usize, v))
    }
}

#[derive(Clone, Debug)]
pub struct L1Solution {
    /// `Σ|x_j|` at the optimum.
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

struct Simplex<'a> {
    a: &'a SparseColumns,
    m: usize,
    n: usize,
    flip: Vec<f64>,
    b: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
}

impl<'a> Simplex<'a> {
    /// Variable `j`: `j < n` is `+A_j`, `n ≤ j < 2n` is `−A_{j−n}`, and
    /// `j ≥ 2n` is the artificial of row `j − 2n`.
    fn for_column(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j >= 2 * self.n {
            f(j - 2 * self.n, 1.0);
        } else {
            let (col, s) = if j < self.n { (j, 1.0) } else { (j - self.n, -1.0) };
            for (r, v) in self.a.column(col) {
                f(r, s * v * self.flip[r]);
            }
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= 2 * self.n
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut bm = DMatrix::<f64>::zeros(m, m);
        for (k, &j) in self.basis.iter().enumerate() {
            self.for_column(j, |r, v| bm[(r, k)] = v);
        }
        let inv = bm.try_inverse().ok_or_else(|| Error::Lp("singular basis during refactorization".into()))?;
        for r in 0..m {
            for c in 0..m {
                self.binv[r * m + c] = inv[(r, c)];
            }
        }
        for r in 0..m {
            self.xb[r] = (0..m).map(|c| self.binv[r * m + c] * self.b[c]).sum();
        }
        Ok(())
    }

    /// `B^{-1} a_j`.
    fn direction(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut u = vec![0.0; m];
        self.for_column(j, |r, v| {
            for (i, ui) in u.iter_mut().enumerate() {
                *ui += self.binv[i * m + r] * v;
            }
        });
        u
    }

    fn pivot(&mut self, row: usize, entering: usize, u: &[f64]) {
        let m = self.m;
        let pivot = u[row];
        let theta = self.xb[row] / pivot;
        for i in 0..m {
            if i != row {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[row] = theta;
        let (before, rest) = self.binv.split_at_mut(row * m);
        let (prow, after) = rest.split_at_mut(m);
        for v in prow.iter_mut() {
            *v /= pivot;
        }
        for (i, chunk) in before.chunks_mut(m).chain(after.chunks_mut(m)).enumerate() {
            let i = if i < row { i } else { i + 1 };
            let f = u[i];
            if f != 0.0 {
                for (c, v) in chunk.iter_mut().enumerate() {
                    *v -= f * prow[c];
                }
            }
        }
        self.in_basis[self.basis[row]] = false;
        self.in_basis[entering] = true;
        self.basis[row] = entering;
    }

    /// Runs the simplex method for the cost `cost(j)`; artificials never
    /// enter when `allow_artificial` is false.
    fn run(&mut self, cost: impl Fn(usize) -> f64, allow_artificial: bool) -> Result<()> {
        let m = self.m;
        let total = 2 * self.n + if allow_artificial { m } else { 0 };
        let mut degenerate = 0usize;
        let mut y = vec![0.0; m];
        loop {
            self.iterations += 1;
            if self.iterations > MAX_ITERATIONS {
                return Err(Error::Lp("iteration limit reached".into()));
            }
            if self.iterations.is_multiple_of(REFACTOR_EVERY) {
                self.refactor()?;
            }
            for (c, yc) in y.iter_mut().enumerate() {
                *yc = self.basis.iter().enumerate().map(|(r, &j)| cost(j) * self.binv[r * m + c]).sum();
            }
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut entering = None;
            let mut best = -TOL;
            for col in 0..self.n {
                let t: f64 = self.a.column(col).map(|(r, v)| y[r] * v * self.flip[r]).sum();
                for (j, d) in [(col, cost(col) - t), (col + self.n, cost(col + self.n) + t)] {
                    if self.in_basis[j] || d >= -TOL {
                        continue;
                    }
                    if bland {
                        if entering.is_none_or(|e| j < e) {
                            entering = Some(j);
                        }
                    } else if d < best {
                        best = d;
                        entering = Some(j);
                    }
                }
                if bland && entering.is_some() && col >= entering.unwrap() {
                    break;
                }
            }
            if !(bland && entering.is_some()) {
                for j in 2 * self.n..total {
                    if self.in_basis[j] {
                        continue;
                    }
                    let d = cost(j) - y[j - 2 * self.n];
                    if d < best {
                        best = d;
                        entering = Some(j);
                        if bland {
                            break;
                        }
                    }
                }
            }
            let Some(entering) = entering else { return Ok(()) };
            let u = self.direction(entering);
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let basic_artificial = self.is_artificial(self.basis[r]) && !allow_artificial;
                let ratio = if basic_artificial && u[r].abs() > TOL {
                    0.0
                } else if u[r] > TOL {
                    self.xb[r].max(0.0) / u[r]
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((lr, lt)) => {
                        ratio < lt - TOL || (ratio <= lt + TOL && self.basis[r] < self.basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((row, ratio)) = leave else {
                return Err(Error::Lp("unbounded objective".into()));
            };
            degenerate = if ratio <= TOL { degenerate + 1 } else { 0 };
            self.pivot(row, entering, &u);
        }
    }

    /// Replaces basic artificials by structural columns where possible.
    fn drive_out_artificials(&mut self) {
        let m = self.m;
        for row in 0..m {
            if !self.is_artificial(self.basis[row]) {
                continue;
            }
            let found = (0..2 * self.n).filter(|&j| !self.in_basis[j]).find(|&j| {
                let mut acc = 0.0;
                self.for_column(j, |r, v| acc += self.binv[row * m + r] * v);
                acc.abs() > 1e-7
            });
            if let Some(j) = found {
                let u = self.direction(j);
                self.pivot(row, j, &u);
            }
        }
    }
}

/// Solves `min Σ|x_j|` subject to `A x = b`.
pub fn min_l1_norm(a: &SparseColumns, b: &[f64]) -> Result<L1Solution> {
    let m = a.nrows();
    if b.len() != m {
        return Err(Error::Dimension(format!("right-hand side has {} rows, matrix {m}", b.len())));
    }
    let n = a.ncols();
    let flip: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let bf: Vec<f64> = b.iter().zip(&flip).map(|(v, f)| v * f).collect();
    let mut binv = vec![0.0; m * m];
    for r in 0..m {
        binv[r * m + r] = 1.0;
    }
    let mut in_basis = vec![false; 2 * n + m];
    for flag in &mut in_basis[2 * n..] {
        *flag = true;
    }
    let mut s = Simplex {
        a,
        m,
        n,
        flip,
        b: bf.clone(),
        basis: (2 * n..2 * n + m).collect(),
        in_basis,
        binv,
        xb: bf,
        iterations: 0,
    };
    let two_n = 2 * n;
    s.run(|j| if j >= two_n { 1.0 } else { 0.0 }, true)?;
    s.refactor()?;
    let infeasibility: f64 = s.basis.iter().zip(&s.xb).filter(|(&j, _)| j >= two_n).map(|(_, &v)| v).sum();
    if infeasibility > 1e-7 {
        return Err(Error::Lp(format!("infeasible system (residual {infeasibility:e})")));
    }
    s.drive_out_artificials();
    s.refactor()?;
    s.run(|j| if j >= two_n { 0.0 } else { 1.0 }, false)?;
    s.refactor()?;
    let mut x = vec![0.0; n];
    for (&j, &v) in s.basis.iter().zip(&s.xb) {
        if j < n {
            x[j] += v;
        } else if j < two_n {
            x[j - n] -= v;
        }
    }
    let objective = x.iter().map(|v| v.abs()).sum();
    Ok(L1Solution { objective, x, iterations: s.iterations })
}
