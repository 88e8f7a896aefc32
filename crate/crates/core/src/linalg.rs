//! Exact integer and rational linear algebra.
//!
//! Hermite and Smith normal forms, integer kernels and lattice membership,
//! rational solving with inconsistency certificates, an exact simplex method
//! (Bland's rule) for strict feasibility with Farkas certificates, and
//! double-description enumeration of extreme rays of `{x ≥ 0, Ax = 0}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type RatVector = Vec<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("cone dimension {dim} exceeds the enumeration cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let data: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix row");
                r.iter().cloned().map(Into::into).collect()
            })
            .collect();
        IntMatrix { rows: data.len(), cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out.data[i][j] += &self.data[i][k] * &o.data[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        self.data.iter().map(|r| dot(r, v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        let mut out = vec![BigInt::zero(); self.cols];
        for (c, r) in v.iter().zip(&self.data) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(r) {
                *o += c * x;
            }
        }
        out
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.data[i].iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free elimination (square matrices only).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            BigInt::one()
        } else {
            sign * &a[n - 1][n - 1]
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.data, self.cols)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let s: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts a vector of small integers back to `i64`; panics on overflow.
pub fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("integer exceeds i64")).collect()
}

/// Rank over Q by fraction-free elimination.
pub fn rank_of_rows(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[r][c].clone(), a[i][c].clone());
            for j in c..cols {
                let v = &a[i][j] * &f - &a[r][j] * &g;
                a[i][j] = v;
            }
            let gc = a[i].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !gc.is_zero() && !gc.is_one() {
                for x in a[i].iter_mut() {
                    *x = &*x / &gc;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Divides a vector by the gcd of its entries (zero vectors are unchanged).
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v.to_vec()
    } else {
        v.iter().map(|x| x / &g).collect()
    }
}

fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let s = a[src].clone();
    for (d, x) in a[dst].iter_mut().zip(&s) {
        *d += k * x;
    }
}

fn row_negate(a: &mut [Vec<BigInt>], i: usize) {
    for x in a[i].iter_mut() {
        *x = -&*x;
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`, `U`
/// unimodular.
///
/// `H` is in row echelon form with positive pivots; nonzero rows come first
/// and entries above each pivot are reduced into `[0, pivot)`. For example
/// `[[2,4],[1,3]]` becomes `[[1,1],[0,2]]`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut h = m.data.clone();
    let mut u = IntMatrix::identity(rows).data;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // pick the smallest nonzero entry in column c at or below row r
            let Some(p) = (r..rows)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()))
            else {
                break;
            };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                let nq = -q;
                row_axpy(&mut h, i, r, &nq);
                row_axpy(&mut u, i, r, &nq);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            row_negate(&mut h, r);
            row_negate(&mut u, r);
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            let nq = -q;
            row_axpy(&mut h, i, r, &nq);
            row_axpy(&mut u, i, r, &nq);
        }
        r += 1;
    }
    (IntMatrix { rows, cols, data: h }, IntMatrix { rows, cols: rows, data: u })
}

/// Result of [`smith_normal_form`]: `U·M·V = D` with `D` diagonal.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal entries `d_1 | d_2 | …`, length `min(rows, cols)`.
    pub invariants: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[dst] += k * s;
    }
}

fn col_swap(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Smith normal form with the divisibility chain `d_1 | d_2 | …`.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut u = IntMatrix::identity(rows).data;
    let mut v = IntMatrix::identity(cols).data;
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                let nq = -q;
                row_axpy(&mut a, i, t, &nq);
                row_axpy(&mut u, i, t, &nq);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                let nq = -q;
                col_axpy(&mut a, j, t, &nq);
                col_axpy(&mut v, j, t, &nq);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            row_negate(&mut a, t);
            row_negate(&mut u, t);
        }
    }
    let invariants = (0..k).map(|i| a[i][i].clone()).collect();
    Snf {
        invariants,
        u: IntMatrix { rows, cols: rows, data: u },
        v: IntMatrix { rows: cols, cols, data: v },
        d: IntMatrix { rows, cols, data: a },
    }
}

/// A Z-basis of `{x ∈ Z^cols : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, u) = hermite_normal_form(&m.transpose());
    (0..h.rows).filter(|&i| h.is_zero_row(i)).map(|i| u.row(i).to_vec()).collect()
}

/// Coefficients `c` with `v = Σ c_i g_i`, or `None` if `v` is not in the
/// Z-span of the generators.
pub fn integer_membership(v: &[BigInt], generators: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    if generators.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    let cols = v.len();
    let g = IntMatrix::from_rows(cols, generators);
    let (h, u) = hermite_normal_form(&g);
    let mut rem = v.to_vec();
    let mut coeff = vec![BigInt::zero(); h.rows];
    for (i, c) in coeff.iter_mut().enumerate() {
        let Some(p) = (0..cols).find(|&j| !h.get(i, j).is_zero()) else {
            break;
        };
        let (q, r) = rem[p].div_rem(h.get(i, p));
        if !r.is_zero() {
            return None;
        }
        for j in 0..cols {
            rem[j] -= &q * h.get(i, j);
        }
        *c = q;
    }
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(u.vec_mul(&coeff))
}

/// Outcome of [`rational_solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solve {
    Solution(RatVector),
    /// `z` with `zᵀM = 0` and `zᵀb ≠ 0`.
    NoSolution(RatVector),
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Any exact solution of `M x = b`, or an inconsistency certificate.
pub fn rational_solve(m: &IntMatrix, b: &[BigRational]) -> Solve {
    assert_eq!(m.rows, b.len(), "right-hand side length");
    let (rows, cols) = (m.rows, m.cols);
    // augmented [M | b | I] tracks the left transform for the certificate
    let width = cols + 1 + rows;
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = m.data[i].iter().map(rat).collect();
            r.push(b[i].clone());
            r.extend((0..rows).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..width {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in a.iter().skip(r) {
        if !row[cols].is_zero() {
            return Solve::NoSolution(row[cols + 1..].to_vec());
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Solve::Solution(x)
}

/// Outcome of an exact linear program in standard form.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: RatVector, value: BigRational },
    Infeasible,
    Unbounded,
}

/// Minimises `c·x` subject to `A x = b`, `x ≥ 0`, using a two-phase tableau
/// simplex with Bland's rule. All arithmetic is exact.
pub fn simplex_min(a: &[RatVector], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // tableau rows: constraints with artificials appended; last column is rhs
    let width = n + m + 1;
    let mut t: Vec<RatVector> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: RatVector = a[i].iter().map(|x| if flip { -x } else { x.clone() }).collect();
        row.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: minimise the sum of artificials
    let mut cost1 = vec![BigRational::zero(); width];
    for j in n..n + m {
        cost1[j] = BigRational::one();
    }
    if !run_simplex(&mut t, &mut basis, &cost1, n + m) {
        unreachable!("phase one is bounded below by zero");
    }
    let phase1: BigRational = basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= n)
        .map(|(i, _)| t[i][width - 1].clone())
        .sum();
    if !phase1.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive remaining (zero-valued) artificials out of the basis
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    for row in t.iter_mut() {
        for x in row.iter_mut().skip(n).take(m) {
            *x = BigRational::zero();
        }
    }
    let mut cost2 = vec![BigRational::zero(); width];
    cost2[..n].clone_from_slice(c);
    if !run_simplex(&mut t, &mut basis, &cost2, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        x[bj] = t[i][width - 1].clone();
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    LpOutcome::Optimal { x, value }
}

fn pivot(t: &mut [RatVector], basis: &mut [usize], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let pr = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&pr) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    basis[r] = c;
}

/// Runs the simplex loop on columns `< ncols`; returns `false` if unbounded.
fn run_simplex(t: &mut [RatVector], basis: &mut [usize], cost: &[BigRational], ncols: usize) -> bool {
    let rhs = cost.len() - 1;
    loop {
        // reduced costs: c_j - c_B · column_j
        let mut enter = None;
        for j in 0..ncols {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost[j].clone();
            for (i, &bj) in basis.iter().enumerate() {
                if !cost[bj].is_zero() && !t[i][j].is_zero() {
                    rc -= &cost[bj] * &t[i][j];
                }
            }
            if rc.is_negative() {
                enter = Some(j);
                break;
            }
        }
        let Some(j) = enter else { return true };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[j].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((i, _)) = leave else { return false };
        pivot(t, basis, i, j);
    }
}

/// Two-sided answer of [`lp_feasible_strict`].
#[derive(Clone, Debug, PartialEq)]
pub enum StrictFeasibility {
    /// `x` with `M x = b` and every coordinate strictly positive.
    Strict(RatVector),
    /// `z` with `Mᵀz ≥ 0`, `Mᵀz ≠ 0`, `z·b ≤ 0`.
    Farkas(RatVector),
    /// `M x = b` has no solution at all: `zᵀM = 0`, `zᵀb ≠ 0`.
    Inconsistent(RatVector),
}

/// Decides whether `{x : M x = b, x > 0}` is nonempty.
pub fn lp_feasible_strict(m: &IntMatrix, b: &[BigRational]) -> StrictFeasibility {
    if let Solve::NoSolution(z) = rational_solve(m, b) {
        return StrictFeasibility::Inconsistent(z);
    }
    let (rows, n) = (m.rows, m.cols);
    let q = |x: &BigInt| rat(x);
    // maximise t with x = u + t·1, u ≥ 0, t = tp - tn, t + s = 1
    // variables: u (n), tp, tn, s
    let nv = n + 3;
    let mut a: Vec<RatVector> = Vec::with_capacity(rows + 1);
    for i in 0..rows {
        let mut row: RatVector = m.data[i].iter().map(q).collect();
        let rs: BigRational = m.data[i].iter().map(q).sum();
        row.push(rs.clone());
        row.push(-rs);
        row.push(BigRational::zero());
        a.push(row);
    }
    let mut last = vec![BigRational::zero(); nv];
    last[n] = BigRational::one();
    last[n + 1] = -BigRational::one();
    last[n + 2] = BigRational::one();
    a.push(last);
    let mut rhs: RatVector = b.to_vec();
    rhs.push(BigRational::one());
    let mut c = vec![BigRational::zero(); nv];
    c[n] = -BigRational::one();
    c[n + 1] = BigRational::one();
    if let LpOutcome::Optimal { x, value } = simplex_min(&a, &rhs, &c) {
        let t = -value;
        if t.is_positive() {
            let pt = (0..n).map(|j| &x[j] + &t).collect();
            return StrictFeasibility::Strict(pt);
        }
    }
    // certificate: Mᵀz - w = 0, 1ᵀMᵀz = 1, b·z + s = 0, with z = zp - zn
    let mt = m.transpose();
    let nz = 2 * rows + n + 1;
    let mut a2: Vec<RatVector> = Vec::new();
    for j in 0..n {
        let mut row = vec![BigRational::zero(); nz];
        for i in 0..rows {
            row[i] = q(mt.get(j, i));
            row[rows + i] = -q(mt.get(j, i));
        }
        row[2 * rows + j] = -BigRational::one();
        a2.push(row);
    }
    let mut norm = vec![BigRational::zero(); nz];
    for i in 0..rows {
        let s: BigRational = m.data[i].iter().map(q).sum();
        norm[i] = s.clone();
        norm[rows + i] = -s;
    }
    a2.push(norm);
    let mut brow = vec![BigRational::zero(); nz];
    for i in 0..rows {
        brow[i] = b[i].clone();
        brow[rows + i] = -b[i].clone();
    }
    brow[nz - 1] = BigRational::one();
    a2.push(brow);
    let mut rhs2 = vec![BigRational::zero(); n];
    rhs2.push(BigRational::one());
    rhs2.push(BigRational::zero());
    match simplex_min(&a2, &rhs2, &vec![BigRational::zero(); nz]) {
        LpOutcome::Optimal { x, .. } => {
            let z = (0..rows).map(|i| &x[i] - &x[rows + i]).collect();
            StrictFeasibility::Farkas(z)
        }
        other => unreachable!("transposition theorem violated: {other:?}"),
    }
}

/// Clears denominators and divides out the content.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * rat(&l)).to_integer()).collect();
    primitive(&ints)
}

/// Default column cap for [`dd_vertex_enumeration`].
pub const DD_DEFAULT_CAP: usize = 24;

/// Extreme rays of `{x ≥ 0, E x = 0}` as primitive integer vectors, sorted.
///
/// Double description: start from the coordinate rays and cut by each
/// equality in input order; a `(+,-)` pair is combined only if the two rays
/// are adjacent, tested by the rank of their common active constraints.
pub fn dd_vertex_enumeration(eq: &IntMatrix, cap: usize) -> Result<Vec<Vec<BigInt>>, LinalgError> {
    let d = eq.cols;
    if d > cap {
        return Err(LinalgError::DimensionTooLarge { dim: d, cap });
    }
    if d > 64 {
        return Err(LinalgError::DimensionTooLarge { dim: d, cap: 64 });
    }
    let zero_mask = |r: &[BigInt]| -> u64 {
        r.iter().enumerate().filter(|(_, x)| x.is_zero()).fold(0u64, |m, (i, _)| m | (1 << i))
    };
    let mut rays: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut processed: Vec<Vec<BigInt>> = Vec::new();
    for row in eq.data.iter() {
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(row, r)).collect();
        let masks: Vec<u64> = rays.iter().map(|r| zero_mask(r)).collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        for i in 0..rays.len() {
            if vals[i].is_zero() {
                next.push(rays[i].clone());
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common = masks[p] & masks[n];
                if !adjacent(common, d, &processed) {
                    continue;
                }
                // combination lies on the hyperplane: vp·rn - vn·rp with vp>0>vn
                let comb: Vec<BigInt> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(xn, xp)| &vals[p] * xn - &vals[n] * xp)
                    .collect();
                next.push(primitive(&comb));
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(row.clone());
    }
    rays.sort();
    Ok(rays)
}

/// Two rays with common zero set `common` are adjacent iff the active
/// constraints (processed equalities plus coordinate zeros) have rank `d - 2`.
fn adjacent(common: u64, d: usize, processed: &[Vec<BigInt>]) -> bool {
    let z = common.count_ones() as usize;
    if z + 2 > d {
        return false;
    }
    let free: Vec<usize> = (0..d).filter(|&j| common & (1 << j) == 0).collect();
    let need = d - 2 - z;
    if processed.len() < need {
        return false;
    }
    let sub: Vec<Vec<BigInt>> =
        processed.iter().map(|r| free.iter().map(|&j| r[j].clone()).collect()).collect();
    rank_of_rows(&sub, free.len()) == need
}

/// Extreme-ray test for `{x ≥ 0, E x = 0}`: `r` is extreme iff the columns of
/// `E` on the support of `r` have a one-dimensional kernel.
pub fn is_extreme_ray(eq: &IntMatrix, r: &[BigInt]) -> bool {
    let supp: Vec<usize> = (0..r.len()).filter(|&j| !r[j].is_zero()).collect();
    if supp.is_empty() {
        return false;
    }
    let sub: Vec<Vec<BigInt>> =
        eq.data.iter().map(|row| supp.iter().map(|&j| row[j].clone()).collect()).collect();
    rank_of_rows(&sub, supp.len()) + 1 == supp.len()
}
