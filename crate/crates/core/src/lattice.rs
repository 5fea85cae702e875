//! Integer linear algebra: Hermite and Smith normal forms, integer row
//! membership, kernels and saturation. Generic over the integer type so the
//! same code serves `i64` hot paths and `BigInt` certificates.

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

pub trait Int: Integer + Signed + Clone + fmt::Debug + fmt::Display + Send + Sync {}
impl<T: Integer + Signed + Clone + fmt::Debug + fmt::Display + Send + Sync> Int for T {}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Int> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds from rows; every row must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + p;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = o.clone() + c.clone() * self[(i, j)].clone();
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn map<U: Int>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// rows (a, b) <- (x a + y b, u a + v b)
    fn combine_rows(&mut self, a: usize, b: usize, x: &T, y: &T, u: &T, v: &T) {
        for j in 0..self.cols {
            let ra = self[(a, j)].clone();
            let rb = self[(b, j)].clone();
            self[(a, j)] = x.clone() * ra.clone() + y.clone() * rb.clone();
            self[(b, j)] = u.clone() * ra + v.clone() * rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, x: &T, y: &T, u: &T, v: &T) {
        for i in 0..self.rows {
            let ca = self[(i, a)].clone();
            let cb = self[(i, b)].clone();
            self[(i, a)] = x.clone() * ca.clone() + y.clone() * cb.clone();
            self[(i, b)] = u.clone() * ca + v.clone() * cb;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)].clone();
        }
    }

    /// col a <- col a - q col b
    fn sub_col(&mut self, a: usize, b: usize, q: &T) {
        for i in 0..self.rows {
            let t = q.clone() * self[(i, b)].clone();
            self[(i, a)] = self[(i, a)].clone() - t;
        }
    }

    /// row a <- row a - q row b
    fn sub_row(&mut self, a: usize, b: usize, q: &T) {
        for j in 0..self.cols {
            let t = q.clone() * self[(b, j)].clone();
            self[(a, j)] = self[(a, j)].clone() - t;
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.rows {
            l.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        l.finish()
    }
}

/// Bezout coefficients (g, x, y) with x a + y b = g >= 0.
fn xgcd<T: Int>(a: &T, b: &T) -> (T, T, T) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form `h = u * m`, `u` unimodular. Nonzero rows
/// come first with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Hermite<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hermite<T: Int>(m: &Matrix<T>) -> Hermite<T> {
    let mut h = m.clone();
    let mut u = Matrix::identity(m.rows);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        for i in r + 1..m.rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let a = h[(r, c)].clone();
            let b = h[(i, c)].clone();
            let (g, x, y) = xgcd(&a, &b);
            let (ag, bg) = (a / g.clone(), b / g);
            // determinant x*ag + y*bg = 1
            h.combine_rows(r, i, &x, &y, &-bg.clone(), &ag);
            u.combine_rows(r, i, &x, &y, &-bg, &ag);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&p);
            if !q.is_zero() {
                h.sub_row(i, r, &q);
                u.sub_row(i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Hermite {
        h,
        u,
        rank: r,
        pivots,
    }
}

pub fn rank<T: Int>(m: &Matrix<T>) -> usize {
    hermite(m).rank
}

/// `p * m * q = d` with `d` diagonal, diagonal entries nonnegative and each
/// dividing the next, `p` and `q` unimodular.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub diagonal: Vec<T>,
    pub p: Matrix<T>,
    pub q: Matrix<T>,
}

impl<T: Int> Smith<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<T> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith<T: Int>(m: &Matrix<T>) -> Smith<T> {
    let mut d = m.clone();
    let mut p = Matrix::identity(m.rows);
    let mut q = Matrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    for t in 0..n {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if !d[(i, j)].is_zero()
                    && best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);
        loop {
            for i in t + 1..m.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let a = d[(t, t)].clone();
                let b = d[(i, t)].clone();
                if b.is_multiple_of(&a) {
                    let k = b / a;
                    d.sub_row(i, t, &k);
                    p.sub_row(i, t, &k);
                    continue;
                }
                let (g, x, y) = xgcd(&a, &b);
                let (ag, bg) = (a / g.clone(), b / g);
                d.combine_rows(t, i, &x, &y, &-bg.clone(), &ag);
                p.combine_rows(t, i, &x, &y, &-bg, &ag);
            }
            let mut changed = false;
            for j in t + 1..m.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let a = d[(t, t)].clone();
                let b = d[(t, j)].clone();
                if b.is_multiple_of(&a) {
                    let k = b / a;
                    d.sub_col(j, t, &k);
                    q.sub_col(j, t, &k);
                    continue;
                }
                let (g, x, y) = xgcd(&a, &b);
                let (ag, bg) = (a / g.clone(), b / g);
                d.combine_cols(t, j, &x, &y, &-bg.clone(), &ag);
                q.combine_cols(t, j, &x, &y, &-bg, &ag);
                changed = true;
            }
            if !changed {
                break;
            }
        }
        // divisibility: if the pivot fails to divide some entry, fold that
        // row in and redo this step
        let piv = d[(t, t)].clone();
        let mut offender = None;
        'scan: for i in t + 1..m.rows {
            for j in t + 1..m.cols {
                if !d[(i, j)].is_multiple_of(&piv) {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let one = T::one();
            d.sub_row(t, i, &-one.clone());
            p.sub_row(t, i, &-one);
            return finish_smith(d, p, q, t);
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }
    let diagonal = (0..n).map(|i| d[(i, i)].clone()).collect();
    Smith { diagonal, p, q }
}

/// Restarts the elimination from step `t` on a partially reduced matrix.
fn finish_smith<T: Int>(d: Matrix<T>, p: Matrix<T>, q: Matrix<T>, t: usize) -> Smith<T> {
    // Reduce the trailing block recursively and splice the transforms in.
    let rows = d.rows - t;
    let cols = d.cols - t;
    let mut block = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            block[(i, j)] = d[(i + t, j + t)].clone();
        }
    }
    let inner = smith(&block);
    let mut pe = Matrix::identity(d.rows);
    for i in 0..rows {
        for j in 0..rows {
            pe[(i + t, j + t)] = inner.p[(i, j)].clone();
        }
    }
    let mut qe = Matrix::identity(d.cols);
    for i in 0..cols {
        for j in 0..cols {
            qe[(i + t, j + t)] = inner.q[(i, j)].clone();
        }
    }
    let mut diagonal: Vec<T> = (0..t).map(|i| d[(i, i)].clone()).collect();
    diagonal.extend(inner.diagonal);
    Smith {
        diagonal,
        p: pe.mul(&p),
        q: q.mul(&qe),
    }
}

/// Coefficients `c` with `c * rows = v`, if `v` lies in the integer row span.
pub fn solve_rows<T: Int>(rows: &Matrix<T>, v: &[T]) -> Option<Vec<T>> {
    RowSolver::new(rows).solve(v)
}

/// Precomputed Hermite data for repeated [`solve_rows`] queries.
#[derive(Clone, Debug)]
pub struct RowSolver<T> {
    hf: Hermite<T>,
    cols: usize,
}

impl<T: Int> RowSolver<T> {
    pub fn new(rows: &Matrix<T>) -> Self {
        RowSolver {
            hf: hermite(rows),
            cols: rows.cols,
        }
    }

    pub fn solve(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.cols, v.len());
        let hf = &self.hf;
        let mut rest = v.to_vec();
        let mut coeffs = vec![T::zero(); hf.u.rows];
        for (k, &c) in hf.pivots.iter().enumerate() {
            if rest[c].is_zero() {
                continue;
            }
            let piv = hf.h[(k, c)].clone();
            if !rest[c].is_multiple_of(&piv) {
                return None;
            }
            let f = rest[c].clone() / piv;
            for j in c..self.cols {
                rest[j] = rest[j].clone() - f.clone() * hf.h[(k, j)].clone();
            }
            coeffs[k] = f;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        // coeffs are against rows of h = u * m
        Some(hf.u.left_apply(&coeffs))
    }
}

/// Echelon form suited for repeated membership queries.
#[derive(Clone, Debug)]
pub struct RowLattice<T> {
    pub cols: usize,
    echelon: Vec<(usize, Vec<T>)>,
}

impl<T: Int> RowLattice<T> {
    pub fn new(rows: &Matrix<T>) -> Self {
        let hf = hermite(rows);
        let echelon = hf
            .pivots
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, hf.h.row(k).to_vec()))
            .collect();
        RowLattice {
            cols: rows.cols,
            echelon,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        let mut rest = v.to_vec();
        for (c, row) in &self.echelon {
            let q = rest[*c].div_floor(&row[*c]);
            if q.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                rest[j] = rest[j].clone() - q.clone() * row[j].clone();
            }
        }
        rest
    }

    pub fn basis(&self) -> Vec<Vec<T>> {
        self.echelon.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Basis of the left kernel `{x : x * m = 0}`.
pub fn left_kernel<T: Int>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let hf = hermite(m);
    (hf.rank..m.rows).map(|i| hf.u.row(i).to_vec()).collect()
}

/// Basis of `{v : k v in span(rows) for some k != 0} ∩ Z^n`.
pub fn saturation<T: Int>(rows: &Matrix<T>) -> Vec<Vec<T>> {
    // the saturation is the annihilator of the right kernel
    let r = rank(rows);
    let right = left_kernel(&rows.transpose());
    if right.is_empty() {
        return Matrix::<T>::identity(rows.cols).to_rows();
    }
    let k = Matrix::from_rows(right, rows.cols).transpose();
    let sat = left_kernel(&k);
    debug_assert_eq!(sat.len(), r);
    sat
}

pub fn gcd_all<T: Int>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

/// A unimodular matrix whose first row is the primitive vector `v`.
pub fn unimodular_completion<T: Int>(v: &[T]) -> Option<Matrix<T>> {
    if !gcd_all(v).is_one() {
        return None;
    }
    // hermite of the column v gives u with u v = e1 * 1; so v is the first
    // column of u^-1, i.e. the first row of (u^-1)^T.
    let col = Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect(), 1);
    let hf = hermite(&col);
    let inv = inverse_unimodular(&hf.u)?;
    Some(inv.transpose())
}

/// Inverse of a unimodular matrix.
pub fn inverse_unimodular<T: Int>(m: &Matrix<T>) -> Option<Matrix<T>> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let hf = hermite(m);
    // hf.h = u m is upper triangular with unit diagonal iff m unimodular;
    // after full reduction it is the identity
    if hf.rank != n || (0..n).any(|i| !hf.h[(i, i)].is_one()) {
        return None;
    }
    Some(hf.u)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det<T: Int>(m: &Matrix<T>) -> T {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return T::zero();
            };
            a.swap_rows(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v =
                    a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = v / prev.clone();
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect(), cols)
    }

    #[test]
    fn hermite_transform_holds() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let hf = hermite(&a);
        assert_eq!(hf.u.mul(&a), hf.h);
        assert_eq!(hf.rank, 3);
        assert_eq!(det(&hf.u).abs(), 1);
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let d = s.p.mul(&a).mul(&s.q);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[(i, j)], if i == j { s.diagonal[i] } else { 0 });
            }
        }
    }

    #[test]
    fn smith_divisibility_fixup() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let s = smith(&a);
        assert_eq!(s.diagonal, vec![1, 6]);
        let d = s.p.mul(&a).mul(&s.q);
        assert_eq!(d, m(&[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn smith_rank_deficient() {
        let s = smith(&m(&[&[2, 2, 2]]));
        assert_eq!(s.diagonal, vec![2]);
        assert_eq!(s.rank(), 1);
        let s = smith(&m(&[&[0, 0], &[0, 0]]));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn bigint_smith() {
        let a = m(&[&[4, 0], &[0, 6]]).map(|x| BigInt::from(*x));
        let s = smith(&a);
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn membership() {
        let l = m(&[&[2, 0], &[1, 3]]);
        assert_eq!(solve_rows(&l, &[3, 3]), Some(vec![1, 1]));
        assert_eq!(solve_rows(&l, &[1, 0]), None);
        let rl = RowLattice::new(&l);
        assert!(rl.contains(&[4, 6]));
        assert!(!rl.contains(&[0, 1]));
        assert!(rl.contains(&[0, 6]));
    }

    #[test]
    fn kernel_and_saturation() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(Matrix::from_rows(k, 3).mul(&a), m(&[&[0, 0]]));
        let sat = saturation(&m(&[&[2, 0, 0]]));
        assert_eq!(sat.len(), 1);
        assert_eq!(
            sat[0].iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![1, 0, 0]
        );
    }

    #[test]
    fn completion() {
        let u = unimodular_completion(&[3i64, 5]).unwrap();
        assert_eq!(u.row(0), &[3, 5]);
        assert_eq!(det(&u).abs(), 1);
        assert!(unimodular_completion(&[2i64, 4]).is_none());
    }
}
