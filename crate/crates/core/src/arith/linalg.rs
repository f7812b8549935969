//! Dense linear algebra over Q(n).

use super::rfunc_n::RFuncN;

pub type Vector = Vec<RFuncN>;
/// Row-major.
pub type Matrix = Vec<Vec<RFuncN>>;

fn weight(x: &RFuncN) -> usize {
    let size = |p: &super::zpoly::ZPoly| p.coeffs().iter().map(|c| c.bits() as usize + 1).sum::<usize>();
    size(x.num()) + size(x.den())
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Cheapest nonzero pivot keeps intermediate growth down.
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| weight(&m[i][c]))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            if !m[r][j].is_zero() {
                m[r][j] = &m[r][j] * &inv;
            }
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !prow[j].is_zero() {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut m = m.clone();
    let pivots = rref(&mut m);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RFuncN::zero(); cols];
        v[free] = RFuncN::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[row][free];
        }
        out.push(v);
    }
    out
}

/// For vectors `v_0, v_1, ...` the first `j` with `v_j` dependent on its
/// predecessors, as coefficients `c_0..c_j` with `c_j = 1` and `sum c_i v_i = 0`.
pub fn first_dependence(vectors: &[Vector]) -> Option<Vector> {
    let dim = vectors.first()?.len();
    let mut m: Matrix = (0..dim).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect();
    let pivots = rref(&mut m);
    let j = (0..vectors.len()).find(|c| !pivots.contains(c))?;
    let mut out = vec![RFuncN::zero(); j + 1];
    out[j] = RFuncN::one();
    for (row, &pc) in pivots.iter().enumerate() {
        if pc < j {
            out[pc] = -&m[row][j];
        }
    }
    Some(out)
}

/// Incremental dependence finder: feeds vectors one at a time and reports the
/// first one that lies in the span of the previous ones.
pub struct DependenceFinder {
    /// Echelon rows `(pivot, row, combination)`; `row = sum combination_i v_i`.
    rows: Vec<(usize, Vector, Vector)>,
    count: usize,
}

impl DependenceFinder {
    pub fn new() -> Self {
        DependenceFinder {
            rows: Vec::new(),
            count: 0,
        }
    }

    /// Returns `Some(c)` with `sum c_i v_i = 0`, `c_last = 1`, when `v` is dependent.
    pub fn push(&mut self, v: &Vector) -> Option<Vector> {
        let idx = self.count;
        self.count += 1;
        let mut row = v.clone();
        let mut comb = vec![RFuncN::zero(); idx + 1];
        comb[idx] = RFuncN::one();
        for (pc, prow, pcomb) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            for (x, y) in row.iter_mut().zip(prow) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            for (x, y) in comb.iter_mut().zip(pcomb) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let pivot = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .min_by_key(|(_, x)| weight(x))
            .map(|(i, _)| i);
        match pivot {
            None => Some(comb),
            Some(pc) => {
                let inv = row[pc].inv().unwrap();
                for x in row.iter_mut().chain(comb.iter_mut()) {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
                self.rows.push((pc, row, comb));
                None
            }
        }
    }
}

impl Default for DependenceFinder {
    fn default() -> Self {
        Self::new()
    }
}

pub fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { RFuncN::one() } else { RFuncN::zero() }).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Matrix {
    vec![vec![RFuncN::zero(); c]; r]
}

pub fn mat_vec(a: &Matrix, v: &[RFuncN]) -> Vector {
    a.iter()
        .map(|row| {
            let mut acc = RFuncN::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = RFuncN::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_scale(a: &Matrix, c: &RFuncN) -> Matrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Entrywise `n -> n + c`.
pub fn shift_vec(v: &[RFuncN], c: i64) -> Vector {
    v.iter().map(|x| x.shift(c)).collect()
}

pub fn shift_mat(a: &Matrix, c: i64) -> Matrix {
    a.iter().map(|r| shift_vec(r, c)).collect()
}

pub fn is_zero_vec(v: &[RFuncN]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Basis of the column space, as a subset of the columns.
pub fn column_basis(a: &Matrix) -> Vec<Vector> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    pivots.iter().map(|&j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Solve `a x = b` for square invertible `a`.
pub fn solve(a: &Matrix, b: &[RFuncN]) -> Option<Vector> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(r, y)| {
            let mut r = r.clone();
            r.push(y.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::zpoly::ZPoly;

    fn c(v: i64) -> RFuncN {
        RFuncN::from_int(v)
    }

    #[test]
    fn dependence_and_nullspace() {
        let n = RFuncN::var();
        let v0 = vec![c(1), n.clone()];
        let v1 = vec![n.clone(), c(0)];
        let v2 = vec![&v0[0] + &v1[0], &v0[1] + &v1[1]];
        let dep = first_dependence(&[v0.clone(), v1.clone(), v2.clone()]).unwrap();
        assert_eq!(dep, vec![c(-1), c(-1), c(1)]);
        let mut f = DependenceFinder::new();
        assert!(f.push(&v0).is_none());
        assert!(f.push(&v1).is_none());
        assert_eq!(f.push(&v2).unwrap(), dep);
        let m = vec![vec![c(1), c(2)], vec![c(2), c(4)]];
        let ns = nullspace(&m, 2);
        assert_eq!(ns, vec![vec![c(-2), c(1)]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let n = RFuncN::from_poly(ZPoly::from_i64s(&[1, 1]));
        let a = vec![vec![n.clone(), c(1)], vec![c(1), c(0)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert_eq!(solve(&a, &[c(1), c(2)]).unwrap(), vec![c(2), &c(1) - &(&n * &c(2))]);
    }
}
