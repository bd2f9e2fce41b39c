//! Sparse Gauss–Jordan elimination, generic over the arithmetic mode.
//!
//! Exact mode pivots on the sparsest candidate row to limit fill-in; float
//! mode pivots on the largest magnitude.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major sparse matrix; rows hold `(column, value)` sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<S> {
    ncols: usize,
    rows: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new() }
    }

    pub fn from_dense(ncols: usize, dense: &[Vec<S>]) -> Self {
        let mut m = Self::new(ncols);
        for r in dense {
            m.push_row(r.iter().cloned().enumerate().collect());
        }
        m
    }

    /// Appends a row given as `(column, value)` entries in any order;
    /// duplicate columns are summed and zeros dropped.
    pub fn push_row(&mut self, mut entries: Vec<(usize, S)>) {
        entries.sort_by_key(|e| e.0);
        let mut row: Vec<(usize, S)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, S)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, S)>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = S::zero();
                for (c, v) in row {
                    acc.add_mul_assign(v, &x[*c]);
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![S::zero(); self.ncols];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|e| e.1.to_f64().abs()))
            .fold(0.0, f64::max)
    }
}

/// Reduced row echelon form of `[A | B]`.
#[derive(Debug, Clone)]
pub struct Reduced<S> {
    ncols: usize,
    nrhs: usize,
    /// `(pivot column, row)`, the row normalised to a unit pivot.
    pivots: Vec<(usize, Vec<(usize, S)>)>,
    /// Rows whose coefficient part vanished; only RHS entries remain.
    residual: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> Reduced<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p.0).collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.residual.iter().all(Vec::is_empty)
    }

    /// Basis of the kernel of `A`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut is_pivot = vec![false; self.ncols];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !is_pivot[*c]) {
            let mut x = vec![S::zero(); self.ncols];
            x[free] = S::one();
            for (pc, row) in &self.pivots {
                if let Ok(pos) = row.binary_search_by_key(&free, |e| e.0) {
                    x[*pc] = -row[pos].1.clone();
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Unique solution per RHS column, as `x[unknown][rhs]`.
    pub fn solution(&self) -> Result<Vec<Vec<S>>> {
        if !self.is_consistent() {
            return Err(Error::Inconsistent);
        }
        if self.rank() < self.ncols {
            return Err(Error::RankDeficient {
                rank: self.rank(),
                unknowns: self.ncols,
            });
        }
        let mut x = vec![vec![S::zero(); self.nrhs]; self.ncols];
        for (pc, row) in &self.pivots {
            for (c, v) in row.iter().filter(|e| e.0 >= self.ncols) {
                x[*pc][c - self.ncols] = v.clone();
            }
        }
        Ok(x)
    }
}

/// `target -= f * source`, both sorted sparse rows.
fn axpy_row<S: Scalar>(target: &[(usize, S)], f: &S, source: &[(usize, S)], tol: Option<f64>) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let ca = target.get(a).map_or(usize::MAX, |e| e.0);
        let cb = source.get(b).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(target[a].clone());
            a += 1;
        } else if cb < ca {
            out.push((cb, -(f.clone() * source[b].1.clone())));
            b += 1;
        } else {
            let mut v = target[a].1.clone();
            v.sub_mul_assign(f, &source[b].1);
            let keep = match tol {
                None => !v.is_zero(),
                Some(t) => v.to_f64().abs() > t,
            };
            if keep {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

/// Gauss–Jordan reduction of `[A | B]`; `rhs` has one row per row of `A`.
pub fn reduce<S: Scalar>(a: &SparseMatrix<S>, rhs: Option<&SparseMatrix<S>>) -> Reduced<S> {
    let ncols = a.ncols;
    let nrhs = rhs.map_or(0, |b| b.ncols);
    if let Some(b) = rhs {
        assert_eq!(b.nrows(), a.nrows(), "rhs row count");
    }
    let mut rows: Vec<Vec<(usize, S)>> = a
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            if let Some(b) = rhs {
                row.extend(b.rows[i].iter().map(|(c, v)| (c + ncols, v.clone())));
            }
            row
        })
        .collect();
    let tol = if S::EXACT {
        None
    } else {
        let scale = a.max_abs().max(rhs.map_or(0.0, SparseMatrix::max_abs));
        Some(1e-12 * scale.max(f64::MIN_POSITIVE) * (a.nrows().max(ncols) as f64).sqrt())
    };

    let mut active: Vec<usize> = (0..rows.len()).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..ncols {
        // candidate rows whose leading entry is in this column
        let mut best: Option<(usize, usize)> = None;
        for (slot, &r) in active.iter().enumerate() {
            let Some(first) = rows[r].first() else { continue };
            if first.0 != col {
                continue;
            }
            if let Some(t) = tol {
                if first.1.to_f64().abs() <= t {
                    continue;
                }
            }
            let better = match best {
                None => true,
                Some((_, br)) => {
                    if S::EXACT {
                        rows[r].len() < rows[br].len()
                    } else {
                        first.1.abs_val() > rows[br][0].1.abs_val()
                    }
                }
            };
            if better {
                best = Some((slot, r));
            }
        }
        let Some((slot, p)) = best else {
            // drop tiny leading entries in float mode so later columns can lead
            if tol.is_some() {
                for &r in &active {
                    if rows[r].first().is_some_and(|e| e.0 == col) {
                        rows[r].remove(0);
                    }
                }
            }
            continue;
        };
        active.swap_remove(slot);
        let inv = S::one() / rows[p][0].1.clone();
        for e in rows[p].iter_mut() {
            e.1 *= inv.clone();
        }
        rows[p][0].1 = S::one();
        let pivot_row = std::mem::take(&mut rows[p]);
        // eliminate `col` from every other row that still has it
        for r in 0..rows.len() {
            if r == p {
                continue;
            }
            let Ok(pos) = rows[r].binary_search_by_key(&col, |e| e.0) else {
                continue;
            };
            let f = rows[r][pos].1.clone();
            rows[r] = axpy_row(&rows[r], &f, &pivot_row, tol);
            if let Some(t) = tol {
                rows[r].retain(|e| e.0 != col && e.1.to_f64().abs() > t * 1e-3);
            }
        }
        rows[p] = pivot_row;
        pivots.push((col, p));
    }

    let residual = active
        .iter()
        .map(|&r| {
            let mut row = std::mem::take(&mut rows[r]);
            row.retain(|e| e.0 >= ncols);
            if let Some(t) = tol {
                row.retain(|e| e.1.to_f64().abs() > t);
            }
            row
        })
        .collect();
    let pivots = pivots.into_iter().map(|(c, r)| (c, std::mem::take(&mut rows[r]))).collect();
    Reduced {
        ncols,
        nrhs,
        pivots,
        residual,
    }
}

pub fn rank<S: Scalar>(a: &SparseMatrix<S>) -> usize {
    reduce(a, None).rank()
}

pub fn nullity<S: Scalar>(a: &SparseMatrix<S>) -> usize {
    reduce(a, None).nullity()
}

pub fn nullspace<S: Scalar>(a: &SparseMatrix<S>) -> Vec<Vec<S>> {
    reduce(a, None).nullspace()
}

/// Unique solution of `A x = b`.
pub fn solve<S: Scalar>(a: &SparseMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if b.len() != a.nrows() {
        return Err(Error::LengthMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    let mut rhs = SparseMatrix::new(1);
    for v in b {
        rhs.push_row(vec![(0, v.clone())]);
    }
    let x = reduce(a, Some(&rhs)).solution()?;
    Ok(x.into_iter().map(|mut col| col.remove(0)).collect())
}
