//! Row-style Hermite normal form by exact integer elimination.
//!
//! Rows start sparse and switch to dense storage once the active block gets
//! too full (see [`EliminationConfig::dense_threshold`]).

use super::matrix::{sparse_get, sparsify, IntMatrix, SparseRow};
use super::Scalar;

#[derive(Clone, Copy, Debug)]
pub struct EliminationConfig {
    /// Fraction of nonzeros in the active block above which rows go dense.
    pub dense_threshold: f64,
}

impl Default for EliminationConfig {
    fn default() -> Self {
        EliminationConfig { dense_threshold: 0.3 }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Row<T> {
    Sparse(SparseRow<T>),
    Dense(Vec<T>),
}

impl<T: Scalar> Row<T> {
    fn get(&self, c: usize) -> T {
        match self {
            Row::Sparse(r) => sparse_get(r, c),
            Row::Dense(r) => r[c].clone(),
        }
    }

    fn nnz(&self) -> usize {
        match self {
            Row::Sparse(r) => r.len(),
            Row::Dense(r) => r.iter().filter(|v| !v.is_zero()).count(),
        }
    }

    fn negate(&mut self) {
        match self {
            Row::Sparse(r) => r.iter_mut().for_each(|(_, v)| *v = -v.clone()),
            Row::Dense(r) => r.iter_mut().for_each(|v| *v = -v.clone()),
        }
    }

    fn densify(&mut self, width: usize) {
        if let Row::Sparse(r) = self {
            let mut d = vec![T::zero(); width];
            for (c, v) in r.drain(..) {
                d[c] = v;
            }
            *self = Row::Dense(d);
        }
    }

    pub(crate) fn into_sparse(self) -> SparseRow<T> {
        match self {
            Row::Sparse(r) => r,
            Row::Dense(d) => sparsify(&d),
        }
    }

    /// `self -= q * other`.
    fn sub_mul(&mut self, q: &T, other: &Row<T>, width: usize) {
        if q.is_zero() {
            return;
        }
        if let (Row::Sparse(_), Row::Dense(_)) = (&*self, other) {
            self.densify(width);
        }
        match (self, other) {
            (Row::Dense(a), Row::Dense(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x = x.clone() - q.clone() * y.clone();
                    }
                }
            }
            (Row::Dense(a), Row::Sparse(b)) => {
                for (c, y) in b {
                    a[*c] = a[*c].clone() - q.clone() * y.clone();
                }
            }
            (Row::Sparse(a), Row::Sparse(b)) => {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let mut ia = std::mem::take(a).into_iter().peekable();
                let mut ib = b.iter().peekable();
                loop {
                    match (ia.peek(), ib.peek()) {
                        (Some((ca, _)), Some((cb, _))) if ca < cb => out.push(ia.next().unwrap()),
                        (Some((ca, _)), Some((cb, _))) if ca > cb => {
                            let (c, y) = ib.next().unwrap();
                            out.push((*c, -(q.clone() * y.clone())));
                        }
                        (Some(_), Some(_)) => {
                            let (c, x) = ia.next().unwrap();
                            let (_, y) = ib.next().unwrap();
                            let v = x - q.clone() * y.clone();
                            if !v.is_zero() {
                                out.push((c, v));
                            }
                        }
                        (Some(_), None) => out.push(ia.next().unwrap()),
                        (None, Some(_)) => {
                            let (c, y) = ib.next().unwrap();
                            out.push((*c, -(q.clone() * y.clone())));
                        }
                        (None, None) => break,
                    }
                }
                *a = out;
            }
            (Row::Sparse(_), Row::Dense(_)) => unreachable!("densified above"),
        }
    }
}

/// Result of [`hnf_with`].
#[derive(Clone, Debug)]
pub struct Hnf<T> {
    /// Hermite form: nonzero rows first, positive pivots in strictly
    /// increasing columns, entries above each pivot reduced into `[0, pivot)`.
    pub h: IntMatrix<T>,
    /// Unimodular transform with `u · m = h`, when requested.
    pub u: Option<IntMatrix<T>>,
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Hermite normal form `H` and unimodular `U` with `U·M = H`.
pub fn hnf<T: Scalar>(m: &IntMatrix<T>) -> (IntMatrix<T>, IntMatrix<T>) {
    let r = hnf_with(m, true, EliminationConfig::default());
    (r.h, r.u.expect("transform requested"))
}

pub fn hnf_with<T: Scalar>(m: &IntMatrix<T>, want_u: bool, cfg: EliminationConfig) -> Hnf<T> {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut rows: Vec<Row<T>> = m.clone().into_rows().into_iter().map(Row::Sparse).collect();
    let mut urows: Option<Vec<Row<T>>> = want_u.then(|| (0..nr).map(|i| Row::Sparse(vec![(i, T::one())])).collect());
    let mut dense = false;
    let mut u_dense = false;
    let mut pr = 0;
    let mut pivots = Vec::new();

    for col in 0..nc {
        if pr == nr {
            break;
        }
        // Euclid on the column: repeatedly pivot on the smallest entry.
        let found = loop {
            let mut best: Option<(usize, T, usize)> = None;
            let mut count = 0;
            for (i, row) in rows.iter().enumerate().skip(pr) {
                let v = row.get(col);
                if v.is_zero() {
                    continue;
                }
                count += 1;
                let key = (v.abs(), row.nnz());
                let better = match &best {
                    None => true,
                    Some((_, a, n)) => key.0 < *a || (key.0 == *a && key.1 < *n),
                };
                if better {
                    best = Some((i, key.0, key.1));
                }
            }
            let Some((bi, _, _)) = best else { break false };
            rows.swap(pr, bi);
            if let Some(u) = urows.as_mut() {
                u.swap(pr, bi);
            }
            if count == 1 {
                break true;
            }
            let p = rows[pr].get(col);
            let (head, tail) = rows.split_at_mut(pr + 1);
            let prow = &head[pr];
            for (k, row) in tail.iter_mut().enumerate() {
                let v = row.get(col);
                if v.is_zero() {
                    continue;
                }
                let q = v / p.clone();
                row.sub_mul(&q, prow, nc);
                if let Some(u) = urows.as_mut() {
                    let (uh, ut) = u.split_at_mut(pr + 1);
                    ut[k].sub_mul(&q, &uh[pr], nr);
                }
            }
        };
        if !found {
            continue;
        }
        if rows[pr].get(col).is_negative() {
            rows[pr].negate();
            if let Some(u) = urows.as_mut() {
                u[pr].negate();
            }
        }
        let p = rows[pr].get(col);
        let (head, tail) = rows.split_at_mut(pr);
        let prow = &tail[0];
        for (i, row) in head.iter_mut().enumerate() {
            let v = row.get(col);
            if v.is_zero() {
                continue;
            }
            let q = v.div_floor(&p);
            if q.is_zero() {
                continue;
            }
            row.sub_mul(&q, prow, nc);
            if let Some(u) = urows.as_mut() {
                let (uh, ut) = u.split_at_mut(pr);
                uh[i].sub_mul(&q, &ut[0], nr);
            }
        }
        pivots.push(col);
        pr += 1;

        if !dense {
            let active: usize = rows[pr..].iter().map(Row::nnz).sum();
            let area = (nr - pr) * (nc - col - 1);
            if area > 0 && active as f64 > cfg.dense_threshold * area as f64 {
                rows.iter_mut().for_each(|r| r.densify(nc));
                dense = true;
            }
        }
        if let (false, Some(u)) = (u_dense, urows.as_mut()) {
            let total: usize = u.iter().map(Row::nnz).sum();
            if nr > 0 && total as f64 > cfg.dense_threshold * (nr * nr) as f64 {
                u.iter_mut().for_each(|r| r.densify(nr));
                u_dense = true;
            }
        }
    }

    let mut h = IntMatrix::zeros(0, nc);
    for r in rows {
        h.push_sparse_row(r.into_sparse());
    }
    let u = urows.map(|u| {
        let mut out = IntMatrix::zeros(0, nr);
        for r in u {
            out.push_sparse_row(r.into_sparse());
        }
        out
    });
    Hnf { h, u, rank: pr, pivots }
}
