use super::hnf::{hnf_with, EliminationConfig};
use super::matrix::IntMatrix;
use super::Scalar;

/// Result of [`snf_with`]: `u · m · v = d`.
#[derive(Clone, Debug)]
pub struct Snf<T> {
    pub d: IntMatrix<T>,
    pub u: Option<IntMatrix<T>>,
    pub v: Option<IntMatrix<T>>,
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<T>,
}

impl<T: Scalar> Snf<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Smith normal form `D` with unimodular `U`, `V` such that `U·M·V = D`.
pub fn snf<T: Scalar>(m: &IntMatrix<T>) -> (IntMatrix<T>, IntMatrix<T>, IntMatrix<T>) {
    let s = snf_with(m, true, true, EliminationConfig::default());
    (s.d, s.u.expect("requested"), s.v.expect("requested"))
}

/// Alternates row and column Hermite reductions until diagonal, then
/// repairs the divisibility chain with 2×2 gcd/lcm steps.
pub fn snf_with<T: Scalar>(m: &IntMatrix<T>, want_u: bool, want_v: bool, cfg: EliminationConfig) -> Snf<T> {
    let mut a = m.clone();
    let mut u = want_u.then(|| IntMatrix::identity(m.nrows()));
    let mut v = want_v.then(|| IntMatrix::identity(m.ncols()));
    loop {
        let h = hnf_with(&a, want_u, cfg);
        if let (Some(acc), Some(step)) = (u.as_mut(), h.u) {
            *acc = step.mul(acc).expect("square transform");
        }
        a = h.h;
        if a.is_diagonal() {
            break;
        }
        let ht = hnf_with(&a.transpose(), want_v, cfg);
        if let (Some(acc), Some(step)) = (v.as_mut(), ht.u) {
            *acc = acc.mul(&step.transpose()).expect("square transform");
        }
        a = ht.h.transpose();
        if a.is_diagonal() {
            break;
        }
    }

    let rank = (0..a.nrows().min(a.ncols())).take_while(|&i| !a.get(i, i).is_zero()).count();
    let mut diag: Vec<T> = (0..rank).map(|i| a.get(i, i)).collect();
    for (i, d) in diag.iter_mut().enumerate() {
        if d.is_negative() {
            *d = -d.clone();
            if let Some(u) = u.as_mut() {
                negate_row(u, i);
            }
        }
    }

    // Dense copies only when a repair is actually needed.
    let mut ud: Option<Vec<Vec<T>>> = None;
    let mut vt: Option<Vec<Vec<T>>> = None;
    for i in 0..rank {
        for j in i + 1..rank {
            if diag[j].is_multiple_of(&diag[i]) {
                continue;
            }
            let (di, dj) = (diag[i].clone(), diag[j].clone());
            let eg = di.extended_gcd(&dj);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (ai, bj) = (di.clone() / g.clone(), dj.clone() / g.clone());
            if let Some(u) = u.as_ref() {
                let rows = ud.get_or_insert_with(|| u.to_dense());
                let (ri, rj) = (rows[i].clone(), rows[j].clone());
                rows[i] = lin(&s, &ri, &t, &rj);
                rows[j] = lin(&(-bj.clone()), &ri, &ai, &rj);
            }
            if let Some(v) = v.as_ref() {
                let cols = vt.get_or_insert_with(|| v.transpose().to_dense());
                let (ci, cj) = (cols[i].clone(), cols[j].clone());
                cols[i] = lin(&T::one(), &ci, &T::one(), &cj);
                cols[j] = lin(&(-(t.clone() * bj.clone())), &ci, &(s.clone() * ai.clone()), &cj);
            }
            diag[i] = g.clone();
            diag[j] = di * dj / g;
        }
    }
    if let Some(rows) = ud {
        u = Some(IntMatrix::from_dense(&rows));
    }
    if let Some(cols) = vt {
        v = Some(IntMatrix::from_dense(&cols).transpose());
    }

    let mut d = IntMatrix::zeros(m.nrows(), m.ncols());
    let mut drows: Vec<Vec<(usize, T)>> = vec![Vec::new(); m.nrows()];
    for (i, x) in diag.iter().enumerate() {
        drows[i].push((i, x.clone()));
    }
    if m.nrows() > 0 {
        d = IntMatrix::from_sparse_rows(m.ncols(), drows).expect("in range");
    }
    Snf { d, u, v, diagonal: diag }
}

fn lin<T: Scalar>(a: &T, x: &[T], b: &T, y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(p, q)| a.clone() * p.clone() + b.clone() * q.clone()).collect()
}

fn negate_row<T: Scalar>(m: &mut IntMatrix<T>, i: usize) {
    let mut rows = m.to_dense();
    rows[i].iter_mut().for_each(|x| *x = -x.clone());
    *m = IntMatrix::from_dense(&rows);
}
