use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{AbGroupError, Scalar};

/// Format tag written into every serialized matrix.
pub const MATRIX_FORMAT: &str = "wtc-matrix/1";

pub(crate) type SparseRow<T> = Vec<(usize, T)>;

/// Exact integer matrix with sparse row storage.
///
/// Rows hold `(column, value)` pairs sorted by column with no explicit zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<T>>,
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, T::one())]).collect();
        IntMatrix { rows: n, cols: n, data }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        Self::from_dense_cols(rows.first().map_or(0, Vec::len), rows)
    }

    /// Like [`IntMatrix::from_dense`] with an explicit width, so an empty
    /// row list still has the right shape.
    pub fn from_dense_cols(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged input");
            m.data[i] = sparsify(r);
        }
        m
    }

    /// Builds from `i64` entries; convenient for literals.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<T>> =
            rows.iter().map(|r| r.iter().map(|&v| T::from_i64(v).expect("entry fits scalar")).collect()).collect();
        Self::from_dense(&conv)
    }

    /// Builds from sparse rows; entries are summed per column and zeros dropped.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, T)>>) -> Result<Self, AbGroupError> {
        let mut data = Vec::with_capacity(rows.len());
        for mut r in rows {
            r.sort_by_key(|(c, _)| *c);
            let mut out: SparseRow<T> = Vec::with_capacity(r.len());
            for (c, v) in r {
                if c >= cols {
                    return Err(AbGroupError::IndexOutOfRange { index: c, len: cols });
                }
                match out.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = lv.clone() + v,
                    _ => out.push((c, v)),
                }
            }
            out.retain(|(_, v)| !v.is_zero());
            data.push(out);
        }
        Ok(IntMatrix { rows: data.len(), cols, data })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        sparse_get(&self.data[r], c)
    }

    pub fn row(&self, r: usize) -> &[(usize, T)] {
        &self.data[r]
    }

    pub fn dense_row(&self, r: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        for (c, v) in &self.data[r] {
            out[*c] = v.clone();
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.dense_row(r)).collect()
    }

    pub fn push_row(&mut self, row: &[T]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.push(sparsify(row));
        self.rows += 1;
    }

    pub(crate) fn push_sparse_row(&mut self, row: SparseRow<T>) {
        debug_assert!(row.iter().all(|(c, v)| *c < self.cols && !v.is_zero()));
        self.data.push(row);
        self.rows += 1;
    }

    pub(crate) fn into_rows(self) -> Vec<SparseRow<T>> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow<T>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AbGroupError> {
        if self.cols != other.rows {
            return Err(AbGroupError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: Vec<T> = vec![T::zero(); other.cols];
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        acc[*c] = acc[*c].clone() + a.clone() * b.clone();
                    }
                }
                sparsify(&acc)
            })
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: other.cols, data })
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, x: &[T]) -> Result<Vec<T>, AbGroupError> {
        if x.len() != self.rows {
            return Err(AbGroupError::DimensionMismatch { expected: self.rows, found: x.len() });
        }
        let mut acc = vec![T::zero(); self.cols];
        for (xi, row) in x.iter().zip(&self.data) {
            if xi.is_zero() {
                continue;
            }
            for (c, v) in row {
                acc[*c] = acc[*c].clone() + xi.clone() * v.clone();
            }
        }
        Ok(acc)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, AbGroupError> {
        if self.cols != other.cols {
            return Err(AbGroupError::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn scaled(&self, k: &T) -> Self {
        let mut out = IntMatrix::zeros(0, self.cols);
        for row in &self.data {
            out.push_sparse_row(
                row.iter().map(|(c, v)| (*c, v.clone() * k.clone())).filter(|(_, v)| !v.is_zero()).collect(),
            );
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.data.iter().enumerate().all(|(r, row)| row.iter().all(|(c, _)| *c == r))
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> Result<T, AbGroupError> {
        if self.rows != self.cols {
            return Err(AbGroupError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.to_dense();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(T::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = v / prev.clone();
                }
                a[i][k] = T::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(if n == 0 { T::one() } else { sign * a[n - 1][n - 1].clone() })
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Row-major entries as decimal strings, for content hashing.
    pub(crate) fn content_string(&self) -> String {
        let mut s = format!("{}x{}:", self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                s.push_str(&format!("{r},{c},{v};"));
            }
        }
        s
    }
}

pub(crate) fn sparse_get<T: Scalar>(row: &[(usize, T)], c: usize) -> T {
    match row.binary_search_by_key(&c, |(k, _)| *k) {
        Ok(i) => row[i].1.clone(),
        Err(_) => T::zero(),
    }
}

pub(crate) fn sparsify<T: Scalar>(row: &[T]) -> SparseRow<T> {
    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect()
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} {:?}", self.rows, self.cols, self.data)
    }
}

impl<T: Scalar> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Integer written as a JSON number when it fits in `i64`, as a decimal
/// string otherwise.
pub(crate) fn scalar_to_json<T: Scalar>(v: &T) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

pub(crate) fn scalar_from_json<T: Scalar>(v: &serde_json::Value) -> Result<T, String> {
    match v {
        serde_json::Value::Number(n) => {
            n.as_i64().and_then(T::from_i64).ok_or_else(|| format!("integer {n} not representable"))
        }
        serde_json::Value::String(s) => T::from_str_radix(s, 10).map_err(|_| format!("bad integer string {s:?}")),
        other => Err(format!("expected integer, found {other}")),
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    format: String,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, serde_json::Value)>,
}

impl<T: Scalar> Serialize for IntMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut entries = Vec::with_capacity(self.nnz());
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                entries.push((r, *c, scalar_to_json(v)));
            }
        }
        MatrixDoc { format: MATRIX_FORMAT.into(), rows: self.rows, cols: self.cols, entries }.serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for IntMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        if doc.format != MATRIX_FORMAT {
            return Err(de::Error::custom(format!("unsupported matrix format {:?}", doc.format)));
        }
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); doc.rows];
        for (r, c, v) in doc.entries {
            if r >= doc.rows {
                return Err(de::Error::custom(format!("row {r} out of range")));
            }
            rows[r].push((c, scalar_from_json(&v).map_err(de::Error::custom)?));
        }
        IntMatrix::from_sparse_rows(doc.cols, rows).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn determinant_and_products() {
        let a = IntMatrix::<i64>::from_i64(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(a.determinant().unwrap(), -2);
        let b = IntMatrix::<i64>::from_i64(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        assert_eq!(b.determinant().unwrap(), 5);
        let p = a.mul(&IntMatrix::identity(2)).unwrap();
        assert_eq!(p, a);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 3], vec![2, 4]]);
        assert_eq!(a.left_mul_vec(&[1, 1]).unwrap(), vec![4, 6]);
        assert!(IntMatrix::<i64>::identity(3).is_unimodular());
    }

    #[test]
    fn json_round_trip_with_big_entries() {
        let big: BigInt = BigInt::from(i64::MAX) * 7;
        let m = IntMatrix::from_dense(&[vec![BigInt::from(0), big.clone()], vec![BigInt::from(-3), BigInt::from(0)]]);
        let js = serde_json::to_value(&m).unwrap();
        assert_eq!(js["format"], MATRIX_FORMAT);
        assert_eq!(js["entries"][1], serde_json::json!([1, 0, -3]));
        let back: IntMatrix<BigInt> = serde_json::from_value(js).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn sparse_rows_merge_duplicates() {
        let m = IntMatrix::<i64>::from_sparse_rows(3, vec![vec![(2, 1), (0, 2), (2, -1)]]).unwrap();
        assert_eq!(m.row(0), &[(0, 2)]);
        assert!(IntMatrix::<i64>::from_sparse_rows(2, vec![vec![(2, 1)]]).is_err());
    }
}
