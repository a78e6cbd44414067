//! Coordinate-format accumulation and compressed sparse row storage.

/// Unsorted `(row, col, value)` contributions of a square matrix.
///
/// Duplicates are summed on compression, in insertion order, so two identical
/// assembly passes produce bit-identical matrices.
#[derive(Clone, Debug, Default)]
pub struct Triplets {
    n: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl Triplets {
    pub fn new(n: usize) -> Self {
        assert!(n < u32::MAX as usize, "matrix dimension too large");
        Triplets { n, ..Default::default() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    #[inline]
    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.rows.push(row as u32);
        self.cols.push(col as u32);
        self.vals.push(val);
    }

    pub fn extend(&mut self, other: &Triplets) {
        assert_eq!(self.n, other.n);
        self.rows.extend_from_slice(&other.rows);
        self.cols.extend_from_slice(&other.cols);
        self.vals.extend_from_slice(&other.vals);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.len()).map(|k| (self.rows[k] as usize, self.cols[k] as usize, self.vals[k]))
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let n = self.n;
        let mut count = vec![0usize; n + 1];
        for &r in &self.rows {
            count[r as usize + 1] += 1;
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        // Stable bucket by row.
        let mut order = vec![0u32; self.len()];
        let mut next = count.clone();
        for (k, &r) in self.rows.iter().enumerate() {
            order[next[r as usize]] = k as u32;
            next[r as usize] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(self.len() / 2);
        let mut values = Vec::with_capacity(self.len() / 2);
        row_ptr.push(0);
        let mut scratch: Vec<u32> = Vec::new();
        for i in 0..n {
            scratch.clear();
            scratch.extend_from_slice(&order[count[i]..count[i + 1]]);
            scratch.sort_by_key(|&k| self.cols[k as usize]);
            let mut last: Option<u32> = None;
            for &k in &scratch {
                let c = self.cols[k as usize];
                let v = self.vals[k as usize];
                if last == Some(c) {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c as usize);
                    values.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }
}

/// Square sparse matrix with sorted, unique column indices per row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    pub fn identity(n: usize) -> Self {
        CsrMatrix { n, row_ptr: (0..=n).collect(), col_idx: (0..n).collect(), values: vec![1.0; n] }
    }

    pub fn from_dense(a: &[Vec<f64>]) -> Self {
        let mut t = Triplets::new(a.len());
        for (i, row) in a.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    t.push(i, j, v);
                }
            }
        }
        t.to_csr()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        a
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n).map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>()).sum()
    }

    /// True when the pattern of `A` equals the pattern of `A^T`.
    pub fn is_structurally_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i).all(|(j, _)| {
                let r = self.row_ptr[j]..self.row_ptr[j + 1];
                self.col_idx[r].binary_search(&i).is_ok()
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_summed_and_sorted() {
        let mut t = Triplets::new(3);
        t.push(1, 2, 1.0);
        t.push(1, 0, 2.0);
        t.push(1, 2, 0.5);
        t.push(0, 0, 4.0);
        let a = t.to_csr();
        assert_eq!(a.row_ptr, vec![0, 1, 3, 3]);
        assert_eq!(a.col_idx, vec![0, 0, 2]);
        assert_eq!(a.values, vec![4.0, 2.0, 1.5]);
        assert_eq!(a.get(1, 2), 1.5);
        assert_eq!(a.get(2, 2), 0.0);
        assert_eq!(a.matvec(&[1.0, 1.0, 2.0]), vec![4.0, 5.0, 0.0]);
    }

    #[test]
    fn dense_roundtrip() {
        let d = vec![vec![1.0, 0.0, 2.0], vec![0.0, 0.0, 3.0], vec![2.0, 3.0, 0.0]];
        let a = CsrMatrix::from_dense(&d);
        assert_eq!(a.to_dense(), d);
        assert!(a.is_structurally_symmetric());
        assert_eq!(a.max_abs(), 3.0);
    }
}
