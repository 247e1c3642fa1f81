use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write;

/// Which construction produced a matrix, with its parameters as text.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(construction: &str) -> Self {
        Provenance {
            construction: construction.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }
}

/// An `n x n` complex matrix standing for a compact operator, with a
/// Hilbert-Schmidt estimate of what the truncation dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedOperator {
    pub n: usize,
    /// Row-major; each entry serializes as `[re, im]`.
    pub entries: Vec<Complex64>,
    pub provenance: Provenance,
    pub tail_estimate: f64,
    /// Trailing rows that are identically zero after underflow.
    pub underflow_rows: usize,
    /// Low-order parts: when present, entry `k` is `entries[k] + lo[k]` to
    /// about 32 digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<Vec<Complex64>>,
}

impl TruncatedOperator {
    pub fn from_fn(n: usize, provenance: Provenance, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        let mut t = TruncatedOperator {
            n,
            entries,
            provenance,
            tail_estimate: 0.0,
            underflow_rows: 0,
            lo: None,
        };
        t.underflow_rows = t.count_underflow_rows();
        t
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn count_underflow_rows(&self) -> usize {
        (0..self.n)
            .rev()
            .take_while(|&i| self.row(i).iter().all(|z| z.re == 0.0 && z.im == 0.0))
            .count()
    }

    /// More than the trailing ten rows vanished in binary64.
    pub fn underflow_flagged(&self) -> bool {
        self.underflow_rows > 10
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                m = m.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        m
    }

    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Top-left `m x m` block.
    pub fn leading_block(&self, m: usize) -> TruncatedOperator {
        let m = m.min(self.n);
        let mut t = TruncatedOperator::from_fn(m, self.provenance.clone(), |i, j| self.get(i, j));
        t.provenance.params.insert("block".into(), m.to_string());
        t
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// One line per entry: `row,col,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,re,im\n");
        for i in 0..self.n {
            for j in 0..self.n {
                let z = self.get(i, j);
                let _ = writeln!(s, "{i},{j},{:e},{:e}", z.re, z.im);
            }
        }
        s
    }
}
