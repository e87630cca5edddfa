use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;

/// Square matrix of exact rationals, row-major. `BigRational` keeps every
/// entry in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zero(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![BigRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        RationalMatrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        RationalMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        RationalMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * &o.entries[k * n + j];
                }
            }
        }
        RationalMatrix { n, entries: out }
    }

    /// Lie bracket `XY - YX`.
    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }
}

impl From<&IntMatrix> for RationalMatrix {
    fn from(m: &IntMatrix) -> Self {
        RationalMatrix {
            n: m.dim(),
            entries: m
                .entries()
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        }
    }
}

impl RationalMatrix {
    /// Back to integers when every denominator is 1.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let ents: Option<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer()))
            .collect();
        IntMatrix::from_entries(self.n, ents?).ok()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|v| format!("\"{v}\"")).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
