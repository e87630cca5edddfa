use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`IntMatrix::char_poly`].
pub const CHAR_POLY_MAX_DIM: usize = 16;

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from rows, rejecting ragged or empty input.
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_entries(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_array<const N: usize>(rows: [[i64; N]; N]) -> Self {
        assert!(N > 0, "matrix dimension must be positive");
        IntMatrix {
            n: N,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    /// Companion matrix of a monic polynomial; its characteristic polynomial
    /// is the polynomial itself.
    pub fn companion(f: &IntPolynomial) -> Result<Self> {
        let n = f.degree().ok_or_else(|| Error::Invalid("zero polynomial".into()))?;
        if n == 0 || !f.is_monic() {
            return Err(Error::Invalid("companion matrix needs a monic polynomial of degree >= 1".into()));
        }
        let mut m = Self::zero(n);
        for i in 1..n {
            m.entries[i * n + (i - 1)] = BigInt::one();
        }
        for i in 0..n {
            m.entries[i * n + (n - 1)] = -f.coeff(i);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Entries as `i64` when they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .chunks(self.n)
            .map(|r| r.iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    pub fn mul_checked(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * &other.entries[k * n + j];
                }
            }
        }
        Ok(IntMatrix { n, entries: out })
    }

    pub fn add_checked(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(IntMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub_checked(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(IntMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut out = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        IntMatrix { n, entries: out }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[(n - 1) * n + (n - 1)]
    }

    /// Sum of squared entries.
    pub fn frobenius_norm_sq(&self) -> BigInt {
        self.entries.iter().map(|v| v * v).sum()
    }

    /// Characteristic polynomial `det(xI - M)` via the Faddeev–LeVerrier
    /// recurrence. Every division in the recurrence is exact over Z.
    pub fn char_poly(&self) -> Result<IntPolynomial> {
        let n = self.n;
        if n > CHAR_POLY_MAX_DIM {
            return Err(Error::DimensionLimit {
                dim: n,
                limit: CHAR_POLY_MAX_DIM,
            });
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        // aux = A * M_{k-1}; M_k = aux + c_{n-k+1} I
        let mut m_k = IntMatrix::zero(n);
        for k in 1..=n {
            let mut next = self * &m_k;
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            m_k = next;
            let t = (self * &m_k).trace();
            let (q, r) = t.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[n - k] = -q;
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// Inverse of a matrix with determinant ±1, via Cayley–Hamilton.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let n = self.n;
        if n == 2 {
            let d = self.det();
            if !d.abs().is_one() {
                return Err(Error::Determinant {
                    expected: "±1".into(),
                    actual: d.to_string(),
                });
            }
            let (a, b, c, dd) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
            let adj = IntMatrix {
                n,
                entries: vec![dd.clone(), -b, -c, a.clone()],
            };
            return Ok(adj.scale(&d));
        }
        let chi = self.char_poly()?;
        let c0 = chi.coeff(0);
        if !c0.abs().is_one() {
            return Err(Error::Determinant {
                expected: "±1".into(),
                actual: (if n.is_multiple_of(2) { c0.clone() } else { -c0 }).to_string(),
            });
        }
        // M^{-1} = -(1/c0) (M^{n-1} + c_{n-1} M^{n-2} + ... + c_1 I)
        let mut acc = IntMatrix::identity(n);
        for i in (1..n).rev() {
            acc = &(self * &acc) + &IntMatrix::identity(n).scale(&chi.coeff(i));
        }
        // after the loop acc = M^{n-1} + c_{n-1} M^{n-2} + ... + c_1 I
        Ok(acc.scale(&(-c0)))
    }

    /// Entrywise reduction into `[0, modulus)`.
    pub fn reduce_mod(&self, modulus: &BigInt) -> Result<IntMatrix> {
        if *modulus < BigInt::from(2) {
            return Err(Error::InvalidModulus(modulus.to_string()));
        }
        Ok(IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v.mod_floor(modulus)).collect(),
        })
    }
}

impl std::ops::Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.add_checked(rhs).expect("dimension mismatch")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.mul_checked(rhs).expect("dimension mismatch")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }
}

/// Exact product; errors on dimension mismatch.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    a.mul_checked(b)
}

pub fn frobenius_norm_sq(m: &IntMatrix) -> BigInt {
    m.frobenius_norm_sq()
}

pub fn char_poly(m: &IntMatrix) -> Result<IntPolynomial> {
    m.char_poly()
}

pub fn reduce_mod(m: &IntMatrix, modulus: u64) -> Result<IntMatrix> {
    m.reduce_mod(&BigInt::from(modulus))
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

// JSON form: array of rows of integers. Entries outside the i64 range are
// written as decimal strings; both forms are accepted on input.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for row in self.entries.chunks(self.n) {
            let row: Vec<JsonInt> = row.iter().map(JsonInt::from).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<JsonInt>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.0).collect())
            .collect();
        IntMatrix::new(rows).map_err(de::Error::custom)
    }
}

pub(crate) struct JsonInt(pub(crate) BigInt);

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        JsonInt(v.clone())
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|_| de::Error::custom(format!("not a decimal integer: {s:?}"))),
        }
    }
}
