//! Arithmetic and elimination over a prime field `F_p` with `p < 2^32`.

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 2_147_483_647;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not a prime below 2^32")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(a != 0, "zero has no inverse");
        let (mut base, mut exp, mut acc) = (a, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in `(-p/2, p/2]`, for display.
    pub fn to_i64(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `dst -= c * src`.
    #[inline]
    fn axpy(self, dst: &mut [u64], c: u64, src: &[u64]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = self.sub(*d, self.mul(c, s));
            }
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Row echelon basis grown one vector at a time; rows are normalized at their pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(field: PrimeField) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is outside the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let f = self.field;
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = w[*pivot];
            if c != 0 {
                f.axpy(&mut w, c, row);
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let inv = f.inv(w[pivot]);
                for x in w.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                self.rows.push((pivot, w));
                true
            }
        }
    }
}

pub fn rank(field: PrimeField, vectors: &[&[u64]]) -> usize {
    let mut e = Echelon::new(field);
    vectors.iter().filter(|v| e.insert(v)).count()
}

/// Basis of `{λ : Σ λ_i v_i = 0}` for the given vectors.
pub fn kernel(field: PrimeField, vectors: &[&[u64]]) -> Vec<Vec<u64>> {
    let m = vectors.len();
    if m == 0 {
        return Vec::new();
    }
    let dim = vectors[0].len();
    // Rows are coordinates, columns are the vectors.
    let mut a: Vec<Vec<u64>> = (0..dim).map(|r| vectors.iter().map(|v| v[r]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(pr) = (row..dim).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = field.inv(a[row][col]);
        for x in a[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r != row && other[col] != 0 {
                let c = other[col];
                field.axpy(other, c, &pivot_row);
            }
        }
        pivots.push(col);
        row += 1;
        if row == dim {
            break;
        }
    }
    let mut is_pivot = vec![false; m];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..m)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut lambda = vec![0u64; m];
            lambda[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                lambda[pc] = field.neg(a[r][free]);
            }
            lambda
        })
        .collect()
}

/// `Σ λ_i v_i`.
pub fn combine(field: PrimeField, lambda: &[u64], vectors: &[&[u64]]) -> Vec<u64> {
    let dim = vectors.first().map_or(0, |v| v.len());
    let mut out = vec![0u64; dim];
    for (&c, v) in lambda.iter().zip(vectors) {
        for (o, &x) in out.iter_mut().zip(v.iter()) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}
