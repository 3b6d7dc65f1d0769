//! Machine-word evaluation of integer polynomial maps modulo `m < 2⁶³`, and
//! the residue-space enumeration shared by the exhaustive scans.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, PolyMap};
use crate::scalar::{mul_mod, pow_mod};

/// Default cap on exhaustive evaluations.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `m^n`, failing when it exceeds `budget`.
pub fn require_budget(m: u64, n: usize, budget: u64) -> Result<u64> {
    let mut required: u128 = 1;
    for _ in 0..n {
        required = required.saturating_mul(m as u128);
    }
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(required as u64)
}

/// Decodes `index` into a point of `(ℤ/m)ⁿ`; the first coordinate is most significant.
pub fn decode_point(mut index: u64, m: u64, n: usize, out: &mut [u64]) {
    for slot in out[..n].iter_mut().rev() {
        *slot = index % m;
        index /= m;
    }
}

pub fn encode_point(point: &[u64], m: u64) -> u64 {
    point.iter().fold(0, |acc, &x| acc * m + x)
}

fn reduce_big(c: &BigInt, m: u64) -> u64 {
    let r = c % BigInt::from(m);
    let r = if r < BigInt::from(0) { r + BigInt::from(m) } else { r };
    r.to_u64().expect("reduced value fits")
}

/// A polynomial with coefficients reduced modulo `m`.
#[derive(Debug, Clone)]
pub struct ModPoly {
    modulus: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModPoly {
    pub fn new(p: &MultiPoly<BigInt>, modulus: u64) -> Self {
        assert!((1..1 << 63).contains(&modulus), "modulus out of machine range");
        let terms = p
            .terms()
            .map(|(mono, c)| (mono.exponents().to_vec(), reduce_big(c, modulus)))
            .filter(|(_, c)| *c != 0)
            .collect();
        Self { modulus, terms }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let m = self.modulus;
        let mut acc = 0u64;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (&xi, &e) in x.iter().zip(exps) {
                if e != 0 {
                    t = mul_mod(t, pow_mod(xi, e as u64, m), m);
                }
            }
            acc = (acc + t) % m;
        }
        acc
    }
}

/// A polynomial map with coefficients reduced modulo `m`.
#[derive(Debug, Clone)]
pub struct ModMap {
    modulus: u64,
    components: Vec<ModPoly>,
}

impl ModMap {
    pub fn new(f: &PolyMap<BigInt>, modulus: u64) -> Self {
        Self { modulus, components: f.components().iter().map(|c| ModPoly::new(c, modulus)).collect() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval_into(&self, x: &[u64], out: &mut [u64]) {
        for (o, c) in out.iter_mut().zip(&self.components) {
            *o = c.eval(x);
        }
    }

    pub fn eval(&self, x: &[u64]) -> Vec<u64> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

/// A nonzero `v` with `M·v ≡ 0 (mod p)`, or `None` when `M` is invertible mod `p`.
pub fn kernel_vector_mod_p(matrix: &[Vec<u64>], p: u64) -> Option<Vec<u64>> {
    let n = matrix.len();
    let mut a: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&v| v % p).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, r);
        let inv = pow_mod(a[row][col], p - 2, p);
        for v in a[row].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let factor = a[r][col];
                for c in 0..n {
                    let sub = mul_mod(factor, a[row][c], p);
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![0u64; n];
    v[free] = 1;
    for (r, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = (p - a[r][free]) % p;
    }
    Some(v)
}

/// Determinant of a small matrix modulo a prime `p`.
pub fn det_mod_p(matrix: &[Vec<u64>], p: u64) -> u64 {
    let n = matrix.len();
    let mut a: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&v| v % p).collect()).collect();
    let mut det = 1u64;
    for col in 0..n {
        let Some(r) = (col..n).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if r != col {
            a.swap(r, col);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[col][col], p);
        let inv = pow_mod(a[col][col], p - 2, p);
        for r in col + 1..n {
            if a[r][col] != 0 {
                let factor = mul_mod(a[r][col], inv, p);
                for c in col..n {
                    let sub = mul_mod(factor, a[col][c], p);
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
    }
    det
}
