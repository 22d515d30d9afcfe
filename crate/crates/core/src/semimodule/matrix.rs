use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{decode_radix, GammaSemiring};
use crate::caps::{pow_sat, Caps, ModuleMode};
use crate::{Error, Result};

/// A rows×cols matrix of T-indices, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Structure(format!(
                "{rows}×{cols} matrix given {} entries",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(s: &GammaSemiring, k: usize) -> Result<Self> {
        let (one, _) = s.require_unital_binary()?;
        let mut m = Matrix::zero(k, k);
        for i in 0..k {
            m.entries[i * k + i] = one;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> usize {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: usize) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn check_entries(&self, s: &GammaSemiring) -> Result<()> {
        match self.entries.iter().find(|&&x| x >= s.card()) {
            Some(x) => Err(Error::Structure(format!(
                "matrix entry {x} out of range for `{}`",
                s.name()
            ))),
            None => Ok(()),
        }
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut m = Matrix::zero(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// Applies an entrywise map, e.g. a homomorphism's `f_t`.
    pub fn map_entries(&self, f: impl Fn(usize) -> usize) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| f(x)).collect(),
        }
    }
}

/// `(A∘B)_ij = Σ_l μ(a_il, δ, b_lj)`
pub fn mat_mul(s: &GammaSemiring, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let (_, delta) = s.require_unital_binary()?;
    if a.cols != b.rows {
        return Err(Error::Mismatch(format!(
            "cannot multiply {}×{} by {}×{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(mul_with(s, delta, a, b))
}

pub(crate) fn mul_with(s: &GammaSemiring, delta: usize, a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zero(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = 0;
            for l in 0..a.cols {
                acc = s.add(acc, s.mul(a.get(i, l), delta, b.get(l, j)));
            }
            out.entries[i * b.cols + j] = acc;
        }
    }
    out
}

/// `a∘x` for a column vector x.
pub(crate) fn mat_vec(s: &GammaSemiring, delta: usize, a: &Matrix, x: &[usize], out: &mut [usize]) {
    for i in 0..a.rows {
        let mut acc = 0;
        for l in 0..a.cols {
            acc = s.add(acc, s.mul(a.get(i, l), delta, x[l]));
        }
        out[i] = acc;
    }
}

/// A square matrix with `e∘e = e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdempotentMatrix(Matrix);

impl IdempotentMatrix {
    pub fn new(s: &GammaSemiring, m: Matrix) -> Result<Self> {
        m.check_entries(s)?;
        if m.rows != m.cols {
            return Err(Error::Structure(format!("{}×{} matrix is not square", m.rows, m.cols)));
        }
        if mat_mul(s, &m, &m)? != m {
            return Err(Error::Structure("matrix is not idempotent".into()));
        }
        Ok(IdempotentMatrix(m))
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn block_diag(&self, other: &IdempotentMatrix) -> IdempotentMatrix {
        IdempotentMatrix(self.0.block_diag(&other.0))
    }
}

/// Whether `x ↦ m∘x` commutes with the left action `t γ x` on `T^k`.
pub fn is_left_equivariant(s: &GammaSemiring, m: &Matrix) -> Result<bool> {
    let (_, delta) = s.require_unital_binary()?;
    let k = m.cols;
    let mut x = vec![0; k];
    let mut lhs = vec![0; m.rows];
    let mut img = vec![0; m.rows];
    let mut tx = vec![0; k];
    // both sides are additive in x, so single-entry vectors suffice
    for l in 0..k {
        for v in 1..s.card() {
            x.iter_mut().for_each(|e| *e = 0);
            x[l] = v;
            mat_vec(s, delta, m, &x, &mut img);
            for g in 0..s.gamma_card() {
                for t in 0..s.card() {
                    for i in 0..k {
                        tx[i] = s.mul(t, g, x[i]);
                    }
                    mat_vec(s, delta, m, &tx, &mut lhs);
                    if (0..m.rows).any(|i| lhs[i] != s.mul(t, g, img[i])) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Every k×k idempotent in lexicographic order of entries. In strict mode
/// only left-equivariant ones are kept.
pub fn enumerate_idempotents(
    s: &GammaSemiring,
    k: usize,
    caps: &Caps,
    mode: ModuleMode,
) -> Result<Vec<IdempotentMatrix>> {
    let (_, delta) = s.require_unital_binary()?;
    let nt = s.card();
    let space = pow_sat(nt, k * k);
    let mut found = Vec::new();
    let limit = space.min(caps.budget);
    let mut entries = vec![0; k * k];
    for i in 0..limit as usize {
        decode_radix(i, nt, k * k, &mut entries);
        let m = Matrix {
            rows: k,
            cols: k,
            entries: entries.clone(),
        };
        if mul_with(s, delta, &m, &m) == m {
            if mode == ModuleMode::StrictBimodule && !is_left_equivariant(s, &m)? {
                continue;
            }
            found.push(IdempotentMatrix(m));
        }
    }
    if space > caps.budget {
        return Err(Error::BudgetExhausted {
            what: "idempotent enumeration",
            limit: caps.budget,
            found: found.len(),
        });
    }
    Ok(found)
}
