//! Finite Γ-semirings given by explicit tables.
//!
//! A structure carries a commutative monoid `(T, +)` with zero at index 0, a
//! nonempty operator set Γ (optionally with its own commutative semigroup
//! law), and an n-ary external product
//! `μ(a₁, γ₁, a₂, …, γₙ₋₁, aₙ)` stored as a flat table keyed by
//! `(a₁, …, aₙ, γ₁, …, γₙ₋₁)` in mixed radix, `a₁` most significant.

mod builtin;
mod construct;
mod hom;
mod validate;

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::format;

use crate::{Error, Result};

pub use builtin::{make_builtin, BuiltinKind};
pub use construct::{matrix_entries, matrix_semiring, power, product, triangular_semiring};
pub use hom::{
    compose_homs, diagonal_inclusion, diagonal_projection, validate_hom, GammaHomomorphism,
    HomViolation,
};
pub use validate::{validate, Axiom, ValidationReport, Violation};

/// The designated unit pair `(1, δ)`: `μ(1, x; δ) = μ(x, 1; δ) = x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub one: usize,
    pub delta: Vec<usize>,
}

/// How a structure was produced. Derived constructions remember their
/// inputs so the diagonal maps can be rebuilt from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Table,
    Builtin(BuiltinKind),
    Product(Arc<GammaSemiring>, Arc<GammaSemiring>),
    Matrix { base: Arc<GammaSemiring>, size: usize },
    Triangular { base: Arc<GammaSemiring>, size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSemiring {
    name: String,
    arity: usize,
    t_elems: Vec<String>,
    t_add: Vec<usize>,
    g_elems: Vec<String>,
    g_op: Option<Vec<usize>>,
    mu: Vec<usize>,
    unit: Option<Unit>,
    construction: Construction,
}

impl GammaSemiring {
    /// Builds a structure from raw tables, checking only their shape.
    /// Axioms are checked separately by [`validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        name: impl Into<String>,
        arity: usize,
        t_elems: Vec<String>,
        t_add: Vec<usize>,
        g_elems: Vec<String>,
        g_op: Option<Vec<usize>>,
        mu: Vec<usize>,
        unit: Option<Unit>,
    ) -> Result<Self> {
        let s = GammaSemiring {
            name: name.into(),
            arity,
            t_elems,
            t_add,
            g_elems,
            g_op,
            mu,
            unit,
            construction: Construction::Table,
        };
        s.check_shape()?;
        Ok(s)
    }

    pub(crate) fn with_construction(mut self, c: Construction) -> Self {
        self.construction = c;
        self
    }

    fn check_shape(&self) -> Result<()> {
        let nt = self.t_elems.len();
        let ng = self.g_elems.len();
        if self.arity < 2 {
            return Err(Error::Structure(format!("arity must be >= 2, got {}", self.arity)));
        }
        if nt == 0 {
            return Err(Error::Structure("T must contain at least the zero".to_string()));
        }
        if ng == 0 {
            return Err(Error::Structure("Γ must be nonempty".to_string()));
        }
        if self.t_add.len() != nt * nt {
            return Err(Error::Structure(format!(
                "t_add has {} entries, expected {}×{}",
                self.t_add.len(),
                nt,
                nt
            )));
        }
        if let Some(&bad) = self.t_add.iter().find(|&&v| v >= nt) {
            return Err(Error::Structure(format!("t_add entry {bad} out of range 0..{nt}")));
        }
        if let Some(op) = &self.g_op {
            if op.len() != ng * ng {
                return Err(Error::Structure(format!(
                    "g_op has {} entries, expected {}×{}",
                    op.len(),
                    ng,
                    ng
                )));
            }
            if let Some(&bad) = op.iter().find(|&&v| v >= ng) {
                return Err(Error::Structure(format!("g_op entry {bad} out of range 0..{ng}")));
            }
        }
        let expected = crate::caps::pow_sat(nt, self.arity)
            .saturating_mul(crate::caps::pow_sat(ng, self.arity - 1));
        if self.mu.len() as u64 != expected {
            return Err(Error::Structure(format!(
                "mu has {} entries, expected {}",
                self.mu.len(),
                expected
            )));
        }
        if let Some(&bad) = self.mu.iter().find(|&&v| v >= nt) {
            return Err(Error::Structure(format!("mu entry {bad} out of range 0..{nt}")));
        }
        if let Some(u) = &self.unit {
            if u.one >= nt {
                return Err(Error::Structure(format!("unit element {} out of range", u.one)));
            }
            if u.delta.len() != self.arity - 1 {
                return Err(Error::Structure(format!(
                    "unit weight has {} entries, expected {}",
                    u.delta.len(),
                    self.arity - 1
                )));
            }
            if let Some(&bad) = u.delta.iter().find(|&&g| g >= ng) {
                return Err(Error::Structure(format!("unit weight {bad} out of range")));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// |T|
    pub fn card(&self) -> usize {
        self.t_elems.len()
    }

    /// |Γ|
    pub fn gamma_card(&self) -> usize {
        self.g_elems.len()
    }

    pub fn t_elems(&self) -> &[String] {
        &self.t_elems
    }

    pub fn g_elems(&self) -> &[String] {
        &self.g_elems
    }

    pub fn t_add_table(&self) -> &[usize] {
        &self.t_add
    }

    pub fn g_op_table(&self) -> Option<&[usize]> {
        self.g_op.as_deref()
    }

    pub fn mu_table(&self) -> &[usize] {
        &self.mu
    }

    pub fn unit(&self) -> Option<&Unit> {
        self.unit.as_ref()
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.t_add[a * self.card() + b]
    }

    #[inline]
    pub fn g_add(&self, a: usize, b: usize) -> Option<usize> {
        self.g_op.as_ref().map(|op| op[a * self.gamma_card() + b])
    }

    /// Flat index of `μ(ts; gs)`.
    #[inline]
    pub fn mu_index(&self, ts: &[usize], gs: &[usize]) -> usize {
        debug_assert_eq!(ts.len(), self.arity);
        debug_assert_eq!(gs.len(), self.arity - 1);
        let nt = self.card();
        let ng = self.gamma_card();
        let mut idx = 0;
        for &t in ts {
            idx = idx * nt + t;
        }
        for &g in gs {
            idx = idx * ng + g;
        }
        idx
    }

    #[inline]
    pub fn mu(&self, ts: &[usize], gs: &[usize]) -> usize {
        self.mu[self.mu_index(ts, gs)]
    }

    /// Binary product `a γ b`.
    #[inline]
    pub fn mul(&self, a: usize, g: usize, b: usize) -> usize {
        debug_assert_eq!(self.arity, 2);
        self.mu[(a * self.card() + b) * self.gamma_card() + g]
    }

    /// Overwrites one `μ` entry. Used to build perturbed copies in tests and
    /// by the file loader; the result is unvalidated.
    pub fn set_mu_entry(&mut self, flat: usize, value: usize) -> Result<()> {
        if flat >= self.mu.len() || value >= self.card() {
            return Err(Error::Structure(format!("mu entry {flat} := {value} out of range")));
        }
        self.mu[flat] = value;
        self.construction = Construction::Table;
        Ok(())
    }

    pub fn set_add_entry(&mut self, a: usize, b: usize, value: usize) -> Result<()> {
        let n = self.card();
        if a >= n || b >= n || value >= n {
            return Err(Error::Structure(format!("t_add[{a}][{b}] := {value} out of range")));
        }
        self.t_add[a * n + b] = value;
        self.construction = Construction::Table;
        Ok(())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.t_elems.iter().position(|l| l == label)
    }

    /// Binary structure with a unit: the precondition of every matrix and
    /// K-theory computation. Returns `(one, δ)`.
    pub fn require_unital_binary(&self) -> Result<(usize, usize)> {
        if self.arity != 2 {
            return Err(Error::NotBinary(self.arity));
        }
        let u = self
            .unit
            .as_ref()
            .ok_or_else(|| Error::MissingUnit(self.name.clone()))?;
        Ok((u.one, u.delta[0]))
    }

    /// Sum of an iterator of elements, starting from zero.
    pub fn sum<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }
}

/// Decodes a mixed-radix index into `len` digits base `radix`, most
/// significant first.
pub(crate) fn decode_radix(mut idx: usize, radix: usize, len: usize, out: &mut [usize]) {
    for slot in (0..len).rev() {
        out[slot] = idx % radix;
        idx /= radix;
    }
}

pub(crate) fn encode_radix(digits: &[usize], radix: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * radix + d)
}
