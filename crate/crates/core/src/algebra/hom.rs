use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::construct::{matrix_entries, power};
use super::{decode_radix, encode_radix, Construction, GammaSemiring};
use crate::caps::{pow_sat, Caps};
use crate::{Error, Result};

/// A pair of maps `T → T′`, `Γ → Γ′` between structures of equal arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaHomomorphism {
    pub source: Arc<GammaSemiring>,
    pub target: Arc<GammaSemiring>,
    pub f_t: Vec<usize>,
    pub f_g: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    Zero { image: usize },
    Add { a: usize, b: usize },
    Mu { t: Vec<usize>, g: Vec<usize> },
    Unit,
}

impl GammaHomomorphism {
    pub fn new(
        source: Arc<GammaSemiring>,
        target: Arc<GammaSemiring>,
        f_t: Vec<usize>,
        f_g: Vec<usize>,
    ) -> Result<Self> {
        if source.arity() != target.arity() {
            return Err(Error::ArityMismatch(source.arity(), target.arity()));
        }
        if f_t.len() != source.card() || f_g.len() != source.gamma_card() {
            return Err(Error::Structure(format!(
                "homomorphism tables have sizes ({}, {}), expected ({}, {})",
                f_t.len(),
                f_g.len(),
                source.card(),
                source.gamma_card()
            )));
        }
        if f_t.iter().any(|&x| x >= target.card()) || f_g.iter().any(|&g| g >= target.gamma_card()) {
            return Err(Error::Structure("homomorphism image out of range".into()));
        }
        Ok(GammaHomomorphism {
            source,
            target,
            f_t,
            f_g,
        })
    }

    pub fn identity(s: Arc<GammaSemiring>) -> Self {
        let f_t = (0..s.card()).collect();
        let f_g = (0..s.gamma_card()).collect();
        GammaHomomorphism {
            source: s.clone(),
            target: s,
            f_t,
            f_g,
        }
    }

    pub fn is_identity(&self) -> bool {
        same(&self.source, &self.target)
            && self.f_t.iter().enumerate().all(|(i, &x)| i == x)
            && self.f_g.iter().enumerate().all(|(i, &x)| i == x)
    }
}

fn same(a: &Arc<GammaSemiring>, b: &Arc<GammaSemiring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exhaustive check of the homomorphism equations.
pub fn validate_hom(f: &GammaHomomorphism) -> Vec<HomViolation> {
    let s = &f.source;
    let t = &f.target;
    let mut out = Vec::new();
    if f.f_t[0] != 0 {
        out.push(HomViolation::Zero { image: f.f_t[0] });
    }
    for a in 0..s.card() {
        for b in 0..s.card() {
            if f.f_t[s.add(a, b)] != t.add(f.f_t[a], f.f_t[b]) {
                out.push(HomViolation::Add { a, b });
            }
        }
    }
    let n = s.arity();
    let mut ts = vec![0; n];
    let mut gs = vec![0; n - 1];
    let mut its = vec![0; n];
    let mut igs = vec![0; n - 1];
    for ti in 0..pow_sat(s.card(), n) as usize {
        decode_radix(ti, s.card(), n, &mut ts);
        for (d, &x) in its.iter_mut().zip(&ts) {
            *d = f.f_t[x];
        }
        for gi in 0..pow_sat(s.gamma_card(), n - 1) as usize {
            decode_radix(gi, s.gamma_card(), n - 1, &mut gs);
            for (d, &g) in igs.iter_mut().zip(&gs) {
                *d = f.f_g[g];
            }
            if f.f_t[s.mu(&ts, &gs)] != t.mu(&its, &igs) {
                out.push(HomViolation::Mu {
                    t: ts.clone(),
                    g: gs.clone(),
                });
            }
        }
    }
    if let (Some(us), Some(ut)) = (s.unit(), t.unit()) {
        let delta: Vec<usize> = us.delta.iter().map(|&g| f.f_g[g]).collect();
        if f.f_t[us.one] != ut.one || delta != ut.delta {
            out.push(HomViolation::Unit);
        }
    }
    out
}

/// `g ∘ f`
pub fn compose_homs(g: &GammaHomomorphism, f: &GammaHomomorphism) -> Result<GammaHomomorphism> {
    if !same(&f.target, &g.source) {
        return Err(Error::Mismatch(format!(
            "cannot compose: `{}` is not `{}`",
            f.target.name(),
            g.source.name()
        )));
    }
    Ok(GammaHomomorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        f_t: f.f_t.iter().map(|&x| g.f_t[x]).collect(),
        f_g: f.f_g.iter().map(|&x| g.f_g[x]).collect(),
    })
}

fn triangular_parts(tri: &GammaSemiring) -> Result<(Arc<GammaSemiring>, usize)> {
    match tri.construction() {
        Construction::Triangular { base, size } => Ok((base.clone(), *size)),
        _ => Err(Error::NotTriangular(tri.name().into())),
    }
}

/// π: 𝒯ₙ(S) → Sⁿ, A ↦ (a₁₁, …, aₙₙ), with γ ↦ (γ, …, γ).
pub fn diagonal_projection(tri: &Arc<GammaSemiring>, caps: &Caps) -> Result<GammaHomomorphism> {
    let (base, size) = triangular_parts(tri)?;
    let target = Arc::new(power(&base, size, caps)?);
    let f_t = (0..tri.card())
        .map(|e| {
            let full = matrix_entries(tri, e).unwrap();
            let diag: Vec<usize> = (0..size).map(|i| full[i * size + i]).collect();
            encode_radix(&diag, base.card())
        })
        .collect();
    let f_g = (0..base.gamma_card())
        .map(|g| encode_radix(&vec![g; size], base.gamma_card()))
        .collect();
    GammaHomomorphism::new(tri.clone(), target, f_t, f_g)
}

/// ι: Sⁿ → 𝒯ₙ(S), (a₁, …, aₙ) ↦ diag(a₁, …, aₙ). Only a Γ-homomorphism when
/// Γ is a singleton, which is required here.
pub fn diagonal_inclusion(tri: &Arc<GammaSemiring>, caps: &Caps) -> Result<GammaHomomorphism> {
    let (base, size) = triangular_parts(tri)?;
    if base.gamma_card() != 1 {
        return Err(Error::Mismatch(format!(
            "diagonal inclusion needs a singleton Γ, `{}` has {}",
            base.name(),
            base.gamma_card()
        )));
    }
    let source = Arc::new(power(&base, size, caps)?);
    let nb = base.card();
    let free_positions: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (i..size).map(move |j| (i, j)))
        .collect();
    let mut tuple = vec![0; size];
    let f_t = (0..source.card())
        .map(|x| {
            decode_radix(x, nb, size, &mut tuple);
            let digits: Vec<usize> = free_positions
                .iter()
                .map(|&(i, j)| if i == j { tuple[i] } else { 0 })
                .collect();
            encode_radix(&digits, nb)
        })
        .collect();
    let f_g = vec![0; source.gamma_card()];
    GammaHomomorphism::new(source, tri.clone(), f_t, f_g)
}
