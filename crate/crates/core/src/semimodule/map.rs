use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::matrix::{is_left_equivariant, mat_vec, IdempotentMatrix, Matrix};
use super::module::{free_module, Provenance, Semimodule};
use crate::algebra::GammaSemiring;
use crate::caps::{Caps, ModuleMode};
use crate::{Error, Result};

/// A function between module carriers; the flags are computed, not trusted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    pub domain: Arc<Semimodule>,
    pub codomain: Arc<Semimodule>,
    pub table: Vec<usize>,
    pub additive: bool,
    pub right_equivariant: bool,
    /// `None` when either side lacks a left action.
    pub left_equivariant: Option<bool>,
}

fn same(a: &Arc<Semimodule>, b: &Arc<Semimodule>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl ModuleMap {
    pub fn new(domain: Arc<Semimodule>, codomain: Arc<Semimodule>, table: Vec<usize>) -> Result<Self> {
        if table.len() != domain.size() || table.iter().any(|&y| y >= codomain.size()) {
            return Err(Error::Structure("map table does not fit its domain and codomain".into()));
        }
        let (d, c) = (&domain, &codomain);
        let s = d.base();
        let additive = table[0] == 0
            && (0..d.size()).all(|x| (0..d.size()).all(|y| table[d.add(x, y)] == c.add(table[x], table[y])));
        let right_equivariant = (0..d.size()).all(|x| {
            (0..s.gamma_card()).all(|g| (0..s.card()).all(|t| table[d.act(x, g, t)] == c.act(table[x], g, t)))
        });
        let left_equivariant = (d.has_left_action() && c.has_left_action()).then(|| {
            (0..d.size()).all(|x| {
                (0..s.gamma_card()).all(|g| {
                    (0..s.card()).all(|t| table[d.left_act(t, g, x).unwrap()] == c.left_act(t, g, table[x]).unwrap())
                })
            })
        });
        Ok(ModuleMap {
            domain,
            codomain,
            table,
            additive,
            right_equivariant,
            left_equivariant,
        })
    }

    pub fn identity(m: Arc<Semimodule>) -> Self {
        let table = (0..m.size()).collect();
        ModuleMap::new(m.clone(), m, table).expect("identity fits")
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Additive and right-equivariant, and left-equivariant when that is known.
    pub fn is_morphism(&self) -> bool {
        self.additive && self.right_equivariant && self.left_equivariant != Some(false)
    }

    pub fn is_identity(&self) -> bool {
        same(&self.domain, &self.codomain) && self.table.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.size() == self.codomain.size() && {
            let mut hit = vec![false; self.codomain.size()];
            self.table.iter().all(|&y| !core::mem::replace(&mut hit[y], true))
        }
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.domain.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        ModuleMap::new(self.codomain.clone(), self.domain.clone(), table).ok()
    }

    /// `self ∘ first`
    pub fn after(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if !same(&first.codomain, &self.domain) {
            return Err(Error::Mismatch("cannot compose maps with mismatched ends".into()));
        }
        let table = first.table.iter().map(|&x| self.table[x]).collect();
        ModuleMap::new(first.domain.clone(), self.codomain.clone(), table)
    }

    /// A bijective morphism whose inverse is again a morphism.
    pub fn is_isomorphism(&self) -> bool {
        self.is_morphism() && self.inverse().is_some_and(|inv| inv.is_morphism())
    }

    /// As [`ModuleMap::is_isomorphism`], ignoring left actions in right mode.
    pub fn is_isomorphism_in(&self, mode: ModuleMode) -> bool {
        let ok = |m: &ModuleMap| match mode {
            ModuleMode::Right => m.additive && m.right_equivariant,
            ModuleMode::StrictBimodule => m.additive && m.right_equivariant && m.left_equivariant == Some(true),
        };
        ok(self) && self.inverse().is_some_and(|inv| ok(&inv))
    }
}

/// `x ↦ m∘x` from `T^cols` to `T^rows`.
pub fn matrix_as_map(base: &Arc<GammaSemiring>, m: &Matrix, caps: &Caps, mode: ModuleMode) -> Result<ModuleMap> {
    m.check_entries(base)?;
    let domain = Arc::new(free_module(base, m.cols(), caps, mode)?);
    let codomain = if m.rows() == m.cols() {
        domain.clone()
    } else {
        Arc::new(free_module(base, m.rows(), caps, mode)?)
    };
    matrix_map_between(base, m, domain, codomain)
}

pub(crate) fn matrix_map_between(
    base: &GammaSemiring,
    m: &Matrix,
    domain: Arc<Semimodule>,
    codomain: Arc<Semimodule>,
) -> Result<ModuleMap> {
    let (_, delta) = base.require_unital_binary()?;
    let dc = domain.coords().ok_or_else(|| Error::Mismatch("domain has no coordinates".into()))?;
    let mut out = vec![0; m.rows()];
    let mut table = Vec::with_capacity(dc.len());
    for x in dc {
        mat_vec(base, delta, m, x, &mut out);
        table.push(
            codomain
                .index_of_coords(&out)
                .ok_or_else(|| Error::Mismatch("matrix image leaves the codomain".into()))?,
        );
    }
    ModuleMap::new(domain, codomain, table)
}

/// Image of an idempotent with its split inclusion and retraction.
#[derive(Debug, Clone)]
pub struct ImageModule {
    pub idempotent: IdempotentMatrix,
    pub module: Arc<Semimodule>,
    /// `s: Img(e) → T^k`
    pub inclusion: ModuleMap,
    /// `r: T^k → Img(e)`, `x ↦ e∘x`
    pub retraction: ModuleMap,
}

impl ImageModule {
    /// `r ∘ s = id`
    pub fn retract_identity_holds(&self) -> bool {
        self.retraction.after(&self.inclusion).is_ok_and(|m| m.is_identity())
    }
}

pub fn image_module(
    base: &Arc<GammaSemiring>,
    e: &IdempotentMatrix,
    caps: &Caps,
    mode: ModuleMode,
) -> Result<ImageModule> {
    let free = Arc::new(free_module(base, e.size(), caps, mode)?);
    image_in(base, e, &free, mode, Provenance::Image(e.clone()))
}

/// As [`image_module`] with the ambient free module supplied.
pub(crate) fn image_in(
    base: &Arc<GammaSemiring>,
    e: &IdempotentMatrix,
    free: &Arc<Semimodule>,
    mode: ModuleMode,
    provenance: Provenance,
) -> Result<ImageModule> {
    let (_, delta) = base.require_unital_binary()?;
    let k = e.size();
    if free.ambient_rank() != Some(k) {
        return Err(Error::Mismatch(format!("idempotent of size {k} on the wrong free module")));
    }
    let mut out = vec![0; k];
    let mut images: Vec<Vec<usize>> = free
        .coords()
        .unwrap()
        .iter()
        .map(|x| {
            mat_vec(base, delta, e.matrix(), x, &mut out);
            out.clone()
        })
        .collect();
    images.sort();
    images.dedup();
    let with_left = mode == ModuleMode::StrictBimodule && is_left_equivariant(base, e.matrix())?;
    let module = Arc::new(Semimodule::from_vectors(base.clone(), k, images, with_left, provenance));
    let inclusion_table = module
        .coords()
        .unwrap()
        .iter()
        .map(|v| free.index_of_coords(v).unwrap())
        .collect();
    let inclusion = ModuleMap::new(module.clone(), free.clone(), inclusion_table)?;
    let retraction = matrix_map_between(base, e.matrix(), free.clone(), module.clone())?;
    Ok(ImageModule {
        idempotent: e.clone(),
        module,
        inclusion,
        retraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_builtin, BuiltinKind};
    use crate::semimodule::enumerate_idempotents;

    fn base(kind: BuiltinKind) -> Arc<GammaSemiring> {
        Arc::new(make_builtin(kind, &Caps::default()).unwrap())
    }

    #[test]
    fn identity_and_zero_matrices() {
        let b = base(BuiltinKind::Boolean);
        let caps = Caps::default();
        let id = matrix_as_map(&b, &Matrix::identity(&b, 2).unwrap(), &caps, ModuleMode::StrictBimodule).unwrap();
        assert!(id.is_identity());
        assert!(id.additive && id.right_equivariant && id.left_equivariant == Some(true));
        let z = matrix_as_map(&b, &Matrix::zero(2, 2), &caps, ModuleMode::Right).unwrap();
        assert!(z.table.iter().all(|&y| y == 0));
        assert!(z.is_morphism());
    }

    #[test]
    fn diag_one_zero_projects() {
        let b = base(BuiltinKind::Boolean);
        let m = matrix_as_map(&b, &Matrix::new(2, 2, vec![1, 0, 0, 0]).unwrap(), &Caps::default(), ModuleMode::Right)
            .unwrap();
        // (x, y) has index 2x + y
        assert_eq!(m.table, vec![0, 0, 2, 2]);
        assert!(m.right_equivariant);
    }

    #[test]
    fn out_of_range_entries_rejected() {
        let b = base(BuiltinKind::Boolean);
        assert!(matrix_as_map(&b, &Matrix::new(1, 1, vec![5]).unwrap(), &Caps::default(), ModuleMode::Right).is_err());
    }

    #[test]
    fn retract_identity_for_all_idempotents() {
        let caps = Caps::default();
        for kind in [BuiltinKind::Boolean, BuiltinKind::Modular(2), BuiltinKind::TruncatedNat(3)] {
            let b = base(kind);
            for k in 0..=2 {
                for e in enumerate_idempotents(&b, k, &caps, ModuleMode::Right).unwrap() {
                    let img = image_module(&b, &e, &caps, ModuleMode::Right).unwrap();
                    assert!(img.retract_identity_holds());
                    assert!(img.inclusion.is_morphism() && img.retraction.is_morphism());
                    assert!(img.module.axiom_violations().is_empty());
                }
            }
        }
    }

    #[test]
    fn image_sizes() {
        let b = base(BuiltinKind::Boolean);
        let caps = Caps::default();
        let id = IdempotentMatrix::new(&b, Matrix::identity(&b, 1).unwrap()).unwrap();
        assert_eq!(image_module(&b, &id, &caps, ModuleMode::Right).unwrap().module.size(), 2);
        let z = IdempotentMatrix::new(&b, Matrix::zero(2, 2)).unwrap();
        assert_eq!(image_module(&b, &z, &caps, ModuleMode::Right).unwrap().module.size(), 1);
        let chain = IdempotentMatrix::new(&b, Matrix::new(2, 2, vec![1, 0, 1, 1]).unwrap()).unwrap();
        assert_eq!(image_module(&b, &chain, &caps, ModuleMode::Right).unwrap().module.size(), 3);
    }
}
