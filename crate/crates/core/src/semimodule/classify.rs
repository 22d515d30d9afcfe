use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::iso::is_isomorphic;
use super::map::{image_in, ImageModule, ModuleMap};
use super::matrix::{enumerate_idempotents, IdempotentMatrix};
use super::module::{direct_sum, free_module, Fingerprint, Provenance, Semimodule};
use crate::algebra::GammaSemiring;
use crate::caps::{Caps, ModuleMode};
use crate::Result;

/// One isomorphism class of projectives.
#[derive(Debug, Clone)]
pub struct IsoClass {
    /// First image found in (size, lexicographic) order.
    pub representative: ImageModule,
    pub fingerprint: Fingerprint,
    /// Number of idempotents whose image falls in this class.
    pub members: usize,
    /// Pairs of nonzero classes `(a, b)`, `a ≤ b`, with `a ⊕ b` in this class.
    pub decompositions: Vec<(usize, usize)>,
    pub indecomposable: bool,
    /// A class `q` and rank `n` with `self ⊕ q ≅ Tⁿ`, when one exists in the window.
    pub complement: Option<(usize, usize)>,
}

impl IsoClass {
    pub fn module(&self) -> &Arc<Semimodule> {
        &self.representative.module
    }

    pub fn size(&self) -> usize {
        self.representative.module.size()
    }

    pub fn is_zero(&self) -> bool {
        self.size() == 1
    }
}

/// All images of idempotents of size ≤ `rank_cap`, up to isomorphism.
#[derive(Debug, Clone)]
pub struct Classification {
    pub base: Arc<GammaSemiring>,
    pub rank_cap: usize,
    pub mode: ModuleMode,
    pub classes: Vec<IsoClass>,
    /// Class of `Tⁿ` for n = 0..=rank_cap.
    pub free_classes: Vec<usize>,
}

impl Classification {
    /// Class of `m` and an isomorphism into its representative.
    pub fn find(&self, m: &Arc<Semimodule>, caps: &Caps) -> Result<Option<(usize, ModuleMap)>> {
        let fp = m.fingerprint(self.mode);
        for (i, c) in self.classes.iter().enumerate() {
            if c.fingerprint != fp {
                continue;
            }
            if let Some(w) = is_isomorphic(m, c.module(), caps, self.mode)? {
                return Ok(Some((i, w)));
            }
        }
        Ok(None)
    }

    pub fn zero_class(&self) -> usize {
        self.free_classes[0]
    }

    pub fn indecomposables(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].indecomposable)
            .collect()
    }

    /// Classes that are retracts of a free module but have no complement
    /// found in the window (the two notions of projective differ there).
    pub fn retract_only(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| !self.classes[i].is_zero() && self.classes[i].complement.is_none())
            .collect()
    }
}

pub fn classify_projectives(
    base: &Arc<GammaSemiring>,
    rank_cap: usize,
    caps: &Caps,
    mode: ModuleMode,
) -> Result<Classification> {
    base.require_unital_binary()?;
    let mut classes: Vec<IsoClass> = Vec::new();
    let mut free_classes = Vec::new();
    for k in 0..=rank_cap {
        let free = Arc::new(free_module(base, k, caps, mode)?);
        // images already seen, by their element set
        let mut seen: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
        for e in enumerate_idempotents(base, k, caps, mode)? {
            let img = image_in(base, &e, &free, mode, Provenance::Image(e.clone()))?;
            let key = img.module.coords().unwrap().to_vec();
            if let Some(&c) = seen.get(&key) {
                classes[c].members += 1;
                continue;
            }
            let found = locate(&classes, &img.module, caps, mode)?;
            seen.insert(key, found.unwrap_or(classes.len()));
            match found {
                Some(c) => classes[c].members += 1,
                None => classes.push(IsoClass {
                    fingerprint: img.module.fingerprint(mode),
                    representative: img,
                    members: 1,
                    decompositions: Vec::new(),
                    indecomposable: true,
                    complement: None,
                }),
            }
        }
        let id = IdempotentMatrix::new(base, super::Matrix::identity(base, k)?)?;
        let free_img = image_in(base, &id, &free, mode, Provenance::Free(k))?;
        free_classes.push(locate(&classes, &free_img.module, caps, mode)?.expect("identity image is classified"));
    }

    let n = classes.len();
    for a in 0..n {
        for b in a..n {
            if classes[a].is_zero() || classes[b].is_zero() {
                continue;
            }
            let size = classes[a].size() * classes[b].size();
            if !classes.iter().any(|c| c.size() == size) || size > caps.iso {
                continue;
            }
            let sum = Arc::new(direct_sum(classes[a].module(), classes[b].module(), caps)?);
            if let Some(c) = locate(&classes, &sum, caps, mode)? {
                classes[c].decompositions.push((a, b));
                classes[c].indecomposable = false;
            }
        }
    }
    for a in 0..n {
        if classes[a].is_zero() {
            classes[a].indecomposable = false;
            continue;
        }
        'search: for q in 0..n {
            let size = classes[a].size() * classes[q].size();
            if size > caps.iso {
                continue;
            }
            for (rank, &fc) in free_classes.iter().enumerate() {
                if classes[fc].size() != size {
                    continue;
                }
                let sum = Arc::new(direct_sum(classes[a].module(), classes[q].module(), caps)?);
                if is_isomorphic(&sum, classes[fc].module(), caps, mode)?.is_some() {
                    classes[a].complement = Some((q, rank));
                    break 'search;
                }
            }
        }
    }
    Ok(Classification {
        base: base.clone(),
        rank_cap,
        mode,
        classes,
        free_classes,
    })
}

fn locate(classes: &[IsoClass], m: &Arc<Semimodule>, caps: &Caps, mode: ModuleMode) -> Result<Option<usize>> {
    let fp = m.fingerprint(mode);
    for (i, c) in classes.iter().enumerate() {
        if c.fingerprint == fp && is_isomorphic(m, c.module(), caps, mode)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
