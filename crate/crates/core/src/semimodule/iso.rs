use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::map::ModuleMap;
use super::module::{ElementInvariant, Semimodule};
use crate::caps::{Caps, ModuleMode};
use crate::{Error, Result};

const UNSET: usize = usize::MAX;

struct Search<'a> {
    a: &'a Semimodule,
    b: &'a Semimodule,
    use_left: bool,
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    assigned: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Sets `x ↦ y` and everything it forces; false on a contradiction.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let (nt, ng) = (self.a.base().card(), self.a.base().gamma_card());
        let mut work = vec![(x, y)];
        while let Some((x, y)) = work.pop() {
            if self.fwd[x] != UNSET {
                if self.fwd[x] != y {
                    return false;
                }
                continue;
            }
            if self.bwd[y] != UNSET {
                return false;
            }
            self.fwd[x] = y;
            self.bwd[y] = x;
            self.assigned.push(x);
            for g in 0..ng {
                for t in 0..nt {
                    work.push((self.a.act(x, g, t), self.b.act(y, g, t)));
                    if self.use_left {
                        work.push((self.a.left_act(t, g, x).unwrap(), self.b.left_act(t, g, y).unwrap()));
                    }
                }
            }
            for i in 0..self.assigned.len() {
                let z = self.assigned[i];
                work.push((self.a.add(x, z), self.b.add(y, self.fwd[z])));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().unwrap();
            self.bwd[self.fwd[x]] = UNSET;
            self.fwd[x] = UNSET;
        }
    }

    fn run(&mut self, gens: &[usize], candidates: &[Vec<usize>]) -> Result<bool> {
        let Some((&g, rest)) = gens.split_first() else {
            return Ok(self.assigned.len() == self.a.size());
        };
        if self.fwd[g] != UNSET {
            return self.run(rest, &candidates[1..]);
        }
        for &c in &candidates[0] {
            if self.bwd[c] != UNSET {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Undecided("isomorphism search ran out of budget".into()));
            }
            let mark = self.assigned.len();
            if self.assign(g, c) && self.run(rest, &candidates[1..])? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }
}

/// An isomorphism `a → b` (verified, with verified inverse), or `None` when
/// the exhaustive search proves there is none.
pub fn is_isomorphic(
    a: &Arc<Semimodule>,
    b: &Arc<Semimodule>,
    caps: &Caps,
    mode: ModuleMode,
) -> Result<Option<ModuleMap>> {
    if !(Arc::ptr_eq(a.base(), b.base()) || a.base() == b.base()) {
        return Err(Error::Mismatch("modules over different bases".into()));
    }
    for m in [a, b] {
        if m.size() > caps.iso {
            return Err(Error::Undecided(alloc::format!(
                "module of {} elements exceeds the isomorphism cap {}",
                m.size(),
                caps.iso
            )));
        }
    }
    if Arc::ptr_eq(a, b) || a == b {
        let table = (0..a.size()).collect();
        return Ok(Some(ModuleMap::new(a.clone(), b.clone(), table)?));
    }
    if a.size() != b.size() {
        return Ok(None);
    }
    let use_left = mode == ModuleMode::StrictBimodule;
    if use_left && (a.has_left_action() != b.has_left_action()) {
        return Ok(None);
    }
    let ia = a.element_invariants(mode);
    let ib = b.element_invariants(mode);
    let mut sa = ia.clone();
    let mut sb = ib.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }

    let mut by_inv: BTreeMap<ElementInvariant, Vec<usize>> = BTreeMap::new();
    for (y, inv) in ib.iter().enumerate() {
        by_inv.entry(*inv).or_default().push(y);
    }
    // generators of a, rarest invariant first
    let mut order: Vec<usize> = (1..a.size()).collect();
    order.sort_by_key(|&x| (by_inv[&ia[x]].len(), x));
    let mut gens = Vec::new();
    let mut spanned = a.span(&[], mode);
    for x in order {
        if !spanned[x] {
            gens.push(x);
            spanned = a.span(&gens, mode);
        }
    }
    let candidates: Vec<Vec<usize>> = gens.iter().map(|&g| by_inv[&ia[g]].clone()).collect();

    let mut search = Search {
        a,
        b,
        use_left: use_left && a.has_left_action(),
        fwd: vec![UNSET; a.size()],
        bwd: vec![UNSET; b.size()],
        assigned: Vec::new(),
        nodes: 0,
        budget: caps.budget,
    };
    if !search.assign(0, 0) || !search.run(&gens, &candidates)? {
        return Ok(None);
    }
    let map = ModuleMap::new(a.clone(), b.clone(), search.fwd)?;
    if !map.is_isomorphism_in(mode) {
        return Err(Error::Undecided("isomorphism search produced an unverifiable map".into()));
    }
    Ok(Some(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_builtin, BuiltinKind, GammaSemiring};
    use crate::semimodule::{direct_sum, free_module, image_module, IdempotentMatrix, Matrix};

    fn base(kind: BuiltinKind) -> Arc<GammaSemiring> {
        Arc::new(make_builtin(kind, &Caps::default()).unwrap())
    }

    fn free(b: &Arc<GammaSemiring>, k: usize) -> Arc<Semimodule> {
        Arc::new(free_module(b, k, &Caps::default(), ModuleMode::Right).unwrap())
    }

    fn image(b: &Arc<GammaSemiring>, k: usize, e: &[usize]) -> Arc<Semimodule> {
        let e = IdempotentMatrix::new(b, Matrix::new(k, k, e.to_vec()).unwrap()).unwrap();
        image_module(b, &e, &Caps::default(), ModuleMode::Right).unwrap().module
    }

    #[test]
    fn reflexive_witness() {
        let b = base(BuiltinKind::Boolean);
        let f = free(&b, 2);
        let w = is_isomorphic(&f, &f, &Caps::default(), ModuleMode::Right).unwrap().unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let b = base(BuiltinKind::Boolean);
        assert!(is_isomorphic(&free(&b, 1), &free(&b, 2), &Caps::default(), ModuleMode::Right)
            .unwrap()
            .is_none());
    }

    #[test]
    fn image_of_diag_one_zero_is_free_rank_one() {
        for kind in [BuiltinKind::Boolean, BuiltinKind::Modular(2)] {
            let b = base(kind);
            let img = image(&b, 2, &[1, 0, 0, 0]);
            assert_eq!(img.size(), 2);
            let w = is_isomorphic(&img, &free(&b, 1), &Caps::default(), ModuleMode::Right).unwrap();
            assert!(w.unwrap().is_isomorphism());
        }
    }

    #[test]
    fn free_sum_is_free() {
        let b = base(BuiltinKind::TruncatedNat(3));
        let caps = Caps::default();
        let one = free(&b, 1);
        let sum = Arc::new(direct_sum(&one, &one, &caps).unwrap());
        assert!(is_isomorphic(&sum, &free(&b, 2), &caps, ModuleMode::Right).unwrap().is_some());
    }

    #[test]
    fn boolean_chains_agree() {
        let b = base(BuiltinKind::Boolean);
        let chain = image(&b, 2, &[1, 0, 1, 1]);
        let other = image(&b, 2, &[1, 1, 0, 1]);
        let caps = Caps::default();
        assert!(is_isomorphic(&chain, &other, &caps, ModuleMode::Right).unwrap().is_some());
        let two = image(&b, 2, &[1, 0, 0, 1]);
        assert!(is_isomorphic(&chain, &two, &caps, ModuleMode::Right).unwrap().is_none());
    }

    #[test]
    fn cap_is_loud() {
        let b = base(BuiltinKind::Boolean);
        let f = free(&b, 3);
        let caps = Caps::default().with_iso(4);
        assert!(matches!(is_isomorphic(&f, &f, &caps, ModuleMode::Right), Err(Error::Undecided(_))));
    }

    #[test]
    fn symmetric_and_transitive_witnesses() {
        let b = base(BuiltinKind::Modular(3));
        let caps = Caps::default();
        let x = image(&b, 2, &[1, 0, 0, 0]);
        let y = image(&b, 2, &[0, 0, 0, 1]);
        let z = free(&b, 1);
        let xy = is_isomorphic(&x, &y, &caps, ModuleMode::Right).unwrap().unwrap();
        let yz = is_isomorphic(&y, &z, &caps, ModuleMode::Right).unwrap().unwrap();
        let yx = xy.inverse().unwrap();
        assert!(yx.is_isomorphism());
        assert!(yz.after(&xy).unwrap().is_isomorphism());
    }
}
