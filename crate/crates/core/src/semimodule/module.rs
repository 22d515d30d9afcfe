use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::matrix::IdempotentMatrix;
use crate::algebra::{decode_radix, GammaSemiring};
use crate::caps::{pow_sat, Caps, ModuleMode};
use crate::{Error, Result};

/// Where a materialized module came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Free(usize),
    Image(IdempotentMatrix),
    DirectSum(Arc<Semimodule>, Arc<Semimodule>),
    /// Image of a pushed idempotent under a base change.
    PushedForward {
        hom: String,
        source: Arc<Semimodule>,
    },
    Table,
}

/// A finite right (T, Γ)-semimodule, fully tabulated. Element 0 is zero.
///
/// The right action `x γ t` is stored at `(x·|Γ| + γ)·|T| + t`; the optional
/// left action `t γ x` uses the same layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semimodule {
    base: Arc<GammaSemiring>,
    size: usize,
    add: Vec<usize>,
    act: Vec<usize>,
    left: Option<Vec<usize>>,
    coords: Option<Vec<Vec<usize>>>,
    provenance: Provenance,
}

impl Semimodule {
    /// Builds a module from tables, checking shapes only; see
    /// [`Semimodule::axiom_violations`] for the axioms.
    pub fn from_tables(
        base: Arc<GammaSemiring>,
        size: usize,
        add: Vec<usize>,
        act: Vec<usize>,
        left: Option<Vec<usize>>,
        provenance: Provenance,
    ) -> Result<Self> {
        let per = base.gamma_card() * base.card();
        if size == 0 {
            return Err(Error::Structure("a module needs at least its zero".into()));
        }
        if add.len() != size * size || act.len() != size * per {
            return Err(Error::Structure(format!(
                "module tables have sizes ({}, {}), expected ({}, {})",
                add.len(),
                act.len(),
                size * size,
                size * per
            )));
        }
        if let Some(l) = &left {
            if l.len() != size * per {
                return Err(Error::Structure("left action table has the wrong size".into()));
            }
        }
        let in_range = |t: &[usize]| t.iter().all(|&x| x < size);
        if !in_range(&add) || !in_range(&act) || !left.as_deref().map_or(true, in_range) {
            return Err(Error::Structure("module table entry out of range".into()));
        }
        Ok(Semimodule {
            base,
            size,
            add,
            act,
            left,
            coords: None,
            provenance,
        })
    }

    /// Module whose elements are the given vectors of `T^k` (closed under
    /// addition and the actions; the zero vector first).
    pub(crate) fn from_vectors(
        base: Arc<GammaSemiring>,
        k: usize,
        vectors: Vec<Vec<usize>>,
        with_left: bool,
        provenance: Provenance,
    ) -> Self {
        let index: BTreeMap<&[usize], usize> =
            vectors.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        debug_assert!(vectors[0].iter().all(|&x| x == 0));
        let n = vectors.len();
        let nt = base.card();
        let ng = base.gamma_card();
        let mut buf = vec![0; k];
        let mut add = Vec::with_capacity(n * n);
        for x in &vectors {
            for y in &vectors {
                for i in 0..k {
                    buf[i] = base.add(x[i], y[i]);
                }
                add.push(index[buf.as_slice()]);
            }
        }
        let mut act = Vec::with_capacity(n * ng * nt);
        let mut left = with_left.then(|| Vec::with_capacity(n * ng * nt));
        for x in &vectors {
            for g in 0..ng {
                for t in 0..nt {
                    for i in 0..k {
                        buf[i] = base.mul(x[i], g, t);
                    }
                    act.push(index[buf.as_slice()]);
                    if let Some(l) = left.as_mut() {
                        for i in 0..k {
                            buf[i] = base.mul(t, g, x[i]);
                        }
                        l.push(*index.get(buf.as_slice()).expect("submodule not closed under the left action"));
                    }
                }
            }
        }
        Semimodule {
            base,
            size: n,
            add,
            act,
            left,
            coords: Some(vectors),
            provenance,
        }
    }

    pub fn base(&self) -> &Arc<GammaSemiring> {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn has_left_action(&self) -> bool {
        self.left.is_some()
    }

    /// Coordinates in the ambient free module, when the module sits inside one.
    pub fn coords(&self) -> Option<&[Vec<usize>]> {
        self.coords.as_deref()
    }

    pub fn ambient_rank(&self) -> Option<usize> {
        self.coords.as_ref().map(|c| c[0].len())
    }

    pub fn index_of_coords(&self, v: &[usize]) -> Option<usize> {
        self.coords.as_ref()?.binary_search_by(|c| c.as_slice().cmp(v)).ok()
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    /// `x γ t`
    #[inline]
    pub fn act(&self, x: usize, g: usize, t: usize) -> usize {
        self.act[(x * self.base.gamma_card() + g) * self.base.card() + t]
    }

    /// `t γ x`
    #[inline]
    pub fn left_act(&self, t: usize, g: usize, x: usize) -> Option<usize> {
        self.left
            .as_ref()
            .map(|l| l[(x * self.base.gamma_card() + g) * self.base.card() + t])
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn act_table(&self) -> &[usize] {
        &self.act
    }

    pub fn left_table(&self) -> Option<&[usize]> {
        self.left.as_deref()
    }

    /// Exhaustive check of the module axioms; empty means valid.
    pub fn axiom_violations(&self) -> Vec<String> {
        let s = &self.base;
        let (n, nt, ng) = (self.size, s.card(), s.gamma_card());
        let mut out = Vec::new();
        for x in 0..n {
            if self.add(0, x) != x {
                out.push(format!("0 + {x} != {x}"));
            }
            for y in 0..n {
                if self.add(x, y) != self.add(y, x) {
                    out.push(format!("{x} + {y} not commutative"));
                }
                for z in 0..n {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        out.push(format!("({x} + {y}) + {z} not associative"));
                    }
                }
            }
        }
        for g in 0..ng {
            for t in 0..nt {
                if self.act(0, g, t) != 0 {
                    out.push(format!("0 γ{g} {t} != 0"));
                }
                for x in 0..n {
                    for y in 0..n {
                        if self.act(self.add(x, y), g, t) != self.add(self.act(x, g, t), self.act(y, g, t)) {
                            out.push(format!("({x} + {y}) γ{g} {t} not additive"));
                        }
                    }
                    for u in 0..nt {
                        if self.act(x, g, s.add(t, u)) != self.add(self.act(x, g, t), self.act(x, g, u)) {
                            out.push(format!("{x} γ{g} ({t} + {u}) not additive"));
                        }
                    }
                    for h in 0..ng {
                        for u in 0..nt {
                            if self.act(self.act(x, g, t), h, u) != self.act(x, g, s.mul(t, h, u)) {
                                out.push(format!("({x} γ{g} {t}) γ{h} {u} not associative"));
                            }
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for g in 0..ng {
                if self.act(x, g, 0) != 0 {
                    out.push(format!("{x} γ{g} 0 != 0"));
                }
            }
        }
        if let Some(u) = s.unit() {
            for x in 0..n {
                if self.act(x, u.delta[0], u.one) != x {
                    out.push(format!("{x} δ 1 != {x}"));
                }
            }
        }
        out
    }

    /// Elements reachable from `gens` by addition and the actions.
    pub fn span(&self, gens: &[usize], mode: ModuleMode) -> Vec<bool> {
        let mut member = vec![false; self.size];
        let mut list = vec![0];
        member[0] = true;
        let mut pending: Vec<usize> = gens.to_vec();
        let (nt, ng) = (self.base.card(), self.base.gamma_card());
        let use_left = mode == ModuleMode::StrictBimodule && self.left.is_some();
        while let Some(x) = pending.pop() {
            if member[x] {
                continue;
            }
            member[x] = true;
            let snapshot = list.len();
            list.push(x);
            for g in 0..ng {
                for t in 0..nt {
                    pending.push(self.act(x, g, t));
                    if use_left {
                        pending.push(self.left_act(t, g, x).unwrap());
                    }
                }
            }
            for i in 0..=snapshot {
                pending.push(self.add(x, list[i]));
            }
        }
        member
    }

    /// Per-element isomorphism invariants.
    pub(crate) fn element_invariants(&self, mode: ModuleMode) -> Vec<ElementInvariant> {
        let (nt, ng) = (self.base.card(), self.base.gamma_card());
        (0..self.size)
            .map(|x| {
                // x, 2x, 3x, … until a repeat
                let mut seen = vec![usize::MAX; self.size];
                let mut cur = x;
                let mut step = 0;
                while seen[cur] == usize::MAX {
                    seen[cur] = step;
                    cur = self.add(cur, x);
                    step += 1;
                }
                let preperiod = seen[cur];
                let period = step - seen[cur];
                let mut orbit: Vec<usize> = Vec::with_capacity(ng * nt);
                let mut fixing = 0;
                for g in 0..ng {
                    for t in 0..nt {
                        let y = self.act(x, g, t);
                        orbit.push(y);
                        if y == x {
                            fixing += 1;
                        }
                    }
                }
                orbit.sort_unstable();
                orbit.dedup();
                let absorbing = (0..self.size).all(|y| self.add(x, y) == x);
                let cyclic = self.span(&[x], mode).iter().filter(|&&m| m).count();
                let below = (0..self.size).filter(|&y| self.add(x, y) == x).count();
                ElementInvariant {
                    preperiod,
                    period,
                    orbit: orbit.len(),
                    fixing,
                    absorbing,
                    cyclic,
                    below,
                }
            })
            .collect()
    }

    pub fn fingerprint(&self, mode: ModuleMode) -> Fingerprint {
        let mut inv = self.element_invariants(mode);
        inv.sort_unstable();
        Fingerprint {
            size: self.size,
            invariants: inv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct ElementInvariant {
    preperiod: usize,
    period: usize,
    orbit: usize,
    fixing: usize,
    absorbing: bool,
    cyclic: usize,
    below: usize,
}

/// Sorted multiset of element invariants; isomorphic modules share it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    size: usize,
    invariants: Vec<ElementInvariant>,
}

impl Fingerprint {
    pub fn size(&self) -> usize {
        self.size
    }
}

/// `T^k` with componentwise operations, elements in lexicographic order.
pub fn free_module(base: &Arc<GammaSemiring>, k: usize, caps: &Caps, mode: ModuleMode) -> Result<Semimodule> {
    base.require_unital_binary()?;
    let nt = base.card();
    let size = pow_sat(nt, k);
    caps.check_iso("free module carrier", size)?;
    let vectors: Vec<Vec<usize>> = (0..size as usize)
        .map(|i| {
            let mut v = vec![0; k];
            decode_radix(i, nt, k, &mut v);
            v
        })
        .collect();
    Ok(Semimodule::from_vectors(
        base.clone(),
        k,
        vectors,
        mode == ModuleMode::StrictBimodule,
        Provenance::Free(k),
    ))
}

/// Cartesian product with componentwise operations. When both factors sit
/// in free modules the sum sits in their concatenation.
pub fn direct_sum(a: &Arc<Semimodule>, b: &Arc<Semimodule>, caps: &Caps) -> Result<Semimodule> {
    if !(Arc::ptr_eq(&a.base, &b.base) || a.base == b.base) {
        return Err(Error::Mismatch(format!(
            "direct sum over different bases `{}` and `{}`",
            a.base.name(),
            b.base.name()
        )));
    }
    let size = (a.size as u64).saturating_mul(b.size as u64);
    caps.check_iso("direct sum carrier", size)?;
    let provenance = Provenance::DirectSum(a.clone(), b.clone());
    let with_left = a.left.is_some() && b.left.is_some();
    if let (Some(ca), Some(cb)) = (&a.coords, &b.coords) {
        // lexicographic order of concatenations = pair order (i, j)
        let vectors = ca
            .iter()
            .flat_map(|x| cb.iter().map(move |y| [x.as_slice(), y.as_slice()].concat()))
            .collect();
        let k = ca[0].len() + cb[0].len();
        return Ok(Semimodule::from_vectors(a.base.clone(), k, vectors, with_left, provenance));
    }
    let (na, nb) = (a.size, b.size);
    let n = na * nb;
    let per = a.base.gamma_card() * a.base.card();
    let mut add = Vec::with_capacity(n * n);
    for p in 0..n {
        for q in 0..n {
            add.push(a.add(p / nb, q / nb) * nb + b.add(p % nb, q % nb));
        }
    }
    let mut act = Vec::with_capacity(n * per);
    let mut left = with_left.then(|| Vec::with_capacity(n * per));
    for p in 0..n {
        for j in 0..per {
            act.push(a.act[(p / nb) * per + j] * nb + b.act[(p % nb) * per + j]);
            if let Some(l) = left.as_mut() {
                l.push(a.left.as_ref().unwrap()[(p / nb) * per + j] * nb + b.left.as_ref().unwrap()[(p % nb) * per + j]);
            }
        }
    }
    Semimodule::from_tables(a.base.clone(), n, add, act, left, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_builtin, BuiltinKind};

    fn base(kind: BuiltinKind) -> Arc<GammaSemiring> {
        Arc::new(make_builtin(kind, &Caps::default()).unwrap())
    }

    #[test]
    fn free_module_sizes() {
        let caps = Caps::default();
        let b = base(BuiltinKind::Boolean);
        let zero = free_module(&b, 0, &caps, ModuleMode::Right).unwrap();
        assert_eq!(zero.size(), 1);
        let f2 = free_module(&b, 2, &caps, ModuleMode::Right).unwrap();
        assert_eq!(f2.size(), 4);
        assert!(f2.axiom_violations().is_empty());
        assert!(matches!(
            free_module(&b, 7, &caps, ModuleMode::Right),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn modular_two_plane_is_klein_four() {
        let m = base(BuiltinKind::Modular(2));
        let f = free_module(&m, 2, &Caps::default(), ModuleMode::StrictBimodule).unwrap();
        // every element is its own negative; table oracle: xor of 2-bit codes
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(f.add(x, y), x ^ y);
            }
        }
        assert!(f.has_left_action());
        assert!(f.axiom_violations().is_empty());
    }

    #[test]
    fn direct_sum_sizes_and_zero() {
        let caps = Caps::default();
        let t = base(BuiltinKind::TruncatedNat(2));
        let a = Arc::new(free_module(&t, 0, &caps, ModuleMode::Right).unwrap());
        let b = Arc::new(free_module(&t, 1, &caps, ModuleMode::Right).unwrap());
        let s = direct_sum(&b, &a, &caps).unwrap();
        assert_eq!(s.size(), 3);
        let s = direct_sum(&b, &b, &caps).unwrap();
        assert_eq!(s.size(), 9);
        assert!(s.axiom_violations().is_empty());
        let other = Arc::new(free_module(&base(BuiltinKind::Boolean), 1, &caps, ModuleMode::Right).unwrap());
        assert!(matches!(direct_sum(&b, &other, &caps), Err(Error::Mismatch(_))));
    }

    #[test]
    fn tabulated_direct_sum_matches_coordinate_sum() {
        let caps = Caps::default();
        let t = base(BuiltinKind::Modular(3));
        let f = Arc::new(free_module(&t, 1, &caps, ModuleMode::Right).unwrap());
        let bare = Arc::new(
            Semimodule::from_tables(
                t.clone(),
                f.size(),
                f.add_table().to_vec(),
                f.act_table().to_vec(),
                None,
                Provenance::Table,
            )
            .unwrap(),
        );
        let coord = direct_sum(&f, &f, &caps).unwrap();
        let table = direct_sum(&bare, &bare, &caps).unwrap();
        assert_eq!(coord.add_table(), table.add_table());
        assert_eq!(coord.act_table(), table.act_table());
    }
}
