use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{decode_radix, encode_radix, GammaSemiring};
use crate::caps::{pow_sat, Caps, ModuleMode};
use crate::intlinalg::{abelian_quotient, AbelianQuotient, FgAbelianGroup, FiniteGroup, GroupHom, IntMatrix};
use crate::semimodule::{
    direct_sum, free_module, is_isomorphic, is_left_equivariant, mul_with, Classification, Matrix, ModuleMap,
    Semimodule,
};
use crate::{Error, Result};

const ABSENT: u32 = u32::MAX;

/// Invertible n×n matrices under the δ-product, ids in lexicographic order.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    base: Arc<GammaSemiring>,
    delta: usize,
    n: usize,
    elems: Vec<Matrix>,
    inverse: Vec<usize>,
    /// Dense code → id over all |T|^(n²) matrices.
    lookup: Vec<u32>,
    identity: usize,
}

impl MatrixGroup {
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elems
    }

    pub fn element(&self, id: usize) -> &Matrix {
        &self.elems[id]
    }

    pub fn id_of(&self, m: &Matrix) -> Option<usize> {
        if m.rows() != self.n || m.cols() != self.n {
            return None;
        }
        match self.lookup[encode_radix(m.entries(), self.base.card())] {
            ABSENT => None,
            id => Some(id as usize),
        }
    }
}

impl FiniteGroup for MatrixGroup {
    fn order(&self) -> usize {
        self.elems.len()
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let p = mul_with(&self.base, self.delta, &self.elems[a], &self.elems[b]);
        self.id_of(&p).expect("invertible matrices are closed under products")
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// Two-sided inverse of `m` under the δ-product, if any. Each column of the
/// candidate inverse is the preimage of a unit vector.
pub fn matrix_inverse(s: &GammaSemiring, m: &Matrix) -> Result<Option<Matrix>> {
    let (one, delta) = s.require_unital_binary()?;
    let n = m.rows();
    let nt = s.card();
    let mut cols: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut x = vec![0; n];
    let mut y = vec![0; n];
    let total = pow_sat(nt, n) as usize;
    for code in 0..total {
        decode_radix(code, nt, n, &mut x);
        crate::semimodule::mat_vec(s, delta, m, &x, &mut y);
        // unit vector e_j?
        let mut nonzero = y.iter().enumerate().filter(|(_, &v)| v != 0);
        if let (Some((j, &v)), None) = (nonzero.next(), nonzero.next()) {
            if v == one && cols[j].is_none() {
                cols[j] = Some(x.clone());
            }
        }
    }
    if cols.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut inv = Matrix::zero(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, &v) in c.as_ref().unwrap().iter().enumerate() {
            inv.set(i, j, v);
        }
    }
    let id = Matrix::identity(s, n)?;
    if mul_with(s, delta, &inv, m) == id && mul_with(s, delta, m, &inv) == id {
        Ok(Some(inv))
    } else {
        Ok(None)
    }
}

fn build_group(base: &Arc<GammaSemiring>, n: usize, caps: &Caps, mode: ModuleMode) -> Result<MatrixGroup> {
    let (_, delta) = base.require_unital_binary()?;
    let nt = base.card();
    let space = pow_sat(nt, n * n);
    if space > caps.budget {
        return Err(Error::BudgetExhausted {
            what: "automorphism enumeration",
            limit: caps.budget,
            found: 0,
        });
    }
    let space = space as usize;
    let mut lookup = vec![ABSENT; space];
    let mut elems = Vec::new();
    let mut inv_codes = Vec::new();
    let mut entries = vec![0; n * n];
    for code in 0..space {
        decode_radix(code, nt, n * n, &mut entries);
        let m = Matrix::new(n, n, entries.clone())?;
        let Some(inv) = matrix_inverse(base, &m)? else {
            continue;
        };
        if mode == ModuleMode::StrictBimodule && !is_left_equivariant(base, &m)? {
            continue;
        }
        lookup[code] = elems.len() as u32;
        elems.push(m);
        inv_codes.push(encode_radix(inv.entries(), nt));
    }
    let inverse = inv_codes
        .iter()
        .map(|&c| match lookup[c] {
            ABSENT => Err(Error::Structure("inverse of an automorphism is missing".into())),
            id => Ok(id as usize),
        })
        .collect::<Result<Vec<_>>>()?;
    let id = Matrix::identity(base, n)?;
    let identity = lookup[encode_radix(id.entries(), nt)] as usize;
    Ok(MatrixGroup {
        base: base.clone(),
        delta,
        n,
        elems,
        inverse,
        lookup,
        identity,
    })
}

/// `I + λ·e_ij` for i ≠ j, λ ≠ 0, kept when invertible.
fn elementary_ids(g: &MatrixGroup) -> Result<Vec<usize>> {
    let s = &g.base;
    let n = g.n;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for lambda in 1..s.card() {
                let mut m = Matrix::identity(s, n)?;
                m.set(i, j, lambda);
                if let Some(id) = g.id_of(&m) {
                    out.push(id);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub group: MatrixGroup,
    /// Ids of the invertible elementary matrices.
    pub elementary: Vec<usize>,
    pub quotient: AbelianQuotient,
}

impl TowerLevel {
    pub fn level(&self) -> usize {
        self.group.n
    }

    pub fn class_of(&self, m: &Matrix) -> Option<&[BigInt]> {
        self.group.id_of(m).map(|id| self.quotient.class(id))
    }

    /// An element whose class is the k-th canonical generator.
    fn generator_preimage(&self, k: usize) -> usize {
        let q = &self.quotient;
        let mut target = q.group.zero();
        target[k] = BigInt::one();
        (0..self.group.order())
            .find(|&x| q.class(x) == target.as_slice())
            .expect("quotient map is onto")
    }

    /// Preimages of the canonical generators of Qₙ.
    pub fn generator_preimages(&self) -> Vec<usize> {
        (0..self.quotient.group.ngens()).map(|k| self.generator_preimage(k)).collect()
    }
}

/// `α ↦ α ⊕ 1`
pub fn stabilize(s: &GammaSemiring, m: &Matrix) -> Result<Matrix> {
    Ok(m.block_diag(&Matrix::identity(s, 1)?))
}

#[derive(Debug, Clone)]
pub struct AutTower {
    pub base: Arc<GammaSemiring>,
    pub mode: ModuleMode,
    /// Levels 1..=levels.len().
    pub levels: Vec<TowerLevel>,
    /// Qₙ → Qₙ₊₁ induced by `α ↦ α ⊕ 1`.
    pub stabilization: Vec<GroupHom>,
    /// Level at which the budget ran out, if the tower is partial.
    pub truncated_at: Option<usize>,
}

impl AutTower {
    pub fn level(&self, n: usize) -> Option<&TowerLevel> {
        n.checked_sub(1).and_then(|i| self.levels.get(i))
    }
}

pub fn aut_tower(base: &Arc<GammaSemiring>, levels: usize, caps: &Caps, mode: ModuleMode) -> Result<AutTower> {
    base.require_unital_binary()?;
    caps.check_carrier("K-theory base carrier", base.card() as u64)?;
    let mut out = AutTower {
        base: base.clone(),
        mode,
        levels: Vec::new(),
        stabilization: Vec::new(),
        truncated_at: None,
    };
    for n in 1..=levels {
        let group = match build_group(base, n, caps, mode) {
            Ok(g) => g,
            Err(e @ Error::BudgetExhausted { .. }) => {
                if n == 1 {
                    return Err(e);
                }
                out.truncated_at = Some(n);
                break;
            }
            Err(e) => return Err(e),
        };
        let elementary = elementary_ids(&group)?;
        let quotient = abelian_quotient(&group, &elementary);
        let level = TowerLevel {
            group,
            elementary,
            quotient,
        };
        if let Some(prev) = out.levels.last() {
            out.stabilization.push(stabilization_map(base, prev, &level)?);
        }
        out.levels.push(level);
    }
    Ok(out)
}

fn stabilization_map(s: &GammaSemiring, from: &TowerLevel, to: &TowerLevel) -> Result<GroupHom> {
    let src = from.quotient.group.clone();
    let tgt = to.quotient.group.clone();
    let mut m = IntMatrix::zeros(tgt.ngens(), src.ngens());
    for (k, x) in from.generator_preimages().into_iter().enumerate() {
        let big = stabilize(s, from.group.element(x))?;
        let class = to
            .class_of(&big)
            .ok_or_else(|| Error::Structure("stabilized automorphism is not invertible".into()))?;
        for (i, v) in class.iter().enumerate() {
            m[(i, k)] = v.clone();
        }
    }
    Ok(GroupHom::new(src, tgt, m))
}

#[derive(Debug, Clone)]
pub struct K1Result {
    pub tower: AutTower,
    pub quotients: Vec<FgAbelianGroup>,
    pub maps: Vec<GroupHom>,
    /// Q at the top computed level.
    pub value: FgAbelianGroup,
    pub stationary: bool,
}

/// Stationary when the last two stabilization maps (or the only one, with
/// two levels) are isomorphisms.
pub fn k1_from_tower(tower: AutTower) -> K1Result {
    let quotients: Vec<FgAbelianGroup> = tower.levels.iter().map(|l| l.quotient.group.clone()).collect();
    let maps = tower.stabilization.clone();
    let tail = maps.len().min(2);
    let stationary = tail > 0 && maps[maps.len() - tail..].iter().all(GroupHom::is_iso);
    let value = quotients.last().cloned().unwrap_or_else(FgAbelianGroup::trivial);
    K1Result {
        tower,
        quotients,
        maps,
        value,
        stationary,
    }
}

pub fn k1(base: &Arc<GammaSemiring>, levels: usize, caps: &Caps, mode: ModuleMode) -> Result<K1Result> {
    Ok(k1_from_tower(aut_tower(base, levels, caps, mode)?))
}

/// Relation checks on one level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationDiagnostics {
    pub level: usize,
    pub group_order: usize,
    pub elementary: usize,
    /// Elementary matrices whose class is not zero.
    pub nontrivial_elementary: Vec<usize>,
    /// Pairs with class(αβ) ≠ class(α) + class(β).
    pub product_failures: Vec<(usize, usize)>,
    pub pairs_checked: u64,
}

impl RelationDiagnostics {
    pub fn holds(&self) -> bool {
        self.nontrivial_elementary.is_empty() && self.product_failures.is_empty()
    }
}

/// Checks every elementary class and every product pair, up to `budget` pairs.
pub fn relation_diagnostics(level: &TowerLevel, budget: u64) -> Result<RelationDiagnostics> {
    let g = &level.group;
    let q = &level.quotient;
    let order = g.order();
    let pairs = (order as u64) * (order as u64);
    if pairs > budget {
        return Err(Error::BudgetExhausted {
            what: "product relation check",
            limit: budget,
            found: 0,
        });
    }
    let nontrivial_elementary = level
        .elementary
        .iter()
        .copied()
        .filter(|&x| !q.group.is_zero_elem(q.class(x)))
        .collect();
    let mut product_failures = Vec::new();
    for a in 0..order {
        for b in 0..order {
            if q.class(g.mul(a, b)) != q.group.add(q.class(a), q.class(b)).as_slice() {
                product_failures.push((a, b));
            }
        }
    }
    Ok(RelationDiagnostics {
        level: g.n,
        group_order: order,
        elementary: level.elementary.len(),
        nontrivial_elementary,
        product_failures,
        pairs_checked: pairs,
    })
}

/// Block-triangular automorphisms `[[a, b], [0, d]]` at level 2 whose class
/// differs from class(diag(a, d)); such a finding would be a relation the
/// quotient misses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockTriangularDiagnostic {
    pub checked: usize,
    pub discrepancies: Vec<usize>,
}

pub fn block_triangular_diagnostic(tower: &AutTower) -> Result<Option<BlockTriangularDiagnostic>> {
    let Some(level) = tower.level(2) else {
        return Ok(None);
    };
    let g = &level.group;
    let q = &level.quotient;
    let mut out = BlockTriangularDiagnostic::default();
    for (id, m) in g.elements().iter().enumerate() {
        if m.get(1, 0) != 0 {
            continue;
        }
        let mut diag = m.clone();
        diag.set(0, 1, 0);
        out.checked += 1;
        match g.id_of(&diag) {
            Some(d) if q.class(d) == q.class(id) => {}
            _ => out.discrepancies.push(id),
        }
    }
    Ok(Some(out))
}

/// Class of an automorphism of a projective, after stabilizing to a free module.
#[derive(Debug, Clone)]
pub struct WhiteheadClass {
    /// Level n of the free module `p ⊕ q ≅ Tⁿ`.
    pub level: usize,
    /// Class id of the complement q.
    pub complement: usize,
    pub matrix: Matrix,
    pub class: Vec<BigInt>,
}

pub fn whitehead_class(
    p: &Arc<Semimodule>,
    alpha: &ModuleMap,
    k1r: &K1Result,
    classes: &Classification,
    caps: &Caps,
) -> Result<WhiteheadClass> {
    let mode = k1r.tower.mode;
    let same = |a: &Arc<Semimodule>| Arc::ptr_eq(a, p) || **a == **p;
    if !same(&alpha.domain) || !same(&alpha.codomain) || !alpha.is_isomorphism_in(mode) {
        return Err(Error::NotAutomorphism(format!(
            "map on a {}-element module is not an automorphism of it",
            p.size()
        )));
    }
    let base = &k1r.tower.base;
    let top = k1r.tower.levels.len();
    for (qid, qc) in classes.classes.iter().enumerate() {
        for n in 1..=top {
            let size = pow_sat(base.card(), n);
            if (p.size() as u64).saturating_mul(qc.size() as u64) != size || size > caps.iso as u64 {
                continue;
            }
            let sum = Arc::new(direct_sum(p, qc.module(), caps)?);
            let free = Arc::new(free_module(base, n, caps, mode)?);
            let Some(phi) = is_isomorphic(&sum, &free, caps, mode)? else {
                continue;
            };
            let nq = qc.size();
            // α ⊕ id on the sum (pairs (x, y) have index x·|q| + y)
            let table = (0..sum.size()).map(|z| alpha.apply(z / nq) * nq + z % nq).collect();
            let stab = ModuleMap::new(sum.clone(), sum.clone(), table)?;
            let phi_inv = phi.inverse().expect("witness is bijective");
            let beta = phi.after(&stab.after(&phi_inv)?)?;
            let matrix = map_to_matrix(base, &beta)?;
            let level = k1r.tower.level(n).expect("level within tower");
            let class = level
                .class_of(&matrix)
                .ok_or_else(|| Error::Structure("transported automorphism is not invertible".into()))?
                .to_vec();
            return Ok(WhiteheadClass {
                level: n,
                complement: qid,
                matrix,
                class,
            });
        }
    }
    Err(Error::NotStabilizable(top))
}

/// Matrix of an endomorphism of a free module: columns are images of the
/// unit vectors.
pub fn map_to_matrix(base: &GammaSemiring, f: &ModuleMap) -> Result<Matrix> {
    let (one, _) = base.require_unital_binary()?;
    let coords = f
        .domain
        .coords()
        .ok_or_else(|| Error::Mismatch("map is not on a free module".into()))?;
    let n = coords[0].len();
    let cod = f.codomain.coords().ok_or_else(|| Error::Mismatch("map is not on a free module".into()))?;
    let mut m = Matrix::zero(n, n);
    let mut e = vec![0; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = 0);
        e[j] = one;
        let x = f.domain.index_of_coords(&e).unwrap();
        for (i, &v) in cod[f.apply(x)].iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}
