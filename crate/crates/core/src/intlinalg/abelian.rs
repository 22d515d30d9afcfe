use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_normal_form, IntMatrix};

/// ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k with d₁ | d₂ | … and every dᵢ ≥ 2.
///
/// Elements are coordinate vectors of length `rank + k`: free coordinates
/// first, then one residue per torsion divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(alloc::format!("ℤ^{r}")),
        }
        for d in &self.torsion {
            parts.push(alloc::format!("ℤ/{d}"));
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl FgAbelianGroup {
    /// Canonicalizes arbitrary cyclic factors: 0 counts as a free summand,
    /// ±1 is dropped, the rest is rewritten as an invariant-factor chain.
    pub fn new(rank: usize, cyclic: impl IntoIterator<Item = BigInt>) -> Self {
        let mut rank = rank;
        let mut rest = Vec::new();
        for d in cyclic {
            if d.is_zero() {
                rank += 1;
            } else if !num_traits::Signed::abs(&d).is_one() {
                rest.push(num_traits::Signed::abs(&d));
            }
        }
        if rest.is_empty() {
            return FgAbelianGroup {
                rank,
                torsion: rest,
            };
        }
        let k = rest.len();
        let mut m = IntMatrix::zeros(k, k);
        for (i, d) in rest.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        let snf = smith_normal_form(&m);
        let torsion = snf.diagonal().filter(|d| !d.is_one()).cloned().collect();
        FgAbelianGroup { rank, torsion }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical coordinates.
    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Modulus of coordinate `i`, or `None` for a free coordinate.
    pub fn modulus(&self, i: usize) -> Option<&BigInt> {
        i.checked_sub(self.rank).map(|t| &self.torsion[t])
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn reduce(&self, v: &mut [BigInt]) {
        assert_eq!(v.len(), self.ngens());
        for (x, d) in v[self.rank..].iter_mut().zip(&self.torsion) {
            *x = x.mod_floor(d);
        }
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&mut v);
        v
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&mut v);
        v
    }

    pub fn is_zero_elem(&self, a: &[BigInt]) -> bool {
        let mut v = a.to_vec();
        self.reduce(&mut v);
        v.iter().all(Zero::is_zero)
    }

    /// All elements of a finite group in lexicographic order.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = BigInt::zero();
                while &x < d {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    next.push(p);
                    x += 1;
                }
            }
            out = next;
        }
        Some(out)
    }
}

/// Isomorphism of finitely generated abelian groups: equal canonical data.
pub fn abelian_iso(a: &FgAbelianGroup, b: &FgAbelianGroup) -> bool {
    a == b
}

pub fn abelian_direct_sum(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    FgAbelianGroup::new(
        a.rank + b.rank,
        a.torsion.iter().chain(&b.torsion).cloned(),
    )
}

/// ℤ^g modulo the row space of a relation matrix, together with the change
/// of coordinates into canonical form.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub group: FgAbelianGroup,
    generators: usize,
    v: IntMatrix,
    v_inv: IntMatrix,
    /// Columns of `x·v` read as canonical coordinates, in canonical order.
    coord_cols: Vec<usize>,
}

pub fn group_from_presentation(generators: usize, relations: &IntMatrix) -> Presentation {
    assert_eq!(
        relations.cols(),
        generators,
        "relation matrix must have one column per generator"
    );
    let snf = smith_normal_form(relations);
    let diag_len = relations.rows().min(generators);
    let mut free_cols = Vec::new();
    let mut torsion_cols = Vec::new();
    let mut torsion = Vec::new();
    for c in 0..generators {
        let d = if c < diag_len {
            snf.d[(c, c)].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            free_cols.push(c);
        } else if !d.is_one() {
            torsion_cols.push(c);
            torsion.push(d);
        }
    }
    let group = FgAbelianGroup {
        rank: free_cols.len(),
        torsion,
    };
    debug_assert_eq!(group, FgAbelianGroup::new(group.rank, group.torsion.clone()));
    free_cols.extend(torsion_cols);
    Presentation {
        group,
        generators,
        v: snf.v,
        v_inv: snf.v_inv,
        coord_cols: free_cols,
    }
}

impl Presentation {
    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Class of `x ∈ ℤ^g` in canonical coordinates.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.v.left_apply(x);
        let mut out: Vec<BigInt> = self.coord_cols.iter().map(|&c| y[c].clone()).collect();
        self.group.reduce(&mut out);
        out
    }

    /// A preimage in ℤ^g of the k-th canonical generator.
    pub fn lift(&self, k: usize) -> Vec<BigInt> {
        self.v_inv.row(self.coord_cols[k]).to_vec()
    }

    /// Images of the g presentation generators, as columns.
    pub fn projection_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.group.ngens(), self.generators);
        for j in 0..self.generators {
            let mut e = vec![BigInt::zero(); self.generators];
            e[j] = BigInt::one();
            for (i, x) in self.project(&e).into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }
}

/// A homomorphism between groups in canonical coordinates, given by the
/// images of the source's canonical generators (columns of `matrix`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source: FgAbelianGroup,
    pub target: FgAbelianGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, mut matrix: IntMatrix) -> Self {
        assert_eq!(matrix.rows(), target.ngens());
        assert_eq!(matrix.cols(), source.ngens());
        for j in 0..matrix.cols() {
            let mut col = matrix.column(j);
            target.reduce(&mut col);
            for (i, x) in col.into_iter().enumerate() {
                matrix[(i, j)] = x;
            }
        }
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FgAbelianGroup) -> Self {
        GroupHom::new(g.clone(), g.clone(), IntMatrix::identity(g.ngens()))
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.matrix.apply(x);
        self.target.reduce(&mut y);
        y
    }

    /// `self ∘ first`
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(first.target, self.source, "composing mismatched homomorphisms");
        GroupHom::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        )
    }

    /// Torsion generators must go to elements whose order divides theirs.
    pub fn is_well_defined(&self) -> bool {
        (0..self.source.ngens()).all(|j| match self.source.modulus(j) {
            None => true,
            Some(d) => {
                let col: Vec<BigInt> = self.matrix.column(j).iter().map(|x| x * d).collect();
                self.target.is_zero_elem(&col)
            }
        })
    }

    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }

    pub fn is_surjective(&self) -> bool {
        let n = self.target.ngens();
        let mut rel = IntMatrix::zeros(0, n);
        for (i, d) in self.target.torsion.iter().enumerate() {
            let mut row = vec![BigInt::zero(); n];
            row[self.target.rank + i] = d.clone();
            rel.push_row(&row);
        }
        for j in 0..self.matrix.cols() {
            rel.push_row(&self.matrix.column(j));
        }
        group_from_presentation(n, &rel).group.is_trivial()
    }

    /// A surjection between isomorphic finitely generated abelian groups is
    /// an isomorphism.
    pub fn is_iso(&self) -> bool {
        self.is_well_defined() && abelian_iso(&self.source, &self.target) && self.is_surjective()
    }
}
