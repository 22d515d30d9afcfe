//! Finite groups on element ids `0..order`, and their abelian quotients.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{group_from_presentation, FgAbelianGroup, IntMatrix, Presentation};
use crate::{Error, Result};

pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }
}

/// A group given by its full multiplication table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self> {
        if n == 0 || table.len() != n * n {
            return Err(Error::NotAGroup(format!("table has {} entries for order {n}", table.len())));
        }
        if table.iter().any(|&x| x >= n) {
            return Err(Error::NotAGroup("product out of range".into()));
        }
        let at = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::NotAGroup("no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| at(a, b) == identity && at(b, a) == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupTable {
            n,
            table,
            identity,
            inverse,
        })
    }
}

impl FiniteGroup for GroupTable {
    fn order(&self) -> usize {
        self.n
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// Subgroup grown incrementally from generators.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub member: Vec<bool>,
    pub elems: Vec<usize>,
    pub gens: Vec<usize>,
}

impl Subgroup {
    pub fn trivial<G: FiniteGroup + ?Sized>(g: &G) -> Self {
        let mut member = vec![false; g.order()];
        member[g.identity()] = true;
        Subgroup {
            member,
            elems: vec![g.identity()],
            gens: Vec::new(),
        }
    }

    pub fn generated<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Self {
        let mut h = Self::trivial(g);
        for &x in gens {
            h.add_generator(g, x);
        }
        h
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    /// Adds `x` and closes up. Returns false when `x` was already inside.
    pub fn add_generator<G: FiniteGroup + ?Sized>(&mut self, g: &G, x: usize) -> bool {
        if self.member[x] {
            return false;
        }
        self.gens.push(x);
        let old = self.elems.len();
        // old elements only need the new generator; new ones need all
        for i in 0..old {
            let y = g.mul(self.elems[i], x);
            if !self.member[y] {
                self.member[y] = true;
                self.elems.push(y);
            }
        }
        let mut i = old;
        while i < self.elems.len() {
            let e = self.elems[i];
            for k in 0..self.gens.len() {
                let y = g.mul(e, self.gens[k]);
                if !self.member[y] {
                    self.member[y] = true;
                    self.elems.push(y);
                }
            }
            i += 1;
        }
        true
    }
}

/// Greedy generating set: scan elements in id order, keep those not yet
/// generated.
pub fn generating_set<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    let mut h = Subgroup::trivial(g);
    for x in 0..g.order() {
        h.add_generator(g, x);
        if h.order() == g.order() {
            break;
        }
    }
    h.gens
}

/// G / N as a finite abelian group with the class of every element.
#[derive(Debug, Clone)]
pub struct AbelianQuotient {
    pub group: FgAbelianGroup,
    /// Canonical coordinates of the class of each element id.
    pub class_of: Vec<Vec<BigInt>>,
    /// The normal subgroup divided out.
    pub kernel: Subgroup,
    pub generators: Vec<usize>,
}

impl AbelianQuotient {
    pub fn class(&self, x: usize) -> &[BigInt] {
        &self.class_of[x]
    }
}

/// Quotient of `g` by the subgroup generated by all commutators and `extra`.
pub fn abelian_quotient<G: FiniteGroup + ?Sized>(g: &G, extra: &[usize]) -> AbelianQuotient {
    let gens = generating_set(g);
    let mut n = Subgroup::trivial(g);
    for &s in &gens {
        for &t in &gens {
            n.add_generator(g, g.commutator(s, t));
        }
    }
    for &x in extra {
        n.add_generator(g, x);
    }
    // normal closure under conjugation by the generators of g
    let mut k = 0;
    while k < n.gens.len() {
        let x = n.gens[k];
        for &s in &gens {
            let c = g.mul(g.mul(s, x), g.inv(s));
            n.add_generator(g, c);
        }
        k += 1;
    }

    // cosets x·N
    let order = g.order();
    let mut coset_of = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &e in &n.elems {
            coset_of[g.mul(x, e)] = id;
        }
    }

    // coordinates in ℤ^gens along a spanning tree of the coset graph; every
    // non-tree edge is a relation
    let s = gens.len();
    let mut coords: Vec<Option<Vec<BigInt>>> = vec![None; reps.len()];
    let start = coset_of[g.identity()];
    coords[start] = Some(vec![BigInt::zero(); s]);
    let mut queue = vec![start];
    let mut relations = IntMatrix::zeros(0, s);
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head];
        head += 1;
        let v = coords[c].clone().unwrap();
        for (i, &gen) in gens.iter().enumerate() {
            let next = coset_of[g.mul(reps[c], gen)];
            let mut w = v.clone();
            w[i] += BigInt::one();
            match &coords[next] {
                None => {
                    coords[next] = Some(w);
                    queue.push(next);
                }
                Some(existing) => {
                    let row: Vec<BigInt> = w.iter().zip(existing).map(|(a, b)| a - b).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        relations.push_row(&row);
                    }
                }
            }
        }
    }
    let pres: Presentation = group_from_presentation(s, &relations);
    let coset_class: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|c| pres.project(c.as_ref().expect("coset graph is connected")))
        .collect();
    let class_of = (0..order).map(|x| coset_class[coset_of[x]].clone()).collect();
    AbelianQuotient {
        group: pres.group,
        class_of,
        kernel: n,
        generators: gens,
    }
}

/// Abelianization G / [G, G].
pub fn finite_abelianization<G: FiniteGroup + ?Sized>(g: &G) -> AbelianQuotient {
    abelian_quotient(g, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// S₃ as permutations of {0,1,2}, composed right-to-left.
    fn s3() -> GroupTable {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut table = Vec::new();
        for a in &perms {
            for b in &perms {
                table.push(idx([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        GroupTable::new(6, table).unwrap()
    }

    fn cyclic(n: usize) -> GroupTable {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        GroupTable::new(n, table).unwrap()
    }

    #[test]
    fn s3_abelianizes_to_z2() {
        let g = s3();
        let q = finite_abelianization(&g);
        assert_eq!(q.group, FgAbelianGroup::new(0, [BigInt::from(2)]));
        assert_eq!(q.kernel.order(), 3);
        // commutators die
        for a in 0..6 {
            for b in 0..6 {
                assert!(q.group.is_zero_elem(q.class(g.commutator(a, b))));
            }
        }
    }

    #[test]
    fn cyclic_is_its_own_abelianization() {
        let q = finite_abelianization(&cyclic(6));
        assert_eq!(q.group, FgAbelianGroup::new(0, [BigInt::from(6)]));
    }

    #[test]
    fn klein_four() {
        let table = (0..16).map(|i| (i / 4) ^ (i % 4)).collect();
        let g = GroupTable::new(4, table).unwrap();
        let q = finite_abelianization(&g);
        assert_eq!(q.group, FgAbelianGroup::new(0, [BigInt::from(2), BigInt::from(2)]));
    }

    #[test]
    fn extra_generators_are_divided_out() {
        let g = cyclic(6);
        let q = abelian_quotient(&g, &[2]);
        assert_eq!(q.group, FgAbelianGroup::new(0, [BigInt::from(2)]));
    }

    #[test]
    fn quotient_map_is_a_homomorphism() {
        let g = s3();
        let q = finite_abelianization(&g);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(q.group.add(q.class(a), q.class(b)), q.class(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn rejects_non_groups() {
        // the two-element monoid ({0,1}, max) has no inverse for 1
        assert!(GroupTable::new(2, vec![0, 1, 1, 1]).is_err());
        assert!(GroupTable::new(2, vec![0, 1, 1]).is_err());
    }
}
