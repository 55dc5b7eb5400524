//! Finite groups as explicit multiplication tables.
//!
//! Elements of a group of order `n` are the integers `0..n`, with `0` the
//! identity.  A [`FiniteGroup`] is a cheaply clonable handle around the
//! table; structural equality and caching go through a content hash of the
//! table plus the product registration.
//!
//! Direct products are "flat": a product of products is registered as the
//! ordered list of its atomic factors, and the element pairing is
//! row-major (`(a, b) ↦ a·|H| + b`, leftmost factor most significant).
//! Row-major pairing is associative, so any bracketing of the same atom
//! list yields the identical table and the identical registration.  The
//! homology layer exploits the registration to compute product-group
//! homology by the Künneth rule instead of by elimination.

use crate::{Error, Result};
use sha2::{Digest, Sha256};
use std::sync::Arc;

#[derive(Debug)]
struct GroupInner {
    order: u32,
    /// Row-major multiplication table: `table[a*order + b] = a·b`.
    table: Vec<u32>,
    inv: Vec<u32>,
    /// Flat product registration: empty for an atom, else the ordered
    /// atomic factors (each itself with empty `factors`).
    factors: Vec<FiniteGroup>,
    key: [u8; 32],
}

/// A finite group given by its multiplication table.  Clones share the
/// underlying data.
#[derive(Clone, Debug)]
pub struct FiniteGroup(Arc<GroupInner>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.0.key == other.0.key
    }
}
impl Eq for FiniteGroup {}

fn content_key(table: &[u32], factor_keys: &[[u8; 32]]) -> [u8; 32] {
    let mut h = Sha256::new();
    if factor_keys.is_empty() {
        h.update(b"atom");
        for &x in table {
            h.update(x.to_le_bytes());
        }
    } else {
        h.update(b"prod");
        for k in factor_keys {
            h.update(k);
        }
    }
    h.finalize().into()
}

fn compute_inverses(order: u32, table: &[u32]) -> Result<Vec<u32>> {
    let n = order as usize;
    let mut inv = vec![u32::MAX; n];
    for a in 0..n {
        for b in 0..n {
            if table[a * n + b] == 0 && table[b * n + a] == 0 {
                inv[a] = b as u32;
                break;
            }
        }
        if inv[a] == u32::MAX {
            return Err(Error::InvalidTable(format!("element {a} has no two-sided inverse")));
        }
    }
    Ok(inv)
}

impl FiniteGroup {
    /// Build a group from a full multiplication table, validating the
    /// group laws (identity at index 0, associativity, inverses).
    pub fn from_table(table: Vec<Vec<u32>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &table {
            if row.len() != n {
                return Err(Error::InvalidTable("table is not square".into()));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(Error::InvalidTable(format!("entry {x} out of range")));
                }
                flat.push(x);
            }
        }
        for a in 0..n {
            if flat[a] != a as u32 || flat[a * n] != a as u32 {
                return Err(Error::InvalidTable("element 0 is not a two-sided identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b] as usize;
                for c in 0..n {
                    let bc = flat[b * n + c] as usize;
                    if flat[ab * n + c] != flat[a * n + bc] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let inv = compute_inverses(n as u32, &flat)?;
        let key = content_key(&flat, &[]);
        Ok(FiniteGroup(Arc::new(GroupInner { order: n as u32, table: flat, inv, factors: Vec::new(), key })))
    }

    /// Internal constructor for tables known to satisfy the group laws.
    fn new_unchecked(table: Vec<u32>, order: u32, factors: Vec<FiniteGroup>) -> FiniteGroup {
        let inv = compute_inverses(order, &table).expect("constructed table lacks inverses");
        let factor_keys: Vec<[u8; 32]> = factors.iter().map(|f| f.0.key).collect();
        let key = content_key(&table, &factor_keys);
        FiniteGroup(Arc::new(GroupInner { order, table, inv, factors, key }))
    }

    /// The trivial group.
    #[must_use]
    pub fn trivial() -> FiniteGroup {
        FiniteGroup::new_unchecked(vec![0], 1, Vec::new())
    }

    /// The cyclic group of order `n` (addition mod `n`).
    #[must_use]
    pub fn cyclic(n: u32) -> FiniteGroup {
        assert!(n >= 1, "cyclic group needs order >= 1");
        let n_us = n as usize;
        let mut table = vec![0u32; n_us * n_us];
        for a in 0..n_us {
            for b in 0..n_us {
                table[a * n_us + b] = ((a + b) % n_us) as u32;
            }
        }
        FiniteGroup::new_unchecked(table, n, Vec::new())
    }

    /// The symmetric group on `n ≤ 6` letters.  Elements are the
    /// permutation words of `{0..n}` in lexicographic order (so the
    /// identity is element 0); the product `σ·τ` is `σ` after `τ`.
    #[must_use]
    pub fn symmetric(n: u32) -> FiniteGroup {
        assert!((1..=6).contains(&n), "symmetric group supported for 1 ≤ n ≤ 6");
        let perms = permutations(n as usize);
        let m = perms.len();
        let index_of = |p: &[u8]| -> u32 {
            perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("permutation missing") as u32
        };
        let mut table = vec![0u32; m * m];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let composed: Vec<u8> = (0..n as usize).map(|i| pa[pb[i] as usize]).collect();
                table[a * m + b] = index_of(&composed);
            }
        }
        FiniteGroup::new_unchecked(table, m as u32, Vec::new())
    }

    /// The dihedral group of order `2n`: rotations `r^k` are elements
    /// `0..n`, reflections `r^k·s` are `n..2n`.
    #[must_use]
    pub fn dihedral(n: u32) -> FiniteGroup {
        assert!(n >= 1);
        let n = n as usize;
        let m = 2 * n;
        // Element k<n is the rotation r^k; element n+k is r^k s, where
        // s r s = r^{-1}.
        let mut table = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                let (ar, af) = (a % n, a >= n);
                let (br, bf) = (b % n, b >= n);
                // (r^ar s^af)(r^br s^bf): move s^af past r^br.
                let rot = if af { (ar + n - br % n) % n } else { (ar + br) % n };
                let flip = af ^ bf;
                table[a * m + b] = (rot + if flip { n } else { 0 }) as u32;
            }
        }
        FiniteGroup::new_unchecked(table, m as u32, Vec::new())
    }

    /// Direct product with row-major element pairing and flat factor
    /// registration.  Trivial factors are absorbed: `triv × G = G`.
    pub fn direct_product(&self, other: &FiniteGroup, max_order: u32) -> Result<FiniteGroup> {
        if self.order() == 1 {
            return Ok(other.clone());
        }
        if other.order() == 1 {
            return Ok(self.clone());
        }
        let big = self.order() as u64 * other.order() as u64;
        if big > max_order as u64 {
            return Err(Error::GroupOrderCapExceeded(big, max_order));
        }
        let (ng, nh) = (self.order() as usize, other.order() as usize);
        let m = ng * nh;
        let mut table = vec![0u32; m * m];
        for a1 in 0..ng {
            for b1 in 0..nh {
                let x = a1 * nh + b1;
                for a2 in 0..ng {
                    for b2 in 0..nh {
                        let y = a2 * nh + b2;
                        let p = self.mul(a1 as u32, a2 as u32) as usize * nh
                            + other.mul(b1 as u32, b2 as u32) as usize;
                        table[x * m + y] = p as u32;
                    }
                }
            }
        }
        let mut factors = Vec::new();
        factors.extend_from_slice(self.flat_factors());
        factors.extend_from_slice(other.flat_factors());
        Ok(FiniteGroup::new_unchecked(table, m as u32, factors))
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.table[a as usize * self.0.order as usize + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.0.inv[a as usize]
    }

    /// Conjugate `g·x·g⁻¹`.
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Content hash identifying the table and registration.
    pub fn key(&self) -> [u8; 32] {
        self.0.key
    }

    /// The flat atomic factor list.  For an atom this is a slice
    /// containing conceptually the group itself; we expose that case as an
    /// empty slice and let [`FiniteGroup::flat_factors`] normalize.
    pub fn registration(&self) -> &[FiniteGroup] {
        &self.0.factors
    }

    /// Flat factor view: an atom is its own single factor.
    pub fn flat_factors(&self) -> &[FiniteGroup] {
        if self.0.factors.is_empty() {
            std::slice::from_ref(self)
        } else {
            &self.0.factors
        }
    }

    pub fn is_atom(&self) -> bool {
        self.0.factors.is_empty()
    }

    /// Decode an element into its digits over the flat factors
    /// (most-significant first).
    pub fn decode(&self, elt: u32) -> Vec<u32> {
        let factors = self.flat_factors();
        let mut digits = vec![0u32; factors.len()];
        let mut rest = elt;
        for (i, f) in factors.iter().enumerate().rev() {
            digits[i] = rest % f.order();
            rest /= f.order();
        }
        digits
    }

    /// Inverse of [`FiniteGroup::decode`].
    pub fn encode(&self, digits: &[u32]) -> u32 {
        let factors = self.flat_factors();
        assert_eq!(digits.len(), factors.len(), "digit count mismatch");
        let mut out = 0u32;
        for (d, f) in digits.iter().zip(factors) {
            debug_assert!(*d < f.order());
            out = out * f.order() + d;
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = (0..n as u8).collect();
    loop {
        out.push(current.clone());
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// A subgroup, stored as the sorted list of its elements in the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<u32>,
}

impl Subgroup {
    /// Validate and build a subgroup from an element set.
    pub fn new(parent: FiniteGroup, mut elements: Vec<u32>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::NotASubgroup("must contain the identity".into()));
        }
        for &a in &elements {
            if a >= parent.order() {
                return Err(Error::NotASubgroup(format!("element {a} out of range")));
            }
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::NotASubgroup(format!("missing inverse of {a}")));
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotASubgroup(format!("not closed: {a}·{b}")));
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    /// The subgroup generated by a set of elements.
    pub fn generated(parent: FiniteGroup, gens: &[u32]) -> Result<Subgroup> {
        let mut seen = vec![false; parent.order() as usize];
        seen[0] = true;
        let mut frontier = vec![0u32];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [parent.mul(x, g), parent.mul(x, parent.inv(g))] {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        let elements = (0..parent.order()).filter(|&i| seen[i as usize]).collect();
        Ok(Subgroup { parent, elements })
    }

    pub fn trivial(parent: FiniteGroup) -> Subgroup {
        Subgroup { parent, elements: vec![0] }
    }

    pub fn full(parent: FiniteGroup) -> Subgroup {
        let elements = (0..parent.order()).collect();
        Subgroup { parent, elements }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn order(&self) -> u32 {
        self.elements.len() as u32
    }

    pub fn index(&self) -> u32 {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, g: u32) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Position of a parent element inside this subgroup, if present.
    pub fn position_of(&self, g: u32) -> Option<u32> {
        self.elements.binary_search(&g).ok().map(|i| i as u32)
    }

    /// Materialize the subgroup as a standalone (atomic) group.  Local
    /// element `i` is the `i`-th smallest parent element, so the identity
    /// stays at 0.  Returns the group and the local→parent element map.
    pub fn as_group(&self) -> (FiniteGroup, Vec<u32>) {
        let k = self.elements.len();
        let mut table = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                let p = self.parent.mul(self.elements[i], self.elements[j]);
                table[i * k + j] = self.position_of(p).expect("subgroup not closed") ;
            }
        }
        (FiniteGroup::new_unchecked(table, k as u32, Vec::new()), self.elements.clone())
    }

    /// Right transversal for the right cosets `K·g`: the minimal element
    /// of each coset, in ascending order (so the identity represents `K`
    /// and comes first), together with the coset index of every parent
    /// element.
    pub fn right_transversal(&self) -> (Vec<u32>, Vec<u32>) {
        let n = self.parent.order() as usize;
        let mut coset_of = vec![u32::MAX; n];
        let mut reps = Vec::with_capacity(self.index() as usize);
        for g in 0..n as u32 {
            if coset_of[g as usize] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g);
            for &k in &self.elements {
                coset_of[self.parent.mul(k, g) as usize] = idx;
            }
        }
        (reps, coset_of)
    }
}

/// A homomorphism between finite groups, stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    map: Vec<u32>,
}

impl GroupHom {
    /// Validate and build a homomorphism.
    pub fn new(source: FiniteGroup, target: FiniteGroup, map: Vec<u32>) -> Result<GroupHom> {
        if map.len() != source.order() as usize {
            return Err(Error::NotAHomomorphism("value table length mismatch".into()));
        }
        for &v in &map {
            if v >= target.order() {
                return Err(Error::NotAHomomorphism(format!("value {v} out of range")));
            }
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                let lhs = map[source.mul(a, b) as usize];
                let rhs = target.mul(map[a as usize], map[b as usize]);
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(format!("fails at ({a},{b})")));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(group: FiniteGroup) -> GroupHom {
        let map = (0..group.order()).collect();
        GroupHom { source: group.clone(), target: group, map }
    }

    /// The inner automorphism `y ↦ g·y·g⁻¹`.
    pub fn inner_automorphism(group: FiniteGroup, g: u32) -> GroupHom {
        let map = (0..group.order()).map(|y| group.conj(g, y)).collect();
        GroupHom { source: group.clone(), target: group, map }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.map[a as usize]
    }

    /// Composition `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        assert_eq!(self.target, other.source, "homomorphisms do not compose");
        let map = self.map.iter().map(|&v| other.map[v as usize]).collect();
        GroupHom { source: self.source.clone(), target: other.target.clone(), map }
    }

    /// Restriction to a subgroup of the source, materialized via
    /// [`Subgroup::as_group`].
    pub fn restrict(&self, sub: &Subgroup) -> GroupHom {
        assert_eq!(sub.parent(), &self.source, "subgroup of a different group");
        let (small, to_parent) = sub.as_group();
        let map = to_parent.iter().map(|&p| self.map[p as usize]).collect();
        GroupHom { source: small, target: self.target.clone(), map }
    }

    /// Product homomorphism `f × g` between the direct products.
    pub fn product(&self, other: &GroupHom, max_order: u32) -> Result<GroupHom> {
        let source = self.source.direct_product(&other.source, max_order)?;
        let target = self.target.direct_product(&other.target, max_order)?;
        let (ns2, nt2) = (other.source.order(), other.target.order());
        let mut map = Vec::with_capacity(source.order() as usize);
        for x in 0..source.order() {
            let (a, b) = (x / ns2, x % ns2);
            map.push(self.map[a as usize] * nt2 + other.map[b as usize]);
        }
        Ok(GroupHom { source, target, map })
    }
}

/// A finite left action of a group on the points `0..n_points`.
#[derive(Clone, Debug)]
pub struct FiniteAction {
    group: FiniteGroup,
    n_points: usize,
    /// `table[g * n_points + p] = g·p`.
    table: Vec<u32>,
}

impl FiniteAction {
    /// Validate and build an action from its full table.
    pub fn new(group: FiniteGroup, n_points: usize, table: Vec<u32>) -> Result<FiniteAction> {
        if table.len() != group.order() as usize * n_points {
            return Err(Error::ActionLawViolation("action table length mismatch".into()));
        }
        for &v in &table {
            if v as usize >= n_points {
                return Err(Error::ActionLawViolation(format!("point {v} out of range")));
            }
        }
        let act = |g: u32, p: u32| table[g as usize * n_points + p as usize];
        for p in 0..n_points as u32 {
            if act(0, p) != p {
                return Err(Error::ActionLawViolation("identity does not fix points".into()));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for p in 0..n_points as u32 {
                    if act(g, act(h, p)) != act(gh, p) {
                        return Err(Error::ActionLawViolation(format!(
                            "action law fails at ({g},{h},{p})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteAction { group, n_points, table })
    }

    /// The conjugation action of a group on its own elements.
    pub fn conjugation(group: &FiniteGroup) -> FiniteAction {
        let n = group.order() as usize;
        let mut table = vec![0u32; n * n];
        for g in 0..n as u32 {
            for x in 0..n as u32 {
                table[g as usize * n + x as usize] = group.conj(g, x);
            }
        }
        FiniteAction { group: group.clone(), n_points: n, table }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn apply(&self, g: u32, p: u32) -> u32 {
        self.table[g as usize * self.n_points + p as usize]
    }

    /// Orbit decomposition: per orbit the minimal representative point,
    /// the sorted orbit, and the stabilizer of the representative.
    pub fn orbits_and_stabilizers(&self) -> Vec<(u32, Vec<u32>, Subgroup)> {
        let mut seen = vec![false; self.n_points];
        let mut out = Vec::new();
        for p in 0..self.n_points as u32 {
            if seen[p as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut stab = Vec::new();
            for g in 0..self.group.order() {
                let q = self.apply(g, p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
                if q == p {
                    stab.push(g);
                }
            }
            orbit.sort_unstable();
            out.push((p, orbit, Subgroup { parent: self.group.clone(), elements: stab }));
        }
        out
    }
}

/// Conjugacy classes: per class the minimal representative and the sorted
/// class, ascending by representative.
pub fn conjugacy_classes(group: &FiniteGroup) -> Vec<(u32, Vec<u32>)> {
    FiniteAction::conjugation(group)
        .orbits_and_stabilizers()
        .into_iter()
        .map(|(rep, orbit, _)| (rep, orbit))
        .collect()
}

/// The centralizer of an element.
pub fn centralizer(group: &FiniteGroup, x: u32) -> Subgroup {
    let elements = (0..group.order()).filter(|&g| group.mul(g, x) == group.mul(x, g)).collect();
    Subgroup { parent: group.clone(), elements }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_basics() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(g.order(), 4);
        assert_eq!(g.mul(1, 3), 0);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.element_order(2), 2);
        assert!(g.is_abelian());
    }

    #[test]
    fn symmetric_three_classes_match_exhaustive_conjugation() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        // Oracle: explicit conjugacy closure by scanning all conjugators.
        let mut class_of = vec![u32::MAX; 6];
        for x in 0..6u32 {
            if class_of[x as usize] != u32::MAX {
                continue;
            }
            for g in 0..6u32 {
                class_of[s3.conj(g, x) as usize] = x;
            }
        }
        let classes = conjugacy_classes(&s3);
        let mut sizes: Vec<usize> = classes.iter().map(|(_, c)| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        for (rep, class) in &classes {
            for x in class {
                assert_eq!(class_of[*x as usize], *rep);
            }
        }
    }

    #[test]
    fn klein_four_group_via_product() {
        let c2 = FiniteGroup::cyclic(2);
        let v4 = c2.direct_product(&c2, 1000).unwrap();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.flat_factors().len(), 2);
        for a in 1..4 {
            assert_eq!(v4.element_order(a), 2);
        }
        // Row-major pairing: (1,0) = 2, (0,1) = 1, product = (1,1) = 3.
        assert_eq!(v4.mul(2, 1), 3);
        assert_eq!(v4.decode(3), vec![1, 1]);
        assert_eq!(v4.encode(&[1, 0]), 2);
    }

    #[test]
    fn flat_product_registration_is_bracketing_independent() {
        let c2 = FiniteGroup::cyclic(2);
        let c3 = FiniteGroup::cyclic(3);
        let left = c2.direct_product(&c3, 1000).unwrap().direct_product(&c2, 1000).unwrap();
        let right = c2.direct_product(&c3.direct_product(&c2, 1000).unwrap(), 1000).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.flat_factors().len(), 3);
        // Trivial factors are absorbed.
        let t = FiniteGroup::trivial();
        let absorbed = t.direct_product(&c3, 1000).unwrap();
        assert_eq!(absorbed, c3);
    }

    #[test]
    fn transversal_of_z2_in_z4() {
        let z4 = FiniteGroup::cyclic(4);
        let k = Subgroup::new(z4.clone(), vec![0, 2]).unwrap();
        let (reps, coset_of) = k.right_transversal();
        assert_eq!(reps, vec![0, 1]);
        assert_eq!(coset_of, vec![0, 1, 0, 1]);
        assert_eq!(k.index(), 2);
        // Oracle: reps hit every coset exactly once.
        let mut hit = vec![false; 2];
        for &r in &reps {
            let c = coset_of[r as usize] as usize;
            assert!(!hit[c]);
            hit[c] = true;
        }
    }

    #[test]
    fn subgroup_materialization_keeps_identity_first() {
        let s3 = FiniteGroup::symmetric(3);
        // The alternating subgroup: identity and the two 3-cycles.
        let a3 = Subgroup::new(s3.clone(), vec![0, 3, 4]).unwrap();
        let (g, to_parent) = a3.as_group();
        assert_eq!(g.order(), 3);
        assert_eq!(to_parent, vec![0, 3, 4]);
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn rejects_non_subgroups_and_bad_tables() {
        let z4 = FiniteGroup::cyclic(4);
        assert!(Subgroup::new(z4.clone(), vec![0, 1]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        // A valid user-provided table round-trips.
        let z2 = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
    }

    #[test]
    fn centralizers_in_s3() {
        let s3 = FiniteGroup::symmetric(3);
        // Element 1 = transposition, element 3 = 3-cycle.
        assert_eq!(s3.element_order(1), 2);
        assert_eq!(s3.element_order(3), 3);
        assert_eq!(centralizer(&s3, 0).order(), 6);
        assert_eq!(centralizer(&s3, 1).order(), 2);
        assert_eq!(centralizer(&s3, 3).order(), 3);
    }

    #[test]
    fn conjugation_orbits_have_centralizer_stabilizers() {
        let s3 = FiniteGroup::symmetric(3);
        let act = FiniteAction::conjugation(&s3);
        let orbits = act.orbits_and_stabilizers();
        let mut data: Vec<(usize, u32)> =
            orbits.iter().map(|(_, orb, st)| (orb.len(), st.order())).collect();
        data.sort_unstable();
        assert_eq!(data, vec![(1, 6), (2, 3), (3, 2)]);
        for (rep, _, stab) in &orbits {
            assert_eq!(stab.elements(), centralizer(&s3, *rep).elements());
        }
    }

    #[test]
    fn inner_automorphism_is_a_homomorphism() {
        let s3 = FiniteGroup::symmetric(3);
        for g in 0..6 {
            let f = GroupHom::inner_automorphism(s3.clone(), g);
            // Re-validate through the checked constructor.
            let checked = GroupHom::new(s3.clone(), s3.clone(), (0..6).map(|y| f.apply(y)).collect());
            assert!(checked.is_ok());
        }
    }

    #[test]
    fn hom_composition_and_products() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        let reduce = GroupHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        let flip = GroupHom::new(z2.clone(), z2.clone(), vec![0, 1]).unwrap();
        let comp = reduce.then(&flip);
        assert_eq!(comp.apply(3), 1);
        let prod = reduce.product(&flip, 1000).unwrap();
        assert_eq!(prod.source().order(), 8);
        assert_eq!(prod.target().order(), 4);
        // (3, 1) ↦ (1, 1): indices 3*2+1=7 ↦ 1*2+1=3.
        assert_eq!(prod.apply(7), 3);
        // Restriction of `reduce` to the order-2 subgroup of Z/4 kills it.
        let k = Subgroup::new(z4, vec![0, 2]).unwrap();
        let r = reduce.restrict(&k);
        assert_eq!(r.apply(1), 0);
    }

    #[test]
    fn dihedral_group_of_order_eight() {
        let d4 = FiniteGroup::dihedral(4);
        assert_eq!(d4.order(), 8);
        assert!(!d4.is_abelian());
        assert_eq!(d4.element_order(1), 4);
        assert_eq!(d4.element_order(4), 2);
        let sizes: Vec<usize> = conjugacy_classes(&d4).iter().map(|(_, c)| c.len()).collect();
        let mut sorted = sizes.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 1, 2, 2, 2]);
    }
}
