//! Representation varieties `fun(Π₁(X,P), G)` and their twisted symmetry.
//!
//! A functor from a free groupoid to a finite group is exactly an
//! assignment of one group element to every basis arrow, so the variety
//! is the finite set `G^rank`, enumerated here in lexicographic order
//! (first basis arrow most significant).
//!
//! The group `Γ × G^P` acts on functors: `Γ` through its groupoid action
//! and `G^P` by object-wise twisting,
//! `((γ,δ)·f)(α) = δ(tgt α) · f(F_{γ⁻¹} α) · δ(src α)⁻¹`.
//! Orbit decomposition always picks the lexicographically least functor
//! of each orbit as its representative.

use crate::fingroup::FiniteGroup;
use crate::freegpd::{FreeGroupoid, GroupoidAction, GroupoidMorphism};
use crate::{Caps, Error, Result};

/// A functor to `G`, as the list of values on basis arrows.
pub type Functor = Vec<u32>;

/// An element of `Γ × G^P`: the `Γ`-part and the object-indexed tuple.
pub type Pair = (u32, Vec<u32>);

/// The fully enumerated variety `fun(gpd, G)`.
#[derive(Clone, Debug)]
pub struct RepVariety {
    pub group: FiniteGroup,
    pub rank: usize,
    /// All functors in lexicographic order.
    pub functors: Vec<Functor>,
}

impl RepVariety {
    pub fn enumerate(gpd: &FreeGroupoid, group: &FiniteGroup, caps: &Caps) -> Result<RepVariety> {
        let rank = gpd.rank();
        let total = match (group.order() as u64).checked_pow(rank as u32) {
            Some(t) if t <= caps.functor_enum => t,
            Some(t) => return Err(Error::EnumerationCapExceeded(t, caps.functor_enum)),
            None => return Err(Error::EnumerationCapExceeded(u64::MAX, caps.functor_enum)),
        };
        let mut functors = Vec::with_capacity(total as usize);
        let mut current = vec![0u32; rank];
        loop {
            functors.push(current.clone());
            // Odometer increment, least significant digit last.
            let mut i = rank;
            loop {
                if i == 0 {
                    return Ok(RepVariety { group: group.clone(), rank, functors });
                }
                i -= 1;
                current[i] += 1;
                if current[i] < group.order() {
                    break;
                }
                current[i] = 0;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.functors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functors.is_empty()
    }

    /// Position of a functor in the lexicographic enumeration.
    pub fn index_of(&self, f: &[u32]) -> usize {
        let mut idx = 0usize;
        for &v in f {
            idx = idx * self.group.order() as usize + v as usize;
        }
        idx
    }
}

/// The data needed to act with `Γ × G^P` on functors: the groupoid (for
/// arrow endpoints), the target group, and the `Γ`-action by functors.
#[derive(Clone, Debug)]
pub struct TwistedSetup {
    pub gpd: FreeGroupoid,
    pub group: FiniteGroup,
    pub action: GroupoidAction,
}

impl TwistedSetup {
    pub fn new(gpd: FreeGroupoid, group: FiniteGroup, action: GroupoidAction) -> TwistedSetup {
        TwistedSetup { gpd, group, action }
    }

    /// With trivial `Γ`.
    pub fn untwisted(gpd: FreeGroupoid, group: FiniteGroup) -> TwistedSetup {
        let action = GroupoidAction::trivial(&gpd);
        TwistedSetup { gpd, group, action }
    }

    /// Apply `(γ, δ) ∈ Γ × G^P` to a functor.
    pub fn act(&self, gamma: u32, delta: &[u32], f: &[u32]) -> Functor {
        debug_assert_eq!(delta.len(), self.gpd.n_objects());
        debug_assert_eq!(f.len(), self.gpd.rank());
        let back = self.action.functor(self.action.gamma.inv(gamma));
        self.gpd
            .basis()
            .iter()
            .enumerate()
            .map(|(i, arrow)| {
                let moved = back.arrow_word(i).evaluate(&self.group, f);
                self.group.mul(
                    delta[arrow.tgt],
                    self.group.mul(moved, self.group.inv(delta[arrow.src])),
                )
            })
            .collect()
    }

    /// All of `Γ × G^P` as pairs, in the order matching the element
    /// indexing of the product group `Γ × G × … × G` (`Γ` most
    /// significant, then one `G`-digit per object).
    pub fn all_pairs(&self) -> Vec<Pair> {
        let n = self.gpd.n_objects();
        let g = self.group.order();
        let mut pairs = Vec::new();
        for gamma in 0..self.action.gamma.order() {
            let mut delta = vec![0u32; n];
            loop {
                pairs.push((gamma, delta.clone()));
                let mut i = n;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    delta[i] += 1;
                    if delta[i] < g {
                        break;
                    }
                    delta[i] = 0;
                }
                if delta.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        pairs
    }

    /// The elements of the pair list fixing `point`.
    pub fn stabilizer_of(&self, pairs: &[Pair], point: &[u32]) -> Vec<Pair> {
        pairs
            .iter()
            .filter(|(g, d)| self.act(*g, d, point) == point)
            .cloned()
            .collect()
    }

    /// Product in `Γ × G^P` (the action is a left action for exactly this
    /// componentwise multiplication).
    pub fn pair_mul(&self, a: &Pair, b: &Pair) -> Pair {
        let gamma = self.action.gamma.mul(a.0, b.0);
        let delta = a.1.iter().zip(&b.1).map(|(&x, &y)| self.group.mul(x, y)).collect();
        (gamma, delta)
    }

    pub fn pair_inv(&self, a: &Pair) -> Pair {
        (self.action.gamma.inv(a.0), a.1.iter().map(|&x| self.group.inv(x)).collect())
    }
}

/// The result of an orbit decomposition of a listed point set.
#[derive(Clone, Debug)]
pub struct Orbits {
    /// Orbit id per point index.
    pub orbit_of: Vec<u32>,
    /// Per orbit: the index of its representative (the least point index,
    /// hence the lexicographically least functor when points are sorted).
    pub reps: Vec<usize>,
    /// Per orbit: the pairs (indices into the acting element list) fixing
    /// the representative.
    pub stabilizers: Vec<Vec<usize>>,
    /// Per point: a pair carrying it onto its orbit's representative.
    pub carriers: Vec<Pair>,
}

/// Decompose a sorted list of functors into orbits under the listed
/// acting pairs.  The action must preserve the set.
pub fn orbit_decompose(setup: &TwistedSetup, points: &[Functor], elements: &[Pair]) -> Result<Orbits> {
    let mut orbit_of = vec![u32::MAX; points.len()];
    let mut reps = Vec::new();
    let mut stabilizers = Vec::new();
    let identity: Pair = (0, vec![0u32; setup.gpd.n_objects()]);
    let mut carriers: Vec<Pair> = vec![identity.clone(); points.len()];
    for start in 0..points.len() {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(start);
        orbit_of[start] = id;
        let mut frontier = vec![start];
        let mut stab = Vec::new();
        while let Some(p) = frontier.pop() {
            for (ei, (g, d)) in elements.iter().enumerate() {
                let img = setup.act(*g, d, &points[p]);
                let q = points
                    .binary_search(&img)
                    .map_err(|_| Error::ActionLawViolation("action leaves the point set".into()))?;
                if p == start && q == start {
                    stab.push(ei);
                }
                if orbit_of[q] == u32::MAX {
                    orbit_of[q] = id;
                    // points[q] = e·points[p], so carrier(p)·e⁻¹ sends
                    // points[q] back to the representative.
                    carriers[q] =
                        setup.pair_mul(&carriers[p], &setup.pair_inv(&elements[ei]));
                    debug_assert_eq!(
                        setup.act(carriers[q].0, &carriers[q].1, &points[q]),
                        points[start]
                    );
                    frontier.push(q);
                }
            }
        }
        stabilizers.push(stab);
    }
    Ok(Orbits { orbit_of, reps, stabilizers, carriers })
}

/// All functors of `variety` restricting to `a` along `inclusion`
/// (a morphism into the variety's groupoid), in lexicographic order.
pub fn fibre(
    variety: &RepVariety,
    inclusion: &GroupoidMorphism,
    a: &[u32],
) -> Vec<Functor> {
    variety
        .functors
        .iter()
        .filter(|f| inclusion.pullback(&variety.group, f) == a)
        .cloned()
        .collect()
}

/// The lexicographically least functor of `variety` restricting to `m`
/// along `inclusion`.  The inclusion is always split in our setting, so a
/// missing extension is an internal error.
pub fn minimal_extension(
    variety: &RepVariety,
    inclusion: &GroupoidMorphism,
    m: &[u32],
) -> Result<Functor> {
    variety
        .functors
        .iter()
        .find(|f| inclusion.pullback(&variety.group, f) == m)
        .cloned()
        .ok_or_else(|| Error::NoSolution("no extension along a split subgroupoid inclusion".into()))
}

/// Restrict stabilizer pairs over the larger basepoint list to the
/// coordinate window `offset..offset+len` and match them against the
/// stabilizer pairs over the smaller list.  Returns, per element of
/// `big`, the index of its image in `small`; fails with
/// [`Error::RebaseNotBijective`] unless this correspondence is a bijection.
pub fn rebase_iso(big: &[Pair], small: &[Pair], offset: usize, len: usize) -> Result<Vec<usize>> {
    if big.len() != small.len() {
        return Err(Error::RebaseNotBijective(format!(
            "stabilizer orders differ: {} vs {}",
            big.len(),
            small.len()
        )));
    }
    let mut hit = vec![false; small.len()];
    let mut map = Vec::with_capacity(big.len());
    for (g, d) in big {
        let restricted = (*g, d[offset..offset + len].to_vec());
        let pos = small
            .iter()
            .position(|p| *p == restricted)
            .ok_or_else(|| Error::RebaseNotBijective("restricted pair missing".into()))?;
        if hit[pos] {
            return Err(Error::RebaseNotBijective("restriction is not injective".into()));
        }
        hit[pos] = true;
        map.push(pos);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::centralizer;
    use crate::freegpd::FreeGroupoid;
    use crate::hgraph::{make_theorem91_family, whiskered_graph, Dir, Graph, GraphAutomorphism, GraphMap};
    use crate::Caps;

    fn circle_setup(group: FiniteGroup) -> TwistedSetup {
        let circle = Graph::new(1, vec![(0, 0)]).unwrap();
        let gpd = FreeGroupoid::new(&circle, &[0]).unwrap();
        TwistedSetup::untwisted(gpd, group)
    }

    #[test]
    fn circle_orbits_are_conjugacy_classes() {
        let s3 = FiniteGroup::symmetric(3);
        let setup = circle_setup(s3.clone());
        let variety = RepVariety::enumerate(&setup.gpd, &s3, &Caps::default()).unwrap();
        assert_eq!(variety.len(), 6);
        let pairs = setup.all_pairs();
        assert_eq!(pairs.len(), 6);
        let orbits = orbit_decompose(&setup, &variety.functors, &pairs).unwrap();
        assert_eq!(orbits.reps.len(), 3);
        let rep_values: Vec<u32> = orbits.reps.iter().map(|&i| variety.functors[i][0]).collect();
        assert_eq!(rep_values, vec![0, 1, 3]);
        // Stabilizers are centralizers.
        for (o, &rep) in orbits.reps.iter().enumerate() {
            let g = variety.functors[rep][0];
            let z = centralizer(&s3, g);
            let stab: Vec<u32> =
                orbits.stabilizers[o].iter().map(|&ei| pairs[ei].1[0]).collect();
            assert_eq!(stab, z.elements().to_vec());
        }
        // Orbit sizes are the class sizes 1, 3, 2.
        let mut sizes = vec![0usize; 3];
        for &o in &orbits.orbit_of {
            sizes[o as usize] += 1;
        }
        assert_eq!(sizes, vec![1, 3, 2]);
    }

    #[test]
    fn pair_action_is_a_left_action() {
        let fam = make_theorem91_family();
        let wg = whiskered_graph(&fam.cob.core, &[0], &[2]);
        let gpd = FreeGroupoid::new(&wg.graph, &[wg.p_leaves[0], wg.q_leaves[0]]).unwrap();
        let autos: Vec<GraphAutomorphism> =
            fam.action.iter().map(|a| wg.extend_automorphism(a).unwrap()).collect();
        let action = GroupoidAction::induced(&gpd, &fam.gamma, &autos).unwrap();
        let z2 = FiniteGroup::cyclic(2);
        let setup = TwistedSetup::new(gpd, z2.clone(), action);
        let variety = RepVariety::enumerate(&setup.gpd, &z2, &Caps::default()).unwrap();
        let pairs = setup.all_pairs();
        assert_eq!(pairs.len(), 2 * 4);
        for (g1, d1) in &pairs {
            for (g2, d2) in &pairs {
                let prod_gamma = fam.gamma.mul(*g1, *g2);
                let prod_delta: Vec<u32> =
                    d1.iter().zip(d2).map(|(&a, &b)| z2.mul(a, b)).collect();
                for f in &variety.functors {
                    let one_shot = setup.act(prod_gamma, &prod_delta, f);
                    let two_step = setup.act(*g1, d1, &setup.act(*g2, d2, f));
                    assert_eq!(one_shot, two_step);
                }
            }
        }
    }

    #[test]
    fn reflection_stabilizers_match_the_closed_form() {
        // Over Z/4, the stabilizer of the functor (C ↦ c, λ ↦ g) is
        // {(0, d, d)} plus, when 2g = 0, {(1, d, d+g)}.
        let fam = make_theorem91_family();
        let wg = whiskered_graph(&fam.cob.core, &[0], &[2]);
        let gpd = FreeGroupoid::new(&wg.graph, &[wg.p_leaves[0], wg.q_leaves[0]]).unwrap();
        let autos: Vec<GraphAutomorphism> =
            fam.action.iter().map(|a| wg.extend_automorphism(a).unwrap()).collect();
        let action = GroupoidAction::induced(&gpd, &fam.gamma, &autos).unwrap();
        let z4 = FiniteGroup::cyclic(4);
        let setup = TwistedSetup::new(gpd, z4.clone(), action);
        let pairs = setup.all_pairs();
        for c in 0..4u32 {
            for g in 0..4u32 {
                let stab = setup.stabilizer_of(&pairs, &[c, g]);
                let mut expected: Vec<Pair> = (0..4).map(|d| (0, vec![d, d])).collect();
                if z4.mul(g, g) == 0 {
                    expected.extend((0..4).map(|d| (1u32, vec![d, z4.mul(d, g)])));
                }
                expected.sort();
                let mut got = stab.clone();
                got.sort();
                assert_eq!(got, expected, "c={c} g={g}");
            }
        }
    }

    #[test]
    fn fibres_and_minimal_extensions() {
        let fam = make_theorem91_family();
        let core = &fam.cob.core;
        let z2 = FiniteGroup::cyclic(2);
        let caps = Caps::default();
        // 𝖲_P: incoming whisker only; 𝖲_R: both whiskers.
        let wp = whiskered_graph(core, &[0], &[]);
        let wr = whiskered_graph(core, &[0], &[2]);
        let sp = FreeGroupoid::new(&wp.graph, &[wp.p_leaves[0]]).unwrap();
        let sr = FreeGroupoid::new(&wr.graph, &[wr.p_leaves[0], wr.q_leaves[0]]).unwrap();
        // The incoming point includes into 𝖲_P with rank-0 source, so the
        // fibre over its unique functor is the whole variety.
        let pt = Graph::new(1, vec![]).unwrap();
        let x_gpd = FreeGroupoid::new(&pt, &[0]).unwrap();
        let x_map = GraphMap::new(pt.clone(), wp.graph.clone(), vec![0], vec![]).unwrap();
        let entry = vec![vec![(wp.p_whiskers[0], Dir::Rev)]];
        let inc = GroupoidMorphism::induced(&x_gpd, &sp, &x_map, vec![0], entry).unwrap();
        let vp = RepVariety::enumerate(&sp, &z2, &caps).unwrap();
        assert_eq!(fibre(&vp, &inc, &[]).len(), 2);
        // 𝖲_P sits in 𝖲_R as an index-preserving prefix; its loop maps to
        // the loop, so extensions fill the connector with zero first.
        let prefix_map = GraphMap::new(
            wp.graph.clone(),
            wr.graph.clone(),
            (0..wp.graph.n_vertices()).collect(),
            (0..wp.graph.n_edges()).map(|e| vec![(e, Dir::Fwd)]).collect(),
        )
        .unwrap();
        let sub = GroupoidMorphism::induced(&sp, &sr, &prefix_map, vec![0], vec![vec![]]).unwrap();
        let vr = RepVariety::enumerate(&sr, &z2, &caps).unwrap();
        for g in 0..2u32 {
            let ext = minimal_extension(&vr, &sub, &[g]).unwrap();
            assert_eq!(ext, vec![0, g]);
            assert_eq!(fibre(&vr, &sub, &[g]).len(), 2);
        }
    }

    #[test]
    fn rebase_restriction_must_be_bijective() {
        let big: Vec<Pair> = vec![(0, vec![0, 0]), (0, vec![1, 1])];
        let small: Vec<Pair> = vec![(0, vec![0]), (0, vec![1])];
        assert_eq!(rebase_iso(&big, &small, 0, 1).unwrap(), vec![0, 1]);
        // Restriction to the trailing coordinate also works.
        let tail: Vec<Pair> = vec![(0, vec![1, 0]), (0, vec![0, 1])];
        assert_eq!(rebase_iso(&tail, &small, 1, 1).unwrap(), vec![0, 1]);
        // Colliding restrictions are rejected.
        let bad: Vec<Pair> = vec![(0, vec![0, 0]), (0, vec![0, 1])];
        assert!(matches!(
            rebase_iso(&bad, &small, 0, 1),
            Err(Error::RebaseNotBijective(_))
        ));
        // Order mismatch is rejected.
        assert!(matches!(
            rebase_iso(&big[..1], &small, 0, 1),
            Err(Error::RebaseNotBijective(_))
        ));
    }

    #[test]
    fn enumeration_respects_the_cap() {
        let s3 = FiniteGroup::symmetric(3);
        let wedge = Graph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let gpd = FreeGroupoid::new(&wedge, &[0]).unwrap();
        let mut caps = Caps::default();
        caps.functor_enum = 10;
        assert!(matches!(
            RepVariety::enumerate(&gpd, &s3, &caps),
            Err(Error::EnumerationCapExceeded(..))
        ));
    }
}
