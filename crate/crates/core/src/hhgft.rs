//! The field-theory engine: state spaces `Φ(X, P; G)`, operations of
//! family cobordisms on them, basepoint changes, tensor products, and the
//! axiom verification suites.
//!
//! A state space is the orbit decomposition of `fun(Π₁(X,P), G)` under the
//! conjugation action of `G^P`; a state assigns to each orbit a homology
//! class over the orbit's stabilizer.  A family cobordism acts by the
//! five-step push-pull pipeline implemented in [`operate`]: cross with the
//! parameter class, transfer along the fibre inclusion, extend basepoints,
//! restrict to the outgoing boundary, and push into the outgoing
//! stabilizers.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::barhom::{
    class_of, cross_product, homology_dim, induced_map, kunneth_split, representative, transfer,
    HomologyClass,
};
use crate::fingroup::{FiniteGroup, GroupHom, Subgroup};
use crate::freegpd::{FreeGroupoid, GroupoidAction, GroupoidMorphism};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::hgraph::{
    whiskered_graph, Dir, EdgeStep, FamilyCobordism, Graph, GraphAutomorphism, GraphMap,
};
use crate::repvar::{
    fibre, minimal_extension, orbit_decompose, rebase_iso, Orbits, Pair, RepVariety, TwistedSetup,
};
use crate::{Context, Error, Result};

/// The restriction of an orbit stabilizer to one component of the
/// groupoid: the basepoint positions lying in the component, the sorted
/// local twist tuples, and those tuples materialized as a concrete group.
#[derive(Clone, Debug)]
pub struct StabComponent {
    /// Positions into the basepoint list covered by this component.
    pub positions: Vec<usize>,
    /// Sorted local tuples; position in this list = element of `atom`.
    pub elements: Vec<Vec<u32>>,
    /// The component stabilizer as a concrete group.
    pub atom: FiniteGroup,
}

/// A point stabilizer `Stab_{G^P}(a)` materialized componentwise as a
/// registered direct product, so that its homology carries the canonical
/// Künneth basis of the component factors.
#[derive(Clone, Debug)]
pub struct StabGroup {
    pub components: Vec<StabComponent>,
    /// Direct product of the nontrivial component atoms (trivial if none).
    pub group: FiniteGroup,
}

impl StabGroup {
    /// Build the componentwise model of the subgroup of `G^P` given by
    /// `stab` (pairs with trivial first coordinate).  Stabilizers of a
    /// product action always factor over components; a failure here means
    /// the pairs are not a stabilizer.
    fn materialize(
        gpd: &FreeGroupoid,
        group: &FiniteGroup,
        stab: &[Pair],
        max_order: u32,
    ) -> Result<StabGroup> {
        let n_obj = gpd.n_objects();
        let n_comp = gpd.graph().n_components();
        let mut components = Vec::new();
        for c in 0..n_comp {
            let positions: Vec<usize> =
                (0..n_obj).filter(|&o| gpd.component_of_object(o) == c).collect();
            if positions.is_empty() {
                continue;
            }
            let set: BTreeSet<Vec<u32>> = stab
                .iter()
                .map(|(_, d)| positions.iter().map(|&o| d[o]).collect::<Vec<u32>>())
                .collect();
            let elements: Vec<Vec<u32>> = set.into_iter().collect();
            let n = elements.len();
            let mut table = vec![vec![0u32; n]; n];
            for (i, ei) in elements.iter().enumerate() {
                for (j, ej) in elements.iter().enumerate() {
                    let prod: Vec<u32> =
                        ei.iter().zip(ej).map(|(&x, &y)| group.mul(x, y)).collect();
                    let pos = elements.binary_search(&prod).map_err(|_| {
                        Error::ActionLawViolation(
                            "stabilizer does not restrict to a subgroup on a component".into(),
                        )
                    })?;
                    table[i][j] = pos as u32;
                }
            }
            let atom = FiniteGroup::from_table(table)?;
            components.push(StabComponent { positions, elements, atom });
        }
        let product_order: u64 = components.iter().map(|c| c.atom.order() as u64).product();
        if product_order != stab.len() as u64 {
            return Err(Error::ActionLawViolation(
                "stabilizer does not factor over graph components".into(),
            ));
        }
        let mut acc = FiniteGroup::trivial();
        for c in &components {
            if c.atom.order() > 1 {
                acc = acc.direct_product(&c.atom, max_order)?;
            }
        }
        Ok(StabGroup { components, group: acc })
    }

    /// Encode a stabilizing twist `δ ∈ G^P` as an element of the
    /// materialized group; `None` if `δ` does not stabilize the orbit
    /// representative.
    pub fn delta_to_elt(&self, delta: &[u32]) -> Option<u32> {
        let mut digits = Vec::new();
        for c in &self.components {
            let local: Vec<u32> = c.positions.iter().map(|&o| delta[o]).collect();
            let pos = c.elements.binary_search(&local).ok()?;
            if c.atom.order() > 1 {
                digits.push(pos as u32);
            }
        }
        Some(if digits.is_empty() { 0 } else { self.group.encode(&digits) })
    }

    /// Decode an element of the materialized group back into a twist over
    /// the full basepoint list.
    pub fn elt_to_delta(&self, elt: u32, n_objects: usize) -> Vec<u32> {
        let mut delta = vec![0u32; n_objects];
        let digits = if self.group.order() > 1 { self.group.decode(elt) } else { Vec::new() };
        let mut next = 0usize;
        for c in &self.components {
            let pos = if c.atom.order() > 1 {
                let d = digits[next] as usize;
                next += 1;
                d
            } else {
                0
            };
            for (k, &o) in c.positions.iter().enumerate() {
                delta[o] = c.elements[pos][k];
            }
        }
        delta
    }
}

/// The state space `Φ(X, P; G)`: the representation variety of the free
/// groupoid on `(X, P)`, its orbit decomposition under `G^P`, and a
/// materialized stabilizer per orbit.
#[derive(Debug)]
pub struct StateSpace {
    pub graph: Graph,
    pub basepoints: Vec<usize>,
    /// The untwisted `G^P`-action on the variety.
    pub setup: TwistedSetup,
    pub variety: RepVariety,
    /// All acting pairs, in group-element order.
    pub pairs: Vec<Pair>,
    pub orbits: Orbits,
    /// Materialized stabilizer per orbit, aligned with `orbits.reps`.
    pub stabs: Vec<StabGroup>,
}

impl StateSpace {
    pub fn group(&self) -> &FiniteGroup {
        &self.setup.group
    }

    pub fn gpd(&self) -> &FreeGroupoid {
        &self.setup.gpd
    }

    pub fn n_orbits(&self) -> usize {
        self.orbits.reps.len()
    }

    /// The canonical (lexicographically least) representative functor of
    /// an orbit.
    pub fn orbit_rep(&self, orbit: usize) -> &[u32] {
        &self.variety.functors[self.orbits.reps[orbit]]
    }

    /// Per-orbit homology dimensions in one degree.
    pub fn dims(&self, ctx: &Context, degree: usize) -> Result<Vec<usize>> {
        self.stabs.iter().map(|s| homology_dim(ctx, &s.group, degree)).collect()
    }

    pub fn total_dim(&self, ctx: &Context, degree: usize) -> Result<usize> {
        Ok(self.dims(ctx, degree)?.iter().sum())
    }

    /// Same boundary data: graph, basepoints, and group.
    pub fn matches(&self, other: &StateSpace) -> bool {
        self.graph == other.graph
            && self.basepoints == other.basepoints
            && self.setup.group.key() == other.setup.group.key()
    }
}

/// Build the state space for `(x, p)` with coefficients in `G`.
pub fn state_space(
    ctx: &Context,
    graph: &Graph,
    basepoints: &[usize],
    group: &FiniteGroup,
) -> Result<StateSpace> {
    let gpd = FreeGroupoid::new(graph, basepoints)?;
    let mut count = 1u64;
    for _ in 0..gpd.n_objects() {
        count = count.saturating_mul(group.order() as u64);
        if count > ctx.caps.functor_enum {
            return Err(Error::EnumerationCapExceeded(count, ctx.caps.functor_enum));
        }
    }
    let setup = TwistedSetup::untwisted(gpd, group.clone());
    let variety = RepVariety::enumerate(&setup.gpd, group, &ctx.caps)?;
    let pairs = setup.all_pairs();
    let orbits = orbit_decompose(&setup, &variety.functors, &pairs)?;
    let stabs: Vec<StabGroup> = orbits
        .stabilizers
        .iter()
        .map(|ixs| {
            let stab: Vec<Pair> = ixs.iter().map(|&i| pairs[i].clone()).collect();
            StabGroup::materialize(&setup.gpd, group, &stab, ctx.caps.max_group_order)
        })
        .collect::<Result<_>>()?;
    Ok(StateSpace {
        graph: graph.clone(),
        basepoints: basepoints.to_vec(),
        setup,
        variety,
        pairs,
        orbits,
        stabs,
    })
}

/// A homogeneous state: one homology class per orbit, all in one degree.
#[derive(Clone, Debug)]
pub struct TheoryState {
    pub space: Arc<StateSpace>,
    pub degree: usize,
    pub components: Vec<HomologyClass>,
}

impl TheoryState {
    pub fn zero(ctx: &Context, space: Arc<StateSpace>, degree: usize) -> Result<TheoryState> {
        let components = space
            .stabs
            .iter()
            .map(|s| {
                Ok(HomologyClass::zero(s.group.clone(), degree, homology_dim(ctx, &s.group, degree)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TheoryState { space, degree, components })
    }

    /// The basis state with a single canonical class on one orbit.
    pub fn basis_state(
        ctx: &Context,
        space: Arc<StateSpace>,
        degree: usize,
        orbit: usize,
        coord: usize,
    ) -> Result<TheoryState> {
        let mut state = TheoryState::zero(ctx, space, degree)?;
        if orbit >= state.components.len() || coord >= state.components[orbit].coords.len() {
            return Err(Error::ValidationFailed(format!(
                "basis index (orbit {orbit}, class {coord}) out of range"
            )));
        }
        state.components[orbit].coords.set(coord, true);
        Ok(state)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add_assign(&mut self, other: &TheoryState) {
        assert!(
            self.space.matches(&other.space) && self.degree == other.degree,
            "state spaces or degrees differ"
        );
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.add_assign(b);
        }
    }

    pub fn equals(&self, other: &TheoryState) -> bool {
        self.space.matches(&other.space)
            && self.degree == other.degree
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.coords == b.coords)
    }
}

/// The `idx`-th canonical basis class of `H_degree(BG)`.
pub fn basis_class(
    ctx: &Context,
    group: &FiniteGroup,
    degree: usize,
    idx: usize,
) -> Result<HomologyClass> {
    let dim = homology_dim(ctx, group, degree)?;
    if idx >= dim {
        return Err(Error::ValidationFailed(format!(
            "class index {idx} out of range for dimension {dim}"
        )));
    }
    let mut class = HomologyClass::zero(group.clone(), degree, dim);
    class.coords.set(idx, true);
    Ok(class)
}

/// The degree-0 generator over the trivial group (the parameter class of
/// an untwisted family).
pub fn unit_class() -> HomologyClass {
    HomologyClass {
        group: FiniteGroup::trivial(),
        degree: 0,
        coords: Gf2Vector::from_support(1, &[0]),
    }
}

/// The whiskered groupoids and inclusion functors of one family cobordism
/// with chosen boundary basepoints: everything in the operation pipeline
/// that does not depend on the input state.
struct CobordismSetup {
    setup_p: TwistedSetup,
    setup_r: TwistedSetup,
    variety_p: RepVariety,
    variety_r: RepVariety,
    pairs_r: Vec<Pair>,
    incl_x: GroupoidMorphism,
    incl_pr: GroupoidMorphism,
    incl_y: GroupoidMorphism,
}

/// Rebuild a graph map with its target enlarged to a graph containing the
/// original target as an index-preserving subgraph.
fn retarget(map: &GraphMap, target: &Graph) -> Result<GraphMap> {
    let source = map.source().clone();
    let vertices: Vec<usize> = (0..source.n_vertices()).map(|v| map.vertex_image(v)).collect();
    let edges: Vec<Vec<EdgeStep>> =
        (0..source.n_edges()).map(|e| map.edge_image(e).to_vec()).collect();
    GraphMap::new(source, target.clone(), vertices, edges)
}

/// The identity-on-indices inclusion of a prefix subgraph.
fn prefix_map(sub: &Graph, full: &Graph) -> Result<GraphMap> {
    GraphMap::new(
        sub.clone(),
        full.clone(),
        (0..sub.n_vertices()).collect(),
        (0..sub.n_edges()).map(|e| vec![(e, Dir::Fwd)]).collect(),
    )
}

fn cobordism_setup(
    ctx: &Context,
    fam: &FamilyCobordism,
    in_space: &StateSpace,
    out_space: &StateSpace,
) -> Result<CobordismSetup> {
    let cob = &fam.cob;
    let p_attach: Vec<usize> =
        in_space.basepoints.iter().map(|&v| cob.phi_x.vertex_image(v)).collect();
    let q_attach: Vec<usize> =
        out_space.basepoints.iter().map(|&v| cob.phi_y.vertex_image(v)).collect();
    let np = p_attach.len();
    let nq = q_attach.len();
    let wp = whiskered_graph(&cob.core, &p_attach, &[]);
    let wr = whiskered_graph(&cob.core, &p_attach, &q_attach);
    let bp_p = wp.p_leaves.clone();
    let mut bp_r = wr.p_leaves.clone();
    bp_r.extend(&wr.q_leaves);
    let gpd_p = FreeGroupoid::new(&wp.graph, &bp_p)?;
    let gpd_r = FreeGroupoid::new(&wr.graph, &bp_r)?;

    let entries_x: Vec<Vec<EdgeStep>> =
        (0..np).map(|i| vec![(wp.p_whiskers[i], Dir::Rev)]).collect();
    let incl_x = GroupoidMorphism::induced(
        in_space.gpd(),
        &gpd_p,
        &retarget(&cob.phi_x, &wp.graph)?,
        (0..np).collect(),
        entries_x,
    )?;
    let incl_pr = GroupoidMorphism::induced(
        &gpd_p,
        &gpd_r,
        &prefix_map(&wp.graph, &wr.graph)?,
        (0..np).collect(),
        vec![Vec::new(); np],
    )?;
    let entries_y: Vec<Vec<EdgeStep>> =
        (0..nq).map(|j| vec![(wr.q_whiskers[j], Dir::Rev)]).collect();
    let incl_y = GroupoidMorphism::induced(
        out_space.gpd(),
        &gpd_r,
        &retarget(&cob.phi_y, &wr.graph)?,
        (np..np + nq).collect(),
        entries_y,
    )?;

    let autos_p: Vec<GraphAutomorphism> =
        fam.action.iter().map(|a| wp.extend_automorphism(a)).collect::<Result<_>>()?;
    let autos_r: Vec<GraphAutomorphism> =
        fam.action.iter().map(|a| wr.extend_automorphism(a)).collect::<Result<_>>()?;
    let action_p = GroupoidAction::induced(&gpd_p, &fam.gamma, &autos_p)?;
    let action_r = GroupoidAction::induced(&gpd_r, &fam.gamma, &autos_r)?;
    let group = in_space.group().clone();
    let setup_p = TwistedSetup::new(gpd_p, group.clone(), action_p);
    let setup_r = TwistedSetup::new(gpd_r, group.clone(), action_r);
    let variety_p = RepVariety::enumerate(&setup_p.gpd, &group, &ctx.caps)?;
    let variety_r = RepVariety::enumerate(&setup_r.gpd, &group, &ctx.caps)?;
    let mut count = fam.gamma.order() as u64;
    for _ in 0..setup_r.gpd.n_objects() {
        count = count.saturating_mul(group.order() as u64);
        if count > ctx.caps.functor_enum {
            return Err(Error::EnumerationCapExceeded(count, ctx.caps.functor_enum));
        }
    }
    let pairs_r = setup_r.all_pairs();
    Ok(CobordismSetup {
        setup_p,
        setup_r,
        variety_p,
        variety_r,
        pairs_r,
        incl_x,
        incl_pr,
        incl_y,
    })
}

/// Decode an element of `Γ × K̂` (the parameter group crossed with a
/// materialized stabilizer) into an acting pair over `n_objects`
/// basepoints.
fn elt_to_pair(
    m_group: &FiniteGroup,
    gamma: &FiniteGroup,
    stab: &StabGroup,
    elt: u32,
    n_objects: usize,
) -> Pair {
    let digits = m_group.decode(elt);
    let ng = if gamma.order() > 1 { gamma.flat_factors().len() } else { 0 };
    let g = if ng == 0 { 0 } else { gamma.encode(&digits[..ng]) };
    let k = if digits.len() > ng && stab.group.order() > 1 {
        stab.group.encode(&digits[ng..])
    } else {
        0
    };
    (g, stab.elt_to_delta(k, n_objects))
}

/// Apply the family operation `Φ(S/BΓ)(β ⊗ θ)`.
///
/// `p` and `q` are the incoming and outgoing basepoints; `theta` must live
/// on `(X, p)` over some finite `G`, and `beta` over the family group `Γ`.
/// The result lives on `(Y, q)` in degree `deg β + deg θ`.
pub fn operate(
    ctx: &Context,
    fam: &FamilyCobordism,
    p: &[usize],
    q: &[usize],
    beta: &HomologyClass,
    theta: &TheoryState,
) -> Result<TheoryState> {
    let report = fam.cob.validate();
    if !report.is_ok() {
        return Err(Error::ValidationFailed(format!(
            "cobordism fails validation: {}",
            report.issues.join("; ")
        )));
    }
    if theta.space.graph != fam.cob.x || theta.space.basepoints != p {
        return Err(Error::ValidationFailed(
            "state does not live on the incoming boundary (X, P)".into(),
        ));
    }
    if beta.group.key() != fam.gamma.key() {
        return Err(Error::ValidationFailed(
            "parameter class is not over the family group".into(),
        ));
    }
    let group = theta.space.group().clone();
    let out_space = Arc::new(state_space(ctx, &fam.cob.y, q, &group)?);
    let degree = beta.degree + theta.degree;
    let mut out = TheoryState::zero(ctx, out_space.clone(), degree)?;
    if beta.is_zero() || theta.is_zero() {
        return Ok(out);
    }
    let cs = cobordism_setup(ctx, fam, &theta.space, &out_space)?;
    let beta_rep = representative(ctx, beta)?;
    let np = p.len();
    let nq = q.len();

    for (a_idx, class) in theta.components.iter().enumerate() {
        if class.is_zero() {
            continue;
        }
        let khat = &theta.space.stabs[a_idx];
        let m_group = fam.gamma.direct_product(&khat.group, ctx.caps.max_group_order)?;
        let theta_rep = representative(ctx, class)?;
        let crossed = cross_product(&m_group, &beta_rep, &theta_rep)?;
        if crossed.is_zero() {
            continue;
        }
        let a = &theta.space.variety.functors[theta.space.orbits.reps[a_idx]];
        let fibre_points = fibre(&cs.variety_p, &cs.incl_x, a);
        if fibre_points.is_empty() {
            continue;
        }
        // Γ × Stab(a) as acting pairs, listed in the element order of
        // `m_group` so that orbit stabilizer indices are group elements.
        let elements: Vec<Pair> = (0..m_group.order())
            .map(|e| elt_to_pair(&m_group, &fam.gamma, khat, e, np))
            .collect();
        let orbs = orbit_decompose(&cs.setup_p, &fibre_points, &elements)?;
        for (m_idx, &rep_pos) in orbs.reps.iter().enumerate() {
            let positions: Vec<u32> =
                orbs.stabilizers[m_idx].iter().map(|&i| i as u32).collect();
            let sub = Subgroup::new(m_group.clone(), positions)?;
            let tau = transfer(&sub, &crossed)?;
            if tau.is_zero() {
                continue;
            }
            let m = &fibre_points[rep_pos];
            let m_hat = minimal_extension(&cs.variety_r, &cs.incl_pr, m)?;
            let l_r = cs.setup_r.stabilizer_of(&cs.pairs_r, &m_hat);
            let l_pairs: Vec<Pair> =
                orbs.stabilizers[m_idx].iter().map(|&i| elements[i].clone()).collect();
            // Restricting stabilizers over R to the incoming window is an
            // isomorphism; keep that as a structural check.
            rebase_iso(&l_r, &l_pairs, 0, np)?;
            let n = cs.incl_y.pullback(&group, &m_hat);
            let n_pos = out_space.variety.index_of(&n);
            let out_orbit = out_space.orbits.orbit_of[n_pos] as usize;
            let delta0 = &out_space.orbits.carriers[n_pos].1;
            let out_stab = &out_space.stabs[out_orbit];
            let (l_group, l_elements) = sub.as_group();
            let mut table = Vec::with_capacity(l_group.order() as usize);
            for &me in &l_elements {
                let pair = &elements[me as usize];
                let big = l_r
                    .iter()
                    .find(|(g, d)| *g == pair.0 && d[..np] == pair.1[..])
                    .ok_or_else(|| {
                        Error::RebaseNotBijective("stabilizer pair has no extension over R".into())
                    })?;
                let u: Vec<u32> = (0..nq)
                    .map(|j| {
                        group.mul(
                            delta0[j],
                            group.mul(big.1[np + j], group.inv(delta0[j])),
                        )
                    })
                    .collect();
                let elt = out_stab.delta_to_elt(&u).ok_or_else(|| {
                    Error::ActionLawViolation(
                        "pushed twist escapes the outgoing stabilizer".into(),
                    )
                })?;
                table.push(elt);
            }
            let hom = GroupHom::new(l_group, out_stab.group.clone(), table)?;
            let pushed = induced_map(&hom, &tau);
            let cls = class_of(ctx, &pushed)?;
            out.components[out_orbit].add_assign(&cls);
        }
    }
    Ok(out)
}

/// Transport a state to a different basepoint list on the same graph,
/// along the canonical equivalence through the union list `P ∪ P_new`.
pub fn rebase_state(
    ctx: &Context,
    theta: &TheoryState,
    new_basepoints: &[usize],
) -> Result<TheoryState> {
    let space = &theta.space;
    if new_basepoints == space.basepoints.as_slice() {
        return Ok(theta.clone());
    }
    let group = space.group().clone();
    let out_space = Arc::new(state_space(ctx, &space.graph, new_basepoints, &group)?);
    let mut out = TheoryState::zero(ctx, out_space.clone(), theta.degree)?;
    let np = space.basepoints.len();
    let nn = new_basepoints.len();
    let mut union = space.basepoints.clone();
    union.extend_from_slice(new_basepoints);
    let gpd_r = FreeGroupoid::new(&space.graph, &union)?;
    let setup_r = TwistedSetup::untwisted(gpd_r, group.clone());
    let variety_r = RepVariety::enumerate(&setup_r.gpd, &group, &ctx.caps)?;
    let mut count = 1u64;
    for _ in 0..setup_r.gpd.n_objects() {
        count = count.saturating_mul(group.order() as u64);
        if count > ctx.caps.functor_enum {
            return Err(Error::EnumerationCapExceeded(count, ctx.caps.functor_enum));
        }
    }
    let pairs_r = setup_r.all_pairs();
    let id_map = GraphMap::identity(space.graph.clone());
    let incl_p = GroupoidMorphism::induced(
        space.gpd(),
        &setup_r.gpd,
        &id_map,
        (0..np).collect(),
        vec![Vec::new(); np],
    )?;
    let incl_n = GroupoidMorphism::induced(
        out_space.gpd(),
        &setup_r.gpd,
        &id_map,
        (np..np + nn).collect(),
        vec![Vec::new(); nn],
    )?;

    for (a_idx, class) in theta.components.iter().enumerate() {
        if class.is_zero() {
            continue;
        }
        let khat = &space.stabs[a_idx];
        let a = &space.variety.functors[space.orbits.reps[a_idx]];
        let a_hat = minimal_extension(&variety_r, &incl_p, a)?;
        let l_r = setup_r.stabilizer_of(&pairs_r, &a_hat);
        let k_pairs: Vec<Pair> =
            space.orbits.stabilizers[a_idx].iter().map(|&i| space.pairs[i].clone()).collect();
        rebase_iso(&l_r, &k_pairs, 0, np)?;
        let n = incl_n.pullback(&group, &a_hat);
        let n_pos = out_space.variety.index_of(&n);
        let out_orbit = out_space.orbits.orbit_of[n_pos] as usize;
        let delta0 = &out_space.orbits.carriers[n_pos].1;
        let out_stab = &out_space.stabs[out_orbit];
        let k_order = khat.group.order();
        let mut table = Vec::with_capacity(k_order as usize);
        for e in 0..k_order {
            let delta_p = khat.elt_to_delta(e, np);
            let big = l_r
                .iter()
                .find(|(_, d)| d[..np] == delta_p[..])
                .ok_or_else(|| {
                    Error::RebaseNotBijective("stabilizer twist has no extension".into())
                })?;
            let u: Vec<u32> = (0..nn)
                .map(|j| {
                    group.mul(delta0[j], group.mul(big.1[np + j], group.inv(delta0[j])))
                })
                .collect();
            let elt = out_stab.delta_to_elt(&u).ok_or_else(|| {
                Error::ActionLawViolation("rebased twist escapes the new stabilizer".into())
            })?;
            table.push(elt);
        }
        // The transport is the composite of two stabilizer isomorphisms,
        // so it must be bijective.
        let mut seen = vec![false; out_stab.group.order() as usize];
        if out_stab.group.order() != k_order
            || table.iter().any(|&t| std::mem::replace(&mut seen[t as usize], true))
        {
            return Err(Error::RebaseNotBijective(
                "stabilizer transport is not bijective".into(),
            ));
        }
        let hom = GroupHom::new(khat.group.clone(), out_stab.group.clone(), table)?;
        let rep = representative(ctx, class)?;
        let pushed = induced_map(&hom, &rep);
        let cls = class_of(ctx, &pushed)?;
        out.components[out_orbit].add_assign(&cls);
    }
    Ok(out)
}

/// The monoidal product: a state on `X₁ ⊔ X₂` from states on the factors.
pub fn tensor_state(
    ctx: &Context,
    left: &TheoryState,
    right: &TheoryState,
) -> Result<TheoryState> {
    if left.space.group().key() != right.space.group().key() {
        return Err(Error::ValidationFailed("tensor factors over different groups".into()));
    }
    let graph = left.space.graph.disjoint_union(&right.space.graph);
    let shift = left.space.graph.n_vertices();
    let mut basepoints = left.space.basepoints.clone();
    basepoints.extend(right.space.basepoints.iter().map(|&v| v + shift));
    let group = left.space.group().clone();
    let space = Arc::new(state_space(ctx, &graph, &basepoints, &group)?);
    let degree = left.degree + right.degree;
    let mut out = TheoryState::zero(ctx, space.clone(), degree)?;
    let n_right = right.space.n_orbits();
    if space.n_orbits() != left.space.n_orbits() * n_right {
        return Err(Error::ActionLawViolation(
            "union orbits do not align with the factor orbits".into(),
        ));
    }
    for (a1, c1) in left.components.iter().enumerate() {
        if c1.is_zero() {
            continue;
        }
        let rep1 = representative(ctx, c1)?;
        for (a2, c2) in right.components.iter().enumerate() {
            if c2.is_zero() {
                continue;
            }
            let orbit = a1 * n_right + a2;
            let mut want = left.space.orbit_rep(a1).to_vec();
            want.extend_from_slice(right.space.orbit_rep(a2));
            if space.orbit_rep(orbit) != want.as_slice() {
                return Err(Error::ActionLawViolation(
                    "union orbit representatives do not concatenate".into(),
                ));
            }
            let rep2 = representative(ctx, c2)?;
            let crossed = cross_product(&space.stabs[orbit].group, &rep1, &rep2)?;
            let cls = class_of(ctx, &crossed)?;
            out.components[orbit].add_assign(&cls);
        }
    }
    Ok(out)
}

/// Split a state over a disjoint union back into a sum of tensor products
/// of basis states of the two factors (the inverse of [`tensor_state`] on
/// its image).  Each returned pair is one summand.
pub fn untensor(
    ctx: &Context,
    theta: &TheoryState,
    left_space: &Arc<StateSpace>,
    right_space: &Arc<StateSpace>,
) -> Result<Vec<(TheoryState, TheoryState)>> {
    let graph = left_space.graph.disjoint_union(&right_space.graph);
    let shift = left_space.graph.n_vertices();
    let mut basepoints = left_space.basepoints.clone();
    basepoints.extend(right_space.basepoints.iter().map(|&v| v + shift));
    if theta.space.graph != graph
        || theta.space.basepoints != basepoints
        || theta.space.group().key() != left_space.group().key()
        || left_space.group().key() != right_space.group().key()
    {
        return Err(Error::ValidationFailed(
            "state does not live on the disjoint union of the factor spaces".into(),
        ));
    }
    let n_right = right_space.n_orbits();
    let mut parts = Vec::new();
    for (orbit, class) in theta.components.iter().enumerate() {
        let (a1, a2) = (orbit / n_right, orbit % n_right);
        for coord in class.coords.support() {
            let (d1, s1, d2, s2) = kunneth_split(
                ctx,
                &theta.space.stabs[orbit].group,
                &left_space.stabs[a1].group,
                &right_space.stabs[a2].group,
                theta.degree,
                coord,
            )?;
            let lhs = TheoryState::basis_state(ctx, left_space.clone(), d1, a1, s1)?;
            let rhs = TheoryState::basis_state(ctx, right_space.clone(), d2, a2, s2)?;
            parts.push((lhs, rhs));
        }
    }
    Ok(parts)
}

/// One graded block of an operation: the matrix of `β ⊗ − ↦ Φ(S/BΓ)(β⊗−)`
/// from degree-`theta_degree` states into degree-`out_degree` states.
/// Columns run over `(β basis index, input (orbit, class))` with the β
/// index most significant; rows over output `(orbit, class)`.
#[derive(Debug)]
pub struct OperationBlock {
    pub beta_degree: usize,
    pub theta_degree: usize,
    pub out_degree: usize,
    pub beta_dim: usize,
    pub in_labels: Vec<(usize, usize)>,
    pub out_labels: Vec<(usize, usize)>,
    pub matrix: Gf2Matrix,
}

/// The batched operation over a degree window.
#[derive(Debug)]
pub struct OperationMatrix {
    pub blocks: Vec<OperationBlock>,
}

/// Flattened `(orbit, class)` labels of a state space in one degree.
pub fn space_labels(
    ctx: &Context,
    space: &StateSpace,
    degree: usize,
) -> Result<Vec<(usize, usize)>> {
    let mut labels = Vec::new();
    for (orbit, dim) in space.dims(ctx, degree)?.into_iter().enumerate() {
        for s in 0..dim {
            labels.push((orbit, s));
        }
    }
    Ok(labels)
}

/// Compute all operation blocks with `deg β ≤ max_beta_degree` and
/// `deg θ ≤ max_theta_degree`.  Blocks with no β classes or no input
/// states are omitted.
pub fn operation_matrix(
    ctx: &Context,
    fam: &FamilyCobordism,
    p: &[usize],
    q: &[usize],
    group: &FiniteGroup,
    max_beta_degree: usize,
    max_theta_degree: usize,
) -> Result<OperationMatrix> {
    let in_space = Arc::new(state_space(ctx, &fam.cob.x, p, group)?);
    let out_space = Arc::new(state_space(ctx, &fam.cob.y, q, group)?);
    let mut blocks = Vec::new();
    for k in 0..=max_beta_degree {
        let beta_dim = homology_dim(ctx, &fam.gamma, k)?;
        if beta_dim == 0 {
            continue;
        }
        for d in 0..=max_theta_degree {
            let in_labels = space_labels(ctx, &in_space, d)?;
            if in_labels.is_empty() {
                continue;
            }
            let out_labels = space_labels(ctx, &out_space, k + d)?;
            let mut matrix = Gf2Matrix::zeros(out_labels.len(), beta_dim * in_labels.len());
            for b in 0..beta_dim {
                let beta = basis_class(ctx, &fam.gamma, k, b)?;
                for (cix, &(orbit, s)) in in_labels.iter().enumerate() {
                    let theta = TheoryState::basis_state(ctx, in_space.clone(), d, orbit, s)?;
                    let image = operate(ctx, fam, p, q, &beta, &theta)?;
                    let col = b * in_labels.len() + cix;
                    for (rix, &(orb2, s2)) in out_labels.iter().enumerate() {
                        if image.components[orb2].coords.get(s2) {
                            matrix.set(rix, col, true);
                        }
                    }
                }
            }
            blocks.push(OperationBlock {
                beta_degree: k,
                theta_degree: d,
                out_degree: k + d,
                beta_dim,
                in_labels,
                out_labels,
                matrix,
            });
        }
    }
    Ok(OperationMatrix { blocks })
}

/// One axiom check: the configured instance of gluing, identity,
/// monoidality, or basepoint independence.
pub enum AxiomCheck {
    /// `Φ(T∘S)(β_T×β_S ⊗ θ) = Φ(T)(β_T ⊗ Φ(S)(β_S ⊗ θ))` over all basis
    /// classes with total degree within the window.
    Gluing {
        name: String,
        s: FamilyCobordism,
        t: FamilyCobordism,
        p: Vec<usize>,
        mid: Vec<usize>,
        q: Vec<usize>,
        group: FiniteGroup,
        max_total_degree: usize,
    },
    /// The cylinder acts as the identity on every basis state.
    Identity { name: String, x: Graph, p: Vec<usize>, group: FiniteGroup, max_degree: usize },
    /// `Φ(S₁⊔S₂)(β₁×β₂ ⊗ θ₁⊗θ₂) = Φ(S₁)(β₁⊗θ₁) ⊗ Φ(S₂)(β₂⊗θ₂)`.
    Monoidality {
        name: String,
        s1: FamilyCobordism,
        s2: FamilyCobordism,
        p1: Vec<usize>,
        q1: Vec<usize>,
        p2: Vec<usize>,
        q2: Vec<usize>,
        group: FiniteGroup,
        max_total_degree: usize,
    },
    /// `rebase_state(Φ(S)(β⊗θ)) = Φ(S)(β ⊗ rebase_state(θ))` for a
    /// cobordism whose boundaries admit the alternative basepoints.
    Rebase {
        name: String,
        fam: FamilyCobordism,
        p: Vec<usize>,
        q: Vec<usize>,
        p_new: Vec<usize>,
        q_new: Vec<usize>,
        group: FiniteGroup,
        max_degree: usize,
    },
}

/// The result of one axiom check.
#[derive(Debug)]
pub struct AxiomOutcome {
    pub name: String,
    pub cases: usize,
    /// Minimal reproducing inputs of failing cases.
    pub failures: Vec<String>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("PASS {} ({} cases)", self.name, self.cases)
        } else {
            format!(
                "FAIL {} ({}/{} cases failed; first: {})",
                self.name,
                self.failures.len(),
                self.cases,
                self.failures[0]
            )
        }
    }
}

/// The axiom verification report: one outcome per configured check.
#[derive(Debug)]
pub struct AxiomReport {
    pub outcomes: Vec<AxiomOutcome>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed())
    }

    pub fn lines(&self) -> Vec<String> {
        self.outcomes.iter().map(|o| o.summary()).collect()
    }
}

fn all_basis_classes(
    ctx: &Context,
    group: &FiniteGroup,
    max_degree: usize,
) -> Result<Vec<HomologyClass>> {
    let mut out = Vec::new();
    for degree in 0..=max_degree {
        for s in 0..homology_dim(ctx, group, degree)? {
            out.push(basis_class(ctx, group, degree, s)?);
        }
    }
    Ok(out)
}

fn all_basis_states(
    ctx: &Context,
    space: &Arc<StateSpace>,
    max_degree: usize,
) -> Result<Vec<TheoryState>> {
    let mut out = Vec::new();
    for degree in 0..=max_degree {
        for (orbit, s) in space_labels(ctx, space, degree)? {
            out.push(TheoryState::basis_state(ctx, space.clone(), degree, orbit, s)?);
        }
    }
    Ok(out)
}

/// Run the configured axiom checks and collect a report.
pub fn verify_axioms(ctx: &Context, checks: Vec<AxiomCheck>) -> Result<AxiomReport> {
    let mut outcomes = Vec::new();
    for check in checks {
        outcomes.push(run_check(ctx, check)?);
    }
    Ok(AxiomReport { outcomes })
}

fn run_check(ctx: &Context, check: AxiomCheck) -> Result<AxiomOutcome> {
    match check {
        AxiomCheck::Gluing { name, s, t, p, mid, q, group, max_total_degree } => {
            let composite = s.compose(&t, ctx.caps.max_group_order)?;
            let in_space = Arc::new(state_space(ctx, &s.cob.x, &p, &group)?);
            let betas_s = all_basis_classes(ctx, &s.gamma, max_total_degree)?;
            let betas_t = all_basis_classes(ctx, &t.gamma, max_total_degree)?;
            let thetas = all_basis_states(ctx, &in_space, max_total_degree)?;
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for bt in &betas_t {
                for bs in &betas_s {
                    for theta in &thetas {
                        if bt.degree + bs.degree + theta.degree > max_total_degree {
                            continue;
                        }
                        cases += 1;
                        // The composite family group is Γ_T × Γ_S.
                        let bt_rep = representative(ctx, bt)?;
                        let bs_rep = representative(ctx, bs)?;
                        let crossed = cross_product(&composite.gamma, &bt_rep, &bs_rep)?;
                        let beta = class_of(ctx, &crossed)?;
                        let lhs = operate(ctx, &composite, &p, &q, &beta, theta)?;
                        let middle = operate(ctx, &s, &p, &mid, bs, theta)?;
                        let rhs = operate(ctx, &t, &mid, &q, bt, &middle)?;
                        if !lhs.equals(&rhs) {
                            failures.push(format!(
                                "β_T deg {}, β_S deg {}, θ deg {}",
                                bt.degree, bs.degree, theta.degree
                            ));
                        }
                    }
                }
            }
            Ok(AxiomOutcome { name, cases, failures })
        }
        AxiomCheck::Identity { name, x, p, group, max_degree } => {
            let fam = FamilyCobordism::trivial(crate::hgraph::GraphCobordism::cylinder(x.clone()));
            let space = Arc::new(state_space(ctx, &x, &p, &group)?);
            let unit = unit_class();
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for theta in all_basis_states(ctx, &space, max_degree)? {
                cases += 1;
                let image = operate(ctx, &fam, &p, &p, &unit, &theta)?;
                if !image.equals(&theta) {
                    failures.push(format!("θ deg {} not fixed", theta.degree));
                }
            }
            Ok(AxiomOutcome { name, cases, failures })
        }
        AxiomCheck::Monoidality { name, s1, s2, p1, q1, p2, q2, group, max_total_degree } => {
            let union = s1.disjoint_union(&s2, ctx.caps.max_group_order)?;
            let shift_p = s1.cob.x.n_vertices();
            let shift_q = s1.cob.y.n_vertices();
            let mut p_union = p1.clone();
            p_union.extend(p2.iter().map(|&v| v + shift_p));
            let mut q_union = q1.clone();
            q_union.extend(q2.iter().map(|&v| v + shift_q));
            let space1 = Arc::new(state_space(ctx, &s1.cob.x, &p1, &group)?);
            let space2 = Arc::new(state_space(ctx, &s2.cob.x, &p2, &group)?);
            let betas1 = all_basis_classes(ctx, &s1.gamma, max_total_degree)?;
            let betas2 = all_basis_classes(ctx, &s2.gamma, max_total_degree)?;
            let thetas1 = all_basis_states(ctx, &space1, max_total_degree)?;
            let thetas2 = all_basis_states(ctx, &space2, max_total_degree)?;
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for b1 in &betas1 {
                for b2 in &betas2 {
                    for t1 in &thetas1 {
                        for t2 in &thetas2 {
                            if b1.degree + b2.degree + t1.degree + t2.degree > max_total_degree {
                                continue;
                            }
                            cases += 1;
                            let b1_rep = representative(ctx, b1)?;
                            let b2_rep = representative(ctx, b2)?;
                            let crossed = cross_product(&union.gamma, &b1_rep, &b2_rep)?;
                            let beta = class_of(ctx, &crossed)?;
                            let joint = tensor_state(ctx, t1, t2)?;
                            let lhs = operate(ctx, &union, &p_union, &q_union, &beta, &joint)?;
                            let r1 = operate(ctx, &s1, &p1, &q1, b1, t1)?;
                            let r2 = operate(ctx, &s2, &p2, &q2, b2, t2)?;
                            let rhs = tensor_state(ctx, &r1, &r2)?;
                            if !lhs.equals(&rhs) {
                                failures.push(format!(
                                    "β degrees ({}, {}), θ degrees ({}, {})",
                                    b1.degree, b2.degree, t1.degree, t2.degree
                                ));
                            }
                        }
                    }
                }
            }
            Ok(AxiomOutcome { name, cases, failures })
        }
        AxiomCheck::Rebase { name, fam, p, q, p_new, q_new, group, max_degree } => {
            let space = Arc::new(state_space(ctx, &fam.cob.x, &p, &group)?);
            let betas = all_basis_classes(ctx, &fam.gamma, max_degree)?;
            let thetas = all_basis_states(ctx, &space, max_degree)?;
            let mut cases = 0usize;
            let mut failures = Vec::new();
            for beta in &betas {
                for theta in &thetas {
                    if beta.degree + theta.degree > max_degree {
                        continue;
                    }
                    cases += 1;
                    let lhs = rebase_state(ctx, &operate(ctx, &fam, &p, &q, beta, theta)?, &q_new)?;
                    let moved = rebase_state(ctx, theta, &p_new)?;
                    let rhs = operate(ctx, &fam, &p_new, &q_new, beta, &moved)?;
                    if !lhs.equals(&rhs) {
                        failures.push(format!(
                            "β deg {}, θ deg {}",
                            beta.degree, theta.degree
                        ));
                    }
                }
            }
            Ok(AxiomOutcome { name, cases, failures })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn binom_mod2(n: usize, k: usize) -> bool {
        k <= n && (n - k) & k == 0
    }

    #[test]
    fn point_and_circle_state_spaces_decompose_by_conjugacy() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let pt = state_space(&ctx, &models::pt(), &[0], &z2).unwrap();
        assert_eq!(pt.n_orbits(), 1);
        assert_eq!(pt.stabs[0].group.order(), 2);
        for d in 0..=4 {
            assert_eq!(pt.dims(&ctx, d).unwrap(), vec![1]);
        }

        let circle = state_space(&ctx, &models::circle(), &[0], &z2).unwrap();
        assert_eq!(circle.n_orbits(), 2);
        assert!(circle.stabs.iter().all(|s| s.group.order() == 2));
        assert_eq!(circle.total_dim(&ctx, 3).unwrap(), 2);

        let s3 = FiniteGroup::symmetric(3);
        let loops = state_space(&ctx, &models::circle(), &[0], &s3).unwrap();
        assert_eq!(loops.n_orbits(), 3);
        let orders: Vec<u32> = loops.stabs.iter().map(|s| s.group.order()).collect();
        assert_eq!(orders, vec![6, 2, 3]);
    }

    #[test]
    fn empty_boundary_state_space_is_the_ground_field() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let empty = state_space(&ctx, &Graph::empty(), &[], &z2).unwrap();
        assert_eq!(empty.n_orbits(), 1);
        assert_eq!(empty.stabs[0].group.order(), 1);
        assert_eq!(empty.dims(&ctx, 0).unwrap(), vec![1]);
        assert_eq!(empty.dims(&ctx, 2).unwrap(), vec![0]);
    }

    #[test]
    fn cylinders_act_as_the_identity() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let s3 = FiniteGroup::symmetric(3);
        let suites: Vec<(Graph, Vec<usize>, FiniteGroup, usize)> = vec![
            (models::pt(), vec![0], z2.clone(), 4),
            (models::circle(), vec![0], z2.clone(), 3),
            (models::circle2(), vec![0, 1], z2, 2),
            (models::circle(), vec![0], s3, 2),
        ];
        for (x, p, group, max_degree) in suites {
            let report = verify_axioms(
                &ctx,
                vec![AxiomCheck::Identity {
                    name: "cylinder".into(),
                    x,
                    p,
                    group,
                    max_degree,
                }],
            )
            .unwrap();
            assert!(report.all_passed(), "{:?}", report.lines());
        }
    }

    #[test]
    fn the_reflection_family_gives_the_divided_power_pattern() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let fam = models::theorem91();
        let space = Arc::new(state_space(&ctx, &models::pt(), &[0], &z2).unwrap());
        for i in 0..=3usize {
            for j in 0..=3usize {
                let beta = basis_class(&ctx, &fam.gamma, i, 0).unwrap();
                let theta = TheoryState::basis_state(&ctx, space.clone(), j, 0, 0).unwrap();
                let image = operate(&ctx, &fam, &[0], &[0], &beta, &theta).unwrap();
                let expect = i >= 1 && binom_mod2(i + j, i);
                assert_eq!(
                    image.components[0].coords.get(0),
                    expect,
                    "t_{i} ⊗ t_{j}"
                );
            }
        }
    }

    #[test]
    fn tripod_product_vanishes_for_even_order_and_is_unital_for_odd() {
        // The tripod realises the transfer along the diagonal subgroup of
        // G x G, whose index is |G|.  Dually, corestriction composed with the
        // (surjective) diagonal restriction multiplies by |G|, so over F_2 the
        // product vanishes identically when |G| is even.  When |G| is odd the
        // index-|G| transfer survives in degree zero.
        let ctx = Context::new();
        let fam = FamilyCobordism::trivial(models::tripod());

        let z2 = FiniteGroup::cyclic(2);
        let pt2 = Arc::new(state_space(&ctx, &models::pt(), &[0], &z2).unwrap());
        for i in 0..=2usize {
            for j in 0..=2usize {
                let t1 = TheoryState::basis_state(&ctx, pt2.clone(), i, 0, 0).unwrap();
                let t2 = TheoryState::basis_state(&ctx, pt2.clone(), j, 0, 0).unwrap();
                let joint = tensor_state(&ctx, &t1, &t2).unwrap();
                let image =
                    operate(&ctx, &fam, &[0, 1], &[0], &unit_class(), &joint).unwrap();
                assert!(image.is_zero(), "t_{i} · t_{j} over Z/2");
            }
        }

        let z3 = FiniteGroup::cyclic(3);
        let pt3 = Arc::new(state_space(&ctx, &models::pt(), &[0], &z3).unwrap());
        let t0 = TheoryState::basis_state(&ctx, pt3.clone(), 0, 0, 0).unwrap();
        let joint = tensor_state(&ctx, &t0, &t0).unwrap();
        let image = operate(&ctx, &fam, &[0, 1], &[0], &unit_class(), &joint).unwrap();
        assert!(image.components[0].coords.get(0), "t_0 · t_0 over Z/3");
    }

    #[test]
    fn counit_is_the_augmentation() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let fam = FamilyCobordism::trivial(models::counit());
        let space = Arc::new(state_space(&ctx, &models::pt(), &[0], &z2).unwrap());
        for j in 0..=3usize {
            let theta = TheoryState::basis_state(&ctx, space.clone(), j, 0, 0).unwrap();
            let image = operate(&ctx, &fam, &[0], &[], &unit_class(), &theta).unwrap();
            if j == 0 {
                assert!(image.components[0].coords.get(0));
            } else {
                assert!(image.is_zero());
            }
        }
    }

    #[test]
    fn gluing_holds_for_composed_cylinders_and_reflection_families() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let cyl = models::cylinder_family(&models::circle());
        let report = verify_axioms(
            &ctx,
            vec![
                AxiomCheck::Gluing {
                    name: "cylinder ∘ cylinder".into(),
                    s: cyl.clone(),
                    t: cyl,
                    p: vec![0],
                    mid: vec![0],
                    q: vec![0],
                    group: z2.clone(),
                    max_total_degree: 2,
                },
                AxiomCheck::Gluing {
                    name: "reflection ∘ reflection".into(),
                    s: models::theorem91(),
                    t: models::theorem91(),
                    p: vec![0],
                    mid: vec![0],
                    q: vec![0],
                    group: z2,
                    max_total_degree: 3,
                },
            ],
        )
        .unwrap();
        assert!(report.all_passed(), "{:?}", report.lines());
    }

    #[test]
    fn composed_reflection_families_multiply_three_classes()
    {
        // The two-fold composite family takes a₁ ⊗ a₂ ⊗ b to a₁·a₂·b when
        // both parameter degrees are positive, and to zero otherwise.
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let fam = models::theorem91();
        let composite = fam.compose(&fam, ctx.caps.max_group_order).unwrap();
        let space = Arc::new(state_space(&ctx, &models::pt(), &[0], &z2).unwrap());
        for i1 in 0..=2usize {
            for i2 in 0..=2usize {
                for j in 0..=1usize {
                    let b1 = basis_class(&ctx, &FiniteGroup::cyclic(2), i1, 0).unwrap();
                    let b2 = basis_class(&ctx, &FiniteGroup::cyclic(2), i2, 0).unwrap();
                    let b1_rep = representative(&ctx, &b1).unwrap();
                    let b2_rep = representative(&ctx, &b2).unwrap();
                    let crossed = cross_product(&composite.gamma, &b1_rep, &b2_rep).unwrap();
                    let beta = class_of(&ctx, &crossed).unwrap();
                    let theta = TheoryState::basis_state(&ctx, space.clone(), j, 0, 0).unwrap();
                    let image = operate(&ctx, &composite, &[0], &[0], &beta, &theta).unwrap();
                    let expect = i1 >= 1
                        && i2 >= 1
                        && binom_mod2(i1 + i2, i1)
                        && binom_mod2(i1 + i2 + j, j);
                    assert_eq!(
                        image.components[0].coords.get(0),
                        expect,
                        "a_{i1} ⊗ a_{i2} ⊗ t_{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn monoidality_holds_for_two_tripods() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let tripod = FamilyCobordism::trivial(models::tripod());
        let report = verify_axioms(
            &ctx,
            vec![AxiomCheck::Monoidality {
                name: "tripod ⊔ tripod".into(),
                s1: tripod.clone(),
                s2: tripod,
                p1: vec![0, 1],
                q1: vec![0],
                p2: vec![0, 1],
                q2: vec![0],
                group: z2,
                max_total_degree: 2,
            }],
        )
        .unwrap();
        assert!(report.all_passed(), "{:?}", report.lines());
    }

    #[test]
    fn rebase_commutes_with_the_cylinder_and_round_trips() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let circle2 = models::circle2();
        let report = verify_axioms(
            &ctx,
            vec![AxiomCheck::Rebase {
                name: "subdivided circle".into(),
                fam: models::cylinder_family(&circle2),
                p: vec![0],
                q: vec![0],
                p_new: vec![0, 1],
                q_new: vec![0, 1],
                group: z2.clone(),
                max_degree: 3,
            }],
        )
        .unwrap();
        assert!(report.all_passed(), "{:?}", report.lines());

        // Round trip and identity rebase.
        let space = Arc::new(state_space(&ctx, &circle2, &[0], &z2).unwrap());
        for degree in 0..=3usize {
            for (orbit, s) in space_labels(&ctx, &space, degree).unwrap() {
                let theta =
                    TheoryState::basis_state(&ctx, space.clone(), degree, orbit, s).unwrap();
                let same = rebase_state(&ctx, &theta, &[0]).unwrap();
                assert!(same.equals(&theta));
                let moved = rebase_state(&ctx, &theta, &[0, 1]).unwrap();
                let back = rebase_state(&ctx, &moved, &[0]).unwrap();
                assert!(back.equals(&theta), "degree {degree}, orbit {orbit}, class {s}");
            }
        }
    }

    #[test]
    fn tensor_splits_back_into_its_factors() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let pt_space = Arc::new(state_space(&ctx, &models::pt(), &[0], &z2).unwrap());
        let circle_space = Arc::new(state_space(&ctx, &models::circle(), &[0], &z2).unwrap());
        let t1 = TheoryState::basis_state(&ctx, pt_space.clone(), 1, 0, 0).unwrap();
        let t2 = TheoryState::basis_state(&ctx, circle_space.clone(), 2, 1, 0).unwrap();
        let joint = tensor_state(&ctx, &t1, &t2).unwrap();
        assert_eq!(joint.degree, 3);
        let parts = untensor(&ctx, &joint, &pt_space, &circle_space).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].0.equals(&t1));
        assert!(parts[0].1.equals(&t2));

        // A two-term sum splits into two summands that re-tensor to it.
        let u1 = TheoryState::basis_state(&ctx, pt_space.clone(), 3, 0, 0).unwrap();
        let mut sum = tensor_state(&ctx, &u1, &t2).unwrap();
        let other = tensor_state(
            &ctx,
            &TheoryState::basis_state(&ctx, pt_space.clone(), 2, 0, 0).unwrap(),
            &TheoryState::basis_state(&ctx, circle_space.clone(), 3, 0, 0).unwrap(),
        )
        .unwrap();
        sum.add_assign(&other);
        let parts = untensor(&ctx, &sum, &pt_space, &circle_space).unwrap();
        assert_eq!(parts.len(), 2);
        let mut rebuilt = TheoryState::zero(&ctx, sum.space.clone(), sum.degree).unwrap();
        for (l, r) in &parts {
            rebuilt.add_assign(&tensor_state(&ctx, l, r).unwrap());
        }
        assert!(rebuilt.equals(&sum));
    }

    #[test]
    fn pants_factorization_matches_at_low_degree() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let report = verify_axioms(
            &ctx,
            vec![AxiomCheck::Gluing {
                name: "pants through the wedge".into(),
                s: FamilyCobordism::trivial(models::pants_r()),
                t: FamilyCobordism::trivial(models::pants_q()),
                p: vec![0, 1],
                mid: vec![0],
                q: vec![0],
                group: z2,
                max_total_degree: 2,
            }],
        )
        .unwrap();
        assert!(report.all_passed(), "{:?}", report.lines());
    }

    #[test]
    fn operation_matrix_of_the_cylinder_is_the_identity() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let fam = models::cylinder_family(&models::circle());
        let matrix = operation_matrix(&ctx, &fam, &[0], &[0], &z2, 2, 2).unwrap();
        for block in &matrix.blocks {
            if block.beta_degree == 0 {
                assert_eq!(block.matrix.n_rows(), block.matrix.n_cols());
                assert_eq!(block.matrix, Gf2Matrix::identity(block.matrix.n_rows()));
            }
        }
        assert!(matrix.blocks.iter().any(|b| b.beta_degree == 0 && b.theta_degree == 2));
    }

    #[test]
    fn operate_rejects_mismatched_states_and_parameters() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let fam = models::cylinder_family(&models::circle());
        let pt_space = Arc::new(state_space(&ctx, &models::pt(), &[0], &z2).unwrap());
        let theta = TheoryState::basis_state(&ctx, pt_space, 1, 0, 0).unwrap();
        let err = operate(&ctx, &fam, &[0], &[0], &unit_class(), &theta).unwrap_err();
        assert!(matches!(err, Error::ValidationFailed(_)));

        let circle_space = Arc::new(state_space(&ctx, &models::circle(), &[0], &z2).unwrap());
        let theta = TheoryState::basis_state(&ctx, circle_space, 1, 0, 0).unwrap();
        let bad_beta = basis_class(&ctx, &z2, 1, 0).unwrap();
        let err = operate(&ctx, &fam, &[0], &[0], &bad_beta, &theta).unwrap_err();
        assert!(matches!(err, Error::ValidationFailed(_)));
    }

    #[test]
    fn state_spaces_demand_basepoint_coverage() {
        let ctx = Context::new();
        let z2 = FiniteGroup::cyclic(2);
        let err = state_space(&ctx, &models::two_circles(), &[0], &z2).unwrap_err();
        assert!(matches!(err, Error::BasepointCoverage(_)));
    }
}
