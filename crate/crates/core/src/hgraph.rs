//! Combinatorial graphs, graph maps, and h-graph cobordisms.
//!
//! Graphs are finite directed multigraphs (loops and parallel edges are
//! allowed); edge direction is pure bookkeeping and carries no meaning for
//! the theory.  A cobordism `S : X → Y` is a core graph together with an
//! incoming map `φ_x : X → core` and an outgoing map `φ_y : Y → core`.
//! The incoming map must be *positive* (hit every core component); the
//! outgoing map must be an h-embedding, which we certify either by
//! checking that it is a subgraph embedding (`CheckedInjective`) or by
//! taking the caller's word for it (`Trusted`, for maps like the wedge →
//! circle projection whose image traverses several edges).
//!
//! A family of cobordisms is a cobordism with an action of a finite group
//! on the core fixing both boundary images pointwise.  Composition glues
//! cores along the shared boundary when both interface maps are subgraph
//! embeddings and fails with `UnsupportedGluing` otherwise.

use crate::fingroup::FiniteGroup;
use crate::{Error, Result};

/// Traversal direction of an edge inside a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Fwd,
    Rev,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Fwd => Dir::Rev,
            Dir::Rev => Dir::Fwd,
        }
    }

    pub fn xor(self, other: Dir) -> Dir {
        if self == other {
            Dir::Fwd
        } else {
            Dir::Rev
        }
    }
}

/// One step of an edge path: an edge and the direction it is traversed.
pub type EdgeStep = (usize, Dir);

/// A finite directed multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    /// `(source, target)` per edge.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        for &(u, v) in &edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for {n_vertices} vertices"
                )));
            }
        }
        Ok(Graph { n_vertices, edges })
    }

    /// The empty graph.
    #[must_use]
    pub fn empty() -> Graph {
        Graph { n_vertices: 0, edges: Vec::new() }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Endpoints of an edge step: `(start, end)` in traversal order.
    pub fn step_endpoints(&self, step: EdgeStep) -> (usize, usize) {
        let (u, v) = self.edges[step.0];
        match step.1 {
            Dir::Fwd => (u, v),
            Dir::Rev => (v, u),
        }
    }

    /// Euler characteristic `V − E`.
    pub fn euler(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64
    }

    /// Component index per vertex: components are numbered by their
    /// minimal vertex, in increasing order.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n_vertices];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut next = 0;
        for start in 0..self.n_vertices {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn n_components(&self) -> usize {
        self.components().iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Disjoint union; vertices and edges of `self` keep their indices,
    /// those of `other` are shifted up.
    #[must_use]
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        let dv = self.n_vertices;
        edges.extend(other.edges.iter().map(|&(u, v)| (u + dv, v + dv)));
        Graph { n_vertices: dv + other.n_vertices, edges }
    }
}

/// A map of graphs: vertices go to vertices, edges go to edge paths
/// (possibly empty, collapsing the edge).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    source: Graph,
    target: Graph,
    vertex_map: Vec<usize>,
    edge_map: Vec<Vec<EdgeStep>>,
}

impl GraphMap {
    /// Validate continuity: each edge's image path must run from the image
    /// of its source to the image of its target.
    pub fn new(
        source: Graph,
        target: Graph,
        vertex_map: Vec<usize>,
        edge_map: Vec<Vec<EdgeStep>>,
    ) -> Result<GraphMap> {
        if vertex_map.len() != source.n_vertices() || edge_map.len() != source.n_edges() {
            return Err(Error::InvalidGraph("graph map table sizes mismatch".into()));
        }
        for &v in &vertex_map {
            if v >= target.n_vertices() {
                return Err(Error::InvalidGraph(format!("vertex image {v} out of range")));
            }
        }
        for (e, path) in edge_map.iter().enumerate() {
            let (u, v) = source.edge(e);
            let mut at = vertex_map[u];
            for &step in path {
                if step.0 >= target.n_edges() {
                    return Err(Error::InvalidGraph(format!("edge image {} out of range", step.0)));
                }
                let (a, b) = target.step_endpoints(step);
                if a != at {
                    return Err(Error::InvalidGraph(format!(
                        "image path of edge {e} breaks at vertex {at}"
                    )));
                }
                at = b;
            }
            if at != vertex_map[v] {
                return Err(Error::InvalidGraph(format!(
                    "image path of edge {e} ends at {at}, expected {}",
                    vertex_map[v]
                )));
            }
        }
        Ok(GraphMap { source, target, vertex_map, edge_map })
    }

    pub fn identity(graph: Graph) -> GraphMap {
        let vertex_map = (0..graph.n_vertices()).collect();
        let edge_map = (0..graph.n_edges()).map(|e| vec![(e, Dir::Fwd)]).collect();
        GraphMap { source: graph.clone(), target: graph, vertex_map, edge_map }
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge_image(&self, e: usize) -> &[EdgeStep] {
        &self.edge_map[e]
    }

    /// Is this map a subgraph embedding: injective on vertices, every edge
    /// mapped to a single edge, distinct edges to distinct edges?
    pub fn is_subgraph_embedding(&self) -> bool {
        let mut seen_v = vec![false; self.target.n_vertices()];
        for &v in &self.vertex_map {
            if seen_v[v] {
                return false;
            }
            seen_v[v] = true;
        }
        let mut seen_e = vec![false; self.target.n_edges()];
        for path in &self.edge_map {
            if path.len() != 1 {
                return false;
            }
            let e = path[0].0;
            if seen_e[e] {
                return false;
            }
            seen_e[e] = true;
        }
        true
    }
}

/// An automorphism of a graph: a vertex permutation plus an edge
/// permutation that may reverse edge directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAutomorphism {
    vertex_perm: Vec<usize>,
    /// `edge_perm[e] = (e', reversed)`.
    edge_perm: Vec<(usize, bool)>,
}

impl GraphAutomorphism {
    pub fn new(graph: &Graph, vertex_perm: Vec<usize>, edge_perm: Vec<(usize, bool)>) -> Result<GraphAutomorphism> {
        let (nv, ne) = (graph.n_vertices(), graph.n_edges());
        if vertex_perm.len() != nv || edge_perm.len() != ne {
            return Err(Error::InvalidGraph("automorphism table sizes mismatch".into()));
        }
        let mut seen = vec![false; nv];
        for &v in &vertex_perm {
            if v >= nv || seen[v] {
                return Err(Error::InvalidGraph("vertex map is not a permutation".into()));
            }
            seen[v] = true;
        }
        let mut seen_e = vec![false; ne];
        for (e, &(img, rev)) in edge_perm.iter().enumerate() {
            if img >= ne || seen_e[img] {
                return Err(Error::InvalidGraph("edge map is not a permutation".into()));
            }
            seen_e[img] = true;
            let (u, v) = graph.edge(e);
            let (mut a, mut b) = graph.edge(img);
            if rev {
                std::mem::swap(&mut a, &mut b);
            }
            if vertex_perm[u] != a || vertex_perm[v] != b {
                return Err(Error::InvalidGraph(format!("edge {e} image breaks incidence")));
            }
        }
        Ok(GraphAutomorphism { vertex_perm, edge_perm })
    }

    pub fn identity(graph: &Graph) -> GraphAutomorphism {
        GraphAutomorphism {
            vertex_perm: (0..graph.n_vertices()).collect(),
            edge_perm: (0..graph.n_edges()).map(|e| (e, false)).collect(),
        }
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_perm[v]
    }

    pub fn apply_step(&self, step: EdgeStep) -> EdgeStep {
        let (img, rev) = self.edge_perm[step.0];
        (img, if rev { step.1.flip() } else { step.1 })
    }

    /// Composition `self ∘ other` (apply `other` first).
    #[must_use]
    pub fn compose(&self, other: &GraphAutomorphism) -> GraphAutomorphism {
        let vertex_perm = other.vertex_perm.iter().map(|&v| self.vertex_perm[v]).collect();
        let edge_perm = other
            .edge_perm
            .iter()
            .map(|&(e, r)| {
                let (e2, r2) = self.edge_perm[e];
                (e2, r ^ r2)
            })
            .collect();
        GraphAutomorphism { vertex_perm, edge_perm }
    }
}

/// Certification mode for the outgoing map's h-embedding condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingMode {
    /// Verify that the outgoing map is a subgraph embedding.
    CheckedInjective,
    /// Accept the outgoing map as an h-embedding without checking.
    Trusted,
}

/// An h-graph cobordism `X → Y` with core `K`.
#[derive(Clone, Debug)]
pub struct GraphCobordism {
    pub x: Graph,
    pub y: Graph,
    pub core: Graph,
    pub phi_x: GraphMap,
    pub phi_y: GraphMap,
    pub mode: EmbeddingMode,
}

/// Outcome of validating a cobordism.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// Does the incoming map hit every core component?
    pub positive: bool,
    /// Core components missed by the incoming map.
    pub missed_components: Vec<usize>,
    /// Whether the embedding condition was actually checked (false in
    /// trusted mode).
    pub embedding_checked: bool,
    /// Result of the embedding check (true in trusted mode).
    pub embedding_ok: bool,
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.positive && self.embedding_ok && self.issues.is_empty()
    }
}

impl GraphCobordism {
    pub fn new(
        x: Graph,
        y: Graph,
        core: Graph,
        phi_x: GraphMap,
        phi_y: GraphMap,
        mode: EmbeddingMode,
    ) -> Result<GraphCobordism> {
        if phi_x.source() != &x || phi_x.target() != &core {
            return Err(Error::InvalidGraph("phi_x endpoints mismatch".into()));
        }
        if phi_y.source() != &y || phi_y.target() != &core {
            return Err(Error::InvalidGraph("phi_y endpoints mismatch".into()));
        }
        Ok(GraphCobordism { x, y, core, phi_x, phi_y, mode })
    }

    /// Identity cobordism (mapping cylinder of the identity): core = X,
    /// both structure maps the identity.
    pub fn cylinder(x: Graph) -> GraphCobordism {
        GraphCobordism {
            x: x.clone(),
            y: x.clone(),
            core: x.clone(),
            phi_x: GraphMap::identity(x.clone()),
            phi_y: GraphMap::identity(x),
            mode: EmbeddingMode::CheckedInjective,
        }
    }

    /// Relative Euler characteristic `χ(core) − χ(X)`.
    pub fn chi_rel(&self) -> i64 {
        self.core.euler() - self.x.euler()
    }

    /// Check positivity and the embedding condition.
    pub fn validate(&self) -> ValidationReport {
        let comp = self.core.components();
        let n_comp = self.core.n_components();
        let mut hit = vec![false; n_comp];
        for v in 0..self.x.n_vertices() {
            hit[comp[self.phi_x.vertex_image(v)]] = true;
        }
        let missed: Vec<usize> = (0..n_comp).filter(|&c| !hit[c]).collect();
        let (checked, ok) = match self.mode {
            EmbeddingMode::CheckedInjective => (true, self.phi_y.is_subgraph_embedding()),
            EmbeddingMode::Trusted => (false, true),
        };
        let mut issues = Vec::new();
        if !missed.is_empty() {
            issues.push(format!("incoming map misses core components {missed:?}"));
        }
        if checked && !ok {
            issues.push("outgoing map is not a subgraph embedding".into());
        }
        ValidationReport {
            positive: missed.is_empty(),
            missed_components: missed,
            embedding_checked: checked,
            embedding_ok: ok,
            issues,
        }
    }

    /// Compose `t ∘ self` where `self : X → Y` and `t : Y → Z`, gluing the
    /// cores along `Y` by pushout.  Both interface maps (`self.phi_y` and
    /// `t.phi_x`) must be subgraph embeddings.
    pub fn compose(&self, t: &GraphCobordism) -> Result<GraphCobordism> {
        if self.y != t.x {
            return Err(Error::UnsupportedGluing("middle boundaries differ".into()));
        }
        if !self.phi_y.is_subgraph_embedding() {
            return Err(Error::UnsupportedGluing(
                "outgoing interface map is not a subgraph embedding".into(),
            ));
        }
        if !t.phi_x.is_subgraph_embedding() {
            return Err(Error::UnsupportedGluing(
                "incoming interface map is not a subgraph embedding".into(),
            ));
        }
        let a = &self.core;
        let b = &t.core;
        let y = &self.y;
        // Identification data for B-vertices and B-edges coming from Y.
        let mut b_vertex_glued: Vec<Option<usize>> = vec![None; b.n_vertices()];
        for v in 0..y.n_vertices() {
            b_vertex_glued[t.phi_x.vertex_image(v)] = Some(self.phi_y.vertex_image(v));
        }
        let mut b_edge_glued: Vec<Option<(usize, Dir)>> = vec![None; b.n_edges()];
        for e in 0..y.n_edges() {
            let (ae, da) = self.phi_y.edge_image(e)[0];
            let (be, db) = t.phi_x.edge_image(e)[0];
            b_edge_glued[be] = Some((ae, da.xor(db)));
        }
        // Composite vertex set: A-vertices, then unglued B-vertices.
        let mut b_vertex_map = vec![usize::MAX; b.n_vertices()];
        let mut n_vertices = a.n_vertices();
        for w in 0..b.n_vertices() {
            b_vertex_map[w] = match b_vertex_glued[w] {
                Some(av) => av,
                None => {
                    let idx = n_vertices;
                    n_vertices += 1;
                    idx
                }
            };
        }
        // Composite edge set: A-edges, then unglued B-edges.
        let mut edges = a.edges().to_vec();
        let mut b_edge_map = vec![(usize::MAX, Dir::Fwd); b.n_edges()];
        for f in 0..b.n_edges() {
            b_edge_map[f] = match b_edge_glued[f] {
                Some((ae, flip)) => (ae, flip),
                None => {
                    let (u, v) = b.edge(f);
                    edges.push((b_vertex_map[u], b_vertex_map[v]));
                    (edges.len() - 1, Dir::Fwd)
                }
            };
        }
        let core = Graph { n_vertices, edges };
        let phi_x = GraphMap::new(
            self.x.clone(),
            core.clone(),
            (0..self.x.n_vertices()).map(|v| self.phi_x.vertex_image(v)).collect(),
            (0..self.x.n_edges()).map(|e| self.phi_x.edge_image(e).to_vec()).collect(),
        )?;
        let phi_y = GraphMap::new(
            t.y.clone(),
            core.clone(),
            (0..t.y.n_vertices()).map(|v| b_vertex_map[t.phi_y.vertex_image(v)]).collect(),
            (0..t.y.n_edges())
                .map(|e| {
                    t.phi_y
                        .edge_image(e)
                        .iter()
                        .map(|&(f, d)| {
                            let (g, flip) = b_edge_map[f];
                            (g, d.xor(flip))
                        })
                        .collect()
                })
                .collect(),
        )?;
        Ok(GraphCobordism { x: self.x.clone(), y: t.y.clone(), core, phi_x, phi_y, mode: t.mode })
    }

    /// Disjoint union of cobordisms (block sum of all data).
    #[must_use]
    pub fn disjoint_union(&self, other: &GraphCobordism) -> GraphCobordism {
        let x = self.x.disjoint_union(&other.x);
        let y = self.y.disjoint_union(&other.y);
        let core = self.core.disjoint_union(&other.core);
        let (dvc, dec) = (self.core.n_vertices(), self.core.n_edges());
        let tables = |m: &GraphMap, shift: bool| -> (Vec<usize>, Vec<Vec<EdgeStep>>) {
            let (dv, de) = if shift { (dvc, dec) } else { (0, 0) };
            let vmap = (0..m.source().n_vertices()).map(|v| m.vertex_image(v) + dv).collect();
            let emap = (0..m.source().n_edges())
                .map(|e| m.edge_image(e).iter().map(|&(f, d)| (f + de, d)).collect())
                .collect();
            (vmap, emap)
        };
        let (vx1, ex1) = tables(&self.phi_x, false);
        let (vx2, ex2) = tables(&other.phi_x, true);
        let (vy1, ey1) = tables(&self.phi_y, false);
        let (vy2, ey2) = tables(&other.phi_y, true);
        let phi_x = GraphMap::new(
            x.clone(),
            core.clone(),
            vx1.into_iter().chain(vx2).collect(),
            ex1.into_iter().chain(ex2).collect(),
        )
        .expect("disjoint union preserves continuity");
        let phi_y = GraphMap::new(
            y.clone(),
            core.clone(),
            vy1.into_iter().chain(vy2).collect(),
            ey1.into_iter().chain(ey2).collect(),
        )
        .expect("disjoint union preserves continuity");
        let mode = if self.mode == EmbeddingMode::Trusted || other.mode == EmbeddingMode::Trusted {
            EmbeddingMode::Trusted
        } else {
            EmbeddingMode::CheckedInjective
        };
        GraphCobordism { x, y, core, phi_x, phi_y, mode }
    }
}

/// A whiskered core: the core graph with one whisker edge per basepoint,
/// For `i`-th incoming basepoint the whisker runs from its attachment
/// vertex to a fresh leaf.  Numbering: core vertices first, then incoming
/// leaves in order, then outgoing leaves; likewise for edges.
#[derive(Clone, Debug)]
pub struct WhiskeredGraph {
    pub graph: Graph,
    /// Leaf vertex per incoming basepoint.
    pub p_leaves: Vec<usize>,
    /// Leaf vertex per outgoing basepoint.
    pub q_leaves: Vec<usize>,
    /// Whisker edge per incoming basepoint (oriented attachment → leaf).
    pub p_whiskers: Vec<usize>,
    /// Whisker edge per outgoing basepoint.
    pub q_whiskers: Vec<usize>,
}

impl WhiskeredGraph {
    fn n_core_vertices(&self) -> usize {
        self.graph.n_vertices() - self.p_leaves.len() - self.q_leaves.len()
    }

    fn n_core_edges(&self) -> usize {
        self.graph.n_edges() - self.p_whiskers.len() - self.q_whiskers.len()
    }

    /// Extend a core automorphism by the identity on whiskers and leaves.
    /// Valid whenever the automorphism fixes every attachment vertex.
    pub fn extend_automorphism(&self, auto: &GraphAutomorphism) -> Result<GraphAutomorphism> {
        let (ncv, nce) = (self.n_core_vertices(), self.n_core_edges());
        let mut vperm: Vec<usize> = (0..ncv).map(|v| auto.vertex_image(v)).collect();
        vperm.extend(ncv..self.graph.n_vertices());
        let mut eperm: Vec<(usize, bool)> = (0..nce)
            .map(|e| {
                let (img, d) = auto.apply_step((e, Dir::Fwd));
                (img, d == Dir::Rev)
            })
            .collect();
        eperm.extend((nce..self.graph.n_edges()).map(|e| (e, false)));
        GraphAutomorphism::new(&self.graph, vperm, eperm)
    }
}

/// Whisker a core at the given attachment vertices.
#[must_use]
pub fn whiskered_graph(core: &Graph, p_attach: &[usize], q_attach: &[usize]) -> WhiskeredGraph {
    let nv = core.n_vertices();
    let ne = core.n_edges();
    let mut edges = core.edges().to_vec();
    let mut p_leaves = Vec::with_capacity(p_attach.len());
    let mut q_leaves = Vec::with_capacity(q_attach.len());
    let mut p_whiskers = Vec::with_capacity(p_attach.len());
    let mut q_whiskers = Vec::with_capacity(q_attach.len());
    for (i, &at) in p_attach.iter().enumerate() {
        let leaf = nv + i;
        edges.push((at, leaf));
        p_leaves.push(leaf);
        p_whiskers.push(ne + i);
    }
    for (j, &at) in q_attach.iter().enumerate() {
        let leaf = nv + p_attach.len() + j;
        edges.push((at, leaf));
        q_leaves.push(leaf);
        q_whiskers.push(ne + p_attach.len() + j);
    }
    let graph = Graph { n_vertices: nv + p_attach.len() + q_attach.len(), edges };
    WhiskeredGraph { graph, p_leaves, q_leaves, p_whiskers, q_whiskers }
}

/// A family of cobordisms over `BΓ`: a cobordism plus an action of `Γ` on
/// the core fixing both boundary images pointwise.
#[derive(Clone, Debug)]
pub struct FamilyCobordism {
    pub cob: GraphCobordism,
    pub gamma: FiniteGroup,
    /// One automorphism per group element (index 0 must be the identity).
    pub action: Vec<GraphAutomorphism>,
}

impl FamilyCobordism {
    pub fn new(
        cob: GraphCobordism,
        gamma: FiniteGroup,
        action: Vec<GraphAutomorphism>,
    ) -> Result<FamilyCobordism> {
        if action.len() != gamma.order() as usize {
            return Err(Error::ActionLawViolation("one automorphism per group element required".into()));
        }
        let id = GraphAutomorphism::identity(&cob.core);
        if action[0] != id {
            return Err(Error::ActionLawViolation("element 0 must act as the identity".into()));
        }
        for g in 0..gamma.order() {
            for h in 0..gamma.order() {
                let gh = gamma.mul(g, h);
                let composed = action[g as usize].compose(&action[h as usize]);
                if composed != action[gh as usize] {
                    return Err(Error::ActionLawViolation(format!(
                        "action of {g}·{h} differs from the composite"
                    )));
                }
            }
        }
        // The action must fix both boundary images pointwise: image
        // vertices stay put and image edge paths are preserved exactly.
        for auto in &action {
            for phi in [&cob.phi_x, &cob.phi_y] {
                for v in 0..phi.source().n_vertices() {
                    let img = phi.vertex_image(v);
                    if auto.vertex_image(img) != img {
                        return Err(Error::ActionLawViolation(format!(
                            "action moves boundary image vertex {img}"
                        )));
                    }
                }
                for e in 0..phi.source().n_edges() {
                    let path = phi.edge_image(e);
                    let moved: Vec<EdgeStep> = path.iter().map(|&s| auto.apply_step(s)).collect();
                    if moved != path {
                        return Err(Error::ActionLawViolation(format!(
                            "action moves the image of boundary edge {e}"
                        )));
                    }
                }
            }
        }
        Ok(FamilyCobordism { cob, gamma, action })
    }

    /// The trivial family over the trivial group.
    pub fn trivial(cob: GraphCobordism) -> FamilyCobordism {
        let id = GraphAutomorphism::identity(&cob.core);
        FamilyCobordism { cob, gamma: FiniteGroup::trivial(), action: vec![id] }
    }

    /// Compose families: underlying cobordisms glue, and the parameter
    /// group becomes `Γ_t × Γ_s` acting blockwise on the glued core (both
    /// factors fix the shared interface, so the blocks commute).
    pub fn compose(&self, t: &FamilyCobordism, max_order: u32) -> Result<FamilyCobordism> {
        let cob = self.cob.compose(&t.cob)?;
        let gamma = t.gamma.direct_product(&self.gamma, max_order)?;
        // Rebuild each factor's automorphism on the composite core.  The
        // composite keeps A-vertices/edges at their indices; unglued
        // B-vertices/edges were appended in order, so recover the mapping
        // the same way `GraphCobordism::compose` built it.
        let a = &self.cob.core;
        let b = &t.cob.core;
        let y = &self.cob.y;
        let mut b_vertex_map = vec![usize::MAX; b.n_vertices()];
        let mut b_vertex_glued = vec![false; b.n_vertices()];
        for v in 0..y.n_vertices() {
            let bw = t.cob.phi_x.vertex_image(v);
            b_vertex_map[bw] = self.cob.phi_y.vertex_image(v);
            b_vertex_glued[bw] = true;
        }
        let mut next_v = a.n_vertices();
        for w in 0..b.n_vertices() {
            if !b_vertex_glued[w] {
                b_vertex_map[w] = next_v;
                next_v += 1;
            }
        }
        let mut b_edge_map = vec![(usize::MAX, false); b.n_edges()];
        let mut b_edge_glued = vec![false; b.n_edges()];
        for e in 0..y.n_edges() {
            let (ae, da) = self.cob.phi_y.edge_image(e)[0];
            let (be, db) = t.cob.phi_x.edge_image(e)[0];
            b_edge_map[be] = (ae, da != db);
            b_edge_glued[be] = true;
        }
        let mut next_e = a.n_edges();
        for f in 0..b.n_edges() {
            if !b_edge_glued[f] {
                b_edge_map[f] = (next_e, false);
                next_e += 1;
            }
        }
        let mut action = Vec::with_capacity(gamma.order() as usize);
        for g in 0..gamma.order() {
            let (gt, gs) = (g / self.gamma.order(), g % self.gamma.order());
            let auto_s = &self.action[gs as usize];
            let auto_t = &t.action[gt as usize];
            let mut vperm: Vec<usize> = (0..cob.core.n_vertices()).collect();
            let mut eperm: Vec<(usize, bool)> =
                (0..cob.core.n_edges()).map(|e| (e, false)).collect();
            // A-block: γ_s acts on A-indices directly.
            for v in 0..a.n_vertices() {
                vperm[v] = auto_s.vertex_image(v);
            }
            for e in 0..a.n_edges() {
                let (img, d) = auto_s.apply_step((e, Dir::Fwd));
                eperm[e] = (img, d == Dir::Rev);
            }
            // B-block: γ_t acts on B, transported along the gluing maps.
            // Glued cells sit inside the fixed interface image, where γ_t
            // is the identity, so this is consistent with the A-block.
            for w in 0..b.n_vertices() {
                let img = auto_t.vertex_image(w);
                if !b_vertex_glued[w] {
                    vperm[b_vertex_map[w]] = b_vertex_map[img];
                }
            }
            for f in 0..b.n_edges() {
                if !b_edge_glued[f] {
                    let (img, d) = auto_t.apply_step((f, Dir::Fwd));
                    let (tgt, flip) = b_edge_map[img];
                    eperm[b_edge_map[f].0] = (tgt, (d == Dir::Rev) ^ flip);
                }
            }
            action.push(GraphAutomorphism::new(&cob.core, vperm, eperm)?);
        }
        FamilyCobordism::new(cob, gamma, action)
    }

    /// Disjoint union of families over `Γ₁ × Γ₂`.
    pub fn disjoint_union(&self, other: &FamilyCobordism, max_order: u32) -> Result<FamilyCobordism> {
        let cob = self.cob.disjoint_union(&other.cob);
        let gamma = self.gamma.direct_product(&other.gamma, max_order)?;
        let (dv, de) = (self.cob.core.n_vertices(), self.cob.core.n_edges());
        let mut action = Vec::with_capacity(gamma.order() as usize);
        for g in 0..gamma.order() {
            let (g1, g2) = (g / other.gamma.order(), g % other.gamma.order());
            let a1 = &self.action[g1 as usize];
            let a2 = &other.action[g2 as usize];
            let mut vperm: Vec<usize> = (0..cob.core.n_vertices()).collect();
            let mut eperm: Vec<(usize, bool)> =
                (0..cob.core.n_edges()).map(|e| (e, false)).collect();
            for v in 0..dv {
                vperm[v] = a1.vertex_image(v);
            }
            for v in 0..other.cob.core.n_vertices() {
                vperm[dv + v] = dv + a2.vertex_image(v);
            }
            for e in 0..de {
                let (img, d) = a1.apply_step((e, Dir::Fwd));
                eperm[e] = (img, d == Dir::Rev);
            }
            for e in 0..other.cob.core.n_edges() {
                let (img, d) = a2.apply_step((e, Dir::Fwd));
                eperm[de + e] = (de + img, d == Dir::Rev);
            }
            action.push(GraphAutomorphism::new(&cob.core, vperm, eperm)?);
        }
        FamilyCobordism::new(cob, gamma, action)
    }
}

/// The reflection family over `BZ/2` on the based circle-with-arc core:
/// vertices `{m, x₀, q₀}`, edges `e₁ : m→x₀`, `e₂ : x₀→m`, `c′ : x₀→q₀`;
/// incoming point at `m`, outgoing point at `q₀`; the reflection swaps
/// `e₁ ↔ ē₂` and fixes `c′` and all vertices.
pub fn make_theorem91_family() -> FamilyCobordism {
    let core = Graph::new(3, vec![(0, 1), (1, 0), (1, 2)]).expect("valid core");
    let pt = Graph::new(1, vec![]).expect("valid point");
    let phi_x = GraphMap::new(pt.clone(), core.clone(), vec![0], vec![]).expect("valid phi_x");
    let phi_y = GraphMap::new(pt.clone(), core.clone(), vec![2], vec![]).expect("valid phi_y");
    let cob = GraphCobordism::new(pt.clone(), pt, core.clone(), phi_x, phi_y, EmbeddingMode::CheckedInjective)
        .expect("valid cobordism");
    let gamma = FiniteGroup::cyclic(2);
    let id = GraphAutomorphism::identity(&core);
    let refl = GraphAutomorphism::new(&core, vec![0, 1, 2], vec![(1, true), (0, true), (2, false)])
        .expect("valid reflection");
    FamilyCobordism::new(cob, gamma, vec![id, refl]).expect("valid family")
}
