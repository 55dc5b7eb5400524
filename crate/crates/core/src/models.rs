//! Stock graphs, cobordisms, and families used by the verification
//! suites and the command-line reproduction commands.

use crate::hgraph::{
    make_theorem91_family, Dir, EmbeddingMode, FamilyCobordism, Graph, GraphCobordism, GraphMap,
};

/// A single point.
pub fn pt() -> Graph {
    Graph::new(1, vec![]).unwrap()
}

/// Two points.
pub fn two_points() -> Graph {
    Graph::new(2, vec![]).unwrap()
}

/// A circle with one vertex.
pub fn circle() -> Graph {
    Graph::new(1, vec![(0, 0)]).unwrap()
}

/// A circle subdivided into two vertices and two edges `0→1`, `1→0`.
pub fn circle2() -> Graph {
    Graph::new(2, vec![(0, 1), (1, 0)]).unwrap()
}

/// Two circles.
pub fn two_circles() -> Graph {
    Graph::new(2, vec![(0, 0), (1, 1)]).unwrap()
}

/// A wedge of two circles at one vertex (petals `a = 0`, `b = 1`).
pub fn wedge() -> Graph {
    Graph::new(1, vec![(0, 0), (0, 0)]).unwrap()
}

/// The tripod core: in-ends at vertices 0 and 1, out-end at vertex 2.
pub fn tripod_core() -> Graph {
    Graph::new(3, vec![(0, 2), (1, 2)]).unwrap()
}

/// The trivial cylinder family over any graph.
pub fn cylinder_family(x: &Graph) -> FamilyCobordism {
    FamilyCobordism::trivial(GraphCobordism::cylinder(x.clone()))
}

/// The product cobordism `pt ⊔ pt ⇸ pt` over the tripod core.
pub fn tripod() -> GraphCobordism {
    let core = tripod_core();
    let phi_x = GraphMap::new(two_points(), core.clone(), vec![0, 1], vec![]).unwrap();
    let phi_y = GraphMap::new(pt(), core.clone(), vec![2], vec![]).unwrap();
    GraphCobordism::new(two_points(), pt(), core, phi_x, phi_y, EmbeddingMode::CheckedInjective)
        .unwrap()
}

/// The coproduct cobordism `pt ⇸ pt ⊔ pt` (the tripod read backwards).
pub fn cotripod() -> GraphCobordism {
    let core = tripod_core();
    let phi_x = GraphMap::new(pt(), core.clone(), vec![2], vec![]).unwrap();
    let phi_y = GraphMap::new(two_points(), core.clone(), vec![0, 1], vec![]).unwrap();
    GraphCobordism::new(pt(), two_points(), core, phi_x, phi_y, EmbeddingMode::CheckedInjective)
        .unwrap()
}

/// The counit cobordism `pt ⇸ ∅`.
pub fn counit() -> GraphCobordism {
    let core = pt();
    let phi_x = GraphMap::new(pt(), core.clone(), vec![0], vec![]).unwrap();
    let phi_y = GraphMap::new(Graph::empty(), core.clone(), vec![], vec![]).unwrap();
    GraphCobordism::new(pt(), Graph::empty(), core, phi_x, phi_y, EmbeddingMode::CheckedInjective)
        .unwrap()
}

/// First half of the pants factorization: `S¹ ⊔ S¹ ⇸ S¹ ∨ S¹`, the two
/// circles landing on the two petals and the outgoing map the identity.
pub fn pants_r() -> GraphCobordism {
    let core = wedge();
    let phi_x = GraphMap::new(
        two_circles(),
        core.clone(),
        vec![0, 0],
        vec![vec![(0, Dir::Fwd)], vec![(1, Dir::Fwd)]],
    )
    .unwrap();
    let phi_y = GraphMap::identity(core.clone());
    GraphCobordism::new(
        two_circles(),
        core.clone(),
        core,
        phi_x,
        phi_y,
        EmbeddingMode::CheckedInjective,
    )
    .unwrap()
}

/// Second half of the pants factorization: `S¹ ∨ S¹ ⇸ S¹`, the outgoing
/// circle traversing `a·b`.  The outgoing map is a homotopy embedding but
/// not a subgraph inclusion, so the cobordism is marked trusted.
pub fn pants_q() -> GraphCobordism {
    let core = wedge();
    let phi_x = GraphMap::identity(core.clone());
    let phi_y = GraphMap::new(
        circle(),
        core.clone(),
        vec![0],
        vec![vec![(0, Dir::Fwd), (1, Dir::Fwd)]],
    )
    .unwrap();
    GraphCobordism::new(core.clone(), circle(), core, phi_x, phi_y, EmbeddingMode::Trusted)
        .unwrap()
}

/// The pants cobordism `S¹ ⊔ S¹ ⇸ S¹` built in one piece over the wedge.
pub fn pants_direct() -> GraphCobordism {
    let core = wedge();
    let phi_x = GraphMap::new(
        two_circles(),
        core.clone(),
        vec![0, 0],
        vec![vec![(0, Dir::Fwd)], vec![(1, Dir::Fwd)]],
    )
    .unwrap();
    let phi_y = GraphMap::new(
        circle(),
        core.clone(),
        vec![0],
        vec![vec![(0, Dir::Fwd), (1, Dir::Fwd)]],
    )
    .unwrap();
    GraphCobordism::new(two_circles(), circle(), core, phi_x, phi_y, EmbeddingMode::Trusted)
        .unwrap()
}

/// The reflection family on the based circle (see
/// [`make_theorem91_family`]).
pub fn theorem91() -> FamilyCobordism {
    make_theorem91_family()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stock_cobordisms_validate() {
        for cob in [tripod(), cotripod(), counit(), pants_r(), pants_q(), pants_direct()] {
            assert!(cob.validate().is_ok(), "{:?}", cob.validate().issues);
        }
        assert!(theorem91().cob.validate().is_ok());
    }

    #[test]
    fn pants_compose_through_the_wedge() {
        let composite = pants_r().compose(&pants_q()).unwrap();
        assert_eq!(composite.core.n_vertices(), 1);
        assert_eq!(composite.core.n_edges(), 2);
        assert!(composite.validate().is_ok());
        // The composite agrees with the one-piece pants.
        let direct = pants_direct();
        assert_eq!(composite.x.edges(), direct.x.edges());
        assert_eq!(composite.y.edges(), direct.y.edges());
        assert_eq!(composite.core.edges(), direct.core.edges());
    }

    #[test]
    fn tripods_compose_for_associativity() {
        // (pt⊔pt)⊔pt ⇸ pt⊔pt ⇸ pt.
        let first = FamilyCobordism::trivial(tripod())
            .disjoint_union(&cylinder_family(&pt()), 100)
            .unwrap();
        let second = FamilyCobordism::trivial(tripod());
        let comp = first.compose(&second, 100).unwrap();
        assert!(comp.cob.validate().is_ok());
        assert_eq!(comp.cob.x.n_vertices(), 3);
        assert_eq!(comp.cob.y.n_vertices(), 1);
        assert_eq!(comp.cob.chi_rel(), -2);
    }
}
