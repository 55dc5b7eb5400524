//! Free groupoids of graphs on a list of basepoints.
//!
//! `FreeGroupoid` models the fundamental groupoid `Π₁(X, P)` of a graph
//! `X` restricted to a list `P` of basepoint vertices (repetitions
//! allowed: objects are *positions* in the list, not vertices).  It is
//! free on a canonical basis of arrows: per component, first a connector
//! from the component's root object to every other object, then one loop
//! per non-tree edge of a deterministic BFS spanning tree.  The number of
//! basis arrows is `|P| − χ(X)`.
//!
//! Arrows are represented as reduced words in the basis.  A `Word` lists
//! its letters in traversal order (first arrow traversed comes first);
//! evaluation into a group multiplies in the opposite order, matching the
//! function-composition convention `f(w₂ ∘ w₁) = f(w₂) · f(w₁)`.

use crate::fingroup::FiniteGroup;
use crate::hgraph::{Dir, EdgeStep, Graph, GraphAutomorphism, GraphMap};
use crate::{Error, Result};

/// A (reduced) word in groupoid basis arrows.  Letters are
/// `(basis index, sign)` in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn identity() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn generator(i: usize) -> Word {
        Word { letters: vec![(i, 1)] }
    }

    /// Build from letters, cancelling adjacent inverse pairs.
    pub fn reduced(letters: Vec<(usize, i8)>) -> Word {
        let mut stack: Vec<(usize, i8)> = Vec::with_capacity(letters.len());
        for (i, s) in letters {
            debug_assert!(s == 1 || s == -1);
            if let Some(&(j, t)) = stack.last() {
                if i == j && s == -t {
                    stack.pop();
                    continue;
                }
            }
            stack.push((i, s));
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The inverse word: letters reversed with signs flipped.
    #[must_use]
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(i, s)| (i, -s)).collect() }
    }

    /// Concatenation `self` then `next` (traversal order), reduced.
    #[must_use]
    pub fn then(&self, next: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&next.letters);
        Word::reduced(letters)
    }

    /// Evaluate under an assignment of group elements to basis arrows.
    /// Letters multiply in reverse traversal order: the value of the last
    /// arrow traversed is the leftmost factor.
    pub fn evaluate(&self, group: &FiniteGroup, assign: &[u32]) -> u32 {
        let mut acc = 0;
        for &(i, s) in &self.letters {
            let g = if s == 1 { assign[i] } else { group.inv(assign[i]) };
            acc = group.mul(g, acc);
        }
        acc
    }
}

/// What a basis arrow is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// Connector from the component root object to `object`.
    Connector { object: usize },
    /// Loop at the component root around non-tree edge `edge`.
    Loop { edge: usize },
}

#[derive(Clone, Debug)]
pub struct BasisArrow {
    pub src: usize,
    pub tgt: usize,
    /// Underlying edge path (from the source object's vertex to the
    /// target object's vertex).
    pub path: Vec<EdgeStep>,
    pub kind: BasisKind,
}

/// The free groupoid `Π₁(X, P)`.
#[derive(Clone, Debug)]
pub struct FreeGroupoid {
    graph: Graph,
    basepoints: Vec<usize>,
    component_of_object: Vec<usize>,
    basis: Vec<BasisArrow>,
    connector_of_object: Vec<Option<usize>>,
    loop_of_edge: Vec<Option<usize>>,
}

impl FreeGroupoid {
    pub fn new(graph: &Graph, basepoints: &[usize]) -> Result<FreeGroupoid> {
        for &p in basepoints {
            if p >= graph.n_vertices() {
                return Err(Error::BasepointCoverage(format!("basepoint {p} out of range")));
            }
        }
        let comp = graph.components();
        let n_comp = graph.n_components();
        // Root object per component: the least list position landing there.
        let mut root_object = vec![usize::MAX; n_comp];
        for (obj, &p) in basepoints.iter().enumerate() {
            let c = comp[p];
            if root_object[c] == usize::MAX {
                root_object[c] = obj;
            }
        }
        if let Some(c) = (0..n_comp).find(|&c| root_object[c] == usize::MAX) {
            return Err(Error::BasepointCoverage(format!("component {c} has no basepoint")));
        }
        // Deterministic BFS from each root vertex, edges scanned in index
        // order at every vertex.
        let mut tree_path: Vec<Vec<EdgeStep>> = vec![Vec::new(); graph.n_vertices()];
        let mut visited = vec![false; graph.n_vertices()];
        let mut is_tree_edge = vec![false; graph.n_edges()];
        for c in 0..n_comp {
            let root = basepoints[root_object[c]];
            visited[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for e in 0..graph.n_edges() {
                    let (a, b) = graph.edge(e);
                    let (dir, w) = if a == u {
                        (Dir::Fwd, b)
                    } else if b == u {
                        (Dir::Rev, a)
                    } else {
                        continue;
                    };
                    if !visited[w] {
                        visited[w] = true;
                        is_tree_edge[e] = true;
                        let mut path = tree_path[u].clone();
                        path.push((e, dir));
                        tree_path[w] = path;
                        queue.push_back(w);
                    }
                }
            }
        }
        // Basis: per component, connectors (objects in list order, root
        // skipped) then loops (non-tree edges in index order).
        let component_of_object: Vec<usize> = basepoints.iter().map(|&p| comp[p]).collect();
        let mut basis = Vec::new();
        let mut connector_of_object = vec![None; basepoints.len()];
        let mut loop_of_edge = vec![None; graph.n_edges()];
        for c in 0..n_comp {
            for (obj, &p) in basepoints.iter().enumerate() {
                if component_of_object[obj] != c || obj == root_object[c] {
                    continue;
                }
                connector_of_object[obj] = Some(basis.len());
                basis.push(BasisArrow {
                    src: root_object[c],
                    tgt: obj,
                    path: tree_path[p].clone(),
                    kind: BasisKind::Connector { object: obj },
                });
            }
            for e in 0..graph.n_edges() {
                let (u, v) = graph.edge(e);
                if comp[u] != c || is_tree_edge[e] {
                    continue;
                }
                let mut path = tree_path[u].clone();
                path.push((e, Dir::Fwd));
                path.extend(tree_path[v].iter().rev().map(|&(f, d)| (f, d.flip())));
                loop_of_edge[e] = Some(basis.len());
                basis.push(BasisArrow {
                    src: root_object[c],
                    tgt: root_object[c],
                    path,
                    kind: BasisKind::Loop { edge: e },
                });
            }
        }
        Ok(FreeGroupoid {
            graph: graph.clone(),
            basepoints: basepoints.to_vec(),
            component_of_object,
            basis,
            connector_of_object,
            loop_of_edge,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn basepoints(&self) -> &[usize] {
        &self.basepoints
    }

    pub fn n_objects(&self) -> usize {
        self.basepoints.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisArrow] {
        &self.basis
    }

    pub fn component_of_object(&self, obj: usize) -> usize {
        self.component_of_object[obj]
    }

    /// Basis arrows generating the given component: connectors first.
    pub fn component_basis(&self, c: usize) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.component_of_object[self.basis[i].src] == c)
            .collect()
    }

    /// Express a concrete edge path from object `from` to object `to` as
    /// a reduced word in the basis.
    pub fn word_between(&self, from: usize, to: usize, path: &[EdgeStep]) -> Result<Word> {
        if from >= self.n_objects() || to >= self.n_objects() {
            return Err(Error::EndpointMismatch("object index out of range".into()));
        }
        let mut at = self.basepoints[from];
        let mut letters = Vec::new();
        if let Some(ci) = self.connector_of_object[from] {
            letters.push((ci, -1));
        }
        for &step in path {
            if step.0 >= self.graph.n_edges() {
                return Err(Error::EndpointMismatch(format!("edge {} out of range", step.0)));
            }
            let (a, b) = self.graph.step_endpoints(step);
            if a != at {
                return Err(Error::EndpointMismatch(format!(
                    "path breaks at vertex {at} (step starts at {a})"
                )));
            }
            at = b;
            if let Some(li) = self.loop_of_edge[step.0] {
                letters.push((li, if step.1 == Dir::Fwd { 1 } else { -1 }));
            }
        }
        if at != self.basepoints[to] {
            return Err(Error::EndpointMismatch(format!(
                "path ends at vertex {at}, expected {}",
                self.basepoints[to]
            )));
        }
        if let Some(ci) = self.connector_of_object[to] {
            letters.push((ci, 1));
        }
        Ok(Word::reduced(letters))
    }
}

/// A functor between free groupoids, stored as an object map plus the
/// image word of every source basis arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidMorphism {
    source_rank: usize,
    object_map: Vec<usize>,
    arrow_words: Vec<Word>,
}

impl GroupoidMorphism {
    pub fn identity(gpd: &FreeGroupoid) -> GroupoidMorphism {
        GroupoidMorphism {
            source_rank: gpd.rank(),
            object_map: (0..gpd.n_objects()).collect(),
            arrow_words: (0..gpd.rank()).map(Word::generator).collect(),
        }
    }

    /// The functor induced by a graph map `φ : X → Y` together with, for
    /// each source object `a`, an *entry path* in `Y` from the target
    /// basepoint of `object_map[a]` to `φ(basepoint of a)`.  A source
    /// basis arrow with path `p` maps to the word of
    /// `entry[a] · φ(p) · entry[b]⁻¹`.
    pub fn induced(
        source: &FreeGroupoid,
        target: &FreeGroupoid,
        map: &GraphMap,
        object_map: Vec<usize>,
        entry: Vec<Vec<EdgeStep>>,
    ) -> Result<GroupoidMorphism> {
        if object_map.len() != source.n_objects() || entry.len() != source.n_objects() {
            return Err(Error::EndpointMismatch("object map / entry path sizes mismatch".into()));
        }
        if map.source() != source.graph() || map.target() != target.graph() {
            return Err(Error::EndpointMismatch("graph map endpoints mismatch".into()));
        }
        for (a, path) in entry.iter().enumerate() {
            let want_start = target.basepoints[object_map[a]];
            let want_end = map.vertex_image(source.basepoints[a]);
            let mut at = want_start;
            for &step in path {
                let (s, t) = target.graph().step_endpoints(step);
                if s != at {
                    return Err(Error::EndpointMismatch(format!(
                        "entry path of object {a} breaks at vertex {at}"
                    )));
                }
                at = t;
            }
            if at != want_end {
                return Err(Error::EndpointMismatch(format!(
                    "entry path of object {a} ends at {at}, expected {want_end}"
                )));
            }
        }
        let map_path = |p: &[EdgeStep]| -> Vec<EdgeStep> {
            let mut out = Vec::new();
            for &(e, d) in p {
                let img = map.edge_image(e);
                match d {
                    Dir::Fwd => out.extend_from_slice(img),
                    Dir::Rev => out.extend(img.iter().rev().map(|&(f, dd)| (f, dd.flip()))),
                }
            }
            out
        };
        let mut arrow_words = Vec::with_capacity(source.rank());
        for arrow in source.basis() {
            let mut path = entry[arrow.src].clone();
            path.extend(map_path(&arrow.path));
            path.extend(entry[arrow.tgt].iter().rev().map(|&(f, d)| (f, d.flip())));
            arrow_words.push(target.word_between(
                object_map[arrow.src],
                object_map[arrow.tgt],
                &path,
            )?);
        }
        Ok(GroupoidMorphism { source_rank: source.rank(), object_map, arrow_words })
    }

    /// The functor induced by a graph automorphism fixing all basepoint
    /// vertices (objects are fixed, arrows move).
    pub fn induced_automorphism(
        gpd: &FreeGroupoid,
        auto: &GraphAutomorphism,
    ) -> Result<GroupoidMorphism> {
        for (obj, &p) in gpd.basepoints().iter().enumerate() {
            if auto.vertex_image(p) != p {
                return Err(Error::ActionLawViolation(format!(
                    "automorphism moves basepoint vertex {p} of object {obj}"
                )));
            }
        }
        let mut arrow_words = Vec::with_capacity(gpd.rank());
        for arrow in gpd.basis() {
            let path: Vec<EdgeStep> = arrow.path.iter().map(|&s| auto.apply_step(s)).collect();
            arrow_words.push(gpd.word_between(arrow.src, arrow.tgt, &path)?);
        }
        Ok(GroupoidMorphism {
            source_rank: gpd.rank(),
            object_map: (0..gpd.n_objects()).collect(),
            arrow_words,
        })
    }

    pub fn object_image(&self, obj: usize) -> usize {
        self.object_map[obj]
    }

    pub fn arrow_word(&self, i: usize) -> &Word {
        &self.arrow_words[i]
    }

    /// Substitute basis arrows by their image words.
    pub fn apply_word(&self, w: &Word) -> Word {
        let mut letters = Vec::new();
        for &(i, s) in w.letters() {
            let img = if s == 1 { self.arrow_words[i].clone() } else { self.arrow_words[i].inverse() };
            letters.extend_from_slice(img.letters());
        }
        Word::reduced(letters)
    }

    /// Pull a functor `f : target → G` (an assignment of group elements
    /// to the target's basis arrows) back along this morphism.
    pub fn pullback(&self, group: &FiniteGroup, f: &[u32]) -> Vec<u32> {
        self.arrow_words.iter().map(|w| w.evaluate(group, f)).collect()
    }

    /// Composition `next ∘ self` (apply `self` first).
    #[must_use]
    pub fn then(&self, next: &GroupoidMorphism) -> GroupoidMorphism {
        GroupoidMorphism {
            source_rank: self.source_rank,
            object_map: self.object_map.iter().map(|&o| next.object_map[o]).collect(),
            arrow_words: self.arrow_words.iter().map(|w| next.apply_word(w)).collect(),
        }
    }
}

/// An action of a finite group on a free groupoid by object-fixing
/// functors, one per group element.
#[derive(Clone, Debug)]
pub struct GroupoidAction {
    pub gamma: FiniteGroup,
    functors: Vec<GroupoidMorphism>,
}

impl GroupoidAction {
    /// Induce an action from graph automorphisms and verify the full
    /// action law `F_g ∘ F_h = F_{g·h}` on reduced words.
    pub fn induced(
        gpd: &FreeGroupoid,
        gamma: &FiniteGroup,
        autos: &[GraphAutomorphism],
    ) -> Result<GroupoidAction> {
        if autos.len() != gamma.order() as usize {
            return Err(Error::ActionLawViolation("one automorphism per element required".into()));
        }
        let functors: Vec<GroupoidMorphism> = autos
            .iter()
            .map(|a| GroupoidMorphism::induced_automorphism(gpd, a))
            .collect::<Result<_>>()?;
        if functors[0] != GroupoidMorphism::identity(gpd) {
            return Err(Error::ActionLawViolation("element 0 must act as the identity".into()));
        }
        for g in 0..gamma.order() {
            for h in 0..gamma.order() {
                let composed = functors[h as usize].then(&functors[g as usize]);
                if composed != functors[gamma.mul(g, h) as usize] {
                    return Err(Error::ActionLawViolation(format!(
                        "functors of {g}·{h} violate the action law"
                    )));
                }
            }
        }
        Ok(GroupoidAction { gamma: gamma.clone(), functors })
    }

    /// The trivial action of the trivial group.
    pub fn trivial(gpd: &FreeGroupoid) -> GroupoidAction {
        GroupoidAction {
            gamma: FiniteGroup::trivial(),
            functors: vec![GroupoidMorphism::identity(gpd)],
        }
    }

    pub fn functor(&self, g: u32) -> &GroupoidMorphism {
        &self.functors[g as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{make_theorem91_family, whiskered_graph};

    fn circle() -> Graph {
        Graph::new(1, vec![(0, 0)]).unwrap()
    }

    #[test]
    fn circle_groupoid_is_free_on_one_loop() {
        let gpd = FreeGroupoid::new(&circle(), &[0]).unwrap();
        assert_eq!(gpd.rank(), 1);
        assert!(matches!(gpd.basis()[0].kind, BasisKind::Loop { edge: 0 }));
        let w = gpd.word_between(0, 0, &[(0, Dir::Fwd)]).unwrap();
        assert_eq!(w, Word::generator(0));
        let back = gpd.word_between(0, 0, &[(0, Dir::Rev)]).unwrap();
        assert_eq!(back, w.inverse());
    }

    #[test]
    fn two_marked_points_on_a_circle() {
        // Two vertices, edges 0→1 and 1→0; basepoints at both vertices.
        let g = Graph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let gpd = FreeGroupoid::new(&g, &[0, 1]).unwrap();
        assert_eq!(gpd.rank(), 2);
        assert!(matches!(gpd.basis()[0].kind, BasisKind::Connector { object: 1 }));
        assert!(matches!(gpd.basis()[1].kind, BasisKind::Loop { edge: 1 }));
        // Half-turn from 0 to 1 is the connector itself.
        let half = gpd.word_between(0, 1, &[(0, Dir::Fwd)]).unwrap();
        assert_eq!(half, Word::generator(0));
        // The full turn at 0 is the loop.
        let full = gpd.word_between(0, 0, &[(0, Dir::Fwd), (1, Dir::Fwd)]).unwrap();
        assert_eq!(full, Word::generator(1));
        // The full turn at 1 is the loop conjugated by the connector.
        let at1 = gpd.word_between(1, 1, &[(1, Dir::Fwd), (0, Dir::Fwd)]).unwrap();
        assert_eq!(at1.letters(), &[(0, -1), (1, 1), (0, 1)]);
    }

    #[test]
    fn rank_matches_list_size_minus_euler() {
        let wedge = Graph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(FreeGroupoid::new(&wedge, &[0]).unwrap().rank(), 2);
        let tripod = Graph::new(4, vec![(0, 3), (1, 3), (2, 3)]).unwrap();
        assert_eq!(FreeGroupoid::new(&tripod, &[0, 1, 2]).unwrap().rank(), 2);
        // Repeated basepoints give distinct objects.
        let pt = Graph::new(1, vec![]).unwrap();
        assert_eq!(FreeGroupoid::new(&pt, &[0, 0]).unwrap().rank(), 1);
        // Disconnected graph: point ⊔ circle.
        let two = Graph::new(2, vec![(1, 1)]).unwrap();
        let gpd = FreeGroupoid::new(&two, &[0, 1]).unwrap();
        assert_eq!(gpd.rank(), 1);
        assert!(matches!(gpd.basis()[0].kind, BasisKind::Loop { edge: 0 }));
    }

    #[test]
    fn uncovered_component_is_rejected() {
        let two = Graph::new(2, vec![(1, 1)]).unwrap();
        assert!(matches!(
            FreeGroupoid::new(&two, &[0]),
            Err(Error::BasepointCoverage(_))
        ));
    }

    #[test]
    fn endpoint_mismatch_is_rejected() {
        let gpd = FreeGroupoid::new(&circle(), &[0]).unwrap();
        assert!(matches!(gpd.word_between(0, 0, &[]), Ok(w) if w.is_identity()));
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let gpd2 = FreeGroupoid::new(&g, &[0, 1]).unwrap();
        assert!(matches!(
            gpd2.word_between(0, 0, &[(0, Dir::Fwd)]),
            Err(Error::EndpointMismatch(_))
        ));
    }

    #[test]
    fn words_reduce_and_evaluate_in_reverse_traversal_order() {
        let w = Word::reduced(vec![(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w.letters(), &[(0, 1), (0, 1)]);
        assert!(w.then(&w.inverse()).is_identity());
        // Evaluate in S₃: assign a = (01) to 0 and b = (012) to 1; the
        // word [a then b] evaluates to b·a.
        let s3 = FiniteGroup::symmetric(3);
        let word = Word::reduced(vec![(0, 1), (1, 1)]);
        assert_eq!(word.evaluate(&s3, &[2, 3]), s3.mul(3, 2));
    }

    #[test]
    fn reflection_action_on_the_whiskered_arc_core() {
        let fam = make_theorem91_family();
        let wg = whiskered_graph(&fam.cob.core, &[0], &[2]);
        let gpd = FreeGroupoid::new(&wg.graph, &[wg.p_leaves[0], wg.q_leaves[0]]).unwrap();
        // Basis: connector C from the incoming leaf to the outgoing leaf,
        // then the loop λ around the circle.
        assert_eq!(gpd.rank(), 2);
        assert!(matches!(gpd.basis()[0].kind, BasisKind::Connector { object: 1 }));
        assert!(matches!(gpd.basis()[1].kind, BasisKind::Loop { edge: 1 }));
        let autos: Vec<GraphAutomorphism> = (0..2)
            .map(|g| wg.extend_automorphism(&fam.action[g]).unwrap())
            .collect();
        let action = GroupoidAction::induced(&gpd, &fam.gamma, &autos).unwrap();
        let refl = action.functor(1);
        // The reflection inverts the loop and twists the connector.
        assert_eq!(refl.arrow_word(1), &Word::generator(1).inverse());
        assert_eq!(refl.arrow_word(0).letters(), &[(1, -1), (0, 1)]);
    }

    #[test]
    fn broken_action_law_is_detected() {
        let wedge = Graph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let gpd = FreeGroupoid::new(&wedge, &[0]).unwrap();
        let id = GraphAutomorphism::identity(&wedge);
        let swap = GraphAutomorphism::new(&wedge, vec![0], vec![(1, false), (0, false)]).unwrap();
        let z3 = FiniteGroup::cyclic(3);
        // σ has order two, so pretending it generates a 3-cycle fails.
        assert!(matches!(
            GroupoidAction::induced(&gpd, &z3, &[id, swap.clone(), swap]),
            Err(Error::ActionLawViolation(_))
        ));
    }

    #[test]
    fn inclusion_functor_conjugates_by_whiskers() {
        // Incoming point mapped to the circle: the whiskered circle has a
        // connectorless basis with one loop; the induced functor sends
        // nothing (rank 0 source) — use the circle itself as source
        // instead, mapped identically into the whiskered circle.
        let circle = circle();
        let wg = whiskered_graph(&circle, &[0], &[]);
        let target = FreeGroupoid::new(&wg.graph, &[wg.p_leaves[0]]).unwrap();
        let source = FreeGroupoid::new(&circle, &[0]).unwrap();
        let map = GraphMap::new(
            circle.clone(),
            wg.graph.clone(),
            vec![0],
            vec![vec![(0, Dir::Fwd)]],
        )
        .unwrap();
        let entry = vec![vec![(wg.p_whiskers[0], Dir::Rev)]];
        let inc = GroupoidMorphism::induced(&source, &target, &map, vec![0], entry).unwrap();
        // The circle's loop maps to the target's loop (whisker in, around,
        // whisker out reduces to the bare loop at the leaf root).
        assert_eq!(inc.arrow_word(0), &Word::generator(0));
    }
}
