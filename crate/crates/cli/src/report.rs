//! Report rendering and the bundled reproduction suites.

use std::fmt::Write as _;
use std::sync::Arc;

use hhgft::barhom::{
    class_of, cross_product, homology_dim, induced_map, representative, HomologyClass,
};
use hhgft::fingroup::{FiniteGroup, GroupHom};
use hhgft::hgraph::FamilyCobordism;
use hhgft::hhgft::{
    basis_class, operate, operation_matrix, space_labels, state_space, tensor_state, unit_class,
    untensor, verify_axioms, AxiomCheck, StateSpace, TheoryState,
};
use hhgft::models;
use hhgft::{Context, Result};

use crate::doc::{Document, Request};

fn fmt_functor(f: &[u32]) -> String {
    let body: Vec<String> = f.iter().map(u32::to_string).collect();
    format!("[{}]", body.join(","))
}

fn fmt_ints(v: &[usize]) -> String {
    let body: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", body.join(","))
}

/// Compact display of a state: `0`, or `o<orbit>#<class indices>` parts.
fn fmt_state(s: &TheoryState) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (a, comp) in s.components.iter().enumerate() {
        let sup = comp.coords.support();
        if !sup.is_empty() {
            let list: Vec<String> = sup.iter().map(usize::to_string).collect();
            parts.push(format!("o{a}#{}", list.join("+")));
        }
    }
    parts.join(" + ")
}

/// Homology dimensions and representative cycles per degree.
pub fn homology_report(
    ctx: &Context,
    label: &str,
    group: &FiniteGroup,
    max_degree: usize,
) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "group {label}: order {}", group.order());
    let mut dims = Vec::new();
    for d in 0..=max_degree {
        let dim = homology_dim(ctx, group, d)?;
        dims.push(dim.to_string());
        let _ = writeln!(out, "H_{d}: dim {dim}");
        for s in 0..dim {
            let class = basis_class(ctx, group, d, s)?;
            let rep = representative(ctx, &class)?;
            let _ = writeln!(out, "  b{s} = {rep:?}");
        }
    }
    let _ = writeln!(out, "dims: {}", dims.join(","));
    Ok(out)
}

/// Run all `operate` requests of a document: labeled 0/1 grids per block.
pub fn run_operate(ctx: &Context, doc: &Document) -> Result<String> {
    let mut out = String::new();
    let mut any = false;
    for req in &doc.requests {
        let Request::Operate { family, group, p, q, max_beta, max_theta } = req else {
            continue;
        };
        any = true;
        let fam = &doc.families[family];
        let g = &doc.groups[group];
        let _ = writeln!(
            out,
            "operate {family} group={group} in={} out={} beta<={max_beta} theta<={max_theta}",
            fmt_ints(p),
            fmt_ints(q),
        );
        let in_space = state_space(ctx, &fam.cob.x, p, g)?;
        let out_space = state_space(ctx, &fam.cob.y, q, g)?;
        for a in 0..in_space.n_orbits() {
            let _ = writeln!(out, "in o{a} = {}", fmt_functor(in_space.orbit_rep(a)));
        }
        for a in 0..out_space.n_orbits() {
            let _ = writeln!(out, "out o{a} = {}", fmt_functor(out_space.orbit_rep(a)));
        }
        let matrix = operation_matrix(ctx, fam, p, q, g, *max_beta, *max_theta)?;
        if matrix.blocks.is_empty() {
            let _ = writeln!(out, "no nonempty blocks in the window");
        }
        for b in &matrix.blocks {
            let rows = b.out_labels.len();
            let cols = b.beta_dim * b.in_labels.len();
            let _ = writeln!(
                out,
                "block beta={} theta={} out={} size {rows}x{cols}",
                b.beta_degree, b.theta_degree, b.out_degree
            );
            let mut header = String::from("cols:");
            for bi in 0..b.beta_dim {
                for (a, s) in &b.in_labels {
                    let _ = write!(header, " b{bi}*o{a}#{s}");
                }
            }
            let _ = writeln!(out, "{header}");
            for (r, (a, s)) in b.out_labels.iter().enumerate() {
                let mut line = format!("o{a}#{s} |");
                for c in 0..cols {
                    let _ = write!(line, " {}", u8::from(b.matrix.get(r, c)));
                }
                let _ = writeln!(out, "{line}");
            }
        }
        let _ = writeln!(out);
    }
    if !any {
        let _ = writeln!(out, "no operate requests in the document");
    }
    Ok(out)
}

/// Run all axiom-check requests of a document.
pub fn run_verify(ctx: &Context, doc: &Document) -> Result<(String, bool)> {
    let mut checks = Vec::new();
    for req in &doc.requests {
        match req {
            Request::Operate { .. } => {}
            Request::Identity { graph, group, basepoints, degree } => {
                checks.push(AxiomCheck::Identity {
                    name: format!("identity {graph}/{group} degrees<={degree}"),
                    x: doc.graphs[graph].clone(),
                    p: basepoints.clone(),
                    group: doc.groups[group].clone(),
                    max_degree: *degree,
                });
            }
            Request::Gluing { s, t, group, p, mid, q, degree } => {
                checks.push(AxiomCheck::Gluing {
                    name: format!("gluing {t}∘{s}/{group} degrees<={degree}"),
                    s: doc.families[s].clone(),
                    t: doc.families[t].clone(),
                    p: p.clone(),
                    mid: mid.clone(),
                    q: q.clone(),
                    group: doc.groups[group].clone(),
                    max_total_degree: *degree,
                });
            }
            Request::Monoidality { s1, s2, group, p1, q1, p2, q2, degree } => {
                checks.push(AxiomCheck::Monoidality {
                    name: format!("monoidality {s1}⊔{s2}/{group} degrees<={degree}"),
                    s1: doc.families[s1].clone(),
                    s2: doc.families[s2].clone(),
                    p1: p1.clone(),
                    q1: q1.clone(),
                    p2: p2.clone(),
                    q2: q2.clone(),
                    group: doc.groups[group].clone(),
                    max_total_degree: *degree,
                });
            }
            Request::Rebase { family, group, p, q, p_new, q_new, degree } => {
                checks.push(AxiomCheck::Rebase {
                    name: format!("rebase {family}/{group} degrees<={degree}"),
                    fam: doc.families[family].clone(),
                    p: p.clone(),
                    q: q.clone(),
                    p_new: p_new.clone(),
                    q_new: q_new.clone(),
                    group: doc.groups[group].clone(),
                    max_degree: *degree,
                });
            }
        }
    }
    let mut out = String::new();
    if checks.is_empty() {
        let _ = writeln!(out, "no verify requests in the document");
        return Ok((out, true));
    }
    let report = verify_axioms(ctx, checks)?;
    for line in report.lines() {
        let _ = writeln!(out, "{line}");
    }
    let pass = report.all_passed();
    let _ = writeln!(out, "{}", if pass { "all axioms hold" } else { "axiom failures found" });
    Ok((out, pass))
}

/// The addition homomorphism `G × G → G` of an abelian group.
fn addition_hom(ctx: &Context, g: &FiniteGroup) -> Result<GroupHom> {
    let prod = g.direct_product(g, ctx.caps.max_group_order)?;
    let table: Vec<u32> = (0..prod.order())
        .map(|e| {
            let d = prod.decode(e);
            g.mul(d[0], d[1])
        })
        .collect();
    GroupHom::new(prod, g.clone(), table)
}

/// Pontryagin product via the shuffle cross product followed by the
/// addition homomorphism.  Independent of the cobordism pipeline.
fn pontryagin(
    ctx: &Context,
    g: &FiniteGroup,
    a: &HomologyClass,
    b: &HomologyClass,
) -> Result<HomologyClass> {
    let prod = g.direct_product(g, ctx.caps.max_group_order)?;
    let crossed = cross_product(&prod, &representative(ctx, a)?, &representative(ctx, b)?)?;
    class_of(ctx, &induced_map(&addition_hom(ctx, g)?, &crossed))
}

fn case_line(out: &mut String, label: &str, computed: &TheoryState, expected: &TheoryState) -> bool {
    let ok = computed.equals(expected);
    let _ = writeln!(
        out,
        "{label}: computed {} expected {} {}",
        fmt_state(computed),
        fmt_state(expected),
        if ok { "ok" } else { "MISMATCH" }
    );
    ok
}

fn verdict(out: &mut String, name: &str, cases: usize, failures: usize) -> bool {
    if failures == 0 {
        let _ = writeln!(out, "PASS {name} ({cases} cases)");
        true
    } else {
        let _ = writeln!(out, "FAIL {name} ({failures}/{cases} cases mismatched)");
        false
    }
}

/// Reflection-family operation over Z/2 against the Pontryagin oracle.
pub fn reproduce_thm91(ctx: &Context, window: usize) -> Result<(String, bool)> {
    let mut out = String::new();
    let fam = models::theorem91();
    let z2 = FiniteGroup::cyclic(2);
    let space = Arc::new(state_space(ctx, &models::pt(), &[0], &z2)?);
    let _ = writeln!(out, "reflection family over Z/2 vs shuffle Pontryagin oracle");
    let _ = writeln!(out, "window: 0 <= i, j <= {window}");
    let mut cases = 0;
    let mut failures = 0;
    for i in 0..=window {
        for j in 0..=window {
            let beta = basis_class(ctx, &fam.gamma, i, 0)?;
            let theta = TheoryState::basis_state(ctx, space.clone(), j, 0, 0)?;
            let computed = operate(ctx, &fam, &[0], &[0], &beta, &theta)?;
            let mut expected = TheoryState::zero(ctx, space.clone(), i + j)?;
            if i >= 1 {
                let ti = basis_class(ctx, &z2, i, 0)?;
                let tj = basis_class(ctx, &z2, j, 0)?;
                expected.components[0] = pontryagin(ctx, &z2, &ti, &tj)?;
            }
            cases += 1;
            if !case_line(&mut out, &format!("i={i} j={j}"), &computed, &expected) {
                failures += 1;
            }
        }
    }
    let pass = verdict(&mut out, "thm9_1", cases, failures);
    Ok((out, pass))
}

/// Two composed reflection families over Z/2 against the iterated
/// Pontryagin oracle.
pub fn reproduce_cor97(ctx: &Context, max_total: usize) -> Result<(String, bool)> {
    let mut out = String::new();
    let s = models::theorem91();
    let t = models::theorem91();
    let composite = s.compose(&t, ctx.caps.max_group_order)?;
    let z2 = FiniteGroup::cyclic(2);
    let space = Arc::new(state_space(ctx, &models::pt(), &[0], &z2)?);
    let _ = writeln!(out, "composed reflection families over Z/2 vs iterated Pontryagin oracle");
    let _ = writeln!(out, "window: deg(a1) + deg(a2) + deg(b) <= {max_total}");
    let mut cases = 0;
    let mut failures = 0;
    for i1 in 0..=max_total {
        for i2 in 0..=max_total - i1 {
            for j in 0..=max_total - i1 - i2 {
                let bt = basis_class(ctx, &t.gamma, i1, 0)?;
                let bs = basis_class(ctx, &s.gamma, i2, 0)?;
                let beta = class_of(
                    ctx,
                    &cross_product(
                        &composite.gamma,
                        &representative(ctx, &bt)?,
                        &representative(ctx, &bs)?,
                    )?,
                )?;
                let theta = TheoryState::basis_state(ctx, space.clone(), j, 0, 0)?;
                let computed = operate(ctx, &composite, &[0], &[0], &beta, &theta)?;
                let mut expected = TheoryState::zero(ctx, space.clone(), i1 + i2 + j)?;
                if i1 >= 1 && i2 >= 1 {
                    let a1 = basis_class(ctx, &z2, i1, 0)?;
                    let a2 = basis_class(ctx, &z2, i2, 0)?;
                    let b = basis_class(ctx, &z2, j, 0)?;
                    let a12 = pontryagin(ctx, &z2, &a1, &a2)?;
                    expected.components[0] = pontryagin(ctx, &z2, &a12, &b)?;
                }
                cases += 1;
                if !case_line(&mut out, &format!("a1={i1} a2={i2} b={j}"), &computed, &expected)
                {
                    failures += 1;
                }
            }
        }
    }
    let pass = verdict(&mut out, "cor9_7", cases, failures);
    Ok((out, pass))
}

fn all_states(
    ctx: &Context,
    space: &Arc<StateSpace>,
    max_degree: usize,
) -> Result<Vec<TheoryState>> {
    let mut states = Vec::new();
    for d in 0..=max_degree {
        for (orbit, s) in space_labels(ctx, space, d)? {
            states.push(TheoryState::basis_state(ctx, space.clone(), d, orbit, s)?);
        }
    }
    Ok(states)
}

/// `true` iff the counit (the point-to-empty cobordism) sends the state to
/// the nonzero scalar.
fn counit_scalar(ctx: &Context, counit: &FamilyCobordism, x: &TheoryState) -> Result<bool> {
    Ok(!operate(ctx, counit, &[0], &[], &unit_class(), x)?.is_zero())
}

/// Commutativity, associativity, and the counit axiom on the point state
/// space.
pub fn reproduce_frobenius(
    ctx: &Context,
    groups: &[(String, FiniteGroup)],
    window: usize,
) -> Result<(String, bool)> {
    let mut out = String::new();
    let tripod = FamilyCobordism::trivial(models::tripod());
    let cotripod = FamilyCobordism::trivial(models::cotripod());
    let counit = FamilyCobordism::trivial(models::counit());
    let _ = writeln!(out, "Frobenius structure on the point state space, degrees <= {window}");
    let mut all_pass = true;
    for (label, g) in groups {
        let space = Arc::new(state_space(ctx, &models::pt(), &[0], g)?);
        let states = all_states(ctx, &space, window)?;
        let product = |a: &TheoryState, b: &TheoryState| -> Result<TheoryState> {
            let joint = tensor_state(ctx, a, b)?;
            operate(ctx, &tripod, &[0, 1], &[0], &unit_class(), &joint)
        };

        let mut comm_cases = 0;
        let mut comm_fail = 0;
        for a in &states {
            for b in &states {
                if a.degree + b.degree > window {
                    continue;
                }
                comm_cases += 1;
                if !product(a, b)?.equals(&product(b, a)?) {
                    comm_fail += 1;
                }
            }
        }

        let mut assoc_cases = 0;
        let mut assoc_fail = 0;
        for a in &states {
            for b in &states {
                for c in &states {
                    if a.degree + b.degree + c.degree > window {
                        continue;
                    }
                    assoc_cases += 1;
                    let left = product(&product(a, b)?, c)?;
                    let right = product(a, &product(b, c)?)?;
                    if !left.equals(&right) {
                        assoc_fail += 1;
                    }
                }
            }
        }

        let mut counit_cases = 0;
        let mut counit_fail = 0;
        for a in &states {
            counit_cases += 1;
            let delta = operate(ctx, &cotripod, &[0], &[0, 1], &unit_class(), a)?;
            let split = untensor(ctx, &delta, &space, &space)?;
            let mut left = TheoryState::zero(ctx, space.clone(), a.degree)?;
            let mut right = TheoryState::zero(ctx, space.clone(), a.degree)?;
            for (l, r) in &split {
                if l.degree == 0 && counit_scalar(ctx, &counit, l)? {
                    left.add_assign(r);
                }
                if r.degree == 0 && counit_scalar(ctx, &counit, r)? {
                    right.add_assign(l);
                }
            }
            if !left.equals(a) || !right.equals(a) {
                counit_fail += 1;
            }
        }

        let ok = comm_fail == 0 && assoc_fail == 0 && counit_fail == 0;
        all_pass &= ok;
        let _ = writeln!(
            out,
            "group {label}: commutativity {comm_cases} cases ({comm_fail} failed), \
             associativity {assoc_cases} cases ({assoc_fail} failed), \
             counit {counit_cases} cases ({counit_fail} failed)"
        );
    }
    let _ = writeln!(out, "{} frobenius", if all_pass { "PASS" } else { "FAIL" });
    Ok((out, all_pass))
}

/// Pants operation on the circle over Z/2: direct vs the wedge
/// factorization, plus commutativity and associativity.
pub fn reproduce_loop_product(ctx: &Context, window: usize) -> Result<(String, bool)> {
    let mut out = String::new();
    let z2 = FiniteGroup::cyclic(2);
    let circle_space = Arc::new(state_space(ctx, &models::circle(), &[0], &z2)?);
    let pair_space = Arc::new(state_space(ctx, &models::two_circles(), &[0, 1], &z2)?);
    let direct = FamilyCobordism::trivial(models::pants_direct());
    let first = FamilyCobordism::trivial(models::pants_r());
    let second = FamilyCobordism::trivial(models::pants_q());
    let _ = writeln!(out, "pants operation on the circle over Z/2, degrees <= {window}");

    let mut fact_cases = 0;
    let mut fact_fail = 0;
    for theta in all_states(ctx, &pair_space, window)? {
        fact_cases += 1;
        let direct_img = operate(ctx, &direct, &[0, 1], &[0], &unit_class(), &theta)?;
        let mid = operate(ctx, &first, &[0, 1], &[0], &unit_class(), &theta)?;
        let via = operate(ctx, &second, &[0], &[0], &unit_class(), &mid)?;
        if !direct_img.equals(&via) {
            fact_fail += 1;
        }
    }
    let _ = writeln!(out, "factorization: {fact_cases} cases ({fact_fail} failed)");

    let product = |a: &TheoryState, b: &TheoryState| -> Result<TheoryState> {
        let joint = tensor_state(ctx, a, b)?;
        operate(ctx, &direct, &[0, 1], &[0], &unit_class(), &joint)
    };
    let states = all_states(ctx, &circle_space, window)?;

    let mut comm_cases = 0;
    let mut comm_fail = 0;
    for a in &states {
        for b in &states {
            if a.degree + b.degree > window {
                continue;
            }
            comm_cases += 1;
            if !product(a, b)?.equals(&product(b, a)?) {
                comm_fail += 1;
            }
        }
    }
    let _ = writeln!(out, "commutativity: {comm_cases} cases ({comm_fail} failed)");

    let mut assoc_cases = 0;
    let mut assoc_fail = 0;
    for a in &states {
        for b in &states {
            for c in &states {
                if a.degree + b.degree + c.degree > window {
                    continue;
                }
                assoc_cases += 1;
                let left = product(&product(a, b)?, c)?;
                let right = product(a, &product(b, c)?)?;
                if !left.equals(&right) {
                    assoc_fail += 1;
                }
            }
        }
    }
    let _ = writeln!(out, "associativity: {assoc_cases} cases ({assoc_fail} failed)");

    let failures = fact_fail + comm_fail + assoc_fail;
    let cases = fact_cases + comm_cases + assoc_cases;
    let pass = verdict(&mut out, "loop_product", cases, failures);
    Ok((out, pass))
}
