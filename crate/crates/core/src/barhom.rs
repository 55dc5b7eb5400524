//! Mod-2 homology of classifying spaces via the normalized bar complex.
//!
//! For a finite group `G`, the degree-`d` chains are spanned by tuples
//! `[g₁|…|g_d]` of non-identity elements; the boundary drops the first or
//! last entry or merges adjacent ones (summands acquiring an identity
//! entry are degenerate and vanish).  Everything is over `F₂`: chains are
//! finite sets of tuples and all sums are symmetric differences.
//!
//! For *atoms* (groups registered as a single factor) homology is
//! computed by exact elimination: cycles are the kernel of the boundary
//! matrix, boundaries accumulate in an incremental echelon, class
//! representatives are chosen by a deterministic quotient scan, and each
//! representative gets a dual functional vanishing on all boundaries.
//!
//! For registered direct products, homology is never eliminated directly:
//! the canonical basis consists of shuffle (Eilenberg–Zilber) cross
//! products of factor representatives, indexed by compositions of the
//! degree, and coordinates are read off by the Alexander–Whitney
//! splitting paired with the factor functionals.  Since `AW ∘ EZ = id` on
//! normalized complexes, this pairing is exactly dual to that basis.

use std::collections::BTreeSet;
use std::io::{Read as _, Write as _};
use std::sync::Arc;

use crate::fingroup::{FiniteGroup, GroupHom, Subgroup};
use crate::gf2::{quotient_basis, Echelon, Gf2Matrix, Gf2Vector};
use crate::{Context, Error, Result};

/// Number of degree-`d` basis tuples for a group of the given order.
pub fn tuple_count(order: u32, degree: usize) -> u64 {
    (u64::from(order) - 1).pow(degree as u32)
}

/// Index of a tuple in the lexicographic enumeration (first entry most
/// significant; digit = entry − 1).
pub fn tuple_index(order: u32, tuple: &[u32]) -> u64 {
    let radix = u64::from(order) - 1;
    tuple.iter().fold(0u64, |acc, &g| acc * radix + (u64::from(g) - 1))
}

/// The tuple at a given index.
pub fn tuple_at(order: u32, degree: usize, index: u64) -> Vec<u32> {
    let radix = u64::from(order) - 1;
    let mut rest = index;
    let mut tuple = vec![0u32; degree];
    for slot in tuple.iter_mut().rev() {
        *slot = (rest % radix) as u32 + 1;
        rest /= radix;
    }
    debug_assert_eq!(rest, 0);
    tuple
}

/// A chain in the normalized bar complex of a group, over `F₂`.
#[derive(Clone, PartialEq, Eq)]
pub struct BarChain {
    group: FiniteGroup,
    degree: usize,
    terms: BTreeSet<Vec<u32>>,
}

impl BarChain {
    pub fn zero(group: FiniteGroup, degree: usize) -> BarChain {
        BarChain { group, degree, terms: BTreeSet::new() }
    }

    /// Build from explicit tuples; entries must be non-identity elements.
    pub fn from_tuples<I>(group: FiniteGroup, degree: usize, tuples: I) -> Result<BarChain>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut chain = BarChain::zero(group, degree);
        for t in tuples {
            if t.len() != degree {
                return Err(Error::ValidationFailed(format!(
                    "tuple length {} differs from degree {degree}",
                    t.len()
                )));
            }
            for &g in &t {
                if g == 0 || g >= chain.group.order() {
                    return Err(Error::ValidationFailed(format!(
                        "tuple entry {g} is not a non-identity element"
                    )));
                }
            }
            chain.toggle(t);
        }
        Ok(chain)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeSet<Vec<u32>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// XOR a single tuple in or out.
    pub fn toggle(&mut self, tuple: Vec<u32>) {
        debug_assert_eq!(tuple.len(), self.degree);
        if !self.terms.remove(&tuple) {
            self.terms.insert(tuple);
        }
    }

    pub fn xor_assign(&mut self, other: &BarChain) {
        assert_eq!(self.group.key(), other.group.key(), "chain group mismatch");
        assert_eq!(self.degree, other.degree, "chain degree mismatch");
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    /// The bar differential.
    #[must_use]
    pub fn boundary(&self) -> BarChain {
        let mut out = BarChain::zero(self.group.clone(), self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for t in &self.terms {
            out.toggle(t[1..].to_vec());
            for i in 0..self.degree - 1 {
                let merged = self.group.mul(t[i], t[i + 1]);
                if merged == 0 {
                    continue;
                }
                let mut face = Vec::with_capacity(self.degree - 1);
                face.extend_from_slice(&t[..i]);
                face.push(merged);
                face.extend_from_slice(&t[i + 2..]);
                out.toggle(face);
            }
            out.toggle(t[..self.degree - 1].to_vec());
        }
        out
    }

    /// The chain as a coordinate vector over the tuple basis.
    pub fn to_vector(&self) -> Gf2Vector {
        let n = tuple_count(self.group.order(), self.degree) as usize;
        let mut v = Gf2Vector::zeros(n);
        for t in &self.terms {
            v.toggle(tuple_index(self.group.order(), t) as usize);
        }
        v
    }

    pub fn from_vector(group: FiniteGroup, degree: usize, v: &Gf2Vector) -> BarChain {
        let mut chain = BarChain::zero(group, degree);
        for i in v.support() {
            let t = tuple_at(chain.group.order(), degree, i as u64);
            chain.terms.insert(t);
        }
        chain
    }
}

impl std::fmt::Debug for BarChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[")?;
            for (j, g) in t.iter().enumerate() {
                if j > 0 {
                    write!(f, "|")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Canonical homology data for one `(group, degree)` pair.
#[derive(Debug)]
pub enum HomologyData {
    /// An atom: representatives plus dual functionals over the tuple basis.
    Atom { n_cols: u64, reps: Vec<BTreeSet<Vec<u32>>>, functionals: Vec<Gf2Vector> },
    /// A registered product: the Künneth layout.  Blocks are compositions
    /// of the degree over the flat factors, in lexicographic order, with
    /// zero-dimensional blocks dropped; within a block, factor class
    /// indices vary lexicographically (first factor most significant).
    Product { compositions: Vec<Vec<usize>>, factor_dims: Vec<Vec<usize>>, dim: usize },
}

impl HomologyData {
    pub fn dim(&self) -> usize {
        match self {
            HomologyData::Atom { reps, .. } => reps.len(),
            HomologyData::Product { dim, .. } => *dim,
        }
    }
}

/// A homology class: coordinates in the canonical basis of its group and
/// degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClass {
    pub group: FiniteGroup,
    pub degree: usize,
    pub coords: Gf2Vector,
}

impl HomologyClass {
    pub fn zero(group: FiniteGroup, degree: usize, dim: usize) -> HomologyClass {
        HomologyClass { group, degree, coords: Gf2Vector::zeros(dim) }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add_assign(&mut self, other: &HomologyClass) {
        assert_eq!(self.group.key(), other.group.key(), "class group mismatch");
        assert_eq!(self.degree, other.degree, "class degree mismatch");
        self.coords.xor_assign(&other.coords);
    }
}

fn degree_cap_for(ctx: &Context, group: &FiniteGroup) -> usize {
    group
        .flat_factors()
        .iter()
        .map(|f| ctx.caps.degree_cap(f.order()))
        .min()
        .unwrap_or_else(|| ctx.caps.degree_cap(group.order()))
}

/// Homology of `BG` in one degree, memoized in the context (and on disk
/// for atoms when a cache directory is configured).
pub fn homology(ctx: &Context, group: &FiniteGroup, degree: usize) -> Result<Arc<HomologyData>> {
    let key = (group.key(), degree);
    if let Some(hit) = ctx.homology.read().expect("cache lock").get(&key) {
        return Ok(hit.clone());
    }
    let cap = degree_cap_for(ctx, group);
    if degree > cap {
        return Err(Error::DegreeCapExceeded { order: group.order(), degree, cap });
    }
    let data = if group.is_atom() {
        compute_atom(ctx, group, degree)?
    } else {
        compute_product(ctx, group, degree)?
    };
    let arc = Arc::new(data);
    ctx.homology.write().expect("cache lock").insert(key, arc.clone());
    Ok(arc)
}

pub fn homology_dim(ctx: &Context, group: &FiniteGroup, degree: usize) -> Result<usize> {
    Ok(homology(ctx, group, degree)?.dim())
}

fn compute_atom(ctx: &Context, group: &FiniteGroup, degree: usize) -> Result<HomologyData> {
    if let Some(dir) = &ctx.cache_dir {
        if let Some(data) = load_atom(dir, group, degree) {
            return Ok(data);
        }
    }
    let order = group.order();
    let n_cols = tuple_count(order, degree);
    // Cycles: kernel of the boundary matrix C_d → C_{d−1}.
    let n_rows = if degree == 0 { 0 } else { tuple_count(order, degree - 1) as usize };
    let mut del = Gf2Matrix::zeros(n_rows, n_cols as usize);
    if degree > 0 {
        for j in 0..n_cols {
            let gen = BarChain {
                group: group.clone(),
                degree,
                terms: BTreeSet::from([tuple_at(order, degree, j)]),
            };
            for face in gen.boundary().terms {
                let r = tuple_index(order, &face) as usize;
                let val = del.get(r, j as usize);
                del.set(r, j as usize, !val);
            }
        }
    }
    let cycles = del.kernel_basis();
    // Boundaries: images of all degree-(d+1) tuples.
    let mut bd = Echelon::new(n_cols as usize);
    for j in 0..tuple_count(order, degree + 1) {
        let gen = BarChain {
            group: group.clone(),
            degree: degree + 1,
            terms: BTreeSet::from([tuple_at(order, degree + 1, j)]),
        };
        bd.insert(gen.boundary().to_vector());
    }
    let q = quotient_basis(n_cols as usize, bd.rows(), &cycles);
    let reps: Vec<BTreeSet<Vec<u32>>> = q
        .reps()
        .iter()
        .map(|v| {
            v.support().iter().map(|&i| tuple_at(order, degree, i as u64)).collect::<BTreeSet<_>>()
        })
        .collect();
    // Dual functionals: φ_s vanishes on all boundaries and satisfies
    // φ_s(rep_u) = δ_{su}.
    let dim = reps.len();
    let mut constraints = Gf2Matrix::new(n_cols as usize);
    for row in bd.rows() {
        constraints.push_row(row.clone());
    }
    for rep in q.reps() {
        constraints.push_row(rep.clone());
    }
    let n_bd = bd.rank();
    let mut functionals = Vec::with_capacity(dim);
    for s in 0..dim {
        let mut rhs = Gf2Vector::zeros(n_bd + dim);
        rhs.set(n_bd + s, true);
        functionals.push(constraints.solve(&rhs)?);
    }
    let data = HomologyData::Atom { n_cols, reps, functionals };
    if let Some(dir) = &ctx.cache_dir {
        save_atom(dir, group, degree, &data);
    }
    Ok(data)
}

/// All `k`-part compositions of `n`, lexicographically ascending.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=n {
            prefix.push(first);
            rec(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

fn compute_product(ctx: &Context, group: &FiniteGroup, degree: usize) -> Result<HomologyData> {
    let factors = group.flat_factors();
    let mut kept_comps = Vec::new();
    let mut kept_dims = Vec::new();
    let mut dim = 0usize;
    for comp in compositions(degree, factors.len()) {
        let mut dims = Vec::with_capacity(factors.len());
        for (f, &d) in factors.iter().zip(&comp) {
            dims.push(homology(ctx, f, d)?.dim());
        }
        let block: usize = dims.iter().product();
        if block == 0 {
            continue;
        }
        dim += block;
        kept_comps.push(comp);
        kept_dims.push(dims);
    }
    Ok(HomologyData::Product { compositions: kept_comps, factor_dims: kept_dims, dim })
}

/// The homology class of a cycle, in the canonical basis of its group.
pub fn class_of(ctx: &Context, chain: &BarChain) -> Result<HomologyClass> {
    if !chain.boundary().is_zero() {
        return Err(Error::NotACycle(format!(
            "degree-{} chain with {} terms has nonzero boundary",
            chain.degree,
            chain.terms.len()
        )));
    }
    let data = homology(ctx, &chain.group, chain.degree)?;
    let coords = match &*data {
        HomologyData::Atom { functionals, .. } => {
            let v = chain.to_vector();
            let mut coords = Gf2Vector::zeros(functionals.len());
            for (s, phi) in functionals.iter().enumerate() {
                if phi.dot(&v) {
                    coords.set(s, true);
                }
            }
            coords
        }
        HomologyData::Product { compositions, factor_dims, dim } => {
            product_coords(ctx, chain, compositions, factor_dims, *dim)?
        }
    };
    Ok(HomologyClass { group: chain.group.clone(), degree: chain.degree, coords })
}

/// Accumulate one unit into every multi-index combination of the per-factor
/// hit lists (the tensor of the factor pairings).
fn toggle_hits(
    coords: &mut Gf2Vector,
    offset: usize,
    dims: &[usize],
    hits: &[Vec<usize>],
    level: usize,
    flat: usize,
) {
    if level == dims.len() {
        coords.toggle(offset + flat);
        return;
    }
    for &s in &hits[level] {
        toggle_hits(coords, offset, dims, hits, level + 1, flat * dims[level] + s);
    }
}

/// Alexander–Whitney pairing of a product chain with the Künneth basis.
fn product_coords(
    ctx: &Context,
    chain: &BarChain,
    compositions: &[Vec<usize>],
    factor_dims: &[Vec<usize>],
    dim: usize,
) -> Result<Gf2Vector> {
    let factors = chain.group.flat_factors().to_vec();
    let k = factors.len();
    let mut coords = Gf2Vector::zeros(dim);
    for term in &chain.terms {
        let digits: Vec<Vec<u32>> = term.iter().map(|&g| chain.group.decode(g)).collect();
        let mut offset = 0usize;
        for (comp, dims) in compositions.iter().zip(factor_dims) {
            let block: usize = dims.iter().product();
            // Cut the tuple into consecutive blocks of sizes comp[i] and
            // project the i-th block to factor i; a block containing an
            // identity digit is degenerate and kills the whole cut.
            let mut per_factor_hits: Vec<Vec<usize>> = Vec::with_capacity(k);
            let mut cut_alive = true;
            let mut pos = 0usize;
            for i in 0..k {
                let d_i = comp[i];
                let mut tuple = Vec::with_capacity(d_i);
                for p in pos..pos + d_i {
                    let digit = digits[p][i];
                    if digit == 0 {
                        cut_alive = false;
                        break;
                    }
                    tuple.push(digit);
                }
                pos += d_i;
                if !cut_alive {
                    break;
                }
                let data_i = homology(ctx, &factors[i], d_i)?;
                let HomologyData::Atom { functionals, .. } = &*data_i else {
                    return Err(Error::ValidationFailed("flat factor is not an atom".into()));
                };
                let idx = tuple_index(factors[i].order(), &tuple) as usize;
                let hits: Vec<usize> = (0..dims[i]).filter(|&s| functionals[s].get(idx)).collect();
                if hits.is_empty() {
                    cut_alive = false;
                    break;
                }
                per_factor_hits.push(hits);
            }
            if cut_alive {
                toggle_hits(&mut coords, offset, dims, &per_factor_hits, 0, 0);
            }
            offset += block;
        }
    }
    Ok(coords)
}

/// A canonical cycle representing the class.
pub fn representative(ctx: &Context, class: &HomologyClass) -> Result<BarChain> {
    let data = homology(ctx, &class.group, class.degree)?;
    match &*data {
        HomologyData::Atom { reps, .. } => {
            let mut chain = BarChain::zero(class.group.clone(), class.degree);
            for s in class.coords.support() {
                for t in &reps[s] {
                    chain.toggle(t.clone());
                }
            }
            Ok(chain)
        }
        HomologyData::Product { compositions, factor_dims, .. } => {
            let factors = class.group.flat_factors().to_vec();
            let mut chain = BarChain::zero(class.group.clone(), class.degree);
            for flat_idx in class.coords.support() {
                let (comp, multi) =
                    unflatten(compositions, factor_dims, flat_idx).expect("index in range");
                // Cross the factor representatives left to right.
                let mut acc_group = factors[0].clone();
                let mut acc = atom_rep(ctx, &factors[0], comp[0], multi[0])?;
                for i in 1..factors.len() {
                    let next_group = acc_group.direct_product(&factors[i], class.group.order())?;
                    let part = atom_rep(ctx, &factors[i], comp[i], multi[i])?;
                    acc = cross_product(&next_group, &acc, &part)?;
                    acc_group = next_group;
                }
                debug_assert_eq!(acc_group.key(), class.group.key());
                chain.xor_assign(&acc);
            }
            Ok(chain)
        }
    }
}

fn atom_rep(ctx: &Context, group: &FiniteGroup, degree: usize, s: usize) -> Result<BarChain> {
    let data = homology(ctx, group, degree)?;
    let HomologyData::Atom { reps, .. } = &*data else {
        return Err(Error::ValidationFailed("flat factor is not an atom".into()));
    };
    Ok(BarChain { group: group.clone(), degree, terms: reps[s].clone() })
}

/// Map a flat Künneth coordinate back to its composition and factor
/// class indices.
fn unflatten(
    compositions: &[Vec<usize>],
    factor_dims: &[Vec<usize>],
    mut idx: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    for (comp, dims) in compositions.iter().zip(factor_dims) {
        let block: usize = dims.iter().product();
        if idx < block {
            let mut multi = vec![0usize; dims.len()];
            for i in (0..dims.len()).rev() {
                multi[i] = idx % dims[i];
                idx /= dims[i];
            }
            return Some((comp.clone(), multi));
        }
        idx -= block;
    }
    None
}

/// Flat factors with the trivial group contributing no digits (matching
/// how product registration absorbs trivial factors).
fn effective_factors(group: &FiniteGroup) -> Vec<FiniteGroup> {
    if group.order() == 1 {
        Vec::new()
    } else {
        group.flat_factors().to_vec()
    }
}

/// Split a canonical basis coordinate of `H(B(left × right))` into its
/// Künneth bidegree and the basis coordinates of the two factors.
/// `product` must be registered with the effective flat factors of `left`
/// followed by those of `right`.  Returns
/// `(left_degree, left_coord, right_degree, right_coord)`.
pub fn kunneth_split(
    ctx: &Context,
    product: &FiniteGroup,
    left: &FiniteGroup,
    right: &FiniteGroup,
    degree: usize,
    coord: usize,
) -> Result<(usize, usize, usize, usize)> {
    let fl = effective_factors(left);
    let fr = effective_factors(right);
    let fp = effective_factors(product);
    if fl.len() + fr.len() != fp.len()
        || fl.iter().chain(&fr).zip(&fp).any(|(x, y)| x.key() != y.key())
    {
        return Err(Error::ValidationFailed(
            "product is not registered as the left factors followed by the right factors".into(),
        ));
    }
    if fl.is_empty() {
        return Ok((0, 0, degree, coord));
    }
    if fr.is_empty() {
        return Ok((degree, coord, 0, 0));
    }
    let data = homology(ctx, product, degree)?;
    let HomologyData::Product { compositions, factor_dims, .. } = &*data else {
        return Err(Error::ValidationFailed("two-sided product has atom homology data".into()));
    };
    let (comp, multi) = unflatten(compositions, factor_dims, coord)
        .ok_or_else(|| Error::ValidationFailed("coordinate out of range".into()))?;
    let dl: usize = comp[..fl.len()].iter().sum();
    let dr: usize = comp[fl.len()..].iter().sum();
    let sl = locate_flat(ctx, left, &comp[..fl.len()], &multi[..fl.len()], dl)?;
    let sr = locate_flat(ctx, right, &comp[fl.len()..], &multi[fl.len()..], dr)?;
    Ok((dl, sl, dr, sr))
}

/// Position of `(comp, multi)` in the canonical degree-`degree` basis of
/// `group` (whose effective factors `comp`/`multi` range over).
fn locate_flat(
    ctx: &Context,
    group: &FiniteGroup,
    comp: &[usize],
    multi: &[usize],
    degree: usize,
) -> Result<usize> {
    let data = homology(ctx, group, degree)?;
    match &*data {
        HomologyData::Atom { .. } => Ok(multi[0]),
        HomologyData::Product { compositions, factor_dims, .. } => {
            let mut offset = 0usize;
            for (c, dims) in compositions.iter().zip(factor_dims) {
                if c == comp {
                    let mut idx = 0usize;
                    for (&m, &d) in multi.iter().zip(dims) {
                        idx = idx * d + m;
                    }
                    return Ok(offset + idx);
                }
                offset += dims.iter().product::<usize>();
            }
            Err(Error::ValidationFailed("composition block missing from the factor layout".into()))
        }
    }
}

/// Eilenberg–Zilber shuffle product.  `product` must be registered with
/// exactly the flat factors of `a` followed by those of `b` (trivial
/// groups contribute no factors).
pub fn cross_product(product: &FiniteGroup, a: &BarChain, b: &BarChain) -> Result<BarChain> {
    let fa = effective_factors(&a.group);
    let fb = effective_factors(&b.group);
    let fp = effective_factors(product);
    let matches = fp.len() == fa.len() + fb.len()
        && fp.iter().zip(fa.iter().chain(fb.iter())).all(|(x, y)| x.key() == y.key());
    if !matches {
        return Err(Error::ValidationFailed(
            "product registration does not match the factors of the crossed chains".into(),
        ));
    }
    let embed_a = |g: u32| -> u32 {
        let mut digits = a.group.decode(g);
        digits.resize(fp.len(), 0);
        product.encode(&digits)
    };
    let embed_b = |g: u32| -> u32 {
        let mut digits = vec![0u32; fa.len()];
        digits.extend(b.group.decode(g));
        product.encode(&digits)
    };
    let (da, db) = (a.degree, b.degree);
    let total = da + db;
    let mut out = BarChain::zero(product.clone(), total);
    for ta in &a.terms {
        for tb in &b.terms {
            // Iterate all position masks with exactly `da` bits (the
            // (da,db)-shuffles); the smallest such mask is the solid
            // prefix.
            let mut mask: u64 = (1u64 << da) - 1;
            loop {
                if mask.count_ones() as usize == da {
                    let mut tuple = Vec::with_capacity(total);
                    let (mut ia, mut ib) = (0usize, 0usize);
                    for pos in 0..total {
                        if mask >> pos & 1 == 1 {
                            tuple.push(embed_a(ta[ia]));
                            ia += 1;
                        } else {
                            tuple.push(embed_b(tb[ib]));
                            ib += 1;
                        }
                    }
                    out.toggle(tuple);
                }
                mask += 1;
                if total == 64 || mask >= 1u64 << total {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Push a chain forward along a group homomorphism (entrywise; summands
/// acquiring an identity entry vanish).
pub fn induced_map(hom: &GroupHom, chain: &BarChain) -> BarChain {
    assert_eq!(hom.source().key(), chain.group.key(), "chain not over the source group");
    let mut out = BarChain::zero(hom.target().clone(), chain.degree);
    'terms: for t in &chain.terms {
        let mut image = Vec::with_capacity(t.len());
        for &g in t {
            let h = hom.apply(g);
            if h == 0 {
                continue 'terms;
            }
            image.push(h);
        }
        out.toggle(image);
    }
    out
}

/// Transfer along a subgroup inclusion with the canonical right
/// transversal (coset representatives in ascending element order).
pub fn transfer(sub: &Subgroup, chain: &BarChain) -> Result<BarChain> {
    let (reps, _) = sub.right_transversal();
    transfer_with(sub, &reps, chain)
}

/// Transfer along `H ≤ G` using an explicit right transversal `{xᵢ}` of
/// `H\G`: each `G`-tuple spawns one `H`-tuple per coset by the walking
/// rule `xᵢ·g = k·x_j`, recording `k` and moving to coset `j`; summands
/// with an identity entry vanish.
pub fn transfer_with(sub: &Subgroup, transversal: &[u32], chain: &BarChain) -> Result<BarChain> {
    let parent = sub.parent();
    assert_eq!(parent.key(), chain.group.key(), "chain not over the parent group");
    let order = parent.order() as usize;
    let index = order / sub.elements().len();
    if transversal.len() != index {
        return Err(Error::ValidationFailed(format!(
            "transversal has {} representatives, expected {index}",
            transversal.len()
        )));
    }
    // Validate that the representatives partition the group into right
    // cosets H·x, and record the coset of every element.
    let mut coset_of = vec![usize::MAX; order];
    for (j, &x) in transversal.iter().enumerate() {
        if x >= parent.order() {
            return Err(Error::ValidationFailed(format!("representative {x} out of range")));
        }
        for &h in sub.elements() {
            let g = parent.mul(h, x);
            if coset_of[g as usize] != usize::MAX {
                return Err(Error::ValidationFailed(
                    "transversal representatives share a coset".into(),
                ));
            }
            coset_of[g as usize] = j;
        }
    }
    let (sub_group, _) = sub.as_group();
    let mut out = BarChain::zero(sub_group, chain.degree);
    for t in &chain.terms {
        'cosets: for start in 0..index {
            let mut j = start;
            let mut tuple = Vec::with_capacity(t.len());
            for &g in t {
                let moved = parent.mul(transversal[j], g);
                let next = coset_of[moved as usize];
                let k = parent.mul(moved, parent.inv(transversal[next]));
                let pos = sub.position_of(k).expect("coset walk stays in the subgroup");
                if pos == 0 {
                    continue 'cosets;
                }
                tuple.push(pos);
                j = next;
            }
            out.toggle(tuple);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Disk cache for atom homology.

fn cache_path(dir: &std::path::Path, group: &FiniteGroup, degree: usize) -> std::path::PathBuf {
    let mut name = String::with_capacity(80);
    for b in group.key() {
        name.push_str(&format!("{b:02x}"));
    }
    dir.join(format!("{name}-d{degree}.hom"))
}

const CACHE_MAGIC: &[u8; 8] = b"HHOMv1\0\0";

struct Cursor<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let slice = self.buf.get(self.at..self.at + n)?;
        self.at += n;
        Some(slice)
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }

    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }

    fn done(&self) -> bool {
        self.at == self.buf.len()
    }
}

fn save_atom(dir: &std::path::Path, group: &FiniteGroup, degree: usize, data: &HomologyData) {
    let HomologyData::Atom { n_cols, reps, functionals } = data else { return };
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&group.order().to_le_bytes());
    buf.extend_from_slice(&(degree as u64).to_le_bytes());
    buf.extend_from_slice(&n_cols.to_le_bytes());
    buf.extend_from_slice(&(reps.len() as u64).to_le_bytes());
    for rep in reps {
        buf.extend_from_slice(&(rep.len() as u64).to_le_bytes());
        for t in rep {
            for &g in t {
                buf.extend_from_slice(&g.to_le_bytes());
            }
        }
    }
    for phi in functionals {
        let support = phi.support();
        buf.extend_from_slice(&(support.len() as u64).to_le_bytes());
        for i in support {
            buf.extend_from_slice(&(i as u64).to_le_bytes());
        }
    }
    let path = cache_path(dir, group, degree);
    let write = || -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut f = std::fs::File::create(&path)?;
        f.write_all(&buf)
    };
    // Caching is best-effort; failures only cost recomputation.
    let _ = write();
}

fn load_atom(dir: &std::path::Path, group: &FiniteGroup, degree: usize) -> Option<HomologyData> {
    let path = cache_path(dir, group, degree);
    let mut buf = Vec::new();
    std::fs::File::open(path).ok()?.read_to_end(&mut buf).ok()?;
    let mut cur = Cursor { buf: &buf, at: 0 };
    if cur.take(8)? != CACHE_MAGIC {
        return None;
    }
    let order = cur.u32()?;
    let stored_degree = cur.u64()?;
    let n_cols = cur.u64()?;
    if order != group.order()
        || stored_degree != degree as u64
        || n_cols != tuple_count(order, degree)
    {
        return None;
    }
    let dim = cur.u64()? as usize;
    let mut reps = Vec::with_capacity(dim);
    for _ in 0..dim {
        let n_terms = cur.u64()? as usize;
        let mut terms = BTreeSet::new();
        for _ in 0..n_terms {
            let mut t = Vec::with_capacity(degree);
            for _ in 0..degree {
                let g = cur.u32()?;
                if g == 0 || g >= order {
                    return None;
                }
                t.push(g);
            }
            terms.insert(t);
        }
        reps.push(terms);
    }
    let mut functionals = Vec::with_capacity(dim);
    for _ in 0..dim {
        let n_support = cur.u64()? as usize;
        let mut support = Vec::with_capacity(n_support);
        for _ in 0..n_support {
            let i = cur.u64()?;
            if i >= n_cols {
                return None;
            }
            support.push(i as usize);
        }
        functionals.push(Gf2Vector::from_support(n_cols as usize, &support));
    }
    if !cur.done() {
        return None;
    }
    Some(HomologyData::Atom { n_cols, reps, functionals })
}
