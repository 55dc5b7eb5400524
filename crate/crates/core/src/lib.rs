//! Exact mod-2 computation of homological h-graph field theory operations
//! for finite groups.
//!
//! The engine evaluates the operations `Φ(S/BΓ)` attached to a compact
//! h-graph cobordism `S : X → Y` parameterised over the classifying space of
//! a finite group `Γ`, with coefficient group a finite group `G`.  Every
//! value is an exact vector over `F₂`; there is no floating point anywhere.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf2`] — bit-packed linear algebra over `F₂` (echelon forms, kernels,
//!   quotient bases).
//! * [`fingroup`] — finite groups as multiplication tables, subgroups,
//!   transversals, homomorphisms and actions.
//! * [`hgraph`] — combinatorial graphs, graph maps, h-graph cobordisms,
//!   families of cobordisms, composition and disjoint union.
//! * [`freegpd`] — finite free groupoids `Π₁(X, P)` with deterministic
//!   bases, inclusion functors and induced symmetry actions.
//! * [`repvar`] — representation varieties `fun(Π₁(X,P), G)`, the twisted
//!   `Γ × G^P` action, orbit decompositions, fibres and rebasing.
//! * [`barhom`] — mod-2 group homology via the normalized bar complex:
//!   classes, cross products, induced maps and chain-level transfers.
//! * [`hhgft`] — the field-theory layer: state spaces, the push–pull
//!   evaluation of operations, operation matrices and axiom verification.
//! * [`models`] — stock graphs, cobordisms and families used by the test
//!   suites and the CLI.
//!
//! Determinism is a hard requirement: identical inputs produce identical
//! outputs, bit for bit.  All enumeration orders (group elements, basis
//! arrows, functors, orbits, bar tuples) are fixed and documented next to
//! the code that produces them.

#![forbid(unsafe_code)]

pub mod barhom;
pub mod fingroup;
pub mod freegpd;
pub mod gf2;
pub mod hgraph;
pub mod hhgft;
pub mod models;
pub mod repvar;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

/// Unified error type for the engine.
///
/// Errors come in three flavours, reported by [`Error::class`]: invalid
/// input data, a configured resource cap being exceeded, and internal
/// assertion failures (conditions the underlying theory guarantees; hitting
/// one means a bug, never bad user data).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A multiplication table failed the group laws.
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    /// An element set is not closed under multiplication/inverses.
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    /// A claimed homomorphism fails `f(a·b) = f(a)·f(b)`.
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    /// Malformed graph, graph map, or cobordism data.
    #[error("invalid graph data: {0}")]
    InvalidGraph(String),
    /// A basepoint set misses a connected component.
    #[error("basepoint coverage: {0}")]
    BasepointCoverage(String),
    /// Word endpoints do not match under composition.
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    /// Cobordism validation failed (positivity or embedding mode).
    #[error("cobordism validation failed: {0}")]
    ValidationFailed(String),
    /// Composition requested along interface maps that are not subgraph
    /// embeddings on both sides.
    #[error("unsupported gluing: {0}")]
    UnsupportedGluing(String),
    /// Functor enumeration would exceed the configured cap.
    #[error("enumeration cap exceeded: {0} functors (cap {1})")]
    EnumerationCapExceeded(u64, u64),
    /// A bar-complex computation was requested beyond the degree cap.
    #[error("degree cap exceeded for group of order {order}: degree {degree} > cap {cap}")]
    DegreeCapExceeded { order: u32, degree: usize, cap: usize },
    /// A direct product would exceed the maximum group order.
    #[error("group order cap exceeded: {0} > {1}")]
    GroupOrderCapExceeded(u64, u32),
    /// Internal assertion: a claimed group action fails the action laws.
    #[error("internal: action law violation: {0}")]
    ActionLawViolation(String),
    /// Internal assertion: the stabilizer restriction map of a rebase is
    /// not bijective.
    #[error("internal: rebase stabilizer map not bijective: {0}")]
    RebaseNotBijective(String),
    /// Internal assertion: a chain expected to be a cycle has nonzero
    /// boundary.
    #[error("internal: chain is not a cycle: {0}")]
    NotACycle(String),
    /// Internal assertion: a linear system that must be solvable was not.
    #[error("internal: no solution to a guaranteed-solvable system: {0}")]
    NoSolution(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input data is invalid (exit code 2).
    Validation,
    /// A configured cap was exceeded (exit code 3).
    Cap,
    /// An internal invariant failed (exit code 4).
    Internal,
}

impl Error {
    /// Classify the error for exit-code mapping.
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidTable(_) | NotASubgroup(_) | NotAHomomorphism(_) | InvalidGraph(_)
            | BasepointCoverage(_) | EndpointMismatch(_) | ValidationFailed(_)
            | UnsupportedGluing(_) => ErrorClass::Validation,
            EnumerationCapExceeded(..) | DegreeCapExceeded { .. }
            | GroupOrderCapExceeded(..) => ErrorClass::Cap,
            ActionLawViolation(_) | RebaseNotBijective(_) | NotACycle(_) | NoSolution(_) => {
                ErrorClass::Internal
            }
        }
    }
}

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Resource caps.  Defaults are sized so that every acceptance suite runs
/// comfortably; each can be raised for larger experiments.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum number of groupoid functors enumerated per representation
    /// variety.
    pub functor_enum: u64,
    /// Hard override for the bar-complex degree cap; `None` selects the
    /// order-dependent default (see [`Caps::degree_cap`]).
    pub degree_override: Option<usize>,
    /// Budget for the number of bar tuples enumerated in a single boundary
    /// pass; the order-dependent degree default is derived from it.
    pub bar_tuple_budget: u64,
    /// Maximum order of any constructed group (products grow fast).
    pub max_group_order: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            functor_enum: 1_000_000,
            degree_override: None,
            bar_tuple_budget: 2_000_000,
            max_group_order: 5_000,
        }
    }
}

impl Caps {
    /// Degree cap for bar-complex homology of an atomic group of the given
    /// order: 8 for orders ≤ 4 and 5 for orders ≤ 8.  Larger atoms fall
    /// back to the largest degree whose boundary pass fits the tuple
    /// budget.  Product groups are capped factor-wise, not by this rule.
    pub fn degree_cap(&self, order: u32) -> usize {
        if let Some(d) = self.degree_override {
            return d;
        }
        if order <= 4 {
            return 8;
        }
        if order <= 8 {
            return 5;
        }
        // Largest d with (order-1)^(d+1) within the tuple budget.
        let base = (order - 1) as u64;
        let mut d = 0usize;
        let mut pow = base;
        while pow.saturating_mul(base) <= self.bar_tuple_budget {
            pow *= base;
            d += 1;
        }
        d
    }
}

/// Shared computation context: caps plus the homology cache.
///
/// Homology bases are expensive and reused constantly, so they are cached
/// per `(group, degree)`.  The cache key is a content hash of the group's
/// multiplication table and product registration, making the cache safe
/// across structurally equal groups built independently.  With
/// `cache_dir` set, atomic-group bases are additionally persisted to disk.
pub struct Context {
    pub caps: Caps,
    pub cache_dir: Option<PathBuf>,
    pub(crate) homology: RwLock<BTreeMap<([u8; 32], usize), Arc<barhom::HomologyData>>>,
}

impl Context {
    pub fn new() -> Self {
        Context { caps: Caps::default(), cache_dir: None, homology: RwLock::new(BTreeMap::new()) }
    }

    pub fn with_caps(caps: Caps) -> Self {
        Context { caps, cache_dir: None, homology: RwLock::new(BTreeMap::new()) }
    }
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}
