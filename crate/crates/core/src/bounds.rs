//! Bounds and claimed values for t_i(G), and the audit that checks them
//! against exact ground truth.
//!
//! Entries come in two tiers. Sound entries follow from direct counting and
//! an audit treats a violation as a bug. Claimed entries (closed forms,
//! diameter lower bounds, structural equalities) are compared against ground
//! truth and disagreements are reported as [`Discrepancy`] records.
//!
//! The near-dominating structure inequality (vertices of degree `n - 2`)
//! reads `2 <= d(x) <= n - 1 - min({|V_1|, ..., |V_i|} \ V_min) - V_min`,
//! which subtracts a set from a number; only its value claim `t_i = i + 2`
//! is audited.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Instance;
use crate::exact::{self, ExactError, SolveOptions, SolveResult, ORACLE_MAX_N};
use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::palette::{psi_bound, verify, Coloring, PaletteError};
use crate::treecactus::{self, ConstructError};

/// Largest order for which the report computes the connected vertex cover.
pub const COVER_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("vertex cover size must be at least 1")]
    ZeroCover,
    #[error("max-degree bound needs 1 <= i <= delta <= n - 1 (n = {n}, delta = {delta}, i = {i})")]
    MaxDegreePrecondition { n: usize, delta: usize, i: usize },
    #[error("diameter bound needs d >= 1 and i >= 3 (d = {d}, i = {i})")]
    DiameterPrecondition { d: usize, i: usize },
    #[error("no vertex of degree n - 1")]
    NoDominatingVertex,
    #[error("coloring must be N_{i}-valid and use exactly {} colors", i + 1)]
    StructurePrecondition { i: usize },
    #[error("sound bound '{claim}' violated: bound {bound}, ground truth {truth}")]
    SoundBoundViolated {
        claim: String,
        bound: usize,
        truth: usize,
    },
    #[error("neighborhood color bound violated on S = {set}: |psi(S)| = {lhs} > {rhs}")]
    PsiViolated {
        set: VertexSet,
        lhs: usize,
        rhs: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Palette(#[from] PaletteError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Upper bound on t_3 from the minimum connected vertex cover size.
pub fn vc_bound(alpha: usize) -> Result<usize, BoundsError> {
    match alpha {
        0 => Err(BoundsError::ZeroCover),
        1 => Ok(1 + 3 * alpha),
        2 => Ok(3 * alpha),
        _ => Ok(2 * alpha + 2),
    }
}

pub fn maxdeg_bound(n: usize, delta: usize, i: usize) -> Result<usize, BoundsError> {
    if i < 1 || i > delta || delta + 1 > n {
        return Err(BoundsError::MaxDegreePrecondition { n, delta, i });
    }
    Ok(n - delta + i)
}

/// Claimed value `i + 1` for graphs with a vertex of degree `n - 1`;
/// `None` when `n < i + 2`.
pub fn deg_n1_value(n: usize, i: usize) -> Option<usize> {
    (n >= i + 2).then_some(i + 1)
}

/// Claimed value `i + 2` for graphs with maximum degree `n - 2`;
/// `None` when `n < i + 2`.
pub fn deg_n2_value(n: usize, i: usize) -> Option<usize> {
    (n >= i + 2).then_some(i + 2)
}

/// Claimed lower bound from the diameter `d`, piecewise in `d mod 3`.
pub fn diam_lower(d: usize, i: usize) -> Result<usize, BoundsError> {
    if d < 1 || i < 3 {
        return Err(BoundsError::DiameterPrecondition { d, i });
    }
    let blocks = d.div_ceil(3);
    Ok(match d % 3 {
        1 => blocks * i - (i - 1).div_ceil(2),
        2 => blocks * i,
        _ => blocks * i + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureDiagnosis {
    /// `G[N(v)]` is disconnected.
    NeighborhoodDisconnected { hub: Vertex },
    /// `G[N(v)]` is connected; the color classes of `N(v)` have the given
    /// sizes and every `x` in `N(v)` should satisfy `d(x) <= limit`.
    DegreeInequality {
        hub: Vertex,
        class_sizes: Vec<usize>,
        limit: usize,
        violators: Vec<Vertex>,
    },
}

/// Structural check for a graph with a dominating vertex and an N_i coloring
/// that uses `i + 1` colors, evaluated at the smallest dominating vertex.
pub fn dominating_structure(
    g: &Graph,
    f: &Coloring,
    i: usize,
) -> Result<StructureDiagnosis, BoundsError> {
    g.require_connected()?;
    let n = g.n();
    let hub = (0..n)
        .find(|&v| g.degree(v) + 1 == n)
        .ok_or(BoundsError::NoDominatingVertex)?;
    if !verify(g, f, i)?.valid || f.color_count() != i + 1 {
        return Err(BoundsError::StructurePrecondition { i });
    }
    let nbhd = VertexSet::new(g.neighbors(hub).to_vec());
    if g.induced_components(&nbhd)?.len() > 1 {
        return Ok(StructureDiagnosis::NeighborhoodDisconnected { hub });
    }
    let mut classes: BTreeMap<u32, usize> = BTreeMap::new();
    for v in nbhd.iter() {
        *classes.entry(f.color(v)).or_default() += 1;
    }
    let class_sizes: Vec<usize> = classes.into_values().collect();
    let smallest = class_sizes.iter().copied().min().unwrap_or(0);
    let limit = n - 1 - smallest;
    let violators = nbhd.iter().filter(|&x| g.degree(x) > limit).collect();
    Ok(StructureDiagnosis::DegreeInequality {
        hub,
        class_sizes,
        limit,
        violators,
    })
}

/// If `g` is a sequential join of at least three complete graphs, the clique
/// sizes in path order (starting from the end holding the smallest id).
pub fn seq_join_parts(g: &Graph) -> Option<Vec<usize>> {
    if g.n() < 3 || !g.is_connected() {
        return None;
    }
    // true-twin classes: vertices with equal closed neighborhoods
    let mut by_closed: BTreeMap<Vec<Vertex>, Vec<Vertex>> = BTreeMap::new();
    for v in 0..g.n() {
        let mut closed = g.neighbors(v).to_vec();
        closed.push(v);
        closed.sort_unstable();
        by_closed.entry(closed).or_default().push(v);
    }
    let mut classes: Vec<Vec<Vertex>> = by_closed.into_values().collect();
    classes.sort();
    let k = classes.len();
    if k < 3 {
        return None;
    }
    let mut class_of = vec![0; g.n()];
    for (c, members) in classes.iter().enumerate() {
        for &v in members {
            class_of[v] = c;
        }
    }
    let mut quotient: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (u, v) in g.edges() {
        let (a, b) = (class_of[u], class_of[v]);
        if a != b && !quotient[a].contains(&b) {
            quotient[a].push(b);
            quotient[b].push(a);
        }
    }
    if quotient.iter().any(|q| q.len() > 2) {
        return None;
    }
    let start = (0..k).find(|&c| quotient[c].len() == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = quotient[cur].iter().find(|&&x| x != prev) {
        prev = cur;
        cur = next;
        order.push(cur);
        if order.len() > k {
            return None;
        }
    }
    (order.len() == k).then(|| order.into_iter().map(|c| classes[c].len()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Upper,
    Lower,
    ExactClaim,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
            BoundKind::ExactClaim => "exact-claim",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub kind: BoundKind,
    pub value: usize,
    pub applicable: bool,
    /// Follows from direct counting; never contradicted by ground truth.
    pub sound: bool,
    /// The statement the entry evaluates.
    pub anchor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub i: usize,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn applicable(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.applicable)
    }
}

pub mod claims {
    pub const TRIVIAL_UPPER: &str = "trivial-upper";
    pub const TRIVIAL_LOWER: &str = "trivial-lower";
    pub const MAX_DEGREE_UPPER: &str = "max-degree-upper";
    pub const VERTEX_COVER_UPPER: &str = "vertex-cover-upper";
    pub const SMALL_DEGREE_VALUE: &str = "small-degree-value";
    pub const DOMINATING_VALUE: &str = "dominating-vertex-value";
    pub const NEAR_DOMINATING_VALUE: &str = "near-dominating-value";
    pub const DIAMETER_LOWER: &str = "diameter-lower";
    pub const SEQ_JOIN_VALUE: &str = "seq-join-diameter-value";
    pub const TREE_T2_VALUE: &str = "tree-t2-value";
    pub const TREE_T3_VALUE: &str = "tree-t3-value";
    pub const TREE_TI_VALUE: &str = "tree-ti-value";
    pub const CACTUS_T3_VALUE: &str = "cactus-t3-value";
    pub const LAYERED_LOWER: &str = "layered-lower";
}

struct Builder {
    entries: Vec<BoundEntry>,
}

impl Builder {
    fn push(
        &mut self,
        name: &str,
        kind: BoundKind,
        sound: bool,
        value: Option<usize>,
        anchor: &str,
    ) {
        self.entries.push(BoundEntry {
            name: name.to_string(),
            kind,
            value: value.unwrap_or(0),
            applicable: value.is_some(),
            sound,
            anchor: anchor.to_string(),
        });
    }
}

/// Every bound and claimed value, in a fixed order, with applicability flags.
pub fn report(g: &Graph, i: usize) -> Result<BoundReport, BoundsError> {
    use claims::*;
    use BoundKind::*;

    g.require_connected()?;
    let n = g.n();
    let delta = g.max_degree()?;
    let d = g.diameter()?;
    let mut b = Builder {
        entries: Vec::new(),
    };

    b.push(TRIVIAL_UPPER, Upper, true, Some(n), "t_i <= n");
    b.push(TRIVIAL_LOWER, Lower, true, Some(1), "t_i >= 1");
    b.push(
        MAX_DEGREE_UPPER,
        Upper,
        true,
        (n >= 2 && delta >= 1).then(|| n.min(n - delta + i)),
        "t_i <= n - Delta + i (connected G, clipped to n)",
    );
    let alpha = (i == 3 && (2..=COVER_MAX_N).contains(&n))
        .then(|| exact::min_connected_vertex_cover(g))
        .transpose()?
        .map(|(size, _)| size);
    b.push(
        VERTEX_COVER_UPPER,
        Upper,
        true,
        alpha.map(vc_bound).transpose()?,
        "t_3 <= 1+3a (a=1), 3a (a=2), 2a+2 (a>=3); a = min connected vertex cover",
    );
    b.push(
        SMALL_DEGREE_VALUE,
        ExactClaim,
        true,
        (i >= delta).then_some(n),
        "t_i = n when i >= Delta",
    );
    b.push(
        DOMINATING_VALUE,
        ExactClaim,
        false,
        (n >= 2 && delta + 1 == n)
            .then(|| deg_n1_value(n, i))
            .flatten(),
        "t_i = i + 1 when Delta = n - 1 and n >= i + 2",
    );
    b.push(
        NEAR_DOMINATING_VALUE,
        ExactClaim,
        false,
        (n >= 2 && delta + 2 == n)
            .then(|| deg_n2_value(n, i))
            .flatten(),
        "t_i = i + 2 when Delta = n - 2 and n >= i + 2",
    );
    let diameter_applies = d >= 1 && i >= 3 && n >= i;
    b.push(
        DIAMETER_LOWER,
        Lower,
        false,
        diameter_applies.then(|| diam_lower(d, i)).transpose()?,
        "t_i >= ceil(d/3) i - ceil((i-1)/2) | ceil(d/3) i | ceil(d/3) i + 1 for d mod 3 = 1 | 2 | 0",
    );
    let seq_join = seq_join_parts(g).filter(|parts| {
        let interior = &parts[1..parts.len() - 1];
        diameter_applies && interior.iter().all(|&a| a >= i)
    });
    b.push(
        SEQ_JOIN_VALUE,
        ExactClaim,
        false,
        seq_join.map(|_| diam_lower(d, i)).transpose()?,
        "diameter lower bound attained by sequential joins of cliques with interior parts >= i",
    );
    let tree = g.is_tree() && n >= 2;
    b.push(
        TREE_T2_VALUE,
        ExactClaim,
        false,
        (tree && i == 2)
            .then(|| treecactus::tree_t2_closed(g))
            .transpose()?,
        "t_2(T) = n - l + 2",
    );
    b.push(
        TREE_T3_VALUE,
        ExactClaim,
        false,
        (tree && i == 3)
            .then(|| treecactus::tree_t3_closed(g))
            .transpose()?,
        "t_3(T) = 2n - 2l + 2 - n_2",
    );
    b.push(
        TREE_TI_VALUE,
        ExactClaim,
        false,
        (tree && i >= 3)
            .then(|| treecactus::tree_ti_closed(g, i))
            .transpose()?,
        "t_i(T) = 2n - 2l + 2 - (n_2 + ... + n_{i-1})",
    );
    b.push(
        CACTUS_T3_VALUE,
        ExactClaim,
        false,
        (i == 3 && n >= 3 && g.is_cactus())
            .then(|| treecactus::cactus_t3_closed(g))
            .transpose()?,
        "t_3(G) = 2n - 2l - 2r + 2 - n_2 for cacti; r = cycles through a degree-2 vertex",
    );
    b.push(
        LAYERED_LOWER,
        Lower,
        true,
        (i >= 3)
            .then(|| treecactus::layered_coloring(g, i).map(|(_, c)| c))
            .transpose()?,
        "colors used by the BFS-layer construction from a peripheral vertex",
    );
    Ok(BoundReport {
        n,
        i,
        entries: b.entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ClaimedEqualityFails,
    ClaimedLowerBoundFails,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ClaimedEqualityFails => "claimed-equality-fails",
            Direction::ClaimedLowerBoundFails => "claimed-lower-bound-fails",
        })
    }
}

/// A claimed value that disagrees with ground truth on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub claim: String,
    pub graph: String,
    pub n: usize,
    pub i: usize,
    pub claimed: usize,
    pub oracle: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditOutcome {
    Conclusive {
        value: usize,
        discrepancies: Vec<Discrepancy>,
    },
    /// The solver ran out of budget; nothing is reported.
    Inconclusive { best_found: usize, nodes: u64 },
}

impl AuditOutcome {
    pub fn discrepancies(&self) -> &[Discrepancy] {
        match self {
            AuditOutcome::Conclusive { discrepancies, .. } => discrepancies,
            AuditOutcome::Inconclusive { .. } => &[],
        }
    }
}

/// Exact t_i: the partition oracle up to its cap, the solver beyond it.
pub fn ground_truth(g: &Graph, i: usize, opts: SolveOptions) -> Result<SolveResult, BoundsError> {
    if g.n() <= ORACLE_MAX_N {
        Ok(exact::oracle_ti(g, i)?)
    } else {
        Ok(exact::solve_ti_with(g, i, opts)?)
    }
}

/// Subsets used for the ψ checks: all non-empty subsets up to 12 vertices,
/// otherwise 512 seeded random ones.
fn psi_subsets(n: usize) -> Vec<VertexSet> {
    if n <= 12 {
        return (1u32..(1 << n))
            .map(|mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let all: Vec<Vertex> = (0..n).collect();
    (0..512)
        .map(|k| {
            let size = 1 + k % n;
            all.choose_multiple(&mut rng, size).copied().collect()
        })
        .collect()
}

pub fn audit(g: &Graph, i: usize, label: &str) -> Result<AuditOutcome, BoundsError> {
    audit_with(g, i, label, SolveOptions::default())
}

/// Compares every applicable entry of [`report`] with ground truth.
///
/// Sound entries and the ψ inequality (for `i >= 3`, on the ground-truth
/// witness) must hold; a violation is returned as an error. Claimed entries
/// that disagree become discrepancies.
pub fn audit_with(
    g: &Graph,
    i: usize,
    label: &str,
    opts: SolveOptions,
) -> Result<AuditOutcome, BoundsError> {
    let rep = report(g, i)?;
    let truth = ground_truth(g, i, opts)?;
    if !truth.complete {
        return Ok(AuditOutcome::Inconclusive {
            best_found: truth.value,
            nodes: truth.nodes,
        });
    }
    let value = truth.value;

    for e in rep.applicable().filter(|e| e.sound) {
        let violated = match e.kind {
            BoundKind::Upper => value > e.value,
            BoundKind::Lower => value < e.value,
            BoundKind::ExactClaim => value != e.value,
        };
        if violated {
            return Err(BoundsError::SoundBoundViolated {
                claim: e.name.clone(),
                bound: e.value,
                truth: value,
            });
        }
    }
    if i >= 3 {
        for s in psi_subsets(g.n()) {
            let b = psi_bound(g, &truth.witness, i, &s)?;
            if !b.holds {
                return Err(BoundsError::PsiViolated {
                    set: s,
                    lhs: b.lhs,
                    rhs: b.rhs,
                });
            }
        }
    }

    let mut discrepancies = Vec::new();
    for e in rep.applicable().filter(|e| !e.sound) {
        let direction = match e.kind {
            BoundKind::ExactClaim if e.value != value => Direction::ClaimedEqualityFails,
            BoundKind::Lower if e.value > value => Direction::ClaimedLowerBoundFails,
            BoundKind::Upper if e.value < value => Direction::ClaimedEqualityFails,
            _ => continue,
        };
        discrepancies.push(Discrepancy {
            claim: e.name.clone(),
            graph: label.to_string(),
            n: g.n(),
            i,
            claimed: e.value,
            oracle: value,
            direction,
        });
    }
    Ok(AuditOutcome::Conclusive {
        value,
        discrepancies,
    })
}

/// Audit results over many instances, in instance-major, `i`-minor order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusAudit {
    pub conclusive: usize,
    /// `(instance name, i)` pairs the solver could not finish.
    pub inconclusive: Vec<(String, usize)>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Audits every `(instance, i)` pair. With `parallel` the pairs run on the
/// rayon pool; results are still collected in pair order.
pub fn audit_instances(
    instances: &[Instance],
    is: &[usize],
    opts: SolveOptions,
    parallel: bool,
) -> Result<CorpusAudit, BoundsError> {
    let jobs: Vec<(&Instance, usize)> = instances
        .iter()
        .flat_map(|inst| is.iter().map(move |&i| (inst, i)))
        .collect();
    let run = |&(inst, i): &(&Instance, usize)| {
        let inner = SolveOptions {
            parallel: opts.parallel && !parallel,
            ..opts
        };
        audit_with(&inst.graph, i, &inst.name, inner)
    };
    let outcomes: Vec<Result<AuditOutcome, BoundsError>> = if parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    let mut out = CorpusAudit::default();
    for ((inst, i), outcome) in jobs.iter().zip(outcomes) {
        match outcome? {
            AuditOutcome::Conclusive { discrepancies, .. } => {
                out.conclusive += 1;
                out.discrepancies.extend(discrepancies);
            }
            AuditOutcome::Inconclusive { .. } => out.inconclusive.push((inst.name.clone(), *i)),
        }
    }
    Ok(out)
}
