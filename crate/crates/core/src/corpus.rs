//! Named extremal graphs and seeded random generators.
//!
//! Random generators draw from `ChaCha8Rng` seeded with `seed_from_u64`, and
//! only ever sample `u32` ranges, so the same `(parameters, seed)` yields the
//! same graph on every platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("family {family} expects {expected}, got {got:?}")]
    BadParameters {
        family: &'static str,
        expected: &'static str,
        got: Vec<usize>,
    },
    #[error("cannot parse parameter '{0}'")]
    BadNumber(String),
    #[error("maxdeg_extremal needs n - k - 1 >= 2 (n = {n}, k = {k})")]
    DegenerateCycle { n: usize, k: usize },
    #[error("{extra} extra edges requested but only {available} non-edges exist")]
    TooManyEdges { extra: usize, available: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    VcExtremal,
    MaxdegExtremal,
    SeqJoinComplete,
    Star,
    DoubleStar,
    Path,
    Cycle,
    Complete,
    RandomTree,
    RandomCactus,
    RandomConnected,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::VcExtremal,
        Family::MaxdegExtremal,
        Family::SeqJoinComplete,
        Family::Star,
        Family::DoubleStar,
        Family::Path,
        Family::Cycle,
        Family::Complete,
        Family::RandomTree,
        Family::RandomCactus,
        Family::RandomConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::VcExtremal => "vc_extremal",
            Family::MaxdegExtremal => "maxdeg_extremal",
            Family::SeqJoinComplete => "seq_join_complete",
            Family::Star => "star",
            Family::DoubleStar => "double_star",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::RandomTree => "random_tree",
            Family::RandomCactus => "random_cactus",
            Family::RandomConnected => "random_connected",
        }
    }

    pub fn is_random(self) -> bool {
        matches!(
            self,
            Family::RandomTree | Family::RandomCactus | Family::RandomConnected
        )
    }

    fn expected(self) -> &'static str {
        match self {
            Family::VcExtremal => "alpha",
            Family::MaxdegExtremal => "n,k",
            Family::SeqJoinComplete => "a_1,...,a_{d+1} (at least two parts)",
            Family::Star => "n (total order, >= 2)",
            Family::DoubleStar => "a,b (leaves on each center)",
            Family::Path | Family::Complete | Family::RandomTree => "n",
            Family::Cycle => "n (>= 3)",
            Family::RandomCactus => "n (>= 3)",
            Family::RandomConnected => "n,extra_edges",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CorpusError::UnknownFamily(s.to_string()))
    }
}

/// A family plus its integer parameters, written `family:p1,p2,...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    pub family: Family,
    pub params: Vec<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, params: Vec<usize>) -> Result<FamilySpec, CorpusError> {
        let spec = FamilySpec { family, params };
        spec.validate()?;
        Ok(spec)
    }

    fn bad(&self) -> CorpusError {
        CorpusError::BadParameters {
            family: self.family.name(),
            expected: self.family.expected(),
            got: self.params.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let p = &self.params;
        let ok = match self.family {
            Family::VcExtremal => p.len() == 1 && p[0] >= 1,
            Family::MaxdegExtremal => p.len() == 2 && p[1] >= 1 && p[1] < p[0],
            Family::SeqJoinComplete => p.len() >= 2 && p.iter().all(|&a| a >= 1),
            Family::Star => p.len() == 1 && p[0] >= 2,
            Family::DoubleStar => p.len() == 2,
            Family::Path | Family::Complete | Family::RandomTree => p.len() == 1 && p[0] >= 1,
            Family::Cycle | Family::RandomCactus => p.len() == 1 && p[0] >= 3,
            Family::RandomConnected => p.len() == 2 && p[0] >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(self.bad())
        }
    }

    /// Builds the graph; `seed` only matters for the random families.
    pub fn generate(&self, seed: u64) -> Result<Graph, CorpusError> {
        self.validate()?;
        let p = &self.params;
        match self.family {
            Family::VcExtremal => gen_vc_extremal(p[0]),
            Family::MaxdegExtremal => gen_maxdeg_extremal(p[0], p[1]),
            Family::SeqJoinComplete => gen_seq_join_complete(p),
            Family::Star => Ok(Graph::star(p[0] - 1)),
            Family::DoubleStar => Ok(double_star(p[0], p[1])),
            Family::Path => Ok(Graph::path(p[0])),
            Family::Cycle => Ok(Graph::cycle(p[0])),
            Family::Complete => Ok(Graph::complete(p[0])),
            Family::RandomTree => Ok(random_tree(p[0], seed)),
            Family::RandomCactus => random_cactus(p[0], seed),
            Family::RandomConnected => random_connected(p[0], p[1], seed),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.family)?;
        for (k, x) in self.params.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let family = name.trim().parse()?;
        let params = parse_params(rest)?;
        FamilySpec::new(family, params)
    }
}

pub fn parse_params(s: &str) -> Result<Vec<usize>, CorpusError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CorpusError::BadNumber(t.to_string())))
        .collect()
}

/// The connected-vertex-cover extremal graphs: a spine `w_1..w_alpha` (ids
/// `0..alpha`) with pendant leaves. For alpha 1 to 4 the leaf counts are
/// 4; 3+3; 3+2+3; 3+2+2+2. Larger alpha continues the last pattern: three
/// leaves on `w_1`, two on every other spine vertex.
pub fn gen_vc_extremal(alpha: usize) -> Result<Graph, CorpusError> {
    let leaves: Vec<usize> = match alpha {
        0 => {
            return Err(CorpusError::BadParameters {
                family: "vc_extremal",
                expected: "alpha",
                got: vec![0],
            })
        }
        1 => vec![4],
        2 => vec![3, 3],
        3 => vec![3, 2, 3],
        _ => std::iter::once(3)
            .chain(std::iter::repeat_n(2, alpha - 1))
            .collect(),
    };
    let mut edges: Vec<(Vertex, Vertex)> = (1..alpha).map(|w| (w - 1, w)).collect();
    let mut next = alpha;
    for (w, &count) in leaves.iter().enumerate() {
        for _ in 0..count {
            edges.push((w, next));
            next += 1;
        }
    }
    Ok(Graph::build(next, &edges)?)
}

/// Hub `v = 0` with pendants `u_1..u_k` (ids `1..=k`) and a cycle
/// `u_k, w_1, ..., w_{n-k-1}` (ids `k+1..n`).
pub fn gen_maxdeg_extremal(n: usize, k: usize) -> Result<Graph, CorpusError> {
    if k == 0 || k >= n {
        return Err(CorpusError::BadParameters {
            family: "maxdeg_extremal",
            expected: "n,k",
            got: vec![n, k],
        });
    }
    let cycle_rest = n - k - 1;
    if cycle_rest < 2 {
        return Err(CorpusError::DegenerateCycle { n, k });
    }
    let mut edges: Vec<(Vertex, Vertex)> = (1..=k).map(|u| (0, u)).collect();
    edges.push((k, k + 1));
    edges.extend((k + 1..n - 1).map(|w| (w, w + 1)));
    edges.push((n - 1, k));
    Ok(Graph::build(n, &edges)?)
}

/// Sequential join of complete graphs `K_{a_1}, ..., K_{a_{d+1}}`.
pub fn gen_seq_join_complete(parts: &[usize]) -> Result<Graph, CorpusError> {
    if parts.len() < 2 || parts.contains(&0) {
        return Err(CorpusError::BadParameters {
            family: "seq_join_complete",
            expected: "a_1,...,a_{d+1} (at least two parts)",
            got: parts.to_vec(),
        });
    }
    let cliques: Vec<Graph> = parts.iter().map(|&a| Graph::complete(a)).collect();
    Ok(Graph::sequential_join(&cliques)?)
}

/// Adjacent centers 0 and 1 carrying `a` and `b` leaves respectively.
pub fn double_star(a: usize, b: usize) -> Graph {
    let mut edges = vec![(0, 1)];
    edges.extend((0..a).map(|k| (0, 2 + k)));
    edges.extend((0..b).map(|k| (1, 2 + a + k)));
    Graph::build(a + b + 2, &edges).expect("double star is simple")
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn below(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    rng.gen_range(0..bound as u32) as usize
}

fn prufer_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    match n {
        0 | 1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let seq: Vec<Vertex> = (0..n - 2).map(|_| below(rng, n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut leaves: BTreeSet<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = leaves
            .pop_first()
            .expect("Prüfer decoding always has a leaf");
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let a = leaves.pop_first().unwrap();
    let b = leaves.pop_first().unwrap();
    edges.push((a, b));
    edges
}

/// Uniform labelled tree via a random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = rng_for(seed);
    let edges = prufer_tree(n, &mut rng);
    Graph::build(n, &edges).expect("Prüfer decoding yields a simple tree")
}

/// Random tree plus chords. A chord `uv` is accepted only if the tree path
/// between `u` and `v` has length at least two and shares no edge with an
/// earlier cycle, which keeps every edge on at most one cycle. The target
/// number of cycles is drawn from the seed; fewer may be placed.
pub fn random_cactus(n: usize, seed: u64) -> Result<Graph, CorpusError> {
    if n < 3 {
        return Err(CorpusError::BadParameters {
            family: "random_cactus",
            expected: "n (>= 3)",
            got: vec![n],
        });
    }
    let mut rng = rng_for(seed);
    let mut edges = prufer_tree(n, &mut rng);
    let tree = Graph::build(n, &edges)?;
    let (parent, depth) = rooted(&tree);
    let target = 1 + below(&mut rng, (n - 1) / 2);
    // on_cycle[v]: tree edge (parent[v], v) already belongs to a cycle
    let mut on_cycle = vec![false; n];
    let mut placed = 0;
    for _ in 0..30 * n {
        if placed == target {
            break;
        }
        let u = below(&mut rng, n);
        let v = below(&mut rng, n);
        if u == v || tree.has_edge(u, v) {
            continue;
        }
        let path = tree_path_edges(&parent, &depth, u, v);
        if path.iter().any(|&x| on_cycle[x]) {
            continue;
        }
        for x in path {
            on_cycle[x] = true;
        }
        edges.push((u.min(v), u.max(v)));
        placed += 1;
    }
    Ok(Graph::build(n, &edges)?)
}

fn rooted(tree: &Graph) -> (Vec<Vertex>, Vec<usize>) {
    let n = tree.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0; n];
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in tree.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                depth[w] = depth[u] + 1;
                stack.push(w);
            }
        }
    }
    (parent, depth)
}

/// Tree edges on the `u`-`v` path, each named by its lower (child) endpoint.
fn tree_path_edges(
    parent: &[Vertex],
    depth: &[usize],
    mut u: Vertex,
    mut v: Vertex,
) -> Vec<Vertex> {
    let mut out = Vec::new();
    while u != v {
        if depth[u] >= depth[v] {
            out.push(u);
            u = parent[u];
        } else {
            out.push(v);
            v = parent[v];
        }
    }
    out
}

/// Random spanning tree plus `extra` distinct non-tree edges chosen uniformly.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Result<Graph, CorpusError> {
    let mut rng = rng_for(seed);
    let mut edges = prufer_tree(n, &mut rng);
    let tree = Graph::build(n, &edges)?;
    let mut candidates: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !tree.has_edge(u, v))
        .collect();
    if extra > candidates.len() {
        return Err(CorpusError::TooManyEdges {
            extra,
            available: candidates.len(),
        });
    }
    for k in 0..extra {
        let j = k + below(&mut rng, candidates.len() - k);
        candidates.swap(k, j);
    }
    edges.extend_from_slice(&candidates[..extra]);
    Ok(Graph::build(n, &edges)?)
}

/// One labelled instance of a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub spec: FamilySpec,
    pub seed: u64,
    pub graph: Graph,
}

impl Instance {
    pub fn from_spec(spec: FamilySpec, seed: u64) -> Result<Instance, CorpusError> {
        let graph = spec.generate(seed)?;
        let name = if spec.family.is_random() {
            format!("{spec}@{seed}")
        } else {
            spec.to_string()
        };
        Ok(Instance {
            name,
            spec,
            seed,
            graph,
        })
    }
}

/// Seed of the `k`-th random instance drawn from a base seed.
pub fn instance_seed(base: u64, k: u64) -> u64 {
    base.wrapping_mul(1_000_003).wrapping_add(k)
}

/// Every named family instance with order in `2..=max_n`, followed by
/// `per_order` random trees, cacti and connected graphs for each order.
pub fn standard_corpus(max_n: usize, per_order: u64, seed: u64) -> Vec<Instance> {
    let mut specs: Vec<(FamilySpec, u64)> = Vec::new();
    let mut push = |family: Family, params: Vec<usize>, seed: u64| {
        if let Ok(spec) = FamilySpec::new(family, params) {
            specs.push((spec, seed));
        }
    };
    for alpha in 1..=4 {
        push(Family::VcExtremal, vec![alpha], 0);
    }
    for n in 4..=max_n {
        for k in 1..n.saturating_sub(2) {
            push(Family::MaxdegExtremal, vec![n, k], 0);
        }
    }
    for parts in seq_join_shapes(max_n) {
        push(Family::SeqJoinComplete, parts, 0);
    }
    for n in 2..=max_n {
        push(Family::Star, vec![n], 0);
        push(Family::Path, vec![n], 0);
        push(Family::Complete, vec![n], 0);
        push(Family::Cycle, vec![n], 0);
    }
    for a in 1..max_n {
        for b in a..max_n {
            if a + b + 2 <= max_n {
                push(Family::DoubleStar, vec![a, b], 0);
            }
        }
    }
    let mut k = 0;
    for n in 2..=max_n {
        for _ in 0..per_order {
            push(Family::RandomTree, vec![n], instance_seed(seed, k));
            k += 1;
            push(Family::RandomCactus, vec![n], instance_seed(seed, k));
            k += 1;
            let max_extra = n * (n - 1) / 2 - (n - 1);
            let extra = (k as usize) % (max_extra + 1);
            push(
                Family::RandomConnected,
                vec![n, extra],
                instance_seed(seed, k),
            );
            k += 1;
        }
    }
    specs
        .into_iter()
        .map(|(spec, s)| Instance::from_spec(spec, s).expect("validated corpus spec"))
        .filter(|inst| (2..=max_n).contains(&inst.graph.n()))
        .collect()
}

fn seq_join_shapes(max_n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 2..=5usize {
        for mid in 1..=4usize {
            for end in 1..=2usize {
                let mut parts = vec![end];
                parts.extend(std::iter::repeat_n(mid, d - 1));
                parts.push(end);
                if parts.iter().sum::<usize>() <= max_n {
                    out.push(parts);
                }
            }
        }
    }
    out
}
