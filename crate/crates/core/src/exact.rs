//! Ground truth for t_i(G): an exhaustive partition oracle, a branch-and-bound
//! solver, and exact minimum connected vertex cover.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::palette::{Color, Coloring};

/// Largest order the partition oracle accepts (Bell(11) = 678,570).
pub const ORACLE_MAX_N: usize = 11;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("oracle cap exceeded (n = {0} > {ORACLE_MAX_N}), use solve_ti")]
    OracleCapExceeded(usize),
    #[error("palette bound i must be at least 1")]
    ZeroBound,
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
    #[error("connected vertex cover needs at least two vertices")]
    TooSmall,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub value: usize,
    pub witness: Coloring,
    pub nodes: u64,
    /// `value` is proven optimal.
    pub complete: bool,
}

fn check_args(g: &Graph, i: usize) -> Result<(), ExactError> {
    if i == 0 {
        return Err(ExactError::ZeroBound);
    }
    if g.n() == 0 {
        return Err(ExactError::EmptyGraph);
    }
    Ok(())
}

/// Enumerates every set partition of `V(G)` as a restricted-growth string and
/// keeps the lexicographically first partition with the most blocks among
/// those that are N_i-valid.
pub fn oracle_ti(g: &Graph, i: usize) -> Result<SolveResult, ExactError> {
    check_args(g, i)?;
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(ExactError::OracleCapExceeded(n));
    }
    let mut rgs = vec![0u8; n];
    let mut best = (0usize, Vec::new());
    let mut count = 0u64;
    enumerate_rgs(&mut rgs, 1, 0, &mut |labels, blocks| {
        count += 1;
        if blocks > best.0 && partition_is_valid(g, labels, i) {
            best = (blocks, labels.to_vec());
        }
    });
    let witness = Coloring::new(best.1.iter().map(|&c| c as Color + 1).collect())
        .expect("restricted-growth labels are shifted to positive colors");
    Ok(SolveResult {
        value: best.0,
        witness,
        nodes: count,
        complete: true,
    })
}

fn enumerate_rgs(rgs: &mut [u8], pos: usize, max_label: u8, visit: &mut impl FnMut(&[u8], usize)) {
    if pos == rgs.len() {
        visit(rgs, max_label as usize + 1);
        return;
    }
    for label in 0..=max_label + 1 {
        rgs[pos] = label;
        enumerate_rgs(rgs, pos + 1, max_label.max(label), visit);
    }
}

fn partition_is_valid(g: &Graph, labels: &[u8], i: usize) -> bool {
    (0..g.n()).all(|v| {
        let mask = g
            .neighbors(v)
            .iter()
            .fold(0u32, |m, &x| m | (1 << labels[x]));
        mask.count_ones() as usize <= i
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub node_budget: u64,
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            parallel: false,
        }
    }
}

/// Sequential branch-and-bound; see [`solve_ti_with`].
pub fn solve_ti(g: &Graph, i: usize, node_budget: u64) -> Result<SolveResult, ExactError> {
    solve_ti_with(
        g,
        i,
        SolveOptions {
            node_budget,
            parallel: false,
        },
    )
}

/// Depth-first branch-and-bound over restricted-growth color assignments.
///
/// Vertices are colored by descending degree (ties by id). A branch dies as
/// soon as some vertex sees more than `i` colors among its colored neighbors,
/// or when the colors in use plus the uncolored vertices cannot beat the
/// incumbent. The search stops early once the incumbent reaches
/// `min(n, n - Δ + i)` (connected inputs) or `n`.
pub fn solve_ti_with(g: &Graph, i: usize, opts: SolveOptions) -> Result<SolveResult, ExactError> {
    check_args(g, i)?;
    let n = g.n();
    let mut upper = n;
    if n >= 2 && g.is_connected() {
        let delta = g.max_degree()?;
        upper = upper.min(n - delta + i);
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let shared = Shared {
        best: AtomicUsize::new(1),
        witness: Mutex::new(vec![1; n]),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(upper <= 1),
        exhausted: AtomicBool::new(false),
        budget: opts.node_budget,
        upper,
    };

    if opts.parallel && n > 6 {
        let split = split_depth(n);
        let mut root = Search::new(g, i, &order, &shared);
        let mut prefixes = Vec::new();
        root.collect_prefixes(0, 0, split, &mut prefixes);
        root.flush();
        prefixes.par_iter().for_each(|(prefix, used)| {
            let mut s = Search::new(g, i, &order, &shared);
            for (depth, &c) in prefix.iter().enumerate() {
                let ok = s.assign(order[depth], c);
                debug_assert!(ok, "prefixes are feasible");
            }
            s.dfs(prefix.len(), *used);
            s.flush();
        });
    } else {
        let mut s = Search::new(g, i, &order, &shared);
        s.dfs(0, 0);
        s.flush();
    }

    let value = shared.best.load(Ordering::SeqCst);
    let witness = shared.witness.into_inner().expect("witness lock poisoned");
    Ok(SolveResult {
        value,
        witness: Coloring::new(witness).expect("solver colors are positive"),
        nodes: shared.nodes.load(Ordering::SeqCst),
        complete: !shared.exhausted.load(Ordering::SeqCst),
    })
}

fn split_depth(n: usize) -> usize {
    (n / 3).clamp(2, 6)
}

struct Shared {
    best: AtomicUsize,
    witness: Mutex<Vec<Color>>,
    nodes: AtomicU64,
    stop: AtomicBool,
    exhausted: AtomicBool,
    budget: u64,
    upper: usize,
}

const FLUSH_EVERY: u64 = 1024;

struct Search<'a> {
    g: &'a Graph,
    i: usize,
    order: &'a [Vertex],
    shared: &'a Shared,
    color: Vec<Color>,
    /// `seen[u][c]`: colored neighbors of `u` carrying color `c`.
    seen: Vec<Vec<u16>>,
    distinct: Vec<usize>,
    local_nodes: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, i: usize, order: &'a [Vertex], shared: &'a Shared) -> Self {
        let n = g.n();
        Search {
            g,
            i,
            order,
            shared,
            color: vec![0; n],
            seen: vec![vec![0; n + 2]; n],
            distinct: vec![0; n],
            local_nodes: 0,
        }
    }

    /// Colors `v` and reports whether every palette still fits; on failure
    /// the assignment is rolled back.
    fn assign(&mut self, v: Vertex, c: Color) -> bool {
        let mut ok = true;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.seen[u][c as usize];
            if *slot == 0 {
                self.distinct[u] += 1;
                if self.distinct[u] > self.i {
                    ok = false;
                }
            }
            *slot += 1;
        }
        self.color[v] = c;
        if !ok {
            self.unassign(v);
        }
        ok
    }

    fn unassign(&mut self, v: Vertex) {
        let c = self.color[v] as usize;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.seen[u][c];
            *slot -= 1;
            if *slot == 0 {
                self.distinct[u] -= 1;
            }
        }
        self.color[v] = 0;
    }

    fn flush(&mut self) {
        if self.local_nodes > 0 {
            self.shared
                .nodes
                .fetch_add(self.local_nodes, Ordering::SeqCst);
            self.local_nodes = 0;
        }
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes >= FLUSH_EVERY {
            self.flush();
        }
        let total = self.shared.nodes.load(Ordering::Relaxed) + self.local_nodes;
        if total >= self.shared.budget {
            self.shared.exhausted.store(true, Ordering::SeqCst);
            self.shared.stop.store(true, Ordering::SeqCst);
            return false;
        }
        true
    }

    fn record(&mut self, used: usize) {
        let mut w = self.shared.witness.lock().expect("witness lock poisoned");
        if used > self.shared.best.load(Ordering::SeqCst) {
            self.shared.best.store(used, Ordering::SeqCst);
            w.copy_from_slice(&self.color);
            if used >= self.shared.upper {
                self.shared.stop.store(true, Ordering::SeqCst);
            }
        }
    }

    /// Candidate colors: a fresh one first, then reuse in ascending order.
    fn candidates(used: usize) -> impl Iterator<Item = Color> {
        std::iter::once(used as Color + 1).chain(1..=used as Color)
    }

    fn dfs(&mut self, depth: usize, used: usize) {
        if self.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        let n = self.order.len();
        if depth == n {
            self.record(used);
            return;
        }
        let v = self.order[depth];
        for c in Self::candidates(used) {
            let next_used = used.max(c as usize);
            if next_used + (n - depth - 1) <= self.shared.best.load(Ordering::Relaxed) {
                continue;
            }
            if !self.assign(v, c) {
                continue;
            }
            let alive = self.tick();
            if alive {
                self.dfs(depth + 1, next_used);
            }
            self.unassign(v);
            if !alive || self.shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn collect_prefixes(
        &mut self,
        depth: usize,
        used: usize,
        split: usize,
        out: &mut Vec<(Vec<Color>, usize)>,
    ) {
        if depth == split || depth == self.order.len() {
            let prefix = self.order[..depth].iter().map(|&v| self.color[v]).collect();
            out.push((prefix, used));
            return;
        }
        let v = self.order[depth];
        for c in Self::candidates(used) {
            if self.assign(v, c) {
                self.local_nodes += 1;
                self.collect_prefixes(depth + 1, used.max(c as usize), split, out);
                self.unassign(v);
            }
        }
    }
}

/// Smallest vertex set that touches every edge and induces a connected
/// subgraph. Sizes are tried in increasing order and subsets in
/// lexicographic order, so the witness is the lexicographically first optimum.
pub fn min_connected_vertex_cover(g: &Graph) -> Result<(usize, VertexSet), ExactError> {
    let n = g.n();
    if n < 2 {
        return Err(ExactError::TooSmall);
    }
    g.require_connected()?;
    let mut chosen = Vec::with_capacity(n);
    let mut in_set = vec![false; n];
    for k in 1..=n {
        if let Some(found) = cover_of_size(g, k, 0, &mut chosen, &mut in_set) {
            return Ok((k, VertexSet::new(found)));
        }
    }
    unreachable!("V(G) is a connected vertex cover of a connected graph")
}

fn cover_of_size(
    g: &Graph,
    k: usize,
    next: Vertex,
    chosen: &mut Vec<Vertex>,
    in_set: &mut [bool],
) -> Option<Vec<Vertex>> {
    if chosen.len() == k {
        let covers = g.edges().iter().all(|&(u, v)| in_set[u] || in_set[v]);
        if covers
            && g.induced_components(&VertexSet::new(chosen.clone()))
                .ok()?
                .len()
                == 1
        {
            return Some(chosen.clone());
        }
        return None;
    }
    let n = g.n();
    if n - next < k - chosen.len() {
        return None;
    }
    for v in next..n {
        // every vertex skipped below `v` must have all its neighbors below `v` chosen
        let skipped_ok = (next..v).all(|x| g.neighbors(x).iter().all(|&y| y >= v || in_set[y]));
        if !skipped_ok {
            break;
        }
        if n - v < k - chosen.len() {
            break;
        }
        chosen.push(v);
        in_set[v] = true;
        let found = cover_of_size(g, k, v + 1, chosen, in_set);
        chosen.pop();
        in_set[v] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}
