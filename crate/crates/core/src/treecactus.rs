//! Closed-form values for trees and cacti, and the constructive colorings
//! behind them (leaf-by-leaf re-attachment and BFS-layer windows).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::palette::{verify, Color, ColorSet, Coloring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("input is not a tree")]
    NotTree,
    #[error("input is not a cactus")]
    NotCactus,
    #[error("need at least {needed} vertices, got {found}")]
    TooSmall { needed: usize, found: usize },
    #[error("tree_ti_closed needs i >= 3 (got {0}); use tree_t2_closed for i = 2")]
    UseT2(usize),
    #[error("palette bound i = {i} is below the minimum {min}")]
    BoundTooSmall { i: usize, min: usize },
    #[error("construction gap at vertex {vertex}: no feasible reuse color")]
    ConstructionGap {
        vertex: Vertex,
        /// Colors assigned so far; 0 marks vertices not yet re-attached.
        partial: Vec<Color>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStats {
    pub n: usize,
    pub leaves: usize,
    /// `degree_counts[k]` is the number of vertices of degree `k`.
    pub degree_counts: Vec<usize>,
}

impl TreeStats {
    pub fn of(g: &Graph) -> TreeStats {
        let degrees = g.degrees();
        let mut degree_counts = vec![0; degrees.iter().copied().max().unwrap_or(0) + 1];
        for d in degrees {
            degree_counts[d] += 1;
        }
        TreeStats {
            n: g.n(),
            leaves: degree_counts.get(1).copied().unwrap_or(0),
            degree_counts,
        }
    }

    pub fn n_k(&self, k: usize) -> usize {
        self.degree_counts.get(k).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusStats {
    pub n: usize,
    pub leaves: usize,
    pub n2: usize,
    /// Cycles that contain at least one vertex of degree two.
    pub r: usize,
    pub cycles: usize,
}

impl CactusStats {
    pub fn of(g: &Graph) -> Result<CactusStats, ConstructError> {
        let cycles = g.cactus_cycles().map_err(|_| ConstructError::NotCactus)?;
        let stats = TreeStats::of(g);
        let r = cycles
            .iter()
            .filter(|c| c.iter().any(|&v| g.degree(v) == 2))
            .count();
        Ok(CactusStats {
            n: g.n(),
            leaves: stats.leaves,
            n2: stats.n_k(2),
            r,
            cycles: cycles.len(),
        })
    }
}

fn require_tree(t: &Graph, min_n: usize) -> Result<TreeStats, ConstructError> {
    if !t.is_tree() {
        return Err(ConstructError::NotTree);
    }
    if t.n() < min_n {
        return Err(ConstructError::TooSmall {
            needed: min_n,
            found: t.n(),
        });
    }
    Ok(TreeStats::of(t))
}

fn non_negative(x: i64) -> usize {
    usize::try_from(x).unwrap_or(0)
}

/// `n - l + 2`.
pub fn tree_t2_closed(t: &Graph) -> Result<usize, ConstructError> {
    let s = require_tree(t, 2)?;
    Ok(s.n - s.leaves + 2)
}

/// `2n - 2l + 2 - n_2`.
pub fn tree_t3_closed(t: &Graph) -> Result<usize, ConstructError> {
    let s = require_tree(t, 2)?;
    Ok(non_negative(
        2 * s.n as i64 - 2 * s.leaves as i64 + 2 - s.n_k(2) as i64,
    ))
}

/// `2n - 2l + 2 - (n_2 + ... + n_{i-1})`. Disagrees with enumeration on
/// stars once `i >= 4` (e.g. `K_{1,5}`, `i = 4`: formula 4, true value 5).
pub fn tree_ti_closed(t: &Graph, i: usize) -> Result<usize, ConstructError> {
    if i < 3 {
        return Err(ConstructError::UseT2(i));
    }
    let s = require_tree(t, 2)?;
    let middle: usize = (2..i).map(|k| s.n_k(k)).sum();
    Ok(non_negative(
        2 * s.n as i64 - 2 * s.leaves as i64 + 2 - middle as i64,
    ))
}

/// `2n - 2l - 2r + 2 - n_2`, with `r` the number of cycles through a
/// degree-two vertex.
pub fn cactus_t3_closed(g: &Graph) -> Result<usize, ConstructError> {
    if !g.is_cactus() {
        return Err(ConstructError::NotCactus);
    }
    if g.n() < 3 {
        return Err(ConstructError::TooSmall {
            needed: 3,
            found: g.n(),
        });
    }
    let s = CactusStats::of(g)?;
    Ok(non_negative(
        2 * s.n as i64 - 2 * s.leaves as i64 - 2 * s.r as i64 + 2 - s.n2 as i64,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreePolicy {
    /// New color iff the attachment vertex had degree at most `i - 1`.
    DegreeBound,
    /// New color iff the attachment vertex saw at most `i - 1` colors.
    PaletteGreedy,
}

/// Partial coloring over a growing vertex set; color 0 means "absent".
struct Growth<'a> {
    g: &'a Graph,
    color: Vec<Color>,
    next: Color,
}

impl<'a> Growth<'a> {
    fn new(g: &'a Graph) -> Self {
        Growth {
            g,
            color: vec![0; g.n()],
            next: 1,
        }
    }

    fn fresh(&mut self) -> Color {
        let c = self.next;
        self.next += 1;
        c
    }

    fn present_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.g
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| self.color[w] != 0)
    }

    fn palette(&self, v: Vertex) -> ColorSet {
        self.present_neighbors(v).map(|w| self.color[w]).collect()
    }

    fn present_degree(&self, v: Vertex) -> usize {
        self.present_neighbors(v).count()
    }

    /// Every present vertex sees at most `i` colors among present neighbors.
    fn valid(&self, i: usize) -> bool {
        (0..self.g.n())
            .filter(|&v| self.color[v] != 0)
            .all(|v| self.palette(v).len() <= i)
    }

    fn finish(self) -> (Coloring, usize) {
        let f = Coloring::new(self.color).expect("every vertex was colored");
        let count = f.color_count();
        (f, count)
    }
}

/// Leaf-removal order: repeatedly drop the highest-id leaf until at most two
/// vertices remain. Returns the removed `(leaf, attachment)` pairs in removal
/// order and the remaining base vertices.
fn leaf_removal(t: &Graph) -> (Vec<(Vertex, Vertex)>, Vec<Vertex>) {
    let n = t.n();
    let mut degree = t.degrees();
    let mut alive = vec![true; n];
    let mut leaves: BTreeSet<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut removed = Vec::new();
    let mut remaining = n;
    while remaining > 2 {
        let u = *leaves
            .iter()
            .next_back()
            .expect("a tree with 3+ vertices has a leaf");
        leaves.remove(&u);
        let w = t
            .neighbors(u)
            .iter()
            .copied()
            .find(|&w| alive[w])
            .expect("leaf has one live neighbor");
        alive[u] = false;
        remaining -= 1;
        degree[w] -= 1;
        if degree[w] == 1 {
            leaves.insert(w);
        }
        removed.push((u, w));
    }
    let base = (0..n).filter(|&v| alive[v]).collect();
    (removed, base)
}

/// Re-attaches leaves in reverse removal order, starting from a one- or
/// two-vertex base. A re-attached leaf gets a fresh color when the policy
/// allows it and otherwise the smallest color already on its attachment
/// vertex's neighborhood. The result is always N_i-valid.
pub fn tree_inductive(
    t: &Graph,
    i: usize,
    policy: TreePolicy,
) -> Result<(Coloring, usize), ConstructError> {
    require_tree(t, 1)?;
    if i < 2 {
        return Err(ConstructError::BoundTooSmall { i, min: 2 });
    }
    let (removed, base) = leaf_removal(t);
    let mut grow = Growth::new(t);
    for &v in &base {
        grow.color[v] = grow.fresh();
    }
    for &(u, w) in removed.iter().rev() {
        let palette = grow.palette(w);
        let new_color = match policy {
            TreePolicy::DegreeBound => grow.present_degree(w) < i,
            TreePolicy::PaletteGreedy => palette.len() < i,
        };
        grow.color[u] = if new_color {
            grow.fresh()
        } else {
            *palette
                .iter()
                .next()
                .expect("attachment vertex has colored neighbors")
        };
    }
    let out = grow.finish();
    debug_assert!(verify(t, &out.0, i).unwrap().valid);
    Ok(out)
}

/// Removal order for cacti: repeatedly drop a minimum-degree vertex whose
/// removal keeps the remainder connected (ties: highest id), down to three
/// vertices.
fn cactus_removal(g: &Graph) -> (Vec<Vertex>, Vec<Vertex>) {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut removed = Vec::new();
    let mut remaining = n;
    let live_degree =
        |alive: &[bool], v: Vertex| g.neighbors(v).iter().filter(|&&w| alive[w]).count();
    while remaining > 3 {
        let mut pick = None;
        let mut best_degree = usize::MAX;
        for v in (0..n).rev().filter(|&v| alive[v]) {
            let d = live_degree(&alive, v);
            if d < best_degree && !is_cut_vertex(g, &alive, v) {
                best_degree = d;
                pick = Some(v);
            }
        }
        let u = pick.expect("a connected cactus always has a removable vertex of degree <= 2");
        alive[u] = false;
        remaining -= 1;
        removed.push(u);
    }
    let base = (0..n).filter(|&v| alive[v]).collect();
    (removed, base)
}

fn is_cut_vertex(g: &Graph, alive: &[bool], v: Vertex) -> bool {
    let live: Vec<Vertex> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| alive[w])
        .collect();
    if live.len() < 2 {
        return false;
    }
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    seen[live[0]] = true;
    let mut stack = vec![live[0]];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if alive[y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    live.iter().any(|&w| !seen[w])
}

/// Builds an N_3 coloring of a cactus by vertex removal and re-attachment.
/// A re-attached vertex takes a fresh color whenever that keeps the partial
/// coloring valid; otherwise the smallest color from its neighbors' palettes
/// that keeps it valid.
pub fn cactus_inductive(g: &Graph) -> Result<(Coloring, usize), ConstructError> {
    if !g.is_cactus() {
        return Err(ConstructError::NotCactus);
    }
    if g.n() < 3 {
        return Err(ConstructError::TooSmall {
            needed: 3,
            found: g.n(),
        });
    }
    const I: usize = 3;
    let (removed, base) = cactus_removal(g);
    let mut grow = Growth::new(g);
    for &v in &base {
        grow.color[v] = grow.fresh();
    }
    for &u in removed.iter().rev() {
        let fresh = grow.next;
        grow.color[u] = fresh;
        if grow.valid(I) {
            grow.next += 1;
            continue;
        }
        let candidates: ColorSet = grow
            .present_neighbors(u)
            .flat_map(|w| grow.palette(w))
            .filter(|&c| c != fresh)
            .collect();
        let mut placed = false;
        for c in candidates {
            grow.color[u] = c;
            if grow.valid(I) {
                placed = true;
                break;
            }
        }
        if !placed {
            grow.color[u] = 0;
            return Err(ConstructError::ConstructionGap {
                vertex: u,
                partial: grow.color,
            });
        }
    }
    Ok(grow.finish())
}

/// Colors assigned to BFS layer `m` (distance `m` from the peripheral
/// vertex) by the layered construction.
pub fn layer_colors(m: usize, i: usize) -> std::ops::RangeInclusive<Color> {
    if m == 0 {
        return 1..=1;
    }
    let k = m.div_ceil(3) as Color;
    let i = i as Color;
    let half = i / 2; // ceil((i - 1) / 2)
    match m % 3 {
        1 => (2 + (k - 1) * i)..=(k * i - half),
        2 => (k * i - half + 1)..=(k * i),
        _ => (k * i + 1)..=(k * i + 1),
    }
}

/// The `i` consecutive colors that can appear around a vertex of layer `m`.
pub fn layer_window(m: usize, i: usize) -> std::ops::RangeInclusive<Color> {
    let lo = if m == 0 {
        1
    } else {
        *layer_colors(m - 1, i).start()
    };
    lo..=(lo + i as Color - 1)
}

/// Colors BFS layers from the peripheral vertex so that any three consecutive
/// layers share exactly `i` colors, cycling round-robin (by vertex id) through
/// each layer's range.
pub fn layered_coloring(g: &Graph, i: usize) -> Result<(Coloring, usize), ConstructError> {
    if i < 3 {
        return Err(ConstructError::BoundTooSmall { i, min: 3 });
    }
    g.require_connected()?;
    let v = g.peripheral_vertex()?;
    let layers = g.bfs_layers(v)?;
    let mut color = vec![0; g.n()];
    for (m, layer) in layers.iter().enumerate() {
        let range: Vec<Color> = layer_colors(m, i).collect();
        for (k, u) in layer.iter().enumerate() {
            color[u] = range[k % range.len()];
        }
    }
    let f = Coloring::new(color).expect("layer colors are positive");
    let count = f.color_count();
    Ok((f, count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spider3() -> Graph {
        Graph::build(
            11,
            &[
                (0, 1),
                (1, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 6),
                (1, 7),
                (2, 8),
                (2, 9),
                (2, 10),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tree_closed_forms() {
        assert_eq!(tree_t2_closed(&Graph::star(6)).unwrap(), 3);
        assert_eq!(tree_t2_closed(&Graph::path(7)).unwrap(), 7);
        assert_eq!(tree_t3_closed(&spider3()).unwrap(), 8);
        assert_eq!(tree_ti_closed(&spider3(), 3).unwrap(), 8);
        assert_eq!(tree_t3_closed(&Graph::path(5)).unwrap(), 5);
        assert_eq!(tree_ti_closed(&Graph::star(5), 4).unwrap(), 4);
        assert_eq!(
            tree_ti_closed(&Graph::star(5), 2),
            Err(ConstructError::UseT2(2))
        );
        assert_eq!(
            tree_t3_closed(&Graph::cycle(4)),
            Err(ConstructError::NotTree)
        );
    }

    #[test]
    fn cactus_closed_forms() {
        assert_eq!(cactus_t3_closed(&Graph::cycle(3)).unwrap(), 3);
        assert_eq!(cactus_t3_closed(&Graph::cycle(6)).unwrap(), 6);
        let tri_pendant = Graph::build(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(cactus_t3_closed(&tri_pendant).unwrap(), 4);
        assert_eq!(
            cactus_t3_closed(&Graph::complete(4)),
            Err(ConstructError::NotCactus)
        );
    }

    #[test]
    fn tree_policies() {
        let k15 = Graph::star(5);
        let (f, c) = tree_inductive(&k15, 4, TreePolicy::PaletteGreedy).unwrap();
        assert_eq!(c, 5);
        assert!(verify(&k15, &f, 4).unwrap().valid);
        let (f, c) = tree_inductive(&k15, 4, TreePolicy::DegreeBound).unwrap();
        assert_eq!(c, 5);
        assert!(verify(&k15, &f, 4).unwrap().valid);
        let (_, c) = tree_inductive(&spider3(), 3, TreePolicy::DegreeBound).unwrap();
        assert_eq!(c, 8);
        let (f, c) = tree_inductive(&Graph::empty(1), 3, TreePolicy::DegreeBound).unwrap();
        assert_eq!((f.as_slice(), c), (&[1][..], 1));
    }

    #[test]
    fn cactus_construction() {
        let tri_pendant = Graph::build(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let (f, c) = cactus_inductive(&tri_pendant).unwrap();
        assert_eq!(c, 4);
        assert!(verify(&tri_pendant, &f, 3).unwrap().valid);
        let (_, c) = cactus_inductive(&spider3()).unwrap();
        assert_eq!(c, tree_t3_closed(&spider3()).unwrap());
    }

    #[test]
    fn cut_vertices_are_not_removed() {
        // two triangles linked through vertex 6, which has degree 2
        let g = Graph::build(
            7,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (2, 6),
                (6, 3),
            ],
        )
        .unwrap();
        let (removed, base) = cactus_removal(&g);
        assert_ne!(removed[0], 6);
        assert_eq!(removed.len() + base.len(), 7);
        let (f, _) = cactus_inductive(&g).unwrap();
        assert!(verify(&g, &f, 3).unwrap().valid);
    }

    #[test]
    fn layer_ranges() {
        // i = 3: one color per layer
        let got: Vec<_> = (0..7).map(|m| layer_colors(m, 3)).collect();
        let want: Vec<_> = (1..=7).map(|c| c..=c).collect();
        assert_eq!(got, want);
        // i = 5: ranges {2,3},{4,5},{6},{7,8},{9,10},{11}
        assert_eq!(layer_colors(1, 5), 2..=3);
        assert_eq!(layer_colors(2, 5), 4..=5);
        assert_eq!(layer_colors(3, 5), 6..=6);
        assert_eq!(layer_colors(4, 5), 7..=8);
        for i in 3..8 {
            for m in 1..12 {
                let union: BTreeSet<Color> =
                    (m - 1..=m + 1).flat_map(|x| layer_colors(x, i)).collect();
                assert_eq!(union.len(), i);
                assert!(union.iter().all(|c| layer_window(m, i).contains(c)));
            }
        }
    }

    #[test]
    fn layered_examples() {
        let p7 = Graph::path(7);
        let (f, c) = layered_coloring(&p7, 3).unwrap();
        assert_eq!(f, Coloring::rainbow(7));
        assert_eq!(c, 7);
        let j = Graph::sequential_join(&[
            Graph::complete(1),
            Graph::complete(3),
            Graph::complete(3),
            Graph::complete(3),
            Graph::complete(1),
        ])
        .unwrap();
        let (f, c) = layered_coloring(&j, 3).unwrap();
        assert!(verify(&j, &f, 3).unwrap().valid);
        assert!(c >= 5);
        let p5 = Graph::path(5);
        let (f, c) = layered_coloring(&p5, 5).unwrap();
        assert!(verify(&p5, &f, 5).unwrap().valid);
        assert_eq!(c, 5);
        assert!(matches!(
            layered_coloring(&p5, 2),
            Err(ConstructError::BoundTooSmall { i: 2, min: 3 })
        ));
        let two = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(layered_coloring(&two, 3).is_err());
    }
}
