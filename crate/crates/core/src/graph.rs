//! Immutable simple undirected graphs on dense vertex ids `0..n`.
//!
//! Every analysis query rejects the empty graph; `Graph::build` accepts it so
//! that callers can round-trip `n = 0` documents.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge ({0},{0})")]
    Loop(Vertex),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge ({u},{v}) names a vertex outside 0..{n}")]
    VertexOutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("vertex {0} does not exist")]
    UnknownVertex(Vertex),
    #[error("operation requires a non-empty graph")]
    EmptyGraph,
    #[error("graph is disconnected; unreached vertices: {0:?}")]
    Disconnected(Vec<Vertex>),
    #[error("vertex set must be non-empty")]
    EmptySet,
    #[error("graph is not a cactus")]
    NotCactus,
    #[error("sequential join needs at least one part")]
    NoParts,
    #[error("part {0} of the sequential join is empty")]
    EmptyPart(usize),
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn members(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range ids.
    pub fn build(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (u.min(w[0]), u.max(w[0]));
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Graph {
            adj,
            edge_count: edges.len(),
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::build(n, &edges).expect("complete graph edges are simple")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::build(n, &edges).expect("path edges are simple")
    }

    /// Cycle on `n >= 3` vertices; smaller `n` degenerates to a path.
    pub fn cycle(n: usize) -> Graph {
        if n < 3 {
            return Graph::path(n);
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        Graph::build(n, &edges).expect("cycle edges are simple")
    }

    /// Star `K_{1,leaves}` with the center at id 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::build(leaves + 1, &edges).expect("star edges are simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    fn require_nonempty(&self) -> Result<(), GraphError> {
        if self.n() == 0 {
            Err(GraphError::EmptyGraph)
        } else {
            Ok(())
        }
    }

    fn require_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn max_degree(&self) -> Result<usize, GraphError> {
        self.require_nonempty()?;
        Ok(self.adj.iter().map(Vec::len).max().unwrap_or(0))
    }

    pub fn min_degree(&self) -> Result<usize, GraphError> {
        self.require_nonempty()?;
        Ok(self.adj.iter().map(Vec::len).min().unwrap_or(0))
    }

    fn distances_from(&self, v: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Distance layers `N^k(v)` for `k = 0..=ecc(v)`.
    pub fn bfs_layers(&self, v: Vertex) -> Result<Vec<VertexSet>, GraphError> {
        self.require_nonempty()?;
        self.require_vertex(v)?;
        let dist = self.distances_from(v);
        let unreached: Vec<_> = (0..self.n()).filter(|&u| dist[u].is_none()).collect();
        if !unreached.is_empty() {
            return Err(GraphError::Disconnected(unreached));
        }
        let ecc = dist.iter().flatten().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); ecc + 1];
        for (u, d) in dist.into_iter().enumerate() {
            layers[d.unwrap()].push(u);
        }
        Ok(layers.into_iter().map(VertexSet).collect())
    }

    pub fn eccentricity(&self, v: Vertex) -> Result<usize, GraphError> {
        Ok(self.bfs_layers(v)?.len() - 1)
    }

    fn eccentricities(&self) -> Result<Vec<usize>, GraphError> {
        self.require_nonempty()?;
        (0..self.n()).map(|v| self.eccentricity(v)).collect()
    }

    pub fn diameter(&self) -> Result<usize, GraphError> {
        Ok(self.eccentricities()?.into_iter().max().unwrap_or(0))
    }

    /// Smallest id whose eccentricity equals the diameter.
    pub fn peripheral_vertex(&self) -> Result<Vertex, GraphError> {
        let ecc = self.eccentricities()?;
        let d = ecc.iter().copied().max().unwrap_or(0);
        Ok(ecc.iter().position(|&e| e == d).unwrap())
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn require_connected(&self) -> Result<(), GraphError> {
        self.require_nonempty()?;
        let dist = self.distances_from(0);
        let unreached: Vec<_> = (0..self.n()).filter(|&u| dist[u].is_none()).collect();
        if unreached.is_empty() {
            Ok(())
        } else {
            Err(GraphError::Disconnected(unreached))
        }
    }

    /// Connected components, sorted by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let all: Vec<_> = (0..self.n()).collect();
        self.components_within(&all)
    }

    /// Components of the induced subgraph `G[S]`, sorted by smallest member.
    pub fn induced_components(&self, s: &VertexSet) -> Result<Vec<VertexSet>, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if let Some(v) = s.iter().find(|&v| v >= self.n()) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.components_within(s.members()))
    }

    fn components_within(&self, members: &[Vertex]) -> Vec<VertexSet> {
        let mut inside = vec![false; self.n()];
        for &v in members {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for &start in members {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            out.push(VertexSet::new(comp));
        }
        out.sort();
        out
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edge_count + 1 == self.n()
    }

    pub fn is_cactus(&self) -> bool {
        self.is_connected() && self.fundamental_cycles().is_some()
    }

    /// Cycles of a cactus, one per DFS back edge. Each cycle is listed as the
    /// vertex sequence from the ancestor endpoint down the tree path to the
    /// descendant endpoint; the closing edge back to the first vertex is implied.
    pub fn cactus_cycles(&self) -> Result<Vec<Vec<Vertex>>, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::NotCactus);
        }
        self.fundamental_cycles().ok_or(GraphError::NotCactus)
    }

    /// DFS from vertex 0; `None` as soon as a tree edge lies on two
    /// fundamental cycles (the graph is then not a cactus).
    fn fundamental_cycles(&self) -> Option<Vec<Vec<Vertex>>> {
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        // edge_used[v]: tree edge (parent[v], v) already lies on a cycle.
        let mut edge_used = vec![false; n];
        let mut cycles = Vec::new();
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next == self.adj[v].len() {
                    stack.pop();
                    continue;
                }
                let w = self.adj[v][*next];
                *next += 1;
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    stack.push((w, 0));
                } else if w != parent[v] && depth[w] < depth[v] {
                    let mut cyc = vec![v];
                    let mut x = v;
                    while x != w {
                        if edge_used[x] {
                            return None;
                        }
                        edge_used[x] = true;
                        x = parent[x];
                        cyc.push(x);
                    }
                    cyc.reverse();
                    cycles.push(cyc);
                }
            }
        }
        Some(cycles)
    }

    /// Disjoint union of the parts with every vertex of part `k` joined to
    /// every vertex of part `k + 1`. Ids are assigned block-wise.
    pub fn sequential_join(parts: &[Graph]) -> Result<Graph, GraphError> {
        if parts.is_empty() {
            return Err(GraphError::NoParts);
        }
        if let Some(k) = parts.iter().position(|p| p.n() == 0) {
            return Err(GraphError::EmptyPart(k));
        }
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.n();
        }
        let mut edges = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            let off = offsets[k];
            edges.extend(p.edges().into_iter().map(|(u, v)| (u + off, v + off)));
            if let Some(next) = parts.get(k + 1) {
                let next_off = offsets[k + 1];
                for u in 0..p.n() {
                    for v in 0..next.n() {
                        edges.push((u + off, v + next_off));
                    }
                }
            }
        }
        Graph::build(total, &edges)
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(u, v)| (u + off, v + off)));
        Graph::build(off + other.n(), &edges).expect("disjoint union of simple graphs is simple")
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::build(self.n(), &edges).expect("relabelling preserves simplicity")
    }

    /// Induced subgraph on `keep` (ascending), renumbered `0..keep.len()`.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (k, v) in keep.iter().enumerate() {
            index[v] = k;
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]))
            .collect();
        Graph::build(keep.len(), &edges).expect("induced subgraph is simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec())
    }

    #[test]
    fn build_smallest_edge() {
        let g = Graph::build(2, &[(0, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![1, 1]);
        assert_eq!(g.max_degree().unwrap(), 1);
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(Graph::build(3, &[(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(
            Graph::build(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::build(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { u: 0, v: 3, n: 3 })
        ));
        let msg = Graph::build(3, &[(2, 2)]).unwrap_err().to_string();
        assert!(msg.contains("loop") && msg.contains("(2,2)"));
    }

    #[test]
    fn star_max_degree() {
        let g = Graph::build(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(g.max_degree().unwrap(), 4);
        assert_eq!(Graph::path(5).max_degree().unwrap(), 2);
        assert_eq!(Graph::empty(0).max_degree(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn layers() {
        let p = Graph::path(4);
        assert_eq!(
            p.bfs_layers(0).unwrap(),
            vec![set(&[0]), set(&[1]), set(&[2]), set(&[3])]
        );
        let s = Graph::star(4);
        assert_eq!(
            s.bfs_layers(0).unwrap(),
            vec![set(&[0]), set(&[1, 2, 3, 4])]
        );
        let c5 = Graph::cycle(5);
        for v in 0..5 {
            let sizes: Vec<_> = c5
                .bfs_layers(v)
                .unwrap()
                .iter()
                .map(VertexSet::len)
                .collect();
            assert_eq!(sizes, vec![1, 2, 2]);
        }
        let two = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.bfs_layers(0), Err(GraphError::Disconnected(vec![2, 3])));
    }

    #[test]
    fn diameter_and_periphery() {
        let p = Graph::path(5);
        assert_eq!(p.diameter().unwrap(), 4);
        assert_eq!(p.peripheral_vertex().unwrap(), 0);
        assert_eq!(Graph::complete(4).diameter().unwrap(), 1);
        let parts = [
            Graph::complete(1),
            Graph::complete(3),
            Graph::complete(3),
            Graph::complete(3),
            Graph::complete(1),
        ];
        let j = Graph::sequential_join(&parts).unwrap();
        assert_eq!(j.diameter().unwrap(), 4);
        assert!(Graph::build(2, &[]).unwrap().diameter().is_err());
    }

    #[test]
    fn components_and_induced() {
        let p = Graph::path(4);
        assert_eq!(
            p.induced_components(&set(&[0, 1, 3])).unwrap(),
            vec![set(&[0, 1]), set(&[3])]
        );
        assert_eq!(
            p.induced_components(&set(&[0, 1, 2, 3])).unwrap(),
            vec![set(&[0, 1, 2, 3])]
        );
        assert_eq!(p.induced_components(&set(&[])), Err(GraphError::EmptySet));
        let two = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.components(), vec![set(&[0, 1]), set(&[2, 3])]);
        assert!(!two.is_connected());
    }

    #[test]
    fn cactus_recognition() {
        let tri_pendant = Graph::build(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert!(tri_pendant.is_cactus());
        let cycles = tri_pendant.cactus_cycles().unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 3);
        assert!(!Graph::complete(4).is_cactus());
        assert_eq!(
            Graph::complete(4).cactus_cycles(),
            Err(GraphError::NotCactus)
        );
        let t = Graph::star(5);
        assert!(t.is_tree() && t.is_cactus());
        assert!(t.cactus_cycles().unwrap().is_empty());
        // bowtie: two triangles sharing vertex 0
        let bowtie = Graph::build(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(bowtie.cactus_cycles().unwrap().len(), 2);
        // theta graph: two vertices joined by three paths
        let theta = Graph::build(5, &[(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(!theta.is_cactus());
    }

    #[test]
    fn joins() {
        let k2 = Graph::sequential_join(&[Graph::complete(1), Graph::complete(1)]).unwrap();
        assert_eq!(k2, Graph::complete(2));
        let j =
            Graph::sequential_join(&[Graph::complete(1), Graph::complete(3), Graph::complete(1)])
                .unwrap();
        assert_eq!(j.n(), 5);
        assert_eq!(j.degrees(), vec![3, 4, 4, 4, 3]);
        let ones: Vec<_> = (0..6).map(|_| Graph::complete(1)).collect();
        let p = Graph::sequential_join(&ones).unwrap();
        assert_eq!(p, Graph::path(6));
        assert_eq!(p.diameter().unwrap(), 5);
        assert_eq!(Graph::sequential_join(&[]), Err(GraphError::NoParts));
        assert_eq!(
            Graph::sequential_join(&[Graph::complete(1), Graph::empty(0)]),
            Err(GraphError::EmptyPart(1))
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::build(6, &[(3, 1), (0, 5), (2, 4), (1, 0)]).unwrap();
        let again = Graph::build(g.n(), &g.edges()).unwrap();
        assert_eq!(g, again);
        assert_eq!(g.edges(), vec![(0, 1), (0, 5), (1, 3), (2, 4)]);
    }
}
