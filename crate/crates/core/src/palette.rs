//! Colorings, the N_i validity check, and neighborhood color sets ψ(S).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};

pub type Color = u32;
pub type ColorSet = BTreeSet<Color>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaletteError {
    #[error("color of vertex {0} must be a positive integer")]
    NonPositiveColor(Vertex),
    #[error("coloring has {found} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("palette bound i must be at least 1")]
    ZeroBound,
    #[error("vertex {0} does not exist")]
    UnknownVertex(Vertex),
    #[error("vertex set must be non-empty")]
    EmptySet,
    #[error("coloring is not a valid N_{i} coloring ({violations} violating vertices)")]
    InvalidColoring { i: usize, violations: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Total assignment of positive colors; entry `v` is the color of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Color>", into = "Vec<Color>")]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Result<Coloring, PaletteError> {
        if let Some(v) = colors.iter().position(|&c| c == 0) {
            return Err(PaletteError::NonPositiveColor(v));
        }
        Ok(Coloring(colors))
    }

    /// All vertices share color 1.
    pub fn monochrome(n: usize) -> Coloring {
        Coloring(vec![1; n])
    }

    /// Vertex `v` gets color `v + 1`.
    pub fn rainbow(n: usize) -> Coloring {
        Coloring((1..=n as Color).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn color_count(&self) -> usize {
        self.0.iter().collect::<BTreeSet<_>>().len()
    }

    /// Restricted-growth relabelling: colors renumbered 1, 2, 3, ... in order
    /// of first occurrence.
    pub fn normalize(&self) -> Coloring {
        let mut map = HashMap::new();
        let colors = self
            .0
            .iter()
            .map(|c| {
                let next = map.len() as Color + 1;
                *map.entry(*c).or_insert(next)
            })
            .collect();
        Coloring(colors)
    }

    pub fn check_length(&self, g: &Graph) -> Result<(), PaletteError> {
        if self.len() == g.n() {
            Ok(())
        } else {
            Err(PaletteError::LengthMismatch {
                expected: g.n(),
                found: self.len(),
            })
        }
    }
}

impl TryFrom<Vec<Color>> for Coloring {
    type Error = PaletteError;
    fn try_from(v: Vec<Color>) -> Result<Self, Self::Error> {
        Coloring::new(v)
    }
}

impl From<Coloring> for Vec<Color> {
    fn from(c: Coloring) -> Self {
        c.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: Vertex,
    pub palette_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    /// Sorted by vertex id.
    pub violations: Vec<Violation>,
}

pub fn neighborhood_palette(g: &Graph, f: &Coloring, v: Vertex) -> Result<ColorSet, PaletteError> {
    f.check_length(g)?;
    if v >= g.n() {
        return Err(PaletteError::UnknownVertex(v));
    }
    Ok(g.neighbors(v).iter().map(|&x| f.color(x)).collect())
}

/// Checks that every vertex sees at most `i` distinct colors on its open
/// neighborhood, reporting every vertex that does not.
pub fn verify(g: &Graph, f: &Coloring, i: usize) -> Result<Verdict, PaletteError> {
    if i == 0 {
        return Err(PaletteError::ZeroBound);
    }
    f.check_length(g)?;
    let violations: Vec<_> = (0..g.n())
        .filter_map(|v| {
            let size = g
                .neighbors(v)
                .iter()
                .map(|&x| f.color(x))
                .collect::<ColorSet>()
                .len();
            (size > i).then_some(Violation {
                vertex: v,
                palette_size: size,
            })
        })
        .collect();
    Ok(Verdict {
        valid: violations.is_empty(),
        violations,
    })
}

/// Colors on `N(S)`, the union of the open neighborhoods of the members of `S`.
pub fn psi(g: &Graph, f: &Coloring, s: &VertexSet) -> Result<ColorSet, PaletteError> {
    f.check_length(g)?;
    if s.is_empty() {
        return Err(PaletteError::EmptySet);
    }
    if let Some(v) = s.iter().find(|&v| v >= g.n()) {
        return Err(PaletteError::UnknownVertex(v));
    }
    Ok(s.iter()
        .flat_map(|v| g.neighbors(v).iter().map(|&x| f.color(x)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiBound {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
    /// Vertices of `S` in components of `G[S]` with at most two members.
    pub small_vertices: usize,
    /// Vertices of `S` in components with three or more members.
    pub large_vertices: usize,
    pub large_components: usize,
}

/// Evaluates `|ψ(S)| <= i·|S_A| + (i-1)·|S_B| + (i-1)·t_B`, where `S_A` collects
/// the components of `G[S]` with at most two vertices, `S_B` the rest, and
/// `t_B` counts the latter. All-small and all-large sets are special cases.
///
/// The inequality is only guaranteed for `i >= 3`; with `i = 2` a path of
/// three vertices inside a longer path already breaks it.
pub fn psi_bound(
    g: &Graph,
    f: &Coloring,
    i: usize,
    s: &VertexSet,
) -> Result<PsiBound, PaletteError> {
    let verdict = verify(g, f, i)?;
    if !verdict.valid {
        return Err(PaletteError::InvalidColoring {
            i,
            violations: verdict.violations.len(),
        });
    }
    let lhs = psi(g, f, s)?.len();
    let comps = g.induced_components(s)?;
    let (mut small, mut large, mut large_comps) = (0, 0, 0);
    for c in &comps {
        if c.len() <= 2 {
            small += c.len();
        } else {
            large += c.len();
            large_comps += 1;
        }
    }
    let rhs = i * small + (i - 1) * large + (i - 1) * large_comps;
    Ok(PsiBound {
        lhs,
        rhs,
        holds: lhs <= rhs,
        small_vertices: small,
        large_vertices: large,
        large_components: large_comps,
    })
}
