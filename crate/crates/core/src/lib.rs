//! N_i-vertex colorings: exact computation of t_i(G), bounds and claimed
//! closed forms, constructive colorings for trees and cacti, and an audit
//! that checks claims against exact values.
//!
//! An N_i coloring assigns colors so that every open neighborhood carries at
//! most `i` distinct colors; t_i(G) is the largest number of colors such a
//! coloring can use.
//!
//! ```
//! use nchroma::exact::{solve_ti, DEFAULT_NODE_BUDGET};
//! use nchroma::graph::Graph;
//! use nchroma::palette::verify;
//!
//! let star = Graph::star(5);
//! let r = solve_ti(&star, 3, DEFAULT_NODE_BUDGET).unwrap();
//! assert_eq!((r.value, r.complete), (4, true));
//! assert!(verify(&star, &r.witness, 3).unwrap().valid);
//! ```

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod exact;
pub mod graph;
pub mod io;
pub mod palette;
pub mod treecactus;
