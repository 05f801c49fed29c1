//! File formats: graph JSON, plain edge lists, DOT export, coloring JSON and
//! discrepancy tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Discrepancy;
use crate::graph::{Graph, GraphError, Vertex};
use crate::palette::{Color, Coloring, PaletteError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid coloring: {0}")]
    Coloring(#[from] PaletteError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl From<&serde_json::Error> for IoError {
    fn from(e: &serde_json::Error) -> Self {
        parse_err(e.line(), e.column(), e.to_string())
    }
}

/// Graph JSON: `{"name": "...", "n": 5, "edges": [[0, 1], ...]}`, 0-based ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph, name: Option<String>) -> GraphDocument {
        GraphDocument {
            name,
            n: g.n(),
            edges: g.edges(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, IoError> {
        Ok(Graph::build(self.n, &self.edges)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    EdgeList,
    Dot,
}

/// Reads JSON when the text starts with `{`, a plain edge list otherwise.
pub fn parse_graph(text: &str) -> Result<GraphDocument, IoError> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn parse_graph_json(text: &str) -> Result<GraphDocument, IoError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| IoError::from(&e))?;
    doc.to_graph()?;
    Ok(doc)
}

/// Edge list: a header line `n m`, then `m` lines `u v`. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<GraphDocument, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing header line 'n m'"))?;
    let [n, m] = two_numbers(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        if edges.len() == m {
            return Err(parse_err(line, 1, format!("more than {m} edge lines")));
        }
        let [u, v] = two_numbers(line, body)?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            1,
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    let doc = GraphDocument {
        name: None,
        n,
        edges,
    };
    doc.to_graph()?;
    Ok(doc)
}

fn two_numbers(line: usize, body: &str) -> Result<[usize; 2], IoError> {
    let mut out = [0; 2];
    let mut found = 0;
    let mut rest = body;
    let mut offset = 0;
    while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
        let end = rest[start..]
            .find(char::is_whitespace)
            .map_or(rest.len(), |e| start + e);
        let token = &rest[start..end];
        let column = offset + start + 1;
        if found == 2 {
            return Err(parse_err(
                line,
                column,
                format!("unexpected token '{token}'"),
            ));
        }
        out[found] = token.parse().map_err(|_| {
            parse_err(
                line,
                column,
                format!("expected a non-negative integer, got '{token}'"),
            )
        })?;
        found += 1;
        offset += end;
        rest = &rest[end..];
    }
    if found < 2 {
        return Err(parse_err(line, body.len() + 1, "expected two integers"));
    }
    Ok(out)
}

pub fn write_graph(
    doc: &GraphDocument,
    format: GraphFormat,
    coloring: Option<&Coloring>,
) -> String {
    match format {
        GraphFormat::Json => {
            let mut s = serde_json::to_string(doc).expect("graph document serializes");
            s.push('\n');
            s
        }
        GraphFormat::EdgeList => {
            let mut s = format!("{} {}\n", doc.n, doc.edges.len());
            for (u, v) in &doc.edges {
                let _ = writeln!(s, "{u} {v}");
            }
            s
        }
        GraphFormat::Dot => write_dot(doc, coloring),
    }
}

/// DOT export; when a coloring is given each vertex carries its color index
/// in its label and a `color` attribute.
pub fn write_dot(doc: &GraphDocument, coloring: Option<&Coloring>) -> String {
    let name = doc.name.as_deref().unwrap_or("G");
    let mut s = format!("graph \"{}\" {{\n", name.replace('"', "\\\""));
    for v in 0..doc.n {
        match coloring {
            Some(f) if v < f.len() => {
                let c = f.color(v);
                let _ = writeln!(s, "  {v} [label=\"{v}:{c}\", color={c}];");
            }
            _ => {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for (u, v) in &doc.edges {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}

/// Coloring file: `{"i": 3, "colors": [1, 2, ...]}`; a bare array is also
/// accepted on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    pub colors: Coloring,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ColoringInput {
    Doc(ColoringDocument),
    Bare(Vec<Color>),
}

pub fn parse_coloring(text: &str) -> Result<ColoringDocument, IoError> {
    // parse once as a plain value so syntax errors keep their position
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::from(&e))?;
    match serde_json::from_value::<ColoringInput>(value) {
        Ok(ColoringInput::Doc(d)) => Ok(d),
        Ok(ColoringInput::Bare(colors)) => Ok(ColoringDocument {
            i: None,
            colors: Coloring::new(colors)?,
        }),
        Err(_) => Err(parse_err(
            1,
            1,
            "expected {\"colors\": [positive integers]} or a bare array of positive integers",
        )),
    }
}

pub fn write_coloring(doc: &ColoringDocument) -> String {
    let mut s = serde_json::to_string(doc).expect("coloring serializes");
    s.push('\n');
    s
}

pub const DISCREPANCY_COLUMNS: [&str; 7] =
    ["claim", "graph", "n", "i", "claimed", "oracle", "direction"];

/// Discrepancy CSV with a header row, even when there are no records.
pub fn discrepancies_csv(rows: &[Discrepancy]) -> Result<String, IoError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(DISCREPANCY_COLUMNS)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_discrepancies_csv(text: &str) -> Result<Vec<Discrepancy>, IoError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

pub fn discrepancies_json(rows: &[Discrepancy]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("discrepancies serialize");
    s.push('\n');
    s
}
