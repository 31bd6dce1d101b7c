//! Directed graphs and their path categories.
//!
//! Directed graphs use the convention where a path `e1 e2 ... el` satisfies
//! `r_E(e_i) = s_E(e_{i+1})`. Passing to the 1-graph `E*` interchanges range
//! and source: the k-graph range of a path is the directed-graph source of its
//! first edge. That flip happens only in [`path_category`].

use std::collections::HashMap;

use crate::degree::Degree;
use crate::error::{KGraphError, Result};
use crate::graph::{GraphBuilder, Morph, TruncatedKGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

/// A directed path; `edges` empty means the trivial path at `vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiPath {
    pub vertex: usize,
    pub edges: Vec<usize>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl DirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize> {
        if self.index.contains_key(name) || self.edges.iter().any(|e| e.name == name) {
            return Err(KGraphError::DuplicateName(name.to_string()));
        }
        let id = self.vertices.len();
        self.vertices.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_edge(&mut self, name: &str, src: &str, dst: &str) -> Result<usize> {
        if self.index.contains_key(name) || self.edges.iter().any(|e| e.name == name) {
            return Err(KGraphError::DuplicateName(name.to_string()));
        }
        let src = self.vertex_id(src)?;
        let dst = self.vertex_id(dst)?;
        self.edges.push(Edge {
            name: name.to_string(),
            src,
            dst,
        });
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_id(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| KGraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Parses `vertex <name>` / `edge <name> <src> <dst>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = DirectedGraph::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| KGraphError::Parse {
                line: lineno + 1,
                msg,
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if let Some(bad) = toks[1..].iter().find(|t| !is_identifier(t)) {
                return Err(err(format!("`{bad}` is not an identifier")));
            }
            match toks.as_slice() {
                ["vertex", name] => {
                    g.add_vertex(name).map_err(|e| err(e.to_string()))?;
                }
                ["edge", name, src, dst] => {
                    g.add_edge(name, src, dst).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            }
        }
        Ok(g)
    }

    /// Row-finite with no sinks: every vertex emits at least one edge.
    pub fn check_no_sinks(&self) -> Result<()> {
        for (v, name) in self.vertices.iter().enumerate() {
            if !self.edges.iter().any(|e| e.src == v) {
                return Err(KGraphError::Sink(name.clone()));
            }
        }
        Ok(())
    }

    pub fn path_src(&self, p: &DiPath) -> usize {
        p.edges.first().map_or(p.vertex, |&e| self.edges[e].src)
    }

    pub fn path_dst(&self, p: &DiPath) -> usize {
        p.edges.last().map_or(p.vertex, |&e| self.edges[e].dst)
    }

    pub fn path_label(&self, p: &DiPath) -> String {
        if p.edges.is_empty() {
            self.vertices[p.vertex].clone()
        } else {
            p.edges
                .iter()
                .map(|&e| self.edges[e].name.as_str())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// All directed paths of length at most `max_len`, grouped by length, each
    /// length in lexicographic order of edge indices.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Vec<DiPath>> {
        let mut levels = vec![(0..self.vertices.len())
            .map(|v| DiPath {
                vertex: v,
                edges: Vec::new(),
            })
            .collect::<Vec<_>>()];
        for len in 1..=max_len {
            let mut next = Vec::new();
            for p in &levels[len - 1] {
                let end = self.path_dst(p);
                for (ei, e) in self.edges.iter().enumerate() {
                    if e.src == end {
                        let mut edges = p.edges.clone();
                        edges.push(ei);
                        next.push(DiPath {
                            vertex: self.path_src(p),
                            edges,
                        });
                    }
                }
            }
            next.sort();
            levels.push(next);
        }
        levels
    }
}

/// The path category `E*` truncated to length `depth`, as a 1-graph.
pub fn path_category(e: &DirectedGraph, depth: u32) -> Result<TruncatedKGraph> {
    e.check_no_sinks()?;
    let levels = e.paths_up_to(depth as usize);
    let mut b = GraphBuilder::new(Degree::new(vec![depth]))?;
    let mut ids: HashMap<Vec<usize>, Morph> = HashMap::new();
    let vertex_ids: Vec<Morph> = e
        .vertices()
        .iter()
        .map(|name| b.add_vertex(name.clone()))
        .collect::<Result<_>>()?;
    for level in levels.iter().skip(1) {
        for p in level {
            let id = b.add(
                e.path_label(p),
                Degree::new(vec![p.edges.len() as u32]),
                vertex_ids[e.path_src(p)],
                vertex_ids[e.path_dst(p)],
            )?;
            ids.insert(p.edges.clone(), id);
        }
    }
    let words: Vec<Option<Vec<usize>>> = {
        let mut w = vec![None; b.len()];
        for (k, &id) in &ids {
            w[id.index()] = Some(k.clone());
        }
        w
    };
    let vertex_set: Vec<bool> = (0..b.len())
        .map(|i| vertex_ids.contains(&Morph(i as u32)))
        .collect();
    b.finish(|a, c| {
        if vertex_set[a.index()] {
            return Some(c);
        }
        if vertex_set[c.index()] {
            return Some(a);
        }
        let mut w = words[a.index()].clone()?;
        w.extend_from_slice(words[c.index()].as_ref()?);
        ids.get(&w).copied()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;

    fn single_loop() -> DirectedGraph {
        DirectedGraph::parse("vertex v\nedge e v v\n").unwrap()
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(DirectedGraph::parse("vertex v\nedge e v w\n").is_err());
        assert!(DirectedGraph::parse("node v\n").is_err());
        assert!(DirectedGraph::parse("vertex 9v\n").is_err());
        assert!(DirectedGraph::parse("vertex v\nvertex v\n").is_err());
        let g = DirectedGraph::parse("# comment\nvertex v # trailing\n\nedge e v v\n").unwrap();
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn single_loop_has_one_path_per_length() {
        let g = path_category(&single_loop(), 3).unwrap();
        let labels: Vec<_> = g.morphisms().map(|m| g.label(m).to_string()).collect();
        assert_eq!(labels, ["v", "e", "e.e", "e.e.e"]);
        assert!(verify_axioms(&g).passed());
    }

    #[test]
    fn two_vertex_counts_match_brute_force() {
        let e = DirectedGraph::parse("vertex u\nvertex w\nedge a u w\nedge l w w\n").unwrap();
        // Brute force: all edge sequences of length 2 that chain.
        let mut brute = 0;
        for x in e.edges() {
            for y in e.edges() {
                if x.dst == y.src {
                    brute += 1;
                }
            }
        }
        let g = path_category(&e, 2).unwrap();
        assert_eq!(g.of_degree(&Degree::from([1])).len(), 2);
        assert_eq!(g.of_degree(&Degree::from([2])).len(), brute);
        assert_eq!(brute, 2);
    }

    #[test]
    fn range_is_directed_source() {
        let e = DirectedGraph::parse("vertex u\nvertex w\nedge a u w\nedge l w w\n").unwrap();
        let g = path_category(&e, 2).unwrap();
        let a = g.lookup("a").unwrap();
        assert_eq!(g.label(g.range(a)), "u");
        assert_eq!(g.label(g.source(a)), "w");
        let al = g.lookup("a.l").unwrap();
        assert_eq!(g.compose(a, g.lookup("l").unwrap()), Some(al));
    }

    #[test]
    fn sink_is_rejected() {
        let e = DirectedGraph::parse("vertex u\nvertex w\nedge a u w\n").unwrap();
        assert_eq!(path_category(&e, 3).unwrap_err(), KGraphError::Sink("w".into()));
    }
}
