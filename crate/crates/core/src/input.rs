//! Graph files: directed graphs (`vertex`/`edge` lines) and 2-graph skeletons
//! (`vertex`/`blue`/`red`/`square` lines), told apart by content.

use crate::degree::Degree;
use crate::digraph::{path_category, DirectedGraph};
use crate::error::{KGraphError, Result};
use crate::graph::TruncatedKGraph;
use crate::skeleton::{build_2graph, Skeleton2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    Digraph(DirectedGraph),
    Skeleton(Skeleton2),
}

fn keyword(line: &str) -> Option<&str> {
    line.split('#').next()?.split_whitespace().next()
}

impl GraphSource {
    pub fn parse(text: &str) -> Result<Self> {
        let colored = text
            .lines()
            .filter_map(keyword)
            .any(|k| matches!(k, "blue" | "red" | "square"));
        if colored {
            Ok(GraphSource::Skeleton(Skeleton2::parse(text)?))
        } else {
            Ok(GraphSource::Digraph(DirectedGraph::parse(text)?))
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            GraphSource::Digraph(_) => 1,
            GraphSource::Skeleton(_) => 2,
        }
    }

    /// Validation findings that prevent building; empty when buildable.
    pub fn problems(&self) -> Vec<String> {
        match self {
            GraphSource::Digraph(e) => e.check_no_sinks().err().map(|e| e.to_string()).into_iter().collect(),
            GraphSource::Skeleton(sk) => sk.problems(),
        }
    }

    pub fn build(&self, depth: &Degree) -> Result<TruncatedKGraph> {
        if depth.rank() != self.rank() {
            return Err(KGraphError::RankMismatch {
                expected: self.rank(),
                found: depth.rank(),
            });
        }
        match self {
            GraphSource::Digraph(e) => path_category(e, depth.get(0)),
            GraphSource::Skeleton(sk) => build_2graph(sk, depth),
        }
    }

    pub fn digraph(&self) -> Option<&DirectedGraph> {
        match self {
            GraphSource::Digraph(e) => Some(e),
            GraphSource::Skeleton(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_kind() {
        let d = GraphSource::parse("# blue is only a comment here\nvertex v\nedge e v v\n").unwrap();
        assert_eq!(d.rank(), 1);
        let s = GraphSource::parse("vertex v\nblue f v v\nred g v v\nsquare f g g f\n").unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.problems().is_empty());
        assert!(s.build(&Degree::from([2])).is_err());
        assert_eq!(s.build(&Degree::from([2, 2])).unwrap().len(), 9);
    }

    #[test]
    fn reports_bad_skeleton() {
        let s = GraphSource::parse("vertex v\nblue f v v\nred g v v\n").unwrap();
        assert_eq!(s.problems(), vec!["f.g has no square", "g.f is not the image of any square"]);
    }
}
