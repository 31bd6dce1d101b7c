//! 2-graphs presented by blue and red edges plus factorization squares.
//!
//! A square `(b, r, r', b')` records that the blue-then-red path `b r` equals
//! the red-then-blue path `r' b'`. Edges use the k-graph convention: an edge
//! is listed with its range first, and `x y` is composable when
//! `s(x) = r(y)`. Morphisms are stored in the normal form "all blue letters
//! first", reached by rewriting red-blue adjacencies with the inverse squares.

use std::collections::HashMap;

use crate::degree::Degree;
use crate::digraph::is_identifier;
use crate::error::{KGraphError, Result};
use crate::graph::{GraphBuilder, Morph, TruncatedKGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Blue,
    Red,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredEdge {
    pub name: String,
    pub range: usize,
    pub source: usize,
}

/// A square `(b, r, r', b')`, stored as indices into the blue/red edge lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub blue: usize,
    pub red: usize,
    pub red_out: usize,
    pub blue_out: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Skeleton2 {
    vertices: Vec<String>,
    blue: Vec<ColoredEdge>,
    red: Vec<ColoredEdge>,
    squares: Vec<Square>,
}

impl Skeleton2 {
    pub fn new() -> Self {
        Self::default()
    }

    fn name_taken(&self, name: &str) -> bool {
        self.vertices.iter().any(|v| v == name)
            || self.blue.iter().chain(&self.red).any(|e| e.name == name)
    }

    fn vertex_id(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| KGraphError::UnknownVertex(name.to_string()))
    }

    fn edge_id(&self, color: Color, name: &str) -> Result<usize> {
        let list = match color {
            Color::Blue => &self.blue,
            Color::Red => &self.red,
        };
        list.iter()
            .position(|e| e.name == name)
            .ok_or_else(|| KGraphError::UnknownEdge(name.to_string()))
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize> {
        if self.name_taken(name) {
            return Err(KGraphError::DuplicateName(name.to_string()));
        }
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(&mut self, color: Color, name: &str, range: &str, source: &str) -> Result<usize> {
        if self.name_taken(name) {
            return Err(KGraphError::DuplicateName(name.to_string()));
        }
        let edge = ColoredEdge {
            name: name.to_string(),
            range: self.vertex_id(range)?,
            source: self.vertex_id(source)?,
        };
        let list = match color {
            Color::Blue => &mut self.blue,
            Color::Red => &mut self.red,
        };
        list.push(edge);
        Ok(list.len() - 1)
    }

    pub fn add_square(&mut self, b: &str, r: &str, r_out: &str, b_out: &str) -> Result<()> {
        let sq = Square {
            blue: self.edge_id(Color::Blue, b)?,
            red: self.edge_id(Color::Red, r)?,
            red_out: self.edge_id(Color::Red, r_out)?,
            blue_out: self.edge_id(Color::Blue, b_out)?,
        };
        self.squares.push(sq);
        Ok(())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn blue(&self) -> &[ColoredEdge] {
        &self.blue
    }

    pub fn red(&self) -> &[ColoredEdge] {
        &self.red
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// Parses `vertex`, `blue <name> <range> <source>`, `red ...` and
    /// `square <b> <r> <r'> <b'>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sk = Skeleton2::new();
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
            let res = match toks.as_slice() {
                ["vertex", name] => sk.add_vertex(name).map(|_| ()),
                ["blue", name, r, s] => sk.add_edge(Color::Blue, name, r, s).map(|_| ()),
                ["red", name, r, s] => sk.add_edge(Color::Red, name, r, s).map(|_| ()),
                ["square", b, r, r2, b2] => sk.add_square(b, r, r2, b2),
                _ => return Err(err(format!("unrecognised line `{line}`"))),
            };
            res.map_err(|e| err(e.to_string()))?;
        }
        Ok(sk)
    }

    /// Every defect of the square table, as human-readable witnesses.
    /// Empty exactly when each composable blue-red pair has one square and the
    /// squares form a bijection onto composable red-blue pairs.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut forward: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut backward: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, sq) in self.squares.iter().enumerate() {
            let (b, r) = (&self.blue[sq.blue], &self.red[sq.red]);
            let (r2, b2) = (&self.red[sq.red_out], &self.blue[sq.blue_out]);
            if b.source != r.range {
                out.push(format!("square {i}: {}.{} is not composable", b.name, r.name));
            }
            if r2.source != b2.range {
                out.push(format!("square {i}: {}.{} is not composable", r2.name, b2.name));
            }
            if r2.range != b.range || b2.source != r.source {
                out.push(format!(
                    "square {i}: {}.{} and {}.{} have different endpoints",
                    b.name, r.name, r2.name, b2.name
                ));
            }
            forward.entry((sq.blue, sq.red)).or_default().push(i);
            backward.entry((sq.red_out, sq.blue_out)).or_default().push(i);
        }
        for (bi, b) in self.blue.iter().enumerate() {
            for (ri, r) in self.red.iter().enumerate() {
                if b.source == r.range {
                    match forward.get(&(bi, ri)).map_or(0, Vec::len) {
                        1 => {}
                        0 => out.push(format!("{}.{} has no square", b.name, r.name)),
                        k => out.push(format!("{}.{} has {k} squares", b.name, r.name)),
                    }
                }
            }
        }
        for (ri, r) in self.red.iter().enumerate() {
            for (bi, b) in self.blue.iter().enumerate() {
                if r.source == b.range {
                    match backward.get(&(ri, bi)).map_or(0, Vec::len) {
                        1 => {}
                        0 => out.push(format!("{}.{} is not the image of any square", r.name, b.name)),
                        k => out.push(format!("{}.{} is the image of {k} squares", r.name, b.name)),
                    }
                }
            }
        }
        out
    }

    /// Copy with square `idx` redirected: its output blue edge is replaced by
    /// another blue edge with the same endpoints. `None` if no such edge exists.
    pub fn redirect_square(&self, idx: usize) -> Option<Skeleton2> {
        let sq = *self.squares.get(idx)?;
        let old = &self.blue[sq.blue_out];
        let replacement = self
            .blue
            .iter()
            .position(|e| e.name != old.name && e.range == old.range && e.source == old.source)?;
        let mut out = self.clone();
        out.squares[idx].blue_out = replacement;
        Some(out)
    }

    /// Colored paths `x1 x2 ...` with `s(x_i) = r(x_{i+1})`, grouped by length.
    fn paths(&self, color: Color, max_len: u32) -> Vec<Vec<(usize, Vec<usize>)>> {
        let list = match color {
            Color::Blue => &self.blue,
            Color::Red => &self.red,
        };
        let mut levels = vec![(0..self.vertices.len()).map(|v| (v, Vec::new())).collect::<Vec<_>>()];
        for len in 1..=max_len as usize {
            let mut next = Vec::new();
            for (v, word) in &levels[len - 1] {
                let end = word.last().map_or(*v, |&x: &usize| list[x].source);
                for (xi, x) in list.iter().enumerate() {
                    if x.range == end {
                        let mut w = word.clone();
                        w.push(xi);
                        next.push((*v, w));
                    }
                }
            }
            next.sort();
            levels.push(next);
        }
        levels
    }
}

type Letter = (Color, usize);

struct NormalForm {
    range: usize,
    blue: Vec<usize>,
    red: Vec<usize>,
}

/// Builds the 2-graph after checking the square table.
pub fn build_2graph(sk: &Skeleton2, depth: &Degree) -> Result<TruncatedKGraph> {
    if let Some(p) = sk.problems().into_iter().next() {
        return Err(KGraphError::InvalidSkeleton(p));
    }
    build_2graph_unchecked(sk, depth)
}

/// Builds from the square table without validating it. Red-blue adjacencies
/// with several preimages use the first square listed; ones with none leave
/// the composite undefined. Intended for exhibiting axiom violations.
pub fn build_2graph_unchecked(sk: &Skeleton2, depth: &Degree) -> Result<TruncatedKGraph> {
    if depth.rank() != 2 {
        return Err(KGraphError::RankMismatch {
            expected: 2,
            found: depth.rank(),
        });
    }
    let blue_paths = sk.paths(Color::Blue, depth.get(0));
    let red_paths = sk.paths(Color::Red, depth.get(1));
    let red_range = |v: usize, w: &[usize]| w.first().map_or(v, |&x| sk.red[x].range);
    let blue_source = |v: usize, w: &[usize]| w.last().map_or(v, |&x| sk.blue[x].source);
    let red_source = |v: usize, w: &[usize]| w.last().map_or(v, |&x| sk.red[x].source);

    let mut b = GraphBuilder::new(depth.clone())?;
    let vertex_ids: Vec<Morph> = sk
        .vertices
        .iter()
        .map(|n| b.add_vertex(n.clone()))
        .collect::<Result<_>>()?;
    let mut forms: Vec<NormalForm> = (0..sk.vertices.len())
        .map(|v| NormalForm {
            range: v,
            blue: Vec::new(),
            red: Vec::new(),
        })
        .collect();
    let mut index: HashMap<(usize, Vec<usize>, Vec<usize>), Morph> = HashMap::new();
    for v in 0..sk.vertices.len() {
        index.insert((v, Vec::new(), Vec::new()), vertex_ids[v]);
    }

    for p in 0..=depth.get(0) as usize {
        for q in 0..=depth.get(1) as usize {
            if p == 0 && q == 0 {
                continue;
            }
            for (bv, bw) in &blue_paths[p] {
                let mid = blue_source(*bv, bw);
                for (rv, rw) in &red_paths[q] {
                    if *rv != mid || red_range(*rv, rw) != mid {
                        continue;
                    }
                    let label = bw
                        .iter()
                        .map(|&x| sk.blue[x].name.as_str())
                        .chain(rw.iter().map(|&x| sk.red[x].name.as_str()))
                        .collect::<Vec<_>>()
                        .join(".");
                    let id = b.add(
                        label,
                        Degree::new(vec![p as u32, q as u32]),
                        vertex_ids[*bv],
                        vertex_ids[red_source(mid, rw)],
                    )?;
                    index.insert((*bv, bw.clone(), rw.clone()), id);
                    forms.push(NormalForm {
                        range: *bv,
                        blue: bw.clone(),
                        red: rw.clone(),
                    });
                }
            }
        }
    }

    let mut inverse: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for sq in &sk.squares {
        inverse
            .entry((sq.red_out, sq.blue_out))
            .or_insert((sq.blue, sq.red));
    }

    b.finish(|x, y| {
        let (fx, fy) = (&forms[x.index()], &forms[y.index()]);
        let mut word: Vec<Letter> = fx
            .blue
            .iter()
            .map(|&i| (Color::Blue, i))
            .chain(fx.red.iter().map(|&i| (Color::Red, i)))
            .chain(fy.blue.iter().map(|&i| (Color::Blue, i)))
            .chain(fy.red.iter().map(|&i| (Color::Red, i)))
            .collect();
        while let Some(pos) = word
            .windows(2)
            .position(|w| w[0].0 == Color::Red && w[1].0 == Color::Blue)
        {
            let (bo, ro) = inverse.get(&(word[pos].1, word[pos + 1].1))?;
            word[pos] = (Color::Blue, *bo);
            word[pos + 1] = (Color::Red, *ro);
        }
        let blue: Vec<usize> = word.iter().filter(|l| l.0 == Color::Blue).map(|l| l.1).collect();
        let red: Vec<usize> = word.iter().filter(|l| l.0 == Color::Red).map(|l| l.1).collect();
        index.get(&(fx.range, blue, red)).copied()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;

    pub(crate) const FREE: &str = "vertex v\nblue f v v\nred g v v\nsquare f g g f\n";
    pub(crate) const SWAP: &str =
        "vertex v\nblue f1 v v\nblue f2 v v\nred g v v\nsquare f1 g g f2\nsquare f2 g g f1\n";

    #[test]
    fn commuting_loops_give_n2() {
        let sk = Skeleton2::parse(FREE).unwrap();
        let g = build_2graph(&sk, &Degree::from([3, 3])).unwrap();
        for (_, count) in g.degree_counts() {
            assert_eq!(count, 1);
        }
        assert_eq!(g.len(), 16);
        assert!(verify_axioms(&g).passed());
    }

    /// Brute-force count of words modulo the squares at degree (1,1):
    /// blue-red words `f_i g`, each identified with exactly one red-blue word.
    #[test]
    fn swap_graph_degree_11_count() {
        let sk = Skeleton2::parse(SWAP).unwrap();
        let mut classes: Vec<Vec<String>> = Vec::new();
        for b in sk.blue() {
            classes.push(vec![format!("{}{}", b.name, "g")]);
        }
        // every red-blue word lands in exactly one class via the squares
        for sq in sk.squares() {
            let rb = format!("g{}", sk.blue()[sq.blue_out].name);
            classes[sq.blue].push(rb);
        }
        let brute = classes.len();
        let g = build_2graph(&sk, &Degree::from([2, 2])).unwrap();
        assert_eq!(g.of_degree(&Degree::from([1, 1])).len(), brute);
        assert_eq!(brute, 2);
        assert!(verify_axioms(&g).passed());
    }

    #[test]
    fn duplicated_square_is_rejected() {
        let text = "vertex v\nblue f1 v v\nblue f2 v v\nred g v v\nsquare f1 g g f1\nsquare f1 g g f2\n";
        let sk = Skeleton2::parse(text).unwrap();
        let err = build_2graph(&sk, &Degree::from([2, 2])).unwrap_err();
        assert!(matches!(err, KGraphError::InvalidSkeleton(ref m) if m.contains("f1.g has 2 squares")), "{err}");
    }

    #[test]
    fn redirected_square_is_witnessed_at_degree_11() {
        let sk = Skeleton2::parse(SWAP).unwrap();
        let bad = sk.redirect_square(0).unwrap();
        assert!(!bad.problems().is_empty());
        assert!(build_2graph(&bad, &Degree::from([2, 2])).is_err());
        let g = build_2graph_unchecked(&bad, &Degree::from([2, 2])).unwrap();
        let report = verify_axioms(&g);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "factorization-existence" && v.witness.iter().any(|w| w.contains("(1,1)"))));
    }

    #[test]
    fn rank_must_be_two() {
        let sk = Skeleton2::parse(FREE).unwrap();
        assert!(build_2graph(&sk, &Degree::from([2])).is_err());
    }
}
