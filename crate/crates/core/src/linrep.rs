//! The linear representation T*_n(K) and its point-line incidence graph.
//!
//! Points are the affine points of PG(n+1, q), in rank order. Lines are the
//! lines of PG(n+1, q) meeting `X0 = 0` in a single point of K, listed by the
//! order of that point in K and then by their least affine point.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::gf::FieldCtx;
use crate::graphauto::ColoredGraph;
use crate::pointsets::{tangent_cover, PointSet, TangentVerdict};
use crate::projspace::{vec_add, vec_scale, ProjPoint, ProjSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinRepError {
    #[error("point set K is empty")]
    EmptySet,
}

/// A line of T*_n(K): its point at infinity and its least affine point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineId {
    pub at_infinity: ProjPoint,
    pub rep: ProjPoint,
}

#[derive(Debug, Clone)]
pub struct LinRep {
    k: PointSet,
    space: ProjSpace,
    points: Vec<ProjPoint>,
    lines: Vec<LineId>,
    line_points: Vec<Vec<u32>>,
    /// `line_of[i][p]`: the line through affine point `p` and the i-th point of K.
    line_of: Vec<Vec<u32>>,
}

impl LinRep {
    pub fn build(k: &PointSet) -> Result<LinRep, LinRepError> {
        if k.is_empty() {
            return Err(LinRepError::EmptySet);
        }
        let space = k.ambient_space();
        let field = space.field().clone();
        let points = space.affine_points();
        let np = points.len();
        let mut lines = Vec::new();
        let mut line_points = Vec::new();
        let mut line_of = Vec::with_capacity(k.len());
        for inf in k.members() {
            let mut assigned = vec![u32::MAX; np];
            for start in 0..np {
                if assigned[start] != u32::MAX {
                    continue;
                }
                let id = lines.len() as u32;
                let base = points[start].coords();
                let mut members: Vec<u32> = field
                    .elements()
                    .map(|t| {
                        let v = vec_add(&field, base, &vec_scale(&field, t, inf.coords()));
                        space.affine_index(&ProjPoint::from_normalized(v)).unwrap() as u32
                    })
                    .collect();
                members.sort_unstable();
                for &m in &members {
                    assigned[m as usize] = id;
                }
                lines.push(LineId { at_infinity: inf.clone(), rep: points[start].clone() });
                line_points.push(members);
            }
            line_of.push(assigned);
        }
        let q = field.q() as usize;
        assert_eq!(lines.len(), k.len() * np / q);
        Ok(LinRep { k: k.clone(), space, points, lines, line_points, line_of })
    }

    pub fn k(&self) -> &PointSet {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.k.n()
    }

    pub fn field(&self) -> &FieldCtx {
        self.space.field()
    }

    /// The ambient space PG(n+1, q).
    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[LineId] {
        &self.lines
    }

    /// Affine point indices on line `l`, increasing.
    pub fn line_points(&self, l: u32) -> &[u32] {
        &self.line_points[l as usize]
    }

    /// Lines through affine point `p`, one per point of K.
    pub fn point_lines(&self, p: u32) -> Vec<u32> {
        self.line_of.iter().map(|m| m[p as usize]).collect()
    }

    /// Index of an affine point.
    pub fn point_index(&self, p: &ProjPoint) -> Option<u32> {
        self.space.affine_index(p).map(|i| i as u32)
    }

    /// The line through affine point `p` with point at infinity `inf`, if `inf ∈ K`.
    pub fn line_through(&self, p: u32, inf: &ProjPoint) -> Option<u32> {
        let i = self.k.members().binary_search(inf).ok()?;
        Some(self.line_of[i][p as usize])
    }

    /// The line joining two distinct affine points, if it belongs to T*.
    pub fn line_joining(&self, a: u32, b: u32) -> Option<u32> {
        if a == b {
            return None;
        }
        let field = self.field();
        let pa = self.points[a as usize].coords();
        let pb = self.points[b as usize].coords();
        let dir: Vec<_> = pa.iter().zip(pb).map(|(x, y)| field.sub(*x, *y)).collect();
        let inf = ProjPoint::new(field, dir).ok()?;
        self.line_through(a, &inf)
    }

    pub fn incidence_graph(&self) -> IncGraph {
        let np = self.num_points() as u32;
        let mut edges = Vec::with_capacity(self.num_lines() * self.field().q() as usize);
        for (l, pts) in self.line_points.iter().enumerate() {
            for &p in pts {
                edges.push((p, np + l as u32));
            }
        }
        let n = self.num_points() + self.num_lines();
        let colors = (0..n).map(|v| (v >= self.num_points()) as u32).collect();
        IncGraph {
            graph: ColoredGraph::new(n, &edges, colors).unwrap(),
            num_points: self.num_points(),
            num_lines: self.num_lines(),
        }
    }

    /// The vertex-index to geometric-object map written next to exported graphs.
    pub fn sidecar(&self) -> Sidecar {
        let mut vertices: Vec<VertexObject> =
            self.points.iter().map(|p| VertexObject::Point { coords: p.indices() }).collect();
        vertices.extend(
            self.lines
                .iter()
                .map(|l| VertexObject::Line { at_infinity: l.at_infinity.indices(), rep: l.rep.indices() }),
        );
        Sidecar {
            n: self.n(),
            q: self.field().q(),
            k: self.k.members().iter().map(ProjPoint::indices).collect(),
            num_points: self.num_points(),
            num_lines: self.num_lines(),
            vertices,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VertexObject {
    Point { coords: Vec<u32> },
    Line { at_infinity: Vec<u32>, rep: Vec<u32> },
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Sidecar {
    pub n: usize,
    pub q: u32,
    pub k: Vec<Vec<u32>>,
    pub num_points: usize,
    pub num_lines: usize,
    pub vertices: Vec<VertexObject>,
}

/// The incidence graph: vertices `0..|P|` are points, then the lines.
#[derive(Debug, Clone)]
pub struct IncGraph {
    graph: ColoredGraph,
    num_points: usize,
    num_lines: usize,
}

impl IncGraph {
    /// Points coloured 0 and lines coloured 1.
    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    /// The graph for automorphism computations. With `allow_class_swap` both
    /// classes share one colour, so maps exchanging points and lines count.
    pub fn colored(&self, allow_class_swap: bool) -> ColoredGraph {
        if allow_class_swap {
            self.graph.with_colors(vec![0; self.graph.num_vertices()]).unwrap()
        } else {
            self.graph.clone()
        }
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn is_point(&self, v: u32) -> bool {
        (v as usize) < self.num_points
    }

    pub fn line_vertex(&self, l: u32) -> u32 {
        self.num_points as u32 + l
    }

    pub fn to_dimacs(&self) -> String {
        let edges = self.graph.edges();
        let mut out = format!("p edge {} {}\n", self.graph.num_vertices(), edges.len());
        for (a, b) in edges {
            out.push_str(&format!("e {} {}\n", a + 1, b + 1));
        }
        out
    }
}

/// Distance from `v` to every vertex (`usize::MAX` when unreachable).
pub fn distances(g: &ColoredGraph, v: u32) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.num_vertices()];
    dist[v as usize] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y as usize] == usize::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// The vertices at distance exactly `i` from `v`, increasing.
pub fn ball(g: &ColoredGraph, v: u32, i: usize) -> Vec<u32> {
    distances(g, v).iter().enumerate().filter(|(_, &d)| d == i).map(|(x, _)| x as u32).collect()
}

/// A vertex at distance 4 from `v` whose neighbours all lie at distance 3.
pub fn nvt_witness(g: &ColoredGraph, v: u32) -> Option<u32> {
    let dist = distances(g, v);
    (0..g.num_vertices() as u32)
        .find(|&x| dist[x as usize] == 4 && g.neighbors(x).iter().all(|&y| dist[y as usize] == 3))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NvtReport {
    /// Whether every point of H∞ outside K lies on a tangent line.
    pub tangent_cover: bool,
    /// Per line, a witness vertex at distance 4 with all neighbours at distance 3.
    pub line_witnesses: Vec<Option<u32>>,
    /// Point vertices that nevertheless have such a witness.
    pub points_with_witness: Vec<u32>,
}

impl NvtReport {
    pub fn certificate_holds(&self) -> bool {
        self.line_witnesses.iter().all(Option::is_some) && self.points_with_witness.is_empty()
    }

    /// The certificate is meaningful only when the tangent cover holds.
    pub fn applicable(&self) -> bool {
        self.tangent_cover
    }
}

/// Checks the distance-4 certificate that separates lines from points.
pub fn nvt_check(t: &LinRep) -> NvtReport {
    let inc = t.incidence_graph();
    let g = inc.graph();
    let line_witnesses = (0..t.num_lines() as u32).map(|l| nvt_witness(g, inc.line_vertex(l))).collect();
    let points_with_witness = (0..t.num_points() as u32).filter(|&p| nvt_witness(g, p).is_some()).collect();
    NvtReport { tangent_cover: tangent_cover(t.k()) == TangentVerdict::Holds, line_witnesses, points_with_witness }
}
