//! Automorphism groups, canonical labelling and isomorphism of vertex-coloured
//! graphs by individualization and refinement.
//!
//! The search keeps an ordered partition of the vertices. Refinement splits
//! cells by neighbour counts until the partition is equitable and records a
//! trace of every split; individualizing one vertex of a non-singleton cell and
//! refining again descends one level of the search tree. Leaves are discrete
//! partitions, that is, orderings of the vertices.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::permgrp::{Perm, PermGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: u32, n: usize },
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("color array has length {got}, expected {expected}")]
    ColorLength { expected: usize, got: usize },
    #[error("graph6: {0}")]
    Graph6(String),
}

/// An undirected, loop-free graph with a colour per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    adj: Vec<Vec<u32>>,
    colors: Vec<u32>,
}

impl ColoredGraph {
    /// Builds a graph from an edge list; duplicate edges are merged.
    pub fn new(n: usize, edges: &[(u32, u32)], colors: Vec<u32>) -> Result<Self, GraphError> {
        if colors.len() != n {
            return Err(GraphError::ColorLength { expected: n, got: colors.len() });
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v as usize >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ColoredGraph { adj, colors })
    }

    /// Builds a graph with all vertices in one colour.
    pub fn uncolored(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        ColoredGraph::new(n, edges, vec![0; n])
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn with_colors(&self, colors: Vec<u32>) -> Result<Self, GraphError> {
        if colors.len() != self.adj.len() {
            return Err(GraphError::ColorLength { expected: self.adj.len(), got: colors.len() });
        }
        Ok(ColoredGraph { adj: self.adj.clone(), colors })
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, in increasing order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if (a as u32) < b {
                    out.push((a as u32, b));
                }
            }
        }
        out
    }

    /// The graph with vertex `v` renamed to `sigma(v)`.
    pub fn relabel(&self, sigma: &Perm) -> ColoredGraph {
        let n = self.adj.len();
        let mut adj = vec![Vec::new(); n];
        let mut colors = vec![0; n];
        for v in 0..n {
            let sv = sigma.apply(v as u32) as usize;
            colors[sv] = self.colors[v];
            adj[sv] = self.adj[v].iter().map(|&u| sigma.apply(u)).collect();
            adj[sv].sort_unstable();
        }
        ColoredGraph { adj, colors }
    }

    /// Whether `p` preserves colours and the edge set.
    pub fn is_automorphism(&self, p: &Perm) -> bool {
        p.degree() == self.adj.len()
            && (0..self.adj.len() as u32).all(|v| {
                let pv = p.apply(v);
                self.colors[v as usize] == self.colors[pv as usize]
                    && self.degree(v) == self.degree(pv)
                    && self.adj[v as usize].iter().all(|&u| self.has_edge(pv, p.apply(u)))
            })
    }

    /// Encodes the underlying uncoloured graph in graph6.
    pub fn to_graph6(&self) -> String {
        let n = self.adj.len();
        let mut out = Vec::new();
        if n < 63 {
            out.push(n as u8 + 63);
        } else if n < 258048 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.extend([126, 126]);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut bits = 0;
        for j in 1..n as u32 {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                bits += 1;
                if bits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    bits = 0;
                }
            }
        }
        if bits > 0 {
            out.push((acc << (6 - bits)) + 63);
        }
        String::from_utf8(out).unwrap()
    }

    /// Decodes a graph6 string; all vertices get colour 0.
    pub fn from_graph6(s: &str) -> Result<Self, GraphError> {
        let s = s.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let bad = |m: &str| GraphError::Graph6(m.to_string());
        if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(bad("byte outside the printable range 63..=126"));
        }
        let (n, rest) = match bytes {
            [126, 126, r @ ..] if r.len() >= 6 => {
                (r[..6].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize), &r[6..])
            }
            [126, r @ ..] if r.len() >= 3 => {
                (r[..3].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize), &r[3..])
            }
            [b, r @ ..] if *b < 126 => ((b - 63) as usize, r),
            _ => return Err(bad("truncated header")),
        };
        let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if rest.len() != needed {
            return Err(bad(&format!("expected {needed} data bytes, got {}", rest.len())));
        }
        let mut edges = Vec::new();
        let mut k = 0usize;
        for j in 1..n as u32 {
            for i in 0..j {
                let byte = rest[k / 6] - 63;
                if byte >> (5 - k % 6) & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        ColoredGraph::uncolored(n, &edges)
    }
}

fn mix(mut h: u64, x: u64) -> u64 {
    h ^= x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb)
}

/// Receives trace elements, optionally comparing them against a reference.
struct Trace<'a> {
    out: Vec<u64>,
    reference: Option<&'a [u64]>,
    /// First position where `out` and `reference` disagree, with the ordering there.
    verdict: Ordering,
    abort_when: fn(Ordering) -> bool,
}

impl<'a> Trace<'a> {
    fn free() -> Self {
        Trace { out: Vec::new(), reference: None, verdict: Ordering::Equal, abort_when: |_| false }
    }

    fn against(reference: &'a [u64], abort_when: fn(Ordering) -> bool) -> Self {
        Trace { out: Vec::new(), reference: Some(reference), verdict: Ordering::Equal, abort_when }
    }

    /// Appends an element; returns false when the caller should abort.
    fn push(&mut self, x: u64) -> bool {
        let i = self.out.len();
        self.out.push(x);
        if let (Some(r), Ordering::Equal) = (self.reference, self.verdict) {
            self.verdict = match r.get(i) {
                Some(y) => x.cmp(y),
                None => Ordering::Greater,
            };
            if (self.abort_when)(self.verdict) {
                return false;
            }
        }
        true
    }

    /// Closes the trace; returns false when the caller should abort.
    fn finish(&mut self) -> bool {
        if let (Some(r), Ordering::Equal) = (self.reference, self.verdict) {
            if r.len() > self.out.len() {
                self.verdict = Ordering::Less;
                return !(self.abort_when)(self.verdict);
            }
        }
        true
    }
}

/// Ordered partition of the vertex set with cells stored as ranges of `lab`.
#[derive(Clone, Debug)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    /// Start of the cell containing each vertex.
    cell_of: Vec<u32>,
    /// End (exclusive) of the cell starting at each position; meaningful only at starts.
    cell_end: Vec<u32>,
    ncells: usize,
}

impl Partition {
    fn from_cells(n: usize, cells: &[Vec<u32>]) -> Self {
        let mut p = Partition {
            lab: Vec::with_capacity(n),
            pos: vec![0; n],
            cell_of: vec![0; n],
            cell_end: vec![0; n],
            ncells: 0,
        };
        for cell in cells.iter().filter(|c| !c.is_empty()) {
            let start = p.lab.len() as u32;
            for &v in cell {
                p.pos[v as usize] = p.lab.len() as u32;
                p.cell_of[v as usize] = start;
                p.lab.push(v);
            }
            p.cell_end[start as usize] = p.lab.len() as u32;
            p.ncells += 1;
        }
        p
    }

    fn from_colors(colors: &[u32]) -> Self {
        let mut order: Vec<u32> = (0..colors.len() as u32).collect();
        order.sort_by_key(|&v| (colors[v as usize], v));
        let mut cells: Vec<Vec<u32>> = Vec::new();
        for v in order {
            match cells.last_mut() {
                Some(c) if colors[c[0] as usize] == colors[v as usize] => c.push(v),
                _ => cells.push(vec![v]),
            }
        }
        Partition::from_cells(colors.len(), &cells)
    }

    fn is_discrete(&self) -> bool {
        self.ncells == self.lab.len()
    }

    fn cells(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.ncells);
        let mut i = 0;
        while i < self.lab.len() {
            let end = self.cell_end[i] as usize;
            out.push(self.lab[i..end].to_vec());
            i = end;
        }
        out
    }

    fn swap_positions(&mut self, a: usize, b: usize) {
        self.lab.swap(a, b);
        self.pos[self.lab[a] as usize] = a as u32;
        self.pos[self.lab[b] as usize] = b as u32;
    }

    /// Start of the first smallest cell with more than one vertex.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i < self.lab.len() {
            let end = self.cell_end[i] as usize;
            let size = end - i;
            if size > 1 && best.is_none_or(|(_, s)| size < s) {
                best = Some((i, size));
                if size == 2 {
                    break;
                }
            }
            i = end;
        }
        best.map(|(start, _)| start)
    }

    /// Splits `v` off to the front of its cell; returns the start of the singleton.
    fn individualize(&mut self, v: u32) -> usize {
        let c = self.cell_of[v as usize] as usize;
        let end = self.cell_end[c] as usize;
        self.swap_positions(c, self.pos[v as usize] as usize);
        if end - c > 1 {
            self.cell_end[c] = c as u32 + 1;
            self.cell_end[c + 1] = end as u32;
            for i in c + 1..end {
                self.cell_of[self.lab[i] as usize] = c as u32 + 1;
            }
            self.ncells += 1;
        }
        c
    }

    /// Refines to the coarsest equitable partition finer than the current one,
    /// processing the cells in `queue` as splitters first. Returns false if the
    /// trace comparison asked to abort.
    fn refine(&mut self, g: &ColoredGraph, queue: &mut VecDeque<u32>, trace: &mut Trace) -> bool {
        let n = self.lab.len();
        let mut in_queue = vec![false; n];
        for &c in queue.iter() {
            in_queue[c as usize] = true;
        }
        let mut count = vec![0u32; n];
        let mut touched: Vec<u32> = Vec::new();
        while let Some(sp) = queue.pop_front() {
            if self.is_discrete() {
                break;
            }
            in_queue[sp as usize] = false;
            let sp_end = self.cell_end[sp as usize] as usize;
            touched.clear();
            for i in sp as usize..sp_end {
                for &v in &g.adj[self.lab[i] as usize] {
                    if count[v as usize] == 0 {
                        touched.push(v);
                    }
                    count[v as usize] += 1;
                }
            }
            touched.sort_unstable_by_key(|&v| (self.cell_of[v as usize], count[v as usize]));
            let mut k = 0;
            while k < touched.len() {
                let c = self.cell_of[touched[k] as usize] as usize;
                let mut k2 = k;
                while k2 < touched.len() && self.cell_of[touched[k2] as usize] as usize == c {
                    k2 += 1;
                }
                let group = &touched[k..k2];
                k = k2;
                let end = self.cell_end[c] as usize;
                let size = end - c;
                let uniform = count[group[0] as usize] == count[group[group.len() - 1] as usize];
                if size == 1 || (group.len() == size && uniform) {
                    continue;
                }
                // move touched vertices to the back of the cell, ascending by count
                let mut back = end;
                for &v in group.iter().rev() {
                    back -= 1;
                    self.swap_positions(back, self.pos[v as usize] as usize);
                }
                let mut starts: Vec<(usize, u32)> = Vec::new();
                if back > c {
                    starts.push((c, 0));
                }
                for i in back..end {
                    let cnt = count[self.lab[i] as usize];
                    if i == back || cnt != count[self.lab[i - 1] as usize] {
                        starts.push((i, cnt));
                    }
                }
                let mut h = mix(c as u64, sp as u64);
                let mut sizes = Vec::with_capacity(starts.len());
                for (j, &(s, cnt)) in starts.iter().enumerate() {
                    let e = starts.get(j + 1).map_or(end, |&(s2, _)| s2);
                    self.cell_end[s] = e as u32;
                    if s != c {
                        for i in s..e {
                            self.cell_of[self.lab[i] as usize] = s as u32;
                        }
                    }
                    sizes.push((s, e - s));
                    h = mix(h, ((cnt as u64) << 32) | (e - s) as u64);
                }
                self.ncells += starts.len() - 1;
                if in_queue[c] {
                    for &(s, _) in &sizes[1..] {
                        queue.push_back(s as u32);
                        in_queue[s] = true;
                    }
                } else {
                    let largest =
                        sizes.iter().enumerate().max_by(|a, b| a.1 .1.cmp(&b.1 .1).then(b.0.cmp(&a.0))).unwrap().0;
                    for (j, &(s, _)) in sizes.iter().enumerate() {
                        if j != largest {
                            queue.push_back(s as u32);
                            in_queue[s] = true;
                        }
                    }
                }
                if !trace.push(h) {
                    return false;
                }
            }
            for &v in &touched {
                count[v as usize] = 0;
            }
        }
        queue.clear();
        trace.push(self.ncells as u64) && trace.finish()
    }
}

/// The coarsest equitable partition refining `cells` (an ordered partition of
/// the vertices). Cells of the result are listed in their canonical order.
pub fn refine(g: &ColoredGraph, cells: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut p = Partition::from_cells(g.num_vertices(), cells);
    let mut queue: VecDeque<u32> = starts(&p).collect();
    p.refine(g, &mut queue, &mut Trace::free());
    p.cells()
}

fn starts(p: &Partition) -> impl Iterator<Item = u32> + '_ {
    let mut i = 0usize;
    std::iter::from_fn(move || {
        (i < p.lab.len()).then(|| {
            let s = i;
            i = p.cell_end[i] as usize;
            s as u32
        })
    })
}

/// Refinement from the colour partition, i.e. the root of the search tree.
fn root_partition(g: &ColoredGraph, trace: &mut Trace) -> Partition {
    let mut p = Partition::from_colors(&g.colors);
    let mut queue: VecDeque<u32> = starts(&p).collect();
    p.refine(g, &mut queue, trace);
    p
}

/// Individualizes `v` and refines, comparing against `reference` if given.
fn child(g: &ColoredGraph, node: &Partition, v: u32, trace: &mut Trace) -> Option<Partition> {
    let mut p = node.clone();
    let c = p.individualize(v);
    if !trace.push(mix(c as u64, (node.cell_end[c] as usize - c) as u64)) {
        return None;
    }
    let mut queue = VecDeque::from([c as u32]);
    p.refine(g, &mut queue, trace).then_some(p)
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let next = self.0[y as usize];
            self.0[y as usize] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }

    fn absorb(&mut self, p: &Perm) {
        for (v, &w) in p.images().iter().enumerate() {
            self.union(v as u32, w);
        }
    }
}

/// Result of an automorphism group computation.
#[derive(Debug, Clone)]
pub struct Automorphisms {
    /// Verified generators of the full colour-preserving automorphism group.
    pub generators: Vec<Perm>,
    /// Order as the product of basic orbit lengths along the first search path.
    pub order: BigUint,
    /// Orbit lengths along the first path, one per level.
    pub orbit_lengths: Vec<usize>,
    pub group: PermGroup,
}

struct FirstPath {
    nodes: Vec<Partition>,
    traces: Vec<Vec<u64>>,
    targets: Vec<usize>,
    chosen: Vec<u32>,
    leaf: Vec<u32>,
}

fn first_path(g: &ColoredGraph) -> FirstPath {
    let mut trace = Trace::free();
    let mut node = root_partition(g, &mut trace);
    let mut fp =
        FirstPath { nodes: Vec::new(), traces: Vec::new(), targets: Vec::new(), chosen: Vec::new(), leaf: Vec::new() };
    while let Some(t) = node.target_cell() {
        let v = node.lab[t];
        let mut tr = Trace::free();
        let next = child(g, &node, v, &mut tr).unwrap();
        fp.nodes.push(node);
        fp.targets.push(t);
        fp.chosen.push(v);
        fp.traces.push(tr.out);
        node = next;
    }
    fp.leaf = node.lab;
    fp
}

/// Searches the subtree below `node` (at `level`) for a leaf whose trace
/// sequence matches the first path and whose induced map is an automorphism.
fn find_matching_leaf(g: &ColoredGraph, fp: &FirstPath, node: &Partition, level: usize) -> Option<Perm> {
    let Some(t) = node.target_cell() else {
        let n = g.num_vertices();
        let mut images = vec![0u32; n];
        for i in 0..n {
            images[fp.leaf[i] as usize] = node.lab[i];
        }
        let p = Perm::from_images_unchecked(images);
        return g.is_automorphism(&p).then_some(p);
    };
    if level >= fp.traces.len() || t != fp.targets[level] {
        return None;
    }
    let end = node.cell_end[t] as usize;
    for i in t..end {
        let w = node.lab[i];
        let mut tr = Trace::against(&fp.traces[level], |o| o != Ordering::Equal);
        if let Some(next) = child(g, node, w, &mut tr) {
            if tr.verdict == Ordering::Equal {
                if let Some(p) = find_matching_leaf(g, fp, &next, level + 1) {
                    return Some(p);
                }
            }
        }
    }
    None
}

/// Computes generators and the exact order of the colour-preserving
/// automorphism group.
pub fn automorphism_group(g: &ColoredGraph) -> Automorphisms {
    let n = g.num_vertices();
    let fp = first_path(g);
    let mut orbits = UnionFind::new(n);
    let mut generators: Vec<Perm> = Vec::new();
    let mut orbit_lengths = vec![0usize; fp.nodes.len()];
    for level in (0..fp.nodes.len()).rev() {
        let node = &fp.nodes[level];
        let t = fp.targets[level];
        let end = node.cell_end[t] as usize;
        let v = fp.chosen[level];
        let mut failed: Vec<u32> = Vec::new();
        for i in t..end {
            let w = node.lab[i];
            if w == v || orbits.find(w) == orbits.find(v) {
                continue;
            }
            let rw = orbits.find(w);
            if failed.iter().any(|&f| orbits.find(f) == rw) {
                continue;
            }
            let mut tr = Trace::against(&fp.traces[level], |o| o != Ordering::Equal);
            let found = child(g, node, w, &mut tr)
                .filter(|_| tr.verdict == Ordering::Equal)
                .and_then(|next| find_matching_leaf(g, &fp, &next, level + 1));
            match found {
                Some(p) => {
                    orbits.absorb(&p);
                    generators.push(p);
                }
                None => failed.push(w),
            }
        }
        let rv = orbits.find(v);
        orbit_lengths[level] = (t..end).filter(|&i| orbits.find(node.lab[i]) == rv).count();
    }
    assert!(generators.iter().all(|p| g.is_automorphism(p)), "search produced a non-automorphism");
    let order = orbit_lengths.iter().fold(BigUint::one(), |acc, &k| acc * BigUint::from(k));
    let group = PermGroup::new(n, generators.clone()).unwrap();
    Automorphisms { generators, order, orbit_lengths, group }
}

/// A canonical relabelling of a graph.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// The relabelled graph; equal for isomorphic inputs.
    pub graph: ColoredGraph,
    /// `labeling[i]` is the original vertex that receives label `i`.
    pub labeling: Vec<u32>,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl CanonicalForm {
    pub fn to_graph6(&self) -> String {
        self.graph.to_graph6()
    }
}

struct Best {
    traces: Vec<Vec<u64>>,
    code: (Vec<u32>, Vec<(u32, u32)>),
    lab: Vec<u32>,
}

fn leaf_code(g: &ColoredGraph, lab: &[u32]) -> (Vec<u32>, Vec<(u32, u32)>) {
    let n = lab.len();
    let mut pos = vec![0u32; n];
    for (i, &v) in lab.iter().enumerate() {
        pos[v as usize] = i as u32;
    }
    let colors = lab.iter().map(|&v| g.colors[v as usize]).collect();
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (pos[a as usize], pos[b as usize]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    (colors, edges)
}

struct CanonSearch<'a> {
    g: &'a ColoredGraph,
    aut: &'a PermGroup,
    best: Option<Best>,
}

impl CanonSearch<'_> {
    /// `ahead` is true once this path's traces already exceed the best path's.
    fn visit(&mut self, node: &Partition, path: &mut Vec<u32>, traces: &mut Vec<Vec<u64>>, ahead: bool) {
        let Some(t) = node.target_cell() else {
            let code = leaf_code(self.g, &node.lab);
            let better = match &self.best {
                None => true,
                Some(b) => {
                    ahead || (traces.as_slice(), &code).cmp(&(b.traces.as_slice(), &b.code)) == Ordering::Greater
                }
            };
            if better {
                self.best = Some(Best { traces: traces.clone(), code, lab: node.lab.clone() });
            }
            return;
        };
        let stab = self.aut.pointwise_stabilizer(path);
        let end = node.cell_end[t] as usize;
        let mut seen = vec![false; self.g.num_vertices()];
        for i in t..end {
            let w = node.lab[i];
            if seen[w as usize] {
                continue;
            }
            for x in stab.orbit(w) {
                seen[x as usize] = true;
            }
            let level = traces.len();
            let reference = (!ahead).then(|| self.best.as_ref().and_then(|b| b.traces.get(level).cloned())).flatten();
            let mut tr = match &reference {
                Some(r) => Trace::against(r, |o| o == Ordering::Less),
                None => Trace::free(),
            };
            let Some(next) = child(self.g, node, w, &mut tr) else { continue };
            let now_ahead = ahead
                || self.best.is_none()
                || match &reference {
                    Some(_) => tr.verdict == Ordering::Greater,
                    None => true,
                };
            traces.push(tr.out);
            path.push(w);
            self.visit(&next, path, traces, now_ahead);
            path.pop();
            traces.pop();
        }
    }
}

/// Computes a canonical form using a known automorphism group for pruning.
pub fn canonical_form_with(g: &ColoredGraph, aut: &PermGroup) -> CanonicalForm {
    let mut root_trace = Trace::free();
    let root = root_partition(g, &mut root_trace);
    let mut search = CanonSearch { g, aut, best: None };
    let mut traces = vec![root_trace.out];
    search.visit(&root, &mut Vec::new(), &mut traces, false);
    let best = search.best.unwrap();
    let n = g.num_vertices();
    let mut images = vec![0u32; n];
    for (i, &v) in best.lab.iter().enumerate() {
        images[v as usize] = i as u32;
    }
    CanonicalForm { graph: g.relabel(&Perm::from_images_unchecked(images)), labeling: best.lab }
}

pub fn canonical_form(g: &ColoredGraph) -> CanonicalForm {
    let aut = automorphism_group(g);
    canonical_form_with(g, &aut.group)
}

/// Decides isomorphism; when isomorphic, returns the map `v ↦ image of v`
/// carrying `g1` onto `g2`.
pub fn are_isomorphic(g1: &ColoredGraph, g2: &ColoredGraph) -> Option<Perm> {
    if g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return None;
    }
    let mut c1 = g1.colors.clone();
    let mut c2 = g2.colors.clone();
    c1.sort_unstable();
    c2.sort_unstable();
    if c1 != c2 {
        return None;
    }
    let f1 = canonical_form(g1);
    let f2 = canonical_form(g2);
    if f1 != f2 {
        return None;
    }
    let mut images = vec![0u32; g1.num_vertices()];
    for (i, &v) in f1.labeling.iter().enumerate() {
        images[v as usize] = f2.labeling[i];
    }
    Some(Perm::from_images_unchecked(images))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn cycle(n: u32) -> ColoredGraph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        ColoredGraph::uncolored(n as usize, &edges).unwrap()
    }

    pub(crate) fn petersen() -> ColoredGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        ColoredGraph::uncolored(10, &e).unwrap()
    }

    /// Counts automorphisms by backtracking over colour- and degree-compatible
    /// partial maps that respect adjacency and non-adjacency.
    pub(crate) fn brute_force_aut_count(g: &ColoredGraph) -> u64 {
        let n = g.num_vertices();
        // order vertices so each one (after the first of its component) has an earlier neighbour
        let mut order = Vec::new();
        let mut seen = vec![false; n];
        for s in 0..n as u32 {
            if seen[s as usize] {
                continue;
            }
            seen[s as usize] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &u in g.neighbors(v) {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        fn rec(g: &ColoredGraph, order: &[u32], k: usize, map: &mut Vec<Option<u32>>, used: &mut Vec<bool>) -> u64 {
            if k == order.len() {
                return 1;
            }
            let v = order[k];
            let anchor = g.neighbors(v).iter().find(|&&u| map[u as usize].is_some());
            let candidates: Vec<u32> = match anchor {
                Some(&u) => g.neighbors(map[u as usize].unwrap()).to_vec(),
                None => (0..g.num_vertices() as u32).collect(),
            };
            let mut total = 0;
            for c in candidates {
                if used[c as usize] || g.colors()[c as usize] != g.colors()[v as usize] || g.degree(c) != g.degree(v) {
                    continue;
                }
                let ok = order[..k].iter().all(|&w| g.has_edge(v, w) == g.has_edge(c, map[w as usize].unwrap()));
                if ok {
                    map[v as usize] = Some(c);
                    used[c as usize] = true;
                    total += rec(g, order, k + 1, map, used);
                    used[c as usize] = false;
                    map[v as usize] = None;
                }
            }
            total
        }
        rec(g, &order, 0, &mut vec![None; n], &mut vec![false; n])
    }

    fn random_relabel(g: &ColoredGraph, rng: &mut ChaCha8Rng) -> (ColoredGraph, Perm) {
        let mut images: Vec<u32> = (0..g.num_vertices() as u32).collect();
        images.shuffle(rng);
        let p = Perm::from_images(images).unwrap();
        (g.relabel(&p), p)
    }

    fn test_graphs() -> Vec<ColoredGraph> {
        let path3 = ColoredGraph::uncolored(3, &[(0, 1), (1, 2)]).unwrap();
        let triangles = ColoredGraph::uncolored(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let k33: Vec<(u32, u32)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        let colored_c6 = cycle(6).with_colors(vec![0, 1, 0, 1, 0, 1]).unwrap();
        let mut cube = Vec::new();
        for v in 0u32..8 {
            for b in 0..3 {
                let u = v ^ (1 << b);
                if v < u {
                    cube.push((v, u));
                }
            }
        }
        vec![
            cycle(4),
            cycle(6),
            cycle(7),
            path3,
            triangles,
            petersen(),
            ColoredGraph::uncolored(6, &k33).unwrap(),
            colored_c6,
            ColoredGraph::uncolored(8, &cube).unwrap(),
            ColoredGraph::uncolored(5, &[]).unwrap(),
        ]
    }

    #[test]
    fn refinement_examples() {
        let path3 = ColoredGraph::uncolored(3, &[(0, 1), (1, 2)]).unwrap();
        let cells = refine(&path3, &[vec![0, 1, 2]]);
        assert_eq!(cells.len(), 2);
        assert!(cells.contains(&vec![1]));
        let pet = petersen();
        assert_eq!(refine(&pet, &[(0..10).collect()]).len(), 1);
        // biregular bipartite graph with degrees 3 and 2
        let edges: Vec<(u32, u32)> = (0..2).flat_map(|a| (2..5).map(move |b| (a, b))).collect();
        let g = ColoredGraph::uncolored(5, &edges).unwrap();
        let cells = refine(&g, &[(0..5).collect()]);
        assert_eq!(cells.len(), 2);
        assert!(cells.contains(&vec![0, 1]) || cells.contains(&vec![1, 0]));
    }

    #[test]
    fn refined_partitions_are_equitable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in test_graphs() {
            for _ in 0..5 {
                let (h, _) = random_relabel(&g, &mut rng);
                let cells = refine(&h, &[(0..h.num_vertices() as u32).collect()]);
                let mut cell_of = vec![0; h.num_vertices()];
                for (i, c) in cells.iter().enumerate() {
                    for &v in c {
                        cell_of[v as usize] = i;
                    }
                }
                for c in &cells {
                    let profile = |v: u32| {
                        let mut k = vec![0; cells.len()];
                        for &u in h.neighbors(v) {
                            k[cell_of[u as usize]] += 1;
                        }
                        k
                    };
                    assert!(c.iter().all(|&v| profile(v) == profile(c[0])));
                }
            }
        }
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(automorphism_group(&cycle(4)).order, BigUint::from(8u32));
        assert_eq!(automorphism_group(&petersen()).order, BigUint::from(120u32));
        assert_eq!(brute_force_aut_count(&petersen()), 120);
        let empty = ColoredGraph::uncolored(5, &[]).unwrap();
        assert_eq!(automorphism_group(&empty).order, BigUint::from(120u32));
    }

    #[test]
    fn orders_match_brute_force_and_schreier_sims() {
        for g in test_graphs() {
            let a = automorphism_group(&g);
            assert_eq!(a.order, BigUint::from(brute_force_aut_count(&g)), "{g:?}");
            assert_eq!(a.group.order(), a.order);
            assert!(a.generators.iter().all(|p| g.is_automorphism(p)));
        }
    }

    #[test]
    fn order_is_relabelling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in test_graphs() {
            let base = automorphism_group(&g).order;
            for _ in 0..5 {
                let (h, _) = random_relabel(&g, &mut rng);
                assert_eq!(automorphism_group(&h).order, base);
            }
        }
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in test_graphs() {
            let cf = canonical_form(&g);
            for _ in 0..20 {
                let (h, _) = random_relabel(&g, &mut rng);
                assert_eq!(canonical_form(&h), cf);
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let triangles = ColoredGraph::uncolored(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(are_isomorphic(&triangles, &cycle(6)).is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in test_graphs() {
            let (h, _) = random_relabel(&g, &mut rng);
            let m = are_isomorphic(&g, &h).unwrap();
            assert_eq!(g.relabel(&m), h);
        }
        let c6 = cycle(6);
        let colored = c6.with_colors(vec![0, 1, 0, 1, 0, 1]).unwrap();
        assert!(are_isomorphic(&c6, &colored).is_none());
    }

    #[test]
    fn graph6_roundtrip() {
        assert_eq!(
            ColoredGraph::from_graph6("Bw").unwrap(),
            ColoredGraph::uncolored(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
        );
        assert_eq!(petersen().to_graph6(), petersen().to_graph6());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in test_graphs() {
            assert_eq!(
                ColoredGraph::from_graph6(&g.to_graph6()).unwrap(),
                g.with_colors(vec![0; g.num_vertices()]).unwrap()
            );
        }
        let big = cycle(100);
        let (big, _) = random_relabel(&big, &mut rng);
        assert!(big.to_graph6().starts_with('~'));
        assert_eq!(ColoredGraph::from_graph6(&big.to_graph6()).unwrap(), big);
        assert!(ColoredGraph::from_graph6("A").is_err());
        assert!(ColoredGraph::from_graph6("B\u{1}").is_err());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(ColoredGraph::uncolored(3, &[(0, 0)]), Err(GraphError::Loop(0)));
        assert!(matches!(ColoredGraph::uncolored(3, &[(0, 5)]), Err(GraphError::VertexOutOfRange { .. })));
        assert!(matches!(ColoredGraph::new(3, &[], vec![0]), Err(GraphError::ColorLength { .. })));
    }
}
