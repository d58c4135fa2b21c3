//! Collineations versus automorphisms of T*_n(K).
//!
//! A [`GeomAut`] is a pair of permutations on the points and lines of a
//! linear representation that preserves incidence. Geometric ones are induced
//! by collineations of the ambient PG(n+1, q) fixing `X0 = 0` and K; this
//! module computes that subgroup, decides whether a given automorphism is
//! geometric, and builds the explicit non-geometric examples.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{field_of_order, FieldCtx, FieldElement};
use crate::graphauto::{automorphism_group, Automorphisms, ColoredGraph};
use crate::linrep::LinRep;
use crate::permgrp::{Perm, PermGroup};
use crate::pointsets::{construct_named, PointSet};
use crate::projspace::{persp_generators, vec_add, ProjPoint, ProjSpace, SemilinearMap, Subspace, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomAutError {
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("vertex permutation exchanges points and lines")]
    SwapsClasses,
    #[error("collineation does not stabilize the hyperplane X0 = 0")]
    MovesHyperplane,
    #[error("collineation does not stabilize K")]
    MovesK,
    #[error("construction needs K = {0}")]
    WrongSet(&'static str),
    #[error("construction needs q even, got q = {0}")]
    OddQ(u32),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("map does not fix the given point")]
    NotFixed,
}

/// An incidence-preserving pair of permutations on the points and lines of T*.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeomAut {
    points: Perm,
    lines: Perm,
}

/// JSON form: the two image arrays.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeomAutFile {
    pub points: Vec<u32>,
    pub lines: Vec<u32>,
}

impl GeomAut {
    pub fn identity(t: &LinRep) -> Self {
        GeomAut { points: Perm::identity(t.num_points()), lines: Perm::identity(t.num_lines()) }
    }

    /// Derives the line action from a permutation of the affine points.
    pub fn from_point_map(t: &LinRep, points: Perm) -> Result<Self, GeomAutError> {
        if points.degree() != t.num_points() {
            return Err(GeomAutError::NotAutomorphism("wrong number of points".into()));
        }
        let mut images = Vec::with_capacity(t.num_lines());
        for l in 0..t.num_lines() as u32 {
            let pts = t.line_points(l);
            let (a, b) = (points.apply(pts[0]), points.apply(pts[1]));
            let m = t
                .line_joining(a, b)
                .ok_or_else(|| GeomAutError::NotAutomorphism(format!("line {l} is not mapped to a line")))?;
            let target = t.line_points(m);
            if !pts.iter().all(|&p| target.binary_search(&points.apply(p)).is_ok()) {
                return Err(GeomAutError::NotAutomorphism(format!(
                    "points of line {l} are not collinear after the map"
                )));
            }
            images.push(m);
        }
        let lines = Perm::from_images(images)
            .map_err(|_| GeomAutError::NotAutomorphism("line map is not a bijection".into()))?;
        Ok(GeomAut { points, lines })
    }

    /// Splits a class-preserving permutation of the incidence graph's vertices.
    pub fn from_vertex_perm(t: &LinRep, p: &Perm) -> Result<Self, GeomAutError> {
        let np = t.num_points();
        let pts: Vec<u32> = (0..np as u32).collect();
        let lns: Vec<u32> = (np as u32..(np + t.num_lines()) as u32).collect();
        let points = p.restrict(&pts).ok_or(GeomAutError::SwapsClasses)?;
        let lines = p.restrict(&lns).ok_or(GeomAutError::SwapsClasses)?;
        let a = GeomAut { points, lines };
        if !a.verify(t) {
            return Err(GeomAutError::NotAutomorphism("incidence not preserved".into()));
        }
        Ok(a)
    }

    pub fn point_perm(&self) -> &Perm {
        &self.points
    }

    pub fn line_perm(&self) -> &Perm {
        &self.lines
    }

    /// The permutation of incidence-graph vertices (points, then lines).
    pub fn vertex_perm(&self) -> Perm {
        let np = self.points.degree() as u32;
        let mut images: Vec<u32> = self.points.images().to_vec();
        images.extend(self.lines.images().iter().map(|&l| l + np));
        Perm::from_images(images).unwrap()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GeomAut) -> GeomAut {
        GeomAut { points: self.points.then(&other.points), lines: self.lines.then(&other.lines) }
    }

    pub fn inverse(&self) -> GeomAut {
        GeomAut { points: self.points.inverse(), lines: self.lines.inverse() }
    }

    pub fn is_identity(&self) -> bool {
        self.points.is_identity() && self.lines.is_identity()
    }

    /// Exhaustive check of `P ∈ L ⇔ φ(P) ∈ φ(L)` over all point-line pairs.
    pub fn verify(&self, t: &LinRep) -> bool {
        if self.points.degree() != t.num_points() || self.lines.degree() != t.num_lines() {
            return false;
        }
        (0..t.num_lines() as u32).all(|l| {
            let here = t.line_points(l);
            let there = t.line_points(self.lines.apply(l));
            (0..t.num_points() as u32)
                .all(|p| here.binary_search(&p).is_ok() == there.binary_search(&self.points.apply(p)).is_ok())
        })
    }

    pub fn to_file(&self) -> GeomAutFile {
        GeomAutFile { points: self.points.images().to_vec(), lines: self.lines.images().to_vec() }
    }

    pub fn from_file(t: &LinRep, file: &GeomAutFile) -> Result<Self, GeomAutError> {
        let bad = |_| GeomAutError::NotAutomorphism("image array is not a permutation".into());
        let a = GeomAut {
            points: Perm::from_images(file.points.clone()).map_err(bad)?,
            lines: Perm::from_images(file.lines.clone()).map_err(bad)?,
        };
        if !a.verify(t) {
            return Err(GeomAutError::NotAutomorphism("incidence not preserved".into()));
        }
        Ok(a)
    }
}

/// The automorphism induced by a collineation stabilizing `X0 = 0` and K.
pub fn induced_action(t: &LinRep, f: &SemilinearMap) -> Result<GeomAut, GeomAutError> {
    let field = t.field();
    let space = t.space();
    let ninf = space.num_points_at_infinity();
    for r in 0..ninf {
        let img = f.apply_point(field, &space.point(r));
        if !img.at_infinity() {
            return Err(GeomAutError::MovesHyperplane);
        }
    }
    if !t.k().members().iter().all(|p| t.k().contains(&f.apply_point(field, p))) {
        return Err(GeomAutError::MovesK);
    }
    let images = t.points().iter().map(|p| t.point_index(&f.apply_point(field, p)).unwrap()).collect();
    GeomAut::from_point_map(t, Perm::from_images(images).unwrap())
}

/// Point-line incidence graph of a whole projective space: points by rank, then lines.
pub struct AuxGraph {
    pub graph: ColoredGraph,
    pub num_points: usize,
    /// Point ranks of each line.
    pub lines: Vec<Vec<usize>>,
}

/// Builds the incidence graph of PG(d, q) with the given colour functions.
/// Line colours are shifted past the largest point colour so the classes never mix.
pub fn aux_incidence_graph(
    space: &ProjSpace,
    point_color: impl Fn(usize) -> u32,
    line_color: impl Fn(&[usize]) -> u32,
) -> AuxGraph {
    let np = space.num_points();
    let lines: Vec<Vec<usize>> = space.subspaces(1).iter().map(|l| space.subspace_ranks(l)).collect();
    let pc: Vec<u32> = (0..np).map(&point_color).collect();
    let shift = pc.iter().max().map_or(0, |m| m + 1);
    let mut colors = pc;
    colors.extend(lines.iter().map(|l| shift + line_color(l)));
    let mut edges = Vec::with_capacity(lines.len() * (space.field().q() as usize + 1));
    for (i, l) in lines.iter().enumerate() {
        for &p in l {
            edges.push((p as u32, (np + i) as u32));
        }
    }
    let graph = ColoredGraph::new(np + lines.len(), &edges, colors).unwrap();
    AuxGraph { graph, num_points: np, lines }
}

/// The group of geometric automorphisms, acting on the incidence-graph vertices.
#[derive(Debug, Clone)]
pub struct GeometricGroup {
    pub group: PermGroup,
    /// Exact order of the collineation stabilizer, from the search.
    pub order: BigUint,
    pub generators: Vec<GeomAut>,
    pub aux_vertices: usize,
}

/// Restricts automorphisms of an auxiliary graph to the affine points and
/// turns them into automorphisms of T*.
fn restrict_to_affine(
    t: &LinRep,
    aut: &Automorphisms,
    first_affine: usize,
    to_t_point: impl Fn(usize) -> u32,
    from_t_point: impl Fn(u32) -> usize,
) -> Vec<GeomAut> {
    aut.generators
        .iter()
        .map(|g| {
            let images = (0..t.num_points() as u32)
                .map(|p| {
                    let r = g.apply(from_t_point(p) as u32) as usize;
                    assert!(r >= first_affine, "collineation moved an affine point to infinity");
                    to_t_point(r)
                })
                .collect();
            GeomAut::from_point_map(t, Perm::from_images(images).unwrap())
                .expect("collineation induces an automorphism")
        })
        .collect()
}

/// Computes (PΓL(n+2, q)_{H∞})_K as a permutation group on the vertices of Γ,
/// via the automorphisms of the coloured point-line incidence graph of PG(n+1, q).
pub fn geometric_group(t: &LinRep) -> GeometricGroup {
    let space = t.space();
    let ninf = space.num_points_at_infinity();
    let k: HashSet<usize> = t.k().members().iter().map(|p| space.rank(p)).collect();
    let aux = aux_incidence_graph(
        space,
        |r| {
            if r >= ninf {
                0
            } else if k.contains(&r) {
                1
            } else {
                2
            }
        },
        |line| match line.iter().find(|&&r| r < ninf) {
            Some(_) if line.iter().all(|&r| r < ninf) => 1,
            Some(r) if k.contains(r) => 0,
            _ => 2,
        },
    );
    let aut = automorphism_group(&aux.graph);
    let generators = restrict_to_affine(t, &aut, ninf, |r| (r - ninf) as u32, |p| p as usize + ninf);
    let gens: Vec<Perm> = generators.iter().map(GeomAut::vertex_perm).collect();
    GeometricGroup {
        group: PermGroup::new(t.num_points() + t.num_lines(), gens).unwrap(),
        order: aut.order,
        generators,
        aux_vertices: aux.graph.num_vertices(),
    }
}

/// PΓL(n+1, q)_K acting on the points of H∞ ≅ PG(n, q).
#[derive(Debug, Clone)]
pub struct HyperplaneStabilizer {
    pub order: BigUint,
    /// Generators as permutations of PG(n, q) point ranks.
    pub point_generators: Vec<Perm>,
    /// The same generators as semilinear maps of PG(n, q).
    pub maps: Vec<SemilinearMap>,
}

/// The setwise stabilizer of K inside PΓL(n+1, q), computed on H∞ alone. Needs n ≥ 2.
pub fn hyperplane_stabilizer(k: &PointSet) -> Result<HyperplaneStabilizer, GeomAutError> {
    if k.n() < 2 {
        return Err(GeomAutError::Hypothesis("the stabilizer route needs n >= 2".into()));
    }
    let space = k.hyperplane_space();
    let field = space.field().clone();
    let members: HashSet<usize> = k.hyperplane_points().iter().map(|p| space.rank(p)).collect();
    let aux = aux_incidence_graph(&space, |r| (!members.contains(&r)) as u32, |_| 0);
    let aut = automorphism_group(&aux.graph);
    let np = aux.num_points;
    let point_generators: Vec<Perm> =
        aut.generators.iter().map(|g| Perm::from_images(g.images()[..np].to_vec()).unwrap()).collect();
    let maps = point_generators
        .iter()
        .map(|g| {
            SemilinearMap::from_point_images(&space, |p| space.point(g.apply(space.rank(p) as u32) as usize))
                .expect("incidence automorphism is a collineation")
        })
        .collect();
    let _ = field;
    Ok(HyperplaneStabilizer { order: aut.order, point_generators, maps })
}

/// Image of Persp(H∞) on the vertices of Γ.
pub fn persp_group(t: &LinRep) -> PermGroup {
    let gens: Vec<Perm> =
        persp_generators(t.n(), t.field()).iter().map(|f| induced_action(t, f).unwrap().vertex_perm()).collect();
    PermGroup::new(t.num_points() + t.num_lines(), gens).unwrap()
}

/// Where each point of H∞ goes under the extension of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// Indexed by the rank of the point at infinity in PG(n+1, q); `None` when incoherent.
    pub images: Vec<Option<ProjPoint>>,
}

impl Extension {
    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    pub fn image(&self, space: &ProjSpace, p: &ProjPoint) -> Option<&ProjPoint> {
        self.images.get(space.rank(p))?.as_ref()
    }

    pub fn is_coherent(&self, space: &ProjSpace, p: &ProjPoint) -> bool {
        self.image(space, p).is_some()
    }
}

fn point_at_infinity_of(field: &FieldCtx, a: &ProjPoint, b: &ProjPoint) -> ProjPoint {
    let d: Vector = a.coords().iter().zip(b.coords()).map(|(x, y)| field.sub(*x, *y)).collect();
    ProjPoint::new(field, d).unwrap()
}

/// Extends an automorphism to H∞: a point Q gets an image when every affine
/// line through Q is mapped onto collinear points, all with the same point at
/// infinity.
pub fn extend_to_infinity(t: &LinRep, a: &GeomAut) -> Extension {
    let field = t.field();
    let space = t.space();
    let ninf = space.num_points_at_infinity();
    let np = t.num_points();
    let pts = t.points();
    let image = |p: usize| &pts[a.points.apply(p as u32) as usize];
    let mut images = Vec::with_capacity(ninf);
    for r in 0..ninf {
        let dir = space.point(r);
        let mut seen = vec![false; np];
        let mut verdict: Option<Option<ProjPoint>> = None;
        for start in 0..np {
            if seen[start] {
                continue;
            }
            let line: Vec<usize> = field
                .elements()
                .map(|s| {
                    let v = vec_add(field, pts[start].coords(), &crate::projspace::vec_scale(field, s, dir.coords()));
                    t.point_index(&ProjPoint::new(field, v).unwrap()).unwrap() as usize
                })
                .collect();
            for &x in &line {
                seen[x] = true;
            }
            let first = image(line[0]);
            let d = point_at_infinity_of(field, image(line[1]), first);
            let collinear = line[2..].iter().all(|&x| point_at_infinity_of(field, image(x), first) == d);
            let this = collinear.then_some(d);
            match &verdict {
                None => verdict = Some(this),
                Some(prev) if *prev != this || this.is_none() => {
                    verdict = Some(None);
                    break;
                }
                _ => {}
            }
        }
        images.push(verdict.flatten());
    }
    Extension { images }
}

/// Whether a subspace π∞ of H∞ is rigid for `a`: for every subspace π one
/// dimension higher through π∞ and not inside H∞, the images of the affine
/// points of π span a subspace of the same dimension as π.
pub fn is_rigid(t: &LinRep, a: &GeomAut, sub: &Subspace) -> bool {
    let field = t.field();
    let pts = t.points();
    let mut seen: HashSet<Subspace> = HashSet::new();
    for p in pts {
        let pi = sub.join_point(field, p);
        if !seen.insert(pi.clone()) {
            continue;
        }
        let affine: Vec<&ProjPoint> = pi
            .points(field)
            .into_iter()
            .filter(|x| !x.at_infinity())
            .map(|x| &pts[a.points.apply(t.point_index(&x).unwrap()) as usize])
            .collect();
        let span = Subspace::span_points(field, affine).unwrap();
        if span.dim() != pi.dim() {
            return false;
        }
    }
    true
}

/// Returns the inducing collineation when `a` is geometric.
pub fn is_geometric(t: &LinRep, a: &GeomAut) -> Option<SemilinearMap> {
    let ext = extend_to_infinity(t, a);
    if !ext.is_total() {
        return None;
    }
    let space = t.space();
    let ninf = space.num_points_at_infinity();
    SemilinearMap::from_point_images(space, |p| {
        let r = space.rank(p);
        if r < ninf {
            ext.images[r].clone().unwrap()
        } else {
            t.points()[a.points.apply((r - ninf) as u32) as usize].clone()
        }
    })
}

fn require_named(t: &LinRep, name: &'static str) -> Result<(), GeomAutError> {
    match construct_named(name, t.n(), t.field(), None) {
        Ok(k) if &k == t.k() => Ok(()),
        _ => Err(GeomAutError::WrongSet(name)),
    }
}

/// The shear `(1, x, y, z) ↦ (1, x, y, z + m x y)` on T*_2 of two intersecting lines.
pub fn phi_shear(t: &LinRep, m: FieldElement) -> Result<GeomAut, GeomAutError> {
    require_named(t, "two_lines")?;
    let f = t.field();
    let images = t
        .points()
        .iter()
        .map(|p| {
            let c = p.coords();
            let z = f.add(c[3], f.mul(m, f.mul(c[1], c[2])));
            t.point_index(&ProjPoint::new(f, vec![c[0], c[1], c[2], z]).unwrap()).unwrap()
        })
        .collect();
    GeomAut::from_point_map(t, Perm::from_images(images).unwrap())
}

/// Checks, for every affine point `(1, x, y, z)` and direction `(0, 1, v, w)`
/// with `v ≠ 0`, that the shear maps the affine points of the joining line
/// onto the affine points of the conic
/// `(z − w x) X0² + v X1² + (w + y − v x) X0 X1 − X0 X3 = 0` in the plane
/// `X2 = (y − v x) X0 + v X1`. Returns the number of lines checked.
pub fn shear_conic_identity(field: &FieldCtx) -> Result<usize, (Vec<u32>, Vec<u32>)> {
    let f = field;
    let els: Vec<FieldElement> = f.elements().collect();
    let mut checked = 0;
    for &x in &els {
        for &y in &els {
            for &z in &els {
                for &v in els.iter().skip(1) {
                    for &w in &els {
                        let mut images = HashSet::new();
                        for &s in &els {
                            let (px, py, pz) = (f.add(x, s), f.add(y, f.mul(s, v)), f.add(z, f.mul(s, w)));
                            let pz = f.add(pz, f.mul(px, py));
                            images.insert((px, py, pz));
                        }
                        // affine conic points: X0 = 1, one for each value of X1
                        let conic: HashSet<(FieldElement, FieldElement, FieldElement)> = els
                            .iter()
                            .map(|&x1| {
                                let x2 = f.add(f.sub(y, f.mul(v, x)), f.mul(v, x1));
                                let x3 = f.add(
                                    f.add(f.sub(z, f.mul(w, x)), f.mul(v, f.mul(x1, x1))),
                                    f.mul(f.sub(f.add(w, y), f.mul(v, x)), x1),
                                );
                                (x1, x2, x3)
                            })
                            .collect();
                        let on_conic = images.iter().all(|&(x1, x2, x3)| {
                            let q = f.sub(
                                f.add(
                                    f.add(f.sub(z, f.mul(w, x)), f.mul(v, f.mul(x1, x1))),
                                    f.mul(f.sub(f.add(w, y), f.mul(v, x)), x1),
                                ),
                                x3,
                            );
                            q.is_zero() && x2 == f.add(f.sub(y, f.mul(v, x)), f.mul(v, x1))
                        });
                        if images != conic || !on_conic || images.len() != els.len() {
                            let idx = |e: &[FieldElement]| e.iter().map(|c| c.index() as u32).collect();
                            return Err((idx(&[x, y, z]), idx(&[v, w])));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// The class-swapping map on Γ_{2,q} of the q-arc `{(0, 1, x, x²)}`, q even:
/// the point `(1, a, b, c)` goes to the line `<(0, 1, a, a²), (1, 0, c, b²)>`
/// and each line goes to the common point of the images of its points.
/// Returned as a permutation of the incidence-graph vertices.
pub fn qarc_duality(t: &LinRep) -> Result<Perm, GeomAutError> {
    let f = t.field();
    if f.q() % 2 == 1 {
        return Err(GeomAutError::OddQ(f.q()));
    }
    require_named(t, "qarc_parabola")?;
    let np = t.num_points();
    let mut images = vec![0u32; np + t.num_lines()];
    let mut line_images: Vec<Vec<u32>> = vec![Vec::new(); t.num_lines()];
    for (i, p) in t.points().iter().enumerate() {
        let c = p.coords();
        let (a, b, cc) = (c[1], c[2], c[3]);
        let inf = ProjPoint::new(f, vec![FieldElement::ZERO, FieldElement::ONE, a, f.mul(a, a)]).unwrap();
        let base = ProjPoint::new(f, vec![FieldElement::ONE, FieldElement::ZERO, cc, f.mul(b, b)]).unwrap();
        let l = t.line_through(t.point_index(&base).unwrap(), &inf).unwrap();
        images[i] = np as u32 + l;
        line_images[l as usize].push(i as u32);
    }
    if line_images.iter().any(|v| v.len() != 1) {
        return Err(GeomAutError::NotAutomorphism("point map is not a bijection onto lines".into()));
    }
    for l in 0..t.num_lines() as u32 {
        let targets: Vec<u32> = t.line_points(l).iter().map(|&p| images[p as usize] - np as u32).collect();
        let common: Vec<u32> = t
            .line_points(targets[0])
            .iter()
            .copied()
            .filter(|x| targets.iter().all(|&m| t.line_points(m).binary_search(x).is_ok()))
            .collect();
        if common.len() != 1 {
            return Err(GeomAutError::NotAutomorphism(format!("image lines of line {l} have no unique common point")));
        }
        images[np + l as usize] = common[0];
    }
    Perm::from_images(images).map_err(|_| GeomAutError::NotAutomorphism("vertex map is not a bijection".into()))
}

fn affine_origin(len: usize) -> ProjPoint {
    let mut v = vec![FieldElement::ZERO; len];
    v[0] = FieldElement::ONE;
    ProjPoint::from_normalized(v)
}

/// The fold along `q_point`: affine points of `mu1` go to `<Q, P> ∩ mu2` and
/// vice versa, all other points stay. Needs q ≥ 4, `dim <K> ≤ n − 1`, `mu1`
/// and `mu2` distinct of dimension `dim <K> + 1` meeting H∞ exactly in `<K>`,
/// and `Q ∈ H∞ \ <K>` inside `<mu1, mu2>`.
pub fn fold_map(t: &LinRep, mu1: &Subspace, mu2: &Subspace, q_point: &ProjPoint) -> Result<GeomAut, GeomAutError> {
    let f = t.field();
    let hyp = |m: &str| Err(GeomAutError::Hypothesis(m.to_string()));
    if f.q() < 4 {
        return hyp("q >= 4");
    }
    let pi = Subspace::span_points(f, t.k().members()).unwrap();
    if pi.dim() + 1 > t.n() {
        return hyp("<K> must be a proper subspace of H∞");
    }
    let h = t.space().hyperplane_at_infinity();
    for mu in [mu1, mu2] {
        if mu.dim() != pi.dim() + 1 || mu.meet(f, &h).unwrap().as_ref() != Some(&pi) {
            return hyp("mu1 and mu2 must meet H∞ exactly in <K>, one dimension up");
        }
    }
    if mu1 == mu2 {
        return hyp("mu1 and mu2 must be distinct");
    }
    if !q_point.at_infinity() || pi.contains(f, q_point) {
        return hyp("Q must lie in H∞ outside <K>");
    }
    if !mu1.join(f, mu2).unwrap().contains(f, q_point) {
        return hyp("Q must lie in <mu1, mu2>");
    }
    let qs = Subspace::point(q_point);
    let across = |p: &ProjPoint, target: &Subspace| -> Result<u32, GeomAutError> {
        let m = qs.join_point(f, p).meet(f, target).unwrap();
        match m {
            Some(m) if m.dim() == 0 => {
                let x = ProjPoint::new(f, m.rows()[0].clone()).unwrap();
                t.point_index(&x).ok_or(GeomAutError::Hypothesis("fold lands at infinity".into()))
            }
            _ => Err(GeomAutError::Hypothesis("<Q, P> does not meet the other space in a point".into())),
        }
    };
    let mut images = Vec::with_capacity(t.num_points());
    for (i, p) in t.points().iter().enumerate() {
        images.push(if mu1.contains(f, p) {
            across(p, mu2)?
        } else if mu2.contains(f, p) {
            across(p, mu1)?
        } else {
            i as u32
        });
    }
    let perm = Perm::from_images(images).map_err(|_| GeomAutError::Hypothesis("fold is not a bijection".into()))?;
    GeomAut::from_point_map(t, perm)
}

/// The fold with `mu1 = <K, O>` and `mu2 = <K, O + Q>`, `O = (1, 0, ..., 0)`.
pub fn fold_map_default(t: &LinRep, q_point: &ProjPoint) -> Result<GeomAut, GeomAutError> {
    let f = t.field();
    let pi = Subspace::span_points(f, t.k().members()).unwrap();
    let origin = affine_origin(t.n() + 2);
    let shifted = ProjPoint::new(f, vec_add(f, origin.coords(), q_point.coords())).unwrap();
    fold_map(t, &pi.join_point(f, &origin), &pi.join_point(f, &shifted), q_point)
}

/// Field reduction of PG(3, q²) into PG(6, q).
#[derive(Debug, Clone)]
pub struct SpreadData {
    pub small: FieldCtx,
    pub big: FieldCtx,
    /// Spread lines inside `J∞: X0 = 0` of PG(6, q), indexed by the rank of the
    /// corresponding point of PG(2, q²).
    pub spread: Vec<Subspace>,
    /// Indices into `spread` of the lines coming from K.
    pub b: Vec<usize>,
    /// Affine index in PG(3, q²) to affine index in PG(6, q).
    pub point_map: Vec<u32>,
}

/// Builds the spread representation for T*_2(K) with K in PG(2, q²).
///
/// With `ω` the generator of the polynomial basis of GF(q²), every element is
/// `a + b ω` with `a, b` in GF(q); the affine point `(1, z1, z2, z3)` goes to
/// `(1, a1, b1, a2, b2, a3, b3)`.
pub fn barlotti_cofman(t: &LinRep) -> Result<SpreadData, GeomAutError> {
    let big = t.field().clone();
    if t.n() != 2 {
        return Err(GeomAutError::Hypothesis("K must lie in PG(2, q^2)".into()));
    }
    let q2 = big.q();
    let q = (2..=q2).find(|r| r * r == q2).ok_or(GeomAutError::Hypothesis("field order must be a square".into()))?;
    let small = field_of_order(q).unwrap();
    let emb = big.embedding_of(&small).unwrap();
    let omega = big.element(big.p()).unwrap();
    let mut split = vec![(FieldElement::ZERO, FieldElement::ZERO); q2 as usize];
    for a in small.elements() {
        for b in small.elements() {
            let z = big.add(emb[a.index()], big.mul(emb[b.index()], omega));
            split[z.index()] = (a, b);
        }
    }
    let reduce =
        |v: &[FieldElement]| -> Vector { v.iter().flat_map(|z| [split[z.index()].0, split[z.index()].1]).collect() };
    let plane = ProjSpace::new(2, &big).unwrap();
    let spread: Vec<Subspace> = plane
        .all_points()
        .iter()
        .map(|k| {
            let rows: Vec<Vector> = [FieldElement::ONE, omega]
                .iter()
                .map(|&l| {
                    let scaled: Vector = k.coords().iter().map(|&c| big.mul(l, c)).collect();
                    let mut v = vec![FieldElement::ZERO];
                    v.extend(reduce(&scaled));
                    v
                })
                .collect();
            Subspace::span_vectors(&small, rows).unwrap()
        })
        .collect();
    let b = t.k().hyperplane_points().iter().map(|p| plane.rank(p)).collect();
    let target = ProjSpace::new(6, &small).unwrap();
    let point_map = t
        .points()
        .iter()
        .map(|p| {
            let mut v = vec![FieldElement::ONE];
            v.extend(reduce(&p.coords()[1..]));
            target.affine_index(&ProjPoint::new(&small, v).unwrap()).unwrap() as u32
        })
        .collect();
    Ok(SpreadData { small, big, spread, b, point_map })
}

/// PΓL(7, q)_B and the group it induces on Γ.
#[derive(Debug, Clone)]
pub struct SpreadStabilizer {
    /// Order of the stabilizer of J∞ and B in PΓL(7, q).
    pub order: BigUint,
    /// Its action on the vertices of Γ_{2,q²}(K).
    pub induced: PermGroup,
    pub generators: Vec<GeomAut>,
    pub aux_vertices: usize,
}

impl SpreadData {
    /// Whether the lines of T* go to planes of PG(6, q) through lines of B.
    pub fn lines_match_planes(&self, t: &LinRep) -> bool {
        let target = ProjSpace::new(6, &self.small).unwrap();
        let ninf = target.num_points_at_infinity();
        let jinf = target.hyperplane_at_infinity();
        let b: HashSet<&Subspace> = self.b.iter().map(|&i| &self.spread[i]).collect();
        let mut planes = HashSet::new();
        for l in 0..t.num_lines() as u32 {
            let pts: Vec<ProjPoint> =
                t.line_points(l).iter().map(|&p| target.point(ninf + self.point_map[p as usize] as usize)).collect();
            let span = Subspace::span_points(&self.small, &pts).unwrap();
            let affine_in_span = span.points(&self.small).iter().filter(|x| !x.at_infinity()).count();
            let meet = span.meet(&self.small, &jinf).unwrap();
            if span.dim() != 2 || affine_in_span != pts.len() || !meet.is_some_and(|m| b.contains(&m)) {
                return false;
            }
            planes.insert(span);
        }
        planes.len() == t.num_lines()
    }

    /// Computes PΓL(7, q)_B from the incidence graph of PG(6, q) with J∞, the
    /// points on B and the lines of B coloured, then restricts to the affine points.
    pub fn stabilizer(&self, t: &LinRep) -> SpreadStabilizer {
        let target = ProjSpace::new(6, &self.small).unwrap();
        let ninf = target.num_points_at_infinity();
        let mut on_b = vec![false; target.num_points()];
        let mut b_lines: HashSet<Vec<usize>> = HashSet::new();
        for &i in &self.b {
            let ranks = target.subspace_ranks(&self.spread[i]);
            for &r in &ranks {
                on_b[r] = true;
            }
            b_lines.insert(ranks);
        }
        let aux = aux_incidence_graph(
            &target,
            |r| {
                if r >= ninf {
                    0
                } else if on_b[r] {
                    1
                } else {
                    2
                }
            },
            |line| b_lines.contains(line) as u32,
        );
        let aut = automorphism_group(&aux.graph);
        let mut inverse = vec![0u32; t.num_points()];
        for (p, &x) in self.point_map.iter().enumerate() {
            inverse[x as usize] = p as u32;
        }
        let generators =
            restrict_to_affine(t, &aut, ninf, |r| inverse[r - ninf], |p| self.point_map[p as usize] as usize + ninf);
        let gens: Vec<Perm> = generators.iter().map(GeomAut::vertex_perm).collect();
        SpreadStabilizer {
            order: aut.order,
            induced: PermGroup::new(t.num_points() + t.num_lines(), gens).unwrap(),
            generators,
            aux_vertices: aux.graph.num_vertices(),
        }
    }
}

/// Lifts a collineation of H∞ = PG(n, q) fixing `c` to PG(n+1, q) by the block
/// matrix `diag(1, B)`, with `B` scaled so that `c^θ B = c`.
pub fn lift_fixing_point(beta: &SemilinearMap, c: &ProjPoint, field: &FieldCtx) -> Result<SemilinearMap, GeomAutError> {
    if c.len() != beta.size() {
        return Err(GeomAutError::Hypothesis("fixed point has the wrong length".into()));
    }
    let v = beta.apply_vector(field, c.coords());
    let lead = c.coords().iter().position(|x| !x.is_zero()).unwrap();
    let lambda = field.div(v[lead], c.coords()[lead]).unwrap();
    if lambda.is_zero() || v.iter().zip(c.coords()).any(|(x, y)| *x != field.mul(lambda, *y)) {
        return Err(GeomAutError::NotFixed);
    }
    let inv = field.inv(lambda).unwrap();
    let n = beta.size() + 1;
    let mut a = vec![vec![FieldElement::ZERO; n]; n];
    a[0][0] = FieldElement::ONE;
    for (i, row) in beta.matrix().iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            a[i + 1][j + 1] = field.mul(*x, inv);
        }
    }
    Ok(SemilinearMap::new(field, a, beta.autexp()).unwrap())
}

/// The lifts of the generators of PΓL(n+1, q)_K that fix `c`, acting on Γ.
pub fn lifted_complement(t: &LinRep, stab: &HyperplaneStabilizer, c: &ProjPoint) -> Result<PermGroup, GeomAutError> {
    let gens = stab
        .maps
        .iter()
        .map(|beta| {
            let lifted = lift_fixing_point(beta, c, t.field())?;
            Ok(induced_action(t, &lifted)?.vertex_perm())
        })
        .collect::<Result<Vec<Perm>, GeomAutError>>()?;
    Ok(PermGroup::new(t.num_points() + t.num_lines(), gens).unwrap())
}
