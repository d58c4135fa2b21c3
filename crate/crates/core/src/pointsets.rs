//! Point sets at infinity and the predicates decided on them: closure,
//! Property (*) and tangent cover.
//!
//! A [`PointSet`] for dimension `n` lives in the hyperplane `X0 = 0` of
//! PG(n+1, q); its members carry `n + 2` coordinates with a leading zero.
//! Internally the predicates work in PG(n, q) on the stripped coordinates.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::gf::{field_of_order, FieldCtx, FieldElement, GfError};
use crate::projspace::{parse_point_file, write_point_file, GeomError, ProjPoint, ProjSpace, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointSetError {
    #[error("unknown point set `{0}`")]
    UnknownName(String),
    #[error("`{name}` needs n = {expected}, got n = {got}")]
    WrongDimension { name: &'static str, expected: usize, got: usize },
    #[error("hyperoval needs q even, got q = {0}")]
    OddQ(u32),
    #[error("baer_subplane needs q square, got q = {0}")]
    NotSquare(u32),
    #[error("GF({q0}) is not a proper subfield of GF({q})")]
    BadSubfield { q0: u32, q: u32 },
    #[error("subgeometry needs a subfield order")]
    MissingSubfield,
    #[error("point {0:?} does not lie on X0 = 0")]
    NotAtInfinity(ProjPoint),
    #[error("point set contains no frame of PG({0}, q); closure is undefined")]
    NoFrame(usize),
    #[error("dimension n must be at least {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A sorted, duplicate-free set of points of `X0 = 0` in PG(n+1, q).
#[derive(Clone)]
pub struct PointSet {
    n: usize,
    field: FieldCtx,
    members: Vec<ProjPoint>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet(n={}, q={}, {:?})", self.n, self.field.q(), self.members)
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.members == other.members
    }
}

impl Eq for PointSet {}

impl PointSet {
    /// Builds a set from points with `n + 2` coordinates, all on `X0 = 0`.
    pub fn new(n: usize, field: &FieldCtx, points: impl IntoIterator<Item = ProjPoint>) -> Result<Self, PointSetError> {
        if n < 1 {
            return Err(PointSetError::DimensionTooSmall(1));
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != n + 2 {
                return Err(GeomError::DimensionMismatch { expected: n + 2, got: p.len() }.into());
            }
            if !p.at_infinity() {
                return Err(PointSetError::NotAtInfinity(p));
            }
            set.insert(p);
        }
        Ok(PointSet { n, field: field.clone(), members: set.into_iter().collect() })
    }

    /// Builds a set from points of PG(n, q) given in hyperplane coordinates.
    pub fn from_hyperplane_points(
        n: usize,
        field: &FieldCtx,
        points: impl IntoIterator<Item = ProjPoint>,
    ) -> Result<Self, PointSetError> {
        PointSet::new(n, field, points.into_iter().map(|p| p.embed_at_infinity()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn members(&self) -> &[ProjPoint] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.members.binary_search(p).is_ok()
    }

    /// Members with the leading zero dropped, as points of PG(n, q).
    pub fn hyperplane_points(&self) -> Vec<ProjPoint> {
        self.members.iter().map(ProjPoint::strip_first).collect()
    }

    /// The space PG(n, q) identified with `X0 = 0`.
    pub fn hyperplane_space(&self) -> ProjSpace {
        ProjSpace::new(self.n, &self.field).unwrap()
    }

    /// The ambient space PG(n+1, q).
    pub fn ambient_space(&self) -> ProjSpace {
        ProjSpace::new(self.n + 1, &self.field).unwrap()
    }

    pub fn to_point_file(&self) -> String {
        write_point_file(self.n + 1, self.field.q(), &self.members)
    }

    /// Reads a point file whose header is `n+1 q` and whose points have a leading zero.
    pub fn from_point_file(text: &str) -> Result<Self, PointSetError> {
        let (d, q, rows) = parse_point_file(text)?;
        let field = field_of_order(q)?;
        let pts = rows.iter().map(|r| ProjPoint::from_indices(&field, r)).collect::<Result<Vec<_>, _>>()?;
        PointSet::new(d.checked_sub(1).ok_or(GeomError::BadDimension)?, &field, pts)
    }
}

/// Names accepted by [`construct_named`].
pub const NAMED_SETS: &[&str] = &[
    "conic_arc",
    "qarc_parabola",
    "hyperoval",
    "two_lines",
    "two_planes",
    "three_lines_rem3",
    "baer_subplane",
    "subgeometry",
    "frame",
    "full",
    "point",
];

fn unit(field: &FieldCtx, len: usize, i: usize) -> ProjPoint {
    let mut v = vec![FieldElement::ZERO; len];
    v[i] = FieldElement::ONE;
    ProjPoint::new(field, v).unwrap()
}

fn require_n(name: &'static str, expected: usize, got: usize) -> Result<(), PointSetError> {
    if expected != got {
        return Err(PointSetError::WrongDimension { name, expected, got });
    }
    Ok(())
}

/// Points of a subspace of PG(n, q) spanned by the given unit vectors.
fn coordinate_subspace(field: &FieldCtx, n: usize, axes: &[usize]) -> Vec<ProjPoint> {
    let units: Vec<ProjPoint> = axes.iter().map(|&i| unit(field, n + 1, i)).collect();
    Subspace::span_points(field, units.iter()).unwrap().points(field)
}

/// Points of PG(n, q0) inside PG(n, q), in hyperplane coordinates.
fn subfield_points(field: &FieldCtx, n: usize, q0: u32) -> Result<Vec<ProjPoint>, PointSetError> {
    let sub = field.subfield(q0).filter(|s| s.len() < field.q() as usize);
    let sub = sub.ok_or(PointSetError::BadSubfield { q0, q: field.q() })?;
    let space = ProjSpace::new(n, field)?;
    Ok(space.all_points().into_iter().filter(|p| p.coords().iter().all(|c| sub.contains(c))).collect())
}

/// The parabola points `(1, x, x^2)` of PG(2, q), one per field element.
fn parabola(field: &FieldCtx) -> Vec<ProjPoint> {
    field.elements().map(|x| ProjPoint::new(field, vec![FieldElement::ONE, x, field.mul(x, x)]).unwrap()).collect()
}

/// Builds a named point set in the hyperplane at infinity of PG(n+1, q).
///
/// Coordinates below are given in H∞ ≅ PG(n, q) with coordinates `X1 .. X(n+1)`:
///
/// * `conic_arc` (n = 2): `{(1, x, x^2)} ∪ {(0, 0, 1)}`
/// * `qarc_parabola` (n = 2): `{(1, x, x^2)}`
/// * `hyperoval` (n = 2, q even): the conic arc plus its nucleus `(0, 1, 0)`
/// * `two_lines` (n = 2): the lines `X1 = 0` and `X2 = 0`
/// * `two_planes` (n = 3): the planes `X1 = 0` and `X2 = 0`
/// * `three_lines_rem3` (n = 3): `<e1,e2>`, `<e3,e4>` and `<e1,e3>`
/// * `baer_subplane` (n = 2, q square): the points with coordinates in GF(√q)
/// * `subgeometry`: the points with coordinates in GF(q0)
/// * `frame`: the unit points and the all-one point
/// * `full`: every point; `point`: the single point `(1, 0, ..., 0)`
pub fn construct_named(name: &str, n: usize, field: &FieldCtx, q0: Option<u32>) -> Result<PointSet, PointSetError> {
    let q = field.q();
    let pts: Vec<ProjPoint> = match name {
        "conic_arc" => {
            require_n("conic_arc", 2, n)?;
            let mut v = parabola(field);
            v.push(unit(field, 3, 2));
            v
        }
        "qarc_parabola" => {
            require_n("qarc_parabola", 2, n)?;
            parabola(field)
        }
        "hyperoval" => {
            require_n("hyperoval", 2, n)?;
            if q % 2 == 1 {
                return Err(PointSetError::OddQ(q));
            }
            let mut v = parabola(field);
            v.push(unit(field, 3, 2));
            v.push(unit(field, 3, 1));
            v
        }
        "two_lines" => {
            require_n("two_lines", 2, n)?;
            let mut v = coordinate_subspace(field, 2, &[1, 2]);
            v.extend(coordinate_subspace(field, 2, &[0, 2]));
            v
        }
        "two_planes" => {
            require_n("two_planes", 3, n)?;
            let mut v = coordinate_subspace(field, 3, &[1, 2, 3]);
            v.extend(coordinate_subspace(field, 3, &[0, 2, 3]));
            v
        }
        "three_lines_rem3" => {
            require_n("three_lines_rem3", 3, n)?;
            let mut v = coordinate_subspace(field, 3, &[0, 1]);
            v.extend(coordinate_subspace(field, 3, &[2, 3]));
            v.extend(coordinate_subspace(field, 3, &[0, 2]));
            v
        }
        "baer_subplane" => {
            require_n("baer_subplane", 2, n)?;
            let root = (1..=q).find(|r| r * r == q).ok_or(PointSetError::NotSquare(q))?;
            if root == 1 {
                return Err(PointSetError::NotSquare(q));
            }
            subfield_points(field, 2, root)?
        }
        "subgeometry" => {
            let q0 = q0.ok_or(PointSetError::MissingSubfield)?;
            subfield_points(field, n, q0)?
        }
        "frame" => {
            let mut v: Vec<ProjPoint> = (0..=n).map(|i| unit(field, n + 1, i)).collect();
            v.push(ProjPoint::new(field, vec![FieldElement::ONE; n + 1]).unwrap());
            v
        }
        "full" => ProjSpace::new(n, field)?.all_points(),
        "point" => vec![unit(field, n + 1, 0)],
        other => return Err(PointSetError::UnknownName(other.to_string())),
    };
    PointSet::from_hyperplane_points(n, field, pts)
}

/// Whether `points` (in PG(n, q)) are in general position: every `n + 1` of them independent.
fn extends_general_position(field: &FieldCtx, n: usize, chosen: &[ProjPoint], p: &ProjPoint) -> bool {
    let k = chosen.len().min(n);
    if k == 0 {
        return true;
    }
    // every k-subset of `chosen` together with p must stay independent
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let span = Subspace::span_points(field, idx.iter().map(|&i| &chosen[i])).unwrap();
        if span.dim() + 1 < k || span.contains(field, p) {
            return false;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == chosen.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A frame (n + 2 points in general position) contained in `points`, if any.
pub fn find_frame(field: &FieldCtx, n: usize, points: &[ProjPoint]) -> Option<Vec<ProjPoint>> {
    fn rec(field: &FieldCtx, n: usize, points: &[ProjPoint], start: usize, chosen: &mut Vec<ProjPoint>) -> bool {
        if chosen.len() == n + 2 {
            return true;
        }
        let needed = n + 2 - chosen.len();
        for i in start..points.len() {
            if points.len() - i < needed {
                break;
            }
            if extends_general_position(field, n, chosen, &points[i]) {
                chosen.push(points[i].clone());
                if rec(field, n, points, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    rec(field, n, points, 0, &mut chosen).then_some(chosen)
}

/// The closure of `s`: the point set of the smallest subgeometry containing it.
///
/// Alternates two steps until nothing changes: collect every subspace spanned
/// by current points (as the closure of the points under joining one more
/// point), then add every point arising as the exact intersection of two of
/// those subspaces.
pub fn closure(s: &PointSet) -> Result<PointSet, PointSetError> {
    let field = s.field();
    let n = s.n();
    let mut current: BTreeSet<ProjPoint> = s.hyperplane_points().into_iter().collect();
    let listed: Vec<ProjPoint> = current.iter().cloned().collect();
    if find_frame(field, n, &listed).is_none() {
        return Err(PointSetError::NoFrame(n));
    }
    loop {
        let mut spanned: HashSet<Subspace> = current.iter().map(Subspace::point).collect();
        let mut queue: Vec<Subspace> = spanned.iter().cloned().collect();
        while let Some(sub) = queue.pop() {
            for p in &current {
                if !sub.contains(field, p) {
                    let bigger = sub.join_point(field, p);
                    if spanned.insert(bigger.clone()) {
                        queue.push(bigger);
                    }
                }
            }
        }
        let mut flats: Vec<Subspace> = spanned.into_iter().filter(|f| f.dim() >= 1).collect();
        flats.sort();
        let mut added = Vec::new();
        for (i, a) in flats.iter().enumerate() {
            for b in &flats[i + 1..] {
                if let Some(m) = a.meet(field, b)? {
                    if m.dim() == 0 {
                        let p = ProjPoint::new(field, m.rows()[0].clone())?;
                        if !current.contains(&p) {
                            added.push(p);
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        current.extend(added);
    }
    PointSet::from_hyperplane_points(n, field, current)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarVerdict {
    Holds,
    /// The first plane (in enumeration order) meeting the set in two
    /// intersecting lines, possibly minus their common point. Given in
    /// the coordinates of PG(n+1, q).
    Violated {
        witness_plane: Subspace,
    },
}

/// Indices (in coefficient-space rank order) of the points on each line of PG(2, q).
fn plane_lines(field: &FieldCtx) -> Vec<Vec<usize>> {
    let coeff = ProjSpace::new(2, field).unwrap();
    coeff.subspaces(1).iter().map(|l| coeff.subspace_ranks(l)).collect()
}

/// Decides Property (*): no plane of H∞ meets the set in exactly two
/// intersecting lines, or two intersecting lines minus their common point.
pub fn property_star(s: &PointSet) -> Result<StarVerdict, PointSetError> {
    let n = s.n();
    if n < 2 {
        return Err(PointSetError::DimensionTooSmall(2));
    }
    let field = s.field();
    let q = field.q() as usize;
    let space = s.hyperplane_space();
    let members: HashSet<ProjPoint> = s.hyperplane_points().into_iter().collect();
    let lines = plane_lines(field);
    for plane in space.subspaces(2) {
        // plane.points() lists points in coefficient-space rank order
        let inside: Vec<bool> = plane.points(field).iter().map(|p| members.contains(p)).collect();
        let count = inside.iter().filter(|&&b| b).count();
        if count != 2 * q && count != 2 * q + 1 {
            continue;
        }
        for (i, l1) in lines.iter().enumerate() {
            for l2 in &lines[i + 1..] {
                let common = *l1.iter().find(|x| l2.contains(x)).unwrap();
                let mut expected = vec![false; inside.len()];
                for &x in l1.iter().chain(l2) {
                    expected[x] = true;
                }
                let with_common = expected == inside;
                expected[common] = false;
                if with_common || expected == inside {
                    return Ok(StarVerdict::Violated { witness_plane: plane.embed_at_infinity() });
                }
            }
        }
    }
    Ok(StarVerdict::Holds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangentVerdict {
    Holds,
    /// The first point of H∞ outside the set on no tangent line, in PG(n+1, q) coordinates.
    Violated {
        witness_point: ProjPoint,
    },
}

/// Decides whether every point of H∞ outside the set lies on a line meeting
/// the set in exactly one point.
pub fn tangent_cover(s: &PointSet) -> TangentVerdict {
    let space = s.hyperplane_space();
    let mut in_set = vec![false; space.num_points()];
    for p in s.hyperplane_points() {
        in_set[space.rank(&p)] = true;
    }
    let mut covered = vec![false; space.num_points()];
    for line in space.subspaces(1) {
        let ranks = space.subspace_ranks(&line);
        if ranks.iter().filter(|&&r| in_set[r]).count() == 1 {
            for r in ranks {
                covered[r] = true;
            }
        }
    }
    match (0..space.num_points()).find(|&r| !in_set[r] && !covered[r]) {
        None => TangentVerdict::Holds,
        Some(r) => TangentVerdict::Violated { witness_point: space.point(r).embed_at_infinity() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projspace::SemilinearMap;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fq(q: u32) -> FieldCtx {
        field_of_order(q).unwrap()
    }

    #[test]
    fn named_set_sizes() {
        assert_eq!(construct_named("two_lines", 2, &fq(3), None).unwrap().len(), 7);
        assert_eq!(construct_named("baer_subplane", 2, &fq(4), None).unwrap().len(), 7);
        assert_eq!(construct_named("two_planes", 3, &fq(3), None).unwrap().len(), 22);
        assert_eq!(construct_named("three_lines_rem3", 3, &fq(3), None).unwrap().len(), 10);
        assert_eq!(construct_named("hyperoval", 2, &fq(4), None).unwrap().len(), 6);
        assert_eq!(construct_named("conic_arc", 2, &fq(3), None).unwrap().len(), 4);
        assert_eq!(construct_named("qarc_parabola", 2, &fq(4), None).unwrap().len(), 4);
        assert_eq!(construct_named("subgeometry", 2, &fq(8), Some(2)).unwrap().len(), 7);
        assert_eq!(construct_named("baer_subplane", 2, &fq(9), None).unwrap().len(), 13);
        assert_eq!(construct_named("frame", 3, &fq(3), None).unwrap().len(), 5);
        assert_eq!(construct_named("full", 2, &fq(2), None).unwrap().len(), 7);
    }

    #[test]
    fn named_set_errors() {
        assert_eq!(construct_named("hyperoval", 2, &fq(3), None).unwrap_err(), PointSetError::OddQ(3));
        assert_eq!(construct_named("baer_subplane", 2, &fq(8), None).unwrap_err(), PointSetError::NotSquare(8));
        assert!(matches!(construct_named("two_lines", 3, &fq(3), None), Err(PointSetError::WrongDimension { .. })));
        assert!(matches!(construct_named("subgeometry", 2, &fq(8), Some(4)), Err(PointSetError::BadSubfield { .. })));
        assert!(matches!(construct_named("nope", 2, &fq(8), None), Err(PointSetError::UnknownName(_))));
    }

    #[test]
    fn members_are_at_infinity_and_sorted() {
        for name in NAMED_SETS {
            let f = fq(4);
            let n = if ["two_planes", "three_lines_rem3"].contains(name) { 3 } else { 2 };
            let s = construct_named(name, n, &f, Some(2)).unwrap();
            assert!(s.members().iter().all(ProjPoint::at_infinity));
            assert!(s.members().windows(2).all(|w| w[0] < w[1]));
        }
        let f = fq(3);
        let affine = ProjPoint::from_indices(&f, &[1, 0, 0, 0]).unwrap();
        assert!(matches!(PointSet::new(2, &f, [affine]), Err(PointSetError::NotAtInfinity(_))));
    }

    #[test]
    fn point_file_roundtrip() {
        let s = construct_named("hyperoval", 2, &fq(4), None).unwrap();
        let text = s.to_point_file();
        assert!(text.starts_with("3 4\n"));
        assert_eq!(PointSet::from_point_file(&text).unwrap(), s);
    }

    /// All images of PG(2, q0) under frame maps, collected by brute force over ordered frames.
    fn all_subplanes(field: &FieldCtx, q0: u32) -> HashSet<BTreeSet<ProjPoint>> {
        let space = ProjSpace::new(2, field).unwrap();
        let base = subfield_points(field, 2, q0).unwrap();
        let pts = space.all_points();
        let mut out = HashSet::new();
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    for d in &pts {
                        if let Some(m) = SemilinearMap::from_frame(field, &[a.clone(), b.clone(), c.clone(), d.clone()])
                        {
                            out.insert(base.iter().map(|p| m.apply_point(field, p)).collect());
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn closure_of_frame_in_pg2_4_is_the_oracle_subplane() {
        let f = fq(4);
        let subplanes = all_subplanes(&f, 2);
        assert_eq!(subplanes.len(), 360);
        let frame = construct_named("frame", 2, &f, None).unwrap();
        let fp: Vec<ProjPoint> = frame.hyperplane_points();
        let containing: Vec<_> = subplanes.iter().filter(|s| fp.iter().all(|p| s.contains(p))).collect();
        assert_eq!(containing.len(), 1);
        let cl = closure(&frame).unwrap();
        assert_eq!(cl.len(), 7);
        let got: BTreeSet<ProjPoint> = cl.hyperplane_points().into_iter().collect();
        assert_eq!(&got, containing[0]);
    }

    #[test]
    fn closure_examples() {
        let f = fq(4);
        let baer = construct_named("baer_subplane", 2, &f, None).unwrap();
        assert_eq!(closure(&baer).unwrap(), baer);
        let f3 = fq(3);
        let frame = construct_named("frame", 2, &f3, None).unwrap();
        assert_eq!(closure(&frame).unwrap().len(), 13);
        let frame3 = construct_named("frame", 3, &f3, None).unwrap();
        assert_eq!(closure(&frame3).unwrap().len(), 40);
        let line = construct_named("qarc_parabola", 2, &f, None).unwrap();
        assert!(closure(&line).is_ok());
        let pt = construct_named("point", 2, &f, None).unwrap();
        assert_eq!(closure(&pt).unwrap_err(), PointSetError::NoFrame(2));
    }

    #[test]
    fn closure_is_idempotent_and_monotone() {
        for (name, q) in [("frame", 4u32), ("two_lines", 3), ("conic_arc", 5), ("hyperoval", 4), ("frame", 9)] {
            let f = fq(q);
            let s = construct_named(name, 2, &f, None).unwrap();
            let c = closure(&s).unwrap();
            assert!(s.members().iter().all(|p| c.contains(p)));
            assert_eq!(closure(&c).unwrap(), c);
        }
    }

    #[test]
    fn closure_of_random_frames_is_a_subgeometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, q0) in [(4u32, 2u32), (9, 3)] {
            let f = fq(q);
            let space = ProjSpace::new(2, &f).unwrap();
            let base = subfield_points(&f, 2, q0).unwrap();
            let mut pts = space.all_points();
            let mut done = 0;
            while done < 5 {
                pts.shuffle(&mut rng);
                let Some(m) = SemilinearMap::from_frame(&f, &pts[..4]) else { continue };
                let s = PointSet::from_hyperplane_points(2, &f, pts[..4].iter().cloned()).unwrap();
                let got: BTreeSet<ProjPoint> = closure(&s).unwrap().hyperplane_points().into_iter().collect();
                let expected: BTreeSet<ProjPoint> = base.iter().map(|p| m.apply_point(&f, p)).collect();
                assert_eq!(got, expected);
                done += 1;
            }
        }
    }

    /// Property (*) by a second route: planes from point triples, lines from point pairs.
    fn star_oracle(s: &PointSet) -> bool {
        let f = s.field();
        let q = f.q() as usize;
        let space = s.hyperplane_space();
        let pts = space.all_points();
        let members: HashSet<ProjPoint> = s.hyperplane_points().into_iter().collect();
        let mut planes = HashSet::new();
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    if let Some(p) = Subspace::span_points(f, [a, b, c]) {
                        if p.dim() == 2 {
                            planes.insert(p);
                        }
                    }
                }
            }
        }
        for plane in planes {
            let ppts: Vec<ProjPoint> = pts.iter().filter(|p| plane.contains(f, p)).cloned().collect();
            let inter: HashSet<&ProjPoint> = ppts.iter().filter(|p| members.contains(*p)).collect();
            let mut lines = HashSet::new();
            for a in &ppts {
                for b in &ppts {
                    if a != b {
                        lines.insert(Subspace::span_points(f, [a, b]).unwrap());
                    }
                }
            }
            let lines: Vec<Subspace> = lines.into_iter().collect();
            for (i, l1) in lines.iter().enumerate() {
                for l2 in &lines[i + 1..] {
                    let union: HashSet<&ProjPoint> =
                        ppts.iter().filter(|p| l1.contains(f, p) || l2.contains(f, p)).collect();
                    let both: Vec<&ProjPoint> =
                        ppts.iter().filter(|p| l1.contains(f, p) && l2.contains(f, p)).collect();
                    let mut minus = union.clone();
                    minus.remove(both[0]);
                    if inter == union || inter == minus {
                        assert!(inter.len() == 2 * q + 1 || inter.len() == 2 * q);
                        return false;
                    }
                }
            }
        }
        true
    }

    fn tangent_oracle(s: &PointSet) -> bool {
        let f = s.field();
        let pts = s.hyperplane_space().all_points();
        let members: HashSet<ProjPoint> = s.hyperplane_points().into_iter().collect();
        pts.iter().filter(|p| !members.contains(*p)).all(|p| {
            pts.iter().filter(|r| *r != p).any(|r| {
                let l = Subspace::span_points(f, [p, r]).unwrap();
                pts.iter().filter(|x| members.contains(*x) && l.contains(f, x)).count() == 1
            })
        })
    }

    fn all_named_small() -> Vec<PointSet> {
        let mut out = Vec::new();
        for q in [2u32, 3, 4] {
            let f = fq(q);
            for name in NAMED_SETS {
                for n in [2usize, 3] {
                    if let Ok(s) = construct_named(name, n, &f, Some(2)) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn predicates_agree_with_oracles() {
        for s in all_named_small() {
            if s.n() == 3 && s.field().q() == 4 {
                continue;
            }
            let star = property_star(&s).unwrap() == StarVerdict::Holds;
            assert_eq!(star, star_oracle(&s), "{s:?}");
            let tan = tangent_cover(&s) == TangentVerdict::Holds;
            assert_eq!(tan, tangent_oracle(&s), "{s:?}");
        }
    }

    #[test]
    fn property_star_examples() {
        for q in [2u32, 3, 4, 5] {
            let f = fq(q);
            let s = construct_named("two_lines", 2, &f, None).unwrap();
            let StarVerdict::Violated { witness_plane } = property_star(&s).unwrap() else { panic!() };
            assert_eq!(witness_plane, s.ambient_space().hyperplane_at_infinity());
        }
        let ho = construct_named("hyperoval", 2, &fq(4), None).unwrap();
        assert_eq!(property_star(&ho).unwrap(), StarVerdict::Holds);
        let f3 = fq(3);
        let three = construct_named("three_lines_rem3", 3, &f3, None).unwrap();
        let StarVerdict::Violated { witness_plane } = property_star(&three).unwrap() else { panic!() };
        let pts = three.members();
        let on_plane = pts.iter().filter(|p| witness_plane.contains(&f3, p)).count();
        assert!(on_plane == 7 || on_plane == 6);
        assert!(property_star(&construct_named("point", 1, &f3, None).unwrap()).is_err());
    }

    #[test]
    fn tangent_cover_examples() {
        // for odd q the interior points of a conic lie on no tangent
        let f3 = fq(3);
        let conic = construct_named("conic_arc", 2, &f3, None).unwrap();
        let TangentVerdict::Violated { witness_point } = tangent_cover(&conic) else { panic!() };
        let w = witness_point.strip_first();
        let members = conic.hyperplane_points();
        for line in conic.hyperplane_space().subspaces(1).iter().filter(|l| l.contains(&f3, &w)) {
            let k = members.iter().filter(|p| line.contains(&f3, p)).count();
            assert!(k == 0 || k == 2);
        }
        let even = construct_named("conic_arc", 2, &fq(4), None).unwrap();
        assert_eq!(tangent_cover(&even), TangentVerdict::Holds);
        let qarc = construct_named("qarc_parabola", 2, &fq(4), None).unwrap();
        let TangentVerdict::Violated { witness_point } = tangent_cover(&qarc) else { panic!() };
        assert!(!qarc.contains(&witness_point));
        let full = construct_named("full", 2, &fq(4), None).unwrap();
        assert_eq!(tangent_cover(&full), TangentVerdict::Holds);
    }

    #[test]
    fn frame_search() {
        let f = fq(3);
        let tl = construct_named("two_lines", 2, &f, None).unwrap();
        let fr = find_frame(&f, 2, &tl.hyperplane_points()).unwrap();
        assert_eq!(fr.len(), 4);
        assert!(SemilinearMap::from_frame(&f, &fr).is_some());
        let line: Vec<ProjPoint> = construct_named("full", 1, &f, None).unwrap().hyperplane_points();
        assert_eq!(find_frame(&f, 1, &line).map(|v| v.len()), Some(3));
    }
}
