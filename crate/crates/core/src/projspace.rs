//! Points, subspaces and semilinear collineations of PG(d, q).
//!
//! Coordinates are row vectors. A point is normalized so that its first
//! nonzero coordinate is one; a subspace is stored by the reduced row echelon
//! form of any basis, which makes equality and hashing structural.
//!
//! Inside PG(n+1, q) the hyperplane at infinity is always `X0 = 0`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement};
use crate::permgrp::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix must be square")]
    NotSquare,
    #[error("automorphism exponent {e} must be below {h}")]
    BadExponent { e: u32, h: u32 },
    #[error("field element index {0} out of range")]
    BadElement(u32),
    #[error("dimension must be at least 1")]
    BadDimension,
    #[error("point file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Vector = Vec<FieldElement>;

/// A normalized point of a projective space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vector);

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl ProjPoint {
    /// Normalizes `coords` so that the first nonzero entry is one.
    pub fn new(field: &FieldCtx, mut coords: Vector) -> Result<Self, GeomError> {
        let lead = coords.iter().copied().find(|c| !c.is_zero()).ok_or(GeomError::ZeroVector)?;
        if lead != FieldElement::ONE {
            let inv = field.inv_nonzero(lead);
            for c in coords.iter_mut() {
                *c = field.mul(*c, inv);
            }
        }
        Ok(ProjPoint(coords))
    }

    /// Builds a point from element indices.
    pub fn from_indices(field: &FieldCtx, indices: &[u32]) -> Result<Self, GeomError> {
        let coords = indices
            .iter()
            .map(|&i| field.element(i).map_err(|_| GeomError::BadElement(i)))
            .collect::<Result<Vector, _>>()?;
        ProjPoint::new(field, coords)
    }

    pub(crate) fn from_normalized(coords: Vector) -> Self {
        ProjPoint(coords)
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn indices(&self) -> Vec<u32> {
        self.0.iter().map(|c| c.index() as u32).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the point lies on `X0 = 0`.
    pub fn at_infinity(&self) -> bool {
        self.0[0].is_zero()
    }

    /// Drops the first coordinate of a point of `X0 = 0`.
    pub fn strip_first(&self) -> ProjPoint {
        ProjPoint(self.0[1..].to_vec())
    }

    /// Prepends a zero coordinate, embedding into the hyperplane `X0 = 0`.
    pub fn embed_at_infinity(&self) -> ProjPoint {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(FieldElement::ZERO);
        v.extend_from_slice(&self.0);
        ProjPoint(v)
    }
}

/// The projective space PG(d, q) with a fixed enumeration of its points.
///
/// Points are ranked in lexicographic order of their normalized coordinate
/// index tuples, so points at infinity come first and the affine points
/// `(1, x1, ..., xd)` are the last `q^d` ranks.
#[derive(Clone, Debug)]
pub struct ProjSpace {
    dim: usize,
    field: FieldCtx,
    num_points: usize,
}

impl ProjSpace {
    pub fn new(dim: usize, field: &FieldCtx) -> Result<Self, GeomError> {
        if dim < 1 {
            return Err(GeomError::BadDimension);
        }
        let q = field.q() as usize;
        let num_points = (q.pow(dim as u32 + 1) - 1) / (q - 1);
        Ok(ProjSpace { dim, field: field.clone(), num_points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    /// Number of points on `X0 = 0`.
    pub fn num_points_at_infinity(&self) -> usize {
        let q = self.field.q() as usize;
        (q.pow(self.dim as u32) - 1) / (q - 1)
    }

    pub fn num_affine_points(&self) -> usize {
        (self.field.q() as usize).pow(self.dim as u32)
    }

    pub fn rank(&self, p: &ProjPoint) -> usize {
        let q = self.field.q() as usize;
        let lead = p.0.iter().position(|c| !c.is_zero()).expect("normalized point");
        let before = (q.pow((self.dim - lead) as u32) - 1) / (q - 1);
        let tail = p.0[lead + 1..].iter().fold(0usize, |acc, c| acc * q + c.index());
        before + tail
    }

    pub fn point(&self, rank: usize) -> ProjPoint {
        let q = self.field.q() as usize;
        let d = self.dim;
        // ranks below (q^(d-i) - 1)/(q-1) have their leading one after position i
        let mut lead = d;
        while lead > 0 && rank >= (q.pow((d - lead + 1) as u32) - 1) / (q - 1) {
            lead -= 1;
        }
        let mut tail = rank - (q.pow((d - lead) as u32) - 1) / (q - 1);
        let mut coords = vec![FieldElement::ZERO; d + 1];
        coords[lead] = FieldElement::ONE;
        for k in (lead + 1..=d).rev() {
            coords[k] = FieldElement::from_index_unchecked((tail % q) as u8);
            tail /= q;
        }
        ProjPoint(coords)
    }

    /// All points in rank order.
    pub fn all_points(&self) -> Vec<ProjPoint> {
        (0..self.num_points).map(|r| self.point(r)).collect()
    }

    /// Affine points `(1, x1, ..., xd)` in rank order.
    pub fn affine_points(&self) -> Vec<ProjPoint> {
        let start = self.num_points_at_infinity();
        (start..self.num_points).map(|r| self.point(r)).collect()
    }

    /// Index of an affine point among the affine points.
    pub fn affine_index(&self, p: &ProjPoint) -> Option<usize> {
        (p.0[0] == FieldElement::ONE).then(|| self.rank(p) - self.num_points_at_infinity())
    }

    /// All `k`-dimensional subspaces, enumerated by pivot set then free entries.
    pub fn subspaces(&self, k: usize) -> Vec<Subspace> {
        let n = self.dim + 1;
        if k + 1 > n {
            return Vec::new();
        }
        let q = self.field.q() as usize;
        let mut out = Vec::new();
        let mut pivots: Vec<usize> = (0..=k).collect();
        loop {
            let free: Vec<(usize, usize)> = (0..=k)
                .flat_map(|r| {
                    let piv = pivots.clone();
                    (piv[r] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let total = q.pow(free.len() as u32);
            for mut idx in 0..total {
                let mut rows = vec![vec![FieldElement::ZERO; n]; k + 1];
                for (r, &p) in pivots.iter().enumerate() {
                    rows[r][p] = FieldElement::ONE;
                }
                for &(r, c) in free.iter().rev() {
                    rows[r][c] = FieldElement::from_index_unchecked((idx % q) as u8);
                    idx /= q;
                }
                out.push(Subspace { rows, pivots: pivots.clone() });
            }
            // next pivot combination
            let mut i = k as isize;
            while i >= 0 && pivots[i as usize] == n - (k + 1) + i as usize {
                i -= 1;
            }
            if i < 0 {
                break;
            }
            pivots[i as usize] += 1;
            for j in (i as usize + 1)..=k {
                pivots[j] = pivots[j - 1] + 1;
            }
        }
        out
    }

    /// Ranks of the points of a subspace, sorted.
    pub fn subspace_ranks(&self, s: &Subspace) -> Vec<usize> {
        let mut r: Vec<usize> = s.points(&self.field).iter().map(|p| self.rank(p)).collect();
        r.sort_unstable();
        r
    }

    /// The hyperplane at infinity `X0 = 0`.
    pub fn hyperplane_at_infinity(&self) -> Subspace {
        let n = self.dim + 1;
        let rows: Vec<Vector> = (1..n)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; n];
                v[i] = FieldElement::ONE;
                v
            })
            .collect();
        Subspace::span_vectors(&self.field, rows).unwrap()
    }
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivots.
pub(crate) fn rref(field: &FieldCtx, rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv_nonzero(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let t = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{ y : M y^T = 0 }` for a matrix with `ncols` columns.
fn nullspace(field: &FieldCtx, rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(field, &mut m) };
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![FieldElement::ZERO; ncols];
            v[free] = FieldElement::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(m[r][free]);
            }
            v
        })
        .collect()
}

/// A nonempty projective subspace, stored in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter().map(|r| r.iter().map(|c| c.index()).collect::<Vec<_>>())).finish()
    }
}

impl Subspace {
    /// Span of a set of vectors; `None` if they are all zero.
    pub fn span_vectors(field: &FieldCtx, mut rows: Vec<Vector>) -> Option<Subspace> {
        if rows.is_empty() {
            return None;
        }
        let pivots = rref(field, &mut rows);
        (!rows.is_empty()).then_some(Subspace { rows, pivots })
    }

    /// Smallest subspace containing all the given points.
    pub fn span_points<'a>(field: &FieldCtx, points: impl IntoIterator<Item = &'a ProjPoint>) -> Option<Subspace> {
        Subspace::span_vectors(field, points.into_iter().map(|p| p.0.clone()).collect())
    }

    pub fn point(p: &ProjPoint) -> Subspace {
        let lead = p.0.iter().position(|c| !c.is_zero()).unwrap();
        Subspace { rows: vec![p.0.clone()], pivots: vec![lead] }
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Embeds into the hyperplane `X0 = 0` of the next dimension.
    pub fn embed_at_infinity(&self) -> Subspace {
        let rows =
            self.rows.iter().map(|r| std::iter::once(FieldElement::ZERO).chain(r.iter().copied()).collect()).collect();
        Subspace { rows, pivots: self.pivots.iter().map(|p| p + 1).collect() }
    }

    /// Projective dimension (rank minus one).
    pub fn dim(&self) -> usize {
        self.rows.len() - 1
    }

    /// Number of coordinates of the ambient space.
    pub fn ambient_len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn contains_vector(&self, field: &FieldCtx, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if !c.is_zero() {
                for (x, y) in w.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(c, *y));
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, field: &FieldCtx, p: &ProjPoint) -> bool {
        self.contains_vector(field, &p.0)
    }

    pub fn contains_subspace(&self, field: &FieldCtx, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(field, r))
    }

    /// Join of two subspaces.
    pub fn join(&self, field: &FieldCtx, other: &Subspace) -> Result<Subspace, GeomError> {
        if self.ambient_len() != other.ambient_len() {
            return Err(GeomError::DimensionMismatch { expected: self.ambient_len(), got: other.ambient_len() });
        }
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Subspace::span_vectors(field, rows).unwrap())
    }

    pub fn join_point(&self, field: &FieldCtx, p: &ProjPoint) -> Subspace {
        let mut rows = self.rows.clone();
        rows.push(p.0.clone());
        Subspace::span_vectors(field, rows).unwrap()
    }

    /// Intersection; `Ok(None)` when the subspaces are disjoint.
    pub fn meet(&self, field: &FieldCtx, other: &Subspace) -> Result<Option<Subspace>, GeomError> {
        let n = self.ambient_len();
        if n != other.ambient_len() {
            return Err(GeomError::DimensionMismatch { expected: n, got: other.ambient_len() });
        }
        let mut dual = nullspace(field, &self.rows, n);
        dual.extend(nullspace(field, &other.rows, n));
        let basis = nullspace(field, &dual, n);
        Ok(Subspace::span_vectors(field, basis))
    }

    /// All points of the subspace.
    pub fn points(&self, field: &FieldCtx) -> Vec<ProjPoint> {
        let k = self.rows.len();
        if k == 1 {
            return vec![ProjPoint(self.rows[0].clone())];
        }
        let coeff_space = ProjSpace::new(k - 1, field).unwrap();
        (0..coeff_space.num_points())
            .map(|r| {
                let c = coeff_space.point(r);
                let mut v = vec![FieldElement::ZERO; self.ambient_len()];
                for (ci, row) in c.0.iter().zip(&self.rows) {
                    if !ci.is_zero() {
                        for (x, y) in v.iter_mut().zip(row) {
                            *x = field.add(*x, field.mul(*ci, *y));
                        }
                    }
                }
                ProjPoint(v)
            })
            .collect()
    }
}

/// Renders points in the point file format: a `d q` header, then one point per line.
pub fn write_point_file(d: usize, q: u32, points: &[ProjPoint]) -> String {
    let mut out = format!("{d} {q}\n");
    for p in points {
        let idx: Vec<String> = p.indices().iter().map(u32::to_string).collect();
        out.push_str(&idx.join(","));
        out.push('\n');
    }
    out
}

/// Parses a point file into its header and raw coordinate index rows.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_point_file(text: &str) -> Result<(usize, u32, Vec<Vec<u32>>), GeomError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(GeomError::Parse { line: 1, msg: "missing header".into() })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || GeomError::Parse { line: hl, msg: format!("expected `d q`, got `{header}`") };
    if parts.len() != 2 {
        return Err(bad_header());
    }
    let d: usize = parts[0].parse().map_err(|_| bad_header())?;
    let q: u32 = parts[1].parse().map_err(|_| bad_header())?;
    let mut rows = Vec::new();
    for (ln, l) in lines {
        let row = l
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|e| GeomError::Parse { line: ln, msg: e.to_string() })?;
        if row.len() != d + 1 {
            return Err(GeomError::Parse {
                line: ln,
                msg: format!("expected {} coordinates, got {}", d + 1, row.len()),
            });
        }
        rows.push(row);
    }
    Ok((d, q, rows))
}

/// Points of a line (q + 1 of them).
pub fn line_points(field: &FieldCtx, line: &Subspace) -> Vec<ProjPoint> {
    debug_assert_eq!(line.dim(), 1);
    line.points(field)
}

pub(crate) fn vec_add(field: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Vector {
    a.iter().zip(b).map(|(x, y)| field.add(*x, *y)).collect()
}

pub(crate) fn vec_scale(field: &FieldCtx, c: FieldElement, a: &[FieldElement]) -> Vector {
    a.iter().map(|x| field.mul(c, *x)).collect()
}

fn mat_mul(field: &FieldCtx, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter().zip(b).fold(FieldElement::ZERO, |acc, (x, brow)| field.add(acc, field.mul(*x, brow[j])))
                })
                .collect()
        })
        .collect()
}

fn mat_inverse(field: &FieldCtx, m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let mut aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }));
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn mat_frob(field: &FieldCtx, m: &[Vector], e: u32) -> Vec<Vector> {
    m.iter().map(|r| r.iter().map(|x| field.frob(*x, e)).collect()).collect()
}

/// Serialized form of a semilinear map.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MapFile {
    pub matrix: Vec<Vec<u32>>,
    pub autexp: u32,
}

/// An element of PΓL(d+1, q): `x ↦ x^θ · M` with `θ = Frobenius^autexp`.
///
/// The matrix is scaled so that its first nonzero entry (row-major) is one,
/// giving a unique representative per projective class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    matrix: Vec<Vector>,
    autexp: u32,
}

impl fmt::Debug for SemilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<Vec<usize>> = self.matrix.iter().map(|r| r.iter().map(|c| c.index()).collect()).collect();
        write!(f, "SemilinearMap({m:?}, θ^{})", self.autexp)
    }
}

impl SemilinearMap {
    pub fn new(field: &FieldCtx, matrix: Vec<Vector>, autexp: u32) -> Result<Self, GeomError> {
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(GeomError::NotSquare);
        }
        if autexp >= field.h() {
            return Err(GeomError::BadExponent { e: autexp, h: field.h() });
        }
        if mat_inverse(field, &matrix).is_none() {
            return Err(GeomError::Singular);
        }
        Ok(SemilinearMap { matrix, autexp }.canonicalize(field))
    }

    pub fn from_indices(field: &FieldCtx, matrix: &[Vec<u32>], autexp: u32) -> Result<Self, GeomError> {
        let m = matrix
            .iter()
            .map(|r| r.iter().map(|&i| field.element(i).map_err(|_| GeomError::BadElement(i))).collect())
            .collect::<Result<Vec<Vector>, _>>()?;
        SemilinearMap::new(field, m, autexp)
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Self {
        let m = (0..n)
            .map(|i| (0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }).collect())
            .collect();
        SemilinearMap { matrix: m, autexp: 0 }.canonicalize(field)
    }

    /// Rescales so the first nonzero entry in row-major order is one. Idempotent.
    pub fn canonicalize(mut self, field: &FieldCtx) -> Self {
        let lead = self.matrix.iter().flatten().copied().find(|x| !x.is_zero()).unwrap();
        if lead != FieldElement::ONE {
            let inv = field.inv_nonzero(lead);
            for row in self.matrix.iter_mut() {
                for x in row.iter_mut() {
                    *x = field.mul(*x, inv);
                }
            }
        }
        self
    }

    pub fn matrix(&self) -> &[Vector] {
        &self.matrix
    }

    pub fn autexp(&self) -> u32 {
        self.autexp
    }

    /// Number of homogeneous coordinates it acts on.
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_identity(&self, field: &FieldCtx) -> bool {
        *self == SemilinearMap::identity(field, self.size())
    }

    pub fn apply_vector(&self, field: &FieldCtx, v: &[FieldElement]) -> Vector {
        let n = self.matrix.len();
        let mut out = vec![FieldElement::ZERO; n];
        for (i, x) in v.iter().enumerate() {
            let xt = field.frob(*x, self.autexp);
            if xt.is_zero() {
                continue;
            }
            for j in 0..n {
                out[j] = field.add(out[j], field.mul(xt, self.matrix[i][j]));
            }
        }
        out
    }

    pub fn apply_point(&self, field: &FieldCtx, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(field, self.apply_vector(field, &p.0)).expect("invertible map")
    }

    pub fn apply_subspace(&self, field: &FieldCtx, s: &Subspace) -> Subspace {
        let rows = s.rows.iter().map(|r| self.apply_vector(field, r)).collect();
        Subspace::span_vectors(field, rows).unwrap()
    }

    /// `self` followed by `other`.
    pub fn then(&self, field: &FieldCtx, other: &SemilinearMap) -> SemilinearMap {
        let autexp = (self.autexp + other.autexp) % field.h();
        let m = mat_mul(field, &mat_frob(field, &self.matrix, other.autexp), &other.matrix);
        SemilinearMap { matrix: m, autexp }.canonicalize(field)
    }

    pub fn inverse(&self, field: &FieldCtx) -> SemilinearMap {
        let autexp = (field.h() - self.autexp) % field.h();
        let m = mat_inverse(field, &mat_frob(field, &self.matrix, autexp)).expect("invertible");
        SemilinearMap { matrix: m, autexp }.canonicalize(field)
    }

    /// Permutation induced on the points of `space`, indexed by rank.
    pub fn point_perm(&self, space: &ProjSpace) -> Perm {
        let field = space.field();
        let images =
            (0..space.num_points()).map(|r| space.rank(&self.apply_point(field, &space.point(r))) as u32).collect();
        Perm::from_images_unchecked(images)
    }

    /// The linear map sending the standard frame `e_0, ..., e_d, (1, ..., 1)`
    /// to `frame`; `None` if `frame` is not in general position.
    pub fn from_frame(field: &FieldCtx, frame: &[ProjPoint]) -> Option<SemilinearMap> {
        let n = frame.len().checked_sub(1)?;
        if n == 0 || frame.iter().any(|p| p.len() != n) {
            return None;
        }
        let f: Vec<Vector> = frame[..n].iter().map(|p| p.0.clone()).collect();
        // solve lambda · F = u
        let f_inv = mat_inverse(field, &f)?;
        let lambda = mat_mul(field, &[frame[n].0.clone()], &f_inv).remove(0);
        if lambda.iter().any(|x| x.is_zero()) {
            return None;
        }
        let m: Vec<Vector> = f.iter().zip(&lambda).map(|(row, l)| vec_scale(field, *l, row)).collect();
        SemilinearMap::new(field, m, 0).ok()
    }

    /// Recovers the collineation with the given action on points, if there is one.
    ///
    /// The images of the standard frame fix the matrix up to the field
    /// automorphism; each automorphism is tried and the result is checked on
    /// every point of the space.
    pub fn from_point_images(space: &ProjSpace, image: impl Fn(&ProjPoint) -> ProjPoint) -> Option<SemilinearMap> {
        let field = space.field();
        let n = space.dim() + 1;
        let unit = |i: usize| {
            let mut v = vec![FieldElement::ZERO; n];
            v[i] = FieldElement::ONE;
            ProjPoint(v)
        };
        let mut frame: Vec<ProjPoint> = (0..n).map(|i| image(&unit(i))).collect();
        frame.push(image(&ProjPoint(vec![FieldElement::ONE; n])));
        let m = SemilinearMap::from_frame(field, &frame)?.matrix;
        let all = space.all_points();
        (0..field.h()).find_map(|e| {
            let cand = SemilinearMap::new(field, m.clone(), e).ok()?;
            all.iter().all(|p| cand.apply_point(field, p) == image(p)).then_some(cand)
        })
    }

    pub fn to_file(&self) -> MapFile {
        MapFile {
            matrix: self.matrix.iter().map(|r| r.iter().map(|c| c.index() as u32).collect()).collect(),
            autexp: self.autexp,
        }
    }

    pub fn from_file(field: &FieldCtx, file: &MapFile) -> Result<Self, GeomError> {
        SemilinearMap::from_indices(field, &file.matrix, file.autexp)
    }
}

/// Elements of the prime-field basis `{1, x, x^2, ...}` of GF(q).
fn additive_basis(field: &FieldCtx) -> Vec<FieldElement> {
    (0..field.h()).map(|j| field.element(field.p().pow(j)).unwrap()).collect()
}

/// Generators of Persp(H∞): the collineations of PG(n+1, q) fixing `X0 = 0`
/// pointwise. Translations `(1, x) ↦ (1, x + b)` over an additive basis, plus
/// one homology with center `(1, 0, ..., 0)`.
pub fn persp_generators(n: usize, field: &FieldCtx) -> Vec<SemilinearMap> {
    let size = n + 2;
    let base = |a: FieldElement, b: &[FieldElement]| -> SemilinearMap {
        let mut m = vec![vec![FieldElement::ZERO; size]; size];
        m[0][0] = a;
        m[0][1..].copy_from_slice(b);
        for (i, row) in m.iter_mut().enumerate().skip(1) {
            row[i] = FieldElement::ONE;
        }
        SemilinearMap::new(field, m, 0).unwrap()
    };
    let mut gens = Vec::new();
    for i in 0..n + 1 {
        for c in additive_basis(field) {
            let mut b = vec![FieldElement::ZERO; n + 1];
            b[i] = c;
            gens.push(base(FieldElement::ONE, &b));
        }
    }
    let prim = field.primitive_element();
    if prim != FieldElement::ONE {
        gens.push(base(prim, &vec![FieldElement::ZERO; n + 1]));
    }
    gens
}

/// Generators of PΓL(d+1, q): elementary transvections over an additive
/// basis, one diagonal matrix with a primitive entry, and the Frobenius map.
pub fn pgammal_generators(d: usize, field: &FieldCtx) -> Vec<SemilinearMap> {
    let n = d + 1;
    let ident = || -> Vec<Vector> {
        (0..n).map(|i| (0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }).collect()).collect()
    };
    let mut gens = Vec::new();
    let prim = field.primitive_element();
    if prim != FieldElement::ONE {
        let mut m = ident();
        m[0][0] = prim;
        gens.push(SemilinearMap::new(field, m, 0).unwrap());
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in additive_basis(field) {
                let mut m = ident();
                m[i][j] = c;
                gens.push(SemilinearMap::new(field, m, 0).unwrap());
            }
        }
    }
    if field.h() > 1 {
        gens.push(SemilinearMap::new(field, ident(), 1).unwrap());
    }
    gens
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFlavor {
    Pgl,
    Pgammal,
}

/// `|PGL(d+1, q)| = prod_{i=0}^{d} (q^{d+1} - q^i) / (q - 1)`, times `h` for PΓL.
pub fn group_order_formula(d: usize, field: &FieldCtx, flavor: GroupFlavor) -> BigUint {
    let q = BigUint::from(field.q());
    let qn = q.pow(d as u32 + 1);
    let mut order = BigUint::one();
    for i in 0..=d {
        order *= &qn - q.pow(i as u32);
    }
    order /= &q - BigUint::one();
    match flavor {
        GroupFlavor::Pgl => order,
        GroupFlavor::Pgammal => order * BigUint::from(field.h()),
    }
}
