//! The weighted X-ray of the cube moment polytope: the face lattice used by
//! the wall-crossing recursion, plus full orbit-type stratum enumeration for
//! small ranks.
//!
//! Two tiers deliberately coexist. The recursion pipeline only ever crosses
//! faces of the cube from outside, so it needs nothing beyond [`CubeFace`]
//! and [`normal_weight_signs`]. Full stratum enumeration
//! ([`enumerate_strata`], capped at `r <= 4`) exists to inspect the interior
//! walls — the moment images of positive-dimensional orbit-type strata —
//! and to measure their crossing data with [`interior_wall_signs`].

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::action::SignMatrix;
use crate::{Error, Result};

/// One coordinate of a cube face: pinned at `±1/2` or free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceCoord {
    /// Pinned at `sign / 2`; the payload is `-1` or `+1`.
    Fixed(i8),
    Free,
}

/// A face of the cube `[-1/2, 1/2]^r`: a sign pattern with free slots.
///
/// The relative interior of a face is the sub-chamber the recursion assigns
/// values to; a face also identifies the orbit-type stratum spanned by the
/// columns agreeing with its pinned signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeFace {
    coords: Vec<FaceCoord>,
}

impl CubeFace {
    /// Vertex face from a full sign vector.
    pub fn vertex(signs: &[i8]) -> Self {
        CubeFace {
            coords: signs.iter().map(|&s| FaceCoord::Fixed(s)).collect(),
        }
    }

    /// Vertex face for canonical column `j` of the rank-`r` matrix.
    pub fn vertex_from_column(r: u32, j: usize) -> Self {
        CubeFace {
            coords: (0..r)
                .map(|i| FaceCoord::Fixed(if (j >> i) & 1 == 0 { 1 } else { -1 }))
                .collect(),
        }
    }

    /// The full cube as a face of itself.
    pub fn interior(r: u32) -> Self {
        CubeFace {
            coords: vec![FaceCoord::Free; r as usize],
        }
    }

    pub fn from_coords(coords: Vec<FaceCoord>) -> Self {
        CubeFace { coords }
    }

    /// Ambient rank `r`.
    pub fn rank(&self) -> u32 {
        self.coords.len() as u32
    }

    /// Number of free coordinates.
    pub fn dim(&self) -> u32 {
        self.coords
            .iter()
            .filter(|c| matches!(c, FaceCoord::Free))
            .count() as u32
    }

    pub fn is_vertex(&self) -> bool {
        self.dim() == 0
    }

    pub fn coords(&self) -> &[FaceCoord] {
        &self.coords
    }

    /// Pinned sign of coordinate `i`, `None` if free.
    pub fn fixed_sign(&self, i: usize) -> Option<i8> {
        match self.coords[i] {
            FaceCoord::Fixed(s) => Some(s),
            FaceCoord::Free => None,
        }
    }

    /// Indices of free coordinates.
    pub fn free_axes(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| matches!(c, FaceCoord::Free).then_some(i))
            .collect()
    }

    /// Face obtained by freeing one pinned coordinate.
    pub fn freed(&self, axis: usize) -> Self {
        let mut coords = self.coords.clone();
        debug_assert!(matches!(coords[axis], FaceCoord::Fixed(_)));
        coords[axis] = FaceCoord::Free;
        CubeFace { coords }
    }

    /// True iff `sub` is a face of `self` (every coordinate pinned in `self`
    /// is pinned to the same sign in `sub`).
    pub fn contains(&self, sub: &CubeFace) -> bool {
        self.coords.len() == sub.coords.len()
            && self.coords.iter().zip(&sub.coords).all(|(o, s)| match o {
                FaceCoord::Free => true,
                FaceCoord::Fixed(_) => o == s,
            })
    }

    /// For an incident codimension-1 pair, the unique coordinate free in
    /// `outer` but pinned in `inner`.
    pub fn crossing_axis(inner: &CubeFace, outer: &CubeFace) -> Result<usize> {
        if inner.coords.len() != outer.coords.len()
            || outer.dim() != inner.dim() + 1
            || !outer.contains(inner)
        {
            return Err(Error::FacesNotIncident(format!(
                "{inner} is not a codimension-1 subface of {outer}"
            )));
        }
        Ok(inner
            .coords
            .iter()
            .zip(&outer.coords)
            .position(|(i, o)| matches!(i, FaceCoord::Fixed(_)) && matches!(o, FaceCoord::Free))
            .expect("incident faces differ in exactly one coordinate"))
    }

    /// Pattern string over `{+, -, *}`, one char per coordinate.
    pub fn pattern(&self) -> String {
        self.coords
            .iter()
            .map(|c| match c {
                FaceCoord::Fixed(1) => '+',
                FaceCoord::Fixed(_) => '-',
                FaceCoord::Free => '*',
            })
            .collect()
    }
}

impl fmt::Display for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pattern())
    }
}

/// All `3^r` faces of the cube, ordered by dimension then pattern.
///
/// Sizes grow as `3^r`; the precondition `r <= 20` is a hard cap and callers
/// are expected to stay far below it (the CLI stops at `r = 8`).
pub fn enumerate_faces(r: u32) -> Vec<CubeFace> {
    assert!((1..=20).contains(&r), "enumerate_faces supports 1 <= r <= 20");
    let mut faces = Vec::with_capacity(3usize.pow(r));
    let mut digits = vec![0u8; r as usize];
    loop {
        faces.push(CubeFace {
            coords: digits
                .iter()
                .map(|&d| match d {
                    0 => FaceCoord::Fixed(-1),
                    1 => FaceCoord::Fixed(1),
                    _ => FaceCoord::Free,
                })
                .collect(),
        });
        let mut i = 0;
        loop {
            if i == digits.len() {
                faces.sort_by_key(|face| (face.dim(), face.coords.clone()));
                return faces;
            }
            digits[i] += 1;
            if digits[i] < 3 {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Columns of `a` whose sign vectors agree with the face's pinned signs.
/// These span the face's stratum, a projective space of dimension
/// `2^dim - 1`.
pub fn face_strata_columns(face: &CubeFace, a: &SignMatrix) -> Vec<usize> {
    assert_eq!(face.rank(), a.rank(), "face rank must match matrix rank");
    (0..a.num_columns())
        .filter(|&j| {
            a.column(j)
                .iter()
                .enumerate()
                .all(|(i, &s)| match face.fixed_sign(i) {
                    Some(fs) => fs == s,
                    None => true,
                })
        })
        .collect()
}

/// Signed count of normal-bundle weights for an incident face crossing.
///
/// `inner` must be a codimension-1 subface of `outer`; `entry_side` is the
/// sign (`±1`) of the side of `inner`, along the crossing axis, the path
/// enters from. Entering from outside the cube means
/// `entry_side == inner.fixed_sign(axis)`.
///
/// The weights are the column differences `alpha_l - alpha_j` for `l` in the
/// outer stratum but not the inner one, with `j` the lowest-index inner
/// column; each is projected on the crossing axis and counted backward (`b`,
/// against the travel direction) or forward (`f`, with it), with
/// multiplicity.
pub fn normal_weight_signs(
    inner: &CubeFace,
    outer: &CubeFace,
    a: &SignMatrix,
    entry_side: i8,
) -> Result<(usize, usize)> {
    let axis = CubeFace::crossing_axis(inner, outer)?;
    assert!(entry_side == 1 || entry_side == -1, "entry_side must be ±1");
    let inner_cols = face_strata_columns(inner, a);
    let outer_cols = face_strata_columns(outer, a);
    let inner_set: BTreeSet<usize> = inner_cols.iter().copied().collect();
    let base = inner_cols[0];
    let mut b = 0usize;
    let mut f = 0usize;
    for l in outer_cols {
        if inner_set.contains(&l) {
            continue;
        }
        let proj = i32::from(a.column(l)[axis]) - i32::from(a.column(base)[axis]);
        debug_assert!(proj != 0);
        // travel direction along the axis is -entry_side
        if proj * i32::from(entry_side) < 0 {
            f += 1;
        } else {
            b += 1;
        }
    }
    Ok((b, f))
}

/// Entry side corresponding to an approach from outside the cube.
pub fn exterior_entry_side(inner: &CubeFace, axis: usize) -> i8 {
    inner
        .fixed_sign(axis)
        .expect("crossing axis must be pinned in the inner face")
}

/// A connected orbit-type stratum, identified by the maximal set of columns
/// whose weight vectors share an affine span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    /// Sorted column indices; closed under affine span membership, so the
    /// closure of the stratum is the projective space on these coordinates.
    pub columns: Vec<usize>,
    /// Dimension of the infinitesimal stabilizer, `r - moment_dim`.
    pub stab_dim: u32,
    /// Affine rank of the column set; the dimension of the moment image.
    pub moment_dim: u32,
    /// Moment images `alpha_j / 2` of the member columns.
    pub moment_vertices: Vec<Vec<BigRational>>,
}

/// Enumeration cap for full stratum listing.
pub const STRATA_MAX_RANK: u32 = 4;

fn half_column(a: &SignMatrix, j: usize) -> Vec<BigRational> {
    a.column(j)
        .iter()
        .map(|&s| BigRational::new(BigInt::from(s), BigInt::from(2)))
        .collect()
}

/// Reduced echelon basis over Q, carried as primitive integer rows.
/// Entries stay tiny here (column differences, cross-multiplied and
/// gcd-normalized), so i64 arithmetic is exact.
struct SpanBasis {
    rows: Vec<Vec<i64>>, // sorted by pivot column, pivots exclusive
}

impl SpanBasis {
    fn new() -> Self {
        SpanBasis { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn normalize(row: &mut [i64]) {
        let g = row.iter().fold(0i64, |g, &x| g.gcd(&x.abs()));
        if g > 1 {
            for x in row.iter_mut() {
                *x /= g;
            }
        }
    }

    /// Reduce `row` against the basis in place; returns its pivot column if
    /// a nonzero remainder is left.
    fn reduce(&self, row: &mut [i64]) -> Option<usize> {
        for b in &self.rows {
            let c = b.iter().position(|&x| x != 0).unwrap();
            if row[c] != 0 {
                let (p, q) = (b[c], row[c]);
                for (x, &y) in row.iter_mut().zip(b) {
                    *x = *x * p - q * y;
                }
                Self::normalize(row);
            }
        }
        row.iter().position(|&x| x != 0)
    }

    fn contains(&self, mut row: Vec<i64>) -> bool {
        self.reduce(row.as_mut_slice()).is_none()
    }

    fn insert(&mut self, mut row: Vec<i64>) {
        let Some(pivot) = self.reduce(&mut row) else {
            return;
        };
        Self::normalize(&mut row);
        // clear the new pivot column from the existing rows
        for b in &mut self.rows {
            if b[pivot] != 0 {
                let (p, q) = (row[pivot], b[pivot]);
                for (x, &y) in b.iter_mut().zip(&row) {
                    *x = *x * p - q * y;
                }
                Self::normalize(b);
            }
        }
        self.rows.push(row);
        self.rows
            .sort_by_key(|r| r.iter().position(|&x| x != 0).unwrap());
    }
}

fn column_diff_i64(a: &SignMatrix, l: usize, base: usize) -> Vec<i64> {
    a.column(l)
        .iter()
        .zip(a.column(base))
        .map(|(&x, &y)| i64::from(x) - i64::from(y))
        .collect()
}

fn column_diff(a: &SignMatrix, l: usize, base: usize) -> Vec<BigRational> {
    column_diff_i64(a, l, base)
        .into_iter()
        .map(|d| BigRational::from(BigInt::from(d)))
        .collect()
}

fn difference_span(a: &SignMatrix, columns: &[usize]) -> SpanBasis {
    let base = columns[0];
    let mut basis = SpanBasis::new();
    for &j in &columns[1..] {
        basis.insert(column_diff_i64(a, j, base));
    }
    basis
}

/// Affine closure of a column subset: all columns lying in the affine span.
fn affine_closure(a: &SignMatrix, subset: &[usize]) -> Vec<usize> {
    let base = subset[0];
    let basis = difference_span(a, subset);
    (0..a.num_columns())
        .filter(|&l| l == base || basis.contains(column_diff_i64(a, l, base)))
        .collect()
}

/// All orbit-type strata of the rank-`r` action, for `r <= 4`.
///
/// Every stratum is the affine closure of some column subset, and every
/// closure is reached from an affinely independent subset of at most `r + 1`
/// columns, so those closures are enumerated and deduplicated. The result is
/// ordered by moment dimension, then by column list.
pub fn enumerate_strata(a: &SignMatrix) -> Result<Vec<Stratum>> {
    let r = a.rank();
    if r > STRATA_MAX_RANK {
        return Err(Error::CapExceeded {
            what: "stratum enumeration",
            cap: STRATA_MAX_RANK,
            got: r,
        });
    }
    let n = a.num_columns();
    let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
    for size in 1..=(r as usize + 1) {
        for subset in (0..n).combinations(size) {
            closed.insert(affine_closure(a, &subset));
        }
    }
    let mut strata: Vec<Stratum> = closed
        .into_iter()
        .map(|columns| {
            let moment_dim = difference_span(a, &columns).rank() as u32;
            Stratum {
                moment_vertices: columns.iter().map(|&j| half_column(a, j)).collect(),
                stab_dim: r - moment_dim,
                moment_dim,
                columns,
            }
        })
        .collect();
    strata.sort_by(|x, y| {
        (x.moment_dim, &x.columns).cmp(&(y.moment_dim, &y.columns))
    });
    Ok(strata)
}

/// True iff the stratum's moment image lies in the cube boundary, i.e. all
/// member columns share a sign in some coordinate.
pub fn is_boundary_stratum(s: &Stratum, a: &SignMatrix) -> bool {
    (0..a.rank() as usize).any(|i| {
        let first = a.column(s.columns[0])[i];
        s.columns.iter().all(|&j| a.column(j)[i] == first)
    })
}

/// Primitive integer normal of a codimension-1 stratum's wall, as rationals.
///
/// Returns `None` unless `moment_dim == r - 1`. The normal annihilates all
/// column differences within the stratum; it is scaled to a primitive
/// integer vector whose first nonzero entry is positive.
pub fn wall_normal(s: &Stratum, a: &SignMatrix) -> Option<Vec<BigRational>> {
    let r = a.rank() as usize;
    if s.moment_dim != a.rank() - 1 {
        return None;
    }
    let base = s.columns[0];
    let mut rows: Vec<Vec<BigRational>> = s.columns[1..]
        .iter()
        .map(|&j| column_diff(a, j, base))
        .collect();
    // reduced row echelon form
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..r {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pv = rows[rank][c].clone();
        for x in &mut rows[rank] {
            *x /= &pv;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, pr) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * pr;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    debug_assert_eq!(rank, r - 1);
    let free = (0..r).find(|c| !pivots.contains(c))?;
    let mut normal = vec![BigRational::zero(); r];
    normal[free] = BigRational::from(BigInt::from(1));
    for (row, &pc) in pivots.iter().enumerate() {
        normal[pc] = -rows[row][free].clone();
    }
    // scale to a primitive integer vector, first nonzero entry positive
    let mut denom_lcm = BigInt::from(1);
    for x in &normal {
        denom_lcm = num_integer::lcm(denom_lcm, x.denom().clone());
    }
    let mut ints: Vec<BigInt> = normal
        .iter()
        .map(|x| (x * BigRational::from(denom_lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::gcd(g, x.abs());
    }
    if !g.is_zero() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in &mut ints {
            *x = -x.clone();
        }
    }
    Some(ints.into_iter().map(BigRational::from).collect())
}

/// Signed weight counts for crossing a codimension-1 interior wall along
/// `crossing_normal` (the `+normal` side counts as forward).
///
/// The weights are `alpha_l - alpha_j` over columns `l` outside the stratum,
/// with `j` its lowest-index column, projected onto the normal and counted
/// with multiplicity. The normal must be nonzero and annihilate the wall.
pub fn interior_wall_signs(
    s: &Stratum,
    crossing_normal: &[BigRational],
    a: &SignMatrix,
) -> Result<(usize, usize)> {
    let r = a.rank();
    if s.moment_dim != r - 1 {
        return Err(Error::DegenerateCrossing(format!(
            "stratum on columns {:?} has moment dimension {}, not the codimension-1 value {}",
            s.columns,
            s.moment_dim,
            r - 1
        )));
    }
    if crossing_normal.len() != r as usize || crossing_normal.iter().all(Zero::is_zero) {
        return Err(Error::DegenerateCrossing(
            "crossing normal must be a nonzero vector of length r".into(),
        ));
    }
    let base = s.columns[0];
    let dot = |l: usize| -> BigRational {
        column_diff(a, l, base)
            .iter()
            .zip(crossing_normal)
            .map(|(d, n)| d * n)
            .sum()
    };
    for &j in &s.columns[1..] {
        if !dot(j).is_zero() {
            return Err(Error::DegenerateCrossing(format!(
                "normal does not annihilate the wall: column {j} has nonzero projection"
            )));
        }
    }
    let member: BTreeSet<usize> = s.columns.iter().copied().collect();
    let mut b = 0usize;
    let mut f = 0usize;
    for l in 0..a.num_columns() {
        if member.contains(&l) {
            continue;
        }
        let proj = dot(l);
        if proj.is_zero() {
            return Err(Error::DegenerateCrossing(format!(
                "column {l} lies in the wall hyperplane but not in the stratum"
            )));
        }
        if proj.is_positive() {
            f += 1;
        } else {
            b += 1;
        }
    }
    Ok((b, f))
}
