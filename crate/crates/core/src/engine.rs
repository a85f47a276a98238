//! The recursive wall-crossing machinery.
//!
//! An invariant is built from outside the polytope: a vertex carries the unit
//! value, and entering the interior of each successively higher-dimensional
//! face multiplies by the crossing function of that wall's signed weight
//! counts. The generic [`recursive_step`] also covers interior crossings with
//! a nonzero previous value and a sum over subwalls; the cube pipeline always
//! has a single subwall term with a zero previous value.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::SignMatrix;
use crate::poly::Polynomial;
use crate::xray::{self, CubeFace};
use crate::{Error, Result};

/// Ring values a crossing function can produce.
pub trait RingElement: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl RingElement for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn add(&self, other: &Self) -> Self {
        Polynomial::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Polynomial::mul(self, other)
    }
}

impl RingElement for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// A wall-crossing function `C(b, f)` into some ring.
///
/// Both shipped instances satisfy `C(b, b) = 0`.
pub trait CrossingFunction {
    type Value: RingElement;
    fn cross(&self, b: usize, f: usize) -> Self::Value;
}

/// Poincaré-polynomial crossing, `(t^{2b} - t^{2f}) / (1 - t^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PoincareCrossing;

impl CrossingFunction for PoincareCrossing {
    type Value = Polynomial;
    fn cross(&self, b: usize, f: usize) -> Polynomial {
        poincare_crossing(b, f)
    }
}

/// Euler-characteristic crossing, `f - b`.
///
/// This is the Poincaré crossing evaluated at `t = -1`; only this sign makes
/// the positive closed-form Euler characteristics come out.
#[derive(Debug, Clone, Copy, Default)]
pub struct EulerCrossing;

impl CrossingFunction for EulerCrossing {
    type Value = BigInt;
    fn cross(&self, b: usize, f: usize) -> BigInt {
        euler_crossing(b, f)
    }
}

/// Closed form of `(t^{2b} - t^{2f}) / (1 - t^2)`:
/// for `f > b` the sum `t^{2b} + ... + t^{2f-2}`, for `b > f` its negation
/// with the roles swapped, zero when balanced.
pub fn poincare_crossing(b: usize, f: usize) -> Polynomial {
    if b == f {
        return Polynomial::zero();
    }
    let (lo, hi, sign) = if f > b { (b, f, 1) } else { (f, b, -1) };
    let mut coeffs = vec![<BigInt as Zero>::zero(); hi];
    for c in coeffs.iter_mut().take(hi).skip(lo) {
        *c = BigInt::from(sign);
    }
    Polynomial::from_coeffs(coeffs)
}

/// Euler-characteristic crossing value `f - b`.
pub fn euler_crossing(b: usize, f: usize) -> BigInt {
    BigInt::from(f as i64) - BigInt::from(b as i64)
}

/// One recursion step: `prev + C(b, f) * wall_value`.
///
/// Crossings from the exterior have `prev = 0`, reducing this to the
/// boundary condition. Summing over several subwalls is repeated application.
pub fn recursive_step<C: CrossingFunction>(
    prev: &C::Value,
    wall_value: &C::Value,
    b: usize,
    f: usize,
    cross: &C,
) -> C::Value {
    prev.add(&cross.cross(b, f).mul(wall_value))
}

/// One wall crossing in a walk: entering the relative interior of `entered`
/// from outside the cube, across the subwall `wall`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingStep<V> {
    pub wall: CubeFace,
    pub entered: CubeFace,
    pub b: usize,
    pub f: usize,
    pub factor: V,
    pub running: V,
}

/// Audit log of a walk. Every step starts at an exterior point (previous
/// value zero), so each running value is the crossing factor times the
/// previous step's running value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace<V> {
    pub steps: Vec<CrossingStep<V>>,
}

impl<V> Trace<V> {
    pub fn final_value(&self) -> Option<&V> {
        self.steps.last().map(|s| &s.running)
    }
}

/// Write-once map from a face to the invariant of its interior sub-chamber.
///
/// Inserting a value that disagrees with a stored one would mean two walks
/// computed different invariants for the same face; that is a soundness
/// violation, so it panics.
#[derive(Debug, Clone, Default)]
pub struct WallValueCache<V> {
    values: HashMap<CubeFace, V>,
}

impl<V: RingElement> WallValueCache<V> {
    pub fn new() -> Self {
        WallValueCache {
            values: HashMap::new(),
        }
    }

    pub fn get(&self, face: &CubeFace) -> Option<&V> {
        self.values.get(face)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_insert(&mut self, face: &CubeFace, value: &V) {
        match self.values.get(face) {
            Some(old) => assert!(
                old == value,
                "path-dependent wall value at face {face}: {old} vs {value}"
            ),
            None => {
                self.values.insert(face.clone(), value.clone());
            }
        }
    }
}

fn validate_path(r: u32, path: &[CubeFace]) -> Result<()> {
    if path.is_empty() {
        return Err(Error::InvalidPath("path is empty".into()));
    }
    for face in path {
        if face.rank() != r {
            return Err(Error::InvalidPath(format!(
                "face {face} has rank {}, expected {r}",
                face.rank()
            )));
        }
    }
    if path[0].dim() != 0 {
        return Err(Error::InvalidPath(format!(
            "path must start at a vertex, got {} of dimension {}",
            path[0],
            path[0].dim()
        )));
    }
    if path[path.len() - 1].dim() != r {
        return Err(Error::InvalidPath(format!(
            "path must end at the cube interior, got {}",
            path[path.len() - 1]
        )));
    }
    for w in path.windows(2) {
        if w[1].dim() != w[0].dim() + 1 || !w[1].contains(&w[0]) {
            return Err(Error::InvalidPath(format!(
                "consecutive faces {} -> {} are not an ascending incident pair",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Walk an ascending face chain from a vertex to the cube interior,
/// recording a full trace. See [`walk`] for the self-contained variant.
///
/// Each crossing's `(b, f)` is measured from the normal-bundle weights via
/// [`xray::normal_weight_signs`]; nothing is assumed about the counts.
pub fn walk_with_cache<C: CrossingFunction>(
    a: &SignMatrix,
    path: &[CubeFace],
    invariant: &C,
    cache: &mut WallValueCache<C::Value>,
) -> Result<(C::Value, Trace<C::Value>)> {
    validate_path(a.rank(), path)?;
    // vertex sub-chambers carry the unit value
    let mut value = C::Value::one();
    cache.check_insert(&path[0], &value);
    let mut steps = Vec::with_capacity(path.len() - 1);
    for pair in path.windows(2) {
        let (inner, outer) = (&pair[0], &pair[1]);
        let axis = CubeFace::crossing_axis(inner, outer)?;
        let side = xray::exterior_entry_side(inner, axis);
        let (b, f) = xray::normal_weight_signs(inner, outer, a, side)?;
        let factor = invariant.cross(b, f);
        value = recursive_step(&C::Value::zero(), &value, b, f, invariant);
        cache.check_insert(outer, &value);
        steps.push(CrossingStep {
            wall: inner.clone(),
            entered: outer.clone(),
            b,
            f,
            factor,
            running: value.clone(),
        });
    }
    Ok((value, Trace { steps }))
}

/// Walk an ascending face chain with a fresh cache and a freshly built sign
/// matrix for rank `r`.
pub fn walk<C: CrossingFunction>(
    r: u32,
    path: &[CubeFace],
    invariant: &C,
) -> Result<(C::Value, Trace<C::Value>)> {
    let a = SignMatrix::build(r)?;
    let mut cache = WallValueCache::new();
    walk_with_cache(&a, path, invariant, &mut cache)
}

/// The canonical path: the all-plus vertex, freeing coordinates
/// `0, 1, ..., r-1` in order.
pub fn canonical_path(r: u32) -> Vec<CubeFace> {
    let mut face = CubeFace::vertex(&vec![1i8; r as usize]);
    let mut path = vec![face.clone()];
    for axis in 0..r as usize {
        face = face.freed(axis);
        path.push(face.clone());
    }
    path
}

/// A uniformly random ascending path: random starting vertex, random order
/// of coordinate releases.
pub fn random_path<R: Rng>(r: u32, rng: &mut R) -> Vec<CubeFace> {
    let signs: Vec<i8> = (0..r).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let mut order: Vec<usize> = (0..r as usize).collect();
    order.shuffle(rng);
    let mut face = CubeFace::vertex(&signs);
    let mut path = vec![face.clone()];
    for &axis in &order {
        face = face.freed(axis);
        path.push(face.clone());
    }
    path
}

/// A seeded random ascending path, deterministic across platforms
/// (ChaCha8 stream).
pub fn random_path_seeded(r: u32, seed: u64) -> Vec<CubeFace> {
    random_path(r, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every ascending path for rank `r`: one per (vertex, axis order) pair,
/// `2^r * r!` in total. Intended for exhaustive checks at small rank.
pub fn all_ascending_paths(r: u32) -> Vec<Vec<CubeFace>> {
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }
    let axes: Vec<usize> = (0..r as usize).collect();
    let orders = permutations(&axes);
    let mut paths = Vec::with_capacity((1usize << r) * orders.len());
    for j in 0..(1usize << r) {
        let start = CubeFace::vertex_from_column(r, j);
        for order in &orders {
            let mut face = start.clone();
            let mut path = vec![face.clone()];
            for &axis in order {
                face = face.freed(axis);
                path.push(face.clone());
            }
            paths.push(path);
        }
    }
    paths
}

/// Poincaré polynomials from `trials` seeded random walks. Deterministic for
/// a given seed (ChaCha8 stream); all walks share one write-once cache, so a
/// path-dependent value would trip the cache check.
pub fn walk_random_paths(r: u32, trials: u32, seed: u64) -> Result<Vec<Polynomial>> {
    let a = SignMatrix::build(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = WallValueCache::new();
    let mut out = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let path = random_path(r, &mut rng);
        let (value, _) = walk_with_cache(&a, &path, &PoincareCrossing, &mut cache)?;
        out.push(value);
    }
    Ok(out)
}
