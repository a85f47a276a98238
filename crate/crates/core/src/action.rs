//! Torus action data: the sign matrix, fixed points, the moment map and
//! isotropy weights.
//!
//! The rank-`r` torus acts on `P_{2^r - 1}` through one weight column per sign
//! vector in `{-1,+1}^r`. Columns are kept in a canonical order so traces and
//! emitted files are reproducible: column `j` is the sign vector whose bit
//! pattern is the binary expansion of `j`, bit `i` giving the sign of
//! coordinate `i` (`+1` for bit 0, `-1` for bit 1).

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Construction cap: the matrix materializes `2^r` columns.
pub const SIGN_MATRIX_MAX_RANK: u32 = 20;

/// The `r x 2^r` matrix of `±1` exponents defining the torus action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    r: u32,
    columns: Vec<Vec<i8>>,
}

impl SignMatrix {
    /// Build the canonical sign matrix for rank `r` (1 <= r <= 20).
    pub fn build(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::DegenerateTorus);
        }
        if r > SIGN_MATRIX_MAX_RANK {
            return Err(Error::CapExceeded {
                what: "sign matrix construction",
                cap: SIGN_MATRIX_MAX_RANK,
                got: r,
            });
        }
        let n = 1usize << r;
        let columns = (0..n)
            .map(|j| {
                (0..r)
                    .map(|i| if (j >> i) & 1 == 0 { 1i8 } else { -1i8 })
                    .collect()
            })
            .collect();
        Ok(SignMatrix { r, columns })
    }

    /// Torus rank.
    pub fn rank(&self) -> u32 {
        self.r
    }

    /// Number of columns, `2^r`.
    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    /// Column `j` as a sign vector in `{-1,+1}^r`.
    pub fn column(&self, j: usize) -> &[i8] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<i8>] {
        &self.columns
    }

    /// Index of the column with the opposite sign pattern.
    pub fn antipode(&self, j: usize) -> usize {
        (self.columns.len() - 1) ^ j
    }
}

/// A torus fixed point: the coordinate point with `z_index = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub index: usize,
    pub signs: Vec<i8>,
}

/// An isotropy weight, a vector in `Z^r` with entries in `{-2, 0, 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(pub Vec<i32>);

impl WeightVector {
    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn negated(&self) -> WeightVector {
        WeightVector(self.0.iter().map(|e| -e).collect())
    }

    /// Primitive direction vector: entries divided by their gcd, sign kept.
    /// Two weights point "in the same direction" iff their primitives agree.
    pub fn direction(&self) -> WeightVector {
        let g = self.0.iter().fold(0i32, |g, &e| g.gcd(&e));
        if g == 0 {
            return self.clone();
        }
        WeightVector(self.0.iter().map(|e| e / g).collect())
    }

    /// Parallel over Q: the 2 x r matrix (self; other) has rank <= 1.
    pub fn is_parallel(&self, other: &WeightVector) -> bool {
        let n = self.0.len();
        for i in 0..n {
            for l in (i + 1)..n {
                let cross =
                    i64::from(self.0[i]) * i64::from(other.0[l]) - i64::from(self.0[l]) * i64::from(other.0[i]);
                if cross != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// All `2^r` fixed points, one per homogeneous coordinate.
///
/// Also re-derives the isolation hypothesis computationally: all columns must
/// be pairwise distinct. A duplicate means the input matrix is corrupted.
pub fn fixed_points(a: &SignMatrix) -> Result<Vec<FixedPoint>> {
    let mut seen = HashSet::with_capacity(a.num_columns());
    for col in a.columns() {
        if !seen.insert(col.as_slice()) {
            return Err(Error::DuplicateColumns);
        }
    }
    Ok(a.columns()
        .iter()
        .enumerate()
        .map(|(index, signs)| FixedPoint {
            index,
            signs: signs.clone(),
        })
        .collect())
}

/// Moment value of a state with the given squared amplitudes:
/// `(1/2) * sum_j amplitudes[j] * alpha_j`.
///
/// Amplitudes must have length `2^r`, be nonnegative and sum to exactly 1.
/// The value always lies in the closed cube `[-1/2, 1/2]^r`.
pub fn moment_of_state(a: &SignMatrix, amplitudes: &[BigRational]) -> Result<Vec<BigRational>> {
    if amplitudes.len() != a.num_columns() {
        return Err(Error::InvalidAmplitudes(format!(
            "expected {} entries, got {}",
            a.num_columns(),
            amplitudes.len()
        )));
    }
    if let Some(neg) = amplitudes.iter().find(|x| x.is_negative()) {
        return Err(Error::InvalidAmplitudes(format!("negative entry {neg}")));
    }
    let total: BigRational = amplitudes.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidAmplitudes(format!("sum is {total}, not 1")));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = vec![BigRational::zero(); a.rank() as usize];
    for (j, amp) in amplitudes.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        for (i, &s) in a.column(j).iter().enumerate() {
            out[i] += amp * BigRational::from(BigInt::from(s));
        }
    }
    for v in &mut out {
        *v *= &half;
    }
    Ok(out)
}

/// Isotropy weights at fixed point `p`: one per column `k != p.index`, in
/// canonical column order, each the column difference `alpha_k - alpha_p`.
pub fn isotropy_weights(a: &SignMatrix, p: &FixedPoint) -> Vec<WeightVector> {
    let base = a.column(p.index);
    (0..a.num_columns())
        .filter(|&k| k != p.index)
        .map(|k| {
            WeightVector(
                a.column(k)
                    .iter()
                    .zip(base)
                    .map(|(&ck, &cb)| i32::from(ck) - i32::from(cb))
                    .collect(),
            )
        })
        .collect()
}

/// Parallelism diagnostics at one fixed point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointDiagnostics {
    pub index: usize,
    /// Column index pairs `(k1, k2)` whose isotropy weights are parallel
    /// over Q (exhaustive pair scan).
    pub parallel_pairs: Vec<(usize, usize)>,
    /// Weight multiplicity per primitive direction, sorted by direction.
    pub direction_multiplicities: Vec<(WeightVector, usize)>,
}

/// Per-fixed-point parallelism report for the whole action.
///
/// This reports computed facts only; it asserts nothing about whether the
/// action "should" satisfy the pairwise-independence condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmReport {
    pub per_fixed_point: Vec<FixedPointDiagnostics>,
    /// True iff no fixed point has a parallel weight pair.
    pub pairwise_independent_everywhere: bool,
    /// Largest multiplicity of weights sharing one direction at one point.
    pub max_direction_multiplicity: usize,
}

pub fn gkm_report(a: &SignMatrix) -> Result<GkmReport> {
    let points = fixed_points(a)?;
    let mut per_fixed_point = Vec::with_capacity(points.len());
    let mut independent = true;
    let mut max_mult = 0usize;
    for p in &points {
        let weights = isotropy_weights(a, p);
        let cols: Vec<usize> = (0..a.num_columns()).filter(|&k| k != p.index).collect();
        let mut parallel_pairs = Vec::new();
        for x in 0..weights.len() {
            for y in (x + 1)..weights.len() {
                if weights[x].is_parallel(&weights[y]) {
                    parallel_pairs.push((cols[x], cols[y]));
                }
            }
        }
        if !parallel_pairs.is_empty() {
            independent = false;
        }
        let mut by_dir: BTreeMap<WeightVector, usize> = BTreeMap::new();
        for w in &weights {
            *by_dir.entry(w.direction()).or_insert(0) += 1;
        }
        max_mult = max_mult.max(by_dir.values().copied().max().unwrap_or(0));
        per_fixed_point.push(FixedPointDiagnostics {
            index: p.index,
            parallel_pairs,
            direction_multiplicities: by_dir.into_iter().collect(),
        });
    }
    Ok(GkmReport {
        per_fixed_point,
        pairwise_independent_everywhere: independent,
        max_direction_multiplicity: max_mult,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn build_rejects_rank_zero() {
        assert!(matches!(SignMatrix::build(0), Err(Error::DegenerateTorus)));
    }

    #[test]
    fn build_small_ranks() {
        let a1 = SignMatrix::build(1).unwrap();
        assert_eq!(a1.columns(), &[vec![1], vec![-1]]);

        let a2 = SignMatrix::build(2).unwrap();
        let cols: HashSet<Vec<i8>> = a2.columns().iter().cloned().collect();
        let expect: HashSet<Vec<i8>> =
            [vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]].into_iter().collect();
        assert_eq!(cols, expect);

        // r=3: 8 distinct columns exhausting {-1,+1}^3
        let a3 = SignMatrix::build(3).unwrap();
        let cols3: HashSet<Vec<i8>> = a3.columns().iter().cloned().collect();
        assert_eq!(cols3.len(), 8);
        assert!(cols3.iter().all(|c| c.iter().all(|&s| s == 1 || s == -1)));
    }

    #[test]
    fn fixed_point_counts() {
        for r in 1..=8 {
            let a = SignMatrix::build(r).unwrap();
            assert_eq!(fixed_points(&a).unwrap().len(), 1 << r);
        }
    }

    #[test]
    fn moment_of_indicator_is_half_column() {
        let a = SignMatrix::build(2).unwrap();
        for j in 0..4 {
            let mut amps = vec![BigRational::zero(); 4];
            amps[j] = BigRational::one();
            let mu = moment_of_state(&a, &amps).unwrap();
            let expect: Vec<BigRational> = a
                .column(j)
                .iter()
                .map(|&s| rat(i64::from(s), 2))
                .collect();
            assert_eq!(mu, expect);
        }
    }

    #[test]
    fn moment_of_uniform_is_origin() {
        for r in 1..=4 {
            let a = SignMatrix::build(r).unwrap();
            let amps = vec![rat(1, 1 << r); 1 << r];
            let mu = moment_of_state(&a, &amps).unwrap();
            assert!(mu.iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn moment_hand_example() {
        // r=2, amplitudes (1/2, 1/2, 0, 0): columns (1,1) and (-1,1) in
        // canonical order, so the mean is (0, 1) and the moment is (0, 1/2).
        let a = SignMatrix::build(2).unwrap();
        let amps = vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)];
        let mu = moment_of_state(&a, &amps).unwrap();
        assert_eq!(mu, vec![rat(0, 1), rat(1, 2)]);
        // same mass split on columns (1,1),(1,-1), canonical indices 0 and 2
        let amps = vec![rat(1, 2), rat(0, 1), rat(1, 2), rat(0, 1)];
        let mu = moment_of_state(&a, &amps).unwrap();
        assert_eq!(mu, vec![rat(1, 2), rat(0, 1)]);
    }

    #[test]
    fn moment_rejects_bad_input() {
        let a = SignMatrix::build(2).unwrap();
        assert!(moment_of_state(&a, &[BigRational::one()]).is_err());
        let amps = vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(0, 1)];
        assert!(moment_of_state(&a, &amps).is_err());
        let amps = vec![rat(3, 2), rat(-1, 2), rat(0, 1), rat(0, 1)];
        assert!(moment_of_state(&a, &amps).is_err());
    }

    #[test]
    fn weights_at_plus_plus() {
        let a = SignMatrix::build(2).unwrap();
        let p = FixedPoint {
            index: 0,
            signs: vec![1, 1],
        };
        let mut got = isotropy_weights(&a, &p);
        got.sort();
        let mut expect = vec![
            WeightVector(vec![0, -2]),
            WeightVector(vec![-2, 0]),
            WeightVector(vec![-2, -2]),
        ];
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn single_weight_for_rank_one() {
        let a = SignMatrix::build(1).unwrap();
        let p = FixedPoint {
            index: 0,
            signs: vec![1],
        };
        assert_eq!(isotropy_weights(&a, &p), vec![WeightVector(vec![-2])]);
    }

    #[test]
    fn weights_nonzero_with_small_entries() {
        for r in 1..=8 {
            let a = SignMatrix::build(r).unwrap();
            for p in fixed_points(&a).unwrap() {
                let ws = isotropy_weights(&a, &p);
                assert_eq!(ws.len(), (1 << r) - 1);
                for w in ws {
                    assert!(!w.is_zero());
                    assert!(w.entries().iter().all(|&e| e == -2 || e == 0 || e == 2));
                }
            }
        }
    }

    #[test]
    fn antipodal_weight_symmetry() {
        // weights at column -alpha_j are the negated weights at alpha_j,
        // matched up by the sign-flip column reindexing
        for r in 1..=5 {
            let a = SignMatrix::build(r).unwrap();
            let pts = fixed_points(&a).unwrap();
            for j in 0..a.num_columns() {
                let jbar = a.antipode(j);
                let w = isotropy_weights(&a, &pts[j]);
                let wbar = isotropy_weights(&a, &pts[jbar]);
                for k in 0..a.num_columns() {
                    if k == j {
                        continue;
                    }
                    let kbar = a.antipode(k);
                    let idx = if k < j { k } else { k - 1 };
                    let idx_bar = if kbar < jbar { kbar } else { kbar - 1 };
                    assert_eq!(w[idx].negated(), wbar[idx_bar]);
                }
            }
        }
    }

    #[test]
    fn gkm_pair_scan_matches_brute_force() {
        // independent brute-force parallelism check: w1 = q*w2 for rational q
        fn parallel_brute(a: &[i32], b: &[i32]) -> bool {
            // find first nonzero of b; q = a_i / b_i must make a = q*b
            match b.iter().position(|&x| x != 0) {
                None => true,
                Some(i) => {
                    if a[i] == 0 {
                        return a.iter().all(|&x| x == 0);
                    }
                    // a = (a_i / b_i) * b  <=>  a*b_i == a_i*b componentwise
                    a.iter()
                        .zip(b)
                        .all(|(&x, &y)| x * b[i] == a[i] * y)
                }
            }
        }
        for r in 2..=4 {
            let a = SignMatrix::build(r).unwrap();
            let report = gkm_report(&a).unwrap();
            for (p, diag) in fixed_points(&a).unwrap().iter().zip(&report.per_fixed_point) {
                let ws = isotropy_weights(&a, p);
                let mut brute = 0;
                for x in 0..ws.len() {
                    for y in (x + 1)..ws.len() {
                        if parallel_brute(ws[x].entries(), ws[y].entries()) {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(diag.parallel_pairs.len(), brute);
            }
        }
    }

    #[test]
    fn gkm_report_facts_for_this_family() {
        // computed fact: at every fixed point of the sign action the
        // isotropy weights are pairwise independent over Q and every
        // direction has multiplicity one
        for r in 1..=6 {
            let a = SignMatrix::build(r).unwrap();
            let report = gkm_report(&a).unwrap();
            assert!(report.pairwise_independent_everywhere);
            assert_eq!(report.max_direction_multiplicity, 1);
            assert!(report.per_fixed_point.iter().all(|d| d.parallel_pairs.is_empty()));
        }
        // r=1: a single weight, zero pairs
        let a = SignMatrix::build(1).unwrap();
        let report = gkm_report(&a).unwrap();
        assert_eq!(report.per_fixed_point[0].parallel_pairs.len(), 0);
    }

    #[test]
    fn indicator_images_are_exactly_the_cube_vertices() {
        for r in 1..=4 {
            let a = SignMatrix::build(r).unwrap();
            let mut images = HashSet::new();
            for j in 0..a.num_columns() {
                let mut amps = vec![BigRational::zero(); a.num_columns()];
                amps[j] = BigRational::one();
                images.insert(moment_of_state(&a, &amps).unwrap());
            }
            let mut vertices = HashSet::new();
            for j in 0..(1usize << r) {
                vertices.insert(
                    (0..r)
                        .map(|i| rat(if (j >> i) & 1 == 0 { 1 } else { -1 }, 2))
                        .collect::<Vec<_>>(),
                );
            }
            assert_eq!(images, vertices);
        }
    }
}
