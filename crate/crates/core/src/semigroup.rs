//! Finitely generated cancellative abelian monoids embedded in `Z^d`.
//!
//! Three families are supported: the polydisc monoid `Z_+^n`, numerical
//! monoids (submonoids of `Z_+` generated by finitely many positive
//! integers) and general lattice cones (the monoid generated by finitely many
//! integer vectors). Cancellation is automatic for submonoids of a lattice.
//!
//! Faces are indexed by generator subsets. For a prime face `J` the
//! complement of the submonoid generated by `J` is a prime ideal; every prime
//! ideal of the supported families arises this way.

use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::cmp::Reverse;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

/// Default multiplier for the membership search bound of non-pointed cones.
pub const DEFAULT_SEARCH_FACTOR: usize = 10;

/// Wire format of a semigroup description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum SemigroupSpec {
    #[serde(rename = "polycube")]
    PolyCube { n: usize },
    #[serde(rename = "numerical")]
    Numerical { gens: Vec<i64> },
    #[serde(rename = "lattice_cone")]
    LatticeCone { gens: Vec<Vec<i64>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    PolyCube,
    Numerical,
    LatticeCone,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::PolyCube => "polycube",
            Family::Numerical => "numerical",
            Family::LatticeCone => "lattice_cone",
        })
    }
}

/// A member (or candidate member) of the ambient lattice `Z^d`. The zero
/// vector is the unit `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<i64>);

impl Element {
    pub fn zero(dim: usize) -> Self {
        Element(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Element {
        Element(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.0.iter().zip(v).map(|(&a, &b)| a as f64 * b).sum()
    }
}

impl From<Vec<i64>> for Element {
    fn from(v: Vec<i64>) -> Self {
        Element(v)
    }
}

/// A face of the monoid, given by the indices of the generators it contains.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceDesc {
    pub gen_subset: BTreeSet<usize>,
}

impl FaceDesc {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        FaceDesc {
            gen_subset: indices.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        FaceDesc::default()
    }

    pub fn is_empty(&self) -> bool {
        self.gen_subset.is_empty()
    }

    pub fn intersection(&self, other: &FaceDesc) -> FaceDesc {
        FaceDesc {
            gen_subset: self.gen_subset.intersection(&other.gen_subset).copied().collect(),
        }
    }
}

/// Basis of the group of fractions `G = S^{-1}S` as a sublattice of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    pub basis: Vec<Vec<i64>>,
    pub rank: usize,
}

/// A validated semigroup description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SemigroupSpec", into = "SemigroupSpec")]
pub struct SemigroupDesc {
    family: Family,
    gens: Vec<Vec<i64>>,
    dim: usize,
    /// gcd of the generators of a numerical monoid, 1 for the other families.
    gcd: i64,
    /// Apéry set of the gcd-normalized numerical monoid with respect to its
    /// smallest generator; empty for the other families.
    apery: Vec<i64>,
    lattice: Vec<Vec<i64>>,
    pointed: bool,
    positive: Option<Vec<i64>>,
    search_factor: usize,
}

impl PartialEq for SemigroupDesc {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.gens == other.gens && self.dim == other.dim
    }
}

impl TryFrom<SemigroupSpec> for SemigroupDesc {
    type Error = Error;

    fn try_from(spec: SemigroupSpec) -> Result<Self> {
        SemigroupDesc::new(spec)
    }
}

impl From<SemigroupDesc> for SemigroupSpec {
    fn from(s: SemigroupDesc) -> Self {
        s.spec()
    }
}

impl SemigroupDesc {
    pub fn new(spec: SemigroupSpec) -> Result<Self> {
        match spec {
            SemigroupSpec::PolyCube { n } => Self::polycube(n),
            SemigroupSpec::Numerical { gens } => Self::numerical(&gens),
            SemigroupSpec::LatticeCone { gens } => Self::lattice_cone(gens),
        }
    }

    /// `Z_+^n`, generated by the standard basis vectors in order.
    pub fn polycube(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSemigroup("polycube dimension must be positive".into()));
        }
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Ok(SemigroupDesc {
            family: Family::PolyCube,
            lattice: lattice::hermite_basis(&gens),
            gens,
            dim: n,
            gcd: 1,
            apery: Vec::new(),
            pointed: true,
            positive: Some(vec![1; n]),
            search_factor: DEFAULT_SEARCH_FACTOR,
        })
    }

    /// Numerical monoid generated by positive integers. Generators are sorted
    /// and deduplicated; their gcd is recorded and membership is decided on
    /// the gcd-normalized monoid.
    pub fn numerical(gens: &[i64]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidSemigroup("numerical monoid needs a generator".into()));
        }
        if let Some(&g) = gens.iter().find(|&&g| g <= 0) {
            return Err(Error::InvalidSemigroup(format!(
                "numerical generators must be positive, got {g}"
            )));
        }
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let g = sorted.iter().fold(0i128, |acc, &x| lattice::gcd(acc, x as i128)) as i64;
        let reduced: Vec<i64> = sorted.iter().map(|x| x / g).collect();
        let apery = apery_set(&reduced);
        let gens: Vec<Vec<i64>> = sorted.iter().map(|&x| vec![x]).collect();
        Ok(SemigroupDesc {
            family: Family::Numerical,
            lattice: vec![vec![g]],
            gens,
            dim: 1,
            gcd: g,
            apery,
            pointed: true,
            positive: Some(vec![1]),
            search_factor: DEFAULT_SEARCH_FACTOR,
        })
    }

    /// Monoid generated by integer vectors of a common dimension.
    pub fn lattice_cone(gens: Vec<Vec<i64>>) -> Result<Self> {
        let Some(dim) = gens.first().map(Vec::len) else {
            return Err(Error::InvalidSemigroup("lattice cone needs a generator".into()));
        };
        if dim == 0 {
            return Err(Error::InvalidSemigroup("generators must have positive dimension".into()));
        }
        if gens.iter().any(|g| g.len() != dim) {
            return Err(Error::InvalidSemigroup("generators differ in dimension".into()));
        }
        if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidSemigroup("zero generator".into()));
        }
        if gens.len() > 24 {
            return Err(Error::InvalidSemigroup("at most 24 generators are supported".into()));
        }
        let pointed = lattice::is_pointed_cone(&gens);
        let positive = if pointed {
            Some(lattice::positive_functional(&gens).ok_or_else(|| {
                Error::InvalidSemigroup("no separating functional found for pointed cone".into())
            })?)
        } else {
            None
        };
        Ok(SemigroupDesc {
            family: Family::LatticeCone,
            lattice: lattice::hermite_basis(&gens),
            gens,
            dim,
            gcd: 1,
            apery: Vec::new(),
            pointed,
            positive,
            search_factor: DEFAULT_SEARCH_FACTOR,
        })
    }

    /// Overrides the membership search multiplier used for non-pointed cones.
    pub fn with_search_factor(mut self, factor: usize) -> Self {
        self.search_factor = factor.max(1);
        self
    }

    pub fn spec(&self) -> SemigroupSpec {
        match self.family {
            Family::PolyCube => SemigroupSpec::PolyCube { n: self.dim },
            Family::Numerical => SemigroupSpec::Numerical {
                gens: self.gens.iter().map(|g| g[0]).collect(),
            },
            Family::LatticeCone => SemigroupSpec::LatticeCone {
                gens: self.gens.clone(),
            },
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// gcd of a numerical monoid's generators (1 for other families).
    pub fn gcd_scale(&self) -> i64 {
        self.gcd
    }

    /// Frobenius number of the gcd-normalized numerical monoid (`-1` when it
    /// is all of `Z_+`); `None` for other families.
    pub fn frobenius_number(&self) -> Option<i64> {
        (self.family == Family::Numerical)
            .then(|| self.apery.iter().max().copied().unwrap_or(0) - self.apery.len() as i64)
    }

    /// An integer functional that is at least 1 on every generator, available
    /// exactly when the monoid is pointed.
    pub fn positive_functional(&self) -> Option<&[i64]> {
        self.positive.as_deref()
    }

    pub fn identity(&self) -> Element {
        Element::zero(self.dim)
    }

    pub fn full_face(&self) -> FaceDesc {
        FaceDesc::new(0..self.gens.len())
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Membership in the monoid generated by the generators.
    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        self.check_dim(v)?;
        match self.family {
            Family::PolyCube => Ok(v.iter().all(|&x| x >= 0)),
            Family::Numerical => Ok(self.numerical_contains(v[0])),
            Family::LatticeCone => monoid_contains(
                &self.gens,
                v,
                self.positive.as_deref(),
                Some(&self.lattice),
                self.search_factor,
            ),
        }
    }

    fn numerical_contains(&self, v: i64) -> bool {
        if v < 0 || v % self.gcd != 0 {
            return false;
        }
        let u = v / self.gcd;
        let m = self.apery.len() as i64;
        u >= self.apery[(u % m) as usize]
    }

    pub fn require_member(&self, v: &[i64]) -> Result<()> {
        if self.contains(v)? {
            Ok(())
        } else {
            Err(Error::ElementNotInSemigroup(v.to_vec()))
        }
    }

    /// Basis of the group of fractions, computed by Hermite row reduction of
    /// the generator matrix.
    pub fn group_of_fractions(&self) -> LatticeBasis {
        LatticeBasis {
            rank: self.lattice.len(),
            basis: self.lattice.clone(),
        }
    }

    /// Whether `S ∩ S^{-1} = {e}`.
    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    fn check_face(&self, face: &FaceDesc) -> Result<()> {
        if let Some(&j) = face.gen_subset.iter().find(|&&j| j >= self.gens.len()) {
            return Err(Error::InvalidSemigroup(format!(
                "face index {j} out of range for {} generators",
                self.gens.len()
            )));
        }
        Ok(())
    }

    fn face_gens(&self, face: &FaceDesc) -> Vec<Vec<i64>> {
        face.gen_subset.iter().map(|&j| self.gens[j].clone()).collect()
    }

    /// Membership in the submonoid generated by the generators of `face`.
    pub fn face_contains(&self, face: &FaceDesc, v: &[i64]) -> Result<bool> {
        self.check_dim(v)?;
        self.check_face(face)?;
        if v.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        if face.is_empty() {
            return Ok(false);
        }
        match self.family {
            Family::PolyCube => Ok(v
                .iter()
                .enumerate()
                .all(|(i, &x)| x >= 0 && (x == 0 || face.gen_subset.contains(&i)))),
            Family::Numerical => {
                let sub: Vec<i64> = face.gen_subset.iter().map(|&j| self.gens[j][0]).collect();
                Ok(SemigroupDesc::numerical(&sub)?.numerical_contains(v[0]))
            }
            Family::LatticeCone => {
                let sub = self.face_gens(face);
                let positive = if self.pointed {
                    self.positive.clone()
                } else if lattice::is_pointed_cone(&sub) {
                    lattice::positive_functional(&sub)
                } else {
                    None
                };
                monoid_contains(&sub, v, positive.as_deref(), None, self.search_factor)
            }
        }
    }

    /// All generator indices whose generator lies in the submonoid spanned by
    /// `face`. Two faces generate the same submonoid iff their closures agree.
    pub fn face_closure(&self, face: &FaceDesc) -> Result<FaceDesc> {
        self.check_face(face)?;
        let mut out = face.gen_subset.clone();
        for (k, g) in self.gens.iter().enumerate() {
            if !out.contains(&k) && self.face_contains(face, g)? {
                out.insert(k);
            }
        }
        Ok(FaceDesc { gen_subset: out })
    }

    /// Whether the submonoid generated by `face` spans all of `S`.
    pub fn is_full_face(&self, face: &FaceDesc) -> Result<bool> {
        Ok(self.face_closure(face)?.gen_subset.len() == self.gens.len())
    }

    /// Whether the complement of the submonoid generated by `face` is an
    /// ideal of `S` (or empty).
    pub fn is_prime_face(&self, face: &FaceDesc) -> Result<bool> {
        self.check_face(face)?;
        match self.family {
            Family::PolyCube => Ok(true),
            Family::Numerical => Ok(face.is_empty() || self.is_full_face(face)?),
            Family::LatticeCone => Ok(self.cone_face_functional(face)?.is_some()),
        }
    }

    /// For a lattice cone: an integer functional vanishing on the face and
    /// positive on every generator outside it, if the face is prime.
    fn cone_face_functional(&self, face: &FaceDesc) -> Result<Option<Vec<i64>>> {
        let sub = self.face_gens(face);
        let base_rank = lattice::rank(&sub);
        let mut in_span = Vec::new();
        let mut outside = Vec::new();
        for (k, g) in self.gens.iter().enumerate() {
            if face.gen_subset.contains(&k) {
                continue;
            }
            let mut ext = sub.clone();
            ext.push(g.clone());
            if lattice::rank(&ext) == base_rank {
                in_span.push(k);
            } else {
                outside.push(k);
            }
        }
        // Generators in the linear span of the face must already belong to the
        // submonoid, since any exposing functional vanishes on them.
        for &k in &in_span {
            if !self.face_contains(face, &self.gens[k])? {
                return Ok(None);
            }
        }
        if outside.is_empty() {
            return Ok(Some(vec![0; self.dim]));
        }
        let complement = lattice::rational_kernel(&sub, self.dim);
        let projected: Vec<Vec<i64>> = outside
            .iter()
            .map(|&k| {
                complement
                    .iter()
                    .map(|y| y.iter().zip(&self.gens[k]).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        if !lattice::is_pointed_cone(&projected) {
            return Ok(None);
        }
        let z = lattice::positive_functional(&projected).ok_or_else(|| {
            Error::InvalidSemigroup("separating functional search did not converge".into())
        })?;
        let mut c = vec![0i64; self.dim];
        for (zi, y) in z.iter().zip(&complement) {
            for (cj, yj) in c.iter_mut().zip(y) {
                *cj += zi * yj;
            }
        }
        Ok(Some(c))
    }

    /// An integer functional `c >= 0` on `S` whose zero set in `S` is exactly
    /// the submonoid generated by the (prime) face.
    pub fn exposing_functional(&self, face: &FaceDesc) -> Result<Vec<i64>> {
        let not_prime = || Error::InvalidSemigroup(format!("face {:?} is not prime", face.gen_subset));
        match self.family {
            Family::PolyCube => {
                self.check_face(face)?;
                Ok((0..self.dim)
                    .map(|i| i64::from(!face.gen_subset.contains(&i)))
                    .collect())
            }
            Family::Numerical => {
                if face.is_empty() {
                    Ok(vec![1])
                } else if self.is_full_face(face)? {
                    Ok(vec![0])
                } else {
                    Err(not_prime())
                }
            }
            Family::LatticeCone => self.cone_face_functional(face)?.ok_or_else(not_prime),
        }
    }

    /// Canonical (closed) prime faces, deduplicated, in a deterministic order.
    pub fn prime_faces(&self) -> Result<Vec<FaceDesc>> {
        let k = self.gens.len();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << k) {
            let face = FaceDesc::new((0..k).filter(|j| mask & (1 << j) != 0));
            if !self.is_prime_face(&face)? {
                continue;
            }
            let closed = self.face_closure(&face)?;
            if seen.insert(closed.clone()) {
                out.push(closed);
            }
        }
        Ok(out)
    }

    /// Whether some prime face other than the trivial ones (the unit alone and
    /// all of `S`) exists, i.e. whether `S` has a nontrivial prime ideal.
    pub fn has_nontrivial_prime_ideal(&self) -> Result<bool> {
        let k = self.gens.len();
        for mask in 1u32..(1u32 << k) {
            let face = FaceDesc::new((0..k).filter(|j| mask & (1 << j) != 0));
            if self.is_prime_face(&face)? && !self.is_full_face(&face)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All members `v` of `S` with `max |v_i| <= bound`, sorted.
    pub fn elements_in_box(&self, bound: i64) -> Result<Vec<Element>> {
        let lo = match self.family {
            Family::LatticeCone => -bound,
            _ => 0,
        };
        let side = (bound - lo + 1) as usize;
        let total = side.checked_pow(self.dim as u32).ok_or_else(|| {
            Error::InvalidSemigroup("enumeration box too large".into())
        })?;
        let mut out = Vec::new();
        let mut v = vec![lo; self.dim];
        for _ in 0..total {
            if self.contains(&v)? {
                out.push(Element(v.clone()));
            }
            for c in (0..self.dim).rev() {
                v[c] += 1;
                if v[c] <= bound {
                    break;
                }
                v[c] = lo;
            }
        }
        out.sort();
        Ok(out)
    }

    /// A random member `sum n_j g_j` with each `n_j` uniform in `0..=max_coeff`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, max_coeff: i64) -> Element {
        let mut v = vec![0i64; self.dim];
        for g in &self.gens {
            let n = rng.gen_range(0..=max_coeff);
            for (a, b) in v.iter_mut().zip(g) {
                *a += n * b;
            }
        }
        Element(v)
    }
}

/// Apéry set of a gcd-1 numerical monoid with respect to its smallest
/// generator `m`: entry `r` is the least member congruent to `r` mod `m`.
fn apery_set(gens: &[i64]) -> Vec<i64> {
    let m = gens[0];
    let mut dist = vec![i64::MAX; m as usize];
    dist[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0i64, 0usize)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r] {
            continue;
        }
        for &g in &gens[1..] {
            let nr = ((r as i64 + g) % m) as usize;
            if d + g < dist[nr] {
                dist[nr] = d + g;
                heap.push(Reverse((d + g, nr)));
            }
        }
    }
    dist
}

/// Membership of `v` in the monoid generated by `gens`.
///
/// With a functional `positive` that is at least 1 on each generator the
/// search is a finite depth-first search on the level `positive . v`.
/// Without one, a breadth-first search over at most
/// `search_factor * max(1, |v|_1)` generator steps is run and exhausting it
/// is reported as [`Error::UnresolvedMembership`].
fn monoid_contains(
    gens: &[Vec<i64>],
    v: &[i64],
    positive: Option<&[i64]>,
    lattice_basis: Option<&[Vec<i64>]>,
    search_factor: usize,
) -> Result<bool> {
    if v.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    if gens.is_empty() {
        return Ok(false);
    }
    let owned;
    let basis = match lattice_basis {
        Some(b) => b,
        None => {
            owned = lattice::hermite_basis(gens);
            &owned
        }
    };
    if !lattice::in_lattice(basis, v) {
        return Ok(false);
    }
    if let Some(c) = positive {
        let levels: Vec<i64> = gens
            .iter()
            .map(|g| g.iter().zip(c).map(|(a, b)| a * b).sum())
            .collect();
        let mut failed = HashSet::new();
        return Ok(dfs_member(gens, &levels, c, v.to_vec(), 0, &mut failed));
    }
    if !lattice::in_rational_cone(gens, v) {
        return Ok(false);
    }
    let norm: i64 = v.iter().map(|x| x.abs()).sum();
    let bound = search_factor * (norm.max(1) as usize);
    let max_step: i64 = gens
        .iter()
        .map(|g| g.iter().map(|x| x.abs()).sum::<i64>())
        .max()
        .unwrap_or(1);
    let mut visited: HashSet<Vec<i64>> = HashSet::new();
    let mut frontier = vec![vec![0i64; v.len()]];
    visited.insert(frontier[0].clone());
    for step in 1..=bound {
        let budget = (bound - step) as i64 * max_step;
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
                if y == v {
                    return Ok(true);
                }
                let dist: i64 = y.iter().zip(v).map(|(a, b)| (a - b).abs()).sum();
                if dist <= budget && visited.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Err(Error::UnresolvedMembership {
        vector: v.to_vec(),
        bound,
    })
}

fn dfs_member(
    gens: &[Vec<i64>],
    levels: &[i64],
    c: &[i64],
    rem: Vec<i64>,
    start: usize,
    failed: &mut HashSet<(Vec<i64>, usize)>,
) -> bool {
    if rem.iter().all(|&x| x == 0) {
        return true;
    }
    let level: i64 = rem.iter().zip(c).map(|(a, b)| a * b).sum();
    if level <= 0 || failed.contains(&(rem.clone(), start)) {
        return false;
    }
    for j in start..gens.len() {
        if levels[j] <= level {
            let next: Vec<i64> = rem.iter().zip(&gens[j]).map(|(a, b)| a - b).collect();
            if dfs_member(gens, levels, c, next, j, failed) {
                return true;
            }
        }
    }
    failed.insert((rem, start));
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polycube_membership() {
        let s = SemigroupDesc::polycube(2).unwrap();
        assert!(s.contains(&[3, 0]).unwrap());
        assert!(!s.contains(&[-1, 2]).unwrap());
        assert!(matches!(
            s.contains(&[1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn numerical_membership_and_gaps() {
        let s = SemigroupDesc::numerical(&[3, 2]).unwrap();
        assert!(!s.contains(&[1]).unwrap());
        assert!(s.contains(&[5]).unwrap());
        assert_eq!(s.frobenius_number(), Some(1));
        let s = SemigroupDesc::numerical(&[4, 7]).unwrap();
        assert!(!s.contains(&[9]).unwrap());
        assert_eq!(s.frobenius_number(), Some(17));
    }

    #[test]
    fn numerical_with_common_factor() {
        let s = SemigroupDesc::numerical(&[6, 4, 4]).unwrap();
        assert_eq!(s.gcd_scale(), 2);
        assert_eq!(s.generators(), &[vec![4], vec![6]]);
        assert!(!s.contains(&[2]).unwrap());
        assert!(s.contains(&[10]).unwrap());
        assert!(!s.contains(&[5]).unwrap());
        assert_eq!(s.group_of_fractions().basis, vec![vec![2]]);
    }

    #[test]
    fn invalid_descriptions() {
        assert!(SemigroupDesc::numerical(&[]).is_err());
        assert!(SemigroupDesc::numerical(&[0, 2]).is_err());
        assert!(SemigroupDesc::lattice_cone(vec![vec![0, 0]]).is_err());
        assert!(SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![1]]).is_err());
        assert!(SemigroupDesc::polycube(0).is_err());
    }

    #[test]
    fn group_of_fractions_examples() {
        let s = SemigroupDesc::polycube(2).unwrap();
        assert_eq!(s.group_of_fractions().basis, vec![vec![1, 0], vec![0, 1]]);
        let s = SemigroupDesc::numerical(&[2, 3]).unwrap();
        let g = s.group_of_fractions();
        assert_eq!((g.basis, g.rank), (vec![vec![1]], 1));
        let s = SemigroupDesc::lattice_cone(vec![vec![2, 0], vec![0, 2]]).unwrap();
        let g = s.group_of_fractions();
        assert_eq!((g.basis, g.rank), (vec![vec![2, 0], vec![0, 2]], 2));
    }

    #[test]
    fn pointedness_examples() {
        assert!(SemigroupDesc::polycube(3).unwrap().is_pointed());
        assert!(SemigroupDesc::numerical(&[5, 7]).unwrap().is_pointed());
        let s = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![-1, 0]]).unwrap();
        assert!(!s.is_pointed());
    }

    #[test]
    fn non_pointed_membership() {
        let s = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert!(s.contains(&[-3, 2]).unwrap());
        assert!(!s.contains(&[0, -1]).unwrap());
        let s = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![-1, 0]]).unwrap();
        // Outside the lattice: decided without search.
        assert!(!s.contains(&[0, 1]).unwrap());
        assert!(s.contains(&[-4, 0]).unwrap());
    }

    #[test]
    fn unresolved_membership_is_an_error() {
        // Lattice Z^2, cone is the whole plane minus nothing reachable cheaply:
        // (1,0),(-1,0),(0,3),(0,-2) reach (0,1) only via 3 - 2, so with a
        // tiny search factor the search is exhausted.
        let s = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![-1, 0], vec![0, 3], vec![0, -2]])
            .unwrap()
            .with_search_factor(1);
        assert!(matches!(
            s.contains(&[0, 1]),
            Err(Error::UnresolvedMembership { .. })
        ));
        let s = s.with_search_factor(10);
        assert!(s.contains(&[0, 1]).unwrap());
    }

    #[test]
    fn prime_faces_of_examples() {
        let s = SemigroupDesc::polycube(2).unwrap();
        assert!(s.is_prime_face(&FaceDesc::new([1])).unwrap());
        assert!(s.has_nontrivial_prime_ideal().unwrap());
        assert!(!SemigroupDesc::polycube(1).unwrap().has_nontrivial_prime_ideal().unwrap());

        let s = SemigroupDesc::numerical(&[2, 3]).unwrap();
        assert!(s.is_prime_face(&FaceDesc::empty()).unwrap());
        assert!(!s.is_prime_face(&FaceDesc::new([0])).unwrap());
        assert!(!s.has_nontrivial_prime_ideal().unwrap());

        // Redundant generator: {2,3} already generates 4.
        let s = SemigroupDesc::numerical(&[2, 3, 4]).unwrap();
        assert!(s.is_prime_face(&FaceDesc::new([0, 1])).unwrap());
    }

    #[test]
    fn lattice_cone_faces() {
        // Cone spanned by (1,0),(1,1),(1,2): rays (1,0) and (1,2) are faces,
        // the middle generator is not.
        let s = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![1, 1], vec![1, 2]]).unwrap();
        assert!(s.is_prime_face(&FaceDesc::new([0])).unwrap());
        assert!(s.is_prime_face(&FaceDesc::new([2])).unwrap());
        assert!(!s.is_prime_face(&FaceDesc::new([1])).unwrap());
        assert!(!s.is_prime_face(&FaceDesc::new([0, 2])).unwrap());
        assert!(s.is_prime_face(&FaceDesc::new([0, 1, 2])).unwrap());
        assert!(s.is_prime_face(&FaceDesc::empty()).unwrap());
        let c = s.exposing_functional(&FaceDesc::new([0])).unwrap();
        assert_eq!(c[0], 0);
        assert!(c[0] + c[1] > 0 && c[0] + 2 * c[1] > 0);
        assert_eq!(s.prime_faces().unwrap().len(), 4);
    }

    #[test]
    fn non_pointed_cone_has_no_trivial_face() {
        let s = SemigroupDesc::lattice_cone(vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
        assert!(!s.is_prime_face(&FaceDesc::empty()).unwrap());
        assert!(s.is_prime_face(&FaceDesc::new([0, 1])).unwrap());
        assert!(s.has_nontrivial_prime_ideal().unwrap());
    }

    #[test]
    fn json_round_trip() {
        for text in [
            r#"{"family":"polycube","n":2}"#,
            r#"{"family":"numerical","gens":[2,3]}"#,
            r#"{"family":"lattice_cone","gens":[[1,0],[1,1]]}"#,
        ] {
            let s: SemigroupDesc = serde_json::from_str(text).unwrap();
            assert_eq!(serde_json::to_string(&s).unwrap(), text);
        }
        assert!(serde_json::from_str::<SemigroupDesc>(r#"{"family":"numerical","gens":[]}"#).is_err());
    }

    #[test]
    fn box_enumeration() {
        let s = SemigroupDesc::numerical(&[2, 3]).unwrap();
        let els: Vec<i64> = s.elements_in_box(6).unwrap().iter().map(|e| e.0[0]).collect();
        assert_eq!(els, vec![0, 2, 3, 4, 5, 6]);
    }
}
