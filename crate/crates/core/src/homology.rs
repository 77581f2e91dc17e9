//! Integer simplicial homology of pairs, chain maps and Lefschetz numbers.
//!
//! Simplices are sorted vertex lists; the orientation of a simplex is the
//! one induced by ascending vertex labels. Chain groups of a pair `(N, L)`
//! are spanned by the simplices of `N` that are not in `L`, in lexicographic
//! order within each dimension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::totient;
use crate::matrix::{smith_normal_form, IntMatrix, MatrixError};
use crate::poly::{cyclotomic_table, IntPoly};

/// Highest simplex dimension handled by the engine.
pub const MAX_DIM: usize = 3;

/// Default largest cyclotomic index tried by [`roots_of_unity_eigencheck`].
pub const DEFAULT_CYCLOTOMIC_BOUND: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("empty simplex")]
    EmptySimplex,
    #[error("simplex {0:?} has a repeated vertex")]
    RepeatedVertex(Vec<u32>),
    #[error("simplex {0:?} has dimension above {MAX_DIM}")]
    DimensionTooHigh(Vec<u32>),
    #[error("face {face:?} of simplex {simplex:?} is missing")]
    NotFaceClosed { simplex: Vec<u32>, face: Vec<u32> },
    #[error("simplex {0:?} of the subcomplex is not in the complex")]
    NotSubcomplex(Vec<u32>),
    #[error("vertex {0} has no image under the simplicial map")]
    UnmappedVertex(u32),
    #[error("image {image:?} of simplex {simplex:?} is not a simplex of the complex")]
    NotSimplicial { simplex: Vec<u32>, image: Vec<u32> },
    #[error("simplex {simplex:?} of the subcomplex is sent outside it, to {image:?}")]
    NotAMapOfPairs { simplex: Vec<u32>, image: Vec<u32> },
    #[error("chain map does not commute with the boundary in dimension {0}")]
    NotAChainMap(usize),
    #[error("chain map needs at most 4 matrices, got {0}")]
    TooManyDimensions(usize),
    #[error("matrix for dimension {dim}: {source}")]
    Matrix { dim: usize, source: MatrixError },
    #[error("trace formula needs M_0 = [1] and M_3 = 0: {0}")]
    TraceFormulaPrecondition(&'static str),
    #[error("bound {bound} is smaller than the sum of dimensions {needed}")]
    BoundTooSmall { bound: usize, needed: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
}

/// A finite abstract simplicial complex of dimension at most 3.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    by_dim: [BTreeSet<Vec<u32>>; MAX_DIM + 1],
}

fn normalize(simplex: &[u32]) -> Result<Vec<u32>, HomologyError> {
    if simplex.is_empty() {
        return Err(HomologyError::EmptySimplex);
    }
    let mut s = simplex.to_vec();
    s.sort_unstable();
    if s.windows(2).any(|w| w[0] == w[1]) {
        return Err(HomologyError::RepeatedVertex(simplex.to_vec()));
    }
    if s.len() > MAX_DIM + 1 {
        return Err(HomologyError::DimensionTooHigh(simplex.to_vec()));
    }
    Ok(s)
}

/// Codimension one faces, with the sign `(-1)^j` of the removed position `j`.
fn faces(simplex: &[u32]) -> impl Iterator<Item = (Vec<u32>, i64)> + '_ {
    (0..simplex.len()).map(move |j| {
        let mut f = simplex.to_vec();
        f.remove(j);
        (f, if j % 2 == 0 { 1 } else { -1 })
    })
}

impl SimplicialComplex {
    /// Builds a complex from a face-closed list of simplices.
    pub fn new<I, S>(simplices: I) -> Result<Self, HomologyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut c = Self::default();
        for s in simplices {
            let s = normalize(s.as_ref())?;
            c.by_dim[s.len() - 1].insert(s);
        }
        for dim in 1..=MAX_DIM {
            for s in &c.by_dim[dim] {
                for (f, _) in faces(s) {
                    if !c.by_dim[dim - 1].contains(&f) {
                        return Err(HomologyError::NotFaceClosed {
                            simplex: s.clone(),
                            face: f,
                        });
                    }
                }
            }
        }
        Ok(c)
    }

    /// Builds the smallest complex containing the given simplices and returns
    /// it with the number of faces that had to be added.
    pub fn closure<I, S>(simplices: I) -> Result<(Self, usize), HomologyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut c = Self::default();
        let mut given = 0;
        for s in simplices {
            let s = normalize(s.as_ref())?;
            if c.by_dim[s.len() - 1].insert(s) {
                given += 1;
            }
        }
        for dim in (1..=MAX_DIM).rev() {
            let new_faces: Vec<Vec<u32>> = c.by_dim[dim]
                .iter()
                .flat_map(|s| faces(s).map(|(f, _)| f))
                .collect();
            c.by_dim[dim - 1].extend(new_faces);
        }
        let added = c.len() - given;
        Ok((c, added))
    }

    pub fn simplices(&self, dim: usize) -> impl ExactSizeIterator<Item = &Vec<u32>> {
        self.by_dim[dim].iter()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, BTreeSet::len)
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        normalize(simplex).is_ok_and(|s| self.by_dim[s.len() - 1].contains(&s))
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.by_dim[0].iter().map(|s| s[0])
    }

    /// Dimension of the complex, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        (0..=MAX_DIM).rev().find(|&d| !self.by_dim[d].is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=MAX_DIM)
            .map(|d| if d % 2 == 0 { 1 } else { -1 } * self.count(d) as i64)
            .sum()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.by_dim.iter().flatten()
    }
}

/// JSON form `{"simplices": [[v, ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub simplices: Vec<Vec<u32>>,
}

impl From<&SimplicialComplex> for ComplexJson {
    fn from(c: &SimplicialComplex) -> Self {
        Self {
            simplices: c.all_simplices().cloned().collect(),
        }
    }
}

/// A complex `N` with a subcomplex `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialPair {
    total: SimplicialComplex,
    sub: SimplicialComplex,
}

impl SimplicialPair {
    pub fn new(total: SimplicialComplex, sub: SimplicialComplex) -> Result<Self, HomologyError> {
        if let Some(s) = sub.all_simplices().find(|s| !total.contains(s)) {
            return Err(HomologyError::NotSubcomplex(s.clone()));
        }
        Ok(Self { total, sub })
    }

    /// The pair `(N, ∅)`.
    pub fn absolute(total: SimplicialComplex) -> Self {
        Self {
            total,
            sub: SimplicialComplex::default(),
        }
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn sub(&self) -> &SimplicialComplex {
        &self.sub
    }

    /// Simplices of `N` not in `L`, the basis of the relative chains.
    pub fn relative_simplices(&self, dim: usize) -> Vec<&Vec<u32>> {
        self.total
            .simplices(dim)
            .filter(|s| !self.sub.by_dim[dim].contains(*s))
            .collect()
    }

    pub fn relative_rank(&self, dim: usize) -> usize {
        self.total.count(dim) - self.sub.count(dim)
    }

    /// Relative boundary `∂_dim : C_dim(N, L) -> C_{dim-1}(N, L)` for `dim` in `1..=3`.
    pub fn relative_boundary(&self, dim: usize) -> IntMatrix {
        assert!((1..=MAX_DIM).contains(&dim));
        let rows = index_of(&self.relative_simplices(dim - 1));
        let cols = self.relative_simplices(dim);
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, s) in cols.iter().enumerate() {
            for (f, sign) in faces(s) {
                if let Some(&i) = rows.get(&f) {
                    m[(i, j)] = BigInt::from(sign);
                }
            }
        }
        m
    }

    pub fn relative_euler_characteristic(&self) -> i64 {
        self.total.euler_characteristic() - self.sub.euler_characteristic()
    }
}

fn index_of(simplices: &[&Vec<u32>]) -> BTreeMap<Vec<u32>, usize> {
    simplices
        .iter()
        .enumerate()
        .map(|(i, s)| ((*s).clone(), i))
        .collect()
}

/// Boundary matrices `∂_1, ∂_2, ∂_3` of a complex. `∂_i` has one row per
/// `(i-1)`-simplex and one column per `i`-simplex.
pub fn boundary_matrices(c: &SimplicialComplex) -> Vec<IntMatrix> {
    let pair = SimplicialPair::absolute(c.clone());
    (1..=MAX_DIM).map(|d| pair.relative_boundary(d)).collect()
}

/// A finitely generated abelian group `Z^betti ⊕ Z/d_1 ⊕ ... ⊕ Z/d_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(with = "big_list")]
    pub torsion: Vec<BigInt>,
}

mod big_list {
    use num_bigint::BigInt;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::matrix::{big_to_json, json_to_big};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(big_to_json).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<serde_json::Value>::deserialize(d)?
            .iter()
            .map(|v| json_to_big(v).map_err(D::Error::custom))
            .collect()
    }
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        Self {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// `H_i(N, L; Z)` for `i = 0..=3`, via Smith normal forms of the relative boundaries.
pub fn relative_homology(pair: &SimplicialPair) -> Vec<HomologyGroup> {
    // invariant factors of ∂_1 .. ∂_3; ∂_0 and ∂_4 vanish
    let factors: Vec<Vec<BigInt>> = (1..=MAX_DIM)
        .map(|d| smith_normal_form(&pair.relative_boundary(d)).invariant_factors())
        .collect();
    let rank = |d: usize| -> usize {
        if (1..=MAX_DIM).contains(&d) {
            factors[d - 1].len()
        } else {
            0
        }
    };
    (0..=MAX_DIM)
        .map(|i| {
            let betti = pair.relative_rank(i) - rank(i) - rank(i + 1);
            let torsion = if i < MAX_DIM {
                factors[i].iter().filter(|d| !d.is_one()).cloned().collect()
            } else {
                Vec::new()
            };
            HomologyGroup { betti, torsion }
        })
        .collect()
}

pub fn homology(c: &SimplicialComplex) -> Vec<HomologyGroup> {
    relative_homology(&SimplicialPair::absolute(c.clone()))
}

/// Homology of the quotient `N / L` (with `L` collapsed to a point): the same
/// as `H_*(N, L)` except for one extra `Z` in degree 0 for the collapsed point.
pub fn quotient_homology(pair: &SimplicialPair) -> Vec<HomologyGroup> {
    // with L empty, N_L is N plus a disjoint base point, so the rule still holds
    let mut h = relative_homology(pair);
    h[0].betti += 1;
    h
}

/// Square integer matrices `M_0 .. M_3`, one per dimension, describing a map
/// on chains or on the free part of homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    matrices: Vec<IntMatrix>,
}

impl ChainMap {
    /// Missing trailing dimensions are filled with `0 x 0` matrices.
    pub fn new(mut matrices: Vec<IntMatrix>) -> Result<Self, HomologyError> {
        if matrices.len() > MAX_DIM + 1 {
            return Err(HomologyError::TooManyDimensions(matrices.len()));
        }
        for (dim, m) in matrices.iter().enumerate() {
            if !m.is_square() {
                return Err(HomologyError::Matrix {
                    dim,
                    source: MatrixError::NotSquare {
                        rows: m.rows(),
                        cols: m.cols(),
                    },
                });
            }
        }
        matrices.resize(MAX_DIM + 1, IntMatrix::empty());
        Ok(Self { matrices })
    }

    /// Identity on free modules of the given ranks.
    pub fn identity(ranks: &[usize]) -> Self {
        Self::new(ranks.iter().map(|&r| IntMatrix::identity(r)).collect())
            .expect("identity matrices are square")
    }

    /// Identity on the free part of the given homology groups.
    pub fn identity_on_homology(groups: &[HomologyGroup]) -> Self {
        Self::identity(&groups.iter().map(|g| g.betti).collect::<Vec<_>>())
    }

    /// Identity on the relative chains of a pair.
    pub fn identity_on_chains(pair: &SimplicialPair) -> Self {
        Self::identity(&(0..=MAX_DIM).map(|d| pair.relative_rank(d)).collect::<Vec<_>>())
    }

    /// Chain map on `C_*(N, L)` induced by a vertex map sending simplices to
    /// simplices (possibly degenerate) and `L` into `L`.
    pub fn from_simplicial_map(
        pair: &SimplicialPair,
        vertex_map: &BTreeMap<u32, u32>,
    ) -> Result<Self, HomologyError> {
        let image_of = |s: &[u32]| -> Result<Vec<u32>, HomologyError> {
            s.iter()
                .map(|v| vertex_map.get(v).copied().ok_or(HomologyError::UnmappedVertex(*v)))
                .collect()
        };
        for s in pair.total.all_simplices() {
            let mut image = image_of(s)?;
            image.sort_unstable();
            image.dedup();
            if !pair.total.contains(&image) {
                return Err(HomologyError::NotSimplicial {
                    simplex: s.clone(),
                    image,
                });
            }
            if pair.sub.contains(s) && !pair.sub.contains(&image) {
                return Err(HomologyError::NotAMapOfPairs {
                    simplex: s.clone(),
                    image,
                });
            }
        }

        let mut matrices = Vec::with_capacity(MAX_DIM + 1);
        for dim in 0..=MAX_DIM {
            let basis = pair.relative_simplices(dim);
            let index = index_of(&basis);
            let mut m = IntMatrix::zeros(basis.len(), basis.len());
            for (j, s) in basis.iter().enumerate() {
                let image = image_of(s)?;
                let (sorted, sign) = match sort_with_sign(&image) {
                    Some(x) => x,
                    None => continue, // degenerate image
                };
                if let Some(&i) = index.get(&sorted) {
                    m[(i, j)] = BigInt::from(sign);
                }
            }
            matrices.push(m);
        }
        let map = Self::new(matrices)?;
        map.check_commutes(pair)?;
        Ok(map)
    }

    /// Checks `∂_i M_i = M_{i-1} ∂_i` against the relative boundaries of `pair`.
    pub fn check_commutes(&self, pair: &SimplicialPair) -> Result<(), HomologyError> {
        for dim in 1..=MAX_DIM {
            let d = pair.relative_boundary(dim);
            if d.mul(&self.matrices[dim]) != self.matrices[dim - 1].mul(&d) {
                return Err(HomologyError::NotAChainMap(dim));
            }
        }
        Ok(())
    }

    pub fn matrix(&self, dim: usize) -> &IntMatrix {
        &self.matrices[dim]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.matrices
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        ChainMap {
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    /// Block sum, the map induced on a wedge or disjoint union.
    pub fn direct_sum(&self, other: &ChainMap) -> ChainMap {
        ChainMap {
            matrices: self
                .matrices
                .iter()
                .zip(&other.matrices)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        }
    }
}

/// Sorts the vertex list and returns the sign of the sorting permutation, or
/// `None` if a vertex repeats.
fn sort_with_sign(vertices: &[u32]) -> Option<(Vec<u32>, i64)> {
    let mut v = vertices.to_vec();
    let mut sign = 1;
    // insertion sort counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn sign_of(dim: usize) -> BigInt {
    if dim.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `Λ(f^n) = sum_i (-1)^i tr(M_i^n)`, exact.
pub fn lefschetz_number(m: &ChainMap, n: u64) -> BigInt {
    m.matrices
        .iter()
        .enumerate()
        .map(|(i, mi)| sign_of(i) * mi.pow(n).trace())
        .sum()
}

/// Index of an isolated invariant set from the induced map on `H_*(N_L)`
/// when the set is neither an attractor nor a repeller:
/// `i(f^n, S) = -tr(M_1^n) + tr(M_2^n)`, which equals `Λ(f^n) - 1`.
pub fn index_from_traces(m: &ChainMap, n: u64) -> Result<BigInt, HomologyError> {
    if !(m.matrices[0].rows() == 1 && m.matrices[0].is_identity()) {
        return Err(HomologyError::TraceFormulaPrecondition("M_0 is not [1]"));
    }
    if !m.matrices[3].is_zero() {
        return Err(HomologyError::TraceFormulaPrecondition("M_3 is not zero"));
    }
    Ok(m.matrices[2].pow(n).trace() - m.matrices[1].pow(n).trace())
}

fn ensure_square(m: &IntMatrix) -> Result<(), HomologyError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(HomologyError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// `det(I - x m)`, whose roots are the inverses of the nonzero eigenvalues.
pub fn reversed_characteristic_polynomial(m: &IntMatrix) -> IntPoly {
    let p = m.characteristic_polynomial();
    let n = m.rows();
    let mut c = p.coeffs().to_vec();
    c.resize(n + 1, BigInt::zero());
    c.reverse();
    IntPoly::new(c)
}

/// Whether `u` and `v` have the same nonzero eigenvalues with multiplicity,
/// decided by comparing `tr(u^k)` and `tr(v^k)` for `k = 1..=bound`.
///
/// The answer is cross-checked against the reversed characteristic
/// polynomials, which must coincide exactly when the nonzero spectra do.
pub fn nonzero_spectrum_match(
    u: &IntMatrix,
    v: &IntMatrix,
    bound: usize,
) -> Result<bool, HomologyError> {
    ensure_square(u)?;
    ensure_square(v)?;
    let needed = u.rows() + v.rows();
    if bound < needed {
        return Err(HomologyError::BoundTooSmall { bound, needed });
    }
    let mut pu = u.clone();
    let mut pv = v.clone();
    let mut traces_agree = true;
    for k in 1..=bound {
        if k > 1 {
            pu = pu.mul(u);
            pv = pv.mul(v);
        }
        if pu.trace() != pv.trace() {
            traces_agree = false;
            break;
        }
    }
    debug_assert_eq!(
        traces_agree,
        reversed_characteristic_polynomial(u) == reversed_characteristic_polynomial(v)
    );
    Ok(traces_agree)
}

/// Result of [`roots_of_unity_eigencheck`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenCheck {
    /// Every nonzero eigenvalue is a root of unity.
    pub roots_of_unity: bool,
    /// Least `n` with `lambda^n = 1` for every nonzero eigenvalue `lambda`.
    pub period: Option<u64>,
    /// Multiplicity of the eigenvalue zero.
    pub zero_multiplicity: usize,
    /// Cyclotomic factors `(d, multiplicity)` of the characteristic polynomial.
    pub cyclotomic_factors: Vec<(u64, usize)>,
}

pub fn roots_of_unity_eigencheck(m: &IntMatrix) -> Result<EigenCheck, HomologyError> {
    roots_of_unity_eigencheck_with_bound(m, DEFAULT_CYCLOTOMIC_BOUND)
}

/// Strips `x^s` from the characteristic polynomial and divides out
/// `Phi_1, ..., Phi_bound` exactly; all nonzero eigenvalues are roots of
/// unity iff nothing but `1` remains.
pub fn roots_of_unity_eigencheck_with_bound(
    m: &IntMatrix,
    bound: u64,
) -> Result<EigenCheck, HomologyError> {
    ensure_square(m)?;
    let (mut rest, zero_multiplicity) = m.characteristic_polynomial().strip_x_power();
    let table = cyclotomic_table(bound);
    let mut factors = Vec::new();
    for d in 1..=bound {
        let phi = &table[d as usize - 1];
        if rest.degree().unwrap_or(0) < totient(d) as usize {
            continue;
        }
        let mut mult = 0;
        loop {
            let (q, r) = rest.div_rem_monic(phi);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((d, mult));
        }
        if rest.degree() == Some(0) {
            break;
        }
    }
    let ok = rest.degree() == Some(0);
    let period = ok.then(|| factors.iter().fold(1u64, |acc, &(d, _)| acc.lcm(&d)));
    Ok(EigenCheck {
        roots_of_unity: ok,
        period,
        zero_multiplicity,
        cyclotomic_factors: factors,
    })
}

/// Exact `tr(m^n)` for `n = 1..=count`.
pub fn trace_sequence(m: &IntMatrix, count: usize) -> Vec<BigInt> {
    let mut p = m.clone();
    let mut out = Vec::with_capacity(count);
    for k in 1..=count {
        if k > 1 {
            p = p.mul(m);
        }
        out.push(p.trace());
    }
    out
}

/// `Λ(f^n)` for `n = 1..=n_max`.
pub fn lefschetz_table(m: &ChainMap, n_max: u64) -> Vec<BigInt> {
    (1..=n_max).map(|n| lefschetz_number(m, n)).collect()
}

/// Small triangulations used by tests, the CLI and the realization checks.
pub mod models {
    use super::*;

    /// Boundary of the 3-simplex, a 2-sphere.
    pub fn tetrahedron_boundary() -> SimplicialComplex {
        SimplicialComplex::closure([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
            .unwrap()
            .0
    }

    pub fn filled_triangle() -> SimplicialComplex {
        SimplicialComplex::closure([[0u32, 1, 2]]).unwrap().0
    }

    pub fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::closure([[0u32, 1], [1, 2], [0, 2]]).unwrap().0
    }

    /// The 7-vertex (Möbius–Császár) torus: triangles `{i, i+1, i+3}` and
    /// `{i, i+2, i+3}` modulo 7.
    pub fn torus7() -> SimplicialComplex {
        let tris: Vec<[u32; 3]> = (0..7u32)
            .flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        SimplicialComplex::closure(tris).unwrap().0
    }

    /// Six-vertex real projective plane.
    pub fn projective_plane6() -> SimplicialComplex {
        let tris = [
            [1u32, 2, 3],
            [1, 3, 4],
            [1, 4, 5],
            [1, 5, 6],
            [1, 6, 2],
            [2, 3, 5],
            [3, 4, 6],
            [4, 5, 2],
            [5, 6, 3],
            [6, 2, 4],
        ];
        SimplicialComplex::closure(tris).unwrap().0
    }

    /// `count` hollow triangles sharing the vertex 0. Circle `j` uses
    /// vertices `0, 2j+1, 2j+2`.
    pub fn wedge_of_circles(count: u32) -> SimplicialComplex {
        let edges: Vec<[u32; 2]> = (0..count)
            .flat_map(|j| {
                let (a, b) = (2 * j + 1, 2 * j + 2);
                [[0, a], [a, b], [0, b]]
            })
            .collect();
        if edges.is_empty() {
            return SimplicialComplex::new([[0u32]]).unwrap();
        }
        SimplicialComplex::closure(edges).unwrap().0
    }

    /// `count` disjoint filled triangles; triangle `j` uses `3j, 3j+1, 3j+2`.
    pub fn disjoint_disks(count: u32) -> SimplicialComplex {
        let tris: Vec<[u32; 3]> = (0..count).map(|j| [3 * j, 3 * j + 1, 3 * j + 2]).collect();
        SimplicialComplex::closure(tris).unwrap().0
    }
}
