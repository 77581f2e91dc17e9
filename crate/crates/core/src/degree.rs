//! Fixed point indices as degrees of normalized displacement maps.
//!
//! For an isolated fixed point at the origin, `i(f, 0)` is the degree of
//! `z -> (εz - f(εz)) / |εz - f(εz)|` on the unit sphere. The degree is
//! computed by summing signed solid angles of image triangles over a
//! geodesic icosphere.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;
use crate::realization::{index_sequence, inverse_index_sequence, SkewProduct};
use crate::sphere::{angle, cross, dot, edge_bound, norm, normalize, scale, sub, Icosphere, Vec3};

pub const DEFAULT_LEVEL: u32 = 4;
pub const DEFAULT_EPSILON: f64 = 1e-2;
/// Extra levels tried when a mesh is too coarse.
pub const MAX_REFINEMENTS: u32 = 3;
/// Meshes above this level are never built.
pub const MAX_LEVEL: u32 = 8;
pub const ROUNDING_TOLERANCE: f64 = 0.1;
/// Longest admissible image edge.
pub const MAX_IMAGE_EDGE: f64 = PI / 2.0;
pub const MIN_DISPLACEMENT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DegreeError {
    #[error("mesh level {level} is too coarse (residual {residual:.3e}, longest image edge {max_image_edge:.3})")]
    MeshTooCoarse {
        level: u32,
        residual: f64,
        max_image_edge: f64,
    },
    #[error("displacement {norm:.3e} at {point:?} is below {MIN_DISPLACEMENT:e}; epsilon too large or fixed point not isolated")]
    DegenerateDisplacement { point: Vec3, norm: f64 },
    #[error("expected {expected} images, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("image {0} is not a unit vector")]
    NotUnit(usize),
    #[error("unknown catalog map {0:?}")]
    UnknownMap(String),
    #[error("map {0:?} has no evaluable inverse")]
    NotInvertible(String),
    #[error("map {0:?} is symbolic only")]
    SymbolicOnly(String),
    #[error("iterate must be at least 1")]
    ZeroIterate,
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("features of size {feature:.3e} cannot be resolved below mesh level {MAX_LEVEL}")]
    FeatureTooSmall { feature: f64 },
    #[error("mesh level {0} exceeds the maximum {MAX_LEVEL}")]
    LevelTooHigh(u32),
}

/// Unit images of the vertices of an icosphere.
#[derive(Debug, Clone)]
pub struct TriangulatedSphereMap {
    mesh: Arc<Icosphere>,
    images: Vec<Vec3>,
}

impl TriangulatedSphereMap {
    pub fn new(mesh: Arc<Icosphere>, images: Vec<Vec3>) -> Result<Self, DegreeError> {
        if images.len() != mesh.vertices().len() {
            return Err(DegreeError::LengthMismatch {
                expected: mesh.vertices().len(),
                found: images.len(),
            });
        }
        if let Some(i) = images.iter().position(|v| (norm(*v) - 1.0).abs() > 1e-12) {
            return Err(DegreeError::NotUnit(i));
        }
        Ok(Self { mesh, images })
    }

    /// Images `normalize(f(v))` of every vertex `v`.
    pub fn from_fn(level: u32, f: impl Fn(Vec3) -> Vec3) -> Result<Self, DegreeError> {
        if level > MAX_LEVEL {
            return Err(DegreeError::LevelTooHigh(level));
        }
        let mesh = Icosphere::cached(level);
        let images = mesh.vertices().iter().map(|&v| normalize(f(v))).collect();
        Self::new(mesh, images)
    }

    pub fn mesh(&self) -> &Icosphere {
        &self.mesh
    }

    pub fn images(&self) -> &[Vec3] {
        &self.images
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: i64,
    /// Solid angle sum divided by `4π`, before rounding.
    pub raw: f64,
    pub residual: f64,
    /// Longest edge of an image triangle, in radians.
    pub max_image_edge: f64,
    pub level: u32,
}

/// Signed solid angle of the geodesic triangle `a b c`.
pub fn solid_angle(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let num = dot(a, cross(b, c));
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

pub fn sphere_degree(m: &TriangulatedSphereMap) -> Result<DegreeReport, DegreeError> {
    let mut total = 0.0;
    let mut max_edge: f64 = 0.0;
    // fixed face order keeps the sum reproducible
    for &[i, j, k] in m.mesh.faces() {
        let [a, b, c] = [i, j, k].map(|t| m.images[t as usize]);
        max_edge = max_edge.max(angle(a, b)).max(angle(b, c)).max(angle(c, a));
        total += solid_angle(a, b, c);
    }
    let raw = total / (4.0 * PI);
    let degree = raw.round();
    let residual = (raw - degree).abs();
    if residual > ROUNDING_TOLERANCE || max_edge > MAX_IMAGE_EDGE {
        return Err(DegreeError::MeshTooCoarse {
            level: m.mesh.level(),
            residual,
            max_image_edge: max_edge,
        });
    }
    Ok(DegreeReport {
        degree: degree as i64,
        raw,
        residual,
        max_image_edge: max_edge,
        level: m.mesh.level(),
    })
}

#[derive(Debug, Clone)]
enum MapKind {
    Linear([[f64; 3]; 3]),
    /// `(x/2 + z^2, y/2, 2z)` and its inverse.
    TwistedSaddle { inverse: bool },
    Radial { model: Arc<SkewProduct>, inverse: bool },
    Anosov,
}

/// A homeomorphism of R^3 fixing the origin.
#[derive(Debug, Clone)]
pub struct CatalogMap {
    id: String,
    kind: MapKind,
    orientation_preserving: bool,
}

/// Identifiers accepted by [`CatalogMap::by_id`].
pub const CATALOG: [&str; 8] = [
    "contraction",
    "repeller",
    "l",
    "l-prime",
    "contraction-reversing",
    "repeller-reversing",
    "twisted-saddle",
    "anosov-remark6",
];

fn diag(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    dot(m[0], cross(m[1], m[2]))
}

fn mat_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    out
}

fn inverse3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let d = det3(m);
    let cols = [cross(m[1], m[2]), cross(m[2], m[0]), cross(m[0], m[1])];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = cols[j][i] / d;
        }
    }
    out
}

impl CatalogMap {
    pub fn by_id(id: &str) -> Result<Self, DegreeError> {
        let (kind, orientation_preserving) = match id {
            "contraction" => (MapKind::Linear(diag(0.5, 0.5, 0.5)), true),
            "repeller" => (MapKind::Linear(diag(2.0, 2.0, 2.0)), true),
            "l" => (MapKind::Linear(diag(0.5, 0.5, 2.0)), true),
            "l-prime" => (MapKind::Linear(diag(0.5, 0.5, -2.0)), false),
            "contraction-reversing" => (MapKind::Linear(diag(0.5, 0.5, -0.5)), false),
            "repeller-reversing" => (MapKind::Linear(diag(2.0, 2.0, -2.0)), false),
            "twisted-saddle" => (MapKind::TwistedSaddle { inverse: false }, true),
            "anosov-remark6" => (MapKind::Anosov, true),
            _ => return Err(DegreeError::UnknownMap(id.to_string())),
        };
        Ok(Self {
            id: id.to_string(),
            kind,
            orientation_preserving,
        })
    }

    /// The radial homeomorphism of a realization plan.
    pub fn radial(model: Arc<SkewProduct>) -> Self {
        Self {
            id: "plan".into(),
            kind: MapKind::Radial {
                model,
                inverse: false,
            },
            orientation_preserving: true,
        }
    }

    /// Linear map with the given matrix (rows).
    pub fn linear(id: &str, m: [[f64; 3]; 3]) -> Self {
        Self {
            id: id.to_string(),
            orientation_preserving: det3(&m) > 0.0,
            kind: MapKind::Linear(m),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn orientation_preserving(&self) -> bool {
        self.orientation_preserving
    }

    pub fn invertible(&self) -> bool {
        !self.is_symbolic()
    }

    /// Maps without an evaluable model in R^3.
    pub fn is_symbolic(&self) -> bool {
        matches!(self.kind, MapKind::Anosov)
    }

    pub fn evaluate(&self, v: Vec3) -> Option<Vec3> {
        Some(match &self.kind {
            MapKind::Linear(m) => mat_vec(m, v),
            MapKind::TwistedSaddle { inverse: false } => {
                [v[0] / 2.0 + v[2] * v[2], v[1] / 2.0, 2.0 * v[2]]
            }
            MapKind::TwistedSaddle { inverse: true } => {
                let z = v[2] / 2.0;
                [2.0 * (v[0] - z * z), 2.0 * v[1], z]
            }
            MapKind::Radial { model, inverse } => {
                if *inverse {
                    model.apply_inverse(v)
                } else {
                    model.apply(v)
                }
            }
            MapKind::Anosov => return None,
        })
    }

    /// `f^n(v)` by repeated application.
    pub fn iterate(&self, v: Vec3, n: u64) -> Option<Vec3> {
        (0..n).try_fold(v, |w, _| self.evaluate(w))
    }

    pub fn inverse(&self) -> Result<Self, DegreeError> {
        let kind = match &self.kind {
            MapKind::Linear(m) => MapKind::Linear(inverse3(m)),
            MapKind::TwistedSaddle { inverse } => MapKind::TwistedSaddle { inverse: !inverse },
            MapKind::Radial { model, inverse } => MapKind::Radial {
                model: model.clone(),
                inverse: !inverse,
            },
            MapKind::Anosov => return Err(DegreeError::NotInvertible(self.id.clone())),
        };
        let id = match self.id.strip_suffix("^-1") {
            Some(base) => base.to_string(),
            None => format!("{}^-1", self.id),
        };
        Ok(Self {
            id,
            kind,
            orientation_preserving: self.orientation_preserving,
        })
    }

    /// Derivative at the origin, for maps that have one in closed form.
    pub fn linearization(&self) -> Option<[[f64; 3]; 3]> {
        match &self.kind {
            MapKind::Linear(m) => Some(*m),
            MapKind::TwistedSaddle { inverse } => Some(if *inverse {
                diag(2.0, 2.0, 0.5)
            } else {
                diag(0.5, 0.5, 2.0)
            }),
            _ => None,
        }
    }

    /// Index of `f^n` known without any numerics: `sign det(I - A^n)` for a
    /// hyperbolic linear part, the realization formula for plan maps and the
    /// trace formula for the symbolic entry.
    pub fn symbolic_index(&self, n: u64) -> Option<BigInt> {
        match &self.kind {
            MapKind::Anosov => anosov_index_sequence(n as usize).pop(),
            MapKind::Radial { model, inverse } => Some(BigInt::from(if *inverse {
                inverse_index_sequence(model.plan(), n)
            } else {
                index_sequence(model.plan(), n)
            })),
            _ => {
                let a = self.linearization()?;
                let mut p = a;
                for _ in 1..n {
                    p = mat_mul(&p, &a);
                }
                let i_minus = [
                    sub([1.0, 0.0, 0.0], p[0]),
                    sub([0.0, 1.0, 0.0], p[1]),
                    sub([0.0, 0.0, 1.0], p[2]),
                ];
                let d = det3(&i_minus);
                (d != 0.0).then(|| BigInt::from(d.signum() as i64))
            }
        }
    }

    /// Finest detail a mesh has to resolve, if the map has one.
    pub fn min_feature(&self) -> Option<f64> {
        match &self.kind {
            MapKind::Radial { model, .. } => model.min_feature(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub index: i64,
    pub residual: f64,
    pub level_used: u32,
    /// Whether the index at `ε/2` agrees.
    pub epsilon_check: bool,
}

/// Image edge above which a triangle is split during adaptive evaluation.
const SPLIT_EDGE: f64 = PI / 4.0;
/// Extra subdivision depth available to a single triangle.
pub const ADAPTIVE_DEPTH: u32 = 8;

struct Adaptive<'a> {
    disp: &'a dyn Fn(Vec3) -> Result<Vec3, DegreeError>,
    max_edge: f64,
    splits: usize,
}

impl Adaptive<'_> {
    /// Solid angle of the image of the spherical triangle `p`, splitting it
    /// into four while its image edges are long.
    fn solid(&mut self, p: [Vec3; 3], d: [Vec3; 3], depth: u32) -> Result<f64, DegreeError> {
        let e = angle(d[0], d[1]).max(angle(d[1], d[2])).max(angle(d[2], d[0]));
        if e <= SPLIT_EDGE || depth == 0 {
            self.max_edge = self.max_edge.max(e);
            return Ok(solid_angle(d[0], d[1], d[2]));
        }
        self.splits += 1;
        let mid = |i: usize, j: usize| normalize(crate::sphere::add(p[i], p[j]));
        let (ab, bc, ca) = (mid(0, 1), mid(1, 2), mid(2, 0));
        let (dab, dbc, dca) = ((self.disp)(ab)?, (self.disp)(bc)?, (self.disp)(ca)?);
        Ok(self.solid([p[0], ab, ca], [d[0], dab, dca], depth - 1)?
            + self.solid([p[1], bc, ab], [d[1], dbc, dab], depth - 1)?
            + self.solid([p[2], ca, bc], [d[2], dca, dbc], depth - 1)?
            + self.solid([ab, bc, ca], [dab, dbc, dca], depth - 1)?)
    }
}

/// Degree of the displacement of `f^n` on the `ε`-sphere, starting from the
/// icosphere at `level` and splitting triangles whose image edges exceed
/// `π/4`, at most [`ADAPTIVE_DEPTH`] times. The same acceptance rule as
/// [`sphere_degree`] applies to the final triangles.
pub fn displacement_degree(f: &CatalogMap, n: u64, epsilon: f64, level: u32) -> Result<DegreeReport, DegreeError> {
    if n == 0 {
        return Err(DegreeError::ZeroIterate);
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(DegreeError::BadEpsilon(epsilon));
    }
    if f.is_symbolic() {
        return Err(DegreeError::SymbolicOnly(f.id.clone()));
    }
    if level > MAX_LEVEL {
        return Err(DegreeError::LevelTooHigh(level));
    }
    let disp = |z: Vec3| -> Result<Vec3, DegreeError> {
        let w = scale(epsilon, z);
        let d = sub(w, f.iterate(w, n).expect("evaluable map"));
        let len = norm(d);
        if len < MIN_DISPLACEMENT {
            return Err(DegreeError::DegenerateDisplacement { point: w, norm: len });
        }
        Ok(scale(1.0 / len, d))
    };
    let mesh = Icosphere::cached(level);
    let images = mesh.vertices().iter().map(|&z| disp(z)).collect::<Result<Vec<_>, _>>()?;
    let mut ad = Adaptive {
        disp: &disp,
        max_edge: 0.0,
        splits: 0,
    };
    let mut total = 0.0;
    for &[i, j, k] in mesh.faces() {
        let p = [i, j, k].map(|t| mesh.vertices()[t as usize]);
        let d = [i, j, k].map(|t| images[t as usize]);
        total += ad.solid(p, d, ADAPTIVE_DEPTH)?;
    }
    let raw = total / (4.0 * PI);
    let degree = raw.round();
    let residual = (raw - degree).abs();
    if residual > ROUNDING_TOLERANCE || ad.max_edge > MAX_IMAGE_EDGE {
        return Err(DegreeError::MeshTooCoarse {
            level,
            residual,
            max_image_edge: ad.max_edge,
        });
    }
    Ok(DegreeReport {
        degree: degree as i64,
        raw,
        residual,
        max_image_edge: ad.max_edge,
        level,
    })
}

/// Smallest level whose edges are at most half the map's finest feature.
/// Adaptive splitting only reacts to what the vertices see, so a coarser
/// start can step over a whole disk and return a wrong degree.
fn feature_level(f: &CatalogMap) -> u32 {
    match f.min_feature() {
        Some(r) => (0..=MAX_LEVEL + 1).find(|&l| edge_bound(l) <= r / 2.0).unwrap_or(MAX_LEVEL + 1),
        None => 0,
    }
}

/// `i(f^n, 0)` from the degree at `level`, refining up to
/// [`MAX_REFINEMENTS`] times when the mesh is too coarse. Maps with fine
/// features start at a level that resolves them. The answer is recomputed
/// at `ε/2` on the final level.
pub fn fixed_point_index(f: &CatalogMap, n: u64, epsilon: f64, level: u32) -> Result<IndexReport, DegreeError> {
    let start = level.max(feature_level(f));
    if start > MAX_LEVEL {
        return Err(DegreeError::FeatureTooSmall {
            feature: f.min_feature().unwrap_or(0.0),
        });
    }
    let cap = (level + MAX_REFINEMENTS).max(start).min(MAX_LEVEL);
    let mut last = None;
    for l in start..=cap {
        match displacement_degree(f, n, epsilon, l) {
            Ok(rep) => {
                let half = displacement_degree(f, n, epsilon / 2.0, l);
                return Ok(IndexReport {
                    index: rep.degree,
                    residual: rep.residual,
                    level_used: l,
                    epsilon_check: half.is_ok_and(|h| h.degree == rep.degree),
                });
            }
            Err(e @ DegreeError::MeshTooCoarse { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one level tried"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseRelation {
    pub forward: i64,
    pub inverse: i64,
    pub orientation_preserving: bool,
    /// `i(f^{-n}) = -i(f^n)` when `f` preserves orientation, `= i(f^n)` when
    /// it reverses it (odd dimension).
    pub holds: bool,
}

pub fn inverse_index_relation(f: &CatalogMap, n: u64, epsilon: f64, level: u32) -> Result<InverseRelation, DegreeError> {
    let forward = fixed_point_index(f, n, epsilon, level)?.index;
    let inverse = fixed_point_index(&f.inverse()?, n, epsilon, level)?.index;
    let preserving = f.orientation_preserving || n.is_multiple_of(2);
    let holds = if preserving {
        inverse == -forward
    } else {
        inverse == forward
    };
    Ok(InverseRelation {
        forward,
        inverse,
        orientation_preserving: f.orientation_preserving,
        holds,
    })
}

/// `I_n = -1 + tr(A^n)` for `A = [[2, 1], [1, 1]]`, `n = 1..=n_max`. The
/// sequence grows like `((3 + √5) / 2)^n`, so it is not periodic.
pub fn anosov_index_sequence(n_max: usize) -> Vec<BigInt> {
    let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).expect("square");
    crate::homology::trace_sequence(&a, n_max)
        .into_iter()
        .map(|t| t - 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::{build_skew_product, plan_from_shifted};

    fn index(id: &str, n: u64) -> i64 {
        fixed_point_index(&CatalogMap::by_id(id).unwrap(), n, DEFAULT_EPSILON, DEFAULT_LEVEL)
            .unwrap()
            .index
    }

    #[test]
    fn identity_and_antipode() {
        for level in 0..=4 {
            let id = TriangulatedSphereMap::from_fn(level, |v| v).unwrap();
            assert_eq!(sphere_degree(&id).unwrap().degree, 1);
            let anti = TriangulatedSphereMap::from_fn(level, |v| scale(-1.0, v)).unwrap();
            assert_eq!(sphere_degree(&anti).unwrap().degree, -1);
        }
    }

    #[test]
    fn reflection_and_constant() {
        let refl = TriangulatedSphereMap::from_fn(3, |v| [v[0], v[1], -v[2]]).unwrap();
        assert_eq!(sphere_degree(&refl).unwrap().degree, -1);
        let near_const = TriangulatedSphereMap::from_fn(3, |v| normalize([v[0] * 0.1, v[1] * 0.1, 1.0])).unwrap();
        assert_eq!(sphere_degree(&near_const).unwrap().degree, 0);
    }

    #[test]
    fn degree_two_needs_fine_mesh() {
        // z -> z^2 on the Riemann sphere, via stereographic coordinates
        let square = |v: Vec3| {
            let d = 1.0 - v[2];
            if d.abs() < 1e-14 {
                return [0.0, 0.0, 1.0];
            }
            let (x, y) = (v[0] / d, v[1] / d);
            let (u, w) = (x * x - y * y, 2.0 * x * y);
            let r2 = u * u + w * w;
            [2.0 * u / (r2 + 1.0), 2.0 * w / (r2 + 1.0), (r2 - 1.0) / (r2 + 1.0)]
        };
        let m = TriangulatedSphereMap::from_fn(5, square).unwrap();
        assert_eq!(sphere_degree(&m).unwrap().degree, 2);
    }

    #[test]
    fn rejects_bad_images() {
        let mesh = Icosphere::cached(1);
        assert!(matches!(
            TriangulatedSphereMap::new(mesh.clone(), vec![[1.0, 0.0, 0.0]]),
            Err(DegreeError::LengthMismatch { .. })
        ));
        let images = vec![[2.0, 0.0, 0.0]; mesh.vertices().len()];
        assert_eq!(TriangulatedSphereMap::new(mesh, images).unwrap_err(), DegreeError::NotUnit(0));
    }

    #[test]
    fn catalog_examples() {
        for n in 1..=4 {
            assert_eq!(index("l", n), -1);
            assert_eq!(index("repeller", n), -1);
            assert_eq!(index("contraction", n), 1);
            assert_eq!(index("twisted-saddle", n), -1);
        }
        assert_eq!(index("l-prime", 1), 1);
        assert_eq!(index("l-prime", 2), -1);
        for n in 1..=6 {
            assert_eq!(index("contraction", n), 1);
        }
    }

    #[test]
    fn numeric_matches_linearization() {
        for id in CATALOG.iter().filter(|id| **id != "anosov-remark6") {
            let f = CatalogMap::by_id(id).unwrap();
            for n in 1..=4 {
                let numeric = fixed_point_index(&f, n, DEFAULT_EPSILON, 3).unwrap();
                assert_eq!(Some(BigInt::from(numeric.index)), f.symbolic_index(n), "{id} n={n}");
                assert!(numeric.epsilon_check);
            }
        }
    }

    #[test]
    fn inverse_relations() {
        let r = inverse_index_relation(&CatalogMap::by_id("contraction").unwrap(), 1, DEFAULT_EPSILON, 3).unwrap();
        assert_eq!((r.forward, r.inverse), (1, -1));
        assert!(r.holds);
        let r = inverse_index_relation(&CatalogMap::by_id("l").unwrap(), 1, DEFAULT_EPSILON, 3).unwrap();
        assert_eq!((r.forward, r.inverse), (-1, 1));
        assert!(r.holds);
        let r = inverse_index_relation(&CatalogMap::by_id("l-prime").unwrap(), 1, DEFAULT_EPSILON, 3).unwrap();
        assert_eq!((r.forward, r.inverse), (1, 1));
        assert!(r.holds);
        let saddle = CatalogMap::by_id("twisted-saddle").unwrap();
        let inv = saddle.inverse().unwrap();
        assert_eq!(inv.id(), "twisted-saddle^-1");
        let v = [0.3, -0.1, 0.2];
        let back = inv.evaluate(saddle.evaluate(v).unwrap()).unwrap();
        assert!(norm(sub(back, v)) < 1e-15);
        assert_eq!(inv.inverse().unwrap().id(), "twisted-saddle");
    }

    #[test]
    fn symbolic_entries() {
        let f = CatalogMap::by_id("anosov-remark6").unwrap();
        assert!(f.is_symbolic());
        assert_eq!(f.symbolic_index(3), Some(BigInt::from(17)));
        assert!(matches!(
            fixed_point_index(&f, 1, DEFAULT_EPSILON, 2),
            Err(DegreeError::SymbolicOnly(_))
        ));
        assert!(matches!(f.inverse(), Err(DegreeError::NotInvertible(_))));
        assert!(matches!(CatalogMap::by_id("nope"), Err(DegreeError::UnknownMap(_))));
    }

    #[test]
    fn anosov_oracle() {
        // t_1 = 3, t_2 = 7, t_{n+1} = 3 t_n - t_{n-1}
        let seq = anosov_index_sequence(40);
        let (mut prev, mut cur) = (BigInt::from(2), BigInt::from(3));
        for value in &seq {
            assert_eq!(*value, &cur - 1);
            let next = 3 * &cur - &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        assert_eq!(&seq[..4], &[2, 6, 17, 46].map(BigInt::from));
    }

    #[test]
    fn degenerate_displacement_is_reported() {
        let id = CatalogMap::linear("identity", diag(1.0, 1.0, 1.0));
        assert!(matches!(
            fixed_point_index(&id, 1, DEFAULT_EPSILON, 2),
            Err(DegreeError::DegenerateDisplacement { .. })
        ));
        assert_eq!(
            fixed_point_index(&CatalogMap::by_id("l").unwrap(), 0, DEFAULT_EPSILON, 2),
            Err(DegreeError::ZeroIterate)
        );
    }

    #[test]
    fn plan_maps_match_symbolic() {
        let plans: &[&[(u64, i64)]] = &[&[], &[(1, -1)], &[(1, -2)], &[(2, -1)], &[(1, 1)], &[(2, 1)]];
        for coeffs in plans {
            let plan = plan_from_shifted(&coeffs.iter().copied().collect()).unwrap();
            let f = CatalogMap::radial(Arc::new(build_skew_product(&plan).unwrap()));
            for n in 1..=4 {
                let r = fixed_point_index(&f, n, DEFAULT_EPSILON, DEFAULT_LEVEL)
                    .unwrap_or_else(|e| panic!("{coeffs:?} n={n}: {e}"));
                assert_eq!(BigInt::from(r.index), f.symbolic_index(n).unwrap(), "{coeffs:?} n={n}");
            }
        }
    }
}
