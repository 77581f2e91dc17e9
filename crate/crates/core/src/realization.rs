//! Realization of admissible index sequences by radial homeomorphisms of R^3.
//!
//! A sequence `I = sigma^1 + sum_k a_k sigma^k` (the plan keeps the shifted
//! coefficients, so `a_1` is one less than the Dold coefficient) is realized
//! by a skew product `(x, y) -> (g(x), y + phi(x))` on `S^2 x R`. In `R^3`
//! coordinates this is `v -> e^{phi(v/|v|)} |v| g(v/|v|)`, fixing the origin.
//! Every `k` with `a_k < 0` contributes `-a_k` families of `k` cyclically
//! permuted disks and every `k` with `a_k > 0` contributes `a_k` families of
//! an annulus with `k` permuted holes. `X_0 = {phi >= 0}` is the union of
//! these pieces and the index of the `n`-th iterate at the origin is
//! `1 - Λ((g|X_0)^n)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::sequence::{check_dold, DoldDecomposition, PeriodicSequence, SequenceError};
use crate::sphere::{
    add, along_geodesic, angle, cross, fibonacci_points, normalize, orthogonal, rotate, scale, Vec3,
};

/// Families beyond this count are not placed on the sphere.
pub const MAX_FAMILIES: usize = 36;
/// Largest hole count for which an evaluable annulus map is provided.
pub const MAX_ANNULUS_K: u64 = 6;
pub const DEFAULT_PHI_MARGIN: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 0x5eed;

// Shape constants, as fractions of the family radius R.
const RIGID: f64 = 0.75;
const RING: f64 = 0.45;
const DISK_MAX: f64 = 0.12;
const CENTRAL_DISK: f64 = 0.25;
const HOLE_MAX: f64 = 0.08;
const INNER: f64 = 0.2;
const OUTER: f64 = 0.7;
const STRIP: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RealizationError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("coefficient a_{k} = {value} is not an integer")]
    NonIntegralCoefficient { k: u64, value: String },
    #[error("coefficient key {0} must be a positive integer")]
    BadKey(u64),
    #[error("plan is inconsistent: {0}")]
    InconsistentPlan(String),
    #[error("plan has {0} families; at most {MAX_FAMILIES} can be placed")]
    TooManyFamilies(usize),
    #[error("annulus families with k = {k} are not supported (k <= {MAX_ANNULUS_K})")]
    UnsupportedAnnulus { k: u64 },
    #[error("geometry overlap: {0}")]
    GeometryOverlap(String),
    #[error("property (P) fails at {point:?}: phi = {phi}, phi(g(x)) = {phi_image}")]
    PropertyPViolation {
        point: Vec3,
        phi: f64,
        phi_image: f64,
    },
    #[error("family {family}: disk {disk} is not mapped strictly inside its successor")]
    InclusionViolation { family: usize, disk: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub k: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Disk,
    Annulus,
}

/// Where one family instance sits on the sphere. Angles are in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub kind: FamilyKind,
    pub k: u64,
    pub center: Vec3,
    /// Angular radius of the cap that contains the family.
    pub radius: f64,
    /// Angular distance of the disk (or hole) centres from `center`.
    pub ring_radius: f64,
    pub disk_radius: f64,
    /// Azimuths of the disk centres, measured from [`orthogonal`]`(center)`.
    pub phases: Vec<f64>,
}

impl Placement {
    pub fn disk_centres(&self) -> Vec<Vec3> {
        let c = self.center;
        let e1 = orthogonal(c);
        let e2 = cross(c, e1);
        let (s, co) = self.ring_radius.sin_cos();
        self.phases
            .iter()
            .map(|t| {
                let dir = add(scale(t.cos(), e1), scale(t.sin(), e2));
                normalize(add(scale(co, c), scale(s, dir)))
            })
            .collect()
    }
}

/// Combinatorial data of a realization.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationPlan {
    shifted: BTreeMap<u64, i64>,
    disk_families: Vec<Family>,
    annulus_families: Vec<Family>,
    geometry: Vec<Placement>,
}

/// Plan for an admissible sequence. Fails with the integrality witness when
/// the Dold congruences do not hold.
pub fn plan_realization(seq: &PeriodicSequence) -> Result<RealizationPlan, RealizationError> {
    let check = check_dold(seq);
    if let Some(w) = check.witness {
        return Err(SequenceError::from(w).into());
    }
    let mut coefficients = check
        .decomposition
        .integer_coefficients()
        .expect("Dold coefficients are integral");
    *coefficients.entry(1).or_insert(0) -= 1;
    plan_from_shifted(&coefficients)
}

/// Plan from already shifted coefficients (the empty map realizes `sigma^1`).
pub fn plan_from_shifted(coefficients: &BTreeMap<u64, i64>) -> Result<RealizationPlan, RealizationError> {
    let shifted: BTreeMap<u64, i64> = coefficients
        .iter()
        .filter(|(_, &a)| a != 0)
        .map(|(&k, &a)| (k, a))
        .collect();
    if shifted.contains_key(&0) {
        return Err(RealizationError::BadKey(0));
    }
    let families = |sign: i64| -> Vec<Family> {
        shifted
            .iter()
            .filter(|(_, &a)| a.signum() == sign)
            .map(|(&k, &a)| Family {
                k,
                count: a.unsigned_abs(),
            })
            .collect()
    };
    let disk_families = families(-1);
    let annulus_families = families(1);
    let geometry = default_geometry(&disk_families, &annulus_families);
    Ok(RealizationPlan {
        shifted,
        disk_families,
        annulus_families,
        geometry,
    })
}

/// Plan from a decomposition whose coefficients are read as shifted ones.
pub fn plan_from_decomposition(dec: &DoldDecomposition) -> Result<RealizationPlan, RealizationError> {
    let mut shifted = BTreeMap::new();
    for (&k, a) in dec.coefficients() {
        if !a.is_integer() {
            return Err(RealizationError::NonIntegralCoefficient {
                k,
                value: crate::sequence::format_rational(a),
            });
        }
        let a = num_traits::ToPrimitive::to_i64(&a.to_integer()).ok_or_else(|| {
            RealizationError::InconsistentPlan(format!("coefficient a_{k} does not fit in i64"))
        })?;
        shifted.insert(k, a);
    }
    plan_from_shifted(&shifted)
}

fn instances(disks: &[Family], annuli: &[Family]) -> Vec<(FamilyKind, u64)> {
    let mut out = Vec::new();
    for f in disks {
        out.extend(std::iter::repeat_n((FamilyKind::Disk, f.k), f.count as usize));
    }
    for f in annuli {
        out.extend(std::iter::repeat_n((FamilyKind::Annulus, f.k), f.count as usize));
    }
    out
}

/// Distance between neighbouring points of a ring of `k` points at angle `rho`.
fn ring_spacing(rho: f64, k: u64) -> f64 {
    let c = rho.cos().powi(2) + rho.sin().powi(2) * (2.0 * PI / k as f64).cos();
    c.clamp(-1.0, 1.0).acos()
}

/// Families at equally spaced longitudes on the equator, each inside a cap
/// of radius `0.45 * spacing` (at most 1 rad). Empty when there are more
/// than [`MAX_FAMILIES`] families.
fn default_geometry(disks: &[Family], annuli: &[Family]) -> Vec<Placement> {
    let total: u64 = disks.iter().chain(annuli).map(|f| f.count).sum();
    if total == 0 || total > MAX_FAMILIES as u64 {
        return Vec::new();
    }
    let inst = instances(disks, annuli);
    let m = inst.len();
    let sep = 2.0 * PI / m as f64;
    let radius = (0.45 * sep).min(1.0);
    inst.into_iter()
        .enumerate()
        .map(|(i, (kind, k))| {
            let lon = sep * i as f64;
            let center = [lon.cos(), lon.sin(), 0.0];
            let phases = (0..k).map(|j| 2.0 * PI * j as f64 / k as f64).collect();
            let (ring_radius, disk_radius) = match (kind, k) {
                (FamilyKind::Disk, 1) => (0.0, CENTRAL_DISK * radius),
                (FamilyKind::Disk, _) => {
                    let rho = RING * radius;
                    (rho, (DISK_MAX * radius).min(0.225 * ring_spacing(rho, k)))
                }
                (FamilyKind::Annulus, 1) => (RING * radius, HOLE_MAX * radius),
                (FamilyKind::Annulus, _) => {
                    let rho = RING * radius;
                    (rho, (HOLE_MAX * radius).min(0.225 * ring_spacing(rho, k)))
                }
            };
            Placement {
                kind,
                k,
                center,
                radius,
                ring_radius,
                disk_radius,
                phases,
            }
        })
        .collect()
}

impl RealizationPlan {
    pub fn shifted_coefficients(&self) -> &BTreeMap<u64, i64> {
        &self.shifted
    }

    /// The Dold coefficients of the realized sequence (`a_1` restored).
    pub fn sequence_coefficients(&self) -> BTreeMap<u64, i64> {
        let mut c = self.shifted.clone();
        *c.entry(1).or_insert(0) += 1;
        c.retain(|_, a| *a != 0);
        c
    }

    pub fn disk_families(&self) -> &[Family] {
        &self.disk_families
    }

    pub fn annulus_families(&self) -> &[Family] {
        &self.annulus_families
    }

    pub fn geometry(&self) -> &[Placement] {
        &self.geometry
    }

    pub fn is_empty(&self) -> bool {
        self.shifted.is_empty()
    }

    pub fn family_count(&self) -> usize {
        self.disk_families
            .iter()
            .chain(&self.annulus_families)
            .map(|f| f.count as usize)
            .fold(0, usize::saturating_add)
    }

    /// Total number of closed disks, `sum_{a_k < 0} (-a_k) k`.
    pub fn disk_count(&self) -> u64 {
        self.disk_families.iter().map(|f| f.count * f.k).sum()
    }

    /// Total number of annuli, `sum_{a_k > 0} a_k`.
    pub fn annulus_count(&self) -> u64 {
        self.annulus_families.iter().map(|f| f.count).sum()
    }

    /// Least common multiple of all family periods.
    pub fn period_lcm(&self) -> u64 {
        self.shifted.keys().fold(1, |acc, k| acc.lcm(k))
    }

    /// Replaces the geometry after checking that it matches the families.
    pub fn with_geometry(mut self, geometry: Vec<Placement>) -> Result<Self, RealizationError> {
        if self.family_count() > MAX_FAMILIES {
            return Err(RealizationError::TooManyFamilies(self.family_count()));
        }
        let expected = instances(&self.disk_families, &self.annulus_families);
        let found: Vec<(FamilyKind, u64)> = geometry.iter().map(|p| (p.kind, p.k)).collect();
        if expected != found {
            return Err(RealizationError::InconsistentPlan(
                "geometry does not list one placement per family, disks first".into(),
            ));
        }
        if let Some(p) = geometry.iter().find(|p| p.phases.len() as u64 != p.k) {
            return Err(RealizationError::InconsistentPlan(format!(
                "placement with k = {} has {} phases",
                p.k,
                p.phases.len()
            )));
        }
        self.geometry = geometry;
        Ok(self)
    }
}

/// `Λ((g|X_0)^n)`: each disk family adds `k` and each annulus family `-k`
/// whenever `k | n`.
pub fn block_lefschetz(plan: &RealizationPlan, n: u64) -> i64 {
    let part = |fs: &[Family]| -> i64 {
        fs.iter()
            .filter(|f| n.is_multiple_of(f.k))
            .map(|f| (f.count * f.k) as i64)
            .sum()
    };
    part(&plan.disk_families) - part(&plan.annulus_families)
}

/// `i(f^n, 0) = 1 - Λ((g|X_0)^n)`.
pub fn index_sequence(plan: &RealizationPlan, n: u64) -> i64 {
    1 - block_lefschetz(plan, n)
}

/// `Λ((g^{-1}|Y_0)^n)` for the closure `Y_0` of the complement of `X_0`,
/// component by component.
///
/// The outer component is the sphere with one hole per disk and one per
/// annulus (bounded by its outer circle); with `h` holes of which `p` are
/// fixed by `g^n` its Lefschetz number is `1 - (p - 1) = 2 - p`. Each annulus
/// also encloses an invariant central disk (`Λ = 1`) and `k` permuted holes
/// (`Λ = k` when `k | n`).
pub fn complement_lefschetz(plan: &RealizationPlan, n: u64) -> i64 {
    let divides = |k: u64| n.is_multiple_of(k);
    let fixed_disks: i64 = plan
        .disk_families
        .iter()
        .filter(|f| divides(f.k))
        .map(|f| (f.count * f.k) as i64)
        .sum();
    let annuli = plan.annulus_count() as i64;
    let outer = 2 - (fixed_disks + annuli);
    let inner: i64 = plan
        .annulus_families
        .iter()
        .map(|f| f.count as i64 * (1 + if divides(f.k) { f.k as i64 } else { 0 }))
        .sum();
    outer + inner
}

/// Index of `f^{-n}` at the origin, `1 - Λ((g^{-1}|Y_0)^n)`: the inverse
/// swaps the roles of `X_0` and its complement.
pub fn inverse_index_sequence(plan: &RealizationPlan, n: u64) -> i64 {
    1 - complement_lefschetz(plan, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripRow {
    pub n: u64,
    pub expected: i64,
    pub realized: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub holds: bool,
    pub horizon: u64,
    pub rows: Vec<RoundtripRow>,
}

fn roundtrip_table(plan: &RealizationPlan, horizon: u64, mut expected: impl FnMut(u64) -> i64) -> RoundtripReport {
    let rows: Vec<RoundtripRow> = (1..=horizon)
        .map(|n| RoundtripRow {
            n,
            expected: expected(n),
            realized: index_sequence(plan, n),
        })
        .collect();
    RoundtripReport {
        holds: rows.iter().all(|r| r.expected == r.realized),
        horizon,
        rows,
    }
}

/// Plans `seq` and compares the realized indices with the sequence over two
/// common periods of the sequence and all families.
pub fn verify_roundtrip(seq: &PeriodicSequence) -> Result<(RealizationPlan, RoundtripReport), RealizationError> {
    let plan = plan_realization(seq)?;
    let horizon = 2 * plan.period_lcm().lcm(&(seq.period() as u64));
    let report = roundtrip_table(&plan, horizon, |n| seq.at(n));
    Ok((plan, report))
}

/// Compares a plan with the sequence `sigma^1 + sum shifted_k sigma^k`,
/// evaluated independently through [`DoldDecomposition`].
pub fn verify_plan(plan: &RealizationPlan) -> Result<RoundtripReport, RealizationError> {
    let dec = DoldDecomposition::from_integers(plan.sequence_coefficients())?;
    let horizon = 2 * plan.period_lcm();
    let mut err = None;
    let report = roundtrip_table(plan, horizon, |n| {
        dec.evaluate_integer(n).unwrap_or_else(|e| {
            err = Some(e);
            i64::MIN
        })
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(report),
    }
}

// JSON

#[derive(Serialize, Deserialize)]
struct PlanJson {
    coefficients: BTreeMap<u64, serde_json::Value>,
    #[serde(default)]
    disk_families: Option<Vec<Family>>,
    #[serde(default)]
    annulus_families: Option<Vec<Family>>,
    #[serde(default)]
    geometry: Option<Vec<Placement>>,
}

impl Serialize for RealizationPlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PlanJson {
            coefficients: self
                .shifted
                .iter()
                .map(|(&k, &a)| (k, serde_json::Value::from(a)))
                .collect(),
            disk_families: Some(self.disk_families.clone()),
            annulus_families: Some(self.annulus_families.clone()),
            geometry: Some(self.geometry.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealizationPlan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PlanJson::deserialize(d)?;
        let mut shifted = BTreeMap::new();
        for (k, v) in raw.coefficients {
            let a = match &v {
                serde_json::Value::Number(n) => n.as_i64(),
                serde_json::Value::String(s) => crate::sequence::parse_rational(s)
                    .ok()
                    .filter(|r| r.is_integer())
                    .and_then(|r| num_traits::ToPrimitive::to_i64(&r.to_integer())),
                _ => None,
            }
            .ok_or_else(|| D::Error::custom(format!("coefficient {k}: {v} is not an integer")))?;
            shifted.insert(k, a);
        }
        let mut plan = plan_from_shifted(&shifted).map_err(D::Error::custom)?;
        if raw.disk_families.is_some_and(|f| f != plan.disk_families)
            || raw.annulus_families.is_some_and(|f| f != plan.annulus_families)
        {
            return Err(D::Error::custom("families do not match the coefficients"));
        }
        if let Some(g) = raw.geometry {
            plan = plan.with_geometry(g).map_err(D::Error::custom)?;
        }
        Ok(plan)
    }
}

// Evaluable model

/// Monotone piecewise-linear self-map of an interval, the identity outside
/// its first and last knots.
#[derive(Debug, Clone)]
struct Pl {
    knots: Vec<(f64, f64)>,
}

impl Pl {
    fn eval(&self, x: f64) -> f64 {
        let (first, last) = (self.knots[0], self.knots[self.knots.len() - 1]);
        if x <= first.0 || x >= last.0 {
            return x;
        }
        let i = self.knots.partition_point(|k| k.0 <= x);
        let (x0, y0) = self.knots[i - 1];
        let (x1, y1) = self.knots[i];
        y0 + (x - x0) * (y1 - y0) / (x1 - x0)
    }

    fn inverse(&self) -> Pl {
        Pl {
            knots: self.knots.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }
}

#[derive(Debug, Clone)]
struct FamilyModel {
    kind: FamilyKind,
    center: Vec3,
    radius: f64,
    twist: f64,
    centres: Vec<Vec3>,
    disk_radius: f64,
    /// `s -> s/2` on the disk, back to the identity at twice its radius.
    contract: Pl,
    expand: Pl,
    push: Pl,
    push_inv: Pl,
}

impl FamilyModel {
    fn new(p: &Placement) -> Self {
        let r = p.disk_radius;
        let contract = Pl {
            knots: vec![(0.0, 0.0), (r, r / 2.0), (2.0 * r, 2.0 * r)],
        };
        let (a, b, w) = (INNER * p.radius, OUTER * p.radius, STRIP * p.radius);
        let push = Pl {
            knots: vec![
                (a - w, a - w),
                (a, a + w / 2.0),
                (a + w, a + w),
                (b - w, b - w),
                (b, b - w / 2.0),
                (b + w, b + w),
            ],
        };
        Self {
            kind: p.kind,
            center: p.center,
            radius: p.radius,
            twist: if p.k == 1 { 0.0 } else { 2.0 * PI / p.k as f64 },
            centres: p.disk_centres(),
            disk_radius: r,
            expand: contract.inverse(),
            contract,
            push_inv: push.inverse(),
            push,
        }
    }

    fn contains(&self, x: Vec3) -> bool {
        angle(self.center, x) < self.radius
    }

    fn twist_by(&self, x: Vec3, sign: f64) -> Vec3 {
        if self.twist == 0.0 {
            return x;
        }
        let r = angle(self.center, x);
        let fade = ((self.radius - r) / ((1.0 - RIGID) * self.radius)).clamp(0.0, 1.0);
        rotate(self.center, x, sign * self.twist * fade)
    }

    fn radial(&self, x: Vec3, pl: &Pl) -> Vec3 {
        for &q in &self.centres {
            let s = angle(q, x);
            if s < 2.0 * self.disk_radius {
                return along_geodesic(q, x, pl.eval(s));
            }
        }
        x
    }

    fn pushed(&self, x: Vec3, pl: &Pl) -> Vec3 {
        let r = angle(self.center, x);
        let r2 = pl.eval(r);
        if r2 == r {
            x
        } else {
            along_geodesic(self.center, x, r2)
        }
    }

    fn forward(&self, x: Vec3) -> Vec3 {
        match self.kind {
            FamilyKind::Disk => self.twist_by(self.radial(x, &self.contract), 1.0),
            FamilyKind::Annulus => {
                let y = self.radial(self.twist_by(x, 1.0), &self.expand);
                self.pushed(y, &self.push)
            }
        }
    }

    fn backward(&self, x: Vec3) -> Vec3 {
        match self.kind {
            FamilyKind::Disk => self.radial(self.twist_by(x, -1.0), &self.expand),
            FamilyKind::Annulus => {
                let y = self.radial(self.pushed(x, &self.push_inv), &self.contract);
                self.twist_by(y, -1.0)
            }
        }
    }

    /// Signed distance to the boundary of this family's part of `X_0`,
    /// positive inside.
    fn signed_distance(&self, x: Vec3) -> f64 {
        let to_disks = self
            .centres
            .iter()
            .map(|&q| self.disk_radius - angle(q, x))
            .fold(f64::NEG_INFINITY, f64::max);
        match self.kind {
            FamilyKind::Disk => to_disks,
            FamilyKind::Annulus => {
                let r = angle(self.center, x);
                let band = (r - INNER * self.radius).min(OUTER * self.radius - r);
                band.min(-to_disks)
            }
        }
    }
}

/// Diagnostics gathered while checking the evaluable model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub samples: usize,
    /// Samples with `phi(x) >= -margin`, where property (P) was checked.
    pub checked: usize,
    /// Smallest `phi(g(x))` over the checked samples (1 if none).
    pub min_image_phi: f64,
    /// Largest `|g^{-1}(g(x)) - x|` over all samples.
    pub max_inverse_error: f64,
    pub inclusion_checks: usize,
}

/// The evaluable radial homeomorphism of a plan.
#[derive(Debug, Clone)]
pub struct SkewProduct {
    plan: RealizationPlan,
    phi_margin: f64,
    kappa: f64,
    families: Vec<FamilyModel>,
    report: PropertyReport,
}

pub fn build_skew_product(plan: &RealizationPlan) -> Result<SkewProduct, RealizationError> {
    build_skew_product_with(plan, DEFAULT_PHI_MARGIN, DEFAULT_SEED)
}

/// Builds the model, checks the placements and verifies property (P) with
/// margin `phi_margin` on a Fibonacci grid, on circles around every
/// boundary of `X_0` and on `seed`-determined random points in each cap.
pub fn build_skew_product_with(
    plan: &RealizationPlan,
    phi_margin: f64,
    seed: u64,
) -> Result<SkewProduct, RealizationError> {
    let m = plan.family_count();
    if m > MAX_FAMILIES {
        return Err(RealizationError::TooManyFamilies(m));
    }
    if let Some(f) = plan.annulus_families.iter().find(|f| f.k > MAX_ANNULUS_K) {
        return Err(RealizationError::UnsupportedAnnulus { k: f.k });
    }
    validate_geometry(&plan.geometry)?;
    let families: Vec<FamilyModel> = plan.geometry.iter().map(FamilyModel::new).collect();
    let r_min = families
        .iter()
        .map(|f| f.disk_radius)
        .fold(f64::INFINITY, f64::min);
    let mut model = SkewProduct {
        plan: plan.clone(),
        phi_margin,
        kappa: if r_min.is_finite() { 1.0 / r_min } else { 1.0 },
        families,
        report: PropertyReport {
            samples: 0,
            checked: 0,
            min_image_phi: 1.0,
            max_inverse_error: 0.0,
            inclusion_checks: 0,
        },
    };
    model.report = model.check(seed)?;
    Ok(model)
}

fn validate_geometry(geometry: &[Placement]) -> Result<(), RealizationError> {
    let overlap = |msg: String| Err(RealizationError::GeometryOverlap(msg));
    for (i, p) in geometry.iter().enumerate() {
        if !(p.radius > 0.0 && p.radius <= PI / 2.0) || p.disk_radius <= 0.0 {
            return overlap(format!("family {i} has radius {} and disk radius {}", p.radius, p.disk_radius));
        }
        if (crate::sphere::norm(p.center) - 1.0).abs() > 1e-9 {
            return overlap(format!("family {i} has a centre off the unit sphere"));
        }
        let r = p.radius;
        let (lo, hi) = match p.kind {
            FamilyKind::Disk => (0.0, RIGID * r),
            FamilyKind::Annulus => ((INNER + STRIP) * r, (OUTER - STRIP) * r),
        };
        let reach = 2.0 * p.disk_radius;
        let centred = p.kind == FamilyKind::Disk && p.k == 1;
        if (!centred && p.ring_radius - reach < lo) || p.ring_radius + reach > hi {
            return overlap(format!("family {i}: disks leave their zone"));
        }
        let centres = p.disk_centres();
        for a in 0..centres.len() {
            for b in a + 1..centres.len() {
                if angle(centres[a], centres[b]) <= 2.0 * reach {
                    return overlap(format!("family {i}: disks {a} and {b} are too close"));
                }
            }
        }
        for (j, q) in geometry.iter().enumerate().skip(i + 1) {
            if angle(p.center, q.center) <= p.radius + q.radius {
                return overlap(format!("families {i} and {j} intersect"));
            }
        }
    }
    Ok(())
}

impl SkewProduct {
    pub fn plan(&self) -> &RealizationPlan {
        &self.plan
    }

    pub fn phi_margin(&self) -> f64 {
        self.phi_margin
    }

    pub fn report(&self) -> &PropertyReport {
        &self.report
    }

    /// Smallest disk radius, the finest feature a mesh has to resolve.
    pub fn min_feature(&self) -> Option<f64> {
        self.families
            .iter()
            .map(|f| f.disk_radius)
            .reduce(f64::min)
    }

    pub fn description(&self) -> String {
        let mut parts = Vec::new();
        for (i, (f, p)) in self.families.iter().zip(&self.plan.geometry).enumerate() {
            parts.push(match f.kind {
                FamilyKind::Disk => format!(
                    "family {i}: rotate by 2pi/{} after contracting {} disk(s) of radius {:.4} toward their centres",
                    p.k, p.k, p.disk_radius
                ),
                FamilyKind::Annulus => format!(
                    "family {i}: annulus [{:.4}, {:.4}] with {} hole(s) of radius {:.4}; rotate by 2pi/{}, expand the holes, push the annulus edges inward",
                    INNER * p.radius, OUTER * p.radius, p.k, p.disk_radius, p.k
                ),
            });
        }
        if parts.is_empty() {
            "g = identity, phi = -1".into()
        } else {
            parts.join("; ")
        }
    }

    fn family_of(&self, x: Vec3) -> Option<&FamilyModel> {
        self.families.iter().find(|f| f.contains(x))
    }

    /// The sphere map `g`.
    pub fn g(&self, x: Vec3) -> Vec3 {
        match self.family_of(x) {
            Some(f) => normalize(f.forward(x)),
            None => x,
        }
    }

    pub fn g_inverse(&self, x: Vec3) -> Vec3 {
        match self.family_of(x) {
            Some(f) => normalize(f.backward(x)),
            None => x,
        }
    }

    /// Signed distance to the boundary of `X_0`, positive inside.
    pub fn signed_distance(&self, x: Vec3) -> f64 {
        self.families
            .iter()
            .map(|f| f.signed_distance(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `phi = clamp(kappa * signed distance, -1, 1)` with `kappa` the inverse
    /// of the smallest disk radius.
    pub fn phi(&self, x: Vec3) -> f64 {
        // Outside its own cap every family has kappa * distance <= -1, so
        // only the family containing x can matter.
        match self.family_of(x) {
            Some(f) => (self.kappa * f.signed_distance(x)).clamp(-1.0, 1.0),
            None => -1.0,
        }
    }

    /// `v -> e^{phi(v/|v|)} |v| g(v/|v|)`.
    pub fn apply(&self, v: Vec3) -> Vec3 {
        let r = crate::sphere::norm(v);
        if r == 0.0 {
            return v;
        }
        let u = scale(1.0 / r, v);
        scale(self.phi(u).exp() * r, self.g(u))
    }

    pub fn apply_inverse(&self, w: Vec3) -> Vec3 {
        let r = crate::sphere::norm(w);
        if r == 0.0 {
            return w;
        }
        let u = self.g_inverse(scale(1.0 / r, w));
        scale(r * (-self.phi(u)).exp(), u)
    }

    fn samples(&self, seed: u64) -> Vec<Vec3> {
        let mut pts = fibonacci_points(20_000);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for f in &self.families {
            let e1 = orthogonal(f.center);
            let e2 = cross(f.center, e1);
            let at = |c: Vec3, s: f64, t: f64| {
                let (a1, a2) = if c == f.center {
                    (e1, e2)
                } else {
                    let u = orthogonal(c);
                    (u, cross(c, u))
                };
                let dir = add(scale(t.cos(), a1), scale(t.sin(), a2));
                normalize(add(scale(s.cos(), c), scale(s.sin(), dir)))
            };
            // circles hugging every boundary component of X_0
            let mut circles: Vec<(Vec3, f64)> = f.centres.iter().map(|&q| (q, f.disk_radius)).collect();
            if f.kind == FamilyKind::Annulus {
                circles.push((f.center, INNER * f.radius));
                circles.push((f.center, OUTER * f.radius));
            }
            for (c, s0) in circles {
                for off in [-0.08, -0.05, -0.02, -0.005, 0.0, 0.005, 0.02, 0.05, 0.08] {
                    for j in 0..96 {
                        pts.push(at(c, s0 + off * f.disk_radius, 2.0 * PI * j as f64 / 96.0));
                    }
                }
            }
            for _ in 0..4000 {
                // uniform in the cap
                let cos_s = 1.0 - rng.gen::<f64>() * (1.0 - f.radius.cos());
                pts.push(at(f.center, cos_s.clamp(-1.0, 1.0).acos(), rng.gen::<f64>() * 2.0 * PI));
            }
        }
        pts
    }

    fn check(&self, seed: u64) -> Result<PropertyReport, RealizationError> {
        let pts = self.samples(seed);
        let mut report = PropertyReport {
            samples: pts.len(),
            checked: 0,
            min_image_phi: 1.0,
            max_inverse_error: 0.0,
            inclusion_checks: 0,
        };
        for &x in &pts {
            let gx = self.g(x);
            let back = self.g_inverse(gx);
            report.max_inverse_error =
                report.max_inverse_error.max(crate::sphere::norm(crate::sphere::sub(back, x)));
            let phi = self.phi(x);
            if phi >= -self.phi_margin {
                report.checked += 1;
                let phi_image = self.phi(gx);
                report.min_image_phi = report.min_image_phi.min(phi_image);
                if phi_image < self.phi_margin {
                    return Err(RealizationError::PropertyPViolation {
                        point: x,
                        phi,
                        phi_image,
                    });
                }
            }
        }
        // g(D_j) strictly inside D_{j+1} for disks; g^{-1} likewise for holes
        for (fi, f) in self.families.iter().enumerate() {
            let k = f.centres.len();
            for j in 0..k {
                let (from, to, map): (Vec3, Vec3, &dyn Fn(Vec3) -> Vec3) = match f.kind {
                    FamilyKind::Disk => (f.centres[j], f.centres[(j + 1) % k], &|x| self.g(x)),
                    FamilyKind::Annulus => (f.centres[(j + 1) % k], f.centres[j], &|x| self.g_inverse(x)),
                };
                let u = orthogonal(from);
                let v = cross(from, u);
                for t in 0..64 {
                    let th = 2.0 * PI * t as f64 / 64.0;
                    let dir = add(scale(th.cos(), u), scale(th.sin(), v));
                    let (s, c) = f.disk_radius.sin_cos();
                    let x = normalize(add(scale(c, from), scale(s, dir)));
                    report.inclusion_checks += 1;
                    if angle(map(x), to) >= f.disk_radius {
                        return Err(RealizationError::InclusionViolation { family: fi, disk: j });
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{lefschetz_number, models, ChainMap, SimplicialPair};
    use num_bigint::BigInt;

    fn shifted(pairs: &[(u64, i64)]) -> RealizationPlan {
        plan_from_shifted(&pairs.iter().copied().collect()).unwrap()
    }

    #[test]
    fn small_sequence_examples() {
        let plan = plan_realization(&PeriodicSequence::constant(1)).unwrap();
        assert!(plan.is_empty());
        assert!((1..10).all(|n| index_sequence(&plan, n) == 1));

        let plan = plan_realization(&PeriodicSequence::constant(-1)).unwrap();
        assert_eq!(plan.disk_families(), &[Family { k: 1, count: 2 }]);
        assert!((1..10).all(|n| index_sequence(&plan, n) == -1));

        let plan = plan_realization(&PeriodicSequence::new(vec![1, -1]).unwrap()).unwrap();
        assert_eq!(plan.shifted_coefficients(), &BTreeMap::from([(2, -1)]));
        assert_eq!(plan.disk_families(), &[Family { k: 2, count: 1 }]);
        assert_eq!(
            (1..=4).map(|n| index_sequence(&plan, n)).collect::<Vec<_>>(),
            vec![1, -1, 1, -1]
        );
    }

    #[test]
    fn rejects_non_dold() {
        let err = plan_realization(&PeriodicSequence::new(vec![0, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, RealizationError::Sequence(SequenceError::NotDold { k: 2, .. })));
    }

    #[test]
    fn block_examples() {
        assert!((1..10).all(|n| block_lefschetz(&shifted(&[]), n) == 0));
        let d2 = shifted(&[(2, -1)]);
        assert_eq!(block_lefschetz(&d2, 1), 0);
        assert_eq!(block_lefschetz(&d2, 2), 2);
        let a3 = shifted(&[(3, 1)]);
        assert_eq!(block_lefschetz(&a3, 3), -3);
        assert_eq!(block_lefschetz(&a3, 2), 0);
    }

    #[test]
    fn mixed_plan_from_decomposition() {
        let dec = DoldDecomposition::from_integers([(2, -1), (3, 2)]).unwrap();
        let plan = plan_from_decomposition(&dec).unwrap();
        assert_eq!(plan.disk_families(), &[Family { k: 2, count: 1 }]);
        assert_eq!(plan.annulus_families(), &[Family { k: 3, count: 2 }]);
        assert_eq!(plan.disk_count(), 2);
        assert_eq!(plan.annulus_count(), 2);
        let report = verify_plan(&plan).unwrap();
        assert!(report.holds);
        assert_eq!(report.horizon, 12);
        // sigma^1 - sigma^2 + 2 sigma^3
        let expected = [1, -1, 7, -1, 1, 5];
        for (row, e) in report.rows.iter().zip(expected) {
            assert_eq!(row.realized, e);
        }
    }

    #[test]
    fn inverse_antisymmetry() {
        let plan = shifted(&[(1, -3), (2, 2), (3, -1), (4, 1), (6, 5)]);
        for n in 1..=24 {
            assert_eq!(index_sequence(&plan, n) + inverse_index_sequence(&plan, n), 0, "n = {n}");
        }
    }

    #[test]
    fn disk_family_lefschetz_from_homology() {
        // k disjoint disks permuted cyclically: Λ = k when k | n
        for k in 1..=5u32 {
            let pair = SimplicialPair::absolute(models::disjoint_disks(k));
            let map = (0..3 * k).map(|v| (v, (v + 3) % (3 * k))).collect();
            let f = ChainMap::from_simplicial_map(&pair, &map).unwrap();
            let plan = shifted(&[(k as u64, -1)]);
            for n in 1..=12u64 {
                assert_eq!(lefschetz_number(&f, n), BigInt::from(block_lefschetz(&plan, n)));
            }
        }
    }

    #[test]
    fn annulus_family_lefschetz_from_homology() {
        // the invariant set is a wedge of k + 1 circles: circle 0 stays put,
        // circles 1..=k are permuted cyclically
        for k in 1..=5u32 {
            let pair = SimplicialPair::absolute(models::wedge_of_circles(k + 1));
            let target = |j: u32| if j == 0 { 0 } else { j % k + 1 };
            let mut map = BTreeMap::from([(0, 0)]);
            for j in 0..=k {
                map.insert(2 * j + 1, 2 * target(j) + 1);
                map.insert(2 * j + 2, 2 * target(j) + 2);
            }
            let f = ChainMap::from_simplicial_map(&pair, &map).unwrap();
            let plan = shifted(&[(k as u64, 1)]);
            for n in 1..=12u64 {
                assert_eq!(lefschetz_number(&f, n), BigInt::from(block_lefschetz(&plan, n)));
            }
        }
    }

    #[test]
    fn geometry_is_disjoint_and_deterministic() {
        let plan = shifted(&[(1, -2), (2, -1), (3, 2), (6, 1)]);
        assert_eq!(plan.geometry().len(), 6);
        validate_geometry(plan.geometry()).unwrap();
        assert_eq!(plan, shifted(&[(1, -2), (2, -1), (3, 2), (6, 1)]));
        let too_many = shifted(&[(1, -37)]);
        assert_eq!(
            build_skew_product(&too_many).unwrap_err(),
            RealizationError::TooManyFamilies(37)
        );
        let unsupported = shifted(&[(7, 1)]);
        assert_eq!(
            build_skew_product(&unsupported).unwrap_err(),
            RealizationError::UnsupportedAnnulus { k: 7 }
        );
    }

    #[test]
    fn overlapping_geometry_is_rejected() {
        let plan = shifted(&[(1, -2)]);
        let mut g = plan.geometry().to_vec();
        g[1].center = g[0].center;
        let plan = plan.with_geometry(g).unwrap();
        assert!(matches!(
            build_skew_product(&plan),
            Err(RealizationError::GeometryOverlap(_))
        ));
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = shifted(&[(2, -1), (3, 2)]);
        let json = serde_json::to_string(&plan).unwrap();
        assert!(json.starts_with(r#"{"coefficients":{"2":-1,"3":2},"disk_families":[{"k":2,"count":1}]"#));
        let back: RealizationPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, plan);
        let minimal: RealizationPlan = serde_json::from_str(r#"{"coefficients":{"2":"-1","3":2}}"#).unwrap();
        assert_eq!(minimal, plan);
        assert!(serde_json::from_str::<RealizationPlan>(
            r#"{"coefficients":{"2":-1},"disk_families":[{"k":2,"count":2}]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<RealizationPlan>(r#"{"coefficients":{"2":"1/2"}}"#).is_err());
    }

    #[test]
    fn empty_plan_is_a_contraction() {
        let model = build_skew_product(&shifted(&[])).unwrap();
        let v = [0.3, -0.2, 0.5];
        let w = model.apply(v);
        let c = (-1f64).exp();
        for i in 0..3 {
            assert!((w[i] - c * v[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn models_satisfy_property_p() {
        let plans = [
            shifted(&[(1, -1)]),
            shifted(&[(1, -2)]),
            shifted(&[(2, -1)]),
            shifted(&[(5, -1)]),
            shifted(&[(1, 1)]),
            shifted(&[(3, 1)]),
            shifted(&[(6, 1)]),
            shifted(&[(2, -1), (3, 2)]),
            shifted(&[(1, -3), (2, -2), (4, 1), (6, 2), (12, -1)]),
        ];
        for plan in &plans {
            let model = build_skew_product(plan).unwrap_or_else(|e| panic!("{plan:?}: {e}"));
            let r = model.report();
            assert!(r.checked > 0 || plan.is_empty());
            assert!(r.min_image_phi >= DEFAULT_PHI_MARGIN);
            assert!(r.max_inverse_error < 1e-9, "{}", r.max_inverse_error);
        }
    }

    #[test]
    fn radial_map_inverse_round_trips() {
        let model = build_skew_product(&shifted(&[(2, -1), (3, 1)])).unwrap();
        for p in fibonacci_points(300) {
            let v = scale(0.01, p);
            let back = model.apply_inverse(model.apply(v));
            assert!(crate::sphere::norm(crate::sphere::sub(back, v)) < 1e-12);
        }
    }

    #[test]
    fn local_phi_matches_global_distance() {
        let model = build_skew_product(&shifted(&[(1, -2), (2, -1), (3, 1), (6, 1)])).unwrap();
        for x in fibonacci_points(5000) {
            let global = (model.kappa * model.signed_distance(x)).clamp(-1.0, 1.0);
            assert_eq!(model.phi(x), global);
        }
    }

    #[test]
    fn periodic_disk_centres() {
        let model = build_skew_product(&shifted(&[(3, -1)])).unwrap();
        let centres = model.plan().geometry()[0].disk_centres();
        for j in 0..3 {
            let image = model.g(centres[j]);
            assert!(angle(image, centres[(j + 1) % 3]) < 1e-12);
            assert!(model.phi(centres[j]) > 0.99);
        }
    }

    #[test]
    fn pl_inverse() {
        let p = Pl {
            knots: vec![(1.0, 1.0), (2.0, 2.5), (3.0, 3.0)],
        };
        let q = p.inverse();
        for x in [0.5, 1.2, 1.9, 2.0, 2.7, 3.5] {
            assert!((q.eval(p.eval(x)) - x).abs() < 1e-15);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn admissible() -> impl Strategy<Value = PeriodicSequence> {
            (1usize..=12).prop_flat_map(|q| {
                let ks: Vec<u64> = crate::arith::divisors(q as u64);
                proptest::collection::vec(-5i64..=5, ks.len()).prop_map(move |a| {
                    let dec = DoldDecomposition::from_integers(ks.iter().copied().zip(a)).unwrap();
                    let values = (1..=q as u64).map(|n| dec.evaluate_integer(n).unwrap()).collect();
                    PeriodicSequence::new(values).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn roundtrip_holds(seq in admissible()) {
                let (plan, report) = verify_roundtrip(&seq).unwrap();
                prop_assert!(report.holds);
                prop_assert_eq!(report.horizon % (2 * seq.period() as u64), 0);
                let disks: u64 = plan.shifted_coefficients().iter().filter(|(_, &a)| a < 0).map(|(&k, &a)| k * a.unsigned_abs()).sum();
                prop_assert_eq!(plan.disk_count(), disks);
            }

            #[test]
            fn antisymmetry(seq in admissible()) {
                let plan = plan_realization(&seq).unwrap();
                for n in 1..=24 {
                    prop_assert_eq!(index_sequence(&plan, n) + inverse_index_sequence(&plan, n), 0);
                }
            }
        }
    }
}
