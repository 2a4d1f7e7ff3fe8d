//! Exact operators on a countable basis: signed partial basis injections
//! built from affine cells, diagonal projections built from regions, and the
//! sign involution. Commutator ranks and compressed Fredholm indices are
//! computed by finite, certificate-bounded enumeration of defect points.
//!
//! Every operator here maps basis vectors to basis vectors (or to zero), so
//! ranks and indices reduce to counting lattice points in explicitly
//! described sets. A `DefectCertificate` asserts that all such points lie in
//! a coordinate ball; a guard shell beyond the claimed radius is scanned and
//! must come back empty, which turns a wrong certificate into a hard error
//! rather than a wrong answer.

use std::collections::BTreeSet;

use super::space::{merge_residues, BasisPoint, BasisSpace, CoordConstraint, Region};
use super::ModelError;
use crate::linalg::{smith, IntMatrix};

/// The claim that every defect point of an operator (sign-commutator defects
/// and projection-crossing defects, for the operator and its inverse) has
/// all coordinates within `radius`. The shell of `guard_width` beyond the
/// radius is scanned by every computation and must contain no defects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefectCertificate {
    pub radius: i64,
    pub guard_width: i64,
}

pub const DEFAULT_GUARD_WIDTH: i64 = 8;

impl DefectCertificate {
    pub fn new(radius: i64) -> Self {
        DefectCertificate {
            radius: radius.max(1),
            guard_width: DEFAULT_GUARD_WIDTH,
        }
    }

    pub fn scan_bound(&self) -> i64 {
        self.radius + self.guard_width
    }
}

/// `x -> mul*x + add` with `mul >= 1`; injective, and exactly invertible on
/// its image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine1 {
    pub mul: i64,
    pub add: i64,
}

impl Affine1 {
    pub fn identity() -> Self {
        Affine1 { mul: 1, add: 0 }
    }

    pub fn shift(add: i64) -> Self {
        Affine1 { mul: 1, add }
    }

    pub fn scale_shift(mul: i64, add: i64) -> Self {
        assert!(mul >= 1, "coordinate maps must be orientation-preserving");
        Affine1 { mul, add }
    }

    pub fn is_identity(&self) -> bool {
        self.mul == 1 && self.add == 0
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.mul * x + self.add
    }

    pub fn invert(&self, y: i64) -> Option<i64> {
        let num = y - self.add;
        (num.rem_euclid(self.mul) == 0).then(|| num.div_euclid(self.mul))
    }

    /// `outer(inner(x))`.
    pub fn compose(outer: &Affine1, inner: &Affine1) -> Affine1 {
        Affine1 {
            mul: outer.mul * inner.mul,
            add: outer.mul * inner.add + outer.add,
        }
    }

    /// The threshold `t` with `apply(x) >= 0` iff `x >= t`.
    pub fn nonneg_threshold(&self) -> i64 {
        // ceil(-add / mul) for positive mul.
        (-self.add + self.mul - 1).div_euclid(self.mul)
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a.rem_euclid(m));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    (r == 1).then(|| t.rem_euclid(m))
}

/// Preimage of a coordinate constraint under an affine map; `None` when the
/// preimage is provably empty.
fn pullback_constraint(c: &CoordConstraint, f: &Affine1) -> Option<CoordConstraint> {
    let lo = c.lo.map(|lo| div_ceil(lo - f.add, f.mul));
    let hi = c.hi.map(|hi| (hi - f.add).div_euclid(f.mul));
    let residue = match c.residue {
        // The preimage of "no constraint" is everything, whatever the scale.
        None => None,
        Some((m, r)) => {
            // Solve mul*x + add = r (mod m).
            let g = gcd(f.mul, m);
            let rc = (r - f.add).rem_euclid(m);
            if rc % g != 0 {
                return None;
            }
            let m2 = m / g;
            if m2 == 1 {
                None
            } else {
                let inv = mod_inverse(f.mul / g, m2).expect("coprime after dividing by gcd");
                Some((m2, ((rc / g) % m2 * inv).rem_euclid(m2)))
            }
        }
    };
    let out = CoordConstraint { lo, hi, residue };
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// Forward image of a coordinate constraint under an affine map; exact.
fn image_constraint(c: &CoordConstraint, f: &Affine1) -> CoordConstraint {
    let lo = c.lo.map(|lo| f.apply(lo));
    let hi = c.hi.map(|hi| f.apply(hi));
    let residue = match c.residue {
        Some((m, r)) => {
            let modulus = f.mul * m;
            Some((modulus, f.apply(r).rem_euclid(modulus)))
        }
        None if f.mul > 1 => Some((f.mul, f.add.rem_euclid(f.mul))),
        None => None,
    };
    CoordConstraint { lo, hi, residue }
}

/// One affine cell of a partial injection: points of `dom` map to the
/// column `cod_tag` by coordinatewise affine maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub dom: Region,
    pub cod_tag: Option<String>,
    pub action: Vec<Affine1>,
}

impl Cell {
    pub fn apply(&self, b: &BasisPoint) -> Option<BasisPoint> {
        if !self.dom.contains(b) {
            return None;
        }
        Some(BasisPoint {
            tag: self.cod_tag.clone(),
            coords: b
                .coords
                .iter()
                .zip(&self.action)
                .map(|(&x, f)| f.apply(x))
                .collect(),
        })
    }

    pub fn invert(&self, y: &BasisPoint) -> Option<BasisPoint> {
        if y.tag != self.cod_tag || y.coords.len() != self.action.len() {
            return None;
        }
        let coords: Option<Vec<i64>> = y
            .coords
            .iter()
            .zip(&self.action)
            .map(|(&v, f)| f.invert(v))
            .collect();
        let b = BasisPoint {
            tag: self.dom.tag.clone(),
            coords: coords?,
        };
        self.dom.contains(&b).then_some(b)
    }

    /// Exact image of the domain. Panics when a sum-residue constraint meets
    /// a non-unit scaling, which no supported construction produces.
    pub fn image_region(&self) -> Region {
        let coords = self
            .dom
            .coords
            .iter()
            .zip(&self.action)
            .map(|(c, f)| image_constraint(c, f))
            .collect();
        let sum_residue = match self.dom.sum_residue {
            None => None,
            Some((m, r)) => {
                assert!(
                    self.action.iter().all(|f| f.mul == 1),
                    "sum residue through a scaling cell is unsupported"
                );
                let total_shift: i64 = self.action.iter().map(|f| f.add).sum();
                Some((m, (r + total_shift).rem_euclid(m)))
            }
        };
        let excluded = self
            .dom
            .excluded
            .iter()
            .map(|coords| {
                coords
                    .iter()
                    .zip(&self.action)
                    .map(|(&x, f)| f.apply(x))
                    .collect()
            })
            .collect();
        Region {
            tag: self.cod_tag.clone(),
            coords,
            sum_residue,
            excluded,
        }
    }

    /// `outer` after `inner`, as a single affine cell. `Ok(None)` when the
    /// composite domain is empty or the tags do not meet.
    pub fn compose_after(outer: &Cell, inner: &Cell) -> Result<Option<Cell>, ModelError> {
        if inner.cod_tag != outer.dom.tag || inner.action.len() != outer.action.len() {
            return Ok(None);
        }
        let mut coords = Vec::with_capacity(inner.dom.coords.len());
        for ((inner_c, outer_c), f) in inner
            .dom
            .coords
            .iter()
            .zip(&outer.dom.coords)
            .zip(&inner.action)
        {
            let Some(pulled) = pullback_constraint(outer_c, f) else {
                return Ok(None);
            };
            match inner_c.intersect(&pulled) {
                Ok(c) => coords.push(c),
                Err(_) => return Ok(None),
            }
        }
        let pulled_sum = match outer.dom.sum_residue {
            None => None,
            Some((m, r)) => {
                if inner.action.iter().any(|f| f.mul != 1) {
                    return Err(ModelError::UnsupportedComposition {
                        what: "sum residue through a scaling cell".to_string(),
                    });
                }
                let total_shift: i64 = inner.action.iter().map(|f| f.add).sum();
                Some((m, (r - total_shift).rem_euclid(m)))
            }
        };
        let sum_residue = match merge_residues(inner.dom.sum_residue, pulled_sum) {
            Ok(r) => r,
            Err(_) => return Ok(None),
        };
        let mut excluded = inner.dom.excluded.clone();
        for pt in &outer.dom.excluded {
            if pt.len() != inner.action.len() {
                continue;
            }
            let pre: Option<Vec<i64>> = pt
                .iter()
                .zip(&inner.action)
                .map(|(&y, f)| f.invert(y))
                .collect();
            if let Some(pre) = pre {
                excluded.insert(pre);
            }
        }
        let dom = Region {
            tag: inner.dom.tag.clone(),
            coords,
            sum_residue,
            excluded,
        };
        let action = inner
            .action
            .iter()
            .zip(&outer.action)
            .map(|(i, o)| Affine1::compose(o, i))
            .collect();
        Ok(Some(Cell {
            dom,
            cod_tag: outer.cod_tag.clone(),
            action,
        }))
    }

    pub fn retag(&self, prefix: &str) -> Cell {
        Cell {
            dom: self.dom.retag(prefix),
            cod_tag: Some(format!(
                "{prefix}{}",
                self.cod_tag.clone().unwrap_or_default()
            )),
            action: self.action.clone(),
        }
    }
}

/// A partial basis injection: a finite disjoint union of affine cells,
/// together with the defect certificate for index computations against the
/// sign involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injection {
    pub cells: Vec<Cell>,
    pub certificate: DefectCertificate,
}

impl Injection {
    pub fn new(cells: Vec<Cell>, certificate: DefectCertificate) -> Self {
        Injection { cells, certificate }
    }

    pub fn empty(certificate: DefectCertificate) -> Self {
        Injection {
            cells: Vec::new(),
            certificate,
        }
    }

    /// The identity on a region.
    pub fn identity_on(region: Region, certificate: DefectCertificate) -> Self {
        let arity = region.coords.len();
        let cod_tag = region.tag.clone();
        Injection {
            cells: vec![Cell {
                dom: region,
                cod_tag,
                action: vec![Affine1::identity(); arity],
            }],
            certificate,
        }
    }

    pub fn apply(&self, b: &BasisPoint) -> Option<BasisPoint> {
        self.cells.iter().find_map(|c| c.apply(b))
    }

    pub fn invert(&self, y: &BasisPoint) -> Option<BasisPoint> {
        self.cells.iter().find_map(|c| c.invert(y))
    }

    pub fn domain_contains(&self, b: &BasisPoint) -> bool {
        self.cells.iter().any(|c| c.dom.contains(b))
    }

    pub fn image_regions(&self) -> Vec<Region> {
        self.cells.iter().map(|c| c.image_region()).collect()
    }

    pub fn domain_regions(&self) -> Vec<Region> {
        self.cells.iter().map(|c| c.dom.clone()).collect()
    }

    pub fn image_projection(&self) -> Projection {
        Projection {
            regions: self.image_regions(),
        }
    }

    pub fn domain_projection(&self) -> Projection {
        Projection {
            regions: self.domain_regions(),
        }
    }

    /// Composite `outer . inner` (apply `inner` first), cellwise.
    pub fn compose(
        outer: &Injection,
        inner: &Injection,
        certificate: DefectCertificate,
    ) -> Result<Injection, ModelError> {
        let mut cells = Vec::new();
        for ci in &inner.cells {
            for co in &outer.cells {
                if let Some(cell) = Cell::compose_after(co, ci)? {
                    cells.push(cell);
                }
            }
        }
        Ok(Injection { cells, certificate })
    }

    pub fn retag(&self, prefix: &str) -> Injection {
        Injection {
            cells: self.cells.iter().map(|c| c.retag(prefix)).collect(),
            certificate: self.certificate,
        }
    }
}

/// A diagonal projection: a disjoint union of regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub regions: Vec<Region>,
}

impl Projection {
    pub fn empty() -> Self {
        Projection {
            regions: Vec::new(),
        }
    }

    pub fn single(region: Region) -> Self {
        Projection {
            regions: vec![region],
        }
    }

    pub fn contains(&self, b: &BasisPoint) -> bool {
        self.regions.iter().any(|r| r.contains(b))
    }

    pub fn retag(&self, prefix: &str) -> Projection {
        Projection {
            regions: self.regions.iter().map(|r| r.retag(prefix)).collect(),
        }
    }

    /// Union with another projection (regions assumed disjoint).
    pub fn union(&self, other: &Projection) -> Projection {
        let mut regions = self.regions.clone();
        regions.extend(other.regions.clone());
        Projection { regions }
    }
}

/// The sign involution of an odd module. `LastCoordNonNegative` is the
/// standard half-line sign; `AlwaysPositive` is the degenerate involution 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignOp {
    LastCoordNonNegative,
    AlwaysPositive,
}

impl SignOp {
    pub fn is_positive(&self, b: &BasisPoint) -> bool {
        match self {
            SignOp::AlwaysPositive => true,
            SignOp::LastCoordNonNegative => b.last_coord().is_none_or(|x| x >= 0),
        }
    }

    /// The spectral projection onto the positive part, `(F + 1)/2`.
    pub fn positive_projection(&self, space: &BasisSpace) -> Projection {
        let regions = space
            .tags
            .iter()
            .map(|tag| {
                let mut r = Region::full(tag.clone(), &space.coord_domains);
                if matches!(self, SignOp::LastCoordNonNegative) {
                    if let Some(last) = r.coords.len().checked_sub(1) {
                        r = r.with_coord(last, CoordConstraint::at_least(0));
                    }
                }
                r
            })
            .collect();
        Projection { regions }
    }
}

/// Any of the operator shapes a module stores per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisOperator {
    Injection(Injection),
    Projection(Projection),
}

impl BasisOperator {
    pub fn apply(&self, b: &BasisPoint) -> Option<BasisPoint> {
        match self {
            BasisOperator::Injection(t) => t.apply(b),
            BasisOperator::Projection(p) => p.contains(b).then(|| b.clone()),
        }
    }

    pub fn domain_regions(&self) -> Vec<Region> {
        match self {
            BasisOperator::Injection(t) => t.domain_regions(),
            BasisOperator::Projection(p) => p.regions.clone(),
        }
    }

    pub fn certificate(&self) -> Option<DefectCertificate> {
        match self {
            BasisOperator::Injection(t) => Some(t.certificate),
            BasisOperator::Projection(_) => None,
        }
    }
}

/// Exact rank of the commutator `[F, T] = FT - TF` for a sign involution
/// `F` and a basis operator `T`. Because `T` maps basis vectors to basis
/// vectors injectively, the commutator has one independent rank-one summand
/// per domain point whose sign flips, so the rank is the number of such
/// points. Defects outside the certificate radius (but inside the guard
/// shell) are a certificate violation, reported as an error.
pub fn commutator_rank(sign: &SignOp, op: &BasisOperator, name: &str) -> Result<u64, ModelError> {
    if matches!(sign, SignOp::AlwaysPositive) {
        return Ok(0);
    }
    let t = match op {
        // A diagonal projection fixes every domain point, so signs agree.
        BasisOperator::Projection(_) => return Ok(0),
        BasisOperator::Injection(t) => t,
    };
    let cert = t.certificate;
    let mut rank = 0u64;
    for cell in &t.cells {
        let Some(last) = cell.action.last() else {
            continue; // zero-coordinate cells carry constant positive sign
        };
        let threshold = last.nonneg_threshold();
        if threshold == 0 {
            continue; // sign provably preserved on the whole cell
        }
        let (lo, hi) = (0.min(threshold), 0.max(threshold) - 1);
        for p in cell.dom.points_within(cert.scan_bound(), Some((lo, hi))) {
            if p.max_abs_coord() <= cert.radius {
                rank += 1;
            } else {
                return Err(ModelError::CertificateViolation {
                    operator: name.to_string(),
                    point: p.to_string(),
                });
            }
        }
    }
    Ok(rank)
}

/// Recognizes `p` as "everything over this region except the last
/// coordinate is cut at zero" — the shape of the positive projection of the
/// sign involution. Returns false when `p` constrains anything the carrier
/// region does not already satisfy, other than the last-coordinate cut.
fn halfspace_over(p: &Projection, carrier: &Region) -> bool {
    let Some(region) = p.regions.iter().find(|r| r.tag == carrier.tag) else {
        return false;
    };
    if p.regions.iter().filter(|r| r.tag == carrier.tag).count() != 1 {
        return false;
    }
    if region.coords.len() != carrier.coords.len()
        || region.sum_residue.is_some()
        || !region.excluded.is_empty()
    {
        return false;
    }
    let n = region.coords.len();
    if n == 0 {
        return true;
    }
    for (idx, c) in region.coords.iter().enumerate() {
        if idx == n - 1 {
            if c.lo != Some(0) || c.hi.is_some() || c.residue.is_some() {
                return false;
            }
        } else {
            // Must not constrain beyond what the carrier already imposes.
            let carrier_c = &carrier.coords[idx];
            let lo_ok = match c.lo {
                None => true,
                Some(l) => carrier_c.lo.is_some_and(|cl| cl >= l),
            };
            if !(lo_ok && c.hi.is_none() && c.residue.is_none()) {
                return false;
            }
        }
    }
    true
}

/// Checks that every region in `target` is covered by the regions in
/// `covers`, either by direct containment in one region or, when the
/// regions differ only in their last-coordinate intervals, by an exact
/// interval union argument.
fn covered_by(target: &[Region], covers: &[Region]) -> bool {
    target.iter().all(|t| {
        if covers.iter().any(|c| t.is_contained_in(c)) {
            return true;
        }
        last_interval_union_covers(t, covers)
    })
}

fn last_interval_union_covers(t: &Region, covers: &[Region]) -> bool {
    let n = t.coords.len();
    if n == 0 {
        return false;
    }
    let clean = |r: &Region| {
        r.sum_residue.is_none()
            && r.excluded.is_empty()
            && r.coords.last().is_some_and(|c| c.residue.is_none())
    };
    if !clean(t) {
        return false;
    }
    // Candidates must agree with `t` away from the last coordinate.
    let mut intervals: Vec<(i128, i128)> = Vec::new();
    for c in covers {
        if c.tag != t.tag || c.coords.len() != n || !clean(c) {
            continue;
        }
        if (0..n - 1).any(|i| c.coords[i] != t.coords[i]) {
            continue;
        }
        let last = &c.coords[n - 1];
        let lo = last.lo.map_or(i128::MIN / 4, |v| v as i128);
        let hi = last.hi.map_or(i128::MAX / 4, |v| v as i128);
        if lo <= hi {
            intervals.push((lo, hi));
        }
    }
    intervals.sort();
    let t_last = &t.coords[n - 1];
    let mut need_lo = t_last.lo.map_or(i128::MIN / 4, |v| v as i128);
    let need_hi = t_last.hi.map_or(i128::MAX / 4, |v| v as i128);
    for (lo, hi) in intervals {
        if lo > need_lo {
            return false;
        }
        if hi >= need_lo {
            need_lo = hi + 1;
            if need_lo > need_hi {
                return true;
            }
        }
    }
    need_lo > need_hi
}

/// The Fredholm index of the compression `P T P : (dom and P)H -> (cod and P)H`
/// of a basis bijection `T : dom -> cod` by a diagonal projection `P`:
/// the number of domain points of `dom and P` pushed out of `P`, minus the
/// number of codomain points of `cod and P` pulled from outside `P`.
pub fn compressed_index(
    p: &Projection,
    t: &Injection,
    dom: &Projection,
    cod: &Projection,
    name: &str,
) -> Result<i64, ModelError> {
    // The compression is only meaningful when T covers dom and cod exactly;
    // verify coverage structurally so unhit points cannot be missed.
    if !covered_by(&dom.regions, &t.domain_regions()) {
        return Err(ModelError::CoverageNotProvable {
            what: format!("domain projection of {name} not covered by operator cells"),
        });
    }
    let images = t.image_regions();
    if !covered_by(&cod.regions, &images) {
        return Err(ModelError::CoverageNotProvable {
            what: format!("codomain projection of {name} not covered by operator images"),
        });
    }
    let cert = t.certificate;
    let bound = cert.scan_bound();
    let mut kernel = 0i64;
    let mut cokernel = 0i64;

    for cell in &t.cells {
        let image = cell.image_region();
        let fast = halfspace_over(p, &cell.dom) && halfspace_over(p, &image);
        if fast {
            if let Some(last) = cell.action.last() {
                // Kernel: b >= 0 with T b < 0.
                let threshold = last.nonneg_threshold();
                if threshold >= 1 {
                    for b in cell.dom.points_within(bound, Some((0, threshold - 1))) {
                        if !dom.contains(&b) {
                            continue;
                        }
                        if b.max_abs_coord() <= cert.radius {
                            kernel += 1;
                        } else {
                            return Err(ModelError::CertificateViolation {
                                operator: name.to_string(),
                                point: b.to_string(),
                            });
                        }
                    }
                }
                // Cokernel: y >= 0 in the image with inverse < 0, i.e. y < add.
                if last.add >= 1 {
                    for y in image.points_within(bound, Some((0, last.add - 1))) {
                        if !cod.contains(&y) {
                            continue;
                        }
                        if y.max_abs_coord() <= cert.radius {
                            cokernel += 1;
                        } else {
                            return Err(ModelError::CertificateViolation {
                                operator: name.to_string(),
                                point: y.to_string(),
                            });
                        }
                    }
                }
            }
        } else {
            // General projection: certificate-bounded full scan.
            for b in cell.dom.points_within(bound, None) {
                if !(dom.contains(&b) && p.contains(&b)) {
                    continue;
                }
                let y = cell.apply(&b).expect("point is in the cell domain");
                if !p.contains(&y) {
                    if b.max_abs_coord() <= cert.radius {
                        kernel += 1;
                    } else {
                        return Err(ModelError::CertificateViolation {
                            operator: name.to_string(),
                            point: b.to_string(),
                        });
                    }
                }
            }
            for y in image.points_within(bound, None) {
                if !(cod.contains(&y) && p.contains(&y)) {
                    continue;
                }
                let b = cell
                    .invert(&y)
                    .ok_or_else(|| ModelError::CertificateViolation {
                        operator: name.to_string(),
                        point: y.to_string(),
                    })?;
                if !p.contains(&b) {
                    if y.max_abs_coord() <= cert.radius {
                        cokernel += 1;
                    } else {
                        return Err(ModelError::CertificateViolation {
                            operator: name.to_string(),
                            point: y.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(kernel - cokernel)
}

/// Exact rank of the difference `T1 - T0` of two basis operators, computed
/// on the finitely many points where they disagree: the difference matrix
/// has columns `e(T1 b) - e(T0 b)` over disagreeing `b`, and its integer
/// rank is read off the Smith form.
pub fn perturbation_rank(
    op1: &BasisOperator,
    op0: &BasisOperator,
    certificate: DefectCertificate,
    name: &str,
) -> Result<u64, ModelError> {
    let bound = certificate.scan_bound();
    let mut candidates: BTreeSet<BasisPoint> = BTreeSet::new();
    for region in op1
        .domain_regions()
        .iter()
        .chain(op0.domain_regions().iter())
    {
        candidates.extend(region.points_within(bound, None));
    }
    let mut diffs: Vec<(Option<BasisPoint>, Option<BasisPoint>)> = Vec::new();
    for b in candidates {
        let y1 = op1.apply(&b);
        let y0 = op0.apply(&b);
        if y1 != y0 {
            if b.max_abs_coord() > certificate.radius {
                return Err(ModelError::CertificateViolation {
                    operator: name.to_string(),
                    point: b.to_string(),
                });
            }
            diffs.push((y1, y0));
        }
    }
    // Index the image points that occur and Smith-rank the difference.
    let mut rows: BTreeSet<BasisPoint> = BTreeSet::new();
    for (y1, y0) in &diffs {
        rows.extend(y1.iter().cloned());
        rows.extend(y0.iter().cloned());
    }
    let rows: Vec<BasisPoint> = rows.into_iter().collect();
    let row_of = |p: &BasisPoint| rows.iter().position(|r| r == p).expect("collected above");
    let mut m = IntMatrix::zeros(rows.len(), diffs.len());
    for (col, (y1, y0)) in diffs.iter().enumerate() {
        if let Some(y) = y1 {
            let r = row_of(y);
            m.set(r, col, m.get(r, col) + 1);
        }
        if let Some(y) = y0 {
            let r = row_of(y);
            m.set(r, col, m.get(r, col) - 1);
        }
    }
    Ok(smith(&m).rank() as u64)
}
