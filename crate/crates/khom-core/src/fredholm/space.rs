//! Countable orthonormal bases and exactly-describable subsets of them.
//!
//! A basis point is an optional column tag plus an integer coordinate tuple.
//! A region is a conjunction of per-coordinate bounds and residue
//! constraints, an optional residue constraint on the coordinate sum, and a
//! finite list of excluded points. Regions are closed under the exact set
//! operations the operator calculus needs (intersection, affine image and
//! preimage), which keeps every membership question decidable.

use std::collections::BTreeSet;
use std::fmt;

/// One basis vector: an optional tag naming the column of the space it
/// lives in, and integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisPoint {
    pub tag: Option<String>,
    pub coords: Vec<i64>,
}

impl BasisPoint {
    pub fn tagged(tag: &str, coords: Vec<i64>) -> Self {
        BasisPoint {
            tag: Some(tag.to_string()),
            coords,
        }
    }

    pub fn untagged(coords: Vec<i64>) -> Self {
        BasisPoint { tag: None, coords }
    }

    pub fn last_coord(&self) -> Option<i64> {
        self.coords.last().copied()
    }

    pub fn max_abs_coord(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for BasisPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        match &self.tag {
            Some(t) => write!(f, "|{}; {}>", coords.join(","), t),
            None => write!(f, "|{}>", coords.join(",")),
        }
    }
}

/// Ambient domain of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordDomain {
    Integers,
    NonNegative,
}

/// The ambient basis: which tags exist and what the coordinate tuple looks
/// like. An untagged space lists the single tag `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisSpace {
    pub tags: Vec<Option<String>>,
    pub coord_domains: Vec<CoordDomain>,
}

impl BasisSpace {
    pub fn tagged(tags: &[String], coord_domains: Vec<CoordDomain>) -> Self {
        BasisSpace {
            tags: tags.iter().map(|t| Some(t.clone())).collect(),
            coord_domains,
        }
    }

    pub fn untagged(coord_domains: Vec<CoordDomain>) -> Self {
        BasisSpace {
            tags: vec![None],
            coord_domains,
        }
    }

    pub fn contains(&self, b: &BasisPoint) -> bool {
        self.tags.contains(&b.tag)
            && b.coords.len() == self.coord_domains.len()
            && b.coords
                .iter()
                .zip(&self.coord_domains)
                .all(|(&c, d)| matches!(d, CoordDomain::Integers) || c >= 0)
    }

    /// Every basis point whose coordinates all have absolute value at most
    /// `bound`. This is the brute-force enumeration window used by oracles
    /// and relation checks.
    pub fn window_points(&self, bound: i64) -> Vec<BasisPoint> {
        let ranges: Vec<Vec<i64>> = self
            .coord_domains
            .iter()
            .map(|d| {
                let lo = match d {
                    CoordDomain::Integers => -bound,
                    CoordDomain::NonNegative => 0,
                };
                (lo..=bound).collect()
            })
            .collect();
        let mut out = Vec::new();
        for tag in &self.tags {
            let mut stack = vec![Vec::new()];
            for range in &ranges {
                let mut next = Vec::with_capacity(stack.len() * range.len());
                for prefix in &stack {
                    for &x in range {
                        let mut longer = prefix.clone();
                        longer.push(x);
                        next.push(longer);
                    }
                }
                stack = next;
            }
            for coords in stack {
                out.push(BasisPoint {
                    tag: tag.clone(),
                    coords,
                });
            }
        }
        out
    }
}

/// Residue constraint `x = class (mod modulus)`, with `modulus >= 1` and the
/// class normalized to `[0, modulus)`. Modulus 1 is represented as `None`
/// at the use sites (no constraint).
pub type Residue = (i64, i64);

fn normalize_residue(r: Residue) -> Option<Residue> {
    let (m, c) = r;
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        None
    } else {
        Some((m, c.rem_euclid(m)))
    }
}

/// Extended gcd: returns `(g, x, y)` with `a*x + b*y = g`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), if a >= 0 { 1 } else { -1 }, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Marker for a provably empty intersection of constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incompatible;

/// Intersection of two residue constraints; errors when incompatible.
pub fn merge_residues(
    a: Option<Residue>,
    b: Option<Residue>,
) -> Result<Option<Residue>, Incompatible> {
    match (a.and_then(normalize_residue), b.and_then(normalize_residue)) {
        (None, r) | (r, None) => Ok(r),
        (Some((m1, r1)), Some((m2, r2))) => {
            let (g, _, _) = extended_gcd(m1, m2);
            if (r1 - r2).rem_euclid(g) != 0 {
                return Err(Incompatible);
            }
            let l = m1 / g * m2;
            // Solve x = r1 (mod m1), x = r2 (mod m2) by stepping r1 by m1.
            let step = m1;
            let mut x = r1.rem_euclid(l);
            while x.rem_euclid(m2) != r2.rem_euclid(m2) {
                x = (x + step).rem_euclid(l);
            }
            Ok(normalize_residue((l, x)))
        }
    }
}

/// Conjunction of an integer interval and an optional residue class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoordConstraint {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
    pub residue: Option<Residue>,
}

impl CoordConstraint {
    pub fn free() -> Self {
        CoordConstraint::default()
    }

    pub fn at_least(lo: i64) -> Self {
        CoordConstraint {
            lo: Some(lo),
            ..Default::default()
        }
    }

    pub fn exactly(v: i64) -> Self {
        CoordConstraint {
            lo: Some(v),
            hi: Some(v),
            residue: None,
        }
    }

    pub fn admits(&self, x: i64) -> bool {
        self.lo.is_none_or(|lo| x >= lo)
            && self.hi.is_none_or(|hi| x <= hi)
            && self.residue.is_none_or(|(m, c)| x.rem_euclid(m) == c)
    }

    /// Provably empty (bounds crossed); residue gaps are not detected here.
    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(lo), Some(hi)) if lo > hi)
    }

    /// Values admitted inside `[-bound, bound]`, in increasing order.
    pub fn values_within(&self, bound: i64) -> Vec<i64> {
        let lo = self.lo.map_or(-bound, |l| l.max(-bound));
        let hi = self.hi.map_or(bound, |h| h.min(bound));
        (lo..=hi).filter(|&x| self.admits(x)).collect()
    }

    pub fn intersect(&self, other: &CoordConstraint) -> Result<CoordConstraint, Incompatible> {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let residue = merge_residues(self.residue, other.residue)?;
        let merged = CoordConstraint { lo, hi, residue };
        if merged.is_empty() {
            Err(Incompatible)
        } else {
            Ok(merged)
        }
    }
}

/// A decidable subset of the basis: tag, per-coordinate constraints, an
/// optional residue constraint on the coordinate sum, and finitely many
/// excluded coordinate tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub tag: Option<String>,
    pub coords: Vec<CoordConstraint>,
    pub sum_residue: Option<Residue>,
    pub excluded: BTreeSet<Vec<i64>>,
}

impl Region {
    /// The full column over `tag` with the given ambient coordinate domains.
    pub fn full(tag: Option<String>, domains: &[CoordDomain]) -> Self {
        Region {
            tag,
            coords: domains
                .iter()
                .map(|d| match d {
                    CoordDomain::Integers => CoordConstraint::free(),
                    CoordDomain::NonNegative => CoordConstraint::at_least(0),
                })
                .collect(),
            sum_residue: None,
            excluded: BTreeSet::new(),
        }
    }

    pub fn with_coord(mut self, idx: usize, c: CoordConstraint) -> Self {
        self.coords[idx] = self.coords[idx].intersect(&c).unwrap_or(CoordConstraint {
            lo: Some(1),
            hi: Some(0),
            residue: None,
        });
        self
    }

    pub fn with_sum_residue(mut self, r: Residue) -> Self {
        self.sum_residue = normalize_residue(r);
        self
    }

    pub fn contains(&self, b: &BasisPoint) -> bool {
        if b.tag != self.tag || b.coords.len() != self.coords.len() {
            return false;
        }
        if !b.coords.iter().zip(&self.coords).all(|(&x, c)| c.admits(x)) {
            return false;
        }
        if let Some((m, r)) = self.sum_residue {
            let total: i64 = b.coords.iter().sum();
            if total.rem_euclid(m) != r {
                return false;
            }
        }
        !self.excluded.contains(&b.coords)
    }

    /// All points with coordinates in `[-bound, bound]`, optionally with the
    /// last coordinate further restricted to `last_override`.
    pub fn points_within(&self, bound: i64, last_override: Option<(i64, i64)>) -> Vec<BasisPoint> {
        let n = self.coords.len();
        if n == 0 {
            // Zero-coordinate space: the single point, if not excluded.
            let point = BasisPoint {
                tag: self.tag.clone(),
                coords: vec![],
            };
            return if last_override.is_some() || !self.contains(&point) {
                vec![]
            } else {
                vec![point]
            };
        }
        let mut axis_values: Vec<Vec<i64>> = Vec::with_capacity(n);
        for (idx, c) in self.coords.iter().enumerate() {
            let mut constraint = c.clone();
            if idx == n - 1 {
                if let Some((lo, hi)) = last_override {
                    constraint = match constraint.intersect(&CoordConstraint {
                        lo: Some(lo),
                        hi: Some(hi),
                        residue: None,
                    }) {
                        Ok(c) => c,
                        Err(Incompatible) => return vec![],
                    };
                }
            }
            axis_values.push(constraint.values_within(bound));
        }
        let mut stack: Vec<Vec<i64>> = vec![Vec::new()];
        for axis in &axis_values {
            let mut next = Vec::with_capacity(stack.len() * axis.len());
            for prefix in &stack {
                for &x in axis {
                    let mut longer = prefix.clone();
                    longer.push(x);
                    next.push(longer);
                }
            }
            stack = next;
        }
        stack
            .into_iter()
            .filter(|coords| {
                self.sum_residue
                    .is_none_or(|(m, r)| coords.iter().sum::<i64>().rem_euclid(m) == r)
                    && !self.excluded.contains(coords)
            })
            .map(|coords| BasisPoint {
                tag: self.tag.clone(),
                coords,
            })
            .collect()
    }

    /// Conservative structural containment: `true` proves `self` is a
    /// subset of `other`; `false` is inconclusive.
    pub fn is_contained_in(&self, other: &Region) -> bool {
        if self.tag != other.tag || self.coords.len() != other.coords.len() {
            return false;
        }
        for (mine, theirs) in self.coords.iter().zip(&other.coords) {
            let lo_ok = match (theirs.lo, mine.lo) {
                (None, _) => true,
                (Some(t), Some(m)) => m >= t,
                (Some(_), None) => false,
            };
            let hi_ok = match (theirs.hi, mine.hi) {
                (None, _) => true,
                (Some(t), Some(m)) => m <= t,
                (Some(_), None) => false,
            };
            let res_ok = match theirs.residue {
                None => true,
                Some((tm, tr)) => match mine.residue {
                    Some((mm, mr)) => mm % tm == 0 && mr.rem_euclid(tm) == tr,
                    None => matches!((mine.lo, mine.hi), (Some(l), Some(h))
                        if (l..=h).all(|x| x.rem_euclid(tm) == tr)),
                },
            };
            if !(lo_ok && hi_ok && res_ok) {
                return false;
            }
        }
        let sum_ok = match other.sum_residue {
            None => true,
            Some((tm, tr)) => match self.sum_residue {
                Some((mm, mr)) => mm % tm == 0 && mr.rem_euclid(tm) == tr,
                None => false,
            },
        };
        if !sum_ok {
            return false;
        }
        // Points excluded from the superset must not appear in the subset.
        other.excluded.iter().all(|coords| {
            !self.contains(&BasisPoint {
                tag: self.tag.clone(),
                coords: coords.clone(),
            })
        })
    }

    /// Re-homes the region under a new tag (used by direct sums).
    pub fn retag(&self, prefix: &str) -> Region {
        let old = self.tag.clone().unwrap_or_default();
        Region {
            tag: Some(format!("{prefix}{old}")),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_membership() {
        let c = CoordConstraint {
            lo: Some(0),
            hi: None,
            residue: Some((3, 2)),
        };
        assert!(c.admits(2));
        assert!(c.admits(5));
        assert!(!c.admits(3));
        assert!(!c.admits(-1));
        assert_eq!(c.values_within(8), vec![2, 5, 8]);
    }

    #[test]
    fn residue_merging() {
        assert_eq!(merge_residues(Some((2, 1)), Some((3, 2))), Ok(Some((6, 5))));
        assert_eq!(
            merge_residues(Some((2, 0)), Some((2, 1))),
            Err(Incompatible)
        );
        assert_eq!(merge_residues(Some((1, 0)), Some((4, 3))), Ok(Some((4, 3))));
        assert_eq!(merge_residues(None, None), Ok(None));
        assert_eq!(
            merge_residues(Some((4, 2)), Some((6, 0))),
            Ok(Some((12, 6)))
        );
    }

    #[test]
    fn region_membership_with_sum_residue() {
        let r = Region::full(None, &[CoordDomain::NonNegative, CoordDomain::Integers])
            .with_sum_residue((2, 1));
        assert!(r.contains(&BasisPoint::untagged(vec![0, 1])));
        assert!(r.contains(&BasisPoint::untagged(vec![2, -1])));
        assert!(!r.contains(&BasisPoint::untagged(vec![1, 1])));
        assert!(
            !r.contains(&BasisPoint::untagged(vec![-1, 2])),
            "nonneg axis"
        );
    }

    #[test]
    fn region_enumeration_respects_overrides() {
        let r = Region::full(None, &[CoordDomain::NonNegative, CoordDomain::Integers]);
        let pts = r.points_within(2, Some((-1, 0)));
        assert_eq!(pts.len(), 3 * 2, "3 nonneg values times last in {{-1, 0}}");
        for p in &pts {
            assert!(p.coords[1] == -1 || p.coords[1] == 0);
        }
    }

    #[test]
    fn zero_coordinate_region_has_one_point() {
        let r = Region::full(Some("x".to_string()), &[]);
        let pts = r.points_within(5, None);
        assert_eq!(pts, vec![BasisPoint::tagged("x", vec![])]);
    }

    #[test]
    fn containment_checks() {
        let whole = Region::full(None, &[CoordDomain::Integers]);
        let half = whole.clone().with_coord(0, CoordConstraint::at_least(0));
        let evens = whole.clone().with_coord(
            0,
            CoordConstraint {
                residue: Some((2, 0)),
                ..Default::default()
            },
        );
        let multiples_of_four = whole.clone().with_coord(
            0,
            CoordConstraint {
                residue: Some((4, 0)),
                ..Default::default()
            },
        );
        assert!(half.is_contained_in(&whole));
        assert!(!whole.is_contained_in(&half));
        assert!(multiples_of_four.is_contained_in(&evens));
        assert!(!evens.is_contained_in(&multiples_of_four));
    }

    #[test]
    fn excluded_points_are_left_out() {
        let mut r = Region::full(None, &[CoordDomain::Integers]);
        r.excluded.insert(vec![3]);
        assert!(!r.contains(&BasisPoint::untagged(vec![3])));
        assert!(r.contains(&BasisPoint::untagged(vec![4])));
        let pts = r.points_within(4, None);
        assert_eq!(pts.len(), 8, "nine window points minus the excluded one");
    }

    #[test]
    fn window_points_cover_the_ambient_box() {
        let space = BasisSpace::tagged(
            &["a".to_string(), "b".to_string()],
            vec![CoordDomain::Integers],
        );
        assert_eq!(space.window_points(1).len(), 2 * 3);
        let hl = BasisSpace::untagged(vec![CoordDomain::NonNegative, CoordDomain::Integers]);
        assert_eq!(hl.window_points(2).len(), 3 * 5);
    }
}
