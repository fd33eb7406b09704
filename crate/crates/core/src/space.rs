//! Finite mm-spaces and the elementary operations on them.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A finite metric measure space `(X, d_X, m_X)`.
///
/// Construction validates the metric axioms and that the masses form a
/// probability vector. Zero masses are allowed until [`canonicalize`] removes
/// them; the solvers require a canonical (full support) space.
///
/// [`canonicalize`]: FiniteMMSpace::canonicalize
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMMSpace {
    label: String,
    points: Vec<String>,
    dist: Vec<Vec<Rational>>,
    mass: Vec<Rational>,
}

impl FiniteMMSpace {
    pub fn new(
        label: impl Into<String>,
        points: Vec<String>,
        dist: Vec<Vec<Rational>>,
        mass: Vec<Rational>,
    ) -> Result<Self> {
        validate_metric(&dist)?;
        let n = dist.len();
        if points.len() != n {
            return Err(Error::DimensionMismatch {
                what: "points",
                expected: n,
                found: points.len(),
            });
        }
        validate_mass(&mass, n)?;
        Ok(Self {
            label: label.into(),
            points,
            dist,
            mass,
        })
    }

    /// Builds a space with points named `0, 1, ...`.
    pub fn from_parts(
        label: impl Into<String>,
        dist: Vec<Vec<Rational>>,
        mass: Vec<Rational>,
    ) -> Result<Self> {
        let points = (0..dist.len()).map(|i| alloc::format!("{i}")).collect();
        Self::new(label, points, dist, mass)
    }

    /// Points of the real line with the absolute-value metric.
    pub fn on_line(label: impl Into<String>, coords: &[Rational], mass: Vec<Rational>) -> Result<Self> {
        let dist = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        let points = coords.iter().map(rational::format).collect();
        Self::new(label, points, dist, mass)
    }

    /// The one-point space `*`.
    pub fn point(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            points: vec![String::from("*")],
            dist: vec![vec![Rational::zero()]],
            mass: vec![Rational::one()],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn distances(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same metric, different measure.
    pub fn with_mass(&self, mass: Vec<Rational>) -> Result<Self> {
        validate_mass(&mass, self.len())?;
        Ok(Self {
            label: self.label.clone(),
            points: self.points.clone(),
            dist: self.dist.clone(),
            mass,
        })
    }

    pub fn is_canonical(&self) -> bool {
        self.mass.iter().all(|m| m.is_positive())
    }

    pub fn require_canonical(&self) -> Result<()> {
        match self.mass.iter().position(|m| m.is_zero()) {
            Some(i) => Err(Error::NotCanonical(i)),
            None => Ok(()),
        }
    }

    /// Restriction to the support of the measure. Point order is preserved.
    pub fn canonicalize(&self) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.mass[i].is_positive()).collect();
        self.restrict(&keep)
    }

    /// The sub-metric on `keep` (in the given order) with masses copied
    /// verbatim; the caller is responsible for the masses summing to one.
    pub(crate) fn restrict(&self, keep: &[usize]) -> Self {
        Self {
            label: self.label.clone(),
            points: keep.iter().map(|&i| self.points[i].clone()).collect(),
            dist: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.dist[i][j].clone()).collect())
                .collect(),
            mass: keep.iter().map(|&i| self.mass[i].clone()).collect(),
        }
    }

    /// `d(x, A)`, or `None` for empty `A` (`inf ∅ = ∞`).
    pub fn dist_to_set(&self, x: usize, set: &Subset) -> Option<Rational> {
        set.iter().map(|a| &self.dist[x][a]).min().cloned()
    }

    pub fn subset(&self, indices: impl IntoIterator<Item = usize>) -> Result<Subset> {
        Subset::new(self.len(), indices)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    /// `U_r(A)` when `closed` is false, `B_r(A)` when it is true.
    pub fn neighborhood(&self, set: &Subset, r: &Rational, closed: bool) -> Result<Subset> {
        if r.is_negative() {
            return Err(Error::NegativeParameter("radius"));
        }
        self.check_subset(set)?;
        let members = (0..self.len()).filter(|&y| match self.dist_to_set(y, set) {
            Some(d) if closed => &d <= r,
            Some(d) => &d < r,
            None => false,
        });
        Ok(Subset::from_sorted(self.len(), members.collect()))
    }

    pub fn diameter(&self, set: &Subset) -> Rational {
        let idx: Vec<usize> = set.iter().collect();
        let mut best = Rational::zero();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if self.dist[i][j] > best {
                    best = self.dist[i][j].clone();
                }
            }
        }
        best
    }

    pub fn measure(&self, set: &Subset) -> Rational {
        rational::sum(set.iter().map(|i| &self.mass[i]))
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            label: self.label.clone(),
            points: self.points.clone(),
            dist: self
                .dist
                .iter()
                .map(|row| row.iter().map(|d| d * factor).collect())
                .collect(),
            mass: self.mass.clone(),
        }
    }

    fn check_subset(&self, set: &Subset) -> Result<()> {
        if set.universe() != self.len() {
            return Err(Error::DimensionMismatch {
                what: "subset universe",
                expected: self.len(),
                found: set.universe(),
            });
        }
        Ok(())
    }

    /// Searches for a mass-preserving isometric bijection onto `other`.
    ///
    /// Candidates are tried in lexicographic order of their image vectors, so
    /// the returned witness is the lexicographically least one.
    pub fn isomorphism_to(&self, other: &FiniteMMSpace) -> Result<Option<PointMap>> {
        const LIMIT: usize = 8;
        let largest = self.len().max(other.len());
        if largest > LIMIT {
            return Err(Error::SizeLimitExceeded {
                size: largest as u128,
                limit: LIMIT as u128,
            });
        }
        self.require_canonical()?;
        other.require_canonical()?;
        if self.len() != other.len() {
            return Ok(None);
        }
        let mut image = Vec::with_capacity(self.len());
        let mut used = vec![false; other.len()];
        if self.extend_isometry(other, &mut image, &mut used) {
            Ok(Some(PointMap::new(image, other.len())?))
        } else {
            Ok(None)
        }
    }

    fn extend_isometry(&self, other: &FiniteMMSpace, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = image.len();
        if i == self.len() {
            return true;
        }
        for j in 0..other.len() {
            if used[j] || self.mass[i] != other.mass[j] {
                continue;
            }
            let consistent = image
                .iter()
                .enumerate()
                .all(|(k, &jk)| self.dist[i][k] == other.dist[j][jk]);
            if !consistent {
                continue;
            }
            image.push(j);
            used[j] = true;
            if self.extend_isometry(other, image, used) {
                return true;
            }
            used[j] = false;
            image.pop();
        }
        false
    }
}

fn validate_metric(dist: &[Vec<Rational>]) -> Result<()> {
    let n = dist.len();
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                what: "distance row",
                expected: n,
                found: row.len(),
            });
        }
        if let Some(j) = row.iter().position(|d| d.is_negative()) {
            return Err(Error::NegativeEntry {
                what: "dist",
                index: (i, j),
            });
        }
    }
    for i in 0..n {
        if !dist[i][i].is_zero() {
            return Err(Error::NonZeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] != dist[j][i] {
                return Err(Error::NonSymmetricMatrix(i, j));
            }
            if dist[i][j].is_zero() {
                return Err(Error::ZeroDistance(i, j));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if dist[i][k] > &dist[i][j] + &dist[j][k] {
                    return Err(Error::TriangleViolation(i, j, k));
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn validate_mass(mass: &[Rational], n: usize) -> Result<()> {
    if mass.len() != n {
        return Err(Error::DimensionMismatch {
            what: "mass",
            expected: n,
            found: mass.len(),
        });
    }
    if let Some(i) = mass.iter().position(|m| m.is_negative()) {
        return Err(Error::NegativeEntry {
            what: "mass",
            index: (i, 0),
        });
    }
    let total = rational::sum(mass);
    if !total.is_one() {
        return Err(Error::MassNotOne(total));
    }
    Ok(())
}

/// A subset of the points of a space, identified by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    universe: usize,
    members: BTreeSet<usize>,
}

impl Subset {
    pub fn new(universe: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i >= universe) {
            return Err(Error::IndexOutOfRange {
                what: "subset",
                index: bad,
                size: universe,
            });
        }
        Ok(Self { universe, members })
    }

    fn from_sorted(universe: usize, indices: Vec<usize>) -> Self {
        Self {
            universe,
            members: indices.into_iter().collect(),
        }
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            members: BTreeSet::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        Self::from_sorted(universe, (0..universe).collect())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        Self {
            universe: self.universe,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }
}

/// `X × Y` with the l¹ metric `d((x,y),(x',y')) = d_X(x,x') + d_Y(y,y')`.
///
/// Points are index pairs; no measure is attached.
#[derive(Debug, Clone, Copy)]
pub struct ProductL1<'a> {
    pub left: &'a FiniteMMSpace,
    pub right: &'a FiniteMMSpace,
}

impl<'a> ProductL1<'a> {
    pub fn new(left: &'a FiniteMMSpace, right: &'a FiniteMMSpace) -> Self {
        Self { left, right }
    }

    pub fn dist(&self, a: (usize, usize), b: (usize, usize)) -> Rational {
        self.left.dist(a.0, b.0) + self.right.dist(a.1, b.1)
    }

    /// `U_r(S)` / `B_r(S)` for a set of pairs in the product.
    pub fn neighborhood(
        &self,
        pairs: &BTreeSet<(usize, usize)>,
        r: &Rational,
        closed: bool,
    ) -> Result<BTreeSet<(usize, usize)>> {
        if r.is_negative() {
            return Err(Error::NegativeParameter("radius"));
        }
        let mut out = BTreeSet::new();
        for i in 0..self.left.len() {
            for j in 0..self.right.len() {
                let near = pairs.iter().any(|&p| {
                    let d = self.dist((i, j), p);
                    if closed {
                        &d <= r
                    } else {
                        &d < r
                    }
                });
                if near {
                    out.insert((i, j));
                }
            }
        }
        Ok(out)
    }
}

/// A total map between the point sets of two spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointMap {
    image: Vec<usize>,
    codomain_len: usize,
}

impl PointMap {
    pub fn new(image: Vec<usize>, codomain_len: usize) -> Result<Self> {
        if let Some(&bad) = image.iter().find(|&&j| j >= codomain_len) {
            return Err(Error::IndexOutOfRange {
                what: "map image",
                index: bad,
                size: codomain_len,
            });
        }
        Ok(Self { image, codomain_len })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
            codomain_len: n,
        }
    }

    pub fn constant(domain_len: usize, target: usize, codomain_len: usize) -> Result<Self> {
        Self::new(vec![target; domain_len], codomain_len)
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn domain_len(&self) -> usize {
        self.image.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain_len
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PointMap) -> Result<PointMap> {
        if g.domain_len() != self.codomain_len {
            return Err(Error::DimensionMismatch {
                what: "map composition",
                expected: self.codomain_len,
                found: g.domain_len(),
            });
        }
        Ok(PointMap {
            image: self.image.iter().map(|&j| g.image[j]).collect(),
            codomain_len: g.codomain_len,
        })
    }

    pub fn inverse_image(&self, set: &Subset) -> Subset {
        Subset::from_sorted(
            self.domain_len(),
            (0..self.domain_len()).filter(|&i| set.contains(self.image[i])).collect(),
        )
    }

    /// `(f_* m)(j) = Σ_{f(i) = j} m(i)`.
    pub fn pushforward(&self, mass: &[Rational]) -> Result<Vec<Rational>> {
        if mass.len() != self.domain_len() {
            return Err(Error::DimensionMismatch {
                what: "pushforward mass",
                expected: self.domain_len(),
                found: mass.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.codomain_len];
        for (m, &j) in mass.iter().zip(&self.image) {
            out[j] += m;
        }
        Ok(out)
    }

    /// `d_Y(f(x), f(x')) ≤ d_X(x, x')` for all pairs.
    pub fn is_one_lipschitz(&self, domain: &FiniteMMSpace, codomain: &FiniteMMSpace) -> bool {
        let n = self.domain_len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| codomain.dist(self.image[a], self.image[b]) <= domain.dist(a, b))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn line3() -> FiniteMMSpace {
        FiniteMMSpace::on_line(
            "L",
            &[rat(-1, 4), int(0), rat(1, 4)],
            vec![rat(1, 3), rat(1, 3), rat(1, 3)],
        )
        .unwrap()
    }

    fn two_point(d: Rational, m0: Rational) -> FiniteMMSpace {
        let m1 = int(1) - &m0;
        FiniteMMSpace::from_parts("T", vec![vec![int(0), d.clone()], vec![d, int(0)]], vec![m0, m1]).unwrap()
    }

    #[test]
    fn canonicalize_drops_zero_mass() {
        let x = two_point(int(1), int(1));
        assert!(!x.is_canonical());
        let c = x.canonicalize();
        assert_eq!(c.len(), 1);
        assert_eq!(c.mass(), &[int(1)]);
        assert_eq!(c.points(), &[String::from("0")]);
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let x = line3();
        assert_eq!(x.canonicalize(), x);
        assert_eq!(x.canonicalize().canonicalize(), x.canonicalize());
    }

    #[test]
    fn triangle_violation_names_first_triple() {
        let dist = vec![
            vec![int(0), int(1), int(3)],
            vec![int(1), int(0), int(1)],
            vec![int(3), int(1), int(0)],
        ];
        let err = FiniteMMSpace::from_parts("bad", dist, vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap_err();
        assert_eq!(err, Error::TriangleViolation(0, 1, 2));
    }

    #[test]
    fn structural_errors() {
        let asym = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        assert_eq!(
            FiniteMMSpace::from_parts("a", asym, vec![rat(1, 2), rat(1, 2)]).unwrap_err(),
            Error::NonSymmetricMatrix(0, 1)
        );
        let neg = vec![vec![int(0), int(-1)], vec![int(-1), int(0)]];
        assert_eq!(
            FiniteMMSpace::from_parts("n", neg, vec![rat(1, 2), rat(1, 2)]).unwrap_err(),
            Error::NegativeEntry { what: "dist", index: (0, 1) }
        );
        let ok = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(
            FiniteMMSpace::from_parts("m", ok.clone(), vec![rat(1, 2), rat(1, 3)]).unwrap_err(),
            Error::MassNotOne(rat(5, 6))
        );
        assert!(matches!(
            FiniteMMSpace::from_parts("m", ok, vec![rat(3, 2), rat(-1, 2)]).unwrap_err(),
            Error::NegativeEntry { what: "mass", index: (1, 0) }
        ));
    }

    #[test]
    fn neighborhoods_open_and_closed() {
        let x = line3();
        let a = x.subset([1]).unwrap();
        assert_eq!(x.neighborhood(&a, &rat(1, 4), true).unwrap(), x.full());
        assert_eq!(x.neighborhood(&a, &rat(1, 4), false).unwrap(), a);
        let empty = Subset::empty(3);
        assert!(x.neighborhood(&empty, &int(5), true).unwrap().is_empty());
        assert!(x.neighborhood(&empty, &int(5), false).unwrap().is_empty());
    }

    #[test]
    fn diameters() {
        let x = line3();
        assert_eq!(x.diameter(&Subset::empty(3)), int(0));
        assert_eq!(x.diameter(&x.subset([2]).unwrap()), int(0));
        assert_eq!(x.diameter(&x.full()), rat(1, 2));
    }

    #[test]
    fn l1_product_distances() {
        let x = two_point(int(1), rat(1, 2));
        let p = ProductL1::new(&x, &x);
        assert_eq!(p.dist((0, 0), (0, 0)), int(0));
        assert_eq!(p.dist((0, 0), (1, 1)), int(2));
        assert_eq!(p.dist((0, 0), (1, 0)), int(1));
    }

    #[test]
    fn pushforwards() {
        let x = line3();
        let m = x.mass().to_vec();
        assert_eq!(PointMap::identity(3).pushforward(&m).unwrap(), m);
        let c = PointMap::constant(3, 2, 3).unwrap();
        assert_eq!(c.pushforward(&m).unwrap(), vec![int(0), int(0), int(1)]);
        let collapse = PointMap::new(vec![0, 0, 1], 2).unwrap();
        assert_eq!(collapse.pushforward(&m).unwrap(), vec![rat(2, 3), rat(1, 3)]);
    }

    #[test]
    fn isomorphism_search() {
        let x = FiniteMMSpace::on_line("x", &[int(0), int(1), int(3)], vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(x.isomorphism_to(&x).unwrap(), Some(PointMap::identity(3)));
        // reversed order of the same points
        let y = FiniteMMSpace::on_line("y", &[int(3), int(1), int(0)], vec![rat(1, 4), rat(1, 4), rat(1, 2)]).unwrap();
        assert_eq!(x.isomorphism_to(&y).unwrap().unwrap().image(), &[2, 1, 0]);
        let a = two_point(int(1), rat(1, 2));
        let b = two_point(rat(1, 2), rat(1, 2));
        assert_eq!(a.isomorphism_to(&b).unwrap(), None);
        let big = FiniteMMSpace::on_line("big", &(0..9).map(int).collect::<Vec<_>>(), vec![rat(1, 9); 9]).unwrap();
        assert!(matches!(big.isomorphism_to(&big), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn uniform_two_point_isomorphism_prefers_identity() {
        let a = two_point(int(1), rat(1, 2));
        assert_eq!(a.isomorphism_to(&a).unwrap().unwrap(), PointMap::identity(2));
    }
}
