//! The Lipschitz order with additive error and the metrics built on it.
//!
//! `X ≻_ε Y` holds when some coupling `π` of `m_X` and `m_Y` and some relation
//! `S ⊆ X × Y` satisfy `dis_≻ S ≤ ε` and `π(S) ≥ 1 − ε`. On finite spaces this
//! is a two-level problem: an outer search over relations and an inner
//! max-flow giving the best coupling mass on a fixed relation.
//!
//! The constraint `dis_≻ S ≤ e` is pairwise, so admissible relations are the
//! cliques of a compatibility graph on `X × Y`. Only finitely many thresholds
//! `e` matter (zero and the positive values of `d_Y − d_X`), and for each one
//! the solver runs a branch and bound over cliques bounded by the flow through
//! all still-compatible pairs. The same machinery with `|d_X − d_Y|` gives the
//! box metric.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::clique::{self, members, Graph};
use crate::error::{Error, Result};
use crate::flow::Marginals;
use crate::maps;
use crate::prokhorov::prokhorov;
use crate::rational::{self, Rational};
use crate::space::{FiniteMMSpace, PointMap, Subset};
use crate::transport::{check_pair_dims, max_coupling_mass, Coupling, PairSet};

/// Limits on the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest `|X|·|Y|` accepted by the relation searches.
    pub max_pairs: usize,
    /// Largest `|Y|^|X|` accepted by the map searches.
    pub max_maps: u128,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_pairs: 16,
            max_maps: 10_000_000,
        }
    }
}

impl SearchBudget {
    fn check_pairs(&self, x: &FiniteMMSpace, y: &FiniteMMSpace, hard_limit: usize) -> Result<()> {
        let size = x.len() * y.len();
        let limit = self.max_pairs.min(hard_limit);
        if size > limit {
            return Err(Error::SizeLimitExceeded {
                size: size as u128,
                limit: limit as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_maps(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<()> {
        let size = (y.len() as u128).checked_pow(x.len() as u32).unwrap_or(u128::MAX);
        if size > self.max_maps {
            return Err(Error::SizeLimitExceeded {
                size,
                limit: self.max_maps,
            });
        }
        Ok(())
    }
}

/// Certificate for `X ≻_ε Y` (or, for the box metric, for `□(X, Y) ≤ ε` with
/// `dis_value` holding the symmetric distortion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderWitness {
    pub epsilon: Rational,
    pub pairs: PairSet,
    pub coupling: Coupling,
    pub dis_value: Rational,
    /// `1 − π(S)`.
    pub uncovered: Rational,
}

impl OrderWitness {
    /// Re-checks the witness as a certificate of `X ≻_ε Y`.
    pub fn verify(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<()> {
        self.verify_with(x, y, lip_distortion(x, y, &self.pairs)?)
    }

    /// Re-checks the witness as a certificate of `□(X, Y) ≤ ε`.
    pub fn verify_box(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<()> {
        self.verify_with(x, y, distortion(x, y, &self.pairs)?)
    }

    fn verify_with(&self, x: &FiniteMMSpace, y: &FiniteMMSpace, dis: Rational) -> Result<()> {
        self.coupling.check_marginals(x.mass(), y.mass())?;
        let uncovered = Rational::one() - self.coupling.mass_on(&self.pairs);
        if dis != self.dis_value {
            return Err(Error::BoundViolated(format!("recorded distortion {} but relation has {}", self.dis_value, dis)));
        }
        if uncovered != self.uncovered {
            return Err(Error::BoundViolated(format!(
                "recorded uncovered mass {} but coupling leaves {}",
                self.uncovered, uncovered
            )));
        }
        if dis > self.epsilon || uncovered > self.epsilon {
            return Err(Error::BoundViolated(format!(
                "distortion {} and uncovered mass {} must not exceed {}",
                dis, uncovered, self.epsilon
            )));
        }
        Ok(())
    }
}

/// Certificate for `X ≻^KY_ε Y`: a map that is 1-Lipschitz up to `ε` on
/// `domain_set` and moves `m_X` within Prokhorov distance `ε` of `m_Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KyWitness {
    pub map: PointMap,
    pub domain_set: Subset,
    pub epsilon: Rational,
}

impl KyWitness {
    pub fn verify(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<()> {
        if !maps::lip_up_to_check(x, y, &self.map, &self.domain_set, &self.epsilon)? {
            return Err(Error::BoundViolated(format!("map is not 1-Lipschitz up to {}", self.epsilon)));
        }
        let pushed = self.map.pushforward(x.mass())?;
        let dp = prokhorov(y, &pushed, y.mass())?;
        if dp > self.epsilon {
            return Err(Error::BoundViolated(format!("prokhorov distance {} exceeds {}", dp, self.epsilon)));
        }
        Ok(())
    }
}

/// `dis S = max |d_X(x,x') − d_Y(y,y')|` over pairs of elements of `S`.
pub fn distortion(x: &FiniteMMSpace, y: &FiniteMMSpace, s: &PairSet) -> Result<Rational> {
    check_pair_dims(x, y, s)?;
    let mut best = Rational::zero();
    for (a, b) in s.iter() {
        for (c, d) in s.iter() {
            let gap = (x.dist(a, c) - y.dist(b, d)).abs();
            if gap > best {
                best = gap;
            }
        }
    }
    Ok(best)
}

/// `dis_≻ S = max (d_Y(y,y') − d_X(x,x'))`, which is `0` for the empty set and
/// never negative otherwise.
pub fn lip_distortion(x: &FiniteMMSpace, y: &FiniteMMSpace, s: &PairSet) -> Result<Rational> {
    check_pair_dims(x, y, s)?;
    let mut best = Rational::zero();
    for (a, b) in s.iter() {
        for (c, d) in s.iter() {
            let gap = y.dist(b, d) - x.dist(a, c);
            if gap > best {
                best = gap;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Distortion {
    Lipschitz,
    Symmetric,
}

/// Relation search over `X × Y`. Pair `(i, j)` is vertex `i * |Y| + j`, so
/// numeric vertex order is lexicographic pair order.
struct RelationSearch<'a> {
    x: &'a FiniteMMSpace,
    y: &'a FiniteMMSpace,
    cost: Vec<Vec<Rational>>,
    marginals: Marginals,
    /// Branching order: heavier pairs first.
    order: Vec<usize>,
}

impl<'a> RelationSearch<'a> {
    fn new(x: &'a FiniteMMSpace, y: &'a FiniteMMSpace, kind: Distortion) -> Self {
        let m = y.len();
        let size = x.len() * m;
        let cost = (0..size)
            .map(|p| {
                (0..size)
                    .map(|q| {
                        let gap = y.dist(p % m, q % m) - x.dist(p / m, q / m);
                        match kind {
                            Distortion::Lipschitz => gap,
                            Distortion::Symmetric => gap.abs(),
                        }
                    })
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&p, &q| {
            let wp = core::cmp::min(&x.mass()[p / m], &y.mass()[p % m]);
            let wq = core::cmp::min(&x.mass()[q / m], &y.mass()[q % m]);
            wq.cmp(wp).then(p.cmp(&q))
        });
        Self {
            x,
            y,
            cost,
            marginals: Marginals::new(x.mass(), y.mass()),
            order,
        }
    }

    fn size(&self) -> usize {
        self.cost.len()
    }

    fn all(&self) -> u64 {
        if self.size() == 64 {
            u64::MAX
        } else {
            (1u64 << self.size()) - 1
        }
    }

    fn graph(&self, threshold: &Rational) -> Graph {
        Graph::from_fn(self.size(), |p, q| &self.cost[p][q] <= threshold)
    }

    /// Every threshold at which the compatibility graph changes.
    fn thresholds(&self) -> Vec<Rational> {
        let mut values: Vec<Rational> = self
            .cost
            .iter()
            .flatten()
            .filter(|c| c.is_positive())
            .cloned()
            .collect();
        values.push(Rational::zero());
        rational::distinct(values)
    }

    fn flow(&self, set: u64) -> Rational {
        let mut mask = alloc::vec![false; self.size()];
        for p in members(set) {
            mask[p] = true;
        }
        self.marginals.value(&mask)
    }

    fn pick(&self, candidates: u64) -> usize {
        *self
            .order
            .iter()
            .find(|&&p| candidates & (1u64 << p) != 0)
            .expect("nonempty candidate set")
    }

    /// Raises `best` to the largest clique flow exceeding it, if any.
    fn improve(&self, graph: &Graph, chosen: u64, candidates: u64, best: &mut Rational) -> bool {
        let bound = self.flow(chosen | candidates);
        if bound <= *best {
            return false;
        }
        if candidates == 0 || graph.is_clique(candidates) {
            *best = bound;
            return true;
        }
        let v = self.pick(candidates);
        let bit = 1u64 << v;
        let with = self.improve(graph, chosen | bit, candidates & graph.neighbors(v), best);
        let without = self.improve(graph, chosen, candidates & !bit, best);
        with || without
    }

    /// Whether some clique `chosen ∪ C`, `C ⊆ candidates`, carries flow `≥ target`.
    fn reaches(&self, graph: &Graph, chosen: u64, candidates: u64, target: &Rational) -> bool {
        let bound = self.flow(chosen | candidates);
        if &bound < target {
            return false;
        }
        if candidates == 0 || graph.is_clique(candidates) {
            return true;
        }
        let v = self.pick(candidates);
        let bit = 1u64 << v;
        self.reaches(graph, chosen | bit, candidates & graph.neighbors(v), target)
            || self.reaches(graph, chosen, candidates & !bit, target)
    }

    /// `min_S max(dis(S), 1 − max_π π(S))`.
    fn minimum(&self) -> Rational {
        // the empty relation gives 1
        let mut best = Rational::one();
        for e in self.thresholds() {
            if e >= best {
                break;
            }
            let graph = self.graph(&e);
            let mut flow = Rational::one() - &best;
            if self.improve(&graph, 0, self.all(), &mut flow) {
                best = core::cmp::max(e, Rational::one() - flow);
            }
        }
        best
    }

    /// The lexicographically least relation (as a sorted pair list) with every
    /// pairwise cost `≤ epsilon` and coupling mass `≥ 1 − epsilon`.
    fn least_relation(&self, epsilon: &Rational) -> Option<u64> {
        let target = Rational::one() - epsilon;
        let graph = self.graph(epsilon);
        if !self.reaches(&graph, 0, self.all(), &target) {
            return None;
        }
        let mut chosen = 0u64;
        let mut open = self.all();
        loop {
            if self.flow(chosen) >= target {
                return Some(chosen);
            }
            let next = members(open).find(|&p| {
                let later = open & graph.neighbors(p) & above(p);
                self.reaches(&graph, chosen | (1u64 << p), later, &target)
            })?;
            chosen |= 1u64 << next;
            open &= graph.neighbors(next) & above(next);
        }
    }

    fn pair_set(&self, set: u64) -> PairSet {
        let m = self.y.len();
        PairSet::new(self.x.len(), m, members(set).map(|p| (p / m, p % m))).expect("indices in range")
    }

    fn witness(&self, set: u64, epsilon: Rational, kind: Distortion) -> Result<OrderWitness> {
        let pairs = self.pair_set(set);
        let (covered, coupling) = max_coupling_mass(self.x, self.y, &pairs)?;
        let dis_value = match kind {
            Distortion::Lipschitz => lip_distortion(self.x, self.y, &pairs)?,
            Distortion::Symmetric => distortion(self.x, self.y, &pairs)?,
        };
        Ok(OrderWitness {
            epsilon,
            pairs,
            coupling,
            dis_value,
            uncovered: Rational::one() - covered,
        })
    }
}

/// Vertices with index greater than `p`.
fn above(p: usize) -> u64 {
    u64::MAX.checked_shl(p as u32 + 1).unwrap_or(0)
}

fn prepare(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<()> {
    x.require_canonical()?;
    y.require_canonical()?;
    budget.check_pairs(x, y, clique::MAX_VERTICES)
}

/// Decides `X ≻_ε Y`, returning the lexicographically least relation that
/// certifies it together with a maximizing coupling.
pub fn check_order(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<Option<OrderWitness>> {
    if epsilon.is_negative() {
        return Err(Error::NegativeParameter("epsilon"));
    }
    prepare(x, y, budget)?;
    let search = RelationSearch::new(x, y, Distortion::Lipschitz);
    search
        .least_relation(epsilon)
        .map(|set| search.witness(set, epsilon.clone(), Distortion::Lipschitz))
        .transpose()
}

/// `□_≻(X, Y) = min{ε ≥ 0 : X ≻_ε Y}` with a witness attaining it.
pub fn unilateral_box(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<(Rational, OrderWitness)> {
    prepare(x, y, budget)?;
    solve(x, y, Distortion::Lipschitz)
}

/// `□(X, Y) = min_S max(dis S, 1 − max_π π(S))` with a witness attaining it.
pub fn box_metric(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<(Rational, OrderWitness)> {
    prepare(x, y, budget)?;
    solve(x, y, Distortion::Symmetric)
}

fn solve(x: &FiniteMMSpace, y: &FiniteMMSpace, kind: Distortion) -> Result<(Rational, OrderWitness)> {
    let search = RelationSearch::new(x, y, kind);
    let value = search.minimum();
    let set = search
        .least_relation(&value)
        .expect("the minimum is attained by some relation");
    let witness = search.witness(set, value.clone(), kind)?;
    Ok((value, witness))
}

const ORACLE_LIMIT: usize = 20;

/// `□_≻` by enumerating every relation. Returns the value and the
/// lexicographically least minimizing relation.
pub fn unilateral_box_oracle(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<(Rational, PairSet)> {
    prepare(x, y, budget)?;
    budget.check_pairs(x, y, ORACLE_LIMIT)?;
    enumerate(x, y, lip_distortion)
}

/// `□` by enumerating every relation.
pub fn box_oracle(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<(Rational, PairSet)> {
    prepare(x, y, budget)?;
    budget.check_pairs(x, y, ORACLE_LIMIT)?;
    enumerate(x, y, distortion)
}

fn enumerate(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    dis: fn(&FiniteMMSpace, &FiniteMMSpace, &PairSet) -> Result<Rational>,
) -> Result<(Rational, PairSet)> {
    let m = y.len();
    let size = x.len() * m;
    let mut best: Option<(Rational, Vec<(usize, usize)>)> = None;
    for mask in 0u64..(1u64 << size) {
        let list: Vec<(usize, usize)> = members(mask).map(|p| (p / m, p % m)).collect();
        let s = PairSet::new(x.len(), m, list.iter().copied())?;
        let (covered, _) = max_coupling_mass(x, y, &s)?;
        let value = core::cmp::max(dis(x, y, &s)?, Rational::one() - covered);
        let better = match &best {
            None => true,
            Some((v, l)) => value < *v || (value == *v && list < *l),
        };
        if better {
            best = Some((value, list));
        }
    }
    let (value, list) = best.expect("at least the empty relation");
    Ok((value, PairSet::new(x.len(), m, list)?))
}

/// Visits every map `X → Y` in lexicographic order of the image vector until
/// `visit` returns `true`.
pub(crate) fn for_each_map(n: usize, m: usize, mut visit: impl FnMut(&[usize]) -> Result<bool>) -> Result<()> {
    let mut image = alloc::vec![0usize; n];
    loop {
        if visit(&image)? {
            return Ok(());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            image[k] += 1;
            if image[k] < m {
                break;
            }
            image[k] = 0;
        }
    }
}

/// A 1-Lipschitz map `f` with `f_* m_X = m_Y` (the classical `X ≻ Y`), the
/// lexicographically least if several exist.
pub fn check_lipschitz_order(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<Option<PointMap>> {
    x.require_canonical()?;
    y.require_canonical()?;
    budget.check_maps(x, y)?;
    let mut image = Vec::with_capacity(x.len());
    let mut load = alloc::vec![Rational::zero(); y.len()];
    if extend_lipschitz(x, y, &mut image, &mut load) {
        Ok(Some(PointMap::new(image, y.len())?))
    } else {
        Ok(None)
    }
}

fn extend_lipschitz(x: &FiniteMMSpace, y: &FiniteMMSpace, image: &mut Vec<usize>, load: &mut [Rational]) -> bool {
    let i = image.len();
    if i == x.len() {
        return load == y.mass();
    }
    for j in 0..y.len() {
        let fits = &load[j] + &x.mass()[i] <= y.mass()[j];
        if !fits || !image.iter().enumerate().all(|(k, &jk)| y.dist(j, jk) <= x.dist(i, k)) {
            continue;
        }
        load[j] += &x.mass()[i];
        image.push(j);
        if extend_lipschitz(x, y, image, load) {
            return true;
        }
        image.pop();
        load[j] -= &x.mass()[i];
    }
    false
}

/// Decides `X ≻^KY_ε Y` by trying every map in lexicographic order.
pub fn check_ky_order(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    epsilon: &Rational,
    budget: &SearchBudget,
) -> Result<Option<KyWitness>> {
    if epsilon.is_negative() {
        return Err(Error::NegativeParameter("epsilon"));
    }
    x.require_canonical()?;
    y.require_canonical()?;
    budget.check_maps(x, y)?;
    let floor = Rational::one() - epsilon;
    let mut found = None;
    for_each_map(x.len(), y.len(), |image| {
        let f = PointMap::new(image.to_vec(), y.len())?;
        let domain_set = maps::max_domain_set(x, y, &f, epsilon)?;
        if x.measure(&domain_set) < floor {
            return Ok(false);
        }
        if &prokhorov(y, &f.pushforward(x.mass())?, y.mass())? > epsilon {
            return Ok(false);
        }
        found = Some(KyWitness {
            map: f,
            domain_set,
            epsilon: epsilon.clone(),
        });
        Ok(true)
    })?;
    Ok(found)
}

/// `□^KY_≻(X, Y) = min_f max(lip-error(f), d_P(f_* m_X, m_Y))`.
pub fn ky_unilateral_box(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: &SearchBudget) -> Result<(Rational, KyWitness)> {
    x.require_canonical()?;
    y.require_canonical()?;
    budget.check_maps(x, y)?;
    let mut best: Option<(Rational, KyWitness)> = None;
    for_each_map(x.len(), y.len(), |image| {
        let f = PointMap::new(image.to_vec(), y.len())?;
        let (error, domain_set) = maps::lipschitz_error(x, y, &f)?;
        if best.as_ref().is_some_and(|(v, _)| &error >= v) {
            return Ok(false);
        }
        let dp = prokhorov(y, &f.pushforward(x.mass())?, y.mass())?;
        let value = core::cmp::max(error, dp);
        if best.as_ref().is_none_or(|(v, _)| &value < v) {
            let done = value.is_zero();
            best = Some((
                value.clone(),
                KyWitness {
                    map: f,
                    domain_set,
                    epsilon: value,
                },
            ));
            return Ok(done);
        }
        Ok(false)
    })?;
    Ok(best.expect("there is at least one map"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pair(d: Rational) -> FiniteMMSpace {
        FiniteMMSpace::from_parts("p", alloc::vec![alloc::vec![int(0), d.clone()], alloc::vec![d, int(0)]], alloc::vec![rat(1, 2), rat(1, 2)]).unwrap()
    }

    fn remark_y(n: i64) -> FiniteMMSpace {
        let side = (int(1) - rat(1, n)) / int(2);
        FiniteMMSpace::on_line("Y", &[rat(-1, 4), int(0), rat(1, 4)], alloc::vec![side.clone(), rat(1, n), side]).unwrap()
    }

    fn limit_y() -> FiniteMMSpace {
        FiniteMMSpace::on_line("Y", &[rat(-1, 4), rat(1, 4)], alloc::vec![rat(1, 2), rat(1, 2)]).unwrap()
    }

    #[test]
    fn distortion_examples() {
        let x = pair(int(1));
        let y = pair(rat(1, 2));
        assert_eq!(distortion(&x, &y, &PairSet::empty(2, 2)).unwrap(), int(0));
        assert_eq!(distortion(&x, &y, &PairSet::new(2, 2, [(0, 1)]).unwrap()).unwrap(), int(0));
        let bij = PairSet::diagonal(2);
        assert_eq!(distortion(&x, &y, &bij).unwrap(), rat(1, 2));
        assert_eq!(lip_distortion(&x, &y, &bij).unwrap(), int(0));
        assert_eq!(lip_distortion(&y, &x, &bij).unwrap(), rat(1, 2));
    }

    #[test]
    fn order_between_points() {
        let p = FiniteMMSpace::point("*");
        let w = check_order(&p, &p, &int(0), &SearchBudget::default()).unwrap().unwrap();
        assert_eq!(w.pairs, PairSet::diagonal(1));
        w.verify(&p, &p).unwrap();
    }

    #[test]
    fn remark_pair_at_quarter() {
        let p = FiniteMMSpace::point("*");
        let y = remark_y(2);
        let b = SearchBudget::default();
        let w = check_order(&p, &y, &rat(1, 4), &b).unwrap().unwrap();
        assert_eq!(w.pairs, PairSet::new(1, 3, [(0, 0), (0, 1)]).unwrap());
        assert_eq!(w.uncovered, rat(1, 4));
        w.verify(&p, &y).unwrap();
        assert!(check_order(&p, &y, &rat(1, 5), &b).unwrap().is_none());
    }

    #[test]
    fn unilateral_box_remark_family() {
        let p = FiniteMMSpace::point("*");
        let b = SearchBudget::default();
        for n in 2..=8 {
            let (v, w) = unilateral_box(&p, &remark_y(n), &b).unwrap();
            assert_eq!(v, rat(n - 1, 2 * n), "n = {n}");
            w.verify(&p, &remark_y(n)).unwrap();
        }
        assert_eq!(unilateral_box(&p, &limit_y(), &b).unwrap().0, rat(1, 2));
        assert_eq!(box_metric(&p, &limit_y(), &b).unwrap().0, rat(1, 2));
        assert_eq!(unilateral_box_oracle(&p, &remark_y(2), &b).unwrap().0, rat(1, 4));
        assert_eq!(box_oracle(&p, &limit_y(), &b).unwrap().0, rat(1, 2));
    }

    #[test]
    fn self_distance_is_zero_with_diagonal() {
        let x = FiniteMMSpace::on_line("x", &[int(0), int(1), int(3)], alloc::vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let b = SearchBudget::default();
        let (v, w) = unilateral_box(&x, &x, &b).unwrap();
        assert_eq!(v, int(0));
        assert_eq!(w.pairs, PairSet::diagonal(3));
        let (v, w) = box_metric(&x, &x, &b).unwrap();
        assert_eq!(v, int(0));
        w.verify_box(&x, &x).unwrap();
        let p = FiniteMMSpace::point("*");
        assert_eq!(unilateral_box_oracle(&p, &p, &b).unwrap().0, int(0));
    }

    #[test]
    fn epsilon_one_accepts_empty_relation() {
        let x = pair(int(1));
        let y = pair(int(7));
        let w = check_order(&x, &y, &int(1), &SearchBudget::default()).unwrap().unwrap();
        assert!(w.pairs.is_empty());
        assert_eq!(w.uncovered, int(1));
    }

    #[test]
    fn budget_is_enforced() {
        let x = FiniteMMSpace::on_line("x", &(0..5).map(int).collect::<Vec<_>>(), alloc::vec![rat(1, 5); 5]).unwrap();
        let err = unilateral_box(&x, &x, &SearchBudget::default()).unwrap_err();
        assert_eq!(err, Error::SizeLimitExceeded { size: 25, limit: 16 });
        let wide = SearchBudget { max_pairs: 25, ..SearchBudget::default() };
        assert_eq!(unilateral_box(&x, &x, &wide).unwrap().0, int(0));
    }

    #[test]
    fn classical_order() {
        let b = SearchBudget::default();
        let x = pair(int(1));
        let y = pair(rat(1, 2));
        assert_eq!(check_lipschitz_order(&x, &y, &b).unwrap(), Some(PointMap::identity(2)));
        assert_eq!(check_lipschitz_order(&y, &x, &b).unwrap(), None);
        assert_eq!(check_lipschitz_order(&x, &x, &b).unwrap(), Some(PointMap::identity(2)));
    }

    #[test]
    fn ky_remark_family() {
        let b = SearchBudget::default();
        let p = FiniteMMSpace::point("*");
        let w = check_ky_order(&p, &remark_y(2), &rat(1, 4), &b).unwrap().unwrap();
        // lexicographically first: the constant map onto index 0
        assert_eq!(w.map.image(), &[0]);
        w.verify(&p, &remark_y(2)).unwrap();
        assert!(check_ky_order(&p, &remark_y(2), &rat(1, 5), &b).unwrap().is_none());
        for n in 2..=8 {
            assert_eq!(ky_unilateral_box(&p, &remark_y(n), &b).unwrap().0, rat(1, 4));
        }
        assert_eq!(ky_unilateral_box(&p, &limit_y(), &b).unwrap().0, rat(1, 2));
        let x = pair(int(1));
        let w = check_ky_order(&x, &x, &int(0), &b).unwrap().unwrap();
        assert_eq!(w.map, PointMap::identity(2));
        assert_eq!(ky_unilateral_box(&x, &x, &b).unwrap().0, int(0));
    }
}
