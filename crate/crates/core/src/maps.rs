//! Maps that are 1-Lipschitz up to an additive error, nets and projections,
//! discretized spaces, and the composition of almost-Lipschitz maps.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::clique::{self, members, Graph};
use crate::error::{Error, Result};
use crate::order::{box_metric, SearchBudget};
use crate::prokhorov::prokhorov;
use crate::rational::{self, int, Rational};
use crate::space::{FiniteMMSpace, PointMap, Subset};

fn check_map(x: &FiniteMMSpace, y: &FiniteMMSpace, f: &PointMap) -> Result<()> {
    if f.domain_len() != x.len() || f.codomain_len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "map",
            expected: x.len() * y.len(),
            found: f.domain_len() * f.codomain_len(),
        });
    }
    Ok(())
}

/// Whether `f` is 1-Lipschitz up to `epsilon` on `domain_set`:
/// `m_X(X_0) ≥ 1 − ε` and `d_Y(f(x), f(x')) ≤ d_X(x, x') + ε` on `X_0 × X_0`.
pub fn lip_up_to_check(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    f: &PointMap,
    domain_set: &Subset,
    epsilon: &Rational,
) -> Result<bool> {
    check_map(x, y, f)?;
    if domain_set.universe() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "domain set",
            expected: x.len(),
            found: domain_set.universe(),
        });
    }
    if x.measure(domain_set) < Rational::one() - epsilon {
        return Ok(false);
    }
    let pts: Vec<usize> = domain_set.iter().collect();
    Ok(pts.iter().all(|&a| {
        pts.iter()
            .all(|&b| y.dist(f.apply(a), f.apply(b)) <= &(x.dist(a, b) + epsilon))
    }))
}

fn stretch_graph(x: &FiniteMMSpace, y: &FiniteMMSpace, f: &PointMap, epsilon: &Rational) -> Graph {
    Graph::from_fn(x.len(), |a, b| y.dist(f.apply(a), f.apply(b)) <= &(x.dist(a, b) + epsilon))
}

fn check_clique_size(x: &FiniteMMSpace) -> Result<()> {
    if x.len() > clique::MAX_VERTICES {
        return Err(Error::SizeLimitExceeded {
            size: x.len() as u128,
            limit: clique::MAX_VERTICES as u128,
        });
    }
    Ok(())
}

/// The heaviest `X_0` on which `f` stretches distances by at most `epsilon`.
pub fn max_domain_set(x: &FiniteMMSpace, y: &FiniteMMSpace, f: &PointMap, epsilon: &Rational) -> Result<Subset> {
    check_map(x, y, f)?;
    check_clique_size(x)?;
    let graph = stretch_graph(x, y, f, epsilon);
    let (_, set) = clique::max_weight_clique(&graph, x.mass());
    x.subset(members(set))
}

/// The least `ε` for which `f` is 1-Lipschitz up to `ε`, with a set `X_0`
/// attaining it.
pub fn lipschitz_error(x: &FiniteMMSpace, y: &FiniteMMSpace, f: &PointMap) -> Result<(Rational, Subset)> {
    check_map(x, y, f)?;
    check_clique_size(x)?;
    let n = x.len();
    let mut levels = Vec::new();
    levels.push(Rational::zero());
    for a in 0..n {
        for b in a + 1..n {
            let gap = y.dist(f.apply(a), f.apply(b)) - x.dist(a, b);
            if gap.is_positive() {
                levels.push(gap);
            }
        }
    }
    let mut best: Option<(Rational, u64)> = None;
    for e in rational::distinct(levels) {
        if best.as_ref().is_some_and(|(v, _)| &e >= v) {
            break;
        }
        let graph = stretch_graph(x, y, f, &e);
        let (mass, set) = clique::max_weight_clique(&graph, x.mass());
        let value = core::cmp::max(e, Rational::one() - mass);
        if best.as_ref().is_none_or(|(v, _)| &value < v) {
            best = Some((value, set));
        }
    }
    let (value, set) = best.expect("zero is always a level");
    Ok((value, x.subset(members(set))?))
}

/// The least `ε` with `X ≻^KY_ε Y` witnessed by this particular `f`, i.e.
/// `max(lipschitz_error(f), d_P(f_* m_X, m_Y))`, and the set `X_0` used.
pub fn ky_error(x: &FiniteMMSpace, y: &FiniteMMSpace, f: &PointMap) -> Result<(Rational, Subset)> {
    let (error, set) = lipschitz_error(x, y, f)?;
    let dp = prokhorov(y, &f.pushforward(x.mass())?, y.mass())?;
    Ok((core::cmp::max(error, dp), set))
}

/// Greedy net: points are added in order of decreasing mass (ties by index)
/// until `m_X(B_{t/2}(N)) ≥ 1 − t/2`. The net is never empty.
pub fn epsilon_net(x: &FiniteMMSpace, t: &Rational) -> Result<Subset> {
    if !t.is_positive() {
        return Err(Error::PreconditionViolated(String::from("net scale t must be positive")));
    }
    let radius = t / int(2);
    let target = Rational::one() - &radius;
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x.mass()[b].cmp(&x.mass()[a]).then(a.cmp(&b)));
    let mut chosen = Vec::new();
    for p in order {
        chosen.push(p);
        let net = x.subset(chosen.iter().copied())?;
        if x.measure(&x.neighborhood(&net, &radius, true)?) >= target {
            return Ok(net);
        }
    }
    x.subset(chosen)
}

/// Sends each point to its nearest net point, ties to the lowest index.
pub fn nearest_projection(x: &FiniteMMSpace, net: &Subset) -> Result<PointMap> {
    if net.is_empty() {
        return Err(Error::EmptyNet);
    }
    if net.universe() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "net",
            expected: x.len(),
            found: net.universe(),
        });
    }
    let image = (0..x.len())
        .map(|p| {
            net.iter()
                .min_by(|&a, &b| x.dist(p, a).cmp(x.dist(p, b)).then(a.cmp(&b)))
                .expect("nonempty net")
        })
        .collect();
    PointMap::new(image, x.len())
}

/// A `t`-projection onto `subset`. The exact nearest projection qualifies for
/// every `t ≥ 0` on a finite space, so `t` only enters bound bookkeeping.
pub fn t_projection(y: &FiniteMMSpace, subset: &Subset, t: &Rational) -> Result<PointMap> {
    if t.is_negative() {
        return Err(Error::NegativeParameter("t"));
    }
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    nearest_projection(y, subset)
}

/// A finite skeleton `Ẋ = (N, d_X, (π_N)_* m_X)` of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discretization {
    pub t: Rational,
    pub net: Subset,
    pub space: FiniteMMSpace,
    /// `X → Ẋ`, indices into the net in increasing order.
    pub projection: PointMap,
    /// `d_P((π_N)_* m_X, m_X)`, at most `t/2`.
    pub prokhorov: Rational,
}

impl Discretization {
    /// Computes `□(X, Ẋ)` and checks it against `t`.
    pub fn verify_box(&self, x: &FiniteMMSpace, budget: &SearchBudget) -> Result<Rational> {
        let (value, _) = box_metric(x, &self.space, budget)?;
        if value > self.t {
            return Err(Error::BoundViolated(format!("box distance {} to the discretization exceeds t = {}", value, self.t)));
        }
        Ok(value)
    }
}

pub fn discretize(x: &FiniteMMSpace, t: &Rational) -> Result<Discretization> {
    x.require_canonical()?;
    let net = epsilon_net(x, t)?;
    let onto_net = nearest_projection(x, &net)?;
    let pushed = onto_net.pushforward(x.mass())?;
    let prok = prokhorov(x, &pushed, x.mass())?;
    let half = t / int(2);
    if prok > half {
        return Err(Error::BoundViolated(format!("projection moves the measure by {prok}, more than t/2 = {half}")));
    }
    let keep: Vec<usize> = net.iter().collect();
    let position = |p: usize| keep.iter().position(|&q| q == p).expect("image lies in the net");
    let projection = PointMap::new((0..x.len()).map(|p| position(onto_net.apply(p))).collect(), keep.len())?;
    let space = FiniteMMSpace::new(
        format!("{}-net", x.label()),
        keep.iter().map(|&p| x.points()[p].clone()).collect(),
        keep.iter().map(|&a| keep.iter().map(|&b| x.dist(a, b).clone()).collect()).collect(),
        keep.iter().map(|&p| pushed[p].clone()).collect(),
    )?;
    Ok(Discretization {
        t: t.clone(),
        net,
        space,
        projection,
        prokhorov: prok,
    })
}

/// Inputs of [`compose_lip_up_to`]: `f: X → Y` 1-Lipschitz up to `eps1` on
/// `x0`, `g: Y → Z` 1-Lipschitz up to `eps2` on `y0`.
#[derive(Debug, Clone)]
pub struct AlmostLipschitz<'a> {
    pub map: &'a PointMap,
    pub domain_set: &'a Subset,
    pub epsilon: &'a Rational,
}

/// The composed map `h = g ∘ π ∘ f` and the verified bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    pub map: PointMap,
    /// `s / 8`.
    pub t: Rational,
    /// The projection of `Y` onto `Y_0`.
    pub projection: PointMap,
    /// `X̃_0 = X_0 ∩ f⁻¹(B_t(Y_0))`.
    pub constructed_set: Subset,
    /// The set on which the Lipschitz bound was verified. Equal to
    /// `constructed_set` unless that set is too light, in which case it is the
    /// heaviest set on which `h` satisfies the bound.
    pub domain_set: Subset,
    pub lip_bound: Rational,
    pub domain_mass: Rational,
    pub mass_bound: Rational,
    pub prokhorov: Rational,
    pub prokhorov_bound: Rational,
}

impl CompositionReport {
    pub fn used_constructed_set(&self) -> bool {
        self.domain_set == self.constructed_set
    }
}

/// Composes two almost-Lipschitz maps through a `t`-projection onto `Y_0`
/// with `t = s/8`, and verifies that `h` is 1-Lipschitz up to
/// `eps1 + eps2 + s` and that `d_P(h_* m_X, m_Z) ≤ eps1 + 4 eps2 + s`.
pub fn compose_lip_up_to(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    z: &FiniteMMSpace,
    f: AlmostLipschitz<'_>,
    g: AlmostLipschitz<'_>,
    s: &Rational,
) -> Result<CompositionReport> {
    for space in [x, y, z] {
        space.require_canonical()?;
    }
    let fail = |msg: String| Err(Error::PreconditionViolated(msg));
    if !s.is_positive() {
        return fail(String::from("s must be positive"));
    }
    if f.epsilon.is_negative() || g.epsilon.is_negative() {
        return fail(String::from("eps1 and eps2 must be nonnegative"));
    }
    if !lip_up_to_check(x, y, f.map, f.domain_set, f.epsilon)? {
        return fail(format!("f is not 1-Lipschitz up to eps1 = {} on X0", f.epsilon));
    }
    if !lip_up_to_check(y, z, g.map, g.domain_set, g.epsilon)? {
        return fail(format!("g is not 1-Lipschitz up to eps2 = {} on Y0", g.epsilon));
    }
    let dp_f = prokhorov(y, &f.map.pushforward(x.mass())?, y.mass())?;
    if &dp_f > f.epsilon {
        return fail(format!("d_P(f_* m_X, m_Y) = {dp_f} exceeds eps1 = {}", f.epsilon));
    }
    let dp_g = prokhorov(z, &g.map.pushforward(y.mass())?, z.mass())?;
    if &dp_g > g.epsilon {
        return fail(format!("d_P(g_* m_Y, m_Z) = {dp_g} exceeds eps2 = {}", g.epsilon));
    }
    if g.domain_set.is_empty() {
        return fail(String::from("Y0 must be nonempty"));
    }

    let t = s / int(8);
    let projection = t_projection(y, g.domain_set, &t)?;
    let near = y.neighborhood(g.domain_set, &t, true)?;
    let constructed_set = f.domain_set.intersection(&f.map.inverse_image(&near));
    let map = f.map.then(&projection)?.then(g.map)?;

    let lip_bound = f.epsilon + g.epsilon + s;
    let mass_bound = Rational::one() - &lip_bound;
    let prokhorov_bound = f.epsilon + g.epsilon * int(4) + s;

    let domain_set = if lip_up_to_check(x, z, &map, &constructed_set, &lip_bound)? {
        constructed_set.clone()
    } else {
        let heaviest = max_domain_set(x, z, &map, &lip_bound)?;
        if !lip_up_to_check(x, z, &map, &heaviest, &lip_bound)? {
            return Err(Error::BoundViolated(format!("h is not 1-Lipschitz up to {lip_bound}")));
        }
        heaviest
    };
    let dp_h = prokhorov(z, &map.pushforward(x.mass())?, z.mass())?;
    if dp_h > prokhorov_bound {
        return Err(Error::BoundViolated(format!("d_P(h_* m_X, m_Z) = {dp_h} exceeds {prokhorov_bound}")));
    }
    Ok(CompositionReport {
        map,
        t,
        projection,
        domain_mass: x.measure(&domain_set),
        constructed_set,
        domain_set,
        lip_bound,
        mass_bound,
        prokhorov: dp_h,
        prokhorov_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::vec;

    fn uniform_line(coords: &[Rational]) -> FiniteMMSpace {
        let n = coords.len() as i64;
        FiniteMMSpace::on_line("L", coords, (0..n).map(|_| rat(1, n)).collect()).unwrap()
    }

    #[test]
    fn lip_check_examples() {
        let x = uniform_line(&[int(0), rat(1, 2)]);
        let y = uniform_line(&[int(0), int(1)]);
        let id = PointMap::identity(2);
        assert!(lip_up_to_check(&x, &x, &id, &x.full(), &int(0)).unwrap());
        // doubling a gap of 1/2 stretches by exactly 1/2
        assert!(lip_up_to_check(&x, &y, &id, &x.full(), &rat(1, 2)).unwrap());
        assert!(!lip_up_to_check(&x, &y, &id, &x.full(), &rat(1, 4)).unwrap());
        let single = x.subset([0]).unwrap();
        assert!(lip_up_to_check(&x, &y, &id, &single, &rat(1, 2)).unwrap());
        assert!(!lip_up_to_check(&x, &y, &id, &single, &rat(1, 3)).unwrap());
    }

    #[test]
    fn lipschitz_error_of_doubling() {
        let x = uniform_line(&[int(0), rat(1, 2)]);
        let y = uniform_line(&[int(0), int(1)]);
        let (e, set) = lipschitz_error(&x, &y, &PointMap::identity(2)).unwrap();
        assert_eq!(e, rat(1, 2));
        assert!(lip_up_to_check(&x, &y, &PointMap::identity(2), &set, &e).unwrap());
    }

    #[test]
    fn nets() {
        let x = uniform_line(&[int(0), rat(1, 2), int(1)]);
        assert_eq!(epsilon_net(&x, &rat(1, 2)).unwrap(), x.full());
        assert_eq!(epsilon_net(&x, &int(2)).unwrap(), x.subset([0]).unwrap());
        let heavy_last = FiniteMMSpace::on_line("h", &[int(0), int(1)], vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(epsilon_net(&heavy_last, &int(2)).unwrap(), heavy_last.subset([1]).unwrap());
        assert_eq!(epsilon_net(&x, &rat(1, 100)).unwrap(), x.full());
        assert!(epsilon_net(&x, &int(0)).is_err());
    }

    #[test]
    fn projections() {
        let x = uniform_line(&[int(0), rat(1, 2), int(1)]);
        assert_eq!(nearest_projection(&x, &x.full()).unwrap(), PointMap::identity(3));
        assert_eq!(nearest_projection(&x, &x.subset([2]).unwrap()).unwrap().image(), &[2, 2, 2]);
        // the middle point is equidistant from both net points
        assert_eq!(nearest_projection(&x, &x.subset([0, 2]).unwrap()).unwrap().image(), &[0, 0, 2]);
        assert_eq!(nearest_projection(&x, &Subset::empty(3)).unwrap_err(), Error::EmptyNet);
        assert_eq!(t_projection(&x, &Subset::empty(3), &int(0)).unwrap_err(), Error::EmptySubset);
        let y0 = x.subset([1]).unwrap();
        let p = t_projection(&x, &y0, &rat(1, 8)).unwrap();
        assert_eq!(p.then(&p).unwrap(), p);
        assert_eq!(x.dist(0, p.apply(0)), &rat(1, 2));
    }

    #[test]
    fn discretize_line() {
        let x = uniform_line(&[int(0), rat(1, 4), rat(1, 2)]);
        let d = discretize(&x, &rat(1, 2)).unwrap();
        assert_eq!(d.net, x.subset([0, 1]).unwrap());
        assert_eq!(d.space.mass(), &[rat(1, 3), rat(2, 3)]);
        assert_eq!(d.projection.image(), &[0, 1, 1]);
        assert!(d.prokhorov <= rat(1, 4));
        assert!(d.verify_box(&x, &SearchBudget::default()).unwrap() <= rat(1, 2));

        let coarse = discretize(&x, &int(1)).unwrap();
        assert_eq!(coarse.space.len(), 1);
        assert_eq!(coarse.space.mass(), &[int(1)]);

        let fine = discretize(&x, &rat(1, 100)).unwrap();
        assert!(fine.space.isomorphism_to(&x).unwrap().is_some());
    }

    #[test]
    fn composition_of_lipschitz_maps() {
        let x = uniform_line(&[int(0), int(1), int(3)]);
        let y = uniform_line(&[int(0), rat(1, 2), int(1)]);
        let id = PointMap::identity(3);
        let zero = int(0);
        let full_x = x.full();
        let full_y = y.full();
        let scaled = y.scaled(&rat(1, 2));
        let report = compose_lip_up_to(
            &x,
            &y,
            &scaled,
            AlmostLipschitz { map: &id, domain_set: &full_x, epsilon: &zero },
            AlmostLipschitz { map: &id, domain_set: &full_y, epsilon: &zero },
            &rat(1, 10),
        )
        .unwrap();
        assert_eq!(report.map, id);
        assert_eq!(report.projection, PointMap::identity(3));
        assert!(report.used_constructed_set());
        assert_eq!(report.prokhorov, int(0));
    }

    #[test]
    fn composition_beats_direct_composite() {
        let x = uniform_line(&[int(0), rat(1, 4)]);
        let y = FiniteMMSpace::on_line("Y", &[int(0), rat(1, 4)], vec![rat(3, 4), rat(1, 4)]).unwrap();
        let z = y.scaled(&int(16));
        let id = PointMap::identity(2);
        let (e1, x0) = ky_error(&x, &y, &id).unwrap();
        let (e2, y0) = ky_error(&y, &z, &id).unwrap();
        assert_eq!((e1.clone(), e2.clone()), (rat(1, 4), rat(1, 4)));
        // the direct composite needs ε ≥ 1/2
        assert_eq!(lipschitz_error(&x, &z, &id).unwrap().0, rat(1, 2));
        let s = rat(1, 10);
        let report = compose_lip_up_to(
            &x,
            &y,
            &z,
            AlmostLipschitz { map: &id, domain_set: &x0, epsilon: &e1 },
            AlmostLipschitz { map: &id, domain_set: &y0, epsilon: &e2 },
            &s,
        )
        .unwrap();
        assert_eq!(report.map.image(), &[0, 0]);
        assert!(report.used_constructed_set());
        assert!(report.domain_mass >= report.mass_bound);
        assert!(report.prokhorov <= report.prokhorov_bound);
        for eps in [rat(1, 4), rat(49, 100)] {
            assert!(max_domain_set(&x, &z, &id, &eps).map(|d| x.measure(&d) < int(1) - &eps).unwrap());
        }
    }

    #[test]
    fn composition_with_full_y0_keeps_direct_composite() {
        let x = uniform_line(&[int(0), int(1)]);
        let id = PointMap::identity(2);
        let zero = int(0);
        let full = x.full();
        let report = compose_lip_up_to(
            &x,
            &x,
            &x,
            AlmostLipschitz { map: &id, domain_set: &full, epsilon: &zero },
            AlmostLipschitz { map: &id, domain_set: &full, epsilon: &zero },
            &rat(1, 2),
        )
        .unwrap();
        assert_eq!(report.projection, id);
        assert_eq!(report.map, id.then(&id).unwrap());
    }

    #[test]
    fn composition_rejects_bad_hypotheses() {
        let x = uniform_line(&[int(0), rat(1, 2)]);
        let y = uniform_line(&[int(0), int(1)]);
        let id = PointMap::identity(2);
        let zero = int(0);
        let full = x.full();
        let err = compose_lip_up_to(
            &x,
            &y,
            &y,
            AlmostLipschitz { map: &id, domain_set: &full, epsilon: &zero },
            AlmostLipschitz { map: &id, domain_set: &full, epsilon: &zero },
            &int(1),
        )
        .unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated(ref m) if m.starts_with("f is not")));
    }
}
