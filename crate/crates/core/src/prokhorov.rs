//! Prokhorov distance between two measures on one finite metric space, and
//! the Ky Fan distance between two maps.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::flow::Marginals;
use crate::rational::{self, int, Rational};
use crate::space::{validate_mass, FiniteMMSpace, PointMap, Subset};

/// `d_P(μ, ν) = inf{ε > 0 : μ(U_ε(A)) ≥ ν(A) − ε for all A}`.
///
/// Only the metric of `space` is used; its own masses are ignored, and `mu`
/// and `nu` may have zero entries.
///
/// Let `F(t)` be the largest mass a coupling of `μ` and `ν` can put on pairs at
/// distance `≤ t`. The condition holds at `ε` exactly when the flow on pairs
/// at distance `< ε` reaches `1 − ε`, and that set of pairs only changes at
/// distance values, so the infimum is `min_t max(t, 1 − F(t))` over
/// `t ∈ {0} ∪ {distances}`.
pub fn prokhorov(space: &FiniteMMSpace, mu: &[Rational], nu: &[Rational]) -> Result<Rational> {
    validate_mass(mu, space.len())?;
    validate_mass(nu, space.len())?;
    if mu == nu {
        return Ok(Rational::zero());
    }
    let n = space.len();
    let marginals = Marginals::new(mu, nu);
    let mut best = Rational::one();
    for t in thresholds(space) {
        if t >= best {
            break;
        }
        let mask: Vec<bool> = (0..n * n).map(|k| space.dist(k / n, k % n) <= &t).collect();
        let uncovered = Rational::one() - marginals.value(&mask);
        let candidate = core::cmp::max(t, uncovered);
        if candidate < best {
            best = candidate;
        }
    }
    Ok(best)
}

fn thresholds(space: &FiniteMMSpace) -> Vec<Rational> {
    let mut values: Vec<Rational> = space.distances().iter().flatten().cloned().collect();
    values.push(Rational::zero());
    rational::distinct(values)
}

/// The Prokhorov distance evaluated straight from its definition, by checking
/// every subset `A` at every candidate `ε`. Exponential; limited to six points.
pub fn prokhorov_by_subsets(space: &FiniteMMSpace, mu: &[Rational], nu: &[Rational]) -> Result<Rational> {
    const LIMIT: usize = 6;
    let n = space.len();
    if n > LIMIT {
        return Err(Error::SizeLimitExceeded {
            size: n as u128,
            limit: LIMIT as u128,
        });
    }
    validate_mass(mu, n)?;
    validate_mass(nu, n)?;
    let subsets: Vec<Subset> = (0u32..1 << n)
        .map(|mask| Subset::new(n, (0..n).filter(|i| mask & (1 << i) != 0)).unwrap())
        .collect();
    let measure = |m: &[Rational], s: &Subset| rational::sum(s.iter().map(|i| &m[i]));

    // The truth of the condition can only change at a distance value or where
    // ε = ν(A) − μ(B) for some pair of subsets.
    let mut candidates: Vec<Rational> = space.distances().iter().flatten().cloned().collect();
    candidates.push(Rational::zero());
    for a in &subsets {
        for b in &subsets {
            let c = measure(nu, a) - measure(mu, b);
            if c > Rational::zero() {
                candidates.push(c);
            }
        }
    }
    let candidates = rational::distinct(candidates);

    let holds = |eps: &Rational| -> bool {
        subsets.iter().all(|a| {
            let grown = space.neighborhood(a, eps, false).unwrap();
            measure(mu, &grown) >= measure(nu, a) - eps
        })
    };
    for (k, c) in candidates.iter().enumerate() {
        if c > &Rational::zero() && holds(c) {
            return Ok(c.clone());
        }
        let probe = match candidates.get(k + 1) {
            Some(next) => (c + next) / int(2),
            None => c + int(1),
        };
        if holds(&probe) {
            return Ok(c.clone());
        }
    }
    unreachable!("the condition holds for every ε ≥ 1")
}

/// `d_KF(f, g) = min{ε ≥ 0 : m({x : d(f(x), g(x)) > ε}) ≤ ε}`.
pub fn ky_fan(mass: &[Rational], f: &PointMap, g: &PointMap, codomain: &FiniteMMSpace) -> Result<Rational> {
    if f.domain_len() != mass.len() || g.domain_len() != mass.len() {
        return Err(Error::DimensionMismatch {
            what: "ky fan domain",
            expected: mass.len(),
            found: f.domain_len().min(g.domain_len()),
        });
    }
    if f.codomain_len() != codomain.len() || g.codomain_len() != codomain.len() {
        return Err(Error::DimensionMismatch {
            what: "ky fan codomain",
            expected: codomain.len(),
            found: f.codomain_len(),
        });
    }
    let gaps: Vec<&Rational> = (0..mass.len())
        .map(|x| codomain.dist(f.apply(x), g.apply(x)))
        .collect();
    let excess = |eps: &Rational| -> Rational {
        rational::sum(
            gaps.iter()
                .zip(mass)
                .filter(|(d, _)| **d > eps)
                .map(|(_, m)| m),
        )
    };
    let mut candidates: Vec<Rational> = gaps.iter().map(|&d| d.clone()).collect();
    candidates.push(Rational::zero());
    let levels: Vec<Rational> = candidates.iter().map(&excess).collect();
    candidates.extend(levels);
    for c in rational::distinct(candidates) {
        if excess(&c) <= c {
            return Ok(c);
        }
    }
    unreachable!("ε = total mass always satisfies the condition")
}
