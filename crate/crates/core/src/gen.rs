//! Deterministic instance generators.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};
use crate::space::{FiniteMMSpace, PointMap};

pub const DEFAULT_MASS_GRANULARITY: u32 = 64;

/// The counterexample family on `{−r, 0, r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remark46 {
    pub x: FiniteMMSpace,
    pub y: FiniteMMSpace,
    pub x_limit: FiniteMMSpace,
    pub y_limit: FiniteMMSpace,
}

/// `X_n = X_lim = {pt}`, `Y_n = ½(1 − 1/n)(δ_{−r} + δ_r) + (1/n) δ_0`,
/// `Y_lim = ½(δ_{−r} + δ_r)`.
pub fn remark46(n: u32, r: &Rational) -> Result<Remark46> {
    if n < 2 {
        return Err(Error::PreconditionViolated("n must be at least 2, got {n}".into()));
    }
    if *r <= Rational::zero() {
        return Err(Error::PreconditionViolated("r must be positive, got {r}".into()));
    }
    let n = i64::from(n);
    let side = (int(1) - rat(1, n)) / int(2);
    let y = FiniteMMSpace::on_line(format!("Y_{n}"), &[-r.clone(), int(0), r.clone()], alloc::vec![side.clone(), rat(1, n), side])?;
    let y_limit = FiniteMMSpace::on_line("Y_lim", &[-r.clone(), r.clone()], alloc::vec![rat(1, 2), rat(1, 2)])?;
    Ok(Remark46 {
        x: FiniteMMSpace::point(format!("X_{n}")),
        y,
        x_limit: FiniteMMSpace::point("X_lim"),
        y_limit,
    })
}

/// A random canonical space on `n` points. Each distance is drawn from
/// `{1/4, 2/4, 3/4, 1} · diam_bound` and the matrix is then replaced by its
/// shortest-path closure; weights are drawn from `1..=granularity` and
/// normalized.
pub fn random(seed: u64, n: usize, diam_bound: &Rational, granularity: u32) -> Result<FiniteMMSpace> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    if *diam_bound <= Rational::zero() {
        return Err(Error::PreconditionViolated("diameter bound must be positive, got {diam_bound}".into()));
    }
    if granularity == 0 {
        return Err(Error::PreconditionViolated("mass granularity must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dist = alloc::vec![alloc::vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = diam_bound * rat(rng.gen_range(1..=4), 4);
            dist[i][j] = d.clone();
            dist[j][i] = d;
        }
    }
    shortest_paths(&mut dist);
    let weights: Vec<i64> = (0..n).map(|_| i64::from(rng.gen_range(1..=granularity))).collect();
    let total: i64 = weights.iter().sum();
    let mass = weights.iter().map(|&w| rat(w, total)).collect();
    FiniteMMSpace::from_parts(format!("random-{seed}"), dist, mass)
}

fn shortest_paths(dist: &mut [Vec<Rational>]) {
    let n = dist.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = &dist[i][k] + &dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
}

/// Same points and masses, distances multiplied by `factor > 0`.
pub fn scaled(x: &FiniteMMSpace, factor: &Rational) -> Result<FiniteMMSpace> {
    x.require_canonical()?;
    if *factor <= Rational::zero() {
        return Err(Error::PreconditionViolated("scale factor must be positive, got {factor}".into()));
    }
    Ok(x.scaled(factor))
}

fn uniform(n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(1, n as i64)).collect()
}

/// The path graph on `n ≥ 1` vertices with unit edges and uniform mass.
pub fn path(n: usize) -> Result<FiniteMMSpace> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    let dist = (0..n).map(|i| (0..n).map(|j| int(i.abs_diff(j) as i64)).collect()).collect();
    FiniteMMSpace::from_parts(format!("path-{n}"), dist, uniform(n))
}

/// The cycle graph on `n ≥ 1` vertices with unit edges and uniform mass.
pub fn cycle(n: usize) -> Result<FiniteMMSpace> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be at least 1".into()));
    }
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = i.abs_diff(j);
                    int(d.min(n - d) as i64)
                })
                .collect()
        })
        .collect();
    FiniteMMSpace::from_parts(format!("cycle-{n}"), dist, uniform(n))
}

/// A random quotient `Y` of `X` with the surjection `f: X → Y`.
///
/// Points of `X` are sorted into random classes; `Y` carries the largest
/// metric below the distances between classes and the pushforward mass, so
/// `f` is 1-Lipschitz and `X` dominates `Y`.
pub fn quotient(seed: u64, x: &FiniteMMSpace) -> Result<(FiniteMMSpace, PointMap)> {
    x.require_canonical()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = x.len();
    let classes = rng.gen_range(1..=n);
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..classes)).collect();
    let mut used: Vec<usize> = raw.clone();
    used.sort_unstable();
    used.dedup();
    let image: Vec<usize> = raw.iter().map(|c| used.binary_search(c).expect("label in use")).collect();
    let m = used.len();
    let f = PointMap::new(image, m)?;

    let mut dist: Vec<Vec<Option<Rational>>> = alloc::vec![alloc::vec![None; m]; m];
    for a in 0..n {
        for b in 0..n {
            let (p, q) = (f.apply(a), f.apply(b));
            if p != q && dist[p][q].as_ref().is_none_or(|d| x.dist(a, b) < d) {
                dist[p][q] = Some(x.dist(a, b).clone());
            }
        }
    }
    let mut dist: Vec<Vec<Rational>> = dist
        .into_iter()
        .map(|row| row.into_iter().map(|d| d.unwrap_or_else(Rational::zero)).collect())
        .collect();
    shortest_paths(&mut dist);
    let y = FiniteMMSpace::from_parts(format!("{}-quotient-{seed}", x.label()), dist, f.pushforward(x.mass())?)?;
    Ok((y, f))
}

/// `1 / 2 (1 − 1/n)`.
pub fn remark46_value(n: u32) -> Rational {
    (Rational::one() - rat(1, i64::from(n))) / int(2)
}
