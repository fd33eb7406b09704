//! Named verification suites. Each suite runs seeded trials (trial `k` uses
//! seed `base + k`) and checks exact inequalities between solver outputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmlip_core::gen;
use mmlip_core::maps::{self, AlmostLipschitz};
use mmlip_core::order::{self, SearchBudget};
use mmlip_core::prokhorov::{ky_fan, prokhorov, prokhorov_by_subsets};
use mmlip_core::rational::{int, rat, Rational};
use mmlip_core::transport::{compose, compose_pair_sets, glue, max_coupling_mass};
use mmlip_core::{Coupling, FiniteMMSpace, OrderWitness, PairSet, PointMap, ProductL1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Triangle,
    OrderZero,
    BoxBounds,
    ProkhorovOracle,
    KyImplications,
    Gluing,
    Lemma32,
    Semicontinuity,
    Remark46,
    Oracle,
    LipCompose,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Triangle,
        Suite::OrderZero,
        Suite::BoxBounds,
        Suite::ProkhorovOracle,
        Suite::KyImplications,
        Suite::Gluing,
        Suite::Lemma32,
        Suite::Semicontinuity,
        Suite::Remark46,
        Suite::Oracle,
        Suite::LipCompose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Triangle => "triangle",
            Suite::OrderZero => "order-zero",
            Suite::BoxBounds => "box-bounds",
            Suite::ProkhorovOracle => "prokhorov-oracle",
            Suite::KyImplications => "ky-implications",
            Suite::Gluing => "gluing",
            Suite::Lemma32 => "lemma32",
            Suite::Semicontinuity => "semicontinuity",
            Suite::Remark46 => "remark46",
            Suite::Oracle => "oracle",
            Suite::LipCompose => "lip-compose",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Triangle | Suite::BoxBounds | Suite::KyImplications | Suite::Gluing | Suite::Lemma32 | Suite::Oracle => 200,
            Suite::OrderZero | Suite::ProkhorovOracle => 100,
            Suite::LipCompose => 50,
            Suite::Remark46 => 7,
            Suite::Semicontinuity => 15,
        }
    }

    fn trial(self) -> fn(usize, u64, &SearchBudget) -> Trial {
        match self {
            Suite::Triangle => triangle,
            Suite::OrderZero => order_zero,
            Suite::BoxBounds => box_bounds,
            Suite::ProkhorovOracle => prokhorov_oracle,
            Suite::KyImplications => ky_implications,
            Suite::Gluing => gluing,
            Suite::Lemma32 => lemma32,
            Suite::Semicontinuity => semicontinuity,
            Suite::Remark46 => remark46,
            Suite::Oracle => oracle,
            Suite::LipCompose => lip_compose,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Outcome of one trial: tags to count on success, a message on failure.
type Trial = Result<Vec<&'static str>, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<Failure>,
    pub tags: BTreeMap<&'static str, usize>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} trials from seed {}, {} failures",
            self.suite,
            self.trials,
            self.seed,
            self.failures.len()
        )?;
        for (tag, count) in &self.tags {
            write!(f, ", {tag}={count}")?;
        }
        for fail in &self.failures {
            write!(f, "\n  trial {} (seed {}): {}", fail.trial, fail.seed, fail.message)?;
        }
        Ok(())
    }
}

/// Runs `trials` trials on all available cores; results are gathered by
/// trial index, so the report does not depend on scheduling.
pub fn run(suite: Suite, trials: usize, seed: u64, budget: &SearchBudget) -> SuiteReport {
    let trial = suite.trial();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(trials.max(1));
    let mut results: Vec<(usize, Trial)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..trials)
                        .step_by(workers)
                        .map(|k| (k, trial(k, seed.wrapping_add(k as u64), budget)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trial panicked")).collect()
    });
    results.sort_by_key(|(k, _)| *k);
    let mut report = SuiteReport {
        suite,
        trials,
        seed,
        failures: Vec::new(),
        tags: BTreeMap::new(),
    };
    for (k, result) in results {
        match result {
            Ok(tags) => {
                for tag in tags {
                    *report.tags.entry(tag).or_default() += 1;
                }
            }
            Err(message) => report.failures.push(Failure {
                trial: k,
                seed: seed.wrapping_add(k as u64),
                message,
            }),
        }
    }
    report
}

trait Context<T> {
    fn ctx(self, what: &str) -> Result<T, String>;
}

impl<T> Context<T> for mmlip_core::Result<T> {
    fn ctx(self, what: &str) -> Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn is_zero(r: &Rational) -> bool {
    *r == int(0)
}

fn fmt(r: &Rational) -> String {
    mmlip_core::rational::format(r)
}

/// Seeded source of small random instances.
pub struct Instances {
    rng: ChaCha8Rng,
}

impl Instances {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn choose<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.gen_range(0..items.len())].clone()
    }

    pub fn space(&mut self, max_points: usize) -> FiniteMMSpace {
        let n = self.rng.gen_range(1..=max_points);
        let diam = self.choose(&[rat(1, 2), int(1), int(2)]);
        let granularity = self.choose(&[4, 8, gen::DEFAULT_MASS_GRANULARITY]);
        let seed = self.rng.gen();
        gen::random(seed, n, &diam, granularity).expect("valid generator parameters")
    }

    /// A probability vector on `n` points with weights in `0..=8` (or `1..=8`
    /// when `positive`).
    pub fn measure(&mut self, n: usize, positive: bool) -> Vec<Rational> {
        let low = u32::from(positive);
        loop {
            let w: Vec<i64> = (0..n).map(|_| i64::from(self.rng.gen_range(low..=8))).collect();
            let total: i64 = w.iter().sum();
            if total > 0 {
                return w.iter().map(|&v| rat(v, total)).collect();
            }
        }
    }

    pub fn pair_set(&mut self, rows: usize, cols: usize) -> PairSet {
        let pairs: Vec<(usize, usize)> = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .filter(|_| self.rng.gen_bool(0.5))
            .collect();
        PairSet::new(rows, cols, pairs).expect("pairs in range")
    }

    pub fn map(&mut self, domain: usize, codomain: usize) -> PointMap {
        PointMap::new((0..domain).map(|_| self.rng.gen_range(0..codomain)).collect(), codomain).expect("image in range")
    }

    /// A coupling of the two masses: a mixture of two flow couplings.
    pub fn coupling(&mut self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Coupling {
        let (_, a) = max_coupling_mass(x, y, &self.pair_set(x.len(), y.len())).expect("canonical spaces");
        let (_, b) = max_coupling_mass(x, y, &self.pair_set(x.len(), y.len())).expect("canonical spaces");
        let lambda = self.choose(&[int(0), rat(1, 3), rat(1, 2), int(1)]);
        let matrix = a
            .matrix()
            .iter()
            .zip(b.matrix())
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(p, q)| &lambda * p + (int(1) - &lambda) * q).collect())
            .collect();
        Coupling::new(matrix).expect("convex combination of couplings")
    }
}

/// The `index`-th pair of the exhaustive tiny corpus: every size combination
/// with `|X|, |Y| ≤ 3` cycles through consecutive indices.
pub fn tiny_pair(index: u64) -> (FiniteMMSpace, FiniteMMSpace) {
    let nx = 1 + (index % 3) as usize;
    let ny = 1 + (index / 3 % 3) as usize;
    let diam_x = if (index / 9).is_multiple_of(2) { rat(1, 2) } else { int(1) };
    let diam_y = if (index / 18).is_multiple_of(2) { int(1) } else { rat(1, 2) };
    let granularity = if index.is_multiple_of(2) { 4 } else { 8 };
    let x = gen::random(2 * index, nx, &diam_x, granularity).expect("valid generator parameters");
    let y = gen::random(2 * index + 1, ny, &diam_y, granularity).expect("valid generator parameters");
    (x, y)
}

fn triangle(_: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let mut g = Instances::new(seed);
    let (x, y, z) = (g.space(4), g.space(4), g.space(4));
    let (a, wa) = order::unilateral_box(&x, &y, budget).ctx("box(X,Y)")?;
    let (b, wb) = order::unilateral_box(&y, &z, budget).ctx("box(Y,Z)")?;
    let (c, wc) = order::unilateral_box(&x, &z, budget).ctx("box(X,Z)")?;
    wa.verify(&x, &y).ctx("witness X,Y")?;
    wb.verify(&y, &z).ctx("witness Y,Z")?;
    wc.verify(&x, &z).ctx("witness X,Z")?;
    let sum = &a + &b;
    ensure(c <= sum, || format!("box(X,Z) = {} > {} + {}", fmt(&c), fmt(&a), fmt(&b)))?;

    let pairs = compose_pair_sets(&wa.pairs, &wb.pairs).ctx("compose relations")?;
    let coupling = compose(&wa.coupling, &wb.coupling).ctx("compose couplings")?;
    let dis = order::lip_distortion(&x, &z, &pairs).ctx("distortion")?;
    let uncovered = int(1) - coupling.mass_on(&pairs);
    ensure(dis <= &wa.dis_value + &wb.dis_value, || format!("glued distortion {} too large", fmt(&dis)))?;
    ensure(uncovered <= &wa.uncovered + &wb.uncovered, || format!("glued uncovered mass {} too large", fmt(&uncovered)))?;
    let certificate = OrderWitness {
        epsilon: sum.clone(),
        pairs,
        coupling,
        dis_value: dis,
        uncovered,
    };
    certificate.verify(&x, &z).ctx("glued certificate")?;

    let (bxy, _) = order::box_metric(&x, &y, budget).ctx("box")?;
    let (byz, _) = order::box_metric(&y, &z, budget).ctx("box")?;
    let (bxz, _) = order::box_metric(&x, &z, budget).ctx("box")?;
    ensure(bxz <= &bxy + &byz, || "box metric violates the triangle inequality".into())?;
    Ok(vec![if c == sum { "tight" } else { "strict" }])
}

fn oracle(_: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let (x, y) = tiny_pair(seed);
    for (p, q) in [(&x, &y), (&y, &x)] {
        let (value, w) = order::unilateral_box(p, q, budget).ctx("unilateral box")?;
        let (expected, relation) = order::unilateral_box_oracle(p, q, budget).ctx("unilateral oracle")?;
        ensure(value == expected, || format!("unilateral box {} but oracle {}", fmt(&value), fmt(&expected)))?;
        w.verify(p, q).ctx("witness")?;
        let (covered, _) = max_coupling_mass(p, q, &relation).ctx("oracle relation")?;
        let recomputed = order::lip_distortion(p, q, &relation).ctx("oracle relation")?.max(int(1) - covered);
        ensure(recomputed == expected, || "oracle relation does not attain its value".into())?;

        let (value, w) = order::box_metric(p, q, budget).ctx("box")?;
        let (expected, _) = order::box_oracle(p, q, budget).ctx("box oracle")?;
        ensure(value == expected, || format!("box {} but oracle {}", fmt(&value), fmt(&expected)))?;
        w.verify_box(p, q).ctx("box witness")?;
    }
    Ok(vec![])
}

fn order_zero(_: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let mut g = Instances::new(seed);
    let x = g.space(4);
    let y = if seed.is_multiple_of(2) {
        let (q, _) = gen::quotient(seed, &x).ctx("quotient")?;
        let c = g.choose(&[int(1), rat(3, 4), rat(1, 2)]);
        q.scaled(&c)
    } else {
        g.space(4)
    };
    let (value, w) = order::unilateral_box(&x, &y, budget).ctx("unilateral box")?;
    let map = order::check_lipschitz_order(&x, &y, budget).ctx("lipschitz order")?;
    ensure(is_zero(&value) == map.is_some(), || {
        format!("unilateral box {} but 1-Lipschitz map found: {}", fmt(&value), map.is_some())
    })?;
    if let Some(f) = &map {
        ensure(f.is_one_lipschitz(&x, &y), || "map is not 1-Lipschitz".into())?;
        ensure(f.pushforward(x.mass()).ctx("pushforward")? == y.mass(), || "map does not push m_X to m_Y".into())?;
        w.verify(&x, &y).ctx("zero witness")?;
    }
    Ok(vec![if map.is_some() { "zero" } else { "positive" }])
}

fn box_bounds(_: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let mut g = Instances::new(seed);
    let (x, y) = (g.space(4), g.space(4));
    let (b, wb) = order::box_metric(&x, &y, budget).ctx("box")?;
    wb.verify_box(&x, &y).ctx("box witness")?;
    for (p, q) in [(&x, &y), (&y, &x)] {
        let w = order::check_order(p, q, &b, budget).ctx("check order")?;
        let w = w.ok_or_else(|| format!("order fails at the box value {}", fmt(&b)))?;
        w.verify(p, q).ctx("order witness")?;
        let (u, _) = order::unilateral_box(p, q, budget).ctx("unilateral box")?;
        ensure(u <= b, || format!("unilateral box {} exceeds box {}", fmt(&u), fmt(&b)))?;
        if !is_zero(&u) {
            let below = &u * rat(999, 1000);
            ensure(order::check_order(p, q, &below, budget).ctx("check order")?.is_none(), || {
                "order holds below the unilateral box value".into()
            })?;
        }
    }
    let t = g.choose(&[rat(1, 4), rat(1, 2), int(1)]);
    let d = maps::discretize(&x, &t).ctx("discretize")?;
    d.verify_box(&x, budget).ctx("discretization box bound")?;
    Ok(vec![])
}

fn prokhorov_oracle(_: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let mut g = Instances::new(seed);
    let x = g.space(4);
    let n = x.len();
    let (mu, nu, la) = (g.measure(n, false), g.measure(n, false), g.measure(n, false));
    let d = |a: &[Rational], b: &[Rational]| prokhorov(&x, a, b).ctx("prokhorov");
    for (a, b) in [(&mu, &nu), (&nu, &la), (&mu, &la)] {
        let flow = d(a, b)?;
        let brute = prokhorov_by_subsets(&x, a, b).ctx("prokhorov oracle")?;
        ensure(flow == brute, || format!("flow value {} but definition gives {}", fmt(&flow), fmt(&brute)))?;
        ensure(flow == d(b, a)?, || "prokhorov is not symmetric".into())?;
        ensure(is_zero(&flow) == (a == b), || "prokhorov vanishes on distinct measures".into())?;
    }
    ensure(is_zero(&d(&mu, &mu)?), || "d_P(mu, mu) is not zero".into())?;
    ensure(d(&mu, &la)? <= d(&mu, &nu)? + d(&nu, &la)?, || "prokhorov violates the triangle inequality".into())?;

    let (p, q) = (g.measure(n, true), g.measure(n, true));
    let xp = x.with_mass(p.clone()).ctx("mass")?;
    let xq = x.with_mass(q.clone()).ctx("mass")?;
    let (b, _) = order::box_metric(&xp, &xq, budget).ctx("box")?;
    let dp = d(&p, &q)?;
    ensure(b <= &dp * int(2), || format!("box {} exceeds twice the prokhorov distance {}", fmt(&b), fmt(&dp)))?;

    let (f, h) = (g.map(n, n), g.map(n, n));
    let moved = d(&f.pushforward(x.mass()).ctx("push")?, &h.pushforward(x.mass()).ctx("push")?)?;
    let kf = ky_fan(x.mass(), &f, &h, &x).ctx("ky fan")?;
    ensure(moved <= kf, || format!("d_P of pushforwards {} exceeds ky fan {}", fmt(&moved), fmt(&kf)))?;
    Ok(vec![])
}

fn ky_implications(_: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let (x, y) = tiny_pair(seed);
    let (u, _) = order::unilateral_box(&x, &y, budget).ctx("unilateral box")?;
    let (k, kw) = order::ky_unilateral_box(&x, &y, budget).ctx("ky box")?;
    kw.verify(&x, &y).ctx("ky witness")?;
    if !is_zero(&k) {
        let below = &k * rat(99, 100);
        ensure(order::check_ky_order(&x, &y, &below, budget).ctx("ky order")?.is_none(), || {
            "ky order holds below the ky box value".into()
        })?;
    }
    let mut grid: Vec<Rational> = (0..=8).map(|i| rat(i, 8)).collect();
    grid.extend([u.clone(), k.clone(), &u / int(3), &k / int(2)]);
    for eps in grid {
        if let Some(w) = order::check_ky_order(&x, &y, &eps, budget).ctx("ky order")? {
            w.verify(&x, &y).ctx("ky witness")?;
            let tripled = &eps * int(3);
            ensure(order::check_order(&x, &y, &tripled, budget).ctx("order")?.is_some(), || {
                format!("ky order at {} but no order at {}", fmt(&eps), fmt(&tripled))
            })?;
        }
        if order::check_order(&x, &y, &eps, budget).ctx("order")?.is_some() {
            let widened = (&eps + rat(1, 100)) * int(2);
            ensure(order::check_ky_order(&x, &y, &widened, budget).ctx("ky order")?.is_some(), || {
                format!("order at {} but no ky order at {}", fmt(&eps), fmt(&widened))
            })?;
        }
    }
    Ok(vec![if k <= u { "ky-below" } else { "ky-above" }])
}

fn gluing(_: usize, seed: u64, _: &SearchBudget) -> Trial {
    let mut g = Instances::new(seed);
    let (x, y, z) = (g.space(4), g.space(4), g.space(4));
    let sigma = g.coupling(&x, &y);
    let tau = g.coupling(&y, &z);
    let glued = glue(&sigma, &tau).ctx("glue")?;
    let composed = compose(&sigma, &tau).ctx("compose")?;
    ensure(glued.marginal_12() == sigma, || "first projection differs from sigma".into())?;
    ensure(glued.marginal_23() == tau, || "second projection differs from tau".into())?;
    ensure(glued.marginal_13() == composed, || "outer projection differs from the composition".into())?;
    composed.check_marginals(x.mass(), z.mass()).ctx("composed marginals")?;

    let s = g.pair_set(x.len(), y.len());
    let t = g.pair_set(y.len(), z.len());
    let cylinder = glued.mass_on_cylinder(&s, &t);
    let floor = sigma.mass_on(&s) + tau.mass_on(&t) - int(1);
    ensure(cylinder >= floor, || format!("cylinder mass {} below {}", fmt(&cylinder), fmt(&floor)))?;
    let ts = compose_pair_sets(&s, &t).ctx("compose relations")?;
    ensure(composed.mass_on(&ts) >= cylinder, || "composed relation carries less than the cylinder".into())?;
    let dis = order::lip_distortion(&x, &z, &ts).ctx("distortion")?;
    let bound = order::lip_distortion(&x, &y, &s).ctx("distortion")? + order::lip_distortion(&y, &z, &t).ctx("distortion")?;
    ensure(dis <= bound, || format!("composed distortion {} exceeds {}", fmt(&dis), fmt(&bound)))?;
    Ok(vec![])
}

fn lemma32(_: usize, seed: u64, _: &SearchBudget) -> Trial {
    let mut g = Instances::new(seed);
    let (x, y) = (g.space(4), g.space(4));
    let s = g.pair_set(x.len(), y.len());
    let t = g.choose(&[int(0), rat(1, 8), rat(1, 4), rat(1, 3), rat(1, 2), int(1)]);
    let product = ProductL1::new(&x, &y);
    let lip = order::lip_distortion(&x, &y, &s).ctx("distortion")?;
    let sym = order::distortion(&x, &y, &s).ctx("distortion")?;
    for closed in [false, true] {
        let grown = product.neighborhood(s.as_set(), &t, closed).ctx("neighborhood")?;
        let grown = PairSet::new(x.len(), y.len(), grown).ctx("neighborhood")?;
        let slack = &t * int(2);
        let d = order::lip_distortion(&x, &y, &grown).ctx("distortion")?;
        ensure(d <= &lip + &slack, || format!("dis of the {t}-neighborhood is {} > {} + 2t", fmt(&d), fmt(&lip)))?;
        let d = order::distortion(&x, &y, &grown).ctx("distortion")?;
        ensure(d <= &sym + &slack, || "symmetric distortion grows by more than 2t".into())?;
    }
    Ok(vec![])
}

fn lip_compose(k: usize, seed: u64, budget: &SearchBudget) -> Trial {
    let mut tags = Vec::new();
    if k == 0 {
        for n in 4..=8 {
            remark_composition(n)?;
        }
    }
    let mut g = Instances::new(seed);
    let (x, y, z) = (g.space(4), g.space(4), g.space(4));
    let f = g.map(x.len(), y.len());
    let h = g.map(y.len(), z.len());
    let (e1, x0) = maps::ky_error(&x, &y, &f).ctx("ky error of f")?;
    let (e2, y0) = maps::ky_error(&y, &z, &h).ctx("ky error of g")?;
    let s = g.choose(&[rat(1, 100), rat(1, 8), rat(1, 4), rat(1, 2)]);
    let report = maps::compose_lip_up_to(
        &x,
        &y,
        &z,
        AlmostLipschitz { map: &f, domain_set: &x0, epsilon: &e1 },
        AlmostLipschitz { map: &h, domain_set: &y0, epsilon: &e2 },
        &s,
    )
    .ctx("composition")?;
    let lip = &e1 + &e2 + &s;
    ensure(maps::lip_up_to_check(&x, &z, &report.map, &report.domain_set, &lip).ctx("check")?, || {
        format!("h is not 1-Lipschitz up to {}", fmt(&lip))
    })?;
    let dp = prokhorov(&z, &report.map.pushforward(x.mass()).ctx("push")?, z.mass()).ctx("prokhorov")?;
    let bound = &e1 + &e2 * int(4) + &s;
    ensure(dp <= bound, || format!("d_P(h_* m_X, m_Z) = {} > {}", fmt(&dp), fmt(&bound)))?;
    tags.push(if report.used_constructed_set() { "constructed-set" } else { "fallback-set" });

    let ky_bound = (&e1 + &e2) * int(6) + &s;
    ensure(order::check_ky_order(&x, &z, &ky_bound, budget).ctx("ky order")?.is_some(), || {
        format!("no ky order from X to Z at {}", fmt(&ky_bound))
    })?;
    Ok(tags)
}

/// `X = Y = {0, 1/n}`, `m_X` uniform, `m_Y = (1 − 1/n, 1/n)`, `Z = n² Y`,
/// `f = g = id`. The direct composite needs error `1/2` while `f` and `g`
/// only need `1/n`.
pub fn remark_composition(n: i64) -> Result<(), String> {
    let x = FiniteMMSpace::on_line("X", &[int(0), rat(1, n)], vec![rat(1, 2), rat(1, 2)]).ctx("X")?;
    let y = FiniteMMSpace::on_line("Y", &[int(0), rat(1, n)], vec![int(1) - rat(1, n), rat(1, n)]).ctx("Y")?;
    let z = gen::scaled(&y, &int(n * n)).ctx("Z")?;
    let id = PointMap::identity(2);
    let (direct, _) = maps::lipschitz_error(&x, &z, &id).ctx("direct composite")?;
    ensure(direct == rat(1, 2), || format!("g∘f is 1-Lipschitz only up to {}", fmt(&direct)))?;
    let dp = prokhorov(&z, &id.pushforward(x.mass()).ctx("push")?, z.mass()).ctx("prokhorov")?;
    let expected = rat(1, 2) - rat(1, n);
    ensure(dp == expected, || format!("d_P((g∘f)_* m_X, m_Z) = {}", fmt(&dp)))?;
    let (e1, x0) = maps::ky_error(&x, &y, &id).ctx("f")?;
    let (e2, y0) = maps::ky_error(&y, &z, &id).ctx("g")?;
    ensure(e1 == rat(1, n) && e2 == rat(1, n), || format!("errors {} and {}", fmt(&e1), fmt(&e2)))?;
    let s = rat(1, 100);
    let report = maps::compose_lip_up_to(
        &x,
        &y,
        &z,
        AlmostLipschitz { map: &id, domain_set: &x0, epsilon: &e1 },
        AlmostLipschitz { map: &id, domain_set: &y0, epsilon: &e2 },
        &s,
    )
    .ctx("composition")?;
    let lip = &e1 + &e2 + &s;
    ensure(maps::lip_up_to_check(&x, &z, &report.map, &report.domain_set, &lip).ctx("check")?, || {
        "constructed map misses its Lipschitz bound".into()
    })?;
    ensure(report.domain_mass >= report.mass_bound, || "constructed domain is too light".into())?;
    ensure(report.prokhorov <= report.prokhorov_bound, || "constructed map misses its Prokhorov bound".into())?;
    if n >= 5 {
        ensure(lip < direct, || "constructed bound is not below the direct composite".into())?;
    }
    Ok(())
}

fn remark46(k: usize, _: u64, budget: &SearchBudget) -> Trial {
    let n = 2 + k as u32;
    let fam = gen::remark46(n, &rat(1, 4)).ctx("family")?;
    let (u, w) = order::unilateral_box(&fam.x, &fam.y, budget).ctx("unilateral box")?;
    w.verify(&fam.x, &fam.y).ctx("witness")?;
    ensure(u == gen::remark46_value(n), || format!("box(X_{n}, Y_{n}) = {}", fmt(&u)))?;
    let (kb, kw) = order::ky_unilateral_box(&fam.x, &fam.y, budget).ctx("ky box")?;
    kw.verify(&fam.x, &fam.y).ctx("ky witness")?;
    ensure(kb == rat(1, 4), || format!("ky box(X_{n}, Y_{n}) = {}", fmt(&kb)))?;
    ensure(order::check_ky_order(&fam.x, &fam.y, &rat(1, 4), budget).ctx("ky")?.is_some(), || "no ky order at 1/4".into())?;
    ensure(order::check_ky_order(&fam.x, &fam.y, &rat(1, 5), budget).ctx("ky")?.is_none(), || "ky order at 1/5".into())?;
    let (ul, _) = order::unilateral_box(&fam.x_limit, &fam.y_limit, budget).ctx("limit box")?;
    let (kl, _) = order::ky_unilateral_box(&fam.x_limit, &fam.y_limit, budget).ctx("limit ky box")?;
    ensure(ul == rat(1, 2) && kl == rat(1, 2), || format!("limit values {} and {}", fmt(&ul), fmt(&kl)))?;
    Ok(vec![])
}

fn semicontinuity(k: usize, _: u64, budget: &SearchBudget) -> Trial {
    let n = 2 + k as u32;
    let r = rat(1, 4);
    let here = gen::remark46(n, &r).ctx("family")?;
    let next = gen::remark46(n + 1, &r).ctx("family")?;
    let (u, _) = order::unilateral_box(&here.x, &here.y, budget).ctx("box")?;
    let (u_next, _) = order::unilateral_box(&next.x, &next.y, budget).ctx("box")?;
    let (u_lim, _) = order::unilateral_box(&here.x_limit, &here.y_limit, budget).ctx("limit box")?;
    ensure(u == gen::remark46_value(n), || format!("box(X_{n}, Y_{n}) = {}", fmt(&u)))?;
    ensure(u <= u_next, || format!("sequence decreases at n = {n}"))?;
    ensure(u < u_lim && u_lim == rat(1, 2), || format!("limit value {} not above {}", fmt(&u_lim), fmt(&u)))?;
    let (kb, _) = order::ky_unilateral_box(&here.x, &here.y, budget).ctx("ky box")?;
    let (kl, _) = order::ky_unilateral_box(&here.x_limit, &here.y_limit, budget).ctx("ky limit")?;
    ensure(kb == rat(1, 4) && kl == rat(1, 2), || format!("ky values {} then {}", fmt(&kb), fmt(&kl)))?;

    let (b, _) = order::box_metric(&here.y, &here.y_limit, budget).ctx("box to limit")?;
    let (b_next, _) = order::box_metric(&next.y, &next.y_limit, budget).ctx("box to limit")?;
    ensure(b_next <= b, || format!("box(Y_n, Y_lim) increases at n = {n}"))?;
    // Y_lim as a measure on the three points of Y_n
    let embedded = [rat(1, 2), int(0), rat(1, 2)];
    let dp = prokhorov(&here.y, here.y.mass(), &embedded).ctx("prokhorov")?;
    ensure(b <= &dp * int(2), || format!("box(Y_n, Y_lim) = {} exceeds 2 d_P = {}", fmt(&b), fmt(&(&dp * int(2)))))?;
    Ok(vec![])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn tiny_corpus_covers_all_sizes() {
        let mut sizes: Vec<(usize, usize)> = (0..9).map(tiny_pair).map(|(x, y)| (x.len(), y.len())).collect();
        sizes.sort();
        sizes.dedup();
        assert_eq!(sizes.len(), 9);
    }

    #[test]
    fn reports_are_deterministic() {
        let budget = SearchBudget::default();
        let a = run(Suite::Gluing, 12, 3, &budget);
        let b = run(Suite::Gluing, 12, 3, &budget);
        assert_eq!(a, b);
        assert!(a.passed(), "{a}");
    }

    #[test]
    fn remark_instance() {
        for n in 4..=8 {
            remark_composition(n).unwrap();
        }
    }
}
