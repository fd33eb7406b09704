//! Couplings between finite mm-spaces, pair sets, and the gluing of couplings
//! along a shared middle marginal.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::flow::Marginals;
use crate::rational::{self, Rational};
use crate::space::{FiniteMMSpace, PointMap};

/// A transport plan: a nonnegative `rows × cols` matrix whose row sums and
/// column sums are the two marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<Rational>>,
}

impl Coupling {
    /// Wraps a matrix after checking its shape and signs. Marginals are not
    /// checked here; see [`Coupling::check_marginals`].
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "coupling row",
                    expected: cols,
                    found: row.len(),
                });
            }
            if let Some(j) = row.iter().position(|v| v.is_negative()) {
                return Err(Error::NegativeEntry {
                    what: "coupling",
                    index: (i, j),
                });
            }
        }
        Ok(Self { rows, cols, matrix })
    }

    /// `(id, id)_* m`.
    pub fn identity(mass: &[Rational]) -> Self {
        let n = mass.len();
        let mut matrix = vec![vec![Rational::zero(); n]; n];
        for (i, m) in mass.iter().enumerate() {
            matrix[i][i] = m.clone();
        }
        Self { rows: n, cols: n, matrix }
    }

    /// `m_X ⊗ m_Y`.
    pub fn product(left: &[Rational], right: &[Rational]) -> Self {
        Self {
            rows: left.len(),
            cols: right.len(),
            matrix: left.iter().map(|a| right.iter().map(|b| a * b).collect()).collect(),
        }
    }

    /// `(id, f)_* m`, the coupling carried by the graph of `f`.
    pub fn from_map(mass: &[Rational], f: &PointMap) -> Self {
        let mut matrix = vec![vec![Rational::zero(); f.codomain_len()]; mass.len()];
        for (i, m) in mass.iter().enumerate() {
            matrix[i][f.apply(i)] += m;
        }
        Self {
            rows: mass.len(),
            cols: f.codomain_len(),
            matrix,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.matrix[i][j]
    }

    pub fn row_marginal(&self) -> Vec<Rational> {
        self.matrix.iter().map(rational::sum).collect()
    }

    pub fn col_marginal(&self) -> Vec<Rational> {
        (0..self.cols)
            .map(|j| rational::sum(self.matrix.iter().map(|row| &row[j])))
            .collect()
    }

    pub fn check_marginals(&self, left: &[Rational], right: &[Rational]) -> Result<()> {
        if self.rows != left.len() || self.cols != right.len() {
            return Err(Error::DimensionMismatch {
                what: "coupling",
                expected: left.len() * right.len(),
                found: self.rows * self.cols,
            });
        }
        if let Some(i) = self.row_marginal().iter().zip(left).position(|(a, b)| a != b) {
            return Err(Error::MarginalMismatch(i));
        }
        if let Some(j) = self.col_marginal().iter().zip(right).position(|(a, b)| a != b) {
            return Err(Error::MarginalMismatch(j));
        }
        Ok(())
    }

    /// `π(S)`.
    pub fn mass_on(&self, set: &PairSet) -> Rational {
        rational::sum(set.iter().map(|(i, j)| &self.matrix[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            matrix: (0..self.cols)
                .map(|j| (0..self.rows).map(|i| self.matrix[i][j].clone()).collect())
                .collect(),
        }
    }
}

/// A relation `S ⊆ X × Y` given by index pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSet {
    rows: usize,
    cols: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl PairSet {
    pub fn new(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(i, j) in &pairs {
            if i >= rows {
                return Err(Error::IndexOutOfRange { what: "pair row", index: i, size: rows });
            }
            if j >= cols {
                return Err(Error::IndexOutOfRange { what: "pair column", index: j, size: cols });
            }
        }
        Ok(Self { rows, cols, pairs })
    }

    pub(crate) fn from_set(rows: usize, cols: usize, pairs: BTreeSet<(usize, usize)>) -> Self {
        Self { rows, cols, pairs }
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Self::from_set(rows, cols, BTreeSet::new())
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::from_set(
            rows,
            cols,
            (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect(),
        )
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_set(n, n, (0..n).map(|i| (i, i)).collect())
    }

    /// The graph `{(x, f(x))}`.
    pub fn graph(f: &PointMap) -> Self {
        Self::from_set(
            f.domain_len(),
            f.codomain_len(),
            (0..f.domain_len()).map(|i| (i, f.apply(i))).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn as_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Row-major admissibility mask for the flow solver.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.rows * self.cols];
        for &(i, j) in &self.pairs {
            mask[i * self.cols + j] = true;
        }
        mask
    }

    /// `{(y, x) : (x, y) ∈ S}`.
    pub fn transpose(&self) -> Self {
        Self::from_set(self.cols, self.rows, self.pairs.iter().map(|&(i, j)| (j, i)).collect())
    }
}

/// A measure on `X × Y × Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleMeasure {
    dims: (usize, usize, usize),
    tensor: Vec<Vec<Vec<Rational>>>,
}

impl TripleMeasure {
    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn tensor(&self) -> &[Vec<Vec<Rational>>] {
        &self.tensor
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.tensor[i][j][k]
    }

    /// `(pr_12)_*`.
    pub fn marginal_12(&self) -> Coupling {
        let (n, m, _) = self.dims;
        Coupling {
            rows: n,
            cols: m,
            matrix: (0..n)
                .map(|i| (0..m).map(|j| rational::sum(&self.tensor[i][j])).collect())
                .collect(),
        }
    }

    /// `(pr_23)_*`.
    pub fn marginal_23(&self) -> Coupling {
        let (n, m, k) = self.dims;
        Coupling {
            rows: m,
            cols: k,
            matrix: (0..m)
                .map(|j| {
                    (0..k)
                        .map(|l| rational::sum((0..n).map(|i| &self.tensor[i][j][l])))
                        .collect()
                })
                .collect(),
        }
    }

    /// `(pr_13)_*`.
    pub fn marginal_13(&self) -> Coupling {
        let (n, m, k) = self.dims;
        Coupling {
            rows: n,
            cols: k,
            matrix: (0..n)
                .map(|i| {
                    (0..k)
                        .map(|l| rational::sum((0..m).map(|j| &self.tensor[i][j][l])))
                        .collect()
                })
                .collect(),
        }
    }

    /// Mass of `T • S = (X × T) ∩ (S × Z)`.
    pub fn mass_on_cylinder(&self, s: &PairSet, t: &PairSet) -> Rational {
        let (n, m, k) = self.dims;
        let mut total = Rational::zero();
        for i in 0..n {
            for j in 0..m {
                if !s.contains(i, j) {
                    continue;
                }
                for l in 0..k {
                    if t.contains(j, l) {
                        total += &self.tensor[i][j][l];
                    }
                }
            }
        }
        total
    }
}

/// `max_{π ∈ Π(m_X, m_Y)} π(S)` with a coupling attaining it.
pub fn max_coupling_mass(x: &FiniteMMSpace, y: &FiniteMMSpace, s: &PairSet) -> Result<(Rational, Coupling)> {
    x.require_canonical()?;
    y.require_canonical()?;
    check_pair_dims(x, y, s)?;
    let flow = Marginals::new(x.mass(), y.mass()).coupling(&s.mask());
    let coupling = Coupling {
        rows: x.len(),
        cols: y.len(),
        matrix: flow.matrix,
    };
    Ok((flow.value, coupling))
}

pub(crate) fn check_pair_dims(x: &FiniteMMSpace, y: &FiniteMMSpace, s: &PairSet) -> Result<()> {
    if s.rows() != x.len() || s.cols() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "pair set",
            expected: x.len() * y.len(),
            found: s.rows() * s.cols(),
        });
    }
    Ok(())
}

/// Middle marginal shared by `σ ∈ Π(·, m_Y)` and `τ ∈ Π(m_Y, ·)`.
fn shared_marginal(sigma: &Coupling, tau: &Coupling) -> Result<Vec<Rational>> {
    if sigma.cols != tau.rows {
        return Err(Error::DimensionMismatch {
            what: "glued couplings",
            expected: sigma.cols,
            found: tau.rows,
        });
    }
    let left = sigma.col_marginal();
    let right = tau.row_marginal();
    if let Some(j) = left.iter().zip(&right).position(|(a, b)| a != b) {
        return Err(Error::MarginalMismatch(j));
    }
    Ok(left)
}

/// The gluing `τ • σ`: `σ[i][j] · τ[j][k] / m_Y(j)`.
pub fn glue(sigma: &Coupling, tau: &Coupling) -> Result<TripleMeasure> {
    let middle = shared_marginal(sigma, tau)?;
    let (n, m, k) = (sigma.rows, sigma.cols, tau.cols);
    let mut tensor = vec![vec![vec![Rational::zero(); k]; m]; n];
    for i in 0..n {
        for j in 0..m {
            if middle[j].is_zero() || sigma.matrix[i][j].is_zero() {
                continue;
            }
            let weight = &sigma.matrix[i][j] / &middle[j];
            for l in 0..k {
                tensor[i][j][l] = &weight * &tau.matrix[j][l];
            }
        }
    }
    Ok(TripleMeasure { dims: (n, m, k), tensor })
}

/// `τ ∘ σ = (pr_13)_*(τ • σ)`, computed directly as a kernel product.
pub fn compose(sigma: &Coupling, tau: &Coupling) -> Result<Coupling> {
    let middle = shared_marginal(sigma, tau)?;
    let (n, m, k) = (sigma.rows, sigma.cols, tau.cols);
    let mut matrix = vec![vec![Rational::zero(); k]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        for j in 0..m {
            if middle[j].is_zero() || sigma.matrix[i][j].is_zero() {
                continue;
            }
            let weight = &sigma.matrix[i][j] / &middle[j];
            for (l, cell) in row.iter_mut().enumerate() {
                *cell += &weight * &tau.matrix[j][l];
            }
        }
    }
    Ok(Coupling { rows: n, cols: k, matrix })
}

/// Relational composition `T ∘ S = {(i, k) : ∃ j, (i, j) ∈ S, (j, k) ∈ T}`.
pub fn compose_pair_sets(s: &PairSet, t: &PairSet) -> Result<PairSet> {
    if s.cols != t.rows {
        return Err(Error::DimensionMismatch {
            what: "composed pair sets",
            expected: s.cols,
            found: t.rows,
        });
    }
    let mut out = BTreeSet::new();
    for &(i, j) in &s.pairs {
        for &(_, k) in t.pairs.range((j, 0)..=(j, usize::MAX)) {
            out.insert((i, k));
        }
    }
    Ok(PairSet::from_set(s.rows, t.cols, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn uniform_pair(d: Rational) -> FiniteMMSpace {
        FiniteMMSpace::from_parts("u", vec![vec![int(0), d.clone()], vec![d, int(0)]], vec![rat(1, 2), rat(1, 2)]).unwrap()
    }

    fn swap() -> Coupling {
        Coupling::new(vec![vec![int(0), rat(1, 2)], vec![rat(1, 2), int(0)]]).unwrap()
    }

    #[test]
    fn max_mass_examples() {
        let x = FiniteMMSpace::on_line("x", &[int(0), int(1), int(2)], vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let y = uniform_pair(int(1));
        let (v, c) = max_coupling_mass(&x, &y, &PairSet::full(3, 2)).unwrap();
        assert_eq!(v, int(1));
        c.check_marginals(x.mass(), y.mass()).unwrap();
        let (v, c) = max_coupling_mass(&x, &y, &PairSet::empty(3, 2)).unwrap();
        assert_eq!(v, int(0));
        c.check_marginals(x.mass(), y.mass()).unwrap();
        let (v, c) = max_coupling_mass(&y, &y, &PairSet::diagonal(2)).unwrap();
        assert_eq!(v, int(1));
        assert_eq!(c, Coupling::identity(y.mass()));
    }

    #[test]
    fn glue_identity_is_diagonal() {
        let m = vec![rat(1, 3), rat(2, 3)];
        let id = Coupling::identity(&m);
        let g = glue(&id, &id).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let expected = if i == j && j == k { m[i].clone() } else { int(0) };
                    assert_eq!(g.get(i, j, k), &expected);
                }
            }
        }
    }

    #[test]
    fn glue_products_is_independent() {
        let a = vec![rat(1, 4), rat(3, 4)];
        let b = vec![rat(1, 3), rat(1, 3), rat(1, 3)];
        let c = vec![rat(1, 2), rat(1, 2)];
        let g = glue(&Coupling::product(&a, &b), &Coupling::product(&b, &c)).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..2 {
                    assert_eq!(g.get(i, j, k), &(&a[i] * &b[j] * &c[k]));
                }
            }
        }
    }

    #[test]
    fn glue_identity_with_swap() {
        let half = vec![rat(1, 2), rat(1, 2)];
        let g = glue(&Coupling::identity(&half), &swap()).unwrap();
        // only (0,0,1) and (1,1,0) carry mass
        let mut support = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    if !g.get(i, j, k).is_zero() {
                        support.push((i, j, k, g.get(i, j, k).clone()));
                    }
                }
            }
        }
        assert_eq!(support, vec![(0, 0, 1, rat(1, 2)), (1, 1, 0, rat(1, 2))]);
        assert_eq!(g.marginal_12(), Coupling::identity(&half));
        assert_eq!(g.marginal_23(), swap());
    }

    #[test]
    fn compose_examples() {
        let half = vec![rat(1, 2), rat(1, 2)];
        let id = Coupling::identity(&half);
        assert_eq!(compose(&id, &swap()).unwrap(), swap());
        assert_eq!(compose(&swap(), &id).unwrap(), swap());
        let a = vec![rat(1, 4), rat(3, 4)];
        let c = vec![rat(1, 5), rat(4, 5)];
        let composed = compose(&Coupling::product(&a, &half), &Coupling::product(&half, &c)).unwrap();
        assert_eq!(composed, Coupling::product(&a, &c));
    }

    #[test]
    fn glue_rejects_mismatched_middle() {
        let sigma = Coupling::product(&[rat(1, 2), rat(1, 2)], &[rat(1, 3), rat(2, 3)]);
        let tau = Coupling::product(&[rat(1, 2), rat(1, 2)], &[int(1)]);
        assert_eq!(glue(&sigma, &tau).unwrap_err(), Error::MarginalMismatch(0));
        assert_eq!(compose(&sigma, &tau).unwrap_err(), Error::MarginalMismatch(0));
    }

    #[test]
    fn pair_set_composition() {
        let full = PairSet::full(2, 3);
        let full2 = PairSet::full(3, 2);
        assert_eq!(compose_pair_sets(&full, &full2).unwrap(), PairSet::full(2, 2));
        assert!(compose_pair_sets(&PairSet::empty(2, 3), &full2).unwrap().is_empty());
        let f = PointMap::new(vec![2, 0], 3).unwrap();
        let g = PointMap::new(vec![1, 1, 0], 2).unwrap();
        assert_eq!(
            compose_pair_sets(&PairSet::graph(&f), &PairSet::graph(&g)).unwrap(),
            PairSet::graph(&f.then(&g).unwrap())
        );
    }
}
