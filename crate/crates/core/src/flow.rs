//! Exact bipartite max-flow between two mass vectors.
//!
//! The network is `source → i` with capacity `a_i`, `i → j` uncapacitated for
//! every admissible pair, and `j → sink` with capacity `b_j`. Masses are scaled
//! to integers by their common denominator, so the flow is exact. Augmenting
//! paths are found by breadth-first search visiting nodes in index order, which
//! makes the returned flow deterministic.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::rational::{self, Rational};

/// Integer capacity type used by the augmenting-path solver.
trait Capacity: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> Capacity for T {}

#[derive(Debug, Clone)]
enum Scaled {
    Small(Vec<i128>, Vec<i128>),
    Big(Vec<BigInt>, Vec<BigInt>),
}

/// Two marginals prepared for repeated flow computations.
#[derive(Debug, Clone)]
pub struct Marginals {
    rows: usize,
    cols: usize,
    scale: BigInt,
    caps: Scaled,
}

/// A maximum flow: its value and the mass sent along each pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    pub value: Rational,
    /// `rows × cols`, nonzero only on admissible pairs.
    pub matrix: Vec<Vec<Rational>>,
}

impl Marginals {
    pub fn new(left: &[Rational], right: &[Rational]) -> Self {
        let scale = rational::common_denominator(left.iter().chain(right));
        let to_int = |v: &Rational| (v * &scale).to_integer();
        let big_left: Vec<BigInt> = left.iter().map(to_int).collect();
        let big_right: Vec<BigInt> = right.iter().map(to_int).collect();
        // Flow values never exceed the total capacity, so i128 is safe when the
        // total fits with room to spare.
        let total: BigInt = big_left.iter().chain(&big_right).sum();
        let caps = if total.to_i128().is_some_and(|t| t < i128::MAX / 4) {
            Scaled::Small(
                big_left.iter().map(|v| v.to_i128().unwrap()).collect(),
                big_right.iter().map(|v| v.to_i128().unwrap()).collect(),
            )
        } else {
            Scaled::Big(big_left, big_right)
        };
        Self {
            rows: left.len(),
            cols: right.len(),
            scale,
            caps,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Maximum flow value over the admissible pairs (`admissible[i * cols + j]`).
    pub fn value(&self, admissible: &[bool]) -> Rational {
        debug_assert_eq!(admissible.len(), self.rows * self.cols);
        match &self.caps {
            Scaled::Small(a, b) => {
                let (v, _) = max_flow(a, b, admissible);
                Rational::new(BigInt::from(v), self.scale.clone())
            }
            Scaled::Big(a, b) => {
                let (v, _) = max_flow(a, b, admissible);
                Rational::new(v, self.scale.clone())
            }
        }
    }

    pub fn solve(&self, admissible: &[bool]) -> Flow {
        let (value, edges) = match &self.caps {
            Scaled::Small(a, b) => {
                let (v, f) = max_flow(a, b, admissible);
                (BigInt::from(v), f.into_iter().map(BigInt::from).collect::<Vec<_>>())
            }
            Scaled::Big(a, b) => max_flow(a, b, admissible),
        };
        let matrix = edges
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().map(|f| Rational::new(f.clone(), self.scale.clone())).collect())
            .collect();
        Flow {
            value: Rational::new(value, self.scale.clone()),
            matrix,
        }
    }

    /// A full coupling whose restriction to the admissible pairs is a maximum
    /// flow. The leftover marginals are filled by the north-west corner rule.
    pub fn coupling(&self, admissible: &[bool]) -> Flow {
        let mut flow = self.solve(admissible);
        let scale = Rational::from_integer(self.scale.clone());
        let mut row_rest: Vec<Rational> = match &self.caps {
            Scaled::Small(a, _) => a.iter().map(|&v| Rational::from_integer(v.into())).collect(),
            Scaled::Big(a, _) => a.iter().cloned().map(Rational::from_integer).collect(),
        };
        let mut col_rest: Vec<Rational> = match &self.caps {
            Scaled::Small(_, b) => b.iter().map(|&v| Rational::from_integer(v.into())).collect(),
            Scaled::Big(_, b) => b.iter().cloned().map(Rational::from_integer).collect(),
        };
        for v in row_rest.iter_mut().chain(col_rest.iter_mut()) {
            *v /= &scale;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                row_rest[i] -= &flow.matrix[i][j];
                col_rest[j] -= &flow.matrix[i][j];
            }
        }
        let (mut i, mut j) = (0, 0);
        while i < self.rows && j < self.cols {
            let moved = core::cmp::min(&row_rest[i], &col_rest[j]).clone();
            if !moved.is_zero() {
                flow.matrix[i][j] += &moved;
                row_rest[i] -= &moved;
                col_rest[j] -= &moved;
            }
            if row_rest[i].is_zero() {
                i += 1;
            } else {
                j += 1;
            }
        }
        flow
    }
}

/// Edmonds–Karp on the implicit bipartite network.
fn max_flow<T: Capacity>(left: &[T], right: &[T], admissible: &[bool]) -> (T, Vec<T>) {
    let n = left.len();
    let m = right.len();
    let mut pair_flow = vec![T::zero(); n * m];
    let mut out_flow = vec![T::zero(); n];
    let mut in_flow = vec![T::zero(); m];
    let mut total = T::zero();

    // Node ids: left i -> i, right j -> n + j. `prev` records how we reached a node.
    #[derive(Clone, Copy)]
    enum Prev {
        Unseen,
        Source,
        FromLeft(usize),
        FromRight(usize),
    }
    loop {
        let mut prev = vec![Prev::Unseen; n + m];
        let mut queue = VecDeque::new();
        for i in 0..n {
            if out_flow[i] < left[i] {
                prev[i] = Prev::Source;
                queue.push_back(i);
            }
        }
        let mut reached = None;
        'bfs: while let Some(node) = queue.pop_front() {
            if node < n {
                let i = node;
                for j in 0..m {
                    if admissible[i * m + j] && matches!(prev[n + j], Prev::Unseen) {
                        prev[n + j] = Prev::FromLeft(i);
                        if in_flow[j] < right[j] {
                            reached = Some(j);
                            break 'bfs;
                        }
                        queue.push_back(n + j);
                    }
                }
            } else {
                let j = node - n;
                for i in 0..n {
                    if matches!(prev[i], Prev::Unseen) && pair_flow[i * m + j] > T::zero() {
                        prev[i] = Prev::FromRight(j);
                        queue.push_back(i);
                    }
                }
            }
        }
        let Some(sink_side) = reached else { break };

        // bottleneck
        let mut delta = right[sink_side].clone() - in_flow[sink_side].clone();
        let mut j = sink_side;
        loop {
            let Prev::FromLeft(i) = prev[n + j] else { unreachable!() };
            match prev[i] {
                Prev::Source => {
                    delta = delta.min(left[i].clone() - out_flow[i].clone());
                    break;
                }
                Prev::FromRight(j2) => {
                    delta = delta.min(pair_flow[i * m + j2].clone());
                    j = j2;
                }
                _ => unreachable!(),
            }
        }

        // augment
        in_flow[sink_side] = in_flow[sink_side].clone() + delta.clone();
        let mut j = sink_side;
        loop {
            let Prev::FromLeft(i) = prev[n + j] else { unreachable!() };
            pair_flow[i * m + j] = pair_flow[i * m + j].clone() + delta.clone();
            match prev[i] {
                Prev::Source => {
                    out_flow[i] = out_flow[i].clone() + delta.clone();
                    break;
                }
                Prev::FromRight(j2) => {
                    pair_flow[i * m + j2] = pair_flow[i * m + j2].clone() - delta.clone();
                    j = j2;
                }
                _ => unreachable!(),
            }
        }
        total = total + delta;
    }
    (total, pair_flow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    /// min over A ⊆ rows of m_X(rows \ A) + m_Y(N(A)), the min-cut form.
    fn cut_bound(a: &[Rational], b: &[Rational], adm: &[bool]) -> Rational {
        let n = a.len();
        let m = b.len();
        let mut best: Option<Rational> = None;
        for mask in 0u32..(1 << n) {
            let mut v = Rational::zero();
            let mut nbr = vec![false; m];
            for i in 0..n {
                if mask & (1 << i) == 0 {
                    v += &a[i];
                } else {
                    for j in 0..m {
                        nbr[j] |= adm[i * m + j];
                    }
                }
            }
            for j in 0..m {
                if nbr[j] {
                    v += &b[j];
                }
            }
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
        best.unwrap()
    }

    #[test]
    fn full_and_empty() {
        let a = vec![rat(1, 3), rat(2, 3)];
        let b = vec![rat(1, 4), rat(1, 4), rat(1, 2)];
        let m = Marginals::new(&a, &b);
        assert_eq!(m.value(&[true; 6]), int(1));
        assert_eq!(m.value(&[false; 6]), int(0));
    }

    #[test]
    fn coupling_has_marginals() {
        let a = vec![rat(1, 3), rat(2, 3)];
        let b = vec![rat(1, 4), rat(1, 4), rat(1, 2)];
        let adm = [true, false, false, false, false, true];
        let c = Marginals::new(&a, &b).coupling(&adm);
        assert_eq!(c.value, rat(3, 4));
        for i in 0..2 {
            assert_eq!(crate::rational::sum(&c.matrix[i]), a[i]);
        }
        for j in 0..3 {
            assert_eq!(crate::rational::sum(c.matrix.iter().map(|r| &r[j])), b[j]);
        }
    }

    proptest::proptest! {
        #[test]
        fn flow_matches_min_cut(
            wa in proptest::collection::vec(1i64..9, 1..5),
            wb in proptest::collection::vec(1i64..9, 1..5),
            bits in proptest::collection::vec(proptest::bool::ANY, 16),
        ) {
            let sa: i64 = wa.iter().sum();
            let sb: i64 = wb.iter().sum();
            let a: Vec<Rational> = wa.iter().map(|&w| rat(w, sa)).collect();
            let b: Vec<Rational> = wb.iter().map(|&w| rat(w, sb)).collect();
            let adm: Vec<bool> = bits[..a.len() * b.len()].to_vec();
            let marg = Marginals::new(&a, &b);
            let flow = marg.coupling(&adm);
            proptest::prop_assert_eq!(&flow.value, &cut_bound(&a, &b, &adm));
            let on_pairs = adm.iter().enumerate().filter(|(_, &x)| x)
                .fold(Rational::zero(), |acc, (k, _)| acc + &flow.matrix[k / b.len()][k % b.len()]);
            proptest::prop_assert_eq!(on_pairs, flow.value);
        }
    }
}
