//! Exact counts of d-factors, i.e. the coefficient of `x_1^{d_1} ... x_n^{d_n}`
//! in `prod_{jk in G} (1 + x_j x_k)`, by dynamic programming over vertices.
//!
//! Vertices are eliminated one at a time. A state is the vector of residual
//! degrees still owed by the vertices not yet eliminated; eliminating a
//! vertex chooses which of its remaining neighbours absorb its residual.
//! Vertices that are twins in the remaining graph (same neighbourhood apart
//! from each other) are interchangeable, so residuals are sorted within each
//! twin class and equal-residual twins are chosen in bulk with a binomial
//! weight. On `K_n` this collapses the state space to multisets.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{complete_graph, DegreeSequence, Graph};

pub const DEFAULT_STATE_BUDGET: usize = 100_000_000;

/// Exact number of d-factors. Serialized as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorCount(pub BigUint);

impl FactorCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn ln(&self) -> f64 {
        crate::numeric::ln_biguint(&self.0)
    }
}

impl fmt::Display for FactorCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for FactorCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

pub fn exact_factor_count(g: &Graph, d: &DegreeSequence) -> Result<FactorCount> {
    exact_factor_count_with_budget(g, d, DEFAULT_STATE_BUDGET)
}

/// Like [`exact_factor_count`] but refuses to visit more than `budget` DP
/// states in total.
pub fn exact_factor_count_with_budget(
    g: &Graph,
    d: &DegreeSequence,
    budget: usize,
) -> Result<FactorCount> {
    d.check_against(g)?;
    if !d.has_even_sum() {
        return Ok(FactorCount(BigUint::zero()));
    }
    FactorDp::new(g).run(d.as_slice(), budget).map(FactorCount)
}

/// Number of labelled `d`-regular graphs on `n` vertices.
pub fn exact_regular_count(n: usize, d: usize) -> Result<FactorCount> {
    if n == 0 || d >= n {
        return Err(Error::domain(format!(
            "regular count needs 0 <= d <= n-1, got n = {n}, d = {d}"
        )));
    }
    if n == 1 {
        return Ok(FactorCount(BigUint::one()));
    }
    exact_factor_count(&complete_graph(n)?, &DegreeSequence::regular(n, d))
}

/// Probability that a uniform random d-factor of `g` contains the edge `uv`,
/// as the exact ratio `N(G - uv, d - e_uv) / N(G, d)`.
pub fn exact_edge_probability(
    g: &Graph,
    d: &DegreeSequence,
    u: usize,
    v: usize,
) -> Result<BigRational> {
    let total = exact_factor_count(g, d)?;
    if total.is_zero() {
        return Err(Error::domain("G has no d-factor"));
    }
    let rest = g.without_edge(u, v)?;
    if d[u] == 0 || d[v] == 0 {
        return Ok(BigRational::zero());
    }
    let mut reduced = d.as_slice().to_vec();
    reduced[u] -= 1;
    reduced[v] -= 1;
    let with_edge = exact_factor_count(&rest, &DegreeSequence::new(reduced))?;
    Ok(BigRational::new(
        BigInt::from(with_edge.0),
        BigInt::from(total.0),
    ))
}

type State = Vec<u16>;

struct Level {
    /// Twin classes of the graph induced on `order[t..]`, as position lists.
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// Degree of each remaining vertex inside the remaining graph.
    inner_degree: Vec<usize>,
}

struct FactorDp<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    levels: Vec<Level>,
}

impl<'a> FactorDp<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        let mut order: Vec<usize> = (0..n).collect();
        // high degree first, so the sparsest vertices are eliminated last
        order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        let levels = (0..=n).map(|t| Self::level(g, &order[t..])).collect();
        FactorDp { g, order, levels }
    }

    fn level(g: &Graph, rest: &[usize]) -> Level {
        let m = rest.len();
        let open: Vec<Vec<bool>> = rest
            .iter()
            .map(|&u| rest.iter().map(|&x| g.has_edge(u, x)).collect())
            .collect();
        let inner_degree = open
            .iter()
            .map(|row| row.iter().filter(|&&b| b).count())
            .collect();

        // False twins share their open neighbourhood, true twins their closed
        // one; a vertex cannot have a nontrivial class of both kinds.
        let mut class_of = vec![usize::MAX; m];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_open: HashMap<&[bool], Vec<usize>> = HashMap::new();
        for (i, row) in open.iter().enumerate() {
            by_open.entry(row.as_slice()).or_default().push(i);
        }
        for members in by_open.into_values() {
            if members.len() > 1 {
                for &i in &members {
                    class_of[i] = classes.len();
                }
                classes.push(members);
            }
        }
        let closed: Vec<Vec<bool>> = open
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r[i] = true;
                r
            })
            .collect();
        let mut by_closed: HashMap<&[bool], Vec<usize>> = HashMap::new();
        for i in 0..m {
            if class_of[i] == usize::MAX {
                by_closed.entry(closed[i].as_slice()).or_default().push(i);
            }
        }
        for members in by_closed.into_values() {
            for &i in &members {
                class_of[i] = classes.len();
            }
            classes.push(members);
        }
        for c in &mut classes {
            c.sort_unstable();
        }
        Level {
            classes,
            class_of,
            inner_degree,
        }
    }

    /// Sorts residuals within each twin class; returns false if some vertex
    /// owes more than its remaining degree.
    fn canonicalize(&self, t: usize, state: &mut State) -> bool {
        let level = &self.levels[t];
        if state
            .iter()
            .zip(&level.inner_degree)
            .any(|(&r, &deg)| r as usize > deg)
        {
            return false;
        }
        let mut buf = Vec::new();
        for class in &level.classes {
            if class.len() < 2 {
                continue;
            }
            buf.clear();
            buf.extend(class.iter().map(|&i| state[i]));
            buf.sort_unstable_by(|a, b| b.cmp(a));
            for (&i, &r) in class.iter().zip(&buf) {
                state[i] = r;
            }
        }
        true
    }

    fn run(&self, d: &[usize], budget: usize) -> Result<BigUint> {
        let n = self.g.n();
        let mut start: State = self.order.iter().map(|&v| d[v] as u16).collect();
        if !self.canonicalize(0, &mut start) {
            return Ok(BigUint::zero());
        }
        let mut current: HashMap<State, BigUint> = HashMap::new();
        current.insert(start, BigUint::one());
        let mut visited = 1usize;

        for t in 0..n {
            let v = self.order[t];
            let next_level = &self.levels[t + 1];
            let mut next: HashMap<State, BigUint> = HashMap::new();
            for (state, count) in &current {
                let owed = state[0] as usize;
                let rest = &state[1..];
                // groups of interchangeable candidate neighbours
                let mut groups: HashMap<(usize, u16), Vec<usize>> = HashMap::new();
                for (i, &r) in rest.iter().enumerate() {
                    if r > 0 && self.g.has_edge(v, self.order[t + 1 + i]) {
                        groups
                            .entry((next_level.class_of[i], r))
                            .or_default()
                            .push(i);
                    }
                }
                let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
                groups.sort_unstable();
                let available: usize = groups.iter().map(Vec::len).sum();
                if available < owed {
                    continue;
                }
                let mut picks = vec![0usize; groups.len()];
                let mut emit = |picks: &[usize]| -> Result<()> {
                    let mut child: State = rest.to_vec();
                    let mut weight = count.clone();
                    for (group, &c) in groups.iter().zip(picks) {
                        for &i in &group[..c] {
                            child[i] -= 1;
                        }
                        if c > 0 && c < group.len() {
                            weight *= binomial(group.len(), c);
                        }
                    }
                    if !self.canonicalize(t + 1, &mut child) {
                        return Ok(());
                    }
                    match next.get_mut(&child) {
                        Some(acc) => *acc += weight,
                        None => {
                            visited += 1;
                            if visited > budget {
                                return Err(Error::StateBudget {
                                    states: visited,
                                    budget,
                                });
                            }
                            next.insert(child, weight);
                        }
                    }
                    Ok(())
                };
                distribute(&groups, owed, 0, &mut picks, &mut emit)?;
            }
            current = next;
            if current.is_empty() {
                return Ok(BigUint::zero());
            }
        }
        Ok(current.into_values().fold(BigUint::zero(), |a, b| a + b))
    }
}

/// Enumerates every way to take `owed` items from the groups, at most the
/// group size from each.
fn distribute<F>(
    groups: &[Vec<usize>],
    owed: usize,
    at: usize,
    picks: &mut [usize],
    emit: &mut F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if at == groups.len() {
        return if owed == 0 { emit(picks) } else { Ok(()) };
    }
    let capacity_after: usize = groups[at + 1..].iter().map(Vec::len).sum();
    let lo = owed.saturating_sub(capacity_after);
    let hi = owed.min(groups[at].len());
    for c in lo..=hi {
        picks[at] = c;
        distribute(groups, owed - c, at + 1, picks, emit)?;
    }
    picks[at] = 0;
    Ok(())
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    /// Counts d-factors by trying every edge subset.
    fn brute_force(g: &Graph, d: &[usize]) -> u64 {
        let m = g.edge_count();
        assert!(m <= 24);
        let mut count = 0;
        for mask in 0u32..(1 << m) {
            let mut deg = vec![0usize; g.n()];
            for (e, &(j, k)) in g.edges().iter().enumerate() {
                if mask >> e & 1 == 1 {
                    deg[j] += 1;
                    deg[k] += 1;
                }
            }
            if deg == d {
                count += 1;
            }
        }
        count
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn spec_examples() {
        let k4 = complete_graph(4).unwrap();
        assert_eq!(brute_force(&k4, &[2, 2, 2, 2]), 3);
        assert_eq!(
            exact_factor_count(&k4, &DegreeSequence::regular(4, 2))
                .unwrap()
                .0,
            big(3)
        );
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(brute_force(&c4, &[1, 1, 1, 1]), 2);
        assert_eq!(
            exact_factor_count(&c4, &DegreeSequence::regular(4, 1))
                .unwrap()
                .0,
            big(2)
        );
        assert_eq!(
            exact_factor_count(&k4, &DegreeSequence::regular(4, 0))
                .unwrap()
                .0,
            big(1)
        );
        let k3 = complete_graph(3).unwrap();
        assert!(exact_factor_count(&k3, &DegreeSequence::regular(3, 1))
            .unwrap()
            .is_zero());
        assert!(exact_factor_count(&k3, &DegreeSequence::new(vec![3, 1, 0])).is_err());
    }

    #[test]
    fn regular_counts() {
        assert_eq!(exact_regular_count(5, 2).unwrap().0, big(12));
        assert_eq!(brute_force(&complete_graph(5).unwrap(), &[2; 5]), 12);
        assert_eq!(exact_regular_count(6, 3).unwrap().0, big(70));
        for n in 1..9 {
            assert_eq!(exact_regular_count(n, 0).unwrap().0, big(1));
            assert_eq!(exact_regular_count(n, n - 1).unwrap().0, big(1));
        }
        assert!(exact_regular_count(5, 3).unwrap().is_zero());
        assert!(exact_regular_count(4, 4).is_err());
    }

    #[test]
    fn large_counts_exceed_u64() {
        let rg = exact_regular_count(16, 5).unwrap();
        assert!(rg.0 > BigUint::from(u64::MAX));
    }

    #[test]
    fn edge_probability_examples() {
        let k4 = complete_graph(4).unwrap();
        let d = DegreeSequence::regular(4, 2);
        // three 4-cycles, each edge lies on two of them
        let p = exact_edge_probability(&k4, &d, 0, 1).unwrap();
        assert_eq!(p, BigRational::new(2.into(), 3.into()));

        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p = exact_edge_probability(&c4, &DegreeSequence::regular(4, 1), 0, 1).unwrap();
        assert_eq!(p, BigRational::new(1.into(), 2.into()));

        let d = DegreeSequence::new(c4.degrees().to_vec());
        for &(u, v) in c4.edges() {
            assert!(exact_edge_probability(&c4, &d, u, v).unwrap().is_one());
        }
        assert!(exact_edge_probability(&c4, &d, 0, 2).is_err());
        assert!(exact_edge_probability(
            &complete_graph(3).unwrap(),
            &DegreeSequence::regular(3, 1),
            0,
            1
        )
        .is_err());
    }

    #[test]
    fn budget_guard() {
        let err = exact_factor_count_with_budget(
            &complete_graph(12).unwrap(),
            &DegreeSequence::new(vec![5, 6, 5, 6, 5, 6, 5, 6, 5, 6, 5, 6]),
            10,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StateBudget { .. }));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), big(120));
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(5, 5), big(1));
    }
}
