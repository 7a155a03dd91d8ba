//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use factorx::graph::{DegreeSequence, Graph};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Number of `d`-regular spanning subgraphs of `K_n` for every `d`, by
/// walking all edge subsets in Gray-code order with packed degree bytes.
pub fn brute_force_regular_counts(n: usize) -> Vec<u64> {
    assert!(n <= 8);
    let mut counts = vec![0u64; n.max(1)];
    if n == 0 {
        return counts;
    }
    let edges: Vec<u64> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (1u64 << (8 * j)) + (1u64 << (8 * k))))
        .collect();
    let rep: u64 = (0..n).map(|j| 1u64 << (8 * j)).sum();
    let m = edges.len();
    let mut in_set = 0u64;
    let mut packed = 0u64;
    counts[0] = 1;
    for i in 1u64..(1u64 << m) {
        let bit = i.trailing_zeros() as usize;
        in_set ^= 1 << bit;
        if in_set & (1 << bit) != 0 {
            packed += edges[bit];
        } else {
            packed -= edges[bit];
        }
        let low = packed & 0xff;
        if packed == low * rep {
            counts[low as usize] += 1;
        }
    }
    counts
}

/// `N(G, d)` by enumerating all edge subsets.
pub fn brute_force_factor_count(g: &Graph, d: &DegreeSequence) -> u64 {
    let m = g.edge_count();
    assert!(m <= 26, "too many edges for brute force");
    let edges = g.edges();
    let mut count = 0;
    let mut deg = vec![0usize; g.n()];
    for mask in 0u64..(1u64 << m) {
        deg.iter_mut().for_each(|x| *x = 0);
        for (e, &(j, k)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                deg[j] += 1;
                deg[k] += 1;
            }
        }
        if deg.as_slice() == d.as_slice() {
            count += 1;
        }
    }
    count
}

/// Gaussian moment `E[prod X_{vars[i]}]` as the hafnian of the slot
/// covariance matrix, by memoised recursion over slot bitmasks.
pub fn hafnian_moment(vars: &[usize], cov: &dyn Fn(usize, usize) -> f64) -> f64 {
    fn go(
        mask: u32,
        vars: &[usize],
        cov: &dyn Fn(usize, usize) -> f64,
        memo: &mut HashMap<u32, f64>,
    ) -> f64 {
        if mask == 0 {
            return 1.0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut total = 0.0;
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            total += cov(vars[i], vars[j]) * go(rest & !(1 << j), vars, cov, memo);
        }
        memo.insert(mask, total);
        total
    }
    if vars.len() % 2 == 1 {
        return 0.0;
    }
    go(
        ((1u64 << vars.len()) - 1) as u32,
        vars,
        cov,
        &mut HashMap::new(),
    )
}

/// All set partitions of `0..r`, as block lists.
pub fn set_partitions(r: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    fn go(i: usize, r: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == r {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            go(i + 1, r, current, out);
            current[b].pop();
        }
        current.push(vec![i]);
        go(i + 1, r, current, out);
        current.pop();
    }
    go(0, r, &mut current, &mut out);
    out
}

/// Joint cumulant of the block products from moments:
/// `sum_pi (|pi|-1)! (-1)^(|pi|-1) prod_{B in pi} E[prod_{i in B} X_i]`.
pub fn moment_partition_cumulant(blocks: &[Vec<usize>], cov: &dyn Fn(usize, usize) -> f64) -> f64 {
    let r = blocks.len();
    let mut moments: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut total = 0.0;
    for pi in set_partitions(r) {
        let k = pi.len();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let fact: f64 = (1..k).map(|x| x as f64).product();
        let mut prod = sign * fact;
        for part in &pi {
            let m = *moments.entry(part.clone()).or_insert_with(|| {
                let vars: Vec<usize> = part
                    .iter()
                    .flat_map(|&b| blocks[b].iter().copied())
                    .collect();
                hafnian_moment(&vars, cov)
            });
            prod *= m;
            if prod == 0.0 {
                break;
            }
        }
        total += prod;
    }
    total
}

/// Random symmetric positive definite `r x r` matrix.
pub fn random_spd(rng: &mut StdRng, r: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(r, r, |_, _| rng.random_range(-1.0..1.0));
    &b * b.transpose() + DMatrix::identity(r, r) * 0.1
}

/// Random graph on `n` vertices with edge probability `p` whose signless
/// Laplacian is nonsingular and whose minimum degree is at least 2.
pub fn random_dense_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    loop {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .filter(|_| rng.random::<f64>() < p)
            .collect();
        let g = Graph::new(n, edges).unwrap();
        if g.degrees().iter().all(|&x| x >= 2) && factorx::graph::algebraic_bipartiteness(&g) > 1e-6
        {
            return g;
        }
    }
}

/// Degrees near `g_j / 2`, strictly inside `(0, g_j)`, with even sum.
pub fn near_regular_degrees(rng: &mut StdRng, g: &Graph) -> DegreeSequence {
    let mut d: Vec<usize> = g
        .degrees()
        .iter()
        .map(|&gj| {
            let base = gj as i64 / 2 + rng.random_range(-1i64..=1);
            base.clamp(1, gj as i64 - 1) as usize
        })
        .collect();
    if d.iter().sum::<usize>() % 2 == 1 {
        let j = (0..d.len())
            .find(|&j| d[j] + 1 < g.degree(j))
            .or_else(|| (0..d.len()).find(|&j| d[j] > 1))
            .unwrap();
        if d[j] + 1 < g.degree(j) {
            d[j] += 1;
        } else {
            d[j] -= 1;
        }
    }
    DegreeSequence::new(d)
}

pub fn double_factorial_odd(k: usize) -> u128 {
    if k % 2 == 1 {
        return 0;
    }
    (1..k as u128).step_by(2).product()
}
