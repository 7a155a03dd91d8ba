mod common;

use factorx::beta::BetaState;
use factorx::cumulant::{
    block_power_cumulant, cumulant_of_polynomial, cumulant_of_polynomial_with, gaussian_moment,
    joint_cumulant, CumulantOptions, MonomialSum, DEFAULT_TUPLE_BUDGET,
};
use factorx::estimate::build_polynomial;
use factorx::gaussian::build_gaussian_model;
use factorx::graph::{complete_graph, DegreeSequence};
use nalgebra::DMatrix;
use rand::RngExt;
use rand_distr::{Distribution, StandardNormal};

fn form_cov(cov: &DMatrix<f64>, a: (usize, usize), b: (usize, usize)) -> f64 {
    let ends = |p: (usize, usize)| {
        if p.0 == p.1 {
            vec![p.0]
        } else {
            vec![p.0, p.1]
        }
    };
    let mut s = 0.0;
    for x in ends(a) {
        for y in ends(b) {
            s += cov[(x, y)];
        }
    }
    s
}

/// `kappa_r(R)` over ordered term tuples with slot-level connected pairings.
fn ordered_tuple_cumulant(poly: &MonomialSum, cov: &DMatrix<f64>, r: usize) -> f64 {
    let t = poly.terms.len();
    let mut total = 0.0;
    let mut idx = vec![0usize; r];
    loop {
        let degree: usize = idx.iter().map(|&i| poly.terms[i].degree).sum();
        if degree.is_multiple_of(2) {
            let blocks: Vec<Vec<usize>> =
                idx.iter().map(|&i| vec![i; poly.terms[i].degree]).collect();
            let k = joint_cumulant(&blocks, |a, b| {
                form_cov(cov, poly.terms[a].vars, poly.terms[b].vars)
            })
            .unwrap();
            let coeff: f64 = idx.iter().map(|&i| poly.terms[i].coeff).product();
            let phase = if (degree / 2).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            total += phase * coeff * k;
        }
        let mut p = 0;
        loop {
            if p == r {
                return total;
            }
            idx[p] += 1;
            if idx[p] < t {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn sample_poly() -> MonomialSum {
    let mut p = MonomialSum::new();
    p.push_linear(0, 0.3);
    p.push_linear(3, -0.15);
    p.push_edge(3, -0.2, 0, 1);
    p.push_edge(4, 0.1, 1, 2);
    p.push_edge(3, 0.12, 2, 3);
    p.push_edge(4, -0.05, 0, 3);
    p
}

#[test]
fn multiset_engine_matches_ordered_pairing_route() {
    let mut rng = common::rng(11);
    for _ in 0..10 {
        let cov = common::random_spd(&mut rng, 4) * 0.3;
        let poly = sample_poly();
        for r in 1..=3 {
            let fast = cumulant_of_polynomial_with(
                &poly,
                |a, b| cov[(a, b)],
                r,
                CumulantOptions::default(),
            )
            .unwrap();
            let slow = ordered_tuple_cumulant(&poly, &cov, r);
            assert!(
                (fast - slow).abs() <= 1e-11 * slow.abs().max(1e-3),
                "r={r}: {fast} vs {slow}"
            );
        }
    }
}

#[test]
fn block_cumulant_matches_moment_oracle() {
    let mut rng = common::rng(12);
    for _ in 0..40 {
        let r = rng.random_range(1..=4);
        let cov = common::random_spd(&mut rng, r);
        let powers: Vec<usize> = (0..r).map(|_| rng.random_range(1..=4)).collect();
        if powers.iter().sum::<usize>() > 12 {
            continue;
        }
        let flat: Vec<f64> = (0..r * r).map(|i| cov[(i / r, i % r)]).collect();
        let blocks: Vec<Vec<usize>> = powers
            .iter()
            .enumerate()
            .map(|(a, &p)| vec![a; p])
            .collect();
        let got = block_power_cumulant(&powers, &flat);
        let want = common::moment_partition_cumulant(&blocks, &|a, b| cov[(a, b)]);
        assert!(
            (got - want).abs() < 1e-9 * want.abs().max(1.0),
            "{powers:?}: {got} vs {want}"
        );
    }
}

#[test]
fn single_block_cumulant_is_the_moment() {
    let cov = [[1.0, 0.3, 0.2], [0.3, 2.0, -0.4], [0.2, -0.4, 1.5]];
    let c = |a: usize, b: usize| cov[a][b];
    for vars in [vec![0, 1], vec![0, 0, 1, 2], vec![2, 2, 2, 2, 1, 1]] {
        let m = gaussian_moment(&vars, c).unwrap();
        let k = joint_cumulant(std::slice::from_ref(&vars), c).unwrap();
        assert!((m - k).abs() < 1e-14);
    }
    // Cov(X_a^2, X_b^2) = 2 sigma_ab^2
    let k = joint_cumulant(&[vec![0, 0], vec![2, 2]], c).unwrap();
    assert!((k - 2.0 * 0.04).abs() < 1e-15);
}

#[test]
fn joint_cumulant_symmetries() {
    let mut rng = common::rng(13);
    let cov = common::random_spd(&mut rng, 4);
    let c = |a: usize, b: usize| cov[(a, b)];
    let blocks = vec![vec![0, 1, 1], vec![2, 3], vec![0, 3, 2, 1]];
    let base = joint_cumulant(&blocks, c).unwrap();
    let permuted = vec![blocks[2].clone(), blocks[0].clone(), blocks[1].clone()];
    let shuffled = vec![vec![1, 0, 1], vec![3, 2], vec![1, 2, 3, 0]];
    for other in [permuted, shuffled] {
        let k = joint_cumulant(&other, c).unwrap();
        assert!(
            (k - base).abs() < 1e-10 * base.abs().max(1.0),
            "{k} vs {base}"
        );
    }
}

#[test]
fn disconnected_blocks_vanish() {
    // variables {0,1} independent of {2,3}
    let cov = [
        [1.0, 0.4, 0.0, 0.0],
        [0.4, 1.2, 0.0, 0.0],
        [0.0, 0.0, 0.8, -0.3],
        [0.0, 0.0, -0.3, 1.1],
    ];
    let k = joint_cumulant(&[vec![0, 1], vec![2, 3, 2, 3], vec![0, 0]], |a, b| {
        cov[a][b]
    })
    .unwrap();
    assert_eq!(k, 0.0);
}

fn batch_cumulants(samples: &[(f64, f64)]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mu_u = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mu_v = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let mut m = [0.0f64; 5];
    for &(u, v) in samples {
        let (a, b) = (u - mu_u, v - mu_v);
        m[0] += a * a;
        m[1] += b * b;
        m[2] += a * a * a;
        m[3] += a * b * b;
    }
    m.iter_mut().for_each(|x| *x /= n);
    // real parts of kappa_2 and kappa_3 of U + iV, using Cov(U, V) = 0
    (m[0] - m[1], m[2] - 3.0 * m[3])
}

#[test]
fn monte_carlo_cumulants() {
    let mut rng = common::rng(14);
    let poly = sample_poly();
    for trial in 0..2 {
        let cov = common::random_spd(&mut rng, 4) * 0.5;
        let chol = cov.clone().cholesky().unwrap();
        let l = chol.l();
        let batches = 100;
        let per_batch = 10_000;
        let mut k2s = Vec::new();
        let mut k3s = Vec::new();
        let mut samples = Vec::with_capacity(per_batch);
        for _ in 0..batches {
            samples.clear();
            for _ in 0..per_batch {
                let z: Vec<f64> = (0..4).map(|_| StandardNormal.sample(&mut rng)).collect();
                let y: Vec<f64> = (0..4)
                    .map(|i| (0..=i).map(|j| l[(i, j)] * z[j]).sum())
                    .collect();
                let (mut u, mut v) = (0.0, 0.0);
                for t in &poly.terms {
                    let x = if t.vars.0 == t.vars.1 {
                        y[t.vars.0]
                    } else {
                        y[t.vars.0] + y[t.vars.1]
                    };
                    let val = t.coeff * x.powi(t.degree as i32);
                    // i^l = (-1)^(l/2) for even l and i (-1)^((l-1)/2) for odd l
                    let sign = if (t.degree / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    if t.degree % 2 == 0 {
                        u += sign * val;
                    } else {
                        v += sign * val;
                    }
                }
                samples.push((u, v));
            }
            let (k2, k3) = batch_cumulants(&samples);
            k2s.push(k2);
            k3s.push(k3);
        }
        let stats = |xs: &[f64]| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
            (m, (var / xs.len() as f64).sqrt())
        };
        for (r, xs) in [(2, &k2s), (3, &k3s)] {
            let want = cumulant_of_polynomial_with(
                &poly,
                |a, b| cov[(a, b)],
                r,
                CumulantOptions::default(),
            )
            .unwrap();
            let (m, se) = stats(xs);
            assert!(
                (m - want).abs() < 4.0 * se,
                "trial {trial} r={r}: {m} +- {se} vs {want}"
            );
        }
    }
}

fn kn_state(n: usize, lambda: f64) -> (factorx::graph::Graph, BetaState) {
    let g = complete_graph(n).unwrap();
    let d = DegreeSequence::regular(n, ((lambda * (n - 1) as f64).round() as usize).max(1));
    let beta = vec![0.5 * (lambda / (1.0 - lambda)).ln(); n];
    let s = BetaState::from_beta(&g, &d, beta).unwrap();
    (g, s)
}

#[test]
fn cubic_second_cumulant_approaches_leading_terms() {
    let lambda = 0.3;
    let big = lambda * (1.0 - lambda);
    let leading = -7.0 * (1.0 - 4.0 * big) / (6.0 * big) + (1.0 - 4.0 * big) / (2.0 * big);
    let mut last = f64::INFINITY;
    for n in [10, 20, 40] {
        let (g, s) = kn_state(n, lambda);
        let model = build_gaussian_model(&g, &s).unwrap();
        let cubic = build_polynomial(&g, &s, 3).unwrap().of_degree(3);
        let k2 = cumulant_of_polynomial(&cubic, &model, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        let residual = (k2 / leading - 1.0).abs();
        assert!(residual < last, "n={n}: {k2} vs {leading}");
        last = residual;
    }
    assert!(last < 0.1);
}

#[test]
fn linear_only_polynomial_has_zero_mean() {
    let (g, s) = kn_state(8, 0.4);
    let model = build_gaussian_model(&g, &s).unwrap();
    let mut p = MonomialSum::new();
    for j in 0..8 {
        p.push_linear(j, 0.1 * j as f64);
    }
    assert_eq!(
        cumulant_of_polynomial(&p, &model, 1, DEFAULT_TUPLE_BUDGET).unwrap(),
        0.0
    );
}
