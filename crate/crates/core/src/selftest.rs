//! Quick built-in checks against known values, for `factorx selftest`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::beta::solve_beta;
use crate::cumulant::{gaussian_moment_counted, joint_cumulant, kn_covariances, matching_count};
use crate::error::Result;
use crate::exact::{exact_edge_probability, exact_regular_count};
use crate::gaussian::{build_gaussian_model, pairwise_covariance};
use crate::graph::{complete_graph, DegreeSequence};
use crate::regular::rg_log_expansion;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl SelfTestReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_selftest() -> SelfTestReport {
    let checks: Vec<Check> = [
        (
            "regular expansion RG(37,18), k=1 and k=7",
            table_rows as fn() -> Result<(bool, String)>,
        ),
        ("exact RG(6,3) and RG(8,4)", exact_counts),
        ("Isserlis matching counts", matching_counts),
        ("connected pairings on a path of three pairs", path_pairings),
        ("K_n covariances from the Gaussian model", kn_model),
        ("beta on K_12 is constant with zero residual", kn_beta),
        ("edge probabilities sum to the edge count", handshake),
    ]
    .into_iter()
    .map(|(name, f)| match f() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check {
            name,
            pass: false,
            detail: e.to_string(),
        },
    })
    .collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    SelfTestReport {
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

fn table_rows() -> Result<(bool, String)> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (k, want) in [(1, 1.6355978242), (7, 1.6237815979)] {
        let s = rg_log_expansion(37, 18, k, false)?.scientific();
        pass &= s.exponent == 168 && (s.mantissa / want - 1.0).abs() < 5e-11;
        detail.push(format!("k={k}: {}e{}", s.mantissa_string(11), s.exponent));
    }
    Ok((pass, detail.join(", ")))
}

fn exact_counts() -> Result<(bool, String)> {
    let a = exact_regular_count(6, 3)?;
    let b = exact_regular_count(8, 4)?;
    let pass = a.to_string() == "70" && b.to_string() == "19355";
    Ok((pass, format!("RG(6,3)={a}, RG(8,4)={b}")))
}

fn matching_counts() -> Result<(bool, String)> {
    for k in (2..=12).step_by(2) {
        let idx: Vec<usize> = (0..k).collect();
        let (_, count) = gaussian_moment_counted(&idx, |a, b| if a == b { 1.0 } else { 0.5 })?;
        if count != matching_count(k) {
            return Ok((false, format!("k={k}: {count} matchings")));
        }
    }
    Ok((true, "(k-1)!! for k=2..12".into()))
}

fn path_pairings() -> Result<(bool, String)> {
    let (s0, s1, s2) = (0.3, 1.1, 1.7);
    // pair variables uv, vw, wx
    let cov = |a: usize, b: usize| match a.abs_diff(b) {
        0 => s2,
        1 => s1,
        _ => s0,
    };
    let got = joint_cumulant(&[vec![0; 3], vec![1; 4], vec![2; 3]], cov)?;
    let want = 216.0 * s0 * s0 * s1 * s1 * s2
        + 216.0 * s0 * s1 * s1 * s2 * s2
        + 108.0 * s1 * s1 * s2.powi(3)
        + 216.0 * s0 * s1.powi(4)
        + 144.0 * s1.powi(4) * s2;
    Ok(((got / want - 1.0).abs() < 1e-10, format!("{got} vs {want}")))
}

fn kn_model() -> Result<(bool, String)> {
    let n = 10;
    let g = complete_graph(n)?;
    let state = solve_beta(&g, &DegreeSequence::regular(n, 3), 1e-13, 50)?;
    let model = build_gaussian_model(&g, &state)?;
    let (s0, s1, s2) = kn_covariances(n)?;
    let got = [
        pairwise_covariance(&model, 0, 1, 2, 3),
        pairwise_covariance(&model, 0, 1, 1, 2),
        pairwise_covariance(&model, 0, 1, 0, 1),
    ];
    let nf = n as f64;
    let det = (2.0 - 2.0 / nf) * (1.0 - 2.0 / nf).powi(n as i32 - 1);
    let err = [s0, s1, s2]
        .iter()
        .zip(got)
        .map(|(w, g)| (g / w - 1.0).abs())
        .fold((model.log_det_a / det.ln() - 1.0).abs(), f64::max);
    Ok((err < 1e-12, format!("max relative deviation {err:e}")))
}

fn kn_beta() -> Result<(bool, String)> {
    let g = complete_graph(12)?;
    let s = solve_beta(&g, &DegreeSequence::regular(12, 4), 1e-13, 50)?;
    let spread = s
        .beta
        .iter()
        .fold(0.0f64, |m, b| m.max((b - s.beta[0]).abs()));
    let pass = spread < 1e-12 && s.delta_inf() < 1e-12;
    Ok((
        pass,
        format!("spread {spread:e}, residual {:e}", s.delta_inf()),
    ))
}

fn handshake() -> Result<(bool, String)> {
    let g = complete_graph(6)?;
    let d = DegreeSequence::regular(6, 2);
    let mut total = num_rational::BigRational::zero();
    for &(u, v) in g.edges() {
        total += exact_edge_probability(&g, &d, u, v)?;
    }
    let want = num_rational::BigRational::one() * num_bigint::BigInt::from(6);
    Ok((total == want, format!("sum = {total}")))
}
