//! Cumulants `kappa_r(R(Y))` of polynomials that are sums of powers of
//! linear forms in a Gaussian vector `Y`.
//!
//! By multilinearity `kappa_r(R)` is a sum over `r`-tuples of blocks of joint
//! cumulants. Terms on the same linear form `Z` are merged into one block
//! `P(Z)`, and tuples are enumerated as multisets with multinomial weight.
//! Each joint cumulant is evaluated by summing over the connected multigraphs
//! that slot matchings induce on the blocks: `m_ab` cross edges between
//! blocks `a`, `b` and `h_a` loops at `a`. One multigraph is realised by
//! `prod l_a! / (prod_a 2^{h_a} h_a! prod_{a<b} m_ab!)` matchings.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::GaussianModel;
use crate::numeric::KahanSum;

pub const DEFAULT_TUPLE_BUDGET: u128 = 10_000_000;

/// One term `coeff * i^degree * Z^degree`, where `Z = Y_j + Y_k` for
/// `vars = (j, k)` with `j != k`, and `Z = Y_j` when `j == k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monomial {
    pub degree: usize,
    pub coeff: f64,
    pub vars: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MonomialSum {
    pub terms: Vec<Monomial>,
}

impl MonomialSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// `i * coeff * Y_j`.
    pub fn push_linear(&mut self, j: usize, coeff: f64) {
        self.terms.push(Monomial {
            degree: 1,
            coeff,
            vars: (j, j),
        });
    }

    /// `i^degree * coeff * (Y_j + Y_k)^degree`.
    pub fn push_edge(&mut self, degree: usize, coeff: f64, j: usize, k: usize) {
        self.terms.push(Monomial {
            degree,
            coeff,
            vars: (j, k),
        });
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms of the given degree only.
    pub fn of_degree(&self, degree: usize) -> MonomialSum {
        MonomialSum {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.degree == degree)
                .collect(),
        }
    }

    fn largest_vertex(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.vars.0.max(t.vars.1)).max()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CumulantOptions {
    pub budget: u128,
    pub parallel: bool,
}

impl Default for CumulantOptions {
    fn default() -> Self {
        CumulantOptions {
            budget: DEFAULT_TUPLE_BUDGET,
            parallel: true,
        }
    }
}

/// `kappa_r(R(Y))` with `Y ~ N(0, model.sigma)`.
pub fn cumulant_of_polynomial(
    poly: &MonomialSum,
    model: &GaussianModel,
    r: usize,
    budget: u128,
) -> Result<f64> {
    if let Some(v) = poly.largest_vertex() {
        if v >= model.n {
            return Err(Error::Dimension {
                expected: model.n,
                found: v + 1,
            });
        }
    }
    let sigma = &model.sigma;
    cumulant_of_polynomial_with(
        poly,
        |a, b| sigma[(a, b)],
        r,
        CumulantOptions {
            budget,
            ..Default::default()
        },
    )
}

/// Number of unordered `r`-multisets drawn from `terms` items.
pub fn multiset_count(terms: usize, r: usize) -> u128 {
    // C(terms + r - 1, r)
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        acc = acc.saturating_mul(terms as u128 + i) / (i + 1);
    }
    acc
}

/// One linear form with every power of it that occurs in the polynomial:
/// `sum_l coeffs[l] i^l Z^l`.
#[derive(Debug, Clone)]
struct Form {
    vars: (usize, usize),
    /// Indexed by degree.
    coeffs: Vec<f64>,
}

fn group_forms(poly: &MonomialSum) -> Vec<Form> {
    let mut forms: Vec<Form> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for t in poly.terms.iter().filter(|t| t.coeff != 0.0 && t.degree > 0) {
        let key = if t.vars.0 <= t.vars.1 {
            t.vars
        } else {
            (t.vars.1, t.vars.0)
        };
        let f = *index.entry(key).or_insert_with(|| {
            forms.push(Form {
                vars: key,
                coeffs: Vec::new(),
            });
            forms.len() - 1
        });
        let coeffs = &mut forms[f].coeffs;
        if coeffs.len() <= t.degree {
            coeffs.resize(t.degree + 1, 0.0);
        }
        coeffs[t.degree] += t.coeff;
    }
    forms.retain(|f| f.coeffs.iter().any(|&c| c != 0.0));
    forms
}

/// Number of distinct linear forms, which is what the tuple budget counts.
pub fn form_count(poly: &MonomialSum) -> usize {
    group_forms(poly).len()
}

/// [`cumulant_of_polynomial`] against an arbitrary vertex covariance.
///
/// Terms sharing a linear form are merged into one polynomial block, so the
/// enumeration runs over `r`-multisets of distinct forms.
pub fn cumulant_of_polynomial_with<F>(
    poly: &MonomialSum,
    cov: F,
    r: usize,
    opts: CumulantOptions,
) -> Result<f64>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if r == 0 {
        return Err(Error::domain("cumulant order must be at least 1"));
    }
    let forms = group_forms(poly);
    if forms.is_empty() {
        return Ok(0.0);
    }
    let tuples = multiset_count(forms.len(), r);
    if tuples > opts.budget {
        return Err(Error::TupleBudget {
            order: r,
            tuples,
            budget: opts.budget,
        });
    }
    let max_degree = forms.iter().map(|f| f.coeffs.len() - 1).max().unwrap_or(0);
    let engine = Engine {
        forms: &forms,
        cov: &cov,
        r,
        factorial: factorials(max_degree.max(r)),
    };
    let per_first = |first: usize| engine.sum_from(first);
    let partials: Vec<f64> = if opts.parallel {
        (0..forms.len()).into_par_iter().map(per_first).collect()
    } else {
        (0..forms.len()).map(per_first).collect()
    };
    Ok(partials.into_iter().collect::<KahanSum>().value())
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

struct Engine<'a, F> {
    forms: &'a [Form],
    cov: &'a F,
    r: usize,
    factorial: Vec<f64>,
}

impl<F: Fn(usize, usize) -> f64> Engine<'_, F> {
    fn form_cov(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        let ends = |p: (usize, usize)| -> ([usize; 2], usize) {
            if p.0 == p.1 {
                ([p.0, p.0], 1)
            } else {
                ([p.0, p.1], 2)
            }
        };
        let (ea, na) = ends(a);
        let (eb, nb) = ends(b);
        let mut s = 0.0;
        for &x in &ea[..na] {
            for &y in &eb[..nb] {
                s += (self.cov)(x, y);
            }
        }
        s
    }

    /// Sum over all multisets whose smallest index is `first`.
    fn sum_from(&self, first: usize) -> f64 {
        let mut acc = KahanSum::new();
        let mut tuple = vec![first];
        self.extend(&mut tuple, &mut acc);
        acc.value()
    }

    fn extend(&self, tuple: &mut Vec<usize>, acc: &mut KahanSum) {
        if tuple.len() == self.r {
            acc.add(self.tuple_value(tuple));
            return;
        }
        let last = *tuple.last().expect("tuple starts non-empty");
        for next in last..self.forms.len() {
            tuple.push(next);
            self.extend(tuple, acc);
            tuple.pop();
        }
    }

    fn tuple_value(&self, tuple: &[usize]) -> f64 {
        // multinomial weight r! / prod(multiplicity!)
        let mut weight = self.factorial[self.r];
        let mut run = 1;
        for w in tuple.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                weight /= self.factorial[run];
                run = 1;
            }
        }
        weight /= self.factorial[run];

        let r = tuple.len();
        let mut cov = vec![0.0; r * r];
        for a in 0..r {
            for b in a..r {
                let c = self.form_cov(self.forms[tuple[a]].vars, self.forms[tuple[b]].vars);
                // i^(sum of degrees) = (-1)^(sum of cross multiplicities) (-1)^(sum of loops)
                let c = if a == b { c } else { -c };
                cov[a * r + b] = c;
                cov[b * r + a] = c;
            }
        }
        let tables: Vec<Vec<f64>> = (0..r)
            .map(|a| {
                let coeffs = &self.forms[tuple[a]].coeffs;
                block_table(coeffs, cov[a * r + a], &self.factorial, true)
            })
            .collect();
        weight * multigraph_sum(&tables, &cov, &self.factorial)
    }
}

/// `table[u]` is the total weight of block `a` when `u` of its slots are
/// matched to other blocks: `sum_l coeffs[l] l! c^h / (2^h h!)` over
/// `l = u + 2h`, with an extra `(-1)^h` when `phased`.
fn block_table(coeffs: &[f64], c: f64, factorial: &[f64], phased: bool) -> Vec<f64> {
    let top = coeffs.len().saturating_sub(1);
    (0..=top)
        .map(|u| {
            let mut s = 0.0;
            let mut l = u;
            while l <= top {
                let h = (l - u) / 2;
                if coeffs[l] != 0.0 {
                    let mut term = coeffs[l] * factorial[l] * c.powi(h as i32)
                        / (2f64.powi(h as i32) * factorial[h]);
                    if phased && h % 2 == 1 {
                        term = -term;
                    }
                    s += term;
                }
                l += 2;
            }
            s
        })
        .collect()
}

/// `kappa(Z_1^{p_1}, ..., Z_r^{p_r})` for jointly Gaussian `Z` with row-major
/// covariance `cov` (r x r), by enumerating connected block multigraphs.
pub fn block_power_cumulant(powers: &[usize], cov: &[f64]) -> f64 {
    let r = powers.len();
    assert_eq!(cov.len(), r * r, "covariance must be r x r");
    let max = powers.iter().copied().max().unwrap_or(0);
    let factorial = factorials(max);
    let tables: Vec<Vec<f64>> = powers
        .iter()
        .enumerate()
        .map(|(a, &p)| {
            let mut coeffs = vec![0.0; p + 1];
            coeffs[p] = 1.0;
            block_table(&coeffs, cov[a * r + a], &factorial, false)
        })
        .collect();
    multigraph_sum(&tables, cov, &factorial)
}

/// Sum over connected multigraphs on the blocks of
/// `prod_{a<b} c_ab^{m_ab} / m_ab! * prod_a table_a[u_a]`, where `u_a` is the
/// number of cross edges at `a`.
fn multigraph_sum(tables: &[Vec<f64>], cov: &[f64], factorial: &[f64]) -> f64 {
    let r = tables.len();
    assert!(r <= 32, "at most 32 blocks");
    if r == 0 {
        return 0.0;
    }
    if r == 1 {
        return tables[0].first().copied().unwrap_or(0.0);
    }
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|a| (a + 1..r).map(move |b| (a, b)))
        .collect();
    let mut walk = MultigraphWalk {
        r,
        cov,
        factorial,
        tables,
        pairs: &pairs,
        used: vec![0; r],
        links: vec![0u32; r],
        total: KahanSum::new(),
    };
    walk.visit(0, 1.0);
    walk.total.value()
}

struct MultigraphWalk<'a> {
    r: usize,
    cov: &'a [f64],
    factorial: &'a [f64],
    tables: &'a [Vec<f64>],
    pairs: &'a [(usize, usize)],
    used: Vec<usize>,
    /// Adjacency bitmasks of the cross edges chosen so far.
    links: Vec<u32>,
    total: KahanSum,
}

impl MultigraphWalk<'_> {
    /// Pairs are visited row by row, so block `a` is complete once pair
    /// `(a, r-1)` has been assigned; its table entry is applied then.
    fn visit(&mut self, at: usize, weight: f64) {
        if at == self.pairs.len() {
            let last = self.r - 1;
            let w = weight * self.entry(last);
            if w != 0.0 && self.connected() {
                self.total.add(w);
            }
            return;
        }
        let (a, b) = self.pairs[at];
        let row_ends = b == self.r - 1;
        let cap_a = self.tables[a].len() - 1 - self.used[a];
        let cap_b = self.tables[b].len() - 1 - self.used[b];
        let c = self.cov[a * self.r + b];
        let mut cpow = 1.0;
        for m in 0..=cap_a.min(cap_b) {
            if m > 0 {
                cpow *= c;
            }
            self.used[a] += m;
            self.used[b] += m;
            let mut w = weight * cpow / self.factorial[m];
            if row_ends {
                // a block with no cross edges cannot be connected
                w = if self.used[a] == 0 {
                    0.0
                } else {
                    w * self.entry(a)
                };
            }
            if w != 0.0 {
                let saved = (self.links[a], self.links[b]);
                if m > 0 {
                    self.links[a] |= 1 << b;
                    self.links[b] |= 1 << a;
                }
                self.visit(at + 1, w);
                self.links[a] = saved.0;
                self.links[b] = saved.1;
            }
            self.used[a] -= m;
            self.used[b] -= m;
            if c == 0.0 {
                break;
            }
        }
    }

    fn entry(&self, a: usize) -> f64 {
        self.tables[a][self.used[a]]
    }

    fn connected(&self) -> bool {
        let full = if self.r == 32 {
            u32::MAX
        } else {
            (1u32 << self.r) - 1
        };
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.links[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == full
    }
}
