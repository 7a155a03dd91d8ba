//! Gaussian moments by perfect matchings (Isserlis/Wick) and joint cumulants
//! of products by connected matchings.
//!
//! Variables are opaque ids; `cov(a, b)` supplies their covariance. Both
//! functions enumerate matchings slot by slot, always pairing the first
//! unmatched slot, so `k` slots visit exactly `(k-1)!!` matchings.

use crate::error::{Error, Result};

pub const MAX_SLOTS: usize = 16;

/// `(k-1)!!` for even `k`, 0 for odd `k`.
pub fn matching_count(k: usize) -> u128 {
    if k % 2 == 1 {
        return 0;
    }
    (1..k as u128).step_by(2).product()
}

/// `E[X_{i_1} ... X_{i_k}]`.
pub fn gaussian_moment<F>(indices: &[usize], cov: F) -> Result<f64>
where
    F: Fn(usize, usize) -> f64,
{
    gaussian_moment_counted(indices, cov).map(|(v, _)| v)
}

/// Like [`gaussian_moment`] but also returns how many matchings were summed.
pub fn gaussian_moment_counted<F>(indices: &[usize], cov: F) -> Result<(f64, u128)>
where
    F: Fn(usize, usize) -> f64,
{
    let blocks = vec![0usize; indices.len()];
    enumerate(indices, &blocks, 1, false, &cov)
}

/// `kappa(prod block_1, ..., prod block_r)` as the sum over matchings of all
/// slots whose block graph is connected.
pub fn joint_cumulant<F>(blocks: &[Vec<usize>], cov: F) -> Result<f64>
where
    F: Fn(usize, usize) -> f64,
{
    if blocks.is_empty() {
        return Err(Error::domain("joint cumulant needs at least one block"));
    }
    let vars: Vec<usize> = blocks.iter().flatten().copied().collect();
    let owner: Vec<usize> = blocks
        .iter()
        .enumerate()
        .flat_map(|(b, block)| std::iter::repeat_n(b, block.len()))
        .collect();
    enumerate(&vars, &owner, blocks.len(), true, &cov).map(|(v, _)| v)
}

fn enumerate<F>(
    vars: &[usize],
    owner: &[usize],
    nblocks: usize,
    connected_only: bool,
    cov: &F,
) -> Result<(f64, u128)>
where
    F: Fn(usize, usize) -> f64,
{
    let k = vars.len();
    if k > MAX_SLOTS {
        return Err(Error::domain(format!(
            "{k} slots exceed the pairing enumeration cap of {MAX_SLOTS}"
        )));
    }
    if k % 2 == 1 {
        return Ok((0.0, 0));
    }
    let mut walk = Walk {
        vars,
        owner,
        nblocks,
        connected_only,
        cov,
        used: vec![false; k],
        links: Vec::with_capacity(k / 2),
        total: 0.0,
        count: 0,
    };
    walk.step(1.0);
    Ok((walk.total, walk.count))
}

struct Walk<'a, F> {
    vars: &'a [usize],
    owner: &'a [usize],
    nblocks: usize,
    connected_only: bool,
    cov: &'a F,
    used: Vec<bool>,
    links: Vec<(usize, usize)>,
    total: f64,
    count: u128,
}

impl<F: Fn(usize, usize) -> f64> Walk<'_, F> {
    fn step(&mut self, product: f64) {
        let Some(i) = self.used.iter().position(|&u| !u) else {
            self.count += 1;
            if !self.connected_only || self.connected() {
                self.total += product;
            }
            return;
        };
        self.used[i] = true;
        for j in i + 1..self.vars.len() {
            if self.used[j] {
                continue;
            }
            self.used[j] = true;
            self.links.push((self.owner[i], self.owner[j]));
            let c = (self.cov)(self.vars[i], self.vars[j]);
            self.step(product * c);
            self.links.pop();
            self.used[j] = false;
        }
        self.used[i] = false;
    }

    fn connected(&self) -> bool {
        let mut adj = vec![0u32; self.nblocks];
        for &(a, b) in &self.links {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let full = if self.nblocks == 32 {
            u32::MAX
        } else {
            (1u32 << self.nblocks) - 1
        };
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen == full
    }
}
