//! Simple undirected graphs, degree sequences and the spectral quantities
//! used to judge whether a graph is dense and well-connected enough for the
//! asymptotic formula.
//!
//! Vertices are 0-based internally; every text format uses 1-based labels.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// A simple labelled graph stored as a dense adjacency matrix plus a sorted
/// edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Builds a graph on `n` vertices from 0-based edges.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (j, k) in edges {
            g.insert_edge(j, k).map_err(Error::domain)?;
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![false; n * n],
            edges: Vec::new(),
            degrees: vec![0; n],
        }
    }

    fn insert_edge(&mut self, j: usize, k: usize) -> std::result::Result<(), String> {
        if j >= self.n || k >= self.n {
            return Err(format!(
                "edge {{{}, {}}} out of range for n = {}",
                j + 1,
                k + 1,
                self.n
            ));
        }
        if j == k {
            return Err(format!("self-loop at vertex {}", j + 1));
        }
        if self.adj[j * self.n + k] {
            return Err(format!("duplicate edge {{{}, {}}}", j + 1, k + 1));
        }
        self.adj[j * self.n + k] = true;
        self.adj[k * self.n + j] = true;
        self.edges.push((j.min(k), j.max(k)));
        self.degrees[j] += 1;
        self.degrees[k] += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(j, k)` with `j < k`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, j: usize) -> usize {
        self.degrees[j]
    }

    pub fn has_edge(&self, j: usize, k: usize) -> bool {
        j < self.n && k < self.n && self.adj[j * self.n + k]
    }

    pub fn neighbors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&k| self.adj[j * self.n + k])
    }

    /// Position of edge `{j, k}` in [`Graph::edges`].
    pub fn edge_index(&self, j: usize, k: usize) -> Option<usize> {
        let key = (j.min(k), j.max(k));
        self.edges.binary_search(&key).ok()
    }

    /// `G - uv`.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::domain(format!(
                "{{{}, {}}} is not an edge",
                u + 1,
                v + 1
            )));
        }
        let key = (u.min(v), u.max(v));
        Graph::new(self.n, self.edges.iter().copied().filter(|&e| e != key))
    }

    /// Relabels vertex `j` as `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: perm.len(),
            });
        }
        Graph::new(self.n, self.edges.iter().map(|&(j, k)| (perm[j], perm[k])))
    }

    /// Connected components as vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Canonical edge-list text: an `n=` header followed by sorted 1-based pairs.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for &(j, k) in &self.edges {
            let _ = writeln!(s, "{} {}", j + 1, k + 1);
        }
        s
    }

    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        let n = self.n;
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.extend([126, 126]);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut nbits = 0;
        for k in 1..n {
            for j in 0..k {
                acc = (acc << 1) | self.has_edge(j, k) as u8;
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }
}

/// Parses newline-separated `j k` pairs of 1-based vertex labels. An optional
/// first line `n=<int>` fixes the vertex count; otherwise it is the largest
/// label seen. `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header_n: Option<usize> = None;
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            if seen_content {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "header n=<int> must come before any edge".into(),
                });
            }
            let n = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad vertex count {:?}", rest.trim()),
            })?;
            header_n = Some(n);
            seen_content = true;
            continue;
        }
        seen_content = true;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two vertex labels, found {}", tokens.len()),
            });
        }
        let mut ends = [0usize; 2];
        for (slot, tok) in ends.iter_mut().zip(&tokens) {
            let v = tok.parse::<i64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not an integer: {tok:?}"),
            })?;
            if v < 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("vertex labels start at 1, found {v}"),
                });
            }
            *slot = v as usize;
        }
        pairs.push((line_no, ends[0], ends[1]));
    }

    let max_label = pairs.iter().map(|&(_, j, k)| j.max(k)).max().unwrap_or(0);
    let n = match header_n {
        Some(n) => n,
        None => max_label,
    };
    let mut g = Graph::empty(n);
    for (line, j, k) in pairs {
        g.insert_edge(j - 1, k - 1)
            .map_err(|msg| Error::Parse { line, msg })?;
    }
    g.edges.sort_unstable();
    Ok(g)
}

/// Parses one graph in the standard graph6 ASCII encoding.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    let bad = |msg: &str| Error::Parse {
        line: 1,
        msg: msg.to_string(),
    };
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("graph6 bytes must lie in 63..=126"));
    }
    let (n, body) = match bytes {
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(bad("truncated graph6 size"));
            }
            let n = rest[..6]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(bad("truncated graph6 size"));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[3..])
        }
        [b, rest @ ..] => ((*b - 63) as usize, rest),
        [] => return Err(bad("empty graph6 string")),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if body.len() != needed {
        return Err(bad(&format!(
            "graph6 body has {} bytes, expected {needed} for n = {n}",
            body.len()
        )));
    }
    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    for k in 1..n {
        for j in 0..k {
            let byte = body[bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                g.insert_edge(j, k)
                    .map_err(|msg| Error::Parse { line: 1, msg })?;
            }
            bit += 1;
        }
    }
    g.edges.sort_unstable();
    Ok(g)
}

/// `K_n`.
pub fn complete_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::domain(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    Graph::new(n, (0..n).flat_map(|j| (j + 1..n).map(move |k| (j, k))))
}

/// Target degree vector `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(d: Vec<usize>) -> Self {
        DegreeSequence(d)
    }

    pub fn regular(n: usize, d: usize) -> Self {
        DegreeSequence(vec![d; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn has_even_sum(&self) -> bool {
        self.sum().is_multiple_of(2)
    }

    /// Checks the length against `g` and that `d_j <= g_j` everywhere.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        if self.len() != g.n() {
            return Err(Error::Dimension {
                expected: g.n(),
                found: self.len(),
            });
        }
        if let Some(j) = (0..g.n()).find(|&j| self.0[j] > g.degree(j)) {
            return Err(Error::domain(format!(
                "d_{} = {} exceeds the degree {} of vertex {} in G",
                j + 1,
                self.0[j],
                g.degree(j),
                j + 1
            )));
        }
        Ok(())
    }

    /// Edge density `lambda = sum(d) / sum(g)` and `Lambda = lambda (1 - lambda)`.
    pub fn density(&self, g: &Graph) -> (f64, f64) {
        let total: usize = g.degrees().iter().sum();
        if total == 0 {
            return (0.0, 0.0);
        }
        let lambda = self.sum() as f64 / total as f64;
        (lambda, lambda * (1.0 - lambda))
    }

    /// `g - d`, the degree sequence of complementary factors within `g`.
    pub fn complement_in(&self, g: &Graph) -> Result<DegreeSequence> {
        self.check_against(g)?;
        Ok(DegreeSequence(
            self.0
                .iter()
                .zip(g.degrees())
                .map(|(&d, &gj)| gj - d)
                .collect(),
        ))
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(d: Vec<usize>) -> Self {
        DegreeSequence(d)
    }
}

impl std::ops::Index<usize> for DegreeSequence {
    type Output = usize;
    fn index(&self, j: usize) -> &usize {
        &self.0[j]
    }
}

pub fn signless_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            g.degree(j) as f64
        } else if g.has_edge(j, k) {
            1.0
        } else {
            0.0
        }
    })
}

pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            g.degree(j) as f64
        } else if g.has_edge(j, k) {
            -1.0
        } else {
            0.0
        }
    })
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Least eigenvalue `q(G)` of the signless Laplacian. It is zero exactly when
/// some component of `G` is bipartite; rounding noise below zero is clamped.
pub fn algebraic_bipartiteness(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    sorted_eigenvalues(signless_laplacian(g))[0].max(0.0)
}

/// Result of [`cheeger`]: always a certified lower bound, plus the exact
/// value when the graph was small enough to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CheegerBound {
    pub lower_bound: f64,
    pub exact: Option<f64>,
}

pub const DEFAULT_CHEEGER_EXACT_LIMIT: usize = 20;

/// Isoperimetric constant `h(G) = min |dU| / |U|` over `1 <= |U| <= n/2`.
///
/// Exact by subset enumeration when `n <= exact_limit` (and `n <= 63`);
/// otherwise the spectral bound `lambda_2(L) / 2` is returned as the lower bound.
pub fn cheeger(g: &Graph, exact_limit: usize) -> CheegerBound {
    let n = g.n();
    if n < 2 {
        return CheegerBound {
            lower_bound: 0.0,
            exact: None,
        };
    }
    if n <= exact_limit && n <= 63 {
        let h = cheeger_exact(g);
        return CheegerBound {
            lower_bound: h,
            exact: Some(h),
        };
    }
    let ev = sorted_eigenvalues(laplacian(g));
    CheegerBound {
        lower_bound: (ev[1] / 2.0).max(0.0),
        exact: None,
    }
}

fn cheeger_exact(g: &Graph) -> f64 {
    let n = g.n();
    let adj: Vec<u64> = (0..n)
        .map(|j| g.neighbors(j).fold(0u64, |m, k| m | 1 << k))
        .collect();
    let half = n / 2;
    let mut best = f64::INFINITY;
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size > half {
            continue;
        }
        let mut boundary = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            boundary += (adj[u] & !mask).count_ones();
            rest &= rest - 1;
        }
        best = best.min(boundary as f64 / size as f64);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|j| (j, (j + 1) % n))).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.degrees(), &[1, 2, 1]);

        let g = parse_edge_list("n=4\n1 2").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.degrees(), &[1, 1, 0, 0]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        for (text, line) in [
            ("1 1", 1),
            ("1 2\n\n2 1", 3),
            ("1 2\n0 3", 2),
            ("1 x", 1),
            ("1 2 3", 1),
            ("n=2\n1 3", 2),
        ] {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn graph6_known_strings() {
        // K_4 is "C~", the 5-cycle 1-2-3-4-5 is "Dhc".
        let k4 = parse_graph6("C~").unwrap();
        assert_eq!(k4, complete_graph(4).unwrap());
        assert_eq!(k4.to_graph6(), "C~");
        assert_eq!(cycle(5).to_graph6(), "Dhc");
        assert_eq!(parse_graph6(">>graph6<<Dhc").unwrap(), cycle(5));
        assert!(parse_graph6("C~~").is_err());
    }

    #[test]
    fn complete_graph_sizes() {
        let k3 = complete_graph(3).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(k3.degrees(), &[2, 2, 2]);
        assert_eq!(complete_graph(4).unwrap().edge_count(), 6);
        assert!(complete_graph(1).is_err());
    }

    #[test]
    fn signless_laplacian_examples() {
        let q = signless_laplacian(&complete_graph(3).unwrap());
        assert_eq!(
            q,
            DMatrix::from_row_slice(3, 3, &[2., 1., 1., 1., 2., 1., 1., 1., 2.])
        );
        let q = signless_laplacian(&complete_graph(2).unwrap());
        assert_eq!(q, DMatrix::from_row_slice(2, 2, &[1., 1., 1., 1.]));
        let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            signless_laplacian(&path),
            DMatrix::from_row_slice(3, 3, &[1., 1., 0., 1., 2., 1., 0., 1., 1.])
        );
    }

    #[test]
    fn bipartiteness_small_cases() {
        assert!(algebraic_bipartiteness(&complete_graph(2).unwrap()).abs() < 1e-12);
        assert!((algebraic_bipartiteness(&complete_graph(3).unwrap()) - 1.0).abs() < 1e-12);
        for n in 4..=10 {
            let q = algebraic_bipartiteness(&complete_graph(n).unwrap());
            assert!((q - (n as f64 - 2.0)).abs() < 1e-9 * n as f64, "n={n}: {q}");
        }
        assert!(algebraic_bipartiteness(&cycle(6)) < 1e-9);
        assert!(algebraic_bipartiteness(&cycle(7)) > 1e-3);
    }

    #[test]
    fn cheeger_examples() {
        let k4 = cheeger(&complete_graph(4).unwrap(), 20);
        assert_eq!(k4.exact, Some(2.0));
        assert_eq!(cheeger(&complete_graph(2).unwrap(), 20).exact, Some(1.0));
        let two_triangles =
            Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(cheeger(&two_triangles, 20).exact, Some(0.0));
        for n in 2..=9 {
            let h = cheeger(&complete_graph(n).unwrap(), 20).exact.unwrap();
            assert_eq!(h, n.div_ceil(2) as f64, "K_{n}");
        }
    }

    #[test]
    fn spectral_bound_when_too_large() {
        let k = complete_graph(8).unwrap();
        let b = cheeger(&k, 4);
        assert!(b.exact.is_none());
        // lambda_2(L(K_n)) = n
        assert!((b.lower_bound - 4.0).abs() < 1e-9);
        assert!(b.lower_bound <= cheeger(&k, 20).exact.unwrap() + 1e-9);
    }

    #[test]
    fn degree_sequence_checks() {
        let g = complete_graph(4).unwrap();
        let d = DegreeSequence::regular(4, 2);
        assert!(d.check_against(&g).is_ok());
        let (lambda, big) = d.density(&g);
        assert!((lambda - 2.0 / 3.0).abs() < 1e-15);
        assert!((big - 2.0 / 9.0).abs() < 1e-15);
        assert!(DegreeSequence::new(vec![4, 0, 0, 0])
            .check_against(&g)
            .is_err());
        assert!(DegreeSequence::new(vec![1, 1]).check_against(&g).is_err());
        assert_eq!(d.complement_in(&g).unwrap(), DegreeSequence::regular(4, 1));
    }
}
