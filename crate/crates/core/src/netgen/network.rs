use std::fmt::Write as _;

use crate::error::{param, Error, Result};

/// Bank-to-asset holding graph. Edges are stored sorted by `(bank, asset)`, so
/// the assets of each bank form one contiguous slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteNetwork {
    n_banks: usize,
    n_assets: usize,
    edges: Vec<(u32, u32)>,
    bank_offsets: Vec<usize>,
    bank_assets: Vec<u32>,
    bank_degrees: Vec<u32>,
    asset_degrees: Vec<u32>,
}

impl BipartiteNetwork {
    /// Builds a simple bipartite graph. Duplicate or out-of-range edges are rejected.
    pub fn from_edges(n_banks: usize, n_assets: usize, mut edges: Vec<(u32, u32)>) -> Result<Self> {
        if n_banks == 0 || n_assets == 0 {
            return Err(param("network needs at least one bank and one asset"));
        }
        if n_banks > u32::MAX as usize || n_assets > u32::MAX as usize {
            return Err(param("network too large"));
        }
        for &(b, a) in &edges {
            if b as usize >= n_banks || a as usize >= n_assets {
                return Err(param(format!("edge ({b}, {a}) out of range")));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(param(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }

        let mut bank_degrees = vec![0u32; n_banks];
        let mut asset_degrees = vec![0u32; n_assets];
        for &(b, a) in &edges {
            bank_degrees[b as usize] += 1;
            asset_degrees[a as usize] += 1;
        }
        let mut bank_offsets = Vec::with_capacity(n_banks + 1);
        bank_offsets.push(0);
        for &d in &bank_degrees {
            bank_offsets.push(bank_offsets.last().unwrap() + d as usize);
        }
        let bank_assets = edges.iter().map(|&(_, a)| a).collect();

        Ok(Self {
            n_banks,
            n_assets,
            edges,
            bank_offsets,
            bank_assets,
            bank_degrees,
            asset_degrees,
        })
    }

    pub fn n_banks(&self) -> usize {
        self.n_banks
    }

    pub fn n_assets(&self) -> usize {
        self.n_assets
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic `(bank, asset)` order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn bank_degrees(&self) -> &[u32] {
        &self.bank_degrees
    }

    pub fn asset_degrees(&self) -> &[u32] {
        &self.asset_degrees
    }

    /// Assets held by `bank`, ascending.
    pub fn assets_of(&self, bank: usize) -> &[u32] {
        &self.bank_assets[self.bank_offsets[bank]..self.bank_offsets[bank + 1]]
    }

    pub fn mean_bank_degree(&self) -> f64 {
        self.edges.len() as f64 / self.n_banks as f64
    }

    pub fn mean_asset_degree(&self) -> f64 {
        self.edges.len() as f64 / self.n_assets as f64
    }

    pub fn isolated_banks(&self) -> impl Iterator<Item = usize> + '_ {
        self.bank_degrees
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| i)
    }

    /// Pearson correlation between bank degree and asset degree taken over edges.
    /// Returns 0 when either side has no degree variance across edges.
    pub fn degree_correlation(&self) -> f64 {
        let n = self.edges.len() as f64;
        if self.edges.is_empty() {
            return 0.0;
        }
        let (mut sk, mut sl, mut skk, mut sll, mut skl) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(b, a) in &self.edges {
            let k = self.bank_degrees[b as usize] as f64;
            let l = self.asset_degrees[a as usize] as f64;
            sk += k;
            sl += l;
            skk += k * k;
            sll += l * l;
            skl += k * l;
        }
        let cov = skl / n - (sk / n) * (sl / n);
        let vk = skk / n - (sk / n).powi(2);
        let vl = sll / n - (sl / n).powi(2);
        if vk <= 1e-12 || vl <= 1e-12 {
            0.0
        } else {
            cov / (vk * vl).sqrt()
        }
    }

    /// Serialises to the edge-list text format: a `banks=<N> assets=<M>` header
    /// followed by one zero-based `<bank> <asset>` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 8);
        writeln!(out, "banks={} assets={}", self.n_banks, self.n_assets).unwrap();
        for &(b, a) in &self.edges {
            writeln!(out, "{b} {a}").unwrap();
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (n_banks, n_assets) = parse_header(header).ok_or(Error::Parse {
            line: 1,
            message: format!("expected `banks=<N> assets=<M>`, got `{header}`"),
        })?;
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let bad = || Error::Parse {
                line: idx + 1,
                message: format!("expected `<bank> <asset>`, got `{line}`"),
            };
            let mut parts = line.split_whitespace();
            let b = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let a = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if parts.next().is_some() {
                return Err(bad());
            }
            edges.push((b, a));
        }
        Self::from_edges(n_banks, n_assets, edges)
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let n = parts.next()?.strip_prefix("banks=")?.parse().ok()?;
    let m = parts.next()?.strip_prefix("assets=")?.parse().ok()?;
    parts.next().is_none().then_some((n, m))
}
