//! Degree-preserving double-edge swaps toward assortative or disassortative mixing.

use rand::Rng;

use super::BipartiteNetwork;
use crate::scalar::Scalar;

/// Cost `H = -J · Σ_{(i,j) ∈ edges} k_i · l_j`, each edge counted once.
pub fn cost_h<T: Scalar>(net: &BipartiteNetwork, j: T) -> T {
    if j == T::zero() {
        return T::zero();
    }
    -j * T::of(degree_product_sum(net) as f64)
}

/// `Σ k_i · l_j` over edges.
pub fn degree_product_sum(net: &BipartiteNetwork) -> i64 {
    let (k, l) = (net.bank_degrees(), net.asset_degrees());
    net.edges()
        .iter()
        .map(|&(b, a)| k[b as usize] as i64 * l[a as usize] as i64)
        .sum()
}

/// Budget for the swap search. `None` picks the defaults, which scale with the
/// edge count: 200·|E| proposals, and a stall after 10·|E| consecutive rejections.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RewireOptions {
    pub max_proposals: Option<usize>,
    pub stall_window: Option<usize>,
}

impl RewireOptions {
    fn resolve(self, n_edges: usize) -> (usize, usize) {
        (
            self.max_proposals.unwrap_or(200 * n_edges),
            self.stall_window.unwrap_or(10 * n_edges).max(1),
        )
    }
}

/// Greedy descent on [`cost_h`] by double-edge swaps.
///
/// A proposal picks edges `(i1, j1)`, `(i2, j2)` and tries `(i1, j2)`, `(i2, j1)`.
/// Swaps that would duplicate an edge are rejected; the rest are accepted iff
/// the cost does not increase. Only the sign of `j` matters.
pub fn rewire_assortativity<T: Scalar, R: Rng + ?Sized>(
    net: &BipartiteNetwork,
    j: T,
    options: RewireOptions,
    rng: &mut R,
) -> BipartiteNetwork {
    rewire_traced(net, j, options, rng, |_| {})
}

/// As [`rewire_assortativity`], calling `on_accept` with `Σ k·l` after every accepted swap.
pub(crate) fn rewire_traced<T: Scalar, R: Rng + ?Sized>(
    net: &BipartiteNetwork,
    j: T,
    options: RewireOptions,
    rng: &mut R,
    mut on_accept: impl FnMut(i64),
) -> BipartiteNetwork {
    if j == T::zero() || net.n_edges() < 2 {
        return net.clone();
    }
    let direction: i64 = if j > T::zero() { 1 } else { -1 };
    let (max_proposals, stall_window) = options.resolve(net.n_edges());
    let k = net.bank_degrees();
    let l = net.asset_degrees();

    let mut swapper = Swapper::new(net);
    let mut sum = degree_product_sum(net);
    let mut rejections = 0usize;
    for _ in 0..max_proposals {
        let accepted = swapper.propose(rng, |(i1, j1), (i2, j2)| {
            // Change in Σ k·l produced by the swap.
            let gain = (k[i1 as usize] as i64 - k[i2 as usize] as i64)
                * (l[j2 as usize] as i64 - l[j1 as usize] as i64);
            (direction * gain >= 0).then_some(gain)
        });
        match accepted {
            Some(gain) => {
                sum += gain;
                on_accept(sum);
                rejections = 0;
            }
            None => {
                rejections += 1;
                if rejections >= stall_window {
                    break;
                }
            }
        }
    }
    swapper.into_network(net)
}

/// Applies `n_swaps` proposals accepting every swap that keeps the graph simple.
pub(crate) fn randomize<R: Rng + ?Sized>(
    net: &BipartiteNetwork,
    n_swaps: usize,
    rng: &mut R,
) -> BipartiteNetwork {
    if net.n_edges() < 2 {
        return net.clone();
    }
    let mut swapper = Swapper::new(net);
    for _ in 0..n_swaps {
        swapper.propose(rng, |_, _| Some(()));
    }
    swapper.into_network(net)
}

/// Mutable edge list plus an occupancy bitmap for O(1) duplicate checks.
struct Swapper {
    n_assets: usize,
    edges: Vec<(u32, u32)>,
    occupied: Vec<u64>,
}

impl Swapper {
    fn new(net: &BipartiteNetwork) -> Self {
        let cells = net.n_banks() * net.n_assets();
        let mut s = Self {
            n_assets: net.n_assets(),
            edges: net.edges().to_vec(),
            occupied: vec![0; cells.div_ceil(64)],
        };
        for &(b, a) in net.edges() {
            s.set(b, a, true);
        }
        s
    }

    fn cell(&self, b: u32, a: u32) -> usize {
        b as usize * self.n_assets + a as usize
    }

    fn has(&self, b: u32, a: u32) -> bool {
        let c = self.cell(b, a);
        self.occupied[c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, b: u32, a: u32, on: bool) {
        let c = self.cell(b, a);
        if on {
            self.occupied[c / 64] |= 1 << (c % 64);
        } else {
            self.occupied[c / 64] &= !(1 << (c % 64));
        }
    }

    /// One proposal. `decide` sees the two chosen edges and returns `Some` to accept.
    fn propose<R: Rng + ?Sized, V>(
        &mut self,
        rng: &mut R,
        decide: impl FnOnce((u32, u32), (u32, u32)) -> Option<V>,
    ) -> Option<V> {
        let n = self.edges.len();
        let e1 = rng.random_range(0..n);
        let e2 = rng.random_range(0..n);
        let (i1, j1) = self.edges[e1];
        let (i2, j2) = self.edges[e2];
        if i1 == i2 || j1 == j2 || self.has(i1, j2) || self.has(i2, j1) {
            return None;
        }
        let verdict = decide((i1, j1), (i2, j2))?;
        self.set(i1, j1, false);
        self.set(i2, j2, false);
        self.set(i1, j2, true);
        self.set(i2, j1, true);
        self.edges[e1] = (i1, j2);
        self.edges[e2] = (i2, j1);
        Some(verdict)
    }

    fn into_network(self, template: &BipartiteNetwork) -> BipartiteNetwork {
        BipartiteNetwork::from_edges(template.n_banks(), template.n_assets(), self.edges)
            .expect("swaps keep the graph simple and in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::SimRng;
    use rand::SeedableRng;
    use std::collections::{BTreeSet, VecDeque};

    fn net(n: usize, m: usize, edges: &[(u32, u32)]) -> BipartiteNetwork {
        BipartiteNetwork::from_edges(n, m, edges.to_vec()).unwrap()
    }

    #[test]
    fn cost_examples() {
        assert_eq!(cost_h(&net(1, 1, &[(0, 0)]), 1.0), -1.0);
        assert_eq!(cost_h(&net(1, 2, &[(0, 0), (0, 1)]), 1.0), -4.0);
        assert_eq!(cost_h(&net(1, 2, &[(0, 0), (0, 1)]), 0.0), 0.0);
        assert_eq!(cost_h(&net(1, 2, &[(0, 0), (0, 1)]), -0.5f32), 2.0);
    }

    #[test]
    fn complete_bipartite_is_fixed() {
        let edges: Vec<_> = (0..3).flat_map(|b| (0..4).map(move |a| (b, a))).collect();
        let g = net(3, 4, &edges);
        let mut rng = SimRng::seed_from_u64(5);
        assert_eq!(rewire_assortativity(&g, 1.0, RewireOptions::default(), &mut rng), g);
    }

    #[test]
    fn zero_coupling_returns_input() {
        let g = net(3, 3, &[(0, 0), (0, 1), (1, 0), (2, 2)]);
        let mut rng = SimRng::seed_from_u64(5);
        assert_eq!(rewire_assortativity(&g, 0.0, RewireOptions::default(), &mut rng), g);
    }

    /// All networks reachable from `start` through simple double-edge swaps.
    fn reachable(start: &BipartiteNetwork) -> Vec<BipartiteNetwork> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start.edges().to_vec()]);
        seen.insert(start.edges().to_vec());
        while let Some(edges) = queue.pop_front() {
            let set: BTreeSet<_> = edges.iter().copied().collect();
            for x in 0..edges.len() {
                for y in 0..edges.len() {
                    let ((i1, j1), (i2, j2)) = (edges[x], edges[y]);
                    if i1 == i2 || j1 == j2 || set.contains(&(i1, j2)) || set.contains(&(i2, j1)) {
                        continue;
                    }
                    let mut next = edges.clone();
                    next[x] = (i1, j2);
                    next[y] = (i2, j1);
                    next.sort_unstable();
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        seen.into_iter()
            .map(|e| BipartiteNetwork::from_edges(start.n_banks(), start.n_assets(), e).unwrap())
            .collect()
    }

    #[test]
    fn greedy_reaches_brute_force_optimum_on_small_graph() {
        let g = net(3, 3, &[(0, 0), (0, 1), (1, 0), (2, 2)]);
        let all = reachable(&g);
        assert!(all.len() > 1);
        for &j in &[1.0, -1.0] {
            let best = all.iter().map(|n| cost_h(n, j)).fold(f64::INFINITY, f64::min);
            for seed in 0..20 {
                let mut rng = SimRng::seed_from_u64(seed);
                let out = rewire_assortativity(&g, j, RewireOptions::default(), &mut rng);
                assert_eq!(cost_h(&out, j), best, "J={j} seed={seed}");
            }
        }
        // Disassortative optimum keeps the degree-2 bank away from the degree-2 asset.
        let best_neg = all.iter().map(|n| cost_h(n, -1.0)).fold(f64::INFINITY, f64::min);
        assert_eq!(best_neg, 8.0);
    }

    #[test]
    fn accepted_costs_never_increase() {
        let mut rng = SimRng::seed_from_u64(11);
        let g = crate::netgen::generate_network(
            60,
            60,
            crate::netgen::DegreeSpec::PowerLaw { gamma: 2.5, mean: 4.0 },
            crate::netgen::DegreeSpec::Poisson { mean: 4.0 },
            &mut rng,
        )
        .unwrap();
        for &j in &[1.0, -1.0] {
            let mut trace = vec![degree_product_sum(&g)];
            let out = rewire_traced(&g, j, RewireOptions::default(), &mut rng, |s| trace.push(s));
            assert!(trace.len() > 1);
            for w in trace.windows(2) {
                // H = -J·sum is non-increasing.
                assert!(-j * w[1] as f64 <= -j * w[0] as f64);
            }
            assert_eq!(*trace.last().unwrap(), degree_product_sum(&out));
        }
    }

    #[test]
    fn randomize_preserves_degrees() {
        let g = net(4, 4, &[(0, 0), (0, 1), (1, 1), (2, 2), (3, 3), (3, 0)]);
        let mut rng = SimRng::seed_from_u64(2);
        let r = randomize(&g, 100, &mut rng);
        assert_eq!(r.bank_degrees(), g.bank_degrees());
        assert_eq!(r.asset_degrees(), g.asset_degrees());
    }
}
