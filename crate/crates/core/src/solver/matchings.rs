use crate::cycle::{Matching, Topology, TopologyKind};
use crate::error::{Error, Result};

pub const MAX_MATCHING_N: usize = 16;

/// Every nonempty matching of a cycle or path, as edge bitmasks.
///
/// Bit `t - 1` of a mask stands for the edge with tail `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingSet {
    topology: Topology,
    masks: Vec<u32>,
}

pub fn enumerate_matchings(topology: Topology) -> Result<MatchingSet> {
    let n = topology.n();
    if n > MAX_MATCHING_N {
        return Err(Error::BoundExceeded { n, bound: MAX_MATCHING_N });
    }
    let m = topology.edge_count();
    let wraps = topology.kind() == TopologyKind::Cycle;
    let mut masks = Vec::new();
    extend(0, 0, m, wraps, &mut masks);
    masks.retain(|&x| x != 0);
    Ok(MatchingSet { topology, masks })
}

fn extend(edge: usize, mask: u32, m: usize, wraps: bool, out: &mut Vec<u32>) {
    if edge == m {
        out.push(mask);
        return;
    }
    extend(edge + 1, mask, m, wraps, out);
    let prev_taken = edge > 0 && mask >> (edge - 1) & 1 == 1;
    let closes_ring = wraps && edge == m - 1 && mask & 1 == 1;
    if !prev_taken && !closes_ring {
        extend(edge + 1, mask | 1 << edge, m, wraps, out);
    }
}

impl MatchingSet {
    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn to_matching(&self, mask: u32) -> Matching {
        (0..self.topology.edge_count())
            .filter(|&e| mask >> e & 1 == 1)
            .map(|e| (e + 1, self.topology.head(e + 1)))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Matching> + '_ {
        self.masks.iter().map(|&m| self.to_matching(m))
    }

    /// The vertex involution of `mask` on 0-based vertices.
    pub fn involution(&self, mask: u32) -> [u8; MAX_MATCHING_N] {
        let n = self.topology.n();
        let mut tau = [0u8; MAX_MATCHING_N];
        for (v, t) in tau.iter_mut().enumerate().take(n) {
            *t = v as u8;
        }
        for e in 0..self.topology.edge_count() {
            if mask >> e & 1 == 1 {
                let (u, v) = (e, (e + 1) % n);
                tau[u] = v as u8;
                tau[v] = u as u8;
            }
        }
        tau
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(topology: Topology) -> usize {
        let edges: Vec<(usize, usize)> = topology.edges().collect();
        (1u32..1 << edges.len())
            .filter(|&mask| {
                let mut seen = vec![false; topology.n() + 1];
                edges.iter().enumerate().filter(|(e, _)| mask >> e & 1 == 1).all(|(_, &(u, v))| {
                    let fresh = !seen[u] && !seen[v];
                    seen[u] = true;
                    seen[v] = true;
                    fresh
                })
            })
            .count()
    }

    #[test]
    fn counts_match_brute_force() {
        assert_eq!(enumerate_matchings(Topology::cycle(4).unwrap()).unwrap().len(), 6);
        assert_eq!(enumerate_matchings(Topology::cycle(6).unwrap()).unwrap().len(), 17);
        assert_eq!(enumerate_matchings(Topology::path(4).unwrap()).unwrap().len(), 4);
        for n in 3..=12 {
            let c = Topology::cycle(n).unwrap();
            assert_eq!(enumerate_matchings(c).unwrap().len(), brute_force(c), "C_{n}");
            let p = Topology::path(n).unwrap();
            assert_eq!(enumerate_matchings(p).unwrap().len(), brute_force(p), "P_{n}");
        }
    }

    #[test]
    fn lucas_and_fibonacci_counts() {
        let (mut l0, mut l1) = (2u64, 1u64);
        let (mut f0, mut f1) = (1u64, 1u64);
        for n in 2..=16 {
            let (l2, f2) = (l0 + l1, f0 + f1);
            (l0, l1, f0, f1) = (l1, l2, f1, f2);
            if n >= 3 {
                let c = enumerate_matchings(Topology::cycle(n).unwrap()).unwrap();
                assert_eq!(c.len() as u64, l1 - 1, "C_{n}");
            }
            let p = enumerate_matchings(Topology::path(n).unwrap()).unwrap();
            assert_eq!(p.len() as u64, f1 - 1, "P_{n}");
        }
    }

    #[test]
    fn members_are_valid_and_distinct() {
        let c = Topology::cycle(8).unwrap();
        let set = enumerate_matchings(c).unwrap();
        let mut masks = set.masks().to_vec();
        masks.sort();
        masks.dedup();
        assert_eq!(masks.len(), set.len());
        for m in set.iter() {
            assert!(c.check_matching(&m).is_ok());
        }
        assert!(enumerate_matchings(Topology::cycle(17).unwrap()).is_err());
    }
}
