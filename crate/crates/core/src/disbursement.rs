//! Spins and disbursements.
//!
//! The spin of a pebble is its signed remaining displacement: positive means
//! it still has to travel clockwise. On a cycle each pebble has two candidate
//! spins, `a` and `a - n`, where `a` is the clockwise distance to its
//! destination; a choice of one spin per pebble is a valid disbursement iff
//! the spins sum to zero. On a path the spin is forced to `dest - pos`.

use crate::cycle::{d_plus, Matching, Permutation, Placement, Topology, TopologyKind};
use crate::error::{Error, Result};

/// Largest `n` for which disbursements are enumerated exhaustively.
pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

/// Pebble placement together with one spin per pebble.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinState {
    topology: Topology,
    placement: Placement,
    spins: Vec<i32>,
}

impl SpinState {
    /// Initial state of `π` with the given spins.
    pub fn new(topology: Topology, pi: &Permutation, spins: Vec<i32>) -> Result<Self> {
        if pi.n() != topology.n() {
            return Err(Error::LengthMismatch { expected: topology.n(), got: pi.n() });
        }
        Self::from_placement(topology, Placement::from_permutation(pi), spins)
    }

    pub fn from_placement(topology: Topology, placement: Placement, spins: Vec<i32>) -> Result<Self> {
        let n = topology.n();
        if spins.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: spins.len() });
        }
        if placement.n() != n {
            return Err(Error::LengthMismatch { expected: n, got: placement.n() });
        }
        for (k, &s) in spins.iter().enumerate() {
            let p = k + 1;
            let pos = placement.position(p);
            let ok = match topology.kind() {
                TopologyKind::Cycle => {
                    let a = d_plus(pos, p, n) as i32;
                    s == a || s == a - n as i32
                }
                TopologyKind::Path => s == p as i32 - pos as i32,
            };
            if !ok {
                return Err(Error::InvalidDisbursement(format!(
                    "spin {s} of pebble {p} at v{pos} does not reach v{p}"
                )));
            }
        }
        let sum: i32 = spins.iter().sum();
        if sum != 0 {
            return Err(Error::InvalidDisbursement(format!("spins sum to {sum}")));
        }
        Ok(SpinState { topology, placement, spins })
    }

    /// The unique spin state of `π` on a path.
    pub fn for_path(pi: &Permutation) -> Result<Self> {
        let topology = Topology::path(pi.n())?;
        let spins = (1..=pi.n()).map(|p| p as i32 - pi.image(p) as i32).collect();
        Self::new(topology, pi, spins)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn n(&self) -> usize {
        self.topology.n()
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn spins(&self) -> &[i32] {
        &self.spins
    }

    pub fn spin(&self, p: usize) -> i32 {
        self.spins[p - 1]
    }

    pub fn position(&self, p: usize) -> usize {
        self.placement.position(p)
    }

    pub fn pebble_at(&self, v: usize) -> usize {
        self.placement.pebble_at(v)
    }

    pub fn spread(&self) -> i32 {
        spread(&self.spins)
    }

    pub fn total_abs(&self) -> i32 {
        self.spins.iter().map(|s| s.abs()).sum()
    }

    /// Spread at most `n`; for paths the forced spins always qualify.
    pub fn is_minimized(&self) -> bool {
        match self.topology.kind() {
            TopologyKind::Cycle => self.spread() <= self.n() as i32,
            TopologyKind::Path => true,
        }
    }

    pub fn is_settled(&self) -> bool {
        self.spins.iter().all(|&s| s == 0)
    }

    /// Applies one round of swaps. The pebble leaving an edge's tail moves
    /// clockwise and loses one unit of spin; its partner gains one.
    pub fn step(&self, m: &Matching) -> Result<SpinState> {
        let edges = self.topology.check_matching(m)?;
        let mut next = self.clone();
        for (tail, head) in edges {
            let a = next.placement.pebble_at(tail);
            let b = next.placement.pebble_at(head);
            next.spins[a - 1] -= 1;
            next.spins[b - 1] += 1;
            next.placement.swap_vertices(tail, head);
        }
        Ok(next)
    }

    /// Swaps a single edge given by its tail; internal fast path for routing.
    pub(crate) fn swap_edge(&mut self, tail: usize) {
        let head = self.topology.head(tail);
        let a = self.placement.pebble_at(tail);
        let b = self.placement.pebble_at(head);
        self.spins[a - 1] -= 1;
        self.spins[b - 1] += 1;
        self.placement.swap_vertices(tail, head);
    }

    /// Flips pebbles `i` and `j` (`s(i) - s(j) = n`).
    pub fn flipped(&self, i: usize, j: usize) -> Result<SpinState> {
        let spins = flip(&self.spins, i, j)?;
        Ok(SpinState { spins, ..self.clone() })
    }
}

/// Summary of a disbursement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisbursementReport {
    pub spins: Vec<i32>,
    pub is_minimized: bool,
    pub total_abs: i32,
    pub spread: i32,
}

pub fn report(pi: &Permutation, spins: &[i32]) -> Result<DisbursementReport> {
    if !validate(pi, spins)? {
        return Err(Error::InvalidDisbursement(format!("{spins:?} is not valid for {pi}")));
    }
    let n = pi.n() as i32;
    let spread = spread(spins);
    Ok(DisbursementReport {
        spins: spins.to_vec(),
        is_minimized: spread <= n,
        total_abs: spins.iter().map(|s| s.abs()).sum(),
        spread,
    })
}

fn spread(spins: &[i32]) -> i32 {
    let max = spins.iter().copied().max().unwrap_or(0);
    let min = spins.iter().copied().min().unwrap_or(0);
    max - min
}

/// Clockwise distance from each pebble's start to its destination.
pub fn base_spins(pi: &Permutation) -> Vec<i32> {
    let n = pi.n();
    (1..=n).map(|i| d_plus(pi.image(i), i, n) as i32).collect()
}

/// Whether `spins` is a valid disbursement of `π` on the cycle.
pub fn validate(pi: &Permutation, spins: &[i32]) -> Result<bool> {
    let n = pi.n();
    if spins.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: spins.len() });
    }
    let base = base_spins(pi);
    let admissible = spins.iter().zip(&base).all(|(&s, &a)| s == a || s == a - n as i32);
    Ok(admissible && spins.iter().sum::<i32>() == 0)
}

/// Exchanges the directions of pebbles `i` and `j`, which requires
/// `s(i) - s(j) = n` with `n = spins.len()`.
pub fn flip(spins: &[i32], i: usize, j: usize) -> Result<Vec<i32>> {
    let n = spins.len();
    for p in [i, j] {
        if p == 0 || p > n {
            return Err(Error::PebbleOutOfRange { pebble: p, n });
        }
    }
    let diff = spins[i - 1] - spins[j - 1];
    if i == j || diff != n as i32 {
        return Err(Error::FlipNotApplicable { i, j, diff, n });
    }
    let mut out = spins.to_vec();
    out[i - 1] -= n as i32;
    out[j - 1] += n as i32;
    Ok(out)
}

/// Flips the largest positive spin against the smallest negative one until
/// the spread is at most `n`.
pub fn minimize(pi: &Permutation, spins: &[i32]) -> Result<Vec<i32>> {
    if !validate(pi, spins)? {
        return Err(Error::InvalidDisbursement(format!("{spins:?} is not valid for {pi}")));
    }
    let n = pi.n() as i32;
    let mut s = spins.to_vec();
    loop {
        let (hi, &max) = s.iter().enumerate().max_by_key(|&(k, v)| (*v, std::cmp::Reverse(k))).unwrap();
        let (lo, &min) = s.iter().enumerate().min_by_key(|&(k, v)| (*v, k)).unwrap();
        if max - min <= n {
            return Ok(s);
        }
        // spread > n with sum zero forces max > 0 > min
        s[hi] -= n;
        s[lo] += n;
    }
}

/// Every valid disbursement of `π`, in increasing order of the flip-subset bitmask.
pub fn valid_disbursements(pi: &Permutation, bound: usize) -> Result<Vec<Vec<i32>>> {
    let n = pi.n();
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    let base = base_spins(pi);
    let total: i32 = base.iter().sum();
    let k = (total / n as i32) as u32;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() != k {
            continue;
        }
        let spins = base
            .iter()
            .enumerate()
            .map(|(idx, &a)| if mask >> idx & 1 == 1 { a - n as i32 } else { a })
            .collect();
        out.push(spins);
    }
    Ok(out)
}

/// All valid disbursements of minimum total absolute spin.
pub fn enumerate_minimized(pi: &Permutation) -> Result<Vec<Vec<i32>>> {
    enumerate_minimized_with_bound(pi, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_minimized_with_bound(pi: &Permutation, bound: usize) -> Result<Vec<Vec<i32>>> {
    let all = valid_disbursements(pi, bound)?;
    let cost = |s: &Vec<i32>| s.iter().map(|x| x.abs()).sum::<i32>();
    let best = all.iter().map(cost).min().expect("at least one valid disbursement");
    Ok(all.into_iter().filter(|s| cost(s) == best).collect())
}

/// Flips the `k` largest base spins, ties broken towards lower pebble
/// numbers. The result is valid, has spread at most `n`, and minimizes the
/// largest spin magnitude.
pub fn canonical_disbursement(pi: &Permutation) -> Vec<i32> {
    let n = pi.n();
    let mut spins = base_spins(pi);
    let k = spins.iter().sum::<i32>() as usize / n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&idx| (std::cmp::Reverse(spins[idx]), idx));
    for &idx in &order[..k] {
        spins[idx] -= n as i32;
    }
    spins
}

/// Minimum over valid disbursements of the largest spin magnitude. Every
/// pebble moves at most one step per round, so this bounds `rt(C_n, π)`
/// from below.
pub fn spin_lower_bound(pi: &Permutation) -> u32 {
    canonical_disbursement(pi).iter().map(|s| s.unsigned_abs()).max().unwrap_or(0)
}

/// Advances `state` by one round.
pub fn step_spins(state: &SpinState, m: &Matching) -> Result<SpinState> {
    state.step(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn base_spin_examples() {
        assert_eq!(base_spins(&Permutation::rotation(6, 1)), vec![5; 6]);
        assert_eq!(base_spins(&Permutation::identity(5)), vec![0; 5]);
        let t = Permutation::transposition(6, 1, 4).unwrap();
        assert_eq!(base_spins(&t), vec![3, 0, 0, 3, 0, 0]);
    }

    #[test]
    fn validation() {
        let rot = Permutation::rotation(6, 1);
        assert!(validate(&Permutation::identity(4), &[0; 4]).unwrap());
        assert!(!validate(&rot, &[5; 6]).unwrap());
        assert!(validate(&rot, &[5, -1, -1, -1, -1, -1]).unwrap());
        assert!(matches!(validate(&rot, &[5, -1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn minimize_examples() {
        let pi = perm("2,1,3,4,5,6");
        assert_eq!(minimize(&pi, &[5, -5, 0, 0, 0, 0]).unwrap(), vec![-1, 1, 0, 0, 0, 0]);
        let rot = Permutation::rotation(6, 1);
        let fixed = vec![5, -1, -1, -1, -1, -1];
        assert_eq!(minimize(&rot, &fixed).unwrap(), fixed);
        assert_eq!(minimize(&Permutation::identity(5), &[0; 5]).unwrap(), vec![0; 5]);
        assert!(minimize(&rot, &[5; 6]).is_err());
    }

    #[test]
    fn flip_examples() {
        let s = flip(&[5, -1, -1, -1, -1, -1], 1, 2).unwrap();
        assert_eq!(s, vec![-1, 5, -1, -1, -1, -1]);
        assert!(matches!(
            flip(&[3, -1, -1, -1, 0, 0], 1, 2),
            Err(Error::FlipNotApplicable { diff: 4, .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_minimized(&Permutation::identity(5)).unwrap(), vec![vec![0; 5]]);
        assert_eq!(enumerate_minimized(&Permutation::rotation(6, 1)).unwrap().len(), 6);
        let t = Permutation::transposition(6, 1, 4).unwrap();
        assert_eq!(enumerate_minimized(&t).unwrap().len(), 2);
        assert!(matches!(
            enumerate_minimized(&Permutation::identity(13)),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(spin_lower_bound(&Permutation::rotation(6, 2)), 4);
        assert_eq!(spin_lower_bound(&Permutation::identity(6)), 0);
        assert_eq!(spin_lower_bound(&Permutation::transposition(4, 1, 3).unwrap()), 2);
    }

    #[test]
    fn step_moves_spins() {
        let pi = perm("2,1,3,4");
        let c4 = Topology::cycle(4).unwrap();
        // pebble 2 sits on v1 and must go clockwise; pebble 1 counterclockwise
        let st = SpinState::new(c4, &pi, vec![-1, 1, 0, 0]).unwrap();
        let next = st.step(&Matching::new(vec![(1, 2)])).unwrap();
        assert_eq!(next.spins(), &[0, 0, 0, 0]);
        assert!(next.placement().is_sorted());
        assert_eq!(st.step(&Matching::empty()).unwrap(), st);
    }

    #[test]
    fn report_flags_minimized() {
        let rot = Permutation::rotation(6, 1);
        let r = report(&rot, &[5, -1, -1, -1, -1, -1]).unwrap();
        assert!(r.is_minimized);
        assert_eq!(r.total_abs, 10);
        assert_eq!(r.spread, 6);
    }
}
