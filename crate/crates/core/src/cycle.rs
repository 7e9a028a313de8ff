//! Vertices, pebbles, permutations and matchings on cycles and paths.
//!
//! Vertices and pebbles are 1-indexed throughout the public API: pebble `i`
//! starts at vertex `π(i)` and has destination `v_i`. Ranks and cache files
//! are 0-indexed; the conversion happens in [`crate::solver`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Clockwise distance from vertex `i` to vertex `j` on an `n`-cycle.
pub fn d_plus(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i >= 1 && i <= n && j >= 1 && j <= n);
    (j + n - i) % n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Cycle,
    Path,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Cycle => "cycle",
            TopologyKind::Path => "path",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(TopologyKind::Cycle),
            "path" => Ok(TopologyKind::Path),
            other => Err(Error::InvalidTopology(format!("unknown kind `{other}`"))),
        }
    }
}

/// A cycle `C_n` (edges `v_i v_{i+1 mod n}`) or a path `P_n` (edges `v_i v_{i+1}`, `i < n`).
///
/// Edges are identified by their tail: edge `i` joins `v_i` to the next vertex clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    kind: TopologyKind,
    n: usize,
}

impl Topology {
    pub fn new(kind: TopologyKind, n: usize) -> Result<Self> {
        match kind {
            TopologyKind::Cycle if n < 3 => Err(Error::InvalidTopology(format!(
                "a cycle needs at least 3 vertices, got {n}"
            ))),
            TopologyKind::Path if n < 2 => Err(Error::InvalidTopology(format!(
                "a path needs at least 2 vertices, got {n}"
            ))),
            _ => Ok(Topology { kind, n }),
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Cycle, n)
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Path, n)
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_cycle(&self) -> bool {
        self.kind == TopologyKind::Cycle
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            TopologyKind::Cycle => self.n,
            TopologyKind::Path => self.n - 1,
        }
    }

    /// Head of the edge whose tail is `tail`.
    pub fn head(&self, tail: usize) -> usize {
        tail % self.n + 1
    }

    /// All edges as `(tail, head)`, ordered by tail.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.edge_count()).map(move |t| (t, self.head(t)))
    }

    /// Tail of the edge joining `u` and `v`, in either orientation.
    pub fn edge_tail(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.n;
        if u == 0 || v == 0 || u > n || v > n || u == v {
            return None;
        }
        let is_edge = |t: usize| t <= self.edge_count();
        if self.head(u) == v && is_edge(u) {
            Some(u)
        } else if self.head(v) == u && is_edge(v) {
            Some(v)
        } else {
            None
        }
    }

    /// Odd-even parity labeling exists for paths and even cycles only.
    pub fn has_parity_classes(&self) -> bool {
        match self.kind {
            TopologyKind::Path => true,
            TopologyKind::Cycle => self.n % 2 == 0,
        }
    }

    /// Graph distance between two vertices.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        match self.kind {
            TopologyKind::Path => u.abs_diff(v),
            TopologyKind::Cycle => {
                let d = d_plus(u, v, self.n);
                d.min(self.n - d)
            }
        }
    }

    pub fn diameter(&self) -> usize {
        match self.kind {
            TopologyKind::Path => self.n - 1,
            TopologyKind::Cycle => self.n / 2,
        }
    }

    /// Validates `m` against this topology and returns its edges oriented
    /// `(tail, head)` and sorted by tail.
    pub fn check_matching(&self, m: &Matching) -> Result<Vec<(usize, usize)>> {
        let mut used = vec![false; self.n + 1];
        let mut out = Vec::with_capacity(m.edges.len());
        for &(u, v) in &m.edges {
            let tail = self.edge_tail(u, v).ok_or_else(|| {
                Error::InvalidMatching(format!("({u},{v}) is not an edge of {self}"))
            })?;
            let head = self.head(tail);
            for x in [tail, head] {
                if used[x] {
                    return Err(Error::InvalidMatching(format!("vertex {x} is covered twice")));
                }
                used[x] = true;
            }
            out.push((tail, head));
        }
        out.sort_unstable();
        Ok(out)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TopologyKind::Cycle => write!(f, "C_{}", self.n),
            TopologyKind::Path => write!(f, "P_{}", self.n),
        }
    }
}

/// A bijection on `[n]` in one-line notation: `images[i - 1] = π(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation(format!("{x} is outside 1..={n}")));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("{x} appears twice")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    /// The rotation `π(a) = a + q (mod n)`.
    pub fn rotation(n: usize, q: i64) -> Self {
        let r = q.rem_euclid(n as i64) as usize;
        Permutation { images: (0..n).map(|a| (a + r) % n + 1).collect() }
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidPermutation(format!("({a} {b}) outside 1..={n}")));
        }
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `Some(q)` with `q` in `(-n/2, n/2]` iff `π(a) = a + q (mod n)` for all `a`.
    pub fn rotation_offset(&self) -> Option<i64> {
        let n = self.n();
        let r = (self.images[0] + n - 1) % n;
        if (1..=n).any(|a| self.image(a) != (a - 1 + r) % n + 1) {
            return None;
        }
        let q = if 2 * r > n { r as i64 - n as i64 } else { r as i64 };
        Some(q)
    }

    /// Orbits of `i ↦ π(i)`, each starting at its smallest element and listed
    /// in traversal order; orbits are sorted by their first element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                orbit.push(a);
                a = self.image(a);
            }
            out.push(orbit);
        }
        out
    }

    /// Conjugates by the dihedral relabeling `g` of the vertices, where `g`
    /// reflects `v ↦ 2 - v (mod n)` when `reflect` is set and then rotates by
    /// `r`. Pebble `g(i)` of the result sits at `g(π(i))`.
    pub fn relabel(&self, r: usize, reflect: bool) -> Permutation {
        let n = self.n();
        let g = |v: usize| dihedral(v, n, r, reflect);
        let mut images = vec![0; n];
        for i in 1..=n {
            images[g(i) - 1] = g(self.image(i));
        }
        Permutation { images }
    }

    /// Path reflection `v ↦ n + 1 - v` applied as a conjugation.
    pub fn reverse_path(&self) -> Permutation {
        let n = self.n();
        let mut images = vec![0; n];
        for i in 1..=n {
            images[n - i] = n + 1 - self.image(i);
        }
        Permutation { images }
    }
}

/// The dihedral vertex map used by [`Permutation::relabel`].
pub fn dihedral(v: usize, n: usize, r: usize, reflect: bool) -> usize {
    let x = v - 1;
    let x = if reflect { (n - x) % n } else { x };
    (x + r) % n + 1
}

/// Inverse of [`dihedral`].
pub fn dihedral_inverse(v: usize, n: usize, r: usize, reflect: bool) -> usize {
    let x = (v - 1 + n - r % n) % n;
    let x = if reflect { (n - x) % n } else { x };
    x + 1
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad entry `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

/// A set of vertex pairs applied as one round of parallel swaps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        Matching { edges }
    }

    pub fn empty() -> Self {
        Matching::default()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }
}

impl FromIterator<(usize, usize)> for Matching {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Matching { edges: iter.into_iter().collect() }
    }
}

/// Where every pebble currently sits. Always a bijection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pos: Vec<usize>,
    at: Vec<usize>,
}

impl Placement {
    pub fn from_permutation(pi: &Permutation) -> Self {
        let pos = pi.images().to_vec();
        let mut at = vec![0; pos.len()];
        for (p, &v) in pos.iter().enumerate() {
            at[v - 1] = p + 1;
        }
        Placement { pos, at }
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    /// Vertex of pebble `p`.
    pub fn position(&self, p: usize) -> usize {
        self.pos[p - 1]
    }

    /// Pebble on vertex `v`.
    pub fn pebble_at(&self, v: usize) -> usize {
        self.at[v - 1]
    }

    /// Positions in pebble order; this is the one-line form of the placement.
    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation { images: self.pos.clone() }
    }

    pub fn is_sorted(&self) -> bool {
        self.pos.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Swaps the pebbles on every edge of `m`.
    pub fn apply(&self, topology: &Topology, m: &Matching) -> Result<Placement> {
        if topology.n() != self.n() {
            return Err(Error::LengthMismatch { expected: topology.n(), got: self.n() });
        }
        let edges = topology.check_matching(m)?;
        let mut next = self.clone();
        for (u, v) in edges {
            next.swap_vertices(u, v);
        }
        Ok(next)
    }

    pub(crate) fn swap_vertices(&mut self, u: usize, v: usize) {
        let (a, b) = (self.at[u - 1], self.at[v - 1]);
        self.at.swap(u - 1, v - 1);
        self.pos[a - 1] = v;
        self.pos[b - 1] = u;
    }
}

/// Applies `m` to the placement of `π`.
pub fn apply_matching(topology: &Topology, p: &Placement, m: &Matching) -> Result<Placement> {
    p.apply(topology, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn clockwise_distance() {
        assert_eq!(d_plus(1, 3, 6), 2);
        assert_eq!(d_plus(3, 1, 6), 4);
        assert_eq!(d_plus(5, 5, 6), 0);
        for n in 3..9 {
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        assert_eq!(d_plus(i, j, n) + d_plus(j, i, n), n);
                    }
                }
            }
        }
    }

    #[test]
    fn matching_swaps_and_is_involution() {
        let c4 = Topology::cycle(4).unwrap();
        let id = Placement::from_permutation(&Permutation::identity(4));
        let m = Matching::new(vec![(1, 2)]);
        let once = id.apply(&c4, &m).unwrap();
        assert_eq!(once.position(1), 2);
        assert_eq!(once.position(2), 1);
        assert_eq!(once.position(3), 3);
        assert_eq!(once.apply(&c4, &m).unwrap(), id);
    }

    #[test]
    fn overlapping_or_missing_edges_rejected() {
        let c4 = Topology::cycle(4).unwrap();
        let id = Placement::from_permutation(&Permutation::identity(4));
        let shared = Matching::new(vec![(1, 2), (2, 3)]);
        assert!(matches!(id.apply(&c4, &shared), Err(Error::InvalidMatching(_))));
        let chord = Matching::new(vec![(1, 3)]);
        assert!(matches!(id.apply(&c4, &chord), Err(Error::InvalidMatching(_))));
        let p4 = Topology::path(4).unwrap();
        let wrap = Matching::new(vec![(4, 1)]);
        assert!(matches!(id.apply(&p4, &wrap), Err(Error::InvalidMatching(_))));
        assert!(id.apply(&c4, &wrap).is_ok());
    }

    #[test]
    fn rotation_offsets() {
        assert_eq!(Permutation::rotation(6, 1).rotation_offset(), Some(1));
        assert_eq!(Permutation::rotation(6, -1).rotation_offset(), Some(-1));
        assert_eq!(Permutation::rotation(6, 3).rotation_offset(), Some(3));
        assert_eq!(Permutation::rotation(6, -3).rotation_offset(), Some(3));
        assert_eq!(Permutation::identity(6).rotation_offset(), Some(0));
        assert_eq!(Permutation::transposition(4, 1, 3).unwrap().rotation_offset(), None);
        assert_eq!(Permutation::rotation(6, 1).images(), &[2, 3, 4, 5, 6, 1]);
    }

    #[test]
    fn orbit_decomposition() {
        assert_eq!(perm("2,1,3").orbits(), vec![vec![1, 2], vec![3]]);
        assert_eq!(Permutation::identity(4).orbits().len(), 4);
        assert_eq!(Permutation::rotation(6, 1).orbits(), vec![vec![1, 2, 3, 4, 5, 6]]);
    }

    #[test]
    fn dihedral_relabeling() {
        let rot = Permutation::rotation(6, 1);
        assert_eq!(rot.relabel(0, false), rot);
        assert_eq!(rot.relabel(0, true).rotation_offset(), Some(-1));
        let t = Permutation::transposition(4, 1, 3).unwrap();
        assert_eq!(t.relabel(1, false), Permutation::transposition(4, 2, 4).unwrap());
        for r in 0..5 {
            for f in [false, true] {
                for v in 1..=5 {
                    assert_eq!(dihedral_inverse(dihedral(v, 5, r, f), 5, r, f), v);
                }
            }
        }
    }

    #[test]
    fn text_format() {
        let p = perm("3, 1,2");
        assert_eq!(p.to_string(), "3,1,2");
        assert!("1,1,2".parse::<Permutation>().is_err());
        assert!("1,x".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
    }

    #[test]
    fn topology_bounds() {
        assert!(Topology::cycle(2).is_err());
        assert!(Topology::path(1).is_err());
        assert!(!Topology::cycle(5).unwrap().has_parity_classes());
        assert!(Topology::cycle(6).unwrap().has_parity_classes());
        assert!(Topology::path(5).unwrap().has_parity_classes());
        assert_eq!(Topology::cycle(6).unwrap().edge_tail(1, 6), Some(6));
        assert_eq!(Topology::path(6).unwrap().edge_tail(1, 6), None);
    }
}
