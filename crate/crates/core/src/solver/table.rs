use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;

use super::matchings::enumerate_matchings;
use super::rank::{factorial, rank, rank_permutation, unrank, unrank_permutation};
use crate::cycle::{Matching, Permutation, Topology, TopologyKind};
use crate::error::{Error, Result};

/// Largest `n` built without an explicit override.
pub const DEFAULT_MAX_N: usize = 10;
/// Hard ceiling; `12!` one-byte entries is about 479 MB.
pub const OVERRIDE_MAX_N: usize = 12;

const UNSEEN: u8 = u8::MAX;
const MAGIC: &[u8; 4] = b"CNRT";
const FORMAT_VERSION: u8 = 1;

/// Exact routing number of every permutation of one topology, indexed by
/// the Lehmer rank of the placement's one-line form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    topology: Topology,
    distances: Vec<u8>,
}

/// Result of an exact query: the routing number and one optimal schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRoute {
    pub rounds: usize,
    pub schedule: Vec<Matching>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub topology: Topology,
    pub max_distance: u8,
    pub argmax: Vec<Permutation>,
}

/// Breadth-first distances from the identity under matching moves, for
/// `n <= DEFAULT_MAX_N`.
pub fn bfs_table(topology: Topology) -> Result<DistanceTable> {
    bfs_table_with_limit(topology, DEFAULT_MAX_N)
}

/// Like [`bfs_table`] with a caller-chosen size limit (at most `OVERRIDE_MAX_N`).
pub fn bfs_table_with_limit(topology: Topology, max_n: usize) -> Result<DistanceTable> {
    let n = topology.n();
    let limit = max_n.min(OVERRIDE_MAX_N);
    if n > limit {
        return Err(Error::BudgetExceeded(format!(
            "{topology} has {n}! states; the limit is n = {limit}"
        )));
    }
    let matchings = enumerate_matchings(topology)?;
    let taus: Vec<[u8; 16]> = matchings.masks().iter().map(|&m| matchings.involution(m)).collect();
    let total = factorial(n) as usize;
    let dist: Vec<AtomicU8> = (0..total).map(|_| AtomicU8::new(UNSEEN)).collect();
    dist[0].store(0, Ordering::Relaxed);

    // Level-synchronous sweep. Within a level only UNSEEN entries are
    // written, and every writer stores the same value, so the result does
    // not depend on scheduling.
    let mut level = 0u8;
    loop {
        let found: usize = (0..total)
            .into_par_iter()
            .with_min_len(1 << 12)
            .map_init(
                || [0u8; 16],
                |buf, r| {
                    if dist[r].load(Ordering::Relaxed) != level {
                        return 0;
                    }
                    unrank(r as u64, &mut buf[..n]);
                    let mut fresh = 0;
                    let mut next = [0u8; 16];
                    for tau in &taus {
                        for i in 0..n {
                            next[i] = tau[buf[i] as usize];
                        }
                        let nr = rank(&next[..n]) as usize;
                        if dist[nr].load(Ordering::Relaxed) == UNSEEN
                            && dist[nr]
                                .compare_exchange(UNSEEN, level + 1, Ordering::Relaxed, Ordering::Relaxed)
                                .is_ok()
                        {
                            fresh += 1;
                        }
                    }
                    fresh
                },
            )
            .sum();
        if found == 0 {
            break;
        }
        level += 1;
    }
    let distances: Vec<u8> = dist.into_iter().map(AtomicU8::into_inner).collect();
    debug_assert!(distances.iter().all(|&d| d != UNSEEN));
    Ok(DistanceTable { topology, distances })
}

/// Plain queue-based BFS; the reference for [`bfs_table`].
pub fn bfs_table_sequential(topology: Topology) -> Result<DistanceTable> {
    let n = topology.n();
    if n > DEFAULT_MAX_N {
        return Err(Error::BudgetExceeded(format!("sequential BFS limited to n <= {DEFAULT_MAX_N}")));
    }
    let matchings = enumerate_matchings(topology)?;
    let taus: Vec<[u8; 16]> = matchings.masks().iter().map(|&m| matchings.involution(m)).collect();
    let total = factorial(n) as usize;
    let mut distances = vec![UNSEEN; total];
    let mut queue = VecDeque::new();
    distances[0] = 0;
    queue.push_back(0u64);
    let mut buf = [0u8; 16];
    let mut next = [0u8; 16];
    while let Some(r) = queue.pop_front() {
        let d = distances[r as usize];
        unrank(r, &mut buf[..n]);
        for tau in &taus {
            for i in 0..n {
                next[i] = tau[buf[i] as usize];
            }
            let nr = rank(&next[..n]);
            if distances[nr as usize] == UNSEEN {
                distances[nr as usize] = d + 1;
                queue.push_back(nr);
            }
        }
    }
    Ok(DistanceTable { topology, distances })
}

impl DistanceTable {
    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn n(&self) -> usize {
        self.topology.n()
    }

    pub fn distances(&self) -> &[u8] {
        &self.distances
    }

    pub fn distance_of_rank(&self, r: u64) -> u8 {
        self.distances[r as usize]
    }

    pub fn distance(&self, pi: &Permutation) -> Result<u8> {
        self.check_n(pi)?;
        Ok(self.distances[rank_permutation(pi) as usize])
    }

    pub fn max_distance(&self) -> u8 {
        self.distances.iter().copied().max().unwrap_or(0)
    }

    fn check_n(&self, pi: &Permutation) -> Result<()> {
        if pi.n() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: pi.n() });
        }
        Ok(())
    }

    /// Exact routing number of `π` and a shortest schedule, recovered by
    /// stepping to any neighbour one level closer to the identity.
    pub fn exact_rt(&self, pi: &Permutation) -> Result<ExactRoute> {
        self.check_n(pi)?;
        let n = self.n();
        let matchings = enumerate_matchings(self.topology)?;
        let mut cur: Vec<u8> = pi.images().iter().map(|&x| (x - 1) as u8).collect();
        let mut d = self.distances[rank(&cur) as usize];
        let rounds = d as usize;
        let mut schedule = Vec::with_capacity(rounds);
        let mut next = vec![0u8; n];
        while d > 0 {
            let step = matchings.masks().iter().find_map(|&mask| {
                let tau = matchings.involution(mask);
                for i in 0..n {
                    next[i] = tau[cur[i] as usize];
                }
                (self.distances[rank(&next) as usize] + 1 == d).then_some(mask)
            });
            let mask = step.ok_or_else(|| {
                Error::CacheFormat(format!("no descending neighbour at distance {d}; table is inconsistent"))
            })?;
            let tau = matchings.involution(mask);
            for v in cur.iter_mut() {
                *v = tau[*v as usize];
            }
            schedule.push(matchings.to_matching(mask));
            d -= 1;
        }
        Ok(ExactRoute { rounds, schedule })
    }

    /// The largest routing number and every permutation attaining it, in rank order.
    pub fn census(&self) -> Census {
        let max = self.max_distance();
        let argmax = self
            .distances
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d == max)
            .map(|(r, _)| unrank_permutation(self.n(), r as u64))
            .collect();
        Census { topology: self.topology, max_distance: max, argmax }
    }

    /// Cache layout: `CNRT`, version byte, kind byte (0 cycle, 1 path),
    /// `n` byte, then `n!` distance bytes in rank order.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let kind = match self.topology.kind() {
            TopologyKind::Cycle => 0u8,
            TopologyKind::Path => 1u8,
        };
        w.write_all(MAGIC)?;
        w.write_all(&[FORMAT_VERSION, kind, self.n() as u8])?;
        w.write_all(&self.distances)?;
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<DistanceTable> {
        let mut header = [0u8; 7];
        r.read_exact(&mut header)
            .map_err(|_| Error::CacheFormat("truncated header".into()))?;
        if &header[..4] != MAGIC {
            return Err(Error::CacheFormat("bad magic".into()));
        }
        if header[4] != FORMAT_VERSION {
            return Err(Error::CacheFormat(format!("unsupported version {}", header[4])));
        }
        let kind = match header[5] {
            0 => TopologyKind::Cycle,
            1 => TopologyKind::Path,
            k => return Err(Error::CacheFormat(format!("unknown topology kind {k}"))),
        };
        let n = header[6] as usize;
        if n > OVERRIDE_MAX_N {
            return Err(Error::CacheFormat(format!("n = {n} is beyond the supported range")));
        }
        let topology = Topology::new(kind, n).map_err(|e| Error::CacheFormat(e.to_string()))?;
        let total = factorial(n) as usize;
        let mut distances = vec![0u8; total];
        r.read_exact(&mut distances)
            .map_err(|_| Error::CacheFormat(format!("expected {total} distance bytes")))?;
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::CacheFormat("trailing bytes".into()));
        }
        if distances[0] != 0 {
            return Err(Error::CacheFormat("identity must have distance 0".into()));
        }
        Ok(DistanceTable { topology, distances })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<DistanceTable> {
        DistanceTable::read_from(BufReader::new(File::open(path)?))
    }

    /// Conventional cache file name, e.g. `cycle-8.cnrt`.
    pub fn file_name(topology: Topology) -> String {
        format!("{}-{}.cnrt", topology.kind(), topology.n())
    }
}

/// Exact routing number of `π` on `topology`, building a table on the fly.
pub fn exact_rt(topology: Topology, pi: &Permutation) -> Result<ExactRoute> {
    if pi.n() != topology.n() {
        return Err(Error::LengthMismatch { expected: topology.n(), got: pi.n() });
    }
    bfs_table(topology)?.exact_rt(pi)
}

pub fn extremal_census(table: &DistanceTable) -> Census {
    table.census()
}

/// Loads `dir/<kind>-<n>.cnrt` when present, otherwise builds the table and,
/// if a directory was given, stores it there.
pub fn load_or_build(topology: Topology, cache_dir: Option<&Path>, max_n: usize) -> Result<DistanceTable> {
    if let Some(dir) = cache_dir {
        let path = dir.join(DistanceTable::file_name(topology));
        if path.exists() {
            let table = DistanceTable::load(&path)?;
            if table.topology() != topology {
                return Err(Error::CacheFormat(format!("{} holds {}", path.display(), table.topology())));
            }
            return Ok(table);
        }
        let table = bfs_table_with_limit(topology, max_n)?;
        std::fs::create_dir_all(dir)?;
        table.save(&path)?;
        return Ok(table);
    }
    bfs_table_with_limit(topology, max_n)
}
