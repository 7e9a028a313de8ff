//! Odd-even routing on paths and even cycles, the extremal-window
//! strategies, schedule replay and per-pebble trace analytics.

use serde::{Deserialize, Serialize};

use crate::cycle::{dihedral, Matching, Permutation, Placement, Topology, TopologyKind};
use crate::disbursement::{flip, SpinState};
use crate::error::{Error, Result};
use crate::extremal::{ExtremalClass, ExtremalKind};
use crate::order::{is_bigger, window};

/// A complete routing run.
///
/// `placements[r]` is the placement after round `r` (`placements[0]` is the
/// start). `swaps[p - 1]` lists `(round, partner)` for every swap of pebble
/// `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingTrace {
    pub topology: Topology,
    pub perm: Permutation,
    pub initial_spins: Vec<i32>,
    pub preflips: Vec<(usize, usize)>,
    pub odd_edge: Option<(usize, usize)>,
    pub rounds: Vec<Matching>,
    pub placements: Vec<Placement>,
    pub swaps: Vec<Vec<(usize, usize)>>,
}

impl RoutingTrace {
    pub fn rounds_used(&self) -> usize {
        self.rounds.len()
    }

    /// Spins the routing actually ran with, i.e. after the pre-flips.
    pub fn effective_spins(&self) -> Vec<i32> {
        let mut s = self.initial_spins.clone();
        for &(i, j) in &self.preflips {
            s = flip(&s, i, j).expect("pre-flips were checked when routing");
        }
        s
    }

    pub fn swap_rounds(&self, p: usize) -> Vec<usize> {
        self.swaps[p - 1].iter().map(|&(r, _)| r).collect()
    }

    pub fn to_file(&self) -> TraceFile {
        TraceFile {
            n: self.topology.n(),
            topology: self.topology.kind(),
            perm: self.perm.images().to_vec(),
            odd_edge: self.odd_edge.map(|(u, v)| [u, v]),
            preflips: self.preflips.iter().map(|&(i, j)| [i, j]).collect(),
            rounds: self.rounds.iter().map(|m| m.edges().iter().map(|&(u, v)| [u, v]).collect()).collect(),
            rounds_used: self.rounds.len(),
        }
    }
}

/// On-disk trace. Edges are 1-indexed vertex pairs; rounds keep their order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub n: usize,
    pub topology: TopologyKind,
    pub perm: Vec<usize>,
    pub odd_edge: Option<[usize; 2]>,
    pub preflips: Vec<[usize; 2]>,
    pub rounds: Vec<Vec<[usize; 2]>>,
    pub rounds_used: usize,
}

impl TraceFile {
    pub fn topology(&self) -> Result<Topology> {
        Topology::new(self.topology, self.n)
    }

    pub fn permutation(&self) -> Result<Permutation> {
        let pi = Permutation::new(self.perm.clone())?;
        if pi.n() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: pi.n() });
        }
        Ok(pi)
    }

    pub fn matchings(&self) -> Vec<Matching> {
        self.rounds.iter().map(|r| Matching::new(r.iter().map(|&[u, v]| (u, v)).collect())).collect()
    }
}

/// Routes `π` by odd-even transposition with the given first-round edge.
pub fn route_odd_even(topology: Topology, pi: &Permutation, spins: &[i32], odd_edge: (usize, usize)) -> Result<RoutingTrace> {
    route_with_preflips(topology, pi, spins, &[], odd_edge)
}

/// Odd-even routing after flipping the listed pairs.
pub fn route_with_preflips(
    topology: Topology,
    pi: &Permutation,
    spins: &[i32],
    preflips: &[(usize, usize)],
    odd_edge: (usize, usize),
) -> Result<RoutingTrace> {
    if !topology.has_parity_classes() {
        return Err(Error::UnsupportedTopology(format!("odd-even routing is undefined on {topology}")));
    }
    let odd_tail = topology
        .edge_tail(odd_edge.0, odd_edge.1)
        .ok_or_else(|| Error::InvalidMatching(format!("({}, {}) is not an edge of {topology}", odd_edge.0, odd_edge.1)))?;
    let initial = SpinState::new(topology, pi, spins.to_vec())?;
    let mut effective = spins.to_vec();
    for &(i, j) in preflips {
        effective = flip(&effective, i, j)?;
    }
    let mut state = SpinState::new(topology, pi, effective)?;
    if !state.is_minimized() {
        return Err(Error::NotMinimized { spread: state.spread(), n: topology.n() });
    }

    let n = topology.n();
    let classes: [Vec<usize>; 2] = [0, 1].map(|parity| {
        (1..=topology.edge_count()).filter(|&t| (t + n - odd_tail) % 2 == parity).collect()
    });
    let limit = 3 * n;
    let mut rounds = Vec::new();
    let mut placements = vec![state.placement().clone()];
    let mut swaps = vec![Vec::new(); n];
    while !state.is_settled() {
        if rounds.len() == limit {
            return Err(Error::RoutingStalled(format!("{pi} not sorted after {limit} rounds")));
        }
        let round = rounds.len() + 1;
        let mut edges = Vec::new();
        for &tail in &classes[(round + 1) % 2] {
            let head = topology.head(tail);
            let (a, b) = (state.pebble_at(tail), state.pebble_at(head));
            // adjacent pebbles never differ in spin by exactly one, so this
            // agrees with comparing spins directly
            debug_assert_ne!(state.spin(a) - state.spin(b), 1);
            if is_bigger(&state, a, b) {
                edges.push((tail, head));
                swaps[a - 1].push((round, b));
                swaps[b - 1].push((round, a));
            }
        }
        for &(tail, _) in &edges {
            state.swap_edge(tail);
        }
        rounds.push(Matching::new(edges));
        placements.push(state.placement().clone());
    }
    if !state.placement().is_sorted() {
        return Err(Error::RoutingStalled(format!("spins of {pi} settled on an unsorted placement")));
    }
    Ok(RoutingTrace {
        topology,
        perm: pi.clone(),
        initial_spins: initial.spins().to_vec(),
        preflips: preflips.to_vec(),
        odd_edge: Some(odd_edge),
        rounds,
        placements,
        swaps,
    })
}

/// Routes a path permutation with its forced spins, starting on edge `v1 v2`.
pub fn route_path(pi: &Permutation) -> Result<RoutingTrace> {
    let state = SpinState::for_path(pi)?;
    route_odd_even(state.topology(), pi, state.spins(), (1, 2))
}

/// The disbursement and first edge that route the rotation by `q` in
/// `n - |q|` rounds: the `|q|` pebbles carrying the long spin sit on every
/// other vertex starting at `v1`.
pub fn rotation_plan(n: usize, q: i64) -> Result<(Permutation, Vec<i32>, (usize, usize))> {
    let pi = Permutation::rotation(n, q);
    let q = pi
        .rotation_offset()
        .ok_or_else(|| Error::InvalidPermutation(format!("rotation by {q} on {n}")))?;
    if q == 0 {
        return Ok((pi, vec![0; n], (1, 2)));
    }
    if q < 0 {
        let (_, spins, (u, v)) = rotation_plan(n, -q)?;
        let spins = crate::extremal::reflect_spins(&spins);
        let g = |x: usize| dihedral(x, n, 0, true);
        return Ok((pi, spins, (g(v), g(u))));
    }
    let q = q as usize;
    let mut spins = vec![-(q as i32); n];
    let placement = Placement::from_permutation(&pi);
    for k in 0..q {
        let p = placement.pebble_at(2 * k + 1);
        spins[p - 1] = (n - q) as i32;
    }
    Ok((pi, spins, (1, 2)))
}

/// Pre-flips and first-round edge for one routing attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPlan {
    pub preflips: Vec<(usize, usize)>,
    pub odd_edge: (usize, usize),
}

/// Candidate plans for an extremal window, in original labels. The first is
/// the written strategy for the window type. The rest are fallbacks for
/// windows where it overruns (an empty `X_1` in type 3, a type 2a `W` that
/// is one head block): the other edge parity, the pre-flip dropped, and
/// the flip of `A` against the last `W` pebble.
///
/// Type 1 windows and rotations have no strategy.
pub fn extremal_plans(pi: &Permutation, class: &ExtremalClass) -> Result<Vec<ExtremalPlan>> {
    let n = pi.n();
    if class.disbursement.len() != n {
        return Err(Error::ClassMismatch(format!("disbursement of length {} for n = {n}", class.disbursement.len())));
    }
    let (work_pi, work_class) = if class.mirrored {
        (pi.relabel(0, true), class.reflected())
    } else {
        (pi.clone(), class.clone())
    };
    let plans = plans_unmirrored(&work_pi, &work_class)?;
    if !class.mirrored {
        return Ok(plans);
    }
    // reflection negates spins, so a mirrored flip pair swaps roles
    let g = |x: usize| dihedral(x, n, 0, true);
    Ok(plans
        .into_iter()
        .map(|p| ExtremalPlan {
            preflips: p.preflips.iter().map(|&(i, j)| (g(j), g(i))).collect(),
            odd_edge: (g(p.odd_edge.1), g(p.odd_edge.0)),
        })
        .collect())
}

/// Routes `π` with the written strategy for its extremal window only.
pub fn route_extremal_written(pi: &Permutation, class: &ExtremalClass) -> Result<RoutingTrace> {
    let plan = extremal_plans(pi, class)?.swap_remove(0);
    route_with_preflips(Topology::cycle(pi.n())?, pi, &class.disbursement, &plan.preflips, plan.odd_edge)
}

/// Routes `π` with the first plan that finishes within `n - 2` rounds, or
/// the fastest one if none does.
///
/// Rotations by `|q| >= 2` have no window strategy and use their rotation
/// plan instead (its own disbursement, `n - |q|` rounds). Unit rotations
/// need `n - 1` rounds and are rejected.
pub fn route_extremal(pi: &Permutation, class: &ExtremalClass) -> Result<RoutingTrace> {
    let n = pi.n();
    let topology = Topology::cycle(n)?;
    if class.kind != ExtremalKind::Type1 {
        if let Some(q) = pi.rotation_offset().filter(|q| q.abs() >= 2) {
            let (_, spins, edge) = rotation_plan(n, q)?;
            return route_odd_even(topology, pi, &spins, edge);
        }
    }
    let mut best: Option<RoutingTrace> = None;
    for plan in extremal_plans(pi, class)? {
        let t = route_with_preflips(topology, pi, &class.disbursement, &plan.preflips, plan.odd_edge)?;
        if t.rounds_used() + 2 <= n {
            return Ok(t);
        }
        if best.as_ref().is_none_or(|b| t.rounds_used() < b.rounds_used()) {
            best = Some(t);
        }
    }
    Ok(best.expect("at least one plan"))
}

fn plans_unmirrored(pi: &Permutation, class: &ExtremalClass) -> Result<Vec<ExtremalPlan>> {
    let n = pi.n();
    let topology = Topology::cycle(n)?;
    let state = SpinState::new(topology, pi, class.disbursement.clone())
        .map_err(|e| Error::ClassMismatch(format!("disbursement does not belong to {pi}: {e}")))?;
    let win = window(&state, class.anchor)?;
    if !crate::extremal::match_kinds(&win).contains(&class.kind) {
        return Err(Error::ClassMismatch(format!("window of {} in {pi} is not {}", class.anchor, class.kind)));
    }
    let pos = |p: usize| state.position(p);
    let prev = |v: usize| if v == 1 { n } else { v - 1 };
    let a = win.anchor;
    let w_all = win.w_all();
    let w_first = w_all[0];
    let w_last = *w_all.last().unwrap();
    // edge between w_1 and the pebble just before it (x_a, or A when X is empty)
    let into_w = (prev(pos(w_first)), pos(w_first));

    let (flips, edge) = match class.kind {
        ExtremalKind::Type1 => {
            return Err(Error::StrategyNotApplicable(format!("{pi} has a type1 window; it is a rotation")));
        }
        ExtremalKind::Type2 => {
            if !win.x_segments[0].is_empty() {
                (vec![], into_w)
            } else {
                let u = &win.u_segments[0];
                let u1 = u[0];
                let edge = if u.len() == 1 { (pos(u1), pos(a)) } else { into_w };
                (vec![(u1, w_last)], edge)
            }
        }
        ExtremalKind::Type2a => {
            if is_rotation(pi) {
                return Err(Error::StrategyNotApplicable(format!("{pi} is a rotation")));
            }
            let z = win.outside[0];
            let one_head_block = w_all.len() == n - 2 && is_bigger(&state, w_first, w_last);
            if win.x_segments[0].is_empty() && state.spin(z) == 0 && one_head_block {
                (vec![(a, w_last)], (pos(w_last), pos(z)))
            } else {
                (vec![], into_w)
            }
        }
        ExtremalKind::Type3a | ExtremalKind::Type3b => (vec![(a, w_last)], into_w),
    };

    let shifted = |(_, v): (usize, usize)| (v, v % n + 1);
    let mut flip_sets = vec![flips.clone(), vec![]];
    if state.spin(a) - state.spin(w_last) == n as i32 {
        flip_sets.push(vec![(a, w_last)]);
    }
    let mut plans = vec![ExtremalPlan { preflips: flips, odd_edge: edge }];
    for f in flip_sets {
        for e in [edge, shifted(edge)] {
            let plan = ExtremalPlan { preflips: f.clone(), odd_edge: e };
            if !plans.contains(&plan) {
                plans.push(plan);
            }
        }
    }
    Ok(plans)
}

fn is_rotation(pi: &Permutation) -> bool {
    pi.rotation_offset().is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleCheck {
    pub sorted: bool,
    pub rounds_used: usize,
}

/// Replays `rounds` from `π`, validating every matching.
pub fn verify_schedule(topology: Topology, pi: &Permutation, rounds: &[Matching]) -> Result<ScheduleCheck> {
    if pi.n() != topology.n() {
        return Err(Error::LengthMismatch { expected: topology.n(), got: pi.n() });
    }
    let mut placement = Placement::from_permutation(pi);
    for m in rounds {
        placement = placement.apply(&topology, m)?;
    }
    Ok(ScheduleCheck { sorted: placement.is_sorted(), rounds_used: rounds.len() })
}

/// Swap timeline of one pebble.
///
/// Swaps are grouped into bursts of consecutive rounds; `waits[i]` is the
/// idle gap before burst `i + 1`. Then
/// `finish_round = first_offset + swap_count + Σ waits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceAnalysis {
    pub pebble: usize,
    pub finish_round: usize,
    pub swap_count: usize,
    pub first_offset: usize,
    pub bursts: Vec<(usize, usize)>,
    pub waits: Vec<usize>,
    pub delta: u8,
}

pub fn analyze_trace(trace: &RoutingTrace, p: usize) -> Result<TraceAnalysis> {
    let n = trace.topology.n();
    if p == 0 || p > n {
        return Err(Error::PebbleOutOfRange { pebble: p, n });
    }
    let rounds = trace.swap_rounds(p);
    let mut bursts: Vec<(usize, usize)> = Vec::new();
    for &r in &rounds {
        match bursts.last_mut() {
            Some((start, len)) if *start + *len == r => *len += 1,
            _ => bursts.push((r, 1)),
        }
    }
    let waits: Vec<usize> = bursts.windows(2).map(|w| w[1].0 - (w[0].0 + w[0].1)).collect();
    let first_offset = rounds.first().map_or(0, |&r| r - 1);
    let finish_round = rounds.last().copied().unwrap_or(0);

    // the partner met at the start of the last burst; δ = 0 iff it was already
    // moving in round 1
    let delta = match bursts.last() {
        None => 0,
        Some(&(start, _)) => {
            let partner = trace.swaps[p - 1].iter().find(|&&(r, _)| r == start).map(|&(_, q)| q).unwrap();
            let moved_first = trace.swaps[partner - 1].first().is_some_and(|&(r, _)| r == 1);
            u8::from(!moved_first)
        }
    };
    Ok(TraceAnalysis { pebble: p, finish_round, swap_count: rounds.len(), first_offset, bursts, waits, delta })
}

/// Looks for a pebble that starts swapping with a run of pebbles it is
/// comparable to and then pauses before it has made as many swaps as the
/// run is long. Returns the pebble and the run.
pub fn consecutive_swap_violation(trace: &RoutingTrace) -> Option<(usize, Vec<usize>)> {
    let state = SpinState::new(trace.topology, &trace.perm, trace.effective_spins()).ok()?;
    let n = state.n();
    let at: Vec<usize> = (1..=n).map(|v| state.pebble_at(v)).collect();
    for p in 1..=n {
        for dir in [true, false] {
            let rel = |q: usize| q != p && if dir { is_bigger(&state, p, q) } else { is_bigger(&state, q, p) };
            for run in maximal_runs(&at, trace.topology.is_cycle(), &rel) {
                let swaps = &trace.swaps[p - 1];
                let Some(k) = swaps.iter().position(|(_, q)| run.contains(q)) else { continue };
                let start = swaps[k].0;
                let consecutive = swaps[k..].iter().enumerate().take_while(|&(i, &(r, _))| r == start + i).count();
                if consecutive < run.len() {
                    return Some((p, run));
                }
            }
        }
    }
    None
}

/// Maximal runs of consecutive vertices whose pebbles satisfy `keep`.
fn maximal_runs(at: &[usize], wraps: bool, keep: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
    let n = at.len();
    if at.iter().all(|&q| keep(q)) {
        return vec![at.to_vec()];
    }
    // start scanning just after a rejected vertex so no run is split by the wrap
    let start = if wraps { (0..n).find(|&i| !keep(at[i])).unwrap() + 1 } else { 0 };
    let mut runs = Vec::new();
    let mut cur = Vec::new();
    for k in 0..n {
        let q = at[(start + k) % n];
        if keep(q) {
            cur.push(q);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_routes_in_n_minus_q() {
        for n in [4, 6, 8] {
            for q in 1..=(n as i64 / 2) {
                for q in [q, -q] {
                    if -q == n as i64 / 2 {
                        continue;
                    }
                    let (pi, spins, edge) = rotation_plan(n, q).unwrap();
                    let t = route_odd_even(Topology::cycle(n).unwrap(), &pi, &spins, edge).unwrap();
                    assert_eq!(t.rounds_used(), n - q.unsigned_abs() as usize, "n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn rotation_long_spin_pebble_never_waits() {
        let (pi, spins, edge) = rotation_plan(6, 1).unwrap();
        let t = route_odd_even(Topology::cycle(6).unwrap(), &pi, &spins, edge).unwrap();
        let p = (1..=6).find(|&p| spins[p - 1] == 5).unwrap();
        let a = analyze_trace(&t, p).unwrap();
        assert_eq!(a.swap_count, 5);
        assert!(a.waits.iter().all(|&w| w == 0));
        assert_eq!(a.finish_round, 5);
    }

    #[test]
    fn identity_takes_no_rounds() {
        let c = Topology::cycle(6).unwrap();
        let t = route_odd_even(c, &Permutation::identity(6), &[0; 6], (1, 2)).unwrap();
        assert_eq!(t.rounds_used(), 0);
        let a = analyze_trace(&t, 3).unwrap();
        assert_eq!((a.swap_count, a.finish_round), (0, 0));
    }

    #[test]
    fn odd_cycle_is_rejected() {
        let c = Topology::cycle(5).unwrap();
        let err = route_odd_even(c, &Permutation::identity(5), &[0; 5], (1, 2)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedTopology(_)));
    }

    #[test]
    fn reversal_on_path() {
        let pi: Permutation = "4,3,2,1".parse().unwrap();
        let t = route_path(&pi).unwrap();
        assert!(t.rounds_used() <= 4);
        let check = verify_schedule(t.topology, &pi, &t.rounds).unwrap();
        assert!(check.sorted);
    }

    #[test]
    fn schedule_replay() {
        let c = Topology::cycle(4).unwrap();
        let pi: Permutation = "2,1,3,4".parse().unwrap();
        assert!(!verify_schedule(c, &pi, &[]).unwrap().sorted);
        let m = Matching::new(vec![(1, 2)]);
        assert_eq!(verify_schedule(c, &pi, &[m]).unwrap(), ScheduleCheck { sorted: true, rounds_used: 1 });
        let bad = Matching::new(vec![(1, 2), (2, 3)]);
        assert!(verify_schedule(c, &pi, &[bad]).is_err());
    }

    #[test]
    fn alternation_of_edge_classes() {
        let (pi, spins, edge) = rotation_plan(8, 1).unwrap();
        let t = route_odd_even(Topology::cycle(8).unwrap(), &pi, &spins, edge).unwrap();
        for (k, m) in t.rounds.iter().enumerate() {
            for &(u, _) in m.edges() {
                assert_eq!((u + 8 - edge.0) % 2, k % 2);
            }
        }
    }

    #[test]
    fn runs_respect_wraparound() {
        let at = vec![1, 2, 3, 4, 5, 6];
        let keep = |q: usize| q != 3;
        assert_eq!(maximal_runs(&at, true, &keep), vec![vec![4, 5, 6, 1, 2]]);
        assert_eq!(maximal_runs(&at, false, &keep), vec![vec![1, 2], vec![4, 5, 6]]);
    }

    #[test]
    fn trace_file_round_trip_fields() {
        let (pi, spins, edge) = rotation_plan(6, 2).unwrap();
        let t = route_odd_even(Topology::cycle(6).unwrap(), &pi, &spins, edge).unwrap();
        let f = t.to_file();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with(r#"{"n":6,"topology":"cycle","perm":[3,4,5,6,1,2],"odd_edge":[1,2]"#));
        let back: TraceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.rounds_used, 4);
    }
}
