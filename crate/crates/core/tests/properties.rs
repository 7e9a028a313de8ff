use std::sync::OnceLock;

use proptest::prelude::*;

use cnrt::disbursement::{canonical_disbursement, valid_disbursements};
use cnrt::router::consecutive_swap_violation;
use cnrt::solver::{bfs_table, rank_permutation, unrank_permutation};
use cnrt::{
    enumerate_minimized, minimize, route_odd_even, spin_lower_bound, verify_schedule, DistanceTable, Permutation,
    RoutingTrace, SpinState, Topology, TraceFile,
};

fn permutation(lo: usize, hi: usize) -> impl Strategy<Value = Permutation> {
    (lo..=hi)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn cycle_table(n: usize) -> &'static DistanceTable {
    static TABLES: [OnceLock<DistanceTable>; 8] = [const { OnceLock::new() }; 8];
    TABLES[n].get_or_init(|| bfs_table(Topology::cycle(n).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn minimize_lands_in_spread_n(pi in permutation(3, 9), pick in any::<prop::sample::Index>()) {
        let all = valid_disbursements(&pi, usize::MAX).unwrap();
        let s = pick.get(&all);
        let m = minimize(&pi, s).unwrap();
        let spread = m.iter().max().unwrap() - m.iter().min().unwrap();
        prop_assert!(spread <= pi.n() as i32);
        prop_assert_eq!(m.iter().sum::<i32>(), 0);
    }

    #[test]
    fn canonical_disbursement_is_minimized(pi in permutation(3, 10)) {
        let s = canonical_disbursement(&pi);
        let st = SpinState::new(Topology::cycle(pi.n()).unwrap(), &pi, s).unwrap();
        prop_assert!(st.is_minimized());
        prop_assert_eq!(st.spins().iter().map(|x| x.unsigned_abs()).max().unwrap(), spin_lower_bound(&pi));
    }

    #[test]
    fn odd_even_sorts_even_cycles_within_n(pi in (2usize..=5).prop_flat_map(|h| permutation(2 * h, 2 * h)), odd in 1usize..=2) {
        let n = pi.n();
        let topology = Topology::cycle(n).unwrap();
        for spins in enumerate_minimized(&pi).unwrap() {
            let t = route_odd_even(topology, &pi, &spins, (odd, odd + 1)).unwrap();
            prop_assert!(t.rounds_used() <= n);
            prop_assert!(verify_schedule(topology, &pi, &t.rounds).unwrap().sorted);
            prop_assert!(consecutive_swap_violation(&t).is_none());
        }
    }

    #[test]
    fn trace_file_replays(pi in permutation(6, 6)) {
        let topology = Topology::cycle(6).unwrap();
        let trace: RoutingTrace = route_odd_even(topology, &pi, &canonical_disbursement(&pi), (1, 2)).unwrap();
        let text = serde_json::to_string(&trace.to_file()).unwrap();
        let file: TraceFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(file.permutation().unwrap(), pi.clone());
        let replay = verify_schedule(file.topology().unwrap(), &pi, &file.matchings()).unwrap();
        prop_assert!(replay.sorted);
        prop_assert_eq!(replay.rounds_used, file.rounds_used);
    }

    #[test]
    fn exact_schedules_replay(pi in permutation(3, 7)) {
        let n = pi.n();
        let table = cycle_table(n);
        let route = table.exact_rt(&pi).unwrap();
        prop_assert_eq!(route.rounds, table.distance(&pi).unwrap() as usize);
        let replay = verify_schedule(Topology::cycle(n).unwrap(), &pi, &route.schedule).unwrap();
        prop_assert!(replay.sorted);
        prop_assert!(spin_lower_bound(&pi) as usize <= route.rounds);
    }

    #[test]
    fn routing_number_is_dihedral_invariant(pi in permutation(3, 7), r in 0usize..7, reflect in any::<bool>()) {
        let table = cycle_table(pi.n());
        let q = pi.relabel(r % pi.n(), reflect);
        prop_assert_eq!(table.distance(&pi).unwrap(), table.distance(&q).unwrap());
    }

    #[test]
    fn inverse_has_the_same_routing_number(pi in permutation(3, 7)) {
        let table = cycle_table(pi.n());
        prop_assert_eq!(table.distance(&pi).unwrap(), table.distance(&pi.inverse()).unwrap());
    }

    #[test]
    fn ranks_are_positions(pi in permutation(1, 12)) {
        prop_assert_eq!(unrank_permutation(pi.n(), rank_permutation(&pi)), pi);
    }
}
