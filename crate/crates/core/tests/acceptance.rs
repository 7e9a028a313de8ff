//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints one PASS or FAIL line; exits nonzero if any fails.

use std::time::Instant;

use cnrt::disbursement::spin_lower_bound;
use cnrt::router::{rotation_plan, route_path};
use cnrt::solver::{bfs_table, factorial, unrank_permutation, DistanceTable};
use cnrt::suite::{run_suite, SuiteOptions};
use cnrt::{classify_extremal, route_extremal, route_odd_even, verify_schedule, Error, ExtremalKind, Permutation, Topology};

struct Tables {
    cycles: Vec<Option<DistanceTable>>,
    paths: Vec<Option<DistanceTable>>,
    /// Build time of C_3..C_9 and of C_10, in seconds.
    small_secs: f64,
    c10_secs: f64,
}

impl Tables {
    fn cycle(&self, n: usize) -> &DistanceTable {
        self.cycles[n].as_ref().unwrap()
    }
    fn path(&self, n: usize) -> &DistanceTable {
        self.paths[n].as_ref().unwrap()
    }
}

fn build_tables() -> Tables {
    let mut cycles: Vec<Option<DistanceTable>> = (0..=10).map(|_| None).collect();
    let mut paths: Vec<Option<DistanceTable>> = (0..=10).map(|_| None).collect();
    let t = Instant::now();
    for n in 3..=9 {
        cycles[n] = Some(bfs_table(Topology::cycle(n).unwrap()).unwrap());
    }
    let small_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    cycles[10] = Some(bfs_table(Topology::cycle(10).unwrap()).unwrap());
    let c10_secs = t.elapsed().as_secs_f64();
    for n in 2..=8 {
        paths[n] = Some(bfs_table(Topology::path(n).unwrap()).unwrap());
    }
    Tables { cycles, paths, small_secs, c10_secs }
}

/// `2,3,…,n,1` and `n,1,2,…,n-1`, written out directly.
fn unit_rotations(n: usize) -> Vec<String> {
    let up: Vec<String> = (2..=n).chain([1]).map(|x| x.to_string()).collect();
    let down: Vec<String> = [n].into_iter().chain(1..n).map(|x| x.to_string()).collect();
    let mut v = vec![up.join(","), down.join(",")];
    v.sort();
    v
}

type Verdict = Result<String, String>;

fn cycle_max(t: &Tables) -> Verdict {
    let mut maxima = Vec::new();
    for n in 3..=10 {
        let m = t.cycle(n).max_distance() as usize;
        if m != n - 1 {
            return Err(format!("C_{n}: max {m}, expected {}", n - 1));
        }
        maxima.push(m);
    }
    if t.small_secs > 60.0 || t.c10_secs > 900.0 {
        return Err(format!("over budget: n<=9 {:.1}s, n=10 {:.1}s", t.small_secs, t.c10_secs));
    }
    Ok(format!("max = n-1 for n=3..10 {maxima:?}; n<=9 built in {:.1}s, n=10 in {:.1}s", t.small_secs, t.c10_secs))
}

fn slowest_are_unit_rotations(t: &Tables) -> Verdict {
    for n in [5, 6, 7, 8, 10] {
        let mut got: Vec<String> = t.cycle(n).census().argmax.iter().map(|p| p.to_string()).collect();
        got.sort();
        if got != unit_rotations(n) {
            return Err(format!("C_{n}: argmax {got:?}"));
        }
    }
    let c4 = t.cycle(4).census();
    if !c4.argmax.iter().any(|p| p.to_string() == "3,2,1,4") {
        return Err("C_4 argmax lacks the antipodal transposition 3,2,1,4".into());
    }
    Ok(format!("argmax = unit rotations for n in 5,6,7,8,10; C_4 argmax ({}) contains 3,2,1,4", c4.argmax.len()))
}

fn rotations(t: &Tables) -> Verdict {
    let mut cases = 0;
    for n in 3..=10usize {
        let topology = Topology::cycle(n).unwrap();
        for q in -(n as i64 - 1) / 2..=n as i64 / 2 {
            if q == 0 {
                continue;
            }
            let want = n - q.unsigned_abs() as usize;
            let pi = Permutation::rotation(n, q);
            let exact = t.cycle(n).distance(&pi).unwrap() as usize;
            let bound = spin_lower_bound(&pi) as usize;
            if exact != want || bound != want {
                return Err(format!("n={n} q={q}: exact {exact}, bound {bound}, want {want}"));
            }
            if n % 2 == 0 {
                let (pi, spins, edge) = rotation_plan(n, q).map_err(|e| e.to_string())?;
                let trace = route_odd_even(topology, &pi, &spins, edge).map_err(|e| e.to_string())?;
                let replay = verify_schedule(topology, &pi, &trace.rounds).map_err(|e| e.to_string())?;
                if trace.rounds_used() != want || !replay.sorted {
                    return Err(format!("n={n} q={q}: odd-even {} rounds", trace.rounds_used()));
                }
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} rotations, n=3..10; odd-even part on even n only (undefined on odd cycles)"))
}

fn paths(t: &Tables) -> Verdict {
    for n in 2..=8 {
        let topology = Topology::path(n).unwrap();
        for r in 0..factorial(n) {
            let pi = unrank_permutation(n, r);
            let trace = route_path(&pi).map_err(|e| e.to_string())?;
            let replay = verify_schedule(topology, &pi, &trace.rounds).map_err(|e| e.to_string())?;
            if trace.rounds_used() > n || !replay.sorted {
                return Err(format!("P_{n} {pi}: {} rounds, sorted {}", trace.rounds_used(), replay.sorted));
            }
        }
        let m = t.path(n).max_distance() as usize;
        if n >= 3 && m != n {
            return Err(format!("P_{n}: max {m}"));
        }
    }
    Ok("odd-even sorts every permutation of P_n in <= n rounds and max = n, n<=8".into())
}

fn strategies() -> Verdict {
    let mut routed = 0u64;
    let mut unit = 0u64;
    for n in [6, 8] {
        let topology = Topology::cycle(n).unwrap();
        for r in 0..factorial(n) {
            let pi = unrank_permutation(n, r);
            for class in classify_extremal(&pi).map_err(|e| e.to_string())? {
                if class.kind == ExtremalKind::Type1 {
                    continue;
                }
                match route_extremal(&pi, &class) {
                    Ok(trace) => {
                        let replay = verify_schedule(topology, &pi, &trace.rounds).map_err(|e| e.to_string())?;
                        if trace.rounds_used() + 2 > n || !replay.sorted {
                            return Err(format!("{pi} {} anchor {}: {} rounds", class.kind, class.anchor, trace.rounds_used()));
                        }
                        routed += 1;
                    }
                    // unit rotations need n - 1 rounds, so no strategy fits n - 2
                    Err(Error::StrategyNotApplicable(_)) if matches!(pi.rotation_offset(), Some(1 | -1)) => unit += 1,
                    Err(e) => return Err(format!("{pi} {} anchor {}: {e}", class.kind, class.anchor)),
                }
            }
        }
    }
    Ok(format!("{routed} windows routed in <= n-2 for n=6,8; {unit} unit-rotation windows excluded"))
}

fn necessity(t: &Tables) -> Verdict {
    let mut slowest = 0;
    for n in 5..=8 {
        let table = t.cycle(n);
        for r in 0..factorial(n) {
            if table.distance_of_rank(r) as usize != n - 1 {
                continue;
            }
            slowest += 1;
            let pi = unrank_permutation(n, r);
            if classify_extremal(&pi).map_err(|e| e.to_string())?.is_empty() {
                return Err(format!("{pi} needs {} rounds but has no extremal window", n - 1));
            }
        }
    }
    Ok(format!("{slowest} permutations with rt = n-1 for n=5..8, all classified"))
}

fn property_suites() -> Verdict {
    let options = SuiteOptions::default();
    let mut summary = Vec::new();
    for (name, lo, hi) in [("disbursement", 3, 10), ("order", 3, 10), ("consecutive", 4, 10)] {
        let report = run_suite(name, lo..=hi, &options).map_err(|e| e.to_string())?;
        if let Some(c) = report.failures().next() {
            return Err(format!("{name}: {} n={} {}", c.claim, c.n, c.counterexample.clone().unwrap_or_default()));
        }
        let cases: u64 = report.checks.iter().map(|c| c.cases).sum();
        summary.push(format!("{name} {cases} cases"));
    }
    Ok(format!("{} (exhaustive n<=7, n<=8 for odd-even traces, 10^4 random above)", summary.join(", ")))
}

fn bounds(t: &Tables) -> Verdict {
    let mut cases = 0u64;
    for n in 3..=8 {
        let topology = Topology::cycle(n).unwrap();
        let table = t.cycle(n);
        for r in 0..factorial(n) {
            let pi = unrank_permutation(n, r);
            let d = table.distance_of_rank(r) as u32;
            if spin_lower_bound(&pi) > d {
                return Err(format!("{pi}: spin bound {} above exact {d}", spin_lower_bound(&pi)));
            }
            cases += 1;
        }
        if (table.max_distance() as usize) < topology.diameter() {
            return Err(format!("C_{n}: max below diameter"));
        }
        let path = Topology::path(n).unwrap();
        if (t.path(n).max_distance() as usize) < path.diameter() {
            return Err(format!("P_{n}: max below diameter"));
        }
    }
    Ok(format!("spin bound <= exact on {cases} permutations; rt >= diam for C_n and P_n, n<=8"))
}

fn main() {
    let started = Instant::now();
    let tables = build_tables();
    let criteria: [(&str, Box<dyn Fn() -> Verdict + '_>); 8] = [
        ("cycle-max-is-n-minus-1", Box::new(|| cycle_max(&tables))),
        ("slowest-are-unit-rotations", Box::new(|| slowest_are_unit_rotations(&tables))),
        ("rotation-needs-n-minus-q", Box::new(|| rotations(&tables))),
        ("paths-sort-within-n", Box::new(|| paths(&tables))),
        ("window-strategies-within-n-minus-2", Box::new(strategies)),
        ("slowest-have-extremal-window", Box::new(|| necessity(&tables))),
        ("property-suites", Box::new(property_suites)),
        ("lower-bounds-consistent", Box::new(|| bounds(&tables))),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 8 passed in {:.1}s", 8 - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
