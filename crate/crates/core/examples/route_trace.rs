//! Routes a permutation by odd-even transposition, writes the trace file,
//! reads it back and replays the schedule.
//!
//!     cargo run --example route_trace -- 4,1,6,3,2,5 /tmp/trace.json

use cnrt::disbursement::canonical_disbursement;
use cnrt::{analyze_trace, route_odd_even, verify_schedule, Permutation, Topology, TraceFile};

fn main() -> cnrt::Result<()> {
    let mut args = std::env::args().skip(1);
    let pi: Permutation = args.next().as_deref().unwrap_or("4,1,6,3,2,5").parse()?;
    let path = args.next().unwrap_or_else(|| std::env::temp_dir().join("cnrt-trace.json").display().to_string());

    let topology = Topology::cycle(pi.n())?;
    let trace = route_odd_even(topology, &pi, &canonical_disbursement(&pi), (1, 2))?;
    std::fs::write(&path, serde_json::to_string_pretty(&trace.to_file())?)?;

    let file: TraceFile = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
    let replay = verify_schedule(file.topology()?, &file.permutation()?, &file.matchings())?;
    println!("{path}: {} rounds, replay sorted = {}", file.rounds_used, replay.sorted);
    for p in 1..=pi.n() {
        let a = analyze_trace(&trace, p)?;
        println!("  pebble {p}: swaps in rounds {:?}, finished by {}", trace.swap_rounds(p), a.finish_round);
    }
    Ok(())
}
