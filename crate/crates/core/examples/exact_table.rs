//! Builds the distance table of `C_n` (or `P_n` with `path`) and prints the
//! distribution of routing numbers plus one optimal schedule for the slowest
//! permutation.
//!
//!     cargo run --release --example exact_table -- 7 cycle

use cnrt::{bfs_table, Topology, TopologyKind};

fn main() -> cnrt::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let kind: TopologyKind = args.next().as_deref().unwrap_or("cycle").parse()?;
    let table = bfs_table(Topology::new(kind, n)?)?;

    let mut histogram = vec![0u64; table.max_distance() as usize + 1];
    for &d in table.distances() {
        histogram[d as usize] += 1;
    }
    println!("{}", table.topology());
    for (d, count) in histogram.iter().enumerate() {
        println!("  rt = {d:>2}: {count}");
    }

    let census = table.census();
    let worst = &census.argmax[0];
    let route = table.exact_rt(worst)?;
    println!("{worst} needs {} rounds:", route.rounds);
    for m in &route.schedule {
        println!("  {:?}", m.edges());
    }
    Ok(())
}
