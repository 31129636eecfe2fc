//! Certifies a seeded batch of random systems across all strata and prints
//! the summary. Pass the batch size as the first argument.
use std::time::Instant;

use pwl_cycles::sweep::{run_sweep, SweepConfig};

fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let cfg = SweepConfig {
        n,
        seed: 1,
        ..Default::default()
    };
    let t = Instant::now();
    let (rows, summary) = run_sweep(&cfg);
    print!("{}", summary.csv_trailer());
    println!("# {:.1}s for {} systems", t.elapsed().as_secs_f64(), rows.len());
    for row in rows.iter().filter(|r| !r.report.certified).take(5) {
        println!("# uncertified {} {:?}: {:?}", row.stratum, row.system.to_array(), row.report.notes);
    }
}
