// Randomized sweeps, CSV summaries and replay of a single instance.

use lyzlab::cli::csv_summary;
use lyzlab::verify::{make_instance, run_instance, sweep, SweepKind};

pub fn run_example() -> lyzlab::Result<()> {
    for (kind, n, count) in [
        (SweepKind::LyzPolar, 3, 50),
        (SweepKind::Main, 2, 50),
        (SweepKind::Mahler, 2, 20),
        (SweepKind::BallBarthe, 5, 100),
    ] {
        let s = sweep(kind, count, 7, n);
        println!(
            "{:?} n={n}: min ratio {:.9} failed {} flags {:?}",
            kind, s.summary.min_ratio, s.summary.failed, s.summary.flags
        );
    }

    let small = sweep(SweepKind::LyzPolar, 3, 1, 2);
    print!("{}", csv_summary(&small.reports)?);

    let inst = make_instance(SweepKind::Main, 7, 2, 4)?;
    let dumped = serde_json::to_string(&inst).unwrap();
    let replayed = run_instance(&serde_json::from_str(&dumped).unwrap())?;
    println!("replayed {} ratio {}", replayed.id, replayed.ratio);
    Ok(())
}

fn main() -> lyzlab::Result<()> {
    run_example()
}
