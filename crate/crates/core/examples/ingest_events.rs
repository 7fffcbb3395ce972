//! Empirical duration laws from a charging-event log.

use parkcharge::cli::ingest::{ingest_events, EventFilter};

fn main() -> parkcharge::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/events.csv");
    let filter = EventFilter {
        charger_type: Some("standard".into()),
        min_park_min: Some(30.0),
        max_park_min: Some(180.0),
    };
    let r = ingest_events(path.as_ref(), &filter, 20.0)?;
    let s = &r.summary;
    println!("{} rows, {} kept, {} filtered, {} rejected", s.rows, s.kept, s.filtered_out, s.rejected);
    println!("mean park {:.3} h, mean charge {:.3} h", r.appointment.mean(), r.charge.mean());
    for b in &s.histogram {
        println!("{:>5}-{:<5} park {:>3} charge {:>3}", b.lo_min, b.hi_min, b.park_count, b.charge_count);
    }
    Ok(())
}
