//! Blocking and occupancy of the loss system across lot sizes.

use parkcharge::queueing;

fn main() {
    println!("{:>6} {:>10} {:>14} {:>12}", "spots", "load", "blocking", "occupancy");
    for n in [1usize, 10, 100, 1000] {
        for load in [0.5, 0.9, 1.2] {
            let rho = load * n as f64;
            println!(
                "{n:>6} {rho:>10.1} {:>14.6e} {:>12.3}",
                queueing::erlang_b(rho, n),
                queueing::mean_occupancy(rho, n)
            );
        }
    }
}
