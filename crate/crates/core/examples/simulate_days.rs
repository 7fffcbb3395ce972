//! Simulated days under two penalty rates with common random numbers.

use parkcharge::cli::RunConfig;
use parkcharge::simulator;

fn main() -> parkcharge::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/london_standard.json");
    let cfg = RunConfig::load(path.as_ref())?;
    let sim = cfg.sim_config();
    for alpha_o in [0.0, 4.0] {
        let tariff = cfg.tariff.with_penalty_rate(alpha_o)?;
        let days = simulator::run_horizon(&sim, 200, &[tariff])?;
        let avg = simulator::average(&days);
        println!(
            "alpha_o {alpha_o}: utilization {:.3}  overstay {:.3}  revenue {:.1}/day  blocked {:.1}/day",
            avg.utilization, avg.overstay_frac, avg.revenue, avg.blocked
        );
    }
    Ok(())
}
