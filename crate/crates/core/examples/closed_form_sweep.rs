//! Penalty-rate sweep for exponential charge and appointment durations.

use parkcharge::analytic::QuadratureSettings;
use parkcharge::optimizer::{self, Metric, Mode, SimulationSettings};
use parkcharge::{queueing, DistributionSpec, QueueParams, Tariff, UserModel};

fn main() -> parkcharge::Result<()> {
    let model = UserModel {
        charge: DistributionSpec::exponential(60.0 / 45.0)?,
        appointment: DistributionSpec::exponential(60.0 / 105.0)?,
        threshold: DistributionSpec::degenerate(4.0)?,
    };
    let tariff = Tariff::linear(2.0, 0.0)?;
    let queue = QueueParams::new(10, 8.0)?;
    let grid = optimizer::grid(0.0, 10.0, 0.01)?;
    let rows = optimizer::sweep(
        &model,
        &tariff,
        &queue,
        &grid,
        Mode::Analytic,
        &QuadratureSettings::default(),
        &SimulationSettings::default(),
    )?;
    for row in rows.iter().step_by(100) {
        println!(
            "alpha_o {:>5.2}  utilization {:.4}  revenue {:>6.2} $/h",
            row.alpha_o,
            row.metric(Metric::Utilization).unwrap_or(f64::NAN),
            row.metric(Metric::Revenue).unwrap_or(f64::NAN)
        );
    }
    let (a_u, u) = optimizer::argmax_penalty(&rows, Metric::Utilization)?;
    let (a_r, r) = optimizer::argmax_penalty(&rows, Metric::Revenue)?;
    let ideal = queueing::ideal_benchmark(&model, &tariff, &queue)?;
    println!("best utilization {u:.4} at {a_u}; best revenue {r:.2} $/h at {a_r}");
    println!("ideal users: utilization {:.4}, revenue {:.2} $/h", ideal.utilization, ideal.revenue_rate);
    Ok(())
}
