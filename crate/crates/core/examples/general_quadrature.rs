//! Accepted-user means for non-exponential laws and a grace-period penalty.

use parkcharge::analytic::{self, QuadratureSettings};
use parkcharge::{DistributionSpec, PiecewiseLinear, Tariff, UserModel};

fn main() -> parkcharge::Result<()> {
    let model = UserModel {
        charge: DistributionSpec::generalized_gamma(-1.35188, 33.7831, 1.44212, 1.19403)?,
        appointment: DistributionSpec::uniform(0.5, 3.0)?,
        threshold: DistributionSpec::discrete(&[(4.0, 0.4), (8.0, 0.3), (10.0, 0.2), (20.0, 0.1)])?,
    };
    let settings = QuadratureSettings::default();
    for grace in [0.0, 0.25, 0.5] {
        let penalty = if grace > 0.0 {
            PiecewiseLinear::with_grace(grace, 4.0)?
        } else {
            PiecewiseLinear::linear(4.0)?
        };
        let tariff = Tariff::new(PiecewiseLinear::linear(2.0)?, penalty);
        let m = analytic::accepted_means(&model, &tariff, &settings)?;
        println!(
            "grace {grace:.2} h: qbar {:.4}  E[T_pc] {:.4} h  E[T_o] {:.4} h  E[R] {:.3}",
            m.qbar, m.e_tpc, m.e_to, m.e_revenue
        );
    }
    Ok(())
}
