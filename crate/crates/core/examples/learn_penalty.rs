//! Online choice of the penalty rate with UCB.

use parkcharge::bandit::{self, BanditState};
use parkcharge::cli::RunConfig;

fn main() -> parkcharge::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/london_standard.json");
    let cfg = RunConfig::load(path.as_ref())?;
    let sim = cfg.sim_config();
    let arms = cfg.bandit.arms.clone();
    let means = bandit::true_arm_means(&sim, &arms, 500)?;
    let mut state = BanditState::new(arms, cfg.reward_scale())?;
    let steps = bandit::simulate_learning(&sim, &mut state, 300, &means)?;
    for s in steps.iter().filter(|s| s.day % 50 == 0) {
        println!(
            "day {:>3}: regret {:>7.1} (normalized {:.3}, bound {:.0})",
            s.day, s.cumulative_regret, s.cumulative_regret_normalized, s.regret_bound
        );
    }
    for (i, a) in state.arms.iter().enumerate() {
        println!("alpha_o {a}: pulled {:>3} times, true mean {:.1}", state.counts[i], means[i]);
    }
    Ok(())
}
