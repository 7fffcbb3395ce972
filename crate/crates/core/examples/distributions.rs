//! Sampling and moments of the bundled duration laws.

use parkcharge::DistributionSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> parkcharge::Result<()> {
    let laws = [
        ("exponential 45 min", DistributionSpec::exponential(60.0 / 45.0)?),
        ("uniform 30-180 min", DistributionSpec::uniform(0.5, 3.0)?),
        ("generalized gamma", DistributionSpec::generalized_gamma(-1.35188, 33.7831, 1.44212, 1.19403)?),
        ("threshold atoms", DistributionSpec::discrete(&[(4.0, 0.4), (8.0, 0.3), (10.0, 0.2), (20.0, 0.1)])?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{:<20} {:>10} {:>10} {:>10}", "law", "mean", "sampled", "median");
    for (name, law) in &laws {
        let n = 200_000;
        let sampled = (0..n).map(|_| law.sample(&mut rng)).sum::<f64>() / n as f64;
        println!("{name:<20} {:>10.4} {sampled:>10.4} {:>10.4}", law.mean(), law.quantile(0.5)?);
    }
    Ok(())
}
