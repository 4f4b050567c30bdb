//! Estimating ‖x‖₂² on the ℓ₁ ball from random-sign functionals: the
//! empirical variance is unbiased and its RMSE decays like n^{-1/2}.
//!
//! ```bash
//! cargo run --example l1_variance_estimator
//! ```

use infocomp::l1_ball::{
    empirical_variance_estimator, estimator_variance_exact, rademacher_functional, rmse_sweep,
    L1Vector,
};
use infocomp::randomized::replication_rng;

fn main() {
    let x = L1Vector::spread(0.9, 16).unwrap();
    println!("x: mass 0.9 over 16 coordinates, ||x||_2^2 = {:.6}", x.l2_norm_squared());

    let mut rng = replication_rng(99, 0);
    let draws: Vec<f64> = (0..4).map(|_| rademacher_functional(&x, &mut rng)).collect();
    println!("four sign-functional draws: {draws:?}");

    let estimate = empirical_variance_estimator(&x, 64, &mut rng).unwrap();
    println!("one 64-draw estimate: {estimate:.6}");
    println!(
        "exact estimator std dev at n=64: {:.6}",
        estimator_variance_exact(&x, 64).sqrt()
    );

    println!();
    println!("{:>5} {:>12} {:>12}", "n", "rmse", "envelope");
    for row in rmse_sweep(&x, &[4, 16, 64, 256], 5_000, 11).unwrap() {
        println!("{:>5} {:>12.6} {:>12.6}", row.n, row.rmse, row.envelope);
        assert!(row.rmse <= row.envelope);
    }
}
