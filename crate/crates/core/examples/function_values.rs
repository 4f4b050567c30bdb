//! Function values as information: the best n evaluation points can only
//! lose against the best n arbitrary functionals, Monte Carlo integration
//! converges like n^{-1/2}, and on one constrained model two values
//! integrate exactly.
//!
//! ```bash
//! cargo run --example function_values
//! ```

use infocomp::function_values::{
    mc_integration, project_to_two_point_constraint, std_vs_all, two_point_exact, GridModel,
    Polynomial,
};
use infocomp::randomized::replication_rng;

fn main() {
    let model = GridModel::random(8, 5).unwrap();
    println!("random grid model, m = 8");
    println!("{:>3} {:>12} {:>12}", "n", "e_std", "e_all");
    for n in 0..=8 {
        let cmp = std_vs_all(&model, n).unwrap();
        println!("{n:>3} {:>12.6} {:>12.6}", cmp.e_std, cmp.e_all);
        assert!(cmp.e_std >= cmp.e_all - 1e-9);
    }

    println!();
    let mut rng = replication_rng(31, 0);
    for n in [100usize, 10_000] {
        let est = mc_integration(|t| t * t, n, &mut rng).unwrap();
        println!(
            "monte carlo for the integral of t^2 with n = {n:>6}: {:.6} +- {:.6}",
            est.value, est.standard_error
        );
    }

    println!();
    // On the subspace where the integral equals the endpoint average, two
    // function values integrate exactly.
    let cubic = project_to_two_point_constraint(&Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]));
    let value = two_point_exact(&cubic).unwrap();
    println!(
        "constrained cubic: (f(0)+f(1))/2 = {value:.12}, exact integral = {:.12}",
        cubic.integral_unit()
    );
}
