//! Worst-case minimal errors of a compact problem: the (n+1)-st singular
//! value, attained by rank-n truncation, cross-checked by brute force.
//!
//! ```bash
//! cargo run --example worst_case_truncation
//! ```

use infocomp::spectral::{
    apply_optimal_algorithm, brute_force_worst_error, worst_case_error, Element, LinearProblem,
    SingularSpectrum,
};

fn main() {
    let spectrum = SingularSpectrum::power_law(1.0, 8).unwrap();
    println!("spectrum sigma_i = 1/i, m = 8");

    let problem = LinearProblem::diagonal(spectrum.clone());
    println!("{:>3} {:>14} {:>14}", "n", "sigma_{n+1}", "brute force");
    for n in 0..spectrum.len() {
        let exact = worst_case_error(&spectrum, n);
        let brute = brute_force_worst_error(&problem, n, 7, 5_000).unwrap();
        println!("{n:>3} {exact:>14.9} {brute:>14.9}");
        assert!(brute <= exact && brute >= (1.0 - 1e-6) * exact);
    }

    // The optimal algorithm reproduces S f exactly at full rank and kills
    // everything past the truncation index.
    let f = Element::from_slice(&[0.4, -0.3, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0]);
    let full = apply_optimal_algorithm(&problem, 8, &f).unwrap();
    let exact = problem.apply(&problem.element_to_source(&f));
    println!(
        "full-rank truncation vs direct application: residual {:.2e}",
        (full - exact).norm()
    );
}
