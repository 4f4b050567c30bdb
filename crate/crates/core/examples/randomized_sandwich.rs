//! Average-case errors on the sphere against their closed form, and the
//! two-sided sandwich on the minimal randomized error.
//!
//! ```bash
//! cargo run --example randomized_sandwich
//! ```

use infocomp::randomized::{
    avg_case_error_closed_form, avg_case_error_mc_profile, sandwich_report, SphereSampler,
};
use infocomp::spectral::{LinearProblem, SingularSpectrum};

fn main() {
    let m = 16;
    let spectrum = SingularSpectrum::power_law(1.0, m).unwrap();
    let problem = LinearProblem::diagonal(spectrum.clone());

    let mut sampler = SphereSampler::new(m, 2024).unwrap();
    let profile = avg_case_error_mc_profile(&problem, &mut sampler, 50_000).unwrap();

    println!("{:>3} {:>12} {:>12} {:>10}", "n", "closed form", "monte carlo", "mc se");
    for n in (0..=m).step_by(4) {
        let closed = avg_case_error_closed_form(&spectrum, n, m).unwrap();
        let est = profile[n];
        println!(
            "{n:>3} {closed:>12.6} {:>12.6} {:>10.1e}",
            est.value, est.standard_error
        );
        assert!((est.value - closed).abs() <= 4.0 * est.standard_error);
    }

    println!();
    println!("{:>3} {:>12} {:>12}", "n", "lower", "upper");
    for n in [1usize, 2, 4] {
        let bounds = sandwich_report(&spectrum, n).unwrap();
        println!("{n:>3} {:>12.6} {:>12.6}", bounds.lower, bounds.upper);
    }
}
