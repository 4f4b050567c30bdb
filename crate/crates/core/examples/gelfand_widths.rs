//! Gelfand widths of the ℓ₁ ball in ℓ₂: exact section maxima by vertex
//! enumeration, searched over functional choices, with the (n+1)^{-1/2}
//! certificate below.
//!
//! ```bash
//! cargo run --example gelfand_widths
//! ```

use nalgebra::DMatrix;

use infocomp::l1_ball::{gelfand_width_bounds, kernel_polytope_max_l2};

fn main() {
    // The section of the cross-polytope by the kernel of (1, -1): a single
    // segment whose endpoints have l2 norm 1/sqrt(2).
    let constraints = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
    let section = kernel_polytope_max_l2(&constraints).unwrap();
    println!(
        "max ||x||_2 over {{||x||_1 <= 1, x_1 = x_2}}: {:.12} at {:?}",
        section.value,
        section.witness.as_slice()
    );

    let m = 6;
    println!();
    println!("widths for m = {m}:");
    println!("{:>3} {:>12} {:>12}", "n", "lower", "upper");
    for n in 0..=m {
        let est = gelfand_width_bounds(m, n, 6, 42).unwrap();
        println!("{n:>3} {:>12.6} {:>12.6}", est.lower_bound, est.upper_bound);
        assert!(est.lower_bound <= est.upper_bound + 1e-12);
    }
}
