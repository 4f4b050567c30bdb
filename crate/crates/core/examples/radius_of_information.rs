//! Radii of information: what the best algorithm using a fixed list of
//! functionals can still not know.
//!
//! ```bash
//! cargo run --example radius_of_information
//! ```

use nalgebra::{DMatrix, DVector};

use infocomp::information::{
    kernel_basis, radius_nonadaptive, radius_recombination_check, truncation_information,
    InformationMap,
};
use infocomp::spectral::{worst_case_error, LinearProblem, SingularSpectrum};

fn main() {
    let problem =
        LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0, 0.5]).unwrap());

    // Observing the first coordinate leaves a kernel spanned by the rest;
    // the radius drops from sigma_1 to sigma_2.
    let e1 = DVector::from_row_slice(&[1.0, 0.0, 0.0, 0.0]);
    let info = InformationMap::new(4, vec![e1]).unwrap();
    let report = radius_nonadaptive(&problem, &info).unwrap();
    println!(
        "one coordinate observed: radius {}, kernel dim {}",
        report.radius, report.kernel_dim
    );

    let basis = kernel_basis(&info, problem.source_weights()).unwrap();
    println!("kernel basis is {}x{}", basis.nrows(), basis.ncols());

    // The truncation information is optimal: its radius is sigma_{n+1}.
    println!("{:>3} {:>10} {:>10}", "n", "radius", "sigma");
    for n in 0..=4 {
        let opt = truncation_information(&problem, n).unwrap();
        let r = radius_nonadaptive(&problem, &opt).unwrap().radius;
        println!("{n:>3} {r:>10.6} {:>10.6}", worst_case_error(problem.spectrum(), n));
    }

    // Recombining functionals by an invertible matrix changes the numbers
    // an algorithm sees, not what it can conclude.
    let pair = InformationMap::new(
        4,
        vec![
            DVector::from_row_slice(&[1.0, 0.0, 0.0, 0.0]),
            DVector::from_row_slice(&[0.0, 1.0, 0.0, 0.0]),
        ],
    )
    .unwrap();
    let shear = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
    println!(
        "radius invariant under recombination: {}",
        radius_recombination_check(&problem, &pair, &shear).unwrap()
    );
}
