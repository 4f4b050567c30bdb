//! Replacing discontinuous functionals by continuous ones in the weighted
//! sequence model, and watching the radius advantage vanish along a
//! dimension ladder.
//!
//! ```bash
//! cargo run --example discontinuous_transform
//! ```

use infocomp::sequence_model::{
    classify_continuity, transform_information, truncated_radius_ladder, Continuity, ModelSpace,
    SymbolicFunctional,
};

fn main() {
    let space = ModelSpace::new(1.0).unwrap();
    println!(
        "model space q = 1: coefficient families i^p are continuous iff p < {}",
        space.continuity_threshold()
    );
    for p in [-1.0, 0.0, 0.5, 1.0] {
        let l = SymbolicFunctional::power_law(p, 1.0).unwrap();
        println!("  p = {p:>4}: {:?}", classify_continuity(&l, &space));
    }

    // Discontinuous head plus encoded continuous functionals. The head
    // dies, the encoded information survives.
    let head = SymbolicFunctional::power_law(1.0, 1.0).unwrap();
    let e2 = SymbolicFunctional::point_mass(2, 1.0).unwrap();
    let e3 = SymbolicFunctional::point_mass(3, 1.0).unwrap();
    let encoded = vec![head.clone(), head.plus(&e2), head.plus(&e3)];
    let trace = transform_information(&encoded, &space);
    for (k, step) in trace.steps.iter().enumerate() {
        println!(
            "step {k}: {:?}, extension {:?}, emitted zero: {}",
            step.verdict,
            step.extension,
            trace.output[k].is_zero()
        );
        assert_eq!(classify_continuity(&trace.output[k], &space), Continuity::Continuous);
    }

    // A lone discontinuous functional is worthless in the limit: the
    // radius of the transformed (zero) information stays at sigma_1 while
    // the input information's advantage decays with the dimension.
    let lone = vec![SymbolicFunctional::power_law(2.0, 1.0).unwrap()];
    let rows = truncated_radius_ladder(&lone, &space, &[16, 64, 256]).unwrap();
    println!("{:>5} {:>16} {:>16} {:>12}", "d", "r(input)", "r(transformed)", "gap");
    for row in rows {
        println!(
            "{:>5} {:>16.12} {:>16.12} {:>12.3e}",
            row.dim,
            row.radius_input,
            row.radius_transformed,
            row.gap()
        );
    }
}
