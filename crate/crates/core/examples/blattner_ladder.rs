//! K-types of holomorphic discrete series of SL(2,R): each one is a ladder
//! starting at its minimal K-type.

use orbita::blattner::{minimal_ktype, restrict_to_k};
use orbita::bundled;
use orbita::chambers::orbit_param;
use orbita::exact::{frac, q};
use orbita::Weight;

fn main() {
    let g = bundled::sl2();
    for k in 1..=4 {
        let orbit = orbit_param(&g, &Weight(vec![frac(k, 2)])).unwrap();
        let ktypes = restrict_to_k(&g, &orbit, &q(12)).unwrap();
        let ladder: Vec<String> = ktypes.coeffs.iter().map(|(mu, m)| format!("{mu}x{m}")).collect();
        println!("lambda={} minimal={} : {}", orbit.lambda, minimal_ktype(&g, &orbit), ladder.join(" "));
    }

    // SU(2,1) stays multiplicity free even off the holomorphic chamber;
    // the large discrete series of Sp(4,R) do not.
    for (name, g, lambda) in [
        ("su21", bundled::su21(), Weight(vec![q(1), q(0)])),
        ("sp4", bundled::sp4(), Weight(vec![frac(1, 1), frac(-1, 2)])),
    ] {
        let orbit = orbit_param(&g, &lambda).unwrap();
        let ktypes = restrict_to_k(&g, &orbit, &q(14)).unwrap();
        let max = ktypes.coeffs.values().max().unwrap();
        println!("{name} lambda={}: {} K-types, largest multiplicity {max}", orbit.lambda, ktypes.coeffs.len());
    }
}
