//! Twisting the K-types of a discrete series by the spinor character leaves a
//! single K~-type, the one whose parameter is the Harish-Chandra parameter.

use orbita::blattner::restrict_to_k;
use orbita::bundled;
use orbita::chambers::{enumerate_chambers, enumerate_orbits};
use orbita::characters::tensor_spinor;
use orbita::exact::q;
use orbita::spinor::{cover_type, orientation_ratio, spinor_character};

fn main() {
    let g = bundled::su21();
    println!("cover: {:?}", cover_type(&g).kind);
    for c in enumerate_chambers(&g) {
        let s = spinor_character(&g, &c.representative).unwrap();
        for orbit in enumerate_orbits(&g, &c, &q(4)).into_iter().take(2) {
            let ktypes = restrict_to_k(&g, &orbit, &q(16)).unwrap();
            let twisted = tensor_spinor(&g, &ktypes, &s);
            let survivors: Vec<_> = twisted.certified_terms(&g).collect();
            let sign = orientation_ratio(&g, &c.representative, &-&orbit.lambda).unwrap();
            println!(
                "chamber {} lambda={}: {} K-types -> {:?} (expected sign {sign})",
                c.id,
                orbit.lambda,
                ktypes.coeffs.len(),
                survivors
            );
        }
    }
}
