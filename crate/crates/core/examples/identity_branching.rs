//! Restricting a group to itself must return the representation unchanged:
//! multiplicity one at the starting parameter and zero everywhere else.

use orbita::branching::{restrict_discrete_series, Pair, RestrictOptions};
use orbita::bundled;
use orbita::chambers::enumerate_all_orbits;
use orbita::exact::q;

fn main() {
    let pair = Pair::identity(bundled::su21());
    for orbit in enumerate_all_orbits(&pair.g, &q(3)).into_iter().take(4) {
        let result = restrict_discrete_series(&pair, &orbit.lambda, &q(4), &RestrictOptions::default()).unwrap();
        let nonzero: Vec<String> = result
            .entries
            .iter()
            .filter(|e| e.multiplicity != 0)
            .map(|e| format!("{}x{}", e.orbit.lambda, e.multiplicity))
            .collect();
        println!("{} -> [{}] over {} parameters", orbit.lambda, nonzero.join(" "), result.entries.len());
    }
}
