//! Admissibility of restricting a discrete series of SL(2,R) x SL(2,R) to the
//! diagonal: holomorphic x holomorphic is fine, holomorphic x antiholomorphic
//! is not.

use orbita::admissible::{assess, default_depth};
use orbita::bundled;
use orbita::chambers::orbit_param;
use orbita::exact::frac;
use orbita::Weight;

fn main() {
    let pair = bundled::config("diag-sl2").unwrap().pair().unwrap();
    for lambda in [[frac(1, 2), frac(1, 2)], [frac(1, 2), frac(-1, 2)], [frac(-1, 1), frac(-3, 2)]] {
        let orbit = orbit_param(&pair.gprime, &Weight(lambda.to_vec())).unwrap();
        let depth = default_depth(&pair.gprime, &orbit);
        let (cone, verdict) = assess(&pair.gprime, &pair.g, &pair.embedding, &orbit, &depth, false).unwrap();
        let gens: Vec<String> = cone.generators.iter().map(ToString::to_string).collect();
        println!("lambda'={} cone [{}]: {}", orbit.lambda, gens.join(" "), serde_json::to_string(&verdict).unwrap());
    }
}
