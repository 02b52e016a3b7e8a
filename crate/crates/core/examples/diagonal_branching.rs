//! Restriction of D_k x D_l from SL(2,R) x SL(2,R) to the diagonal: a ladder
//! of holomorphic discrete series starting at D_{k+l}.

use orbita::branching::{restrict_discrete_series, RestrictOptions};
use orbita::bundled;
use orbita::exact::{fmt_q, frac, q};
use orbita::Weight;

fn main() {
    let pair = bundled::config("diag-sl2").unwrap().pair().unwrap();
    for (k, l) in [(1, 1), (1, 2), (2, 3)] {
        let lambda = Weight(vec![frac(k, 2), frac(l, 2)]);
        let result = restrict_discrete_series(&pair, &lambda, &q(10), &RestrictOptions::default()).unwrap();
        let terms: Vec<String> = result
            .entries
            .iter()
            .filter(|e| e.multiplicity != 0)
            .map(|e| format!("{}x{}", e.orbit.lambda, e.multiplicity))
            .collect();
        println!(
            "k={k} l={l} ({:?}, gap {}, K' radius {}): {}",
            result.mode,
            result.gap.map(|g| fmt_q(&g)).unwrap_or_default(),
            fmt_q(&result.kprime_radius),
            terms.join(" ")
        );
    }
}
