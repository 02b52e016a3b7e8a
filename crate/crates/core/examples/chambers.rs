//! Chambers of SU(2,1) and Sp(4,R), with the smallest orbit parameters in each.

use orbita::bundled;
use orbita::chambers::{c_norm2, enumerate_chambers, enumerate_orbits};
use orbita::exact::{fmt_q, q};

fn main() {
    for (name, g) in [("su21", bundled::su21()), ("sp4", bundled::sp4())] {
        let chambers = enumerate_chambers(&g);
        println!("{name}: {} chambers", chambers.len());
        for c in &chambers {
            let orbits = enumerate_orbits(&g, c, &q(7));
            let first: Vec<String> = orbits
                .iter()
                .take(3)
                .map(|o| format!("{} (c^2={})", o.lambda, fmt_q(&c_norm2(&g, &o.lambda))))
                .collect();
            println!("  chamber {} signs {:?} rep {}", c.id, c.signs, c.representative);
            println!("    {} orbits with c <= 7, e.g. {}", orbits.len(), first.join(", "));
        }
    }
}
