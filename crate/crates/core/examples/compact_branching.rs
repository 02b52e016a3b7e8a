//! Branching of finite-dimensional representations between compact groups:
//! the diagonal circle inside a two-torus, and Weyl dimensions for SU(2)xU(1).

use orbita::admissible::Embedding;
use orbita::characters::{branch_compact, weyl_dimension};
use orbita::exact::{frac, q};
use orbita::{bundled, GroupData, RootDatum, Weight};

fn main() {
    // The compact part of SU(2,1) is S(U(2)xU(1)).
    let g = bundled::su21();
    for a in 1..=4 {
        let mu = Weight(vec![q(a), q(a)]);
        if g.is_k_dominant_regular(&mu) {
            println!("dim K-type {mu} = {}", weyl_dimension(&g, &mu));
        }
    }

    // SU(3) -> SU(2) along the first simple root; the second simple root
    // restricts to minus half the root of SU(2).
    let su3 =
        GroupData::new(RootDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![true, true], None, None).unwrap()).unwrap();
    let su2 = GroupData::new(RootDatum::new(vec![vec![2]], vec![true], None, None).unwrap()).unwrap();
    let emb = Embedding::new(&su3, &su2, vec![vec![q(1), frac(-1, 2)]]).unwrap();
    let rho = Weight(vec![q(1), q(1)]);
    for highest in [Weight(vec![q(0), q(0)]), Weight(vec![q(1), q(1)]), Weight(vec![q(2), q(2)])] {
        let res = branch_compact(&su3, &su2, &emb, &(&highest + &rho)).unwrap();
        let parts: Vec<String> = res.coeffs.iter().map(|(mu, m)| format!("{mu}x{m}")).collect();
        println!("SU(3) highest weight {highest} -> SU(2) {}", parts.join(" "));
    }
}
