//! Exact branching laws for discrete series representations.
//!
//! The crate works entirely over the rationals. A real reductive group with a
//! compact Cartan subgroup is described by a [`RootDatum`]: a Cartan matrix,
//! compactness flags on the simple roots, an invariant form and a lattice of
//! weights. From there it enumerates chambers and Harish-Chandra parameters,
//! evaluates Blattner multiplicities, decides admissibility of a restriction
//! `G ⊂ G'` and computes the branching multiplicities of discrete series.
//!
//! ```
//! use orbita::{bundled, chambers};
//!
//! let su21 = bundled::su21();
//! assert_eq!(chambers::enumerate_chambers(&su21).len(), 3);
//! ```

pub mod admissible;
pub mod blattner;
pub mod branching;
pub mod bundled;
pub mod chambers;
pub mod characters;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod lp;
pub mod oracle;
pub mod rootdata;
pub mod selftest;
pub mod spinor;
pub mod weight;

pub use error::{Error, Result};
pub use exact::Q;
pub use rootdata::{GroupData, RootDatum};
pub use weight::Weight;
