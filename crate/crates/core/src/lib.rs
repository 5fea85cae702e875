pub mod alphabet;
pub mod construct;
pub mod detect;
pub mod error;
pub mod gog;
pub mod homo;
pub mod lattice;
pub mod marked;
pub mod metric;
pub mod mr;
pub mod oracle;
pub mod sl2;
pub mod surface;
pub mod word;

pub use alphabet::Alphabet;
pub use error::{Error, Result};
pub use word::{Letter, Word};

pub type IntMatrix = lattice::Matrix<i64>;
pub type BigMatrix = lattice::Matrix<num_bigint::BigInt>;
pub use marked::{Ball, MarkedGroup};
