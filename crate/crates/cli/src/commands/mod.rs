//! One module per subcommand. Each has clap `Flags` with every field
//! optional, resolved `Params` with defaults, and a `run` function.

pub mod channels;
pub mod epr;
pub mod g2;
pub mod spectra;
pub mod tomo;
pub mod wigner;
