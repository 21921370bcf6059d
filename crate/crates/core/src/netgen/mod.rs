//! Bipartite bank-asset network generation and assortativity rewiring.

mod generate;
mod network;
mod powerlaw;
mod rewire;

pub use generate::{generate_network, DegreeSpec, MEAN_TOLERANCE};
pub use network::BipartiteNetwork;
pub use powerlaw::{sample_truncated_powerlaw, TruncatedPowerLaw, TunedPowerLaw};
pub use rewire::{cost_h, degree_product_sum, rewire_assortativity, RewireOptions};
