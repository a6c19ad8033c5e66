//! Truncated Puiseux series and the q-products, theta functions and mock
//! theta functions built from them.

mod mocktheta;
pub mod products;
mod pseries;
mod theta;

pub use mocktheta::mocktheta_g;
pub use products::{bernoulli2, binomial_product, e2_expand, pochhammer, EtaSpec};
pub use pseries::PSeries;
pub use theta::{theta_expand, theta_expand_sum};
