//! Cusps of `Gamma_1(p)`, orders and multipliers of eta objects, the
//! dissection operators `U_{p,k}` / `U'_{p,k}`, and the valence bound that
//! turns a modular identity into a finite coefficient check.

mod cusps;
mod multiplier;
mod uop;

pub use crate::appell::MatSL2;
pub use cusps::{
    cusp_equiv, cusp_set, eta_div_ledger, normalize_cusp, ord_eta_scaled, ord_geta,
    poly_cusp_bounds, s_p, valence_bound, CuspClass, CuspDiv, DivisorLedger,
};
pub use multiplier::{chi_eta, chi_geta, rv_condition};
pub use uop::{upk, upk_prime, upk_prime_average};
