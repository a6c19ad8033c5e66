//! Appell-Lerch series: exact expansions, holomorphic parts at cusps, cusp
//! orders, and the derived series `L_p(v)` and `F_{p,s}`.

mod cusp;
mod derived;
mod lerch;

pub use cusp::{
    h1_at_cusp, leading_order, ord_dahat, ord_glx, two_case_order, AppellPoint, MatSL2,
};
pub use derived::{aux_delta_sum, aux_g, fps_crank_series, fps_series, lp_polar, lp_series};
pub use lerch::{
    appell_a, appell_du, appell_series, appell_series_skipping, d_appell_at, AppellPart,
};
