//! The dissection theorems for the NT and M_w differences: case split, the
//! `L_p` correction, the two computation paths, the t-polynomial fits, and the
//! named identities and congruences built on them.

mod cases;
mod fit;
mod named;
mod parts;

pub use cases::{
    c_exponent, case_select, chi12, epsilon_p, l_shift, script_l, shifted_lp, v_index, Case,
    CaseData,
};
pub use fit::{
    check_bound, g_p, hauptmodul, modular_prefactor, modularize, prefactor_p, t_poly_expand,
    t_poly_fit, IdentityRecord,
};
pub use named::{
    mw_antisymmetric_sum, mw_eleven, nt_mw_five, nt_residue_sums_five, one_minus_t_seven, scan,
    seven_nt_combination, seven_product, table_for, Combination, ScanOutcome, SevenIdentity,
};
pub use parts::{PartEngine, PartKind, Path};
