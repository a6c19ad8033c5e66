//! Exact scalars: rationals, cyclotomic numbers, the Kronecker symbol and a
//! small rational linear solver.

mod cyc;
mod kronecker;
pub mod linalg;
mod rat;

pub use cyc::{cyclotomic_poly, Cyc};
pub use kronecker::kronecker;
pub use rat::{fmt_rat, parse_rat, rat, rat_int, rat_to_f64, serde_rat, serde_rat_opt, Rat};

use std::fmt::Debug;

/// Coefficient ring for truncated series.
pub trait Coeff:
    Clone + Debug + PartialEq + Send + Sync + num_traits::Zero + num_traits::One
{
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv_ref(&self) -> Option<Self>;
    fn from_rat(r: &Rat) -> Self;
    fn render(&self) -> String;

    fn scale_rat(&self, r: &Rat) -> Self {
        self.mul_ref(&Self::from_rat(r))
    }
}

impl Coeff for Rat {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Option<Self> {
        if num_traits::Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn render(&self) -> String {
        fmt_rat(self)
    }
}
