//! Ring abstractions shared by the finite field, the Laurent series tower and
//! Witt vectors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;

/// A commutative ring whose elements carry enough context to build their own
/// zero and one.
///
/// Operations are fallible because precision-tracked series can run out of
/// certified coefficients.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + Sized {
    type Ctx: Copy + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    /// Exactly zero (not merely zero within a precision window).
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Result<Self>;
    fn sub(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Result<Self>;
    /// Multiplication by an integer.
    fn scale(&self, k: i64) -> Self;
    /// 0 for characteristic-zero test rings.
    fn characteristic(ctx: Self::Ctx) -> u32;

    fn scale_big(&self, k: &BigInt) -> Self {
        let p = Self::characteristic(self.ctx());
        assert!(p > 0, "scale_big must be overridden in characteristic 0");
        let r = (k % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
        self.scale(r.to_i64().expect("residue fits"))
    }

    /// Sum of many elements; rings with costly addition override this.
    fn sum_all(ctx: Self::Ctx, items: Vec<Self>) -> Result<Self> {
        items.iter().try_fold(Self::zero(ctx), |acc, x| acc.add(x))
    }

    fn pow(&self, mut e: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Relative precision caps used when an exact input has to be truncated,
/// e.g. when inverting `1 - t`. Indexed by nesting level: 1 is the
/// `t`-adic level, 2 the `pi`-adic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub t_cap: usize,
    pub pi_cap: usize,
}

impl Precision {
    pub fn new(t_cap: usize, pi_cap: usize) -> Self {
        Precision { t_cap, pi_cap }
    }

    pub fn cap(&self, level: usize) -> usize {
        match level {
            1 => self.t_cap,
            _ => self.pi_cap,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { t_cap: 24, pi_cap: 16 }
    }
}

/// Coefficient rings of characteristic `p` usable inside a Laurent series:
/// they can be inverted (when certified nonzero), and admit Frobenius and
/// `p`-th roots.
pub trait Coeff: Ring {
    /// 0 for `F_q`, 1 for `F_q((t))`, 2 for `F_q((t))((pi))`.
    const LEVEL: usize;

    /// Known to be nonzero (some certified coefficient is nonzero).
    fn certified_nonzero(&self) -> bool;
    /// No truncation anywhere in the element.
    fn is_exact(&self) -> bool;
    fn inv(&self, prec: &Precision) -> Result<Self>;
    /// `x^p`.
    fn frobenius(&self) -> Self;
    /// The unique `y` with `y^p = x`, if it exists.
    fn pth_root(&self) -> Result<Self>;
    /// `p`-th root of the sub-sum of terms whose exponents are all divisible
    /// by `p`; the coefficient rule of the Cartier operator.
    fn cartier_part(&self) -> Result<Self>;
    /// Text form accepted back by the expression parser.
    fn render(&self) -> String;
}

/// The integers, used only as a characteristic-zero oracle ring for Witt
/// vector ghost checks.
impl Ring for BigInt {
    type Ctx = ();

    fn ctx(&self) -> Self::Ctx {}
    fn zero(_: ()) -> Self {
        <BigInt as Zero>::zero()
    }
    fn one(_: ()) -> Self {
        <BigInt as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self - rhs)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }
    fn scale(&self, k: i64) -> Self {
        self * BigInt::from(k)
    }
    fn characteristic(_: ()) -> u32 {
        0
    }
    fn scale_big(&self, k: &BigInt) -> Self {
        self * k
    }
}
