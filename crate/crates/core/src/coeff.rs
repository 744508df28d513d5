//! Coefficient domains for the matrices of complexes. Only the integers are not a field.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{One, Zero};

pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// Short name used in reports (`Z`, `Q`, `F2`, ...).
    const NAME: &'static str;
    /// Whether every nonzero element is invertible.
    const FIELD: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The inverse, when this element is a unit.
    fn unit_inverse(&self) -> Option<Self>;
    /// Whether this element is `±1`; such pivots are preferred during elimination.
    fn is_plus_minus_one(&self) -> bool {
        *self == Self::one() || *self == Self::one().neg()
    }
}

/// Rational coefficients.
pub type Q = Ratio<i128>;
/// The field with two elements.
pub type F2 = Zp<2>;

impl Coeff for i64 {
    const NAME: &'static str = "Z";
    const FIELD: bool = false;
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("integer overflow in matrix entry")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(*o).expect("integer overflow in matrix entry")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("integer overflow in matrix entry")
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.abs() == 1).then_some(*self)
    }
}

impl Coeff for Q {
    const NAME: &'static str = "Q";
    const FIELD: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn is_plus_minus_one(&self) -> bool {
        self.is_integer() && self.numer().abs() == 1
    }
}

/// Integers modulo a prime `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zp<const P: u64>(u64);

impl<const P: u64> Zp<P> {
    pub fn new(v: i64) -> Self {
        Zp(v.rem_euclid(P as i64) as u64)
    }
    pub fn value(&self) -> u64 {
        self.0
    }
    fn pow(self, mut e: u64) -> Self {
        let (mut base, mut acc) = (self.0, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Zp(acc)
    }
}

impl<const P: u64> Coeff for Zp<P> {
    const NAME: &'static str = if P == 2 { "F2" } else { "Fp" };
    const FIELD: bool = true;
    fn zero() -> Self {
        Zp(0)
    }
    fn one() -> Self {
        Zp(1 % P)
    }
    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Zp((self.0 + o.0) % P)
    }
    fn sub(&self, o: &Self) -> Self {
        Zp((self.0 + P - o.0) % P)
    }
    fn mul(&self, o: &Self) -> Self {
        Zp(self.0 * o.0 % P)
    }
    fn neg(&self) -> Self {
        Zp((P - self.0) % P)
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_units() {
        assert_eq!(3i64.unit_inverse(), None);
        assert_eq!((-1i64).unit_inverse(), Some(-1));
    }

    #[test]
    fn rational_inverse() {
        let x = Q::from_i64(4);
        assert_eq!(Coeff::mul(&x, &x.unit_inverse().unwrap()), <Q as Coeff>::one());
        assert!(!x.is_plus_minus_one());
    }

    #[test]
    fn mod_p() {
        type F5 = Zp<5>;
        let x = F5::from_i64(-3);
        assert_eq!(x.value(), 2);
        assert_eq!(x.mul(&x.unit_inverse().unwrap()), F5::one());
        assert_eq!(F2::from_i64(3).add(&F2::one()), F2::zero());
        assert_eq!(F2::NAME, "F2");
    }
}
