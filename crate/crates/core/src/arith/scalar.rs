//! Scalars: rational functions in the parameters `q, ts, tl`.

use std::fmt;

use super::int::Int;
use super::poly::{Mono, Poly, VAR_Q, VAR_TL, VAR_TS};
use super::ratfn::{ArithError, RatFn};

/// An element of `Q(q, ts, tl)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldScalar(RatFn);

impl FieldScalar {
    pub fn zero() -> Self {
        FieldScalar(RatFn::zero())
    }

    pub fn one() -> Self {
        FieldScalar(RatFn::one())
    }

    pub fn int(c: i64) -> Self {
        FieldScalar(RatFn::from_int(c))
    }

    pub fn q() -> Self {
        Self::mono(Mono::q(1))
    }

    pub fn ts() -> Self {
        Self::mono(Mono::var(VAR_TS, 1))
    }

    pub fn tl() -> Self {
        Self::mono(Mono::var(VAR_TL, 1))
    }

    pub fn mono(m: Mono) -> Self {
        assert!(m.is_param_only(), "scalar monomial mentions X");
        FieldScalar(RatFn::from_mono(m))
    }

    /// `num / den`; both must be parameter polynomials and `den != 0`.
    pub fn fraction(num: Poly, den: &Poly) -> Self {
        assert!(num.is_param_only() && den.is_param_only(), "scalar mentions X");
        assert!(!den.is_zero(), "zero denominator");
        FieldScalar(RatFn::from_fraction(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        assert!(p.is_param_only(), "scalar mentions X");
        FieldScalar(RatFn::from_poly(p))
    }

    pub fn numerator(&self) -> &Poly {
        self.0.numerator()
    }

    pub fn denominator(&self) -> Poly {
        self.0.denominator()
    }

    pub fn as_ratfn(&self) -> &RatFn {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        FieldScalar(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldScalar(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        FieldScalar(self.0.mul(&o.0))
    }

    pub fn neg(&self) -> Self {
        FieldScalar(self.0.neg())
    }

    pub fn inv(&self) -> Option<Self> {
        self.0.inv().map(FieldScalar)
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, k: i32) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut r = Self::one();
        for _ in 0..k.unsigned_abs() {
            r = r.mul(&base);
        }
        Some(r)
    }

    pub fn scale_int(&self, c: i64) -> Self {
        FieldScalar(self.0.mul_mono(&Mono::ONE, &Int::from(c)))
    }

    /// Substitutes `tl -> q^l1`, `ts -> q^l2`.
    pub fn specialize_t(&self, l1: u32, l2: u32) -> Result<Self, ArithError> {
        self.0.map_monomials(|m| specialize_mono(m, l1, l2)).map(FieldScalar)
    }
}

/// The monomial map `tl -> q^l1`, `ts -> q^l2`.
pub fn specialize_mono(m: &Mono, l1: u32, l2: u32) -> Mono {
    let mut r = *m;
    let shift = m.exp(VAR_TL) * l1 as i32 + m.exp(VAR_TS) * l2 as i32;
    r.0[VAR_TL] = 0;
    r.0[VAR_TS] = 0;
    r.0[VAR_Q] = (m.exp(VAR_Q) + shift).try_into().expect("exponent overflow");
    r
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn specialize_basic() {
        assert_eq!(FieldScalar::tl().specialize_t(1, 1).unwrap(), FieldScalar::q());
        let k = FieldScalar::ts().sub(&FieldScalar::ts().inv().unwrap());
        assert!(k.specialize_t(0, 0).unwrap().is_zero());
    }

    #[test]
    fn specialize_rational_example() {
        // (tl q^2 - tl^-1)/(q^2 - 1) at l = (2, 1) -> (q^4 - q^-2)/(q^2 - 1)
        let s = FieldScalar::fraction(p("-tl^-1 + q^2*tl"), &p("q^2 - 1"));
        let got = s.specialize_t(2, 1).unwrap();
        let want = FieldScalar::fraction(p("q^4 - q^-2"), &p("q^2 - 1"));
        assert_eq!(got, want);
    }

    #[test]
    fn specialize_reports_degenerate_denominator() {
        let s = FieldScalar::fraction(Poly::one(), &p("ts - q"));
        assert_eq!(s.specialize_t(0, 1).unwrap_err(), ArithError::ZeroDenominatorAfterSpecialization);
        assert!(s.specialize_t(0, 2).is_ok());
    }

    #[test]
    fn field_operations() {
        let a = FieldScalar::fraction(p("q - 1"), &p("q^2 - 1"));
        let b = FieldScalar::fraction(Poly::one(), &p("q + 1"));
        assert_eq!(a, b);
        let c = a.mul(&b.inv().unwrap());
        assert_eq!(c, FieldScalar::one());
        assert_eq!(a.sub(&b), FieldScalar::zero());
    }
}
