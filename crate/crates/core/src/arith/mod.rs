//! Exact arithmetic: integers, Laurent polynomials, parameter scalars and
//! rational functions, plus evaluation into prime fields.

pub mod int;
pub mod modp;
pub mod poly;
pub mod ratfn;
pub mod scalar;

pub use int::Int;
pub use poly::{parse_poly, Mono, Poly, MAX_RANK, NVARS, VAR_Q, VAR_TL, VAR_TS, VAR_X0};
pub use ratfn::{ArithError, Factor, RatFn, Unit};
pub use scalar::{specialize_mono, FieldScalar};

/// `(x; q^2)_l = prod_{i=0}^{l-1} (1 - q^{2i} x)`.
pub fn poch(base: &Poly, l: u32) -> Poly {
    let mut r = Poly::one();
    for i in 0..l {
        r = r.mul(&Poly::one().sub(&base.mul_mono(&Mono::q(2 * i as i32))));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poch_examples() {
        let x = Poly::mono(Mono::x(&[1]));
        assert!(poch(&x, 0).is_one());
        let x2 = Poly::mono(Mono::x(&[2]));
        assert_eq!(poch(&x2, 1), Poly::one().sub(&x2));
        let want = Poly::one().sub(&x).mul(&Poly::one().sub(&x.mul_mono(&Mono::q(2))));
        assert_eq!(poch(&x, 2), want);
    }
}
