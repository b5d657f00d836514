//! Rational functions with factored denominators.
//!
//! Every denominator that arises in this crate is a product of binomials
//! `1 - c*X^mu` (`c` a signed parameter monomial). Keeping the denominator as a
//! multiset of normalized factors makes addition a matter of taking a
//! factor-wise lcm, and lets cancellation run as exact trial division by each
//! stored factor. Equality never depends on that cancellation: two values are
//! equal iff their difference has a zero numerator.

use std::cmp::Ordering;
use std::fmt;

use super::int::Int;
use super::modp;
use super::poly::{render_mono, Mono, Poly, NVARS};

/// A denominator factor normalized modulo units of the Laurent ring and
/// integer content: content 1, lowest term a positive constant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Factor(Poly);

impl Factor {
    pub fn poly(&self) -> &Poly {
        &self.0
    }

    /// `(m, s)` when the factor is `1 - s*m`.
    pub fn binomial(&self) -> Option<(Mono, i32)> {
        self.0.as_normalized_binomial()
    }

    /// `1 - m`; `m` must not be the trivial monomial.
    pub fn one_minus(m: Mono) -> (Unit, Factor) {
        normalize(&Poly::one_minus(m)).expect("1 - m with m != 1 is not a unit")
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.0.terms();
        let b = other.0.terms();
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let c = x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

/// A unit of the Laurent ring times an integer: `coef * mono`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Unit {
    pub coef: Int,
    pub mono: Mono,
}

/// Splits `p = unit * factor`. Returns `None` when `p` is itself a monomial
/// (entirely a unit), and panics on zero.
pub fn normalize(p: &Poly) -> Option<(Unit, Factor)> {
    assert!(!p.is_zero(), "normalizing the zero polynomial");
    if p.len() == 1 {
        return None;
    }
    let (m0, c0) = p.first().unwrap().clone();
    let mut content = p.content();
    if c0.is_negative() {
        content = -content;
    }
    let f = p.mul_mono(&m0.inv());
    let f = if content.is_one() { f } else { f.div_int_exact(&content) };
    Some((Unit { coef: content, mono: m0 }, Factor(f)))
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("denominator vanishes under the evaluation")]
    DenominatorVanishes,
    #[error("denominator becomes zero after specializing t = q^l")]
    ZeroDenominatorAfterSpecialization,
    #[error("expression is not a Laurent polynomial")]
    NotPolynomial,
}

/// `num / (den_int * prod factors^mult)` with `den_int > 0`.
#[derive(Clone, Debug)]
pub struct RatFn {
    num: Poly,
    den_int: Int,
    factors: Vec<(Factor, u32)>,
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn::from_poly(Poly::zero())
    }

    pub fn one() -> RatFn {
        RatFn::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> RatFn {
        RatFn { num, den_int: Int::ONE, factors: Vec::new() }
    }

    pub fn from_int(c: impl Into<Int>) -> RatFn {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn from_mono(m: Mono) -> RatFn {
        RatFn::from_poly(Poly::mono(m))
    }

    /// `num / den` for a nonzero `den`.
    pub fn from_fraction(num: Poly, den: &Poly) -> RatFn {
        let mut r = RatFn::from_poly(num);
        r.divide_by_poly(den);
        r.reduce();
        r
    }

    /// `1 / (1 - m)`.
    pub fn inv_one_minus(m: Mono) -> RatFn {
        let mut r = RatFn::one();
        r.divide_by_poly(&Poly::one_minus(m));
        r
    }

    fn divide_by_poly(&mut self, den: &Poly) {
        match normalize(den) {
            None => {
                let (m, c) = den.as_monomial().expect("zero denominator");
                self.divide_by_unit(&Unit { coef: c.clone(), mono: *m });
            }
            Some((u, f)) => {
                self.divide_by_unit(&u);
                self.push_factor(f, 1);
            }
        }
    }

    fn divide_by_unit(&mut self, u: &Unit) {
        self.num = self.num.mul_mono(&u.mono.inv());
        if u.coef.is_negative() {
            self.num = self.num.neg();
        }
        let a = u.coef.abs();
        if !a.is_one() {
            self.den_int = &self.den_int * &a;
        }
    }

    fn multiply_by_unit(&mut self, u: &Unit) {
        self.num = self.num.mul_term(&u.mono, &u.coef);
    }

    fn push_factor(&mut self, f: Factor, e: u32) {
        match self.factors.binary_search_by(|(g, _)| g.cmp(&f)) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (f, e)),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn den_int(&self) -> &Int {
        &self.den_int
    }

    pub fn factors(&self) -> &[(Factor, u32)] {
        &self.factors
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> Poly {
        let mut d = Poly::constant(self.den_int.clone());
        for (f, e) in &self.factors {
            d = d.mul(&f.0.pow(*e));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.den_int.is_one() && self.num.is_one()
    }

    /// Cancels integer content and every stored factor that divides the
    /// numerator exactly.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.factors.clear();
            self.den_int = Int::ONE;
            return;
        }
        if !self.den_int.is_one() {
            let g = self.num.content().gcd(&self.den_int);
            if !g.is_one() {
                self.num = self.num.div_int_exact(&g);
                self.den_int = self.den_int.div_exact(&g);
            }
        }
        let mut i = 0;
        while i < self.factors.len() {
            while self.factors[i].1 > 0 {
                let q = match self.factors[i].0.binomial() {
                    Some((m, s)) => self.num.div_one_minus(&m, s),
                    None => self.num.div_exact(&self.factors[i].0 .0),
                };
                match q {
                    Some(q) => {
                        self.num = q;
                        self.factors[i].1 -= 1;
                    }
                    None => break,
                }
            }
            if self.factors[i].1 == 0 {
                self.factors.remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// Returns the Laurent polynomial this represents, if it is one.
    pub fn to_poly(&self) -> Option<Poly> {
        let mut r = self.clone();
        r.reduce();
        if !r.factors.is_empty() {
            return None;
        }
        if r.den_int.is_one() {
            Some(r.num)
        } else if r.num.terms().iter().all(|(_, c)| c.is_divisible_by(&r.den_int)) {
            Some(r.num.div_int_exact(&r.den_int))
        } else {
            None
        }
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den_int: self.den_int.clone(), factors: self.factors.clone() }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        let mut r = RatFn {
            num: self.num.mul(&o.num),
            den_int: &self.den_int * &o.den_int,
            factors: self.factors.clone(),
        };
        for (f, e) in &o.factors {
            r.push_factor(f.clone(), *e);
        }
        if !r.factors.is_empty() || !r.den_int.is_one() {
            r.reduce();
        }
        r
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFn {
        let mut r = RatFn { num: self.num.mul(p), den_int: self.den_int.clone(), factors: self.factors.clone() };
        if !r.factors.is_empty() {
            r.reduce();
        }
        r
    }

    pub fn mul_mono(&self, m: &Mono, c: &Int) -> RatFn {
        let mut r = RatFn { num: self.num.mul_term(m, c), den_int: self.den_int.clone(), factors: self.factors.clone() };
        if !r.den_int.is_one() {
            r.reduce();
        }
        r
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.combine(o, true)
    }

    fn combine(&self, o: &RatFn, negate: bool) -> RatFn {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        // lcm of the two factor multisets
        let mut lcm: Vec<(Factor, u32)> = Vec::with_capacity(self.factors.len() + o.factors.len());
        let mut extra_a = Poly::one();
        let mut extra_b = Poly::one();
        let (mut i, mut j) = (0, 0);
        let (fa, fb) = (&self.factors, &o.factors);
        while i < fa.len() || j < fb.len() {
            let ord = if i == fa.len() {
                Ordering::Greater
            } else if j == fb.len() {
                Ordering::Less
            } else {
                fa[i].0.cmp(&fb[j].0)
            };
            match ord {
                Ordering::Less => {
                    extra_b = extra_b.mul(&fa[i].0 .0.pow(fa[i].1));
                    lcm.push(fa[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    extra_a = extra_a.mul(&fb[j].0 .0.pow(fb[j].1));
                    lcm.push(fb[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let (ea, eb) = (fa[i].1, fb[j].1);
                    match ea.cmp(&eb) {
                        Ordering::Less => extra_a = extra_a.mul(&fa[i].0 .0.pow(eb - ea)),
                        Ordering::Greater => extra_b = extra_b.mul(&fa[i].0 .0.pow(ea - eb)),
                        Ordering::Equal => {}
                    }
                    lcm.push((fa[i].0.clone(), ea.max(eb)));
                    i += 1;
                    j += 1;
                }
            }
        }
        let (da, db) = (&self.den_int, &o.den_int);
        let (den_int, ka, kb) = if da == db {
            (da.clone(), Int::ONE, Int::ONE)
        } else {
            let g = da.gcd(db);
            let ka = db.div_exact(&g);
            let kb = da.div_exact(&g);
            (da * &ka, ka, kb)
        };
        let mut a = self.num.mul(&extra_a);
        if !ka.is_one() {
            a = a.scale(&ka);
        }
        let mut b = o.num.mul(&extra_b);
        if !kb.is_one() {
            b = b.scale(&kb);
        }
        let num = if negate { a.sub(&b) } else { a.add(&b) };
        let mut r = RatFn { num, den_int, factors: lcm };
        r.reduce();
        r
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, o: &RatFn) -> bool {
        self.sub(o).is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            return None;
        }
        let mut num = Poly::constant(self.den_int.clone());
        for (f, e) in &self.factors {
            num = num.mul(&f.0.pow(*e));
        }
        let mut r = RatFn::from_poly(num);
        r.divide_by_poly(&self.num);
        r.reduce();
        Some(r)
    }

    /// Applies a ring endomorphism given by a monomial map. Errors if a
    /// denominator factor maps to zero.
    pub fn map_monomials(&self, f: impl Fn(&Mono) -> Mono) -> Result<RatFn, ArithError> {
        let mut r = RatFn::from_poly(self.num.map_monomials(&f));
        r.den_int = self.den_int.clone();
        for (fac, e) in &self.factors {
            let img = fac.0.map_monomials(&f);
            if img.is_zero() {
                return Err(ArithError::ZeroDenominatorAfterSpecialization);
            }
            match normalize(&img) {
                None => {
                    let (m, c) = img.as_monomial().unwrap();
                    let u = Unit { coef: c.clone(), mono: *m };
                    for _ in 0..*e {
                        r.divide_by_unit(&u);
                    }
                }
                Some((u, g)) => {
                    for _ in 0..*e {
                        r.divide_by_unit(&u);
                    }
                    r.push_factor(g, *e);
                }
            }
        }
        r.reduce();
        Ok(r)
    }

    /// Like [`RatFn::map_monomials`] for maps that are automorphisms (never
    /// annihilate a factor).
    pub fn map_auto(&self, f: impl Fn(&Mono) -> Mono) -> RatFn {
        self.map_monomials(f).expect("automorphism annihilated a denominator")
    }

    pub fn eval_mod(&self, p: u64, vals: &[u64; NVARS], invs: &[u64; NVARS]) -> Result<u64, ArithError> {
        let (n, d) = self.eval_mod_frac(p, vals, invs);
        let di = modp::inv_mod(d, p).ok_or(ArithError::DenominatorVanishes)?;
        Ok(modp::mul_mod(n, di, p))
    }

    /// Numerator and denominator residues, without inverting; the
    /// denominator may be zero.
    pub fn eval_mod_frac(&self, p: u64, vals: &[u64; NVARS], invs: &[u64; NVARS]) -> (u64, u64) {
        let n = self.num.eval_mod(p, vals, invs);
        let mut d = self.den_int.rem_u64(p);
        for (f, e) in &self.factors {
            d = modp::mul_mod(d, modp::pow_mod(f.0.eval_mod(p, vals, invs), *e as u64, p), p);
        }
        (n, d)
    }

    /// Multiplies by `prod factor^e` with integer exponents; used by gauge
    /// conjugation, where `e < 0` moves the factor into the denominator.
    pub fn mul_factor_power(&self, f: &Factor, e: i32) -> RatFn {
        if e >= 0 {
            return self.mul_poly(&f.0.pow(e as u32));
        }
        let mut r = self.clone();
        r.push_factor(f.clone(), (-e) as u32);
        r.reduce();
        r
    }

    pub fn mul_unit(&self, u: &Unit) -> RatFn {
        let mut r = self.clone();
        r.multiply_by_unit(u);
        r.reduce();
        r
    }

    pub fn div_unit(&self, u: &Unit) -> RatFn {
        let mut r = self.clone();
        r.divide_by_unit(u);
        r.reduce();
        r
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.den_int.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        render_denominator(self, f)?;
        f.write_str(")")
    }
}

/// Denominator in factored canonical form: `k*(f1)^e1*(f2)^e2...`.
pub fn render_denominator(r: &RatFn, f: &mut impl fmt::Write) -> fmt::Result {
    let mut first = true;
    if !r.den_int.is_one() || r.factors.is_empty() {
        write!(f, "{}", r.den_int)?;
        first = false;
    }
    for (fac, e) in &r.factors {
        if !first {
            f.write_char('*')?;
        }
        first = false;
        write!(f, "({})", fac.0)?;
        if *e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Parses the denominator rendering of [`render_denominator`].
pub fn parse_denominator(s: &str) -> Result<Poly, String> {
    let s = s.trim();
    let mut den = Poly::one();
    let mut rest = s;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or("unbalanced parenthesis")?;
            let inner = super::poly::parse_poly(&r[..close])?;
            rest = &r[close + 1..];
            let mut e = 1u32;
            if let Some(r2) = rest.strip_prefix('^') {
                let end = r2.find('*').unwrap_or(r2.len());
                e = r2[..end].parse().map_err(|_| "bad factor exponent")?;
                rest = &r2[end..];
            }
            den = den.mul(&inner.pow(e));
        } else {
            let end = rest.find('*').unwrap_or(rest.len());
            let k: Int = rest[..end].parse().map_err(|_| format!("bad integer in denominator {s:?}"))?;
            den = den.scale(&k);
            rest = &rest[end..];
        }
        rest = rest.strip_prefix('*').unwrap_or(rest);
    }
    Ok(den)
}

pub fn mono_to_string(m: &Mono) -> String {
    let mut s = String::new();
    render_mono(m, &mut s).unwrap();
    s
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::{parse_poly, VAR_TS};

    fn x(e: &[i32]) -> Poly {
        Poly::mono(Mono::x(e))
    }

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn cancellation_by_cross_multiplication() {
        // (X - 1)/(X^2 - 1) == 1/(X + 1)
        let a = RatFn::from_fraction(p("X1 - 1"), &p("X1^2 - 1"));
        let b = RatFn::from_fraction(Poly::one(), &p("X1 + 1"));
        assert_eq!(a, b);
        assert!(a.equals(&a));
    }

    #[test]
    fn sign_flipped_fractions_agree() {
        // (t - t^-1 X)/(1 - X) == (t^-1 X - t)/(X - 1)
        let a = RatFn::from_fraction(p("ts - ts^-1*X1"), &p("1 - X1"));
        let b = RatFn::from_fraction(p("ts^-1*X1 - ts"), &p("X1 - 1"));
        assert_eq!(a, b);
        // hand expansion of the cross product difference
        let cross = p("ts - ts^-1*X1").mul(&p("X1 - 1")).sub(&p("ts^-1*X1 - ts").mul(&p("1 - X1")));
        assert!(cross.is_zero());
    }

    #[test]
    fn sum_uses_lcm_and_reduces() {
        // 1/(1-X) + X/(1-X) ... = (1+X)/(1-X); 1/(1-X) - X/(1-X) = 1
        let a = RatFn::inv_one_minus(Mono::x(&[1]));
        let b = a.mul_poly(&x(&[1]));
        let d = a.sub(&b);
        assert_eq!(d.to_poly().unwrap(), Poly::one());
        assert!(d.factors().is_empty());
    }

    #[test]
    fn monomial_map_renormalizes_factors() {
        // X -> X^-1 on 1/(1 - X) gives 1/(1 - X^-1) = -X/(1 - X)
        let a = RatFn::inv_one_minus(Mono::x(&[1]));
        let b = a.map_auto(|m| m.inv());
        let expect = RatFn::from_fraction(x(&[1]).neg(), &p("1 - X1"));
        assert_eq!(b, expect);
    }

    #[test]
    fn specialization_can_kill_a_parameter_factor() {
        let r = RatFn::from_fraction(Poly::one(), &p("1 - ts^2"));
        let err = r.map_monomials(|m| {
            let mut m = *m;
            m.0[VAR_TS] = 0;
            m
        });
        assert_eq!(err.unwrap_err(), ArithError::ZeroDenominatorAfterSpecialization);
    }

    #[test]
    fn inverse_and_eval() {
        let a = RatFn::from_fraction(p("X1 - 1"), &p("X1^2 - 1"));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one() || a.mul(&inv) == RatFn::one());
        let pr = modp::PROBE_PRIMES[0];
        let mut vals = [1u64; NVARS];
        vals[3] = 5;
        let invs = vals.map(|v| modp::inv_mod(v, pr).unwrap());
        let lhs = a.eval_mod(pr, &vals, &invs).unwrap();
        let rhs = RatFn::from_fraction(Poly::one(), &p("X1 + 1")).eval_mod(pr, &vals, &invs).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(modp::mul_mod(lhs, 6, pr), 1);
    }

    #[test]
    fn denominator_rendering_round_trips() {
        let a = RatFn::from_fraction(p("X1"), &p("2 - 2*X1"))
            .mul(&RatFn::inv_one_minus(Mono::x(&[0, 1])))
            .mul(&RatFn::inv_one_minus(Mono::x(&[0, 1])));
        let mut s = String::new();
        render_denominator(&a, &mut s).unwrap();
        assert_eq!(s, "2*(1 - X2)^2*(1 - X1)");
        assert_eq!(parse_denominator(&s).unwrap(), a.denominator());
    }
}
