//! The Macdonald operator `M`, the weight `Delta+`, and the
//! Ruijsenaars-Schneider Hamiltonian `H_l = Delta+ M Delta+^-1` at
//! `t_alpha = q^{l_alpha}`.

use std::fmt;

use crate::arith::{Mono, Poly, RatFn};
use crate::hecke::HeckeContext;
use crate::operator::{AffElem, FactoredWeight, NormalOp, ParamMode};
use crate::root_system::{HalfVec, RootSystemCn, WeylElem};

/// Spin `(l1, l2)`: `l1` on long roots, `l2` on short roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinPair {
    pub l1: u32,
    pub l2: u32,
}

impl SpinPair {
    pub fn new(l1: u32, l2: u32) -> Self {
        SpinPair { l1, l2 }
    }

    pub fn of_root(&self, alpha: &[i32]) -> u32 {
        if RootSystemCn::is_long(alpha) {
            self.l1
        } else {
            self.l2
        }
    }

    pub fn mode(&self) -> ParamMode {
        ParamMode::Specialized { l1: self.l1, l2: self.l2 }
    }

    pub fn shifted(&self) -> SpinPair {
        SpinPair { l1: self.l1 + 1, l2: self.l2 + 1 }
    }
}

impl fmt::Display for SpinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.l1, self.l2)
    }
}

impl std::str::FromStr for SpinPair {
    type Err = String;

    /// `"l"` sets both components, `"l1,l2"` sets them separately.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let p = |x: &str| x.parse::<u32>().map_err(|e| format!("bad spin {x:?}: {e}"));
        match parts.as_slice() {
            [a] => {
                let l = p(a)?;
                Ok(SpinPair::new(l, l))
            }
            [a, b] => Ok(SpinPair::new(p(a)?, p(b)?)),
            _ => Err(format!("bad spin {s:?}")),
        }
    }
}

fn xm(mu: &[i32]) -> Mono {
    Mono::x(mu)
}

/// `(a X^mu - b) / (c X^mu - d)` for monomial scalars.
fn ratio(a: Mono, b: Mono, c: Mono, d: Mono, mu: &[i32]) -> RatFn {
    let num = Poly::mono(a.mul(&xm(mu))).sub(&Poly::mono(b));
    let den = Poly::mono(c.mul(&xm(mu))).sub(&Poly::mono(d));
    RatFn::from_fraction(num, &den)
}

/// `prod_{alpha in R^} (t X^{w alpha} - t^-1) / (X^{w alpha} - 1)`.
pub fn macdonald_coefficient(ctx: &HeckeContext, w: &WeylElem) -> RatFn {
    ctx.rs.hat_r.iter().fold(RatFn::one(), |acc, a| {
        let t = ctx.t_root(a);
        acc.mul(&ratio(t, t.inv(), Mono::ONE, Mono::ONE, &w.act(a)))
    })
}

/// `M = sum_w prod_{alpha in R^} (t X^{w alpha} - t^-1)/(X^{w alpha} - 1) tau(w omega_n)`.
pub fn make_macdonald(ctx: &HeckeContext) -> NormalOp {
    let om = ctx.rs.omega_check[ctx.n() - 1];
    let parts: Vec<NormalOp> = ctx
        .rs
        .weyl()
        .iter()
        .map(|w| NormalOp::term(macdonald_coefficient(ctx, w), AffElem::tau(w.act_half(&om))))
        .collect();
    NormalOp::sum(ctx.n(), parts.iter())
}

/// `Delta+ = prod_{alpha > 0} (X^alpha; q^2)_{l_alpha}`.
pub fn make_delta_plus(rs: &RootSystemCn, l: SpinPair) -> FactoredWeight {
    let mut d = FactoredWeight::one();
    for a in &rs.positive_roots {
        for i in 0..l.of_root(a) {
            d.push(&Poly::one_minus(Mono::q(2 * i as i32).mul(&xm(a))), 1);
        }
    }
    d
}

/// `H_l` as the gauge conjugate of `M(q, q^l)`.
pub fn make_h(rs: &RootSystemCn, l: SpinPair) -> NormalOp {
    let ctx = HeckeContext::new(rs.n, l.mode());
    make_macdonald(&ctx).gauge_conjugate(&make_delta_plus(rs, l))
}

/// One summand of an explicit `W`-sum, kept separate from its repeats.
#[derive(Clone, Debug)]
pub struct Summand {
    pub w: WeylElem,
    pub shift: HalfVec,
    pub coeff: RatFn,
}

pub fn collect(n: usize, summands: &[Summand]) -> NormalOp {
    let parts: Vec<NormalOp> = summands.iter().map(|s| NormalOp::term(s.coeff.clone(), AffElem::tau(s.shift))).collect();
    NormalOp::sum(n, parts.iter())
}

/// Explicit form of `H_l` from the sets `R^_w+-`:
/// `q^{-sum_{R^} l} prod_{alpha in R^} (q^{2l} X^{w alpha} - 1)/(X^{w alpha} - 1)
///  prod_{beta in R^_w+} (X^beta - 1)/(q^{2l} X^beta - 1)
///  prod_{gamma in R^_w-} (q^{2l-2} X^gamma - 1)/(q^{-2} X^gamma - 1)`.
pub fn h_explicit_summands(rs: &RootSystemCn, l: SpinPair) -> Vec<Summand> {
    let om = rs.omega_check[rs.n - 1];
    let scale: i32 = rs.hat_r.iter().map(|a| l.of_root(a) as i32).sum();
    let one = Mono::ONE;
    rs.weyl()
        .iter()
        .map(|w| {
            let (plus, minus) = rs.hat_r_sets(w);
            let mut c = RatFn::from_mono(Mono::q(-scale));
            for a in &rs.hat_r {
                let la = l.of_root(a) as i32;
                c = c.mul(&ratio(Mono::q(2 * la), one, one, one, &w.act(a)));
            }
            for b in &plus {
                let lb = l.of_root(b) as i32;
                c = c.mul(&ratio(one, one, Mono::q(2 * lb), one, b));
            }
            for g in &minus {
                let lg = l.of_root(g) as i32;
                c = c.mul(&ratio(Mono::q(2 * lg - 2), one, Mono::q(-2), one, g));
            }
            Summand { w: *w, shift: w.act_half(&om), coeff: c }
        })
        .collect()
}

pub fn make_h_explicit(rs: &RootSystemCn, l: SpinPair) -> NormalOp {
    collect(rs.n, &h_explicit_summands(rs, l))
}

/// Explicit form of the left factor of the spin-shift relation, the
/// conjugate of the braces operator at `t = q^l`. It differs from
/// `h_explicit_summands` only in the `R^_w-` factors, which become
/// `(q^{2l} X^gamma - 1)/(X^gamma - q^{2l}) (q^-2 X^gamma - q^{2l})/(q^-2 X^gamma - 1)`.
pub fn h_shifted_explicit_summands(rs: &RootSystemCn, l: SpinPair) -> Vec<Summand> {
    let om = rs.omega_check[rs.n - 1];
    let scale: i32 = rs.hat_r.iter().map(|a| l.of_root(a) as i32).sum();
    let one = Mono::ONE;
    rs.weyl()
        .iter()
        .map(|w| {
            let (plus, minus) = rs.hat_r_sets(w);
            let mut c = RatFn::from_mono(Mono::q(-scale));
            for a in &rs.hat_r {
                let la = l.of_root(a) as i32;
                c = c.mul(&ratio(Mono::q(2 * la), one, one, one, &w.act(a)));
            }
            for b in &plus {
                let lb = l.of_root(b) as i32;
                c = c.mul(&ratio(one, one, Mono::q(2 * lb), one, b));
            }
            for g in &minus {
                let lg = l.of_root(g) as i32;
                c = c.mul(&ratio(Mono::q(2 * lg), one, one, Mono::q(2 * lg), g));
                c = c.mul(&ratio(Mono::q(-2), Mono::q(2 * lg), Mono::q(-2), one, g));
            }
            Summand { w: *w, shift: w.act_half(&om), coeff: c }
        })
        .collect()
}

pub fn make_h_shifted_explicit(rs: &RootSystemCn, l: SpinPair) -> NormalOp {
    collect(rs.n, &h_shifted_explicit_summands(rs, l))
}

/// The explicit Hamiltonian exactly as printed: product over all of `R+`,
/// `X^{w(gamma)}` in the last factor, no overall scalar.
pub fn h_printed_summands(rs: &RootSystemCn, l: SpinPair) -> Vec<Summand> {
    printed_family(rs, l, 0)
}

/// The left factor of the spin-shift relation exactly as printed.
pub fn h_shifted_summands(rs: &RootSystemCn, l: SpinPair) -> Vec<Summand> {
    printed_family(rs, l, 1)
}

/// Both printed displays share one template; `k = 0` gives the
/// Hamiltonian, `k = 1` the shifted operator:
/// `prod_{alpha>0} (q^{2(l+k)} X^{w alpha} - 1)/(q^{2k} X^{w alpha} - 1)
///  prod_{beta in R^_w+} (q^{2k} X^beta - 1)/(q^{2(l+k)} X^beta - 1)
///  prod_{gamma in R^_w-} (q^{2(l+k-1)} X^{w gamma} - 1)/(q^{2(k-1)} X^{w gamma} - 1)`.
fn printed_family(rs: &RootSystemCn, l: SpinPair, k: i32) -> Vec<Summand> {
    let om = rs.omega_check[rs.n - 1];
    let one = Mono::ONE;
    rs.weyl()
        .iter()
        .map(|w| {
            let (plus, minus) = rs.hat_r_sets(w);
            let mut c = RatFn::one();
            for a in &rs.positive_roots {
                let la = l.of_root(a) as i32;
                c = c.mul(&ratio(Mono::q(2 * (la + k)), one, Mono::q(2 * k), one, &w.act(a)));
            }
            for b in &plus {
                let lb = l.of_root(b) as i32;
                c = c.mul(&ratio(Mono::q(2 * k), one, Mono::q(2 * (lb + k)), one, b));
            }
            for g in &minus {
                let lg = l.of_root(g) as i32;
                c = c.mul(&ratio(Mono::q(2 * (lg + k - 1)), one, Mono::q(2 * (k - 1)), one, &w.act(g)));
            }
            Summand { w: *w, shift: w.act_half(&om), coeff: c }
        })
        .collect()
}

pub fn make_h_printed(rs: &RootSystemCn, l: SpinPair) -> NormalOp {
    collect(rs.n, &h_printed_summands(rs, l))
}

pub fn make_h_shifted(rs: &RootSystemCn, l: SpinPair) -> NormalOp {
    collect(rs.n, &h_shifted_summands(rs, l))
}

/// `W`-invariance of a Laurent polynomial under all simple reflections.
pub fn is_invariant(rs: &RootSystemCn, f: &Poly) -> bool {
    (1..=rs.n).all(|i| AffElem::weyl(WeylElem::simple(rs.n, i)).act_poly(f) == *f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::VAR_TL;

    #[test]
    fn macdonald_rank_one() {
        let ctx = HeckeContext::new(1, ParamMode::Generic);
        let m = make_macdonald(&ctx);
        assert_eq!(m.len(), 2);
        let t = Mono::var(VAR_TL, 1);
        let up = ratio(t, t.inv(), Mono::ONE, Mono::ONE, &[2]);
        let down = ratio(t, t.inv(), Mono::ONE, Mono::ONE, &[-2]);
        let want = NormalOp::term(up, AffElem::tau(HalfVec::from_doubled(&[1])))
            .add(&NormalOp::term(down, AffElem::tau(HalfVec::from_doubled(&[-1]))));
        assert!(m.op_equal(&want));
    }

    #[test]
    fn macdonald_fixes_constants() {
        for n in 1..=2 {
            let ctx = HeckeContext::new(n, ParamMode::Generic);
            let v = make_macdonald(&ctx).apply(&Poly::one()).unwrap();
            assert!(v.is_param_only(), "{v}");
        }
    }

    #[test]
    fn delta_plus_examples() {
        let rs = RootSystemCn::build(2);
        assert_eq!(make_delta_plus(&rs, SpinPair::new(0, 0)).atom_count(), 0);
        let d = make_delta_plus(&rs, SpinPair::new(1, 1));
        assert_eq!(d.atom_count(), 4);
        let want = rs.positive_roots.iter().fold(Poly::one(), |acc, a| acc.mul(&Poly::one_minus(xm(a))));
        assert_eq!(d.to_ratfn().to_poly().unwrap(), want);
        let rs1 = RootSystemCn::build(1);
        let d1 = make_delta_plus(&rs1, SpinPair::new(1, 0)).to_ratfn().to_poly().unwrap();
        assert_eq!(d1, Poly::one_minus(xm(&[2])));
    }

    #[test]
    fn hamiltonian_at_zero_spin_is_free() {
        for n in 1..=2 {
            let rs = RootSystemCn::build(n);
            let free = NormalOp::sum(
                n,
                rs.weyl()
                    .iter()
                    .map(|w| NormalOp::tau(w.act_half(&rs.omega_check[n - 1])))
                    .collect::<Vec<_>>()
                    .iter(),
            );
            let l = SpinPair::new(0, 0);
            assert!(make_h(&rs, l).op_equal(&free));
            assert!(make_h_explicit(&rs, l).op_equal(&free));
            assert!(make_h_printed(&rs, l).op_equal(&free));
        }
    }

    #[test]
    fn gauge_and_explicit_agree() {
        for n in 1..=2 {
            let rs = RootSystemCn::build(n);
            for l in [SpinPair::new(1, 1), SpinPair::new(2, 1), SpinPair::new(1, 2)] {
                let a = make_h(&rs, l);
                let b = make_h_explicit(&rs, l);
                assert_eq!(a.compare(&b), Ok(()), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn rank_one_spin_one_hamiltonian() {
        let rs = RootSystemCn::build(1);
        let h = make_h(&rs, SpinPair::new(1, 1));
        let want = NormalOp::tau(HalfVec::from_doubled(&[1]))
            .scale_mono(&Mono::q(-1), 1)
            .add(&NormalOp::tau(HalfVec::from_doubled(&[-1])).scale_mono(&Mono::q(1), 1));
        assert!(h.op_equal(&want));
    }

    #[test]
    fn spin_parsing() {
        assert_eq!("1,2".parse::<SpinPair>().unwrap(), SpinPair::new(1, 2));
        assert_eq!("3".parse::<SpinPair>().unwrap(), SpinPair::new(3, 3));
        assert!("1,x".parse::<SpinPair>().is_err());
    }

    #[test]
    fn restricted_a_is_macdonald() {
        for n in 1..=2 {
            let ctx = HeckeContext::new(n, ParamMode::Generic);
            assert!(ctx.make_a_restricted().op_equal(&make_macdonald(&ctx)));
        }
    }
}
