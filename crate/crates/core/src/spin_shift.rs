//! The operator `D^ = (w0 B)|_{invariants}`, its gauge transform
//! `D = Delta+ D^ Delta+^-1` at `t = q^l`, and the identities around them.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{Int, Mono, Poly, RatFn};
use crate::hamiltonian::{
    macdonald_coefficient, make_delta_plus, make_h, make_h_shifted, make_h_shifted_explicit, make_macdonald, SpinPair,
};
use crate::hecke::{group_by_shift, HeckeContext};
use crate::operator::{AffElem, NormalOp, OpError};
use crate::report::Report;
use crate::root_system::{HalfVec, RootError, RootSystemCn, WeylElem};
use crate::verification::compare_on_basis;

fn mono_ratio(num: Poly, den: Poly) -> RatFn {
    RatFn::from_fraction(num, &den)
}

/// `prod_{i=1}^{2n-1} prod_{ht(alpha) >= i}
///  (t - q^{-2(i-1)} t^-1 X^alpha) / (1 - q^{-2(i-1)} X^alpha)`.
pub fn top_coefficient_formula(ctx: &HeckeContext) -> RatFn {
    let n = ctx.n() as i32;
    let mut e = RatFn::one();
    for i in 1..=2 * n - 1 {
        for a in &ctx.rs.positive_roots {
            if ctx.rs.height(a) >= i {
                let t = ctx.t_root(a);
                let m = Mono::q(-2 * (i - 1)).mul(&Mono::x(a));
                e = e.mul(&mono_ratio(Poly::mono(t).sub(&Poly::mono(t.inv().mul(&m))), Poly::one_minus(m)));
            }
        }
    }
    e
}

/// `prod_{alpha > 0} (-t_alpha)`, the scalar picked up by `Y^{-rho}` in `B`.
pub fn b_bottom_scalar(ctx: &HeckeContext) -> RatFn {
    ctx.rs.positive_roots.iter().fold(RatFn::one(), |acc, a| acc.mul_mono(&ctx.t_root(a), &Int::from(-1)))
}

/// `N = prod_{alpha > 0} (t - t^-1 X^alpha) / (1 - X^alpha)`.
pub fn n_factor(ctx: &HeckeContext) -> RatFn {
    ctx.rs.positive_roots.iter().fold(RatFn::one(), |acc, a| {
        let t = ctx.t_root(a);
        let x = Mono::x(a);
        acc.mul(&mono_ratio(Poly::mono(t).sub(&Poly::mono(t.inv().mul(&x))), Poly::one_minus(x)))
    })
}

/// Checks the `tau(-rho)` coefficients of `Y^{-rho}` and `B` and the
/// `tau(rho)` coefficient of `D^` against the closed product.
pub fn check_top_coefficient(ctx: &HeckeContext, b_restricted: &NormalOp, dhat: &NormalOp) -> Report {
    let n = ctx.n();
    let e = WeylElem::identity(n);
    let rho = ctx.rs.rho_check;
    let formula = top_coefficient_formula(ctx);
    let mut rep = Report::new("top-coefficient");
    let y = ctx.make_y_restricted(&rho.neg()).expect("rho in P^vee");
    let cy = y.coeff_of(&rho.neg(), &e);
    rep.push("Y^{-rho} at tau(-rho)", cy.equals(&formula), (!cy.equals(&formula)).then(|| format!("{cy} vs {formula}")));
    let scaled = formula.mul(&b_bottom_scalar(ctx));
    let cb = b_restricted.coeff_of(&rho.neg(), &e);
    rep.push("B at tau(-rho)", cb.equals(&scaled), (!cb.equals(&scaled)).then(|| format!("{cb} vs {scaled}")));
    let w0 = AffElem::weyl(ctx.rs.w0());
    let top = w0.act_ratfn(&scaled);
    let cd = dhat.coeff_of(&rho, &e);
    rep.push("D^ at tau(rho)", cd.equals(&top), (!cd.equals(&top)).then(|| format!("{cd} vs {top}")));
    rep
}

/// `D^ = (w0 ∘ B)` restricted to invariants.
pub fn make_dhat(ctx: &HeckeContext) -> Result<NormalOp, RootError> {
    let b = ctx.make_b_restricted()?;
    Ok(dhat_from_b(ctx, &b))
}

pub fn dhat_from_b(ctx: &HeckeContext, b_restricted: &NormalOp) -> NormalOp {
    NormalOp::weyl(ctx.rs.w0()).compose(b_restricted).restrict_collapse()
}

/// The first factor of the left side of the braces identity:
/// `sum_w prod_{R^} (t X^{w a} - t^-1)/(X^{w a} - 1)
///  prod_{beta in R^_w-} (t X^b - t^-1)/(t^-1 X^b - t) (q^-2 t^-1 X^b - t)/(q^-2 t X^b - t^-1) tau(w omega_n)`.
pub fn c_operator(ctx: &HeckeContext) -> NormalOp {
    let om = ctx.rs.omega_check[ctx.n() - 1];
    let parts: Vec<NormalOp> = ctx
        .rs
        .weyl()
        .iter()
        .map(|w| {
            let mut c = macdonald_coefficient(ctx, w);
            let (_, minus) = ctx.rs.hat_r_sets(w);
            for b in &minus {
                let t = ctx.t_root(b);
                let x = Mono::x(b);
                let q2 = Mono::q(-2);
                let p = |a: Mono, m: Mono| Poly::mono(a.mul(&x)).sub(&Poly::mono(m));
                c = c.mul(&mono_ratio(p(t, t.inv()), p(t.inv(), t)));
                c = c.mul(&mono_ratio(p(q2.mul(&t.inv()), t), p(q2.mul(&t), t.inv())));
            }
            NormalOp::term(c, AffElem::tau(w.act_half(&om)))
        })
        .collect();
    NormalOp::sum(ctx.n(), parts.iter())
}

/// `C ∘ D^ = D^ ∘ M` as restricted operators, and on the given basis.
pub fn verify_prop2(ctx: &HeckeContext, dhat: &NormalOp, basis: &[Poly]) -> Report {
    let mut rep = Report::new("prop2");
    let c = c_operator(ctx);
    let m = make_macdonald(ctx);
    let lhs = c.compose(dhat);
    let rhs = dhat.compose(&m);
    match lhs.compare(&rhs) {
        Ok(()) => rep.push("C D^ = D^ M (operator)", true, None),
        Err(w) => rep.push("C D^ = D^ M (operator)", false, Some(w)),
    }
    compare_on_basis(
        &mut rep,
        "C D^ = D^ M",
        basis,
        |f| c.apply_ratfn(&dhat.apply_ratfn(&RatFn::from_poly(f.clone()))),
        |f| dhat.apply_ratfn(&m.apply_ratfn(&RatFn::from_poly(f.clone()))),
    );
    rep
}

/// `(T_i + t^-1) B = B' (T_i - t)`, where `B'` has the factor of `alpha_i`
/// flipped, compared on the given (not necessarily invariant) inputs.
pub fn check_proof_identity(ctx: &HeckeContext, i: usize, inputs: &[Poly]) -> Result<Report, OpError> {
    let root_err = |e: RootError| OpError::Parse(e.to_string());
    let alpha = &ctx.rs.simple_roots[i - 1];
    let k = ctx.rs.positive_roots.iter().position(|a| a == alpha).expect("simple root is positive");
    let b = ctx.b_terms().map_err(root_err)?;
    let b_flip = group_by_shift(ctx.b_expansion_flipped(Some(k)).map_err(root_err)?);
    let t = ctx.t_param(i);
    let ti = ctx.make_t(i);
    let plus = ti.add(&NormalOp::mult(ctx.n(), RatFn::from_mono(t.inv())));
    let minus = ti.sub(&NormalOp::mult(ctx.n(), RatFn::from_mono(t)));
    let mut rep = Report::new(format!("proof-identity i={i}"));
    let outcomes: Result<Vec<Option<String>>, OpError> = inputs
        .par_iter()
        .map(|f| {
            let lhs = plus.apply(&ctx.apply_y_combination(&b, f)?)?;
            let rhs = ctx.apply_y_combination(&b_flip, &minus.apply(f)?)?;
            Ok((lhs != rhs).then(|| format!("input {f}: {lhs} vs {rhs}")))
        })
        .collect();
    let first = outcomes?.into_iter().flatten().next();
    rep.push(format!("(T{i} + t^-1) B = B' (T{i} - t) on {} inputs", inputs.len()), first.is_none(), first);
    Ok(rep)
}

/// `s_i (N^-1 B f) = -(N^-1 B f)` for invariant `f`.
pub fn check_antisymmetry(ctx: &HeckeContext, i: usize, basis: &[Poly]) -> Result<Report, OpError> {
    let b = ctx.b_terms().map_err(|e| OpError::Parse(e.to_string()))?;
    let n_inv = n_factor(ctx).inv().expect("N is nonzero");
    let s = AffElem::weyl(WeylElem::simple(ctx.n(), i));
    let mut rep = Report::new(format!("antisymmetry i={i}"));
    let outcomes: Result<Vec<Option<String>>, OpError> = basis
        .par_iter()
        .map(|f| {
            let g = n_inv.mul_poly(&ctx.apply_y_combination(&b, f)?);
            let sg = s.act_ratfn(&g);
            Ok((!sg.equals(&g.neg())).then(|| format!("input {f}: s_i g = {sg}, g = {g}")))
        })
        .collect();
    let first = outcomes?.into_iter().flatten().next();
    rep.push(format!("s{i} N^-1 B = -N^-1 B on {} invariants", basis.len()), first.is_none(), first);
    Ok(rep)
}

/// `D`, with its terms classified by translation length.
#[derive(Clone, Debug)]
pub struct SpinShiftBundle {
    pub n: usize,
    pub l: SpinPair,
    pub dhat: NormalOp,
    pub d: NormalOp,
    /// `(w, w(rho), coefficient of tau(w(rho)))` for every `w`.
    pub leading: Vec<(WeylElem, HalfVec, RatFn)>,
    /// `(lambda, length, coefficient)` for shorter translations.
    pub lower: Vec<(HalfVec, u32, RatFn)>,
    /// Shifts of maximal length outside the orbit of `rho`.
    pub anomalies: Vec<HalfVec>,
}

/// Specializes a generic `D^` to `t = q^l` and conjugates by `Delta+`.
pub fn make_d(rs: &RootSystemCn, dhat_generic: &NormalOp, l: SpinPair) -> Result<SpinShiftBundle, OpError> {
    let dhat = dhat_generic.specialize_t(l.l1, l.l2)?;
    let d = dhat.gauge_conjugate(&make_delta_plus(rs, l));
    let rho = rs.rho_check;
    let top = rs.tau_length(&rho).expect("rho in P^vee");
    let e = WeylElem::identity(rs.n);
    let mut by_shift: BTreeMap<HalfVec, RatFn> = BTreeMap::new();
    for (g, c) in d.terms() {
        assert!(g.weyl.is_identity(), "D^ is a pure difference operator");
        by_shift.insert(g.shift, c.clone());
    }
    let leading: Vec<(WeylElem, HalfVec, RatFn)> = rs
        .weyl()
        .into_iter()
        .map(|w| {
            let s = w.act_half(&rho);
            (w, s, d.coeff_of(&s, &e))
        })
        .collect();
    let orbit: std::collections::BTreeSet<HalfVec> = leading.iter().map(|(_, s, _)| *s).collect();
    let mut lower = Vec::new();
    let mut anomalies = Vec::new();
    for (s, c) in by_shift {
        let len = rs.tau_length(&s).map_err(|e| OpError::Parse(e.to_string()))?;
        if orbit.contains(&s) {
            continue;
        }
        if len < top {
            lower.push((s, len, c));
        } else {
            anomalies.push(s);
        }
    }
    lower.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(SpinShiftBundle { n: rs.n, l, dhat, d, leading, lower, anomalies })
}

/// The leading coefficient of `D` at `tau(w(rho))` as printed:
/// `sgn(w) prod_{a in R^_w-} (1 - q^{2l} X^a)/(1 - X^a) (1 - q^{2(l-1)} X^a)/(1 - q^-2 X^a)
///  prod_{s=1}^{2n-1} prod_{a in R^_w-, s+1 <= ht(-w^-1 a)}
///  (1 - q^{2(l+s)} X^-a)/(1 - q^{2s} X^-a) (1 - q^{2(l-s-1)} X^a)/(1 - q^{-2(s+1)} X^a)`.
pub fn theorem1_printed(rs: &RootSystemCn, l: SpinPair, w: &WeylElem) -> RatFn {
    let (_, minus) = rs.hat_r_sets(w);
    let winv = w.inverse();
    let one_minus = |k: i32, mu: &[i32]| Poly::one_minus(Mono::q(k).mul(&Mono::x(mu)));
    let mut c = RatFn::from_int(w.sgn() as i64);
    for a in &minus {
        let la = l.of_root(a) as i32;
        c = c.mul(&mono_ratio(one_minus(2 * la, a), one_minus(0, a)));
        c = c.mul(&mono_ratio(one_minus(2 * (la - 1), a), one_minus(-2, a)));
    }
    let neg = |v: &[i32]| -> Vec<i32> { v.iter().map(|x| -x).collect() };
    for s in 1..=(2 * rs.n as i32 - 1) {
        for a in &minus {
            let h = rs.height(&neg(&winv.act(a)));
            if s + 1 > h {
                continue;
            }
            let la = l.of_root(a) as i32;
            let na = neg(a);
            c = c.mul(&mono_ratio(one_minus(2 * (la + s), &na), one_minus(2 * s, &na)));
            c = c.mul(&mono_ratio(one_minus(2 * (la - s - 1), a), one_minus(-2 * (s + 1), a)));
        }
    }
    c
}

#[derive(Clone, Debug)]
pub struct Theorem1Entry {
    pub w: WeylElem,
    pub shift: HalfVec,
    pub computed: RatFn,
    pub printed: RatFn,
    pub matches: bool,
    /// `computed / printed` when both are nonzero.
    pub ratio: Option<RatFn>,
}

pub fn extract_theorem1(rs: &RootSystemCn, bundle: &SpinShiftBundle) -> Vec<Theorem1Entry> {
    bundle
        .leading
        .par_iter()
        .map(|(w, s, c)| {
            let printed = theorem1_printed(rs, bundle.l, w);
            let matches = c.equals(&printed);
            let ratio = printed.inv().filter(|_| !c.is_zero()).map(|pi| c.mul(&pi));
            Theorem1Entry { w: *w, shift: *s, computed: c.clone(), printed, matches, ratio }
        })
        .collect()
}

/// The left factor of the spin-shift relation obtained by conjugating the
/// braces operator at `t = q^l` with `Delta+`.
pub fn shifted_from_braces(rs: &RootSystemCn, l: SpinPair) -> NormalOp {
    let ctx = HeckeContext::new(rs.n, l.mode());
    c_operator(&ctx).gauge_conjugate(&make_delta_plus(rs, l))
}

/// `H_shifted ∘ D = D ∘ H` with the given left factor, as operators and on
/// the basis.
pub fn verify_spin_shift_with(rs: &RootSystemCn, bundle: &SpinShiftBundle, left: &NormalOp, basis: &[Poly]) -> Report {
    let h = make_h(rs, bundle.l);
    let d = &bundle.d;
    let mut rep = Report::new(format!("spinshift l={}", bundle.l));
    match left.compose(d).compare(&d.compose(&h)) {
        Ok(()) => rep.push("Hs D = D H (operator)", true, None),
        Err(w) => rep.push("Hs D = D H (operator)", false, Some(w)),
    }
    compare_on_basis(
        &mut rep,
        "Hs D = D H",
        basis,
        |f| left.apply_ratfn(&d.apply_ratfn(&RatFn::from_poly(f.clone()))),
        |f| d.apply_ratfn(&h.apply_ratfn(&RatFn::from_poly(f.clone()))),
    );
    rep
}

/// The relation with the explicit left factor, which must also agree with
/// the braces-derived one.
pub fn verify_spin_shift(rs: &RootSystemCn, bundle: &SpinShiftBundle, basis: &[Poly]) -> Report {
    let left = make_h_shifted_explicit(rs, bundle.l);
    let mut rep = verify_spin_shift_with(rs, bundle, &left, basis);
    match left.compare(&shifted_from_braces(rs, bundle.l)) {
        Ok(()) => rep.push("explicit Hs = Delta+ C Delta+^-1", true, None),
        Err(w) => rep.push("explicit Hs = Delta+ C Delta+^-1", false, Some(w)),
    }
    rep
}

/// The relation with the left factor exactly as displayed. Diagnostic only.
pub fn spin_shift_printed(rs: &RootSystemCn, bundle: &SpinShiftBundle, basis: &[Poly]) -> Report {
    let mut rep = verify_spin_shift_with(rs, bundle, &make_h_shifted(rs, bundle.l), basis);
    rep.name = format!("spinshift-printed l={}", bundle.l);
    rep
}

/// Compares the shifted operator with `H_{l+1}`, directly and after
/// conjugating `H_{l+1}` by `Delta+_l / Delta+_{l+1}`. Diagnostic only.
pub fn shifted_vs_next_spin(rs: &RootSystemCn, l: SpinPair) -> Report {
    let left = make_h_shifted_explicit(rs, l);
    let next = make_h(rs, l.shifted());
    let weight = make_delta_plus(rs, l).div(&make_delta_plus(rs, l.shifted()));
    let regauged = next.gauge_conjugate(&weight);
    let mut rep = Report::new(format!("shifted-vs-next l={l}"));
    for (label, other) in [("Hs = H_{l+1}", &next), ("Hs = gauged H_{l+1}", &regauged)] {
        let r = left.compare(other);
        rep.push(label, r.is_ok(), r.err());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::ParamMode;
    use crate::verification::invariant_basis;

    #[test]
    fn rank_one_top_coefficient() {
        let ctx = HeckeContext::new(1, ParamMode::Generic);
        let b = ctx.make_b_restricted().unwrap();
        let dhat = dhat_from_b(&ctx, &b);
        assert!(check_top_coefficient(&ctx, &b, &dhat).passed());
        assert_eq!(dhat.len(), 2);
        let t = ctx.t_long();
        let x = Mono::x(&[2]);
        let want = mono_ratio(Poly::mono(t).sub(&Poly::mono(t.inv().mul(&x))), Poly::one_minus(x));
        assert!(top_coefficient_formula(&ctx).equals(&want));
    }

    #[test]
    fn rank_one_prop2_and_proof_steps() {
        let ctx = HeckeContext::new(1, ParamMode::Generic);
        let dhat = make_dhat(&ctx).unwrap();
        let basis = invariant_basis(1, 2).elements;
        let rep = verify_prop2(&ctx, &dhat, &basis);
        assert!(rep.passed(), "{rep}");
        let inputs = crate::verification::monomial_box(1, 2);
        assert!(check_proof_identity(&ctx, 1, &inputs).unwrap().passed());
        assert!(check_antisymmetry(&ctx, 1, &basis).unwrap().passed());
    }

    #[test]
    fn rank_one_d_is_two_terms() {
        let rs = RootSystemCn::build(1);
        let ctx = HeckeContext::new(1, ParamMode::Generic);
        let dhat = make_dhat(&ctx).unwrap();
        let bundle = make_d(&rs, &dhat, SpinPair::new(1, 1)).unwrap();
        assert_eq!(bundle.d.len(), 2);
        assert!(bundle.d.is_pure_difference());
        assert!(bundle.lower.is_empty() && bundle.anomalies.is_empty());
        assert_eq!(bundle.leading.len(), 2);
    }
}
