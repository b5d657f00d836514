//! Demazure-Lusztig operators `T_0..T_n`, the diagram automorphism `pi`,
//! Dunkl-Cherednik operators `Y^lambda` and the operators `A`, `B`.
//!
//! The affine root `a_0 = delta - theta` is realized with `X^delta = q^-2`,
//! so `X^{-a_0} = q^2 X^theta`. This is the normalization under which
//! `s_0 = tau(theta^vee) s_theta` maps `X^{a_0}` to `X^{-a_0}`.
//!
//! `Y^{omega_i}` for `i < n` is the word `(T_0 T_1 .. T_n T_{n-1} .. T_i)^i`.
//! `omega_n` is not in the coroot lattice; `Y^{omega_n} = pi T_u` where
//! `pi = tau(omega_n) u` and `u: e_i -> -e_{n+1-i}`. The word
//! `(T_0 .. T_n)^n` equals `Y^{2 omega_n}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::arith::{Int, Mono, Poly, RatFn, VAR_TL, VAR_TS};
use crate::operator::{AffElem, NormalOp, OpError, ParamMode};
use crate::report::Report;
use crate::root_system::{is_positive, HalfVec, IVec, RootError, RootSystemCn, WeylElem};

/// One factor of a Hecke word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    T(usize),
    TInv(usize),
    Pi,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::T(i) => Letter::TInv(i),
            Letter::TInv(i) => Letter::T(i),
            Letter::Pi => Letter::Pi,
        }
    }
}

/// Inverse of a word: reversed, letterwise inverted.
pub fn invert_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub struct HeckeContext {
    pub rs: RootSystemCn,
    pub mode: ParamMode,
    t: Vec<NormalOp>,
    t_inv: Vec<NormalOp>,
    pi: NormalOp,
    y_full: Mutex<HashMap<HalfVec, Arc<NormalOp>>>,
    y_restricted: Mutex<HashMap<HalfVec, Arc<NormalOp>>>,
}

impl HeckeContext {
    pub fn new(n: usize, mode: ParamMode) -> Self {
        let rs = RootSystemCn::build(n);
        let mut ctx = HeckeContext {
            rs,
            mode,
            t: Vec::new(),
            t_inv: Vec::new(),
            pi: NormalOp::zero(n),
            y_full: Mutex::new(HashMap::new()),
            y_restricted: Mutex::new(HashMap::new()),
        };
        ctx.t = (0..=n).map(|i| ctx.build_t(i)).collect();
        ctx.t_inv = (0..=n).map(|i| ctx.build_t_inverse(i)).collect();
        ctx.pi = NormalOp::term(RatFn::one(), ctx.pi_elem());
        ctx
    }

    pub fn n(&self) -> usize {
        self.rs.n
    }

    pub fn t_long(&self) -> Mono {
        match self.mode {
            ParamMode::Generic => Mono::var(VAR_TL, 1),
            ParamMode::Specialized { l1, .. } => Mono::q(l1 as i32),
        }
    }

    pub fn t_short(&self) -> Mono {
        match self.mode {
            ParamMode::Generic => Mono::var(VAR_TS, 1),
            ParamMode::Specialized { l2, .. } => Mono::q(l2 as i32),
        }
    }

    /// `t_alpha` for a finite root.
    pub fn t_root(&self, alpha: &[i32]) -> Mono {
        if RootSystemCn::is_long(alpha) {
            self.t_long()
        } else {
            self.t_short()
        }
    }

    /// `t_{a_i}`; `a_0` and `a_n` are long.
    pub fn t_param(&self, i: usize) -> Mono {
        if i == 0 || i == self.n() {
            self.t_long()
        } else {
            self.t_short()
        }
    }

    /// `t - t^{-1}` as a rational function.
    pub fn t_diff(&self, t: Mono) -> RatFn {
        RatFn::from_poly(Poly::mono(t).sub(&Poly::mono(t.inv())))
    }

    /// The affine reflection `s_i`.
    pub fn s_aff(&self, i: usize) -> AffElem {
        let n = self.n();
        if i == 0 {
            let mut imgs: Vec<i32> = (1..=n as i32).collect();
            imgs[0] = -1;
            let mut e1 = vec![0; n];
            e1[0] = 1;
            AffElem { shift: HalfVec::from_int(&e1), weyl: WeylElem::from_images(&imgs).unwrap() }
        } else {
            AffElem::weyl(WeylElem::simple(n, i))
        }
    }

    /// `X^{-a_i}`.
    pub fn x_neg_simple(&self, i: usize) -> Mono {
        if i == 0 {
            Mono::q(2).mul(&Mono::x(&self.rs.theta))
        } else {
            let a: IVec = self.rs.simple_roots[i - 1].iter().map(|x| -x).collect();
            Mono::x(&a)
        }
    }

    fn build_t(&self, i: usize) -> NormalOp {
        let t = self.t_param(i);
        let den = Poly::mono(self.x_neg_simple(i)).sub(&Poly::one());
        let c = RatFn::from_fraction(Poly::mono(t).sub(&Poly::mono(t.inv())), &den);
        let refl = NormalOp::term(RatFn::from_mono(t).add(&c), self.s_aff(i));
        refl.add(&NormalOp::mult(self.n(), c.neg()))
    }

    fn build_t_inverse(&self, i: usize) -> NormalOp {
        let t = self.t_param(i);
        self.t[i].sub(&NormalOp::mult(self.n(), self.t_diff(t)))
    }

    pub fn make_t(&self, i: usize) -> &NormalOp {
        &self.t[i]
    }

    pub fn make_t_inverse(&self, i: usize) -> &NormalOp {
        &self.t_inv[i]
    }

    /// `u: e_i -> -e_{n+1-i}`.
    pub fn u_elem(&self) -> WeylElem {
        let n = self.n() as i32;
        let imgs: Vec<i32> = (1..=n).map(|i| -(n + 1 - i)).collect();
        WeylElem::from_images(&imgs).unwrap()
    }

    /// `pi = tau(omega_n) u`.
    pub fn pi_elem(&self) -> AffElem {
        AffElem { shift: self.rs.omega_check[self.n() - 1], weyl: self.u_elem() }
    }

    pub fn make_pi(&self) -> &NormalOp {
        &self.pi
    }

    pub fn letter_op(&self, l: Letter) -> &NormalOp {
        match l {
            Letter::T(i) => &self.t[i],
            Letter::TInv(i) => &self.t_inv[i],
            Letter::Pi => &self.pi,
        }
    }

    /// Reduced word `[j_1, .., j_k]` with `w = s_{j_1} .. s_{j_k}`.
    pub fn reduced_word(&self, w: &WeylElem) -> Vec<usize> {
        let mut w = *w;
        let mut word = Vec::new();
        while !w.is_identity() {
            let j = (1..=self.n())
                .find(|&j| !is_positive(&w.act(&self.rs.simple_roots[j - 1])))
                .expect("non-identity element has a descent");
            word.push(j);
            w = w.compose(&WeylElem::simple(self.n(), j));
        }
        word.reverse();
        word
    }

    /// The literal word `(T_0 T_1 .. T_n T_{n-1} .. T_i)^i`.
    pub fn paper_y_word(&self, i: usize) -> Vec<Letter> {
        let n = self.n();
        let mut base: Vec<Letter> = (0..=n).map(Letter::T).collect();
        base.extend((i..n).rev().map(Letter::T));
        base.iter().cycle().take(base.len() * i).copied().collect()
    }

    /// Word for `Y^{omega_i}`, `1 <= i <= n`.
    pub fn y_fund_word(&self, i: usize) -> Vec<Letter> {
        if i < self.n() {
            self.paper_y_word(i)
        } else {
            let mut w = vec![Letter::Pi];
            w.extend(self.reduced_word(&self.u_elem()).into_iter().map(Letter::T));
            w
        }
    }

    /// Word for `Y^lambda`: product of fundamental words with the coweight
    /// coordinates as exponents, negative powers through inverse letters.
    pub fn y_word(&self, lambda: &HalfVec) -> Result<Vec<Letter>, RootError> {
        let coords = self.rs.coweight_coordinates(lambda)?;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, &c) in coords.iter().enumerate() {
            let w = self.y_fund_word(k + 1);
            if c > 0 {
                for _ in 0..c {
                    pos.extend_from_slice(&w);
                }
            } else {
                let wi = invert_word(&w);
                for _ in 0..-c {
                    neg.extend_from_slice(&wi);
                }
            }
        }
        pos.extend(neg);
        Ok(pos)
    }

    /// Full normal form of a word.
    pub fn word_op(&self, word: &[Letter]) -> NormalOp {
        let mut acc = NormalOp::identity(self.n());
        for l in word.iter().rev() {
            acc = self.letter_op(*l).compose(&acc);
        }
        acc
    }

    /// Restriction of `word ∘ right` to invariants, for a pure difference
    /// operator `right`, collapsing after every letter.
    pub fn word_restricted(&self, word: &[Letter], right: &NormalOp) -> NormalOp {
        let mut acc = right.clone();
        for l in word.iter().rev() {
            acc = self.letter_op(*l).compose(&acc).restrict_collapse();
        }
        acc
    }

    /// Applies a word to a polynomial letter by letter.
    pub fn apply_word(&self, word: &[Letter], f: &Poly) -> Result<Poly, OpError> {
        let mut g = f.clone();
        for l in word.iter().rev() {
            g = self.letter_op(*l).apply(&g)?;
        }
        Ok(g)
    }

    /// `sum_k c_k Y^{lambda_k} f` without building normal forms.
    pub fn apply_y_combination(&self, terms: &[(Poly, HalfVec)], f: &Poly) -> Result<Poly, OpError> {
        let parts: Result<Vec<Poly>, OpError> = terms
            .par_iter()
            .map(|(c, l)| {
                let w = self.y_word(l).map_err(|e| OpError::Parse(e.to_string()))?;
                Ok(self.apply_word(&w, f)?.mul(c))
            })
            .collect();
        Ok(parts?.iter().fold(Poly::zero(), |a, b| a.add(b)))
    }

    pub fn make_y_fund(&self, i: usize) -> Arc<NormalOp> {
        self.make_y(&self.rs.omega_check[i - 1]).expect("fundamental coweight")
    }

    pub fn make_y(&self, lambda: &HalfVec) -> Result<Arc<NormalOp>, RootError> {
        if let Some(op) = self.y_full.lock().unwrap().get(lambda) {
            return Ok(op.clone());
        }
        let op = Arc::new(self.word_op(&self.y_word(lambda)?));
        self.y_full.lock().unwrap().insert(*lambda, op.clone());
        Ok(op)
    }

    pub fn make_y_restricted(&self, lambda: &HalfVec) -> Result<Arc<NormalOp>, RootError> {
        if let Some(op) = self.y_restricted.lock().unwrap().get(lambda) {
            return Ok(op.clone());
        }
        let word = self.y_word(lambda)?;
        let op = Arc::new(self.word_restricted(&word, &NormalOp::identity(self.n())));
        self.y_restricted.lock().unwrap().insert(*lambda, op.clone());
        Ok(op)
    }

    /// `w(omega_n)` for every `w` in `W`, with repetition.
    pub fn a_shifts(&self) -> Vec<HalfVec> {
        let om = self.rs.omega_check[self.n() - 1];
        self.rs.weyl().iter().map(|w| w.act_half(&om)).collect()
    }

    /// `A` as `(multiplicity, shift)` pairs.
    pub fn a_terms(&self) -> Vec<(i64, HalfVec)> {
        let mut m: BTreeMap<HalfVec, i64> = BTreeMap::new();
        for s in self.a_shifts() {
            *m.entry(s).or_default() += 1;
        }
        m.into_iter().map(|(s, k)| (k, s)).collect()
    }

    /// The `2^{|R+|}` expansion terms of
    /// `prod_{alpha > 0} (t^{-1} Y^{alpha^vee/2} - t Y^{-alpha^vee/2})`.
    pub fn b_expansion(&self) -> Result<Vec<(Poly, HalfVec)>, RootError> {
        self.b_expansion_flipped(None)
    }

    /// Expansion with the factor of the positive root at index `flip`
    /// replaced by `t^{-1} Y^{-alpha^vee/2} - t Y^{alpha^vee/2}`.
    pub fn b_expansion_flipped(&self, flip: Option<usize>) -> Result<Vec<(Poly, HalfVec)>, RootError> {
        let roots = &self.rs.positive_roots;
        let n = self.n();
        let count = 1usize << roots.len();
        (0..count)
            .map(|mask| {
                let mut coef = Poly::one();
                let mut doubled = vec![0i32; n];
                for (k, a) in roots.iter().enumerate() {
                    let half_coroot = RootSystemCn::coroot(a);
                    let t = self.t_root(a);
                    let plus = mask & (1 << k) == 0;
                    let mut sign = if plus { 1 } else { -1 };
                    if flip == Some(k) {
                        sign = -sign;
                    }
                    // doubled(alpha^vee / 2) = alpha^vee
                    for (d, c) in doubled.iter_mut().zip(half_coroot.doubled()) {
                        *d += sign * c / 2;
                    }
                    coef = if plus {
                        coef.mul_mono(&t.inv())
                    } else {
                        coef.mul_term(&t, &Int::from(-1))
                    };
                }
                let lambda = HalfVec::from_doubled(&doubled);
                if !lambda.in_coweight_lattice() {
                    return Err(RootError::NotInCoweightLattice(lambda));
                }
                Ok((coef, lambda))
            })
            .collect()
    }

    /// `B` grouped by shift.
    pub fn b_terms(&self) -> Result<Vec<(Poly, HalfVec)>, RootError> {
        Ok(group_by_shift(self.b_expansion()?))
    }

    /// Restricted normal form of `sum_k c_k Y^{lambda_k}`.
    pub fn y_combination_restricted(&self, terms: &[(Poly, HalfVec)]) -> Result<NormalOp, RootError> {
        let w: Vec<(RatFn, HalfVec)> = terms.iter().map(|(c, l)| (RatFn::from_poly(c.clone()), *l)).collect();
        self.combine(&w, |l| self.make_y_restricted(l))
    }

    fn combine<F>(&self, terms: &[(RatFn, HalfVec)], build: F) -> Result<NormalOp, RootError>
    where
        F: Fn(&HalfVec) -> Result<Arc<NormalOp>, RootError> + Sync,
    {
        let parts: Result<Vec<NormalOp>, RootError> =
            terms.par_iter().map(|(c, l)| Ok(build(l)?.scale_ratfn(c))).collect();
        Ok(NormalOp::sum(self.n(), parts?.iter()))
    }

    fn a_weighted(&self) -> Vec<(RatFn, HalfVec)> {
        self.a_terms().into_iter().map(|(k, l)| (RatFn::from_int(k), l)).collect()
    }

    fn b_weighted(&self) -> Result<Vec<(RatFn, HalfVec)>, RootError> {
        Ok(self.b_terms()?.into_iter().map(|(c, l)| (RatFn::from_poly(c), l)).collect())
    }

    pub fn make_a(&self) -> NormalOp {
        self.combine(&self.a_weighted(), |l| self.make_y(l)).expect("orbit of omega_n")
    }

    pub fn make_b(&self) -> Result<NormalOp, RootError> {
        self.combine(&self.b_weighted()?, |l| self.make_y(l))
    }

    pub fn make_a_restricted(&self) -> NormalOp {
        self.combine(&self.a_weighted(), |l| self.make_y_restricted(l)).expect("orbit of omega_n")
    }

    pub fn make_b_restricted(&self) -> Result<NormalOp, RootError> {
        self.combine(&self.b_weighted()?, |l| self.make_y_restricted(l))
    }

    /// Quadratic, commutation and braid relations among `T_0..T_n`.
    pub fn check_hecke(&self) -> Report {
        let n = self.n();
        let mut rep = Report::new("hecke");
        let id = NormalOp::identity(n);
        let word = |w: &[usize]| self.word_op(&w.iter().map(|&i| Letter::T(i)).collect::<Vec<_>>());
        for i in 0..=n {
            let t = self.t_param(i);
            let a = self.t[i].sub(&NormalOp::mult(n, RatFn::from_mono(t)));
            let b = self.t[i].add(&NormalOp::mult(n, RatFn::from_mono(t.inv())));
            let lhs = a.compose(&b);
            push_cmp(&mut rep, format!("quadratic T{i}"), &lhs, &NormalOp::zero(n));
            push_cmp(&mut rep, format!("T{i} T{i}^-1 = 1"), &self.t[i].compose(&self.t_inv[i]), &id);
            push_cmp(&mut rep, format!("T{i}^-1 T{i} = 1"), &self.t_inv[i].compose(&self.t[i]), &id);
        }
        for i in 0..=n {
            for j in i + 2..=n {
                push_cmp(&mut rep, format!("T{i} T{j} = T{j} T{i}"), &word(&[i, j]), &word(&[j, i]));
            }
        }
        for i in 1..n.saturating_sub(1) {
            let j = i + 1;
            push_cmp(&mut rep, format!("braid T{i} T{j}"), &word(&[i, j, i]), &word(&[j, i, j]));
        }
        if n >= 2 {
            for i in [0, n - 1] {
                let j = i + 1;
                push_cmp(&mut rep, format!("braid4 T{i} T{j}"), &word(&[i, j, i, j]), &word(&[j, i, j, i]));
            }
        }
        rep
    }

    /// `pi^2 = 1` and `pi T_i pi^-1 = T_{n-i}`.
    pub fn check_pi(&self) -> Report {
        let n = self.n();
        let mut rep = Report::new("pi");
        push_cmp(&mut rep, "pi^2 = 1".into(), &self.pi.compose(&self.pi), &NormalOp::identity(n));
        for i in 0..=n {
            let lhs = self.pi.compose(&self.t[i]).compose(&self.pi);
            push_cmp(&mut rep, format!("pi T{i} pi = T{}", n - i), &lhs, &self.t[n - i]);
        }
        rep
    }

    /// Pairwise commutativity of the fundamental `Y`.
    pub fn check_y_commute(&self) -> Report {
        let n = self.n();
        let mut rep = Report::new("ycommute");
        for i in 1..=n {
            for j in i + 1..=n {
                let (a, b) = (self.make_y_fund(i), self.make_y_fund(j));
                push_cmp(&mut rep, format!("Y{i} Y{j} = Y{j} Y{i}"), &a.compose(&b), &b.compose(&a));
            }
        }
        rep
    }

    /// `T_i Y^w - Y^{s_i w} T_i = (t - t^-1) Y^w` if `(w, a_i) = 1`, otherwise
    /// `T_i Y^w = Y^w T_i`.
    pub fn check_ty(&self) -> Report {
        let n = self.n();
        let mut rep = Report::new("ty");
        for i in 1..=n {
            let alpha = &self.rs.simple_roots[i - 1];
            let s = WeylElem::simple(n, i);
            for j in 1..=n {
                let om = self.rs.omega_check[j - 1];
                let y = self.make_y_fund(j);
                let ti = &self.t[i];
                if om.pair_int(alpha) == Some(1) {
                    let ys = self.make_y(&s.act_half(&om)).expect("s_i omega in P^vee");
                    let lhs = ti.compose(&y).sub(&ys.compose(ti));
                    let rhs = y.scale_ratfn(&self.t_diff(self.t_param(i)));
                    push_cmp(&mut rep, format!("T{i} Y^w{j} - Y^(s{i} w{j}) T{i}"), &lhs, &rhs);
                } else {
                    push_cmp(&mut rep, format!("T{i} Y^w{j} = Y^w{j} T{i}"), &ti.compose(&y), &y.compose(ti));
                }
            }
        }
        rep
    }
}

/// Sums coefficients of equal shifts, dropping zeros.
pub fn group_by_shift(terms: Vec<(Poly, HalfVec)>) -> Vec<(Poly, HalfVec)> {
    let mut m: BTreeMap<HalfVec, Poly> = BTreeMap::new();
    for (c, l) in terms {
        let e = m.entry(l).or_insert_with(Poly::zero);
        *e = e.add(&c);
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).map(|(l, c)| (c, l)).collect()
}

fn push_cmp(rep: &mut Report, label: String, a: &NormalOp, b: &NormalOp) {
    match a.compare(b) {
        Ok(()) => rep.push(label, true, None),
        Err(w) => rep.push(label, false, Some(w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(mu: &[i32]) -> Poly {
        Poly::mono(Mono::x(mu))
    }

    fn generic(n: usize) -> HeckeContext {
        HeckeContext::new(n, ParamMode::Generic)
    }

    #[test]
    fn t_on_constants_and_fixed_monomials() {
        let ctx = generic(2);
        for i in 0..=2 {
            let t = ctx.t_param(i);
            assert_eq!(ctx.make_t(i).apply(&Poly::one()).unwrap(), Poly::mono(t));
            assert_eq!(ctx.make_t_inverse(i).apply(&Poly::one()).unwrap(), Poly::mono(t.inv()));
        }
        // (e2, alpha_1^vee) != 0 but X^{e1+e2} is s_1-fixed
        let t = ctx.t_param(1);
        assert_eq!(ctx.make_t(1).apply(&x(&[1, 1])).unwrap(), x(&[1, 1]).mul_mono(&t));
    }

    #[test]
    fn t1_on_simple_root_monomial() {
        let ctx = generic(2);
        let t = ctx.t_short();
        let got = ctx.make_t(1).apply(&x(&[1, -1])).unwrap();
        let diff = Poly::mono(t).sub(&Poly::mono(t.inv()));
        let want = x(&[-1, 1]).mul_mono(&t).add(&diff.mul(&Poly::one().add(&x(&[1, -1]))));
        assert_eq!(got, want);
    }

    #[test]
    fn t_at_trivial_spin_is_reflection() {
        let ctx = HeckeContext::new(2, ParamMode::Specialized { l1: 0, l2: 0 });
        for i in 0..=2 {
            let s = NormalOp::term(RatFn::one(), ctx.s_aff(i));
            assert!(ctx.make_t(i).op_equal(&s));
            assert!(ctx.make_t_inverse(i).op_equal(&s));
        }
    }

    #[test]
    fn hecke_relations_low_rank() {
        for n in 1..=2 {
            let rep = generic(n).check_hecke();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn opposite_affine_convention_breaks_quadratic_relation() {
        let ctx = generic(1);
        let t = ctx.t_long();
        let den = Poly::mono(Mono::q(-2).mul(&Mono::x(&[2]))).sub(&Poly::one());
        let c = RatFn::from_fraction(Poly::mono(t).sub(&Poly::mono(t.inv())), &den);
        let t0 = NormalOp::term(RatFn::from_mono(t).add(&c), ctx.s_aff(0)).add(&NormalOp::mult(1, c.neg()));
        let a = t0.sub(&NormalOp::mult(1, RatFn::from_mono(t)));
        let b = t0.add(&NormalOp::mult(1, RatFn::from_mono(t.inv())));
        assert!(!a.compose(&b).is_zero());
    }

    #[test]
    fn pi_relations() {
        for n in 1..=3 {
            let rep = generic(n).check_pi();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn words_at_trivial_spin_are_translations() {
        for n in 1..=4 {
            let ctx = HeckeContext::new(n, ParamMode::Specialized { l1: 0, l2: 0 });
            let elem = |w: &[Letter]| {
                w.iter().fold(AffElem::identity(n), |acc, l| match l {
                    Letter::T(i) | Letter::TInv(i) => acc.compose(&ctx.s_aff(*i)),
                    Letter::Pi => acc.compose(&ctx.pi_elem()),
                })
            };
            for i in 1..=n {
                let om = ctx.rs.omega_check[i - 1];
                let w = ctx.y_fund_word(i);
                assert_eq!(elem(&w), AffElem::tau(om), "n={n} i={i}");
                let nt = w.iter().filter(|l| !matches!(l, Letter::Pi)).count() as u32;
                assert_eq!(nt, ctx.rs.tau_length(&om).unwrap());
            }
            assert_eq!(elem(&ctx.paper_y_word(n)), AffElem::tau(ctx.rs.omega_check[n - 1].scale(2)));
        }
    }

    #[test]
    fn paper_word_for_last_coweight_is_a_square() {
        for n in 1..=2 {
            let ctx = generic(n);
            let y = ctx.make_y_fund(n);
            let sq = y.compose(&y);
            assert!(sq.op_equal(&ctx.word_op(&ctx.paper_y_word(n))));
        }
    }

    #[test]
    fn rank_one_y_is_pi_t1() {
        let ctx = generic(1);
        assert_eq!(ctx.y_fund_word(1), vec![Letter::Pi, Letter::T(1)]);
        let y = ctx.make_y_fund(1);
        let y2 = ctx.make_y(&HalfVec::from_doubled(&[2])).unwrap();
        assert!(y.compose(&y).op_equal(&y2));
        assert!(y2.op_equal(&ctx.word_op(&[Letter::T(0), Letter::T(1)])));
    }

    #[test]
    fn y_inverse_and_multiplicativity() {
        let ctx = generic(2);
        assert!(ctx.make_y(&HalfVec::zero(2)).unwrap().op_equal(&NormalOp::identity(2)));
        let l = ctx.rs.omega_check[0];
        let prod = ctx.make_y(&l).unwrap().compose(&ctx.make_y(&l.neg()).unwrap());
        assert!(prod.op_equal(&NormalOp::identity(2)));
        let rho = ctx.make_y(&ctx.rs.rho_check).unwrap();
        let y1 = ctx.make_y_fund(1);
        let y2 = ctx.make_y_fund(2);
        assert!(rho.op_equal(&y1.compose(&y2)));
        assert!(rho.op_equal(&y2.compose(&y1)));
        assert!(ctx.make_y(&HalfVec::from_doubled(&[1, 0])).is_err());
    }

    #[test]
    fn constants_are_eigenvectors() {
        let ctx = generic(2);
        for i in 1..=2 {
            let v = ctx.make_y_fund(i).apply(&Poly::one()).unwrap();
            assert!(v.as_monomial().is_some_and(|(m, _)| m.is_param_only()), "{v}");
        }
    }

    #[test]
    fn y_commute_and_ty_relations() {
        for n in 1..=2 {
            let ctx = generic(n);
            let rep = ctx.check_y_commute();
            assert!(rep.passed(), "{rep}");
            let rep = ctx.check_ty();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn b_expansion_shapes() {
        let ctx = generic(1);
        let b = ctx.b_expansion().unwrap();
        assert_eq!(b.len(), 2);
        let ctx = generic(2);
        let b = ctx.b_expansion().unwrap();
        assert_eq!(b.len(), 16);
        let rho = ctx.rs.rho_check;
        for (_, l) in &b {
            let diff = rho.sub(l);
            // rho - lambda is a sum of distinct positive coroots
            let found = (0..16u32).any(|mask| {
                let mut acc = HalfVec::zero(2);
                for (k, a) in ctx.rs.positive_roots.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        acc = acc.add(&RootSystemCn::coroot(a));
                    }
                }
                acc == diff
            });
            assert!(found);
        }
    }

    #[test]
    fn restricted_y_matches_full_on_invariants() {
        let ctx = generic(2);
        let f = x(&[1, 0]).add(&x(&[-1, 0])).add(&x(&[0, 1])).add(&x(&[0, -1]));
        for l in [ctx.rs.omega_check[0], ctx.rs.omega_check[1], ctx.rs.rho_check.neg()] {
            let full = ctx.make_y(&l).unwrap();
            let res = ctx.make_y_restricted(&l).unwrap();
            assert!(res.is_pure_difference());
            assert_eq!(full.apply(&f).unwrap(), res.apply(&f).unwrap());
        }
    }
}
