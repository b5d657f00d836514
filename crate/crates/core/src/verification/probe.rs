//! Randomized identity testing. Both sides of an operator identity are
//! applied to polynomial inputs and evaluated at random points modulo
//! primes above 2^60, without ever forming a symbolic normal form.
//!
//! A nonzero rational function of total degree `D` vanishes at a uniform
//! random point with probability at most `D / (p - 3)`, so with the degrees
//! met here (below 10^4) one probe misses a real difference with
//! probability under 10^-14. This is a heuristic bound, not a proof.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::arith::modp::{add_mod, inv_mod, mul_mod, pow_mod, PROBE_PRIMES};
use crate::arith::{ArithError, Mono, Poly, RatFn, NVARS, VAR_Q, VAR_TL, VAR_TS, VAR_X0};
use crate::operator::{AffElem, NormalOp, ParamMode};
use crate::report::Report;

/// Attempts per (prime, point) before giving up on unlucky assignments.
pub const RETRY_LIMIT: usize = 16;

/// A point: residues of `q`, `t_s`, `t_l` and `X_1..X_n` with inverses.
#[derive(Clone, Debug)]
pub struct Assignment {
    p: u64,
    n: usize,
    vals: [u64; NVARS],
    invs: [u64; NVARS],
}

impl Assignment {
    /// Residues are drawn from `2..p-1`, avoiding `0` and `±1`. At
    /// specialized parameters `t_l = q^l1`, `t_s = q^l2`.
    pub fn random(rng: &mut impl Rng, p: u64, n: usize, mode: ParamMode) -> Assignment {
        let mut vals = [1u64; NVARS];
        vals[VAR_Q] = rng.gen_range(2..p - 1);
        match mode {
            ParamMode::Generic => {
                vals[VAR_TS] = rng.gen_range(2..p - 1);
                vals[VAR_TL] = rng.gen_range(2..p - 1);
            }
            ParamMode::Specialized { l1, l2 } => {
                vals[VAR_TL] = pow_mod(vals[VAR_Q], l1 as u64, p);
                vals[VAR_TS] = pow_mod(vals[VAR_Q], l2 as u64, p);
            }
        }
        for v in vals.iter_mut().skip(VAR_X0).take(n) {
            *v = rng.gen_range(2..p - 1);
        }
        let invs = vals.map(|v| inv_mod(v, p).expect("nonzero residue"));
        Assignment { p, n, vals, invs }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[u64; NVARS] {
        &self.vals
    }

    fn mono(&self, m: &Mono) -> (u64, u64) {
        let (mut v, mut vi) = (1u64, 1u64);
        for k in 0..NVARS {
            let e = m.0[k] as i64;
            let (a, b) = if e >= 0 { (self.vals[k], self.invs[k]) } else { (self.invs[k], self.vals[k]) };
            let e = e.unsigned_abs();
            if e > 0 {
                v = mul_mod(v, pow_mod(a, e, self.p), self.p);
                vi = mul_mod(vi, pow_mod(b, e, self.p), self.p);
            }
        }
        (v, vi)
    }

    /// The point `g * x` with `(g f)(x) = f(g * x)`.
    pub fn moved(&self, g: &AffElem) -> Assignment {
        if g.is_identity() {
            return self.clone();
        }
        let mut r = self.clone();
        let mut unit = [0i32; crate::arith::MAX_RANK];
        for j in 0..self.n {
            unit[j] = 1;
            let (v, vi) = self.mono(&g.act_mono(&Mono::x(&unit[..self.n])));
            unit[j] = 0;
            r.vals[VAR_X0 + j] = v;
            r.invs[VAR_X0 + j] = vi;
        }
        r
    }

    pub fn eval(&self, r: &RatFn) -> Result<Frac, ArithError> {
        let (n, d) = r.eval_mod_frac(self.p, &self.vals, &self.invs);
        if d == 0 {
            return Err(ArithError::DenominatorVanishes);
        }
        Ok(Frac(n, d))
    }

    pub fn eval_poly(&self, f: &Poly) -> u64 {
        f.eval_mod(self.p, &self.vals, &self.invs)
    }
}

/// A residue kept as numerator over a nonzero denominator, so that
/// evaluation never pays for a modular inverse.
#[derive(Clone, Copy, Debug)]
pub struct Frac(pub u64, pub u64);

impl Frac {
    const ZERO: Frac = Frac(0, 1);
    const ONE: Frac = Frac(1, 1);

    fn mul(self, o: Frac, p: u64) -> Frac {
        Frac(mul_mod(self.0, o.0, p), mul_mod(self.1, o.1, p))
    }

    fn add(self, o: Frac, p: u64) -> Frac {
        if self.1 == o.1 {
            return Frac(add_mod(self.0, o.0, p), self.1);
        }
        Frac(add_mod(mul_mod(self.0, o.1, p), mul_mod(o.0, self.1, p), p), mul_mod(self.1, o.1, p))
    }

    fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The residue `num / den`.
    pub fn value(self, p: u64) -> u64 {
        mul_mod(self.0, inv_mod(self.1, p).expect("nonzero denominator"), p)
    }
}

/// Coefficients of an operator evaluated at one point.
pub type PointCoeffs = FxHashMap<AffElem, Frac>;

/// An operator expression kept unexpanded.
#[derive(Clone, Debug)]
pub enum Expr {
    Op(Arc<NormalOp>),
    /// Composition, leftmost factor applied last.
    Prod(Vec<Expr>),
    /// Linear combination with parameter-only (or `X`-dependent) scalars
    /// multiplied on the left.
    Sum(Vec<(RatFn, Expr)>),
    /// Collapse of the Weyl parts, valid on invariant inputs.
    Restrict(Box<Expr>),
}

impl Expr {
    pub fn op(o: NormalOp) -> Expr {
        Expr::Op(Arc::new(o))
    }

    pub fn zero() -> Expr {
        Expr::Sum(Vec::new())
    }

    pub fn mult(n: usize, c: RatFn) -> Expr {
        Expr::op(NormalOp::mult(n, c))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![(RatFn::one(), a), (RatFn::from_int(-1), b)])
    }

    pub fn restrict(e: Expr) -> Expr {
        Expr::Restrict(Box::new(e))
    }

    pub fn coeffs(&self, x: &Assignment) -> Result<PointCoeffs, ArithError> {
        let p = x.p;
        let mut out = PointCoeffs::default();
        match self {
            Expr::Op(o) => {
                for (g, c) in o.terms() {
                    out.insert(*g, x.eval(c)?);
                }
            }
            Expr::Prod(factors) => {
                out.insert(AffElem::identity(x.n), Frac::ONE);
                for f in factors {
                    let mut next = PointCoeffs::default();
                    for (g, a) in out {
                        if a.is_zero() {
                            continue;
                        }
                        for (h, c) in f.coeffs(&x.moved(&g))? {
                            let e = next.entry(g.compose(&h)).or_insert(Frac::ZERO);
                            *e = e.add(a.mul(c, p), p);
                        }
                    }
                    out = next;
                }
            }
            Expr::Sum(parts) => {
                for (s, e) in parts {
                    let sv = x.eval(s)?;
                    for (g, c) in e.coeffs(x)? {
                        let v = out.entry(g).or_insert(Frac::ZERO);
                        *v = v.add(sv.mul(c, p), p);
                    }
                }
            }
            Expr::Restrict(e) => {
                for (g, c) in e.coeffs(x)? {
                    let v = out.entry(AffElem::tau(g.shift)).or_insert(Frac::ZERO);
                    *v = v.add(c, p);
                }
            }
        }
        Ok(out)
    }

    /// `(E f)(x)` for each input `f`.
    pub fn apply_at(&self, x: &Assignment, inputs: &[Poly]) -> Result<Vec<u64>, ArithError> {
        let p = x.p;
        let mut acc = vec![Frac::ZERO; inputs.len()];
        for (g, c) in self.coeffs(x)? {
            if c.is_zero() {
                continue;
            }
            let y = x.moved(&g);
            for (a, f) in acc.iter_mut().zip(inputs) {
                *a = a.add(c.mul(Frac(y.eval_poly(f), 1), p), p);
            }
        }
        Ok(acc.into_iter().map(|a| a.value(p)).collect())
    }

    fn leaf_count(&self) -> usize {
        match self {
            Expr::Op(_) => 1,
            Expr::Prod(v) => v.iter().map(Expr::leaf_count).sum(),
            Expr::Sum(v) => v.iter().map(|(_, e)| e.leaf_count()).sum(),
            Expr::Restrict(e) => e.leaf_count(),
        }
    }

    /// Copy with one coefficient of one leaf increased by 1.
    pub fn perturbed(&self, rng: &mut impl Rng) -> Expr {
        let count = self.leaf_count();
        if count == 0 {
            return self.clone();
        }
        let mut k = rng.gen_range(0..count);
        self.perturb_at(&mut k, rng)
    }

    fn perturb_at(&self, k: &mut usize, rng: &mut impl Rng) -> Expr {
        match self {
            Expr::Op(o) => {
                let hit = *k == 0;
                *k = k.wrapping_sub(1);
                if !hit {
                    return self.clone();
                }
                let mut o2 = (**o).clone();
                let keys: Vec<AffElem> = o.terms().map(|(g, _)| *g).collect();
                let g = if keys.is_empty() { AffElem::identity(o.rank()) } else { keys[rng.gen_range(0..keys.len())] };
                o2.add_term(g, &RatFn::one());
                Expr::op(o2)
            }
            Expr::Prod(v) => Expr::Prod(v.iter().map(|e| e.perturb_at(k, rng)).collect()),
            Expr::Sum(v) => Expr::Sum(v.iter().map(|(s, e)| (s.clone(), e.perturb_at(k, rng))).collect()),
            Expr::Restrict(e) => Expr::restrict(e.perturb_at(k, rng)),
        }
    }
}

/// `lhs = rhs` on the given inputs at the given parameters.
#[derive(Clone, Debug)]
pub struct Identity {
    pub label: String,
    pub n: usize,
    pub mode: ParamMode,
    pub lhs: Expr,
    pub rhs: Expr,
    pub inputs: Vec<Poly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub primes: usize,
    pub points: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { primes: 3, points: 3, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    Agree,
    /// Input index and both residues.
    Disagree { input: usize, lhs: u64, rhs: u64 },
    RetryExhausted,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Outcome at one (prime, point); `(seed, prime, point)` fixes the
/// assignment.
pub fn probe_once(id: &Identity, seed: u64, prime: usize, point: usize) -> ProbeOutcome {
    let p = PROBE_PRIMES[prime % PROBE_PRIMES.len()];
    let mut rng = rng_for(seed, ((prime as u64) << 32) | point as u64);
    for _ in 0..RETRY_LIMIT {
        let x = Assignment::random(&mut rng, p, id.n, id.mode);
        let (a, b) = match (id.lhs.apply_at(&x, &id.inputs), id.rhs.apply_at(&x, &id.inputs)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        return match a.iter().zip(&b).position(|(u, v)| u != v) {
            None => ProbeOutcome::Agree,
            Some(i) => ProbeOutcome::Disagree { input: i, lhs: a[i], rhs: b[i] },
        };
    }
    ProbeOutcome::RetryExhausted
}

/// Runs all (prime, point) pairs and adds one line to the report.
pub fn probe(rep: &mut Report, id: &Identity, cfg: &ProbeConfig) {
    let pairs: Vec<(usize, usize)> = (0..cfg.primes).flat_map(|a| (0..cfg.points).map(move |b| (a, b))).collect();
    let outcomes: Vec<((usize, usize), ProbeOutcome)> =
        pairs.par_iter().map(|&(a, b)| ((a, b), probe_once(id, cfg.seed, a, b))).collect();
    let agree = outcomes.iter().filter(|(_, o)| *o == ProbeOutcome::Agree).count();
    let witness = outcomes.iter().find(|(_, o)| *o != ProbeOutcome::Agree).map(|((a, b), o)| match o {
        ProbeOutcome::Disagree { input, lhs, rhs } => {
            format!("prime {a} point {b}: input {} gives {lhs} vs {rhs}", id.inputs[*input])
        }
        _ => format!("prime {a} point {b}: no assignment without vanishing denominators in {RETRY_LIMIT} tries"),
    });
    let label = format!("{} [{}/{} assignments agree, {} inputs]", id.label, agree, pairs.len(), id.inputs.len());
    rep.push(label, witness.is_none(), witness);
}

pub fn probe_all(name: &str, ids: &[Identity], cfg: &ProbeConfig) -> Report {
    let mut rep = Report::new(name);
    for id in ids {
        probe(&mut rep, id, cfg);
    }
    rep
}

/// Plants a `+1` in one coefficient of the left side for each seed and
/// counts how many planted bugs are caught by a `cfg`-sized probe.
pub fn planted_bug_detection(id: &Identity, cfg: &ProbeConfig, seeds: std::ops::Range<u64>) -> (usize, usize) {
    let total = seeds.end.saturating_sub(seeds.start) as usize;
    let caught = seeds
        .into_par_iter()
        .filter(|&s| {
            let mut rng = rng_for(s, u64::MAX);
            let bad = Identity { lhs: id.lhs.perturbed(&mut rng), ..id.clone() };
            let mut rep = Report::new("planted");
            probe(&mut rep, &bad, &ProbeConfig { seed: s, ..*cfg });
            !rep.passed()
        })
        .count();
    (caught, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::{HalfVec, WeylElem};

    fn x(mu: &[i32]) -> Poly {
        Poly::mono(Mono::x(mu))
    }

    #[test]
    fn moved_point_matches_symbolic_action() {
        let mut rng = rng_for(1, 0);
        let p = PROBE_PRIMES[0];
        let x0 = Assignment::random(&mut rng, p, 2, ParamMode::Generic);
        let g = AffElem { shift: HalfVec::from_doubled(&[1, -3]), weyl: WeylElem::simple(2, 1) };
        let f = x(&[2, -1]).add(&x(&[0, 3]));
        assert_eq!(x0.moved(&g).eval_poly(&f), x0.eval_poly(&g.act_poly(&f)));
        let h = AffElem::weyl(WeylElem::simple(2, 2));
        assert_eq!(x0.moved(&g.compose(&h)).eval_poly(&f), x0.eval_poly(&g.act_poly(&h.act_poly(&f))));
    }

    #[test]
    fn point_composition_matches_normal_form() {
        let ctx = crate::hecke::HeckeContext::new(2, ParamMode::Generic);
        let (a, b) = (ctx.make_t(0).clone(), ctx.make_t(2).clone());
        let prod = Expr::Prod(vec![Expr::op(a.clone()), Expr::op(b.clone())]);
        let exact = Expr::op(a.compose(&b));
        let id = Identity {
            label: "T0 T2".into(),
            n: 2,
            mode: ParamMode::Generic,
            lhs: prod,
            rhs: exact,
            inputs: crate::verification::monomial_box(2, 1),
        };
        assert_eq!(probe_once(&id, 3, 0, 0), ProbeOutcome::Agree);
        let mut rng = rng_for(5, 9);
        let bad = Identity { lhs: id.lhs.perturbed(&mut rng), ..id.clone() };
        assert!(matches!(probe_once(&bad, 3, 0, 0), ProbeOutcome::Disagree { .. }));
    }

    #[test]
    fn assignments_are_seeded() {
        let id = Identity {
            label: "zero".into(),
            n: 1,
            mode: ParamMode::Generic,
            lhs: Expr::zero(),
            rhs: Expr::zero(),
            inputs: vec![Poly::one()],
        };
        let mut r1 = Report::new("a");
        let mut r2 = Report::new("a");
        probe(&mut r1, &id, &ProbeConfig::default());
        probe(&mut r2, &id, &ProbeConfig::default());
        assert_eq!(r1.to_string(), r2.to_string());
        let a = Assignment::random(&mut rng_for(4, 1), PROBE_PRIMES[1], 2, ParamMode::Specialized { l1: 2, l2: 1 });
        let q = a.values()[VAR_Q];
        assert_eq!(a.values()[VAR_TL], mul_mod(q, q, a.prime()));
        assert!(a.values().iter().all(|&v| v != 0 && v != a.prime() - 1));
    }
}
