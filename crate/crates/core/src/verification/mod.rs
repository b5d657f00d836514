//! Invariant bases and helpers for checking operator identities on them.

pub mod probe;
pub mod targets;

use std::collections::BTreeSet;

use crate::arith::{Mono, Poly, RatFn};
use crate::operator::NormalOp;
use crate::report::Report;
use crate::root_system::{IVec, RootSystemCn};

/// Orbit sums `m_lambda` for partitions `lambda` with `lambda_1 <= d`.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub n: usize,
    pub degree: u32,
    pub partitions: Vec<IVec>,
    pub elements: Vec<Poly>,
}

impl InvariantBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn partitions(n: usize, d: u32) -> Vec<IVec> {
    fn rec(n: usize, max: i32, prefix: &mut IVec, out: &mut Vec<IVec>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=max {
            prefix.push(v);
            rec(n, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d as i32, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().sum::<i32>().cmp(&b.iter().sum::<i32>()).then(a.cmp(b)));
    out
}

pub fn orbit_sum(rs: &RootSystemCn, lambda: &[i32]) -> Poly {
    let orbit: BTreeSet<IVec> = rs.weyl().iter().map(|w| w.act(lambda)).collect();
    Poly::from_terms(orbit.into_iter().map(|mu| (Mono::x(&mu), 1.into())))
}

pub fn invariant_basis(n: usize, d: u32) -> InvariantBasis {
    let rs = RootSystemCn::build(n);
    let partitions = partitions(n, d);
    let elements = partitions.iter().map(|p| orbit_sum(&rs, p)).collect();
    InvariantBasis { n, degree: d, partitions, elements }
}

/// All monomials `X^mu` with `|mu_i| <= d`.
pub fn monomial_box(n: usize, d: i32) -> Vec<Poly> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: IVec| {
                (-d..=d).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.iter().map(|mu| Poly::mono(Mono::x(mu))).collect()
}

/// Compares `lhs(f)` and `rhs(f)` for every basis element, recording the
/// first mismatch with both sides rendered.
pub fn compare_on_basis<L, R>(rep: &mut Report, label: &str, basis: &[Poly], lhs: L, rhs: R)
where
    L: Fn(&Poly) -> RatFn + Sync,
    R: Fn(&Poly) -> RatFn + Sync,
{
    use rayon::prelude::*;
    let outcomes: Vec<Option<String>> = basis
        .par_iter()
        .map(|f| {
            let a = lhs(f);
            let b = rhs(f);
            (!a.equals(&b)).then(|| format!("input {f}: {a} vs {b}"))
        })
        .collect();
    let first = outcomes.into_iter().flatten().next();
    rep.push(format!("{label} on {} basis elements", basis.len()), first.is_none(), first);
}

/// `a ∘ b` applied to rational inputs without forming the composition.
pub fn apply_chain(ops: &[&NormalOp], f: &RatFn) -> RatFn {
    ops.iter().rev().fold(f.clone(), |g, op| op.apply_ratfn(&g))
}
