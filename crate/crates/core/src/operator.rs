//! Normal-form operators `sum c(X) tau(lambda) w` acting on Laurent
//! polynomials, where `tau(lambda) X^mu = q^{2(lambda,mu)} X^mu` and
//! `w X^mu = X^{w(mu)}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::arith::ratfn::{normalize, parse_denominator, render_denominator, Unit};
use crate::arith::{specialize_mono, ArithError, Factor, FieldScalar, Int, Mono, Poly, RatFn, MAX_RANK, VAR_Q, VAR_X0};
use crate::root_system::{HalfVec, WeylElem};

/// The affine Weyl group element `tau(shift) w`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffElem {
    pub shift: HalfVec,
    pub weyl: WeylElem,
}

impl fmt::Display for AffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau{} w{}", self.shift, self.weyl)
    }
}

impl AffElem {
    pub fn identity(n: usize) -> Self {
        AffElem { shift: HalfVec::zero(n), weyl: WeylElem::identity(n) }
    }

    pub fn tau(shift: HalfVec) -> Self {
        AffElem { shift, weyl: WeylElem::identity(shift.rank()) }
    }

    pub fn weyl(w: WeylElem) -> Self {
        AffElem { shift: HalfVec::zero(w.rank()), weyl: w }
    }

    /// `self ∘ o`: `tau(l1) w1 tau(l2) w2 = tau(l1 + w1 l2) w1 w2`.
    pub fn compose(&self, o: &AffElem) -> AffElem {
        AffElem { shift: self.shift.add(&self.weyl.act_half(&o.shift)), weyl: self.weyl.compose(&o.weyl) }
    }

    pub fn inverse(&self) -> AffElem {
        let wi = self.weyl.inverse();
        AffElem { shift: wi.act_half(&self.shift).neg(), weyl: wi }
    }

    /// Image of a monomial: `q^a X^mu -> q^{a + 2(lambda, w mu)} X^{w mu}`.
    pub fn act_mono(&self, m: &Mono) -> Mono {
        let n = self.shift.rank();
        let mut mu = [0i32; MAX_RANK];
        for (i, x) in mu.iter_mut().enumerate().take(n) {
            *x = m.x_exp(i);
        }
        let wmu = self.weyl.act(&mu[..n]);
        let mut r = *m;
        for i in 0..n {
            r.0[VAR_X0 + i] = wmu[i] as i16;
        }
        let dq = self.shift.pair2(&wmu);
        r.0[VAR_Q] = (m.exp(VAR_Q) + dq).try_into().expect("exponent overflow");
        r
    }

    pub fn act_poly(&self, p: &Poly) -> Poly {
        if self.is_identity() {
            return p.clone();
        }
        p.map_monomials(|m| self.act_mono(m))
    }

    pub fn act_ratfn(&self, r: &RatFn) -> RatFn {
        if self.is_identity() {
            return r.clone();
        }
        r.map_auto(|m| self.act_mono(m))
    }

    pub fn is_identity(&self) -> bool {
        self.shift.is_zero() && self.weyl.is_identity()
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum OpError {
    #[error("operator application left a non-polynomial remainder")]
    NonpolynomialResult,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("malformed operator serialization: {0}")]
    Parse(String),
}

/// Parameter regime of an operator: generic `t`, or `tl = q^l1, ts = q^l2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ParamMode {
    Generic,
    Specialized { l1: u32, l2: u32 },
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamMode::Generic => f.write_str("generic"),
            ParamMode::Specialized { l1, l2 } => write!(f, "specialized {l1} {l2}"),
        }
    }
}

/// A finite sum `sum_g c_g g` over affine Weyl group elements.
#[derive(Clone, Debug)]
pub struct NormalOp {
    n: usize,
    terms: BTreeMap<AffElem, RatFn>,
}

impl NormalOp {
    pub fn zero(n: usize) -> Self {
        NormalOp { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(RatFn::one(), AffElem::identity(n))
    }

    pub fn term(c: RatFn, g: AffElem) -> Self {
        let mut op = NormalOp::zero(g.shift.rank());
        if !c.is_zero() {
            op.terms.insert(g, c);
        }
        op
    }

    /// Multiplication by a rational function.
    pub fn mult(n: usize, c: RatFn) -> Self {
        Self::term(c, AffElem::identity(n))
    }

    pub fn tau(shift: HalfVec) -> Self {
        Self::term(RatFn::one(), AffElem::tau(shift))
    }

    pub fn weyl(w: WeylElem) -> Self {
        Self::term(RatFn::one(), AffElem::weyl(w))
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AffElem, &RatFn)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c g`, pruning the key if the sum vanishes.
    pub fn add_term(&mut self, g: AffElem, c: &RatFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(e) => {
                let s = e.add(c);
                if s.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(g, c.clone());
            }
        }
    }

    pub fn add(&self, o: &NormalOp) -> NormalOp {
        let mut r = self.clone();
        for (g, c) in &o.terms {
            r.add_term(*g, c);
        }
        r
    }

    pub fn sub(&self, o: &NormalOp) -> NormalOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> NormalOp {
        NormalOp { n: self.n, terms: self.terms.iter().map(|(g, c)| (*g, c.neg())).collect() }
    }

    pub fn scale(&self, s: &FieldScalar) -> NormalOp {
        self.scale_ratfn(s.as_ratfn())
    }

    /// Left multiplication by a function: `c ∘ self`.
    pub fn scale_ratfn(&self, s: &RatFn) -> NormalOp {
        if s.is_zero() {
            return NormalOp::zero(self.n);
        }
        NormalOp { n: self.n, terms: self.terms.iter().map(|(g, c)| (*g, s.mul(c))).collect() }
    }

    pub fn scale_mono(&self, m: &Mono, k: i64) -> NormalOp {
        let k = Int::from(k);
        NormalOp { n: self.n, terms: self.terms.iter().map(|(g, c)| (*g, c.mul_mono(m, &k))).collect() }
    }

    /// Sums many operators; identical keys are combined in input order.
    pub fn sum<'a>(n: usize, ops: impl IntoIterator<Item = &'a NormalOp>) -> NormalOp {
        let mut groups: BTreeMap<AffElem, Vec<RatFn>> = BTreeMap::new();
        for op in ops {
            for (g, c) in &op.terms {
                groups.entry(*g).or_default().push(c.clone());
            }
        }
        NormalOp::from_groups(n, groups)
    }

    fn from_groups(n: usize, groups: BTreeMap<AffElem, Vec<RatFn>>) -> NormalOp {
        let summed: Vec<(AffElem, RatFn)> = groups
            .into_par_iter()
            .filter_map(|(g, cs)| {
                let s = sum_ratfns(cs);
                (!s.is_zero()).then_some((g, s))
            })
            .collect();
        NormalOp { n, terms: summed.into_iter().collect() }
    }

    /// `self ∘ o`, acting on the right operand first.
    pub fn compose(&self, o: &NormalOp) -> NormalOp {
        assert_eq!(self.n, o.n, "rank mismatch");
        let pairs: Vec<(&AffElem, &RatFn)> = self.terms.iter().collect();
        let products: Vec<Vec<(AffElem, RatFn)>> = pairs
            .par_iter()
            .map(|(g1, c1)| {
                o.terms
                    .iter()
                    .map(|(g2, c2)| (g1.compose(g2), c1.mul(&g1.act_ratfn(c2))))
                    .collect()
            })
            .collect();
        let mut groups: BTreeMap<AffElem, Vec<RatFn>> = BTreeMap::new();
        for row in products {
            for (g, c) in row {
                groups.entry(g).or_default().push(c);
            }
        }
        NormalOp::from_groups(self.n, groups)
    }

    /// Applies the operator to a Laurent polynomial.
    pub fn apply(&self, f: &Poly) -> Result<Poly, OpError> {
        let parts: Vec<RatFn> = self.terms.par_iter().map(|(g, c)| c.mul_poly(&g.act_poly(f))).collect();
        sum_ratfns(parts).to_poly().ok_or(OpError::NonpolynomialResult)
    }

    /// Applies the operator to a rational function.
    pub fn apply_ratfn(&self, f: &RatFn) -> RatFn {
        let parts: Vec<RatFn> = self.terms.par_iter().map(|(g, c)| c.mul(&g.act_ratfn(f))).collect();
        sum_ratfns(parts)
    }

    /// Drops the Weyl parts: `c tau(l) w -> c tau(l)`. Agrees with `self` on
    /// W-invariant inputs.
    pub fn restrict_collapse(&self) -> NormalOp {
        let mut groups: BTreeMap<AffElem, Vec<RatFn>> = BTreeMap::new();
        for (g, c) in &self.terms {
            groups.entry(AffElem::tau(g.shift)).or_default().push(c.clone());
        }
        NormalOp::from_groups(self.n, groups)
    }

    /// True if every Weyl part is the identity.
    pub fn is_pure_difference(&self) -> bool {
        self.terms.keys().all(|g| g.weyl.is_identity())
    }

    pub fn coeff_of(&self, shift: &HalfVec, weyl: &WeylElem) -> RatFn {
        self.terms.get(&AffElem { shift: *shift, weyl: *weyl }).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn shifts(&self) -> Vec<HalfVec> {
        let mut s: Vec<HalfVec> = self.terms.keys().map(|g| g.shift).collect();
        s.dedup();
        s
    }

    /// Substitutes `tl -> q^l1, ts -> q^l2` in every coefficient.
    pub fn specialize_t(&self, l1: u32, l2: u32) -> Result<NormalOp, OpError> {
        let mut out = NormalOp::zero(self.n);
        for (g, c) in &self.terms {
            let s = c.map_monomials(|m| specialize_mono(m, l1, l2))?;
            out.add_term(*g, &s);
        }
        Ok(out)
    }

    /// `weight ∘ self ∘ weight^{-1}`: each coefficient becomes
    /// `c * weight / g(weight)`, computed on factored weights.
    pub fn gauge_conjugate(&self, weight: &FactoredWeight) -> NormalOp {
        let terms: Vec<(AffElem, RatFn)> = self
            .terms
            .par_iter()
            .map(|(g, c)| {
                let ratio = weight.div(&weight.act(g));
                (*g, ratio.mul_into(c))
            })
            .collect();
        NormalOp { n: self.n, terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Exact operator equality.
    pub fn op_equal(&self, o: &NormalOp) -> bool {
        if self.n != o.n {
            return false;
        }
        let keys: std::collections::BTreeSet<&AffElem> = self.terms.keys().chain(o.terms.keys()).collect();
        let zero = RatFn::zero();
        keys.into_par_iter().all(|g| {
            let a = self.terms.get(g).unwrap_or(&zero);
            let b = o.terms.get(g).unwrap_or(&zero);
            a.equals(b)
        })
    }

    /// First key where the two operators differ, with both coefficients.
    pub fn first_difference(&self, o: &NormalOp) -> Option<(AffElem, RatFn, RatFn)> {
        let keys: std::collections::BTreeSet<&AffElem> = self.terms.keys().chain(o.terms.keys()).collect();
        let zero = RatFn::zero();
        keys.into_iter().find_map(|g| {
            let a = self.terms.get(g).unwrap_or(&zero);
            let b = o.terms.get(g).unwrap_or(&zero);
            (!a.equals(b)).then(|| (*g, a.clone(), b.clone()))
        })
    }

    /// `op_equal` with a rendered witness on failure.
    pub fn compare(&self, o: &NormalOp) -> Result<(), String> {
        match self.first_difference(o) {
            None => Ok(()),
            Some((g, a, b)) => Err(format!("at {}: {} vs {}", g, a, b)),
        }
    }

    /// Compares `apply` on each basis element; reports the first mismatch.
    pub fn op_equal_on_basis(&self, o: &NormalOp, basis: &[Poly]) -> BasisComparison {
        for (i, f) in basis.iter().enumerate() {
            let a = self.apply(f);
            let b = o.apply(f);
            let same = match (&a, &b) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            };
            if !same {
                return BasisComparison {
                    checked: i + 1,
                    mismatch: Some(Mismatch { index: i, input: f.clone(), left: fmt_result(&a), right: fmt_result(&b) }),
                };
            }
        }
        BasisComparison { checked: basis.len(), mismatch: None }
    }

    /// Canonical serialization with a versioned header.
    pub fn serialize(&self, mode: ParamMode) -> String {
        let mut rows: Vec<(String, String, String, String)> = self
            .terms
            .iter()
            .map(|(g, c)| {
                let mut den = String::new();
                render_denominator(c, &mut den).unwrap();
                (g.shift.to_string(), g.weyl.to_string(), c.numerator().to_string(), den)
            })
            .collect();
        rows.sort_by(|a, b| {
            let sa: HalfVec = a.0.parse().unwrap();
            let sb: HalfVec = b.0.parse().unwrap();
            sa.doubled().cmp(sb.doubled()).then_with(|| a.1.cmp(&b.1))
        });
        let mut out = String::new();
        out.push_str(SERIAL_HEADER);
        out.push('\n');
        out.push_str(&format!("n {}\nmode {}\nterms {}\n", self.n, mode, rows.len()));
        for (s, w, num, den) in rows {
            out.push_str(&format!("{s}\t{w}\t{num}\t{den}\n"));
        }
        out
    }

    pub fn deserialize(s: &str) -> Result<(NormalOp, ParamMode), OpError> {
        let perr = |m: &str| OpError::Parse(m.to_string());
        let mut lines = s.lines();
        if lines.next() != Some(SERIAL_HEADER) {
            return Err(perr("missing or unsupported header"));
        }
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("n "))
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| perr("bad rank line"))?;
        if n == 0 || n > MAX_RANK {
            return Err(perr("rank out of range"));
        }
        let mode_line = lines.next().and_then(|l| l.strip_prefix("mode ")).ok_or_else(|| perr("bad mode line"))?;
        let mode = parse_mode(mode_line).ok_or_else(|| perr("bad mode"))?;
        let count: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("terms "))
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| perr("bad term count"))?;
        let mut op = NormalOp::zero(n);
        let mut seen = 0;
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(perr("term line must have 4 columns"));
            }
            let shift: HalfVec = cols[0].parse().map_err(|e: String| OpError::Parse(e))?;
            let weyl: WeylElem = cols[1].parse().map_err(|e: String| OpError::Parse(e))?;
            if shift.rank() != n || weyl.rank() != n {
                return Err(perr("rank mismatch in term"));
            }
            let num = crate::arith::parse_poly(cols[2]).map_err(OpError::Parse)?;
            let c = parse_factored(num, cols[3])?;
            op.add_term(AffElem { shift, weyl }, &c);
            seen += 1;
        }
        if seen != count {
            return Err(perr("term count mismatch"));
        }
        Ok((op, mode))
    }

    /// Human-readable multi-line rendering.
    pub fn render_human(&self) -> String {
        let mut out = String::new();
        for (g, c) in &self.terms {
            let shift: Vec<String> = g.shift.doubled().iter().map(|d| fmt_half(*d)).collect();
            out.push_str(&format!("tau({})", shift.join(",")));
            if !g.weyl.is_identity() {
                out.push_str(&format!(" w{}", g.weyl));
            }
            out.push_str(&format!("  :  {c}\n"));
        }
        out
    }
}

pub const SERIAL_HEADER: &str = "# rscn-operator v1";

fn fmt_half(d: i32) -> String {
    if d % 2 == 0 {
        format!("{}", d / 2)
    } else {
        format!("{d}/2")
    }
}

fn parse_mode(s: &str) -> Option<ParamMode> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    match parts.as_slice() {
        ["generic"] => Some(ParamMode::Generic),
        ["specialized", a, b] => Some(ParamMode::Specialized { l1: a.parse().ok()?, l2: b.parse().ok()? }),
        _ => None,
    }
}

fn parse_factored(num: Poly, den: &str) -> Result<RatFn, OpError> {
    // Each parenthesized factor is divided out separately so that the
    // factored denominator structure survives a round trip.
    let mut r = RatFn::from_poly(num);
    let mut rest = den.trim();
    while !rest.is_empty() {
        let end = if rest.starts_with('(') {
            let close = rest.find(')').ok_or_else(|| OpError::Parse("unbalanced".into()))?;
            let after = &rest[close + 1..];
            close + 1 + after.find('*').unwrap_or(after.len())
        } else {
            rest.find('*').unwrap_or(rest.len())
        };
        // `(f)^k` is divided out k times so that f stays one atom.
        let (base, k) = match rest[..end].rsplit_once(")^") {
            Some((b, e)) => (format!("{b})"), e.parse::<u32>().map_err(|_| OpError::Parse("bad factor exponent".into()))?),
            None => (rest[..end].to_string(), 1),
        };
        let piece = parse_denominator(&base).map_err(OpError::Parse)?;
        for _ in 0..k {
            r = r.mul(&RatFn::from_fraction(Poly::one(), &piece));
        }
        rest = rest[end..].strip_prefix('*').unwrap_or(&rest[end..]);
    }
    Ok(r)
}

fn fmt_result(r: &Result<Poly, OpError>) -> String {
    match r {
        Ok(p) => p.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Sums rational functions pairwise (balanced), which keeps intermediate
/// lcm denominators small.
pub fn sum_ratfns(mut v: Vec<RatFn>) -> RatFn {
    if v.is_empty() {
        return RatFn::zero();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b)),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub index: usize,
    pub input: Poly,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisComparison {
    pub checked: usize,
    pub mismatch: Option<Mismatch>,
}

impl BasisComparison {
    pub fn all_equal(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// A product `unit * prod factor^e` with integer exponents, kept factored so
/// that ratios like `Delta / g(Delta)` cancel atom by atom.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredWeight {
    pub unit: Unit,
    pub factors: Vec<(Factor, i32)>,
}

impl FactoredWeight {
    pub fn one() -> Self {
        FactoredWeight { unit: Unit { coef: Int::ONE, mono: Mono::ONE }, factors: Vec::new() }
    }

    /// Multiplies in `poly^e`; `poly` is normalized into unit and factor.
    pub fn push(&mut self, poly: &Poly, e: i32) {
        match normalize(poly) {
            None => {
                let (m, c) = poly.as_monomial().expect("zero factor");
                self.mul_unit(c, m, e);
            }
            Some((u, f)) => {
                self.mul_unit(&u.coef, &u.mono, e);
                self.push_factor(f, e);
            }
        }
    }

    fn mul_unit(&mut self, c: &Int, m: &Mono, e: i32) {
        let k = e.unsigned_abs();
        self.unit.mono = self.unit.mono.mul(&m.pow(e));
        let mut ck = Int::ONE;
        for _ in 0..k {
            ck = &ck * c;
        }
        if e >= 0 {
            self.unit.coef = &self.unit.coef * &ck;
        } else {
            assert!(ck.abs().is_one(), "non-unit integer content in a weight inverse");
            self.unit.coef = &self.unit.coef * &ck;
        }
    }

    fn push_factor(&mut self, f: Factor, e: i32) {
        match self.factors.binary_search_by(|(g, _)| g.cmp(&f)) {
            Ok(i) => {
                self.factors[i].1 += e;
                if self.factors[i].1 == 0 {
                    self.factors.remove(i);
                }
            }
            Err(i) => {
                if e != 0 {
                    self.factors.insert(i, (f, e));
                }
            }
        }
    }

    /// Image under the ring automorphism `g`.
    pub fn act(&self, g: &AffElem) -> FactoredWeight {
        let mut r = FactoredWeight::one();
        r.mul_unit(&self.unit.coef, &g.act_mono(&self.unit.mono), 1);
        for (f, e) in &self.factors {
            r.push(&g.act_poly(f.poly()), *e);
        }
        r
    }

    pub fn inverse(&self) -> FactoredWeight {
        assert!(self.unit.coef.abs().is_one(), "weight with integer content is not invertible");
        FactoredWeight {
            unit: Unit { coef: self.unit.coef.clone(), mono: self.unit.mono.inv() },
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        }
    }

    pub fn mul(&self, o: &FactoredWeight) -> FactoredWeight {
        let mut r = self.clone();
        r.mul_unit(&o.unit.coef, &o.unit.mono, 1);
        for (f, e) in &o.factors {
            r.push_factor(f.clone(), *e);
        }
        r
    }

    pub fn div(&self, o: &FactoredWeight) -> FactoredWeight {
        self.mul(&o.inverse())
    }

    /// Multiplies `c` by this weight.
    pub fn mul_into(&self, c: &RatFn) -> RatFn {
        let mut r = c.mul_unit(&self.unit);
        for (f, e) in &self.factors {
            r = r.mul_factor_power(f, *e);
        }
        r
    }

    pub fn to_ratfn(&self) -> RatFn {
        self.mul_into(&RatFn::one())
    }

    /// Number of atoms counted with multiplicity.
    pub fn atom_count(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }
}

impl fmt::Display for FactoredWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !(self.unit.coef.is_one() && self.unit.mono.is_one()) {
            parts.push(Poly::monomial(self.unit.mono, self.unit.coef.clone()).to_string());
        }
        for (fac, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("({})", fac.poly()));
            } else {
                parts.push(format!("({})^{e}", fac.poly()));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::RootSystemCn;

    fn xm(mu: &[i32]) -> Poly {
        Poly::mono(Mono::x(mu))
    }

    #[test]
    fn tau_and_reflection_actions() {
        let rs = RootSystemCn::build(2);
        let t = NormalOp::tau(rs.omega_check[1]);
        assert_eq!(t.apply(&xm(&[1, 0])).unwrap(), Poly::mono(Mono::q(1).mul(&Mono::x(&[1, 0]))));
        assert_eq!(NormalOp::identity(2).apply(&xm(&[3, -1])).unwrap(), xm(&[3, -1]));
        // s0 = tau(theta^vee) s_theta sends X^{e1} to q^-2 X^{-e1}
        let s_theta = WeylElem::from_images(&[-1, 2]).unwrap();
        let s0 = AffElem { shift: HalfVec::from_int(&[1, 0]), weyl: s_theta };
        let got = NormalOp::term(RatFn::one(), s0).apply(&xm(&[1, 0])).unwrap();
        assert_eq!(got, Poly::mono(Mono::q(-2).mul(&Mono::x(&[-1, 0]))));
    }

    #[test]
    fn composition_rules() {
        let l = HalfVec::from_doubled(&[3, 1]);
        let m = HalfVec::from_doubled(&[-1, 1]);
        assert!(NormalOp::tau(l).compose(&NormalOp::tau(m)).op_equal(&NormalOp::tau(l.add(&m))));
        let w = WeylElem::from_images(&[-2, 1]).unwrap();
        let lhs = NormalOp::weyl(w).compose(&NormalOp::tau(l));
        let rhs = NormalOp::tau(w.act_half(&l)).compose(&NormalOp::weyl(w));
        assert!(lhs.op_equal(&rhs));
        // X^mu ∘ tau(l) = q^{-2(l,mu)} tau(l) ∘ X^mu
        let mu = [1, -2];
        let xmu = NormalOp::mult(2, RatFn::from_mono(Mono::x(&mu)));
        let lhs = xmu.compose(&NormalOp::tau(l));
        let rhs = NormalOp::tau(l).compose(&xmu).scale_mono(&Mono::q(-l.pair2(&mu)), 1);
        assert!(lhs.op_equal(&rhs));
        // tau(l) w == w tau(w^-1 l)
        let lhs = NormalOp::tau(l).compose(&NormalOp::weyl(w));
        let rhs = NormalOp::weyl(w).compose(&NormalOp::tau(w.inverse().act_half(&l)));
        assert!(lhs.op_equal(&rhs));
    }

    #[test]
    fn add_and_scale() {
        let op = NormalOp::tau(HalfVec::from_doubled(&[1]))
            .scale_ratfn(&RatFn::inv_one_minus(Mono::x(&[2])));
        assert!(op.add(&NormalOp::zero(1)).op_equal(&op));
        assert!(op.add(&op.scale(&FieldScalar::int(-1))).is_zero());
    }

    #[test]
    fn restrict_collapse_examples() {
        let s1 = WeylElem::simple(2, 1);
        let l = HalfVec::from_doubled(&[1, 1]);
        let c = RatFn::inv_one_minus(Mono::x(&[1, -1]));
        let op = NormalOp::term(c.clone(), AffElem { shift: l, weyl: s1 });
        assert!(op.restrict_collapse().op_equal(&NormalOp::term(c, AffElem::tau(l))));
        let rs = RootSystemCn::build(2);
        let alt = NormalOp::sum(
            2,
            rs.weyl().iter().map(|w| NormalOp::weyl(*w).scale(&FieldScalar::int(w.sgn() as i64))).collect::<Vec<_>>().iter(),
        );
        assert_eq!(alt.len(), 8);
        assert!(alt.restrict_collapse().is_zero());
        assert!(NormalOp::identity(2).restrict_collapse().op_equal(&NormalOp::identity(2)));
    }

    #[test]
    fn coefficient_lookup() {
        let l = HalfVec::from_doubled(&[1, 1]);
        let op = NormalOp::tau(l);
        let e = WeylElem::identity(2);
        assert!(op.coeff_of(&l, &e).is_one());
        assert!(op.coeff_of(&l.neg(), &e).is_zero());
    }

    #[test]
    fn nonpolynomial_application_is_reported() {
        let op = NormalOp::mult(1, RatFn::inv_one_minus(Mono::x(&[1])));
        assert_eq!(op.apply(&Poly::one()), Err(OpError::NonpolynomialResult));
        assert_eq!(op.apply(&Poly::one_minus(Mono::x(&[1]))).unwrap(), Poly::one());
    }

    #[test]
    fn gauge_round_trip_and_identity() {
        let mut w = FactoredWeight::one();
        w.push(&Poly::one_minus(Mono::x(&[2])), 1);
        w.push(&Poly::one_minus(Mono::q(2).mul(&Mono::x(&[2]))), 1);
        assert!(NormalOp::identity(1).gauge_conjugate(&w).op_equal(&NormalOp::identity(1)));
        let g = NormalOp::mult(1, RatFn::inv_one_minus(Mono::x(&[1])));
        assert!(g.gauge_conjugate(&w).op_equal(&g));
        let op = NormalOp::tau(HalfVec::from_doubled(&[1]))
            .add(&NormalOp::tau(HalfVec::from_doubled(&[-1])).scale_ratfn(&RatFn::inv_one_minus(Mono::x(&[2]))));
        let back = op.gauge_conjugate(&w).gauge_conjugate(&w.inverse());
        assert!(back.op_equal(&op));
        // conjugation agrees with composing multiplication operators
        let mw = NormalOp::mult(1, w.to_ratfn());
        let mwi = NormalOp::mult(1, w.inverse().to_ratfn());
        assert!(mw.compose(&op).compose(&mwi).op_equal(&op.gauge_conjugate(&w)));
    }

    #[test]
    fn serialization_round_trip() {
        let op = NormalOp::tau(HalfVec::from_doubled(&[1, 1]))
            .scale_ratfn(&RatFn::from_fraction(Poly::mono(Mono::var(crate::arith::VAR_TS, 1)), &Poly::one_minus(Mono::x(&[1, 1]))))
            .add(&NormalOp::weyl(WeylElem::from_images(&[2, -1]).unwrap()).scale(&FieldScalar::int(3)));
        let s = op.serialize(ParamMode::Generic);
        let (back, mode) = NormalOp::deserialize(&s).unwrap();
        assert_eq!(mode, ParamMode::Generic);
        assert!(back.op_equal(&op));
        assert_eq!(back.serialize(ParamMode::Generic), s);
    }

    #[test]
    fn repeated_factors_survive_round_trip() {
        let f = RatFn::inv_one_minus(Mono::q(-2).mul(&Mono::x(&[0, 2])));
        let c = f.mul(&f).mul(&RatFn::inv_one_minus(Mono::x(&[1, 1]))).mul_poly(&Poly::mono(Mono::x(&[1, -1])));
        let op = NormalOp::tau(HalfVec::from_doubled(&[1, -1])).scale_ratfn(&c);
        let s = op.serialize(ParamMode::Generic);
        assert!(s.contains(")^2"), "{s}");
        let (back, _) = NormalOp::deserialize(&s).unwrap();
        assert!(back.op_equal(&op));
        assert_eq!(back.serialize(ParamMode::Generic), s);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    const SIGNED_PERMS: [[i32; 2]; 8] = [[1, 2], [-1, 2], [1, -2], [-1, -2], [2, 1], [-2, 1], [2, -1], [-2, -1]];

    fn elem() -> impl Strategy<Value = AffElem> {
        (-2i32..=2, -2i32..=2, 0usize..8).prop_map(|(a, b, k)| AffElem {
            shift: HalfVec::from_doubled(&[a, b]),
            weyl: WeylElem::from_images(&SIGNED_PERMS[k]).unwrap(),
        })
    }

    /// `c / (1 - X^mu)` or a plain Laurent monomial times a small integer.
    fn coeff() -> impl Strategy<Value = RatFn> {
        (-2i32..=2, -1i32..=1, -1i32..=1, 1i64..=3, any::<bool>()).prop_map(|(e, a, b, c, frac)| {
            let m = Poly::monomial(Mono::q(e), c.into());
            if frac && (a, b) != (0, 0) {
                RatFn::from_fraction(m, &Poly::one_minus(Mono::x(&[a, b])))
            } else {
                RatFn::from_poly(m.mul_mono(&Mono::x(&[a, b])))
            }
        })
    }

    fn op() -> impl Strategy<Value = NormalOp> {
        prop::collection::vec((coeff(), elem()), 1..4).prop_map(|ts| {
            let parts: Vec<NormalOp> = ts.into_iter().map(|(c, g)| NormalOp::term(c, g)).collect();
            NormalOp::sum(2, parts.iter())
        })
    }

    fn laurent() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-2i32..=2, -2i32..=2, -3i64..=3), 1..4)
            .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(a, b, c)| (Mono::x(&[a, b]), c.into()))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn composition_is_associative(a in op(), b in op(), c in op()) {
            prop_assert!(a.compose(&b).compose(&c).op_equal(&a.compose(&b.compose(&c))));
        }

        #[test]
        fn composition_matches_application(a in op(), b in op(), f in laurent()) {
            let f = RatFn::from_poly(f);
            prop_assert!(a.compose(&b).apply_ratfn(&f).equals(&a.apply_ratfn(&b.apply_ratfn(&f))));
        }

        #[test]
        fn group_law(g in elem(), h in elem(), k in elem()) {
            prop_assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
            prop_assert!(g.compose(&g.inverse()).is_identity());
            let m = Mono::x(&[1, -2]).mul(&Mono::q(1));
            prop_assert_eq!(g.compose(&h).act_mono(&m), g.act_mono(&h.act_mono(&m)));
        }

        #[test]
        fn serialization_round_trips(a in op()) {
            let s = a.serialize(ParamMode::Generic);
            let (back, _) = NormalOp::deserialize(&s).unwrap();
            prop_assert!(back.op_equal(&a));
            prop_assert_eq!(back.serialize(ParamMode::Generic), s);
        }
    }
}
