//! Sparse multivariate Laurent polynomials over the integers in the
//! variables `q, ts, tl, X1..Xn`.
//!
//! A [`Poly`] whose `X`-exponents are all zero is a parameter polynomial;
//! otherwise it is read as a Laurent polynomial in `X` whose coefficients are
//! Laurent polynomials in the parameters.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;

use super::int::Int;

/// Largest supported rank.
pub const MAX_RANK: usize = 5;
/// Number of exponent slots: `q, ts, tl` followed by `X1..X{MAX_RANK}`.
pub const NVARS: usize = 3 + MAX_RANK;

pub const VAR_Q: usize = 0;
pub const VAR_TS: usize = 1;
pub const VAR_TL: usize = 2;
pub const VAR_X0: usize = 3;

/// A Laurent monomial. Canonical order: `X`-part lexicographic, ties broken
/// by the parameter part `(q, ts, tl)` in degree-lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(pub [i16; NVARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; NVARS]);

    pub fn var(v: usize, e: i32) -> Mono {
        let mut m = Mono::ONE;
        m.0[v] = narrow(e);
        m
    }

    pub fn q(e: i32) -> Mono {
        Mono::var(VAR_Q, e)
    }

    /// `X^mu` for an exponent vector of length at most [`MAX_RANK`].
    pub fn x(mu: &[i32]) -> Mono {
        assert!(mu.len() <= MAX_RANK, "rank exceeds MAX_RANK");
        let mut m = Mono::ONE;
        for (i, &e) in mu.iter().enumerate() {
            m.0[VAR_X0 + i] = narrow(e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; NVARS]
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = [0i16; NVARS];
        for i in 0..NVARS {
            r[i] = self.0[i].checked_add(o.0[i]).expect("exponent overflow");
        }
        Mono(r)
    }

    pub fn div(&self, o: &Mono) -> Mono {
        let mut r = [0i16; NVARS];
        for i in 0..NVARS {
            r[i] = self.0[i].checked_sub(o.0[i]).expect("exponent overflow");
        }
        Mono(r)
    }

    pub fn inv(&self) -> Mono {
        Mono::ONE.div(self)
    }

    pub fn pow(&self, k: i32) -> Mono {
        let mut r = [0i16; NVARS];
        for i in 0..NVARS {
            r[i] = narrow(self.0[i] as i32 * k);
        }
        Mono(r)
    }

    pub fn exp(&self, v: usize) -> i32 {
        self.0[v] as i32
    }

    pub fn x_exp(&self, i: usize) -> i32 {
        self.0[VAR_X0 + i] as i32
    }

    pub fn x_part(&self) -> Mono {
        let mut m = *self;
        m.0[..VAR_X0].fill(0);
        m
    }

    pub fn param_part(&self) -> Mono {
        let mut m = Mono::ONE;
        m.0[..VAR_X0].copy_from_slice(&self.0[..VAR_X0]);
        m
    }

    pub fn is_param_only(&self) -> bool {
        self.0[VAR_X0..].iter().all(|&e| e == 0)
    }

    fn param_degree(&self) -> i32 {
        self.0[..VAR_X0].iter().map(|&e| e as i32).sum()
    }
}

fn narrow(e: i32) -> i16 {
    i16::try_from(e).expect("exponent overflow")
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0[VAR_X0..]
            .cmp(&other.0[VAR_X0..])
            .then_with(|| self.param_degree().cmp(&other.param_degree()))
            .then_with(|| self.0[..VAR_X0].cmp(&other.0[..VAR_X0]))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: terms sorted ascending in monomial order, no zero
/// coefficients. The empty term list is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: Vec<(Mono, Int)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::monomial(Mono::ONE, Int::ONE)
    }

    pub fn constant(c: impl Into<Int>) -> Poly {
        Poly::monomial(Mono::ONE, c.into())
    }

    pub fn monomial(m: Mono, c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn mono(m: Mono) -> Poly {
        Poly::monomial(m, Int::ONE)
    }

    /// `1 - c * m` for a signed unit coefficient.
    pub fn one_minus(m: Mono) -> Poly {
        Poly::one().sub(&Poly::mono(m))
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Int)>) -> Poly {
        let mut acc: FxHashMap<Mono, Int> = FxHashMap::default();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            acc.entry(m).and_modify(|e| *e += &c).or_insert(c);
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Mono, Int>) -> Poly {
        let mut terms: Vec<(Mono, Int)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The single term if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Mono, &Int)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn is_param_only(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_param_only())
    }

    pub fn first(&self) -> Option<&(Mono, Int)> {
        self.terms.first()
    }

    pub fn last(&self) -> Option<&(Mono, Int)> {
        self.terms.last()
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, if negate { -&b[j].1 } else { b[j].1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            out.push((t.0, if negate { -&t.1 } else { t.1.clone() }));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some((m, c)) = o.as_monomial() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return o.mul_term(m, c);
        }
        let mut acc: FxHashMap<Mono, Int> =
            FxHashMap::with_capacity_and_hasher(self.len() * o.len(), Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let c = ca * cb;
                acc.entry(ma.mul(mb)).and_modify(|e| *e += &c).or_insert(c);
            }
        }
        Poly::from_map(acc)
    }

    /// Multiplication by a single term; monomial multiplication preserves the
    /// order, so no re-sorting is needed.
    pub fn mul_term(&self, m: &Mono, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.clone())).collect() }
    }

    pub fn scale(&self, c: &Int) -> Poly {
        self.mul_term(&Mono::ONE, c)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Applies a monomial map term by term, then recombines.
    pub fn map_monomials(&self, f: impl Fn(&Mono) -> Mono) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Integer content (gcd of coefficients), positive.
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_int_exact(&self, c: &Int) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, cc)| (*m, cc.div_exact(c))).collect() }
    }

    /// Exact quotient by `1 - s*m` with `s = ±1` and `m != 1`, or `None` when
    /// the division leaves a remainder.
    ///
    /// Terms are grouped into cosets of the lattice line spanned by `m`; each
    /// coset is a univariate Laurent polynomial in `m` and is divided
    /// synthetically.
    pub fn div_one_minus(&self, m: &Mono, s: i32) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let pivot = (0..NVARS).find(|&v| m.0[v] != 0).expect("binomial with trivial monomial");
        let step = m.0[pivot] as i32;
        let mut cosets: FxHashMap<Mono, Vec<(i32, Int)>> = FxHashMap::default();
        for (mm, c) in &self.terms {
            let k = (mm.0[pivot] as i32).div_euclid(step);
            let rep = mm.div(&m.pow(k));
            cosets.entry(rep).or_default().push((k, c.clone()));
        }
        let mut out: Vec<(Mono, Int)> = Vec::with_capacity(self.len());
        for (rep, mut chain) in cosets {
            chain.sort_unstable_by_key(|t| t.0);
            // a_k = b_k - s*b_{k-1}  =>  b_k = a_k + s*b_{k-1}
            let lo = chain[0].0;
            let hi = chain[chain.len() - 1].0;
            let mut prev = Int::ZERO;
            let mut idx = 0;
            for k in lo..=hi {
                let mut a = Int::ZERO;
                if idx < chain.len() && chain[idx].0 == k {
                    a = std::mem::replace(&mut chain[idx].1, Int::ZERO);
                    idx += 1;
                }
                let b = if s > 0 { &a + &prev } else { &a - &prev };
                if k == hi {
                    if !b.is_zero() {
                        return None;
                    }
                } else if !b.is_zero() {
                    out.push((rep.mul(&m.pow(k)), b.clone()));
                }
                prev = b;
            }
        }
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Some(Poly { terms: out })
    }

    /// If this polynomial is `u * (1 - s*m)` for a unit `u = c*M`, returns
    /// `(m, s)`; used to route binomial divisors to the fast path.
    pub fn as_normalized_binomial(&self) -> Option<(Mono, i32)> {
        match self.terms.as_slice() {
            [(m0, c0), (m1, c1)] if m0.is_one() && c0.is_one() => {
                if c1.is_one() {
                    Some((*m1, -1))
                } else if (-c1).is_one() {
                    Some((*m1, 1))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Exact division by an arbitrary nonzero polynomial; `None` if it does
    /// not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some((m, c)) = d.as_monomial() {
            if self.terms.iter().all(|(_, cc)| cc.is_divisible_by(c)) {
                let inv = m.inv();
                return Some(Poly {
                    terms: self.terms.iter().map(|(mm, cc)| (mm.mul(&inv), cc.div_exact(c))).collect(),
                });
            }
            return None;
        }
        // Shift the divisor so that its lowest term is a bare integer; the
        // candidate binomial path avoids the long division below.
        let (dlo, _) = d.first().unwrap();
        let shift = dlo.inv();
        let mut dn = d.mul_mono(&shift);
        let flip = dn.first().unwrap().1.is_negative();
        if flip {
            dn = dn.neg();
        }
        if let Some((m, s)) = dn.as_normalized_binomial() {
            return self.div_one_minus(&m, s).map(|q| {
                let q = q.mul_mono(&shift);
                if flip {
                    q.neg()
                } else {
                    q
                }
            });
        }
        // Long division from the top. If the division is exact, the Newton
        // polytope of the quotient is that of self minus that of d, so each
        // exponent of the quotient lies in a known box; leaving it means the
        // division is not exact, and the box bounds the loop.
        let (dhi, dhc) = d.last().unwrap().clone();
        let (lo_s, hi_s) = self.exponent_box();
        let (lo_d, hi_d) = d.exponent_box();
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, Int)> = Vec::new();
        while let Some((rm, rc)) = rem.last().cloned() {
            if !rc.is_divisible_by(&dhc) {
                return None;
            }
            let qm = rm.div(&dhi);
            let inside = (0..NVARS).all(|v| {
                let e = i32::from(qm.0[v]);
                e >= i32::from(lo_s[v]) - i32::from(lo_d[v]) && e <= i32::from(hi_s[v]) - i32::from(hi_d[v])
            });
            if !inside {
                return None;
            }
            let qc = rc.div_exact(&dhc);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Per-variable minimum and maximum exponents over the terms.
    fn exponent_box(&self) -> ([i16; NVARS], [i16; NVARS]) {
        let mut lo = [i16::MAX; NVARS];
        let mut hi = [i16::MIN; NVARS];
        for (m, _) in &self.terms {
            for v in 0..NVARS {
                lo[v] = lo[v].min(m.0[v]);
                hi[v] = hi[v].max(m.0[v]);
            }
        }
        (lo, hi)
    }

    /// Evaluates under a variable assignment modulo `p`; `vals[v]` holds the
    /// residue of variable `v` and `invs[v]` its inverse.
    pub fn eval_mod(&self, p: u64, vals: &[u64; NVARS], invs: &[u64; NVARS]) -> u64 {
        let mut acc: u64 = 0;
        for (m, c) in &self.terms {
            let mut t = c.rem_u64(p);
            for v in 0..NVARS {
                let e = m.0[v];
                if e > 0 {
                    t = super::modp::mul_mod(t, super::modp::pow_mod(vals[v], e as u64, p), p);
                } else if e < 0 {
                    t = super::modp::mul_mod(t, super::modp::pow_mod(invs[v], (-e) as u64, p), p);
                }
            }
            acc = super::modp::add_mod(acc, t, p);
        }
        acc
    }
}

/// Canonical text rendering: terms in canonical order, `c*q^a*ts^b*tl^c*X1^d...`.
pub fn render_mono(m: &Mono, f: &mut impl fmt::Write) -> fmt::Result {
    let names = ["q", "ts", "tl"];
    let mut first = true;
    for v in 0..NVARS {
        let e = m.0[v];
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        if v < VAR_X0 {
            f.write_str(names[v])?;
        } else {
            write!(f, "X{}", v - VAR_X0 + 1)?;
        }
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    if first {
        f.write_char('1')?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                render_mono(m, f)?;
            }
        }
        Ok(())
    }
}

use std::fmt::Write as _;

/// Parses the canonical rendering produced by `Display`.
pub fn parse_poly(s: &str) -> Result<Poly, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(Poly::zero());
    }
    let mut terms = Vec::new();
    let mut rest = s;
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    }
    loop {
        let (tok, next) = match (rest.find(" + "), rest.find(" - ")) {
            (Some(a), Some(b)) if a < b => (&rest[..a], Some((1i64, &rest[a + 3..]))),
            (Some(_), Some(b)) => (&rest[..b], Some((-1i64, &rest[b + 3..]))),
            (Some(a), None) => (&rest[..a], Some((1i64, &rest[a + 3..]))),
            (None, Some(b)) => (&rest[..b], Some((-1i64, &rest[b + 3..]))),
            (None, None) => (rest, None),
        };
        let (m, c) = parse_term(tok)?;
        terms.push((m, if sign < 0 { -c } else { c }));
        match next {
            Some((sg, r)) => {
                sign = sg;
                rest = r;
            }
            None => break,
        }
    }
    Ok(Poly::from_terms(terms))
}

fn parse_term(tok: &str) -> Result<(Mono, Int), String> {
    let mut coeff = Int::ONE;
    let mut m = Mono::ONE;
    for (i, factor) in tok.split('*').enumerate() {
        if i == 0 && factor.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            coeff = factor.parse().map_err(|e| format!("bad coefficient {factor:?}: {e}"))?;
            continue;
        }
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (n, e.parse::<i32>().map_err(|e| format!("bad exponent in {factor:?}: {e}"))?),
            None => (factor, 1),
        };
        let v = match name {
            "q" => VAR_Q,
            "ts" => VAR_TS,
            "tl" => VAR_TL,
            x if x.starts_with('X') => {
                let i: usize = x[1..].parse().map_err(|_| format!("bad variable {x:?}"))?;
                if i == 0 || i > MAX_RANK {
                    return Err(format!("variable index out of range: {x}"));
                }
                VAR_X0 + i - 1
            }
            other => return Err(format!("unknown variable {other:?}")),
        };
        m.0[v] = m.0[v].checked_add(narrow(e)).ok_or("exponent overflow")?;
    }
    Ok((m, coeff))
}
