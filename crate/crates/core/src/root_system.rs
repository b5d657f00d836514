//! The root system C_n, its Weyl group of signed permutations, coweights and
//! translation lengths.

use std::fmt;
use std::str::FromStr;

use crate::arith::MAX_RANK;

/// An integer vector in the `epsilon` basis (roots, weights of monomials).
pub type IVec = Vec<i32>;

pub fn pair(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A vector of `(1/2) Z^n`, stored doubled.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HalfVec {
    n: u8,
    doubled: [i32; MAX_RANK],
}

impl HalfVec {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_RANK);
        HalfVec { n: n as u8, doubled: [0; MAX_RANK] }
    }

    pub fn from_doubled(d: &[i32]) -> Self {
        let mut h = HalfVec::zero(d.len());
        h.doubled[..d.len()].copy_from_slice(d);
        h
    }

    pub fn from_int(v: &[i32]) -> Self {
        let d: Vec<i32> = v.iter().map(|x| 2 * x).collect();
        HalfVec::from_doubled(&d)
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    pub fn doubled(&self) -> &[i32] {
        &self.doubled[..self.n as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&x| x == 0)
    }

    /// `2 (self, mu)`, always an integer.
    pub fn pair2(&self, mu: &[i32]) -> i32 {
        pair(self.doubled(), mu)
    }

    pub fn add(&self, o: &HalfVec) -> HalfVec {
        let mut r = *self;
        for i in 0..MAX_RANK {
            r.doubled[i] += o.doubled[i];
        }
        r
    }

    pub fn sub(&self, o: &HalfVec) -> HalfVec {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> HalfVec {
        let mut r = *self;
        for x in r.doubled.iter_mut() {
            *x = -*x;
        }
        r
    }

    pub fn scale(&self, k: i32) -> HalfVec {
        let mut r = *self;
        for x in r.doubled.iter_mut() {
            *x *= k;
        }
        r
    }

    /// Membership in `P^vee = { lambda : (lambda, alpha_i) in Z }`, i.e. all
    /// doubled coordinates share one parity.
    pub fn in_coweight_lattice(&self) -> bool {
        let d = self.doubled();
        d.iter().all(|x| x.rem_euclid(2) == d[0].rem_euclid(2))
    }

    /// `(self, alpha)` for an integer vector; `None` if not an integer.
    pub fn pair_int(&self, alpha: &[i32]) -> Option<i32> {
        let p = self.pair2(alpha);
        (p % 2 == 0).then_some(p / 2)
    }
}

impl fmt::Display for HalfVec {
    /// Doubled coordinates, e.g. `[3,1]` for `(3/2, 1/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.doubled().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for HalfVec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or("expected [..]")?;
        let d: Result<Vec<i32>, _> = inner.split(',').map(|x| x.trim().parse::<i32>()).collect();
        let d = d.map_err(|e| format!("bad shift {s:?}: {e}"))?;
        if d.is_empty() || d.len() > MAX_RANK {
            return Err(format!("bad rank in {s:?}"));
        }
        Ok(HalfVec::from_doubled(&d))
    }
}

/// A signed permutation: `w(eps_i) = sign_i * eps_{perm_i}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElem {
    n: u8,
    perm: [u8; MAX_RANK],
    neg: u8,
}

impl WeylElem {
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&n), "rank out of range");
        let mut perm = [0u8; MAX_RANK];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i as u8;
        }
        WeylElem { n: n as u8, perm, neg: 0 }
    }

    /// From images: `images[i] = ±(j+1)` means `eps_{i+1} -> ±eps_{j+1}`.
    pub fn from_images(images: &[i32]) -> Option<Self> {
        let n = images.len();
        if n == 0 || n > MAX_RANK {
            return None;
        }
        let mut w = WeylElem::identity(n);
        let mut seen = [false; MAX_RANK];
        for (i, &x) in images.iter().enumerate() {
            let j = x.unsigned_abs() as usize;
            if j == 0 || j > n || seen[j - 1] {
                return None;
            }
            seen[j - 1] = true;
            w.perm[i] = (j - 1) as u8;
            if x < 0 {
                w.neg |= 1 << i;
            }
        }
        Some(w)
    }

    pub fn rank(&self) -> usize {
        self.n as usize
    }

    fn sign(&self, i: usize) -> i32 {
        if self.neg >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Simple reflection `s_i`, `1 <= i <= n`.
    pub fn simple(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        let mut w = WeylElem::identity(n);
        if i < n {
            w.perm.swap(i - 1, i);
        } else {
            w.neg = 1 << (n - 1);
        }
        w
    }

    /// The longest element, `-id` in type C.
    pub fn longest(n: usize) -> Self {
        let mut w = WeylElem::identity(n);
        w.neg = ((1u16 << n) - 1) as u8;
        w
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElem::identity(self.rank())
    }

    pub fn act(&self, v: &[i32]) -> IVec {
        let n = self.rank();
        let mut r = vec![0; n];
        for i in 0..n {
            r[self.perm[i] as usize] = self.sign(i) * v[i];
        }
        r
    }

    pub fn act_half(&self, v: &HalfVec) -> HalfVec {
        HalfVec::from_doubled(&self.act(v.doubled()))
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &WeylElem) -> WeylElem {
        let n = self.rank();
        let mut r = WeylElem::identity(n);
        for i in 0..n {
            let j = o.perm[i] as usize;
            r.perm[i] = self.perm[j];
            if o.sign(i) * self.sign(j) < 0 {
                r.neg |= 1 << i;
            }
        }
        r
    }

    pub fn inverse(&self) -> WeylElem {
        let n = self.rank();
        let mut r = WeylElem::identity(n);
        for i in 0..n {
            let j = self.perm[i] as usize;
            r.perm[j] = i as u8;
            if self.sign(i) < 0 {
                r.neg |= 1 << j;
            }
        }
        r
    }

    /// Determinant of the signed permutation matrix.
    pub fn sgn(&self) -> i32 {
        let n = self.rank();
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.perm[i] > self.perm[j] {
                    inversions += 1;
                }
            }
        }
        let negs = self.neg.count_ones();
        if (inversions + negs) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Image of `eps_i` as a signed 1-based index.
    pub fn image(&self, i: usize) -> i32 {
        self.sign(i) * (self.perm[i] as i32 + 1)
    }
}

impl fmt::Display for WeylElem {
    /// One-line notation with signs, e.g. `[+2,-1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rank() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{:+}", self.image(i))?;
        }
        f.write_str("]")
    }
}

impl FromStr for WeylElem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or("expected [..]")?;
        let images: Result<Vec<i32>, _> = inner.split(',').map(|x| x.trim().parse::<i32>()).collect();
        let images = images.map_err(|e| format!("bad Weyl element {s:?}: {e}"))?;
        WeylElem::from_images(&images).ok_or_else(|| format!("not a signed permutation: {s:?}"))
    }
}

/// All `2^n n!` elements, in a fixed order (permutations in lexicographic
/// order, then sign masks ascending).
pub fn weyl_enumerate(n: usize) -> Vec<WeylElem> {
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        perms.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let mut out = Vec::with_capacity(perms.len() << n);
    for p in &perms {
        for mask in 0..(1u16 << n) {
            let mut w = WeylElem::identity(n);
            w.perm[..n].copy_from_slice(p);
            w.neg = mask as u8;
            out.push(w);
        }
    }
    out
}

pub fn is_positive(v: &[i32]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn neg(v: &[i32]) -> IVec {
    v.iter().map(|x| -x).collect()
}

/// The C_n root datum.
#[derive(Clone, Debug)]
pub struct RootSystemCn {
    pub n: usize,
    pub roots: Vec<IVec>,
    pub positive_roots: Vec<IVec>,
    pub simple_roots: Vec<IVec>,
    pub theta: IVec,
    pub omega_check: Vec<HalfVec>,
    pub rho_check: HalfVec,
    pub hat_r: Vec<IVec>,
}

impl RootSystemCn {
    pub fn build(n: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&n), "rank must be in 1..={MAX_RANK}");
        let e = |i: usize| -> IVec {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        let add = |a: &IVec, b: &IVec| -> IVec { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let mut positive_roots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                positive_roots.push(add(&e(i), &neg(&e(j))));
                positive_roots.push(add(&e(i), &e(j)));
            }
            positive_roots.push(e(i).iter().map(|x| 2 * x).collect());
        }
        positive_roots.sort_by(|a, b| b.cmp(a));
        let mut roots: Vec<IVec> = positive_roots.clone();
        roots.extend(positive_roots.iter().map(|a| neg(a)));
        let mut simple_roots: Vec<IVec> = (0..n - 1).map(|i| add(&e(i), &neg(&e(i + 1)))).collect();
        simple_roots.push(e(n - 1).iter().map(|x| 2 * x).collect());
        let theta: IVec = e(0).iter().map(|x| 2 * x).collect();
        let omega_check: Vec<HalfVec> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    let v: IVec = (0..n).map(|j| (j <= i) as i32).collect();
                    HalfVec::from_int(&v)
                } else {
                    HalfVec::from_doubled(&vec![1; n])
                }
            })
            .collect();
        let rho_check = omega_check.iter().fold(HalfVec::zero(n), |a, b| a.add(b));
        let hat_r = roots.iter().filter(|a| a.iter().sum::<i32>() == 2).cloned().collect();
        RootSystemCn { n, roots, positive_roots, simple_roots, theta, omega_check, rho_check, hat_r }
    }

    pub fn is_long(alpha: &[i32]) -> bool {
        pair(alpha, alpha) == 4
    }

    pub fn coroot(alpha: &[i32]) -> HalfVec {
        if Self::is_long(alpha) {
            HalfVec::from_doubled(alpha)
        } else {
            HalfVec::from_int(alpha)
        }
    }

    /// Coefficients of `alpha` in the simple-root basis.
    pub fn simple_coordinates(&self, alpha: &[i32]) -> IVec {
        let n = self.n;
        let mut out = vec![0; n];
        let mut partial = 0;
        for k in 0..n {
            partial += alpha[k];
            out[k] = if k + 1 < n { partial } else { partial / 2 };
        }
        out
    }

    pub fn height(&self, alpha: &[i32]) -> i32 {
        self.simple_coordinates(alpha).iter().sum()
    }

    /// Fundamental-coweight coordinates `(lambda, alpha_i)`.
    pub fn coweight_coordinates(&self, lambda: &HalfVec) -> Result<IVec, RootError> {
        if !lambda.in_coweight_lattice() {
            return Err(RootError::NotInCoweightLattice(*lambda));
        }
        Ok(self.simple_roots.iter().map(|a| lambda.pair_int(a).unwrap()).collect())
    }

    /// Length of the translation `tau(lambda)`: `sum_{alpha > 0} |(lambda, alpha)|`.
    pub fn tau_length(&self, lambda: &HalfVec) -> Result<u32, RootError> {
        if !lambda.in_coweight_lattice() {
            return Err(RootError::NotInCoweightLattice(*lambda));
        }
        Ok(self.positive_roots.iter().map(|a| lambda.pair_int(a).unwrap().unsigned_abs()).sum())
    }

    /// Strict comparison of translation lengths.
    pub fn precede(&self, lambda: &HalfVec, mu: &HalfVec) -> Result<bool, RootError> {
        Ok(self.tau_length(lambda)? < self.tau_length(mu)?)
    }

    /// `(w(R^) ∩ R+, -w(R^) ∩ R+)`.
    pub fn hat_r_sets(&self, w: &WeylElem) -> (Vec<IVec>, Vec<IVec>) {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for a in &self.hat_r {
            let img = w.act(a);
            if is_positive(&img) {
                plus.push(img);
            } else {
                minus.push(neg(&img));
            }
        }
        plus.sort_by(|a, b| b.cmp(a));
        minus.sort_by(|a, b| b.cmp(a));
        (plus, minus)
    }

    pub fn weyl(&self) -> Vec<WeylElem> {
        weyl_enumerate(self.n)
    }

    pub fn w0(&self) -> WeylElem {
        WeylElem::longest(self.n)
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum RootError {
    #[error("{0} is not in the coweight lattice")]
    NotInCoweightLattice(HalfVec),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_data() {
        let rs = RootSystemCn::build(2);
        assert_eq!(rs.positive_roots, vec![vec![2, 0], vec![1, 1], vec![1, -1], vec![0, 2]]);
        assert_eq!(rs.theta, vec![2, 0]);
        assert_eq!(rs.simple_coordinates(&rs.theta), vec![2, 1]);
        assert_eq!(rs.height(&rs.theta), 3);
        assert_eq!(rs.rho_check, HalfVec::from_doubled(&[3, 1]));
        assert_eq!(rs.omega_check[1], HalfVec::from_doubled(&[1, 1]));
        let mut hat: Vec<_> = rs.hat_r.clone();
        hat.sort();
        assert_eq!(hat, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn structural_invariants() {
        for n in 1..=4 {
            let rs = RootSystemCn::build(n);
            assert_eq!(rs.positive_roots.len(), n * n);
            assert_eq!(rs.hat_r.len(), n * (n + 1) / 2);
            for a in &rs.simple_roots {
                assert_eq!(rs.height(a), 1);
                assert_eq!(rs.rho_check.pair_int(a), Some(1));
            }
            assert_eq!(rs.height(&rs.theta), 2 * n as i32 - 1);
            // rho = half the sum of positive coroots
            let sum = rs.positive_roots.iter().fold(HalfVec::zero(n), |s, a| s.add(&RootSystemCn::coroot(a)));
            assert_eq!(sum, rs.rho_check.scale(2));
            for a in &rs.positive_roots {
                assert!(rs.height(a) >= 1);
            }
        }
    }

    #[test]
    fn weyl_group_basics() {
        let w = weyl_enumerate(2);
        assert_eq!(w.len(), 8);
        assert_eq!(weyl_enumerate(3).len(), 48);
        let s2 = WeylElem::simple(2, 2);
        assert_eq!(s2.act(&[3, 5]), vec![3, -5]);
        assert_eq!(s2.sgn(), -1);
        assert_eq!(WeylElem::simple(2, 1).sgn(), -1);
        let w0 = WeylElem::longest(2);
        assert_eq!(w0.act(&[1, 2]), vec![-1, -2]);
        assert_eq!(w0.sgn(), 1);
        assert!(w0.compose(&w0).is_identity());
    }

    #[test]
    fn sgn_is_a_homomorphism_and_action_is_orthogonal() {
        let ws = weyl_enumerate(2);
        for a in &ws {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in &ws {
                assert_eq!(a.compose(b).sgn(), a.sgn() * b.sgn());
                let v = [3, -7];
                assert_eq!(a.compose(b).act(&v), a.act(&b.act(&v)));
                assert_eq!(pair(&a.act(&v), &a.act(&[2, 5])), pair(&v, &[2, 5]));
            }
        }
        let ws3 = weyl_enumerate(3);
        for (i, a) in ws3.iter().enumerate().step_by(5) {
            let b = &ws3[(i * 7 + 3) % ws3.len()];
            assert_eq!(a.compose(b).sgn(), a.sgn() * b.sgn());
        }
    }

    #[test]
    fn coroot_equivariance() {
        let rs = RootSystemCn::build(3);
        for w in weyl_enumerate(3) {
            for a in &rs.roots {
                assert_eq!(RootSystemCn::coroot(&w.act(a)), w.act_half(&RootSystemCn::coroot(a)));
            }
        }
    }

    #[test]
    fn text_form() {
        let w = WeylElem::from_images(&[2, -1]).unwrap();
        assert_eq!(w.to_string(), "[+2,-1]");
        assert_eq!(w.act(&[1, 0]), vec![0, 1]);
        assert_eq!(w.act(&[0, 1]), vec![-1, 0]);
        assert_eq!("[+2,-1]".parse::<WeylElem>().unwrap(), w);
        assert!("[+1,+1]".parse::<WeylElem>().is_err());
        assert_eq!("[3,1]".parse::<HalfVec>().unwrap(), HalfVec::from_doubled(&[3, 1]));
    }

    #[test]
    fn hat_r_partition() {
        let rs = RootSystemCn::build(2);
        let (p, m) = rs.hat_r_sets(&WeylElem::identity(2));
        assert_eq!(p.len(), 3);
        assert!(m.is_empty());
        let (p, m) = rs.hat_r_sets(&WeylElem::simple(2, 2));
        assert_eq!(p, vec![vec![2, 0], vec![1, -1]]);
        assert_eq!(m, vec![vec![0, 2]]);
        let (p, m) = rs.hat_r_sets(&rs.w0());
        assert!(p.is_empty());
        assert_eq!(m.len(), 3);
        for w in rs.weyl() {
            let (p, m) = rs.hat_r_sets(&w);
            assert_eq!(p.len() + m.len(), rs.hat_r.len());
        }
    }

    #[test]
    fn translation_lengths() {
        let rs = RootSystemCn::build(2);
        assert_eq!(rs.tau_length(&HalfVec::zero(2)).unwrap(), 0);
        assert_eq!(rs.tau_length(&rs.omega_check[1]).unwrap(), 3);
        assert_eq!(rs.tau_length(&rs.rho_check).unwrap(), 7);
        assert!(rs.precede(&rs.omega_check[1], &rs.rho_check).unwrap());
        let bad = HalfVec::from_doubled(&[1, 0]);
        assert!(matches!(rs.tau_length(&bad), Err(RootError::NotInCoweightLattice(_))));
    }

    #[test]
    fn omega_n_orbit() {
        let rs = RootSystemCn::build(3);
        let mut orbit: Vec<HalfVec> = rs.weyl().iter().map(|w| w.act_half(&rs.omega_check[2])).collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit.len(), 8);
        assert!(orbit.iter().all(|l| l.in_coweight_lattice()));
    }
}
