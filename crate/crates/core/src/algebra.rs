//! The general linear superalgebra gl(m|n) and its parabolic structure.
//!
//! gl(m|n) is realized on the basis of matrix units `E_ij` (1 ≤ i,j ≤ m+n)
//! with parity `[i]+[j]`, where `[k]` is even for `k ≤ m` and odd for
//! `k > m`. The supercommutator, the normalized Killing form
//! `(E_kl, E_ij) = (-1)^{[k]} δ_kj δ_li`, star maps, and the splitting
//! `g = nbar + g0 + n` for a parabolic given by a set of Levi simple roots
//! all live here, together with the brute-force checker for the two
//! admissibility conditions on triples.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Mat;
use crate::scalar::{fmt_q, q, q0, q1, Q};
use num_traits::Zero;

/// Z_2 parity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_sum(evens: usize) -> Parity {
        if evens % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_sum((self.bit() + other.bit()) as usize)
    }

    /// `(-1)^{|a||b|}`.
    pub fn koszul(self, other: Parity) -> Q {
        if self == Parity::Odd && other == Parity::Odd {
            q(-1)
        } else {
            q(1)
        }
    }

    pub fn sign(self) -> Q {
        match self {
            Parity::Even => q(1),
            Parity::Odd => q(-1),
        }
    }
}

/// A weight in the ε-basis of the Cartan dual: m+n rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Weight(pub Vec<Q>);

impl Weight {
    pub fn zero(len: usize) -> Weight {
        Weight(vec![q0(); len])
    }

    pub fn epsilon(len: usize, i: usize) -> Weight {
        let mut w = Weight::zero(len);
        w.0[i] = q1();
        w
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Canonical comma-separated rendering, e.g. `1,-1/2,0`.
    pub fn render(&self) -> String {
        self.0.iter().map(fmt_q).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render())
    }
}

/// Errors from algebra-level operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    ParseError(String),
    NoKillingDualStarBasis(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DimensionMismatch { left, right } => write!(
                f,
                "algebra dimension mismatch: gl({}|{}) vs gl({}|{})",
                left.0, left.1, right.0, right.1
            ),
            AlgebraError::ParseError(s) => write!(f, "parse error: {s}"),
            AlgebraError::NoKillingDualStarBasis(s) => {
                write!(f, "no Killing-dual star basis: {s}")
            }
        }
    }
}

impl std::error::Error for AlgebraError {}

/// The Lie superalgebra gl(m|n).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gl {
    pub m: usize,
    pub n: usize,
}

/// A basis matrix unit `E_ij`, 0-based indices.
pub type BasisIdx = (usize, usize);

impl Gl {
    pub fn new(m: usize, n: usize) -> Gl {
        Gl { m, n }
    }

    pub fn size(&self) -> usize {
        self.m + self.n
    }

    pub fn dim(&self) -> usize {
        self.size() * self.size()
    }

    /// Parse `gl:M|N`.
    pub fn parse(s: &str) -> Result<Gl, AlgebraError> {
        let body = s
            .strip_prefix("gl:")
            .ok_or_else(|| AlgebraError::ParseError(format!("expected gl:M|N, got {s:?}")))?;
        let (ms, ns) = body
            .split_once('|')
            .ok_or_else(|| AlgebraError::ParseError(format!("expected gl:M|N, got {s:?}")))?;
        let m = ms
            .parse::<usize>()
            .map_err(|_| AlgebraError::ParseError(format!("bad block size {ms:?}")))?;
        let n = ns
            .parse::<usize>()
            .map_err(|_| AlgebraError::ParseError(format!("bad block size {ns:?}")))?;
        Ok(Gl::new(m, n))
    }

    pub fn render(&self) -> String {
        format!("gl:{}|{}", self.m, self.n)
    }

    /// Parity of the index `k` (0-based): even for k < m.
    pub fn index_parity(&self, k: usize) -> Parity {
        if k < self.m {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of `E_ij`.
    pub fn basis_parity(&self, (i, j): BasisIdx) -> Parity {
        self.index_parity(i).add(self.index_parity(j))
    }

    /// Weight of `E_ij` is `ε_i - ε_j`.
    pub fn basis_weight(&self, (i, j): BasisIdx) -> Weight {
        let mut w = Weight::zero(self.size());
        w.0[i] = &w.0[i] + &q1();
        w.0[j] = &w.0[j] - &q1();
        w
    }

    /// All basis index pairs in row-major order.
    pub fn basis(&self) -> Vec<BasisIdx> {
        let s = self.size();
        (0..s).flat_map(|i| (0..s).map(move |j| (i, j))).collect()
    }

    /// Supercommutator of two basis elements:
    /// `[E_ij, E_kl] = δ_jk E_il - (-1)^{|E_ij||E_kl|} δ_li E_kj`.
    pub fn bracket_basis(&self, a: BasisIdx, b: BasisIdx) -> Vec<(BasisIdx, Q)> {
        let (i, j) = a;
        let (k, l) = b;
        let mut out: Vec<(BasisIdx, Q)> = Vec::with_capacity(2);
        if j == k {
            out.push(((i, l), q1()));
        }
        if l == i {
            let s = -self.basis_parity(a).koszul(self.basis_parity(b));
            if let Some(entry) = out.iter_mut().find(|(idx, _)| *idx == (k, j)) {
                entry.1 = &entry.1 + &s;
            } else {
                out.push(((k, j), s));
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    /// Normalized Killing form `(E_kl, E_ij) = (-1)^{[k]} δ_kj δ_li`.
    pub fn killing_basis(&self, (k, l): BasisIdx, (i, j): BasisIdx) -> Q {
        if k == j && l == i {
            self.index_parity(k).sign()
        } else {
            q0()
        }
    }

    /// Verifies super-antisymmetry, the super Jacobi identity and Killing
    /// invariance on all basis pairs/triples. Returns the first violation.
    pub fn check_axioms(&self) -> Result<(), String> {
        let basis = self.basis();
        for &a in &basis {
            for &b in &basis {
                let ab = Elem::from_terms(self, self.bracket_basis(a, b));
                let ba = Elem::from_terms(self, self.bracket_basis(b, a));
                let koszul = self.basis_parity(a).koszul(self.basis_parity(b));
                if ab.add(&ba.scale(&koszul)) != Elem::zero(self) {
                    return Err(format!("antisymmetry fails at E{a:?}, E{b:?}"));
                }
            }
        }
        for &a in &basis {
            for &b in &basis {
                for &c in &basis {
                    // (-1)^{|a||c|}[a,[b,c]] + (-1)^{|b||a|}[b,[c,a]] + (-1)^{|c||b|}[c,[a,b]] = 0
                    let pa = self.basis_parity(a);
                    let pb = self.basis_parity(b);
                    let pc = self.basis_parity(c);
                    let t1 = self
                        .bracket_elem(&Elem::basis(self, a), &self.bracket_elem_basis(b, c))
                        .scale(&pa.koszul(pc));
                    let t2 = self
                        .bracket_elem(&Elem::basis(self, b), &self.bracket_elem_basis(c, a))
                        .scale(&pb.koszul(pa));
                    let t3 = self
                        .bracket_elem(&Elem::basis(self, c), &self.bracket_elem_basis(a, b))
                        .scale(&pc.koszul(pb));
                    if t1.add(&t2).add(&t3) != Elem::zero(self) {
                        return Err(format!("super Jacobi fails at E{a:?}, E{b:?}, E{c:?}"));
                    }
                }
            }
        }
        for &a in &basis {
            for &b in &basis {
                for &c in &basis {
                    let lhs: Q = self
                        .bracket_basis(a, b)
                        .iter()
                        .map(|(idx, co)| co * &self.killing_basis(*idx, c))
                        .sum();
                    let rhs: Q = self
                        .bracket_basis(b, c)
                        .iter()
                        .map(|(idx, co)| co * &self.killing_basis(a, *idx))
                        .sum();
                    if lhs != rhs {
                        return Err(format!("Killing invariance fails at E{a:?}, E{b:?}, E{c:?}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn bracket_elem_basis(&self, a: BasisIdx, b: BasisIdx) -> Elem {
        Elem::from_terms(self, self.bracket_basis(a, b))
    }

    /// Bilinear extension of the supercommutator.
    pub fn bracket_elem(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::zero(self);
        for (ia, ca) in &a.coeffs {
            for (ib, cb) in &b.coeffs {
                for (idx, s) in self.bracket_basis(*ia, *ib) {
                    out.add_term(idx, &(&s * &(ca * cb)));
                }
            }
        }
        out
    }

    /// Bilinear extension of the Killing form, with a dimension guard.
    pub fn killing_elem(&self, a: &Elem, b: &Elem) -> Result<Q, AlgebraError> {
        if a.alg != (self.m, self.n) || b.alg != (self.m, self.n) {
            return Err(AlgebraError::DimensionMismatch {
                left: a.alg,
                right: b.alg,
            });
        }
        let mut out = q0();
        for (ia, ca) in &a.coeffs {
            for (ib, cb) in &b.coeffs {
                let k = self.killing_basis(*ia, *ib);
                if !k.is_zero() {
                    out = &out + &(&k * &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    /// Supercommutator with the dimension guard required by the contract.
    pub fn bracket(&self, a: &Elem, b: &Elem) -> Result<Elem, AlgebraError> {
        if a.alg != (self.m, self.n) || b.alg != (self.m, self.n) {
            return Err(AlgebraError::DimensionMismatch {
                left: a.alg,
                right: b.alg,
            });
        }
        Ok(self.bracket_elem(a, b))
    }
}

/// An element of gl(m|n): finitely supported rational combination of `E_ij`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elem {
    /// (m, n) of the owning algebra, for mismatch detection.
    pub alg: (usize, usize),
    pub coeffs: BTreeMap<BasisIdx, Q>,
}

impl Elem {
    pub fn zero(gl: &Gl) -> Elem {
        Elem {
            alg: (gl.m, gl.n),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(gl: &Gl, idx: BasisIdx) -> Elem {
        let mut e = Elem::zero(gl);
        e.coeffs.insert(idx, q1());
        e
    }

    pub fn from_terms(gl: &Gl, terms: Vec<(BasisIdx, Q)>) -> Elem {
        let mut e = Elem::zero(gl);
        for (idx, c) in terms {
            e.add_term(idx, &c);
        }
        e
    }

    pub fn add_term(&mut self, idx: BasisIdx, c: &Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(idx).or_insert_with(q0);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(*idx, c);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Elem {
        if c.is_zero() {
            return Elem {
                alg: self.alg,
                coeffs: BTreeMap::new(),
            };
        }
        Elem {
            alg: self.alg,
            coeffs: self.coeffs.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Parity when homogeneous; `None` for mixed or zero elements.
    pub fn parity(&self, gl: &Gl) -> Option<Parity> {
        let mut p = None;
        for idx in self.coeffs.keys() {
            let bp = gl.basis_parity(*idx);
            match p {
                None => p = Some(bp),
                Some(prev) if prev != bp => return None,
                _ => {}
            }
        }
        p
    }

    pub fn weight(&self, gl: &Gl) -> Option<Weight> {
        let mut w = None;
        for idx in self.coeffs.keys() {
            let bw = gl.basis_weight(*idx);
            match &w {
                None => w = Some(bw),
                Some(prev) if *prev != bw => return None,
                _ => {}
            }
        }
        w
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|((i, j), c)| {
                if c == &q1() {
                    format!("E{},{}", i + 1, j + 1)
                } else {
                    format!("{}*E{},{}", fmt_q(c), i + 1, j + 1)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Star map variants on gl(m|n). All act by signed basis permutation, so
/// antilinearity is vacuous over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StarMap {
    /// `(E_ij)† = E_ji`.
    Natural,
    /// `(E_ij)† = (-1)^{[i]+[j]} E_ji`.
    DualNatural,
    /// `A ↦ (-1)^{|A|} A†` of the inner map.
    Dualized(Box<StarMap>),
}

impl StarMap {
    /// Parse `natural` | `dual` | `dualized:<star>`.
    pub fn parse(s: &str) -> Result<StarMap, AlgebraError> {
        match s {
            "natural" => Ok(StarMap::Natural),
            "dual" => Ok(StarMap::DualNatural),
            _ => {
                if let Some(inner) = s.strip_prefix("dualized:") {
                    Ok(StarMap::Dualized(Box::new(StarMap::parse(inner)?)))
                } else {
                    Err(AlgebraError::ParseError(format!("unknown star map {s:?}")))
                }
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            StarMap::Natural => "natural".into(),
            StarMap::DualNatural => "dual".into(),
            StarMap::Dualized(inner) => format!("dualized:{}", inner.render()),
        }
    }

    /// Image of a basis element: `(sign, E_ji)`.
    pub fn apply_basis(&self, gl: &Gl, (i, j): BasisIdx) -> (Q, BasisIdx) {
        match self {
            StarMap::Natural => (q1(), (j, i)),
            StarMap::DualNatural => (gl.basis_parity((i, j)).sign(), (j, i)),
            StarMap::Dualized(inner) => {
                let (s, idx) = inner.apply_basis(gl, (i, j));
                (&s * &gl.basis_parity((i, j)).sign(), idx)
            }
        }
    }

    /// Additive extension to elements.
    pub fn apply(&self, gl: &Gl, a: &Elem) -> Elem {
        let mut out = Elem::zero(gl);
        for (idx, c) in &a.coeffs {
            let (s, im) = self.apply_basis(gl, *idx);
            out.add_term(im, &(c * &s));
        }
        out
    }

    /// Involution and antimultiplicativity on all basis pairs.
    pub fn check_axioms(&self, gl: &Gl) -> Result<(), String> {
        for a in gl.basis() {
            let (s1, i1) = self.apply_basis(gl, a);
            let (s2, i2) = self.apply_basis(gl, i1);
            if i2 != a || &s1 * &s2 != q1() {
                return Err(format!("star not involutive at E{a:?}"));
            }
            if gl.basis_parity(a) != gl.basis_parity(i1) {
                return Err(format!("star not even at E{a:?}"));
            }
        }
        for a in gl.basis() {
            for b in gl.basis() {
                let lhs = self.apply(gl, &Elem::from_terms(gl, gl.bracket_basis(a, b)));
                let rhs = gl.bracket_elem(
                    &self.apply(gl, &Elem::basis(gl, b)),
                    &self.apply(gl, &Elem::basis(gl, a)),
                );
                if lhs != rhs {
                    return Err(format!("star not antimultiplicative at E{a:?}, E{b:?}"));
                }
            }
        }
        Ok(())
    }
}

/// Which of the two admissibility pairings to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConditionVariant {
    /// `(X_a†, X_b) = δ_ab`.
    NecCond,
    /// `(X_a†, X_b) = (-1)^{|X_a|} δ_ab`.
    NecCond2,
}

impl ConditionVariant {
    pub fn parse(s: &str) -> Result<ConditionVariant, AlgebraError> {
        match s {
            "neccond" => Ok(ConditionVariant::NecCond),
            "neccond2" => Ok(ConditionVariant::NecCond2),
            _ => Err(AlgebraError::ParseError(format!("unknown variant {s:?}"))),
        }
    }

    pub fn render(&self) -> &'static str {
        match self {
            ConditionVariant::NecCond => "neccond",
            ConditionVariant::NecCond2 => "neccond2",
        }
    }

    /// The sign attached to the pairing of the `a`-th dual pair.
    pub fn pairing_sign(&self, parity: Parity) -> Q {
        match self {
            ConditionVariant::NecCond => q1(),
            ConditionVariant::NecCond2 => parity.sign(),
        }
    }
}

/// The splitting `g = nbar + g0 + n` for a parabolic subalgebra containing
/// the standard Borel, encoded by the subset of simple roots in the Levi.
#[derive(Clone, Debug)]
pub struct Parabolic {
    pub gl: Gl,
    /// 1-based simple root indices generating the Levi part.
    pub levi_roots: Vec<usize>,
    /// Block id of each ε-index under the Levi partition.
    pub block: Vec<usize>,
    pub nbar_basis: Vec<BasisIdx>,
    pub g0_basis: Vec<BasisIdx>,
    pub n_basis: Vec<BasisIdx>,
}

impl Parabolic {
    pub fn new(gl: &Gl, levi_roots: &[usize]) -> Parabolic {
        let s = gl.size();
        let mut block = vec![0usize; s];
        let mut b = 0;
        for k in 1..s {
            // simple root k (1-based) connects indices k-1 and k (0-based)
            if !levi_roots.contains(&k) {
                b += 1;
            }
            block[k] = b;
        }
        let mut nbar_basis = Vec::new();
        let mut g0_basis = Vec::new();
        let mut n_basis = Vec::new();
        for (i, j) in gl.basis() {
            if block[i] == block[j] {
                g0_basis.push((i, j));
            } else if i < j {
                n_basis.push((i, j));
            } else {
                nbar_basis.push((i, j));
            }
        }
        let mut levi = levi_roots.to_vec();
        levi.sort_unstable();
        levi.dedup();
        Parabolic {
            gl: gl.clone(),
            levi_roots: levi,
            block,
            nbar_basis,
            g0_basis,
            n_basis,
        }
    }

    /// Parse `levi=i1,i2,...` (empty list means the Borel subalgebra).
    pub fn parse(gl: &Gl, s: &str) -> Result<Parabolic, AlgebraError> {
        let body = s
            .strip_prefix("levi=")
            .ok_or_else(|| AlgebraError::ParseError(format!("expected levi=..., got {s:?}")))?;
        let mut roots = Vec::new();
        if !body.is_empty() {
            for part in body.split(',') {
                let r = part
                    .parse::<usize>()
                    .map_err(|_| AlgebraError::ParseError(format!("bad root index {part:?}")))?;
                if r == 0 || r >= gl.size() {
                    return Err(AlgebraError::ParseError(format!(
                        "root index {r} out of range 1..={}",
                        gl.size() - 1
                    )));
                }
                roots.push(r);
            }
        }
        Ok(Parabolic::new(gl, &roots))
    }

    pub fn render(&self) -> String {
        format!(
            "levi={}",
            self.levi_roots
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }

    /// The ordered weight basis `{X_a}` of `n`.
    pub fn xa(&self) -> &[BasisIdx] {
        &self.n_basis
    }

    /// Star images `{X_a†}` as signed basis elements of `nbar`.
    pub fn xa_dagger(&self, star: &StarMap) -> Vec<(Q, BasisIdx)> {
        self.n_basis
            .iter()
            .map(|&idx| star.apply_basis(&self.gl, idx))
            .collect()
    }

    /// Basis of `p* = nbar + g0` (the T_κ of the Casimir construction).
    pub fn pstar_basis(&self) -> Vec<BasisIdx> {
        let mut v = self.nbar_basis.clone();
        v.extend(self.g0_basis.iter().copied());
        v
    }

    /// Basis of `p = g0 + n`.
    pub fn p_basis(&self) -> Vec<BasisIdx> {
        let mut v = self.g0_basis.clone();
        v.extend(self.n_basis.iter().copied());
        v
    }

    /// Membership tests by root-space classification.
    pub fn in_n(&self, idx: BasisIdx) -> bool {
        self.block[idx.0] != self.block[idx.1] && idx.0 < idx.1
    }

    pub fn in_nbar(&self, idx: BasisIdx) -> bool {
        self.block[idx.0] != self.block[idx.1] && idx.0 > idx.1
    }

    pub fn in_g0(&self, idx: BasisIdx) -> bool {
        self.block[idx.0] == self.block[idx.1]
    }

    /// Projection of an element onto n / g0 / nbar along the root-space split.
    pub fn project_n(&self, e: &Elem) -> Elem {
        self.project(e, |idx| self.in_n(idx))
    }

    pub fn project_nbar(&self, e: &Elem) -> Elem {
        self.project(e, |idx| self.in_nbar(idx))
    }

    pub fn project_g0(&self, e: &Elem) -> Elem {
        self.project(e, |idx| self.in_g0(idx))
    }

    pub fn project_pstar(&self, e: &Elem) -> Elem {
        self.project(e, |idx| self.in_g0(idx) || self.in_nbar(idx))
    }

    pub fn project_p(&self, e: &Elem) -> Elem {
        self.project(e, |idx| self.in_g0(idx) || self.in_n(idx))
    }

    fn project(&self, e: &Elem, keep: impl Fn(BasisIdx) -> bool) -> Elem {
        let mut out = Elem::zero(&self.gl);
        for (idx, c) in &e.coeffs {
            if keep(*idx) {
                out.add_term(*idx, c);
            }
        }
        out
    }

    /// Killing-dual basis of the combined basis `{X_a} ∪ {T_κ}`, with the
    /// pairing convention `(u_β, u_α‡)_K = δ_αβ`. Returns the duals in the
    /// combined order: first the duals of the X_a, then of the T_κ.
    pub fn killing_dual_basis(&self) -> Vec<Elem> {
        let mut combined: Vec<BasisIdx> = self.n_basis.clone();
        combined.extend(self.pstar_basis());
        let d = combined.len();
        debug_assert_eq!(d, self.gl.dim());
        let mut gram = Mat::zero(d, d);
        for (r, &u) in combined.iter().enumerate() {
            for (c, &v) in combined.iter().enumerate() {
                gram.set(r, c, self.gl.killing_basis(u, v));
            }
        }
        let inv = gram.inverse();
        (0..d)
            .map(|a| {
                let mut e = Elem::zero(&self.gl);
                for (g, &idx) in combined.iter().enumerate() {
                    e.add_term(idx, inv.at(g, a));
                }
                e
            })
            .collect()
    }
}

/// Outcome of the admissibility check for a triple.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub variant: ConditionVariant,
    /// Part (a): the invariance identity over all basis triples.
    pub invariance_ok: bool,
    /// First failing triple (A, X, Y) with the two pairing values, if any.
    pub witness: Option<ConditionWitness>,
    /// Part (b): the Killing-dual basis of {X_a, T_κ} restricted to the X-part
    /// equals {X_a†} on the nose.
    pub dual_basis_ok: bool,
}

#[derive(Clone, Debug)]
pub struct ConditionWitness {
    pub a: BasisIdx,
    pub x: BasisIdx,
    pub y: BasisIdx,
    pub lhs: Q,
    pub rhs: Q,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.invariance_ok && self.dual_basis_ok
    }
}

/// The bilinear form `nbar × n → Q` determined by a star map and a variant:
/// `(X_a†, X_b) = sign_variant(a) δ_ab`, extended bilinearly.
pub struct NbarNPairing {
    /// For each nbar basis element (by position in `p.nbar_basis`), the pair
    /// (a, coefficient) such that the element equals `coeff * X_a†`.
    nbar_to_a: Vec<(usize, Q)>,
    signs: Vec<Q>,
}

impl NbarNPairing {
    pub fn new(p: &Parabolic, star: &StarMap, variant: ConditionVariant) -> NbarNPairing {
        let daggers = p.xa_dagger(star);
        let mut nbar_to_a = vec![(usize::MAX, q0()); p.nbar_basis.len()];
        for (a, (s, idx)) in daggers.iter().enumerate() {
            let pos = p
                .nbar_basis
                .iter()
                .position(|&b| b == *idx)
                .expect("star image of n basis must land in nbar");
            // X_a† = s * E_idx, so E_idx = (1/s) X_a†
            nbar_to_a[pos] = (a, q1() / s.clone());
        }
        let signs = p
            .n_basis
            .iter()
            .map(|&idx| variant.pairing_sign(p.gl.basis_parity(idx)))
            .collect();
        NbarNPairing { nbar_to_a, signs }
    }

    /// Pairing of basis elements `(E_y, X_b)` for `E_y ∈ nbar`.
    pub fn pair_basis(&self, p: &Parabolic, y: BasisIdx, x: BasisIdx) -> Q {
        let ypos = p.nbar_basis.iter().position(|&b| b == y).unwrap();
        let xpos = p.n_basis.iter().position(|&b| b == x).unwrap();
        let (a, coeff) = &self.nbar_to_a[ypos];
        if *a == xpos {
            coeff * &self.signs[xpos]
        } else {
            q0()
        }
    }

    /// Bilinear extension to elements supported in nbar × n.
    pub fn pair(&self, p: &Parabolic, y: &Elem, x: &Elem) -> Q {
        let mut out = q0();
        for (iy, cy) in &y.coeffs {
            for (ix, cx) in &x.coeffs {
                let v = self.pair_basis(p, *iy, *ix);
                if !v.is_zero() {
                    out = &out + &(&v * &(cy * cx));
                }
            }
        }
        out
    }
}

/// Brute-force check of the conditions on a triple: (a) the invariance
/// identity `([Y,A]_nbar, X) = (Y, [A,X]_n)` over all basis triples, and
/// (b) the Killing-dual-basis hypothesis `X_a‡ = X_a†`.
pub fn check_conditions(
    p: &Parabolic,
    star: &StarMap,
    variant: ConditionVariant,
) -> ConditionReport {
    let gl = &p.gl;
    let pairing = NbarNPairing::new(p, star, variant);
    let mut invariance_ok = true;
    let mut witness = None;
    'outer: for &a in &gl.basis() {
        for &x in p.xa() {
            for &y in &p.nbar_basis {
                let ya = gl.bracket_elem(&Elem::basis(gl, y), &Elem::basis(gl, a));
                let lhs = pairing.pair(p, &p.project_nbar(&ya), &Elem::basis(gl, x));
                let ax = gl.bracket_elem(&Elem::basis(gl, a), &Elem::basis(gl, x));
                let rhs = pairing.pair(p, &Elem::basis(gl, y), &p.project_n(&ax));
                if lhs != rhs {
                    invariance_ok = false;
                    witness = Some(ConditionWitness { a, x, y, lhs, rhs });
                    break 'outer;
                }
            }
        }
    }

    let duals = p.killing_dual_basis();
    let daggers = p.xa_dagger(star);
    let mut dual_basis_ok = true;
    for (a, (s, idx)) in daggers.iter().enumerate() {
        let mut expected = Elem::zero(gl);
        expected.add_term(*idx, s);
        if duals[a] != expected {
            dual_basis_ok = false;
            break;
        }
    }

    ConditionReport {
        variant,
        invariance_ok,
        witness,
        dual_basis_ok,
    }
}

/// The dual-basis identity: for each basis A and each function
/// f: Z_2 → {0,1},
/// `Σ_a f(|X_a|) X_a ⊗ [X_a†, A]_nbar = Σ_a f(|X_a|+|A|) [A, X_a]_n ⊗ X_a†`,
/// compared componentwise in n ⊗ nbar.
pub fn check_dual_basis_identity(p: &Parabolic, star: &StarMap) -> bool {
    let gl = &p.gl;
    let daggers = p.xa_dagger(star);
    let nn = p.n_basis.len();
    let nbn = p.nbar_basis.len();
    for &a in &gl.basis() {
        let pa = gl.basis_parity(a);
        for f_even in [q0(), q1()] {
            for f_odd in [q0(), q1()] {
                let f = |par: Parity| match par {
                    Parity::Even => f_even.clone(),
                    Parity::Odd => f_odd.clone(),
                };
                // components indexed by (n basis, nbar basis)
                let mut lhs = Mat::zero(nn, nbn);
                let mut rhs = Mat::zero(nn, nbn);
                for (ai, &xa) in p.n_basis.iter().enumerate() {
                    let pxa = gl.basis_parity(xa);
                    let (ds, didx) = &daggers[ai];
                    // lhs: f(|X_a|) X_a ⊗ [X_a†, A]_nbar
                    let coeff = f(pxa);
                    if !coeff.is_zero() {
                        let mut dag = Elem::zero(gl);
                        dag.add_term(*didx, ds);
                        let br = p.project_nbar(&gl.bracket_elem(&dag, &Elem::basis(gl, a)));
                        for (idx, c) in &br.coeffs {
                            let col = p.nbar_basis.iter().position(|b| b == idx).unwrap();
                            lhs.add_at(ai, col, &(c * &coeff));
                        }
                    }
                    // rhs: f(|X_a|+|A|) [A, X_a]_n ⊗ X_a†
                    let coeff = f(pxa.add(pa));
                    if !coeff.is_zero() {
                        let br = p.project_n(&gl.bracket_elem(&Elem::basis(gl, a), &Elem::basis(gl, xa)));
                        let col = p.nbar_basis.iter().position(|b| b == didx).unwrap();
                        for (idx, c) in &br.coeffs {
                            let row = p.n_basis.iter().position(|b| b == idx).unwrap();
                            rhs.add_at(row, col, &(c * &(ds * &coeff)));
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(gl: &Gl, i: usize, j: usize) -> Elem {
        Elem::basis(gl, (i - 1, j - 1))
    }

    #[test]
    fn brackets_match_hand_values() {
        // gl(2|0): [E12, E21] = E11 - E22
        let gl = Gl::new(2, 0);
        let b = gl.bracket(&e(&gl, 1, 2), &e(&gl, 2, 1)).unwrap();
        let expected = e(&gl, 1, 1).add(&e(&gl, 2, 2).scale(&q(-1)));
        assert_eq!(b, expected);

        // gl(1|1): [E12, E21] = E11 + E22 (both odd)
        let gl = Gl::new(1, 1);
        let b = gl.bracket(&e(&gl, 1, 2), &e(&gl, 2, 1)).unwrap();
        assert_eq!(b, e(&gl, 1, 1).add(&e(&gl, 2, 2)));

        // gl(1|1): [E11, E12] = E12
        let b = gl.bracket(&e(&gl, 1, 1), &e(&gl, 1, 2)).unwrap();
        assert_eq!(b, e(&gl, 1, 2));
    }

    #[test]
    fn bracket_rejects_dimension_mismatch() {
        let gl = Gl::new(1, 1);
        let other = Gl::new(2, 1);
        let err = gl
            .bracket(&e(&gl, 1, 2), &Elem::basis(&other, (0, 1)))
            .unwrap_err();
        assert!(matches!(err, AlgebraError::DimensionMismatch { .. }));
    }

    #[test]
    fn killing_form_values() {
        let gl = Gl::new(1, 1);
        assert_eq!(
            gl.killing_elem(&e(&gl, 1, 2), &e(&gl, 2, 1)).unwrap(),
            q(1)
        );
        assert_eq!(
            gl.killing_elem(&e(&gl, 2, 1), &e(&gl, 1, 2)).unwrap(),
            q(-1)
        );
        assert_eq!(
            gl.killing_elem(&e(&gl, 1, 1), &e(&gl, 2, 2)).unwrap(),
            q(0)
        );
    }

    #[test]
    fn axioms_on_small_algebras() {
        for (m, n) in [(1, 1), (1, 2), (2, 1)] {
            Gl::new(m, n).check_axioms().unwrap();
        }
    }

    #[test]
    fn star_maps() {
        let gl = Gl::new(1, 1);
        // natural: E12 -> E21
        let s = StarMap::Natural;
        assert_eq!(s.apply(&gl, &e(&gl, 1, 2)), e(&gl, 2, 1));
        // dual: E12 -> -E21 ([1]+[2] odd)
        let s = StarMap::DualNatural;
        assert_eq!(s.apply(&gl, &e(&gl, 1, 2)), e(&gl, 2, 1).scale(&q(-1)));
        // diagonal fixed by both
        assert_eq!(s.apply(&gl, &e(&gl, 1, 1)), e(&gl, 1, 1));
        // dualized(natural) coincides with dual on gl(m|n)
        let d = StarMap::Dualized(Box::new(StarMap::Natural));
        for b in gl.basis() {
            assert_eq!(
                d.apply(&gl, &Elem::basis(&gl, b)),
                StarMap::DualNatural.apply(&gl, &Elem::basis(&gl, b))
            );
        }
        for star in [StarMap::Natural, StarMap::DualNatural, d] {
            star.check_axioms(&gl).unwrap();
            star.check_axioms(&Gl::new(2, 1)).unwrap();
        }
    }

    #[test]
    fn parabolic_splitting() {
        let gl = Gl::new(1, 1);
        let p = Parabolic::new(&gl, &[]);
        assert_eq!(p.g0_basis, vec![(0, 0), (1, 1)]);
        assert_eq!(p.n_basis, vec![(0, 1)]);
        assert_eq!(p.nbar_basis, vec![(1, 0)]);

        let gl = Gl::new(2, 1);
        let p = Parabolic::new(&gl, &[1]);
        assert!(p.in_g0((1, 0)) && p.in_g0((0, 1)));
        assert_eq!(p.n_basis, vec![(0, 2), (1, 2)]);

        let p = Parabolic::new(&gl, &[]);
        assert_eq!(p.n_basis.len(), 3);
        let parities: Vec<Parity> = p.n_basis.iter().map(|&b| gl.basis_parity(b)).collect();
        assert_eq!(
            parities,
            vec![Parity::Even, Parity::Odd, Parity::Odd]
        );
    }

    #[test]
    fn parse_round_trips() {
        let gl = Gl::parse("gl:2|1").unwrap();
        assert_eq!(gl.render(), "gl:2|1");
        let p = Parabolic::parse(&gl, "levi=1").unwrap();
        assert_eq!(p.render(), "levi=1");
        let p = Parabolic::parse(&gl, "levi=").unwrap();
        assert_eq!(p.render(), "levi=");
        assert!(Gl::parse("gl:2").is_err());
        let s = StarMap::parse("dualized:natural").unwrap();
        assert_eq!(s.render(), "dualized:natural");
    }

    #[test]
    fn conditions_on_desk_triples() {
        // gl(1|1) Borel, natural star: admissible under both variants.
        let gl = Gl::new(1, 1);
        let p = Parabolic::new(&gl, &[]);
        let r = check_conditions(&p, &StarMap::Natural, ConditionVariant::NecCond);
        assert!(r.invariance_ok && r.dual_basis_ok);
        let r = check_conditions(&p, &StarMap::Natural, ConditionVariant::NecCond2);
        assert!(r.invariance_ok);

        // gl(1|2) Borel, natural star: covered by the tensor-module theorem.
        let gl = Gl::new(1, 2);
        let p = Parabolic::new(&gl, &[]);
        let r = check_conditions(&p, &StarMap::Natural, ConditionVariant::NecCond);
        assert!(r.invariance_ok);

        // gl(1|2) Borel, dual star: fails with a witness.
        let r = check_conditions(&p, &StarMap::DualNatural, ConditionVariant::NecCond);
        assert!(!r.invariance_ok);
        assert!(r.witness.is_some());
    }

    #[test]
    fn dual_basis_identity_follows_conditions() {
        let gl = Gl::new(1, 2);
        let p = Parabolic::new(&gl, &[]);
        assert!(check_dual_basis_identity(&p, &StarMap::Natural));

        let gl = Gl::new(2, 1);
        let p = Parabolic::new(&gl, &[1]);
        assert!(check_dual_basis_identity(&p, &StarMap::Natural));
    }
}
