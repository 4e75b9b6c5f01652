//! Finite-dimensional weight modules of gl(m|n) given by exact action
//! matrices: the natural module, duals, tensor powers, and cyclic
//! submodules generated by highest weight vectors (the concrete realization
//! of tensor modules), plus Casimir actions and star-representation checks.

use std::collections::BTreeMap;

use crate::algebra::{
    AlgebraError, BasisIdx, Elem, Gl, Parabolic, Parity, StarMap, Weight,
};
use crate::linalg::Mat;
use crate::scalar::{q, q0, q1, qr, Q};
use num_traits::Zero;

/// A module given by one exact action matrix per algebra basis element.
#[derive(Clone, Debug)]
pub struct RepModule {
    pub gl: Gl,
    pub dim: usize,
    pub parities: Vec<Parity>,
    pub weights: Vec<Weight>,
    pub action: BTreeMap<BasisIdx, Mat>,
}

impl RepModule {
    /// The natural module C^{m|n}: `E_ij e_k = δ_jk e_i`.
    pub fn natural(gl: &Gl) -> RepModule {
        let d = gl.size();
        let mut action = BTreeMap::new();
        for (i, j) in gl.basis() {
            let mut m = Mat::zero(d, d);
            m.set(i, j, q1());
            action.insert((i, j), m);
        }
        RepModule {
            gl: gl.clone(),
            dim: d,
            parities: (0..d).map(|k| gl.index_parity(k)).collect(),
            weights: (0..d).map(|k| Weight::epsilon(d, k)).collect(),
            action,
        }
    }

    /// The one-dimensional trivial module.
    pub fn trivial(gl: &Gl) -> RepModule {
        let action = gl.basis().into_iter().map(|b| (b, Mat::zero(1, 1))).collect();
        RepModule {
            gl: gl.clone(),
            dim: 1,
            parities: vec![Parity::Even],
            weights: vec![Weight::zero(gl.size())],
            action,
        }
    }

    /// Dual module: `(Aα)(v) = -(-1)^{|A||α|} α(Av)`.
    pub fn dual(&self) -> RepModule {
        let gl = self.gl.clone();
        let mut action = BTreeMap::new();
        for (b, m) in &self.action {
            let pa = gl.basis_parity(*b);
            let mut d = Mat::zero(self.dim, self.dim);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let v = m.at(j, i);
                    if !v.is_zero() {
                        let s = -pa.koszul(self.parities[j]);
                        d.set(i, j, v * &s);
                    }
                }
            }
            action.insert(*b, d);
        }
        RepModule {
            gl,
            dim: self.dim,
            parities: self.parities.clone(),
            weights: self.weights.iter().map(|w| w.neg()).collect(),
            action,
        }
    }

    /// Tensor product with the super Leibniz rule
    /// `A(v⊗w) = Av⊗w + (-1)^{|A||v|} v⊗Aw`.
    pub fn tensor(&self, other: &RepModule) -> RepModule {
        assert_eq!(self.gl, other.gl);
        let d = self.dim * other.dim;
        let idx = |i: usize, j: usize| i * other.dim + j;
        let mut action = BTreeMap::new();
        for (b, ma) in &self.action {
            let mb = &other.action[b];
            let pa = self.gl.basis_parity(*b);
            let mut m = Mat::zero(d, d);
            for i in 0..self.dim {
                for j in 0..other.dim {
                    let col = idx(i, j);
                    for k in 0..self.dim {
                        let v = ma.at(k, i);
                        if !v.is_zero() {
                            m.add_at(idx(k, j), col, v);
                        }
                    }
                    let s = pa.koszul(self.parities[i]);
                    for k in 0..other.dim {
                        let v = mb.at(k, j);
                        if !v.is_zero() {
                            m.add_at(idx(i, k), col, &(v * &s));
                        }
                    }
                }
            }
            action.insert(*b, m);
        }
        let mut parities = Vec::with_capacity(d);
        let mut weights = Vec::with_capacity(d);
        for i in 0..self.dim {
            for j in 0..other.dim {
                parities.push(self.parities[i].add(other.parities[j]));
                weights.push(self.weights[i].add(&other.weights[j]));
            }
        }
        RepModule {
            gl: self.gl.clone(),
            dim: d,
            parities,
            weights,
            action,
        }
    }

    /// k-th tensor power, k ≥ 1.
    pub fn tensor_power(&self, k: usize) -> RepModule {
        assert!(k >= 1);
        let mut m = self.clone();
        for _ in 1..k {
            m = m.tensor(self);
        }
        m
    }

    /// Action matrix of a general element.
    pub fn elem_action(&self, e: &Elem) -> Mat {
        let mut m = Mat::zero(self.dim, self.dim);
        for (idx, c) in &e.coeffs {
            m = m.add(&self.action[idx].scale(c));
        }
        m
    }

    /// Bracket compatibility on all basis pairs:
    /// `action([A,B]) = action(A)action(B) - (-1)^{|A||B|} action(B)action(A)`.
    pub fn check_bracket_compatibility(&self) -> Result<(), String> {
        for a in self.gl.basis() {
            for b in self.gl.basis() {
                let lhs = self.elem_action(&Elem::from_terms(
                    &self.gl,
                    self.gl.bracket_basis(a, b),
                ));
                let ma = &self.action[&a];
                let mb = &self.action[&b];
                let koszul = self.gl.basis_parity(a).koszul(self.gl.basis_parity(b));
                let rhs = ma.mul(mb).sub(&mb.mul(ma).scale(&koszul));
                if lhs != rhs {
                    return Err(format!("bracket compatibility fails at E{a:?}, E{b:?}"));
                }
            }
        }
        Ok(())
    }

    /// Weight and parity homogeneity of the action matrices.
    pub fn check_weight_structure(&self) -> Result<(), String> {
        let s = self.gl.size();
        for k in 0..s {
            let m = &self.action[&(k, k)];
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let expected = if i == j { self.weights[i].0[k].clone() } else { q0() };
                    if m.at(i, j) != &expected {
                        return Err(format!("Cartan action E{},{} not diagonal by weights", k + 1, k + 1));
                    }
                }
            }
        }
        for (b, m) in &self.action {
            let pa = self.gl.basis_parity(*b);
            let wa = self.gl.basis_weight(*b);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if m.at(i, j).is_zero() {
                        continue;
                    }
                    if self.parities[i] != pa.add(self.parities[j]) {
                        return Err(format!("action of E{b:?} not parity homogeneous"));
                    }
                    if self.weights[i] != wa.add(&self.weights[j]) {
                        return Err(format!("action of E{b:?} not weight homogeneous"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `⟨Av,w⟩ = ⟨v,A†w⟩` for the δ-gram, on all basis elements: the matrix
    /// identity `action(A)^T = action(A†)`.
    pub fn is_star_representation(&self, star: &StarMap) -> bool {
        for b in self.gl.basis() {
            let dag = star.apply(&self.gl, &Elem::basis(&self.gl, b));
            if self.action[&b].transpose() != self.elem_action(&dag) {
                return false;
            }
        }
        true
    }

    /// Joint kernel of the raising actions, organized by weight.
    pub fn highest_weight_vectors(&self, raising: &[BasisIdx]) -> Vec<(Weight, Vec<Q>)> {
        hw_vectors(
            &|b| self.action[&b].clone(),
            &self.weights,
            raising,
            &Mat::identity(self.dim),
        )
    }

    /// Cyclic span of a vector under iterated basis actions, with the
    /// restricted action matrices.
    pub fn cyclic_submodule(&self, v: &[Q]) -> RepModule {
        let generated = cyclic_span(
            &|b| self.action[&b].clone(),
            &self.gl.basis(),
            &[v.to_vec()],
        );
        let basis = generated.basis;
        let sub_dim = basis.cols;
        // classify each basis vector (homogeneous by construction)
        let mut parities = Vec::with_capacity(sub_dim);
        let mut weights = Vec::with_capacity(sub_dim);
        for c in 0..sub_dim {
            let col = basis.col(c);
            let lead = col.iter().position(|x| !x.is_zero()).unwrap();
            parities.push(self.parities[lead]);
            weights.push(self.weights[lead].clone());
        }
        let mut action = BTreeMap::new();
        for (b, m) in &self.action {
            let img = m.mul(&basis);
            let mut rest = Mat::zero(sub_dim, sub_dim);
            for c in 0..sub_dim {
                let x = basis
                    .solve(&img.col(c))
                    .expect("cyclic span not closed under action");
                for (r, val) in x.into_iter().enumerate() {
                    if !val.is_zero() {
                        rest.set(r, c, val);
                    }
                }
            }
            action.insert(*b, rest);
        }
        RepModule {
            gl: self.gl.clone(),
            dim: sub_dim,
            parities,
            weights,
            action,
        }
    }

    /// Weight census: multiplicity of each weight among basis vectors.
    pub fn weight_census(&self) -> BTreeMap<Weight, usize> {
        let mut census = BTreeMap::new();
        for w in &self.weights {
            *census.entry(w.clone()).or_insert(0) += 1;
        }
        census
    }

    /// Parse a module spec string: `natural` | `trivial` | `dual` |
    /// `tensor:natural^k` | `cyclic:tensor:natural^k@hw=w1,w2,...`.
    pub fn parse(gl: &Gl, s: &str) -> Result<RepModule, AlgebraError> {
        match s {
            "natural" => return Ok(RepModule::natural(gl)),
            "trivial" => return Ok(RepModule::trivial(gl)),
            "dual" => return Ok(RepModule::natural(gl).dual()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("tensor:") {
            let (base, pow) = rest.split_once('^').ok_or_else(|| {
                AlgebraError::ParseError(format!("expected tensor:<base>^k, got {s:?}"))
            })?;
            let base = RepModule::parse(gl, base)?;
            let k = pow
                .parse::<usize>()
                .map_err(|_| AlgebraError::ParseError(format!("bad tensor power {pow:?}")))?;
            if k == 0 {
                return Err(AlgebraError::ParseError("tensor power must be ≥ 1".into()));
            }
            return Ok(base.tensor_power(k));
        }
        if let Some(rest) = s.strip_prefix("cyclic:") {
            let (inner, hw) = rest.split_once("@hw=").ok_or_else(|| {
                AlgebraError::ParseError(format!("expected cyclic:<spec>@hw=..., got {s:?}"))
            })?;
            let ambient = RepModule::parse(gl, inner)?;
            let coords: Result<Vec<Q>, _> = hw
                .split(',')
                .map(|p| {
                    p.parse::<i64>()
                        .map(q)
                        .map_err(|_| AlgebraError::ParseError(format!("bad weight entry {p:?}")))
                })
                .collect();
            let target = Weight(coords?);
            let borel_raising: Vec<BasisIdx> = gl
                .basis()
                .into_iter()
                .filter(|&(i, j)| i < j)
                .collect();
            let hws = ambient.highest_weight_vectors(&borel_raising);
            let found = hws
                .into_iter()
                .find(|(w, _)| *w == target)
                .ok_or_else(|| {
                    AlgebraError::ParseError(format!("no highest weight vector of weight {target}"))
                })?;
            return Ok(ambient.cyclic_submodule(&found.1));
        }
        Err(AlgebraError::ParseError(format!("unknown module spec {s:?}")))
    }
}

/// A cyclic span result: orthonormal-free basis matrix (columns) in ambient
/// coordinates.
pub struct Span {
    pub basis: Mat,
}

/// Closure of a set of seed vectors under the given basis actions.
pub fn cyclic_span(
    act: &dyn Fn(BasisIdx) -> Mat,
    basis_elems: &[BasisIdx],
    seeds: &[Vec<Q>],
) -> Span {
    assert!(!seeds.is_empty());
    let ambient = seeds[0].len();
    let mut cols: Vec<Vec<Q>> = Vec::new();
    let mut frontier: Vec<Vec<Q>> = seeds.to_vec();
    let mut span = Mat::zero(ambient, 0);
    while let Some(v) = frontier.pop() {
        let candidate = span.hcat(&Mat::col_vec(&v));
        if candidate.rank() > span.rank() {
            span = candidate;
            cols.push(v.clone());
            for &b in basis_elems {
                frontier.push(act(b).apply(&v));
            }
        }
    }
    let mut basis = Mat::zero(ambient, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, val) in col.iter().enumerate() {
            if !val.is_zero() {
                basis.set(r, c, val.clone());
            }
        }
    }
    Span { basis }
}

/// Highest weight vectors of a subspace: the joint kernel of the raising
/// actions restricted to the column span of `subspace`, grouped by weight.
/// Weights of ambient basis vectors are given in `ambient_weights`.
pub fn hw_vectors(
    act: &dyn Fn(BasisIdx) -> Mat,
    ambient_weights: &[Weight],
    raising: &[BasisIdx],
    subspace: &Mat,
) -> Vec<(Weight, Vec<Q>)> {
    let dim = subspace.cols;
    if dim == 0 {
        return Vec::new();
    }
    // stack raising matrices applied to the subspace basis
    let mut stacked = Mat::zero(0, dim);
    for &b in raising {
        let m = act(b).mul(subspace);
        stacked = Mat::from_rows(
            (0..stacked.rows + m.rows)
                .map(|r| {
                    if r < stacked.rows {
                        (0..dim).map(|c| stacked.at(r, c).clone()).collect()
                    } else {
                        (0..dim).map(|c| m.at(r - stacked.rows, c).clone()).collect()
                    }
                })
                .collect(),
        );
    }
    let ker = if raising.is_empty() {
        Mat::identity(dim)
    } else {
        stacked.kernel()
    };
    // back to ambient coordinates, split weight-homogeneously
    let mut out = Vec::new();
    for c in 0..ker.cols {
        let coords = ker.col(c);
        let ambient_vec = subspace.apply(&coords);
        for part in split_by_weight(&ambient_vec, ambient_weights) {
            out.push(part);
        }
    }
    // the raising operators are weight-graded, so each homogeneous part of a
    // kernel vector is itself a kernel vector; deduplicate by rank per weight
    let mut grouped: BTreeMap<Weight, Vec<Vec<Q>>> = BTreeMap::new();
    for (w, v) in out {
        grouped.entry(w).or_default().push(v);
    }
    let mut result = Vec::new();
    for (w, vecs) in grouped {
        let ambient = vecs[0].len();
        let mut m = Mat::zero(ambient, vecs.len());
        for (c, v) in vecs.iter().enumerate() {
            for (r, val) in v.iter().enumerate() {
                if !val.is_zero() {
                    m.set(r, c, val.clone());
                }
            }
        }
        let im = m.image();
        for c in 0..im.cols {
            result.push((w.clone(), im.col(c)));
        }
    }
    result
}

fn split_by_weight(v: &[Q], weights: &[Weight]) -> Vec<(Weight, Vec<Q>)> {
    let mut by_weight: BTreeMap<Weight, Vec<Q>> = BTreeMap::new();
    for (i, val) in v.iter().enumerate() {
        if !val.is_zero() {
            let entry = by_weight
                .entry(weights[i].clone())
                .or_insert_with(|| vec![q0(); v.len()]);
            entry[i] = val.clone();
        }
    }
    by_weight.into_iter().collect()
}

/// ρ = half-sum of even positive roots minus half-sum of odd positive roots.
pub fn rho(gl: &Gl) -> Weight {
    let s = gl.size();
    let mut r = Weight::zero(s);
    for i in 0..s {
        for j in (i + 1)..s {
            let root = gl.basis_weight((i, j));
            let half = root.0.iter().map(|x| x * &qr(1, 2)).collect::<Vec<Q>>();
            let half = Weight(half);
            if gl.index_parity(i) == gl.index_parity(j) {
                r = r.add(&half);
            } else {
                r = r.sub(&half);
            }
        }
    }
    r
}

/// The Cartan pairing induced by the normalized Killing form:
/// `(ε_i, ε_j) = (-1)^{[i]} δ_ij`.
pub fn weight_form(gl: &Gl, a: &Weight, b: &Weight) -> Q {
    let mut out = q0();
    for k in 0..gl.size() {
        if !a.0[k].is_zero() && !b.0[k].is_zero() {
            out = &out + &(&(&a.0[k] * &b.0[k]) * &gl.index_parity(k).sign());
        }
    }
    out
}

/// `C_2(W_μ) = (μ, μ + 2ρ)`.
pub fn casimir_scalar_of_weight(gl: &Gl, mu: &Weight) -> Q {
    let shifted = mu.add(&rho(gl)).add(&rho(gl));
    weight_form(gl, mu, &shifted)
}

/// Matrix of the quadratic Casimir `C_2 = Σ_a X_a X_a‡ + Σ_κ T_κ T_κ‡`
/// through the dual basis of `{X_a, T_κ}` (with the parity signs that make
/// the element central). Requires the Killing-dual star-basis hypothesis.
pub fn casimir_matrix(m: &RepModule, p: &Parabolic, star: &StarMap) -> Result<Mat, AlgebraError> {
    let report = crate::algebra::check_conditions(p, star, crate::algebra::ConditionVariant::NecCond);
    if !report.dual_basis_ok {
        return Err(AlgebraError::NoKillingDualStarBasis(format!(
            "{} {}: Killing dual of the n-basis is not the star image",
            p.gl.render(),
            p.render()
        )));
    }
    Ok(casimir_matrix_unchecked(m, p))
}

/// The same Casimir matrix without the hypothesis gate (used internally and
/// for cross-checks; the element is basis-independent).
pub fn casimir_matrix_unchecked(m: &RepModule, p: &Parabolic) -> Mat {
    let mut combined: Vec<BasisIdx> = p.xa().to_vec();
    combined.extend(p.pstar_basis());
    let duals = p.killing_dual_basis();
    let mut out = Mat::zero(m.dim, m.dim);
    for (u, dual) in combined.iter().zip(duals.iter()) {
        let sign = p.gl.basis_parity(*u).sign();
        let term = m.action[u].mul(&m.elem_action(dual)).scale(&sign);
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ConditionVariant;

    #[test]
    fn natural_module_basics() {
        let gl = Gl::new(1, 1);
        let nat = RepModule::natural(&gl);
        // E12 e2 = e1, E12 e1 = 0
        let m = &nat.action[&(0, 1)];
        assert_eq!(m.at(0, 1), &q1());
        assert!(m.col(0).iter().all(|x| x.is_zero()));
        nat.check_bracket_compatibility().unwrap();
        nat.check_weight_structure().unwrap();

        let gl = Gl::new(2, 1);
        let nat = RepModule::natural(&gl);
        assert_eq!(nat.weights[2], Weight(vec![q(0), q(0), q(1)]));
    }

    #[test]
    fn dual_module_weights_and_double_dual() {
        let gl = Gl::new(1, 1);
        let nat = RepModule::natural(&gl);
        let dual = nat.dual();
        // eigenvalue of E11 on e1* is -1
        assert_eq!(dual.action[&(0, 0)].at(0, 0), &q(-1));
        dual.check_bracket_compatibility().unwrap();
        dual.check_weight_structure().unwrap();
        let dd = dual.dual();
        assert_eq!(dd.weights, nat.weights);

        let gl21 = Gl::new(2, 1);
        let d = RepModule::natural(&gl21).dual();
        let expect: Vec<Weight> = (0..3)
            .map(|k| Weight::epsilon(3, k).neg())
            .collect();
        assert_eq!(d.weights, expect);
    }

    #[test]
    fn tensor_power_action() {
        let gl = Gl::new(1, 1);
        let nat = RepModule::natural(&gl);
        let t1 = nat.tensor_power(1);
        assert_eq!(t1.dim, nat.dim);
        assert_eq!(t1.action[&(0, 1)], nat.action[&(0, 1)]);

        let t2 = nat.tensor_power(2);
        assert_eq!(t2.dim, 4);
        // weight of e2 ⊗ e2 = (0, 2)
        assert_eq!(t2.weights[3], Weight(vec![q(0), q(2)]));
        // E12 (e2⊗e2) = e1⊗e2 - e2⊗e1 (sign from odd·odd)
        let col = t2.action[&(0, 1)].col(3);
        assert_eq!(col, vec![q(0), q(1), q(-1), q(0)]);
        t2.check_bracket_compatibility().unwrap();
    }

    #[test]
    fn highest_weight_vectors_and_cyclic_spans() {
        let gl = Gl::new(1, 1);
        let nat = RepModule::natural(&gl);
        let raising: Vec<BasisIdx> = vec![(0, 1)];
        let hws = nat.highest_weight_vectors(&raising);
        assert_eq!(hws.len(), 1);
        assert_eq!(hws[0].0, Weight(vec![q(1), q(0)]));

        // empty raising set: all basis vectors
        assert_eq!(nat.highest_weight_vectors(&[]).len(), 2);

        // cyclic span of e1 is the whole module
        let sub = nat.cyclic_submodule(&[q1(), q0()]);
        assert_eq!(sub.dim, 2);
        sub.check_bracket_compatibility().unwrap();

        // hw-cyclic decomposition of small tensor powers
        for k in 2..=3 {
            let t = nat.tensor_power(k);
            let hws = t.highest_weight_vectors(&raising);
            let total: usize = hws
                .iter()
                .map(|(_, v)| t.cyclic_submodule(v).dim)
                .sum();
            assert_eq!(total, t.dim, "power {k}");
        }
    }

    #[test]
    fn complete_reducibility_census_gl21() {
        let gl = Gl::new(2, 1);
        let nat = RepModule::natural(&gl);
        let raising: Vec<BasisIdx> = gl.basis().into_iter().filter(|&(i, j)| i < j).collect();
        for k in 1..=3 {
            let t = nat.tensor_power(k);
            let hws = t.highest_weight_vectors(&raising);
            let total: usize = hws.iter().map(|(_, v)| t.cyclic_submodule(v).dim).sum();
            assert_eq!(total, t.dim, "tensor power {k} not fully decomposed");
        }
    }

    #[test]
    fn star_representation_pairs() {
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let gl = Gl::new(m, n);
            let nat = RepModule::natural(&gl);
            assert!(nat.is_star_representation(&StarMap::Natural));
            let dual = nat.dual();
            assert!(dual.is_star_representation(&StarMap::DualNatural));
        }
        let gl = Gl::new(1, 1);
        let nat = RepModule::natural(&gl);
        assert!(!nat.is_star_representation(&StarMap::DualNatural));
    }

    #[test]
    fn casimir_matrix_matches_weight_formula() {
        for (m, n) in [(1, 1), (2, 1), (1, 2)] {
            let gl = Gl::new(m, n);
            let nat = RepModule::natural(&gl);
            let p = Parabolic::new(&gl, &[]);
            let c = casimir_matrix_unchecked(&nat, &p);
            let expected = casimir_scalar_of_weight(&gl, &Weight::epsilon(gl.size(), 0));
            assert_eq!(c, Mat::identity(nat.dim).scale(&expected), "gl({m}|{n})");
            // independence of the parabolic
            for levi in [vec![1], vec![m + n - 1]] {
                let p2 = Parabolic::new(&gl, &levi);
                assert_eq!(casimir_matrix_unchecked(&nat, &p2), c);
            }
        }
    }

    #[test]
    fn casimir_gate_requires_dual_star_basis() {
        let gl = Gl::new(1, 1);
        let p = Parabolic::new(&gl, &[]);
        let nat = RepModule::natural(&gl);
        assert!(casimir_matrix(&nat, &p, &StarMap::Natural).is_ok());

        // gl(1|2) Borel natural: the Killing dual of E23 flips sign, so the
        // strict hypothesis fails and the operation is rejected.
        let gl = Gl::new(1, 2);
        let p = Parabolic::new(&gl, &[]);
        let nat = RepModule::natural(&gl);
        let r = crate::algebra::check_conditions(&p, &StarMap::Natural, ConditionVariant::NecCond);
        assert!(r.invariance_ok && !r.dual_basis_ok);
        assert!(casimir_matrix(&nat, &p, &StarMap::Natural).is_err());
    }

    #[test]
    fn module_spec_parsing() {
        let gl = Gl::new(1, 1);
        assert_eq!(RepModule::parse(&gl, "natural").unwrap().dim, 2);
        assert_eq!(RepModule::parse(&gl, "dual").unwrap().weights[0], Weight(vec![q(-1), q(0)]));
        assert_eq!(RepModule::parse(&gl, "tensor:natural^2").unwrap().dim, 4);
        let cyc = RepModule::parse(&gl, "cyclic:tensor:natural^2@hw=2,0").unwrap();
        assert!(cyc.dim > 0 && cyc.dim < 4);
        assert!(RepModule::parse(&gl, "tensor:natural^0").is_err());
    }
}
