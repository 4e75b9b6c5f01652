//! Generalized-Verma resolution data: per-degree cohomology descriptors of
//! the nbar-wedge chains, weight multiplicities of the induced modules
//! through the PBW character of U(nbar), and the per-weight
//! Euler-characteristic verification of exactness.

use std::collections::BTreeMap;

use crate::algebra::{
    check_conditions, ConditionReport, ConditionVariant, Parabolic, Parity, StarMap, Weight,
};
use crate::chains::{ChainComplex, ChainSide, ConsistencyError};
use crate::linalg::Mat;
use crate::rep::RepModule;
use crate::scalar::{q, q0, Q};
use num_traits::Zero;

/// The g0-highest-weight content of one cohomology degree.
#[derive(Clone, Debug)]
pub struct VermaDescriptor {
    pub k: usize,
    pub harmonic_dim: usize,
    pub hw_list: BTreeMap<Weight, usize>,
}

/// Integer height: positive on the n-roots, so each nbar factor lowers it
/// by at least one.
pub fn height(gl: &crate::algebra::Gl, w: &Weight) -> Q {
    let s = gl.size();
    let mut h = q0();
    for (i, c) in w.0.iter().enumerate() {
        h = &h + &(&q((s - i) as i64 - 1) * c);
    }
    h
}

/// Weight census of a subspace spanned by the columns of `basis`, counted
/// against the ambient weights of a chain level.
fn census_of_span(basis: &Mat, weights: &[Weight]) -> BTreeMap<Weight, usize> {
    // the span of a weight-graded subspace decomposes per weight: count by
    // ranks of the weight-blocks
    let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        by_weight.entry(w.clone()).or_default().push(i);
    }
    let mut out = BTreeMap::new();
    for (w, rows) in by_weight {
        let mut sub = Mat::zero(rows.len(), basis.cols);
        for (ri, &r) in rows.iter().enumerate() {
            for c in 0..basis.cols {
                let v = basis.at(r, c);
                if !v.is_zero() {
                    sub.set(ri, c, v.clone());
                }
            }
        }
        let rank = sub.rank();
        if rank > 0 {
            out.insert(w, rank);
        }
    }
    out
}

/// Per-degree data of the resolution: descriptors plus the full weight
/// census of each cohomology group (computed as ker/im ranks, valid with or
/// without admissibility).
pub struct ResolutionLevels {
    pub descriptors: Vec<VermaDescriptor>,
    pub censuses: Vec<BTreeMap<Weight, usize>>,
}

/// Cohomology censuses of the nbar-wedge complex for levels 0..=k_max.
/// Descriptors list highest weights when the harmonic route is available;
/// the censuses are always exact rank computations.
pub fn resolution_levels(
    cc: &mut ChainComplex,
    k_max: usize,
    harmonic_route: bool,
) -> Result<ResolutionLevels, ConsistencyError> {
    assert_eq!(cc.side, ChainSide::WedgeNbar);
    let mut descriptors = Vec::new();
    let mut censuses = Vec::new();
    for k in 0..=k_max {
        let weights = cc.level(k).weights.clone();
        // census of H^k = census(ker δ*) - census(im δ*), weight by weight
        let ker = if k == 0 {
            Mat::identity(cc.level(0).dim)
        } else {
            cc.codiff[k].kernel()
        };
        let im = cc.codiff[k + 1].image();
        let ker_census = census_of_span(&ker, &weights);
        let im_census = census_of_span(&im, &weights);
        let mut census = BTreeMap::new();
        for (w, n) in &ker_census {
            let m = im_census.get(w).copied().unwrap_or(0);
            if *n > m {
                census.insert(w.clone(), n - m);
            }
        }
        let (harmonic_dim, hw_list) = if harmonic_route {
            // the Casimir filter needs no Hodge theory on this side; its
            // total dimension must reproduce the rank census
            let summary = cc.cohomology_by_casimir(k);
            let dim: usize = census.values().sum();
            if summary.harmonic_dim != dim {
                return Err(ConsistencyError(format!(
                    "Casimir-filter dimension disagrees with the rank census at level {k}"
                )));
            }
            (summary.harmonic_dim, summary.hw_list)
        } else {
            let dim: usize = census.values().sum();
            (dim, BTreeMap::new())
        };
        descriptors.push(VermaDescriptor {
            k,
            harmonic_dim,
            hw_list,
        });
        censuses.push(census);
    }
    Ok(ResolutionLevels {
        descriptors,
        censuses,
    })
}

/// Multiplicities of U(nbar)-weights with height down to `-budget`:
/// dynamic programming over the PBW generators, odd exponents capped.
pub fn unbar_character(p: &Parabolic, budget: i64) -> BTreeMap<Weight, usize> {
    let gl = &p.gl;
    let mut table: BTreeMap<Weight, usize> = BTreeMap::new();
    table.insert(Weight::zero(gl.size()), 1);
    for &g in &p.nbar_basis {
        let w = gl.basis_weight(g);
        let ht = height(gl, &w);
        debug_assert!(ht < q0());
        let odd = gl.basis_parity(g) == Parity::Odd;
        let mut next: BTreeMap<Weight, usize> = BTreeMap::new();
        for (base, mult) in &table {
            let mut acc = base.clone();
            let mut e = 0usize;
            loop {
                if height(gl, &acc) < q(-budget) {
                    break;
                }
                *next.entry(acc.clone()).or_insert(0) += mult;
                e += 1;
                if odd && e > 1 {
                    break;
                }
                acc = acc.add(&w);
            }
        }
        table = next;
    }
    table
}

/// Weight multiplicity of the induced module U(g) ⊗_p F at μ, where F has
/// the given census: the convolution with the U(nbar) character.
pub fn verma_weight_multiplicity(
    unbar: &BTreeMap<Weight, usize>,
    census: &BTreeMap<Weight, usize>,
    mu: &Weight,
) -> usize {
    let mut total = 0usize;
    for (sigma, m) in census {
        let need = mu.sub(sigma);
        if let Some(u) = unbar.get(&need) {
            total += m * u;
        }
    }
    total
}

/// A rectangular integer weight box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightBox {
    pub lo: i64,
    pub hi: i64,
}

impl WeightBox {
    pub fn parse(s: &str) -> Result<WeightBox, crate::algebra::AlgebraError> {
        let body = s
            .trim_start_matches('[')
            .trim_end_matches(']');
        let (lo, hi) = body.split_once(',').ok_or_else(|| {
            crate::algebra::AlgebraError::ParseError(format!("expected lo,hi box, got {s:?}"))
        })?;
        let lo = lo.trim().parse::<i64>().map_err(|_| {
            crate::algebra::AlgebraError::ParseError(format!("bad box bound {lo:?}"))
        })?;
        let hi = hi.trim().parse::<i64>().map_err(|_| {
            crate::algebra::AlgebraError::ParseError(format!("bad box bound {hi:?}"))
        })?;
        Ok(WeightBox { lo, hi })
    }

    pub fn render(&self) -> String {
        format!("{},{}", self.lo, self.hi)
    }

    pub fn weights(&self, size: usize) -> Vec<Weight> {
        let mut out = vec![Vec::new()];
        for _ in 0..size {
            let mut next = Vec::new();
            for prefix in &out {
                for c in self.lo..=self.hi {
                    let mut p = prefix.clone();
                    p.push(q(c));
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(Weight).collect()
    }

    /// Smallest box containing all the given weights (requires integers).
    pub fn covering(weights: &[Weight]) -> WeightBox {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for w in weights {
            for c in &w.0 {
                assert!(c.denom() == &num_bigint::BigInt::from(1));
                let v: i64 = c.numer().try_into().expect("weight coordinate fits i64");
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        WeightBox { lo, hi }
    }
}

/// Verdict of the per-weight alternating sum against dim W_μ.
#[derive(Clone, Debug)]
pub struct EulerVerdict {
    pub mu: Weight,
    pub alternating_sum: i64,
    pub expected: i64,
    pub pass: bool,
}

/// The level bound that makes the box safe: each wedge factor and each
/// PBW factor lowers the height by at least one.
pub fn required_k_max(gl: &crate::algebra::Gl, w_census: &BTreeMap<Weight, usize>, bx: &WeightBox) -> usize {
    let max_ht = w_census
        .keys()
        .map(|w| height(gl, w))
        .max()
        .expect("nonempty census");
    let min_ht = bx
        .weights(gl.size())
        .iter()
        .map(|w| height(gl, w))
        .min()
        .unwrap();
    let diff = &max_ht - &min_ht;
    if diff <= q0() {
        return 0;
    }
    let n: i64 = (diff.numer() / diff.denom()).try_into().unwrap();
    n as usize
}

/// Per-weight Euler characteristic over the box: the alternating sum of the
/// induced-module multiplicities must match dim W_μ.
pub fn euler_check(
    p: &Parabolic,
    censuses: &[BTreeMap<Weight, usize>],
    w_census: &BTreeMap<Weight, usize>,
    bx: &WeightBox,
) -> Vec<EulerVerdict> {
    let gl = &p.gl;
    // the unbar character needs heights down to min(box) - min over censuses
    let min_box_ht = bx
        .weights(gl.size())
        .iter()
        .map(|w| height(gl, w))
        .min()
        .unwrap();
    let max_census_ht = censuses
        .iter()
        .flat_map(|c| c.keys())
        .map(|w| height(gl, w))
        .max()
        .unwrap_or_else(q0);
    let budget = {
        let d = &max_census_ht - &min_box_ht;
        if d <= q0() {
            0
        } else {
            let n: i64 = (d.numer() / d.denom()).try_into().unwrap();
            n
        }
    };
    let unbar = unbar_character(p, budget);
    let mut out = Vec::new();
    for mu in bx.weights(gl.size()) {
        let mut sum: i64 = 0;
        for (k, census) in censuses.iter().enumerate() {
            let m = verma_weight_multiplicity(&unbar, census, &mu) as i64;
            if k % 2 == 0 {
                sum += m;
            } else {
                sum -= m;
            }
        }
        let expected = w_census.get(&mu).copied().unwrap_or(0) as i64;
        out.push(EulerVerdict {
            pass: sum == expected,
            mu,
            alternating_sum: sum,
            expected,
        });
    }
    out
}

/// Wedge monomials over the nbar generators: sorted multisets with even
/// generators unrepeated (the super exterior power), enumerated without
/// building the ambient realization.
fn nbar_wedge_monomials(p: &Parabolic, k: usize) -> Vec<Vec<usize>> {
    fn rec(
        p: &Parabolic,
        k: usize,
        from: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for g in from..p.nbar_basis.len() {
            let odd = p.gl.basis_parity(p.nbar_basis[g]) == Parity::Odd;
            if let Some(&last) = cur.last() {
                if last == g && !odd {
                    continue;
                }
            }
            cur.push(g);
            rec(p, k, if odd { g } else { g + 1 }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Cohomology censuses through the Casimir criterion for a Borel-type
/// parabolic (g0 equal to the Cartan): every chain weight is a highest
/// weight, and the criterion keeps those with C_2(μ) = C_2(λ). For
/// inadmissible triples this is the "descriptor computed anyway" of the
/// negative control; it is exactly the harmonic census when the conditions
/// hold.
pub fn casimir_criterion_censuses(
    p: &Parabolic,
    w_module: &RepModule,
    k_max: usize,
) -> Vec<BTreeMap<Weight, usize>> {
    assert!(
        p.levi_roots.is_empty(),
        "the light Casimir census needs a Cartan Levi part"
    );
    let gl = &p.gl;
    let raising: Vec<_> = gl.basis().into_iter().filter(|&(i, j)| i < j).collect();
    let hw = w_module.highest_weight_vectors(&raising);
    let lambda = hw[0].0.clone();
    let target = crate::rep::casimir_scalar_of_weight(gl, &lambda);
    let mut out = Vec::new();
    for k in 0..=k_max {
        let mut census: BTreeMap<Weight, usize> = BTreeMap::new();
        for mono in nbar_wedge_monomials(p, k) {
            let mut mono_weight = Weight::zero(gl.size());
            for &g in &mono {
                mono_weight = mono_weight.add(&gl.basis_weight(p.nbar_basis[g]));
            }
            for wv in &w_module.weights {
                let mu = mono_weight.add(wv);
                if crate::rep::casimir_scalar_of_weight(gl, &mu) == target {
                    *census.entry(mu).or_insert(0) += 1;
                }
            }
        }
        out.push(census);
    }
    out
}

/// Everything the resolution of one module produces.
pub struct Resolution {
    pub condition: ConditionReport,
    pub admissible: bool,
    pub levels: ResolutionLevels,
    pub w_census: BTreeMap<Weight, usize>,
}

/// Build the resolution data of a module W for a parabolic: the
/// admissibility check (second variant), the nbar-wedge cohomology per
/// degree, and the weight censuses that feed the Euler verification. When
/// the triple is inadmissible the descriptors are still computed through
/// the rank route (the negative control), with `admissible = false`.
pub fn build_resolution(
    p: &Parabolic,
    star: &StarMap,
    w_module: &RepModule,
    k_max: usize,
) -> Result<Resolution, ConsistencyError> {
    let condition = check_conditions(p, star, ConditionVariant::NecCond2);
    let admissible = condition.invariance_ok;
    let mut cc = if admissible {
        ChainComplex::build(
            p,
            star,
            ConditionVariant::NecCond2,
            ChainSide::WedgeNbar,
            w_module,
            k_max + 1,
        )?
    } else {
        ChainComplex::build_codiff_only(
            p,
            star,
            ConditionVariant::NecCond2,
            ChainSide::WedgeNbar,
            w_module,
            k_max + 1,
        )?
    };
    let levels = resolution_levels(&mut cc, k_max, admissible)?;
    if admissible {
        // dual-side cross-check (Lemma-style duality): the descriptor must
        // equal the g0-dual of the n-wedge cohomology of W*
        let dual_star = StarMap::Dualized(Box::new(star.clone()));
        if let Ok(mut v_side) = ChainComplex::build(
            p,
            &dual_star,
            ConditionVariant::NecCond,
            ChainSide::WedgeN,
            &w_module.dual(),
            k_max + 1,
        ) {
            for k in 0..=k_max {
                let (dim, hw_list) = crate::chains::dual_transported_summary(&mut v_side, k)?;
                if dim != levels.descriptors[k].harmonic_dim
                    || hw_list != levels.descriptors[k].hw_list
                {
                    return Err(ConsistencyError(format!(
                        "dual-side cohomology disagrees at level {k}"
                    )));
                }
            }
        }
    }
    let w_census = w_module.weight_census();
    Ok(Resolution {
        condition,
        admissible,
        levels,
        w_census,
    })
}

/// Per-weight disagreements between two census sequences: the list of
/// (level, weight) pairs where the multiplicities differ.
pub fn census_disagreements(
    a: &[BTreeMap<Weight, usize>],
    b: &[BTreeMap<Weight, usize>],
) -> Vec<(usize, Weight)> {
    let mut out = Vec::new();
    for k in 0..a.len().min(b.len()) {
        let mut keys: Vec<&Weight> = a[k].keys().chain(b[k].keys()).collect();
        keys.sort();
        keys.dedup();
        for w in keys {
            if a[k].get(w) != b[k].get(w) {
                out.push((k, w.clone()));
            }
        }
    }
    out
}

/// The computational content of the tail of the resolution: H^0 is the
/// irreducible p-module with the highest weight of W, and the per-weight
/// identity dim W_μ = mult(V^{H^0}, μ) - mult(V^{H^1}, μ) + ... over a box
/// covering the W-weights.
pub struct TailReport {
    pub h0: VermaDescriptor,
    pub h1: VermaDescriptor,
    pub h0_is_hw_line: bool,
    pub euler: Vec<EulerVerdict>,
}

pub fn submodule_consequence(
    p: &Parabolic,
    star: &StarMap,
    w_module: &RepModule,
) -> Result<TailReport, ConsistencyError> {
    let gl = &p.gl;
    let raising: Vec<_> = gl.basis().into_iter().filter(|&(i, j)| i < j).collect();
    let hw = w_module.highest_weight_vectors(&raising);
    let lambda = hw[0].0.clone();
    let bx = WeightBox::covering(&w_module.weights);
    let k_max = required_k_max(gl, &w_module.weight_census(), &bx);
    let res = build_resolution(p, star, w_module, k_max.max(1))?;
    let h0 = res.levels.descriptors[0].clone();
    let h1 = res.levels.descriptors[1].clone();
    let h0_is_hw_line = h0.hw_list.len() == 1
        && h0.hw_list.get(&lambda).copied() == Some(1);
    let euler = euler_check(p, &res.levels.censuses, &res.w_census, &bx);
    Ok(TailReport {
        h0,
        h1,
        h0_is_hw_line,
        euler,
    })
}
