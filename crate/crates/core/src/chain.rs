//! Down-up and local walks on pure complexes, with exact transition
//! matrices and floating-point spectral measurements.
//!
//! All chains built here have a uniform distribution on facets. Matrices
//! are kept as exact rationals; only the eigensolve is `f64`.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, SymmetricEigen};
use num::{One, Signed, Zero};

use crate::error::{Error, Guard, Result};
use crate::matroid::{enumerate_bases, MatroidOracle};
use crate::nbc::NbcComplex;
use crate::rational::{self, Rational};

pub const MAX_PROFILE_FACES: usize = 200_000;

/// Sentinel γ for local walks with at most one state.
pub const DEGENERATE_GAMMA: f64 = -1.0;

/// A pure complex given by its facets, with uniform weight on facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetComplex {
    dimension: usize,
    facets: Vec<Vec<usize>>,
}

impl FacetComplex {
    /// Facets are sorted and deduplicated; all must share one size.
    pub fn new(facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        facets.sort();
        facets.dedup();
        let Some(first) = facets.first() else {
            return Err(Error::invalid("a complex needs at least one facet"));
        };
        let dimension = first.len();
        if let Some(bad) = facets.iter().find(|f| f.len() != dimension) {
            return Err(Error::invalid(format!(
                "mixed facet sizes: {dimension} and {} ({bad:?})",
                bad.len()
            )));
        }
        if let Some(bad) = facets.iter().find(|f| f.windows(2).any(|w| w[0] == w[1])) {
            return Err(Error::invalid(format!("facet {bad:?} repeats an element")));
        }
        Ok(FacetComplex { dimension, facets })
    }

    /// The broken circuit complex, via its NBC bases.
    pub fn from_nbc<M: MatroidOracle>(x: &NbcComplex<M>, guard: Guard) -> Result<Self> {
        Self::new(x.enumerate_nbc_bases(guard)?)
    }

    /// The link `X_τ` of an NBC complex.
    pub fn from_link<M: MatroidOracle>(x: &NbcComplex<M>, tau: &[usize], guard: Guard) -> Result<Self> {
        Self::new(x.link_facets(tau, guard)?)
    }

    /// The independence complex, via the bases of `m`.
    pub fn from_bases<M: MatroidOracle + ?Sized>(m: &M, guard: Guard) -> Result<Self> {
        Self::new(enumerate_bases(m, guard)?)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn is_face(&self, tau: &[usize]) -> bool {
        self.facets.iter().any(|f| contains_all(f, tau))
    }

    /// All distinct faces of size `k`, lexicographic.
    pub fn faces_of_size(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            for_each_subset(f, k, &mut |s| {
                out.insert(s.to_vec());
            });
        }
        out.into_iter().collect()
    }
}

fn contains_all(sorted_facet: &[usize], s: &[usize]) -> bool {
    s.iter().all(|x| sorted_facet.binary_search(x).is_ok())
}

fn for_each_subset(items: &[usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, visit);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), visit);
}

/// Row-sparse exact transition matrix over labeled states.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    states: Vec<Vec<usize>>,
    rows: Vec<BTreeMap<usize, Rational>>,
    stationary: Option<Vec<Rational>>,
}

impl StochasticMatrix {
    /// Validates nonnegativity and exact unit row sums.
    pub fn new(states: Vec<Vec<usize>>, rows: Vec<BTreeMap<usize, Rational>>) -> Result<Self> {
        if states.len() != rows.len() {
            return Err(Error::invalid("state and row counts differ"));
        }
        let n = states.len();
        for (i, row) in rows.iter().enumerate() {
            let mut sum = Rational::zero();
            for (&j, p) in row {
                if j >= n {
                    return Err(Error::invalid(format!("row {i} has column {j} out of range")));
                }
                if p.is_negative() {
                    return Err(Error::invalid(format!("negative entry at ({i},{j})")));
                }
                sum += p;
            }
            if !sum.is_one() {
                return Err(Error::invalid(format!(
                    "row {i} sums to {}",
                    rational::format(&sum)
                )));
            }
        }
        let mut rows = rows;
        for row in &mut rows {
            row.retain(|_, p| !p.is_zero());
        }
        Ok(StochasticMatrix {
            states,
            rows,
            stationary: None,
        })
    }

    pub fn from_dense(states: Vec<Vec<usize>>, dense: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = dense
            .into_iter()
            .map(|r| r.into_iter().enumerate().filter(|(_, p)| !p.is_zero()).collect())
            .collect();
        Self::new(states, rows)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, Rational> {
        &self.rows[i]
    }

    /// A reversing measure attached by the builder, if any.
    pub fn stationary(&self) -> Option<&[Rational]> {
        self.stationary.as_deref()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().all(|(&j, p)| self.rows[j].get(&i) == Some(p)))
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        let mut col = vec![Rational::zero(); self.len()];
        for row in &self.rows {
            for (&j, p) in row {
                col[j] += p;
            }
        }
        col.iter().all(|c| c.is_one())
    }

    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, p) in row {
                m[(i, j)] = rational::to_f64(p);
            }
        }
        m
    }

    /// A measure `π` with `π(i)P(i,j) = π(j)P(j,i)`, exact.
    ///
    /// Uses the attached stationary vector when present, otherwise builds
    /// one along a BFS of the transition graph (one root per component).
    pub fn reversing_measure(&self) -> Result<Vec<Rational>> {
        let pi = match &self.stationary {
            Some(pi) => pi.clone(),
            None => {
                let n = self.len();
                let mut pi: Vec<Option<Rational>> = vec![None; n];
                for root in 0..n {
                    if pi[root].is_some() {
                        continue;
                    }
                    pi[root] = Some(Rational::one());
                    let mut queue = vec![root];
                    while let Some(i) = queue.pop() {
                        let pi_i = pi[i].clone().unwrap();
                        for (&j, p) in &self.rows[i] {
                            if pi[j].is_some() {
                                continue;
                            }
                            let back = self.entry(j, i);
                            if back.is_zero() {
                                return Err(Error::precondition(format!(
                                    "not reversible: P({i},{j}) > 0 but P({j},{i}) = 0"
                                )));
                            }
                            pi[j] = Some(&pi_i * p / back);
                            queue.push(j);
                        }
                    }
                }
                pi.into_iter().map(Option::unwrap).collect()
            }
        };
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, p) in row {
                if &pi[i] * p != &pi[j] * self.entry(j, i) {
                    return Err(Error::precondition(format!(
                        "not reversible: detailed balance fails for pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(pi)
    }

    /// All eigenvalues, descending, of the matrix symmetrized by its
    /// reversing measure.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        let pi = self.reversing_measure()?;
        let sqrt_pi: Vec<f64> = pi.iter().map(|p| rational::to_f64(p).sqrt()).collect();
        let mut sym = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, p) in row {
                sym[(i, j)] = rational::to_f64(p) * sqrt_pi[i] / sqrt_pi[j];
            }
        }
        // Average with the transpose to remove rounding asymmetry.
        let sym = (&sym + sym.transpose()) * 0.5;
        let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// Second-largest eigenvalue; `None` for a single state.
    pub fn second_eigenvalue(&self) -> Result<Option<f64>> {
        Ok(self.eigenvalues()?.get(1).copied())
    }

    fn check_state_subset(&self, s: &[usize]) -> Result<Vec<bool>> {
        let n = self.len();
        let mut member = vec![false; n];
        for &i in s {
            if i >= n {
                return Err(Error::invalid(format!("state {i} out of range 0..{n}")));
            }
            if member[i] {
                return Err(Error::invalid(format!("state {i} repeated")));
            }
            member[i] = true;
        }
        if s.is_empty() || s.len() == n {
            return Err(Error::precondition("state subset must be nonempty and proper"));
        }
        if !self.is_doubly_stochastic() {
            return Err(Error::precondition(
                "conductance needs a doubly stochastic (uniform-stationary) matrix",
            ));
        }
        Ok(member)
    }
}

/// The down-up walk on the facets of `c` under the uniform distribution.
pub fn down_up_matrix(c: &FacetComplex) -> StochasticMatrix {
    let d = c.dimension;
    let n = c.facets.len();
    let mut states: Vec<Vec<usize>> = c.facets.clone();
    if d == 0 {
        // Only the empty facet exists.
        let mut row = BTreeMap::new();
        row.insert(0, Rational::one());
        return StochasticMatrix {
            states,
            rows: vec![row],
            stationary: None,
        };
    }
    let mut lower: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (idx, f) in c.facets.iter().enumerate() {
        for skip in 0..d {
            let mut key = f.clone();
            key.remove(skip);
            lower.entry(key).or_default().push(idx);
        }
    }
    let mut rows = vec![BTreeMap::new(); n];
    let inv_d = rational::frac(1, d as i64);
    for (idx, f) in c.facets.iter().enumerate() {
        for skip in 0..d {
            let mut key = f.clone();
            key.remove(skip);
            let up = &lower[&key];
            let p = &inv_d / rational::int(up.len() as i64);
            for &j in up {
                *rows[idx].entry(j).or_insert_with(Rational::zero) += &p;
            }
        }
    }
    states.shrink_to_fit();
    StochasticMatrix {
        states,
        rows,
        stationary: None,
    }
}

/// The local walk `P_τ` on the link ground set, with its exact stationary
/// distribution (element marginals of the uniform link distribution).
pub fn local_walk_matrix(c: &FacetComplex, tau: &[usize]) -> Result<StochasticMatrix> {
    let d = c.dimension;
    let k = tau.len();
    if k + 2 > d {
        return Err(Error::precondition(format!(
            "face size {k} exceeds d − 2 = {}",
            d as i64 - 2
        )));
    }
    let mut tau_sorted = tau.to_vec();
    tau_sorted.sort_unstable();
    if tau_sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("face repeats an element"));
    }
    let link: Vec<Vec<usize>> = c
        .facets
        .iter()
        .filter(|f| contains_all(f, &tau_sorted))
        .map(|f| f.iter().copied().filter(|x| tau_sorted.binary_search(x).is_err()).collect())
        .collect();
    if link.is_empty() {
        return Err(Error::precondition(format!("{tau:?} is not a face")));
    }
    Ok(walk_from_link(&link, d - k))
}

/// Local walk given the link facets (each of size `size ≥ 2`).
fn walk_from_link(link: &[Vec<usize>], size: usize) -> StochasticMatrix {
    let ground: Vec<usize> = link
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<usize, usize> = ground.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = ground.len();
    let mut single = vec![0u64; n];
    let mut pair: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); n];
    for f in link {
        let ids: Vec<usize> = f.iter().map(|x| index[x]).collect();
        for &a in &ids {
            single[a] += 1;
            for &b in &ids {
                if a != b {
                    *pair[a].entry(b).or_insert(0) += 1;
                }
            }
        }
    }
    let scale = (size - 1) as i64;
    let rows: Vec<BTreeMap<usize, Rational>> = (0..n)
        .map(|a| {
            pair[a]
                .iter()
                .map(|(&b, &cnt)| (b, rational::frac(cnt as i64, scale * single[a] as i64)))
                .collect()
        })
        .collect();
    let total: u64 = single.iter().sum();
    let stationary = single
        .iter()
        .map(|&s| rational::frac(s as i64, total as i64))
        .collect();
    StochasticMatrix {
        states: ground.into_iter().map(|x| vec![x]).collect(),
        rows,
        stationary: Some(stationary),
    }
}

/// `1 − λ₂`. A single-state chain has no second eigenvalue and reports 1.
pub fn spectral_gap(p: &StochasticMatrix) -> Result<f64> {
    Ok(p.second_eigenvalue()?.map_or(1.0, |l2| 1.0 - l2))
}

/// Crossing mass out of `s` divided by `|s|`.
pub fn conductance(p: &StochasticMatrix, s: &[usize]) -> Result<Rational> {
    let member = p.check_state_subset(s)?;
    let crossing: Rational = s
        .iter()
        .flat_map(|&i| p.rows[i].iter().filter(|(j, _)| !member[**j]).map(|(_, v)| v))
        .sum();
    Ok(crossing / rational::int(s.len() as i64))
}

/// `|N(s)| / |s|` where `N(s)` are outside states reachable in one step.
pub fn neighbor_ratio(p: &StochasticMatrix, s: &[usize]) -> Result<Rational> {
    let member = p.check_state_subset(s)?;
    let neighbors: BTreeSet<usize> = s
        .iter()
        .flat_map(|&i| p.rows[i].keys().copied().filter(|j| !member[*j]))
        .collect();
    Ok(rational::frac(neighbors.len() as i64, s.len() as i64))
}

/// Per-dimension maxima of local-walk second eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalProfile {
    gammas: Vec<f64>,
}

impl LocalProfile {
    pub fn new(gammas: Vec<f64>) -> Result<Self> {
        if let Some(g) = gammas.iter().find(|g| !(-1.0 - 1e-9..=1.0 + 1e-9).contains(*g)) {
            return Err(Error::invalid(format!("γ = {g} outside [−1, 1]")));
        }
        Ok(LocalProfile { gammas })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn max(&self) -> Option<f64> {
        self.gammas.iter().copied().reduce(f64::max)
    }

    /// `max_i γ_i·(r − i)`: the quantity an `O(1)/(r−i)` local expansion
    /// bound would keep bounded.
    pub fn scaled_max(&self, rank: usize) -> Option<f64> {
        self.gammas
            .iter()
            .enumerate()
            .map(|(i, g)| g * (rank - i) as f64)
            .reduce(f64::max)
    }
}

/// γ_k = max λ₂(P_τ) over faces τ of size k, for 0 ≤ k ≤ d − 2.
pub fn local_spectral_profile(c: &FacetComplex, guard: Guard) -> Result<LocalProfile> {
    let d = c.dimension;
    if d < 2 {
        return LocalProfile::new(Vec::new());
    }
    // Facet indices containing each face of size ≤ d − 2.
    let mut containing: Vec<BTreeMap<Vec<usize>, Vec<usize>>> = vec![BTreeMap::new(); d - 1];
    for (idx, f) in c.facets.iter().enumerate() {
        for (k, by_face) in containing.iter_mut().enumerate() {
            for_each_subset(f, k, &mut |s| by_face.entry(s.to_vec()).or_default().push(idx));
        }
        let faces = containing.iter().map(BTreeMap::len).sum();
        guard.check("face count", faces, MAX_PROFILE_FACES)?;
    }
    let mut gammas = Vec::with_capacity(d - 1);
    for (k, by_face) in containing.iter().enumerate() {
        let mut gamma: Option<f64> = None;
        for (tau, idxs) in by_face {
            let link: Vec<Vec<usize>> = idxs
                .iter()
                .map(|&i| {
                    c.facets[i]
                        .iter()
                        .copied()
                        .filter(|x| tau.binary_search(x).is_err())
                        .collect()
                })
                .collect();
            let walk = walk_from_link(&link, d - k);
            if walk.len() <= 1 {
                continue;
            }
            let l2 = walk.second_eigenvalue()?.expect("at least two states");
            gamma = Some(gamma.map_or(l2, |g| g.max(l2)));
        }
        gammas.push(gamma.unwrap_or(DEGENERATE_GAMMA).clamp(-1.0, 1.0));
    }
    LocalProfile::new(gammas)
}

/// `(1/d)·∏_{j=0}^{d−2} (1 − γ_j)`.
pub fn local_to_global_bound(profile: &LocalProfile, d: usize) -> Result<f64> {
    if d == 0 || profile.gammas.len() != d - 1 {
        return Err(Error::invalid(format!(
            "profile has {} entries, expected d − 1 = {}",
            profile.gammas.len(),
            d as i64 - 1
        )));
    }
    Ok(profile.gammas.iter().map(|g| 1.0 - g).product::<f64>() / d as f64)
}
