//! Padding a graph with copies of `K₈` and the exact counting identities
//! that make the padding work.

use std::collections::HashMap;

use num::{BigInt, One, Zero};

use crate::error::{Error, Guard, Result};
use crate::graph::{
    build_named_graph, count_independent_sets_by_size, disjoint_union, for_each_independent_set, MultiGraph,
    NamedGraph, SizeCounts, MAX_INDEPENDENT_SET_VERTICES,
};
use crate::rational::{self, Rational};

/// Largest `r` for which the identities are checked by enumerating every
/// independent set of the padded graph.
pub const MAX_HARDCORE_EXHAUSTIVE_R: usize = 3;

/// `g` followed by `r` disjoint copies of `K₈`.
pub fn build_hardcore_reduction(g: &MultiGraph, r: usize) -> Result<MultiGraph> {
    let k8 = build_named_graph(&NamedGraph::Complete(8))?;
    let mut parts = vec![g.clone()];
    parts.extend(std::iter::repeat_n(k8, r));
    Ok(disjoint_union(&parts))
}

/// `λ_c(Δ) = (Δ−1)^{Δ−1} / (Δ−2)^Δ`.
pub fn critical_threshold(delta: usize) -> Result<Rational> {
    if delta < 3 {
        return Err(Error::invalid(format!("critical threshold needs degree >= 3, got {delta}")));
    }
    let d = delta as i64;
    Ok(rational::pow(&rational::int(d - 1), delta - 1) / rational::pow(&rational::int(d - 2), delta))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl IdentityCheck {
    fn new(name: &'static str) -> Self {
        IdentityCheck { name, cases: 0, failures: Vec::new() }
    }

    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardcoreReport {
    pub r: usize,
    /// Whether direct counts came from full enumeration of `G′`.
    pub exhaustive: bool,
    pub padded_counts: SizeCounts,
    pub checks: Vec<IdentityCheck>,
}

impl HardcoreReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn closed_form(r: usize, m: usize) -> BigInt {
    if m > r {
        return BigInt::zero();
    }
    rational::binomial(r, m) * num::pow(BigInt::from(8), m)
}

fn ratio(num: &BigInt, den: &BigInt) -> Rational {
    Rational::new(num.clone(), den.clone())
}

/// `(1/8^j) ∏_{i<j} (t−i)/(r−t+j−i)`, the predicted `i_{t−j}(rK₈)/i_t(rK₈)`.
fn predicted_ratio(r: usize, t: usize, j: usize) -> Rational {
    (0..j).fold(Rational::one() / rational::pow(&rational::int(8), j), |acc, i| {
        acc * rational::frac((t - i) as i64, (r + j - t - i) as i64)
    })
}

/// `8(r−k+|S|+1)/(k−|S|)`, the predicted `|T_{S,k}|/|T_{S,k−1}|`.
fn predicted_successor(r: usize, k: usize, s: usize) -> Rational {
    rational::frac(8 * (r + s + 1 - k) as i64, (k - s) as i64)
}

/// Checks, exactly:
/// * `closed_form`: `i_m(rK₈) = C(r,m)·8^m`;
/// * `convolution`: `i_t(G′) = Σ_j i_j(g)·i_{t−j}(rK₈)`;
/// * `ratio`: the product formula for `i_{t−j}(rK₈)/i_t(rK₈)`;
/// * `t_sets`: `|T_{S,k}| = C(r, k−|S|)·8^{k−|S|}` and its successor ratio.
///
/// Direct counts come from enumerating `G′` when `r` is small; otherwise
/// they come from independent machinery (repeated convolution and the
/// memoized counter) and `T_{S,k}` is checked on the formula side only.
pub fn verify_hardcore_identities(g: &MultiGraph, r: usize, guard: Guard) -> Result<HardcoreReport> {
    let n = g.vertex_count();
    let padded = build_hardcore_reduction(g, r)?;
    let base = count_independent_sets_by_size(g, guard)?;
    let exhaustive = r <= MAX_HARDCORE_EXHAUSTIVE_R && padded.vertex_count() <= MAX_INDEPENDENT_SET_VERTICES;

    // (S mask, |I|) -> number of independent sets I of G′ with I ∩ V(g) = S.
    let mut t_sets: HashMap<(u64, usize), u128> = HashMap::new();
    let (padded_counts, copies) = if exhaustive {
        let g_mask = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
        let mut by_size = vec![0u128; n + r + 1];
        for_each_independent_set(&padded, guard, |mask| {
            let k = mask.count_ones() as usize;
            by_size[k] += 1;
            *t_sets.entry((mask & g_mask, k)).or_default() += 1;
        })?;
        let copies: Vec<u128> = (0..=r).map(|k| t_sets.get(&(0, k)).copied().unwrap_or(0)).collect();
        (SizeCounts::new(by_size), SizeCounts::new(copies))
    } else {
        let k8 = count_independent_sets_by_size(&build_named_graph(&NamedGraph::Complete(8))?, guard)?;
        let copies = (0..r).fold(SizeCounts::new(vec![1]), |acc, _| acc.convolve(&k8));
        let padded_counts = if padded.vertex_count() <= MAX_INDEPENDENT_SET_VERTICES {
            count_independent_sets_by_size(&padded, guard)?
        } else {
            base.convolve(&copies)
        };
        (padded_counts, copies)
    };
    let big = |v: u128| BigInt::from(v);

    let mut a = IdentityCheck::new("closed_form");
    for m in 0..=r + 1 {
        let (got, want) = (big(copies.get(m)), closed_form(r, m));
        a.expect(got == want, || format!("i_{m}({r}K8) = {got}, closed form {want}"));
    }

    let mut b = IdentityCheck::new("convolution");
    for t in 0..=n + r {
        let want: BigInt = (0..=t.min(n)).map(|j| big(base.get(j)) * closed_form(r, t - j)).sum();
        let got = big(padded_counts.get(t));
        b.expect(got == want, || format!("i_{t}(G') = {got}, convolution gives {want}"));
    }

    let mut c = IdentityCheck::new("ratio");
    for t in 1..=r {
        for j in 1..=t {
            let direct = ratio(&big(copies.get(t - j)), &big(copies.get(t)));
            let want = predicted_ratio(r, t, j);
            c.expect(direct == want, || {
                format!(
                    "t = {t}, j = {j}: direct {} vs formula {}",
                    rational::format(&direct),
                    rational::format(&want)
                )
            });
        }
    }

    let mut d = IdentityCheck::new("t_sets");
    if exhaustive {
        let mut masks: Vec<u64> = t_sets.keys().map(|&(s, _)| s).collect();
        masks.sort_unstable();
        masks.dedup();
        for s_mask in masks {
            let s = s_mask.count_ones() as usize;
            let count = |k: usize| big(t_sets.get(&(s_mask, k)).copied().unwrap_or(0));
            for k in s..=s + r {
                let want = closed_form(r, k - s);
                d.expect(count(k) == want, || {
                    format!("S = {s_mask:#b}, k = {k}: |T| = {}, formula {want}", count(k))
                });
                if k > s {
                    let direct = ratio(&count(k), &count(k - 1));
                    let want = predicted_successor(r, k, s);
                    d.expect(direct == want, || {
                        format!(
                            "S = {s_mask:#b}, k = {k}: successor ratio {} vs {}",
                            rational::format(&direct),
                            rational::format(&want)
                        )
                    });
                }
            }
        }
    } else {
        for s in 0..=n {
            for k in s + 1..=s + r {
                let direct = ratio(&closed_form(r, k - s), &closed_form(r, k - s - 1));
                let want = predicted_successor(r, k, s);
                d.expect(direct == want, || format!("|S| = {s}, k = {k}: closed-form successor ratio mismatch"));
            }
        }
    }

    Ok(HardcoreReport {
        r,
        exhaustive,
        padded_counts,
        checks: vec![a, b, c, d],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn k(n: usize) -> MultiGraph {
        build_named_graph(&NamedGraph::Complete(n)).unwrap()
    }

    #[test]
    fn padding_layout() {
        let g = build_hardcore_reduction(&k(3), 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (19, 59));
        assert_eq!(build_hardcore_reduction(&k(3), 0).unwrap(), k(3));
        assert_eq!(build_hardcore_reduction(&MultiGraph::empty(0), 1).unwrap(), k(8));
    }

    #[test]
    fn small_counts() {
        let report = verify_hardcore_identities(&k(3), 2, Guard::Enforce).unwrap();
        assert!(report.exhaustive);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.padded_counts.get(1), 19);
        assert_eq!(closed_form(2, 1), BigInt::from(16));
    }

    #[test]
    fn successor_ratio_r10() {
        assert_eq!(predicted_successor(10, 3, 1), int(36));
        let direct = ratio(&closed_form(10, 2), &closed_form(10, 1));
        assert_eq!(direct, int(36));
        let report = verify_hardcore_identities(&k(3), 10, Guard::Enforce).unwrap();
        assert!(!report.exhaustive);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn thresholds() {
        assert_eq!(critical_threshold(7).unwrap(), rational::frac(46656, 78125));
        assert_eq!(critical_threshold(3).unwrap(), int(4));
        assert!((rational::to_f64(&critical_threshold(7).unwrap()) - 0.597196).abs() < 1e-6);
        assert!(critical_threshold(2).is_err());
    }
}
