//! Factorization of Weyl elements between associate subsets of simple roots.
//!
//! For `w ∈ W(θ, θ')` the chain walks `θ = θ_1, θ_2, …, θ_k = θ'`. Each step
//! adds one simple root `α_i` to `θ_i`, forming `Δ_i = θ_i ∪ {α_i}`, and uses
//! the elementary element `w_i = w_{l,Δ_i} w_{l,θ_i}`, which carries `θ_i`
//! onto `θ_{i+1} ⊆ Δ_i`. The remainder `w'_{i+1} = w'_i w_i⁻¹` shrinks until
//! it is the identity, giving `w = w_{k-1} ⋯ w_1`.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::datum::GroupDatum;
use crate::error::{Error, Result};
use crate::roots::{act, act_set, positive_roots, positive_roots_of_subset, simple_roots, Root};
use crate::weyl::{enumerate_weyl, longest_element, SignedPerm, DEFAULT_CAP};

/// A subset of the simple roots, stored as roots.
pub type Theta = BTreeSet<Root>;

/// One elementary factor of a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub theta_i: Theta,
    pub alpha_i: Root,
    /// `w_{l,Δ_i} w_{l,θ_i}`.
    pub w_i: SignedPerm,
    /// The remainder before this step.
    pub w_prime_i: SignedPerm,
}

/// A full factorization of `w` from `θ` to `θ'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub theta: Theta,
    pub theta_prime: Theta,
    pub w: SignedPerm,
    pub steps: Vec<ChainStep>,
}

/// Compact export record: one per factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainExport {
    pub theta: Vec<String>,
    pub alpha: String,
    pub w_cycles: String,
}

impl Chain {
    pub fn export(&self) -> Vec<ChainExport> {
        self.steps
            .iter()
            .map(|s| ChainExport {
                theta: s.theta_i.iter().map(|r| r.to_string()).collect(),
                alpha: s.alpha_i.to_string(),
                w_cycles: s.w_i.to_cycles(),
            })
            .collect()
    }

    /// `w_{k-1} ⋯ w_1`.
    pub fn product(&self) -> SignedPerm {
        self.steps.iter().fold(SignedPerm::identity(self.w.group()), |acc, s| s.w_i.mul(&acc))
    }
}

/// Longest elements of parabolic subgroups, cached by subset.
#[derive(Debug, Default)]
pub struct LongestCache {
    map: HashMap<Theta, SignedPerm>,
}

impl LongestCache {
    pub fn get(&mut self, g: GroupDatum, theta: &Theta) -> SignedPerm {
        self.map.entry(theta.clone()).or_insert_with(|| longest_element(g, theta)).clone()
    }
}

/// Parse a comma-separated list of simple roots such as `e1-e2,e3`.
pub fn parse_theta(g: GroupDatum, text: &str) -> Result<Theta> {
    let delta: BTreeSet<Root> = simple_roots(g).into_iter().collect();
    let mut out = Theta::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let root: Root = part.parse()?;
        if !delta.contains(&root) {
            return Err(Error::BadParameter(format!("{root} is not a simple root of {g}")));
        }
        out.insert(root);
    }
    Ok(out)
}

/// Every `w ∈ W` with `wθ = θ'`.
pub fn weyl_between(g: GroupDatum, theta: &Theta, theta_prime: &Theta) -> Result<Vec<SignedPerm>> {
    weyl_between_capped(g, theta, theta_prime, DEFAULT_CAP)
}

pub fn weyl_between_capped(g: GroupDatum, theta: &Theta, theta_prime: &Theta, cap: u128) -> Result<Vec<SignedPerm>> {
    if theta.len() != theta_prime.len() {
        return Ok(Vec::new());
    }
    Ok(enumerate_weyl(g, cap)?.into_iter().filter(|w| &act_set(w, theta) == theta_prime).collect())
}

/// `{α ∈ Σ⁺ ∖ Σ_θ⁺ : wα < 0}`.
pub fn root_set_n(w: &SignedPerm, theta: &Theta) -> BTreeSet<Root> {
    let g = w.group();
    let inside = positive_roots_of_subset(g, theta);
    positive_roots(g)
        .into_iter()
        .filter(|a| !inside.contains(a) && !act(w, a).is_positive())
        .collect()
}

/// Factor `w ∈ W(θ, θ')`, choosing at each step the first simple root outside
/// `θ_i` that the remainder sends to a negative root.
pub fn langlands_chain(theta: &Theta, w: &SignedPerm) -> Result<Chain> {
    langlands_chain_cached(theta, w, &mut LongestCache::default())
}

pub fn langlands_chain_cached(theta: &Theta, w: &SignedPerm, cache: &mut LongestCache) -> Result<Chain> {
    let g = w.group();
    let delta = simple_roots(g);
    if let Some(a) = theta.iter().find(|a| !delta.contains(a)) {
        return Err(Error::BadParameter(format!("{a} is not a simple root")));
    }
    let theta_prime = act_set(w, theta);
    if !theta_prime.iter().all(|a| delta.contains(a)) {
        return Err(Error::BadParameter(format!("{w} does not carry the subset into the simple roots")));
    }
    let mut steps = Vec::new();
    let mut current = theta.clone();
    let mut rest = w.clone();
    let limit = positive_roots(g).len() + 1;
    while !rest.is_identity() {
        let alpha = delta
            .iter()
            .find(|a| !current.contains(a) && !act(&rest, a).is_positive())
            .copied();
        let Some(alpha) = alpha else {
            return Err(Error::ChainStuck { step: steps.len() + 1, remainder: rest.to_cycles() });
        };
        if steps.len() >= limit {
            return Err(Error::ChainStuck { step: steps.len() + 1, remainder: rest.to_cycles() });
        }
        let mut big = current.clone();
        big.insert(alpha);
        let w_i = cache.get(g, &big).mul(&cache.get(g, &current));
        let next = act_set(&w_i, &current);
        steps.push(ChainStep { theta_i: current, alpha_i: alpha, w_i: w_i.clone(), w_prime_i: rest.clone() });
        rest = rest.mul(&w_i.inverse());
        current = next;
    }
    Ok(Chain { theta: theta.clone(), theta_prime, w: w.clone(), steps })
}

/// Outcome of checking one chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub pass: bool,
    pub steps: usize,
    /// Index (from 1) of the first failing step, or 0 for a chain-level failure.
    pub failing_step: Option<usize>,
    pub detail: Option<String>,
}

/// Check the product identity, that each `θ_{i+1}` lies in `Δ_i`, the
/// disjoint decomposition `N(w'_i) = N(w_i) ⊔ w_i⁻¹ N(w'_{i+1})`, and
/// additivity of the sizes along the chain.
pub fn verify_decomposition(chain: &Chain) -> DecompositionReport {
    let fail = |i: usize, d: String| DecompositionReport {
        pass: false,
        steps: chain.steps.len(),
        failing_step: Some(i),
        detail: Some(d),
    };
    if chain.product() != chain.w {
        return fail(0, format!("product {} differs from {}", chain.product(), chain.w));
    }
    let g = chain.w.group();
    let mut thetas: Vec<Theta> = chain.steps.iter().map(|s| s.theta_i.clone()).collect();
    let mut sizes = Vec::new();
    for (idx, s) in chain.steps.iter().enumerate() {
        let i = idx + 1;
        let next_theta = act_set(&s.w_i, &s.theta_i);
        let mut big = s.theta_i.clone();
        big.insert(s.alpha_i);
        if !next_theta.is_subset(&big) {
            return fail(i, "conjugate subset leaves Δ_i".into());
        }
        let next_rest = chain.steps.get(idx + 1).map(|t| t.w_prime_i.clone()).unwrap_or_else(|| SignedPerm::identity(g));
        if s.w_prime_i.mul(&s.w_i.inverse()) != next_rest {
            return fail(i, "remainder recursion broken".into());
        }
        let whole = root_set_n(&s.w_prime_i, &s.theta_i);
        let own = root_set_n(&s.w_i, &s.theta_i);
        let inv = s.w_i.inverse();
        let pulled: BTreeSet<Root> = root_set_n(&next_rest, &next_theta).iter().map(|a| act(&inv, a)).collect();
        if !own.is_disjoint(&pulled) {
            return fail(i, "the two parts overlap".into());
        }
        let union: BTreeSet<Root> = own.union(&pulled).copied().collect();
        if union != whole {
            return fail(i, format!("{} roots expected, union has {}", whole.len(), union.len()));
        }
        sizes.push((whole.len(), own.len()));
        thetas.push(next_theta);
    }
    if thetas.last().unwrap_or(&chain.theta) != &chain.theta_prime {
        return fail(chain.steps.len(), "chain does not end at θ'".into());
    }
    for i in 0..sizes.len() {
        let tail: usize = sizes[i..].iter().map(|p| p.1).sum();
        if tail != sizes[i].0 {
            return fail(i + 1, "lengths do not add".into());
        }
    }
    DecompositionReport { pass: true, steps: chain.steps.len(), failing_step: None, detail: None }
}

/// Totals from checking every chain of one group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSweep {
    pub group: GroupDatum,
    pub subsets: usize,
    pub chains: usize,
    pub failures: Vec<String>,
}

/// Build and check the chain of every `(θ, w)` with `wθ ⊆ Δ`.
pub fn sweep_chains(g: GroupDatum) -> Result<ChainSweep> {
    let delta = simple_roots(g);
    let all = enumerate_weyl(g, DEFAULT_CAP)?;
    let subsets: Vec<Theta> = (0u32..1 << delta.len())
        .map(|mask| delta.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| *a).collect())
        .collect();
    let per_subset: Vec<(usize, Vec<String>)> = subsets
        .par_iter()
        .map(|theta| {
            let mut cache = LongestCache::default();
            let mut count = 0;
            let mut failures = Vec::new();
            for w in &all {
                if !act_set(w, theta).iter().all(|a| delta.contains(a)) {
                    continue;
                }
                count += 1;
                let label = || format!("{g} theta={{{}}} w={w}", theta.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
                match langlands_chain_cached(theta, w, &mut cache) {
                    Ok(chain) => {
                        let rep = verify_decomposition(&chain);
                        if !rep.pass {
                            failures.push(format!("{}: step {:?} {}", label(), rep.failing_step, rep.detail.unwrap_or_default()));
                        }
                    }
                    Err(e) => failures.push(format!("{}: {e}", label())),
                }
            }
            (count, failures)
        })
        .collect();
    Ok(ChainSweep {
        group: g,
        subsets: subsets.len(),
        chains: per_subset.iter().map(|p| p.0).sum(),
        failures: per_subset.into_iter().flat_map(|p| p.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::GroupKind::*;
    use crate::roots::inversions;

    fn g(kind: crate::datum::GroupKind, r: usize) -> GroupDatum {
        GroupDatum::new(kind, r).unwrap()
    }

    #[test]
    fn longest_of_everything_is_minus_one_for_odd() {
        let gr = g(SoOdd, 3);
        let all: Theta = simple_roots(gr).into_iter().collect();
        let w = longest_element(gr, &all);
        assert!((1..=3).all(|i| w.apply(i) == gr.prime(i)));
        assert_eq!(inversions(&w).len(), positive_roots(gr).len());
    }

    #[test]
    fn longest_of_so_even_odd_rank_fixes_last_sign() {
        let gr = g(SoEven, 3);
        let all: Theta = simple_roots(gr).into_iter().collect();
        let w = longest_element(gr, &all);
        assert_eq!(w.to_cycles(), "(1 6)(2 5)");
    }

    #[test]
    fn identity_gives_empty_chain() {
        let gr = g(UOdd, 3);
        let theta = parse_theta(gr, "e1-e2").unwrap();
        let c = langlands_chain(&theta, &SignedPerm::identity(gr)).unwrap();
        assert!(c.steps.is_empty());
        assert!(verify_decomposition(&c).pass);
    }

    #[test]
    fn maximal_subset_takes_one_step() {
        let gr = g(SoOdd, 3);
        let delta = simple_roots(gr);
        let theta: Theta = delta[1..].iter().copied().collect();
        let all: Theta = delta.iter().copied().collect();
        let w = longest_element(gr, &all).mul(&longest_element(gr, &theta));
        let c = langlands_chain(&theta, &w).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!(c.steps[0].w_i, w);
    }

    #[test]
    fn full_subset_pair_is_identity_or_diagram() {
        let gr = g(SoEven, 4);
        let all: Theta = simple_roots(gr).into_iter().collect();
        let ws = weyl_between(gr, &all, &all).unwrap();
        assert_eq!(ws.len(), 1);
        let gr = g(SoEven, 3);
        let all: Theta = simple_roots(gr).into_iter().collect();
        assert_eq!(weyl_between(gr, &all, &all).unwrap().len(), 1);
    }
}
