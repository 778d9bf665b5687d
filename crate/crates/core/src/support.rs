//! The obstruction calculus on `R_χ \ G / P` at the Weyl level.
//!
//! Every coset `w W_M` is sorted into one case of a fixed decision tree.
//! For each case the `x = 0` and `x ≠ 0` slots of the double cosets
//! `R_χ n(x) w P` get a verdict. The only survivor should be the longest
//! coset `w_0`.
//!
//! Root-set predicates such as `wΣ_P⁺ ∩ X` depend only on the coset, since
//! `W_M` permutes `Σ_P⁺`. Shape statements depend on the representative, so
//! they are evaluated over the normal-form family of the coset (every member
//! that is itself a product of normal-form factors).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::datum::{BesselDatum, Config, GroupDatum, GroupKind, LeviDatum};
use crate::error::{Error, Result};
use crate::roots::{act, alpha, bessel_x, linearly_independent, sigma_p_plus, simple_roots, Root, RootShape};
use crate::weyl::{
    coset_key, coset_reps_capped, levi_weyl_elements, normal_form, normal_form_family, w0_maximal, CosetNormalForm,
    SignedPerm, DEFAULT_CAP, W2,
};

/// Which branch of the decision tree a coset falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    /// Some `α ∈ Σ_P⁺` has `wα ∈ X` (used alone only in the Whittaker extension).
    P1,
    /// Some `α ∈ Σ_P⁺` has `wα ∈ X ∖ {α_ℓ}`.
    P2,
    /// `wΣ_P⁺ ∩ X = {α_ℓ}` and `w⁻¹α_ℓ = e_i + e_j` with `i, j <= n`.
    AlphaEllSumCase,
    /// `wΣ_P⁺ ∩ X = {α_ℓ}` otherwise.
    AlphaEllOtherCase,
    /// `wΣ_P⁺ ∩ X = ∅` and the coset is not `w_0`.
    RankReductionShape,
    W0,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::P1 => "P1",
            CaseTag::P2 => "P2",
            CaseTag::AlphaEllSumCase => "AlphaEllSumCase",
            CaseTag::AlphaEllOtherCase => "AlphaEllOtherCase",
            CaseTag::RankReductionShape => "RankReductionShape",
            CaseTag::W0 => "W0",
        };
        f.write_str(s)
    }
}

/// `α ∈ Σ_P⁺` together with its image `wα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Witness {
    pub alpha: Root,
    pub image: Root,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.alpha, self.image)
    }
}

/// The root `α_0 = e_ℓ ± e_{k_0}` (or the short root `e_ℓ`) pulled back into `Σ_P⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftRoot {
    /// `k_0`; the middle index `r + 1` marks the short root `e_ℓ`.
    pub k0: usize,
    /// `+1` for `e_ℓ + e_{k_0}`, `-1` for `e_ℓ - e_{k_0}`, `0` for the short root.
    pub sign: i8,
    pub alpha0: Root,
    /// `w⁻¹ α_0`, an element of `Σ_P⁺`.
    pub preimage: Root,
}

/// `w(e_n + e_ℓ) = e_ℓ ± e_k` on a chosen shape representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinalRoot {
    pub rep: SignedPerm,
    pub k: usize,
    pub sign: i8,
    pub image: Root,
}

/// A representative of the shape
/// `(1 r0)…(i0 i0')(i0+1 a)(a' (i0+1)')…(n a_n)(a_n' n')`
/// with every `a` in `{ℓ+2, …, (ℓ+2)'}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RankReductionShape {
    pub rep: SignedPerm,
    pub i0: usize,
    pub a_list: Vec<usize>,
    pub w2: W2,
    /// `w({α_n, …, α_ℓ, β})`.
    pub x1: Vec<Root>,
    pub x1_independent: bool,
}

/// A representative of the shape
/// `(1 r0)…(n1 n1')(n1+1 k_1)(k_1' (n1+1)')…(n k)(k' n')`
/// with every `k_j` in `{ℓ+1, …, (ℓ+1)'}` and some `k_j = (ℓ+1)'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AlphaEllShape {
    pub rep: SignedPerm,
    pub n1: usize,
    pub k_list: Vec<usize>,
    pub w2: W2,
}

/// Outcome for the `x = 0` slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum XZeroVerdict {
    Obstructed(Witness),
    /// Not claimed as non-support: the remaining argument is about minimality
    /// of the model, which is not combinatorial.
    RankReduction(RankReductionShape),
    Survivor,
    /// Fits no case.
    Unresolved,
}

/// Outcome for the `x ≠ 0` slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum XNonzeroVerdict {
    Obstructed(Witness),
    /// Conjugating by `n(x)` shifts the `β` coordinate of `α_0`'s root group.
    ObstructedViaShift(ShiftRoot),
    ObstructedViaFinalRoot(FinalRoot),
    /// Only `α_ℓ` is available. Conjugating its root group by `n(x)` gives
    /// character value `ψ(t(δ + c))` with `c` the corner entry of `n(x)`, so
    /// the slot is killed exactly off the quadric `c = -δ`.
    ObstructedOffQuadric(Witness),
    Survivor,
    /// `s = 0`, so no nonzero `x` exists.
    Vacuous,
    /// The claimed killing root was not found.
    Unresolved,
}

impl XZeroVerdict {
    pub fn label(&self) -> String {
        match self {
            XZeroVerdict::Obstructed(_) => "obstructed".into(),
            XZeroVerdict::RankReduction(_) => "rank-reduction".into(),
            XZeroVerdict::Survivor => "survivor".into(),
            XZeroVerdict::Unresolved => "unresolved".into(),
        }
    }
}

impl XNonzeroVerdict {
    pub fn label(&self) -> String {
        match self {
            XNonzeroVerdict::Obstructed(_) => "obstructed".into(),
            XNonzeroVerdict::ObstructedViaShift(_) => "obstructed-via-shift".into(),
            XNonzeroVerdict::ObstructedViaFinalRoot(_) => "obstructed-via-final-root".into(),
            XNonzeroVerdict::ObstructedOffQuadric(_) => "obstructed-off-quadric".into(),
            XNonzeroVerdict::Survivor => "survivor".into(),
            XNonzeroVerdict::Vacuous => "vacuous".into(),
            XNonzeroVerdict::Unresolved => "unresolved".into(),
        }
    }
}

/// Per-coset result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportVerdict {
    pub coset: SignedPerm,
    pub case_tag: CaseTag,
    pub verdict_x_zero: XZeroVerdict,
    pub verdict_x_nonzero: XNonzeroVerdict,
    /// `wΣ_P⁺ ∩ X`.
    pub intersection: Vec<Root>,
    pub note: Option<String>,
}

impl SupportVerdict {
    /// Short text naming the root data behind the verdict.
    pub fn witness_text(&self) -> String {
        let mut parts = Vec::new();
        match &self.verdict_x_zero {
            XZeroVerdict::Obstructed(w) => parts.push(format!("x=0: {w}")),
            XZeroVerdict::RankReduction(s) => parts.push(format!("x=0: rep {} i0={}", s.rep, s.i0)),
            _ => {}
        }
        match &self.verdict_x_nonzero {
            XNonzeroVerdict::Obstructed(w) => parts.push(format!("x!=0: {w}")),
            XNonzeroVerdict::ObstructedViaShift(k) => {
                parts.push(format!("x!=0: {} -> {} (k0={})", k.preimage, k.alpha0, k.k0))
            }
            XNonzeroVerdict::ObstructedOffQuadric(w) => parts.push(format!("x!=0 off quadric: {w}")),
            XNonzeroVerdict::ObstructedViaFinalRoot(f) => {
                parts.push(format!("x!=0: rep {} sends e_n+e_ell to {}", f.rep, f.image))
            }
            _ => {}
        }
        parts.join("; ")
    }
}

/// `NotThisCase`, `SumCase(i, j)` or `OtherCase` for the `{α_ℓ}` branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AlphaEllCase {
    NotThisCase,
    SumCase(usize, usize),
    OtherCase,
}

/// Precomputed data for one configuration.
#[derive(Debug, Clone)]
pub struct Support {
    config: Config,
    x: BTreeSet<Root>,
    alpha_ell: Option<Root>,
    sigma: BTreeSet<Root>,
    levi_elements: Vec<SignedPerm>,
    w0: SignedPerm,
}

impl Support {
    pub fn new(config: &Config) -> Result<Support> {
        let x = bessel_x(&config.bessel)?;
        Ok(Support {
            config: config.clone(),
            x,
            alpha_ell: Some(alpha(config.bessel.ell())),
            sigma: sigma_p_plus(&config.levi),
            levi_elements: levi_weyl_elements(&config.levi),
            w0: w0_maximal(&config.levi),
        })
    }

    /// The rank-zero extension: `ℓ = r`, Levi `GL_r`, and `X = Δ`.
    pub fn whittaker(group: GroupDatum) -> Support {
        let levi = LeviDatum::siegel(group);
        let config = Config { group, levi, bessel: BesselDatum::whittaker(group) };
        Support {
            x: simple_roots(group).into_iter().collect(),
            alpha_ell: None,
            sigma: sigma_p_plus(&levi),
            levi_elements: levi_weyl_elements(&levi),
            w0: w0_maximal(&levi),
            config,
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn x(&self) -> &BTreeSet<Root> {
        &self.x
    }

    pub fn sigma(&self) -> &BTreeSet<Root> {
        &self.sigma
    }

    pub fn w0(&self) -> &SignedPerm {
        &self.w0
    }

    pub fn levi_elements(&self) -> &[SignedPerm] {
        &self.levi_elements
    }

    fn n(&self) -> usize {
        self.config.levi.n()
    }

    fn ell(&self) -> usize {
        self.config.bessel.ell()
    }

    fn g(&self) -> GroupDatum {
        self.config.group
    }

    pub fn is_w0_coset(&self, w: &SignedPerm) -> bool {
        coset_key(w, &self.config.levi) == coset_key(&self.w0, &self.config.levi)
    }

    /// The coset sending `{1, …, n}` to `{1', …, (n-1)', (ℓ+1)'}`: the one
    /// where `w(e_n + e_ℓ) = α_ℓ` and the final-root argument has nothing to
    /// work with. Absent for the Whittaker data.
    pub fn is_near_w0_coset(&self, w: &SignedPerm) -> bool {
        let g = self.g();
        let (n, ell) = (self.n(), self.ell());
        if self.config.bessel.is_whittaker() || ell + 1 > g.r() {
            return false;
        }
        let mut key: Vec<usize> = (1..n).map(|i| g.prime(i)).collect();
        key.push(g.prime(ell + 1));
        key.sort_unstable();
        coset_key(w, &self.config.levi) == key
    }

    /// `wΣ_P⁺ ∩ X`.
    pub fn intersection(&self, w: &SignedPerm) -> BTreeSet<Root> {
        self.sigma.iter().map(|a| act(w, a)).filter(|b| self.x.contains(b)).collect()
    }

    /// The least `α ∈ Σ_P⁺` with `wα ∈ X`.
    pub fn obstruction_x_zero(&self, w: &SignedPerm) -> Option<Witness> {
        self.sigma.iter().find_map(|a| {
            let image = act(w, a);
            self.x.contains(&image).then_some(Witness { alpha: *a, image })
        })
    }

    /// The least `α ∈ Σ_P⁺` with `wα ∈ X ∖ {α_ℓ}`.
    pub fn obstruction_x_nonzero(&self, w: &SignedPerm) -> Option<Witness> {
        self.sigma.iter().find_map(|a| {
            let image = act(w, a);
            (self.x.contains(&image) && Some(image) != self.alpha_ell)
                .then_some(Witness { alpha: *a, image })
        })
    }

    pub fn alpha_ell_case(&self, w: &SignedPerm) -> AlphaEllCase {
        let Some(alpha_ell) = self.alpha_ell else {
            return AlphaEllCase::NotThisCase;
        };
        let inter = self.intersection(w);
        if inter.len() != 1 || !inter.contains(&alpha_ell) {
            return AlphaEllCase::NotThisCase;
        }
        let pre = act(&w.inverse(), &alpha_ell);
        match (pre.shape, pre.negative) {
            (RootShape::Sum(i, j), false) if j <= self.n() => AlphaEllCase::SumCase(i, j),
            _ => AlphaEllCase::OtherCase,
        }
    }

    /// Least `k_0` in `ℓ+2..=r` with `w⁻¹(e_ℓ ± e_{k_0}) ∈ Σ_P⁺`, `+` tried
    /// first. For odd `r0` the short root `e_ℓ` (index `r + 1`) comes last.
    pub fn find_k0(&self, w: &SignedPerm) -> Result<ShiftRoot> {
        if !matches!(self.alpha_ell_case(w), AlphaEllCase::SumCase(..)) {
            return Err(Error::BadParameter(format!("{w} is not in the alpha_ell sum case")));
        }
        self.shift_root(w).ok_or_else(|| {
            Error::NotFound(format!("no k0 for {w} in {}", describe(&self.config)))
        })
    }

    /// The search behind [`Support::find_k0`], without its precondition.
    pub fn shift_root(&self, w: &SignedPerm) -> Option<ShiftRoot> {
        let ell = self.ell();
        let winv = w.inverse();
        let mut candidates: Vec<(usize, i8, Root)> = Vec::new();
        for k in ell + 2..=self.g().r() {
            candidates.push((k, 1, Root::sum(ell, k)));
            candidates.push((k, -1, Root::diff(ell, k)));
        }
        if self.g().kind().is_odd() {
            candidates.push((self.g().r() + 1, 0, Root::short(ell)));
        }
        candidates.into_iter().find_map(|(k0, sign, alpha0)| {
            let preimage = act(&winv, &alpha0);
            self.sigma.contains(&preimage).then_some(ShiftRoot { k0, sign, alpha0, preimage })
        })
    }

    /// Normal-form members of the coset of `w`.
    pub fn family(&self, w: &SignedPerm) -> Vec<(SignedPerm, CosetNormalForm)> {
        normal_form_family(w, &self.config.levi, &self.levi_elements)
    }

    fn match_rank_reduction(&self, u: &SignedPerm, nf: &CosetNormalForm) -> Option<RankReductionShape> {
        let g = self.g();
        let (n, ell) = (self.n(), self.ell());
        let i0 = nf.w1_bar_pairs.len();
        if i0 >= n || nf.w1_bar_pairs != (1..=i0).collect::<Vec<_>>() {
            return None;
        }
        let deep = |c: usize| (ell + 2..=g.r()).contains(&c.min(g.prime(c)));
        let mut cross: Vec<(usize, usize)> = nf.w1_cross_pairs.clone();
        match nf.w2 {
            W2::Identity => {}
            W2::DPrime(d) if deep(d) => {}
            W2::FourCycle { i0: b, j0 } if deep(j0) => cross.push((b, g.prime(j0))),
            _ => return None,
        }
        cross.sort_unstable();
        if cross.iter().map(|p| p.0).collect::<Vec<_>>() != (i0 + 1..=n).collect::<Vec<_>>() {
            return None;
        }
        if !cross.iter().all(|&(_, c)| deep(c)) {
            return None;
        }
        let mut domain: Vec<Root> = (n..=ell).filter(|&i| i < g.r()).map(alpha).collect();
        domain.push(Root::sum(ell, ell + 1));
        let x1: Vec<Root> = domain.iter().map(|a| act(u, a)).collect();
        let x1_independent = linearly_independent(&x1, g.r());
        Some(RankReductionShape {
            rep: u.clone(),
            i0,
            a_list: cross.iter().map(|p| p.1).collect(),
            w2: nf.w2,
            x1,
            x1_independent,
        })
    }

    fn match_alpha_ell(&self, u: &SignedPerm, nf: &CosetNormalForm) -> Option<AlphaEllShape> {
        let g = self.g();
        let (n, ell) = (self.n(), self.ell());
        let n1 = nf.w1_bar_pairs.len();
        if n1 >= n || nf.w1_bar_pairs != (1..=n1).collect::<Vec<_>>() {
            return None;
        }
        match nf.w2 {
            W2::Identity => {}
            W2::DPrime(d) if (ell + 2..=g.r()).contains(&d) => {}
            _ => return None,
        }
        let cross = &nf.w1_cross_pairs;
        if cross.iter().map(|p| p.0).collect::<Vec<_>>() != (n1 + 1..=n).collect::<Vec<_>>() {
            return None;
        }
        if !cross.iter().all(|&(_, c)| (ell + 1..=g.r()).contains(&c.min(g.prime(c)))) {
            return None;
        }
        if !cross.iter().any(|&(_, c)| c == g.prime(ell + 1)) {
            return None;
        }
        Some(AlphaEllShape { rep: u.clone(), n1, k_list: cross.iter().map(|p| p.1).collect(), w2: nf.w2 })
    }

    /// First normal-form member of the coset matching the rank-reduction shape.
    pub fn rank_reduction_shape(&self, w: &SignedPerm) -> Option<RankReductionShape> {
        self.family(w).iter().find_map(|(u, nf)| self.match_rank_reduction(u, nf))
    }

    /// First normal-form member of the coset matching the `α_ℓ` shape.
    pub fn alpha_ell_shape(&self, w: &SignedPerm) -> Option<AlphaEllShape> {
        self.family(w).iter().find_map(|(u, nf)| self.match_alpha_ell(u, nf))
    }

    /// `w(e_n + e_ℓ) = e_ℓ ± e_k` with `ℓ + 2 <= k <= r`, searched over the
    /// shape representatives of the coset.
    pub fn final_root_image(&self, w: &SignedPerm) -> Result<FinalRoot> {
        let (n, ell, r) = (self.n(), self.ell(), self.g().r());
        let family = self.family(w);
        let reps: Vec<&SignedPerm> = family
            .iter()
            .filter(|(u, nf)| {
                self.match_rank_reduction(u, nf).is_some() || self.match_alpha_ell(u, nf).is_some()
            })
            .map(|(u, _)| u)
            .collect();
        if reps.is_empty() {
            return Err(Error::BadParameter(format!("{w} has no shape representative")));
        }
        let source = if n == ell {
            // e_n + e_ℓ degenerates to 2 e_n, which carries no e_ℓ ± e_k image.
            None
        } else {
            Some(Root::sum(n, ell))
        };
        for u in reps {
            let Some(src) = source else { break };
            let image = act(u, &src);
            let found = match (image.shape, image.negative) {
                (RootShape::Sum(a, k), false) if a == ell && (ell + 2..=r).contains(&k) => Some((k, 1)),
                (RootShape::Diff(a, k), false) if a == ell && (ell + 2..=r).contains(&k) => Some((k, -1)),
                _ => None,
            };
            if let Some((k, sign)) = found {
                return Ok(FinalRoot { rep: u.clone(), k, sign, image });
            }
        }
        Err(Error::NotFound(format!(
            "no shape representative of {w} sends e_n+e_ell to e_ell±e_k, k >= ell+2, in {}",
            describe(&self.config)
        )))
    }

    fn preimage_in_sigma(&self, w: &SignedPerm, image: Root) -> Option<Witness> {
        let alpha = act(&w.inverse(), &image);
        self.sigma.contains(&alpha).then_some(Witness { alpha, image })
    }

    /// Verdicts for one coset.
    pub fn verdict(&self, w: &SignedPerm) -> SupportVerdict {
        let inter: Vec<Root> = self.intersection(w).into_iter().collect();
        let vacuous = self.config.bessel.s() <= 0;
        let mut v = SupportVerdict {
            coset: w.clone(),
            case_tag: CaseTag::W0,
            verdict_x_zero: XZeroVerdict::Unresolved,
            verdict_x_nonzero: XNonzeroVerdict::Unresolved,
            intersection: inter.clone(),
            note: None,
        };
        let nonzero = |verdict: XNonzeroVerdict| if vacuous { XNonzeroVerdict::Vacuous } else { verdict };
        if self.alpha_ell.is_none() {
            // Whittaker extension: only the x = 0 slot exists.
            v.verdict_x_nonzero = XNonzeroVerdict::Vacuous;
            if let Some(wit) = self.obstruction_x_zero(w) {
                v.case_tag = CaseTag::P1;
                v.verdict_x_zero = XZeroVerdict::Obstructed(wit);
            } else if self.is_w0_coset(w) {
                v.verdict_x_zero = XZeroVerdict::Survivor;
            }
            return v;
        }
        if let Some(wit) = self.obstruction_x_nonzero(w) {
            v.case_tag = CaseTag::P2;
            v.verdict_x_zero = XZeroVerdict::Obstructed(wit);
            v.verdict_x_nonzero = nonzero(XNonzeroVerdict::Obstructed(wit));
            return v;
        }
        if let Some(wit) = self.obstruction_x_zero(w) {
            v.verdict_x_zero = XZeroVerdict::Obstructed(wit);
            match self.alpha_ell_case(w) {
                AlphaEllCase::SumCase(..) => {
                    v.case_tag = CaseTag::AlphaEllSumCase;
                    v.verdict_x_nonzero = nonzero(match self.find_k0(w) {
                        Ok(k) => XNonzeroVerdict::ObstructedViaShift(k),
                        Err(e) => {
                            v.note = Some(e.to_string());
                            XNonzeroVerdict::Unresolved
                        }
                    });
                }
                _ => {
                    v.case_tag = CaseTag::AlphaEllOtherCase;
                    v.verdict_x_nonzero = nonzero(self.final_root_verdict(w, &mut v.note));
                }
            }
            return v;
        }
        if self.is_w0_coset(w) {
            v.verdict_x_zero = XZeroVerdict::Survivor;
            v.verdict_x_nonzero = nonzero(XNonzeroVerdict::Survivor);
            v.note = Some("survivor; the GL_n factor must be generic".into());
            return v;
        }
        v.case_tag = CaseTag::RankReductionShape;
        match self.rank_reduction_shape(w) {
            Some(shape) => {
                v.verdict_x_zero = XZeroVerdict::RankReduction(shape);
                v.verdict_x_nonzero = nonzero(self.final_root_verdict(w, &mut v.note));
            }
            None => {
                v.note = Some("empty intersection but no rank-reduction shape representative".into());
            }
        }
        v
    }

    fn final_root_verdict(&self, w: &SignedPerm, note: &mut Option<String>) -> XNonzeroVerdict {
        match self.final_root_image(w) {
            Ok(f) => XNonzeroVerdict::ObstructedViaFinalRoot(f),
            Err(e) => match self.shift_root(w) {
                // Same argument with another root of Σ_P⁺ in place of e_n + e_ℓ.
                Some(k) => {
                    *note = Some(format!("{e}; killed through {} instead", k.preimage));
                    XNonzeroVerdict::ObstructedViaShift(k)
                }
                None => match self.alpha_ell.and_then(|a| self.preimage_in_sigma(w, a)) {
                    Some(wit) => {
                        *note = Some(format!("{e}; no shift root, only alpha_ell"));
                        XNonzeroVerdict::ObstructedOffQuadric(wit)
                    }
                    None => {
                        *note = Some(format!("{e}; no shift root either"));
                        XNonzeroVerdict::Unresolved
                    }
                },
            },
        }
    }
}

/// Short configuration label used in messages.
pub fn describe(c: &Config) -> String {
    format!("{} r={} n={} ell1={}", c.group.kind(), c.group.r(), c.levi.n(), c.bessel.ell1())
}

/// A coset whose verdicts contradict the expected picture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub coset: SignedPerm,
    pub detail: String,
}

/// All verdicts for one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub config: Config,
    pub verdicts: Vec<SupportVerdict>,
    /// Cosets surviving in at least one slot.
    pub survivors: Vec<SignedPerm>,
    pub w0: SignedPerm,
    pub discrepancies: Vec<Discrepancy>,
}

impl Classification {
    pub fn is_verified(&self) -> bool {
        self.discrepancies.is_empty()
    }

    /// `Err(ClassificationGap)` for the first discrepancy.
    pub fn check(&self) -> Result<()> {
        match self.discrepancies.first() {
            None => Ok(()),
            Some(d) => Err(Error::ClassificationGap { coset: d.coset.to_string(), detail: d.detail.clone() }),
        }
    }

    pub fn count(&self, tag: CaseTag) -> usize {
        self.verdicts.iter().filter(|v| v.case_tag == tag).count()
    }
}

/// Classify every canonical coset representative.
pub fn classify(config: &Config) -> Result<Classification> {
    classify_capped(config, DEFAULT_CAP)
}

pub fn classify_capped(config: &Config, cap: u128) -> Result<Classification> {
    let support = Support::new(config)?;
    let reps = coset_reps_capped(&config.levi, cap)?;
    Ok(run(&support, reps))
}

/// Classification with `ℓ = r` and Levi `GL_r`.
pub fn classify_whittaker(group: GroupDatum) -> Result<Classification> {
    let support = Support::whittaker(group);
    let levi = support.config.levi;
    let reps = coset_reps_capped(&levi, DEFAULT_CAP)?;
    Ok(run(&support, reps))
}

fn run(support: &Support, reps: Vec<SignedPerm>) -> Classification {
    let verdicts: Vec<SupportVerdict> = reps.par_iter().map(|w| support.verdict(w)).collect();
    let mut discrepancies = Vec::new();
    let mut survivors = Vec::new();
    for v in &verdicts {
        let survives = v.verdict_x_zero == XZeroVerdict::Survivor
            || v.verdict_x_nonzero == XNonzeroVerdict::Survivor;
        if survives {
            survivors.push(v.coset.clone());
            if !support.is_w0_coset(&v.coset) {
                discrepancies.push(Discrepancy { coset: v.coset.clone(), detail: "survivor is not w0".into() });
            }
        }
        let partial = matches!(v.verdict_x_nonzero, XNonzeroVerdict::ObstructedOffQuadric(_));
        if partial || v.verdict_x_zero == XZeroVerdict::Unresolved || v.verdict_x_nonzero == XNonzeroVerdict::Unresolved {
            discrepancies.push(Discrepancy {
                coset: v.coset.clone(),
                detail: format!(
                    "{}: x=0 {}, x!=0 {}{}",
                    v.case_tag,
                    v.verdict_x_zero.label(),
                    v.verdict_x_nonzero.label(),
                    v.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
                ),
            });
        }
        if let XZeroVerdict::RankReduction(s) = &v.verdict_x_zero {
            if !s.x1_independent {
                discrepancies.push(Discrepancy {
                    coset: v.coset.clone(),
                    detail: format!("image set {:?} is linearly dependent", s.x1),
                });
            }
        }
    }
    if !verdicts.iter().any(|v| support.is_w0_coset(&v.coset) && v.case_tag == CaseTag::W0) {
        discrepancies.push(Discrepancy { coset: support.w0.clone(), detail: "w0 is obstructed".into() });
    }
    Classification {
        config: support.config.clone(),
        verdicts,
        survivors,
        w0: support.w0.clone(),
        discrepancies,
    }
}

/// The structural checks run over obstruction-free and `α_ℓ`-other cosets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CheckId {
    /// `SO(2r)` cosets whose constructive normal form needs a four-cycle meet `X`.
    FourCycleMeetsX,
    /// Obstruction-free: `w(k) > n` for `n < k <= ℓ`.
    FreeBlockImagesAboveN,
    /// Obstruction-free: `w(i) != i` for `i <= n`.
    FreeNoLowFixedPoints,
    /// Obstruction-free with `w(n) != n'`: `w(k) = k` for `n < k <= ℓ`.
    FreeBlockFixed,
    /// Obstruction-free: `w(i) = i'` forces `w(i-1) = (i-1)'`.
    FreeBarPrefix,
    /// `α_ℓ`-other: `w(ℓ) = ℓ`.
    OtherFixesEll,
    /// `α_ℓ`-other: `w⁻¹(k) > n` for `n < k < ℓ`.
    OtherBlockPreimagesAboveN,
    /// `α_ℓ`-other: `w(n) != n`.
    OtherNNotFixed,
    /// `α_ℓ`-other: `w(i) != i` for `i <= n`.
    OtherNoLowFixedPoints,
    /// `α_ℓ`-other: `w(i0) = i0'` forces `w(i) = i'` for all `i <= i0`.
    OtherBarPrefix,
    /// `α_ℓ`-other: `w(n)` is `k0` or `k0'` with `n < k0 <= r`.
    OtherNToBlock,
    /// `α_ℓ`-other: `w(k) = k` for `n < k < ℓ`.
    OtherBlockFixed,
    /// `α_ℓ`-other: the coset has an `α_ℓ`-shape representative.
    OtherShape,
    /// Obstruction-free non-`w0` cosets: one representative satisfies every
    /// obstruction-free check at once and has the rank-reduction shape.
    FreeCombined,
    /// `α_ℓ`-other cosets: one representative satisfies every check at once.
    OtherCombined,
}

impl CheckId {
    pub const ALL: [CheckId; 15] = [
        CheckId::FourCycleMeetsX,
        CheckId::FreeBlockImagesAboveN,
        CheckId::FreeNoLowFixedPoints,
        CheckId::FreeBlockFixed,
        CheckId::FreeBarPrefix,
        CheckId::OtherFixesEll,
        CheckId::OtherBlockPreimagesAboveN,
        CheckId::OtherNNotFixed,
        CheckId::OtherNoLowFixedPoints,
        CheckId::OtherBarPrefix,
        CheckId::OtherNToBlock,
        CheckId::OtherBlockFixed,
        CheckId::OtherShape,
        CheckId::FreeCombined,
        CheckId::OtherCombined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::FourCycleMeetsX => "four-cycle-meets-x",
            CheckId::FreeBlockImagesAboveN => "free-block-images-above-n",
            CheckId::FreeNoLowFixedPoints => "free-no-low-fixed-points",
            CheckId::FreeBlockFixed => "free-block-fixed",
            CheckId::FreeBarPrefix => "free-bar-prefix",
            CheckId::OtherFixesEll => "other-fixes-ell",
            CheckId::OtherBlockPreimagesAboveN => "other-block-preimages-above-n",
            CheckId::OtherNNotFixed => "other-n-not-fixed",
            CheckId::OtherNoLowFixedPoints => "other-no-low-fixed-points",
            CheckId::OtherBarPrefix => "other-bar-prefix",
            CheckId::OtherNToBlock => "other-n-to-block",
            CheckId::OtherBlockFixed => "other-block-fixed",
            CheckId::OtherShape => "other-shape",
            CheckId::FreeCombined => "free-combined",
            CheckId::OtherCombined => "other-combined",
        }
    }

    fn hypothesis(self) -> Hypothesis {
        use CheckId::*;
        match self {
            FourCycleMeetsX => Hypothesis::FourCycle,
            FreeBlockImagesAboveN | FreeNoLowFixedPoints | FreeBlockFixed | FreeBarPrefix => Hypothesis::Free,
            FreeCombined => Hypothesis::FreeNotW0,
            _ => Hypothesis::Other,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CheckId> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Hypothesis {
    FourCycle,
    Free,
    FreeNotW0,
    Other,
}

/// Outcome of one structural check on one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: CheckId,
    pub config: Config,
    pub hypothesis_count: usize,
    pub pass: bool,
    pub vacuous: bool,
    pub counterexample: Option<String>,
}

impl Support {
    fn holds(&self, check: CheckId, u: &SignedPerm, nf: &CosetNormalForm) -> bool {
        let g = self.g();
        let (n, ell, r) = (self.n(), self.ell(), g.r());
        let p = |i: usize| g.prime(i);
        use CheckId::*;
        match check {
            FourCycleMeetsX => !self.intersection(u).is_empty(),
            FreeBlockImagesAboveN => (n + 1..=ell).all(|k| u.apply(k) > n),
            FreeNoLowFixedPoints | OtherNoLowFixedPoints => (1..=n).all(|i| u.apply(i) != i),
            FreeBlockFixed => u.apply(n) == p(n) || (n + 1..=ell).all(|k| u.apply(k) == k),
            FreeBarPrefix => (2..=n).all(|i| u.apply(i) != p(i) || u.apply(i - 1) == p(i - 1)),
            OtherFixesEll => u.apply(ell) == ell,
            OtherBlockPreimagesAboveN => {
                let inv = u.inverse();
                (n + 1..ell).all(|k| inv.apply(k) > n)
            }
            OtherNNotFixed => u.apply(n) != n,
            OtherBarPrefix => (1..=n).all(|i0| u.apply(i0) != p(i0) || (1..=i0).all(|i| u.apply(i) == p(i))),
            OtherNToBlock => {
                let v = u.apply(n);
                (n + 1..=r).contains(&v.min(p(v)))
            }
            OtherBlockFixed => (n + 1..ell).all(|k| u.apply(k) == k),
            OtherShape => self.match_alpha_ell(u, nf).is_some(),
            FreeCombined => {
                [FreeBlockImagesAboveN, FreeNoLowFixedPoints, FreeBlockFixed, FreeBarPrefix]
                    .into_iter()
                    .all(|c| self.holds(c, u, nf))
                    && self.match_rank_reduction(u, nf).is_some()
            }
            OtherCombined => [
                OtherFixesEll,
                OtherBlockPreimagesAboveN,
                OtherNNotFixed,
                OtherNoLowFixedPoints,
                OtherBarPrefix,
                OtherNToBlock,
                OtherBlockFixed,
                OtherShape,
            ]
            .into_iter()
            .all(|c| self.holds(c, u, nf)),
        }
    }

    fn in_hypothesis(&self, h: Hypothesis, w: &SignedPerm) -> bool {
        match h {
            Hypothesis::FourCycle => matches!(normal_form(w, &self.config.levi).w2, W2::FourCycle { .. }),
            Hypothesis::Free => self.intersection(w).is_empty(),
            Hypothesis::FreeNotW0 => self.intersection(w).is_empty() && !self.is_w0_coset(w),
            Hypothesis::Other => self.alpha_ell_case(w) == AlphaEllCase::OtherCase,
        }
    }

    /// Run one check over every coset of the configuration. A coset in the
    /// hypothesis set passes when some normal-form representative satisfies
    /// the conclusion (the four-cycle check instead needs every four-cycle
    /// representative to meet `X`; the intersection is a coset invariant, so
    /// this is one test).
    pub fn verify_check(&self, check: CheckId, reps: &[SignedPerm]) -> CheckReport {
        let h = check.hypothesis();
        let results: Vec<Option<Option<String>>> = reps
            .par_iter()
            .map(|w| {
                let family = self.family(w);
                if !self.in_hypothesis(h, w) {
                    return None;
                }
                let ok = if h == Hypothesis::FourCycle {
                    family
                        .iter()
                        .filter(|(_, nf)| matches!(nf.w2, W2::FourCycle { .. }))
                        .all(|(u, nf)| self.holds(check, u, nf))
                } else {
                    family.iter().any(|(u, nf)| self.holds(check, u, nf))
                };
                Some(if ok {
                    None
                } else {
                    let shown = family.first().map(|(u, _)| u.to_cycles()).unwrap_or_else(|| w.to_cycles());
                    Some(format!("coset of {w} (e.g. {shown}) in {}", describe(&self.config)))
                })
            })
            .collect();
        let hypothesis_count = results.iter().filter(|r| r.is_some()).count();
        let counterexample = results.into_iter().flatten().flatten().next();
        CheckReport {
            check,
            config: self.config.clone(),
            hypothesis_count,
            pass: counterexample.is_none(),
            vacuous: hypothesis_count == 0,
            counterexample,
        }
    }
}

/// Run one structural check on one configuration.
pub fn verify_check(check: CheckId, config: &Config) -> Result<CheckReport> {
    let support = Support::new(config)?;
    let reps = coset_reps_capped(&config.levi, DEFAULT_CAP)?;
    Ok(support.verify_check(check, &reps))
}

/// True for `SO(2r)` only; the four-cycle check is vacuous elsewhere.
pub fn has_four_cycles(g: GroupDatum) -> bool {
    g.kind() == GroupKind::SoEven
}
