//! Flag parsing for ranges, kind lists and enumeration caps.

use bessel_core::datum::configs_for;
use bessel_core::weyl::DEFAULT_CAP;
use bessel_core::{make_config, Config, GroupDatum, GroupKind};

/// A closed range such as `3`, `2..6`, `2..=6`, `2-6` or `<=5`. The lower
/// end of `<=5` is filled in by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: Option<usize>,
    pub hi: usize,
}

impl Span {
    pub fn single(&self) -> Option<usize> {
        (self.lo == Some(self.hi)).then_some(self.hi)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo.map_or(true, |lo| lo <= v) && v <= self.hi
    }

    pub fn iter_from(&self, floor: usize) -> std::ops::RangeInclusive<usize> {
        self.lo.unwrap_or(floor)..=self.hi
    }

    pub fn text(&self) -> String {
        match (self.lo, self.single()) {
            (_, Some(v)) => v.to_string(),
            (Some(lo), None) => format!("{lo}..={}", self.hi),
            (None, None) => format!("<={}", self.hi),
        }
    }
}

pub fn parse_span(s: &str) -> Result<Span, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{s}` is not a number or range"));
    let s = s.trim().trim_start_matches('r').trim_start_matches('n');
    if let Some(hi) = s.strip_prefix("<=") {
        return Ok(Span { lo: None, hi: num(hi)? });
    }
    let (lo, hi) = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b)?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let v = num(s)?;
        (v, v)
    };
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(Span { lo: Some(lo), hi })
}

/// A list of group kinds from one flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kinds(pub Vec<GroupKind>);

/// `all` or a comma-separated list of kinds.
pub fn parse_kinds(s: &str) -> Result<Kinds, String> {
    if s.trim() == "all" {
        return Ok(Kinds(GroupKind::ALL.to_vec()));
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let k: GroupKind = part.parse().map_err(|e| format!("{e}"))?;
        if !out.contains(&k) {
            out.push(k);
        }
    }
    if out.is_empty() {
        return Err("no group kind given".into());
    }
    Ok(Kinds(out))
}

pub fn kinds_text(kinds: &[GroupKind]) -> String {
    kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(",")
}

/// Enumeration cap: `BESSEL_CAP` if set, else the engine default.
pub fn cap_from_env() -> Result<u128, String> {
    match std::env::var("BESSEL_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| format!("BESSEL_CAP=`{v}` is not a number")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

pub fn groups(kinds: &[GroupKind], rank: Span) -> Result<Vec<GroupDatum>, String> {
    let mut out = Vec::new();
    for &k in kinds {
        for r in rank.iter_from(2) {
            out.push(GroupDatum::new(k, r).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

/// Every configuration selected by the flags. A fully pinned tuple is
/// validated strictly; ranges keep only the valid tuples they cover.
pub fn configs(kinds: &[GroupKind], rank: Span, n: Option<Span>, ell1: Option<Span>) -> Result<Vec<Config>, String> {
    if let (Some(r), Some(nv), Some(lv)) = (rank.single(), n.and_then(|s| s.single()), ell1.and_then(|s| s.single())) {
        return kinds
            .iter()
            .map(|&k| make_config(k, r, nv, lv).map_err(|e| e.to_string()))
            .collect();
    }
    let mut out = Vec::new();
    for g in groups(kinds, rank)? {
        out.extend(configs_for(g).into_iter().filter(|c| {
            n.map_or(true, |s| s.contains(c.n())) && ell1.map_or(true, |s| s.contains(c.bessel.ell1()))
        }));
    }
    if out.is_empty() {
        return Err("the flags select no valid configuration".into());
    }
    Ok(out)
}
