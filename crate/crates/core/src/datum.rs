//! Group, Levi and Bessel configuration data.
//!
//! Indices are 1-based throughout, matching the `i' = r0 + 1 - i` convention
//! on `{1..r0}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four families of classical groups handled by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// Split `SO(2r+1)`.
    SoOdd,
    /// Split `SO(2r)`.
    SoEven,
    /// Quasi-split `U(2r+1)`.
    UOdd,
    /// Quasi-split `U(2r)`.
    UEven,
}

impl GroupKind {
    pub const ALL: [GroupKind; 4] = [
        GroupKind::SoOdd,
        GroupKind::SoEven,
        GroupKind::UOdd,
        GroupKind::UEven,
    ];

    pub fn is_unitary(self) -> bool {
        matches!(self, GroupKind::UOdd | GroupKind::UEven)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, GroupKind::SoOdd | GroupKind::UOdd)
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::SoOdd => "so-odd",
            GroupKind::SoEven => "so-even",
            GroupKind::UOdd => "u-odd",
            GroupKind::UEven => "u-even",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "so-odd" | "sood" | "soodd" | "b" => Ok(GroupKind::SoOdd),
            "so-even" | "soeven" | "d" => Ok(GroupKind::SoEven),
            "u-odd" | "uodd" => Ok(GroupKind::UOdd),
            "u-even" | "ueven" => Ok(GroupKind::UEven),
            other => Err(Error::Parse(format!("unknown group kind `{other}`"))),
        }
    }
}

/// A classical group of a given kind and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupDatum {
    kind: GroupKind,
    r: usize,
}

impl GroupDatum {
    pub fn new(kind: GroupKind, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::Range(format!("rank r = {r} must be at least 2")));
        }
        if r > 64 {
            return Err(Error::Range(format!("rank r = {r} exceeds the supported maximum 64")));
        }
        Ok(GroupDatum { kind, r })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Size of the standard representation: `2r` or `2r + 1`.
    pub fn r0(&self) -> usize {
        if self.kind.is_odd() {
            2 * self.r + 1
        } else {
            2 * self.r
        }
    }

    /// The involution `i -> r0 + 1 - i`.
    pub fn prime(&self, i: usize) -> usize {
        debug_assert!((1..=self.r0()).contains(&i));
        self.r0() + 1 - i
    }

    /// The fixed middle index `r + 1`, present only when `r0` is odd.
    pub fn middle(&self) -> Option<usize> {
        self.kind.is_odd().then_some(self.r + 1)
    }

    /// Order of the Weyl group: `2^r r!`, halved for `SO(2r)`.
    pub fn weyl_order(&self) -> u128 {
        let fact: u128 = (1..=self.r as u128).product();
        let signs = if self.kind == GroupKind::SoEven { self.r - 1 } else { self.r };
        fact << signs
    }
}

impl fmt::Display for GroupDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r={}", self.kind, self.r)
    }
}

/// The maximal parabolic with Levi `GL_n x G(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeviDatum {
    group: GroupDatum,
    n: usize,
}

impl LeviDatum {
    pub fn new(group: GroupDatum, n: usize) -> Result<Self> {
        if n < 1 || n >= group.r() {
            return Err(Error::Range(format!(
                "Levi block n = {n} must satisfy 1 <= n <= r - 1 = {}",
                group.r() - 1
            )));
        }
        Ok(LeviDatum { group, n })
    }

    /// The Siegel-type Levi `GL_r`, used only by the Whittaker extension.
    pub(crate) fn siegel(group: GroupDatum) -> Self {
        LeviDatum { group, n: group.r() }
    }

    pub fn group(&self) -> GroupDatum {
        self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.group.r() - self.n
    }

    /// Number of left cosets `W / W_M`, that is `2^n C(r, n)`.
    pub fn coset_count(&self) -> u128 {
        let r = self.group.r() as u128;
        let n = self.n as u128;
        let mut c: u128 = 1;
        for k in 0..n {
            c = c * (r - k) / (k + 1);
        }
        if self.n == self.group.r() && self.group.kind() == GroupKind::SoEven {
            // Siegel Levi of SO(2r): only even flip counts occur.
            return c << (n - 1);
        }
        c << n
    }
}

/// The character data of a Bessel model of rank `ell1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BesselDatum {
    group: GroupDatum,
    ell1: usize,
    delta: i64,
}

impl BesselDatum {
    pub fn new(group: GroupDatum, ell1: usize) -> Result<Self> {
        Self::with_delta(group, ell1, 1)
    }

    pub fn with_delta(group: GroupDatum, ell1: usize, delta: i64) -> Result<Self> {
        if ell1 < 1 || ell1 >= group.r() {
            return Err(Error::Range(format!(
                "Bessel rank ell1 = {ell1} must satisfy 1 <= ell1 <= r - 1 = {}",
                group.r() - 1
            )));
        }
        if delta == 0 {
            return Err(Error::Range("delta must be nonzero".into()));
        }
        Ok(BesselDatum { group, ell1, delta })
    }

    /// Rank-zero data (`ell = r`), reachable only through the Whittaker extension.
    pub(crate) fn whittaker(group: GroupDatum) -> Self {
        BesselDatum { group, ell1: 0, delta: 1 }
    }

    pub fn group(&self) -> GroupDatum {
        self.group
    }

    pub fn ell1(&self) -> usize {
        self.ell1
    }

    pub fn ell(&self) -> usize {
        self.group.r() - self.ell1
    }

    pub fn ell0(&self) -> usize {
        self.group.r0() - 2 * self.ell()
    }

    /// Length of the `x` vector in `n(x)`. Negative only in the Whittaker case.
    pub fn s(&self) -> isize {
        self.ell0() as isize - 2
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn is_whittaker(&self) -> bool {
        self.ell1 == 0
    }

    /// Coordinate vector `(delta, 0, ..., 0, 1)` of length `ell0`.
    pub fn a(&self) -> Vec<i64> {
        let mut a = vec![0; self.ell0()];
        if let Some(first) = a.first_mut() {
            *first = self.delta;
        }
        if let Some(last) = a.last_mut() {
            *last = 1;
        }
        a
    }
}

/// A validated `(group, Levi, Bessel)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    pub group: GroupDatum,
    pub levi: LeviDatum,
    pub bessel: BesselDatum,
}

impl Config {
    pub fn n(&self) -> usize {
        self.levi.n()
    }

    pub fn ell(&self) -> usize {
        self.bessel.ell()
    }
}

/// Build and validate a configuration, rejecting every out-of-range tuple.
pub fn make_config(kind: GroupKind, r: usize, n: usize, ell1: usize) -> Result<Config> {
    let group = GroupDatum::new(kind, r)?;
    let levi = LeviDatum::new(group, n)?;
    let bessel = BesselDatum::new(group, ell1)?;
    if ell1 > levi.m() {
        return Err(Error::Range(format!(
            "ell1 = {ell1} exceeds m = r - n = {}",
            levi.m()
        )));
    }
    Ok(Config { group, levi, bessel })
}

/// All valid configurations for one group: every `n` and every `ell1 <= m`.
pub fn configs_for(group: GroupDatum) -> Vec<Config> {
    let mut out = Vec::new();
    for n in 1..group.r() {
        for ell1 in 1..=(group.r() - n) {
            if let Ok(c) = make_config(group.kind(), group.r(), n, ell1) {
                out.push(c);
            }
        }
    }
    out
}
