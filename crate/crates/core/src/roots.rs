//! Classical roots indexed over `e_1..e_r`, the parabolic root sets, the
//! Bessel support set `X`, and the Weyl action on roots.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::datum::{BesselDatum, GroupDatum, GroupKind, LeviDatum};
use crate::error::{Error, Result};
use crate::weyl::SignedPerm;

/// The positive member of a `{±α}` pair. Variant order is the witness order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootShape {
    /// `e_i - e_j`, `i < j`.
    Diff(usize, usize),
    /// `e_i + e_j`, `i < j`.
    Sum(usize, usize),
    /// `e_i`.
    Short(usize),
    /// `2 e_i`.
    Long(usize),
}

/// A root: a positive shape plus a sign bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub shape: RootShape,
    pub negative: bool,
}

impl Root {
    pub fn diff(i: usize, j: usize) -> Root {
        assert!(i != j && i >= 1 && j >= 1, "e_i - e_j needs distinct indices");
        if i < j {
            Root { shape: RootShape::Diff(i, j), negative: false }
        } else {
            Root { shape: RootShape::Diff(j, i), negative: true }
        }
    }

    pub fn sum(i: usize, j: usize) -> Root {
        assert!(i != j && i >= 1 && j >= 1, "e_i + e_j needs distinct indices");
        Root { shape: RootShape::Sum(i.min(j), i.max(j)), negative: false }
    }

    pub fn short(i: usize) -> Root {
        Root { shape: RootShape::Short(i), negative: false }
    }

    pub fn long(i: usize) -> Root {
        Root { shape: RootShape::Long(i), negative: false }
    }

    pub fn neg(self) -> Root {
        Root { shape: self.shape, negative: !self.negative }
    }

    pub fn is_positive(&self) -> bool {
        !self.negative
    }

    pub fn positive(self) -> Root {
        Root { shape: self.shape, negative: false }
    }

    /// Nonzero coordinates `(index, coefficient)` in the `e` basis.
    pub fn terms(&self) -> Vec<(usize, i64)> {
        let s = if self.negative { -1 } else { 1 };
        match self.shape {
            RootShape::Diff(i, j) => vec![(i, s), (j, -s)],
            RootShape::Sum(i, j) => vec![(i, s), (j, s)],
            RootShape::Short(i) => vec![(i, s)],
            RootShape::Long(i) => vec![(i, 2 * s)],
        }
    }

    /// Coordinate vector of length `r`.
    pub fn vector(&self, r: usize) -> Vec<i64> {
        let mut v = vec![0; r];
        for (i, c) in self.terms() {
            v[i - 1] += c;
        }
        v
    }

    /// Inverse of [`Root::terms`]; `None` if the terms are not a root shape.
    pub fn from_terms(terms: &[(usize, i64)]) -> Option<Root> {
        match *terms {
            [(i, c)] if c.abs() == 1 => Some(Root { shape: RootShape::Short(i), negative: c < 0 }),
            [(i, c)] if c.abs() == 2 => Some(Root { shape: RootShape::Long(i), negative: c < 0 }),
            [(i, a), (j, b)] if i != j && a.abs() == 1 && b.abs() == 1 => {
                let (i, a, j, b) = if i < j { (i, a, j, b) } else { (j, b, i, a) };
                Some(if a == b {
                    Root { shape: RootShape::Sum(i, j), negative: a < 0 }
                } else {
                    Root { shape: RootShape::Diff(i, j), negative: a < 0 }
                })
            }
            _ => None,
        }
    }

    /// Largest index mentioned.
    pub fn max_index(&self) -> usize {
        match self.shape {
            RootShape::Diff(_, j) | RootShape::Sum(_, j) => j,
            RootShape::Short(i) | RootShape::Long(i) => i,
        }
    }

    /// Whether this root exists in the root system of `g`.
    pub fn is_valid_for(&self, g: GroupDatum) -> bool {
        if self.max_index() > g.r() {
            return false;
        }
        match self.shape {
            RootShape::Diff(..) | RootShape::Sum(..) => true,
            RootShape::Short(_) => g.kind().is_odd(),
            RootShape::Long(_) => g.kind().is_unitary(),
        }
    }

    /// Signed-index form `(a, b)` with the root equal to `e_a - e_b` under
    /// `e_{x'} = -e_x`. For a short root `b` is the middle index `r + 1`,
    /// standing for the zero vector. Long roots return `None`.
    pub fn signed_pair(&self, g: GroupDatum) -> Option<(usize, usize)> {
        let p = |i: usize| g.prime(i);
        let mid = g.r() + 1;
        let (a, b) = match self.shape {
            RootShape::Diff(i, j) => (i, j),
            RootShape::Sum(i, j) => (i, p(j)),
            RootShape::Short(i) => (i, mid),
            RootShape::Long(_) => return None,
        };
        Some(match (self.negative, self.shape) {
            (false, _) => (a, b),
            (true, RootShape::Short(i)) => (p(i), mid),
            (true, _) => (b, a),
        })
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 2 { "2" } else { "" };
            write!(f, "{sign}{mag}e{i}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Root {
    type Err = Error;

    /// Accepts the rendered forms: `e1-e2`, `e1+e2`, `e1`, `2e1`, `-e1+e2`, ...
    fn from_str(s: &str) -> Result<Root> {
        let bad = || Error::Parse(format!("cannot read `{s}` as a root"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let (sign, tail) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ => (1, rest),
            };
            let (mag, tail) = match tail.strip_prefix('2') {
                Some(t) if t.starts_with('e') => (2, t),
                _ => (1, tail),
            };
            let tail = tail.strip_prefix('e').ok_or_else(bad)?;
            let end = tail.find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len());
            let idx: usize = tail[..end].parse().map_err(|_| bad())?;
            if idx == 0 {
                return Err(bad());
            }
            terms.push((idx, sign * mag));
            rest = &tail[end..];
        }
        Root::from_terms(&terms).ok_or_else(bad)
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The standard simple roots: `e_i - e_{i+1}` for `i < r`, then `e_r`
/// (odd sizes), `e_{r-1} + e_r` (`SO(2r)`) or `2 e_r` (`U(2r)`).
pub fn simple_roots(g: GroupDatum) -> Vec<Root> {
    let r = g.r();
    let mut out: Vec<Root> = (1..r).map(|i| Root::diff(i, i + 1)).collect();
    out.push(match g.kind() {
        GroupKind::SoOdd | GroupKind::UOdd => Root::short(r),
        GroupKind::SoEven => Root::sum(r - 1, r),
        GroupKind::UEven => Root::long(r),
    });
    out
}

/// All positive roots of `g` (both `e_i` and `2e_i` for `U(2r+1)`).
pub fn positive_roots(g: GroupDatum) -> Vec<Root> {
    let r = g.r();
    let mut out = Vec::new();
    for i in 1..=r {
        for j in i + 1..=r {
            out.push(Root::diff(i, j));
            out.push(Root::sum(i, j));
        }
    }
    for i in 1..=r {
        if g.kind().is_odd() {
            out.push(Root::short(i));
        }
        if g.kind().is_unitary() {
            out.push(Root::long(i));
        }
    }
    out.sort();
    out
}

/// Positive roots whose root groups lie in the unipotent radical of `P`.
pub fn sigma_p_plus(l: &LeviDatum) -> BTreeSet<Root> {
    let g = l.group();
    let (n, r) = (l.n(), g.r());
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for j in n + 1..=r {
            out.insert(Root::diff(i, j));
            out.insert(Root::sum(i, j));
        }
        for j in i + 1..=n {
            out.insert(Root::sum(i, j));
        }
        if g.kind().is_odd() {
            out.insert(Root::short(i));
        }
        if g.kind().is_unitary() {
            out.insert(Root::long(i));
        }
    }
    out
}

/// Closed-form size of [`sigma_p_plus`].
pub fn sigma_p_plus_count(l: &LeviDatum) -> usize {
    let (n, m) = (l.n(), l.m());
    let extra = usize::from(l.group().kind().is_odd()) + usize::from(l.group().kind().is_unitary());
    2 * n * m + n * n.saturating_sub(1) / 2 + n * extra
}

/// `α_i = e_i - e_{i+1}`.
pub fn alpha(i: usize) -> Root {
    Root::diff(i, i + 1)
}

/// `β = e_ℓ + e_{ℓ+1}`.
pub fn beta(b: &BesselDatum) -> Result<Root> {
    if b.ell() >= b.group().r() {
        return Err(Error::Range("beta needs ell < r".into()));
    }
    Ok(Root::sum(b.ell(), b.ell() + 1))
}

/// The roots on which the character is nontrivial: `{α_1..α_ℓ, β}`.
pub fn bessel_x(b: &BesselDatum) -> Result<BTreeSet<Root>> {
    let beta = beta(b)?;
    let mut x: BTreeSet<Root> = (1..=b.ell()).map(alpha).collect();
    x.insert(beta);
    Ok(x)
}

/// `w · α`, induced by `w · e_i = e_{w(i)}` with `e_{j'} = -e_j`.
pub fn act(w: &SignedPerm, root: &Root) -> Root {
    let g = w.group();
    let r = g.r();
    let terms: Vec<(usize, i64)> = root
        .terms()
        .into_iter()
        .map(|(i, c)| {
            let v = w.apply(i);
            if v <= r {
                (v, c)
            } else {
                (g.prime(v), -c)
            }
        })
        .collect();
    Root::from_terms(&terms).expect("signed permutations map roots to roots")
}

/// Image of a root set.
pub fn act_set(w: &SignedPerm, roots: &BTreeSet<Root>) -> BTreeSet<Root> {
    roots.iter().map(|a| act(w, a)).collect()
}

/// Rank of a set of integer vectors, by exact fraction-free elimination.
pub fn rank_of(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> =
        vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let (a, b) = (rows[rank][c], rows[i][c]);
                for k in 0..cols {
                    rows[i][k] = rows[i][k] * a - rows[rank][k] * b;
                }
                let gcd = rows[i].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                if gcd > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= gcd);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn linearly_independent(roots: &[Root], r: usize) -> bool {
    let v: Vec<Vec<i64>> = roots.iter().map(|a| a.vector(r)).collect();
    rank_of(&v) == roots.len()
}

/// Coordinates of a root in the simple-root basis.
pub fn simple_coordinates(g: GroupDatum, root: &Root) -> Vec<i64> {
    let r = g.r();
    let v = root.vector(r);
    let mut c = vec![0i64; r];
    // With α_i = e_i - e_{i+1}, partial sums of the e-coordinates give the
    // coefficients of the first roots; the last one depends on the type.
    let head = if g.kind() == GroupKind::SoEven { r - 2 } else { r };
    let mut acc = 0;
    for k in 0..head {
        acc += v[k];
        c[k] = acc;
    }
    match g.kind() {
        GroupKind::SoOdd | GroupKind::UOdd => {}
        GroupKind::UEven => c[r - 1] /= 2,
        GroupKind::SoEven => {
            // α_{r-1} = e_{r-1} - e_r and α_r = e_{r-1} + e_r.
            let s = acc + v[r - 2];
            let d = v[r - 1];
            c[r - 1] = (s + d) / 2;
            c[r - 2] = (s - d) / 2;
        }
    }
    c
}

/// Positive roots in the span of `theta`, a subset of the simple roots.
pub fn positive_roots_of_subset(g: GroupDatum, theta: &BTreeSet<Root>) -> BTreeSet<Root> {
    let delta = simple_roots(g);
    let allowed: Vec<bool> = delta.iter().map(|a| theta.contains(a)).collect();
    positive_roots(g)
        .into_iter()
        .filter(|a| {
            simple_coordinates(g, a).iter().zip(&allowed).all(|(&c, &ok)| c == 0 || ok)
        })
        .collect()
}

/// `{α > 0 : wα < 0}`.
pub fn inversions(w: &SignedPerm) -> BTreeSet<Root> {
    positive_roots(w.group()).into_iter().filter(|a| !act(w, a).is_positive()).collect()
}
