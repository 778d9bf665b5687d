//! Signed-permutation Weyl groups inside `S_{r0}`.
//!
//! An element is stored as its full image array on `{1..r0}`. Composition is
//! functional: `(u * v)(i) = u(v(i))`. Cosets are left cosets `w W_M`, so two
//! elements share a coset exactly when they agree on the set `w({1..n})`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::datum::{GroupDatum, GroupKind, LeviDatum};
use crate::error::{Error, Result};
use crate::roots::{act, Root, RootShape};

/// Default ceiling on the number of elements any enumeration may produce.
pub const DEFAULT_CAP: u128 = 100_000_000;

/// A Weyl group element as a permutation of `{1..r0}` commuting with `i -> i'`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    group: GroupDatum,
    image: Vec<u8>,
}

impl SignedPerm {
    pub fn identity(group: GroupDatum) -> Self {
        SignedPerm { group, image: (1..=group.r0() as u8).collect() }
    }

    /// Validate an image array (1-based values, `image[i - 1] = w(i)`).
    pub fn from_image(group: GroupDatum, image: &[usize]) -> Result<Self> {
        let r0 = group.r0();
        if image.len() != r0 {
            return Err(Error::Range(format!("image has length {}, expected {r0}", image.len())));
        }
        let mut seen = vec![false; r0 + 1];
        for &v in image {
            if v < 1 || v > r0 || seen[v] {
                return Err(Error::Range("image is not a bijection of {1..r0}".into()));
            }
            seen[v] = true;
        }
        for i in 1..=r0 {
            if image[group.prime(i) - 1] != group.prime(image[i - 1]) {
                return Err(Error::Range(format!("w({}) is not w({i})'", group.prime(i))));
            }
        }
        let w = SignedPerm { group, image: image.iter().map(|&v| v as u8).collect() };
        if let Some(mid) = group.middle() {
            if w.apply(mid) != mid {
                return Err(Error::Range("w must fix the middle index r + 1".into()));
            }
        }
        if group.kind() == GroupKind::SoEven && w.sign_changes() % 2 == 1 {
            return Err(Error::Range("SO(2r) Weyl elements change an even number of signs".into()));
        }
        Ok(w)
    }

    pub fn group(&self) -> GroupDatum {
        self.group
    }

    /// `w(i)` for `1 <= i <= r0`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize
    }

    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize).collect()
    }

    /// `#{i <= r : w(i) > r}`.
    pub fn sign_changes(&self) -> usize {
        let r = self.group.r();
        (1..=r).filter(|&i| self.apply(i) > r + usize::from(self.group.kind().is_odd())).count()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        if self.group != other.group {
            return Err(Error::MixedGroup);
        }
        Ok(self.mul(other))
    }

    /// Composition without the group check; callers guarantee a shared group.
    pub(crate) fn mul(&self, other: &SignedPerm) -> SignedPerm {
        let image = other.image.iter().map(|&v| self.image[v as usize - 1]).collect();
        SignedPerm { group: self.group, image }
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut image = vec![0u8; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = (i + 1) as u8;
        }
        SignedPerm { group: self.group, image }
    }

    /// Parse cycle notation such as `(1 9)(2 8)`; `()` or the empty string is the identity.
    pub fn from_cycles(group: GroupDatum, text: &str) -> Result<SignedPerm> {
        let r0 = group.r0();
        let mut image: Vec<usize> = (1..=r0).collect();
        let mut seen = vec![false; r0 + 1];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected `(` in `{text}`")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{text}`")))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let cycle: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad index `{t}`"))))
                .collect::<Result<_>>()?;
            for &c in &cycle {
                if c < 1 || c > r0 {
                    return Err(Error::Parse(format!("index {c} outside 1..{r0}")));
                }
                if seen[c] {
                    return Err(Error::Parse(format!("index {c} appears twice")));
                }
                seen[c] = true;
            }
            for k in 0..cycle.len() {
                image[cycle[k] - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        SignedPerm::from_image(group, &image)
    }

    /// Disjoint cycles, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let r0 = self.image.len();
        let mut seen = vec![false; r0 + 1];
        let mut out = Vec::new();
        for start in 1..=r0 {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn to_cycles(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(" "))
            })
            .collect()
    }

    /// Unsigned permutation in `S_r` plus sign bits, the `S_r x| Z_2^r` picture.
    pub fn to_signed_pairs(&self) -> Vec<(usize, bool)> {
        let r = self.group.r();
        (1..=r)
            .map(|i| {
                let v = self.apply(i);
                if v <= r {
                    (v, false)
                } else {
                    (self.group.prime(v), true)
                }
            })
            .collect()
    }

    /// Inverse of [`SignedPerm::to_signed_pairs`].
    pub fn from_signed_pairs(group: GroupDatum, pairs: &[(usize, bool)]) -> Result<SignedPerm> {
        let r = group.r();
        if pairs.len() != r {
            return Err(Error::Range(format!("expected {r} signed images")));
        }
        let mut image = vec![0usize; group.r0()];
        for (i, &(v, neg)) in pairs.iter().enumerate() {
            if v < 1 || v > r {
                return Err(Error::Range(format!("signed image {v} outside 1..{r}")));
            }
            let img = if neg { group.prime(v) } else { v };
            image[i] = img;
            image[group.prime(i + 1) - 1] = group.prime(img);
        }
        if let Some(mid) = group.middle() {
            image[mid - 1] = mid;
        }
        SignedPerm::from_image(group, &image)
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycles())
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.group, self.to_cycles())
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycles())
    }
}

/// Wire form pairing a group with cycle text, used where the group is not implied.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermText {
    pub group: GroupDatum,
    pub cycles: String,
}

impl<'de> Deserialize<'de> for SignedPerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = PermText::deserialize(d)?;
        SignedPerm::from_cycles(t.group, &t.cycles).map_err(serde::de::Error::custom)
    }
}

impl FromStr for GroupDatumPerm {
    type Err = Error;

    /// Parses `kind:r:cycles`, e.g. `so-odd:4:(1 9)(2 8)`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, ':');
        let kind: GroupKind = parts.next().unwrap_or_default().parse()?;
        let r: usize = parts
            .next()
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("missing rank in `{s}`")))?;
        let g = GroupDatum::new(kind, r)?;
        Ok(GroupDatumPerm(SignedPerm::from_cycles(g, parts.next().unwrap_or(""))?))
    }
}

/// A [`SignedPerm`] parsed together with its group from `kind:r:cycles` text.
#[derive(Debug, Clone)]
pub struct GroupDatumPerm(pub SignedPerm);

fn check_cap(what: &str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        return Err(Error::CapExceeded { what: what.into(), needed, cap });
    }
    Ok(())
}

/// Every element of `W`, each once, in lexicographic order of image arrays.
pub fn enumerate_weyl(g: GroupDatum, cap: u128) -> Result<Vec<SignedPerm>> {
    check_cap("Weyl group", g.weyl_order(), cap)?;
    let mut out = Vec::with_capacity(g.weyl_order() as usize);
    for_each_signed(g, (1..=g.r()).collect(), &(1..=g.r()).collect::<Vec<_>>(), g.kind() == GroupKind::SoEven, &mut |w| {
        out.push(w)
    });
    Ok(out)
}

/// Depth-first enumeration of all elements mapping `positions` onto `values`
/// (unsigned, each with both signs), identity elsewhere, in lexicographic order.
fn for_each_signed(
    g: GroupDatum,
    positions: Vec<usize>,
    values: &[usize],
    even_parity: bool,
    f: &mut dyn FnMut(SignedPerm),
) {
    let base = SignedPerm::identity(g);
    let mut image = base.image.clone();
    let mut candidates: Vec<usize> = values.iter().flat_map(|&v| [v, g.prime(v)]).collect();
    candidates.sort_unstable();
    let mut used = vec![false; g.r0() + 1];
    fn rec(
        g: GroupDatum,
        depth: usize,
        flips: usize,
        positions: &[usize],
        candidates: &[usize],
        even_parity: bool,
        used: &mut Vec<bool>,
        image: &mut Vec<u8>,
        f: &mut dyn FnMut(SignedPerm),
    ) {
        if depth == positions.len() {
            if !even_parity || flips % 2 == 0 {
                f(SignedPerm { group: g, image: image.clone() });
            }
            return;
        }
        let p = positions[depth];
        for &v in candidates {
            let key = v.min(g.prime(v));
            if used[key] {
                continue;
            }
            used[key] = true;
            image[p - 1] = v as u8;
            image[g.prime(p) - 1] = g.prime(v) as u8;
            let flip = usize::from(v > g.r());
            rec(g, depth + 1, flips + flip, positions, candidates, even_parity, used, image, f);
            used[key] = false;
        }
    }
    rec(g, 0, 0, &positions, &candidates, even_parity, &mut used, &mut image, f);
}

/// True iff `w` lies in `W_M = S_n x W(G(m))`.
pub fn in_levi_weyl(w: &SignedPerm, l: &LeviDatum) -> bool {
    let n = l.n();
    if (1..=n).any(|i| w.apply(i) > n) {
        return false;
    }
    // The block part is then automatically a signed permutation of the block;
    // its parity rule is the ambient one restricted to the block.
    let g = l.group();
    if g.kind() == GroupKind::SoEven {
        let block_flips = (n + 1..=g.r()).filter(|&i| w.apply(i) > g.r()).count();
        if block_flips % 2 == 1 {
            return false;
        }
    }
    true
}

/// All elements of `W_M`, in lexicographic order.
pub fn levi_weyl_elements(l: &LeviDatum) -> Vec<SignedPerm> {
    let g = l.group();
    let n = l.n();
    let mut gl = Vec::new();
    permutations(n, &mut |p| gl.push(p.to_vec()));
    let block: Vec<usize> = (n + 1..=g.r()).collect();
    let mut blocks = Vec::new();
    for_each_signed(g, block.clone(), &block, g.kind() == GroupKind::SoEven, &mut |w| blocks.push(w));
    let mut out = Vec::with_capacity(gl.len() * blocks.len());
    for p in &gl {
        for b in &blocks {
            let mut image = b.image.clone();
            for i in 1..=n {
                image[i - 1] = p[i - 1] as u8;
                image[g.prime(i) - 1] = g.prime(p[i - 1]) as u8;
            }
            out.push(SignedPerm { group: g, image });
        }
    }
    out.sort();
    out
}

/// Heap-free lexicographic permutation walk of `{1..n}`.
fn permutations(n: usize, f: &mut dyn FnMut(&[usize])) {
    let mut p: Vec<usize> = (1..=n).collect();
    loop {
        f(&p);
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// The coset invariant `w({1..n})`, sorted.
pub fn coset_key(w: &SignedPerm, l: &LeviDatum) -> Vec<usize> {
    let mut a: Vec<usize> = (1..=l.n()).map(|i| w.apply(i)).collect();
    a.sort_unstable();
    a
}

/// The lexicographically least element of the coset with invariant `key`.
fn least_with_key(l: &LeviDatum, key: &[usize]) -> SignedPerm {
    let g = l.group();
    let n = l.n();
    let mut image = SignedPerm::identity(g).image;
    let mut used = vec![false; g.r() + 1];
    for (i, &v) in key.iter().enumerate() {
        image[i] = v as u8;
        image[g.prime(i + 1) - 1] = g.prime(v) as u8;
        used[v.min(g.prime(v))] = true;
    }
    let free: Vec<usize> = (1..=g.r()).filter(|&v| !used[v]).collect();
    let flips = key.iter().filter(|&&v| v > g.r()).count();
    for (k, &v) in free.iter().enumerate() {
        let pos = n + 1 + k;
        let last = k + 1 == free.len();
        let val = if last && g.kind() == GroupKind::SoEven && flips % 2 == 1 { g.prime(v) } else { v };
        image[pos - 1] = val as u8;
        image[g.prime(pos) - 1] = g.prime(val) as u8;
    }
    SignedPerm { group: g, image }
}

/// Canonical representative of `w W_M`: its lexicographically least member.
pub fn canonical_rep(w: &SignedPerm, l: &LeviDatum) -> SignedPerm {
    least_with_key(l, &coset_key(w, l))
}

/// One canonical representative per left coset of `W_M`, in lexicographic order.
pub fn coset_reps(l: &LeviDatum) -> Result<Vec<SignedPerm>> {
    coset_reps_capped(l, DEFAULT_CAP)
}

pub fn coset_reps_capped(l: &LeviDatum, cap: u128) -> Result<Vec<SignedPerm>> {
    check_cap("coset representatives", l.coset_count(), cap)?;
    let g = l.group();
    let mut out = Vec::with_capacity(l.coset_count() as usize);
    let mut key = Vec::with_capacity(l.n());
    fn rec(g: GroupDatum, l: &LeviDatum, start: usize, key: &mut Vec<usize>, out: &mut Vec<SignedPerm>) {
        if key.len() == l.n() {
            let mut sorted = key.clone();
            sorted.sort_unstable();
            let flips = sorted.iter().filter(|&&v| v > g.r()).count();
            // With no free block position, SO(2r) cannot absorb an odd flip count.
            if l.n() == g.r() && g.kind() == GroupKind::SoEven && flips % 2 == 1 {
                return;
            }
            out.push(least_with_key(l, &sorted));
            return;
        }
        for u in start..=g.r() {
            for v in [u, g.prime(u)] {
                key.push(v);
                rec(g, l, u + 1, key, out);
                key.pop();
            }
        }
    }
    rec(g, l, 1, &mut key, &mut out);
    out.sort();
    Ok(out)
}

/// All members `w v` of the coset `w W_M`.
pub fn coset_members(w: &SignedPerm, levi_elements: &[SignedPerm]) -> Vec<SignedPerm> {
    levi_elements.iter().map(|v| w.mul(v)).collect()
}

/// The longest element of `W / W_M` for the maximal parabolic.
pub fn w0_maximal(l: &LeviDatum) -> SignedPerm {
    let g = l.group();
    let mut w = SignedPerm::identity(g);
    for i in 1..=l.n() {
        w = w.mul(&transposition(g, i, g.prime(i)));
    }
    if g.kind() == GroupKind::SoEven && l.n() % 2 == 1 {
        w = w.mul(&transposition(g, g.r(), g.r() + 1));
    }
    w
}

fn transposition(g: GroupDatum, a: usize, b: usize) -> SignedPerm {
    let mut w = SignedPerm::identity(g);
    w.image.swap(a - 1, b - 1);
    w
}

/// The `w_2` factor of a normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum W2 {
    Identity,
    /// `(d0 d0')` with `n + 1 <= d0 <= r`.
    DPrime(usize),
    /// The four-cycle `(i0 j0' i0' j0)`. The listed shape has `n < j0 <= r`;
    /// `j0` may also be the prime of such an index, the mirrored orientation
    /// that some `SO(2r)` cosets require.
    FourCycle { i0: usize, j0: usize },
}

/// Normal form of a coset representative: disjoint transpositions plus a `w_2` tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetNormalForm {
    /// Indices `a <= n` carrying `(a a')`.
    pub w1_bar_pairs: Vec<usize>,
    /// Pairs `(b, c)` with `b <= n < c <= r0 - n` carrying `(b c)(c' b')`.
    pub w1_cross_pairs: Vec<(usize, usize)>,
    pub w2: W2,
}

impl CosetNormalForm {
    /// False when the four-cycle uses the mirrored orientation.
    pub fn is_listed_shape(&self, g: GroupDatum) -> bool {
        match self.w2 {
            W2::FourCycle { j0, .. } => j0 <= g.r(),
            _ => true,
        }
    }

    /// Multiply out the factors.
    pub fn reconstruct(&self, l: &LeviDatum) -> Result<SignedPerm> {
        let g = l.group();
        let r0 = g.r0();
        let mut image: Vec<usize> = (1..=r0).collect();
        let mut touched = vec![false; r0 + 1];
        let mut set = |x: usize, y: usize, image: &mut Vec<usize>| -> Result<()> {
            if x < 1 || x > r0 || touched[x] {
                return Err(Error::Range(format!("normal-form factors overlap at {x}")));
            }
            touched[x] = true;
            image[x - 1] = y;
            Ok(())
        };
        let n = l.n();
        let block = |c: usize| c > n && c <= r0 - n && Some(c) != g.middle();
        for &a in &self.w1_bar_pairs {
            if a < 1 || a > n {
                return Err(Error::Range(format!("bar index {a} outside 1..n")));
            }
            set(a, g.prime(a), &mut image)?;
            set(g.prime(a), a, &mut image)?;
        }
        for &(b, c) in &self.w1_cross_pairs {
            if b < 1 || b > n || !block(c) {
                return Err(Error::Range(format!("cross pair ({b} {c}) out of range")));
            }
            set(b, c, &mut image)?;
            set(c, b, &mut image)?;
            set(g.prime(c), g.prime(b), &mut image)?;
            set(g.prime(b), g.prime(c), &mut image)?;
        }
        match self.w2 {
            W2::Identity => {}
            W2::DPrime(d) => {
                if g.kind() != GroupKind::SoEven || d <= n || d > g.r() {
                    return Err(Error::Range(format!("w2 = ({d} {d}') not admissible")));
                }
                set(d, g.prime(d), &mut image)?;
                set(g.prime(d), d, &mut image)?;
            }
            W2::FourCycle { i0, j0 } => {
                if g.kind() != GroupKind::SoEven || i0 < 1 || i0 > n || !block(j0) {
                    return Err(Error::Range(format!("four-cycle ({i0}, {j0}) not admissible")));
                }
                let (ip, jp) = (g.prime(i0), g.prime(j0));
                set(i0, jp, &mut image)?;
                set(jp, ip, &mut image)?;
                set(ip, j0, &mut image)?;
                set(j0, i0, &mut image)?;
            }
        }
        SignedPerm::from_image(g, &image)
    }
}

/// Lemma-style normal form of the coset `w W_M`.
///
/// Two rewriting passes on the right: a `GL_n` permutation sends every
/// position whose image is a low index `a` or `a'` back to position `a`
/// (leaving the remaining positions for the cross pairs, matched in sorted
/// order); then the `G(m)` factor straightens the block into the companions of
/// those pairs. For `SO(2r)` an odd number of bar pairs leaves one sign to
/// absorb, either into the least free `(d0 d0')` or into a four-cycle.
pub fn normal_form(w: &SignedPerm, l: &LeviDatum) -> CosetNormalForm {
    let g = l.group();
    let n = l.n();
    let key = coset_key(w, l);
    let low = |v: usize| v <= n || v > g.r0() - n;
    let mut bar = Vec::new();
    let mut free_positions = Vec::new();
    for i in 1..=n {
        if key.contains(&i) {
            continue;
        }
        if key.contains(&g.prime(i)) {
            bar.push(i);
        } else {
            free_positions.push(i);
        }
    }
    let high: Vec<usize> = key.iter().copied().filter(|&v| !low(v)).collect();
    debug_assert_eq!(high.len(), free_positions.len());
    let mut cross: Vec<(usize, usize)> = free_positions.into_iter().zip(high).collect();
    let mut w2 = W2::Identity;
    if g.kind() == GroupKind::SoEven && bar.len() % 2 == 1 {
        let used: BTreeSet<usize> = key.iter().map(|&v| v.min(g.prime(v))).collect();
        if let Some(d) = (n + 1..=g.r()).find(|d| !used.contains(d)) {
            w2 = W2::DPrime(d);
        } else {
            let k = cross.iter().position(|&(_, c)| c > g.r()).unwrap_or(0);
            let (b, c) = cross.remove(k);
            w2 = W2::FourCycle { i0: b, j0: g.prime(c) };
        }
    }
    CosetNormalForm { w1_bar_pairs: bar, w1_cross_pairs: cross, w2 }
}

/// Read an element as a product of normal-form factors, if it is one.
///
/// Returns `None` unless every cycle is a bar pair, a cross pair with its
/// companion, or (for `SO(2r)`, at most once) a `w_2` factor.
pub fn parse_normal_form(w: &SignedPerm, l: &LeviDatum) -> Option<CosetNormalForm> {
    let g = l.group();
    let n = l.n();
    let r0 = g.r0();
    let block = |c: usize| c > n && c <= r0 - n && Some(c) != g.middle();
    let is_low = |x: usize| (1..=n).contains(&x);
    let mut bar = Vec::new();
    let mut cross = Vec::new();
    let mut w2 = W2::Identity;
    let claim_w2 = |t: W2, w2: &mut W2| -> bool {
        if g.kind() != GroupKind::SoEven || *w2 != W2::Identity {
            return false;
        }
        *w2 = t;
        true
    };
    for cycle in w.cycles() {
        match cycle.len() {
            2 => {
                let (x, y) = (cycle[0], cycle[1]);
                if y == g.prime(x) {
                    if is_low(x) {
                        bar.push(x);
                    } else if x > n && x <= g.r() {
                        if !claim_w2(W2::DPrime(x), &mut w2) {
                            return None;
                        }
                    } else {
                        return None;
                    }
                } else if is_low(x) && block(y) {
                    cross.push((x, y));
                } else if is_low(g.prime(y)) && block(g.prime(x)) {
                    // companion (c' b') of a cross pair, recorded from its partner
                } else {
                    return None;
                }
            }
            4 => {
                let i0 = cycle[0];
                let x = cycle[1];
                if !is_low(i0) || !block(x) || cycle[2] != g.prime(i0) || cycle[3] != g.prime(x) {
                    return None;
                }
                if !claim_w2(W2::FourCycle { i0, j0: g.prime(x) }, &mut w2) {
                    return None;
                }
            }
            _ => return None,
        }
    }
    bar.sort_unstable();
    cross.sort_unstable();
    Some(CosetNormalForm { w1_bar_pairs: bar, w1_cross_pairs: cross, w2 })
}

/// Every member of the coset of `w` that is itself a product of normal-form
/// factors, paired with its parse.
pub fn normal_form_family(
    w: &SignedPerm,
    l: &LeviDatum,
    levi_elements: &[SignedPerm],
) -> Vec<(SignedPerm, CosetNormalForm)> {
    levi_elements
        .iter()
        .filter_map(|v| {
            let u = w.mul(v);
            parse_normal_form(&u, l).map(|nf| (u, nf))
        })
        .collect()
}

/// The reflection `s_α` as a signed permutation.
pub fn reflection(g: GroupDatum, root: &Root) -> SignedPerm {
    let mut w = SignedPerm::identity(g);
    let mut swap = |a: usize, b: usize| {
        w.image.swap(a - 1, b - 1);
        if g.prime(a) != b {
            w.image.swap(g.prime(a) - 1, g.prime(b) - 1);
        }
    };
    match root.shape {
        RootShape::Diff(i, j) => swap(i, j),
        RootShape::Sum(i, j) => swap(i, g.prime(j)),
        RootShape::Short(i) | RootShape::Long(i) => swap(i, g.prime(i)),
    }
    w
}

/// The longest element of the parabolic subgroup `W_θ`, the one element of
/// `W_θ` sending every root of `Σ_θ⁺` to a negative root.
pub fn longest_element(g: GroupDatum, theta: &BTreeSet<Root>) -> SignedPerm {
    let mut w = SignedPerm::identity(g);
    // Right multiplication by s_α raises the length exactly when wα > 0.
    while let Some(a) = theta.iter().find(|a| act(&w, a).is_positive()) {
        w = w.mul(&reflection(g, a));
    }
    w
}

/// Result of running `normal_form` over every element of `W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormSweep {
    pub levi: LeviDatum,
    pub elements: usize,
    /// Elements whose normal form does not reconstruct into their own coset.
    pub reconstruct_failures: Vec<SignedPerm>,
    /// Cosets with no member of the listed shape (only the mirrored four-cycle).
    pub unlisted_cosets: Vec<SignedPerm>,
}

impl NormalFormSweep {
    pub fn sound(&self) -> bool {
        self.reconstruct_failures.is_empty()
    }
}

/// Check `normal_form` on all of `W`: the reconstruction must differ from
/// `w` by an element of `W_M`. Also collect the cosets whose whole normal-form
/// family needs the mirrored four-cycle.
pub fn sweep_normal_forms(l: &LeviDatum, cap: u128) -> Result<NormalFormSweep> {
    let g = l.group();
    let all = enumerate_weyl(g, cap)?;
    let mut reconstruct_failures = Vec::new();
    for w in &all {
        let ok = normal_form(w, l)
            .reconstruct(l)
            .map(|u| in_levi_weyl(&w.inverse().mul(&u), l))
            .unwrap_or(false);
        if !ok {
            reconstruct_failures.push(w.clone());
        }
    }
    let levi_elements = levi_weyl_elements(l);
    let unlisted_cosets = coset_reps_capped(l, cap)?
        .into_iter()
        .filter(|w| !normal_form_family(w, l, &levi_elements).iter().any(|(_, nf)| nf.is_listed_shape(g)))
        .collect();
    Ok(NormalFormSweep { levi: *l, elements: all.len(), reconstruct_failures, unlisted_cosets })
}
