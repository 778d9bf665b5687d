//! Brute-force computations in orthogonal groups over small prime fields.
//!
//! Matrices here are dense `u8` arrays, fast enough to enumerate `SO_5(F_3)`
//! and its flag varieties outright. Unitary groups are not covered.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::matrix::{ExactMatrix, MatGroup};
use super::scalar::{Ring, Scalar};
use crate::datum::{Config, GroupKind};
use crate::error::{Error, Result};
use crate::roots::{positive_roots, sigma_p_plus, Root};
use crate::weyl::{coset_key, coset_reps_capped, w0_maximal, DEFAULT_CAP};

/// Square matrix over `F_q`, entries in `0..q`, 1-based accessors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMat {
    n: usize,
    data: Vec<u8>,
}

fn inv_mod(a: u8, q: u8) -> u8 {
    (1..q).find(|&b| (a as u32 * b as u32) % q as u32 == 1).expect("nonzero residue")
}

impl FqMat {
    pub fn identity(n: usize) -> FqMat {
        let mut m = FqMat { n, data: vec![0; n * n] };
        for i in 1..=n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.data[(i - 1) * self.n + j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.data[(i - 1) * self.n + j - 1] = v;
    }

    pub fn mul(&self, o: &FqMat, q: u8) -> FqMat {
        let n = self.n;
        let mut data = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for k in 0..n {
                    acc += self.data[i * n + k] as u32 * o.data[k * n + j] as u32;
                }
                data[i * n + j] = (acc % q as u32) as u8;
            }
        }
        FqMat { n, data }
    }

    pub fn apply(&self, v: &[u8], q: u8) -> Vec<u8> {
        (0..self.n)
            .map(|i| ((0..self.n).map(|k| self.data[i * self.n + k] as u32 * v[k] as u32).sum::<u32>() % q as u32) as u8)
            .collect()
    }

    /// Reduce an exact prime-field matrix.
    pub fn from_exact(m: &ExactMatrix) -> Result<FqMat> {
        let n = m.size();
        let mut data = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let r = m.at(i, j).residue().ok_or_else(|| Error::BadParameter("matrix is not over a prime field".into()))?;
                data.push(r as u8);
            }
        }
        Ok(FqMat { n, data })
    }

    /// Column space of the first `k` columns, as a reduced row echelon basis.
    pub fn column_span(&self, k: usize, q: u8) -> Vec<u8> {
        let n = self.n;
        let mut rows: Vec<Vec<u8>> = (1..=k).map(|j| (1..=n).map(|i| self.at(i, j)).collect()).collect();
        rref(&mut rows, q);
        rows.concat()
    }
}

fn rref(rows: &mut [Vec<u8>], q: u8) {
    let qq = q as u32;
    let cols = rows.first().map_or(0, |r| r.len());
    let mut lead = 0;
    for c in 0..cols {
        let Some(p) = (lead..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(lead, p);
        let inv = inv_mod(rows[lead][c], q) as u32;
        for v in rows[lead].iter_mut() {
            *v = ((*v as u32 * inv) % qq) as u8;
        }
        for i in 0..rows.len() {
            if i != lead && rows[i][c] != 0 {
                let f = rows[i][c] as u32;
                for j in 0..cols {
                    rows[i][j] = ((rows[i][j] as u32 + qq * qq - f * rows[lead][j] as u32) % qq) as u8;
                }
            }
        }
        lead += 1;
        if lead == rows.len() {
            break;
        }
    }
}

fn primitive_root(q: u8) -> u8 {
    (2..q)
        .find(|&g| {
            let mut x = 1u32;
            (1..q - 1).all(|_| {
                x = x * g as u32 % q as u32;
                x != 1
            })
        })
        .unwrap_or(1)
}

/// Generators of `SO_dim(F_q)` for the antidiagonal form: root unipotents with
/// parameter 1 and one torus element per hyperbolic pair, the latter carrying
/// the spinor norm of a primitive root.
pub fn so_generators(dim: usize, q: u8) -> Vec<FqMat> {
    let prime = |i: usize| dim + 1 - i;
    let half = inv_mod(2, q) as u32;
    let mut gens = Vec::new();
    for a in 1..=dim {
        for b in 1..=dim {
            if a == b || b == prime(a) {
                continue;
            }
            // X = E_ab - E_b'a', exp(X) = I + X + X²/2.
            let mut x = vec![vec![0i64; dim + 1]; dim + 1];
            x[a][b] += 1;
            x[prime(b)][prime(a)] -= 1;
            let mut m = FqMat::identity(dim);
            for i in 1..=dim {
                for j in 1..=dim {
                    let sq: i64 = (1..=dim).map(|k| x[i][k] * x[k][j]).sum();
                    let v = (i == j) as i64 + x[i][j];
                    let total = (v.rem_euclid(q as i64) as u32 + sq.rem_euclid(q as i64) as u32 * half) % q as u32;
                    m.set(i, j, total as u8);
                }
            }
            if !gens.contains(&m) {
                gens.push(m);
            }
        }
    }
    let g = primitive_root(q);
    for i in 1..=dim / 2 {
        let mut t = FqMat::identity(dim);
        t.set(i, i, g);
        t.set(prime(i), prime(i), inv_mod(g, q));
        gens.push(t);
    }
    gens
}

/// Closure of `gens` under multiplication, failing past `cap` elements.
pub fn generate(gens: &[FqMat], q: u8, cap: usize) -> Result<Vec<FqMat>> {
    let Some(first) = gens.first() else { return Err(Error::BadParameter("no generators".into())) };
    let id = FqMat::identity(first.size());
    let mut seen: HashSet<FqMat> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = m.mul(g, q);
            if seen.insert(p.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { what: "group elements".into(), needed: seen.len() as u128, cap: cap as u128 });
                }
                queue.push_back(p);
            }
        }
    }
    let mut out: Vec<FqMat> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Element cap for group enumerations.
pub const GROUP_CAP: usize = 200_000;

fn prime_q(q: u64) -> Result<u8> {
    Ring::prime(q)?;
    u8::try_from(q).ok().filter(|&q| q < 16).ok_or_else(|| Error::BadParameter(format!("q = {q} is too large for brute force")))
}

/// `Q(a) = Σ_j a_j a_{ℓ0+1-j}` for the antidiagonal form.
pub fn quad_form(a: &[u8], q: u8) -> u8 {
    let n = a.len();
    ((0..n).map(|j| a[j] as u32 * a[n - 1 - j] as u32).sum::<u32>() % q as u32) as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquareClass {
    Zero,
    Square,
    NonSquare,
}

pub fn square_class(v: u8, q: u8) -> SquareClass {
    if v % q == 0 {
        SquareClass::Zero
    } else if (1..q).any(|x| (x as u32 * x as u32) % q as u32 == v as u32) {
        SquareClass::Square
    } else {
        SquareClass::NonSquare
    }
}

/// An isometry moving `a` to `(δ, 0, …, 0, 1)` with `δ = Q(a)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WittNormal {
    pub a: Vec<u8>,
    pub h: Vec<Vec<u8>>,
    pub target: Vec<u8>,
    pub delta: u8,
    pub class: SquareClass,
    pub isotropic: bool,
}

/// Normalize every nonzero `a` in `F_q^{ℓ0}` (or just the ones given) by a
/// search through `SO_{ℓ0}(F_q)`.
pub fn witt_normalize(vectors: &[Vec<u8>], q: u64) -> Result<Vec<WittNormal>> {
    let q = prime_q(q)?;
    let Some(dim) = vectors.first().map(Vec::len) else { return Ok(Vec::new()) };
    if dim < 2 {
        return Err(Error::BadParameter("ell0 must be at least 2".into()));
    }
    let group = generate(&so_generators(dim, q), q, GROUP_CAP)?;
    let half = inv_mod(2, q) as u32;
    vectors
        .iter()
        .map(|a| {
            if a.len() != dim || a.iter().all(|&v| v == 0) || a.iter().any(|&v| v >= q) {
                return Err(Error::BadParameter(format!("{a:?} is not a nonzero vector of F_{q}^{dim}")));
            }
            let qa = quad_form(a, q);
            let delta = (qa as u32 * half % q as u32) as u8;
            let mut target = vec![0u8; dim];
            target[0] = delta;
            target[dim - 1] = 1;
            let h = group
                .iter()
                .find(|h| h.apply(a, q) == target)
                .ok_or_else(|| Error::NotFound(format!("no isometry moves {a:?} to {target:?}")))?;
            Ok(WittNormal {
                a: a.clone(),
                h: (1..=dim).map(|i| (1..=dim).map(|j| h.at(i, j)).collect()).collect(),
                target,
                delta,
                class: square_class(delta, q),
                isotropic: qa == 0,
            })
        })
        .collect()
}

/// All nonzero vectors of `F_q^dim`.
pub fn nonzero_vectors(dim: usize, q: u64) -> Vec<Vec<u8>> {
    let q = q as u8;
    let total = (q as usize).pow(dim as u32);
    (1..total)
        .map(|mut k| {
            let mut v = vec![0u8; dim];
            for slot in v.iter_mut().rev() {
                *slot = (k % q as usize) as u8;
                k /= q as usize;
            }
            v
        })
        .collect()
}

/// `(u_{12}, …, u_{ℓ-1,ℓ}, Σ a_j u_{ℓ,ℓ+j})` of an `F_q` matrix, without a
/// membership check.
pub fn chi_fq(u: &FqMat, ell: usize, a: &[u8], q: u8) -> Vec<u8> {
    let mut out: Vec<u8> = (1..ell).map(|i| u.at(i, i + 1)).collect();
    let last = a.iter().enumerate().map(|(j, &aj)| aj as u32 * u.at(ell, ell + 1 + j) as u32).sum::<u32>() % q as u32;
    out.push(last as u8);
    out
}

fn in_u_ell_fq(u: &FqMat, ell: usize) -> bool {
    let n = u.size();
    let (lo, hi) = (ell + 1, n - ell);
    (1..=n).all(|i| {
        (1..=n).all(|j| {
            let v = u.at(i, j);
            if i == j {
                v == 1
            } else if i > j || (lo..=hi).contains(&i) && (lo..=hi).contains(&j) {
                v == 0
            } else {
                true
            }
        })
    })
}

struct Setting {
    mg: MatGroup,
    q: u8,
    ell: usize,
    a: Vec<u8>,
}

impl Setting {
    fn new(config: &Config, q: u64, delta: i64) -> Result<Setting> {
        if config.group.kind().is_unitary() {
            return Err(Error::BadParameter("finite-field oracles cover orthogonal groups only".into()));
        }
        let qq = prime_q(q)?;
        let ring = Ring::Prime(q);
        let mg = MatGroup::new(config.group, ring)?;
        let b = crate::datum::BesselDatum::with_delta(config.group, config.bessel.ell1(), delta)?;
        let a = b.a().iter().map(|&v| v.rem_euclid(q as i64) as u8).collect();
        Ok(Setting { mg, q: qq, ell: b.ell(), a })
    }

    fn u_ell_generators(&self) -> Result<Vec<FqMat>> {
        let one = self.mg.ring().one();
        positive_roots(self.mg.group())
            .into_iter()
            .filter(|r| r.terms()[0].0 <= self.ell)
            .map(|r| FqMat::from_exact(&self.mg.unipotent(&r, &one)?))
            .collect()
    }

    fn chi_invariant(&self, m: &FqMat, m_inv: &FqMat, gens: &[FqMat]) -> bool {
        gens.iter().all(|u| chi_fq(&m.mul(u, self.q).mul(m_inv, self.q), self.ell, &self.a, self.q) == chi_fq(u, self.ell, &self.a, self.q))
    }
}

/// The stabilizer `M_χ` inside `M_ℓ = GL_1^ℓ × SO_{ℓ0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub levi_order: usize,
    pub order: usize,
    /// Size of `{(t, …, t, h) : h a = t a}`, the closed-form description.
    pub formula_order: usize,
    pub agrees: bool,
}

fn m_chi(s: &Setting) -> Result<(Vec<FqMat>, StabilizerReport)> {
    let r0 = s.mg.group().r0();
    let ell0 = s.a.len();
    let q = s.q;
    let inner = generate(&so_generators(ell0, q), q, GROUP_CAP)?;
    let gens = s.u_ell_generators()?;
    let mut tori: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..s.ell {
        tori = tori.into_iter().flat_map(|t| (1..q).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    let mut found = Vec::new();
    let mut formula = 0;
    let mut total = 0;
    for t in &tori {
        for h in &inner {
            total += 1;
            let mut m = FqMat::identity(r0);
            let mut m_inv = FqMat::identity(r0);
            for (i, &ti) in t.iter().enumerate() {
                m.set(i + 1, i + 1, ti);
                m.set(r0 - i, r0 - i, inv_mod(ti, q));
                m_inv.set(i + 1, i + 1, inv_mod(ti, q));
                m_inv.set(r0 - i, r0 - i, ti);
            }
            let h_inv = inner.iter().find(|k| k.mul(h, q) == FqMat::identity(ell0)).expect("group");
            for i in 1..=ell0 {
                for j in 1..=ell0 {
                    m.set(s.ell + i, s.ell + j, h.at(i, j));
                    m_inv.set(s.ell + i, s.ell + j, h_inv.at(i, j));
                }
            }
            let ta: Vec<u8> = s.a.iter().map(|&v| (v as u32 * t[0] as u32 % q as u32) as u8).collect();
            if t.iter().all(|&v| v == t[0]) && h.apply(&s.a, q) == ta {
                formula += 1;
            }
            if s.chi_invariant(&m, &m_inv, &gens) {
                found.push(m);
            }
        }
    }
    let report = StabilizerReport { levi_order: total, order: found.len(), formula_order: formula, agrees: found.len() == formula };
    Ok((found, report))
}

pub fn m_chi_stabilizer(config: &Config, q: u64, delta: i64) -> Result<StabilizerReport> {
    Ok(m_chi(&Setting::new(config, q, delta)?)?.1)
}

/// One `R_χ`-orbit on `G/P`, with the labels `(w, x)` that reach it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub size: usize,
    pub labels: Vec<(String, Vec<u8>)>,
    /// Whether some `p ∈ N` has `g p g⁻¹ ∈ U_ℓ` with nonzero `χ`, for the
    /// first label `g = n(x) w`.
    pub killed_by_unipotent: bool,
}

/// `R_χ \ G / P` computed by brute force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetOracle {
    pub q: u64,
    pub delta: i64,
    pub group_order: Option<usize>,
    pub points: usize,
    pub stabilizer: StabilizerReport,
    pub orbits: Vec<OrbitReport>,
    /// Every orbit is reached by some `n(x) w` with `w` a canonical coset rep.
    pub covered: bool,
    /// `x` and `x'` with equal length always reach the same orbit for a fixed `w`.
    pub length_determines_orbit: bool,
    /// Orbits that no element of `N` kills, by first label.
    pub surviving: Vec<(String, Vec<u8>)>,
}

fn all_vectors(len: usize, q: u8) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..q).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Enumerate `G/P`, split it into `R_χ`-orbits, and test each orbit for an
/// element of `N` that `χ` sees.
pub fn coset_oracle(config: &Config, q: u64, delta: i64) -> Result<CosetOracle> {
    coset_oracle_capped(config, q, delta, GROUP_CAP)
}

/// [`coset_oracle`] with `cap` bounding every enumerated set.
pub fn coset_oracle_capped(config: &Config, q: u64, delta: i64, cap: usize) -> Result<CosetOracle> {
    let s = Setting::new(config, q, delta)?;
    let (qq, n, r0) = (s.q, config.n(), config.group.r0());
    let g_gens: Vec<FqMat> = so_generators(r0, qq);
    let group_order = if r0 <= 5 { Some(generate(&g_gens, qq, cap)?.len()) } else { None };

    // Points of G/P: the orbit of span(e_1..e_n).
    let base = FqMat::identity(r0).column_span(n, qq);
    let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(base.clone(), 0)]);
    let mut points = vec![base];
    let mut i = 0;
    while i < points.len() {
        let rows = points[i].clone();
        for g in &g_gens {
            let image = span_image(g, &rows, n, r0, qq);
            if !index.contains_key(&image) {
                index.insert(image.clone(), points.len());
                points.push(image);
            }
        }
        i += 1;
        if points.len() > cap {
            return Err(Error::CapExceeded { what: "flag points".into(), needed: points.len() as u128, cap: cap as u128 });
        }
    }

    let (m_elems, stabilizer) = m_chi(&s)?;
    let mut r_gens = s.u_ell_generators()?;
    r_gens.extend(m_elems);
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for (k, pt) in points.iter().enumerate() {
        for g in &r_gens {
            let j = index[&span_image(g, pt, n, r0, qq)];
            let (a, b) = (find(&mut parent, k), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let mut orbit_of: HashMap<usize, usize> = HashMap::new();
    let mut sizes = Vec::new();
    for k in 0..points.len() {
        let root = find(&mut parent, k);
        let next = orbit_of.len();
        let id = *orbit_of.entry(root).or_insert(next);
        if id == sizes.len() {
            sizes.push(0);
        }
        sizes[id] += 1;
    }

    let sl = config.bessel.s().max(0) as usize;
    let reps = coset_reps_capped(&config.levi, DEFAULT_CAP)?;
    let mut labels: Vec<Vec<(String, Vec<u8>)>> = vec![Vec::new(); sizes.len()];
    let mut first: Vec<Option<FqMat>> = vec![None; sizes.len()];
    let mut length_ok = true;
    let b = crate::datum::BesselDatum::with_delta(config.group, config.bessel.ell1(), delta)?;
    for w in &reps {
        let pw = s.mg.perm_rep(w);
        let name = format!("{:?}", coset_key(w, &config.levi));
        let mut by_length: HashMap<u8, usize> = HashMap::new();
        for x in all_vectors(sl, qq) {
            let xs: Vec<Scalar> = x.iter().map(|&v| Scalar::from_i64(s.mg.ring(), v as i64)).collect();
            let g = FqMat::from_exact(&s.mg.n_of_x(&xs, &b)?.mul(&pw))?;
            let id = orbit_of[&find(&mut parent, index[&g.column_span(n, qq)])];
            if *by_length.entry(quad_form(&x, qq)).or_insert(id) != id {
                length_ok = false;
            }
            if first[id].is_none() {
                first[id] = Some(g);
            }
            labels[id].push((name.clone(), x));
        }
    }
    let covered = first.iter().all(Option::is_some);

    // N = unipotent radical of P.
    let one = s.mg.ring().one();
    let n_gens: Vec<FqMat> = sigma_p_plus(&config.levi)
        .iter()
        .map(|r: &Root| FqMat::from_exact(&s.mg.unipotent(r, &one)?))
        .collect::<Result<_>>()?;
    let n_group = generate(&n_gens, qq, cap)?;
    let mut orbits = Vec::new();
    let mut surviving = Vec::new();
    for (id, size) in sizes.iter().enumerate() {
        let killed = match &first[id] {
            Some(g) => {
                let g_inv = inverse_fq(g, qq)?;
                n_group.iter().any(|p| {
                    let c = g.mul(p, qq).mul(&g_inv, qq);
                    in_u_ell_fq(&c, s.ell) && chi_fq(&c, s.ell, &s.a, qq).iter().any(|&v| v != 0)
                })
            }
            None => false,
        };
        if !killed {
            if let Some(l) = labels[id].first() {
                surviving.push(l.clone());
            }
        }
        orbits.push(OrbitReport { size: *size, labels: labels[id].clone(), killed_by_unipotent: killed });
    }
    Ok(CosetOracle {
        q,
        delta,
        group_order,
        points: points.len(),
        stabilizer,
        orbits,
        covered,
        length_determines_orbit: length_ok,
        surviving,
    })
}

fn span_image(g: &FqMat, rows: &[u8], n: usize, r0: usize, q: u8) -> Vec<u8> {
    let mut out: Vec<Vec<u8>> = rows.chunks(r0).map(|v| g.apply(v, q)).collect();
    debug_assert_eq!(out.len(), n);
    rref(&mut out, q);
    out.concat()
}

fn inverse_fq(m: &FqMat, q: u8) -> Result<FqMat> {
    let n = m.size();
    let mut rows: Vec<Vec<u8>> = (1..=n)
        .map(|i| (1..=n).map(|j| m.at(i, j)).chain((1..=n).map(|j| (i == j) as u8)).collect())
        .collect();
    rref(&mut rows, q);
    if (1..=n).any(|i| rows[i - 1][i - 1] != 1) {
        return Err(Error::BadParameter("singular matrix".into()));
    }
    let mut out = FqMat::identity(n);
    for i in 1..=n {
        for j in 1..=n {
            out.set(i, j, rows[i - 1][n + j - 1]);
        }
    }
    Ok(out)
}

/// The near-`w0` coset's `x` values that survive the unipotent test, read
/// off a coset oracle by the key of `w`.
pub fn surviving_keys(oracle: &CosetOracle) -> Vec<String> {
    let mut keys: Vec<String> = oracle.surviving.iter().map(|(k, _)| k.clone()).collect();
    keys.sort();
    keys.dedup();
    keys
}

/// Key of the longest coset, as printed in oracle labels.
pub fn w0_key(config: &Config) -> String {
    format!("{:?}", coset_key(&w0_maximal(&config.levi), &config.levi))
}

pub fn is_orthogonal(kind: GroupKind) -> bool {
    !kind.is_unitary()
}
