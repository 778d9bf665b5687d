//! Exact matrices and the matrix realization of root subgroups, `n(x)` and
//! Weyl representatives.

use std::fmt;

use serde::Serialize;

use super::scalar::{Ring, Scalar};
use crate::datum::{BesselDatum, GroupDatum, GroupKind, LeviDatum};
use crate::error::{Error, Result};
use crate::roots::{Root, RootShape};
use crate::weyl::SignedPerm;

/// Square matrix over one exact ring, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    ring: Ring,
    n: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, n: usize) -> ExactMatrix {
        ExactMatrix { ring, n, data: vec![ring.zero(); n * n] }
    }

    pub fn identity(ring: Ring, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(ring, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at 1-based `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[(i - 1) * self.n + (j - 1)] = v;
    }

    /// Add `v` to entry `(i, j)`.
    pub fn bump(&mut self, i: usize, j: usize, v: &Scalar) {
        let k = (i - 1) * self.n + (j - 1);
        self.data[k] = &self.data[k] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &ExactMatrix) -> ExactMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        ExactMatrix { ring: self.ring, n: self.n, data }
    }

    pub fn sub(&self, o: &ExactMatrix) -> ExactMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        ExactMatrix { ring: self.ring, n: self.n, data }
    }

    pub fn scale(&self, s: &Scalar) -> ExactMatrix {
        ExactMatrix { ring: self.ring, n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        let n = self.n;
        let mut out = ExactMatrix::zeros(self.ring, n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &o.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] = &out.data[i * n + j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> ExactMatrix {
        let n = self.n;
        let mut out = ExactMatrix::zeros(self.ring, n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].clone();
            }
        }
        out
    }

    /// Entrywise Galois conjugate.
    pub fn conj(&self) -> ExactMatrix {
        ExactMatrix { ring: self.ring, n: self.n, data: self.data.iter().map(Scalar::conj).collect() }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = ExactMatrix::identity(self.ring, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.data[r * n + col].is_zero())?;
            for j in 0..n {
                a.data.swap(col * n + j, pivot * n + j);
                inv.data.swap(col * n + j, pivot * n + j);
            }
            let p = a.data[col * n + col].inv()?;
            for j in 0..n {
                a.data[col * n + j] = &a.data[col * n + j] * &p;
                inv.data[col * n + j] = &inv.data[col * n + j] * &p;
            }
            for r in 0..n {
                if r == col || a.data[r * n + col].is_zero() {
                    continue;
                }
                let f = a.data[r * n + col].clone();
                for j in 0..n {
                    a.data[r * n + j] = &a.data[r * n + j] - &(&f * &a.data[col * n + j]);
                    inv.data[r * n + j] = &inv.data[r * n + j] - &(&f * &inv.data[col * n + j]);
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Scalar {
        let n = self.n;
        let mut a = self.clone();
        let mut det = self.ring.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.data[r * n + col].is_zero()) else {
                return self.ring.zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a.data[col * n + col].clone();
            det = &det * &p;
            let pinv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a.data[r * n + col].is_zero() {
                    continue;
                }
                let f = &a.data[r * n + col] * &pinv;
                for j in col..n {
                    a.data[r * n + j] = &a.data[r * n + j] - &(&f * &a.data[col * n + j]);
                }
            }
        }
        det
    }

    /// Row-major text, rows separated by `;`.
    pub fn to_text(&self) -> String {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.data[i * self.n + j].to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

/// A classical group over an exact ring, realized on `r0 × r0` matrices with
/// the antidiagonal form `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatGroup {
    group: GroupDatum,
    ring: Ring,
}

impl MatGroup {
    /// Orthogonal kinds need a non-quadratic ring, unitary kinds a quadratic one.
    pub fn new(group: GroupDatum, ring: Ring) -> Result<MatGroup> {
        if group.kind().is_unitary() != ring.is_quadratic() {
            return Err(Error::BadParameter(format!("{} cannot be realized over {ring:?}", group.kind())));
        }
        Ok(MatGroup { group, ring })
    }

    /// The natural ring for the group over `base` (quadratic for unitary kinds).
    pub fn over(group: GroupDatum, base: Ring) -> MatGroup {
        let ring = if group.kind().is_unitary() { base.quadratic() } else { base.base() };
        MatGroup { group, ring }
    }

    pub fn group(&self) -> GroupDatum {
        self.group
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    fn r0(&self) -> usize {
        self.group.r0()
    }

    pub fn identity(&self) -> ExactMatrix {
        ExactMatrix::identity(self.ring, self.r0())
    }

    /// `J`, ones on the antidiagonal.
    pub fn form(&self) -> ExactMatrix {
        let mut j = ExactMatrix::zeros(self.ring, self.r0());
        for i in 1..=self.r0() {
            j.set(i, self.group.prime(i), self.ring.one());
        }
        j
    }

    /// `MᵀJM = J` with `det M = 1`, or `M̄ᵀJM = J` for unitary kinds.
    pub fn is_member(&self, m: &ExactMatrix) -> bool {
        let j = self.form();
        if self.group.kind().is_unitary() {
            m.conj().transpose().mul(&j).mul(m) == j
        } else {
            m.transpose().mul(&j).mul(m) == j && m.det().is_one()
        }
    }

    /// `tE_{ab} - t̄E_{b'a'}` in signed indices.
    fn pair_vector(&self, a: usize, b: usize, t: &Scalar) -> ExactMatrix {
        let g = self.group;
        let mut x = ExactMatrix::zeros(self.ring, self.r0());
        x.bump(a, b, t);
        x.bump(g.prime(b), g.prime(a), &-t.conj());
        x
    }

    /// The nilpotent `tX_α`.
    pub fn root_vector(&self, alpha: &Root, t: &Scalar) -> Result<ExactMatrix> {
        let g = self.group;
        if !alpha.is_valid_for(g) {
            return Err(Error::BadParameter(format!("{alpha} is not a root of {g}")));
        }
        let mid = g.r() + 1;
        let (a, b) = match alpha.shape {
            RootShape::Diff(i, j) => (i, j),
            RootShape::Sum(i, j) => (i, g.prime(j)),
            RootShape::Short(i) => (i, mid),
            RootShape::Long(i) => {
                if !(t + &t.conj()).is_zero() {
                    return Err(Error::BadParameter(format!("2e_{i} needs t + t̄ = 0, got t = {t}")));
                }
                let (a, b) = if alpha.negative { (g.prime(i), i) } else { (i, g.prime(i)) };
                let mut x = ExactMatrix::zeros(self.ring, self.r0());
                x.set(a, b, t.clone());
                return Ok(x);
            }
        };
        let (a, b) = if alpha.negative { (b, a) } else { (a, b) };
        Ok(self.pair_vector(a, b, t))
    }

    /// `exp(tX_α)`; `X_α³ = 0`, so this is `I + X + X²/2`.
    pub fn unipotent(&self, alpha: &Root, t: &Scalar) -> Result<ExactMatrix> {
        Ok(exp_nilpotent(&self.root_vector(alpha, t)?))
    }

    /// `n(x)` for `x` of length `s`, built as `exp(N)` with `N` the sum of the
    /// root vectors in row `ℓ + 1`.
    pub fn n_of_x(&self, x: &[Scalar], b: &BesselDatum) -> Result<ExactMatrix> {
        let s = b.s();
        if s < 0 || x.len() != s as usize {
            return Err(Error::BadParameter(format!("x has length {}, expected s = {s}", x.len())));
        }
        let p = b.ell() + 1;
        let mut n = ExactMatrix::zeros(self.ring, self.r0());
        for (j, xj) in x.iter().enumerate() {
            n = n.add(&self.pair_vector(p, p + j + 1, xj));
        }
        Ok(exp_nilpotent(&n))
    }

    /// `-½ Σ_j x_j x̄_{s+1-j}`, the corner entry of `n(x)` forced by membership.
    pub fn corner_entry(&self, x: &[Scalar]) -> Scalar {
        let s = x.len();
        let sum = (0..s).fold(self.ring.zero(), |acc, j| &acc + &(&x[j] * &x[s - 1 - j].conj()));
        let half = Scalar::from_ratio(self.ring, 1, 2).expect("odd characteristic");
        -(&sum * &half)
    }

    /// Signed permutation matrix sending `e_i` to `±e_{w(i)}`. All signs are
    /// `+1` except the middle basis vector of an odd orthogonal group, which
    /// carries the sign of the permutation so the determinant is 1.
    pub fn perm_rep(&self, w: &SignedPerm) -> ExactMatrix {
        let g = self.group;
        let mut m = ExactMatrix::zeros(self.ring, self.r0());
        for i in 1..=self.r0() {
            m.set(w.apply(i), i, self.ring.one());
        }
        if g.kind() == GroupKind::SoOdd && !m.det().is_one() {
            let mid = g.r() + 1;
            m.set(mid, mid, -self.ring.one());
        }
        m
    }

    /// Whether `u` lies in `U_ℓ`: upper unitriangular with identity middle block.
    pub fn in_u_ell(&self, u: &ExactMatrix, b: &BesselDatum) -> bool {
        let n = self.r0();
        let (lo, hi) = (b.ell() + 1, n - b.ell());
        for i in 1..=n {
            for j in 1..=n {
                let v = u.at(i, j);
                let ok = if i == j {
                    v.is_one()
                } else if i > j || (lo..=hi).contains(&i) && (lo..=hi).contains(&j) {
                    v.is_zero()
                } else {
                    true
                };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// `(u_{12}, …, u_{ℓ-1,ℓ}, Σ_j a_j u_{ℓ,ℓ+j})`, the additive coordinates
    /// that `χ` composes with `ψ`.
    pub fn chi_coords(&self, u: &ExactMatrix, b: &BesselDatum) -> Result<Vec<Scalar>> {
        if !self.in_u_ell(u, b) {
            return Err(Error::NotInUell);
        }
        let ell = b.ell();
        let mut out: Vec<Scalar> = (1..ell).map(|i| u.at(i, i + 1).clone()).collect();
        let last = b.a().iter().enumerate().fold(self.ring.zero(), |acc, (j, &aj)| {
            &acc + &(&Scalar::from_i64(self.ring, aj) * u.at(ell, ell + 1 + j))
        });
        out.push(last);
        Ok(out)
    }

    /// Whether `m` is block upper triangular for the `(n, r0 - 2n, n)` flag of `P`.
    pub fn in_parabolic(&self, m: &ExactMatrix, l: &LeviDatum) -> bool {
        let (n, r0) = (l.n(), self.r0());
        let block = |i: usize| if i <= n { 0 } else if i <= r0 - n { 1 } else { 2 };
        (1..=r0).all(|i| (1..=r0).all(|j| block(i) <= block(j) || m.at(i, j).is_zero()))
    }
}

/// `I + X + X²/2` for `X³ = 0`.
pub fn exp_nilpotent(x: &ExactMatrix) -> ExactMatrix {
    let x2 = x.mul(x);
    debug_assert!(x2.mul(x).is_zero(), "exponential needs X^3 = 0");
    let half = Scalar::from_ratio(x.ring(), 1, 2).expect("odd characteristic");
    ExactMatrix::identity(x.ring(), x.size()).add(x).add(&x2.scale(&half))
}
