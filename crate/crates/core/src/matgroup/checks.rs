//! Exact checks of the matrix identities behind the obstruction arguments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::{ExactMatrix, MatGroup};
use super::scalar::{Ring, Scalar};
use crate::datum::{BesselDatum, Config, GroupDatum};
use crate::error::{Error, Result};
use crate::roots::{act, alpha, positive_roots, Root, RootShape};
use crate::weyl::{enumerate_weyl, w0_maximal, SignedPerm, DEFAULT_CAP};

/// `n(x) u_{α_0}(t) n(x)⁻¹` against `u_{α_0}(t) u_β(±y t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutationReport {
    pub alpha0: Root,
    /// Index `j` of the coordinate `y = x̄_j` that the shift reads.
    pub coordinate: usize,
    pub y: Scalar,
    pub t: Scalar,
    /// Change of the last `χ` coordinate.
    pub shift: Scalar,
    /// `+1` or `-1` when `shift = sign · y · t`, `0` otherwise.
    pub sign: i8,
    /// Whether the conjugate equals `u_{α_0}(t) u_β(sign · y · t)` exactly.
    pub matrices_equal: bool,
}

/// Roots `e_ℓ ± e_k` with `ℓ + 2 <= k <= r`, plus `e_ℓ` for odd `r0`.
pub fn shift_roots(b: &BesselDatum) -> Vec<Root> {
    let g = b.group();
    let ell = b.ell();
    let mut out = Vec::new();
    for k in ell + 2..=g.r() {
        out.push(Root::sum(ell, k));
        out.push(Root::diff(ell, k));
    }
    if g.kind().is_odd() {
        out.push(Root::short(ell));
    }
    out
}

fn column_of(g: GroupDatum, root: &Root) -> Option<usize> {
    match root.shape {
        RootShape::Sum(_, k) => Some(g.prime(k)),
        RootShape::Diff(_, k) => Some(k),
        RootShape::Short(_) => Some(g.r() + 1),
        RootShape::Long(_) => None,
    }
}

pub fn verify_commutation(mg: &MatGroup, b: &BesselDatum, x: &[Scalar], alpha0: &Root, t: &Scalar) -> Result<CommutationReport> {
    let g = b.group();
    if !shift_roots(b).contains(alpha0) {
        return Err(Error::BadParameter(format!("{alpha0} is not of the form e_ell ± e_k with k >= ell + 2")));
    }
    let p = b.ell() + 1;
    let c = column_of(g, alpha0).expect("shift roots have a column");
    let coordinate = g.prime(c) - p;
    let y = x[coordinate - 1].conj();
    let n = mg.n_of_x(x, b)?;
    let n_inv = n.inverse().expect("unipotent");
    let u = mg.unipotent(alpha0, t)?;
    let conj = n.mul(&u).mul(&n_inv);
    let before = mg.chi_coords(&u, b)?;
    let after = mg.chi_coords(&conj, b)?;
    let shift = after.last().unwrap() - before.last().unwrap();
    let yt = &y * t;
    let sign = if shift == yt { 1 } else if shift == -yt.clone() { -1 } else { 0 };
    let beta = Root::sum(b.ell(), b.ell() + 1);
    let param = if sign < 0 { -yt.clone() } else { yt.clone() };
    let matrices_equal = sign != 0 && conj == u.mul(&mg.unipotent(&beta, &param)?);
    Ok(CommutationReport { alpha0: *alpha0, coordinate, y, t: t.clone(), shift, sign, matrices_equal })
}

/// `n(x) u_{α_ℓ}(t) n(x)⁻¹` moves the last `χ` coordinate from `δt` to
/// `t(δ + c)`, with `c` the corner entry of `n(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaEllReport {
    pub t: Scalar,
    pub corner: Scalar,
    pub chi_last: Scalar,
    pub formula_holds: bool,
    /// `δ + c = 0`: the conjugate lies in the kernel of `χ`.
    pub on_quadric: bool,
}

pub fn verify_alpha_ell_conjugate(mg: &MatGroup, b: &BesselDatum, x: &[Scalar], t: &Scalar) -> Result<AlphaEllReport> {
    let n = mg.n_of_x(x, b)?;
    let u = mg.unipotent(&alpha(b.ell()), t)?;
    let conj = n.mul(&u).mul(&n.inverse().expect("unipotent"));
    let chi_last = mg.chi_coords(&conj, b)?.pop().expect("nonempty");
    let corner = n.at(b.ell() + 1, mg.group().r0() - b.ell()).clone();
    let delta = Scalar::from_i64(mg.ring(), b.delta());
    let sum = &delta + &corner;
    Ok(AlphaEllReport {
        t: t.clone(),
        formula_holds: chi_last == &sum * t,
        on_quadric: sum.is_zero(),
        corner,
        chi_last,
    })
}

/// Whether `perm_rep(w0)⁻¹ n(x) perm_rep(w0)` lies in `P`.
pub fn verify_w0_normalizes(mg: &MatGroup, config: &Config, x: &[Scalar]) -> Result<bool> {
    let w = mg.perm_rep(&w0_maximal(&config.levi));
    let n = mg.n_of_x(x, &config.bessel)?;
    let m = w.inverse().expect("permutation").mul(&n).mul(&w);
    Ok(mg.in_parabolic(&m, &config.levi))
}

/// Conjugating a root subgroup by a Weyl representative lands in the root
/// subgroup of the image root, with the parameter multiplied by `±1`
/// (orthogonal) or sent to `±t` or `±t̄` (unitary).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    pub w: SignedPerm,
    pub alpha: Root,
    pub image: Root,
    pub twist: String,
}

pub fn verify_conjugation(mg: &MatGroup, w: &SignedPerm, alpha: &Root, t: &Scalar) -> Result<ConjugationReport> {
    let pw = mg.perm_rep(w);
    let lhs = pw.mul(&mg.unipotent(alpha, t)?).mul(&pw.inverse().expect("permutation"));
    let image = act(w, alpha);
    for (name, cand) in [("+t", t.clone()), ("-t", -t.clone()), ("+conj", t.conj()), ("-conj", -t.conj())] {
        if let Ok(rhs) = mg.unipotent(&image, &cand) {
            if rhs == lhs {
                return Ok(ConjugationReport { w: w.clone(), alpha: *alpha, image, twist: name.into() });
            }
        }
    }
    Err(Error::NotFound(format!("conjugate of u_{alpha}({t}) by {w} is not a root element of {image}")))
}

/// Totals from seeded random trials of every matrix identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatCheckSummary {
    pub group: GroupDatum,
    pub ring: Ring,
    pub trials: usize,
    pub membership_failures: usize,
    pub homomorphism_failures: usize,
    pub conjugation_failures: usize,
    pub commutation_failures: usize,
    /// Signs seen in the commutation shift, as a sorted list.
    pub commutation_signs: Vec<i8>,
    pub w0_failures: usize,
    pub alpha_ell_failures: usize,
    pub chi_additivity_failures: usize,
    pub failures: Vec<String>,
}

impl MatCheckSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.commutation_signs.len() <= 1
    }
}

fn random_root_parameter(mg: &MatGroup, root: &Root, rng: &mut ChaCha8Rng) -> Scalar {
    if matches!(root.shape, RootShape::Long(_)) {
        // 2e_i needs t̄ = -t: multiples of γ.
        let g = mg.ring().gamma().expect("unitary ring");
        let base = mg.ring().random(rng);
        let real = &(&base + &base.conj()) * &Scalar::from_ratio(mg.ring(), 1, 2).unwrap();
        &real * &g
    } else {
        mg.ring().random(rng)
    }
}

/// `u(t1) u(t2) = u(t1 + t2)`, except that short roots of odd unitary groups
/// give Heisenberg root groups: there the defect must lie in the `2e_i` group.
fn additive_up_to_center(mg: &MatGroup, root: &Root, u1: &ExactMatrix, t1: &Scalar, t2: &Scalar) -> Result<bool> {
    let prod = u1.mul(&mg.unipotent(root, t2)?);
    let sum = mg.unipotent(root, &(t1 + t2))?;
    if prod == sum {
        return Ok(true);
    }
    let RootShape::Short(i) = root.shape else { return Ok(false) };
    if !mg.group().kind().is_unitary() {
        return Ok(false);
    }
    let defect = prod.mul(&sum.inverse().expect("unipotent"));
    let g = mg.group();
    let (a, b) = if root.negative { (g.prime(i), i) } else { (i, g.prime(i)) };
    let long = if root.negative { Root::long(i).neg() } else { Root::long(i) };
    Ok(mg.unipotent(&long, defect.at(a, b)).map(|m| m == defect).unwrap_or(false))
}

/// Run every matrix identity on `trials` seeded samples for each valid
/// configuration of the group.
pub fn run_matchecks(group: GroupDatum, base: Ring, trials: usize, seed: u64) -> Result<MatCheckSummary> {
    let mg = MatGroup::over(group, base);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = MatCheckSummary {
        group,
        ring: mg.ring(),
        trials,
        membership_failures: 0,
        homomorphism_failures: 0,
        conjugation_failures: 0,
        commutation_failures: 0,
        commutation_signs: Vec::new(),
        w0_failures: 0,
        alpha_ell_failures: 0,
        chi_additivity_failures: 0,
        failures: Vec::new(),
    };
    let roots: Vec<Root> = positive_roots(group).into_iter().flat_map(|a| [a, a.neg()]).collect();
    let weyl = enumerate_weyl(group, DEFAULT_CAP)?;
    let configs = crate::datum::configs_for(group);
    let note = |s: &mut MatCheckSummary, what: String| {
        if s.failures.len() < 20 {
            s.failures.push(what);
        }
    };
    use rand::Rng;
    for trial in 0..trials {
        let root = roots[rng.gen_range(0..roots.len())];
        let t1 = random_root_parameter(&mg, &root, &mut rng);
        let t2 = random_root_parameter(&mg, &root, &mut rng);
        let u1 = mg.unipotent(&root, &t1)?;
        if !mg.is_member(&u1) {
            s.membership_failures += 1;
            note(&mut s, format!("trial {trial}: u_{root}({t1}) not in the group"));
        }
        if !additive_up_to_center(&mg, &root, &u1, &t1, &t2)? {
            s.homomorphism_failures += 1;
            note(&mut s, format!("trial {trial}: u_{root} is not additive"));
        }
        let w = &weyl[rng.gen_range(0..weyl.len())];
        if !mg.is_member(&mg.perm_rep(w)) {
            s.membership_failures += 1;
            note(&mut s, format!("trial {trial}: perm_rep({w}) not in the group"));
        }
        if let Err(e) = verify_conjugation(&mg, w, &root, &t1) {
            s.conjugation_failures += 1;
            note(&mut s, format!("trial {trial}: {e}"));
        }
        let config = &configs[rng.gen_range(0..configs.len())];
        let b = &config.bessel;
        let sl = b.s().max(0) as usize;
        let x: Vec<Scalar> = (0..sl).map(|_| mg.ring().random(&mut rng)).collect();
        let n = mg.n_of_x(&x, b)?;
        if !mg.is_member(&n) || n.at(b.ell() + 1, group.r0() - b.ell()) != &mg.corner_entry(&x) {
            s.membership_failures += 1;
            note(&mut s, format!("trial {trial}: n(x) fails membership or the corner formula"));
        }
        if !verify_w0_normalizes(&mg, config, &x)? {
            s.w0_failures += 1;
            note(&mut s, format!("trial {trial}: w0 does not normalize n(x) into P"));
        }
        let t = mg.ring().random(&mut rng);
        if sl > 0 {
            for alpha0 in shift_roots(b) {
                let rep = verify_commutation(&mg, b, &x, &alpha0, &t)?;
                if rep.sign == 0 && !rep.shift.is_zero() {
                    s.commutation_failures += 1;
                    note(&mut s, format!("trial {trial}: shift {} is not ±y·t for {alpha0}", rep.shift));
                } else if rep.sign != 0 && !rep.y.is_zero() && !rep.t.is_zero() {
                    if !s.commutation_signs.contains(&rep.sign) {
                        s.commutation_signs.push(rep.sign);
                        s.commutation_signs.sort_unstable();
                    }
                    if !rep.matrices_equal {
                        s.commutation_failures += 1;
                        note(&mut s, format!("trial {trial}: conjugate of u_{alpha0} is not u_alpha0 · u_beta"));
                    }
                }
            }
            let rep = verify_alpha_ell_conjugate(&mg, b, &x, &t)?;
            if !rep.formula_holds {
                s.alpha_ell_failures += 1;
                note(&mut s, format!("trial {trial}: alpha_ell conjugate has chi {}", rep.chi_last));
            }
        }
        // Additivity of χ on two random elements of U_ℓ.
        let ell_roots: Vec<Root> = positive_roots(group)
            .into_iter()
            .filter(|a| a.terms().first().map(|p| p.0 <= b.ell()).unwrap_or(false))
            .collect();
        let pick = |rng: &mut ChaCha8Rng| -> Result<ExactMatrix> {
            let mut u = mg.identity();
            for _ in 0..3 {
                let a = ell_roots[rng.gen_range(0..ell_roots.len())];
                let t = random_root_parameter(&mg, &a, rng);
                u = u.mul(&mg.unipotent(&a, &t)?);
            }
            Ok(u)
        };
        let (u, v) = (pick(&mut rng)?, pick(&mut rng)?);
        let (cu, cv, cuv) = (mg.chi_coords(&u, b)?, mg.chi_coords(&v, b)?, mg.chi_coords(&u.mul(&v), b)?);
        if cu.iter().zip(&cv).map(|(a, b)| a + b).collect::<Vec<_>>() != cuv {
            s.chi_additivity_failures += 1;
            note(&mut s, format!("trial {trial}: chi is not additive"));
        }
    }
    if s.commutation_signs.len() > 1 {
        note(&mut s, "commutation shift sign is not consistent".into());
    }
    Ok(s)
}
