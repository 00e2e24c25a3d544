//! Rotated Clebsch-Gordan coefficients and the matrix elements built from them.
//!
//! With `eta` the `Omega_1` spherical function of [`crate::sphfun`]:
//!
//! ```text
//! c^{l1 l2 l}_{m1 m2 m}(x1, x2)      = sum_{m2'} eta^{l2}_{m2 m2'}(x1, x2) <l1 m1 l2 m2'|l m>
//! C^{l1 l2 l' l}_{m' m}(x1, x2)      = sum_{m1 m2} c^{l1 l2 l'}_{m1 m2 m'}(x1, x2) <l1 m1 l2 m2|l m>
//! T^{l1}_{m1}(x1) T^{l2}_{m2}(x2)    = sum_{l m} Tbar^l_m(x1) c^{l1 l2 l}_{m1 m2 m}(x1, x2)
//! ```
//!
//! The matrix-element formulas reduce every sphere integral of `eta` to the
//! closed form [`eta_sphere_integral`].

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpherePoint;
use crate::halfint_algebra::{
    cgc_unchecked, check_projection, i_pow, sign_pow, CNum, HalfInt, Triangle,
};
use crate::integrals::eta_sphere_integral;
use crate::oracle::legendre_on;
use crate::sphfun::eta;
use crate::wigner::c_harmonic;

fn fits(j: HalfInt, m: HalfInt) -> bool {
    m.twice.abs() <= j.twice && (j.twice - m.twice) % 2 == 0
}

/// `c^{l1 l2 l}_{m1 m2 m}(x1, x2)`, the rotated coefficient of the first type.
///
/// A failed triangle condition gives zero.
#[allow(clippy::too_many_arguments)]
pub fn rcgc1(
    l1: HalfInt,
    l2: HalfInt,
    l: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<CNum> {
    check_projection(l1, m1)?;
    check_projection(l2, m2)?;
    check_projection(l, m)?;
    if !Triangle::new(l1, l2, l).couples() {
        return Ok(CNum::new(0.0, 0.0));
    }
    let m2p = m - m1;
    if !fits(l2, m2p) {
        return Ok(CNum::new(0.0, 0.0));
    }
    Ok(eta(l2, m2, m2p, x1, x2)? * cgc_unchecked(l1, m1, l2, m2p, l, m))
}

/// `C^{l1 l2 lp l}_{mp m}(x1, x2)`, the rotated coefficient of the second type.
#[allow(clippy::too_many_arguments)]
pub fn rcgc2(
    l1: HalfInt,
    l2: HalfInt,
    lp: HalfInt,
    l: HalfInt,
    mp: HalfInt,
    m: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<CNum> {
    check_projection(lp, mp)?;
    check_projection(l, m)?;
    if !Triangle::new(l1, l2, l).couples() || !Triangle::new(l1, l2, lp).couples() {
        return Ok(CNum::new(0.0, 0.0));
    }
    let mut total = CNum::new(0.0, 0.0);
    for m1 in l1.projections() {
        let m2 = m - m1;
        if !fits(l2, m2) {
            continue;
        }
        let c = cgc_unchecked(l1, m1, l2, m2, l, m);
        if c != 0.0 {
            total += rcgc1(l1, l2, lp, m1, m2, mp, x1, x2)? * c;
        }
    }
    Ok(total)
}

/// Ranks and projections of one first-type coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcgcIndices {
    /// First rank.
    pub l1: HalfInt,
    /// Second rank (the one carried by `eta`).
    pub l2: HalfInt,
    /// Coupled rank.
    pub l: HalfInt,
    /// Projection of `l1`.
    pub m1: HalfInt,
    /// Projection of `l2`.
    pub m2: HalfInt,
    /// Projection of `l`.
    pub m: HalfInt,
}

impl RcgcIndices {
    /// Evaluates the coefficient at `(x1, x2)`.
    pub fn eval(&self, x1: SpherePoint, x2: SpherePoint) -> Result<CNum> {
        rcgc1(self.l1, self.l2, self.l, self.m1, self.m2, self.m, x1, x2)
    }
}

/// Per-rank terms of the product of two first-type coefficients,
///
/// ```text
/// c c_bar = sum_{L2} sum_{m2' mb2'} eta^{L2}_{M2 M2'} <l1 m1 l2 m2'|l m> <lb1 mb1 lb2 mb2'|lb mb>
///           <l2 m2 lb2 mb2|L2 M2> <l2 m2' lb2 mb2'|L2 M2'>
/// ```
///
/// with `M2 = m2 + mb2` and `M2' = m2' + mb2'`. The values add up to the product.
pub fn rcgc1_product_reduce(
    a: &RcgcIndices,
    b: &RcgcIndices,
    x1: SpherePoint,
    x2: SpherePoint,
) -> Result<BTreeMap<HalfInt, CNum>> {
    for ix in [a, b] {
        check_projection(ix.l1, ix.m1)?;
        check_projection(ix.l2, ix.m2)?;
        check_projection(ix.l, ix.m)?;
    }
    let mut terms = BTreeMap::new();
    let big_m = a.m2 + b.m2;
    let (m2p, mb2p) = (a.m - a.m1, b.m - b.m1);
    let couples =
        Triangle::new(a.l1, a.l2, a.l).couples() && Triangle::new(b.l1, b.l2, b.l).couples();
    for rank in Triangle::coupled_ranks(a.l2, b.l2) {
        let mut term = CNum::new(0.0, 0.0);
        if couples && fits(a.l2, m2p) && fits(b.l2, mb2p) && fits(rank, big_m) {
            let big_mp = m2p + mb2p;
            if fits(rank, big_mp) {
                let coeff = cgc_unchecked(a.l1, a.m1, a.l2, m2p, a.l, a.m)
                    * cgc_unchecked(b.l1, b.m1, b.l2, mb2p, b.l, b.m)
                    * cgc_unchecked(a.l2, a.m2, b.l2, b.m2, rank, big_m)
                    * cgc_unchecked(a.l2, m2p, b.l2, mb2p, rank, big_mp);
                if coeff != 0.0 {
                    term = eta(rank, big_m, big_mp, x1, x2)? * coeff;
                }
            }
        }
        terms.insert(rank, term);
    }
    Ok(terms)
}

/// `[l||T^k||lb]` for spherical-harmonic basis functions:
/// `i^{lb-l} sqrt((2lb+1)/(2l+1)) T^k_0(0) <lb 0 k 0|l 0>`.
///
/// `t_at_origin` holds `T^k_{q'}` at the north pole for `q' = -k..k`.
pub fn reduced_matrix_element(
    l: HalfInt,
    k: HalfInt,
    lbar: HalfInt,
    t_at_origin: &[CNum],
) -> Result<CNum> {
    for (name, v) in [("l", l), ("k", k), ("lbar", lbar)] {
        if !v.is_integer() || v.twice < 0 {
            return Err(Error::domain(format!(
                "{name} = {v} must be a nonnegative integer"
            )));
        }
    }
    if t_at_origin.len() != k.multiplicity() {
        return Err(Error::domain(format!(
            "T^{k} needs {} components, got {}",
            k.multiplicity(),
            t_at_origin.len()
        )));
    }
    let t0 = t_at_origin[k.index_of(HalfInt::ZERO)];
    let z = HalfInt::ZERO;
    let ratio = ((f64::from(lbar.twice) + 1.0) / (f64::from(l.twice) + 1.0)).sqrt();
    Ok(i_pow(lbar - l) * t0 * (ratio * cgc_unchecked(lbar, z, k, z, l, z)))
}

/// `[l||T^k||lb] = 4 pi / (2l+1) sum_{m' q' mb'} conj(psi^l_{m'}) T^k_{q'} psi^lb_{mb'} <lb mb' k q'|l m'>`,
/// all factors taken at one point `x'`.
pub fn reduced_matrix_element_by_orthogonality(
    l: HalfInt,
    k: HalfInt,
    lbar: HalfInt,
    psi_bra: &[CNum],
    t: &[CNum],
    psi_ket: &[CNum],
) -> Result<CNum> {
    check_lengths(&[(l, psi_bra), (k, t), (lbar, psi_ket)])?;
    let mut total = CNum::new(0.0, 0.0);
    for mp in l.projections() {
        for qp in k.projections() {
            let mbp = mp - qp;
            if !fits(lbar, mbp) {
                continue;
            }
            let c = cgc_unchecked(lbar, mbp, k, qp, l, mp);
            if c != 0.0 {
                total += psi_bra[l.index_of(mp)].conj()
                    * t[k.index_of(qp)]
                    * psi_ket[lbar.index_of(mbp)]
                    * c;
            }
        }
    }
    Ok(total * (4.0 * PI / (f64::from(l.twice) + 1.0)))
}

fn check_lengths(pairs: &[(HalfInt, &[CNum])]) -> Result<()> {
    for &(rank, v) in pairs {
        if v.len() != rank.multiplicity() {
            return Err(Error::domain(format!(
                "rank {rank} needs {} components, got {}",
                rank.multiplicity(),
                v.len()
            )));
        }
    }
    Ok(())
}

/// `<l m|T^k_q|lb mb>` assembled at one point `x'`:
///
/// ```text
/// sum_{m' q' mb'} sum_{Lb L} (-1)^{m-m'} conj(psi_{m'}) T_{q'} psi_{mb'} Stilde^L_{0 M'}(x')
///   <l -m k q|Lb -mb> <l -m' k q'|Lb Mb'> <Lb -mb lb mb|L 0> <Lb Mb' lb mb'|L M'>
/// ```
///
/// with `Mb' = q' - m'` and `M' = Mb' + mb'`. `Stilde` is the sphere integral of
/// `eta` ([`eta_sphere_integral`]). The value does not depend on `x'`.
#[allow(clippy::too_many_arguments)]
pub fn matrix_element_at_point(
    l: HalfInt,
    m: HalfInt,
    k: HalfInt,
    q: HalfInt,
    lbar: HalfInt,
    mbar: HalfInt,
    psi_bra: &[CNum],
    t: &[CNum],
    psi_ket: &[CNum],
    xp: SpherePoint,
) -> Result<CNum> {
    check_projection(l, m)?;
    check_projection(k, q)?;
    check_projection(lbar, mbar)?;
    check_lengths(&[(l, psi_bra), (k, t), (lbar, psi_ket)])?;
    let mut stilde: HashMap<(i32, i32), CNum> = HashMap::new();
    let mut total = CNum::new(0.0, 0.0);
    for mp in l.projections() {
        for qp in k.projections() {
            let mb_p = qp - mp;
            for mbp in lbar.projections() {
                let big_mp = mb_p + mbp;
                let weight = psi_bra[l.index_of(mp)].conj()
                    * t[k.index_of(qp)]
                    * psi_ket[lbar.index_of(mbp)];
                if weight == CNum::new(0.0, 0.0) {
                    continue;
                }
                let phase = sign_pow(i64::from((m.twice - mp.twice) / 2));
                for lb in Triangle::coupled_ranks(l, k) {
                    if !fits(lb, mbar) || !fits(lb, mb_p) {
                        continue;
                    }
                    let c12 = cgc_unchecked(l, -m, k, q, lb, -mbar)
                        * cgc_unchecked(l, -mp, k, qp, lb, mb_p);
                    if c12 == 0.0 {
                        continue;
                    }
                    for big_l in Triangle::coupled_ranks(lb, lbar) {
                        if !fits(big_l, big_mp) {
                            continue;
                        }
                        let c34 = cgc_unchecked(lb, -mbar, lbar, mbar, big_l, HalfInt::ZERO)
                            * cgc_unchecked(lb, mb_p, lbar, mbp, big_l, big_mp);
                        if c34 == 0.0 {
                            continue;
                        }
                        let s = match stilde.get(&(big_l.twice, big_mp.twice)) {
                            Some(v) => *v,
                            None => {
                                let v = eta_sphere_integral(big_l, HalfInt::ZERO, big_mp, xp)?;
                                stilde.insert((big_l.twice, big_mp.twice), v);
                                v
                            }
                        };
                        total += weight * s * (phase * c12 * c34);
                    }
                }
            }
        }
    }
    Ok(total)
}

/// The `mu`-indexed weights `g_mu` of a two-electron function and the radii of the multipole expansion.
///
/// The weights stand for `g^l_mu(r1, r2, theta12)` with `r1`, `r2` and
/// `theta12` already fixed by the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialWeight {
    /// Rank `l` the weights belong to.
    pub l: HalfInt,
    /// `g_mu` for `mu = -l..l`.
    pub values: Vec<CNum>,
    /// `min(r1, r2)`.
    pub r_less: f64,
    /// `max(r1, r2)`.
    pub r_greater: f64,
}

impl RadialWeight {
    /// Weights from a function of `mu`, with `r< = r> = 1`.
    pub fn from_fn(l: HalfInt, g: impl Fn(HalfInt) -> CNum) -> Self {
        RadialWeight {
            l,
            values: l.projections().map(g).collect(),
            r_less: 1.0,
            r_greater: 1.0,
        }
    }

    /// `g_mu = delta_{mu 0}`.
    pub fn delta0(l: HalfInt) -> Self {
        Self::from_fn(l, |mu| {
            CNum::new(if mu.twice == 0 { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// `g_mu = 1` for every `mu`.
    pub fn ones(l: HalfInt) -> Self {
        Self::from_fn(l, |_| CNum::new(1.0, 0.0))
    }

    /// Replaces the radii.
    pub fn with_radii(mut self, r_less: f64, r_greater: f64) -> Self {
        self.r_less = r_less;
        self.r_greater = r_greater;
        self
    }

    /// `g_mu`, zero outside `-l..l`.
    pub fn get(&self, mu: HalfInt) -> CNum {
        if fits(self.l, mu) {
            self.values[self.l.index_of(mu)]
        } else {
            CNum::new(0.0, 0.0)
        }
    }

    /// The multipole factor `r<^k / r>^{k+1}`.
    pub fn rho(&self, k: u32) -> f64 {
        self.r_less.powi(k as i32) / self.r_greater.powi(k as i32 + 1)
    }

    fn validate(&self) -> Result<()> {
        if self.values.len() != self.l.multiplicity() {
            return Err(Error::domain(format!(
                "rank {} needs {} weights, got {}",
                self.l,
                self.l.multiplicity(),
                self.values.len()
            )));
        }
        if !(self.r_less > 0.0 && self.r_greater >= self.r_less && self.r_greater.is_finite()) {
            return Err(Error::domain(
                "radii must satisfy 0 < r< <= r> with r> finite",
            ));
        }
        if self
            .values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::domain("non-finite radial weight"));
        }
        Ok(())
    }
}

/// Gauss-Legendre order of the one-dimensional `theta` integrals.
const J_NODES: usize = 32;

/// Memo tables shared by one matrix-element evaluation.
struct Tables {
    cgc: HashMap<[i32; 6], f64>,
    j: HashMap<(i32, i32, i32), CNum>,
}

impl Tables {
    fn new() -> Self {
        Tables {
            cgc: HashMap::new(),
            j: HashMap::new(),
        }
    }

    fn cg(&mut self, j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
        if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j || m1 + m2 != m {
            return 0.0;
        }
        *self.cgc.entry([j1, m1, j2, m2, j, m]).or_insert_with(|| {
            let h = HalfInt::int;
            cgc_unchecked(h(j1), h(m1), h(j2), h(m2), h(j), h(m))
        })
    }

    /// `int_{S^2} C^K_Q(x) Stilde^L_{0Q}(x) dx`; the `phi` integral is `2 pi`.
    fn j(&mut self, big_k: i32, big_q: i32, big_l: i32) -> Result<CNum> {
        if let Some(v) = self.j.get(&(big_k, big_q, big_l)) {
            return Ok(*v);
        }
        let mut acc = CNum::new(0.0, 0.0);
        for (t, w) in legendre_on(0.0, PI, J_NODES) {
            let x = SpherePoint { theta: t, phi: 0.0 };
            let c = c_harmonic(HalfInt::int(big_k), HalfInt::int(big_q), x)?;
            let s =
                eta_sphere_integral(HalfInt::int(big_l), HalfInt::ZERO, HalfInt::int(big_q), x)?;
            acc += c * s * (w * t.sin());
        }
        let v = acc * (2.0 * PI);
        self.j.insert((big_k, big_q, big_l), v);
        Ok(v)
    }
}

fn coulomb_inputs(
    l: HalfInt,
    m: HalfInt,
    lp: HalfInt,
    mp: HalfInt,
    g_bra: &RadialWeight,
    g_ket: &RadialWeight,
) -> Result<(i32, i32, i32, i32)> {
    check_projection(l, m)?;
    check_projection(lp, mp)?;
    let (Some(li), Some(mi), Some(lpi), Some(mpi)) =
        (l.to_int(), m.to_int(), lp.to_int(), mp.to_int())
    else {
        return Err(Error::domain(
            "the two-electron element needs integer l, m, l', m'",
        ));
    };
    g_bra.validate()?;
    g_ket.validate()?;
    if g_bra.l != l || g_ket.l != lp {
        return Err(Error::domain(
            "radial weights must belong to the bra and ket ranks",
        ));
    }
    if g_bra.r_less != g_ket.r_less || g_bra.r_greater != g_ket.r_greater {
        return Err(Error::domain(
            "bra and ket radial weights disagree on r< and r>",
        ));
    }
    Ok((li, mi, lpi, mpi))
}

/// Angular part of `<Psi^l_m | 1/r12 | Psi^{l'}_{m'}>` for `Psi^l_m = sum_mu g_mu eta^l_{m mu}(x1, x2)`.
///
/// The interaction is `sum_{k <= k_max} (r<^k / r>^{k+1}) P_k(cos w12)`. With
/// `q = m - m'` and `mu' = mu - q` the element is
///
/// ```text
/// sum_mu conj(g_mu) g'_{mu'} sum_k rho_k sum_{q'} sum_K (-1)^{m-mu} (-1)^{k+q} i^{2k-K}
///   <k 0 k 0|K 0> <k -q k q'|K Q> sum_{Lb L} <l -m k q|Lb -m'> <l -mu k q'|Lb q'-mu>
///   <Lb -m' l' m'|L 0> <Lb q'-mu l' mu'|L Q>  J(K, Q, L),
/// J(K, Q, L) = int_{S^2} C^K_Q(x) Stilde^L_{0Q}(x) dx,      Q = q' - q,
/// ```
///
/// so the four-dimensional integral reduces to one `theta` quadrature per
/// `(K, Q, L)`. `k_max` defaults to `l + l'` in the CLI.
pub fn coulomb_2e_angular(
    l: HalfInt,
    m: HalfInt,
    lp: HalfInt,
    mp: HalfInt,
    g_bra: &RadialWeight,
    g_ket: &RadialWeight,
    k_max: i32,
) -> Result<CNum> {
    if k_max < 0 {
        return Err(Error::domain(format!(
            "k_max = {k_max} must be nonnegative"
        )));
    }
    let (l, m, lp, mp_i) = coulomb_inputs(l, m, lp, mp, g_bra, g_ket)?;
    let mut tab = Tables::new();
    let q = m - mp_i;
    let mut total = CNum::new(0.0, 0.0);
    for mu in -l..=l {
        let mup = mu - q;
        if mup.abs() > lp {
            continue;
        }
        let g = g_bra.get(HalfInt::int(mu)).conj() * g_ket.get(HalfInt::int(mup));
        if g == CNum::new(0.0, 0.0) {
            continue;
        }
        for k in q.abs()..=k_max {
            let rho = g_bra.rho(k as u32);
            for qp in -k..=k {
                let big_q = qp - q;
                for big_k in (0..=2 * k).step_by(2) {
                    if big_q.abs() > big_k {
                        continue;
                    }
                    let c0 = tab.cg(k, 0, k, 0, big_k, 0);
                    let ck = tab.cg(k, -q, k, qp, big_k, big_q);
                    if c0 * ck == 0.0 {
                        continue;
                    }
                    let phase = sign_pow(i64::from(m - mu + k + q))
                        * i_pow(HalfInt::int(2 * k - big_k))
                        * (c0 * ck);
                    for lb in (l - k).abs()..=l + k {
                        let c1 =
                            tab.cg(l, -m, k, q, lb, -mp_i) * tab.cg(l, -mu, k, qp, lb, qp - mu);
                        if c1 == 0.0 {
                            continue;
                        }
                        for big_l in (lb - lp).abs()..=lb + lp {
                            if big_q.abs() > big_l {
                                continue;
                            }
                            let c2 = tab.cg(lb, -mp_i, lp, mp_i, big_l, 0)
                                * tab.cg(lb, qp - mu, lp, mup, big_l, big_q);
                            if c2 == 0.0 {
                                continue;
                            }
                            total += g * phase * (rho * c1 * c2) * tab.j(big_k, big_q, big_l)?;
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// The two-electron element assembled with the alternative literal contraction:
/// prefactor `(-1)^{m-m'} (-1)^mu conj(g_mu) g'_{mu+m-m'}`, even `Q` only,
/// `i^{-K}`, and a literal projection pattern of the five coupling
/// coefficients, with `S` replaced by its sphere-integral value.
///
/// It does not agree with [`coulomb_2e_angular`] or the quadrature reference in
/// general and is kept for comparison.
pub fn coulomb_2e_angular_as_printed(
    l: HalfInt,
    m: HalfInt,
    lp: HalfInt,
    mp: HalfInt,
    g_bra: &RadialWeight,
    g_ket: &RadialWeight,
    k_max: i32,
) -> Result<CNum> {
    if k_max < 0 {
        return Err(Error::domain(format!(
            "k_max = {k_max} must be nonnegative"
        )));
    }
    let (l, m, lp, mp_i) = coulomb_inputs(l, m, lp, mp, g_bra, g_ket)?;
    let mut tab = Tables::new();
    let mut total = CNum::new(0.0, 0.0);
    for mu in -l..=l {
        let mup = mu + m - mp_i;
        if mup.abs() > lp {
            continue;
        }
        let g = g_bra.get(HalfInt::int(mu)).conj()
            * g_ket.get(HalfInt::int(mup))
            * sign_pow(i64::from(m - mp_i + mu));
        if g == CNum::new(0.0, 0.0) {
            continue;
        }
        for k in 0..=k_max {
            let rho = g_bra.rho(k as u32);
            for big_k in (0..=2 * k).step_by(2) {
                let c0 = tab.cg(k, 0, k, 0, big_k, 0);
                if c0 == 0.0 {
                    continue;
                }
                for big_q in (-big_k..=big_k).filter(|x| x % 2 == 0) {
                    let s = big_q + mp_i - m;
                    for lbar in 0..=l + lp + k {
                        if big_q.abs() > lbar {
                            continue;
                        }
                        for big_l in (l - k).abs()..=l + k {
                            let c = tab.cg(k, m - mp_i, k, s, big_k, big_q)
                                * tab.cg(l, -m, k, m - mp_i, big_l, -mp_i)
                                * tab.cg(big_l, -mp_i, lp, mp_i, lbar, 0)
                                * tab.cg(l, -mu, k, s, big_l, s - mu)
                                * tab.cg(big_l, s - mu, lp, m - mp_i + mu, lbar, big_q);
                            if c == 0.0 {
                                continue;
                            }
                            total += g
                                * i_pow(HalfInt::int(-big_k))
                                * (rho * c0 * c)
                                * tab.j(big_k, big_q, lbar)?;
                        }
                    }
                }
            }
        }
    }
    Ok(total)
}

/// The coupled product `Tbar^l_m(x1) = i^{l1+l2-l} C^l_m(x1) <l1 0 l2 0|l 0>` for `T = C`.
pub fn coupled_c(
    l1: HalfInt,
    l2: HalfInt,
    l: HalfInt,
    m: HalfInt,
    x1: SpherePoint,
) -> Result<CNum> {
    let z = HalfInt::ZERO;
    Ok(i_pow(l1 + l2 - l) * c_harmonic(l, m, x1)? * cgc_unchecked(l1, z, l2, z, l, z))
}
