//! Central charges `Z_m(v) = <exp(K/2 + (1/4 + im) h + B), v>`, walls,
//! destabilizer scans over the twisted Picard lattice and the phase
//! bookkeeping for the catalogue `E0[1]`, `J`, `E1`.
//!
//! Everything here works at the level of charges. Nothing asserts that a
//! class is realized by an actual subobject.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntVec;
use crate::lattice::{Gram, Lattice, Signature};
use crate::mukai::{mukai_pairing, MukaiVector};
use crate::scalar::{int, phase_cmp, rat, ComplexQE, Phase, QuadExt, Rational};
use crate::scenario::{slope_threshold, vector_e, vector_j, Scenario};

/// Label attached to every charge-level stability verdict.
pub const SURROGATE_NOTE: &str =
    "numeric surrogate: phases of charges only, no categorical subobjects are constructed";

/// Scenario together with the real shift `D_R = K/2 + B + h/4`.
#[derive(Clone, Debug)]
pub struct ChargeParams {
    sc: Scenario,
    d_r: Vec<Rational>,
    d_r_sq: Rational,
    d_r_h: Rational,
}

/// `Z_m(v) = (alpha + r m^2) + i (a m)`, valid because `h.h = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeCoefficients {
    pub alpha: Rational,
    pub rank: Rational,
    pub im_ratio: Rational,
}

impl ChargeParams {
    pub fn new(sc: &Scenario) -> Result<Self> {
        let d_r = sc.real_shift();
        let g = sc.ambient();
        let d_r_sq = g.pair_rational(&d_r, &d_r)?;
        let d_r_h = g.pair_rational(&d_r, &sc.h_rational())?;
        if d_r_h != slope_threshold(sc) {
            return Err(Error::Invariant(String::from("D_R.h != mu")));
        }
        Ok(ChargeParams {
            sc: sc.clone(),
            d_r,
            d_r_sq,
            d_r_h,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.sc
    }

    pub fn real_shift(&self) -> &[Rational] {
        &self.d_r
    }

    /// `D_R . h`, equal to the slope threshold `mu`.
    pub fn threshold(&self) -> &Rational {
        &self.d_r_h
    }

    pub fn coefficients(&self, v: &MukaiVector) -> Result<ChargeCoefficients> {
        let g = self.sc.ambient();
        let dc = g.pair_rational(&self.d_r, &v.c)?;
        let ch = g.pair_rational(&v.c, &self.sc.h_rational())?;
        Ok(ChargeCoefficients {
            alpha: dc - &v.s - &v.r * &self.d_r_sq / int(2),
            rank: v.r.clone(),
            im_ratio: ch - &v.r * &self.d_r_h,
        })
    }
}

fn check_parameter(m: &QuadExt) -> Result<()> {
    if m.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter)
    }
}

fn evaluate(c: &ChargeCoefficients, m: &QuadExt) -> Result<ComplexQE> {
    let re = QuadExt::from_rational(c.alpha.clone()).try_add(&m.square().scale(&c.rank))?;
    ComplexQE::new(re, m.scale(&c.im_ratio))
}

/// Exact `Z_m(v)`: `Re = D_R.c - s - (r/2)(D_R^2 - 2m^2)`, `Im = m (c - r D_R).h`.
pub fn central_charge(p: &ChargeParams, m: &QuadExt, v: &MukaiVector) -> Result<ComplexQE> {
    check_parameter(m)?;
    evaluate(&p.coefficients(v)?, m)
}

/// `Im Z_m(v) / m`, an integer on the twisted Picard lattice.
pub fn integral_im_ratio(p: &ChargeParams, v: &MukaiVector, m: &QuadExt) -> Result<BigInt> {
    check_parameter(m)?;
    let a = p.coefficients(v)?.im_ratio;
    if !a.is_integer() {
        return Err(Error::NonIntegral(alloc::format!("Im(Z)/m = {a}")));
    }
    Ok(a.to_integer())
}

/// A maximal interval of `m` free of walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub lower: QuadExt,
    /// `None` for the unbounded chamber.
    pub upper: Option<QuadExt>,
    /// Rational point inside the chamber used to evaluate the ordering.
    pub sample: Rational,
    /// `phase(v)` compared with `phase(w)`; `None` when a charge leaves the
    /// closed upper half plane.
    pub ordering: Option<Ordering>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallReport {
    pub v: MukaiVector,
    pub w: MukaiVector,
    /// Positive roots of the alignment equation, ascending.
    pub roots: Vec<QuadExt>,
    pub chambers: Vec<Chamber>,
}

fn ordering_at(
    p: &ChargeParams,
    v: &MukaiVector,
    w: &MukaiVector,
    m: &QuadExt,
) -> Result<Option<Ordering>> {
    let (zv, zw) = (central_charge(p, m, v)?, central_charge(p, m, w)?);
    match (Phase::new(zv), Phase::new(zw)) {
        (Ok(a), Ok(b)) => Ok(Some(phase_cmp(&a, &b)?)),
        _ => Ok(None),
    }
}

/// Values `m > 0` where `Re Z(v) Im Z(w) = Re Z(w) Im Z(v)`.
///
/// Dividing by `m` leaves `A m^2 + C = 0` with `A = r_v a_w - r_w a_v` and
/// `C = alpha_v a_w - alpha_w a_v`.
pub fn wall_between(p: &ChargeParams, v: &MukaiVector, w: &MukaiVector) -> Result<WallReport> {
    if v.is_proportional(w) {
        return Err(Error::Proportional);
    }
    let (cv, cw) = (p.coefficients(v)?, p.coefficients(w)?);
    let a = &cv.rank * &cw.im_ratio - &cw.rank * &cv.im_ratio;
    let c = &cv.alpha * &cw.im_ratio - &cw.alpha * &cv.im_ratio;
    if a.is_zero() && c.is_zero() {
        return Err(Error::AlignedEverywhere);
    }
    let mut roots = Vec::new();
    let mut q = None;
    if !a.is_zero() {
        let sq = -&c / &a;
        if sq.is_positive() {
            roots.push(QuadExt::sqrt_rational(&sq)?);
            q = Some(sq);
        }
    }
    let mut chambers = Vec::new();
    match (roots.first(), q) {
        (Some(root), Some(q)) => {
            // q/2 < sqrt(q) when q < 1, and sqrt(q) < q + 1 always
            let below = if q >= int(1) { rat(1, 2) } else { &q / int(2) };
            let above = &q + int(1);
            for (lower, upper, sample) in [
                (QuadExt::zero(), Some(root.clone()), below),
                (root.clone(), None, above),
            ] {
                let ordering = ordering_at(p, v, w, &QuadExt::from_rational(sample.clone()))?;
                chambers.push(Chamber {
                    lower,
                    upper,
                    sample,
                    ordering,
                });
            }
        }
        _ => {
            let sample = int(1);
            let ordering = ordering_at(p, v, w, &QuadExt::from_rational(sample.clone()))?;
            chambers.push(Chamber {
                lower: QuadExt::zero(),
                upper: None,
                sample,
                ordering,
            });
        }
    }
    Ok(WallReport {
        v: v.clone(),
        w: w.clone(),
        roots,
        chambers,
    })
}

/// Closed-form real part and its difference from the direct charge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub value: QuadExt,
    /// Direct `Re Z_m(v)` minus `value`.
    pub discrepancy: QuadExt,
}

/// `(1/2r)(<v,v> + 2 r^2 m^2 - F.F)` with `F = c - r(K/2 + t h + B)`.
pub fn re_closed_form_with(
    p: &ChargeParams,
    v: &MukaiVector,
    m: &QuadExt,
    t: &Rational,
) -> Result<ClosedForm> {
    check_parameter(m)?;
    if v.r.is_zero() {
        return Err(Error::ZeroRank);
    }
    let sc = &p.sc;
    let g = sc.ambient();
    let half = rat(1, 2);
    let f: Vec<Rational> =
        v.c.iter()
            .zip(sc.b().vector())
            .zip(sc.k_rational())
            .zip(sc.h_rational())
            .map(|(((c, b), k), h)| c - &v.r * (k * &half + h * t + b))
            .collect();
    let ff = g.pair_rational(&f, &f)?;
    let vv = mukai_pairing(v, v, g)?;
    let two_r = &v.r * int(2);
    let value = QuadExt::from_rational((vv - ff) / &two_r)
        .try_add(&m.square().scale(&(&v.r * &v.r * int(2) / &two_r)))?;
    let direct = central_charge(p, m, v)?;
    let discrepancy = direct.re().try_sub(&value)?;
    Ok(ClosedForm { value, discrepancy })
}

/// Closed form with `F = c - r(K/2 + h/2 + B)`.
pub fn re_closed_form(p: &ChargeParams, v: &MukaiVector, m: &QuadExt) -> Result<ClosedForm> {
    re_closed_form_with(p, v, m, &rat(1, 2))
}

/// `(1/2r)(-2 + 2 r^2 m^2 - F.F)`, the real part of a spherical class.
pub fn spherical_re_bound(r: i64, ff: &Rational, m: &QuadExt) -> Result<QuadExt> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    let r = int(r);
    let two_r = &r * int(2);
    QuadExt::from_rational((int(-2) - ff) / &two_r)
        .try_add(&m.square().scale(&(&r * &r * int(2) / &two_r)))
}

/// Least positive rank occurring in the twisted Picard lattice.
pub fn minimal_rank(p: &ChargeParams) -> Result<BigInt> {
    let pic = p.sc.twisted_picard()?;
    let g = pic
        .basis()
        .iter()
        .fold(BigInt::zero(), |acc, b| acc.gcd(&b[0]));
    if g.is_zero() {
        return Err(Error::ZeroRank);
    }
    Ok(g)
}

/// `1 / r_min`: for `m > 1/r` every spherical class of rank `r >= r_min` with
/// `F.F <= 0` has positive real part.
pub fn epsilon_bound(p: &ChargeParams) -> Result<QuadExt> {
    let g = minimal_rank(p)?;
    Ok(QuadExt::from_rational(Rational::new(BigInt::one(), g)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeIndexReport {
    pub signature: Signature,
    pub h_square: BigInt,
    /// Gram matrix of `h^perp` inside the Picard lattice.
    pub complement: Gram,
    pub complement_negative_definite: bool,
    pub pass: bool,
}

/// Signature `(1, rank-1)`, `h.h > 0` and negative definiteness of `h^perp`.
pub fn hodge_index_check_lattice(pic: &Lattice, h: &IntVec) -> Result<HodgeIndexReport> {
    let signature = pic.gram().signature();
    let h_square = pic.ambient().pair(h, h)?;
    let perp = pic.orthogonal_within(core::slice::from_ref(h))?;
    let complement = perp.gram();
    let cs = complement.signature();
    let complement_negative_definite = cs.positive == 0 && cs.zero == 0;
    let pass = signature.positive == 1
        && signature.zero == 0
        && signature.negative + 1 == pic.rank()
        && h_square.is_positive()
        && complement_negative_definite;
    Ok(HodgeIndexReport {
        signature,
        h_square,
        complement,
        complement_negative_definite,
        pass,
    })
}

pub fn hodge_index_check(sc: &Scenario) -> Result<HodgeIndexReport> {
    hodge_index_check_lattice(sc.pic_s(), sc.h())
}

/// A class surviving every filter of the destabilizer scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    /// Coordinates in the Neron-Severi basis.
    pub coords: Vec<i64>,
    pub vector: MukaiVector,
    pub im_ratio: BigInt,
    pub self_pairing: BigInt,
    pub charge: ComplexQE,
    /// Phase of the candidate compared with the phase of `v`.
    pub ordering: Ordering,
}

/// Enumerates `w = sum x_i g_i` over the Neron-Severi basis `g_i` with
/// `|x_i| <= bound`, keeping those with `<w,w> >= -2`,
/// `0 < Im Z(w)/m < Im Z(v)/m` and phase at least that of `v`.
///
/// Classes with `Im Z(w) = 0` would sit at phase 1 and are not candidates.
#[derive(Clone, Debug)]
pub struct Scanner {
    gens: Vec<MukaiVector>,
    gram: Gram,
    coeffs: Vec<ChargeCoefficients>,
    m: QuadExt,
    v_ratio: BigInt,
    v_phase: Phase,
    bound: i64,
}

impl Scanner {
    pub fn new(p: &ChargeParams, v: &MukaiVector, m: &QuadExt, bound: u32) -> Result<Self> {
        check_parameter(m)?;
        let ns = p.sc.ns_lattice()?;
        let coords = v
            .to_coords()
            .ok_or_else(|| Error::NonIntegral(String::from("v is not an integral Mukai vector")))?;
        if !ns.contains(&coords) {
            return Err(Error::NonIntegral(String::from(
                "v does not lie in Pic(S,B)",
            )));
        }
        let zv = central_charge(p, m, v)?;
        if zv.is_zero() {
            return Err(Error::ZeroCharge);
        }
        let v_phase = Phase::new(zv)?;
        let v_ratio = integral_im_ratio(p, v, m)?;
        let gens = p.sc.ns_generators();
        let gen_coords: Vec<IntVec> = gens
            .iter()
            .map(|g| g.to_coords().expect("integral generators"))
            .collect();
        let gram = p.sc.mukai_gram().congruent(&gen_coords);
        let coeffs = gens
            .iter()
            .map(|g| p.coefficients(g))
            .collect::<Result<_>>()?;
        Ok(Scanner {
            gens,
            gram,
            coeffs,
            m: m.clone(),
            v_ratio,
            v_phase,
            bound: i64::from(bound),
        })
    }

    /// Range of the leading coordinate; slices partition the box.
    pub fn leads(&self) -> core::ops::RangeInclusive<i64> {
        -self.bound..=self.bound
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Survivors with leading coordinate `lead`, sorted by coordinates.
    pub fn scan_slice(&self, lead: i64) -> Result<Vec<Candidate>> {
        let k = self.gens.len();
        let mut out = Vec::new();
        let mut x = alloc::vec![-self.bound; k];
        x[0] = lead;
        loop {
            if let Some(c) = self.test(&x)? {
                out.push(c);
            }
            // odometer over coordinates 1..k
            let mut i = k;
            loop {
                if i == 1 {
                    return Ok(out);
                }
                i -= 1;
                if x[i] < self.bound {
                    x[i] += 1;
                    break;
                }
                x[i] = -self.bound;
            }
        }
    }

    fn combine(&self, x: &[i64], f: impl Fn(&ChargeCoefficients) -> &Rational) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (c, &xi)| acc + f(c) * int(xi))
    }

    fn test(&self, x: &[i64]) -> Result<Option<Candidate>> {
        let a = self.combine(x, |c| &c.im_ratio);
        if !a.is_integer() {
            return Err(Error::NonIntegral(String::from(
                "Im(Z)/m on a Neron-Severi generator",
            )));
        }
        let ratio = a.to_integer();
        if !ratio.is_positive() || ratio >= self.v_ratio {
            return Ok(None);
        }
        let xb: IntVec = x.iter().map(|&xi| BigInt::from(xi)).collect();
        let self_pairing = self.gram.pair(&xb, &xb)?;
        if self_pairing < BigInt::from(-2) {
            return Ok(None);
        }
        let cc = ChargeCoefficients {
            alpha: self.combine(x, |c| &c.alpha),
            rank: self.combine(x, |c| &c.rank),
            im_ratio: a,
        };
        let charge = evaluate(&cc, &self.m)?;
        let phase = Phase::new(charge.clone())?;
        let ordering = phase_cmp(&phase, &self.v_phase)?;
        if ordering == Ordering::Less {
            return Ok(None);
        }
        let vector = self
            .gens
            .iter()
            .zip(x)
            .fold(MukaiVector::zero(self.gens[0].dim()), |acc, (g, &xi)| {
                acc.add(&g.scale(&int(xi)))
            });
        Ok(Some(Candidate {
            coords: x.to_vec(),
            vector,
            im_ratio: ratio,
            self_pairing,
            charge,
            ordering,
        }))
    }
}

/// Sequential scan, sorted by coordinates.
pub fn destabilizer_scan(
    p: &ChargeParams,
    v: &MukaiVector,
    m: &QuadExt,
    coeff_bound: u32,
) -> Result<Vec<Candidate>> {
    let scanner = Scanner::new(p, v, m, coeff_bound)?;
    let mut out = Vec::new();
    for lead in scanner.leads() {
        out.extend(scanner.scan_slice(lead)?);
    }
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `phase(E0[1]) > phase(J) > phase(E1)`.
    Destabilized,
    /// All three phases coincide.
    Wall,
    /// `J` is not destabilized by either catalogue class.
    StableAgainstCatalogue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnReport {
    pub m: QuadExt,
    pub z_e0_shift: ComplexQE,
    pub z_j: ComplexQE,
    pub z_e1: ComplexQE,
    /// `phase(E0[1])` vs `phase(J)`.
    pub e0_shift_vs_j: Ordering,
    /// `phase(J)` vs `phase(E1)`.
    pub j_vs_e1: Ordering,
    pub regime: Regime,
    pub narrative: &'static str,
    pub note: &'static str,
}

/// Phase comparison of `E0[1]`, `J` and `E1` at `m > epsilon`.
pub fn hn_report(p: &ChargeParams, m: &QuadExt) -> Result<HnReport> {
    check_parameter(m)?;
    let eps = epsilon_bound(p)?;
    if m.try_cmp(&eps)? != Ordering::Greater {
        return Err(Error::BelowEpsilon);
    }
    let sc = &p.sc;
    let (e0, e1, j) = (vector_e(0, sc)?, vector_e(1, sc)?, vector_j(sc)?);
    let z_e0_shift = -&central_charge(p, m, &e0)?;
    let z_j = central_charge(p, m, &j)?;
    let z_e1 = central_charge(p, m, &e1)?;
    let ph0 = Phase::new(z_e0_shift.clone())?;
    let phj = Phase::new(z_j.clone())?;
    let ph1 = Phase::new(z_e1.clone())?;
    let e0_shift_vs_j = phase_cmp(&ph0, &phj)?;
    let j_vs_e1 = phase_cmp(&phj, &ph1)?;
    let (regime, narrative) = match (e0_shift_vs_j, j_vs_e1) {
        (Ordering::Equal, Ordering::Equal) => {
            (Regime::Wall, "all phases equal 1/2; JH factors {E1, E0[1]}")
        }
        (Ordering::Greater, _) => (
            Regime::Destabilized,
            "J_l strictly destabilized; HN factors [E0[1], E1] in decreasing phase",
        ),
        _ => (
            Regime::StableAgainstCatalogue,
            "J_l stable against catalogue",
        ),
    };
    Ok(HnReport {
        m: m.clone(),
        z_e0_shift,
        z_j,
        z_e1,
        e0_shift_vs_j,
        j_vs_e1,
        regime,
        narrative,
        note: SURROGATE_NOTE,
    })
}

/// The unique wall between `J` and `E1`.
pub fn wall_m0(p: &ChargeParams) -> Result<QuadExt> {
    let sc = &p.sc;
    let report = wall_between(p, &vector_j(sc)?, &vector_e(1, sc)?)?;
    match report.roots.as_slice() {
        [root] => Ok(root.clone()),
        _ => Err(Error::Invariant(alloc::format!(
            "expected one wall between J and E1, found {}",
            report.roots.len()
        ))),
    }
}

/// Parity of `mu`, which fixes the `epsilon` of the birational reduction.
pub fn mu_mod_2(p: &ChargeParams) -> Option<u8> {
    let mu = p.threshold();
    if !mu.is_integer() {
        return None;
    }
    mu.to_integer().mod_floor(&BigInt::from(2)).to_u8()
}
