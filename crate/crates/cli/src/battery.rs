//! The verification battery run by `k3twist verify`.

use std::cmp::Ordering;

use k3twist_core::lattice::{represents, Gram, Representation};
use k3twist_core::mukai::{mukai_pairing, MukaiVector};
use k3twist_core::scalar::{int, rat, ComplexQE, QuadExt, Rational};
use k3twist_core::scenario::{chi_p2, slope, slope_threshold, vector_e, vector_j, TwistProfile};
use k3twist_core::stability::{
    central_charge, epsilon_bound, hn_report, hodge_index_check, mu_mod_2, re_closed_form,
    re_closed_form_with, spherical_re_bound, wall_between, Candidate, ChargeParams, Regime,
};
use k3twist_core::{Error, Scenario};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::parallel::parallel_scan;
use crate::report::{Check, Report, Status};

#[derive(Clone, Debug)]
pub struct BatteryOptions {
    pub max_coeff: u32,
    pub jobs: usize,
    /// Seed for the randomized choices of `K`.
    pub seed: u64,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions {
            max_coeff: 8,
            jobs: 1,
            seed: 0x4b33,
        }
    }
}

type Outcome = Result<(Status, String), Error>;

const LOC_WALL: &str = "wall of J_l against E1";
const LOC_CHARGE: &str = "central charge of J_l and E1";
const LOC_NS: &str = "generators of the twisted Picard lattice";
const LOC_SPHERICAL: &str = "sphericity of the Clifford bundles";
const LOC_TRIANGLE: &str = "triangle E0[1] -> J_l -> E1";
const LOC_CHI: &str = "Clifford sheaves on the plane";
const LOC_SLOPE: &str = "slope inequalities for E0, E1";
const LOC_BIRGEN: &str = "Picard lattice of the moduli space, twist parameter epsilon";
const LOC_BRAUER: &str = "sequence T(F(Y)) -> T(S) -> Z/2";
const LOC_HN: &str = "HN and JH filtrations of J_l and K_l";
const LOC_SCAN: &str = "destabilizing sequences for J_l";
const LOC_EPS: &str = "local finiteness for m > epsilon";
const LOC_LATTICE: &str = "K3 lattice U^3 + E8(-1)^2";
const LOC_CLOSED: &str = "closed form of Re Z_m for spherical objects";

struct Battery<'a> {
    sc: &'a Scenario,
    p: Option<ChargeParams>,
    twisted: bool,
    opts: &'a BatteryOptions,
    checks: Vec<Check>,
}

fn m0() -> QuadExt {
    QuadExt::new(Rational::zero(), rat(1, 4), 5).expect("sqrt(5)/4")
}

fn q(x: Rational) -> QuadExt {
    QuadExt::from_rational(x)
}

fn sample_points() -> [(&'static str, QuadExt); 3] {
    [("13/25", q(rat(13, 25))), ("1", q(int(1))), ("m0", m0())]
}

fn describe_ordering(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

impl<'a> Battery<'a> {
    fn push(
        &mut self,
        name: impl Into<String>,
        loc: &str,
        status: Status,
        expected: impl Into<String>,
        actual: impl Into<String>,
    ) {
        self.checks
            .push(Check::new(name, loc, status, expected, actual));
    }

    /// Checks that need a nontrivial Brauer class are skipped, not failed,
    /// when the scenario has none.
    fn guarded(
        &mut self,
        name: impl Into<String>,
        loc: &str,
        expected: impl Into<String>,
        needs_twist: bool,
        f: impl FnOnce(&Self) -> Outcome,
    ) {
        let name = name.into();
        let expected = expected.into();
        if needs_twist && !self.twisted {
            self.push(
                name,
                loc,
                Status::Skipped,
                expected,
                "Brauer class is trivial",
            );
            return;
        }
        match f(self) {
            Ok((status, actual)) => self.push(name, loc, status, expected, actual),
            Err(e) => {
                let status = if self.twisted {
                    Status::Fail
                } else {
                    Status::Skipped
                };
                self.push(name, loc, status, expected, format!("error: {e}"));
            }
        }
    }

    fn params(&self) -> Result<&ChargeParams, Error> {
        self.p
            .as_ref()
            .ok_or_else(|| Error::Invariant(String::from("charge parameters unavailable")))
    }

    fn lattice_structure(&mut self) {
        let g = self.sc.ambient().clone();
        self.checks.push(Check::compare(
            "k3_signature",
            LOC_LATTICE,
            "(3,19,0)",
            g.signature().to_string(),
        ));
        self.checks.push(Check::compare(
            "k3_det",
            LOC_LATTICE,
            "-1",
            g.det().to_string(),
        ));
        self.guarded(
            "h_perp_disc",
            LOC_LATTICE,
            "rank 21, |disc| 2",
            false,
            |b| {
                let perp = k3twist_core::lattice::orthogonal_complement(
                    b.sc.ambient(),
                    std::slice::from_ref(b.sc.h()),
                )?;
                let actual = format!("rank {}, |disc| {}", perp.rank(), perp.discriminant().abs());
                Ok((Status::from_bool(actual == "rank 21, |disc| 2"), actual))
            },
        );
        self.guarded(
            "hodge_index",
            LOC_CLOSED,
            "Pic(S) of signature (1,rho-1), h^perp negative definite",
            false,
            |b| {
                let r = hodge_index_check(b.sc)?;
                let actual = format!(
                    "signature {}, h.h = {}, h^perp Gram {} {}",
                    r.signature,
                    r.h_square,
                    r.complement,
                    if r.complement_negative_definite {
                        "negative definite"
                    } else {
                        "not negative definite"
                    }
                );
                Ok((Status::from_bool(r.pass), actual))
            },
        );
    }

    fn wall(&mut self) {
        self.guarded("wall_m0", LOC_WALL, m0().to_string(), true, |b| {
            let p = b.params()?;
            let r = wall_between(p, &vector_j(b.sc)?, &vector_e(1, b.sc)?)?;
            let ok = r.roots.len() == 1 && r.roots[0] == m0() && r.roots[0].radicand() == 5;
            let actual = match r.roots.as_slice() {
                [root] => root.to_string(),
                roots => format!("{} roots", roots.len()),
            };
            Ok((Status::from_bool(ok), actual))
        });
        self.guarded("wall_e0_shift", LOC_WALL, m0().to_string(), true, |b| {
            let p = b.params()?;
            let r = wall_between(p, &vector_j(b.sc)?, &vector_e(0, b.sc)?.neg())?;
            let ok = r.roots == [m0()];
            let actual = r
                .roots
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            Ok((Status::from_bool(ok), actual))
        });
        self.guarded("wall_point_class", LOC_WALL, "none", true, |b| {
            let p = b.params()?;
            let r = wall_between(p, &vector_j(b.sc)?, &MukaiVector::point(b.sc.dim()))?;
            let actual = if r.roots.is_empty() {
                String::from("none")
            } else {
                format!("{} roots", r.roots.len())
            };
            Ok((Status::from_bool(r.roots.is_empty()), actual))
        });
    }

    fn charges(&mut self) {
        for (label, m) in sample_points() {
            let expected_j = ComplexQE::new(QuadExt::zero(), m.scale(&int(2))).expect("same field");
            self.guarded(
                format!("charge_j[m={label}]"),
                LOC_CHARGE,
                expected_j.to_string(),
                true,
                |b| {
                    let z = central_charge(b.params()?, &m, &vector_j(b.sc)?)?;
                    Ok((Status::from_bool(z == expected_j), z.to_string()))
                },
            );
            // 1/4 (-2 + 8 m^2 - 1/2)
            let re = m
                .square()
                .scale(&int(8))
                .try_add(&q(rat(-5, 2)))
                .expect("same field")
                .scale(&rat(1, 4));
            let expected_e1 = ComplexQE::new(re, m.clone()).expect("same field");
            self.guarded(
                format!("charge_e1[m={label}]"),
                LOC_CHARGE,
                expected_e1.to_string(),
                true,
                |b| {
                    let z = central_charge(b.params()?, &m, &vector_e(1, b.sc)?)?;
                    Ok((Status::from_bool(z == expected_e1), z.to_string()))
                },
            );
        }
        self.guarded("charge_point_class", LOC_CHARGE, "(-1, 0)", false, |b| {
            let z = central_charge(b.params()?, &q(int(1)), &MukaiVector::point(b.sc.dim()))?;
            Ok((Status::from_bool(z.to_string() == "(-1, 0)"), z.to_string()))
        });
    }

    fn ns_generators(&mut self) {
        let d = BigInt::from(self.sc.b().order());
        let c = self.sc.pic_s().discriminant().abs();
        let target = &d * &d * &c;
        self.guarded(
            "ns_span",
            LOC_NS,
            "Pic(S,B) = span of Neron-Severi generators, saturation index 1",
            false,
            |b| {
                let pic = b.sc.twisted_picard()?;
                let ns = b.sc.ns_lattice()?;
                let same = pic.same_as(&ns);
                let sat = pic.saturation().1;
                let actual = format!("mutual containment {same}, saturation index {sat}");
                Ok((Status::from_bool(same && sat == BigInt::from(1)), actual))
            },
        );
        self.guarded(
            "ns_disc",
            LOC_NS,
            format!("|disc| = d^2 c = {target}"),
            false,
            |b| {
                let gram =
                    crate::generator_gram(b.sc).map_err(|e| Error::Invariant(e.to_string()))?;
                let det = gram.det();
                let actual = format!("Gram {gram}, det {det}");
                Ok((Status::from_bool(det.abs() == target), actual))
            },
        );
        self.guarded(
            "twisted_transcendental_index",
            LOC_NS,
            format!("index {d}"),
            false,
            |b| {
                let t = b.sc.twisted_transcendental()?;
                let ts = b.sc.transcendental()?;
                let ok = t.index == d
                    && t.lattice.discriminant().abs() == &d * &d * ts.discriminant().abs()
                    && t.lattice.saturation().1 == BigInt::from(1);
                let actual = format!(
                    "index {}, |disc T(S,B)| {}, |disc T(S)| {}, saturation index {}",
                    t.index,
                    t.lattice.discriminant().abs(),
                    ts.discriminant().abs(),
                    t.lattice.saturation().1
                );
                Ok((Status::from_bool(ok), actual))
            },
        );
        self.guarded(
            "disc_pic_equals_disc_t",
            LOC_NS,
            "|disc Pic(S,B)| = |disc T(S,B)|",
            false,
            |b| {
                let a = b.sc.twisted_picard()?.discriminant().abs();
                let t = b.sc.twisted_transcendental()?.lattice.discriminant().abs();
                Ok((Status::from_bool(a == t), format!("{a} and {t}")))
            },
        );
    }

    fn spherical(&mut self) {
        for j in 0..2u8 {
            self.guarded(
                format!("spherical_e{j}"),
                LOC_SPHERICAL,
                "<v,v> = -2",
                true,
                |b| {
                    let v = vector_e(j, b.sc)?;
                    let vv = mukai_pairing(&v, &v, b.sc.ambient())?;
                    Ok((
                        Status::from_bool(vv == int(-2)),
                        format!("v = {}, <v,v> = {vv}", b.describe(&v)),
                    ))
                },
            );
        }
        self.guarded(
            "triangle_j",
            LOC_TRIANGLE,
            "v(J) = v(E1) - v(E0)",
            true,
            |b| {
                let (e0, e1, j) = (vector_e(0, b.sc)?, vector_e(1, b.sc)?, vector_j(b.sc)?);
                let ok = j == e1.sub(&e0);
                Ok((
                    Status::from_bool(ok),
                    format!(
                        "v(J) = {}, v(E1) - v(E0) = {}",
                        b.describe(&j),
                        b.describe(&e1.sub(&e0))
                    ),
                ))
            },
        );
        self.guarded("mu_equals_s", LOC_TRIANGLE, "s(J) = mu", true, |b| {
            let j = vector_j(b.sc)?;
            let mu = slope_threshold(b.sc);
            Ok((
                Status::from_bool(j.s == mu),
                format!("s = {}, mu = {mu}", j.s),
            ))
        });
        self.guarded(
            "j_primitive",
            LOC_TRIANGLE,
            "v(J) primitive in Pic(S,B)",
            true,
            |b| {
                let j = vector_j(b.sc)?;
                let coords = j
                    .to_coords()
                    .ok_or_else(|| Error::NonIntegral(String::from("v(J)")))?;
                let inside = b.sc.twisted_picard()?.contains(&coords);
                let line = k3twist_core::Lattice::span(&b.sc.mukai_gram(), &[coords])?;
                let prim = line.is_primitive();
                Ok((
                    Status::from_bool(inside && prim),
                    format!("in Pic(S,B) {inside}, primitive {prim}"),
                ))
            },
        );
    }

    fn chi(&mut self) {
        let (b0, b1) = (TwistProfile::b0(), TwistProfile::b1());
        self.checks.push(Check::compare(
            "preset_ranks",
            LOC_CHI,
            "8, 8",
            format!("{}, {}", b0.rank(), b1.rank()),
        ));
        self.checks.push(Check::compare(
            "chi_b0",
            LOC_CHI,
            "2",
            chi_p2(&b0).to_string(),
        ));
        self.checks.push(Check::compare(
            "chi_b1",
            LOC_CHI,
            "3",
            chi_p2(&b1).to_string(),
        ));
        self.guarded("hom_e0_e1", LOC_CHI, "-<v(E0),v(E1)> = 3", true, |b| {
            let x = -mukai_pairing(&vector_e(0, b.sc)?, &vector_e(1, b.sc)?, b.sc.ambient())?;
            Ok((
                Status::from_bool(x == int(3)),
                format!("-<v(E0),v(E1)> = {x}"),
            ))
        });
    }

    fn slope_chain_for(&mut self, name: String, sc: &Scenario) {
        self.guarded(
            name,
            LOC_SLOPE,
            "slope(E0) = mu - 1/2 < mu < mu + 1/2 = slope(E1)",
            true,
            |_| {
                let mu = slope_threshold(sc);
                let s0 = slope(&vector_e(0, sc)?, sc)?;
                let s1 = slope(&vector_e(1, sc)?, sc)?;
                let half = rat(1, 2);
                let ok = s0 == &mu - &half && s1 == &mu + &half && s0 < mu && mu < s1;
                Ok((Status::from_bool(ok), format!("{s0} < {mu} < {s1}")))
            },
        );
    }

    /// `K` drawn from `Pic(S)` until the Mukai vectors are integral.
    fn random_ks(&self, count: usize) -> Vec<(Vec<i64>, Scenario)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let basis: Vec<Vec<i64>> = self
            .sc
            .pic_s()
            .basis()
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x).unwrap_or(0)).collect())
            .collect();
        let mut out = Vec::new();
        for _ in 0..200 * count {
            if out.len() == count {
                break;
            }
            let mut k = vec![0i64; self.sc.dim()];
            for b in &basis {
                let a: i64 = rng.random_range(-6..=6);
                for (ki, bi) in k.iter_mut().zip(b) {
                    *ki += a * bi;
                }
            }
            if k.iter().all(|&x| x == 0) || out.iter().any(|(o, _)| *o == k) {
                continue;
            }
            let Ok(sk) = self.sc.with_k(&k) else { continue };
            if vector_e(0, &sk).is_ok() && vector_e(1, &sk).is_ok() && vector_j(&sk).is_ok() {
                out.push((k, sk));
            }
        }
        out
    }

    fn slopes(&mut self) {
        let sc = self.sc.clone();
        self.slope_chain_for(String::from("slope_chain[K=default]"), &sc);
        if !self.twisted {
            self.push(
                "slope_chain[random K]",
                LOC_SLOPE,
                Status::Skipped,
                "5 random K",
                "Brauer class is trivial",
            );
            return;
        }
        let ks = self.random_ks(5);
        if ks.len() < 5 {
            self.push(
                "slope_chain[random K]",
                LOC_SLOPE,
                Status::Fail,
                "5 random K",
                format!("only {} admissible K found", ks.len()),
            );
        }
        for (k, sk) in ks {
            let kh = sk
                .ambient()
                .pair(&k3twist_core::intmat::from_i64(&k), sk.h())
                .unwrap_or_default();
            self.slope_chain_for(format!("slope_chain[K.h={kh}]"), &sk);
        }
    }

    fn describe(&self, v: &MukaiVector) -> String {
        match v.to_coords() {
            Some(c) => {
                let n = self.sc.dim();
                format!(
                    "({},{},{})",
                    c[0],
                    k3twist_core::mukai::describe_h2(&c[1..=n], &self.sc.labels()),
                    c[n + 1]
                )
            }
            None => v.to_string(),
        }
    }

    fn birational(&mut self) {
        let claimed = Gram::from_rows(&[&[4, -4], &[-4, 0]]);
        self.guarded(
            "represent_claimed_gram",
            LOC_BIRGEN,
            "NoByCongruence(4)",
            false,
            |_| {
                let r = represents(&claimed, 6, 16)?;
                Ok((
                    Status::from_bool(r == Representation::NoByCongruence(4)),
                    r.to_string(),
                ))
            },
        );
        let h = self.sc.h().clone();
        let v_for = |eps: i64| {
            let mut v = MukaiVector::from_h2(&h);
            v.s = int(eps);
            v
        };
        self.guarded(
            "picard_perp_eps0",
            LOC_BIRGEN,
            "Gram of Pic(S,B) cap v^perp for v = (0,h,0) represents 6",
            true,
            |b| {
                let perp = b.sc.twisted_picard_perp(&v_for(0))?;
                let g = perp.gram();
                let r = represents(&g, 6, 16)?;
                let ok = matches!(r, Representation::Yes(_, _));
                Ok((Status::from_bool(ok), format!("Gram {g}, {r}")))
            },
        );
        self.guarded(
            "picard_perp_eps1",
            LOC_BIRGEN,
            format!("Gram {claimed}, does not represent 6"),
            true,
            |b| {
                let perp = b.sc.twisted_picard_perp(&v_for(1))?;
                let g = perp.gram();
                let r = represents(&g, 6, 16)?;
                let claimed_r = represents(&claimed, 6, 16)?;
                let agree = g.det() == claimed.det()
                    && std::mem::discriminant(&r) == std::mem::discriminant(&claimed_r);
                let status = if agree { Status::Pass } else { Status::Flagged };
                Ok((status, format!("oracle Gram {g} (det {}), {r}", g.det())))
            },
        );
        self.guarded(
            "claimed_generator_eps1",
            LOC_BIRGEN,
            "(4, 2lambda+e1+2e2, 1) orthogonal to v = (0,h,1) and in Pic(S,B)",
            true,
            |b| {
                // 2 lambda + e1 + 2 e2 = h + lambda + 2B
                let c: Vec<Rational> =
                    b.sc.h_rational()
                        .iter()
                        .zip(b.sc.lambda())
                        .zip(b.sc.b().vector())
                        .map(|((h, l), bb)| h + Rational::from_integer(l.clone()) + bb * int(2))
                        .collect();
                let w = MukaiVector::new(int(4), c, int(1));
                let pairing = mukai_pairing(&w, &v_for(1), b.sc.ambient())?;
                let inside = w.lies_in(&b.sc.twisted_picard()?);
                let ok = pairing.is_zero() && inside;
                let status = if ok { Status::Pass } else { Status::Flagged };
                Ok((
                    status,
                    format!(
                        "<w,v> = {pairing}, w in Pic(S,B): {inside}, <w,w> = {}",
                        mukai_pairing(&w, &w, b.sc.ambient())?
                    ),
                ))
            },
        );
        self.guarded(
            "mu_parity",
            LOC_BIRGEN,
            "epsilon = 0 for F(Y) needs mu even, i.e. K.h = 2 mod 4; K is not fixed",
            false,
            |b| {
                let p = b.params()?;
                let actual = match mu_mod_2(p) {
                    Some(e) => format!("mu = {}, epsilon = mu mod 2 = {e}", p.threshold()),
                    None => format!("mu = {} is not an integer", p.threshold()),
                };
                Ok((Status::Flagged, actual))
            },
        );
    }

    fn brauer(&mut self) {
        let d = self.sc.b().order();
        let expected = format!("surjective {}, index {d}", d == 2);
        self.guarded("brauer_kernel", LOC_BRAUER, expected.clone(), false, |b| {
            let k = b.sc.brauer_kernel()?;
            let actual = format!("surjective {}, index {}", k.surjective, k.index);
            Ok((Status::from_bool(actual == expected), actual))
        });
        self.guarded(
            "brauer_kernel_disc",
            LOC_BRAUER,
            format!("|disc ker| = {} |disc T(S)|", d * d),
            false,
            |b| {
                let k = b.sc.brauer_kernel()?;
                let ts = b.sc.transcendental()?.discriminant().abs();
                let kd = k.kernel.discriminant().abs();
                Ok((
                    Status::from_bool(kd == &ts * BigInt::from(d * d)),
                    format!("{kd} = {} * {ts}", &kd / &ts),
                ))
            },
        );
    }

    fn hn(&mut self) {
        let expectations = [
            ("1", q(int(1)), Regime::Destabilized),
            ("m0", m0(), Regime::Wall),
            ("13/25", q(rat(13, 25)), Regime::StableAgainstCatalogue),
        ];
        for (label, m, regime) in expectations {
            self.guarded(
                format!("hn[m={label}]"),
                LOC_HN,
                format!("{regime:?}"),
                true,
                |b| {
                    let r = hn_report(b.params()?, &m)?;
                    let actual = format!(
                        "{:?}: phase(E0[1]) {} phase(J) {} phase(E1); {}",
                        r.regime,
                        describe_ordering(r.e0_shift_vs_j),
                        describe_ordering(r.j_vs_e1),
                        r.narrative
                    );
                    Ok((Status::from_bool(r.regime == regime), actual))
                },
            );
        }
        self.guarded(
            "phase_reversal",
            LOC_HN,
            "orderings at 13/25 and 1 are opposite, equal at m0",
            true,
            |b| {
                let p = b.params()?;
                let lo = hn_report(p, &q(rat(13, 25)))?;
                let at = hn_report(p, &m0())?;
                let hi = hn_report(p, &q(int(1)))?;
                let ok = lo.e0_shift_vs_j == hi.e0_shift_vs_j.reverse()
                    && lo.j_vs_e1 == hi.j_vs_e1.reverse()
                    && at.e0_shift_vs_j == Ordering::Equal
                    && at.j_vs_e1 == Ordering::Equal
                    && hi.e0_shift_vs_j != Ordering::Equal;
                let fmt = |r: &k3twist_core::stability::HnReport| {
                    format!(
                        "{}{}",
                        describe_ordering(r.e0_shift_vs_j),
                        describe_ordering(r.j_vs_e1)
                    )
                };
                Ok((
                    Status::from_bool(ok),
                    format!("13/25: {}, m0: {}, 1: {}", fmt(&lo), fmt(&at), fmt(&hi)),
                ))
            },
        );
    }

    fn scan(&self, m: &QuadExt) -> Result<Vec<Candidate>, Error> {
        parallel_scan(
            self.params()?,
            &vector_j(self.sc)?,
            m,
            self.opts.max_coeff,
            self.opts.jobs,
        )
        .map_err(|e| match e.downcast::<Error>() {
            Ok(e) => e,
            Err(e) => Error::Invariant(e.to_string()),
        })
    }

    fn scans(&mut self) {
        let bound = self.opts.max_coeff;
        self.guarded(
            "scan[m=13/25]",
            LOC_SCAN,
            format!("no survivor with greater phase (box {bound})"),
            true,
            |b| {
                let found = b.scan(&q(rat(13, 25)))?;
                let greater: Vec<&Candidate> = found
                    .iter()
                    .filter(|c| c.ordering == Ordering::Greater)
                    .collect();
                let e1 = vector_e(1, b.sc)?;
                let actual = match greater.first() {
                    None => String::from("no survivor"),
                    Some(first) => format!(
                    "{} survivors with greater phase, first {} (coords {:?}); E1 among them: {}",
                    greater.len(),
                    b.describe(&first.vector),
                    first.coords,
                    greater.iter().any(|c| c.vector == e1)
                ),
                };
                Ok((Status::from_bool(greater.is_empty()), actual))
            },
        );
        self.guarded(
            "scan[m=1]",
            LOC_SCAN,
            "E0[1] survives with greater phase",
            true,
            |b| {
                let found = b.scan(&q(int(1)))?;
                let target = vector_e(0, b.sc)?.neg();
                let hit = found.iter().find(|c| c.vector == target);
                let actual = match hit {
                    Some(c) => format!(
                        "E0[1] with charge {} and phase {} phase(J); {} survivors",
                        c.charge,
                        describe_ordering(c.ordering),
                        found.len()
                    ),
                    None => format!("E0[1] absent; {} survivors", found.len()),
                };
                Ok((
                    Status::from_bool(hit.is_some_and(|c| c.ordering == Ordering::Greater)),
                    actual,
                ))
            },
        );
        self.guarded(
            "scan[m=m0]",
            LOC_SCAN,
            "equal-phase survivors exactly {E0[1], E1}",
            true,
            |b| {
                let found = b.scan(&m0())?;
                let equal: Vec<&MukaiVector> = found
                    .iter()
                    .filter(|c| c.ordering == Ordering::Equal)
                    .map(|c| &c.vector)
                    .collect();
                let (e0s, e1) = (vector_e(0, b.sc)?.neg(), vector_e(1, b.sc)?);
                let ok = equal.len() == 2 && equal.contains(&&e0s) && equal.contains(&&e1);
                let names: Vec<String> = equal.iter().map(|v| b.describe(v)).collect();
                Ok((
                    Status::from_bool(ok),
                    format!("equal phase: [{}]", names.join(", ")),
                ))
            },
        );
        self.guarded(
            "scan_filters",
            LOC_SCAN,
            "every survivor has <w,w> >= -2 and lies in Pic(S,B)",
            true,
            |b| {
                let pic = b.sc.twisted_picard()?;
                let mut n = 0;
                let mut bad = 0;
                for (_, m) in sample_points() {
                    for c in b.scan(&m)? {
                        n += 1;
                        let ww = mukai_pairing(&c.vector, &c.vector, b.sc.ambient())?;
                        if ww < int(-2) || !c.vector.lies_in(&pic) {
                            bad += 1;
                        }
                    }
                }
                Ok((
                    Status::from_bool(bad == 0),
                    format!("{n} survivors checked, {bad} violations"),
                ))
            },
        );
        self.guarded(
            "scan_determinism",
            LOC_SCAN,
            "identical results for 1 and several workers",
            true,
            |b| {
                let p = b.params()?;
                let j = vector_j(b.sc)?;
                let m = q(rat(13, 25));
                let one = parallel_scan(p, &j, &m, bound, 1)
                    .map_err(|e| Error::Invariant(e.to_string()))?;
                let many = parallel_scan(p, &j, &m, bound, b.opts.jobs.max(4))
                    .map_err(|e| Error::Invariant(e.to_string()))?;
                Ok((
                    Status::from_bool(one == many),
                    format!(
                        "{} and {} candidates, equal: {}",
                        one.len(),
                        many.len(),
                        one == many
                    ),
                ))
            },
        );
    }

    fn epsilon(&mut self) {
        self.guarded("epsilon_bound", LOC_EPS, "1/2", true, |b| {
            let e = epsilon_bound(b.params()?)?;
            Ok((Status::from_bool(e == q(rat(1, 2))), e.to_string()))
        });
        self.guarded("epsilon_below_m0", LOC_EPS, "m0 - epsilon > 0", true, |b| {
            let e = epsilon_bound(b.params()?)?;
            let d = m0().try_sub(&e)?;
            Ok((
                Status::from_bool(d.is_positive()),
                format!("m0 - epsilon = {d}, sign {}", d.signum()),
            ))
        });
        self.guarded(
            "epsilon_boundary",
            LOC_EPS,
            "Re = 0 at r=2, F=0, m=1/2; Re > 0 at m=51/100",
            false,
            |_| {
                let at = spherical_re_bound(2, &int(0), &q(rat(1, 2)))?;
                let past = spherical_re_bound(2, &int(0), &q(rat(51, 100)))?;
                Ok((
                    Status::from_bool(at.is_zero() && past.is_positive()),
                    format!("{at} and {past}"),
                ))
            },
        );
    }

    fn closed_form(&mut self) {
        self.guarded("closed_form_e1[m=m0]", LOC_CLOSED, "0", true, |b| {
            let p = b.params()?;
            let e1 = vector_e(1, b.sc)?;
            let half = re_closed_form(p, &e1, &m0())?;
            let quarter = re_closed_form_with(p, &e1, &m0(), &rat(1, 4))?;
            let status = if half.value.is_zero() {
                Status::Pass
            } else {
                Status::Flagged
            };
            Ok((
                status,
                format!(
                    "closed form {} (discrepancy {}); with h/4 in F: {} (discrepancy {})",
                    half.value, half.discrepancy, quarter.value, quarter.discrepancy
                ),
            ))
        });
        self.guarded(
            "closed_form_e1[m=1]",
            LOC_CLOSED,
            "discrepancy recorded, not assumed zero",
            true,
            |b| {
                let p = b.params()?;
                let cf = re_closed_form(p, &vector_e(1, b.sc)?, &q(int(1)))?;
                let direct = central_charge(p, &q(int(1)), &vector_e(1, b.sc)?)?;
                Ok((
                    Status::Flagged,
                    format!(
                        "direct Re {}, closed form {}, discrepancy {}",
                        direct.re(),
                        cf.value,
                        cf.discrepancy
                    ),
                ))
            },
        );
        self.guarded("re_rank2_sphericals[m=1]", LOC_CLOSED, "11/8", true, |b| {
            let z = central_charge(b.params()?, &q(int(1)), &vector_e(0, b.sc)?)?;
            let re = z.re().to_string();
            Ok((Status::from_bool(re == "11/8"), re))
        });
        self.push(
            "hodge_step_k_equals_m",
            LOC_CLOSED,
            Status::Flagged,
            "F.F <= 1/2 deduced from the hypothesis K = m",
            "hypothesis compares a divisor class with a real parameter and cannot be checked; F.F <= 0 on h^perp is certified by hodge_index",
        );
    }
}

/// Runs every check on `sc`.
pub fn run_battery(sc: &Scenario, opts: &BatteryOptions) -> Report {
    let p = ChargeParams::new(sc).ok();
    let mut b = Battery {
        sc,
        p,
        twisted: sc.beta_nontrivial(),
        opts,
        checks: Vec::new(),
    };
    b.lattice_structure();
    b.wall();
    b.charges();
    b.ns_generators();
    b.spherical();
    b.chi();
    b.slopes();
    b.birational();
    b.brauer();
    b.hn();
    b.scans();
    b.epsilon();
    b.closed_form();
    Report::new(b.checks)
}
