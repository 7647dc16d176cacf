//! Values computed by independent routes: direct expansion of the exponential
//! pairing, coordinate solves in the Neron-Severi basis, and brute-force
//! enumeration of the scan box.

use std::cmp::Ordering;

use k3twist_core::intmat::{self, IntVec};
use k3twist_core::lattice::{orthogonal_complement, represents, Gram, Lattice, Representation};
use k3twist_core::mukai::{exp_class, mukai_gram, mukai_pairing, twist_by, MukaiVector};
use k3twist_core::scalar::{int, phase_cmp, rat, ComplexQE, Phase, QuadExt, Rational};
use k3twist_core::scenario::{
    build_default_scenario, chi_p2, slope, slope_threshold, vector_e, vector_j, Scenario,
    ScenarioSpec, TwistProfile,
};
use k3twist_core::stability::{
    central_charge, destabilizer_scan, epsilon_bound, hn_report, re_closed_form, wall_between,
    ChargeParams, Regime,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn m0() -> QuadExt {
    QuadExt::new(Rational::zero(), rat(1, 4), 5).unwrap()
}

fn q(x: Rational) -> QuadExt {
    QuadExt::from_rational(x)
}

fn unit(idx: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; 22];
    for &(i, x) in idx {
        v[i] = x;
    }
    v
}

/// `<exp(D_R + i m h), v>` multiplied out with complex arithmetic and a
/// general `h.h`, without the `h.h = 2` simplification.
fn charge_by_product(sc: &Scenario, m: &QuadExt, v: &MukaiVector) -> ComplexQE {
    let g = sc.ambient();
    let dr = sc.real_shift();
    let h = sc.h_rational();
    let c = |x: &Rational| q(x.clone());
    // components of D = D_R + i m h
    let dc = ComplexQE::new(
        c(&g.pair_rational(&dr, &v.c).unwrap()),
        m.scale(&g.pair_rational(&h, &v.c).unwrap()),
    )
    .unwrap();
    let dd_re = c(&g.pair_rational(&dr, &dr).unwrap())
        .try_sub(&m.square().scale(&g.pair_rational(&h, &h).unwrap()))
        .unwrap();
    let dd_im = m.scale(&(int(2) * g.pair_rational(&dr, &h).unwrap()));
    let half_dd = ComplexQE::new(dd_re, dd_im).unwrap().scale(&rat(1, 2));
    // <(1, D, D^2/2), (r, c, s)> = D.c - s - r D^2/2
    dc.try_sub(&ComplexQE::from_rationals(v.s.clone(), Rational::zero()))
        .unwrap()
        .try_sub(&half_dd.scale(&v.r))
        .unwrap()
}

#[test]
fn charge_matches_direct_product_on_catalogue() {
    let sc = build_default_scenario();
    let p = ChargeParams::new(&sc).unwrap();
    let cat = [
        vector_j(&sc).unwrap(),
        vector_e(0, &sc).unwrap(),
        vector_e(1, &sc).unwrap(),
        MukaiVector::point(22),
    ];
    for m in [q(rat(13, 25)), q(int(1)), m0(), q(rat(7, 3))] {
        for v in &cat {
            assert_eq!(
                central_charge(&p, &m, v).unwrap(),
                charge_by_product(&sc, &m, v)
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn charge_matches_direct_product(
        r in -4i64..=4, s in -6i64..=6, c in prop::collection::vec(-3i64..=3, 22),
        mn in 1i64..60, md in 1i64..60, kh in -2i64..=2,
    ) {
        let sc = build_default_scenario().with_k(&unit(&[(0, 2 * kh), (1, 2 * kh)])).unwrap();
        let p = ChargeParams::new(&sc).unwrap();
        let v = MukaiVector::from_ints(r, &c, s);
        let m = q(rat(mn, md));
        prop_assert_eq!(central_charge(&p, &m, &v).unwrap(), charge_by_product(&sc, &m, &v));
    }
}

#[test]
fn exp_classes() {
    let sc = build_default_scenario();
    let g = sc.ambient();
    let zero = vec![Rational::zero(); 22];
    assert_eq!(
        exp_class(&zero, g).unwrap(),
        MukaiVector::from_ints(1, &unit(&[]), 0)
    );
    assert_eq!(
        exp_class(&sc.h_rational(), g).unwrap(),
        MukaiVector::from_ints(1, &unit(&[(0, 1), (1, 1)]), 1)
    );
    let eb = exp_class(sc.b().vector(), g).unwrap();
    assert_eq!(eb.s, rat(1, 4));
    let j = vector_j(&sc).unwrap();
    let hn: Vec<Rational> = sc.h_rational().iter().map(|x| x * int(3)).collect();
    assert_eq!(twist_by(&j, &hn, g).unwrap().s, int(1 + 6));
    // twist by n h moves the degree-4 part of (0, h, s) by 2n
    for n in -3..=3 {
        let d: Vec<Rational> = sc.h_rational().iter().map(|x| x * int(n)).collect();
        assert_eq!(twist_by(&j, &d, g).unwrap().s, int(1 + 2 * n));
    }
}

#[test]
fn lattice_invariants_of_k3() {
    let sc = build_default_scenario();
    let g = sc.ambient();
    assert_eq!(g.rank(), 22);
    assert_eq!(g.det(), BigInt::from(-1));
    let sig = g.signature();
    assert_eq!((sig.positive, sig.negative, sig.zero), (3, 19, 0));
    assert!(g.is_even());
    // k = e1 + e2 has k.k = 2 and its complement has |disc| 2
    let k0 = intmat::from_i64(&unit(&[(0, 1), (1, 1)]));
    let perp = orthogonal_complement(g, &[k0]).unwrap();
    assert_eq!(perp.rank(), 21);
    assert_eq!(perp.discriminant().abs(), BigInt::from(2));
    assert!(perp.is_primitive());
    assert_eq!(orthogonal_complement(g, &[]).unwrap().rank(), 22);
}

#[test]
fn ns_oracle() {
    let sc = build_default_scenario();
    let gens = sc.ns_generators();
    let expected = [
        MukaiVector::from_ints(0, &unit(&[(0, 1), (1, 1)]), 0),
        MukaiVector::from_ints(2, &unit(&[(1, 1), (2, 1), (3, 1)]), 0),
        MukaiVector::from_ints(0, &unit(&[]), 1),
    ];
    assert_eq!(gens, expected);
    // Gram by pairing the three vectors directly
    let g = sc.ambient();
    let gram: Vec<Vec<Rational>> = gens
        .iter()
        .map(|a| {
            gens.iter()
                .map(|b| mukai_pairing(a, b, g).unwrap())
                .collect()
        })
        .collect();
    let ints = [[2, 1, 0], [1, 2, -2], [0, -2, 0]];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(gram[i][j], int(ints[i][j]));
        }
    }
    let ns = sc.ns_lattice().unwrap();
    assert_eq!(ns.discriminant(), BigInt::from(-8));
    let pic = sc.twisted_picard().unwrap();
    assert!(pic.same_as(&ns));
    assert_eq!(pic.rank(), 3);
    assert_eq!(pic.discriminant().abs(), BigInt::from(8));
    assert_eq!(ns.index_in(&pic), Some(BigInt::from(1)));
    for v in &gens {
        assert!(v.lies_in(&pic));
    }
}

#[test]
fn twisted_transcendental_oracle() {
    let sc = build_default_scenario();
    let ts = sc.transcendental().unwrap();
    assert_eq!(ts.rank(), 21);
    assert_eq!(ts.discriminant().abs(), BigInt::from(2));
    let t = sc.twisted_transcendental().unwrap();
    assert_eq!(t.index, BigInt::from(2));
    assert_eq!(t.lattice.rank(), 21);
    assert_eq!(t.lattice.discriminant().abs(), BigInt::from(8));
    assert_eq!(t.lattice.saturation().1, BigInt::from(1));
    // every basis vector has the shape (0, x, B.x)
    for v in t.lattice.basis() {
        assert!(v[0].is_zero());
        let x: IntVec = v[1..23].to_vec();
        assert_eq!(
            sc.b().pair(sc.ambient(), &x).unwrap(),
            Rational::from_integer(v[23].clone())
        );
    }
    // Pic(S,B) is orthogonal to T(S,B) and ranks add to 24
    let pic = sc.twisted_picard().unwrap();
    let mg = mukai_gram(sc.ambient());
    for a in pic.basis() {
        for b in t.lattice.basis() {
            assert!(mg.pair(a, b).unwrap().is_zero());
        }
    }
    assert_eq!(pic.rank() + t.lattice.rank(), 24);
    assert_eq!(pic.discriminant().abs(), t.lattice.discriminant().abs());

    let bk = sc.brauer_kernel().unwrap();
    assert!(bk.surjective);
    assert_eq!(bk.index, BigInt::from(2));
    assert_eq!(
        bk.kernel.discriminant().abs(),
        BigInt::from(4) * ts.discriminant().abs()
    );
}

#[test]
fn trivial_b_field() {
    let mut spec = ScenarioSpec::standard();
    spec.b_num = vec![0; 22];
    spec.b_den = 1;
    let sc = Scenario::from_spec(&spec).unwrap();
    let t = sc.twisted_transcendental().unwrap();
    assert_eq!(t.index, BigInt::from(1));
    let bk = sc.brauer_kernel().unwrap();
    assert!(!bk.surjective);
    assert!(bk.kernel.same_as(&sc.transcendental().unwrap()));
    let gens = sc.ns_generators();
    assert_eq!(gens[1], MukaiVector::from_ints(1, &unit(&[]), 0));
    assert!(sc
        .twisted_picard()
        .unwrap()
        .same_as(&sc.ns_lattice().unwrap()));
}

/// `a (0,h,0) + b (2,2B,0) + c (0,0,1)` is orthogonal to `(0,h,e)` iff
/// `2a + b - 2be = 0`.
fn perp_oracle(eps: i64) -> (Vec<MukaiVector>, [[i64; 2]; 2]) {
    let sc = build_default_scenario();
    let gens = sc.ns_generators();
    let (a, b) = (1, 2 * (2 * eps - 1));
    let x = gens[0].scale(&int(a)).add(&gens[1].scale(&int(b)));
    let basis = vec![gens[2].clone(), x];
    let g = sc.ambient();
    let mut gram = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let v = mukai_pairing(&basis[i], &basis[j], g).unwrap();
            gram[i][j] = i64::try_from(v.to_integer()).unwrap();
        }
    }
    (basis, gram)
}

#[test]
fn picard_perp_epsilon_zero() {
    let (basis, gram) = perp_oracle(0);
    assert_eq!(
        basis[1],
        MukaiVector::from_ints(-4, &unit(&[(0, 1), (1, -1), (2, -2), (3, -2)]), 0)
    );
    assert_eq!(gram, [[0, 4], [4, 6]]);
    let sc = build_default_scenario();
    let v = MukaiVector::from_ints(0, &unit(&[(0, 1), (1, 1)]), 0);
    let perp = sc.twisted_picard_perp(&v).unwrap();
    let coords: Vec<IntVec> = basis.iter().map(|b| b.to_coords().unwrap()).collect();
    assert!(perp.same_as(&Lattice::span(&sc.mukai_gram(), &coords).unwrap()));
    let g = Gram::from_rows(&[&gram[0], &gram[1]]);
    assert!(matches!(
        represents(&g, 6, 8).unwrap(),
        Representation::Yes(_, _)
    ));
    assert!(matches!(
        represents(&perp.gram(), 6, 8).unwrap(),
        Representation::Yes(_, _)
    ));
}

#[test]
fn picard_perp_epsilon_one() {
    let (basis, gram) = perp_oracle(1);
    assert_eq!(
        basis[1],
        MukaiVector::from_ints(4, &unit(&[(0, 1), (1, 3), (2, 2), (3, 2)]), 0)
    );
    assert_eq!(gram, [[0, -4], [-4, 14]]);
    let sc = build_default_scenario();
    let v = MukaiVector::from_ints(0, &unit(&[(0, 1), (1, 1)]), 1);
    let perp = sc.twisted_picard_perp(&v).unwrap();
    let coords: Vec<IntVec> = basis.iter().map(|b| b.to_coords().unwrap()).collect();
    assert!(perp.same_as(&Lattice::span(&sc.mukai_gram(), &coords).unwrap()));
    // 14 - 8 = 6 at (1, 1)
    let g = Gram::from_rows(&[&gram[0], &gram[1]]);
    assert_eq!(
        represents(&g, 6, 8).unwrap(),
        Representation::Yes(BigInt::from(1), BigInt::from(1))
    );

    // the generator listed alongside (0,0,1) in the paper
    let claimed = MukaiVector::from_ints(4, &unit(&[(0, 1), (1, 2), (2, 2), (3, 2)]), 1);
    let gm = sc.ambient();
    assert_eq!(mukai_pairing(&claimed, &v, gm).unwrap(), int(-1));
    assert_eq!(mukai_pairing(&claimed, &claimed, gm).unwrap(), int(4));
    assert!(!claimed.lies_in(&sc.twisted_picard().unwrap()));
    let paper = Gram::from_rows(&[&[4, -4], &[-4, 0]]);
    assert_eq!(
        represents(&paper, 6, 8).unwrap(),
        Representation::NoByCongruence(4)
    );
}

#[test]
fn chi_and_slopes() {
    assert_eq!(chi_p2(&TwistProfile::b0()), 2);
    assert_eq!(chi_p2(&TwistProfile::b1()), 3);
    let sc = build_default_scenario();
    let e0 = vector_e(0, &sc).unwrap();
    let e1 = vector_e(1, &sc).unwrap();
    assert_eq!(-mukai_pairing(&e0, &e1, sc.ambient()).unwrap(), int(3));
    let mu = slope_threshold(&sc);
    assert_eq!(slope(&e0, &sc).unwrap(), &mu - rat(1, 2));
    assert_eq!(slope(&e1, &sc).unwrap(), &mu + rat(1, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn scenario_identities_for_any_k(t in -6i64..=6) {
        // K = 2t h keeps every vector integral
        let sc = build_default_scenario().with_k(&unit(&[(0, 2 * t), (1, 2 * t)])).unwrap();
        let g = sc.ambient();
        let e0 = vector_e(0, &sc).unwrap();
        let e1 = vector_e(1, &sc).unwrap();
        let j = vector_j(&sc).unwrap();
        prop_assert_eq!(mukai_pairing(&e0, &e0, g).unwrap(), int(-2));
        prop_assert_eq!(mukai_pairing(&e1, &e1, g).unwrap(), int(-2));
        prop_assert_eq!(&j, &e1.sub(&e0));
        let mu = slope_threshold(&sc);
        prop_assert_eq!(&j.s, &mu);
        prop_assert_eq!(slope(&e0, &sc).unwrap(), &mu - rat(1, 2));
        prop_assert_eq!(slope(&e1, &sc).unwrap(), &mu + rat(1, 2));
        let pic = sc.twisted_picard().unwrap();
        prop_assert!(j.lies_in(&pic));
        let jl = Lattice::span(&sc.mukai_gram(), &[j.to_coords().unwrap()]).unwrap();
        prop_assert!(jl.is_primitive());
        let p = ChargeParams::new(&sc).unwrap();
        let m = q(int(1));
        let re = central_charge(&p, &m, &e1).unwrap();
        prop_assert_eq!(re.re(), &q(rat(11, 8)));
    }
}

#[test]
fn wall_and_chambers() {
    let sc = build_default_scenario();
    let p = ChargeParams::new(&sc).unwrap();
    let j = vector_j(&sc).unwrap();
    let e1 = vector_e(1, &sc).unwrap();
    let r = wall_between(&p, &j, &e1).unwrap();
    assert_eq!(r.roots, vec![m0()]);
    // root satisfies alignment exactly
    let zj = central_charge(&p, &m0(), &j).unwrap();
    let ze = central_charge(&p, &m0(), &e1).unwrap();
    let cross = zj
        .re()
        .try_mul(ze.im())
        .unwrap()
        .try_sub(&ze.re().try_mul(zj.im()).unwrap())
        .unwrap();
    assert!(cross.is_zero());
    assert!(epsilon_bound(&p).unwrap().try_cmp(&m0()).unwrap() == Ordering::Less);
}

#[test]
fn closed_form_discrepancy_is_r_over_16_minus_a_over_4() {
    let sc = build_default_scenario();
    let p = ChargeParams::new(&sc).unwrap();
    let m = q(int(1));
    for (r, s) in [(2, 1), (2, 3), (4, 0), (-2, 5)] {
        let v = MukaiVector::from_ints(r, &unit(&[(0, 1), (1, 2), (2, 1), (3, 1), (5, 1)]), s);
        let cf = re_closed_form(&p, &v, &m).unwrap();
        let a = sc.ambient().pair_rational(&v.c, &sc.h_rational()).unwrap()
            - &v.r * slope_threshold(&sc);
        assert_eq!(cf.discrepancy, q(&v.r / int(16) - a / int(4)));
    }
}

/// Every class in the box, filtered by hand.
fn brute_force(sc: &Scenario, m: &QuadExt, bound: i64) -> Vec<(Vec<i64>, Ordering)> {
    let gens = sc.ns_generators();
    let g = sc.ambient();
    let j = vector_j(sc).unwrap();
    let zj = Phase::new(charge_by_product(sc, m, &j)).unwrap();
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            for z in -bound..=bound {
                let w = gens[0]
                    .scale(&int(x))
                    .add(&gens[1].scale(&int(y)))
                    .add(&gens[2].scale(&int(z)));
                if mukai_pairing(&w, &w, g).unwrap() < int(-2) {
                    continue;
                }
                let zw = charge_by_product(sc, m, &w);
                let ratio = zw.im().try_div(m).unwrap();
                if !ratio.is_positive()
                    || ratio.try_cmp(&QuadExt::from_int(2)).unwrap() != Ordering::Less
                {
                    continue;
                }
                let ord = phase_cmp(&Phase::new(zw).unwrap(), &zj).unwrap();
                if ord != Ordering::Less {
                    out.push((vec![x, y, z], ord));
                }
            }
        }
    }
    out
}

#[test]
fn scan_matches_brute_force() {
    let sc = build_default_scenario();
    let p = ChargeParams::new(&sc).unwrap();
    let j = vector_j(&sc).unwrap();
    for m in [q(rat(13, 25)), m0(), q(int(1))] {
        let got: Vec<_> = destabilizer_scan(&p, &j, &m, 4)
            .unwrap()
            .into_iter()
            .map(|c| (c.coords, c.ordering))
            .collect();
        assert_eq!(got, brute_force(&sc, &m, 4));
    }
}

#[test]
fn frozen_scan_results() {
    let sc = build_default_scenario();
    let p = ChargeParams::new(&sc).unwrap();
    let j = vector_j(&sc).unwrap();
    let e1 = [1, 1, 2];
    let e0_shift = [0, -1, -1];

    let at = |m: &QuadExt| destabilizer_scan(&p, &j, m, 8).unwrap();

    let low = at(&q(rat(13, 25)));
    assert_eq!(low.len(), 48);
    assert!(low.iter().all(|c| c.ordering == Ordering::Greater));
    assert!(low.iter().any(|c| c.coords == e1));
    assert!(!low.iter().any(|c| c.coords == e0_shift));

    let wall = at(&m0());
    assert_eq!(wall.len(), 49);
    let equal: Vec<_> = wall
        .iter()
        .filter(|c| c.ordering == Ordering::Equal)
        .map(|c| c.coords.clone())
        .collect();
    assert_eq!(equal, vec![e0_shift.to_vec(), e1.to_vec()]);

    let high = at(&q(int(1)));
    assert_eq!(high.len(), 48);
    let shifted = high.iter().find(|c| c.coords == e0_shift).unwrap();
    assert_eq!(shifted.vector, vector_e(0, &sc).unwrap().neg());
    assert_eq!(shifted.ordering, Ordering::Greater);
    assert_eq!(
        shifted.charge,
        ComplexQE::from_rationals(rat(-11, 8), int(1))
    );
    assert!(!high.iter().any(|c| c.coords == e1));

    for c in low.iter().chain(&wall).chain(&high) {
        assert!(mukai_pairing(&c.vector, &c.vector, sc.ambient()).unwrap() >= int(-2));
        assert!(c.vector.lies_in(&sc.twisted_picard().unwrap()));
    }
}

#[test]
fn phase_order_reverses_across_wall() {
    let p = ChargeParams::new(&build_default_scenario()).unwrap();
    let above = hn_report(&p, &q(int(1))).unwrap();
    let at = hn_report(&p, &m0()).unwrap();
    let below = hn_report(&p, &q(rat(13, 25))).unwrap();
    assert_eq!(above.regime, Regime::Destabilized);
    assert_eq!(at.regime, Regime::Wall);
    assert_eq!(below.regime, Regime::StableAgainstCatalogue);
    assert_eq!(above.e0_shift_vs_j, below.e0_shift_vs_j.reverse());
    assert_eq!(above.j_vs_e1, below.j_vs_e1.reverse());
    assert_eq!(at.e0_shift_vs_j, Ordering::Equal);
}
