//! The degree-2 K3 surface double covering the plane, its B-field, and the
//! Mukai vectors of the rank-2 twisted bundles `E0`, `E1` and of the
//! twisted sheaves `J_l` attached to lines.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::intmat::{self, IntVec};
use crate::lattice::{orthogonal_complement, Gram, Lattice, StandardLattice};
use crate::mukai::{
    self, mukai_gram, ns_generators, BField, BrauerKernel, MukaiVector, TwistedTranscendental,
};
use crate::scalar::{int, rat, Rational};

/// Raw scenario data in machine integers, as read from a scenario file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub ambient: Vec<String>,
    pub h: Vec<i64>,
    pub b_num: Vec<i64>,
    pub b_den: i64,
    pub k: Vec<i64>,
    pub pic_generators: Vec<Vec<i64>>,
    pub lambda: Vec<i64>,
}

fn unit(n: usize, idx: &[(usize, i64)]) -> Vec<i64> {
    let mut v = alloc::vec![0; n];
    for &(i, x) in idx {
        v[i] = x;
    }
    v
}

impl ScenarioSpec {
    /// `U^3 + E8(-1)^2` with `h = e1+e2`, `lambda = f1+f2` in the second
    /// hyperbolic plane, `B = (e2+lambda)/2`, `K = 0`, `Pic(S) = <h>`.
    pub fn standard() -> Self {
        let n = 22;
        ScenarioSpec {
            ambient: ["U", "U", "U", "E8neg", "E8neg"]
                .iter()
                .map(|s| String::from(*s))
                .collect(),
            h: unit(n, &[(0, 1), (1, 1)]),
            b_num: unit(n, &[(1, 1), (2, 1), (3, 1)]),
            b_den: 2,
            k: unit(n, &[]),
            pic_generators: alloc::vec![unit(n, &[(0, 1), (1, 1)])],
            lambda: unit(n, &[(2, 1), (3, 1)]),
        }
    }
}

/// Validated geometric setup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    blocks: Vec<StandardLattice>,
    ambient: Gram,
    h: IntVec,
    b: BField,
    k: IntVec,
    pic_s: Lattice,
    lambda: IntVec,
    spec: ScenarioSpec,
}

fn invariant(msg: &str) -> Error {
    Error::Invariant(String::from(msg))
}

impl Scenario {
    pub fn from_spec(spec: &ScenarioSpec) -> Result<Self> {
        let blocks: Vec<StandardLattice> = spec
            .ambient
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        let ambient = blocks
            .iter()
            .fold(Gram::empty(), |acc, b| acc.direct_sum(&b.gram()));
        let n = ambient.rank();
        let check_len = |name: &str, v: &[i64]| {
            if v.len() == n {
                Ok(())
            } else {
                Err(Error::Invariant(format!(
                    "{name} has length {}, ambient rank is {n}",
                    v.len()
                )))
            }
        };
        check_len("h", &spec.h)?;
        check_len("B_num", &spec.b_num)?;
        check_len("K", &spec.k)?;
        check_len("lambda", &spec.lambda)?;
        for g in &spec.pic_generators {
            check_len("pic generator", g)?;
        }
        let h = intmat::from_i64(&spec.h);
        let k = intmat::from_i64(&spec.k);
        let lambda = intmat::from_i64(&spec.lambda);
        let b = BField::from_parts(&spec.b_num, spec.b_den)?;

        if ambient.pair(&h, &h)? != BigInt::from(2) {
            return Err(invariant("h.h != 2"));
        }
        if ambient.pair(&lambda, &lambda)? != BigInt::from(2) {
            return Err(invariant("lambda.lambda != 2"));
        }
        let first_block = blocks.first().map_or(0, |b| b.gram().rank());
        if lambda[..first_block].iter().any(|x| !x.is_zero()) {
            return Err(invariant("lambda must vanish on the first block"));
        }
        if b.order() != spec.b_den as u64 {
            return Err(Error::Invariant(format!(
                "B_den = {} but B has order {}",
                spec.b_den,
                b.order()
            )));
        }
        // the normalization B.h = 1/2 only makes sense for a nontrivial class
        if b.order() > 1 && b.pair(&ambient, &h)? != rat(1, 2) {
            return Err(invariant("B.h != 1/2"));
        }
        let gens: Vec<IntVec> = spec
            .pic_generators
            .iter()
            .map(|g| intmat::from_i64(g))
            .collect();
        let pic_s = Lattice::span(&ambient, &gens)
            .map_err(|_| invariant("pic_generators span the zero lattice"))?;
        if !pic_s.contains(&h) {
            return Err(invariant("h not in Pic(S)"));
        }
        if !pic_s.contains(&k) {
            return Err(invariant("K not in Pic(S)"));
        }
        if pic_s.discriminant().is_zero() {
            return Err(invariant("Pic(S) is degenerate"));
        }
        Ok(Scenario {
            blocks,
            ambient,
            h,
            b,
            k,
            pic_s,
            lambda,
            spec: spec.clone(),
        })
    }

    /// Same scenario with a different `K`.
    pub fn with_k(&self, k: &[i64]) -> Result<Self> {
        let mut spec = self.spec.clone();
        spec.k = k.to_vec();
        Self::from_spec(&spec)
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[StandardLattice] {
        &self.blocks
    }

    /// `H^2` lattice.
    pub fn ambient(&self) -> &Gram {
        &self.ambient
    }

    pub fn mukai_gram(&self) -> Gram {
        mukai_gram(&self.ambient)
    }

    pub fn h(&self) -> &IntVec {
        &self.h
    }

    pub fn b(&self) -> &BField {
        &self.b
    }

    pub fn k(&self) -> &IntVec {
        &self.k
    }

    pub fn lambda(&self) -> &IntVec {
        &self.lambda
    }

    pub fn pic_s(&self) -> &Lattice {
        &self.pic_s
    }

    pub fn dim(&self) -> usize {
        self.ambient.rank()
    }

    /// The Brauer class is nontrivial.
    pub fn beta_nontrivial(&self) -> bool {
        self.b.order() > 1
    }

    /// Basis labels `e1,e2,f1,f2,g1,g2,a1..a8,b1..b8` for the default block
    /// layout; generic `x<i>` otherwise.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        let u_names = ["e", "f", "g", "u", "v", "w"];
        let e8_names = ["a", "b", "c", "d"];
        let (mut nu, mut ne, mut nr) = (0, 0, 0);
        for b in &self.blocks {
            match b {
                StandardLattice::U => {
                    let base = u_names
                        .get(nu)
                        .map_or_else(|| format!("u{nu}_"), |s| String::from(*s));
                    out.push(format!("{base}1"));
                    out.push(format!("{base}2"));
                    nu += 1;
                }
                StandardLattice::E8Neg => {
                    let base = e8_names
                        .get(ne)
                        .map_or_else(|| format!("e8_{ne}_"), |s| String::from(*s));
                    out.extend((1..=8).map(|i| format!("{base}{i}")));
                    ne += 1;
                }
                StandardLattice::Rank1(_) => {
                    out.push(format!("r{nr}"));
                    nr += 1;
                }
            }
        }
        out
    }

    /// `T(S) = Pic(S)^perp` in `H^2`.
    pub fn transcendental(&self) -> Result<Lattice> {
        orthogonal_complement(&self.ambient, self.pic_s.basis())
    }

    pub fn twisted_transcendental(&self) -> Result<TwistedTranscendental> {
        mukai::twisted_transcendental(&self.ambient, &self.transcendental()?, &self.b)
    }

    pub fn twisted_picard(&self) -> Result<Lattice> {
        mukai::twisted_picard(&self.ambient, &self.transcendental()?, &self.b)
    }

    pub fn ns_generators(&self) -> Vec<MukaiVector> {
        ns_generators(&self.pic_s, &self.b)
    }

    /// Integer span of the Neron-Severi generators inside `H*`.
    pub fn ns_lattice(&self) -> Result<Lattice> {
        let gens: Vec<IntVec> = self
            .ns_generators()
            .iter()
            .map(|v| v.to_coords().expect("integral generators"))
            .collect();
        Lattice::span(&self.mukai_gram(), &gens)
    }

    /// `Pic(S,B) ∩ v^perp`.
    pub fn twisted_picard_perp(&self, v: &MukaiVector) -> Result<Lattice> {
        let coords = v
            .to_coords()
            .ok_or_else(|| Error::NonIntegral(format!("v = {v}")))?;
        self.twisted_picard()?.orthogonal_within(&[coords])
    }

    pub fn brauer_kernel(&self) -> Result<BrauerKernel> {
        mukai::brauer_kernel(&self.ambient, &self.transcendental()?, &self.b)
    }

    fn rationals(v: &[BigInt]) -> Vec<Rational> {
        v.iter().cloned().map(Rational::from_integer).collect()
    }

    pub fn h_rational(&self) -> Vec<Rational> {
        Self::rationals(&self.h)
    }

    pub fn k_rational(&self) -> Vec<Rational> {
        Self::rationals(&self.k)
    }

    /// `B + K/2 + h/4`, the real part of the exponent in the central charge.
    pub fn real_shift(&self) -> Vec<Rational> {
        let (half, quarter) = (rat(1, 2), rat(1, 4));
        self.b
            .vector()
            .iter()
            .zip(&self.k)
            .zip(&self.h)
            .map(|((b, k), h)| {
                b + Rational::from_integer(k.clone()) * &half
                    + Rational::from_integer(h.clone()) * &quarter
            })
            .collect()
    }
}

pub fn build_default_scenario() -> Scenario {
    Scenario::from_spec(&ScenarioSpec::standard()).expect("default scenario is valid")
}

/// The `s` making `(r, c, s)` spherical: `c.c - 2rs = -2`.
pub fn spherical_s(r: &Rational, c: &[Rational], h2: &Gram) -> Result<Rational> {
    if r.is_zero() {
        return Err(Error::ZeroRank);
    }
    let cc = h2.pair_rational(c, c)?;
    Ok((cc + int(2)) / (int(2) * r))
}

/// `v(E_j) = (2, K + j h + 2B, s_j)` with `s_j` forced by sphericity.
pub fn vector_e(j: u8, sc: &Scenario) -> Result<MukaiVector> {
    let jr = int(i64::from(j));
    let two = int(2);
    let c: Vec<Rational> = sc
        .b
        .vector()
        .iter()
        .zip(sc.k.iter())
        .zip(sc.h.iter())
        .map(|((b, k), h)| {
            Rational::from_integer(k.clone()) + &jr * Rational::from_integer(h.clone()) + &two * b
        })
        .collect();
    let s = spherical_s(&two, &c, &sc.ambient)?;
    let v = MukaiVector::new(two, c, s);
    if !v.is_integral() {
        return Err(Error::NonIntegral(format!("v(E{j}) = {v}")));
    }
    Ok(v)
}

/// `(B + K/2 + h/4) . h`.
pub fn slope_threshold(sc: &Scenario) -> Rational {
    sc.ambient
        .pair_rational(&sc.real_shift(), &sc.h_rational())
        .expect("dimensions agree")
}

/// `v(J_l) = (0, h, mu)`.
pub fn vector_j(sc: &Scenario) -> Result<MukaiVector> {
    let mu = slope_threshold(sc);
    if !mu.is_integer() {
        return Err(Error::NonIntegral(format!("mu = {mu}")));
    }
    Ok(MukaiVector::new(Rational::zero(), sc.h_rational(), mu))
}

/// Twisted slope `c.h / r`.
pub fn slope(v: &MukaiVector, sc: &Scenario) -> Result<Rational> {
    if v.r.is_zero() {
        return Err(Error::ZeroRank);
    }
    Ok(sc.ambient.pair_rational(&v.c, &sc.h_rational())? / &v.r)
}

/// Twists `a_i` of a split bundle `sum O(a_i h)` on the projective plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistProfile(pub Vec<i64>);

impl TwistProfile {
    /// Even Clifford part: `O + O(-h)^3 + O(-2h)^3 + O(-3h)`.
    pub fn b0() -> Self {
        TwistProfile(alloc::vec![0, -1, -1, -1, -2, -2, -2, -3])
    }

    /// Odd Clifford part: `O^3 + O(-h)^2 + O(-2h)^3`.
    pub fn b1() -> Self {
        TwistProfile(alloc::vec![0, 0, 0, -1, -1, -2, -2, -2])
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "B0" => Some(Self::b0()),
            "B1" => Some(Self::b1()),
            _ => None,
        }
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

/// Euler characteristic on the plane: `sum (a+1)(a+2)/2`.
pub fn chi_p2(profile: &TwistProfile) -> i64 {
    profile.0.iter().map(|&a| (a + 1) * (a + 2) / 2).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mukai::mukai_pairing;
    use alloc::string::ToString;

    fn e(n: usize, idx: &[(usize, i64)]) -> Vec<Rational> {
        unit(n, idx).into_iter().map(int).collect()
    }

    #[test]
    fn default_invariants() {
        let sc = build_default_scenario();
        let g = sc.ambient();
        assert_eq!(g.pair(sc.h(), sc.h()).unwrap(), BigInt::from(2));
        assert_eq!(sc.b().pair(g, sc.h()).unwrap(), rat(1, 2));
        assert_eq!(g.pair(sc.lambda(), sc.lambda()).unwrap(), BigInt::from(2));
        assert_eq!(sc.b().order(), 2);
        assert_eq!(sc.labels()[..4], ["e1", "e2", "f1", "f2"]);
    }

    #[test]
    fn spherical_completions() {
        let sc = build_default_scenario();
        let g = sc.ambient();
        // c = e2 + f1 + f2
        assert_eq!(
            spherical_s(&int(2), &e(22, &[(1, 1), (2, 1), (3, 1)]), g).unwrap(),
            int(1)
        );
        // c = e1 + 2e2 + f1 + f2
        assert_eq!(
            spherical_s(&int(2), &e(22, &[(0, 1), (1, 2), (2, 1), (3, 1)]), g).unwrap(),
            int(2)
        );
        assert_eq!(spherical_s(&int(1), &e(22, &[]), g).unwrap(), int(1));
        assert_eq!(spherical_s(&int(0), &e(22, &[]), g), Err(Error::ZeroRank));
    }

    #[test]
    fn clifford_vectors() {
        let sc = build_default_scenario();
        let e0 = vector_e(0, &sc).unwrap();
        let e1 = vector_e(1, &sc).unwrap();
        assert_eq!(
            e0,
            MukaiVector::from_ints(2, &unit(22, &[(1, 1), (2, 1), (3, 1)]), 1)
        );
        assert_eq!(
            e1,
            MukaiVector::from_ints(2, &unit(22, &[(0, 1), (1, 2), (2, 1), (3, 1)]), 2)
        );
        assert_eq!(mukai_pairing(&e0, &e1, sc.ambient()).unwrap(), int(-3));
        let j = vector_j(&sc).unwrap();
        assert_eq!(
            j,
            MukaiVector::from_ints(0, &unit(22, &[(0, 1), (1, 1)]), 1)
        );
        assert_eq!(j, e1.sub(&e0));
        assert_eq!(mukai_pairing(&j, &j, sc.ambient()).unwrap(), int(2));
    }

    #[test]
    fn slopes_and_threshold() {
        let sc = build_default_scenario();
        assert_eq!(slope(&vector_e(0, &sc).unwrap(), &sc).unwrap(), rat(1, 2));
        assert_eq!(slope(&vector_e(1, &sc).unwrap(), &sc).unwrap(), rat(3, 2));
        assert_eq!(slope_threshold(&sc), int(1));
        let v = MukaiVector::from_ints(1, &unit(22, &[(0, 1), (1, 1)]), 0);
        assert_eq!(slope(&v, &sc).unwrap(), int(2));
        assert_eq!(slope(&vector_j(&sc).unwrap(), &sc), Err(Error::ZeroRank));
        // K = h has K.h = 2
        let sk = sc.with_k(&unit(22, &[(0, 1), (1, 1)])).unwrap();
        assert_eq!(slope_threshold(&sk), int(2));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(chi_p2(&TwistProfile::b0()), 2);
        assert_eq!(chi_p2(&TwistProfile::b1()), 3);
        assert_eq!(chi_p2(&TwistProfile(alloc::vec![0])), 1);
        assert_eq!(TwistProfile::b0().rank(), 8);
        assert_eq!(TwistProfile::b1().rank(), 8);
        assert!(TwistProfile::preset("B2").is_none());
    }

    #[test]
    fn validation_messages() {
        let mut spec = ScenarioSpec::standard();
        spec.h = unit(22, &[(0, 1), (1, 2)]);
        spec.pic_generators = alloc::vec![spec.h.clone()];
        assert_eq!(
            Scenario::from_spec(&spec).unwrap_err().to_string(),
            "invariant violated: h.h != 2"
        );

        let mut spec = ScenarioSpec::standard();
        spec.lambda = unit(22, &[(2, 1)]);
        assert_eq!(
            Scenario::from_spec(&spec).unwrap_err().to_string(),
            "invariant violated: lambda.lambda != 2"
        );

        let mut spec = ScenarioSpec::standard();
        spec.k = unit(22, &[(4, 1)]);
        assert_eq!(
            Scenario::from_spec(&spec).unwrap_err().to_string(),
            "invariant violated: K not in Pic(S)"
        );

        let mut spec = ScenarioSpec::standard();
        spec.b_num = unit(22, &[(1, 1)]);
        spec.b_den = 4;
        assert!(Scenario::from_spec(&spec)
            .unwrap_err()
            .to_string()
            .contains("B.h != 1/2"));

        let mut spec = ScenarioSpec::standard();
        spec.ambient.push(String::from("E7"));
        assert!(Scenario::from_spec(&spec).is_err());
    }

    #[test]
    fn trivial_b_field_is_accepted() {
        let mut spec = ScenarioSpec::standard();
        spec.b_num = unit(22, &[]);
        spec.b_den = 1;
        let sc = Scenario::from_spec(&spec).unwrap();
        assert!(!sc.beta_nontrivial());
        assert!(vector_j(&sc).is_err());
        assert!(vector_e(0, &sc).is_err());
    }
}
