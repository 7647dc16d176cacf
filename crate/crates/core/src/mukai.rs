//! The Mukai lattice `H^0 + H^2 + H^4` over an `H^2` lattice, B-fields and
//! the twisted transcendental and Picard lattices.
//!
//! Mukai-lattice coordinates are ordered `(r, c_1, ..., c_n, s)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, IntVec};
use crate::lattice::{orthogonal_complement, Gram, Lattice};
use crate::scalar::{int, Rational};

/// Mukai vector `(r, c, s)` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: Rational,
    pub c: Vec<Rational>,
    pub s: Rational,
}

fn to_rationals(v: &[BigInt]) -> Vec<Rational> {
    v.iter().cloned().map(Rational::from_integer).collect()
}

fn as_integer(x: &Rational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

impl MukaiVector {
    pub fn new(r: Rational, c: Vec<Rational>, s: Rational) -> Self {
        MukaiVector { r, c, s }
    }

    pub fn from_ints(r: i64, c: &[i64], s: i64) -> Self {
        MukaiVector {
            r: int(r),
            c: c.iter().map(|&x| int(x)).collect(),
            s: int(s),
        }
    }

    pub fn zero(dim: usize) -> Self {
        MukaiVector {
            r: Rational::zero(),
            c: alloc::vec![Rational::zero(); dim],
            s: Rational::zero(),
        }
    }

    /// `(0, x, 0)` for an integral `H^2` class.
    pub fn from_h2(x: &[BigInt]) -> Self {
        MukaiVector {
            r: Rational::zero(),
            c: to_rationals(x),
            s: Rational::zero(),
        }
    }

    /// Point class `(0, 0, 1)`.
    pub fn point(dim: usize) -> Self {
        let mut v = Self::zero(dim);
        v.s = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// True when the vector lies in the integral lattice `H*(S, Z)`.
    pub fn is_integral(&self) -> bool {
        self.r.is_integer() && self.s.is_integer() && self.c.iter().all(|x| x.is_integer())
    }

    /// Integral coordinates `(r, c, s)`, when integral.
    pub fn to_coords(&self) -> Option<IntVec> {
        let mut out = Vec::with_capacity(self.dim() + 2);
        out.push(as_integer(&self.r)?);
        for x in &self.c {
            out.push(as_integer(x)?);
        }
        out.push(as_integer(&self.s)?);
        Some(out)
    }

    pub fn from_coords(v: &[BigInt]) -> Self {
        let n = v.len() - 2;
        MukaiVector {
            r: Rational::from_integer(v[0].clone()),
            c: to_rationals(&v[1..=n]),
            s: Rational::from_integer(v[n + 1].clone()),
        }
    }

    /// Membership in a lattice of `H*` (for example the twisted Picard lattice).
    pub fn lies_in(&self, l: &Lattice) -> bool {
        self.to_coords().is_some_and(|x| l.contains(&x))
    }

    pub fn add(&self, other: &Self) -> Self {
        MukaiVector {
            r: &self.r + &other.r,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
            s: &self.s + &other.s,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        MukaiVector {
            r: &self.r * k,
            c: self.c.iter().map(|x| x * k).collect(),
            s: &self.s * k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.c.iter().all(Zero::is_zero)
    }

    fn flat(&self) -> Vec<&Rational> {
        let mut v = Vec::with_capacity(self.dim() + 2);
        v.push(&self.r);
        v.extend(self.c.iter());
        v.push(&self.s);
        v
    }

    /// Rational proportionality, the zero vector counting as proportional to all.
    pub fn is_proportional(&self, other: &Self) -> bool {
        let (a, b) = (self.flat(), other.flat());
        if a.len() != b.len() {
            return false;
        }
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if a[i] * b[j] != a[j] * b[i] {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for MukaiVector {
    /// `(r,[c_1,...,c_n],s)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},[", self.r)?;
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "],{})", self.s)
    }
}

/// Rational `H^2` class `B` together with its order `d`, the least positive
/// integer making `d * B` integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BField {
    v: Vec<Rational>,
    order: u64,
}

impl BField {
    pub fn new(v: Vec<Rational>) -> Result<Self> {
        let mut d = BigInt::one();
        for x in &v {
            d = d.lcm(x.denom());
        }
        let order = d
            .to_u64()
            .ok_or_else(|| Error::NonIntegral(String::from("B-field order")))?;
        Ok(BField { v, order })
    }

    /// `num / den` coordinatewise.
    pub fn from_parts(num: &[i64], den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::Invariant(String::from("B_den must be positive")));
        }
        Self::new(num.iter().map(|&x| crate::scalar::rat(x, den)).collect())
    }

    pub fn trivial(dim: usize) -> Self {
        BField {
            v: alloc::vec![Rational::zero(); dim],
            order: 1,
        }
    }

    pub fn vector(&self) -> &[Rational] {
        &self.v
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `d * B` as an integral vector.
    pub fn scaled(&self) -> IntVec {
        let d = Rational::from_integer(BigInt::from(self.order));
        self.v.iter().map(|x| (x * &d).to_integer()).collect()
    }

    /// `B . x` for an integral class `x`.
    pub fn pair(&self, h2: &Gram, x: &[BigInt]) -> Result<Rational> {
        h2.pair_rational(&self.v, &to_rationals(x))
    }
}

/// Gram matrix of the Mukai pairing on `H*` built over `h2`.
pub fn mukai_gram(h2: &Gram) -> Gram {
    let n = h2.rank();
    let mut rows: Vec<IntVec> = alloc::vec![alloc::vec![BigInt::zero(); n + 2]; n + 2];
    for i in 0..n {
        for j in 0..n {
            rows[i + 1][j + 1] = h2.entry(i, j).clone();
        }
    }
    rows[0][n + 1] = BigInt::from(-1);
    rows[n + 1][0] = BigInt::from(-1);
    Gram::new(rows).expect("symmetric by construction")
}

/// `<v, w> = c_v . c_w - r_v s_w - r_w s_v`.
pub fn mukai_pairing(v: &MukaiVector, w: &MukaiVector, h2: &Gram) -> Result<Rational> {
    let cc = h2.pair_rational(&v.c, &w.c)?;
    Ok(cc - &v.r * &w.s - &w.r * &v.s)
}

/// `exp(D) = (1, D, D.D/2)`.
pub fn exp_class(d: &[Rational], h2: &Gram) -> Result<MukaiVector> {
    let sq = h2.pair_rational(d, d)?;
    Ok(MukaiVector {
        r: Rational::one(),
        c: d.to_vec(),
        s: sq / int(2),
    })
}

/// Product `v . exp(D) = (r, c + rD, s + c.D + r D.D/2)`.
pub fn twist_by(v: &MukaiVector, d: &[Rational], h2: &Gram) -> Result<MukaiVector> {
    let cd = h2.pair_rational(&v.c, d)?;
    let dd = h2.pair_rational(d, d)?;
    Ok(MukaiVector {
        r: v.r.clone(),
        c: v.c.iter().zip(d).map(|(c, x)| c + &v.r * x).collect(),
        s: &v.s + cd + &v.r * dd / int(2),
    })
}

/// Twisted transcendental lattice with the index of its `H^2` projection in
/// the untwisted transcendental lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedTranscendental {
    pub lattice: Lattice,
    /// `[T(S) : {x in T(S) : B.x in Z}]`; 1 iff `B` restricts trivially.
    pub index: BigInt,
    /// The `H^2` lattice `{x in T(S) : B.x in Z}`.
    pub untwisted_part: Lattice,
}

/// `{x in ts : B.x in Z}`.
fn integral_pairing_sublattice(h2: &Gram, ts: &Lattice, b: &BField) -> Result<Lattice> {
    let d = BigInt::from(b.order());
    let db = b.scaled();
    // k_i = (dB).t_i; need sum a_i k_i = d y for integers a, y
    let mut row: IntVec = ts
        .basis()
        .iter()
        .map(|t| h2.pair(&db, t))
        .collect::<Result<_>>()?;
    row.push(-d);
    let sols = intmat::kernel(&[row], ts.rank() + 1);
    let gens: Vec<IntVec> = sols
        .iter()
        .map(|a| {
            let mut x = alloc::vec![BigInt::zero(); h2.rank()];
            for (ak, t) in a.iter().zip(ts.basis()) {
                for (xi, ti) in x.iter_mut().zip(t) {
                    *xi += ak * ti;
                }
            }
            x
        })
        .collect();
    Lattice::span(h2, &gens)
}

/// The lattice `{(0, x, B.x) : x in TS, B.x in Z}` inside `H*`.
pub fn twisted_transcendental(
    h2: &Gram,
    ts: &Lattice,
    b: &BField,
) -> Result<TwistedTranscendental> {
    if ts.ambient() != h2 {
        return Err(Error::DimensionMismatch {
            expected: h2.rank(),
            found: ts.ambient().rank(),
        });
    }
    if ts.discriminant().is_zero() {
        return Err(Error::Degenerate);
    }
    let part = integral_pairing_sublattice(h2, ts, b)?;
    let index = part.index_in(ts).ok_or(Error::Degenerate)?;
    let n = h2.rank();
    let lifted: Vec<IntVec> = part
        .basis()
        .iter()
        .map(|x| {
            let bx = b.pair(h2, x)?;
            let mut v = Vec::with_capacity(n + 2);
            v.push(BigInt::zero());
            v.extend(x.iter().cloned());
            v.push(bx.to_integer());
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let lattice = Lattice::span(&mukai_gram(h2), &lifted)?;
    Ok(TwistedTranscendental {
        lattice,
        index,
        untwisted_part: part,
    })
}

/// Orthogonal complement of the twisted transcendental lattice in `H*`.
pub fn twisted_picard(h2: &Gram, ts: &Lattice, b: &BField) -> Result<Lattice> {
    let t = twisted_transcendental(h2, ts, b)?;
    orthogonal_complement(&mukai_gram(h2), t.lattice.basis())
}

/// `(0, x, 0)` for a basis of `pic`, then `(d, dB, 0)` and `(0, 0, 1)`.
pub fn ns_generators(pic: &Lattice, b: &BField) -> Vec<MukaiVector> {
    let dim = pic.ambient().rank();
    let mut out: Vec<MukaiVector> = pic
        .basis()
        .iter()
        .map(|x| MukaiVector::from_h2(x))
        .collect();
    out.push(MukaiVector {
        r: Rational::from_integer(BigInt::from(b.order())),
        c: to_rationals(&b.scaled()),
        s: Rational::zero(),
    });
    out.push(MukaiVector::point(dim));
    out
}

/// Kernel of the Brauer pairing `x -> (dB).x mod d` on the transcendental lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerKernel {
    pub kernel: Lattice,
    pub surjective: bool,
    pub index: BigInt,
}

pub fn brauer_kernel(h2: &Gram, ts: &Lattice, b: &BField) -> Result<BrauerKernel> {
    if b.order() > 2 {
        return Err(Error::UnsupportedOrder(b.order()));
    }
    let kernel = integral_pairing_sublattice(h2, ts, b)?;
    let index = kernel.index_in(ts).ok_or(Error::Degenerate)?;
    Ok(BrauerKernel {
        surjective: !index.is_one(),
        kernel,
        index,
    })
}

/// Describes an integral vector relative to named basis labels, e.g. `e1+2e2`.
pub fn describe_h2(v: &[BigInt], labels: &[String]) -> String {
    let mut out = String::new();
    for (x, name) in v.iter().zip(labels) {
        if x.is_zero() {
            continue;
        }
        let coeff = if x.abs().is_one() {
            String::new()
        } else {
            format!("{}", x.abs())
        };
        let sign = if x.is_negative() {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        out.push_str(&format!("{sign}{coeff}{name}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
