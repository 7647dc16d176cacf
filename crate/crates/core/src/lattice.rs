//! Integral lattices given by a Gram matrix and sublattices embedded in them.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, IntVec};
use crate::scalar::Rational;

/// Negated Cartan matrix of E8, Bourbaki node order: 1-3-4-5-6-7-8 is the
/// long chain and node 2 hangs off node 4.
pub const E8_NEG: [[i64; 8]; 8] = [
    [-2, 0, 1, 0, 0, 0, 0, 0],
    [0, -2, 0, 1, 0, 0, 0, 0],
    [1, 0, -2, 1, 0, 0, 0, 0],
    [0, 1, 1, -2, 1, 0, 0, 0],
    [0, 0, 0, 1, -2, 1, 0, 0],
    [0, 0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 0, 1, -2, 1],
    [0, 0, 0, 0, 0, 0, 1, -2],
];

/// Named building blocks for ambient lattices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StandardLattice {
    /// Hyperbolic plane `[[0,1],[1,0]]`.
    U,
    E8Neg,
    Rank1(i64),
}

impl StandardLattice {
    pub fn gram(&self) -> Gram {
        match self {
            StandardLattice::U => Gram::from_rows(&[&[0, 1], &[1, 0]]),
            StandardLattice::E8Neg => {
                let rows: Vec<&[i64]> = E8_NEG.iter().map(|r| r.as_slice()).collect();
                Gram::from_rows(&rows)
            }
            StandardLattice::Rank1(k) => Gram::from_rows(&[&[*k]]),
        }
    }
}

impl FromStr for StandardLattice {
    type Err = Error;

    /// `U`, `E8neg` or `rank1(k)`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "U" => Ok(StandardLattice::U),
            "E8neg" => Ok(StandardLattice::E8Neg),
            other => {
                let k = other
                    .strip_prefix("rank1(")
                    .and_then(|t| t.strip_suffix(')'))
                    .and_then(|t| t.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(alloc::format!("unknown lattice `{other}`")))?;
                Ok(StandardLattice::Rank1(k))
            }
        }
    }
}

impl fmt::Display for StandardLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardLattice::U => f.write_str("U"),
            StandardLattice::E8Neg => f.write_str("E8neg"),
            StandardLattice::Rank1(k) => write!(f, "rank1({k})"),
        }
    }
}

pub fn standard_lattice(name: &str) -> Result<Gram> {
    Ok(name.parse::<StandardLattice>()?.gram())
}

/// Symmetric integer matrix of a bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gram {
    entries: Vec<IntVec>,
}

/// Inertia `(positive, negative, zero)` of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

impl Gram {
    pub fn new(entries: Vec<IntVec>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Gram { entries })
    }

    /// Panics if the rows are not a symmetric square matrix.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| intmat::from_i64(r)).collect())
            .expect("symmetric square matrix")
    }

    /// Row-major flat integer array of length `n*n`.
    pub fn from_flat(values: &[i64]) -> Result<Self> {
        let n = values.len().sqrt();
        if n * n != values.len() {
            return Err(Error::NotSquare);
        }
        Self::new(
            values
                .chunks(n.max(1))
                .take(n)
                .map(intmat::from_i64)
                .collect(),
        )
    }

    pub fn hyperbolic() -> Self {
        StandardLattice::U.gram()
    }

    pub fn e8_negative() -> Self {
        StandardLattice::E8Neg.gram()
    }

    pub fn rank_one(k: i64) -> Self {
        StandardLattice::Rank1(k).gram()
    }

    pub fn empty() -> Self {
        Gram {
            entries: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[IntVec] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    /// Row-major entries as machine integers, if they fit.
    pub fn to_flat_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().flatten().map(|x| x.to_i64()).collect()
    }

    pub fn direct_sum(&self, other: &Gram) -> Gram {
        let (n, m) = (self.rank(), other.rank());
        let mut entries = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            entries[i][..n].clone_from_slice(&self.entries[i]);
        }
        for i in 0..m {
            entries[n + i][n..].clone_from_slice(&other.entries[i]);
        }
        Gram { entries }
    }

    pub fn det(&self) -> BigInt {
        intmat::det(&self.entries)
    }

    pub fn is_even(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| r[i].is_even())
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: len,
            });
        }
        Ok(())
    }

    /// `x^T G` as a row vector.
    pub fn apply(&self, x: &[BigInt]) -> IntVec {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(g, v)| g * v).sum())
            .collect()
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self.apply(x).iter().zip(y).map(|(a, b)| a * b).sum())
    }

    pub fn pair_rational(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        let mut acc = Rational::zero();
        for (i, row) in self.entries.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut inner = Rational::zero();
            for (j, g) in row.iter().enumerate() {
                if !g.is_zero() && !y[j].is_zero() {
                    inner += &y[j] * Rational::from_integer(g.clone());
                }
            }
            acc += &x[i] * inner;
        }
        Ok(acc)
    }

    /// `A^T G A` for the columns of `A` given as row vectors `basis`.
    pub fn congruent(&self, basis: &[IntVec]) -> Gram {
        let images: Vec<IntVec> = basis.iter().map(|b| self.apply(b)).collect();
        let entries = images
            .iter()
            .map(|gb| {
                basis
                    .iter()
                    .map(|c| gb.iter().zip(c).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        Gram { entries }
    }

    /// Exact inertia by symmetric congruence reduction over the rationals.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .entries
            .iter()
            .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        let mut sig = Signature {
            positive: 0,
            negative: 0,
            zero: 0,
        };
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            let diag = active.iter().copied().find(|&i| !a[i][i].is_zero());
            let pivot = match diag {
                Some(p) => p,
                None => {
                    let off = active.iter().copied().find_map(|i| {
                        active
                            .iter()
                            .copied()
                            .find(|&j| j != i && !a[i][j].is_zero())
                            .map(|j| (i, j))
                    });
                    let Some((i, j)) = off else {
                        sig.zero += active.len();
                        break;
                    };
                    // e_i <- e_i + e_j gives a nonzero diagonal 2 a_ij
                    for k in 0..n {
                        let v = a[j][k].clone();
                        a[i][k] += v;
                    }
                    for k in 0..n {
                        let v = a[k][j].clone();
                        a[k][i] += v;
                    }
                    i
                }
            };
            let p = a[pivot][pivot].clone();
            if p.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            active.retain(|&k| k != pivot);
            for &i in &active {
                if a[i][pivot].is_zero() {
                    continue;
                }
                let f = &a[i][pivot] / &p;
                for &j in &active {
                    let v = &f * &a[pivot][j];
                    a[i][j] -= v;
                }
            }
            for &i in &active {
                a[i][pivot] = Rational::zero();
                a[pivot][i] = Rational::zero();
            }
        }
        sig
    }
}

impl fmt::Display for Gram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// A sublattice of an ambient Gram lattice, stored by a Hermite basis in
/// ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: Gram,
    basis: Vec<IntVec>,
    pivots: Vec<usize>,
}

impl Lattice {
    /// Integer span of `generators`, with a Hermite basis.
    pub fn span(ambient: &Gram, generators: &[IntVec]) -> Result<Self> {
        for g in generators {
            ambient.check_dim(g.len())?;
        }
        let (basis, pivots) = intmat::hnf_basis(generators);
        if basis.is_empty() {
            return Err(Error::ZeroSpan);
        }
        Ok(Lattice {
            ambient: ambient.clone(),
            basis,
            pivots,
        })
    }

    /// Span that may be the zero lattice.
    fn span_or_zero(ambient: &Gram, generators: &[IntVec]) -> Self {
        let (basis, pivots) = intmat::hnf_basis(generators);
        Lattice {
            ambient: ambient.clone(),
            basis,
            pivots,
        }
    }

    pub fn full(ambient: &Gram) -> Self {
        let n = ambient.rank();
        let gens: Vec<IntVec> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::span_or_zero(ambient, &gens)
    }

    pub fn ambient(&self) -> &Gram {
        &self.ambient
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Induced Gram matrix on the stored basis.
    pub fn gram(&self) -> Gram {
        self.ambient.congruent(&self.basis)
    }

    /// Signed determinant of the induced Gram matrix.
    pub fn discriminant(&self) -> BigInt {
        self.gram().det()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient.rank() && intmat::in_span(&self.basis, &self.pivots, v)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Same set of vectors (mutual containment).
    pub fn same_as(&self, other: &Lattice) -> bool {
        self.contains_lattice(other) && other.contains_lattice(self)
    }

    /// Index `[sup : self]` when `self` is a finite-index sublattice of `sup`.
    pub fn index_in(&self, sup: &Lattice) -> Option<BigInt> {
        if self.rank() != sup.rank() || !sup.contains_lattice(self) {
            return None;
        }
        let minor = |l: &Lattice| -> BigInt {
            let rows: Vec<IntVec> = l
                .basis
                .iter()
                .map(|b| sup.pivots.iter().map(|&c| b[c].clone()).collect())
                .collect();
            intmat::det(&rows)
        };
        let (num, den) = (minor(self), minor(sup));
        if den.is_zero() {
            return None;
        }
        Some((num / den).abs())
    }

    /// Primitive closure (rational span intersected with the ambient integer
    /// lattice) and the index of `self` inside it.
    pub fn saturation(&self) -> (Lattice, BigInt) {
        let n = self.ambient.rank();
        // vectors annihilated by the standard dot product with the basis
        let perp = intmat::kernel(&self.basis, n);
        let closure = intmat::kernel(&perp, n);
        let sat = Self::span_or_zero(&self.ambient, &closure);
        let index = self.index_in(&sat).unwrap_or_else(BigInt::one);
        (sat, index)
    }

    pub fn is_primitive(&self) -> bool {
        self.saturation().1.is_one()
    }

    /// Vectors of this lattice orthogonal to all `vectors` under the ambient form.
    pub fn orthogonal_within(&self, vectors: &[IntVec]) -> Result<Lattice> {
        for v in vectors {
            self.ambient.check_dim(v.len())?;
        }
        let images: Vec<IntVec> = vectors.iter().map(|v| self.ambient.apply(v)).collect();
        // coefficient vectors c with sum_k c_k <b_k, v_i> = 0
        let rows: Vec<IntVec> = images
            .iter()
            .map(|gv| {
                self.basis
                    .iter()
                    .map(|b| b.iter().zip(gv).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect();
        let coeffs = intmat::kernel(&rows, self.rank());
        let gens: Vec<IntVec> = coeffs
            .iter()
            .map(|c| {
                let mut v = vec![BigInt::zero(); self.ambient.rank()];
                for (ck, b) in c.iter().zip(&self.basis) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += ck * bi;
                    }
                }
                v
            })
            .collect();
        Ok(Self::span_or_zero(&self.ambient, &gens))
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Orthogonal complement of `vectors` in the full ambient lattice; always
/// primitive.
pub fn orthogonal_complement(ambient: &Gram, vectors: &[IntVec]) -> Result<Lattice> {
    Lattice::full(ambient).orthogonal_within(vectors)
}

pub fn sublattice_span(ambient: &Gram, generators: &[IntVec]) -> Result<Lattice> {
    Lattice::span(ambient, generators)
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {} lattice with Gram {}", self.rank(), self.gram())
    }
}

/// Verdict of a representability query for a binary form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `Q(a, b) = target` at the witness.
    Yes(BigInt, BigInt),
    /// No value of the form is congruent to the target modulo this number.
    NoByCongruence(u64),
    /// Definite form, enumeration complete within the given box.
    NoByExhaustion(u64),
    Inconclusive,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Yes(a, b) => write!(f, "Yes(({a},{b}))"),
            Representation::NoByCongruence(m) => write!(f, "NoByCongruence({m})"),
            Representation::NoByExhaustion(b) => write!(f, "NoByExhaustion({b})"),
            Representation::Inconclusive => f.write_str("Inconclusive"),
        }
    }
}

const MAX_MODULUS: u64 = 64;

fn binary_value(g: &Gram, a: &BigInt, b: &BigInt) -> BigInt {
    g.entry(0, 0) * a * a + BigInt::from(2) * g.entry(0, 1) * a * b + g.entry(1, 1) * b * b
}

/// Signed integers ordered 0, 1, -1, 2, -2, ... up to `k`.
fn centered(k: i64) -> impl Iterator<Item = i64> {
    core::iter::once(0).chain((1..=k).flat_map(|i| [i, -i]))
}

fn find_witness(g: &Gram, target: &BigInt, bound: u64) -> Option<(BigInt, BigInt)> {
    let bound = bound as i64;
    for k in 0..=bound {
        for a in centered(k) {
            for b in centered(k) {
                if a.abs() != k && b.abs() != k {
                    continue;
                }
                let (a, b) = (BigInt::from(a), BigInt::from(b));
                if &binary_value(g, &a, &b) == target {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

fn congruence_obstruction(g: &Gram, target: &BigInt) -> Option<u64> {
    (2..=MAX_MODULUS).find(|&m| {
        let md = BigInt::from(m);
        let red = |x: &BigInt| x.mod_floor(&md).to_u64().unwrap_or(0);
        let (p, q, r) = (red(g.entry(0, 0)), red(g.entry(0, 1)), red(g.entry(1, 1)));
        let t = red(target);
        !(0..m).any(|a| (0..m).any(|b| (p * a * a + 2 * q * a * b + r * b * b) % m == t))
    })
}

/// Box that provably contains every solution of `Q(a,b) = t` for a definite form.
fn definite_box(g: &Gram, target: &BigInt) -> Option<u64> {
    let det = g.det();
    if !det.is_positive() {
        return None;
    }
    let g11 = g.entry(0, 0);
    let t = if g11.is_positive() {
        target.clone()
    } else {
        -target
    };
    if t.is_negative() {
        return Some(0);
    }
    // g11 * Q = (g11 a + g12 b)^2 + det * b^2, so b^2 <= |g11| t / det, and symmetrically
    let b2 = (g11.abs() * &t) / &det;
    let a2 = (g.entry(1, 1).abs() * &t) / &det;
    let bound = b2.max(a2).sqrt() + BigInt::one();
    bound.to_u64()
}

/// Decides whether the binary form `g` takes the value `target`.
///
/// Returns a witness when one is found with `|a|, |b| <= search_bound`, a
/// modulus obstructing the target when one exists below 64, and for definite
/// forms the outcome of a complete enumeration. The verdict never claims
/// non-representability without a proof.
pub fn represents(g: &Gram, target: i64, search_bound: u64) -> Result<Representation> {
    if g.rank() != 2 {
        return Err(Error::NotBinary);
    }
    let t = BigInt::from(target);
    if let Some((a, b)) = find_witness(g, &t, search_bound) {
        return Ok(Representation::Yes(a, b));
    }
    if let Some(m) = congruence_obstruction(g, &t) {
        return Ok(Representation::NoByCongruence(m));
    }
    if let Some(bound) = definite_box(g, &t) {
        if bound <= search_bound {
            return Ok(Representation::NoByExhaustion(bound));
        }
        return Ok(match find_witness(g, &t, bound) {
            Some((a, b)) => Representation::Yes(a, b),
            None => Representation::NoByExhaustion(bound),
        });
    }
    Ok(Representation::Inconclusive)
}

pub fn signature(g: &Gram) -> Signature {
    g.signature()
}

pub fn discriminant(l: &Lattice) -> BigInt {
    l.discriminant()
}

/// Human-readable vector list, used in reports.
pub fn format_vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    alloc::format!("({})", parts.join(","))
}
