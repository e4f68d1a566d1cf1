//! Cohomology ring, curve classes and dimension formulas of Pⁿ and of Pⁿ
//! blown up at a point.
//!
//! The basis is `H_0..H_n` (with `H_i = H^i`) and, on the blow-up,
//! `E_1..E_{n-1}` with `E_i = -(-E)^i`. The relations `H·E = 0`,
//! `H^{n+1} = 0` and `E^n = (-1)^{n-1} H^n` give
//!
//! * `H_i·H_j = H_{i+j}` (zero past `n`),
//! * `E_i·E_j = -E_{i+j}` below `n`, `-H_n` at `n`, zero past it,
//! * `H_i·E_j = 0` for `i, j ≥ 1`.
//!
//! Curve classes are written `β = dH' - eE'`, so that `H·β = d` and
//! `E·β = e`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension n = {0} is not supported (need n >= 2)")]
    DimensionTooSmall(u32),
    #[error("classes belong to different geometries ({0} vs {1})")]
    Mismatch(Geometry, Geometry),
    #[error("{class} is not a basis class of {geom}")]
    NotInBasis { class: BasisIndex, geom: Geometry },
    #[error("cannot parse class token `{0}`")]
    BadClassToken(String),
    #[error("curve class {beta} is not valid on {geom}")]
    BadCurveClass { beta: CurveClass, geom: Geometry },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Plain,
    Blowup,
}

impl Space {
    pub fn as_str(self) -> &'static str {
        match self {
            Space::Plain => "plain",
            Space::Blowup => "blowup",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Space {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Space::Plain),
            "blowup" | "blow-up" => Ok(Space::Blowup),
            other => Err(format!("unknown space `{other}` (expected plain or blowup)")),
        }
    }
}

/// A projective space `Pⁿ` or its blow-up at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Geometry {
    space: Space,
    n: u32,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.space {
            Space::Plain => write!(f, "P^{}", self.n),
            Space::Blowup => write!(f, "Bl_pt P^{}", self.n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    H,
    E,
}

/// One element of the fixed basis. Ordered by family, then level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub family: Family,
    pub level: u32,
}

impl BasisIndex {
    pub const fn h(level: u32) -> Self {
        BasisIndex { family: Family::H, level }
    }

    pub const fn e(level: u32) -> Self {
        BasisIndex { family: Family::E, level }
    }

    pub fn codim(self) -> u32 {
        self.level
    }

    pub fn is_divisor(self) -> bool {
        self.level == 1
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::H => write!(f, "H{}", self.level),
            Family::E => write!(f, "E{}", self.level),
        }
    }
}

impl FromStr for BasisIndex {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::BadClassToken(s.to_string());
        let t = s.trim();
        let (family, rest) = match t.chars().next() {
            Some('H') | Some('h') => (Family::H, &t[1..]),
            Some('E') | Some('e') => (Family::E, &t[1..]),
            _ => return Err(bad()),
        };
        let level: u32 = rest.parse().map_err(|_| bad())?;
        Ok(BasisIndex { family, level })
    }
}

/// `β = dH' - eE'`. On plain projective space `e` is always zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CurveClass {
    pub d: i64,
    pub e: i64,
}

impl CurveClass {
    pub const ZERO: CurveClass = CurveClass { d: 0, e: 0 };

    pub const fn new(d: i64, e: i64) -> Self {
        CurveClass { d, e }
    }

    pub const fn degree(d: i64) -> Self {
        CurveClass { d, e: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.d == 0 && self.e == 0
    }
}

impl Add for CurveClass {
    type Output = CurveClass;
    fn add(self, o: CurveClass) -> CurveClass {
        CurveClass::new(self.d + o.d, self.e + o.e)
    }
}

impl Sub for CurveClass {
    type Output = CurveClass;
    fn sub(self, o: CurveClass) -> CurveClass {
        CurveClass::new(self.d - o.d, self.e - o.e)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d, self.e)
    }
}

impl Geometry {
    pub fn new(space: Space, n: u32) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::DimensionTooSmall(n));
        }
        Ok(Geometry { space, n })
    }

    pub fn plain(n: u32) -> Result<Self, GeometryError> {
        Self::new(Space::Plain, n)
    }

    pub fn blowup(n: u32) -> Result<Self, GeometryError> {
        Self::new(Space::Blowup, n)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_blowup(&self) -> bool {
        self.space == Space::Blowup
    }

    pub fn basis_len(&self) -> usize {
        match self.space {
            Space::Plain => self.n as usize + 1,
            Space::Blowup => 2 * self.n as usize,
        }
    }

    /// Basis in its total order: `H_0..H_n`, then `E_1..E_{n-1}`.
    pub fn basis(&self) -> Vec<BasisIndex> {
        (0..self.basis_len()).map(|i| self.class_at(i)).collect()
    }

    pub fn class_at(&self, i: usize) -> BasisIndex {
        let n = self.n as usize;
        if i <= n {
            BasisIndex::h(i as u32)
        } else {
            debug_assert!(self.is_blowup() && i < 2 * n);
            BasisIndex::e((i - n) as u32)
        }
    }

    pub fn index_of(&self, b: BasisIndex) -> Option<usize> {
        match b.family {
            Family::H if b.level <= self.n => Some(b.level as usize),
            Family::E if self.is_blowup() && b.level >= 1 && b.level < self.n => Some(self.n as usize + b.level as usize),
            _ => None,
        }
    }

    pub fn contains(&self, b: BasisIndex) -> bool {
        self.index_of(b).is_some()
    }

    pub fn check(&self, b: BasisIndex) -> Result<BasisIndex, GeometryError> {
        if self.contains(b) {
            Ok(b)
        } else {
            Err(GeometryError::NotInBasis { class: b, geom: *self })
        }
    }

    /// Parses `H<k>`, `E<k>` or the alias `pt` (= `H<n>`).
    pub fn parse_class(&self, token: &str) -> Result<BasisIndex, GeometryError> {
        let t = token.trim();
        let b = if t.eq_ignore_ascii_case("pt") { self.point() } else { t.parse()? };
        self.check(b)
    }

    pub fn point(&self) -> BasisIndex {
        BasisIndex::h(self.n)
    }

    /// Divisor classes in basis order.
    pub fn divisors(&self) -> Vec<BasisIndex> {
        match self.space {
            Space::Plain => vec![BasisIndex::h(1)],
            Space::Blowup => vec![BasisIndex::h(1), BasisIndex::e(1)],
        }
    }

    pub fn check_curve(&self, beta: CurveClass) -> Result<CurveClass, GeometryError> {
        if self.space == Space::Plain && beta.e != 0 {
            return Err(GeometryError::BadCurveClass { beta, geom: *self });
        }
        Ok(beta)
    }

    /// Product of two basis elements as `sign · basis`, or `None` when it vanishes.
    pub fn basis_product(&self, a: BasisIndex, b: BasisIndex) -> Option<(BasisIndex, i32)> {
        let n = self.n;
        match (a.family, b.family) {
            (Family::H, Family::H) => (a.level + b.level <= n).then(|| (BasisIndex::h(a.level + b.level), 1)),
            (Family::H, Family::E) | (Family::E, Family::H) => {
                let (h, e) = if a.family == Family::H { (a, b) } else { (b, a) };
                (h.level == 0).then_some((e, 1))
            }
            (Family::E, Family::E) => {
                let k = a.level + b.level;
                if k < n {
                    Some((BasisIndex::e(k), -1))
                } else if k == n {
                    Some((BasisIndex::h(n), -1))
                } else {
                    None
                }
            }
        }
    }

    /// Poincaré pairing on basis elements.
    pub fn pairing(&self, a: BasisIndex, b: BasisIndex) -> i32 {
        if a.family != b.family || a.level + b.level != self.n {
            return 0;
        }
        match a.family {
            Family::H => 1,
            Family::E => -1,
        }
    }

    /// Inverse of the pairing as `(a, b, sign)` triples: the diagonal class is
    /// `Σ sign · a ⊗ b`.
    pub fn diagonal_pairs(&self) -> Vec<(BasisIndex, BasisIndex, i32)> {
        let n = self.n;
        let mut out: Vec<_> = (0..=n).map(|i| (BasisIndex::h(i), BasisIndex::h(n - i), 1)).collect();
        if self.is_blowup() {
            out.extend((1..n).map(|i| (BasisIndex::e(i), BasisIndex::e(n - i), -1)));
        }
        out
    }

    /// `D·β` for a divisor class `D`.
    pub fn curve_pairing(&self, divisor: BasisIndex, beta: CurveClass) -> i64 {
        assert!(divisor.is_divisor(), "{divisor} is not a divisor class");
        match divisor.family {
            Family::H => beta.d,
            Family::E => beta.e,
        }
    }

    /// `-K·β`.
    pub fn anticanonical_degree(&self, beta: CurveClass) -> i64 {
        let n = self.n as i64;
        match self.space {
            Space::Plain => (n + 1) * beta.d,
            Space::Blowup => (n + 1) * beta.d - (n - 1) * beta.e,
        }
    }

    /// Virtual dimension of the space of `num_points`-pointed stable maps.
    pub fn vdim(&self, beta: CurveClass, num_points: usize) -> i64 {
        self.anticanonical_degree(beta) + self.n as i64 - 3 + num_points as i64
    }

    pub fn is_effective(&self, beta: CurveClass) -> bool {
        match self.space {
            Space::Plain => beta.e == 0 && beta.d >= 0,
            Space::Blowup => (beta.d > 0 && beta.e <= beta.d) || (beta.d == 0 && beta.e <= 0),
        }
    }

    /// Pairing with the ample class `2H - E` (or `H` on plain space).
    pub fn mass(&self, beta: CurveClass) -> i64 {
        match self.space {
            Space::Plain => beta.d,
            Space::Blowup => 2 * beta.d - beta.e,
        }
    }

    /// Effective classes of a given mass, in increasing `d`.
    pub fn classes_of_mass(&self, mass: i64) -> Vec<CurveClass> {
        match self.space {
            Space::Plain => vec![CurveClass::degree(mass)],
            Space::Blowup => (0..=mass).map(|d| CurveClass::new(d, 2 * d - mass)).filter(|b| self.is_effective(*b)).collect(),
        }
    }

    /// Ordered pairs of nonzero effective classes summing to `beta`.
    pub fn splittings(&self, beta: CurveClass) -> Vec<(CurveClass, CurveClass)> {
        let mut out = Vec::new();
        if !self.is_effective(beta) || beta.is_zero() {
            return out;
        }
        match self.space {
            Space::Plain => {
                for d1 in 1..beta.d {
                    out.push((CurveClass::degree(d1), CurveClass::degree(beta.d - d1)));
                }
            }
            Space::Blowup => {
                for d1 in 0..=beta.d {
                    let d2 = beta.d - d1;
                    // β₂ effective needs e₂ ≤ d₂, i.e. e₁ ≥ e - d₂
                    let lo = beta.e - d2;
                    let hi = if d1 > 0 { d1 } else { -1 };
                    for e1 in lo..=hi {
                        let b1 = CurveClass::new(d1, e1);
                        let b2 = beta - b1;
                        if !b1.is_zero() && !b2.is_zero() && self.is_effective(b1) && self.is_effective(b2) {
                            out.push((b1, b2));
                        }
                    }
                }
            }
        }
        out
    }

    /// Writes a class of codim ≥ 2 as `γ = s · D·γ'` with `D` a divisor.
    pub fn decompose(&self, gamma: BasisIndex) -> Option<(BasisIndex, BasisIndex, i32)> {
        if gamma.level < 2 || !self.contains(gamma) {
            return None;
        }
        match gamma.family {
            Family::H => Some((BasisIndex::h(1), BasisIndex::h(gamma.level - 1), 1)),
            Family::E => Some((BasisIndex::e(1), BasisIndex::e(gamma.level - 1), -1)),
        }
    }

    pub fn unit(&self, b: BasisIndex) -> CohClass {
        CohClass::basis(*self, b)
    }
}

/// An integral cohomology class in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    geom: Geometry,
    coeffs: BTreeMap<BasisIndex, BigInt>,
}

impl CohClass {
    pub fn zero(geom: Geometry) -> Self {
        CohClass { geom, coeffs: BTreeMap::new() }
    }

    pub fn basis(geom: Geometry, b: BasisIndex) -> Self {
        let mut c = Self::zero(geom);
        c.add_term(b, BigInt::one());
        c
    }

    pub fn from_terms(geom: Geometry, terms: impl IntoIterator<Item = (BasisIndex, BigInt)>) -> Result<Self, GeometryError> {
        let mut c = Self::zero(geom);
        for (b, v) in terms {
            geom.check(b)?;
            c.add_term(b, v);
        }
        Ok(c)
    }

    fn add_term(&mut self, b: BasisIndex, v: BigInt) {
        if v.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(b).or_insert_with(BigInt::zero);
        *slot += v;
        if slot.is_zero() {
            self.coeffs.remove(&b);
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.geom
    }

    pub fn coeff(&self, b: BasisIndex) -> BigInt {
        self.coeffs.get(&b).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisIndex, &BigInt)> {
        self.coeffs.iter().map(|(b, v)| (*b, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.coeffs.keys().map(|b| b.codim());
        match it.next() {
            Some(c) => it.all(|x| x == c),
            None => true,
        }
    }

    pub fn neg(&self) -> Self {
        CohClass { geom: self.geom, coeffs: self.coeffs.iter().map(|(b, v)| (*b, -v)).collect() }
    }

    pub fn cup(&self, other: &CohClass) -> Result<CohClass, GeometryError> {
        if self.geom != other.geom {
            return Err(GeometryError::Mismatch(self.geom, other.geom));
        }
        let mut out = CohClass::zero(self.geom);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                if let Some((c, s)) = self.geom.basis_product(*a, *b) {
                    out.add_term(c, BigInt::from(s) * x * y);
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of the point class.
    pub fn degree(&self) -> BigInt {
        self.coeff(self.geom.point())
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (b, v)) in self.coeffs.iter().enumerate() {
            let sign = if v.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let mag = v.abs();
            if i > 0 {
                f.write_str(" ")?;
            }
            if mag.is_one() {
                write!(f, "{sign}{b}")?;
            } else {
                write!(f, "{sign}{mag}{b}")?;
            }
        }
        Ok(())
    }
}

/// Index-based multiplication tables for the hot loops of the engine.
#[derive(Clone, Debug)]
pub struct RingTable {
    geom: Geometry,
    pub(crate) codims: Vec<u32>,
    product: Vec<Option<(usize, i32)>>,
    /// `(i, j, sign)` for each diagonal term.
    pub(crate) diagonal: Vec<(usize, usize, i32)>,
    pub(crate) hyperplane: usize,
    pub(crate) exceptional: Option<usize>,
}

impl RingTable {
    pub fn new(geom: Geometry) -> Self {
        let len = geom.basis_len();
        let basis = geom.basis();
        let mut product = vec![None; len * len];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                product[i * len + j] = geom.basis_product(*a, *b).map(|(c, s)| (geom.index_of(c).expect("product stays in basis"), s));
            }
        }
        let diagonal = geom.diagonal_pairs().into_iter().map(|(a, b, s)| (geom.index_of(a).unwrap(), geom.index_of(b).unwrap(), s)).collect();
        RingTable { geom, codims: basis.iter().map(|b| b.codim()).collect(), product, diagonal, hyperplane: 1, exceptional: geom.index_of(BasisIndex::e(1)) }
    }

    pub fn geometry(&self) -> Geometry {
        self.geom
    }

    pub fn len(&self) -> usize {
        self.codims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codims.is_empty()
    }

    pub fn product(&self, i: usize, j: usize) -> Option<(usize, i32)> {
        self.product[i * self.len() + j]
    }

    pub fn point(&self) -> usize {
        self.geom.n as usize
    }

    /// `D·β` for a divisor index.
    pub fn curve_pairing(&self, i: usize, beta: CurveClass) -> i64 {
        if i == self.hyperplane {
            beta.d
        } else {
            debug_assert_eq!(Some(i), self.exceptional);
            beta.e
        }
    }

    /// Degree of the product of three basis elements.
    pub fn triple(&self, a: usize, b: usize, c: usize) -> i32 {
        match self.product(a, b).and_then(|(ab, s)| self.product(ab, c).map(|(abc, t)| (abc, s * t))) {
            Some((p, s)) if p == self.point() => s,
            _ => 0,
        }
    }
}
