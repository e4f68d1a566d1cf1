//! Invariant keys and their reduction by the Kontsevich–Manin axioms.
//!
//! Every query `⟨α₁,…,α_N⟩_β` is reduced, in a fixed order, by effectivity,
//! grading, the fundamental class axiom, the classical `β = 0` case and the
//! divisor axiom. What survives is either a number (three-point invariants
//! with a divisor come from a fixed table of initial data) or a canonical key
//! times a multiplier.

use std::fmt;

use num_bigint::BigInt;

use crate::geometry::{BasisIndex, CurveClass, Geometry, RingTable};
use crate::scalar::Scalar;

/// `(geometry, β, multiset of basis classes)`.
///
/// The multiset is stored as multiplicities in basis order, so keys that
/// differ only in the order of their classes are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantKey {
    geom: Geometry,
    beta: CurveClass,
    counts: Vec<u16>,
}

impl InvariantKey {
    pub fn new(geom: Geometry, beta: CurveClass, classes: &[BasisIndex]) -> Self {
        let mut counts = vec![0u16; geom.basis_len()];
        for c in classes {
            let i = geom.index_of(*c).unwrap_or_else(|| panic!("{c} is not a basis class of {geom}"));
            counts[i] += 1;
        }
        InvariantKey { geom, beta, counts }
    }

    pub(crate) fn from_counts(geom: Geometry, beta: CurveClass, counts: Vec<u16>) -> Self {
        debug_assert_eq!(counts.len(), geom.basis_len());
        InvariantKey { geom, beta, counts }
    }

    pub fn geometry(&self) -> Geometry {
        self.geom
    }

    pub fn beta(&self) -> CurveClass {
        self.beta
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts
    }

    pub fn num_points(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Classes sorted in basis order, with repetition.
    pub fn classes(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.num_points());
        for (i, &c) in self.counts.iter().enumerate() {
            for _ in 0..c {
                out.push(self.geom.class_at(i));
            }
        }
        out
    }

    pub fn codim_sum(&self) -> i64 {
        self.counts.iter().enumerate().map(|(i, &c)| i64::from(c) * i64::from(self.geom.class_at(i).codim())).sum()
    }

    /// Effective nonzero β, at least three classes, all of codim ≥ 2, and
    /// the grading condition holds.
    pub fn is_canonical(&self) -> bool {
        let g = &self.geom;
        !self.beta.is_zero()
            && g.is_effective(self.beta)
            && self.num_points() >= 3
            && self.counts.iter().enumerate().all(|(i, &c)| c == 0 || g.class_at(i).codim() >= 2)
            && self.codim_sum() == g.vdim(self.beta, self.num_points())
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        let mut first = true;
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            let b = self.geom.class_at(i);
            if c == 1 {
                write!(f, "{b}")?;
            } else {
                write!(f, "{b}^{c}")?;
            }
        }
        write!(f, ">_{} on {}", self.beta, self.geom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalResult<F> {
    Value(F),
    Canonical { key: InvariantKey, multiplier: F },
}

impl<F: Scalar> EvalResult<F> {
    pub fn is_zero_value(&self) -> bool {
        matches!(self, EvalResult::Value(v) if v.is_zero())
    }
}

/// Degree of `a·b·c`.
pub fn classical_triple(geom: Geometry, a: BasisIndex, b: BasisIndex, c: BasisIndex) -> BigInt {
    let prod = geom.unit(a).cup(&geom.unit(b)).and_then(|ab| ab.cup(&geom.unit(c))).expect("same geometry");
    prod.degree()
}

/// Three-point invariants with at least one divisor insertion.
///
/// * `⟨pt, pt, H⟩_{H'} = 1`,
/// * `⟨E_{n-1}, E_{n-1}, E⟩_{E'} = -1`,
/// * `⟨α₁, α₂, α₃⟩_{H'-E'} = 1` when the codimensions sum to `n + 2`,
/// * zero otherwise.
pub fn initial_three_point(geom: Geometry, a: BasisIndex, b: BasisIndex, c: BasisIndex, beta: CurveClass) -> i64 {
    let mut v = [a, b, c];
    v.sort();
    let n = geom.n();
    let pt = geom.point();
    let h = BasisIndex::h(1);
    if beta == CurveClass::new(1, 0) && v == [h, pt, pt] {
        return 1;
    }
    if geom.is_blowup() {
        let top_e = BasisIndex::e(n - 1);
        let mut expect = [top_e, top_e, BasisIndex::e(1)];
        expect.sort();
        if beta == CurveClass::new(0, -1) && v == expect {
            return -1;
        }
        if beta == CurveClass::new(1, 1) && v.iter().map(|x| x.codim()).sum::<u32>() == n + 2 && v.iter().all(|x| x.codim() >= 1) {
            return 1;
        }
    }
    0
}

fn initial_three_point_idx(table: &RingTable, counts: &[u16], beta: CurveClass) -> i64 {
    let g = table.geometry();
    let mut v = Vec::with_capacity(3);
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            v.push(g.class_at(i));
        }
    }
    initial_three_point(g, v[0], v[1], v[2], beta)
}

/// Reduction of a query by the axioms. Total: every input yields a number
/// or a canonical key.
pub fn canonicalize<F: Scalar>(geom: Geometry, beta: CurveClass, classes: &[BasisIndex]) -> EvalResult<F> {
    let table = RingTable::new(geom);
    let key = InvariantKey::new(geom, beta, classes);
    reduce(&table, beta, key.counts, None)
}

/// As [`canonicalize`], recording the axioms applied.
pub fn canonicalize_traced<F: Scalar>(geom: Geometry, beta: CurveClass, classes: &[BasisIndex], trace: &mut Vec<String>) -> EvalResult<F> {
    let table = RingTable::new(geom);
    let key = InvariantKey::new(geom, beta, classes);
    reduce(&table, beta, key.counts, Some(trace))
}

/// Queries with fewer than three classes: add a divisor `D` with `D·β ≠ 0`
/// and divide by `D·β`, until there are three.
pub fn lift_small_n<F: Scalar>(geom: Geometry, beta: CurveClass, classes: &[BasisIndex]) -> EvalResult<F> {
    assert!(classes.len() < 3, "lift_small_n needs fewer than three classes");
    canonicalize(geom, beta, classes)
}

pub(crate) fn reduce<F: Scalar>(table: &RingTable, beta: CurveClass, mut counts: Vec<u16>, mut trace: Option<&mut Vec<String>>) -> EvalResult<F> {
    let g = table.geometry();
    let mut note = |msg: String| {
        if let Some(t) = trace.as_deref_mut() {
            t.push(msg);
        }
    };
    if !g.is_effective(beta) {
        note(format!("{beta} is not effective: 0"));
        return EvalResult::Value(F::zero());
    }
    let mut num: usize = counts.iter().map(|&c| c as usize).sum();
    let codim: i64 = counts.iter().zip(&table.codims).map(|(&c, &k)| i64::from(c) * i64::from(k)).sum();
    let vdim = g.vdim(beta, num);
    if codim != vdim {
        note(format!("grading: codim sum {codim} != vdim {vdim}: 0"));
        return EvalResult::Value(F::zero());
    }
    if beta.is_zero() {
        if num != 3 {
            note(format!("beta = 0 with {num} classes: 0"));
            return EvalResult::Value(F::zero());
        }
        let idx: Vec<usize> = expand(&counts);
        let v = table.triple(idx[0], idx[1], idx[2]);
        note(format!("classical triple: {v}"));
        return EvalResult::Value(F::from_int(i64::from(v)));
    }
    if counts[0] > 0 {
        note("fundamental class with beta != 0: 0".to_string());
        return EvalResult::Value(F::zero());
    }
    if num < 3 {
        // H if d ≠ 0, else E
        let div = if beta.d != 0 { table.hyperplane } else { table.exceptional.expect("d = 0 only on the blow-up") };
        let p = table.curve_pairing(div, beta);
        assert!(p != 0, "no divisor pairs nonzero with {beta}");
        note(format!("lift: add {} and divide by {p}", g.class_at(div)));
        counts[div] += 1;
        return match reduce::<F>(table, beta, counts, trace) {
            EvalResult::Value(v) => EvalResult::Value(v / F::from_int(p)),
            EvalResult::Canonical { key, multiplier } => EvalResult::Canonical { key, multiplier: multiplier / F::from_int(p) },
        };
    }
    let mut mult: i64 = 1;
    let mut big_mult: Option<F> = None;
    while num >= 4 {
        // strip the greatest divisor in basis order first
        let div = match table.exceptional.filter(|&e| counts[e] > 0) {
            Some(e) => e,
            None if counts[table.hyperplane] > 0 => table.hyperplane,
            None => break,
        };
        let p = table.curve_pairing(div, beta);
        note(format!("divisor axiom: strip {} (pairing {p})", g.class_at(div)));
        if p == 0 {
            return EvalResult::Value(F::zero());
        }
        counts[div] -= 1;
        num -= 1;
        match mult.checked_mul(p) {
            Some(m) => mult = m,
            None => {
                let acc = big_mult.take().unwrap_or_else(F::one) * F::from_int(mult);
                big_mult = Some(acc);
                mult = p;
            }
        }
    }
    let multiplier = big_mult.unwrap_or_else(F::one) * F::from_int(mult);
    let has_divisor = counts[table.hyperplane] > 0 || table.exceptional.is_some_and(|e| counts[e] > 0);
    if num == 3 && has_divisor {
        let v = initial_three_point_idx(table, &counts, beta);
        note(format!("three-point initial data: {v}"));
        return EvalResult::Value(multiplier * F::from_int(v));
    }
    let key = InvariantKey::from_counts(g, beta, counts);
    note(format!("canonical key {key}"));
    EvalResult::Canonical { key, multiplier }
}

fn expand(counts: &[u16]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            out.push(i);
        }
    }
    out
}
