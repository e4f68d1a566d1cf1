//! Property suites over the ring, the canonical form and the engine.
//!
//! Every suite returns a [`CheckReport`]; failures are report entries, never
//! panics, so callers can print the whole picture before deciding.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumerative::kontsevich_oracle;
use crate::geometry::{BasisIndex, CohClass, CurveClass, Geometry};
use crate::invariant::{canonicalize, EvalResult};
use crate::scalar::Scalar;
use crate::session::Workbench;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>, items: Vec<CheckItem>) -> Self {
        let passed = items.iter().filter(|i| i.passed).count();
        CheckReport { suite: suite.into(), passed, failed: items.len() - passed, items }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }

    /// Appends another report's items, keeping this suite name.
    pub fn absorb(&mut self, other: CheckReport) {
        self.items.extend(other.items);
        *self = CheckReport::new(std::mem::take(&mut self.suite), std::mem::take(&mut self.items));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            let _ = writeln!(out, "[{}] {}: {}", if i.passed { "pass" } else { "FAIL" }, i.name, i.detail);
        }
        let _ = writeln!(out, "{}: {} passed, {} failed", self.suite, self.passed, self.failed);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Builds random keys that satisfy the grading condition by construction.
pub struct KeySampler {
    rng: ChaCha8Rng,
}

impl KeySampler {
    pub fn new(seed: u64) -> Self {
        KeySampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A random effective nonzero class of mass in `1..=max_mass`.
    pub fn curve(&mut self, geom: Geometry, max_mass: i64) -> CurveClass {
        loop {
            let m = self.rng.gen_range(1..=max_mass);
            let choices = geom.classes_of_mass(m);
            if let Some(b) = choices.choose(&mut self.rng) {
                if !b.is_zero() {
                    return *b;
                }
            }
        }
    }

    fn class_of_codim(&mut self, geom: Geometry, c: u32) -> BasisIndex {
        if geom.is_blowup() && c < geom.n() && self.rng.gen_bool(0.5) {
            BasisIndex::e(c)
        } else {
            BasisIndex::h(c)
        }
    }

    /// Classes with `Σ (codim - 1) = excess`, at least `min_len` of them,
    /// plus up to `extra_divisors` further divisors, in random order.
    pub fn classes(&mut self, geom: Geometry, excess: i64, min_len: usize, extra_divisors: usize) -> Vec<BasisIndex> {
        let n = geom.n() as i64;
        let mut out = Vec::new();
        let mut left = excess;
        while left > 0 {
            let step = self.rng.gen_range(1..=left.min(n - 1));
            out.push(self.class_of_codim(geom, step as u32 + 1));
            left -= step;
        }
        let pad = min_len.saturating_sub(out.len()) + self.rng.gen_range(0..=extra_divisors);
        for _ in 0..pad {
            out.push(self.class_of_codim(geom, 1));
        }
        out.shuffle(&mut self.rng);
        out
    }

    /// A random graded key `(β, classes)` with at least three classes.
    pub fn key(&mut self, geom: Geometry, max_mass: i64) -> (CurveClass, Vec<BasisIndex>) {
        loop {
            let beta = self.curve(geom, max_mass);
            let excess = geom.vdim(beta, 0);
            if excess < 0 {
                continue;
            }
            return (beta, self.classes(geom, excess, 3, 2));
        }
    }
}

/// Small geometries with their mass caps for random sampling.
fn sample_geometries() -> Vec<(Geometry, i64)> {
    vec![(Geometry::blowup(2).unwrap(), 4), (Geometry::blowup(3).unwrap(), 3), (Geometry::plain(2).unwrap(), 4), (Geometry::plain(3).unwrap(), 2)]
}

fn describe(beta: CurveClass, classes: &[BasisIndex]) -> String {
    let cls: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
    format!("{beta} [{}]", cls.join(","))
}

/// Values agree after shuffling the insertions.
pub fn permutation_invariance<F: Scalar>(bench: &mut Workbench<F>, samples: usize, seed: u64) -> CheckReport {
    let mut s = KeySampler::new(seed);
    let geoms = sample_geometries();
    let mut items = Vec::new();
    for i in 0..samples {
        let (geom, cap) = geoms[i % geoms.len()];
        let (beta, classes) = s.key(geom, cap);
        let mut shuffled = classes.clone();
        shuffled.shuffle(s.rng());
        let c1: EvalResult<F> = canonicalize(geom, beta, &classes);
        let c2: EvalResult<F> = canonicalize(geom, beta, &shuffled);
        let engine = bench.engine(geom);
        let (v1, v2) = (engine.evaluate(beta, &classes), engine.evaluate(beta, &shuffled));
        let name = format!("permutation {} on {geom}", describe(beta, &classes));
        items.push(match (v1, v2) {
            (Ok(a), Ok(b)) => CheckItem::new(name, c1 == c2 && a == b, format!("{} vs {}", a.to_ratio_string(), b.to_ratio_string())),
            (Err(e), _) | (_, Err(e)) => CheckItem::new(name, false, e.to_string()),
        });
    }
    CheckReport::new("permutation-invariance", items)
}

/// `⟨M, D⟩_β = (D·β) ⟨M⟩_β` for random graded `M` and divisors `D`.
pub fn divisor_axiom<F: Scalar>(bench: &mut Workbench<F>, samples: usize, seed: u64) -> CheckReport {
    let mut s = KeySampler::new(seed);
    let geoms = sample_geometries();
    let mut items = Vec::new();
    for i in 0..samples {
        let (geom, cap) = geoms[i % geoms.len()];
        let (beta, classes) = s.key(geom, cap);
        let d = *geom.divisors().choose(s.rng()).unwrap();
        let mut with = classes.clone();
        with.insert(s.rng().gen_range(0..=classes.len()), d);
        let engine = bench.engine(geom);
        let name = format!("divisor {d} on {} over {geom}", describe(beta, &classes));
        let factor = F::from_int(geom.curve_pairing(d, beta));
        items.push(match (engine.evaluate(beta, &with), engine.evaluate(beta, &classes)) {
            (Ok(a), Ok(b)) => {
                let rhs = factor * b;
                CheckItem::new(name, a == rhs, format!("{} vs {}", a.to_ratio_string(), rhs.to_ratio_string()))
            }
            (Err(e), _) | (_, Err(e)) => CheckItem::new(name, false, e.to_string()),
        });
    }
    CheckReport::new("divisor-axiom", items)
}

/// Random admissible relation instances have exactly zero residual once
/// every term is known. Instances where every product vanishes are skipped
/// (up to a bounded number of draws).
pub fn wdvv_residuals<F: Scalar>(bench: &mut Workbench<F>, geoms: &[(Geometry, i64)], samples: usize, seed: u64) -> CheckReport {
    let mut s = KeySampler::new(seed);
    let mut items = Vec::new();
    let mut i = 0;
    while items.len() < samples && i < 50 * samples.max(1) {
        let (geom, cap) = geoms[i % geoms.len()];
        i += 1;
        let beta = s.curve(geom, cap);
        let excess = geom.vdim(beta, 0) - 1;
        if excess < 0 {
            continue;
        }
        let mut classes = s.classes(geom, excess, 4, 2);
        let deltas = [classes.pop().unwrap(), classes.pop().unwrap(), classes.pop().unwrap(), classes.pop().unwrap()];
        let engine = bench.engine(geom);
        let name = format!("wdvv {} | {} on {geom}", describe(beta, &deltas), describe(beta, &classes));
        let item = match engine.wdvv_relation(beta, deltas, &classes) {
            Ok(rel) if rel.is_trivial() => continue,
            Ok(rel) => match engine.relation_residual(&rel) {
                Ok(r) => CheckItem::new(name, r.is_zero(), format!("{} terms, residual {}", rel.terms, r.to_ratio_string())),
                Err(e) => CheckItem::new(name, false, e.to_string()),
            },
            Err(e) => CheckItem::new(name, false, e.to_string()),
        };
        items.push(item);
    }
    if items.len() < samples {
        items.push(CheckItem::new("wdvv sampling", false, format!("only {} nontrivial instances in {i} draws", items.len())));
    }
    CheckReport::new("wdvv-residuals", items)
}

/// `Σ s·(x, a)·b = x` for every basis class, `n ≤ max_n`, both spaces.
pub fn diagonal_reproduction(max_n: u32) -> CheckReport {
    let mut items = Vec::new();
    for geom in geometries_up_to(max_n) {
        for x in geom.basis() {
            let mut coeffs: BTreeMap<BasisIndex, BigInt> = BTreeMap::new();
            for (a, b, s) in geom.diagonal_pairs() {
                *coeffs.entry(b).or_default() += i64::from(s) * i64::from(geom.pairing(x, a));
            }
            let acc = CohClass::from_terms(geom, coeffs).unwrap();
            let ok = acc == CohClass::basis(geom, x);
            items.push(CheckItem::new(format!("diagonal reproduces {x} on {geom}"), ok, acc.to_string()));
        }
    }
    CheckReport::new("diagonal-reproduction", items)
}

/// Exhaustive commutativity and associativity of the cup product on basis
/// classes, and agreement of the pairing with the degree of the product.
pub fn cup_product_laws(max_n: u32) -> CheckReport {
    let mut items = Vec::new();
    for geom in geometries_up_to(max_n) {
        let basis: Vec<CohClass> = geom.basis().into_iter().map(|b| CohClass::basis(geom, b)).collect();
        let (mut comm, mut assoc, mut pair) = (true, true, true);
        for a in &basis {
            for b in &basis {
                let ab = a.cup(b).unwrap();
                comm &= ab == b.cup(a).unwrap();
                for c in &basis {
                    assoc &= ab.cup(c).unwrap() == a.cup(&b.cup(c).unwrap()).unwrap();
                }
            }
        }
        for x in geom.basis() {
            for y in geom.basis() {
                let deg = CohClass::basis(geom, x).cup(&CohClass::basis(geom, y)).unwrap().degree();
                pair &= deg == i64::from(geom.pairing(x, y)).into();
            }
        }
        items.push(CheckItem::new(format!("cup commutative on {geom}"), comm, format!("{} basis classes", basis.len())));
        items.push(CheckItem::new(format!("cup associative on {geom}"), assoc, format!("{} triples", basis.len().pow(3))));
        items.push(CheckItem::new(format!("pairing is degree of cup on {geom}"), pair, String::new()));
    }
    CheckReport::new("cup-product", items)
}

/// Every key off the grading hyperplane canonicalizes to zero (multisets of
/// up to five classes, masses up to 3).
pub fn grading_soundness(max_n: u32) -> CheckReport {
    let mut items = Vec::new();
    for geom in geometries_up_to(max_n.min(4)) {
        let basis = geom.basis();
        let mut checked = 0usize;
        let mut bad = Vec::new();
        let betas: Vec<CurveClass> = (0..=3).flat_map(|m| geom.classes_of_mass(m)).collect();
        for len in 0..=5usize {
            for_each_multiset(basis.len(), len, &mut |idx| {
                let classes: Vec<BasisIndex> = idx.iter().map(|&i| basis[i]).collect();
                let codim: i64 = classes.iter().map(|c| i64::from(c.codim())).sum();
                for &beta in &betas {
                    if codim == geom.vdim(beta, len) {
                        continue;
                    }
                    checked += 1;
                    if !canonicalize::<num_rational::BigRational>(geom, beta, &classes).is_zero_value() {
                        bad.push(describe(beta, &classes));
                    }
                }
            });
        }
        let detail = if bad.is_empty() { format!("{checked} off-grade keys") } else { format!("nonzero: {}", bad.join("; ")) };
        items.push(CheckItem::new(format!("grading soundness on {geom}"), bad.is_empty(), detail));
    }
    CheckReport::new("grading-soundness", items)
}

fn for_each_multiset(k: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(k: usize, from: usize, left: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            f(cur);
            return;
        }
        for i in from..k {
            cur.push(i);
            go(k, i, left - 1, cur, f);
            cur.pop();
        }
    }
    go(k, 0, len, &mut Vec::with_capacity(len), f);
}

fn geometries_up_to(max_n: u32) -> Vec<Geometry> {
    (2..=max_n).flat_map(|n| [Geometry::plain(n).unwrap(), Geometry::blowup(n).unwrap()]).collect()
}

pub struct AxiomConfig {
    pub permutation_samples: usize,
    pub divisor_samples: usize,
    pub wdvv_samples: usize,
    pub max_n: u32,
    pub seed: u64,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig { permutation_samples: 200, divisor_samples: 100, wdvv_samples: 100, max_n: 5, seed: 0x5eed }
    }
}

/// All axiom suites combined.
pub fn axiom_suite<F: Scalar>(bench: &mut Workbench<F>, cfg: &AxiomConfig) -> CheckReport {
    let mut r = CheckReport::new("axioms", Vec::new());
    r.absorb(permutation_invariance(bench, cfg.permutation_samples, cfg.seed));
    r.absorb(divisor_axiom(bench, cfg.divisor_samples, cfg.seed.wrapping_add(1)));
    r.absorb(wdvv_residuals(bench, &sample_geometries(), cfg.wdvv_samples, cfg.seed.wrapping_add(2)));
    r.absorb(diagonal_reproduction(cfg.max_n));
    r.absorb(cup_product_laws(cfg.max_n));
    r.absorb(grading_soundness(cfg.max_n));
    r
}

/// WDVV residuals restricted to one blow-up dimension and mass cap.
pub fn wdvv_suite<F: Scalar>(bench: &mut Workbench<F>, n: u32, max_mass: i64, samples: usize, seed: u64) -> CheckReport {
    let geoms = [(Geometry::blowup(n).unwrap(), max_mass.max(1))];
    let mut r = wdvv_residuals(bench, &geoms, samples, seed);
    r.suite = "wdvv".into();
    r
}

/// Engine values on the plain plane against the closed recursion.
pub fn oracle_suite<F: Scalar>(bench: &mut Workbench<F>, dmax: i64) -> CheckReport {
    let geom = Geometry::plain(2).unwrap();
    let oracle = kontsevich_oracle(dmax.max(1) as usize);
    let mut items = Vec::new();
    for (i, expected) in oracle.iter().enumerate() {
        let d = i as i64 + 1;
        let name = format!("plain P2 degree {d} against recursion");
        items.push(match bench.engine(geom).evaluate(CurveClass::degree(d), &vec![geom.point(); 3 * d as usize - 1]) {
            Ok(v) => CheckItem::new(name, v == F::from_bigint(expected), format!("{} vs {expected}", v.to_ratio_string())),
            Err(e) => CheckItem::new(name, false, e.to_string()),
        });
    }
    CheckReport::new("oracle", items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn sampler_keys_are_graded() {
        let mut s = KeySampler::new(7);
        for (geom, cap) in sample_geometries() {
            for _ in 0..50 {
                let (beta, classes) = s.key(geom, cap);
                assert!(classes.len() >= 3);
                let codim: i64 = classes.iter().map(|c| i64::from(c.codim())).sum();
                assert_eq!(codim, geom.vdim(beta, classes.len()));
                assert!(classes.iter().all(|c| geom.contains(*c)));
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let g = Geometry::blowup(3).unwrap();
        let a: Vec<_> = (0..10)
            .map({
                let mut s = KeySampler::new(3);
                move |_| s.key(g, 3)
            })
            .collect();
        let b: Vec<_> = (0..10)
            .map({
                let mut s = KeySampler::new(3);
                move |_| s.key(g, 3)
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn ring_suites_pass() {
        for r in [diagonal_reproduction(5), cup_product_laws(5), grading_soundness(4)] {
            assert!(r.all_passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn small_axiom_suite_passes() {
        let mut bench = Workbench::<Q>::new();
        let cfg = AxiomConfig { permutation_samples: 20, divisor_samples: 20, wdvv_samples: 20, max_n: 3, seed: 11 };
        let r = axiom_suite(&mut bench, &cfg);
        assert!(r.all_passed(), "{}", r.to_text());
        assert!(r.items.len() > 60);
    }

    #[test]
    fn report_renderings() {
        let r = CheckReport::new("demo", vec![CheckItem::new("a", true, "ok"), CheckItem::new("b", false, "bad")]);
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
        assert!(r.to_text().contains("[FAIL] b: bad"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["failed"], 1);
        assert_eq!(v["items"][0]["name"], "a");
    }
}
