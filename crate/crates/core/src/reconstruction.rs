//! Reconstruction of canonical invariants from the three-point initial data.
//!
//! Canonical keys are grouped into levels `(β, N)`, ordered by
//! `(mass(β), N)`. A level is solved by generating associativity (WDVV)
//! relations whose only unsolved terms lie at that level, and eliminating.
//! Every other term of such a relation is a product over a splitting of `β`
//! (strictly smaller mass), a divisor-stripped invariant (same `β`, fewer
//! points), a classical triple, or initial data.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::geometry::{BasisIndex, CurveClass, Geometry, GeometryError, RingTable};
use crate::invariant::{reduce, EvalResult, InvariantKey};
use crate::linalg::{EchelonSystem, LinalgError, RowOutcome};
use crate::memo::{MemoError, MemoStore};
use crate::scalar::{binomial_int, Scalar};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("level {level} is underdetermined: rank {rank} of {unknowns} after exhaustive relation generation")]
    UnderdeterminedLevel { level: Level, rank: usize, unknowns: usize },
    #[error("level {level}: inconsistent relations")]
    InconsistentLevel { level: Level },
    #[error("level {0} re-entered while being solved")]
    LevelReentry(Level),
    #[error("{key} was derived as {value}, but the initial data requires 1")]
    InitialDataMismatch { key: String, value: String },
    #[error("solved level is missing {0}")]
    MissingSolvedKey(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Memo(#[from] MemoError),
}

/// A set of canonical unknowns sharing `β` and the number of insertions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    pub beta: CurveClass,
    pub num_points: usize,
}

impl Level {
    pub fn new(beta: CurveClass, num_points: usize) -> Self {
        Level { beta, num_points }
    }

    pub fn of(key: &InvariantKey) -> Self {
        Level { beta: key.beta(), num_points: key.num_points() }
    }

    pub fn order_key(&self, geom: &Geometry) -> (i64, usize) {
        (geom.mass(self.beta), self.num_points)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(beta={}, N={})", self.beta, self.num_points)
    }
}

/// `Σ lhs[k] · Φ(k) = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<F> {
    pub lhs: BTreeMap<InvariantKey, F>,
    pub rhs: F,
    /// Number of nonzero products that went into the relation.
    pub terms: usize,
}

impl<F: Scalar> Relation<F> {
    fn new() -> Self {
        Relation { lhs: BTreeMap::new(), rhs: F::zero(), terms: 0 }
    }

    fn add_lhs(&mut self, key: InvariantKey, coef: F) {
        let slot = self.lhs.entry(key).or_insert_with(F::zero);
        *slot = slot.clone() + coef;
    }

    /// `Σ lhs·value - rhs` under the given valuation.
    pub fn residual(&self, mut value: impl FnMut(&InvariantKey) -> F) -> F {
        let mut acc = F::zero() - self.rhs.clone();
        for (k, c) in &self.lhs {
            acc = acc + c.clone() * value(k);
        }
        acc
    }

    /// No product survived: the relation reads `0 = 0`.
    pub fn is_trivial(&self) -> bool {
        self.terms == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub levels_solved: usize,
    pub unknowns_solved: usize,
    pub relations: usize,
    pub redundant_relations: usize,
    /// Levels that needed relations beyond the targeted family.
    pub widened_levels: usize,
    pub exhaustive_levels: usize,
    /// Deepest chain of levels being solved at once.
    pub max_depth: usize,
}

enum Factor<F> {
    Zero,
    Known(F),
    Unknown(InvariantKey, F),
}

type Instance = ([usize; 4], Vec<u16>);

/// The reconstruction engine for one geometry.
pub struct Engine<F: Scalar> {
    table: RingTable,
    store: MemoStore<F>,
    solved: HashSet<Level>,
    active: Vec<Level>,
    splittings: HashMap<CurveClass, Rc<Vec<(CurveClass, CurveClass)>>>,
    stats: EngineStats,
    events: Vec<String>,
    kept_relations: Option<Vec<(Level, Relation<F>)>>,
}

impl<F: Scalar> Engine<F> {
    pub fn new(geom: Geometry) -> Self {
        Self::with_store(geom, MemoStore::new())
    }

    pub fn with_store(geom: Geometry, store: MemoStore<F>) -> Self {
        Engine {
            table: RingTable::new(geom),
            store,
            solved: HashSet::new(),
            active: Vec::new(),
            splittings: HashMap::new(),
            stats: EngineStats::default(),
            events: Vec::new(),
            kept_relations: None,
        }
    }

    pub fn geometry(&self) -> Geometry {
        self.table.geometry()
    }

    pub fn store(&self) -> &MemoStore<F> {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut MemoStore<F> {
        &mut self.store
    }

    pub fn into_store(self) -> MemoStore<F> {
        self.store
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    /// Log of solved levels, oldest first.
    pub fn events(&self) -> &[String] {
        &self.events
    }

    /// Keep every relation used by the solver (for residual checks).
    pub fn keep_relations(&mut self, keep: bool) {
        self.kept_relations = keep.then(Vec::new);
    }

    pub fn kept_relations(&self) -> &[(Level, Relation<F>)] {
        self.kept_relations.as_deref().unwrap_or(&[])
    }

    pub fn is_solved(&self, level: &Level) -> bool {
        self.solved.contains(level)
    }

    /// `⟨classes⟩_β`, for any list of basis classes.
    pub fn evaluate(&mut self, beta: CurveClass, classes: &[BasisIndex]) -> Result<F, EngineError> {
        let geom = self.geometry();
        geom.check_curve(beta)?;
        for c in classes {
            geom.check(*c)?;
        }
        let key = InvariantKey::new(geom, beta, classes);
        self.evaluate_counts(beta, key.counts().to_vec())
    }

    pub fn evaluate_key(&mut self, key: &InvariantKey) -> Result<F, EngineError> {
        if key.geometry() != self.geometry() {
            return Err(GeometryError::Mismatch(key.geometry(), self.geometry()).into());
        }
        self.evaluate_counts(key.beta(), key.counts().to_vec())
    }

    fn evaluate_counts(&mut self, beta: CurveClass, counts: Vec<u16>) -> Result<F, EngineError> {
        match reduce::<F>(&self.table, beta, counts, None) {
            EvalResult::Value(v) => Ok(v),
            EvalResult::Canonical { key, multiplier } => Ok(self.canonical_value(&key)? * multiplier),
        }
    }

    /// Value of a canonical key, solving its level (and the lower levels its
    /// relations reach) on a miss.
    pub fn canonical_value(&mut self, key: &InvariantKey) -> Result<F, EngineError> {
        if let Some(v) = self.store.get(key) {
            return Ok(v.clone());
        }
        let level = Level::of(key);
        self.solve_level(level)?;
        self.store.get(key).cloned().ok_or_else(|| EngineError::MissingSolvedKey(key.to_string()))
    }

    /// Range of `N` for which a level of `β` can have canonical unknowns.
    pub fn point_range(&self, beta: CurveClass) -> std::ops::RangeInclusive<usize> {
        let g = self.geometry();
        let excess = g.vdim(beta, 0);
        if excess < 3 {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        let per = g.n() as i64 - 1;
        let lo = ((excess + per - 1) / per).max(3) as usize;
        lo..=excess as usize
    }

    /// Canonical unknowns of a level, as multiplicity vectors.
    pub fn level_unknowns(&self, level: Level) -> Vec<InvariantKey> {
        let g = self.geometry();
        let target = g.vdim(level.beta, level.num_points);
        let allowed: Vec<usize> = (0..self.table.len()).filter(|&i| self.table.codims[i] >= 2).collect();
        let mut out = Vec::new();
        if level.beta.is_zero() || !g.is_effective(level.beta) || level.num_points < 3 {
            return out;
        }
        let mut counts = vec![0u16; self.table.len()];
        self.enumerate_multisets(&allowed, 0, level.num_points, target, &mut counts, &mut |c| {
            out.push(InvariantKey::from_counts(g, level.beta, c.to_vec()));
        });
        out
    }

    fn enumerate_multisets(&self, allowed: &[usize], from: usize, remaining: usize, codim_left: i64, counts: &mut Vec<u16>, emit: &mut dyn FnMut(&[u16])) {
        if remaining == 0 {
            if codim_left == 0 {
                emit(counts);
            }
            return;
        }
        if from >= allowed.len() {
            return;
        }
        let codims: Vec<i64> = allowed[from..].iter().map(|&i| i64::from(self.table.codims[i])).collect();
        let (lo, hi) = (*codims.iter().min().unwrap(), *codims.iter().max().unwrap());
        if codim_left < lo * remaining as i64 || codim_left > hi * remaining as i64 {
            return;
        }
        let idx = allowed[from];
        let c = i64::from(self.table.codims[idx]);
        for k in (0..=remaining).rev() {
            if c * k as i64 > codim_left {
                continue;
            }
            counts[idx] = k as u16;
            self.enumerate_multisets(allowed, from + 1, remaining - k, codim_left - c * k as i64, counts, emit);
        }
        counts[idx] = 0;
    }

    /// Solves one level, assuming lower levels are available on demand.
    pub fn solve_level(&mut self, level: Level) -> Result<(), EngineError> {
        if self.solved.contains(&level) {
            return Ok(());
        }
        if self.active.contains(&level) {
            return Err(EngineError::LevelReentry(level));
        }
        let unknowns: Vec<InvariantKey> = self.level_unknowns(level).into_iter().filter(|k| !self.store.contains(k)).collect();
        if unknowns.is_empty() {
            self.solved.insert(level);
            return Ok(());
        }
        self.active.push(level);
        self.stats.max_depth = self.stats.max_depth.max(self.active.len());
        let result = self.solve_unknowns(level, &unknowns);
        self.active.pop();
        result?;
        self.solved.insert(level);
        Ok(())
    }

    fn solve_unknowns(&mut self, level: Level, unknowns: &[InvariantKey]) -> Result<(), EngineError> {
        let columns: HashMap<InvariantKey, usize> = unknowns.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut system = EchelonSystem::<F>::new(unknowns.len());
        let mut seen: HashSet<Instance> = HashSet::new();
        let (rel_before, red_before) = (self.stats.relations, self.stats.redundant_relations);

        let targeted = self.targeted_instances(unknowns, true);
        self.feed(level, &columns, &mut system, &mut seen, targeted)?;
        if !system.is_full_rank() {
            self.stats.widened_levels += 1;
            let wider = self.targeted_instances(unknowns, false);
            self.feed(level, &columns, &mut system, &mut seen, wider)?;
        }
        if !system.is_full_rank() {
            self.stats.exhaustive_levels += 1;
            self.exhaustive(level, &columns, &mut system, &mut seen)?;
        }
        if !system.is_full_rank() {
            return Err(EngineError::UnderdeterminedLevel { level, rank: system.rank(), unknowns: unknowns.len() });
        }
        let solution = system.solution().expect("full rank");
        let g = self.geometry();
        for (key, value) in unknowns.iter().zip(solution) {
            if g.is_blowup() && level.beta == CurveClass::new(1, 1) && level.num_points == 3 && value != F::one() {
                return Err(EngineError::InitialDataMismatch { key: key.to_string(), value: value.to_ratio_string() });
            }
            self.store.insert(key.clone(), value)?;
        }
        self.stats.levels_solved += 1;
        self.stats.unknowns_solved += unknowns.len();
        self.events.push(format!(
            "solved level {level}: {} unknowns from {} relations ({} redundant)",
            unknowns.len(),
            self.stats.relations - rel_before,
            self.stats.redundant_relations - red_before
        ));
        Ok(())
    }

    fn feed(
        &mut self,
        level: Level,
        columns: &HashMap<InvariantKey, usize>,
        system: &mut EchelonSystem<F>,
        seen: &mut HashSet<Instance>,
        instances: Vec<Instance>,
    ) -> Result<(), EngineError> {
        for inst in instances {
            if system.is_full_rank() {
                break;
            }
            if !seen.insert(inst.clone()) {
                continue;
            }
            self.feed_one(level, columns, system, &inst)?;
        }
        Ok(())
    }

    fn feed_one(&mut self, level: Level, columns: &HashMap<InvariantKey, usize>, system: &mut EchelonSystem<F>, inst: &Instance) -> Result<(), EngineError> {
        let (deltas, t) = inst;
        let rel = self.relation_at(level, *deltas, t)?;
        let mut row = vec![F::zero(); system.unknowns()];
        let mut rhs = rel.rhs.clone();
        for (k, c) in &rel.lhs {
            match columns.get(k) {
                Some(&j) => row[j] = row[j].clone() + c.clone(),
                None => {
                    // already stored (e.g. loaded from a cache)
                    let v = self.store.get(k).cloned().ok_or_else(|| EngineError::MissingSolvedKey(k.to_string()))?;
                    rhs = rhs - c.clone() * v;
                }
            }
        }
        self.stats.relations += 1;
        if let Some(kept) = self.kept_relations.as_mut() {
            kept.push((level, rel));
        }
        match system.add_row(row, rhs) {
            Ok(RowOutcome::Redundant) => {
                self.stats.redundant_relations += 1;
                Ok(())
            }
            Ok(RowOutcome::NewPivot(_)) => Ok(()),
            Err(LinalgError::Inconsistent) => Err(EngineError::InconsistentLevel { level }),
            Err(e) => panic!("relation row has the wrong shape: {e}"),
        }
    }

    /// For each unknown, split off a class `γ₁ = s·D·γ'` and pick two more
    /// members `γ₂, γ₃`; the relation `(γ', D | γ₂, γ₃)` contains the unknown
    /// through its `β₁ = 0` term. With `max_only`, `γ₁` ranges over the
    /// classes of maximal codimension only.
    fn targeted_instances(&self, unknowns: &[InvariantKey], max_only: bool) -> Vec<Instance> {
        let g = self.geometry();
        let mut per_key: Vec<Vec<Instance>> = Vec::new();
        for key in unknowns {
            let mut out = Vec::new();
            let counts = key.counts();
            let present: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
            let max_codim = present.iter().map(|&i| self.table.codims[i]).max().unwrap_or(0);
            for &g1 in &present {
                let codim = self.table.codims[g1];
                if codim < 2 || (max_only && codim != max_codim) || (!max_only && codim == max_codim) {
                    continue;
                }
                let (dv, rest, _) = g.decompose(g.class_at(g1)).expect("codim >= 2");
                let dv = g.index_of(dv).unwrap();
                let rest = g.index_of(rest).unwrap();
                let mut rem = counts.to_vec();
                rem[g1] -= 1;
                for &g2 in &present {
                    if rem[g2] == 0 {
                        continue;
                    }
                    rem[g2] -= 1;
                    for &g3 in present.iter().filter(|&&x| x >= g2) {
                        if rem[g3] == 0 {
                            continue;
                        }
                        rem[g3] -= 1;
                        out.push(([rest, dv, g2, g3], rem.clone()));
                        rem[g3] += 1;
                    }
                    rem[g2] += 1;
                }
            }
            per_key.push(out);
        }
        // round-robin, so every unknown gets its first relation early
        let longest = per_key.iter().map(Vec::len).max().unwrap_or(0);
        (0..longest).flat_map(|i| per_key.iter().filter_map(move |v| v.get(i).cloned())).collect()
    }

    /// Every relation with `N + 1` insertions of positive codimension.
    fn exhaustive(
        &mut self,
        level: Level,
        columns: &HashMap<InvariantKey, usize>,
        system: &mut EchelonSystem<F>,
        seen: &mut HashSet<Instance>,
    ) -> Result<(), EngineError> {
        let g = self.geometry();
        let allowed: Vec<usize> = (1..self.table.len()).collect();
        let target = g.vdim(level.beta, level.num_points + 1) - 1;
        let mut multisets = Vec::new();
        let mut counts = vec![0u16; self.table.len()];
        self.enumerate_multisets(&allowed, 0, level.num_points + 1, target, &mut counts, &mut |c| multisets.push(c.to_vec()));
        for m in multisets {
            let present: Vec<usize> = (0..m.len()).filter(|&i| m[i] > 0).collect();
            let mut instances = Vec::new();
            let mut rem = m.clone();
            pick_quadruples(&present, &mut rem, &mut Vec::new(), &mut instances);
            self.feed(level, columns, system, seen, instances)?;
            if system.is_full_rank() {
                break;
            }
        }
        Ok(())
    }

    /// The relation `L(δ₁,δ₂;δ₃,δ₄) = L(δ₁,δ₃;δ₂,δ₄)` with remaining
    /// insertions `t`. Terms at level `(β, |t| + 3)` that are not yet stored
    /// go to the left-hand side; everything else is evaluated.
    pub fn wdvv_relation(&mut self, beta: CurveClass, deltas: [BasisIndex; 4], t: &[BasisIndex]) -> Result<Relation<F>, EngineError> {
        let g = self.geometry();
        g.check_curve(beta)?;
        let mut idx = [0usize; 4];
        for (slot, d) in idx.iter_mut().zip(deltas) {
            *slot = g.index_of(g.check(d)?).unwrap();
        }
        let key = InvariantKey::new(g, beta, t);
        let level = Level::new(beta, t.len() + 3);
        self.relation_at(level, idx, key.counts())
    }

    fn relation_at(&mut self, level: Level, deltas: [usize; 4], t: &[u16]) -> Result<Relation<F>, EngineError> {
        let mut rel = Relation::new();
        let [a, b, c, d] = deltas;
        self.accumulate(&mut rel, level, [a, b, c, d], t, true)?;
        self.accumulate(&mut rel, level, [a, c, b, d], t, false)?;
        rel.lhs.retain(|_, c| !c.is_negligible());
        Ok(rel)
    }

    fn splittings_of(&mut self, beta: CurveClass) -> Rc<Vec<(CurveClass, CurveClass)>> {
        let g = self.geometry();
        self.splittings
            .entry(beta)
            .or_insert_with(|| {
                let mut v = vec![(CurveClass::ZERO, beta), (beta, CurveClass::ZERO)];
                v.extend(g.splittings(beta));
                Rc::new(v)
            })
            .clone()
    }

    /// Adds `± L(a,b;c,d)` to `rel`, where
    /// `L = Σ_{β₁+β₂=β} Σ_{T₁⊔T₂=T} Σ_diag s·⟨a,b,x,T₁⟩_{β₁}⟨y,c,d,T₂⟩_{β₂}`.
    fn accumulate(&mut self, rel: &mut Relation<F>, level: Level, [a, b, c, d]: [usize; 4], t: &[u16], positive: bool) -> Result<(), EngineError> {
        let g = self.geometry();
        let n = g.n() as i64;
        let codims: Vec<i64> = self.table.codims.iter().map(|&c| i64::from(c)).collect();
        let diagonal = self.table.diagonal.clone();
        let total_t: usize = t.iter().map(|&c| c as usize).sum();
        let present: Vec<usize> = (0..t.len()).filter(|&i| t[i] > 0).collect();
        let splits = self.splittings_of(level.beta);
        let mut sub = vec![0u16; t.len()];
        for &(b1, b2) in splits.iter() {
            let base1 = g.vdim(b1, 3) - codims[a] - codims[b];
            // odometer over sub-multisets T₁ ⊆ T
            sub.iter_mut().for_each(|x| *x = 0);
            if b2.is_zero() {
                sub.copy_from_slice(t);
            }
            loop {
                let size1: usize = sub.iter().map(|&x| x as usize).sum();
                let valid = !(b1.is_zero() && size1 != 0) && !(b2.is_zero() && size1 != total_t);
                if valid {
                    let codim1: i64 = present.iter().map(|&i| i64::from(sub[i]) * (codims[i] - 1)).sum();
                    let cx = base1 - codim1;
                    if (0..=n).contains(&cx) {
                        self.accumulate_split(rel, level, (b1, b2), [a, b, c, d], t, &sub, cx, &diagonal, positive)?;
                    }
                }
                if b1.is_zero() || b2.is_zero() || !advance(&mut sub, t, &present) {
                    break;
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn accumulate_split(
        &mut self,
        rel: &mut Relation<F>,
        level: Level,
        (b1, b2): (CurveClass, CurveClass),
        [a, b, c, d]: [usize; 4],
        t: &[u16],
        t1: &[u16],
        cx: i64,
        diagonal: &[(usize, usize, i32)],
        positive: bool,
    ) -> Result<(), EngineError> {
        let mut weight = num_bigint::BigInt::from(1);
        for (i, &k) in t1.iter().enumerate() {
            if k > 0 && k < t[i] {
                weight *= binomial_int(u64::from(t[i]), u64::from(k));
            }
        }
        for &(x, y, s) in diagonal {
            if i64::from(self.table.codims[x]) != cx {
                continue;
            }
            let mut c1 = t1.to_vec();
            c1[a] += 1;
            c1[b] += 1;
            c1[x] += 1;
            let f1 = self.factor(level, b1, c1)?;
            if matches!(f1, Factor::Zero) {
                continue;
            }
            let mut c2: Vec<u16> = t.iter().zip(t1).map(|(&p, &q)| p - q).collect();
            c2[y] += 1;
            c2[c] += 1;
            c2[d] += 1;
            let f2 = self.factor(level, b2, c2)?;
            let sign = if positive { s } else { -s };
            let coef = F::from_bigint(&(weight.clone() * sign));
            match (f1, f2) {
                (_, Factor::Zero) | (Factor::Zero, _) => {}
                (Factor::Known(v1), Factor::Known(v2)) => {
                    rel.terms += 1;
                    rel.rhs = rel.rhs.clone() - coef * v1 * v2;
                }
                (Factor::Unknown(k, m), Factor::Known(v)) | (Factor::Known(v), Factor::Unknown(k, m)) => {
                    rel.terms += 1;
                    rel.add_lhs(k, coef * m * v);
                }
                (Factor::Unknown(k1, _), Factor::Unknown(k2, _)) => {
                    unreachable!("two unknown factors {k1} and {k2} in one term")
                }
            }
        }
        Ok(())
    }

    fn factor(&mut self, level: Level, beta: CurveClass, counts: Vec<u16>) -> Result<Factor<F>, EngineError> {
        match reduce::<F>(&self.table, beta, counts, None) {
            EvalResult::Value(v) if v.is_negligible() => Ok(Factor::Zero),
            EvalResult::Value(v) => Ok(Factor::Known(v)),
            EvalResult::Canonical { key, multiplier } => {
                if let Some(v) = self.store.get(&key) {
                    return Ok(Factor::Known(v.clone() * multiplier));
                }
                if Level::of(&key) == level {
                    Ok(Factor::Unknown(key, multiplier))
                } else {
                    let v = self.canonical_value(&key)?;
                    Ok(Factor::Known(v * multiplier))
                }
            }
        }
    }

    /// Residual of a relation once all its left-hand terms are evaluated.
    pub fn relation_residual(&mut self, rel: &Relation<F>) -> Result<F, EngineError> {
        let mut values = HashMap::new();
        for k in rel.lhs.keys() {
            values.insert(k.clone(), self.canonical_value(k)?);
        }
        Ok(rel.residual(|k| values[k].clone()))
    }
}

/// Next sub-multiset in odometer order; false after the last one.
fn advance(sub: &mut [u16], full: &[u16], present: &[usize]) -> bool {
    for &i in present {
        if sub[i] < full[i] {
            sub[i] += 1;
            return true;
        }
        sub[i] = 0;
    }
    false
}

/// All ordered choices of four members of a multiset.
fn pick_quadruples(present: &[usize], rem: &mut Vec<u16>, chosen: &mut Vec<usize>, out: &mut Vec<Instance>) {
    if chosen.len() == 4 {
        out.push(([chosen[0], chosen[1], chosen[2], chosen[3]], rem.clone()));
        return;
    }
    for &i in present {
        if rem[i] == 0 {
            continue;
        }
        rem[i] -= 1;
        chosen.push(i);
        pick_quadruples(present, rem, chosen, out);
        chosen.pop();
        rem[i] += 1;
    }
}
