//! A set of engines sharing one memo store across geometries.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::Geometry;
use crate::memo::{MemoError, MemoStore};
use crate::reconstruction::Engine;
use crate::scalar::Scalar;

pub struct Workbench<F: Scalar> {
    engines: BTreeMap<Geometry, Engine<F>>,
    pending: BTreeMap<Geometry, MemoStore<F>>,
}

impl<F: Scalar> Default for Workbench<F> {
    fn default() -> Self {
        Workbench { engines: BTreeMap::new(), pending: BTreeMap::new() }
    }
}

impl<F: Scalar> Workbench<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Seeds the workbench from a mixed-geometry store.
    pub fn from_store(store: &MemoStore<F>) -> Result<Self, MemoError> {
        let mut wb = Self::new();
        let mut keys: Vec<_> = store.iter().collect();
        keys.sort_by(|a, b| a.0.cmp(b.0));
        for (k, v) in keys {
            wb.pending.entry(k.geometry()).or_default().insert(k.clone(), v.clone())?;
        }
        for s in wb.pending.values_mut() {
            s.mark_clean();
        }
        Ok(wb)
    }

    pub fn engine(&mut self, geom: Geometry) -> &mut Engine<F> {
        let pending = &mut self.pending;
        self.engines.entry(geom).or_insert_with(|| Engine::with_store(geom, pending.remove(&geom).unwrap_or_default()))
    }

    /// Union of every engine's store (plus untouched loaded entries).
    pub fn combined_store(&self) -> Result<MemoStore<F>, MemoError> {
        let mut out = MemoStore::new();
        for s in self.pending.values() {
            out.merge(s)?;
        }
        for e in self.engines.values() {
            out.merge(e.store())?;
        }
        Ok(out)
    }

    pub fn is_dirty(&self) -> bool {
        self.engines.values().any(|e| e.store().is_dirty())
    }

    pub fn engines(&self) -> impl Iterator<Item = &Engine<F>> {
        self.engines.values()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub key: String,
    pub stored: String,
    /// Recomputed value, or the engine error it produced.
    pub recomputed: Result<String, String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.recomputed.as_ref() == Ok(&self.stored)
    }
}

/// Recomputes a seeded sample of `fraction` of the stored entries (at least
/// one when the store is nonempty) with fresh engines and compares.
pub fn verify_sample<F: Scalar>(store: &MemoStore<F>, fraction: f64, seed: u64) -> Vec<VerifyOutcome> {
    let mut keys = store.keys_sorted();
    if keys.is_empty() {
        return Vec::new();
    }
    let take = ((keys.len() as f64 * fraction.clamp(0.0, 1.0)).ceil() as usize).max(1);
    keys.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    keys.truncate(take);
    keys.sort();
    let mut fresh = Workbench::<F>::new();
    keys.into_iter()
        .map(|k| {
            let stored = store.get(&k).expect("sampled from store").to_ratio_string();
            let recomputed = fresh.engine(k.geometry()).canonical_value(&k).map(|v| v.to_ratio_string()).map_err(|e| e.to_string());
            VerifyOutcome { key: k.to_string(), stored, recomputed }
        })
        .collect()
}
