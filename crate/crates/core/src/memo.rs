//! Memo store for canonical invariants and its line-oriented cache file.
//!
//! One JSON record per line:
//!
//! ```text
//! {"space":"blowup","n":2,"d":3,"e":2,"classes":["H2","H2",...],"value":"1/1"}
//! ```
//!
//! Lines are written sorted, so two stores with the same contents produce
//! byte-identical files.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{BasisIndex, CurveClass, Geometry, Space};
use crate::invariant::InvariantKey;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum MemoError {
    #[error("cache I/O: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("conflicting cache entry for {key}: {existing} vs {incoming}")]
    ConflictingCacheEntry { key: String, existing: String, incoming: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheRecord {
    pub space: Space,
    pub n: u32,
    pub d: i64,
    pub e: i64,
    pub classes: Vec<String>,
    pub value: String,
}

impl CacheRecord {
    pub fn from_entry<F: Scalar>(key: &InvariantKey, value: &F) -> Self {
        let g = key.geometry();
        CacheRecord {
            space: g.space(),
            n: g.n(),
            d: key.beta().d,
            e: key.beta().e,
            classes: key.classes().iter().map(|c| c.to_string()).collect(),
            value: value.to_ratio_string(),
        }
    }

    pub fn to_entry<F: Scalar>(&self) -> Result<(InvariantKey, F), String> {
        let geom = Geometry::new(self.space, self.n).map_err(|e| e.to_string())?;
        let beta = geom.check_curve(CurveClass::new(self.d, self.e)).map_err(|e| e.to_string())?;
        let classes =
            self.classes.iter().map(|t| t.parse::<BasisIndex>().and_then(|b| geom.check(b))).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        let value = F::parse_ratio(&self.value).ok_or_else(|| format!("bad value `{}`", self.value))?;
        Ok((InvariantKey::new(geom, beta, &classes), value))
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Canonical invariant values, with the set of entries not yet persisted.
#[derive(Debug, Clone)]
pub struct MemoStore<F> {
    values: HashMap<InvariantKey, F>,
    dirty: HashSet<InvariantKey>,
}

impl<F> Default for MemoStore<F> {
    fn default() -> Self {
        MemoStore { values: HashMap::new(), dirty: HashSet::new() }
    }
}

impl<F: Scalar> MemoStore<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, key: &InvariantKey) -> Option<&F> {
        self.values.get(key)
    }

    pub fn contains(&self, key: &InvariantKey) -> bool {
        self.values.contains_key(key)
    }

    /// Insert-if-equal: a second insert of the same key must agree.
    pub fn insert(&mut self, key: InvariantKey, value: F) -> Result<(), MemoError> {
        if let Some(old) = self.values.get(&key) {
            if *old != value {
                return Err(MemoError::ConflictingCacheEntry { key: key.to_string(), existing: old.to_ratio_string(), incoming: value.to_ratio_string() });
            }
            return Ok(());
        }
        self.dirty.insert(key.clone());
        self.values.insert(key, value);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InvariantKey, &F)> {
        self.values.iter()
    }

    pub fn keys_sorted(&self) -> Vec<InvariantKey> {
        let mut keys: Vec<_> = self.values.keys().cloned().collect();
        keys.sort();
        keys
    }

    pub fn is_dirty(&self) -> bool {
        !self.dirty.is_empty()
    }

    pub fn mark_clean(&mut self) {
        self.dirty.clear();
    }

    /// Union; fails on the first disagreeing overlap.
    pub fn merge(&mut self, other: &MemoStore<F>) -> Result<(), MemoError> {
        let mut incoming: Vec<_> = other.values.iter().collect();
        incoming.sort_by(|a, b| a.0.cmp(b.0));
        for (k, v) in incoming {
            self.insert(k.clone(), v.clone())?;
        }
        Ok(())
    }

    pub fn to_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.values.iter().map(|(k, v)| CacheRecord::from_entry(k, v).to_line()).collect();
        lines.sort();
        lines
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for l in self.to_lines() {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, MemoError> {
        let mut store = MemoStore::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(line).map_err(|e| MemoError::Parse { line: i + 1, msg: e.to_string() })?;
            let (k, v) = rec.to_entry::<F>().map_err(|msg| MemoError::Parse { line: i + 1, msg })?;
            store.insert(k, v)?;
        }
        store.mark_clean();
        Ok(store)
    }

    pub fn save(&mut self, path: &Path) -> Result<(), MemoError> {
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.dump())?;
        fs::rename(&tmp, path)?;
        self.mark_clean();
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, MemoError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Loads `path`, or an empty store when it does not exist yet.
    pub fn load_or_default(path: &Path) -> Result<Self, MemoError> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }
}

pub fn save_memo<F: Scalar>(store: &mut MemoStore<F>, path: &Path) -> Result<(), MemoError> {
    store.save(path)
}

pub fn load_memo<F: Scalar>(path: &Path) -> Result<MemoStore<F>, MemoError> {
    MemoStore::load(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn pt5() -> InvariantKey {
        let g = Geometry::blowup(2).unwrap();
        InvariantKey::new(g, CurveClass::new(2, 0), &[g.point(); 5])
    }

    #[test]
    fn record_format() {
        let mut s = MemoStore::<Q>::new();
        s.insert(pt5(), Q::from_int(1)).unwrap();
        assert_eq!(s.dump(), "{\"space\":\"blowup\",\"n\":2,\"d\":2,\"e\":0,\"classes\":[\"H2\",\"H2\",\"H2\",\"H2\",\"H2\"],\"value\":\"1/1\"}\n");
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("memo.jsonl");
        let mut s = MemoStore::<Q>::new();
        s.insert(pt5(), Q::from_int(1)).unwrap();
        assert!(s.is_dirty());
        save_memo(&mut s, &path).unwrap();
        assert!(!s.is_dirty());
        let loaded: MemoStore<Q> = load_memo(&path).unwrap();
        assert_eq!(loaded.get(&pt5()), Some(&Q::from_int(1)));
        assert_eq!(loaded.dump(), fs::read_to_string(&path).unwrap());
    }

    #[test]
    fn merge_union_and_conflict() {
        let g = Geometry::blowup(3).unwrap();
        let other_key = InvariantKey::new(g, CurveClass::new(1, -1), &[BasisIndex::e(2); 6]);
        let mut a = MemoStore::<Q>::new();
        a.insert(pt5(), Q::from_int(1)).unwrap();
        let mut b = MemoStore::<Q>::new();
        b.insert(other_key.clone(), Q::from_int(3)).unwrap();
        a.merge(&b).unwrap();
        assert_eq!(a.len(), 2);
        let mut c = MemoStore::<Q>::new();
        c.insert(other_key, Q::from_int(4)).unwrap();
        assert!(matches!(a.merge(&c), Err(MemoError::ConflictingCacheEntry { .. })));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "{\"space\":\"blowup\",\"n\":2,\"d\":2,\"e\":0,\"classes\":[\"H2\"],\"value\":\"1/1\"}\nnot json\n";
        match MemoStore::<Q>::parse(text) {
            Err(MemoError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let bad_class = "{\"space\":\"plain\",\"n\":2,\"d\":1,\"e\":0,\"classes\":[\"E1\"],\"value\":\"1/1\"}";
        assert!(matches!(MemoStore::<Q>::parse(bad_class), Err(MemoError::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn dump_parse_is_identity(entries in prop::collection::vec((0i64..6, -3i64..4, prop::collection::vec(0u32..5, 1..6), -50i64..50, 1i64..9), 0..12)) {
            let g = Geometry::blowup(4).unwrap();
            let mut s = MemoStore::<Q>::new();
            for (d, e, cls, num, den) in entries {
                let classes: Vec<BasisIndex> = cls.iter().map(|&l| if l == 0 { BasisIndex::e(3) } else { BasisIndex::h(l) }).collect();
                let key = InvariantKey::new(g, CurveClass::new(d, e), &classes);
                if !s.contains(&key) {
                    s.insert(key, Q::new(num.into(), den.into())).unwrap();
                }
            }
            let text = s.dump();
            let back = MemoStore::<Q>::parse(&text).unwrap();
            prop_assert_eq!(back.dump(), text);
            prop_assert_eq!(back.len(), s.len());
        }
    }
}
