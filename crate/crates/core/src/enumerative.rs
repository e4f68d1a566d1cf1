//! Curve counts, the three reference tables, and independent cross-checks.
//!
//! For `d > 0`, `e ≥ 0` and classes pulled back from `Pⁿ`, the invariant
//! `⟨α₁,…,α_N⟩_{dH'-eE'}` of the blow-up counts rational degree-`d` curves
//! meeting general linear subspaces of codimensions `c_i` and passing through
//! the blown-up point with multiplicity `e`, provided
//! `Σ (c_i - 1) = d(n+1) - e(n-1) + n - 3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{CheckItem, CheckReport};
use crate::geometry::{BasisIndex, CurveClass, Geometry};
use crate::published;
use crate::reconstruction::{Engine, EngineError};
use crate::scalar::{binomial_int, Scalar};
use crate::session::Workbench;

#[derive(Debug, Error)]
pub enum EnumerativeError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("dimension condition fails: sum of (codim - 1) is {got}, need {expected}")]
    DimensionMismatch { expected: i64, got: i64 },
    #[error("invariant {value} is not an integer")]
    NonIntegralCount { value: String },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

/// Degree-`d` rational curves in `Pⁿ` with an `e`-fold point at `P`, meeting
/// general linear subspaces of the given codimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountQuery {
    pub n: u32,
    pub d: i64,
    pub e: i64,
    pub codims: Vec<u32>,
}

impl CountQuery {
    pub fn required_excess(&self) -> i64 {
        let n = self.n as i64;
        self.d * (n + 1) - self.e * (n - 1) + n - 3
    }

    pub fn validate(&self) -> Result<(), EnumerativeError> {
        if self.n < 2 {
            return Err(EnumerativeError::InvalidQuery(format!("n = {} < 2", self.n)));
        }
        if self.d <= 0 || self.e < 0 {
            return Err(EnumerativeError::InvalidQuery(format!("need d > 0 and e >= 0, got d = {}, e = {}", self.d, self.e)));
        }
        if let Some(c) = self.codims.iter().find(|&&c| c < 1 || c > self.n) {
            return Err(EnumerativeError::InvalidQuery(format!("codimension {c} out of range 1..={}", self.n)));
        }
        let got: i64 = self.codims.iter().map(|&c| c as i64 - 1).sum();
        let expected = self.required_excess();
        if got != expected {
            return Err(EnumerativeError::DimensionMismatch { expected, got });
        }
        Ok(())
    }
}

pub fn curve_count<F: Scalar>(engine: &mut Engine<F>, q: &CountQuery) -> Result<BigInt, EnumerativeError> {
    q.validate()?;
    let geom = engine.geometry();
    if !geom.is_blowup() || geom.n() != q.n {
        return Err(EnumerativeError::InvalidQuery(format!("engine is for {geom}, query needs the blow-up of P^{}", q.n)));
    }
    let classes: Vec<BasisIndex> = q.codims.iter().map(|&c| BasisIndex::h(c)).collect();
    let v = engine.evaluate(CurveClass::new(q.d, q.e), &classes)?;
    v.to_integer().ok_or_else(|| EnumerativeError::NonIntegralCount { value: v.to_ratio_string() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "P2-points")]
    P2Points,
    #[serde(rename = "P3-points")]
    P3Points,
    #[serde(rename = "P3-exceptional")]
    P3Exceptional,
}

impl TableId {
    pub const ALL: [TableId; 3] = [TableId::P2Points, TableId::P3Points, TableId::P3Exceptional];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::P2Points => "P2-points",
            TableId::P3Points => "P3-points",
            TableId::P3Exceptional => "P3-exceptional",
        }
    }

    pub fn geometry(self) -> Geometry {
        match self {
            TableId::P2Points => Geometry::blowup(2),
            TableId::P3Points | TableId::P3Exceptional => Geometry::blowup(3),
        }
        .expect("n >= 2")
    }

    /// The repeated insertion of this table.
    pub fn insertion(self) -> BasisIndex {
        match self {
            TableId::P2Points => BasisIndex::h(2),
            TableId::P3Points => BasisIndex::h(3),
            TableId::P3Exceptional => BasisIndex::e(2),
        }
    }

    /// Number of insertions of cell `(d, e)`; may be negative.
    pub fn insertion_count(self, d: i64, e: i64) -> i64 {
        match self {
            TableId::P2Points => 3 * d - 1 - e,
            TableId::P3Points => 2 * d - e,
            TableId::P3Exceptional => 4 * d - 2 * e,
        }
    }

    pub fn published_e_range(self) -> (i64, i64) {
        match self {
            TableId::P2Points => (0, 6),
            TableId::P3Points => (0, 4),
            TableId::P3Exceptional => (-3, 3),
        }
    }

    pub fn published_dmax(self) -> i64 {
        match self {
            TableId::P2Points => 7,
            TableId::P3Points => 8,
            TableId::P3Exceptional => 4,
        }
    }

    /// The published grid, rows in increasing `e`.
    pub fn published_rows(self) -> Vec<&'static [i64]> {
        match self {
            TableId::P2Points => published::P2_POINTS.iter().map(|r| &r[..]).collect(),
            TableId::P3Points => published::P3_POINTS.iter().map(|r| &r[..]).collect(),
            TableId::P3Exceptional => published::P3_EXCEPTIONAL.iter().map(|r| &r[..]).collect(),
        }
    }

    pub fn published(self, d: i64, e: i64) -> Option<i64> {
        published::lookup(&self.published_rows(), self.published_e_range().0, d, e)
    }

    /// Tables of point insertions print zero above `e = d`.
    fn zero_past_diagonal(self) -> bool {
        !matches!(self, TableId::P3Exceptional)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown table `{s}` (expected P2-points, P3-points or P3-exceptional)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableSpec {
    pub id: TableId,
    pub dmax: i64,
    pub e_min: i64,
    pub e_max: i64,
}

impl TableSpec {
    pub fn new(id: TableId, dmax: i64) -> Self {
        let (e_min, e_max) = id.published_e_range();
        TableSpec { id, dmax, e_min, e_max }
    }

    pub fn published(id: TableId) -> Self {
        Self::new(id, id.published_dmax())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub d: i64,
    pub e: i64,
    pub value: BigInt,
    /// No invariant was computed: the insertion count is negative or the
    /// class lies past the diagonal.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub spec: TableSpec,
    /// Row-major in `e`, then `d`.
    pub cells: Vec<Cell>,
}

#[derive(Serialize, Deserialize)]
struct JsonCell {
    d: i64,
    e: i64,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    id: TableId,
    cells: Vec<JsonCell>,
}

/// `(d, e, value)` read back from the JSON rendering.
pub type ParsedCell = (i64, i64, BigInt);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub d: i64,
    pub e: i64,
    pub computed: BigInt,
    pub published: i64,
}

impl Table {
    pub fn get(&self, d: i64, e: i64) -> Option<&BigInt> {
        self.cells.iter().find(|c| c.d == d && c.e == e).map(|c| &c.value)
    }

    pub fn row(&self, e: i64) -> Vec<BigInt> {
        self.cells.iter().filter(|c| c.e == e).map(|c| c.value.clone()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("e\\d");
        for d in 1..=self.spec.dmax {
            out.push_str(&format!(",{d}"));
        }
        out.push('\n');
        for e in self.spec.e_min..=self.spec.e_max {
            out.push_str(&e.to_string());
            for v in self.row(e) {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| e \\ d |");
        for d in 1..=self.spec.dmax {
            out.push_str(&format!(" {d} |"));
        }
        out.push_str("\n|---|");
        for _ in 1..=self.spec.dmax {
            out.push_str("---:|");
        }
        out.push('\n');
        let mut any_vacuous = false;
        for e in self.spec.e_min..=self.spec.e_max {
            out.push_str(&format!("| {e} |"));
            for c in self.cells.iter().filter(|c| c.e == e) {
                if c.vacuous {
                    any_vacuous = true;
                    out.push_str(&format!(" {}† |", c.value));
                } else {
                    out.push_str(&format!(" {} |", c.value));
                }
            }
            out.push('\n');
        }
        if any_vacuous {
            out.push_str("\n† no invariant: negative insertion count or non-effective class\n");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let t = JsonTable { id: self.spec.id, cells: self.cells.iter().map(|c| JsonCell { d: c.d, e: c.e, value: c.value.to_string() }).collect() };
        serde_json::to_string(&t).expect("table serializes")
    }

    /// Parses the JSON rendering back into `(id, [(d, e, value)])`.
    pub fn parse_json(text: &str) -> Result<(TableId, Vec<ParsedCell>), String> {
        let t: JsonTable = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let cells = t.cells.into_iter().map(|c| c.value.parse::<BigInt>().map(|v| (c.d, c.e, v)).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        Ok((t.id, cells))
    }

    /// Cells that disagree with the published grid (cells outside it are ignored).
    pub fn diff_published(&self) -> Vec<Mismatch> {
        self.cells
            .iter()
            .filter_map(|c| {
                let p = self.spec.id.published(c.d, c.e)?;
                (c.value != BigInt::from(p)).then(|| Mismatch { d: c.d, e: c.e, computed: c.value.clone(), published: p })
            })
            .collect()
    }

    /// Number of published cells this table covers.
    pub fn published_cells_covered(&self) -> usize {
        self.cells.iter().filter(|c| self.spec.id.published(c.d, c.e).is_some()).count()
    }
}

pub fn table_cell<F: Scalar>(engine: &mut Engine<F>, id: TableId, d: i64, e: i64) -> Result<Cell, EnumerativeError> {
    let geom = engine.geometry();
    if geom != id.geometry() {
        return Err(EnumerativeError::InvalidQuery(format!("table {id} needs {}, engine is for {geom}", id.geometry())));
    }
    let count = id.insertion_count(d, e);
    let beta = CurveClass::new(d, e);
    if count < 0 || (id.zero_past_diagonal() && e > d) || !geom.is_effective(beta) {
        return Ok(Cell { d, e, value: BigInt::zero(), vacuous: true });
    }
    let classes = vec![id.insertion(); count as usize];
    let v = engine.evaluate(beta, &classes)?;
    let value = v.to_integer().ok_or_else(|| EnumerativeError::NonIntegralCount { value: v.to_ratio_string() })?;
    Ok(Cell { d, e, value, vacuous: false })
}

pub fn emit_table<F: Scalar>(engine: &mut Engine<F>, spec: TableSpec) -> Result<Table, EnumerativeError> {
    if spec.dmax < 1 {
        return Err(EnumerativeError::InvalidQuery("dmax must be at least 1".into()));
    }
    // fill in order of increasing mass so each level is solved once, bottom-up
    let mut order: Vec<(i64, i64)> = (spec.e_min..=spec.e_max).flat_map(|e| (1..=spec.dmax).map(move |d| (d, e))).collect();
    order.sort_by_key(|&(d, e)| (2 * d - e, d));
    let mut cells = Vec::with_capacity(order.len());
    for (d, e) in order {
        cells.push(table_cell(engine, spec.id, d, e)?);
    }
    cells.sort_by_key(|c| (c.e, c.d));
    Ok(Table { spec, cells })
}

/// Plane curve counts `N_1..N_dmax` from Kontsevich's recursion.
pub fn kontsevich_oracle(dmax: usize) -> Vec<BigInt> {
    let mut n: Vec<BigInt> = vec![BigInt::zero(); dmax + 1];
    if dmax >= 1 {
        n[1] = BigInt::one();
    }
    for d in 2..=dmax {
        let mut acc = BigInt::zero();
        let top = 3 * d as u64 - 4;
        for d1 in 1..d {
            let d2 = d - d1;
            let (a, b) = (d1 as u64, d2 as u64);
            let term = BigInt::from(b) * binomial_int(top, 3 * a - 2) - BigInt::from(a) * binomial_int(top, 3 * a - 1);
            acc += &n[d1] * &n[d2] * BigInt::from(a * a * b) * term;
        }
        n[d] = acc;
    }
    n.split_off(1)
}

/// Dimension of the family of degree-`d` rational plane curves with an
/// `e`-fold point at `P`, derived twice.
pub fn expected_dim_p2(d: i64, e: i64) -> i64 {
    assert!(d >= 1 && 0 <= e && e <= d, "need d >= 1 and 0 <= e <= d");
    let g = Geometry::blowup(2).expect("n = 2");
    // unpointed maps: one image curve per map, up to finitely many
    let from_vdim = g.vdim(CurveClass::new(d, e), 0);
    let linear_system = (d + 1) * (d + 2) / 2 - 1;
    let multiple_point = e * (e + 1) / 2;
    let extra_nodes = (d - 1) * (d - 2) / 2 - e * (e - 1) / 2;
    let from_count = linear_system - multiple_point - extra_nodes;
    assert_eq!(from_vdim, from_count, "dimension counts disagree at d={d}, e={e}");
    from_vdim
}

/// Genus of the normalization of a degree-`d` plane curve with ordinary
/// `k_i`-fold points and no other singularities.
pub fn genus_with_multiple_points(d: i64, multiplicities: &[i64]) -> i64 {
    (d - 1) * (d - 2) / 2 - multiplicities.iter().map(|k| k * (k - 1) / 2).sum::<i64>()
}

fn check_eq<F: Scalar>(items: &mut Vec<CheckItem>, name: String, left: Result<F, EngineError>, right: Result<F, EngineError>) {
    let item = match (left, right) {
        (Ok(l), Ok(r)) => {
            let passed = l == r;
            CheckItem::new(name, passed, format!("{} vs {}", l.to_ratio_string(), r.to_ratio_string()))
        }
        (Err(e), _) | (_, Err(e)) => CheckItem::new(name, false, format!("engine error: {e}")),
    };
    items.push(item);
}

/// Identities between invariants that hold for classes pulled back from `Pⁿ`:
/// the `e = 1` row equals the `e = 0` row, the `e = 0` row equals the plain
/// invariant and the plane recursion, `e = -1` invariants vanish, and the
/// `(d, d-1)` cell of the plane table is 1.
pub fn consistency_suite<F: Scalar>(bench: &mut Workbench<F>, dmax_p2: i64, dmax_p3: i64) -> CheckReport {
    let mut items = Vec::new();
    let b2 = Geometry::blowup(2).expect("n = 2");
    let p2 = Geometry::plain(2).expect("n = 2");
    let b3 = Geometry::blowup(3).expect("n = 3");
    let p3 = Geometry::plain(3).expect("n = 3");
    let pt2 = b2.point();
    let pt3 = b3.point();
    let oracle = kontsevich_oracle(dmax_p2.max(1) as usize);
    for d in 1..=dmax_p2 {
        let e0 = bench.engine(b2).evaluate(CurveClass::new(d, 0), &vec![pt2; (3 * d - 1) as usize]);
        let e1 = bench.engine(b2).evaluate(CurveClass::new(d, 1), &vec![pt2; (3 * d - 2) as usize]);
        check_eq(&mut items, format!("P2 e=1 row equals e=0 row at d={d}"), e1, clone_res(&e0));
        let plain = bench.engine(p2).evaluate(CurveClass::degree(d), &vec![pt2; (3 * d - 1) as usize]);
        check_eq(&mut items, format!("P2 e=0 row equals plain P2 at d={d}"), clone_res(&e0), clone_res(&plain));
        let k = Ok(F::from_bigint(&oracle[(d - 1) as usize]));
        check_eq(&mut items, format!("plain P2 equals Kontsevich recursion at d={d}"), plain, k);
    }
    for d in 1..=dmax_p2.min(4) {
        // β = dH' + E': 3d point classes
        let v = bench.engine(b2).evaluate(CurveClass::new(d, -1), &vec![pt2; (3 * d) as usize]);
        check_eq(&mut items, format!("P2 e=-1 point invariant vanishes at d={d}"), v, Ok(F::zero()));
    }
    for d in 2..=dmax_p2 {
        let v = bench.engine(b2).evaluate(CurveClass::new(d, d - 1), &vec![pt2; (2 * d) as usize]);
        check_eq(&mut items, format!("P2 (d, d-1) cell is 1 at d={d}"), v, Ok(F::one()));
    }
    for d in 1..=dmax_p3 {
        let e0 = bench.engine(b3).evaluate(CurveClass::new(d, 0), &vec![pt3; (2 * d) as usize]);
        let e1 = bench.engine(b3).evaluate(CurveClass::new(d, 1), &vec![pt3; (2 * d - 1) as usize]);
        check_eq(&mut items, format!("P3 e=1 row equals e=0 row at d={d}"), e1, clone_res(&e0));
        let plain = bench.engine(p3).evaluate(CurveClass::degree(d), &vec![pt3; (2 * d) as usize]);
        check_eq(&mut items, format!("P3 e=0 row equals plain P3 at d={d}"), e0, plain);
    }
    for d in 1..=dmax_p3.min(4) {
        // β = dH' + E' on P³: 2d + 1 point classes
        let v = bench.engine(b3).evaluate(CurveClass::new(d, -1), &vec![pt3; (2 * d + 1) as usize]);
        check_eq(&mut items, format!("P3 e=-1 point invariant vanishes at d={d}"), v, Ok(F::zero()));
    }
    CheckReport::new("remarks", items)
}

fn clone_res<F: Clone>(r: &Result<F, EngineError>) -> Result<F, EngineError> {
    match r {
        Ok(v) => Ok(v.clone()),
        Err(e) => Err(EngineError::MissingSolvedKey(format!("earlier failure: {e}"))),
    }
}
