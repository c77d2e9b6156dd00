//! Weight enumeration, potential search, the golden tables and catalog output.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{intermediate_subgroups, j_group, quotient_structure, sl_group, DiagonalSubgroup, Symmetry};
use crate::involution::nikulin_triple;
use crate::lattice::NikulinTriple;
use crate::potential::{permutations, Potential, Shape};
use crate::quotient::mirror_pair_check;
use crate::wps::{gcd_slice, hypersurface_singularities, inventory_totals, WeightSystem};

pub const DEFAULT_DMAX: i64 = 66;

pub const TABLES_1_5_JSON: &str = include_str!("../../../data/tables_1_5.json");
pub const TABLES_6_7_JSON: &str = include_str!("../../../data/tables_6_7.json");
pub const FAKE_WPS_FAN_JSON: &str = include_str!("../../../data/fake_wps_no30_fan.json");

/// All `(w1, w2, w3, w4)` with `w1 = w2 + w3 + w4`, `w2 >= w3 >= w4`, degree
/// `2 w1 <= dmax`, well formed and carrying at least one invertible potential.
pub fn enumerate_weights(dmax: i64) -> Vec<WeightSystem> {
    let mut out = Vec::new();
    for w2 in 1..=dmax / 2 {
        for w3 in 1..=w2 {
            for w4 in 1..=w3 {
                let w1 = w2 + w3 + w4;
                if 2 * w1 > dmax {
                    continue;
                }
                let ws = WeightSystem::new(vec![w1, w2, w3, w4], 2 * w1);
                if ws.is_well_formed_hypersurface() && !potentials_for_weights(&ws).is_empty() {
                    out.push(ws);
                }
            }
        }
    }
    out.sort_by_key(|ws| (ws.degree, std::cmp::Reverse(ws.weights.clone())));
    out
}

/// Invertible potentials `x^2 + f(y, z, w)` of the five shapes with the given
/// weights, one per canonical class.
pub fn potentials_for_weights(ws: &WeightSystem) -> Vec<Potential> {
    let d = ws.degree;
    let wy = &ws.weights[1..];
    let mut seen = BTreeMap::new();
    for shape in Shape::ALL {
        for perm in permutations(3) {
            let mut a = [0i64; 3];
            let mut ok = true;
            for (k, (own, ptr)) in shape.pattern().into_iter().enumerate() {
                let rest = d - ptr.map_or(0, |p| wy[perm[p]]);
                if rest % wy[perm[own]] != 0 || rest / wy[perm[own]] < 2 {
                    ok = false;
                    break;
                }
                a[k] = rest / wy[perm[own]];
            }
            if !ok {
                continue;
            }
            // shape.potential places the atoms on y, z, w; move them to perm
            let base = shape.potential(a);
            let mut inv = [0usize; 4];
            for k in 0..3 {
                inv[perm[k] + 1] = k + 1;
            }
            let p = base.permute_variables(&inv);
            if !p.is_invertible() || p.charges().map(|c| c.w != ws.weights).unwrap_or(true) {
                continue;
            }
            seen.entry(p.canonical_key(&ws.weights)).or_insert(p);
        }
    }
    seen.into_values().collect()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct Erratum {
    pub sl_order: Option<u64>,
    pub j_order: Option<u64>,
    pub triple: Option<[i64; 3]>,
    pub transpose_ref: Option<String>,
    pub note: String,
}

/// A row of Tables 1-5 as printed.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct GoldenRow {
    pub table: u8,
    pub no: String,
    pub starred: bool,
    pub transpose_ref: Option<String>,
    pub weights: Vec<i64>,
    pub d: i64,
    pub f: String,
    pub triple: [i64; 3],
    pub sl_order: u64,
    pub j_order: u64,
    pub sl_mod_j: Option<Vec<u64>>,
    pub erratum: Option<Erratum>,
}

impl GoldenRow {
    pub fn id(&self) -> String {
        format!("T{}:{}", self.table, self.no)
    }

    pub fn potential(&self) -> Result<Potential> {
        Potential::parse_k3(&self.f)
    }

    pub fn corrected_triple(&self) -> NikulinTriple {
        let t = self.erratum.as_ref().and_then(|e| e.triple).unwrap_or(self.triple);
        NikulinTriple::new(t[0], t[1], t[2] as u8)
    }

    pub fn corrected_sl_order(&self) -> u64 {
        self.erratum.as_ref().and_then(|e| e.sl_order).unwrap_or(self.sl_order)
    }

    pub fn corrected_j_order(&self) -> u64 {
        self.erratum.as_ref().and_then(|e| e.j_order).unwrap_or(self.j_order)
    }

    /// Id of the transpose row; tables 1 and 3 are their own transposes.
    pub fn transpose_id(&self) -> String {
        let fixed = self.erratum.as_ref().and_then(|e| e.transpose_ref.as_ref());
        match fixed.or(self.transpose_ref.as_ref()) {
            Some(no) => format!("T{}:{}", self.table, no),
            None => self.id(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
struct GoldenFile {
    rows: Vec<GoldenRow>,
}

pub fn parse_golden(json: &str) -> Result<Vec<GoldenRow>> {
    let f: GoldenFile = serde_json::from_str(json).map_err(|e| Error::Data(e.to_string()))?;
    Ok(f.rows)
}

pub fn golden_rows() -> Vec<GoldenRow> {
    parse_golden(TABLES_1_5_JSON).expect("embedded golden table parses")
}

pub fn load_golden(path: &Path) -> Result<Vec<GoldenRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    parse_golden(&text)
}

/// One subgroup row of Tables 6 and 7: `G~` and its transpose with triples.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SubgroupRow {
    pub g_structure: Vec<u64>,
    pub g_generators: Vec<String>,
    pub g_vectors: Vec<Vec<String>>,
    pub g_triple: [i64; 3],
    pub gt_structure: Vec<u64>,
    pub gt_generators: Vec<String>,
    pub gt_vectors: Vec<Vec<String>>,
    pub gt_triple: [i64; 3],
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SubgroupTable {
    pub table: u8,
    pub base: String,
    pub f: String,
    pub rows: Vec<SubgroupRow>,
}

#[derive(Deserialize)]
struct SubgroupFile {
    tables: Vec<SubgroupTable>,
}

pub fn subgroup_tables() -> Vec<SubgroupTable> {
    let f: SubgroupFile = serde_json::from_str(TABLES_6_7_JSON).expect("embedded subgroup tables parse");
    f.tables
}

/// The subgroup `J + <vectors>` of the diagonal symmetries of `p`.
pub fn subgroup_from_vectors(p: &Potential, vectors: &[Vec<String>]) -> Result<DiagonalSubgroup> {
    let mut g = j_group(p)?;
    for v in vectors {
        let s = Symmetry::parse(&format!("({})", v.join(",")))?;
        g = g.join(&s)?;
    }
    Ok(g)
}

/// Rays of the resolved fake weighted projective plane shipped as data.
pub fn fake_wps_rays() -> Vec<[i64; 2]> {
    #[derive(Deserialize)]
    struct FanFile {
        rays: Vec<[i64; 2]>,
    }
    let f: FanFile = serde_json::from_str(FAKE_WPS_FAN_JSON).expect("embedded fan parses");
    f.rays
}

/// One computed row of the catalog.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub table: u8,
    pub weights: Vec<i64>,
    pub degree: i64,
    pub f: String,
    pub shape: String,
    pub singularities: String,
    pub triple: Option<[i64; 3]>,
    pub sl_order: u64,
    pub j_order: u64,
    pub sl_mod_j: Vec<u64>,
    pub transpose: Option<String>,
    pub mirror: Option<bool>,
    /// Why a column could not be computed.
    pub flag: Option<String>,
}

impl CatalogEntry {
    pub fn starred(&self) -> bool {
        !self.sl_mod_j.is_empty()
    }

    pub fn nikulin(&self) -> Option<NikulinTriple> {
        self.triple.map(|t| NikulinTriple::new(t[0], t[1], t[2] as u8))
    }

    pub fn potential(&self) -> Result<Potential> {
        Potential::parse_k3(&self.f)
    }

    /// `(15,10,3,2)  y^3+z^10+w^15  (10,4,0)  30  30  1`
    pub fn text_row(&self) -> String {
        let w: Vec<String> = self.weights.iter().map(i64::to_string).collect();
        let t = match self.triple {
            Some(t) => format!("({},{},{})", t[0], t[1], t[2]),
            None => "?".into(),
        };
        let q: u64 = self.sl_mod_j.iter().product();
        format!("({})  {}  {}  {}  {}  {}", w.join(","), self.f, t, self.sl_order, self.j_order, q)
    }
}

fn inventory_text(p: &Potential, ws: &WeightSystem) -> Result<String> {
    let recs = hypersurface_singularities(p, ws)?;
    let parts: Vec<String> = inventory_totals(&recs)
        .into_iter()
        .map(|(k, (n, _))| if n == 1 { format!("A{k}") } else { format!("{n}A{k}") })
        .collect();
    Ok(if parts.is_empty() { "smooth".into() } else { parts.join("+") })
}

fn entry_for(p: &Potential, ws: &WeightSystem) -> CatalogEntry {
    let shape = p.shape_tag().ok();
    let mut flag = None;
    let mut note = |e: Error| {
        flag.get_or_insert_with(|| e.to_string());
    };
    let singularities = inventory_text(p, ws).unwrap_or_else(|e| {
        note(e);
        "?".into()
    });
    let triple = match nikulin_triple(p) {
        Ok(t) => Some([t.r, t.a, i64::from(t.delta)]),
        Err(e) => {
            note(e);
            None
        }
    };
    let (sl_order, j_order, sl_mod_j) = match (sl_group(p), j_group(p)) {
        (Ok(sl), Ok(j)) => {
            let q = quotient_structure(&sl, &j).map(|s| s.as_u64()).unwrap_or_default();
            (sl.order_u64(), j.order_u64(), q)
        }
        (Err(e), _) | (_, Err(e)) => {
            note(e);
            (0, 0, vec![])
        }
    };
    CatalogEntry {
        id: String::new(),
        table: shape.map_or(0, Shape::table),
        weights: ws.weights.clone(),
        degree: ws.degree,
        f: p.f_text(),
        shape: shape.map_or("?", Shape::tag).to_string(),
        singularities,
        triple,
        sl_order,
        j_order,
        sl_mod_j,
        transpose: None,
        mirror: None,
        flag,
    }
}

type Key = (Vec<i64>, Vec<Vec<i64>>);

fn key_of(p: &Potential) -> Result<Key> {
    Ok(p.canonical_key(&p.charges()?.w))
}

/// Row number order: numeric part first, then the letter suffix.
fn row_order(no: &str) -> (u32, String) {
    let digits: String = no.chars().take_while(char::is_ascii_digit).collect();
    (digits.parse().unwrap_or(u32::MAX), no[digits.len()..].to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.flag.is_some())
    }
}

/// Every potential over every enumerated weight system, numbered after the
/// golden tables, with transpose links and mirror verdicts.
pub fn build_catalog(dmax: i64) -> Catalog {
    let golden = golden_rows();
    // matched rows keep the printed variable order
    let mut ids: HashMap<Key, (String, Potential, WeightSystem)> = HashMap::new();
    for g in &golden {
        let Ok(p) = g.potential() else { continue };
        if let (Ok(k), Ok(ws)) = (key_of(&p), WeightSystem::of(&p)) {
            ids.insert(k, (g.id(), p, ws));
        }
    }
    let mut entries = Vec::new();
    let mut keys = Vec::new();
    let mut fresh: BTreeMap<u8, usize> = BTreeMap::new();
    for ws in enumerate_weights(dmax) {
        for p in potentials_for_weights(&ws) {
            let key = p.canonical_key(&ws.weights);
            let (e, p) = match ids.get(&key) {
                Some((id, gp, gws)) => {
                    let mut e = entry_for(gp, gws);
                    e.id = id.clone();
                    (e, gp.clone())
                }
                None => {
                    let mut e = entry_for(&p, &ws);
                    let k = fresh.entry(e.table).or_insert(0);
                    *k += 1;
                    e.id = format!("T{}:new{}", e.table, k);
                    (e, p)
                }
            };
            keys.push((key, p));
            entries.push(e);
        }
    }
    let by_key: HashMap<&Key, usize> = keys.iter().enumerate().map(|(i, (k, _))| (k, i)).collect();
    let links: Vec<Option<usize>> =
        keys.iter().map(|(_, p)| key_of(&p.transpose()).ok().and_then(|k| by_key.get(&k).copied())).collect();
    for (i, l) in links.iter().enumerate() {
        entries[i].transpose = l.map(|j| entries[j].id.clone());
        entries[i].mirror = mirror_verdict(&entries, i, *l, &keys[i].1);
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by_key(|&i| {
        let e = &entries[i];
        let no = e.id.split(':').nth(1).unwrap_or("").to_string();
        (e.table, no.starts_with("new"), row_order(&no))
    });
    Catalog { entries: order.into_iter().map(|i| entries[i].clone()).collect() }
}

fn mirror_verdict(entries: &[CatalogEntry], i: usize, t: Option<usize>, p: &Potential) -> Option<bool> {
    let e = &entries[i];
    if e.starred() {
        let subs = intermediate_subgroups(p).ok()?;
        return Some(subs.iter().all(|g| mirror_pair_check(p, g).is_ok()));
    }
    let mine = e.nikulin()?.dv_mirror().ok()?;
    Some(entries[t?].nikulin()? == mine)
}

/// One comparison between the catalog and a golden row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub id: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn push(&mut self, id: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine { id: id.into(), ok, detail: detail.into() });
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.ok).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{} {} {}", if l.ok { "ok  " } else { "FAIL" }, l.id, l.detail);
        }
        let _ = writeln!(s, "{} checks, {} failures", self.lines.len(), self.failures());
        s
    }
}

/// Compares every golden row with the catalog (errata applied), and reports
/// catalog rows of degree at most 66 missing from the golden data.
pub fn verify_golden(catalog: &Catalog, golden: &[GoldenRow]) -> Report {
    let mut rep = Report::default();
    for g in golden {
        let id = g.id();
        let Some(e) = catalog.get(&id) else {
            rep.push(id, false, "not in catalog");
            continue;
        };
        let mut bad = Vec::new();
        if e.weights != g.weights || e.degree != g.d {
            bad.push(format!("weights {:?}/{} vs {:?}/{}", e.weights, e.degree, g.weights, g.d));
        }
        let want = g.corrected_triple();
        if e.nikulin() != Some(want) {
            bad.push(format!("triple {:?} vs {want}", e.triple));
        }
        if e.sl_order != g.corrected_sl_order() || e.j_order != g.corrected_j_order() {
            bad.push(format!("|SL|,|J| = {},{} vs {},{}", e.sl_order, e.j_order, g.corrected_sl_order(), g.corrected_j_order()));
        }
        if let Some(s) = &g.sl_mod_j {
            if &e.sl_mod_j != s {
                bad.push(format!("SL/J {:?} vs {s:?}", e.sl_mod_j));
            }
        }
        if e.starred() != g.starred {
            bad.push("star".into());
        }
        if e.transpose.as_deref() != Some(g.transpose_id().as_str()) {
            bad.push(format!("transpose {:?} vs {}", e.transpose, g.transpose_id()));
        }
        if let Some(f) = &e.flag {
            bad.push(format!("flagged: {f}"));
        }
        let mut detail = if bad.is_empty() { e.text_row() } else { bad.join("; ") };
        if let Some(err) = &g.erratum {
            detail.push_str(&format!(" [erratum: {}]", err.note));
        }
        rep.push(id, bad.is_empty(), detail);
    }
    let known: std::collections::HashSet<String> = golden.iter().map(GoldenRow::id).collect();
    for e in &catalog.entries {
        if e.degree <= DEFAULT_DMAX && !known.contains(&e.id) {
            rep.push(e.id.clone(), false, format!("not in golden data: {}", e.text_row()));
        }
    }
    rep
}

/// Mirror relation on every row: transposed triples for rows with trivial
/// `SL/J`, all intermediate subgroups for starred rows.
pub fn verify_mirrors(catalog: &Catalog) -> Report {
    let mut rep = Report::default();
    for e in &catalog.entries {
        if e.starred() {
            let Ok(p) = e.potential() else {
                rep.push(e.id.clone(), false, "unparsable potential");
                continue;
            };
            match intermediate_subgroups(&p) {
                Ok(subs) => {
                    for g in subs {
                        match mirror_pair_check(&p, &g) {
                            Ok(r) => rep.push(e.id.clone(), true, r.to_string()),
                            Err(err) => rep.push(e.id.clone(), false, err.to_string()),
                        }
                    }
                }
                Err(err) => rep.push(e.id.clone(), false, err.to_string()),
            }
        } else {
            let t = e.transpose.as_deref().and_then(|id| catalog.get(id));
            match (e.nikulin(), t.and_then(CatalogEntry::nikulin)) {
                (Some(a), Some(b)) => {
                    let ok = a.dv_mirror().ok() == Some(b);
                    rep.push(e.id.clone(), ok, format!("{a} <-> {} {b}", t.map_or("", |t| t.id.as_str())));
                }
                _ => rep.push(e.id.clone(), false, "missing triple or transpose row"),
            }
        }
    }
    rep
}

pub const CSV_COLUMNS: [&str; 14] = [
    "id", "table", "weights", "degree", "f", "shape", "singularities", "triple", "sl_order", "j_order", "sl_mod_j",
    "transpose", "mirror", "flag",
];

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn split_ints<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad integer list {s}")))).collect()
}

pub fn to_csv(catalog: &Catalog) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for e in &catalog.entries {
        w.write_record([
            e.id.clone(),
            e.table.to_string(),
            join(&e.weights),
            e.degree.to_string(),
            e.f.clone(),
            e.shape.clone(),
            e.singularities.clone(),
            e.triple.map(|t| join(&t)).unwrap_or_default(),
            e.sl_order.to_string(),
            e.j_order.to_string(),
            join(&e.sl_mod_j),
            e.transpose.clone().unwrap_or_default(),
            e.mirror.map(|m| m.to_string()).unwrap_or_default(),
            e.flag.clone().unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Data(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<Catalog> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut entries = Vec::new();
    let opt = |s: &str| if s.is_empty() { None } else { Some(s.to_string()) };
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Data(e.to_string()))?;
        let f = |i: usize| rec.get(i).unwrap_or("").to_string();
        let num = |i: usize| -> Result<i64> { f(i).parse().map_err(|_| Error::Parse(format!("column {}", CSV_COLUMNS[i]))) };
        let triple: Vec<i64> = split_ints(&f(7))?;
        entries.push(CatalogEntry {
            id: f(0),
            table: num(1)? as u8,
            weights: split_ints(&f(2))?,
            degree: num(3)?,
            f: f(4),
            shape: f(5),
            singularities: f(6),
            triple: (triple.len() == 3).then(|| [triple[0], triple[1], triple[2]]),
            sl_order: num(8)? as u64,
            j_order: num(9)? as u64,
            sl_mod_j: split_ints(&f(10))?,
            transpose: opt(&f(11)),
            mirror: opt(&f(12)).map(|m| m == "true"),
            flag: opt(&f(13)),
        });
    }
    Ok(Catalog { entries })
}

pub fn to_json(catalog: &Catalog) -> Result<String> {
    serde_json::to_string_pretty(catalog).map_err(|e| Error::Data(e.to_string()))
}

/// The catalog laid out table by table.
pub fn to_text(catalog: &Catalog) -> String {
    let mut s = String::new();
    let mut table = 0;
    for e in &catalog.entries {
        if e.table != table {
            table = e.table;
            let name = Shape::from_table(table).map_or("?", Shape::tag);
            let _ = writeln!(s, "{}Table {table} ({name})", if s.is_empty() { "" } else { "\n" });
        }
        let no = e.id.split(':').nth(1).unwrap_or("");
        let star = if e.starred() { "*" } else { " " };
        let _ = writeln!(s, "{no:>5}{star} {}", e.text_row());
    }
    s
}

/// Weights of every golden row agree with the weights computed from its `f`.
pub fn weights_consistent(row: &GoldenRow) -> Result<bool> {
    let c = row.potential()?.charges()?;
    Ok(c.w == row.weights && c.d == row.d && gcd_slice(&c.w) == 1)
}
