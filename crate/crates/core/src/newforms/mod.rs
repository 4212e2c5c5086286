//! Weight-2 newform eigenvalue data: the on-disk schema, loading and
//! validation, and the remote adapter in [`lmfdb`].
//!
//! One JSON file per level:
//!
//! ```text
//! { "level": 70, "weight": 2,
//!   "classes": [ { "label": "...", "field_poly": [c0, c1, ...],
//!                  "ap": [ { "p": 2, "coords": [[num, den], ...] }, ... ] }, ... ] }
//! ```
//!
//! `field_poly` is the monic minimal polynomial of a generator of the
//! eigenvalue field (ascending coefficients) and `coords` are the rational
//! coordinates of `a_p` in the power basis of that generator. Classes are
//! sorted by label and `ap` by `p`; the canonical serialization is compact
//! `serde_json` output followed by a newline.
//!
//! Labels are opaque. Data from different sources is never joined by label.

pub mod lmfdb;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::arith::{is_prime_u64, primes_up_to, IntPoly, NumberFieldElem};
use crate::error::{Error, Result};

/// Every stored class must carry `a_p` for all primes up to this bound not dividing the level.
pub const REQUIRED_PRIME_BOUND: u64 = 199;

/// Number of Galois conjugacy classes of weight-2 newforms with trivial
/// character at the four Frey levels.
pub const EXPECTED_CLASS_COUNTS: [(u64, usize); 4] = [(70, 1), (350, 8), (8960, 64), (44800, 196)];

/// Arbitrary-precision JSON integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        let s = n.to_string();
        BigInt::from_str(&s)
            .map(JsonInt)
            .map_err(|_| serde::de::Error::custom(format!("expected an integer, found {s}")))
    }
}

impl From<i64> for JsonInt {
    fn from(v: i64) -> Self {
        JsonInt(BigInt::from(v))
    }
}

/// Top-level object of a level file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelFile {
    pub level: u64,
    pub weight: u32,
    pub classes: Vec<ClassRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRecord {
    pub label: String,
    pub field_poly: Vec<JsonInt>,
    pub ap: Vec<ApRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApRecord {
    pub p: u64,
    pub coords: Vec<[JsonInt; 2]>,
}

/// One Galois conjugacy class of weight-2 newforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformClass {
    pub level: u64,
    pub label: String,
    pub field_poly: Arc<IntPoly>,
    pub ap: BTreeMap<u64, NumberFieldElem>,
}

impl NewformClass {
    pub fn degree(&self) -> usize {
        self.field_poly.degree().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn ap(&self, p: u64) -> Result<&NumberFieldElem> {
        self.ap.get(&p).ok_or_else(|| Error::DataGap { label: self.label.clone(), p })
    }

    /// `a_p` as a rational number when `K_f = Q`.
    pub fn rational_ap(&self, p: u64) -> Option<BigRational> {
        if !self.is_rational() {
            return None;
        }
        self.ap.get(&p).map(|e| e.coords()[0].clone())
    }

    fn from_record(level: u64, rec: ClassRecord, location: &str) -> Result<Self> {
        let schema = |message: String| Error::Schema { location: format!("{location} ({})", rec.label), message };
        let poly = IntPoly::new(rec.field_poly.iter().map(|c| c.0.clone()).collect());
        let deg = match poly.degree() {
            Some(d) if d >= 1 && poly.is_monic() => d,
            _ => return Err(schema(format!("field_poly {poly} is not monic of positive degree"))),
        };
        let poly = Arc::new(poly);
        let mut ap = BTreeMap::new();
        let mut last = 0;
        for entry in rec.ap {
            if !is_prime_u64(entry.p) {
                return Err(schema(format!("ap entry for non-prime {}", entry.p)));
            }
            if entry.p <= last {
                return Err(schema(format!("ap entries not strictly increasing at p = {}", entry.p)));
            }
            last = entry.p;
            if entry.coords.len() != deg {
                return Err(schema(format!(
                    "a_{} has {} coordinates but field_poly has degree {deg}",
                    entry.p,
                    entry.coords.len()
                )));
            }
            let mut coords = Vec::with_capacity(deg);
            for [num, den] in entry.coords {
                if den.0.is_zero() || den.0.is_negative() {
                    return Err(schema(format!("a_{} has non-positive denominator {}", entry.p, den.0)));
                }
                coords.push(BigRational::new(num.0, den.0));
            }
            ap.insert(entry.p, NumberFieldElem::new(poly.clone(), coords)?);
        }
        let class = NewformClass { level, label: rec.label, field_poly: poly, ap };
        for p in primes_up_to(REQUIRED_PRIME_BOUND) {
            if !level.is_multiple_of(p) && !class.ap.contains_key(&p) {
                return Err(Error::DataGap { label: class.label.clone(), p });
            }
        }
        Ok(class)
    }

    pub fn to_record(&self) -> ClassRecord {
        ClassRecord {
            label: self.label.clone(),
            field_poly: self.field_poly.coeffs().iter().cloned().map(JsonInt).collect(),
            ap: self
                .ap
                .iter()
                .map(|(&p, e)| ApRecord {
                    p,
                    coords: e
                        .coords()
                        .iter()
                        .map(|c| [JsonInt(c.numer().clone()), JsonInt(c.denom().clone())])
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Where a level's data came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub level: u64,
    pub source: String,
    pub sha256: String,
}

/// All loaded classes, grouped by level and sorted by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NewformStore {
    levels: BTreeMap<u64, Vec<NewformClass>>,
    provenance: Vec<Provenance>,
}

impl NewformStore {
    pub fn levels(&self) -> impl Iterator<Item = u64> + '_ {
        self.levels.keys().copied()
    }

    pub fn classes(&self, level: u64) -> &[NewformClass] {
        self.levels.get(&level).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all_classes(&self) -> impl Iterator<Item = &NewformClass> {
        self.levels.values().flatten()
    }

    pub fn count(&self, level: u64) -> Option<usize> {
        self.levels.get(&level).map(Vec::len)
    }

    pub fn total(&self) -> usize {
        self.levels.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Keeps only the listed levels.
    pub fn restrict(&self, levels: &[u64]) -> NewformStore {
        NewformStore {
            levels: self.levels.iter().filter(|(l, _)| levels.contains(l)).map(|(l, c)| (*l, c.clone())).collect(),
            provenance: self.provenance.iter().filter(|p| levels.contains(&p.level)).cloned().collect(),
        }
    }

    /// Adds the classes of one level file. Duplicate labels are rejected.
    pub fn insert_file(&mut self, file: LevelFile, source: &str, digest: String) -> Result<()> {
        if file.weight != 2 {
            return Err(Error::Schema { location: source.into(), message: format!("weight {} is not 2", file.weight) });
        }
        let level = file.level;
        let existing = self.levels.entry(level).or_default();
        let mut seen: BTreeSet<String> = existing.iter().map(|c| c.label.clone()).collect();
        for (i, rec) in file.classes.into_iter().enumerate() {
            let location = format!("{source}: classes[{i}]");
            if !seen.insert(rec.label.clone()) {
                return Err(Error::Schema { location, message: format!("duplicate label {}", rec.label) });
            }
            existing.push(NewformClass::from_record(level, rec, &location)?);
        }
        existing.sort_by(|a, b| a.label.cmp(&b.label));
        self.provenance.push(Provenance { level, source: source.into(), sha256: digest });
        Ok(())
    }

    pub fn level_file(&self, level: u64) -> LevelFile {
        LevelFile { level, weight: 2, classes: self.classes(level).iter().map(NewformClass::to_record).collect() }
    }

    /// Writes `level_<N>.json` for every level into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut out = Vec::new();
        for level in self.levels() {
            let path = dir.join(level_file_name(level));
            write_atomic(&path, &canonical_json(&self.level_file(level))?)?;
            out.push(path);
        }
        Ok(out)
    }
}

pub fn level_file_name(level: u64) -> String {
    format!("level_{level}.json")
}

/// Compact JSON plus a trailing newline.
pub fn canonical_json(file: &LevelFile) -> Result<String> {
    let mut s = serde_json::to_string(file).map_err(|e| Error::Schema { location: "serialize".into(), message: e.to_string() })?;
    s.push('\n');
    Ok(s)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Writes through a temporary file in the same directory and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path, e)
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses one level file from text.
pub fn parse_level_file(text: &str, source: &str) -> Result<LevelFile> {
    if text.trim().is_empty() {
        return Err(Error::Schema { location: source.into(), message: "empty file".into() });
    }
    serde_json::from_str(text).map_err(|e| Error::Schema {
        location: format!("{source}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Loads a single level file or every `*.json` file in a directory.
pub fn load_store(path: &Path) -> Result<NewformStore> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| io_err(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    let mut store = NewformStore::default();
    for file in &files {
        let text = fs::read_to_string(file).map_err(|e| io_err(file, e))?;
        let source = file.display().to_string();
        let parsed = parse_level_file(&text, &source)?;
        store.insert_file(parsed, &source, sha256_hex(text.as_bytes()))?;
    }
    if store.is_empty() {
        return Err(Error::Schema { location: path.display().to_string(), message: "store is empty".into() });
    }
    Ok(store)
}

/// Builds a store from in-memory level files (tests, the wasm demo).
pub fn store_from_texts(texts: &[(&str, &str)]) -> Result<NewformStore> {
    let mut store = NewformStore::default();
    for (source, text) in texts {
        let parsed = parse_level_file(text, source)?;
        store.insert_file(parsed, source, sha256_hex(text.as_bytes()))?;
    }
    if store.is_empty() {
        return Err(Error::Schema { location: "memory".into(), message: "store is empty".into() });
    }
    Ok(store)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub level: u64,
    pub expected: usize,
    pub found: Option<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseViolation {
    pub label: String,
    pub p: u64,
    pub ap: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub counts: Vec<LevelCount>,
    /// Levels present in the store but not in the expectation list.
    pub unexpected_levels: Vec<u64>,
    pub rational_classes_checked: usize,
    pub hasse_violations: Vec<HasseViolation>,
    pub ok: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.counts {
            let found = c.found.map(|n| n.to_string()).unwrap_or_else(|| "absent".into());
            writeln!(f, "level {:>6}: expected {:>4}, found {:>6} [{}]", c.level, c.expected, found, if c.ok { "ok" } else { "MISMATCH" })?;
        }
        writeln!(f, "hasse check on {} rational classes: {} violations", self.rational_classes_checked, self.hasse_violations.len())
    }
}

/// Compares per-level class counts and checks `|a_p| ≤ 2√p` on rational classes.
pub fn validate_store(store: &NewformStore, expected: &[(u64, usize)]) -> ValidationReport {
    let counts: Vec<LevelCount> = expected
        .iter()
        .map(|&(level, n)| {
            let found = store.count(level);
            LevelCount { level, expected: n, found, ok: found == Some(n) }
        })
        .collect();
    let unexpected_levels = store.levels().filter(|l| !expected.iter().any(|(e, _)| e == l)).collect();
    let mut checked = 0;
    let mut hasse_violations = Vec::new();
    for class in store.all_classes().filter(|c| c.is_rational()) {
        checked += 1;
        for (&p, e) in &class.ap {
            if class.level % p == 0 {
                continue;
            }
            let v = e.coords()[0].clone();
            let four_p = BigRational::from(BigInt::from(4 * p));
            if &v * &v > four_p {
                hasse_violations.push(HasseViolation { label: class.label.clone(), p, ap: v.to_string() });
            }
        }
    }
    let ok = counts.iter().all(|c| c.ok) && hasse_violations.is_empty();
    ValidationReport { counts, unexpected_levels, rational_classes_checked: checked, hasse_violations, ok }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rational_class_json(label: &str, aps: &[(u64, i64)]) -> String {
        let ap: Vec<String> = aps.iter().map(|(p, a)| format!("{{\"p\":{p},\"coords\":[[{a},1]]}}")).collect();
        format!("{{\"label\":\"{label}\",\"field_poly\":[0,1],\"ap\":[{}]}}", ap.join(","))
    }

    fn full_aps(level: u64, value: i64) -> Vec<(u64, i64)> {
        primes_up_to(REQUIRED_PRIME_BOUND).into_iter().map(|p| (p, if level.is_multiple_of(p) { 1 } else { value })).collect()
    }

    fn level_json(level: u64, classes: &[String]) -> String {
        format!("{{\"level\":{level},\"weight\":2,\"classes\":[{}]}}\n", classes.join(","))
    }

    #[test]
    fn loads_single_class() {
        let text = level_json(70, &[rational_class_json("70.a", &full_aps(70, 0))]);
        let store = store_from_texts(&[("mem", &text)]).unwrap();
        assert_eq!(store.count(70), Some(1));
        assert_eq!(canonical_json(&store.level_file(70)).unwrap(), text);
    }

    #[test]
    fn empty_file_is_an_error() {
        let err = store_from_texts(&[("mem", "")]).unwrap_err();
        assert!(matches!(err, Error::Schema { ref message, .. } if message.contains("empty")));
        let err = store_from_texts(&[("mem", &level_json(70, &[]))]).unwrap_err();
        assert!(matches!(err, Error::Schema { ref message, .. } if message.contains("empty")));
    }

    #[test]
    fn coordinate_length_mismatch_is_a_schema_error() {
        let bad = r#"{"label":"x","field_poly":[-2,0,1],"ap":[{"p":2,"coords":[[1,1]]}]}"#;
        let err = store_from_texts(&[("mem", &level_json(70, &[bad.to_string()]))]).unwrap_err();
        assert!(matches!(err, Error::Schema { ref message, .. } if message.contains("coordinates")), "{err}");
    }

    #[test]
    fn missing_prime_is_a_gap() {
        let mut aps = full_aps(70, 0);
        aps.retain(|(p, _)| *p != 97);
        let text = level_json(70, &[rational_class_json("70.a", &aps)]);
        assert_eq!(store_from_texts(&[("mem", &text)]).unwrap_err(), Error::DataGap { label: "70.a".into(), p: 97 });
    }

    #[test]
    fn duplicate_labels_rejected() {
        let c = rational_class_json("70.a", &full_aps(70, 0));
        let err = store_from_texts(&[("mem", &level_json(70, &[c.clone(), c]))]).unwrap_err();
        assert!(matches!(err, Error::Schema { ref message, .. } if message.contains("duplicate")));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = store_from_texts(&[("f.json", "{\n\"level\": 70,\n\"weight\": }")]).unwrap_err();
        match err {
            Error::Schema { location, .. } => assert!(location.starts_with("f.json:3:"), "{location}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_flags_absent_and_mismatched_levels() {
        let text = level_json(70, &[rational_class_json("70.a", &full_aps(70, 2))]);
        let store = store_from_texts(&[("mem", &text)]).unwrap();
        let report = validate_store(&store, &EXPECTED_CLASS_COUNTS);
        assert!(report.counts[0].ok);
        assert_eq!(report.counts[2].found, None);
        assert!(!report.ok);
        let report = validate_store(&store, &[(70, 2)]);
        assert!(!report.counts[0].ok);
        let report = validate_store(&store, &[(70, 1)]);
        assert!(report.ok);
        assert_eq!(report.rational_classes_checked, 1);
    }

    #[test]
    fn hasse_violation_detected() {
        let mut aps = full_aps(70, 2);
        aps[1].1 = 4; // |a_3| = 4 > 2√3
        let text = level_json(70, &[rational_class_json("70.a", &aps)]);
        let store = store_from_texts(&[("mem", &text)]).unwrap();
        let report = validate_store(&store, &[(70, 1)]);
        assert_eq!(report.hasse_violations.len(), 1);
        assert_eq!(report.hasse_violations[0].p, 3);
    }

    #[test]
    fn big_integers_survive() {
        let mut aps: Vec<String> = Vec::new();
        for p in primes_up_to(REQUIRED_PRIME_BOUND) {
            aps.push(format!("{{\"p\":{p},\"coords\":[[123456789012345678901234567891,7],[-1,1]]}}"));
        }
        let c = format!("{{\"label\":\"big\",\"field_poly\":[-99999999999999999999999,0,1],\"ap\":[{}]}}", aps.join(","));
        let text = level_json(350, &[c]);
        let store = store_from_texts(&[("mem", &text)]).unwrap();
        assert_eq!(canonical_json(&store.level_file(350)).unwrap(), text);
    }
}
