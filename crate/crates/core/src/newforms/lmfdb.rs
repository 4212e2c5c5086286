//! Adapter for the LMFDB JSON API. All endpoint names and field names live
//! here; the transport itself is supplied by the caller.
//!
//! Two collections are read:
//! - `mf_newforms`: one row per Galois orbit (`label`, `dim`, `field_poly`, `hecke_orbit_code`);
//! - `mf_hecke_nf`: eigenvalue data per orbit (`ap` in the Hecke ring basis,
//!   `hecke_ring_numerators`, `hecke_ring_denominators`, `hecke_ring_cyclotomic_generator`).
//!
//! Coordinates are converted from the Hecke ring basis to the power basis
//! of `field_poly`. Rows without basis data are rejected.

use std::path::Path;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;

use super::{canonical_json, parse_level_file, write_atomic, ApRecord, ClassRecord, JsonInt, LevelFile, NewformStore};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org/api";

/// One HTTP GET returning the response body.
pub trait Transport {
    fn get(&self, url: &str) -> Result<String>;
}

#[derive(Debug, Clone)]
pub struct Adapter {
    pub base_url: String,
    /// Attempts per request, at least one.
    pub retries: u32,
    pub backoff: Duration,
}

impl Default for Adapter {
    fn default() -> Self {
        Adapter { base_url: DEFAULT_BASE_URL.into(), retries: 3, backoff: Duration::from_millis(500) }
    }
}

impl Adapter {
    pub fn newforms_url(&self, level: u64) -> String {
        format!(
            "{}/mf_newforms/?level={level}&weight=2&char_order=1&_format=json&_fields=label,dim,field_poly,hecke_orbit_code",
            self.base_url.trim_end_matches('/')
        )
    }

    pub fn hecke_url(&self, orbit_code: &str) -> String {
        format!(
            "{}/mf_hecke_nf/?hecke_orbit_code={orbit_code}&_format=json&_fields=label,ap,field_poly,hecke_ring_numerators,hecke_ring_denominators,hecke_ring_cyclotomic_generator,maxp",
            self.base_url.trim_end_matches('/')
        )
    }

    fn get_json(&self, transport: &dyn Transport, url: &str) -> Result<Value> {
        let mut last = None;
        for attempt in 0..self.retries.max(1) {
            if attempt > 0 {
                #[cfg(not(target_arch = "wasm32"))]
                std::thread::sleep(self.backoff * attempt);
            }
            match transport.get(url).and_then(|body| {
                serde_json::from_str::<Value>(&body).map_err(|e| Error::Remote(format!("{url}: bad JSON: {e}")))
            }) {
                Ok(v) => return Ok(v),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or_else(|| Error::Remote(format!("{url}: no attempts made"))))
    }

    /// Rows of a paged query, following `next` links.
    fn rows(&self, transport: &dyn Transport, url: &str) -> Result<Vec<Value>> {
        let mut out = Vec::new();
        let mut next = Some(url.to_string());
        while let Some(u) = next.take() {
            let page = self.get_json(transport, &u)?;
            let data = page
                .get("data")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Remote(format!("{u}: response has no data array")))?;
            out.extend(data.iter().cloned());
            if let Some(n) = page.get("next").and_then(Value::as_str).filter(|s| !s.is_empty()) {
                next = Some(self.resolve(n));
            }
        }
        Ok(out)
    }

    fn resolve(&self, link: &str) -> String {
        if link.starts_with("http://") || link.starts_with("https://") {
            return link.to_string();
        }
        // `next` is given relative to the host, e.g. "/api/mf_newforms/?...&_offset=100"
        let base = self.base_url.trim_end_matches('/');
        let host_end = base.find("://").map(|i| i + 3).and_then(|s| base[s..].find('/').map(|j| s + j)).unwrap_or(base.len());
        format!("{}{}", &base[..host_end], link)
    }
}

fn remote(msg: String) -> Error {
    Error::Remote(msg)
}

fn int_of(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| remote(format!("{what}: {n} is not an integer"))),
        Value::String(s) => s.parse().map_err(|_| remote(format!("{what}: {s:?} is not an integer"))),
        other => Err(remote(format!("{what}: expected integer, got {other}"))),
    }
}

fn int_list(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    v.as_array().ok_or_else(|| remote(format!("{what}: expected a list")))?.iter().map(|x| int_of(x, what)).collect()
}

/// Converts one orbit's Hecke data into a class record in the power basis.
pub fn convert_hecke_row(label: &str, field_poly: &[BigInt], row: &Value, level: u64) -> Result<ClassRecord> {
    let deg = field_poly.len().saturating_sub(1);
    if deg == 0 {
        return Err(remote(format!("{label}: empty field_poly")));
    }
    if row.get("hecke_ring_cyclotomic_generator").and_then(Value::as_u64).unwrap_or(0) != 0 {
        return Err(remote(format!("{label}: cyclotomic Hecke ring representation is not supported")));
    }
    let (nums, dens) = match (row.get("hecke_ring_numerators"), row.get("hecke_ring_denominators")) {
        (Some(n), Some(d)) if !n.is_null() && !d.is_null() => (n, d),
        _ if deg == 1 => (&Value::Null, &Value::Null),
        _ => return Err(remote(format!("{label}: no Hecke ring basis; refusing coordinates in an unknown basis"))),
    };
    // basis[i] = power-basis coordinates of the i-th Hecke ring basis element
    let basis: Vec<Vec<BigRational>> = if nums.is_null() {
        vec![vec![BigRational::from(BigInt::from(1))]]
    } else {
        let nums = nums.as_array().ok_or_else(|| remote(format!("{label}: numerators not a list")))?;
        let dens = int_list(dens, "hecke_ring_denominators")?;
        if nums.len() != deg || dens.len() != deg {
            return Err(remote(format!("{label}: Hecke basis has {} elements, field degree {deg}", nums.len())));
        }
        nums.iter()
            .zip(&dens)
            .map(|(n, d)| {
                if d.is_zero() {
                    return Err(remote(format!("{label}: zero basis denominator")));
                }
                let mut c: Vec<BigRational> =
                    int_list(n, "hecke_ring_numerators")?.into_iter().map(|v| BigRational::new(v, d.clone())).collect();
                c.resize(deg, BigRational::zero());
                Ok(c)
            })
            .collect::<Result<_>>()?
    };
    let ap = row.get("ap").and_then(Value::as_array).ok_or_else(|| remote(format!("{label}: no ap list")))?;
    let primes = primes_up_to(super::REQUIRED_PRIME_BOUND.max(2000));
    if ap.len() < primes.iter().take_while(|&&p| p <= super::REQUIRED_PRIME_BOUND).count() {
        return Err(remote(format!("{label}: only {} a_p values supplied", ap.len())));
    }
    let mut records = Vec::new();
    for (p, v) in primes.iter().zip(ap) {
        if *p > super::REQUIRED_PRIME_BOUND {
            break;
        }
        let hecke = match v {
            Value::Array(_) => int_list(v, "ap")?,
            single => vec![int_of(single, "ap")?],
        };
        if hecke.len() != deg {
            return Err(remote(format!("{label}: a_{p} has {} coordinates, degree {deg}", hecke.len())));
        }
        let mut power = vec![BigRational::zero(); deg];
        for (c, b) in hecke.iter().zip(&basis) {
            for (k, bk) in b.iter().enumerate() {
                power[k] += bk * BigRational::from(c.clone());
            }
        }
        records.push(ApRecord {
            p: *p,
            coords: power.into_iter().map(|r| [JsonInt(r.numer().clone()), JsonInt(r.denom().clone())]).collect(),
        });
    }
    let _ = level;
    Ok(ClassRecord { label: label.into(), field_poly: field_poly.iter().cloned().map(JsonInt).collect(), ap: records })
}

/// Downloads every weight-2 trivial-character class at `level` into a level file.
pub fn fetch_level(transport: &dyn Transport, adapter: &Adapter, level: u64) -> Result<LevelFile> {
    let forms = adapter.rows(transport, &adapter.newforms_url(level))?;
    let mut classes = Vec::with_capacity(forms.len());
    for row in &forms {
        let label = row.get("label").and_then(Value::as_str).ok_or_else(|| remote("newform row without label".into()))?;
        let field_poly = match row.get("field_poly") {
            Some(v) if !v.is_null() => int_list(v, "field_poly")?,
            _ if row.get("dim").and_then(Value::as_u64) == Some(1) => vec![BigInt::from(0), BigInt::from(1)],
            _ => return Err(remote(format!("{label}: no field_poly"))),
        };
        let code = match row.get("hecke_orbit_code") {
            Some(Value::Number(n)) => n.to_string(),
            Some(Value::String(s)) => s.clone(),
            _ => return Err(remote(format!("{label}: no hecke_orbit_code"))),
        };
        let hecke = adapter.rows(transport, &adapter.hecke_url(&code))?;
        let row = hecke.first().ok_or_else(|| remote(format!("{label}: no eigenvalue data")))?;
        classes.push(convert_hecke_row(label, &field_poly, row, level)?);
    }
    classes.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(LevelFile { level, weight: 2, classes })
}

/// Fetches one level and writes it to `out_path` atomically. An empty level
/// is written as an empty class list.
pub fn fetch_remote(transport: &dyn Transport, adapter: &Adapter, level: u64, out_path: &Path) -> Result<usize> {
    let file = fetch_level(transport, adapter, level)?;
    let text = canonical_json(&file)?;
    // schema-check what is about to be written, unless there is nothing to check
    if !file.classes.is_empty() {
        let mut store = NewformStore::default();
        store.insert_file(parse_level_file(&text, &out_path.display().to_string())?, "fetch", String::new())?;
    }
    write_atomic(out_path, &text)?;
    Ok(file.classes.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;
    use std::collections::BTreeMap;

    struct Mock {
        pages: BTreeMap<String, String>,
        failures_left: RefCell<u32>,
        calls: RefCell<Vec<String>>,
    }

    impl Transport for Mock {
        fn get(&self, url: &str) -> Result<String> {
            self.calls.borrow_mut().push(url.to_string());
            if *self.failures_left.borrow() > 0 {
                *self.failures_left.borrow_mut() -= 1;
                return Err(Error::Remote("503".into()));
            }
            self.pages.get(url).cloned().ok_or_else(|| Error::Remote(format!("404 {url}")))
        }
    }

    fn adapter() -> Adapter {
        Adapter { base_url: "https://example.test/api".into(), retries: 3, backoff: Duration::ZERO }
    }

    fn rational_ap() -> String {
        let v: Vec<String> = primes_up_to(199).iter().map(|p| ((p % 5) as i64 - 2).to_string()).collect();
        format!("[{}]", v.join(","))
    }

    fn mock(level: u64, failures: u32) -> Mock {
        let a = adapter();
        let mut pages = BTreeMap::new();
        pages.insert(
            a.newforms_url(level),
            format!(r#"{{"data":[{{"label":"{level}.2.a.a","dim":1,"field_poly":[0,1],"hecke_orbit_code":17}}]}}"#),
        );
        pages.insert(a.hecke_url("17"), format!(r#"{{"data":[{{"label":"{level}.2.a.a","ap":{}}}]}}"#, rational_ap()));
        Mock { pages, failures_left: RefCell::new(failures), calls: RefCell::new(vec![]) }
    }

    #[test]
    fn fetch_writes_schema_conformant_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("level_70.json");
        assert_eq!(fetch_remote(&mock(70, 0), &adapter(), 70, &out).unwrap(), 1);
        let store = super::super::load_store(&out).unwrap();
        assert_eq!(store.count(70), Some(1));
        // idempotent
        let first = std::fs::read(&out).unwrap();
        fetch_remote(&mock(70, 0), &adapter(), 70, &out).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), first);
    }

    #[test]
    fn retries_then_succeeds() {
        let m = mock(70, 2);
        let file = fetch_level(&m, &adapter(), 70).unwrap();
        assert_eq!(file.classes.len(), 1);
        assert_eq!(m.calls.borrow().len(), 4);
    }

    #[test]
    fn exhausted_retries_leave_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("level_70.json");
        let err = fetch_remote(&mock(70, 10), &adapter(), 70, &out).unwrap_err();
        assert!(matches!(err, Error::Remote(_)));
        assert!(!out.exists());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn empty_level_is_not_an_error() {
        let a = adapter();
        let mut pages = BTreeMap::new();
        pages.insert(a.newforms_url(71), r#"{"data":[]}"#.to_string());
        let m = Mock { pages, failures_left: RefCell::new(0), calls: RefCell::new(vec![]) };
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("level_71.json");
        assert_eq!(fetch_remote(&m, &a, 71, &out).unwrap(), 0);
        assert_eq!(std::fs::read_to_string(&out).unwrap(), "{\"level\":71,\"weight\":2,\"classes\":[]}\n");
    }

    #[test]
    fn pagination_is_followed() {
        let a = adapter();
        let mut m = mock(70, 0);
        let first = a.newforms_url(70);
        m.pages.insert(
            first.clone(),
            r#"{"data":[{"label":"70.2.a.a","dim":1,"field_poly":[0,1],"hecke_orbit_code":17}],"next":"/api/page2"}"#.into(),
        );
        m.pages.insert("https://example.test/api/page2".into(), r#"{"data":[]}"#.into());
        assert_eq!(fetch_level(&m, &a, 70).unwrap().classes.len(), 1);
    }

    #[test]
    fn hecke_basis_is_converted() {
        // field x² − 5, Hecke basis {1, (1 + ν)/2}
        let row: Value = serde_json::from_str(&format!(
            r#"{{"ap":[{}],"hecke_ring_numerators":[[1],[1,1]],"hecke_ring_denominators":[1,2]}}"#,
            primes_up_to(199).iter().map(|_| "[0,1]").collect::<Vec<_>>().join(",")
        ))
        .unwrap();
        let poly = vec![BigInt::from(-5), BigInt::from(0), BigInt::from(1)];
        let rec = convert_hecke_row("x", &poly, &row, 350).unwrap();
        let c = &rec.ap[0].coords;
        assert_eq!(c[0], [JsonInt::from(1), JsonInt::from(2)]);
        assert_eq!(c[1], [JsonInt::from(1), JsonInt::from(2)]);
    }

    #[test]
    fn missing_basis_is_rejected() {
        let row: Value = serde_json::from_str(r#"{"ap":[[0,1]]}"#).unwrap();
        let poly = vec![BigInt::from(-5), BigInt::from(0), BigInt::from(1)];
        let err = convert_hecke_row("x", &poly, &row, 350).unwrap_err();
        assert!(matches!(err, Error::Remote(m) if m.contains("basis")));
    }
}
