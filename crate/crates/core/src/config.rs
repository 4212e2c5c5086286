//! Run configuration shared by the pipeline and the command-line front end.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Stage2Range {
    pub min_p: u64,
    pub max_p: u64,
}

impl Default for Stage2Range {
    fn default() -> Self {
        Stage2Range { min_p: 11, max_p: 97 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchBox {
    pub box_x: u64,
    pub box_d: u64,
    pub nmax: u32,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox { box_x: 200, box_d: 200, nmax: 13 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub levels: Vec<u64>,
    pub stage2: Stage2Range,
    /// Kraus primes per exponent, applied in the listed order.
    #[serde(serialize_with = "ser_prime_sets", deserialize_with = "de_prime_sets")]
    pub stage3: BTreeMap<u64, Vec<u64>>,
    pub search: SearchBox,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data_dir: PathBuf::from("data"),
            levels: vec![70, 350, 8960, 44800],
            stage2: Stage2Range::default(),
            stage3: default_stage3(),
            search: SearchBox::default(),
            out: None,
        }
    }
}

pub fn default_stage3() -> BTreeMap<u64, Vec<u64>> {
    BTreeMap::from([(7, vec![29, 43]), (11, vec![23, 89]), (13, vec![53, 79, 157])])
}

fn ser_prime_sets<S: Serializer>(m: &BTreeMap<u64, Vec<u64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let as_str: BTreeMap<String, &Vec<u64>> = m.iter().map(|(k, v)| (k.to_string(), v)).collect();
    as_str.serialize(s)
}

fn de_prime_sets<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u64, Vec<u64>>, D::Error> {
    let raw = BTreeMap::<String, Vec<u64>>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<u64>()
                .map(|n| (n, v))
                .map_err(|_| serde::de::Error::custom(format!("stage3 key {k:?} is not an integer")))
        })
        .collect()
}

impl RunConfig {
    /// Checks the invariants the pipeline relies on.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if self.levels.is_empty() {
            return bad("no levels configured".into());
        }
        if self.stage2.min_p > self.stage2.max_p {
            return bad(format!("stage2 range {}..{} is empty", self.stage2.min_p, self.stage2.max_p));
        }
        for (&n, primes) in &self.stage3 {
            if n < 7 || !is_prime_u64(n) {
                return bad(format!("stage3 exponent {n} is not a prime ≥ 7"));
            }
            for &p in primes {
                if !is_prime_u64(p) {
                    return bad(format!("stage3 prime {p} for n = {n} is not prime"));
                }
                if p % n != 1 {
                    return bad(format!("stage3 prime {p} is not 1 mod {n}"));
                }
                if 70 % p == 0 {
                    return bad(format!("stage3 prime {p} divides 70"));
                }
            }
        }
        if self.search.box_x < 1 || self.search.box_d < 1 || self.search.nmax < 2 {
            return bad("search box bounds must be ≥ 1 and nmax ≥ 2".into());
        }
        Ok(())
    }
}
