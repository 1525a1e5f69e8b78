use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::counting::gauss_binomial;
use crate::error::{Error, Result};

const SHIPPED: &str = include_str!("../../data/registry.txt");

/// Key (q, n, d, k) with k ≤ n/2; A_q(n,d,k) = A_q(n,d,n-k) by duality.
pub type RegistryKey = (u64, u64, u64, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub value: BigUint,
    pub source: String,
}

/// A resolved lookup and where its value came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dependency {
    pub q: u64,
    pub n: u64,
    pub d: u64,
    pub k: u64,
    #[serde(serialize_with = "crate::bounds::ser_big")]
    pub value: BigUint,
    pub source: String,
}

/// Values of A_q(n,d,k) the bound formulas consume. Lookups resolve by
/// analytic rule first, then by entry, and otherwise fail with
/// [`Error::RegistryMiss`].
#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: BTreeMap<RegistryKey, RegistryEntry>,
}

fn normalize(n: u64, k: u64) -> u64 {
    k.min(n - k)
}

impl Registry {
    pub fn empty() -> Registry {
        Registry::default()
    }

    /// The registry bundled with the crate.
    pub fn shipped() -> Registry {
        Registry::parse(SHIPPED).expect("bundled registry parses")
    }

    /// Lines "q n d k value source…"; '#' starts a comment.
    pub fn parse(text: &str) -> Result<Registry> {
        let mut reg = Registry::empty();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(6, char::is_whitespace);
            let mut num = |what: &str| -> Result<u64> {
                let t = parts.next().ok_or_else(|| Error::parse(i + 1, format!("missing {what}")))?;
                t.parse().map_err(|e| Error::parse(i + 1, format!("{what} {t:?}: {e}")))
            };
            let (q, n, d, k) = (num("q")?, num("n")?, num("d")?, num("k")?);
            let vt = parts.next().ok_or_else(|| Error::parse(i + 1, "missing value"))?;
            let value = vt.parse::<BigUint>().map_err(|e| Error::parse(i + 1, format!("value {vt:?}: {e}")))?;
            let source = parts.next().unwrap_or("").trim().to_string();
            if source.is_empty() {
                return Err(Error::parse(i + 1, "every entry needs a source"));
            }
            if k > n {
                return Err(Error::parse(i + 1, "k exceeds n"));
            }
            reg.insert(q, n, d, k, value, source);
        }
        Ok(reg)
    }

    pub fn load(path: &Path) -> Result<Registry> {
        Registry::parse(&std::fs::read_to_string(path)?)
    }

    pub fn insert(&mut self, q: u64, n: u64, d: u64, k: u64, value: BigUint, source: impl Into<String>) {
        self.entries.insert((q, n, d, normalize(n, k)), RegistryEntry { value, source: source.into() });
    }

    /// Adds every entry of `other`, replacing existing keys.
    pub fn merge(&mut self, other: Registry) {
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&RegistryKey, &RegistryEntry)> {
        self.entries.iter()
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|((q, n, d, k), e)| format!("{q} {n} {d} {k} {} {}\n", e.value, e.source)).collect()
    }

    /// A_q(n,d,k) with its source.
    pub fn lookup(&self, q: u64, n: u64, d: u64, k: u64) -> Result<Dependency> {
        if d == 0 || d % 2 == 1 || k > n {
            return Err(Error::InvalidParameters(format!("A_{q}({n},{d},{k}) is not a valid code size")));
        }
        let dep = |value: BigUint, source: &str| Dependency { q, n, d, k, value, source: source.to_string() };
        let kk = normalize(n, k);
        if kk == 0 {
            return Ok(dep(BigUint::one(), "rule: a single subspace of dimension 0 or n"));
        }
        if d > 2 * kk {
            return Ok(dep(BigUint::one(), "rule: d > 2 min(k, n-k) admits one codeword"));
        }
        if d == 2 {
            return Ok(dep(gauss_binomial(n, kk, q), "rule: d = 2 admits every k-subspace"));
        }
        if d == 2 * kk && n.is_multiple_of(kk) {
            let v = (BigUint::from(q).pow(n as u32) - 1u32) / (BigUint::from(q).pow(kk as u32) - 1u32);
            return Ok(dep(v, "rule: spread (q^n - 1)/(q^k - 1)"));
        }
        match self.entries.get(&(q, n, d, kk)) {
            Some(e) => Ok(dep(e.value.clone(), &e.source)),
            None => Err(Error::RegistryMiss { q, n, d, k: kk }),
        }
    }
}
