use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::formulas::{evaluate, BoundPlan, Family, Target};
use super::registry::Registry;
use super::ser_big;
use crate::error::{Error, Result};

const SHIPPED: &str = include_str!("../../data/manifest.txt");

/// Published table titles, by table id.
pub const TABLE_TITLES: [&str; 8] = [
    "multi-block insert, d=6",
    "parallel block insert, d=6",
    "parallel block insert, d=8",
    "multilevel insert with two vectors, d=4",
    "multilevel insert with two vectors, d=6",
    "multilevel insert with shifted vectors, d=4",
    "multilevel insert with shifted vectors, d=6",
    "multilevel insert with shifted vectors, d=8",
];

/// How a manifest row's parameter tuple was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    /// Stated in a worked example.
    Worked,
    /// Smallest grid tuple reproducing the published value.
    Recovered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestRow {
    pub table: u32,
    pub row: u32,
    pub target: Target,
    pub plan: BoundPlan,
    pub published_new: BigUint,
    pub published_old: BigUint,
    pub tag: Tag,
    /// Some registry input was back-solved from a published row, so a match
    /// is not an independent check.
    pub backsolved_inputs: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

fn big(s: &str, line: usize, key: &str) -> Result<BigUint> {
    s.parse().map_err(|e| Error::parse(line, format!("{key} {s:?}: {e}")))
}

impl Manifest {
    pub fn shipped() -> Manifest {
        Manifest::parse(SHIPPED).expect("bundled manifest parses")
    }

    /// Lines "table row key=value …"; '#' starts a comment.
    pub fn parse(text: &str) -> Result<Manifest> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut words = line.split_whitespace();
            let mut num = |what: &str| -> Result<u32> {
                let w = words.next().ok_or_else(|| Error::parse(ln, format!("missing {what}")))?;
                w.parse().map_err(|_| Error::parse(ln, format!("bad {what} {w:?}")))
            };
            let (table, row) = (num("table")?, num("row")?);
            let mut kv = BTreeMap::new();
            for w in words {
                let (k, v) = w.split_once('=').ok_or_else(|| Error::parse(ln, format!("expected key=value, got {w:?}")))?;
                kv.insert(k.to_string(), v.to_string());
            }
            let mut take = |k: &str| kv.remove(k).ok_or_else(|| Error::parse(ln, format!("missing {k}")));
            let family = Family::parse(&take("family")?)?;
            let published_new = big(&take("new")?, ln, "new")?;
            let published_old = big(&take("old")?, ln, "old")?;
            let tag = match take("tag")?.as_str() {
                "worked" => Tag::Worked,
                "recovered" => Tag::Recovered,
                other => return Err(Error::parse(ln, format!("unknown tag {other:?}"))),
            };
            let backsolved_inputs = match kv.remove("inputs").as_deref() {
                None => false,
                Some("backsolved") => true,
                Some(other) => return Err(Error::parse(ln, format!("unknown inputs {other:?}"))),
            };
            let mut ints = BTreeMap::new();
            for (k, v) in kv {
                let v: u64 = v.parse().map_err(|_| Error::parse(ln, format!("bad integer {k}={v}")))?;
                ints.insert(k, v);
            }
            let mut get = |k: &str| ints.remove(k).ok_or_else(|| Error::parse(ln, format!("missing {k}")));
            let target = Target::new(get("q")?, get("n")?, get("d")?, get("k")?);
            let plan = BoundPlan::from_map(family, &target, &ints)?;
            rows.push(ManifestRow { table, row, target, plan, published_new, published_old, tag, backsolved_inputs });
        }
        Ok(Manifest { rows })
    }

    pub fn table(&self, table: u32) -> Vec<&ManifestRow> {
        self.rows.iter().filter(|r| r.table == table).collect()
    }
}

/// One reproduced table row.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub table: u32,
    pub row: u32,
    pub family: Family,
    pub target: Target,
    pub params: BTreeMap<String, u64>,
    #[serde(serialize_with = "ser_big")]
    pub computed: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub published_new: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub published_old: BigUint,
    pub matches: bool,
    pub tag: Tag,
    pub backsolved_inputs: bool,
}

impl TableRow {
    /// Turns a non-matching row into [`Error::Mismatch`].
    pub fn check(&self) -> Result<()> {
        if self.matches {
            return Ok(());
        }
        Err(Error::Mismatch {
            table: self.table,
            row: self.row,
            computed: self.computed.to_string(),
            published: self.published_new.to_string(),
        })
    }
}

/// Recomputes every manifest row of a table (optionally for one q).
pub fn reproduce_table(reg: &Registry, manifest: &Manifest, table: u32, q: Option<u64>) -> Result<Vec<TableRow>> {
    let rows: Vec<_> = manifest.table(table).into_iter().filter(|r| q.is_none_or(|q| r.target.q == q)).collect();
    if rows.is_empty() {
        let which = match q {
            Some(q) => format!("table {table} at q = {q}"),
            None => format!("table {table}"),
        };
        return Err(Error::ManifestMiss(which));
    }
    rows.into_iter()
        .map(|r| {
            let res = evaluate(reg, r.target, &r.plan)?;
            Ok(TableRow {
                table: r.table,
                row: r.row,
                family: r.plan.family,
                target: r.target,
                params: res.params,
                matches: res.total == r.published_new,
                computed: res.total,
                published_new: r.published_new.clone(),
                published_old: r.published_old.clone(),
                tag: r.tag,
                backsolved_inputs: r.backsolved_inputs,
            })
        })
        .collect()
}
