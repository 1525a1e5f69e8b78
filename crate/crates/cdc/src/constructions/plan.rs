use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};

use crate::algebra::MAX_ORDER;
use crate::bounds::{is_prime_power, Family};
use crate::error::{Error, Result};

/// The construction pipelines a plan can request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstructionFamily {
    Linkage,
    Blocks,
    Multiblocks,
    ParallelBlocks,
    MultilevelI,
    MultilevelII,
}

impl ConstructionFamily {
    pub const ALL: [ConstructionFamily; 6] = [
        ConstructionFamily::Linkage,
        ConstructionFamily::Blocks,
        ConstructionFamily::Multiblocks,
        ConstructionFamily::ParallelBlocks,
        ConstructionFamily::MultilevelI,
        ConstructionFamily::MultilevelII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionFamily::Linkage => "linkage",
            ConstructionFamily::Blocks => "blocks",
            ConstructionFamily::Multiblocks => "multiblocks",
            ConstructionFamily::ParallelBlocks => "parallel_blocks",
            ConstructionFamily::MultilevelI => "multilevel_I",
            ConstructionFamily::MultilevelII => "multilevel_II",
        }
    }

    pub fn parse(s: &str) -> Result<ConstructionFamily> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|f| f.name()).collect();
            Error::InvalidParameters(format!("unknown construction {s:?}; expected one of {}", names.join(", ")))
        })
    }

    /// Free parameters, in the order used for provenance strings.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            ConstructionFamily::Linkage => &["n1"],
            ConstructionFamily::Blocks => &["n1", "a1", "b1", "b2"],
            ConstructionFamily::Multiblocks => &["n1", "a1", "b1", "b2", "t1", "t2"],
            ConstructionFamily::ParallelBlocks => &["n1", "a1", "b1", "b2", "t1", "t2", "c1", "c2"],
            ConstructionFamily::MultilevelI => &["n1", "u1", "c1", "c2"],
            ConstructionFamily::MultilevelII => &["n1", "u1", "b1", "b2"],
        }
    }

    /// Parameters determined by the free ones; `lambda` may be lowered.
    pub fn derived(self) -> &'static [&'static str] {
        match self {
            ConstructionFamily::Linkage => &["n2"],
            ConstructionFamily::Blocks | ConstructionFamily::Multiblocks | ConstructionFamily::ParallelBlocks => &["n2", "a2"],
            ConstructionFamily::MultilevelI => &["n2", "u2"],
            ConstructionFamily::MultilevelII => &["n2", "u2", "lambda"],
        }
    }

    /// The lower-bound family whose formula counts this construction, if any.
    pub fn bound_family(self) -> Option<Family> {
        match self {
            ConstructionFamily::Linkage => Some(Family::Linkage),
            ConstructionFamily::Blocks => None,
            ConstructionFamily::Multiblocks => Some(Family::Cor41),
            ConstructionFamily::ParallelBlocks => Some(Family::Cor42),
            ConstructionFamily::MultilevelI => Some(Family::Cor43),
            ConstructionFamily::MultilevelII => Some(Family::Cor44),
        }
    }

    /// Whether the construction extends a linkage code.
    pub fn has_base(self) -> bool {
        self != ConstructionFamily::Blocks
    }
}

impl fmt::Display for ConstructionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ConstructionFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A sub-code the construction consumes: `name` is C1, C2, Q1, Q2, D1 or D2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcodeSpec {
    pub name: &'static str,
    pub n: usize,
    pub k: usize,
}

/// A validated construction request: target (q, n, d, k), the family
/// parameters including derived ones, and optional files for sub-codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub family: ConstructionFamily,
    pub q: u64,
    pub n: u64,
    pub d: u64,
    pub k: u64,
    params: BTreeMap<String, u64>,
    files: BTreeMap<String, PathBuf>,
}

impl ConstructionPlan {
    /// Validates `params`, fills in derived keys and checks the family's
    /// hypotheses.
    pub fn new(family: ConstructionFamily, q: u64, n: u64, d: u64, k: u64, params: &BTreeMap<String, u64>) -> Result<Self> {
        let mut plan = ConstructionPlan { family, q, n, d, k, params: BTreeMap::new(), files: BTreeMap::new() };
        plan.check_target()?;
        for key in params.keys() {
            if !family.keys().contains(&key.as_str()) && !family.derived().contains(&key.as_str()) {
                return Err(Error::InvalidParameters(format!("{family} takes no parameter {key:?}")));
            }
        }
        for &key in family.keys() {
            let v = *params.get(key).ok_or_else(|| Error::InvalidParameters(format!("{family} needs {key}")))?;
            plan.params.insert(key.to_string(), v);
        }
        let n1 = plan.get("n1");
        if n1 > n {
            return Err(Error::HypothesisViolated(format!("n1 = {n1} exceeds n = {n}")));
        }
        let mut derived = vec![("n2", n - n1)];
        if plan.params.contains_key("a1") {
            derived.push(("a2", k.checked_sub(plan.get("a1")).ok_or_else(|| hyp("a1 ≤ k"))?));
        }
        if plan.params.contains_key("u1") {
            derived.push(("u2", k.checked_sub(plan.get("u1")).ok_or_else(|| hyp("u1 ≤ k"))?));
        }
        for (key, v) in derived {
            if let Some(&given) = params.get(key) {
                if given != v {
                    return Err(Error::InvalidParameters(format!("{key} = {given} but the other parameters force {v}")));
                }
            }
            plan.params.insert(key.to_string(), v);
        }
        if family == ConstructionFamily::MultilevelII {
            let u1 = plan.get("u1");
            let max = n1.checked_div(u1).unwrap_or(0);
            let lambda = params.get("lambda").copied().unwrap_or(max);
            if lambda < 1 || lambda > max {
                return Err(Error::HypothesisViolated(format!("lambda = {lambda} must lie in [1, floor(n1/u1) = {max}]")));
            }
            plan.params.insert("lambda".into(), lambda);
        }
        plan.check_hypotheses()?;
        Ok(plan)
    }

    /// Parses "key = value" lines; `#` starts a comment. Required keys are
    /// family, q, n, d, k and the family's parameters; `file.NAME = path`
    /// supplies sub-code NAME from a CDC file, relative paths being
    /// resolved against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut family = None;
        let mut target: BTreeMap<String, u64> = BTreeMap::new();
        let mut params = BTreeMap::new();
        let mut files = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(a, b)| (a.trim(), b.trim()))
                .ok_or_else(|| Error::parse(i + 1, format!("expected \"key = value\", got {line:?}")))?;
            if key == "family" {
                family = Some(ConstructionFamily::parse(value)?);
            } else if let Some(name) = key.strip_prefix("file.") {
                let path = PathBuf::from(value);
                let path = match base {
                    Some(b) if path.is_relative() => b.join(path),
                    _ => path,
                };
                files.insert(name.to_string(), path);
            } else {
                let v: u64 = value.parse().map_err(|e| Error::parse(i + 1, format!("{key}: {e}")))?;
                match key {
                    "q" | "n" | "d" | "k" => {
                        target.insert(key.to_string(), v);
                    }
                    _ => {
                        params.insert(key.to_string(), v);
                    }
                }
            }
        }
        let family = family.ok_or_else(|| Error::parse(1, "missing \"family\""))?;
        let get = |key: &str| target.get(key).copied().ok_or_else(|| Error::parse(1, format!("missing {key:?}")));
        let mut plan = ConstructionPlan::new(family, get("q")?, get("n")?, get("d")?, get("k")?, &params)?;
        for (name, path) in files {
            plan.set_file(&name, path)?;
        }
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ConstructionPlan::parse(&text, path.parent())
    }

    /// Supplies sub-code `name` from a CDC file.
    pub fn set_file(&mut self, name: &str, path: PathBuf) -> Result<()> {
        if !self.subcodes().iter().any(|s| s.name == name) {
            return Err(Error::InvalidParameters(format!("{} uses no sub-code {name:?}", self.family)));
        }
        self.files.insert(name.to_string(), path);
        Ok(())
    }

    pub fn file(&self, name: &str) -> Option<&Path> {
        self.files.get(name).map(PathBuf::as_path)
    }

    /// A parameter, including derived ones. Panics on a key the family
    /// does not have.
    pub fn get(&self, key: &str) -> u64 {
        match self.params.get(key) {
            Some(&v) => v,
            None => panic!("{} has no parameter {key}", self.family),
        }
    }

    pub(crate) fn us(&self, key: &str) -> usize {
        self.get(key) as usize
    }

    pub fn params(&self) -> &BTreeMap<String, u64> {
        &self.params
    }

    /// Half the minimum distance.
    pub fn h(&self) -> u64 {
        self.d / 2
    }

    /// Sub-codes the construction consumes, with their (n, k); all share d.
    pub fn subcodes(&self) -> Vec<SubcodeSpec> {
        let p = |key: &str| self.params.get(key).copied().unwrap_or(0) as usize;
        let (k, n1, n2) = (self.k as usize, p("n1"), p("n2"));
        let mut out = Vec::new();
        if self.family.has_base() {
            out.push(SubcodeSpec { name: "C1", n: n1, k });
            out.push(SubcodeSpec { name: "C2", n: n2, k });
        }
        if matches!(self.family, ConstructionFamily::Multiblocks | ConstructionFamily::ParallelBlocks) {
            out.push(SubcodeSpec { name: "Q1", n: p("t1"), k: p("a1") });
            out.push(SubcodeSpec { name: "Q2", n: p("t2"), k: p("a2") });
        }
        if self.family == ConstructionFamily::ParallelBlocks {
            out.push(SubcodeSpec { name: "D1", n: n1 - p("t1"), k: p("a1") });
            out.push(SubcodeSpec { name: "D2", n: n2 - p("t2"), k: p("a2") });
        }
        out
    }

    /// Canonical text form; parses back to an equal plan.
    pub fn to_text(&self) -> String {
        let mut s = format!("family = {}\nq = {}\nn = {}\nd = {}\nk = {}\n", self.family, self.q, self.n, self.d, self.k);
        for &key in self.family.keys() {
            s.push_str(&format!("{key} = {}\n", self.get(key)));
        }
        if self.family == ConstructionFamily::MultilevelII {
            s.push_str(&format!("lambda = {}\n", self.get("lambda")));
        }
        for (name, path) in &self.files {
            s.push_str(&format!("file.{name} = {}\n", path.display()));
        }
        s
    }

    /// One-line description used as CDC provenance.
    pub fn tag(&self) -> String {
        let mut s = format!("{} q={} n={} d={} k={}", self.family, self.q, self.n, self.d, self.k);
        for &key in self.family.keys() {
            s.push_str(&format!(" {key}={}", self.get(key)));
        }
        if self.family == ConstructionFamily::MultilevelII {
            s.push_str(&format!(" lambda={}", self.get("lambda")));
        }
        s
    }

    fn check_target(&self) -> Result<()> {
        let (q, n, d, k) = (self.q, self.n, self.d, self.k);
        if !is_prime_power(q) || q > MAX_ORDER as u64 {
            return Err(Error::InvalidFieldOrder(q));
        }
        if d < 2 || d % 2 == 1 {
            return Err(hyp(&format!("d = {d} must be even and at least 2")));
        }
        if k > n || d > 2 * k {
            return Err(hyp(&format!("need k ≤ n and d ≤ 2k, got (n,d,k) = ({n},{d},{k})")));
        }
        Ok(())
    }

    fn check_hypotheses(&self) -> Result<()> {
        let h = self.h();
        let k = self.k;
        let p = |key: &str| self.params.get(key).copied();
        let need = |ok: bool, what: String| if ok { Ok(()) } else { Err(Error::HypothesisViolated(what)) };
        let (n1, n2) = (self.get("n1"), self.get("n2"));
        need(n1 >= k && n2 >= k, format!("n1 = {n1} and n2 = {n2} must both be at least k = {k}"))?;
        let pair = |x: &str, y: &str| -> Result<()> {
            let (a, b) = (self.get(x), self.get(y));
            need(
                (1..=h).contains(&a) && (1..=h).contains(&b) && a + b >= h,
                format!("{x} = {a}, {y} = {b} must lie in [1, {h}] with {x} + {y} ≥ {h}"),
            )
        };
        match self.family {
            ConstructionFamily::Linkage => Ok(()),
            ConstructionFamily::Blocks | ConstructionFamily::Multiblocks | ConstructionFamily::ParallelBlocks => {
                let (a1, a2) = (self.get("a1"), self.get("a2"));
                need(a1 >= h && a2 >= h, format!("a1 = {a1} and a2 = {a2} must both be at least d/2 = {h}"))?;
                pair("b1", "b2")?;
                if self.family == ConstructionFamily::Blocks {
                    return Ok(());
                }
                let par = self.family == ConstructionFamily::ParallelBlocks;
                for (t, a, ni, i) in [(p("t1"), a1, n1, 1), (p("t2"), a2, n2, 2)] {
                    let t = t.unwrap_or(0);
                    let hi = if par { ni.saturating_sub(a) } else { ni.saturating_sub(h) };
                    let bound = if par { format!("n{i} - a{i}") } else { format!("n{i} - d/2") };
                    need(a <= t && t <= hi, format!("t{i} = {t} must lie in [a{i}, {bound}] = [{a}, {hi}]"))?;
                }
                if par {
                    let (c1, c2) = (self.get("c1"), self.get("c2"));
                    for (c, b, a, i) in [(c1, self.get("b1"), a1, 1), (c2, self.get("b2"), a2, 2)] {
                        need(b <= c && c <= a, format!("c{i} = {c} must lie in [b{i}, a{i}] = [{b}, {a}]"))?;
                    }
                    need(c1 + c2 <= k - h, format!("c1 + c2 = {} exceeds k - d/2 = {}", c1 + c2, k - h))?;
                }
                Ok(())
            }
            ConstructionFamily::MultilevelI => {
                let (u1, u2) = (self.get("u1"), self.get("u2"));
                need(u1 >= self.d && u2 >= h, format!("need u1 ≥ d = {} and u2 ≥ d/2 = {h}, got u1 = {u1}, u2 = {u2}", self.d))?;
                pair("c1", "c2")
            }
            ConstructionFamily::MultilevelII => {
                let (u1, u2) = (self.get("u1"), self.get("u2"));
                need(u1 >= h && u2 >= h, format!("u1 = {u1} and u2 = {u2} must both be at least d/2 = {h}"))?;
                pair("b1", "b2")
            }
        }
    }
}

fn hyp(what: &str) -> Error {
    Error::HypothesisViolated(what.to_string())
}
