use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::registry::{Dependency, Registry};
use super::ser_big;
use crate::counting::{bounded_rank_size, mrd_size};
use crate::error::{Error, Result};

/// Closed-form bound families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Linkage of two smaller codes.
    Linkage,
    /// Linkage plus a multi-block insert.
    Cor41,
    /// Cor41 plus a parallel block insert.
    Cor42,
    /// Linkage plus a two-vector multilevel insert.
    Cor43,
    /// Linkage plus a shifted-vector multilevel insert.
    Cor44,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Linkage, Family::Cor41, Family::Cor42, Family::Cor43, Family::Cor44];

    pub fn name(self) -> &'static str {
        match self {
            Family::Linkage => "linkage",
            Family::Cor41 => "cor41",
            Family::Cor42 => "cor42",
            Family::Cor43 => "cor43",
            Family::Cor44 => "cor44",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown bound family {s:?}")))
    }

    /// Free parameters in grid order; the rest are derived.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Family::Linkage => &["n1"],
            Family::Cor41 => &["n1", "a1", "b1", "b2", "t1", "t2"],
            Family::Cor42 => &["n1", "a1", "b1", "b2", "t1", "t2", "c1", "c2"],
            Family::Cor43 => &["n1", "u1", "c1", "c2"],
            Family::Cor44 => &["n1", "u1", "b1", "b2"],
        }
    }

    /// Keys derived from the free ones (n2 = n - n1 and so on).
    fn derived(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Family::Linkage => &[("n2", "n1")],
            Family::Cor41 | Family::Cor42 => &[("n2", "n1"), ("a2", "a1")],
            Family::Cor43 | Family::Cor44 => &[("n2", "n1"), ("u2", "u1")],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Target parameters (q, n, d, k) of A_q(n,d,k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Target {
    pub q: u64,
    pub n: u64,
    pub d: u64,
    pub k: u64,
}

impl Target {
    pub fn new(q: u64, n: u64, d: u64, k: u64) -> Target {
        Target { q, n, d, k }
    }

    fn check(&self) -> Result<()> {
        if !is_prime_power(self.q) {
            return Err(hyp(format!("q = {} is not a prime power", self.q)));
        }
        if self.d < 2 || self.d % 2 == 1 {
            return Err(hyp(format!("d = {} must be a positive even integer", self.d)));
        }
        if self.k > self.n || self.d > 2 * self.k {
            return Err(hyp(format!("need k <= n and d <= 2k, got n={} d={} k={}", self.n, self.d, self.k)));
        }
        Ok(())
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}({},{},{})", self.q, self.n, self.d, self.k)
    }
}

pub(crate) fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p)).unwrap();
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

fn hyp(msg: impl Into<String>) -> Error {
    Error::HypothesisViolated(msg.into())
}

/// Free parameters of one bound evaluation, keyed by [`Family::keys`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundPlan {
    pub family: Family,
    pub values: Vec<u64>,
}

impl BoundPlan {
    pub fn new(family: Family, values: Vec<u64>) -> Result<BoundPlan> {
        if values.len() != family.keys().len() {
            return Err(Error::InvalidParameters(format!(
                "{family} takes {} parameters ({}), got {}",
                family.keys().len(),
                family.keys().join(","),
                values.len()
            )));
        }
        Ok(BoundPlan { family, values })
    }

    /// Builds a plan from named values; derived keys (n2, a2, u2) are
    /// accepted when consistent with the target.
    pub fn from_map(family: Family, target: &Target, map: &BTreeMap<String, u64>) -> Result<BoundPlan> {
        for key in map.keys() {
            let known = family.keys().contains(&key.as_str()) || family.derived().iter().any(|(d, _)| d == key);
            if !known {
                return Err(Error::InvalidParameters(format!("{family} has no parameter {key:?}")));
            }
        }
        let mut values = Vec::new();
        for key in family.keys() {
            let v = map.get(*key).ok_or_else(|| Error::InvalidParameters(format!("{family} needs parameter {key}")))?;
            values.push(*v);
        }
        let plan = BoundPlan { family, values };
        let full = plan.named(target);
        for (key, _) in family.derived() {
            if let Some(v) = map.get(*key) {
                if full.get(*key) != Some(v) {
                    return Err(hyp(format!("{key} = {v} is inconsistent with n and k")));
                }
            }
        }
        Ok(plan)
    }

    pub fn get(&self, key: &str) -> u64 {
        let i = self.family.keys().iter().position(|k| *k == key).expect("known key");
        self.values[i]
    }

    /// All parameters including derived ones; derived values saturate at 0.
    pub fn named(&self, target: &Target) -> BTreeMap<String, u64> {
        let mut map: BTreeMap<String, u64> =
            self.family.keys().iter().map(|k| k.to_string()).zip(self.values.iter().copied()).collect();
        for (derived, from) in self.family.derived() {
            let total = if *from == "n1" { target.n } else { target.k };
            map.insert(derived.to_string(), total.saturating_sub(map[*from]));
        }
        map
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub name: String,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
}

/// One summand of a bound: the product of the named terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: String,
    pub factors: Vec<String>,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
}

/// An exact bound value with the breakdown it was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub family: Family,
    pub target: Target,
    pub params: BTreeMap<String, u64>,
    #[serde(serialize_with = "ser_big")]
    pub total: BigUint,
    pub terms: Vec<Term>,
    pub components: Vec<Component>,
    pub registry_dependencies: Vec<Dependency>,
}

impl BoundResult {
    pub fn term(&self, name: &str) -> Option<&BigUint> {
        self.terms.iter().find(|t| t.name == name).map(|t| &t.value)
    }

    pub fn component(&self, name: &str) -> Option<&BigUint> {
        self.components.iter().find(|c| c.name == name).map(|c| &c.value)
    }

    /// Recomputes every component from its factors and the total from the
    /// components.
    pub fn audit(&self) -> bool {
        let mut sum = BigUint::zero();
        for c in &self.components {
            let mut product = BigUint::one();
            for f in &c.factors {
                match self.term(f) {
                    Some(v) => product *= v,
                    None => return false,
                }
            }
            if product != c.value {
                return false;
            }
            sum += &c.value;
        }
        sum == self.total
    }
}

struct Acc<'a> {
    reg: &'a Registry,
    t: Target,
    terms: Vec<Term>,
    components: Vec<Component>,
    deps: Vec<Dependency>,
}

impl<'a> Acc<'a> {
    fn new(reg: &'a Registry, t: Target) -> Self {
        Acc { reg, t, terms: Vec::new(), components: Vec::new(), deps: Vec::new() }
    }

    fn value(&self, name: &str) -> &BigUint {
        &self.terms.iter().find(|t| t.name == name).expect("term recorded").value
    }

    fn put(&mut self, name: String, value: BigUint) -> String {
        if !self.terms.iter().any(|t| t.name == name) {
            self.terms.push(Term { name: name.clone(), value });
        }
        name
    }

    /// A_q(n,d,k) from the registry.
    fn a(&mut self, n: u64, k: u64) -> Result<String> {
        let dep = self.reg.lookup(self.t.q, n, self.t.d, k)?;
        let name = format!("A_{}({},{},{})", self.t.q, n, self.t.d, k);
        let value = dep.value.clone();
        if !self.deps.contains(&dep) {
            self.deps.push(dep);
        }
        Ok(self.put(name, value))
    }

    /// m(q,a,b,d).
    fn m(&mut self, a: u64, b: u64, d: u64) -> Result<String> {
        let v = mrd_size(self.t.q, a, b, d).map_err(|e| hyp(format!("m({},{a},{b},{d}): {e}", self.t.q)))?;
        Ok(self.put(format!("m({},{a},{b},{d})", self.t.q), v))
    }

    /// m(q,a,b,d,u) under a role name; u above min(a,b) admits every codeword.
    fn mb(&mut self, role: &str, a: u64, b: u64, d: u64, u: u64) -> Result<String> {
        if d < 1 || d > a.min(b) {
            return Err(hyp(format!("{role} = m({},{a},{b},{d},{u}) needs 1 <= d <= min(a,b)", self.t.q)));
        }
        let v = bounded_rank_size(self.t.q, a, b, d, u.min(a.min(b)))?;
        Ok(self.put(role.to_string(), v))
    }

    /// m(q,a,b,lo)/m(q,a,b,hi), the number of cosets of the distance-hi subcode.
    fn ratio(&self, a: u64, b: u64, lo: u64, hi: u64) -> Result<BigUint> {
        let q = self.t.q;
        let num = mrd_size(q, a, b, lo).map_err(|e| hyp(e.to_string()))?;
        let den = mrd_size(q, a, b, hi).map_err(|e| hyp(e.to_string()))?;
        if !(&num % &den).is_zero() {
            return Err(Error::InvalidParameters(format!("m({q},{a},{b},{lo}) not divisible by m({q},{a},{b},{hi})")));
        }
        Ok(num / den)
    }

    fn min(&mut self, role: &str, x: &str, y: &str) -> String {
        let v = self.value(x).min(self.value(y)).clone();
        self.put(role.to_string(), v)
    }

    fn component(&mut self, name: impl Into<String>, factors: Vec<String>) {
        let mut value = BigUint::one();
        for f in &factors {
            value *= self.value(f);
        }
        self.components.push(Component { name: name.into(), factors, value });
    }

    fn finish(self, plan: &BoundPlan) -> BoundResult {
        let total = self.components.iter().map(|c| &c.value).sum();
        BoundResult {
            family: plan.family,
            target: self.t,
            params: plan.named(&self.t),
            total,
            terms: self.terms,
            components: self.components,
            registry_dependencies: self.deps,
        }
    }
}

/// Checks the shared linkage hypotheses and returns (n1, n2).
fn split(t: &Target, n1: u64) -> Result<(u64, u64)> {
    t.check()?;
    if n1 > t.n {
        return Err(hyp(format!("n1 = {n1} exceeds n = {}", t.n)));
    }
    let n2 = t.n - n1;
    if n1 < t.k || n2 < t.k {
        return Err(hyp(format!("need n1, n2 >= k = {}, got n1 = {n1}, n2 = {n2}", t.k)));
    }
    Ok((n1, n2))
}

fn linkage_terms(acc: &mut Acc, n1: u64, n2: u64) -> Result<()> {
    let (k, h) = (acc.t.k, acc.t.d / 2);
    let a1 = acc.a(n1, k)?;
    let m = acc.m(k, n2, h)?;
    acc.component("C1", vec![a1, m]);
    let theta = acc.mb("Theta", k, n1, h, k - h)?;
    let a2 = acc.a(n2, k)?;
    acc.component("C2", vec![theta, a2]);
    Ok(())
}

fn check_pair(name: &str, lo: u64, hi: u64, what: &str) -> Result<()> {
    if lo > hi {
        return Err(hyp(format!("{name}: need {what}")));
    }
    Ok(())
}

fn b_caps(h: u64, b1: u64, b2: u64, label: &str) -> Result<()> {
    for (i, b) in [(1, b1), (2, b2)] {
        if b < 1 || b > h {
            return Err(hyp(format!("need 1 <= {label}{i} <= d/2 = {h}, got {b}")));
        }
    }
    if b1 + b2 < h {
        return Err(hyp(format!("need {label}1 + {label}2 >= d/2 = {h}")));
    }
    Ok(())
}

/// Evaluates a plan against the registry.
pub fn evaluate(reg: &Registry, target: Target, plan: &BoundPlan) -> Result<BoundResult> {
    let mut acc = Acc::new(reg, target);
    let (n1, n2) = split(&target, plan.get("n1"))?;
    let (k, d, h) = (target.k, target.d, target.d / 2);
    match plan.family {
        Family::Linkage => linkage_terms(&mut acc, n1, n2)?,
        Family::Cor41 | Family::Cor42 => {
            let (a1, b1, b2, t1, t2) = (plan.get("a1"), plan.get("b1"), plan.get("b2"), plan.get("t1"), plan.get("t2"));
            if a1 > k {
                return Err(hyp(format!("a1 = {a1} exceeds k = {k}")));
            }
            let a2 = k - a1;
            if a1 < h || a2 < h {
                return Err(hyp(format!("need a1, a2 >= d/2 = {h}, got a1 = {a1}, a2 = {a2}")));
            }
            b_caps(h, b1, b2, "b")?;
            let parallel = plan.family == Family::Cor42;
            for (i, a, t, ni) in [(1, a1, t1, n1), (2, a2, t2, n2)] {
                let top = if parallel { ni.saturating_sub(a) } else { ni.saturating_sub(h) };
                let bound = if parallel { "n_i - a_i" } else { "n_i - d/2" };
                check_pair("t", a, t, &format!("a{i} <= t{i}, got a{i} = {a}, t{i} = {t}"))?;
                check_pair("t", t, top, &format!("t{i} <= {bound}, got t{i} = {t}"))?;
            }
            linkage_terms(&mut acc, n1, n2)?;
            let s = acc.ratio(a1, n1 - t1, b1, h)?.min(acc.ratio(a2, n2 - t2, b2, h)?);
            let s = acc.put("s".into(), s);
            let q1 = acc.a(t1, a1)?;
            let m1 = acc.m(a1, n1 - t1, h)?;
            let d1 = acc.mb("Delta1", a1, n2 - t2, h, a1 - h)?;
            let q2 = acc.a(t2, a2)?;
            let m2 = acc.m(a2, n2 - t2, h)?;
            let d2 = acc.mb("Delta2", a2, n1 - t1, h, a2 - h)?;
            acc.component("B", vec![s, q1, m1, d1, q2, m2, d2]);
            if parallel {
                let (c1, c2) = (plan.get("c1"), plan.get("c2"));
                check_pair("c", b1, c1, &format!("b1 <= c1 <= a1, got c1 = {c1}"))?;
                check_pair("c", c1, a1, &format!("b1 <= c1 <= a1, got c1 = {c1}"))?;
                check_pair("c", b2, c2, &format!("b2 <= c2 <= a2, got c2 = {c2}"))?;
                check_pair("c", c2, a2, &format!("b2 <= c2 <= a2, got c2 = {c2}"))?;
                check_pair("c", c1 + c2, k - h, &format!("c1 + c2 <= k - d/2 = {}", k - h))?;
                let d3 = acc.mb("Delta3", a1, t1, b1, c1)?;
                let d4 = acc.mb("Delta4", a2, t2, b2, c2)?;
                let e1 = acc.a(n1 - t1, a1)?;
                let e2 = acc.a(n2 - t2, a2)?;
                let factors =
                    if b1 == h && b2 == h { vec![d3, d4, e1, e2] } else { vec![acc.min("min(Delta3,Delta4)", &d3, &d4), e1, e2] };
                acc.component("E", factors);
            }
        }
        Family::Cor43 => {
            let (u1, c1, c2) = (plan.get("u1"), plan.get("c1"), plan.get("c2"));
            if u1 > k {
                return Err(hyp(format!("u1 = {u1} exceeds k = {k}")));
            }
            let u2 = k - u1;
            if u1 < d || u2 < h {
                return Err(hyp(format!("need u1 >= d and u2 >= d/2, got u1 = {u1}, u2 = {u2}")));
            }
            b_caps(h, c1, c2, "c")?;
            linkage_terms(&mut acc, n1, n2)?;
            let levels = [("1", u1, u2), ("2", u1 - h, u2 + h)];
            for (j, x1, x2) in levels {
                let s = acc.ratio(x1, n1 - x1, c1, h)?.min(acc.ratio(x2, n2 - x2, c2, h)?);
                let s = acc.put(format!("s{j}"), s);
                let left = acc.m(x1, n1 - x1, h)?;
                let delta = acc.mb(&format!("Delta{j}"), x1, n2 - x2, h, x1 - h)?;
                let right = acc.m(x2, n2 - x2, h)?;
                acc.component(format!("L{j}"), vec![s, left, delta, right]);
            }
        }
        Family::Cor44 => {
            let (u1, b1, b2) = (plan.get("u1"), plan.get("b1"), plan.get("b2"));
            if u1 > k {
                return Err(hyp(format!("u1 = {u1} exceeds k = {k}")));
            }
            let u2 = k - u1;
            if u1 < h || u2 < h {
                return Err(hyp(format!("need u1, u2 >= d/2, got u1 = {u1}, u2 = {u2}")));
            }
            b_caps(h, b1, b2, "b")?;
            linkage_terms(&mut acc, n1, n2)?;
            let l1 = acc.mb("Lambda1", u2, n2 - u2, h, u2)?;
            let l2 = acc.mb("Lambda2", u1, n2 - u2, h, u1 - h)?;
            let lambda = n1 / u1;
            for i in 1..=lambda {
                let w = n1 - i * u1;
                let factors = if w < b1 {
                    vec![l1.clone(), l2.clone()]
                } else if w < h {
                    let l3 = acc.mb(&format!("Lambda3_{i}"), u1, w, b1, u1.min(w))?;
                    let l4 = acc.mb("Lambda4", u2, n2 - u2, b2, u2)?;
                    vec![acc.min(&format!("min(Lambda3,Lambda4)_{i}"), &l3, &l4), l2.clone()]
                } else {
                    let s = acc.ratio(u1, w, b1, h)?.min(acc.ratio(u2, n2 - u2, b2, h)?);
                    let s = acc.put(format!("s_{i}"), s);
                    let l5 = acc.mb(&format!("Lambda5_{i}"), u1, w, h, u1.min(w))?;
                    vec![s, l5, l1.clone(), l2.clone()]
                };
                acc.component(format!("L{i}"), factors);
            }
        }
    }
    Ok(acc.finish(plan))
}

pub fn bound_linkage(reg: &Registry, t: Target, n1: u64) -> Result<BoundResult> {
    evaluate(reg, t, &BoundPlan::new(Family::Linkage, vec![n1])?)
}

#[allow(clippy::too_many_arguments)]
pub fn bound_cor41(reg: &Registry, t: Target, n1: u64, a1: u64, b1: u64, b2: u64, t1: u64, t2: u64) -> Result<BoundResult> {
    evaluate(reg, t, &BoundPlan::new(Family::Cor41, vec![n1, a1, b1, b2, t1, t2])?)
}

#[allow(clippy::too_many_arguments)]
pub fn bound_cor42(
    reg: &Registry,
    t: Target,
    n1: u64,
    a1: u64,
    b1: u64,
    b2: u64,
    t1: u64,
    t2: u64,
    c1: u64,
    c2: u64,
) -> Result<BoundResult> {
    evaluate(reg, t, &BoundPlan::new(Family::Cor42, vec![n1, a1, b1, b2, t1, t2, c1, c2])?)
}

pub fn bound_cor43(reg: &Registry, t: Target, n1: u64, u1: u64, c1: u64, c2: u64) -> Result<BoundResult> {
    evaluate(reg, t, &BoundPlan::new(Family::Cor43, vec![n1, u1, c1, c2])?)
}

pub fn bound_cor44(reg: &Registry, t: Target, n1: u64, u1: u64, b1: u64, b2: u64) -> Result<BoundResult> {
    evaluate(reg, t, &BoundPlan::new(Family::Cor44, vec![n1, u1, b1, b2])?)
}

/// Every admissible plan for the family, in lexicographic order.
pub fn grid(family: Family, t: &Target) -> Vec<BoundPlan> {
    let (n, d, k, h) = (t.n, t.d, t.k, t.d / 2);
    let mut out: Vec<Vec<u64>> = Vec::new();
    if t.check().is_err() || n < 2 * k {
        return Vec::new();
    }
    let bs = || (1..=h).flat_map(move |b1| (1..=h).map(move |b2| (b1, b2))).filter(move |(b1, b2)| b1 + b2 >= h);
    for n1 in k..=n - k {
        let n2 = n - n1;
        match family {
            Family::Linkage => out.push(vec![n1]),
            Family::Cor41 | Family::Cor42 => {
                for a1 in h..=k.saturating_sub(h) {
                    let a2 = k - a1;
                    for (b1, b2) in bs() {
                        if family == Family::Cor41 {
                            for t1 in a1..=n1 - h {
                                for t2 in a2..=n2 - h {
                                    out.push(vec![n1, a1, b1, b2, t1, t2]);
                                }
                            }
                            continue;
                        }
                        for t1 in a1..=n1 - a1 {
                            for t2 in a2..=n2 - a2 {
                                for c1 in b1..=a1 {
                                    for c2 in b2..=a2 {
                                        if c1 + c2 <= k - h {
                                            out.push(vec![n1, a1, b1, b2, t1, t2, c1, c2]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Family::Cor43 => {
                for u1 in d..=k.saturating_sub(h) {
                    for (c1, c2) in bs() {
                        out.push(vec![n1, u1, c1, c2]);
                    }
                }
            }
            Family::Cor44 => {
                for u1 in h..=k.saturating_sub(h) {
                    for (b1, b2) in bs() {
                        out.push(vec![n1, u1, b1, b2]);
                    }
                }
            }
        }
    }
    out.into_iter().map(|values| BoundPlan { family, values }).collect()
}
