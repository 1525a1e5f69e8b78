//! Linkage and inserting constructions. Every builder computes exact
//! component counts from the sizes of its sub-codes and, when the code is
//! small enough and every sub-code is available explicitly, also produces
//! the codewords.
//!
//! Generator layouts, with column blocks of widths [t1 | n1-t1 | t2 | n2-t2]:
//!
//! ```text
//! linkage      C1: [ xi(U1) | M2 ]            C2: [ M1 | xi(U2) ]
//! blocks           [ I   M11 | 0   M12 ]   (t_i = a_i, full MRD M12, M21)
//!                  [ 0   M21 | I   M22 ]
//! multiblocks  B:  [ xi(U1) M11 | 0      M12 ]
//!                  [ 0      M21 | xi(U2) M22 ]
//! parallel     E:  [ M1 xi(U1) | 0  0      ]
//!                  [ 0  0      | M2 xi(U2) ]
//! ```
//!
//! where xi(U) is the reduced generator of U. Multilevel constructions lift
//! Ferrers-diagram codes on special-form identifying vectors.

mod plan;

pub use plan::{ConstructionFamily, ConstructionPlan, SubcodeSpec};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Field, Matrix};
use crate::bounds::{ser_big, Registry};
use crate::counting::{bounded_rank_size, mrd_size};
use crate::error::{Error, Result};
use crate::limits;
use crate::rankcodes::{fdrm_subcode_union, fdrm_union, gabidulin, CosetFamily, FdrmCase, FerrersShape};
use crate::subspaces::{lift_matrix, lift_special_form, Cdc, IdentifyingVector, Subspace};

/// How a build should run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Skip explicit construction and take sub-code sizes from files or the
    /// registry.
    pub count_only: bool,
    /// Largest code produced explicitly.
    pub cutoff: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { count_only: false, cutoff: limits::build_cutoff() }
    }
}

impl BuildOptions {
    pub fn count_only() -> Self {
        BuildOptions { count_only: true, ..Self::default() }
    }
}

/// Where a sub-code came from and how large it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubcodeUse {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    pub source: String,
}

/// Named component count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub name: String,
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
}

/// Result of a build. When `cdc` is present its size equals `total`, and
/// `part_of[i]` names the component of its i-th codeword.
#[derive(Clone, Debug)]
pub struct BuildOutput {
    pub plan: ConstructionPlan,
    pub components: Vec<ComponentCount>,
    pub total: BigUint,
    pub subcodes: Vec<SubcodeUse>,
    pub vectors: Vec<IdentifyingVector>,
    pub cdc: Option<Cdc>,
    part_of: Vec<usize>,
    pub notes: Vec<String>,
}

/// Serializable summary of a [`BuildOutput`].
#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub family: ConstructionFamily,
    pub q: u64,
    pub n: u64,
    pub d: u64,
    pub k: u64,
    pub params: BTreeMap<String, u64>,
    pub components: Vec<ComponentCount>,
    #[serde(serialize_with = "ser_big")]
    pub total: BigUint,
    pub explicit: bool,
    pub subcodes: Vec<SubcodeUse>,
    pub vectors: Vec<String>,
    pub notes: Vec<String>,
}

impl BuildOutput {
    pub fn component(&self, name: &str) -> Option<&BigUint> {
        self.components.iter().find(|c| c.name == name).map(|c| &c.count)
    }

    pub fn is_explicit(&self) -> bool {
        self.cdc.is_some()
    }

    /// Explicit codewords of one component.
    pub fn members(&self, name: &str) -> Vec<&Subspace> {
        let Some(cdc) = &self.cdc else { return Vec::new() };
        let Some(idx) = self.components.iter().position(|c| c.name == name) else { return Vec::new() };
        cdc.codewords().iter().zip(&self.part_of).filter(|(_, &p)| p == idx).map(|(u, _)| u).collect()
    }

    /// Explicit codewords outside the linkage base C1 ∪ C2.
    pub fn inserted(&self) -> Vec<&Subspace> {
        let Some(cdc) = &self.cdc else { return Vec::new() };
        let base: Vec<usize> = if self.plan.family.has_base() { vec![0, 1] } else { Vec::new() };
        cdc.codewords().iter().zip(&self.part_of).filter(|(_, p)| !base.contains(p)).map(|(u, _)| u).collect()
    }

    pub fn report(&self) -> BuildReport {
        BuildReport {
            family: self.plan.family,
            q: self.plan.q,
            n: self.plan.n,
            d: self.plan.d,
            k: self.plan.k,
            params: self.plan.params().clone(),
            components: self.components.clone(),
            total: self.total.clone(),
            explicit: self.is_explicit(),
            subcodes: self.subcodes.clone(),
            vectors: self.vectors.iter().map(|v| v.to_string()).collect(),
            notes: self.notes.clone(),
        }
    }
}

/// Runs the plan's construction.
pub fn build(plan: &ConstructionPlan, reg: &Registry, opts: BuildOptions) -> Result<BuildOutput> {
    let vectors = match plan.family {
        ConstructionFamily::MultilevelI | ConstructionFamily::MultilevelII => multilevel_vectors(plan)?,
        _ => Vec::new(),
    };
    let mut notes = Vec::new();
    if !opts.count_only {
        match explicit_subcodes(plan, opts.cutoff)? {
            Ok(subs) => {
                let sizes: BTreeMap<&str, BigUint> =
                    subs.iter().map(|(u, m)| (name_of(plan, &u.name), BigUint::from(m.len()))).collect();
                let components = component_counts(plan, &sizes)?;
                let total: BigUint = components.iter().map(|c| &c.count).sum();
                if total <= BigUint::from(opts.cutoff) {
                    let members: BTreeMap<&str, Vec<Subspace>> =
                        subs.iter().map(|(u, m)| (name_of(plan, &u.name), m.clone())).collect();
                    let (cdc, part_of) = assemble(plan, &members, &components)?;
                    return Ok(BuildOutput {
                        plan: plan.clone(),
                        components,
                        total,
                        subcodes: subs.into_iter().map(|(u, _)| u).collect(),
                        vectors,
                        cdc: Some(cdc),
                        part_of,
                        notes,
                    });
                }
                notes.push(format!("total {total} exceeds the explicit-build cutoff {}; counts only", opts.cutoff));
            }
            Err(why) => notes.push(format!("{why}; counts only")),
        }
    }
    let mut subcodes = Vec::new();
    for spec in plan.subcodes() {
        subcodes.push(count_subcode(plan, &spec, reg)?);
    }
    let sizes: BTreeMap<&str, BigUint> = subcodes.iter().map(|u| (name_of(plan, &u.name), u.count.clone())).collect();
    let components = component_counts(plan, &sizes)?;
    let total = components.iter().map(|c| &c.count).sum();
    Ok(BuildOutput { plan: plan.clone(), components, total, subcodes, vectors, cdc: None, part_of: Vec::new(), notes })
}

fn expect_family(plan: &ConstructionPlan, family: ConstructionFamily) -> Result<()> {
    if plan.family != family {
        return Err(Error::InvalidParameters(format!("plan is for {}, not {family}", plan.family)));
    }
    Ok(())
}

/// C = C1 ∪ C2 from two codes of length n1, n2 and MRD codes.
pub fn build_linkage(plan: &ConstructionPlan, reg: &Registry, opts: BuildOptions) -> Result<BuildOutput> {
    expect_family(plan, ConstructionFamily::Linkage)?;
    build(plan, reg, opts)
}

/// The union over paired cosets of identity-block codewords.
pub fn build_blocks(plan: &ConstructionPlan, opts: BuildOptions) -> Result<BuildOutput> {
    expect_family(plan, ConstructionFamily::Blocks)?;
    build(plan, &Registry::empty(), opts)
}

/// Linkage code C together with the inserted set B.
pub fn build_multiblocks(plan: &ConstructionPlan, reg: &Registry, opts: BuildOptions) -> Result<BuildOutput> {
    expect_family(plan, ConstructionFamily::Multiblocks)?;
    build(plan, reg, opts)
}

/// C ∪ B together with the parallel set E.
pub fn build_parallel_blocks(plan: &ConstructionPlan, reg: &Registry, opts: BuildOptions) -> Result<BuildOutput> {
    expect_family(plan, ConstructionFamily::ParallelBlocks)?;
    build(plan, reg, opts)
}

/// Linkage code C together with lifted Ferrers-diagram codes L_1, L_2, ...
pub fn build_multilevel_insert(plan: &ConstructionPlan, reg: &Registry, opts: BuildOptions) -> Result<BuildOutput> {
    if !matches!(plan.family, ConstructionFamily::MultilevelI | ConstructionFamily::MultilevelII) {
        return Err(Error::InvalidParameters(format!("plan is for {}, not a multilevel construction", plan.family)));
    }
    build(plan, reg, opts)
}

/// The vector with `u1` ones at offset `shift` inside the first `delta1`
/// coordinates and `u2` leading ones in the last `delta2`.
pub fn special_form_vector(delta1: usize, delta2: usize, u1: usize, u2: usize, shift: usize) -> Result<IdentifyingVector> {
    if u1 == 0 || u2 == 0 || delta1 < shift + u1 || delta2 < u2 {
        return Err(Error::HypothesisViolated(format!(
            "special form needs u1, u2 ≥ 1, delta1 ≥ shift + u1 and delta2 ≥ u2; got ({delta1},{delta2},{u1},{u2},{shift})"
        )));
    }
    let mut bits = vec![false; delta1 + delta2];
    bits[shift..shift + u1].fill(true);
    bits[delta1..delta1 + u2].fill(true);
    Ok(IdentifyingVector::new(bits))
}

/// How the diagonal blocks of one multilevel component are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    /// Paired cosets of the distance-d/2 subcode inside distances (c1, c2).
    Subcode(usize, usize),
    /// Three-case union with diagonal distances (b1, b2).
    Union(usize, usize),
}

fn multilevel_shapes(plan: &ConstructionPlan) -> Result<Vec<(FerrersShape, Rule)>> {
    let (n1, n2, u1, u2, h) = (plan.us("n1"), plan.us("n2"), plan.us("u1"), plan.us("u2"), plan.h() as usize);
    let shape = |u1, u2, shift| FerrersShape::new(n1, n2, u1, u2, shift, h).map_err(|e| Error::HypothesisViolated(e.to_string()));
    match plan.family {
        ConstructionFamily::MultilevelI => {
            let rule = Rule::Subcode(plan.us("c1"), plan.us("c2"));
            Ok(vec![(shape(u1, u2, 0)?, rule), (shape(u1 - h, u2 + h, 0)?, rule)])
        }
        ConstructionFamily::MultilevelII => {
            let (b1, b2) = (plan.us("b1"), plan.us("b2"));
            (0..plan.us("lambda"))
                .map(|i| {
                    let s = shape(u1, u2, i * u1)?;
                    let rule = if s.left_width() >= h { Rule::Subcode(b1, b2) } else { Rule::Union(b1, b2) };
                    Ok((s, rule))
                })
                .collect()
        }
        _ => Ok(Vec::new()),
    }
}

/// Special-form vectors of a multilevel plan, checked for pairwise Hamming
/// distance at least d.
pub fn multilevel_vectors(plan: &ConstructionPlan) -> Result<Vec<IdentifyingVector>> {
    let shapes = multilevel_shapes(plan)?;
    let vs: Vec<IdentifyingVector> =
        shapes.iter().map(|(s, _)| special_form_vector(s.delta1, s.delta2, s.u1, s.u2, s.shift)).collect::<Result<_>>()?;
    let d = plan.d as usize;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let dist = vs[i].hamming(&vs[j]);
            if dist < d {
                return Err(Error::HammingDistanceViolated(i + 1, j + 1, dist, d));
            }
        }
    }
    Ok(vs)
}

// Counting. Sub-code sizes are keyed by sub-code name.

struct Counter {
    q: u64,
}

impl Counter {
    fn m(&self, a: usize, b: usize, d: usize) -> Result<BigUint> {
        mrd_size(self.q, a as u64, b as u64, d as u64)
    }

    /// Codewords of rank ≤ cap in an a×b MRD code of distance d.
    fn mb(&self, a: usize, b: usize, d: usize, cap: usize) -> Result<BigUint> {
        bounded_rank_size(self.q, a as u64, b as u64, d as u64, cap.min(a.min(b)) as u64)
    }

    /// Number of cosets of the distance-h subcode inside the distance-dm code.
    fn cosets(&self, a: usize, b: usize, dm: usize, h: usize) -> Result<BigUint> {
        let (big, small) = (self.m(a, b, dm)?, self.m(a, b, h)?);
        if !(&big % &small).is_zero() {
            return Err(Error::InvalidParameters(format!("{big} is not divisible by {small}")));
        }
        Ok(big / small)
    }

    fn shape(&self, s: &FerrersShape, rule: Rule) -> Result<BigUint> {
        let (u1, u2, w1, w2, h) = (s.u1, s.u2, s.left_width(), s.right_width(), s.d_f);
        let corner = self.mb(u1, w2, h, u1 - h)?;
        let diag = match rule {
            Rule::Subcode(c1, c2) => {
                let s = self.cosets(u1, w1, c1, h)?.min(self.cosets(u2, w2, c2, h)?);
                s * self.m(u1, w1, h)? * self.m(u2, w2, h)?
            }
            Rule::Union(b1, _) if w1 < b1 => self.m(u2, w2, h)?,
            Rule::Union(b1, b2) if w1 < h => self.m(u1, w1, b1)?.min(self.m(u2, w2, b2)?),
            Rule::Union(..) => self.m(u1, w1, h)? * self.m(u2, w2, h)?,
        };
        Ok(diag * corner)
    }
}

fn component_counts(plan: &ConstructionPlan, sizes: &BTreeMap<&str, BigUint>) -> Result<Vec<ComponentCount>> {
    let c = Counter { q: plan.q };
    let p = |key: &str| plan.us(key);
    let size = |name: &str| sizes[name].clone();
    let (k, h, n1, n2) = (plan.k as usize, plan.h() as usize, p("n1"), p("n2"));
    let mut out = Vec::new();
    let mut push = |name: String, count: BigUint| out.push(ComponentCount { name, count });
    if plan.family.has_base() {
        push("C1".into(), size("C1") * c.m(k, n2, h)?);
        push("C2".into(), c.mb(k, n1, h, k - h)? * size("C2"));
    }
    match plan.family {
        ConstructionFamily::Linkage => {}
        ConstructionFamily::Blocks => {
            let (a1, a2, b1, b2) = (p("a1"), p("a2"), p("b1"), p("b2"));
            let (w1, w2) = (n1 - a1, n2 - a2);
            let s = c.cosets(a1, w1, b1, h)?.min(c.cosets(a2, w2, b2, h)?);
            push("N".into(), s * c.m(a1, w1, h)? * c.m(a1, w2, h)? * c.m(a2, w1, h)? * c.m(a2, w2, h)?);
        }
        ConstructionFamily::Multiblocks | ConstructionFamily::ParallelBlocks => {
            let (a1, a2, b1, b2, t1, t2) = (p("a1"), p("a2"), p("b1"), p("b2"), p("t1"), p("t2"));
            let (w1, w2) = (n1 - t1, n2 - t2);
            let s = c.cosets(a1, w1, b1, h)?.min(c.cosets(a2, w2, b2, h)?);
            let b = s
                * size("Q1")
                * c.m(a1, w1, h)?
                * c.mb(a1, w2, h, a1 - h)?
                * size("Q2")
                * c.m(a2, w2, h)?
                * c.mb(a2, w1, h, a2 - h)?;
            push("B".into(), b);
            if plan.family == ConstructionFamily::ParallelBlocks {
                let (m1, m2) = (c.mb(a1, t1, b1, p("c1"))?, c.mb(a2, t2, b2, p("c2"))?);
                let pairs = if b1 == h && b2 == h { m1 * m2 } else { m1.min(m2) };
                push("E".into(), pairs * size("D1") * size("D2"));
            }
        }
        ConstructionFamily::MultilevelI | ConstructionFamily::MultilevelII => {
            for (i, (shape, rule)) in multilevel_shapes(plan)?.iter().enumerate() {
                push(format!("L{}", i + 1), c.shape(shape, *rule)?);
            }
        }
    }
    Ok(out)
}

// Sub-code resolution.

fn name_of(plan: &ConstructionPlan, name: &str) -> &'static str {
    plan.subcodes().into_iter().find(|s| s.name == name).map(|s| s.name).expect("known sub-code")
}

fn read_subcode(plan: &ConstructionPlan, spec: &SubcodeSpec) -> Result<Option<Cdc>> {
    let Some(path) = plan.file(spec.name) else { return Ok(None) };
    let code = Cdc::read(path)?;
    let d = plan.d as usize;
    if code.field().order() as u64 != plan.q || code.ambient() != spec.n || code.dim() != spec.k || code.claimed_distance() < d {
        return Err(Error::HypothesisViolated(format!(
            "{} from {} is a GF({}) code with (n,k,d) = ({},{},{}); need GF({}) and ({},{},≥{d})",
            spec.name,
            path.display(),
            code.field().order(),
            code.ambient(),
            code.dim(),
            code.claimed_distance(),
            plan.q,
            spec.n,
            spec.k
        )));
    }
    if code.has_duplicates() {
        return Err(Error::HypothesisViolated(format!("{} from {} repeats a codeword", spec.name, path.display())));
    }
    Ok(Some(code))
}

fn use_of(plan: &ConstructionPlan, spec: &SubcodeSpec, count: BigUint, source: String) -> SubcodeUse {
    SubcodeUse { name: spec.name.to_string(), n: spec.n, d: plan.d as usize, k: spec.k, count, source }
}

fn count_subcode(plan: &ConstructionPlan, spec: &SubcodeSpec, reg: &Registry) -> Result<SubcodeUse> {
    if let Some(code) = read_subcode(plan, spec)? {
        let source = format!("file {}", plan.file(spec.name).expect("file present").display());
        return Ok(use_of(plan, spec, BigUint::from(code.len()), source));
    }
    let dep = reg.lookup(plan.q, spec.n as u64, plan.d, spec.k as u64)?;
    Ok(use_of(plan, spec, dep.value, format!("registry: {}", dep.source)))
}

/// A small code of the given parameters: a single codeword when d exceeds
/// what two k-spaces can reach, otherwise a lifted Gabidulin code.
fn recursive_code(field: &Field, n: usize, d: usize, k: usize, cutoff: u64) -> Result<Option<(Vec<Subspace>, String)>> {
    if k == 0 || k == n || d > 2 * k.min(n - k) {
        let mut g = Matrix::zeros(field, k, n);
        g.paste(0, 0, &Matrix::identity(field, k));
        return Ok(Some((vec![Subspace::from_rows(&g)], "single codeword".into())));
    }
    let size = mrd_size(field.order() as u64, k as u64, (n - k) as u64, (d / 2) as u64)?;
    if size > BigUint::from(cutoff) {
        return Ok(None);
    }
    let code = gabidulin(field, k, n - k, d / 2)?;
    let members = code.enumerate(None)?.map(|m| lift_matrix(&m)).collect();
    Ok(Some((members, "lifted Gabidulin".into())))
}

type Explicit = Vec<(SubcodeUse, Vec<Subspace>)>;

/// Explicit sub-codes, or the reason one is unavailable.
fn explicit_subcodes(plan: &ConstructionPlan, cutoff: u64) -> Result<std::result::Result<Explicit, String>> {
    let field = Field::new(plan.q as u32)?;
    let mut out = Vec::new();
    for spec in plan.subcodes() {
        if let Some(code) = read_subcode(plan, &spec)? {
            let source = format!("file {}", plan.file(spec.name).expect("file present").display());
            let members = code.codewords().to_vec();
            out.push((use_of(plan, &spec, BigUint::from(members.len()), source), members));
            continue;
        }
        match recursive_code(&field, spec.n, plan.d as usize, spec.k, cutoff)? {
            Some((members, source)) => out.push((use_of(plan, &spec, BigUint::from(members.len()), source), members)),
            None => {
                return Ok(Err(format!(
                    "sub-code {} ({},{},{}) has no explicit form within the cutoff",
                    spec.name, spec.n, plan.d, spec.k
                )))
            }
        }
    }
    Ok(Ok(out))
}

// Explicit assembly.

/// Codewords of rank ≤ cap (all when `None`) in the a×b Gabidulin code of
/// distance d, sorted.
fn rank_set(field: &Field, a: usize, b: usize, d: usize, cap: Option<usize>) -> Result<Vec<Matrix>> {
    let mut v: Vec<Matrix> = gabidulin(field, a, b, d)?.enumerate(cap)?.collect();
    v.sort();
    Ok(v)
}

/// Matrix pairs (M11, M22) drawn from the r-th cosets of the distance-h
/// subcodes, for r below the smaller coset count.
fn coset_pairs(
    field: &Field,
    top: (usize, usize, usize),
    bottom: (usize, usize, usize),
    h: usize,
) -> Result<Vec<(Matrix, Matrix)>> {
    let f1 = CosetFamily::new(field, top.0, top.1, top.2, h)?;
    let f2 = CosetFamily::new(field, bottom.0, bottom.1, bottom.2, h)?;
    let s = f1.count().min(f2.count()).to_usize().expect("coset count fits in usize");
    let (l1, l2) = (f1.leaders()?, f2.leaders()?);
    let mut out = Vec::new();
    for r in 0..s {
        let xs: Vec<Matrix> = f1.coset(&l1[r])?.collect();
        let ys: Vec<Matrix> = f2.coset(&l2[r])?.collect();
        for x in &xs {
            for y in &ys {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}

fn place(field: &Field, k: usize, n: usize, blocks: &[(usize, usize, &Matrix)]) -> Subspace {
    let mut g = Matrix::zeros(field, k, n);
    for &(r, c, m) in blocks {
        g.paste(r, c, m);
    }
    Subspace::from_rows(&g)
}

/// Two-row-block codewords [X1 M11 | 0 M12 ; 0 M21 | X2 M22] over all
/// combinations.
#[allow(clippy::too_many_arguments)]
fn block_family(
    field: &Field,
    n: usize,
    (n1, t1, t2): (usize, usize, usize),
    x1s: &[Matrix],
    x2s: &[Matrix],
    diag: &[(Matrix, Matrix)],
    m12s: &[Matrix],
    m21s: &[Matrix],
) -> Vec<Subspace> {
    let a1 = x1s.first().map_or(0, Matrix::rows);
    let a2 = x2s.first().map_or(0, Matrix::rows);
    diag.par_iter()
        .flat_map_iter(|(m11, m22)| {
            x1s.iter().flat_map(move |x1| {
                x2s.iter().flat_map(move |x2| {
                    m12s.iter().flat_map(move |m12| {
                        m21s.iter().map(move |m21| {
                            place(
                                field,
                                a1 + a2,
                                n,
                                &[(0, 0, x1), (0, t1, m11), (0, n1 + t2, m12), (a1, t1, m21), (a1, n1, x2), (a1, n1 + t2, m22)],
                            )
                        })
                    })
                })
            })
        })
        .collect()
}

fn rrefs(members: &[Subspace]) -> Vec<Matrix> {
    members.iter().map(|u| u.rref().clone()).collect()
}

fn explicit_parts(plan: &ConstructionPlan, subs: &BTreeMap<&str, Vec<Subspace>>) -> Result<Vec<Vec<Subspace>>> {
    let field = Field::new(plan.q as u32)?;
    let f = &field;
    let p = |key: &str| plan.us(key);
    let (n, k, h, n1, n2) = (plan.n as usize, plan.k as usize, plan.h() as usize, p("n1"), p("n2"));
    let mut parts = Vec::new();
    if plan.family.has_base() {
        let m2s = rank_set(f, k, n2, h, None)?;
        let c1: Vec<Subspace> = subs["C1"]
            .par_iter()
            .flat_map_iter(|u| m2s.iter().map(move |m2| place(f, k, n, &[(0, 0, u.rref()), (0, n1, m2)])))
            .collect();
        let m1s = rank_set(f, k, n1, h, Some(k - h))?;
        let c2: Vec<Subspace> = subs["C2"]
            .par_iter()
            .flat_map_iter(|u| m1s.iter().map(move |m1| place(f, k, n, &[(0, 0, m1), (0, n1, u.rref())])))
            .collect();
        parts.push(c1);
        parts.push(c2);
    }
    match plan.family {
        ConstructionFamily::Linkage => {}
        ConstructionFamily::Blocks => {
            let (a1, a2, b1, b2) = (p("a1"), p("a2"), p("b1"), p("b2"));
            let (w1, w2) = (n1 - a1, n2 - a2);
            let diag = coset_pairs(f, (a1, w1, b1), (a2, w2, b2), h)?;
            let (m12s, m21s) = (rank_set(f, a1, w2, h, None)?, rank_set(f, a2, w1, h, None)?);
            let (x1, x2) = ([Matrix::identity(f, a1)], [Matrix::identity(f, a2)]);
            parts.push(block_family(f, n, (n1, a1, a2), &x1, &x2, &diag, &m12s, &m21s));
        }
        ConstructionFamily::Multiblocks | ConstructionFamily::ParallelBlocks => {
            let (a1, a2, b1, b2, t1, t2) = (p("a1"), p("a2"), p("b1"), p("b2"), p("t1"), p("t2"));
            let (w1, w2) = (n1 - t1, n2 - t2);
            let diag = coset_pairs(f, (a1, w1, b1), (a2, w2, b2), h)?;
            let (m12s, m21s) = (rank_set(f, a1, w2, h, Some(a1 - h))?, rank_set(f, a2, w1, h, Some(a2 - h))?);
            let (x1, x2) = (rrefs(&subs["Q1"]), rrefs(&subs["Q2"]));
            parts.push(block_family(f, n, (n1, t1, t2), &x1, &x2, &diag, &m12s, &m21s));
            if plan.family == ConstructionFamily::ParallelBlocks {
                let m1s = rank_set(f, a1, t1, b1, Some(p("c1")))?;
                let m2s = rank_set(f, a2, t2, b2, Some(p("c2")))?;
                let pairs: Vec<(&Matrix, &Matrix)> = if b1 == h && b2 == h {
                    m1s.iter().flat_map(|x| m2s.iter().map(move |y| (x, y))).collect()
                } else {
                    m1s.iter().zip(&m2s).collect()
                };
                let (y1, y2) = (rrefs(&subs["D1"]), rrefs(&subs["D2"]));
                let e: Vec<Subspace> = pairs
                    .par_iter()
                    .flat_map_iter(|&(m1, m2)| {
                        let y2 = &y2;
                        y1.iter().flat_map(move |u1| {
                            y2.iter().map(move |u2| place(f, k, n, &[(0, 0, m1), (0, t1, u1), (a1, n1, m2), (a1, n1 + t2, u2)]))
                        })
                    })
                    .collect();
                parts.push(e);
            }
        }
        ConstructionFamily::MultilevelI | ConstructionFamily::MultilevelII => {
            for (shape, rule) in multilevel_shapes(plan)? {
                let cap = Some(shape.u1 - shape.d_f);
                let code = match rule {
                    Rule::Subcode(c1, c2) => fdrm_subcode_union(f, &shape, c1, c2, cap)?,
                    Rule::Union(b1, b2) => fdrm_union(f, &shape, b1, b2, cap, None)?,
                };
                debug_assert!(matches!(rule, Rule::Union(..)) || code.case() == FdrmCase::Product);
                let ms: Vec<Matrix> = code.iter().collect();
                let lifted = ms.par_iter().map(|m| lift_special_form(&shape, m)).collect::<Result<Vec<_>>>()?;
                parts.push(lifted);
            }
        }
    }
    Ok(parts)
}

fn assemble(
    plan: &ConstructionPlan,
    subs: &BTreeMap<&str, Vec<Subspace>>,
    components: &[ComponentCount],
) -> Result<(Cdc, Vec<usize>)> {
    let parts = explicit_parts(plan, subs)?;
    let mut tagged: Vec<(Subspace, usize)> = Vec::new();
    for (i, (part, comp)) in parts.into_iter().zip(components).enumerate() {
        assert_eq!(
            BigUint::from(part.len()),
            comp.count,
            "explicit size of {} disagrees with its count in {}",
            comp.name,
            plan.tag()
        );
        tagged.extend(part.into_iter().map(|u| (u, i)));
    }
    tagged.par_sort();
    let (codewords, part_of): (Vec<Subspace>, Vec<usize>) = tagged.into_iter().unzip();
    let field = Field::new(plan.q as u32)?;
    let cdc = Cdc::new(&field, plan.n as usize, plan.k as usize, plan.d as usize, codewords, plan.tag())?;
    Ok((cdc, part_of))
}
