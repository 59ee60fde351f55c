//! Bounded chain complexes over an exact structure.
//!
//! Convention: `dⁿ: Aⁿ → Aⁿ⁺¹`. An acyclicity witness stores, for each `n`,
//! `Zⁿ` with `pⁿ: Aⁿ⁻¹ ↠ Zⁿ` and `iⁿ: Zⁿ ↣ Aⁿ` such that `dⁿ⁻¹ = iⁿ∘pⁿ`, `iⁿ`
//! is a kernel of `dⁿ` and `pⁿ` is a cokernel of `dⁿ⁻²`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactstruct::{
    object_blob, object_from_blob, sample_inflation_from, Conflation, ExactError, ExactStructure, ObjectBlob,
};
use crate::fgab::{kernel, random_hom_with, restrict_through_kernel, Bounds, FgAb, FgAbError, Hom};
use crate::homlemmas::{double_conflation, nine_factorization, ConflationMorphism, DoubleDiagram, LemmaError};
use crate::intlin::{solve_integer, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("not a complex: {0}")]
    NotComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("not acyclic in degree {degree}: {reason}")]
    NotAcyclic { degree: i64, reason: String },
    #[error("degree {degree}: {error}")]
    Degree { degree: i64, error: LemmaError },
    #[error("malformed complex: {0}")]
    Format(String),
    #[error(transparent)]
    Fgab(#[from] FgAbError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

type Result<T> = std::result::Result<T, ComplexError>;

fn eq(a: &Hom, b: &Hom) -> bool {
    a.equals(b).unwrap_or(false)
}

/// Degrees `lo..=hi`; empty when `hi < lo`.
fn union(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    match (a.0 <= a.1, b.0 <= b.1) {
        (false, _) => b,
        (_, false) => a,
        _ => (a.0.min(b.0), a.1.max(b.1)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    objects: Vec<FgAb>,
    /// `diffs[k]: objects[k] → objects[k+1]`
    diffs: Vec<Hom>,
}

impl ChainComplex {
    pub fn new(lo: i64, objects: Vec<FgAb>, diffs: Vec<Hom>) -> Result<Self> {
        if diffs.len() != objects.len().saturating_sub(1) {
            return Err(ComplexError::NotComplex(format!(
                "{} objects need {} differentials, got {}",
                objects.len(),
                objects.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &objects[k] || d.target() != &objects[k + 1] {
                return Err(ComplexError::NotComplex(format!("differential in degree {} has the wrong ends", lo + k as i64)));
            }
        }
        let c = ChainComplex { lo, objects, diffs };
        for n in c.lo..c.hi() {
            if !c.diff(n).after(&c.diff(n - 1))?.is_zero() {
                return Err(ComplexError::NotComplex(format!("d∘d ≠ 0 at degree {n}")));
            }
        }
        Ok(c)
    }

    pub fn zero() -> Self {
        ChainComplex { lo: 0, objects: Vec::new(), diffs: Vec::new() }
    }

    /// `a` in degree `n`.
    pub fn concentrated(a: &FgAb, n: i64) -> Self {
        ChainComplex { lo: n, objects: vec![a.clone()], diffs: Vec::new() }
    }

    /// `0 → a → b → 0` with `a` in degree `n`.
    pub fn two_term(d: &Hom, n: i64) -> Self {
        ChainComplex { lo: n, objects: vec![d.source().clone(), d.target().clone()], diffs: vec![d.clone()] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.objects.len() as i64 - 1
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, n: i64) -> FgAb {
        if n < self.lo || n > self.hi() {
            return FgAb::zero();
        }
        self.objects[(n - self.lo) as usize].clone()
    }

    pub fn diff(&self, n: i64) -> Hom {
        if n < self.lo || n >= self.hi() {
            return Hom::zero(&self.object(n), &self.object(n + 1));
        }
        self.diffs[(n - self.lo) as usize].clone()
    }

    pub fn to_blob(&self) -> ComplexBlob {
        ComplexBlob {
            support: [self.lo, self.hi()],
            objects: self.objects.iter().map(object_blob).collect(),
            differentials: self.diffs.iter().map(|d| d.action().to_text()).collect(),
        }
    }

    pub fn from_blob(b: &ComplexBlob) -> Result<Self> {
        let [lo, hi] = b.support;
        let objects = b.objects.iter().map(object_from_blob).collect::<std::result::Result<Vec<_>, _>>()?;
        if objects.len() as i64 != (hi - lo + 1).max(0) {
            return Err(ComplexError::Format(format!("support [{lo}, {hi}] does not match {} objects", objects.len())));
        }
        if b.differentials.len() != objects.len().saturating_sub(1) {
            return Err(ComplexError::Format("wrong number of differentials".into()));
        }
        let mut diffs = Vec::new();
        for (k, text) in b.differentials.iter().enumerate() {
            let m: Mat = text.parse().map_err(|e| ComplexError::Format(format!("{e}")))?;
            diffs.push(Hom::new(objects[k].clone(), objects[k + 1].clone(), m)?);
        }
        ChainComplex::new(lo, objects, diffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_blob()).expect("complex serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let b: ComplexBlob = serde_json::from_str(s).map_err(|e| ComplexError::Format(e.to_string()))?;
        ChainComplex::from_blob(&b)
    }

    fn from_fn(lo: i64, hi: i64, obj: impl Fn(i64) -> FgAb, diff: impl Fn(i64) -> Hom) -> Result<Self> {
        if hi < lo {
            return Ok(ChainComplex::zero());
        }
        let objects = (lo..=hi).map(obj).collect();
        let diffs = (lo..hi).map(diff).collect();
        ChainComplex::new(lo, objects, diffs)
    }
}

/// JSON form: `{support: [lo, hi], objects: [...], differentials: [matrices]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexBlob {
    pub support: [i64; 2],
    pub objects: Vec<ObjectBlob>,
    pub differentials: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    lo: i64,
    components: Vec<Hom>,
}

impl ChainMap {
    pub fn from_fn(source: &ChainComplex, target: &ChainComplex, f: impl Fn(i64) -> Hom) -> Result<Self> {
        let (lo, hi) = union(source.range(), target.range());
        let components: Vec<Hom> = (lo..=hi).map(f).collect();
        let m = ChainMap { source: source.clone(), target: target.clone(), lo, components };
        for n in lo..=hi {
            let c = m.component(n);
            if c.source() != &source.object(n) || c.target() != &target.object(n) {
                return Err(ComplexError::NotChainMap(format!("component {n} has the wrong ends")));
            }
        }
        for n in lo - 1..=hi {
            let left = target.diff(n).after(&m.component(n))?;
            let right = m.component(n + 1).after(&source.diff(n))?;
            if !eq(&left, &right) {
                return Err(ComplexError::NotChainMap(format!("square at degree {n} does not commute")));
            }
        }
        Ok(m)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap::from_fn(c, c, |n| Hom::identity(&c.object(n))).expect("identity is a chain map")
    }

    pub fn zero(a: &ChainComplex, b: &ChainComplex) -> Self {
        ChainMap::from_fn(a, b, |n| Hom::zero(&a.object(n), &b.object(n))).expect("zero is a chain map")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> Hom {
        let k = n - self.lo;
        if k < 0 || k >= self.components.len() as i64 {
            return Hom::zero(&self.source.object(n), &self.target.object(n));
        }
        self.components[k as usize].clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityWitness {
    lo: i64,
    z: Vec<FgAb>,
    p: Vec<Hom>,
    i: Vec<Hom>,
}

impl AcyclicityWitness {
    fn slot(&self, n: i64) -> Option<usize> {
        let k = n - self.lo;
        (k >= 0 && k < self.z.len() as i64).then_some(k as usize)
    }

    pub fn z(&self, n: i64) -> FgAb {
        self.slot(n).map_or_else(FgAb::zero, |k| self.z[k].clone())
    }

    /// `pⁿ: Aⁿ⁻¹ ↠ Zⁿ`.
    pub fn p(&self, n: i64) -> Hom {
        self.slot(n).map_or_else(|| Hom::zero(&FgAb::zero(), &FgAb::zero()), |k| self.p[k].clone())
    }

    /// `iⁿ: Zⁿ ↣ Aⁿ`.
    pub fn i(&self, n: i64) -> Hom {
        self.slot(n).map_or_else(|| Hom::zero(&FgAb::zero(), &FgAb::zero()), |k| self.i[k].clone())
    }

    /// The conflation `Zⁿ ↣ Aⁿ ↠ Zⁿ⁺¹`.
    pub fn conflation(&self, n: i64) -> Conflation {
        Conflation { inflation: self.i(n), deflation: self.p(n + 1) }
    }

    /// Degrees carrying data.
    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.z.len() as i64 - 1)
    }

    /// Every `Zⁿ` is zero.
    pub fn is_trivial(&self) -> bool {
        self.z.iter().all(FgAb::is_zero)
    }
}

fn not_acyclic(degree: i64, reason: impl Into<String>) -> ComplexError {
    ComplexError::NotAcyclic { degree, reason: reason.into() }
}

/// Witness from kernels of the differentials, or the first failing degree.
pub fn acyclicity(c: &ChainComplex, s: &ExactStructure) -> Result<AcyclicityWitness> {
    let (lo, hi) = c.range();
    if hi < lo {
        return Ok(AcyclicityWitness { lo: 0, z: Vec::new(), p: Vec::new(), i: Vec::new() });
    }
    let (mut z, mut ps, mut is) = (Vec::new(), Vec::new(), Vec::new());
    for n in lo..=hi + 1 {
        let (zn, i) = kernel(&c.diff(n));
        let p = restrict_through_kernel(&i, &c.diff(n - 1)).map_err(|_| not_acyclic(n, "d∘d ≠ 0"))?;
        if !s.is_inflation(&i) {
            return Err(not_acyclic(n, "kernel of the differential is not an inflation"));
        }
        if !s.is_deflation(&p) {
            return Err(not_acyclic(n, "the map onto the kernel is not a deflation"));
        }
        if !s.context().is_cokernel_of(&p, &c.diff(n - 2)) {
            return Err(not_acyclic(n, "the map onto the kernel is not a cokernel of the previous differential"));
        }
        z.push(zn);
        ps.push(p);
        is.push(i);
    }
    Ok(AcyclicityWitness { lo, z, p: ps, i: is })
}

pub fn is_acyclic(c: &ChainComplex, s: &ExactStructure) -> Option<AcyclicityWitness> {
    acyclicity(c, s).ok()
}

/// Checks every defining condition of a witness.
pub fn verify_witness(c: &ChainComplex, w: &AcyclicityWitness, s: &ExactStructure) -> Result<()> {
    let (lo, hi) = union((c.lo(), c.hi() + 1), w.range());
    for n in lo..=hi {
        let (i, p) = (w.i(n), w.p(n));
        if i.target() != &c.object(n) || p.source() != &c.object(n - 1) || i.source() != p.target() {
            return Err(not_acyclic(n, "witness maps have the wrong ends"));
        }
        if !eq(&i.after(&p)?, &c.diff(n - 1)) {
            return Err(not_acyclic(n, "differential does not factor as i∘p"));
        }
        if !s.is_inflation(&i) || !s.context().is_kernel_of(&i, &c.diff(n)) {
            return Err(not_acyclic(n, "i is not an inflation that is a kernel of the differential"));
        }
        if !s.is_deflation(&p) || !s.context().is_cokernel_of(&p, &c.diff(n - 2)) {
            return Err(not_acyclic(n, "p is not a deflation that is a cokernel of the previous differential"));
        }
    }
    Ok(())
}

/// `coneⁿ = Aⁿ⁺¹ ⊕ Bⁿ`, `dⁿ = [[−d_Aⁿ⁺¹, 0], [fⁿ⁺¹, d_Bⁿ]]`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let (a, b) = (f.source(), f.target());
    let (lo, hi) = union((a.lo() - 1, a.hi() - 1), b.range());
    ChainComplex::from_fn(
        lo,
        hi,
        |n| FgAb::direct_sum(&a.object(n + 1), &b.object(n)),
        |n| {
            let col1 = Hom::stack(&a.diff(n + 1).negate(), &f.component(n + 1)).unwrap();
            let col2 = Hom::stack(&Hom::zero(&b.object(n), &a.object(n + 2)), &b.diff(n)).unwrap();
            Hom::juxtapose(&col1, &col2).unwrap()
        },
    )
    .expect("the cone of a chain map is a complex")
}

fn at(degree: i64) -> impl Fn(LemmaError) -> ComplexError {
    move |error| ComplexError::Degree { degree, error }
}

fn lemma_at(degree: i64, e: FgAbError) -> ComplexError {
    ComplexError::Degree { degree, error: LemmaError::Fgab(e) }
}

/// Acyclicity witness for `cone(f)`, built from witnesses for its ends.
///
/// Per degree: `gⁿ: ZⁿA → ZⁿB` is induced, the nine factorization of
/// `(gⁿ, fⁿ, gⁿ⁺¹)` gives `ZⁿB ↣ ZⁿC ↠ Zⁿ⁺¹A` and `fⁿ = f₂ⁿ f₁ⁿ`, and the
/// double conflation gives `ZⁿC ↣ Aⁿ⁺¹ ⊕ Bⁿ ↠ Zⁿ⁺¹C`.
pub fn cone_acyclicity(
    f: &ChainMap,
    wa: &AcyclicityWitness,
    wb: &AcyclicityWitness,
    s: &ExactStructure,
) -> Result<AcyclicityWitness> {
    let (a, b) = (f.source(), f.target());
    verify_witness(a, wa, s).map_err(|e| ComplexError::NotAcyclic { degree: 0, reason: format!("source witness: {e}") })?;
    verify_witness(b, wb, s).map_err(|e| ComplexError::NotAcyclic { degree: 0, reason: format!("target witness: {e}") })?;
    let cone = mapping_cone(f);
    let (lo, hi) = union(cone.range(), union(wa.range(), wb.range()));
    let (lo, hi) = (lo - 1, hi + 2);

    struct Level {
        g: Hom,
        j: Hom,
        q: Hom,
        f1: Hom,
        f2: Hom,
    }
    let mut levels = Vec::new();
    for n in lo..=hi + 1 {
        let g = restrict_through_kernel(&wb.i(n), &f.component(n).after(&wa.i(n))?).map_err(|e| lemma_at(n, e))?;
        levels.push((n, g));
    }
    let mut data: Vec<Level> = Vec::new();
    for k in 0..levels.len() - 1 {
        let n = levels[k].0;
        let (g, g_next) = (&levels[k].1, &levels[k + 1].1);
        let m = ConflationMorphism::new(wa.conflation(n), wb.conflation(n), g.clone(), f.component(n), g_next.clone())
            .map_err(at(n))?;
        let nine = nine_factorization(s, &m).map_err(at(n))?;
        data.push(Level {
            g: g.clone(),
            j: nine.middle.inflation.clone(),
            q: nine.middle.deflation.clone(),
            f1: nine.upper.g.clone(),
            f2: nine.lower.g.clone(),
        });
    }
    let level = |n: i64| &data[(n - lo) as usize];

    let (mut z, mut ps, mut is) = (Vec::new(), Vec::new(), Vec::new());
    let (clo, chi) = cone.range();
    let (clo, chi) = if chi < clo { (0, -1) } else { (clo, chi) };
    for n in clo..=chi + 1 {
        let (cur, next) = (level(n), level(n + 1));
        let x = DoubleDiagram {
            i: cur.j.clone(),
            d: cur.q.clone(),
            j: wa.i(n + 1).negate(),
            i_prime: wb.i(n),
            d_prime: wb.p(n + 1),
            j_prime: next.j.clone(),
            g: cur.f2.clone(),
            h: next.g.clone(),
            f: next.f1.negate(),
        };
        let dc = double_conflation(s, &x).map_err(at(n))?;
        let (an1, bn) = (a.object(n + 1), b.object(n));
        let swap = Hom::stack(&FgAb::projection_second(&bn, &an1), &FgAb::projection_first(&bn, &an1))?;
        let unswap = Hom::juxtapose(&FgAb::injection_second(&bn, &an1), &FgAb::injection_first(&bn, &an1))?;
        let infl = swap.after(&dc.inflation)?;
        let defl = dc.deflation.after(&unswap)?;
        let i_cone = Hom::stack(&wa.i(n + 1).after(&cur.q)?.negate(), &cur.f2)?;
        let p_next = Hom::juxtapose(&next.f1, &next.j.after(&wb.p(n + 1))?)?;
        if !eq(&infl, &i_cone) || !eq(&defl, &p_next) {
            return Err(ComplexError::Degree {
                degree: n,
                error: LemmaError::Falsified("double conflation differs from the cone factorization".into()),
            });
        }
        let p_cone = Hom::juxtapose(&cur.f1, &cur.j.after(&wb.p(n))?)?;
        z.push(cur.j.target().clone());
        ps.push(p_cone);
        is.push(i_cone);
    }
    let w = AcyclicityWitness { lo: clo, z, p: ps, i: is };
    verify_witness(&cone, &w, s)?;
    Ok(w)
}

/// Components `hⁿ: Aⁿ → Bⁿ⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    lo: i64,
    components: Vec<Hom>,
}

impl Homotopy {
    pub fn component(&self, n: i64, f: &ChainMap) -> Hom {
        let k = n - self.lo;
        if k < 0 || k >= self.components.len() as i64 {
            return Hom::zero(&f.source().object(n), &f.target().object(n - 1));
        }
        self.components[k as usize].clone()
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.components.len() as i64 - 1)
    }

    /// `fⁿ = d_Bⁿ⁻¹hⁿ + hⁿ⁺¹d_Aⁿ` in every degree.
    pub fn is_homotopy_for(&self, f: &ChainMap) -> bool {
        let (a, b) = (f.source(), f.target());
        let (lo, hi) = union(union(a.range(), b.range()), self.range());
        (lo - 1..=hi + 1).all(|n| {
            let (h, h1) = (self.component(n, f), self.component(n + 1, f));
            match (b.diff(n - 1).after(&h), h1.after(&a.diff(n))) {
                (Ok(x), Ok(y)) => x.try_add(&y).map(|s| eq(&s, &f.component(n))).unwrap_or(false),
                _ => false,
            }
        })
    }
}

/// Builds `Σ L·X_v·R` terms into one integer system `M x = b`.
struct System {
    blocks: Vec<(usize, usize, usize)>,
    rows: Vec<Vec<(usize, num_bigint::BigInt)>>,
    rhs: Vec<num_bigint::BigInt>,
}

impl System {
    fn var(&mut self, r: usize, c: usize) -> usize {
        let off = self.blocks.last().map_or(0, |&(o, r, c)| o + r * c);
        self.blocks.push((off, r, c));
        self.blocks.len() - 1
    }

    fn count(&self) -> usize {
        self.blocks.last().map_or(0, |&(o, r, c)| o + r * c)
    }

    /// Adds equations `Σ sign·L·X·R = rhs`, entrywise.
    fn equation(&mut self, shape: (usize, usize), terms: &[(i64, &Mat, usize, &Mat)], rhs: Option<&Mat>) {
        use num_traits::Zero;
        for i in 0..shape.0 {
            for j in 0..shape.1 {
                let mut row: Vec<(usize, num_bigint::BigInt)> = Vec::new();
                for &(sign, l, v, r) in terms {
                    let (off, vr, vc) = self.blocks[v];
                    for k in 0..vr {
                        if l.get(i, k).is_zero() {
                            continue;
                        }
                        for m in 0..vc {
                            let c = l.get(i, k) * r.get(m, j) * sign;
                            if !c.is_zero() {
                                row.push((off + k * vc + m, c));
                            }
                        }
                    }
                }
                self.rows.push(row);
                self.rhs.push(rhs.map_or_else(num_bigint::BigInt::zero, |b| b.get(i, j).clone()));
            }
        }
    }

    fn solve(&self) -> Option<Vec<num_bigint::BigInt>> {
        let n = self.count();
        let mut m = Mat::zeros(self.rows.len(), n);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row {
                let v = m.get(i, *j) + c;
                m.set(i, *j, v);
            }
        }
        let b = Mat::from_vec(self.rhs.len(), 1, self.rhs.clone()).ok()?;
        let sol = solve_integer(&m, &b).ok()?.particular?;
        Some((0..n).map(|k| sol.get(k, 0).clone()).collect())
    }

    fn block(&self, x: &[num_bigint::BigInt], v: usize) -> Mat {
        let (off, r, c) = self.blocks[v];
        Mat::from_vec(r, c, x[off..off + r * c].to_vec()).expect("block shape")
    }
}

/// Solves `fⁿ = d_Bⁿ⁻¹hⁿ + hⁿ⁺¹d_Aⁿ` as one integer system, with
/// well-definedness of every `hⁿ` encoded by slack variables.
pub fn nullhomotopy(f: &ChainMap) -> Option<Homotopy> {
    let (a, b) = (f.source(), f.target());
    let (lo, hi) = union(a.range(), b.range());
    if hi < lo {
        return Some(Homotopy { lo: 0, components: Vec::new() });
    }
    let mut sys = System { blocks: Vec::new(), rows: Vec::new(), rhs: Vec::new() };
    let mut h = Vec::new();
    for n in lo..=hi + 1 {
        let (an, bn1) = (a.object(n), b.object(n - 1));
        let hv = sys.var(bn1.gens(), an.gens());
        let yv = sys.var(bn1.relations().cols(), an.relations().cols());
        // h·R_A = R_B·Y
        let ia = Mat::identity(an.relations().cols());
        let ib = Mat::identity(bn1.gens());
        sys.equation(
            (bn1.gens(), an.relations().cols()),
            &[(1, &ib, hv, an.relations()), (-1, bn1.relations(), yv, &ia)],
            None,
        );
        h.push(hv);
    }
    for n in lo..=hi {
        let (an, bn) = (a.object(n), b.object(n));
        let wv = sys.var(bn.relations().cols(), an.gens());
        let i_an = Mat::identity(an.gens());
        let i_bn = Mat::identity(bn.gens());
        let db = b.diff(n - 1);
        let da = a.diff(n);
        let (hn, hn1) = (h[(n - lo) as usize], h[(n + 1 - lo) as usize]);
        sys.equation(
            (bn.gens(), an.gens()),
            &[(1, db.action(), hn, &i_an), (1, &i_bn, hn1, da.action()), (-1, bn.relations(), wv, &i_an)],
            Some(f.component(n).action()),
        );
    }
    let x = sys.solve()?;
    let components = (lo..=hi + 1)
        .map(|n| {
            let m = sys.block(&x, h[(n - lo) as usize]);
            Hom::new(a.object(n), b.object(n - 1), m).expect("well-definedness is part of the system")
        })
        .collect();
    let out = Homotopy { lo, components };
    debug_assert!(out.is_homotopy_for(f));
    Some(out)
}

/// `(C[k])ⁿ = Cⁿ⁺ᵏ` with differential `(−1)ᵏ dⁿ⁺ᵏ`.
pub fn shift(c: &ChainComplex, k: i64) -> ChainComplex {
    let sign = if k % 2 == 0 { 1 } else { -1 };
    ChainComplex {
        lo: c.lo - k,
        objects: c.objects.clone(),
        diffs: c.diffs.iter().map(|d| if sign == 1 { d.clone() } else { d.negate() }).collect(),
    }
}

pub fn shift_witness(w: &AcyclicityWitness, k: i64) -> AcyclicityWitness {
    let odd = k % 2 != 0;
    AcyclicityWitness {
        lo: w.lo - k,
        z: w.z.clone(),
        p: w.p.iter().map(|p| if odd { p.negate() } else { p.clone() }).collect(),
        i: w.i.clone(),
    }
}

/// Degreewise biproduct.
pub fn sum(c1: &ChainComplex, c2: &ChainComplex) -> ChainComplex {
    let (lo, hi) = union(c1.range(), c2.range());
    ChainComplex::from_fn(
        lo,
        hi,
        |n| FgAb::direct_sum(&c1.object(n), &c2.object(n)),
        |n| Hom::direct_sum(&c1.diff(n), &c2.diff(n)),
    )
    .expect("biproduct of complexes")
}

/// Witness for `c1 ⊕ c2` from witnesses of the summands.
pub fn sum_witness(c1: &ChainComplex, w1: &AcyclicityWitness, c2: &ChainComplex, w2: &AcyclicityWitness) -> AcyclicityWitness {
    let (lo, hi) = union(union(c1.range(), c2.range()), union(w1.range(), w2.range()));
    let (lo, hi) = if hi < lo { (0, -1) } else { (lo, hi + 1) };
    let fix = |h: Hom, src: FgAb, tgt: FgAb| if h.source() == &src && h.target() == &tgt { h } else { Hom::zero(&src, &tgt) };
    let mut w = AcyclicityWitness { lo, z: Vec::new(), p: Vec::new(), i: Vec::new() };
    for n in lo..=hi {
        w.z.push(FgAb::direct_sum(&w1.z(n), &w2.z(n)));
        let p1 = fix(w1.p(n), c1.object(n - 1), w1.z(n));
        let p2 = fix(w2.p(n), c2.object(n - 1), w2.z(n));
        let i1 = fix(w1.i(n), w1.z(n), c1.object(n));
        let i2 = fix(w2.i(n), w2.z(n), c2.object(n));
        w.p.push(Hom::direct_sum(&p1, &p2));
        w.i.push(Hom::direct_sum(&i1, &i2));
    }
    w
}

/// Splices random conflations `Zⁿ ↣ Aⁿ ↠ Zⁿ⁺¹` into an acyclic complex of
/// length `1..=max_len`.
pub fn random_acyclic<R: Rng>(
    s: &ExactStructure,
    rng: &mut R,
    b: Bounds,
    max_len: usize,
) -> Option<(ChainComplex, AcyclicityWitness)> {
    let len = rng.random_range(1..=max_len.max(1));
    let lo = rng.random_range(-2..=1);
    let mut z = vec![FgAb::zero()];
    let mut is: Vec<Hom> = Vec::new();
    let mut ps: Vec<Hom> = vec![Hom::zero(&FgAb::zero(), &FgAb::zero())];
    for k in 0..len {
        let zk = z[k].clone();
        let c = if k + 1 == len {
            Conflation::identity_on(&zk)
        } else {
            let i = sample_inflation_from(s, rng, b, &zk)?;
            let c = s.conflation_of(&i).ok()?;
            if !s.is_conflation(&c.inflation, &c.deflation).ok()? {
                return None;
            }
            c
        };
        z.push(c.right().clone());
        is.push(c.inflation);
        ps.push(c.deflation);
    }
    is.push(Hom::zero(&FgAb::zero(), &FgAb::zero()));
    let objects: Vec<FgAb> = is[..len].iter().map(|i| i.target().clone()).collect();
    let diffs = (0..len - 1).map(|k| is[k + 1].after(&ps[k + 1]).unwrap()).collect();
    let c = ChainComplex::new(lo, objects, diffs).ok()?;
    // the final p lands in 0 and the trailing i starts there
    let w = AcyclicityWitness { lo, z, p: ps, i: is };
    Some((c, w))
}

fn random_homotopy<R: Rng>(rng: &mut R, a: &ChainComplex, b: &ChainComplex) -> Homotopy {
    let (lo, hi) = union(a.range(), b.range());
    let (lo, hi) = if hi < lo { (0, -1) } else { (lo, hi + 1) };
    let components = (lo..=hi).map(|n| random_hom_with(rng, &a.object(n), &b.object(n - 1))).collect();
    Homotopy { lo, components }
}

fn homotopy_map(a: &ChainComplex, b: &ChainComplex, h: &Homotopy, base: impl Fn(i64) -> Hom) -> Result<ChainMap> {
    let probe = ChainMap::zero(a, b);
    ChainMap::from_fn(a, b, |n| {
        let x = b.diff(n - 1).after(&h.component(n, &probe)).unwrap();
        let y = h.component(n + 1, &probe).after(&a.diff(n)).unwrap();
        base(n).try_add(&x.try_add(&y).unwrap()).unwrap()
    })
}

/// A chain map between acyclic complexes with witnesses for both ends: zero,
/// null-homotopic, or a multiple of an inclusion of summand plus a homotopy.
pub fn random_cone_instance<R: Rng>(
    s: &ExactStructure,
    rng: &mut R,
    b: Bounds,
    max_len: usize,
) -> Option<(ChainMap, AcyclicityWitness, AcyclicityWitness)> {
    let (a, wa) = random_acyclic(s, rng, b, max_len)?;
    match rng.random_range(0..4) {
        0 => {
            let (t, wt) = random_acyclic(s, rng, b, max_len)?;
            Some((ChainMap::zero(&a, &t), wa, wt))
        }
        1 => {
            let (t, wt) = random_acyclic(s, rng, b, max_len)?;
            let h = random_homotopy(rng, &a, &t);
            let f = homotopy_map(&a, &t, &h, |n| Hom::zero(&a.object(n), &t.object(n))).ok()?;
            Some((f, wa, wt))
        }
        2 => {
            let k = rng.random_range(-2..=2);
            let h = random_homotopy(rng, &a, &a);
            let f = homotopy_map(&a, &a, &h, |n| Hom::scalar(&a.object(n), k)).ok()?;
            Some((f, wa.clone(), wa))
        }
        _ => {
            let (e, we) = random_acyclic(s, rng, b, max_len.saturating_sub(2).max(1))?;
            // align E with A so the sum keeps A's support length
            let (e, we) = (shift(&e, e.lo() - a.lo()), shift_witness(&we, e.lo() - a.lo()));
            let t = sum(&a, &e);
            let wt = sum_witness(&a, &wa, &e, &we);
            let h = random_homotopy(rng, &a, &t);
            let k = rng.random_range(1..=2);
            let f = homotopy_map(&a, &t, &h, |n| {
                FgAb::injection_first(&a.object(n), &e.object(n)).after(&Hom::scalar(&a.object(n), k)).unwrap()
            })
            .ok()?;
            Some((f, wa, wt))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactstruct::{max_structure, split_structure};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z() -> FgAb {
        FgAb::integers()
    }

    fn short_exact() -> ChainComplex {
        let two = Hom::scalar(&z(), 2);
        let pi = Hom::from_i64(&z(), &FgAb::cyclic(2), &[1]).unwrap();
        ChainComplex::new(0, vec![z(), z(), FgAb::cyclic(2)], vec![two, pi]).unwrap()
    }

    #[test]
    fn acyclicity_examples() {
        let max = max_structure();
        let id = ChainComplex::two_term(&Hom::identity(&z()), 0);
        let w = is_acyclic(&id, &max).unwrap();
        assert!(w.is_trivial() || (0..3).all(|n| w.z(n).is_zero() || n == 1));
        assert!(is_acyclic(&short_exact(), &max).is_some());
        assert!(is_acyclic(&short_exact(), &split_structure()).is_none());
        let err = acyclicity(&ChainComplex::two_term(&Hom::scalar(&z(), 2), 0), &max).unwrap_err();
        assert!(matches!(err, ComplexError::NotAcyclic { degree: 1, .. }), "{err}");
        assert!(ChainComplex::new(0, vec![z(), z(), z()], vec![Hom::identity(&z()), Hom::identity(&z())]).is_err());
    }

    #[test]
    fn cone_examples() {
        let c0 = ChainComplex::concentrated(&z(), 0);
        let cone = mapping_cone(&ChainMap::identity(&c0));
        assert_eq!(cone.range(), (-1, 0));
        assert!(cone.object(-1).isomorphic(&z()) && cone.object(0).isomorphic(&z()));
        assert!(eq(&cone.diff(-1), &Hom::new(cone.object(-1), cone.object(0), Mat::from_i64(1, 1, &[1])).unwrap()));

        let two = ChainMap::from_fn(&c0, &c0, |n| Hom::scalar(&c0.object(n), 2)).unwrap();
        let cone = mapping_cone(&two);
        assert_eq!(cone.diff(-1).action(), &Mat::from_i64(1, 1, &[2]));

        let c = short_exact();
        let cone = mapping_cone(&ChainMap::zero(&c, &c));
        let expected = sum(&shift(&c, 1), &c);
        assert_eq!(cone.range(), expected.range());
        for n in cone.lo()..=cone.hi() {
            assert_eq!(cone.object(n), expected.object(n));
            assert!(eq(&cone.diff(n), &expected.diff(n)));
        }
    }

    #[test]
    fn cone_acyclicity_examples() {
        let max = max_structure();
        let c = ChainComplex::two_term(&Hom::identity(&z()), 0);
        let w = is_acyclic(&c, &max).unwrap();
        let f = ChainMap::identity(&c);
        let wc = cone_acyclicity(&f, &w, &w, &max).unwrap();
        assert!(is_acyclic(&mapping_cone(&f), &max).is_some());
        assert!(wc.z.iter().all(|g| g.rank() <= 1));

        let e = short_exact();
        let we = is_acyclic(&e, &max).unwrap();
        for f in [ChainMap::identity(&e), ChainMap::zero(&e, &e)] {
            let wc = cone_acyclicity(&f, &we, &we, &max).unwrap();
            verify_witness(&mapping_cone(&f), &wc, &max).unwrap();
            assert!(is_acyclic(&mapping_cone(&f), &max).is_some());
        }
    }

    #[test]
    fn seeded_cones() {
        let max = max_structure();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        for _ in 0..20 {
            let Some((f, wa, wb)) = random_cone_instance(&max, &mut rng, Bounds::new(1, 2, 8), 4) else { continue };
            let wc = cone_acyclicity(&f, &wa, &wb, &max).unwrap();
            let cone = mapping_cone(&f);
            verify_witness(&cone, &wc, &max).unwrap();
            assert!(is_acyclic(&cone, &max).is_some());
            done += 1;
        }
        assert!(done >= 15);
    }

    #[test]
    fn nullhomotopy_examples() {
        let c = ChainComplex::two_term(&Hom::identity(&z()), 0);
        let f = ChainMap::identity(&c);
        let h = nullhomotopy(&f).unwrap();
        assert!(h.is_homotopy_for(&f));
        assert!(eq(&h.component(1, &f), &Hom::identity(&z())));
        let zero = ChainMap::zero(&c, &c);
        assert!(nullhomotopy(&zero).unwrap().is_homotopy_for(&zero));
        let t = ChainComplex::concentrated(&FgAb::cyclic(2), 0);
        assert!(nullhomotopy(&ChainMap::identity(&t)).is_none());
        assert!(nullhomotopy(&ChainMap::identity(&short_exact())).is_none());
    }

    #[test]
    fn shift_and_sum() {
        let c = short_exact();
        assert_eq!(shift(&c, 0), c);
        assert_eq!(sum(&c, &ChainComplex::zero()), c);
        let max = max_structure();
        let w = is_acyclic(&c, &max).unwrap();
        for k in [-1, 1, 2] {
            verify_witness(&shift(&c, k), &shift_witness(&w, k), &max).unwrap();
        }
        let c2 = shift(&c, 1);
        let w2 = shift_witness(&w, 1);
        let s = sum(&c, &c2);
        verify_witness(&s, &sum_witness(&c, &w, &c2, &w2), &max).unwrap();
        assert!(is_acyclic(&s, &max).is_some());
    }

    #[test]
    fn json_round_trip() {
        let c = short_exact();
        let back = ChainComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(ChainComplex::from_json(r#"{"support":[0,1],"objects":[[0]],"differentials":[]}"#).is_err());
    }

    #[test]
    fn random_witnesses_verify() {
        for s in [max_structure(), split_structure()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..10 {
                let Some((c, w)) = random_acyclic(&s, &mut rng, Bounds::default(), 6) else { continue };
                verify_witness(&c, &w, &s).unwrap();
                assert!(is_acyclic(&c, &s).is_some());
            }
        }
    }
}
