//! One-sided exact structures on `fgab` and its full subcategories.
//!
//! A structure names a distinguished class (inflations for a right
//! structure, deflations for a left one); the complementary class is
//! derived: deflations are the context cokernels of inflations, and
//! inflations are the kernels of deflations. Split and maximal structures
//! are exact, so both classes are given directly.
//!
//! Axiom checks are sampling-based. A pass means "no counterexample found
//! in N samples plus the registered fixtures", never a proof.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fgab::{
    self, classify, extend_along, factor_through, is_epi, is_mono, kernel, lift_through_cokernel,
    random_hom_with, random_object_with, restrict_through_kernel, Bounds, FgAb, FgAbError, Hom, Pullback, Pushout,
};
use crate::intlin::Mat;
use crate::par::{self, Execution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("not a member: {0}")]
    NotMember(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("morphism is not a section (no left inverse)")]
    NotSection,
    #[error("object outside the category: {0}")]
    OutsideCategory(String),
    #[error("lemma falsified: {0}")]
    LemmaFalsified(String),
    #[error("unknown structure `{0}`")]
    UnknownStructure(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("malformed witness: {0}")]
    Witness(String),
    #[error(transparent)]
    Fgab(#[from] FgAbError),
}

/// Full subcategories of `fgab` used as ambient categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectClass {
    All,
    /// No element of order `p²`.
    Isbell(u64),
    TorsionFree,
    Finite,
}

impl ObjectClass {
    pub fn contains(&self, g: &FgAb) -> bool {
        match *self {
            ObjectClass::All => true,
            ObjectClass::Isbell(p) => {
                let p2 = BigInt::from(p * p);
                g.invariant_factors().iter().all(|d| d.is_zero() || !d.is_multiple_of(&p2))
            }
            ObjectClass::TorsionFree => g.is_torsion_free(),
            ObjectClass::Finite => g.is_finite(),
        }
    }

    pub fn random_object<R: Rng>(&self, rng: &mut R, bounds: Bounds) -> FgAb {
        match *self {
            ObjectClass::All => random_object_with(rng, bounds, |_| true),
            ObjectClass::Isbell(p) => random_object_with(rng, bounds, |n| n % (p * p) != 0),
            ObjectClass::TorsionFree => random_object_with(rng, Bounds { max_torsion: 0, ..bounds }, |_| true),
            ObjectClass::Finite => random_object_with(rng, Bounds { max_rank: 0, ..bounds }, |_| true),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ObjectClass::All => "all".into(),
            ObjectClass::Isbell(p) => format!("isbell{p}"),
            ObjectClass::TorsionFree => "free".into(),
            ObjectClass::Finite => "finite".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CokernelRule {
    Ambient,
    /// Ambient colimit factored by `pG_p`.
    Isbell(u64),
}

/// Which objects belong and how colimits are formed. Limits are always ambient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CategoryContext {
    pub class: ObjectClass,
    pub cokernel_rule: CokernelRule,
}

impl CategoryContext {
    pub const AMBIENT: CategoryContext = CategoryContext { class: ObjectClass::All, cokernel_rule: CokernelRule::Ambient };

    pub fn isbell(p: u64) -> CategoryContext {
        CategoryContext { class: ObjectClass::Isbell(p), cokernel_rule: CokernelRule::Isbell(p) }
    }

    pub fn contains(&self, g: &FgAb) -> bool {
        self.class.contains(g)
    }

    fn contains_hom(&self, f: &Hom) -> bool {
        self.contains(f.source()) && self.contains(f.target())
    }

    /// Reflection of an ambient object into the context (identity when ambient).
    pub fn reflect(&self, g: &FgAb) -> Hom {
        match self.cokernel_rule {
            CokernelRule::Ambient => Hom::identity(g),
            CokernelRule::Isbell(p) => isbell_reflection(g, p),
        }
    }

    pub fn cokernel(&self, f: &Hom) -> (FgAb, Hom) {
        let (c, proj) = fgab::cokernel(f);
        let r = self.reflect(&c);
        let proj = r.after(&proj).expect("composable");
        (proj.target().clone(), proj)
    }

    /// Pushout in context; `None` when the ambient pushout leaves the class.
    pub fn pushout(&self, i: &Hom, f: &Hom) -> Result<Option<Pushout>, FgAbError> {
        let po = fgab::pushout(i, f)?;
        let r = self.reflect(&po.object);
        let proj = r.after(&po.projection)?;
        let po = Pushout::from_projection(proj, i.target(), f.target());
        Ok(self.contains(&po.object).then_some(po))
    }

    /// Pullback in context; `None` when the ambient pullback leaves the class.
    pub fn pullback(&self, d: &Hom, h: &Hom) -> Result<Option<Pullback>, FgAbError> {
        let pb = fgab::pullback(d, h)?;
        Ok(self.contains(&pb.object).then_some(pb))
    }

    /// `d` is a cokernel of `i` in this context.
    pub fn is_cokernel_of(&self, d: &Hom, i: &Hom) -> bool {
        if i.target() != d.source() || !d.after(i).map(|c| c.is_zero()).unwrap_or(false) {
            return false;
        }
        let (_, q) = self.cokernel(i);
        match lift_through_cokernel(&q, d) {
            Ok(w) => classify(&w).is_iso(),
            Err(_) => false,
        }
    }

    /// `i` is a kernel of `d` (limits are ambient).
    pub fn is_kernel_of(&self, i: &Hom, d: &Hom) -> bool {
        if i.target() != d.source() || !d.after(i).map(|c| c.is_zero()).unwrap_or(false) {
            return false;
        }
        let (_, k) = kernel(d);
        match restrict_through_kernel(&k, i) {
            Ok(w) => classify(&w).is_iso(),
            Err(_) => false,
        }
    }
}

/// `G → G / pG_p`: each invariant factor `d` with `p² | d` becomes `d / p^(v_p(d) − 1)`.
pub fn isbell_reflection(g: &FgAb, p: u64) -> Hom {
    let p = BigInt::from(p);
    let p2 = &p * &p;
    let factors = g.invariant_factors();
    if factors.iter().all(|d| d.is_zero() || !d.is_multiple_of(&p2)) {
        return Hom::identity(g);
    }
    let reduced: Vec<BigInt> = factors
        .iter()
        .map(|d| {
            if d.is_zero() || !d.is_multiple_of(&p2) {
                return d.clone();
            }
            let mut d = d.clone();
            while d.is_multiple_of(&p2) {
                d /= &p;
            }
            d
        })
        .collect();
    let target = FgAb::from_factors(&reduced);
    let quotient = Hom::new(g.standard(), target, Mat::identity(factors.len())).expect("quotient of cyclic factors");
    quotient.after(&g.to_standard()).expect("composable")
}

/// Cokernel in the Isbell category: ambient cokernel factored by `pG_p`.
pub fn isbell_cokernel(f: &Hom, p: u64) -> Result<(FgAb, Hom), ExactError> {
    let ctx = CategoryContext::isbell(p);
    for g in [f.source(), f.target()] {
        if !ctx.contains(g) {
            return Err(ExactError::OutsideCategory(g.to_string()));
        }
    }
    Ok(ctx.cokernel(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Right,
    Left,
    /// Both classes are given and the structure is exact.
    TwoSided,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Split,
    Max,
    Isbell { p: u64 },
    AllIsos,
    ExtensionClosed { base: Box<ExactStructure>, class: ObjectClass },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactStructure {
    kind: StructureKind,
    context: CategoryContext,
    side: Side,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

pub fn split_structure() -> ExactStructure {
    ExactStructure { kind: StructureKind::Split, context: CategoryContext::AMBIENT, side: Side::TwoSided }
}

pub fn max_structure() -> ExactStructure {
    ExactStructure { kind: StructureKind::Max, context: CategoryContext::AMBIENT, side: Side::TwoSided }
}

pub fn all_isos_structure() -> ExactStructure {
    ExactStructure { kind: StructureKind::AllIsos, context: CategoryContext::AMBIENT, side: Side::Right }
}

/// The left structure on the Isbell category: epimorphisms between its objects.
pub fn isbell_structure(p: u64) -> Result<ExactStructure, ExactError> {
    if !is_prime(p) {
        return Err(ExactError::NotPrime(p));
    }
    Ok(ExactStructure { kind: StructureKind::Isbell { p }, context: CategoryContext::isbell(p), side: Side::Left })
}

/// Restriction of `base` to conflations whose three terms lie in `class`.
pub fn extension_closed_substructure(base: &ExactStructure, class: ObjectClass) -> ExactStructure {
    if class == ObjectClass::All {
        return base.clone();
    }
    ExactStructure {
        kind: StructureKind::ExtensionClosed { base: Box::new(base.clone()), class },
        context: CategoryContext { class, cokernel_rule: CokernelRule::Ambient },
        side: base.side,
    }
}

impl ExactStructure {
    pub fn kind(&self) -> &StructureKind {
        &self.kind
    }

    pub fn context(&self) -> &CategoryContext {
        &self.context
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn contains(&self, g: &FgAb) -> bool {
        self.context.contains(g)
    }

    /// Parses `split`, `max`, `isbell:<p>`, `all-isos`, `ext-closed:<class>`
    /// (over max; class is `all`, `free` or `finite`).
    pub fn from_name(name: &str) -> Result<ExactStructure, ExactError> {
        let unknown = || ExactError::UnknownStructure(name.to_string());
        match name {
            "split" => return Ok(split_structure()),
            "max" => return Ok(max_structure()),
            "all-isos" => return Ok(all_isos_structure()),
            _ => {}
        }
        if let Some(p) = name.strip_prefix("isbell:") {
            let p: u64 = p.parse().map_err(|_| unknown())?;
            return isbell_structure(p);
        }
        if let Some(rest) = name.strip_prefix("ext-closed:") {
            let (base, class) = match rest.split_once('@') {
                Some((c, b)) => (ExactStructure::from_name(b)?, c),
                None => (max_structure(), rest),
            };
            let class = match class {
                "all" => ObjectClass::All,
                "free" => ObjectClass::TorsionFree,
                "finite" => ObjectClass::Finite,
                _ => return Err(unknown()),
            };
            return Ok(extension_closed_substructure(&base, class));
        }
        Err(unknown())
    }

    pub fn name(&self) -> String {
        match &self.kind {
            StructureKind::Split => "split".into(),
            StructureKind::Max => "max".into(),
            StructureKind::Isbell { p } => format!("isbell:{p}"),
            StructureKind::AllIsos => "all-isos".into(),
            StructureKind::ExtensionClosed { base, class } => {
                if base.kind == StructureKind::Max {
                    format!("ext-closed:{}", class.name())
                } else {
                    format!("ext-closed:{}@{}", class.name(), base.name())
                }
            }
        }
    }

    pub fn is_inflation(&self, i: &Hom) -> bool {
        if !self.context.contains_hom(i) {
            return false;
        }
        match &self.kind {
            StructureKind::Split => extend_along(i, &Hom::identity(i.source())).is_some(),
            StructureKind::Max => is_mono(i),
            // a kernel of its ambient cokernel, which is then an epi inside the category
            StructureKind::Isbell { .. } => is_mono(i) && self.context.contains(&fgab::cokernel(i).0),
            StructureKind::AllIsos => classify(i).is_iso(),
            StructureKind::ExtensionClosed { base, class } => {
                base.is_inflation(i) && class.contains(&fgab::cokernel(i).0)
            }
        }
    }

    pub fn is_deflation(&self, d: &Hom) -> bool {
        if !self.context.contains_hom(d) {
            return false;
        }
        match &self.kind {
            StructureKind::Split => factor_through(d, &Hom::identity(d.target())).is_some(),
            StructureKind::Max | StructureKind::Isbell { .. } => is_epi(d),
            StructureKind::AllIsos => {
                // cokernels of isomorphisms
                let (_, k) = kernel(d);
                self.is_inflation(&k) && self.context.is_cokernel_of(d, &k)
            }
            StructureKind::ExtensionClosed { base, class } => base.is_deflation(d) && class.contains(&kernel(d).0),
        }
    }

    /// Membership in the distinguished class (both classes for two-sided structures).
    pub fn is_member(&self, m: &Hom) -> bool {
        match self.side {
            Side::Right => self.is_inflation(m),
            Side::Left => self.is_deflation(m),
            Side::TwoSided => self.is_inflation(m) && self.is_deflation(m),
        }
    }

    pub fn is_conflation(&self, i: &Hom, d: &Hom) -> Result<bool, ExactError> {
        if i.target() != d.source() {
            return Err(FgAbError::ObjectMismatch(format!("{} is not {}", i.target(), d.source())).into());
        }
        if !self.context.is_kernel_of(i, d) || !self.context.is_cokernel_of(d, i) {
            return Ok(false);
        }
        Ok(match self.side {
            Side::Right => self.is_inflation(i),
            Side::Left => self.is_deflation(d),
            Side::TwoSided => self.is_inflation(i) && self.is_deflation(d),
        })
    }

    /// Completes an inflation with its context cokernel.
    pub fn conflation_of(&self, m: &Hom) -> Result<Conflation, ExactError> {
        if !self.is_inflation(m) {
            return Err(ExactError::NotMember(format!("{m:?} is not an inflation of {}", self.name())));
        }
        let (_, d) = self.context.cokernel(m);
        Ok(Conflation { inflation: m.clone(), deflation: d })
    }

    /// Completes a deflation with its kernel.
    pub fn conflation_of_deflation(&self, d: &Hom) -> Result<Conflation, ExactError> {
        if !self.is_deflation(d) {
            return Err(ExactError::NotMember(format!("{d:?} is not a deflation of {}", self.name())));
        }
        let (_, i) = kernel(d);
        Ok(Conflation { inflation: i, deflation: d.clone() })
    }

    /// Whether `0 → A` is an inflation for every object, checked as a structural fact
    /// for the built-in structures.
    pub fn satisfies_r0_star(&self) -> bool {
        !matches!(self.kind, StructureKind::AllIsos)
    }
}

impl fmt::Display for ExactStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A kernel-cokernel pair `A ↣ B ↠ C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflation {
    pub inflation: Hom,
    pub deflation: Hom,
}

impl Conflation {
    pub fn left(&self) -> &FgAb {
        self.inflation.source()
    }

    pub fn middle(&self) -> &FgAb {
        self.inflation.target()
    }

    pub fn right(&self) -> &FgAb {
        self.deflation.target()
    }

    /// `0 → A → A → 0`-style trivial conflations: `A ↣ A ↠ 0`.
    pub fn identity_on(a: &FgAb) -> Conflation {
        Conflation { inflation: Hom::identity(a), deflation: Hom::zero(a, &FgAb::zero()) }
    }
}

/// Componentwise biproduct of two conflations, verified.
pub fn direct_sum_conflations(s: &ExactStructure, c1: &Conflation, c2: &Conflation) -> Result<Conflation, ExactError> {
    let c = Conflation {
        inflation: Hom::direct_sum(&c1.inflation, &c2.inflation),
        deflation: Hom::direct_sum(&c1.deflation, &c2.deflation),
    };
    if !s.is_conflation(&c.inflation, &c.deflation)? {
        return Err(ExactError::LemmaFalsified("direct sum of conflations is not a conflation".into()));
    }
    Ok(c)
}

/// The axioms and their duals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    R0,
    R0Star,
    R1,
    R2,
    R3,
    L0,
    L0Star,
    L1,
    L2,
    L3,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::R0,
        Axiom::R0Star,
        Axiom::R1,
        Axiom::R2,
        Axiom::R3,
        Axiom::L0,
        Axiom::L0Star,
        Axiom::L1,
        Axiom::L2,
        Axiom::L3,
    ];
    pub const RIGHT: [Axiom; 5] = [Axiom::R0, Axiom::R0Star, Axiom::R1, Axiom::R2, Axiom::R3];
    pub const LEFT: [Axiom; 5] = [Axiom::L0, Axiom::L0Star, Axiom::L1, Axiom::L2, Axiom::L3];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::R0 => "R0",
            Axiom::R0Star => "R0*",
            Axiom::R1 => "R1",
            Axiom::R2 => "R2",
            Axiom::R3 => "R3",
            Axiom::L0 => "L0",
            Axiom::L0Star => "L0*",
            Axiom::L1 => "L1",
            Axiom::L2 => "L2",
            Axiom::L3 => "L3",
        }
    }

    pub fn is_right(&self) -> bool {
        Axiom::RIGHT.contains(self)
    }

    /// Names of the morphisms an instance of this axiom consists of.
    pub fn roles(&self) -> &'static [&'static str] {
        match self {
            Axiom::R0 | Axiom::L0 => &[],
            Axiom::R0Star => &["zero_to_a"],
            Axiom::L0Star => &["a_to_zero"],
            Axiom::R1 => &["i", "j"],
            Axiom::L1 => &["d", "e"],
            Axiom::R2 => &["i", "f"],
            Axiom::L2 => &["d", "h"],
            Axiom::R3 | Axiom::L3 => &["i", "p"],
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase().replace("STAR", "*");
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == t)
            .ok_or_else(|| ExactError::UnknownAxiom(s.to_string()))
    }
}

/// Verdict on a single instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    /// Hypotheses not met; the instance says nothing.
    Vacuous,
    Fails { note: String, extra: Vec<(String, Hom)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// A replayable counterexample: named morphisms plus a note.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub check: String,
    pub structure: String,
    pub morphisms: Vec<(String, Hom)>,
    pub note: String,
    /// Set for failures of sampled lemma runs, which replay by re-running the sample.
    pub origin: Option<SampleOrigin>,
}

/// Where a sampled failure came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOrigin {
    pub seed: u64,
    pub index: usize,
    pub bounds: Bounds,
}

pub const WITNESS_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectBlob {
    /// Diagonal presentation `⊕ ℤ/dᵢ` (0 for ℤ).
    Factors(Vec<i64>),
    Presentation { gens: usize, relations: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismBlob {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub matrix: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBlob {
    pub schema_version: u32,
    pub axiom: String,
    pub structure: String,
    pub objects: Vec<ObjectBlob>,
    pub morphisms: Vec<MorphismBlob>,
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<SampleOrigin>,
}

pub(crate) fn object_blob(g: &FgAb) -> ObjectBlob {
    let rel = g.relations();
    let diag: Option<Vec<i64>> = (0..g.gens())
        .map(|r| {
            let nz: Vec<usize> = (0..rel.cols()).filter(|&c| !rel.get(r, c).is_zero()).collect();
            match nz.as_slice() {
                [] => Some(0),
                [c] => i64::try_from(rel.get(r, *c)).ok().filter(|&x| x > 0),
                _ => None,
            }
        })
        .collect();
    match diag {
        Some(f) if FgAb::from_orders(&f) == *g => ObjectBlob::Factors(f),
        _ => ObjectBlob::Presentation { gens: g.gens(), relations: rel.to_text() },
    }
}

pub(crate) fn object_from_blob(b: &ObjectBlob) -> Result<FgAb, ExactError> {
    match b {
        ObjectBlob::Factors(f) => Ok(FgAb::from_orders(f)),
        ObjectBlob::Presentation { gens, relations } => {
            let m: Mat = relations.parse().map_err(|e| ExactError::Witness(format!("{e}")))?;
            Ok(FgAb::new(*gens, m)?)
        }
    }
}

impl Witness {
    pub fn to_blob(&self) -> WitnessBlob {
        let mut objects: Vec<FgAb> = Vec::new();
        let mut index = |g: &FgAb| match objects.iter().position(|o| o == g) {
            Some(k) => k,
            None => {
                objects.push(g.clone());
                objects.len() - 1
            }
        };
        let morphisms = self
            .morphisms
            .iter()
            .map(|(name, h)| MorphismBlob {
                name: name.clone(),
                source: index(h.source()),
                target: index(h.target()),
                matrix: h.action().to_text(),
            })
            .collect();
        WitnessBlob {
            schema_version: WITNESS_SCHEMA_VERSION,
            axiom: self.check.clone(),
            structure: self.structure.clone(),
            objects: objects.iter().map(object_blob).collect(),
            morphisms,
            note: self.note.clone(),
            origin: self.origin,
        }
    }

    pub fn from_blob(blob: &WitnessBlob) -> Result<Witness, ExactError> {
        if blob.schema_version != WITNESS_SCHEMA_VERSION {
            return Err(ExactError::Witness(format!("unsupported schema version {}", blob.schema_version)));
        }
        let objects = blob.objects.iter().map(object_from_blob).collect::<Result<Vec<_>, _>>()?;
        let get = |k: usize| objects.get(k).cloned().ok_or_else(|| ExactError::Witness(format!("no object {k}")));
        let morphisms = blob
            .morphisms
            .iter()
            .map(|m| {
                let action: Mat = m.matrix.parse().map_err(|e| ExactError::Witness(format!("{e}")))?;
                Ok((m.name.clone(), Hom::new(get(m.source)?, get(m.target)?, action)?))
            })
            .collect::<Result<Vec<_>, ExactError>>()?;
        Ok(Witness {
            check: blob.axiom.clone(),
            structure: blob.structure.clone(),
            morphisms,
            note: blob.note.clone(),
            origin: blob.origin,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_blob()).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Witness, ExactError> {
        let blob: WitnessBlob = serde_json::from_str(s).map_err(|e| ExactError::Witness(e.to_string()))?;
        Witness::from_blob(&blob)
    }

    /// Re-runs the axiom instance stored in the witness.
    pub fn replay(&self) -> Result<Outcome, ExactError> {
        let s = ExactStructure::from_name(&self.structure)?;
        let axiom: Axiom = self.check.parse()?;
        let roles = axiom.roles();
        let mut hyp = Vec::with_capacity(roles.len());
        for role in roles {
            let h = self
                .morphisms
                .iter()
                .find(|(n, _)| n == role)
                .map(|(_, h)| h.clone())
                .ok_or_else(|| ExactError::Witness(format!("missing morphism `{role}`")))?;
            hyp.push(h);
        }
        Ok(check_instance(&s, axiom, &hyp))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub check: String,
    pub structure: String,
    pub verdict: Verdict,
    pub samples: usize,
    pub fixtures: usize,
    /// Samples whose hypotheses could not be met.
    pub vacuous: usize,
    pub seed: u64,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn summary(&self) -> String {
        match &self.witness {
            None => format!(
                "{} {}: pass (no counterexample found in {} samples and {} fixtures)",
                self.structure, self.check, self.samples, self.fixtures
            ),
            Some(w) => format!("{} {}: fail ({})", self.structure, self.check, w.note),
        }
    }
}

/// Sampling parameters shared by the checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
    pub bounds: Bounds,
    pub execution: Execution,
}

impl CheckConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        CheckConfig { samples, seed, bounds: Bounds::default(), execution: Execution::default() }
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Evaluates one axiom instance. `hyp` holds the morphisms named by [`Axiom::roles`].
pub fn check_instance(s: &ExactStructure, axiom: Axiom, hyp: &[Hom]) -> Outcome {
    let fail = |note: &str| Outcome::Fails { note: note.to_string(), extra: Vec::new() };
    if hyp.len() != axiom.roles().len() {
        return Outcome::Vacuous;
    }
    match axiom {
        Axiom::R0 => {
            if s.is_inflation(&Hom::identity(&FgAb::zero())) {
                Outcome::Holds
            } else {
                fail("identity of 0 is not an inflation")
            }
        }
        Axiom::L0 => {
            if s.is_deflation(&Hom::identity(&FgAb::zero())) {
                Outcome::Holds
            } else {
                fail("identity of 0 is not a deflation")
            }
        }
        Axiom::R0Star => {
            let z = &hyp[0];
            if !z.source().is_zero() || !s.contains(z.target()) {
                return Outcome::Vacuous;
            }
            if s.is_inflation(z) {
                Outcome::Holds
            } else {
                fail("0 -> A is not an inflation")
            }
        }
        Axiom::L0Star => {
            let z = &hyp[0];
            if !z.target().is_zero() || !s.contains(z.source()) {
                return Outcome::Vacuous;
            }
            if s.is_deflation(z) {
                Outcome::Holds
            } else {
                fail("A -> 0 is not a deflation")
            }
        }
        Axiom::R1 => {
            let (i, j) = (&hyp[0], &hyp[1]);
            if i.target() != j.source() || !s.is_inflation(i) || !s.is_inflation(j) {
                return Outcome::Vacuous;
            }
            if s.is_inflation(&j.after(i).unwrap()) {
                Outcome::Holds
            } else {
                fail("composite not an inflation")
            }
        }
        Axiom::L1 => {
            let (d, e) = (&hyp[0], &hyp[1]);
            if d.target() != e.source() || !s.is_deflation(d) || !s.is_deflation(e) {
                return Outcome::Vacuous;
            }
            if s.is_deflation(&e.after(d).unwrap()) {
                Outcome::Holds
            } else {
                fail("composite not a deflation")
            }
        }
        Axiom::R2 => {
            let (i, f) = (&hyp[0], &hyp[1]);
            if i.source() != f.source() || !s.contains(f.target()) || !s.is_inflation(i) {
                return Outcome::Vacuous;
            }
            match s.context().pushout(i, f) {
                Err(_) => Outcome::Vacuous,
                Ok(None) => fail("pushout does not exist in the category"),
                Ok(Some(po)) => {
                    if s.is_inflation(&po.leg_from_other) {
                        Outcome::Holds
                    } else {
                        Outcome::Fails {
                            note: "pushout leg not an inflation".into(),
                            extra: vec![("i_prime".into(), po.leg_from_other), ("g".into(), po.leg_from_source)],
                        }
                    }
                }
            }
        }
        Axiom::L2 => {
            let (d, h) = (&hyp[0], &hyp[1]);
            if d.target() != h.target() || !s.contains(h.source()) || !s.is_deflation(d) {
                return Outcome::Vacuous;
            }
            match s.context().pullback(d, h) {
                Err(_) => Outcome::Vacuous,
                Ok(None) => fail("pullback does not exist in the category"),
                Ok(Some(pb)) => {
                    if s.is_deflation(&pb.leg_to_other) {
                        Outcome::Holds
                    } else {
                        Outcome::Fails {
                            note: "pullback leg not a deflation".into(),
                            extra: vec![("d_prime".into(), pb.leg_to_other), ("k".into(), pb.leg_to_source)],
                        }
                    }
                }
            }
        }
        Axiom::R3 => {
            // cokernels always exist in the contexts considered here
            let (i, p) = (&hyp[0], &hyp[1]);
            if i.target() != p.source() || !s.context().contains_hom(i) || !s.contains(p.target()) {
                return Outcome::Vacuous;
            }
            if !s.is_inflation(&p.after(i).unwrap()) {
                return Outcome::Vacuous;
            }
            if s.is_inflation(i) {
                Outcome::Holds
            } else {
                fail("p∘i is an inflation but i is not")
            }
        }
        Axiom::L3 => {
            let (i, p) = (&hyp[0], &hyp[1]);
            if i.target() != p.source() || !s.context().contains_hom(p) || !s.contains(i.source()) {
                return Outcome::Vacuous;
            }
            if !s.is_deflation(&p.after(i).unwrap()) {
                return Outcome::Vacuous;
            }
            if s.is_deflation(p) {
                Outcome::Holds
            } else {
                fail("p∘i is a deflation but p is not")
            }
        }
    }
}

/// Registered instances run before any sampling.
pub fn fixtures(s: &ExactStructure, axiom: Axiom) -> Vec<Vec<Hom>> {
    let z = FgAb::integers();
    let mut out = Vec::new();
    match s.kind() {
        StructureKind::Isbell { p } => {
            let w = isbell_counterexamples(*p).expect("p is prime");
            match axiom {
                Axiom::R1 => out.push(vec![w.r1.0, w.r1.1]),
                Axiom::R2 => out.push(vec![w.r2.i, w.r2.f]),
                Axiom::R3 => out.push(vec![w.r3.0, w.r3.1]),
                _ => {}
            }
        }
        StructureKind::AllIsos => match axiom {
                Axiom::R0Star => out.push(vec![Hom::zero(&FgAb::zero(), &z)]),
                Axiom::R3 => out.push(vec![FgAb::injection_first(&z, &z), FgAb::projection_first(&z, &z)]),
                _ => {}
        },
        _ => {}
    }
    out
}

/// Samples and fixtures for one axiom.
pub fn check_axiom(s: &ExactStructure, axiom: Axiom, config: &CheckConfig) -> AxiomReport {
    let fixture_list = fixtures(s, axiom);
    let mut report = AxiomReport {
        check: axiom.name().to_string(),
        structure: s.name(),
        verdict: Verdict::Pass,
        samples: 0,
        fixtures: fixture_list.len(),
        vacuous: 0,
        seed: config.seed,
        witness: None,
    };
    let witness_of = |hyp: &[Hom], outcome: Outcome| -> Option<Witness> {
        let Outcome::Fails { note, extra } = outcome else { return None };
        let mut morphisms: Vec<(String, Hom)> =
            axiom.roles().iter().map(|r| r.to_string()).zip(hyp.iter().cloned()).collect();
        morphisms.extend(extra);
        Some(Witness { check: axiom.name().to_string(), structure: s.name(), morphisms, note, origin: None })
    };
    for hyp in &fixture_list {
        if let Some(w) = witness_of(hyp, check_instance(s, axiom, hyp)) {
            report.verdict = Verdict::Fail;
            report.witness = Some(w);
            return report;
        }
    }
    let n = if matches!(axiom, Axiom::R0 | Axiom::L0) { 1 } else { config.samples };
    let stream = par::stream_tag(axiom.name());
    let run = |k: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::sample_seed(config.seed, stream, k as u64));
        let hyp = sample_instance(s, axiom, &mut rng, config.bounds);
        let outcome = match &hyp {
            Some(h) => check_instance(s, axiom, h),
            None => Outcome::Vacuous,
        };
        (hyp, outcome)
    };
    let first_failure = par::find_first(config.execution, n, |k| {
        let (hyp, outcome) = run(k);
        match outcome {
            Outcome::Fails { .. } => Some(witness_of(&hyp.unwrap(), outcome)),
            _ => None,
        }
    });
    match first_failure {
        Some((k, w)) => {
            report.samples = k + 1;
            report.verdict = Verdict::Fail;
            report.witness = w;
        }
        None => {
            report.samples = n;
            report.vacuous = par::map(config.execution, n, |k| run(k).1 == Outcome::Vacuous)
                .into_iter()
                .filter(|&v| v)
                .count();
        }
    }
    report
}

/// Runs every listed axiom, ordered as given.
pub fn check_axioms(s: &ExactStructure, axioms: &[Axiom], config: &CheckConfig) -> Vec<AxiomReport> {
    axioms.iter().map(|&a| check_axiom(s, a, config)).collect()
}

// ---------------------------------------------------------------------------
// samplers

fn rand_obj<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds) -> FgAb {
    s.context().class.random_object(rng, b)
}

/// Automorphism `[[1, k], [0, 1]]` of `A ⊕ C` for random `k: C → A`, with its inverse.
fn shear<R: Rng>(rng: &mut R, a: &FgAb, c: &FgAb) -> (Hom, Hom) {
    let k = random_hom_with(rng, c, a);
    let inj = FgAb::injection_first(a, c);
    let proj = FgAb::projection_second(a, c);
    let nil = inj.after(&k.after(&proj).unwrap()).unwrap();
    let id = Hom::identity(inj.target());
    (id.try_add(&nil).unwrap(), id.try_sub(&nil).unwrap())
}

/// Section `A → A ⊕ C`, sheared.
fn random_section_from<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds, a: &FgAb) -> Hom {
    let c = rand_obj(s, rng, b);
    let h = random_hom_with(rng, a, &c);
    let sec = Hom::stack(&Hom::identity(a), &h).unwrap();
    let (sh, _) = shear(rng, a, &c);
    sh.after(&sec).unwrap()
}

/// Retraction `C ⊕ A → C`, sheared.
fn random_retraction_onto<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds, c: &FgAb) -> Hom {
    let a = rand_obj(s, rng, b);
    let h = random_hom_with(rng, &a, c);
    let ret = Hom::juxtapose(&Hom::identity(c), &h).unwrap();
    let (sh, _) = shear(rng, c, &a);
    ret.after(&sh).unwrap()
}

const ATTEMPTS: usize = 6;

/// A random inflation of `s`; `None` if none was found within a few attempts.
pub fn sample_inflation<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds) -> Option<Hom> {
    for _ in 0..ATTEMPTS {
        let cand = match rng.random_range(0..4) {
            0 => {
                let a = rand_obj(s, rng, b);
                random_section_from(s, rng, b, &a)
            }
            1 => {
                // kernel of a context cokernel
                let bb = rand_obj(s, rng, b);
                let x = rand_obj(s, rng, b);
                let h = random_hom_with(rng, &x, &bb);
                let (_, q) = s.context().cokernel(&h);
                kernel(&q).1
            }
            2 => {
                let a = rand_obj(s, rng, b);
                let bb = rand_obj(s, rng, b);
                random_hom_with(rng, &a, &bb)
            }
            _ => {
                let a = rand_obj(s, rng, b);
                if rng.random_bool(0.5) {
                    Hom::zero(&FgAb::zero(), &a)
                } else {
                    Hom::identity(&a)
                }
            }
        };
        if s.is_inflation(&cand) {
            return Some(cand);
        }
    }
    None
}

/// A random inflation with source `a`.
pub fn sample_inflation_from<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds, a: &FgAb) -> Option<Hom> {
    for _ in 0..ATTEMPTS {
        let cand = match rng.random_range(0..4) {
            0 => random_section_from(s, rng, b, a),
            1 => {
                // pushout leg of some inflation along a map into `a`
                let Some(k) = sample_inflation(s, rng, b) else { continue };
                let f = random_hom_with(rng, k.source(), a);
                match s.context().pushout(&k, &f) {
                    Ok(Some(po)) => po.leg_from_other,
                    _ => continue,
                }
            }
            2 => {
                let c = rand_obj(s, rng, b);
                random_hom_with(rng, a, &c)
            }
            _ => Hom::scalar(a, rng.random_range(1..=3)),
        };
        if s.is_inflation(&cand) {
            return Some(cand);
        }
    }
    None
}

pub fn sample_deflation<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds) -> Option<Hom> {
    for _ in 0..ATTEMPTS {
        let cand = match rng.random_range(0..4) {
            0 => {
                let c = rand_obj(s, rng, b);
                random_retraction_onto(s, rng, b, &c)
            }
            1 => {
                let bb = rand_obj(s, rng, b);
                let x = rand_obj(s, rng, b);
                let h = random_hom_with(rng, &x, &bb);
                s.context().cokernel(&h).1
            }
            2 => {
                let a = rand_obj(s, rng, b);
                let bb = rand_obj(s, rng, b);
                random_hom_with(rng, &a, &bb)
            }
            _ => {
                let a = rand_obj(s, rng, b);
                if rng.random_bool(0.5) {
                    Hom::zero(&a, &FgAb::zero())
                } else {
                    Hom::identity(&a)
                }
            }
        };
        if s.is_deflation(&cand) {
            return Some(cand);
        }
    }
    None
}

/// A random deflation with target `c`.
pub fn sample_deflation_onto<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds, c: &FgAb) -> Option<Hom> {
    for _ in 0..ATTEMPTS {
        let cand = match rng.random_range(0..4) {
            0 => random_retraction_onto(s, rng, b, c),
            1 => {
                // pullback leg of some deflation along a map out of `c`
                let Some(k) = sample_deflation(s, rng, b) else { continue };
                let f = random_hom_with(rng, c, k.target());
                match s.context().pullback(&k, &f) {
                    Ok(Some(pb)) => pb.leg_to_other,
                    _ => continue,
                }
            }
            2 => {
                let x = rand_obj(s, rng, b);
                random_hom_with(rng, &x, c)
            }
            _ => Hom::scalar(c, if rng.random_bool(0.5) { 1 } else { -1 }),
        };
        if s.is_deflation(&cand) {
            return Some(cand);
        }
    }
    None
}

fn sample_instance<R: Rng>(s: &ExactStructure, axiom: Axiom, rng: &mut R, b: Bounds) -> Option<Vec<Hom>> {
    Some(match axiom {
        Axiom::R0 | Axiom::L0 => vec![],
        Axiom::R0Star => vec![Hom::zero(&FgAb::zero(), &rand_obj(s, rng, b))],
        Axiom::L0Star => vec![Hom::zero(&rand_obj(s, rng, b), &FgAb::zero())],
        Axiom::R1 => {
            let i = sample_inflation(s, rng, b)?;
            let j = sample_inflation_from(s, rng, b, i.target())?;
            vec![i, j]
        }
        Axiom::L1 => {
            let e = sample_deflation(s, rng, b)?;
            let d = sample_deflation_onto(s, rng, b, e.source())?;
            vec![d, e]
        }
        Axiom::R2 => {
            let i = sample_inflation(s, rng, b)?;
            let a2 = rand_obj(s, rng, b);
            let f = random_hom_with(rng, i.source(), &a2);
            vec![i, f]
        }
        Axiom::L2 => {
            let d = sample_deflation(s, rng, b)?;
            let c2 = rand_obj(s, rng, b);
            let h = random_hom_with(rng, &c2, d.target());
            vec![d, h]
        }
        Axiom::R3 => {
            // i = σ∘[m; h], p = π₁∘σ⁻¹, so p∘i = m
            let m = sample_inflation(s, rng, b)?;
            let x = rand_obj(s, rng, b);
            let h = random_hom_with(rng, m.source(), &x);
            let (sig, sig_inv) = shear(rng, m.target(), &x);
            let i = sig.after(&Hom::stack(&m, &h).unwrap()).unwrap();
            let p = FgAb::projection_first(m.target(), &x).after(&sig_inv).unwrap();
            vec![i, p]
        }
        Axiom::L3 => {
            // p = [d, h]∘σ, i = σ⁻¹∘ι₁, so p∘i = d
            let d = sample_deflation(s, rng, b)?;
            let x = rand_obj(s, rng, b);
            let h = random_hom_with(rng, &x, d.target());
            let (sig, sig_inv) = shear(rng, d.source(), &x);
            let p = Hom::juxtapose(&d, &h).unwrap().after(&sig).unwrap();
            let i = sig_inv.after(&FgAb::injection_first(d.source(), &x)).unwrap();
            vec![i, p]
        }
    })
}

// ---------------------------------------------------------------------------
// the Isbell counterexamples

/// The pushout square of the [R2] counterexample: `g∘i = i'∘f`.
#[derive(Clone, Debug)]
pub struct IsbellSquare {
    pub i: Hom,
    pub f: Hom,
    pub i_prime: Hom,
    pub g: Hom,
}

#[derive(Clone, Debug)]
pub struct IsbellWitnesses {
    pub p: u64,
    /// `(·p, ·p)` on ℤ.
    pub r1: (Hom, Hom),
    pub r2: IsbellSquare,
    /// `(i, p)` with `i = [p; π]` and `p = [[1,0],[0,0]]`.
    pub r3: (Hom, Hom),
}

/// The three right-side failures of the Isbell category, each machine-checked.
pub fn isbell_counterexamples(p: u64) -> Result<IsbellWitnesses, ExactError> {
    let s = isbell_structure(p)?;
    let pi64 = i64::try_from(p).map_err(|_| ExactError::NotPrime(p))?;
    let z = FgAb::integers();
    let zp = FgAb::cyclic(pi64);
    let mul_p = Hom::scalar(&z, pi64);
    let falsified = |m: &str| Err(ExactError::LemmaFalsified(m.to_string()));

    if !s.is_inflation(&mul_p) || s.is_inflation(&mul_p.after(&mul_p)?) {
        return falsified("·p is an inflation whose square is not");
    }

    let f = Hom::from_i64(&z, &zp, &[1])?;
    let po = s.context().pushout(&mul_p, &f)?.expect("colimits exist in the Isbell category");
    let i_prime = po.leg_from_other.clone();
    if !i_prime.is_zero() || s.is_inflation(&i_prime) || !po.object.isomorphic(&zp) {
        return falsified("pushout of ·p along ℤ → ℤ/p has lower map 0");
    }
    // transport along P ≅ ℤ/p so that the right leg is the displayed g = f
    let Some(u) = lift_through_cokernel(&f, &po.leg_from_source).ok().and_then(|w| classify(&w).inverse) else {
        return falsified("pushout object is ℤ/p with right leg f");
    };
    let square = IsbellSquare { i: mul_p.clone(), f: f.clone(), i_prime: u.after(&i_prime)?, g: f.clone() };

    let zzp = FgAb::direct_sum(&z, &zp);
    let i = Hom::from_i64(&z, &zzp, &[pi64, 1])?;
    let proj = Hom::from_i64(&zzp, &zzp, &[1, 0, 0, 0])?;
    let composite = proj.after(&i)?;
    if !s.is_inflation(&composite) || s.is_inflation(&i) {
        return falsified("[p; π] is not an inflation although its projection is");
    }
    Ok(IsbellWitnesses { p, r1: (mul_p.clone(), mul_p), r2: square, r3: (i, proj) })
}

/// Looks for a conflation of `s` with outer terms in `class` and middle term outside it.
pub fn extension_closure_violation(s: &ExactStructure, class: ObjectClass, config: &CheckConfig) -> Option<Conflation> {
    par::find_first(config.execution, config.samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::sample_seed(config.seed, par::stream_tag("ext"), k as u64));
        let i = sample_inflation(s, &mut rng, config.bounds)?;
        let c = s.conflation_of(&i).ok()?;
        (class.contains(c.left()) && class.contains(c.right()) && !class.contains(c.middle())).then_some(c)
    })
    .map(|(_, c)| c)
}

// ---------------------------------------------------------------------------
// sections and weak idempotent completeness

/// `B ≅ A ⊕ C` from a section `s: A → B`.
#[derive(Clone, Debug)]
pub struct SectionDecomposition {
    pub section: Hom,
    /// `r∘s = 1`
    pub retraction: Hom,
    pub cokernel: FgAb,
    pub projection: Hom,
    /// `v∘p = 1 − s∘r`
    pub complement: Hom,
    /// `[r; p]: B → A ⊕ C`
    pub iso: Hom,
    /// `[s, v]: A ⊕ C → B`
    pub inverse: Hom,
}

pub fn section_decomposition(s: &Hom) -> Result<SectionDecomposition, ExactError> {
    let a = s.source();
    let b = s.target();
    let r = extend_along(s, &Hom::identity(a)).ok_or(ExactError::NotSection)?;
    let (c, p) = fgab::cokernel(s);
    let idem = Hom::identity(b).try_sub(&s.after(&r)?)?;
    let v = lift_through_cokernel(&p, &idem)?;
    let iso = Hom::stack(&r, &p)?;
    let inverse = Hom::juxtapose(s, &v)?;
    let ok = inverse.after(&iso)?.equals(&Hom::identity(b))?
        && iso.after(&inverse)?.equals(&Hom::identity(iso.target()))?
        && r.after(s)?.equals(&Hom::identity(a))?
        && v.after(&p)?.equals(&idem)?;
    if !ok {
        return Err(ExactError::LemmaFalsified("section decomposition identities".into()));
    }
    Ok(SectionDecomposition { section: s.clone(), retraction: r, cokernel: c, projection: p, complement: v, iso, inverse })
}

/// Random section `A → A ⊕ C`: a sheared `[1; h]`.
pub fn random_section<R: Rng>(rng: &mut R, b: Bounds) -> Hom {
    let s = max_structure();
    let a = rand_obj(&s, rng, b);
    random_section_from(&s, rng, b, &a)
}

/// One section-decomposition sample in the maximal structure; `Some` on failure.
pub(crate) fn wic_sample<R: Rng>(rng: &mut R, b: Bounds) -> Option<Witness> {
    let max = max_structure();
    let sec = random_section(rng, b);
    let note = match section_decomposition(&sec) {
        Err(e) => Some(e.to_string()),
        Ok(dec) => {
            let r = &dec.retraction;
            let (_, kr) = kernel(r);
            if !max.is_inflation(&sec) {
                Some("section is not an inflation".to_string())
            } else if !max.is_deflation(r) {
                Some("retraction is not a deflation".to_string())
            } else if !max.context().is_kernel_of(&kr, r) || !max.context().is_cokernel_of(&dec.projection, &sec) {
                Some("kernel or cokernel missing".to_string())
            } else {
                None
            }
        }
    };
    note.map(|n| Witness { check: "wic".into(), structure: max.name(), morphisms: vec![("s".into(), sec)], note: n, origin: None })
}

/// Every section has a cokernel and is an inflation of the maximal structure;
/// its retraction is the matching deflation.
pub fn wic_equivalence_check(config: &CheckConfig) -> AxiomReport {
    let failure = par::find_first(config.execution, config.samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::sample_seed(config.seed, par::stream_tag("wic"), k as u64));
        wic_sample(&mut rng, config.bounds)
    });
    AxiomReport {
        check: "wic".into(),
        structure: max_structure().name(),
        verdict: if failure.is_some() { Verdict::Fail } else { Verdict::Pass },
        samples: failure.as_ref().map_or(config.samples, |(k, _)| k + 1),
        fixtures: 0,
        vacuous: 0,
        seed: config.seed,
        witness: failure.map(|(_, w)| w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgAb {
        FgAb::integers()
    }

    fn zn(n: i64) -> FgAb {
        FgAb::cyclic(n)
    }

    fn h(a: &FgAb, b: &FgAb, e: &[i64]) -> Hom {
        Hom::from_i64(a, b, e).unwrap()
    }

    #[test]
    fn conflation_of_examples() {
        let c = split_structure().conflation_of(&FgAb::injection_first(&z(), &z())).unwrap();
        assert!(c.right().isomorphic(&z()));
        assert!(split_structure().is_conflation(&c.inflation, &c.deflation).unwrap());
        // the completion agrees with [0, 1] up to the cokernel isomorphism
        let w = lift_through_cokernel(&c.deflation, &FgAb::projection_second(&z(), &z())).unwrap();
        assert!(classify(&w).is_iso());

        let c = max_structure().conflation_of(&Hom::scalar(&z(), 2)).unwrap();
        assert_eq!(*c.right(), zn(2));
        let c = isbell_structure(2).unwrap().conflation_of(&Hom::scalar(&z(), 2)).unwrap();
        assert_eq!(*c.right(), zn(2));
        let err = split_structure().conflation_of(&Hom::scalar(&z(), 2)).unwrap_err();
        assert!(matches!(err, ExactError::NotMember(_)));
    }

    #[test]
    fn is_conflation_examples() {
        let max = max_structure();
        let two = Hom::scalar(&z(), 2);
        assert!(max.is_conflation(&two, &h(&z(), &zn(2), &[1])).unwrap());
        assert!(!max.is_conflation(&two, &h(&z(), &zn(4), &[1])).unwrap());
        let isb = isbell_structure(2).unwrap();
        let zz2 = FgAb::direct_sum(&z(), &zn(2));
        let i = h(&z(), &zz2, &[2, 1]);
        let (_, d) = isb.context().cokernel(&i);
        assert!(!isb.is_conflation(&i, &d).unwrap());
        let (_, d_amb) = fgab::cokernel(&i);
        assert!(!isb.is_conflation(&i, &d_amb).unwrap());
        assert!(max.is_conflation(&i, &d_amb).unwrap());
    }

    #[test]
    fn direct_sums_of_conflations() {
        let max = max_structure();
        let c2 = max.conflation_of(&Hom::scalar(&z(), 2)).unwrap();
        let c3 = max.conflation_of(&Hom::scalar(&z(), 3)).unwrap();
        let zero = Conflation::identity_on(&FgAb::zero());
        let c = direct_sum_conflations(&max, &c2, &zero).unwrap();
        assert!(c.right().isomorphic(c2.right()));
        let c = direct_sum_conflations(&max, &c2, &c3).unwrap();
        assert!(c.right().isomorphic(&zn(6)));
        let split = split_structure();
        let s1 = split.conflation_of(&FgAb::injection_first(&z(), &zn(2))).unwrap();
        let s2 = split.conflation_of(&FgAb::injection_second(&zn(3), &z())).unwrap();
        direct_sum_conflations(&split, &s1, &s2).unwrap();
    }

    #[test]
    fn membership_examples() {
        let split = split_structure();
        assert!(split.is_inflation(&FgAb::injection_first(&z(), &z())));
        assert!(!split.is_inflation(&Hom::scalar(&z(), 2)));
        let isos = all_isos_structure();
        assert!(!isos.is_inflation(&Hom::zero(&FgAb::zero(), &z())));
        let isb = isbell_structure(2).unwrap();
        assert!(!isb.is_inflation(&h(&z(), &FgAb::from_orders(&[0, 2]), &[2, 1])));
        assert!(isb.is_deflation(&h(&z(), &zn(2), &[1])));
        assert!(!isb.is_deflation(&h(&z(), &zn(4), &[1])));
        assert_eq!(isbell_structure(4).unwrap_err(), ExactError::NotPrime(4));
    }

    #[test]
    fn isbell_cokernel_examples() {
        assert_eq!(isbell_cokernel(&Hom::scalar(&z(), 2), 2).unwrap().0, zn(2));
        assert_eq!(isbell_cokernel(&Hom::scalar(&z(), 4), 2).unwrap().0, zn(2));
        let (c, proj) = isbell_cokernel(&Hom::zero(&FgAb::zero(), &zn(2)), 2).unwrap();
        assert_eq!(c, zn(2));
        assert!(classify(&proj).is_iso());
        assert!(isbell_cokernel(&Hom::identity(&zn(4)), 2).is_err());
        assert_eq!(isbell_reflection(&zn(24), 2).target().invariant_factors(), &[BigInt::from(6)]);
    }

    #[test]
    fn isbell_witnesses_hold() {
        for p in [2, 3, 5] {
            let w = isbell_counterexamples(p).unwrap();
            assert!(w.r2.i_prime.is_zero());
            assert!(w.r2.g.after(&w.r2.i).unwrap().equals(&w.r2.i_prime.after(&w.r2.f).unwrap()).unwrap());
            assert_eq!(*w.r2.i_prime.target(), FgAb::cyclic(p as i64));
        }
    }

    #[test]
    fn extension_closed_examples() {
        let free = extension_closed_substructure(&max_structure(), ObjectClass::TorsionFree);
        assert!(free.is_inflation(&FgAb::injection_first(&z(), &z())));
        assert!(!free.is_inflation(&Hom::scalar(&z(), 2)));
        assert_eq!(extension_closed_substructure(&max_structure(), ObjectClass::All), max_structure());
        let sp = extension_closed_substructure(&split_structure(), ObjectClass::TorsionFree);
        assert!(sp.is_inflation(&FgAb::injection_first(&z(), &z())));
        let cfg = CheckConfig::new(60, 3);
        assert!(extension_closure_violation(&max_structure(), ObjectClass::TorsionFree, &cfg).is_none());
        assert!(extension_closure_violation(&max_structure(), ObjectClass::Isbell(2), &CheckConfig::new(400, 3).with_bounds(Bounds::new(1, 2, 8)))
            .is_some());
    }

    #[test]
    fn section_examples() {
        let d = section_decomposition(&FgAb::injection_first(&z(), &zn(3))).unwrap();
        assert!(d.cokernel.isomorphic(&zn(3)));
        assert!(d.retraction.equals(&FgAb::projection_first(&z(), &zn(3))).unwrap());
        let zz = FgAb::direct_sum(&z(), &z());
        let d = section_decomposition(&h(&z(), &zz, &[1, 2])).unwrap();
        assert!(d.cokernel.isomorphic(&z()));
        let d = section_decomposition(&Hom::scalar(&z(), -1)).unwrap();
        assert!(d.cokernel.is_zero());
        assert_eq!(section_decomposition(&Hom::scalar(&z(), 2)).unwrap_err(), ExactError::NotSection);
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!("r0star".parse::<Axiom>().unwrap(), Axiom::R0Star);
        assert!("R9".parse::<Axiom>().is_err());
        for name in ["split", "max", "isbell:3", "all-isos", "ext-closed:free", "ext-closed:finite@split"] {
            assert_eq!(ExactStructure::from_name(name).unwrap().name(), name);
        }
        assert!(ExactStructure::from_name("isbell:6").is_err());
    }

    #[test]
    fn quick_axiom_runs() {
        let cfg = CheckConfig::new(20, 11);
        for s in [split_structure(), max_structure()] {
            for a in Axiom::ALL {
                let r = check_axiom(&s, a, &cfg);
                assert!(r.passed(), "{}", r.summary());
            }
        }
        let isb = isbell_structure(2).unwrap();
        for a in [Axiom::R1, Axiom::R2, Axiom::R3] {
            let r = check_axiom(&isb, a, &cfg);
            assert_eq!(r.verdict, Verdict::Fail);
            let replayed = r.witness.unwrap().replay().unwrap();
            assert!(matches!(replayed, Outcome::Fails { .. }), "{a}: {replayed:?}");
        }
        let isos = all_isos_structure();
        assert!(!check_axiom(&isos, Axiom::R0Star, &cfg).passed());
        for a in [Axiom::R0, Axiom::R1, Axiom::R2] {
            assert!(check_axiom(&isos, a, &cfg).passed());
        }
    }

    #[test]
    fn wic_small_run() {
        let r = wic_equivalence_check(&CheckConfig::new(20, 5));
        assert!(r.passed(), "{}", r.summary());
    }
}
