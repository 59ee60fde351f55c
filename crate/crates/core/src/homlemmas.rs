//! Homological lemmas for one-sided exact structures, each run as a
//! construction: the morphisms built in the proof are computed, and the
//! conclusion is checked against them.
//!
//! Hypothesis violations come back as [`LemmaError::Hypothesis`] naming the
//! offending square. [`LemmaError::Falsified`] inside a structure that
//! satisfies the axioms would mean a bug.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactstruct::{
    check_instance, sample_deflation, sample_inflation, AxiomReport, Axiom, CheckConfig, Conflation, ExactError,
    ExactStructure, Outcome, Verdict, Witness,
};
use crate::fgab::{
    self, classify, extend_along, hom_generators, kernel, lift_through_cokernel, random_hom_with, restrict_through_kernel,
    Bounds, FgAb, FgAbError, Hom,
};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LemmaError {
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("membership failure: {0}")]
    MembershipFailure(String),
    #[error("lemma falsified: {0}")]
    Falsified(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Fgab(#[from] FgAbError),
}

type Result<T> = std::result::Result<T, LemmaError>;

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(LemmaError::Hypothesis(what.to_string()))
    }
}

fn certify(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(LemmaError::Falsified(what.to_string()))
    }
}

fn eq(a: &Hom, b: &Hom) -> bool {
    a.equals(b).unwrap_or(false)
}

fn comp(g: &Hom, f: &Hom) -> Result<Hom> {
    Ok(g.after(f)?)
}

/// Commutative square `g∘i = i'∘f`:
///
/// ```text
///   A --i--> B
///   f        g
///   A' -i'-> B'
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutSquare {
    pub i: Hom,
    pub f: Hom,
    pub i_prime: Hom,
    pub g: Hom,
}

impl PushoutSquare {
    pub fn new(i: Hom, f: Hom, i_prime: Hom, g: Hom) -> Result<Self> {
        let sq = PushoutSquare { i, f, i_prime, g };
        require(sq.commutes(), "square does not commute")?;
        Ok(sq)
    }

    pub fn commutes(&self) -> bool {
        match (self.g.after(&self.i), self.i_prime.after(&self.f)) {
            (Ok(a), Ok(b)) => eq(&a, &b),
            _ => false,
        }
    }

    /// The same square with `B'` padded by a free summand; never a pushout.
    pub fn padded(&self) -> PushoutSquare {
        let b2 = self.g.target();
        let inj = FgAb::injection_first(b2, &FgAb::integers());
        PushoutSquare {
            i: self.i.clone(),
            f: self.f.clone(),
            i_prime: inj.after(&self.i_prime).unwrap(),
            g: inj.after(&self.g).unwrap(),
        }
    }
}

/// `(f, g, h)` from `A ↣ B ↠ C` to `A' ↣ B' ↠ C'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflationMorphism {
    pub source: Conflation,
    pub target: Conflation,
    pub f: Hom,
    pub g: Hom,
    pub h: Hom,
}

impl ConflationMorphism {
    pub fn new(source: Conflation, target: Conflation, f: Hom, g: Hom, h: Hom) -> Result<Self> {
        let m = ConflationMorphism { source, target, f, g, h };
        require(
            eq(&comp(&m.g, &m.source.inflation)?, &comp(&m.target.inflation, &m.f)?),
            "left square g∘i = i'∘f does not commute",
        )?;
        require(
            eq(&comp(&m.h, &m.source.deflation)?, &comp(&m.target.deflation, &m.g)?),
            "right square h∘d = d'∘g does not commute",
        )?;
        Ok(m)
    }

    pub fn identity(c: &Conflation) -> ConflationMorphism {
        ConflationMorphism {
            source: c.clone(),
            target: c.clone(),
            f: Hom::identity(c.left()),
            g: Hom::identity(c.middle()),
            h: Hom::identity(c.right()),
        }
    }
}

fn require_conflation(s: &ExactStructure, c: &Conflation, what: &str) -> Result<()> {
    require(s.is_conflation(&c.inflation, &c.deflation)?, &format!("{what} is not a conflation"))
}

/// Pushout of the inflation of `c` along `f`, completed to `A' ↣ B' ↠ C`.
pub fn pushout_completion(s: &ExactStructure, c: &Conflation, f: &Hom) -> Result<(Conflation, PushoutSquare)> {
    require(f.source() == c.left(), "f must start at the left term of the conflation")?;
    let po = s
        .context()
        .pushout(&c.inflation, f)?
        .ok_or_else(|| LemmaError::MembershipFailure("pushout does not exist in the category".into()))?;
    let i2 = po.leg_from_other.clone();
    if !s.is_inflation(&i2) {
        return Err(LemmaError::MembershipFailure(format!("pushout leg {i2:?} is not an inflation")));
    }
    // d' with d'g = d and d'i' = 0
    let d2 = po.mediate(&c.deflation, &Hom::zero(f.target(), c.right()))?;
    certify(s.context().is_cokernel_of(&d2, &i2), "induced d' is not a cokernel of i'")?;
    let square = PushoutSquare { i: c.inflation.clone(), f: f.clone(), i_prime: i2.clone(), g: po.leg_from_source };
    Ok((Conflation { inflation: i2, deflation: d2 }, square))
}

/// Right square `(d, g, h, d')` of a diagram with identity on `A`, `g∘i = i'`,
/// `d` epi and `d'` a cokernel of `i'`: a pushout by the criterion.
pub fn recognize_right_pushout(s: &ExactStructure, top: (&Hom, &Hom), bottom: (&Hom, &Hom), g: &Hom, h: &Hom) -> bool {
    let ((i, d), (i2, d2)) = (top, bottom);
    let commutes = match (g.after(i), h.after(d), d2.after(g)) {
        (Ok(gi), Ok(hd), Ok(dg)) => eq(&gi, i2) && eq(&hd, &dg),
        _ => false,
    };
    commutes && fgab::is_epi(d) && s.context().is_cokernel_of(d2, i2)
}

/// Decides whether the square is a pushout, given a cokernel `d` of its top map.
///
/// The square is a pushout iff there is `d'` with `d'g = d`, `d'i' = 0` and
/// `d'` a cokernel of `i'`. When that holds the proof is executed: the
/// morphism `(f, g, 1)` is factored and the Short Five Lemma inverts the
/// comparison map.
pub fn recognize_pushout(s: &ExactStructure, sq: &PushoutSquare, d: &Hom) -> Result<bool> {
    require(s.is_inflation(&sq.i) && s.is_inflation(&sq.i_prime), "top and bottom maps must be inflations")?;
    require(s.context().is_cokernel_of(d, &sq.i), "d must be a cokernel of i")?;
    if !sq.commutes() {
        return Ok(false);
    }
    let pair = Hom::juxtapose(&sq.g, &sq.i_prime)?;
    if !fgab::is_epi(&pair) {
        return Ok(false);
    }
    let target = Hom::juxtapose(d, &Hom::zero(sq.i_prime.source(), d.target()))?;
    let Some(d2) = extend_along(&pair, &target) else { return Ok(false) };
    if !s.context().is_cokernel_of(&d2, &sq.i_prime) {
        return Ok(false);
    }
    let top = Conflation { inflation: sq.i.clone(), deflation: d.clone() };
    let bottom = Conflation { inflation: sq.i_prime.clone(), deflation: d2 };
    let m = ConflationMorphism::new(top, bottom, sq.f.clone(), sq.g.clone(), Hom::identity(d.target()))?;
    let nine = nine_core(s, &m)?;
    let (_, trace) = short_five_inverse(s, &nine.lower)?;
    certify(classify(&trace.g).is_iso(), "comparison map is not invertible")?;
    Ok(true)
}

/// A morphism of conflations split through `A' ↣ D ↠ C`.
#[derive(Clone, Debug)]
pub struct NineFactorization {
    pub middle: Conflation,
    /// `(f, g', 1_C)`
    pub upper: ConflationMorphism,
    /// `(1_{A'}, g'', h)`
    pub lower: ConflationMorphism,
}

fn nine_core(s: &ExactStructure, m: &ConflationMorphism) -> Result<NineFactorization> {
    let (c, po_sq) = pushout_completion(s, &m.source, &m.f)?;
    let po = s.context().pushout(&m.source.inflation, &m.f)?.expect("existence checked by the completion");
    let j = c.inflation.clone();
    let p = c.deflation.clone();
    let g1 = po_sq.g.clone();
    // g'' mediates (g, i')
    let g2 = po.mediate(&m.g, &m.target.inflation)?;
    let upper = ConflationMorphism::new(m.source.clone(), c.clone(), m.f.clone(), g1, Hom::identity(m.source.right()))?;
    let lower = ConflationMorphism::new(c.clone(), m.target.clone(), Hom::identity(j.source()), g2, m.h.clone())?;
    let _ = p;
    Ok(NineFactorization { middle: c, upper, lower })
}

/// Factors `(f, g, h)` through a conflation `A' ↣ D ↠ C` whose upper left and
/// lower right squares are pushouts.
pub fn nine_factorization(s: &ExactStructure, m: &ConflationMorphism) -> Result<NineFactorization> {
    require_conflation(s, &m.source, "source row")?;
    require_conflation(s, &m.target, "target row")?;
    let n = nine_core(s, m)?;
    let upper_left = PushoutSquare {
        i: m.source.inflation.clone(),
        f: m.f.clone(),
        i_prime: n.middle.inflation.clone(),
        g: n.upper.g.clone(),
    };
    certify(recognize_pushout(s, &upper_left, &m.source.deflation)?, "upper left square is not a pushout")?;
    certify(
        recognize_right_pushout(
            s,
            (&n.middle.inflation, &n.middle.deflation),
            (&m.target.inflation, &m.target.deflation),
            &n.lower.g,
            &m.h,
        ),
        "lower right square is not a pushout",
    )?;
    certify(eq(&comp(&n.lower.g, &n.upper.g)?, &m.g), "verticals do not compose to g")?;
    Ok(n)
}

/// Auxiliary morphisms of the Short Five proof.
#[derive(Clone, Debug)]
pub struct ShortFiveTrace {
    pub g: Hom,
    pub alpha: Hom,
    pub beta: Hom,
    /// `B' → D`, the pushout leg.
    pub g_prime: Hom,
    pub gamma: Hom,
    pub delta: Hom,
    pub inverse: Hom,
}

/// Inverse of `g` for a morphism `(f, g, h)` of conflations with `f`, `h` invertible.
pub fn short_five_inverse(s: &ExactStructure, m: &ConflationMorphism) -> Result<(Hom, ShortFiveTrace)> {
    let f_inv = classify(&m.f).inverse.ok_or_else(|| LemmaError::Hypothesis("f is not an isomorphism".into()))?;
    let h_inv = classify(&m.h).inverse.ok_or_else(|| LemmaError::Hypothesis("h is not an isomorphism".into()))?;
    let (i, d) = (&m.source.inflation, &m.source.deflation);
    let (i2, d2) = (&m.target.inflation, &m.target.deflation);
    let b = i.target();
    // pushout of i' along i∘f⁻¹
    let if_inv = comp(i, &f_inv)?;
    let po = s
        .context()
        .pushout(i2, &if_inv)?
        .ok_or_else(|| LemmaError::MembershipFailure("pushout does not exist in the category".into()))?;
    let alpha = po.leg_from_other.clone();
    let g_prime = po.leg_from_source.clone();
    if !s.is_inflation(&alpha) {
        return Err(LemmaError::MembershipFailure("α is not an inflation".into()));
    }
    let beta = po.mediate(d2, &Hom::zero(b, d2.target()))?;
    certify(s.context().is_cokernel_of(&beta, &alpha), "β is not a cokernel of α")?;
    let dd = po.object.clone();
    let gamma = lift_through_cokernel(d, &comp(&g_prime, &m.g)?.try_sub(&alpha)?)
        .map_err(|_| LemmaError::Falsified("g'g − α does not vanish on i".into()))?;
    let one_d = Hom::identity(&dd);
    let idem = one_d.try_sub(&comp(&gamma, &comp(&h_inv, &beta)?)?)?;
    let delta = restrict_through_kernel(&alpha, &idem)
        .map_err(|_| LemmaError::Falsified("1 − γh⁻¹β does not factor through α".into()))?;
    let inverse = comp(&delta, &g_prime)?;
    certify(eq(&comp(&alpha, &delta)?, &idem), "αδ = 1 − γh⁻¹β")?;
    certify(eq(&comp(&beta, &comp(&gamma, &h_inv)?)?, &Hom::identity(d2.target())), "βγh⁻¹ = 1")?;
    certify(eq(&comp(&inverse, &m.g)?, &Hom::identity(b)), "δg'g = 1")?;
    certify(eq(&comp(&m.g, &inverse)?, &Hom::identity(m.g.target())), "gδg' = 1")?;
    let trace = ShortFiveTrace { g: m.g.clone(), alpha, beta, g_prime, gamma, delta, inverse: inverse.clone() };
    Ok((inverse, trace))
}

/// Input of the double-conflation construction:
///
/// ```text
///   A --i--> B --d--> C --j--> D
///   =        g        h        f
///   A --i'-> B' -d'-> C' -j'-> D'
/// ```
#[derive(Clone, Debug)]
pub struct DoubleDiagram {
    pub i: Hom,
    pub d: Hom,
    pub j: Hom,
    pub i_prime: Hom,
    pub d_prime: Hom,
    pub j_prime: Hom,
    pub g: Hom,
    pub h: Hom,
    pub f: Hom,
}

/// `B ↣ B' ⊕ D ↠ D'` with inflation `[g; jd]` and deflation `[j'd', −f]`.
pub fn double_conflation(s: &ExactStructure, x: &DoubleDiagram) -> Result<Conflation> {
    for (m, name) in [(&x.i, "i"), (&x.i_prime, "i'"), (&x.j, "j"), (&x.j_prime, "j'")] {
        require(s.is_inflation(m), &format!("{name} is not an inflation"))?;
    }
    require_conflation(s, &Conflation { inflation: x.i.clone(), deflation: x.d.clone() }, "top row (i, d)")?;
    require_conflation(s, &Conflation { inflation: x.i_prime.clone(), deflation: x.d_prime.clone() }, "bottom row (i', d')")?;
    require(eq(&comp(&x.g, &x.i)?, &x.i_prime), "left square g∘i = i'")?;
    require(eq(&comp(&x.h, &x.d)?, &comp(&x.d_prime, &x.g)?), "middle square h∘d = d'∘g")?;
    let po = s
        .context()
        .pushout(&x.j, &x.h)?
        .ok_or_else(|| LemmaError::Hypothesis("right square: pushout of j along h does not exist".into()))?;
    let w = po.mediate(&x.f, &x.j_prime).map_err(|_| LemmaError::Hypothesis("right square does not commute".into()))?;
    require(classify(&w).is_iso(), "right square is not a pushout")?;

    let b2 = x.g.target();
    let c = x.d.target();
    // [g; d] is the pushout of i' along i, so an inflation
    let gd = Hom::stack(&x.g, &x.d)?;
    let sq = s
        .context()
        .pushout(&x.i_prime, &x.i)?
        .ok_or_else(|| LemmaError::MembershipFailure("pushout of i' along i".into()))?;
    let cmp = sq.mediate(&FgAb::injection_first(b2, c), &gd)?;
    certify(classify(&cmp).is_iso(), "[g; d] is not the pushout leg")?;
    if !s.is_inflation(&gd) {
        return Err(LemmaError::MembershipFailure("[g; d] is not an inflation".into()));
    }
    let diag = Hom::direct_sum(&Hom::identity(b2), &x.j);
    certify(s.is_inflation(&diag), "1 ⊕ j is not an inflation")?;
    let infl = comp(&diag, &gd)?;
    certify(s.is_inflation(&infl), "[g; jd] is not an inflation")?;
    let defl = Hom::juxtapose(&comp(&x.j_prime, &x.d_prime)?, &x.f.negate())?;
    certify(s.context().is_cokernel_of(&defl, &infl), "[j'd', −f] is not a cokernel of [g; jd]")?;
    certify(s.is_conflation(&infl, &defl)?, "double conflation")?;
    Ok(Conflation { inflation: infl, deflation: defl })
}

/// `A ↣ A ⊕ B ↠ B` via `[1; 0]`, `[0, 1]`; needs `0 → B` to be an inflation.
pub fn biproduct_conflation(s: &ExactStructure, a: &FgAb, b: &FgAb) -> Result<Conflation> {
    require(s.satisfies_r0_star(), &format!("{} does not satisfy R0*", s.name()))?;
    require(s.is_inflation(&Hom::zero(&FgAb::zero(), b)), "0 → B is not an inflation")?;
    let c = Conflation { inflation: FgAb::injection_first(a, b), deflation: FgAb::projection_second(a, b) };
    certify(s.is_conflation(&c.inflation, &c.deflation)?, "biproduct sequence")?;
    Ok(c)
}

/// The three equivalent conditions for a square of inflations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PushoutCharacterization {
    pub pushout: bool,
    pub conflation: bool,
    pub pushout_and_pullback: bool,
}

pub fn pushout_characterizations(s: &ExactStructure, sq: &PushoutSquare) -> Result<PushoutCharacterization> {
    require(s.satisfies_r0_star(), &format!("{} does not satisfy R0*", s.name()))?;
    require(s.is_inflation(&sq.i) && s.is_inflation(&sq.i_prime), "i and i' must be inflations")?;
    let pushout = sq.commutes() && {
        let po = s.context().pushout(&sq.i, &sq.f)?;
        match po {
            Some(po) => po.mediate(&sq.g, &sq.i_prime).map(|w| classify(&w).is_iso())?,
            None => false,
        }
    };
    let infl = Hom::stack(&sq.i, &sq.f)?;
    let defl = Hom::juxtapose(&sq.g, &sq.i_prime.negate())?;
    let conflation = s.is_conflation(&infl, &defl)?;
    let pullback = sq.commutes() && fgab::is_pullback_square(&sq.i, &sq.f, &sq.i_prime, &sq.g)?;
    let r = PushoutCharacterization { pushout, conflation, pushout_and_pullback: pushout && pullback };
    certify(r.pushout == r.conflation && r.conflation == r.pushout_and_pullback, "conditions disagree")?;
    Ok(r)
}

/// `[f; f']` for an inflation `f`.
pub fn bracket_inflation(s: &ExactStructure, f: &Hom, f2: &Hom) -> Result<Hom> {
    require(s.satisfies_r0_star(), &format!("{} does not satisfy R0*", s.name()))?;
    require(s.is_inflation(f), "f is not an inflation")?;
    require(f.source() == f2.source(), "f and f' need a common source")?;
    let po = s
        .context()
        .pushout(f, f2)?
        .ok_or_else(|| LemmaError::MembershipFailure("pushout of f along f'".into()))?;
    let sq = PushoutSquare { i: f.clone(), f: f2.clone(), i_prime: po.leg_from_other, g: po.leg_from_source };
    let ch = pushout_characterizations(s, &sq)?;
    certify(ch.conflation, "[f; f'] completes to a conflation")?;
    let b = Hom::stack(f, f2)?;
    certify(s.is_inflation(&b), "[f; f'] is an inflation")?;
    Ok(b)
}

/// Splits a conflation `A ⊕ A' ↣ B ⊕ B' ↠ C ⊕ C'` with block-diagonal maps.
pub fn summand_conflations(
    s: &ExactStructure,
    first: (&Hom, &Hom),
    second: (&Hom, &Hom),
) -> Result<(Conflation, Conflation)> {
    let (i1, d1) = first;
    let (i2, d2) = second;
    let sum_i = Hom::direct_sum(i1, i2);
    let sum_d = Hom::direct_sum(d1, d2);
    require(s.is_conflation(&sum_i, &sum_d)?, "the direct sum is not a conflation")?;
    let mut out = Vec::new();
    for (k, (i, d)) in [(i1, d1), (i2, d2)].into_iter().enumerate() {
        // ι∘i = (i ⊕ i')∘ι is an inflation; [R3] with p = ι gives i
        let (inj_src, inj_tgt) = if k == 0 {
            (FgAb::injection_first(i1.source(), i2.source()), FgAb::injection_first(i1.target(), i2.target()))
        } else {
            (FgAb::injection_second(i1.source(), i2.source()), FgAb::injection_second(i1.target(), i2.target()))
        };
        certify(s.is_inflation(&inj_src), "summand injection is an inflation")?;
        let composite = comp(&sum_i, &inj_src)?;
        certify(eq(&composite, &comp(&inj_tgt, i)?), "block-diagonal form")?;
        certify(s.is_inflation(&composite), "restricted sum is an inflation")?;
        certify(
            matches!(check_instance(s, Axiom::R3, &[i.clone(), inj_tgt]), Outcome::Holds),
            "[R3] gives the summand inflation",
        )?;
        certify(s.is_conflation(i, d)?, "summand is a conflation")?;
        out.push(Conflation { inflation: i.clone(), deflation: d.clone() });
    }
    let c2 = out.pop().unwrap();
    Ok((out.pop().unwrap(), c2))
}

/// Rows `A ↣ B ↠ C`, `A ↣ B' ↠ C'`, identity on `A`, and `h: C ↣ C'`.
#[derive(Clone, Debug)]
pub struct KerInflationDiagram {
    pub top: Conflation,
    pub bottom: Conflation,
    pub g: Hom,
    pub h: Hom,
}

#[derive(Clone, Debug)]
pub struct KerInflationResult {
    pub g_is_member: bool,
    /// `h'∘d'` with `h'` a cokernel of `h`.
    pub coker_g: Hom,
}

/// `g` is an inflation when `h` is.
pub fn ker_inflation_lemma(s: &ExactStructure, x: &KerInflationDiagram) -> Result<KerInflationResult> {
    require_conflation(s, &x.top, "top row")?;
    require_conflation(s, &x.bottom, "bottom row")?;
    require(x.top.left() == x.bottom.left(), "rows need the same left term")?;
    require(s.is_inflation(&x.h), "h is not an inflation")?;
    let (i, d) = (&x.top.inflation, &x.top.deflation);
    let (i2, d2) = (&x.bottom.inflation, &x.bottom.deflation);
    require(eq(&comp(&x.g, i)?, i2), "left square g∘i = i'")?;
    require(eq(&comp(&x.h, d)?, &comp(d2, &x.g)?), "right square h∘d = d'∘g")?;
    certify(recognize_right_pushout(s, (i, d), (i2, d2), &x.g, &x.h), "square BCB'C' is a pushout")?;
    let (_, h_coker) = s.context().cokernel(&x.h);
    let coker_g = comp(&h_coker, d2)?;
    certify(s.context().is_cokernel_of(&coker_g, &x.g), "h'd' is a cokernel of g")?;
    let diagram = DoubleDiagram {
        i: i.clone(),
        d: d.clone(),
        j: Hom::identity(d.target()),
        i_prime: i2.clone(),
        d_prime: d2.clone(),
        j_prime: Hom::identity(d2.target()),
        g: x.g.clone(),
        h: x.h.clone(),
        f: x.h.clone(),
    };
    // with j = 1 and f = h the double conflation has inflation [g; d]
    let dc = double_conflation(s, &diagram)?;
    let gd = dc.inflation;
    let diag = Hom::direct_sum(&Hom::identity(x.g.target()), &x.h);
    let lhs = comp(&Hom::stack(&Hom::identity(x.g.target()), d2)?, &x.g)?;
    certify(eq(&lhs, &comp(&diag, &gd)?), "[1; d']g = (1 ⊕ h)[g; d]")?;
    certify(s.is_inflation(&lhs), "[1; d']g is an inflation")?;
    let p = Hom::stack(&Hom::identity(x.g.target()), d2)?;
    certify(matches!(check_instance(s, Axiom::R3, &[x.g.clone(), p]), Outcome::Holds), "[R3] applies to g")?;
    Ok(KerInflationResult { g_is_member: s.is_inflation(&x.g), coker_g })
}

/// A commutative 3×3 diagram: columns `(f, f')`, `(g, g')`, `(h, h')` and
/// rows `(i, d)`, `(i', d')`. The third row is induced.
#[derive(Clone, Debug)]
pub struct ThreeByThree {
    pub row1: Conflation,
    pub row2: Conflation,
    pub col1: Conflation,
    pub col2: Conflation,
    pub col3: Conflation,
}

#[derive(Clone, Debug)]
pub struct ThreeByThreeResult {
    pub row3: Conflation,
    pub factorization: NineFactorization,
    /// `D → A''` with `u'j = f'` and `u'u = 0`.
    pub u_prime: Hom,
}

pub fn three_by_three(s: &ExactStructure, x: &ThreeByThree) -> Result<ThreeByThreeResult> {
    for (c, name) in [(&x.row1, "first row"), (&x.row2, "second row"), (&x.col1, "first column"), (&x.col2, "second column"), (&x.col3, "third column")] {
        require_conflation(s, c, name)?;
    }
    let (i, d) = (&x.row1.inflation, &x.row1.deflation);
    let (i2, d2) = (&x.row2.inflation, &x.row2.deflation);
    let (f, f2) = (&x.col1.inflation, &x.col1.deflation);
    let (g, g2) = (&x.col2.inflation, &x.col2.deflation);
    let (h, h2) = (&x.col3.inflation, &x.col3.deflation);
    let m = ConflationMorphism::new(x.row1.clone(), x.row2.clone(), f.clone(), g.clone(), h.clone())?;

    // third row, induced on the cokernels of the columns
    let i3 = lift_through_cokernel(f2, &comp(g2, i2)?)
        .map_err(|_| LemmaError::Hypothesis("g'∘i' does not vanish on f".into()))?;
    let d3 = lift_through_cokernel(g2, &comp(h2, d2)?)
        .map_err(|_| LemmaError::Hypothesis("h'∘d' does not vanish on g".into()))?;

    let nine = nine_factorization(s, &m)?;
    let j = &nine.middle.inflation;
    let p = &nine.middle.deflation;
    let u = &nine.upper.g;
    let v = &nine.lower.g;
    // u is the pushout of f along i
    certify(s.is_inflation(u), "u is an inflation")?;
    let kid = KerInflationDiagram { top: nine.middle.clone(), bottom: x.row2.clone(), g: v.clone(), h: h.clone() };
    let kr = ker_inflation_lemma(s, &kid)?;
    certify(kr.g_is_member, "v is an inflation")?;

    let po = s.context().pushout(i, f)?.expect("checked by the factorization");
    let to_po = po.mediate(u, j)?;
    certify(classify(&to_po).is_iso(), "D is the pushout of i and f")?;
    // u' with u'u = 0 and u'j = f'
    let u_prime = po.mediate(&Hom::zero(u.source(), f2.target()), f2)?;
    let w = classify(&to_po).inverse.unwrap();
    let u_prime = comp(&u_prime, &w)?;
    certify(eq(&comp(&u_prime, j)?, f2) && comp(&u_prime, u)?.is_zero(), "u'j = f', u'u = 0")?;
    certify(s.context().is_cokernel_of(&u_prime, u), "u' is a cokernel of u")?;
    // v' = h'd' up to the choice of cokernel of h
    let v_coker = comp(h2, d2)?;
    certify(s.context().is_cokernel_of(&kr.coker_g, v) && s.context().is_cokernel_of(&v_coker, v), "h'd' is a cokernel of v")?;
    certify(eq(&v_coker, &comp(&d3, g2)?), "v' = d''g'")?;
    certify(eq(&comp(&i3, &u_prime)?, &comp(g2, v)?), "i''u' = g'v")?;
    certify(
        recognize_right_pushout(s, (u, &u_prime), (g, g2), v, &i3),
        "square D A'' B' B'' is a pushout",
    )?;
    // i'' is the pushout of v along u'
    let po3 = s
        .context()
        .pushout(v, &u_prime)?
        .ok_or_else(|| LemmaError::MembershipFailure("pushout of v along u'".into()))?;
    let cmp = po3.mediate(g2, &i3)?;
    certify(classify(&cmp).is_iso(), "i'' is the pushout leg")?;
    if !s.is_inflation(&i3) {
        return Err(LemmaError::MembershipFailure("i'' is not an inflation".into()));
    }
    certify(s.context().is_cokernel_of(&d3, &i3), "d'' is a cokernel of i''")?;
    certify(s.is_conflation(&i3, &d3)?, "third row is a conflation")?;
    let _ = (p, d);
    Ok(ThreeByThreeResult { row3: Conflation { inflation: i3, deflation: d3 }, factorization: nine, u_prime })
}

/// Split rows `ℤ ↣ ℤ² ↠ ℤ` over themselves, columns multiplication by 2.
pub fn torsion_three_by_three(s: &ExactStructure) -> Result<ThreeByThree> {
    let z = FgAb::integers();
    let zz = FgAb::direct_sum(&z, &z);
    let row = Conflation { inflation: FgAb::injection_first(&z, &z), deflation: FgAb::projection_second(&z, &z) };
    let col = s.conflation_of(&Hom::scalar(&z, 2))?;
    let col2 = s.conflation_of(&Hom::scalar(&zz, 2))?;
    Ok(ThreeByThree { row1: row.clone(), row2: row, col1: col.clone(), col2, col3: col })
}

/// Verdicts of `[g, g∘f]` and `g` being deflations, each backed by the
/// corresponding direction of the proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeflSumVerdict {
    pub sum_is_deflation: bool,
    pub g_is_deflation: bool,
}

pub fn defl_sum_reduction(s: &ExactStructure, f: &Hom, g: &Hom) -> Result<DeflSumVerdict> {
    require(f.target() == g.source(), "f and g must compose")?;
    let (a, b) = (f.source(), f.target());
    let gf = comp(g, f)?;
    let sum = Hom::juxtapose(g, &gf)?;
    let sum_is_deflation = s.is_deflation(&sum);
    let g_is_deflation = s.is_deflation(g);
    // shear σ = [[1, f], [0, 1]] on B ⊕ A, with [g, gf] = [g, 0]∘σ
    let inj_b = FgAb::injection_first(b, a);
    let proj_a = FgAb::projection_second(b, a);
    let nil = comp(&inj_b, &comp(f, &proj_a)?)?;
    let id = Hom::identity(inj_b.target());
    let sigma = id.try_add(&nil)?;
    let sigma_inv = id.try_sub(&nil)?;
    let g0 = Hom::juxtapose(g, &Hom::zero(a, g.target()))?;
    certify(eq(&comp(&g0, &sigma)?, &sum), "[g, gf] = [g, 0]σ")?;

    if sum_is_deflation {
        let (_, ur) = kernel(&sum);
        let u_r = comp(&sigma, &ur)?; // [u'; r]
        certify(s.is_conflation(&u_r, &g0)?, "transported conflation with deflation [g, 0]")?;
        let inj_a = FgAb::injection_second(b, a);
        let sec = restrict_through_kernel(&u_r, &inj_a).map_err(|_| LemmaError::Falsified("[0; 1] factors through [u'; r]".into()))?;
        let r = comp(&proj_a, &u_r)?;
        let u2 = comp(&FgAb::projection_first(b, a), &u_r)?;
        let dec = crate::exactstruct::section_decomposition(&sec)?;
        certify(eq(&comp(&r, &sec)?, &Hom::identity(a)), "r∘s = 1")?;
        let u2v = comp(&u2, &dec.complement)?;
        certify(eq(&comp(&u2v, &dec.projection)?, &u2), "u'vp = u'")?;
        certify(s.is_inflation(&u2v), "u'v is an inflation")?;
        certify(s.is_conflation(&u2v, g)?, "g is a deflation (cokernel of u'v)")?;
    }
    if g_is_deflation {
        let (_, r) = kernel(g);
        let diag = Hom::direct_sum(&r, &Hom::identity(a));
        certify(s.is_conflation(&diag, &g0)?, "(r ⊕ 1, [g, 0]) is a conflation")?;
        let moved = comp(&sigma_inv, &diag)?;
        certify(s.is_conflation(&moved, &sum)?, "transported conflation with deflation [g, gf]")?;
    }
    certify(sum_is_deflation == g_is_deflation, "[g, gf] is a deflation iff g is")?;
    Ok(DeflSumVerdict { sum_is_deflation, g_is_deflation })
}

/// Cancellation for inflations and the `[f; g∘f]` criterion on sampled instances.
pub fn obscure_equivalence(s: &ExactStructure, config: &CheckConfig) -> AxiomReport {
    let stream = par::stream_tag("obscure");
    let failure = par::find_first(config.execution, config.samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::sample_seed(config.seed, stream, k as u64));
        obscure_sample(s, &mut rng, config.bounds)
    });
    AxiomReport {
        check: "obscure".into(),
        structure: s.name(),
        verdict: if failure.is_some() { Verdict::Fail } else { Verdict::Pass },
        samples: failure.as_ref().map_or(config.samples, |(k, _)| k + 1),
        fixtures: 0,
        vacuous: 0,
        seed: config.seed,
        witness: failure.map(|(_, w)| w),
    }
}

pub(crate) fn obscure_sample<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds) -> Option<Witness> {
    let witness = |note: &str, ms: Vec<(&str, Hom)>| Witness {
        check: "obscure".into(),
        structure: s.name(),
        morphisms: ms.into_iter().map(|(n, h)| (n.to_string(), h)).collect(),
        note: note.to_string(),
        origin: None,
    };
    let class = s.context().class;
    // cancellation: p∘i an inflation forces i to be one
    let (i, p) = if rng.random_bool(0.5) {
        let m = sample_inflation(s, rng, b)?;
        let x = class.random_object(rng, b);
        let h = random_hom_with(rng, m.source(), &x);
        (Hom::stack(&m, &h).ok()?, FgAb::projection_first(m.target(), &x))
    } else {
        let a = class.random_object(rng, b);
        let bb = class.random_object(rng, b);
        let c = class.random_object(rng, b);
        (random_hom_with(rng, &a, &bb), random_hom_with(rng, &bb, &c))
    };
    if s.is_inflation(&p.after(&i).ok()?) && !s.is_inflation(&i) {
        return Some(witness("p∘i is an inflation but i is not", vec![("i", i), ("p", p)]));
    }
    // [f; g∘f] is an inflation iff f is
    let f = if rng.random_bool(0.5) {
        sample_inflation(s, rng, b)?
    } else {
        let a = class.random_object(rng, b);
        let bb = class.random_object(rng, b);
        random_hom_with(rng, &a, &bb)
    };
    let c = class.random_object(rng, b);
    let g = random_hom_with(rng, f.target(), &c);
    let gf = g.after(&f).ok()?;
    let bracket = Hom::stack(&f, &gf).ok()?;
    let lhs = s.is_inflation(&bracket);
    let rhs = s.is_inflation(&f);
    if lhs != rhs {
        return Some(witness("[f; gf] is an inflation iff f is", vec![("f", f), ("g", g)]));
    }
    if rhs && s.satisfies_r0_star() && bracket_inflation(s, &f, &gf).is_err() {
        return Some(witness("bracket construction failed", vec![("f", f), ("g", g)]));
    }
    None
}

/// Every sampled inflation `A ↣ B` lets every `A → I` extend to `B`.
pub fn injective_test(s: &ExactStructure, injective: &FgAb, config: &CheckConfig) -> bool {
    let z = FgAb::integers();
    // ·m on ℤ, with m divisible by every torsion order of I, detects any nonzero I
    let m = injective.torsion_factors().iter().fold(num_bigint::BigInt::from(2), |acc, d| acc * d);
    let probes = [
        Hom::scalar(&z, 2),
        Hom::from_i64(&FgAb::cyclic(2), &FgAb::cyclic(4), &[2]).unwrap(),
        Hom::new(z.clone(), z.clone(), crate::intlin::Mat::from_vec(1, 1, vec![m]).unwrap()).unwrap(),
    ];
    let extends_all = |i: &Hom| hom_generators(i.source(), injective).iter().all(|a| extend_along(i, a).is_some());
    if probes.iter().filter(|i| s.is_inflation(i)).any(|i| !extends_all(i)) {
        return false;
    }
    let stream = par::stream_tag("injective");
    par::find_first(config.execution, config.samples, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::sample_seed(config.seed, stream, k as u64));
        let i = sample_inflation(s, &mut rng, config.bounds)?;
        (!extends_all(&i)).then_some(())
    })
    .is_none()
}

/// Whether `Hom(f, I)` is onto for every listed `I`, checked on generators of `Hom(A, I)`.
pub fn hom_epi_characterization(f: &Hom, injectives: &[FgAb]) -> bool {
    injectives.iter().all(|inj| hom_generators(f.source(), inj).iter().all(|a| extend_along(f, a).is_some()))
}

/// Random conflation of `s`, from an inflation or a deflation sampler.
pub fn random_conflation<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds) -> Option<Conflation> {
    if rng.random_bool(0.5) {
        s.conflation_of(&sample_inflation(s, rng, b)?).ok()
    } else {
        let d = sample_deflation(s, rng, b)?;
        let c = s.conflation_of_deflation(&d).ok()?;
        s.is_conflation(&c.inflation, &c.deflation).ok()?.then_some(c)
    }
}

/// Random morphism of conflations between two random conflations.
pub fn random_conflation_morphism<R: Rng>(
    s: &ExactStructure,
    rng: &mut R,
    b: Bounds,
) -> Option<ConflationMorphism> {
    let c1 = random_conflation(s, rng, b)?;
    let c2 = random_conflation(s, rng, b)?;
    random_morphism_between(rng, &c1, &c2)
}

/// A random `(f, g, h)` between given conflations: `f` is drawn, `g` is an
/// extension of `i'∘f` along `i` plus a term vanishing on `i`, and `h` is induced.
pub fn random_morphism_between<R: Rng>(rng: &mut R, c1: &Conflation, c2: &Conflation) -> Option<ConflationMorphism> {
    for _ in 0..4 {
        let f = random_hom_with(rng, c1.left(), c2.left());
        let target = c2.inflation.after(&f).ok()?;
        let Some(g0) = extend_along(&c1.inflation, &target) else { continue };
        let phi = random_hom_with(rng, c1.right(), c2.middle());
        let g = g0.try_add(&phi.after(&c1.deflation).ok()?).ok()?;
        let h = lift_through_cokernel(&c1.deflation, &c2.deflation.after(&g).ok()?).ok()?;
        return ConflationMorphism::new(c1.clone(), c2.clone(), f, g, h).ok();
    }
    None
}

/// A morphism of conflations with `f = h = ±1` and `g = ±1 + i∘κ∘d`.
pub fn random_five_instance<R: Rng>(s: &ExactStructure, rng: &mut R, b: Bounds) -> Option<ConflationMorphism> {
    let c = random_conflation(s, rng, b)?;
    let kappa = random_hom_with(rng, c.right(), c.left());
    let nil = c.inflation.after(&kappa.after(&c.deflation).ok()?).ok()?;
    let e = if rng.random_bool(0.5) { 1 } else { -1 };
    let g = Hom::scalar(c.middle(), e).try_add(&nil).ok()?;
    ConflationMorphism::new(c.clone(), c.clone(), Hom::scalar(c.left(), e), g, Hom::scalar(c.right(), e)).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactstruct::{all_isos_structure, isbell_structure, max_structure, split_structure};
    use crate::intlin::Mat;

    fn z() -> FgAb {
        FgAb::integers()
    }

    fn zn(n: i64) -> FgAb {
        FgAb::cyclic(n)
    }

    fn h(a: &FgAb, b: &FgAb, e: &[i64]) -> Hom {
        Hom::from_i64(a, b, e).unwrap()
    }

    fn two_row() -> Conflation {
        Conflation { inflation: Hom::scalar(&z(), 2), deflation: h(&z(), &zn(2), &[1]) }
    }

    #[test]
    fn pushout_completion_examples() {
        let max = max_structure();
        let c = two_row();
        let (c2, sq) = pushout_completion(&max, &c, &Hom::identity(&z())).unwrap();
        assert!(c2.middle().isomorphic(&z()));
        assert!(classify(&sq.g).is_iso());
        let pi = h(&z(), &zn(2), &[1]);
        let (c2, sq) = pushout_completion(&max, &c, &pi).unwrap();
        assert_eq!(*c2.middle(), zn(4));
        assert_eq!(*c2.right(), zn(2));
        assert!(fgab::is_pushout_square(&sq.i, &sq.f, &sq.i_prime, &sq.g).unwrap());
        let isb = isbell_structure(2).unwrap();
        let err = pushout_completion(&isb, &c, &pi).unwrap_err();
        assert!(matches!(err, LemmaError::MembershipFailure(_)), "{err}");
    }

    #[test]
    fn recognize_pushout_examples() {
        let max = max_structure();
        let c = two_row();
        let id = PushoutSquare::new(c.inflation.clone(), Hom::identity(&z()), c.inflation.clone(), Hom::identity(&z())).unwrap();
        assert!(recognize_pushout(&max, &id, &c.deflation).unwrap());
        let (_, sq) = pushout_completion(&max, &c, &h(&z(), &zn(2), &[1])).unwrap();
        assert!(recognize_pushout(&max, &sq, &c.deflation).unwrap());
        let broken = PushoutSquare { g: Hom::zero(sq.g.source(), sq.g.target()), ..sq.clone() };
        assert!(!recognize_pushout(&max, &broken, &c.deflation).unwrap());
        assert!(!fgab::is_pushout_square(&broken.i, &broken.f, &broken.i_prime, &broken.g).unwrap());
    }

    #[test]
    fn nine_examples() {
        let max = max_structure();
        let c = two_row();
        let n = nine_factorization(&max, &ConflationMorphism::identity(&c)).unwrap();
        assert!(n.middle.middle().isomorphic(&z()));
        let pi = h(&z(), &zn(2), &[1]);
        let (c2, sq) = pushout_completion(&max, &c, &pi).unwrap();
        let m = ConflationMorphism::new(c.clone(), c2, pi, sq.g, Hom::identity(&zn(2))).unwrap();
        let n = nine_factorization(&max, &m).unwrap();
        assert_eq!(*n.middle.middle(), zn(4));
    }

    #[test]
    fn short_five_examples() {
        let split = split_structure();
        let b = biproduct_conflation(&split, &z(), &z()).unwrap();
        let (inv, _) = short_five_inverse(&split, &ConflationMorphism::identity(&b)).unwrap();
        assert!(inv.equals(&Hom::identity(b.middle())).unwrap());

        let g = Hom::new(b.middle().clone(), b.middle().clone(), Mat::from_i64(2, 2, &[1, 1, 0, 1])).unwrap();
        let m = ConflationMorphism::new(b.clone(), b.clone(), Hom::identity(&z()), g.clone(), Hom::identity(&z())).unwrap();
        let (inv, trace) = short_five_inverse(&split, &m).unwrap();
        let expected = Hom::new(b.middle().clone(), b.middle().clone(), Mat::from_i64(2, 2, &[1, -1, 0, 1])).unwrap();
        assert!(inv.equals(&expected).unwrap());
        assert!(trace.alpha.after(&trace.delta).is_ok());

        let max = max_structure();
        let c = Conflation { inflation: h(&zn(2), &zn(4), &[2]), deflation: h(&zn(4), &zn(2), &[1]) };
        let m = ConflationMorphism::new(c.clone(), c.clone(), Hom::identity(&zn(2)), Hom::scalar(&zn(4), 3), Hom::identity(&zn(2)))
            .unwrap();
        let (inv, _) = short_five_inverse(&max, &m).unwrap();
        assert!(inv.equals(&Hom::scalar(&zn(4), 3)).unwrap());

        let bad = ConflationMorphism::new(c.clone(), c.clone(), Hom::zero(&zn(2), &zn(2)), Hom::zero(&zn(4), &zn(4)), Hom::zero(&zn(2), &zn(2)))
            .unwrap();
        assert!(matches!(short_five_inverse(&max, &bad), Err(LemmaError::Hypothesis(_))));
    }

    #[test]
    fn double_conflation_examples() {
        let max = max_structure();
        // split, identity-like: B = C = D = ℤ, A = 0
        let zero = FgAb::zero();
        let x = DoubleDiagram {
            i: Hom::zero(&zero, &z()),
            d: Hom::identity(&z()),
            j: Hom::identity(&z()),
            i_prime: Hom::zero(&zero, &z()),
            d_prime: Hom::identity(&z()),
            j_prime: Hom::identity(&z()),
            g: Hom::identity(&z()),
            h: Hom::identity(&z()),
            f: Hom::identity(&z()),
        };
        let c = double_conflation(&max, &x).unwrap();
        assert!(c.middle().isomorphic(&FgAb::from_orders(&[0, 0])));

        // torsion: rows from the pushout completion of ·2 along π, then j = 1
        let c1 = two_row();
        let (c2, sq) = pushout_completion(&max, &c1, &h(&z(), &zn(2), &[1])).unwrap();
        let _ = sq;
        let x = DoubleDiagram {
            i: c2.inflation.clone(),
            d: c2.deflation.clone(),
            j: h(&zn(2), &zn(4), &[2]),
            i_prime: c2.inflation.clone(),
            d_prime: c2.deflation.clone(),
            j_prime: h(&zn(2), &zn(4), &[2]),
            g: Hom::identity(c2.middle()),
            h: Hom::identity(&zn(2)),
            f: Hom::identity(&zn(4)),
        };
        let c = double_conflation(&max, &x).unwrap();
        assert!(max.is_conflation(&c.inflation, &c.deflation).unwrap());

        // D' = 0
        let x = DoubleDiagram {
            i: c1.inflation.clone(),
            d: Hom::zero(&z(), &zero),
            j: Hom::identity(&zero),
            i_prime: c1.inflation.clone(),
            d_prime: Hom::zero(&z(), &zero),
            j_prime: Hom::identity(&zero),
            g: Hom::identity(&z()),
            h: Hom::identity(&zero),
            f: Hom::identity(&zero),
        };
        let x = DoubleDiagram { i: Hom::identity(&z()), i_prime: Hom::identity(&z()), ..x };
        let c = double_conflation(&max, &x).unwrap();
        assert!(c.right().is_zero());
    }

    #[test]
    fn biproduct_examples() {
        let max = max_structure();
        let c = biproduct_conflation(&max, &FgAb::zero(), &zn(2)).unwrap();
        assert!(c.middle().isomorphic(&zn(2)));
        biproduct_conflation(&max, &z(), &zn(2)).unwrap();
        assert!(matches!(biproduct_conflation(&all_isos_structure(), &z(), &z()), Err(LemmaError::Hypothesis(_))));
    }

    #[test]
    fn pushout_characterization_examples() {
        let max = max_structure();
        let c = two_row();
        let (_, sq) = pushout_completion(&max, &c, &h(&z(), &zn(2), &[1])).unwrap();
        let all = PushoutCharacterization { pushout: true, conflation: true, pushout_and_pullback: true };
        assert_eq!(pushout_characterizations(&max, &sq).unwrap(), all);
        let none = PushoutCharacterization { pushout: false, conflation: false, pushout_and_pullback: false };
        assert_eq!(pushout_characterizations(&max, &sq.padded()).unwrap(), none);
        let id = PushoutSquare::new(c.inflation.clone(), Hom::identity(&z()), c.inflation.clone(), Hom::identity(&z())).unwrap();
        assert_eq!(pushout_characterizations(&max, &id).unwrap(), all);
    }

    #[test]
    fn bracket_examples() {
        let max = max_structure();
        let two = Hom::scalar(&z(), 2);
        bracket_inflation(&max, &two, &Hom::zero(&z(), &z())).unwrap();
        let b = bracket_inflation(&max, &two, &h(&z(), &zn(3), &[1])).unwrap();
        assert!(fgab::is_mono(&b));
        assert!(bracket_inflation(&all_isos_structure(), &Hom::identity(&z()), &Hom::identity(&z())).is_err());
    }

    #[test]
    fn summand_examples() {
        let max = max_structure();
        let c2 = two_row();
        let c3 = Conflation { inflation: Hom::scalar(&z(), 3), deflation: h(&z(), &zn(3), &[1]) };
        let (a, b) = summand_conflations(&max, (&c2.inflation, &c2.deflation), (&c3.inflation, &c3.deflation)).unwrap();
        assert_eq!(*a.right(), zn(2));
        assert_eq!(*b.right(), zn(3));
        let zero = Conflation::identity_on(&FgAb::zero());
        summand_conflations(&max, (&zero.inflation, &zero.deflation), (&c2.inflation, &c2.deflation)).unwrap();
        let split = split_structure();
        let s1 = biproduct_conflation(&split, &z(), &zn(2)).unwrap();
        summand_conflations(&split, (&s1.inflation, &s1.deflation), (&s1.inflation, &s1.deflation)).unwrap();
    }

    #[test]
    fn ker_inflation_examples() {
        let max = max_structure();
        let c = two_row();
        let r = ker_inflation_lemma(
            &max,
            &KerInflationDiagram { top: c.clone(), bottom: c.clone(), g: Hom::identity(&z()), h: Hom::identity(&zn(2)) },
        )
        .unwrap();
        assert!(r.g_is_member);
        assert!(r.coker_g.target().is_zero());
        // torsion: ℤ ↣ ℤ ↠ ℤ/2 into ℤ ↣ ℤ ⊕ ℤ/2... via the nine factorization middle column
        let split = split_structure();
        let b = biproduct_conflation(&split, &z(), &z()).unwrap();
        let top = Conflation::identity_on(&z());
        let top = Conflation { inflation: top.inflation, deflation: Hom::zero(&z(), &FgAb::zero()) };
        let r = ker_inflation_lemma(
            &split,
            &KerInflationDiagram { top, bottom: b.clone(), g: b.inflation.clone(), h: Hom::zero(&FgAb::zero(), &z()) },
        )
        .unwrap();
        assert!(r.g_is_member);
        assert!(r.coker_g.target().isomorphic(&z()));
    }

    #[test]
    fn three_by_three_torsion_fixture() {
        let max = max_structure();
        let r = three_by_three(&max, &torsion_three_by_three(&max).unwrap()).unwrap();
        assert!(r.row3.middle().isomorphic(&FgAb::from_orders(&[2, 2])));
        assert!(max.is_conflation(&r.row3.inflation, &r.row3.deflation).unwrap());
    }

    #[test]
    fn defl_sum_examples() {
        let max = max_structure();
        let pi = h(&z(), &zn(2), &[1]);
        let v = defl_sum_reduction(&max, &Hom::identity(&z()), &pi).unwrap();
        assert!(v.sum_is_deflation && v.g_is_deflation);
        let v = defl_sum_reduction(&max, &Hom::identity(&z()), &Hom::scalar(&z(), 2)).unwrap();
        assert!(!v.sum_is_deflation && !v.g_is_deflation);
        let v = defl_sum_reduction(&max, &Hom::zero(&zn(3), &z()), &pi).unwrap();
        assert!(v.sum_is_deflation);
    }

    #[test]
    fn obscure_examples() {
        let max = max_structure();
        assert!(matches!(
            check_instance(&max, Axiom::R3, &[Hom::scalar(&z(), 2), Hom::identity(&z())]),
            Outcome::Holds
        ));
        let two = Hom::scalar(&z(), 2);
        let pi = h(&z(), &zn(2), &[1]);
        let b = Hom::stack(&two, &pi.after(&two).unwrap()).unwrap();
        assert_eq!(max.is_inflation(&b), max.is_inflation(&two));
        let r = obscure_equivalence(&max, &CheckConfig::new(30, 2));
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn injective_examples() {
        let cfg = CheckConfig::new(30, 9);
        assert!(injective_test(&split_structure(), &z(), &cfg));
        assert!(!injective_test(&max_structure(), &z(), &cfg));
        assert!(injective_test(&max_structure(), &FgAb::zero(), &cfg));
        assert!(!hom_epi_characterization(&Hom::scalar(&z(), 2), &[z()]));
        assert!(hom_epi_characterization(&FgAb::injection_first(&z(), &zn(2)), &[z(), zn(2)]));
    }
}
