//! Seeded sample runs of the lemma constructions, reported like axiom checks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexes::{cone_acyclicity, is_acyclic, mapping_cone, random_cone_instance};
use crate::exactstruct::{
    sample_deflation, sample_inflation, wic_sample, AxiomReport, CheckConfig, CokernelRule, Conflation, ExactError,
    ExactStructure, Outcome, SampleOrigin, Verdict, Witness,
};
use crate::fgab::{self, classify, random_hom_with, Bounds, FgAb, Hom};
use crate::homlemmas::{
    defl_sum_reduction, double_conflation, hom_epi_characterization, injective_test, nine_factorization,
    obscure_sample, pushout_characterizations, pushout_completion, random_conflation, random_conflation_morphism,
    random_five_instance, short_five_inverse, three_by_three, torsion_three_by_three, DoubleDiagram, LemmaError,
    PushoutCharacterization, ThreeByThree,
};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    Five,
    Nine,
    Double,
    ThreeByThree,
    PushoutEquiv,
    DeflSum,
    Obscure,
    ConeAcyclic,
    SectionDecomp,
    Injective,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::Five,
        Lemma::Nine,
        Lemma::Double,
        Lemma::ThreeByThree,
        Lemma::PushoutEquiv,
        Lemma::DeflSum,
        Lemma::Obscure,
        Lemma::ConeAcyclic,
        Lemma::SectionDecomp,
        Lemma::Injective,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Lemma::Five => "five",
            Lemma::Nine => "nine",
            Lemma::Double => "double",
            Lemma::ThreeByThree => "three-by-three",
            Lemma::PushoutEquiv => "pushout-equiv",
            Lemma::DeflSum => "defl-sum",
            Lemma::Obscure => "obscure",
            Lemma::ConeAcyclic => "cone-acyclic",
            Lemma::SectionDecomp => "section-decomp",
            Lemma::Injective => "injective",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lemma {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lemma::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| ExactError::UnknownAxiom(s.to_string()))
    }
}

enum Sample {
    Holds,
    Vacuous,
    Fails(String, Vec<(String, Hom)>),
}

fn named(ms: &[(&str, &Hom)]) -> Vec<(String, Hom)> {
    ms.iter().map(|(n, h)| (n.to_string(), (*h).clone())).collect()
}

/// Maps a lemma error: a hypothesis problem means the sampler missed, anything else is a failure.
fn judge(r: Result<Sample, LemmaError>, ms: Vec<(String, Hom)>) -> Sample {
    match r {
        Ok(s) => s,
        Err(LemmaError::Hypothesis(_)) => Sample::Vacuous,
        Err(e) => Sample::Fails(e.to_string(), ms),
    }
}

fn conflation_roles(c: &Conflation, i: &str, d: &str) -> Vec<(String, Hom)> {
    named(&[(i, &c.inflation), (d, &c.deflation)])
}

fn five(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let Some(m) = random_five_instance(s, rng, b) else { return Sample::Vacuous };
    let ms = named(&[("i", &m.source.inflation), ("d", &m.source.deflation), ("g", &m.g)]);
    let r = short_five_inverse(s, &m).and_then(|(inv, _)| {
        // independent check of invertibility by SNF
        let ok = classify(&m.g).is_iso()
            && inv.after(&m.g)?.equals(&Hom::identity(m.g.source()))?
            && m.g.after(&inv)?.equals(&Hom::identity(m.g.target()))?;
        Ok(if ok { Sample::Holds } else { Sample::Fails("g is not inverted".into(), Vec::new()) })
    });
    judge(r, ms)
}

fn nine(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let Some(m) = random_conflation_morphism(s, rng, b) else { return Sample::Vacuous };
    let mut ms = conflation_roles(&m.source, "i", "d");
    ms.extend(conflation_roles(&m.target, "i'", "d'"));
    ms.extend(named(&[("f", &m.f), ("g", &m.g), ("h", &m.h)]));
    let r = nine_factorization(s, &m).and_then(|n| {
        let composite = n.lower.g.after(&n.upper.g)?;
        let mut ok = composite.equals(&m.g)?;
        if s.context().cokernel_rule == CokernelRule::Ambient {
            ok &= fgab::is_pushout_square(&m.source.inflation, &m.f, &n.middle.inflation, &n.upper.g)?;
        }
        Ok(if ok { Sample::Holds } else { Sample::Fails("factorization fails the oracle".into(), Vec::new()) })
    });
    judge(r, ms)
}

fn double(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let Some(m) = random_conflation_morphism(s, rng, b) else { return Sample::Vacuous };
    let n = match nine_factorization(s, &m) {
        Ok(n) => n,
        Err(e) => return judge(Err(e), Vec::new()),
    };
    let c = n.middle.right().clone();
    let Some(j) = crate::exactstruct::sample_inflation_from(s, rng, b, &c) else { return Sample::Vacuous };
    let po = match s.context().pushout(&j, &m.h) {
        Ok(Some(po)) => po,
        _ => return Sample::Vacuous,
    };
    let x = DoubleDiagram {
        i: n.middle.inflation.clone(),
        d: n.middle.deflation.clone(),
        j: j.clone(),
        i_prime: m.target.inflation.clone(),
        d_prime: m.target.deflation.clone(),
        j_prime: po.leg_from_other.clone(),
        g: n.lower.g.clone(),
        h: m.h.clone(),
        f: po.leg_from_source.clone(),
    };
    let ms = named(&[("i", &x.i), ("d", &x.d), ("j", &x.j), ("i'", &x.i_prime), ("d'", &x.d_prime), ("g", &x.g), ("h", &x.h)]);
    if !s.is_inflation(&x.j_prime) {
        return Sample::Fails("pushout leg j' is not an inflation".into(), ms);
    }
    let r = double_conflation(s, &x).and_then(|dc| {
        let ok = fgab::is_mono(&dc.inflation) || s.context().cokernel_rule != CokernelRule::Ambient;
        let ok = ok && s.context().is_cokernel_of(&dc.deflation, &dc.inflation);
        Ok(if ok { Sample::Holds } else { Sample::Fails("double conflation fails the oracle".into(), Vec::new()) })
    });
    judge(r, ms)
}

/// `R ⊕ R'` over `R`, with a shear on the middle row.
fn split_three_by_three(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Option<(ThreeByThree, Conflation)> {
    let r1 = random_conflation(s, rng, b)?;
    let r3 = random_conflation(s, rng, b)?;
    let col = |x: &FgAb, y: &FgAb| Conflation {
        inflation: FgAb::injection_first(x, y),
        deflation: FgAb::projection_second(x, y),
    };
    let (bm, b3) = (r1.middle(), r3.middle());
    let kappa = random_hom_with(rng, b3, bm);
    let nil = FgAb::injection_first(bm, b3).after(&kappa.after(&FgAb::projection_second(bm, b3)).ok()?).ok()?;
    let id = Hom::identity(&FgAb::direct_sum(bm, b3));
    let (sigma, sigma_inv) = (id.try_add(&nil).ok()?, id.try_sub(&nil).ok()?);
    let sum_i = Hom::direct_sum(&r1.inflation, &r3.inflation);
    let sum_d = Hom::direct_sum(&r1.deflation, &r3.deflation);
    let row2 = Conflation { inflation: sigma.after(&sum_i).ok()?, deflation: sum_d.after(&sigma_inv).ok()? };
    let mid = col(bm, b3);
    let col2 = Conflation { inflation: sigma.after(&mid.inflation).ok()?, deflation: mid.deflation.after(&sigma_inv).ok()? };
    let x = ThreeByThree { row1: r1.clone(), row2, col1: col(r1.left(), r3.left()), col2, col3: col(r1.right(), r3.right()) };
    Some((x, r3))
}

fn three(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let Some((x, r3)) = split_three_by_three(s, rng, b) else { return Sample::Vacuous };
    let mut ms = conflation_roles(&x.row1, "i", "d");
    ms.extend(conflation_roles(&x.row2, "i'", "d'"));
    let r = three_by_three(s, &x).map(|out| {
        if out.row3.middle().isomorphic(r3.middle()) && out.row3.right().isomorphic(r3.right()) {
            Sample::Holds
        } else {
            Sample::Fails("third row is not the split-off summand".into(), Vec::new())
        }
    });
    judge(r, ms)
}

fn pushout_equiv(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds, genuine: bool) -> Sample {
    let Some(c) = random_conflation(s, rng, b) else { return Sample::Vacuous };
    let a2 = s.context().class.random_object(rng, b);
    let f = random_hom_with(rng, c.left(), &a2);
    let sq = match pushout_completion(s, &c, &f) {
        Ok((_, sq)) => sq,
        Err(LemmaError::MembershipFailure(_)) => return Sample::Vacuous,
        Err(e) => return judge(Err(e), Vec::new()),
    };
    let sq = if genuine { sq } else { sq.padded() };
    let ms = named(&[("i", &sq.i), ("f", &sq.f), ("i'", &sq.i_prime), ("g", &sq.g)]);
    let want = PushoutCharacterization { pushout: genuine, conflation: genuine, pushout_and_pullback: genuine };
    let r = pushout_characterizations(s, &sq).map(|got| {
        if got == want {
            Sample::Holds
        } else {
            Sample::Fails(format!("expected {want:?}, got {got:?}"), Vec::new())
        }
    });
    judge(r, ms)
}

fn defl_sum(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let class = s.context().class;
    let g = if rng.random_bool(0.5) {
        match sample_deflation(s, rng, b) {
            Some(g) => g,
            None => return Sample::Vacuous,
        }
    } else {
        let x = class.random_object(rng, b);
        let y = class.random_object(rng, b);
        random_hom_with(rng, &x, &y)
    };
    let a = class.random_object(rng, b);
    let f = random_hom_with(rng, &a, g.source());
    judge(defl_sum_reduction(s, &f, &g).map(|_| Sample::Holds), named(&[("f", &f), ("g", &g)]))
}

fn cone(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let Some((f, wa, wb)) = random_cone_instance(s, rng, b, 6) else { return Sample::Vacuous };
    let (lo, hi) = (f.source().lo().min(f.target().lo()), f.source().hi().max(f.target().hi()));
    let ms: Vec<(String, Hom)> = (lo..=hi).map(|n| (format!("f{n}"), f.component(n))).collect();
    match cone_acyclicity(&f, &wa, &wb, s) {
        Ok(_) if is_acyclic(&mapping_cone(&f), s).is_some() => Sample::Holds,
        Ok(_) => Sample::Fails("constructed witness, but the cone fails the acyclicity oracle".into(), ms),
        Err(e) => Sample::Fails(e.to_string(), ms),
    }
}

fn injective(s: &ExactStructure, rng: &mut ChaCha8Rng, b: Bounds) -> Sample {
    let i = s.context().class.random_object(rng, b);
    let cfg = CheckConfig::new(8, rng.random()).with_bounds(b).with_execution(par::Execution::Sequential);
    let got = injective_test(s, &i, &cfg);
    let expected = match s.name().as_str() {
        "split" => Some(true),
        "max" => Some(i.is_zero()),
        _ => None,
    };
    if expected.is_some_and(|e| e != got) {
        return Sample::Fails(format!("injectivity of {i}: expected {}, got {got}", expected.unwrap()), Vec::new());
    }
    if s.name() == "split" {
        // f is a section iff Hom(f, A) is onto
        let x = s.context().class.random_object(rng, b);
        let f = match sample_inflation(s, rng, b) {
            Some(f) if rng.random_bool(0.5) => f,
            _ => random_hom_with(rng, &i, &x),
        };
        if s.is_inflation(&f) != hom_epi_characterization(&f, &[f.source().clone()]) {
            return Sample::Fails("section criterion disagrees".into(), named(&[("f", &f)]));
        }
    }
    Sample::Holds
}

fn stream(lemma: Lemma) -> u64 {
    // shares streams with the standalone checkers
    par::stream_tag(match lemma {
        Lemma::SectionDecomp => "wic",
        l => l.name(),
    })
}

fn run_sample(s: &ExactStructure, lemma: Lemma, seed: u64, index: usize, b: Bounds) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(par::sample_seed(seed, stream(lemma), index as u64));
    let rng = &mut rng;
    let from_witness = |w: Option<Witness>| w.map_or(Sample::Holds, |w| Sample::Fails(w.note, w.morphisms));
    match lemma {
        Lemma::Five => five(s, rng, b),
        Lemma::Nine => nine(s, rng, b),
        Lemma::Double => double(s, rng, b),
        Lemma::ThreeByThree => three(s, rng, b),
        Lemma::PushoutEquiv => pushout_equiv(s, rng, b, index % 2 == 0),
        Lemma::DeflSum => defl_sum(s, rng, b),
        Lemma::Obscure => from_witness(obscure_sample(s, rng, b)),
        Lemma::ConeAcyclic => cone(s, rng, b),
        Lemma::SectionDecomp => from_witness(wic_sample(rng, b)),
        Lemma::Injective => injective(s, rng, b),
    }
}

/// Runs `samples` seeded instances of `lemma` in `s`. Sections are always
/// decomposed in the maximal structure.
pub fn check_lemma(s: &ExactStructure, lemma: Lemma, config: &CheckConfig) -> AxiomReport {
    let b = config.bounds;
    let outcomes = par::map(config.execution, config.samples, |k| run_sample(s, lemma, config.seed, k, b));
    let structure = if lemma == Lemma::SectionDecomp { "max".to_string() } else { s.name() };
    let mut report = AxiomReport {
        check: lemma.name().into(),
        structure: structure.clone(),
        verdict: Verdict::Pass,
        samples: config.samples,
        fixtures: 0,
        vacuous: outcomes.iter().filter(|o| matches!(o, Sample::Vacuous)).count(),
        seed: config.seed,
        witness: None,
    };
    // the torsion fixture needs multiplication by 2 to be an inflation
    if let (Lemma::ThreeByThree, Ok(x)) = (lemma, torsion_three_by_three(s)) {
        report.fixtures = 1;
        if let Err(e) = three_by_three(s, &x) {
            report.verdict = Verdict::Fail;
            report.samples = 0;
            report.witness = Some(Witness {
                check: lemma.name().into(),
                structure,
                morphisms: conflation_roles(&x.row1, "i", "d"),
                note: e.to_string(),
                origin: None,
            });
            return report;
        }
    }
    let first = outcomes.into_iter().enumerate().find_map(|(k, o)| match o {
        Sample::Fails(n, m) => Some((k, n, m)),
        _ => None,
    });
    if let Some((k, note, morphisms)) = first {
        report.verdict = Verdict::Fail;
        report.samples = k + 1;
        report.witness = Some(Witness {
            check: lemma.name().into(),
            structure,
            morphisms,
            note,
            origin: Some(SampleOrigin { seed: config.seed, index: k, bounds: b }),
        });
    }
    report
}

/// Re-runs the sample a lemma witness came from.
pub fn replay_lemma(w: &Witness) -> Result<Outcome, ExactError> {
    let lemma: Lemma = w.check.parse()?;
    let s = ExactStructure::from_name(&w.structure)?;
    match w.origin {
        Some(o) => Ok(match run_sample(&s, lemma, o.seed, o.index, o.bounds) {
            Sample::Holds => Outcome::Holds,
            Sample::Vacuous => Outcome::Vacuous,
            Sample::Fails(note, extra) => Outcome::Fails { note, extra },
        }),
        None if lemma == Lemma::ThreeByThree => {
            let x = torsion_three_by_three(&s).map_err(|e| ExactError::Witness(e.to_string()))?;
            Ok(match three_by_three(&s, &x) {
                Ok(_) => Outcome::Holds,
                Err(e) => Outcome::Fails { note: e.to_string(), extra: Vec::new() },
            })
        }
        None => Err(ExactError::Witness("lemma witness without a sample origin".into())),
    }
}
