//! The additive category of finitely generated abelian groups.
//!
//! Objects are presentations `ℤ^m / im(R)`; morphisms act on generators and
//! are checked for well-definedness on construction. Kernels and cokernels
//! come back in standard form: one generator per non-unit invariant factor,
//! with a diagonal relation matrix.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::intlin::{column_lattice_basis, smith_normal_form, solve_integer, solve_with, IntLinError, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FgAbError {
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("action matrix has shape {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("action does not respect the relations of the source")]
    NotWellDefined,
    #[error("morphism does not factor through the given cokernel (not liftable)")]
    NotLiftable,
    #[error("morphism does not factor through the given kernel (not restrictable)")]
    NotRestrictable,
    #[error(transparent)]
    IntLin(#[from] IntLinError),
}

struct Presentation {
    gens: usize,
    relations: Mat,
    /// Moduli of the normal coordinates: the non-unit invariant factors in
    /// divisibility order, then one zero per free summand.
    moduli: Vec<BigInt>,
    /// Rows of `U` picking out the normal coordinates (`moduli.len() × gens`).
    to_normal: Mat,
    /// Columns of `U⁻¹` for the same coordinates (`gens × moduli.len()`).
    from_normal: Mat,
    /// Per-generator moduli when every relation is a multiple of a single generator.
    diagonal: Option<Vec<BigInt>>,
}

/// A finitely generated abelian group given by a presentation.
#[derive(Clone)]
pub struct FgAb(Arc<Presentation>);

impl FgAb {
    /// `ℤ^gens / column span of relations`.
    pub fn new(gens: usize, relations: Mat) -> Result<Self, FgAbError> {
        if relations.rows() != gens {
            return Err(FgAbError::Shape { expected: (gens, relations.cols()), found: relations.shape() });
        }
        let snf = smith_normal_form(&relations);
        let keep: Vec<usize> = (0..gens).filter(|&i| !snf.diag(i).is_one()).collect();
        let moduli = keep.iter().map(|&i| snf.diag(i)).collect();
        let to_normal = snf.u.select_rows(&keep);
        let from_normal = snf.u_inv.select_cols(&keep);
        let diagonal = diagonal_moduli(gens, &relations);
        Ok(FgAb(Arc::new(Presentation { gens, relations, moduli, to_normal, from_normal, diagonal })))
    }

    /// `⊕ ℤ/dᵢ` with one generator per entry; `0` means a free summand.
    pub fn from_factors(factors: &[BigInt]) -> Self {
        let gens = factors.len();
        let cols: Vec<usize> = (0..gens).filter(|&i| !factors[i].is_zero()).collect();
        let mut rel = Mat::zeros(gens, cols.len());
        for (k, &i) in cols.iter().enumerate() {
            rel.set(i, k, factors[i].abs());
        }
        FgAb::new(gens, rel).expect("diagonal presentation is always valid")
    }

    pub fn from_orders(factors: &[i64]) -> Self {
        FgAb::from_factors(&factors.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn zero() -> Self {
        FgAb::from_orders(&[])
    }

    pub fn integers() -> Self {
        FgAb::from_orders(&[0])
    }

    pub fn cyclic(n: i64) -> Self {
        FgAb::from_orders(&[n])
    }

    pub fn gens(&self) -> usize {
        self.0.gens
    }

    pub fn relations(&self) -> &Mat {
        &self.0.relations
    }

    /// Invariant factors `d₁ | … | d_k` (all `> 1`) followed by zeros for free summands.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.0.moduli
    }

    pub fn rank(&self) -> usize {
        self.0.moduli.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.0.moduli.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.moduli.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_torsion_free(&self) -> bool {
        self.0.moduli.iter().all(Zero::is_zero)
    }

    /// Isomorphism of groups (as opposed to `==`, which compares presentations).
    pub fn isomorphic(&self, other: &FgAb) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    /// The standard presentation of the same isomorphism class.
    pub fn standard(&self) -> FgAb {
        FgAb::from_factors(&self.0.moduli)
    }

    pub fn is_standard(&self) -> bool {
        *self == self.standard()
    }

    /// The isomorphism onto [`FgAb::standard`].
    pub fn to_standard(&self) -> Hom {
        Hom::from_parts(self.clone(), self.standard(), self.0.to_normal.clone())
    }

    /// The inverse of [`FgAb::to_standard`].
    pub fn from_standard(&self) -> Hom {
        Hom::from_parts(self.standard(), self.clone(), self.0.from_normal.clone())
    }

    /// Whether every column of `m` (a `gens × c` matrix) lies in the relation lattice.
    pub fn in_relation_span(&self, m: &Mat) -> bool {
        debug_assert_eq!(m.rows(), self.gens());
        let coords = &self.0.to_normal * m;
        (0..coords.rows()).all(|k| {
            let e = &self.0.moduli[k];
            coords.row(k).iter().all(|x| if e.is_zero() { x.is_zero() } else { x.is_multiple_of(e) })
        })
    }

    /// Reduces columns modulo the relations where that is cheap (diagonal presentations).
    fn reduce(&self, m: Mat) -> Mat {
        let Some(diag) = &self.0.diagonal else { return m };
        let mut m = m;
        for (r, e) in diag.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            for c in 0..m.cols() {
                let x = m.get(r, c).mod_floor(e);
                m.set(r, c, x);
            }
        }
        m
    }

    /// Canonical coordinates of the columns of `m`: normal coordinates reduced
    /// into `[0, dᵢ)` on torsion coordinates.
    pub fn normal_coordinates(&self, m: &Mat) -> Mat {
        let mut coords = &self.0.to_normal * m;
        for k in 0..coords.rows() {
            let e = &self.0.moduli[k];
            if e.is_zero() {
                continue;
            }
            for c in 0..coords.cols() {
                let x = coords.get(k, c).mod_floor(e);
                coords.set(k, c, x);
            }
        }
        coords
    }

    /// The group order, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.0.moduli.iter().product())
    }

    /// All elements as generator columns, when the group is finite and has
    /// at most `limit` elements.
    pub fn elements(&self, limit: usize) -> Option<Vec<Mat>> {
        let order = self.order()?;
        if order > BigInt::from(limit) {
            return None;
        }
        let moduli: Vec<u64> = self.0.moduli.iter().map(|d| d.try_into().unwrap()).collect();
        let mut out = Vec::new();
        let mut digits = vec![0u64; moduli.len()];
        loop {
            let coords = Mat::from_i64(moduli.len(), 1, &digits.iter().map(|&x| x as i64).collect::<Vec<_>>());
            out.push(&self.0.from_normal * &coords);
            let mut k = 0;
            loop {
                if k == digits.len() {
                    return Some(out);
                }
                digits[k] += 1;
                if digits[k] < moduli[k] {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    /// Biproduct presentation (block diagonal relations).
    pub fn direct_sum(a: &FgAb, b: &FgAb) -> FgAb {
        FgAb::new(a.gens() + b.gens(), a.relations().block_diag(b.relations()))
            .expect("block-diagonal presentation is valid")
    }

    pub fn injection_first(a: &FgAb, b: &FgAb) -> Hom {
        let m = Mat::identity(a.gens()).vcat(&Mat::zeros(b.gens(), a.gens()));
        Hom::from_parts(a.clone(), FgAb::direct_sum(a, b), m)
    }

    pub fn injection_second(a: &FgAb, b: &FgAb) -> Hom {
        let m = Mat::zeros(a.gens(), b.gens()).vcat(&Mat::identity(b.gens()));
        Hom::from_parts(b.clone(), FgAb::direct_sum(a, b), m)
    }

    pub fn projection_first(a: &FgAb, b: &FgAb) -> Hom {
        let m = Mat::identity(a.gens()).hcat(&Mat::zeros(a.gens(), b.gens()));
        Hom::from_parts(FgAb::direct_sum(a, b), a.clone(), m)
    }

    pub fn projection_second(a: &FgAb, b: &FgAb) -> Hom {
        let m = Mat::zeros(b.gens(), a.gens()).hcat(&Mat::identity(b.gens()));
        Hom::from_parts(FgAb::direct_sum(a, b), b.clone(), m)
    }
}

fn diagonal_moduli(gens: usize, relations: &Mat) -> Option<Vec<BigInt>> {
    let mut moduli = vec![BigInt::zero(); gens];
    for c in 0..relations.cols() {
        let mut support = (0..gens).filter(|&r| !relations.get(r, c).is_zero());
        let Some(r) = support.next() else { continue };
        if support.next().is_some() {
            return None;
        }
        moduli[r] = moduli[r].gcd(relations.get(r, c));
    }
    Some(moduli)
}

impl PartialEq for FgAb {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.gens == other.0.gens && self.0.relations == other.0.relations)
    }
}

impl Eq for FgAb {}

impl Hash for FgAb {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.gens.hash(state);
        self.0.relations.hash(state);
    }
}

impl fmt::Display for FgAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .moduli
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FgAb {
    /// Summands in generator order when the presentation is diagonal (so a
    /// matrix acting on generators can be read off), else the iso type.
    pub fn describe(&self) -> String {
        let rel = self.relations();
        let mut parts = Vec::with_capacity(self.gens());
        for r in 0..self.gens() {
            let nz: Vec<usize> = (0..rel.cols()).filter(|&c| !rel.get(r, c).is_zero()).collect();
            match nz.as_slice() {
                [] => parts.push("Z".to_string()),
                [c] if (0..self.gens()).all(|q| q == r || rel.get(q, *c).is_zero()) => {
                    let d = rel.get(r, *c).abs();
                    parts.push(if d.is_one() { "0".to_string() } else { format!("Z/{d}") });
                }
                _ => return format!("<{} gens> = {self}", self.gens()),
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for FgAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAb({self}; gens={}, rel={:?})", self.gens(), self.relations())
    }
}

/// A morphism of presented groups, acting on generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hom {
    source: FgAb,
    target: FgAb,
    action: Mat,
}

impl Hom {
    /// Checked constructor: shape and well-definedness on relations.
    pub fn new(source: FgAb, target: FgAb, action: Mat) -> Result<Self, FgAbError> {
        let expected = (target.gens(), source.gens());
        if action.shape() != expected {
            return Err(FgAbError::Shape { expected, found: action.shape() });
        }
        if !target.in_relation_span(&(&action * source.relations())) {
            return Err(FgAbError::NotWellDefined);
        }
        let action = target.reduce(action);
        Ok(Hom { source, target, action })
    }

    /// Unchecked constructor for actions that are well defined by construction.
    pub(crate) fn from_parts(source: FgAb, target: FgAb, action: Mat) -> Self {
        debug_assert_eq!(action.shape(), (target.gens(), source.gens()));
        debug_assert!(target.in_relation_span(&(&action * source.relations())));
        let action = target.reduce(action);
        Hom { source, target, action }
    }

    pub fn from_i64(source: &FgAb, target: &FgAb, entries: &[i64]) -> Result<Self, FgAbError> {
        let expected = (target.gens(), source.gens());
        if entries.len() != expected.0 * expected.1 {
            return Err(FgAbError::Shape { expected, found: (entries.len(), 1) });
        }
        Hom::new(source.clone(), target.clone(), Mat::from_i64(expected.0, expected.1, entries))
    }

    pub fn identity(a: &FgAb) -> Hom {
        Hom { source: a.clone(), target: a.clone(), action: Mat::identity(a.gens()) }
    }

    pub fn zero(source: &FgAb, target: &FgAb) -> Hom {
        Hom { source: source.clone(), target: target.clone(), action: Mat::zeros(target.gens(), source.gens()) }
    }

    /// Multiplication by `k` on `a`.
    pub fn scalar(a: &FgAb, k: i64) -> Hom {
        Hom::from_parts(a.clone(), a.clone(), Mat::identity(a.gens()).scale(&BigInt::from(k)))
    }

    pub fn source(&self) -> &FgAb {
        &self.source
    }

    pub fn target(&self) -> &FgAb {
        &self.target
    }

    pub fn action(&self) -> &Mat {
        &self.action
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Hom) -> Result<Hom, FgAbError> {
        if first.target != self.source {
            return Err(FgAbError::ObjectMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, first.source, first.target
            )));
        }
        Ok(Hom::from_parts(first.source.clone(), self.target.clone(), &self.action * &first.action))
    }

    fn check_parallel(&self, other: &Hom) -> Result<(), FgAbError> {
        if self.source != other.source || self.target != other.target {
            return Err(FgAbError::ObjectMismatch(format!(
                "{} -> {} is not parallel to {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Hom) -> Result<Hom, FgAbError> {
        self.check_parallel(other)?;
        Ok(Hom::from_parts(self.source.clone(), self.target.clone(), &self.action + &other.action))
    }

    pub fn try_sub(&self, other: &Hom) -> Result<Hom, FgAbError> {
        self.check_parallel(other)?;
        Ok(Hom::from_parts(self.source.clone(), self.target.clone(), &self.action - &other.action))
    }

    pub fn negate(&self) -> Hom {
        Hom::from_parts(self.source.clone(), self.target.clone(), -&self.action)
    }

    /// Equality of morphisms: the difference of actions lands in the target relations.
    pub fn equals(&self, other: &Hom) -> Result<bool, FgAbError> {
        self.check_parallel(other)?;
        Ok(self.target.in_relation_span(&(&self.action - &other.action)))
    }

    pub fn is_zero(&self) -> bool {
        self.target.in_relation_span(&self.action)
    }

    /// Action in the target's canonical normal coordinates; equal morphisms
    /// have equal canonical actions.
    pub fn canonical_action(&self) -> Mat {
        self.target.normal_coordinates(&self.action)
    }

    /// `[f; g]: X → A ⊕ B`.
    pub fn stack(f: &Hom, g: &Hom) -> Result<Hom, FgAbError> {
        if f.source != g.source {
            return Err(FgAbError::ObjectMismatch("stacked morphisms need a common source".into()));
        }
        Ok(Hom::from_parts(f.source.clone(), FgAb::direct_sum(&f.target, &g.target), f.action.vcat(&g.action)))
    }

    /// `[f, g]: A ⊕ B → Y`.
    pub fn juxtapose(f: &Hom, g: &Hom) -> Result<Hom, FgAbError> {
        if f.target != g.target {
            return Err(FgAbError::ObjectMismatch("juxtaposed morphisms need a common target".into()));
        }
        Ok(Hom::from_parts(FgAb::direct_sum(&f.source, &g.source), f.target.clone(), f.action.hcat(&g.action)))
    }

    /// `f ⊕ g: A ⊕ B → A' ⊕ B'`.
    pub fn direct_sum(f: &Hom, g: &Hom) -> Hom {
        Hom::from_parts(
            FgAb::direct_sum(&f.source, &g.source),
            FgAb::direct_sum(&f.target, &g.target),
            f.action.block_diag(&g.action),
        )
    }
}

impl fmt::Debug for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom({} -> {}; {:?})", self.source, self.target, self.action)
    }
}

/// `g ∘ f`.
pub fn compose(g: &Hom, f: &Hom) -> Result<Hom, FgAbError> {
    g.after(f)
}

pub fn identity(a: &FgAb) -> Hom {
    Hom::identity(a)
}

pub fn hom_equal(f: &Hom, g: &Hom) -> Result<bool, FgAbError> {
    f.equals(g)
}

/// Kernel object with its inclusion.
pub fn kernel(f: &Hom) -> (FgAb, Hom) {
    let a = f.source();
    let b = f.target();
    // x ↦ f(x) ∈ im R_B  ⇔  (x, y) ∈ ker [M | R_B]
    let system = f.action().hcat(b.relations());
    let snf = smith_normal_form(&system);
    let sol = solve_with(&snf, &Mat::zeros(system.rows(), 0));
    let projected = sol.kernel.block(0, 0, a.gens(), sol.kernel.cols());
    let basis = column_lattice_basis(&projected);
    // coordinates of R_A in the basis; unique since the basis has full column rank
    let z = solve_integer(&basis, a.relations())
        .expect("shapes agree")
        .particular
        .expect("source relations lie in the kernel lattice");
    let raw = FgAb::new(basis.cols(), z).expect("valid presentation");
    let k = raw.standard();
    let incl = Hom::from_parts(k.clone(), a.clone(), &basis * &raw.0.from_normal);
    (k, incl)
}

/// Cokernel object with its projection.
pub fn cokernel(f: &Hom) -> (FgAb, Hom) {
    let b = f.target();
    let raw = FgAb::new(b.gens(), b.relations().hcat(f.action())).expect("valid presentation");
    let c = raw.standard();
    let proj = Hom::from_parts(b.clone(), c.clone(), raw.0.to_normal.clone());
    (c, proj)
}

/// Image of `f` as a subobject of the target (kernel of the cokernel).
pub fn image(f: &Hom) -> (FgAb, Hom) {
    let (_, proj) = cokernel(f);
    kernel(&proj)
}

/// Biproduct with its structure maps.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: FgAb,
    pub inj_first: Hom,
    pub inj_second: Hom,
    pub proj_first: Hom,
    pub proj_second: Hom,
}

pub fn biproduct(a: &FgAb, b: &FgAb) -> Biproduct {
    Biproduct {
        sum: FgAb::direct_sum(a, b),
        inj_first: FgAb::injection_first(a, b),
        inj_second: FgAb::injection_second(a, b),
        proj_first: FgAb::projection_first(a, b),
        proj_second: FgAb::projection_second(a, b),
    }
}

/// Pushout of `i: A → B` along `f: A → A'`, formed as the cokernel of `[i; −f]`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: FgAb,
    /// `g: B → P`
    pub leg_from_source: Hom,
    /// `i': A' → P`
    pub leg_from_other: Hom,
    /// `[g, i']: B ⊕ A' → P`
    pub projection: Hom,
}

impl Pushout {
    pub(crate) fn from_projection(projection: Hom, b: &FgAb, a2: &FgAb) -> Pushout {
        let leg_from_source = projection.after(&FgAb::injection_first(b, a2)).expect("composable");
        let leg_from_other = projection.after(&FgAb::injection_second(b, a2)).expect("composable");
        Pushout { object: projection.target().clone(), leg_from_source, leg_from_other, projection }
    }

    /// The unique `w: P → E` with `w∘g = u` and `w∘i' = v`.
    pub fn mediate(&self, u: &Hom, v: &Hom) -> Result<Hom, FgAbError> {
        let pair = Hom::juxtapose(u, v)?;
        extend_along(&self.projection, &pair).ok_or(FgAbError::NotLiftable)
    }
}

pub fn pushout(i: &Hom, f: &Hom) -> Result<Pushout, FgAbError> {
    if i.source() != f.source() {
        return Err(FgAbError::ObjectMismatch("pushout needs a common source".into()));
    }
    let diff = Hom::stack(i, &f.negate())?;
    let (_, proj) = cokernel(&diff);
    Ok(Pushout::from_projection(proj, i.target(), f.target()))
}

/// Pullback of `d: B → C` along `h: C' → C`, formed as the kernel of `[d, −h]`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: FgAb,
    /// `Q → B`
    pub leg_to_source: Hom,
    /// `Q → C'`
    pub leg_to_other: Hom,
    /// `Q → B ⊕ C'`
    pub inclusion: Hom,
}

impl Pullback {
    /// The unique `w: X → Q` with both legs recovering `u: X → B`, `v: X → C'`.
    pub fn mediate(&self, u: &Hom, v: &Hom) -> Result<Hom, FgAbError> {
        let pair = Hom::stack(u, v)?;
        restrict_through_kernel(&self.inclusion, &pair)
    }
}

pub fn pullback(d: &Hom, h: &Hom) -> Result<Pullback, FgAbError> {
    if d.target() != h.target() {
        return Err(FgAbError::ObjectMismatch("pullback needs a common target".into()));
    }
    let diff = Hom::juxtapose(d, &h.negate())?;
    let (q, incl) = kernel(&diff);
    let b = d.source();
    let c2 = h.source();
    let leg_to_source = FgAb::projection_first(b, c2).after(&incl)?;
    let leg_to_other = FgAb::projection_second(b, c2).after(&incl)?;
    Ok(Pullback { object: q, leg_to_source, leg_to_other, inclusion: incl })
}

/// Finds `w: X → Y` with `w ∘ a = b`, for `a: Z → X`, `b: Z → Y`.
///
/// Works one normal coordinate of `Y` at a time; each coordinate is an
/// integer system that also enforces well-definedness on `X`.
pub fn extend_along(a: &Hom, b: &Hom) -> Option<Hom> {
    if a.source() != b.source() {
        return None;
    }
    let x = a.target();
    let y = b.target();
    let constraints = a.action().hcat(x.relations()).transpose();
    let rhs_all = &y.0.to_normal * b.action();
    let n_con = constraints.rows();
    let mut rows = Mat::zeros(y.0.moduli.len(), x.gens());
    let mut cache: Vec<(BigInt, crate::intlin::SmithDecomposition)> = Vec::new();
    for (k, e) in y.0.moduli.iter().enumerate() {
        let mut rhs = Mat::zeros(n_con, 1);
        for j in 0..a.source().gens() {
            rhs.set(j, 0, rhs_all.get(k, j).clone());
        }
        let idx = match cache.iter().position(|(m, _)| m == e) {
            Some(i) => i,
            None => {
                let system = if e.is_zero() {
                    constraints.clone()
                } else {
                    constraints.hcat(&Mat::identity(n_con).scale(e))
                };
                cache.push((e.clone(), smith_normal_form(&system)));
                cache.len() - 1
            }
        };
        let sol = solve_with(&cache[idx].1, &rhs).particular?;
        for c in 0..x.gens() {
            rows.set(k, c, sol.get(c, 0).clone());
        }
    }
    let w = &y.0.from_normal * &rows;
    Hom::new(x.clone(), y.clone(), w).ok()
}

/// The unique `w` with `w ∘ d = v`, where `d` is a cokernel.
pub fn lift_through_cokernel(d: &Hom, v: &Hom) -> Result<Hom, FgAbError> {
    if d.source() != v.source() {
        return Err(FgAbError::ObjectMismatch("lift needs a common source".into()));
    }
    extend_along(d, v).ok_or(FgAbError::NotLiftable)
}

/// Finds a well-defined `w: X → B` with `d ∘ w = u`, for `d: B → Y`, `u: X → Y`.
///
/// One system per normal coordinate of `X`: the image of that generator
/// must hit `u` modulo `R_Y`, and its multiple by the coordinate's modulus
/// must land in `R_B`.
pub fn factor_through(d: &Hom, u: &Hom) -> Option<Hom> {
    if d.target() != u.target() {
        return None;
    }
    let b = d.source();
    let x = u.source();
    let y = d.target();
    let (nb, ny) = (b.gens(), y.gens());
    let (rb, ry) = (b.relations().cols(), y.relations().cols());
    let images = u.action() * &x.0.from_normal;
    let mut cols = Mat::zeros(nb, x.0.moduli.len());
    let mut cache: Vec<(BigInt, crate::intlin::SmithDecomposition)> = Vec::new();
    for (j, e) in x.0.moduli.iter().enumerate() {
        let idx = match cache.iter().position(|(m, _)| m == e) {
            Some(i) => i,
            None => {
                let top = d.action().hcat(&-y.relations());
                let system = if e.is_zero() {
                    top
                } else {
                    let top = top.hcat(&Mat::zeros(ny, rb));
                    let bottom = Mat::identity(nb).scale(e).hcat(&Mat::zeros(nb, ry)).hcat(&-b.relations());
                    top.vcat(&bottom)
                };
                cache.push((e.clone(), smith_normal_form(&system)));
                cache.len() - 1
            }
        };
        let snf = &cache[idx].1;
        let mut rhs = Mat::zeros(snf.source_shape().0, 1);
        for r in 0..ny {
            rhs.set(r, 0, images.get(r, j).clone());
        }
        let sol = solve_with(snf, &rhs).particular?;
        for r in 0..nb {
            cols.set(r, j, sol.get(r, 0).clone());
        }
    }
    let w = &cols * &x.0.to_normal;
    Hom::new(x.clone(), b.clone(), w).ok()
}

/// The unique `δ` with `incl ∘ δ = u`, where `incl` is a kernel (a monomorphism).
pub fn restrict_through_kernel(incl: &Hom, u: &Hom) -> Result<Hom, FgAbError> {
    if incl.target() != u.target() {
        return Err(FgAbError::ObjectMismatch("restriction needs a common target".into()));
    }
    factor_through(incl, u).ok_or(FgAbError::NotRestrictable)
}

/// Mono/epi/iso classification, with a verified two-sided inverse for isomorphisms.
#[derive(Clone, Debug)]
pub struct Classification {
    pub is_mono: bool,
    pub is_epi: bool,
    pub inverse: Option<Hom>,
}

impl Classification {
    pub fn is_iso(&self) -> bool {
        self.is_mono && self.is_epi
    }
}

pub fn is_mono(f: &Hom) -> bool {
    kernel(f).0.is_zero()
}

pub fn is_epi(f: &Hom) -> bool {
    cokernel(f).0.is_zero()
}

pub fn classify(f: &Hom) -> Classification {
    let is_mono = is_mono(f);
    let is_epi = is_epi(f);
    let inverse = if is_mono && is_epi {
        let inv = extend_along(f, &Hom::identity(f.source())).expect("isomorphisms are invertible");
        debug_assert!(f.after(&inv).unwrap().equals(&Hom::identity(f.target())).unwrap());
        Some(inv)
    } else {
        None
    };
    Classification { is_mono, is_epi, inverse }
}

pub fn inverse(f: &Hom) -> Option<Hom> {
    classify(f).inverse
}

/// Shape bounds for random objects: free rank, number of cyclic torsion
/// summands, and the largest cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Bounds {
    pub max_rank: usize,
    pub max_torsion: usize,
    pub max_exponent: u64,
}

impl Bounds {
    pub const fn new(max_rank: usize, max_torsion: usize, max_exponent: u64) -> Self {
        Bounds { max_rank, max_torsion, max_exponent }
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(2, 2, 16)
    }
}

/// Random object from a seed.
pub fn random_object(bounds: Bounds, seed: u64) -> FgAb {
    random_object_with(&mut ChaCha8Rng::seed_from_u64(seed), bounds, |_| true)
}

/// Random hom from a seed.
pub fn random_hom(a: &FgAb, b: &FgAb, seed: u64) -> Hom {
    random_hom_with(&mut ChaCha8Rng::seed_from_u64(seed), a, b)
}

/// Random diagonal presentation; cyclic orders are drawn from `2..=max_exponent`
/// subject to `accept_order`.
pub fn random_object_with<R: Rng>(rng: &mut R, bounds: Bounds, accept_order: impl Fn(u64) -> bool) -> FgAb {
    let rank = rng.random_range(0..=bounds.max_rank);
    let torsion = if bounds.max_exponent >= 2 { rng.random_range(0..=bounds.max_torsion) } else { 0 };
    let admissible: Vec<u64> = (2..=bounds.max_exponent.max(1)).filter(|&n| accept_order(n)).collect();
    let mut factors = Vec::new();
    if !admissible.is_empty() {
        for _ in 0..torsion {
            factors.push(BigInt::from(admissible[rng.random_range(0..admissible.len())]));
        }
    }
    factors.extend(std::iter::repeat(BigInt::zero()).take(rank));
    FgAb::from_factors(&factors)
}

/// Random well-defined hom, drawn in normal coordinates where
/// `Hom(ℤ/a, ℤ/b)` consists of the multiples of `b / gcd(a, b)`.
pub fn random_hom_with<R: Rng>(rng: &mut R, a: &FgAb, b: &FgAb) -> Hom {
    let ma = a.invariant_factors();
    let mb = b.invariant_factors();
    let mut m = Mat::zeros(mb.len(), ma.len());
    for (k, bk) in mb.iter().enumerate() {
        for (j, aj) in ma.iter().enumerate() {
            let g = aj.gcd(bk);
            let step = if g.is_zero() { BigInt::one() } else { bk / &g };
            if step.is_zero() {
                continue;
            }
            let coeff = if bk.is_zero() {
                BigInt::from(rng.random_range(-2i64..=2))
            } else {
                let choices: u64 = (bk / &step).try_into().unwrap_or(u64::MAX);
                BigInt::from(rng.random_range(0..choices))
            };
            m.set(k, j, step * coeff);
        }
    }
    let normal = Hom::from_parts(a.standard(), b.standard(), m);
    let t = a.to_standard();
    let s = b.from_standard();
    s.after(&normal.after(&t).unwrap()).unwrap()
}

/// Generators of the group `Hom(a, b)`: in normal coordinates, one per entry,
/// each the smallest admissible multiple `b_k / gcd(a_j, b_k)`.
pub fn hom_generators(a: &FgAb, b: &FgAb) -> Vec<Hom> {
    let ma = a.invariant_factors();
    let mb = b.invariant_factors();
    let t = a.to_standard();
    let s = b.from_standard();
    let mut out = Vec::new();
    for (k, bk) in mb.iter().enumerate() {
        for (j, aj) in ma.iter().enumerate() {
            let g = aj.gcd(bk);
            let step = if g.is_zero() { BigInt::one() } else { bk / &g };
            if step.is_zero() {
                continue;
            }
            let mut m = Mat::zeros(mb.len(), ma.len());
            m.set(k, j, step);
            let normal = Hom::from_parts(a.standard(), b.standard(), m);
            out.push(s.after(&normal.after(&t).unwrap()).unwrap());
        }
    }
    out
}

/// Universal-property check that the square `g∘i = i'∘f` is a pushout.
pub fn is_pushout_square(i: &Hom, f: &Hom, i2: &Hom, g: &Hom) -> Result<bool, FgAbError> {
    if !g.after(i)?.equals(&i2.after(f)?)? {
        return Ok(false);
    }
    let po = pushout(i, f)?;
    let w = po.mediate(g, i2)?;
    Ok(classify(&w).is_iso())
}

/// Universal-property check that the square `g∘i = i'∘f` is a pullback.
pub fn is_pullback_square(i: &Hom, f: &Hom, i2: &Hom, g: &Hom) -> Result<bool, FgAbError> {
    if !g.after(i)?.equals(&i2.after(f)?)? {
        return Ok(false);
    }
    let pb = pullback(g, i2)?;
    let w = pb.mediate(i, f)?;
    Ok(classify(&w).is_iso())
}
