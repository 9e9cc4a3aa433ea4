//! Deformations of differential modules: the (r, v) encoding of derivations,
//! the derivation↔extension correspondence with Baer sums, jet-level
//! deformation lifting over Artinian local rings, exact gauge equivalence,
//! local trivializability, sharp obstruction classes, determinant
//! compatibility, and the endomorphism-ring check.

use crate::algebra::{
    laurent_expand, rat_int, Jet, MJet, Mat, MatQ, Pt, Rat, RatFunc, RowSpan,
};
use crate::artin::{ArtinLocalRing, RMatRF, SmallExtension};
use crate::cohomology::{expansion_center, local_operator_matrix, localize_form};
use crate::connection::{form_basis, ConnectionModule, FiltrationBasis};
use crate::errors::{Error, Result};
use num::traits::{One, Zero};

// ---------------------------------------------------------------------------
// Derivations and extensions
// ---------------------------------------------------------------------------

/// A degree-0 derivation with O-linear values, stored by its value r(t) on the
/// coordinate and its value v on ∂. Values on all other elements follow by the
/// Leibniz recursion and are never materialized.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationPair {
    pub r_t: Mat<RatFunc>,
    pub v: Mat<RatFunc>,
}

impl DerivationPair {
    /// Validates the compatibility [r(t), ∂] + [t, v] + r(∂t) = 0 on the
    /// generator t. With O-linear values [t, v] = 0 and r(1) = 0, so the
    /// condition reads ∂(r_t) + [N, r_t] = 0 exactly.
    pub fn new(e: &ConnectionModule, r_t: Mat<RatFunc>, v: Mat<RatFunc>) -> Result<Self> {
        if r_t.rows != e.n || r_t.cols != e.n || v.rows != e.n || v.cols != e.n {
            return Err(Error::Schema(
                "derivation components must be square of the module rank".into(),
            ));
        }
        let lhs = r_t.map(|f| f.derivative()).add(&e.nmat.commutator(&r_t));
        if !lhs.is_zero() {
            return Err(Error::Schema(
                "derivation pair violates the compatibility identity on t".into(),
            ));
        }
        Ok(DerivationPair { r_t, v })
    }

    pub fn add(&self, other: &DerivationPair) -> DerivationPair {
        DerivationPair {
            r_t: self.r_t.add(&other.r_t),
            v: self.v.add(&other.v),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r_t.is_zero() && self.v.is_zero()
    }
}

/// ζ(ρ): the derivation vanishing on O with value ρ on ∂.
pub fn zeta_map(e: &ConnectionModule, rho: Mat<RatFunc>) -> Result<DerivationPair> {
    DerivationPair::new(e, Mat::zero(e.n, e.n), rho)
}

/// The degree-0 Hochschild differential of an O-linear σ: the inner derivation
/// [·, σ], which vanishes on O and sends ∂ to ∂(σ) + [N, σ]. Equals
/// zeta_map(∂·σ) exactly.
pub fn hoch_diff0(e: &ConnectionModule, sigma: &Mat<RatFunc>) -> Result<DerivationPair> {
    let v = sigma
        .map(|f| f.derivative())
        .add(&e.nmat.commutator(sigma));
    zeta_map(e, v)
}

/// The extension F ⊕_s E of E by itself attached to a derivation s, with the
/// assembled rank-2n connection [[N, v], [0, N]].
#[derive(Clone, Debug)]
pub struct ExtensionModule {
    pub base: ConnectionModule,
    pub s: DerivationPair,
    pub total: ConnectionModule,
}

pub fn extension_from_derivation(
    e: &ConnectionModule,
    s: DerivationPair,
) -> Result<ExtensionModule> {
    let n = e.n;
    let mut big = Mat::<RatFunc>::zero(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            *big.at_mut(i, j) = e.nmat.at(i, j).clone();
            *big.at_mut(n + i, n + j) = e.nmat.at(i, j).clone();
            *big.at_mut(i, n + j) = s.v.at(i, j).clone();
        }
    }
    let total = ConnectionModule::new(2 * n, e.points.clone(), big)?;
    Ok(ExtensionModule {
        base: e.clone(),
        s,
        total,
    })
}

impl ExtensionModule {
    /// An O-linear σ with s = dσ when the extension splits, decided by one
    /// exact linear solve at the stable filtration level.
    pub fn trivialization(&self) -> Result<Option<Mat<RatFunc>>> {
        // principal derivations vanish on O, so a nonzero r_t is an obstruction
        if !self.s.r_t.is_zero() {
            return Ok(None);
        }
        let end = self.base.end();
        let b = end_bound(&end)?;
        end_solve(&end, self.base.n, b, &self.s.v)
    }

    pub fn is_trivial(&self) -> Result<bool> {
        Ok(self.trivialization()?.is_some())
    }
}

/// Baer sum: the extension attached to s₁ + s₂.
pub fn baer_sum(x1: &ExtensionModule, x2: &ExtensionModule) -> Result<ExtensionModule> {
    if x1.base != x2.base {
        return Err(Error::Schema("Baer summands must share the base module".into()));
    }
    extension_from_derivation(&x1.base, x1.s.add(&x2.s))
}

// ---------------------------------------------------------------------------
// Global End-module solves at the stable filtration level
// ---------------------------------------------------------------------------

fn end_bound(end: &ConnectionModule) -> Result<usize> {
    let residues = end.validate_fuchsian()?;
    Ok(end.saturation_bound(&residues))
}

/// Filtration level large enough to be past the saturation bound and to hold
/// all the supplied right-hand sides inside the level's 1-form basis.
fn end_adapted_level(end: &ConnectionModule, b: usize, forms: &[&Mat<RatFunc>]) -> usize {
    let finite = end.finite_points();
    let mut fin_need = 0usize;
    let mut poly_need = 0usize;
    for m in forms {
        for f in &m.data {
            for z in &finite {
                fin_need = fin_need.max(f.pole_order_at(z));
            }
            let dn = f.num.degree().unwrap_or(0);
            let dd = f.den.degree().unwrap_or(0);
            if dn > dd {
                poly_need = poly_need.max(dn - dd);
            }
        }
    }
    b.max(fin_need.saturating_sub(1)).max(poly_need + 1)
}

/// Solve ∂σ + [N, σ] = g for an O-linear n×n matrix σ, or None when g is not a
/// coboundary. Past the saturation bound the cokernel is stable, so the
/// finite-level verdict decides solvability over all of O.
fn end_solve(
    end: &ConnectionModule,
    n: usize,
    b: usize,
    g: &Mat<RatFunc>,
) -> Result<Option<Mat<RatFunc>>> {
    if g.is_zero() {
        return Ok(Some(Mat::zero(n, n)));
    }
    let d = end_adapted_level(end, b, &[g]);
    let finite = end.finite_points();
    let dom = FiltrationBasis::new(n * n, finite.clone(), d);
    let cod = form_basis(n * n, finite, d);
    let m = end.operator_matrix(&dom, &cod);
    let rhs = cod.coordinates(&g.data).ok_or_else(|| {
        Error::Internal("right-hand side escapes the adapted form basis".into())
    })?;
    match m.solve(&rhs) {
        None => Ok(None),
        Some(sol) => Ok(Some(Mat::new(n, n, dom.section_from_coords(&sol)))),
    }
}

/// Cohomology-class coordinates of a 1-form g in End coordinates, reduced
/// modulo the image of ∂ + ad N at a level adapted to g.
fn end_h1_class(end: &ConnectionModule, b: usize, g: &Mat<RatFunc>) -> Result<Vec<Rat>> {
    let d = end_adapted_level(end, b, &[g]);
    let finite = end.finite_points();
    let dom = FiltrationBasis::new(end.n, finite.clone(), d);
    let cod = form_basis(end.n, finite, d);
    let m = end.operator_matrix(&dom, &cod);
    let coords = cod.coordinates(&g.data).ok_or_else(|| {
        Error::Internal("1-form escapes the adapted form basis".into())
    })?;
    let span = RowSpan::from_rows(cod.dim(), (0..m.cols).map(|j| m.col(j)));
    let reduced = span.reduce(coords);
    let pivots: std::collections::BTreeSet<usize> = span.pivots().iter().copied().collect();
    Ok((0..cod.dim())
        .filter(|i| !pivots.contains(i))
        .map(|i| reduced[i].clone())
        .collect())
}

// ---------------------------------------------------------------------------
// Deformation jets over Artinian local rings
// ---------------------------------------------------------------------------

/// A deformation of E over an Artinian local ring R: the operator ∂ + N + μ
/// with μ a matrix over 𝔪_R ⊗ O.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationJet {
    pub base: ConnectionModule,
    pub ring: ArtinLocalRing,
    pub mu: RMatRF,
}

fn poles_within(f: &RatFunc, finite: &[Rat]) -> bool {
    let mut den = f.den.clone();
    for z in finite {
        let k = den.vanishing_order(z).unwrap_or(0);
        if k > 0 {
            let lin = crate::algebra::Poly::new(vec![-z.clone(), Rat::one()]);
            for _ in 0..k {
                let (q, r) = den.divrem(&lin);
                debug_assert!(r.is_zero());
                den = q;
            }
        }
    }
    den.degree().unwrap_or(0) == 0
}

/// Rings built by different constructors can present the same algebra; compare
/// the data that determines the multiplication.
fn ring_compatible(a: &ArtinLocalRing, b: &ArtinLocalRing) -> bool {
    a.vars == b.vars && a.basis == b.basis
}

impl DeformationJet {
    pub fn new(base: ConnectionModule, ring: ArtinLocalRing, mu: RMatRF) -> Result<Self> {
        if mu.n != base.n || mu.mats.len() != ring.dim() {
            return Err(Error::Schema("perturbation shape does not match".into()));
        }
        if !mu.in_maximal_ideal() {
            return Err(Error::Schema(
                "perturbation must reduce to 0 modulo the maximal ideal".into(),
            ));
        }
        let finite = base.finite_points();
        for m in &mu.mats {
            for f in &m.data {
                if !poles_within(f, &finite) {
                    return Err(Error::Schema(
                        "perturbation has a pole outside the singular set".into(),
                    ));
                }
            }
        }
        Ok(DeformationJet { base, ring, mu })
    }

    /// The trivial deformation over a ring.
    pub fn trivial(base: ConnectionModule, ring: ArtinLocalRing) -> Self {
        let mu = RMatRF::zero(&ring, base.n);
        DeformationJet { base, ring, mu }
    }

    /// Full connection matrix N + μ over R ⊗ O.
    pub fn operator(&self) -> RMatRF {
        RMatRF::from_constant(&self.ring, self.base.nmat.clone()).add(&self.mu)
    }

    /// Conjugation of the operator by exp(η): μ ↦ G(N+μ)G⁻¹ − (∂G)G⁻¹ − N.
    pub fn gauge_by(&self, eta: &RMatRF) -> Result<DeformationJet> {
        if !eta.in_maximal_ideal() {
            return Err(Error::Schema("gauge parameter must lie in the maximal ideal".into()));
        }
        let r = &self.ring;
        let g = eta.exp_nilpotent(r);
        let ginv = eta.neg().exp_nilpotent(r);
        let conj = gauge_operator(r, &g, &ginv, &self.operator());
        let mu = conj.sub(&RMatRF::from_constant(r, self.base.nmat.clone()));
        debug_assert!(mu.in_maximal_ideal());
        DeformationJet::new(self.base.clone(), self.ring.clone(), mu)
    }
}

/// G·M·G⁻¹ − (∂G)·G⁻¹ for a gauge G with supplied inverse.
fn gauge_operator(r: &ArtinLocalRing, g: &RMatRF, ginv: &RMatRF, m: &RMatRF) -> RMatRF {
    g.mul(r, m).mul(r, ginv).sub(&g.deriv().mul(r, ginv))
}

fn rep_to_matrix(n: usize, rep: &[RatFunc]) -> Mat<RatFunc> {
    Mat::new(n, n, rep.to_vec())
}

/// Tangent space: one jet ∂ + N + ε·μ_i over K[ε] per representative of the
/// first de Rham cohomology of End(E). Pairwise gauge-inequivalent.
pub fn first_order_basis(e: &ConnectionModule) -> Result<Vec<DeformationJet>> {
    let end = e.end();
    let (_, reps) = end.global_h1()?;
    let ring = ArtinLocalRing::truncated(vec!["eps".into()], 2);
    let mut out = Vec::new();
    for rep in reps {
        let mut mu = RMatRF::zero(&ring, e.n);
        mu.mats[1] = rep_to_matrix(e.n, &rep);
        out.push(DeformationJet::new(e.clone(), ring.clone(), mu)?);
    }
    Ok(out)
}

/// Lift a jet along a small extension. Lifts always exist (the governing
/// complex has no degree-2 part); coefficients on the new monomial are zero.
pub fn jet_lift(jet: &DeformationJet, pi: &SmallExtension) -> Result<DeformationJet> {
    if !ring_compatible(&pi.target, &jet.ring) {
        return Err(Error::Schema("small extension target does not match the jet ring".into()));
    }
    let mut mu = RMatRF::zero(&pi.source, jet.base.n);
    for (j, mono) in pi.target.basis.iter().enumerate() {
        let i = pi.source.basis.iter().position(|m| m == mono).unwrap();
        mu.mats[i] = jet.mu.mats[j].clone();
    }
    DeformationJet::new(jet.base.clone(), pi.source.clone(), mu)
}

/// Reduce a jet along a small extension (forget the kernel coefficient).
pub fn jet_reduce(jet: &DeformationJet, pi: &SmallExtension) -> Result<DeformationJet> {
    if !ring_compatible(&pi.source, &jet.ring) {
        return Err(Error::Schema("small extension source does not match the jet ring".into()));
    }
    let mut mu = RMatRF::zero(&pi.target, jet.base.n);
    for (j, mono) in pi.target.basis.iter().enumerate() {
        let i = pi.source.basis.iter().position(|m| m == mono).unwrap();
        mu.mats[j] = jet.mu.mats[i].clone();
    }
    DeformationJet::new(jet.base.clone(), pi.target.clone(), mu)
}

/// Determinant jet: rank-1 deformation of det(E) with perturbation tr(μ).
pub fn jet_det(jet: &DeformationJet) -> Result<DeformationJet> {
    let base = jet.base.det();
    let mu = RMatRF {
        n: 1,
        mats: jet
            .mu
            .mats
            .iter()
            .map(|m| Mat::new(1, 1, vec![m.trace()]))
            .collect(),
    };
    DeformationJet::new(base, jet.ring.clone(), mu)
}

// ---------------------------------------------------------------------------
// Gauge equivalence of jets
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum GaugeOutcome {
    /// η with exp(η)·(∂+N+μ′)·exp(−η) = ∂+N+μ exactly.
    Equivalent(RMatRF),
    /// No gauge exists; per failing monomial, the cohomology-class coordinates
    /// of the unresolvable residual.
    Inequivalent { certificates: Vec<(usize, Vec<Rat>)> },
}

/// Decide whether b is gauge equivalent to a (conjugating b's operator into
/// a's), stage by stage along the 𝔪-adic filtration; each stage is one exact
/// global de Rham solve on End(E).
pub fn jet_gauge_equivalent(a: &DeformationJet, b: &DeformationJet) -> Result<GaugeOutcome> {
    if a.base != b.base || !ring_compatible(&a.ring, &b.ring) {
        return Err(Error::Schema("jets must share the base module and the ring".into()));
    }
    let r = &a.ring;
    let n = a.base.n;
    let end = a.base.end();
    let bnd = end_bound(&end)?;
    let target = a.operator();
    let m0 = b.operator();
    let id = RMatRF::from_constant(r, Mat::identity(n));
    let mut g = id.clone();
    let mut ginv = id;
    for d in 1..r.order {
        let mcur = gauge_operator(r, &g, &ginv, &m0);
        let mut zstage = RMatRF::zero(r, n);
        let mut failures: Vec<(usize, Vec<Rat>)> = Vec::new();
        for idx in 1..r.dim() {
            if r.monomial_degree(idx) != d {
                continue;
            }
            let rhs = mcur.mats[idx].sub(&target.mats[idx]);
            if rhs.is_zero() {
                continue;
            }
            match end_solve(&end, n, bnd, &rhs)? {
                Some(zeta) => {
                    zstage.mats[idx] = zeta;
                }
                None => {
                    failures.push((idx, end_h1_class(&end, bnd, &rhs)?));
                }
            }
        }
        if !failures.is_empty() {
            return Ok(GaugeOutcome::Inequivalent {
                certificates: failures,
            });
        }
        if !zstage.is_zero() {
            g = zstage.exp_nilpotent(r).mul(r, &g);
            ginv = ginv.mul(r, &zstage.neg().exp_nilpotent(r));
        }
    }
    let residual = gauge_operator(r, &g, &ginv, &m0).sub(&target);
    if !residual.is_zero() {
        return Err(Error::Internal("staged gauge solve left a residual".into()));
    }
    Ok(GaugeOutcome::Equivalent(g.log_unipotent(r)))
}

// ---------------------------------------------------------------------------
// Graded matrix jets: one Laurent matrix jet per ring basis monomial
// ---------------------------------------------------------------------------

type LJet = Vec<MJet>;

const BIG_PREC: i64 = 1 << 40;

fn lj_zero(r: &ArtinLocalRing, center: &Pt, n: usize, prec: i64) -> LJet {
    vec![MJet::zero(center.clone(), n, prec); r.dim()]
}

fn lj_identity(r: &ArtinLocalRing, center: &Pt, n: usize, prec: i64) -> LJet {
    let mut out = lj_zero(r, center, n, BIG_PREC);
    out[0] = MJet::identity(center.clone(), n, prec);
    out
}

/// Largest finite precision carried by the coordinates (identity jets must not
/// materialize unbounded coefficient lists).
fn lj_working_prec(a: &LJet) -> i64 {
    a.iter()
        .map(|m| m.prec)
        .filter(|p| *p < BIG_PREC)
        .max()
        .unwrap_or(256)
}

fn lj_all_zero(a: &LJet) -> bool {
    a.iter().all(|m| m.is_zero())
}

fn lj_add(a: &LJet, b: &LJet) -> LJet {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn lj_sub(a: &LJet, b: &LJet) -> LJet {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn lj_neg(a: &LJet) -> LJet {
    a.iter().map(|x| x.neg()).collect()
}

fn lj_scale(a: &LJet, c: &Rat) -> LJet {
    a.iter().map(|x| x.scale(c)).collect()
}

fn lj_deriv(a: &LJet) -> LJet {
    a.iter().map(|x| x.deriv()).collect()
}

fn lj_mul(r: &ArtinLocalRing, a: &LJet, b: &LJet) -> LJet {
    let n = a[0].n;
    let center = a[0].center.clone();
    let mut out = lj_zero(r, &center, n, BIG_PREC);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            if let Some(k) = r.product_index(i, j) {
                out[k] = out[k].add(&x.mul(y));
            }
        }
    }
    out
}

/// exp of a graded jet with zero constant coordinate.
fn lj_exp(r: &ArtinLocalRing, z: &LJet) -> LJet {
    assert!(z[0].is_zero(), "exp needs a maximal-ideal element");
    let n = z[0].n;
    let center = z[0].center.clone();
    let mut acc = lj_identity(r, &center, n, lj_working_prec(z));
    let mut pow = z.clone();
    let mut k = 1usize;
    while !lj_all_zero(&pow) {
        let c = Rat::one() / crate::algebra::rat::factorial(k);
        acc = lj_add(&acc, &lj_scale(&pow, &c));
        pow = lj_mul(r, &pow, z);
        k += 1;
    }
    acc
}

fn lj_inv_unipotent(r: &ArtinLocalRing, g: &LJet) -> LJet {
    let n = g[0].n;
    let center = g[0].center.clone();
    let wp = lj_working_prec(g);
    let mut nn = g.clone();
    nn[0] = nn[0].sub(&MJet::identity(center.clone(), n, wp));
    let neg = lj_neg(&nn);
    let mut acc = lj_identity(r, &center, n, wp);
    let mut pow = neg.clone();
    while !lj_all_zero(&pow) {
        acc = lj_add(&acc, &pow);
        pow = lj_mul(r, &pow, &neg);
    }
    acc
}

fn lj_log(r: &ArtinLocalRing, g: &LJet) -> LJet {
    let n = g[0].n;
    let center = g[0].center.clone();
    let wp = lj_working_prec(g);
    let mut nn = g.clone();
    nn[0] = nn[0].sub(&MJet::identity(center.clone(), n, wp));
    let mut acc = lj_zero(r, &center, n, BIG_PREC);
    let mut pow = nn.clone();
    let mut k = 1i64;
    while !lj_all_zero(&pow) {
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        let c = sign / rat_int(k);
        acc = lj_add(&acc, &lj_scale(&pow, &c));
        pow = lj_mul(r, &pow, &nn);
        k += 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Local trivialization and the sharp obstruction
// ---------------------------------------------------------------------------

/// Matrix of functions in the local coordinate at z: identity at finite points,
/// the 1-form substitution −s⁻²·M(1/s) at ∞.
fn localized(m: &Mat<RatFunc>, z: &Pt) -> Mat<RatFunc> {
    match z {
        Pt::Finite(_) => m.clone(),
        Pt::Infinity => m.map(|f| f.infinity_form_transform()),
    }
}

/// Solve (∂ + ad N)ζ = rhs in truncated matrix jets at z; None = obstructed.
fn local_end_solve(
    end: &ConnectionModule,
    z: &Pt,
    b: usize,
    rhs: &MJet,
) -> Result<Option<MJet>> {
    let n = rhs.n;
    let n2 = n * n;
    let center = expansion_center(z);
    if rhs.is_zero() {
        return Ok(Some(MJet::zero(center, n, rhs.prec)));
    }
    let prec = rhs.prec;
    let v0 = (rhs.val + 1).min(-(b as i64) - 1);
    if prec - v0 < 4 {
        return Err(Error::PrecisionExhausted(
            "local solve window collapsed below the minimum width".into(),
        ));
    }
    let m = local_operator_matrix(end, z, v0, prec);
    let width = (prec - v0) as usize;
    let mut rv = vec![Rat::zero(); n2 * width];
    for j in (v0 - 1)..=(prec - 2) {
        let row_base = ((j - (v0 - 1)) as usize) * n2;
        let coeff = rhs.coeff(j);
        for i in 0..n {
            for jj in 0..n {
                rv[row_base + i * n + jj] = coeff.at(i, jj).clone();
            }
        }
    }
    match m.solve(&rv) {
        None => Ok(None),
        Some(sol) => {
            let coeffs: Vec<MatQ> = (v0..prec)
                .map(|k| {
                    MatQ::from_fn(n, n, |i, jj| {
                        sol[((k - v0) as usize) * n2 + i * n + jj].clone()
                    })
                })
                .collect();
            Ok(Some(MJet::new(center, n, v0, prec, coeffs)))
        }
    }
}

/// Operator jets N + μ per ring monomial, in the local coordinate at z.
fn local_operator_jets(jet: &DeformationJet, z: &Pt, prec: i64) -> LJet {
    let r = &jet.ring;
    let center = expansion_center(z);
    let mut m0 = lj_zero(r, &center, jet.base.n, prec);
    m0[0] = MJet::expand_function(&localized(&jet.base.nmat, z), &center, prec);
    for idx in 1..r.dim() {
        if !jet.mu.mats[idx].is_zero() {
            m0[idx] = MJet::expand_function(&localized(&jet.mu.mats[idx], z), &center, prec);
        }
    }
    m0
}

/// Precision budget for staged local solves at z.
fn local_precision(jet: &DeformationJet, z: &Pt, b: usize) -> i64 {
    let center = match expansion_center(z) {
        Pt::Finite(c) => c,
        Pt::Infinity => unreachable!(),
    };
    let mut pole: i64 = 1;
    let mats = std::iter::once(&jet.base.nmat).chain(jet.mu.mats.iter());
    for m in mats {
        for f in &localized(m, z).data {
            pole = pole.max(f.pole_order_at(&center) as i64);
        }
    }
    2 * (b as i64) + 10 + (jet.ring.order as i64) * (pole + b as i64 + 3)
}

#[derive(Clone, Debug)]
pub enum LocalTrivOutcome {
    /// τ_z per ring monomial with exp(τ_z) conjugating ∂+N+μ to ∂+N at z up to
    /// the working precision.
    Trivialized(Vec<MJet>),
    /// First unresolvable stage: monomial index and the residue matrix of the
    /// obstructing coefficient.
    Obstructed { monomial: usize, residue: MatQ },
}

/// Conjugate ∂+N+μ to ∂+N in truncated Laurent jets at one point, stage by
/// stage along the 𝔪-adic filtration.
pub fn jet_local_trivialize(jet: &DeformationJet, z: &Pt) -> Result<LocalTrivOutcome> {
    let r = &jet.ring;
    let n = jet.base.n;
    let end = jet.base.end();
    let b = end_bound(&end)?;
    let center = expansion_center(z);
    let prec0 = local_precision(jet, z, b);
    let m0 = local_operator_jets(jet, z, prec0);
    let mut g = lj_identity(r, &center, n, prec0);
    let mut ginv = g.clone();
    let mut guaranteed = prec0 - 2;
    for d in 1..r.order {
        let mcur = lj_sub(
            &lj_mul(r, &lj_mul(r, &g, &m0), &ginv),
            &lj_mul(r, &lj_deriv(&g), &ginv),
        );
        let mut zstage = lj_zero(r, &center, n, BIG_PREC);
        let mut touched = false;
        for idx in 1..r.dim() {
            if r.monomial_degree(idx) != d || mcur[idx].is_zero() {
                continue;
            }
            match local_end_solve(&end, z, b, &mcur[idx])? {
                None => {
                    return Ok(LocalTrivOutcome::Obstructed {
                        monomial: idx,
                        residue: mcur[idx].residue(),
                    })
                }
                Some(zeta) => {
                    guaranteed = guaranteed.min(mcur[idx].prec - 2);
                    zstage[idx] = zeta;
                    touched = true;
                }
            }
        }
        if touched {
            g = lj_mul(r, &lj_exp(r, &zstage), &g);
            ginv = lj_mul(r, &ginv, &lj_exp(r, &lj_neg(&zstage)));
        }
    }
    // verify the residual up to the precision the staged solves guarantee
    let mcur = lj_sub(
        &lj_mul(r, &lj_mul(r, &g, &m0), &ginv),
        &lj_mul(r, &lj_deriv(&g), &ginv),
    );
    for idx in 1..r.dim() {
        let tp = guaranteed.min(mcur[idx].prec);
        if tp < 2 {
            return Err(Error::PrecisionExhausted(
                "trivialization residual has no verifiable window".into(),
            ));
        }
        if !mcur[idx].truncate(tp).is_zero() {
            return Err(Error::PrecisionExhausted(
                "trivialization residual is nonzero within the verified window".into(),
            ));
        }
    }
    Ok(LocalTrivOutcome::Trivialized(lj_log(r, &g)))
}

/// Result of the sharp obstruction computation along a small extension.
#[derive(Clone, Debug)]
pub struct SharpObstruction {
    /// Trace-residue pairing of the identity with the defect class; always 0.
    pub pairing_with_one: Rat,
    pub vanishes: bool,
    /// A trivializable lift of the jet, produced when the class vanishes.
    pub corrected_lift: Option<DeformationJet>,
}

/// Obstruction to lifting a locally trivializable jet along a small extension,
/// measured by the per-point defects of lifted local trivializations.
pub fn sharp_obstruction(jet: &DeformationJet, pi: &SmallExtension) -> Result<SharpObstruction> {
    if !ring_compatible(&pi.target, &jet.ring) {
        return Err(Error::Schema("small extension target does not match the jet ring".into()));
    }
    let source = &pi.source;
    let n = jet.base.n;
    let n2 = n * n;
    let lifted = jet_lift(jet, pi)?;
    let end = jet.base.end();
    let b = end_bound(&end)?;
    let (h1, reps) = end.global_h1()?;

    // per-point defect: the kernel coefficient of the lifted, locally
    // trivialized operator
    let mut defects: Vec<(Pt, MJet)> = Vec::new();
    for z in &jet.base.points {
        let tau = match jet_local_trivialize(jet, z)? {
            LocalTrivOutcome::Trivialized(t) => t,
            LocalTrivOutcome::Obstructed { .. } => {
                return Err(Error::HypothesisViolated(format!(
                    "jet is not locally trivializable at {}",
                    z.label()
                )))
            }
        };
        let center = expansion_center(z);
        let mut tau_src = lj_zero(source, &center, n, BIG_PREC);
        for (j, mono) in pi.target.basis.iter().enumerate() {
            let i = source.basis.iter().position(|m| m == mono).unwrap();
            tau_src[i] = tau[j].clone();
        }
        let g = lj_exp(source, &tau_src);
        let ginv = lj_inv_unipotent(source, &g);
        let prec0 = local_precision(&lifted, z, b);
        let m0 = local_operator_jets(&lifted, z, prec0);
        let mcur = lj_sub(
            &lj_mul(source, &lj_mul(source, &g, &m0), &ginv),
            &lj_mul(source, &lj_deriv(&g), &ginv),
        );
        defects.push((z.clone(), mcur[pi.kernel_index].clone()));
    }

    // annihilation under the trace pairing with the identity
    let mut pairing = Rat::zero();
    for (_, s) in &defects {
        pairing += s.trace_jet().residue();
    }
    if !pairing.is_zero() {
        return Err(Error::Internal(
            "trace pairing of the identity with the defect class failed to vanish".into(),
        ));
    }

    // zero test: the class vanishes iff the defects are a global class plus
    // local coboundaries, one joint affine solve over (c, ζ_z)
    struct Block {
        v0: i64,
        prec: i64,
        opm: MatQ,
        rep_jets: Vec<Vec<Jet>>,
        defect: MJet,
    }
    let mut blocks = Vec::new();
    for (z, s) in &defects {
        let center = expansion_center(z);
        let prec_z = s.prec.min(local_precision(&lifted, z, b));
        let mut minval = if s.is_zero() { 0 } else { s.val };
        let mut rep_jets = Vec::new();
        for rep in &reps {
            let loc = localize_form(rep, z);
            let jets: Vec<Jet> = loc
                .iter()
                .map(|f| laurent_expand(f, &center, prec_z))
                .collect();
            for j in &jets {
                if !j.is_zero() {
                    minval = minval.min(j.val);
                }
            }
            rep_jets.push(jets);
        }
        let v0 = (minval + 1).min(-(b as i64) - 1);
        if prec_z - v0 < 4 {
            return Err(Error::PrecisionExhausted(
                "defect window collapsed below the minimum width".into(),
            ));
        }
        let opm = local_operator_matrix(&end, z, v0, prec_z);
        blocks.push(Block {
            v0,
            prec: prec_z,
            opm,
            rep_jets,
            defect: s.clone(),
        });
    }
    let total_rows: usize = blocks.iter().map(|bl| bl.opm.rows).sum();
    let jet_cols: usize = blocks.iter().map(|bl| bl.opm.cols).sum();
    let mut joint = MatQ::zero(total_rows, h1 + jet_cols);
    let mut rhs = vec![Rat::zero(); total_rows];
    let mut row_off = 0usize;
    let mut col_off = h1;
    for bl in &blocks {
        let width = (bl.prec - bl.v0) as usize;
        for wj in 0..width {
            let order = bl.v0 - 1 + wj as i64;
            let coeff = bl.defect.coeff(order);
            for rcomp in 0..n2 {
                let row = row_off + wj * n2 + rcomp;
                for (ci, jets) in bl.rep_jets.iter().enumerate() {
                    *joint.at_mut(row, ci) = jets[rcomp].coeff(order);
                }
                rhs[row] = coeff.at(rcomp / n, rcomp % n).clone();
            }
        }
        for i in 0..bl.opm.rows {
            for j in 0..bl.opm.cols {
                if !bl.opm.at(i, j).is_zero() {
                    *joint.at_mut(row_off + i, col_off + j) = bl.opm.at(i, j).clone();
                }
            }
        }
        row_off += bl.opm.rows;
        col_off += bl.opm.cols;
    }
    match joint.solve(&rhs) {
        None => Ok(SharpObstruction {
            pairing_with_one: pairing,
            vanishes: false,
            corrected_lift: None,
        }),
        Some(sol) => {
            let mut correction = Mat::<RatFunc>::zero(n, n);
            for (ci, rep) in reps.iter().enumerate() {
                if sol[ci].is_zero() {
                    continue;
                }
                let m = rep_to_matrix(n, rep).map(|f| f.scale(&sol[ci]));
                correction = correction.add(&m);
            }
            let mut mu = lifted.mu.clone();
            mu.mats[pi.kernel_index] = mu.mats[pi.kernel_index].sub(&correction);
            let corrected = DeformationJet::new(jet.base.clone(), source.clone(), mu)?;
            Ok(SharpObstruction {
                pairing_with_one: pairing,
                vanishes: true,
                corrected_lift: Some(corrected),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Endomorphism ring check
// ---------------------------------------------------------------------------

/// For an irreducible base, the endomorphisms of the deformed module over R
/// must be exactly R·identity: the commutant kernel has dimension dim R.
pub fn endo_check(jet: &DeformationJet) -> Result<bool> {
    let e = &jet.base;
    let end = e.end();
    let h0 = end.global_h0()?.len();
    if h0 != 1 {
        return Err(Error::HypothesisViolated(format!(
            "endomorphism check requires an irreducible base (dim of horizontal End sections = {})",
            h0
        )));
    }
    let b = end_bound(&end)?;
    let n = e.n;
    let n2 = n * n;
    let finite = e.finite_points();
    let mut p_mu = 0usize;
    let mut q_mu = 0usize;
    for m in &jet.mu.mats {
        for f in &m.data {
            for z in &finite {
                p_mu = p_mu.max(f.pole_order_at(z));
            }
            let dn = f.num.degree().unwrap_or(0);
            let dd = f.den.degree().unwrap_or(0);
            if dn > dd {
                q_mu = q_mu.max(dn - dd);
            }
        }
    }
    let d = b.max(1);
    let dom = FiltrationBasis::new(n2, finite.clone(), d);
    let cod = FiltrationBasis::with_caps(n2, finite, d + p_mu.max(1), d + q_mu);
    let rdim = jet.ring.dim();
    let mut big = MatQ::zero(rdim * cod.dim(), rdim * dom.dim());
    for l in 0..rdim {
        for jb in 0..dom.dim() {
            let mut coords = vec![Rat::zero(); dom.dim()];
            coords[jb] = Rat::one();
            let phi = Mat::new(n, n, dom.section_from_coords(&coords));
            let col = l * dom.dim() + jb;
            // de Rham term at monomial l
            let dphi = phi.map(|f| f.derivative()).add(&e.nmat.commutator(&phi));
            let cc = cod.coordinates(&dphi.data).ok_or_else(|| {
                Error::Internal("operator image escapes the commutant codomain".into())
            })?;
            for (i, v) in cc.into_iter().enumerate() {
                if !v.is_zero() {
                    *big.at_mut(l * cod.dim() + i, col) = v;
                }
            }
            // bracket terms [μ_k, Φ_l] at monomial k·l
            for k in 1..rdim {
                let Some(mm) = jet.ring.product_index(k, l) else {
                    continue;
                };
                if jet.mu.mats[k].is_zero() {
                    continue;
                }
                let br = jet.mu.mats[k].commutator(&phi);
                let cc = cod.coordinates(&br.data).ok_or_else(|| {
                    Error::Internal("bracket image escapes the commutant codomain".into())
                })?;
                for (i, v) in cc.into_iter().enumerate() {
                    if !v.is_zero() {
                        let cur = big.at(mm * cod.dim() + i, col).clone() + v;
                        *big.at_mut(mm * cod.dim() + i, col) = cur;
                    }
                }
            }
        }
    }
    Ok(big.kernel_basis().len() == rdim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rf_parse};
    use crate::artin::RingElement;

    fn rf(s: &str) -> RatFunc {
        rf_parse(s).unwrap()
    }

    fn rank1(nentry: &str, pts: &[&str]) -> ConnectionModule {
        let points: Vec<Pt> = pts
            .iter()
            .map(|s| {
                if *s == "inf" {
                    Pt::Infinity
                } else {
                    Pt::Finite(crate::algebra::rat_from_string(s).unwrap())
                }
            })
            .collect();
        ConnectionModule::new(1, points, Mat::from_fn(1, 1, |_, _| rf(nentry))).unwrap()
    }

    fn rank2(entries: [&str; 4], pts: &[&str]) -> ConnectionModule {
        let points: Vec<Pt> = pts
            .iter()
            .map(|s| {
                if *s == "inf" {
                    Pt::Infinity
                } else {
                    Pt::Finite(crate::algebra::rat_from_string(s).unwrap())
                }
            })
            .collect();
        ConnectionModule::new(
            2,
            points,
            Mat::from_fn(2, 2, |i, j| rf(entries[2 * i + j])),
        )
        .unwrap()
    }

    #[test]
    fn zeta_pairs_validate() {
        let e = rank2(["(1/7)/t", "1/t", "0", "(2/7)/t"], &["0", "inf"]);
        assert!(zeta_map(&e, Mat::zero(2, 2)).unwrap().is_zero());
        let p = zeta_map(&e, Mat::identity(2)).unwrap();
        assert!(p.r_t.is_zero());
        let rho = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { rf("t + 1/t") } else { rf("0") });
        assert!(zeta_map(&e, rho).is_ok());
    }

    #[test]
    fn derivation_compatibility_enforced() {
        let e = rank2(["0", "0", "0", "0"], &["0", "inf"]);
        // r_t = I is horizontal; r_t = diag(t, 0) has nonzero derivative
        assert!(DerivationPair::new(&e, Mat::identity(2), Mat::zero(2, 2)).is_ok());
        let bad = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { rf("t") } else { rf("0") });
        assert!(DerivationPair::new(&e, bad, Mat::zero(2, 2)).is_err());
    }

    #[test]
    fn hoch_diff_is_zeta_of_de_rham_differential() {
        let e = rank2(["(1/7)/t", "1/t", "0", "(2/7)/t"], &["0", "inf"]);
        let sigma = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => rf("1/t"),
            (0, 1) => rf("t"),
            (1, 0) => rf("2"),
            _ => rf("0"),
        });
        let d = hoch_diff0(&e, &sigma).unwrap();
        // independent expansion of the de Rham differential ∂σ + Nσ − σN
        let mut oracle = sigma.map(|f| f.derivative());
        oracle = oracle.add(&e.nmat.matmul(&sigma)).sub(&sigma.matmul(&e.nmat));
        assert_eq!(d.v, oracle);
        assert!(d.r_t.is_zero());
        // central σ maps to zero
        let central = hoch_diff0(&e, &Mat::identity(2)).unwrap();
        assert!(central.is_zero());
    }

    #[test]
    fn extension_trivial_round_trip() {
        let e = rank2(["(1/7)/t", "1/t", "0", "(2/7)/t"], &["0", "inf"]);
        let sigma = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => rf("1/t"),
            (1, 0) => rf("3"),
            _ => rf("0"),
        });
        let s = hoch_diff0(&e, &sigma).unwrap();
        let x = extension_from_derivation(&e, s.clone()).unwrap();
        assert_eq!(x.total.n, 4);
        let sig2 = x.trivialization().unwrap().expect("coboundary splits");
        // any splitting witnesses the same derivation
        assert_eq!(hoch_diff0(&e, &sig2).unwrap(), s);

        let zero = extension_from_derivation(&e, zeta_map(&e, Mat::zero(2, 2)).unwrap()).unwrap();
        assert!(zero.is_trivial().unwrap());
    }

    #[test]
    fn extension_nontrivial_from_h1_representative() {
        let e = rank1("0", &["0", "1", "inf"]);
        // 1/t spans a nonzero class of the trivial rank-1 module
        let rho = Mat::from_fn(1, 1, |_, _| rf("1/t"));
        let x = extension_from_derivation(&e, zeta_map(&e, rho).unwrap()).unwrap();
        assert!(!x.is_trivial().unwrap());
        // a derivative is a coboundary
        let cob = Mat::from_fn(1, 1, |_, _| rf("1/(t-1)").derivative());
        let y = extension_from_derivation(&e, zeta_map(&e, cob).unwrap()).unwrap();
        let sigma = y.trivialization().unwrap().expect("derivative splits");
        assert_eq!(sigma.at(0, 0).derivative(), *y.s.v.at(0, 0));
    }

    #[test]
    fn baer_sum_cancels_and_respects_units() {
        let e = rank1("0", &["0", "1", "inf"]);
        let rho = Mat::from_fn(1, 1, |_, _| rf("1/t"));
        let x = extension_from_derivation(&e, zeta_map(&e, rho.clone()).unwrap()).unwrap();
        let xneg = extension_from_derivation(&e, zeta_map(&e, rho.neg()).unwrap()).unwrap();
        assert!(baer_sum(&x, &xneg).unwrap().is_trivial().unwrap());
        // trivial + x is in the class of x (difference splits)
        let zero = extension_from_derivation(&e, zeta_map(&e, Mat::zero(1, 1)).unwrap()).unwrap();
        let summed = baer_sum(&zero, &x).unwrap();
        assert_eq!(summed.is_trivial().unwrap(), x.is_trivial().unwrap());
        let diff = baer_sum(&summed, &xneg).unwrap();
        assert!(diff.is_trivial().unwrap());
    }

    #[test]
    fn first_order_basis_counts_match_h1() {
        let e = rank1("0", &["0", "1", "inf"]);
        let jets = first_order_basis(&e).unwrap();
        assert_eq!(jets.len(), 2);
        for j in &jets {
            assert!(j.mu.in_maximal_ideal());
            assert!(!j.mu.mats[1].is_zero());
        }
        let e2 = rank1("0", &["0", "inf"]);
        assert_eq!(first_order_basis(&e2).unwrap().len(), 1);
    }

    #[test]
    fn jet_lift_round_trips() {
        let e = rank1("0", &["0", "inf"]);
        let jets = first_order_basis(&e).unwrap();
        let r3 = ArtinLocalRing::truncated(vec!["eps".into()], 3);
        let chain = r3.small_extension_chain();
        // chain[0] kills eps^2: its target is K[eps]/(eps^2)
        let pi = &chain[0];
        let lifted = jet_lift(&jets[0], pi).unwrap();
        assert_eq!(lifted.ring.dim(), 3);
        assert!(lifted.mu.mats[2].is_zero());
        let back = jet_reduce(&lifted, pi).unwrap();
        assert_eq!(back.mu.mats, jets[0].mu.mats);
        // zero lifts to zero
        let z = DeformationJet::trivial(e.clone(), pi.target.clone());
        assert!(jet_lift(&z, pi).unwrap().mu.is_zero());
    }

    #[test]
    fn gauge_round_trip_recovers_the_jet() {
        let e = rank2(["(1/7)/t", "1/t", "0", "(2/7)/t"], &["0", "inf"]);
        let ring = ArtinLocalRing::truncated(vec!["e".into()], 3);
        let mut mu = RMatRF::zero(&ring, 2);
        mu.mats[1] = Mat::from_fn(2, 2, |i, j| if i == 1 && j == 0 { rf("1/t") } else { rf("0") });
        let a = DeformationJet::new(e.clone(), ring.clone(), mu).unwrap();
        let mut eta = RMatRF::zero(&ring, 2);
        eta.mats[1] = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { rf("1/t") } else { rf("0") });
        eta.mats[2] = Mat::from_fn(2, 2, |i, j| if i == j { rf("2") } else { rf("0") });
        let b = a.gauge_by(&eta).unwrap();
        match jet_gauge_equivalent(&a, &b).unwrap() {
            GaugeOutcome::Equivalent(w) => {
                assert_eq!(b.gauge_by(&w).unwrap().mu, a.mu);
            }
            GaugeOutcome::Inequivalent { .. } => panic!("conjugate jets must be equivalent"),
        }
        // a jet is equivalent to itself with witness 0
        match jet_gauge_equivalent(&a, &a).unwrap() {
            GaugeOutcome::Equivalent(w) => assert!(w.is_zero()),
            _ => panic!("identity case"),
        }
    }

    #[test]
    fn distinct_first_order_jets_are_inequivalent() {
        let e = rank1("0", &["0", "1", "inf"]);
        let jets = first_order_basis(&e).unwrap();
        match jet_gauge_equivalent(&jets[0], &jets[1]).unwrap() {
            GaugeOutcome::Inequivalent { certificates } => {
                assert_eq!(certificates.len(), 1);
                assert!(certificates[0].1.iter().any(|c| !c.is_zero()));
            }
            GaugeOutcome::Equivalent(_) => panic!("distinct classes must be inequivalent"),
        }
    }

    #[test]
    fn local_trivialization_examples() {
        let e = rank1("0", &["0", "1", "inf"]);
        let ring = ArtinLocalRing::truncated(vec!["eps".into()], 2);
        // μ = ε/(t−1): no residue at 0, trivializable there
        let mut mu = RMatRF::zero(&ring, 1);
        mu.mats[1] = Mat::from_fn(1, 1, |_, _| rf("1/(t-1)"));
        let jet = DeformationJet::new(e.clone(), ring.clone(), mu).unwrap();
        match jet_local_trivialize(&jet, &Pt::Finite(rat_int(0))).unwrap() {
            LocalTrivOutcome::Trivialized(tau) => {
                // ∂τ = μ locally: expansion −t − t²/2 − ...
                assert_eq!(*tau[1].coeff(1).at(0, 0), rat_int(-1));
                assert_eq!(*tau[1].coeff(2).at(0, 0), rat(-1, 2));
            }
            LocalTrivOutcome::Obstructed { .. } => panic!("log-free primitive must exist"),
        }
        // μ = ε/t has a residue at 0: obstructed with certificate ε·1
        let mut mu2 = RMatRF::zero(&ring, 1);
        mu2.mats[1] = Mat::from_fn(1, 1, |_, _| rf("1/t"));
        let jet2 = DeformationJet::new(e.clone(), ring.clone(), mu2).unwrap();
        match jet_local_trivialize(&jet2, &Pt::Finite(rat_int(0))).unwrap() {
            LocalTrivOutcome::Obstructed { monomial, residue } => {
                assert_eq!(monomial, 1);
                assert_eq!(*residue.at(0, 0), rat_int(1));
            }
            LocalTrivOutcome::Trivialized(_) => panic!("residue obstructs a Laurent primitive"),
        }
        // μ = 0 trivializes with τ = 0
        let jet3 = DeformationJet::trivial(e, ring);
        match jet_local_trivialize(&jet3, &Pt::Infinity).unwrap() {
            LocalTrivOutcome::Trivialized(tau) => assert!(tau.iter().all(|m| m.is_zero())),
            _ => panic!("zero perturbation is trivializable"),
        }
    }

    #[test]
    fn sharp_obstruction_rank_one_vanishes() {
        let e = rank1("0", &["0", "1", "inf"]);
        let ring = ArtinLocalRing::truncated(vec!["eps".into()], 2);
        // residue-free class: trivializable at every point
        let mut mu = RMatRF::zero(&ring, 1);
        mu.mats[1] = Mat::from_fn(1, 1, |_, _| rf("1/t^2"));
        let jet = DeformationJet::new(e.clone(), ring, mu).unwrap();
        let r3 = ArtinLocalRing::truncated(vec!["eps".into()], 3);
        let pi = &r3.small_extension_chain()[0];
        let obs = sharp_obstruction(&jet, pi).unwrap();
        assert!(obs.pairing_with_one.is_zero());
        assert!(obs.vanishes);
        let lift = obs.corrected_lift.expect("vanishing class yields a lift");
        assert_eq!(jet_reduce(&lift, pi).unwrap().mu.mats[1], jet.mu.mats[1]);
        // the corrected lift is locally trivializable everywhere
        for z in &lift.base.points.clone() {
            match jet_local_trivialize(&lift, z).unwrap() {
                LocalTrivOutcome::Trivialized(_) => {}
                LocalTrivOutcome::Obstructed { .. } => {
                    panic!("corrected lift must stay trivializable")
                }
            }
        }
    }

    #[test]
    fn jet_det_trace_and_reduction() {
        let e = rank2(["(1/7)/t", "1/t", "0", "(2/7)/t"], &["0", "inf"]);
        let ring = ArtinLocalRing::truncated(vec!["e".into()], 3);
        // traceless μ gives the zero determinant jet
        let mut mu = RMatRF::zero(&ring, 2);
        mu.mats[1] = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => rf("1/t"),
            (1, 1) => rf("-1/t"),
            _ => rf("0"),
        });
        let jet = DeformationJet::new(e.clone(), ring.clone(), mu).unwrap();
        assert!(jet_det(&jet).unwrap().mu.is_zero());
        // det commutes with reduction along a small extension
        let mut mu2 = RMatRF::zero(&ring, 2);
        mu2.mats[1] = Mat::from_fn(2, 2, |i, j| if i == j { rf("1/t") } else { rf("0") });
        mu2.mats[2] = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { rf("1/(t-0)") } else { rf("0") });
        let jet2 = DeformationJet::new(e.clone(), ring.clone(), mu2).unwrap();
        let pi = &ring.small_extension_chain()[0];
        let lhs = jet_det(&jet_reduce(&jet2, pi).unwrap()).unwrap();
        let rhs = jet_reduce(&jet_det(&jet2).unwrap(), pi).unwrap();
        assert_eq!(lhs.mu.mats, rhs.mu.mats);
        // det of a gauged jet is the det-jet gauged by the trace
        let mut eta = RMatRF::zero(&ring, 2);
        eta.mats[1] = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { rf("t") } else { rf("1") });
        let gauged = jet2.gauge_by(&eta).unwrap();
        let eta_tr = RMatRF {
            n: 1,
            mats: eta.mats.iter().map(|m| Mat::new(1, 1, vec![m.trace()])).collect(),
        };
        let det_gauged = jet_det(&gauged).unwrap();
        let gauged_det = jet_det(&jet2).unwrap().gauge_by(&eta_tr).unwrap();
        assert_eq!(det_gauged.mu, gauged_det.mu);
    }

    #[test]
    fn endo_check_counts_the_ring() {
        let e = crate::corpus::random_rank2_irreducible(&mut crate::corpus::seeded_rng(17), 4);
        // irreducibility precondition
        let end = e.end();
        assert_eq!(end.global_h0().unwrap().len(), 1);
        let ring = ArtinLocalRing::truncated(vec!["eps".into()], 2);
        let trivial = DeformationJet::trivial(e.clone(), ring.clone());
        assert!(endo_check(&trivial).unwrap());
        for jet in first_order_basis(&e).unwrap() {
            assert!(endo_check(&jet).unwrap());
        }
        // reducible base is rejected
        let red = rank2(["(1/3)/t", "0", "0", "(2/3)/t"], &["0", "inf"]);
        let tr = DeformationJet::trivial(red, ring);
        assert!(matches!(endo_check(&tr), Err(Error::HypothesisViolated(_))));
        let _ = RingElement::zero(&ArtinLocalRing::truncated(vec![], 1));
    }

    #[test]
    fn smoothness_lifts_to_order_five() {
        let e = rank1("0", &["0", "inf"]);
        let r5 = ArtinLocalRing::truncated(vec!["eps".into()], 5);
        let chain = r5.small_extension_chain();
        // start from the first-order jet presented over the chain's lowest ring
        let jets = first_order_basis(&e).unwrap();
        let mut current = jets[0].clone();
        // walk the chain upward, starting from the step whose target matches
        for step in chain.iter().rev() {
            if ring_compatible(&step.target, &current.ring) {
                current = jet_lift(&current, step).unwrap();
            }
        }
        assert_eq!(current.ring.dim(), 5);
        for step in r5.small_extension_chain() {
            // reductions stay valid jets the whole way down
            current = jet_reduce(&current, &step).unwrap();
        }
        assert_eq!(current.ring.dim(), 1);
    }
}
