//! Compactly supported and parabolic cohomology: dimension reports through the
//! index identities, certified parabolic classes via local jet primitives, the
//! duality pairing on parabolic H¹ of End-type modules, restriction invariance,
//! and the rank-2 rigidity classifier.

use crate::algebra::{laurent_expand, Jet, MatQ, Pt, Rat, RatFunc, RowSpan};
use crate::connection::{ConnectionModule, ResidueData};
use crate::errors::{Error, Result};
use num::traits::Zero;

/// All cohomological dimensions of a Fuchsian module, mutually consistent.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport {
    pub rank: usize,
    pub points: Vec<String>,
    pub h0: usize,
    pub h1: usize,
    pub h1c: usize,
    pub h1p: usize,
    pub h2c: usize,
    pub euler_open: i64,
    pub euler_compact: i64,
    /// per-point (label, Artin conductor)
    pub conductors: Vec<(String, usize)>,
    /// per-point (label, dim of local horizontal sections)
    pub local_h0: Vec<(String, usize)>,
}

/// A certified parabolic class: coordinates in the representative basis of
/// global H¹, the 1-form itself, and a local primitive jet at every point.
#[derive(Clone, Debug)]
pub struct H1pClass {
    pub coeffs: Vec<Rat>,
    pub form: Vec<RatFunc>,
    pub primitives: Vec<(Pt, Vec<Jet>)>,
}

/// Number of jet coefficients kept on either side of the pole window.
pub fn default_precision(b: usize) -> i64 {
    2 * b as i64 + 10
}

/// Localize a global 1-form coefficient vector at a point: identity at finite
/// points, the dt = −ds/s² substitution at ∞.
pub fn localize_form(form: &[RatFunc], z: &Pt) -> Vec<RatFunc> {
    match z {
        Pt::Finite(_) => form.to_vec(),
        Pt::Infinity => form.iter().map(|f| f.infinity_form_transform()).collect(),
    }
}

pub(crate) fn expansion_center(z: &Pt) -> Pt {
    match z {
        Pt::Finite(w) => Pt::Finite(w.clone()),
        Pt::Infinity => Pt::Finite(Rat::zero()),
    }
}

/// The local linear system for (∂ + N_z) f = g on truncated jets over the
/// window [v0, prec): returns (v0, matrix) where columns index the unknown jet
/// coefficients (k − v0)·n + coord and rows the output orders v0−1 .. prec−2.
pub(crate) fn local_operator_matrix(
    e: &ConnectionModule,
    z: &Pt,
    v0: i64,
    prec: i64,
) -> MatQ {
    let n = e.n;
    let center = expansion_center(z);
    let local = e.local_matrix(z);
    let njets: Vec<Jet> = local
        .data
        .iter()
        .map(|f| laurent_expand(f, &center, prec))
        .collect();
    let width = (prec - v0) as usize;
    let rows = n * width; // output orders v0-1 ..= prec-2
    let mut m = MatQ::zero(rows, n * width);
    for j in (v0 - 1)..=(prec - 2) {
        let row_base = ((j - (v0 - 1)) as usize) * n;
        for r in 0..n {
            // d/du contribution: (j+1) f_{j+1, r}
            let k = j + 1;
            if k >= v0 && k < prec {
                let col = ((k - v0) as usize) * n + r;
                *m.at_mut(row_base + r, col) += Rat::from_integer((j + 1).into());
            }
            // N f contribution
            for c in 0..n {
                let jet = &njets[r * n + c];
                for k in v0..prec {
                    let coeff = jet.coeff(j - k);
                    if !coeff.is_zero() {
                        let col = ((k - v0) as usize) * n + c;
                        *m.at_mut(row_base + r, col) += coeff;
                    }
                }
            }
        }
    }
    m
}

/// RHS vector of the local system for a localized form g.
fn local_rhs(g_local: &[RatFunc], z: &Pt, v0: i64, prec: i64) -> Vec<Rat> {
    let n = g_local.len();
    let center = expansion_center(z);
    let jets: Vec<Jet> = g_local
        .iter()
        .map(|f| laurent_expand(f, &center, prec))
        .collect();
    let width = (prec - v0) as usize;
    let mut rhs = vec![Rat::zero(); n * width];
    for j in (v0 - 1)..=(prec - 2) {
        let row_base = ((j - (v0 - 1)) as usize) * n;
        for r in 0..n {
            rhs[row_base + r] = jets[r].coeff(j);
        }
    }
    rhs
}

fn window_start(_e: &ConnectionModule, z: &Pt, g_local: &[RatFunc], b: usize) -> i64 {
    let center = expansion_center(z);
    let mut val = i64::MAX;
    for f in g_local {
        let jet = laurent_expand(f, &center, 2);
        if !jet.is_zero() {
            val = val.min(jet.val);
        }
    }
    if val == i64::MAX {
        val = 0;
    }
    // primitives may need one more pole order than the form, and horizontal
    // freedom lives above −B−1; the window covers both
    (val + 1).min(-(b as i64) - 1)
}

/// Try to solve (∂ + N_z) f = g at z in truncated jets.
/// Ok(Some(jets)) = primitive found; Ok(None) = genuinely obstructed.
pub fn local_primitive(
    e: &ConnectionModule,
    z: &Pt,
    form: &[RatFunc],
    b: usize,
) -> Result<Option<Vec<Jet>>> {
    let mut prec = default_precision(b);
    for attempt in 0..2 {
        let g_local = localize_form(form, z);
        let v0 = window_start(e, z, &g_local, b);
        let m = local_operator_matrix(e, z, v0, prec);
        let rhs = local_rhs(&g_local, z, v0, prec);
        match m.solve(&rhs) {
            None => return Ok(None),
            Some(sol) => {
                // verify to the available precision
                let n = e.n;
                let center = expansion_center(z);
                let width = (prec - v0) as usize;
                let jets: Vec<Jet> = (0..n)
                    .map(|r| {
                        let coeffs: Vec<Rat> =
                            (0..width).map(|k| sol[k * n + r].clone()).collect();
                        Jet::new(center.clone(), v0, prec, coeffs)
                    })
                    .collect();
                let local = e.local_matrix(z);
                let mut ok = true;
                for r in 0..n {
                    let mut lhs = jets[r].deriv();
                    for c in 0..n {
                        let nj = laurent_expand(local.at(r, c), &center, prec);
                        lhs = lhs.add(&nj.mul(&jets[c]));
                    }
                    let gj = laurent_expand(&g_local[r], &center, prec);
                    let target = lhs.prec.min(prec - 2).min(gj.prec);
                    if !lhs.truncate(target).sub(&gj.truncate(target)).is_zero() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    return Ok(Some(jets));
                }
                if attempt == 1 {
                    return Err(Error::PrecisionExhausted("local jet solve failed verification after a doubled-precision retry".into()));
                }
                prec *= 2;
            }
        }
    }
    Err(Error::PrecisionExhausted("local jet solve did not converge".into()))
}

impl ConnectionModule {
    /// Full dimension report; errors name the violated identity if the index
    /// formulas ever disagree.
    pub fn dims_report(&self) -> Result<CohomologyReport> {
        let residues = self.validate_fuchsian()?;
        let h0 = self.global_h0()?.len();
        let h1 = self.global_h1()?.0;
        let h2c = self.dual().global_h0()?.len();
        let local_h0: Vec<(String, usize)> = residues
            .iter()
            .map(|r| (r.point.label(), self.local_h0_dim(r)))
            .collect();
        let conductors: Vec<(String, usize)> = residues
            .iter()
            .map(|r| (r.point.label(), self.artin_conductor(r)))
            .collect();
        let n = self.n as i64;
        let npts = self.points.len() as i64;
        let sum_ar: i64 = conductors.iter().map(|(_, a)| *a as i64).sum();
        let sum_local: i64 = local_h0.iter().map(|(_, a)| *a as i64).sum();
        let h1p = h0 as i64 + h2c as i64 - 2 * n + sum_ar;
        if h1p < 0 {
            return Err(Error::Internal(
                "index formula produced a negative parabolic dimension".into(),
            ));
        }
        let h1c = h1p + sum_local - h0 as i64;
        if h1c < 0 {
            return Err(Error::Internal(
                "six-term identity produced a negative h1c".into(),
            ));
        }
        // Euler characteristic of compact support: −h1c + h2c = (2 − |Z|)·rank
        if -h1c + h2c as i64 != (2 - npts) * n {
            return Err(Error::Internal(
                "identity violated: compact Euler characteristic".into(),
            ));
        }
        // open Euler characteristic against the de Rham computation
        if h0 as i64 - h1 as i64 != (2 - npts) * n {
            return Err(Error::Internal(
                "identity violated: open Euler characteristic".into(),
            ));
        }
        Ok(CohomologyReport {
            rank: self.n,
            points: self.points.iter().map(|p| p.label()).collect(),
            h0,
            h1,
            h1c: h1c as usize,
            h1p: h1p as usize,
            h2c,
            euler_open: h0 as i64 - h1 as i64,
            euler_compact: -h1c + h2c as i64,
            conductors,
            local_h0,
        })
    }

    /// Basis of parabolic H¹: global classes that admit Laurent-jet primitives
    /// at every singular point, each certified by those primitives.
    pub fn h1p_basis(&self) -> Result<Vec<H1pClass>> {
        let residues = self.validate_fuchsian()?;
        let b = self.saturation_bound(&residues);
        let (h1, reps) = self.global_h1()?;
        if h1 == 0 {
            return Ok(vec![]);
        }
        let prec = default_precision(b);
        // joint kernel system over unknowns (c, f_z per point)
        let mut blocks: Vec<(Pt, i64, MatQ, Vec<Vec<Rat>>)> = Vec::new();
        for z in &self.points {
            // window start must cover every representative's localization
            let mut v0 = i64::MAX;
            let mut rhs_list = Vec::new();
            let locs: Vec<Vec<RatFunc>> =
                reps.iter().map(|r| localize_form(r, z)).collect();
            for g in &locs {
                v0 = v0.min(window_start(self, z, g, b));
            }
            for g in &locs {
                rhs_list.push(local_rhs(g, z, v0, prec));
            }
            let m = local_operator_matrix(self, z, v0, prec);
            blocks.push((z.clone(), v0, m, rhs_list));
        }
        let jet_cols: usize = blocks.iter().map(|(_, _, m, _)| m.cols).sum();
        let total_rows: usize = blocks.iter().map(|(_, _, m, _)| m.rows).sum();
        let mut joint = MatQ::zero(total_rows, h1 + jet_cols);
        let mut row_off = 0usize;
        let mut col_off = h1;
        for (_, _, m, rhs_list) in &blocks {
            for i in 0..m.rows {
                for (ci, rhs) in rhs_list.iter().enumerate() {
                    // equation: (∂+N)f − Σ c_i g_i = 0
                    *joint.at_mut(row_off + i, ci) = -rhs[i].clone();
                }
                for j in 0..m.cols {
                    *joint.at_mut(row_off + i, col_off + j) = m.at(i, j).clone();
                }
            }
            row_off += m.rows;
            col_off += m.cols;
        }
        let kernel = joint.kernel_basis();
        // project to the c-coordinates
        let c_span = RowSpan::from_rows(h1, kernel.iter().map(|v| v[..h1].to_vec()));
        let mut out = Vec::new();
        for c in c_span.rows() {
            let mut form = vec![RatFunc::zero(); self.n];
            for (i, coef) in c.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                for r in 0..self.n {
                    form[r] = form[r].add(&reps[i][r].scale(coef));
                }
            }
            let mut primitives = Vec::new();
            for z in &self.points {
                let prim = local_primitive(self, z, &form, b)?.ok_or_else(|| {
                    Error::Internal("joint solve produced a non-integrable class".into())
                })?;
                primitives.push((z.clone(), prim));
            }
            out.push(H1pClass {
                coeffs: c.clone(),
                form,
                primitives,
            });
        }
        Ok(out)
    }
}

/// Reshape a vector of n² jets (row-major matrix coordinates) into matrix-jet
/// coefficient form and multiply under the trace: used by the duality pairing.
fn jets_to_matrix_coeff(jets: &[Jet], k: usize, order: i64) -> MatQ {
    MatQ::from_fn(k, k, |i, j| jets[i * k + j].coeff(order))
}

/// Residue at a point of tr(α·ψ − φ·β) where α, β are primitive jets of the
/// End-valued classes φ, ψ (all localized at the point).
fn pairing_residue(
    e_end: &ConnectionModule,
    z: &Pt,
    alpha: &[Jet],
    phi: &[RatFunc],
    beta: &[Jet],
    psi: &[RatFunc],
) -> Rat {
    let k2 = e_end.n;
    let k = (k2 as f64).sqrt().round() as usize;
    assert_eq!(k * k, k2);
    let center = expansion_center(z);
    let phi_loc = localize_form(phi, z);
    let psi_loc = localize_form(psi, z);
    let lo = alpha
        .iter()
        .chain(beta.iter())
        .map(|j| j.val)
        .min()
        .unwrap_or(0)
        .min(
            phi_loc
                .iter()
                .chain(psi_loc.iter())
                .map(|f| {
                    let jet = laurent_expand(f, &center, 2);
                    if jet.is_zero() {
                        0
                    } else {
                        jet.val
                    }
                })
                .min()
                .unwrap_or(0),
        );
    let phi_jets: Vec<Jet> = phi_loc
        .iter()
        .map(|f| laurent_expand(f, &center, 1 - lo))
        .collect();
    let psi_jets: Vec<Jet> = psi_loc
        .iter()
        .map(|f| laurent_expand(f, &center, 1 - lo))
        .collect();
    // residue of tr(α·ψ − φ·β): coefficient of u^{-1}
    let mut res = Rat::zero();
    for order_a in lo..=(-1 - lo) {
        let order_b = -1 - order_a;
        let am = jets_to_matrix_coeff(alpha, k, order_a);
        let pm = jets_to_matrix_coeff(&psi_jets, k, order_b);
        res += am.matmul(&pm).trace();
        let fm = jets_to_matrix_coeff(&phi_jets, k, order_a);
        let bm = jets_to_matrix_coeff(beta, k, order_b);
        res -= fm.matmul(&bm).trace();
    }
    res
}

impl ConnectionModule {
    /// Duality pairing on certified parabolic classes of an End-type module:
    /// ⟨φ,ψ⟩ = Σ_z Res_z tr(α_z·ψ_z − φ_z·β_z) dt.
    pub fn pairing_h1p(&self, phi: &H1pClass, psi: &H1pClass) -> Result<Rat> {
        let mut total = Rat::zero();
        for ((z, alpha), (z2, beta)) in phi.primitives.iter().zip(&psi.primitives) {
            if z != z2 {
                return Err(Error::Internal("primitive point lists disagree".into()));
            }
            total += pairing_residue(self, z, alpha, &phi.form, beta, &psi.form);
        }
        Ok(total)
    }

    /// Full antisymmetric pairing matrix on a certified basis.
    pub fn pairing_matrix(&self, basis: &[H1pClass]) -> Result<MatQ> {
        let d = basis.len();
        let mut m = MatQ::zero(d, d);
        for i in 0..d {
            for j in 0..d {
                *m.at_mut(i, j) = self.pairing_h1p(&basis[i], &basis[j])?;
            }
        }
        Ok(m)
    }

    /// Re-run the dimension report with extra (nonsingular) points adjoined to
    /// the singular set; parabolic H¹, H⁰ and H²_c must be unchanged.
    pub fn restriction_invariance_check(&self, extra: &[Rat]) -> Result<bool> {
        let finite = self.finite_points();
        for z in extra {
            if finite.contains(z) {
                return Err(Error::PointCollision(format!(
                    "point {} is already singular",
                    crate::algebra::rat_to_string(z)
                )));
            }
            for f in &self.nmat.data {
                if f.pole_order_at(z) > 0 {
                    return Err(Error::PointCollision(format!(
                        "point {} is a pole of the connection matrix",
                        crate::algebra::rat_to_string(z)
                    )));
                }
            }
        }
        let base = self.dims_report()?;
        let mut points = self.points.clone();
        points.extend(extra.iter().cloned().map(Pt::Finite));
        let enlarged = ConnectionModule::new(self.n, points, self.nmat.clone())?;
        let bigger = enlarged.dims_report()?;
        Ok(base.h1p == bigger.h1p && base.h0 == bigger.h0 && base.h2c == bigger.h2c)
    }
}

/// Per-point singularity kind of a rank-2 Fuchsian module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    Scalar,
    DistinctExponents,
    SingleExponentNonScalar,
}

impl SingularityKind {
    pub fn label(&self) -> &'static str {
        match self {
            SingularityKind::Scalar => "scalar",
            SingularityKind::DistinctExponents => "distinct-exponents",
            SingularityKind::SingleExponentNonScalar => "single-exponent-nonscalar",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RigidityVerdict {
    pub kinds: Vec<(String, SingularityKind)>,
    /// number of points with a non-scalar singularity
    pub m: usize,
    pub predicted_h1p: i64,
    pub rigid: bool,
}

pub fn classify_residue(r: &ResidueData) -> SingularityKind {
    if r.jordan.is_scalar() {
        SingularityKind::Scalar
    } else if r.jordan.eigenvalues().len() > 1 {
        SingularityKind::DistinctExponents
    } else {
        SingularityKind::SingleExponentNonScalar
    }
}

impl ConnectionModule {
    /// Rigidity classifier for absolutely irreducible rank-2 modules:
    /// h1p(End) = 2(m−3) where m counts non-scalar points; rigid iff 0.
    pub fn rank2_rigidity_classifier(&self) -> Result<RigidityVerdict> {
        if self.n != 2 {
            return Err(Error::NotRank2(self.n));
        }
        let residues = self.validate_fuchsian()?;
        let end = self.end();
        let h0_end = end.global_h0()?.len();
        if h0_end != 1 {
            return Err(Error::NotIrreducible(h0_end));
        }
        let kinds: Vec<(String, SingularityKind)> = residues
            .iter()
            .map(|r| (r.point.label(), classify_residue(r)))
            .collect();
        let m = kinds
            .iter()
            .filter(|(_, k)| *k != SingularityKind::Scalar)
            .count();
        let predicted = 2 * (m as i64 - 3);
        let report = end.dims_report()?;
        if report.h1p as i64 != predicted {
            return Err(Error::Internal(format!(
                "classifier prediction {} disagrees with the computed h1p {}",
                predicted, report.h1p
            )));
        }
        Ok(RigidityVerdict {
            kinds,
            m,
            predicted_h1p: predicted,
            rigid: predicted == 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int, rf_parse, Mat};

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

    #[test]
    fn report_trivial_rank_one() {
        let e = rank1("0", &["0", "inf"]);
        let r = e.dims_report().unwrap();
        assert_eq!((r.h0, r.h1, r.h1c, r.h1p, r.h2c), (1, 1, 1, 0, 1));
        assert_eq!(r.euler_open, 0);
        assert_eq!(r.euler_compact, 0);
    }

    #[test]
    fn report_half_exponent() {
        let e = rank1("(1/2)/t", &["0", "inf"]);
        let r = e.dims_report().unwrap();
        assert_eq!((r.h0, r.h1, r.h1p, r.h2c), (0, 0, 0, 0));
        assert_eq!(r.conductors, vec![("0".to_string(), 1), ("inf".to_string(), 1)]);
    }

    #[test]
    fn h1p_empty_for_trivial_three_points() {
        // classes 1/t and 1/(t-1) need log primitives, so nothing is parabolic
        let e = rank1("0", &["0", "1", "inf"]);
        assert_eq!(e.global_h1().unwrap().0, 2);
        let basis = e.h1p_basis().unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn h1p_empty_when_h1_zero() {
        let e = rank1("(1/2)/t", &["0", "inf"]);
        assert!(e.h1p_basis().unwrap().is_empty());
    }

    #[test]
    fn local_primitive_obstruction_is_log_term() {
        // 1/t has no Laurent primitive at 0; t (regular) does
        let e = rank1("0", &["0", "inf"]);
        let obstructed = local_primitive(&e, &Pt::Finite(rat_int(0)), &[rf("1/t")], 1).unwrap();
        assert!(obstructed.is_none());
        let fine = local_primitive(&e, &Pt::Finite(rat_int(0)), &[rf("1/t^2")], 1)
            .unwrap()
            .expect("1/t^2 integrates to -1/t");
        assert_eq!(fine[0].coeff(-1), rat_int(-1));
        assert_eq!(fine[0].coeff(0), rat_int(0));
    }

    #[test]
    fn local_primitive_at_infinity() {
        // the form t dt has primitive t^2/2: at infinity g~ = -s^{-2}(1/s) = -s^{-3},
        // f(s) = (1/2)s^{-2}
        let e = rank1("0", &["0", "inf"]);
        let prim = local_primitive(&e, &Pt::Infinity, &[rf("t")], 1)
            .unwrap()
            .expect("polynomial forms integrate at infinity");
        assert_eq!(prim[0].coeff(-2), rat(1, 2));
    }

    #[test]
    fn restriction_invariance_trivial() {
        let e = rank1("0", &["0", "inf"]);
        assert!(e.restriction_invariance_check(&[rat_int(1)]).unwrap());
        assert!(e.restriction_invariance_check(&[]).unwrap());
        match e.restriction_invariance_check(&[rat_int(0)]) {
            Err(Error::PointCollision(_)) => {}
            other => panic!("expected PointCollision, got {:?}", other),
        }
    }

    #[test]
    fn restriction_shifts_open_invariants() {
        let e = rank1("0", &["0", "inf"]);
        let base = e.dims_report().unwrap();
        let mut pts = e.points.clone();
        pts.push(Pt::Finite(rat_int(1)));
        let bigger = ConnectionModule::new(1, pts, e.nmat.clone()).unwrap();
        let br = bigger.dims_report().unwrap();
        assert_eq!(base.h1p, br.h1p);
        assert_eq!(base.h1 + 1, br.h1);
        assert_eq!(base.h1c + 1, br.h1c);
    }
}
