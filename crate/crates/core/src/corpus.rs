//! Deterministic generators of Fuchsian test connections: a bulk triangular
//! family with generic (non-resonant) rational exponents, and rank-2
//! absolutely irreducible instances built from rank-one residue updates.

use crate::algebra::{rat, rat_int, Mat, MatQ, Poly, Pt, Rat, RatFunc};
use crate::connection::ConnectionModule;
use crate::errors::Result;
use num::traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn rand_rat_small(rng: &mut ChaCha20Rng) -> Rat {
    rat(rng.gen_range(-4..=4), 1)
}

/// Random integer matrix with determinant ±1 (product of elementary matrices).
fn random_unimodular(rng: &mut ChaCha20Rng, n: usize) -> MatQ {
    let mut p = MatQ::identity(n);
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if n > 1 {
            while j == i {
                j = rng.gen_range(0..n);
            }
        }
        if i == j {
            continue;
        }
        let c = rat_int(rng.gen_range(-2..=2));
        // row_i += c * row_j
        let mut e = MatQ::identity(n);
        *e.at_mut(i, j) = c;
        p = e.matmul(&p);
    }
    p
}

fn distinct_finite_points(rng: &mut ChaCha20Rng, count: usize) -> Vec<Rat> {
    let mut pts = Vec::new();
    while pts.len() < count {
        let z = rat_int(rng.gen_range(-3..=3));
        if !pts.contains(&z) {
            pts.push(z);
        }
    }
    pts.sort();
    pts
}

/// Assemble N = Σ_z R_z / (t − z) from per-point residue matrices.
pub fn connection_from_residues(
    finite: &[Rat],
    residues: &[MatQ],
) -> Result<ConnectionModule> {
    let n = residues[0].rows;
    let mut nmat = Mat::<RatFunc>::zero(n, n);
    for (z, r) in finite.iter().zip(residues) {
        let den = Poly::new(vec![-z.clone(), Rat::one()]);
        for i in 0..n {
            for j in 0..n {
                if !r.at(i, j).is_zero() {
                    let term =
                        RatFunc::new(Poly::constant(r.at(i, j).clone()), den.clone())?;
                    *nmat.at_mut(i, j) = nmat.at(i, j).add(&term);
                }
            }
        }
    }
    let mut points: Vec<Pt> = finite.iter().cloned().map(Pt::Finite).collect();
    points.push(Pt::Infinity);
    ConnectionModule::new(n, points, nmat)
}

/// Bulk corpus instance: rank ≤ 3, |Z| ≤ 4, upper-triangular residues with
/// denominator-11 exponents chosen so that no residue (including the one at ∞)
/// has an integer eigenvalue, then conjugated by a random unimodular matrix.
pub fn random_fuchsian(rng: &mut ChaCha20Rng, rank: usize, num_finite: usize) -> ConnectionModule {
    assert!((1..=3).contains(&rank) && (1..=3).contains(&num_finite));
    loop {
        let finite = distinct_finite_points(rng, num_finite);
        // diagonal entries a + c/11 with c in 1..=10
        let mut residues: Vec<MatQ> = Vec::new();
        let mut diag_sums = vec![Rat::zero(); rank];
        for _ in 0..num_finite {
            let mut r = MatQ::zero(rank, rank);
            for i in 0..rank {
                let c = rng.gen_range(1..=10i64);
                let val = rand_rat_small(rng) + rat(c, 11);
                diag_sums[i] += &val;
                *r.at_mut(i, i) = val;
                for j in (i + 1)..rank {
                    *r.at_mut(i, j) = rand_rat_small(rng);
                }
            }
            residues.push(r);
        }
        // the residue at ∞ is −Σ; its eigenvalues are −diag_sums
        if diag_sums.iter().any(|s| s.is_integer()) {
            continue;
        }
        let e = connection_from_residues(&finite, &residues).unwrap();
        // conjugate by a global unimodular matrix for denser instances
        let p = random_unimodular(rng, rank);
        let pinv = p.inverse().unwrap();
        let prf = p.map(|c| RatFunc::constant(c.clone()));
        let pinvrf = pinv.map(|c| RatFunc::constant(c.clone()));
        let nmat = prf.matmul(&e.nmat).matmul(&pinvrf);
        return ConnectionModule::new(rank, e.points.clone(), nmat).unwrap();
    }
}

/// Rank-2 residue tuple R_1..R_m with R_i = α_i·I + u_i·v_iᵀ, eigenvalues
/// (α_i, β_i), Σ R_i = 0. Returns None for a degenerate direction choice.
fn rank_one_update_tuple(
    rng: &mut ChaCha20Rng,
    alphas: &[Rat],
    betas: &[Rat],
) -> Option<Vec<MatQ>> {
    let m = alphas.len();
    // random direction vectors u_i, pairwise non-proportional
    let mut us: Vec<Vec<Rat>> = Vec::new();
    for _ in 0..m {
        loop {
            let u = vec![
                rat_int(rng.gen_range(-3..=3)),
                rat_int(rng.gen_range(-3..=3)),
            ];
            if u.iter().any(|x| !x.is_zero()) {
                us.push(u);
                break;
            }
        }
    }
    // unknowns v_1..v_m (2m scalars); equations:
    //   Σ_i u_i v_iᵀ = c·I with c = −Σ α_i   (4 equations)
    //   v_i · u_i = β_i − α_i                 (m equations)
    let c: Rat = -alphas.iter().cloned().sum::<Rat>();
    let rows = 4 + m;
    let mut a = MatQ::zero(rows, 2 * m);
    let mut rhs = vec![Rat::zero(); rows];
    for (r, (p, q)) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
        // entry (p,q) of Σ u_i v_iᵀ: Σ_i u_i[p] * v_i[q]
        for i in 0..m {
            *a.at_mut(r, 2 * i + q) = us[i][*p].clone();
        }
        rhs[r] = if p == q { c.clone() } else { Rat::zero() };
    }
    for i in 0..m {
        for q in 0..2 {
            *a.at_mut(4 + i, 2 * i + q) = us[i][q].clone();
        }
        rhs[4 + i] = &betas[i] - &alphas[i];
    }
    let sol = a.solve(&rhs)?;
    let mut out = Vec::new();
    for i in 0..m {
        let mut r = MatQ::identity(2).scale(&alphas[i]);
        for p in 0..2 {
            for q in 0..2 {
                *r.at_mut(p, q) += &us[i][p] * &sol[2 * i + q];
            }
        }
        out.push(r);
    }
    Some(out)
}

/// Absolutely irreducible rank-2 Fuchsian module with exactly m non-scalar
/// regular singular points (m−1 finite plus ∞) and denominator-7 exponents
/// whose differences are never integers.
pub fn random_rank2_irreducible(rng: &mut ChaCha20Rng, m: usize) -> ConnectionModule {
    assert!(m >= 3);
    'outer: loop {
        // exponents α_i = a_i/7, β_i = α_i + d_i/7 with d_i not ≡ 0 mod 7,
        // balanced so that Σ(α_i + β_i) = 0
        let mut alphas: Vec<Rat> = Vec::new();
        let mut betas: Vec<Rat> = Vec::new();
        for _ in 0..m - 1 {
            let a = rat(rng.gen_range(-6..=6), 7);
            let d = rat(rng.gen_range(1..=6), 7);
            alphas.push(a.clone());
            betas.push(a + d);
        }
        let partial: Rat = alphas.iter().chain(betas.iter()).cloned().sum();
        let a_last = rat(rng.gen_range(-6..=6), 7);
        let b_last = -&partial - &a_last;
        let diff = &b_last - &a_last;
        if diff.is_integer() {
            continue;
        }
        alphas.push(a_last);
        betas.push(b_last);
        let Some(residues) = rank_one_update_tuple(rng, &alphas, &betas) else {
            continue;
        };
        // last residue plays the role of −R_∞: check the bookkeeping
        let total: MatQ = residues
            .iter()
            .fold(MatQ::zero(2, 2), |acc, r| acc.add(r));
        if !total.is_zero() {
            continue;
        }
        let finite = distinct_finite_points(rng, m - 1);
        let e = match connection_from_residues(&finite, &residues[..m - 1]) {
            Ok(e) => e,
            Err(_) => continue,
        };
        // non-scalar everywhere (distinct exponents by construction) and
        // absolutely irreducible: End has a 1-dimensional horizontal space
        match e.end().global_h0() {
            Ok(h0) if h0.len() == 1 => {}
            _ => continue 'outer,
        }
        return e;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::errors::Error;

    #[test]
    fn bulk_corpus_is_fuchsian_and_euler_exact() {
        let mut rng = seeded_rng(7);
        for k in 0..8 {
            let rank = 1 + (k % 3);
            let nf = 1 + (k % 3);
            let e = random_fuchsian(&mut rng, rank, nf);
            let res = e.validate_fuchsian().unwrap();
            assert_eq!(res.len(), nf + 1);
            let h0 = e.global_h0().unwrap().len() as i64;
            let h1 = e.global_h1().unwrap().0 as i64;
            assert_eq!(h0 - h1, (2 - (nf as i64 + 1)) * rank as i64);
        }
    }

    #[test]
    fn rank2_instances_match_rigidity_count() {
        let mut rng = seeded_rng(11);
        for m in [3usize, 4] {
            let e = random_rank2_irreducible(&mut rng, m);
            let verdict = e.rank2_rigidity_classifier().unwrap();
            assert_eq!(verdict.m, m);
            assert_eq!(verdict.predicted_h1p, 2 * (m as i64 - 3));
            assert_eq!(verdict.rigid, m == 3);
        }
    }

    #[test]
    fn determinism() {
        let a = random_fuchsian(&mut seeded_rng(42), 2, 2);
        let b = random_fuchsian(&mut seeded_rng(42), 2, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn tuple_solver_shape() {
        let mut rng = seeded_rng(3);
        let alphas = vec![rat(1, 7), rat(2, 7), rat(-3, 7)];
        let betas = vec![rat(2, 7), rat(4, 7), rat(-6, 7)];
        if let Some(rs) = rank_one_update_tuple(&mut rng, &alphas, &betas) {
            let total = rs.iter().fold(MatQ::zero(2, 2), |acc, r| acc.add(r));
            assert!(total.is_zero());
        }
        let _ = Error::Internal(String::new());
    }
}
