//! Closed-form irreducible representations of the rank-one quantum
//! algebra, used directly for A1 and (via Kronecker products) for D2.

use nalgebra::DMatrix;

use crate::algebra::{root_system, AlgebraKind};
use crate::assembler::GeneratorSet;
use crate::characters::HighestWeight;
use crate::error::{QrepError, Result};
use crate::spectra::build_spectra;

/// Rank-one irreducible representation at a fixed deformation parameter.
/// The basis is ordered by descending h eigenvalue 2l, 2l-2, ..., -2l.
#[derive(Debug, Clone)]
pub struct RankOneRep {
    pub twice_l: i64,
    pub t: f64,
    pub xplus: DMatrix<f64>,
    pub xminus: DMatrix<f64>,
    /// Integer diagonal of h.
    pub h: Vec<i64>,
}

/// Matrix elements X^{+}_{k,k+1} = sqrt(sinh((l-m)t) sinh((l+m+1)t))/sinh t
/// with m the h/2 value of column k+1.
pub fn build_rank_one(twice_l: i64, t: f64) -> Result<RankOneRep> {
    if t <= 0.0 {
        return Err(QrepError::InvalidParameter("t must be > 0".into()));
    }
    if twice_l < 0 {
        return Err(QrepError::InvalidParameter("2l must be >= 0".into()));
    }
    let n = (twice_l + 1) as usize;
    let h: Vec<i64> = (0..n).map(|k| twice_l - 2 * k as i64).collect();
    let mut xplus = DMatrix::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        // column k+1 has 2m = twice_l - 2(k+1); the raising entry couples
        // it to row k with 2m' = 2m + 2.
        let two_m = twice_l - 2 * (k as i64 + 1);
        let lm = (twice_l - two_m) / 2; // l - m
        let lp = (twice_l + two_m) / 2 + 1; // l + m + 1
        let val = ((lm as f64 * t).sinh() * (lp as f64 * t).sinh()).sqrt() / t.sinh();
        xplus[(k, k + 1)] = val;
    }
    let xminus = xplus.transpose();
    Ok(RankOneRep {
        twice_l,
        t,
        xplus,
        xminus,
        h,
    })
}

/// The Q^{+-} generators Q^{+-} = T^{+-} +- R/(2 sinh t): diagonal
/// +-e^{2mt}/(2 sinh t), off-diagonal e^{(m +- 1/2)t} X^{+-}.
pub fn build_q_generators(rep: &RankOneRep) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = rep.h.len();
    let t = rep.t;
    let mut qp = DMatrix::zeros(n, n);
    let mut qm = DMatrix::zeros(n, n);
    for k in 0..n {
        let two_m = rep.h[k] as f64;
        qp[(k, k)] = (t * two_m).exp() / (2.0 * t.sinh());
        qm[(k, k)] = -(t * two_m).exp() / (2.0 * t.sinh());
    }
    for k in 0..n.saturating_sub(1) {
        // X^+ entry at (k, k+1) couples m (col) to m+1 (row); the matrix
        // element carries e^{(m + 1/2) t}.
        let m = (rep.twice_l - 2 * (k as i64 + 1)) as f64 / 2.0;
        qp[(k, k + 1)] = ((m + 0.5) * t).exp() * rep.xplus[(k, k + 1)];
        qm[(k + 1, k)] = ((m + 0.5) * t).exp() * rep.xminus[(k + 1, k)];
    }
    (qp, qm)
}

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Build the A1 generator set (rank-one closed form wrapped in the common
/// output type).
pub fn build_a1(twice_l: i64, t: f64) -> Result<GeneratorSet> {
    let rep = build_rank_one(twice_l, t)?;
    let rs = root_system(AlgebraKind::A1);
    let hw = HighestWeight::new(&rs, &[twice_l])?;
    let ch = crate::characters::character(&rs, hw)?;
    let st = build_spectra(&rs, &ch)?;
    let n = rep.h.len();
    Ok(GeneratorSet {
        algebra: AlgebraKind::A1,
        hw,
        t,
        dim: n,
        xp: [rep.xplus.clone(), DMatrix::zeros(n, n)],
        xm: [rep.xminus.clone(), DMatrix::zeros(n, n)],
        h: [rep.h.clone(), vec![0; n]],
        basis: st,
    })
}

/// D2 = A1 x A1: Kronecker product of two rank-one representations, with
/// the basis permuted into the spectra ordering shared by every algebra.
pub fn build_d2(hw_comps: [i64; 2], t: f64) -> Result<GeneratorSet> {
    let rs = root_system(AlgebraKind::D2);
    let hw = HighestWeight::new(&rs, &[hw_comps[0], hw_comps[1]])?;
    let rep1 = build_rank_one(hw_comps[0], t)?;
    let rep2 = build_rank_one(hw_comps[1], t)?;
    let n1 = rep1.h.len();
    let n2 = rep2.h.len();
    let dim = n1 * n2;
    let id1 = DMatrix::identity(n1, n1);
    let id2 = DMatrix::identity(n2, n2);

    let ch = crate::characters::character(&rs, hw)?;
    let st = build_spectra(&rs, &ch)?;

    // Permutation: Kronecker index (i,j) carries weight (h1[i], h2[j]),
    // which is multiplicity-free for a product of two strings.
    let mut perm = vec![0usize; dim];
    for i in 0..n1 {
        for j in 0..n2 {
            let w = [rep1.h[i], rep2.h[j]];
            let global = st
                .global_index(w, 0)
                .ok_or_else(|| QrepError::ShapeError(format!("weight {w:?} missing")))?;
            perm[i * n2 + j] = global;
        }
    }
    let mut pmat = DMatrix::zeros(dim, dim);
    for (kron_idx, &global) in perm.iter().enumerate() {
        pmat[(global, kron_idx)] = 1.0;
    }
    let conj = |m: DMatrix<f64>| &pmat * m * pmat.transpose();

    let xp1 = conj(kron(&rep1.xplus, &id2));
    let xm1 = conj(kron(&rep1.xminus, &id2));
    let xp2 = conj(kron(&id1, &rep2.xplus));
    let xm2 = conj(kron(&id1, &rep2.xminus));
    let mut h1 = vec![0i64; dim];
    let mut h2 = vec![0i64; dim];
    for i in 0..n1 {
        for j in 0..n2 {
            let g = perm[i * n2 + j];
            h1[g] = rep1.h[i];
            h2[g] = rep2.h[j];
        }
    }
    Ok(GeneratorSet {
        algebra: AlgebraKind::D2,
        hw,
        t,
        dim,
        xp: [xp1, xp2],
        xm: [xm1, xm2],
        h: [h1, h2],
        basis: st,
    })
}
