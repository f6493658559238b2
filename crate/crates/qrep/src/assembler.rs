//! Final matrix assembly: the common output type, the two-generator
//! (s, r) form and its inversion back to ladder generators, plus the
//! top-level entry point that dispatches per algebra.

use nalgebra::DMatrix;

use crate::algebra::{root_system, AlgebraKind, RootSystem, Weight};
use crate::characters::{character, HighestWeight};
use crate::error::{QrepError, Result};
use crate::rank_one;
use crate::solver::{assemble_lowering, solve_chain};
use crate::spectra::{build_block_graph, build_spectra, SpectraTable};

/// Explicit generator matrices of one irreducible representation, in the
/// global basis fixed by the spectra table. Rank-one algebras carry zero
/// matrices in the second slot so that every consumer can stay uniform.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub algebra: AlgebraKind,
    pub hw: HighestWeight,
    pub t: f64,
    pub dim: usize,
    pub xp: [DMatrix<f64>; 2],
    pub xm: [DMatrix<f64>; 2],
    /// Integer diagonals of the Cartan generators.
    pub h: [Vec<i64>; 2],
    pub basis: SpectraTable,
}

impl GeneratorSet {
    pub fn h_matrix(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim,
            self.h[i].iter().map(|&v| v as f64),
        ))
    }

    /// R_i = exp(w_i t h_i), diagonal.
    pub fn r_matrix(&self, i: usize) -> DMatrix<f64> {
        let w = root_system(self.algebra).symmetrizers[i] as f64;
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim,
            self.h[i].iter().map(|&v| (w * self.t * v as f64).exp()),
        ))
    }

    fn quarter(&self, i: usize, sign: f64) -> DMatrix<f64> {
        let w = root_system(self.algebra).symmetrizers[i] as f64;
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim,
            self.h[i]
                .iter()
                .map(|&v| (sign * w * self.t * v as f64 / 4.0).exp()),
        ))
    }

    /// T^{+-}_i = e^{w_i t h_i/4} X^{+-}_i e^{w_i t h_i/4}.
    pub fn t_matrix(&self, i: usize, plus: bool) -> DMatrix<f64> {
        let q = self.quarter(i, 1.0);
        let x = if plus { &self.xp[i] } else { &self.xm[i] };
        &q * x * &q
    }
}

/// The rescaled lowering block out of the class at `mu` for the given
/// root: sinh(w t) e^{w t (n_i(mu)-1)/2} times the raw block, i.e. the
/// corresponding block of s^i below the diagonal.
pub fn shat_block(g: &GeneratorSet, root: usize, mu: Weight) -> Option<DMatrix<f64>> {
    let rs = root_system(g.algebra);
    let alpha = rs.simple_root(root);
    let from = g.basis.class(mu)?;
    let to = g.basis.class([mu[0] - alpha[0], mu[1] - alpha[1]])?;
    let w = rs.symmetrizers[root] as f64;
    let factor = (w * g.t).sinh() * (w * g.t * (mu[root] - 1) as f64 / 2.0).exp();
    let mut blk = DMatrix::zeros(to.mult, from.mult);
    for r in 0..to.mult {
        for c in 0..from.mult {
            blk[(r, c)] = factor * g.xm[root][(to.offset + r, from.offset + c)];
        }
    }
    Some(blk)
}

/// (s^1, r^1, s^2, r^2): s^i = sinh(w_i t)(T^+_i + T^-_i),
/// r^i = R_i + sinh(w_i t)(T^+_i - T^-_i).
pub fn assemble_sr(g: &GeneratorSet) -> [DMatrix<f64>; 4] {
    let rs = root_system(g.algebra);
    let mut out: Vec<DMatrix<f64>> = Vec::with_capacity(4);
    for i in 0..2 {
        let sh = (rs.symmetrizers[i] as f64 * g.t).sinh();
        let tp = g.t_matrix(i, true);
        let tm = g.t_matrix(i, false);
        out.push(sh * (&tp + &tm));
        out.push(g.r_matrix(i) + sh * (&tp - &tm));
    }
    [
        out.remove(0),
        out.remove(0),
        out.remove(0),
        out.remove(0),
    ]
}

/// Invert the (s, r) form: recover the Cartan diagonals from diag(r_i)
/// and the ladder generators from Q^{+-}_i = (s^i +- r^i)/(2 sinh w_i t).
#[allow(clippy::type_complexity)]
pub fn to_generators(
    kind: AlgebraKind,
    sr: &[DMatrix<f64>; 4],
    t: f64,
) -> Result<([DMatrix<f64>; 2], [DMatrix<f64>; 2], [Vec<i64>; 2])> {
    if t <= 0.0 {
        return Err(QrepError::InvalidParameter("t must be > 0".into()));
    }
    let rs = root_system(kind);
    let n = sr[0].nrows();
    let mut xp = [DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    let mut xm = [DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    let mut h = [vec![0i64; n], vec![0i64; n]];
    for i in 0..2 {
        let w = rs.symmetrizers[i] as f64;
        let s = &sr[2 * i];
        let r = &sr[2 * i + 1];
        // T^{+-} are strictly off-diagonal in a weight basis, so diag(r)
        // is exactly diag(R_i) = e^{w_i t h_i}.
        let mut hdiag = vec![0i64; n];
        for k in 0..n {
            let v = r[(k, k)];
            if v <= 0.0 {
                return Err(QrepError::RoundingError { index: i + 1, value: v });
            }
            let raw = v.ln() / (w * t);
            let rounded = raw.round();
            if (raw - rounded).abs() > 1e-6 {
                return Err(QrepError::RoundingError {
                    index: i + 1,
                    value: raw,
                });
            }
            hdiag[k] = rounded as i64;
        }
        let sh = 2.0 * (w * t).sinh();
        let qp = (s + r) / sh;
        let qm = (s - r) / sh;
        let rmat = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            hdiag.iter().map(|&v| (w * t * v as f64).exp()),
        ));
        let tp = &qp - &rmat / sh;
        let tm = &qm + &rmat / sh;
        let unq = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            hdiag.iter().map(|&v| (-w * t * v as f64 / 4.0).exp()),
        ));
        xp[i] = &unq * tp * &unq;
        xm[i] = &unq * tm * &unq;
        h[i] = hdiag;
    }
    Ok((xp, xm, h))
}

fn build_chain(rs: &RootSystem, hw: HighestWeight, t: f64, tol: f64) -> Result<GeneratorSet> {
    let ch = character(rs, hw)?;
    let st = build_spectra(rs, &ch)?;
    // The graph is rebuilt here purely for its level-shift validation.
    build_block_graph(rs, &st)?;
    let bs = solve_chain(rs, &st, t, tol)?;
    let xm = assemble_lowering(rs, &st, &bs);
    let xp = [xm[0].transpose(), xm[1].transpose()];
    let n = st.total_dim;
    let mut h = [vec![0i64; n], vec![0i64; n]];
    for (idx, label) in st.basis.iter().enumerate() {
        h[0][idx] = label.weight[0];
        h[1][idx] = label.weight[1];
    }
    Ok(GeneratorSet {
        algebra: rs.kind,
        hw,
        t,
        dim: n,
        xp,
        xm,
        h,
        basis: st,
    })
}

/// Build the generator matrices of the irreducible representation with
/// the given highest-weight components.
pub fn build(kind: AlgebraKind, comps: &[i64], t: f64, tol: f64) -> Result<GeneratorSet> {
    if !(t > 0.0) {
        return Err(QrepError::InvalidParameter("t must be > 0".into()));
    }
    if !(tol > 0.0) {
        return Err(QrepError::InvalidParameter("tol must be > 0".into()));
    }
    let kind = kind.normalize();
    let rs = root_system(kind);
    let hw = HighestWeight::new(&rs, comps)?;
    match kind {
        AlgebraKind::A1 => rank_one::build_a1(hw.0[0], t),
        AlgebraKind::D2 => rank_one::build_d2([hw.0[0], hw.0[1]], t),
        _ => build_chain(&rs, hw, t, tol),
    }
}
