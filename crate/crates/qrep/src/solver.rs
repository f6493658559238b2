//! Recursive construction of the lowering blocks. Weights are visited in
//! order of increasing depth below the highest weight; at each landing
//! weight the two incoming blocks are read off jointly from a stacked
//! Gram matrix whose entries are fixed by the defining relations and by
//! blocks already solved one step higher.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::algebra::{RootSystem, Weight};
use crate::error::{QrepError, Result};
use crate::spectra::SpectraTable;

/// q-integer sinh(w t m)/sinh(w t).
pub fn qint(m: i64, w: i64, t: f64) -> f64 {
    (w as f64 * t * m as f64).sinh() / (w as f64 * t).sinh()
}

/// Inputs for one landing weight: the two Gram targets and the cross
/// target, together with the column budget (the landing multiplicity).
#[derive(Debug, Clone)]
pub struct GramStep {
    /// Target for a^T a (order = multiplicity of the alpha_1 parent).
    pub a_gram: Option<DMatrix<f64>>,
    /// Target for b^T b (order = multiplicity of the alpha_2 parent).
    pub b_gram: Option<DMatrix<f64>>,
    /// Target for b^T a, rows indexed by the alpha_2 parent.
    pub cross: Option<DMatrix<f64>>,
    /// Multiplicity of the landing weight.
    pub budget: usize,
    pub level: usize,
    pub class: usize,
}

/// Deterministic pivoted Cholesky factor of a PSD matrix: returns L with
/// g = L L^T, L of shape m x budget (zero-padded past the rank).
fn pivoted_cholesky(
    g: &DMatrix<f64>,
    budget: usize,
    tol: f64,
    level: usize,
    class: usize,
) -> Result<DMatrix<f64>> {
    let m = g.nrows();
    let scale = g.diagonal().iter().cloned().fold(1.0f64, f64::max);
    let zero_tol = tol.max(1e-13) * scale;
    let neg_tol = 1e3 * zero_tol;

    let mut l = DMatrix::zeros(m, budget.max(1));
    let mut diag: Vec<f64> = g.diagonal().iter().cloned().collect();
    let mut done = vec![false; m];
    let mut rank = 0usize;
    loop {
        let mut pivot = None;
        let mut best = zero_tol;
        for i in 0..m {
            if !done[i] && diag[i] > best {
                best = diag[i];
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { break };
        if rank == budget {
            let excess = diag
                .iter()
                .zip(&done)
                .filter(|(&d, &f)| !f && d > zero_tol)
                .count();
            return Err(QrepError::RankError {
                level,
                class,
                rank: budget + excess,
                budget,
            });
        }
        let root = diag[p].sqrt();
        l[(p, rank)] = root;
        for i in 0..m {
            if i == p || done[i] {
                continue;
            }
            let mut v = g[(i, p)];
            for j in 0..rank {
                v -= l[(i, j)] * l[(p, j)];
            }
            let v = v / root;
            l[(i, rank)] = v;
            diag[i] -= v * v;
        }
        done[p] = true;
        diag[p] = 0.0;
        rank += 1;
    }
    for (i, &d) in diag.iter().enumerate() {
        if !done[i] && d < -neg_tol {
            return Err(QrepError::NegativeEigenvalue {
                level,
                class,
                value: d,
            });
        }
    }
    if budget == 0 {
        return Ok(DMatrix::zeros(m, 0));
    }
    Ok(l)
}

/// Solve one landing weight: returns the new blocks (a, b) with
/// a^T a = a_gram - handled jointly so that b^T a hits the cross target.
pub fn solve_gram_step(
    step: &GramStep,
    tol: f64,
) -> Result<(Option<DMatrix<f64>>, Option<DMatrix<f64>>)> {
    let na = step.a_gram.as_ref().map_or(0, |g| g.nrows());
    let nb = step.b_gram.as_ref().map_or(0, |g| g.nrows());
    let m = na + nb;
    if m == 0 {
        return Ok((None, None));
    }
    let mut g = DMatrix::zeros(m, m);
    if let Some(a) = &step.a_gram {
        g.view_mut((0, 0), (na, na)).copy_from(a);
    }
    if let Some(b) = &step.b_gram {
        g.view_mut((na, na), (nb, nb)).copy_from(b);
    }
    if let Some(c) = &step.cross {
        if c.nrows() != nb || c.ncols() != na {
            return Err(QrepError::ShapeError(format!(
                "cross target is {}x{}, expected {}x{}",
                c.nrows(),
                c.ncols(),
                nb,
                na
            )));
        }
        g.view_mut((na, 0), (nb, na)).copy_from(c);
        g.view_mut((0, na), (na, nb)).copy_from(&c.transpose());
    }
    let l = pivoted_cholesky(&g, step.budget, tol, step.level, step.class)?;
    // g = L L^T, so the block row slices of L transposed satisfy the
    // Gram targets with exactly `budget` intermediate states.
    let a = (na > 0).then(|| l.rows(0, na).transpose());
    let b = (nb > 0).then(|| l.rows(na, nb).transpose());
    Ok((a, b))
}

/// All lowering blocks of one representation, keyed by (upper weight,
/// root index). Block (mu, i) maps the class at mu to the class at
/// mu - alpha_i and has shape mult(mu - alpha_i) x mult(mu).
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub blocks: HashMap<(Weight, usize), DMatrix<f64>>,
}

impl BlockSystem {
    pub fn block(&self, w: Weight, root: usize) -> Option<&DMatrix<f64>> {
        self.blocks.get(&(w, root))
    }
}

/// Tie-break order for landing weights at equal depth. The blocks are
/// independent at fixed depth, so the result must not depend on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveOrder {
    Standard,
    ReversedTies,
}

fn depth(rs: &RootSystem, hw: Weight, w: Weight) -> Result<(i64, i64)> {
    let d = [hw[0] - w[0], hw[1] - w[1]];
    let k = &rs.cartan;
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    let num = [
        k[1][1] * d[0] - k[0][1] * d[1],
        -k[1][0] * d[0] + k[0][0] * d[1],
    ];
    if det == 0 || num[0] % det != 0 || num[1] % det != 0 {
        return Err(QrepError::ShapeError(format!(
            "weight {w:?} is not below {hw:?} on the root lattice"
        )));
    }
    let k1 = num[0] / det;
    let k2 = num[1] / det;
    if k1 < 0 || k2 < 0 {
        return Err(QrepError::ShapeError(format!(
            "negative root-lattice depth for weight {w:?}"
        )));
    }
    Ok((k1, k2))
}

fn add(w: Weight, a: Weight) -> Weight {
    [w[0] + a[0], w[1] + a[1]]
}

fn sub(w: Weight, a: Weight) -> Weight {
    [w[0] - a[0], w[1] - a[1]]
}

/// Known right-hand side of the ladder relation one step above a parent:
/// [n_i(mu)] I + (outgoing block of mu, transposed product), the Gram
/// target for the unknown block into mu - alpha_i... here expressed for
/// the parent weight `mu` of the landing weight.
fn gram_target(
    rs: &RootSystem,
    st: &SpectraTable,
    bs: &BlockSystem,
    mu: Weight,
    root: usize,
    t: f64,
) -> DMatrix<f64> {
    let n = st.mult(mu);
    let w = rs.symmetrizers[root];
    let mut g = DMatrix::identity(n, n) * qint(mu[root], w, t);
    let up = add(mu, rs.simple_root(root));
    if let Some(blk) = bs.block(up, root) {
        g += blk * blk.transpose();
    }
    g
}

/// Solve the whole chain: every lowering block, visited by depth.
pub fn solve_chain(
    rs: &RootSystem,
    st: &SpectraTable,
    t: f64,
    tol: f64,
) -> Result<BlockSystem> {
    solve_chain_ordered(rs, st, t, tol, SolveOrder::Standard)
}

pub fn solve_chain_ordered(
    rs: &RootSystem,
    st: &SpectraTable,
    t: f64,
    tol: f64,
    order: SolveOrder,
) -> Result<BlockSystem> {
    if t <= 0.0 {
        return Err(QrepError::InvalidParameter("t must be > 0".into()));
    }
    if rs.rank != 2 {
        return Err(QrepError::InvalidParameter(
            "chain construction needs a rank-two algebra".into(),
        ));
    }
    let alpha1 = rs.simple_root(0);
    let alpha2 = rs.simple_root(1);

    // The highest weight is the unique class with no parents.
    let hw = st
        .weights()
        .find(|&w| st.mult(add(w, alpha1)) == 0 && st.mult(add(w, alpha2)) == 0)
        .ok_or_else(|| QrepError::ShapeError("no highest weight class".into()))?;

    let mut targets: Vec<(i64, usize, usize, Weight)> = Vec::new();
    for w in st.weights() {
        let (k1, k2) = depth(rs, hw, w)?;
        if k1 + k2 == 0 {
            continue;
        }
        let (li, ci) = st.node(w).expect("weight is in the table");
        targets.push((k1 + k2, li, ci, w));
    }
    targets.sort_unstable();
    if order == SolveOrder::ReversedTies {
        let mut i = 0;
        while i < targets.len() {
            let mut j = i;
            while j < targets.len() && targets[j].0 == targets[i].0 {
                j += 1;
            }
            targets[i..j].reverse();
            i = j;
        }
    }

    let mut bs = BlockSystem {
        blocks: HashMap::new(),
    };
    for &(_, li, ci, nu) in &targets {
        let mu_a = add(nu, alpha1);
        let mu_b = add(nu, alpha2);
        let has_a = st.mult(mu_a) > 0;
        let has_b = st.mult(mu_b) > 0;
        let a_gram = has_a.then(|| gram_target(rs, st, &bs, mu_a, 0, t));
        let b_gram = has_b.then(|| gram_target(rs, st, &bs, mu_b, 1, t));
        // Cross target from [X+_2, X-_1] = 0: b^T a equals the product of
        // the two known blocks through the weight nu + alpha_1 + alpha_2.
        let cross = if has_a && has_b {
            let top = add(mu_a, alpha2);
            match (bs.block(top, 0), bs.block(top, 1)) {
                (Some(a_top), Some(b_top)) => Some(a_top * b_top.transpose()),
                _ => Some(DMatrix::zeros(st.mult(mu_b), st.mult(mu_a))),
            }
        } else {
            None
        };
        let step = GramStep {
            a_gram,
            b_gram,
            cross,
            budget: st.mult(nu),
            level: li + 1,
            class: ci,
        };
        let (a, b) = solve_gram_step(&step, tol)?;
        log::debug!(
            "landing weight {nu:?}: budget {}, parents a={has_a} b={has_b}",
            step.budget
        );
        if let Some(a) = a {
            bs.blocks.insert((mu_a, 0), a);
        }
        if let Some(b) = b {
            bs.blocks.insert((mu_b, 1), b);
        }
    }

    let residual = relation_residual(rs, st, &bs, t);
    log::info!(
        "{}: solved {} blocks, relation residual {residual:.3e}",
        rs.kind,
        bs.blocks.len()
    );
    let scale = 1.0 + bs.blocks.values().map(|m| m.norm_squared()).fold(0.0, f64::max);
    if residual > tol.max(1e-12) * scale {
        return Err(QrepError::ConsistencyError { residual });
    }
    Ok(bs)
}

/// Assemble the two full lowering matrices from the block system.
pub fn assemble_lowering(
    rs: &RootSystem,
    st: &SpectraTable,
    bs: &BlockSystem,
) -> [DMatrix<f64>; 2] {
    let n = st.total_dim;
    let mut out = [DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    for (&(mu, root), blk) in &bs.blocks {
        let from = st.class(mu).expect("block key in table");
        let to = st
            .class(sub(mu, rs.simple_root(root)))
            .expect("block target in table");
        for r in 0..blk.nrows() {
            for c in 0..blk.ncols() {
                out[root][(to.offset + r, from.offset + c)] = blk[(r, c)];
            }
        }
    }
    out
}

/// Largest Frobenius residual of the three defining block relations over
/// all weights (ladder relations for both roots plus the mixed
/// commutator), evaluated on the assembled matrices.
pub fn relation_residual(
    rs: &RootSystem,
    st: &SpectraTable,
    bs: &BlockSystem,
    t: f64,
) -> f64 {
    let xm = assemble_lowering(rs, st, bs);
    let xp = [xm[0].transpose(), xm[1].transpose()];
    let n = st.total_dim;
    let mut worst = 0.0f64;
    for i in 0..2 {
        let mut rhs = DMatrix::zeros(n, n);
        for label in &st.basis {
            let idx = st.global_index(label.weight, label.copy).unwrap();
            rhs[(idx, idx)] = qint(label.weight[i], rs.symmetrizers[i], t);
        }
        let res = (&xp[i] * &xm[i] - &xm[i] * &xp[i] - rhs).norm();
        worst = worst.max(res);
    }
    let mixed = (&xp[0] * &xm[1] - &xm[1] * &xp[0]).norm();
    worst.max(mixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{root_system, AlgebraKind};
    use crate::characters::{character, HighestWeight};
    use crate::spectra::build_spectra;

    fn solve(kind: AlgebraKind, comps: [i64; 2], t: f64) -> (crate::algebra::RootSystem, SpectraTable, BlockSystem) {
        let rs = root_system(kind);
        let hw = HighestWeight::new(&rs, &comps).unwrap();
        let ch = character(&rs, hw).unwrap();
        let st = build_spectra(&rs, &ch).unwrap();
        let bs = solve_chain(&rs, &st, t, 1e-9).unwrap();
        (rs, st, bs)
    }

    #[test]
    fn a2_defining_blocks() {
        let (_, _, bs) = solve(AlgebraKind::A2, [1, 0], 0.3);
        let a = bs.block([1, 0], 0).unwrap();
        assert_eq!(a.shape(), (1, 1));
        assert!((a[(0, 0)] - 1.0).abs() < 1e-12);
        let b = bs.block([-1, 1], 1).unwrap();
        assert!((b[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residuals_stay_small() {
        for (kind, comps) in [
            (AlgebraKind::A2, [2, 1]),
            (AlgebraKind::A2, [3, 0]),
            (AlgebraKind::B2, [1, 1]),
            (AlgebraKind::B2, [2, 0]),
            (AlgebraKind::G2, [1, 0]),
            (AlgebraKind::G2, [0, 1]),
        ] {
            for t in [0.1, 0.5, 1.0] {
                let (rs, st, bs) = solve(kind, comps, t);
                let r = relation_residual(&rs, &st, &bs, t);
                assert!(r < 1e-10, "{kind:?} {comps:?} t={t}: residual {r:.3e}");
            }
        }
    }

    #[test]
    fn blocks_are_deterministic() {
        let (_, _, bs1) = solve(AlgebraKind::A2, [2, 1], 0.3);
        let (_, _, bs2) = solve(AlgebraKind::A2, [2, 1], 0.3);
        for (k, v) in &bs1.blocks {
            assert_eq!(v, bs2.blocks.get(k).unwrap());
        }
    }

    #[test]
    fn tie_order_does_not_change_grams() {
        let rs = root_system(AlgebraKind::A2);
        let hw = HighestWeight::new(&rs, &[2, 1]).unwrap();
        let ch = character(&rs, hw).unwrap();
        let st = build_spectra(&rs, &ch).unwrap();
        let b1 = solve_chain_ordered(&rs, &st, 0.3, 1e-9, SolveOrder::Standard).unwrap();
        let b2 = solve_chain_ordered(&rs, &st, 0.3, 1e-9, SolveOrder::ReversedTies).unwrap();
        for (k, v) in &b1.blocks {
            let w = b2.blocks.get(k).unwrap();
            // Gauge-invariant content: the Gram matrix of each block.
            let d = (v.transpose() * v - w.transpose() * w).norm();
            assert!(d < 1e-10, "{k:?}");
        }
    }

    #[test]
    fn rank_overflow_reported() {
        let step = GramStep {
            a_gram: Some(DMatrix::identity(2, 2)),
            b_gram: None,
            cross: None,
            budget: 1,
            level: 1,
            class: 0,
        };
        match solve_gram_step(&step, 1e-9) {
            Err(QrepError::RankError { rank, budget, .. }) => {
                assert_eq!((rank, budget), (2, 1));
            }
            other => panic!("expected rank error, got {other:?}"),
        }
    }

    #[test]
    fn negative_gram_reported() {
        let step = GramStep {
            a_gram: Some(DMatrix::from_element(1, 1, -1.0)),
            b_gram: None,
            cross: None,
            budget: 1,
            level: 2,
            class: 0,
        };
        match solve_gram_step(&step, 1e-9) {
            Err(QrepError::NegativeEigenvalue { value, .. }) => assert!(value < 0.0),
            other => panic!("expected negativity error, got {other:?}"),
        }
    }

    #[test]
    fn gram_step_reproduces_targets() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let step = GramStep {
            a_gram: Some(a.clone()),
            b_gram: None,
            cross: None,
            budget: 2,
            level: 1,
            class: 0,
        };
        let (sa, _) = solve_gram_step(&step, 1e-9).unwrap();
        let sa = sa.unwrap();
        assert!((sa.transpose() * sa - a).norm() < 1e-12);
    }

    #[test]
    fn rejects_rank_one_input() {
        let rs = root_system(AlgebraKind::A1);
        let hw = HighestWeight::new(&rs, &[2]).unwrap();
        let ch = character(&rs, hw).unwrap();
        let st = build_spectra(&rs, &ch).unwrap();
        assert!(solve_chain(&rs, &st, 0.3, 1e-9).is_err());
    }
}
