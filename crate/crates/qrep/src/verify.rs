//! Independent verification: residuals of every defining relation in all
//! three generator presentations, an oracle built from the contravariant
//! form on lowering words, and gauge-invariant cross-checks between the
//! two constructions.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{root_system, AlgebraKind, Weight};
use crate::assembler::GeneratorSet;
use crate::characters::{character, HighestWeight};
use crate::error::{QrepError, Result};
use crate::solver::qint;
use crate::spectra::build_spectra;

/// Largest representation the word-based oracle will accept.
pub const ORACLE_DIM_CAP: usize = 200;
/// Largest number of lowering words per weight the oracle will handle.
const ORACLE_WORD_CAP: usize = 5000;

/// Frobenius residuals of the defining relations, by presentation.
#[derive(Debug, Clone)]
pub struct RelationReport {
    /// [h_i, X^+-_j] -+ K_{ij} X^+-_j.
    pub cartan: f64,
    /// [X^+_i, X^-_j] minus the diagonal sinh ratio.
    pub ladder: f64,
    /// Both relations of the (T, R) presentation.
    pub t_form: f64,
    /// The five rows of the Q presentation (rows 2-4 depend on whether
    /// the off-diagonal symmetrized Cartan entry vanishes).
    pub q_rows: [f64; 5],
    /// Magnitude of the largest matrix entering any relation; useful for
    /// judging residuals relative to roundoff.
    pub scale: f64,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        let mut m = self.cartan.max(self.ladder).max(self.t_form);
        for r in self.q_rows {
            m = m.max(r);
        }
        m
    }
}

/// Evaluate all defining relations on an assembled generator set.
pub fn check_relations(g: &GeneratorSet) -> RelationReport {
    let rs = root_system(g.algebra);
    let n = g.dim;
    let t = g.t;
    let wsym = [rs.symmetrizers[0] as f64, rs.symmetrizers[1] as f64];
    let id = DMatrix::<f64>::identity(n, n);

    let x = |i: usize, plus: bool| if plus { &g.xp[i] } else { &g.xm[i] };

    let mut cartan = 0.0f64;
    for i in 0..2 {
        let h = g.h_matrix(i);
        for j in 0..2 {
            for plus in [true, false] {
                let sign = if plus { 1.0 } else { -1.0 };
                let xx = x(j, plus);
                let res = &h * xx - xx * &h - sign * rs.cartan[i][j] as f64 * xx;
                cartan = cartan.max(res.norm());
            }
        }
    }

    let mut ladder = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut rhs = DMatrix::zeros(n, n);
            if i == j {
                for k in 0..n {
                    rhs[(k, k)] = qint(g.h[i][k], rs.symmetrizers[i], t);
                }
            }
            let res = &g.xp[i] * &g.xm[j] - &g.xm[j] * &g.xp[i] - rhs;
            ladder = ladder.max(res.norm());
        }
    }

    let r = [g.r_matrix(0), g.r_matrix(1)];
    let tp = [g.t_matrix(0, true), g.t_matrix(1, true)];
    let tm = [g.t_matrix(0, false), g.t_matrix(1, false)];
    let ktil = |i: usize, j: usize| rs.sym_cartan[i][j] as f64;

    let mut t_form = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            for (mat, sign) in [(&tp[j], 1.0), (&tm[j], -1.0)] {
                let res = &r[i] * mat - (sign * ktil(i, j) * t).exp() * (mat * &r[i]);
                t_form = t_form.max(res.norm());
            }
            let c = ktil(i, j) * t / 2.0;
            let mut rhs = DMatrix::zeros(n, n);
            if i == j {
                rhs = (&r[i] * &r[i] - &id) / (2.0 * (wsym[i] * t).sinh());
            }
            let res = c.exp() * (&tp[i] * &tm[j]) - (-c).exp() * (&tm[j] * &tp[i]) - rhs;
            t_form = t_form.max(res.norm());
        }
    }

    let qp: Vec<DMatrix<f64>> = (0..2)
        .map(|i| &tp[i] + &r[i] / (2.0 * (wsym[i] * t).sinh()))
        .collect();
    let qm: Vec<DMatrix<f64>> = (0..2)
        .map(|i| &tm[i] - &r[i] / (2.0 * (wsym[i] * t).sinh()))
        .collect();

    let mut q_rows = [0.0f64; 5];
    for i in 0..2 {
        let w = wsym[i] * t;
        let res = w.exp() * (&qp[i] * &qm[i]) - (-w).exp() * (&qm[i] * &qp[i])
            + &id / (2.0 * w.sinh());
        q_rows[0] = q_rows[0].max(res.norm());
    }
    let coupled = rs.sym_cartan[0][1] != 0;
    if coupled {
        // rows 2 and 4 with (i, j) = (1, 2); swapping indices negates or
        // repeats the same relations.
        let c = ktil(0, 1) * t / 2.0;
        let res2 = c.exp() * (&qp[0] * &qm[1] - &qp[1] * &qm[0])
            - (-c).exp() * (&qm[1] * &qp[0] - &qm[0] * &qp[1]);
        q_rows[1] = res2.norm();
        let rhs = -(c.sinh() / ((wsym[0] * t).sinh() * (wsym[1] * t).sinh()))
            * (&r[0] * &r[1]);
        let res4 = c.exp() * (&qp[0] * &qm[1] + &qp[1] * &qm[0])
            - (-c).exp() * (&qm[1] * &qp[0] + &qm[0] * &qp[1])
            - rhs;
        q_rows[3] = res4.norm();
    } else {
        let res3a = (&qp[0] * &qm[1] - &qm[1] * &qp[0]).norm();
        let res3b = (&qp[1] * &qm[0] - &qm[0] * &qp[1]).norm();
        q_rows[2] = res3a.max(res3b);
    }
    for i in 0..2 {
        for j in 0..2 {
            for (q, sign) in [(&qp[j], 1.0), (&qm[j], -1.0)] {
                let e = (sign * ktil(i, j) * t).exp();
                let res = &r[i] * q
                    - e * (q * &r[i])
                    + sign * (e - 1.0) * (&r[j] * &r[i]) / (2.0 * (wsym[j] * t).sinh());
                q_rows[4] = q_rows[4].max(res.norm());
            }
        }
    }

    let mut scale = 1.0f64;
    for m in [&r[0], &r[1], &qp[0], &qp[1], &qm[0], &qm[1]] {
        scale = scale.max(m.norm());
    }
    RelationReport {
        cartan,
        ladder,
        t_form,
        q_rows,
        scale: scale * scale,
    }
}

// ---------------------------------------------------------------------
// Word oracle
// ---------------------------------------------------------------------

/// Root-lattice depth of a weight below the highest weight, handling the
/// rank-one embedding (where the second simple root is absent).
fn word_depth(rs: &crate::algebra::RootSystem, hw: Weight, w: Weight) -> Result<(usize, usize)> {
    if rs.rank == 1 {
        let d = hw[0] - w[0];
        if d < 0 || d % 2 != 0 {
            return Err(QrepError::ShapeError(format!("weight {w:?} off the string")));
        }
        return Ok(((d / 2) as usize, 0));
    }
    let d = [hw[0] - w[0], hw[1] - w[1]];
    let k = &rs.cartan;
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    let n0 = k[1][1] * d[0] - k[0][1] * d[1];
    let n1 = -k[1][0] * d[0] + k[0][0] * d[1];
    if det == 0 || n0 % det != 0 || n1 % det != 0 || n0 / det < 0 || n1 / det < 0 {
        return Err(QrepError::ShapeError(format!("weight {w:?} off the lattice")));
    }
    Ok(((n0 / det) as usize, (n1 / det) as usize))
}

/// All distinct arrangements of k0 letters `0` and k1 letters `1`, in
/// lexicographic order.
fn multiset_words(k0: usize, k1: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k0 + k1);
    fn rec(cur: &mut Vec<u8>, k0: usize, k1: usize, out: &mut Vec<Vec<u8>>) {
        if k0 == 0 && k1 == 0 {
            out.push(cur.clone());
            return;
        }
        if k0 > 0 {
            cur.push(0);
            rec(cur, k0 - 1, k1, out);
            cur.pop();
        }
        if k1 > 0 {
            cur.push(1);
            rec(cur, k0, k1 - 1, out);
            cur.pop();
        }
    }
    rec(&mut cur, k0, k1, &mut out);
    out
}

struct ShapCtx<'a> {
    rs: &'a crate::algebra::RootSystem,
    hw: Weight,
    t: f64,
    memo: HashMap<(Vec<u8>, Vec<u8>), f64>,
}

impl ShapCtx<'_> {
    /// Contravariant pairing of two lowering words applied to the
    /// highest-weight vector.
    fn pair(&mut self, u: &[u8], v: &[u8]) -> f64 {
        if u.is_empty() {
            return if v.is_empty() { 1.0 } else { 0.0 };
        }
        let key = (u.to_vec(), v.to_vec());
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let i = u[0];
        let rest = &u[1..];
        // Commute the raising operator for root i through v: it picks out
        // each occurrence of the letter, weighted by the sinh ratio at
        // the weight reached below that position.
        let mut total = 0.0;
        let mut below = self.hw;
        // weight below position k = hw - sum of roots strictly after k.
        let mut suffix_weights = vec![self.hw; v.len()];
        for k in (0..v.len()).rev() {
            suffix_weights[k] = below;
            let alpha = self.rs.simple_root(v[k] as usize);
            below = [below[0] - alpha[0], below[1] - alpha[1]];
        }
        for k in 0..v.len() {
            if v[k] != i {
                continue;
            }
            let nu = suffix_weights[k];
            let coeff = qint(
                nu[i as usize],
                self.rs.symmetrizers[i as usize],
                self.t,
            );
            let mut reduced = v.to_vec();
            reduced.remove(k);
            total += coeff * self.pair(rest, &reduced);
        }
        self.memo.insert(key, total);
        total
    }
}

/// Coefficient vectors of `mult` vectors in word space that are
/// orthonormal under the form `gram` (which must have numerical rank
/// exactly `mult`). Uses a deterministic pivoted Cholesky factorization;
/// if the rank decision is not clear-cut the weight is reported.
fn form_orthonormal(gram: &DMatrix<f64>, mult: usize, w: Weight) -> Result<DMatrix<f64>> {
    let nw = gram.nrows();
    let ambiguous = || QrepError::NumericalRankAmbiguity { weight: (w[0], w[1]) };
    let scale = gram.diagonal().iter().cloned().fold(1.0f64, f64::max);
    let thr = 1e-8 * scale;
    let mut l = DMatrix::zeros(nw, mult);
    let mut diag: Vec<f64> = gram.diagonal().iter().cloned().collect();
    let mut done = vec![false; nw];
    let mut rank = 0usize;
    loop {
        let mut pivot = None;
        let mut best = thr;
        for i in 0..nw {
            if !done[i] && diag[i] > best {
                best = diag[i];
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { break };
        if rank == mult {
            return Err(ambiguous());
        }
        let root = diag[p].sqrt();
        l[(p, rank)] = root;
        for i in 0..nw {
            if i == p || done[i] {
                continue;
            }
            let mut v = gram[(i, p)];
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
    if rank != mult || diag.iter().any(|&d| d < -thr) {
        return Err(ambiguous());
    }
    // c = L (L^T L)^{-1} gives c^T gram c = I.
    let small = (l.transpose() * &l)
        .try_inverse()
        .ok_or_else(ambiguous)?;
    Ok(l * small)
}

struct OracleNode {
    words: Vec<Vec<u8>>,
    /// words x mult coefficient matrix of the orthonormalized copies.
    coeff: DMatrix<f64>,
}

/// Build the same irreducible representation by a second route: span the
/// lowering words, orthonormalize them under the contravariant form, and
/// read the matrix elements off the form itself. Shares nothing with the
/// chained Gram construction except the basis bookkeeping.
pub fn build_oracle(kind: AlgebraKind, comps: &[i64], t: f64) -> Result<GeneratorSet> {
    if t <= 0.0 {
        return Err(QrepError::InvalidParameter("t must be > 0".into()));
    }
    let kind = kind.normalize();
    let rs = root_system(kind);
    let hw = HighestWeight::new(&rs, comps)?;
    let ch = character(&rs, hw)?;
    let st = build_spectra(&rs, &ch)?;
    let dim = st.total_dim;
    if dim > ORACLE_DIM_CAP {
        return Err(QrepError::CapExceeded {
            dim,
            cap: ORACLE_DIM_CAP,
        });
    }
    let mut ctx = ShapCtx {
        rs: &rs,
        hw: hw.0,
        t,
        memo: HashMap::new(),
    };

    let mut nodes: HashMap<Weight, OracleNode> = HashMap::new();
    for w in st.weights() {
        let (k0, k1) = word_depth(&rs, hw.0, w)?;
        let words = multiset_words(k0, k1);
        if words.len() > ORACLE_WORD_CAP {
            return Err(QrepError::CapExceeded {
                dim: words.len(),
                cap: ORACLE_WORD_CAP,
            });
        }
        let mult = st.mult(w);
        let nw = words.len();
        let mut gram = DMatrix::zeros(nw, nw);
        for a in 0..nw {
            for b in a..nw {
                let v = ctx.pair(&words[a], &words[b]);
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        let coeff = form_orthonormal(&gram, mult, w)?;
        nodes.insert(w, OracleNode { words, coeff });
    }

    let roots = rs.rank.min(2);
    let mut xm = [DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim)];
    for w in st.weights() {
        for i in 0..roots {
            let alpha = rs.simple_root(i);
            let lower = [w[0] - alpha[0], w[1] - alpha[1]];
            let Some(target) = st.class(lower) else { continue };
            let source = st.class(w).expect("weight in table");
            let from = &nodes[&w];
            let to = &nodes[&lower];
            // Pairing of target words with the letter-prepended source
            // words gives the raw matrix of X^-_i on word spans.
            let mut cross = DMatrix::zeros(to.words.len(), from.words.len());
            for (a, wu) in to.words.iter().enumerate() {
                for (b, wv) in from.words.iter().enumerate() {
                    let mut pushed = Vec::with_capacity(wv.len() + 1);
                    pushed.push(i as u8);
                    pushed.extend_from_slice(wv);
                    cross[(a, b)] = ctx.pair(wu, &pushed);
                }
            }
            let block = to.coeff.transpose() * cross * &from.coeff;
            for rr in 0..block.nrows() {
                for cc in 0..block.ncols() {
                    xm[i][(target.offset + rr, source.offset + cc)] = block[(rr, cc)];
                }
            }
        }
    }
    let xp = [xm[0].transpose(), xm[1].transpose()];
    let mut h = [vec![0i64; dim], vec![0i64; dim]];
    for (idx, label) in st.basis.iter().enumerate() {
        h[0][idx] = label.weight[0];
        h[1][idx] = label.weight[1];
    }
    Ok(GeneratorSet {
        algebra: kind,
        hw,
        t,
        dim,
        xp,
        xm,
        h,
        basis: st,
    })
}

// ---------------------------------------------------------------------
// Gauge-invariant comparisons
// ---------------------------------------------------------------------

fn dictionary(g: &GeneratorSet) -> [DMatrix<f64>; 6] {
    let eh = |i: usize| {
        DMatrix::from_diagonal(&DVector::from_iterator(
            g.dim,
            g.h[i].iter().map(|&v| (v as f64).exp()),
        ))
    };
    [
        g.xp[0].clone(),
        g.xm[0].clone(),
        g.xp[1].clone(),
        g.xm[1].clone(),
        eh(0),
        eh(1),
    ]
}

/// Weight-preserving words over the dictionary (raising/lowering counts
/// balanced per root), all of length <= 6.
const TRACE_WORDS: [&[usize]; 15] = [
    &[4],
    &[5],
    &[0, 1],
    &[1, 0],
    &[2, 3],
    &[3, 2],
    &[0, 0, 1, 1],
    &[2, 2, 3, 3],
    &[0, 1, 2, 3],
    &[0, 2, 1, 3],
    &[0, 2, 3, 1],
    &[1, 0, 3, 2],
    &[0, 1, 4],
    &[2, 3, 5],
    &[0, 2, 3, 1, 4, 5],
];

fn word_trace(dict: &[DMatrix<f64>; 6], word: &[usize]) -> f64 {
    let n = dict[0].nrows();
    let mut acc = DMatrix::identity(n, n);
    for &k in word {
        acc *= &dict[k];
    }
    acc.trace()
}

/// Largest relative difference of the invariant trace list between two
/// generator sets. Zero (up to roundoff) iff the representations are
/// equivalent, independently of any basis or gauge choice.
pub fn compare_invariants(a: &GeneratorSet, b: &GeneratorSet) -> f64 {
    let da = dictionary(a);
    let db = dictionary(b);
    let mut worst = 0.0f64;
    for word in TRACE_WORDS {
        let ta = word_trace(&da, word);
        let tb = word_trace(&db, word);
        worst = worst.max((ta - tb).abs() / (1.0 + ta.abs()));
    }
    worst
}

/// Trace of exp(tau . h), for comparison against the exact character.
pub fn weight_trace(g: &GeneratorSet, tau: [f64; 2]) -> f64 {
    (0..g.dim)
        .map(|k| (tau[0] * g.h[0][k] as f64 + tau[1] * g.h[1][k] as f64).exp())
        .sum()
}

/// Largest deviation of the ladder commutators from their classical
/// limit; shrinks as O(t^2).
pub fn classical_defect(g: &GeneratorSet) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        let comm = &g.xp[i] * &g.xm[i] - &g.xm[i] * &g.xp[i];
        let res = comm - g.h_matrix(i);
        worst = worst.max(res.norm());
    }
    worst
}
