//! Static structural data for the supported algebras: Cartan matrices,
//! symmetrizers, Weyl groups, positive roots and grading vectors.
//!
//! Weights live in fundamental-weight coordinates throughout, so all
//! Cartan eigenvalues are integers and every reflection is an integer
//! matrix.

use std::fmt;
use std::str::FromStr;

use crate::error::{QrepError, Result};

/// Weight in fundamental-weight coordinates. Rank-one algebras use the
/// first component only (the second is pinned to zero).
pub type Weight = [i64; 2];

/// A 2x2 integer matrix acting on weight column vectors.
pub type IMat = [[i64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    A1,
    A2,
    B2,
    C2,
    D2,
    G2,
}

impl AlgebraKind {
    /// C2 is the same algebra as B2; everything downstream works with the
    /// normalized tag.
    pub fn normalize(self) -> AlgebraKind {
        match self {
            AlgebraKind::C2 => AlgebraKind::B2,
            k => k,
        }
    }

    pub fn rank(self) -> usize {
        match self.normalize() {
            AlgebraKind::A1 => 1,
            _ => 2,
        }
    }

    /// The symbol p of the symmetrized Cartan matrix [[2,-p],[-p,2p]].
    /// Only meaningful for A2/B2/G2.
    pub fn p(self) -> i64 {
        match self.normalize() {
            AlgebraKind::A2 => 1,
            AlgebraKind::B2 => 2,
            AlgebraKind::G2 => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AlgebraKind::A1 => "A1",
            AlgebraKind::A2 => "A2",
            AlgebraKind::B2 => "B2",
            AlgebraKind::C2 => "C2",
            AlgebraKind::D2 => "D2",
            AlgebraKind::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for AlgebraKind {
    type Err = QrepError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(AlgebraKind::A1),
            "A2" => Ok(AlgebraKind::A2),
            "B2" => Ok(AlgebraKind::B2),
            "C2" => Ok(AlgebraKind::C2),
            "D2" => Ok(AlgebraKind::D2),
            "G2" => Ok(AlgebraKind::G2),
            other => Err(QrepError::InvalidParameter(format!(
                "unknown algebra `{other}` (expected A1|A2|B2|C2|D2|G2)"
            ))),
        }
    }
}

/// Root-system data for one algebra, immutable after construction.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub kind: AlgebraKind,
    pub rank: usize,
    /// Cartan matrix K; the simple root alpha_j is column j of K in
    /// fundamental-weight coordinates.
    pub cartan: IMat,
    /// Symmetrized Cartan matrix, sym_cartan = diag(w) * cartan.
    pub sym_cartan: IMat,
    /// Symmetrizers (w1, w2).
    pub symmetrizers: [i64; 2],
    /// All Weyl-group elements as integer matrices on weight coordinates.
    pub weyl_group: Vec<IMat>,
    /// Half-sum of positive roots, (1,1) in these coordinates.
    pub rho: Weight,
    /// Positive roots as coefficient pairs over the simple roots.
    pub positive_roots: Vec<[i64; 2]>,
    /// Grading vector c: Q = exp(t * (c1 h1 + c2 h2)).
    pub grading: [i64; 2],
    /// Q-eigenvalue log-spacing between adjacent levels, in units of t.
    pub level_step: i64,
    /// Level-index shift of the lowering X^-_1 action.
    pub shift1: i64,
    /// Level-index shift of the lowering X^-_2 action.
    pub shift2: i64,
}

impl RootSystem {
    /// Simple root alpha_j (j = 0 or 1) in fundamental-weight coordinates.
    pub fn simple_root(&self, j: usize) -> Weight {
        [self.cartan[0][j], self.cartan[1][j]]
    }

    /// The grading exponent c . n of a weight, in units of t.
    pub fn grading_exp(&self, w: Weight) -> i64 {
        self.grading[0] * w[0] + self.grading[1] * w[1]
    }

    /// Exponent shown in the per-level spectra tables: the alpha diagonal
    /// for A2/G2 (h1 exponent) and the R2 exponent w2*n2 for B2, matching
    /// the within-level block structure of each algebra.
    pub fn class_exp(&self, w: Weight) -> i64 {
        match self.kind {
            AlgebraKind::B2 => self.symmetrizers[1] * w[1],
            _ => w[0],
        }
    }
}

fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn mat_det(a: &IMat) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn apply_mat(a: &IMat, w: Weight) -> Weight {
    [
        a[0][0] * w[0] + a[0][1] * w[1],
        a[1][0] * w[0] + a[1][1] * w[1],
    ]
}

/// Generate the closure of the simple reflections s_i: n -> n - n_i * alpha_i.
fn weyl_closure(cartan: &IMat, rank: usize) -> Vec<IMat> {
    let identity: IMat = [[1, 0], [0, 1]];
    let mut gens: Vec<IMat> = Vec::new();
    for i in 0..rank {
        // s_i = I - alpha_i e_i^T with alpha_i = column i of K.
        let mut s = identity;
        for r in 0..2 {
            s[r][i] -= cartan[r][i];
        }
        gens.push(s);
    }
    let mut group = vec![identity];
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let prod = mat_mul(s, g);
                if !group.contains(&prod) {
                    group.push(prod);
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    group
}

/// Fully populated root-system table for the given algebra.
pub fn root_system(kind: AlgebraKind) -> RootSystem {
    let kind = kind.normalize();
    let rank = kind.rank();
    let (cartan, symmetrizers, positive_roots, grading, level_step, shift1, shift2): (
        IMat,
        [i64; 2],
        Vec<[i64; 2]>,
        [i64; 2],
        i64,
        i64,
        i64,
    ) = match kind {
        AlgebraKind::A1 => (
            [[2, 0], [0, 0]],
            [1, 1],
            vec![[1, 0]],
            [1, 0],
            2,
            1,
            0,
        ),
        AlgebraKind::D2 => (
            [[2, 0], [0, 2]],
            [1, 1],
            vec![[1, 0], [0, 1]],
            [1, 1],
            2,
            1,
            1,
        ),
        AlgebraKind::A2 => (
            [[2, -1], [-1, 2]],
            [1, 1],
            vec![[1, 0], [0, 1], [1, 1]],
            [1, 1],
            1,
            1,
            1,
        ),
        AlgebraKind::B2 => (
            [[2, -2], [-1, 2]],
            [1, 2],
            vec![[1, 0], [0, 1], [1, 1], [2, 1]],
            [1, 2],
            2,
            0,
            1,
        ),
        AlgebraKind::G2 => (
            [[2, -3], [-1, 2]],
            [1, 3],
            vec![[1, 0], [0, 1], [1, 1], [2, 1], [3, 1], [3, 2]],
            [1, 3],
            1,
            -1,
            3,
        ),
        AlgebraKind::C2 => unreachable!("normalized above"),
    };
    let mut sym_cartan = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            sym_cartan[i][j] = symmetrizers[i] * cartan[i][j];
        }
    }
    let weyl_group = weyl_closure(&cartan, rank);
    let rho = if rank == 1 { [1, 0] } else { [1, 1] };
    RootSystem {
        kind,
        rank,
        cartan,
        sym_cartan,
        symmetrizers,
        weyl_group,
        rho,
        positive_roots,
        grading,
        level_step,
        shift1,
        shift2,
    }
}

/// Orbit of a weight under the full Weyl group, with signatures. Repeats
/// are kept when the weight sits on a reflection wall.
pub fn weyl_orbit(rs: &RootSystem, weight: Weight) -> Vec<(Weight, i64)> {
    rs.weyl_group
        .iter()
        .map(|w| (apply_mat(w, weight), mat_det(w)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(root_system(AlgebraKind::A1).weyl_group.len(), 2);
        assert_eq!(root_system(AlgebraKind::A2).weyl_group.len(), 6);
        assert_eq!(root_system(AlgebraKind::B2).weyl_group.len(), 8);
        assert_eq!(root_system(AlgebraKind::C2).weyl_group.len(), 8);
        assert_eq!(root_system(AlgebraKind::D2).weyl_group.len(), 4);
        assert_eq!(root_system(AlgebraKind::G2).weyl_group.len(), 12);
    }

    #[test]
    fn sym_cartan_matches_table() {
        let a2 = root_system(AlgebraKind::A2);
        assert_eq!(a2.sym_cartan, [[2, -1], [-1, 2]]);
        let b2 = root_system(AlgebraKind::B2);
        assert_eq!(b2.sym_cartan, [[2, -2], [-2, 4]]);
        let g2 = root_system(AlgebraKind::G2);
        assert_eq!(g2.sym_cartan, [[2, -3], [-3, 6]]);
        for rs in [a2, b2, g2] {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(rs.sym_cartan[i][j], rs.sym_cartan[j][i]);
                }
            }
        }
    }

    #[test]
    fn group_closed_and_signed() {
        for kind in [
            AlgebraKind::A1,
            AlgebraKind::A2,
            AlgebraKind::B2,
            AlgebraKind::D2,
            AlgebraKind::G2,
        ] {
            let rs = root_system(kind);
            for a in &rs.weyl_group {
                assert!(mat_det(a) == 1 || mat_det(a) == -1);
                for b in &rs.weyl_group {
                    assert!(rs.weyl_group.contains(&mat_mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn reflections_preserve_sym_inner_product() {
        // The invariant bilinear form on weight space in these coordinates
        // is M = diag(w) K^{-1}-conjugate; equivalently (mu, alpha_j) =
        // mu_j w_j, so it suffices to check that every W permutes the root
        // set with the pairing preserved. We check the quadratic form
        // Q(n) = n^T G n with G = W-invariant Gram obtained by averaging.
        for kind in [AlgebraKind::A2, AlgebraKind::B2, AlgebraKind::G2] {
            let rs = root_system(kind);
            // Average e_i e_j^T pairings over the group to get an invariant
            // symmetric form, then confirm every element preserves it.
            let mut g = [[0f64; 2]; 2];
            for w in &rs.weyl_group {
                for i in 0..2 {
                    for j in 0..2 {
                        // columns of w are images of basis weights
                        g[i][j] += (w[0][i] * w[0][j] + w[1][i] * w[1][j]) as f64;
                    }
                }
            }
            for w in &rs.weyl_group {
                for i in 0..2 {
                    for j in 0..2 {
                        let mut v = 0.0;
                        for a in 0..2 {
                            for b in 0..2 {
                                v += w[a][i] as f64 * g[a][b] * w[b][j] as f64;
                            }
                        }
                        assert!((v - g[i][j]).abs() < 1e-9, "{kind} not invariant");
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_signatures() {
        let a2 = root_system(AlgebraKind::A2);
        let orbit = weyl_orbit(&a2, [1, 1]);
        assert_eq!(orbit.len(), 6);
        assert_eq!(orbit.iter().map(|(_, s)| s).sum::<i64>(), 0);
        let zero = weyl_orbit(&a2, [0, 0]);
        assert!(zero.iter().all(|(w, _)| *w == [0, 0]));

        // rho is regular for B2: 8 distinct images.
        let b2 = root_system(AlgebraKind::B2);
        let mut imgs: Vec<Weight> = weyl_orbit(&b2, [1, 1]).into_iter().map(|(w, _)| w).collect();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), 8);
    }

    #[test]
    fn g2_grading() {
        let g2 = root_system(AlgebraKind::G2);
        assert_eq!(g2.grading, [1, 3]);
        assert_eq!(g2.symmetrizers, [1, 3]);
    }
}
