//! Level/class decomposition of a representation: group weights by the
//! grading exponent, order classes inside each level, and fix the global
//! basis ordering used by every matrix in the crate.

use std::collections::HashMap;

use crate::algebra::{RootSystem, Weight};
use crate::characters::WeightPolynomial;
use crate::error::{QrepError, Result};

/// One weight class inside a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassData {
    pub weight: Weight,
    /// Exponent displayed for the class (h1 exponent, or w2*n2 for B2).
    pub alpha_exp: i64,
    pub mult: usize,
    /// Global basis index of copy 0 of this class.
    pub offset: usize,
}

/// One level: all weights sharing a grading exponent.
#[derive(Debug, Clone)]
pub struct LevelData {
    /// 1-based level number, counted from the top.
    pub n: usize,
    /// Grading exponent c . weight, in units of t.
    pub lambda_exp: i64,
    pub classes: Vec<ClassData>,
}

/// Label of a single basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisLabel {
    pub level: usize,
    pub alpha_exp: i64,
    pub copy: usize,
    pub weight: Weight,
}

/// Ordered level/class table plus the induced global basis.
///
/// Basis order: levels from the top down, classes inside a level by
/// descending displayed exponent, then multiplicity copies 0..mult.
#[derive(Debug, Clone)]
pub struct SpectraTable {
    pub levels: Vec<LevelData>,
    pub basis: Vec<BasisLabel>,
    pub total_dim: usize,
    node_of: HashMap<Weight, (usize, usize)>,
}

impl SpectraTable {
    /// (level index, class index) of a weight, both 0-based.
    pub fn node(&self, w: Weight) -> Option<(usize, usize)> {
        self.node_of.get(&w).copied()
    }

    pub fn class(&self, w: Weight) -> Option<&ClassData> {
        let (li, ci) = self.node(w)?;
        Some(&self.levels[li].classes[ci])
    }

    /// Weight multiplicity (0 when the weight is absent).
    pub fn mult(&self, w: Weight) -> usize {
        self.class(w).map_or(0, |c| c.mult)
    }

    pub fn global_index(&self, w: Weight, copy: usize) -> Option<usize> {
        let c = self.class(w)?;
        (copy < c.mult).then_some(c.offset + copy)
    }

    pub fn weights(&self) -> impl Iterator<Item = Weight> + '_ {
        self.levels
            .iter()
            .flat_map(|l| l.classes.iter().map(|c| c.weight))
    }
}

/// Build the table from an exact character.
pub fn build_spectra(rs: &RootSystem, ch: &WeightPolynomial) -> Result<SpectraTable> {
    let mut by_level: HashMap<i64, Vec<(Weight, i64)>> = HashMap::new();
    for (w, c) in ch.terms() {
        if c < 0 {
            return Err(QrepError::ShapeError(format!(
                "negative multiplicity {c} at weight {w:?}"
            )));
        }
        by_level.entry(rs.grading_exp(w)).or_default().push((w, c));
    }
    let mut exps: Vec<i64> = by_level.keys().copied().collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));

    let mut levels = Vec::with_capacity(exps.len());
    let mut basis = Vec::new();
    let mut node_of = HashMap::new();
    let mut offset = 0usize;
    for (li, &g) in exps.iter().enumerate() {
        let mut entries = by_level.remove(&g).unwrap();
        entries.sort_unstable_by(|a, b| {
            rs.class_exp(b.0)
                .cmp(&rs.class_exp(a.0))
                .then(b.0.cmp(&a.0))
        });
        let mut classes = Vec::with_capacity(entries.len());
        let mut last_exp: Option<i64> = None;
        for (ci, (w, mult)) in entries.into_iter().enumerate() {
            let alpha_exp = rs.class_exp(w);
            if last_exp == Some(alpha_exp) {
                // The displayed exponent must separate classes inside a
                // level; a collision would break the weight <-> node map.
                return Err(QrepError::StructureError {
                    level: li + 1,
                    class: ci,
                });
            }
            last_exp = Some(alpha_exp);
            let mult = mult as usize;
            classes.push(ClassData {
                weight: w,
                alpha_exp,
                mult,
                offset,
            });
            node_of.insert(w, (li, ci));
            for copy in 0..mult {
                basis.push(BasisLabel {
                    level: li + 1,
                    alpha_exp,
                    copy,
                    weight: w,
                });
            }
            offset += mult;
        }
        levels.push(LevelData {
            n: li + 1,
            lambda_exp: g,
            classes,
        });
    }
    Ok(SpectraTable {
        levels,
        basis,
        total_dim: offset,
        node_of,
    })
}

/// One lowering block: X^-_{root+1} maps the class at `from` into the
/// class at `from - alpha_root`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockEdge {
    pub from: Weight,
    pub to: Weight,
    pub root: usize,
}

/// All lowering blocks present in a representation.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    pub edges: Vec<BlockEdge>,
}

impl BlockGraph {
    pub fn edges_from(&self, w: Weight, root: usize) -> Option<&BlockEdge> {
        self.edges
            .iter()
            .find(|e| e.from == w && e.root == root)
    }
}

/// Connect every pair of weights separated by a simple root, checking that
/// each edge crosses the number of levels dictated by the grading.
pub fn build_block_graph(rs: &RootSystem, st: &SpectraTable) -> Result<BlockGraph> {
    let shifts = [rs.shift1, rs.shift2];
    let mut edges = Vec::new();
    for (li, level) in st.levels.iter().enumerate() {
        for (ci, class) in level.classes.iter().enumerate() {
            for root in 0..2 {
                let alpha = rs.simple_root(root);
                let to = [class.weight[0] - alpha[0], class.weight[1] - alpha[1]];
                let Some((lj, _)) = st.node(to) else { continue };
                if lj as i64 - li as i64 != shifts[root] {
                    return Err(QrepError::StructureError {
                        level: level.n,
                        class: ci,
                    });
                }
                edges.push(BlockEdge {
                    from: class.weight,
                    to,
                    root,
                });
            }
        }
    }
    Ok(BlockGraph { edges })
}
