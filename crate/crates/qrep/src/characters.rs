//! Exact Weyl characters on the 2D weight lattice: Laurent polynomials
//! with integer coefficients, exact alternating-sum division, dimensions
//! and the A1-subalgebra reductions used to read off generator spectra.

use std::collections::BTreeMap;

use crate::algebra::{apply_mat, RootSystem, Weight};
use crate::error::{QrepError, Result};

/// Integer-coefficient Laurent polynomial on the weight lattice. Terms
/// with zero coefficient are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightPolynomial {
    terms: BTreeMap<Weight, i64>,
}

/// Dominant highest weight (second component zero for rank-one algebras).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HighestWeight(pub Weight);

impl HighestWeight {
    pub fn new(rs: &RootSystem, comps: &[i64]) -> Result<Self> {
        if comps.len() != rs.rank {
            return Err(QrepError::InvalidParameter(format!(
                "weight has {} components, {} expects {}",
                comps.len(),
                rs.kind,
                rs.rank
            )));
        }
        if comps.iter().any(|&c| c < 0) {
            return Err(QrepError::InvalidParameter(
                "highest weight components must be non-negative".into(),
            ));
        }
        let mut w = [0i64; 2];
        w[..comps.len()].copy_from_slice(comps);
        Ok(HighestWeight(w))
    }
}

impl WeightPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Weight) -> i64 {
        self.terms.get(&w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Weight, i64)> + '_ {
        self.terms.iter().map(|(w, c)| (*w, *c))
    }

    /// Total mass (sum of coefficients); the Weyl dimension when the
    /// polynomial is a character.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn order_key(w: Weight) -> (i64, i64) {
        (w[0] + w[1], w[0])
    }

    fn leading(&self) -> Option<(Weight, i64)> {
        self.terms
            .iter()
            .max_by_key(|(w, _)| Self::order_key(**w))
            .map(|(w, c)| (*w, *c))
    }

    /// Exact division over the integer exponent lattice. The divisor's
    /// leading coefficient must be a unit; any remainder is a bug.
    pub fn div_exact(&self, den: &WeightPolynomial) -> Result<WeightPolynomial> {
        let (dlead, dcoef) = den.leading().ok_or(QrepError::InternalError)?;
        if dcoef.abs() != 1 {
            return Err(QrepError::InternalError);
        }
        let mut rem = self.clone();
        let mut quot = WeightPolynomial::zero();
        // Each step strictly lowers the leading monomial; the bound is a
        // safety net against a non-terminating division.
        let mut steps = 0usize;
        let max_steps = 16 * (self.len() + den.len() + 4) * (self.len() + 4);
        while let Some((rlead, rcoef)) = rem.leading() {
            if rcoef % dcoef != 0 {
                return Err(QrepError::InternalError);
            }
            let q = rcoef / dcoef;
            let shift = [rlead[0] - dlead[0], rlead[1] - dlead[1]];
            quot.add_term(shift, q);
            for (w, c) in den.terms() {
                rem.add_term([w[0] + shift[0], w[1] + shift[1]], -q * c);
            }
            steps += 1;
            if steps > max_steps {
                return Err(QrepError::InternalError);
            }
        }
        let _ = quot.leading();
        Ok(quot)
    }
}

/// Weyl character of the irreducible representation with the given highest
/// weight, as an exact weight-multiplicity polynomial.
pub fn character(rs: &RootSystem, hw: HighestWeight) -> Result<WeightPolynomial> {
    let shifted = [hw.0[0] + rs.rho[0], hw.0[1] + rs.rho[1]];
    let mut num = WeightPolynomial::zero();
    let mut den = WeightPolynomial::zero();
    for w in &rs.weyl_group {
        let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
        num.add_term(apply_mat(w, shifted), det);
        den.add_term(apply_mat(w, rs.rho), det);
    }
    num.div_exact(&den)
}

/// Weyl dimension by the product formula over positive roots.
pub fn dimension(rs: &RootSystem, hw: HighestWeight) -> i64 {
    let w = rs.symmetrizers;
    let mut num = 1i64;
    let mut den = 1i64;
    for root in &rs.positive_roots {
        num *= root[0] * (hw.0[0] + 1) * w[0] + root[1] * (hw.0[1] + 1) * w[1];
        den *= root[0] * w[0] + root[1] * w[1];
    }
    debug_assert_eq!(num % den, 0);
    num / den
}

/// Substitute tau = s * direction and collect the 1D exponent histogram.
pub fn reduce_to_a1(
    poly: &WeightPolynomial,
    direction: (i64, i64),
) -> BTreeMap<i64, i64> {
    let mut hist = BTreeMap::new();
    for (w, c) in poly.terms() {
        *hist.entry(w[0] * direction.0 + w[1] * direction.1).or_insert(0) += c;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{root_system, AlgebraKind};

    fn hw(rs: &RootSystem, comps: &[i64]) -> HighestWeight {
        HighestWeight::new(rs, comps).unwrap()
    }

    #[test]
    fn a2_defining_rep() {
        let rs = root_system(AlgebraKind::A2);
        let ch = character(&rs, hw(&rs, &[1, 0])).unwrap();
        assert_eq!(ch.mass(), 3);
        assert_eq!(ch.coeff([1, 0]), 1);
        assert_eq!(ch.coeff([-1, 1]), 1);
        assert_eq!(ch.coeff([0, -1]), 1);
    }

    #[test]
    fn a2_21_composite_histogram() {
        let rs = root_system(AlgebraKind::A2);
        let ch = character(&rs, hw(&rs, &[2, 1])).unwrap();
        let hist = reduce_to_a1(&ch, (1, 1));
        let expected: Vec<(i64, i64)> = vec![
            (-3, 1),
            (-2, 2),
            (-1, 3),
            (0, 3),
            (1, 3),
            (2, 2),
            (3, 1),
        ];
        assert_eq!(hist.into_iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn b2_11_reductions() {
        let rs = root_system(AlgebraKind::B2);
        let ch = character(&rs, hw(&rs, &[1, 1])).unwrap();
        assert_eq!(ch.mass(), 16);
        let hist = reduce_to_a1(&ch, (1, 2));
        assert_eq!(
            hist.into_iter().collect::<Vec<_>>(),
            vec![(-3, 2), (-1, 6), (1, 6), (3, 2)]
        );
        // h1 histogram from substituting tau2 = 0
        let h1 = reduce_to_a1(&ch, (1, 0));
        assert_eq!(
            h1.into_iter().collect::<Vec<_>>(),
            vec![(-3, 2), (-1, 6), (1, 6), (3, 2)]
        );
    }

    #[test]
    fn known_dimensions() {
        let a2 = root_system(AlgebraKind::A2);
        assert_eq!(dimension(&a2, hw(&a2, &[2, 1])), 15);
        let b2 = root_system(AlgebraKind::B2);
        assert_eq!(dimension(&b2, hw(&b2, &[1, 1])), 16);
        let g2 = root_system(AlgebraKind::G2);
        assert_eq!(dimension(&g2, hw(&g2, &[1, 0])), 7);
        assert_eq!(dimension(&g2, hw(&g2, &[0, 1])), 14);
    }

    #[test]
    fn mass_equals_product_formula_small_weights() {
        for kind in [AlgebraKind::A2, AlgebraKind::B2, AlgebraKind::G2] {
            let rs = root_system(kind);
            for p in 0..=6i64 {
                for q in 0..=6i64 {
                    let h = hw(&rs, &[p, q]);
                    let ch = character(&rs, h).unwrap();
                    assert_eq!(ch.mass(), dimension(&rs, h), "{kind} ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn a1_closed_spectrum() {
        let rs = root_system(AlgebraKind::A1);
        let ch = character(&rs, hw(&rs, &[4])).unwrap();
        let exps: Vec<i64> = ch.terms().map(|(w, _)| w[0]).collect();
        assert_eq!(exps, vec![-4, -2, 0, 2, 4]);
        assert!(ch.terms().all(|(_, c)| c == 1));
    }

    #[test]
    fn character_is_weyl_invariant() {
        for kind in [AlgebraKind::A2, AlgebraKind::B2, AlgebraKind::G2] {
            let rs = root_system(kind);
            let ch = character(&rs, hw(&rs, &[2, 1])).unwrap();
            for w in &rs.weyl_group {
                for (m, c) in ch.terms() {
                    assert_eq!(ch.coeff(apply_mat(w, m)), c);
                }
            }
        }
    }
}
