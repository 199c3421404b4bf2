//! The braided Hopf algebra of tensor words under the shuffle product and
//! deconcatenation coproduct, with the signed half-twist antipode, plus the
//! symmetrizer data cutting out the Nichols algebra degree by degree.

use std::collections::BTreeMap;

use crate::braid::{
    antipode_halftwist, block_braiding, braided_binomial, braided_factorial, product,
};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rep::{eval_product, Evaluator, SpaceId};
use crate::scalar::Scalar;

/// Basis word of X^(x)n: a sequence of basis indices of X.
pub type TensorWord = Vec<u16>;

/// Finite formal sum of tensor words, possibly of mixed degree.  The empty
/// word is the unit.
#[derive(Clone, PartialEq, Debug)]
pub struct HElement<K> {
    pub terms: BTreeMap<TensorWord, K>,
}

impl<K: Scalar> Default for HElement<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Scalar> HElement<K> {
    pub fn zero() -> Self {
        HElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: TensorWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, K::one());
        HElement { terms }
    }

    pub fn add_term(&mut self, w: TensorWord, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.mul(k));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The shuffle algebra attached to one braided space inside a context.
pub struct ShuffleAlgebra<K> {
    ev: Evaluator<K>,
    x: SpaceId,
}

impl<K: Scalar> ShuffleAlgebra<K> {
    pub fn new(ev: Evaluator<K>, x: SpaceId) -> Self {
        ShuffleAlgebra { ev, x }
    }

    pub fn evaluator(&self) -> &Evaluator<K> {
        &self.ev
    }

    pub fn space(&self) -> SpaceId {
        self.x
    }

    fn xdim(&self) -> usize {
        self.ev.ctx().dim(self.x)
    }

    /// Shuffle product: bilinear extension of Bbin{j,j'} on concatenations.
    pub fn shuffle_product(&self, a: &HElement<K>, b: &HElement<K>) -> Result<HElement<K>> {
        let mut out = HElement::zero();
        for (u, cu) in &a.terms {
            for (v, cv) in &b.terms {
                let c = cu.mul(cv);
                if u.is_empty() {
                    out.add_term(v.clone(), c);
                    continue;
                }
                if v.is_empty() {
                    out.add_term(u.clone(), c);
                    continue;
                }
                let n = u.len() + v.len();
                let seq = vec![self.x; n];
                let op = self.ev.eval(&braided_binomial(u.len(), v.len()), &seq)?;
                let mut cat = u.clone();
                cat.extend_from_slice(v);
                let col = self.ev.ctx().tuple_to_index(&seq, &cat);
                if let Some(m) = op.block(&seq) {
                    for (&(r, cidx), val) in &m.entries {
                        if cidx == col {
                            out.add_term(
                                self.ev.ctx().index_to_tuple(&seq, r),
                                c.mul(val),
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Deconcatenation coproduct, as a list of ((left, right), coefficient).
    pub fn deconcat_coproduct(&self, a: &HElement<K>) -> Vec<((TensorWord, TensorWord), K)> {
        let mut out: BTreeMap<(TensorWord, TensorWord), K> = BTreeMap::new();
        for (w, c) in &a.terms {
            for i in 0..=w.len() {
                let key = (w[..i].to_vec(), w[i..].to_vec());
                match out.entry(key) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c.clone());
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(c);
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Degreewise signed half-twist antipode.
    pub fn antipode(&self, a: &HElement<K>) -> Result<HElement<K>> {
        let mut out = HElement::zero();
        for (w, c) in &a.terms {
            if w.is_empty() {
                out.add_term(Vec::new(), c.clone());
                continue;
            }
            let seq = vec![self.x; w.len()];
            let op = self.ev.eval(&antipode_halftwist(w.len()), &seq)?;
            let col = self.ev.ctx().tuple_to_index(&seq, w);
            if let Some(m) = op.block(&seq) {
                for (&(r, cidx), val) in &m.entries {
                    if cidx == col {
                        out.add_term(self.ev.ctx().index_to_tuple(&seq, r), c.mul(val));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Counit: the coefficient of the empty word.
    pub fn counit(&self, a: &HElement<K>) -> K {
        a.terms.get(&Vec::new()).cloned().unwrap_or_else(K::zero)
    }
}

/// Per-degree symmetrizer data for the Nichols algebra quotient.
pub struct NicholsData<K> {
    pub degree: usize,
    pub rank: usize,
    /// Tensor words representing a basis of X^(x)n / ker Bfac{n}.
    pub coimage_words: Vec<TensorWord>,
    pub kernel: Vec<Vec<K>>,
    /// rank x dim(X)^n matrix sending a vector to its class coordinates in
    /// the chosen representatives.
    pub projection: Mat<K>,
}

impl<K: Scalar> ShuffleAlgebra<K> {
    pub fn nichols_component(&self, n: usize) -> Result<NicholsData<K>> {
        let dim = self.xdim().pow(n as u32);
        if n == 0 {
            return Ok(NicholsData {
                degree: 0,
                rank: 1,
                coimage_words: vec![Vec::new()],
                kernel: Vec::new(),
                projection: Mat::identity(1),
            });
        }
        let seq = vec![self.x; n];
        let op = self.ev.eval(&braided_factorial(n), &seq)?;
        let m = match op.block(&seq) {
            Some(b) => b.to_dense(),
            None => Mat::zero(dim, dim),
        };
        // Pivot columns of RREF(M) index basis words whose symmetrizer
        // images are independent, so they represent the quotient.
        let col_pivots = {
            let mut r = m.clone();
            r.rref()
        };
        let rank = col_pivots.len();
        let kernel = m.kernel_basis();
        debug_assert_eq!(rank + kernel.len(), dim);
        let coimage_words: Vec<TensorWord> = col_pivots
            .iter()
            .map(|&c| self.ev.ctx().index_to_tuple(&seq, c))
            .collect();
        // Projection: solve (M restricted to pivot columns) * lambda = M v
        // for each basis vector v.
        let mut basis_cols = Mat::zero(dim, rank);
        for (k, &c) in col_pivots.iter().enumerate() {
            for r_i in 0..dim {
                *basis_cols.at_mut(r_i, k) = m.at(r_i, c).clone();
            }
        }
        let mut projection = Mat::zero(rank, dim);
        for j in 0..dim {
            let target: Vec<K> = (0..dim).map(|r_i| m.at(r_i, j).clone()).collect();
            let lambda = basis_cols
                .solve(&target)
                .ok_or_else(|| Error::DimMismatch("projection solve failed".into()))?;
            for (k, v) in lambda.into_iter().enumerate() {
                *projection.at_mut(k, j) = v;
            }
        }
        Ok(NicholsData {
            degree: n,
            rank,
            coimage_words,
            kernel,
            projection,
        })
    }

    /// Hilbert series of the Nichols algebra up to and including max_deg.
    pub fn hilbert_series(&self, max_deg: usize) -> Result<Vec<usize>> {
        (0..=max_deg)
            .map(|n| self.nichols_component(n).map(|d| d.rank))
            .collect()
    }

    /// Bialgebra compatibility in shuffle form:
    /// sum_{i,j} Bbin{i,j} Shift^{i+j} Bbin{r-i,s-j} Shift^i Psi_{r-i,j}
    ///   = (r+s+1) Bbin{r,s}.
    pub fn check_bialgebra(&self, r: usize, s: usize) -> Result<Option<String>> {
        let n = r + s;
        let seq = vec![self.x; n.max(1)];
        let mut lhs = crate::rep::TensorOperator::zero(seq.clone());
        for i in 0..=r {
            for j in 0..=s {
                let f1 = braided_binomial(i, j);
                let f2 = braided_binomial(r - i, s - j).shift(i + j);
                let f3 = block_braiding(r - i, j).shift(i);
                let term = eval_product(&self.ev, &[&f1, &f2, &f3], &seq)?;
                lhs = lhs.add(&term);
            }
        }
        let rhs = self
            .ev
            .eval(&braided_binomial(r, s), &seq)?
            .scale_i64((n + 1) as i64);
        Ok(lhs.first_difference(&rhs))
    }

    /// Both antipode sums vanish for r >= 1:
    /// sum_s Bbin{s, r-s} A_s = 0 and sum_s Bbin{s, r-s} Shift^s A_{r-s} = 0.
    pub fn check_antipode(&self, r: usize) -> Result<Option<String>> {
        assert!(r >= 1);
        let seq = vec![self.x; r];
        let mut left = crate::rep::TensorOperator::zero(seq.clone());
        let mut right = crate::rep::TensorOperator::zero(seq.clone());
        for s in 0..=r {
            let b = braided_binomial(s, r - s);
            let l = product(&[&b, &antipode_halftwist(s)]);
            let rr = product(&[&b, &antipode_halftwist(r - s).shift(s)]);
            left = left.add(&*self.ev.eval(&l, &seq)?);
            right = right.add(&*self.ev.eval(&rr, &seq)?);
        }
        if !left.is_zero() {
            return Ok(Some(format!("left antipode sum nonzero at r={r}")));
        }
        if !right.is_zero() {
            return Ok(Some(format!("right antipode sum nonzero at r={r}")));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::qcombin::{q_binom, q_pow};
    use crate::rep::{fixture_ctx, rank1_ctx};
    use num::rational::BigRational;

    fn rank1_algebra(p: u64) -> ShuffleAlgebra<Cyclotomic> {
        let ctx = rank1_ctx(p);
        ShuffleAlgebra::new(Evaluator::new(ctx), 0)
    }

    fn theta(r: usize) -> HElement<Cyclotomic> {
        HElement::word(vec![0; r])
    }

    #[test]
    fn screening_product_is_q_binomial() {
        let p = 3;
        let alg = rank1_algebra(p);
        for r in 0..=3usize {
            for s in 0..=3usize {
                let prod = alg.shuffle_product(&theta(r), &theta(s)).unwrap();
                let coef = prod
                    .terms
                    .get(&vec![0u16; r + s])
                    .cloned()
                    .unwrap_or_else(|| Scalar::zero());
                assert_eq!(
                    coef,
                    q_binom((r + s) as u64, r as u64, p).unwrap(),
                    "Theta_{r} * Theta_{s}"
                );
            }
        }
    }

    #[test]
    fn unit_is_neutral() {
        let alg = rank1_algebra(2);
        let x = theta(2);
        assert_eq!(alg.shuffle_product(&HElement::unit(), &x).unwrap(), x);
        assert_eq!(alg.shuffle_product(&x, &HElement::unit()).unwrap(), x);
    }

    #[test]
    fn product_matches_per_word_oracle_on_matrix_braiding() {
        // (x1) . (x2 (x) x3) expands through the three words of Bbin{1,2}.
        let ctx = fixture_ctx("hecke2").unwrap();
        let ev = Evaluator::new(ctx);
        let alg = ShuffleAlgebra::new(ev, 0);
        let a = HElement::<BigRational>::word(vec![0]);
        let b = HElement::word(vec![1, 0]);
        let got = alg.shuffle_product(&a, &b).unwrap();
        // Oracle: evaluate each word of Bbin{1,2} separately on the
        // concatenated input and sum.
        let e = braided_binomial(1, 2);
        let seq = vec![0usize, 0, 0];
        let mut expect = HElement::zero();
        let col = alg.evaluator().ctx().tuple_to_index(&seq, &[0, 1, 0]);
        for (coef, w) in e.terms() {
            let (oseq, m) = alg.evaluator().eval_word(w, &seq).unwrap();
            assert_eq!(oseq, seq);
            for (&(r, c), v) in &m.entries {
                if c == col {
                    expect.add_term(
                        alg.evaluator().ctx().index_to_tuple(&seq, r),
                        v.mul(&Scalar::from_i64(*coef)),
                    );
                }
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn coproduct_counts_and_counit() {
        let alg = rank1_algebra(2);
        let d = alg.deconcat_coproduct(&theta(3));
        assert_eq!(d.len(), 4);
        let unit_delta = alg.deconcat_coproduct(&HElement::unit());
        assert_eq!(unit_delta.len(), 1);
        assert_eq!(unit_delta[0].0, (vec![], vec![]));
        assert!(alg.counit(&theta(1)).is_zero());
        assert!(alg.counit(&HElement::unit()).sub(&Scalar::one()).is_zero());
    }

    #[test]
    fn coproduct_is_coassociative_degree_5() {
        // (Delta (x) id) Delta = (id (x) Delta) Delta on a degree-5 word
        // over the 2-dim fixture basis.
        let ctx = fixture_ctx("hecke2").unwrap();
        let alg = ShuffleAlgebra::new(Evaluator::new(ctx), 0);
        let w: TensorWord = vec![0, 1, 1, 0, 1];
        let a = HElement::<BigRational>::word(w);
        let mut lhs: BTreeMap<(TensorWord, TensorWord, TensorWord), BigRational> =
            BTreeMap::new();
        for ((l, r), c) in alg.deconcat_coproduct(&a) {
            for ((l1, l2), c2) in alg.deconcat_coproduct(&HElement::word(l)) {
                let e = lhs.entry((l1, l2, r.clone())).or_insert_with(Scalar::zero);
                *e = e.add(&c.mul(&c2));
            }
        }
        let mut rhs: BTreeMap<(TensorWord, TensorWord, TensorWord), BigRational> =
            BTreeMap::new();
        for ((l, r), c) in alg.deconcat_coproduct(&a) {
            for ((r1, r2), c2) in alg.deconcat_coproduct(&HElement::word(r)) {
                let e = rhs.entry((l.clone(), r1, r2)).or_insert_with(Scalar::zero);
                *e = e.add(&c.mul(&c2));
            }
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn antipode_on_screenings() {
        // A(Theta_r) = (-1)^r q^(r(r-1)) Theta_r.
        let p = 3;
        let alg = rank1_algebra(p);
        for r in 0..=4usize {
            let got = alg.antipode(&theta(r)).unwrap();
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let phase = q_pow(p, (r * (r - 1)) as i64)
                .mul(&Cyclotomic::from_i64(4 * p, sign));
            let expect = theta(r).scale(&phase);
            assert_eq!(got, expect, "A(Theta_{r})");
        }
    }

    #[test]
    fn antipode_degree_two_diagonal() {
        // On a degree-2 word of a 2-dim diagonal braiding, A_2 = +Psi_1.
        let ctx = fixture_ctx("diag23").unwrap();
        let alg = ShuffleAlgebra::new(Evaluator::new(ctx.clone()), 0);
        let w: TensorWord = vec![0, 1];
        let got = alg.antipode(&HElement::<BigRational>::word(w.clone())).unwrap();
        let ev = alg.evaluator();
        let seq = vec![0usize, 0];
        let (oseq, m) = ev
            .eval_word(&crate::braid::BraidWord::from_display(&[1]), &seq)
            .unwrap();
        let col = ctx.tuple_to_index(&seq, &w);
        let mut expect = HElement::zero();
        for (&(r, c), v) in &m.entries {
            if c == col {
                expect.add_term(ctx.index_to_tuple(&oseq, r), v.clone());
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn primitivity_of_degree_one() {
        let alg = rank1_algebra(2);
        let d = alg.deconcat_coproduct(&theta(1));
        assert_eq!(
            d,
            vec![
                ((vec![], vec![0]), Scalar::one()),
                ((vec![0], vec![]), Scalar::one()),
            ]
        );
    }

    #[test]
    fn nichols_ranks_rank1() {
        for p in [2u64, 3] {
            let alg = rank1_algebra(p);
            let dims = alg.hilbert_series(p as usize).unwrap();
            let mut expect = vec![1usize; p as usize];
            expect.push(0);
            assert_eq!(dims, expect, "p={p}");
        }
    }

    #[test]
    fn nichols_low_degrees() {
        let ctx = fixture_ctx("hecke2").unwrap();
        let alg = ShuffleAlgebra::<BigRational>::new(Evaluator::new(ctx), 0);
        let d0 = alg.nichols_component(0).unwrap();
        assert_eq!(d0.rank, 1);
        let d1 = alg.nichols_component(1).unwrap();
        assert_eq!(d1.rank, 2);
        // rank + nullity = dim^n
        let d3 = alg.nichols_component(3).unwrap();
        assert_eq!(d3.rank + d3.kernel.len(), 8);
    }

    #[test]
    fn bialgebra_and_antipode_identities_small() {
        let alg = rank1_algebra(3);
        assert_eq!(alg.check_bialgebra(1, 1).unwrap(), None);
        assert_eq!(alg.check_antipode(1).unwrap(), None);
        let ctx = fixture_ctx("hecke2").unwrap();
        let alg2 = ShuffleAlgebra::<BigRational>::new(Evaluator::new(ctx), 0);
        assert_eq!(alg2.check_bialgebra(2, 2).unwrap(), None);
        assert_eq!(alg2.check_antipode(3).unwrap(), None);
    }

    #[test]
    fn nichols_closure_under_product() {
        // The image of Bfac{r} (x) Bfac{s} under the shuffle product lies in
        // the image of Bfac{r+s}, via the factorial factorization.
        let ctx = fixture_ctx("hecke2").unwrap();
        let ev = Evaluator::new(ctx.clone());
        for (r, s) in [(1usize, 1usize), (1, 2), (2, 2), (2, 3)] {
            let n = r + s;
            let seq = vec![0usize; n];
            let lhs = eval_product(
                &ev,
                &[
                    &braided_binomial(r, s),
                    &braided_factorial(r),
                    &braided_factorial(s).shift(r),
                ],
                &seq,
            )
            .unwrap();
            let rhs = ev.eval(&braided_factorial(n), &seq).unwrap();
            assert!(lhs == *rhs, "factorization at ({r},{s})");
        }
    }
}
