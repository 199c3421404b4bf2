//! Braid words, formal sums of braid words, and the standard elements of
//! the shuffle calculus: Matsumoto lifts, quantum shuffles, braided
//! binomials and factorials, block braidings, half and full twists.
//!
//! A word stores signed generator indices (1-based) in application order:
//! `gens[0]` acts first.  The paper-style product notation reads the other
//! way (rightmost factor acts first), so `display_letters` reverses.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BraidWord {
    gens: Vec<i32>,
}

impl BraidWord {
    pub fn identity() -> Self {
        BraidWord { gens: Vec::new() }
    }

    /// Build from generators in application order (first entry acts first).
    pub fn from_applied(gens: Vec<i32>) -> Self {
        assert!(gens.iter().all(|&g| g != 0));
        BraidWord { gens }
    }

    /// Build from paper product notation: leftmost factor acts last.
    pub fn from_display(letters: &[i32]) -> Self {
        BraidWord {
            gens: letters.iter().rev().copied().collect(),
        }
    }

    pub fn applied_gens(&self) -> &[i32] {
        &self.gens
    }

    /// Letters in paper product order (leftmost acts last).
    pub fn display_letters(&self) -> Vec<i32> {
        self.gens.iter().rev().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.gens.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn shift(&self, m: usize) -> Self {
        BraidWord {
            gens: self
                .gens
                .iter()
                .map(|&g| if g > 0 { g + m as i32 } else { g - m as i32 })
                .collect(),
        }
    }

    /// Group inverse: reversed word with inverted crossings.
    pub fn inverse(&self) -> Self {
        BraidWord {
            gens: self.gens.iter().rev().map(|&g| -g).collect(),
        }
    }

    /// self followed by `next` (application order concatenation).
    pub fn then(&self, next: &Self) -> Self {
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&next.gens);
        BraidWord { gens }
    }

    /// The permutation of strand positions induced by the word on `n`
    /// strands, as a one-line contents list: entry k is the input strand
    /// now sitting at position k (0-based strands).
    pub fn contents(&self, n: usize) -> Vec<usize> {
        let mut list: Vec<usize> = (0..n).collect();
        for &g in &self.gens {
            let i = g.unsigned_abs() as usize;
            assert!(i >= 1 && i < n, "generator {i} out of range for {n} strands");
            list.swap(i - 1, i);
        }
        list
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "id");
        }
        let mut first = true;
        for g in self.display_letters() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if g > 0 {
                write!(f, "P{g}")?;
            } else {
                write!(f, "P{}^-1", -g)?;
            }
        }
        Ok(())
    }
}

/// One-line contents list of a permutation (0-based).
pub type Perm = Vec<usize>;

pub fn perm_inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// Matsumoto lift of a permutation: the canonical reduced word obtained by
/// repeatedly swapping at the leftmost descent.  The word length equals the
/// inversion count, so the word is reduced; by Matsumoto's theorem any
/// other reduced word evaluates to the same operator.
pub fn matsumoto_lift(perm: &[usize]) -> BraidWord {
    {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        assert!(
            sorted.iter().copied().eq(0..perm.len()),
            "not a permutation: {perm:?}"
        );
    }
    let mut list = perm.to_vec();
    let mut display = Vec::new();
    loop {
        let Some(i) = (0..list.len().saturating_sub(1)).find(|&i| list[i] > list[i + 1]) else {
            break;
        };
        list.swap(i, i + 1);
        display.push((i + 1) as i32);
    }
    BraidWord::from_display(&display)
}

/// A formal integer combination of braid words.  The strand count is
/// contextual: evaluation takes it from the labeled sequence, and
/// constructors only sanity-check generator bounds.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidAlgebraElement {
    terms: Vec<(i64, BraidWord)>,
}

impl BraidAlgebraElement {
    pub fn zero(_strands: usize) -> Self {
        BraidAlgebraElement { terms: Vec::new() }
    }

    pub fn identity(_strands: usize) -> Self {
        BraidAlgebraElement {
            terms: vec![(1, BraidWord::identity())],
        }
    }

    pub fn generator(i: usize, strands: usize) -> Self {
        assert!(i >= 1 && i < strands);
        BraidAlgebraElement {
            terms: vec![(1, BraidWord::from_applied(vec![i as i32]))],
        }
    }

    pub fn from_word(word: BraidWord, strands: usize) -> Self {
        assert!(word.max_index() < strands.max(1));
        BraidAlgebraElement { terms: vec![(1, word)] }
    }

    pub fn from_terms(terms: Vec<(i64, BraidWord)>, _strands: usize) -> Self {
        let mut e = BraidAlgebraElement { terms };
        e.normalize();
        e
    }

    pub fn terms(&self) -> &[(i64, BraidWord)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(i64, BraidWord)> = Vec::with_capacity(self.terms.len());
        for (c, w) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.1 == w {
                    last.0 += c;
                    continue;
                }
            }
            out.push((c, w));
        }
        out.retain(|(c, _)| *c != 0);
        self.terms = out;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms, 0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(c, w)| (c * k, w.clone())).collect();
        Self::from_terms(terms, 0)
    }

    /// Mathematical product: `first` acts first, then self.
    pub fn after(&self, first: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * first.terms.len());
        for (c1, w1) in &first.terms {
            for (c2, w2) in &self.terms {
                terms.push((c1 * c2, w1.then(w2)));
            }
        }
        Self::from_terms(terms, 0)
    }

    pub fn shift(&self, m: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| (*c, w.shift(m)))
            .collect();
        Self::from_terms(terms, 0)
    }

    /// Minimum strand count required by the stored words.
    pub fn min_strands(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, w)| w.max_index() + 1)
            .max()
            .unwrap_or(1)
    }
}

/// Product in paper order: `factors[0] ... factors[k-1]` with the rightmost
/// factor applied first.
pub fn product(factors: &[&BraidAlgebraElement]) -> BraidAlgebraElement {
    assert!(!factors.is_empty());
    let mut acc = factors[factors.len() - 1].clone();
    for f in factors[..factors.len() - 1].iter().rev() {
        acc = f.after(&acc);
    }
    acc
}

impl fmt::Debug for BraidAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (c, w) in &self.terms {
            if first {
                if *c == 1 {
                    write!(f, "{w}")?;
                } else if *c == -1 {
                    write!(f, "-{w}")?;
                } else {
                    write!(f, "{c}*{w}")?;
                }
                first = false;
            } else if *c == 1 {
                write!(f, " + {w}")?;
            } else if *c == -1 {
                write!(f, " - {w}")?;
            } else if *c > 0 {
                write!(f, " + {c}*{w}")?;
            } else {
                write!(f, " - {}*{w}", -c)?;
            }
        }
        Ok(())
    }
}

/// Enumerate the shuffle permutations of a composition in lexicographic
/// order of their block-label sequences, as one-line contents lists.
fn shuffle_perms(parts: &[usize]) -> Vec<Perm> {
    let n: usize = parts.iter().sum();
    let mut results = Vec::new();
    // labels[k] = which block occupies output position k.
    let mut labels = Vec::with_capacity(n);
    let mut remaining = parts.to_vec();
    fn rec(labels: &mut Vec<usize>, remaining: &mut [usize], n: usize, results: &mut Vec<Perm>, parts: &[usize]) {
        if labels.len() == n {
            // Positions of block b receive the b-th run of strand numbers,
            // in increasing order.
            let mut offsets = Vec::with_capacity(parts.len());
            let mut acc = 0;
            for p in parts {
                offsets.push(acc);
                acc += p;
            }
            let mut next = offsets.clone();
            let mut perm = vec![0usize; n];
            for (k, &b) in labels.iter().enumerate() {
                perm[k] = next[b];
                next[b] += 1;
            }
            results.push(perm);
            return;
        }
        for b in 0..remaining.len() {
            if remaining[b] > 0 {
                remaining[b] -= 1;
                labels.push(b);
                rec(labels, remaining, n, results, parts);
                labels.pop();
                remaining[b] += 1;
            }
        }
    }
    rec(&mut labels, &mut remaining, n, &mut results, parts);
    results
}

/// Quantum shuffle: the sum of Matsumoto lifts over all shuffle
/// permutations of the given composition.
pub fn shuffle_sum(parts: &[usize]) -> BraidAlgebraElement {
    let n: usize = parts.iter().sum();
    let terms = shuffle_perms(parts)
        .into_iter()
        .map(|p| (1i64, matsumoto_lift(&p)))
        .collect();
    BraidAlgebraElement::from_terms(terms, n.max(1))
}

/// Braided binomial Bbin{r,s} = shuffle of the composition (r, s).
pub fn braided_binomial(r: usize, s: usize) -> BraidAlgebraElement {
    shuffle_sum(&[r, s])
}

/// Braided factorial (total symmetrizer) Bfac{n}.
pub fn braided_factorial(n: usize) -> BraidAlgebraElement {
    shuffle_sum(&vec![1; n])
}

/// Block braiding of the first m strands past the next n:
/// (Psi_n ... Psi_1)(Psi_{n+1} ... Psi_2) ... (Psi_{n+m-1} ... Psi_m).
pub fn block_braiding(m: usize, n: usize) -> BraidAlgebraElement {
    let mut display = Vec::with_capacity(m * n);
    for k in 1..=m {
        for i in (k..=n + k - 1).rev() {
            display.push(i as i32);
        }
    }
    BraidAlgebraElement::from_word(BraidWord::from_display(&display), (m + n).max(1))
}

fn halftwist_word(r: usize) -> BraidWord {
    let mut display = Vec::with_capacity(r * (r - 1) / 2);
    for k in 1..r {
        for i in (1..=k).rev() {
            display.push(i as i32);
        }
    }
    BraidWord::from_display(&display)
}

/// Signed half-twist A_r = (-1)^r Psi_1 (Psi_2 Psi_1) ... (Psi_{r-1} ... Psi_1),
/// the Matsumoto lift of the longest element with the contour-reversal sign.
pub fn antipode_halftwist(r: usize) -> BraidAlgebraElement {
    let sign = if r % 2 == 0 { 1 } else { -1 };
    BraidAlgebraElement::from_terms(vec![(sign, halftwist_word(r))], r.max(1))
}

/// Inverse of the signed half-twist.
pub fn antipode_halftwist_inverse(r: usize) -> BraidAlgebraElement {
    let sign = if r % 2 == 0 { 1 } else { -1 };
    BraidAlgebraElement::from_terms(vec![(sign, halftwist_word(r).inverse())], r.max(1))
}

/// Full twist theta_r = A_r A_r (the sign squares away).
pub fn full_twist(r: usize) -> BraidAlgebraElement {
    let w = halftwist_word(r);
    BraidAlgebraElement::from_terms(vec![(1, w.then(&w))], r.max(1))
}

/// Multinomial coefficient, for shuffle term-count checks.
pub fn multinomial(parts: &[usize]) -> u64 {
    let mut acc: u64 = 1;
    let mut total: u64 = 0;
    for &p in parts {
        for k in 1..=p as u64 {
            total += 1;
            acc = acc * total / k;
        }
    }
    acc
}

/// Parse a whitespace-separated word in paper order, e.g. "3 2 -1".
pub fn parse_word(s: &str) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for tok in s.split_whitespace() {
        let g: i32 = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator '{tok}'")))?;
        if g == 0 {
            return Err(Error::Parse("generator index 0".into()));
        }
        letters.push(g);
    }
    Ok(BraidWord::from_display(&letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disp(e: &BraidAlgebraElement) -> Vec<(i64, Vec<i32>)> {
        e.terms()
            .iter()
            .map(|(c, w)| (*c, w.display_letters()))
            .collect()
    }

    #[test]
    fn matsumoto_identity_is_empty() {
        assert!(matsumoto_lift(&[0, 1, 2, 3]).is_empty());
    }

    #[test]
    fn matsumoto_block_example() {
        // (4,5,1,2,3) in 1-based one-line notation.
        let w = matsumoto_lift(&[3, 4, 0, 1, 2]);
        assert_eq!(w.display_letters(), vec![2, 1, 3, 2, 4, 3]);
    }

    #[test]
    fn matsumoto_length_is_inversion_count() {
        // All of S_4 plus a few larger ones.
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 1 {
                return vec![vec![0]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for k in 0..n {
                    let mut q = p.clone();
                    q.insert(k, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for p in perms(4) {
            let w = matsumoto_lift(&p);
            assert_eq!(w.len(), perm_inversions(&p), "perm {p:?}");
            assert_eq!(w.contents(4), p);
        }
    }

    #[test]
    fn longest_element_of_s3_is_halftwist_word() {
        let w = matsumoto_lift(&[2, 1, 0]);
        let a3 = antipode_halftwist(3);
        assert_eq!(a3.terms().len(), 1);
        let (c, aw) = &a3.terms()[0];
        assert_eq!(*c, -1);
        assert_eq!(&w, aw);
    }

    #[test]
    fn shuffle_3_2_matches_listed_words() {
        let b = braided_binomial(3, 2);
        let expect: Vec<Vec<i32>> = vec![
            vec![],
            vec![3],
            vec![4, 3],
            vec![2, 3],
            vec![2, 4, 3],
            vec![1, 2, 3],
            vec![3, 2, 4, 3],
            vec![1, 2, 4, 3],
            vec![1, 3, 2, 4, 3],
            vec![2, 1, 3, 2, 4, 3],
        ];
        let got: Vec<Vec<i32>> = b.terms().iter().map(|(_, w)| w.display_letters()).collect();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut expect_sorted = expect.clone();
        expect_sorted.sort();
        assert_eq!(got_sorted, expect_sorted);
        assert!(b.terms().iter().all(|(c, _)| *c == 1));
        assert_eq!(b.term_count(), 10);
    }

    #[test]
    fn shuffle_term_counts() {
        assert_eq!(braided_binomial(2, 3).term_count(), 10);
        assert_eq!(multinomial(&[2, 3]), 10);
        assert_eq!(shuffle_sum(&[0, 4]).term_count(), 1);
        assert!(shuffle_sum(&[0, 4]).terms()[0].1.is_empty());
        assert_eq!(braided_factorial(3).term_count(), 6);
    }

    #[test]
    fn braided_integers_explicit() {
        assert_eq!(disp(&braided_binomial(1, 1)), vec![(1, vec![]), (1, vec![1])]);
        let b12 = braided_binomial(1, 2);
        let mut w: Vec<Vec<i32>> = b12.terms().iter().map(|(_, w)| w.display_letters()).collect();
        w.sort();
        assert_eq!(w, vec![vec![], vec![1], vec![2, 1]]);
        let b21 = braided_binomial(2, 1);
        let mut w: Vec<Vec<i32>> = b21.terms().iter().map(|(_, w)| w.display_letters()).collect();
        w.sort();
        assert_eq!(w, vec![vec![], vec![1, 2], vec![2]]);
    }

    #[test]
    fn block_braiding_examples() {
        assert_eq!(
            block_braiding(1, 1).terms()[0].1.display_letters(),
            vec![1]
        );
        assert_eq!(
            block_braiding(2, 1).terms()[0].1.display_letters(),
            vec![1, 2]
        );
        // Underlying permutation moves the first block past the second.
        let e = block_braiding(2, 3);
        let w = &e.terms()[0].1;
        assert_eq!(w.contents(5), vec![2, 3, 4, 0, 1]);
    }

    #[test]
    fn shift_example() {
        let e = BraidAlgebraElement::generator(1, 2).shift(3);
        assert_eq!(e.terms()[0].1.display_letters(), vec![4]);
    }

    #[test]
    fn halftwist_examples() {
        let a1 = antipode_halftwist(1);
        assert_eq!(disp(&a1), vec![(-1, vec![])]);
        let a5 = antipode_halftwist(5);
        assert_eq!(a5.terms().len(), 1);
        let (c, w) = &a5.terms()[0];
        assert_eq!(*c, -1);
        assert_eq!(w.len(), 10);
        assert_eq!(
            w.display_letters(),
            vec![1, 2, 1, 3, 2, 1, 4, 3, 2, 1]
        );
        // Longest-element permutation.
        assert_eq!(w.contents(5), vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn full_twist_is_pure_braid() {
        let t = full_twist(4);
        let (c, w) = &t.terms()[0];
        assert_eq!(*c, 1);
        assert_eq!(w.contents(4), vec![0, 1, 2, 3]);
        assert_eq!(w.len(), 12); // r(r-1) crossings
    }

    #[test]
    fn product_and_inverse_words() {
        let a = BraidAlgebraElement::generator(1, 3);
        let b = BraidAlgebraElement::generator(2, 3);
        // product([a, b]) applies b first: word "1 2" in display order.
        let p = product(&[&a, &b]);
        assert_eq!(p.terms()[0].1.display_letters(), vec![1, 2]);
        let w = BraidWord::from_display(&[1, 2]);
        let winv = w.inverse();
        assert_eq!(winv.display_letters(), vec![-2, -1]);
        assert!(w.then(&winv).contents(3).iter().copied().eq(0..3));
    }
}
