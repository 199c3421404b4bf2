//! Hopf bimodule actions on (s;Y;t) components, Yetter-Drinfeld structure
//! on right coinvariants via the adjoint action, the dual pairing operators
//! e/f/K, the chi and iota fusion maps, and the braiding of fused modules.
//!
//! Everything is built as a braid algebra element first and evaluated once
//! per (element, pattern); the deconcatenation coactions are bookkeeping
//! (bracket placement), not operators, and enter the checks as indexed sums.

use std::collections::BTreeMap;

use crate::braid::{
    antipode_halftwist, antipode_halftwist_inverse, block_braiding, braided_binomial,
    braided_factorial, product, BraidAlgebraElement, BraidWord,
};
use crate::error::{Error, Result};
use crate::rep::{Evaluator, Seq, SpaceId, SparseMat, TensorOperator};
use crate::scalar::Scalar;

/// Strand sequence of (s_1; V_1; s_2; V_2; ...; s_n; V_n; s_{n+1}).
pub fn pattern_seq(x: SpaceId, runs: &[usize], vertices: &[SpaceId]) -> Seq {
    assert_eq!(runs.len(), vertices.len() + 1);
    let mut seq = Vec::new();
    for (k, &r) in runs.iter().enumerate() {
        seq.extend(std::iter::repeat(x).take(r));
        if k < vertices.len() {
            seq.push(vertices[k]);
        }
    }
    seq
}

// ---------------------------------------------------------------------------
// Hopf bimodule actions.
// ---------------------------------------------------------------------------

/// Left action of (r) on (s;Y;t): the full braided binomial.
pub fn left_action(r: usize, s: usize, t: usize) -> BraidAlgebraElement {
    braided_binomial(r, s + 1 + t)
}

/// Right action of (s;Y;t) on (r).
pub fn right_action(s: usize, t: usize, r: usize) -> BraidAlgebraElement {
    braided_binomial(s + 1 + t, r)
}

/// Graded component of the left action into (s+i; Y; t+r-i).
pub fn from_left(i: usize, r: usize, s: usize, t: usize) -> BraidAlgebraElement {
    product(&[
        &braided_binomial(i, s),
        &braided_binomial(r - i, t).shift(i + s + 1),
        &block_braiding(r - i, s + 1).shift(i),
    ])
}

/// Graded component of the right action into (s+i; Y; t+r-i).
pub fn from_right(i: usize, s: usize, t: usize, r: usize) -> BraidAlgebraElement {
    product(&[
        &braided_binomial(s, i),
        &braided_binomial(t, r - i).shift(s + i + 1),
        &block_braiding(t + 1, i).shift(s),
    ])
}

/// Restricted right action on right coinvariants with M strands before the
/// final vertex: (pattern) (x) (j) -> (longer pattern), j strands braided
/// past the last vertex and shuffled in.
pub fn from_right_coinv(m: usize, j: usize) -> BraidAlgebraElement {
    product(&[
        &braided_binomial(m, j),
        &block_braiding(1, j).shift(m),
    ])
}

// ---------------------------------------------------------------------------
// Adjoint action.
// ---------------------------------------------------------------------------

/// Left adjoint action operator Adj_{r,s}: (r) (x) (s;Y) -> (r+s;Y), where
/// `s` counts every module strand except the final vertex.  The same
/// element gives the cumulative adjoint on multivertex patterns.
pub fn adj(r: usize, s: usize) -> BraidAlgebraElement {
    let mut acc = BraidAlgebraElement::zero(r + s + 1);
    for i in 0..=r {
        let window = product(&[
            &antipode_halftwist(i),
            &block_braiding(1, i),
            &block_braiding(i, 1),
        ])
        .shift(r - i + s);
        let term = product(&[
            &braided_binomial(r - i, s + i),
            &braided_binomial(s, i).shift(r - i),
            &window,
            &block_braiding(i, s).shift(r - i),
        ]);
        acc = acc.add(&term);
    }
    acc
}

/// Adjoint action on a full Hopf bimodule component (s;Y;t).
pub fn adj_bimodule(r: usize, s: usize, t: usize) -> BraidAlgebraElement {
    let w = s + 1 + t;
    let mut acc = BraidAlgebraElement::zero(r + w);
    for i in 0..=r {
        let term = product(&[
            &braided_binomial(r - i, w + i),
            &braided_binomial(w, i).shift(r - i),
            &antipode_halftwist(i).shift(r - i + w),
            &block_braiding(i, w).shift(r - i),
        ]);
        acc = acc.add(&term);
    }
    acc
}

/// The operator T_r of the alternative adjoint-action formula:
/// (id - Psi_r Psi_r Psi_{r-1} ... Psi_1) ... (id - Psi_r Psi_r).
pub fn t_r_operator(r: usize) -> BraidAlgebraElement {
    let n = r + 1;
    let mut acc = BraidAlgebraElement::identity(n);
    for k in (1..=r).rev() {
        let mut display = vec![r as i32, r as i32];
        for i in (k..r).rev() {
            display.push(i as i32);
        }
        let w = BraidAlgebraElement::from_word(BraidWord::from_display(&display), n);
        let factor = BraidAlgebraElement::identity(n).sub(&w);
        acc = factor.after(&acc);
    }
    acc
}

// ---------------------------------------------------------------------------
// Fusion maps.
// ---------------------------------------------------------------------------

/// chi on two-vertex Hopf bimodule components,
/// (s1;Y;s2) (x) (t1;Z;t2) -> sum of graded pieces.
pub fn chi_two_vertex(s1: usize, s2: usize, t1: usize, t2: usize) -> BraidAlgebraElement {
    let sa = s1 + 1 + s2;
    let sb = t1 + 1 + t2;
    let mut acc = BraidAlgebraElement::zero(sa + sb);
    for i in 0..=s2 {
        for j in 0..=t1 {
            let term = product(&[
                &braided_binomial(sa - i, j),
                &braided_binomial(i, sb - j).shift(j + sa - i),
                &block_braiding(i, j).shift(sa - i),
            ]);
            acc = acc.add(&term);
        }
    }
    acc
}

/// chi on multivertex components; runs/vertex counts fix the strand
/// arithmetic, the trailing run of the first factor and the leading run of
/// the second are the propagation ranges.
pub fn chi_multivertex(a_runs: &[usize], b_runs: &[usize]) -> BraidAlgebraElement {
    let n_a = a_runs.len() - 1;
    let n_b = b_runs.len() - 1;
    let sa: usize = a_runs.iter().sum::<usize>() + n_a;
    let sb: usize = b_runs.iter().sum::<usize>() + n_b;
    let last_a = *a_runs.last().unwrap();
    let first_b = b_runs[0];
    let mut acc = BraidAlgebraElement::zero(sa + sb);
    for i in 0..=last_a {
        for j in 0..=first_b {
            let term = product(&[
                &braided_binomial(sa - i, j),
                &braided_binomial(i, sb - j).shift(j + sa - i),
                &block_braiding(i, j).shift(sa - i),
            ]);
            acc = acc.add(&term);
        }
    }
    acc
}

/// One component of the iota map of right coinvariants: the deconcatenated
/// (j) of the second factor acts from the right on the first factor, which
/// has `m` strands before its final vertex.
pub fn iota_component(m: usize, j: usize) -> BraidAlgebraElement {
    from_right_coinv(m, j)
}

/// Full iota map: first factor with `m` strands before its last vertex,
/// second factor with leading run t1.
pub fn iota_full(m: usize, t1: usize) -> BraidAlgebraElement {
    let mut acc = BraidAlgebraElement::zero(m + 2 + t1);
    for j in 0..=t1 {
        acc = acc.add(&iota_component(m, j));
    }
    acc
}

// ---------------------------------------------------------------------------
// Braiding of fused Yetter-Drinfeld modules.
// ---------------------------------------------------------------------------

/// Fusion braiding B_{s,t}: (s;Y;t;Z) -> sum_i (i;Z;s-i+t;Y), as
/// -FromRight{s,t+1} Shift^{s+1} A_{t+1} with all t+1 strands acting.
pub fn fusion_braiding(s: usize, t: usize) -> BraidAlgebraElement {
    product(&[
        &braided_binomial(s, t + 1),
        &block_braiding(1, t + 1).shift(s),
        &antipode_halftwist(t + 1).shift(s + 1),
    ])
    .scale(-1)
}

/// Squared-braiding closed form:
/// sum_i Shift^{i+1} Adj_{s-i,t} Shift^i Psi_{s-i,1} Shift^s theta_{t+2}.
pub fn squared_braiding_formula(s: usize, t: usize) -> BraidAlgebraElement {
    let theta = {
        let a = antipode_halftwist(t + 2);
        a.after(&a)
    };
    let mut acc = BraidAlgebraElement::zero(s + t + 2);
    for i in 0..=s {
        let term = product(&[
            &adj(s - i, t).shift(i + 1),
            &block_braiding(s - i, 1).shift(i),
            &theta.clone().shift(s),
        ]);
        acc = acc.add(&term);
    }
    acc
}

/// Standard Yetter-Drinfeld braiding of (s;Y) (x) (t;Z) in flat form:
/// deconcatenate (k), braid the rest past (t;Z), act by the adjoint.
pub fn standard_yd_braiding(s: usize, t: usize) -> BraidAlgebraElement {
    let mut acc = BraidAlgebraElement::zero(s + t + 2);
    for k in 0..=s {
        let term = product(&[
            &adj(k, t),
            &block_braiding(s + 1 - k, t + 1).shift(k),
        ]);
        acc = acc.add(&term);
    }
    acc
}

/// Inverse standard braiding on (t;Z) (x) (s;Y): undo the block crossing,
/// deconcatenate, return the (k) strands with inverse crossings and the
/// inverse antipode, then act.
pub fn standard_yd_braiding_inverse(t: usize, s: usize) -> BraidAlgebraElement {
    let undo_outer = invert_single(&block_braiding(s + 1, t + 1));
    let mut acc = BraidAlgebraElement::zero(s + t + 2);
    for k in 0..=s {
        let undo_inner = invert_single(&block_braiding(s + 1 - k, k));
        let term = product(&[
            &adj(k, t).shift(s + 1 - k),
            &antipode_halftwist_inverse(k).shift(s + 1 - k),
            &undo_inner,
            &undo_outer,
        ]);
        acc = acc.add(&term);
    }
    acc
}

fn invert_single(e: &BraidAlgebraElement) -> BraidAlgebraElement {
    assert_eq!(e.terms().len(), 1);
    let (c, w) = &e.terms()[0];
    assert_eq!(*c, 1);
    BraidAlgebraElement::from_word(w.inverse(), w.max_index() + 1)
}

// ---------------------------------------------------------------------------
// Dual pairing operators on A (x) X (x) (s;Y).
// ---------------------------------------------------------------------------

/// Contraction of a dual slot with the following X slot under the identity
/// pairing in dual bases: A (x) X (x) R -> R.
fn contract_matrix<K: Scalar>(dx: usize, rest: usize) -> SparseMat<K> {
    let mut m = SparseMat::zero(rest, dx * dx * rest);
    for a in 0..dx {
        for r in 0..rest {
            m.insert_add(r, (a * dx + a) * rest + r, K::one());
        }
    }
    m
}

/// e_s as a matrix A (x) (s;Y) -> (s-1;Y); the s = 0 case is the
/// structural zero map (the coaction has no degree-1 part).
pub fn e_matrix<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    s: usize,
) -> SparseMat<K> {
    let dx = ev.ctx().dim(x);
    let dy = ev.ctx().dim(y);
    let module = dx.pow(s as u32) * dy;
    if s == 0 {
        return SparseMat::zero(0, dx * module);
    }
    let rest = dx.pow((s - 1) as u32) * dy;
    contract_matrix(dx, rest)
}

/// The monodromy-loop defect K(s+1): A (x) X (x) (s;Y) -> (s;Y), pairing
/// the first X strand after it loops around all of (s;Y).
pub fn k_matrix<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    s: usize,
) -> Result<SparseMat<K>> {
    let dx = ev.ctx().dim(x);
    let mut display: Vec<i32> = Vec::new();
    for i in 1..=(s + 1) as i32 {
        display.push(i);
    }
    for i in (1..=(s + 1) as i32).rev() {
        display.push(i);
    }
    // The palindromic loop word reads the same in either order.
    let word = BraidWord::from_display(&display);
    let mut seq = vec![x];
    seq.extend(std::iter::repeat(x).take(s));
    seq.push(y);
    let (oseq, loop_mat) = ev.eval_word(&word, &seq)?;
    if oseq != seq {
        return Err(Error::DimMismatch("loop is not a pure braid".into()));
    }
    let rest = ev.ctx().seq_dim(&seq[1..]);
    // K[(m), (a,i,m')] = Loop[(a,m), (i,m')].
    let mut out = SparseMat::zero(rest, dx * dx * rest);
    for (&(row, col), v) in &loop_mat.entries {
        let (a, m) = (row / rest, row % rest);
        let (i, mp) = (col / rest, col % rest);
        out.insert_add(m, (a * dx + i) * rest + mp, v.clone());
    }
    Ok(out)
}

/// The commutator identity of the dual generator:
/// e_{s+1} f_s - f_{s-1} e_s Psi_1 = rho (x) id - K(s+1), for s >= 1.
pub fn check_efk_lemma<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    s: usize,
) -> Result<Option<String>> {
    assert!(s >= 1);
    let dx = ev.ctx().dim(x);
    let mut mod_seq = vec![x; s + 1];
    mod_seq.push(y);
    // (s+1;Y) flat; the lemma domain is A (x) that.
    let dim_mod = ev.ctx().seq_dim(&mod_seq);
    let rest_s = ev.ctx().seq_dim(&mod_seq[1..]); // (s;Y)
    let rest_s1 = ev.ctx().seq_dim(&mod_seq[2..]); // (s-1;Y)

    let with_dual = |m: &SparseMat<K>| -> SparseMat<K> {
        // id_A (x) m
        let mut out = SparseMat::zero(dx * m.rows, dx * m.cols);
        for a in 0..dx {
            for (&(r, c), v) in &m.entries {
                out.insert_add(a * m.rows + r, a * m.cols + c, v.clone());
            }
        }
        out
    };

    // f_s = Adj_{1,s} on X (x) (s;Y).
    let f_s = {
        let op = ev.eval(&adj(1, s), &mod_seq)?;
        op.single_block()
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| SparseMat::zero(dim_mod, dim_mod))
    };
    // Term 1: e_{s+1} o f_s = contract after the adjoint.
    let t1 = contract_matrix::<K>(dx, rest_s).mul(&with_dual(&f_s));

    // Term 2: f_{s-1} o e_s o Psi_1 = Adj_{1,s-1} after contracting the
    // braided-in strand.
    let psi1 = {
        let (oseq, m) = ev.eval_word(&BraidWord::from_display(&[1]), &mod_seq)?;
        debug_assert_eq!(ev.ctx().seq_dim(&oseq), dim_mod);
        m
    };
    let contracted = contract_matrix::<K>(dx, rest_s1 * dx)
        .mul(&with_dual(&psi1));
    // contracted: A (x) X (x) (s;Y) -> X (x) (s-1;Y)  (rows reordered as
    // the remaining flat sequence).
    let f_sm1 = {
        let mut seq = vec![x; s];
        seq.push(y);
        let op = ev.eval(&adj(1, s - 1), &seq)?;
        op.single_block()
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| SparseMat::zero(rest_s, rest_s))
    };
    let t2 = f_sm1.mul(&contracted);

    // rho (x) id.
    let rho = contract_matrix::<K>(dx, rest_s);
    let k = k_matrix(ev, x, y, s)?;

    let lhs = t1.add(&t2.scale(&K::from_i64(-1)));
    let rhs = rho.add(&k.scale(&K::from_i64(-1)));
    let diff = lhs.add(&rhs.scale(&K::from_i64(-1)));
    if diff.is_zero() {
        Ok(None)
    } else {
        let (&(r, c), v) = diff.entries.iter().next().unwrap();
        Ok(Some(format!("efk lemma s={s}: entry ({r},{c}) off by {v}")))
    }
}

// ---------------------------------------------------------------------------
// Identity checks (exact, on a given context).
// ---------------------------------------------------------------------------

fn diff_witness<K: Scalar>(
    lhs: &TensorOperator<K>,
    rhs: &TensorOperator<K>,
    label: &str,
) -> Option<String> {
    lhs.first_difference(rhs).map(|w| format!("{label}: {w}"))
}

/// The graded blocks of the full left/right actions equal the FromLeft /
/// FromRight component formulas.
pub fn check_action_blocks<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    r: usize,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    // domain (r) (x) (s;Y;t)
    let mut seq = vec![x; r + s];
    seq.push(y);
    seq.extend(std::iter::repeat(x).take(t));
    let full = ev.eval(&left_action(r, s, t), &seq)?;
    for i in 0..=r {
        let comp = ev.eval(&from_left(i, r, s, t), &seq)?;
        let (cseq, cmat) = match comp.single_block() {
            Some(p) => p,
            None => return Ok(Some(format!("FromLeft i={i} not single-graded"))),
        };
        let got = full.block(cseq).cloned().unwrap_or_else(|| {
            SparseMat::zero(cmat.rows, cmat.cols)
        });
        if &got != cmat {
            return Ok(Some(format!("left block i={i} differs at (r,s,t)=({r},{s},{t})")));
        }
    }
    // domain (s;Y;t) (x) (r)
    let mut seq2 = vec![x; s];
    seq2.push(y);
    seq2.extend(std::iter::repeat(x).take(t));
    seq2.extend(std::iter::repeat(x).take(r));
    let full2 = ev.eval(&right_action(s, t, r), &seq2)?;
    for i in 0..=r {
        let comp = ev.eval(&from_right(i, s, t, r), &seq2)?;
        let (cseq, cmat) = match comp.single_block() {
            Some(p) => p,
            None => return Ok(Some(format!("FromRight i={i} not single-graded"))),
        };
        let got = full2.block(cseq).cloned().unwrap_or_else(|| {
            SparseMat::zero(cmat.rows, cmat.cols)
        });
        if &got != cmat {
            return Ok(Some(format!("right block i={i} differs at (s,t,r)=({s},{t},{r})")));
        }
    }
    Ok(None)
}

/// The four Hopf-bimodule shuffle identities at (r,s,t).
pub fn check_hopf_bimodule<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    r: usize,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    // Left action domain (r)(s;Y;t).
    let mut seq_l = vec![x; r + s];
    seq_l.push(y);
    seq_l.extend(std::iter::repeat(x).take(t));
    // Right action domain (s;Y;t)(r).
    let mut seq_r = vec![x; s];
    seq_r.push(y);
    seq_r.extend(std::iter::repeat(x).take(t + r));

    // (1) left action vs left coaction.
    let mut lhs = TensorOperator::zero(seq_l.clone());
    for i in 0..=r {
        lhs = lhs.add(&ev.eval(&from_left(i, r, s, t), &seq_l)?.scale_i64((i + s + 1) as i64));
    }
    let mut rhs = TensorOperator::zero(seq_l.clone());
    for i in 0..=r {
        for j in 0..=s {
            let term = product(&[
                &braided_binomial(i, j),
                &braided_binomial(r - i, s - j + 1 + t).shift(i + j),
                &block_braiding(r - i, j).shift(i),
            ]);
            rhs = rhs.add(&*ev.eval(&term, &seq_l)?);
        }
    }
    if let Some(w) = diff_witness(&lhs, &rhs, "left-left") {
        return Ok(Some(w));
    }

    // (2) left action vs right coaction.
    let mut lhs = TensorOperator::zero(seq_l.clone());
    for i in 0..=r {
        lhs = lhs.add(
            &ev.eval(&from_left(i, r, s, t), &seq_l)?
                .scale_i64((t + r - i + 1) as i64),
        );
    }
    let mut rhs = TensorOperator::zero(seq_l.clone());
    for i in 0..=r {
        for j in 0..=t {
            let term = product(&[
                &braided_binomial(i, s + 1 + j),
                &braided_binomial(r - i, t - j).shift(i + s + 1 + j),
                &block_braiding(r - i, s + 1 + j).shift(i),
            ]);
            rhs = rhs.add(&*ev.eval(&term, &seq_l)?);
        }
    }
    if let Some(w) = diff_witness(&lhs, &rhs, "left-right") {
        return Ok(Some(w));
    }

    // (3) right action vs right coaction.
    let mut lhs = TensorOperator::zero(seq_r.clone());
    for i in 0..=r {
        lhs = lhs.add(
            &ev.eval(&from_right(i, s, t, r), &seq_r)?
                .scale_i64((t + r - i + 1) as i64),
        );
    }
    let mut rhs = TensorOperator::zero(seq_r.clone());
    for i in 0..=r {
        for j in 0..=t {
            let term = product(&[
                &braided_binomial(s + 1 + t - j, i),
                &braided_binomial(j, r - i).shift(s + 1 + t - j + i),
                &block_braiding(j, i).shift(s + 1 + t - j),
            ]);
            rhs = rhs.add(&*ev.eval(&term, &seq_r)?);
        }
    }
    if let Some(w) = diff_witness(&lhs, &rhs, "right-right") {
        return Ok(Some(w));
    }

    // (4) right action vs left coaction.
    let mut lhs = TensorOperator::zero(seq_r.clone());
    for i in 0..=r {
        lhs = lhs.add(
            &ev.eval(&from_right(i, s, t, r), &seq_r)?
                .scale_i64((s + i + 1) as i64),
        );
    }
    let mut rhs = TensorOperator::zero(seq_r.clone());
    for i in 0..=r {
        for j in 0..=s {
            let term = product(&[
                &braided_binomial(j, i),
                &braided_binomial(s - j + 1 + t, r - i).shift(j + i),
                &block_braiding(s + 1 + t - j, i).shift(j),
            ]);
            rhs = rhs.add(&*ev.eval(&term, &seq_r)?);
        }
    }
    if let Some(w) = diff_witness(&lhs, &rhs, "right-left") {
        return Ok(Some(w));
    }
    Ok(None)
}

/// Relative antipode on (s;Y;t) acts as -A_{s+1+t}.
pub fn check_relative_antipode<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; s];
    seq.push(y);
    seq.extend(std::iter::repeat(x).take(t));
    let w = s + 1 + t;
    let mut lhs = TensorOperator::zero(seq.clone());
    for i in 0..=s {
        for j in 0..=t {
            let term = product(&[
                &braided_binomial(w - j, j),
                &braided_binomial(i, s - i + 1 + t - j),
                &antipode_halftwist(i),
                &antipode_halftwist(j).shift(w - j),
            ]);
            lhs = lhs.add(&*ev.eval(&term, &seq)?);
        }
    }
    let rhs = ev.eval(&antipode_halftwist(w).scale(-1), &seq)?;
    Ok(diff_witness(&lhs, &rhs, &format!("relative antipode (s,t)=({s},{t})")))
}

/// The squared relative antipode on (s;Y) is the full twist theta_{s+1}.
pub fn check_sigma2<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    s: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; s];
    seq.push(y);
    let mut lhs = TensorOperator::zero(seq.clone());
    for i in 0..=s {
        let term = product(&[&adj(i, s - i), &antipode_halftwist(i)]);
        lhs = lhs.add(&*ev.eval(&term, &seq)?);
    }
    let theta = antipode_halftwist(s + 1);
    let theta = theta.after(&theta);
    let rhs = ev.eval(&theta, &seq)?;
    Ok(diff_witness(&lhs, &rhs, &format!("sigma2 s={s}")))
}

/// The adjoint action is an action:
/// Adj_{r,s+t} Shift^r Adj_{s,t} = Adj_{r+s,t} Bbin{r,s}.
pub fn check_action_property<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    r: usize,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; r + s + t];
    seq.push(y);
    let lhs = product(&[&adj(r, s + t), &adj(s, t).shift(r)]);
    let rhs = product(&[&adj(r + s, t), &braided_binomial(r, s)]);
    let l = ev.eval(&lhs, &seq)?;
    let rr = ev.eval(&rhs, &seq)?;
    Ok(diff_witness(&l, &rr, &format!("action property (r,s,t)=({r},{s},{t})")))
}

/// Bfac{r} T_r = Adj_{r,0} Bfac{r} on (r;Y).
pub fn check_t_r_relation<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    r: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; r];
    seq.push(y);
    let lhs = product(&[&braided_factorial(r), &t_r_operator(r)]);
    let rhs = product(&[&adj(r, 0), &braided_factorial(r)]);
    let l = ev.eval(&lhs, &seq)?;
    let rr = ev.eval(&rhs, &seq)?;
    Ok(diff_witness(&l, &rr, &format!("T_r relation r={r}")))
}

/// Yetter-Drinfeld axiom for the adjoint action and deconcatenation
/// coaction on a module with leading run `s` and `w` strands in total
/// (one-vertex: w = s+1; two-vertex (s;Y;t;Z): w = s+t+2).
pub fn check_yd_axiom<K: Scalar>(
    ev: &Evaluator<K>,
    seq_module: &[SpaceId],
    x: SpaceId,
    r: usize,
    s: usize,
) -> Result<Option<String>> {
    let w = seq_module.len();
    let mut seq = vec![x; r];
    seq.extend_from_slice(seq_module);
    // The adjoint on a multivertex module scatters over gradings with
    // different leading runs, and the coaction split ranges over the
    // leading run of each block, so the left side composes block by block.
    let mut lhs = TensorOperator::zero(seq.clone());
    for i in 0..=r {
        let inner = product(&[&adj(i, w - 1), &block_braiding(r - i, w).shift(i)]);
        let acted = ev.eval(&inner, &seq)?;
        for (bseq, mat) in &acted.blocks {
            let leading = bseq.iter().position(|&sp| sp != x).unwrap_or(bseq.len());
            for j in 0..=leading {
                let outer = product(&[
                    &braided_binomial(j, r - i),
                    &block_braiding(w + i - j, r - i).shift(j),
                ]);
                let op = ev.eval(&outer, bseq)?;
                for (fseq, m2) in &op.blocks {
                    let prod = m2.mul(mat);
                    if prod.is_zero() {
                        continue;
                    }
                    match lhs.blocks.get_mut(fseq) {
                        Some(e) => *e = e.add(&prod),
                        None => {
                            lhs.blocks.insert(fseq.clone(), prod);
                        }
                    }
                }
            }
        }
    }
    let mut rhs = TensorOperator::zero(seq.clone());
    for i in 0..=r {
        for j in 0..=s {
            let term = product(&[
                &braided_binomial(i, j),
                &adj(r - i, w - 1 - j).shift(i + j),
                &block_braiding(r - i, j).shift(i),
            ]);
            rhs = rhs.add(&*ev.eval(&term, &seq)?);
        }
    }
    Ok(diff_witness(&lhs, &rhs, &format!("YD axiom r={r} s={s} w={w}")))
}

/// The fused coaction square of the fusion intertwining: iota followed by
/// deconcatenation up to the first vertex equals the codiagonal coaction
/// followed by iota, checked block by block including the bracket position.
pub fn check_fusion_coaction_square<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    z: SpaceId,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; s];
    seq.push(y);
    seq.extend(std::iter::repeat(x).take(t));
    seq.push(z);
    // Keyed by (split length k, codomain flat sequence).
    let mut lhs: BTreeMap<(usize, Seq), SparseMat<K>> = BTreeMap::new();
    for j in 0..=t {
        let op = ev.eval(&iota_component(s, j), &seq)?;
        for (cseq, m) in &op.blocks {
            for k in 0..=(s + j) {
                lhs.entry((k, cseq.clone()))
                    .and_modify(|e| *e = e.add(m))
                    .or_insert_with(|| m.clone());
            }
        }
    }
    let mut rhs: BTreeMap<(usize, Seq), SparseMat<K>> = BTreeMap::new();
    for a in 0..=s {
        for b in 0..=t {
            let rearrange = product(&[
                &braided_binomial(a, b),
                &block_braiding(s - a + 1, b).shift(a),
            ]);
            for jp in 0..=(t - b) {
                let term = product(&[&iota_component(s - a, jp).shift(a + b), &rearrange]);
                let op = ev.eval(&term, &seq)?;
                for (cseq, m) in &op.blocks {
                    rhs.entry((a + b, cseq.clone()))
                        .and_modify(|e| *e = e.add(m))
                        .or_insert_with(|| m.clone());
                }
            }
        }
    }
    let keys: std::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).cloned().collect();
    for key in keys {
        let zero = SparseMat::zero(0, 0);
        let l = lhs.get(&key).unwrap_or(&zero);
        let r = rhs.get(&key).unwrap_or(&zero);
        let same = if l.rows == 0 {
            r.is_zero()
        } else if r.rows == 0 {
            l.is_zero()
        } else {
            l == r
        };
        if !same {
            return Ok(Some(format!(
                "fusion coaction square (s,t)=({s},{t}) differs at split {}",
                key.0
            )));
        }
    }
    Ok(None)
}

/// The fused action square: cumulative adjoint after iota equals iota after
/// the diagonal adjoint action.
pub fn check_fusion_action_square<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    z: SpaceId,
    r: usize,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; r + s];
    seq.push(y);
    seq.extend(std::iter::repeat(x).take(t));
    seq.push(z);
    let lhs_elem = {
        let mut acc = BraidAlgebraElement::zero(seq.len());
        for j in 0..=t {
            acc = acc.add(&iota_component(s, j).shift(r));
        }
        adj(r, s + 1 + t).after(&acc)
    };
    let lhs = ev.eval(&lhs_elem, &seq)?;
    let mut rhs = TensorOperator::zero(seq.clone());
    for i in 0..=r {
        let mut iota_sum = BraidAlgebraElement::zero(seq.len());
        for j in 0..=(r - i + t) {
            iota_sum = iota_sum.add(&iota_component(i + s, j));
        }
        let term = product(&[
            &iota_sum,
            &adj(r - i, t).shift(i + s + 1),
            &adj(i, s),
            &block_braiding(r - i, s + 1).shift(i),
        ]);
        rhs = rhs.add(&*ev.eval(&term, &seq)?);
    }
    Ok(diff_witness(&lhs, &rhs, &format!("fusion action square (r,s,t)=({r},{s},{t})")))
}

/// Associativity of iota on (s;Y)(t;Z)(u;W).
pub fn check_iota_associative<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    z: SpaceId,
    w_space: SpaceId,
    s: usize,
    t: usize,
    u: usize,
) -> Result<Option<String>> {
    let mut seq = vec![x; s];
    seq.push(y);
    seq.extend(std::iter::repeat(x).take(t));
    seq.push(z);
    seq.extend(std::iter::repeat(x).take(u));
    seq.push(w_space);
    // iota(iota(a,b),c): the fused first factor always has s+t+1 strands
    // before its last vertex.
    let inner_ab = iota_full(s, t);
    let outer = {
        let mut acc = BraidAlgebraElement::zero(seq.len());
        for k in 0..=u {
            acc = acc.add(&iota_component(s + t + 1, k));
        }
        acc
    };
    let lhs = ev.eval(&outer.after(&inner_ab), &seq)?;
    // iota(a, iota(b,c)): per component of the inner product the leading
    // run of the fused second factor is t+k.
    let mut rhs = TensorOperator::zero(seq.clone());
    for k in 0..=u {
        let inner = iota_component(t, k).shift(s + 1);
        let mut outer_sum = BraidAlgebraElement::zero(seq.len());
        for j in 0..=(t + k) {
            outer_sum = outer_sum.add(&iota_component(s, j));
        }
        rhs = rhs.add(&*ev.eval(&outer_sum.after(&inner), &seq)?);
    }
    Ok(diff_witness(&lhs, &rhs, &format!("iota associativity ({s},{t},{u})")))
}

/// B^{-1} B = id, via the intertwining route: the composite
/// B iota_{Y,Z} Psi_std^{-1} must equal iota_{Z,Y} on the whole degree
/// sector, which certifies the two-sided inverse without inverting
/// anything.
pub fn check_braiding_inverse<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    z: SpaceId,
    n: usize,
) -> Result<Option<String>> {
    // Sector of fused (i;Z; n-i; Y) patterns (inputs z (x) y).
    let patterns_zy: Vec<Seq> = (0..=n)
        .map(|i| {
            let mut s = vec![x; i];
            s.push(z);
            s.extend(std::iter::repeat(x).take(n - i));
            s.push(y);
            s
        })
        .collect();
    let patterns_yz: Vec<Seq> = (0..=n)
        .map(|i| {
            let mut s = vec![x; i];
            s.push(y);
            s.extend(std::iter::repeat(x).take(n - i));
            s.push(z);
            s
        })
        .collect();
    let sector = |pats: &[Seq]| -> (Vec<usize>, usize) {
        let mut offs = Vec::with_capacity(pats.len());
        let mut acc = 0;
        for p in pats {
            offs.push(acc);
            acc += ev.ctx().seq_dim(p);
        }
        (offs, acc)
    };
    let (offs_zy, dim_zy) = sector(&patterns_zy);
    let (offs_yz, dim_yz) = sector(&patterns_yz);
    let place = |big: &mut SparseMat<K>,
                 op: &TensorOperator<K>,
                 col_off: usize,
                 pats: &[Seq],
                 offs: &[usize]|
     -> Result<()> {
        for (cseq, m) in &op.blocks {
            let idx = pats
                .iter()
                .position(|p| p == cseq)
                .ok_or_else(|| Error::DimMismatch(format!("block {cseq:?} outside sector")))?;
            for (&(r, c), v) in &m.entries {
                big.insert_add(offs[idx] + r, col_off + c, v.clone());
            }
        }
        Ok(())
    };

    // Big B: from YZ-sector to ZY-sector.
    let mut big_b = SparseMat::zero(dim_zy, dim_yz);
    for (i, pat) in patterns_yz.iter().enumerate() {
        let op = ev.eval(&fusion_braiding(i, n - i), pat)?;
        place(&mut big_b, &op, offs_yz[i], &patterns_zy, &offs_zy)?;
    }
    // Big iota_{Y,Z}: endomorphism of the YZ-sector (tensor components to
    // fused components share the flat spaces).
    let mut big_iota_yz = SparseMat::zero(dim_yz, dim_yz);
    for (i, pat) in patterns_yz.iter().enumerate() {
        let op = ev.eval(&iota_full(i, n - i), pat)?;
        place(&mut big_iota_yz, &op, offs_yz[i], &patterns_yz, &offs_yz)?;
    }
    let mut big_iota_zy = SparseMat::zero(dim_zy, dim_zy);
    for (i, pat) in patterns_zy.iter().enumerate() {
        let op = ev.eval(&iota_full(i, n - i), pat)?;
        place(&mut big_iota_zy, &op, offs_zy[i], &patterns_zy, &offs_zy)?;
    }
    // Big inverse standard braiding: ZY tensor components to YZ tensor
    // components.
    let mut big_std_inv = SparseMat::zero(dim_yz, dim_zy);
    for (i, pat) in patterns_zy.iter().enumerate() {
        let op = ev.eval(&standard_yd_braiding_inverse(i, n - i), pat)?;
        place(&mut big_std_inv, &op, offs_zy[i], &patterns_yz, &offs_yz)?;
    }
    // B iota_{Y,Z} Psi^{-1} = iota_{Z,Y}.
    let lhs = big_b.mul(&big_iota_yz).mul(&big_std_inv);
    let diff = lhs.add(&big_iota_zy.scale(&K::from_i64(-1)));
    if diff.is_zero() {
        Ok(None)
    } else {
        Ok(Some(format!("braiding inverse fails in degree {n}")))
    }
}

/// Squared braiding: applying B twice agrees with the closed formula.
pub fn check_squared_braiding<K: Scalar>(
    ev: &Evaluator<K>,
    x: SpaceId,
    y: SpaceId,
    z: SpaceId,
    s: usize,
    t: usize,
) -> Result<Option<String>> {
    let _ = y;
    let _ = z;
    let mut seq = vec![x; s];
    seq.push(y);
    seq.extend(std::iter::repeat(x).take(t));
    seq.push(z);
    let once = ev.eval(&fusion_braiding(s, t), &seq)?;
    let mut twice = TensorOperator::zero(seq.clone());
    for (cseq, m) in &once.blocks {
        // The leading X-run length of the block determines the next (s,t).
        let i = cseq.iter().position(|&sp| sp != x).unwrap();
        let rest = cseq.len() - i - 2;
        let op2 = ev.eval(&fusion_braiding(i, rest), cseq)?;
        for (fseq, m2) in &op2.blocks {
            let prod = m2.mul(m);
            if prod.is_zero() {
                continue;
            }
            match twice.blocks.get_mut(fseq) {
                Some(e) => *e = e.add(&prod),
                None => {
                    twice.blocks.insert(fseq.clone(), prod);
                }
            }
        }
    }
    let formula = ev.eval(&squared_braiding_formula(s, t), &seq)?;
    Ok(diff_witness(&twice, &formula, &format!("squared braiding (s,t)=({s},{t})")))
}
