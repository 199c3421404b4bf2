//! Braided linear spaces and exact evaluation of braid algebra elements as
//! graded operators on labeled tensor products.
//!
//! A context registers named spaces and pairwise braidings (diagonal phase
//! tables or full matrices).  Construction validates the braid equation on
//! every formable triple and invertibility of every pair; evaluation then
//! turns a `BraidAlgebraElement` into a block operator keyed by the
//! codomain label sequence, since different words of one element may
//! scatter the labels differently.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num::rational::BigRational;
use serde::Deserialize;

use crate::braid::{BraidAlgebraElement, BraidWord};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;

pub type SpaceId = usize;
pub type Seq = Vec<SpaceId>;
pub type BasisTuple = Vec<u16>;

#[derive(Clone)]
pub enum PairBraiding<K> {
    /// Psi(e_i (x) f_j) = phases[i][j] f_j (x) e_i.
    Diagonal(Vec<Vec<K>>),
    /// Full matrix for Psi: A (x) B -> B (x) A; column index i*dim_b + j,
    /// row index k*dim_a + l for output f_k (x) e_l.
    Matrix(Mat<K>),
}

pub struct BraidingCtx<K> {
    names: Vec<String>,
    dims: Vec<usize>,
    basis_labels: Vec<Vec<String>>,
    forward: HashMap<(SpaceId, SpaceId), PairBraiding<K>>,
    /// inverse[(a,b)] maps B (x) A -> A (x) B, the operator inverse of
    /// forward[(a,b)].
    inverse: HashMap<(SpaceId, SpaceId), PairBraiding<K>>,
}

pub struct BraidingBuilder<K> {
    names: Vec<String>,
    dims: Vec<usize>,
    basis_labels: Vec<Vec<String>>,
    forward: HashMap<(SpaceId, SpaceId), PairBraiding<K>>,
}

impl<K: Scalar> Default for BraidingBuilder<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Scalar> BraidingBuilder<K> {
    pub fn new() -> Self {
        BraidingBuilder {
            names: Vec::new(),
            dims: Vec::new(),
            basis_labels: Vec::new(),
            forward: HashMap::new(),
        }
    }

    pub fn add_space(&mut self, name: &str, dim: usize) -> SpaceId {
        assert!(dim >= 1);
        self.names.push(name.to_string());
        self.dims.push(dim);
        self.basis_labels
            .push((0..dim).map(|i| format!("{name}.{i}")).collect());
        self.names.len() - 1
    }

    pub fn set_basis_labels(&mut self, space: SpaceId, labels: Vec<String>) {
        assert_eq!(labels.len(), self.dims[space]);
        self.basis_labels[space] = labels;
    }

    pub fn set_diagonal(&mut self, a: SpaceId, b: SpaceId, phases: Vec<Vec<K>>) {
        assert_eq!(phases.len(), self.dims[a]);
        assert!(phases.iter().all(|r| r.len() == self.dims[b]));
        self.forward.insert((a, b), PairBraiding::Diagonal(phases));
    }

    pub fn set_matrix(&mut self, a: SpaceId, b: SpaceId, m: Mat<K>) {
        let (da, db) = (self.dims[a], self.dims[b]);
        assert!(da <= 3 && db <= 3, "matrix braidings supported at dim <= 3");
        assert_eq!(m.rows, da * db);
        assert_eq!(m.cols, da * db);
        self.forward.insert((a, b), PairBraiding::Matrix(m));
    }

    /// Validate invertibility and every braid-equation instance, then
    /// freeze the context.
    pub fn build(self) -> Result<Arc<BraidingCtx<K>>> {
        let mut inverse = HashMap::new();
        for (&(a, b), pair) in &self.forward {
            let inv = match pair {
                PairBraiding::Diagonal(phases) => {
                    let mut out = vec![vec![K::zero(); self.dims[a]]; self.dims[b]];
                    for (i, row) in phases.iter().enumerate() {
                        for (j, q) in row.iter().enumerate() {
                            if q.is_zero() {
                                return Err(Error::NotInvertible(
                                    self.names[a].clone(),
                                    self.names[b].clone(),
                                ));
                            }
                            out[j][i] = q.inv()?;
                        }
                    }
                    PairBraiding::Diagonal(out)
                }
                PairBraiding::Matrix(m) => PairBraiding::Matrix(m.inverse().map_err(|_| {
                    Error::NotInvertible(self.names[a].clone(), self.names[b].clone())
                })?),
            };
            inverse.insert((a, b), inv);
        }
        let ctx = Arc::new(BraidingCtx {
            names: self.names,
            dims: self.dims,
            basis_labels: self.basis_labels,
            forward: self.forward,
            inverse,
        });
        ctx.validate_braid_equation()?;
        Ok(ctx)
    }
}

impl<K: Scalar> BraidingCtx<K> {
    pub fn dim(&self, s: SpaceId) -> usize {
        self.dims[s]
    }

    pub fn name(&self, s: SpaceId) -> &str {
        &self.names[s]
    }

    pub fn space_by_name(&self, name: &str) -> Option<SpaceId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn basis_label(&self, s: SpaceId, i: usize) -> &str {
        &self.basis_labels[s][i]
    }

    pub fn seq_dim(&self, seq: &[SpaceId]) -> usize {
        seq.iter().map(|&s| self.dims[s]).product()
    }

    pub fn seq_names(&self, seq: &[SpaceId]) -> String {
        let parts: Vec<&str> = seq.iter().map(|&s| self.name(s)).collect();
        parts.join(",")
    }

    fn pair(&self, a: SpaceId, b: SpaceId, inverse: bool) -> Result<&PairBraiding<K>> {
        let table = if inverse { &self.inverse } else { &self.forward };
        table.get(&(a, b)).ok_or_else(|| {
            Error::MissingBraiding(self.names[a].clone(), self.names[b].clone())
        })
    }

    fn validate_braid_equation(self: &Arc<Self>) -> Result<()>
    where
        K: Scalar,
    {
        let n = self.dims.len();
        let have = |a: SpaceId, b: SpaceId| self.forward.contains_key(&(a, b));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // Both sides need (a,b), (a,c), (b,c).
                    if !(have(a, b) && have(a, c) && have(b, c)) {
                        continue;
                    }
                    let seq = vec![a, b, c];
                    let lhs = BraidWord::from_display(&[1, 2, 1]);
                    let rhs = BraidWord::from_display(&[2, 1, 2]);
                    let l = eval_word_unchecked(self, &lhs, &seq)?;
                    let r = eval_word_unchecked(self, &rhs, &seq)?;
                    if l != r {
                        return Err(Error::BraidEquation(
                            self.names[a].clone(),
                            self.names[b].clone(),
                            self.names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn tuple_to_index(&self, seq: &[SpaceId], tuple: &[u16]) -> usize {
        let mut idx = 0usize;
        for (k, &s) in seq.iter().enumerate() {
            idx = idx * self.dims[s] + tuple[k] as usize;
        }
        idx
    }

    pub fn index_to_tuple(&self, seq: &[SpaceId], mut idx: usize) -> BasisTuple {
        let mut tuple = vec![0u16; seq.len()];
        for (k, &s) in seq.iter().enumerate().rev() {
            tuple[k] = (idx % self.dims[s]) as u16;
            idx /= self.dims[s];
        }
        tuple
    }
}

/// Sparse exact matrix in coordinate form with canonical ordering.
#[derive(Clone, PartialEq)]
pub struct SparseMat<K> {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), K>,
}

impl<K: Scalar> SparseMat<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert_add(&mut self, r: usize, c: usize, v: K) {
        if v.is_zero() {
            return;
        }
        match self.entries.entry((r, c)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&v);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, r: usize, c: usize) -> K {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.insert_add(r, c, v.clone());
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut out = SparseMat::zero(self.rows, self.cols);
        if k.is_zero() {
            return out;
        }
        for (&(r, c), v) in &self.entries {
            out.insert_add(r, c, v.mul(k));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "sparse product shape");
        let mut out = SparseMat::zero(self.rows, other.cols);
        // Group other's entries by row for the inner loop.
        let mut by_row: HashMap<usize, Vec<(usize, &K)>> = HashMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        for (&(r, k), v) in &self.entries {
            if let Some(cols) = by_row.get(&k) {
                for &(c, w) in cols {
                    out.insert_add(r, c, v.mul(w));
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Mat<K> {
        let mut m = Mat::zero(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            *m.at_mut(r, c) = v.clone();
        }
        m
    }

    pub fn from_dense(m: &Mat<K>) -> Self {
        let mut out = SparseMat::zero(m.rows, m.cols);
        for r in 0..m.rows {
            for c in 0..m.cols {
                if !m.at(r, c).is_zero() {
                    out.insert_add(r, c, m.at(r, c).clone());
                }
            }
        }
        out
    }
}

impl<K: Scalar> fmt::Debug for SparseMat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMat {}x{} {{", self.rows, self.cols)?;
        for (&(r, c), v) in &self.entries {
            write!(f, " ({r},{c})={v}")?;
        }
        write!(f, " }}")
    }
}

/// Graded exact operator: one sparse block per codomain label sequence.
#[derive(Clone, PartialEq)]
pub struct TensorOperator<K> {
    pub domain: Seq,
    pub blocks: BTreeMap<Seq, SparseMat<K>>,
}

impl<K: Scalar> TensorOperator<K> {
    pub fn zero(domain: Seq) -> Self {
        TensorOperator {
            domain,
            blocks: BTreeMap::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.domain, other.domain, "operator domain mismatch");
        let mut out = self.clone();
        for (seq, m) in &other.blocks {
            match out.blocks.get_mut(seq) {
                Some(existing) => {
                    *existing = existing.add(m);
                }
                None => {
                    out.blocks.insert(seq.clone(), m.clone());
                }
            }
        }
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&K::from_i64(-1)))
    }

    pub fn scale(&self, k: &K) -> Self {
        let mut out = TensorOperator::zero(self.domain.clone());
        for (seq, m) in &self.blocks {
            let s = m.scale(k);
            if !s.is_zero() {
                out.blocks.insert(seq.clone(), s);
            }
        }
        out
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self.scale(&K::from_i64(k))
    }

    fn prune(&mut self) {
        self.blocks.retain(|_, m| !m.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The unique block, if there is exactly one.
    pub fn single_block(&self) -> Option<(&Seq, &SparseMat<K>)> {
        if self.blocks.len() == 1 {
            self.blocks.iter().next()
        } else {
            None
        }
    }

    pub fn block(&self, seq: &[SpaceId]) -> Option<&SparseMat<K>> {
        self.blocks.get(seq)
    }

    /// First nonzero entry of the difference against `other`, as a witness.
    pub fn first_difference(&self, other: &Self) -> Option<String> {
        let d = self.sub(other);
        for (seq, m) in &d.blocks {
            if let Some((&(r, c), v)) = m.entries.iter().next() {
                return Some(format!(
                    "block {seq:?}: entry ({r},{c}) differs by {v}"
                ));
            }
        }
        None
    }
}

impl<K: Scalar> fmt::Debug for TensorOperator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TensorOperator domain {:?}", self.domain)?;
        for (seq, m) in &self.blocks {
            writeln!(f, "  -> {seq:?}: {m:?}")?;
        }
        Ok(())
    }
}

type Column<K> = Vec<(BasisTuple, K)>;

fn apply_generator<K: Scalar>(
    ctx: &BraidingCtx<K>,
    seq: &mut Seq,
    cols: &mut [Column<K>],
    gen: i32,
) -> Result<()> {
    let pos = gen.unsigned_abs() as usize - 1;
    if pos + 1 >= seq.len() {
        return Err(Error::StrandMismatch {
            needed: pos + 2,
            got: seq.len(),
        });
    }
    let (a, b) = (seq[pos], seq[pos + 1]);
    let pair = if gen > 0 {
        ctx.pair(a, b, false)?
    } else {
        // Inverse crossing: current spaces are the codomain of Psi_{b,a}.
        ctx.pair(b, a, true)?
    };
    let (da, db) = (ctx.dims[a], ctx.dims[b]);
    for col in cols.iter_mut() {
        let mut next: HashMap<BasisTuple, K> = HashMap::with_capacity(col.len());
        for (tuple, coef) in col.drain(..) {
            match pair {
                PairBraiding::Diagonal(phases) => {
                    let (i, j) = (tuple[pos] as usize, tuple[pos + 1] as usize);
                    let q = &phases[i][j];
                    let mut t = tuple;
                    t.swap(pos, pos + 1);
                    let v = coef.mul(q);
                    merge(&mut next, t, v);
                }
                PairBraiding::Matrix(m) => {
                    let (i, j) = (tuple[pos] as usize, tuple[pos + 1] as usize);
                    let col_idx = i * db + j;
                    for k in 0..db {
                        for l in 0..da {
                            let e = m.at(k * da + l, col_idx);
                            if e.is_zero() {
                                continue;
                            }
                            let mut t = tuple.clone();
                            t[pos] = k as u16;
                            t[pos + 1] = l as u16;
                            merge(&mut next, t, coef.mul(e));
                        }
                    }
                }
            }
        }
        col.extend(next.into_iter().filter(|(_, v)| !v.is_zero()));
    }
    seq.swap(pos, pos + 1);
    Ok(())
}

fn merge<K: Scalar>(map: &mut HashMap<BasisTuple, K>, t: BasisTuple, v: K) {
    if v.is_zero() {
        return;
    }
    match map.entry(t) {
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let sum = e.get().add(&v);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn eval_word_unchecked<K: Scalar>(
    ctx: &Arc<BraidingCtx<K>>,
    word: &BraidWord,
    domain: &[SpaceId],
) -> Result<(Seq, SparseMat<K>)> {
    let dim = ctx.seq_dim(domain);
    let mut seq = domain.to_vec();
    let mut cols: Vec<Column<K>> = (0..dim)
        .map(|j| vec![(ctx.index_to_tuple(domain, j), K::one())])
        .collect();
    for &g in word.applied_gens() {
        apply_generator(ctx, &mut seq, &mut cols, g)?;
    }
    let codim = ctx.seq_dim(&seq);
    let mut m = SparseMat::zero(codim, dim);
    for (j, col) in cols.into_iter().enumerate() {
        for (tuple, v) in col {
            m.insert_add(ctx.tuple_to_index(&seq, &tuple), j, v);
        }
    }
    Ok((seq, m))
}

/// Evaluator with a shared memo table keyed by (element, domain sequence).
pub struct Evaluator<K> {
    ctx: Arc<BraidingCtx<K>>,
    cache: Mutex<HashMap<(BraidAlgebraElement, Seq), Arc<TensorOperator<K>>>>,
}

impl<K: Scalar> Evaluator<K> {
    pub fn new(ctx: Arc<BraidingCtx<K>>) -> Self {
        Evaluator {
            ctx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &Arc<BraidingCtx<K>> {
        &self.ctx
    }

    /// Evaluate an element on a labeled tensor product.  Words act on the
    /// leading strands; remaining strands carry the identity.
    pub fn eval(
        &self,
        elem: &BraidAlgebraElement,
        domain: &[SpaceId],
    ) -> Result<Arc<TensorOperator<K>>> {
        if elem.min_strands() > domain.len() {
            return Err(Error::StrandMismatch {
                needed: elem.min_strands(),
                got: domain.len(),
            });
        }
        let key = (elem.clone(), domain.to_vec());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mut op = TensorOperator::zero(domain.to_vec());
        for (coef, word) in elem.terms() {
            let (seq, m) = eval_word_unchecked(&self.ctx, word, domain)?;
            let m = m.scale(&K::from_i64(*coef));
            match op.blocks.get_mut(&seq) {
                Some(existing) => *existing = existing.add(&m),
                None => {
                    op.blocks.insert(seq, m);
                }
            }
        }
        op.prune();
        let arc = Arc::new(op);
        self.cache.lock().unwrap().insert(key, arc.clone());
        Ok(arc)
    }

    /// Evaluate a single word (no caching), returning codomain and matrix.
    pub fn eval_word(&self, word: &BraidWord, domain: &[SpaceId]) -> Result<(Seq, SparseMat<K>)> {
        eval_word_unchecked(&self.ctx, word, domain)
    }

    /// Compose: evaluate `elem` on every block codomain of `inner` and
    /// chain the matrices, keeping the grading.
    pub fn eval_after(
        &self,
        elem: &BraidAlgebraElement,
        inner: &TensorOperator<K>,
    ) -> Result<TensorOperator<K>> {
        let mut out = TensorOperator::zero(inner.domain.clone());
        for (mid, m) in &inner.blocks {
            let op = self.eval(elem, mid)?;
            for (seq, b) in &op.blocks {
                let prod = b.mul(m);
                if prod.is_zero() {
                    continue;
                }
                match out.blocks.get_mut(seq) {
                    Some(existing) => *existing = existing.add(&prod),
                    None => {
                        out.blocks.insert(seq.clone(), prod);
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }
}

/// Product of evaluated factors in paper order (rightmost acts first),
/// all at the matrix level.
pub fn eval_product<K: Scalar>(
    ev: &Evaluator<K>,
    factors: &[&BraidAlgebraElement],
    domain: &[SpaceId],
) -> Result<TensorOperator<K>> {
    assert!(!factors.is_empty());
    let mut acc: TensorOperator<K> =
        (*ev.eval(factors[factors.len() - 1], domain)?).clone();
    for f in factors[..factors.len() - 1].iter().rev() {
        acc = ev.eval_after(f, &acc)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Stock contexts.
// ---------------------------------------------------------------------------

/// Rank-1 context over Q(zeta_{4p}): X is the one-dimensional screening
/// space, Y the span of the chosen vertex momenta (all of Z_{4p} by
/// default).  Phases follow the screening/vertex exchange relations:
/// X-X gives q^2, X-Y and Y-X give q^(-j), Y-Y gives zeta^(j k).
pub fn rank1_ctx(p: u64) -> Arc<BraidingCtx<Cyclotomic>> {
    let momenta: Vec<i64> = (0..4 * p as i64).collect();
    rank1_ctx_with_momenta(p, &momenta)
}

pub fn rank1_ctx_with_momenta(p: u64, momenta: &[i64]) -> Arc<BraidingCtx<Cyclotomic>> {
    let n = 4 * p;
    let mut b = BraidingBuilder::new();
    let x = b.add_space("X", 1);
    b.set_basis_labels(x, vec!["F".into()]);
    let labels: Vec<String> = momenta.iter().map(|j| format!("V^{j}")).collect();
    let y = b.add_space("Y", momenta.len());
    b.set_basis_labels(y, labels.clone());
    // A second copy of the vertex space keeps multivertex patterns
    // unambiguous in graded block keys.
    let z = b.add_space("Z", momenta.len());
    b.set_basis_labels(z, labels);
    let q2 = Cyclotomic::zeta_pow(n, 4);
    b.set_diagonal(x, x, vec![vec![q2]]);
    let x_v: Vec<Vec<Cyclotomic>> = vec![momenta
        .iter()
        .map(|&j| Cyclotomic::zeta_pow(n, -2 * j))
        .collect()];
    let v_x: Vec<Vec<Cyclotomic>> = momenta
        .iter()
        .map(|&j| vec![Cyclotomic::zeta_pow(n, -2 * j)])
        .collect();
    let v_v: Vec<Vec<Cyclotomic>> = momenta
        .iter()
        .map(|&j| {
            momenta
                .iter()
                .map(|&k| Cyclotomic::zeta_pow(n, j * k))
                .collect()
        })
        .collect();
    for v in [y, z] {
        b.set_diagonal(x, v, x_v.clone());
        b.set_diagonal(v, x, v_x.clone());
    }
    for v in [y, z] {
        for w in [y, z] {
            b.set_diagonal(v, w, v_v.clone());
        }
    }
    b.build().expect("rank-1 context is always valid")
}

/// Names of the validated rational Yang-Baxter fixtures.
pub const FIXTURE_NAMES: [&str; 4] = ["hecke2", "hecke3", "flip", "diag23"];

/// A validated two-dimensional rational braiding, with a second space "Y"
/// carrying the same matrix in all pairings so that mixed patterns can be
/// formed.  `hecke2`/`hecke3` are Hecke-type R-matrices at q = 2, 3; `flip`
/// is the transposition; `diag23` is diagonal with phases 2, 3, 5, 7.
pub fn fixture_ctx(name: &str) -> Result<Arc<BraidingCtx<BigRational>>> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let matrix: Mat<BigRational> = match name {
        "hecke2" | "hecke3" => {
            let qq: i64 = if name == "hecke2" { 2 } else { 3 };
            // Basis order (00, 01, 10, 11); Psi(x(x)x) = q x(x)x,
            // Psi(x(x)y) = y(x)x, Psi(y(x)x) = x(x)y + (q - 1/q) y(x)x,
            // Psi(y(x)y) = q y(x)y.
            let mut m = Mat::zero(4, 4);
            *m.at_mut(0, 0) = q(qq, 1);
            *m.at_mut(2, 1) = q(1, 1);
            *m.at_mut(1, 2) = q(1, 1);
            *m.at_mut(2, 2) = q(qq, 1).sub(&q(1, qq));
            *m.at_mut(3, 3) = q(qq, 1);
            m
        }
        "flip" => {
            let mut m = Mat::zero(4, 4);
            *m.at_mut(0, 0) = q(1, 1);
            *m.at_mut(2, 1) = q(1, 1);
            *m.at_mut(1, 2) = q(1, 1);
            *m.at_mut(3, 3) = q(1, 1);
            m
        }
        "diag23" => {
            let mut b = BraidingBuilder::new();
            let x = b.add_space("X", 2);
            let y = b.add_space("Y", 2);
            let z = b.add_space("Z", 2);
            let phases = vec![vec![q(2, 1), q(3, 1)], vec![q(5, 1), q(7, 1)]];
            for a in [x, y, z] {
                for bb in [x, y, z] {
                    b.set_diagonal(a, bb, phases.clone());
                }
            }
            return b.build();
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown fixture '{other}'"
            )))
        }
    };
    let mut b = BraidingBuilder::new();
    let x = b.add_space("X", 2);
    let y = b.add_space("Y", 2);
    let z = b.add_space("Z", 2);
    for a in [x, y, z] {
        for bb in [x, y, z] {
            b.set_matrix(a, bb, matrix.clone());
        }
    }
    b.build()
}

/// Diagonal braiding from Abelian group data: q_{ij} = chi_j(g_i), with the
/// group Z_{m_1} x ... x Z_{m_k}, elements and characters given as integer
/// vectors, realized inside Q(zeta_order) for order = lcm of the moduli.
pub fn diagonal_from_group(
    moduli: &[u64],
    elements: &[Vec<i64>],
    characters: &[Vec<i64>],
) -> Result<Vec<Vec<Cyclotomic>>> {
    if elements.len() != characters.len() {
        return Err(Error::InvalidArgument(
            "need one character per basis element".into(),
        ));
    }
    let order = moduli.iter().fold(1u64, |acc, &m| num::integer::lcm(acc, m));
    let mut phases = Vec::with_capacity(elements.len());
    for g in elements {
        let mut row = Vec::with_capacity(characters.len());
        for chi in characters {
            if g.len() != moduli.len() || chi.len() != moduli.len() {
                return Err(Error::InvalidArgument(
                    "element/character length must match moduli".into(),
                ));
            }
            let mut e: i64 = 0;
            for ((gk, ck), &m) in g.iter().zip(chi.iter()).zip(moduli.iter()) {
                e += gk * ck * (order / m) as i64;
            }
            row.push(Cyclotomic::zeta_pow(order, e));
        }
        phases.push(row);
    }
    Ok(phases)
}

// ---------------------------------------------------------------------------
// Braiding input files.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Q(String),
    Cyclo { cyclotomic: u64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntrySpec {
    Int(i64),
    Str(String),
    Cyclo(Cyclotomic),
}

#[derive(Deserialize)]
struct DiagonalSpec {
    labels: Vec<String>,
    phases: BTreeMap<String, EntrySpec>,
}

#[derive(Deserialize)]
struct BraidingFile {
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    field: Option<FieldSpec>,
    #[serde(default)]
    matrix: Option<Vec<Vec<EntrySpec>>>,
    #[serde(default)]
    diagonal: Option<DiagonalSpec>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num::BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator '{n}'")))?;
        let d: num::BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator '{d}'")))?;
        if num::Zero::is_zero(&d) {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: num::BigInt = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
        Ok(BigRational::from(n))
    }
}

fn entry_to_cyclotomic(e: &EntrySpec, order: u64) -> Result<Cyclotomic> {
    match e {
        EntrySpec::Int(n) => Ok(Cyclotomic::from_i64(order, *n)),
        EntrySpec::Str(s) => Ok(Cyclotomic::from_rational(order, parse_rational(s)?)),
        EntrySpec::Cyclo(c) => {
            if c.order() != order && c.order() != 1 {
                Err(Error::OrderMismatch(c.order(), order))
            } else if c.order() == 1 {
                Ok(Cyclotomic::from_rational(
                    order,
                    c.as_rational().expect("order-1 value is rational"),
                ))
            } else {
                Ok(c.clone())
            }
        }
    }
}

/// Loaded braiding: either a rational matrix space or a cyclotomic
/// diagonal space.  Both expose an "X" space (and a "Y" alias with the
/// same braiding) so every suite can run against them.
pub enum LoadedBraiding {
    Rational(Arc<BraidingCtx<BigRational>>),
    Cyclotomic(Arc<BraidingCtx<Cyclotomic>>),
}

/// Parse the braiding JSON format:
/// `{"dim": d, "field": "Q" | {"cyclotomic": N}, "matrix": [[...]]}` or
/// `{"diagonal": {"labels": [...], "phases": {"i,j": entry}}}`.
pub fn load_braiding(json: &str) -> Result<LoadedBraiding> {
    let file: BraidingFile =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(diag) = file.diagonal {
        let labels = diag.labels;
        let dim = labels.len();
        let order = diag
            .phases
            .values()
            .filter_map(|e| match e {
                EntrySpec::Cyclo(c) if c.order() > 1 => Some(c.order()),
                _ => None,
            })
            .max()
            .unwrap_or(1);
        let mut phases = vec![vec![Cyclotomic::zero(order); dim]; dim];
        let mut seen = vec![vec![false; dim]; dim];
        for (key, entry) in &diag.phases {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad phase key '{key}'")))?;
            let i = labels
                .iter()
                .position(|l| l == a.trim())
                .ok_or_else(|| Error::Parse(format!("unknown label '{a}'")))?;
            let j = labels
                .iter()
                .position(|l| l == b.trim())
                .ok_or_else(|| Error::Parse(format!("unknown label '{b}'")))?;
            phases[i][j] = entry_to_cyclotomic(entry, order)?;
            seen[i][j] = true;
        }
        if seen.iter().any(|row| row.iter().any(|s| !s)) {
            return Err(Error::Parse("phase table incomplete".into()));
        }
        let mut b = BraidingBuilder::new();
        let x = b.add_space("X", dim);
        b.set_basis_labels(x, labels.clone());
        let y = b.add_space("Y", dim);
        b.set_basis_labels(y, labels);
        for (s, t) in [(x, x), (x, y), (y, x), (y, y)] {
            b.set_diagonal(s, t, phases.clone());
        }
        return Ok(LoadedBraiding::Cyclotomic(b.build()?));
    }
    let dim = file
        .dim
        .ok_or_else(|| Error::Parse("missing 'dim'".into()))?;
    let matrix = file
        .matrix
        .ok_or_else(|| Error::Parse("missing 'matrix'".into()))?;
    if matrix.len() != dim * dim || matrix.iter().any(|r| r.len() != dim * dim) {
        return Err(Error::Parse(format!(
            "matrix must be {0}x{0} for dim {dim}",
            dim * dim
        )));
    }
    match file.field {
        None | Some(FieldSpec::Q(_)) => {
            if let Some(FieldSpec::Q(ref s)) = file.field {
                if s != "Q" {
                    return Err(Error::Parse(format!("unknown field '{s}'")));
                }
            }
            let mut m = Mat::zero(dim * dim, dim * dim);
            for (r, row) in matrix.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    *m.at_mut(r, c) = match e {
                        EntrySpec::Int(n) => BigRational::from(num::BigInt::from(*n)),
                        EntrySpec::Str(s) => parse_rational(s)?,
                        EntrySpec::Cyclo(_) => {
                            return Err(Error::Parse(
                                "cyclotomic entry in rational matrix".into(),
                            ))
                        }
                    };
                }
            }
            let mut b = BraidingBuilder::new();
            let x = b.add_space("X", dim);
            let y = b.add_space("Y", dim);
            for (s, t) in [(x, x), (x, y), (y, x), (y, y)] {
                b.set_matrix(s, t, m.clone());
            }
            Ok(LoadedBraiding::Rational(b.build()?))
        }
        Some(FieldSpec::Cyclo { cyclotomic: order }) => {
            let mut m = Mat::zero(dim * dim, dim * dim);
            for (r, row) in matrix.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    *m.at_mut(r, c) = entry_to_cyclotomic(e, order)?;
                }
            }
            let mut b = BraidingBuilder::new();
            let x = b.add_space("X", dim);
            let y = b.add_space("Y", dim);
            for (s, t) in [(x, x), (x, y), (y, x), (y, y)] {
                b.set_matrix(s, t, m.clone());
            }
            Ok(LoadedBraiding::Cyclotomic(b.build()?))
        }
    }
}
