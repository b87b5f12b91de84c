//! The matrix shadow of an endomorphism: support matrices, spectral radii,
//! maximal eigenvalues and maximal eigenvectors.
//!
//! A non-negative integer matrix is *supported* in `f` when its `i`-th row
//! is the exponent vector of a monomial present in `f_i`. The maximal
//! eigenvalue is the largest spectral radius over all supported matrices;
//! a maximal eigenvector is a non-negative weight vector `μ` with
//! `deg_μ(f_i) = θ μ_i` for every `i`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebraic::{largest_real_root, RealAlgebraicNumber};
use crate::config::Budget;
use crate::error::DdError;
use crate::numberfield::{KElem, RealField};
use crate::poly::Endomorphism;
use crate::unipoly::{char_poly, IntPoly};
use crate::weights::{mu_degree_poly, MuDegree, WeightVector};

type Int = BigInt;
type Rat = BigRational;

/// Dense non-negative integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: Vec<Vec<Int>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<Int>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Int::one() } else { Int::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n();
        let mut out = vec![vec![Int::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if other.rows[k][j].is_zero() {
                        continue;
                    }
                    out[i][j] += &self.rows[i][k] * &other.rows[k][j];
                }
            }
        }
        IntMatrix::new(out)
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.n());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn max_row_sum(&self) -> Int {
        self.rows
            .iter()
            .map(|r| r.iter().sum::<Int>())
            .max()
            .unwrap_or_else(Int::zero)
    }

    pub fn max_diag(&self) -> Int {
        (0..self.n())
            .map(|i| self.rows[i][i].clone())
            .max()
            .unwrap_or_else(Int::zero)
    }

    pub fn char_poly(&self) -> IntPoly {
        char_poly(&self.rows)
    }

    /// Exact determinant via the characteristic polynomial at zero.
    pub fn det(&self) -> Int {
        let cp = self.char_poly();
        let c0 = cp.coeffs.first().cloned().unwrap_or_else(Int::zero);
        if self.n() % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    /// Perron root: the largest real root of the characteristic polynomial.
    /// Exists for non-negative matrices.
    pub fn spectral_radius(&self) -> RealAlgebraicNumber {
        largest_real_root(&self.char_poly())
            .expect("non-negative matrix must have a real eigenvalue")
    }

    /// Lexicographic comparison by row-major entries (deterministic witness
    /// selection).
    pub fn lex_cmp(&self, other: &IntMatrix) -> std::cmp::Ordering {
        for (a, b) in self.rows.iter().zip(&other.rows) {
            for (x, y) in a.iter().zip(b) {
                match x.cmp(y) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Per-component monomial supports (exponent rows) of an endomorphism.
#[derive(Debug, Clone)]
pub struct SupportFamily {
    pub rows: Vec<Vec<Vec<u32>>>,
}

impl SupportFamily {
    /// Exponent rows per component. Every component must be non-zero.
    pub fn of(f: &Endomorphism) -> Result<Self, DdError> {
        let mut rows = Vec::with_capacity(f.arity());
        for (i, c) in f.components().iter().enumerate() {
            if c.is_zero() {
                return Err(DdError::domain(format!(
                    "component {} is zero; support matrices are undefined",
                    i + 1
                )));
            }
            let mut list: Vec<Vec<u32>> = c.terms().map(|(m, _)| m.exps().to_vec()).collect();
            list.sort();
            rows.push(list);
        }
        Ok(SupportFamily { rows })
    }

    pub fn arity(&self) -> usize {
        self.rows.len()
    }

    /// Number of supported matrices (product of support sizes).
    pub fn count(&self) -> u128 {
        self.rows
            .iter()
            .map(|r| r.len() as u128)
            .try_fold(1u128, u128::checked_mul)
            .unwrap_or(u128::MAX)
    }

    /// Supports with entrywise-dominated rows removed (sound when seeking
    /// the maximal spectral radius, by monotonicity of ρ).
    pub fn pruned(&self) -> SupportFamily {
        let rows = self
            .rows
            .iter()
            .map(|list| {
                let keep: Vec<Vec<u32>> = list
                    .iter()
                    .filter(|r| {
                        !list.iter().any(|other| {
                            *other != **r && r.iter().zip(other.iter()).all(|(a, b)| a <= b)
                        })
                    })
                    .cloned()
                    .collect();
                keep
            })
            .collect();
        SupportFamily { rows }
    }

    /// All supported matrices, row-major lexicographic order of choices.
    pub fn matrices(&self, budget: &Budget) -> Result<Vec<IntMatrix>, DdError> {
        let count = self.count();
        if let Some(max) = budget.max_terms {
            if count > max as u128 {
                return Err(DdError::resource(format!(
                    "support family has {count} matrices, budget {max}"
                )));
            }
        }
        let n = self.arity();
        let mut out = Vec::with_capacity(count as usize);
        let mut idx = vec![0usize; n];
        loop {
            let rows: Vec<Vec<Int>> = (0..n)
                .map(|i| self.rows[i][idx[i]].iter().map(|&e| Int::from(e)).collect())
                .collect();
            out.push(IntMatrix::new(rows));
            // increment mixed-radix counter
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < self.rows[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
}

/// Maximal eigenvalue of `f` with a witness matrix and, when computed, a
/// verified maximal eigenvector.
#[derive(Debug, Clone)]
pub struct MaxEigenData {
    pub theta: RealAlgebraicNumber,
    pub witness: IntMatrix,
    pub mu: Option<WeightVector>,
}

/// Maximal eigenvalue over all supported matrices, with a deterministic
/// (lexicographically smallest, after dominated-row pruning) witness.
pub fn maximal_eigenvalue(f: &Endomorphism, cfg_budget: usize) -> Result<MaxEigenData, DdError> {
    let support = SupportFamily::of(f)?.pruned();
    let budget = Budget::terms(cfg_budget);
    let matrices = match support.matrices(&budget) {
        Ok(m) => m,
        Err(e) => return Err(e),
    };
    let achievers = achieving_matrices(&matrices);
    let (theta, witness) = achievers
        .into_iter()
        .next()
        .map(|(t, w)| (t, w))
        .ok_or_else(|| DdError::internal("no supported matrices"))?;
    Ok(MaxEigenData {
        theta,
        witness,
        mu: None,
    })
}

/// All matrices achieving the maximal spectral radius, lexicographically
/// ordered, paired with that radius. An integer-power prefilter discards
/// most non-achievers before any exact root isolation.
fn achieving_matrices(matrices: &[IntMatrix]) -> Vec<(RealAlgebraicNumber, IntMatrix)> {
    if matrices.is_empty() {
        return vec![];
    }
    // prefilter: max over M of max_diag(M^8) <= rho(max)^8 <= max_row_sum(M^8)
    let pow8: Vec<IntMatrix> = matrices.iter().map(|m| m.pow(8)).collect();
    let best_lower = pow8
        .iter()
        .map(|m| m.max_diag())
        .max()
        .unwrap_or_else(Int::zero);
    let survivors: Vec<&IntMatrix> = matrices
        .iter()
        .zip(&pow8)
        .filter(|(_, p8)| p8.max_row_sum() >= best_lower)
        .map(|(m, _)| m)
        .collect();
    let mut best: Option<RealAlgebraicNumber> = None;
    let mut winners: Vec<IntMatrix> = Vec::new();
    for m in survivors {
        let rho = m.spectral_radius();
        match &best {
            None => {
                best = Some(rho);
                winners = vec![m.clone()];
            }
            Some(b) => match rho.compare(b) {
                std::cmp::Ordering::Greater => {
                    best = Some(rho);
                    winners = vec![m.clone()];
                }
                std::cmp::Ordering::Equal => winners.push(m.clone()),
                std::cmp::Ordering::Less => {}
            },
        }
    }
    let theta = best.expect("non-empty survivor set");
    winners.sort_by(|a, b| a.lex_cmp(b));
    winners.into_iter().map(|w| (theta.clone(), w)).collect()
}

/// Strongly connected components of the digraph `i -> j` iff `m[i][j] > 0`,
/// plus a topological order of the condensation in which every class comes
/// after the classes it accesses. Permuting rows/columns by the
/// concatenated class order yields a block lower-triangular matrix with
/// irreducible diagonal blocks.
#[derive(Debug, Clone)]
pub struct FrobeniusForm {
    /// Vertex classes, in topological order (accessed classes first).
    pub classes: Vec<Vec<usize>>,
    ///

    /// class_of[v] = index into `classes`.
    pub class_of: Vec<usize>,
    /// Direct access between classes: `edges[a]` contains `b` when some
    /// vertex of class `a` points into class `b` (a ≠ b).
    pub edges: Vec<Vec<usize>>,
}

pub fn frobenius_form(m: &IntMatrix) -> FrobeniusForm {
    let n = m.n();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| m.rows[i][j].is_positive())
                .collect()
        })
        .collect();
    let mut classes = tarjan_scc(&adj);
    // deterministic inner order
    for c in classes.iter_mut() {
        c.sort();
    }
    let mut class_of = vec![0usize; n];
    for (ci, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v] = ci;
        }
    }
    // condensation edges
    let k = classes.len();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..n {
        for &j in &adj[i] {
            let (a, b) = (class_of[i], class_of[j]);
            if a != b && !edges[a].contains(&b) {
                edges[a].push(b);
            }
        }
    }
    // topological order: accessed classes first (Kahn, smallest-vertex tie-break)
    let mut out_deg: Vec<usize> = edges.iter().map(|e| e.len()).collect();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (a, es) in edges.iter().enumerate() {
        for &b in es {
            rev[b].push(a);
        }
    }
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut ready: Vec<usize> = (0..k).filter(|&c| out_deg[c] == 0).collect();
    while !ready.is_empty() {
        ready.sort_by_key(|&c| classes[c][0]);
        let c = ready.remove(0);
        order.push(c);
        for &a in &rev[c] {
            out_deg[a] -= 1;
            if out_deg[a] == 0 {
                ready.push(a);
            }
        }
    }
    debug_assert_eq!(order.len(), k);
    // re-index classes along the topological order
    let mut new_classes = Vec::with_capacity(k);
    let mut renumber = vec![0usize; k];
    for (new_i, &old_i) in order.iter().enumerate() {
        renumber[old_i] = new_i;
        new_classes.push(classes[old_i].clone());
    }
    let mut new_edges: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (a, es) in edges.iter().enumerate() {
        for &b in es {
            new_edges[renumber[a]].push(renumber[b]);
        }
    }
    for e in new_edges.iter_mut() {
        e.sort();
    }
    let mut new_class_of = vec![0usize; n];
    for (ci, c) in new_classes.iter().enumerate() {
        for &v in c {
            new_class_of[v] = ci;
        }
    }
    FrobeniusForm {
        classes: new_classes,
        class_of: new_class_of,
        edges: new_edges,
    }
}

fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }
    fn connect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.adj[v] {
            if st.idx[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.comps.push(comp);
        }
    }
    let n = adj.len();
    let mut st = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comps
}

/// Whether the digraph of `m` is strongly connected (irreducible matrix).
pub fn is_irreducible(m: &IntMatrix) -> bool {
    frobenius_form(m).classes.len() == 1
}

/// θ as a field element (shared generator when θ is irrational).
pub fn theta_elem(theta: &RealAlgebraicNumber) -> KElem {
    match theta.to_rational() {
        Some(r) => KElem::from_rat(r),
        None => {
            let field = RealField::of(theta).expect("irrational theta generates a field");
            KElem::generator(&field)
        }
    }
}

/// Solve `(θI - A) v = w` over the field by Gauss-Jordan with exact pivots.
fn solve_theta_system(
    a: &IntMatrix,
    theta: &KElem,
    w: &[KElem],
) -> Option<Vec<KElem>> {
    let n = a.n();
    let mut mat: Vec<Vec<KElem>> = (0..n)
        .map(|i| {
            let mut row: Vec<KElem> = (0..n)
                .map(|j| {
                    let mut v = KElem::from_rat(-Rat::from_integer(a.rows[i][j].clone()));
                    if i == j {
                        v = v.add(theta);
                    }
                    v
                })
                .collect();
            row.push(w[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0usize;
    let mut pivots = Vec::new();
    for col in 0..n {
        let mut sel = None;
        for r in pivot_row..n {
            if mat[r][col].sign() != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(r) = sel else { continue };
        mat.swap(pivot_row, r);
        let inv = mat[pivot_row][col].inv();
        for c in col..=n {
            mat[pivot_row][c] = mat[pivot_row][c].mul(&inv);
        }
        for r2 in 0..n {
            if r2 != pivot_row && mat[r2][col].sign() != 0 {
                let factor = mat[r2][col].clone();
                for c in col..=n {
                    let sub = factor.mul(&mat[pivot_row][c]);
                    mat[r2][c] = mat[r2][c].sub(&sub);
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
        if pivot_row == n {
            break;
        }
    }
    // consistency
    for r in pivot_row..n {
        if mat[r][n].sign() != 0 {
            return None;
        }
    }
    if pivots.len() < n {
        return None; // singular; caller treats as failure
    }
    let mut v = vec![KElem::zero(); n];
    for (k, &col) in pivots.iter().enumerate() {
        v[col] = mat[k][n].clone();
    }
    Some(v)
}

/// One kernel vector of `(A - θI)` (for irreducible `A` with Perron root θ
/// the kernel is one-dimensional). Free variable is set to 1.
fn kernel_vector(a: &IntMatrix, theta: &KElem) -> Option<Vec<KElem>> {
    let n = a.n();
    let mut mat: Vec<Vec<KElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = KElem::from_rat(Rat::from_integer(a.rows[i][j].clone()));
                    if i == j {
                        v = v.sub(theta);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut pivot_row = 0usize;
    for col in 0..n {
        let mut sel = None;
        for r in pivot_row..n {
            if mat[r][col].sign() != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(r) = sel else { continue };
        mat.swap(pivot_row, r);
        let inv = mat[pivot_row][col].inv();
        for c in col..n {
            mat[pivot_row][c] = mat[pivot_row][c].mul(&inv);
        }
        for r2 in 0..n {
            if r2 != pivot_row && mat[r2][col].sign() != 0 {
                let factor = mat[r2][col].clone();
                for c in col..n {
                    let sub = factor.mul(&mat[pivot_row][c]);
                    mat[r2][c] = mat[r2][c].sub(&sub);
                }
            }
        }
        pivot_of_col[col] = Some(pivot_row);
        pivot_row += 1;
    }
    // pick the first free column
    let free = (0..n).find(|&c| pivot_of_col[c].is_none())?;
    let mut v = vec![KElem::zero(); n];
    v[free] = KElem::one();
    for c in 0..n {
        if let Some(pr) = pivot_of_col[c] {
            v[c] = mat[pr][free].neg();
        }
    }
    Some(v)
}

/// Submatrix on the given vertex set.
fn submatrix(m: &IntMatrix, verts: &[usize]) -> IntMatrix {
    IntMatrix::new(
        verts
            .iter()
            .map(|&i| verts.iter().map(|&j| m.rows[i][j].clone()).collect())
            .collect(),
    )
}

/// Non-negative eigenvector of `m` for its Perron root `theta`, assembled
/// block-by-block along the Frobenius normal form. Entries live in `Q(θ)`.
pub fn nonneg_eigenvector(m: &IntMatrix, theta: &RealAlgebraicNumber) -> Option<Vec<KElem>> {
    let te = theta_elem(theta);
    let candidates = eigenvector_candidates(m, &te);
    candidates.into_iter().next()
}

/// Candidate non-negative eigenvectors for the eigenvalue θ of `m`:
/// one per admissible basic class and the sum over all of them.
pub fn eigenvector_candidates(m: &IntMatrix, theta: &KElem) -> Vec<Vec<KElem>> {
    let n = m.n();
    let form = frobenius_form(m);
    let k = form.classes.len();
    // spectral radius per class, compared against θ exactly
    let mut is_basic = vec![false; k];
    for (ci, class) in form.classes.iter().enumerate() {
        let sub = submatrix(m, class);
        let cp = sub.char_poly();
        // basic iff θ is a root of the class characteristic polynomial and
        // no class root exceeds θ would contradict maximality; equality test:
        let rho_is_theta = {
            // θ root of cp?
            let theta_min = theta.clone();
            is_root_of_intpoly(&cp, &theta_min)
        };
        is_basic[ci] = rho_is_theta;
    }
    // accessibility closure between classes (edges already topo-renumbered:
    // class a accesses class b along edges a -> b, with b earlier)
    let mut access = vec![vec![false; k]; k];
    for a in 0..k {
        // DFS over condensation
        let mut stack = vec![a];
        while let Some(c) = stack.pop() {
            for &b in &form.edges[c] {
                if !access[a][b] {
                    access[a][b] = true;
                    stack.push(b);
                }
            }
        }
    }
    // admissible basic classes: not accessed by any other basic class
    let admissible: Vec<usize> = (0..k)
        .filter(|&b| is_basic[b] && (0..k).all(|c| c == b || !is_basic[c] || !access[c][b]))
        .collect();
    let mut out: Vec<Vec<KElem>> = Vec::new();
    let mut singles: Vec<Vec<KElem>> = Vec::new();
    for &b in &admissible {
        if let Some(v) = build_from_basic(m, theta, &form, &access, b) {
            singles.push(v);
        }
    }
    // the sum of all single constructions is also an eigenvector; try it
    // first since it has the largest support
    if singles.len() > 1 {
        let mut sum = vec![KElem::zero(); n];
        for v in &singles {
            for i in 0..n {
                sum[i] = sum[i].add(&v[i]);
            }
        }
        out.push(sum);
    }
    out.extend(singles);
    // normalize: divide by the last non-zero coordinate
    let mut normed = Vec::new();
    for v in out {
        if let Some(last) = v.iter().rposition(|e| e.sign() != 0) {
            let inv = v[last].inv();
            let nv: Vec<KElem> = v.iter().map(|e| e.mul(&inv)).collect();
            if nv.iter().all(|e| e.sign() >= 0) {
                normed.push(nv);
            }
        }
    }
    normed
}

fn is_root_of_intpoly(p: &IntPoly, x: &KElem) -> bool {
    // evaluate p at the field element exactly
    let mut acc = KElem::zero();
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(x).add(&KElem::from_rat(Rat::from_integer(c.clone())));
    }
    acc.is_zero()
}

/// Construct the eigenvector supported on the classes accessing `b`.
fn build_from_basic(
    m: &IntMatrix,
    theta: &KElem,
    form: &FrobeniusForm,
    access: &[Vec<bool>],
    b: usize,
) -> Option<Vec<KElem>> {
    let n = m.n();
    let k = form.classes.len();
    let in_support: Vec<bool> = (0..k).map(|c| c == b || access[c][b]).collect();
    let mut v = vec![KElem::zero(); n];
    // Perron vector of the basic block
    let sub_b = submatrix(m, &form.classes[b]);
    let mut vb = kernel_vector(&sub_b, theta)?;
    // sign-normalize: Perron vector of an irreducible block is sign-definite
    let neg = vb.iter().filter(|e| e.sign() < 0).count();
    if neg > 0 {
        if vb.iter().any(|e| e.sign() > 0) {
            return None; // mixed signs: not the Perron direction
        }
        vb = vb.iter().map(|e| e.neg()).collect();
    }
    for (slot, &vert) in form.classes[b].iter().enumerate() {
        v[vert] = vb[slot].clone();
    }
    // remaining supported classes in topological order (accessed first):
    // each sees only already-computed classes
    for c in 0..k {
        if c == b || !in_support[c] {
            continue;
        }
        let class = &form.classes[c];
        // w = sum over columns outside the class of A[class, j] * v[j]
        let w: Vec<KElem> = class
            .iter()
            .map(|&i| {
                let mut acc = KElem::zero();
                for j in 0..n {
                    if class.contains(&j) || m.rows[i][j].is_zero() {
                        continue;
                    }
                    let coef = KElem::from_rat(Rat::from_integer(m.rows[i][j].clone()));
                    acc = acc.add(&coef.mul(&v[j]));
                }
                acc
            })
            .collect();
        if w.iter().all(|e| e.sign() == 0) {
            continue; // class receives nothing; stays zero
        }
        let sub = submatrix(m, class);
        let vc = solve_theta_system(&sub, theta, &w)?;
        if vc.iter().any(|e| e.sign() < 0) {
            return None;
        }
        for (slot, &vert) in class.iter().enumerate() {
            v[vert] = vc[slot].clone();
        }
    }
    Some(v)
}

/// Exact check `deg_μ(f_i) = θ μ_i` for all `i`, linear in the support size.
pub fn verify_maximal_eigenvector(
    f: &Endomorphism,
    mu: &WeightVector,
    theta: &KElem,
) -> bool {
    if f.arity() != mu.arity() {
        return false;
    }
    for i in 0..f.arity() {
        let target = theta.mul(mu.entry(i));
        match mu_degree_poly(f.component(i), mu) {
            MuDegree::Finite(d) => {
                if !d.eq_exact(&target) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Maximal eigenvalue with all achieving witnesses and every *verified*
/// maximal eigenvector candidate, in deterministic order.
#[derive(Debug, Clone)]
pub struct EigenCandidates {
    pub theta: RealAlgebraicNumber,
    pub theta_elem: KElem,
    /// Matrices achieving θ, lexicographically ordered.
    pub witnesses: Vec<IntMatrix>,
    /// Verified maximal eigenvectors, paired with the witness that
    /// produced them; duplicates removed.
    pub verified: Vec<(WeightVector, IntMatrix)>,
}

/// Enumerate verified maximal eigenvector candidates of `f`.
pub fn eigen_candidates(f: &Endomorphism, cfg_budget: usize) -> Result<EigenCandidates, DdError> {
    let support = SupportFamily::of(f)?.pruned();
    let budget = Budget::terms(cfg_budget);
    let matrices = support.matrices(&budget)?;
    let achievers = achieving_matrices(&matrices);
    if achievers.is_empty() {
        return Err(DdError::internal("no supported matrices"));
    }
    let theta = achievers[0].0.clone();
    let te = theta_elem(&theta);
    const ACHIEVER_CAP: usize = 64;
    let witnesses: Vec<IntMatrix> = achievers
        .iter()
        .take(ACHIEVER_CAP)
        .map(|(_, m)| m.clone())
        .collect();
    let mut verified: Vec<(WeightVector, IntMatrix)> = Vec::new();
    for m in &witnesses {
        for cand in eigenvector_candidates(m, &te) {
            if let Ok(mu) = WeightVector::new(cand) {
                if verify_maximal_eigenvector(f, &mu, &te) {
                    let duplicate = verified.iter().any(|(known, _)| {
                        known
                            .entries()
                            .iter()
                            .zip(mu.entries())
                            .all(|(a, b)| a.eq_exact(b))
                    });
                    if !duplicate {
                        verified.push((mu, m.clone()));
                    }
                }
            }
        }
    }
    if verified.is_empty() {
        if let Some(mu) = perturbation_fallback(&witnesses[0], &te) {
            if verify_maximal_eigenvector(f, &mu, &te) {
                verified.push((mu, witnesses[0].clone()));
            }
        }
    }
    Ok(EigenCandidates {
        theta,
        theta_elem: te,
        witnesses,
        verified,
    })
}

/// Maximal eigenvalue together with a verified maximal eigenvector.
///
/// Candidates come from non-negative eigenvectors of the matrices achieving
/// θ (basic-class constructions and their sum). When they all fail, a
/// perturbation fallback nudges the supports along a line, follows the
/// perturbed Perron vectors numerically, rounds the limit into `Q(θ)` and
/// verifies exactly.
pub fn maximal_eigenvector(f: &Endomorphism, cfg_budget: usize) -> Result<MaxEigenData, DdError> {
    let cands = eigen_candidates(f, cfg_budget)?;
    match cands.verified.into_iter().next() {
        Some((mu, witness)) => Ok(MaxEigenData {
            theta: cands.theta,
            witness,
            mu: Some(mu),
        }),
        None => Err(DdError::internal(
            "no maximal eigenvector found; candidate set and perturbation fallback exhausted \
             (contradicts the existence theorem — likely a budget cap or a bug)",
        )),
    }
}

/// Numeric fallback: perturb the witness rows along a fixed line with
/// decreasing rationals 1/(t+c), follow the Perron vectors of the perturbed
/// matrices, then round the limit into `Q(θ)` against the θ-power basis and
/// return the candidate for exact verification.
fn perturbation_fallback(
    witness: &IntMatrix,
    theta: &KElem,
) -> Option<WeightVector> {
    use num_traits::ToPrimitive;
    let n = witness.n();
    let base: Vec<Vec<f64>> = witness
        .rows
        .iter()
        .map(|r| r.iter().map(|e| e.to_f64().unwrap_or(0.0)).collect())
        .collect();
    let mut last = vec![1.0f64; n];
    for t in 1..=64u32 {
        let eps = 1.0 / (t as f64 + 4.0);
        // direction: distinct offsets keep the perturbed spectra simple
        let mat: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| base[i][j] + eps * ((i * n + j + 1) as f64) / (n * n) as f64)
                    .collect()
            })
            .collect();
        // power iteration
        let mut v = last.clone();
        for _ in 0..200 {
            let mut w = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    w[i] += mat[i][j] * v[j];
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= 0.0 {
                return None;
            }
            for x in w.iter_mut() {
                *x /= norm;
            }
            v = w;
        }
        last = v;
    }
    // normalize by the largest coordinate, round each ratio in Q(θ)
    let max = last.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return None;
    }
    let deg = theta
        .field()
        .map(|f| f.modulus().degree().unwrap_or(1))
        .unwrap_or(1);
    let tf = theta.to_f64();
    let mut entries = Vec::with_capacity(n);
    for &x in &last {
        let target = x / max;
        // search small integer combinations sum c_k θ^k / d
        let mut found: Option<KElem> = None;
        let _ = deg;
        'outer: for d in 1..=4i64 {
            for c0 in -6..=6i64 {
                for c1 in -6..=6i64 {
                    let approx = (c0 as f64 + c1 as f64 * tf) / d as f64;
                    if (approx - target).abs() < 1e-6 {
                        let e = KElem::from_int(c0)
                            .add(&theta.scale(&Rat::from_integer(Int::from(c1))))
                            .scale(&Rat::new(Int::one(), Int::from(d)));
                        found = Some(e);
                        break 'outer;
                    }
                }
            }
        }
        entries.push(found?);
    }
    WeightVector::new(entries).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_endomorphism;

    fn endo(s: &str) -> Endomorphism {
        parse_endomorphism(s).unwrap()
    }

    #[test]
    fn support_family_counts() {
        // (x3 + x1 x2, x2 + x1^3, x1): 2 * 2 * 1 = 4 supported matrices
        let f = endo("(x3 + x1*x2, x2 + x1^3, x1)");
        let s = SupportFamily::of(&f).unwrap();
        assert_eq!(s.count(), 4);
    }

    #[test]
    fn spectral_radius_examples() {
        // permutation matrix -> 1
        let p = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert_eq!(p.spectral_radius(), RealAlgebraicNumber::from_int(1));
        // [[1,1],[3,0]] -> (1+sqrt13)/2
        let m = IntMatrix::from_i64(&[&[1, 1], &[3, 0]]);
        let rho = m.spectral_radius();
        assert_eq!(&rho.decimal(4), "2.3027");
        // [[1,1],[1,2]] -> (3+sqrt5)/2 (oracle: char poly x^2-3x+1)
        let m2 = IntMatrix::from_i64(&[&[1, 1], &[1, 2]]);
        assert_eq!(&m2.spectral_radius().decimal(4), "2.6180");
    }

    #[test]
    fn maximal_eigenvalue_of_paper_family() {
        // f = (x1^a x2^b + x3, x2 + x1^c, x1): theta = (a+sqrt(a^2+4bc))/2
        let f = endo("(x1*x2 + x3, x2 + x1, x1)");
        let data = maximal_eigenvalue(&f, 10_000).unwrap();
        assert_eq!(&data.theta.decimal(6), "1.618033");
    }

    #[test]
    fn sqrt_n_example() {
        // f = (x3 - x2^2, x1, x2 + x1^2): theta = sqrt(2)
        let f = endo("(x3 - x2^2, x1, x2 + x1^2)");
        let data = maximal_eigenvalue(&f, 10_000).unwrap();
        let sqrt2 = largest_real_root(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(data.theta, sqrt2);
    }

    #[test]
    fn frobenius_form_blocks() {
        let m = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        let form = frobenius_form(&m);
        assert_eq!(form.classes.len(), 2);
        // companion of x^3 - x - 1 is strongly connected
        let c = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert!(is_irreducible(&c));
        let id3 = IntMatrix::identity(3);
        assert_eq!(frobenius_form(&id3).classes.len(), 3);
    }

    #[test]
    fn eigenvector_for_quadratic_block() {
        // M = [[0,2],[3,0]]: theta = sqrt(6), v = (sqrt6, 3) up to scale
        let m = IntMatrix::from_i64(&[&[0, 2], &[3, 0]]);
        let theta = m.spectral_radius();
        let v = nonneg_eigenvector(&m, &theta).unwrap();
        // check M v = theta v exactly
        let te = theta_elem(&theta);
        for i in 0..2 {
            let mut lhs = KElem::zero();
            for j in 0..2 {
                let c = KElem::from_rat(Rat::from_integer(m.rows[i][j].clone()));
                lhs = lhs.add(&c.mul(&v[j]));
            }
            assert!(lhs.eq_exact(&te.mul(&v[i])));
        }
        assert!(v.iter().all(|e| e.sign() > 0));
    }

    #[test]
    fn permutation_matrix_eigenvector_is_positive() {
        let m = IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let one = m.spectral_radius();
        let v = nonneg_eigenvector(&m, &one).unwrap();
        assert!(v.iter().all(|e| e.sign() > 0));
    }

    #[test]
    fn maximal_eigenvector_for_two_basic_examples() {
        // (x1^a x2^b + x3, x2 + x1^c, x1) with (1,1,1): positive μ
        let f = endo("(x1*x2 + x3, x2 + x1, x1)");
        let data = maximal_eigenvector(&f, 10_000).unwrap();
        let mu = data.mu.unwrap();
        assert!(mu.is_strictly_positive());
        let te = theta_elem(&data.theta);
        assert!(verify_maximal_eigenvector(&f, &mu, &te));
    }

    #[test]
    fn paper_example_with_zero_weights() {
        // (x1^2 + x2, x1, x3 + (x3+x4)^2, x4 - (x3+x4)^2): θ = 2 and
        // μ = (0,0,1,1) verifies (paper's explicit check)
        let f = endo("(x1^2 + x2, x1, x3 + (x3 + x4)^2, x4 - (x3 + x4)^2)");
        let data = maximal_eigenvector(&f, 10_000).unwrap();
        assert_eq!(data.theta, RealAlgebraicNumber::from_int(2));
        let mu = data.mu.unwrap();
        let te = KElem::from_int(2);
        assert!(verify_maximal_eigenvector(&f, &mu, &te));
        // the hand-checked vector verifies as well
        let hand = WeightVector::from_ints(&[0, 0, 1, 1]).unwrap();
        assert!(verify_maximal_eigenvector(&f, &hand, &te));
    }

    #[test]
    fn verify_rejects_wrong_vector() {
        // μ = (1,1,1) on (x3 + x1x2, x2 + x1^3, x1): deg_μ(f_2) = 3 ≠ 2·1
        let f = endo("(x3 + x1*x2, x2 + x1^3, x1)");
        let mu = WeightVector::from_ints(&[1, 1, 1]).unwrap();
        assert!(!verify_maximal_eigenvector(&f, &mu, &KElem::from_int(2)));
        // identity map: μ = 1, θ = 1 verifies
        let id = Endomorphism::identity(3);
        assert!(verify_maximal_eigenvector(
            &id,
            &WeightVector::from_ints(&[1, 1, 1]).unwrap(),
            &KElem::one()
        ));
    }

    #[test]
    fn rho_bounded_by_degree() {
        // every supported matrix of f has rho <= deg f
        let f = endo("(x3 + x1*x2, x2 + x1^3, x1)");
        let d = f.degree().unwrap() as i64;
        let support = SupportFamily::of(&f).unwrap();
        for m in support.matrices(&Budget::unlimited()).unwrap() {
            assert!(m.spectral_radius() <= RealAlgebraicNumber::from_int(d));
        }
    }

    #[test]
    fn entrywise_monotonicity_of_rho() {
        let a = IntMatrix::from_i64(&[&[1, 1], &[1, 0]]);
        let b = IntMatrix::from_i64(&[&[2, 1], &[1, 3]]);
        assert!(a.spectral_radius() <= b.spectral_radius());
    }
}
