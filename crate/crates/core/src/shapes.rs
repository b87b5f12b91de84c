//! Structural shape detection and normal forms: affine maps, coordinate
//! permutations, triangular/elementary factorizations, Bruhat conjugation
//! to permutation-triangular form, and the cyclic normal form of
//! permutation-elementary automorphisms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebraic::{largest_real_root, RealAlgebraicNumber};
use crate::config::Budget;
use crate::error::DdError;
use crate::matrices::IntMatrix;
use crate::numberfield::KElem;
use crate::poly::{Endomorphism, Monomial, Polynomial};
use crate::unipoly::IntPoly;
use crate::weights::WeightVector;

type Int = BigInt;
type Rat = BigRational;

/// Invertible affine map `x -> L x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub linear: Vec<Vec<Rat>>,
    pub translation: Vec<Rat>,
}

impl AffineMap {
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn identity(n: usize) -> Self {
        AffineMap {
            linear: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect(),
            translation: vec![Rat::zero(); n],
        }
    }

    pub fn from_permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        AffineMap {
            linear: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if j == perm[i] { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect(),
            translation: vec![Rat::zero(); n],
        }
    }

    pub fn to_endomorphism(&self) -> Endomorphism {
        let n = self.n();
        let comps = (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(n, self.translation[i].clone());
                for j in 0..n {
                    if !self.linear[i][j].is_zero() {
                        p = p.add(&Polynomial::variable(n, j).scale(&self.linear[i][j]));
                    }
                }
                p
            })
            .collect();
        Endomorphism::new(comps).expect("affine map is a valid endomorphism")
    }

    /// Extract an affine map from a degree-≤1 endomorphism with invertible
    /// linear part.
    pub fn from_endomorphism(f: &Endomorphism) -> Option<AffineMap> {
        let n = f.arity();
        if f.degree().unwrap_or(0) > 1 {
            return None;
        }
        let mut linear = vec![vec![Rat::zero(); n]; n];
        let mut translation = vec![Rat::zero(); n];
        for i in 0..n {
            for (m, c) in f.component(i).terms() {
                if m.is_unit() {
                    translation[i] = c.clone();
                } else {
                    let j = m.max_var().unwrap();
                    linear[i][j] = c.clone();
                }
            }
        }
        let map = AffineMap {
            linear,
            translation,
        };
        if map.det().is_zero() {
            return None;
        }
        Some(map)
    }

    pub fn det(&self) -> Rat {
        det_rat(&self.linear)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let n = self.n();
        let mut linear = vec![vec![Rat::zero(); n]; n];
        let mut translation = self.translation.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let add = &self.linear[i][k] * &other.linear[k][j];
                    linear[i][j] += add;
                }
            }
            for k in 0..n {
                let add = &self.linear[i][k] * &other.translation[k];
                translation[i] += add;
            }
        }
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let n = self.n();
        let li = invert_rat(&self.linear).expect("affine map must be invertible");
        let translation = (0..n)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..n {
                    acc += &li[i][j] * &self.translation[j];
                }
                -acc
            })
            .collect();
        AffineMap {
            linear: li,
            translation,
        }
    }

    pub fn is_lower_triangular(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.linear[i][j].is_zero()))
    }
}

fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero());
        let Some(p) = pivot else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k].clone();
        let inv = Rat::one() / a[k][k].clone();
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let factor = &a[r][k] * &inv;
            for c in k..n {
                let sub = &factor * &a[k][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

fn invert_rat(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(pivot, k);
        let inv = Rat::one() / a[k][k].clone();
        for c in 0..2 * n {
            a[k][c] = &a[k][c] * &inv;
        }
        for r in 0..n {
            if r != k && !a[r][k].is_zero() {
                let factor = a[r][k].clone();
                for c in 0..2 * n {
                    let sub = &factor * &a[k][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Syntactic shape of an endomorphism, with extracted factors.
#[derive(Debug, Clone)]
pub struct ShapeInfo {
    pub monomial: Option<IntMatrix>,
    pub permutation: Option<Vec<usize>>,
    pub affine: Option<AffineMap>,
    pub elementary: bool,
    pub shift_like: Option<Polynomial>,
    pub triangular: bool,
    pub permutation_elementary: Option<PermElem>,
    pub permutation_triangular: Option<(Vec<usize>, Endomorphism)>,
    pub affine_triangular: Option<(AffineMap, Endomorphism)>,
}

/// A permutation-elementary factorization `f = σ ∘ e`.
#[derive(Debug, Clone)]
pub struct PermElem {
    /// `f_i = e_{pi[i]}` (0-indexed); `pi[q_pos] = n-1`.
    pub pi: Vec<usize>,
    /// Index of the component holding the elementary polynomial.
    pub q_pos: usize,
}

impl ShapeInfo {
    pub fn label(&self) -> &'static str {
        if self.permutation.is_some() {
            "permutation"
        } else if self.monomial.is_some() {
            "monomial"
        } else if self.affine.is_some() {
            "affine"
        } else if self.shift_like.is_some() {
            "shift-like"
        } else if self.elementary {
            "elementary"
        } else if self.permutation_elementary.is_some() {
            "permutation-elementary"
        } else if self.triangular {
            "triangular"
        } else if self.permutation_triangular.is_some() {
            "permutation-triangular"
        } else if self.affine_triangular.is_some() {
            "affine-triangular"
        } else {
            "other"
        }
    }
}

/// Component equal to a single variable? Returns the variable index.
fn as_variable(p: &Polynomial) -> Option<usize> {
    if p.num_terms() != 1 {
        return None;
    }
    let (m, c) = p.terms().next().unwrap();
    if !c.is_one() {
        return None;
    }
    let mv = m.max_var()?;
    if m.total_degree() == 1 && m.exp(mv) == 1 {
        Some(mv)
    } else {
        None
    }
}

/// Coordinate permutation `f_i = x_{perm[i]}`.
pub fn permutation_of_coordinates(f: &Endomorphism) -> Option<Vec<usize>> {
    let n = f.arity();
    let mut perm = Vec::with_capacity(n);
    for c in f.components() {
        perm.push(as_variable(c)?);
    }
    let mut seen = vec![false; n];
    for &p in &perm {
        if seen[p] {
            return None;
        }
        seen[p] = true;
    }
    Some(perm)
}

/// Monomial endomorphism: every component one (non-constant-free) term.
pub fn monomial_matrix(f: &Endomorphism) -> Option<IntMatrix> {
    let n = f.arity();
    let mut rows = Vec::with_capacity(n);
    for c in f.components() {
        if c.num_terms() != 1 {
            return None;
        }
        let (m, _) = c.terms().next().unwrap();
        rows.push(m.exps().iter().map(|&e| Int::from(e)).collect());
    }
    Some(IntMatrix::new(rows))
}

/// Elementary: fixes all variables except the last.
pub fn is_elementary(f: &Endomorphism) -> bool {
    let n = f.arity();
    (0..n - 1).all(|i| as_variable(f.component(i)) == Some(i))
}

/// Shift-like `(x_n + p(x_1..x_{n-1}), x_1, ..., x_{n-1})`.
pub fn shift_like_polynomial(f: &Endomorphism) -> Option<Polynomial> {
    let n = f.arity();
    if n < 2 {
        return None;
    }
    for i in 1..n {
        if as_variable(f.component(i)) != Some(i - 1) {
            return None;
        }
    }
    let first = f.component(0);
    let last_var = Polynomial::variable(n, n - 1);
    let p = first.sub(&last_var);
    if p.degree_in_var(n - 1).unwrap_or(0) > 0 {
        return None;
    }
    Some(p)
}

/// Permutation-elementary factorization: all but one component are distinct
/// plain variables among `x_1..x_{n-1}`, the remaining one is arbitrary.
pub fn permutation_elementary_factor(f: &Endomorphism) -> Option<PermElem> {
    let n = f.arity();
    let mut q_pos: Option<usize> = None;
    let mut var_of: Vec<Option<usize>> = Vec::with_capacity(n);
    for (i, c) in f.components().iter().enumerate() {
        match as_variable(c) {
            Some(v) if v < n - 1 => var_of.push(Some(v)),
            _ => {
                if q_pos.is_some() {
                    return None;
                }
                q_pos = Some(i);
                var_of.push(None);
            }
        }
    }
    // duplicates among the variable components are not representable
    let mut seen = vec![false; n];
    for v in var_of.iter().flatten() {
        if seen[*v] {
            return None;
        }
        seen[*v] = true;
    }
    let q_pos = match q_pos {
        Some(q) => q,
        None => return None, // n distinct variables < x_n impossible
    };
    let pi = var_of
        .into_iter()
        .map(|v| v.unwrap_or(n - 1))
        .collect::<Vec<_>>();
    Some(PermElem { pi, q_pos })
}

/// Greedy permutation-triangular factorization `f = σ ∘ τ`:
/// match each component to a triangular slot `j` with `maxvar(f_i) ≤ j`.
pub fn permutation_triangular_factor(
    f: &Endomorphism,
) -> Option<(Vec<usize>, Endomorphism)> {
    let n = f.arity();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (f.component(i).max_var().map_or(0, |v| v + 1), i));
    // component order[k] gets slot k
    let mut tau_comps = vec![Polynomial::zero(n); n];
    let mut perm = vec![0usize; n]; // f_i = tau_{perm[i]}
    for (slot, &i) in order.iter().enumerate() {
        let need = f.component(i).max_var().map_or(0, |v| v + 1);
        if need > slot + 1 {
            return None;
        }
        tau_comps[slot] = f.component(i).clone();
        perm[i] = slot;
    }
    let tau = Endomorphism::new(tau_comps).ok()?;
    Some((perm, tau))
}

/// Affine-triangular factorization `f = α ∘ τ` through the flag of
/// subspaces spanned by combinations supported on initial variable
/// segments. Syntactic and conservative: returns `None` rather than
/// searching the conjugacy class.
pub fn affine_triangular_factor(
    f: &Endomorphism,
) -> Option<(AffineMap, Endomorphism)> {
    let n = f.arity();
    // rows: f_1..f_n and the constant 1, over the union of monomials
    let mut monos: Vec<Monomial> = Vec::new();
    for c in f.components() {
        for (m, _) in c.terms() {
            if !monos.contains(m) {
                monos.push(m.clone());
            }
        }
    }
    let unit = Monomial::unit(n);
    if !monos.contains(&unit) {
        monos.push(unit.clone());
    }
    monos.sort();
    let col_of = |m: &Monomial| monos.iter().position(|x| x == m).unwrap();
    let rows = n + 1;
    let mut mat = vec![vec![Rat::zero(); monos.len()]; rows];
    for (i, c) in f.components().iter().enumerate() {
        for (m, coef) in c.terms() {
            mat[i][col_of(m)] = coef.clone();
        }
    }
    mat[n][col_of(&unit)] = Rat::one();

    // chosen combos c_1..c_n with combo_j supported on x_1..x_j
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    for j in 1..=n {
        // kernel constraint: columns whose monomial uses a variable > j
        let bad: Vec<usize> = monos
            .iter()
            .enumerate()
            .filter(|(_, m)| m.max_var().map_or(false, |v| v + 1 > j))
            .map(|(k, _)| k)
            .collect();
        let kernel = kernel_basis(&mat, &bad);
        // pick a kernel vector independent of {1} ∪ chosen so far;
        // the constant row alone spans the "degree 0" part
        let mut fixed: Vec<Vec<Rat>> = vec![{
            let mut e = vec![Rat::zero(); rows];
            e[n] = Rat::one();
            e
        }];
        fixed.extend(chosen.iter().cloned());
        let pick = kernel
            .into_iter()
            .find(|v| !in_span(&fixed, v))?;
        chosen.push(pick);
    }
    // τ_j = chosen_j · (f, 1)
    let tau_comps: Vec<Polynomial> = chosen
        .iter()
        .map(|c| {
            let mut p = Polynomial::zero(n);
            for i in 0..n {
                if !c[i].is_zero() {
                    p = p.add(&f.component(i).scale(&c[i]));
                }
            }
            if !c[n].is_zero() {
                p = p.add(&Polynomial::constant(n, c[n].clone()));
            }
            p
        })
        .collect();
    let tau = Endomorphism::new(tau_comps).ok()?;
    if !tau.is_triangular() {
        return None;
    }
    // solve f = A τ + b
    let mut amat = vec![vec![Rat::zero(); n]; n];
    let mut bvec = vec![Rat::zero(); n];
    {
        // express each f_i in the basis (τ_1..τ_n, 1): the coordinates are
        // obtained by solving the (n+1)x(n+1) system in combo space
        // chosen matrix C maps (f,1) -> (τ,1); invert it
        let mut cmat = vec![vec![Rat::zero(); rows]; rows];
        for (j, c) in chosen.iter().enumerate() {
            cmat[j].clone_from_slice(c);
        }
        cmat[n][n] = Rat::one();
        let cinv = invert_rat(&cmat)?;
        // f_i = sum_j cinv[i][j] τ_j + cinv[i][n] · 1
        for i in 0..n {
            for j in 0..n {
                amat[i][j] = cinv[i][j].clone();
            }
            bvec[i] = cinv[i][n].clone();
        }
    }
    let alpha = AffineMap {
        linear: amat,
        translation: bvec,
    };
    if alpha.det().is_zero() {
        return None;
    }
    // verify exactly: f = α ∘ τ
    let recomposed = Endomorphism::compose(
        &alpha.to_endomorphism(),
        &tau,
        &Budget::unlimited(),
    )
    .ok()?;
    if &recomposed != f {
        return None;
    }
    Some((alpha, tau))
}

/// Basis of combinations `c` (length rows) with `c · mat` vanishing on the
/// given columns.
fn kernel_basis(mat: &[Vec<Rat>], cols: &[usize]) -> Vec<Vec<Rat>> {
    let rows = mat.len();
    // transpose restricted system: unknowns = row combinations
    let mut sys: Vec<Vec<Rat>> = cols
        .iter()
        .map(|&c| (0..rows).map(|r| mat[r][c].clone()).collect())
        .collect();
    // gaussian elimination on sys (equations) to find kernel of rows^T
    let ncols = rows;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut prow = 0usize;
    for col in 0..ncols {
        let mut sel = None;
        for r in prow..sys.len() {
            if !sys[r][col].is_zero() {
                sel = Some(r);
                break;
            }
        }
        let Some(r) = sel else { continue };
        sys.swap(prow, r);
        let inv = Rat::one() / sys[prow][col].clone();
        for c in 0..ncols {
            sys[prow][c] = &sys[prow][c] * &inv;
        }
        for r2 in 0..sys.len() {
            if r2 != prow && !sys[r2][col].is_zero() {
                let f = sys[r2][col].clone();
                for c in 0..ncols {
                    let sub = &f * &sys[prow][c];
                    sys[r2][c] -= sub;
                }
            }
        }
        pivot_of_col[col] = Some(prow);
        prow += 1;
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for c in 0..ncols {
            if let Some(pr) = pivot_of_col[c] {
                v[c] = -sys[pr][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

fn in_span(basis: &[Vec<Rat>], v: &[Rat]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let rows = v.len();
    let mut work: Vec<Vec<Rat>> = basis.to_vec();
    let mut target = v.to_vec();
    let mut used = vec![false; work.len()];
    for col in 0..rows {
        let pivot = (0..work.len()).find(|&r| !used[r] && !work[r][col].is_zero());
        let Some(p) = pivot else { continue };
        used[p] = true;
        let inv = Rat::one() / work[p][col].clone();
        let prow: Vec<Rat> = work[p].iter().map(|x| x * &inv).collect();
        for (r, row) in work.iter_mut().enumerate() {
            if r != p && !row[col].is_zero() {
                let f = row[col].clone();
                for c in 0..rows {
                    let sub = &f * &prow[c];
                    row[c] -= sub;
                }
            }
        }
        if !target[col].is_zero() {
            let f = target[col].clone();
            for c in 0..rows {
                let sub = &f * &prow[c];
                target[c] -= sub;
            }
        }
        work[p] = prow;
    }
    target.iter().all(|x| x.is_zero())
}

/// Full syntactic classification.
pub fn classify_shape(f: &Endomorphism) -> ShapeInfo {
    let permutation = permutation_of_coordinates(f);
    let monomial = monomial_matrix(f);
    let affine = AffineMap::from_endomorphism(f);
    let elementary = is_elementary(f);
    let shift_like = shift_like_polynomial(f);
    let permutation_elementary = permutation_elementary_factor(f);
    let triangular = f.is_triangular();
    let permutation_triangular = permutation_triangular_factor(f);
    let affine_triangular = if permutation_triangular.is_none() {
        affine_triangular_factor(f)
    } else {
        None
    };
    ShapeInfo {
        monomial,
        permutation,
        affine,
        elementary,
        shift_like,
        triangular,
        permutation_elementary,
        permutation_triangular,
        affine_triangular,
    }
}

/// Bruhat factorization `L = B1 · σ · B2` of an invertible rational matrix
/// into lower-triangular, permutation and lower-triangular factors.
/// Columns are processed right to left with the topmost unused non-zero
/// pivot row; pivot rows are cleared leftward (column operations) and pivot
/// columns downward (row operations).
pub fn bruhat_lpl(l: &[Vec<Rat>]) -> Option<(Vec<Vec<Rat>>, Vec<usize>, Vec<Vec<Rat>>)> {
    let n = l.len();
    let mut a: Vec<Vec<Rat>> = l.to_vec();
    let mut rmat = AffineMap::identity(n).linear; // accumulated row ops
    let mut cmat = AffineMap::identity(n).linear; // accumulated column ops
    let mut used = vec![false; n];
    for j in (0..n).rev() {
        let i = (0..n).find(|&r| !used[r] && !a[r][j].is_zero())?;
        used[i] = true;
        // clear leftward in row i using column j
        for j2 in 0..j {
            if a[i][j2].is_zero() {
                continue;
            }
            let factor = &a[i][j2] / &a[i][j];
            for r in 0..n {
                let sub = &factor * &a[r][j];
                a[r][j2] -= sub.clone();
                let subc = &factor * &cmat[r][j];
                cmat[r][j2] -= subc;
            }
        }
        // clear downward in column j using row i
        for r in i + 1..n {
            if a[r][j].is_zero() {
                continue;
            }
            let factor = &a[r][j] / &a[i][j];
            for c in 0..n {
                let sub = &factor * &a[i][c];
                a[r][c] -= sub.clone();
                let subr = &factor * &rmat[i][c];
                rmat[r][c] -= subr;
            }
        }
    }
    // now R·L·C = a is a generalized permutation matrix
    let mut perm = vec![0usize; n];
    let mut scale = vec![Rat::zero(); n];
    for i in 0..n {
        let mut nz = None;
        for j in 0..n {
            if !a[i][j].is_zero() {
                if nz.is_some() {
                    return None;
                }
                nz = Some(j);
            }
        }
        let j = nz?;
        perm[i] = j;
        scale[i] = a[i][j].clone();
    }
    // L = R^{-1} · D · P · C^{-1} with D = diag(scale), P the permutation;
    // fold D into the left factor
    let rinv = invert_rat(&rmat)?;
    let cinv = invert_rat(&cmat)?;
    let b1: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| &rinv[i][j] * &scale[j]).collect())
        .collect();
    // verify: b1 · P · cinv == l, with (P·M)[i][j] = M[perm[i]][j]
    let pm: Vec<Vec<Rat>> = (0..n).map(|i| cinv[perm[i]].clone()).collect();
    let mut check = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if b1[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let add = &b1[i][k] * &pm[k][j];
                check[i][j] += add;
            }
        }
    }
    if check != *l {
        return None;
    }
    // lower-triangularity of both factors
    for i in 0..n {
        for j in i + 1..n {
            if !b1[i][j].is_zero() || !cinv[i][j].is_zero() {
                return None;
            }
        }
    }
    Some((b1, perm, cinv))
}

/// Conjugate an affine-triangular map `f = α ∘ τ` to permutation-triangular
/// form: returns `(β, σ, τ')` with `β^{-1} ∘ f ∘ β = σ ∘ τ'`.
pub fn bruhat_conjugate(
    alpha: &AffineMap,
    tau: &Endomorphism,
) -> Result<(AffineMap, Vec<usize>, Endomorphism), DdError> {
    let n = alpha.n();
    if alpha.det().is_zero() {
        return Err(DdError::domain("affine factor is not invertible"));
    }
    if !tau.is_triangular() {
        return Err(DdError::domain("second factor is not triangular"));
    }
    // normalize the translation: p = α^{-1}(0), α' = α ∘ τ_p is linear
    let ainv = alpha.inverse();
    let p: Vec<Rat> = ainv.translation.clone();
    let shift = AffineMap {
        linear: AffineMap::identity(n).linear,
        translation: p.clone(),
    };
    let alpha_lin = alpha.compose(&shift);
    debug_assert!(alpha_lin.translation.iter().all(|t| t.is_zero()));
    // τ~ = τ_p^{-1} ∘ τ: subtract p from each component
    let tau_shifted = Endomorphism::new(
        (0..n)
            .map(|i| {
                tau.component(i)
                    .add(&Polynomial::constant(n, -p[i].clone()))
            })
            .collect(),
    )?;
    let (b1, perm, b2) = bruhat_lpl(&alpha_lin.linear)
        .ok_or_else(|| DdError::internal("Bruhat factorization failed"))?;
    let beta = AffineMap {
        linear: b1,
        translation: vec![Rat::zero(); n],
    };
    let b2map = AffineMap {
        linear: b2,
        translation: vec![Rat::zero(); n],
    };
    // τ' = B2 ∘ τ~ ∘ β
    let budget = Budget::unlimited();
    let t1 = Endomorphism::compose(&b2map.to_endomorphism(), &tau_shifted, &budget)?;
    let tau_new = Endomorphism::compose(&t1, &beta.to_endomorphism(), &budget)?;
    if !tau_new.is_triangular() {
        return Err(DdError::internal(
            "conjugated triangular factor lost triangularity",
        ));
    }
    // verify β^{-1} ∘ (α∘τ) ∘ β = σ ∘ τ'
    let f = Endomorphism::compose(&alpha.to_endomorphism(), tau, &budget)?;
    let lhs = Endomorphism::compose(
        &Endomorphism::compose(&beta.inverse().to_endomorphism(), &f, &budget)?,
        &beta.to_endomorphism(),
        &budget,
    )?;
    let sigma = AffineMap::from_permutation(&perm);
    let rhs = Endomorphism::compose(&sigma.to_endomorphism(), &tau_new, &budget)?;
    if lhs != rhs {
        return Err(DdError::internal("Bruhat conjugation verification failed"));
    }
    Ok((beta, perm, tau_new))
}

/// Cyclic normal form of a permutation-elementary automorphism:
/// `(f_1, ..., f_m, ξ x_N + p, x_{m+1}, ..., x_{N-1})` with
/// `{f_1..f_m} = {x_1..x_m}`.
#[derive(Debug, Clone)]
pub struct PermElemNormalForm {
    pub m: usize,
    pub xi: Rat,
    /// The elementary polynomial `p` (free of `x_N`), in ambient arity `N`.
    pub p: Polynomial,
    /// The conjugated endomorphism itself.
    pub f: Endomorphism,
    /// Coordinate relabeling used (new index of each old coordinate).
    pub relabel: Vec<usize>,
}

/// Conjugate a permutation-elementary automorphism by a coordinate
/// permutation into the cyclic normal form.
pub fn perm_elem_normal_form(h: &Endomorphism) -> Result<PermElemNormalForm, DdError> {
    let n = h.arity();
    let pe = permutation_elementary_factor(h)
        .ok_or_else(|| DdError::domain("endomorphism is not permutation-elementary"))?;
    // walk the π-cycle through the q slot (index n-1 in e), forward:
    // the relabeled cycle must read N-1 -> N-2 -> ... -> m -> N-1
    let pi = &pe.pi;
    let mut cycle = vec![n - 1];
    let mut cur = pi[n - 1];
    while cur != n - 1 {
        cycle.push(cur);
        cur = pi[cur];
        if cycle.len() > n {
            return Err(DdError::internal("permutation cycle walk diverged"));
        }
    }
    let ell = cycle.len();
    let m = n - ell;
    // relabel: cycle[k] -> N-1-k (0-indexed: new index n-1-k);
    // remaining indices -> 0..m-1 preserving order
    let mut relabel = vec![usize::MAX; n];
    for (k, &v) in cycle.iter().enumerate() {
        relabel[v] = n - 1 - k;
    }
    let mut next = 0usize;
    for v in 0..n {
        if relabel[v] == usize::MAX {
            relabel[v] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, m);
    // conjugate by the relabeling ρ: f = ρ ∘ h ∘ ρ^{-1},
    // where ρ maps coordinate v to position relabel[v]
    let rho = AffineMap::from_permutation(&inverse_perm(&relabel));
    let rho_inv = AffineMap::from_permutation(&relabel);
    let budget = Budget::unlimited();
    let f1 = Endomorphism::compose(&rho.to_endomorphism(), h, &budget)?;
    let cand1 = Endomorphism::compose(&f1, &rho_inv.to_endomorphism(), &budget)?;
    let cand2 = {
        let f2 = Endomorphism::compose(&rho_inv.to_endomorphism(), h, &budget)?;
        Endomorphism::compose(&f2, &rho.to_endomorphism(), &budget)?
    };
    for f in [cand1, cand2] {
        if let Some(nf) = check_cyclic_form(&f, m) {
            return Ok(PermElemNormalForm {
                m,
                xi: nf.0,
                p: nf.1,
                f,
                relabel: relabel.clone(),
            });
        }
    }
    Err(DdError::internal(
        "conjugation did not reach the cyclic normal form",
    ))
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Check the cyclic shape and extract `(ξ, p)`.
fn check_cyclic_form(f: &Endomorphism, m: usize) -> Option<(Rat, Polynomial)> {
    let n = f.arity();
    // components 1..m: permutation of x_1..x_m
    let mut seen = vec![false; m];
    for i in 0..m {
        let v = as_variable(f.component(i))?;
        if v >= m || seen[v] {
            return None;
        }
        seen[v] = true;
    }
    // components m+2..n: shifted coordinates x_{m+1}..x_{n-1}
    for k in m + 1..n {
        if as_variable(f.component(k)) != Some(k - 1) {
            return None;
        }
    }
    // component m+1: ξ x_n + p(x_1..x_{n-1})
    let comp = f.component(m);
    let xi_mono = Monomial::var(n, n - 1);
    let xi = comp.coefficient(&xi_mono);
    if xi.is_zero() {
        return None;
    }
    let p = comp.sub(&Polynomial::term(xi_mono, xi.clone()));
    if p.degree_in_var(n - 1).unwrap_or(0) > 0 {
        return None;
    }
    Some((xi, p))
}

/// Data of the closed-form dynamical degree of a cyclic normal form.
#[derive(Debug, Clone)]
pub struct PermElemDegree {
    pub theta: RealAlgebraicNumber,
    pub mu: WeightVector,
    /// The exponent tuple achieving the maximum, when the degree exceeds 1.
    pub achieving: Option<Vec<u32>>,
}

/// Dynamical degree of a permutation-elementary automorphism in cyclic
/// normal form: the largest real root of
/// `λ^{n-m} = Σ_{j=m+1}^{n} i_j λ^{n-j}` over the exponent tuples of `p`,
/// with eigenvector `μ = (0,...,0, θ^{n-m}, ..., θ, 1)`.
pub fn perm_elem_dynamical_degree(nf: &PermElemNormalForm) -> Result<PermElemDegree, DdError> {
    let bign = nf.f.arity();
    let n = bign - 1; // p lives in x_1..x_n
    let m = nf.m;
    let tail_vars: Vec<usize> = (m..n).collect();
    let tail_deg = nf.p.partial_degree(&tail_vars).unwrap_or(0);
    if tail_deg <= 1 {
        // the inner factor is a permutation: every iterate has bounded degree
        let theta = RealAlgebraicNumber::from_int(1);
        let mut entries = vec![KElem::zero(); bign];
        for e in entries.iter_mut().skip(m) {
            *e = KElem::one();
        }
        let mu = WeightVector::new(entries)?;
        return Ok(PermElemDegree {
            theta,
            mu,
            achieving: None,
        });
    }
    let mut best: Option<(RealAlgebraicNumber, Vec<u32>)> = None;
    for (mono, _) in nf.p.terms() {
        // polynomial x^{n-m} - Σ_{j=m+1}^{n} i_j x^{n-j} (1-indexed j)
        let deg = n - m;
        let mut coeffs = vec![Int::zero(); deg + 1];
        coeffs[deg] = Int::one();
        for j in m + 1..=n {
            let e = mono.exp(j - 1); // 0-indexed coordinate j-1
            if e > 0 {
                coeffs[n - j] = -Int::from(e);
            }
        }
        let poly = IntPoly::new(coeffs);
        if let Some(root) = largest_real_root(&poly) {
            let tuple = mono.exps().to_vec();
            best = Some(match best {
                None => (root, tuple),
                Some((b, t)) => {
                    if root > b {
                        (root, tuple)
                    } else {
                        (b, t)
                    }
                }
            });
        }
    }
    let (theta, achieving) =
        best.ok_or_else(|| DdError::internal("no candidate eigenvalue polynomials"))?;
    let te = crate::matrices::theta_elem(&theta);
    let mut entries = vec![KElem::zero(); bign];
    for j in m..bign {
        // μ_{j} = θ^{n+1-j} with 1-indexed j; 0-indexed: power bign-1-j
        entries[j] = te.pow((bign - 1 - j) as u32);
    }
    let mu = WeightVector::new(entries)?;
    Ok(PermElemDegree {
        theta,
        mu,
        achieving: Some(achieving),
    })
}
