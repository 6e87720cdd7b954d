//! Exact integer linear algebra.
//!
//! Ranks use fraction-free (Bareiss) elimination over arbitrary-precision
//! integers. Integer kernels come from a unimodular column reduction
//! `A·U = [H | 0]`, so the trailing columns of `U` are a lattice basis of
//! `ker_Z(A)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::model::{b_matrix, gamma_matrix, SullivantIndexing};

/// A signed integer vector `z = u - v` with `u, v >= 0` of disjoint support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeElement {
    vector: Vec<i64>,
}

impl LatticeElement {
    pub fn new(vector: Vec<i64>) -> Self {
        Self { vector }
    }

    pub fn zero(len: usize) -> Self {
        Self { vector: vec![0; len] }
    }

    /// `u - v`; overlapping supports cancel.
    pub fn from_parts(u: &[i64], v: &[i64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::Dimension { expected: u.len(), found: v.len() });
        }
        if u.iter().chain(v).any(|&x| x < 0) {
            return Err(Error::InvalidArgument("parts must be nonnegative".into()));
        }
        Ok(Self { vector: u.iter().zip(v).map(|(a, b)| a - b).collect() })
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut vector = vec![0; len];
        vector[index] = 1;
        Self { vector }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.vector
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.vector
    }

    pub fn len(&self) -> usize {
        self.vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vector.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(|&x| x == 0)
    }

    pub fn positive_part(&self) -> Vec<i64> {
        self.vector.iter().map(|&x| x.max(0)).collect()
    }

    pub fn negative_part(&self) -> Vec<i64> {
        self.vector.iter().map(|&x| (-x).max(0)).collect()
    }

    pub fn support(&self) -> SupportSet {
        SupportSet::new(self.vector.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i))
    }

    pub fn neg(&self) -> Self {
        Self { vector: self.vector.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { vector: self.vector.iter().map(|x| x * k).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { vector: self.vector.iter().zip(&other.vector).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { vector: self.vector.iter().zip(&other.vector).map(|(a, b)| a - b).collect() }
    }

    pub fn max_abs(&self) -> i64 {
        self.vector.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Flips the sign so the first nonzero entry is positive.
    pub fn sign_normalized(&self) -> Self {
        match self.vector.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    /// Sparse `index:value` form, positive entries first.
    pub fn to_sparse(&self) -> String {
        let pos = self.vector.iter().enumerate().filter(|(_, &x)| x > 0);
        let neg = self.vector.iter().enumerate().filter(|(_, &x)| x < 0);
        pos.chain(neg).map(|(i, x)| format!("{i}:{x}")).collect::<Vec<_>>().join(" ")
    }

    pub fn from_sparse(line: &str, len: usize) -> Result<Self> {
        let mut vector = vec![0; len];
        for tok in line.split_whitespace() {
            let (i, v) =
                tok.split_once(':').ok_or_else(|| Error::Parse(format!("expected index:value, got {tok:?}")))?;
            let i: usize = i.parse().map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?;
            let v: i64 = v.parse().map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?;
            if i >= len {
                return Err(Error::Parse(format!("index {i} out of range {len}")));
            }
            vector[i] = v;
        }
        Ok(Self { vector })
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sparse())
    }
}

/// A set of column indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupportSet(BTreeSet<usize>);

impl SupportSet {
    pub fn new(it: impl IntoIterator<Item = usize>) -> Self {
        Self(it.into_iter().collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn insert(&mut self, i: usize) -> bool {
        self.0.insert(i)
    }

    pub fn remove(&mut self, i: usize) -> bool {
        self.0.remove(&i)
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.0.remove(&i);
        s
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.0.insert(i);
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Rank over the rationals by fraction-free Gaussian elimination.
pub fn rank(a: &IntMatrix) -> usize {
    let mut m: Vec<Vec<BigInt>> = a.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Lattice basis of `ker_Z(A)`: primitive, size-reduced, sign-normalized.
pub fn integer_kernel_basis(a: &IntMatrix) -> Vec<LatticeElement> {
    let n = a.cols();
    let rows = a.rows();
    // Work on columns: w[k] is column k of A·U, u[k] the matching column of U.
    let mut w: Vec<Vec<BigInt>> = (0..n).map(|c| a.column(c).into_iter().map(BigInt::from).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n).map(|c| (0..n).map(|r| BigInt::from(i64::from(r == c))).collect()).collect();
    let mut pivot = 0;
    for r in 0..rows {
        if pivot == n {
            break;
        }
        loop {
            // Column with the smallest nonzero |entry| in row r becomes the pivot.
            let best = (pivot..n)
                .filter(|&k| !w[k][r].is_zero())
                .min_by(|&x, &y| w[x][r].abs().cmp(&w[y][r].abs()).then(x.cmp(&y)));
            let Some(best) = best else { break };
            w.swap(pivot, best);
            u.swap(pivot, best);
            let mut done = true;
            for k in pivot + 1..n {
                if w[k][r].is_zero() {
                    continue;
                }
                let q = w[k][r].div_floor(&w[pivot][r]);
                let (wp, wk) = pair_mut(&mut w, pivot, k);
                axpy(wk, wp, &q);
                let (up, uk) = pair_mut(&mut u, pivot, k);
                axpy(uk, up, &q);
                if !w[k][r].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    let mut basis: Vec<Vec<BigInt>> = u.drain(pivot..).collect();
    size_reduce(&mut basis);
    let mut out: Vec<LatticeElement> = basis
        .into_iter()
        .map(|v| {
            LatticeElement::new(v.iter().map(|x| x.to_i64().expect("kernel entries fit in i64")).collect())
                .sign_normalized()
        })
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert!(a < b);
    let (lo, hi) = v.split_at_mut(b);
    (&mut lo[a], &mut hi[0])
}

/// `y -= q * x`
fn axpy(y: &mut [BigInt], x: &[BigInt], q: &BigInt) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= q * xi;
    }
}

fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}

/// Greedy pairwise reduction: replace `b_i` by `b_i ± b_j` while that shrinks its 1-norm.
fn size_reduce(basis: &mut [Vec<BigInt>]) {
    let k = basis.len();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for sign in [1i32, -1] {
                    let cand: Vec<BigInt> =
                        basis[i].iter().zip(&basis[j]).map(|(a, b)| if sign > 0 { a + b } else { a - b }).collect();
                    if l1(&cand) < l1(&basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Kernel dimension over the rationals.
pub fn nullity(a: &IntMatrix) -> usize {
    a.cols() - rank(a)
}

/// `Σ_{|i| even} e_i − Σ_{|i| odd} e_i` over `{0,1}^{n-2}` in lexicographic order.
pub fn checkerboard(n: usize) -> Result<LatticeElement> {
    if n < 4 {
        return Err(Error::FamilyTooSmall { family: "checkerboard", n, min: 4 });
    }
    let len = 1usize << (n - 2);
    Ok(LatticeElement::new((0..len).map(|i| if i.count_ones() % 2 == 0 { 1 } else { -1 }).collect()))
}

/// The relation `f_n` on `Γ^n`, its support `σ`, the lift `f̂_n` on `Δ^n`
/// and its support `σ̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivantRelation {
    pub n: usize,
    pub f: LatticeElement,
    pub sigma: SupportSet,
    pub f_hat: LatticeElement,
    pub sigma_hat: SupportSet,
}

impl SullivantRelation {
    /// `û_n`, the positive part of `f̂_n`.
    pub fn u_hat(&self) -> Vec<i64> {
        self.f_hat.positive_part()
    }

    /// `2^{n-3}`, the leading coefficient of `f̂_n` at `(0|0|0)`.
    pub fn alpha(&self) -> i64 {
        1 << (self.n - 3)
    }
}

pub fn sullivant_relation(n: usize) -> Result<SullivantRelation> {
    let ix = SullivantIndexing::new(n)?;
    let mut f = vec![0i64; ix.gamma_cols()];
    let alpha = 1i64 << (n - 3);
    f[ix.gamma(0, 0)] = alpha;
    f[ix.gamma(0, 1)] = -(alpha - 1);
    for i in 1..ix.patterns() {
        if i.count_ones() % 2 == 0 {
            f[ix.gamma(i, 1)] = 1;
        } else {
            f[ix.gamma(i, 0)] = -1;
        }
    }
    let f = LatticeElement::new(f);
    let f_hat = lift_kernel_vector(&f, ix.gamma_cols())?;
    Ok(SullivantRelation { n, sigma: f.support(), sigma_hat: f_hat.support(), f, f_hat })
}

/// `true` iff `z` is a circuit of `A`: the columns on `supp(z)` have rank `|supp(z)| - 1`.
pub fn is_circuit(a: &IntMatrix, z: &LatticeElement) -> Result<bool> {
    if z.len() != a.cols() {
        return Err(Error::Dimension { expected: a.cols(), found: z.len() });
    }
    if z.is_zero() || !a.annihilates(z.as_slice()) {
        return Err(Error::NotInKernel);
    }
    let supp = z.support().to_vec();
    Ok(rank(&a.select_columns(&supp)) + 1 == supp.len())
}

/// `ĝ = (g, -g)`.
pub fn lift_kernel_vector(g: &LatticeElement, n: usize) -> Result<LatticeElement> {
    if g.len() != n {
        return Err(Error::Dimension { expected: n, found: g.len() });
    }
    let mut v = g.as_slice().to_vec();
    v.extend(g.as_slice().iter().map(|x| -x));
    Ok(LatticeElement::new(v))
}

/// Kernel basis of `A(B_n)`; convenience for the checkerboard lemma.
pub fn b_kernel(n: usize) -> Result<Vec<LatticeElement>> {
    Ok(integer_kernel_basis(&b_matrix(n)?))
}

/// `Γ^n` restricted to the columns of `σ`.
pub fn gamma_sigma_matrix(n: usize) -> Result<(IntMatrix, Vec<usize>)> {
    let rel = sullivant_relation(n)?;
    let cols = rel.sigma.to_vec();
    Ok((gamma_matrix(n)?.select_columns(&cols), cols))
}
