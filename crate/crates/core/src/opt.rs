//! Exact LP and IP solvers over `{ A x = b, x >= 0 }`.
//!
//! The LP is a dense two-phase simplex over arbitrary-precision rationals
//! with Bland's least-index rule, so pivot sequences are deterministic and
//! cycling cannot occur. The IP is a depth-first branch-and-bound on those
//! LP relaxations. `enumerate_fiber` is an independent brute-force oracle.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    /// An optimal vertex was found.
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    #[serde(with = "rational::serde_opt_rational")]
    pub value: Option<Rational>,
    #[serde(with = "opt_rational_vec")]
    pub solution: Option<Vec<Rational>>,
}

impl LpResult {
    fn infeasible() -> Self {
        Self { status: LpStatus::Infeasible, value: None, solution: None }
    }

    fn unbounded() -> Self {
        Self { status: LpStatus::Unbounded, value: None, solution: None }
    }

    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IpStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpResult {
    pub status: IpStatus,
    pub value: Option<i64>,
    pub solution: Option<Vec<i64>>,
    /// Branch-and-bound nodes explored.
    pub nodes: usize,
}

impl IpResult {
    pub fn is_feasible(&self) -> bool {
        self.status == IpStatus::Feasible
    }
}

// ---------------------------------------------------------------------------
// Simplex

struct Tableau {
    /// `rows[i]` has `ncols + 1` entries; the last one is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, with `-objective` in the last slot.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one_like() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                self.obj[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = c;
    }

    /// Sets the objective row for `cost` relative to the current basis.
    fn load_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.iter().cloned().chain(std::iter::once(Rational::zero())).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    fn run(&mut self, allowed: usize) -> Phase {
        loop {
            // Bland: lowest-index improving column.
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else { return Phase::Unbounded };
            self.pivot(r, c);
        }
    }
}

trait OneLike {
    fn is_one_like(&self) -> bool;
}

impl OneLike for Rational {
    fn is_one_like(&self) -> bool {
        self.is_integer() && self.numer() == &1.into()
    }
}

/// Minimizes `cost · x` subject to `m x = rhs`, `x >= 0` (dense rational data).
fn simplex(m: &[Vec<Rational>], rhs: &[Rational], cost: &[Rational]) -> LpResult {
    let n = cost.len();
    // Gauss-Jordan on [m | rhs] drops redundant rows and yields a canonical basis.
    let mut rows: Vec<Vec<Rational>> =
        m.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pv = rows[rank][c].clone();
        for v in rows[rank].iter_mut() {
            *v /= &pv;
        }
        let prow = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pvj) in row.iter_mut().zip(&prow) {
                    if !pvj.is_zero() {
                        *v -= &f * pvj;
                    }
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return LpResult::infeasible();
    }
    rows.truncate(rank);

    // Rows with a negative right-hand side get an artificial variable.
    let needs_art: Vec<usize> = (0..rank).filter(|&i| rows[i][n].is_negative()).collect();
    let n_art = needs_art.len();
    let ncols = n + n_art;
    let mut basis = pivots.clone();
    let mut trows: Vec<Vec<Rational>> = Vec::with_capacity(rank);
    for (i, row) in rows.into_iter().enumerate() {
        let mut t: Vec<Rational> = Vec::with_capacity(ncols + 1);
        t.extend_from_slice(&row[..n]);
        t.extend(std::iter::repeat_with(Rational::zero).take(n_art));
        t.push(row[n].clone());
        if let Some(k) = needs_art.iter().position(|&r| r == i) {
            for v in t.iter_mut() {
                *v = -v.clone();
            }
            t[n + k] = rational::one();
            basis[i] = n + k;
        }
        trows.push(t);
    }
    let mut tab = Tableau { rows: trows, obj: Vec::new(), basis, ncols };

    if n_art > 0 {
        let mut phase1 = vec![Rational::zero(); ncols];
        for v in phase1[n..].iter_mut() {
            *v = rational::one();
        }
        tab.load_objective(&phase1);
        tab.run(ncols);
        if !tab.obj[ncols].is_zero() {
            return LpResult::infeasible();
        }
        // Drive zero-level artificials out of the basis.
        for r in 0..tab.rows.len() {
            if tab.basis[r] >= n {
                if let Some(c) = (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, c);
                }
            }
        }
    }
    let mut full_cost = cost.to_vec();
    full_cost.extend(std::iter::repeat_with(Rational::zero).take(n_art));
    tab.load_objective(&full_cost);
    if let Phase::Unbounded = tab.run(n) {
        return LpResult::unbounded();
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rows[i][ncols].clone();
        }
    }
    let value = x.iter().zip(cost).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    LpResult { status: LpStatus::Feasible, value: Some(value), solution: Some(x) }
}

fn to_rational_rows(a: &IntMatrix) -> Vec<Vec<Rational>> {
    (0..a.rows()).map(|r| a.row(r).iter().map(|&v| rational::int(v)).collect()).collect()
}

/// `min { c · x : A x = b, x >= 0 }` over the rationals.
pub fn solve_lp(a: &IntMatrix, c: &[Rational], b: &[i64]) -> Result<LpResult> {
    check_dims(a, c.len(), b.len())?;
    let rhs: Vec<Rational> = b.iter().map(|&v| rational::int(v)).collect();
    Ok(simplex(&to_rational_rows(a), &rhs, c))
}

fn check_dims(a: &IntMatrix, nc: usize, nb: usize) -> Result<()> {
    if nc != a.cols() {
        return Err(Error::Dimension { expected: a.cols(), found: nc });
    }
    if nb != a.rows() {
        return Err(Error::Dimension { expected: a.rows(), found: nb });
    }
    Ok(())
}

pub fn int_cost(c: &[i64]) -> Vec<Rational> {
    c.iter().map(|&v| rational::int(v)).collect()
}

/// Unit cost vector `e_j`.
pub fn unit_cost(n: usize, j: usize) -> Vec<i64> {
    let mut c = vec![0; n];
    c[j] = 1;
    c
}

// ---------------------------------------------------------------------------
// Branch and bound

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpOptions {
    pub node_limit: usize,
}

impl Default for IpOptions {
    fn default() -> Self {
        Self { node_limit: 200_000 }
    }
}

fn check_ip_preconditions(a: &IntMatrix, b: &[i64]) -> Result<()> {
    if !a.is_nonnegative() {
        return Err(Error::InvalidArgument("IP matrix must be entrywise nonnegative".into()));
    }
    if a.has_zero_column() {
        return Err(Error::InvalidArgument("IP matrix has a zero column (unbounded fiber)".into()));
    }
    if b.iter().any(|&v| v < 0) {
        return Err(Error::InvalidArgument("right-hand side must be nonnegative".into()));
    }
    Ok(())
}

/// LP relaxation over the box `lower <= x <= upper` (`None` = no upper bound).
///
/// Lower bounds are shifted out; finite upper bounds become extra rows with
/// slack columns.
fn box_lp(a: &IntMatrix, c: &[Rational], b: &[i64], lower: &[i64], upper: &[Option<i64>]) -> LpResult {
    let n = a.cols();
    let bounded: Vec<usize> = (0..n).filter(|&j| upper[j].is_some()).collect();
    let width = n + bounded.len();
    let mut rows = Vec::with_capacity(a.rows() + bounded.len());
    let mut rhs = Vec::with_capacity(a.rows() + bounded.len());
    for (r, &br) in b.iter().enumerate() {
        let row = a.row(r);
        let shift: i64 = row.iter().zip(lower).map(|(x, l)| x * l).sum();
        let mut v: Vec<Rational> = row.iter().map(|&x| rational::int(x)).collect();
        v.extend(std::iter::repeat_with(Rational::zero).take(bounded.len()));
        rows.push(v);
        rhs.push(rational::int(br - shift));
    }
    for (k, &j) in bounded.iter().enumerate() {
        let ub = upper[j].expect("bounded") - lower[j];
        if ub < 0 {
            return LpResult::infeasible();
        }
        let mut v = vec![Rational::zero(); width];
        v[j] = rational::one();
        v[n + k] = rational::one();
        rows.push(v);
        rhs.push(rational::int(ub));
    }
    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_with(Rational::zero).take(bounded.len()));
    let res = simplex(&rows, &rhs, &cost);
    match res.solution {
        Some(x) => {
            let x: Vec<Rational> = x[..n].iter().zip(lower).map(|(v, &l)| v + rational::int(l)).collect();
            let value = x.iter().zip(c).fold(Rational::zero(), |acc, (p, q)| acc + p * q);
            LpResult { status: LpStatus::Feasible, value: Some(value), solution: Some(x) }
        }
        None => res,
    }
}

/// `min { c · u : A u = b, u ∈ N^N }` by depth-first branch-and-bound.
///
/// Branches on the lowest-index fractional coordinate, floor branch first.
pub fn solve_ip(a: &IntMatrix, c: &[i64], b: &[i64]) -> Result<IpResult> {
    solve_ip_with(a, c, b, IpOptions::default())
}

pub fn solve_ip_with(a: &IntMatrix, c: &[i64], b: &[i64], opts: IpOptions) -> Result<IpResult> {
    check_dims(a, c.len(), b.len())?;
    check_ip_preconditions(a, b)?;
    let n = a.cols();
    let cr = int_cost(c);
    // Natural box from A >= 0: u_j <= min_i floor(b_i / a_ij).
    let natural: Vec<Option<i64>> =
        (0..n).map(|j| (0..a.rows()).filter(|&i| a.get(i, j) > 0).map(|i| b[i] / a.get(i, j)).min()).collect();

    let mut stack: Vec<(Vec<i64>, Vec<Option<i64>>)> = vec![(vec![0; n], vec![None; n])];
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut nodes = 0usize;
    while let Some((lower, upper)) = stack.pop() {
        nodes += 1;
        if nodes > opts.node_limit {
            return Err(Error::BudgetExceeded(format!("branch-and-bound exceeded {} nodes", opts.node_limit)));
        }
        if (0..n).any(|j| natural[j].is_some_and(|u| lower[j] > u)) {
            continue;
        }
        let lp = box_lp(a, &cr, b, &lower, &upper);
        let (Some(value), Some(x)) = (lp.value, lp.solution) else { continue };
        let bound = rational::ceil_i64(&value).expect("LP value fits in i64");
        if best.as_ref().is_some_and(|(v, _)| bound >= *v) {
            continue;
        }
        match x.iter().position(|v| !v.is_integer()) {
            None => {
                let sol: Vec<i64> = x.iter().map(|v| rational::to_i64(v).expect("integral")).collect();
                let val: i64 = sol.iter().zip(c).map(|(p, q)| p * q).sum();
                best = Some((val, sol));
            }
            Some(j) => {
                let fl = rational::floor_i64(&x[j]).expect("fits");
                let mut up_lower = lower.clone();
                up_lower[j] = fl + 1;
                let mut down_upper = upper.clone();
                down_upper[j] = Some(upper[j].map_or(fl, |u| u.min(fl)));
                // Stack order: the floor branch is explored first.
                stack.push((up_lower, upper));
                stack.push((lower, down_upper));
            }
        }
    }
    Ok(match best {
        Some((v, sol)) => IpResult { status: IpStatus::Feasible, value: Some(v), solution: Some(sol), nodes },
        None => IpResult { status: IpStatus::Infeasible, value: None, solution: None, nodes },
    })
}

// ---------------------------------------------------------------------------
// Fiber enumeration

/// All `u ∈ N^N` with `A u = b`, in lexicographic order. Fails once more
/// than `cap` points have been found.
pub fn enumerate_fiber(a: &IntMatrix, b: &[i64], cap: usize) -> Result<Vec<Vec<i64>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension { expected: a.rows(), found: b.len() });
    }
    check_ip_preconditions(a, b)?;
    let n = a.cols();
    let cols: Vec<Vec<(usize, i64)>> =
        (0..n).map(|j| (0..a.rows()).filter(|&i| a.get(i, j) != 0).map(|i| (i, a.get(i, j))).collect()).collect();
    // last_col[i]: last column with a nonzero in row i.
    let last_col: Vec<Option<usize>> = (0..a.rows()).map(|i| (0..n).rev().find(|&j| a.get(i, j) != 0)).collect();
    let mut out = Vec::new();
    let mut u = vec![0i64; n];
    let mut residual = b.to_vec();
    fiber_dfs(0, &cols, &last_col, &mut residual, &mut u, &mut out, cap)?;
    Ok(out)
}

fn fiber_dfs(
    j: usize,
    cols: &[Vec<(usize, i64)>],
    last_col: &[Option<usize>],
    residual: &mut [i64],
    u: &mut [i64],
    out: &mut Vec<Vec<i64>>,
    cap: usize,
) -> Result<()> {
    // Rows whose last column is behind us must be satisfied already.
    if residual.iter().zip(last_col).any(|(&r, lc)| r != 0 && lc.is_none_or(|l| l < j)) {
        return Ok(());
    }
    if j == cols.len() {
        if out.len() >= cap {
            return Err(Error::BudgetExceeded(format!("fiber has more than {cap} points")));
        }
        out.push(u.to_vec());
        return Ok(());
    }
    let max = cols[j].iter().map(|&(i, a)| residual[i] / a).min().unwrap_or(0);
    for k in 0..=max {
        u[j] = k;
        if k > 0 {
            for &(i, a) in &cols[j] {
                residual[i] -= a;
            }
        }
        fiber_dfs(j + 1, cols, last_col, residual, u, out, cap)?;
    }
    for &(i, a) in &cols[j] {
        residual[i] += a * max;
    }
    u[j] = 0;
    Ok(())
}

// ---------------------------------------------------------------------------
// Gaps and bounds

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub lp: LpResult,
    pub ip: IpResult,
    /// `ip.value - lp.value` when both are feasible.
    #[serde(with = "rational::serde_opt_rational")]
    pub gap: Option<Rational>,
}

pub fn gap(a: &IntMatrix, c: &[i64], b: &[i64]) -> Result<GapReport> {
    gap_with(a, c, b, IpOptions::default())
}

pub fn gap_with(a: &IntMatrix, c: &[i64], b: &[i64], opts: IpOptions) -> Result<GapReport> {
    let ip = solve_ip_with(a, c, b, opts)?;
    let lp = solve_lp(a, &int_cost(c), b)?;
    let gap = match (&lp.value, ip.value) {
        (Some(l), Some(i)) => Some(rational::int(i) - l),
        _ => None,
    };
    Ok(GapReport { lp, ip, gap })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellBounds {
    pub cell: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub lp_min: Rational,
    pub ip_min: i64,
    #[serde(with = "crate::rational::serde_rational")]
    pub lp_max: Rational,
    pub ip_max: i64,
}

/// LP and IP lower/upper bounds on entry `cell` given margins `b`.
pub fn cell_bounds(a: &IntMatrix, b: &[i64], cell: usize) -> Result<CellBounds> {
    cell_bounds_with(a, b, cell, IpOptions::default())
}

pub fn cell_bounds_with(a: &IntMatrix, b: &[i64], cell: usize, opts: IpOptions) -> Result<CellBounds> {
    if cell >= a.cols() {
        return Err(Error::InvalidArgument(format!("cell {cell} out of range {}", a.cols())));
    }
    let up = unit_cost(a.cols(), cell);
    let down: Vec<i64> = up.iter().map(|x| -x).collect();
    let min = gap_with(a, &up, b, opts)?;
    let max = gap_with(a, &down, b, opts)?;
    let infeasible = || Error::Infeasible("margins admit no table".into());
    Ok(CellBounds {
        cell,
        lp_min: min.lp.value.ok_or_else(infeasible)?,
        ip_min: min.ip.value.ok_or_else(infeasible)?,
        lp_max: -max.lp.value.ok_or_else(infeasible)?,
        ip_max: -max.ip.value.ok_or_else(infeasible)?,
    })
}

/// `true` iff `x >= 0` and `A x = b` exactly.
pub fn is_lp_feasible_point(a: &IntMatrix, b: &[i64], x: &[Rational]) -> bool {
    if x.len() != a.cols() || b.len() != a.rows() || x.iter().any(Signed::is_negative) {
        return false;
    }
    (0..a.rows()).all(|r| {
        let lhs = a.row(r).iter().zip(x).fold(Rational::zero(), |acc, (&p, q)| acc + rational::int(p) * q);
        lhs == rational::int(b[r])
    })
}

mod opt_rational_vec {
    use crate::rational::{parse, render, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(|v| v.iter().map(render).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<String>>::deserialize(d)?
            .map(|v| {
                v.iter().map(|s| parse(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))).collect()
            })
            .transpose()
    }
}
