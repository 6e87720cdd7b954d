//! Standard pairs of initial monomial ideals and the per-pair gap analysis.
//!
//! A pair `(γ, τ)` stands for the set `γ + N^τ` with `supp(γ) ∩ τ = ∅`. It is
//! admissible when the set avoids the monomial ideal, and standard when it is
//! maximal among admissible pairs under containment
//! `(γ,τ) ⊆ (γ',τ') ⟺ γ' ≤ γ and supp(γ−γ') ∪ τ ⊆ τ'`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sullivant_relation, LatticeElement, SupportSet};
use crate::matrix::IntMatrix;
use crate::model::{delta_matrix, SullivantIndexing};
use crate::opt::{int_cost, solve_ip_with, solve_lp, IpOptions, LpStatus};
use crate::rational::{self, Rational};
use crate::toric::{improving_terms, reduced_groebner, BasisSet, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardPair {
    pub root: Vec<i64>,
    pub free: SupportSet,
}

impl StandardPair {
    pub fn new(root: Vec<i64>, free: SupportSet) -> Result<Self> {
        if root.iter().any(|&x| x < 0) {
            return Err(Error::InvalidArgument("pair root must be nonnegative".into()));
        }
        if let Some(j) = free.iter().find(|&j| j >= root.len() || root[j] != 0) {
            return Err(Error::InvalidArgument(format!("free direction {j} meets the root support")));
        }
        Ok(Self { root, free })
    }

    /// `γ + T·Σ_{l∈τ} e_l`.
    pub fn point(&self, t: i64) -> Vec<i64> {
        let mut p = self.root.clone();
        for l in self.free.iter() {
            p[l] += t;
        }
        p
    }

    pub fn contains_point(&self, p: &[i64]) -> bool {
        p.len() == self.root.len()
            && p.iter()
                .zip(&self.root)
                .enumerate()
                .all(|(j, (&x, &g))| if self.free.contains(j) { x >= 0 } else { x == g })
    }

    /// `self ⊆ other` as sets of lattice points.
    pub fn contained_in(&self, other: &StandardPair) -> bool {
        self.root.iter().zip(&other.root).enumerate().all(|(j, (&g, &h))| {
            if other.free.contains(j) {
                true
            } else {
                g == h && !self.free.contains(j)
            }
        })
    }

    /// Sparse `index:value` form of the root.
    pub fn root_sparse(&self) -> String {
        LatticeElement::new(self.root.clone()).to_sparse()
    }

    /// The minimal strictly larger pairs: one new free direction, or a root
    /// coordinate moved into the free set.
    pub fn covers(&self) -> Vec<StandardPair> {
        let mut out = Vec::new();
        for j in 0..self.root.len() {
            if self.free.contains(j) {
                continue;
            }
            let mut root = self.root.clone();
            root[j] = 0;
            out.push(StandardPair { root, free: self.free.with(j) });
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStatus {
    pub admissible: bool,
    pub associated: bool,
    pub standard: bool,
}

/// `true` iff no generator divides a point of `γ + N^τ`.
pub fn is_admissible(pair: &StandardPair, generators: &[Vec<i64>]) -> bool {
    !generators
        .iter()
        .any(|u| u.iter().zip(&pair.root).enumerate().all(|(j, (&a, &g))| pair.free.contains(j) || a <= g))
}

/// The cost order a basis was oriented for.
fn basis_order(basis: &BasisSet) -> Result<&TermOrder> {
    basis.order.as_ref().ok_or_else(|| Error::InvalidArgument("basis carries no term order; orient it first".into()))
}

/// Generators of the non-optimality ideal of `basis` under its cost.
pub fn nonoptimal_generators(basis: &BasisSet) -> Result<Vec<Vec<i64>>> {
    Ok(improving_terms(basis, basis_order(basis)?))
}

/// Admissibility (every point optimal) and maximality of `pair`.
pub fn classify_pair(pair: &StandardPair, basis: &BasisSet) -> Result<PairStatus> {
    classify_against(pair, &nonoptimal_generators(basis)?, basis.cols)
}

fn classify_against(pair: &StandardPair, gens: &[Vec<i64>], cols: usize) -> Result<PairStatus> {
    if pair.root.len() != cols {
        return Err(Error::Dimension { expected: cols, found: pair.root.len() });
    }
    StandardPair::new(pair.root.clone(), pair.free.clone())?;
    let admissible = is_admissible(pair, gens);
    let standard = admissible && !pair.covers().iter().any(|c| is_admissible(c, gens));
    Ok(PairStatus { admissible, associated: admissible, standard })
}

type Gens = Vec<Vec<u8>>;
type Pairs = Arc<Vec<(Vec<u8>, u64)>>;

fn minimize(mut gens: Gens) -> Gens {
    gens.sort_by_key(|u| (u.iter().map(|&x| u32::from(x)).sum::<u32>(), u.clone()));
    gens.dedup();
    let mut out: Gens = Vec::new();
    for u in gens {
        if !out.iter().any(|v| v.iter().zip(&u).all(|(a, b)| a <= b)) {
            out.push(u);
        }
    }
    out.sort();
    out
}

struct Enumerator {
    memo: HashMap<(Gens, u64), Pairs>,
    limit: usize,
    width: usize,
}

impl Enumerator {
    /// Standard pairs of the ideal generated by `gens` in the variables of
    /// `vars`; every generator is already zero outside `vars`. Roots are
    /// returned as full-length exponent vectors, free sets as bit masks.
    ///
    /// Split on a variable `x` with maximal exponent `D`. Pairs with
    /// `x` free are the pairs of the saturation `I : x^∞` (generators with `x`
    /// deleted). A pair with `x^k` in its root, `k < D`, comes from a pair of
    /// `(I : x^k)` restricted to `x = 0` and is kept unless freeing `x` would
    /// still avoid the ideal, i.e. unless it is admissible for `I : x^∞`.
    /// Roots with `x^k`, `k >= D`, are never maximal since `I : x^k = I : x^∞`.
    fn run(&mut self, gens: Gens, vars: u64) -> Result<Pairs> {
        if let Some(p) = self.memo.get(&(gens.clone(), vars)) {
            return Ok(p.clone());
        }
        let result = if gens.iter().any(|u| u.iter().all(|&a| a == 0)) {
            Arc::new(Vec::new())
        } else if gens.is_empty() {
            let len = self.width;
            Arc::new(vec![(vec![0u8; len], vars)])
        } else {
            let x = self.pick(&gens, vars);
            let rest = vars & !(1u64 << x);
            let d = gens.iter().map(|u| u[x]).max().unwrap_or(0);
            let drop_x = |gs: &[Vec<u8>]| -> Gens {
                minimize(
                    gs.iter()
                        .map(|u| {
                            let mut v = u.clone();
                            v[x] = 0;
                            v
                        })
                        .collect(),
                )
            };
            let g_inf = drop_x(&gens);
            let mut out: Vec<(Vec<u8>, u64)> =
                self.run(g_inf.clone(), rest)?.iter().map(|(r, f)| (r.clone(), f | (1u64 << x))).collect();
            for k in 0..d {
                let gk: Gens = drop_x(&gens.iter().filter(|u| u[x] <= k).cloned().collect::<Vec<_>>());
                for (r, f) in self.run(gk, rest)?.iter() {
                    let admissible_inf = !g_inf
                        .iter()
                        .any(|u| u.iter().zip(r).enumerate().all(|(j, (&a, &g))| f >> j & 1 == 1 || a <= g));
                    if !admissible_inf {
                        let mut root = r.clone();
                        root[x] = k;
                        out.push((root, *f));
                    }
                }
            }
            if out.len() > self.limit {
                return Err(Error::BudgetExceeded(format!("more than {} standard pairs", self.limit)));
            }
            Arc::new(out)
        };
        self.memo.insert((gens, vars), result.clone());
        Ok(result)
    }

    /// The variable of `vars` appearing in the most generators (lowest index on ties).
    fn pick(&self, gens: &Gens, vars: u64) -> usize {
        (0..self.width)
            .filter(|&j| vars >> j & 1 == 1)
            .max_by_key(|&j| (gens.iter().filter(|u| u[j] > 0).count(), std::cmp::Reverse(j)))
            .expect("nonempty variable set")
    }
}

/// Standard pairs of the monomial ideal generated by `generators` in `cols` variables.
pub fn standard_pairs_of_ideal(generators: &[Vec<i64>], cols: usize, limit: usize) -> Result<Vec<StandardPair>> {
    if cols > 64 {
        return Err(Error::InvalidArgument(format!("standard pairs support at most 64 columns, got {cols}")));
    }
    let mut gens: Gens = Vec::new();
    for u in generators {
        if u.len() != cols {
            return Err(Error::Dimension { expected: cols, found: u.len() });
        }
        gens.push(
            u.iter()
                .map(|&a| u8::try_from(a).map_err(|_| Error::InvalidArgument(format!("exponent {a} out of range"))))
                .collect::<Result<_>>()?,
        );
    }
    let all = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
    let mut e = Enumerator { memo: HashMap::new(), limit, width: cols };
    let raw = e.run(minimize(gens), all)?;
    let mut out: Vec<StandardPair> = raw
        .iter()
        .map(|(r, f)| StandardPair {
            root: r.iter().map(|&a| i64::from(a)).collect(),
            free: SupportSet::new((0..cols).filter(|&j| f >> j & 1 == 1)),
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// All standard pairs of the non-optimality ideal of `basis`: the maximal
/// sets `γ + N^τ` of optimal points.
pub fn enumerate_standard_pairs(basis: &BasisSet) -> Result<Vec<StandardPair>> {
    enumerate_standard_pairs_with(basis, DEFAULT_PAIR_LIMIT)
}

pub const DEFAULT_PAIR_LIMIT: usize = 1_000_000;

pub fn enumerate_standard_pairs_with(basis: &BasisSet, limit: usize) -> Result<Vec<StandardPair>> {
    standard_pairs_of_ideal(&nonoptimal_generators(basis)?, basis.cols, limit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSchedule {
    /// Evaluation parameters `T` for the points `γ + T·Σ_{l∈τ} e_l`.
    pub steps: Vec<i64>,
    /// Re-solve the integer program at each point instead of trusting that
    /// points of an associated pair are optimal.
    pub solve_ip: bool,
}

impl Default for GapSchedule {
    fn default() -> Self {
        Self::doubling(16)
    }
}

impl GapSchedule {
    /// `T = 1, 2, 4, …, t_max`.
    pub fn doubling(t_max: i64) -> Self {
        let mut steps = Vec::new();
        let mut t = 1;
        while t <= t_max.max(1) {
            steps.push(t);
            t *= 2;
        }
        Self { steps, solve_ip: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairGapEstimate {
    #[serde(with = "rational::serde_rational")]
    pub lower: Rational,
    /// `None` when the joint relaxation is unbounded.
    #[serde(with = "rational::serde_opt_rational")]
    pub upper: Option<Rational>,
    pub schedule: GapSchedule,
}

impl PairGapEstimate {
    pub fn is_exact(&self) -> bool {
        self.upper.as_ref() == Some(&self.lower)
    }
}

/// Bracket on the largest gap over right-hand sides `A·p`, `p ∈ γ + N^τ`.
///
/// Every point of an associated pair is optimal, so the integer optimum at
/// `A·p` is `c·p`. The lower bound takes the best of the evaluation points.
/// For the upper bound, writing `p = γ + y` with `y ≥ 0` on `τ`,
/// `c·p − LP(A·p) = c·γ − min { c·x − c_τ·y : A x − A_τ y = A γ }` maximized
/// over `y`, which is one joint linear program.
pub fn pair_gap(pair: &StandardPair, a: &IntMatrix, c: &[i64], schedule: &GapSchedule) -> Result<PairGapEstimate> {
    pair_gap_with(pair, a, c, schedule, IpOptions::default())
}

pub fn pair_gap_with(
    pair: &StandardPair,
    a: &IntMatrix,
    c: &[i64],
    schedule: &GapSchedule,
    opts: IpOptions,
) -> Result<PairGapEstimate> {
    if pair.root.len() != a.cols() || c.len() != a.cols() {
        return Err(Error::Dimension { expected: a.cols(), found: pair.root.len().min(c.len()) });
    }
    let cost = |p: &[i64]| -> i64 { c.iter().zip(p).map(|(x, y)| x * y).sum() };
    let rc = int_cost(c);
    let mut lower = rational::zero();
    for &t in &schedule.steps {
        let p = pair.point(t);
        let b = a.mul_vec(&p)?;
        let lp = solve_lp(a, &rc, &b)?;
        let lp_value = match (lp.status, lp.value) {
            (LpStatus::Feasible, Some(v)) => v,
            _ => return Err(Error::Infeasible(format!("relaxation at T = {t} is not finite"))),
        };
        let ip_value = if schedule.solve_ip {
            let ip = solve_ip_with(a, c, &b, opts)?;
            ip.value.ok_or_else(|| Error::Infeasible(format!("no integer point at T = {t}")))?
        } else {
            cost(&p)
        };
        let g = rational::int(ip_value) - lp_value;
        if g > lower {
            lower = g;
        }
    }
    let free = pair.free.to_vec();
    let a_free = a.select_columns(&free);
    let mut rows = Vec::with_capacity(a.rows());
    for r in 0..a.rows() {
        let mut row = a.row(r).to_vec();
        row.extend(a_free.row(r).iter().map(|v| -v));
        rows.push(row);
    }
    let joint = IntMatrix::from_rows(rows)?;
    let mut jc = rc.clone();
    jc.extend(free.iter().map(|&l| -rational::int(c[l])));
    let lp = solve_lp(&joint, &jc, &a.mul_vec(&pair.root)?)?;
    let upper = match lp.status {
        LpStatus::Feasible => lp.value.map(|v| rational::int(cost(&pair.root)) - v),
        LpStatus::Unbounded => None,
        LpStatus::Infeasible => return Err(Error::Infeasible("joint relaxation is infeasible".into())),
    };
    Ok(PairGapEstimate { lower, upper, schedule: schedule.clone() })
}

/// [`pair_gap`] over many pairs in parallel; results keep the input order.
pub fn pair_gaps(
    pairs: &[StandardPair],
    a: &IntMatrix,
    c: &[i64],
    schedule: &GapSchedule,
) -> Result<Vec<PairGapEstimate>> {
    pairs.par_iter().map(|p| pair_gap(p, a, c, schedule)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair: StandardPair,
    pub gap: PairGapEstimate,
    /// `|τ| < rank(A)`, recorded for positive-gap pairs as evidence only.
    pub few_free_directions: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSummary {
    pub rank: usize,
    pub total: usize,
    pub positive_lower: usize,
    pub at_least_one: usize,
    pub exact: usize,
    /// Positive-gap pairs with `|τ| < rank(A)`.
    pub positive_with_few_free: usize,
    pub records: Vec<PairRecord>,
}

/// Enumerates the standard pairs of `basis` and brackets the gap of each.
pub fn analyze_pairs(basis: &BasisSet, a: &IntMatrix, schedule: &GapSchedule) -> Result<PairSummary> {
    let order = basis_order(basis)?;
    let pairs = enumerate_standard_pairs(basis)?;
    let gaps = pair_gaps(&pairs, a, order.weight(), schedule)?;
    let rank = crate::linalg::rank(a);
    let zero = rational::zero();
    let one = rational::one();
    let records: Vec<PairRecord> = pairs
        .into_iter()
        .zip(gaps)
        .map(|(pair, gap)| PairRecord { few_free_directions: pair.free.len() < rank, pair, gap })
        .collect();
    Ok(PairSummary {
        rank,
        total: records.len(),
        positive_lower: records.iter().filter(|r| r.gap.lower > zero).count(),
        at_least_one: records.iter().filter(|r| r.gap.lower >= one).count(),
        exact: records.iter().filter(|r| r.gap.is_exact()).count(),
        positive_with_few_free: records.iter().filter(|r| r.gap.lower > zero && r.few_free_directions).count(),
        records,
    })
}

/// The swap vectors `w⁺, w⁻` of `Δ^n` for a nonzero pattern `i`:
/// `w⁺ = e(0|0|0) + e(i|1|0) + e(0|1|1) + e(i|0|1)`,
/// `w⁻ = e(0|1|0) + e(i|0|0) + e(0|0|1) + e(i|1|1)`.
pub fn w_vectors(n: usize, i: usize) -> Result<(LatticeElement, LatticeElement)> {
    let ix = SullivantIndexing::new(n)?;
    if i == 0 || i >= ix.patterns() {
        return Err(Error::InvalidArgument(format!("pattern must be in 1..{}, got {i}", ix.patterns())));
    }
    let len = ix.delta_cols();
    let build = |cells: [(usize, usize, usize); 4]| {
        let mut v = vec![0; len];
        for (p, l, c) in cells {
            v[ix.delta(p, l, c)] += 1;
        }
        LatticeElement::new(v)
    };
    Ok((build([(0, 0, 0), (i, 1, 0), (0, 1, 1), (i, 0, 1)]), build([(0, 1, 0), (i, 0, 0), (0, 0, 1), (i, 1, 1)])))
}

/// `true` iff some `m ≥ 0` supported on `τ` has `A(γ + m) = b`.
pub fn margin_membership(b: &[i64], pair: &StandardPair, a: &IntMatrix) -> Result<bool> {
    margin_membership_with(b, pair, a, IpOptions::default())
}

pub fn margin_membership_with(b: &[i64], pair: &StandardPair, a: &IntMatrix, opts: IpOptions) -> Result<bool> {
    Ok(margin_member(b, pair, a, opts)?.is_some())
}

/// A point `γ + m` of `pair` with `A(γ + m) = b`, if one exists.
pub fn margin_member(b: &[i64], pair: &StandardPair, a: &IntMatrix, opts: IpOptions) -> Result<Option<Vec<i64>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension { expected: a.rows(), found: b.len() });
    }
    let base = a.mul_vec(&pair.root)?;
    let rest: Vec<i64> = b.iter().zip(&base).map(|(x, y)| x - y).collect();
    if rest.iter().any(|&x| x < 0) {
        return Ok(None);
    }
    if pair.free.is_empty() {
        return Ok(rest.iter().all(|&x| x == 0).then(|| pair.root.clone()));
    }
    let free = pair.free.to_vec();
    let sub = a.select_columns(&free);
    let ip = solve_ip_with(&sub, &vec![0; sub.cols()], &rest, opts)?;
    Ok(ip.solution.map(|m| {
        let mut p = pair.root.clone();
        for (&l, x) in free.iter().zip(m) {
            p[l] += x;
        }
        p
    }))
}

/// `(k·e(0|0|0), σ̂ ∖ {(0|0|0)})`.
pub fn sullivant_pair(n: usize, k: i64) -> Result<StandardPair> {
    let rel = sullivant_relation(n)?;
    let mut root = vec![0; rel.f_hat.len()];
    root[0] = k;
    StandardPair::new(root, rel.sigma_hat.without(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefutationForm {
    /// `(i|1|0)`
    A,
    /// `(i|0|1)`
    B,
    /// `(i|0|0)`
    C,
    /// `(i|1|1)`
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub column: usize,
    pub form: RefutationForm,
    /// Kernel vector whose positive part lies in the enlarged pair (or
    /// below the enlarged point) and whose negative part is cheaper.
    pub vector: LatticeElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub k: i64,
    pub pair: StandardPair,
    pub status: PairStatus,
    /// Standard pairs of the full enumeration containing `û_n − (α−k)e(0|0|0)`.
    pub containing_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub n: usize,
    pub alpha: i64,
    pub pairs: Vec<PairCertificate>,
    /// The enlarged pair containing `û_n` is not associated.
    pub full_support_rejected: bool,
    /// Refutations of every added free direction (standardness).
    pub standard_refutations: Vec<Refutation>,
    /// Refutations of every added direction at `û_n − e(0|0|0)` (uniqueness).
    pub unique_refutations: Vec<Refutation>,
    pub unique_pair: StandardPair,
    pub standard_pair_count: usize,
}

/// Largest `n` accepted by [`verify_sullivant_certificates`].
pub const MAX_CERTIFICATE_N: usize = 6;

/// Checks that the pairs `(k·e(0|0|0), σ̂∖{(0|0|0)})`, `1 ≤ k ≤ 2^{n-3}−1`,
/// are associated and standard, replays the explicit refutations of every
/// added free direction, and checks that `û_n − e(0|0|0)` lies in exactly one
/// standard pair. Any failure is returned as an error naming the vector.
pub fn verify_sullivant_certificates(n: usize) -> Result<CertificateReport> {
    if !(4..=MAX_CERTIFICATE_N).contains(&n) {
        return Err(Error::InvalidArgument(format!("certificates need 4 <= n <= {MAX_CERTIFICATE_N}, got {n}")));
    }
    let ix = SullivantIndexing::new(n)?;
    let rel = sullivant_relation(n)?;
    let a = delta_matrix(n)?;
    let order = TermOrder::unit(a.cols(), 0);
    let gb = reduced_groebner(&a, &order)?;
    let gens = nonoptimal_generators(&gb)?;
    let alpha = rel.alpha();
    let u_hat = rel.u_hat();
    let fail = |what: String| Err(Error::CertificateFailed(what));

    let all_pairs = standard_pairs_of_ideal(&gens, a.cols(), DEFAULT_PAIR_LIMIT)?;
    let mut pairs = Vec::new();
    for k in 1..alpha {
        let pair = sullivant_pair(n, k)?;
        let status = classify_against(&pair, &gens, a.cols())?;
        if !status.associated || !status.standard {
            return fail(format!("pair with root {} is not standard: {status:?}", pair.root_sparse()));
        }
        let mut point = u_hat.clone();
        point[0] -= alpha - k;
        if !pair.contains_point(&point) {
            return fail(format!("pair k={k} misses {}", LatticeElement::new(point).to_sparse()));
        }
        let containing_pairs = all_pairs.iter().filter(|p| p.contains_point(&point)).count();
        pairs.push(PairCertificate { k, pair, status, containing_pairs });
    }

    // Freeing (0|0|0) as well gives (0, σ̂), which contains the non-optimal û_n.
    let full = StandardPair::new(vec![0; a.cols()], rel.sigma_hat.clone())?;
    let full_support_rejected = full.contains_point(&u_hat)
        && !is_admissible(&full, &gens)
        && improving_terms(&gb, &order).iter().any(|u| u.iter().zip(&u_hat).all(|(x, y)| x <= y));
    if !full_support_rejected {
        return fail(format!("û_n = {} does not refute the pair (0, σ̂)", LatticeElement::new(u_hat).to_sparse()));
    }

    let swap = |i: usize| -> Result<LatticeElement> {
        let (wp, wm) = w_vectors(n, i)?;
        Ok(wp.sub(&wm))
    };
    let is_refutation = |z: &LatticeElement| a.annihilates(z.as_slice()) && z.as_slice()[0] > 0;
    let mut standard_refutations = Vec::new();
    let mut unique_refutations = Vec::new();
    for col in 0..a.cols() {
        if rel.sigma_hat.contains(col) {
            continue;
        }
        let (i, l, copy) = ix.delta_label(col);
        let form = match (l, copy) {
            (1, 0) => RefutationForm::A,
            (0, 1) => RefutationForm::B,
            (0, 0) => RefutationForm::C,
            _ => RefutationForm::D,
        };
        let w = swap(i)?;
        let (std_vec, uniq_vec) = match form {
            RefutationForm::A | RefutationForm::B => (w.clone(), w),
            RefutationForm::C | RefutationForm::D => (rel.f_hat.sub(&w.scale(alpha - 1)), rel.f_hat.sub(&w)),
        };
        // Standardness: k·z⁺ lies in (k·e(0|0|0), τ ∪ {col}) and k·z⁻ is cheaper.
        for cert in &pairs {
            let z = std_vec.scale(cert.k);
            let enlarged = StandardPair::new(cert.pair.root.clone(), cert.pair.free.with(col))?;
            if !is_refutation(&z) || !enlarged.contains_point(&z.positive_part()) {
                return fail(format!("no standardness refutation for column {col} at k={}: {}", cert.k, z.to_sparse()));
            }
        }
        standard_refutations.push(Refutation { column: col, form, vector: std_vec });
        // Uniqueness: z⁺ ≤ û_n − e(0|0|0) + e_col, so that point is not optimal.
        let mut bound = u_hat.clone();
        bound[0] -= 1;
        bound[col] += 1;
        if !is_refutation(&uniq_vec) || !uniq_vec.positive_part().iter().zip(&bound).all(|(x, y)| x <= y) {
            return fail(format!("no uniqueness refutation for column {col}: {}", uniq_vec.to_sparse()));
        }
        unique_refutations.push(Refutation { column: col, form, vector: uniq_vec });
    }

    let mut point = u_hat.clone();
    point[0] -= 1;
    let containing: Vec<&StandardPair> = all_pairs.iter().filter(|p| p.contains_point(&point)).collect();
    let expected = sullivant_pair(n, alpha - 1)?;
    if containing.len() != 1 || *containing[0] != expected {
        return fail(format!(
            "û_n − e(0|0|0) = {} lies in {} standard pairs",
            LatticeElement::new(point).to_sparse(),
            containing.len()
        ));
    }
    Ok(CertificateReport {
        n,
        alpha,
        pairs,
        full_support_rejected,
        standard_refutations,
        unique_refutations,
        unique_pair: expected,
        standard_pair_count: all_pairs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opt::{enumerate_fiber, unit_cost};

    fn pair(root: &[i64], free: &[usize]) -> StandardPair {
        StandardPair::new(root.to_vec(), SupportSet::new(free.iter().copied())).unwrap()
    }

    #[test]
    fn pairs_of_small_ideals() {
        // x^2 in k[x, y]
        let p = standard_pairs_of_ideal(&[vec![2, 0]], 2, 100).unwrap();
        assert_eq!(p, vec![pair(&[0, 0], &[1]), pair(&[1, 0], &[1])]);
        // xy
        let p = standard_pairs_of_ideal(&[vec![1, 1]], 2, 100).unwrap();
        assert_eq!(p, vec![pair(&[0, 0], &[0]), pair(&[0, 0], &[1])]);
        // x^2 y, x y^2
        let p = standard_pairs_of_ideal(&[vec![2, 1], vec![1, 2]], 2, 100).unwrap();
        assert_eq!(p, vec![pair(&[0, 0], &[0]), pair(&[0, 0], &[1]), pair(&[1, 1], &[])]);
        // xy, yz, x^2
        let p = standard_pairs_of_ideal(&[vec![1, 1, 0], vec![0, 1, 1], vec![2, 0, 0]], 3, 100).unwrap();
        assert_eq!(p, vec![pair(&[0, 0, 0], &[1]), pair(&[0, 0, 0], &[2]), pair(&[1, 0, 0], &[2])]);
        // The unit ideal has no standard monomials; the zero ideal has one pair.
        assert!(standard_pairs_of_ideal(&[vec![0, 0]], 2, 100).unwrap().is_empty());
        assert_eq!(standard_pairs_of_ideal(&[], 2, 100).unwrap(), vec![pair(&[0, 0], &[0, 1])]);
    }

    #[test]
    fn pair_limit_is_enforced() {
        let gens: Vec<Vec<i64>> = (0..4).map(|j| (0..4).map(|k| i64::from(j != k)).collect()).collect();
        assert!(matches!(standard_pairs_of_ideal(&gens, 4, 1), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn pair_invariants() {
        assert!(StandardPair::new(vec![1, 0], SupportSet::new([0])).is_err());
        assert!(StandardPair::new(vec![-1, 0], SupportSet::new([1])).is_err());
        let p = pair(&[2, 0, 0], &[1]);
        assert!(p.contains_point(&[2, 5, 0]));
        assert!(!p.contains_point(&[1, 5, 0]));
        assert!(p.contained_in(&pair(&[0, 0, 0], &[0, 1])));
        assert!(!p.contained_in(&pair(&[1, 0, 0], &[1, 2])));
        assert_eq!(p.covers(), vec![pair(&[0, 0, 0], &[0, 1]), pair(&[2, 0, 0], &[1, 2])]);
    }

    #[test]
    fn w_vectors_are_kernel_swaps() {
        let d = delta_matrix(4).unwrap();
        let ix = SullivantIndexing::new(4).unwrap();
        for i in 1..4 {
            let (wp, wm) = w_vectors(4, i).unwrap();
            let z = wp.sub(&wm);
            assert!(d.annihilates(z.as_slice()));
            assert_eq!(z.support().len(), 8);
            assert_eq!(wp.as_slice()[ix.delta(0, 0, 0)], 1);
            assert_eq!(wp.as_slice()[ix.delta(i, 1, 0)], 1);
            assert_eq!(wm.as_slice()[ix.delta(i, 1, 1)], 1);
        }
        assert!(w_vectors(4, 0).is_err());
        assert!(w_vectors(4, 4).is_err());
    }

    fn delta4_basis() -> (IntMatrix, BasisSet) {
        let d = delta_matrix(4).unwrap();
        let gb = reduced_groebner(&d, &TermOrder::unit(d.cols(), 0)).unwrap();
        (d, gb)
    }

    #[test]
    fn sullivant_pair_is_standard_at_n4() {
        let (_, gb) = delta4_basis();
        let p = sullivant_pair(4, 1).unwrap();
        let s = classify_pair(&p, &gb).unwrap();
        assert!(s.admissible && s.associated && s.standard);
        let mut root = vec![0; 16];
        root[0] = 1;
        let bad = StandardPair { root, free: sullivant_relation(4).unwrap().sigma_hat };
        assert!(classify_pair(&bad, &gb).is_err());
        let full = StandardPair::new(vec![0; 16], sullivant_relation(4).unwrap().sigma_hat).unwrap();
        assert!(!classify_pair(&full, &gb).unwrap().associated);
    }

    #[test]
    fn enumerated_pairs_are_standard() {
        let (_, gb) = delta4_basis();
        let pairs = enumerate_standard_pairs(&gb).unwrap();
        assert!(pairs.contains(&sullivant_pair(4, 1).unwrap()));
        for p in &pairs {
            assert!(classify_pair(p, &gb).unwrap().standard, "{p:?}");
            for q in &pairs {
                assert!(p == q || !p.contained_in(q));
            }
        }
    }

    #[test]
    fn sullivant_pair_gap_at_n4() {
        let (d, _) = delta4_basis();
        let p = sullivant_pair(4, 1).unwrap();
        let g = pair_gap(&p, &d, &unit_cost(16, 0), &GapSchedule::default()).unwrap();
        assert_eq!(g.lower, rational::one());
        assert_eq!(g.upper, Some(rational::one()));
        let mut checked = GapSchedule::doubling(4);
        checked.solve_ip = true;
        assert_eq!(pair_gap(&p, &d, &unit_cost(16, 0), &checked).unwrap().lower, rational::one());
    }

    #[test]
    fn gap_of_trivial_pair() {
        let a = IntMatrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        let p = pair(&[0, 0, 0], &[0, 1, 2]);
        let g = pair_gap(&p, &a, &unit_cost(3, 0), &GapSchedule::default()).unwrap();
        assert_eq!(g.lower, rational::zero());
        assert_eq!(g.upper, Some(rational::zero()));
    }

    #[test]
    fn membership() {
        let (d, _) = delta4_basis();
        let rel = sullivant_relation(4).unwrap();
        let p = sullivant_pair(4, 1).unwrap();
        let mut w = rel.u_hat();
        w[0] -= 1;
        assert!(margin_membership(&d.mul_vec(&w).unwrap(), &p, &d).unwrap());
        assert!(margin_membership(&d.mul_vec(&p.root).unwrap(), &p, &d).unwrap());
        let sub = d.select_columns(&p.free.to_vec());
        let base = d.mul_vec(&p.root).unwrap();
        for l in (0..16).filter(|&l| !rel.sigma_hat.contains(l)) {
            let b = d.mul_vec(&LatticeElement::unit(16, l).into_vec()).unwrap();
            let rest: Vec<i64> = b.iter().zip(&base).map(|(x, y)| x - y).collect();
            let oracle = rest.iter().all(|&x| x >= 0) && !enumerate_fiber(&sub, &rest, 1000).unwrap().is_empty();
            assert_eq!(margin_membership(&b, &p, &d).unwrap(), oracle);
            assert!(!oracle);
        }
    }

    #[test]
    fn certificates_at_n4() {
        let r = verify_sullivant_certificates(4).unwrap();
        assert_eq!(r.alpha, 2);
        assert_eq!(r.unique_pair, sullivant_pair(4, 1).unwrap());
        assert_eq!(r.pairs.len(), 1);
        assert_eq!(r.pairs[0].containing_pairs, 1);
        // One refutation per column outside σ̂.
        assert_eq!(r.standard_refutations.len(), 16 - 10);
        assert!(verify_sullivant_certificates(3).is_err());
    }
}
