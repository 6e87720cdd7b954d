//! Graver bases, reduced Gröbner bases of Lawrence liftings, and the
//! optimality and gap-witness queries built on them.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{integer_kernel_basis, rank, LatticeElement};
use crate::matrix::IntMatrix;
use crate::model::lawrence_lift;
use crate::opt::{gap_with, is_lp_feasible_point, unit_cost, IpOptions};
use crate::rational::{self, Rational};

/// A cost vector refined by graded reverse lexicographic order on the
/// column order, which makes it a total order on exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermOrder {
    weight: Vec<i64>,
}

impl TermOrder {
    pub fn new(weight: Vec<i64>) -> Self {
        Self { weight }
    }

    /// Weight `e_j` on `len` columns.
    pub fn unit(len: usize, j: usize) -> Self {
        Self::new(unit_cost(len, j))
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn cost(&self, u: &[i64]) -> i64 {
        self.weight.iter().zip(u).map(|(c, x)| c * x).sum()
    }

    /// `Greater` when `u` is the larger monomial.
    pub fn compare(&self, u: &[i64], v: &[i64]) -> Ordering {
        self.cost(u).cmp(&self.cost(v)).then_with(|| u.iter().sum::<i64>().cmp(&v.iter().sum::<i64>())).then_with(
            || {
                // Reverse lex: the monomial with the smaller last differing exponent is larger.
                match u.iter().zip(v).rev().find(|(a, b)| a != b) {
                    Some((a, b)) => b.cmp(a),
                    None => Ordering::Equal,
                }
            },
        )
    }
}

/// A kernel element `u - v` stored with its leading part `u` positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedBinomial {
    element: LatticeElement,
}

impl OrientedBinomial {
    /// Orients `z` so that the positive part is the larger term.
    pub fn orient(z: &LatticeElement, order: &TermOrder) -> Self {
        let element = match order.compare(&z.positive_part(), &z.negative_part()) {
            Ordering::Less => z.neg(),
            _ => z.clone(),
        };
        Self { element }
    }

    /// Takes `z` as given: its positive part leads.
    pub fn from_leading_positive(z: LatticeElement) -> Self {
        Self { element: z }
    }

    pub fn element(&self) -> &LatticeElement {
        &self.element
    }

    pub fn lead(&self) -> Vec<i64> {
        self.element.positive_part()
    }

    pub fn trail(&self) -> Vec<i64> {
        self.element.negative_part()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Graver,
    ReducedGroebner,
}

impl std::str::FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graver" => Ok(Self::Graver),
            "gb" | "groebner" | "reduced_groebner" => Ok(Self::ReducedGroebner),
            _ => Err(Error::InvalidArgument(format!("unknown basis kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSet {
    pub kind: BasisKind,
    pub cols: usize,
    pub elements: Vec<OrientedBinomial>,
    pub fingerprint: String,
    pub order: Option<TermOrder>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_terms(&self) -> Vec<Vec<i64>> {
        self.elements.iter().map(OrientedBinomial::lead).collect()
    }

    pub fn contains(&self, z: &LatticeElement) -> bool {
        let (a, b) = (z.clone(), z.neg());
        self.elements.iter().any(|e| *e.element() == a || *e.element() == b)
    }

    /// One element per line in sparse form, leading part first.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.elements {
            s.push_str(&e.element().to_sparse());
            s.push('\n');
        }
        s
    }

    /// Reads elements written by [`Self::to_text`]; each line's positive part leads.
    pub fn elements_from_text(text: &str, cols: usize) -> Result<Vec<OrientedBinomial>> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| LatticeElement::from_sparse(l, cols).map(OrientedBinomial::from_leading_positive))
            .collect()
    }
}

/// FNV-1a over the exchange-format text of the matrix.
pub fn fingerprint(a: &IntMatrix) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in a.to_text().bytes() {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraverOptions {
    pub max_elements: usize,
    pub max_steps: u64,
}

impl Default for GraverOptions {
    fn default() -> Self {
        Self { max_elements: 200_000, max_steps: 200_000_000 }
    }
}

/// If `a` has the block shape `[[B,0],[0,B],[I,I]]`, returns `B`.
pub fn lawrence_base(a: &IntMatrix) -> Option<IntMatrix> {
    if !a.cols().is_multiple_of(2) || a.cols() == 0 {
        return None;
    }
    let m = a.cols() / 2;
    if a.rows() < m || !(a.rows() - m).is_multiple_of(2) {
        return None;
    }
    let p = (a.rows() - m) / 2;
    let base = IntMatrix::from_vec(p, m, (0..p).flat_map(|r| a.row(r)[..m].to_vec()).collect()).ok()?;
    (lawrence_lift(&base) == *a).then_some(base)
}

/// The Graver basis of `ker_Z(A)`, sign-canonicalized and sorted.
///
/// Lawrence liftings are handled through their base matrix: the Graver basis
/// of `[[B,0],[0,B],[I,I]]` is exactly `{(g,-g) : g ∈ Graver(B)}`.
pub fn graver_basis(a: &IntMatrix) -> Result<BasisSet> {
    graver_basis_with(a, GraverOptions::default())
}

pub fn graver_basis_with(a: &IntMatrix, opts: GraverOptions) -> Result<BasisSet> {
    let elements = match lawrence_base(a) {
        Some(base) => {
            let m = base.cols();
            let mut lifted: Vec<LatticeElement> = graver_completion(&base, opts)?
                .into_iter()
                .map(|g| {
                    let mut v = g.as_slice().to_vec();
                    v.extend(g.as_slice().iter().map(|x| -x));
                    debug_assert_eq!(v.len(), 2 * m);
                    LatticeElement::new(v)
                })
                .collect();
            lifted.sort_by(|x, y| y.cmp(x));
            lifted
        }
        None => graver_completion(a, opts)?,
    };
    Ok(BasisSet {
        kind: BasisKind::Graver,
        cols: a.cols(),
        elements: elements.into_iter().map(OrientedBinomial::from_leading_positive).collect(),
        fingerprint: fingerprint(a),
        order: None,
    })
}

struct Entry {
    v: Vec<i64>,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl Entry {
    fn new(v: Vec<i64>) -> Self {
        let words = v.len().div_ceil(64).max(1);
        let mut pos = vec![0u64; words];
        let mut neg = vec![0u64; words];
        for (i, &x) in v.iter().enumerate() {
            if x > 0 {
                pos[i / 64] |= 1 << (i % 64);
            } else if x < 0 {
                neg[i / 64] |= 1 << (i % 64);
            }
        }
        Self { v, pos, neg }
    }

    /// `self ⊑ other`: same signs where `self` is nonzero, and no larger in absolute value.
    fn conformal_le(&self, other: &Entry) -> bool {
        self.pos.iter().zip(&other.pos).all(|(a, b)| a & !b == 0)
            && self.neg.iter().zip(&other.neg).all(|(a, b)| a & !b == 0)
            && self.v.iter().zip(&other.v).all(|(&a, &b)| a.abs() <= b.abs())
    }

    fn sign_compatible(&self, other: &Entry) -> bool {
        self.pos.iter().zip(&other.neg).all(|(a, b)| a & b == 0)
            && self.neg.iter().zip(&other.pos).all(|(a, b)| a & b == 0)
    }
}

/// Conformal completion of a kernel lattice basis (no Lawrence shortcut).
///
/// Starting from `±` a lattice basis, every sum of two sign-incompatible
/// elements is reduced by conformally smaller elements; nonzero residues are
/// added until no new residue appears. Sums are processed by increasing
/// 1-norm, which keeps the intermediate set close to the final one.
pub fn graver_completion(a: &IntMatrix, opts: GraverOptions) -> Result<Vec<LatticeElement>> {
    let basis = integer_kernel_basis(a);
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut g: Vec<Entry> = Vec::new();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: BinaryHeap<(Reverse<i64>, Reverse<u64>, Vec<i64>)> = BinaryHeap::new();
    let mut ticket = 0u64;
    let mut push = |queue: &mut BinaryHeap<_>, v: Vec<i64>| {
        let norm: i64 = v.iter().map(|x: &i64| x.abs()).sum();
        queue.push((Reverse(norm), Reverse(ticket), v));
        ticket += 1;
    };
    for b in &basis {
        for v in [b.as_slice().to_vec(), b.neg().into_vec()] {
            if seen.insert(v.clone()) {
                g.push(Entry::new(v));
            }
        }
    }
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !g[i].sign_compatible(&g[j]) {
                let s: Vec<i64> = g[i].v.iter().zip(&g[j].v).map(|(x, y)| x + y).collect();
                if s.iter().any(|&x| x != 0) {
                    push(&mut queue, s);
                }
            }
        }
    }
    let mut steps = 0u64;
    while let Some((_, _, s)) = queue.pop() {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::BudgetExceeded(format!("Graver completion exceeded {} steps", opts.max_steps)));
        }
        let mut r = Entry::new(s);
        loop {
            if r.v.iter().all(|&x| x == 0) {
                break;
            }
            match g.iter().find(|h| h.conformal_le(&r)) {
                Some(h) => {
                    let next: Vec<i64> = r.v.iter().zip(&h.v).map(|(x, y)| x - y).collect();
                    r = Entry::new(next);
                }
                None => break,
            }
        }
        if r.v.iter().all(|&x| x == 0) || seen.contains(&r.v) {
            continue;
        }
        for h in &g {
            if !r.sign_compatible(h) {
                let t: Vec<i64> = r.v.iter().zip(&h.v).map(|(x, y)| x + y).collect();
                if t.iter().any(|&x| x != 0) {
                    push(&mut queue, t);
                }
            }
        }
        let neg: Vec<i64> = r.v.iter().map(|x| -x).collect();
        seen.insert(r.v.clone());
        seen.insert(neg.clone());
        g.push(r);
        g.push(Entry::new(neg));
        if g.len() > opts.max_elements {
            return Err(Error::BudgetExceeded(format!("Graver completion exceeded {} elements", opts.max_elements)));
        }
    }
    let mut out: Vec<LatticeElement> = g
        .iter()
        .enumerate()
        .filter(|(i, e)| !g.iter().enumerate().any(|(j, h)| j != *i && h.v != e.v && h.conformal_le(e)))
        .map(|(_, e)| LatticeElement::new(e.v.clone()).sign_normalized())
        .collect();
    out.sort_by(|x, y| y.cmp(x));
    out.dedup();
    Ok(out)
}

/// Orients `elements` by `order` and inter-reduces them: elements whose
/// leading term is divisible by another leading term are dropped, and
/// trailing terms are reduced modulo the other leading terms.
///
/// Returns the reduced set and whether anything changed.
pub fn inter_reduce(elements: &[OrientedBinomial], order: &TermOrder) -> (Vec<OrientedBinomial>, bool) {
    let mut cur: Vec<(Vec<i64>, Vec<i64>)> = elements.iter().map(|e| (e.lead(), e.trail())).collect();
    let mut changed = false;
    let divides = |u: &[i64], p: &[i64]| u.iter().zip(p).all(|(a, b)| a <= b);
    let mut i = 0;
    while i < cur.len() {
        let lead_i = cur[i].0.clone();
        if (0..cur.len()).any(|j| j != i && cur[j].0 != lead_i && divides(&cur[j].0, &lead_i)) {
            cur.remove(i);
            changed = true;
            i = 0;
            continue;
        }
        loop {
            let t = &cur[i].1;
            let Some(j) = (0..cur.len()).find(|&j| j != i && divides(&cur[j].0, t)) else { break };
            let next: Vec<i64> = cur[i].1.iter().zip(&cur[j].0).zip(&cur[j].1).map(|((t, u), v)| t - u + v).collect();
            cur[i].1 = next;
            changed = true;
        }
        i += 1;
    }
    let mut out: Vec<OrientedBinomial> = cur
        .into_iter()
        .filter(|(u, v)| u != v)
        .map(|(u, v)| {
            let z = LatticeElement::new(u.iter().zip(&v).map(|(a, b)| a - b).collect());
            OrientedBinomial::orient(&z, order)
        })
        .collect();
    out.sort();
    out.dedup();
    (out, changed)
}

/// The reduced Gröbner basis of the toric ideal of a Lawrence lifting.
///
/// For Lawrence liftings the Graver basis is the universal Gröbner basis and
/// every reduced Gröbner basis equals it, so orienting the Graver elements
/// and inter-reducing yields the reduced basis for `order`.
pub fn reduced_groebner(a: &IntMatrix, order: &TermOrder) -> Result<BasisSet> {
    if lawrence_base(a).is_none() {
        return Err(Error::NotLawrence);
    }
    if order.weight().len() != a.cols() {
        return Err(Error::Dimension { expected: a.cols(), found: order.weight().len() });
    }
    let oriented = orient_basis(&graver_basis(a)?, order);
    let (elements, _) = inter_reduce(&oriented.elements, order);
    Ok(BasisSet { kind: BasisKind::ReducedGroebner, elements, ..oriented })
}

/// Orients every element of `basis` by `order`; the element set is unchanged.
pub fn orient_basis(basis: &BasisSet, order: &TermOrder) -> BasisSet {
    let mut elements: Vec<OrientedBinomial> =
        basis.elements.iter().map(|e| OrientedBinomial::orient(e.element(), order)).collect();
    elements.sort();
    BasisSet {
        kind: basis.kind,
        cols: basis.cols,
        elements,
        fingerprint: basis.fingerprint.clone(),
        order: Some(order.clone()),
    }
}

/// Generators of the monomial ideal of non-optimal points: for every basis
/// element whose two terms differ in cost, the costlier term.
///
/// Elements that tie on the weight only encode the tie-break and are skipped.
/// When the basis contains the Graver basis this ideal is exact: `p` is not
/// optimal iff a conformal Graver decomposition of `p − q`, for a cheaper `q`
/// in the fiber, contains an improving element whose costlier term is `≤ p`.
pub fn improving_terms(basis: &BasisSet, order: &TermOrder) -> Vec<Vec<i64>> {
    basis
        .elements
        .iter()
        .filter_map(|e| {
            let (u, v) = (e.lead(), e.trail());
            match order.cost(&u).cmp(&order.cost(&v)) {
                Ordering::Greater => Some(u),
                Ordering::Less => Some(v),
                Ordering::Equal => None,
            }
        })
        .collect()
}

/// `true` iff `p` minimizes the weight of `order` over its fiber, decided by
/// divisibility against [`improving_terms`].
pub fn is_optimal(p: &[i64], basis: &BasisSet, order: &TermOrder) -> bool {
    !improving_terms(basis, order).iter().any(|u| u.iter().zip(p).all(|(a, b)| a <= b))
}

/// `true` iff `p` is a standard monomial: no leading term divides it.
pub fn is_standard(p: &[i64], basis: &BasisSet) -> bool {
    !basis.elements.iter().any(|e| e.lead().iter().zip(p).all(|(a, b)| a <= b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessMargin {
    pub beta: i64,
    pub margin: Vec<i64>,
    #[serde(with = "rational::serde_rational")]
    pub gap: Rational,
    pub lp_point_feasible: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapWitness {
    pub element: LatticeElement,
    pub alpha: i64,
    pub margins: Vec<WitnessMargin>,
}

/// Witnesses from elements whose leading term has first coordinate `α ≥ 2`.
///
/// For `g = u - v` and `1 <= β < α`, `b_β = A(u - (α-β)e_1)` has integer
/// optimum `β` (attained at `u - (α-β)e_1`) while
/// `w* = u - (α-β)e_1 - (β/α)(u - v)` is LP-feasible with first coordinate 0.
/// Each claim is checked by an exact gap computation.
pub fn gap_witnesses(basis: &BasisSet, a: &IntMatrix) -> Result<Vec<GapWitness>> {
    gap_witnesses_with(basis, a, IpOptions::default())
}

pub fn gap_witnesses_with(basis: &BasisSet, a: &IntMatrix, opts: IpOptions) -> Result<Vec<GapWitness>> {
    let c = unit_cost(a.cols(), 0);
    let mut out = Vec::new();
    for e in &basis.elements {
        let u = e.lead();
        let alpha = u[0];
        if alpha < 2 {
            continue;
        }
        let mut margins = Vec::new();
        for beta in 1..alpha {
            let mut point = u.clone();
            point[0] -= alpha - beta;
            let margin = a.mul_vec(&point)?;
            let report = gap_with(a, &c, &margin, opts)?;
            let w: Vec<Rational> = point
                .iter()
                .zip(e.element().as_slice())
                .map(|(&p, &z)| rational::int(p) - Rational::new(beta.into(), alpha.into()) * rational::int(z))
                .collect();
            let lp_point_feasible = w[0] == rational::zero() && is_lp_feasible_point(a, &margin, &w);
            let gap = report.gap.clone().unwrap_or_else(rational::zero);
            let verified = report.gap == Some(rational::int(beta)) && lp_point_feasible;
            margins.push(WitnessMargin { beta, margin, gap, lp_point_feasible, verified });
        }
        out.push(GapWitness { element: e.element().clone(), alpha, margins });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub rank: usize,
    pub elements: usize,
    pub checked: usize,
    pub exempt: usize,
    pub violations: Vec<LatticeElement>,
}

impl MarkovReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Elements with more than `rank(A)` nonzero entries must have all entries in `{-1, 0, 1}`.
pub fn markov_entry_check(basis: &BasisSet, a: &IntMatrix) -> MarkovReport {
    let r = rank(a);
    let mut checked = 0;
    let mut violations = Vec::new();
    for e in &basis.elements {
        if e.element().support().len() > r {
            checked += 1;
            if e.element().max_abs() > 1 {
                violations.push(e.element().clone());
            }
        }
    }
    MarkovReport { rank: r, elements: basis.len(), checked, exempt: basis.len() - checked, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{checkerboard, sullivant_relation};
    use crate::model::{b_matrix, delta_matrix, gamma_matrix};

    fn swap_matrix() -> IntMatrix {
        lawrence_lift(&IntMatrix::from_rows(vec![vec![1, 1]]).unwrap())
    }

    #[test]
    fn grevlex_tie_break() {
        let o = TermOrder::new(vec![0, 0, 0]);
        assert_eq!(o.compare(&[2, 0, 0], &[0, 1, 0]), Ordering::Greater);
        // Same degree: the one with the smaller last exponent is larger.
        assert_eq!(o.compare(&[1, 1, 0], &[1, 0, 1]), Ordering::Greater);
        assert_eq!(o.compare(&[1, 0, 1], &[1, 0, 1]), Ordering::Equal);
        let w = TermOrder::unit(3, 2);
        assert_eq!(w.compare(&[0, 0, 1], &[5, 5, 0]), Ordering::Greater);
    }

    #[test]
    fn b4_graver_is_checkerboard() {
        let g = graver_basis(&b_matrix(4).unwrap()).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.contains(&checkerboard(4).unwrap()));
    }

    #[test]
    fn gamma_sigma_graver_is_f() {
        let (m, cols) = crate::linalg::gamma_sigma_matrix(4).unwrap();
        let g = graver_basis(&m).unwrap();
        assert_eq!(g.len(), 1);
        let f = sullivant_relation(4).unwrap().f;
        let restricted: Vec<i64> = cols.iter().map(|&c| f.as_slice()[c]).collect();
        assert!(g.contains(&LatticeElement::new(restricted)));
    }

    #[test]
    fn delta4_lifted_matches_direct_completion() {
        let d = delta_matrix(4).unwrap();
        let lifted = graver_basis(&d).unwrap();
        let mut direct = graver_completion(&d, GraverOptions::default()).unwrap();
        direct.sort();
        let mut via: Vec<LatticeElement> = lifted.elements.iter().map(|e| e.element().clone()).collect();
        via.sort();
        assert_eq!(direct, via);
        assert!(lifted.contains(&sullivant_relation(4).unwrap().f_hat));
        for e in &lifted.elements {
            assert!(d.annihilates(e.element().as_slice()));
        }
    }

    #[test]
    fn completion_independent_of_column_permutation() {
        let g = gamma_matrix(4).unwrap();
        let perm: Vec<usize> = (0..g.cols()).rev().collect();
        let p = g.select_columns(&perm);
        let a = graver_completion(&g, GraverOptions::default()).unwrap();
        let mut b: Vec<LatticeElement> = graver_completion(&p, GraverOptions::default())
            .unwrap()
            .into_iter()
            .map(|z| {
                let mut x = vec![0; z.len()];
                for (k, &c) in perm.iter().enumerate() {
                    x[c] = z.as_slice()[k];
                }
                LatticeElement::new(x).sign_normalized()
            })
            .collect();
        b.sort_by(|x, y| y.cmp(x));
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_enforced() {
        let d = gamma_matrix(5).unwrap();
        let r = graver_completion(&d, GraverOptions { max_elements: 10, max_steps: u64::MAX });
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn swap_basis() {
        let a = swap_matrix();
        let gb = reduced_groebner(&a, &TermOrder::unit(4, 0)).unwrap();
        assert_eq!(gb.len(), 1);
        // Columns (1|0),(2|0),(1|1),(2|1): the swap e_{1|0}+e_{2|1} - e_{2|0} - e_{1|1}.
        assert_eq!(gb.elements[0].element().as_slice(), &[1, -1, -1, 1]);
        assert!(matches!(reduced_groebner(&gamma_matrix(4).unwrap(), &TermOrder::unit(8, 0)), Err(Error::NotLawrence)));
    }

    #[test]
    fn delta4_reduced_basis() {
        let d = delta_matrix(4).unwrap();
        let order = TermOrder::unit(d.cols(), 0);
        let graver = graver_basis(&d).unwrap();
        let oriented: Vec<OrientedBinomial> =
            graver.elements.iter().map(|e| OrientedBinomial::orient(e.element(), &order)).collect();
        let (reduced, changed) = inter_reduce(&oriented, &order);
        assert!(!changed);
        assert_eq!(reduced.len(), oriented.len());
        let rel = sullivant_relation(4).unwrap();
        let f = reduced.iter().find(|e| *e.element() == rel.f_hat).expect("f_hat oriented positively");
        assert_eq!(f.lead(), rel.u_hat());
        assert_eq!(f.lead()[0], 2);
    }

    #[test]
    fn optimality_of_sullivant_points() {
        let d = delta_matrix(4).unwrap();
        let order = TermOrder::unit(d.cols(), 0);
        let gb = reduced_groebner(&d, &order).unwrap();
        let u = sullivant_relation(4).unwrap().u_hat();
        assert!(!is_optimal(&u, &gb, &order));
        let mut w = u.clone();
        w[0] -= 1;
        assert!(is_optimal(&w, &gb, &order));
        assert!(is_optimal(&vec![0; d.cols()], &gb, &order));
    }

    #[test]
    fn delta4_witness() {
        let d = delta_matrix(4).unwrap();
        let gb = reduced_groebner(&d, &TermOrder::unit(d.cols(), 0)).unwrap();
        let w = gap_witnesses(&gb, &d).unwrap();
        assert!(!w.is_empty());
        for wit in &w {
            assert_eq!(wit.alpha, 2);
            assert_eq!(wit.margins.len(), 1);
            assert!(wit.margins[0].verified, "{wit:?}");
        }
        let f_hat = sullivant_relation(4).unwrap().f_hat;
        assert!(w.iter().any(|x| x.element == f_hat));
    }

    #[test]
    fn no_witness_for_small_leading_coordinates() {
        let a = swap_matrix();
        let gb = reduced_groebner(&a, &TermOrder::unit(4, 0)).unwrap();
        assert!(gap_witnesses(&gb, &a).unwrap().is_empty());
    }

    #[test]
    fn markov_check_on_delta4() {
        let d = delta_matrix(4).unwrap();
        let g = graver_basis(&d).unwrap();
        let report = markov_entry_check(&g, &d);
        assert_eq!(report.rank, 12);
        assert!(report.passed());
        let f_hat = sullivant_relation(4).unwrap().f_hat;
        assert_eq!(f_hat.support().len(), 10);
    }

    #[test]
    fn text_round_trip() {
        let d = delta_matrix(4).unwrap();
        let gb = reduced_groebner(&d, &TermOrder::unit(d.cols(), 0)).unwrap();
        let back = BasisSet::elements_from_text(&gb.to_text(), d.cols()).unwrap();
        assert_eq!(back, gb.elements);
    }
}
