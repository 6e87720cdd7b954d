//! Hierarchical models on discrete variables and their margin matrices.
//!
//! Variables are 1-based. Cells are ordered lexicographically with variable 1
//! as the most significant coordinate unless a custom significance order is
//! requested. The named families `B_n`, `Γ_n`, `Δ_n` are built here, together
//! with the logit construction and the Lawrence lifting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A simplicial complex given by its facets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplicialComplex {
    ground_size: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Normalizes `facets` on the ground set `{1..n}`: duplicates and
    /// dominated faces are dropped, facets are sorted canonically.
    pub fn new(facets: &[Vec<usize>], n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidModel("ground set size must be at least 1".into()));
        }
        if facets.is_empty() {
            return Err(Error::InvalidModel("facet list is empty".into()));
        }
        let mut normalized: Vec<Vec<usize>> = Vec::with_capacity(facets.len());
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::InvalidModel("empty facet".into()));
            }
            if let Some(&bad) = f.iter().find(|&&v| v < 1 || v > n) {
                return Err(Error::InvalidModel(format!("variable {bad} outside 1..={n}")));
            }
            normalized.push(f);
        }
        normalized.sort();
        normalized.dedup();
        let maximal: Vec<Vec<usize>> =
            normalized.iter().filter(|f| !normalized.iter().any(|g| g != *f && is_subset(f, g))).cloned().collect();
        Ok(Self { ground_size: n, facets: maximal })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Free-function form of [`SimplicialComplex::new`].
pub fn build_complex(facets: &[Vec<usize>], n: usize) -> Result<SimplicialComplex> {
    SimplicialComplex::new(facets, n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HierarchicalModel {
    complex: SimplicialComplex,
    levels: Vec<u32>,
}

impl HierarchicalModel {
    pub fn new(complex: SimplicialComplex, levels: Vec<u32>) -> Result<Self> {
        if levels.len() != complex.ground_size() {
            return Err(Error::Dimension { expected: complex.ground_size(), found: levels.len() });
        }
        if let Some(&d) = levels.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidModel(format!("level count {d} < 2")));
        }
        Ok(Self { complex, levels })
    }

    pub fn binary(complex: SimplicialComplex) -> Self {
        let levels = vec![2; complex.ground_size()];
        Self { complex, levels }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn ground_size(&self) -> usize {
        self.complex.ground_size()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        self.complex.facets()
    }

    pub fn is_binary(&self) -> bool {
        self.levels.iter().all(|&d| d == 2)
    }

    pub fn cell_count(&self) -> usize {
        self.levels.iter().map(|&d| d as usize).product()
    }

    pub fn margin_matrix(&self) -> MarginMatrix {
        let order: Vec<usize> = (1..=self.ground_size()).collect();
        self.margin_matrix_ordered(&order).expect("identity order is a permutation")
    }

    /// Margin matrix whose columns enumerate cells with `significance[0]` as
    /// the outermost (slowest-varying) variable.
    pub fn margin_matrix_ordered(&self, significance: &[usize]) -> Result<MarginMatrix> {
        let n = self.ground_size();
        let mut seen = vec![false; n + 1];
        if significance.len() != n {
            return Err(Error::Dimension { expected: n, found: significance.len() });
        }
        for &v in significance {
            if v < 1 || v > n || seen[v] {
                return Err(Error::InvalidArgument("column order is not a permutation of the variables".into()));
            }
            seen[v] = true;
        }
        let cols = cells_in_order(&self.levels, significance);
        let mut row_labels = Vec::new();
        for facet in self.facets() {
            let facet_levels: Vec<u32> = facet.iter().map(|&v| self.levels[v - 1]).collect();
            for assignment in lex_tuples(&facet_levels) {
                row_labels.push(RowLabel { facet: facet.clone(), assignment });
            }
        }
        let mut entries = IntMatrix::zeros(row_labels.len(), cols.len());
        for (r, label) in row_labels.iter().enumerate() {
            for (c, cell) in cols.iter().enumerate() {
                let hit = label.facet.iter().zip(&label.assignment).all(|(&v, &k)| cell.coordinates[v - 1] == k);
                if hit {
                    entries.set(r, c, 1);
                }
            }
        }
        Ok(MarginMatrix { entries, row_labels, col_labels: cols })
    }
}

/// A cell of the table: its coordinates and its lexicographic rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellIndex {
    pub coordinates: Vec<u32>,
    pub rank: usize,
}

impl CellIndex {
    pub fn from_rank(levels: &[u32], mut rank: usize) -> Self {
        let total = rank;
        let mut coordinates = vec![0; levels.len()];
        for (slot, &d) in coordinates.iter_mut().zip(levels).rev() {
            *slot = (rank % d as usize) as u32;
            rank /= d as usize;
        }
        Self { coordinates, rank: total }
    }

    pub fn lex_rank(levels: &[u32], coordinates: &[u32]) -> usize {
        coordinates.iter().zip(levels).fold(0, |acc, (&c, &d)| acc * d as usize + c as usize)
    }
}

fn lex_tuples(levels: &[u32]) -> Vec<Vec<u32>> {
    let total: usize = levels.iter().map(|&d| d as usize).product();
    (0..total).map(|r| CellIndex::from_rank(levels, r).coordinates).collect()
}

fn cells_in_order(levels: &[u32], significance: &[usize]) -> Vec<CellIndex> {
    let permuted: Vec<u32> = significance.iter().map(|&v| levels[v - 1]).collect();
    lex_tuples(&permuted)
        .into_iter()
        .map(|t| {
            let mut coordinates = vec![0; levels.len()];
            for (&v, &x) in significance.iter().zip(&t) {
                coordinates[v - 1] = x;
            }
            let rank = CellIndex::lex_rank(levels, &coordinates);
            CellIndex { coordinates, rank }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowLabel {
    pub facet: Vec<usize>,
    pub assignment: Vec<u32>,
}

/// The 0/1 matrix `A(S)` with its row and column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginMatrix {
    pub entries: IntMatrix,
    pub row_labels: Vec<RowLabel>,
    pub col_labels: Vec<CellIndex>,
}

impl MarginMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.entries
    }
}

pub fn margin_matrix(model: &HierarchicalModel) -> MarginMatrix {
    model.margin_matrix()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedFamily {
    /// All proper subsets of `[n-2]`.
    B,
    /// `B_n` plus the singleton `{n-1}`.
    Gamma,
    /// `logit(Γ_n)`.
    Delta,
    /// All edges of the complete graph on `[n]`.
    GraphEdges,
}

impl NamedFamily {
    pub fn min_n(self) -> usize {
        match self {
            NamedFamily::GraphEdges => 3,
            _ => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedFamily::B => "B",
            NamedFamily::Gamma => "Gamma",
            NamedFamily::Delta => "Delta",
            NamedFamily::GraphEdges => "graph-edges",
        }
    }
}

impl std::str::FromStr for NamedFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(NamedFamily::B),
            "gamma" | "g" => Ok(NamedFamily::Gamma),
            "delta" | "d" => Ok(NamedFamily::Delta),
            "graph-edges" | "graph" | "edges" => Ok(NamedFamily::GraphEdges),
            _ => Err(Error::InvalidArgument(format!("unknown model family {s:?}"))),
        }
    }
}

fn k_subsets(elems: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if elems.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &e) in elems.iter().enumerate() {
        for mut rest in k_subsets(&elems[i + 1..], k - 1) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

fn b_facets(n: usize) -> Vec<Vec<usize>> {
    let ground: Vec<usize> = (1..=n - 2).collect();
    k_subsets(&ground, n - 3)
}

pub fn build_named_model(family: NamedFamily, n: usize) -> Result<HierarchicalModel> {
    if n < family.min_n() {
        return Err(Error::FamilyTooSmall { family: family.name(), n, min: family.min_n() });
    }
    let model = match family {
        NamedFamily::B => HierarchicalModel::binary(SimplicialComplex::new(&b_facets(n), n - 2)?),
        NamedFamily::Gamma => {
            let mut facets = b_facets(n);
            facets.push(vec![n - 1]);
            HierarchicalModel::binary(SimplicialComplex::new(&facets, n - 1)?)
        }
        NamedFamily::Delta => logit(&build_named_model(NamedFamily::Gamma, n)?),
        NamedFamily::GraphEdges => {
            let ground: Vec<usize> = (1..=n).collect();
            HierarchicalModel::binary(SimplicialComplex::new(&k_subsets(&ground, 2), n)?)
        }
    };
    Ok(model)
}

/// `logit(S) = { T ∪ {m+1} : T facet of S } ∪ { [m] }` on one extra binary variable.
pub fn logit(model: &HierarchicalModel) -> HierarchicalModel {
    let m = model.ground_size();
    let mut facets: Vec<Vec<usize>> = model
        .facets()
        .iter()
        .map(|f| {
            let mut g = f.clone();
            g.push(m + 1);
            g
        })
        .collect();
    facets.push((1..=m).collect());
    let complex = SimplicialComplex::new(&facets, m + 1).expect("logit facets are in range");
    let mut levels = model.levels().to_vec();
    levels.push(2);
    HierarchicalModel { complex, levels }
}

/// The Lawrence lifting `[[A, 0], [0, A], [I, I]]`.
pub fn lawrence_lift(a: &IntMatrix) -> IntMatrix {
    let (r, n) = (a.rows(), a.cols());
    let zero = IntMatrix::zeros(r, n);
    let id = IntMatrix::identity(n);
    IntMatrix::block(&[vec![a, &zero], vec![&zero, a], vec![&id, &id]]).expect("blocks share shapes")
}

/// `b = A u` for a nonnegative table `u`.
pub fn margins_of(a: &IntMatrix, u: &[i64]) -> Result<Vec<i64>> {
    if u.iter().any(|&x| x < 0) {
        return Err(Error::InvalidArgument("table entries must be nonnegative".into()));
    }
    a.mul_vec(u)
}

fn require_binary_family(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::FamilyTooSmall { family: "Gamma/Delta", n, min: 4 });
    }
    Ok(())
}

/// `A(B_n)` with lexicographic columns over `{0,1}^{n-2}`.
pub fn b_matrix(n: usize) -> Result<IntMatrix> {
    Ok(build_named_model(NamedFamily::B, n)?.margin_matrix().into_matrix())
}

/// `Γ^n` with all `(i|0)` columns before the `(i|1)` columns.
pub fn gamma_matrix(n: usize) -> Result<IntMatrix> {
    require_binary_family(n)?;
    let model = build_named_model(NamedFamily::Gamma, n)?;
    let mut order = vec![n - 1];
    order.extend(1..=n - 2);
    Ok(model.margin_matrix_ordered(&order)?.into_matrix())
}

/// `Δ^n`, the Lawrence lifting of `Γ^n`.
pub fn delta_matrix(n: usize) -> Result<IntMatrix> {
    Ok(lawrence_lift(&gamma_matrix(n)?))
}

/// The margin matrix of a named family, with `Γ^n`/`Δ^n` in the column order
/// that puts `(0|0|0)` first (see [`gamma_matrix`]).
pub fn named_matrix(family: NamedFamily, n: usize) -> Result<IntMatrix> {
    match family {
        NamedFamily::B => b_matrix(n),
        NamedFamily::Gamma => gamma_matrix(n),
        NamedFamily::Delta => delta_matrix(n),
        NamedFamily::GraphEdges => Ok(build_named_model(family, n)?.margin_matrix().into_matrix()),
    }
}

/// Column positions in `Γ^n` and `Δ^n`.
///
/// `i` is a bit pattern over `{0,1}^{n-2}` read big-endian (its integer value
/// is its lexicographic rank), `l` is the value of variable `n-1` and the copy
/// bit is the value of variable `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SullivantIndexing {
    pub n: usize,
}

impl SullivantIndexing {
    pub fn new(n: usize) -> Result<Self> {
        require_binary_family(n)?;
        Ok(Self { n })
    }

    /// `2^{n-2}`, the number of patterns `i`.
    pub fn patterns(&self) -> usize {
        1 << (self.n - 2)
    }

    pub fn gamma_cols(&self) -> usize {
        2 * self.patterns()
    }

    pub fn delta_cols(&self) -> usize {
        4 * self.patterns()
    }

    pub fn gamma(&self, i: usize, l: usize) -> usize {
        debug_assert!(i < self.patterns() && l < 2);
        l * self.patterns() + i
    }

    pub fn delta(&self, i: usize, l: usize, copy: usize) -> usize {
        debug_assert!(copy < 2);
        copy * self.gamma_cols() + self.gamma(i, l)
    }

    /// Inverse of [`Self::delta`].
    pub fn delta_label(&self, col: usize) -> (usize, usize, usize) {
        let copy = col / self.gamma_cols();
        let rest = col % self.gamma_cols();
        (rest % self.patterns(), rest / self.patterns(), copy)
    }
}

/// Parses a model file: `{"n": 3, "levels": [2,2,2], "facets": [[1,2],[1,3]]}`.
pub fn parse_model_file(text: &str) -> Result<HierarchicalModel> {
    #[derive(Deserialize)]
    struct ModelFile {
        n: usize,
        #[serde(default)]
        levels: Option<Vec<u32>>,
        facets: Vec<Vec<usize>>,
    }
    let raw: ModelFile = serde_json::from_str(text)?;
    let complex = SimplicialComplex::new(&raw.facets, raw.n)?;
    match raw.levels {
        Some(levels) => HierarchicalModel::new(complex, levels),
        None => Ok(HierarchicalModel::binary(complex)),
    }
}

pub fn model_to_file(model: &HierarchicalModel) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "n": model.ground_size(),
        "levels": model.levels(),
        "facets": model.facets(),
    }))
    .expect("model serializes")
}
