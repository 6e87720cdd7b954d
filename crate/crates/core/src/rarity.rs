//! Sampling experiments on how often Sullivant margins and positive gaps
//! show up among margins of tables with a fixed total.
//!
//! Tables, not margins, are sampled: the margin of a random table is a proxy
//! for a random margin in the slice `M(q)`.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, sullivant_relation};
use crate::matrix::IntMatrix;
use crate::model::delta_matrix;
use crate::opt::{gap_with, unit_cost, IpOptions};
use crate::pairs::{margin_member, sullivant_pair, StandardPair};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// Uniform over all tables with the given total.
    UniformComposition,
    /// `q` independent cells drawn uniformly.
    MultinomialUniform,
}

impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-composition" | "uniform" => Ok(Self::UniformComposition),
            "multinomial-uniform" | "multinomial" => Ok(Self::MultinomialUniform),
            _ => Err(Error::InvalidArgument(format!("unknown distribution {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub n: usize,
    pub q: u64,
    pub samples: usize,
    pub seed: u64,
    pub distribution: Distribution,
}

/// Largest `n` for which [`rarity_run`] solves every sample exactly.
pub const MAX_RARITY_N: usize = 6;

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if !(4..=MAX_RARITY_N).contains(&self.n) {
            return Err(Error::InvalidArgument(format!("n must be in 4..={MAX_RARITY_N}, got {}", self.n)));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        1 << self.n
    }
}

/// The table drawn at position `index`; depends only on `(seed, index)`.
pub fn sample_table(config: &SampleConfig, index: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let cells = config.cells();
    let q = config.q as usize;
    let mut table = vec![0i64; cells];
    match config.distribution {
        Distribution::UniformComposition => {
            // Stars and bars: choose the positions of cells-1 bars among q+cells-1 slots.
            let mut bars = sample(&mut rng, q + cells - 1, cells - 1).into_vec();
            bars.sort_unstable();
            let mut prev = 0usize;
            for (k, &b) in bars.iter().enumerate() {
                table[k] = (b - prev) as i64;
                prev = b + 1;
            }
            table[cells - 1] = (q + cells - 1 - prev) as i64;
        }
        Distribution::MultinomialUniform => {
            for _ in 0..q {
                table[rng.gen_range(0..cells)] += 1;
            }
        }
    }
    table
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: u64,
    /// `None` when a solver budget was exceeded.
    #[serde(with = "rational::serde_opt_rational")]
    pub gap: Option<Rational>,
    /// Membership in the Sullivant pair for `k = 1..2^{n-3}-1`.
    pub hits: Vec<bool>,
    /// The point of the `k = 2^{n-3}-1` pair realizing the margin dominates
    /// `û_n − e(0|0|0)` coordinatewise.
    pub dominates_witness: bool,
}

/// Per-`n` data shared by all samples.
pub struct RarityContext {
    pub n: usize,
    pub matrix: IntMatrix,
    pub pairs: Vec<StandardPair>,
    witness: Vec<i64>,
    opts: IpOptions,
}

impl RarityContext {
    pub fn new(n: usize) -> Result<Self> {
        let rel = sullivant_relation(n)?;
        let pairs = (1..rel.alpha()).map(|k| sullivant_pair(n, k)).collect::<Result<_>>()?;
        let mut witness = rel.u_hat();
        witness[0] -= 1;
        Ok(Self { n, matrix: delta_matrix(n)?, pairs, witness, opts: IpOptions::default() })
    }

    /// Gap of `Δ^n·table` for cost `e(0|0|0)` and its Sullivant-pair memberships.
    pub fn analyze_table(&self, index: u64, table: &[i64]) -> Result<SampleOutcome> {
        let b = self.matrix.mul_vec(table)?;
        let c = unit_cost(self.matrix.cols(), 0);
        let gap = match gap_with(&self.matrix, &c, &b, self.opts) {
            Ok(r) => r.gap,
            Err(Error::BudgetExceeded(_)) => None,
            Err(e) => return Err(e),
        };
        let mut hits = Vec::with_capacity(self.pairs.len());
        let mut dominates_witness = false;
        for (j, p) in self.pairs.iter().enumerate() {
            let member = match margin_member(&b, p, &self.matrix, self.opts) {
                Ok(m) => m,
                Err(Error::BudgetExceeded(_)) => None,
                Err(e) => return Err(e),
            };
            if j + 1 == self.pairs.len() {
                dominates_witness = member.as_ref().is_some_and(|m| m.iter().zip(&self.witness).all(|(x, w)| x >= w));
            }
            hits.push(member.is_some());
        }
        Ok(SampleOutcome { index, gap, hits, dominates_witness })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapBucket {
    #[serde(with = "rational::serde_rational")]
    pub gap: Rational,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairHits {
    pub k: i64,
    pub hits: usize,
    pub fraction: f64,
    /// Smallest exact gap among hit samples.
    #[serde(with = "rational::serde_opt_rational")]
    pub min_gap: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RarityReport {
    pub config: SampleConfig,
    pub gap_histogram: Vec<GapBucket>,
    pub sullivant_hits: Vec<PairHits>,
    /// Samples hitting at least one Sullivant pair.
    pub any_hits: usize,
    pub hit_fraction: f64,
    /// Samples whose solver budget ran out; excluded from the histogram.
    pub budget_failures: usize,
    /// Hits whose realizing pair point dominates `û_n − e(0|0|0)`, and how
    /// many of those reach the full gap `2^{n-3}-1`.
    pub dominating_hits: usize,
    pub dominating_hits_with_full_gap: usize,
    pub dimensions: DimensionReport,
    pub note: String,
    #[serde(skip)]
    pub outcomes: Vec<SampleOutcome>,
}

impl RarityReport {
    /// One line per sample: `index,gap,hit_1,…`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,gap");
        for h in &self.sullivant_hits {
            s.push_str(&format!(",hit_k{}", h.k));
        }
        s.push('\n');
        for o in &self.outcomes {
            s.push_str(&o.index.to_string());
            s.push(',');
            s.push_str(&o.gap.as_ref().map(rational::render).unwrap_or_default());
            for &h in &o.hits {
                s.push_str(if h { ",1" } else { ",0" });
            }
            s.push('\n');
        }
        s
    }
}

pub fn rarity_run(config: &SampleConfig) -> Result<RarityReport> {
    config.validate()?;
    let ctx = RarityContext::new(config.n)?;
    let outcomes: Vec<SampleOutcome> = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| ctx.analyze_table(i, &sample_table(config, i)))
        .collect::<Result<_>>()?;
    let alpha = sullivant_relation(config.n)?.alpha();

    let mut histogram: BTreeMap<Rational, usize> = BTreeMap::new();
    for g in outcomes.iter().filter_map(|o| o.gap.clone()) {
        *histogram.entry(g).or_default() += 1;
    }
    let total = config.samples as f64;
    let sullivant_hits = (0..ctx.pairs.len())
        .map(|j| {
            let hit: Vec<&SampleOutcome> = outcomes.iter().filter(|o| o.hits[j]).collect();
            PairHits {
                k: j as i64 + 1,
                hits: hit.len(),
                fraction: hit.len() as f64 / total,
                min_gap: hit.iter().filter_map(|o| o.gap.clone()).min(),
            }
        })
        .collect();
    let any_hits = outcomes.iter().filter(|o| o.hits.iter().any(|&h| h)).count();
    let dominating: Vec<&SampleOutcome> = outcomes.iter().filter(|o| o.dominates_witness).collect();
    let full = rational::int(alpha - 1);
    Ok(RarityReport {
        config: *config,
        gap_histogram: histogram.into_iter().map(|(gap, count)| GapBucket { gap, count }).collect(),
        sullivant_hits,
        any_hits,
        hit_fraction: any_hits as f64 / total,
        budget_failures: outcomes.iter().filter(|o| o.gap.is_none()).count(),
        dominating_hits: dominating.len(),
        dominating_hits_with_full_gap: dominating.iter().filter(|o| o.gap.as_ref() == Some(&full)).count(),
        dimensions: dimension_report(config.n)?,
        note: "margins of sampled tables approximate a random margin of M(q)".into(),
        outcomes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: usize,
    /// `rank(Δ^n)`, the dimension of the margin cone.
    pub cone_dim: usize,
    /// Rank of the columns `σ̂ ∖ {(0|0|0)}`, the dimension of the shifted cone.
    pub shifted_dim: usize,
    pub slice_dim: usize,
    pub shifted_slice_dim: usize,
    pub difference: usize,
    /// Sullivant margins need table total `q >= threshold_q`.
    pub threshold_q: i64,
}

pub fn dimension_report(n: usize) -> Result<DimensionReport> {
    let rel = sullivant_relation(n)?;
    let d = delta_matrix(n)?;
    let cone_dim = rank(&d);
    let shifted_dim = rank(&d.select_columns(&rel.sigma_hat.without(0).to_vec()));
    Ok(DimensionReport {
        n,
        cone_dim,
        shifted_dim,
        slice_dim: cone_dim - 1,
        shifted_slice_dim: shifted_dim - 1,
        difference: cone_dim - shifted_dim,
        threshold_q: rel.alpha() - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(q: u64, distribution: Distribution) -> SampleConfig {
        SampleConfig { n: 4, q, samples: 50, seed: 7, distribution }
    }

    #[test]
    fn tables_have_the_right_total() {
        for dist in [Distribution::UniformComposition, Distribution::MultinomialUniform] {
            for q in [0, 1, 20] {
                let c = config(q, dist);
                for i in 0..20 {
                    let t = sample_table(&c, i);
                    assert_eq!(t.len(), 16);
                    assert!(t.iter().all(|&x| x >= 0));
                    assert_eq!(t.iter().sum::<i64>(), q as i64);
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = config(20, Distribution::UniformComposition);
        let a: Vec<_> = (0..10).map(|i| sample_table(&c, i)).collect();
        let b: Vec<_> = (0..10).map(|i| sample_table(&c, i)).collect();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        let other = SampleConfig { seed: 8, ..c };
        assert_ne!(sample_table(&other, 0), a[0]);
    }

    #[test]
    fn uniform_composition_is_uniform_on_a_tiny_case() {
        // Compositions of 2 into 16 parts: 136 of them; each should appear about 20000/136 times.
        let c = SampleConfig { n: 4, q: 2, samples: 1, seed: 1, distribution: Distribution::UniformComposition };
        let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for i in 0..20_000 {
            *counts.entry(sample_table(&c, i)).or_default() += 1;
        }
        assert_eq!(counts.len(), 136);
        let expected = 20_000.0 / 136.0;
        assert!(counts.values().all(|&v| (v as f64 - expected).abs() < 0.5 * expected));
    }

    #[test]
    fn zero_total() {
        let r = rarity_run(&config(0, Distribution::MultinomialUniform)).unwrap();
        assert_eq!(r.any_hits, 0);
        assert_eq!(r.gap_histogram, vec![GapBucket { gap: rational::zero(), count: 50 }]);
    }

    #[test]
    fn witness_table_is_a_hit() {
        let ctx = RarityContext::new(4).unwrap();
        let mut t = sullivant_relation(4).unwrap().u_hat();
        t[0] -= 1;
        let o = ctx.analyze_table(0, &t).unwrap();
        assert_eq!(o.gap, Some(rational::one()));
        assert_eq!(o.hits, vec![true]);
        assert!(o.dominates_witness);
    }

    #[test]
    fn report_totals() {
        let r = rarity_run(&config(6, Distribution::UniformComposition)).unwrap();
        let total: usize = r.gap_histogram.iter().map(|b| b.count).sum();
        assert_eq!(total + r.budget_failures, 50);
        assert_eq!(r.to_csv().lines().count(), 51);
        assert_eq!(r, rarity_run(&config(6, Distribution::UniformComposition)).unwrap());
    }

    #[test]
    fn dimensions() {
        let d4 = dimension_report(4).unwrap();
        assert_eq!(
            (d4.cone_dim, d4.shifted_dim, d4.slice_dim, d4.shifted_slice_dim, d4.threshold_q),
            (12, 9, 11, 8, 1)
        );
        let d5 = dimension_report(5).unwrap();
        assert_eq!(
            (d5.cone_dim, d5.shifted_dim, d5.slice_dim, d5.shifted_slice_dim, d5.threshold_q),
            (24, 17, 23, 16, 3)
        );
        assert_eq!(d5.difference, 7);
    }
}
