//! Uniform sampling of linear extensions with the lazy adjacent-transposition
//! chain, and the spine-height experiment on `P_n^{m,a,b}`.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, resource, Result};
use crate::poset::{cluster_poset, linear_extensions, ClusterParams, FinitePoset};
use crate::varfun::{format_sig, Profile};

/// Independent chains used by [`height_profile`]; fixed so output does not
/// depend on the thread pool.
pub const CHAINS: usize = 8;
/// Upper bound on total transitions accepted by one request.
pub const MAX_TOTAL_STEPS: u128 = 200_000_000_000;

/// A total order of all poset elements compatible with the partial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearExtension {
    pub order: Vec<usize>,
}

impl LinearExtension {
    /// `position[x]` = index of `x` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &x) in self.order.iter().enumerate() {
            pos[x] = k;
        }
        pos
    }
}

/// One chain of the sampler. Each step draws a position `i` and a fair coin;
/// on heads the pair at `i, i+1` is swapped when incomparable.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    poset: &'a FinitePoset,
    order: Vec<usize>,
    rng: ChaCha8Rng,
}

impl<'a> Sampler<'a> {
    pub fn new(poset: &'a FinitePoset, seed: u64) -> Self {
        Self::with_stream(poset, seed, 0)
    }

    /// Chain `stream` of the generator seeded with `seed`.
    pub fn with_stream(poset: &'a FinitePoset, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { poset, order: poset.topological_order().to_vec(), rng }
    }

    pub fn step(&mut self) {
        let len = self.order.len();
        if len < 2 {
            return;
        }
        let r = self.rng.random_range(0..2 * (len - 1));
        if r & 1 == 1 {
            return;
        }
        let i = r >> 1;
        let (x, y) = (self.order[i], self.order[i + 1]);
        if !self.poset.is_less(x, y) {
            debug_assert!(!self.poset.is_less(y, x));
            self.order.swap(i, i + 1);
        }
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn state(&self) -> &[usize] {
        &self.order
    }

    pub fn extension(&self) -> LinearExtension {
        LinearExtension { order: self.order.clone() }
    }
}

pub fn mcmc_sample(poset: &FinitePoset, steps: u64, seed: u64) -> LinearExtension {
    let mut sampler = Sampler::new(poset, seed);
    sampler.run(steps);
    debug_assert!(poset.is_linear_extension(sampler.state()));
    sampler.extension()
}

/// `⌈N³ ln N⌉` for an `N`-element poset.
pub fn default_burnin(len: usize) -> u64 {
    if len < 2 {
        return 0;
    }
    let n = len as f64;
    (n * n * n * n.ln()).ceil() as u64
}

/// `N²` for an `N`-element poset.
pub fn default_thinning(len: usize) -> u64 {
    (len * len).max(1) as u64
}

fn check_budget(chains: usize, burnin: u64, samples: usize, thinning: u64) -> Result<()> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if thinning == 0 {
        return Err(invalid("thinning must be at least 1"));
    }
    let total = chains as u128 * burnin as u128 + samples as u128 * thinning as u128;
    if total > MAX_TOTAL_STEPS {
        return Err(resource(format!("{total} transitions exceed the budget of {MAX_TOTAL_STEPS}")));
    }
    Ok(())
}

/// Sample counts per chain: `samples` split as evenly as possible.
fn split(samples: usize) -> Vec<usize> {
    let chains = CHAINS.min(samples);
    (0..chains).map(|k| samples / chains + usize::from(k < samples % chains)).collect()
}

/// Runs independent chains and hands every thinned state to `visit`,
/// returning one accumulator per chain in chain order.
fn collect<T, F>(
    poset: &FinitePoset,
    samples: usize,
    burnin: u64,
    thinning: u64,
    seed: u64,
    init: impl Fn() -> T + Sync,
    visit: F,
) -> Vec<T>
where
    T: Send,
    F: Fn(&mut T, &[usize]) + Sync,
{
    split(samples)
        .into_par_iter()
        .enumerate()
        .map(|(k, count)| {
            let mut sampler = Sampler::with_stream(poset, seed, k as u64);
            sampler.run(burnin);
            let mut acc = init();
            for _ in 0..count {
                sampler.run(thinning);
                visit(&mut acc, sampler.state());
            }
            acc
        })
        .collect()
}

/// Empirical frequencies of extensions over `samples` thinned draws.
pub fn extension_frequencies(
    poset: &FinitePoset,
    samples: usize,
    burnin: u64,
    thinning: u64,
    seed: u64,
) -> Result<HashMap<Vec<usize>, u64>> {
    check_budget(CHAINS.min(samples), burnin, samples, thinning)?;
    let parts = collect(poset, samples, burnin, thinning, seed, HashMap::new, |acc, state| {
        *acc.entry(state.to_vec()).or_insert(0) += 1;
    });
    let mut total = HashMap::new();
    for part in parts {
        for (k, v) in part {
            *total.entry(k).or_insert(0) += v;
        }
    }
    Ok(total)
}

/// Total-variation distance between the sampler's empirical distribution and
/// the uniform distribution over all extensions (enumerated, at most `max_extensions`).
pub fn uniformity_tv(poset: &FinitePoset, samples: usize, seed: u64, max_extensions: usize) -> Result<f64> {
    let all = linear_extensions(poset, max_extensions)?;
    if all.len() >= max_extensions {
        return Err(resource(format!("more than {} extensions", max_extensions - 1)));
    }
    let len = poset.len();
    let freq = extension_frequencies(poset, samples, default_burnin(len), default_thinning(len), seed)?;
    let uniform = 1.0 / all.len() as f64;
    let seen: f64 =
        all.iter().map(|e| (freq.get(e).copied().unwrap_or(0) as f64 / samples as f64 - uniform).abs()).sum();
    let unknown = freq.keys().filter(|k| !all.contains(k)).count();
    debug_assert_eq!(unknown, 0);
    Ok(0.5 * seen)
}

/// Mean normalized spine heights from the sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightProfile {
    pub params: ClusterParams,
    /// Mean of `(#elements before X_i) / (|P| - 1)`, `i = 0..=n`.
    pub mean_heights: Vec<f64>,
    /// `f((i+1)/(n+2))`.
    pub reference: Vec<f64>,
    pub samples: usize,
    pub burnin: u64,
    pub thinning: u64,
    pub seed: u64,
    pub chains: usize,
}

impl HeightProfile {
    pub fn deviations(&self) -> Vec<f64> {
        self.mean_heights.iter().zip(&self.reference).map(|(h, r)| (h - r).abs()).collect()
    }

    /// CSV with header `i,mean_height,reference_f,abs_deviation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,mean_height,reference_f,abs_deviation\n");
        for (i, ((h, r), dev)) in self.mean_heights.iter().zip(&self.reference).zip(self.deviations()).enumerate() {
            let _ = writeln!(out, "{i},{},{},{}", format_sig(*h), format_sig(*r), format_sig(dev));
        }
        out
    }
}

/// Burn-in and thinning default to [`default_burnin`] and [`default_thinning`]
/// of `|P_n|`; every chain burns in separately.
pub fn height_profile(
    params: &ClusterParams,
    samples: usize,
    burnin: Option<u64>,
    thinning: Option<u64>,
    seed: u64,
) -> Result<HeightProfile> {
    let poset = cluster_poset(params);
    let len = poset.len();
    let burnin = burnin.unwrap_or_else(|| default_burnin(len));
    let thinning = thinning.unwrap_or_else(|| default_thinning(len));
    let chains = CHAINS.min(samples.max(1));
    check_budget(chains, burnin, samples, thinning)?;

    let spine: Vec<usize> =
        params.spine().into_iter().map(|l| poset.index_of(l).expect("spine label belongs to the poset")).collect();
    let parts = collect(
        &poset,
        samples,
        burnin,
        thinning,
        seed,
        || vec![0u64; spine.len()],
        |acc, state| {
            let mut remaining = spine.len();
            for (k, x) in state.iter().enumerate() {
                if let Some(i) = spine.iter().position(|s| s == x) {
                    acc[i] += k as u64;
                    remaining -= 1;
                    if remaining == 0 {
                        break;
                    }
                }
            }
        },
    );
    let denom = (samples as f64) * (len - 1) as f64;
    let mean_heights = (0..spine.len()).map(|i| parts.iter().map(|p| p[i]).sum::<u64>() as f64 / denom).collect();

    let profile = Profile::new(params.m, params.a, params.b)?;
    let n = params.n as f64;
    let reference = (0..=params.n).map(|i| profile.f((i as f64 + 1.0) / (n + 2.0))).collect::<Result<_>>()?;
    Ok(HeightProfile { params: *params, mean_heights, reference, samples, burnin, thinning, seed, chains })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationRow {
    pub i: usize,
    pub mean_height: f64,
    pub reference: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationReport {
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub rows: Vec<ConcentrationRow>,
}

pub fn concentration_report(profile: &HeightProfile) -> ConcentrationReport {
    let rows: Vec<ConcentrationRow> = profile
        .mean_heights
        .iter()
        .zip(&profile.reference)
        .enumerate()
        .map(|(i, (&h, &r))| ConcentrationRow { i, mean_height: h, reference: r, deviation: (h - r).abs() })
        .collect();
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let mean_deviation = rows.iter().map(|r| r.deviation).sum::<f64>() / rows.len() as f64;
    ConcentrationReport { max_deviation, mean_deviation, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{count_linear_extensions_bruteforce, Label};

    #[test]
    fn chain_has_one_state() {
        let chain = FinitePoset::chain(6);
        for seed in 0..5 {
            assert_eq!(mcmc_sample(&chain, 1000, seed).order, vec![0, 1, 2, 3, 4, 5]);
        }
        assert_eq!(mcmc_sample(&FinitePoset::antichain(1), 10, 0).order, vec![0]);
    }

    #[test]
    fn antichain_pair_is_fair() {
        let pair = FinitePoset::antichain(2);
        let trials = 10_000;
        let flipped = (0..trials).filter(|&s| mcmc_sample(&pair, 101, s).order == vec![1, 0]).count();
        let freq = flipped as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "freq={freq}");
    }

    #[test]
    fn deterministic_and_valid() {
        let p = cluster_poset(&ClusterParams::new(5, 2, 4, 3).unwrap());
        let x = mcmc_sample(&p, 5000, 42);
        assert_eq!(x, mcmc_sample(&p, 5000, 42));
        assert!(p.is_linear_extension(&x.order));
        let mut sampler = Sampler::new(&p, 9);
        for _ in 0..2000 {
            sampler.step();
            assert!(p.is_linear_extension(sampler.state()));
        }
    }

    #[test]
    fn small_cluster_poset_is_uniform() {
        let p = cluster_poset(&ClusterParams::new(3, 1, 2, 2).unwrap());
        let freq = extension_frequencies(&p, 30_000, 200, 25, 5).unwrap();
        assert_eq!(freq.len(), 3);
        for v in freq.values() {
            assert!((*v as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.02);
        }
        assert!(uniformity_tv(&p, 10_000, 1, 11).unwrap() < 0.05);
    }

    #[test]
    fn uniform_on_small_posets() {
        // every labelled DAG on 4 elements with few extensions
        let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let rel = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
            let poset = FinitePoset::unlabeled(4, rel).unwrap();
            if count_linear_extensions_bruteforce(&poset).unwrap().to_u64().unwrap() <= 10 {
                let tv = uniformity_tv(&poset, 10_000, mask as u64, 11).unwrap();
                assert!(tv < 0.05, "mask={mask} tv={tv}");
            }
        }
    }

    #[test]
    fn chain_heights_are_positions() {
        let params = ClusterParams::new(4, 1, 4, 5).unwrap();
        let prof = height_profile(&params, 16, Some(10), Some(3), 0).unwrap();
        let len = params.p_size() as f64;
        for (i, h) in prof.mean_heights.iter().enumerate() {
            assert!((h - (3 * i) as f64 / (len - 1.0)).abs() < 1e-15);
        }
        let report = concentration_report(&prof);
        let want = (0..=5).map(|i| ((3 * i) as f64 / (len - 1.0) - (i as f64 + 1.0) / 7.0).abs()).fold(0.0, f64::max);
        assert!((report.max_deviation - want).abs() < 1e-12);
    }

    #[test]
    fn profile_increases_along_spine() {
        let params = ClusterParams::new(3, 1, 2, 10).unwrap();
        let prof = height_profile(&params, 200, None, None, 3).unwrap();
        assert!(prof.mean_heights.windows(2).all(|w| w[0] < w[1]));
        assert!(prof.mean_heights.iter().all(|h| (0.0..=1.0).contains(h)));
        assert_eq!(prof.chains, CHAINS);
        let csv = prof.to_csv();
        assert!(csv.starts_with("i,mean_height,reference_f,abs_deviation\n0,"));
        assert_eq!(csv.lines().count(), 12);
        assert_eq!(prof, height_profile(&params, 200, None, None, 3).unwrap());
    }

    #[test]
    fn spine_lookup() {
        let params = ClusterParams::new(8, 3, 5, 2).unwrap();
        let p = cluster_poset(&params);
        assert!(p.index_of(Label::Cluster { chain: 2, pos: 5 }).is_some());
    }

    #[test]
    fn rejects_bad_budget() {
        let params = ClusterParams::new(3, 1, 2, 3).unwrap();
        assert!(height_profile(&params, 0, None, None, 0).is_err());
        assert!(height_profile(&params, 5, None, Some(0), 0).is_err());
        assert!(matches!(height_profile(&params, 5, Some(u64::MAX), None, 0), Err(crate::Error::Resource(_))));
    }
}
