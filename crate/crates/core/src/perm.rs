//! Permutations as consecutive patterns.
//!
//! Entries are 1-based values (`1..=m`) and occurrence positions are reported
//! 1-based as well; everything inside the module works with 0-based slices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{invalid, resource, Error, Result};

/// Largest text length accepted by the brute-force histogram routines.
pub const MAX_TEXT_LEN: usize = 10;
/// Largest pattern length accepted by [`nonoverlapping_fraction`].
pub const MAX_FRACTION_LEN: usize = 11;

/// A permutation of `{1, …, m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternPerm {
    entries: Vec<usize>,
}

impl PatternPerm {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(invalid("a permutation needs at least one entry"));
        }
        let mut seen = vec![false; m];
        for &v in &entries {
            if v == 0 || v > m {
                return Err(invalid(format!("entry {v} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(invalid(format!("entry {v} repeated")));
            }
        }
        Ok(Self { entries })
    }

    pub fn identity(m: usize) -> Self {
        Self { entries: (1..=m).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `π_1`.
    pub fn first(&self) -> usize {
        self.entries[0]
    }

    /// `π_m`.
    pub fn last(&self) -> usize {
        self.entries[self.entries.len() - 1]
    }

    /// `π^R_i = π_{m+1-i}`.
    pub fn reverse(&self) -> Self {
        Self { entries: self.entries.iter().rev().copied().collect() }
    }

    /// `π^C_i = m+1-π_i`.
    pub fn complement(&self) -> Self {
        let m = self.len();
        Self { entries: self.entries.iter().map(|&v| m + 1 - v).collect() }
    }

    /// `π_1 < π_m` and `π_1 + π_m ≤ m + 1`.
    pub fn is_standard(&self) -> bool {
        let (a, b) = (self.first(), self.last());
        a < b && a + b <= self.len() + 1
    }

    /// True when no prefix of length `2..=m-1` has the same standardization
    /// as the suffix of equal length.
    pub fn is_nonoverlapping(&self) -> Result<bool> {
        let m = self.len();
        if m < 2 {
            return Err(invalid("non-overlap is defined for m >= 2"));
        }
        Ok(nonoverlapping_slice(&self.entries))
    }

    /// The four members of the symmetry class `{π, π^R, π^C, π^{RC}}`.
    pub fn symmetry_class(&self) -> [PatternPerm; 4] {
        let r = self.reverse();
        let c = self.complement();
        let rc = r.complement();
        [self.clone(), r, c, rc]
    }

    /// Positions of the pattern values in increasing order: `inv[k]` is the
    /// 0-based index of the entry `k+1`.
    fn inverse_positions(&self) -> Vec<usize> {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.entries.iter().enumerate() {
            inv[v - 1] = i;
        }
        inv
    }
}

impl fmt::Display for PatternPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.entries {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for PatternPerm {
    type Err = Error;

    /// Accepts either a run of digits (`1342`) or a comma separated list
    /// (`1,3,4,2`), the latter being required once `m >= 10`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let entries: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|e| invalid(format!("{p:?}: {e}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| invalid(format!("unexpected character {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(entries)
    }
}

/// Order-isomorphic relabelling of a word of distinct positive integers.
pub fn standardize(word: &[usize]) -> Result<PatternPerm> {
    if word.is_empty() {
        return Err(invalid("cannot standardize an empty word"));
    }
    let mut order: Vec<usize> = (0..word.len()).collect();
    order.sort_by_key(|&i| word[i]);
    if order.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(invalid("standardize requires distinct entries"));
    }
    let mut entries = vec![0; word.len()];
    for (rank, &i) in order.iter().enumerate() {
        entries[i] = rank + 1;
    }
    Ok(PatternPerm { entries })
}

fn standardize_into(word: &[usize], out: &mut [usize]) {
    // small windows: counting smaller entries beats sorting
    for (i, &w) in word.iter().enumerate() {
        out[i] = 1 + word.iter().filter(|&&x| x < w).count();
    }
}

fn nonoverlapping_slice(p: &[usize]) -> bool {
    let m = p.len();
    let mut pre = vec![0; m];
    let mut suf = vec![0; m];
    (2..m).all(|i| {
        standardize_into(&p[..i], &mut pre[..i]);
        standardize_into(&p[m - i..], &mut suf[..i]);
        pre[..i] != suf[..i]
    })
}

/// 1-based start indices of the consecutive occurrences of `pattern` in `text`.
pub fn occurrences(pattern: &PatternPerm, text: &PatternPerm) -> Vec<usize> {
    let inv = pattern.inverse_positions();
    window_matches(&inv, text.entries()).map(|i| i + 1).collect()
}

fn window_matches<'a>(inv: &'a [usize], text: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    let m = inv.len();
    let starts = if m > text.len() { 0 } else { text.len() - m + 1 };
    (0..starts).filter(move |&i| inv.windows(2).all(|w| text[i + w[0]] < text[i + w[1]]))
}

fn count_matches(inv: &[usize], text: &[usize]) -> usize {
    window_matches(inv, text).count()
}

/// In-place lexicographic successor; false once the last permutation is reached.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Lexicographic iterator over `S_m`.
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = PatternPerm;

    fn next(&mut self) -> Option<PatternPerm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(PatternPerm { entries: current })
    }
}

pub fn all_permutations(m: usize) -> Permutations {
    Permutations { next: (m > 0).then(|| (1..=m).collect()) }
}

/// Folds `visit` over every permutation of `S_n` (values `1..=n`), splitting
/// the work by first entry across threads and merging the partial states.
fn fold_symmetric_group<T, I, V, M>(n: usize, init: I, visit: V, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &[usize]) + Sync,
    M: Fn(T, T) -> T + Sync,
{
    if n == 0 {
        let mut acc = init();
        visit(&mut acc, &[]);
        return acc;
    }
    (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut buf: Vec<usize> = std::iter::once(first).chain((1..=n).filter(|&v| v != first)).collect();
            loop {
                visit(&mut acc, &buf);
                if !next_permutation(&mut buf[1..]) {
                    break;
                }
            }
            acc
        })
        .reduce(&init, &merge)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

/// Fraction of `S_m` made of non-overlapping permutations.
pub fn nonoverlapping_fraction(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(invalid("non-overlap is defined for m >= 2"));
    }
    if m > MAX_FRACTION_LEN {
        return Err(resource(format!("enumeration of S_{m} exceeds the supported m <= {MAX_FRACTION_LEN}")));
    }
    let hits = fold_symmetric_group(
        m,
        || 0u64,
        |acc, p| {
            if nonoverlapping_slice(p) {
                *acc += 1;
            }
        },
        |x, y| x + y,
    );
    let total: u64 = (1..=m as u64).product();
    Ok(hits as f64 / total as f64)
}

/// Number of permutations of `S_n` with exactly `k` occurrences, for each `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceHistogram {
    pub n: usize,
    pub counts: BTreeMap<usize, BigUint>,
}

impl OccurrenceHistogram {
    fn from_raw(n: usize, raw: &[u64]) -> Self {
        let counts = raw.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k, BigUint::from(c))).collect();
        Self { n, counts }
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Permutations with no occurrence at all.
    pub fn avoiders(&self) -> BigUint {
        self.counts.get(&0).cloned().unwrap_or_default()
    }
}

fn check_text_len(n: usize) -> Result<()> {
    if n > MAX_TEXT_LEN {
        return Err(resource(format!("brute force over S_{n} exceeds the supported n <= {MAX_TEXT_LEN}")));
    }
    Ok(())
}

pub fn occurrence_histogram(pattern: &PatternPerm, n: usize) -> Result<OccurrenceHistogram> {
    Ok(occurrence_histograms(std::slice::from_ref(pattern), n)?.remove(0))
}

/// Histograms of several patterns from a single pass over `S_n`.
pub fn occurrence_histograms(patterns: &[PatternPerm], n: usize) -> Result<Vec<OccurrenceHistogram>> {
    check_text_len(n)?;
    let invs: Vec<Vec<usize>> = patterns.iter().map(PatternPerm::inverse_positions).collect();
    let width = n + 1;
    let raw = fold_symmetric_group(
        n,
        || vec![0u64; invs.len() * width],
        |acc, text| {
            for (slot, inv) in invs.iter().enumerate() {
                acc[slot * width + count_matches(inv, text)] += 1;
            }
        },
        |mut x, y| {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
            x
        },
    );
    let hists: Vec<OccurrenceHistogram> =
        raw.chunks(width).map(|chunk| OccurrenceHistogram::from_raw(n, chunk)).collect();
    debug_assert!(hists.iter().all(|h| h.total() == factorial(n)));
    Ok(hists)
}

/// Bounded evidence that `p` and `q` are (strongly) c-Wilf equivalent: compares
/// avoider counts, or full histograms when `strong`, for every `n <= n_max`.
pub fn cwilf_evidence(p: &PatternPerm, q: &PatternPerm, n_max: usize, strong: bool) -> Result<bool> {
    if p.len() != q.len() {
        return Err(invalid(format!("pattern lengths differ ({} vs {})", p.len(), q.len())));
    }
    check_text_len(n_max)?;
    let pair = [p.clone(), q.clone()];
    for n in 1..=n_max {
        let h = occurrence_histograms(&pair, n)?;
        let same = if strong { h[0] == h[1] } else { h[0].avoiders() == h[1].avoiders() };
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Histogram entries for `n = 1..=n_max`, compared as a whole.
type HistogramKey = Vec<Vec<(usize, BigUint)>>;

/// Partition of `S_m` into classes whose statistics agree for every
/// `n <= n_max`. Classes and their members are listed lexicographically.
pub fn classify(m: usize, n_max: usize, strong: bool) -> Result<Vec<Vec<PatternPerm>>> {
    if m == 0 {
        return Err(invalid("pattern length must be positive"));
    }
    check_text_len(n_max)?;
    let patterns: Vec<PatternPerm> = all_permutations(m).collect();
    let mut keys: Vec<HistogramKey> = vec![Vec::new(); patterns.len()];
    for n in 1..=n_max {
        for (key, h) in keys.iter_mut().zip(occurrence_histograms(&patterns, n)?) {
            let part = if strong { h.counts.into_iter().collect() } else { vec![(0, h.avoiders())] };
            key.push(part);
        }
    }
    let mut groups: HashMap<&HistogramKey, Vec<PatternPerm>> = HashMap::new();
    for (key, p) in keys.iter().zip(&patterns) {
        groups.entry(key).or_default().push(p.clone());
    }
    let mut classes: Vec<Vec<PatternPerm>> = groups.into_values().collect();
    classes.sort();
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PatternPerm {
        s.parse().unwrap()
    }

    #[test]
    fn standardize_examples() {
        assert_eq!(standardize(&[5, 2, 8]).unwrap(), p("213"));
        assert_eq!(standardize(&[1, 2, 3]).unwrap(), p("123"));
        assert_eq!(standardize(&[9, 3, 7, 4]).unwrap(), p("4132"));
        assert!(matches!(standardize(&[4, 1, 4]), Err(Error::InvalidInput(_))));
        assert!(standardize(&[]).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("1,3,4,2"), p("1342"));
        assert_eq!(p("1342").to_string(), "1342");
        let long = PatternPerm::identity(10);
        assert_eq!(long.to_string(), "1,2,3,4,5,6,7,8,9,10");
        assert_eq!(long.to_string().parse::<PatternPerm>().unwrap(), long);
        assert!("1335".parse::<PatternPerm>().is_err());
        assert!("1x2".parse::<PatternPerm>().is_err());
    }

    #[test]
    fn occurrence_examples() {
        assert_eq!(occurrences(&p("132"), &p("14253")), vec![1, 3]);
        assert!(occurrences(&p("12"), &p("21")).is_empty());
        assert_eq!(occurrences(&p("123"), &p("1234")), vec![1, 2]);
        assert!(occurrences(&p("1234"), &p("123")).is_empty());
    }

    #[test]
    fn symmetry_operator_examples() {
        assert_eq!(p("1342").reverse(), p("2431"));
        assert_eq!(p("1342").complement(), p("4213"));
        assert_eq!(p("1342").complement().reverse(), p("3124"));
    }

    #[test]
    fn standard_examples() {
        assert!(p("1342").is_standard());
        assert!(!p("231").is_standard());
        assert!(p("1432").is_standard());
    }

    #[test]
    fn nonoverlapping_examples() {
        assert!(!p("123").is_nonoverlapping().unwrap());
        assert!(p("1342").is_nonoverlapping().unwrap());
        assert!(p("132").is_nonoverlapping().unwrap());
        assert!(p("1").is_nonoverlapping().is_err());
    }

    #[test]
    fn nonoverlapping_fraction_small() {
        assert_eq!(nonoverlapping_fraction(2).unwrap(), 1.0);
        assert!((nonoverlapping_fraction(3).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        assert!(matches!(nonoverlapping_fraction(12), Err(Error::Resource(_))));
    }

    #[test]
    fn nonoverlapping_fraction_approaches_limit() {
        let frac = nonoverlapping_fraction(10).unwrap();
        assert!((frac - 0.36409).abs() < 0.02, "fraction {frac}");
    }

    #[test]
    fn histogram_examples() {
        let h = occurrence_histogram(&p("123"), 3).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(0, 5u32.into()), (1, 1u32.into())]));
        let h = occurrence_histogram(&p("12"), 2).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(0, 1u32.into()), (1, 1u32.into())]));
        assert_eq!(occurrence_histogram(&p("1342"), 8).unwrap(), occurrence_histogram(&p("1432"), 8).unwrap());
        assert!(matches!(occurrence_histogram(&p("12"), 11), Err(Error::Resource(_))));
    }

    #[test]
    fn histogram_matches_naive_count() {
        // independent route: standardize every window of every permutation
        let pat = p("2413");
        let mut naive = BTreeMap::<usize, BigUint>::new();
        for text in all_permutations(6) {
            let k = (0..=6 - 4).filter(|&i| standardize(&text.entries()[i..i + 4]).unwrap() == pat).count();
            *naive.entry(k).or_default() += 1u32;
        }
        assert_eq!(occurrence_histogram(&pat, 6).unwrap().counts, naive);
    }

    #[test]
    fn cwilf_examples() {
        assert!(cwilf_evidence(&p("1342"), &p("1432"), 8, true).unwrap());
        assert!(!cwilf_evidence(&p("123"), &p("132"), 5, false).unwrap());
        for q in all_permutations(4) {
            assert!(cwilf_evidence(&q, &q.reverse(), 7, true).unwrap(), "{q}");
        }
        assert!(cwilf_evidence(&p("12"), &p("123"), 3, true).is_err());
    }

    #[test]
    fn classify_s3() {
        // 123 ~ 321 and 132 ~ 213 ~ 231 ~ 312 already up to n = 6
        let classes = classify(3, 6, true).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0], vec![p("123"), p("321")]);
        assert_eq!(classes[1].len(), 4);
    }

    #[test]
    fn permutations_are_lexicographic() {
        let all: Vec<PatternPerm> = all_permutations(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    fn arb_perm(max_len: usize) -> impl Strategy<Value = PatternPerm> {
        (1..=max_len)
            .prop_flat_map(|m| Just((1..=m).collect::<Vec<usize>>()).prop_shuffle())
            .prop_map(|v| PatternPerm::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn standardize_is_idempotent(word in prop::collection::hash_set(1usize..1000, 1..12)) {
            let word: Vec<usize> = word.into_iter().collect();
            let once = standardize(&word).unwrap();
            prop_assert_eq!(standardize(once.entries()).unwrap(), once);
        }

        #[test]
        fn reverse_complement_involutions(q in arb_perm(9)) {
            prop_assert_eq!(q.reverse().reverse(), q.clone());
            prop_assert_eq!(q.complement().complement(), q.clone());
            prop_assert_eq!(q.reverse().complement(), q.complement().reverse());
        }

        #[test]
        fn standard_representative(q in arb_perm(9)) {
            prop_assume!(q.len() >= 2);
            let count = q.symmetry_class().iter().filter(|x| x.is_standard()).count();
            prop_assert!(count >= 1);
            if q.first() + q.last() != q.len() + 1 {
                prop_assert_eq!(count, 1);
            }
        }

        #[test]
        fn histogram_sums_to_factorial(q in arb_perm(4), n in 1usize..7) {
            let h = occurrence_histogram(&q, n).unwrap();
            prop_assert_eq!(h.total(), factorial(n));
        }
    }
}
