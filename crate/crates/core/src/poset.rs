//! Finite posets, the cluster posets `P_n^{m,a,b}` / `Q_n^{m,a,b}`, and an
//! exact linear-extension counter over the lattice of order ideals.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{invalid, resource, Result};
use crate::exactcount::{exact_count, CountInteger, Variant};

/// Largest poset accepted by [`count_linear_extensions_bruteforce`].
pub const MAX_BRUTEFORCE_ELEMENTS: usize = 24;

/// The tuple `(m, a, b, n)` with `1 <= a < b <= m` and `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClusterParams {
    pub m: usize,
    pub a: usize,
    pub b: usize,
    pub n: usize,
}

impl ClusterParams {
    pub fn new(m: usize, a: usize, b: usize, n: usize) -> Result<Self> {
        if !(1 <= a && a < b && b <= m) {
            return Err(invalid(format!("need 1 <= a < b <= m, got m={m} a={a} b={b}")));
        }
        if n == 0 {
            return Err(invalid("need n >= 1"));
        }
        Ok(Self { m, a, b, n })
    }

    /// `d = b - a`.
    pub fn d(&self) -> usize {
        self.b - self.a
    }

    /// Coefficient of `n log n` in `log e(P_n)`: `m - b + a - 1`.
    pub fn leading(&self) -> usize {
        self.m - self.b + self.a - 1
    }

    /// `|P_n| = (m-1)n + 1`.
    pub fn p_size(&self) -> usize {
        (self.m - 1) * self.n + 1
    }

    /// `|Q_n| = (m-1)n + m - b + a`.
    pub fn q_size(&self) -> usize {
        (self.m - 1) * self.n + self.m - self.b + self.a
    }

    pub fn size(&self, variant: Variant) -> usize {
        match variant {
            Variant::P => self.p_size(),
            Variant::Q => self.q_size(),
        }
    }

    /// Parameters of the order-dual poset: `(m, m+1-b, m+1-a, n)`.
    pub fn mirror(&self) -> Self {
        Self { m: self.m, a: self.m + 1 - self.b, b: self.m + 1 - self.a, n: self.n }
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.m, self.a, self.b, n)
    }

    /// Canonical label of `A(i, j)`: the glued element `A(i+1, a)` is stored
    /// as `A(i, b)` for `1 <= i <= n-1`.
    pub fn canonical(&self, chain: usize, pos: usize) -> Label {
        if pos == self.a && chain >= 2 && chain <= self.n {
            Label::Cluster { chain: chain - 1, pos: self.b }
        } else {
            Label::Cluster { chain, pos }
        }
    }

    /// Labels of the spine `X_0 < X_1 < … < X_n` (`X_0 = A(1,a)`, `X_i = A(i,b)`).
    pub fn spine(&self) -> Vec<Label> {
        std::iter::once(self.canonical(1, self.a)).chain((1..=self.n).map(|i| self.canonical(i, self.b))).collect()
    }
}

impl fmt::Display for ClusterParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} a={} b={} n={}", self.m, self.a, self.b, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `A(chain, pos)` of a cluster poset.
    Cluster { chain: usize, pos: usize },
    /// Element of a poset built without cluster structure.
    Plain(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Cluster { chain, pos } => write!(f, "A({chain},{pos})"),
            Label::Plain(k) => write!(f, "x{k}"),
        }
    }
}

/// Bitset rows of the strict order: bit `y` of row `x` is set iff `x < y`.
#[derive(Debug, Clone)]
struct Reachability {
    words: usize,
    rows: Vec<u64>,
}

impl Reachability {
    fn get(&self, x: usize, y: usize) -> bool {
        self.rows[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }
}

/// A finite poset given by generating relations `x < y`.
#[derive(Debug, Clone)]
pub struct FinitePoset {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    relations: Vec<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    topo: Vec<usize>,
    closure: OnceLock<Reachability>,
}

impl FinitePoset {
    /// Fails when a relation refers to a missing element, is reflexive, or
    /// when the relations contain a directed cycle.
    pub fn new(labels: Vec<Label>, relations: Vec<(usize, usize)>) -> Result<Self> {
        let len = labels.len();
        let mut index = HashMap::with_capacity(len);
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(invalid(format!("duplicate label {l}")));
            }
        }
        let mut preds = vec![Vec::new(); len];
        let mut succs = vec![Vec::new(); len];
        let mut rels = Vec::with_capacity(relations.len());
        for &(x, y) in &relations {
            if x >= len || y >= len {
                return Err(invalid(format!("relation ({x},{y}) outside {len} elements")));
            }
            if x == y {
                return Err(invalid(format!("reflexive relation on element {x}")));
            }
            if !succs[x].contains(&y) {
                succs[x].push(y);
                preds[y].push(x);
                rels.push((x, y));
            }
        }
        let topo = kahn_order(&preds, &succs).ok_or_else(|| invalid("relations contain a directed cycle"))?;
        Ok(Self { labels, index, relations: rels, preds, succs, topo, closure: OnceLock::new() })
    }

    /// Poset on `len` elements labelled `x0, x1, …`.
    pub fn unlabeled(len: usize, relations: Vec<(usize, usize)>) -> Result<Self> {
        Self::new((0..len).map(Label::Plain).collect(), relations)
    }

    pub fn antichain(len: usize) -> Self {
        Self::unlabeled(len, Vec::new()).expect("antichain has no relations")
    }

    pub fn chain(len: usize) -> Self {
        let rel = (1..len).map(|i| (i - 1, i)).collect();
        Self::unlabeled(len, rel).expect("chain is acyclic")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> Label {
        self.labels[x]
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// The generating relations, deduplicated, in insertion order.
    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    pub fn predecessors(&self, x: usize) -> &[usize] {
        &self.preds[x]
    }

    /// A canonical topological order (Kahn, smallest index first).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    fn reachability(&self) -> &Reachability {
        self.closure.get_or_init(|| {
            let len = self.len();
            let words = len.div_ceil(64).max(1);
            let mut rows = vec![0u64; len * words];
            for &x in self.topo.iter().rev() {
                for &s in &self.succs[x] {
                    rows[x * words + s / 64] |= 1 << (s % 64);
                    for w in 0..words {
                        let v = rows[s * words + w];
                        rows[x * words + w] |= v;
                    }
                }
            }
            Reachability { words, rows }
        })
    }

    /// Strict order `x < y`.
    pub fn is_less(&self, x: usize, y: usize) -> bool {
        self.reachability().get(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.is_less(x, y) || self.is_less(y, x)
    }

    /// Cover relations (transitive reduction of the order), sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                if self.is_less(x, y) && !(0..self.len()).any(|z| self.is_less(x, z) && self.is_less(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Subposet induced on `keep` (order relations inherited from `self`).
    pub fn induced(&self, keep: &[usize]) -> Result<Self> {
        let labels = keep.iter().map(|&x| self.labels[x]).collect();
        let mut rel = Vec::new();
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.is_less(x, y) {
                    rel.push((i, j));
                }
            }
        }
        Self::new(labels, rel)
    }

    /// True iff `order` lists every element once and respects every relation.
    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &x) in order.iter().enumerate() {
            if x >= self.len() || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = k;
        }
        self.relations.iter().all(|&(x, y)| pos[x] < pos[y])
    }

    /// Hasse diagram in Graphviz DOT syntax, drawn bottom-to-top.
    pub fn to_dot(&self, name: &str) -> String {
        self.dot_with(name, &[])
    }

    fn dot_with(&self, name: &str, highlighted: &[usize]) -> String {
        let mut out = format!("digraph \"{name}\" {{\n  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");
        for (x, l) in self.labels.iter().enumerate() {
            if highlighted.contains(&x) {
                out.push_str(&format!("  \"{l}\" [color=purple, style=dashed];\n"));
            } else {
                out.push_str(&format!("  \"{l}\";\n"));
            }
        }
        for (x, y) in self.covers() {
            let (lx, ly) = (self.labels[x], self.labels[y]);
            if highlighted.contains(&x) || highlighted.contains(&y) {
                out.push_str(&format!("  \"{lx}\" -> \"{ly}\" [color=purple, style=dashed];\n"));
            } else {
                out.push_str(&format!("  \"{lx}\" -> \"{ly}\";\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn kahn_order(preds: &[Vec<usize>], succs: &[Vec<usize>]) -> Option<Vec<usize>> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..preds.len()).filter(|&x| indeg[x] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(preds.len());
    while let Some(Reverse(x)) = ready.pop() {
        order.push(x);
        for &s in &succs[x] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                ready.push(Reverse(s));
            }
        }
    }
    (order.len() == preds.len()).then_some(order)
}

struct ClusterBuilder {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    relations: Vec<(usize, usize)>,
}

impl ClusterBuilder {
    fn new() -> Self {
        Self { labels: Vec::new(), index: HashMap::new(), relations: Vec::new() }
    }

    fn element(&mut self, l: Label) -> usize {
        *self.index.entry(l).or_insert_with(|| {
            self.labels.push(l);
            self.labels.len() - 1
        })
    }

    fn chain(&mut self, ls: &[Label]) {
        let ids: Vec<usize> = ls.iter().map(|&l| self.element(l)).collect();
        self.relations.extend(ids.windows(2).map(|w| (w[0], w[1])));
    }

    fn finish(self) -> FinitePoset {
        FinitePoset::new(self.labels, self.relations).expect("cluster relations are acyclic")
    }
}

/// `P_n^{m,a,b}`: `n` chains `A(i,1) < … < A(i,m)` glued by `A(i,b) = A(i+1,a)`.
pub fn cluster_poset(params: &ClusterParams) -> FinitePoset {
    let p = ClusterParams::new(params.m, params.a, params.b, params.n).expect("validated params");
    let mut builder = ClusterBuilder::new();
    for i in 1..=p.n {
        let chain: Vec<Label> = (1..=p.m).map(|j| p.canonical(i, j)).collect();
        builder.chain(&chain);
    }
    let poset = builder.finish();
    debug_assert_eq!(poset.len(), p.p_size());
    poset
}

/// Indices of the elements `Q_n` adds to `P_n`.
pub fn added_elements(params: &ClusterParams, q: &FinitePoset) -> Vec<usize> {
    let top = (params.b + 1..=params.m).map(|j| Label::Cluster { chain: 0, pos: j });
    let bottom = (1..params.a).map(|j| Label::Cluster { chain: params.n + 1, pos: j });
    top.chain(bottom).filter_map(|l| q.index_of(l)).collect()
}

/// `Q_n^{m,a,b}`: `P_n` plus a chain `A(0,b+1) < … < A(0,m)` above `A(1,a)` and
/// a chain `A(n+1,1) < … < A(n+1,a-1)` below `A(n,b)`.
pub fn modified_cluster_poset(params: &ClusterParams) -> FinitePoset {
    let p = *params;
    let mut builder = ClusterBuilder::new();
    for i in 1..=p.n {
        let chain: Vec<Label> = (1..=p.m).map(|j| p.canonical(i, j)).collect();
        builder.chain(&chain);
    }
    let top: Vec<Label> = std::iter::once(p.canonical(1, p.a))
        .chain((p.b + 1..=p.m).map(|j| Label::Cluster { chain: 0, pos: j }))
        .collect();
    builder.chain(&top);
    let bottom: Vec<Label> = (1..p.a)
        .map(|j| Label::Cluster { chain: p.n + 1, pos: j })
        .chain(std::iter::once(p.canonical(p.n, p.b)))
        .collect();
    builder.chain(&bottom);
    let poset = builder.finish();
    debug_assert_eq!(poset.len(), p.q_size());
    poset
}

pub fn build(params: &ClusterParams, variant: Variant) -> FinitePoset {
    match variant {
        Variant::P => cluster_poset(params),
        Variant::Q => modified_cluster_poset(params),
    }
}

/// DOT rendering of `P_n` or `Q_n`; elements added by `Q_n` are drawn purple and dashed.
pub fn cluster_dot(params: &ClusterParams, variant: Variant) -> String {
    let poset = build(params, variant);
    let name = format!("{}_{}^{{{},{},{}}}", variant, params.n, params.m, params.a, params.b);
    let added = match variant {
        Variant::P => Vec::new(),
        Variant::Q => added_elements(params, &poset),
    };
    poset.dot_with(&name, &added)
}

/// Exact `e(P)` as the number of maximal chains in the lattice of order ideals.
///
/// Ideals are bitmasks over a topological renumbering; the DP sweeps ideals
/// layer by layer (by cardinality), keeping only two layers alive.
pub fn count_linear_extensions_bruteforce(poset: &FinitePoset) -> Result<CountInteger> {
    let len = poset.len();
    if len > MAX_BRUTEFORCE_ELEMENTS {
        return Err(resource(format!(
            "order-ideal DP supports at most {MAX_BRUTEFORCE_ELEMENTS} elements, poset has {len}"
        )));
    }
    let mut slot = vec![0usize; len];
    for (k, &x) in poset.topological_order().iter().enumerate() {
        slot[x] = k;
    }
    let mut below = vec![0u32; len];
    for x in 0..len {
        for &p in poset.predecessors(x) {
            below[slot[x]] |= 1 << slot[p];
        }
    }
    // 24! < 2^80, so u128 never overflows
    let mut layer: HashMap<u32, u128> = HashMap::from([(0, 1)]);
    for _ in 0..len {
        let mut next: HashMap<u32, u128> = HashMap::with_capacity(layer.len() * 2);
        for (&ideal, &ways) in &layer {
            for (e, &req) in below.iter().enumerate() {
                let bit = 1u32 << e;
                if ideal & bit == 0 && req & !ideal == 0 {
                    *next.entry(ideal | bit).or_insert(0) += ways;
                }
            }
        }
        layer = next;
    }
    let total = layer.values().copied().sum::<u128>();
    Ok(CountInteger::from(total))
}

/// Every linear extension, in lexicographic order of element indices.
/// Fails with a resource error once more than `limit` are found.
pub fn linear_extensions(poset: &FinitePoset, limit: usize) -> Result<Vec<Vec<usize>>> {
    fn go(
        poset: &FinitePoset,
        missing: &mut [usize],
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<()> {
        if prefix.len() == poset.len() {
            if out.len() == limit {
                return Err(resource(format!("more than {limit} linear extensions")));
            }
            out.push(prefix.clone());
            return Ok(());
        }
        for x in 0..poset.len() {
            if missing[x] == 0 && !prefix.contains(&x) {
                prefix.push(x);
                for &(u, v) in poset.relations() {
                    if u == x {
                        missing[v] -= 1;
                    }
                }
                let r = go(poset, missing, prefix, out, limit);
                for &(u, v) in poset.relations() {
                    if u == x {
                        missing[v] += 1;
                    }
                }
                prefix.pop();
                r?;
            }
        }
        Ok(())
    }
    let mut missing: Vec<usize> = (0..poset.len()).map(|x| poset.predecessors(x).len()).collect();
    let mut out = Vec::new();
    go(poset, &mut missing, &mut Vec::new(), &mut out, limit)?;
    Ok(out)
}

/// The three quantities of `e(P_n) <= e(Q_n) <= |Q_n|^{m-b+a-1} e(P_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichReport {
    pub p_count: CountInteger,
    pub q_count: CountInteger,
    pub upper: CountInteger,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.p_count <= self.q_count && self.q_count <= self.upper
    }
}

/// Counts via the order-ideal DP when both posets are small enough, and via
/// exact polynomial integration otherwise.
pub fn sandwich_report(params: &ClusterParams) -> Result<SandwichReport> {
    let count = |variant| {
        let size = params.size(variant);
        if size <= 18 {
            count_linear_extensions_bruteforce(&build(params, variant))
        } else {
            exact_count(params, variant)
        }
    };
    let p_count = count(Variant::P)?;
    let q_count = count(Variant::Q)?;
    let upper = CountInteger::from(params.q_size()).pow(params.leading() as u32) * &p_count;
    Ok(SandwichReport { p_count, q_count, upper })
}

pub fn sandwich_check(params: &ClusterParams) -> Result<bool> {
    Ok(sandwich_report(params)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(m: usize, a: usize, b: usize, n: usize) -> ClusterParams {
        ClusterParams::new(m, a, b, n).unwrap()
    }

    fn brute(p: &FinitePoset) -> u64 {
        count_linear_extensions_bruteforce(p).unwrap().to_u64().unwrap()
    }

    fn lab(chain: usize, pos: usize) -> Label {
        Label::Cluster { chain, pos }
    }

    #[test]
    fn params_validation() {
        assert!(ClusterParams::new(3, 2, 2, 1).is_err());
        assert!(ClusterParams::new(3, 0, 2, 1).is_err());
        assert!(ClusterParams::new(3, 1, 4, 1).is_err());
        assert!(ClusterParams::new(3, 1, 2, 0).is_err());
        let p = cp(8, 3, 5, 3);
        assert_eq!((p.d(), p.leading()), (2, 5));
        assert_eq!(p.mirror(), cp(8, 4, 6, 3));
    }

    #[test]
    fn cluster_examples() {
        let chain = cluster_poset(&cp(3, 1, 3, 2));
        assert_eq!(chain.len(), 5);
        assert_eq!(chain.covers().len(), 4);
        assert_eq!(brute(&chain), 1);

        let p = cluster_poset(&cp(3, 1, 2, 2));
        assert_eq!(p.len(), 5);
        let mut hasse: Vec<(Label, Label)> = p.covers().into_iter().map(|(x, y)| (p.label(x), p.label(y))).collect();
        hasse.sort();
        let mut expected =
            vec![(lab(1, 1), lab(1, 2)), (lab(1, 2), lab(1, 3)), (lab(1, 2), lab(2, 2)), (lab(2, 2), lab(2, 3))];
        expected.sort();
        assert_eq!(hasse, expected);

        assert_eq!(cluster_poset(&cp(8, 3, 5, 3)).len(), 22);
    }

    #[test]
    fn modified_examples() {
        let q = modified_cluster_poset(&cp(3, 1, 2, 2));
        assert_eq!(q.len(), 6);
        let top = q.index_of(lab(0, 3)).unwrap();
        assert!(q.is_less(q.index_of(lab(1, 1)).unwrap(), top));
        assert_eq!(added_elements(&cp(3, 1, 2, 2), &q), vec![top]);

        assert_eq!(modified_cluster_poset(&cp(8, 3, 5, 2)).len(), 20);
        for m in 2..7 {
            let params = cp(m, 1, m, 3);
            assert_eq!(modified_cluster_poset(&params).len(), cluster_poset(&params).len());
        }
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(brute(&FinitePoset::antichain(3)), 6);
        assert_eq!(brute(&FinitePoset::chain(5)), 1);
        assert_eq!(brute(&cluster_poset(&cp(3, 1, 2, 2))), 3);
        let too_big = FinitePoset::antichain(25);
        assert!(matches!(count_linear_extensions_bruteforce(&too_big), Err(crate::Error::Resource(_))));
    }

    #[test]
    fn antichain_counts_are_factorials() {
        let mut fact = 1u64;
        for k in 1..=8 {
            fact *= k as u64;
            assert_eq!(brute(&FinitePoset::antichain(k)), fact);
        }
    }

    #[test]
    fn cycles_rejected() {
        let err = FinitePoset::unlabeled(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, crate::Error::InvalidInput(_)));
        assert!(FinitePoset::unlabeled(2, vec![(0, 0)]).is_err());
        assert!(FinitePoset::unlabeled(2, vec![(0, 5)]).is_err());
    }

    #[test]
    fn enumeration_agrees_with_dp() {
        for params in [cp(3, 1, 2, 2), cp(4, 2, 3, 2), cp(4, 1, 3, 2), cp(5, 2, 4, 2)] {
            for variant in [Variant::P, Variant::Q] {
                let poset = build(&params, variant);
                let all = linear_extensions(&poset, 100_000).unwrap();
                assert!(all.iter().all(|o| poset.is_linear_extension(o)));
                assert_eq!(all.len() as u64, brute(&poset));
            }
        }
        assert!(linear_extensions(&FinitePoset::antichain(5), 10).is_err());
    }

    #[test]
    fn sandwich_examples() {
        let r = sandwich_report(&cp(3, 1, 2, 2)).unwrap();
        assert_eq!(r.p_count, CountInteger::from(3u32));
        assert_eq!(r.q_count, CountInteger::from(15u32));
        assert_eq!(r.upper, CountInteger::from(18u32));
        assert!(r.holds());
        for m in 2..6 {
            assert!(sandwich_check(&cp(m, 1, m, 3)).unwrap());
        }
        let params = cp(4, 1, 3, 2);
        assert_eq!(params.q_size(), 8);
        assert!(sandwich_check(&params).unwrap());
    }

    #[test]
    fn p1_is_a_chain() {
        for m in 2..=8 {
            for a in 1..m {
                for b in a + 1..=m {
                    assert_eq!(brute(&cluster_poset(&cp(m, a, b, 1))), 1);
                }
            }
        }
    }

    #[test]
    fn mirror_is_order_dual() {
        // A(i,j) -> A(n+1-i, m+1-j) reverses the order onto the mirrored poset
        for m in 2..=5 {
            for a in 1..m {
                for b in a + 1..=m {
                    for n in 1..=3 {
                        let params = cp(m, a, b, n);
                        let mir = params.mirror();
                        let p = cluster_poset(&params);
                        let q = cluster_poset(&mir);
                        let image: Vec<usize> = p
                            .labels()
                            .iter()
                            .map(|l| match *l {
                                Label::Cluster { chain, pos } => {
                                    q.index_of(mir.canonical(n + 1 - chain, m + 1 - pos)).unwrap()
                                }
                                Label::Plain(_) => unreachable!(),
                            })
                            .collect();
                        for x in 0..p.len() {
                            for y in 0..p.len() {
                                assert_eq!(p.is_less(x, y), q.is_less(image[y], image[x]));
                            }
                        }
                        assert_eq!(brute(&p), brute(&q));
                    }
                }
            }
        }
    }

    #[test]
    fn p_is_induced_in_q() {
        for (m, a, b, n) in [(3, 1, 2, 2), (5, 2, 4, 2), (6, 3, 4, 2), (8, 3, 5, 1)] {
            let params = cp(m, a, b, n);
            let p = cluster_poset(&params);
            let q = modified_cluster_poset(&params);
            let added = added_elements(&params, &q);
            assert_eq!(added.len(), params.leading());
            let keep: Vec<usize> = (0..q.len()).filter(|x| !added.contains(x)).collect();
            let sub = q.induced(&keep).unwrap();
            for x in 0..p.len() {
                for y in 0..p.len() {
                    let sx = sub.index_of(p.label(x)).unwrap();
                    let sy = sub.index_of(p.label(y)).unwrap();
                    assert_eq!(p.is_less(x, y), sub.is_less(sx, sy));
                }
            }
        }
    }

    #[test]
    fn spine_is_a_chain() {
        let params = cp(8, 3, 5, 4);
        let p = cluster_poset(&params);
        let ids: Vec<usize> = params.spine().iter().map(|&l| p.index_of(l).unwrap()).collect();
        assert_eq!(ids.len(), 5);
        assert!(ids.windows(2).all(|w| p.is_less(w[0], w[1])));
        assert_eq!(params.canonical(2, 3), lab(1, 5));
    }

    #[test]
    fn dot_export() {
        let dot = cluster_dot(&cp(3, 1, 2, 2), Variant::Q);
        assert!(dot.starts_with("digraph \"Q_2^{3,1,2}\""));
        assert!(dot.contains("\"A(1,2)\" -> \"A(2,2)\";"));
        assert!(dot.contains("\"A(0,3)\" [color=purple, style=dashed];"));
        assert_eq!(dot.matches("->").count(), 5);
    }
}
