//! Exact counting and enumeration of rich words.
//!
//! Richness is prefix-closed: each append adds at most one distinct
//! palindrome, so a word whose prefix has a defect keeps that defect. The
//! search therefore walks only the tree of rich prefixes and prunes any
//! append that does not create a palindrome.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eertree::{palindromic_factors_naive, PalTree, Word};

/// Default cap on visited search nodes (roughly the number of rich prefixes).
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;
/// Default cap on words enumerated by the naive oracle.
pub const NAIVE_WORD_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("length must be at least 1")]
    ZeroLength,
    #[error("node budget of {budget} exhausted; counts so far are lower bounds")]
    BudgetExceeded { budget: u64, partial: CountTable },
    #[error("naive enumeration of {q}^{n} words exceeds the budget of {budget}")]
    NaiveBudget { q: u32, n: usize, budget: u64 },
    #[error("no rich word of length {n} found within {budget} pushes")]
    SampleBudget { n: usize, budget: u64 },
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Error)]
pub enum EnumerateError<E> {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("sink failed")]
    Sink(E),
}

/// Worker count and resource guard for the counting engine.
#[derive(Debug, Clone)]
pub struct CountOptions {
    /// 0 means one worker per available core.
    pub threads: usize,
    pub node_budget: u64,
    /// Use a tree with corrupted suffix links (fault-injection hook).
    #[doc(hidden)]
    pub corrupt_tree: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            threads: 1,
            node_budget: DEFAULT_NODE_BUDGET,
            corrupt_tree: false,
        }
    }
}

impl CountOptions {
    pub fn threads(threads: usize) -> Self {
        CountOptions {
            threads,
            ..Default::default()
        }
    }

    fn worker_count(&self) -> usize {
        if self.threads == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.threads
        }
    }

    fn tree(&self, q: u32) -> PalTree {
        if self.corrupt_tree {
            PalTree::with_corrupted_links(q)
        } else {
            PalTree::new(q)
        }
        .expect("q checked")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    #[serde(rename = "R", with = "decimal")]
    pub r: BigUint,
}

/// `R_q(n)` for `n = 1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub q: u32,
    pub rows: Vec<CountRow>,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom("bad integer"))
    }
}

impl CountTable {
    fn from_counts(q: u32, counts: &[BigUint]) -> CountTable {
        CountTable {
            q,
            rows: counts
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, r)| CountRow { n, r: r.clone() })
                .collect(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.rows.last().map_or(0, |r| r.n)
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.rows.iter().find(|r| r.n == n).map(|r| &r.r)
    }

    /// CSV with header `n,R`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,R\n");
        for row in &self.rows {
            let _ = writeln!(s, "{},{}", row.n, row.r);
        }
        s
    }

    /// JSON array of `{"n": .., "R": "<decimal>"}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("plain data")
    }

    pub fn rows_from_json(q: u32, json: &str) -> Result<CountTable, serde_json::Error> {
        Ok(CountTable {
            q,
            rows: serde_json::from_str(json)?,
        })
    }

    /// `R(1) = q`, `R(n) <= q R(n-1)` and `R(n) <= q^n`; returns the first
    /// violated relation.
    pub fn check_prefix_bounds(&self) -> Result<(), String> {
        let q = BigUint::from(self.q);
        let mut prev: Option<&BigUint> = None;
        for row in &self.rows {
            if row.n == 1 && row.r != q {
                return Err(format!("R(1) = {} but q = {}", row.r, q));
            }
            if let Some(p) = prev {
                if row.r > p * &q {
                    return Err(format!("R({}) = {} > q R({})", row.n, row.r, row.n - 1));
                }
            }
            if row.r > q.pow(row.n as u32) {
                return Err(format!("R({}) = {} > q^{}", row.n, row.r, row.n));
            }
            prev = Some(&row.r);
        }
        Ok(())
    }
}

fn validate(q: u32, n: usize) -> Result<(), CountError> {
    if q == 0 {
        return Err(CountError::EmptyAlphabet);
    }
    if n == 0 {
        return Err(CountError::ZeroLength);
    }
    Ok(())
}

/// Shared node budget; workers draw from it in chunks.
struct Budget {
    limit: u64,
    used: AtomicU64,
    blown: AtomicBool,
}

const CHUNK: u64 = 4096;

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            blown: AtomicBool::new(false),
        }
    }

    fn take(&self, k: u64) -> bool {
        if self.blown.load(Ordering::Relaxed) {
            return false;
        }
        let before = self.used.fetch_add(k, Ordering::Relaxed);
        if before + k > self.limit {
            self.blown.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Depth-first walk below the tree's current word. `counts[d]` gains one
/// for every rich word of length `d` visited.
struct Walker<'a> {
    q: u32,
    n_max: usize,
    counts: Vec<u64>,
    budget: &'a Budget,
    local: u64,
}

impl Walker<'_> {
    fn walk(&mut self, tree: &mut PalTree) -> bool {
        let depth = tree.word_len();
        if depth == self.n_max {
            return true;
        }
        for c in 0..self.q {
            if tree.push_unchecked(c) {
                self.counts[depth + 1] += 1;
                self.local += 1;
                if self.local == CHUNK {
                    self.local = 0;
                    if !self.budget.take(CHUNK) {
                        tree.pop().expect("just pushed");
                        return false;
                    }
                }
                let ok = self.walk(tree);
                tree.pop().expect("just pushed");
                if !ok {
                    return false;
                }
            } else {
                tree.pop().expect("just pushed");
            }
        }
        true
    }
}

/// Rich prefixes of length exactly `depth`, lexicographic.
fn prefixes(q: u32, depth: usize, opts: &CountOptions) -> Vec<Vec<u32>> {
    fn go(tree: &mut PalTree, q: u32, depth: usize, out: &mut Vec<Vec<u32>>) {
        if tree.word_len() == depth {
            out.push(tree.word().letters().iter().map(|l| l.0).collect());
            return;
        }
        for c in 0..q {
            if tree.push_unchecked(c) {
                go(tree, q, depth, out);
            }
            tree.pop().expect("just pushed");
        }
    }
    let mut out = Vec::new();
    go(&mut opts.tree(q), q, depth, &mut out);
    out
}

/// Exact `R_q(n)` for `n = 1..=n_max` with default options.
pub fn count_rich(q: u32, n_max: usize) -> Result<CountTable, CountError> {
    count_rich_with(q, n_max, &CountOptions::default())
}

/// Exact counts; the result is independent of the worker count.
pub fn count_rich_with(
    q: u32,
    n_max: usize,
    opts: &CountOptions,
) -> Result<CountTable, CountError> {
    validate(q, n_max)?;
    let workers = opts.worker_count();
    let budget = Budget::new(opts.node_budget);

    // split at the shallowest depth giving at least 8 tasks per worker
    let mut split = 0;
    let mut tasks = vec![Vec::new()];
    if workers > 1 {
        for d in 1..n_max {
            let p = prefixes(q, d, opts);
            split = d;
            let enough = p.len() >= 8 * workers;
            tasks = p;
            if enough {
                break;
            }
        }
    }

    let run = |prefix: &Vec<u32>| -> (Vec<u64>, bool) {
        let mut tree = opts.tree(q);
        for &c in prefix {
            tree.push_unchecked(c);
        }
        let mut w = Walker {
            q,
            n_max,
            counts: vec![0; n_max + 1],
            budget: &budget,
            local: 0,
        };
        let ok = w.walk(&mut tree) && budget.take(w.local);
        (w.counts, ok)
    };

    let results: Vec<(Vec<u64>, bool)> = if workers > 1 && tasks.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CountError::Pool(e.to_string()))?;
        pool.install(|| tasks.par_iter().map(run).collect())
    } else {
        tasks.iter().map(run).collect()
    };

    let mut totals = vec![BigUint::zero(); n_max + 1];
    if split > 0 {
        for d in 1..=split {
            totals[d] = BigUint::from(prefixes(q, d, opts).len());
        }
    }
    let mut complete = true;
    for (counts, ok) in &results {
        complete &= *ok;
        for (t, &c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    let table = CountTable::from_counts(q, &totals);
    if !complete || budget.blown.load(Ordering::Relaxed) {
        return Err(CountError::BudgetExceeded {
            budget: opts.node_budget,
            partial: table,
        });
    }
    Ok(table)
}

/// Oracle: count words of length `n` with `n` distinct palindromic factors
/// by checking every one of the `q^n` words.
pub fn count_rich_naive(q: u32, n: usize) -> Result<BigUint, CountError> {
    count_rich_naive_with_budget(q, n, NAIVE_WORD_BUDGET)
}

pub fn count_rich_naive_with_budget(q: u32, n: usize, budget: u64) -> Result<BigUint, CountError> {
    if q == 0 {
        return Err(CountError::EmptyAlphabet);
    }
    let total = BigUint::from(q).pow(n as u32);
    let total = match total.to_u64() {
        Some(t) if t <= budget => t,
        _ => return Err(CountError::NaiveBudget { q, n, budget }),
    };
    let mut digits = vec![0u32; n];
    let mut rich = 0u64;
    for _ in 0..total {
        let w = Word::from_indices(&digits);
        if palindromic_factors_naive(&w).len() == n {
            rich += 1;
        }
        // odometer increment, last position fastest
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    Ok(BigUint::from(rich))
}

/// Emit every rich word of length exactly `n`, lexicographically.
pub fn enumerate_rich<E, F>(q: u32, n: usize, mut sink: F) -> Result<u64, EnumerateError<E>>
where
    F: FnMut(&Word) -> Result<(), E>,
{
    validate(q, n)?;
    let mut tree = PalTree::new(q).expect("q checked");
    let mut emitted = 0;
    walk_emit(&mut tree, q, n, &mut sink, &mut emitted).map_err(EnumerateError::Sink)?;
    Ok(emitted)
}

/// Parallel enumeration; emission order is unspecified and the sink is
/// called concurrently.
pub fn par_enumerate_rich<E, F>(
    q: u32,
    n: usize,
    threads: usize,
    sink: F,
) -> Result<u64, EnumerateError<E>>
where
    E: Send,
    F: Fn(&Word) -> Result<(), E> + Sync,
{
    validate(q, n)?;
    let opts = CountOptions::threads(threads);
    let workers = opts.worker_count();
    let depth = (1..=n)
        .find(|&d| prefixes(q, d, &opts).len() >= 8 * workers)
        .unwrap_or(n);
    let tasks = prefixes(q, depth, &opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CountError::Pool(e.to_string()))?;
    let counts: Result<Vec<u64>, E> = pool.install(|| {
        tasks
            .par_iter()
            .map(|prefix| {
                let mut tree = PalTree::new(q).expect("q checked");
                for &c in prefix {
                    tree.push_unchecked(c);
                }
                let mut emitted = 0;
                let mut local = |w: &Word| sink(w);
                walk_emit(&mut tree, q, n, &mut local, &mut emitted)?;
                Ok(emitted)
            })
            .collect()
    });
    Ok(counts.map_err(EnumerateError::Sink)?.into_iter().sum())
}

fn walk_emit<E, F: FnMut(&Word) -> Result<(), E>>(
    tree: &mut PalTree,
    q: u32,
    n: usize,
    sink: &mut F,
    emitted: &mut u64,
) -> Result<(), E> {
    if tree.word_len() == n {
        *emitted += 1;
        return sink(&tree.word());
    }
    for c in 0..q {
        let rich = tree.push_unchecked(c);
        let r = if rich {
            walk_emit(tree, q, n, sink, emitted)
        } else {
            Ok(())
        };
        tree.pop().expect("just pushed");
        r?;
    }
    Ok(())
}

/// Pushes allowed to `sample_rich` before giving up.
pub const SAMPLE_PUSH_BUDGET: u64 = 1_000_000;

/// A rich word of length `n` found by seeded random descent with
/// backtracking. Deterministic per seed; NOT uniform over rich words.
pub fn sample_rich(q: u32, n: usize, seed: u64) -> Result<Word, CountError> {
    if q == 0 {
        return Err(CountError::EmptyAlphabet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = PalTree::new(q).expect("q checked");
    // per depth: letters still to try, in random order
    let mut stack: Vec<Vec<u32>> = Vec::with_capacity(n + 1);
    let shuffled = |rng: &mut ChaCha8Rng| {
        let mut v: Vec<u32> = (0..q).collect();
        v.shuffle(rng);
        v
    };
    stack.push(shuffled(&mut rng));
    let mut pushes = 0u64;
    while tree.word_len() < n {
        let Some(options) = stack.last_mut() else {
            break;
        };
        match options.pop() {
            Some(c) => {
                pushes += 1;
                if pushes > SAMPLE_PUSH_BUDGET {
                    break;
                }
                if tree.push_unchecked(c) {
                    stack.push(shuffled(&mut rng));
                } else {
                    tree.pop().expect("just pushed");
                }
            }
            None => {
                // dead end: retreat one letter
                stack.pop();
                if tree.pop().is_err() {
                    break;
                }
            }
        }
    }
    if tree.word_len() == n {
        Ok(tree.word())
    } else {
        Err(CountError::SampleBudget {
            n,
            budget: SAMPLE_PUSH_BUDGET,
        })
    }
}

/// Distinct rich words of length `n` (hash check for duplicates).
pub fn distinct_rich_words(q: u32, n: usize) -> Result<(u64, usize), CountError> {
    let mut seen = HashSet::new();
    let emitted = enumerate_rich(q, n, |w| {
        seen.insert(w.clone());
        Ok::<(), ()>(())
    })
    .map_err(|e| match e {
        EnumerateError::Count(c) => c,
        EnumerateError::Sink(()) => unreachable!(),
    })?;
    Ok((emitted, seen.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eertree::is_rich;

    fn rs(t: &CountTable) -> Vec<u64> {
        t.rows.iter().map(|r| r.r.to_u64().unwrap()).collect()
    }

    #[test]
    fn small_tables() {
        assert_eq!(rs(&count_rich(2, 3).unwrap()), vec![2, 4, 8]);
        assert_eq!(rs(&count_rich(1, 5).unwrap()), vec![1; 5]);
        assert_eq!(
            count_rich(2, 8).unwrap().get(8).unwrap(),
            &BigUint::from(252u32)
        );
        assert_eq!(count_rich(0, 3), Err(CountError::EmptyAlphabet));
        assert_eq!(count_rich(2, 0), Err(CountError::ZeroLength));
    }

    #[test]
    fn naive_oracle_agrees() {
        assert_eq!(count_rich_naive(2, 1).unwrap(), BigUint::from(2u32));
        let t = count_rich(2, 8).unwrap();
        assert_eq!(&count_rich_naive(2, 8).unwrap(), t.get(8).unwrap());
        let t = count_rich(3, 4).unwrap();
        assert_eq!(&count_rich_naive(3, 4).unwrap(), t.get(4).unwrap());
        assert!(matches!(
            count_rich_naive(2, 40),
            Err(CountError::NaiveBudget { .. })
        ));
    }

    #[test]
    fn budget_exceeded_reports_partial() {
        let opts = CountOptions {
            node_budget: 10_000,
            ..Default::default()
        };
        match count_rich_with(2, 30, &opts) {
            Err(CountError::BudgetExceeded { partial, .. }) => {
                assert_eq!(partial.rows.len(), 30);
                // lower bounds: the walk stopped inside the first subtree
                assert!(partial.get(1).unwrap() <= &BigUint::from(2u32));
                assert!(partial.get(30).unwrap() < &BigUint::from(10_000u32));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_small() {
        let mut got = Vec::new();
        let k = enumerate_rich(2, 2, |w| {
            got.push(w.to_string());
            Ok::<_, ()>(())
        })
        .unwrap();
        assert_eq!(k, 4);
        assert_eq!(got, vec!["aa", "ab", "ba", "bb"]);
        let mut got = Vec::new();
        enumerate_rich(1, 3, |w| {
            got.push(w.to_string());
            Ok::<_, ()>(())
        })
        .unwrap();
        assert_eq!(got, vec!["aaa"]);
    }

    #[test]
    fn enumerate_sink_error_propagates() {
        let r = enumerate_rich(2, 3, |w| {
            if w.to_string() == "aba" {
                Err("stop")
            } else {
                Ok(())
            }
        });
        assert!(matches!(r, Err(EnumerateError::Sink("stop"))));
    }

    #[test]
    fn enumeration_matches_counts() {
        let t = count_rich(2, 10).unwrap();
        for n in 1..=10 {
            let (k, distinct) = distinct_rich_words(2, n).unwrap();
            assert_eq!(BigUint::from(k), *t.get(n).unwrap());
            assert_eq!(k as usize, distinct);
        }
    }

    #[test]
    fn parallel_enumeration_same_set() {
        let seq = std::sync::Mutex::new(Vec::new());
        let k = par_enumerate_rich(2, 9, 4, |w| {
            seq.lock().unwrap().push(w.clone());
            Ok::<_, ()>(())
        })
        .unwrap();
        let mut par = seq.into_inner().unwrap();
        par.sort();
        let mut single = Vec::new();
        enumerate_rich(2, 9, |w| {
            single.push(w.clone());
            Ok::<_, ()>(())
        })
        .unwrap();
        assert_eq!(k, 488);
        assert_eq!(par, single);
    }

    #[test]
    fn sampling() {
        assert_eq!(sample_rich(1, 4, 7).unwrap().to_string(), "aaaa");
        for seed in 0..20 {
            let w = sample_rich(2, 50, seed).unwrap();
            assert_eq!(w.len(), 50);
            assert!(is_rich(&w));
            assert_eq!(w, sample_rich(2, 50, seed).unwrap());
        }
        let w = sample_rich(3, 0, 1).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn serialization() {
        let t = count_rich(2, 3).unwrap();
        assert_eq!(t.to_csv(), "n,R\n1,2\n2,4\n3,8\n");
        let json = t.to_json();
        assert!(json.contains("\"R\": \"8\""));
        assert_eq!(CountTable::rows_from_json(2, &json).unwrap(), t);
    }

    #[test]
    fn prefix_bounds_detect_violation() {
        let mut t = count_rich(2, 4).unwrap();
        assert!(t.check_prefix_bounds().is_ok());
        t.rows[2].r = BigUint::from(9u32);
        assert!(t.check_prefix_bounds().is_err());
    }
}
