//! Self-check suites: engine against oracle, table sanity, tower properties,
//! and the bound inequalities against exact counts.
//!
//! Each suite returns a [`SuiteOutcome`] with counts of checks, violations
//! and uncertified (indeterminate) verdicts. Indeterminate verdicts are not
//! violations.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{self, BoundConfig, KSequence};
use crate::interval::Interval;
use crate::richcount::{self, CountError, CountOptions, CountTable};
use crate::tower::{Cmp3, Level, TowerReal};

/// Failures kept verbatim per suite.
const MAX_DETAILS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub indeterminate: u64,
    pub details: Vec<String>,
    pub millis: u128,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            indeterminate: 0,
            details: Vec::new(),
            millis: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn indeterminate_rate(&self) -> f64 {
        if self.checked == 0 {
            0.0
        } else {
            self.indeterminate as f64 / self.checked as f64
        }
    }

    fn pass(&mut self) {
        self.checked += 1;
    }

    fn unsure(&mut self) {
        self.checked += 1;
        self.indeterminate += 1;
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.checked += 1;
        self.violations += 1;
        if self.details.len() < MAX_DETAILS {
            self.details.push(what());
        }
    }

    /// Record a verdict that must not be `Greater`.
    fn not_greater(&mut self, c: Cmp3, what: impl FnOnce() -> String) {
        match c {
            Cmp3::Less => self.pass(),
            Cmp3::Indeterminate => self.unsure(),
            Cmp3::Greater => self.fail(what),
        }
    }

    fn timed(mut self, start: Instant) -> Self {
        self.millis = start.elapsed().as_millis();
        self
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checks, {} violations, {} indeterminate ({:.2}%), {} ms",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.violations,
            self.indeterminate,
            100.0 * self.indeterminate_rate(),
            self.millis
        )?;
        for d in &self.details {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

/// Engine counts equal the brute-force oracle for every `n <= n_max`.
pub fn oracle_equivalence(
    q: u32,
    n_max: usize,
    opts: &CountOptions,
    naive_budget: u64,
) -> Result<SuiteOutcome, CountError> {
    let start = Instant::now();
    let mut out = SuiteOutcome::new(&format!("oracle equivalence q={q} n<={n_max}"));
    let table = richcount::count_rich_with(q, n_max, opts)?;
    for row in &table.rows {
        let naive = richcount::count_rich_naive_with_budget(q, row.n, naive_budget)?;
        if naive == row.r {
            out.pass();
        } else {
            out.fail(|| format!("n={}: engine {} vs oracle {}", row.n, row.r, naive));
        }
    }
    Ok(out.timed(start))
}

/// `R(1) = q`, `R(n) <= q R(n-1)` and `R(n) <= q^n`.
pub fn prefix_bounds(table: &CountTable) -> SuiteOutcome {
    let start = Instant::now();
    let mut out = SuiteOutcome::new(&format!("prefix bounds q={}", table.q));
    out.checked = table.rows.len() as u64;
    if let Err(e) = table.check_prefix_bounds() {
        out.violations = 1;
        out.details.push(e);
    }
    out.timed(start)
}

/// `ln*(e↑↑n) = n` for `n <= max_n`.
pub fn tetration_iter_log(max_n: u32) -> SuiteOutcome {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("ln* of e-towers");
    for n in 0..=max_n {
        let t = TowerReal::tetrate(&TowerReal::e(), n).expect("base e");
        match t.iter_log() {
            Some(l) if l == n => out.pass(),
            Some(l) => out.fail(|| format!("ln*(e^^{n}) = {l}")),
            None => out.fail(|| format!("ln*(e^^{n}) uncertified")),
        }
    }
    out.timed(start)
}

/// A random point in `(1, e↑↑(max_height - 1)]`, spread evenly over levels.
pub fn sample_above_one<R: Rng>(rng: &mut R, max_height: u32) -> TowerReal {
    // a few exact towers so the boundary cases get exercised
    if rng.random_ratio(1, 20) {
        let k = rng.random_range(2..=max_height);
        return TowerReal::point(Level::new(k, 0.0).expect("valid"));
    }
    let h = rng.random_range(1..max_height);
    let mut r: f64 = rng.random();
    if r == 0.0 {
        r = f64::MIN_POSITIVE;
    }
    TowerReal::point(Level::new(h, r).expect("valid"))
}

/// Which tower property to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerProperty {
    /// `e↑↑(ln*x - 1) < x <= e↑↑ln*x`
    Sandwich,
    /// `ln*(e^x) <= ln*x + 1`
    ExpStep,
    /// `x <= e↑↑y` implies `ln*x <= y + 1`
    BelowTowerLog,
    /// `ln*x <= y` implies `x <= e↑↑y`
    LogBelowTower,
    /// `x + y <= e↑↑(ln*x + ln*y)`
    SumUnderTower,
    /// `xy <= e↑↑(ln*x + ln*y)`
    ProductUnderTower,
    /// `x^y <= e↑↑(ln*x + ln*y)`
    PowerUnderTower,
}

impl TowerProperty {
    pub const ALL: [TowerProperty; 7] = [
        TowerProperty::Sandwich,
        TowerProperty::ExpStep,
        TowerProperty::BelowTowerLog,
        TowerProperty::LogBelowTower,
        TowerProperty::SumUnderTower,
        TowerProperty::ProductUnderTower,
        TowerProperty::PowerUnderTower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TowerProperty::Sandwich => "tower sandwich",
            TowerProperty::ExpStep => "ln* of exp",
            TowerProperty::BelowTowerLog => "below tower bounds ln*",
            TowerProperty::LogBelowTower => "ln* bounds tower",
            TowerProperty::SumUnderTower => "sum under tower",
            TowerProperty::ProductUnderTower => "product under tower",
            TowerProperty::PowerUnderTower => "power under tower",
        }
    }
}

/// Sample one property `samples` times from a seeded stream.
pub fn tower_property(prop: TowerProperty, samples: u64, seed: u64) -> SuiteOutcome {
    let start = Instant::now();
    let mut out = SuiteOutcome::new(prop.name());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ prop as u64);
    for _ in 0..samples {
        match prop {
            TowerProperty::Sandwich => {
                let x = sample_above_one(&mut rng, 5);
                let Some(l) = x.iter_log() else {
                    out.unsure();
                    continue;
                };
                let below = TowerReal::e_tower(l - 1).cmp(&x);
                let above = x.cmp(&TowerReal::e_tower(l));
                match (below, above) {
                    (Cmp3::Greater, _) | (_, Cmp3::Greater) => {
                        out.fail(|| format!("x={x}: {below} / {above}"))
                    }
                    (Cmp3::Less, Cmp3::Less) => out.pass(),
                    // x = e↑↑l exactly is the equality case of the upper bound
                    (Cmp3::Less, Cmp3::Indeterminate) if x == TowerReal::e_tower(l) => out.pass(),
                    (Cmp3::Indeterminate, _) => {
                        out.fail(|| format!("x={x}: lower bound not strict"))
                    }
                    _ => out.unsure(),
                }
            }
            TowerProperty::ExpStep => {
                let x = sample_above_one(&mut rng, 6);
                match (x.exp().iter_log(), x.iter_log()) {
                    (Some(a), Some(b)) if a <= b + 1 => out.pass(),
                    (Some(a), Some(b)) => out.fail(|| format!("x={x}: {a} > {b} + 1")),
                    _ => out.unsure(),
                }
            }
            TowerProperty::BelowTowerLog => {
                let x = sample_above_one(&mut rng, 8);
                let y = rng.random_range(0..=5u32);
                if x.cmp(&TowerReal::e_tower(y)) == Cmp3::Greater {
                    out.pass();
                    continue;
                }
                match x.iter_log() {
                    Some(l) if l <= y + 1 => out.pass(),
                    Some(l) => out.fail(|| format!("x={x} <= e^^{y} but ln* = {l}")),
                    None => out.unsure(),
                }
            }
            TowerProperty::LogBelowTower => {
                let x = sample_above_one(&mut rng, 8);
                let y = rng.random_range(0..=7u32);
                match x.iter_log() {
                    Some(l) if l <= y => {
                        let c = x.cmp(&TowerReal::e_tower(y));
                        if c == Cmp3::Indeterminate && x == TowerReal::e_tower(y) {
                            out.pass();
                        } else {
                            out.not_greater(c, || format!("ln* {x} = {l} <= {y} but x > e^^{y}"));
                        }
                    }
                    Some(_) => out.pass(),
                    None => out.unsure(),
                }
            }
            TowerProperty::SumUnderTower
            | TowerProperty::ProductUnderTower
            | TowerProperty::PowerUnderTower => {
                let x = sample_above_one(&mut rng, 4);
                let y = sample_above_one(&mut rng, 4);
                let (Some(lx), Some(ly)) = (x.iter_log(), y.iter_log()) else {
                    out.unsure();
                    continue;
                };
                let v = match prop {
                    TowerProperty::SumUnderTower => x.add(&y),
                    TowerProperty::ProductUnderTower => x.mul(&y),
                    _ => x.pow(&y),
                };
                let cap = TowerReal::e_tower(lx + ly);
                out.not_greater(v.cmp(&cap), || format!("x={x} y={y}: {v} > e^^{}", lx + ly));
            }
        }
    }
    out.timed(start)
}

/// The step inequality and its scalar rearrangement never disagree when both
/// are certified, on a random `(n, α, K)` grid. `λ` and `c_2` are drawn per
/// point as well so both outcomes turn up. Also returns how many points
/// certified the inequality as holding.
pub fn step_equivalence_grid(points: u64, seed: u64, cfg: &BoundConfig) -> (SuiteOutcome, u64) {
    let start = Instant::now();
    let mut out = SuiteOutcome::new("step inequality equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holds = 0;
    for i in 0..points {
        // odd points stay near the region where the inequality starts to hold
        let near = i % 2 == 1;
        let n = 10f64.powf(rng.random_range(0.4..19.2)).round().max(2.0) as u64;
        let alpha = 10f64.powf(rng.random_range(0.0..if near { 0.3 } else { 0.9 }));
        let k = if near {
            rng.random_range(0.0..2.0f64).exp()
        } else {
            10f64.powf(rng.random_range(0.0..6.0))
        }
        .max(1.0);
        let mut c = cfg.clone();
        c.lambda = rng.random_range(0.51..if near { 0.7 } else { 0.99 });
        c.c2 = rng.random_range(1.0..if near { 1.2 } else { 2.0 });
        let kt = TowerReal::from_real(k).expect("positive");
        let what = || format!("n={n} alpha={alpha} K={k} lambda={} c2={}", c.lambda, c.c2);
        match bounds::step_equivalence_check(n, alpha, &kt, &c) {
            Ok(chk) if !chk.consistent() => out.fail(|| format!("{}: {chk:?}", what())),
            Ok(chk) if chk.both_determinate() => {
                holds += (chk.ratio == Cmp3::Less) as u64;
                out.pass()
            }
            Ok(_) => out.unsure(),
            Err(e) => out.fail(|| format!("{}: {e}", what())),
        }
    }
    (out.timed(start), holds)
}

/// `R(n) <= G(n)` and `R(n) <= B(n)` for table rows above `n0`.
pub fn domination(table: &CountTable, cfg: &BoundConfig) -> (SuiteOutcome, SuiteOutcome) {
    let start = Instant::now();
    let mut g_out = SuiteOutcome::new("counts under G");
    let mut b_out = SuiteOutcome::new("counts under B");
    if table.q != cfg.q {
        let msg = format!("table is for q={}, config for q={}", table.q, cfg.q);
        g_out.fail(|| msg.clone());
        b_out.fail(|| msg);
        return (g_out.timed(start), b_out.timed(start));
    }
    let mut kseq = KSequence::new(cfg);
    for row in table.rows.iter().filter(|r| r.n as u64 > cfg.n0) {
        let n = row.n as u64;
        let r = TowerReal::from_biguint(&row.r);
        let (_, g) = bounds::bound_g_with(n, &mut kseq);
        g_out.not_greater(r.cmp(&g), || format!("n={n}: R={} > G={g}", row.r));
        match bounds::bound_b(n, cfg) {
            Ok(b) => b_out.not_greater(r.cmp(&b), || format!("n={n}: R={} > B={b}", row.r)),
            Err(e) => b_out.fail(|| format!("n={n}: {e}")),
        }
    }
    (g_out.timed(start), b_out.timed(start))
}

/// Fit `c6` over `j <= max_j`, then check `K_j <= e↑↑⌈c6 j^γ⌉` for each `j`.
pub fn c6_fit_check(max_j: u32, cfg: &BoundConfig) -> (Option<f64>, SuiteOutcome) {
    let start = Instant::now();
    let mut out = SuiteOutcome::new(&format!("K_j under e-tower, j<={max_j}"));
    let mut kseq = KSequence::new(cfg);
    let c6 = match bounds::fit_c6_with(max_j, &mut kseq) {
        Ok(c6) => c6,
        Err(e) => {
            out.fail(|| e.to_string());
            return (None, out.timed(start));
        }
    };
    for j in 1..=max_j {
        let h = Interval::point(c6)
            .mul(bounds::j_pow_gamma(j, cfg.gamma))
            .ceil();
        // the larger ceiling is never needed: a smaller tower only makes this harder
        let h = h.lo as u32;
        let k = kseq.k(j);
        out.not_greater(k.cmp(&TowerReal::e_tower(h)), || {
            format!("K_{j} = {k} > e^^{h}")
        });
    }
    (Some(c6), out.timed(start))
}

/// `e(n)/n` and `ln_q G(n) / n` strictly decrease along the grid.
pub fn decreasing_rates(grid: &[u64], cfg: &BoundConfig) -> (SuiteOutcome, SuiteOutcome) {
    let start = Instant::now();
    let mut e_out = SuiteOutcome::new("e(n)/n decreasing");
    let mut g_out = SuiteOutcome::new("ln_q G(n)/n decreasing");
    let mut kseq = KSequence::new(cfg);
    let mut prev: Option<(u64, Interval, Interval)> = None;
    for &n in grid {
        let nn = Interval::from_u64(n);
        let e = match bounds::bound_b_exponent(n, cfg) {
            Ok(e) => e.div(nn),
            Err(err) => {
                e_out.fail(|| format!("n={n}: {err}"));
                continue;
            }
        };
        let g = match bounds::lnq_g_with(n, &mut kseq) {
            Ok((_, g)) => g.div(nn),
            Err(err) => {
                g_out.fail(|| format!("n={n}: {err}"));
                continue;
            }
        };
        if let Some((m, pe, pg)) = prev {
            // strictly smaller at the later point
            e_out.not_greater(strict(e, pe), || format!("e(n)/n at {n} >= at {m}"));
            g_out.not_greater(strict(g, pg), || format!("ln_q G/n at {n} >= at {m}"));
        }
        prev = Some((n, e, g));
    }
    (e_out.timed(start), g_out.timed(start))
}

/// `Less` when `a < b` is certified, `Greater` when `a >= b` is.
fn strict(a: Interval, b: Interval) -> Cmp3 {
    if a.hi < b.lo {
        Cmp3::Less
    } else if a.lo >= b.hi {
        Cmp3::Greater
    } else {
        Cmp3::Indeterminate
    }
}

/// Settings for [`run_all`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub q: u32,
    pub n_max: usize,
    pub samples: u64,
    pub seed: u64,
    pub count: CountOptions,
    pub naive_budget: u64,
    pub cfg: BoundConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            q: 2,
            n_max: 12,
            samples: 1000,
            seed: 1,
            count: CountOptions::default(),
            naive_budget: richcount::NAIVE_WORD_BUDGET,
            cfg: BoundConfig::default(),
        }
    }
}

/// Every suite in order. Errors only on resource limits.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteOutcome>, CountError> {
    // check the oracle budget before doing any work
    let words = (opts.q as u64).checked_pow(opts.n_max as u32);
    if words.is_none_or(|w| w > opts.naive_budget) {
        return Err(CountError::NaiveBudget {
            q: opts.q,
            n: opts.n_max,
            budget: opts.naive_budget,
        });
    }
    let mut out = vec![oracle_equivalence(
        opts.q,
        opts.n_max,
        &opts.count,
        opts.naive_budget,
    )?];
    let table = richcount::count_rich_with(opts.q, opts.n_max, &opts.count)?;
    out.push(prefix_bounds(&table));
    out.push(tetration_iter_log(6));
    for p in TowerProperty::ALL {
        out.push(tower_property(p, opts.samples, opts.seed));
    }
    let mut cfg = opts.cfg.clone();
    cfg.q = opts.q;
    out.push(step_equivalence_grid(opts.samples.max(100), opts.seed, &cfg).0);
    if cfg.validate().is_ok() {
        let (g, b) = domination(&table, &cfg);
        out.push(g);
        out.push(b);
    }
    Ok(out)
}
