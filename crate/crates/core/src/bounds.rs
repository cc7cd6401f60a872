//! Upper bounds on the number of rich words.
//!
//! Everything here is evaluated soundly: scalars as [`Interval`]s, anything
//! that can outgrow `f64` as a [`TowerReal`]. Comparisons come back as
//! [`Cmp3`] and never claim an order the enclosures cannot certify.
//!
//! The constants `K_1`, `c_2`, `c` and friends only exist nonconstructively;
//! here they are configuration with documented defaults, so every bound
//! column is conditional on those choices. Checks against exact counts are
//! unconditional.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::interval::Interval;
use crate::richcount::CountTable;
use crate::tower::{Cmp3, TowerError, TowerReal};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("n = {n} must exceed n0 = {n0}")]
    BelowN0 { n: u64, n0: u64 },
    #[error("n = {0} must be at least 2")]
    NTooSmall(u64),
    #[error("cannot certify {0}")]
    Indeterminate(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// The divergent function `φ` with `x / φ(x)` also divergent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PhiSpec {
    /// `√x`
    Sqrt,
    /// `x^ε`, `0 < ε < 1`
    PowerEps(f64),
    /// `ln(e + x)`
    LogShift,
    /// `max(1, x / ln(e + x))`
    OverLog,
}

impl PhiSpec {
    pub fn eval(&self, x: Interval) -> Interval {
        let e = Interval::point(1.0).exp();
        match *self {
            PhiSpec::Sqrt => x.sqrt(),
            PhiSpec::PowerEps(eps) => x.powf(Interval::point(eps)),
            PhiSpec::LogShift => e.add(x).ln(),
            PhiSpec::OverLog => x.div(e.add(x).ln()).max(Interval::point(1.0)),
        }
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        if let PhiSpec::PowerEps(eps) = *self {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(BoundError::Config(format!(
                    "phi exponent {eps} outside (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::Sqrt => f.write_str("sqrt"),
            PhiSpec::PowerEps(e) => write!(f, "pow:{e}"),
            PhiSpec::LogShift => f.write_str("log"),
            PhiSpec::OverLog => f.write_str("overlog"),
        }
    }
}

impl FromStr for PhiSpec {
    type Err = BoundError;

    /// `sqrt`, `pow:<eps>`, `log`, `overlog`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let phi = match s.trim() {
            "sqrt" => PhiSpec::Sqrt,
            "log" => PhiSpec::LogShift,
            "overlog" => PhiSpec::OverLog,
            other => match other.strip_prefix("pow:") {
                Some(eps) => PhiSpec::PowerEps(
                    eps.parse()
                        .map_err(|_| BoundError::Config(format!("bad phi exponent {eps:?}")))?,
                ),
                None => return Err(BoundError::Config(format!("unknown phi family {other:?}"))),
            },
        };
        phi.validate()?;
        Ok(phi)
    }
}

/// Every constant and function choice the bounds depend on.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConfig {
    pub q: u32,
    pub lambda: f64,
    pub delta: f64,
    pub gamma: f64,
    pub c2: f64,
    pub c: f64,
    /// `K_1` as an exponent over `q`.
    pub k1_exp: f64,
    pub c6: f64,
    pub n0: u64,
    pub phi: PhiSpec,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig::new(2, PhiSpec::Sqrt)
    }
}

impl BoundConfig {
    /// Defaults for the given alphabet and `φ`, with `n0` derived.
    pub fn new(q: u32, phi: PhiSpec) -> Self {
        let mut cfg = BoundConfig {
            q,
            lambda: 0.75,
            delta: 2.0,
            gamma: 2.0,
            c2: 1.0,
            c: 1.0,
            k1_exp: 4.0,
            c6: 1.0,
            n0: 1,
            phi,
        };
        cfg.n0 = cfg.derived_n0();
        cfg
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        let bad = |m: String| Err(BoundError::Config(m));
        if self.q < 2 {
            return bad(format!("q = {} must be at least 2", self.q));
        }
        if !(self.lambda > 0.5 && self.lambda < 1.0) {
            return bad(format!("lambda = {} must lie in (1/2, 1)", self.lambda));
        }
        if !(self.delta > 1.0 && self.delta.is_finite()) {
            return bad(format!("delta = {} must exceed 1", self.delta));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return bad(format!("gamma = {} must exceed 1", self.gamma));
        }
        if !(self.c2 >= 1.0 && self.c2.is_finite()) {
            return bad(format!("c2 = {} must be at least 1", self.c2));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return bad(format!("c = {} must be positive", self.c));
        }
        if !(self.k1_exp > 0.0 && self.k1_exp <= 1e6) {
            return bad(format!("K1 exponent {} must lie in (0, 1e6]", self.k1_exp));
        }
        if !(self.c6 >= 1.0 && self.c6.is_finite()) {
            return bad(format!("c6 = {} must be at least 1", self.c6));
        }
        if self.n0 < 1 {
            return bad("n0 must be positive".into());
        }
        self.phi.validate()?;
        Ok(())
    }

    pub fn q_tower(&self) -> TowerReal {
        TowerReal::from_u64(self.q as u64)
    }

    fn ln_q(&self) -> Interval {
        Interval::from_u64(self.q as u64).ln()
    }

    pub fn k1(&self) -> TowerReal {
        match self.k1_int() {
            Some(v) => TowerReal::from_u64(v),
            None => self
                .q_tower()
                .pow(&TowerReal::from_real(self.k1_exp).expect("validated")),
        }
    }

    /// `K_1` as an integer when the exponent is integral and the value small.
    fn k1_int(&self) -> Option<u64> {
        if self.k1_exp.fract() != 0.0 || self.k1_exp > 63.0 {
            return None;
        }
        (self.q as u64)
            .checked_pow(self.k1_exp as u32)
            .filter(|&v| v < 1 << 53)
    }

    /// `n / φ(n)`.
    pub fn n_over_phi(&self, n: u64) -> Interval {
        let x = Interval::from_u64(n);
        x.div(self.phi.eval(x))
    }

    /// Smallest `n` with `ln*(q^{n/φ(n)}) > 1`, i.e. `(n/φ(n)) ln q > 1`.
    pub fn derived_n0(&self) -> u64 {
        (1..=1_000_000)
            .find(|&n| self.n_over_phi(n).mul(self.ln_q()).lo > 1.0)
            .unwrap_or(1_000_000)
    }
}

/// `σ_n = c_2 n / ln n`.
pub fn sigma(n: u64, c2: f64) -> Result<Interval, BoundError> {
    if n < 2 {
        return Err(BoundError::NTooSmall(n));
    }
    let nn = Interval::from_u64(n);
    Ok(Interval::point(c2).mul(nn).div(nn.ln()))
}

/// `K^{σ_n} h^{(n+σ_n)/2} (c_2 ln n)^{σ_n}`, the one-step bound on `R_q(n)`
/// given `R_q(m) <= K h^m` for all `m`.
pub fn bound_step(k: &TowerReal, h: &TowerReal, n: u64, c2: f64) -> Result<TowerReal, BoundError> {
    if k.cmp(&TowerReal::ONE) == Cmp3::Less || k.lo().height() == 0 {
        return Err(BoundError::Config("K must be at least 1".into()));
    }
    if h.lo().height() == 0 || h.lo() == TowerReal::ONE.lo() {
        return Err(BoundError::Config("h must exceed 1".into()));
    }
    let s = sigma(n, c2)?;
    let st = TowerReal::from_interval(s)?;
    let half = Interval::from_u64(n).add(s).scale(0.5);
    let log_term = Interval::point(c2).mul(Interval::from_u64(n).ln());
    let a = k.pow(&st);
    let b = h.pow(&TowerReal::from_interval(half)?);
    let c = TowerReal::from_interval(log_term)?.pow(&st);
    Ok(a.mul(&b).mul(&c))
}

/// Both sides of the equivalence behind the step bound, oriented so that
/// `Less` means "the inequality holds" on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    /// `K^σ (q^{1/α})^{(n+σ)/2} (c_2 ln n)^σ` against `q^{n/(2αλ)}`.
    pub ratio: Cmp3,
    /// `ln K + ln c_2 + ln q/(2α)` against `(1-λ) ln n ln q/(2αλc_2) - ln ln n`.
    pub scalar: Cmp3,
}

impl StepCheck {
    /// True unless both verdicts are determinate and disagree.
    pub fn consistent(&self) -> bool {
        !(self.ratio.is_determinate() && self.scalar.is_determinate()) || self.ratio == self.scalar
    }

    pub fn both_determinate(&self) -> bool {
        self.ratio.is_determinate() && self.scalar.is_determinate()
    }
}

pub fn step_equivalence_check(
    n: u64,
    alpha: f64,
    k: &TowerReal,
    cfg: &BoundConfig,
) -> Result<StepCheck, BoundError> {
    if n < 2 {
        return Err(BoundError::NTooSmall(n));
    }
    if !(alpha >= 1.0) {
        return Err(BoundError::Config(format!(
            "alpha = {alpha} must be at least 1"
        )));
    }
    let a = Interval::point(alpha);
    let lam = Interval::point(cfg.lambda);
    let ln_q = cfg.ln_q();
    let q = cfg.q_tower();

    let h = q.pow(&TowerReal::from_interval(Interval::point(1.0).div(a))?);
    let num = bound_step(k, &h, n, cfg.c2)?;
    let den_exp = Interval::from_u64(n).div(a.scale(2.0).mul(lam));
    let den = q.pow(&TowerReal::from_interval(den_exp)?);

    let ln_n = Interval::from_u64(n).ln();
    let ln_k = k
        .ln()?
        .to_interval()
        .ok_or_else(|| BoundError::Config("ln K must fit in f64".into()))?;
    let left = Interval::point(1.0)
        .sub(lam)
        .mul(ln_n)
        .mul(ln_q)
        .div(a.scale(2.0).mul(lam).mul(Interval::point(cfg.c2)))
        .sub(ln_n.ln());
    let right = ln_k
        .add(Interval::point(cfg.c2).ln())
        .add(ln_q.div(a.scale(2.0)));

    Ok(StepCheck {
        ratio: num.cmp(&den),
        scalar: right.cmp3(&left),
    })
}

/// `α_j = (2λ)^{j-1}`.
pub fn alpha(j: u32, lambda: f64) -> Interval {
    assert!(j >= 1, "alpha is indexed from 1");
    Interval::point(2.0 * lambda).powi(j - 1)
}

/// The sequences `β_j` and `K_j`, computed on demand and cached.
#[derive(Debug, Clone)]
pub struct KSequence {
    cfg: BoundConfig,
    /// `(β_j, K_j)` at index `j - 1`
    terms: Vec<(TowerReal, TowerReal)>,
    /// `K_j` as an integer while it is small enough to hold exactly
    exact: Vec<Option<u64>>,
}

fn small_int(x: Interval) -> Option<u64> {
    (x.is_point() && x.lo.fract() == 0.0 && (0.0..9.0e15).contains(&x.lo)).then_some(x.lo as u64)
}

impl KSequence {
    pub fn new(cfg: &BoundConfig) -> Self {
        KSequence {
            cfg: cfg.clone(),
            terms: vec![(TowerReal::ONE, cfg.k1())],
            exact: vec![cfg.k1_int()],
        }
    }

    /// `(β_j, K_j)`; `β_j = ⌈exp(α_{j-1}^δ ln K_{j-1})⌉` and `K_j = q^{β_j}`.
    pub fn get(&mut self, j: u32) -> (TowerReal, TowerReal) {
        assert!(j >= 1, "K is indexed from 1");
        while self.terms.len() < j as usize {
            let i = self.terms.len() as u32; // index of the previous term
            let (_, prev_k) = *self.terms.last().expect("K_1 present");
            let prev_int = self.exact[self.terms.len() - 1];
            let a = alpha(i, self.cfg.lambda).powf(Interval::point(self.cfg.delta));
            // integer powers of integers need no ceiling
            let beta_int = match (prev_int, small_int(a)) {
                (Some(k), Some(p)) => u32::try_from(p)
                    .ok()
                    .and_then(|p| k.checked_pow(p))
                    .filter(|&v| v < 1 << 53),
                _ => None,
            };
            let beta = match beta_int {
                Some(b) => TowerReal::from_u64(b),
                None => TowerReal::from_interval(a)
                    .expect("positive")
                    .mul(&prev_k.ln().expect("K >= 1"))
                    .exp()
                    .ceil(),
            };
            let k_int = beta_int
                .and_then(|b| u32::try_from(b).ok())
                .and_then(|b| (self.cfg.q as u64).checked_pow(b))
                .filter(|&v| v < 1 << 53);
            let k = match k_int {
                Some(v) => TowerReal::from_u64(v),
                None => self.cfg.q_tower().pow(&beta),
            };
            self.terms.push((beta, k));
            self.exact.push(k_int);
        }
        self.terms[j as usize - 1]
    }

    pub fn k(&mut self, j: u32) -> TowerReal {
        self.get(j).1
    }

    pub fn beta(&mut self, j: u32) -> TowerReal {
        self.get(j).0
    }
}

/// `(β_j, K_j)` for a single index.
pub fn beta_k(j: u32, cfg: &BoundConfig) -> (TowerReal, TowerReal) {
    KSequence::new(cfg).get(j)
}

/// Scan stops here even if `K_j` is still certified small.
pub const TAU_SCAN_LIMIT: u32 = 12;

/// `q^{n/φ(n)}`.
pub fn q_pow_n_over_phi(n: u64, cfg: &BoundConfig) -> TowerReal {
    let e = TowerReal::from_interval(cfg.n_over_phi(n)).expect("positive");
    cfg.q_tower().pow(&e)
}

/// `τ(n) = max{ j : K_j <= max(K_1, q^{n/φ(n)}) }`, scanning upward and
/// stopping at the first uncertified comparison.
pub fn tau_with(n: u64, kseq: &mut KSequence) -> u32 {
    let cfg = kseq.cfg.clone();
    let cap = cfg.k1().max(&q_pow_n_over_phi(n, &cfg));
    let mut j = 1;
    while j < TAU_SCAN_LIMIT {
        match kseq.k(j + 1).cmp(&cap) {
            Cmp3::Less => j += 1,
            _ => break,
        }
    }
    j
}

pub fn tau(n: u64, cfg: &BoundConfig) -> u32 {
    tau_with(n, &mut KSequence::new(cfg))
}

/// `G(n) = K_{τ(n)} q^{n/α_{τ(n)}}`.
pub fn bound_g_with(n: u64, kseq: &mut KSequence) -> (u32, TowerReal) {
    let t = tau_with(n, kseq);
    let cfg = &kseq.cfg;
    let exp = Interval::from_u64(n).div(alpha(t, cfg.lambda));
    let q_part = cfg
        .q_tower()
        .pow(&TowerReal::from_interval(exp).expect("positive"));
    let g = kseq.k(t).mul(&q_part);
    (t, g)
}

pub fn bound_g(n: u64, cfg: &BoundConfig) -> TowerReal {
    bound_g_with(n, &mut KSequence::new(cfg)).1
}

/// `ln_q G(n) = ln K_τ / ln q + n / α_τ` as a scalar.
pub fn lnq_g_with(n: u64, kseq: &mut KSequence) -> Result<(u32, Interval), BoundError> {
    let (t, g) = bound_g_with(n, kseq);
    let ln_g = g
        .ln()?
        .to_interval()
        .ok_or_else(|| BoundError::Indeterminate(format!("ln G({n}) exceeds f64 range")))?;
    Ok((t, ln_g.div(kseq.cfg.ln_q())))
}

/// `ln*` of `(n/φ(n)) ln q`.
fn iter_log_base(n: u64, cfg: &BoundConfig) -> Result<u32, BoundError> {
    let x = cfg.n_over_phi(n).mul(cfg.ln_q());
    TowerReal::from_interval(x)?
        .iter_log()
        .ok_or_else(|| BoundError::Indeterminate(format!("ln* of (n/phi(n)) ln q at n = {n}")))
}

/// `f(n) = (c ln*((n/φ(n)) ln q))^{1/γ}`.
pub fn f_exponent(n: u64, cfg: &BoundConfig) -> Result<Interval, BoundError> {
    if n <= cfg.n0 {
        return Err(BoundError::BelowN0 { n, n0: cfg.n0 });
    }
    let ls = iter_log_base(n, cfg)? as f64;
    let inner = Interval::point(cfg.c).mul(Interval::point(ls));
    Ok(inner.powf(Interval::point(1.0).div(Interval::point(cfg.gamma))))
}

/// `e(n) = n/φ(n) + n/(2λ)^{f(n)-1}`, so that `B(n) = q^{e(n)}`.
pub fn bound_b_exponent(n: u64, cfg: &BoundConfig) -> Result<Interval, BoundError> {
    let f = f_exponent(n, cfg)?;
    let nn = Interval::from_u64(n);
    let shrink = Interval::point(2.0 * cfg.lambda).powf(f.sub(Interval::point(1.0)));
    Ok(cfg.n_over_phi(n).add(nn.div(shrink)))
}

/// `B(n) = q^{e(n)}`.
pub fn bound_b(n: u64, cfg: &BoundConfig) -> Result<TowerReal, BoundError> {
    let e = bound_b_exponent(n, cfg)?;
    Ok(cfg.q_tower().pow(&TowerReal::from_interval(e)?))
}

/// Grid step for `c_6`.
pub const C6_STEP: f64 = 1.0 / 16.0;

/// Smallest `c_6 >= 1` on the 1/16 grid with `ln* K_j <= c_6 j^γ` for all
/// `j <= max_j`.
pub fn fit_c6(max_j: u32, cfg: &BoundConfig) -> Result<f64, BoundError> {
    fit_c6_with(max_j, &mut KSequence::new(cfg))
}

pub fn fit_c6_with(max_j: u32, kseq: &mut KSequence) -> Result<f64, BoundError> {
    if max_j == 0 {
        return Err(BoundError::Config("fit needs at least one term".into()));
    }
    let gamma = kseq.cfg.gamma;
    let mut steps: u64 = 16;
    for j in 1..=max_j {
        let ls = kseq
            .k(j)
            .iter_log()
            .ok_or_else(|| BoundError::Indeterminate(format!("ln* K_{j}")))?;
        let jg = j_pow_gamma(j, gamma);
        // smallest k/16 with (k/16) j^γ >= ls, certified on the interval
        let mut k = ((ls as f64 / jg.lo) / C6_STEP).ceil().max(1.0) as u64;
        while Interval::point(k as f64 * C6_STEP).mul(jg).lo < ls as f64 {
            k += 1;
        }
        steps = steps.max(k);
    }
    Ok(steps as f64 * C6_STEP)
}

/// `j^γ`, exact for integral `γ`.
pub fn j_pow_gamma(j: u32, gamma: f64) -> Interval {
    if gamma.fract() == 0.0 && gamma <= 64.0 {
        Interval::from_u64(j as u64).powi(gamma as u32)
    } else {
        Interval::from_u64(j as u64).powf(Interval::point(gamma))
    }
}

/// One row of a [`BoundReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: u64,
    pub f: Option<f64>,
    pub tau: u32,
    pub e_n: Option<f64>,
    #[serde(rename = "lnq_G")]
    pub lnq_g: f64,
    #[serde(rename = "R", serialize_with = "opt_decimal")]
    pub r: Option<BigUint>,
    #[serde(rename = "verdict_G")]
    pub verdict_g: Option<Cmp3>,
    #[serde(rename = "verdict_B")]
    pub verdict_b: Option<Cmp3>,
    /// `G(n)` in tower text form
    #[serde(rename = "G")]
    pub g: String,
    #[serde(rename = "B")]
    pub b: Option<String>,
}

fn opt_decimal<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// Bound columns depend on constants that are assumed, not derived.
    pub conditional_on_config: bool,
    pub rows: Vec<BoundRow>,
}

/// Evaluate `f`, `τ`, `e(n)`, `G` and verdicts against exact counts over a
/// grid. Rows come back in grid order.
pub fn report(
    n_grid: &[u64],
    cfg: &BoundConfig,
    counts: Option<&CountTable>,
) -> Result<BoundReport, BoundError> {
    cfg.validate()?;
    if n_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(BoundError::Config("grid must be sorted ascending".into()));
    }
    if n_grid.contains(&0) {
        return Err(BoundError::Config("grid values must be positive".into()));
    }
    // warm the sequence far enough for the largest n, then share it
    let mut kseq = KSequence::new(cfg);
    if let Some(&n_max) = n_grid.last() {
        let t = tau_with(n_max, &mut kseq);
        kseq.get(TAU_SCAN_LIMIT.min(t + 1));
    }
    let rows: Result<Vec<BoundRow>, BoundError> = n_grid
        .par_iter()
        .map(|&n| {
            let mut ks = kseq.clone();
            let (tau, g) = bound_g_with(n, &mut ks);
            let (_, lnq_g) = lnq_g_with(n, &mut ks)?;
            let above_n0 = n > cfg.n0;
            let f = above_n0.then(|| f_exponent(n, cfg)).transpose()?;
            let e_n = above_n0.then(|| bound_b_exponent(n, cfg)).transpose()?;
            let b = above_n0.then(|| bound_b(n, cfg)).transpose()?;
            let r = counts
                .filter(|t| t.q == cfg.q)
                .and_then(|t| t.get(n as usize))
                .cloned();
            let r_tower = r.as_ref().map(TowerReal::from_biguint);
            let verdict_g = r_tower.as_ref().map(|rt| rt.cmp(&g));
            let verdict_b = match (&r_tower, &b) {
                (Some(rt), Some(b)) => Some(rt.cmp(b)),
                _ => None,
            };
            Ok(BoundRow {
                n,
                f: f.map(|x| x.mid()),
                tau,
                e_n: e_n.map(|x| x.mid()),
                lnq_g: lnq_g.mid(),
                r,
                verdict_g,
                verdict_b,
                g: g.to_string(),
                b: b.map(|x| x.to_string()),
            })
        })
        .collect();
    Ok(BoundReport {
        conditional_on_config: true,
        rows: rows?,
    })
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "n,f,tau,e_n,lnq_G,R,verdict_G,verdict_B";

    pub fn to_csv(&self) -> String {
        fn opt<T: fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        let mut s = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                r.n,
                opt(&r.f),
                r.tau,
                opt(&r.e_n),
                r.lnq_g,
                opt(&r.r),
                opt(&r.verdict_g),
                opt(&r.verdict_b),
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Two columns `n  e(n)/n` for plotting; rows without `e(n)` are skipped.
    pub fn to_plot_data(&self) -> String {
        let mut s = String::from("# n e_n/n\n");
        for r in &self.rows {
            if let Some(e) = r.e_n {
                let _ = writeln!(s, "{} {}", r.n, e / r.n as f64);
            }
        }
        s
    }
}


#[cfg(test)]
mod step_cases {
    use super::*;

    #[test]
    fn both_orientations_occur() {
        let c = BoundConfig::default();
        let holds =
            step_equivalence_check(10u64.pow(19), 1.0, &TowerReal::from_u64(2), &c).unwrap();
        assert_eq!(
            holds,
            StepCheck {
                ratio: Cmp3::Less,
                scalar: Cmp3::Less
            }
        );
        let fails = step_equivalence_check(3, 1.0, &TowerReal::from_u64(1_000_000), &c).unwrap();
        assert_eq!(
            fails,
            StepCheck {
                ratio: Cmp3::Greater,
                scalar: Cmp3::Greater
            }
        );
    }
}
