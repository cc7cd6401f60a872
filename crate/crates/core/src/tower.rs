//! Level-index arithmetic for reals up to towers of exponentials.
//!
//! A [`Level`] is a point `exp^h(r)` with `r` in `[0, 1)`. Level points are
//! totally ordered by `(h, r)` lexicographically, and `exp`/`ln` are exact
//! height shifts. A [`TowerReal`] is an interval between two level points,
//! each rounded outward, so every computed quantity is enclosed.
//!
//! Values below 1 live at height 0 with the residue equal to the value
//! itself; `exp^h(0) = e↑↑(h-1)` for `h >= 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::interval::{add_dir, exp_dir, ln_dir, mul_dir, sub_dir, Dir, Interval};

/// Largest value handled by plain `f64` arithmetic; anything above goes
/// through the log route.
const FIT: f64 = 1e300;
/// Upper bound on `b / a` whenever `a` does not fit and `b < 1`.
const TINY: f64 = 2e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TowerError {
    #[error("negative input {0}")]
    Negative(f64),
    #[error("non-finite input")]
    NonFinite,
    #[error("residue {0} outside [0, 1)")]
    BadResidue(f64),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("cannot parse tower value: {0}")]
    Parse(String),
}

/// Three-way comparison verdict; `Indeterminate` only when intervals overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cmp3 {
    Less,
    Greater,
    Indeterminate,
}

impl Cmp3 {
    pub fn is_determinate(self) -> bool {
        self != Cmp3::Indeterminate
    }

    pub fn reverse(self) -> Cmp3 {
        match self {
            Cmp3::Less => Cmp3::Greater,
            Cmp3::Greater => Cmp3::Less,
            Cmp3::Indeterminate => Cmp3::Indeterminate,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cmp3::Less => "less",
            Cmp3::Greater => "greater",
            Cmp3::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Cmp3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single level-index point `exp^height(residue)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    height: u32,
    residue: f64,
}

impl Level {
    pub const ZERO: Level = Level {
        height: 0,
        residue: 0.0,
    };
    pub const ONE: Level = Level {
        height: 1,
        residue: 0.0,
    };
    pub const E: Level = Level {
        height: 2,
        residue: 0.0,
    };

    pub fn new(height: u32, residue: f64) -> Result<Level, TowerError> {
        if !(0.0..1.0).contains(&residue) {
            return Err(TowerError::BadResidue(residue));
        }
        Ok(Level { height, residue })
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn residue(&self) -> f64 {
        self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.height == 0 && self.residue == 0.0
    }

    /// Exact order of the represented values.
    pub fn order(&self, other: &Level) -> Ordering {
        self.height
            .cmp(&other.height)
            .then(self.residue.total_cmp(&other.residue))
    }

    /// Bring `exp^h(r)` into canonical form, rounding every step in `dir`.
    /// Accepts any finite `r`; negative residues are pushed down a level.
    pub fn normalize(mut h: u32, mut r: f64, dir: Dir) -> Level {
        debug_assert!(r.is_finite());
        while r < 0.0 && h > 0 {
            r = exp_dir(r, dir);
            h -= 1;
        }
        if r < 0.0 {
            r = 0.0;
        }
        while r >= 1.0 {
            r = ln_dir(r, dir);
            if r < 0.0 {
                r = 0.0;
            }
            h += 1;
        }
        Level {
            height: h,
            residue: r,
        }
    }

    pub(crate) fn from_f64(x: f64, dir: Dir) -> Level {
        debug_assert!(x >= 0.0);
        if x.is_infinite() {
            // only reachable for a lower bound of an overflowed quantity
            return Level::normalize(0, f64::MAX, dir);
        }
        Level::normalize(0, x, dir)
    }

    /// Value as `f64` rounded in `dir`. Overflow yields `+inf` upward and
    /// `f64::MAX` downward, both valid bounds.
    pub(crate) fn to_f64(self, dir: Dir) -> f64 {
        let mut v = self.residue;
        for _ in 0..self.height {
            v = exp_dir(v, dir);
            if v.is_infinite() {
                return match dir {
                    Dir::Up => f64::INFINITY,
                    Dir::Down => f64::MAX,
                };
            }
        }
        v
    }

    fn fits(self) -> bool {
        self.to_f64(Dir::Up) <= FIT
    }

    /// `ln` of a point `>= 1`, exact.
    pub fn ln(self) -> Option<Level> {
        (self.height >= 1).then(|| Level {
            height: self.height - 1,
            residue: self.residue,
        })
    }

    /// `exp` of a point, exact.
    pub fn exp(self) -> Level {
        Level {
            height: self.height + 1,
            residue: self.residue,
        }
    }

    /// Iterated natural logarithm of the point, exact.
    pub fn iter_log(self) -> u32 {
        match self.height {
            0 => 0,
            h if self.residue > 0.0 => h,
            h => h - 1,
        }
    }

    fn max(self, other: Level) -> Level {
        if self.order(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn min(self, other: Level) -> Level {
        if self.order(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}", self.height, self.residue)
    }
}

/// `e^x` for a finite `x` of either sign.
fn exp_of_f64(x: f64, dir: Dir) -> Level {
    if x >= 0.0 {
        Level::from_f64(x, dir).exp()
    } else {
        Level::from_f64(exp_dir(x, dir), dir)
    }
}

/// `e^(l - m)` for a point `l` and `m >= 0`.
fn exp_of_diff(l: Level, m: f64, dir: Dir) -> Level {
    if m == 0.0 {
        return l.exp();
    }
    if l.fits() {
        let diff = sub_dir(l.to_f64(dir), m, dir);
        return exp_of_f64(diff, dir);
    }
    let ml = Level::from_f64(m, dir.flip());
    debug_assert_eq!(l.order(&ml), Ordering::Greater);
    sub_pt(l, ml, dir).exp()
}

fn add_pt(a: Level, b: Level, dir: Dir) -> Level {
    let (a, b) = if a.order(&b) == Ordering::Less {
        (b, a)
    } else {
        (a, b)
    };
    if b.is_zero() {
        return a;
    }
    if a.fits() {
        let v = add_dir(a.to_f64(dir), b.to_f64(dir), dir);
        return Level::from_f64(v, dir);
    }
    // ln(a + b) = ln a + ln(1 + b/a)
    let la = a.ln().expect("a > 1e300");
    let t = if b.height == 0 {
        TINY
    } else {
        let lb = b.ln().expect("b >= 1");
        let gap = sub_pt(la, lb, dir.flip());
        if gap.fits() {
            let ratio = exp_dir(-gap.to_f64(dir.flip()), dir);
            dir.round_libm(ratio.ln_1p()).max(0.0)
        } else {
            TINY
        }
    };
    if dir == Dir::Down && t <= TINY {
        return a;
    }
    add_pt(la, Level::from_f64(t, dir), dir).exp()
}

/// `a - b` for points with `a >= b`.
fn sub_pt(a: Level, b: Level, dir: Dir) -> Level {
    debug_assert_ne!(a.order(&b), Ordering::Less);
    if b.is_zero() {
        return a;
    }
    if a == b {
        return Level::ZERO;
    }
    if a.fits() {
        let v = sub_dir(a.to_f64(dir), b.to_f64(dir.flip()), dir);
        return Level::from_f64(v.max(0.0), dir);
    }
    // ln(a - b) = ln a - m,  m = -ln(1 - b/a) >= 0
    let la = a.ln().expect("a > 1e300");
    let m = if b.height == 0 {
        // -ln(1 - x) <= 2x for x <= 1/2
        match dir {
            Dir::Up => return a,
            Dir::Down => 2.0 * TINY,
        }
    } else {
        let lb = b.ln().expect("b >= 1");
        let gap = sub_pt(la, lb, dir);
        if gap.is_zero() {
            return Level::ZERO;
        }
        if gap.fits() {
            let g = gap.to_f64(dir);
            // 1 - e^{-g}; a smaller value means a larger m
            let one_minus = dir.round_libm(-(-g).exp_m1()).clamp(0.0, 1.0);
            if one_minus == 0.0 {
                return Level::ZERO;
            }
            (-ln_dir(one_minus, dir.flip())).max(0.0)
        } else {
            match dir {
                Dir::Up => return a,
                Dir::Down => 2.0 * TINY,
            }
        }
    };
    exp_of_diff(la, m, dir)
}

fn mul_pt(a: Level, b: Level, dir: Dir) -> Level {
    if a.is_zero() || b.is_zero() {
        return Level::ZERO;
    }
    if a == Level::ONE {
        return b;
    }
    if b == Level::ONE {
        return a;
    }
    if a.fits() && b.fits() {
        let (x, y) = (a.to_f64(dir), b.to_f64(dir));
        if (x * y).is_finite() {
            return Level::from_f64(mul_dir(x, y, dir), dir);
        }
    }
    match (a.ln(), b.ln()) {
        (Some(la), Some(lb)) => add_pt(la, lb, dir).exp(),
        (Some(lg), None) => mul_small(lg, b, dir),
        (None, Some(lg)) => mul_small(lg, a, dir),
        (None, None) => unreachable!("two values below 1 always fit"),
    }
}

/// `exp(lg) * s` with `0 < s < 1`.
fn mul_small(lg: Level, s: Level, dir: Dir) -> Level {
    let v = s.residue;
    // -ln v; rounding down the product means subtracting more
    let c = (-ln_dir(v, dir.flip())).max(0.0);
    exp_of_diff(lg, c, dir)
}

fn pow_pt(x: Level, y: Level, dir: Dir) -> Level {
    if y.is_zero() {
        return Level::ONE;
    }
    if x.is_zero() {
        return Level::ZERO;
    }
    if x == Level::E {
        return y.exp();
    }
    if let Some(lx) = x.ln() {
        return mul_pt(y, lx, dir).exp();
    }
    // x < 1: x^y = e^{-y c}, c = -ln x
    let c = (-ln_dir(x.residue, dir)).max(0.0);
    let p = mul_pt(y, Level::from_f64(c, dir.flip()), dir.flip());
    if p.fits() {
        Level::from_f64(exp_dir(-p.to_f64(dir.flip()), dir), dir)
    } else {
        match dir {
            Dir::Down => Level::ZERO,
            Dir::Up => Level::from_f64(f64::from_bits(1), dir),
        }
    }
}

/// A closed interval of non-negative reals with level-index endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerReal {
    lo: Level,
    hi: Level,
}

impl TowerReal {
    pub const ZERO: TowerReal = TowerReal::point(Level::ZERO);
    pub const ONE: TowerReal = TowerReal::point(Level::ONE);

    pub const fn point(l: Level) -> TowerReal {
        TowerReal { lo: l, hi: l }
    }

    pub fn from_levels(lo: Level, hi: Level) -> Result<TowerReal, TowerError> {
        if lo.order(&hi) == Ordering::Greater {
            return Err(TowerError::Domain("lower endpoint above upper endpoint"));
        }
        Ok(TowerReal { lo, hi })
    }

    /// Euler's number, exactly (level 2, residue 0).
    pub fn e() -> TowerReal {
        TowerReal::point(Level::E)
    }

    /// Smallest enclosure of a non-negative finite `f64`.
    pub fn from_real(x: f64) -> Result<TowerReal, TowerError> {
        if !x.is_finite() {
            return Err(TowerError::NonFinite);
        }
        if x < 0.0 {
            return Err(TowerError::Negative(x));
        }
        Ok(TowerReal {
            lo: Level::from_f64(x, Dir::Down),
            hi: Level::from_f64(x, Dir::Up),
        })
    }

    pub fn from_interval(iv: Interval) -> Result<TowerReal, TowerError> {
        if !(iv.lo.is_finite() && iv.hi.is_finite()) {
            return Err(TowerError::NonFinite);
        }
        if iv.lo < 0.0 {
            return Err(TowerError::Negative(iv.lo));
        }
        Ok(TowerReal {
            lo: Level::from_f64(iv.lo, Dir::Down),
            hi: Level::from_f64(iv.hi, Dir::Up),
        })
    }

    pub fn from_u64(n: u64) -> TowerReal {
        TowerReal::from_interval(Interval::from_u64(n)).expect("finite")
    }

    pub fn from_biguint(n: &BigUint) -> TowerReal {
        if n.is_zero() {
            return TowerReal::ZERO;
        }
        if let Some(v) = n.to_u64() {
            return TowerReal::from_u64(v);
        }
        let bits = n.bits();
        if bits <= 1000 {
            let v = n.to_f64().expect("finite below 2^1000");
            return TowerReal::from_interval(Interval::new(v.next_down(), v.next_up()))
                .expect("finite");
        }
        // n = top * 2^shift with top in [2^63, 2^64)
        let shift = bits - 64;
        let top = (n >> shift).to_u64().expect("64 bits");
        let ln_top = Interval::from_u64(top).ln();
        let ln_n = Interval::from_u64(shift)
            .mul(Interval::point(2.0).ln())
            .add(ln_top)
            .add(Interval::new(0.0, 2f64.powi(-62)));
        TowerReal {
            lo: exp_of_f64(ln_n.lo, Dir::Down),
            hi: exp_of_f64(ln_n.hi, Dir::Up),
        }
    }

    pub fn lo(&self) -> Level {
        self.lo
    }

    pub fn hi(&self) -> Level {
        self.hi
    }

    /// Common height of both endpoints, if they agree.
    pub fn height(&self) -> Option<u32> {
        (self.lo.height == self.hi.height).then_some(self.lo.height)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `f64` enclosure when the value is small enough.
    pub fn to_interval(&self) -> Option<Interval> {
        let hi = self.hi.to_f64(Dir::Up);
        hi.is_finite()
            .then(|| Interval::new(self.lo.to_f64(Dir::Down), hi))
    }

    /// Whether `x` lies in the enclosure.
    pub fn contains_level(&self, x: Level) -> bool {
        self.lo.order(&x) != Ordering::Greater && x.order(&self.hi) != Ordering::Greater
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        let t = TowerReal::from_real(x).expect("finite non-negative");
        self.lo.order(&t.hi) != Ordering::Greater && t.lo.order(&self.hi) != Ordering::Greater
    }

    pub fn cmp(&self, other: &TowerReal) -> Cmp3 {
        if self.hi.order(&other.lo) == Ordering::Less {
            Cmp3::Less
        } else if self.lo.order(&other.hi) == Ordering::Greater {
            Cmp3::Greater
        } else {
            Cmp3::Indeterminate
        }
    }

    /// Sound `self <= other`: `Some(true)` when certainly, `Some(false)`
    /// when certainly not, `None` when it cannot be decided.
    pub fn le(&self, other: &TowerReal) -> Option<bool> {
        if self.hi.order(&other.lo) != Ordering::Greater {
            Some(true)
        } else if self.lo.order(&other.hi) == Ordering::Greater {
            Some(false)
        } else {
            None
        }
    }

    /// `ln*` of the enclosed value; `None` when the endpoints disagree.
    pub fn iter_log(&self) -> Option<u32> {
        let a = self.lo.iter_log();
        (a == self.hi.iter_log()).then_some(a)
    }

    pub fn add(&self, o: &TowerReal) -> TowerReal {
        TowerReal {
            lo: add_pt(self.lo, o.lo, Dir::Down),
            hi: add_pt(self.hi, o.hi, Dir::Up),
        }
    }

    /// `self - o`; fails when the difference could be negative everywhere.
    pub fn sub(&self, o: &TowerReal) -> Result<TowerReal, TowerError> {
        if self.hi.order(&o.lo) == Ordering::Less {
            return Err(TowerError::Domain("subtraction result is negative"));
        }
        let lo = if self.lo.order(&o.hi) == Ordering::Less {
            Level::ZERO
        } else {
            sub_pt(self.lo, o.hi, Dir::Down)
        };
        Ok(TowerReal {
            lo,
            hi: sub_pt(self.hi, o.lo, Dir::Up),
        })
    }

    pub fn mul(&self, o: &TowerReal) -> TowerReal {
        TowerReal {
            lo: mul_pt(self.lo, o.lo, Dir::Down),
            hi: mul_pt(self.hi, o.hi, Dir::Up),
        }
    }

    /// `self^o`; increasing in the exponent above 1 and decreasing below.
    pub fn pow(&self, o: &TowerReal) -> TowerReal {
        let lo = if self.lo.height >= 1 {
            pow_pt(self.lo, o.lo, Dir::Down)
        } else {
            pow_pt(self.lo, o.hi, Dir::Down)
        };
        let hi = if self.hi.height >= 1 {
            pow_pt(self.hi, o.hi, Dir::Up)
        } else {
            pow_pt(self.hi, o.lo, Dir::Up)
        };
        TowerReal { lo, hi: hi.max(lo) }
    }

    pub fn ln(&self) -> Result<TowerReal, TowerError> {
        match (self.lo.ln(), self.hi.ln()) {
            (Some(lo), Some(hi)) => Ok(TowerReal { lo, hi }),
            _ => Err(TowerError::Domain("ln requires a value >= 1")),
        }
    }

    pub fn exp(&self) -> TowerReal {
        TowerReal {
            lo: self.lo.exp(),
            hi: self.hi.exp(),
        }
    }

    pub fn max(&self, o: &TowerReal) -> TowerReal {
        TowerReal {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn min(&self, o: &TowerReal) -> TowerReal {
        TowerReal {
            lo: self.lo.min(o.lo),
            hi: self.hi.min(o.hi),
        }
    }

    /// Enclosure of the integer ceiling.
    pub fn ceil(&self) -> TowerReal {
        let hi_f = self.hi.to_f64(Dir::Up);
        if hi_f < 4.5e15 {
            let lo = self.lo.to_f64(Dir::Down).ceil();
            let hi = hi_f.ceil();
            return TowerReal {
                lo: Level::from_f64(lo, Dir::Down).max(self.lo),
                hi: Level::from_f64(hi, Dir::Up),
            };
        }
        TowerReal {
            lo: self.lo,
            hi: add_pt(self.hi, Level::ONE, Dir::Up),
        }
    }

    /// `a↑↑n`; exact for `a = e`.
    pub fn tetrate(a: &TowerReal, n: u32) -> Result<TowerReal, TowerError> {
        if a.lo.order(&Level::ONE) == Ordering::Less {
            return Err(TowerError::Domain("tetration base must be >= 1"));
        }
        if n == 0 {
            return Ok(TowerReal::ONE);
        }
        if a.is_point() && a.lo == Level::E {
            return Ok(TowerReal::point(Level {
                height: n + 1,
                residue: 0.0,
            }));
        }
        let mut t = TowerReal::ONE;
        for _ in 0..n {
            t = a.pow(&t);
        }
        Ok(t)
    }

    /// `e↑↑n`, exactly.
    pub fn e_tower(n: u32) -> TowerReal {
        TowerReal::point(Level {
            height: n + 1,
            residue: 0.0,
        })
    }

    /// Readable form: a decimal enclosure when small, else `exp^h(r)`.
    pub fn human(&self) -> String {
        match self.to_interval() {
            Some(iv) if iv.hi < 1e15 => format!("≈{:.6}", iv.mid()),
            Some(iv) => format!("≈{:.6e}", iv.mid()),
            None => format!("exp^{}({:.6})", self.hi.height, self.hi.residue),
        }
    }
}

impl fmt::Display for TowerReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo.height == self.hi.height {
            write!(
                f,
                "T({}; {}, {})",
                self.lo.height, self.lo.residue, self.hi.residue
            )
        } else {
            write!(f, "T({}, {})", self.lo, self.hi)
        }
    }
}

impl FromStr for TowerReal {
    type Err = TowerError;

    /// Parses `T(h; lo, hi)` or `T(h1; lo, h2; hi)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TowerError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix("T(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = body.split(';').map(str::trim).collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let height = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        let (lo, hi) = match parts.as_slice() {
            [h, rest] => {
                let h = height(h)?;
                let (a, b) = rest.split_once(',').ok_or_else(bad)?;
                (Level::new(h, num(a)?)?, Level::new(h, num(b)?)?)
            }
            [h1, mid, r2] => {
                let (a, h2) = mid.split_once(',').ok_or_else(bad)?;
                (
                    Level::new(height(h1)?, num(a)?)?,
                    Level::new(height(h2)?, num(r2)?)?,
                )
            }
            _ => return Err(bad()),
        };
        TowerReal::from_levels(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(x: f64) -> TowerReal {
        TowerReal::from_real(x).unwrap()
    }

    #[test]
    fn from_real_small_values() {
        let h = tr(0.5);
        assert_eq!(h.height(), Some(0));
        assert!(h.contains_level(Level::new(0, 0.5).unwrap()));
        assert_eq!(tr(0.0), TowerReal::ZERO);
        assert_eq!(tr(1.0), TowerReal::ONE);
    }

    #[test]
    fn from_real_near_e_encloses_e() {
        // the f64 constant lies below e, so its enclosure straddles level 2
        let t = tr(std::f64::consts::E);
        assert!(t.contains_level(Level::E) || t.hi.order(&Level::E) == Ordering::Less);
        assert_eq!(t.lo.height(), 1);
    }

    #[test]
    fn from_real_below_and_above_e_to_the_e() {
        // e^e = 15.15426..., so 15.154 sits just below level 3
        let t = tr(15.154);
        assert_eq!(t.height(), Some(2));
        let r = 15.154f64.ln().ln();
        assert!((t.lo.residue() - r).abs() < 1e-14);
        let t = tr(15.2);
        assert_eq!(t.height(), Some(3));
        assert_eq!(t.iter_log(), Some(3));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(TowerReal::from_real(-1.0), Err(TowerError::Negative(-1.0)));
        assert_eq!(TowerReal::from_real(f64::NAN), Err(TowerError::NonFinite));
        assert!(Level::new(0, 1.0).is_err());
        assert!(TowerReal::from_real(0.5).unwrap().ln().is_err());
    }

    #[test]
    fn tetration_of_e_is_exact() {
        assert_eq!(
            TowerReal::tetrate(&TowerReal::e(), 0).unwrap(),
            TowerReal::ONE
        );
        for n in 0..=6 {
            let t = TowerReal::tetrate(&TowerReal::e(), n).unwrap();
            assert_eq!(t.iter_log(), Some(n));
        }
        let ee = TowerReal::tetrate(&TowerReal::e(), 2).unwrap();
        assert!(ee.to_interval().unwrap().contains(15.154262241479262));
    }

    #[test]
    fn tetration_generic_base() {
        let two = tr(2.0);
        let t = TowerReal::tetrate(&two, 3).unwrap();
        assert!(t.to_interval().unwrap().contains(16.0));
        let t = TowerReal::tetrate(&two, 4).unwrap();
        assert!(t.to_interval().unwrap().contains(65536.0));
        assert!(TowerReal::tetrate(&tr(0.5), 2).is_err());
    }

    #[test]
    fn iter_log_basics() {
        assert_eq!(TowerReal::ONE.iter_log(), Some(0));
        assert_eq!(tr(0.3).iter_log(), Some(0));
        assert_eq!(tr(2.0).iter_log(), Some(1));
        assert_eq!(tr(3.0).iter_log(), Some(2));
    }

    #[test]
    fn cmp_cases() {
        let e3 = TowerReal::e_tower(3);
        let e4 = TowerReal::e_tower(4);
        assert_eq!(e3.cmp(&e4), Cmp3::Less);
        assert_eq!(e4.cmp(&e3), Cmp3::Greater);
        assert_eq!(e3.cmp(&e3), Cmp3::Indeterminate);
        assert_eq!(tr(2.0).cmp(&tr(3.0)), Cmp3::Less);
    }

    #[test]
    fn small_arithmetic_contains_exact() {
        assert!(tr(2.0).mul(&tr(3.0)).contains_f64(6.0));
        assert!(tr(2.0).add(&tr(3.0)).contains_f64(5.0));
        assert!(tr(2.0).pow(&tr(10.0)).contains_f64(1024.0));
        assert!(tr(0.5).pow(&tr(3.0)).contains_f64(0.125));
        assert!(tr(7.0).sub(&tr(2.5)).unwrap().contains_f64(4.5));
        assert!(tr(1.0).sub(&tr(2.0)).is_err());
    }

    #[test]
    fn huge_arithmetic_is_ordered() {
        let big = TowerReal::e_tower(4);
        let sum = big.add(&big);
        assert_eq!(big.cmp(&sum), Cmp3::Less);
        // one level up the doubling is absorbed into the upper endpoint
        let bigger = TowerReal::e_tower(5);
        let sum5 = bigger.add(&bigger);
        assert_eq!(sum5.lo, bigger.lo);
        assert_eq!(bigger.cmp(&sum5), Cmp3::Indeterminate);
        let sq = big.mul(&big);
        assert_eq!(sq.cmp(&sum), Cmp3::Greater);
        let p = big.pow(&tr(2.0));
        // x^2 = x * x
        assert_ne!(p.cmp(&sq), Cmp3::Greater);
        assert_ne!(p.cmp(&sq), Cmp3::Less);
    }

    #[test]
    fn mul_huge_by_small() {
        let big = TowerReal::from_real(1e200).unwrap().mul(&tr(1e200));
        let half = big.mul(&tr(0.5));
        // 1e400 / 2 = 5e399 -> ln = 920.4...
        let ln = half.ln().unwrap().to_interval().unwrap();
        let expect = 5f64.ln() + 399.0 * 10f64.ln();
        assert!(ln.lo <= expect && expect <= ln.hi, "{ln} vs {expect}");
        assert!(ln.width() < 1e-10);
    }

    #[test]
    fn ceil_small_and_huge() {
        let c = tr(15.2).ceil();
        assert!(c.contains_f64(16.0));
        let huge = TowerReal::e_tower(4);
        let c = huge.ceil();
        assert_eq!(c.lo, huge.lo);
        assert_ne!(c.hi.order(&huge.hi), Ordering::Less);
    }

    #[test]
    fn text_roundtrip() {
        for t in [
            tr(0.25),
            tr(123.456),
            TowerReal::e_tower(5),
            tr(std::f64::consts::E),
        ] {
            let s = t.to_string();
            let back: TowerReal = s.parse().unwrap();
            assert_eq!(back, t, "{s}");
        }
        assert_eq!(TowerReal::e_tower(2).to_string(), "T(3; 0, 0)");
        assert!("T(1; 0.5)".parse::<TowerReal>().is_err());
        assert!("T(1; 0.6, 0.5)".parse::<TowerReal>().is_err());
    }

    #[test]
    fn normalize_idempotent() {
        for &(h, r) in &[(0u32, 37.5), (2, 0.3), (1, 5.0), (3, -0.2), (0, 1.0)] {
            for dir in [Dir::Down, Dir::Up] {
                let once = Level::normalize(h, r, dir);
                let twice = Level::normalize(once.height, once.residue, dir);
                assert_eq!(once, twice);
            }
        }
    }

    #[test]
    fn biguint_enclosure() {
        let n = BigUint::from(1u32) << 2000u32;
        let t = TowerReal::from_biguint(&n);
        let ln = t.ln().unwrap().to_interval().unwrap();
        assert!(ln.contains(2000.0 * 2f64.ln()));
        assert!(TowerReal::from_biguint(&BigUint::from(252u32)).contains_f64(252.0));
    }
}
