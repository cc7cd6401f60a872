//! Closed `f64` intervals with outward rounding.
//!
//! Basic IEEE operations are correctly rounded to nearest, so one ulp of
//! widening per operation encloses the exact result. libm transcendental
//! functions are not correctly rounded; they get two ulps.

use std::fmt;

const LIBM_ULPS: u32 = 2;

#[inline]
pub(crate) fn up(x: f64) -> f64 {
    x.next_up()
}

#[inline]
pub(crate) fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
pub(crate) fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

#[inline]
pub(crate) fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

/// Rounding direction for a single bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Down,
    Up,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Down => Dir::Up,
            Dir::Up => Dir::Down,
        }
    }

    #[inline]
    pub(crate) fn round(self, x: f64) -> f64 {
        match self {
            Dir::Down => down(x),
            Dir::Up => up(x),
        }
    }

    #[inline]
    pub(crate) fn round_libm(self, x: f64) -> f64 {
        match self {
            Dir::Down => down_n(x, LIBM_ULPS),
            Dir::Up => up_n(x, LIBM_ULPS),
        }
    }
}

/// `a + b` rounded in `dir`, exact when representable (TwoSum residual).
pub(crate) fn add_dir(a: f64, b: f64, dir: Dir) -> f64 {
    let s = a + b;
    if !s.is_finite() {
        return overflowed(s, dir);
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    settle(s, err, dir)
}

pub(crate) fn sub_dir(a: f64, b: f64, dir: Dir) -> f64 {
    add_dir(a, -b, dir)
}

/// `a * b` rounded in `dir`; the FMA residual is exact.
pub(crate) fn mul_dir(a: f64, b: f64, dir: Dir) -> f64 {
    let p = a * b;
    if !p.is_finite() {
        return overflowed(p, dir);
    }
    if p == 0.0 || p.is_subnormal() {
        // residual may underflow; fall back to one ulp
        return if a == 0.0 || b == 0.0 {
            0.0
        } else {
            dir.round(p)
        };
    }
    settle(p, a.mul_add(b, -p), dir)
}

/// `a / b` rounded in `dir`, `b != 0`.
pub(crate) fn div_dir(a: f64, b: f64, dir: Dir) -> f64 {
    let q = a / b;
    if !q.is_finite() {
        return overflowed(q, dir);
    }
    if q == 0.0 || q.is_subnormal() {
        return if a == 0.0 { 0.0 } else { dir.round(q) };
    }
    // a - q b, exact; the true quotient is q + r / b
    let r = (-q).mul_add(b, a);
    let err = if b > 0.0 { r } else { -r };
    settle(q, err, dir)
}

fn settle(x: f64, err: f64, dir: Dir) -> f64 {
    match dir {
        Dir::Up if err > 0.0 => up(x),
        Dir::Down if err < 0.0 => down(x),
        _ => x,
    }
}

fn overflowed(x: f64, dir: Dir) -> f64 {
    match (dir, x) {
        (Dir::Down, v) if v == f64::INFINITY => f64::MAX,
        (Dir::Up, v) if v == f64::NEG_INFINITY => f64::MIN,
        _ => x,
    }
}

pub(crate) fn ln_dir(x: f64, dir: Dir) -> f64 {
    if x == 1.0 {
        return 0.0;
    }
    dir.round_libm(x.ln())
}

pub(crate) fn exp_dir(x: f64, dir: Dir) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let v = dir.round_libm(x.exp());
    if dir == Dir::Down {
        v.max(0.0)
    } else {
        v
    }
}

/// A closed interval `[lo, hi]` of reals, `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Interval containing the exact value of an integer, even above 2^53.
    pub fn from_u64(n: u64) -> Self {
        let x = n as f64;
        if x as u64 == n && x < 9.007_199_254_740_992e15 {
            Interval::point(x)
        } else {
            Interval::new(down(x), up(x))
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::new(
            add_dir(self.lo, o.lo, Dir::Down),
            add_dir(self.hi, o.hi, Dir::Up),
        )
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval::new(
            sub_dir(self.lo, o.hi, Dir::Down),
            sub_dir(self.hi, o.lo, Dir::Up),
        )
    }

    pub fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(self, o: Interval) -> Interval {
        let pairs = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let lo = pairs
            .iter()
            .map(|&(a, b)| mul_dir(a, b, Dir::Down))
            .fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| mul_dir(a, b, Dir::Up))
            .fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }

    /// Division; the divisor must not contain zero.
    pub fn div(self, o: Interval) -> Interval {
        assert!(
            o.lo > 0.0 || o.hi < 0.0,
            "division by interval containing 0"
        );
        let pairs = [
            (self.lo, o.lo),
            (self.lo, o.hi),
            (self.hi, o.lo),
            (self.hi, o.hi),
        ];
        let lo = pairs
            .iter()
            .map(|&(a, b)| div_dir(a, b, Dir::Down))
            .fold(f64::INFINITY, f64::min);
        let hi = pairs
            .iter()
            .map(|&(a, b)| div_dir(a, b, Dir::Up))
            .fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }

    pub fn scale(self, k: f64) -> Interval {
        self.mul(Interval::point(k))
    }

    /// Natural log; requires `lo > 0`.
    pub fn ln(self) -> Interval {
        assert!(self.lo > 0.0, "ln of non-positive interval");
        Interval::new(ln_dir(self.lo, Dir::Down), ln_dir(self.hi, Dir::Up))
    }

    pub fn exp(self) -> Interval {
        Interval::new(exp_dir(self.lo, Dir::Down), exp_dir(self.hi, Dir::Up))
    }

    pub fn sqrt(self) -> Interval {
        assert!(self.lo >= 0.0);
        let root = |x: f64, dir: Dir| {
            let r = x.sqrt();
            // x - r^2, exact
            settle(r, (-r).mul_add(r, x), dir)
        };
        Interval::new(root(self.lo, Dir::Down), root(self.hi, Dir::Up))
    }

    /// `self^p` for a positive base, via `exp(p ln self)`.
    pub fn powf(self, p: Interval) -> Interval {
        self.ln().mul(p).exp()
    }

    /// `self^k` by repeated squaring; exact steps stay exact.
    pub fn powi(self, mut k: u32) -> Interval {
        assert!(self.lo >= 0.0, "powi of a possibly negative interval");
        let mut base = self;
        let mut acc = Interval::point(1.0);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// Three-way comparison; `Indeterminate` when the intervals overlap.
    pub fn cmp3(&self, o: &Interval) -> crate::tower::Cmp3 {
        use crate::tower::Cmp3;
        if self.hi < o.lo {
            Cmp3::Less
        } else if self.lo > o.hi {
            Cmp3::Greater
        } else {
            Cmp3::Indeterminate
        }
    }

    pub fn max(self, o: Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    pub fn ceil(self) -> Interval {
        Interval::new(self.lo.ceil(), self.hi.ceil())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_basic_ops() {
        let a = Interval::point(0.1);
        let b = Interval::point(0.2);
        let s = a.add(b);
        assert!(s.contains(0.30000000000000004));
        assert!(s.lo < s.hi);
        assert!(Interval::point(2.0).add(Interval::point(3.0)).is_point());
        assert!(Interval::point(1.5).powi(2).contains(2.25));
        assert!(Interval::point(1.5).powi(2).is_point());
        assert!(Interval::point(2.0).sqrt().lo < Interval::point(2.0).sqrt().hi);
        assert!(Interval::point(4.0).sqrt().is_point());
        let third = Interval::point(1.0).div(Interval::point(3.0));
        assert!(third.lo < third.hi);
        assert!(third.mul(Interval::point(3.0)).contains(1.0));
    }

    #[test]
    fn ln_exp_roundtrip_contains() {
        for &x in &[1.5, 2.0, 10.0, 1e10, 1e300] {
            let r = Interval::point(x).ln().exp();
            assert!(r.contains(x), "{x} not in {r}");
        }
        assert_eq!(Interval::point(1.0).ln(), Interval::point(0.0));
    }

    #[test]
    fn from_u64_large() {
        let n = (1u64 << 60) + 1;
        let iv = Interval::from_u64(n);
        assert!(iv.lo <= n as f64 && iv.hi >= n as f64);
        assert!(Interval::from_u64(12).is_point());
    }
}
