//! Outward-rounded f64 intervals and complex disks.
//!
//! Every operation widens its result by at least one ulp in each direction,
//! which dominates the rounding error of the underlying f64 operation.

use num_complex::Complex64;

const U: f64 = f64::EPSILON * 0.5;

fn up(x: f64) -> f64 {
    x.next_up()
}

fn down(x: f64) -> f64 {
    x.next_down()
}

/// Closed real interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Iv {
    pub lo: f64,
    pub hi: f64,
}

impl Iv {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi || lo.is_nan() || hi.is_nan(), "bad interval [{lo}, {hi}]");
        Iv { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Iv { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn add(self, o: Iv) -> Iv {
        Iv::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }

    pub fn sub(self, o: Iv) -> Iv {
        Iv::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }

    pub fn mul(self, o: Iv) -> Iv {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Iv::new(down(lo), up(hi))
    }

    /// Reciprocal of an interval not containing zero.
    pub fn recip(self) -> Iv {
        assert!(self.lo > 0.0 || self.hi < 0.0, "reciprocal of interval containing 0");
        Iv::new(down(1.0 / self.hi), up(1.0 / self.lo))
    }

    pub fn div(self, o: Iv) -> Iv {
        self.mul(o.recip())
    }

    /// Natural log of a positive interval; libm log is within 1 ulp, so two
    /// ulps of widening is safe.
    pub fn ln(self) -> Iv {
        assert!(self.lo > 0.0);
        Iv::new(down(down(self.lo.ln())), up(up(self.hi.ln())))
    }

    pub fn exp(self) -> Iv {
        Iv::new(down(down(self.lo.exp())).max(0.0), up(up(self.hi.exp())))
    }

    pub fn sqrt(self) -> Iv {
        Iv::new(down(self.lo.max(0.0).sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    /// Multiplication by a nonnegative scalar known exactly.
    pub fn scale(self, k: f64) -> Iv {
        self.mul(Iv::point(k))
    }

    pub fn max1(self) -> Iv {
        Iv::new(self.lo.max(1.0), self.hi.max(1.0))
    }

    pub fn hull(self, o: Iv) -> Iv {
        Iv::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }

    pub fn intersects(&self, o: &Iv) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }
}

/// Closed complex disk `{z : |z - c| <= r}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub c: Complex64,
    pub r: f64,
}

/// Upper bound on the rounding error of a complex f64 result of size `m`.
fn err(m: f64) -> f64 {
    up(4.0 * U * m)
}

/// Upper bound for |z|.
pub fn abs_up(z: Complex64) -> f64 {
    up(up(z.norm()))
}

/// Lower bound for |z|.
pub fn abs_down(z: Complex64) -> f64 {
    down(down(z.norm())).max(0.0)
}

impl Disk {
    pub fn new(c: Complex64, r: f64) -> Self {
        Disk { c, r }
    }

    pub fn point(c: Complex64) -> Self {
        Disk { c, r: 0.0 }
    }

    pub fn abs(&self) -> Iv {
        Iv::new(down(abs_down(self.c) - self.r).max(0.0), up(abs_up(self.c) + self.r))
    }

    pub fn re(&self) -> Iv {
        Iv::new(down(self.c.re - self.r), up(self.c.re + self.r))
    }

    pub fn im(&self) -> Iv {
        Iv::new(down(self.c.im - self.r), up(self.c.im + self.r))
    }

    pub fn add(&self, o: &Disk) -> Disk {
        let c = self.c + o.c;
        Disk { c, r: up(up(self.r + o.r) + err(abs_up(c))) }
    }

    pub fn sub(&self, o: &Disk) -> Disk {
        let c = self.c - o.c;
        Disk { c, r: up(up(self.r + o.r) + err(abs_up(c))) }
    }

    pub fn neg(&self) -> Disk {
        Disk { c: -self.c, r: self.r }
    }

    pub fn mul(&self, o: &Disk) -> Disk {
        let c = self.c * o.c;
        let a = abs_up(self.c);
        let b = abs_up(o.c);
        let r = up(up(up(a * o.r) + up(b * self.r)) + up(self.r * o.r));
        Disk { c, r: up(r + err(up(a * b))) }
    }

    pub fn add_scalar(&self, k: f64) -> Disk {
        let c = self.c + k;
        Disk { c, r: up(self.r + err(abs_up(c))) }
    }

    /// Inverse of a disk avoiding zero.
    pub fn recip(&self) -> Option<Disk> {
        let m = abs_down(self.c);
        if !(m > self.r) {
            return None;
        }
        let c = 1.0 / self.c;
        // |1/z - 1/c| = |z - c| / (|z||c|) <= r / ((|c| - r)|c|)
        let den = down(down(m - self.r) * m);
        Some(Disk { c, r: up(up(self.r / den) + err(abs_up(c))) })
    }

    /// Principal square root on a disk avoiding zero, using
    /// `|sqrt z - sqrt c| <= sqrt|c| * rho / (1 + sqrt(1 - rho))`, `rho = r/|c|`.
    pub fn sqrt(&self) -> Option<Disk> {
        let m = abs_down(self.c);
        if !(m > self.r) {
            return None;
        }
        let s = self.c.sqrt();
        let rho = up(self.r / m);
        let sm = up(abs_up(self.c).sqrt());
        let den = down(1.0 + down((down(1.0 - rho)).max(0.0).sqrt()));
        let r = up(up(sm * rho) / den);
        Some(Disk { c: s, r: up(r + err(abs_up(s))) })
    }

    pub fn conj(&self) -> Disk {
        Disk { c: self.c.conj(), r: self.r }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        abs_up(z - self.c) <= self.r
    }

    /// True when the disks are certainly disjoint.
    pub fn disjoint(&self, o: &Disk) -> bool {
        let d = abs_down(self.c - o.c) * (1.0 - 4.0 * U);
        d > up(self.r + o.r)
    }

    pub fn intersects(&self, o: &Disk) -> bool {
        !self.disjoint(o)
    }

    /// Interval enclosing `Arg z` for the disk, in radians, valid when the
    /// disk avoids the origin. The interval may extend beyond `[-pi, pi]`.
    pub fn arg(&self) -> Option<Iv> {
        let m = abs_down(self.c);
        if !(m > self.r) {
            return None;
        }
        let a = self.c.im.atan2(self.c.re);
        let half = up((up(self.r / m)).min(1.0).asin()) + 8.0 * U * (1.0 + a.abs());
        Some(Iv::new(down(a - half), up(a + half)))
    }
}
