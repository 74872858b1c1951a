//! Fixed-length arithmetic over truncated Euclidean numbers.
//!
//! A [`Ban`] (bounded algorithmic number) encodes
//!
//! ```text
//!     α^p · (c₀ + c₁η + c₂η² + … + c_{L−1}η^{L−1}),      η = α⁻¹
//! ```
//!
//! where `α` is the distinguished infinite unit, `p` is an integer power and
//! the `L` real coefficients are the monosemia retained by the encoding. All
//! operations truncate their exact result to the `L` highest-order monosemia
//! of the dominant operand, so the value behaves like a floating-point window
//! over the field of Euclidean numbers.
//!
//! Nonzero values keep `c₀ ≠ 0`; zero is the canonical all-zero element with
//! power 0. Every operand pair in one computation must share the same `L`.
//!
//! Values are immutable and all operations are pure functions, so `Ban`s can
//! be shared freely across threads.

mod text;

pub use text::{ParseError, ParseErrorKind};

use std::cmp::Ordering;
use std::error::Error;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::real::Real;

/// Error raised by partial operations on [`Ban`] values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BanError {
    /// Reciprocal (or division by) the zero element.
    DivisionByZero,
    /// Order of magnitude of zero is undefined at this layer; callers apply
    /// the `O(0) = 1` convention themselves where it is meaningful.
    MagnitudeOfZero,
    /// Square root of a negative value.
    SqrtOfNegative,
    /// Square root of a value whose leading power is odd.
    SqrtOddPower(i64),
}

impl fmt::Display for BanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BanError::DivisionByZero => write!(f, "division by zero"),
            BanError::MagnitudeOfZero => write!(f, "order of magnitude of zero is undefined"),
            BanError::SqrtOfNegative => write!(f, "square root of a negative value"),
            BanError::SqrtOddPower(p) => {
                write!(f, "square root requires an even leading power, got {p}")
            }
        }
    }
}

impl Error for BanError {}

/// Truncated Euclidean number with `L` stored monosemia.
#[derive(Clone, Debug)]
pub struct Ban<R: Real = f64> {
    power: i64,
    coeffs: Vec<R>,
}

impl<R: Real> Ban<R> {
    /// The canonical zero with `len` coefficient slots.
    pub fn zero(len: usize) -> Self {
        assert!(len >= 1, "a Ban needs at least one coefficient slot");
        Ban { power: 0, coeffs: vec![R::zero(); len] }
    }

    /// Embeds a real value (power 0, single coefficient).
    pub fn real(v: R, len: usize) -> Self {
        Self::monosemium(v, 0, len)
    }

    /// A single term `c·α^power`.
    pub fn monosemium(c: R, power: i64, len: usize) -> Self {
        assert!(len >= 1, "a Ban needs at least one coefficient slot");
        if c.is_zero() {
            return Self::zero(len);
        }
        let mut coeffs = vec![R::zero(); len];
        coeffs[0] = c;
        Ban { power, coeffs }
    }

    /// The infinite unit `α`.
    pub fn alpha(len: usize) -> Self {
        Self::monosemium(R::one(), 1, len)
    }

    /// The infinitesimal unit `η = α⁻¹`.
    pub fn eta(len: usize) -> Self {
        Self::monosemium(R::one(), -1, len)
    }

    /// Builds a value from a leading power and raw coefficients, normalizing
    /// the representation (leading zeros shifted out, cancellation noise
    /// flushed).
    pub fn new(power: i64, coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a Ban needs at least one coefficient slot");
        Self::normalized(power, coeffs)
    }

    /// Parses a BAN literal such as `"2.5a^2-3a+1"` (`a` = α, `n` = η).
    pub fn parse(text: &str, len: usize) -> Result<Self, ParseError> {
        text::parse(text, len)
    }

    fn normalized(power: i64, mut coeffs: Vec<R>) -> Self {
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => {
                for c in coeffs.iter_mut() {
                    *c = R::zero();
                }
                Ban { power: 0, coeffs }
            }
            Some(0) => Ban { power, coeffs },
            Some(k) => {
                let len = coeffs.len();
                coeffs.rotate_left(k);
                for c in coeffs.iter_mut().skip(len - k) {
                    *c = R::zero();
                }
                Ban { power: power - k as i64, coeffs }
            }
        }
    }

    /// Number of stored monosemia (`L`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Power of α attached to the leading coefficient (0 for the zero value).
    pub fn power(&self) -> i64 {
        self.power
    }

    /// The stored coefficients `c₀ … c_{L−1}`.
    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Leading coefficient `c₀` (zero for the zero value).
    pub fn leading_coeff(&self) -> R {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs[0] > R::zero()
    }

    pub fn is_negative(&self) -> bool {
        self.coeffs[0] < R::zero()
    }

    /// Coefficient of the monosemium `α^p`, zero when `p` lies outside the
    /// stored window.
    pub fn coeff_at_power(&self, p: i64) -> R {
        if self.is_zero() {
            return R::zero();
        }
        let idx = self.power - p;
        if idx < 0 || idx >= self.len() as i64 {
            R::zero()
        } else {
            self.coeffs[idx as usize]
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.len(),
            other.len(),
            "operands must share the same number of monosemium slots"
        );
    }

    /// Zeroes slots holding pure cancellation residue: the accumulated sum is
    /// float noise relative to the magnitudes that were combined there.
    fn flush_cancellation(out: &mut [R], scale: &[R]) {
        for (c, s) in out.iter_mut().zip(scale.iter()) {
            if c.abs() < *s * R::FLUSH_RELATIVE {
                *c = R::zero();
            }
        }
    }

    /// Truncates tail coefficients too large to be jointly representable
    /// with the leading one in the coefficient precision.
    fn windowed(mut self) -> Self {
        if self.is_zero() {
            return self;
        }
        let cap = self.coeffs[0].abs() * R::WINDOW_RELATIVE;
        let mut cut = false;
        for c in self.coeffs.iter_mut().skip(1) {
            if cut || c.abs() > cap {
                *c = R::zero();
                cut = true;
            }
        }
        self
    }

    fn add_impl(&self, other: &Self) -> Self {
        self.check_compatible(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let len = self.len();
        let p = self.power.max(other.power);
        let mut out = vec![R::zero(); len];
        let mut scale = vec![R::zero(); len];
        for part in [self, other] {
            let shift = p - part.power;
            if shift >= len as i64 {
                continue; // entirely absorbed by the larger operand
            }
            let shift = shift as usize;
            for i in 0..(len - shift) {
                out[i + shift] = out[i + shift] + part.coeffs[i];
                scale[i + shift] = scale[i + shift] + part.coeffs[i].abs();
            }
        }
        Self::flush_cancellation(&mut out, &scale);
        Self::normalized(p, out)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let len = self.len();
        if self.is_zero() || other.is_zero() {
            return Self::zero(len);
        }
        let mut out = vec![R::zero(); len];
        let mut scale = vec![R::zero(); len];
        for i in 0..len {
            let a = self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..(len - i) {
                let term = a * other.coeffs[j];
                out[i + j] = out[i + j] + term;
                scale[i + j] = scale[i + j] + term.abs();
            }
        }
        Self::flush_cancellation(&mut out, &scale);
        Self::normalized(self.power + other.power, out)
    }

    fn neg_impl(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Ban { power: self.power, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    /// Multiplies all coefficients by a real scalar.
    pub fn scale(&self, r: R) -> Self {
        if r.is_zero() || self.is_zero() {
            return Self::zero(self.len());
        }
        Self::normalized(self.power, self.coeffs.iter().map(|c| *c * r).collect())
    }

    /// Multiplies by the monosemium `α^k` (a pure power shift).
    pub fn mul_alpha_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Ban { power: self.power + k, coeffs: self.coeffs.clone() }
    }

    /// Series reciprocal: for `a = c₀α^p(1 + t)` with `t` infinitesimal,
    /// returns `α^{−p}c₀⁻¹(1 − t + t² − …)` truncated to `L` terms.
    pub fn reciprocal(&self) -> Result<Self, BanError> {
        if self.is_zero() {
            return Err(BanError::DivisionByZero);
        }
        let len = self.len();
        let c0 = self.coeffs[0];
        let mut t = vec![R::zero(); len];
        for i in 1..len {
            t[i] = self.coeffs[i] / c0;
        }
        let mut sum = vec![R::zero(); len];
        sum[0] = R::one();
        let mut term = sum.clone();
        for _ in 1..len {
            term = poly_mul_tail(&term, &t, len);
            for c in term.iter_mut() {
                *c = c.neg();
            }
            for i in 0..len {
                sum[i] = sum[i] + term[i];
            }
        }
        for c in sum.iter_mut() {
            *c = *c / c0;
        }
        Ok(Self::normalized(-self.power, sum).windowed())
    }

    /// Division through [`Ban::reciprocal`].
    pub fn checked_div(&self, other: &Self) -> Result<Self, BanError> {
        Ok(self.mul_impl(&other.reciprocal()?))
    }

    /// Square root of a nonnegative value whose leading power is even,
    /// via the binomial series for `(1 + t)^{1/2}`.
    pub fn sqrt_even(&self) -> Result<Self, BanError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.is_negative() {
            return Err(BanError::SqrtOfNegative);
        }
        if self.power % 2 != 0 {
            return Err(BanError::SqrtOddPower(self.power));
        }
        let len = self.len();
        let c0 = self.coeffs[0];
        let mut t = vec![R::zero(); len];
        for i in 1..len {
            t[i] = self.coeffs[i] / c0;
        }
        let mut sum = vec![R::zero(); len];
        sum[0] = R::one();
        let mut term = sum.clone();
        let mut binom = R::one();
        let half = R::of(0.5);
        for k in 1..len {
            binom = binom * (half - R::of((k - 1) as f64)) / R::of(k as f64);
            term = poly_mul_tail(&term, &t, len);
            for i in 0..len {
                sum[i] = sum[i] + binom * term[i];
            }
        }
        let root = c0.sqrt();
        for c in sum.iter_mut() {
            *c = *c * root;
        }
        Ok(Self::normalized(self.power / 2, sum).windowed())
    }

    /// Total order: the sign of the difference, decided on the first aligned
    /// monosemium whose coefficients differ. Ordering never applies the
    /// cancellation flush; a value like `10⁻²⁰α` must still compare above
    /// every real.
    pub fn compare(&self, other: &Self) -> Ordering {
        self.check_compatible(other);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if other.is_positive() { Ordering::Less } else { Ordering::Greater }
            }
            (false, true) => {
                return if self.is_positive() { Ordering::Greater } else { Ordering::Less }
            }
            _ => {}
        }
        let hi = self.power.max(other.power);
        let lo = (self.power.min(other.power)) - self.len() as i64 + 1;
        let mut p = hi;
        while p >= lo {
            let d = self.coeff_at_power(p) - other.coeff_at_power(p);
            if d > R::zero() {
                return Ordering::Greater;
            }
            if d < R::zero() {
                return Ordering::Less;
            }
            p -= 1;
        }
        Ordering::Equal
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_impl(&other.neg_impl())
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg_impl()
        } else {
            self.clone()
        }
    }

    /// Zeroes coefficients that are float noise relative to the value's
    /// dominant coefficient. Iterative processes apply this to their state
    /// so that a geometrically decaying leading residue eventually yields
    /// the lead to the honest content below it.
    pub fn denoised(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let max = self.coeffs.iter().fold(R::zero(), |m, c| m.max(c.abs()));
        let thresh = max * R::FLUSH_RELATIVE;
        let mut coeffs = self.coeffs.clone();
        let mut changed = false;
        for c in coeffs.iter_mut() {
            if !c.is_zero() && c.abs() < thresh {
                *c = R::zero();
                changed = true;
            }
        }
        if changed {
            Self::normalized(self.power, coeffs)
        } else {
            self.clone()
        }
    }

    /// Leading monosemium; zero maps to zero.
    pub fn lead_mon(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::monosemium(self.coeffs[0], self.power, self.len())
    }

    /// The single monosemium with the numerically dominant coefficient
    /// (highest power on ties). When a value mixes levels, this is the term
    /// float arithmetic actually resolved; a leading term orders of
    /// magnitude smaller in coefficient is treated as subordinate.
    pub fn dominant_mon(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut best = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.abs() > self.coeffs[best].abs() {
                best = i;
            }
        }
        Self::monosemium(self.coeffs[best], self.power - best as i64, self.len())
    }

    /// Order of magnitude `O(·)`: `α^p` with coefficient 1.
    pub fn magnitude(&self) -> Result<Self, BanError> {
        if self.is_zero() {
            return Err(BanError::MagnitudeOfZero);
        }
        Ok(Self::monosemium(R::one(), self.power, self.len()))
    }

    /// Smallest order of magnitude `o(·)`: α to the power of the last stored
    /// nonzero monosemium.
    pub fn smallest_order(&self) -> Result<Self, BanError> {
        if self.is_zero() {
            return Err(BanError::MagnitudeOfZero);
        }
        let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        Ok(Self::monosemium(R::one(), self.power - last as i64, self.len()))
    }

    /// True when `|self|` is below every positive real, i.e. the leading
    /// power is negative.
    pub fn is_infinitesimal(&self) -> bool {
        !self.is_zero() && self.power < 0
    }

    /// True when `|self|` exceeds every real, i.e. the leading power is
    /// positive.
    pub fn is_infinite_value(&self) -> bool {
        !self.is_zero() && self.power > 0
    }
}

/// Truncated product of two coefficient sequences (polynomials in η).
fn poly_mul_tail<R: Real>(a: &[R], b: &[R], len: usize) -> Vec<R> {
    let mut out = vec![R::zero(); len];
    for i in 0..len {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..(len - i) {
            out[i + j] = out[i + j] + a[i] * b[j];
        }
    }
    out
}

impl<R: Real> PartialEq for Ban<R> {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl<R: Real> PartialOrd for Ban<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl<R: Real> $trait for Ban<R> {
            type Output = Ban<R>;
            fn $method(self, rhs: Ban<R>) -> Ban<R> {
                self.$impl_fn(&rhs)
            }
        }
        impl<R: Real> $trait<&Ban<R>> for Ban<R> {
            type Output = Ban<R>;
            fn $method(self, rhs: &Ban<R>) -> Ban<R> {
                self.$impl_fn(rhs)
            }
        }
        impl<R: Real> $trait<Ban<R>> for &Ban<R> {
            type Output = Ban<R>;
            fn $method(self, rhs: Ban<R>) -> Ban<R> {
                self.$impl_fn(&rhs)
            }
        }
        impl<R: Real> $trait<&Ban<R>> for &Ban<R> {
            type Output = Ban<R>;
            fn $method(self, rhs: &Ban<R>) -> Ban<R> {
                self.$impl_fn(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_impl);

impl<R: Real> Div for Ban<R> {
    type Output = Ban<R>;
    fn div(self, rhs: Ban<R>) -> Ban<R> {
        self.checked_div(&rhs).expect("division by zero Ban")
    }
}

impl<R: Real> Div<&Ban<R>> for &Ban<R> {
    type Output = Ban<R>;
    fn div(self, rhs: &Ban<R>) -> Ban<R> {
        self.checked_div(rhs).expect("division by zero Ban")
    }
}

impl<R: Real> Neg for Ban<R> {
    type Output = Ban<R>;
    fn neg(self) -> Ban<R> {
        self.neg_impl()
    }
}

impl<R: Real> Neg for &Ban<R> {
    type Output = Ban<R>;
    fn neg(self) -> Ban<R> {
        self.neg_impl()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: usize = 5;

    fn b(text: &str) -> Ban {
        Ban::parse(text, L).unwrap()
    }

    fn assert_close(got: &Ban, want: &Ban, tol: f64) {
        assert_eq!(got.len(), want.len());
        let d = got - want;
        if d.is_zero() {
            return;
        }
        let scale = want
            .coeffs()
            .iter()
            .chain(got.coeffs())
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .max(1.0);
        assert!(
            d.power() < want.power() || d.coeffs()[0].abs() <= tol * scale,
            "got {got}, want {want} (diff {d})"
        );
        for (i, c) in d.coeffs().iter().enumerate() {
            let p = d.power() - i as i64;
            let rel_level = want.power() - p;
            if rel_level < L as i64 {
                assert!(c.abs() <= tol * scale, "level {p}: got {got}, want {want}");
            }
        }
    }

    #[test]
    fn add_matches_examples() {
        // α·1 + 2 = α + 2
        let r = Ban::alpha(L) * Ban::real(1.0, L) + Ban::real(2.0, L);
        assert_eq!(r.power(), 1);
        assert_eq!(r.coeffs(), &[1.0, 2.0, 0.0, 0.0, 0.0]);

        // additive identity
        let x = b("2.5a^2-3a+1");
        assert_eq!(&x + Ban::zero(L), x);

        // an operand L powers down is absorbed entirely
        let tiny = Ban::monosemium(1.0, -(L as i64), L);
        assert_eq!(Ban::real(1.0, L) + tiny, Ban::real(1.0, L));
    }

    #[test]
    fn mul_matches_examples() {
        // α(α + 2) = α² + 2α
        let r = Ban::alpha(L) * b("a+2");
        assert_eq!(r, b("a^2+2a"));

        let x = b("-1a+3");
        assert_eq!(&x * Ban::real(1.0, L), x);

        // (1 + η)(1 − η) = 1 − η², exact since the degree fits
        let r = Ban::<f64>::parse("1+n", 3).unwrap() * Ban::parse("1-n", 3).unwrap();
        assert_eq!(r, Ban::parse("1-n^2", 3).unwrap());
    }

    #[test]
    fn division_identity_from_worked_example() {
        // (−10α² + 16 + 42η²) / (5α² + 7) = −2 + 6η²
        let num = b("-10a^2+16+42n^2");
        let den = b("5a^2+7");
        let q = num.checked_div(&den).unwrap();
        assert_close(&q, &b("-2+6n^2"), 1e-12);
    }

    #[test]
    fn reciprocal_basics() {
        assert_eq!(Ban::real(2.0, L).reciprocal().unwrap(), Ban::real(0.5, L));
        assert_eq!(Ban::<f64>::alpha(L).reciprocal().unwrap(), Ban::eta(L));
        assert_eq!(Ban::<f64>::zero(L).reciprocal(), Err(BanError::DivisionByZero));
    }

    #[test]
    fn reciprocal_residual_is_deep() {
        let vals = [b("3a-2+0.5n"), b("-0.25n^2+8n^3"), b("7"), b("1+n+n^2+n^3+n^4")];
        for v in vals {
            let r = &v * v.reciprocal().unwrap() - Ban::real(1.0, L);
            if !r.is_zero() {
                assert!(r.power() <= -(L as i64) + 1, "residual {r} too large for {v}");
            }
        }
    }

    #[test]
    fn sqrt_even_examples() {
        assert_eq!(b("4").sqrt_even().unwrap(), b("2"));
        assert_eq!(b("a^2").sqrt_even().unwrap(), Ban::alpha(L));

        // √(α²(1+η)) = α(1 + η/2 − η²/8 + …); oracle: square back
        let x = b("1a^2+1a");
        let r = x.sqrt_even().unwrap();
        assert_eq!(r.power(), 1);
        assert!((r.coeffs()[0] - 1.0).abs() < 1e-15);
        assert!((r.coeffs()[1] - 0.5).abs() < 1e-15);
        assert!((r.coeffs()[2] + 0.125).abs() < 1e-15);
        assert_close(&(&r * &r), &x, 1e-12);

        assert_eq!(b("-4").sqrt_even(), Err(BanError::SqrtOfNegative));
        assert_eq!(b("a").sqrt_even(), Err(BanError::SqrtOddPower(1)));
        assert!(Ban::<f64>::zero(L).sqrt_even().unwrap().is_zero());
    }

    #[test]
    fn ordering_matches_examples() {
        assert!(Ban::eta(L) < Ban::real(1.0, L));
        assert!(Ban::alpha(L) > Ban::real(1e9, L));
        let x = b("1+n");
        assert_eq!(x.compare(&x), Ordering::Equal);
        assert!(b("1+n") > b("1"));

        // 0 < η < 1 < α < α + 1
        let chain = [Ban::zero(L), Ban::eta(L), Ban::real(1.0, L), Ban::alpha(L), b("a+1")];
        for w in chain.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn lead_mon_and_orders() {
        assert_eq!(b("-840-920n").lead_mon(), b("-840"));
        assert!(Ban::<f64>::zero(L).lead_mon().is_zero());
        assert_eq!(b("3n^2+1n^3").lead_mon(), b("3n^2"));
        // idempotence
        let x = b("2a-3+n");
        assert_eq!(x.lead_mon().lead_mon(), x.lead_mon());

        assert_eq!(b("-0.18a+0.27").magnitude().unwrap(), Ban::alpha(L));
        assert_eq!(b("7").magnitude().unwrap(), Ban::real(1.0, L));
        assert_eq!(Ban::<f64>::zero(L).magnitude(), Err(BanError::MagnitudeOfZero));

        assert_eq!(b("2a-3+n").smallest_order().unwrap(), Ban::eta(L));
        assert_eq!(b("5n^2").smallest_order().unwrap(), b("n^2"));
    }

    #[test]
    fn magnitude_is_multiplicative() {
        let a = b("2a-3");
        let c = b("-4n+1n^2");
        let lhs = (&a * &c).magnitude().unwrap();
        let rhs = a.magnitude().unwrap() * c.magnitude().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_shifts_and_flushes() {
        let x = Ban::new(3, vec![0.0, 0.0, 2.0, -1.0, 0.0]);
        assert_eq!(x.power(), 1);
        assert_eq!(x.coeffs(), &[2.0, -1.0, 0.0, 0.0, 0.0]);

        // leading-level cancellation residue is flushed inside the
        // subtraction, not promoted to a spurious leading monosemium
        let a = Ban::new(2, vec![1.0 + 2.0 * f64::EPSILON, 0.0, 0.0, 3.0, 0.0]);
        let bb = Ban::new(2, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let d = a - bb;
        assert_eq!(d.power(), -1);
        assert_eq!(d.coeffs()[0], 3.0);

        assert!(Ban::<f64>::new(5, vec![0.0; L]).is_zero());
    }

    #[test]
    fn real_embedding_is_exact() {
        let cases = [(1.5, 2.25), (-3.0, 0.125), (0.1, 0.2), (1e8, -2.5e-3)];
        for (x, y) in cases {
            let bx = Ban::real(x, L);
            let by = Ban::real(y, L);
            assert_eq!((&bx + &by).leading_coeff(), x + y);
            assert_eq!((&bx * &by).leading_coeff(), x * y);
            assert_eq!((&bx - &by).leading_coeff(), x - y);
            assert_eq!((&bx / &by).leading_coeff(), x / y);
            assert_eq!(bx.compare(&by), x.partial_cmp(&y).unwrap());
        }
    }

    #[test]
    fn randomized_field_laws() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x0b4e);
        for _ in 0..1000 {
            let mut gen = |deg: usize| {
                let mut coeffs = vec![0.0; L];
                for c in coeffs.iter_mut().take(deg + 1) {
                    *c = rng.gen_range(-4.0..4.0);
                }
                if coeffs[0] == 0.0 {
                    coeffs[0] = 1.0;
                }
                Ban::new(rng.gen_range(-1..=1), coeffs)
            };
            let (a, c, d) = (gen(1), gen(1), gen(1));
            assert_close(&(&a + &c), &(&c + &a), 1e-12);
            assert_close(&(&a * &c), &(&c * &a), 1e-12);
            assert_close(&((&a + &c) + &d), &(&a + (&c + &d)), 1e-12);
            assert_close(&((&a * &c) * &d), &(&a * (&c * &d)), 1e-12);
            assert_close(&(&a * (&c + &d)), &(&(&a * &c) + &(&a * &d)), 1e-12);
        }
    }

    #[test]
    fn compare_is_translation_invariant() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xc0ffee);
        for _ in 0..1000 {
            let mut gen = || {
                let mut coeffs = vec![0.0; L];
                for c in coeffs.iter_mut().take(3) {
                    *c = rng.gen_range(-4.0..4.0);
                }
                Ban::new(rng.gen_range(0..=1), coeffs)
            };
            let (a, c, t) = (gen(), gen(), gen());
            if a < c {
                assert!(&a + &t < &c + &t, "a={a} c={c} t={t}");
            }
        }
    }
}
