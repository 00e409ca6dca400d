//! Float shims (std intrinsics or `libm`), exact binomials, and a small
//! deterministic RNG for stochastic property checks.

#[cfg(feature = "std")]
mod imp {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    #[inline]
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }
    #[inline]
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    #[inline]
    pub fn asinh(x: f64) -> f64 {
        x.asinh()
    }
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        x.hypot(y)
    }
    #[inline]
    pub fn floor(x: f64) -> f64 {
        x.floor()
    }
    #[inline]
    pub fn round(x: f64) -> f64 {
        x.round()
    }
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
mod imp {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline]
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    #[inline]
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    #[inline]
    pub fn asinh(x: f64) -> f64 {
        libm::asinh(x)
    }
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        libm::hypot(x, y)
    }
    #[inline]
    pub fn floor(x: f64) -> f64 {
        libm::floor(x)
    }
    #[inline]
    pub fn round(x: f64) -> f64 {
        libm::round(x)
    }
}

pub(crate) use imp::*;

/// C(n, k) computed exactly in u128, or `None` on overflow.
///
/// Exact for every n <= 128 (the 4*omega <= 128 bit budget of
/// [`crate::fock::FockState`]); gcd reduction keeps the intermediate
/// products within range.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) / i is exact; cancel the denominator first so
        // the temporary product stays near the true magnitude
        let mut numer = (n - k + i) as u128;
        let mut denom = i as u128;
        let g = gcd(numer, denom);
        numer /= g;
        denom /= g;
        let g2 = gcd(acc, denom);
        acc /= g2;
        denom /= g2;
        debug_assert_eq!(denom, 1, "binomial step must divide exactly");
        acc = acc.checked_mul(numer)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// SplitMix64: tiny deterministic generator for reproducible test vectors.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in (-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(8, 4), Some(70));
        assert_eq!(binomial(16, 4), Some(1820));
        assert_eq!(binomial(10, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
    }

    #[test]
    fn binomial_exact_at_bit_budget() {
        // C(128, 64) fits in u128
        let c = binomial(128, 64).unwrap();
        assert!(c > 1u128 << 120);
        // Pascal check at the top
        assert_eq!(
            binomial(128, 64).unwrap(),
            binomial(127, 63).unwrap() + binomial(127, 64).unwrap()
        );
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let x = SplitMix64::new(7).next_signed();
        assert!((-1.0..1.0).contains(&x));
    }
}
